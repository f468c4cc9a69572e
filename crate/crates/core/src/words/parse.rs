use num_traits::Num;

use super::{GroupWord, Result, WordError};
use crate::exact::BigInt;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(WordError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected `{c}`, found `{found}`")),
                None => self.error(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        let len = self.src[start..]
            .char_indices()
            .find(|&(_, c)| !f(c))
            .map_or(self.src.len() - start, |(i, _)| i);
        self.pos += len;
        &self.src[start..start + len]
    }

    fn word(&mut self) -> Result<GroupWord> {
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            GroupWord::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<GroupWord> {
        let mut w = self.primary()?;
        while self.eat('^') {
            let k = self.exponent()?;
            w = GroupWord::Power(Box::new(w), k);
        }
        Ok(w)
    }

    fn exponent(&mut self) -> Result<BigInt> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return self.error("expected integer exponent");
        }
        let k = BigInt::from_str_radix(digits, 10).expect("ascii digits");
        Ok(if negative { -k } else { k })
    }

    fn primary(&mut self) -> Result<GroupWord> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let x = self.word()?;
                self.expect(',')?;
                let y = self.word()?;
                self.expect(']')?;
                Ok(GroupWord::Commutator(Box::new(x), Box::new(y)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                Ok(GroupWord::Symbol(name.to_owned()))
            }
            Some(c) => self.error(format!("unexpected `{c}`")),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a word. Positions in syntax errors are byte offsets.
pub fn parse_word(text: &str) -> Result<GroupWord> {
    let mut p = Parser { src: text, pos: 0 };
    let w = p.word()?;
    if let Some(c) = p.peek() {
        return p.error(format!("unexpected `{c}` after word"));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> GroupWord {
        GroupWord::symbol(s)
    }

    #[test]
    fn power_then_product() {
        assert_eq!(
            parse_word("A^-1*B").unwrap(),
            GroupWord::Product(vec![GroupWord::power(sym("A"), -1), sym("B")])
        );
    }

    #[test]
    fn commutator() {
        assert_eq!(
            parse_word("[G,E]").unwrap(),
            GroupWord::commutator(sym("G"), sym("E"))
        );
    }

    #[test]
    fn big_exponents_are_exact() {
        let w = parse_word("u^-1152*x^63403237638144").unwrap();
        assert_eq!(
            w,
            GroupWord::Product(vec![
                GroupWord::power(sym("u"), -1152),
                GroupWord::power(sym("x"), 63403237638144i64),
            ])
        );
        let huge = "x^-386983526586624000386983526586624000";
        let GroupWord::Power(_, k) = parse_word(huge).unwrap() else {
            panic!()
        };
        assert_eq!(k.to_string(), "-386983526586624000386983526586624000");
    }

    #[test]
    fn whitespace_and_parens() {
        assert_eq!(
            parse_word("  ( A * B ) ^ 2 * [ A , B^ -1 ]").unwrap(),
            GroupWord::Product(vec![
                GroupWord::power(GroupWord::Product(vec![sym("A"), sym("B")]), 2),
                GroupWord::commutator(sym("A"), GroupWord::power(sym("B"), -1)),
            ])
        );
        assert_eq!(
            parse_word("A^2^3").unwrap(),
            GroupWord::power(GroupWord::power(sym("A"), 2), 3)
        );
        assert_eq!(parse_word("A^+3").unwrap(), GroupWord::power(sym("A"), 3));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let pos = |s: &str| match parse_word(s) {
            Err(WordError::Syntax { position, .. }) => position,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos(""), 0);
        assert_eq!(pos("A*"), 2);
        assert_eq!(pos("A^x"), 2);
        assert_eq!(pos("[A B]"), 3);
        assert_eq!(pos("(A*B"), 4);
        assert_eq!(pos("A B"), 2);
        assert_eq!(pos("A*3"), 2);
    }
}
