//! Group words over named matrices.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! word    := factor ('*' factor)*
//! factor  := primary ('^' exponent)*
//! primary := IDENT | '(' word ')' | '[' word ',' word ']'
//! exponent:= ('+' | '-')? DIGITS
//! ```
//!
//! `^` binds tighter than `*` and chains to the left. `[X,Y]` is `X Y X⁻¹ Y⁻¹`.

mod parse;

use std::fmt;

use indexmap::IndexMap;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{BigInt, ExactError, ExactMatrix, DEFAULT_MAX_ENTRY_BITS};

pub use parse::parse_word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("name `{0}` is already bound")]
    DuplicateName(String),
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("matrix bound to `{0}` is not invertible")]
    NotInvertible(String),
    #[error("bound matrices must be square of a common size; `{name}` is {rows}x{cols}")]
    Shape {
        name: String,
        rows: usize,
        cols: usize,
    },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type Result<T, E = WordError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupWord {
    Symbol(String),
    Product(Vec<GroupWord>),
    Power(Box<GroupWord>, BigInt),
    Commutator(Box<GroupWord>, Box<GroupWord>),
    Inverse(Box<GroupWord>),
}

impl GroupWord {
    pub fn symbol(name: impl Into<String>) -> Self {
        GroupWord::Symbol(name.into())
    }

    pub fn power(base: GroupWord, k: impl Into<BigInt>) -> Self {
        GroupWord::Power(Box::new(base), k.into())
    }

    pub fn commutator(x: GroupWord, y: GroupWord) -> Self {
        GroupWord::Commutator(Box::new(x), Box::new(y))
    }

    pub fn inverse(w: GroupWord) -> Self {
        GroupWord::Inverse(Box::new(w))
    }

    /// Symbols in order of first appearance.
    pub fn symbols(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            GroupWord::Symbol(s) => {
                if !out.contains(&s.as_str()) {
                    out.push(s);
                }
            }
            GroupWord::Product(ws) => ws.iter().for_each(|w| w.collect_symbols(out)),
            GroupWord::Power(w, _) | GroupWord::Inverse(w) => w.collect_symbols(out),
            GroupWord::Commutator(x, y) => {
                x.collect_symbols(out);
                y.collect_symbols(out);
            }
        }
    }

    fn needs_parens_as_factor(&self) -> bool {
        matches!(self, GroupWord::Product(_))
    }

    fn needs_parens_as_base(&self) -> bool {
        matches!(self, GroupWord::Product(_) | GroupWord::Inverse(_))
    }
}

/// Canonical text. `Inverse(w)` prints as `w^-1`, which parses back as a
/// `Power` node.
impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupWord::Symbol(s) => f.write_str(s),
            GroupWord::Product(ws) => {
                for (i, w) in ws.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    if w.needs_parens_as_factor() {
                        write!(f, "({w})")?;
                    } else {
                        write!(f, "{w}")?;
                    }
                }
                Ok(())
            }
            GroupWord::Power(w, k) => {
                if w.needs_parens_as_base() {
                    write!(f, "({w})^{k}")
                } else {
                    write!(f, "{w}^{k}")
                }
            }
            GroupWord::Commutator(x, y) => write!(f, "[{x},{y}]"),
            GroupWord::Inverse(w) => {
                if w.needs_parens_as_base() {
                    write!(f, "({w})^-1")
                } else {
                    write!(f, "{w}^-1")
                }
            }
        }
    }
}

impl std::str::FromStr for GroupWord {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self> {
        parse_word(s)
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Insertion-ordered bindings of names to invertible square matrices.
#[derive(Debug, Clone)]
pub struct WordEnv {
    bindings: IndexMap<String, ExactMatrix>,
    max_entry_bits: u64,
}

impl Default for WordEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl WordEnv {
    pub fn new() -> Self {
        Self::with_max_entry_bits(DEFAULT_MAX_ENTRY_BITS)
    }

    pub fn with_max_entry_bits(max_entry_bits: u64) -> Self {
        WordEnv {
            bindings: IndexMap::new(),
            max_entry_bits,
        }
    }

    pub fn max_entry_bits(&self) -> u64 {
        self.max_entry_bits
    }

    pub fn bind(&mut self, name: &str, m: ExactMatrix) -> Result<()> {
        if !is_identifier(name) {
            return Err(WordError::InvalidName(name.to_owned()));
        }
        if self.bindings.contains_key(name) {
            return Err(WordError::DuplicateName(name.to_owned()));
        }
        let size = self.bindings.values().next().map(ExactMatrix::rows);
        if !m.is_square() || size.is_some_and(|n| n != m.rows()) {
            return Err(WordError::Shape {
                name: name.to_owned(),
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.determinant()?.is_zero() {
            return Err(WordError::NotInvertible(name.to_owned()));
        }
        self.bindings.insert(name.to_owned(), m);
        Ok(())
    }

    /// Evaluates `word` in the current environment and binds the result.
    pub fn define(&mut self, name: &str, word: &GroupWord) -> Result<&ExactMatrix> {
        if self.bindings.contains_key(name) {
            return Err(WordError::DuplicateName(name.to_owned()));
        }
        let value = eval_word(word, self)?;
        self.bind(name, value)?;
        Ok(&self.bindings[name])
    }

    pub fn get(&self, name: &str) -> Option<&ExactMatrix> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ExactMatrix)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    fn dim(&self) -> usize {
        self.bindings.values().next().map_or(0, ExactMatrix::rows)
    }
}

/// Exact value of `w`. Powers use binary exponentiation; every intermediate
/// is checked against the environment's entry-size ceiling.
pub fn eval_word(w: &GroupWord, env: &WordEnv) -> Result<ExactMatrix> {
    let bits = env.max_entry_bits;
    let checked = |m: ExactMatrix| -> Result<ExactMatrix> {
        let b = m.max_entry_bits();
        if b > bits {
            return Err(ExactError::EntryTooLarge {
                bits: b,
                limit: bits,
            }
            .into());
        }
        Ok(m)
    };
    match w {
        GroupWord::Symbol(s) => env
            .get(s)
            .cloned()
            .ok_or_else(|| WordError::Unbound(s.clone())),
        GroupWord::Product(ws) => {
            let mut acc: Option<ExactMatrix> = None;
            for factor in ws {
                let m = eval_word(factor, env)?;
                acc = Some(match acc {
                    None => m,
                    Some(a) => checked(a.checked_mul(&m)?)?,
                });
            }
            Ok(acc.unwrap_or_else(|| ExactMatrix::identity(env.dim())))
        }
        GroupWord::Power(base, k) => {
            let m = eval_word(base, env)?;
            if k.is_zero() {
                return Ok(ExactMatrix::identity(m.rows()));
            }
            if k.is_one() {
                return Ok(m);
            }
            if k.is_negative() && m.determinant()?.is_zero() {
                return Err(ExactError::Singular.into());
            }
            Ok(m.pow(k, bits)?)
        }
        GroupWord::Commutator(x, y) => {
            let x = eval_word(x, env)?;
            let y = eval_word(y, env)?;
            let xi = x.inverse()?;
            let yi = y.inverse()?;
            let xy = checked(x.checked_mul(&y)?)?;
            let xyx = checked(xy.checked_mul(&xi)?)?;
            checked(xyx.checked_mul(&yi)?)
        }
        GroupWord::Inverse(w) => checked(eval_word(w, env)?.inverse()?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn env_ab() -> WordEnv {
        let mut env = WordEnv::new();
        env.bind("A", ExactMatrix::from_i64_rows(&[[1, 1], [0, 1]]))
            .unwrap();
        env.bind("B", ExactMatrix::from_i64_rows(&[[1, 0], [1, 1]]))
            .unwrap();
        env
    }

    #[test]
    fn printer_parenthesizes_nested_products() {
        let w = GroupWord::Product(vec![
            GroupWord::symbol("A"),
            GroupWord::Product(vec![GroupWord::symbol("B"), GroupWord::symbol("C")]),
        ]);
        assert_eq!(w.to_string(), "A*(B*C)");
        assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        let p = GroupWord::power(
            GroupWord::Product(vec![GroupWord::symbol("A"), GroupWord::symbol("B")]),
            -2,
        );
        assert_eq!(p.to_string(), "(A*B)^-2");
        assert_eq!(
            GroupWord::inverse(GroupWord::symbol("A")).to_string(),
            "A^-1"
        );
    }

    #[test]
    fn zero_power_is_identity() {
        let env = env_ab();
        let w = parse_word("A^0").unwrap();
        assert!(eval_word(&w, &env).unwrap().is_identity());
    }

    #[test]
    fn commutator_definition() {
        let env = env_ab();
        let c = eval_word(&parse_word("[A,B]").unwrap(), &env).unwrap();
        let expanded = eval_word(&parse_word("A*B*A^-1*B^-1").unwrap(), &env).unwrap();
        assert_eq!(c, expanded);
        assert_eq!(c, ExactMatrix::from_i64_rows(&[[3, -1], [1, 0]]));
    }

    #[test]
    fn define_chains_names() {
        let mut env = env_ab();
        env.define("G", &parse_word("[A,B]").unwrap()).unwrap();
        let x = env
            .define("x", &parse_word("G^2*A").unwrap())
            .unwrap()
            .clone();
        assert_eq!(x.get(0, 0), &rat(8));
        assert_eq!(
            env.define("x", &parse_word("A").unwrap()),
            Err(WordError::DuplicateName("x".into()))
        );
        assert_eq!(env.names().collect::<Vec<_>>(), ["A", "B", "G", "x"]);
    }

    #[test]
    fn evaluation_errors() {
        let mut env = env_ab();
        assert_eq!(
            eval_word(&parse_word("A*D").unwrap(), &env),
            Err(WordError::Unbound("D".into()))
        );
        assert_eq!(
            env.bind("S", ExactMatrix::from_i64_rows(&[[1, 2], [2, 4]])),
            Err(WordError::NotInvertible("S".into()))
        );
        assert!(matches!(
            env.bind("T", ExactMatrix::identity(3)),
            Err(WordError::Shape { .. })
        ));
        assert_eq!(
            env.bind("1x", ExactMatrix::identity(2)),
            Err(WordError::InvalidName("1x".into()))
        );
        let mut small = WordEnv::with_max_entry_bits(16);
        small
            .bind("A", ExactMatrix::from_i64_rows(&[[2, 1], [1, 1]]))
            .unwrap();
        assert!(matches!(
            eval_word(&parse_word("A^40").unwrap(), &small),
            Err(WordError::Exact(ExactError::EntryTooLarge { .. }))
        ));
    }

    #[test]
    fn symbols_in_first_appearance_order() {
        let w = parse_word("[G,E]*x^-36*E").unwrap();
        assert_eq!(w.symbols(), ["G", "E", "x"]);
    }
}
