//! Bounded search for root-group witnesses and the translation-vector scan.
//!
//! Conjugators are freely reduced words over `A, A⁻¹, B, B⁻¹`, enumerated by
//! length and then lexicographically in that letter order. Words print with
//! runs collapsed, so the letters `B⁻¹ B⁻¹ B⁻¹` become `B^-3`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{BigInt, ExactError, ExactMatrix, Rational};
use crate::monodromy::{translation_vector, MonodromyError, MonodromyTriple};
use crate::symplectic::{
    change_of_basis, classify_root_element, is_unipotent, Classification, Root, Sign,
    SymplecticBasis, SymplecticError,
};
use crate::words::{eval_word, parse_word, GroupWord, WordEnv, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    Words(#[from] WordError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type Result<T, E = SearchError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Longest conjugator `w` in `w C w⁻¹`.
    pub conj_depth: usize,
    /// Rounds of products, commutators and powers applied to the pool.
    pub comb_depth: usize,
    /// Powers `X^e` use `2 ≤ |e| ≤ max_exponent` (and `e = -1`).
    pub max_exponent: u32,
    /// Candidates with larger entries are dropped and the run is marked
    /// truncated.
    pub max_entry_bits: u64,
    /// Cap on candidates generated in total.
    pub max_candidates: usize,
    /// Keep only witnesses of this sign.
    pub sign: Option<Sign>,
    /// Keep only witnesses in these root groups (empty: all).
    pub roots: Vec<Root>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            conj_depth: 3,
            comb_depth: 0,
            max_exponent: 2,
            max_entry_bits: 4096,
            max_candidates: 100_000,
            sign: None,
            roots: Vec::new(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_entry_bits == 0 || self.max_candidates == 0 {
            return Err(SearchError::Config(
                "entry-bit ceiling and candidate cap must be positive".into(),
            ));
        }
        if self.conj_depth > 12 || self.comb_depth > 4 {
            return Err(SearchError::Config(
                "conjugation depth is limited to 12 and combination depth to 4".into(),
            ));
        }
        Ok(())
    }

    fn accepts(&self, root: Root) -> bool {
        self.sign.is_none_or(|s| root.sign() == s)
            && (self.roots.is_empty() || self.roots.contains(&root))
    }
}

/// A unipotent found by the search, in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub word: String,
    pub matrix: ExactMatrix,
    pub classification: Classification,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub witnesses: Vec<Witness>,
    /// Distinct unipotent elements in the final pool.
    pub pool_size: usize,
    pub candidates_examined: usize,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn base(self) -> &'static str {
        match self {
            Letter::A | Letter::AInv => "A",
            Letter::B | Letter::BInv => "B",
        }
    }

    fn exponent(self) -> i64 {
        match self {
            Letter::A | Letter::B => 1,
            Letter::AInv | Letter::BInv => -1,
        }
    }
}

/// Run-length text of a letter sequence; empty for the empty word.
fn letters_text(letters: &[Letter]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let run = letters[i..].iter().take_while(|&&x| x == l).count();
        let k = l.exponent() * run as i64;
        parts.push(if k == 1 {
            l.base().to_owned()
        } else {
            format!("{}^{k}", l.base())
        });
        i += run;
    }
    parts.join("*")
}

/// Freely reduced words with their values and inverses, shortest first,
/// then lexicographic.
fn enumerate_words(
    a: &ExactMatrix,
    b: &ExactMatrix,
    depth: usize,
) -> Result<Vec<(Vec<Letter>, ExactMatrix, ExactMatrix)>> {
    let (ai, bi) = (a.inverse()?, b.inverse()?);
    let value = |l: Letter| match l {
        Letter::A => a,
        Letter::AInv => &ai,
        Letter::B => b,
        Letter::BInv => &bi,
    };
    let n = a.rows();
    let mut out = vec![(
        Vec::new(),
        ExactMatrix::identity(n),
        ExactMatrix::identity(n),
    )];
    let mut frontier = 0..1;
    for _ in 0..depth {
        let start = out.len();
        for idx in frontier.clone() {
            for l in Letter::ALL {
                let (word, m, mi) = &out[idx];
                if word.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut w = word.clone();
                w.push(l);
                let m2 = m.checked_mul(value(l))?;
                let mi2 = value(l.inverse()).checked_mul(mi)?;
                out.push((w, m2, mi2));
            }
        }
        frontier = start..out.len();
    }
    Ok(out)
}

#[derive(Clone)]
struct Candidate {
    word: GroupWord,
    text: String,
    depth: usize,
    matrix: ExactMatrix,
}

impl Candidate {
    fn order_key(&self) -> (usize, &str) {
        (self.depth, &self.text)
    }
}

/// Keeps one candidate per matrix, preferring the smallest (depth, text).
#[derive(Default)]
struct Pool {
    items: Vec<Candidate>,
    index: HashMap<ExactMatrix, usize>,
}

impl Pool {
    fn insert(&mut self, c: Candidate) {
        match self.index.get(&c.matrix) {
            Some(&i) => {
                if c.order_key() < self.items[i].order_key() {
                    self.items[i] = c;
                }
            }
            None => {
                self.index.insert(c.matrix.clone(), self.items.len());
                self.items.push(c);
            }
        }
    }

    fn sorted(&self) -> Vec<Candidate> {
        let mut v = self.items.clone();
        v.sort_by(|x, y| x.order_key().cmp(&y.order_key()));
        v
    }
}

fn combine(
    x: &Candidate,
    y: &Candidate,
    kind: Combination,
    bits: u64,
) -> Option<std::result::Result<Candidate, ()>> {
    let (word, matrix) = match kind {
        Combination::Product => {
            let w = GroupWord::Product(vec![x.word.clone(), y.word.clone()]);
            (w, x.matrix.checked_mul(&y.matrix).ok()?)
        }
        Combination::Commutator => {
            let w = GroupWord::commutator(x.word.clone(), y.word.clone());
            let xi = x.matrix.inverse().ok()?;
            let yi = y.matrix.inverse().ok()?;
            let m = &(&(&x.matrix * &y.matrix) * &xi) * &yi;
            (w, m)
        }
        Combination::Power(e) => {
            let w = GroupWord::power(x.word.clone(), e);
            match x.matrix.pow(&BigInt::from(e), bits) {
                Ok(m) => (w, m),
                Err(_) => return Some(Err(())),
            }
        }
    };
    if matrix.max_entry_bits() > bits {
        return Some(Err(()));
    }
    if matrix.is_identity() || !is_unipotent(&matrix) {
        return None;
    }
    let depth = x.depth.max(y.depth) + 1;
    Some(Ok(Candidate {
        text: word.to_string(),
        word,
        depth,
        matrix,
    }))
}

#[derive(Clone, Copy)]
enum Combination {
    Product,
    Commutator,
    Power(i64),
}

/// Breadth-first search for single-root unipotents in `⟨A, B⟩`.
///
/// Level 0 is `C`; level `k` adds the conjugates `w C w⁻¹` with `|w| = k`.
/// Each combination round then adds products, commutators and powers of
/// pool members that are unipotent. Output is sorted by (depth, word) and
/// does not depend on thread scheduling.
pub fn search_unipotents(
    triple: &MonodromyTriple,
    basis: &SymplecticBasis,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let to_eps = |m: &ExactMatrix| change_of_basis(m, basis);
    let c_eps = to_eps(&triple.c)?;
    let mut pool = Pool::default();
    let mut examined = 0usize;
    let mut truncated = false;

    for (letters, w, wi) in enumerate_words(&triple.a, &triple.b, cfg.conj_depth)? {
        if examined >= cfg.max_candidates {
            truncated = true;
            break;
        }
        examined += 1;
        let conj = to_eps(&w)?
            .checked_mul(&c_eps)?
            .checked_mul(&to_eps(&wi)?)?;
        let prefix = letters_text(&letters);
        let text = if letters.is_empty() {
            "C".to_owned()
        } else {
            format!("{prefix}*C*{}", letters_text(&inverse_letters(&letters)))
        };
        if conj.max_entry_bits() > cfg.max_entry_bits {
            truncated = true;
            continue;
        }
        pool.insert(Candidate {
            word: parse_word(&text)?,
            text,
            depth: letters.len(),
            matrix: conj,
        });
    }

    for _ in 0..cfg.comb_depth {
        if truncated && examined >= cfg.max_candidates {
            break;
        }
        let members = pool.sorted();
        let mut jobs: Vec<(usize, usize, Combination)> = Vec::new();
        for i in 0..members.len() {
            for e in 2..=i64::from(cfg.max_exponent) {
                jobs.push((i, i, Combination::Power(e)));
                jobs.push((i, i, Combination::Power(-e)));
            }
            for j in 0..members.len() {
                if i != j {
                    jobs.push((i, j, Combination::Product));
                    if i < j {
                        jobs.push((i, j, Combination::Commutator));
                    }
                }
            }
        }
        let budget = cfg.max_candidates.saturating_sub(examined);
        if jobs.len() > budget {
            jobs.truncate(budget);
            truncated = true;
        }
        examined += jobs.len();
        let results: Vec<_> = jobs
            .par_iter()
            .map(|&(i, j, kind)| combine(&members[i], &members[j], kind, cfg.max_entry_bits))
            .collect();
        for r in results.into_iter().flatten() {
            match r {
                Ok(c) => pool.insert(c),
                Err(()) => truncated = true,
            }
        }
    }

    let pool_size = pool.items.len();
    let mut witnesses = Vec::new();
    for c in pool.sorted() {
        let classification = classify_root_element(&c.matrix, &basis.lambda1, &basis.lambda2)?;
        if let Some(root) = classification.root() {
            if cfg.accepts(root) {
                witnesses.push(Witness {
                    word: c.text,
                    matrix: c.matrix,
                    classification,
                    depth: c.depth,
                });
            }
        }
    }
    Ok(SearchOutcome {
        witnesses,
        pool_size,
        candidates_examined: examined,
        truncated,
    })
}

fn inverse_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// Evaluates a witness word over `A`, `B`, `C` and converts it to basis
/// coordinates.
pub fn reevaluate(
    word: &str,
    triple: &MonodromyTriple,
    basis: &SymplecticBasis,
) -> Result<ExactMatrix> {
    let mut env = WordEnv::new();
    env.bind("A", triple.a.clone())?;
    env.bind("B", triple.b.clone())?;
    env.bind("C", triple.c.clone())?;
    let m = eval_word(&parse_word(word)?, &env)?;
    Ok(change_of_basis(&m, basis)?)
}

/// A word `γ` meeting the translation-vector criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SvWitness {
    pub word: String,
    pub gamma: ExactMatrix,
    /// Last coordinate of `γ v`.
    #[serde(with = "crate::exact::rational_string")]
    pub c: Rational,
}

/// Returns the last coordinate `c` of `γ v` when `0 < |c| ≤ 2` and
/// `v, γ⁻¹ v, γ v` are linearly independent.
pub fn sv_check(
    gamma: &ExactMatrix,
    gamma_inv: &ExactMatrix,
    v: &[Rational],
) -> Result<Option<Rational>> {
    let gv = gamma.mul_vec(v)?;
    let c = gv.last().cloned().unwrap_or_default();
    let two = Rational::from_integer(2.into());
    if c == Rational::default() || num_traits::Signed::abs(&c) > two {
        return Ok(None);
    }
    let giv = gamma_inv.mul_vec(v)?;
    let span = ExactMatrix::from_rows(vec![v.to_vec(), giv, gv])?;
    Ok((span.rank() == 3).then_some(c))
}

/// Scans nonempty words of length at most `depth` in length-then-lexicographic order
/// and returns the first satisfying [`sv_check`], with `v = (C - I) e₄`.
pub fn sv_criterion_scan(triple: &MonodromyTriple, depth: usize) -> Result<Option<SvWitness>> {
    if depth > 12 {
        return Err(SearchError::Config("scan depth is limited to 12".into()));
    }
    let v = translation_vector(&triple.c)?.v;
    for (letters, gamma, gamma_inv) in enumerate_words(&triple.a, &triple.b, depth)? {
        if letters.is_empty() {
            continue;
        }
        if let Some(c) = sv_check(&gamma, &gamma_inv, &v)? {
            let word = letters_text(&letters);
            return Ok(Some(SvWitness { word, gamma, c }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_length_text() {
        use Letter::*;
        assert_eq!(letters_text(&[BInv, BInv, BInv]), "B^-3");
        assert_eq!(letters_text(&[A, B, B, AInv]), "A*B^2*A^-1");
        assert_eq!(letters_text(&[]), "");
        assert_eq!(inverse_letters(&[A, B, B]), [BInv, BInv, AInv]);
    }

    #[test]
    fn word_enumeration_is_free_and_ordered() {
        let a = ExactMatrix::from_i64_rows(&[[1, 1], [0, 1]]);
        let b = ExactMatrix::from_i64_rows(&[[1, 0], [1, 1]]);
        let words = enumerate_words(&a, &b, 3).unwrap();
        assert_eq!(words.len(), 1 + 4 + 12 + 36);
        for (letters, m, mi) in &words {
            assert!(letters.windows(2).all(|p| p[1] != p[0].inverse()));
            assert!((m * mi).is_identity());
        }
        let lengths: Vec<_> = words.iter().map(|w| w.0.len()).collect();
        assert!(lengths.windows(2).all(|p| p[0] <= p[1]));
        let twos: Vec<_> = words
            .iter()
            .filter(|w| w.0.len() == 2)
            .map(|w| w.0.clone())
            .collect();
        let mut sorted = twos.clone();
        sorted.sort();
        assert_eq!(twos, sorted);
    }

    #[test]
    fn invalid_config() {
        let cfg = SearchConfig {
            max_candidates: 0,
            ..SearchConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(SearchError::Config(_))));
    }
}
