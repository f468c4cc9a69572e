//! Symplectic bases, root-group classification and the unipotent radical.
//!
//! Coordinates are taken in an ordered basis `(ε₁, ε₂, ε₂*, ε₁*)` in which
//! the form is
//!
//! ```text
//!     0    0    0   λ₁
//!     0    0   λ₂    0
//!     0  -λ₂    0    0
//!   -λ₁    0    0    0
//! ```
//!
//! The diagonal torus is `diag(t₁, t₂, t₂⁻¹, t₁⁻¹)`, so the matrix unit
//! `E_ij` has weight `d_i / d_j`. Upper-triangular units carry the positive
//! roots and lower-triangular ones the negative roots.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{primitive_integer_vector, ExactError, ExactMatrix, Rational};
use crate::monodromy::{SymplecticForm, TranslationVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("form is degenerate on the required complement")]
    DegenerateForm,
    #[error("basis violates pairing constraints: {}", format_violations(.0))]
    PairingViolated(Vec<PairingViolation>),
    #[error("basis vectors do not span the space")]
    NotSpanning,
    #[error("expected 4 vectors of length 4")]
    WrongShape,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("element {index} is not {sign} unipotent triangular")]
    NotTriangular { index: usize, sign: Sign },
    #[error("logarithm of element {index} is not in the symplectic Lie algebra")]
    NotSymplectic { index: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn format_violations(v: &[PairingViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// One failed pairing constraint of a candidate basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingViolation {
    pub pair: &'static str,
    pub value: Rational,
    /// True when the constraint requires a nonzero value (λ₁, λ₂).
    pub expected_nonzero: bool,
}

impl fmt::Display for PairingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expected_nonzero {
            write!(f, "Ω{} = 0 but must be nonzero", self.pair)
        } else {
            write!(f, "Ω{} = {} but must be 0", self.pair, self.value)
        }
    }
}

pub type Result<T, E = SymplecticError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "positive" => Ok(Sign::Positive),
            "negative" => Ok(Sign::Negative),
            other => Err(format!("unknown sign `{other}`")),
        }
    }
}

/// The eight roots of Sp₄ relative to the diagonal torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Root {
    #[serde(rename = "+2e1")]
    PlusTwoE1,
    #[serde(rename = "+(e1+e2)")]
    PlusE1PlusE2,
    #[serde(rename = "+(e1-e2)")]
    PlusE1MinusE2,
    #[serde(rename = "+2e2")]
    PlusTwoE2,
    #[serde(rename = "-2e1")]
    MinusTwoE1,
    #[serde(rename = "-(e1+e2)")]
    MinusE1PlusE2,
    #[serde(rename = "-(e1-e2)")]
    MinusE1MinusE2,
    #[serde(rename = "-2e2")]
    MinusTwoE2,
}

impl Root {
    pub const ALL: [Root; 8] = [
        Root::PlusTwoE1,
        Root::PlusE1PlusE2,
        Root::PlusE1MinusE2,
        Root::PlusTwoE2,
        Root::MinusTwoE1,
        Root::MinusE1PlusE2,
        Root::MinusE1MinusE2,
        Root::MinusTwoE2,
    ];

    pub fn sign(self) -> Sign {
        match self {
            Root::PlusTwoE1 | Root::PlusE1PlusE2 | Root::PlusE1MinusE2 | Root::PlusTwoE2 => {
                Sign::Positive
            }
            _ => Sign::Negative,
        }
    }

    pub fn of_sign(sign: Sign) -> [Root; 4] {
        match sign {
            Sign::Positive => [
                Root::PlusTwoE1,
                Root::PlusE1PlusE2,
                Root::PlusE1MinusE2,
                Root::PlusTwoE2,
            ],
            Sign::Negative => [
                Root::MinusTwoE1,
                Root::MinusE1PlusE2,
                Root::MinusE1MinusE2,
                Root::MinusTwoE2,
            ],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Root::PlusTwoE1 => "+2e1",
            Root::PlusE1PlusE2 => "+(e1+e2)",
            Root::PlusE1MinusE2 => "+(e1-e2)",
            Root::PlusTwoE2 => "+2e2",
            Root::MinusTwoE1 => "-2e1",
            Root::MinusE1PlusE2 => "-(e1+e2)",
            Root::MinusE1MinusE2 => "-(e1-e2)",
            Root::MinusTwoE2 => "-2e2",
        }
    }

    /// Zero-based matrix positions of the root space: the leading entry
    /// first, then the paired entry for the short roots.
    pub fn positions(self) -> &'static [(usize, usize)] {
        match self {
            Root::PlusTwoE1 => &[(0, 3)],
            Root::PlusTwoE2 => &[(1, 2)],
            Root::PlusE1MinusE2 => &[(0, 1), (2, 3)],
            Root::PlusE1PlusE2 => &[(0, 2), (1, 3)],
            Root::MinusTwoE1 => &[(3, 0)],
            Root::MinusTwoE2 => &[(2, 1)],
            Root::MinusE1MinusE2 => &[(1, 0), (3, 2)],
            Root::MinusE1PlusE2 => &[(2, 0), (3, 1)],
        }
    }

    /// For a short root with `N = a·E + b·E'`, the ratio `b / a` forced by
    /// `Nᵀ J + J N = 0`. `None` for long roots.
    pub fn paired_ratio(self, lambda1: &Rational, lambda2: &Rational) -> Option<Rational> {
        match self {
            // b λ₂ = -a λ₁
            Root::PlusE1MinusE2 => Some(-(lambda1 / lambda2)),
            // b λ₂ = a λ₁
            Root::PlusE1PlusE2 => Some(lambda1 / lambda2),
            // b λ₁ = -a λ₂
            Root::MinusE1MinusE2 => Some(-(lambda2 / lambda1)),
            // b λ₁ = a λ₂
            Root::MinusE1PlusE2 => Some(lambda2 / lambda1),
            _ => None,
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A single-root unipotent `I + a·X_root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootElement {
    pub root: Root,
    /// Coefficient of the leading matrix unit of the root space.
    #[serde(with = "crate::exact::rational_string")]
    pub parameter: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Root(RootElement),
    NotSingleRoot,
}

impl Classification {
    pub fn root(&self) -> Option<Root> {
        match self {
            Classification::Root(r) => Some(r.root),
            Classification::NotSingleRoot => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Root(r) => write!(f, "{} (parameter {})", r.root, r.parameter),
            Classification::NotSingleRoot => f.write_str("not a single root element"),
        }
    }
}

/// Ordered basis `(ε₁, ε₂, ε₂*, ε₁*)` with `λᵢ = Ω(εᵢ, εᵢ*)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub eps1: Vec<Rational>,
    pub eps2: Vec<Rational>,
    pub eps2s: Vec<Rational>,
    pub eps1s: Vec<Rational>,
    pub lambda1: Rational,
    pub lambda2: Rational,
}

impl SymplecticBasis {
    pub fn vectors(&self) -> [&Vec<Rational>; 4] {
        [&self.eps1, &self.eps2, &self.eps2s, &self.eps1s]
    }

    /// Change-of-basis matrix with the basis vectors as columns.
    pub fn matrix(&self) -> ExactMatrix {
        let cols: Vec<Vec<Rational>> = self.vectors().into_iter().cloned().collect();
        ExactMatrix::from_columns(&cols).expect("four vectors of equal length")
    }

    /// The form's Gram matrix in this basis.
    pub fn gram(&self) -> ExactMatrix {
        let (l1, l2) = (self.lambda1.clone(), self.lambda2.clone());
        let z = Rational::zero;
        ExactMatrix::from_rows(vec![
            vec![z(), z(), z(), l1.clone()],
            vec![z(), z(), l2.clone(), z()],
            vec![z(), -l2, z(), z()],
            vec![-l1, z(), z(), z()],
        ])
        .expect("4x4")
    }

    pub fn form(&self) -> SymplecticForm {
        SymplecticForm::new_unchecked(self.gram())
    }
}

/// Checks every pairing constraint of a candidate basis and computes λ₁, λ₂.
/// All violations are reported together.
pub fn verify_basis(form: &SymplecticForm, candidate: &[Vec<Rational>]) -> Result<SymplecticBasis> {
    if candidate.len() != 4 || candidate.iter().any(|v| v.len() != form.dim()) || form.dim() != 4 {
        return Err(SymplecticError::WrongShape);
    }
    let [e1, e2, e2s, e1s] = [&candidate[0], &candidate[1], &candidate[2], &candidate[3]];
    let lambda1 = form.pair(e1, e1s);
    let lambda2 = form.pair(e2, e2s);
    let mut violations = Vec::new();
    for (pair, value) in [("(ε1,ε1*)", &lambda1), ("(ε2,ε2*)", &lambda2)] {
        if value.is_zero() {
            violations.push(PairingViolation {
                pair,
                value: value.clone(),
                expected_nonzero: true,
            });
        }
    }
    for (pair, x, y) in [
        ("(ε1,ε2)", e1, e2),
        ("(ε1,ε2*)", e1, e2s),
        ("(ε2,ε1*)", e2, e1s),
        ("(ε2*,ε1*)", e2s, e1s),
    ] {
        let value = form.pair(x, y);
        if !value.is_zero() {
            violations.push(PairingViolation {
                pair,
                value,
                expected_nonzero: false,
            });
        }
    }
    if !violations.is_empty() {
        return Err(SymplecticError::PairingViolated(violations));
    }
    let basis = SymplecticBasis {
        eps1: e1.clone(),
        eps2: e2.clone(),
        eps2s: e2s.clone(),
        eps1s: e1s.clone(),
        lambda1,
        lambda2,
    };
    // Six vanishing/nonvanishing pairings already force independence for a
    // nondegenerate form; this also catches degenerate forms.
    if basis.matrix().determinant()?.is_zero() {
        return Err(SymplecticError::NotSpanning);
    }
    Ok(basis)
}

fn standard_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); n];
    e[i] = Rational::one();
    e
}

fn primitive(v: &[Rational]) -> Option<Vec<Rational>> {
    primitive_integer_vector(v).map(|(p, _)| p.into_iter().map(Rational::from_integer).collect())
}

/// Symplectic Gram–Schmidt seeded by the translation vector.
///
/// `ε₂` is the primitive direction of `v`; `ε₂*` is the first standard
/// vector (trying `e₄` first) pairing nontrivially with `ε₂`. The remaining
/// standard vectors, in index order, are projected into the complement of
/// `span{ε₂, ε₂*}`; the first nonzero projection gives `ε₁` and the first
/// one pairing nontrivially with it gives `ε₁*`. Every vector is made
/// primitive integral.
pub fn build_basis(form: &SymplecticForm, tv: &TranslationVector) -> Result<SymplecticBasis> {
    let n = form.dim();
    if n != 4 || tv.v.len() != n {
        return Err(SymplecticError::WrongShape);
    }
    let eps2 = primitive(&tv.v).ok_or(SymplecticError::DegenerateForm)?;
    let eps2s = [n - 1, 0, 1, 2]
        .into_iter()
        .map(|i| standard_vector(n, i))
        .find(|e| !form.pair(&eps2, e).is_zero())
        .ok_or(SymplecticError::DegenerateForm)?;
    let lambda = form.pair(&eps2, &eps2s);
    let project = |x: &[Rational]| -> Vec<Rational> {
        // x' = x - (Ω(x, ε₂*)/λ) ε₂ + (Ω(x, ε₂)/λ) ε₂*
        let a = form.pair(x, &eps2s) / &lambda;
        let b = form.pair(x, &eps2) / &lambda;
        x.iter()
            .zip(eps2.iter().zip(&eps2s))
            .map(|(xi, (p, q))| xi - &a * p + &b * q)
            .collect()
    };
    let projections: Vec<Vec<Rational>> = (0..n)
        .filter_map(|i| primitive(&project(&standard_vector(n, i))))
        .collect();
    let eps1 = projections
        .first()
        .cloned()
        .ok_or(SymplecticError::DegenerateForm)?;
    let eps1s = projections
        .iter()
        .find(|p| !form.pair(&eps1, p).is_zero())
        .cloned()
        .ok_or(SymplecticError::DegenerateForm)?;
    let basis = verify_basis(form, &[eps1, eps2, eps2s, eps1s]);
    debug_assert!(basis.is_ok(), "Gram-Schmidt output must verify");
    basis
}

/// `T⁻¹ m T`, with `T` holding the basis vectors as columns.
pub fn change_of_basis(m: &ExactMatrix, basis: &SymplecticBasis) -> Result<ExactMatrix> {
    let t = basis.matrix();
    let ti = t.inverse()?;
    Ok(ti.checked_mul(m)?.checked_mul(&t)?)
}

/// True iff `mᵀ Ω m = Ω`.
pub fn is_symplectic(m: &ExactMatrix, form: &SymplecticForm) -> bool {
    form.is_preserved_by(m)
}

pub fn is_unipotent(m: &ExactMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m - &ExactMatrix::identity(m.rows());
    let mut p = n.clone();
    for _ in 1..m.rows() {
        p = &p * &n;
    }
    p.is_zero()
}

/// Identifies `u` (in ε-coordinates) as a single root-group element.
///
/// With `N = u - I`, the long roots have one nonzero entry and the short
/// roots two, related by the ratio from [`Root::paired_ratio`]. Anything
/// else, including a short-root pattern with the wrong ratio, is
/// [`Classification::NotSingleRoot`].
pub fn classify_root_element(
    u: &ExactMatrix,
    lambda1: &Rational,
    lambda2: &Rational,
) -> Result<Classification> {
    if u.rows() != 4 || !is_unipotent(u) {
        return Err(SymplecticError::NotUnipotent);
    }
    let n = u - &ExactMatrix::identity(4);
    let support: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&(i, j)| !n.get(i, j).is_zero())
        .collect();
    for root in Root::ALL {
        let positions = root.positions();
        if support.iter().any(|p| !positions.contains(p)) {
            continue;
        }
        let a = n.get(positions[0].0, positions[0].1).clone();
        if a.is_zero() {
            continue;
        }
        if let Some(ratio) = root.paired_ratio(lambda1, lambda2) {
            let (i, j) = positions[1];
            if *n.get(i, j) != &a * ratio {
                continue;
            }
        }
        return Ok(Classification::Root(RootElement { root, parameter: a }));
    }
    Ok(Classification::NotSingleRoot)
}

/// `log(I + N) = N - N²/2 + N³/3` for `N⁴ = 0`.
pub fn unipotent_log(u: &ExactMatrix) -> Result<ExactMatrix> {
    if u.rows() != 4 || !is_unipotent(u) {
        return Err(SymplecticError::NotUnipotent);
    }
    let n = u - &ExactMatrix::identity(4);
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let half = Rational::new(1.into(), 2.into());
    let third = Rational::new(1.into(), 3.into());
    Ok(&(&n - &n2.scale(&half)) + &n3.scale(&third))
}

fn is_strictly_triangular(m: &ExactMatrix, sign: Sign) -> bool {
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| {
            let allowed = match sign {
                Sign::Positive => j > i,
                Sign::Negative => j < i,
            };
            allowed || m.get(i, j).is_zero()
        })
    })
}

/// True iff the logarithms of `elements` span the 4-dimensional Lie algebra
/// of the unipotent radical of the requested sign.
///
/// Each element must be unipotent triangular of that sign, and its logarithm
/// `L` must satisfy `Lᵀ J + J L = 0` for the ε-basis Gram matrix `J`.
pub fn spans_unipotent_radical(
    elements: &[ExactMatrix],
    sign: Sign,
    lambda1: &Rational,
    lambda2: &Rational,
) -> Result<bool> {
    let j = SymplecticBasis {
        eps1: vec![],
        eps2: vec![],
        eps2s: vec![],
        eps1s: vec![],
        lambda1: lambda1.clone(),
        lambda2: lambda2.clone(),
    }
    .gram();
    let mut logs = Vec::with_capacity(elements.len());
    for (index, u) in elements.iter().enumerate() {
        if u.rows() != 4 || !u.is_square() {
            return Err(SymplecticError::NotTriangular { index, sign });
        }
        let l = u - &ExactMatrix::identity(4);
        if !is_strictly_triangular(&l, sign) {
            return Err(SymplecticError::NotTriangular { index, sign });
        }
        let log = unipotent_log(u)?;
        if !(&(&log.transpose() * &j) + &(&j * &log)).is_zero() {
            return Err(SymplecticError::NotSymplectic { index });
        }
        logs.push(log.entries().to_vec());
    }
    if logs.is_empty() {
        return Ok(false);
    }
    let stacked = ExactMatrix::from_rows(logs)?;
    Ok(stacked.rank() == 4)
}
