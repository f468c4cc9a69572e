//! Levelt generators and the invariant symplectic form.
//!
//! For a parameter pair with polynomials `f`, `g`, the monodromy group is
//! generated by the companion matrices `A` of `f` and `B` of `g`. Their
//! quotient `C = A⁻¹B` differs from the identity only in its last column,
//! so `C` is a transvection with translation vector `v = (C - I) e₄`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{coprime, CycloError, HGParams, IntPolynomial};
use crate::exact::{primitive_integer_vector, BigInt, ExactError, ExactMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial must have degree at least 1")]
    ZeroDegree,
    #[error("f = {f} and g = {g} have a common root")]
    CommonRoot { f: String, g: String },
    #[error("{0}")]
    InvariantViolated(String),
    #[error("invariant antisymmetric forms span a space of dimension {dimension}, expected 1")]
    FormSpaceDimension { dimension: usize },
    #[error("invariant form is degenerate")]
    DegenerateForm,
    #[error("form matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("C - I has rank {rank}, expected 1")]
    TranslationRank { rank: usize },
    #[error(transparent)]
    Params(#[from] CycloError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type Result<T, E = MonodromyError> = std::result::Result<T, E>;

/// Companion matrix of a monic polynomial: ones on the subdiagonal and
/// `(-a₀, …, -a_{n-1})` in the last column.
pub fn companion(p: &IntPolynomial) -> Result<ExactMatrix> {
    let n = p.degree().ok_or(MonodromyError::ZeroDegree)?;
    if n == 0 {
        return Err(MonodromyError::ZeroDegree);
    }
    if !p.is_monic() {
        return Err(MonodromyError::NotMonic(p.to_string()));
    }
    let mut m = ExactMatrix::zeros(n, n);
    for i in 1..n {
        m.set(i, i - 1, Rational::one());
    }
    for i in 0..n {
        m.set(i, n - 1, Rational::from_integer(-p.coeff(i)));
    }
    Ok(m)
}

/// The generators `A`, `B` and the transvection `C = A⁻¹B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyTriple {
    pub f: IntPolynomial,
    pub g: IntPolynomial,
    pub a: ExactMatrix,
    pub b: ExactMatrix,
    pub c: ExactMatrix,
}

impl MonodromyTriple {
    /// Builds the triple from two monic degree-4 polynomials and checks
    /// `det A = det B = 1`, `rank(C - I) = 1` and `(C - I)² = 0`.
    pub fn from_polynomials(f: IntPolynomial, g: IntPolynomial) -> Result<Self> {
        for p in [&f, &g] {
            if p.degree() != Some(HGParams::DEGREE) {
                return Err(MonodromyError::InvariantViolated(format!(
                    "{p} does not have degree {}",
                    HGParams::DEGREE
                )));
            }
        }
        if !coprime(&f, &g) {
            return Err(MonodromyError::CommonRoot {
                f: f.to_string(),
                g: g.to_string(),
            });
        }
        let a = companion(&f)?;
        let b = companion(&g)?;
        let c = a.inverse()?.checked_mul(&b)?;
        let triple = Self { f, g, a, b, c };
        triple.check_invariants()?;
        Ok(triple)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let one = Rational::one();
        if self.a.determinant()? != one || self.b.determinant()? != one {
            return Err(MonodromyError::InvariantViolated(format!(
                "generators must have determinant 1 (f(0) = {}, g(0) = {})",
                self.f.coeff(0),
                self.g.coeff(0)
            )));
        }
        let n = &self.c - &ExactMatrix::identity(self.c.rows());
        let rank = n.rank();
        if rank != 1 {
            return Err(MonodromyError::TranslationRank { rank });
        }
        if !(&n * &n).is_zero() {
            return Err(MonodromyError::InvariantViolated(
                "(C - I)^2 is not zero".into(),
            ));
        }
        Ok(())
    }
}

/// Companion-matrix generators for the given parameters.
pub fn monodromy_generators(params: &HGParams) -> Result<MonodromyTriple> {
    MonodromyTriple::from_polynomials(params.f(), params.g())
}

/// Nondegenerate antisymmetric Gram matrix; `Ω(x, y) = xᵀ Ω y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExactMatrix", into = "ExactMatrix")]
pub struct SymplecticForm {
    gram: ExactMatrix,
}

impl SymplecticForm {
    pub fn new(gram: ExactMatrix) -> Result<Self> {
        gram.require_square()?;
        if gram.transpose() != -&gram {
            return Err(MonodromyError::NotAntisymmetric);
        }
        if gram.determinant()?.is_zero() {
            return Err(MonodromyError::DegenerateForm);
        }
        Ok(Self { gram })
    }

    /// Skips validation. Callers that construct degenerate forms on purpose
    /// (tests of downstream error paths) go through here.
    pub fn new_unchecked(gram: ExactMatrix) -> Self {
        Self { gram }
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let gy = self.gram.mul_vec(y).expect("vector length matches form");
        x.iter()
            .zip(&gy)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// True iff `mᵀ Ω m = Ω`.
    pub fn is_preserved_by(&self, m: &ExactMatrix) -> bool {
        if m.rows() != self.dim() || !m.is_square() {
            return false;
        }
        &(&m.transpose() * &self.gram) * m == self.gram
    }

    /// Gram matrix of the form in the basis given by the columns of `t`,
    /// i.e. `tᵀ Ω t`.
    pub fn in_basis(&self, t: &ExactMatrix) -> ExactMatrix {
        &(&t.transpose() * &self.gram) * t
    }
}

impl TryFrom<ExactMatrix> for SymplecticForm {
    type Error = MonodromyError;
    fn try_from(m: ExactMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<SymplecticForm> for ExactMatrix {
    fn from(f: SymplecticForm) -> Self {
        f.gram
    }
}

/// Result of solving for the invariant form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantForm {
    pub form: SymplecticForm,
    /// Dimension of the space of invariant antisymmetric forms (1 on success).
    pub kernel_dim: usize,
}

/// Index pairs `(i, j)`, `i < j`, parametrizing antisymmetric 4×4 matrices.
fn antisymmetric_slots(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Solves `AᵀMA = M`, `BᵀMB = M` over antisymmetric `M`.
///
/// Antisymmetry is built in: the unknowns are the above-diagonal entries,
/// and each column of the linear map is the pair of residuals
/// `(AᵀEA - E, BᵀEB - E)` for the elementary antisymmetric `E`. The
/// solution is normalized so that `Ω(e₁, e₂) = 1`, falling back to the first
/// nonzero above-diagonal entry in row-major order.
pub fn invariant_form(a: &ExactMatrix, b: &ExactMatrix) -> Result<InvariantForm> {
    a.require_square()?;
    if a.rows() != b.rows() || !b.is_square() {
        return Err(ExactError::DimensionMismatch {
            op: "invariant form",
            lhs_rows: a.rows(),
            lhs_cols: a.cols(),
            rhs_rows: b.rows(),
            rhs_cols: b.cols(),
        }
        .into());
    }
    let n = a.rows();
    let slots = antisymmetric_slots(n);
    let elementary = |&(i, j): &(usize, usize)| {
        let mut e = ExactMatrix::zeros(n, n);
        e.set(i, j, Rational::one());
        e.set(j, i, -Rational::one());
        e
    };
    let (at, bt) = (a.transpose(), b.transpose());
    let mut system = ExactMatrix::zeros(2 * n * n, slots.len());
    for (k, slot) in slots.iter().enumerate() {
        let e = elementary(slot);
        let ra = &(&(&at * &e) * a) - &e;
        let rb = &(&(&bt * &e) * b) - &e;
        for (r, x) in ra.entries().iter().chain(rb.entries()).enumerate() {
            system.set(r, k, x.clone());
        }
    }
    let basis = system.kernel();
    if basis.len() != 1 {
        return Err(MonodromyError::FormSpaceDimension {
            dimension: basis.len(),
        });
    }
    let mut gram = ExactMatrix::zeros(n, n);
    for (x, slot) in basis[0].iter().zip(&slots) {
        gram.set(slot.0, slot.1, x.clone());
        gram.set(slot.1, slot.0, -x.clone());
    }
    let pivot = slots
        .iter()
        .map(|&(i, j)| gram.get(i, j).clone())
        .find(|x| !x.is_zero())
        .expect("kernel vector is nonzero");
    let gram = gram.scale(&pivot.recip());
    Ok(InvariantForm {
        form: SymplecticForm::new(gram)?,
        kernel_dim: 1,
    })
}

/// `v = (C - I) e₄`, stored with its primitive integer direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationVector {
    pub v: Vec<Rational>,
    /// Primitive integer vector with `v = scale * direction`, `scale > 0`.
    pub direction: Vec<BigInt>,
    pub scale: Rational,
}

pub fn translation_vector(c: &ExactMatrix) -> Result<TranslationVector> {
    c.require_square()?;
    let n = c.rows();
    let diff = c - &ExactMatrix::identity(n);
    let rank = diff.rank();
    if rank != 1 {
        return Err(MonodromyError::TranslationRank { rank });
    }
    let v = diff.column(n - 1);
    let (direction, scale) = primitive_integer_vector(&v).ok_or_else(|| {
        MonodromyError::InvariantViolated("C - I vanishes on the last basis vector".into())
    })?;
    Ok(TranslationVector {
        v,
        direction,
        scale,
    })
}

/// Checks `Ω(eᵢ, v) = 0` for `i < n` and `Ω(e_n, v) ≠ 0`. Returns the
/// pairings `Ω(eᵢ, v)` for every `i` alongside the verdict.
pub fn translation_orthogonality(
    form: &SymplecticForm,
    tv: &TranslationVector,
) -> (bool, Vec<Rational>) {
    let n = form.dim();
    let pairings: Vec<Rational> = (0..n)
        .map(|i| {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            form.pair(&e, &tv.v)
        })
        .collect();
    let ok = pairings[..n - 1].iter().all(Zero::is_zero) && !pairings[n - 1].is_zero();
    (ok, pairings)
}
