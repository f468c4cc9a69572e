//! Integer polynomials, cyclotomic polynomials, and the passage between
//! hypergeometric parameters and the polynomials `f`, `g`.
//!
//! A parameter `a/d` in `[0, 1)` stands for the root of unity `exp(2πi a/d)`.
//! A parameter multiset is integral exactly when, for each reduced
//! denominator `d`, every residue coprime to `d` occurs the same number of
//! times `m`; the polynomial is then the product of `Φ_d^m`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{parse_rational_list, BigInt, ExactError, Rational};

/// Largest number of parameters accepted by the internal machinery.
pub const MAX_PARAMETERS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("cyclotomic index must be positive")]
    ZeroIndex,
    #[error("parameters with denominator {denominator} are not Galois-stable: {detail}")]
    NotGaloisStable { denominator: String, detail: String },
    #[error("expected {expected} parameters, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("alpha {alpha} and beta {beta} differ by an integer")]
    CommonParameter { alpha: String, beta: String },
    #[error("malformed polynomial `{0}`")]
    ParsePolynomial(String),
    #[error(transparent)]
    Parse(#[from] ExactError),
}

/// Polynomial with integer coefficients, constant term first. Trailing
/// zeros are always trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] += 1;
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let lead = std::mem::take(&mut rem[i + dd]);
            if lead.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs[..dd].iter().enumerate() {
                rem[i + j] -= &lead * d;
            }
            quot[i] = lead;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient by a monic divisor, or `None` if it does not divide.
    pub fn exact_div_monic(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_monic(divisor);
        r.is_zero().then_some(q)
    }

    /// Comma-separated coefficients, constant term first.
    pub fn to_csv(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Exponents carrying a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    fn to_rational(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }
}

impl FromStr for IntPolynomial {
    type Err = CycloError;

    fn from_str(s: &str) -> Result<Self, CycloError> {
        let coeffs = s
            .split(',')
            .map(|t| BigInt::from_str(t.trim()).map_err(|_| CycloError::ParsePolynomial(s.into())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    /// Human form, highest degree first: `X^4 - 4X^3 + 6X^2 - 4X + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_csv())
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

fn combine(a: &[BigInt], b: &[BigInt], op: impl Fn(&BigInt, &BigInt) -> BigInt) -> IntPolynomial {
    let zero = BigInt::zero();
    let n = a.len().max(b.len());
    IntPolynomial::new(
        (0..n)
            .map(|i| op(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect(),
    )
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: Self) -> IntPolynomial {
        combine(&self.coeffs, &rhs.coeffs, |a, b| a + b)
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: Self) -> IntPolynomial {
        combine(&self.coeffs, &rhs.coeffs, |a, b| a - b)
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: Self) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// The `d`-th cyclotomic polynomial, via `X^d - 1 = ∏_{e | d} Φ_e`.
pub fn cyclotomic(d: u64) -> Result<IntPolynomial, CycloError> {
    if d == 0 {
        return Err(CycloError::ZeroIndex);
    }
    let divs = divisors(d);
    let mut memo: BTreeMap<u64, IntPolynomial> = BTreeMap::new();
    for &e in &divs {
        let mut p = IntPolynomial::x_pow_minus_one(e as usize);
        for (&k, phi) in memo.iter().filter(|(k, _)| e % **k == 0) {
            debug_assert!(k < e);
            p = p
                .exact_div_monic(phi)
                .expect("cyclotomic factor divides X^e - 1");
        }
        memo.insert(e, p);
    }
    Ok(memo.remove(&d).expect("d divides itself"))
}

/// Reduces `q` into `[0, 1)`.
pub fn normalize_parameter(q: &Rational) -> Rational {
    q - q.floor()
}

/// Builds `∏ (X - exp(2πi θ))` over the given parameters, which must form
/// a Galois-stable multiset.
pub fn poly_from_params(roots: &[Rational]) -> Result<IntPolynomial, CycloError> {
    if roots.len() > MAX_PARAMETERS {
        return Err(CycloError::WrongCount {
            expected: MAX_PARAMETERS,
            got: roots.len(),
        });
    }
    Ok(orders_from_params(roots)?.to_polynomial())
}

fn orders_from_params(roots: &[Rational]) -> Result<CyclotomicFactorization, CycloError> {
    let mut by_den: BTreeMap<u64, BTreeMap<u64, u32>> = BTreeMap::new();
    for q in roots {
        let q = normalize_parameter(q);
        let (Some(d), Some(n)) = (q.denom().to_u64(), q.numer().to_u64()) else {
            return Err(CycloError::NotGaloisStable {
                denominator: q.denom().to_string(),
                detail: "denominator out of range".into(),
            });
        };
        *by_den.entry(d).or_default().entry(n).or_default() += 1;
    }
    let mut orders = BTreeMap::new();
    for (d, residues) in by_den {
        let units: Vec<u64> = (0..d).filter(|k| k.gcd(&d) == 1).collect();
        let m = residues.values().copied().next().unwrap_or(0);
        for k in &units {
            let got = residues.get(k).copied().unwrap_or(0);
            if got != m {
                return Err(CycloError::NotGaloisStable {
                    denominator: d.to_string(),
                    detail: format!("residue {k}/{d} occurs {got} times, expected {m}"),
                });
            }
        }
        orders.insert(d, m);
    }
    Ok(CyclotomicFactorization { orders })
}

/// A factorization `p = ∏ Φ_d^{m_d}`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CyclotomicFactorization {
    orders: BTreeMap<u64, u32>,
}

impl CyclotomicFactorization {
    pub fn from_orders(orders: BTreeMap<u64, u32>) -> Self {
        Self {
            orders: orders.into_iter().filter(|(_, m)| *m > 0).collect(),
        }
    }

    /// Multiplicity of each order `d`.
    pub fn orders(&self) -> &BTreeMap<u64, u32> {
        &self.orders
    }

    pub fn to_polynomial(&self) -> IntPolynomial {
        self.orders
            .iter()
            .fold(IntPolynomial::one(), |acc, (&d, &m)| {
                &acc * &cyclotomic(d).expect("orders are positive").pow(m)
            })
    }

    /// Parameters in the conventional listing order: denominators ascending,
    /// each primitive residue repeated by its multiplicity.
    pub fn parameters(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for (&d, &m) in &self.orders {
            for k in (0..d).filter(|k| k.gcd(&d) == 1) {
                for _ in 0..m {
                    out.push(Rational::new(BigInt::from(k), BigInt::from(d)));
                }
            }
        }
        out
    }

    pub fn shares_order_with(&self, other: &Self) -> bool {
        self.orders.keys().any(|d| other.orders.contains_key(d))
    }
}

/// Writes a monic polynomial as a product of cyclotomic polynomials by trial
/// division against every `Φ_d` with `φ(d) ≤ deg p`. Returns `None` when `p`
/// is not such a product.
pub fn factor_cyclotomic(p: &IntPolynomial) -> Option<CyclotomicFactorization> {
    if !p.is_monic() {
        return None;
    }
    let n = p.degree()? as u64;
    // φ(d) ≥ sqrt(d/2), so φ(d) ≤ n forces d ≤ 2n².
    let candidates = (1..=2 * n * n + 2).filter(|&d| euler_phi(d) <= n);
    let mut rest = p.clone();
    let mut orders = BTreeMap::new();
    for d in candidates {
        let phi = cyclotomic(d).ok()?;
        while let Some(q) = rest.exact_div_monic(&phi) {
            rest = q;
            *orders.entry(d).or_insert(0) += 1;
        }
    }
    (rest == IntPolynomial::one()).then_some(CyclotomicFactorization { orders })
}

fn rational_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap().clone() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Degree of `gcd(f, g)` in `Q[X]`; `None` when both are zero.
pub fn gcd_degree(f: &IntPolynomial, g: &IntPolynomial) -> Option<usize> {
    let mut a = f.to_rational();
    let mut b = g.to_rational();
    while !b.is_empty() {
        let r = rational_rem(&a, &b);
        a = std::mem::replace(&mut b, r);
    }
    a.len().checked_sub(1)
}

/// True iff `f` and `g` have no common complex root.
pub fn coprime(f: &IntPolynomial, g: &IntPolynomial) -> bool {
    gcd_degree(f, g) == Some(0)
}

/// gcd of all positive exponents carrying a nonzero coefficient across the
/// given polynomials (0 when only constants are present).
pub fn exponent_support_gcd<'a>(polys: impl IntoIterator<Item = &'a IntPolynomial>) -> u64 {
    polys
        .into_iter()
        .flat_map(|p| p.support().collect::<Vec<_>>())
        .fold(0u64, |acc, e| acc.gcd(&(e as u64)))
}

/// True iff `p` is not of the form `h(X^k)` for any `k ≥ 2`. Constants are
/// trivially of that form and count as imprimitive.
pub fn is_individually_primitive(p: &IntPolynomial) -> bool {
    exponent_support_gcd([p]) == 1
}

/// Hypergeometric parameters `(α; β)`, normalized into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGParams {
    #[serde(with = "crate::exact::rational_vec_string")]
    alpha: Vec<Rational>,
    #[serde(with = "crate::exact::rational_vec_string")]
    beta: Vec<Rational>,
}

impl HGParams {
    pub const DEGREE: usize = 4;

    /// Validates count, Galois stability of both lists, and that no `α_j - β_k`
    /// is an integer.
    pub fn new(alpha: Vec<Rational>, beta: Vec<Rational>) -> Result<Self, CycloError> {
        for list in [&alpha, &beta] {
            if list.len() != Self::DEGREE {
                return Err(CycloError::WrongCount {
                    expected: Self::DEGREE,
                    got: list.len(),
                });
            }
        }
        let alpha: Vec<Rational> = alpha.iter().map(normalize_parameter).collect();
        let beta: Vec<Rational> = beta.iter().map(normalize_parameter).collect();
        orders_from_params(&alpha)?;
        orders_from_params(&beta)?;
        for a in &alpha {
            if let Some(b) = beta.iter().find(|b| *b == a) {
                return Err(CycloError::CommonParameter {
                    alpha: a.to_string(),
                    beta: b.to_string(),
                });
            }
        }
        Ok(Self { alpha, beta })
    }

    /// Parses the comma-separated fraction format, e.g. `1/3,2/3,1/4,3/4`.
    pub fn parse(alpha: &str, beta: &str) -> Result<Self, CycloError> {
        Self::new(parse_rational_list(alpha)?, parse_rational_list(beta)?)
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn f(&self) -> IntPolynomial {
        poly_from_params(&self.alpha).expect("validated on construction")
    }

    pub fn g(&self) -> IntPolynomial {
        poly_from_params(&self.beta).expect("validated on construction")
    }
}

/// Formats a parameter list as `1/3,2/3,1/4,3/4`.
pub fn format_params(params: &[Rational]) -> String {
    params
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, rat};

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap(), poly(&[-1, 1]));
        assert_eq!(cyclotomic(4).unwrap(), poly(&[1, 0, 1]));
        assert_eq!(cyclotomic(6).unwrap(), poly(&[1, -1, 1]));
        assert_eq!(cyclotomic(8).unwrap(), poly(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic(12).unwrap(), poly(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(0), Err(CycloError::ZeroIndex));
    }

    #[test]
    fn phi_4_matches_quotient_oracle() {
        let q = poly(&[-1, 0, 0, 0, 1])
            .exact_div_monic(&poly(&[-1, 0, 1]))
            .unwrap();
        assert_eq!(cyclotomic(4).unwrap(), q);
    }

    #[test]
    fn polynomials_from_parameters() {
        let zero4 = vec![rat(0); 4];
        assert_eq!(poly_from_params(&zero4).unwrap(), poly(&[1, -4, 6, -4, 1]));
        let b11 = [frac(1, 3), frac(2, 3), frac(1, 4), frac(3, 4)];
        assert_eq!(poly_from_params(&b11).unwrap(), poly(&[1, 1, 2, 1, 1]));
        let b8 = [frac(1, 3), frac(2, 3), frac(1, 6), frac(5, 6)];
        assert_eq!(poly_from_params(&b8).unwrap(), poly(&[1, 0, 1, 0, 1]));
        // parameters are periodic
        let shifted = [frac(4, 3), frac(-1, 3), frac(5, 4), frac(-1, 4)];
        assert_eq!(poly_from_params(&shifted).unwrap(), poly(&[1, 1, 2, 1, 1]));
    }

    #[test]
    fn non_galois_stable_is_rejected() {
        let bad = [frac(1, 3), rat(0), rat(0), rat(0)];
        assert!(matches!(
            poly_from_params(&bad),
            Err(CycloError::NotGaloisStable { .. })
        ));
        let uneven = [frac(1, 4), frac(1, 4), frac(3, 4), rat(0)];
        assert!(poly_from_params(&uneven).is_err());
    }

    #[test]
    fn factorizations() {
        let f = factor_cyclotomic(&poly(&[1, 0, 2, 0, 1])).unwrap();
        assert_eq!(f.orders(), &BTreeMap::from([(4, 2)]));
        assert_eq!(
            f.parameters(),
            vec![frac(1, 4), frac(1, 4), frac(3, 4), frac(3, 4)]
        );
        let f = factor_cyclotomic(&poly(&[1, -4, 6, -4, 1])).unwrap();
        assert_eq!(f.orders(), &BTreeMap::from([(1, 4)]));
        let f = factor_cyclotomic(&poly(&[1, 1, 1, 1, 1])).unwrap();
        assert_eq!(f.orders(), &BTreeMap::from([(5, 1)]));
        assert_eq!(
            f.parameters(),
            vec![frac(1, 5), frac(2, 5), frac(3, 5), frac(4, 5)]
        );
        assert!(factor_cyclotomic(&poly(&[1, 1, 1, 1, 2])).is_none());
        assert!(factor_cyclotomic(&poly(&[2, 0, 1])).is_none());
        assert!(factor_cyclotomic(&poly(&[1, 0, 2])).is_none());
    }

    #[test]
    fn coprimality() {
        let f = poly(&[1, -4, 6, -4, 1]);
        assert!(coprime(&f, &poly(&[1, 0, 1, 0, 1])));
        assert!(!coprime(&f, &f));
        assert!(!coprime(&poly(&[1, -2, 1]), &poly(&[-1, 0, 1])));
        assert!(coprime(&poly(&[3]), &f));
        assert!(!coprime(&IntPolynomial::zero(), &IntPolynomial::zero()));
    }

    #[test]
    fn primitivity_flags() {
        assert!(is_individually_primitive(&poly(&[1, -4, 6, -4, 1])));
        assert!(!is_individually_primitive(&poly(&[1, 0, 1, 0, 1])));
        assert!(is_individually_primitive(&poly(&[1, 1, 2, 1, 1])));
        assert!(!is_individually_primitive(&poly(&[5])));
        assert_eq!(
            exponent_support_gcd([&poly(&[1, 0, 1, 0, 1]), &poly(&[1, 0, 0, 0, 1])]),
            2
        );
    }

    #[test]
    fn display_and_csv() {
        let f = poly(&[1, -4, 6, -4, 1]);
        assert_eq!(f.to_string(), "X^4 - 4X^3 + 6X^2 - 4X + 1");
        assert_eq!(poly(&[0, -5, 4, -5]).to_string(), "-5X^3 + 4X^2 - 5X");
        assert_eq!(f.to_csv(), "1,-4,6,-4,1");
        assert_eq!("1,-4,6,-4,1".parse::<IntPolynomial>().unwrap(), f);
        assert_eq!("1, 0, 0".parse::<IntPolynomial>().unwrap(), poly(&[1]));
        assert!("1,x".parse::<IntPolynomial>().is_err());
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn hg_params_validation() {
        let p = HGParams::parse("0,0,0,0", "1/3,2/3,1/4,3/4").unwrap();
        assert_eq!(p.g(), poly(&[1, 1, 2, 1, 1]));
        assert!(matches!(
            HGParams::parse("0,0,0,0", "1/3,1/3,1/2,1/2"),
            Err(CycloError::NotGaloisStable { .. })
        ));
        assert!(matches!(
            HGParams::parse("0,0,1/2,1/2", "1/2,1/2,1/3,2/3"),
            Err(CycloError::CommonParameter { .. })
        ));
        assert!(matches!(
            HGParams::parse("0,0,0", "1/3,2/3,1/4,3/4"),
            Err(CycloError::WrongCount { .. })
        ));
        assert!(HGParams::parse("0,0,0,0", "1/3,2/3,1/4,x").is_err());
    }
}
