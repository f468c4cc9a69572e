//! Exact scalars and small dense matrices over the rationals.
//!
//! Scalars are [`num_bigint::BigInt`] and [`num_rational::BigRational`];
//! neither can overflow, and `BigRational` keeps itself reduced with a
//! positive denominator. [`ExactMatrix`] is a dense row-major matrix of
//! rationals with checked products, fraction-free elimination (see
//! [`elimination`]) and binary powering under an entry-size ceiling.

mod elimination;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use num_bigint::BigInt;
pub use num_rational::BigRational as Rational;

/// Default ceiling on the bit length of any numerator or denominator
/// produced while powering.
pub const DEFAULT_MAX_ENTRY_BITS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch in {op}: {lhs_rows}x{lhs_cols} vs {rhs_rows}x{rhs_cols}")]
    DimensionMismatch {
        op: &'static str,
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("entry bit length {bits} exceeds the ceiling of {limit} bits")]
    EntryTooLarge { bits: u64, limit: u64 },
    #[error("malformed rational `{0}`")]
    ParseRational(String),
    #[error("malformed matrix: {0}")]
    ParseMatrix(String),
}

pub type Result<T, E = ExactError> = std::result::Result<T, E>;

/// Builds a rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `num/den`. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q`, `p`, with optional sign and surrounding whitespace.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || ExactError::ParseRational(text.to_string());
    let parse_int = |s: &str| -> Result<BigInt> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(parse_int(t)?)),
    }
}

/// Parses a comma-separated list of fractions, e.g. `1/3,2/3,1/4,3/4`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// Bit length of the larger of numerator and denominator.
pub fn rational_bits(q: &Rational) -> u64 {
    q.numer().bits().max(q.denom().bits())
}

/// Least common multiple of the denominators in `values` (1 for an empty slice).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Rescales a nonzero vector by a positive rational so that it has integer
/// entries with gcd 1. Returns the integer vector and the positive factor
/// `s` with `v = s * primitive`. Returns `None` for the zero vector.
pub fn primitive_integer_vector(v: &[Rational]) -> Option<(Vec<BigInt>, Rational)> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let prim: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
    Some((prim, Rational::new(g, den)))
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(ExactError::ParseMatrix(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Elementary matrix unit with a single `1` at (`row`, `col`), zero-based.
    pub fn unit(n: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[row * n + col] = Rational::one();
        m
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| rat(x)));
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ExactError::ParseMatrix("ragged rows".into()));
        }
        let nrows = rows.len();
        Ok(Self {
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        Ok(Self::from_rows(columns.to_vec())?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Rational::is_integer)
    }

    /// Largest bit length of any numerator or denominator.
    pub fn max_entry_bits(&self) -> u64 {
        self.data.iter().map(rational_bits).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "addition")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "subtraction")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn same_shape(&self, rhs: &Self, op: &'static str) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(self.mismatch(rhs, op));
        }
        Ok(())
    }

    fn mismatch(&self, rhs: &Self, op: &'static str) -> ExactError {
        ExactError::DimensionMismatch {
            op,
            lhs_rows: self.rows,
            lhs_cols: self.cols,
            rhs_rows: rhs.rows,
            rhs_cols: rhs.cols,
        }
    }

    /// Exact product `self * rhs`.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(self.mismatch(rhs, "multiplication"));
        }
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut data = Vec::with_capacity(n * m);
        if self.is_integral() && rhs.is_integral() {
            // Integer fast path: no gcd per partial sum.
            for i in 0..n {
                for j in 0..m {
                    let mut acc = BigInt::zero();
                    for t in 0..k {
                        let a = self.data[i * k + t].numer();
                        let b = rhs.data[t * m + j].numer();
                        if !a.is_zero() && !b.is_zero() {
                            acc += a * b;
                        }
                    }
                    data.push(Rational::from_integer(acc));
                }
            }
        } else {
            for i in 0..n {
                for j in 0..m {
                    let mut num = BigInt::zero();
                    let mut den = BigInt::one();
                    for t in 0..k {
                        let a = &self.data[i * k + t];
                        let b = &rhs.data[t * m + j];
                        if a.is_zero() || b.is_zero() {
                            continue;
                        }
                        let pn = a.numer() * b.numer();
                        let pd = a.denom() * b.denom();
                        if pd == den {
                            num += pn;
                        } else {
                            num = num * &pd + pn * &den;
                            den *= pd;
                        }
                    }
                    data.push(Rational::new(num, den));
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch {
                op: "matrix-vector product",
                lhs_rows: self.rows,
                lhs_cols: self.cols,
                rhs_rows: v.len(),
                rhs_cols: 1,
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// `self^k` by left-to-right binary powering; negative `k` powers the
    /// inverse. Aborts once any entry exceeds `max_entry_bits`.
    pub fn pow(&self, k: &BigInt, max_entry_bits: u64) -> Result<Self> {
        self.require_square()?;
        let base = if k.is_negative() {
            self.inverse()?
        } else {
            self.clone()
        };
        let e = k.abs();
        let mut acc = Self::identity(self.rows);
        let check = |m: &Self| -> Result<()> {
            let bits = m.max_entry_bits();
            if bits > max_entry_bits {
                Err(ExactError::EntryTooLarge {
                    bits,
                    limit: max_entry_bits,
                })
            } else {
                Ok(())
            }
        };
        check(&base)?;
        for i in (0..e.bits()).rev() {
            acc = &acc * &acc;
            if e.bit(i) {
                acc = &acc * &base;
            }
            check(&acc)?;
        }
        Ok(acc)
    }

    pub fn pow_i64(&self, k: i64, max_entry_bits: u64) -> Result<Self> {
        self.pow(&BigInt::from(k), max_entry_bits)
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(ExactError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Renders the matrix in the text format `a b c d; e f g h; ...`.
    pub fn to_text(&self) -> String {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Renders the matrix as nested string arrays, one string per entry.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(ToString::to_string).collect())
            .collect()
    }

    pub fn from_string_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s.as_ref())).collect())
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        Self::from_rows(parsed)
    }

    /// Converts entries to `i64` if every entry is an integer that fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|q| q.is_integer().then(|| q.numer().to_i64()).flatten())
                    .collect()
            })
            .collect()
    }
}

impl FromStr for ExactMatrix {
    type Err = ExactError;

    /// Rows separated by `;`, entries by whitespace and/or commas.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(|r| {
                r.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(parse_rational)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(ExactError::ParseMatrix("no rows".into()));
        }
        Self::from_rows(rows)
    }
}

impl fmt::Display for ExactMatrix {
    /// Right-aligned columns, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_string_rows();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{cell:>width$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(deserializer)?;
        Self::from_string_rows(&rows).map_err(D::Error::custom)
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    /// Panics on a dimension mismatch; use [`ExactMatrix::checked_mul`] for
    /// untrusted shapes.
    fn mul(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("matrix product")
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        self.checked_add(rhs).expect("matrix sum")
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &'a ExactMatrix) -> ExactMatrix {
        self.checked_sub(rhs).expect("matrix difference")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;

    fn neg(self) -> ExactMatrix {
        self.scale(&-Rational::one())
    }
}

/// Exact product; errors on a dimension mismatch.
pub fn mat_mul(lhs: &ExactMatrix, rhs: &ExactMatrix) -> Result<ExactMatrix> {
    lhs.checked_mul(rhs)
}

/// Exact inverse; errors on a singular or non-square input.
pub fn mat_inv(m: &ExactMatrix) -> Result<ExactMatrix> {
    m.inverse()
}

/// Exact `k`-th power with the default entry-size ceiling.
pub fn mat_pow(m: &ExactMatrix, k: &BigInt) -> Result<ExactMatrix> {
    m.pow(k, DEFAULT_MAX_ENTRY_BITS)
}

/// Basis of the right nullspace of a (possibly rectangular) matrix.
pub fn kernel(m: &ExactMatrix) -> Vec<Vec<Rational>> {
    m.kernel()
}

/// Serde adapter storing a [`Rational`] as its `p/q` string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

/// Serde adapter storing a `Vec<Rational>` as a list of `p/q` strings.
pub mod rational_vec_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}
