//! Fraction-free (Bareiss) elimination.
//!
//! Rows are first cleared of denominators (row scaling changes neither the
//! row space nor the kernel), then eliminated over the integers with the
//! Bareiss update `(p * a_ij - a_ic * a_rj) / prev`, where the division is
//! exact. Pivots are chosen as the first nonzero entry scanning columns left
//! to right and rows top to bottom, so results are reproducible.

use num_traits::{One, Zero};

use super::{common_denominator, BigInt, ExactError, ExactMatrix, Rational, Result};

/// Integer echelon form produced by [`bareiss`].
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

/// Clears denominators row by row. Returns the integer rows and the
/// per-row scale factors.
fn integer_rows(m: &ExactMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows());
    let mut scales = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let row = m.row(r);
        let d = common_denominator(row);
        rows.push(row.iter().map(|q| (q * &d).to_integer()).collect());
        scales.push(d);
    }
    (rows, scales)
}

fn bareiss(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let num = pivot * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                row[j] = num / &prev;
            }
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows,
        pivots,
        swaps,
    }
}

/// Solves the upper-triangular system given by the echelon rows for the
/// pivot unknowns, with the free unknowns fixed to `free_values`.
fn back_substitute(
    ech: &Echelon,
    ncols: usize,
    free_values: &[(usize, Rational)],
) -> Vec<Rational> {
    let mut x = vec![Rational::zero(); ncols];
    for (col, val) in free_values {
        x[*col] = val.clone();
    }
    for (r, &pc) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[r];
        let mut acc = Rational::zero();
        for j in pc + 1..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc += Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[pc] = -acc / Rational::from_integer(row[pc].clone());
    }
    x
}

impl ExactMatrix {
    pub fn rank(&self) -> usize {
        let (rows, _) = integer_rows(self);
        bareiss(rows, self.cols()).pivots.len()
    }

    pub fn determinant(&self) -> Result<Rational> {
        self.require_square()?;
        let n = self.rows();
        if n == 0 {
            return Ok(Rational::one());
        }
        let (rows, scales) = integer_rows(self);
        let ech = bareiss(rows, n);
        if ech.pivots.len() < n {
            return Ok(Rational::zero());
        }
        let mut det = Rational::from_integer(ech.rows[n - 1][n - 1].clone());
        if ech.swaps % 2 == 1 {
            det = -det;
        }
        let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        Ok(det / Rational::from_integer(scale))
    }

    /// Basis of `{x : self * x = 0}`. One vector per free column, in
    /// increasing column order, with that free coordinate set to 1 and the
    /// other free coordinates 0.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let ncols = self.cols();
        let (rows, _) = integer_rows(self);
        let ech = bareiss(rows, ncols);
        let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| back_substitute(&ech, ncols, &[(f, Rational::one())]))
            .collect()
    }

    pub fn inverse(&self) -> Result<ExactMatrix> {
        self.require_square()?;
        let n = self.rows();
        let (rows, scales) = integer_rows(self);
        // Augment with the identity and eliminate [D*M | I].
        let augmented: Vec<Vec<BigInt>> = rows
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                }));
                row
            })
            .collect();
        let ech = bareiss(augmented, 2 * n);
        if ech.pivots.len() < n || ech.pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(ExactError::Singular);
        }
        let mut inv = ExactMatrix::zeros(n, n);
        for col in 0..n {
            // Solve U x = y where y is column `col` of the right block.
            let mut x = vec![Rational::zero(); n];
            for r in (0..n).rev() {
                let row = &ech.rows[r];
                let mut acc = Rational::from_integer(row[n + col].clone());
                for j in r + 1..n {
                    if !row[j].is_zero() {
                        acc -= Rational::from_integer(row[j].clone()) * &x[j];
                    }
                }
                x[r] = acc / Rational::from_integer(row[r].clone());
            }
            // (D M)^-1 = M^-1 D^-1, so M^-1 = (D M)^-1 D: column `col` scales by d_col.
            let d = Rational::from_integer(scales[col].clone());
            for (r, v) in x.into_iter().enumerate() {
                inv.set(r, col, v * &d);
            }
        }
        Ok(inv)
    }
}
