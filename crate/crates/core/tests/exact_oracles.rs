use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sp4cert::exact::{frac, mat_pow, rat, BigInt, ExactMatrix, Rational};

/// Rank by textbook Gauss-Jordan over the rationals.
fn oracle_rank(m: &ExactMatrix) -> usize {
    let mut rows = m.to_rows();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn naive_pow(m: &ExactMatrix, k: u32) -> ExactMatrix {
    let mut acc = ExactMatrix::identity(m.rows());
    for _ in 0..k {
        acc = &acc * m;
    }
    acc
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    let data = (0..rows * cols)
        .map(|_| rat(rng.gen_range(-bound..=bound)))
        .collect();
    ExactMatrix::new(rows, cols, data).unwrap()
}

#[test]
fn binary_power_matches_repeated_multiplication() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let m = random_matrix(&mut rng, 4, 4, 9);
        let mut naive = ExactMatrix::identity(4);
        for k in 0..=64u32 {
            assert_eq!(mat_pow(&m, &BigInt::from(k)).unwrap(), naive);
            naive = &naive * &m;
        }
    }
}

#[test]
fn kernel_and_rank_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        // low-rank products exercise nontrivial kernels
        let inner = rng.gen_range(1..=cols);
        let m = &random_matrix(&mut rng, rows, inner, 3) * &random_matrix(&mut rng, inner, cols, 3);
        let rank = oracle_rank(&m);
        assert_eq!(m.rank(), rank);
        let k = m.kernel();
        assert_eq!(k.len(), cols - rank);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        if !k.is_empty() {
            assert_eq!(
                oracle_rank(&ExactMatrix::from_rows(k).unwrap()),
                cols - rank
            );
        }
    }
}

#[test]
fn unipotent_power_with_huge_exponent() {
    let x =
        ExactMatrix::from_i64_rows(&[[1, 0, 0, 28800], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    let k: BigInt = "-386983526586624000".parse().unwrap();
    let p = mat_pow(&x, &k).unwrap();
    assert_eq!(
        p.get(0, 3),
        &Rational::from_integer(BigInt::from(28800) * &k)
    );
    assert_eq!(p.get(0, 3).to_string(), "-11145125565694771200000");
}

fn rational_matrix(n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec((-20i64..=20, 1i64..=6), n * n).prop_map(move |v| {
        ExactMatrix::new(n, n, v.into_iter().map(|(a, b)| frac(a, b)).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn inverse_is_two_sided(m in rational_matrix(4)) {
        match m.inverse() {
            Ok(inv) => {
                prop_assert!((&m * &inv).is_identity());
                prop_assert!((&inv * &m).is_identity());
                prop_assert_eq!(oracle_rank(&m), 4);
            }
            Err(_) => prop_assert!(m.determinant().unwrap().is_zero()),
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in rational_matrix(3), b in rational_matrix(3)) {
        let ab = &a * &b;
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
    }

    #[test]
    fn negative_powers_invert(m in rational_matrix(3), k in 1u32..6) {
        prop_assume!(!m.determinant().unwrap().is_zero());
        let pos = naive_pow(&m, k);
        let neg = m.pow(&-BigInt::from(k), u64::MAX).unwrap();
        prop_assert!((&pos * &neg).is_identity());
    }

    #[test]
    fn text_round_trip(m in rational_matrix(4)) {
        prop_assert_eq!(m.to_text().parse::<ExactMatrix>().unwrap(), m.clone());
        let json = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExactMatrix>(&json).unwrap(), m);
    }
}

#[test]
fn determinant_of_identity_is_one() {
    assert!(ExactMatrix::identity(5).determinant().unwrap().is_one());
}
