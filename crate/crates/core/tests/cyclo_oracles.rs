use std::collections::BTreeMap;

use proptest::prelude::*;
use sp4cert::cyclo::{
    cyclotomic, divisors, euler_phi, factor_cyclotomic, poly_from_params, CyclotomicFactorization,
};
use sp4cert::exact::frac;
use sp4cert::IntPolynomial;

fn mobius(n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Φ_d as ∏_{k | d} (X^k - 1)^{μ(d/k)}, dividing out the negative factors.
fn mobius_cyclotomic(d: u64) -> IntPolynomial {
    let mut num = IntPolynomial::one();
    let mut den = IntPolynomial::one();
    for k in divisors(d) {
        let factor = IntPolynomial::x_pow_minus_one(k as usize);
        match mobius(d / k) {
            1 => num = &num * &factor,
            -1 => den = &den * &factor,
            _ => {}
        }
    }
    num.exact_div_monic(&den).expect("exact quotient")
}

#[test]
fn cyclotomic_agrees_with_mobius_oracle() {
    for d in 1..=60 {
        assert_eq!(cyclotomic(d).unwrap(), mobius_cyclotomic(d), "d = {d}");
    }
}

#[test]
fn cyclotomic_divides_x_pow_minus_one() {
    for d in 1..=200u64 {
        let phi = cyclotomic(d).unwrap();
        assert_eq!(phi.degree(), Some(euler_phi(d) as usize), "d = {d}");
        let (_, r) = IntPolynomial::x_pow_minus_one(d as usize).div_rem_monic(&phi);
        assert!(r.is_zero(), "d = {d}");
    }
}

fn factorization() -> impl Strategy<Value = BTreeMap<u64, u32>> {
    prop::collection::btree_map(
        prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 18, 30]),
        1u32..=2,
        1..=3,
    )
}

proptest! {
    #[test]
    fn factorization_round_trips(orders in factorization()) {
        let fact = CyclotomicFactorization::from_orders(orders);
        let p = fact.to_polynomial();
        prop_assert_eq!(factor_cyclotomic(&p), Some(fact.clone()));
        let params = fact.parameters();
        if params.len() <= 8 {
            prop_assert_eq!(poly_from_params(&params).unwrap(), p);
        }
    }

    #[test]
    fn galois_orbits_give_integer_polynomials(d in 1u64..=24) {
        let params: Vec<_> = (0..d as i64)
            .filter(|k| num_integer::gcd(*k, d as i64) == 1)
            .map(|k| frac(k, d as i64))
            .collect();
        prop_assume!(params.len() <= 8);
        prop_assert_eq!(poly_from_params(&params).unwrap(), cyclotomic(d).unwrap());
    }
}
