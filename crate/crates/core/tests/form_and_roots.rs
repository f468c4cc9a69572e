use num_traits::Zero;
use proptest::prelude::*;
use sp4cert::certify::{builtin_certificate, verify_certificate, TABLE};
use sp4cert::exact::{frac, rat, BigInt, ExactMatrix, Rational};
use sp4cert::monodromy::{
    invariant_form, monodromy_generators, translation_orthogonality, translation_vector,
};
use sp4cert::symplectic::{
    build_basis, change_of_basis, classify_root_element, is_symplectic, spans_unipotent_radical,
    Classification, Root, RootElement, Sign, SymplecticBasis,
};

#[test]
fn every_table_row_has_a_unique_invariant_form() {
    for entry in &TABLE {
        let t = monodromy_generators(&entry.params()).unwrap();
        let inv = invariant_form(&t.a, &t.b).unwrap();
        assert_eq!(inv.kernel_dim, 1, "row {}", entry.row);
        let omega = inv.form.gram();
        assert_eq!(&omega.transpose(), &-omega);
        assert!(!omega.determinant().unwrap().is_zero());
        assert_eq!(&(&(&t.a.transpose() * omega) * &t.a), omega);
        assert_eq!(&(&(&t.b.transpose() * omega) * &t.b), omega);
        let tv = translation_vector(&t.c).unwrap();
        let (ok, pairings) = translation_orthogonality(&inv.form, &tv);
        assert!(ok, "row {}: {pairings:?}", entry.row);
        let basis = build_basis(&inv.form, &tv).unwrap();
        assert_eq!(inv.form.in_basis(&basis.matrix()), basis.gram());
    }
}

fn witness_pairs() -> Vec<(u32, ExactMatrix, Rational, Rational, Sign)> {
    let mut out = Vec::new();
    for case in [4, 8, 10, 11] {
        let cert = builtin_certificate(case).unwrap();
        let report = verify_certificate(&cert);
        let b = report.basis.clone().unwrap();
        for name in ["y", "z"] {
            let m = report.step(name).unwrap().matrix.clone().unwrap();
            out.push((case, m, b.lambda1.clone(), b.lambda2.clone(), cert.sign));
        }
    }
    out
}

#[test]
fn short_root_witnesses_satisfy_the_paired_relation() {
    for (case, m, l1, l2, sign) in witness_pairs() {
        let c = classify_root_element(&m, &l1, &l2).unwrap();
        let Classification::Root(RootElement { root, parameter }) = c else {
            panic!("case {case}: not a root element");
        };
        assert_eq!(root.sign(), sign);
        let positions = root.positions();
        assert_eq!(positions.len(), 2, "case {case}: {root} is a short root");
        let (i, j) = positions[1];
        let b = m.get(i, j).clone();
        let a = parameter;
        // b λ₂ = ∓ a λ₁ for positive roots, b λ₁ = ∓ a λ₂ for negative ones
        let holds = match root {
            Root::PlusE1MinusE2 => &b * &l2 == -(&a * &l1),
            Root::PlusE1PlusE2 => &b * &l2 == &a * &l1,
            Root::MinusE1MinusE2 => &b * &l1 == -(&a * &l2),
            Root::MinusE1PlusE2 => &b * &l1 == &a * &l2,
            _ => false,
        };
        assert!(holds, "case {case}: {root}");
    }
}

fn gram_form(l1: &Rational, l2: &Rational) -> sp4cert::SymplecticForm {
    SymplecticBasis {
        eps1: vec![],
        eps2: vec![],
        eps2s: vec![],
        eps1s: vec![],
        lambda1: l1.clone(),
        lambda2: l2.clone(),
    }
    .form()
}

/// `I + a·X_root` with the paired entry fixed by the form.
fn root_element(root: Root, a: &Rational, l1: &Rational, l2: &Rational) -> ExactMatrix {
    let mut m = ExactMatrix::identity(4);
    let p = root.positions();
    m.set(p[0].0, p[0].1, a.clone());
    if let Some(ratio) = root.paired_ratio(l1, l2) {
        m.set(p[1].0, p[1].1, a * ratio);
    }
    m
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=7)
        .prop_filter("nonzero", |(a, _)| *a != 0)
        .prop_map(|(a, b)| frac(a, b))
}

proptest! {
    #[test]
    fn powers_scale_the_root_parameter(
        idx in 0usize..8,
        a in nonzero_rational(),
        l1 in nonzero_rational(),
        l2 in nonzero_rational(),
        k in -40i64..=40,
    ) {
        prop_assume!(k != 0);
        let root = Root::ALL[idx];
        let u = root_element(root, &a, &l1, &l2);
        prop_assert!(is_symplectic(&u, &gram_form(&l1, &l2)));
        let uk = u.pow(&BigInt::from(k), u64::MAX).unwrap();
        let c = classify_root_element(&uk, &l1, &l2).unwrap();
        prop_assert_eq!(c, Classification::Root(RootElement { root, parameter: a * rat(k) }));
    }

    #[test]
    fn one_element_per_root_spans(
        params in prop::collection::vec(nonzero_rational(), 4),
        l1 in nonzero_rational(),
        l2 in nonzero_rational(),
        positive in any::<bool>(),
    ) {
        let sign = if positive { Sign::Positive } else { Sign::Negative };
        let elements: Vec<_> = Root::of_sign(sign)
            .iter()
            .zip(&params)
            .map(|(r, a)| root_element(*r, a, &l1, &l2))
            .collect();
        prop_assert!(spans_unipotent_radical(&elements, sign, &l1, &l2).unwrap());
        prop_assert!(!spans_unipotent_radical(&elements[..3], sign, &l1, &l2).unwrap());
    }

    #[test]
    fn change_of_basis_preserves_symplecticity(word in prop::collection::vec(0usize..4, 0..6)) {
        let cert = builtin_certificate(11).unwrap();
        let t = monodromy_generators(
            &sp4cert::HGParams::new(cert.alpha.clone(), cert.beta.clone()).unwrap(),
        ).unwrap();
        let inv = invariant_form(&t.a, &t.b).unwrap();
        let basis = sp4cert::symplectic::verify_basis(&inv.form, &cert.basis.clone().unwrap().to_rows()).unwrap();
        let gens = [t.a.clone(), t.a.inverse().unwrap(), t.b.clone(), t.b.inverse().unwrap()];
        let g = word.iter().fold(ExactMatrix::identity(4), |acc, &i| &acc * &gens[i]);
        prop_assert!(is_symplectic(&g, &inv.form));
        let ge = change_of_basis(&g, &basis).unwrap();
        prop_assert!(is_symplectic(&ge, &basis.form()));
    }
}
