use sp4cert::certify::{
    builtin_certificate, builtin_certificates, tamper_expected, verify_certificate, Stage,
    StageStatus, BUILTIN_CASES,
};
use sp4cert::exact::{frac, rat};
use sp4cert::symplectic::{Root, Sign};

fn entry(case: u32, name: &str, row: usize, col: usize) -> sp4cert::Rational {
    let report = verify_certificate(&builtin_certificate(case).unwrap());
    report
        .step(name)
        .unwrap()
        .matrix
        .as_ref()
        .unwrap()
        .get(row - 1, col - 1)
        .clone()
}

#[test]
fn all_builtins_certify_without_mismatches() {
    for (case, cert) in BUILTIN_CASES.iter().zip(builtin_certificates()) {
        let report = verify_certificate(&cert);
        assert!(report.passed(), "case {case}:\n{report}");
        assert!(report.mismatches.is_empty());
        assert!(report.stages.iter().all(|s| s.status == StageStatus::Pass));
        assert_eq!(report.assumptions.len(), 1);
        assert!(report.assumptions[0].starts_with("ASSUMED(BH)"));
        let mut roots: Vec<Root> = report
            .roots
            .iter()
            .map(|r| r.classification.as_ref().unwrap().root().unwrap())
            .collect();
        roots.sort();
        let mut all = Root::of_sign(cert.sign).to_vec();
        all.sort();
        assert_eq!(roots, all, "case {case}");
    }
}

#[test]
fn displayed_entries() {
    assert_eq!(entry(4, "z", 2, 1), rat(22674816));
    assert_eq!(entry(4, "z", 4, 3), rat(-1836660096));
    assert_eq!(entry(8, "H", 1, 4), rat(386983526586624000));
    assert_eq!(entry(8, "z", 1, 2), rat(107495424000000));
    assert_eq!(entry(8, "z", 3, 4), rat(11943936000000));
    assert_eq!(entry(10, "z", 1, 3), rat(-268435456));
    assert_eq!(entry(10, "z", 2, 4), rat(268435456));
    assert_eq!(entry(11, "z", 1, 3), rat(-27518828544));
    assert_eq!(entry(11, "z", 2, 4), rat(764411904));
}

#[test]
fn witness_sets_and_signs() {
    let c11 = builtin_certificate(11).unwrap();
    assert_eq!(c11.witnesses, ["P", "x", "y", "z"]);
    assert_eq!(c11.sign, Sign::Positive);
    let c4 = builtin_certificate(4).unwrap();
    assert_eq!(c4.witnesses, ["Q", "x", "y", "z"]);
    assert_eq!(c4.sign, Sign::Negative);
    let c8 = builtin_certificate(8).unwrap();
    assert!(c8
        .program
        .iter()
        .any(|s| s.name == "S" && s.word == "P^25*R^-4"));
    let r4 = verify_certificate(&c4);
    let b = r4.basis.unwrap();
    assert_eq!((b.lambda1, b.lambda2), (frac(-1, 2), frac(-81, 2)));
}

#[test]
fn tampering_any_expected_entry_fails() {
    for cert in builtin_certificates() {
        for (name, m) in &cert.expected {
            let bumped = m.get(0, 3) + rat(1);
            let report = verify_certificate(&tamper_expected(&cert, name, 0, 3, bumped));
            assert!(!report.passed());
            assert_eq!(report.stage(Stage::Expected).status, StageStatus::Fail);
            assert!(report
                .mismatches
                .iter()
                .any(|mm| &mm.name == name && mm.row == Some(1) && mm.col == Some(4)));
        }
    }
}
