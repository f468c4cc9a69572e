//! Arithmeticity certificates and their verifier.
//!
//! A certificate names a parameter pair, a symplectic basis, a program of
//! group words over `A`, `B`, `C`, and four witnesses. It certifies
//! arithmeticity when the witnesses are unipotents in four distinct root
//! groups of one sign whose logarithms span the Lie algebra of the
//! corresponding unipotent radical: a Zariski dense subgroup of `Sp₄(ℤ)`
//! meeting every root group of a unipotent radical nontrivially has finite
//! index. Zariski density is assumed, not checked.

mod builtin;
mod table;

use std::fmt;

use indexmap::IndexMap;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cyclo::{coprime, factor_cyclotomic, format_params, HGParams};
use crate::exact::{rational_string, rational_vec_string, ExactMatrix, Rational};
use crate::monodromy::{
    invariant_form, monodromy_generators, translation_orthogonality, translation_vector,
    MonodromyTriple, SymplecticForm,
};
use crate::symplectic::{
    build_basis, change_of_basis, classify_root_element, spans_unipotent_radical, verify_basis,
    Classification, Root, Sign, SymplecticBasis,
};
use crate::words::{parse_word, WordEnv};

pub use builtin::{builtin_certificate, builtin_certificates, BUILTIN_CASES};
pub use table::{verify_table, ArithmeticStatus, TableEntry, TableReport, TableRowReport, TABLE};

/// The premise the verdict rests on without checking it.
pub const DENSITY_ASSUMPTION: &str =
    "ASSUMED(BH): the monodromy group is Zariski dense in Sp4 (not checked)";

/// Names bound before the program runs, in standard coordinates.
pub const GENERATOR_NAMES: [&str; 3] = ["A", "B", "C"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramStep {
    pub name: String,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambdas {
    #[serde(with = "rational_string")]
    pub lambda1: Rational,
    #[serde(with = "rational_string")]
    pub lambda2: Rational,
}

/// Certificate file contents.
///
/// `expected` holds matrices in basis coordinates; `expected_standard`,
/// `expected_form` and `expected_lambdas` are optional extra checks in
/// standard coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(with = "rational_vec_string")]
    pub alpha: Vec<Rational>,
    #[serde(with = "rational_vec_string")]
    pub beta: Vec<Rational>,
    /// Rows are `ε₁, ε₂, ε₂*, ε₁*` in standard coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<ExactMatrix>,
    pub sign: Sign,
    pub program: Vec<ProgramStep>,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub expected: IndexMap<String, ExactMatrix>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub expected_standard: IndexMap<String, ExactMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_form: Option<ExactMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_lambdas: Option<Lambdas>,
}

impl Certificate {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Parameters,
    Form,
    Basis,
    Evaluation,
    Expected,
    Membership,
    Roots,
    Span,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Parameters,
        Stage::Form,
        Stage::Basis,
        Stage::Evaluation,
        Stage::Expected,
        Stage::Membership,
        Stage::Roots,
        Stage::Span,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn title(self) -> &'static str {
        match self {
            Stage::Parameters => "generators and parameter sanity",
            Stage::Form => "invariant symplectic form",
            Stage::Basis => "symplectic basis",
            Stage::Evaluation => "word program evaluation",
            Stage::Expected => "expected matrices",
            Stage::Membership => "membership in Sp4(Z)",
            Stage::Roots => "root classification of witnesses",
            Stage::Span => "span of the unipotent radical",
        }
    }

    /// Failure code reported when this stage fails.
    pub fn failure_code(self) -> &'static str {
        match self {
            Stage::Parameters => "E1-PARAMETERS",
            Stage::Form => "E2-FORM",
            Stage::Basis => "E3-BASIS",
            Stage::Evaluation => "E4-EVALUATION",
            Stage::Expected => "E5-EXPECTED-MISMATCH",
            Stage::Membership => "E6-MEMBERSHIP",
            Stage::Roots => "E7-ROOTS",
            Stage::Span => "E8-SPAN",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for StageStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageStatus::Pass => "PASS",
            StageStatus::Fail => "FAIL",
            StageStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: Stage,
    pub status: StageStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

/// An expected value that differs from the computed one. `row`/`col` are
/// one-based; both are `None` for scalar or whole-object mismatches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub name: String,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.row, self.col) {
            (Some(r), Some(c)) => write!(
                f,
                "{}({r},{c}): expected {}, computed {}",
                self.name, self.expected, self.actual
            ),
            _ => write!(
                f,
                "{}: expected {}, computed {}",
                self.name, self.expected, self.actual
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepResult {
    pub name: String,
    pub word: String,
    /// Value in basis coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ExactMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// `None` when no expected value was given.
    pub expected_match: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSummary {
    pub gram: ExactMatrix,
    pub kernel_dim: usize,
    pub translation_vector: Vec<String>,
    pub translation_pairings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSummary {
    /// Rows are `ε₁, ε₂, ε₂*, ε₁*`.
    pub vectors: ExactMatrix,
    #[serde(with = "rational_string")]
    pub lambda1: Rational,
    #[serde(with = "rational_string")]
    pub lambda2: Rational,
    /// True when the basis was built rather than read from the certificate.
    pub constructed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootAssignment {
    pub name: String,
    pub classification: Option<Classification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "ARITHMETIC-CERTIFIED")]
    ArithmeticCertified,
    #[serde(rename = "FAIL")]
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ArithmeticCertified => "ARITHMETIC-CERTIFIED",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub label: Option<String>,
    pub alpha: String,
    pub beta: String,
    pub sign: Sign,
    pub stages: Vec<StageReport>,
    pub steps: Vec<StepResult>,
    pub mismatches: Vec<Mismatch>,
    pub form: Option<FormSummary>,
    pub basis: Option<BasisSummary>,
    pub roots: Vec<RootAssignment>,
    /// Zariski density is taken as a premise, never verified.
    pub density_assumed: bool,
    pub assumptions: Vec<String>,
    pub verdict: Verdict,
}

impl VerdictReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::ArithmeticCertified
    }

    pub fn stage(&self, stage: Stage) -> &StageReport {
        self.stages
            .iter()
            .find(|s| s.stage == stage)
            .expect("every stage is reported")
    }

    pub fn step(&self, name: &str) -> Option<&StepResult> {
        self.steps.iter().find(|s| s.name == name)
    }

    /// Failure codes of the failed stages.
    pub fn failure_codes(&self) -> Vec<&str> {
        self.stages
            .iter()
            .filter_map(|s| s.code.as_deref())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            writeln!(f, "certificate: {label}")?;
        }
        writeln!(
            f,
            "alpha = ({})  beta = ({})  sign = {}",
            self.alpha, self.beta, self.sign
        )?;
        for s in &self.stages {
            write!(
                f,
                "[{}] {:<34} {}",
                s.stage.number(),
                s.stage.title(),
                s.status
            )?;
            if let Some(code) = &s.code {
                write!(f, " {code}")?;
            }
            writeln!(f)?;
            for d in &s.details {
                writeln!(f, "      {d}")?;
            }
        }
        if let Some(form) = &self.form {
            writeln!(f, "Omega (kernel dimension {}):", form.kernel_dim)?;
            writeln!(f, "{}", form.gram)?;
        }
        if let Some(b) = &self.basis {
            writeln!(
                f,
                "basis ({}): lambda1 = {}, lambda2 = {}",
                if b.constructed {
                    "constructed"
                } else {
                    "given"
                },
                b.lambda1,
                b.lambda2
            )?;
            for (label, row) in ["eps1", "eps2", "eps2*", "eps1*"]
                .iter()
                .zip(b.vectors.to_string_rows())
            {
                writeln!(f, "  {label:<6} ({})", row.join(", "))?;
            }
        }
        for step in &self.steps {
            let status = match (&step.error, step.expected_match) {
                (Some(e), _) => format!("error: {e}"),
                (None, Some(true)) => "matches expected".into(),
                (None, Some(false)) => "DIFFERS from expected".into(),
                (None, None) => "no expected value".into(),
            };
            writeln!(f, "{} = {}  [{status}]", step.name, step.word)?;
            if let Some(m) = &step.matrix {
                writeln!(f, "{m}")?;
            }
        }
        for m in &self.mismatches {
            writeln!(f, "mismatch: {m}")?;
        }
        for r in &self.roots {
            match (&r.classification, &r.error) {
                (Some(c), _) => writeln!(f, "witness {}: {c}", r.name)?,
                (None, Some(e)) => writeln!(f, "witness {}: {e}", r.name)?,
                (None, None) => writeln!(f, "witness {}: unavailable", r.name)?,
            }
        }
        for a in &self.assumptions {
            writeln!(f, "{a}")?;
        }
        match self.verdict {
            Verdict::ArithmeticCertified => write!(f, "ARITHMETIC-CERTIFIED (assuming BH density)"),
            Verdict::Fail => write!(f, "FAIL ({})", self.failure_codes().join(", ")),
        }
    }
}

struct Recorder {
    stages: Vec<StageReport>,
}

impl Recorder {
    fn pass(&mut self, stage: Stage, details: Vec<String>) {
        self.stages.push(StageReport {
            stage,
            status: StageStatus::Pass,
            code: None,
            details,
        });
    }

    fn fail(&mut self, stage: Stage, details: Vec<String>) {
        self.stages.push(StageReport {
            stage,
            status: StageStatus::Fail,
            code: Some(stage.failure_code().to_owned()),
            details,
        });
    }

    fn record(&mut self, stage: Stage, ok: bool, details: Vec<String>) -> bool {
        if ok {
            self.pass(stage, details);
        } else {
            self.fail(stage, details);
        }
        ok
    }

    fn skip_rest(&mut self, reason: &str) {
        for stage in Stage::ALL {
            if !self.stages.iter().any(|s| s.stage == stage) {
                self.stages.push(StageReport {
                    stage,
                    status: StageStatus::Skipped,
                    code: None,
                    details: vec![reason.to_owned()],
                });
            }
        }
    }
}

fn compare_matrix(
    name: &str,
    expected: &ExactMatrix,
    actual: &ExactMatrix,
    out: &mut Vec<Mismatch>,
) -> bool {
    if expected.rows() != actual.rows() || expected.cols() != actual.cols() {
        out.push(Mismatch {
            name: name.to_owned(),
            row: None,
            col: None,
            expected: format!("{}x{} matrix", expected.rows(), expected.cols()),
            actual: format!("{}x{} matrix", actual.rows(), actual.cols()),
        });
        return false;
    }
    let mut ok = true;
    for i in 0..expected.rows() {
        for j in 0..expected.cols() {
            if expected.get(i, j) != actual.get(i, j) {
                ok = false;
                out.push(Mismatch {
                    name: name.to_owned(),
                    row: Some(i + 1),
                    col: Some(j + 1),
                    expected: expected.get(i, j).to_string(),
                    actual: actual.get(i, j).to_string(),
                });
            }
        }
    }
    ok
}

fn compare_scalar(
    name: &str,
    expected: &Rational,
    actual: &Rational,
    out: &mut Vec<Mismatch>,
) -> bool {
    if expected == actual {
        return true;
    }
    out.push(Mismatch {
        name: name.to_owned(),
        row: None,
        col: None,
        expected: expected.to_string(),
        actual: actual.to_string(),
    });
    false
}

/// Runs the full check. Every stage reports; a failing stage only skips
/// the stages that need its output.
pub fn verify_certificate(cert: &Certificate) -> VerdictReport {
    let mut rec = Recorder { stages: Vec::new() };
    let mut report = VerdictReport {
        label: cert.label.clone(),
        alpha: format_params(&cert.alpha),
        beta: format_params(&cert.beta),
        sign: cert.sign,
        stages: Vec::new(),
        steps: Vec::new(),
        mismatches: Vec::new(),
        form: None,
        basis: None,
        roots: Vec::new(),
        density_assumed: true,
        assumptions: vec![DENSITY_ASSUMPTION.to_owned()],
        verdict: Verdict::Fail,
    };
    let finish = |mut report: VerdictReport, rec: Recorder| {
        report.stages = rec.stages;
        report.stages.sort_by_key(|s| s.stage);
        let all_pass = report.stages.iter().all(|s| s.status == StageStatus::Pass);
        report.verdict = if all_pass && report.assumptions == [DENSITY_ASSUMPTION] {
            Verdict::ArithmeticCertified
        } else {
            Verdict::Fail
        };
        report
    };

    // (1) parameters and generators
    let triple = match stage_parameters(cert) {
        Ok((triple, details)) => {
            rec.pass(Stage::Parameters, details);
            triple
        }
        Err(e) => {
            rec.fail(Stage::Parameters, vec![e]);
            rec.skip_rest("requires generators");
            return finish(report, rec);
        }
    };
    let mut standard_ok = true;
    for (name, expected) in &cert.expected_standard {
        let actual = match name.as_str() {
            "A" => &triple.a,
            "B" => &triple.b,
            "C" => &triple.c,
            _ => {
                standard_ok = false;
                report.mismatches.push(Mismatch {
                    name: name.clone(),
                    row: None,
                    col: None,
                    expected: "a generator name (A, B or C)".into(),
                    actual: name.clone(),
                });
                continue;
            }
        };
        standard_ok &= compare_matrix(name, expected, actual, &mut report.mismatches);
    }

    // (2) invariant form
    let (form, tv) = match invariant_form(&triple.a, &triple.b)
        .and_then(|inv| translation_vector(&triple.c).map(|tv| (inv, tv)))
    {
        Ok((inv, tv)) => {
            let (orthogonal, pairings) = translation_orthogonality(&inv.form, &tv);
            let invariant =
                inv.form.is_preserved_by(&triple.a) && inv.form.is_preserved_by(&triple.b);
            report.form = Some(FormSummary {
                gram: inv.form.gram().clone(),
                kernel_dim: inv.kernel_dim,
                translation_vector: tv.v.iter().map(ToString::to_string).collect(),
                translation_pairings: pairings.iter().map(ToString::to_string).collect(),
            });
            let mut details = vec![format!("kernel dimension {}", inv.kernel_dim)];
            if !invariant {
                details.push("form is not preserved by A and B".into());
            }
            if !orthogonal {
                details.push("translation vector pairing pattern is wrong".into());
            }
            rec.record(Stage::Form, invariant && orthogonal, details);
            (inv.form, tv)
        }
        Err(e) => {
            rec.fail(Stage::Form, vec![e.to_string()]);
            rec.skip_rest("requires the invariant form");
            return finish(report, rec);
        }
    };
    if let Some(expected) = &cert.expected_form {
        standard_ok &= compare_matrix("Omega", expected, form.gram(), &mut report.mismatches);
    }

    // (3) basis
    let basis = match stage_basis(cert, &form, &tv) {
        Ok(basis) => {
            report.basis = Some(BasisSummary {
                vectors: basis.matrix().transpose(),
                lambda1: basis.lambda1.clone(),
                lambda2: basis.lambda2.clone(),
                constructed: cert.basis.is_none(),
            });
            rec.pass(
                Stage::Basis,
                vec![format!(
                    "lambda1 = {}, lambda2 = {}",
                    basis.lambda1, basis.lambda2
                )],
            );
            basis
        }
        Err(e) => {
            rec.fail(Stage::Basis, vec![e]);
            rec.skip_rest("requires a symplectic basis");
            return finish(report, rec);
        }
    };
    if let Some(l) = &cert.expected_lambdas {
        standard_ok &= compare_scalar(
            "lambda1",
            &l.lambda1,
            &basis.lambda1,
            &mut report.mismatches,
        );
        standard_ok &= compare_scalar(
            "lambda2",
            &l.lambda2,
            &basis.lambda2,
            &mut report.mismatches,
        );
    }

    // (4) program evaluation in standard coordinates
    let mut env = WordEnv::new();
    for (name, m) in GENERATOR_NAMES
        .iter()
        .zip([&triple.a, &triple.b, &triple.c])
    {
        env.bind(name, m.clone())
            .expect("generators are invertible");
    }
    let mut eval_errors = Vec::new();
    for step in &cert.program {
        let result = parse_word(&step.word)
            .and_then(|w| env.define(&step.name, &w).cloned())
            .map_err(|e| e.to_string())
            .and_then(|m| change_of_basis(&m, &basis).map_err(|e| e.to_string()));
        let (matrix, error) = match result {
            Ok(m) => (Some(m), None),
            Err(e) => {
                eval_errors.push(format!("{}: {e}", step.name));
                (None, Some(e))
            }
        };
        report.steps.push(StepResult {
            name: step.name.clone(),
            word: step.word.clone(),
            matrix,
            error,
            expected_match: None,
        });
    }
    let evaluated = report.steps.iter().filter(|s| s.matrix.is_some()).count();
    let mut details = vec![format!(
        "{evaluated} of {} steps evaluated",
        cert.program.len()
    )];
    let eval_ok = eval_errors.is_empty();
    details.extend(eval_errors);
    rec.record(Stage::Evaluation, eval_ok, details);

    // (5) expected matrices
    let mut expected_ok = standard_ok;
    for (name, expected) in &cert.expected {
        match report.steps.iter_mut().find(|s| &s.name == name) {
            Some(step) => {
                if let Some(actual) = &step.matrix {
                    let ok = compare_matrix(name, expected, actual, &mut report.mismatches);
                    step.expected_match = Some(ok);
                    expected_ok &= ok;
                } else {
                    step.expected_match = Some(false);
                    expected_ok = false;
                }
            }
            None => {
                expected_ok = false;
                report.mismatches.push(Mismatch {
                    name: name.clone(),
                    row: None,
                    col: None,
                    expected: "a program step".into(),
                    actual: "no such step".into(),
                });
            }
        }
    }
    let details = report.mismatches.iter().map(ToString::to_string).collect();
    rec.record(Stage::Expected, expected_ok, details);

    // (6) membership: integral, determinant one, preserves the form
    let basis_form = basis.form();
    let mut membership = Vec::new();
    for step in &report.steps {
        let Some(m_eps) = &step.matrix else { continue };
        let m_std = env.get(&step.name).expect("evaluated steps are bound");
        if !m_std.is_integral() {
            membership.push(format!("{} is not integral", step.name));
        }
        if m_std.determinant().map(|d| !d.is_one()).unwrap_or(true) {
            membership.push(format!("{} does not have determinant 1", step.name));
        }
        if !form.is_preserved_by(m_std) || !basis_form.is_preserved_by(m_eps) {
            membership.push(format!("{} does not preserve the form", step.name));
        }
    }
    let membership_ok = membership.is_empty();
    rec.record(Stage::Membership, membership_ok, membership);

    // (7) witnesses in distinct root groups of the declared sign
    let mut roots_found = Vec::new();
    let mut root_problems = Vec::new();
    if cert.witnesses.len() != 4 {
        root_problems.push(format!(
            "{} witnesses given, expected 4",
            cert.witnesses.len()
        ));
    }
    for name in &cert.witnesses {
        let matrix = report.step(name).and_then(|s| s.matrix.clone());
        let assignment = match matrix {
            None => RootAssignment {
                name: name.clone(),
                classification: None,
                error: Some("not an evaluated program step".into()),
            },
            Some(m) => match classify_root_element(&m, &basis.lambda1, &basis.lambda2) {
                Ok(c) => RootAssignment {
                    name: name.clone(),
                    classification: Some(c),
                    error: None,
                },
                Err(e) => RootAssignment {
                    name: name.clone(),
                    classification: None,
                    error: Some(e.to_string()),
                },
            },
        };
        match assignment
            .classification
            .as_ref()
            .and_then(Classification::root)
        {
            Some(root) if root.sign() == cert.sign => {
                if roots_found.contains(&root) {
                    root_problems.push(format!("{name}: root {root} already covered"));
                }
                roots_found.push(root);
            }
            Some(root) => root_problems.push(format!("{name}: root {root} has the wrong sign")),
            None => root_problems.push(format!(
                "{name}: {}",
                assignment
                    .error
                    .as_deref()
                    .unwrap_or("not a single root element")
            )),
        }
        report.roots.push(assignment);
    }
    let roots_ok = root_problems.is_empty() && roots_found.len() == 4;
    let mut details: Vec<String> = roots_found.iter().map(Root::to_string).collect();
    if roots_ok {
        details = vec![format!("roots {{{}}}", details.join(", "))];
    } else {
        details = root_problems;
    }
    rec.record(Stage::Roots, roots_ok, details);

    // (8) span of the unipotent radical
    if roots_ok {
        let elements: Vec<ExactMatrix> = cert
            .witnesses
            .iter()
            .filter_map(|n| report.step(n).and_then(|s| s.matrix.clone()))
            .collect();
        match spans_unipotent_radical(&elements, cert.sign, &basis.lambda1, &basis.lambda2) {
            Ok(true) => rec.pass(Stage::Span, vec![]),
            Ok(false) => rec.fail(
                Stage::Span,
                vec!["logarithms span less than 4 dimensions".into()],
            ),
            Err(e) => rec.fail(Stage::Span, vec![e.to_string()]),
        }
    } else {
        rec.skip_rest("requires four classified witnesses");
    }
    finish(report, rec)
}

fn stage_parameters(cert: &Certificate) -> Result<(MonodromyTriple, Vec<String>), String> {
    let params = HGParams::new(cert.alpha.clone(), cert.beta.clone()).map_err(|e| e.to_string())?;
    let (f, g) = (params.f(), params.g());
    if factor_cyclotomic(&f).is_none() || factor_cyclotomic(&g).is_none() {
        return Err("f or g is not a product of cyclotomic polynomials".into());
    }
    if !coprime(&f, &g) {
        return Err(format!("f = {f} and g = {g} are not coprime"));
    }
    let triple = monodromy_generators(&params).map_err(|e| e.to_string())?;
    let details = vec![format!("f = {f}"), format!("g = {g}")];
    Ok((triple, details))
}

fn stage_basis(
    cert: &Certificate,
    form: &SymplecticForm,
    tv: &crate::monodromy::TranslationVector,
) -> Result<SymplecticBasis, String> {
    match &cert.basis {
        Some(rows) => {
            if rows.rows() != 4 || rows.cols() != 4 {
                return Err(format!(
                    "basis must be 4 vectors of length 4, got {}x{}",
                    rows.rows(),
                    rows.cols()
                ));
            }
            verify_basis(form, &rows.to_rows()).map_err(|e| e.to_string())
        }
        None => build_basis(form, tv).map_err(|e| e.to_string()),
    }
}

/// Certificate with one expected entry replaced; used to probe sensitivity.
pub fn tamper_expected(
    cert: &Certificate,
    name: &str,
    row: usize,
    col: usize,
    value: Rational,
) -> Certificate {
    let mut out = cert.clone();
    if let Some(m) = out.expected.get_mut(name) {
        m.set(row, col, value);
    }
    out
}
