//! Command-line front end. [`run`] takes the argument list and output
//! streams and returns the process exit code: 0 on success, 1 when a check
//! fails, 2 on usage or input errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sp4cert::certify::{
    builtin_certificate, verify_certificate, verify_table, Certificate, BUILTIN_CASES,
};
use sp4cert::cyclo::HGParams;
use sp4cert::exact::{parse_rational, ExactMatrix};
use sp4cert::monodromy::{
    invariant_form, monodromy_generators, translation_orthogonality, translation_vector,
    MonodromyTriple, SymplecticForm,
};
use sp4cert::search::{search_unipotents, sv_criterion_scan, SearchConfig};
use sp4cert::symplectic::{
    build_basis, classify_root_element, verify_basis, Sign, SymplecticBasis,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sp4cert",
    version,
    about = "Exact verification of arithmeticity certificates for Sp4 hypergeometric groups"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recompute the 14-row table of Sp4 pairs with f = (X-1)^4.
    Table,
    /// Print f, g and the generators A, B, C.
    Gens(ParamArgs),
    /// Solve for the invariant symplectic form.
    Form(ParamArgs),
    /// Print the symplectic basis (the certificate's for a builtin case,
    /// otherwise constructed).
    Basis(ParamArgs),
    /// Verify a builtin or file certificate.
    Verify(VerifyArgs),
    /// Classify a unipotent matrix given in basis coordinates.
    Classify(ClassifyArgs),
    /// Search for root-group witnesses and run the translation-vector scan.
    Search(SearchArgs),
    /// Write a builtin certificate as JSON.
    Export {
        #[arg(long)]
        case: u32,
    },
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Comma-separated parameters, e.g. 0,0,0,0.
    #[arg(
        long,
        allow_hyphen_values = true,
        requires = "beta",
        conflicts_with = "case"
    )]
    alpha: Option<String>,
    /// Comma-separated parameters, e.g. 1/3,2/3,1/4,3/4.
    #[arg(long, allow_hyphen_values = true, requires = "alpha")]
    beta: Option<String>,
    /// Builtin certificate case (4, 8, 10 or 11).
    #[arg(long)]
    case: Option<u32>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    #[arg(long)]
    case: Option<u32>,
    /// Certificate JSON file.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// File with 4 rows of 4 rationals, rows separated by `;` or newlines.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    lambda1: String,
    #[arg(long, allow_hyphen_values = true)]
    lambda2: String,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Longest conjugator in w C w^-1.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Largest power exponent used in combinations.
    #[arg(long, default_value_t = 2)]
    max_exp: u32,
    /// Rounds of products, commutators and powers.
    #[arg(long, default_value_t = 0)]
    comb_depth: usize,
    #[arg(long, default_value_t = 4096)]
    max_bits: u64,
    #[arg(long, default_value_t = 100_000)]
    max_candidates: usize,
    /// Keep only witnesses of this sign.
    #[arg(long)]
    sign: Option<String>,
    /// Word length for the translation-vector scan (0 skips it).
    #[arg(long, default_value_t = 4)]
    sv_depth: usize,
}

/// Input or usage problem, reported on one line with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<i32, UsageError>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE
                    } else {
                        EXIT_OK
                    }
                }
                _ => {
                    let text = e.render().to_string();
                    let line = text.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(err, "{line}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {}", msg.lines().next().unwrap_or(""));
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Table => cmd_table(cli.json, out),
        Command::Gens(p) => cmd_gens(p, cli.json, out),
        Command::Form(p) => cmd_form(p, cli.json, out),
        Command::Basis(p) => cmd_basis(p, cli.json, out),
        Command::Verify(v) => cmd_verify(v, cli.json, out),
        Command::Classify(c) => cmd_classify(c, cli.json, out),
        Command::Search(s) => cmd_search(s, cli.json, out),
        Command::Export { case } => {
            writeln!(out, "{}", builtin(*case)?.to_json())?;
            Ok(EXIT_OK)
        }
    }
}

fn builtin(case: u32) -> Result<Certificate, UsageError> {
    builtin_certificate(case).ok_or_else(|| {
        UsageError(format!(
            "unknown case {case}; builtin cases are {}",
            BUILTIN_CASES.map(|c| c.to_string()).join(", ")
        ))
    })
}

fn params(p: &ParamArgs) -> Result<(HGParams, Option<Certificate>), UsageError> {
    match (&p.alpha, &p.beta, p.case) {
        (Some(a), Some(b), None) => Ok((HGParams::parse(a, b)?, None)),
        (None, None, Some(case)) => {
            let cert = builtin(case)?;
            Ok((
                HGParams::new(cert.alpha.clone(), cert.beta.clone())?,
                Some(cert),
            ))
        }
        _ => Err(UsageError(
            "give either --alpha and --beta, or --case".into(),
        )),
    }
}

struct Setup {
    triple: MonodromyTriple,
    form: SymplecticForm,
    kernel_dim: usize,
}

fn setup(params: &HGParams) -> Result<Setup, UsageError> {
    let triple = monodromy_generators(params)?;
    let inv = invariant_form(&triple.a, &triple.b)?;
    Ok(Setup {
        triple,
        form: inv.form,
        kernel_dim: inv.kernel_dim,
    })
}

fn basis_for(s: &Setup, cert: Option<&Certificate>) -> Result<SymplecticBasis, UsageError> {
    match cert.and_then(|c| c.basis.as_ref()) {
        Some(rows) => Ok(verify_basis(&s.form, &rows.to_rows())?),
        None => Ok(build_basis(&s.form, &translation_vector(&s.triple.c)?)?),
    }
}

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), UsageError> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn cmd_table(json: bool, out: &mut dyn Write) -> CmdResult {
    let report = verify_table();
    if json {
        emit_json(out, &report)?;
    } else {
        writeln!(out, "{report}")?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_gens(p: &ParamArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let (params, _) = params(p)?;
    let t = monodromy_generators(&params)?;
    if json {
        emit_json(
            out,
            &json!({ "f": t.f, "g": t.g, "A": t.a, "B": t.b, "C": t.c }),
        )?;
    } else {
        writeln!(out, "f = {}\ng = {}", t.f, t.g)?;
        for (name, m) in [("A", &t.a), ("B", &t.b), ("C", &t.c)] {
            writeln!(out, "{name} =\n{m}")?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_form(p: &ParamArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let (params, _) = params(p)?;
    let s = setup(&params)?;
    let tv = translation_vector(&s.triple.c)?;
    let (ok, pairings) = translation_orthogonality(&s.form, &tv);
    let strings = |v: &[sp4cert::Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    if json {
        emit_json(
            out,
            &json!({
                "gram": s.form.gram(),
                "kernel_dim": s.kernel_dim,
                "translation_vector": strings(&tv.v),
                "translation_pairings": strings(&pairings),
                "pairing_pattern_ok": ok,
            }),
        )?;
    } else {
        writeln!(
            out,
            "Omega (kernel dimension {}):\n{}",
            s.kernel_dim,
            s.form.gram()
        )?;
        writeln!(out, "v = (C - I) e4 = ({})", strings(&tv.v).join(", "))?;
        writeln!(
            out,
            "Omega(e_i, v) = ({}): {}",
            strings(&pairings).join(", "),
            if ok { "ok" } else { "UNEXPECTED" }
        )?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_basis(p: &ParamArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let (params, cert) = params(p)?;
    let s = setup(&params)?;
    let b = basis_for(&s, cert.as_ref())?;
    let labels = ["eps1", "eps2", "eps2*", "eps1*"];
    let vectors: Vec<Vec<String>> = b
        .vectors()
        .iter()
        .map(|v| v.iter().map(ToString::to_string).collect())
        .collect();
    if json {
        emit_json(
            out,
            &json!({
                "vectors": vectors,
                "lambda1": b.lambda1.to_string(),
                "lambda2": b.lambda2.to_string(),
                "gram": b.gram(),
            }),
        )?;
    } else {
        for (label, v) in labels.iter().zip(&vectors) {
            writeln!(out, "{label:<6} ({})", v.join(", "))?;
        }
        writeln!(out, "lambda1 = {}\nlambda2 = {}", b.lambda1, b.lambda2)?;
    }
    Ok(EXIT_OK)
}

fn read_file(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

fn cmd_verify(v: &VerifyArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let cert = match (&v.case, &v.cert) {
        (Some(case), None) => builtin(*case)?,
        (None, Some(path)) => Certificate::from_json(&read_file(path)?)
            .map_err(|e| UsageError(format!("invalid certificate {}: {e}", path.display())))?,
        _ => return Err(UsageError("give exactly one of --case or --cert".into())),
    };
    let report = verify_certificate(&cert);
    if json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        writeln!(out, "{report}")?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn parse_matrix_text(text: &str) -> Result<ExactMatrix, UsageError> {
    let normalized = if text.contains(';') {
        text.to_owned()
    } else {
        text.lines().collect::<Vec<_>>().join(";")
    };
    let m: ExactMatrix = normalized.parse()?;
    if m.rows() != 4 || m.cols() != 4 {
        return Err(UsageError(format!(
            "expected a 4x4 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

fn cmd_classify(c: &ClassifyArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let m = parse_matrix_text(&read_file(&c.matrix)?)?;
    let l1 = parse_rational(&c.lambda1)?;
    let l2 = parse_rational(&c.lambda2)?;
    let class = classify_root_element(&m, &l1, &l2)?;
    if json {
        emit_json(out, &class)?;
    } else {
        writeln!(out, "{class}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_search(a: &SearchArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let (params, cert) = params(&a.params)?;
    let s = setup(&params)?;
    let basis = basis_for(&s, cert.as_ref())?;
    let sign = a
        .sign
        .as_deref()
        .map(str::parse::<Sign>)
        .transpose()
        .map_err(UsageError)?;
    let cfg = SearchConfig {
        conj_depth: a.depth,
        comb_depth: a.comb_depth,
        max_exponent: a.max_exp,
        max_entry_bits: a.max_bits,
        max_candidates: a.max_candidates,
        sign,
        roots: Vec::new(),
    };
    let outcome = search_unipotents(&s.triple, &basis, &cfg)?;
    let sv = if a.sv_depth > 0 {
        Some(sv_criterion_scan(&s.triple, a.sv_depth)?)
    } else {
        None
    };
    if json {
        emit_json(out, &json!({ "search": outcome, "sv_scan": sv }))?;
    } else {
        writeln!(
            out,
            "{} witnesses from {} candidates ({} distinct unipotents){}",
            outcome.witnesses.len(),
            outcome.candidates_examined,
            outcome.pool_size,
            if outcome.truncated { ", TRUNCATED" } else { "" }
        )?;
        for w in &outcome.witnesses {
            writeln!(out, "depth {}  {}  {}", w.depth, w.word, w.classification)?;
        }
        match sv {
            None => {}
            Some(None) => writeln!(
                out,
                "translation-vector scan to length {}: no word found",
                a.sv_depth
            )?,
            Some(Some(w)) => writeln!(
                out,
                "translation-vector scan to length {}: {} with c = {}",
                a.sv_depth, w.word, w.c
            )?,
        }
    }
    Ok(EXIT_OK)
}
