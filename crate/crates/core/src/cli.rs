//! Command-line front end. `run` holds all the logic so it can be driven from
//! tests with in-memory writers; the binary only forwards `std::env::args`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::audit::{audit_all, results_csv, summary_table, Suite};
use crate::braiding::{r_operator, yang_baxter_table, BraidParams};
use crate::circuit::{execute, parse_bytes, ExecError, ExecOptions};
use crate::fracnoise::{fbm_paths_arfima, fbm_paths_exact, hurst_estimate, FbmConfig, FbmPath, NoiseError};
use crate::grading::GradeBasis;
use crate::linalg::{haar_unitary, parse_complex_matrix_csv, CMat};
use crate::ququart::cartan::{synthesize_su4, Synthesis, UNITARY_TOL};
use crate::ququart::{truth_table, truth_table_audit, truth_table_csv, truth_table_text, GradeMode, TruthKind};
use crate::spin_chain::{central_charge_fit, entropy_csv, ChainError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IDENTITY: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Residual above which `yang-baxter` reports a breach.
pub const YBE_TOL: f64 = 1e-12;

const FORMATS: &str = "\
Output: tabular results go to stdout as CSV (or one JSON document with --json);
human-readable summaries go to stderr.

File formats:
  circuit files   ququart DSL: `ququart q;`, `param t = 0.5;`, `gate <Name>[(angle)] q;`,
                  `qplate pi q;`, `declare-interface <Gate>;`, `assert-grade q (a,b);`,
                  `measure q;`, comments start with `#`
  --matrix CSV    four rows of eight numbers `re,im,re,im,...` (row-major); a header
                  line starting with a letter and `#` comments are skipped
  fbm CSV         column `t` then one column per path

Exit codes: 0 success, 1 usage or input error, 2 assertion or identity failure,
3 numerical failure.

Environment: PARAGRADE_SEED sets the default --seed.";

#[derive(Debug, Parser)]
#[command(name = "paragrade", version, about = "Graded para-statistics toolkit: audits, ququart circuits, XY entropy, fractional noise", after_help = FORMATS)]
pub struct Cli {
    /// Emit a single JSON document on stdout instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a circuit file; strict grade conservation unless --permissive.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        permissive: bool,
        /// Seed for measurement outcomes.
        #[arg(long, env = "PARAGRADE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run every algebraic identity suite; exit 2 on any breach.
    AuditAlgebra {
        /// Deliberately perturb one suite (to check the audit itself).
        #[arg(long, value_parser = parse_suite)]
        perturb: Option<Suite>,
    },
    /// Entanglement entropy of the periodic XX chain and the central-charge fit.
    XyEntropy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lmin: usize,
        #[arg(long)]
        lmax: usize,
    },
    /// Fractional Brownian motion paths on [0, 1].
    Fbm(FbmArgs),
    /// Decompose SU(4) elements into CNOTs and single-qubit rotations.
    Synthesize(SynthArgs),
    /// Evaluate a graded truth table against the printed one.
    TruthTable {
        kind: KindArg,
        #[arg(long)]
        csv: bool,
    },
    /// Yang-Baxter residuals of the deformed braiding with q = exp(i phase).
    YangBaxter {
        /// Phase of q in radians.
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
    },
}

#[derive(Debug, Args)]
pub struct FbmArgs {
    #[arg(long)]
    pub hurst: f64,
    /// Number of increments per path.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
    #[arg(long, env = "PARAGRADE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    /// ARFIMA truncation length.
    #[arg(long, default_value_t = 1024)]
    pub truncation: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Arfima,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SynthTarget {
    /// Synthesize this many Haar-random elements.
    #[arg(long)]
    pub random: Option<usize>,
    /// Synthesize the matrix in this CSV file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub target: SynthTarget,
    #[arg(long, env = "PARAGRADE_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Cnot,
    Toffoli,
}

impl From<KindArg> for TruthKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Cnot => TruthKind::Cnot,
            KindArg::Toffoli => TruthKind::Toffoli,
        }
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
}

// Write failures on stdout/stderr have nowhere better to go.
macro_rules! say {
    ($w:expr, $($t:tt)*) => {{ let _ = write!($w, $($t)*); }};
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    say!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    say!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Io { out, err, json: cli.json };
    match cli.command {
        Command::Simulate { file, permissive, seed } => simulate(&mut io, &file, permissive, seed),
        Command::AuditAlgebra { perturb } => audit(&mut io, perturb),
        Command::XyEntropy { n, lmin, lmax } => xy_entropy(&mut io, n, lmin, lmax),
        Command::Fbm(a) => fbm(&mut io, &a),
        Command::Synthesize(a) => synthesize(&mut io, &a),
        Command::TruthTable { kind, csv } => truth(&mut io, kind.into(), csv),
        Command::YangBaxter { q } => yang_baxter(&mut io, q),
    }
}

fn emit_json(io: &mut Io, v: serde_json::Value) {
    say!(io.out, "{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"));
}

fn simulate(io: &mut Io, file: &PathBuf, permissive: bool, seed: u64) -> i32 {
    let bytes = match std::fs::read(file) {
        Ok(b) => b,
        Err(e) => {
            say!(io.err, "cannot read {}: {e}\n", file.display());
            return EXIT_USAGE;
        }
    };
    let prog = match parse_bytes(&bytes) {
        Ok(p) => p,
        Err(diags) => {
            for d in &diags {
                say!(io.err, "{}:{d}\n", file.display());
            }
            return EXIT_USAGE;
        }
    };
    let mode = if permissive { GradeMode::Permissive } else { GradeMode::Strict };
    let report = match execute(&prog, ExecOptions { mode, seed }) {
        Ok(r) => r,
        Err(e) => {
            say!(io.err, "{}:{e}\n", file.display());
            return match e {
                ExecError::Resolve { .. } => EXIT_USAGE,
                _ => EXIT_IDENTITY,
            };
        }
    };
    if io.json {
        emit_json(io, json!(report));
    } else {
        say!(io.out, "{}", report.state_csv());
    }
    for r in &report.registers {
        say!(io.err, "register {}: charge {}, status {:?}\n", r.name, r.ledger.charge, r.status);
        for (e, s) in r.ledger.entries.iter().zip(&r.gate_spans) {
            let tag = if e.interface { " interface" } else { "" };
            say!(io.err, "  {s} {:<12} delta {} cumulative {}{tag}\n", e.gate, e.delta, e.cumulative);
        }
        for m in &r.measurements {
            say!(io.err, "  {} measured grade {}\n", m.span, m.outcome);
        }
    }
    say!(io.err, "{} assertion(s) passed\n", report.assertions_passed);
    EXIT_OK
}

fn audit(io: &mut Io, perturb: Option<Suite>) -> i32 {
    let results = audit_all(perturb);
    if io.json {
        emit_json(io, json!(results));
    } else {
        say!(io.out, "{}", results_csv(&results));
    }
    say!(io.err, "{}", summary_table(&results));
    if results.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_IDENTITY
    }
}

fn chain_exit(e: &ChainError) -> i32 {
    match e {
        ChainError::DegenerateFermiLevel(_)
        | ChainError::ZeroVariance
        | ChainError::NotHermitian(_)
        | ChainError::DegenerateGroundState(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn xy_entropy(io: &mut Io, n: usize, lmin: usize, lmax: usize) -> i32 {
    let fit = match central_charge_fit(n, lmin, lmax) {
        Ok(f) => f,
        Err(e) => {
            say!(io.err, "xy-entropy: {e}\n");
            return chain_exit(&e);
        }
    };
    if io.json {
        emit_json(io, json!(fit));
    } else {
        say!(io.out, "{}", entropy_csv(&fit.points));
    }
    say!(io.err, "c = {:.2}±{:.2}\n", fit.c, fit.c_se);
    say!(io.err, "fit against ln(l) without the chord correction: c = {:.3}\n", fit.raw_c);
    EXIT_OK
}

fn paths_csv(paths: &[FbmPath]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["t".to_string()];
    head.extend((0..paths.len()).map(|i| format!("path{i}")));
    w.write_record(&head).expect("in-memory csv");
    for k in 0..paths[0].times.len() {
        let mut row = vec![format!("{:.12}", paths[0].times[k])];
        row.extend(paths.iter().map(|p| format!("{:.17e}", p.values[k])));
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn noise_exit(e: &NoiseError) -> i32 {
    match e {
        NoiseError::NotPositiveDefinite { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn fbm(io: &mut Io, a: &FbmArgs) -> i32 {
    if a.paths == 0 {
        say!(io.err, "fbm: --paths must be at least 1\n");
        return EXIT_USAGE;
    }
    let generated = FbmConfig::unit_interval(a.hurst, a.n, a.seed).and_then(|cfg| match a.method {
        Method::Exact => fbm_paths_exact(&cfg, a.paths),
        Method::Arfima => fbm_paths_arfima(&cfg, a.truncation, a.paths),
    });
    let paths = match generated {
        Ok(p) => p,
        Err(e) => {
            say!(io.err, "fbm: {e}\n");
            return noise_exit(&e);
        }
    };
    let body = if io.json {
        let v = json!({ "hurst": a.hurst, "seed": a.seed, "method": format!("{:?}", a.method).to_lowercase(),
                        "times": paths[0].times, "paths": paths.iter().map(|p| &p.values).collect::<Vec<_>>() });
        serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
    } else {
        paths_csv(&paths)
    };
    match &a.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                say!(io.err, "cannot write {}: {e}\n", path.display());
                return EXIT_USAGE;
            }
        }
        None => say!(io.out, "{body}"),
    }
    say!(io.err, "{} path(s), n = {}, H = {}, method {:?}, seed {}\n", paths.len(), a.n, a.hurst, a.method, a.seed);
    if let Ok(est) = hurst_estimate(&paths[0].values) {
        say!(io.err, "path0 Hurst estimate {:.3} ± {:.3} ({} frequencies)\n", est.hurst, est.std_error, est.frequencies);
    }
    EXIT_OK
}

fn synth_row(i: usize, s: &Synthesis) -> String {
    format!("{i},{},{},{:.12},{:.12},{:.12},{:e}\n", s.cnots, s.rotations, s.coords.c1, s.coords.c2, s.coords.c3, s.error)
}

fn synthesize(io: &mut Io, a: &SynthArgs) -> i32 {
    let targets: Vec<CMat> = match (&a.target.random, &a.target.matrix) {
        (Some(k), _) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            (0..*k).map(|_| haar_unitary(4, &mut rng)).collect()
        }
        (None, Some(path)) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    say!(io.err, "cannot read {}: {e}\n", path.display());
                    return EXIT_USAGE;
                }
            };
            match parse_complex_matrix_csv(&text) {
                Ok(m) if m.nrows() == 4 && m.ncols() == 4 => vec![m],
                Ok(m) => {
                    say!(io.err, "{}: expected a 4x4 matrix, got {}x{}\n", path.display(), m.nrows(), m.ncols());
                    return EXIT_USAGE;
                }
                Err(e) => {
                    say!(io.err, "{}: {e}\n", path.display());
                    return EXIT_USAGE;
                }
            }
        }
        (None, None) => unreachable!("clap enforces one target"),
    };
    let mut results = Vec::new();
    for (i, u) in targets.iter().enumerate() {
        match synthesize_su4(u) {
            Ok(s) => results.push(s),
            Err(e) => {
                say!(io.err, "synthesize: element {i}: {e}\n");
                return match e {
                    crate::ququart::QuquartError::NotUnitary(_) | crate::ququart::QuquartError::BadShape(_) => EXIT_USAGE,
                    _ => EXIT_NUMERICAL,
                };
            }
        }
    }
    if io.json {
        let docs: Vec<_> = results
            .iter()
            .map(|s| json!({ "cnots": s.cnots, "rotations": s.rotations, "coords": s.coords, "error": s.error,
                             "dsl": crate::circuit::circuit_to_dsl("q", &s.gates) }))
            .collect();
        emit_json(io, json!(docs));
    } else if a.target.matrix.is_some() {
        say!(io.out, "{}", crate::circuit::circuit_to_dsl("q", &results[0].gates));
    } else {
        say!(io.out, "index,cnots,rotations,c1,c2,c3,error\n");
        for (i, s) in results.iter().enumerate() {
            say!(io.out, "{}", synth_row(i, s));
        }
    }
    let worst = results.iter().map(|s| s.error).fold(0.0, f64::max);
    let max_cnots = results.iter().map(|s| s.cnots).max().unwrap_or(0);
    say!(io.err, "{} element(s), at most {max_cnots} CNOTs, worst error {worst:.3e}\n", results.len());
    if worst > UNITARY_TOL {
        say!(io.err, "synthesis error exceeds {UNITARY_TOL:e}\n");
        return EXIT_NUMERICAL;
    }
    EXIT_OK
}

fn truth(io: &mut Io, kind: TruthKind, csv: bool) -> i32 {
    let rows = truth_table(kind);
    let audit = truth_table_audit(kind);
    if io.json {
        emit_json(io, json!({ "rows": rows, "audit": audit }));
    } else if csv {
        say!(io.out, "{}", truth_table_csv(kind, &rows));
    } else {
        say!(io.out, "{}", truth_table_text(kind, &rows));
    }
    if audit.mismatched_rows.is_empty() {
        say!(io.err, "all {} printed rows reproduced\n", audit.rows);
        EXIT_OK
    } else {
        say!(io.err, "rows differing from the printed table: {:?}\n", audit.mismatched_rows);
        EXIT_IDENTITY
    }
}

fn yang_baxter(io: &mut Io, phase: f64) -> i32 {
    if !phase.is_finite() {
        say!(io.err, "yang-baxter: phase must be finite\n");
        return EXIT_USAGE;
    }
    let rop = r_operator(&BraidParams::from_phase(phase), &GradeBasis::default());
    let table = yang_baxter_table(&rop);
    if io.json {
        emit_json(io, json!({ "phase": phase, "triples": table }));
    } else {
        say!(io.out, "x,y,z,ybe,braid,bicharacter\n");
        for t in &table {
            let b = t.bicharacter.map_or(String::new(), |v| format!("{v:e}"));
            say!(io.out, "{},{},{},{:e},{:e},{b}\n", t.x, t.y, t.z, t.ybe, t.braid);
        }
    }
    let worst = table.iter().map(|t| t.ybe.max(t.braid).max(t.bicharacter.unwrap_or(0.0))).fold(0.0, f64::max);
    let bad = table.iter().filter(|t| t.ybe.max(t.braid).max(t.bicharacter.unwrap_or(0.0)) > YBE_TOL).count();
    say!(io.err, "q = exp({phase} i): max residual {worst:.3e} over 64 triples, {bad} above {YBE_TOL:e}\n");
    if bad == 0 {
        EXIT_OK
    } else {
        EXIT_IDENTITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["paragrade"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["synthesize"]).0, EXIT_USAGE);
        assert_eq!(call(&["synthesize", "--random", "1", "--matrix", "x.csv"]).0, EXIT_USAGE);
        assert_eq!(call(&["audit-algebra", "--perturb", "nope"]).0, EXIT_USAGE);
        assert_eq!(call(&["xy-entropy", "--n", "7", "--lmin", "1", "--lmax", "3"]).0, EXIT_USAGE);
        assert_eq!(call(&["fbm", "--hurst", "1.5", "--n", "16"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("Exit codes"));
    }

    #[test]
    fn truth_table_text_and_csv() {
        let (code, out, _) = call(&["truth-table", "cnot", "--csv"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("control,"));
        assert_eq!(call(&["truth-table", "toffoli"]).0, EXIT_OK);
    }

    #[test]
    fn yang_baxter_undeformed_is_clean() {
        let (code, out, _) = call(&["yang-baxter", "--q", "0"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 65);
    }

    #[test]
    fn fbm_is_deterministic() {
        let a = call(&["fbm", "--hurst", "0.7", "--n", "64", "--paths", "3", "--seed", "9"]);
        let b = call(&["fbm", "--hurst", "0.7", "--n", "64", "--paths", "3", "--seed", "9"]);
        assert_eq!(a.0, EXIT_OK);
        assert_eq!(a.1, b.1);
        assert_eq!(a.1.lines().count(), 66);
    }

    #[test]
    fn synthesize_random_json() {
        let (code, out, _) = call(&["--json", "synthesize", "--random", "2", "--seed", "3"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
        assert!(v[0]["cnots"].as_u64().unwrap() <= 3);
    }
}
