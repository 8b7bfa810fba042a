//! `skewminor` — exact principal-minor analysis of square matrices over
//! the rationals and odd prime fields.
//!
//! Reports are JSON on stdout; prose goes to stderr (suppressed by
//! `--quiet`). Exit codes: 0 affirmative, 1 well-formed negative, 2 input
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use skewminor::clans::{find_nontrivial_clan, hl_indecomposable, is_separable};
use skewminor::io;
use skewminor::matrix::density_report;
use skewminor::minors::{hl_equivalent, is_principally_unimodular, wesp_check};
use skewminor::witness::{recover_witness, reconstruct_from_minors};
use skewminor::{
    apply_witness, flip_on_set, gen_random_dense, gen_skew_cycle, gen_sym_cycle, ClanKind,
    CycleVariant, Error, Matrix, SkewMatrix,
};

#[derive(Parser)]
#[command(name = "skewminor", version, about = "Exact principal-minor analysis over ℚ and GF(p)")]
struct Cli {
    /// Suppress explanatory prose on stderr
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PuMode {
    Direct,
    Wesp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    SkewCycle,
    SymCycle,
    RandomDense,
    Flip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report: skewness, density, separability, clans,
    /// HL-indecomposability
    Analyze { matrix: PathBuf },
    /// Test whether two matrices share all principal minors of order <= k
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Maximum minor order to compare
        #[arg(long)]
        order: usize,
    },
    /// Recover the sign-diagonal/transposition witness relating two dense
    /// skew matrices
    Witness {
        a: PathBuf,
        b: PathBuf,
        /// Check (<=4)-order minor agreement before recovering
        #[arg(long)]
        verify_input: bool,
    },
    /// Apply a witness file to a skew matrix, emitting the image matrix
    Apply {
        matrix: PathBuf,
        witness: PathBuf,
        /// Write the image matrix file here instead of embedding it
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rebuild skew matrices from a minor table of order <= 4
    Reconstruct {
        minors: PathBuf,
        /// Field of the table entries: `rational` or `p=<odd prime>`
        #[arg(long)]
        field: String,
    },
    /// Emit a matrix from one of the built-in families
    Generate {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        /// Field for random-dense: `rational` or `p=<odd prime>`
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated labels to flip on (family `flip`)
        #[arg(long)]
        set: Option<String>,
        /// Input matrix file (family `flip`)
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the matrix file here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check principal unimodularity of a sign matrix
    PuCheck {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "direct")]
        mode: PuMode,
    },
    /// Dump the principal-minor table of a matrix
    Minors {
        matrix: PathBuf,
        /// Maximum minor order (default: the matrix order)
        #[arg(long)]
        order: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

struct Input {
    path: String,
    sha256: String,
    text: String,
}

fn read_input(path: &Path) -> Result<Input, Error> {
    let bytes =
        fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Parse(format!("{}: not valid UTF-8", path.display())))?;
    Ok(Input {
        path: path.display().to_string(),
        sha256: hex(&Sha256::digest(&bytes)),
        text,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn envelope(command: &str, inputs: &[&Input], status: &str, payload: (&str, Value)) -> Value {
    let inputs: Vec<Value> = inputs
        .iter()
        .map(|i| json!({ "path": i.path, "sha256": i.sha256 }))
        .collect();
    let mut obj = Map::new();
    obj.insert("command".into(), json!(command));
    obj.insert("inputs".into(), Value::Array(inputs));
    obj.insert("status".into(), json!(status));
    obj.insert(payload.0.into(), payload.1);
    Value::Object(obj)
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("report serializes"));
}

/// Final report for a command: exit code, status word, and payload.
enum Outcome {
    Ok,
    Negative,
}

fn threads_from_env() -> usize {
    std::env::var("SKEWMINOR_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

fn subset_labels(m: &Matrix, mask: u32) -> Value {
    json!(m.labels_for(mask))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::from(0),
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(_) => ExitCode::from(2),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let result = dispatch(cli);
    if let Err(e) = &result {
        let msg = e.to_string();
        let name = command_name(&cli.command);
        emit(&json!({
            "command": name,
            "inputs": [],
            "status": "input-error",
            "message": msg,
        }));
        if !cli.quiet {
            eprintln!("error: {msg}");
        }
    }
    result
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Compare { .. } => "compare",
        Command::Witness { .. } => "witness",
        Command::Apply { .. } => "apply",
        Command::Reconstruct { .. } => "reconstruct",
        Command::Generate { .. } => "generate",
        Command::PuCheck { .. } => "pu-check",
        Command::Minors { .. } => "minors",
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Analyze { matrix } => cmd_analyze(matrix),
        Command::Compare { a, b, order } => cmd_compare(a, b, *order),
        Command::Witness { a, b, verify_input } => cmd_witness(a, b, *verify_input, cli.quiet),
        Command::Apply { matrix, witness, output } => cmd_apply(matrix, witness, output.as_deref()),
        Command::Reconstruct { minors, field } => cmd_reconstruct(minors, field),
        Command::Generate { family, n, variant, field, seed, set, input, output } => {
            cmd_generate(*family, *n, *variant, field.as_deref(), *seed, set.as_deref(), input.as_deref(), output.as_deref())
        }
        Command::PuCheck { matrix, mode } => cmd_pu_check(matrix, *mode, cli.quiet),
        Command::Minors { matrix, order, output } => {
            cmd_minors(matrix, *order, output.as_deref())
        }
    }
}

fn cmd_analyze(path: &Path) -> Result<Outcome, Error> {
    let input = read_input(path)?;
    let m = io::matrix_from_json(&input.text)?;
    let density = density_report(&m);
    let mut verdict = Map::new();
    verdict.insert("n".into(), json!(m.n()));
    verdict.insert("skew".into(), json!(m.is_skew()));
    verdict.insert("dense".into(), json!(density.dense));
    if let Some((r, c)) = &density.zero_pair {
        verdict.insert("zero_pair".into(), json!([r, c]));
    }
    let clan = find_nontrivial_clan(&m);
    if clan.kind == ClanKind::Clan {
        verdict.insert(
            "nontrivial_clan".into(),
            subset_labels(&m, clan.subset.expect("clan certificate")),
        );
    }
    let hl = hl_indecomposable(&m);
    verdict.insert(
        "hl_indecomposable".into(),
        json!(hl.kind == ClanKind::HlIndecomposable),
    );
    if let Some(sub) = hl.subset {
        verdict.insert("hl_clan".into(), subset_labels(&m, sub));
    }
    if m.is_skew() {
        let skew = SkewMatrix::new(m.clone())?;
        let sep = is_separable(&skew);
        verdict.insert("separable".into(), json!(sep.kind == ClanKind::Separable));
        if let Some((x, y)) = sep.partition {
            verdict.insert(
                "clan_partition".into(),
                json!([m.labels_for(x), m.labels_for(y)]),
            );
        }
    }
    let report = envelope("analyze", &[&input], "ok", ("verdict", Value::Object(verdict)));
    emit(&report);
    let _ = report;
            Ok(Outcome::Ok)
}

fn cmd_compare(a: &Path, b: &Path, order: usize) -> Result<Outcome, Error> {
    let (ia, ib) = (read_input(a)?, read_input(b)?);
    let ma = io::matrix_from_json(&ia.text)?;
    let mb = io::matrix_from_json(&ib.text)?;
    let v = hl_equivalent(&ma, &mb, order)?;
    let verdict = json!({
        "equivalent": v.equivalent,
        "order_checked": v.order_checked,
        "witness_subset": v.witness_subset.map(|s| ma.labels_for(s)),
    });
    let status = if v.equivalent { "ok" } else { "negative" };
    let report = envelope("compare", &[&ia, &ib], status, ("verdict", verdict));
    emit(&report);
    let _ = report;
    Ok(if v.equivalent { Outcome::Ok } else { Outcome::Negative })
}

/// Errors that certify a well-formed negative answer for `witness`, as
/// opposed to unusable input.
fn witness_negative(e: &Error) -> bool {
    matches!(
        e,
        Error::NotDense { .. }
            | Error::HlDecomposable(_)
            | Error::HypothesisViolation { .. }
            | Error::VerificationFailed { .. }
            | Error::Precondition(_)
    )
}

fn cmd_witness(a: &Path, b: &Path, verify_input: bool, quiet: bool) -> Result<Outcome, Error> {
    let (ia, ib) = (read_input(a)?, read_input(b)?);
    let ma = io::skew_matrix_from_json(&ia.text)?;
    let mb = io::skew_matrix_from_json(&ib.text)?;
    match recover_witness(&ma, &mb, verify_input) {
        Ok(w) => {
            let verdict: Value =
                serde_json::from_str(&io::witness_to_json(&w)).expect("witness JSON");
            let report = envelope("witness", &[&ia, &ib], "ok", ("verdict", verdict));
            emit(&report);
            let _ = report;
            Ok(Outcome::Ok)
        }
        Err(e) if witness_negative(&e) => {
            let report = envelope(
                "witness",
                &[&ia, &ib],
                "negative",
                ("certificate", json!(e.to_string())),
            );
            emit(&report);
            if !quiet {
                eprintln!("no witness: {e}");
            }
            let _ = report;
            Ok(Outcome::Negative)
        }
        Err(e) => Err(e),
    }
}

fn cmd_apply(matrix: &Path, witness: &Path, output: Option<&Path>) -> Result<Outcome, Error> {
    let (im, iw) = (read_input(matrix)?, read_input(witness)?);
    let m = io::skew_matrix_from_json(&im.text)?;
    let w = io::witness_from_json(&iw.text)?;
    let image = apply_witness(&m, &w)?;
    let text = io::matrix_to_json(image.matrix());
    if let Some(out) = output {
        fs::write(out, &text).map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
    }
    let verdict: Value = serde_json::from_str(&text).expect("matrix JSON");
    let report = envelope("apply", &[&im, &iw], "ok", ("verdict", verdict));
    emit(&report);
    let _ = report;
            Ok(Outcome::Ok)
}

fn reconstruct_negative(e: &Error) -> bool {
    matches!(
        e,
        Error::OddMinorNonzero(_)
            | Error::ZeroPairMinor(_)
            | Error::NonSquareMinor(_)
            | Error::Inconsistent(_)
    )
}

fn cmd_reconstruct(minors: &Path, field: &str) -> Result<Outcome, Error> {
    let input = read_input(minors)?;
    let spec = io::field_spec_from_arg(field)?;
    let table = io::minor_table_from_json(&input.text, spec)?;
    match reconstruct_from_minors(&table, spec) {
        Ok(reps) => {
            let reps: Vec<Value> = reps
                .iter()
                .map(|r| serde_json::from_str(&io::matrix_to_json(r.matrix())).expect("matrix JSON"))
                .collect();
            let report = envelope(
                "reconstruct",
                &[&input],
                "ok",
                ("verdict", json!({ "representatives": reps })),
            );
            emit(&report);
            let _ = report;
            Ok(Outcome::Ok)
        }
        Err(e) if reconstruct_negative(&e) => {
            let report = envelope(
                "reconstruct",
                &[&input],
                "negative",
                ("certificate", json!(e.to_string())),
            );
            emit(&report);
            let _ = report;
            Ok(Outcome::Negative)
        }
        Err(e) => Err(e),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    family: Family,
    n: Option<usize>,
    variant: Option<Variant>,
    field: Option<&str>,
    seed: Option<u64>,
    set: Option<&str>,
    input: Option<&Path>,
    output: Option<&Path>,
) -> Result<Outcome, Error> {
    let need_n = || n.ok_or_else(|| Error::Parse("--n is required for this family".into()));
    let var = || match variant.unwrap_or(Variant::A) {
        Variant::A => CycleVariant::A,
        Variant::B => CycleVariant::B,
    };
    let matrix = match family {
        Family::SkewCycle => gen_skew_cycle(need_n()?, var())?.into_matrix(),
        Family::SymCycle => gen_sym_cycle(need_n()?, var())?,
        Family::RandomDense => {
            let spec = io::field_spec_from_arg(field.unwrap_or("rational"))?;
            gen_random_dense(spec, need_n()?, seed.unwrap_or(0)).into_matrix()
        }
        Family::Flip => {
            let path =
                input.ok_or_else(|| Error::Parse("--input is required for flip".into()))?;
            let set =
                set.ok_or_else(|| Error::Parse("--set is required for flip".into()))?;
            let m = io::skew_matrix_from_json(&read_input(path)?.text)?;
            let labels: Vec<String> = if set.is_empty() {
                Vec::new()
            } else {
                set.split(',').map(|s| s.trim().to_owned()).collect()
            };
            let mask = m.mask_of_labels(&labels)?;
            flip_on_set(&m, mask).into_matrix()
        }
    };
    let text = io::matrix_to_json(&matrix);
    match output {
        Some(out) => {
            fs::write(out, &text).map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?
        }
        None => println!("{text}"),
    }
    Ok(Outcome::Ok)
}

fn cmd_pu_check(matrix: &Path, mode: PuMode, quiet: bool) -> Result<Outcome, Error> {
    let input = read_input(matrix)?;
    let m = io::matrix_from_json(&input.text)?;
    let unimodular = match mode {
        PuMode::Direct => is_principally_unimodular(&m)?,
        PuMode::Wesp => {
            if m.n() < 4 && !quiet {
                eprintln!("warning: the order-4 criterion is vacuous below n = 4");
            }
            wesp_check(&SkewMatrix::new(m.clone())?)?
        }
    };
    let verdict = json!({
        "mode": match mode { PuMode::Direct => "direct", PuMode::Wesp => "wesp" },
        "principally_unimodular": unimodular,
    });
    let status = if unimodular { "ok" } else { "negative" };
    let report = envelope("pu-check", &[&input], status, ("verdict", verdict));
    emit(&report);
    let _ = report;
    Ok(if unimodular { Outcome::Ok } else { Outcome::Negative })
}

fn cmd_minors(matrix: &Path, order: Option<usize>, output: Option<&Path>) -> Result<Outcome, Error> {
    let input = read_input(matrix)?;
    let m = io::matrix_from_json(&input.text)?;
    let k = order.unwrap_or(m.n());
    let table = skewminor::principal_minors_with_threads(&m, k, threads_from_env());
    let text = io::minor_table_to_json(&table);
    match output {
        Some(out) => {
            fs::write(out, &text).map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?
        }
        None => println!("{text}"),
    }
    Ok(Outcome::Ok)
}
