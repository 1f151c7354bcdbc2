use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use jactors::classify::{classify, ClassifyError, RankTable, Target};
use jactors::mwtors::{find_model, load_model_file, CurveModel, Mode, MwError, TorsionEngine};
use jactors::qfield::MultiQuadField;
use jactors::suite;

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_OPEN: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "jactors", version, about = "Torsion of modular Jacobians over multi-quadratic fields")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Group structure of J(F_{p^f}) with a zeta-function cross-check
    JacStructure {
        /// builtin label such as X1(18), or a model JSON file
        #[arg(long)]
        model: String,
        /// model label to pick when the file holds several
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        deg: u32,
    },
    /// J(K)_tors for a builtin model
    Torsion {
        #[arg(long)]
        model: String,
        /// comma-separated squarefree generators, or Q
        #[arg(long, default_value = "Q", allow_hyphen_values = true)]
        field: String,
        #[arg(long, default_value = "derive")]
        mode: Mode,
        /// reduction primes replacing the model defaults
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Existence of elliptic curves with a given torsion subgroup
    Classify {
        /// target such as 14 or 2x12
        #[arg(long)]
        torsion: String,
        #[arg(long, default_value = "Q", allow_hyphen_values = true)]
        field: String,
        /// `defaults`, or a rank JSON file merged over the defaults
        #[arg(long, default_value = "defaults")]
        ranks: String,
    },
    /// Run the shipped checks
    Verify {
        #[arg(long, conflicts_with = "only")]
        all: bool,
        /// a model label, `exceptional` or `classify`
        #[arg(long)]
        only: Option<String>,
    },
}

struct Failure(u8, String);

impl From<MwError> for Failure {
    fn from(e: MwError) -> Self {
        let code = match e {
            MwError::Discrepancy { .. } => EXIT_MISMATCH,
            MwError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        Failure(code, e.to_string())
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Model(m) => m.into(),
            e => Failure(EXIT_INVALID, e.to_string()),
        }
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure(EXIT_INVALID, e.to_string())
}

fn field(s: &str) -> Result<MultiQuadField, Failure> {
    MultiQuadField::parse(s).map_err(invalid)
}

fn resolve_model(arg: &str, label: Option<&str>) -> Result<CurveModel, Failure> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(find_model(arg)?);
    }
    let models = load_model_file(path)?;
    match (label, models.len()) {
        (None, 1) => Ok(models.into_iter().next().unwrap()),
        (None, n) => Err(invalid(format!("{} holds {} models; choose one with --label", arg, n))),
        (Some(l), _) => models
            .into_iter()
            .find(|m| m.label.eq_ignore_ascii_case(l))
            .ok_or_else(|| invalid(format!("no model {} in {}", l, arg))),
    }
}

#[derive(Serialize)]
struct StructureReport {
    model: String,
    p: u64,
    f: u32,
    q: u64,
    structure: Vec<u64>,
    order: u64,
    zeta_order: u64,
    consistent: bool,
}

fn jac_structure(model: &str, label: Option<&str>, p: u64, f: u32) -> Result<(Value, u8), Failure> {
    let m = resolve_model(model, label)?;
    if f == 0 || f > 2 {
        return Err(invalid("--deg must be 1 or 2"));
    }
    if m.n() % p == 0 {
        return Err(invalid(format!("{} divides the level of {}", p, m.label)));
    }
    let (s, zeta) = suite::zeta_cross_check(&m.curve()?, p, f)?;
    let r = StructureReport {
        model: m.label,
        p,
        f,
        q: p.pow(f),
        structure: s.factors().to_vec(),
        order: s.order(),
        zeta_order: zeta,
        consistent: s.order() == zeta,
    };
    let code = if r.consistent { 0 } else { EXIT_INTERNAL };
    Ok((serde_json::to_value(r).unwrap(), code))
}

fn torsion(model: &str, lit: &str, mode: Mode, primes: Option<Vec<u64>>) -> Result<(Value, u8), Failure> {
    let k = field(lit)?;
    let mut engine = TorsionEngine::new(find_model(model)?)?;
    if let Some(ps) = primes {
        engine = engine.with_primes(ps);
    }
    let r = engine.torsion_table(&k, mode)?;
    let code = if r.closed { 0 } else { EXIT_OPEN };
    Ok((serde_json::to_value(r).unwrap(), code))
}

fn classify_cmd(torsion: &str, lit: &str, ranks: &str) -> Result<(Value, u8), Failure> {
    let target = Target::parse(torsion)?;
    let k = field(lit)?;
    let table = match ranks {
        "defaults" => RankTable::defaults(),
        path => RankTable::defaults().merged(&RankTable::load(Path::new(path))?),
    };
    let v = classify(&target, &k, &table)?;
    Ok((serde_json::to_value(v).unwrap(), 0))
}

fn verify(all: bool, only: Option<&str>) -> Result<(Value, u8), Failure> {
    if !all && only.is_none() {
        return Err(invalid("pass --all or --only NAME"));
    }
    let r = suite::run(only)?;
    let code = if r.ok() { 0 } else { EXIT_MISMATCH };
    Ok((serde_json::to_value(r).unwrap(), code))
}

/// Leaves of a JSON value as `(dotted path, scalar)` pairs in document order.
fn flatten(v: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{}.{}", prefix, k) };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(x, &key(k), out)),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(xs) => xs.iter().enumerate().for_each(|(i, x)| flatten(x, &key(&i.to_string()), out)),
        x => out.push((prefix.to_string(), scalar(x))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        x => x.to_string(),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).unwrap(),
        Format::Tsv | Format::Text => {
            let mut rows = vec![];
            flatten(v, "", &mut rows);
            let sep = if matches!(format, Format::Tsv) { "\t" } else { ": " };
            rows.iter().map(|(k, x)| format!("{}{}{}", k, sep, x)).collect::<Vec<_>>().join("\n")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::JacStructure { model, label, prime, deg } => jac_structure(model, label.as_deref(), *prime, *deg),
        Cmd::Torsion { model, field, mode, primes } => torsion(model, field, *mode, primes.clone()),
        Cmd::Classify { torsion, field, ranks } => classify_cmd(torsion, field, ranks),
        Cmd::Verify { all, only } => verify(*all, only.as_deref()),
    };
    match result {
        Ok((v, code)) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout(), "{}", render(&v, cli.format));
            ExitCode::from(code)
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(code)
        }
    }
}
