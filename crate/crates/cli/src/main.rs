//! `twistor`: runs the verification suites of `twistor-core` and writes a
//! JSON or text report.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 when
//! the flags or an input file are malformed.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use twistor_core::{curvature, twistor, verify, CurvatureTensor, Error, SymplecticSpace};

#[derive(Parser, Debug)]
#[command(name = "twistor", version, about = "Exact checks of symplectic spinor algebra and twistor symbol sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Operator identities of the osp(1|2) action on every window.
    Relations,
    /// Scalar table, component bases, chain model and the neighbour rule.
    Decompose,
    /// Closed-form projection of wedges onto the edge.
    Project,
    /// Complex property and exactness of the symbol sequences.
    SymbolCheck,
    /// Ricci and Weyl parts of a curvature tensor read from --input.
    Curvature,
    /// A pseudorandom Ricci-type curvature tensor from --seed.
    GenCurvature,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Half the dimension of the symplectic space.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    l: u32,
    /// Spinor degree bound D of the windows.
    #[arg(long, global = true, default_value_t = 2)]
    degree: u32,
    /// Extra spinor degree allowed when searching preimages.
    #[arg(long, global = true, default_value_t = 4)]
    slack: u32,
    /// Covector: "canonical" or 2l comma separated rationals such as "0,0,1,0".
    #[arg(long, global = true, default_value = "canonical")]
    xi: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Curvature tensor JSON file.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

/// A report and whether every check in it passed.
struct Outcome {
    report: Value,
    passed: bool,
}

impl Outcome {
    fn new(report: &impl Serialize, passed: bool) -> Self {
        Outcome { report: serde_json::to_value(report).expect("reports serialize"), passed }
    }
}

/// A malformed flag or input file.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

fn run(command: Command, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let sp = SymplecticSpace::standard(cfg.l as usize)?;
    let d = cfg.degree;
    Ok(match command {
        Command::Relations => {
            let r = verify::relations_suite(&sp, d)?;
            Outcome::new(&r, r.passed())
        }
        Command::Decompose => {
            let r = verify::decompose_suite(&sp, d)?;
            Outcome::new(&r, r.passed())
        }
        Command::Project => {
            let r = verify::project_suite(&sp, d)?;
            Outcome::new(&r, r.passed())
        }
        Command::SymbolCheck => {
            let xi = twistor::parse_xi(&sp, &cfg.xi)?;
            let r = verify::symbol_suite(&sp, d, &xi, cfg.xi.trim(), cfg.slack)?;
            Outcome::new(&r, r.passed())
        }
        Command::Curvature => {
            let path = cfg.input.as_ref().ok_or_else(|| Failure("curvature needs --input <file>".into()))?;
            let text = fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
            let json: Value = serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let tensor = CurvatureTensor::from_json(&json)?;
            let sp = SymplecticSpace::standard(tensor.l())?;
            let r = verify::curvature_suite(&sp, &tensor)?;
            Outcome::new(&r, true)
        }
        Command::GenCurvature => {
            let tensor = curvature::random_ricci_type(&sp, cfg.seed);
            let ok = tensor.validate().is_ok() && curvature::is_ricci_type(&sp, &tensor)?;
            Outcome { report: tensor.to_json(), passed: ok }
        }
    })
}

/// One line per leaf, keyed by its path; arrays of records get one line per record.
fn render_text(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) if is_scalar(v) => {
            let _ = writeln!(out, "{path} = {}", scalar_text(map));
        }
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                render_text(x, &p, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| x.is_object() && !is_scalar(x)) && !items.is_empty() => {
            for (k, x) in items.iter().enumerate() {
                let fields: Vec<String> = x
                    .as_object()
                    .expect("checked")
                    .iter()
                    .map(|(key, val)| format!("{key}={}", inline(val)))
                    .collect();
                let _ = writeln!(out, "{path}[{k}] {}", fields.join(" "));
            }
        }
        leaf => {
            let _ = writeln!(out, "{path} = {}", inline(leaf));
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    v.as_object().is_some_and(|m| m.len() == 2 && m.contains_key("re") && m.contains_key("im"))
}

fn scalar_text(m: &serde_json::Map<String, Value>) -> String {
    let part = |k: &str| m[k].as_str().unwrap_or_default().trim_end_matches("/1").to_string();
    let (re, im) = (part("re"), part("im"));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ => format!("{re}+{im}i").replace("+-", "-"),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if is_scalar(v) => scalar_text(m),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(",")),
        Value::Object(m) => format!("{{{}}}", m.iter().map(|(k, x)| format!("{k}:{}", inline(x))).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            render_text(&outcome.report, "", &mut s);
            let _ = writeln!(s, "result = {}", if outcome.passed { "pass" } else { "fail" });
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = &cli.config;
    let result = run(cli.command, cfg).and_then(|outcome| {
        let text = render(&outcome, cfg.format);
        match &cfg.out {
            Some(path) => fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("twistor: {msg}");
            ExitCode::from(2)
        }
    }
}
