use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use slk_core::arith::{HurwitzTable, TableCache};
use slk_core::lattice11::Lattice11;
use slk_core::lift_numeric::{lift_hypergeometric, lift_simplified, LiftInput, LiftPoint, LiftTerm};
use slk_core::selftest::{self, SelfCheck};
use slk_core::verifier::{self, Convention, Parity, Status, VerificationReport};
use slk_core::{rat, Error};

#[derive(Parser, Debug)]
#[command(name = "slk", version, about = "Exact verification of class-number and theta-lift identities")]
struct Cli {
    /// Table cache directory (defaults to $SLK_CACHE_DIR, then ./.slk-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify identities and print reports.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Build precomputed tables.
    #[command(subcommand)]
    Tables(TablesCommand),
    /// Evaluate the theta lift numerically.
    #[command(subcommand)]
    Lift(LiftCommand),
    /// Run the library-versus-oracle checks.
    Selftest(Output),
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the output to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ParityArg {
    Odd,
    Even,
}

#[derive(Args, Debug, Clone)]
struct Identity {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    j: u32,
    /// Number of coefficients to check (default max(60, 4·Sturm bound)).
    #[arg(long)]
    terms: Option<u32>,
    /// Check the corrected reading instead of the printed one.
    #[arg(long)]
    adjusted: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    Classical {
        #[arg(long, default_value_t = 500)]
        tmax: u64,
        #[command(flatten)]
        output: Output,
    },
    Mertens {
        #[arg(long, value_enum, default_value_t = ParityArg::Odd)]
        parity: ParityArg,
        #[command(flatten)]
        id: Identity,
    },
    AhlgrenKim(Identity),
    Vector(Identity),
    All {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        jmax: u32,
        #[arg(long, default_value_t = 500)]
        tmax: u64,
        #[arg(long)]
        adjusted: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum TablesCommand {
    Hurwitz {
        #[arg(long)]
        max: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum LiftCommand {
    Eval {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        j: u32,
        /// `Y1,Y2`: integers for a special point, decimals for a general one.
        #[arg(long)]
        point: String,
        /// Lines `coset_t,coset_r,m_num,m_den,c_value`.
        #[arg(long)]
        coeffs: PathBuf,
        /// Work in Z(d) + Z(-d).
        #[arg(long, default_value_t = 1)]
        scale: i64,
        #[command(flatten)]
        output: Output,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_PRECISION: u8 = 3;

fn exit_for(statuses: impl IntoIterator<Item = Status>) -> u8 {
    let mut code = EXIT_OK;
    for s in statuses {
        match s {
            Status::Failed => return EXIT_FAILED,
            Status::InsufficientPrecision => code = EXIT_PRECISION,
            Status::Verified => {}
        }
    }
    code
}

fn emit(output: &Output, text: String) -> Result<(), String> {
    print!("{text}");
    if let Some(path) = &output.out {
        std::fs::write(path, text.as_bytes()).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(())
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render_reports(reports: &[VerificationReport], format: Format, single: bool) -> String {
    match format {
        Format::Json if single => render_json(&reports[0].to_json()),
        Format::Json => render_json(&Value::Array(reports.iter().map(|r| r.to_json()).collect())),
        Format::Text => reports.iter().map(|r| r.to_text()).collect(),
    }
}

fn convention(adjusted: bool) -> Convention {
    if adjusted {
        Convention::Adjusted
    } else {
        Convention::Literal
    }
}

fn verify(cmd: VerifyCommand, cache: &TableCache) -> Result<u8, String> {
    let err = |e: Error| e.to_string();
    let (reports, output, single) = match cmd {
        VerifyCommand::Classical { tmax, output } => {
            (vec![verifier::verify_classical(tmax, Some(cache))], output, true)
        }
        VerifyCommand::Mertens { parity, id } => {
            let p = match parity {
                ParityArg::Odd => Parity::Odd,
                ParityArg::Even => Parity::Even,
            };
            let r = verifier::verify_mertens(id.j, id.terms, p, convention(id.adjusted), Some(cache)).map_err(err)?;
            (vec![r], id.output, true)
        }
        VerifyCommand::AhlgrenKim(id) => {
            let r = verifier::verify_ahlgren_kim(id.j, id.terms, convention(id.adjusted)).map_err(err)?;
            (vec![r], id.output, true)
        }
        VerifyCommand::Vector(id) => {
            let r = verifier::verify_vector(id.j, id.terms, convention(id.adjusted), Some(cache)).map_err(err)?;
            (vec![r], id.output, true)
        }
        VerifyCommand::All { jmax, tmax, adjusted, output } => {
            let r = verifier::verify_all(jmax, tmax, convention(adjusted), Some(cache)).map_err(err)?;
            (r, output, false)
        }
    };
    emit(&output, render_reports(&reports, output.format, single))?;
    Ok(exit_for(reports.iter().map(|r| r.status.clone())))
}

fn tables(cmd: TablesCommand, cache: &TableCache) -> Result<u8, String> {
    let TablesCommand::Hurwitz { max, out } = cmd;
    let table = HurwitzTable::load_or_build(max, Some(cache));
    std::fs::write(&out, table.as_table().to_text()).map_err(|e| format!("writing {}: {e}", out.display()))?;
    println!("wrote H(0..={max}) to {}", out.display());
    Ok(EXIT_OK)
}

fn parse_point(s: &str) -> Result<LiftPoint, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("--point expects Y1,Y2, got {s:?}"));
    };
    if let (Ok(y1), Ok(y2)) = (a.parse::<i64>(), b.parse::<i64>()) {
        return Ok(LiftPoint::Special(y1, y2));
    }
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(y1), Ok(y2)) => Ok(LiftPoint::Real(y1, y2)),
        _ => Err(format!("--point expects two numbers, got {s:?}")),
    }
}

fn parse_coeffs(path: &Path) -> Result<Vec<LiftTerm>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    let mut terms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || format!("{}:{}: expected coset_t,coset_r,m_num,m_den,c_value", path.display(), i + 1);
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(bad());
        }
        let ints: Vec<i64> = f[..4].iter().map(|x| x.parse()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let c: f64 = f[4].parse().map_err(|_| bad())?;
        if ints[3] == 0 {
            return Err(bad());
        }
        terms.push(LiftTerm { coset: vec![ints[0], ints[1]], m: rat(ints[2], ints[3]), c });
    }
    Ok(terms)
}

fn lift(cmd: LiftCommand) -> Result<u8, String> {
    let LiftCommand::Eval { j, point, coeffs, scale, output } = cmd;
    if scale < 1 {
        return Err("--scale must be at least 1".into());
    }
    let point = parse_point(&point)?;
    let input = LiftInput { lattice: Lattice11::scaled(scale), terms: parse_coeffs(&coeffs)?, j, point: point.clone() };
    let series = lift_hypergeometric(&input);
    let simplified = match point {
        LiftPoint::Special(..) => Some(lift_simplified(&input)),
        LiftPoint::Real(..) => None,
    };
    if let (Err(e), None | Some(Err(_))) = (&series, &simplified) {
        return Err(e.to_string());
    }
    let value = |r: &Result<f64, Error>| match r {
        Ok(v) => json!(v),
        Err(_) => Value::Null,
    };
    let point_json = match point {
        LiftPoint::Special(a, b) => json!([a, b]),
        LiftPoint::Real(a, b) => json!([a, b]),
    };
    let mut obj = json!({
        "j": j,
        "point": point_json,
        "terms": input.terms.len(),
        "hypergeometric": value(&series),
        "simplified": simplified.as_ref().map(value).unwrap_or(Value::Null),
    });
    if let Err(e) = &series {
        obj["hypergeometric_error"] = json!(e.to_string());
    }
    if let Some(Err(e)) = &simplified {
        obj["simplified_error"] = json!(e.to_string());
    }
    let text = match output.format {
        Format::Json => render_json(&obj),
        Format::Text => {
            let mut s = format!("lift j={j} point={}\n", obj["point"]);
            s.push_str(&format!("  hypergeometric: {}\n", obj["hypergeometric"]));
            s.push_str(&format!("  simplified:     {}\n", obj["simplified"]));
            s
        }
    };
    emit(&output, text)?;
    Ok(EXIT_OK)
}

fn run_selftest(output: Output) -> Result<u8, String> {
    let checks: Vec<SelfCheck> = selftest::run_all();
    let text = match output.format {
        Format::Json => render_json(&serde_json::to_value(&checks).expect("serializable")),
        Format::Text => checks
            .iter()
            .map(|c| format!("{} {}: {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail))
            .collect(),
    };
    emit(&output, text)?;
    Ok(if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_FAILED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let cache = cli.cache_dir.map(TableCache::new).unwrap_or_else(TableCache::from_env);
    let result = match cli.command {
        Command::Verify(cmd) => verify(cmd, &cache),
        Command::Tables(cmd) => tables(cmd, &cache),
        Command::Lift(cmd) => lift(cmd),
        Command::Selftest(output) => run_selftest(output),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
