//! `witt`: evaluate, realize and inspect Witt classes from the command line.
//!
//! Every command prints one JSON report on stdout. Errors go to stderr with
//! exit code 2; a report with a failing check exits with code 1.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use witt_core::qforms::{hilbert_symbol, Place};
use witt_core::realize::realize_logged;
use witt_core::repio::{closed_from_str, closed_to_json};
use witt_core::surface::{evaluate_closed, evaluate_closed_delta};
use witt_core::witt::laurent_anisotropic_dim;
use witt_core::{rational, selftest, LaurentForm, WittClass};

#[derive(Parser)]
#[command(name = "witt", version, about = "Witt classes of flat SL(2,Q)-bundles over surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Witt class of a closed-surface representation file.
    Eval { file: PathBuf },
    /// Build a closed genus-g representation realizing a class in I².
    Realize {
        /// Diagonal form, e.g. "1,1,1,1" (empty for the zero class).
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        genus: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Norm and invariants of a diagonal form or a form over Q((x)).
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// Read the form as "c:e,…" with c·x^e, e ∈ {0,1}.
        #[arg(long)]
        laurent: bool,
    },
    /// The Hilbert symbol (a,b)_v.
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        place: String,
    },
    /// Run the seeded randomized property suites.
    Selftest {
        #[arg(long)]
        iters: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        height: u64,
    },
}

#[derive(Serialize)]
struct CheckLine {
    name: String,
    pass: bool,
}

#[derive(Serialize)]
struct Report {
    command: String,
    inputs: Value,
    outputs: Value,
    checks: Vec<CheckLine>,
}

impl Report {
    fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            outputs: Value::Null,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(CheckLine {
            name: name.to_string(),
            pass,
        });
    }

    fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

type CmdResult = Result<Report, String>;

fn class_summary(q: &WittClass) -> Value {
    let rep = q.reduced();
    let mut hasse = Map::new();
    let mut local = Map::new();
    for (v, d) in q.local_dims() {
        hasse.insert(v.to_string(), json!(rep.hasse(&v)));
        local.insert(v.to_string(), json!(d));
    }
    json!({
        "form": rep.rep().to_string(),
        "dim": rep.rep().dim(),
        "signature": q.signature(),
        "signed_discriminant": q.signed_discriminant().to_string(),
        "hasse": hasse,
        "local_anisotropic_dims": local,
        "norm": q.norm(),
        "in_I2": q.in_i2(),
    })
}

fn cmd_eval(file: &PathBuf) -> CmdResult {
    let text = std::fs::read_to_string(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let r = closed_from_str(&text).map_err(|e| e.to_string())?;
    let c = evaluate_closed(&r);
    let d = evaluate_closed_delta(&r);
    let mut rep = Report::new("eval", json!({"file": file.display().to_string(), "genus": r.genus()}));
    rep.outputs = class_summary(&c);
    rep.check("evaluations_agree", c == d);
    rep.check("in_I2", c.in_i2());
    rep.check("norm_within_4g-2", c.norm() <= 4 * r.genus() - 2);
    Ok(rep)
}

fn cmd_realize(form: &str, genus: usize, out: &PathBuf) -> CmdResult {
    let q = WittClass::parse(form).map_err(|e| e.to_string())?;
    let real = realize_logged(&q, genus).map_err(|e| e.to_string())?;
    let evaluated = evaluate_closed(&real.rep);
    let matched = evaluated == q;
    let certificate = json!({
        "target": q.rep().to_string(),
        "evaluated": evaluated.rep().to_string(),
        "match": matched,
        "lambda_log": real.log,
    });
    let mut file = closed_to_json(&real.rep);
    file["certificate"] = certificate.clone();
    let text = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
    std::fs::write(out, text + "\n").map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    let mut rep = Report::new("realize", json!({"form": form, "genus": genus, "out": out.display().to_string()}));
    rep.outputs = json!({
        "file": out.display().to_string(),
        "max_height_digits": real.rep.max_height_digits(),
        "certificate": certificate,
    });
    rep.check("round_trip", matched);
    rep.check("relator", witt_core::surface::commutator_product(real.rep.pairs()).is_identity());
    Ok(rep)
}

fn cmd_norm(form: &str, laurent: bool) -> CmdResult {
    let mut rep = Report::new("norm", json!({"form": form, "laurent": laurent}));
    if laurent {
        let f = LaurentForm::parse(form).map_err(|e| e.to_string())?;
        let (q1, q2) = f.residues();
        rep.outputs = json!({
            "norm": laurent_anisotropic_dim(&f),
            "dim": f.dim(),
            "residue_0": class_summary(&q1),
            "residue_1": class_summary(&q2),
        });
    } else {
        let q = WittClass::parse(form).map_err(|e| e.to_string())?;
        rep.outputs = class_summary(&q);
    }
    Ok(rep)
}

fn cmd_hilbert(a: &str, b: &str, place: &str) -> CmdResult {
    let x = rational::parse_nonzero(a).map_err(|e| e.to_string())?;
    let y = rational::parse_nonzero(b).map_err(|e| e.to_string())?;
    let v = Place::parse(place).map_err(|e| e.to_string())?;
    let s = hilbert_symbol(&x, &y, &v).map_err(|e| e.to_string())?;
    let mut rep = Report::new("hilbert", json!({"a": a, "b": b, "place": v.to_string()}));
    rep.outputs = json!({"symbol": s});
    Ok(rep)
}

fn cmd_selftest(iters: u64, seed: u64, height: u64) -> CmdResult {
    if iters == 0 {
        return Err("--iters must be at least 1".into());
    }
    let results = selftest::run(iters, seed, height);
    let mut rep = Report::new("selftest", json!({"iters": iters, "seed": seed, "height": height}));
    for r in &results {
        rep.check(&r.name, r.ok());
    }
    rep.outputs = json!({"suites": results});
    Ok(rep)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval { file } => cmd_eval(file),
        Command::Realize { form, genus, out } => cmd_realize(form, *genus, out),
        Command::Norm { form, laurent } => cmd_norm(form, *laurent),
        Command::Hilbert { a, b, place } => cmd_hilbert(a, b, place),
        Command::Selftest { iters, seed, height } => cmd_selftest(*iters, *seed, *height),
    };
    match result {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // A closed stdout (e.g. piped into `head`) is not an error.
            let _ = writeln!(std::io::stdout(), "{text}");
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
