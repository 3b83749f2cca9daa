use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use kfulton::fulton::{compare_classes, fulton_class, lci_check};
use kfulton::specfile::{load_scheme_spec, LoadedSpec};
use kfulton::suite::{hilbert_report, run_suite, RunOptions, DEFAULT_LCI_WEIGHT, DEFAULT_SEED};
use kfulton::virtual_sheaf::{verify_ksiebert, DEFAULT_WEIGHT_CAP};
use kfulton::{groebner::DEFAULT_SPAIR_BUDGET, Error, Result};

/// Fulton classes and virtual structure sheaves of zero-dimensional schemes.
#[derive(Parser)]
#[command(name = "kfulton", version)]
struct Cli {
    /// Extra vanishing terms demanded when certifying a character series.
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Highest Koszul weight computed before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_WEIGHT_CAP)]
    weight_cap: usize,
    /// Maximum number of S-pairs per Groebner basis computation.
    #[arg(long, global = true, default_value_t = DEFAULT_SPAIR_BUDGET)]
    spair_budget: usize,
    /// Seed for random changes of coordinates.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write the JSON report to this path (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Fulton class of a scheme.
    Fulton { spec: PathBuf },
    /// Compare the Fulton classes of two embeddings of one scheme.
    CheckEmbedding { first: PathBuf, second: PathBuf },
    /// Compare Sym(I/I^2) with the associated graded ring.
    Lci {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LCI_WEIGHT)]
        max_weight: usize,
    },
    /// Check the virtual structure sheaf against the Koszul oracle.
    Virtual { spec: PathBuf },
    /// Print the quotient length, length function and multiplicity.
    Hilbert { spec: PathBuf },
    /// Run every check on each scheme file in a directory.
    Suite {
        dir: PathBuf,
        /// Process files one at a time.
        #[arg(long)]
        sequential: bool,
    },
}

struct Outcome {
    json: String,
    summary: String,
    code: u8,
}

fn outcome<T: Serialize>(value: &T, summary: String, code: u8) -> Outcome {
    let mut json = serde_json::to_string_pretty(value).expect("report serializes");
    json.push('\n');
    Outcome { json, summary, code }
}

fn load(path: &Path, options: &RunOptions) -> Result<LoadedSpec> {
    load_scheme_spec(path, options.spair_budget).map_err(|e| match e {
        Error::Validation { field, message } => {
            Error::Validation { field: format!("{}: {field}", path.display()), message }
        }
        other => other,
    })
}

fn run(cli: &Cli, options: &RunOptions) -> Result<Outcome> {
    match &cli.command {
        Command::Fulton { spec } => {
            let loaded = load(spec, options)?;
            let class = fulton_class(&loaded.spec, options.fulton())?;
            let summary = format!("{}: P(t) = {}", loaded.spec.label, class.text);
            Ok(outcome(&class, summary, 0))
        }
        Command::CheckEmbedding { first, second } => {
            let a = load(first, options)?;
            let b = load(second, options)?;
            let la = a.spec.ideal.quotient_length()?.finite()?;
            let lb = b.spec.ideal.quotient_length()?.finite()?;
            if la != lb {
                return Err(Error::LengthMismatch(la, lb));
            }
            let fa = fulton_class(&a.spec, options.fulton())?;
            let fb = fulton_class(&b.spec, options.fulton())?;
            let report = compare_classes(&a.spec, &b.spec, &fa, &fb);
            let summary = format!(
                "{}: {} vs {}: {} -> {}",
                report.verdict, report.first, report.second, fa.text, fb.text
            );
            let code = u8::from(!report.passed());
            Ok(outcome(&report, summary, code))
        }
        Command::Lci { spec, max_weight } => {
            let loaded = load(spec, options)?;
            let report = lci_check(&loaded.spec, *max_weight, options.fulton())?;
            let strict = report
                .first_strict_weight
                .map_or(String::new(), |w| format!(" (first strict weight {w})"));
            let summary = format!("{}: {}{strict}", loaded.spec.label, report.verdict);
            let code = u8::from(!report.consistent());
            Ok(outcome(&report, summary, code))
        }
        Command::Virtual { spec } => {
            let loaded = load(spec, options)?;
            let data = loaded.obstruction.as_ref().ok_or_else(|| Error::Validation {
                field: format!("{}: sections", spec.display()),
                message: "the virtual check needs sections".into(),
            })?;
            let report = verify_ksiebert(data, options.virtual_options())?;
            let summary = format!(
                "{}: {} chi = {} (formula {}), chi_t = {}",
                loaded.spec.label, report.verdict, report.chi, report.formula.chi, report.chi_t
            );
            let code = u8::from(!report.passed());
            Ok(outcome(&report, summary, code))
        }
        Command::Hilbert { spec } => {
            let loaded = load(spec, options)?;
            let report = hilbert_report(&loaded, options)?;
            let summary = format!(
                "{}: length {}, multiplicity {}, gr character {}",
                report.label, report.length, report.multiplicity, report.gr_character
            );
            Ok(outcome(&report, summary, 0))
        }
        Command::Suite { dir, sequential } => {
            let options = RunOptions { parallel: !sequential, ..*options };
            let report = run_suite(dir, &options)?;
            let mut lines = Vec::new();
            for s in &report.schemes {
                let detail = match (&s.error, &s.fulton) {
                    (Some(e), _) => format!("{}: {}", e.class, e.message),
                    (None, Some(f)) => format!("P(t) = {}", f.text),
                    (None, None) => String::new(),
                };
                lines.push(format!("{:<5} {} {detail}", s.verdict, s.file));
                eprintln!("{}: {:.3}s", s.file, s.elapsed.as_secs_f64());
            }
            lines.push(format!("suite: {} (exit {})", report.verdict, report.exit_code));
            Ok(Outcome { json: report.to_json(), summary: lines.join("\n"), code: report.exit_code as u8 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = RunOptions {
        window: cli.window,
        weight_cap: cli.weight_cap,
        spair_budget: cli.spair_budget,
        seed: cli.seed,
        ..RunOptions::default()
    };
    match run(&cli, &options) {
        Ok(out) => {
            match cli.json.as_deref() {
                Some(p) if p == Path::new("-") => print!("{}", out.json),
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &out.json) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                    println!("{}", out.summary);
                }
                None => println!("{}", out.summary),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
