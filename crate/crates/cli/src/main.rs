//! `grmw`: batch command surface over grmw-core.

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use grmw_core::arrangements::{report_rows, CSV_HEADER};
use grmw_core::constructors::{
    build_bound_witness, build_third_weight, build_third_weight_2var, lift_two_var, BoundBranch, TwoVarFamily,
};
use grmw_core::gf::{prime_power, FieldSpec};
use grmw_core::grm::{cb_value, weights_record};
use grmw_core::spectrum::{
    exhaustive_spectrum_in, run_verification_suite, SpectrumError, SpectrumOptions, Suite, SuiteOptions,
    DEFAULT_CODEWORD_BUDGET,
};

#[derive(Parser, Debug)]
#[command(name = "grmw", version, about = "Weights of generalized Reed-Muller codes")]
struct Cli {
    /// Worker threads for parallel commands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<String>,
    /// Defining polynomial coefficients, constant term first, e.g. 2,1,1 for t^2+t+2.
    #[arg(long, global = true, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First three weights of R_q(r, m) with provenance.
    Weights { q: u32, m: u32, r: u32 },
    /// Build a witness codeword and measure its weight.
    Construct {
        #[arg(long)]
        family: String,
        q: u32,
        m: u32,
        a: u32,
        b: u32,
    },
    /// Exhaustive weight spectrum of R_q(r, m).
    Spectrum {
        q: u32,
        m: u32,
        r: u32,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        max_distinct: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Arrangement catalog and enumeration report as CSV.
    Arrangements {
        q: u32,
        m: u32,
        d: u32,
        #[arg(long, default_value_t = 3)]
        top: usize,
        #[arg(long)]
        oracle: bool,
    },
    /// Run a verification suite; exit 0 iff every claim passes.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        extended: bool,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value_t = SuiteOptions::default().seed)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("claims failed")]
    Failed(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn field_for(q: u32, modulus: &Option<Vec<u32>>) -> Result<Arc<FieldSpec>, CliError> {
    let (p, e) = prime_power(q as u64).ok_or_else(|| usage(format!("{q} is not a prime power")))?;
    FieldSpec::new(p, e, modulus.clone()).map(Arc::new).map_err(usage)
}

fn budget_from_env() -> Result<u64, CliError> {
    match std::env::var("GRMW_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("GRMW_BUDGET={v} is not an integer"))),
        Err(_) => Ok(DEFAULT_CODEWORD_BUDGET),
    }
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn construct(field: &Arc<FieldSpec>, family: &str, m: u32, a: u32, b: u32) -> Result<Value, CliError> {
    let q = field.q();
    let (poly, claimed) = if family == "third" {
        let w = build_third_weight(field, m, a, b).map_err(usage)?;
        (w.poly, w.claimed_weight)
    } else if let Some(branch) = BoundBranch::from_name(family) {
        let w = build_bound_witness(field, m, a, b, branch).map_err(usage)?;
        (w.poly, w.claimed_weight)
    } else if let Some(fam) = TwoVarFamily::from_name(family) {
        let (g, _) = build_third_weight_2var(field, b, fam, None).map_err(usage)?;
        let lifted = lift_two_var(&g, m as usize, a as usize).map_err(usage)?;
        let cb = cb_value(q, b).map_err(usage)?.value.expect("c_b value");
        (lifted, cb * (q as u64).pow(m - a - 2))
    } else {
        return Err(usage(format!("unknown family {family}")));
    };
    let measured = poly.weight().map_err(usage)?;
    Ok(json!({
        "family": family,
        "q": q,
        "m": m,
        "a": a,
        "b": b,
        "poly": poly.to_json(),
        "claimed_weight": claimed,
        "measured_weight": measured,
    }))
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Weights { q, m, r } => Ok(to_json(&weights_record(*q, *m, *r).map_err(usage)?)),
        Command::Construct { family, q, m, a, b } => {
            let field = field_for(*q, &cli.modulus)?;
            Ok(to_json(&construct(&field, family, *m, *a, *b)?))
        }
        Command::Spectrum { q, m, r, shards, cap, max_distinct, format } => {
            let field = field_for(*q, &cli.modulus)?;
            let opts = SpectrumOptions {
                max_distinct: *max_distinct,
                weight_cap: *cap,
                shards: *shards,
                codeword_budget: budget_from_env()?,
                ..Default::default()
            };
            eprintln!("enumerating R_{q}({r},{m}) in {shards} shard(s)");
            let result = exhaustive_spectrum_in(&field, *m, *r, &opts).map_err(|e| match e {
                SpectrumError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
                SpectrumError::Poly(grmw_core::polyring::PolyError::SizeBudgetExceeded { .. }) => {
                    CliError::Budget(e.to_string())
                }
                other => usage(other),
            })?;
            Ok(match format {
                Format::Json => to_json(&result),
                Format::Csv => result.to_csv(),
            })
        }
        Command::Arrangements { q, m, d, top, oracle } => {
            let rows = report_rows(*q, *m, *d, *top, *oracle).map_err(usage)?;
            let mut out = format!("{CSV_HEADER}\n");
            for row in rows {
                out.push_str(&row.to_csv());
                out.push('\n');
            }
            Ok(out)
        }
        Command::Verify { suite, extended, timing, seed } => {
            let suite = Suite::from_name(suite).ok_or_else(|| usage(format!("unknown suite {suite}")))?;
            let opts = SuiteOptions { extended: *extended, timing: *timing, seed: *seed };
            eprintln!("running suite {}", suite.name());
            let report = run_verification_suite(suite, &opts);
            for claim in report.claims.iter().filter(|c| !c.pass) {
                eprintln!("FAIL {}", claim.id);
            }
            let text = to_json(&report);
            if report.pass() {
                Ok(text)
            } else {
                Err(CliError::Failed(text))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|text| emit(&cli, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(report)) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
