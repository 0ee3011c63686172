use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use semitrace::cli::{compute, enumerate_rows, ComputeArgs, ComputeKind, ModuleDesc, PRIME_ENV};
use semitrace::{run_corpus, Check, Config, DEFAULT_PRIME};

#[derive(Parser)]
#[command(name = "semitrace", version, about = "Trace ideals and Ext/Tor annihilators over numerical semigroup rings")]
struct Cli {
    /// Characteristic of the coefficient field.
    #[arg(long, global = true, env = PRIME_ENV, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one computation and print the result as JSON.
    Compute {
        /// trace, colon, conductor, resolve, ext-ann, tor-ann, transpose or enumerate-ideals.
        kind: String,
        /// Semigroup generators, e.g. `2,3`.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        semigroup: Vec<i64>,
        /// Ideal generators, e.g. `0,1`.
        #[arg(long, conflicts_with = "module")]
        ideal: Option<ModuleDesc>,
        /// Module descriptor: an ideal, `R/m`, `R/C`, or `syz:<descriptor>`.
        #[arg(long)]
        module: Option<ModuleDesc>,
        /// Colon numerator, or the second Ext/Tor argument.
        #[arg(long)]
        with: Option<ModuleDesc>,
        /// Homological index for ext-ann / tor-ann.
        #[arg(long, default_value_t = 1)]
        index: usize,
        /// Resolution length for `resolve`.
        #[arg(long, default_value_t = 4)]
        length: usize,
    },
    /// Check the statements over every semigroup up to a genus.
    Verify {
        #[arg(long, default_value_t = 2)]
        max_genus: usize,
        #[arg(long, default_value_t = 4)]
        imax: usize,
        /// `all` or a comma-separated subset of thm32,lem31,prop41,prop44,oracles.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Leave syzygy summands with more minimal generators than this
        /// unresolved, reporting the affected cases as incomplete.
        #[arg(long)]
        max_syzygy_gens: Option<usize>,
    },
    /// List semigroups by genus with their basic invariants.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        max_genus: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Compute { kind, semigroup, ideal, module, with, index, length } => {
            let kind: ComputeKind = kind.parse()?;
            let args = ComputeArgs { semigroup, prime: cli.prime, module: ideal.or(module), other: with, index, length };
            println!("{}", compute(kind, &args)?);
        }
        Command::Verify { max_genus, imax, checks, report, format, jobs, max_syzygy_gens } => {
            let config = Config {
                prime: cli.prime,
                max_genus,
                i_max: imax,
                checks: Check::parse_list(&checks)?,
                jobs,
                max_syzygy_generators: max_syzygy_gens,
            };
            let result = run_corpus(&config)?;
            if let Some(path) = report {
                let text = match format {
                    Format::Json => result.to_json(),
                    Format::Csv => result.to_csv()?,
                };
                std::fs::write(path, text)?;
            }
            for failure in result.cases.iter().filter(|c| !c.pass) {
                let tag = if failure.incomplete { "INCOMPLETE" } else { "FAIL" };
                eprintln!("{tag} {}", serde_json::to_string(failure)?);
            }
            println!("{}", result.summary_line());
            if !result.all_pass() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Enumerate { max_genus } => {
            for row in enumerate_rows(max_genus) {
                println!("{}", serde_json::to_string(&row)?);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
