//! Command-line front end for the `gronwall` crate.
//!
//! Every command prints one table of results in the selected format and
//! exits with
//!
//! * 0 when everything checked passes,
//! * 1 when a violation, counterexample, or table mismatch is found,
//! * 2 when some comparison stayed indeterminate at the precision cap,
//! * 3 on usage or resource errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gronwall::ga::ConditionI;
use gronwall::sigma::DEFAULT_MEMORY_BUDGET;
use gronwall::{Error, Ladder};

mod commands;
pub mod output;

pub use output::{Format, Output};

#[derive(Debug, Parser)]
#[command(name = "gronwall", version, about = "Certified computations with Gronwall's function G(n) = sigma(n)/(n log log n)")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Starting precision in bits [default: 128, lowered to the cap if needed]
    #[arg(long, global = true, env = "GRONWALL_PRECISION")]
    pub precision: Option<u32>,
    /// Largest precision tried before a comparison is declared indeterminate
    #[arg(long, global = true, env = "GRONWALL_PRECISION_CAP", default_value_t = 4096)]
    pub precision_cap: u32,
    #[arg(long, global = true, env = "GRONWALL_FORMAT", value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "GRONWALL_WORKERS")]
    pub workers: Option<usize>,
    /// Use G(n) > G(n/p) instead of G(n) >= G(n/p) in condition (i)
    #[arg(long, global = true, env = "GRONWALL_STRICT_I")]
    pub strict_i: bool,
    /// Bytes available to one sieved block
    #[arg(long, global = true, env = "GRONWALL_MEMORY_BUDGET", default_value_t = DEFAULT_MEMORY_BUDGET)]
    pub memory_budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Criterion,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Strict,
    Doubled,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// sigma(n), sigma(n)/n and G(n)
    Sigma { n: u64 },
    /// G(n) truncated to three decimals
    G { n: u64 },
    /// Robin's inequality at one n > 5040
    Robin { n: u64 },
    /// The 26 integers r <= 5040 with G(r) >= e^gamma, compared with the published table
    Table1 {
        /// Compare against this CSV file instead of the embedded copy
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Classify every n in [lo, hi] against e^gamma
    Scan { lo: u64, hi: u64 },
    /// Robin's unconditional bound e^gamma + 0.6483/(log log n)^2 - G(n)
    Bound {
        n: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with = "n")]
        range: Option<Vec<u64>>,
    },
    /// Superabundant numbers up to a limit, with AE1-AE3
    Sa { limit: u64 },
    /// GA1 verdicts
    Ga1 {
        n: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with = "n")]
        range: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
    /// Conditions (i) and (ii) of an extraordinary number
    Probe {
        n: u64,
        /// Largest multiplier a tried in condition (ii)
        #[arg(long, env = "GRONWALL_AMAX", default_value_t = 100)]
        amax: u64,
    },
    /// The numeric facts showing that 4 is extraordinary
    Certify4,
    /// The two-prime-factor GA1 propositions
    Props {
        /// Check 2p for every prime p up to PMAX
        #[arg(long = "2p", value_name = "PMAX", conflicts_with = "pq")]
        two_p: Option<u64>,
        /// Check pq for odd primes p >= q with pq up to BOUND
        #[arg(long, value_name = "BOUND")]
        pq: Option<u64>,
    },
    /// The Lagarias inequality sigma(n) < H_n + c exp(H_n) log(H_n)
    Lagarias {
        n: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with = "n")]
        range: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value_t = Variant::Strict)]
        variant: Variant,
    },
}

/// Validated settings shared by all commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub precision_start: u32,
    pub precision_cap: u32,
    pub memory_budget: u64,
    pub output_format: Format,
    pub strict_i: bool,
}

impl RunConfig {
    pub fn from_args(a: &ConfigArgs) -> Result<Self, String> {
        let start = a.precision.unwrap_or(DEFAULT_PRECISION.min(a.precision_cap));
        if start < 2 {
            return Err("precision must be at least 2 bits".into());
        }
        if start > a.precision_cap {
            return Err(format!("--precision {start} exceeds --precision-cap {}", a.precision_cap));
        }
        let supported = gronwall::consts::max_constant_precision();
        if a.precision_cap > supported {
            return Err(format!("--precision-cap {} exceeds the {supported} bits the embedded constants support", a.precision_cap));
        }
        if a.memory_budget == 0 {
            return Err("--memory-budget must be positive".into());
        }
        if a.workers == Some(0) {
            return Err("--workers must be positive".into());
        }
        Ok(RunConfig {
            precision_start: start,
            precision_cap: a.precision_cap,
            memory_budget: a.memory_budget,
            output_format: a.format,
            strict_i: a.strict_i,
        })
    }

    pub fn ladder(&self) -> Ladder {
        Ladder::new(self.precision_start, self.precision_cap)
    }

    pub fn mode(&self) -> ConditionI {
        if self.strict_i {
            ConditionI::Strict
        } else {
            ConditionI::NonStrict
        }
    }
}

/// Overall result of a command, worst first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass = 0,
    Violation = 1,
    Indeterminate = 2,
}

pub const EXIT_USAGE: i32 = 3;

pub const DEFAULT_PRECISION: u32 = 128;

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let config = match RunConfig::from_args(&cli.config) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.config.workers {
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start workers: {e}");
            return EXIT_USAGE;
        }
    };
    let mut notes = Vec::new();
    let result = pool.install(|| commands::execute(&cli.command, &config, &mut notes));
    for n in notes {
        let _ = writeln!(err, "{n}");
    }
    match result {
        Ok((output, status)) => {
            let _ = write!(out, "{}", output.render(config.output_format));
            status as i32
        }
        Err(Error::Indeterminate { cap }) => {
            let _ = writeln!(err, "indeterminate: no separation at the precision cap of {cap} bits");
            Status::Indeterminate as i32
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
