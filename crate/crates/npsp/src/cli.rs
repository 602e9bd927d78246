//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, Outcome, OutputFormat, RunConfig};
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "npsp", version, about = "Strategy-proof rules on the non-Paretian domain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Number of individuals.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Number of alternatives.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Alternative labels, one character each (default a, b, c, ...).
    #[arg(long, global = true)]
    pub labels: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub output: Output,
    /// Largest number of solver solutions to enumerate.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Allow solver runs beyond n = 3, m = 3.
    #[arg(long, global = true)]
    pub stretch: bool,
    /// Alternatives to merge, as "w,z=x".
    #[arg(long, global = true)]
    pub merge: Option<String>,
    /// Rule table to read (or, for demo, to write).
    #[arg(long, global = true)]
    pub rule_file: Option<PathBuf>,
    /// Destination of the DIMACS export; the variable map goes to <path>.map.
    #[arg(long, global = true)]
    pub cnf_out: Option<PathBuf>,
    /// Upper bound on (m!)^n for any enumerated domain.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub max_profiles: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sizes of L(X)^N, NP(n, m) and the voting-paradox profiles.
    DomainStats {
        /// Also print NP(n, m), one profile per line.
        #[arg(long)]
        dump: bool,
    },
    /// Strategy-proofness, range and dictator of a rule file.
    CheckRule,
    /// The dictator of a rule file, if any.
    FindDictator,
    /// Build one S-path, or check every fiber when no endpoints are given.
    Spath {
        #[arg(long, requires_all = ["to", "s"])]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        /// Labels of the alternatives whose relative order is kept.
        #[arg(long)]
        s: Option<String>,
    },
    /// Enumerate all full-range strategy-proof rules on NP(n, m).
    VerifyBasis,
    /// Project every solution on NP(n + 1, m) down by cloning.
    VerifyLift,
    /// Merge two alternatives of dictatorial (or given) rules.
    VerifyMerge,
    /// Decisiveness queries from every voting-paradox profile.
    DecisiveSweep,
    /// Write the strategy-proofness model as DIMACS CNF.
    ExportCnf {
        /// Leave out the full-range clauses.
        #[arg(long)]
        no_full_range: bool,
    },
    /// Evaluate an example rule: majority-superset, conclusion-ubm or dictator:<i>.
    Demo {
        #[arg(long)]
        rule: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DomainStats { .. } => "domain-stats",
            Command::CheckRule => "check-rule",
            Command::FindDictator => "find-dictator",
            Command::Spath { .. } => "spath",
            Command::VerifyBasis => "verify-basis",
            Command::VerifyLift => "verify-lift",
            Command::VerifyMerge => "verify-merge",
            Command::DecisiveSweep => "decisive-sweep",
            Command::ExportCnf { .. } => "export-cnf",
            Command::Demo { .. } => "demo",
        }
    }
}

impl Global {
    pub fn config(&self) -> RunConfig {
        let mut cfg = RunConfig {
            n: self.n,
            m: self.m,
            labels: self.labels.clone(),
            cap: usize::try_from(self.cap).unwrap_or(usize::MAX),
            seed: self.seed,
            output: match self.output {
                Output::Text => OutputFormat::Text,
                Output::Json => OutputFormat::Json,
            },
            stretch: self.stretch,
            merge: self.merge.clone(),
            rule_file: self.rule_file.clone(),
            cnf_out: self.cnf_out.clone(),
            ..RunConfig::default()
        };
        cfg.caps.max_profiles = self.max_profiles;
        cfg
    }
}

pub fn dispatch(command: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::DomainStats { dump } => commands::domain_stats(cfg, *dump),
        Command::CheckRule => commands::check_rule(cfg),
        Command::FindDictator => commands::find_dictator(cfg),
        Command::Spath { from, to, s } => match (from, to, s) {
            (Some(f), Some(t), Some(s)) => commands::spath_between(cfg, f, t, s),
            (None, None, None) => commands::spath_sweep(cfg),
            _ => Err(Error::Usage("spath needs all of --from, --to and --s, or none".into())),
        },
        Command::VerifyBasis => commands::verify_basis_cmd(cfg),
        Command::VerifyLift => commands::verify_lift(cfg),
        Command::VerifyMerge => commands::verify_merge(cfg),
        Command::DecisiveSweep => commands::decisive_sweep(cfg),
        Command::ExportCnf { no_full_range } => commands::export_cnf(cfg, !no_full_range),
        Command::Demo { rule } => commands::demo(cfg, rule),
    }
}

/// What the binary prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exit {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code 0 when every asserted property holds, 1 when one fails, 2 on
/// usage errors and unreadable input.
pub fn run(cli: &Cli) -> Exit {
    let cfg = cli.global.config();
    let name = cli.command.name();
    match dispatch(&cli.command, &cfg) {
        Ok(outcome) => Exit {
            code: if outcome.passed { 0 } else { 1 },
            stdout: commands::render(name, &cfg, &outcome),
            stderr: String::new(),
        },
        Err(e) => Exit {
            code: if e.is_usage() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("npsp {name}: {e}\n"),
        },
    }
}
