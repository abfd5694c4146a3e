//! `agorum`: judgment aggregation from the command line.
//!
//! Every command prints one JSON report on stdout and the elapsed time on
//! stderr. Exit status is 0 whenever the computation finishes, whatever the
//! answer; 2 for invalid input and 3 when a search exceeds its budget.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use agorum::axioms::{Axiom, AxiomClass};
use agorum::safety::AgendaProperty;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "agorum", version, about = "Judgment aggregation: rules, axioms, manipulation and agenda safety")]
pub struct Cli {
    /// Profiles one exhaustive scan may visit.
    #[arg(long, global = true, env = "AGORUM_BUDGET", value_name = "N")]
    pub budget: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieBreak {
    /// Report every winner; single-outcome queries fail on ties.
    None,
    /// Keep the canonically first winner.
    Lex,
}

/// `majority`, `quota:m`, `quota-file` (needs `--quotas`), `pbp` or `dbp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleSpec {
    Majority,
    Quota(usize),
    QuotaFile,
    Pbp,
    Dbp,
}

impl FromStr for RuleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "majority" => RuleSpec::Majority,
            "quota-file" => RuleSpec::QuotaFile,
            "pbp" => RuleSpec::Pbp,
            "dbp" => RuleSpec::Dbp,
            _ => match s.strip_prefix("quota:").map(str::parse) {
                Some(Ok(m)) => RuleSpec::Quota(m),
                _ => return Err(format!("unknown rule `{s}`; expected majority, quota:m, quota-file, pbp or dbp")),
            },
        })
    }
}

impl std::fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RuleSpec::Majority => f.write_str("majority"),
            RuleSpec::Quota(m) => write!(f, "quota:{m}"),
            RuleSpec::QuotaFile => f.write_str("quota-file"),
            RuleSpec::Pbp => f.write_str("pbp"),
            RuleSpec::Dbp => f.write_str("dbp"),
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct RuleArgs {
    #[arg(long, default_value = "majority")]
    pub rule: RuleSpec,
    /// One `accept reject` quota pair per member of the agenda.
    #[arg(long, value_name = "FILE")]
    pub quotas: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    pub tie_break: TieBreak,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a rule to a profile.
    Aggregate {
        #[arg(long)]
        agenda: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Is a formula in the outcome? For `dbp` without a tie-break: in some winner.
    Windet {
        #[arg(long)]
        agenda: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        formula: String,
    },
    /// Search for a beneficial insincere report of one agent.
    Manipulate {
        #[arg(long)]
        agenda: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
        /// 1-based.
        #[arg(long)]
        agent: usize,
    },
    /// Scan every profile and agent for a manipulation.
    StrategyProof {
        #[arg(long)]
        agenda: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 3)]
        agents: usize,
    },
    /// Check axioms over every profile.
    Axioms {
        #[arg(long)]
        agenda: PathBuf,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, default_value_t = 3)]
        agents: usize,
        /// Axioms to check (U, A, N, I, S, MI, MN, WR, Complete,
        /// ComplementFree, Consistent); all when omitted.
        #[arg(long = "axiom")]
        axioms: Vec<Axiom>,
    },
    /// Is every rule of a class consistent on this agenda?
    Safety {
        #[arg(long)]
        agenda: PathBuf,
        /// majority, wraus, wraun, wraui, wras, wran, wrai or quota-range:k.
        #[arg(long)]
        class: AxiomClass,
        #[arg(long, default_value_t = 3)]
        agents: usize,
        /// Also run the exhaustive search over the class.
        #[arg(long)]
        brute_force: bool,
    },
    /// Minimal inconsistent subsets and agenda properties.
    Props {
        #[arg(long)]
        agenda: PathBuf,
        /// mp, kmp:k, smp or ssmp; mp, smp and ssmp when omitted.
        #[arg(long = "prop")]
        props: Vec<AgendaProperty>,
    },
    /// Build the instances of a reduction.
    Reduce {
        #[command(subcommand)]
        kind: Reduce,
    },
    /// List J(Φ), or the representatives of a class.
    Enumerate {
        #[arg(long)]
        agenda: PathBuf,
        #[arg(long)]
        class: Option<AxiomClass>,
        #[arg(long, default_value_t = 3)]
        agents: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Reduce {
    /// Encode preference orders as an agenda and profile; Kemeny winners both ways.
    Kemeny {
        /// One `a > b > c` ranking per line.
        #[arg(long)]
        preferences: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Premise-based manipulation instance for a formula.
    SatManip {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// The two lifted quantified formulas.
    QbfLift {
        #[arg(long)]
        qbf: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Agenda violating SSMP iff the formula and its negation are not both true.
    QbfSsmp {
        #[arg(long)]
        qbf: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Copying construction from an SSMP question to an MP question.
    SsmpMp {
        #[arg(long)]
        agenda: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = commands::name(&cli.command);
    let start = Instant::now();
    let outcome = commands::execute(&cli);
    eprintln!("agorum {name}: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(r) => {
            print!("{}", report::render(&r));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            print!("{}", report::render(&e.report(&name)));
            ExitCode::from(e.exit_status())
        }
    }
}
