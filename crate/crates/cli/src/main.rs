//! `cspiso`: classify constraint sets, decide instance isomorphism, print
//! normal forms and build reductions from graph isomorphism.
//!
//! Exit codes: 0 decision reached, 1 negative decision, 2 usage or input
//! error, 3 guard exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "cspiso",
    version,
    about = "Isomorphism of Boolean constraint instances"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Constraint file, or `builtin:name[,name...]`
    #[arg(short = 'c', long = "constraints", global = true)]
    pub constraints: Option<String>,
    /// Universe guard for model enumeration
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_vars: Option<u64>,
    /// Universe guard for the unguided permutation search
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_perm_vars: Option<u64>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the complexity class of the constraint set
    Classify,
    /// Decide whether two instances are isomorphic
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Accept the constants 0 and 1 as arguments
        #[arg(long)]
        constants: bool,
        /// Use the permutation search even for 2-affine sets
        #[arg(long, conflicts_with = "guided")]
        force_brute: bool,
        /// Use the closure-guided search
        #[arg(long)]
        guided: bool,
        /// Run every applicable decider and require agreement
        #[arg(long)]
        cross_check: bool,
    },
    /// Print the normal form of a 2-affine instance
    Nf { input: PathBuf },
    /// Reduce a graph pair to an instance pair over the constraint set
    Reduce {
        g: PathBuf,
        h: PathBuf,
        /// Output directory for left.inst, right.inst and transcript.json
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
        /// Reduce a fixed non-isomorphic pair when preprocessing already
        /// separates the inputs
        #[arg(long)]
        substitute_fixed_pair: bool,
    },
    /// Realize a target function by applications of the constraint set
    Realize {
        /// `form1`..`form6`, a gadget target such as `t&(x|y)`, or a
        /// constraint name applied to x1..xk
        #[arg(long)]
        target: String,
        /// Allow the constants 0 and 1 as arguments
        #[arg(long)]
        constants: bool,
    },
    /// Run the graph preprocessing on a pair
    Preprocess {
        g: PathBuf,
        h: PathBuf,
        /// Write the preprocessed graphs to this directory
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the deciders on random 2-affine instances
    Selfcheck {
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
