use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub const DEFAULT_CUTOFF: usize = 40;

/// Displacement-operator measures for qudit registers and truncated bosonic
/// modes. Results go to stdout as JSON, diagnostics to stderr.
#[derive(Debug, Parser)]
#[command(name = "weylswap", version)]
pub struct Cli {
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub log2: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilizer Renyi entropy M_alpha of a pure state.
    Magic(MagicArgs),
    /// Renyi-2 entanglement entropy of subsystem A, by displacements and by
    /// partial trace.
    Renyi2(PartitionArgs),
    /// Negativity with respect to transposing the given qudits.
    Negativity(PartitionArgs),
    /// Weyl function, Weyl entropy and quadrature SWAP for truncated modes.
    #[command(subcommand)]
    Cv(CvCommand),
    /// Check the displacement identities on random inputs.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MagicArgs {
    pub state: PathBuf,
    /// Renyi index; 1 selects the Shannon limit.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Estimate the alpha = 2 purity from this many uniformly drawn labels.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    pub state: PathBuf,
    /// Comma-separated qudit positions, e.g. `0,2`.
    #[arg(long)]
    pub partition: String,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Quadrature disc radius.
    #[arg(long, default_value_t = 6.0)]
    pub radius: f64,
    /// Quadrature lattice spacing.
    #[arg(long, default_value_t = 0.1)]
    pub spacing: f64,
}

#[derive(Debug, Subcommand)]
pub enum CvCommand {
    /// Weyl function at `--at` points, or a CSV over the grid nodes.
    Weyl {
        /// `vacuum`, `coherent:RE+IMi`, `fock:N`, or a state file.
        state: String,
        /// Fock cutoff for the named states (default 40).
        #[arg(long)]
        cutoff: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
        /// Displacement amplitude, one per mode, as RE+IMi.
        #[arg(long, allow_hyphen_values = true)]
        at: Vec<String>,
    },
    /// Differential entropy of the Weyl distribution.
    Entropy {
        state: String,
        #[arg(long)]
        cutoff: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Low-block error of the two-mode quadrature SWAP at the spacing and at
    /// half of it.
    Swapcheck {
        #[arg(long, default_value_t = 24)]
        cutoff: usize,
        #[arg(long, default_value_t = 6.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.15)]
        spacing: f64,
        /// Largest Fock number in the checked block (default cutoff / 2).
        #[arg(long)]
        block: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated local dimensions, e.g. `3,3`.
    #[arg(long, default_value = "2")]
    pub dims: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
