use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gnedin-fisher",
    version,
    about = "Evaluate, sample and verify Gnedin-Fisher exchangeable partitions"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// `auto` is exact when every parameter is an integer or a fraction.
    #[arg(long, global = true, value_enum, default_value_t = Backend::Auto)]
    pub backend: Backend,

    /// Pass threshold for float residuals in `verify`.
    #[arg(long, global = true, env = "GNEDIN_FISHER_TOLERANCE", default_value_t = 1e-10)]
    pub tolerance: f64,

    /// Worker threads for sampling replicates.
    #[arg(long, global = true, env = "GNEDIN_FISHER_THREADS", default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Exact,
    Float,
    Auto,
}

/// Model parameters: `gamma` with exactly one of `psi` or `zeta`.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,

    #[arg(long, allow_hyphen_values = true, conflicts_with = "zeta", required_unless_present = "zeta")]
    pub psi: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability of a partition with the given block sizes.
    Eppf {
        #[command(flatten)]
        model: ModelArgs,
        /// Block sizes, comma separated.
        #[arg(long)]
        counts: String,
    },
    /// Tabulate a law.
    Dist {
        #[command(subcommand)]
        law: DistLaw,
    },
    /// Draw replicates as newline-delimited JSON.
    Sample {
        #[command(subcommand)]
        kind: SampleKind,
    },
    /// Rewrite a model between the (gamma, psi) and (gamma, zeta) forms.
    Convert {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Check an identity; exit status 1 when it fails.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum DistLaw {
    /// Number of blocks K_n.
    Blocks {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: u64,
    },
    /// Prior of the number of species.
    XiPrior {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 20)]
        max_xi: u64,
    },
    /// Posterior of the number of species given K_n = k.
    XiPosterior {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 20)]
        max_xi: u64,
    },
    /// Number of new blocks among m further balls given K_n = k.
    NewBlocks {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
    },
    /// Structural distribution on the grid y = i/(grid+1).
    Structural {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 9)]
        grid: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SampleKind {
    /// Sequential one-step growth.
    Grow {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: SampleRun,
        #[arg(long)]
        n: usize,
    },
    /// Number of species from the prior, then a symmetric Dirichlet model.
    TwoStage {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: SampleRun,
        #[arg(long)]
        n: usize,
    },
    /// Frequency of the box holding ball 1.
    Structural {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: SampleRun,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SampleRun {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub replicates: u64,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// EPPF summed over all set partitions of {1..n} (n <= 9).
    Normalization {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
    },
    /// EPPF consistency under one more ball.
    Addition {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        counts: String,
    },
    /// Truncated mixture over Fisher extremes.
    Mixture {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 100_000)]
        xi_max: u64,
    },
    /// Prior times extreme weight against posterior times weight.
    Bayes {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        xi: u64,
    },
    /// Total probability over all multistep outcomes.
    Multistep {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "1")]
        counts: String,
        #[arg(long)]
        m: u64,
    },
    /// Structural law: total mass, atom, and the mixture form of the density.
    Structural {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 20_000)]
        xi_max: u64,
    },
}
