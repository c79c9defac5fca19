use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "jumploci", version, about = "Exact cohomology jump loci, subtori and 1-Hodge structure certificates")]
pub struct Cli {
    /// Input file; repeat to load several files into one workspace.
    #[arg(long = "workspace", global = true, value_name = "FILE")]
    pub workspace: Vec<PathBuf>,
    /// Compact single-line JSON and no human summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Report cohomology of the character instead of homology (charvar only).
    #[arg(long, global = true)]
    pub dual: bool,
    /// Seed for randomized sweeps and sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cache directory; JUMPLOCI_CACHE takes precedence when set.
    #[arg(long = "cache-dir", global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resonance of an algebra (or a module over it) at a point, on a subspace, or by probing.
    Resonance(ResonanceArgs),
    /// Twisted Betti numbers and characteristic varieties of a complex.
    #[command(subcommand)]
    Charvar(CharvarCmd),
    /// Compare resonance and characteristic varieties near the origin.
    CompareExp(CompareArgs),
    /// Subtorus arithmetic.
    #[command(subcommand)]
    Torus(TorusCmd),
    /// 1-Hodge structures.
    #[command(subcommand)]
    Hodge(HodgeCmd),
    /// Validate every object of the workspace.
    Validate,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["point", "subspace", "probe"]))]
pub struct ResonanceArgs {
    #[arg(long)]
    pub algebra: String,
    /// Use the module's complex instead of the algebra's.
    #[arg(long)]
    pub module: Option<String>,
    #[arg(long)]
    pub i: usize,
    #[arg(long)]
    pub k: usize,
    /// Comma-separated rational coordinates in the flat-connection chart.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Certify that a `[subspace]` lies in the resonance variety.
    #[arg(long)]
    pub subspace: Option<String>,
    /// Search for components through the origin (heuristic).
    #[arg(long)]
    pub probe: bool,
    #[arg(long, default_value_t = 32)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct CharArgs {
    /// `[complex]` or `[presentation]` name.
    #[arg(long)]
    pub complex: String,
    /// Comma-separated rational exponents `q`, the character `t_j ↦ e^{2πi q_j}`; trivial if omitted.
    #[arg(long = "char", allow_hyphen_values = true)]
    pub character: Option<String>,
    /// Evaluate in floating point (non-certified).
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Debug, Subcommand)]
pub enum CharvarCmd {
    /// Twisted Betti numbers at one character.
    Betti(CharArgs),
    /// Whether a character lies in the characteristic variety.
    Member {
        #[command(flatten)]
        at: CharArgs,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        k: usize,
    },
    /// Torsion characters of the sweep set lying in the characteristic variety.
    Sweep {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        k: usize,
        /// Random characters drawn when there are more than three coordinates.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Certify that a `[torus]` lies in the characteristic variety.
    VerifyTorus {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        torus: String,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long)]
    pub complex: String,
    #[arg(long)]
    pub i: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 40)]
    pub samples: usize,
    #[arg(long, default_value_t = 6)]
    pub denominator: i64,
}

#[derive(Debug, Subcommand)]
pub enum TorusCmd {
    /// The translated subtorus exp(V) of an `[affine]` subspace.
    ExpImage {
        #[arg(long)]
        affine: String,
    },
    /// Whether the point exp(2πi w) lies on a `[torus]`.
    Member {
        #[arg(long)]
        torus: String,
        /// Comma-separated rational exponents `w`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Whether one translated subtorus contains another.
    Contain {
        #[arg(long)]
        torus: String,
        #[arg(long = "in")]
        container: String,
    },
    /// Identity component and component count of an intersection.
    Intersect {
        #[arg(long)]
        torus: String,
        #[arg(long)]
        with: String,
    },
    /// Whether every generator of a `[zeroset]` vanishes on a torus or exp-image.
    #[command(group = clap::ArgGroup::new("on").required(true).args(["torus", "affine"]))]
    Vanish {
        #[arg(long)]
        zeroset: String,
        #[arg(long)]
        torus: Option<String>,
        #[arg(long)]
        affine: Option<String>,
    },
    /// Ax–Lindemann hypotheses and the predicted translated subtorus.
    Axl {
        #[arg(long)]
        affine: String,
        #[arg(long)]
        zeroset: String,
        /// Claimed dimension of the zero set.
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Debug, Args)]
pub struct HodgeRef {
    #[arg(long)]
    pub hodge: String,
}

#[derive(Debug, Args)]
pub struct SubArgs {
    #[arg(long)]
    pub hodge: String,
    /// Integer rows separated by `;`, e.g. "1 -1 0; 0 1 -1".
    #[arg(long, allow_hyphen_values = true)]
    pub lattice: String,
}

#[derive(Debug, Subcommand)]
pub enum HodgeCmd {
    /// Check the 1-Hodge structure axioms.
    Check(HodgeRef),
    /// Hodge numbers h^{1,0}, h^{0,1}, h^{1,1}.
    Numbers(HodgeRef),
    /// The lattice Λ ∩ W.
    Lambda0(HodgeRef),
    /// Whether a sublattice carries a sub 1-Hodge structure.
    Sub(SubArgs),
    /// The quotient by a sub 1-Hodge structure.
    Quotient(SubArgs),
    /// Verify every piece of a `[bdr]` certificate.
    BdrVerify {
        #[arg(long)]
        bdr: String,
    },
    /// Short exact sequence bookkeeping.
    Ses(HodgeRef),
}
