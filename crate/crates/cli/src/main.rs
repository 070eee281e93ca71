//! `lbuild`: counting, verification and export jobs on the distance-one
//! structure of the buildings of `SL_n` and `Sp_n` over `F_q((t))`.

mod envelope;
mod jobs;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser)]
#[command(name = "lbuild", version, about = "Exact enumeration on affine buildings of SL_n and Sp_n")]
struct Cli {
    #[command(subcommand)]
    family: FamilyCmd,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Building of SL_n, vertices are lattice classes in K^n.
    Sl {
        #[command(subcommand)]
        command: Command,
    },
    /// Building of Sp_n, vertices are special lattice classes in K^{2n}.
    Sp {
        #[command(subcommand)]
        command: Command,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Sl,
    Sp,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sl => "sl",
            Family::Sp => "sp",
        }
    }
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// t-adic precision of the lattice representation.
    #[arg(long)]
    precision: Option<usize>,
    /// Allow sizes in the slow tier.
    #[arg(long)]
    slow: bool,
    /// Allow sizes outside the enumeration envelope.
    #[arg(long)]
    force: bool,
    /// Worker threads (default: all cores).
    #[arg(long, env = "THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Clone, Debug)]
pub struct Size {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u32,
}

#[derive(Args, Clone, Debug)]
pub struct Sampling {
    /// Number of close pairs to examine; 0 means all of them.
    #[arg(long, default_value_t = 20)]
    sample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Clone, Debug)]
pub enum Command {
    /// Chambers through the base vertex, against the closed formula.
    CountChambers {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        common: Common,
    },
    /// Vertices close to the base vertex, against the closed formula.
    CountClose {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        common: Common,
    },
    /// Length-one gallery multiplicities of sampled close pairs, and the
    /// total number of galleries leaving the base vertex.
    Multiplicity {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        common: Common,
    },
    /// The relation between chamber and close-vertex counts.
    VerifyRelation {
        #[command(flatten)]
        size: Size,
        /// Evaluate the closed formulas only.
        #[arg(long)]
        formula_only: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Close complexes of sampled pairs against the spherical building.
    VerifyIso {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        common: Common,
    },
    /// The close complex of one pair.
    ExportComplex {
        #[command(flatten)]
        size: Size,
        /// Index into the sorted list of close vertices.
        #[arg(long, default_value_t = 0)]
        pair: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Formula values over a range of ranks.
    Table {
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        q: Vec<u32>,
        /// Add enumerated counts for sizes inside the envelope.
        #[arg(long)]
        enumerate: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Chambers through each panel of the chambers at the base vertex.
    Thickness {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        common: Common,
    },
    /// Apartment coordinates against lattice computations, and the type
    /// shift of similitudes (sp only).
    Classify {
        #[command(flatten)]
        size: Size,
        #[arg(long, default_value_t = 100)]
        vertices: usize,
        #[arg(long, default_value_t = 100)]
        elements: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Lifts of adjacent chambers of the standard apartment to SL_{2n} (sp only).
    Lift {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::CountChambers { common, .. }
            | Command::CountClose { common, .. }
            | Command::Multiplicity { common, .. }
            | Command::VerifyRelation { common, .. }
            | Command::VerifyIso { common, .. }
            | Command::ExportComplex { common, .. }
            | Command::Table { common, .. }
            | Command::Thickness { common, .. }
            | Command::Classify { common, .. }
            | Command::Lift { common, .. } => common,
        }
    }
}

/// Why a job did not produce a report.
pub enum Refusal {
    /// Too large without `--slow` or `--force`.
    Infeasible(String),
    Invalid(String),
}

impl From<lattice_buildings::Error> for Refusal {
    fn from(e: lattice_buildings::Error) -> Self {
        Refusal::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (family, command) = match cli.family {
        FamilyCmd::Sl { command } => (Family::Sl, command),
        FamilyCmd::Sp { command } => (Family::Sp, command),
    };
    let common = command.common().clone();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = common.threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("lbuild: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let result = pool.install(|| jobs::run(family, &command));
    let report = match result {
        Ok(r) => r,
        Err(Refusal::Infeasible(msg) | Refusal::Invalid(msg)) => {
            eprintln!("lbuild: {msg}");
            return ExitCode::from(2);
        }
    };
    match output::render(&report, common.format) {
        Ok(text) => print!("{text}"),
        Err(msg) => {
            eprintln!("lbuild: {msg}");
            return ExitCode::from(2);
        }
    }
    eprintln!("lbuild: finished in {} ms", start.elapsed().as_millis());
    if report.ok {
        ExitCode::SUCCESS
    } else {
        if let Some(c) = &report.counterexample {
            eprintln!("lbuild: counterexample {c}");
        }
        ExitCode::from(1)
    }
}
