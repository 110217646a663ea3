mod cache;
mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use output::Format;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "quadvol", version, about = "Masur-Veech volumes, Siegel-Veech constants and multicurve statistics")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Significant digits in decimal renderings.
    #[arg(long, default_value_t = 20, global = true)]
    digits: u32,
    /// Neither read nor write the correlator cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GN {
    pub g: u32,
    pub n: u32,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Masur-Veech volume of Q_{g,n}.
    Volume {
        #[command(flatten)]
        gn: GN,
        /// One line per stable graph.
        #[arg(long)]
        by_graph: bool,
        /// Totals grouped by number of cylinders.
        #[arg(long)]
        by_cylinders: bool,
        /// List graphs up to relabelling of the legs.
        #[arg(long)]
        shapes: bool,
    },
    /// pi^2/3 * c_area and the Lyapunov sums.
    Carea {
        #[command(flatten)]
        gn: GN,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Stable graphs of type (g, n) in canonical order.
    Graphs {
        #[command(flatten)]
        gn: GN,
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        shapes: bool,
    },
    /// Frequencies of simple closed multicurves.
    Freq {
        #[command(subcommand)]
        what: FreqCmd,
    },
    /// psi-class intersection number <tau_d1 ... tau_dn>_g.
    Corr {
        g: u32,
        #[arg(required = true)]
        d: Vec<u32>,
    },
    /// Normalized two-point correlators a_{g,k}.
    Agk {
        g: u32,
        /// Every genus from 1 to g.
        #[arg(long)]
        all: bool,
    },
    /// Statistics of square-tiled surfaces.
    Stats {
        #[command(subcommand)]
        what: StatsCmd,
    },
    /// Large-genus diagnostics.
    Asym {
        #[arg(long, default_value_t = 20)]
        from: u32,
        #[arg(long, default_value_t = 60)]
        to: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Direct,
    Boundary,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum FreqCmd {
    /// b_{g,n}, all multicurves together.
    Total {
        #[command(flatten)]
        gn: GN,
    },
    /// c(gamma) for the multicurve given by a graph index and weights.
    Curve {
        #[command(flatten)]
        gn: GN,
        #[arg(long)]
        graph: usize,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    /// Separating over non-separating simple closed curves, closed surface of genus g.
    SepRatio { g: u32 },
    /// Shares of one-component multicurves by complement type.
    Split {
        #[command(flatten)]
        gn: GN,
    },
}

#[derive(Subcommand, Debug)]
pub enum StatsCmd {
    /// Probability of k maximal cylinders.
    Dist {
        #[command(flatten)]
        gn: GN,
    },
    /// Expectation query, e.g. `ratio e0/e1`.
    Query {
        #[command(flatten)]
        gn: GN,
        #[arg(long)]
        graph: usize,
        #[arg(long, value_delimiter = ',')]
        heights: Option<Vec<u32>>,
        #[arg(required = true, num_args = 1..)]
        query: Vec<String>,
    },
    /// Probability that a one-cylinder surface has height 1.
    HeightOne {
        #[command(flatten)]
        gn: GN,
    },
    /// Probability that all cylinder heights are at most B.
    Bounded {
        #[command(flatten)]
        gn: GN,
        #[arg(long)]
        graph: usize,
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let loaded = if cli.no_cache { 0 } else { cache::load() };
    let result = commands::run(&cli.cmd, cli.format, cli.digits);
    if !cli.no_cache {
        cache::store(loaded);
    }
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
