use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gpr_bench::{run, BenchError, Command, ExperimentSpec, Format, ModelChoice, OUT_DIR_ENV};
use gpr_core::matmul::ChildShape;

/// Exact packed matrix products with metered bit costs.
#[derive(Parser)]
#[command(name = "gprbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Matrix sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Entry bound: inputs are drawn from [-Bmax, Bmax].
    #[arg(long = "bmax", visible_alias = "Bmax", default_value_t = 1)]
    bmax: u64,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Leaf size of the recursion.
    #[arg(long, default_value_t = 1)]
    n0: usize,
    /// Report file. Defaults to `<dir>/<command>.<format>` where `dir` is
    /// $GPR_OUT_DIR or `reports`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, env = OUT_DIR_ENV, hide_env_values = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Panel,
    Square,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Uniform,
    Wordram,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conformance, extractor, ownership-audit and width suites.
    Verify {
        #[command(flatten)]
        common: Common,
        /// `square` uses quarter-block children and should produce a reported mismatch.
        #[arg(long, value_enum, default_value_t = ShapeArg::Panel)]
        child_shape: ShapeArg,
    },
    /// Cost counters against the predicted growth, with log-log fits.
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModelArg::Wordram)]
        model: ModelArg,
        /// Word size; defaults to a size-dependent width of at least 64.
        #[arg(long)]
        w: Option<u32>,
    },
    /// Slice-staged products and per-pass extraction widths.
    Slices {
        #[command(flatten)]
        common: Common,
        /// Slice counts, comma separated.
        #[arg(long = "k", visible_alias = "K", value_delimiter = ',')]
        k: Option<Vec<u32>>,
    },
    /// Floating-point leaves against integer leaves and the classical dot product.
    Fp {
        #[command(flatten)]
        common: Common,
        /// `double`, `double-double` or `binaryN`; defaults to the cheapest sufficient format.
        #[arg(long)]
        precision: Option<String>,
    },
    /// Context-free recognition. Without `--grammar`, random grammars against CYK.
    Cfg {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        grammar: Option<String>,
        #[arg(long = "word")]
        words: Vec<String>,
    },
    /// Unweighted all-pairs distances. Without `--graph`, random digraphs against BFS.
    Apsp {
        #[command(flatten)]
        common: Common,
        /// Edge list, one `u v` pair per line.
        #[arg(long)]
        graph: Option<String>,
    },
    /// Triangle counting. Without `--graph`, exhaustive and random graphs against brute force.
    Triangle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph: Option<String>,
    },
    /// Growth class of `T(n) = sum T(alpha_i n) + n^2 log^c n`.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Comma separated fractions; `0.5x8` repeats a value.
        #[arg(long, allow_hyphen_values = true)]
        alphas: String,
        #[arg(long, default_value_t = 0)]
        c: u32,
    },
}

fn build(cmd: Cmd) -> (ExperimentSpec, Option<PathBuf>) {
    let (command, common) = match &cmd {
        Cmd::Verify { common, .. } => (Command::Verify, common),
        Cmd::Bench { common, .. } => (Command::Bench, common),
        Cmd::Slices { common, .. } => (Command::Slices, common),
        Cmd::Fp { common, .. } => (Command::Fp, common),
        Cmd::Cfg { common, .. } => (Command::Cfg, common),
        Cmd::Apsp { common, .. } => (Command::Apsp, common),
        Cmd::Triangle { common, .. } => (Command::Triangle, common),
        Cmd::Classify { common, .. } => (Command::Classify, common),
    };
    let mut spec = ExperimentSpec::new(command);
    if let Some(sizes) = &common.sizes {
        spec.sizes = sizes.clone();
    }
    if let Some(t) = common.trials {
        spec.trials = t;
    }
    spec.bmax = common.bmax;
    spec.seed = common.seed;
    spec.n0 = common.n0;
    spec.out_path = common.out.clone();
    spec.format = match common.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let out_dir = common.out_dir.clone();
    match cmd {
        Cmd::Verify { child_shape, .. } => {
            spec.child_shape = match child_shape {
                ShapeArg::Panel => ChildShape::Panel,
                ShapeArg::Square => ChildShape::SquareBlocks,
            }
        }
        Cmd::Bench { model, w, .. } => {
            spec.model = match model {
                ModelArg::Uniform => ModelChoice::Uniform,
                ModelArg::Wordram => ModelChoice::Wordram,
            };
            spec.w = w;
        }
        Cmd::Slices { k, .. } => {
            if let Some(k) = k {
                spec.k = k;
            }
        }
        Cmd::Fp { precision, .. } => spec.precision = precision,
        Cmd::Cfg { grammar, words, .. } => {
            spec.grammar = grammar;
            spec.words = words;
        }
        Cmd::Apsp { graph, .. } | Cmd::Triangle { graph, .. } => spec.graph = graph,
        Cmd::Classify { alphas, c, .. } => {
            spec.alphas = Some(alphas);
            spec.c = c;
        }
    }
    (spec, out_dir)
}

fn execute(spec: &ExperimentSpec, out_dir: Option<PathBuf>) -> Result<i32, BenchError> {
    let outcome = run(spec)?;
    let path = spec.resolve_out(out_dir);
    outcome.write(&path, spec.format)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    println!("report: {}", path.display());
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (spec, out_dir) = build(cli.command);
    match execute(&spec, out_dir) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("gprbench: {e}");
            ExitCode::from(2)
        }
    }
}
