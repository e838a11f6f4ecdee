use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use diffuse_cli::commands::{cmd_benchmark, cmd_build, cmd_compile, cmd_diagnose, cmd_net_info};
use diffuse_cli::{CliError, CliResult, RunConfig};
use diffuse_core::exec::with_threads;

#[derive(Parser)]
#[command(
    name = "diffuse",
    version,
    about = "Inverse-free gate compilation with diffusive epsilon-nets"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the sampling net, the ball and the shrunk levels; save the stack.
    Build(Common),
    /// Compile a target against a saved stack.
    Compile(CompileArgs),
    /// Compile the seven phase gates R2..R128 with both methods; write a CSV.
    Benchmark(Common),
    /// Diffusivity diagnostics and the vector cloud of random words.
    Diagnose(Common),
    /// Print the header of a net file.
    NetInfo { path: PathBuf },
}

/// Flags override the config file, which overrides the defaults.
#[derive(Args, Default)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    /// standard, h-t, random:<seed> or file:<path>.
    #[arg(long)]
    gateset: Option<String>,
    /// Sampling word length r.
    #[arg(long)]
    length: Option<String>,
    /// Radius of the level-0 ball.
    #[arg(long)]
    eps_s: Option<String>,
    /// diffusion or commutator.
    #[arg(long)]
    method: Option<String>,
    /// Tuple size M for diffusion.
    #[arg(long)]
    steps: Option<String>,
    /// Density constant C in C / eps^d.
    #[arg(long)]
    density: Option<String>,
    /// Maximum number of candidate tuples per shrink step.
    #[arg(long)]
    budget: Option<String>,
    /// Maximum number of sampling-net words.
    #[arg(long)]
    enumeration_cap: Option<String>,
    /// Number of shrink levels.
    #[arg(long)]
    levels: Option<String>,
    /// Rotations added per survivor (`none` for all).
    #[arg(long)]
    rotation_cap: Option<String>,
    #[arg(long)]
    commutator_slack: Option<String>,
    /// Size of each shrunk net (`none` for C / eps^d).
    #[arg(long)]
    target_count: Option<String>,
    /// Number of random words for diagnose.
    #[arg(long)]
    sample: Option<String>,
    /// Word length for diagnose.
    #[arg(long)]
    diagnose_length: Option<String>,
    /// Comma-separated sampling lengths for benchmark.
    #[arg(long)]
    bench_lengths: Option<String>,
    #[arg(long)]
    output: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<String>,
}

impl Common {
    fn resolve(&self) -> CliResult<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let flags = [
            ("seed", &self.seed),
            ("gateset", &self.gateset),
            ("length", &self.length),
            ("eps_s", &self.eps_s),
            ("method", &self.method),
            ("steps", &self.steps),
            ("density", &self.density),
            ("budget", &self.budget),
            ("enumeration_cap", &self.enumeration_cap),
            ("levels", &self.levels),
            ("rotation_cap", &self.rotation_cap),
            ("commutator_slack", &self.commutator_slack),
            ("target_count", &self.target_count),
            ("sample", &self.sample),
            ("diagnose_length", &self.diagnose_length),
            ("bench_lengths", &self.bench_lengths),
            ("output", &self.output),
            ("threads", &self.threads),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    common: Common,
    /// Stack directory (default: <output>/stack).
    #[arg(long)]
    stack: Option<PathBuf>,
    /// R<k> with k a power of two, I, or a matrix file.
    #[arg(long)]
    target: String,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Use vantage-point indices for the lookups.
    #[arg(long)]
    index: bool,
    /// Skip correction stages that are already satisfied or would not help.
    #[arg(long)]
    skip_satisfied: bool,
}

fn run(cli: Cli) -> CliResult<()> {
    let threads = match &cli.cmd {
        Cmd::Build(c) | Cmd::Benchmark(c) | Cmd::Diagnose(c) => c.resolve()?.threads,
        Cmd::Compile(a) => a.common.resolve()?.threads,
        Cmd::NetInfo { .. } => None,
    };
    let body = move || -> CliResult<()> {
        let out = match cli.cmd {
            Cmd::Build(c) => cmd_build(&c.resolve()?)?,
            Cmd::Benchmark(c) => cmd_benchmark(&c.resolve()?)?,
            Cmd::Diagnose(c) => cmd_diagnose(&c.resolve()?)?,
            Cmd::Compile(a) => {
                let cfg = a.common.resolve()?;
                let dir = a.stack.unwrap_or_else(|| cfg.output.join("stack"));
                let (_, report) = cmd_compile(&dir, &a.target, a.index, a.skip_satisfied)?;
                if let Some(path) = &a.report {
                    std::fs::write(path, &report).map_err(|e| CliError::io(path, e))?;
                }
                report
            }
            Cmd::NetInfo { path } => cmd_net_info(&path)?,
        };
        print!("{out}");
        Ok(())
    };
    match threads {
        Some(n) => with_threads(n, body),
        None => body(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
