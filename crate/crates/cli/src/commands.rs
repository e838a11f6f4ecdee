use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use diffuse_core::compiler::{
    compile, compile_with, CompilationResult, CompileOptions, NetStack, StageMode,
};
use diffuse_core::gateset::GateSet;
use diffuse_core::nets::{build_sampling_net_with, read_net_header, select_ball, SamplingOptions};
use diffuse_core::shrink::{
    diffusivity_report, shrink, write_cloud_csv, DiffusivityOptions, DiffusivityReport,
    ShrinkMethod, ShrinkOptions, ShrinkReport,
};
use diffuse_core::Execution;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::targets::{parse_target, phase_gate};

/// Phase gates `R_{2^m}` used by the benchmark.
pub const BENCH_GATES: std::ops::RangeInclusive<u32> = 1..=7;

#[derive(Clone, Debug)]
pub struct BuildSummary {
    pub method: ShrinkMethod,
    pub gate_set: String,
    pub sampling_points: usize,
    pub ball_points: usize,
    pub reports: Vec<ShrinkReport>,
}

impl BuildSummary {
    /// `key = value` text without timings.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "method={}", self.method);
        let _ = writeln!(s, "gate_set={}", self.gate_set);
        let _ = writeln!(s, "sampling_points={}", self.sampling_points);
        let _ = writeln!(s, "ball_points={}", self.ball_points);
        for r in &self.reports {
            let _ = writeln!(s, "[level {}]", r.level);
            s.push_str(&r.to_text());
        }
        s
    }
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// The gate set a method works with: commutators need the inverses.
pub fn method_gate_set(cfg: &RunConfig, method: ShrinkMethod) -> CliResult<GateSet> {
    let gs = cfg.gateset.load()?;
    Ok(match method {
        ShrinkMethod::Diffusion => gs,
        ShrinkMethod::Commutator => gs.augment_with_inverses(),
    })
}

/// Sampling net, level-0 ball and `cfg.levels` shrink steps.
///
/// For the commutator method the sampling net and the ball use only the
/// direct gates; inverse gates appear only inside commutator words.
pub fn build_stack(cfg: &RunConfig, method: ShrinkMethod) -> CliResult<(NetStack, BuildSummary)> {
    cfg.validate()?;
    let gs = method_gate_set(cfg, method)?;
    let alphabet = (method == ShrinkMethod::Commutator).then(|| gs.direct_count());
    let sopts = SamplingOptions {
        cap: cfg.enumeration_cap,
        alphabet,
        exec: Execution::Parallel,
    };
    let sampling = build_sampling_net_with(&gs, cfg.length, &sopts)?;
    let ball = select_ball(&sampling, cfg.eps_s)?;
    let (sampling_points, ball_points) = (sampling.len(), ball.len());
    let mut levels = vec![ball];
    let mut reports = Vec::new();
    for i in 0..cfg.levels {
        let opts = ShrinkOptions {
            steps: cfg.steps,
            target: cfg.target_count,
            density_constant: cfg.density,
            candidate_budget: cfg.budget,
            rotation_cap: cfg.rotation_cap,
            commutator_slack: cfg.commutator_slack,
            seed: cfg.seed.wrapping_add(i as u64),
            exec: Execution::Parallel,
        };
        let (net, report) = shrink(levels.last().expect("ball present"), &gs, method, &opts)?;
        levels.push(net);
        reports.push(report);
    }
    let summary = BuildSummary {
        method,
        gate_set: gs.label().to_string(),
        sampling_points,
        ball_points,
        reports,
    };
    Ok((NetStack::new(gs, sampling, levels)?, summary))
}

pub fn cmd_build(cfg: &RunConfig) -> CliResult<String> {
    let start = Instant::now();
    let (stack, summary) = build_stack(cfg, cfg.method)?;
    let dir = cfg.output.join("stack");
    stack.save(&dir)?;
    let text = summary.to_text();
    write_file(&cfg.output.join("build_report.txt"), text.as_bytes())?;
    write_file(&cfg.output.join("config.txt"), cfg.to_text().as_bytes())?;
    for r in &summary.reports {
        eprintln!("level {} shrink: {} ms", r.level, r.wall_time.as_millis());
    }
    eprintln!(
        "build finished in {} ms; stack written to {}",
        start.elapsed().as_millis(),
        dir.display()
    );
    Ok(text)
}

pub fn cmd_compile(
    stack_dir: &Path,
    target: &str,
    use_index: bool,
    skip_satisfied: bool,
) -> CliResult<(CompilationResult, String)> {
    let u = parse_target(target)?;
    let mut stack = NetStack::load(stack_dir)?;
    if use_index {
        stack.build_indices()?;
    }
    let mode = if skip_satisfied {
        StageMode::SkipSatisfied
    } else {
        StageMode::AlwaysAppend
    };
    let res = compile_with(
        &u,
        &stack,
        &CompileOptions {
            mode,
            ..Default::default()
        },
    )?;
    let report = res.report(&u, stack.gate_set());
    Ok((res, report))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub method: ShrinkMethod,
    pub r: usize,
    pub m: u32,
    pub length: usize,
    pub d: f64,
    pub df: f64,
}

pub const BENCH_HEADER: &str = "method,r,m,length,D,dF";

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.10e},{:.10e}",
            self.method, self.r, self.m, self.length, self.d, self.df
        )
    }
}

/// Both methods, every length in `cfg.bench_lengths`, all seven phase gates.
pub fn run_benchmark(cfg: &RunConfig) -> CliResult<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for method in [ShrinkMethod::Diffusion, ShrinkMethod::Commutator] {
        for &r in &cfg.bench_lengths {
            let run = RunConfig {
                length: r,
                ..cfg.clone()
            };
            let start = Instant::now();
            let (stack, _) = build_stack(&run, method)?;
            eprintln!(
                "{method} r={r}: stack built in {} ms",
                start.elapsed().as_millis()
            );
            for m in BENCH_GATES {
                let res = compile(&phase_gate(m), &stack)?;
                rows.push(BenchRow {
                    method,
                    r,
                    m,
                    length: res.word.len(),
                    d: res.final_d,
                    df: res.final_df,
                });
            }
        }
    }
    Ok(rows)
}

pub fn benchmark_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(BENCH_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

pub fn cmd_benchmark(cfg: &RunConfig) -> CliResult<String> {
    cfg.validate()?;
    let csv = benchmark_csv(&run_benchmark(cfg)?);
    write_file(&cfg.output.join("benchmark.csv"), csv.as_bytes())?;
    Ok(csv)
}

pub fn diagnose(cfg: &RunConfig) -> CliResult<DiffusivityReport> {
    cfg.validate()?;
    let gs = cfg.gateset.load()?;
    let opts = DiffusivityOptions {
        word_len: cfg.diagnose_length,
        sample: cfg.sample,
        seed: cfg.seed,
        exec: Execution::Parallel,
    };
    Ok(diffusivity_report(&gs, &opts)?)
}

pub fn cmd_diagnose(cfg: &RunConfig) -> CliResult<String> {
    let report = diagnose(cfg)?;
    let mut csv = Vec::new();
    write_cloud_csv(&report.points, &mut csv).map_err(|e| CliError::io("cloud.csv", e))?;
    write_file(&cfg.output.join("cloud.csv"), &csv)?;
    let text = report.to_text();
    write_file(&cfg.output.join("diagnose.txt"), text.as_bytes())?;
    Ok(text)
}

pub fn cmd_net_info(path: &Path) -> CliResult<String> {
    let h = read_net_header(path)?;
    let mut s = String::new();
    let _ = writeln!(s, "format_version={}", h.version);
    let _ = writeln!(s, "dim={}", h.dim);
    let _ = writeln!(s, "algebra_dim={}", h.algebra_dim);
    let _ = writeln!(s, "level={}", h.level);
    let _ = writeln!(s, "radius={}", h.radius);
    let _ = writeln!(s, "word_len={}", h.word_len);
    let _ = writeln!(s, "count={}", h.count);
    let _ = writeln!(s, "fingerprint={}", h.fingerprint);
    Ok(s)
}
