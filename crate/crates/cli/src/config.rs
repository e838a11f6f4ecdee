//! Run configuration: built-in defaults, then an optional `key = value`
//! file, then command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use diffuse_core::gateset::{
    clifford_t_set, make_diffusive_qubit_set, standard_diffusive_set, GateSet, MixerSource,
};
use diffuse_core::shrink::ShrinkMethod;

use crate::error::{CliError, CliResult};

/// Environment variable that overrides the default output directory.
pub const OUTPUT_ENV: &str = "DIFFUSE_OUTPUT";

#[derive(Clone, Debug, PartialEq)]
pub enum GateSetSource {
    /// `{H F, T F}` with the published mixer.
    Standard,
    /// Bare `{H, T}`.
    CliffordT,
    /// `{H F, T F}` with a Haar-random mixer drawn from the seed.
    Random(u64),
    File(PathBuf),
}

impl GateSetSource {
    pub fn load(&self) -> CliResult<GateSet> {
        Ok(match self {
            GateSetSource::Standard => standard_diffusive_set()?,
            GateSetSource::CliffordT => clifford_t_set()?,
            GateSetSource::Random(seed) => {
                make_diffusive_qubit_set(MixerSource::Seed(*seed))?.gate_set
            }
            GateSetSource::File(p) => GateSet::load(p)?,
        })
    }
}

impl FromStr for GateSetSource {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let s = s.trim();
        if let Some(seed) = s.strip_prefix("random:") {
            return seed
                .parse()
                .map(GateSetSource::Random)
                .map_err(|_| CliError::Config(format!("bad seed in `{s}`")));
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(GateSetSource::File(PathBuf::from(path)));
        }
        match s {
            "standard" | "builtin" => Ok(GateSetSource::Standard),
            "h-t" => Ok(GateSetSource::CliffordT),
            _ => Err(CliError::Config(format!(
                "unknown gate set `{s}` (expected standard, h-t, random:<seed> or file:<path>)"
            ))),
        }
    }
}

impl fmt::Display for GateSetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateSetSource::Standard => f.write_str("standard"),
            GateSetSource::CliffordT => f.write_str("h-t"),
            GateSetSource::Random(s) => write!(f, "random:{s}"),
            GateSetSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub gateset: GateSetSource,
    /// Sampling word length `r`.
    pub length: usize,
    /// Radius of the level-0 ball.
    pub eps_s: f64,
    pub method: ShrinkMethod,
    /// Tuple size `M` for diffusion.
    pub steps: usize,
    /// Density constant `C`.
    pub density: f64,
    pub budget: u64,
    pub enumeration_cap: u64,
    /// Number of shrink levels.
    pub levels: usize,
    pub rotation_cap: Option<usize>,
    pub commutator_slack: f64,
    /// Overrides the size of every shrunk net.
    pub target_count: Option<u64>,
    pub sample: usize,
    pub diagnose_length: usize,
    pub bench_lengths: Vec<usize>,
    pub output: PathBuf,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            gateset: GateSetSource::Standard,
            length: 16,
            eps_s: 0.3,
            method: ShrinkMethod::Diffusion,
            steps: 3,
            density: 8.0,
            budget: diffuse_core::shrink::DEFAULT_CANDIDATE_BUDGET,
            enumeration_cap: diffuse_core::nets::DEFAULT_ENUMERATION_CAP,
            levels: 1,
            rotation_cap: None,
            commutator_slack: 1.0,
            target_count: None,
            sample: 1 << 17,
            diagnose_length: 17,
            bench_lengths: vec![16, 17, 18],
            output: std::env::var_os(OUTPUT_ENV)
                .map_or_else(|| PathBuf::from("out"), PathBuf::from),
            threads: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_opt<T: FromStr>(key: &str, value: &str) -> CliResult<Option<T>> {
    match value.trim() {
        "" | "none" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

impl RunConfig {
    /// Sets one field from its textual `key = value` form.
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        match key.trim() {
            "seed" => self.seed = parse(key, value)?,
            "gateset" => self.gateset = value.parse()?,
            "length" => self.length = parse(key, value)?,
            "eps_s" => self.eps_s = parse(key, value)?,
            "method" => {
                self.method = value
                    .parse()
                    .map_err(|e: diffuse_core::Error| CliError::Config(e.to_string()))?
            }
            "steps" => self.steps = parse(key, value)?,
            "density" => self.density = parse(key, value)?,
            "budget" => self.budget = parse(key, value)?,
            "enumeration_cap" => self.enumeration_cap = parse(key, value)?,
            "levels" => self.levels = parse(key, value)?,
            "rotation_cap" => self.rotation_cap = parse_opt(key, value)?,
            "commutator_slack" => self.commutator_slack = parse(key, value)?,
            "target_count" => self.target_count = parse_opt(key, value)?,
            "sample" => self.sample = parse(key, value)?,
            "diagnose_length" => self.diagnose_length = parse(key, value)?,
            "bench_lengths" => {
                self.bench_lengths = value
                    .split(',')
                    .map(|v| parse(key, v))
                    .collect::<CliResult<_>>()?
            }
            "output" => self.output = PathBuf::from(value),
            "threads" => self.threads = parse_opt(key, value)?,
            other => return Err(CliError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> CliResult<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(1..=64).contains(&self.length) {
            return bad(format!("length must be in 1..=64, got {}", self.length));
        }
        if !(self.eps_s > 0.0 && self.eps_s < 1.0) {
            return bad(format!("eps_s must lie in (0, 1), got {}", self.eps_s));
        }
        if self.steps < 2 {
            return bad(format!("steps must be at least 2, got {}", self.steps));
        }
        if !(self.density > 0.0) || !self.density.is_finite() {
            return bad(format!("density must be positive, got {}", self.density));
        }
        if self.budget == 0 || self.enumeration_cap == 0 {
            return bad("budget and enumeration_cap must be positive".into());
        }
        if self.levels > 4 {
            return bad(format!(
                "at most 4 shrink levels are supported, got {}",
                self.levels
            ));
        }
        if !(self.commutator_slack > 0.0 && self.commutator_slack <= 1.0) {
            return bad(format!(
                "commutator_slack must lie in (0, 1], got {}",
                self.commutator_slack
            ));
        }
        if self.sample == 0 || !(1..=64).contains(&self.diagnose_length) {
            return bad("sample must be positive and diagnose_length in 1..=64".into());
        }
        if self.bench_lengths.is_empty() || self.bench_lengths.iter().any(|l| !(1..=64).contains(l))
        {
            return bad("bench_lengths must be a nonempty list of lengths in 1..=64".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        Ok(())
    }

    /// The configuration as `key = value` lines (round-trips through `apply_text`).
    pub fn to_text(&self) -> String {
        let opt = |o: Option<String>| o.unwrap_or_else(|| "none".into());
        let lines = [
            format!("seed = {}", self.seed),
            format!("gateset = {}", self.gateset),
            format!("length = {}", self.length),
            format!("eps_s = {}", self.eps_s),
            format!("method = {}", self.method),
            format!("steps = {}", self.steps),
            format!("density = {}", self.density),
            format!("budget = {}", self.budget),
            format!("enumeration_cap = {}", self.enumeration_cap),
            format!("levels = {}", self.levels),
            format!(
                "rotation_cap = {}",
                opt(self.rotation_cap.map(|v| v.to_string()))
            ),
            format!("commutator_slack = {}", self.commutator_slack),
            format!(
                "target_count = {}",
                opt(self.target_count.map(|v| v.to_string()))
            ),
            format!("sample = {}", self.sample),
            format!("diagnose_length = {}", self.diagnose_length),
            format!(
                "bench_lengths = {}",
                self.bench_lengths
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            format!("output = {}", self.output.display()),
            format!("threads = {}", opt(self.threads.map(|v| v.to_string()))),
        ];
        lines.join("\n") + "\n"
    }
}
