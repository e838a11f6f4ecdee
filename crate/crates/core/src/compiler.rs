//! Compiling a target unitary against a stack of nets.
//!
//! Stage 0 picks the sampling-net word `T0` closest to the target `U`. Each
//! later stage looks up the residual goal `V = P^-1 U`, where `P` is the
//! product accumulated so far, in the next correction net and appends the
//! chosen word on the right. Inverses here are numerical conjugate
//! transposes; no inverse gate is ever placed in the output word.
//!
//! Stack layout: the sampling net (level `-1`), the ball selected from it
//! (level `0`, the seed of the first shrink step), then the shrunk levels
//! `1..=n`, which are the correction nets.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gateset::{evaluate_word, word_to_integer, GateSet, Word};
use crate::geometry::{distance_d, distance_df, UnitaryMatrix};
use crate::nets::{
    load_net, nearest_point_with, save_net, EpsilonNet, Nearest, NetIndex, SAMPLING_LEVEL,
};

const STACK_MAGIC: &str = "diffuse-stack";
const STACK_VERSION: u32 = 1;
const MANIFEST: &str = "stack.txt";
const GATESET_FILE: &str = "gateset.txt";

/// The gate set with its sampling net and the ball and shrunk levels.
#[derive(Clone, Debug)]
pub struct NetStack {
    gate_set: GateSet,
    sampling: EpsilonNet,
    levels: Vec<EpsilonNet>,
    indices: Option<Vec<NetIndex>>,
}

impl NetStack {
    /// Checks fingerprints, level numbering and `eps_{i+1} = eps_i^2`
    /// (compared exactly on the stored radii).
    pub fn new(
        gate_set: GateSet,
        sampling: EpsilonNet,
        levels: Vec<EpsilonNet>,
    ) -> Result<NetStack> {
        if sampling.level() != SAMPLING_LEVEL {
            return Err(Error::Domain(format!(
                "sampling net has level {}, expected -1",
                sampling.level()
            )));
        }
        if sampling.is_empty() {
            return Err(Error::EmptyNet("sampling net has no points".into()));
        }
        sampling.check_gate_set(&gate_set)?;
        if levels.is_empty() {
            return Err(Error::Domain(
                "a stack needs at least the level-0 ball".into(),
            ));
        }
        for (i, net) in levels.iter().enumerate() {
            net.check_gate_set(&gate_set)?;
            if net.level() != i as i32 {
                return Err(Error::Domain(format!(
                    "net at position {i} has level {}",
                    net.level()
                )));
            }
            if net.is_empty() {
                return Err(Error::EmptyNet(format!("level-{i} net has no points")));
            }
        }
        for pair in levels.windows(2) {
            let (a, b) = (pair[0].radius(), pair[1].radius());
            if b != a * a || !(b < a) {
                return Err(Error::Domain(format!(
                    "level {} radius {b} does not equal the square of level {} radius {a}",
                    pair[1].level(),
                    pair[0].level()
                )));
            }
        }
        Ok(NetStack {
            gate_set,
            sampling,
            levels,
            indices: None,
        })
    }

    pub fn gate_set(&self) -> &GateSet {
        &self.gate_set
    }

    pub fn sampling(&self) -> &EpsilonNet {
        &self.sampling
    }

    /// Levels `0..=n`.
    pub fn levels(&self) -> &[EpsilonNet] {
        &self.levels
    }

    /// Levels `1..=n`, the nets used for corrections.
    pub fn correction_nets(&self) -> &[EpsilonNet] {
        &self.levels[1..]
    }

    /// `r + sum L_i` over all correction nets: the output length when every
    /// correction stage is used.
    pub fn compiled_length(&self) -> usize {
        self.sampling.word_len()
            + self
                .correction_nets()
                .iter()
                .map(EpsilonNet::word_len)
                .sum::<usize>()
    }

    /// Exponent `log(L_n / L_1) / log(log(1/eps_n) / log(1/eps_1))` between the
    /// first and last correction nets; `None` with fewer than two.
    pub fn length_exponent(&self) -> Option<f64> {
        let nets = self.correction_nets();
        let (first, last) = (nets.first()?, nets.last()?);
        if nets.len() < 2 {
            return None;
        }
        let growth = last.word_len() as f64 / first.word_len() as f64;
        let depth = last.radius().ln() / first.radius().ln();
        Some(growth.ln() / depth.ln())
    }

    /// Builds vantage-point indices for every net (qubit stacks only); later
    /// lookups use them and return the same points as the exhaustive scan.
    pub fn build_indices(&mut self) -> Result<()> {
        let mut out = vec![NetIndex::build(&self.sampling)?];
        for net in &self.levels[1..] {
            out.push(NetIndex::build(net)?);
        }
        self.indices = Some(out);
        Ok(())
    }

    fn lookup(&self, stage: usize, target: &UnitaryMatrix, exec: Execution) -> Result<Nearest> {
        let net = if stage == 0 {
            &self.sampling
        } else {
            &self.levels[stage]
        };
        match &self.indices {
            Some(ix) => ix[stage].nearest(net, target),
            None => nearest_point_with(net, target, exec),
        }
    }

    /// Writes `stack.txt`, `gateset.txt` and one binary file per net into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        self.gate_set.save(dir.join(GATESET_FILE))?;
        let mut manifest = format!("{STACK_MAGIC} {STACK_VERSION}\ngateset {GATESET_FILE}\n");
        let _ = writeln!(manifest, "fingerprint {}", self.gate_set.fingerprint());
        let name = "net_sampling.bin";
        save_net(&self.sampling, dir.join(name))?;
        let _ = writeln!(manifest, "sampling {name}");
        for net in &self.levels {
            let name = format!("net_level{}.bin", net.level());
            save_net(net, dir.join(&name))?;
            let _ = writeln!(manifest, "level {} {name}", net.level());
        }
        fs::write(dir.join(MANIFEST), manifest)?;
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<NetStack> {
        let dir = dir.as_ref();
        let manifest = fs::read_to_string(dir.join(MANIFEST))?;
        let mut lines = manifest.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty stack manifest".into()))?;
        let version = header
            .strip_prefix(STACK_MAGIC)
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| Error::Format("not a stack manifest".into()))?;
        if version != STACK_VERSION {
            return Err(Error::Version {
                found: version,
                expected: STACK_VERSION,
            });
        }
        let mut gate_set = None;
        let mut sampling = None;
        let mut levels = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["gateset", file] => gate_set = Some(GateSet::load(dir.join(file))?),
                ["fingerprint", _] => {}
                ["sampling", file] => {
                    let gs = gate_set
                        .as_ref()
                        .ok_or_else(|| Error::Format("gate set must precede nets".into()))?;
                    sampling = Some(load_net(dir.join(file), gs)?);
                }
                ["level", _, file] => {
                    let gs = gate_set
                        .as_ref()
                        .ok_or_else(|| Error::Format("gate set must precede nets".into()))?;
                    levels.push(load_net(dir.join(file), gs)?);
                }
                _ => {
                    return Err(Error::Format(format!(
                        "unrecognized manifest line `{line}`"
                    )))
                }
            }
        }
        let gate_set =
            gate_set.ok_or_else(|| Error::Format("manifest names no gate set".into()))?;
        let sampling =
            sampling.ok_or_else(|| Error::Format("manifest names no sampling net".into()))?;
        NetStack::new(gate_set, sampling, levels)
    }
}

/// One lookup of the compile procedure.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    /// Level of the net searched (`-1` for the sampling net).
    pub level: i32,
    pub word: Word,
    pub word_integer: BigUint,
    /// `D(U, P)` and `d_F(U, P)` after this stage.
    pub residual_d: f64,
    pub residual_df: f64,
    /// The residual must fall below this for the stage to conform.
    pub threshold: f64,
    pub conformant: bool,
    /// Whether the stage word was appended (see [`StageMode`]).
    pub used: bool,
}

#[derive(Clone, Debug)]
pub struct CompilationResult {
    pub word: Word,
    pub stages: Vec<Stage>,
    pub final_d: f64,
    pub final_df: f64,
}

impl CompilationResult {
    pub fn conformant(&self) -> bool {
        self.stages.iter().all(|s| s.conformant)
    }

    /// Plain-text report: target, stage table, final word.
    pub fn report(&self, target: &UnitaryMatrix, gs: &GateSet) -> String {
        let mut s = String::new();
        s.push_str("target\n");
        for i in 0..target.dim() {
            let row: Vec<String> = (0..target.dim())
                .map(|j| {
                    let z = target.get(i, j);
                    format!("{:+.12e}{:+.12e}i", z.re, z.im)
                })
                .collect();
            let _ = writeln!(s, "  {}", row.join("  "));
        }
        s.push_str("stage level used word_integer residual_D residual_dF threshold conformant\n");
        for (i, st) in self.stages.iter().enumerate() {
            let _ = writeln!(
                s,
                "{i} {} {} {} {:.6e} {:.6e} {:.6e} {}",
                st.level,
                st.used,
                st.word_integer,
                st.residual_d,
                st.residual_df,
                st.threshold,
                st.conformant
            );
        }
        let _ = writeln!(s, "length {}", self.word.len());
        let _ = writeln!(s, "final_D {:.6e}", self.final_d);
        let _ = writeln!(s, "final_dF {:.6e}", self.final_df);
        let _ = writeln!(s, "conformant {}", self.conformant());
        let _ = writeln!(s, "word {}", self.word.label(gs));
        s
    }
}

/// What a correction stage does when its word would not help.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StageMode {
    /// Every correction stage appends its word, so the output length is
    /// always `r + sum L_i`.
    #[default]
    AlwaysAppend,
    /// A stage is skipped when the residual is already below its threshold
    /// or when no point of its net reduces the residual.
    SkipSatisfied,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CompileOptions {
    pub mode: StageMode,
    pub exec: Execution,
}

/// Compiles `target` against `stack` with the default options.
///
/// A stage that misses its threshold is flagged rather than aborted.
pub fn compile(target: &UnitaryMatrix, stack: &NetStack) -> Result<CompilationResult> {
    compile_with(target, stack, &CompileOptions::default())
}

pub fn compile_with(
    target: &UnitaryMatrix,
    stack: &NetStack,
    opts: &CompileOptions,
) -> Result<CompilationResult> {
    let exec = opts.exec;
    let gs = &stack.gate_set;
    if target.dim() != gs.dim() {
        return Err(Error::DimensionMismatch {
            expected: gs.dim(),
            found: target.dim(),
        });
    }
    let m = gs.len();
    let corrections = stack.correction_nets();
    let stage0_threshold = corrections
        .first()
        .map_or(stack.levels[0].radius(), EpsilonNet::radius);

    let hit = stack.lookup(0, target, exec)?;
    let p0 = &stack.sampling.points()[hit.index];
    let mut product = p0.matrix.clone();
    let mut word = p0.word.clone();
    let mut stages = vec![Stage {
        level: SAMPLING_LEVEL,
        word: p0.word.clone(),
        word_integer: word_to_integer(&p0.word, m)?,
        residual_d: hit.distance,
        residual_df: distance_df(target, &product)?,
        threshold: stage0_threshold,
        conformant: hit.distance < stage0_threshold,
        used: true,
    }];

    for (i, net) in corrections.iter().enumerate() {
        let current = stages.last().expect("stage 0 exists").residual_d;
        let threshold = net.resolution();
        let goal = &product.adjoint() * target;
        let hit = stack.lookup(i + 1, &goal, exec)?;
        let p = &net.points()[hit.index];
        let candidate = &product * &p.matrix;
        let candidate_d = distance_d(target, &candidate)?;
        let used = match opts.mode {
            StageMode::AlwaysAppend => true,
            StageMode::SkipSatisfied => current >= threshold && candidate_d < current,
        };
        if used {
            product = candidate;
            word = word.concat(&p.word);
        }
        let residual_d = if used { candidate_d } else { current };
        let stage_word = if used { p.word.clone() } else { Word::empty() };
        stages.push(Stage {
            level: net.level(),
            word_integer: word_to_integer(&stage_word, m)?,
            word: stage_word,
            residual_d,
            residual_df: distance_df(target, &product)?,
            threshold,
            conformant: residual_d < threshold,
            used,
        });
    }

    let exact = evaluate_word(gs, &word)?;
    let (final_d, final_df) = (distance_d(target, &exact)?, distance_df(target, &exact)?);
    Ok(CompilationResult {
        word,
        stages,
        final_d,
        final_df,
    })
}

/// `D` and `d_F` between `target` and the product of `w`.
pub fn residual(target: &UnitaryMatrix, w: &Word, gs: &GateSet) -> Result<(f64, f64)> {
    let u = evaluate_word(gs, w)?;
    Ok((distance_d(target, &u)?, distance_df(target, &u)?))
}

/// `r (log(1/eps_n) / log(1/eps_0))^{log M / log 2}`.
pub fn predicted_length(r: f64, eps0: f64, eps_n: f64, m: usize) -> Result<f64> {
    if !(r >= 1.0) || m < 2 || !(eps_n > 0.0 && eps_n <= eps0 && eps0 < 1.0) {
        return Err(Error::Domain(format!(
            "predicted_length needs r >= 1, M >= 2 and 0 < eps_n <= eps_0 < 1 (got r = {r}, M = {m}, eps_0 = {eps0}, eps_n = {eps_n})"
        )));
    }
    let exponent = (m as f64).ln() / 2f64.ln();
    Ok(r * (eps_n.ln() / eps0.ln()).powf(exponent))
}
