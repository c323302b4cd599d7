// SPDX-License-Identifier: Apache-2.0

//! Run configuration: one JSON document, optionally patched by `--set` flags.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::path::{Path, PathBuf};

use fockgate::{Model, OscillatorState, RamanParams, Tolerances, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Gate,
    Sweep,
    Synthesize,
    Validate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Physics {
    pub g: f64,
    pub omega_l: f64,
    pub theta: f64,
    pub delta: f64,
    pub include_shift: bool,
}

impl Default for Physics {
    fn default() -> Self {
        Physics {
            g: 1.0,
            omega_l: 0.1,
            theta: 0.0,
            delta: 20.0,
            include_shift: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Space {
    pub fock_cutoff: usize,
    /// Must match every selected model when set (2 for ideal/effective, 3 for full).
    pub atom_dim: Option<usize>,
}

impl Default for Space {
    fn default() -> Self {
        Space {
            fock_cutoff: 12,
            atom_dim: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateTask {
    pub m: usize,
    pub k: usize,
    /// Rotation angle `φ`; ignored when `tau` is set.
    pub phi: f64,
    /// Pulse duration overriding `phi`.
    pub tau: Option<f64>,
    /// Oscillator input `α|m−k⟩ + β|m⟩`.
    pub alpha: C64,
    pub beta: C64,
}

impl Default for GateTask {
    fn default() -> Self {
        GateTask {
            m: 1,
            k: 1,
            phi: FRAC_PI_4,
            tau: None,
            alpha: C64::new(FRAC_1_SQRT_2, 0.0),
            beta: C64::new(FRAC_1_SQRT_2, 0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepTask {
    /// Grid of `r = |Ω_L|/g`.
    pub ratios: Vec<f64>,
}

impl Default for SweepTask {
    fn default() -> Self {
        SweepTask {
            ratios: vec![0.02, 0.05, 0.1, 0.2, 0.5],
        }
    }
}

/// Oscillator target for synthesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSpec {
    /// Explicit amplitudes `c_0, c_1, …` (normalized on use).
    Amplitudes { values: Vec<C64> },
    Fock { n: usize },
    /// Equal-weight superposition of the listed levels.
    Equal { levels: Vec<usize> },
    /// `α|0⟩ + β|n⟩`.
    Superposition { alpha: C64, beta: C64, n: usize },
}

impl Default for TargetSpec {
    fn default() -> Self {
        TargetSpec::Equal { levels: vec![0, 3] }
    }
}

impl TargetSpec {
    /// Highest level the target refers to.
    pub fn top(&self) -> usize {
        match self {
            TargetSpec::Amplitudes { values } => values.len().saturating_sub(1),
            TargetSpec::Fock { n } | TargetSpec::Superposition { n, .. } => *n,
            TargetSpec::Equal { levels } => levels.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn build(&self, cutoff: usize) -> Result<OscillatorState, CliError> {
        let mut amps = vec![C64::new(0.0, 0.0); cutoff.max(self.top() + 1)];
        match self {
            TargetSpec::Amplitudes { values } => amps[..values.len()].copy_from_slice(values),
            TargetSpec::Fock { n } => amps[*n] = C64::new(1.0, 0.0),
            TargetSpec::Equal { levels } => {
                if levels.is_empty() {
                    return Err(CliError::config("synthesize.target.levels", "no levels given"));
                }
                for &n in levels {
                    amps[n] = C64::new(1.0, 0.0);
                }
            }
            TargetSpec::Superposition { alpha, beta, n } => {
                amps[0] += alpha;
                amps[*n] += beta;
            }
        }
        OscillatorState::new(amps)
            .and_then(|s| s.normalize())
            .map_err(|e| CliError::config("synthesize.target", e.to_string()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthesizeTask {
    pub target: TargetSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateTask {
    pub samples: usize,
    /// Negative control: the closed-form check must fail.
    pub corrupt_theta0: bool,
}

impl Default for ValidateTask {
    fn default() -> Self {
        ValidateTask {
            samples: 50,
            corrupt_theta0: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub dir: PathBuf,
}

impl Default for Output {
    fn default() -> Self {
        Output {
            dir: PathBuf::from("fockgate-out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub task: Task,
    pub physics: Physics,
    pub space: Space,
    pub models: Vec<Model>,
    pub gate: GateTask,
    pub sweep: SweepTask,
    pub synthesize: SynthesizeTask,
    pub validate: ValidateTask,
    pub output: Output,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            task: Task::Gate,
            physics: Physics::default(),
            space: Space::default(),
            models: Model::ALL.to_vec(),
            gate: GateTask::default(),
            sweep: SweepTask::default(),
            synthesize: SynthesizeTask::default(),
            validate: ValidateTask::default(),
            output: Output::default(),
            tolerances: Tolerances::default(),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::config(e.path().to_string(), e.inner().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Applies `key.sub=value`. The value is read as JSON, falling back to a
    /// bare string.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::config(assignment, "expected key=value"))?;
        let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        let mut doc = serde_json::to_value(&*self).expect("config serializes");
        let mut node = &mut doc;
        for part in key.split('.') {
            node = match node {
                // unknown keys are rejected when the document is read back
                Value::Object(map) => map.entry(part).or_insert(Value::Null),
                Value::Array(items) => part
                    .parse::<usize>()
                    .ok()
                    .and_then(|i| items.get_mut(i))
                    .ok_or_else(|| CliError::config(key, "index out of range"))?,
                _ => return Err(CliError::config(key, "not a nested field")),
            };
        }
        *node = value;
        *self = serde_path_to_error::deserialize(doc)
            .map_err(|e| CliError::config(key, format!("{} ({})", e.inner(), e.path())))?;
        Ok(())
    }

    pub fn params(&self) -> Result<RamanParams, CliError> {
        let ph = &self.physics;
        let mut p = RamanParams::new(ph.g, ph.omega_l, ph.theta, ph.delta, self.gate.m)
            .map_err(|e| CliError::config("physics", e.to_string()))?;
        p.include_shift = ph.include_shift;
        Ok(p)
    }

    /// Checks everything the selected task depends on.
    pub fn check(&self) -> Result<(), CliError> {
        self.params()?;
        if self.models.is_empty() {
            return Err(CliError::config("models", "no model selected"));
        }
        if let Some(dim) = self.space.atom_dim {
            if let Some(m) = self.models.iter().find(|m| m.atom_dim() != dim) {
                return Err(CliError::config(
                    "space.atom_dim",
                    format!("{dim} does not match the {m} model ({})", m.atom_dim()),
                ));
            }
        }
        let cutoff = self.space.fock_cutoff;
        let needs = |top: usize, field: &str| {
            if cutoff < top + 2 {
                Err(CliError::config(
                    "space.fock_cutoff",
                    format!("{cutoff} leaves no guard levels above {field} = {top}; need ≥ {}", top + 2),
                ))
            } else {
                Ok(())
            }
        };
        match self.task {
            Task::Gate | Task::Sweep => {
                let g = &self.gate;
                if g.k == 0 || g.k > g.m {
                    return Err(CliError::config("gate.k", format!("need 1 ≤ k ≤ m, got k = {}, m = {}", g.k, g.m)));
                }
                if g.k > 1 && self.models.iter().any(|&m| m != Model::IdealSelective) {
                    return Err(CliError::config("gate.k", "k > 1 is only available in the ideal model"));
                }
                if !g.phi.is_finite() || g.phi < 0.0 {
                    return Err(CliError::config("gate.phi", "must be finite and ≥ 0"));
                }
                if let Some(tau) = g.tau {
                    if !tau.is_finite() || tau < 0.0 {
                        return Err(CliError::config("gate.tau", "must be finite and ≥ 0"));
                    }
                }
                let norm = g.alpha.norm_sqr() + g.beta.norm_sqr();
                if (norm - 1.0).abs() > self.tolerances.normalization {
                    return Err(CliError::config("gate.alpha", format!("|α|² + |β|² = {norm}, expected 1")));
                }
                needs(g.m, "gate.m")?;
                if self.task == Task::Sweep {
                    if self.sweep.ratios.is_empty() {
                        return Err(CliError::config("sweep.ratios", "empty grid"));
                    }
                    if let Some(r) = self.sweep.ratios.iter().find(|r| !r.is_finite() || **r <= 0.0) {
                        return Err(CliError::config("sweep.ratios", format!("ratio {r} must be positive")));
                    }
                }
            }
            Task::Synthesize => needs(self.synthesize.target.top(), "the target's highest level")?,
            Task::Validate => needs(self.gate.m, "gate.m")?,
        }
        Ok(())
    }
}
