// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Declarative run configuration.
//!
//! Values layer as defaults <- constraint preset <- user TOML file <-
//! command-line overrides. Times are microseconds, frequencies MHz, and
//! decoherence strengths lifetimes (T1, Tphi, 1/kappa), matching how device
//! parameters are usually quoted; conversion to internal SI units happens
//! in one place here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::codes::{build_code, logical_unitary, BosonicCode, CodeKind, GateKind, LogicalGate};
use crate::dynamics::{DecoherenceChannel, DecoherenceRates};
use crate::error::{Error, Result};
use crate::grape::{ConstraintPreset, OptimizationProblem, PenaltyWeights, StopCriteria};
use crate::hilbert::{make_space, SpaceDescriptor};

/// Pipeline commands exposed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Optimize,
    Evaluate,
    Susceptibility,
    Ensemble,
    Bound,
    Trajectory,
    Validate,
}

/// One validation finding, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Fully resolved configuration; every field concrete.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub code: String,
    pub cat_alpha: f64,
    pub gate: String,
    pub phase_angle: f64,
    pub t_gate_us: f64,
    pub preset: String,
    pub f_max_mhz: f64,
    pub dt_ns: f64,
    pub u_max_transmon_mhz: f64,
    pub u_max_cavity_mhz: f64,
    /// 0 means "derive from f_max * T".
    pub harmonics: usize,
    pub transmon_dim: usize,
    pub cavity_dim: usize,
    pub chi_over_2pi_mhz: f64,
    pub penalty_gate_error: f64,
    pub penalty_amplitude: f64,
    pub penalty_boundary: f64,
    pub target_gate_error: f64,
    pub max_iterations: usize,
    pub gradient_tol: f64,
    pub kappa_inv_us: f64,
    pub t1_us: f64,
    pub tphi_us: f64,
    pub n_th: f64,
    /// Include thermal excitation in susceptibility budgets.
    pub thermal_in_budget: bool,
    pub ensemble_count: usize,
    pub seed: Option<u64>,
    pub out_dir: String,
    pub params_path: Option<String>,
    pub initial_state: String,
    pub sample_stride: usize,
    pub wigner: bool,
    pub wigner_extent: f64,
    pub wigner_points: usize,
    pub bound_decay_per_us: f64,
    pub bound_s_relax_min: f64,
    pub bound_s_dephase_min: f64,
    pub bound_s_loss_min_per_photon: f64,
    pub bound_t_gate_range_us: [f64; 2],
    pub bound_t_gate_points: usize,
    pub bound_t_phi_range_us: [f64; 2],
    pub bound_t_phi_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let preset = ConstraintPreset::standard();
        RunConfig {
            code: "bin11".into(),
            cat_alpha: 3.0f64.sqrt(),
            gate: "hadamard".into(),
            phase_angle: std::f64::consts::FRAC_PI_2,
            t_gate_us: 1.0,
            preset: preset.name.into(),
            f_max_mhz: preset.f_max_mhz,
            dt_ns: preset.dt * 1e9,
            u_max_transmon_mhz: preset.u_max_mhz[0],
            u_max_cavity_mhz: preset.u_max_mhz[2],
            harmonics: 0,
            transmon_dim: 2,
            cavity_dim: 30,
            chi_over_2pi_mhz: -2.0,
            penalty_gate_error: 1.0,
            penalty_amplitude: 1e-4,
            penalty_boundary: 1e-3,
            target_gate_error: 1e-4,
            max_iterations: 2000,
            gradient_tol: 1e-9,
            kappa_inv_us: 1000.0,
            t1_us: 100.0,
            tphi_us: 25.0,
            n_th: 0.01,
            thermal_in_budget: false,
            ensemble_count: 3,
            seed: None,
            out_dir: "out".into(),
            params_path: None,
            initial_state: "zero".into(),
            sample_stride: 10,
            wigner: false,
            wigner_extent: 3.5,
            wigner_points: 41,
            bound_decay_per_us: 11.05,
            bound_s_relax_min: 0.25,
            bound_s_dephase_min: 0.31,
            bound_s_loss_min_per_photon: 0.94,
            bound_t_gate_range_us: [0.1, 2.0],
            bound_t_gate_points: 96,
            bound_t_phi_range_us: [5.0, 100.0],
            bound_t_phi_points: 96,
        }
    }
}

/// Command-line overrides applied after the config file.
#[derive(Debug, Clone, Default)]
pub struct CliOverrides {
    pub seed: Option<u64>,
    pub out_dir: Option<String>,
    pub preset: Option<String>,
    pub params_path: Option<String>,
}

impl RunConfig {
    /// Layers a parsed config file and CLI overrides over the defaults.
    pub fn resolve(file: Option<&ConfigFile>, cli: &CliOverrides) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();

        // preset first (file choice, then CLI choice), so explicit
        // constraint fields can override it afterwards
        let preset_name = cli
            .preset
            .clone()
            .or_else(|| file.and_then(|f| f.preset.clone()))
            .unwrap_or_else(|| cfg.preset.clone());
        let preset = ConstraintPreset::by_name(&preset_name)?;
        cfg.preset = preset.name.into();
        cfg.f_max_mhz = preset.f_max_mhz;
        cfg.dt_ns = preset.dt * 1e9;
        cfg.u_max_transmon_mhz = preset.u_max_mhz[0];
        cfg.u_max_cavity_mhz = preset.u_max_mhz[2];

        if let Some(f) = file {
            f.apply(&mut cfg);
        }
        if let Some(seed) = cli.seed {
            cfg.seed = Some(seed);
        }
        if let Some(out) = &cli.out_dir {
            cfg.out_dir = out.clone();
        }
        if let Some(p) = &cli.params_path {
            cfg.params_path = Some(p.clone());
        }
        Ok(cfg)
    }

    /// Checks the configuration for a command; an empty list means the run
    /// can start.
    pub fn validate(&self, command: Command) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut need_positive = |field: &str, v: f64| {
            if !(v > 0.0) {
                out.push(Diagnostic {
                    field: field.into(),
                    message: format!("must be positive, got {v}"),
                });
            }
        };
        need_positive("t_gate_us", self.t_gate_us);
        need_positive("f_max_mhz", self.f_max_mhz);
        need_positive("dt_ns", self.dt_ns);
        need_positive("u_max_transmon_mhz", self.u_max_transmon_mhz);
        need_positive("u_max_cavity_mhz", self.u_max_cavity_mhz);
        need_positive("decoherence.kappa_inv_us", self.kappa_inv_us);
        need_positive("decoherence.t1_us", self.t1_us);
        need_positive("decoherence.tphi_us", self.tphi_us);
        need_positive("bound.decay_per_us", self.bound_decay_per_us);

        if self.n_th < 0.0 {
            out.push(Diagnostic {
                field: "decoherence.n_th".into(),
                message: format!("must be nonnegative, got {}", self.n_th),
            });
        }
        if self.transmon_dim < 2 {
            out.push(Diagnostic {
                field: "space.transmon_dim".into(),
                message: "must be at least 2".into(),
            });
        }
        if self.cavity_dim < 2 {
            out.push(Diagnostic {
                field: "space.cavity_dim".into(),
                message: "must be at least 2".into(),
            });
        }
        if self.penalty_gate_error < 0.0 || self.penalty_amplitude < 0.0 || self.penalty_boundary < 0.0
        {
            out.push(Diagnostic {
                field: "penalties".into(),
                message: "penalty weights must be nonnegative".into(),
            });
        }

        match self.code.as_str() {
            "bin11" | "bin22" | "cat4" => {}
            other => out.push(Diagnostic {
                field: "code".into(),
                message: format!("unknown code '{other}' (bin11, bin22, cat4)"),
            }),
        }
        match self.gate.as_str() {
            "identity" | "x" | "z" | "hadamard" | "phase" | "recovery" => {}
            other => out.push(Diagnostic {
                field: "gate".into(),
                message: format!(
                    "unknown gate '{other}' (identity, x, z, hadamard, phase, recovery)"
                ),
            }),
        }
        if matches!(command, Command::Optimize | Command::Ensemble) && self.seed.is_none() {
            out.push(Diagnostic {
                field: "seed".into(),
                message: "a seed is required for optimize/ensemble runs".into(),
            });
        }
        if matches!(
            command,
            Command::Evaluate | Command::Susceptibility | Command::Trajectory
        ) && self.params_path.is_none()
        {
            out.push(Diagnostic {
                field: "params_path".into(),
                message: "these commands consume a parameter file from a previous optimize run"
                    .into(),
            });
        }
        if command == Command::Ensemble && self.ensemble_count == 0 {
            out.push(Diagnostic {
                field: "ensemble.count".into(),
                message: "must be at least 1".into(),
            });
        }
        if !matches!(
            self.initial_state.as_str(),
            "zero" | "one" | "plus" | "minus" | "plus_i" | "minus_i"
        ) {
            out.push(Diagnostic {
                field: "trajectory.initial_state".into(),
                message: format!(
                    "unknown state '{}' (zero, one, plus, minus, plus_i, minus_i)",
                    self.initial_state
                ),
            });
        }
        // code fits the truncation the same way build_code would check
        if out.is_empty() {
            if let Err(e) = self.build_code() {
                out.push(Diagnostic {
                    field: "code".into(),
                    message: e.to_string(),
                });
            }
        }
        out
    }

    pub fn chi(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.chi_over_2pi_mhz * 1e6
    }

    pub fn t_gate(&self) -> f64 {
        self.t_gate_us * 1e-6
    }

    pub fn build_space(&self) -> Result<SpaceDescriptor> {
        make_space(self.transmon_dim, self.cavity_dim)
    }

    pub fn code_kind(&self) -> Result<CodeKind> {
        match self.code.as_str() {
            "bin11" => Ok(CodeKind::Bin11),
            "bin22" => Ok(CodeKind::Bin22),
            "cat4" => Ok(CodeKind::Cat4 {
                alpha: Complex64::new(self.cat_alpha, 0.0),
            }),
            other => Err(Error::Config(format!("unknown code '{other}'"))),
        }
    }

    pub fn build_code(&self) -> Result<BosonicCode> {
        build_code(self.code_kind()?, self.cavity_dim)
    }

    pub fn gate_kind(&self) -> Result<GateKind> {
        match self.gate.as_str() {
            "identity" => Ok(GateKind::Identity),
            "x" => Ok(GateKind::X),
            "z" => Ok(GateKind::Z),
            "hadamard" => Ok(GateKind::Hadamard),
            "phase" => Ok(GateKind::PhaseGate {
                angle: self.phase_angle,
            }),
            "recovery" => Ok(GateKind::Recovery),
            other => Err(Error::Config(format!("unknown gate '{other}'"))),
        }
    }

    pub fn build_target(
        &self,
        code: &BosonicCode,
        space: &SpaceDescriptor,
    ) -> Result<LogicalGate> {
        Ok(logical_unitary(code, space, self.gate_kind()?))
    }

    pub fn constraints(&self) -> ConstraintPreset {
        ConstraintPreset {
            name: if self.preset == "weak" { "weak" } else { "standard" },
            f_max_mhz: self.f_max_mhz,
            dt: self.dt_ns * 1e-9,
            u_max_mhz: [
                self.u_max_transmon_mhz,
                self.u_max_transmon_mhz,
                self.u_max_cavity_mhz,
                self.u_max_cavity_mhz,
            ],
        }
    }

    pub fn build_problem(&self) -> Result<OptimizationProblem> {
        let space = self.build_space()?;
        let code = self.build_code()?;
        let target = self.build_target(&code, &space)?;
        let mut problem = OptimizationProblem::new(
            space,
            code,
            target,
            self.chi(),
            self.t_gate(),
            self.constraints(),
        )?;
        if self.harmonics > 0 {
            problem.harmonics = self.harmonics;
        }
        problem.weights = PenaltyWeights {
            gate_error: self.penalty_gate_error,
            amplitude: self.penalty_amplitude,
            boundary: self.penalty_boundary,
        };
        problem.stop = StopCriteria {
            max_iterations: self.max_iterations,
            gradient_tol: self.gradient_tol,
            target_gate_error: self.target_gate_error,
        };
        Ok(problem)
    }

    pub fn decoherence_rates(&self) -> DecoherenceRates {
        DecoherenceRates {
            kappa_inv: self.kappa_inv_us * 1e-6,
            t1: self.t1_us * 1e-6,
            t_phi: self.tphi_us * 1e-6,
            n_th: self.n_th,
        }
    }

    /// All four Lindblad channels at the configured rates.
    pub fn build_channels(&self, space: &SpaceDescriptor) -> Vec<DecoherenceChannel> {
        self.decoherence_rates().channels(space)
    }

    /// Channels included in susceptibility budgets (thermal excitation is
    /// excluded unless requested).
    pub fn budget_channels(&self, space: &SpaceDescriptor) -> Vec<DecoherenceChannel> {
        self.build_channels(space)
            .into_iter()
            .filter(|ch| {
                self.thermal_in_budget
                    || ch.kind != crate::dynamics::ChannelKind::TransmonThermal
            })
            .collect()
    }

    pub fn bound_params(&self, mean_photon: f64) -> crate::error_model::ErrorBoundParams {
        crate::error_model::ErrorBoundParams {
            decay_per_us: self.bound_decay_per_us,
            s_relax_min: self.bound_s_relax_min,
            s_dephase_min: self.bound_s_dephase_min,
            s_loss_min_per_photon: self.bound_s_loss_min_per_photon,
            mean_photon,
            t1: self.t1_us * 1e-6,
            t_phi: self.tphi_us * 1e-6,
            kappa: 1.0 / (self.kappa_inv_us * 1e-6),
        }
    }
}

/// TOML-facing schema; every field optional so files stay minimal.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub code: Option<String>,
    pub cat_alpha: Option<f64>,
    pub gate: Option<String>,
    pub phase_angle: Option<f64>,
    pub t_gate_us: Option<f64>,
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub out_dir: Option<String>,
    pub params_path: Option<String>,
    pub chi_over_2pi_mhz: Option<f64>,
    pub constraints: Option<ConstraintsSection>,
    pub space: Option<SpaceSection>,
    pub penalties: Option<PenaltiesSection>,
    pub decoherence: Option<DecoherenceSection>,
    pub ensemble: Option<EnsembleSection>,
    pub trajectory: Option<TrajectorySection>,
    pub bound: Option<BoundSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintsSection {
    pub f_max_mhz: Option<f64>,
    pub dt_ns: Option<f64>,
    pub u_max_transmon_mhz: Option<f64>,
    pub u_max_cavity_mhz: Option<f64>,
    pub harmonics: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSection {
    pub transmon_dim: Option<usize>,
    pub cavity_dim: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltiesSection {
    pub gate_error: Option<f64>,
    pub amplitude: Option<f64>,
    pub boundary: Option<f64>,
    pub target_gate_error: Option<f64>,
    pub max_iterations: Option<usize>,
    pub gradient_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoherenceSection {
    pub kappa_inv_us: Option<f64>,
    pub t1_us: Option<f64>,
    pub tphi_us: Option<f64>,
    pub n_th: Option<f64>,
    pub thermal_in_budget: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySection {
    pub initial_state: Option<String>,
    pub sample_stride: Option<usize>,
    pub wigner: Option<bool>,
    pub wigner_extent: Option<f64>,
    pub wigner_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSection {
    pub decay_per_us: Option<f64>,
    pub s_relax_min: Option<f64>,
    pub s_dephase_min: Option<f64>,
    pub s_loss_min_per_photon: Option<f64>,
    pub t_gate_range_us: Option<[f64; 2]>,
    pub t_gate_points: Option<usize>,
    pub t_phi_range_us: Option<[f64; 2]>,
    pub t_phi_points: Option<usize>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($src:expr, $dst:expr) => {
                if let Some(v) = &$src {
                    $dst = v.clone();
                }
            };
        }
        set!(self.code, cfg.code);
        set!(self.cat_alpha, cfg.cat_alpha);
        set!(self.gate, cfg.gate);
        set!(self.phase_angle, cfg.phase_angle);
        set!(self.t_gate_us, cfg.t_gate_us);
        set!(self.chi_over_2pi_mhz, cfg.chi_over_2pi_mhz);
        set!(self.out_dir, cfg.out_dir);
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.params_path.is_some() {
            cfg.params_path = self.params_path.clone();
        }
        if let Some(c) = &self.constraints {
            set!(c.f_max_mhz, cfg.f_max_mhz);
            set!(c.dt_ns, cfg.dt_ns);
            set!(c.u_max_transmon_mhz, cfg.u_max_transmon_mhz);
            set!(c.u_max_cavity_mhz, cfg.u_max_cavity_mhz);
            set!(c.harmonics, cfg.harmonics);
        }
        if let Some(s) = &self.space {
            set!(s.transmon_dim, cfg.transmon_dim);
            set!(s.cavity_dim, cfg.cavity_dim);
        }
        if let Some(p) = &self.penalties {
            set!(p.gate_error, cfg.penalty_gate_error);
            set!(p.amplitude, cfg.penalty_amplitude);
            set!(p.boundary, cfg.penalty_boundary);
            set!(p.target_gate_error, cfg.target_gate_error);
            set!(p.max_iterations, cfg.max_iterations);
            set!(p.gradient_tol, cfg.gradient_tol);
        }
        if let Some(d) = &self.decoherence {
            set!(d.kappa_inv_us, cfg.kappa_inv_us);
            set!(d.t1_us, cfg.t1_us);
            set!(d.tphi_us, cfg.tphi_us);
            set!(d.n_th, cfg.n_th);
            set!(d.thermal_in_budget, cfg.thermal_in_budget);
        }
        if let Some(e) = &self.ensemble {
            set!(e.count, cfg.ensemble_count);
        }
        if let Some(t) = &self.trajectory {
            set!(t.initial_state, cfg.initial_state);
            set!(t.sample_stride, cfg.sample_stride);
            set!(t.wigner, cfg.wigner);
            set!(t.wigner_extent, cfg.wigner_extent);
            set!(t.wigner_points, cfg.wigner_points);
        }
        if let Some(b) = &self.bound {
            set!(b.decay_per_us, cfg.bound_decay_per_us);
            set!(b.s_relax_min, cfg.bound_s_relax_min);
            set!(b.s_dephase_min, cfg.bound_s_dephase_min);
            set!(b.s_loss_min_per_photon, cfg.bound_s_loss_min_per_photon);
            set!(b.t_gate_range_us, cfg.bound_t_gate_range_us);
            set!(b.t_gate_points, cfg.bound_t_gate_points);
            set!(b.t_phi_range_us, cfg.bound_t_phi_range_us);
            set!(b.t_phi_points, cfg.bound_t_phi_points);
        }
    }
}
