// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Command pipelines behind the CLI: each command turns a resolved
//! configuration into data files plus a manifest that records the config
//! echo, tool version, wall clock, and a SHA-256 per emitted file.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Command, RunConfig};
use crate::diagnostics::wigner_grid;
use crate::dynamics::{
    gate_fidelity_closed, gate_fidelity_open, propagate_closed, DecoherenceRates, OpenOptions,
    TrajectoryStates,
};
use crate::error::{Error, Result};
use crate::error_model::{
    bound_heatmap, ensemble_stats, minimize_bound, SusceptibilityAnalysis,
};
use crate::grape::{optimize_seeded, OptimizedGate, RunRecord};
use crate::pulse::{params_from_json, params_to_json, synthesize, PulseParams};
use crate::states::StateVector;

/// Files produced by one command invocation.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: Command,
    wall_clock_s: f64,
    problem_hash: String,
    config: &'a RunConfig,
    files: Vec<FileDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runs: Option<Vec<RunRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iteration_trace: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the physics-defining part of the configuration.
fn problem_hash(config: &RunConfig) -> String {
    #[derive(Serialize)]
    struct ProblemKey<'a> {
        code: &'a str,
        cat_alpha: f64,
        gate: &'a str,
        phase_angle: f64,
        t_gate_us: f64,
        f_max_mhz: f64,
        dt_ns: f64,
        u_max_transmon_mhz: f64,
        u_max_cavity_mhz: f64,
        harmonics: usize,
        transmon_dim: usize,
        cavity_dim: usize,
        chi_over_2pi_mhz: f64,
        penalties: [f64; 3],
    }
    let key = ProblemKey {
        code: &config.code,
        cat_alpha: config.cat_alpha,
        gate: &config.gate,
        phase_angle: config.phase_angle,
        t_gate_us: config.t_gate_us,
        f_max_mhz: config.f_max_mhz,
        dt_ns: config.dt_ns,
        u_max_transmon_mhz: config.u_max_transmon_mhz,
        u_max_cavity_mhz: config.u_max_cavity_mhz,
        harmonics: config.harmonics,
        transmon_dim: config.transmon_dim,
        cavity_dim: config.cavity_dim,
        chi_over_2pi_mhz: config.chi_over_2pi_mhz,
        penalties: [
            config.penalty_gate_error,
            config.penalty_amplitude,
            config.penalty_boundary,
        ],
    };
    sha256_hex(serde_json::to_string(&key).expect("key serializes").as_bytes())
}

struct OutputWriter {
    dir: PathBuf,
    files: Vec<(PathBuf, String)>,
}

impl OutputWriter {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(OutputWriter {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)?;
        self.files.push((path.clone(), sha256_hex(contents.as_bytes())));
        Ok(path)
    }

    fn finish(
        mut self,
        command: Command,
        config: &RunConfig,
        started: Instant,
        runs: Option<Vec<RunRecord>>,
        traces: Option<Vec<Vec<f64>>>,
    ) -> Result<RunOutput> {
        let manifest = Manifest {
            tool: "bgate",
            version: env!("CARGO_PKG_VERSION"),
            command,
            wall_clock_s: started.elapsed().as_secs_f64(),
            problem_hash: problem_hash(config),
            config,
            files: self
                .files
                .iter()
                .map(|(p, h)| FileDigest {
                    path: p
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    sha256: h.clone(),
                })
                .collect(),
            runs,
            iteration_trace: traces,
        };
        let manifest_text = serde_json::to_string_pretty(&manifest)?;
        let manifest_path = self.dir.join("manifest.json");
        std::fs::write(&manifest_path, &manifest_text)?;
        self.files.push((manifest_path.clone(), String::new()));
        Ok(RunOutput {
            out_dir: self.dir,
            files: self.files.into_iter().map(|(p, _)| p).collect(),
            manifest: manifest_path,
        })
    }
}

/// Runs one command. Numerical failures carry the failing stage in the
/// error; validation problems should be caught with `RunConfig::validate`
/// before calling in here.
pub fn run(command: Command, config: &RunConfig) -> Result<RunOutput> {
    let diagnostics = config.validate(command);
    if !diagnostics.is_empty() {
        let summary = diagnostics
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::Config(summary));
    }
    match command {
        Command::Optimize => run_optimize(config),
        Command::Evaluate => run_evaluate(config),
        Command::Susceptibility => run_susceptibility(config),
        Command::Ensemble => run_ensemble(config),
        Command::Bound => run_bound(config),
        Command::Trajectory => run_trajectory(config),
        Command::Validate => Err(Error::Config(
            "validate has no pipeline; use RunConfig::validate".into(),
        )),
    }
}

fn run_optimize(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let problem = config.build_problem()?;
    let seed = config.seed.expect("validated");
    let gate = optimize_seeded(&problem, seed)?;

    let mut w = OutputWriter::new(Path::new(&config.out_dir))?;
    w.write("params.json", &params_to_json(&gate.params)?)?;
    w.write("waveform.csv", &gate.waveform.to_csv())?;
    let trace = gate.trace.clone();
    let record = gate.record();
    w.finish(
        Command::Optimize,
        config,
        started,
        Some(vec![record]),
        Some(vec![trace]),
    )
}

#[derive(Serialize)]
struct FidelityReport {
    f0: f64,
    r0: f64,
    f_lindblad: f64,
    r_lindblad: f64,
    rates: DecoherenceRates,
}

fn load_params(config: &RunConfig) -> Result<PulseParams> {
    let path = config.params_path.as_ref().expect("validated");
    let text = std::fs::read_to_string(path)?;
    params_from_json(&text)
}

fn run_evaluate(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let space = config.build_space()?;
    let code = config.build_code()?;
    let target = config.build_target(&code, &space)?;
    let params = load_params(config)?;
    let waveform = synthesize(&params);
    let chi = config.chi();

    let (f0, r0) = gate_fidelity_closed(&waveform, &target, &code, &space, chi)?;
    let channels = config.build_channels(&space);
    let (f_l, r_l) = gate_fidelity_open(
        &waveform,
        &target,
        &code,
        &space,
        chi,
        &channels,
        &OpenOptions::default(),
    )?;

    let report = FidelityReport {
        f0,
        r0,
        f_lindblad: f_l,
        r_lindblad: r_l,
        rates: config.decoherence_rates(),
    };
    let mut w = OutputWriter::new(Path::new(&config.out_dir))?;
    w.write("fidelity.json", &serde_json::to_string_pretty(&report)?)?;
    w.finish(Command::Evaluate, config, started, None, None)
}

fn run_susceptibility(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let space = config.build_space()?;
    let code = config.build_code()?;
    let target = config.build_target(&code, &space)?;
    let params = load_params(config)?;
    let waveform = synthesize(&params);
    let chi = config.chi();

    let (_, r0) = gate_fidelity_closed(&waveform, &target, &code, &space, chi)?;
    let all_channels = config.build_channels(&space);
    let (_, r_l) = gate_fidelity_open(
        &waveform,
        &target,
        &code,
        &space,
        chi,
        &all_channels,
        &OpenOptions::default(),
    )?;
    let budget = config.budget_channels(&space);
    let analysis = SusceptibilityAnalysis::new(&waveform, &target, &code, &space, chi)?;
    let report = analysis.report(&budget, Some(r0), Some(r_l));

    let mut w = OutputWriter::new(Path::new(&config.out_dir))?;
    w.write("susceptibility.json", &serde_json::to_string_pretty(&report)?)?;
    for ch in &budget {
        let tc = analysis.timecourse(ch);
        w.write(&format!("timecourse_{}.csv", ch.kind.label()), &tc.to_csv())?;
    }
    w.finish(Command::Susceptibility, config, started, None, None)
}

#[derive(Serialize)]
struct EnsembleMember {
    seed: u64,
    gate_error: f64,
    converged: bool,
    r0: f64,
    r_lindblad: f64,
    decoherence_error: f64,
    residual: f64,
    s_loss: f64,
    s_relax: f64,
    s_dephase: f64,
}

fn run_ensemble(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let problem = config.build_problem()?;
    let base_seed = config.seed.expect("validated");
    let count = config.ensemble_count;

    let gates = crate::grape::random_restarts(&problem, count, base_seed);
    let mut w = OutputWriter::new(Path::new(&config.out_dir))?;

    let space = &problem.space;
    let code = &problem.code;
    let target = &problem.target;
    let chi = problem.chi;
    let all_channels = config.build_channels(space);
    let budget = config.budget_channels(space);

    let mut members = Vec::new();
    let mut records = Vec::new();
    let mut traces = Vec::new();
    for (i, outcome) in gates.iter().enumerate() {
        let gate: &OptimizedGate = match outcome {
            Ok(g) => g,
            Err(e) => {
                // record the failure, keep the batch going
                members.push(EnsembleMember {
                    seed: base_seed.wrapping_add(i as u64),
                    gate_error: f64::NAN,
                    converged: false,
                    r0: f64::NAN,
                    r_lindblad: f64::NAN,
                    decoherence_error: f64::NAN,
                    residual: f64::NAN,
                    s_loss: f64::NAN,
                    s_relax: f64::NAN,
                    s_dephase: f64::NAN,
                });
                eprintln!("ensemble member {i} failed: {e}");
                continue;
            }
        };
        let (_, r0) = gate_fidelity_closed(&gate.waveform, target, code, space, chi)?;
        let (_, r_l) = gate_fidelity_open(
            &gate.waveform,
            target,
            code,
            space,
            chi,
            &all_channels,
            &OpenOptions::default(),
        )?;
        let analysis = SusceptibilityAnalysis::new(&gate.waveform, target, code, space, chi)?;
        let report = analysis.report(&budget, Some(r0), Some(r_l));
        let by_kind = |kind: crate::dynamics::ChannelKind| {
            report
                .channels
                .iter()
                .find(|c| c.kind == kind)
                .map(|c| c.susceptibility)
                .unwrap_or(f64::NAN)
        };
        members.push(EnsembleMember {
            seed: gate.seed,
            gate_error: gate.cost_terms.gate_error,
            converged: gate.converged,
            r0,
            r_lindblad: r_l,
            decoherence_error: report.decoherence_error,
            residual: report.residual.unwrap_or(f64::NAN),
            s_loss: by_kind(crate::dynamics::ChannelKind::CavityLoss),
            s_relax: by_kind(crate::dynamics::ChannelKind::TransmonRelaxation),
            s_dephase: by_kind(crate::dynamics::ChannelKind::TransmonDephasing),
        });
        records.push(gate.record());
        traces.push(gate.trace.clone());
        w.write(&format!("params_{i:02}.json"), &params_to_json(&gate.params)?)?;
    }

    // per-gate table
    let mut csv = String::from(
        "seed,gate_error,converged,r0,r_lindblad,decoherence_error,residual,s_loss,s_relax,s_dephase\n",
    );
    for m in &members {
        csv.push_str(&format!(
            "{},{:.9e},{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9},{:.9},{:.9}\n",
            m.seed,
            m.gate_error,
            m.converged,
            m.r0,
            m.r_lindblad,
            m.decoherence_error,
            m.residual,
            m.s_loss,
            m.s_relax,
            m.s_dephase,
        ));
    }
    w.write("ensemble.csv", &csv)?;

    // susceptibility summary across the ensemble, one row per channel
    let ok: Vec<&EnsembleMember> = members.iter().filter(|m| m.r0.is_finite()).collect();
    let mut summary_csv = String::from("channel,average,std_dev,rsd\n");
    let mut summary_txt = String::from(
        "channel                 average     std        RSD\n",
    );
    if ok.len() >= 2 {
        for (label, values) in [
            ("transmon_relaxation", ok.iter().map(|m| m.s_relax).collect::<Vec<_>>()),
            ("transmon_dephasing", ok.iter().map(|m| m.s_dephase).collect::<Vec<_>>()),
            ("cavity_loss", ok.iter().map(|m| m.s_loss).collect::<Vec<_>>()),
        ] {
            let stats = ensemble_stats(&values)?;
            summary_csv.push_str(&format!(
                "{label},{:.6},{:.6},{:.6}\n",
                stats.mean, stats.std_dev, stats.rsd
            ));
            summary_txt.push_str(&format!(
                "{label:<22}  {:>8.4}   {:>8.4}   {:>6.4}\n",
                stats.mean, stats.std_dev, stats.rsd
            ));
        }
    }
    w.write("susceptibility_summary.csv", &summary_csv)?;
    w.write("susceptibility_summary.txt", &summary_txt)?;
    w.write("members.json", &serde_json::to_string_pretty(&members)?)?;
    w.finish(Command::Ensemble, config, started, Some(records), Some(traces))
}

#[derive(Serialize)]
struct BoundMinimum {
    t_phi_us: f64,
    t_gate_opt_us: f64,
    bound: f64,
    bound_percent: f64,
}

fn run_bound(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let code = config.build_code()?;
    let params = config.bound_params(code.mean_photon());

    let axis = |range: [f64; 2], points: usize| -> Vec<f64> {
        (0..points)
            .map(|i| {
                let f = i as f64 / (points - 1).max(1) as f64;
                (range[0] + f * (range[1] - range[0])) * 1e-6
            })
            .collect()
    };
    let t_axis = axis(config.bound_t_gate_range_us, config.bound_t_gate_points);
    let tphi_axis = axis(config.bound_t_phi_range_us, config.bound_t_phi_points);
    let heatmap = bound_heatmap(&t_axis, &tphi_axis, &params);

    // minimum over gate time for each dephasing time
    let minima: Vec<BoundMinimum> = tphi_axis
        .iter()
        .map(|&tp| {
            let p = crate::error_model::ErrorBoundParams { t_phi: tp, ..params };
            let (lo, hi) = (t_axis[0], *t_axis.last().unwrap());
            let (t_opt, v) = if hi > lo {
                minimize_bound((lo, hi), &p)
            } else {
                (lo, crate::error_model::error_bound(lo, &p))
            };
            BoundMinimum {
                t_phi_us: tp * 1e6,
                t_gate_opt_us: t_opt * 1e6,
                bound: v.total,
                bound_percent: v.total * 100.0,
            }
        })
        .collect();

    let mut w = OutputWriter::new(Path::new(&config.out_dir))?;
    w.write("bound_heatmap.csv", &heatmap.to_csv())?;
    w.write("bound_minima.json", &serde_json::to_string_pretty(&minima)?)?;
    w.finish(Command::Bound, config, started, None, None)
}

fn run_trajectory(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let space = config.build_space()?;
    let code = config.build_code()?;
    let params = load_params(config)?;
    let waveform = synthesize(&params);
    let chi = config.chi();

    let cavity = initial_cavity_state(config, &code)?;
    let psi0 = code.embed_with_ground(&space, cavity.amplitudes());
    let traj = propagate_closed(&waveform, &space, chi, &psi0, config.sample_stride)?;

    let mut w = OutputWriter::new(Path::new(&config.out_dir))?;
    w.write("trajectory.csv", &traj.to_csv())?;

    if config.wigner {
        let states = match &traj.states {
            TrajectoryStates::Pure(v) => v,
            TrajectoryStates::Mixed(_) => unreachable!(),
        };
        let half = config.wigner_extent;
        let pts = config.wigner_points.max(3);
        let axis: Vec<f64> = (0..pts)
            .map(|i| -half + 2.0 * half * i as f64 / (pts - 1) as f64)
            .collect();
        for (idx, state) in states.iter().enumerate() {
            let cavity_rho = state.to_density_matrix().partial_trace_transmon(&space);
            let grid = wigner_grid(&cavity_rho, &axis, &axis)?;
            let mut csv = String::from("x,p,w\n");
            for (i, &x) in grid.xs.iter().enumerate() {
                for (j, &p) in grid.ps.iter().enumerate() {
                    csv.push_str(&format!("{x:.6},{p:.6},{:.9}\n", grid.values[i][j]));
                }
            }
            let t_ns = traj.times[idx] * 1e9;
            w.write(&format!("wigner_{t_ns:08.1}ns.csv", ), &csv)?;
        }
    }
    w.finish(Command::Trajectory, config, started, None, None)
}

fn initial_cavity_state(config: &RunConfig, code: &crate::codes::BosonicCode) -> Result<StateVector> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let zero = Complex64::new(0.0, 0.0);
    let (c0, c1) = match config.initial_state.as_str() {
        "zero" => (one, zero),
        "one" => (zero, one),
        "plus" => (one, one),
        "minus" => (one, -one),
        "plus_i" => (one, i),
        "minus_i" => (one, -i),
        other => {
            return Err(Error::Config(format!(
                "unknown initial state '{other}'"
            )))
        }
    };
    code.codespace_state(c0, c1)
}

/// Convenience used by tests and examples: evaluates r0 for a gate and
/// stores it on the struct.
pub fn attach_intrinsic_error(
    gate: &mut OptimizedGate,
    problem: &crate::grape::OptimizationProblem,
) -> Result<f64> {
    let (_, r0) = gate_fidelity_closed(
        &gate.waveform,
        &problem.target,
        &problem.code,
        &problem.space,
        problem.chi,
    )?;
    gate.intrinsic_error = Some(r0);
    Ok(r0)
}
