// Copyright 2026 the bosonic-gate authors
// SPDX-License-Identifier: Apache-2.0

//! Thin command-line front end over the library pipelines.
//!
//! Exit codes: 0 success, 1 configuration/validation problem, 2 numerical
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bosonic_gate::config::{CliOverrides, Command as PipelineCommand, ConfigFile, RunConfig};
use bosonic_gate::error::Error;
use bosonic_gate::pipeline;

#[derive(Parser)]
#[command(
    name = "bgate",
    version,
    about = "Pulse synthesis, simulation, and error budgeting for bosonic-qubit gates"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,

    /// Declarative run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Random seed (required for optimize/ensemble).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Constraint preset.
    #[arg(long, global = true, value_parser = ["standard", "weak"])]
    preset: Option<String>,

    /// Pulse parameters JSON from a previous optimize run
    /// (evaluate/susceptibility/trajectory).
    #[arg(long, global = true)]
    params: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Synthesize one gate from a seeded random start.
    Optimize,
    /// Closed- and open-system fidelities of an optimized gate.
    Evaluate,
    /// Per-channel susceptibility budget of an optimized gate.
    Susceptibility,
    /// Independent seeded restarts with summary statistics.
    Ensemble,
    /// Achievable-error bound heatmap over gate and dephasing times.
    Bound,
    /// Sampled closed-system trajectory (optionally with Wigner grids).
    Trajectory,
    /// Check a configuration without running anything.
    Validate,
}

impl CliCommand {
    fn pipeline(&self) -> PipelineCommand {
        match self {
            CliCommand::Optimize => PipelineCommand::Optimize,
            CliCommand::Evaluate => PipelineCommand::Evaluate,
            CliCommand::Susceptibility => PipelineCommand::Susceptibility,
            CliCommand::Ensemble => PipelineCommand::Ensemble,
            CliCommand::Bound => PipelineCommand::Bound,
            CliCommand::Trajectory => PipelineCommand::Trajectory,
            CliCommand::Validate => PipelineCommand::Validate,
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Numerical { .. }
        | Error::TruncationLeakage { .. }
        | Error::NotPositiveSemidefinite { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(jobs) = cli.jobs {
        // deterministic results do not depend on the pool size; ignore a
        // repeat initialization
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    let file = match &cli.config {
        Some(path) => match ConfigFile::load(path) {
            Ok(f) => Some(f),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        None => None,
    };
    let overrides = CliOverrides {
        seed: cli.seed,
        out_dir: cli.out.as_ref().map(|p| p.to_string_lossy().into_owned()),
        preset: cli.preset.clone(),
        params_path: cli.params.as_ref().map(|p| p.to_string_lossy().into_owned()),
    };
    let config = match RunConfig::resolve(file.as_ref(), &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let command = cli.command.pipeline();
    let diagnostics = config.validate(command);
    if let CliCommand::Validate = cli.command {
        if diagnostics.is_empty() {
            println!("configuration valid");
            return ExitCode::SUCCESS;
        }
        for d in &diagnostics {
            println!("{d}");
        }
        return ExitCode::from(1);
    }
    if !diagnostics.is_empty() {
        for d in &diagnostics {
            eprintln!("error: {d}");
        }
        return ExitCode::from(1);
    }

    match pipeline::run(command, &config) {
        Ok(output) => {
            for file in &output.files {
                println!("wrote {}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
