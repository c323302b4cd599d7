// SPDX-License-Identifier: Apache-2.0

//! The four subcommands. Each writes its machine-readable output under
//! `output.dir` and a short summary to stdout.

use std::fs;
use std::path::Path;
use std::time::Instant;

use fockgate::validate::{run_suite, ValidationConfig, ValidationReport};
use fockgate::{
    closed_form_rotation, execute_plan, leakage, plan_general_state, reduced_oscillator_state, ug_gate,
    AtomBranch, CircuitPlan, ExecutionReport, GateParams, HilbertSpace, Level, Model, OscillatorState,
    RamanParams, StateVector,
};
use log::info;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

/// One gate run under one model.
#[derive(Debug, Clone, Serialize)]
pub struct GateRecord {
    pub model: Model,
    pub m: usize,
    pub k: usize,
    pub omega_l: f64,
    pub phi: f64,
    pub tau: f64,
    /// Both pulses; the spin flip is instantaneous.
    pub gate_time: f64,
    /// Overlap with the closed-form output `σ_x|+⟩ ⊗ |qb_f⟩`.
    pub fidelity: f64,
    /// Population outside `{m−k, m}`.
    pub leakage: f64,
    pub guard_population: f64,
    pub purity: f64,
    pub h_population: f64,
    pub unitarity_error: f64,
    pub seconds: f64,
}

/// Sweep table row.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub r: f64,
    pub model: Model,
    pub fidelity: f64,
    pub leakage: f64,
    pub gate_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesisRecord {
    #[serde(flatten)]
    pub report: ExecutionReport,
    pub min_purity: f64,
    pub seconds: f64,
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(&path, contents))
        .map_err(|e| CliError::Output {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
    info!("wrote {}", path.display());
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("records serialize")
}

fn gate_params(cfg: &RunConfig, p: &RamanParams, use_tau: bool) -> Result<GateParams, CliError> {
    let g = &cfg.gate;
    let gp = match g.tau {
        Some(tau) if use_tau => GateParams::from_duration(p, g.m, g.k, tau),
        _ => GateParams::from_angle(p, g.m, g.k, g.phi),
    };
    Ok(gp?)
}

/// Runs `UG_m` on `|+⟩ ⊗ (α|m−k⟩ + β|m⟩)` under `model`.
pub fn gate_record(cfg: &RunConfig, p: &RamanParams, gp: &GateParams, model: Model) -> Result<GateRecord, CliError> {
    let start = Instant::now();
    let g = &cfg.gate;
    let cutoff = cfg.space.fock_cutoff;
    let space = model.space(cutoff)?;
    let dim = space.atom_dim();
    let (lower, upper) = gp.pair();
    let osc = OscillatorState::pair(cutoff, lower, upper, g.alpha, g.beta)?;
    let input = StateVector::product(&AtomBranch::Plus.amplitudes(dim), &osc)?;
    let u = ug_gate(gp, p, &space, model)?;
    let out = u.apply(&input)?;

    let q = closed_form_rotation(g.alpha, g.beta, gp, AtomBranch::Plus)?;
    let expected = StateVector::product(&AtomBranch::Plus.output_amplitudes(dim), &q.to_oscillator(cutoff)?)?;
    let h_population = if dim > 2 { out.level_population(Level::H)? } else { 0.0 };
    Ok(GateRecord {
        model,
        m: g.m,
        k: g.k,
        omega_l: p.omega_l,
        phi: gp.phi,
        tau: gp.tau,
        gate_time: 2.0 * gp.tau,
        fidelity: expected.fidelity(&out)?,
        leakage: leakage(&out, g.m, g.k),
        guard_population: out.guard_population(),
        purity: reduced_oscillator_state(&out).purity(),
        h_population,
        unitarity_error: u.unitarity_error(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn gate(cfg: &RunConfig) -> Result<Vec<GateRecord>, CliError> {
    let p = cfg.params()?;
    let gp = gate_params(cfg, &p, true)?;
    let records = cfg
        .models
        .iter()
        .map(|&model| gate_record(cfg, &p, &gp, model))
        .collect::<Result<Vec<_>, _>>()?;
    for r in &records {
        println!(
            "{:<9} m={} k={} φ={:.6} τ={:.6}: fidelity {:.12}, leakage {:.3e}, purity {:.12}",
            r.model, r.m, r.k, r.phi, r.tau, r.fidelity, r.leakage, r.purity
        );
    }
    write(&cfg.output.dir, "gate.json", &to_json(&records))?;
    Ok(records)
}

/// Gate fidelity and leakage across `r = |Ω_L|/g` at fixed `φ`.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    let points: Vec<(f64, Model)> = cfg
        .sweep
        .ratios
        .iter()
        .flat_map(|&r| cfg.models.iter().map(move |&m| (r, m)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(r, model)| {
            let mut p = cfg.params()?;
            p.omega_l = r * p.g;
            let gp = gate_params(cfg, &p, false)?;
            let rec = gate_record(cfg, &p, &gp, model)?;
            Ok(SweepRow {
                r,
                model,
                fidelity: rec.fidelity,
                leakage: rec.leakage,
                gate_time: rec.gate_time,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        csv.serialize(row).expect("rows serialize");
        println!("r={:<6} {:<9} fidelity {:.9} leakage {:.3e}", row.r, row.model, row.fidelity, row.leakage);
    }
    let bytes = csv.into_inner().expect("in-memory writer");
    write(&cfg.output.dir, "sweep.csv", &String::from_utf8(bytes).expect("csv is utf-8"))?;
    Ok(rows)
}

pub fn synthesize(cfg: &RunConfig) -> Result<(CircuitPlan, Vec<SynthesisRecord>), CliError> {
    let p = cfg.params()?;
    let cutoff = cfg.space.fock_cutoff;
    let target = cfg.synthesize.target.build(cutoff)?;
    let plan = plan_general_state(&target, &p)
        .map_err(|e| CliError::config("synthesize.target", e.to_string()))?
        .parallelize();
    write(&cfg.output.dir, "plan.json", &plan.to_json()?)?;

    let vacuum = StateVector::basis(HilbertSpace::qubit(cutoff)?, Level::G, 0)?;
    let mut records = Vec::with_capacity(cfg.models.len());
    for &model in &cfg.models {
        let start = Instant::now();
        let outcome = execute_plan(&plan, &vacuum, model, &p)?;
        let report = outcome.report;
        println!(
            "{:<9} {} steps: fidelity {:.12}, leakage {:.3e}, min purity {:.9}",
            model,
            report.steps,
            report.fidelity,
            report.leakage,
            report.min_purity()
        );
        records.push(SynthesisRecord {
            min_purity: report.min_purity(),
            report,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    write(&cfg.output.dir, "synthesis.json", &to_json(&records))?;
    Ok((plan, records))
}

pub fn validate(cfg: &RunConfig) -> Result<ValidationReport, CliError> {
    let vc = ValidationConfig {
        params: cfg.params()?,
        fock_cutoff: cfg.space.fock_cutoff,
        tolerances: cfg.tolerances,
        seed: cfg.seed,
        samples: cfg.validate.samples,
        corrupt_theta0: cfg.validate.corrupt_theta0,
    };
    let report = run_suite(&vc)?;
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!("{mark} {:<40} {:.3e} < {:.1e}", c.name, c.measured, c.bound);
    }
    write(&cfg.output.dir, "validate.json", &to_json(&report))?;
    Ok(report)
}
