//! One runner per scenario. Each returns its tables and summary without
//! touching the file system.

use qdstark_core::dynamics::{
    evolve_lindblad, evolve_schrodinger, make_collapse_channels, pulse_times, pulse_times_corrected,
    Frame, IntegratorConfig, Trajectory,
};
use qdstark_core::entanglement::{eof, single_exciton_bell_fidelity};
use qdstark_core::floquet::{validate_stark_shift, TwoLevelDrive};
use qdstark_core::hamiltonian::{
    anticrossing_sweep, check_conditions, compensate_counter_rotating, counter_rotating_correction,
    effective_subspace, minimum_gap, resonance_mismatch, solve_resonant_rabi, solve_resonant_rabi_corrected,
};
use qdstark_core::state::pure_to_density;
use qdstark_core::{presets, PulseSchedule, QuantumState, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{first_excursion_maximum, min_max, nearest_index, validate_trajectory_table};
use crate::config::{
    AnticrossingConfig, EofSweepConfig, FloquetConfig, LindbladConfig, Physics, ResonanceConfig, RunSettings,
    RwaConfig, Scenario,
};
use crate::error::{Context, Result, RunError};
use crate::output::{Artifacts, Cell, Summary, Table};

/// Seed for random sweeps and the optional worker count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// `Some(n)` with `n > 1` evaluates independent trajectories or drives
    /// on `n` threads. Output is identical either way.
    pub threads: Option<usize>,
}

fn map_items<T, R, F>(opts: &RunOptions, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match opts.threads {
        Some(n) if n > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| RunError::Config(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(|| items.par_iter().map(&f).collect()))
        }
        _ => Ok(items.iter().map(f).collect()),
    }
}

pub fn trajectory_table(traj: &Trajectory, entanglement: bool) -> Table {
    let mut headers = vec!["t_ps", "p00", "p01", "p10", "p11", "purity"];
    if entanglement {
        headers.extend(["eof", "fidelity_vs_target"]);
    }
    let mut table = Table::new(headers);
    for ((t, pops), rho) in traj.times.iter().zip(&traj.populations).zip(&traj.states) {
        let mut row: Vec<Cell> = vec![(*t).into()];
        row.extend(pops.iter().map(|&p| Cell::from(p)));
        row.push(rho.purity().into());
        if entanglement {
            row.push(eof(rho).into());
            row.push(single_exciton_bell_fidelity(rho).into());
        }
        table.push(row);
    }
    table
}

fn ket01() -> QuantumState {
    QuantumState::basis(1)
}

fn schedule(laser: Option<f64>, on_always: bool, window: f64) -> Result<PulseSchedule> {
    match laser {
        Some(pulse) => PulseSchedule::square_pulse(pulse, window),
        None => PulseSchedule::constant(on_always, window),
    }
    .context("pulse schedule")
}

pub fn run_anticrossing(cfg: &AnticrossingConfig) -> Result<Artifacts> {
    let params = cfg.physics.params();
    let ratio = cfg.physics.rabi_ratio;
    let points = anticrossing_sweep(&params, ratio, &cfg.grid()).context("anticrossing sweep")?;
    let mut table = Table::new(["omega2_mev", "eig_lower_mev", "eig_upper_mev"]);
    for p in &points {
        table.push(vec![p.omega2.into(), p.lower.into(), p.upper.into()]);
    }
    let min = minimum_gap(&points).ok_or_else(|| RunError::Config("empty Ω2 grid".into()))?;
    let mut summary = Summary::default();
    summary
        .num("rabi_ratio", ratio)
        .text("grid_points", points.len())
        .num("min_gap_omega2_mev", min.omega2)
        .num("min_gap_mev", min.gap());
    match solve_resonant_rabi(&params, ratio) {
        Ok(rabi2) => {
            let v_eff = effective_subspace(&params.with_rabi(rabi2, ratio)).context("effective coupling")?.v_eff;
            summary
                .num("resonant_omega2_mev", rabi2)
                .num("v_eff_at_resonance_mev", v_eff)
                .num("two_abs_v_eff_mev", 2.0 * v_eff.abs())
                .num("min_gap_relative_to_two_v_eff", min.gap() / (2.0 * v_eff.abs()) - 1.0);
        }
        Err(e) => {
            summary.text("resonant_omega2_mev", format!("none ({e})"));
        }
    }
    Ok(Artifacts { stem: Scenario::Anticrossing.name().into(), tables: vec![("anticrossing".into(), table)], summary })
}

fn rwa_integrator(run: &RunSettings) -> IntegratorConfig {
    let config = IntegratorConfig::rwa(run.sample_stride_ps);
    match run.dt_ps {
        Some(dt) => config.with_dt_max(dt),
        None => config,
    }
}

pub fn run_rwa_populations(cfg: &RwaConfig, opts: &RunOptions) -> Result<Artifacts> {
    let run = &cfg.run;
    let params = cfg.physics.params().with_rabi(run.rabi2, cfg.physics.rabi_ratio);
    let times = pulse_times(&params).context("pulse times")?;
    let pulse = run.pulse_ps.unwrap_or(times.t_half);
    let schedules = [
        ("rwa_always_on", schedule(None, true, run.window_ps)?),
        ("rwa_half_pulse", schedule(Some(pulse), true, run.window_ps)?),
        ("rwa_always_off", schedule(None, false, run.window_ps)?),
    ];
    let config = rwa_integrator(run);
    let trajectories = map_items(opts, &schedules, |(name, s)| {
        evolve_schrodinger(&params, s, &ket01(), &config).context(name)
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let tables: Vec<(String, Table)> = schedules
        .iter()
        .zip(&trajectories)
        .map(|((name, _), traj)| (name.to_string(), trajectory_table(traj, false)))
        .collect();
    for (_, t) in &tables {
        validate_trajectory_table(t)?;
    }

    let [on, half, off] = [&trajectories[0], &trajectories[1], &trajectories[2]];
    let mut summary = Summary::default();
    summary
        .num("rabi2_mev", params.rabi2)
        .num("rabi1_mev", params.rabi1)
        .num("v_eff_mev", times.v_eff)
        .num("t_swap_ps", times.t_swap)
        .num("t_half_ps", times.t_half)
        .num("pulse_ps", pulse);
    match first_excursion_maximum(&on.times, &on.population(2), 0.5) {
        Some((t, p)) => summary.num("first_max_time_ps", t).num("first_max_p10", p),
        None => summary.text("first_max_time_ps", "none").text("first_max_p10", "none"),
    };
    let hold = min_max(&off.population(1)).0;
    let end = nearest_index(&half.times, pulse);
    summary
        .num("hold_min_p01", hold)
        .num("pulse_end_time_ps", half.times[end])
        .num("pulse_end_p01", half.populations[end][1])
        .num("pulse_end_p10", half.populations[end][2])
        .num(
            "max_norm_error",
            trajectories.iter().map(|t| t.max_norm_error).fold(0.0, f64::max),
        );
    Ok(Artifacts { stem: Scenario::RwaPopulations.name().into(), tables, summary })
}

/// Driven, damped parameters for the Lindblad scenarios. In the lab frame with
/// `compensate`, the configured detunings are the rotating-frame targets.
pub fn damped_params(physics: &Physics, run: &RunSettings, frame: Frame, compensate: bool, gamma1: f64, gamma2: f64) -> Result<SystemParams> {
    let driven = physics.params().with_rabi(run.rabi2, physics.rabi_ratio);
    let base = if frame == Frame::Lab && compensate {
        compensate_counter_rotating(&driven).context("counter-rotating compensation")?
    } else {
        driven
    };
    Ok(SystemParams { gamma1, gamma2, ..base })
}

fn integrator(params: &SystemParams, run: &RunSettings, frame: Frame) -> Result<IntegratorConfig> {
    match (frame, run.dt_ps) {
        (Frame::Rwa, _) => Ok(rwa_integrator(run)),
        (Frame::Lab, None) => Ok(IntegratorConfig::lab(params, run.sample_stride_ps)),
        (Frame::Lab, Some(dt)) => IntegratorConfig::new(Frame::Lab, dt, run.sample_stride_ps, params).context("dt_ps"),
    }
}

fn derived_half(params: &SystemParams, frame: Frame) -> Result<f64> {
    let times = match frame {
        Frame::Lab => pulse_times_corrected(params),
        Frame::Rwa => pulse_times(params),
    };
    Ok(times.context("pulse times")?.t_half)
}

fn damped_run(params: &SystemParams, run: &RunSettings, frame: Frame, pulse: f64) -> Result<Trajectory> {
    let channels = make_collapse_channels(params).context("collapse channels")?;
    let config = integrator(params, run, frame)?;
    let s = schedule(Some(pulse), true, run.window_ps)?;
    evolve_lindblad(params, &s, &pure_to_density(&ket01()), &channels, &config).context("Lindblad evolution")
}

fn frame_name(frame: Frame) -> &'static str {
    match frame {
        Frame::Lab => "lab",
        Frame::Rwa => "rwa",
    }
}

pub fn run_lindblad_populations(cfg: &LindbladConfig) -> Result<Artifacts> {
    let params = damped_params(&cfg.physics, &cfg.run, cfg.frame, cfg.compensate, cfg.gamma1, cfg.gamma2)?;
    let t_half = derived_half(&params, cfg.frame)?;
    let pulse = cfg.run.pulse_ps.unwrap_or(t_half);
    let traj = damped_run(&params, &cfg.run, cfg.frame, pulse)?;
    let table = trajectory_table(&traj, true);
    validate_trajectory_table(&table)?;

    let eofs = table.column("eof").expect("entanglement columns present");
    let fid = table.column("fidelity_vs_target").expect("entanglement columns present");
    let end = nearest_index(&traj.times, pulse);
    let (eof_min_after, _) = min_max(&eofs[end..]);
    let min_eigenvalue = traj.states.iter().map(|r| r.min_eigenvalue()).fold(f64::INFINITY, f64::min);
    let mut summary = Summary::default();
    summary
        .text("frame", frame_name(cfg.frame))
        .num("delta1_mev", params.detuning1())
        .num("delta2_mev", params.detuning2())
        .num("detuning_difference_mev", params.detuning1() - params.detuning2())
        .num("rabi2_mev", params.rabi2)
        .num("gamma1_per_ps", params.gamma1)
        .num("gamma2_per_ps", params.gamma2)
        .num("pulse_ps", pulse)
        .num("t_half_derived_ps", t_half)
        .num("pulse_end_time_ps", traj.times[end])
        .num("eof_pulse_end", eofs[end])
        .num("fidelity_pulse_end", fid[end])
        .num("p01_pulse_end", traj.populations[end][1])
        .num("p10_pulse_end", traj.populations[end][2])
        .num("eof_final", *eofs.last().unwrap())
        .num("eof_min_after_pulse", eof_min_after)
        .num("max_trace_error", traj.max_norm_error)
        .num("min_eigenvalue", min_eigenvalue);
    Ok(Artifacts {
        stem: Scenario::LindbladPopulations.name().into(),
        tables: vec![("lindblad_populations".into(), table)],
        summary,
    })
}

pub fn eof_column_name(gamma2: f64) -> String {
    format!("eof_gamma2_{gamma2:e}")
}

pub fn run_eof_sweep(cfg: &EofSweepConfig, opts: &RunOptions) -> Result<Artifacts> {
    let ratio_sq = cfg.physics.rabi_ratio * cfg.physics.rabi_ratio;
    let params: Vec<SystemParams> = cfg
        .gamma2_values
        .iter()
        .map(|&g2| damped_params(&cfg.physics, &cfg.run, cfg.frame, cfg.compensate, ratio_sq * g2, g2))
        .collect::<Result<_>>()?;
    let pulse = match cfg.run.pulse_ps {
        Some(p) => p,
        None => derived_half(&params[0], cfg.frame)?,
    };
    let trajectories = map_items(opts, &params, |p| damped_run(p, &cfg.run, cfg.frame, pulse))?
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let times = &trajectories[0].times;
    let columns: Vec<Vec<f64>> = trajectories
        .iter()
        .map(|t| t.states.iter().map(eof).collect())
        .collect();
    let mut headers = vec!["t_ps".to_string()];
    headers.extend(cfg.gamma2_values.iter().map(|&g| eof_column_name(g)));
    let mut table = Table::new(headers);
    for (i, &t) in times.iter().enumerate() {
        let mut row = vec![Cell::from(t)];
        row.extend(columns.iter().map(|c| Cell::from(c[i])));
        table.push(row);
    }

    let end = nearest_index(times, pulse);
    let mut summary = Summary::default();
    summary.text("frame", frame_name(cfg.frame)).num("pulse_ps", pulse).num("gamma1_over_gamma2", ratio_sq);
    for ((g2, col), traj) in cfg.gamma2_values.iter().zip(&columns).zip(&trajectories) {
        let key = eof_column_name(*g2);
        let min_eig = traj.states.iter().map(|r| r.min_eigenvalue()).fold(f64::INFINITY, f64::min);
        summary
            .num(format!("{key}.pulse_end"), col[end])
            .num(format!("{key}.final"), *col.last().unwrap())
            .num(format!("{key}.min"), min_max(col).0)
            .num(format!("{key}.min_after_pulse"), min_max(&col[end..]).0)
            .num(format!("{key}.max_trace_error"), traj.max_norm_error)
            .num(format!("{key}.min_eigenvalue"), min_eig);
    }
    Ok(Artifacts { stem: Scenario::EofSweep.name().into(), tables: vec![("eof_sweep".into(), table)], summary })
}

pub fn run_resonance_solve(cfg: &ResonanceConfig) -> Result<Artifacts> {
    let base = cfg.physics.params();
    let ratio = cfg.physics.rabi_ratio;
    let rabi2 = solve_resonant_rabi(&base, ratio).context("resonant drive")?;
    let rabi2_corrected = solve_resonant_rabi_corrected(&base, ratio).context("corrected resonant drive")?;
    let driven = base.with_rabi(rabi2, ratio);
    let times = pulse_times(&driven).context("pulse times")?;
    let shift = counter_rotating_correction(&driven).context("counter-rotating shifts")?;
    let report = check_conditions(&driven, cfg.condition_threshold);

    let mut summary = Summary::default();
    summary
        .num("rabi_ratio", ratio)
        .num("rabi2_mev", rabi2)
        .num("rabi1_mev", ratio * rabi2)
        .num("rabi2_corrected_mev", rabi2_corrected)
        .num("v_eff_mev", times.v_eff)
        .num("t_swap_ps", times.t_swap)
        .num("t_half_ps", times.t_half)
        .num("resonance_mismatch_mev", resonance_mismatch(&driven).context("mismatch")?)
        .num("counter_rotating_shift1_mev", shift.delta1)
        .num("counter_rotating_shift2_mev", shift.delta2)
        .num("corrected_detuning_difference_mev", shift.corrected_difference);
    for (name, value) in report.lhs_terms() {
        summary.num(format!("condition.{name}"), value);
    }
    summary
        .num("condition.rhs", report.rhs)
        .num("condition.max_ratio", report.max_ratio)
        .num("condition.threshold", report.threshold)
        .text("condition.satisfied", report.satisfied);
    Ok(Artifacts { stem: Scenario::ResonanceSolve.name().into(), tables: Vec::new(), summary })
}

/// Drives evaluated by the Floquet scenario, in row order: explicit drives,
/// the two reference dot transitions, then seeded random in-regime drives.
pub fn floquet_drives(cfg: &FloquetConfig, seed: u64) -> Vec<[f64; 3]> {
    let mut drives = cfg.drives.clone();
    if cfg.include_reference {
        let wl = presets::OMEGA_LASER;
        drives.push([presets::DELTA1 + wl, wl, presets::RABI_RATIO * presets::RABI2]);
        drives.push([presets::DELTA2 + wl, wl, presets::RABI2]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cfg.random_drives {
        let delta = rng.random_range(cfg.detuning_min..=cfg.detuning_max);
        let ratio = rng.random_range(cfg.coupling_ratio_min..=cfg.coupling_ratio_max);
        let omega_l = rng.random_range(2.0 * delta..=cfg.omega_l_max);
        drives.push([delta + omega_l, omega_l, 2.0 * ratio * delta]);
    }
    drives
}

pub fn run_floquet_validate(cfg: &FloquetConfig, opts: &RunOptions) -> Result<Artifacts> {
    let drives = floquet_drives(cfg, opts.seed);
    let rows = map_items(opts, &drives, |&[omega1, omega_l, rabi]| {
        TwoLevelDrive::new(omega1, omega_l, rabi).and_then(|d| validate_stark_shift(&d))
    })?;

    let mut table = Table::new([
        "omega1", "omega_l", "rabi", "floquet_shift", "formula_shift", "discrepancy", "pass",
    ]);
    let (mut in_regime, mut passed, mut warned, mut errored) = (0usize, 0usize, 0usize, 0usize);
    for (drive, row) in drives.iter().zip(&rows) {
        let mut cells: Vec<Cell> = drive.iter().map(|&x| Cell::from(x)).collect();
        match row {
            Ok(v) => {
                cells.extend([v.floquet_shift.into(), v.formula_shift.into(), v.discrepancy.into()]);
                let flag = if !v.in_regime {
                    warned += 1;
                    "warn"
                } else {
                    in_regime += 1;
                    if v.pass {
                        passed += 1;
                        "true"
                    } else {
                        "false"
                    }
                };
                cells.push(flag.into());
            }
            Err(_) => {
                errored += 1;
                in_regime += 1;
                cells.extend([f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), "error".into()]);
            }
        }
        table.push(cells);
    }
    let mut summary = Summary::default();
    summary
        .text("seed", opts.seed)
        .text("rows", drives.len())
        .text("pass_count", passed)
        .text("total", in_regime)
        .text("pass_fraction", format!("{passed}/{in_regime}"))
        .text("warned", warned)
        .text("errored", errored);
    for (i, row) in rows.iter().enumerate() {
        if let Err(e) = row {
            summary.text(format!("error.row{i}"), e);
        }
    }
    Ok(Artifacts {
        stem: Scenario::FloquetValidate.name().into(),
        tables: vec![("floquet_validate".into(), table)],
        summary,
    })
}
