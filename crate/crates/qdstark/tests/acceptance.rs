//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::Instant;

use qdstark::{Artifacts, RawConfig, RunOptions, Scenario};
use qdstark_core::dynamics::{
    evolve_schrodinger, pulse_times, swap_phase, wrap_angle, IntegratorConfig, DEFAULT_RWA_STEP_PS,
};
use qdstark_core::entanglement::concurrence;
use qdstark_core::hamiltonian::{
    anticrossing_sweep, counter_rotating_correction, effective_subspace, minimum_gap, resonance_mismatch,
    solve_resonant_rabi,
};
use qdstark_core::linalg::{c, real, Mat4};
use qdstark_core::state::pure_to_density;
use qdstark_core::{presets, DensityMatrix, PulseSchedule, QuantumState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(scenario: Scenario, toml: &str) -> Artifacts {
    let raw = RawConfig::parse(scenario, toml).expect("acceptance config parses");
    qdstark::run(scenario, &raw, &RunOptions::default()).unwrap_or_else(|e| panic!("{scenario}: {e}"))
}

fn num(a: &Artifacts, key: &str) -> f64 {
    a.summary.get_f64(key).unwrap_or_else(|| panic!("summary lacks `{key}`"))
}

/// Trace and positivity bounds of one Lindblad run, from its summary keys.
fn sane(a: &Artifacts, trace_key: &str, eig_key: &str) -> (bool, f64, f64) {
    let (trace, eig) = (num(a, trace_key), num(a, eig_key));
    (trace < 1e-8 && eig > -1e-9, trace, eig)
}

fn transfer_and_hold(rwa: &Artifacts) -> (Outcome, Outcome) {
    let t = num(rwa, "first_max_time_ps");
    let p = num(rwa, "first_max_p10");
    let one = outcome(
        (t / 10.9 - 1.0).abs() <= 0.01 && p > 0.98,
        format!("first p10 maximum at {t:.3} ps (want 10.9 ps ± 1%), peak p10 = {p:.5} (want > 0.98)"),
    );
    let hold = num(rwa, "hold_min_p01");
    let two = outcome(hold >= 0.99, format!("min p01 over 50 ps with laser off = {hold:.6} (want ≥ 0.99)"));
    (one, two)
}

fn resonance_closed_form() -> Outcome {
    let base = presets::anticrossing();
    let rabi2 = solve_resonant_rabi(&base, presets::RABI_RATIO).unwrap();
    let mismatch = resonance_mismatch(&base.with_rabi(rabi2, presets::RABI_RATIO)).unwrap();
    outcome(
        (rabi2 / 40.9 - 1.0).abs() <= 0.005 && mismatch.abs() < 1e-9,
        format!("Ω2 = {rabi2:.5} meV (want 40.9 ± 0.5%), |mismatch| = {:.1e} meV (want < 1e-9)", mismatch.abs()),
    )
}

fn anticrossing_gap() -> Outcome {
    let base = presets::anticrossing();
    let ratio = presets::RABI_RATIO;
    let resonant = solve_resonant_rabi(&base, ratio).unwrap();
    let v_eff = effective_subspace(&base.with_rabi(resonant, ratio)).unwrap().v_eff;
    let grid: Vec<f64> = (0..=200_000).map(|k| resonant - 0.5 + k as f64 * 1e-5 * 0.5).collect();
    let points = anticrossing_sweep(&base, ratio, &grid).unwrap();
    let min = minimum_gap(&points).unwrap();
    let rel = min.gap() / (2.0 * v_eff.abs()) - 1.0;
    outcome(
        rel.abs() <= 1e-6,
        format!(
            "min gap {:.8} meV at Ω2 = {:.4} vs 2|V_eff| = {:.8} meV at resonance Ω2 = {resonant:.4}: relative {rel:.2e} (want |·| ≤ 1e-6)",
            min.gap(),
            min.omega2,
            2.0 * v_eff.abs()
        ),
    )
}

fn counter_rotating() -> Outcome {
    let shift = counter_rotating_correction(&presets::rwa_transfer()).unwrap();
    let diff = shift.corrected_difference;
    let rwa = presets::rwa_transfer();
    let lab = presets::lab_transfer().without_decay();
    let schedule = PulseSchedule::constant(true, 20.0).unwrap();
    let psi0 = QuantumState::basis(1);
    let a = evolve_schrodinger(&rwa, &schedule, &psi0, &IntegratorConfig::rwa(0.05)).unwrap();
    let b = evolve_schrodinger(&lab, &schedule, &psi0, &IntegratorConfig::lab(&lab, 0.05)).unwrap();
    let worst = a
        .populations
        .iter()
        .zip(&b.populations)
        .flat_map(|(x, y)| (0..4).map(move |k| (x[k] - y[k]).abs()))
        .fold(0.0, f64::max);
    outcome(
        (diff - 2.18).abs() <= 0.01 && worst <= 0.02,
        format!(
            "corrected δ1−δ2 = {diff:.4} meV (want 2.18 ± 0.01); lab vs RWA populations, drive on 0–20 ps: max |Δp| = {worst:.4} (want ≤ 0.02)"
        ),
    )
}

fn floquet() -> Outcome {
    let a = run(Scenario::FloquetValidate, "");
    let table = a.table("floquet_validate").unwrap();
    let pass = table.headers.iter().position(|h| h == "pass").unwrap();
    let reference_ok = table.rows[..2].iter().all(|r| r[pass] == "true".into());
    let fraction = a.summary.get("pass_fraction").unwrap().to_string();
    let all = num(&a, "pass_count") == num(&a, "total") && num(&a, "warned") == 0.0 && num(&a, "errored") == 0.0;
    outcome(
        all && reference_ok && num(&a, "total") == 102.0,
        format!("{fraction} drives within 10·Ω′⁴/δ³ (100 seeded random + 2 reference dots); reference rows pass: {reference_ok}"),
    )
}

fn entanglement(damped: &Artifacts, long_lived: &Artifacts) -> Outcome {
    let eof_end = num(damped, "eof_pulse_end");
    let key = "eof_gamma2_1e-3";
    let after = num(long_lived, &format!("{key}.min_after_pulse"));
    let last = num(long_lived, &format!("{key}.final"));
    outcome(
        eof_end > 0.95 && after >= 0.94,
        format!(
            "eof at pulse end (331/100 ps lifetimes) = {eof_end:.4} (want > 0.95); 1 ns lifetime: min eof from pulse end to 50 ps = {after:.4}, eof(50 ps) = {last:.4} (want ≥ 0.94)"
        ),
    )
}

fn lindblad_sanity(damped: &Artifacts, long_lived: &Artifacts, undamped: &Artifacts) -> Outcome {
    let lab = presets::lab_transfer().without_decay();
    let schedule = PulseSchedule::square_pulse(presets::ENTANGLING_PULSE_PS, 50.0).unwrap();
    let unitary =
        evolve_schrodinger(&lab, &schedule, &QuantumState::basis(1), &IntegratorConfig::lab(&lab, 0.05)).unwrap();
    let table = undamped.table("lindblad_populations").unwrap();
    let mut worst = 0.0_f64;
    for (k, name) in ["p00", "p01", "p10", "p11"].iter().enumerate() {
        let col = table.column(name).unwrap();
        assert_eq!(col.len(), unitary.populations.len());
        for (x, p) in col.iter().zip(&unitary.populations) {
            worst = worst.max((x - p[k]).abs());
        }
    }
    let runs = [
        sane(damped, "max_trace_error", "min_eigenvalue"),
        sane(undamped, "max_trace_error", "min_eigenvalue"),
        sane(long_lived, "eof_gamma2_1e-3.max_trace_error", "eof_gamma2_1e-3.min_eigenvalue"),
    ];
    let trace = runs.iter().map(|r| r.1).fold(0.0, f64::max);
    let eig = runs.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    outcome(
        worst <= 1e-7 && runs.iter().all(|r| r.0),
        format!(
            "Γ = 0 Lindblad vs unitary (lab frame, 50 ps): max |Δp| = {worst:.1e} (want ≤ 1e-7); over all Lindblad runs max trace error = {trace:.1e} (want < 1e-8), min eigenvalue = {eig:.1e} (want > −1e-9)"
        ),
    )
}

fn concurrence_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let amps = core::array::from_fn(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let psi = QuantumState::normalized(amps).unwrap();
        let a = psi.amplitudes();
        let expected = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm_sqr().sqrt();
        worst = worst.max((concurrence(&pure_to_density(&psi)) - expected).abs());
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi = pure_to_density(&QuantumState::new([real(s), real(0.0), real(0.0), real(s)]).unwrap());
    let werner = DensityMatrix::new(phi.matrix() * real(0.5) + Mat4::identity() * real(0.125)).unwrap();
    let w = concurrence(&werner);
    outcome(
        worst <= 1e-9 && (w - 0.25).abs() <= 1e-9,
        format!("1000 random pure states: max |C − 2|ad−bc|| = {worst:.1e} (want ≤ 1e-9); Werner p = 0.5: C = {w:.12} (want 0.25 ± 1e-9)"),
    )
}

fn iswap_phase() -> Outcome {
    let p = presets::rwa_transfer();
    let times = pulse_times(&p).unwrap();
    let phi = swap_phase(&p, times.t_swap, DEFAULT_RWA_STEP_PS).unwrap();
    let schedule = PulseSchedule::constant(true, times.t_half).unwrap();
    let half = evolve_schrodinger(&p, &schedule, &QuantumState::basis(1), &IntegratorConfig::rwa(times.t_half)).unwrap();
    let last = *half.amplitudes.as_ref().unwrap().last().unwrap();
    let relative = {
        let z = last.amplitude(2) / last.amplitude(1);
        z.im.atan2(z.re)
    };
    outcome(
        wrap_angle(phi - FRAC_PI_2).abs() <= 0.05,
        format!(
            "arg⟨10|ψ(t_swap)⟩ − arg⟨01|ψ(0)⟩ = {:+.4}·π/2 (want +1 ± {:.3}); relative |10⟩:|01⟩ phase at t_half = {:+.4}·π/2; V_eff = {:+.5} meV",
            phi / FRAC_PI_2,
            0.05 / FRAC_PI_2,
            relative / FRAC_PI_2,
            times.v_eff
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    let rwa = run(Scenario::RwaPopulations, "");
    let (one, two) = transfer_and_hold(&rwa);
    results.push((1, "transfer time", one));
    results.push((2, "hold fidelity", two));
    results.push((3, "resonance closed form", resonance_closed_form()));
    results.push((4, "anticrossing gap", anticrossing_gap()));
    results.push((5, "counter-rotating correction", counter_rotating()));
    results.push((6, "Floquet oracle", floquet()));

    let damped = run(Scenario::LindbladPopulations, "");
    let long_lived = run(Scenario::EofSweep, "gamma2_values = [1e-3]");
    let undamped = run(Scenario::LindbladPopulations, "gamma1 = 0.0\ngamma2 = 0.0");
    results.push((7, "entanglement figures", entanglement(&damped, &long_lived)));
    results.push((8, "Lindblad sanity", lindblad_sanity(&damped, &long_lived, &undamped)));
    results.push((9, "concurrence oracle", concurrence_oracle()));
    results.push((10, "iSWAP phase", iswap_phase()));

    let passed = results.iter().filter(|r| r.2.pass).count();
    for (n, name, o) in &results {
        println!("[{}] {n:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!(
        "acceptance: {passed}/{} criteria passed in {:.0} s",
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
