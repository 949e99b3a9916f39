//! Lab-frame, rotating-frame and effective single-exciton Hamiltonians.
//!
//! Matrices are in meV in the basis `|00⟩, |01⟩, |10⟩, |11⟩`. Dot 2 is the
//! right-hand qubit, so `|01⟩` carries `ω2`/`δ2` and is driven by `Ω2` from
//! `|00⟩`.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::linalg::{hermitian_eigen, real, Mat4};
use crate::params::SystemParams;
use crate::units::ps_to_inverse_mev;
use crate::{Error, Result};

/// Default cutoff on `max_ratio` standing in for "≪" in the perturbative
/// validity conditions.
pub const DEFAULT_CONDITION_THRESHOLD: f64 = 0.1;

/// Fills the drive pattern common to both frames: dot 2 couples
/// `|00⟩↔|01⟩` and `|10⟩↔|11⟩`, dot 1 couples `|00⟩↔|10⟩` and `|01⟩↔|11⟩`.
fn set_drive(h: &mut Mat4, dot1: f64, dot2: f64) {
    for (i, j, v) in [(0, 1, dot2), (2, 3, dot2), (0, 2, dot1), (1, 3, dot1)] {
        h[(i, j)] = real(v);
        h[(j, i)] = real(v);
    }
}

/// Full time-dependent Hamiltonian at time `t` (ps).
pub fn build_lab_hamiltonian(params: &SystemParams, t: f64, laser_on: bool) -> Mat4 {
    let p = params;
    let mut h = Mat4::zeros();
    h[(0, 0)] = real(p.omega0);
    h[(1, 1)] = real(p.omega0 + p.omega2);
    h[(2, 2)] = real(p.omega0 + p.omega1);
    h[(3, 3)] = real(p.omega_total() + p.v_biexciton);
    h[(1, 2)] = real(p.v_forster);
    h[(2, 1)] = real(p.v_forster);
    if laser_on {
        let carrier = (p.omega_laser * ps_to_inverse_mev(t)).cos();
        set_drive(&mut h, p.rabi1 * carrier, p.rabi2 * carrier);
    }
    h
}

/// Time-independent Hamiltonian in the frame rotating at `ω_l`, with the
/// counter-rotating terms dropped and the ground energy subtracted.
pub fn build_rwa_hamiltonian(params: &SystemParams) -> Mat4 {
    let p = params;
    let (d1, d2) = (p.detuning1(), p.detuning2());
    let mut h = Mat4::zeros();
    h[(1, 1)] = real(d2);
    h[(2, 2)] = real(d1);
    h[(3, 3)] = real(d1 + d2 + p.v_biexciton);
    h[(1, 2)] = real(p.v_forster);
    h[(2, 1)] = real(p.v_forster);
    set_drive(&mut h, p.half_rabi1(), p.half_rabi2());
    h
}

/// Second-order effective Hamiltonian of the `{|01⟩, |10⟩}` subspace.
///
/// Row/column 0 is `|01⟩`, row/column 1 is `|10⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveSubspace {
    /// `δ2 + αΩ′₂² − βΩ′₁²` (meV).
    pub diag01: f64,
    /// `δ1 + αΩ′₁² − βΩ′₂²` (meV).
    pub diag10: f64,
    /// `V_F + Ω′₁Ω′₂(α − β)` (meV).
    pub v_eff: f64,
    /// `1/δ1` (meV⁻¹).
    pub alpha: f64,
    /// `1/(δ2 + V_XX)` (meV⁻¹).
    pub beta: f64,
}

impl EffectiveSubspace {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.diag01, self.v_eff], [self.v_eff, self.diag10]]
    }

    /// Both eigenvalues, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.diag01 + self.diag10);
        let half_gap = self.gap() * 0.5;
        (mean - half_gap, mean + half_gap)
    }

    /// Level splitting `√((diag10 − diag01)² + 4V_eff²)`.
    pub fn gap(&self) -> f64 {
        (self.diag10 - self.diag01).hypot(2.0 * self.v_eff)
    }
}

pub fn effective_subspace(params: &SystemParams) -> Result<EffectiveSubspace> {
    let d1 = params.detuning1();
    let d2xx = params.detuning2() + params.v_biexciton;
    if d1 == 0.0 {
        return Err(Error::SingularDetuning { denominator: "δ1" });
    }
    if d2xx == 0.0 {
        return Err(Error::SingularDetuning { denominator: "δ2 + V_XX" });
    }
    let alpha = 1.0 / d1;
    let beta = 1.0 / d2xx;
    let (h1, h2) = (params.half_rabi1(), params.half_rabi2());
    Ok(EffectiveSubspace {
        diag01: params.detuning2() + alpha * h2 * h2 - beta * h1 * h1,
        diag10: d1 + alpha * h1 * h1 - beta * h2 * h2,
        v_eff: params.v_forster + h1 * h2 * (alpha - beta),
        alpha,
        beta,
    })
}

/// Left-hand quantities of the perturbative validity conditions against
/// their common right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// `|δ1 − δ2|`
    pub detuning_gap: f64,
    /// `|V_F|`
    pub forster: f64,
    /// `|Ω₁/2|`
    pub half_rabi1: f64,
    /// `|Ω₂/2|`
    pub half_rabi2: f64,
    /// `min(|δᵢ|, |δᵢ + V_XX|)` over both dots.
    pub rhs: f64,
    pub max_ratio: f64,
    pub threshold: f64,
    pub satisfied: bool,
}

impl ConditionReport {
    pub fn lhs_terms(&self) -> [(&'static str, f64); 4] {
        [
            ("detuning_gap", self.detuning_gap),
            ("forster", self.forster),
            ("half_rabi1", self.half_rabi1),
            ("half_rabi2", self.half_rabi2),
        ]
    }
}

pub fn check_conditions(params: &SystemParams, threshold: f64) -> ConditionReport {
    let (d1, d2, vxx) = (params.detuning1(), params.detuning2(), params.v_biexciton);
    let rhs = [d1.abs(), d2.abs(), (d1 + vxx).abs(), (d2 + vxx).abs()]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let detuning_gap = (d1 - d2).abs();
    let forster = params.v_forster.abs();
    let half_rabi1 = params.half_rabi1().abs();
    let half_rabi2 = params.half_rabi2().abs();
    let worst = detuning_gap.max(forster).max(half_rabi1).max(half_rabi2);
    let max_ratio = if worst == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        worst / rhs
    };
    ConditionReport {
        detuning_gap,
        forster,
        half_rabi1,
        half_rabi2,
        rhs,
        max_ratio,
        threshold,
        satisfied: max_ratio < threshold,
    }
}

/// `(δ1 − δ2) − (Ω′₂² − Ω′₁²)(α + β)`: zero exactly when the laser has
/// Stark-shifted the two single-exciton levels into resonance.
pub fn resonance_mismatch(params: &SystemParams) -> Result<f64> {
    let eff = effective_subspace(params)?;
    let (h1, h2) = (params.half_rabi1(), params.half_rabi2());
    Ok((params.detuning1() - params.detuning2()) - (h2 * h2 - h1 * h1) * (eff.alpha + eff.beta))
}

/// `Ω₂` (meV) that closes the detuning gap for `Ω₁ = ratio·Ω₂`. Only the
/// detunings, `V_XX` and `ω_l` of `params` are used.
pub fn solve_resonant_rabi(params: &SystemParams, ratio: f64) -> Result<f64> {
    let eff = effective_subspace(params)?;
    let gap = params.detuning1() - params.detuning2();
    if gap == 0.0 {
        return Ok(0.0);
    }
    let spread = 1.0 - ratio * ratio;
    if spread.abs() < 1e-12 {
        return Err(Error::DegenerateRabiRatio { gap });
    }
    let radicand = gap / (spread * (eff.alpha + eff.beta));
    if !(radicand >= 0.0) {
        return Err(Error::NoRealSolution { radicand });
    }
    Ok(2.0 * radicand.sqrt())
}

/// As [`solve_resonant_rabi`], treating the detunings as bare lab-frame values
/// and folding in the counter-rotating shifts, iterated to self-consistency.
pub fn solve_resonant_rabi_corrected(params: &SystemParams, ratio: f64) -> Result<f64> {
    let mut rabi = solve_resonant_rabi(params, ratio)?;
    for _ in 0..100 {
        let shift = counter_rotating_correction(&params.with_rabi(rabi, ratio))?;
        let dressed = params.with_detunings(
            params.detuning1() + shift.delta1,
            params.detuning2() + shift.delta2,
        );
        let next = solve_resonant_rabi(&dressed, ratio)?;
        if (next - rabi).abs() <= 1e-13 * next.abs().max(1.0) {
            return Ok(next);
        }
        rabi = next;
    }
    Ok(rabi)
}

/// Extra Stark shift of each dot transition from the counter-rotating terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterRotatingShift {
    /// `2Ω′₁²/(2ω_l + δ1)` (meV)
    pub delta1: f64,
    /// `2Ω′₂²/(2ω_l + δ2)` (meV)
    pub delta2: f64,
    /// `(δ1 − δ2) + (Δ2 − Δ1)`: bare detuning difference needed in a lab-frame
    /// run to reproduce the rotating-frame resonance.
    pub corrected_difference: f64,
}

pub fn counter_rotating_correction(params: &SystemParams) -> Result<CounterRotatingShift> {
    let (d1, d2) = (params.detuning1(), params.detuning2());
    let den1 = 2.0 * params.omega_laser + d1;
    let den2 = 2.0 * params.omega_laser + d2;
    if den1 == 0.0 {
        return Err(Error::SingularDetuning { denominator: "2ω_l + δ1" });
    }
    if den2 == 0.0 {
        return Err(Error::SingularDetuning { denominator: "2ω_l + δ2" });
    }
    let (h1, h2) = (params.half_rabi1(), params.half_rabi2());
    let delta1 = 2.0 * h1 * h1 / den1;
    let delta2 = 2.0 * h2 * h2 / den2;
    Ok(CounterRotatingShift {
        delta1,
        delta2,
        corrected_difference: (d1 - d2) + (delta2 - delta1),
    })
}

/// Lab-frame parameters whose detunings, once shifted by the counter-rotating
/// correction, equal the detunings of `params`.
///
/// Each `δᵢ` is solved from `δᵢ + 2Ω′ᵢ²/(2ω_l + δᵢ) = target` by fixed-point
/// iteration; the map contracts by `~(Ω′/2ω_l)²`.
pub fn compensate_counter_rotating(params: &SystemParams) -> Result<SystemParams> {
    let targets = [params.detuning1(), params.detuning2()];
    let mut current = targets;
    for _ in 0..50 {
        let shift = counter_rotating_correction(&params.with_detunings(current[0], current[1]))?;
        let next = [targets[0] - shift.delta1, targets[1] - shift.delta2];
        let change = (next[0] - current[0]).abs().max((next[1] - current[1]).abs());
        current = next;
        if change < 1e-14 * targets[0].abs().max(1.0) {
            break;
        }
    }
    Ok(params.with_detunings(current[0], current[1]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnticrossingPoint {
    pub omega2: f64,
    pub lower: f64,
    pub upper: f64,
}

impl AnticrossingPoint {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Effective-subspace eigenvalues along a grid of `Ω₂`, with `Ω₁ = ratio·Ω₂`.
/// Branches are sorted by value at each point.
pub fn anticrossing_sweep(
    params: &SystemParams,
    ratio: f64,
    omega2_grid: &[f64],
) -> Result<Vec<AnticrossingPoint>> {
    if omega2_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    omega2_grid
        .iter()
        .map(|&omega2| anticrossing_point(params, ratio, omega2))
        .collect()
}

pub fn anticrossing_point(params: &SystemParams, ratio: f64, omega2: f64) -> Result<AnticrossingPoint> {
    let (lower, upper) = effective_subspace(&params.with_rabi(omega2, ratio))?.eigenvalues();
    Ok(AnticrossingPoint { omega2, lower, upper })
}

/// Grid point with the smallest gap; the first one wins ties.
pub fn minimum_gap(points: &[AnticrossingPoint]) -> Option<AnticrossingPoint> {
    points.iter().copied().reduce(|best, p| if p.gap() < best.gap() { p } else { best })
}

/// Exact eigenvalues of the rotating-frame Hamiltonian belonging to the two
/// eigenvectors with the largest weight on `{|01⟩, |10⟩}`, ascending.
pub fn single_exciton_levels(params: &SystemParams) -> (f64, f64) {
    let (values, vectors) = hermitian_eigen(&build_rwa_hamiltonian(params));
    let weight = |k: usize| vectors[(1, k)].norm_sqr() + vectors[(2, k)].norm_sqr();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| weight(b).total_cmp(&weight(a)));
    let (a, b) = (values[order[0]], values[order[1]]);
    (a.min(b), a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermiticity_error;
    use crate::presets;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn bare(delta1: f64, delta2: f64) -> SystemParams {
        SystemParams { v_forster: 0.1, ..SystemParams::from_detunings(delta1, delta2, 1500.0) }
    }

    #[test]
    fn lab_laser_off_is_diagonal_plus_forster() {
        let p = SystemParams { omega1: 1800.0, omega2: 1790.0, v_forster: 0.1, ..Default::default() };
        let h = build_lab_hamiltonian(&p, 0.3, false);
        let expected = [0.0, 1790.0, 1800.0, 3590.0];
        for i in 0..4 {
            for j in 0..4 {
                let want = match (i, j) {
                    _ if i == j => expected[i],
                    (1, 2) | (2, 1) => 0.1,
                    _ => 0.0,
                };
                assert_eq!(h[(i, j)], real(want), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn lab_drive_at_t0() {
        let p = presets::rwa_transfer();
        let h = build_lab_hamiltonian(&p, 0.0, true);
        assert_eq!(h[(0, 1)], real(p.rabi2));
        assert_eq!(h[(0, 2)], real(p.rabi1));
        assert_eq!(h[(1, 3)], real(p.rabi1));
        assert_eq!(h[(2, 3)], real(p.rabi2));
        assert_eq!(h[(0, 3)], real(0.0));
    }

    #[test]
    fn ground_offset_shifts_spectrum_uniformly() {
        let p = presets::rwa_transfer();
        let shifted = SystemParams { omega0: 17.5, ..p };
        for &t in &[0.0, 1.234e-3, 7.7] {
            let (a, _) = hermitian_eigen(&build_lab_hamiltonian(&p, t, true));
            let (b, _) = hermitian_eigen(&build_lab_hamiltonian(&shifted, t, true));
            for k in 0..4 {
                assert_relative_eq!(b[k] - a[k], 17.5, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn rotating_frame_average_of_lab_is_rwa() {
        let p = SystemParams { v_biexciton: 0.4, omega0: 3.0, ..presets::rwa_transfer() };
        let hbar = crate::units::hbar_mev_ps();
        let period = crate::units::period_ps(p.omega_laser);
        let excitations = [0.0, 1.0, 1.0, 2.0];
        let samples = 256;
        let mut avg = Mat4::zeros();
        for k in 0..samples {
            let t = period * k as f64 / samples as f64;
            let u = excitations.map(|n| crate::linalg::phase(n * p.omega_laser * t / hbar));
            let mut h = crate::linalg::rotate_diagonal(&build_lab_hamiltonian(&p, t, true), &u);
            for (i, n) in excitations.iter().enumerate() {
                h[(i, i)] -= real(n * p.omega_laser + p.omega0);
            }
            avg += h / real(samples as f64);
        }
        let diff = avg - build_rwa_hamiltonian(&p);
        assert!(diff.norm() < 1e-9, "{diff}");
    }

    #[test]
    fn rwa_entries_at_reference_drive() {
        let h = build_rwa_hamiltonian(&presets::rwa_transfer());
        assert_relative_eq!(h[(0, 1)].re, 20.48, epsilon = 1e-12);
        assert_relative_eq!(h[(0, 2)].re, 11.264, epsilon = 1e-12);
        assert_eq!(hermiticity_error(&h), 0.0);
        assert_eq!(h, h.adjoint());
    }

    #[test]
    fn rwa_undriven() {
        let p = SystemParams { v_biexciton: 0.7, ..bare(292.59, 290.59) };
        let h = build_rwa_hamiltonian(&p);
        assert_relative_eq!(h[(1, 1)].re, 290.59, epsilon = 1e-12);
        assert_relative_eq!(h[(2, 2)].re, 292.59, epsilon = 1e-12);
        assert_relative_eq!(h[(3, 3)].re, 292.59 + 290.59 + 0.7, epsilon = 1e-12);
        assert_eq!(h[(1, 2)].re, 0.1);
        assert_eq!(h[(0, 1)].re, 0.0);
    }

    #[test]
    fn effective_subspace_reference_values() {
        let eff = effective_subspace(&presets::rwa_transfer()).unwrap();
        assert_relative_eq!(eff.alpha, 3.4178e-3, max_relative = 1e-4);
        assert_relative_eq!(eff.beta, 3.4413e-3, max_relative = 1e-4);
        assert_relative_eq!(eff.v_eff, 0.09457, max_relative = 1e-4);
        let m = eff.matrix();
        assert_eq!(m[0][1], m[1][0]);
    }

    #[test]
    fn effective_subspace_undriven() {
        let p = bare(292.59, 290.59);
        let eff = effective_subspace(&p).unwrap();
        assert_eq!(eff.v_eff, 0.1);
        assert_eq!(eff.diag01, p.detuning2());
        assert_eq!(eff.diag10, p.detuning1());
    }

    #[test]
    fn equal_denominators_leave_forster_untouched() {
        let p = bare(291.0, 291.0).with_rabi(35.0, 0.4);
        assert_eq!(effective_subspace(&p).unwrap().v_eff, 0.1);
    }

    #[test]
    fn singular_detunings_are_named() {
        let p = bare(0.0, 290.0);
        assert_eq!(
            effective_subspace(&p).unwrap_err(),
            Error::SingularDetuning { denominator: "δ1" }
        );
        let p = SystemParams { v_biexciton: -290.0, ..bare(292.0, 290.0) };
        assert_eq!(
            effective_subspace(&p).unwrap_err(),
            Error::SingularDetuning { denominator: "δ2 + V_XX" }
        );
    }

    #[test]
    fn conditions_at_reference_drive() {
        let r = check_conditions(&presets::rwa_transfer(), DEFAULT_CONDITION_THRESHOLD);
        assert_relative_eq!(r.max_ratio, 20.48 / 290.59, max_relative = 1e-12);
        assert!((r.max_ratio - 0.070).abs() < 5e-4);
        assert!(r.satisfied);
        assert_relative_eq!(r.rhs, 290.59, max_relative = 1e-12);
    }

    #[test]
    fn conditions_trivial_and_violated() {
        let p = SystemParams { v_forster: 0.0, ..bare(290.0, 290.0) };
        let r = check_conditions(&p, 0.1);
        assert_eq!(r.max_ratio, 0.0);
        assert!(r.satisfied);

        let p = SystemParams { rabi1: 2.0 * 290.0, ..bare(290.0, 289.0) };
        let r = check_conditions(&p, 0.1);
        assert!(r.max_ratio >= 0.5);
        assert!(!r.satisfied);
    }

    #[test]
    fn mismatch_reference_value() {
        let m = resonance_mismatch(&presets::rwa_transfer()).unwrap();
        assert!((m - (-0.007)).abs() < 1e-3, "mismatch {m}");
    }

    #[test]
    fn mismatch_special_cases() {
        let p = bare(292.59, 290.59).with_rabi(30.0, 1.0);
        assert_relative_eq!(resonance_mismatch(&p).unwrap(), 2.0, max_relative = 1e-12);
        let p = bare(291.0, 291.0).with_rabi(30.0, 1.0);
        assert_eq!(resonance_mismatch(&p).unwrap(), 0.0);
    }

    #[test]
    fn resonant_rabi_reference() {
        let omega2 = solve_resonant_rabi(&presets::anticrossing(), presets::RABI_RATIO).unwrap();
        assert!((omega2 - 40.9).abs() < 0.05, "Ω2 = {omega2}");
        let back = presets::anticrossing().with_rabi(omega2, presets::RABI_RATIO);
        assert!(resonance_mismatch(&back).unwrap().abs() < 1e-9);
    }

    #[test]
    fn resonant_rabi_edge_cases() {
        assert_eq!(solve_resonant_rabi(&bare(291.0, 291.0), 0.55).unwrap(), 0.0);
        assert!(matches!(
            solve_resonant_rabi(&bare(292.0, 290.0), 1.0),
            Err(Error::DegenerateRabiRatio { .. })
        ));
        // Dot 1 more strongly driven pushes the levels further apart.
        assert!(matches!(
            solve_resonant_rabi(&bare(292.0, 290.0), 1.5),
            Err(Error::NoRealSolution { .. })
        ));
    }

    #[test]
    fn corrected_solution_lowers_drive_for_bare_lab_detunings() {
        let p = presets::anticrossing();
        let plain = solve_resonant_rabi(&p, 0.55).unwrap();
        let corrected = solve_resonant_rabi_corrected(&p, 0.55).unwrap();
        assert!(corrected < plain);
        let dressed_gap = {
            let with = p.with_rabi(corrected, 0.55);
            let s = counter_rotating_correction(&with).unwrap();
            resonance_mismatch(&with.with_detunings(
                with.detuning1() + s.delta1,
                with.detuning2() + s.delta2,
            ))
            .unwrap()
        };
        assert!(dressed_gap.abs() < 1e-9, "{dressed_gap}");
    }

    #[test]
    fn counter_rotating_reference() {
        let s = counter_rotating_correction(&presets::rwa_transfer()).unwrap();
        assert!((s.delta2 - s.delta1 - 0.178).abs() < 1e-3);
        assert!((s.corrected_difference - 2.18).abs() < 0.01);
    }

    #[test]
    fn counter_rotating_vanishes() {
        let s = counter_rotating_correction(&bare(292.0, 290.0)).unwrap();
        assert_eq!((s.delta1, s.delta2), (0.0, 0.0));
        let mut last = f64::INFINITY;
        for &wl in &[1.0e3, 1.0e4, 1.0e5, 1.0e6] {
            let p = SystemParams { omega_laser: wl, ..bare(292.0, 290.0) }
                .with_detunings(292.0, 290.0)
                .with_rabi(40.0, 0.55);
            let d = counter_rotating_correction(&p).unwrap().delta2;
            assert!(d < last);
            last = d;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn compensation_restores_target_detunings() {
        let target = presets::rwa_transfer();
        let lab = compensate_counter_rotating(&target).unwrap();
        let s = counter_rotating_correction(&lab).unwrap();
        assert_relative_eq!(lab.detuning1() + s.delta1, target.detuning1(), epsilon = 1e-11);
        assert_relative_eq!(lab.detuning2() + s.delta2, target.detuning2(), epsilon = 1e-11);
        assert!((lab.detuning1() - lab.detuning2() - 2.18).abs() < 0.01);
    }

    #[test]
    fn anticrossing_undriven_end() {
        let pts = anticrossing_sweep(&presets::anticrossing(), 0.55, &[0.0]).unwrap();
        let (lo, hi) = (pts[0].lower, pts[0].upper);
        assert!((lo - 290.59).abs() < 0.01 && (hi - 292.59).abs() < 0.01);
        assert!((pts[0].gap() - 2.0).abs() < 0.02);
    }

    #[test]
    fn anticrossing_empty_grid() {
        assert_eq!(anticrossing_sweep(&presets::anticrossing(), 0.55, &[]), Err(Error::EmptyGrid));
    }

    #[test]
    fn gap_at_resonance_is_twice_coupling() {
        let p = presets::anticrossing();
        let omega2 = solve_resonant_rabi(&p, 0.55).unwrap();
        let pt = anticrossing_point(&p, 0.55, omega2).unwrap();
        let v = effective_subspace(&p.with_rabi(omega2, 0.55)).unwrap().v_eff;
        assert_relative_eq!(pt.gap(), 2.0 * v.abs(), max_relative = 1e-9);
    }

    #[test]
    fn laser_only_anticrossing() {
        let p = SystemParams { v_forster: 0.0, ..presets::anticrossing() };
        let omega2 = solve_resonant_rabi(&p, 0.55).unwrap();
        let pt = anticrossing_point(&p, 0.55, omega2).unwrap();
        let eff = effective_subspace(&p.with_rabi(omega2, 0.55)).unwrap();
        let (h1, h2) = (0.55 * omega2 / 2.0, omega2 / 2.0);
        assert_relative_eq!(pt.gap(), 2.0 * (h1 * h2 * (eff.alpha - eff.beta)).abs(), max_relative = 1e-8);
    }

    #[test]
    fn sweep_is_continuous() {
        let grid: Vec<f64> = (0..=800).map(|k| k as f64 * 0.1).collect();
        let pts = anticrossing_sweep(&presets::anticrossing(), 0.55, &grid).unwrap();
        for w in pts.windows(2) {
            assert!((w[1].lower - w[0].lower).abs() < 0.05);
            assert!((w[1].upper - w[0].upper).abs() < 0.05);
        }
    }

    #[test]
    fn exact_levels_near_effective_levels() {
        let p = presets::rwa_transfer();
        let (lo, hi) = single_exciton_levels(&p);
        let (elo, ehi) = effective_subspace(&p).unwrap().eigenvalues();
        let budget = 5.0 * check_conditions(&p, 0.1).max_ratio.powi(2) * p.detuning1().abs();
        assert!((lo - elo).abs() < budget && (hi - ehi).abs() < budget);
    }

    fn arb_params() -> impl Strategy<Value = SystemParams> {
        (
            200.0f64..400.0,
            -3.0f64..3.0,
            0.0f64..0.5,
            -1.0f64..1.0,
            0.0f64..40.0,
            0.0f64..1.0,
            1000.0f64..2000.0,
        )
            .prop_map(|(d1, gap, vf, vxx, omega2, ratio, wl)| SystemParams {
                v_forster: vf,
                v_biexciton: vxx,
                ..SystemParams::from_detunings(d1, d1 - gap, wl).with_rabi(omega2, ratio)
            })
    }

    proptest! {
        #[test]
        fn builders_are_hermitian(p in arb_params(), t in 0.0f64..50.0) {
            prop_assert_eq!(hermiticity_error(&build_lab_hamiltonian(&p, t, true)), 0.0);
            prop_assert_eq!(hermiticity_error(&build_rwa_hamiltonian(&p)), 0.0);
        }

        #[test]
        fn mismatch_equals_diagonal_difference(p in arb_params()) {
            let eff = effective_subspace(&p).unwrap();
            let m = resonance_mismatch(&p).unwrap();
            let d = eff.diag10 - eff.diag01;
            prop_assert!((m - d).abs() <= 1e-12 * d.abs().max(1.0));
        }

        #[test]
        fn second_order_error_budget(p in arb_params()) {
            let report = check_conditions(&p, DEFAULT_CONDITION_THRESHOLD);
            prop_assume!(report.satisfied);
            let (lo, hi) = single_exciton_levels(&p);
            let (elo, ehi) = effective_subspace(&p).unwrap().eigenvalues();
            let budget = 5.0 * report.max_ratio.powi(2) * p.detuning1().abs();
            prop_assert!((lo - elo).abs() < budget, "{} vs {} (budget {})", lo, elo, budget);
            prop_assert!((hi - ehi).abs() < budget);
        }

        #[test]
        fn solved_drive_is_resonant(d1 in 200.0f64..400.0, gap in 0.1f64..4.0, ratio in 0.0f64..0.9) {
            let p = SystemParams::from_detunings(d1, d1 - gap, 1500.0);
            let omega2 = solve_resonant_rabi(&p, ratio).unwrap();
            let m = resonance_mismatch(&p.with_rabi(omega2, ratio)).unwrap();
            prop_assert!(m.abs() < 1e-9, "mismatch {}", m);
        }

        #[test]
        fn coupling_continuous_at_zero_drive(p in arb_params()) {
            prop_assert_eq!(effective_subspace(&p.laser_off()).unwrap().v_eff, p.v_forster);
        }
    }
}
