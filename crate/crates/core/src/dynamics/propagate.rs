//! Fixed-step RK4 in the interaction picture of the static diagonal.
//!
//! Writing `H(t) = D + V(t)` with `D` the (time-independent) diagonal, the
//! state is propagated as `φ = e^{iDt/ħ}ψ` under `V_I(t) = e^{iDt/ħ}V(t)e^{−iDt/ħ}`.
//! The transformation is exact; it only removes the large diagonal energies
//! (~ω_l in the lab frame) from the generator so that RK4 sees couplings of a
//! few tens of meV instead. Local lowering operators pick up the same phases
//! and are rotated the same way.

use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{CollapseChannel, Frame, IntegratorConfig};
use crate::hamiltonian::{build_lab_hamiltonian, build_rwa_hamiltonian};
use crate::linalg::{c, phase, real, rotate_diagonal, C64, Mat4, Vec4};
use crate::params::{PulseSchedule, SystemParams};
use crate::units::hbar_mev_ps;
use crate::{Error, Result};

/// Smallest step the tolerance check may shrink to, relative to `dt_max`.
const MIN_STEP_FRACTION: f64 = 1.0 / 4096.0;

#[derive(Debug, Clone)]
pub(crate) struct Generator {
    energies: [f64; 4],
    static_part: Mat4,
    drive: Mat4,
    carrier: Option<f64>,
}

fn split_diagonal(h: &Mat4) -> ([f64; 4], Mat4) {
    let energies = core::array::from_fn(|i| h[(i, i)].re);
    let mut off = *h;
    for i in 0..4 {
        off[(i, i)] = real(0.0);
    }
    (energies, off)
}

impl Generator {
    pub(crate) fn new(params: &SystemParams, frame: Frame, laser_on: bool) -> Self {
        let (on, off) = match frame {
            Frame::Lab => (
                build_lab_hamiltonian(params, 0.0, true),
                build_lab_hamiltonian(params, 0.0, false),
            ),
            Frame::Rwa => (build_rwa_hamiltonian(params), build_rwa_hamiltonian(&params.laser_off())),
        };
        let (energies, static_part) = split_diagonal(&off);
        let drive = if laser_on { split_diagonal(&on).1 - static_part } else { Mat4::zeros() };
        let carrier = match frame {
            Frame::Lab if laser_on => Some(params.omega_laser),
            _ => None,
        };
        Self { energies, static_part, drive, carrier }
    }

    /// `e^{iD_j t/ħ}` for each basis state.
    pub(crate) fn phases(&self, t: f64) -> [C64; 4] {
        self.energies.map(|e| phase(e * t / hbar_mev_ps()))
    }

    /// `−i V_I(t)/ħ` in ps⁻¹.
    fn interaction(&self, t: f64) -> (Mat4, [C64; 4]) {
        let v = match self.carrier {
            Some(wl) => self.static_part + self.drive * real((wl * t / hbar_mev_ps()).cos()),
            None => self.static_part + self.drive,
        };
        let p = self.phases(t);
        (rotate_diagonal(&v, &p) * c(0.0, -1.0 / hbar_mev_ps()), p)
    }
}

pub(crate) struct Dissipator {
    ops: Vec<(Mat4, Mat4, f64)>,
}

impl Dissipator {
    pub(crate) fn new(channels: &[CollapseChannel]) -> Self {
        let ops = channels
            .iter()
            .filter(|ch| ch.rate() > 0.0)
            .map(|ch| (*ch.operator(), ch.number_operator() * real(0.5), ch.rate()))
            .collect();
        Self { ops }
    }
}

/// `ρ̇ = −i[V_I, ρ]/ħ + Σ Γ (L ρ L† − ½{L†L, ρ})` with `L` rotated by `p`.
fn lindblad_rhs(minus_i_v: &Mat4, p: &[C64; 4], diss: &Dissipator, rho: &Mat4) -> Mat4 {
    let mut out = minus_i_v * rho - rho * minus_i_v;
    for (op, half_number, rate) in &diss.ops {
        let l = rotate_diagonal(op, p);
        out += (l * rho * l.adjoint() - half_number * rho - rho * half_number) * real(*rate);
    }
    out
}

pub(crate) trait Propagated: Copy {
    fn axpy(&self, h: f64, k: &Self) -> Self;
    fn combine(&self, h: f64, k: [&Self; 4]) -> Self;
    fn magnitude(&self) -> f64;
    fn diff(&self, other: &Self) -> f64;
}

impl Propagated for Vec4 {
    fn axpy(&self, h: f64, k: &Self) -> Self {
        self + k * real(h)
    }
    fn combine(&self, h: f64, k: [&Self; 4]) -> Self {
        self + (k[0] + k[1] * real(2.0) + k[2] * real(2.0) + k[3]) * real(h / 6.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn diff(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl Propagated for Mat4 {
    fn axpy(&self, h: f64, k: &Self) -> Self {
        self + k * real(h)
    }
    fn combine(&self, h: f64, k: [&Self; 4]) -> Self {
        self + (k[0] + k[1] * real(2.0) + k[2] * real(2.0) + k[3]) * real(h / 6.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn diff(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

/// Right-hand side of an interaction-picture equation of motion.
pub(crate) trait Rhs<Y> {
    fn eval(&self, t: f64, y: &Y) -> Y;
}

pub(crate) struct SchrodingerRhs<'a>(pub &'a Generator);

impl Rhs<Vec4> for SchrodingerRhs<'_> {
    fn eval(&self, t: f64, y: &Vec4) -> Vec4 {
        self.0.interaction(t).0 * y
    }
}

pub(crate) struct LindbladRhs<'a> {
    pub(crate) generator: &'a Generator,
    pub(crate) dissipator: &'a Dissipator,
}

impl Rhs<Mat4> for LindbladRhs<'_> {
    fn eval(&self, t: f64, y: &Mat4) -> Mat4 {
        let (v, p) = self.generator.interaction(t);
        lindblad_rhs(&v, &p, self.dissipator, y)
    }
}

fn rk4_step<Y: Propagated, F: Rhs<Y>>(f: &F, t: f64, y: &Y, h: f64) -> Y {
    let k1 = f.eval(t, y);
    let k2 = f.eval(t + 0.5 * h, &y.axpy(0.5 * h, &k1));
    let k3 = f.eval(t + 0.5 * h, &y.axpy(0.5 * h, &k2));
    let k4 = f.eval(t + h, &y.axpy(h, &k3));
    y.combine(h, [&k1, &k2, &k3, &k4])
}

/// Largest step `≤ h` whose step-doubling error estimate at `(t, y)` meets
/// the relative tolerance.
fn admissible_step<Y: Propagated, F: Rhs<Y>>(f: &F, t: f64, y: &Y, h: f64, tol: f64) -> Result<f64> {
    let floor = h * MIN_STEP_FRACTION;
    let scale = y.magnitude().max(f64::MIN_POSITIVE);
    let mut h = h;
    loop {
        let full = rk4_step(f, t, y, h);
        let half = rk4_step(f, t + 0.5 * h, &rk4_step(f, t, y, 0.5 * h), 0.5 * h);
        // Richardson: the half-step result is off by about (full − half)/15.
        let err = full.diff(&half) / 15.0 / scale;
        if err <= tol {
            return Ok(h);
        }
        h *= 0.5;
        if h < floor {
            return Err(Error::StepUnderflow { t });
        }
    }
}

/// Sample times and integration breakpoints for a schedule.
pub(crate) fn sample_grid(schedule: &PulseSchedule, stride: f64) -> Vec<f64> {
    let t0 = schedule.t_start();
    let window = schedule.t_end() - t0;
    let n = (window / stride + 1e-9).floor() as usize;
    (0..=n).map(|k| t0 + k as f64 * stride).collect()
}

/// Integrates from `t0` through every sample time, calling `record` at each.
///
/// Steps never straddle a segment boundary. Within a segment the step is the
/// admissible step chosen at its start, shrunk so the sub-interval splits
/// evenly.
pub(crate) fn integrate<Y, F, G, R>(
    schedule: &PulseSchedule,
    config: &IntegratorConfig,
    mut rhs_for: G,
    y0: Y,
    mut record: R,
) -> Result<()>
where
    Y: Propagated,
    F: Rhs<Y>,
    G: FnMut(bool) -> F,
    R: FnMut(f64, &Y) -> Result<()>,
{
    let samples = sample_grid(schedule, config.sample_stride);
    let mut y = y0;
    let mut t = samples[0];
    record(t, &y)?;

    let mut breakpoints: Vec<f64> = samples[1..].to_vec();
    breakpoints.extend(
        schedule
            .segments()
            .iter()
            .map(|s| s.t_start)
            .filter(|&b| b > t && b < *samples.last().unwrap()),
    );
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));

    let mut sample_iter = samples[1..].iter().peekable();
    let mut current: Option<(bool, F, f64)> = None;
    for &next in &breakpoints {
        let on = schedule.laser_on_at(0.5 * (t + next));
        let needs_new = match &current {
            Some((state, _, _)) => *state != on,
            None => true,
        };
        if needs_new {
            let f = rhs_for(on);
            let h = admissible_step(&f, t, &y, config.dt_max, config.tolerance)?;
            current = Some((on, f, h));
        }
        let (_, f, h) = current.as_ref().unwrap();
        let span = next - t;
        let n = ((span / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let step = span / n as f64;
        for k in 0..n {
            y = rk4_step(f, t + k as f64 * step, &y, step);
        }
        t = next;
        while let Some(&&s) = sample_iter.peek() {
            if (s - t).abs() <= 1e-12 * t.abs().max(1.0) {
                record(s, &y)?;
                sample_iter.next();
            } else {
                break;
            }
        }
    }
    Ok(())
}
