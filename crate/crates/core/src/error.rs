use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("invalid pulse schedule: {0}")]
    InvalidSchedule(String),

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("not a density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("singular detuning: {denominator} vanishes")]
    SingularDetuning { denominator: &'static str },

    #[error("Rabi ratio² = 1 cannot close a detuning gap of {gap} meV")]
    DegenerateRabiRatio { gap: f64 },

    #[error("no real resonant Rabi frequency (radicand {radicand})")]
    NoRealSolution { radicand: f64 },

    #[error("effective coupling vanishes; the dots are decoupled")]
    Decoupled,

    #[error("empty parameter grid")]
    EmptyGrid,

    #[error("integrator config: {0}")]
    InvalidConfig(String),

    #[error("step size underflow at t = {t} ps (tolerance unreachable)")]
    StepUnderflow { t: f64 },

    #[error("density matrix left the physical set at t = {t} ps: {reason}")]
    Unphysical { t: f64, reason: String },

    #[error("Floquet quasi-energies did not converge by N = {n_max}: last estimates {previous} and {last} meV")]
    NotConverged { n_max: usize, previous: f64, last: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(&'static str),
}
