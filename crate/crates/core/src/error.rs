//! Error type shared by every module in the crate.
//!
//! Variants are grouped by the stage that raises them: construction/evaluation
//! of closed-form solutions, the finite-volume solver, and the trace-fitting
//! layer. Callers that need to map failures onto process exit codes can match
//! on the variant class (see the CLI crate).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // --- closed-form solution preconditions ---
    /// Slow diffusion requires m > 1; at m ≤ 1 disturbances propagate
    /// infinitely fast and there are no sharp interfaces to track.
    #[error("diffusion exponent must satisfy m > 1, got m = {0}")]
    ExponentOutOfRange(f64),
    #[error("space dimension must be at least 1, got {0}")]
    DimensionOutOfRange(usize),
    #[error("density must be non-negative, got U = {0}")]
    NegativeDensity(f64),
    #[error("pressure must be non-negative, got V = {0}")]
    NegativePressure(f64),
    #[error("amplitude must be positive, got A = {0}")]
    AmplitudeOutOfRange(f64),
    #[error("source center must satisfy xi > 0, got xi = {0}")]
    CenterOutOfRange(f64),
    #[error("release time must satisfy tau < 0, got tau = {0}")]
    ReleaseTimeOutOfRange(f64),
    #[error("point-mass solution is undefined at or before its release: t = {t}, tau = {tau}")]
    BeforeRelease { t: f64, tau: f64 },
    #[error("time must lie in the pre-focus window ({tau}, 0], got t = {t}")]
    OutsidePreFocusWindow { t: f64, tau: f64 },
    #[error("wave speed must be positive, got c = {0}")]
    WaveSpeedOutOfRange(f64),
    #[error("hole-filling interface is only defined for t <= 0, got t = {0}")]
    AfterFocus(f64),
    #[error("scaled coordinate {name} = {value} outside its valid range {range}")]
    ScaledCoordinateOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("quadrature did not reach absolute tolerance {tol} (best estimate {estimate})")]
    QuadratureTolerance { tol: f64, estimate: f64 },

    // --- solver ---
    #[error("solver configuration: {0}")]
    SolverConfig(String),
    #[error("initial pressure violates the hole condition (positive at r = {0})")]
    NoHole(f64),
    #[error("initial pressure must be non-negative, got V0({r}) = {v}")]
    NegativeInitialPressure { r: f64, v: f64 },
    #[error("forced time step dt = {dt} exceeds the stability bound {bound}")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("outer interface reached r = {b}; domain rmax = {rmax} is too small")]
    DomainTooSmall { b: f64, rmax: f64 },
    #[error("state has no cell above the interface threshold")]
    NoInterface,

    // --- trace fitting / asymptotics ---
    #[error("trace has no focus time; normalize requires a detected focus")]
    NotFocused,
    #[error("fit window holds {got} usable samples, need at least {need}")]
    InsufficientSamples { got: usize, need: usize },
    #[error("fitted interface slope is not positive ({0}); trace does not focus")]
    NonPositiveSlope(f64),
    #[error("fit window fractions must satisfy 0 < hi_frac < lo_frac < 1, got lo = {lo}, hi = {hi}")]
    WindowOutOfRange { lo: f64, hi: f64 },
    #[error("ray eta = {eta} meets the wave on or beyond its interface (1 + c*eta = {edge})")]
    RayOutsideSupport { eta: f64, edge: f64 },
    #[error("similarity exponent must be positive and finite, got alpha = {0}")]
    SimilarityExponentOutOfRange(f64),
    #[error("snapshot surface needs {0}")]
    SurfaceGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
