//! Numerical tolerances used across the crate, in one place.

/// Turning points are refined in `x` until the bracket is narrower than this.
pub const TURNING_POINT_BISECT_TOL: f64 = 1e-12;

/// Turning points closer than this are merged into one (and flagged as a
/// tangency, since the rule assumes simple turning points).
pub const TURNING_POINT_MERGE_TOL: f64 = 1e-10;

/// Sign-scan resolution for polynomial segments: points per segment.
pub const POLY_SCAN_POINTS: usize = 1024;

/// Continuity test for potential values across a segment joint.
pub const JOINT_CONTINUITY_TOL: f64 = 1e-9;

/// Event bisection tolerance on the trace (ψ zeros, φ zeros, φ = ±κ).
pub const EVENT_BISECT_TOL: f64 = 1e-12;

/// Renormalize `(ψ, ψ′)` when either magnitude exceeds this.
pub const RENORM_THRESHOLD: f64 = 1e100;

/// Quantization report: a state counts as on-rule when the total residual
/// is within this fraction of π.
pub const REPORT_TOL_PI_FRACTION: f64 = 1e-3;

/// Energy bisection tolerance for the shooting and analytic solvers.
pub const SOLVER_ENERGY_TOL: f64 = 1e-9;

/// Solver windows are clamped this far inside tangency energies
/// (well bottoms, barrier tops, tail heights).
pub const WINDOW_CLAMP: f64 = 1e-6;

/// Default number of Runge–Kutta steps over the full trace domain.
pub const DEFAULT_N_STEPS: usize = 20_000;

/// Default number of films for the forbidden-region recursion.
pub const DEFAULT_N_FILMS: usize = 4096;
