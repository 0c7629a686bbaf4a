//! Bound states of one-dimensional Schrödinger problems in multi-well
//! potentials, and verification of the generalized exact quantization rule.
//!
//! The library works with the reduced equation `ψ″ = (V(x) − E) ψ` (the
//! ħ²/2m coefficient is absorbed into the units). Its pieces:
//!
//! * [`potential`] — piecewise-analytic confining potentials: evaluation,
//!   slopes, turning points, region partitions.
//! * [`specfun`] — log-gamma, Kummer's M, the Hermite function of real
//!   order, and the parabolic cylinder function D.
//! * [`propagate`] — Runge–Kutta propagation of `(ψ, ψ′)` from decay
//!   boundary conditions, the logarithmic-derivative trace with its node
//!   and crossing ledger, and the thin-film recursion for forbidden
//!   regions.
//! * [`quantize`] — momentum and correction integrals, boundary terms at
//!   potential jumps, and the assembled quantization report stating how
//!   close the rule comes to an integer multiple of π.
//! * [`solve`] — eigenvalues by three mutually checking routes: generic
//!   shooting, closed-form transcendental matching for the built-in
//!   potentials, and a finite-difference oracle.
//! * [`cli`] — the configuration-driven command-line front end.
//!
//! The guide under `book/` walks through the concepts; its code snippets
//! are compiled as doc-tests (see the `guide` module).

pub mod cli;
pub mod potential;
pub mod propagate;
pub mod quantize;
pub mod solve;
pub mod specfun;
pub mod tolerances;

mod dd;
mod gauss;
mod guide;

pub use potential::{Potential, Region, RegionKind, RegionPartition, Segment, SegmentForm};
pub use propagate::{Direction, FilmResult, LogDerivTrace};
pub use quantize::{QuantizationReport, RegionContribution};
pub use solve::{EigenSolution, EnergyWindow, Route};
