//! The generalized quantization rule, assembled region by region.
//!
//! For a trace built from the left decay condition, every classically
//! allowed region `(a, b)` satisfies the identity
//!
//! ```text
//! ∫ k dx − ∫ k′ φ/(k² + φ²) dx = N_region·π − arctan(k_a/φ(a)) + arctan(k_b/φ(b))
//! ```
//!
//! with `N_region` the number of φ zeros inside, and every interior
//! forbidden region contributes `−m·π` through the film ledger plus
//! arctanh boundary pieces that vanish at continuous turning points. At a
//! potential jump the boundary pieces survive and are collected into the
//! report's discontinuity correction. The assembled total lands on an
//! integer multiple of π; at a genuine eigenstate that integer is the node
//! count of ψ plus one.
//!
//! Branch bookkeeping: arctanh(κ/φ) with |κ/φ| > 1 is taken on the
//! principal complex branch, whose imaginary part ±π/2 becomes a real
//! contribution once multiplied by ∓i. Each joint's arctanh is evaluated
//! once and shared between the adjacent region value and the boundary sum,
//! so the total is immune to the branch ambiguity that arises when φ hugs
//! ±κ to within rounding.

use crate::gauss::integrate_endpoint_singular;
use crate::potential::{Potential, PotentialError, Region, RegionKind, RegionPartition};
use crate::propagate::{atanh_c, film_propagate, trace_full_line, LogDerivTrace, PropagateError};
use crate::solve::{self, SolveError};
use crate::tolerances::{DEFAULT_N_FILMS, DEFAULT_N_STEPS, REPORT_TOL_PI_FRACTION};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuantizeError {
    #[error("negative radicand at x = {x}: V - E = {value} (partition mismatch)")]
    NegativeRadicand { x: f64, value: f64 },
    #[error("trace does not cover [{0}, {1}]")]
    Coverage(f64, f64),
    #[error("degenerate state: φ = 0 exactly at turning point x = {0}")]
    DegenerateState(f64),
    #[error("potential has {0} turning points; the single-well reference rule needs exactly 2")]
    NotSingleWell(usize),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Propagate(#[from] PropagateError),
    #[error(transparent)]
    Solve(#[from] Box<SolveError>),
}

/// ∫ √(E − V) dx over a classically allowed region, by Gauss–Legendre
/// after the sine substitution that absorbs the endpoint behavior.
pub fn momentum_integral(p: &Potential, e: f64, lo: f64, hi: f64) -> Result<f64, QuantizeError> {
    signed_sqrt_integral(p, e, lo, hi, true)
}

/// ∫ √(V − E) dx over a forbidden region; same scheme.
pub fn forbidden_integral(p: &Potential, e: f64, lo: f64, hi: f64) -> Result<f64, QuantizeError> {
    signed_sqrt_integral(p, e, lo, hi, false)
}

fn signed_sqrt_integral(
    p: &Potential,
    e: f64,
    lo: f64,
    hi: f64,
    allowed: bool,
) -> Result<f64, QuantizeError> {
    if hi <= lo {
        return Ok(0.0);
    }
    let scale = 1.0 + e.abs();
    let mut bad: Option<(f64, f64)> = None;
    let v = integrate_endpoint_singular(lo, hi, |x| {
        let r = if allowed { e - p.eval(x) } else { p.eval(x) - e };
        if r < -1e-9 * scale && bad.is_none() {
            bad = Some((x, r));
        }
        r.max(0.0).sqrt()
    });
    if let Some((x, value)) = bad {
        return Err(QuantizeError::NegativeRadicand { x, value });
    }
    Ok(v)
}

/// Correction integral over an allowed region:
/// ∫ k′/(log φ)′ dx = −∫ k′ φ/(k² + φ²) dx via the Riccati identity
/// φ′ = −(k² + φ²). The integrand is bounded (it vanishes at ψ nodes and
/// at φ zeros); `(ψ, ψ′)` are interpolated from the trace.
pub fn correction_allowed(
    t: &LogDerivTrace,
    p: &Potential,
    e: f64,
    lo: f64,
    hi: f64,
) -> Result<f64, QuantizeError> {
    if lo < t.x_first() - 1e-9 || hi > t.x_last() + 1e-9 {
        return Err(QuantizeError::Coverage(lo, hi));
    }
    let v = integrate_endpoint_singular(lo, hi, |x| {
        let k2 = (e - p.eval(x)).max(0.0);
        let dv = p.eval_derivative(x).unwrap_or(0.0);
        if k2 <= 0.0 {
            return 0.0;
        }
        let kp = -dv / (2.0 * k2.sqrt());
        let (psi, dpsi) = t.interpolate(x);
        kp * psi * dpsi / (k2 * psi * psi + dpsi * dpsi)
    });
    Ok(v)
}

/// Assembled forbidden-region contribution via the film ledger:
/// the real part of `i∫[κ − κ′/(log φ)′] dx`, which the telescoped
/// recursion turns into `−m_total·π` plus arctanh boundary pieces that
/// vanish at continuous turning points. Returns `(value, m_total)`.
pub fn correction_forbidden(
    p: &Potential,
    e: f64,
    lo: f64,
    hi: f64,
    phi_in: f64,
    n_films: usize,
) -> Result<(f64, i64), QuantizeError> {
    let f = film_propagate(p, e, lo, hi, n_films, phi_in)?;
    let entry = atanh_c(f.kappa_first / phi_in);
    let exit = atanh_c(f.kappa_last / f.phi_out);
    // Re{ −mπ + i·atanh(κ_c/φ_c) − i·atanh(κ_b/φ_b) }
    let value = -(f.m_total as f64) * PI - exit.1 + entry.1;
    Ok((value, f.m_total))
}

/// The joint sum of the discontinuous-potential correction: for every
/// turning point resting on a potential jump, the one-sided
/// −arctan(k/φ) / +arctan(k/φ) terms of the adjacent allowed regions and
/// the ∓i·arctanh(κ/φ) terms of the adjacent forbidden regions, real parts
/// taken on the principal branch. Zero when every turning point is
/// continuous.
pub fn boundary_terms(
    p: &Potential,
    e: f64,
    partition: &RegionPartition,
    t: &LogDerivTrace,
) -> Result<f64, QuantizeError> {
    let mut sum = 0.0;
    let interior = partition.interior();
    for (i, tp) in partition.turning_points.iter().enumerate() {
        let phi = t.phi_at(tp.x);
        // each turning point ends the region to its left (if interior) and
        // starts the region to its right (if interior)
        if i > 0 {
            sum += joint_term(p, e, tp.x, phi, &interior[i - 1], false)?;
        }
        if i < interior.len() {
            sum += joint_term(p, e, tp.x, phi, &interior[i], true)?;
        }
    }
    Ok(sum)
}

/// One side of a joint: the term the region contributes at this end of the
/// §-sum. `starts` is true when the region begins at the joint.
fn joint_term(
    p: &Potential,
    e: f64,
    x: f64,
    phi: f64,
    region: &Region,
    starts: bool,
) -> Result<f64, QuantizeError> {
    let inside = if starts {
        //  value just inside the region's left end
        p.limits_at(x).1
    } else {
        p.limits_at(x).0
    };
    match region.kind {
        RegionKind::Allowed => {
            let k2 = e - inside;
            if k2 <= 1e-12 * (1.0 + e.abs()) {
                return Ok(0.0); // continuous turning point: k = 0
            }
            let k = k2.sqrt();
            if phi == 0.0 {
                return Err(QuantizeError::DegenerateState(x));
            }
            let term = (k / phi).atan();
            Ok(if starts { -term } else { term })
        }
        RegionKind::Forbidden => {
            let kap2 = inside - e;
            if kap2 <= 1e-12 * (1.0 + e.abs()) {
                return Ok(0.0);
            }
            let kap = kap2.sqrt();
            if phi == 0.0 {
                return Err(QuantizeError::DegenerateState(x));
            }
            let (_, im) = atanh_c(kap / phi);
            // Re{∓i·arctanh} = ±Im
            Ok(if starts { im } else { -im })
        }
    }
}

/// Contribution of one region to the rule.
#[derive(Debug, Clone)]
pub struct RegionContribution {
    pub lo: f64,
    pub hi: f64,
    pub kind: RegionKind,
    /// ∫k dx over allowed regions, ∫κ dx over forbidden ones.
    pub momentum_integral: f64,
    /// Allowed: the correction quadrature. Forbidden: −m·π from the ledger.
    pub correction_integral: f64,
    pub boundary_term_left: f64,
    pub boundary_term_right: f64,
    /// The assembled contribution entering the total.
    pub value: f64,
    pub nearest_multiple: i64,
    pub residual: f64,
    /// Film-ledger count for forbidden regions, 0 for allowed ones.
    pub m_total: i64,
}

/// Full verification report at one energy.
#[derive(Debug, Clone)]
pub struct QuantizationReport {
    pub energy: f64,
    pub regions: Vec<RegionContribution>,
    /// The joint sum; zero for continuous potentials.
    pub discontinuity_correction: f64,
    pub total_value: f64,
    /// Set only when the residual is inside tolerance and the trace decays
    /// on the right tail; `None` flags a non-eigenstate.
    pub total_n: Option<i64>,
    pub total_residual: f64,
    /// ψ nodes of the trace inside the turning-point span.
    pub psi_nodes: usize,
    /// Whether the trace still decays past the last turning point.
    pub decay_ok: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub n_steps: usize,
    pub n_films: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_steps: DEFAULT_N_STEPS,
            n_films: DEFAULT_N_FILMS,
        }
    }
}

/// Evaluate every term of the rule at energy `e` and report how close the
/// total comes to an integer multiple of π.
pub fn verify_rule(p: &Potential, e: f64) -> Result<QuantizationReport, QuantizeError> {
    verify_rule_with(p, e, VerifyOptions::default())
}

pub fn verify_rule_with(
    p: &Potential,
    e: f64,
    opts: VerifyOptions,
) -> Result<QuantizationReport, QuantizeError> {
    let (trace, partition) = trace_full_line(p, e, opts.n_steps)?;
    assemble(p, e, &trace, &partition, opts.n_films)
}

fn assemble(
    p: &Potential,
    e: f64,
    trace: &LogDerivTrace,
    partition: &RegionPartition,
    n_films: usize,
) -> Result<QuantizationReport, QuantizeError> {
    let interior = partition.interior();
    let tps = &partition.turning_points;
    let mut regions = Vec::with_capacity(interior.len());
    let mut total_value = 0.0;
    let mut boundary_sum = 0.0;
    // arctan pieces only; the arctanh pieces cancel between region values
    // and the joint sum, so the total stays branch-stable
    let mut arctan_sum = 0.0;
    let mut m_sum = 0i64;
    let mut allowed_sum = 0.0;

    for (ri, region) in interior.iter().enumerate() {
        let (lo, hi) = (region.lo, region.hi);
        match region.kind {
            RegionKind::Allowed => {
                let mom = momentum_integral(p, e, lo, hi)?;
                let corr = correction_allowed(trace, p, e, lo, hi)?;
                let value = mom - corr;
                let phi_l = trace.phi_at(lo);
                let phi_r = trace.phi_at(hi);
                let btl = joint_term(p, e, tps[ri].x, phi_l, region, true)?;
                let btr = joint_term(p, e, tps[ri + 1].x, phi_r, region, false)?;
                let nearest = (value / PI).round() as i64;
                regions.push(RegionContribution {
                    lo,
                    hi,
                    kind: region.kind,
                    momentum_integral: mom,
                    correction_integral: corr,
                    boundary_term_left: btl,
                    boundary_term_right: btr,
                    value,
                    nearest_multiple: nearest,
                    residual: value - nearest as f64 * PI,
                    m_total: 0,
                });
                total_value += value;
                boundary_sum += btl + btr;
                arctan_sum += btl + btr;
                allowed_sum += value;
            }
            RegionKind::Forbidden => {
                let mom = forbidden_integral(p, e, lo, hi)?;
                let phi_in = trace.phi_at(lo);
                let film = film_propagate(p, e, lo, hi, n_films, phi_in)?;
                let entry = atanh_c(film.kappa_first / phi_in);
                let exit = atanh_c(film.kappa_last / film.phi_out);
                let ledger = -(film.m_total as f64) * PI;
                let value = ledger - exit.1 + entry.1;
                // the same branch evaluations feed the joint sum with
                // opposite roles, Re{−i·atanh_in} and Re{+i·atanh_out}
                let btl = entry.1;
                let btr = -exit.1;
                let nearest = (value / PI).round() as i64;
                regions.push(RegionContribution {
                    lo,
                    hi,
                    kind: region.kind,
                    momentum_integral: mom,
                    correction_integral: ledger,
                    boundary_term_left: btl,
                    boundary_term_right: btr,
                    value,
                    nearest_multiple: nearest,
                    residual: value - nearest as f64 * PI,
                    m_total: film.m_total,
                });
                total_value += value;
                boundary_sum += btl + btr;
                m_sum += film.m_total;
            }
        }
    }

    // branch-stable total: allowed values − π·Σm − arctan joint pieces
    let n_float = (allowed_sum - PI * m_sum as f64 - arctan_sum) / PI;
    let total_n_nearest = n_float.round() as i64;
    let total_residual = (n_float - total_n_nearest as f64) * PI;

    let span = (partition.first_tp(), partition.last_tp());
    let psi_nodes = trace.psi_nodes_in(span.0, span.1);

    // decay check: past the last turning point the left-propagated φ must
    // still follow the −κ branch at an eigenstate
    let kappa_end = (p.eval(trace.x_last()) - e).max(0.0).sqrt().max(1e-6);
    let x_check = (span.1 + 2.0 / kappa_end).min(span.1 + 0.9 * (trace.x_last() - span.1));
    let decay_ok = trace.phi_at(x_check) < 0.0;

    let total_n = if total_residual.abs() <= REPORT_TOL_PI_FRACTION * PI && decay_ok {
        Some(total_n_nearest)
    } else {
        None
    };

    Ok(QuantizationReport {
        energy: e,
        regions,
        discontinuity_correction: boundary_sum,
        total_value,
        total_n,
        total_residual,
        psi_nodes,
        decay_ok,
    })
}

/// Two-turning-point reference check: at the n-th eigenvalue of a single
/// well, ∫k dx equals nπ plus the ground-state integral.
#[derive(Debug, Clone, Copy)]
pub struct ProperRuleCheck {
    pub n: usize,
    pub action_n: f64,
    pub action_ground: f64,
    pub residual: f64,
}

/// Evaluate the proper-rule reference for the n-th state of a single-well
/// potential, solving for the needed eigenvalues by shooting.
pub fn proper_rule_reference(
    p: &Potential,
    n: usize,
    window: &crate::solve::EnergyWindow,
) -> Result<ProperRuleCheck, QuantizeError> {
    let solutions = solve::solve_shooting(p, window).map_err(Box::new)?;
    let ground = solutions
        .iter()
        .find(|s| s.index == 0)
        .ok_or_else(|| QuantizeError::Solve(Box::new(SolveError::NoEigenvalue)))?;
    let nth = solutions
        .iter()
        .find(|s| s.index == n)
        .ok_or_else(|| QuantizeError::Solve(Box::new(SolveError::NoEigenvalue)))?;

    let tp0 = p.partition(ground.energy)?;
    if tp0.turning_points.len() != 2 {
        return Err(QuantizeError::NotSingleWell(tp0.turning_points.len()));
    }
    let tpn = p.partition(nth.energy)?;
    if tpn.turning_points.len() != 2 {
        return Err(QuantizeError::NotSingleWell(tpn.turning_points.len()));
    }
    let action_ground = momentum_integral(p, ground.energy, tp0.first_tp(), tp0.last_tp())?;
    let action_n = momentum_integral(p, nth.energy, tpn.first_tp(), tpn.last_tp())?;
    Ok(ProperRuleCheck {
        n,
        action_n,
        action_ground,
        residual: action_n - n as f64 * PI - action_ground,
    })
}
