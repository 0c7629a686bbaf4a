//! Eigenvalues by three mutually checking routes: generic shooting on the
//! matching mismatch, closed-form transcendental chains for the built-in
//! potentials, and a finite-difference Sturm-bisection oracle.
//!
//! Shooting brackets sign changes of `sin(atan φ_L − atan φ_R)` on an
//! energy grid, at the midpoint of every classically allowed region (a
//! state whose node lands on one matching point is still a clean sign
//! change at another), then refines by bisection. Missed brackets — double
//! wells produce near-degenerate pairs whose roots can share one grid cell
//! — are recovered by seeding local scans around the finite-difference
//! oracle's eigenvalues. Indices always come from node counts, never from
//! scan order.

use crate::potential::{Potential, PotentialError};
use crate::propagate::{
    matching_mismatch_sin, trace_full_line, truncation_point, PropagateError,
};
use crate::quantize::momentum_integral;
use crate::specfun::{hermite_ratio, SpecFunError};
use crate::tolerances::{SOLVER_ENERGY_TOL, WINDOW_CLAMP};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("no eigenvalue found in the window")]
    NoEigenvalue,
    #[error("energy window invalid: lo = {lo}, hi = {hi}")]
    BadWindow { lo: f64, hi: f64 },
    #[error("window grid must have at least 64 points, got {0}")]
    TooFewGridPoints(usize),
    #[error("finite-difference grid must have at least 2000 points, got {0}")]
    FdGridTooSmall(usize),
    #[error("domain too small: eigenvector mass {mass:e} within 5 end points at E = {energy}")]
    DomainTooSmall { mass: f64, energy: f64 },
    #[error("two roots persist in one grid cell near E = {0} after refinement")]
    BracketCollision(f64),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Propagate(#[from] PropagateError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Shooting,
    Analytic,
    FdOracle,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Route::Shooting => write!(f, "shooting"),
            Route::Analytic => write!(f, "analytic"),
            Route::FdOracle => write!(f, "fd-oracle"),
        }
    }
}

/// One computed bound state.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// Node count of ψ (enumeration order for the biharmonic matching
    /// route, whose equation is taken as given).
    pub index: usize,
    pub energy: f64,
    pub route: Route,
    /// Route-specific residual: |mismatch| for shooting/analytic, the
    /// Richardson step size for the oracle.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyWindow {
    pub lo: f64,
    pub hi: f64,
    pub grid_points: usize,
}

impl EnergyWindow {
    pub fn new(lo: f64, hi: f64, grid_points: usize) -> Self {
        EnergyWindow {
            lo,
            hi,
            grid_points,
        }
    }

    fn validate(&self) -> Result<(), SolveError> {
        if !(self.lo < self.hi) {
            return Err(SolveError::BadWindow {
                lo: self.lo,
                hi: self.hi,
            });
        }
        if self.grid_points < 64 {
            return Err(SolveError::TooFewGridPoints(self.grid_points));
        }
        Ok(())
    }
}

/// Clamp scan energies away from tangency energies (well bottoms, barrier
/// tops, tail heights) and below the shallower tail.
fn clamped_scan_energies(p: &Potential, w: &EnergyWindow) -> Vec<f64> {
    let critical = p.critical_energies();
    let (tl, tr) = p.tail_limits();
    // the trace needs V - E >= 1 at the truncation point
    let hi_cap = tl.min(tr) - 1.0 - WINDOW_CLAMP;
    let lo = w.lo;
    let hi = w.hi.min(hi_cap);
    let n = w.grid_points;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
        for &c in &critical {
            if (e - c).abs() < WINDOW_CLAMP {
                e = c + WINDOW_CLAMP;
            }
        }
        if e > lo && e < hi {
            out.push(e);
        }
    }
    out
}

/// Matching points: the midpoint of every allowed region at the probe
/// energy, ordered so the region with the largest ∫k dx comes first.
fn matching_points(p: &Potential, e: f64) -> Vec<f64> {
    let part = match p.partition(e) {
        Ok(part) => part,
        Err(_) => return Vec::new(),
    };
    let mut mids: Vec<(f64, f64)> = part
        .interior()
        .iter()
        .filter(|r| r.kind == crate::potential::RegionKind::Allowed)
        .map(|r| {
            let mid = 0.5 * (r.lo + r.hi);
            let action = momentum_integral(p, e, r.lo, r.hi).unwrap_or(0.0);
            (mid, action)
        })
        .collect();
    mids.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    mids.into_iter().map(|(m, _)| m).collect()
}

fn bisect_energy(
    f: &mut dyn FnMut(f64) -> Option<f64>,
    mut lo: f64,
    mut hi: f64,
) -> Option<f64> {
    let mut flo = f(lo)?;
    for _ in 0..200 {
        if hi - lo < SOLVER_ENERGY_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Scan a probe function over the energies, bisect every sign change, and
/// return accepted roots (where the function magnitude actually collapses,
/// which rejects pole jumps).
fn scan_roots(
    energies: &[f64],
    probe: &mut dyn FnMut(f64) -> Option<f64>,
    accept_tol: f64,
) -> Vec<(f64, f64)> {
    let mut values: Vec<Option<f64>> = Vec::with_capacity(energies.len());
    for &e in energies {
        values.push(probe(e));
    }
    let mut roots = Vec::new();
    for i in 1..energies.len() {
        let (Some(a), Some(b)) = (values[i - 1], values[i]) else {
            continue;
        };
        if a == 0.0 {
            roots.push((energies[i - 1], 0.0));
            continue;
        }
        if a * b < 0.0 {
            if let Some(root) = bisect_energy(probe, energies[i - 1], energies[i]) {
                if let Some(v) = probe(root) {
                    if v.abs() < accept_tol {
                        roots.push((root, v.abs()));
                    }
                }
            }
        }
    }
    roots
}

fn merge_roots(mut roots: Vec<(f64, f64)>, tol: f64) -> Vec<(f64, f64)> {
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out: Vec<(f64, f64)> = Vec::new();
    for r in roots {
        match out.last() {
            Some(last) if (r.0 - last.0).abs() <= tol => {}
            _ => out.push(r),
        }
    }
    out
}

fn node_index(p: &Potential, e: f64) -> Result<usize, SolveError> {
    let (t, part) = trace_full_line(p, e, crate::tolerances::DEFAULT_N_STEPS)?;
    Ok(t.psi_nodes_in(part.first_tp(), part.last_tp()))
}

/// Shooting solver: bracket and bisect the matching mismatch over the
/// window.
pub fn solve_shooting(p: &Potential, window: &EnergyWindow) -> Result<Vec<EigenSolution>, SolveError> {
    window.validate()?;
    let energies = clamped_scan_energies(p, window);
    if energies.is_empty() {
        return Ok(Vec::new());
    }
    // union of matching points at several probe energies: a window that
    // spans a region-structure change (two wells merging, a well emptying)
    // has different allowed regions at its two ends
    let mut probes: Vec<f64> = Vec::new();
    for frac in [0.5, 0.15, 0.85] {
        let e = energies[((energies.len() - 1) as f64 * frac) as usize];
        for m in matching_points(p, e) {
            if !probes.iter().any(|&q| (q - m).abs() < 1e-6) {
                probes.push(m);
            }
        }
    }
    if probes.is_empty() {
        return Ok(Vec::new());
    }

    let mut roots: Vec<(f64, f64)> = Vec::new();
    for &xm in &probes {
        let mut probe = |e: f64| matching_mismatch_sin(p, e, xm).ok();
        roots.extend(scan_roots(&energies, &mut probe, 1e-4));
    }
    let mut roots = merge_roots(roots, 1e-6);

    // recover brackets the grid cannot see: near-degenerate pairs share a
    // cell and cancel their sign changes; seed local scans from the oracle
    if let Ok(fd) = fd_for_window(p, window) {
        for sol in &fd {
            let seen = roots.iter().any(|r| (r.0 - sol.energy).abs() < 8e-3);
            if seen || sol.energy < window.lo || sol.energy > window.hi {
                continue;
            }
            let lo = (sol.energy - 0.03).max(window.lo);
            let hi = (sol.energy + 0.03).min(window.hi);
            let local: Vec<f64> = (0..256).map(|i| lo + (hi - lo) * i as f64 / 255.0).collect();
            for &xm in &probes {
                let mut probe = |e: f64| matching_mismatch_sin(p, e, xm).ok();
                let found = scan_roots(&local, &mut probe, 1e-4);
                if !found.is_empty() {
                    roots.extend(found);
                    break;
                }
            }
        }
        roots = merge_roots(roots, 1e-6);
    }

    let mut out = Vec::with_capacity(roots.len());
    for (e, residual) in roots {
        let index = node_index(p, e)?;
        out.push(EigenSolution {
            index,
            energy: e,
            route: Route::Shooting,
            residual,
        });
    }
    out.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
    out.dedup_by(|a, b| (a.energy - b.energy).abs() < 1e-8);
    Ok(out)
}

fn fd_for_window(p: &Potential, window: &EnergyWindow) -> Result<Vec<EigenSolution>, SolveError> {
    let domain = fd_domain(p, window.hi)?;
    // enough states to cover the window
    let mut count = 8;
    loop {
        let sols = solve_fd_oracle(p, domain, 2400, count)?;
        if sols.last().map(|s| s.energy > window.hi).unwrap_or(true) || count >= 64 {
            return Ok(sols);
        }
        count *= 2;
    }
}

/// Dirichlet box for the finite-difference oracle: at least three decay
/// lengths past the outer turning points at the top of the window.
pub fn fd_domain(p: &Potential, e_hi: f64) -> Result<(f64, f64), SolveError> {
    let mut e = e_hi;
    let part = loop {
        match p.partition(e) {
            Ok(part) => break part,
            Err(PotentialError::Tangency { .. }) => e -= 10.0 * WINDOW_CLAMP,
            Err(err) => return Err(err.into()),
        }
    };
    let x0 = walk_out(p, e, part.first_tp(), true);
    let x1 = walk_out(p, e, part.last_tp(), false);
    Ok((x0, x1))
}

fn walk_out(p: &Potential, e: f64, tp: f64, leftward: bool) -> f64 {
    // three decay lengths of the local κ, re-estimated as we walk
    let base = truncation_point(p, e, tp, leftward);
    let kappa = (p.eval(base) - e).max(0.25).sqrt();
    if leftward {
        base - 3.0 / kappa
    } else {
        base + 3.0 / kappa
    }
}

/// Finite-difference oracle: 3-point discretization of −ψ″ + Vψ on a
/// uniform Dirichlet grid, lowest `count` eigenvalues by Sturm-sequence
/// bisection, Richardson-extrapolated from `grid_n` and `2·grid_n`.
pub fn solve_fd_oracle(
    p: &Potential,
    domain: (f64, f64),
    grid_n: usize,
    count: usize,
) -> Result<Vec<EigenSolution>, SolveError> {
    if grid_n < 2000 {
        return Err(SolveError::FdGridTooSmall(grid_n));
    }
    let coarse = fd_eigenvalues(p, domain, grid_n, count);
    let fine = fd_eigenvalues(p, domain, 2 * grid_n, count);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let e = (4.0 * fine[k] - coarse[k]) / 3.0;
        let (nodes, end_mass) = fd_eigenvector_stats(p, domain, 2 * grid_n, fine[k]);
        if end_mass > 1e-8 {
            return Err(SolveError::DomainTooSmall {
                mass: end_mass,
                energy: e,
            });
        }
        out.push(EigenSolution {
            index: nodes,
            energy: e,
            route: Route::FdOracle,
            residual: (fine[k] - coarse[k]).abs(),
        });
    }
    Ok(out)
}

fn fd_matrix(p: &Potential, domain: (f64, f64), n: usize) -> (Vec<f64>, f64) {
    let (lo, hi) = domain;
    let h = (hi - lo) / (n + 1) as f64;
    let mut diag = Vec::with_capacity(n);
    for i in 1..=n {
        let x = lo + h * i as f64;
        diag.push(2.0 / (h * h) + p.eval(x));
    }
    (diag, -1.0 / (h * h))
}

/// Eigenvalues strictly below λ, counted by the signs of the LDLᵀ pivots.
fn sturm_count(diag: &[f64], off: f64, lambda: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    let guard = 1e-300;
    for &d in &diag[1..] {
        let q_safe = if q.abs() < guard {
            if q >= 0.0 {
                guard
            } else {
                -guard
            }
        } else {
            q
        };
        q = (d - lambda) - off * off / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn fd_eigenvalues(p: &Potential, domain: (f64, f64), n: usize, count: usize) -> Vec<f64> {
    let (diag, off) = fd_matrix(p, domain, n);
    // Gershgorin bounds
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for (i, &d) in diag.iter().enumerate() {
        let r = if i == 0 || i == diag.len() - 1 {
            off.abs()
        } else {
            2.0 * off.abs()
        };
        lo = lo.min(d - r);
        hi = hi.max(d + r);
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if (b - a) < 1e-12 * mid.abs().max(1.0) {
                break;
            }
            if sturm_count(&diag, off, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Node count and relative end mass of the eigenvector at λ, by inverse
/// iteration with the Thomas solve.
fn fd_eigenvector_stats(p: &Potential, domain: (f64, f64), n: usize, lambda: f64) -> (usize, f64) {
    let (diag, off) = fd_matrix(p, domain, n);
    let shift = lambda + 1e-9 * lambda.abs().max(1.0);
    let mut v = vec![1.0; n];
    for _ in 0..3 {
        v = thomas_solve(&diag, off, shift, &v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        for x in &mut v {
            *x /= norm;
        }
    }
    let max = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for &x in &v {
        if x.abs() < 1e-9 * max {
            continue;
        }
        if prev != 0.0 && prev * x < 0.0 {
            nodes += 1;
        }
        prev = x;
    }
    let total: f64 = v.iter().map(|x| x * x).sum();
    let ends: f64 = v[..5].iter().chain(&v[n - 5..]).map(|x| x * x).sum();
    (nodes, ends / total.max(1e-300))
}

fn thomas_solve(diag: &[f64], off: f64, shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let b0 = diag[0] - shift;
    c[0] = off / b0;
    d[0] = rhs[0] / b0;
    for i in 1..n {
        let m = (diag[i] - shift) - off * c[i - 1];
        c[i] = off / m;
        d[i] = (rhs[i] - off * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Exact piecewise chain for the double square well: sine phases in the
/// wells, the total two-exponential propagation through the barrier, with
/// decay conditions φ(x_a) = +√(V_I−E) and φ(x_d) = −√(V_F−E).
pub struct SquareWellChain {
    pub x_a: f64,
    pub x_b: f64,
    pub x_c: f64,
    pub x_d: f64,
    pub v_i: f64,
    pub v_0: f64,
    pub v_f: f64,
}

impl SquareWellChain {
    /// φ of the left-decay solution at x ∈ (x_a, x_d), with the running
    /// count of sine-phase π-crossings and barrier poles (= ψ nodes).
    fn phi_left(&self, e: f64, x: f64) -> (f64, usize) {
        let k = e.sqrt();
        let kap = (self.v_0 - e).sqrt();
        let mut nodes = 0usize;
        // left well
        let mut phi = (self.v_i - e).sqrt();
        let mut theta = acot_principal(phi / k);
        let theta_end = theta + k * (x.min(self.x_b) - self.x_a);
        nodes += pi_crossings(theta, theta_end);
        theta = theta_end;
        phi = k / theta.tan();
        if x <= self.x_b {
            return (phi, nodes);
        }
        // barrier
        let w = x.min(self.x_c) - self.x_b;
        let (phi_out, pole) = barrier_step(kap, phi, w);
        nodes += pole as usize;
        phi = phi_out;
        if x <= self.x_c {
            return (phi, nodes);
        }
        // right well
        let mut theta2 = acot_principal(phi / k);
        let theta2_end = theta2 + k * (x - self.x_c);
        nodes += pi_crossings(theta2, theta2_end);
        theta2 = theta2_end;
        phi = k / theta2.tan();
        (phi, nodes)
    }

    fn phi_right(&self, e: f64, x: f64) -> (f64, usize) {
        let k = e.sqrt();
        let kap = (self.v_0 - e).sqrt();
        let mut nodes = 0usize;
        let mut phi = -(self.v_f - e).sqrt();
        let mut theta = acot_principal(phi / k);
        let theta_end = theta - k * (self.x_d - x.max(self.x_c));
        nodes += pi_crossings(theta_end, theta);
        theta = theta_end;
        phi = k / theta.tan();
        if x >= self.x_c {
            return (phi, nodes);
        }
        let w = x.max(self.x_b) - self.x_c; // negative
        let (phi_out, pole) = barrier_step(kap, phi, w);
        nodes += pole as usize;
        phi = phi_out;
        if x >= self.x_b {
            return (phi, nodes);
        }
        let mut theta2 = acot_principal(phi / k);
        let theta2_end = theta2 - k * (self.x_b - x);
        nodes += pi_crossings(theta2_end, theta2);
        theta2 = theta2_end;
        phi = k / theta2.tan();
        (phi, nodes)
    }

    /// sin-compressed mismatch at x, plus the analytic node count of the
    /// glued solution.
    fn mismatch(&self, e: f64, x: f64) -> (f64, usize) {
        let (l, nl) = self.phi_left(e, x);
        let (r, nr) = self.phi_right(e, x);
        let s = (l - r) / ((1.0 + l * l) * (1.0 + r * r)).sqrt();
        (s, nl + nr)
    }

    /// Total node count, evaluated at two generic split points so a node
    /// landing exactly on one of them cannot be lost.
    fn node_count(&self, e: f64) -> usize {
        let x1 = self.x_a + 0.3789 * (self.x_b - self.x_a);
        let x2 = self.x_c + 0.6211 * (self.x_d - self.x_c);
        let (_, n1) = self.mismatch(e, x1);
        let (_, n2) = self.mismatch(e, x2);
        n1.max(n2)
    }
}

fn acot_principal(y: f64) -> f64 {
    // acot into (0, π): continuous across the pole of cot
    let a = (1.0 / y).atan();
    if a < 0.0 {
        a + std::f64::consts::PI
    } else {
        a
    }
}

fn pi_crossings(theta_from: f64, theta_to: f64) -> usize {
    let pi = std::f64::consts::PI;
    ((theta_to / pi).floor() - (theta_from / pi).floor()).max(0.0) as usize
}

/// Exact φ propagation across a constant barrier of width |w| (signed for
/// the right-to-left direction); reports whether ψ passes through a node.
fn barrier_step(kap: f64, phi_in: f64, w: f64) -> (f64, bool) {
    let t = (kap * w).tanh();
    let num = kap * (kap * t + phi_in);
    let den = kap + phi_in * t;
    let phi_out = if den != 0.0 { num / den } else { 1e300f64.copysign(num) };
    // a pole occurs when the coth-branch argument crosses zero inside
    let pole = if phi_in.abs() > kap {
        let w_in = atanh_real(kap / phi_in) / kap; // signed position of the pole
        if w >= 0.0 {
            w_in < 0.0 && w_in.abs() <= w.abs() && -w_in <= w
        } else {
            w_in > 0.0 && w_in <= -w
        }
    } else {
        false
    };
    (phi_out, pole)
}

fn atanh_real(z: f64) -> f64 {
    0.5 * ((1.0 + z) / (1.0 - z)).ln()
}

/// Eigenvalues of the double square well from the analytic chain.
#[allow(clippy::too_many_arguments)]
pub fn solve_double_square_well(
    x_a: f64,
    x_b: f64,
    x_c: f64,
    x_d: f64,
    v_i: f64,
    v_0: f64,
    v_f: f64,
    window: &EnergyWindow,
) -> Result<Vec<EigenSolution>, SolveError> {
    window.validate()?;
    let p = Potential::double_square_well(x_a, x_b, x_c, x_d, v_i, v_0, v_f)?;
    let chain = SquareWellChain {
        x_a,
        x_b,
        x_c,
        x_d,
        v_i,
        v_0,
        v_f,
    };
    let v_min = v_i.min(v_0).min(v_f);
    let lo = window.lo.max(WINDOW_CLAMP);
    let hi = window.hi.min(v_min - WINDOW_CLAMP);
    if lo >= hi {
        return Ok(Vec::new());
    }
    let probes = [0.5 * (x_a + x_b), 0.5 * (x_c + x_d)];
    // 512-point scan per the contract, with oracle-seeded recovery of
    // cell-sharing pairs
    let n_scan = window.grid_points.max(512);
    let energies: Vec<f64> = (0..n_scan)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n_scan as f64)
        .collect();
    let mut roots = Vec::new();
    for &xm in &probes {
        let mut probe = |e: f64| Some(chain.mismatch(e, xm).0);
        roots.extend(scan_roots(&energies, &mut probe, 1e-6));
    }
    let mut roots = merge_roots(roots, 1e-7);

    if let Ok(fd) = fd_for_window(&p, window) {
        for sol in &fd {
            if sol.energy < lo || sol.energy > hi {
                continue;
            }
            if roots.iter().any(|r| (r.0 - sol.energy).abs() < 8e-3) {
                continue;
            }
            let a = (sol.energy - 0.03).max(lo);
            let b = (sol.energy + 0.03).min(hi);
            let local: Vec<f64> = (0..256).map(|i| a + (b - a) * i as f64 / 255.0).collect();
            for &xm in &probes {
                let mut probe = |e: f64| Some(chain.mismatch(e, xm).0);
                let found = scan_roots(&local, &mut probe, 1e-6);
                if !found.is_empty() {
                    roots.extend(found);
                    break;
                }
            }
        }
        roots = merge_roots(roots, 1e-7);
    }

    let mut out = Vec::with_capacity(roots.len());
    for (e, residual) in roots {
        out.push(EigenSolution {
            index: chain.node_count(e),
            energy: e,
            route: Route::Analytic,
            residual,
        });
    }
    out.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
    Ok(out)
}

/// Roots of the biharmonic matching equation
/// `α + β − H_{(E+1)/2}(α)/H_{(E−1)/2}(α) + H_{(E+1+γ)/2}(−β)/H_{(E−1+γ)/2}(−β) = 0`,
/// bracketed on the window grid with Hermite-denominator pole jumps
/// filtered out. Indexed by enumeration order in the window.
pub fn solve_biharmonic(
    alpha: f64,
    beta: f64,
    gamma: f64,
    window: &EnergyWindow,
) -> Result<Vec<EigenSolution>, SolveError> {
    window.validate()?;
    // the builder enforces the parameter constraints
    let _ = Potential::biharmonic(alpha, beta, gamma)?;
    let f = |e: f64| -> Option<f64> {
        let rl = hermite_ratio((e - 1.0) / 2.0, alpha).ok()?;
        let rr = hermite_ratio((e - 1.0 + gamma) / 2.0, -beta).ok()?;
        Some(alpha + beta - rl + rr)
    };
    let n = window.grid_points.max(512);
    let energies: Vec<f64> = (0..n)
        .map(|i| window.lo + (window.hi - window.lo) * (i as f64 + 0.5) / n as f64)
        .collect();

    // bracket on the compressed value so denominator poles stay finite,
    // then demand that the equation value itself collapses at the root
    let mut probe = |e: f64| f(e).map(|v| v.atan());
    let brackets = scan_roots(&energies, &mut probe, f64::INFINITY);
    let mut out = Vec::new();
    for (root, _) in brackets {
        // reject pole jumps: near a denominator zero the refined point
        // keeps |f| of order one
        let split_ok = match f(root) {
            Some(v) if v.abs() < 1e-3 => true,
            _ => {
                // retry once on each side of a denominator zero inside the
                // bracket
                let mut found = None;
                let h = (window.hi - window.lo) / n as f64;
                for sub in [(root - h, root - 1e-9), (root + 1e-9, root + h)] {
                    let local: Vec<f64> =
                        (0..64).map(|i| sub.0 + (sub.1 - sub.0) * i as f64 / 63.0).collect();
                    let mut p2 = |e: f64| f(e).map(|v| v.atan());
                    for (r2, _) in scan_roots(&local, &mut p2, f64::INFINITY) {
                        if let Some(v2) = f(r2) {
                            if v2.abs() < 1e-3 {
                                found = Some(r2);
                            }
                        }
                    }
                }
                if let Some(r2) = found {
                    out.push((r2, f(r2).unwrap().abs()));
                }
                false
            }
        };
        if split_ok {
            out.push((root, f(root).unwrap().abs()));
        }
    }
    let out = merge_roots(out, 1e-8);
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(i, (e, residual))| EigenSolution {
            index: i,
            energy: e,
            route: Route::Analytic,
            residual,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;

    const DSW_LEVELS: [f64; 8] = [
        6.82714198187,
        6.83296012468,
        26.95144547848,
        26.97680814244,
        58.90461515988,
        58.97399769871,
        96.26514571241,
        96.55170449519,
    ];

    #[test]
    fn harmonic_shooting_levels() {
        let p = Potential::harmonic();
        let w = EnergyWindow::new(0.2, 8.0, 128);
        let sols = solve_shooting(&p, &w).unwrap();
        let expect = [1.0, 3.0, 5.0, 7.0];
        assert_eq!(sols.len(), 4);
        for (s, want) in sols.iter().zip(expect) {
            assert!(
                (s.energy - want).abs() < 1e-6,
                "E = {}, want {want}",
                s.energy
            );
        }
        // index law: n-th solution has n nodes
        for (n, s) in sols.iter().enumerate() {
            assert_eq!(s.index, n);
        }
    }

    #[test]
    fn square_well_chain_finds_all_eight() {
        let w = EnergyWindow::new(0.5, 99.0, 512);
        let sols =
            solve_double_square_well(-2.0, -1.0, 1.0, 2.0, 100.0, 100.0, 101.0, &w).unwrap();
        assert_eq!(sols.len(), 8, "levels: {:?}", sols.iter().map(|s| s.energy).collect::<Vec<_>>());
        for (s, want) in sols.iter().zip(DSW_LEVELS) {
            assert!(
                (s.energy - want).abs() < 1e-6,
                "chain E = {:.9} vs {want}",
                s.energy
            );
        }
        let indices: Vec<usize> = sols.iter().map(|s| s.index).collect();
        assert_eq!(indices, vec![0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn square_well_shooting_matches_chain() {
        let p = Potential::double_square_well(-2.0, -1.0, 1.0, 2.0, 100.0, 100.0, 101.0).unwrap();
        let w = EnergyWindow::new(0.5, 99.0, 512);
        let shoot = solve_shooting(&p, &w).unwrap();
        assert_eq!(shoot.len(), 8);
        for (s, want) in shoot.iter().zip(DSW_LEVELS) {
            assert!(
                (s.energy - want).abs() < 1e-6,
                "shooting E = {:.9} vs {want}",
                s.energy
            );
        }
    }

    #[test]
    fn fd_oracle_harmonic() {
        let p = Potential::harmonic();
        let sols = solve_fd_oracle(&p, (-8.0, 8.0), 4000, 4).unwrap();
        for (n, s) in sols.iter().enumerate() {
            let want = 2.0 * n as f64 + 1.0;
            assert!(
                (s.energy - want).abs() < 1e-6,
                "FD E_{n} = {} vs {want}",
                s.energy
            );
            assert_eq!(s.index, n);
        }
    }

    #[test]
    fn fd_domain_too_small_detected() {
        let p = Potential::harmonic();
        let r = solve_fd_oracle(&p, (-2.5, 2.5), 2000, 4);
        assert!(matches!(r, Err(SolveError::DomainTooSmall { .. })));
    }

    #[test]
    fn biharmonic_matching_roots() {
        let w = EnergyWindow::new(-4.5, 9.0, 512);
        let sols = solve_biharmonic(2.0, 3.0, 5.0, &w).unwrap();
        let expect = [
            -3.993111623,
            -1.931141244,
            0.286635124,
            2.734170415,
            5.440525452,
            8.501484535,
        ];
        assert_eq!(
            sols.len(),
            expect.len(),
            "roots: {:?}",
            sols.iter().map(|s| s.energy).collect::<Vec<_>>()
        );
        for (s, want) in sols.iter().zip(expect) {
            assert!(
                (s.energy - want).abs() < 1e-6,
                "matching root {} vs {want}",
                s.energy
            );
        }
    }

    #[test]
    fn biharmonic_shooting_finds_true_spectrum() {
        let p = Potential::biharmonic(2.0, 3.0, 5.0).unwrap();
        let w = EnergyWindow::new(-4.5, 4.5, 256);
        let sols = solve_shooting(&p, &w).unwrap();
        let expect = [
            -4.000021898,
            -2.000538023,
            -0.007411932,
            0.991029622,
            1.950644829,
            2.967726537,
            3.970613015,
        ];
        assert!(sols.len() >= expect.len(), "found {:?}", sols.iter().map(|s| s.energy).collect::<Vec<_>>());
        for (s, want) in sols.iter().zip(expect) {
            assert!(
                (s.energy - want).abs() < 5e-6,
                "shooting E = {:.9} vs {want}",
                s.energy
            );
        }
    }

    #[test]
    fn symmetric_well_tunneling_pairs() {
        // V_I = V_F and equal widths: eigenvalues come in close pairs with
        // positive splitting
        let w = EnergyWindow::new(0.5, 99.0, 512);
        let sols =
            solve_double_square_well(-2.0, -1.0, 1.0, 2.0, 100.0, 100.0, 100.0, &w).unwrap();
        assert!(sols.len() >= 6);
        for pair in sols.chunks(2) {
            if pair.len() == 2 {
                let split = pair[1].energy - pair[0].energy;
                assert!(split > 0.0, "splitting {split} not positive");
            }
        }
    }

    #[test]
    fn barrier_width_zero_merges_wells() {
        // x_b = x_c - tiny: energies approach the single square well of
        // width x_d - x_a, cross-checked against the oracle on the merged well
        let w = EnergyWindow::new(0.2, 60.0, 512);
        let eps = 1e-9;
        let sols =
            solve_double_square_well(-2.0, -eps, eps, 2.0, 100.0, 100.0, 100.0, &w).unwrap();
        let merged =
            Potential::from_segments(vec![
                crate::potential::Segment::new(
                    f64::NEG_INFINITY,
                    -2.0,
                    crate::potential::SegmentForm::Constant(100.0),
                ),
                crate::potential::Segment::new(-2.0, 2.0, crate::potential::SegmentForm::Constant(0.0)),
                crate::potential::Segment::new(
                    2.0,
                    f64::INFINITY,
                    crate::potential::SegmentForm::Constant(100.0),
                ),
            ])
            .unwrap();
        let fd = solve_fd_oracle(&merged, fd_domain(&merged, 60.0).unwrap(), 4000, 4).unwrap();
        for (s, f) in sols.iter().zip(fd.iter()) {
            assert!(
                (s.energy - f.energy).abs() < 1e-3,
                "merged-well E = {} vs oracle {}",
                s.energy,
                f.energy
            );
        }
    }

    #[test]
    fn biharmonic_degenerate_oscillator_against_oracle() {
        // γ = 0, β = α: two identical oscillators glued at the origin
        let p = Potential::biharmonic(2.0, 2.0, 0.0).unwrap();
        let w = EnergyWindow::new(0.2, 3.5, 128);
        let sols = solve_shooting(&p, &w).unwrap();
        let fd = solve_fd_oracle(&p, fd_domain(&p, 3.5).unwrap(), 4000, 4).unwrap();
        for s in &sols {
            let f = fd.iter().find(|f| f.index == s.index).unwrap();
            assert!(
                (s.energy - f.energy).abs() < 1e-5,
                "E = {} vs oracle {}",
                s.energy,
                f.energy
            );
        }
    }

    #[test]
    fn pure_harmonic_limit_of_biharmonic_equation() {
        // α = β = 0, γ = 0 makes the matching equation the parity condition
        // of V = x²: roots at every E = 2n+1
        let w = EnergyWindow::new(0.2, 8.0, 512);
        let sols = solve_biharmonic(0.0, 0.0, 0.0, &w);
        // α must be positive by the builder contract
        assert!(sols.is_err());
    }

    #[test]
    fn barrier_monotonicity_in_v0() {
        // raising the barrier height weakly raises every level below it
        let w = EnergyWindow::new(0.5, 60.0, 512);
        let lo = solve_double_square_well(-2.0, -1.0, 1.0, 2.0, 100.0, 99.0, 101.0, &w).unwrap();
        let hi = solve_double_square_well(-2.0, -1.0, 1.0, 2.0, 100.0, 101.0, 101.0, &w).unwrap();
        for (a, b) in lo.iter().zip(hi.iter()) {
            assert!(
                b.energy >= a.energy - 1e-9,
                "level {} dropped: {} -> {}",
                a.index,
                a.energy,
                b.energy
            );
        }
    }
}
