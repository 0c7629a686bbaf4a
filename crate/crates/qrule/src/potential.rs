//! Piecewise-analytic one-dimensional potentials.
//!
//! A [`Potential`] is an ordered list of [`Segment`]s that tile the real
//! line. Each segment is constant, a shifted quadratic `a(x−s)² + c`, or a
//! polynomial of degree ≤ 8. The module answers the geometric questions the
//! rest of the crate needs: value and slope at a point, turning points
//! `V(x) = E`, and the alternating forbidden/allowed region partition at a
//! given energy.

use crate::tolerances::{
    JOINT_CONTINUITY_TOL, POLY_SCAN_POINTS, TURNING_POINT_BISECT_TOL, TURNING_POINT_MERGE_TOL,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("segments do not tile the real line: {0}")]
    BadTiling(String),
    #[error("polynomial degree {0} exceeds the supported maximum of 8")]
    DegreeTooHigh(usize),
    #[error("derivative requested at discontinuous joint x = {0}")]
    DerivativeAtJoint(f64),
    #[error("E = {energy} meets V tangentially near x = {x}; the rule assumes simple turning points")]
    Tangency { energy: f64, x: f64 },
    #[error("potential does not confine at E = {energy}: tail limit {tail} on the {side}")]
    NonConfining {
        energy: f64,
        tail: f64,
        side: &'static str,
    },
    #[error("odd number of turning points ({0}); energy sits at a jump configuration outside scope")]
    OddTurningPoints(usize),
    #[error("no turning points at E = {0}")]
    NoTurningPoints(f64),
}

/// Analytic form of one segment.
#[derive(Debug, Clone, PartialEq)]
pub enum SegmentForm {
    Constant(f64),
    /// `a·(x − shift)² + offset`
    Quadratic { a: f64, shift: f64, offset: f64 },
    /// Coefficients in increasing order: `c[0] + c[1] x + …`
    Polynomial(Vec<f64>),
}

impl SegmentForm {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SegmentForm::Constant(c) => *c,
            SegmentForm::Quadratic { a, shift, offset } => {
                let d = x - shift;
                a * d * d + offset
            }
            SegmentForm::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
        }
    }

    pub fn eval_derivative(&self, x: f64) -> f64 {
        match self {
            SegmentForm::Constant(_) => 0.0,
            SegmentForm::Quadratic { a, shift, .. } => 2.0 * a * (x - shift),
            SegmentForm::Polynomial(c) => {
                let mut acc = 0.0;
                for k in (1..c.len()).rev() {
                    acc = acc * x + c[k] * k as f64;
                }
                acc
            }
        }
    }

    fn degree(&self) -> usize {
        match self {
            SegmentForm::Constant(_) => 0,
            SegmentForm::Quadratic { .. } => 2,
            SegmentForm::Polynomial(c) => c.len().saturating_sub(1),
        }
    }
}

/// One piece of the potential on `[lo, hi)`.
#[derive(Debug, Clone)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub form: SegmentForm,
}

impl Segment {
    pub fn new(lo: f64, hi: f64, form: SegmentForm) -> Self {
        Segment { lo, hi, form }
    }
}

/// A turning point `V(x) = E`, possibly sitting on a potential jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoint {
    pub x: f64,
    /// False when the point is a segment joint where V jumps across E.
    pub continuous: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Allowed,
    Forbidden,
}

#[derive(Debug, Clone, Copy)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
    pub kind: RegionKind,
}

/// Ordered turning points and the alternating region list at one energy.
#[derive(Debug, Clone)]
pub struct RegionPartition {
    pub energy: f64,
    pub turning_points: Vec<TurningPoint>,
    pub regions: Vec<Region>,
}

impl RegionPartition {
    /// Interior regions, i.e. everything between the first and last turning
    /// point (the decaying tails are excluded from the rule).
    pub fn interior(&self) -> &[Region] {
        &self.regions[1..self.regions.len() - 1]
    }

    pub fn first_tp(&self) -> f64 {
        self.turning_points[0].x
    }

    pub fn last_tp(&self) -> f64 {
        self.turning_points[self.turning_points.len() - 1].x
    }
}

/// Ordered piecewise-analytic segments tiling the real line.
#[derive(Debug, Clone)]
pub struct Potential {
    segments: Vec<Segment>,
}

impl Potential {
    /// Build from an explicit segment list. Segments must tile the line:
    /// first `lo = −∞`, last `hi = +∞`, and each `hi` equal to the next `lo`.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self, PotentialError> {
        if segments.is_empty() {
            return Err(PotentialError::BadTiling("no segments".into()));
        }
        if segments[0].lo != f64::NEG_INFINITY {
            return Err(PotentialError::BadTiling(
                "first segment must start at -inf".into(),
            ));
        }
        if segments[segments.len() - 1].hi != f64::INFINITY {
            return Err(PotentialError::BadTiling(
                "last segment must end at +inf".into(),
            ));
        }
        for w in segments.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(PotentialError::BadTiling(format!(
                    "gap or overlap at x = {} vs {}",
                    w[0].hi, w[1].lo
                )));
            }
        }
        for s in &segments {
            if !(s.lo < s.hi) {
                return Err(PotentialError::BadTiling(format!(
                    "empty segment [{}, {})",
                    s.lo, s.hi
                )));
            }
            if s.form.degree() > 8 {
                return Err(PotentialError::DegreeTooHigh(s.form.degree()));
            }
        }
        Ok(Potential { segments })
    }

    /// Double square well: `V_I` on (−∞, x_a), 0 on the wells, `V_0` on the
    /// barrier (x_b, x_c), `V_F` on (x_d, ∞).
    pub fn double_square_well(
        x_a: f64,
        x_b: f64,
        x_c: f64,
        x_d: f64,
        v_i: f64,
        v_0: f64,
        v_f: f64,
    ) -> Result<Self, PotentialError> {
        if !(x_a < x_b && x_b < x_c && x_c < x_d) {
            return Err(PotentialError::InvalidParameter {
                name: "x_a..x_d",
                reason: "well edges must be strictly increasing".into(),
            });
        }
        for (name, v) in [("V_I", v_i), ("V_0", v_0), ("V_F", v_f)] {
            if !(v > 0.0) {
                return Err(PotentialError::InvalidParameter {
                    name: match name {
                        "V_I" => "V_I",
                        "V_0" => "V_0",
                        _ => "V_F",
                    },
                    reason: format!("must be positive, got {v}"),
                });
            }
        }
        Potential::from_segments(vec![
            Segment::new(f64::NEG_INFINITY, x_a, SegmentForm::Constant(v_i)),
            Segment::new(x_a, x_b, SegmentForm::Constant(0.0)),
            Segment::new(x_b, x_c, SegmentForm::Constant(v_0)),
            Segment::new(x_c, x_d, SegmentForm::Constant(0.0)),
            Segment::new(x_d, f64::INFINITY, SegmentForm::Constant(v_f)),
        ])
    }

    /// Biharmonic potential: `(x+α)²` for x ≤ 0, `(x−β)² − γ` for x > 0.
    /// Requires α > 0 and α² = β² − γ (continuity at the origin).
    pub fn biharmonic(alpha: f64, beta: f64, gamma: f64) -> Result<Self, PotentialError> {
        if !(alpha > 0.0) {
            return Err(PotentialError::InvalidParameter {
                name: "alpha",
                reason: format!("must be positive, got {alpha}"),
            });
        }
        if (alpha * alpha - (beta * beta - gamma)).abs() > 1e-12 {
            return Err(PotentialError::InvalidParameter {
                name: "alpha^2 = beta^2 - gamma",
                reason: format!(
                    "continuity at x = 0 violated: {} vs {}",
                    alpha * alpha,
                    beta * beta - gamma
                ),
            });
        }
        Potential::from_segments(vec![
            Segment::new(
                f64::NEG_INFINITY,
                0.0,
                SegmentForm::Quadratic {
                    a: 1.0,
                    shift: -alpha,
                    offset: 0.0,
                },
            ),
            Segment::new(
                0.0,
                f64::INFINITY,
                SegmentForm::Quadratic {
                    a: 1.0,
                    shift: beta,
                    offset: -gamma,
                },
            ),
        ])
    }

    /// The harmonic oscillator `V = x²`.
    pub fn harmonic() -> Self {
        Potential {
            segments: vec![Segment::new(
                f64::NEG_INFINITY,
                f64::INFINITY,
                SegmentForm::Quadratic {
                    a: 1.0,
                    shift: 0.0,
                    offset: 0.0,
                },
            )],
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    fn segment_index(&self, x: f64) -> usize {
        // joints belong to the right segment
        for (i, s) in self.segments.iter().enumerate() {
            if x < s.hi {
                return i;
            }
        }
        self.segments.len() - 1
    }

    /// V(x); at a joint returns the right segment's value.
    pub fn eval(&self, x: f64) -> f64 {
        self.segments[self.segment_index(x)].form.eval(x)
    }

    /// Analytic slope of the containing segment. Errors exactly on a
    /// discontinuous joint, where the slope is undefined.
    pub fn eval_derivative(&self, x: f64) -> Result<f64, PotentialError> {
        for w in self.segments.windows(2) {
            let j = w[0].hi;
            if x == j && !self.joint_is_continuous(j) {
                return Err(PotentialError::DerivativeAtJoint(x));
            }
        }
        Ok(self.segments[self.segment_index(x)].form.eval_derivative(x))
    }

    /// One-sided limits of V at a joint.
    pub fn limits_at(&self, joint: f64) -> (f64, f64) {
        let right = self.eval(joint);
        let mut left = right;
        for s in &self.segments {
            if s.hi == joint {
                left = s.form.eval(joint);
            }
        }
        (left, right)
    }

    fn joint_is_continuous(&self, joint: f64) -> bool {
        let (l, r) = self.limits_at(joint);
        (l - r).abs() <= JOINT_CONTINUITY_TOL * (1.0 + l.abs().max(r.abs()))
    }

    /// Limit of V as x → −∞ / +∞ (+∞ for growing tails).
    pub fn tail_limits(&self) -> (f64, f64) {
        let tail = |s: &Segment| match &s.form {
            SegmentForm::Constant(c) => *c,
            SegmentForm::Quadratic { a, .. } => {
                if *a > 0.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
            SegmentForm::Polynomial(c) => {
                let lead = *c.last().unwrap_or(&0.0);
                if lead > 0.0 && (c.len() - 1) % 2 == 0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
        };
        (tail(&self.segments[0]), tail(&self.segments[self.segments.len() - 1]))
    }

    /// Energies where the turning-point structure degenerates: segment
    /// extrema, one-sided joint values, and constant tail heights. Solver
    /// windows are clamped away from these.
    pub fn critical_energies(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for s in &self.segments {
            match &s.form {
                SegmentForm::Constant(c) => out.push(*c),
                SegmentForm::Quadratic { shift, offset, .. } => {
                    if *shift > s.lo && *shift < s.hi {
                        out.push(*offset);
                    }
                }
                SegmentForm::Polynomial(_) => {
                    // extrema via a sign scan of the derivative
                    let (lo, hi) = clip_scan_range(s, 0.0);
                    let n = POLY_SCAN_POINTS;
                    let mut prev = s.form.eval_derivative(lo);
                    for i in 1..=n {
                        let x = lo + (hi - lo) * i as f64 / n as f64;
                        let d = s.form.eval_derivative(x);
                        if prev * d < 0.0 {
                            let xm = bisect(|t| s.form.eval_derivative(t), x - (hi - lo) / n as f64, x);
                            out.push(s.form.eval(xm));
                        }
                        prev = d;
                    }
                }
            }
        }
        for w in self.segments.windows(2) {
            let (l, r) = self.limits_at(w[0].hi);
            out.push(l);
            out.push(r);
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        out
    }

    /// All real turning points at energy E, sorted ascending. Closed forms
    /// for constant and quadratic segments, a 1024-point sign scan with
    /// bisection for polynomial ones, plus every discontinuous joint where
    /// V − E changes sign across the jump.
    pub fn turning_points(&self, energy: f64) -> Result<Vec<TurningPoint>, PotentialError> {
        let (tl, tr) = self.tail_limits();
        if energy >= tl {
            return Err(PotentialError::NonConfining {
                energy,
                tail: tl,
                side: "left",
            });
        }
        if energy >= tr {
            return Err(PotentialError::NonConfining {
                energy,
                tail: tr,
                side: "right",
            });
        }

        let mut points: Vec<f64> = Vec::new();
        for s in &self.segments {
            match &s.form {
                SegmentForm::Constant(_) => {}
                SegmentForm::Quadratic { a, shift, offset } => {
                    let rad = (energy - offset) / a;
                    if rad.abs() <= 1e-12 * (1.0 + energy.abs()) {
                        // V touches E exactly at the vertex
                        if *shift > s.lo && *shift < s.hi {
                            return Err(PotentialError::Tangency { energy, x: *shift });
                        }
                    } else if rad > 0.0 {
                        let r = rad.sqrt();
                        for x in [shift - r, shift + r] {
                            if x > s.lo && x < s.hi {
                                points.push(x);
                            }
                        }
                    }
                }
                SegmentForm::Polynomial(_) => {
                    let (lo, hi) = clip_scan_range(s, energy);
                    let f = |x: f64| s.form.eval(x) - energy;
                    let n = POLY_SCAN_POINTS;
                    let mut prev_x = lo;
                    let mut prev = f(lo);
                    for i in 1..=n {
                        let x = lo + (hi - lo) * i as f64 / n as f64;
                        let v = f(x);
                        if prev == 0.0 {
                            points.push(prev_x);
                        } else if prev * v < 0.0 {
                            let root = bisect(f, prev_x, x);
                            if root > s.lo && root < s.hi {
                                // a vanishing slope at the root means a double root
                                let slope = s.form.eval_derivative(root);
                                if slope.abs() < 1e-7 * (1.0 + energy.abs()) {
                                    return Err(PotentialError::Tangency { energy, x: root });
                                }
                                points.push(root);
                            }
                        }
                        prev_x = x;
                        prev = v;
                    }
                }
            }
        }

        // joints where V - E changes sign across a jump
        let mut joint_points: Vec<f64> = Vec::new();
        for w in self.segments.windows(2) {
            let j = w[0].hi;
            let (l, r) = self.limits_at(j);
            if !self.joint_is_continuous(j) && (l - energy) * (r - energy) < 0.0 {
                joint_points.push(j);
            }
        }

        points.extend_from_slice(&joint_points);
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut merged: Vec<f64> = Vec::new();
        for x in points {
            match merged.last() {
                Some(&last) if (x - last).abs() <= TURNING_POINT_MERGE_TOL => {
                    // two distinct simple roots collapsing is a tangency,
                    // unless one of them is a joint duplicate
                    if !joint_points.iter().any(|&j| (j - x).abs() <= TURNING_POINT_MERGE_TOL) {
                        return Err(PotentialError::Tangency { energy, x });
                    }
                }
                _ => merged.push(x),
            }
        }

        if merged.is_empty() {
            return Err(PotentialError::NoTurningPoints(energy));
        }
        if merged.len() % 2 != 0 {
            return Err(PotentialError::OddTurningPoints(merged.len()));
        }

        Ok(merged
            .into_iter()
            .map(|x| TurningPoint {
                x,
                continuous: self
                    .segments
                    .windows(2)
                    .all(|w| w[0].hi != x || self.joint_is_continuous(x)),
            })
            .collect())
    }

    /// Alternating region partition at energy E. The first and last regions
    /// are the forbidden tails.
    pub fn partition(&self, energy: f64) -> Result<RegionPartition, PotentialError> {
        let tps = self.turning_points(energy)?;
        let mut regions = Vec::with_capacity(tps.len() + 1);
        let mut bounds = Vec::with_capacity(tps.len() + 2);
        bounds.push(f64::NEG_INFINITY);
        bounds.extend(tps.iter().map(|t| t.x));
        bounds.push(f64::INFINITY);
        for w in bounds.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = region_probe_point(lo, hi);
            let kind = if self.eval(mid) < energy {
                RegionKind::Allowed
            } else {
                RegionKind::Forbidden
            };
            regions.push(Region { lo, hi, kind });
        }
        // confinement guarantees forbidden tails; alternation must hold
        debug_assert_eq!(regions[0].kind, RegionKind::Forbidden);
        debug_assert_eq!(regions[regions.len() - 1].kind, RegionKind::Forbidden);
        for w in regions.windows(2) {
            if w[0].kind == w[1].kind {
                return Err(PotentialError::OddTurningPoints(tps.len()));
            }
        }
        Ok(RegionPartition {
            energy,
            turning_points: tps,
            regions,
        })
    }
}

fn region_probe_point(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (false, true) => hi - 1.0,
        (true, false) => lo + 1.0,
        (false, false) => 0.0,
    }
}

/// Scan window for root isolation on a possibly infinite polynomial segment:
/// the Cauchy bound on the roots of V(x) − E.
fn clip_scan_range(s: &Segment, energy: f64) -> (f64, f64) {
    let bound = match &s.form {
        SegmentForm::Polynomial(c) => {
            let lead = c.last().copied().unwrap_or(1.0).abs().max(1e-300);
            let c0 = c[0] - energy;
            1.0 + c[1..c.len() - 1]
                .iter()
                .map(|ck| (ck / lead).abs())
                .chain(std::iter::once((c0 / lead).abs()))
                .fold(0.0, f64::max)
        }
        _ => 1e6,
    };
    let lo = if s.lo.is_finite() { s.lo } else { -bound - 1.0 };
    let hi = if s.hi.is_finite() { s.hi } else { bound + 1.0 };
    (lo, hi)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if (hi - lo).abs() < TURNING_POINT_BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}
