//! Gauss–Legendre nodes and weights, computed once by Newton iteration on
//! the Legendre recurrence.

use std::sync::OnceLock;

pub const GAUSS_N: usize = 256;

static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();

/// Nodes and weights on (−1, 1) for the 256-point rule.
pub fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    RULE.get_or_init(|| compute(GAUSS_N))
}

fn compute(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// P_n(x) and its derivative via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// ∫ f over (a, b) with the substitution x = mid + halfwidth·sin θ, which
/// absorbs inverse-square-root behavior at both endpoints.
pub fn integrate_endpoint_singular(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let (nodes, weights) = rule();
    let mid = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let half_pi = 0.5 * std::f64::consts::PI;
    let mut sum = 0.0;
    for (t, w) in nodes.iter().zip(weights) {
        let theta = half_pi * t;
        let x = mid + hw * theta.sin();
        sum += w * half_pi * hw * theta.cos() * f(x);
    }
    sum
}
