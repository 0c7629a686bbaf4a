//! Special functions: log-gamma, Kummer's confluent hypergeometric M, the
//! Hermite function of real order, and the parabolic cylinder function D.
//!
//! The Hermite function is the workhorse: matching conditions for the
//! biharmonic potential are written as ratios H_{ν+1}/H_ν, and D comes from
//! H by `D_ν(z) = 2^{−ν/2} e^{−z²/4} H_ν(z/√2)`.

use crate::dd::{recip_gamma_dd, Dd};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecFunError {
    #[error("gamma pole at non-positive integer x = {0}")]
    GammaPole(f64),
    #[error("Kummer parameter pole: b = {0} is a non-positive integer")]
    KummerParameterPole(f64),
    #[error("Kummer series did not converge after {0} terms")]
    NonConvergence(usize),
    #[error("argument out of guarded range: {name} = {value}, |{name}| must be <= {max}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        max: f64,
    },
    #[error("overflow guard tripped at magnitude {0:e}")]
    Overflow(f64),
    #[error("Hermite ratio pole: H_nu vanishes at the evaluation point")]
    RatioPole,
}

/// Convergence controls for series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
    pub overflow_guard: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 512,
            rel_tol: 1e-15,
            overflow_guard: 1e290,
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln |Γ(x)| together with the sign of Γ(x).
///
/// Lanczos approximation for x ≥ 0.5; the reflection formula below that.
/// Errors at non-positive integers, where Γ has poles.
pub fn log_gamma(x: f64) -> Result<(f64, f64), SpecFunError> {
    if x <= 0.0 && (x - x.round()).abs() < 1e-13 {
        return Err(SpecFunError::GammaPole(x));
    }
    if x < 0.5 {
        // Γ(x) Γ(1-x) = π / sin(πx)
        let (lg, _) = log_gamma(1.0 - x)?;
        let s = (std::f64::consts::PI * x).sin();
        let ln = (std::f64::consts::PI / s.abs()).ln() - lg;
        return Ok((ln, s.signum()));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFF[0];
    for (i, c) in LANCZOS_COEFF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let ln = 0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln();
    Ok((ln, 1.0))
}

/// 1/Γ(x), with the poles of Γ mapped to exact zeros.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && (x - x.round()).abs() < 1e-13 {
        return 0.0;
    }
    match log_gamma(x) {
        Ok((ln, sign)) => sign * (-ln).exp(),
        Err(_) => 0.0,
    }
}

/// Kummer's confluent hypergeometric M(a, b, x) = Σ (a)_n x^n / ((b)_n n!).
///
/// For x < −30 the Kummer transformation M(a,b,x) = e^x M(b−a, b, −x) is
/// applied first so the series stays alternation-free. The sum runs in
/// double-double: the Hermite function subtracts two of these sums of size
/// e^{x²} and needs them good to better than full f64 precision.
pub fn kummer_m(a: f64, b: f64, x: f64, ctl: SeriesControl) -> Result<f64, SpecFunError> {
    kummer_m_dd(a, b, Dd::from(x), ctl).map(Dd::f64)
}

pub(crate) fn kummer_m_dd(a: f64, b: f64, x: Dd, ctl: SeriesControl) -> Result<Dd, SpecFunError> {
    if b <= 0.0 && (b - b.round()).abs() < 1e-13 {
        return Err(SpecFunError::KummerParameterPole(b));
    }
    let xf = x.f64();
    if xf.abs() > 400.0 {
        return Err(SpecFunError::OutOfRange {
            name: "x",
            value: xf,
            max: 400.0,
        });
    }
    if xf < -30.0 {
        return Ok(kummer_m_dd(b - a, b, x.neg(), ctl)?.mul_f64(xf.exp()));
    }
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        term = term
            .mul(x)
            .mul_f64(a + nf)
            .div(Dd::from(b + nf).mul_f64(nf + 1.0));
        sum = sum.add(term);
        if sum.abs() > ctl.overflow_guard {
            return Err(SpecFunError::Overflow(sum.abs()));
        }
        if term.hi == 0.0 || term.abs() <= ctl.rel_tol * sum.abs().max(1e-300) {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NonConvergence(ctl.max_terms))
}

/// Hermite function of real order ν:
///
/// H_ν(x) = 2^ν √π [ M(−ν/2, ½, x²)/Γ((1−ν)/2) − 2x·M((1−ν)/2, 3/2, x²)/Γ(−ν/2) ]
///
/// Reduces to the classical polynomial at non-negative integer ν (one of the
/// two reciprocal gammas vanishes there).
pub fn hermite_nu(nu: f64, x: f64) -> Result<f64, SpecFunError> {
    if nu.abs() > 60.0 {
        return Err(SpecFunError::OutOfRange {
            name: "nu",
            value: nu,
            max: 60.0,
        });
    }
    let ctl = SeriesControl {
        rel_tol: 1e-28,
        ..SeriesControl::default()
    };
    let x2 = Dd::from(x).mul(Dd::from(x));
    // the two sums reach e^{x²} while their combination is only (2x)^ν, so
    // everything up to the final scale stays in double-double
    let even = kummer_m_dd(-nu / 2.0, 0.5, x2, ctl)?.mul(recip_gamma_dd((1.0 - nu) / 2.0));
    let odd = kummer_m_dd((1.0 - nu) / 2.0, 1.5, x2, ctl)?.mul(recip_gamma_dd(-nu / 2.0));
    let bracket = even.sub(odd.mul_f64(2.0 * x));
    Ok(2.0f64.powf(nu) * bracket.mul(Dd::SQRT_PI).f64())
}

/// Ratio H_{ν+1}(x) / H_ν(x), the combination matching conditions use.
pub fn hermite_ratio(nu: f64, x: f64) -> Result<f64, SpecFunError> {
    let num = hermite_nu(nu + 1.0, x)?;
    let den = hermite_nu(nu, x)?;
    if den.abs() < 1e-280 {
        return Err(SpecFunError::RatioPole);
    }
    Ok(num / den)
}

/// Parabolic cylinder function D_ν(z) = 2^{−ν/2} e^{−z²/4} H_ν(z/√2).
pub fn pcf_d(nu: f64, z: f64) -> Result<f64, SpecFunError> {
    let h = hermite_nu(nu, z / std::f64::consts::SQRT_2)?;
    Ok(2.0f64.powf(-nu / 2.0) * (-z * z / 4.0).exp() * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn log_gamma_anchors() {
        let (lg, s) = log_gamma(1.0).unwrap();
        assert_abs_diff_eq!(lg, 0.0, epsilon = 1e-14);
        assert_eq!(s, 1.0);
        let (lg, s) = log_gamma(0.5).unwrap();
        assert_abs_diff_eq!(lg, std::f64::consts::PI.sqrt().ln(), epsilon = 1e-14);
        assert_eq!(s, 1.0);
        // reflection by hand: Γ(-1.5) = 4√π/3
        let (lg, s) = log_gamma(-1.5).unwrap();
        assert_abs_diff_eq!(lg, (4.0 * std::f64::consts::PI.sqrt() / 3.0).ln(), epsilon = 1e-13);
        assert_eq!(s, 1.0);
        // Γ(-0.5) = -2√π
        let (lg, s) = log_gamma(-0.5).unwrap();
        assert_abs_diff_eq!(lg, (2.0 * std::f64::consts::PI.sqrt()).ln(), epsilon = 1e-13);
        assert_eq!(s, -1.0);
    }

    #[test]
    fn log_gamma_pole_errors() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-3.0).is_err());
        assert!(log_gamma(-7.0).is_err());
    }

    #[test]
    fn log_gamma_accuracy_on_range() {
        // against Γ(n) = (n-1)! and half-integer closed forms
        let mut fact = 1.0f64;
        for n in 2..20 {
            fact *= (n - 1) as f64;
            let (lg, s) = log_gamma(n as f64).unwrap();
            assert_eq!(s, 1.0);
            assert!((lg - fact.ln()).abs() <= 1e-13 * fact.ln().abs().max(1.0));
        }
    }

    #[test]
    fn kummer_anchors() {
        let ctl = SeriesControl::default();
        assert_abs_diff_eq!(kummer_m(0.7, 1.3, 0.0, ctl).unwrap(), 1.0);
        // M(1,1,x) = e^x
        assert_abs_diff_eq!(
            kummer_m(1.0, 1.0, 2.0, ctl).unwrap(),
            2.0f64.exp(),
            epsilon = 1e-13
        );
        // terminating series: M(-1, 0.5, 4) = 1 - 4/0.5 = -7
        assert_abs_diff_eq!(kummer_m(-1.0, 0.5, 4.0, ctl).unwrap(), -7.0, epsilon = 1e-13);
        // Kummer transformation branch
        assert_abs_diff_eq!(
            kummer_m(1.0, 1.0, -40.0, ctl).unwrap(),
            (-40.0f64).exp(),
            epsilon = 1e-50
        );
        assert!(kummer_m(1.0, 0.0, 1.0, ctl).is_err());
        assert!(kummer_m(1.0, 1.0, 500.0, ctl).is_err());
    }

    #[test]
    fn kummer_non_convergence_reported() {
        let ctl = SeriesControl {
            max_terms: 64,
            rel_tol: 1e-15,
            overflow_guard: 1e290,
        };
        assert!(matches!(
            kummer_m(1.0, 1.0, 300.0, ctl),
            Err(SpecFunError::NonConvergence(_))
        ));
    }

    #[test]
    fn hermite_integer_orders_match_polynomials() {
        // explicit polynomials via the recurrence H_{n+1} = 2x H_n - 2n H_{n-1}
        let xs = [-3.3, -1.0, -0.2, 0.0, 0.4, 1.7, 2.9];
        for &x in &xs {
            let mut h0 = 1.0f64;
            let mut h1 = 2.0 * x;
            assert_abs_diff_eq!(hermite_nu(0.0, x).unwrap(), h0, epsilon = 1e-10);
            assert!((hermite_nu(1.0, x).unwrap() - h1).abs() <= 1e-10 * h1.abs().max(1.0));
            for n in 1..10 {
                let h2 = 2.0 * x * h1 - 2.0 * n as f64 * h0;
                let got = hermite_nu((n + 1) as f64, x).unwrap();
                assert!(
                    (got - h2).abs() <= 1e-10 * h2.abs().max(1.0),
                    "H_{}({x}) = {got}, want {h2}",
                    n + 1
                );
                h0 = h1;
                h1 = h2;
            }
        }
    }

    #[test]
    fn hermite_h2_at_one() {
        // H_2(x) = 4x^2 - 2
        assert_abs_diff_eq!(hermite_nu(2.0, 1.0).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn hermite_real_order_against_ode_oracle() {
        // independent oracle: integrate y'' - 2xy' + 2νy = 0 from the series
        // initial data y(0) = 2^ν √π / Γ((1-ν)/2), y'(0) = -2^{ν+1} √π / Γ(-ν/2)
        let sqrt_pi = std::f64::consts::PI.sqrt();
        for &(nu, x_target) in &[(1.5f64, 0.7f64), (-1.5, 0.3), (2.5, -1.2), (0.5, 2.0)] {
            let y0 = 2.0f64.powf(nu) * sqrt_pi * recip_gamma((1.0 - nu) / 2.0);
            let dy0 = -(2.0f64.powf(nu + 1.0)) * sqrt_pi * recip_gamma(-nu / 2.0);
            // fixed-step RK4 on (y, y')
            let n = 40_000;
            let h = x_target / n as f64;
            let mut y = y0;
            let mut dy = dy0;
            let rhs = |x: f64, y: f64, dy: f64| -> (f64, f64) { (dy, 2.0 * x * dy - 2.0 * nu * y) };
            let mut x = 0.0;
            for _ in 0..n {
                let k1 = rhs(x, y, dy);
                let k2 = rhs(x + h / 2.0, y + h / 2.0 * k1.0, dy + h / 2.0 * k1.1);
                let k3 = rhs(x + h / 2.0, y + h / 2.0 * k2.0, dy + h / 2.0 * k2.1);
                let k4 = rhs(x + h, y + h * k3.0, dy + h * k3.1);
                y += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
                dy += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
                x += h;
            }
            let got = hermite_nu(nu, x_target).unwrap();
            assert!(
                (got - y).abs() <= 1e-8 * y.abs().max(1.0),
                "H_{nu}({x_target}): series {got} vs ODE {y}"
            );
        }
    }

    #[test]
    fn hermite_recurrence_residual_grid() {
        let nus = [-1.5, -0.5, 0.5, 1.5, 2.5, 3.5, 4.5, 5.5];
        for &nu in &nus {
            let mut x = -4.0;
            while x <= 4.0 {
                let hm = hermite_nu(nu - 1.0, x).unwrap();
                let h0 = hermite_nu(nu, x).unwrap();
                let hp = hermite_nu(nu + 1.0, x).unwrap();
                let res = hp - 2.0 * x * h0 + 2.0 * nu * hm;
                assert!(
                    res.abs() <= 1e-8 * hp.abs().max(1.0),
                    "recurrence residual {res} at nu={nu}, x={x}"
                );
                x += 0.5;
            }
        }
    }

    #[test]
    fn hermite_derivative_identity() {
        // d/dx H_ν = 2ν H_{ν-1}, finite differences
        for &nu in &[-1.5, 0.5, 2.5, 5.5] {
            let mut x = -4.0;
            while x <= 4.0 {
                let h = 1e-5;
                let fd =
                    (hermite_nu(nu, x + h).unwrap() - hermite_nu(nu, x - h).unwrap()) / (2.0 * h);
                let want = 2.0 * nu * hermite_nu(nu - 1.0, x).unwrap();
                assert!(
                    (fd - want).abs() <= 1e-6 * want.abs().max(1.0),
                    "derivative identity at nu={nu}, x={x}: {fd} vs {want}"
                );
                x += 0.5;
            }
        }
    }

    #[test]
    fn hermite_against_frozen_reference_values() {
        // frozen from an independent high-precision evaluation
        for (nu, x, want) in [
            (1.5, 0.7, 1.0862002679316124),
            (-1.5, 0.3, 0.45896722289535385),
            (2.5, -1.2, 5.673327790008349),
            (0.5, 2.0, 2.0283956544967319),
        ] {
            let got = hermite_nu(nu, x).unwrap();
            assert!(
                (got - want).abs() <= 1e-10 * want.abs(),
                "H_{nu}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn pcf_anchors() {
        // D_0(z) = e^{-z^2/4}
        assert_abs_diff_eq!(pcf_d(0.0, 2.0).unwrap(), (-1.0f64).exp(), epsilon = 1e-13);
        // D_1(z) = z e^{-z^2/4}; H_1(x) = 2x reduction by hand
        assert_abs_diff_eq!(pcf_d(1.0, 1.0).unwrap(), (-0.25f64).exp(), epsilon = 1e-13);
    }

    #[test]
    fn pcf_satisfies_weber_equation() {
        // y'' + (ν + 1/2 − z²/4) y = 0, second central difference
        for &nu in &[-0.7, 0.3, 1.3, 2.6] {
            let mut z = -3.0;
            while z <= 3.0 {
                let h = 1e-4;
                let ym = pcf_d(nu, z - h).unwrap();
                let y0 = pcf_d(nu, z).unwrap();
                let yp = pcf_d(nu, z + h).unwrap();
                let ypp = (yp - 2.0 * y0 + ym) / (h * h);
                let res = ypp + (nu + 0.5 - z * z / 4.0) * y0;
                assert!(
                    res.abs() <= 1e-6 * y0.abs().max(1.0),
                    "Weber residual {res} at nu={nu}, z={z}"
                );
                z += 0.5;
            }
        }
    }

    #[test]
    fn hermite_out_of_range_guard() {
        assert!(hermite_nu(61.0, 0.5).is_err());
    }
}
