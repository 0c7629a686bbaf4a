//! Minimal double-double arithmetic for the few places where f64 loses the
//! fight: the Hermite function combines Kummer sums of size e^{x²} into a
//! result of size (2x)^ν, and the cancellation eats half the mantissa by
//! x ≈ 4. Only +, −, ×, ÷ are needed; the reciprocal gamma comes from a
//! Taylor table so no transcendental dd functions are required.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// √π to double-double precision.
    pub const SQRT_PI: Dd = Dd {
        hi: 1.772453850905516,
        lo: -7.666586499825799e-17,
    };

    #[inline]
    pub fn from(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r2 = r.sub(other.mul_f64(q2));
        let q3 = r2.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        let (hi, lo2) = quick_two_sum(hi, lo + q3);
        Dd { hi, lo: lo2 }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        self.add(Dd::from(b))
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.f64().abs()
    }
}

/// Taylor coefficients of 1/Γ(1+z) at z = 0, split into double-double.
const RECIP_GAMMA_SERIES: [(f64, f64); 44] = [
    (1.0, 0.0),
    (0.5772156649015329, -4.942915152430645e-18),
    (-0.6558780715202539, 2.137185197068536e-17),
    (-0.04200263503409524, 1.4920306285650505e-18),
    (0.16653861138229148, 1.0189144546842026e-17),
    (-0.04219773455554433, -3.3579992682480134e-18),
    (-0.009621971527876973, -5.300031368830263e-19),
    (0.0072189432466631, -3.6006537063394283e-19),
    (-0.0011651675918590652, 5.659947853880981e-20),
    (-0.00021524167411495098, 2.3758686180729364e-21),
    (0.0001280502823881162, -9.359124499198967e-21),
    (-2.013485478078824e-05, 3.0488773972037385e-23),
    (-1.2504934821426706e-06, -2.66214092271898e-23),
    (1.133027231981696e-06, -4.622235212104869e-23),
    (-2.056338416977607e-07, -3.0061601618645134e-24),
    (6.116095104481416e-09, -2.693458298171306e-25),
    (5.002007644469223e-09, -1.538123614056751e-26),
    (-1.18127457048702e-09, -1.0052356155716208e-25),
    (1.0434267116911005e-10, -2.9298419956825035e-27),
    (7.782263439905071e-12, 4.397255556595848e-28),
    (-3.696805618642206e-12, 2.7050034921703885e-28),
    (5.100370287454476e-13, 2.253001461085878e-29),
    (-2.0583260535665066e-14, -1.4747481491954336e-30),
    (-5.348122539423018e-15, -1.6208384686356568e-31),
    (1.2267786282382608e-15, -5.072915146023867e-32),
    (-1.1812593016974588e-16, 6.422257838149681e-33),
    (1.1866922547516004e-18, -4.2037265494226014e-35),
    (1.4123806553180319e-18, -7.576946701116294e-35),
    (-2.29874568443537e-19, 1.3335481917069145e-36),
    (1.7144063219273374e-20, 5.230715150426935e-38),
    (1.337351730493693e-22, 2.6434059649079228e-39),
    (-2.0542335517666728e-22, 3.6856892424568953e-39),
    (2.736030048608e-23, -2.8599315416397774e-39),
    (-1.7323564459105165e-24, -1.7540883508197598e-40),
    (-2.3606190244992872e-26, -1.260225016995785e-42),
    (1.8649829417172943e-26, 8.774775617290965e-43),
    (-2.2180956242071973e-27, 6.809640315042753e-44),
    (1.2977819749479937e-28, -3.325692466804093e-45),
    (1.1806974749665284e-30, -4.184949275966516e-48),
    (-1.124584349277088e-30, -2.01842815487355e-47),
    (1.277085175140866e-31, 1.0535632367878753e-47),
    (-7.391451169615141e-33, 1.8114253268366145e-49),
    (1.1347502575542158e-35, -4.9791058715013306e-52),
    (4.639134641058722e-35, 2.6040634859975098e-52),
];

/// 1/Γ(z) in double-double for real z, with Γ's poles mapped to exact
/// zeros. Reduction to 1/Γ(1+f), f ∈ [−0.5, 0.5), is by exact-ish dd
/// products of the recurrence factors, so no dd exp or log is needed.
pub fn recip_gamma_dd(z: f64) -> Dd {
    if z <= 0.0 && (z - z.round()).abs() < 1e-13 {
        return Dd::ZERO;
    }
    // 1/Γ(z) = [z (z+1) … (t−1)] / Γ(t) for z < t, t = 1 + f
    let f = z - z.round();
    let t = 1.0 + f;
    let mut series = Dd::ZERO;
    let fd = Dd::from(f);
    for &(hi, lo) in RECIP_GAMMA_SERIES.iter().rev() {
        series = series.mul(fd).add(Dd::new(hi, lo));
    }
    // series = 1/Γ(1+f) = 1/Γ(t)
    let steps = (t - z).round() as i64;
    if steps >= 0 {
        // z below t: multiply the factors z, z+1, …, t−1
        let mut acc = series;
        for j in 0..steps {
            acc = acc.mul_f64(z + j as f64);
        }
        acc
    } else {
        // z above t: divide by the factors t, t+1, …, z−1
        let mut acc = series;
        for j in 0..(-steps) {
            acc = acc.div(Dd::from(t + j as f64));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trip() {
        let a = Dd::from(1.0).div(Dd::from(3.0));
        let b = a.mul(Dd::from(3.0));
        assert!((b.f64() - 1.0).abs() < 1e-30);
        assert!(b.sub(Dd::ONE).abs() < 1e-30);
    }

    #[test]
    fn recip_gamma_dd_values() {
        // Γ(1) = 1, Γ(0.5) = √π, Γ(5) = 24
        assert!((recip_gamma_dd(1.0).f64() - 1.0).abs() < 1e-28);
        let want = 1.0 / std::f64::consts::PI.sqrt();
        assert!((recip_gamma_dd(0.5).f64() - want).abs() < 1e-16);
        assert!((recip_gamma_dd(5.0).f64() - 1.0 / 24.0).abs() < 1e-18);
        // reflection by hand: Γ(-1.5) = 4√π/3
        let want = 3.0 / (4.0 * std::f64::consts::PI.sqrt());
        assert!((recip_gamma_dd(-1.5).f64() - want).abs() < 1e-17);
        // poles vanish exactly
        assert_eq!(recip_gamma_dd(0.0).f64(), 0.0);
        assert_eq!(recip_gamma_dd(-4.0).f64(), 0.0);
    }

    #[test]
    fn recip_gamma_dd_large_arguments() {
        // Γ(20) = 19!
        let fact19 = (2..20).map(|k| k as f64).product::<f64>();
        let got = recip_gamma_dd(20.0).f64();
        assert!((got - 1.0 / fact19).abs() <= 1e-16 * (1.0 / fact19));
    }
}
