//! Hurwitz zeta, its truncated tails `zeta_x`, the Pochhammer symbol, and the
//! kernel `K(s) = (-2 pi i)^{s-1} Gamma(1 - s)`.
//!
//! `zeta_x(s, alpha) = sum_{n >= x} (n + alpha)^{-s}` drops the terms
//! `n = 0, ..., x - 1`, so `zeta_x(s, alpha) = zeta(s, x + alpha)`.

use crate::error::{Error, Result};
use crate::numerics::{
    ensure_finite, hurwitz_series, ln_gamma, real_pow_neg, Complex, ComplexSum, NumericPolicy,
};
use serde::Serialize;
use std::f64::consts::PI;

/// `s = sigma + i t` with `t > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripPoint {
    pub sigma: f64,
    pub t: f64,
}

impl StripPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !sigma.is_finite() || !t.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite point ({sigma}, {t})")));
        }
        if t <= 1.0 {
            return Err(Error::domain("StripPoint", format!("t = {t} (need t > 1)")));
        }
        Ok(StripPoint { sigma, t })
    }

    pub fn s(&self) -> Complex {
        Complex::new(self.sigma, self.t)
    }

    /// Fails unless `0 < sigma < 1`.
    pub fn require_critical_strip(&self, function: &'static str) -> Result<()> {
        if self.sigma > 0.0 && self.sigma < 1.0 {
            Ok(())
        } else {
            Err(Error::domain(function, format!("sigma = {} (need 0 < sigma < 1)", self.sigma)))
        }
    }
}

/// Cell geometry for `2 pi x y = t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellCoords {
    pub x: u64,
    pub y: f64,
    /// `[y]`, nearest integer, ties to even.
    pub nearest: i64,
    /// `||y||`, distance to the nearest integer.
    pub dist: f64,
    /// `a = ([y] - y) / y`.
    pub offset: f64,
}

impl CellCoords {
    /// Values of `y` within a few ulp of an integer are snapped onto it, so
    /// exact divisors (`t = 2 pi n`, `x | n`) land on `||y|| = 0`.
    pub fn new(t: f64, x: u64) -> Result<Self> {
        if x == 0 {
            return Err(Error::domain("CellCoords", "x = 0 (need x >= 1)"));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain("CellCoords", format!("t = {t}")));
        }
        let mut y = t / (2.0 * PI * x as f64);
        let nearest = y.round_ties_even();
        if (y - nearest).abs() <= 4.0 * f64::EPSILON * y {
            y = nearest;
        }
        let dist = (y - nearest).abs();
        Ok(CellCoords {
            x,
            y,
            nearest: nearest as i64,
            dist,
            offset: (nearest - y) / y,
        })
    }

    /// Membership in `A(t, eta)`: `||y|| < eta`.
    pub fn in_exceptional_set(&self, eta: f64) -> bool {
        self.dist < eta
    }
}

/// `(s)_n = Gamma(s + n) / Gamma(s)` by direct product for `n >= 0` and by
/// reciprocal product `1 / ((s - 1) ... (s - k))` for `n = -k < 0`.
pub fn pochhammer(s: Complex, n: i64) -> Result<Complex> {
    if n >= 0 {
        let mut p = Complex::new(1.0, 0.0);
        for k in 0..n {
            p *= s + k as f64;
        }
        return ensure_finite(p, "pochhammer");
    }
    let mut d = Complex::new(1.0, 0.0);
    for k in 1..=(-n) {
        let f = s - k as f64;
        if f.norm() == 0.0 {
            return Err(Error::pole("pochhammer", format!("({s})_{n}")));
        }
        d *= f;
    }
    ensure_finite(d.inv(), "pochhammer")
}

/// `zeta(s, alpha)` on the analytic continuation.
pub fn hurwitz_zeta(s: Complex, alpha: f64, policy: &NumericPolicy) -> Result<Complex> {
    hurwitz_series(s, alpha, policy)
}

/// `zeta_x(s, alpha) = sum_{n >= x} (n + alpha)^{-s}`; `x = 0` gives `zeta(s, alpha)`.
pub fn modified_hurwitz_zeta(
    s: Complex,
    alpha: f64,
    x: u64,
    policy: &NumericPolicy,
) -> Result<Complex> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(
            "modified_hurwitz_zeta",
            format!("alpha = {alpha} (need alpha > 0)"),
        ));
    }
    // evaluating at the shifted parameter avoids cancelling the dropped terms
    hurwitz_series(s, alpha + x as f64, policy)
}

/// `zeta_x(s, alpha)` for `x = 0, 1, 2, ...` at fixed `(s, alpha)`, built by
/// subtracting one term at a time from `zeta(s, alpha)`.
pub struct ModifiedZetaLadder {
    s: Complex,
    alpha: f64,
    x: u64,
    acc: ComplexSum,
}

impl ModifiedZetaLadder {
    pub fn new(s: Complex, alpha: f64, policy: &NumericPolicy) -> Result<Self> {
        let z = hurwitz_zeta(s, alpha, policy)?;
        let mut acc = ComplexSum::new(policy.extended());
        acc.add(z);
        Ok(ModifiedZetaLadder { s, alpha, x: 0, acc })
    }

    /// Current `x`.
    pub fn x(&self) -> u64 {
        self.x
    }

    /// `zeta_x(s, alpha)` at the current `x`.
    pub fn value(&self) -> Complex {
        self.acc.value()
    }

    /// Moves to `x + 1` and returns the new value.
    pub fn step(&mut self) -> Complex {
        self.acc.add(-real_pow_neg(self.x as f64 + self.alpha, self.s));
        self.x += 1;
        self.value()
    }
}

/// `ln(-2 pi i) = ln(2 pi) - i pi/2`, the principal branch.
fn ln_minus_2pi_i() -> Complex {
    Complex::new((2.0 * PI).ln(), -PI / 2.0)
}

fn kernel_pole_check(s: Complex) -> Result<()> {
    if s.im == 0.0 && s.re >= 1.0 && s.re.fract() == 0.0 {
        return Err(Error::pole("kernel_K", s));
    }
    Ok(())
}

/// `ln K(s)`, finite for large `|Im s|` where `K` itself would lose range.
pub fn ln_kernel_K(s: Complex) -> Result<Complex> {
    kernel_pole_check(s)?;
    Ok((s - 1.0) * ln_minus_2pi_i() + ln_gamma(1.0 - s)?)
}

/// `K(s) = (-2 pi i)^{s-1} Gamma(1 - s)`.
pub fn kernel_K(s: Complex) -> Result<Complex> {
    ensure_finite(ln_kernel_K(s)?.exp(), "kernel_K")
}

/// `|K(s)|^2`.
pub fn kernel_K_abs_sq(s: Complex) -> Result<f64> {
    let l = ln_kernel_K(s)?;
    let v = (2.0 * l.re).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { function: "kernel_K" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{riemann_zeta, EULER_GAMMA};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn pol() -> NumericPolicy {
        NumericPolicy::default()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(c(0.3, 7.0), 0).unwrap(), c(1.0, 0.0));
        assert_eq!(pochhammer(c(2.0, 0.0), 3).unwrap(), c(24.0, 0.0));
        assert!((pochhammer(c(5.0, 0.0), -1).unwrap() - 0.25).norm() < 1e-16);
        // (s)_{-2} = 1/((s-1)(s-2))
        let s = c(0.5, 2.0);
        let e = ((s - 1.0) * (s - 2.0)).inv();
        assert!((pochhammer(s, -2).unwrap() - e).norm() < 1e-16);
        assert!(matches!(pochhammer(c(1.0, 0.0), -1), Err(Error::Pole { .. })));
        // (s)_n (s + n)_m = (s)_{n+m}
        let a = pochhammer(s, 3).unwrap() * pochhammer(s + 3.0, -2).unwrap();
        assert!((a - pochhammer(s, 1).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn hurwitz_special_values() {
        let z = hurwitz_zeta(c(2.0, 0.0), 1.0, &pol()).unwrap();
        assert!((z - PI * PI / 6.0).norm() < 1e-15);
        let z = hurwitz_zeta(c(2.0, 0.0), 0.5, &pol()).unwrap();
        assert!((z - PI * PI / 2.0).norm() < 1e-14);
        assert!(hurwitz_zeta(c(1.0, 0.0), 0.5, &pol()).is_err());
        assert!(matches!(
            hurwitz_zeta(c(2.0, 0.0), 0.0, &pol()),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn hurwitz_self_consistent_at_doubled_cutoff() {
        let s = c(0.5, 50.0);
        let a = hurwitz_zeta(s, 0.3, &pol()).unwrap();
        let doubled = NumericPolicy {
            series_safety_factor: 2.0 * pol().series_safety_factor,
            ..pol()
        };
        let b = hurwitz_zeta(s, 0.3, &doubled).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn modified_conventions() {
        let s = c(3.0, 0.0);
        let z3 = riemann_zeta(s, &pol()).unwrap();
        assert_eq!(
            modified_hurwitz_zeta(s, 0.7, 0, &pol()).unwrap(),
            hurwitz_zeta(s, 0.7, &pol()).unwrap()
        );
        // zeta_1(3, 1) drops the n = 0 term 1^{-3}
        let m1 = modified_hurwitz_zeta(s, 1.0, 1, &pol()).unwrap();
        assert!((m1 - (z3 - 1.0)).norm() < 1e-15);
        let m2 = modified_hurwitz_zeta(s, 1.0, 2, &pol()).unwrap();
        assert!((m2 - (z3 - 1.0 - 0.125)).norm() < 1e-15);
    }

    #[test]
    fn modified_against_direct_tail() {
        // sum_{n >= 7} (n + 1/2)^{-s} at s = 0.75 + 100i: the head is summed
        // directly up to n = 2000, the rest by an Euler-Maclaurin tail at 2000.5
        let s = c(0.75, 100.0);
        let head = ComplexSum::sum((7..2000).map(|n| real_pow_neg(n as f64 + 0.5, s)), true);
        let tail = crate::numerics::euler_maclaurin_tail(s, 2000.5).unwrap();
        let direct = head + tail;
        let m = modified_hurwitz_zeta(s, 0.5, 7, &pol()).unwrap();
        assert!((m - direct).norm() < 1e-11, "{m} vs {direct}");
    }

    #[test]
    fn ladder_matches_direct() {
        let s = c(0.5, 300.0);
        let mut ladder = ModifiedZetaLadder::new(s, 1.0, &pol()).unwrap();
        for x in 1..=60u64 {
            let v = ladder.step();
            assert_eq!(ladder.x(), x);
            let d = modified_hurwitz_zeta(s, 1.0, x, &pol()).unwrap();
            assert!((v - d).norm() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn derivative_identity_second_order() {
        // d/d alpha zeta_1(u, alpha) = -u zeta_1(u + 1, alpha)
        let u = c(0.5, 10.0);
        let a = 0.4;
        let exact = -u * modified_hurwitz_zeta(u + 1.0, a, 1, &pol()).unwrap();
        let err = |h: f64| {
            let f = |al: f64| modified_hurwitz_zeta(u, al, 1, &pol()).unwrap();
            ((f(a + h) - f(a - h)) / (2.0 * h) - exact).norm()
        };
        let (e3, e4) = (err(1e-3), err(1e-4));
        let order = (e3 / e4).log10();
        assert!(order >= 1.8, "observed order {order} ({e3:e}, {e4:e})");
    }

    #[test]
    fn remainder_beyond_stationary_range() {
        // zeta_1(s, alpha) - alpha^{1-s}/(s-1) + alpha^{-s}/2 = O(t alpha^{-sigma-1})
        let t = 200.0;
        let s = c(0.5, t);
        for alpha in [2.0 * t, 4.0 * t] {
            let z = modified_hurwitz_zeta(s, alpha, 1, &pol()).unwrap();
            let lead = real_pow_neg(alpha, s - 1.0) / (s - 1.0) - real_pow_neg(alpha, s) * 0.5;
            let bound = t * alpha.powf(-1.5);
            assert!((z - lead).norm() <= bound, "alpha = {alpha}");
        }
    }

    #[test]
    fn kernel_magnitude() {
        // |K(1/2 + it)|^2 = 1 + O(1/t)
        let k = kernel_K_abs_sq(c(0.5, 1e3)).unwrap();
        assert!((k - 1.0).abs() < 1e-2);
        let t = 1e4;
        let k = kernel_K_abs_sq(c(0.3, t)).unwrap() * (t / (2.0 * PI)).powf(2.0 * 0.3 - 1.0);
        assert!((k - 1.0).abs() < 1e-3, "{k}");
        assert!(matches!(kernel_K(c(2.0, 0.0)), Err(Error::Pole { .. })));
        // the two spellings (-2 pi i)^{s-1} and (2 pi / i)^{s-1} coincide
        let s = c(0.3, 5.0);
        let alt = ((Complex::new(2.0 * PI, 0.0) / Complex::i()).ln() * (s - 1.0)).exp()
            * crate::numerics::gamma(1.0 - s).unwrap();
        assert!((kernel_K(s).unwrap() - alt).norm() < 1e-12 * alt.norm());
    }

    #[test]
    fn kernel_times_harmonic_sum() {
        // |K(1/2 + it)|^2 H(y) - (log y + gamma) -> 0, x = 1
        let t = 1e4;
        let y = t / (2.0 * PI);
        let h: f64 = (1..=y.floor() as u64).map(|n| 1.0 / n as f64).sum();
        let d = kernel_K_abs_sq(c(0.5, t)).unwrap() * h - (y.ln() + EULER_GAMMA);
        assert!(d.abs() < 1e-3, "{d}");
    }

    #[test]
    fn cell_coords_geometry() {
        let t = 2.0 * PI * 720.0;
        let cc = CellCoords::new(t, 16).unwrap();
        assert_eq!(cc.nearest, 45);
        assert_eq!(cc.dist, 0.0);
        assert_eq!(cc.offset, 0.0);
        let cc = CellCoords::new(2.0 * PI * 10.0, 4).unwrap();
        // y = 2.5 ties to even
        assert_eq!(cc.nearest, 2);
        assert!((cc.dist - 0.5).abs() < 1e-15);
        assert!(CellCoords::new(100.0, 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn hurwitz_recurrence(re in -2.0f64..4.0, im in -200.0f64..200.0, alpha in 0.05f64..5.0) {
            let s = c(re, im);
            prop_assume!((s - 1.0).norm() > 1e-3);
            let lhs = hurwitz_zeta(s, alpha + 1.0, &pol()).unwrap();
            let rhs = hurwitz_zeta(s, alpha, &pol()).unwrap() - real_pow_neg(alpha, s);
            let scale = 1.0 + lhs.norm() + real_pow_neg(alpha, s).norm();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * scale, "s = {}, alpha = {}", s, alpha);
        }

        #[test]
        fn definition_consistency(re in 0.1f64..0.9, im in 1.0f64..500.0, alpha in 0.05f64..1.0, x in 0u64..40) {
            let s = c(re, im);
            let m = modified_hurwitz_zeta(s, alpha, x, &pol()).unwrap();
            let head = ComplexSum::sum((0..x).map(|n| real_pow_neg(n as f64 + alpha, s)), true);
            let full = hurwitz_zeta(s, alpha, &pol()).unwrap();
            let scale = 1.0 + head.norm() + full.norm();
            prop_assert!((m + head - full).norm() <= 1e-11 * scale);
        }

        #[test]
        fn cell_reconstructs_t(t in 7.0f64..1e5, x in 1u64..1000) {
            let cc = CellCoords::new(t, x).unwrap();
            let back = 2.0 * PI * x as f64 * cc.y;
            prop_assert!((back - t).abs() <= 8.0 * f64::EPSILON * t);
            prop_assert!(cc.dist >= 0.0 && cc.dist <= 0.5);
            if cc.dist < 0.5 {
                prop_assert!((cc.offset.abs() - cc.dist / cc.y).abs() <= 1e-15 * (1.0 + cc.offset.abs()));
            }
        }
    }
}
