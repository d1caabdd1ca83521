//! Euler–Maclaurin evaluation of `sum_{k >= 0} (k + a)^{-s}`.

use super::bernoulli::bernoulli_over_factorial;
use super::summation::ComplexSum;
use super::{ensure_finite, real_pow_neg, Complex, NumericPolicy};
use crate::error::{Error, Result};
use std::f64::consts::PI;

const MAX_BERNOULLI: usize = 110;

/// Euler–Maclaurin tail `sum_{k >= 0} (a + k)^{-s}` for `a` large relative to
/// `|s| / 2 pi`. Returns `None` when the correction terms stop decreasing
/// before reaching double-precision size; the caller should move `a` up.
pub fn euler_maclaurin_tail(s: Complex, a: f64) -> Option<Complex> {
    let a_pow = real_pow_neg(a, s); // a^{-s}
    let lead = a_pow * a / (s - 1.0) + a_pow * 0.5;
    let mut corr = Complex::new(0.0, 0.0);
    // term_k = B_{2k}/(2k)! (s)_{2k-1} a^{-s-2k+1}; the Pochhammer factor and
    // the power are carried together so neither overflows on its own
    let mut pp = a_pow / a * s; // (s)_1 a^{-s-1}
    let inv_a2 = 1.0 / (a * a);
    let mut prev = f64::INFINITY;
    for k in 1..MAX_BERNOULLI {
        let term = pp * bernoulli_over_factorial(k);
        let mag = term.norm();
        corr += term;
        let scale = (lead + corr).norm();
        if mag <= 1e-18 * scale || mag == 0.0 {
            return Some(lead + corr);
        }
        if mag > prev && k > 3 {
            return None;
        }
        prev = mag;
        let kk = 2.0 * k as f64;
        pp = pp * ((s + (kk - 1.0)) * inv_a2) * (s + kk);
    }
    None
}

/// `sum_{k >= 0} (k + alpha)^{-s}` on the analytic continuation, with the
/// first `n0` terms summed directly and an Euler–Maclaurin tail at
/// `alpha + n0`. `n0` comes from `|s|` and the policy's safety factor and is
/// doubled on failure.
pub fn hurwitz_series(s: Complex, alpha: f64, policy: &NumericPolicy) -> Result<Complex> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::domain("hurwitz_zeta", format!("non-finite s = {s}")));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::pole("hurwitz_zeta", s));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(
            "hurwitz_zeta",
            format!("alpha = {alpha} (need alpha > 0)"),
        ));
    }
    let mut factor = policy.series_safety_factor;
    for _ in 0..6 {
        let target = factor * (s.norm() / (2.0 * PI) + 10.0);
        let n0 = (target - alpha).ceil().max(0.0) as u64;
        let mut direct = ComplexSum::new(policy.extended());
        for n in 0..n0 {
            direct.add(real_pow_neg(n as f64 + alpha, s));
        }
        if let Some(tail) = euler_maclaurin_tail(s, n0 as f64 + alpha) {
            let mut total = direct;
            total.add(tail);
            return ensure_finite(total.value(), "hurwitz_zeta");
        }
        factor *= 2.0;
    }
    Err(Error::convergence(
        "hurwitz_zeta",
        format!("Euler-Maclaurin tail did not settle for s = {s}, alpha = {alpha}"),
    ))
}

/// Riemann zeta function, `zeta(s) = zeta(s, 1)`.
pub fn riemann_zeta(s: Complex, policy: &NumericPolicy) -> Result<Complex> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::pole("riemann_zeta", s));
    }
    hurwitz_series(s, 1.0, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn classical_values() {
        let p = NumericPolicy::default();
        let z2 = riemann_zeta(c(2.0, 0.0), &p).unwrap();
        assert!((z2 - PI * PI / 6.0).norm() < 1e-15);
        let z0 = riemann_zeta(c(0.0, 0.0), &p).unwrap();
        assert!((z0 + 0.5).norm() < 1e-15);
        // Apery's constant
        let z3 = riemann_zeta(c(3.0, 0.0), &p).unwrap();
        assert!((z3 - 1.202_056_903_159_594_2).norm() < 1e-15);
        // zeta(-1) = -1/12
        let zm1 = riemann_zeta(c(-1.0, 0.0), &p).unwrap();
        assert!((zm1 + 1.0 / 12.0).norm() < 1e-13, "{zm1}");
        assert!(matches!(
            riemann_zeta(c(1.0, 0.0), &p),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn first_zero_on_critical_line() {
        let p = NumericPolicy::default();
        let z = riemann_zeta(c(0.5, 14.134_725_141_734_693), &p).unwrap();
        assert!(z.norm() < 1e-13, "{z}");
    }

    #[test]
    fn large_height_value() {
        // reference from a 30-digit evaluation; binary64 phases of n^{-1000 i} limit this to ~1e-12
        let p = NumericPolicy::default();
        let z = riemann_zeta(c(0.5, 1000.0), &p).unwrap();
        assert!((z - c(0.356_334_367_194_396_1, 0.931_997_831_232_993_7)).norm() < 1e-11, "{z}");
    }

    #[test]
    fn heights_beyond_correction_overflow() {
        // the Euler-Maclaurin Pochhammer factor alone would overflow here
        let p = NumericPolicy::default();
        let z = hurwitz_series(c(0.5, 5000.0), 3.25, &p).unwrap();
        assert!((z - c(1.246_579_355_510_339_7, -0.939_267_640_866_486_5)).norm() < 1e-10, "{z}");
        let z = riemann_zeta(c(0.3, 12000.0), &p).unwrap();
        assert!((z - c(-2.112_410_922_595_509, 1.260_560_084_303_881)).norm() < 1e-9, "{z}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        // direct Dirichlet series plus the integral remainder bound for Re s >= 2
        #[test]
        fn matches_truncated_series(re in 2.0f64..6.0, im in -30.0f64..30.0) {
            let s = c(re, im);
            let p = NumericPolicy::default();
            let n = 20_000usize;
            let partial = ComplexSum::sum((1..=n).map(|k| real_pow_neg(k as f64, s)), true);
            let z = riemann_zeta(s, &p).unwrap();
            // |sum_{k>n} k^{-s}| <= |s| / (re - 1) n^{1-re} / re + n^{-re}
            let bound = (s.norm() / (re - 1.0) / re + 1.0) * (n as f64).powf(1.0 - re) + 1e-14;
            prop_assert!((z - partial).norm() <= bound, "s = {}: {} vs {}", s, z, partial);
        }
    }
}
