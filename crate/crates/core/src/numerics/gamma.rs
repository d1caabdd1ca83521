//! Complex Gamma by shift-and-Stirling with reflection, and real digamma.

use super::{ensure_finite, ensure_finite_real, Complex};
use crate::error::{Error, Result};
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// `B_{2k} / (2k (2k-1))`, k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Below this modulus the argument is shifted up before applying Stirling.
const STIRLING_RADIUS: f64 = 15.0;

fn is_nonpositive_integer(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `ln sin(pi z)` on some branch, without overflow for large `|Im z|`.
///
/// Only the exponential of the result is branch-independent; callers use it
/// inside `exp`.
pub fn ln_sin_pi(z: Complex) -> Complex {
    let i = Complex::i();
    if z.im.abs() < 5.0 {
        return (z * PI).sin().ln();
    }
    let ln_2i = Complex::new(2f64.ln(), PI / 2.0);
    if z.im > 0.0 {
        // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i), |e^{2 i pi z}| < 1
        let w = (i * 2.0 * PI * z).exp();
        -i * PI * z + (w - 1.0).ln() - ln_2i
    } else {
        // sin(pi z) = e^{i pi z} (1 - e^{-2 i pi z}) / (2i)
        let w = (-i * 2.0 * PI * z).exp();
        i * PI * z + (1.0 - w).ln() - ln_2i
    }
}

fn ln_gamma_right(z: Complex) -> Complex {
    // shift until |z + n| is large enough for the asymptotic series
    let mut shift = Complex::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < STIRLING_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

/// Logarithm of the Gamma function. The imaginary part is only defined
/// modulo `2 pi`; `exp(ln_gamma(z)) = gamma(z)` is what is guaranteed.
pub fn ln_gamma(z: Complex) -> Result<Complex> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("ln_gamma", format!("non-finite argument {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::pole("gamma", z));
    }
    let r = if z.re < 0.5 {
        Complex::new(LN_PI, 0.0) - ln_sin_pi(z) - ln_gamma_right(1.0 - z)
    } else {
        ln_gamma_right(z)
    };
    ensure_finite(r, "ln_gamma")
}

/// Complex Gamma function, principal values.
pub fn gamma(z: Complex) -> Result<Complex> {
    let l = ln_gamma(z)?;
    // exact at small positive integers, where exp/ln round-trips lose an ulp
    if z.im == 0.0 && z.re >= 1.0 && z.re <= 21.0 && z.re.fract() == 0.0 {
        let n = z.re as u32;
        let f: f64 = (1..n).map(f64::from).product();
        return Ok(Complex::new(f, 0.0));
    }
    ensure_finite(l.exp(), "gamma")
}

/// Digamma `psi = Gamma'/Gamma` on the positive real axis.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("digamma", format!("x = {x} (need x > 0)")));
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // B_{2k} / (2k), k = 1..7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (x * x);
    let mut p = inv2;
    let mut series = 0.0;
    for c in C {
        series += c * p;
        p *= inv2;
    }
    ensure_finite_real(acc + x.ln() - 0.5 / x - series, "digamma")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn classical_values() {
        assert!(rel(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-15);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(4.0, 0.0)).unwrap(), c(6.0, 0.0)) < 1e-15);
        // Gamma(-1/2) = -2 sqrt(pi)
        assert!(rel(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
        // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
        let t = 3.7;
        let g = gamma(c(0.5, t)).unwrap();
        assert!((g.norm_sqr() - PI / (PI * t).cosh()).abs() < 5e-14 * g.norm_sqr(), "{}", g.norm_sqr() / (PI / (PI * t).cosh()) - 1.0);
    }

    #[test]
    fn poles_are_errors() {
        for z in [0.0, -1.0, -2.0, -17.0] {
            assert!(matches!(gamma(c(z, 0.0)), Err(Error::Pole { .. })));
        }
    }

    #[test]
    fn large_imaginary_part_stays_finite_in_log_form() {
        // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t): check the log for t = 1e4
        let t = 1e4;
        let l = ln_gamma(c(0.5, t)).unwrap();
        let expected = 0.5 * (PI.ln() - (PI * t - 2f64.ln()));
        assert!((l.re - expected).abs() < 1e-9);
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-15);
        assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-15);
        let e = 2.0 - EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(1.5).unwrap() - e).abs() < 1e-15);
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.0).is_err());
    }

    #[test]
    fn digamma_recurrence_on_log_grid() {
        for i in 0..=50 {
            let x = 10f64.powf(-2.0 + 5.0 * i as f64 / 50.0);
            let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
            assert!(d.abs() < 1e-12 * (1.0 / x).max(1.0), "x = {x}: {d}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn recurrence_in_strip(re in -5.0f64..5.0, im in -100.0f64..100.0) {
            let z = c(re, im);
            prop_assume!(!crate::numerics::near_integer(z, 1e-3));
            let lhs = ln_gamma(z + 1.0).unwrap();
            let rhs = ln_gamma(z).unwrap() + z.ln();
            // compare as exp(lhs - rhs) = 1 so the branch of the imaginary part drops out
            let d = (lhs - rhs).exp() - 1.0;
            prop_assert!(d.norm() < 1e-12, "z = {z}: {d}");
        }

        #[test]
        fn reflection(re in -4.0f64..4.0, im in -20.0f64..20.0) {
            let z = c(re, im);
            prop_assume!(!crate::numerics::near_integer(z, 1e-2));
            let l = ln_gamma(z).unwrap() + ln_gamma(1.0 - z).unwrap() + ln_sin_pi(z) - LN_PI;
            prop_assert!((l.exp() - 1.0).norm() < 1e-12, "z = {z}");
        }
    }
}
