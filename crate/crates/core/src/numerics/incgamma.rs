//! Upper incomplete Gamma function for complex order and argument.

use super::gamma::{gamma, ln_gamma};
use super::{ensure_finite, Complex};
use crate::error::{Error, Result};

const MAX_CF_TERMS: usize = 200_000;
const SERIES_RADIUS: f64 = 1.5;

/// Below this ratio `|z| / |a|` the continued fraction loses accuracy (or
/// settles on a wrong value) and the Kummer-type series is used instead.
const CF_RATIO: f64 = 0.975;

/// `Gamma(a, z) z^{-a} e^{z}`, principal branch.
///
/// For `|z| >= 0.975 |a|` this is the Legendre continued fraction; otherwise
/// `Gamma(a) z^{-a} e^z - sum_n z^n / (a)_{n+1}`, with the first product
/// formed in log space so large `|Im a|` does not overflow.
pub fn upper_incomplete_gamma_scaled(a: Complex, z: Complex) -> Result<Complex> {
    let a_is_pole = a.im == 0.0 && a.re <= 0.0 && a.re.fract() == 0.0;
    if z.norm() > 0.0 && z.norm() < CF_RATIO * a.norm() && !a_is_pole {
        if let Some(series) = kummer_series(a, z) {
            let lead = (ln_gamma(a)? - a * z.ln() + z).exp();
            return ensure_finite(lead - series, "upper_incomplete_gamma");
        }
    }
    legendre_cf(a, z)
}

/// `sum_n z^n / (a)_{n+1} = gamma(a, z) z^{-a} e^{z}`; `None` if the terms
/// grow or fail to settle.
fn kummer_series(a: Complex, z: Complex) -> Option<Complex> {
    let mut term = a.inv();
    let mut sum = term;
    let first = term.norm();
    for n in 1..100_000 {
        term *= z / (a + n as f64);
        sum += term;
        let mag = term.norm();
        if mag > 1e3 * first {
            return None;
        }
        if mag < 1e-17 * sum.norm() {
            return Some(sum);
        }
    }
    None
}

/// Legendre continued fraction
/// `1 / (z + 1 - a - 1 (1 - a) / (z + 3 - a - 2 (2 - a) / ...))`
/// by the modified Lentz algorithm. Valid for `z` off the closed negative
/// real axis and accurate once `|z|` is comparable to `|a|` or larger.
fn legendre_cf(a: Complex, z: Complex) -> Result<Complex> {
    if z.norm() == 0.0 || (z.im == 0.0 && z.re < 0.0) {
        return Err(Error::domain(
            "upper_incomplete_gamma",
            format!("z = {z} on the branch cut"),
        ));
    }
    let tiny = Complex::new(1e-300, 0.0);
    let fix = |w: Complex| if w.norm() < 1e-300 { tiny } else { w };
    let b0 = z + 1.0 - a;
    let mut f = fix(b0);
    let mut c = f;
    let mut d = Complex::new(0.0, 0.0);
    for n in 1..MAX_CF_TERMS {
        let nf = n as f64;
        let an = (a - nf) * nf; // -n (n - a)
        let bn = z + 2.0 * nf + 1.0 - a;
        d = fix(bn + an * d).inv();
        c = fix(bn + an / c);
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return ensure_finite(f.inv(), "upper_incomplete_gamma");
        }
    }
    Err(Error::convergence(
        "upper_incomplete_gamma",
        format!("continued fraction did not converge for a = {a}, z = {z}"),
    ))
}

/// `gamma(a, z) z^{-a} = sum_n (-z)^n / (n! (a + n))`, for small `|z|`.
fn lower_series_scaled(a: Complex, z: Complex) -> Result<Complex> {
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term / a;
    for n in 1..500 {
        term *= -z / n as f64;
        let add = term / (a + n as f64);
        sum += add;
        if add.norm() < 1e-17 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::convergence(
        "upper_incomplete_gamma",
        format!("series did not converge for a = {a}, z = {z}"),
    ))
}

/// `Gamma(a, z) = int_z^inf w^{a-1} e^{-w} dw` with the principal branch of
/// `z^a`.
pub fn upper_incomplete_gamma(a: Complex, z: Complex) -> Result<Complex> {
    if z.norm() == 0.0 {
        if a.re > 0.0 {
            return gamma(a);
        }
        return Err(Error::domain(
            "upper_incomplete_gamma",
            format!("Gamma(a, 0) diverges for a = {a}"),
        ));
    }
    let a_is_pole = a.im == 0.0 && a.re <= 0.0 && a.re.fract() == 0.0;
    if z.norm() < SERIES_RADIUS && !a_is_pole && !(z.im == 0.0 && z.re < 0.0) {
        let lower = (a * z.ln()).exp() * lower_series_scaled(a, z)?;
        return ensure_finite(gamma(a)? - lower, "upper_incomplete_gamma");
    }
    let scaled = upper_incomplete_gamma_scaled(a, z)?;
    ensure_finite((a * z.ln() - z).exp() * scaled, "upper_incomplete_gamma")
}
