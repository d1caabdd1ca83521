//! The exceptional set `A(t, eta)`, fractional-part densities and the
//! hyperbola double sums.
//!
//! When `n = t/2pi` is an integer all fractional parts are formed in exact
//! integer arithmetic as `(n mod x) / x`.

use crate::error::{Error, Result};
use crate::hurwitz::CellCoords;
use crate::numerics::{digamma, riemann_zeta, Complex, NumericPolicy, RealSum, EULER_GAMMA};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// `t/2pi` counts as an integer when this close, relatively.
const INTEGER_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalSet {
    pub t: f64,
    pub eta: f64,
    /// Ascending.
    pub members: Vec<u64>,
}

impl ExceptionalSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

fn check_eta(function: &'static str, eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 0.5 {
        Ok(())
    } else {
        Err(Error::domain(function, format!("eta = {eta} (need 0 < eta < 1/2)")))
    }
}

fn check_delta(function: &'static str, delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(function, format!("delta = {delta} (need 0 < delta < 1)")))
    }
}

/// `Some(n)` when `t/2pi` is an integer `n` up to rounding.
pub fn integer_height(t: f64) -> Option<u64> {
    let y = t / (2.0 * PI);
    let n = y.round();
    (n >= 1.0 && (y - n).abs() <= INTEGER_REL_TOL * y).then_some(n as u64)
}

/// `A(t, eta) = {1 <= x <= t/2pi : ||t/(2 pi x)|| < eta}` by direct scan.
pub fn enumerate_A(t: f64, eta: f64) -> Result<ExceptionalSet> {
    check_eta("enumerate_A", eta)?;
    if !(t > 2.0 * PI) || !t.is_finite() {
        return Err(Error::domain("enumerate_A", format!("t = {t} (need t > 2 pi)")));
    }
    let members: Vec<u64> = match integer_height(t) {
        Some(n) => (1..=n)
            .into_par_iter()
            .filter(|&x| {
                let r = n % x;
                let d = r.min(x - r);
                (d as f64) < eta * x as f64
            })
            .collect(),
        None => {
            let top = (t / (2.0 * PI)).floor() as u64;
            (1..=top)
                .into_par_iter()
                .filter(|&x| CellCoords::new(t, x).map(|c| c.dist < eta).unwrap_or(false))
                .collect()
        }
    };
    Ok(ExceptionalSet { t, eta, members })
}

/// `sum_{m >= 1} delta / (m (m + delta)) = gamma + psi(1 + delta)`.
pub fn saffari_density(delta: f64) -> Result<f64> {
    check_delta("saffari_density", delta)?;
    Ok(EULER_GAMMA + digamma(1.0 + delta)?)
}

/// Partial sum of the series for [`saffari_density`] up to `m = terms`.
pub fn saffari_partial_sum(delta: f64, terms: u64) -> Result<f64> {
    check_delta("saffari_partial_sum", delta)?;
    Ok(RealSum::sum(
        (1..=terms).map(|m| {
            let m = m as f64;
            delta / (m * (m + delta))
        }),
        true,
    ))
}

/// `(t/2pi) (1 + psi(1 + eta) - psi(2 - eta))`.
pub fn count_A_estimate(t: f64, eta: f64) -> Result<f64> {
    check_eta("count_A_estimate", eta)?;
    if !(t > 2.0 * PI) || !t.is_finite() {
        return Err(Error::domain("count_A_estimate", format!("t = {t} (need t > 2 pi)")));
    }
    Ok(t / (2.0 * PI) * (1.0 + digamma(1.0 + eta)? - digamma(2.0 - eta)?))
}

/// `#{1 <= x <= n : {n/x} < delta}`.
pub fn count_frac_below(n: u64, delta: f64) -> u64 {
    (1..=n)
        .into_par_iter()
        .filter(|&x| ((n % x) as f64) < delta * x as f64)
        .count() as u64
}

/// `#{1 <= x <= n : {n/x} > 1 - delta}`.
pub fn count_frac_above(n: u64, delta: f64) -> u64 {
    (1..=n)
        .into_par_iter()
        .filter(|&x| ((n % x) as f64) > (1.0 - delta) * x as f64)
        .count() as u64
}

/// `P[m] = sum_{k <= m} k^q`, `P[0] = 0`, accumulated with compensation.
fn prefix_powers(n: u64, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = RealSum::new(true);
    out.push(0.0);
    for k in 1..=n {
        acc.add((k as f64).powf(q));
        out.push(acc.value());
    }
    out
}

/// `sum_{x <= N} sum_{m <= N/x} m^{2sigma-2}` by the hyperbola split at `sqrt N`:
/// `sum_{x <= r} P(N/x) + sum_{m <= r} floor(N/m) m^q - r P(r)`, `r = floor(sqrt N)`.
pub fn hyperbola_double_sum(n: u64, sigma: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("hyperbola_double_sum", "N = 0"));
    }
    if !sigma.is_finite() {
        return Err(Error::InvalidInput(format!("sigma = {sigma}")));
    }
    let q = 2.0 * sigma - 2.0;
    let r = n.isqrt();
    let prefix = prefix_powers(n, q);
    let mut acc = RealSum::new(true);
    for x in 1..=r {
        acc.add(prefix[(n / x) as usize]);
    }
    for m in 1..=r {
        acc.add((n / m) as f64 * (m as f64).powf(q));
    }
    acc.add(-(r as f64) * prefix[r as usize]);
    Ok(acc.value())
}

/// The same double sum by the plain double loop.
pub fn hyperbola_naive(n: u64, sigma: f64) -> f64 {
    let q = 2.0 * sigma - 2.0;
    let rows: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|x| RealSum::sum((1..=n / x).map(|m| (m as f64).powf(q)), true))
        .collect();
    RealSum::sum(rows, true)
}

/// `N zeta(3 - 2sigma)`, the leading term of the double sum.
pub fn hyperbola_leading(n: u64, sigma: f64) -> Result<f64> {
    let z = riemann_zeta(Complex::new(3.0 - 2.0 * sigma, 0.0), &NumericPolicy::default())?.re;
    Ok(n as f64 * z)
}

/// `(sum - N zeta(3-2sigma)) / N^sigma`; the normalisation is `sqrt N` at `sigma = 1/2`.
pub fn hyperbola_normalized_deviation(n: u64, sigma: f64) -> Result<f64> {
    let s = hyperbola_double_sum(n, sigma)?;
    Ok((s - hyperbola_leading(n, sigma)?) / (n as f64).powf(sigma))
}
