//! Side-by-side evaluation of the identities that connect the cell estimates
//! from the two methods.

use crate::error::{Error, Result};
use crate::hurwitz::hurwitz_zeta;
use crate::numerics::quadrature::integrate;
use crate::numerics::{ln_gamma, riemann_zeta, Complex, NumericPolicy, RealSum};
use serde::Serialize;
use std::f64::consts::PI;

/// Unit intervals integrated before the closed-form remainder `-K^p/12`.
const TAIL_CELLS: u64 = 20_000;

/// Both sides of `sum_{m > Y} m^{2sigma-2}` against its Euler-Maclaurin form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailIdentity {
    pub big_y: f64,
    /// `zeta(2 - 2sigma, floor(Y) + 1)`, the continued tail sum.
    pub lhs: f64,
    /// `-Y^{2s-1}/(2s-1) + ({Y}-1/2) Y^{2s-2} - (2-2s) int_Y^inf ({a}-1/2) a^{2s-3} da`.
    pub rhs: f64,
    /// Same with `+ int` in place of `-(2-2s) int`.
    pub rhs_literal: f64,
    pub residual: f64,
    pub literal_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconciliationReport {
    pub sigma: f64,
    pub t: f64,
    pub eta: f64,
    /// `2 Gamma(2sigma-1) zeta(2sigma-1)`.
    pub gamma_zeta: f64,
    /// `zeta(2-2sigma) / ((2pi)^{1-2sigma} sin(pi sigma))`.
    pub functional_rhs: f64,
    pub functional_residual: f64,
    pub tail: TailIdentity,
    /// `2 Gamma(2sigma-1) zeta(2sigma-1) Re[Gamma(1-sigma+it)/Gamma(sigma+it)] - (t/2pi)^{1-2sigma} zeta(2-2sigma)`.
    pub stirling_residual: f64,
    /// `t^{-1-2sigma}`.
    pub stirling_scale: f64,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma < 1.0 && sigma != 0.5 {
        Ok(())
    } else {
        Err(Error::domain(
            "reconciliation_identities",
            format!("sigma = {sigma} (need 0 < sigma < 1, sigma != 1/2)"),
        ))
    }
}

fn two_gamma_zeta(sigma: f64, policy: &NumericPolicy) -> Result<f64> {
    let w = Complex::new(2.0 * sigma - 1.0, 0.0);
    Ok(2.0 * ln_gamma(w)?.exp().re * riemann_zeta(w, policy)?.re)
}

/// `int_Y^inf ({a} - 1/2) a^p da` for `p < -1`.
fn sawtooth_integral(big_y: f64, p: f64, policy: &NumericPolicy) -> Result<f64> {
    let inner = NumericPolicy {
        abs_tol: 1e-300,
        rel_tol: 1e-14,
        ..*policy
    };
    let f = |a: f64| Ok(Complex::new((a - a.floor() - 0.5) * a.powf(p), 0.0));
    let start = big_y.floor() + 1.0;
    let mut acc = RealSum::new(true);
    if start > big_y {
        acc.add(integrate(f, &[big_y, start], &inner)?.value.re);
    }
    let first = start as u64;
    let last = first.max(TAIL_CELLS);
    for k in first..last {
        let kf = k as f64;
        // on [k, k+1] the sawtooth is a - k - 1/2; avoid evaluating floor at k+1
        let g = |a: f64| Ok(Complex::new((a - kf - 0.5) * a.powf(p), 0.0));
        acc.add(integrate(g, &[kf, kf + 1.0], &inner)?.value.re);
    }
    acc.add(-(last as f64).powf(p) / 12.0);
    Ok(acc.value())
}

/// Evaluates both sides of the tail identity at `Y > 0`.
pub fn euler_maclaurin_tail_identity(sigma: f64, big_y: f64, policy: &NumericPolicy) -> Result<TailIdentity> {
    check_sigma(sigma)?;
    if !(big_y > 0.0) || !big_y.is_finite() {
        return Err(Error::domain("euler_maclaurin_tail_identity", format!("Y = {big_y}")));
    }
    let q = 2.0 * sigma - 2.0;
    let lhs = hurwitz_zeta(Complex::new(-q, 0.0), big_y.floor() + 1.0, policy)?.re;
    let frac = big_y - big_y.floor();
    let head = -big_y.powf(q + 1.0) / (q + 1.0) + (frac - 0.5) * big_y.powf(q);
    let integral = sawtooth_integral(big_y, q - 1.0, policy)?;
    let rhs = head + q * integral;
    let rhs_literal = head + integral;
    Ok(TailIdentity {
        big_y,
        lhs,
        rhs,
        rhs_literal,
        residual: (lhs - rhs).abs(),
        literal_residual: (lhs - rhs_literal).abs(),
    })
}

/// The functional-equation form of `2 Gamma(2sigma-1) zeta(2sigma-1)`, the
/// tail identity at `Y = t/2pi - eta`, and the Stirling form of the Gamma
/// quotient term.
pub fn reconciliation_identities(
    sigma: f64,
    t: f64,
    eta: f64,
    policy: &NumericPolicy,
) -> Result<ReconciliationReport> {
    policy.validate()?;
    check_sigma(sigma)?;
    if !(t > 2.0 * PI) {
        return Err(Error::domain("reconciliation_identities", format!("t = {t} (need t > 2 pi)")));
    }
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::domain("reconciliation_identities", format!("eta = {eta}")));
    }
    let gz = two_gamma_zeta(sigma, policy)?;
    let z2 = riemann_zeta(Complex::new(2.0 - 2.0 * sigma, 0.0), policy)?.re;
    let functional_rhs = z2 / ((2.0 * PI).powf(1.0 - 2.0 * sigma) * (PI * sigma).sin());
    let tail = euler_maclaurin_tail_identity(sigma, t / (2.0 * PI) - eta, policy)?;
    let ratio = (ln_gamma(Complex::new(1.0 - sigma, t))? - ln_gamma(Complex::new(sigma, t))?)
        .exp()
        .re;
    let stirling_residual = gz * ratio - (t / (2.0 * PI)).powf(1.0 - 2.0 * sigma) * z2;
    Ok(ReconciliationReport {
        sigma,
        t,
        eta,
        gamma_zeta: gz,
        functional_rhs,
        functional_residual: (gz - functional_rhs).abs(),
        tail,
        stirling_residual,
        stirling_scale: t.powf(-1.0 - 2.0 * sigma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> NumericPolicy {
        NumericPolicy::default()
    }

    #[test]
    fn functional_equation_residual() {
        for sigma in [0.3, 0.8] {
            let r = reconciliation_identities(sigma, 1000.0, 0.25, &pol()).unwrap();
            assert!(r.functional_residual <= 1e-10, "sigma = {sigma}: {}", r.functional_residual);
        }
    }

    #[test]
    fn tail_identity_against_direct_sum() {
        // oracle: direct partial sum up to 10^6 plus the integral-test remainder
        let (sigma, big_y) = (0.3, 7.35);
        let q = 2.0 * sigma - 2.0;
        let cut = 1_000_000u64;
        let mut direct = RealSum::new(true);
        for m in 8..=cut {
            direct.add((m as f64).powf(q));
        }
        let c = cut as f64;
        // sum_{m > c} m^q = -c^{q+1}/(q+1) - c^q/2 - q c^{q-1}/12 + ...
        direct.add(-c.powf(q + 1.0) / (q + 1.0) - c.powf(q) / 2.0 - q * c.powf(q - 1.0) / 12.0);
        let id = euler_maclaurin_tail_identity(sigma, big_y, &pol()).unwrap();
        assert!((id.lhs - direct.value()).abs() < 1e-10);
        assert!(id.residual <= 1e-8, "{id:?}");
        // the literal form is off by a visible amount
        assert!(id.literal_residual > 1e-4);
    }

    #[test]
    fn tail_identity_continues_past_convergence() {
        let id = euler_maclaurin_tail_identity(0.8, 12.6, &pol()).unwrap();
        assert!(id.residual <= 1e-8, "{id:?}");
    }

    #[test]
    fn stirling_residual_scales() {
        for t in [1e3, 1e4] {
            let r = reconciliation_identities(0.4, t, 0.25, &pol()).unwrap();
            let scaled = r.stirling_residual.abs() / r.stirling_scale;
            assert!(scaled < 10.0, "t = {t}: {scaled}");
        }
    }

    #[test]
    fn half_rejected() {
        assert!(reconciliation_identities(0.5, 1000.0, 0.25, &pol()).is_err());
    }
}
