//! Cell estimates of `I_x(s)` for fixed `x` as `t` grows.

use super::theorem1::S_N;
use super::EstimateReport;
use crate::error::{Error, Result};
use crate::hurwitz::{hurwitz_zeta, modified_hurwitz_zeta, CellCoords, StripPoint};
use crate::numerics::{
    ensure_finite_real, ln_gamma, real_pow_neg, riemann_zeta, Complex, NumericPolicy, EULER_GAMMA,
};
use std::f64::consts::PI;

const DEGENERATE_TOL: f64 = 1e-12;

/// `I_x(s) ~ x^{1-2sigma}/(2sigma-1) + 2 Gamma(2sigma-1) zeta(2sigma-1) Re[Gamma(1-sigma+it)/Gamma(sigma+it)]
///           - 2 Re S_N(s, conj s; x)`, error `x^{2-2sigma}/t`.
pub fn corollary2_Ix(sp: StripPoint, x: u64, n: u32, policy: &NumericPolicy) -> Result<EstimateReport> {
    policy.validate()?;
    let sigma = sp.sigma;
    let w = 2.0 * sigma - 1.0;
    if w <= 1.0 + DEGENERATE_TOL && (w - w.round()).abs() <= DEGENERATE_TOL {
        return Err(Error::DegenerateSigma { sigma });
    }
    let nf = n as f64;
    if !(sigma > 1.0 - nf && sigma < nf + 1.0) {
        return Err(Error::domain(
            "corollary2_Ix",
            format!("sigma = {sigma} outside ({}, {}) for N = {n}", 1.0 - nf, nf + 1.0),
        ));
    }
    if x == 0 {
        return Err(Error::domain("corollary2_Ix", "x = 0"));
    }
    let t = sp.t;
    let s = sp.s();
    let xf = x as f64;
    let lead = xf.powf(-w) / w;
    let ratio = (ln_gamma(Complex::new(1.0 - sigma, t))? - ln_gamma(s)?).exp().re;
    let gz = ln_gamma(Complex::new(w, 0.0))?.exp().re * riemann_zeta(Complex::new(w, 0.0), policy)?.re;
    let sn = S_N(s, s.conj(), x, n, policy)?;
    let value = lead + 2.0 * gz * ratio - 2.0 * sn.re;
    Ok(EstimateReport {
        value: Complex::new(ensure_finite_real(value, "corollary2_Ix")?, 0.0),
        predicted_error_scale: xf.powf(2.0 - 2.0 * sigma) / t,
        terms_used: n as usize,
        branch_notes: "Gamma quotient in log space; T_N dropped".into(),
        exceptional: None,
    })
}

/// `I_x(1/2 + it) ~ log y + gamma - 2 Re[x^{1/2+it} zeta_x(1/2+it, 1)/(1/2+it)]`, error `x/t`.
pub fn corollary3_Ix(t: f64, x: u64, policy: &NumericPolicy) -> Result<EstimateReport> {
    policy.validate()?;
    let sp = StripPoint::new(0.5, t)?;
    let cell = CellCoords::new(t, x)?;
    let s = sp.s();
    let z = modified_hurwitz_zeta(s, 1.0, x, policy)?;
    // x^{1/2+it} = x^{-(conj of -s)}; |x^{1/2+it}| = sqrt x
    let xs = real_pow_neg(x as f64, -s);
    let value = cell.y.ln() + EULER_GAMMA - 2.0 * (xs * z / s).re;
    Ok(EstimateReport {
        value: Complex::new(ensure_finite_real(value, "corollary3_Ix")?, 0.0),
        predicted_error_scale: x as f64 / t,
        terms_used: 1,
        branch_notes: "limit 2 sigma -> 1 of the N = 1 estimate".into(),
        exceptional: None,
    })
}

/// The `x = 1` form written with `zeta(1/2 + it)`:
/// `log(t/2pi) + gamma - 2 Re zeta(1/2+it)/(1/2+it)`.
pub fn critical_line_x1_display(t: f64, policy: &NumericPolicy) -> Result<f64> {
    let sp = StripPoint::new(0.5, t)?;
    let s = sp.s();
    let z = hurwitz_zeta(s, 1.0, policy)?;
    ensure_finite_real((t / (2.0 * PI)).ln() + EULER_GAMMA - 2.0 * (z / s).re, "critical_line_x1_display")
}
