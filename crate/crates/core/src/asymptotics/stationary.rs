//! Uniform stationary-phase estimates: the boundary-layer factor `E(t, a)`,
//! the cell estimate with its exceptional-set correction, and the
//! long-interval mean.

use super::{EstimateReport, ExceptionalFlag};
use crate::error::{Error, Result};
use crate::hurwitz::{kernel_K_abs_sq, CellCoords, StripPoint};
use crate::numerics::{
    ensure_finite, ensure_finite_real, fresnel_psi, fresnel_psi_endpoint_form, riemann_zeta,
    Complex, NumericPolicy, RealSum,
};
use std::f64::consts::PI;

fn check_offset(a: f64) -> Result<()> {
    if a > -1.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("script_E", format!("a = {a} (need a > -1)")))
    }
}

/// `h(a) = a - log(1 + a)`.
fn phase_h(a: f64) -> f64 {
    a - a.ln_1p()
}

/// `E(t, a) = H(-a) + sgn(a) e^{i t h(a)} / 2 * Psi(sqrt(t/2pi) |a|)`, with `E(t, 0) = 1/2`.
pub fn script_E(t: f64, a: f64, policy: &NumericPolicy) -> Result<Complex> {
    check_offset(a)?;
    if a == 0.0 {
        return Ok(Complex::new(0.5, 0.0));
    }
    let eps = (t / (2.0 * PI)).sqrt() * a.abs();
    let psi = fresnel_psi(eps, policy)?;
    let heaviside = if a < 0.0 { 1.0 } else { 0.0 };
    let phase = Complex::from_polar(0.5 * a.signum(), t * phase_h(a));
    ensure_finite(heaviside + phase * psi, "script_E")
}

/// `H(-a) + e^{ita - i pi/4} sgn(a) (1+a)^{-it} int_0^inf e^{i pi tau^2 + 2 pi i tau sqrt(t/2pi)|a|} d tau`,
/// with the `tau` integral taken through the finite-endpoint Fresnel form.
pub fn script_E_integral_form(t: f64, a: f64, policy: &NumericPolicy) -> Result<Complex> {
    check_offset(a)?;
    if a == 0.0 {
        return Ok(Complex::new(0.5, 0.0));
    }
    let eps = (t / (2.0 * PI)).sqrt() * a.abs();
    // int_0^inf e^{i pi tau^2} e^{2 pi i tau eps} = e^{i pi/4} Psi(eps) / 2
    let tau_int = Complex::from_polar(0.5, PI / 4.0) * fresnel_psi_endpoint_form(eps, policy)?;
    let heaviside = if a < 0.0 { 1.0 } else { 0.0 };
    let phase = Complex::from_polar(a.signum(), t * a - PI / 4.0 - t * a.ln_1p());
    ensure_finite(heaviside + phase * tau_int, "script_E_integral_form")
}

/// `|K(s)|^2 sum_{m <= y - eta} m^{2 sigma - 2}`, plus for `x in A(t, eta)` the
/// boundary-layer term `c (t/2pi)^{1-2sigma} [y]^{2sigma-2} |E(t, ([y]-y)/y)|^2`.
pub fn theorem2_Ix(
    sp: StripPoint,
    x: u64,
    eta: f64,
    correction_factor: f64,
    policy: &NumericPolicy,
) -> Result<EstimateReport> {
    policy.validate()?;
    sp.require_critical_strip("theorem2_Ix")?;
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::domain("theorem2_Ix", format!("eta = {eta} (need 0 < eta < 1/2)")));
    }
    if !correction_factor.is_finite() {
        return Err(Error::InvalidInput(format!("correction factor {correction_factor}")));
    }
    let (sigma, t) = (sp.sigma, sp.t);
    let top = t / (2.0 * PI);
    if x == 0 || x as f64 > top * (1.0 + 1e-12) {
        return Err(Error::domain("theorem2_Ix", format!("x = {x} outside [1, t/2pi = {top}]")));
    }
    let cell = CellCoords::new(t, x)?;
    let y = cell.y;
    let m_max = (y - eta + 1e-12 * y).floor().max(0.0) as u64;
    let p = 2.0 * sigma - 2.0;
    let partial = RealSum::sum((1..=m_max).map(|m| (m as f64).powf(p)), policy.extended());
    let mut value = kernel_K_abs_sq(sp.s())? * partial;

    let xf = x as f64;
    let mut predicted = xf.powf(-2.0 * sigma) / (eta * eta)
        + t.powf(-0.5) * xf.powf(1.0 - 2.0 * sigma) * (y + 2.0).ln() / eta;
    let in_a = cell.in_exceptional_set(eta);
    let mut notes = String::from("exact |K(s)|^2");
    if in_a {
        let e = script_E(t, cell.offset, policy)?;
        let corr = correction_factor
            * top.powf(1.0 - 2.0 * sigma)
            * (cell.nearest as f64).powf(p)
            * e.norm_sqr();
        value += corr;
        predicted += xf.powf(2.0 - 2.0 * sigma) / t.powf(1.5);
        notes = format!("exact |K(s)|^2; boundary layer at [y] = {} with factor {correction_factor}", cell.nearest);
    }
    Ok(EstimateReport {
        value: Complex::new(ensure_finite_real(value, "theorem2_Ix")?, 0.0),
        predicted_error_scale: predicted,
        terms_used: m_max as usize,
        branch_notes: notes,
        exceptional: Some(ExceptionalFlag { in_a, eta }),
    })
}

/// `int_0^{t/2pi} |zeta_1(s, alpha)|^2 d alpha ~ (t/2pi)^{2-2sigma} zeta(3-2sigma)`,
/// error `t^{1-sigma} + t^{7/4-2sigma}`.
pub fn theorem3_mean(sigma: f64, t: f64) -> Result<EstimateReport> {
    let sp = StripPoint::new(sigma, t)?;
    sp.require_critical_strip("theorem3_mean")?;
    let z = riemann_zeta(Complex::new(3.0 - 2.0 * sigma, 0.0), &NumericPolicy::default())?.re;
    let value = (t / (2.0 * PI)).powf(2.0 - 2.0 * sigma) * z;
    Ok(EstimateReport {
        value: Complex::new(ensure_finite_real(value, "theorem3_mean")?, 0.0),
        predicted_error_scale: t.powf(1.0 - sigma) + t.powf(1.75 - 2.0 * sigma),
        terms_used: 1,
        branch_notes: String::new(),
        exceptional: None,
    })
}
