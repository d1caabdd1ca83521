//! The Fresnel-type function `Psi(eps) = 2 e^{-i pi/4} int_0^inf e^{i pi s^2} e^{2 pi i s eps} ds`.

use super::quadrature::{integrate, uniform_breakpoints};
use super::{ensure_finite, Complex, NumericPolicy};
use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

fn check(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("fresnel_psi", format!("eps = {eps} (need eps >= 0)")))
    }
}

fn inner_policy(policy: &NumericPolicy) -> NumericPolicy {
    NumericPolicy {
        abs_tol: policy.abs_tol.min(1e-14),
        rel_tol: policy.rel_tol.min(1e-14),
        ..*policy
    }
}

/// `Psi(eps)` from the second integral form, with the ray rotated onto the
/// steepest-descent direction `s = e^{i pi/4} r`:
/// `Psi(eps) = 2 int_0^inf e^{-pi r^2} e^{-sqrt(2) pi eps (1 - i) r} dr`.
pub fn fresnel_psi(eps: f64, policy: &NumericPolicy) -> Result<Complex> {
    check(eps)?;
    let rate = Complex::new(-SQRT_2 * PI * eps, SQRT_2 * PI * eps);
    // e^{-pi r^2} < 1e-60 beyond r = 6.7
    let r_max = 6.7;
    // cluster breakpoints near 0 where the exponential layer of width ~1/eps sits
    let breakpoints: Vec<f64> = (0..=24)
        .map(|k| r_max * (k as f64 / 24.0).powi(2))
        .collect();
    let res = integrate(
        |r| Ok((rate * r - PI * r * r).exp()),
        &breakpoints,
        &inner_policy(policy),
    )?;
    ensure_finite(res.value * 2.0, "fresnel_psi")
}

/// `Psi(eps)` from the first form,
/// `2 e^{-i pi eps^2} e^{-i pi/4} int_eps^inf e^{i pi s^2} ds`, with the tail
/// written as `e^{i pi/4}/2 - int_0^eps e^{i pi s^2} ds` and the finite part
/// integrated along the real axis. Independent of [`fresnel_psi`].
pub fn fresnel_psi_endpoint_form(eps: f64, policy: &NumericPolicy) -> Result<Complex> {
    check(eps)?;
    let panels = (4.0 * (1.0 + eps * eps)).ceil() as usize;
    let head = if eps > 0.0 {
        integrate(
            |s| Ok(Complex::new(0.0, PI * s * s).exp()),
            &uniform_breakpoints(0.0, eps, panels),
            &inner_policy(policy),
        )?
        .value
    } else {
        Complex::new(0.0, 0.0)
    };
    let full = Complex::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2) * 0.5; // e^{i pi/4}/2
    let tail = full - head;
    let phase = Complex::new(0.0, -PI * eps * eps - PI / 4.0).exp();
    ensure_finite(phase * tail * 2.0, "fresnel_psi")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_at_zero_is_one() {
        let p = NumericPolicy::default();
        assert!((fresnel_psi(0.0, &p).unwrap() - 1.0).norm() < 1e-13);
        assert!((fresnel_psi_endpoint_form(0.0, &p).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn forms_agree() {
        let p = NumericPolicy::default();
        for eps in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let a = fresnel_psi(eps, &p).unwrap();
            let b = fresnel_psi_endpoint_form(eps, &p).unwrap();
            assert!((a - b).norm() < 1e-11, "eps = {eps}: {a} vs {b}");
        }
    }

    #[test]
    fn decays_like_one_over_pi_eps() {
        let p = NumericPolicy::default();
        let v = fresnel_psi(10.0, &p).unwrap();
        assert!(v.norm() < 0.05);
        // leading term of the endpoint expansion: |Psi| ~ 1/(pi eps)
        assert!((v.norm() * PI * 10.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn negative_argument_rejected() {
        let p = NumericPolicy::default();
        assert!(fresnel_psi(-0.1, &p).is_err());
        assert!(fresnel_psi_endpoint_form(-0.1, &p).is_err());
    }
}
