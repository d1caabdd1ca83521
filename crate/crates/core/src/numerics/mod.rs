//! Foundation special functions and numerical machinery.
//!
//! Everything here is a pure function of its arguments and a [`NumericPolicy`].
//! Complex scalars are `num_complex::Complex64`; results that would carry a NaN
//! or infinity are reported as [`Error::NonFinite`] instead.

mod bernoulli;
mod fresnel;
mod gamma;
mod incgamma;
pub mod quadrature;
pub mod summation;
mod zeta;

pub use bernoulli::bernoulli_over_factorial;
pub use fresnel::{fresnel_psi, fresnel_psi_endpoint_form};
pub use gamma::{digamma, gamma, ln_gamma, ln_sin_pi, EULER_GAMMA};
pub use incgamma::{upper_incomplete_gamma, upper_incomplete_gamma_scaled};
pub use quadrature::{integrate, QuadratureResult};
pub use summation::{ComplexSum, DoubleDouble, RealSum};
pub use zeta::{euler_maclaurin_tail, hurwitz_series, riemann_zeta};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The universal complex scalar.
pub type Complex = num_complex::Complex64;

/// Working-precision and tolerance settings shared by every numerical routine.
///
/// `precision_bits > 53` switches long summations (Euler–Maclaurin partial
/// sums, quadrature panel reductions, cell and mode sums) to double-double
/// accumulation; elementary functions are always evaluated in binary64.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericPolicy {
    pub precision_bits: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub series_safety_factor: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        NumericPolicy {
            precision_bits: 106,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 200_000,
            series_safety_factor: 1.5,
        }
    }
}

impl NumericPolicy {
    /// Plain binary64 accumulation, for fast sweeps.
    pub fn fast() -> Self {
        NumericPolicy {
            precision_bits: 53,
            ..Default::default()
        }
    }

    pub fn with_tolerance(tol: f64) -> Self {
        NumericPolicy {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 53 {
            return Err(Error::InvalidPolicy(format!(
                "precision_bits = {} (need >= 53)",
                self.precision_bits
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidPolicy(format!("abs_tol = {}", self.abs_tol)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidPolicy(format!("rel_tol = {}", self.rel_tol)));
        }
        if self.max_subdivisions < 16 {
            return Err(Error::InvalidPolicy(format!(
                "max_subdivisions = {} (need >= 16)",
                self.max_subdivisions
            )));
        }
        if !(self.series_safety_factor >= 1.0 && self.series_safety_factor.is_finite()) {
            return Err(Error::InvalidPolicy(format!(
                "series_safety_factor = {} (need >= 1)",
                self.series_safety_factor
            )));
        }
        Ok(())
    }

    /// Whether long sums use double-double accumulation.
    pub fn extended(&self) -> bool {
        self.precision_bits > 53
    }

    /// Same policy with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        NumericPolicy {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }
}

pub(crate) fn ensure_finite(z: Complex, function: &'static str) -> Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite { function })
    }
}

pub(crate) fn ensure_finite_real(x: f64, function: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite { function })
    }
}

/// `a^(-s)` for real `a > 0`, via `exp(-s ln a)`.
#[inline]
pub fn real_pow_neg(a: f64, s: Complex) -> Complex {
    let l = a.ln();
    Complex::from_polar((-s.re * l).exp(), -s.im * l)
}

/// True when `z` is within `tol` of an integer on the real axis.
pub fn near_integer(z: Complex, tol: f64) -> bool {
    z.im.abs() <= tol && (z.re - z.re.round()).abs() <= tol
}
