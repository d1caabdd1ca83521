//! Brute-force values of the mean-square integrals and the identities used to
//! cross-check them.
//!
//! `I_x(s) = int_0^1 |zeta_x(s, alpha)|^2 d alpha`,
//! `J_x(u, v) = int_0^1 zeta_x(u, alpha) zeta_x(v, alpha) d alpha`.

use crate::error::{Error, Result};
use crate::hurwitz::{hurwitz_zeta, StripPoint};
use crate::numerics::quadrature::{integrate, uniform_breakpoints};
use crate::numerics::{
    bernoulli_over_factorial, ensure_finite, real_pow_neg, upper_incomplete_gamma_scaled, Complex,
    ComplexSum, NumericPolicy, QuadratureResult, RealSum,
};
use rayon::prelude::*;
use std::f64::consts::PI;

fn check_x(function: &'static str, x: u64) -> Result<()> {
    if x == 0 {
        Err(Error::domain(function, "x = 0; integrals of zeta_0 are not supported"))
    } else {
        Ok(())
    }
}

fn check_not_pole(function: &'static str, w: Complex) -> Result<()> {
    if w.re == 1.0 && w.im == 0.0 {
        Err(Error::pole(function, w))
    } else {
        Ok(())
    }
}

/// Oscillation scale `|Im w| / (2 pi x)` of `zeta_x(w, alpha)` in `alpha`.
fn local_frequency(w: Complex, x: u64) -> f64 {
    w.im.abs() / (2.0 * PI * x as f64)
}

fn cell_panels(freq: f64) -> usize {
    (8.0 * (1.0 + freq)).ceil() as usize
}

/// `J_x(u, v)` by adaptive quadrature of its definition.
pub fn integral_Jx(u: Complex, v: Complex, x: u64, policy: &NumericPolicy) -> Result<QuadratureResult> {
    policy.validate()?;
    check_x("integral_Jx", x)?;
    check_not_pole("integral_Jx", u)?;
    check_not_pole("integral_Jx", v)?;
    let xf = x as f64;
    let panels = cell_panels(local_frequency(u, x) + local_frequency(v, x));
    integrate(
        |a| Ok(hurwitz_zeta(u, xf + a, policy)? * hurwitz_zeta(v, xf + a, policy)?),
        &uniform_breakpoints(0.0, 1.0, panels),
        policy,
    )
}

/// `I_x(s) = J_x(s, conj(s))`, integrating `|zeta_x|^2` so the value is real.
pub fn integral_Ix(sp: StripPoint, x: u64, policy: &NumericPolicy) -> Result<QuadratureResult> {
    policy.validate()?;
    check_x("integral_Ix", x)?;
    mean_square_segment(sp.s(), x as f64, 1.0, policy)
}

/// `int_0^len |zeta(s, base + alpha)|^2 d alpha`.
fn mean_square_segment(s: Complex, base: f64, len: f64, policy: &NumericPolicy) -> Result<QuadratureResult> {
    check_not_pole("integral_Ix", s)?;
    let freq = s.im.abs() / (2.0 * PI * base);
    let panels = (cell_panels(2.0 * freq) as f64 * len).ceil().max(1.0) as usize;
    integrate(
        |a| Ok(Complex::new(hurwitz_zeta(s, base + a, policy)?.norm_sqr(), 0.0)),
        &uniform_breakpoints(0.0, len, panels),
        policy,
    )
}

/// `int_0^{t/2pi} |zeta_1(s, alpha)|^2 d alpha` as a sum of unit cells
/// `I_1 + ... + I_{floor(t/2pi)}` plus the partial cell at the top.
///
/// Cells run concurrently; the sum is taken in ascending `x` with compensation.
pub fn large_interval_mean(sp: StripPoint, policy: &NumericPolicy) -> Result<QuadratureResult> {
    policy.validate()?;
    sp.require_critical_strip("large_interval_mean")?;
    let top = sp.t / (2.0 * PI);
    if top <= 1.0 {
        return Err(Error::domain("large_interval_mean", format!("t = {} (need t > 2 pi)", sp.t)));
    }
    let full = top.floor() as u64;
    let frac = top - full as f64;
    let tag = |x: u64| {
        move |e: Error| match e {
            Error::ToleranceNotMet { estimate, requested, .. } => Error::ToleranceNotMet {
                estimate,
                requested,
                cell: Some(x),
            },
            other => other,
        }
    };
    let mut cells: Vec<QuadratureResult> = (1..=full)
        .into_par_iter()
        .map(|x| integral_Ix(sp, x, policy).map_err(tag(x)))
        .collect::<Result<Vec<_>>>()?;
    if frac > 0.0 {
        let x = full + 1;
        cells.push(mean_square_segment(sp.s(), x as f64, frac, policy).map_err(tag(x))?);
    }
    let extended = policy.extended();
    Ok(QuadratureResult {
        value: ComplexSum::sum(cells.iter().map(|c| c.value), extended),
        error_estimate: RealSum::sum(cells.iter().map(|c| c.error_estimate), true),
        panels: cells.iter().map(|c| c.panels).sum(),
        evaluations: cells.iter().map(|c| c.evaluations).sum(),
    })
}

/// `int_x^inf beta^{-s} e^{2 pi i m beta} d beta` from the incomplete Gamma
/// closed form `(-2 pi i m)^{s-1} Gamma(1 - s, -2 pi i m x)`, written as
/// `x^{1-s} e^{2 pi i m x}` times the scaled continued fraction so no large
/// powers are formed.
pub fn oscillatory_tail_closed_form(s: Complex, m: i64, x: u64) -> Result<Complex> {
    check_oscillatory_args(s, m, x)?;
    let xf = x as f64;
    let kappa = 2.0 * PI * m as f64;
    let z = Complex::new(0.0, -kappa * xf);
    let cf = upper_incomplete_gamma_scaled(1.0 - s, z)?;
    let phase = Complex::new(0.0, kappa * (xf - xf.floor())).exp(); // e^{2 pi i m x}
    ensure_finite(real_pow_neg(xf, s - 1.0) * phase * cf, "oscillatory_tail_integral")
}

/// The same integral by quadrature along the real axis up to past the
/// stationary point, then up a vertical ray into the half-plane where
/// `e^{2 pi i m beta}` decays.
pub fn oscillatory_tail_contour(s: Complex, m: i64, x: u64, policy: &NumericPolicy) -> Result<Complex> {
    check_oscillatory_args(s, m, x)?;
    let xf = x as f64;
    let kappa = 2.0 * PI * m as f64;
    let sgn = m.signum() as f64;
    let f = |b: Complex| (-s * b.ln() + Complex::i() * kappa * b).exp();
    // stationary point of -t ln(beta) + kappa beta
    let stationary = s.im / kappa;
    let big_x = if stationary > 0.0 { xf.max(2.0 * stationary) } else { xf };
    let mut total = Complex::new(0.0, 0.0);
    if big_x > xf {
        let phase_change = kappa.abs() * (big_x - xf) + s.im.abs() * (big_x / xf).ln();
        let panels = (phase_change / PI).ceil() as usize + 8;
        total += integrate(
            |b| Ok(f(Complex::new(b, 0.0))),
            &uniform_breakpoints(xf, big_x, panels),
            policy,
        )?
        .value;
    }
    let r_max = 60.0 / (PI * m.unsigned_abs() as f64);
    let ray = integrate(
        |r| Ok(f(Complex::new(big_x, sgn * r)) * Complex::new(0.0, sgn)),
        &uniform_breakpoints(0.0, r_max, 32),
        policy,
    )?;
    total += ray.value;
    ensure_finite(total, "oscillatory_tail_integral")
}

fn check_oscillatory_args(s: Complex, m: i64, x: u64) -> Result<()> {
    check_x("oscillatory_tail_integral", x)?;
    if m == 0 {
        return Err(Error::domain("oscillatory_tail_integral", "m = 0 (need m != 0)"));
    }
    if !(s.re > 0.0) {
        return Err(Error::domain(
            "oscillatory_tail_integral",
            format!("Re s = {} (need Re s > 0)", s.re),
        ));
    }
    Ok(())
}

/// `int_x^inf beta^{-s} e^{2 pi i m beta} d beta`, closed form checked against
/// the contour quadrature.
///
/// Fails with [`Error::BranchMismatch`] when the two disagree by more than
/// `100 max(rel_tol |I|, abs_tol)`.
pub fn oscillatory_tail_integral(s: Complex, m: i64, x: u64, policy: &NumericPolicy) -> Result<Complex> {
    let closed = oscillatory_tail_closed_form(s, m, x)?;
    let contour = oscillatory_tail_contour(s, m, x, policy)?;
    let difference = (closed - contour).norm();
    if difference > 100.0 * (policy.rel_tol * closed.norm()).max(policy.abs_tol) {
        return Err(Error::BranchMismatch {
            closed_form: closed,
            contour,
            difference,
        });
    }
    Ok(closed)
}

/// Partial sum of the Fourier representation
/// `I_x(s) = x^{2-2 sigma} / (t^2 + (sigma-1)^2) + sum_{m != 0} |int_x^inf beta^{-s} e^{2 pi i m beta}|^2`
/// over `0 < |m| <= M`, accumulated in pairs `(m, -m)` by ascending `|m|`.
pub fn fourier_representation_Ix(sp: StripPoint, x: u64, big_m: u64, policy: &NumericPolicy) -> Result<f64> {
    policy.validate()?;
    sp.require_critical_strip("fourier_representation_Ix")?;
    check_x("fourier_representation_Ix", x)?;
    if big_m == 0 {
        return Err(Error::InvalidInput("M = 0 (need M >= 1)".into()));
    }
    let s = sp.s();
    let xf = x as f64;
    let zero_mode = xf.powf(2.0 - 2.0 * sp.sigma) / (sp.t * sp.t + (sp.sigma - 1.0).powi(2));
    let pairs: Vec<f64> = (1..=big_m as i64)
        .into_par_iter()
        .map(|m| {
            let a = oscillatory_tail_integral(s, m, x, policy)?;
            let b = oscillatory_tail_integral(s, -m, x, policy)?;
            Ok(a.norm_sqr() + b.norm_sqr())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = RealSum::new(policy.extended());
    acc.add(zero_mode);
    for p in pairs {
        acc.add(p);
    }
    Ok(acc.value())
}

/// Smallest `M` whose omitted modes total at most `tail_tol`, from the leading
/// tail `x^{-2 sigma} / (2 pi^2 M)`.
pub fn fourier_modes_for_tail(sp: StripPoint, x: u64, tail_tol: f64) -> Result<u64> {
    check_x("fourier_modes_for_tail", x)?;
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidInput(format!("tail tolerance {tail_tol}")));
    }
    let m = (x as f64).powf(-2.0 * sp.sigma) / (2.0 * PI * PI * tail_tol);
    // the expansion's next terms push the tail up by roughly (|s| / (2 pi x M))^2
    Ok((m * 1.05).ceil().max(1.0) as u64)
}

/// Asymptotic value of the omitted modes `sum_{|m| > M} |...|^2`, from the
/// integration-by-parts expansion
/// `I_m ~ -e^{2 pi i m x} x^{-s} / (2 pi i m) sum_k (s)_k (2 pi i m x)^{-k}`.
/// Requires `2 pi x M` well above `|s|`.
pub fn fourier_tail(sp: StripPoint, x: u64, big_m: u64, policy: &NumericPolicy) -> Result<f64> {
    check_x("fourier_tail", x)?;
    let s = sp.s();
    let xf = x as f64;
    let ratio = s.norm() / (2.0 * PI * xf * big_m as f64);
    if big_m == 0 || ratio > 0.25 {
        return Err(Error::InvalidInput(format!(
            "M = {big_m} too small for the tail expansion (|s| / (2 pi x M) = {ratio:.3})"
        )));
    }
    const K: usize = 24;
    // a_k = (s)_k / (2 pi i x)^k; the tail in powers of 1/m
    let mut a = vec![Complex::new(1.0, 0.0); K];
    let step = Complex::new(0.0, 2.0 * PI * xf).inv();
    for k in 1..K {
        a[k] = a[k - 1] * (s + (k - 1) as f64) * step;
    }
    // pair (m, -m) keeps only even total powers: 2 Re sum_{j+k=2n} a_j conj(a_k)
    let mut total = RealSum::new(true);
    for n in 0..K / 2 {
        let mut d = 0.0;
        for j in 0..=2 * n {
            let k = 2 * n - j;
            if j < K && k < K {
                d += (a[j] * a[k].conj()).re;
            }
        }
        let z = hurwitz_zeta(Complex::new(2.0 + 2.0 * n as f64, 0.0), big_m as f64 + 1.0, policy)?.re;
        let term = 2.0 * d * z;
        total.add(term);
        if term.abs() < 1e-18 * total.value().abs() {
            break;
        }
    }
    Ok(xf.powf(-2.0 * sp.sigma) / (4.0 * PI * PI) * total.value())
}

/// `int_X^inf beta^{-p} (shift + beta)^{-c} d beta` for `X > shift >= 0` and
/// `Re(p + c) > 1`, by the binomial series
/// `sum_j binom(-c, j) shift^j X^{1-p-c-j} / (p + c + j - 1)`.
pub fn binomial_tail_integral(p: Complex, c: Complex, shift: f64, big_x: f64) -> Result<Complex> {
    if !(big_x > shift) || shift < 0.0 {
        return Err(Error::domain(
            "binomial_tail_integral",
            format!("X = {big_x}, shift = {shift} (need X > shift >= 0)"),
        ));
    }
    if (p + c).re <= 1.0 {
        return Err(Error::domain("binomial_tail_integral", format!("Re(p + c) = {} <= 1", (p + c).re)));
    }
    binomial_tail_continued(p, c, shift, big_x)
}

/// The same series without the convergence condition on `p + c`: the
/// analytic continuation in the exponents, defined away from
/// `p + c in {1, 0, -1, ...}`.
pub(crate) fn binomial_tail_continued(p: Complex, c: Complex, shift: f64, big_x: f64) -> Result<Complex> {
    if !(big_x > shift) || shift < 0.0 {
        return Err(Error::domain(
            "binomial_tail_integral",
            format!("X = {big_x}, shift = {shift} (need X > shift >= 0)"),
        ));
    }
    let q = shift / big_x;
    let lead = real_pow_neg(big_x, p + c - 1.0);
    let mut coeff = Complex::new(1.0, 0.0); // binom(-c, j) q^j
    let mut sum = Complex::new(0.0, 0.0);
    for j in 0..10_000 {
        let jf = j as f64;
        let den = p + c + jf - 1.0;
        if den.norm() < 1e-12 {
            return Err(Error::pole("binomial_tail_integral", format!("p + c = {}", p + c)));
        }
        let term = coeff / den;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && j > 2 {
            return ensure_finite(lead * sum, "binomial_tail_integral");
        }
        coeff *= -(c + jf) / (jf + 1.0) * q;
    }
    Err(Error::convergence("binomial_tail_integral", "binomial series did not settle"))
}

/// `int_x^inf alpha^{-b} zeta_1(a, alpha) d alpha` with `zeta_1(a, alpha) = zeta(a, alpha + 1)`.
///
/// Quadrature on `[x, X]`; beyond `X` the Euler–Maclaurin expansion of
/// `zeta(a, alpha + 1)` is integrated term by term.
pub fn zeta_tail_integral(a: Complex, b: Complex, x: u64, policy: &NumericPolicy) -> Result<Complex> {
    policy.validate()?;
    check_x("zeta_tail_integral", x)?;
    check_not_pole("zeta_tail_integral", a)?;
    let excess = (a + b).re - 2.0;
    if !(excess > 0.0) {
        return Err(Error::domain(
            "zeta_tail_integral",
            format!("Re(a + b) = {} (need > 2)", (a + b).re),
        ));
    }
    let xf = x as f64;
    let reach = xf.max(a.im.abs()).max(b.im.abs());
    let big_x = xf + (10.0 / excess.min(1.0)).ceil() * reach;

    // geometric panels, ratio about 1.25
    let n = ((big_x / xf).ln() / 1.25f64.ln()).ceil().max(1.0) as usize;
    let breakpoints: Vec<f64> = (0..=n)
        .map(|k| if k == n { big_x } else { xf * (big_x / xf).powf(k as f64 / n as f64) })
        .collect();
    let head = integrate(
        |al| Ok(real_pow_neg(al, b) * hurwitz_zeta(a, al + 1.0, policy)?),
        &breakpoints,
        policy,
    )?
    .value;

    // zeta(a, w) ~ w^{1-a}/(a-1) + w^{-a}/2 + sum_k B_2k/(2k)! (a)_{2k-1} w^{-a-2k+1}, w = alpha + 1
    let mut tail = binomial_tail_integral(b, a - 1.0, 1.0, big_x)? / (a - 1.0);
    tail += binomial_tail_integral(b, a, 1.0, big_x)? * 0.5;
    let mut poch = a;
    for k in 1..40 {
        let kk = 2.0 * k as f64;
        let term = binomial_tail_integral(b, a + kk - 1.0, 1.0, big_x)? * poch * bernoulli_over_factorial(k);
        tail += term;
        if term.norm() < 1e-18 * tail.norm() {
            break;
        }
        poch = poch * (a + kk - 1.0) * (a + kk);
    }
    ensure_finite(head + tail, "zeta_tail_integral")
}
