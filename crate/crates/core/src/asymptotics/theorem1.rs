//! The exact decomposition of `J_x(u, v)` into `S_N` and `T_N` pieces, and
//! its `N -> infinity` limit.

use super::EstimateReport;
use crate::error::{Error, Result};
use crate::hurwitz::{hurwitz_zeta, modified_hurwitz_zeta, pochhammer};
use crate::meansq::binomial_tail_continued;
use crate::numerics::quadrature::integrate;
use crate::numerics::{
    ensure_finite, ln_gamma, near_integer, real_pow_neg, riemann_zeta, Complex, ComplexSum,
    NumericPolicy,
};

const EXCLUDED_TOL: f64 = 1e-12;
const MAX_LATTICE_TERMS: f64 = 1e6;
const MAX_SERIES_TERMS: usize = 10_000;

/// `(u, v) in E`: `u + v in {2, 1, 0, -1, ...}`, or `u` or `v` an integer.
pub fn in_excluded_set(u: Complex, v: Complex) -> bool {
    let w = u + v;
    near_integer(u, EXCLUDED_TOL)
        || near_integer(v, EXCLUDED_TOL)
        || (near_integer(w, EXCLUDED_TOL) && w.re.round() <= 2.0)
}

fn check_excluded(u: Complex, v: Complex) -> Result<()> {
    if in_excluded_set(u, v) {
        Err(Error::ExcludedSet { u, v })
    } else {
        Ok(())
    }
}

/// The integral over `l` converges for `Re u, Re v > 1 - N`; the upper
/// bound `Re < N + 1` of the strip is not needed by this evaluation.
fn check_strip(u: Complex, v: Complex, n: u32) -> Result<()> {
    let lo = 1.0 - n as f64;
    if u.re > lo && v.re > lo {
        Ok(())
    } else {
        Err(Error::domain(
            "T_N",
            format!("need Re u, Re v > {lo}, got u = {u}, v = {v}"),
        ))
    }
}

fn check_order(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidInput("N = 0 (need N >= 1)".into()))
    } else {
        Ok(())
    }
}

/// `S_N(u, v; x) = sum_{n<N} (u)_n x^{n+1-v} / (1-v)_{n+1} zeta_x(u+n, 1)`.
pub fn S_N(u: Complex, v: Complex, x: u64, n: u32, policy: &NumericPolicy) -> Result<Complex> {
    check_order(n)?;
    if x == 0 {
        return Err(Error::domain("S_N", "x = 0"));
    }
    let xf = x as f64;
    let mut acc = ComplexSum::new(policy.extended());
    for k in 0..n as i64 {
        let den = pochhammer(1.0 - v, k + 1)?;
        if den.norm() == 0.0 {
            return Err(Error::pole("S_N", format!("(1 - v)_{} = 0 at v = {v}", k + 1)));
        }
        let z = modified_hurwitz_zeta(u + k as f64, 1.0, x, policy)?;
        let pw = real_pow_neg(xf, v - (k + 1) as f64);
        acc.add(pochhammer(u, k)? * pw / den * z);
    }
    ensure_finite(acc.value(), "S_N")
}

/// `sum_{l >= 1} l^e int_l^inf beta^p (x + beta)^{-q} d beta`.
///
/// The inner integral is the binomial series at a cutoff `L` well above `x`
/// and is carried down to `l = 1` one unit interval at a time. The part
/// `l >= L` is summed in closed form as `sum_k a_k zeta(q + k - p - 1 - e, L)`.
fn lattice_inner_sum(
    e: Complex,
    p: Complex,
    q: Complex,
    x: f64,
    policy: &NumericPolicy,
) -> Result<(Complex, usize)> {
    let cutoff = (4.0 * x).max(2.0 * x * (q.norm() + 10.0)).max(16.0).ceil();
    if cutoff > MAX_LATTICE_TERMS {
        return Err(Error::convergence(
            "T_N",
            format!("l-sum would need {cutoff:e} terms (x = {x}, |q| = {})", q.norm()),
        ));
    }
    let big_l = cutoff as u64;

    // closed-form tail over l >= L
    let mut tail = ComplexSum::new(true);
    let mut binom = Complex::new(1.0, 0.0); // binom(-q, k) x^k
    let mut converged = false;
    for k in 0..600 {
        let kf = k as f64;
        let a_k = binom / (q + kf - p - 1.0);
        let s_k = q + kf - p - 1.0 - e;
        let term = a_k * hurwitz_zeta(s_k, cutoff, policy)?;
        tail.add(term);
        if k > 2 && term.norm() <= 1e-17 * tail.value().norm() {
            converged = true;
            break;
        }
        binom *= -(q + kf) / (kf + 1.0) * x;
    }
    if !converged {
        return Err(Error::convergence("T_N", "binomial tail series did not settle"));
    }

    let inner_policy = NumericPolicy {
        abs_tol: 1e-300,
        rel_tol: policy.rel_tol.min(1e-13),
        ..*policy
    };
    let integrand = |b: f64| Ok(real_pow_neg(b, -p) * real_pow_neg(x + b, q));
    let mut g = binomial_tail_continued(-p, q, x, cutoff)?;
    let mut head = ComplexSum::new(true);
    for l in (1..big_l).rev() {
        let lf = l as f64;
        g += integrate(integrand, &[lf, lf + 1.0], &inner_policy)?.value;
        head.add(real_pow_neg(lf, -e) * g);
    }
    let total = head.value() + tail.value();
    Ok((ensure_finite(total, "T_N")?, big_l as usize))
}

/// `sum_{l >= 1} l^{-m} (x + l)^{-c}`, with the part `l >= L` from the
/// binomial expansion `sum_k binom(-c, k) x^k zeta(c + m + k, L)`.
fn lattice_power_sum(m: u32, c: Complex, x: f64, policy: &NumericPolicy) -> Result<Complex> {
    let cutoff = (4.0 * x).max(2.0 * x * (c.norm() + 10.0)).max(16.0).ceil();
    if cutoff > MAX_LATTICE_TERMS {
        return Err(Error::convergence("T_N_expanded", format!("l-sum needs {cutoff:e} terms")));
    }
    let mf = m as f64;
    let mut acc = ComplexSum::new(true);
    for l in 1..cutoff as u64 {
        let lf = l as f64;
        acc.add(real_pow_neg(x + lf, c) * lf.powf(-mf));
    }
    let mut binom = Complex::new(1.0, 0.0);
    for k in 0..600 {
        let kf = k as f64;
        let term = binom * hurwitz_zeta(c + mf + kf, cutoff, policy)?;
        acc.add(term);
        if k > 2 && term.norm() <= 1e-17 * acc.value().norm() {
            return ensure_finite(acc.value(), "T_N_expanded");
        }
        binom *= -(c + kf) / (kf + 1.0) * x;
    }
    Err(Error::convergence("T_N_expanded", "binomial tail series did not settle"))
}

fn t_prefactor(v: Complex, x: f64, n: u32) -> Result<Complex> {
    let den = pochhammer(1.0 - v, n as i64)?;
    if den.norm() == 0.0 {
        return Err(Error::pole("T_N", format!("(1 - v)_{n} = 0 at v = {v}")));
    }
    Ok(real_pow_neg(x, v - (n + 1) as f64) / den)
}

/// `T_N(u, v; x)` from its integral form
/// `(u)_N x^{N+1-v} / (1-v)_N sum_l l^{1-u-v} int_l^inf beta^{u+v-2} (x+beta)^{-u-N} d beta`.
pub fn T_N_integral(u: Complex, v: Complex, x: u64, n: u32, policy: &NumericPolicy) -> Result<Complex> {
    T_N_expanded(u, v, x, n, 0, policy)
}

/// `T_N(u, v; x)` as `M` explicit lattice sums plus the integral remainder;
/// `M = 0` is the integral form.
pub fn T_N_expanded(
    u: Complex,
    v: Complex,
    x: u64,
    n: u32,
    m: u32,
    policy: &NumericPolicy,
) -> Result<Complex> {
    Ok(t_n_parts(u, v, x, n, m, policy)?.0)
}

fn t_n_parts(
    u: Complex,
    v: Complex,
    x: u64,
    n: u32,
    m_order: u32,
    policy: &NumericPolicy,
) -> Result<(Complex, usize)> {
    policy.validate()?;
    check_order(n)?;
    check_excluded(u, v)?;
    check_strip(u, v, n)?;
    if x == 0 {
        return Err(Error::domain("T_N", "x = 0"));
    }
    if m_order > n {
        return Err(Error::InvalidInput(format!("M = {m_order} exceeds N = {n}")));
    }
    let xf = x as f64;
    let w = u + v;
    let nn = n as i64;
    let mut acc = ComplexSum::new(policy.extended());
    for mi in 1..=m_order {
        let mm = mi as i64;
        let sign = if mi % 2 == 1 { 1.0 } else { -1.0 };
        let coeff = pochhammer(2.0 - w, mm - 1)? * pochhammer(u, nn - mm)? * sign;
        let c = u + (nn - mm) as f64;
        acc.add(coeff * lattice_power_sum(mi, c, xf, policy)?);
    }
    let sign = if m_order % 2 == 0 { 1.0 } else { -1.0 };
    let mm = m_order as i64;
    let coeff = pochhammer(2.0 - w, mm)? * pochhammer(u, nn - mm)? * sign;
    let (rem, terms) = lattice_inner_sum(
        1.0 - w,
        w - (mm + 2) as f64,
        u + (nn - mm) as f64,
        xf,
        policy,
    )?;
    acc.add(coeff * rem);
    let value = t_prefactor(v, xf, n)? * acc.value();
    Ok((ensure_finite(value, "T_N")?, terms))
}

/// `x^{1-u-v}/(u+v-1) + [Gamma(1-u)/Gamma(v) + Gamma(1-v)/Gamma(u)] Gamma(u+v-1) zeta(u+v-1)`.
fn leading_part(u: Complex, v: Complex, x: f64, policy: &NumericPolicy) -> Result<Complex> {
    let w = u + v;
    let lg = ln_gamma(w - 1.0)?;
    let ratio = (ln_gamma(1.0 - u)? - ln_gamma(v)? + lg).exp()
        + (ln_gamma(1.0 - v)? - ln_gamma(u)? + lg).exp();
    let z = riemann_zeta(w - 1.0, policy)?;
    ensure_finite(
        real_pow_neg(x, w - 1.0) / (w - 1.0) + ratio * z,
        "theorem1_Jx",
    )
}

/// `J_x(u, v)` from the exact `S_N` / `T_N` decomposition.
pub fn theorem1_Jx(u: Complex, v: Complex, x: u64, n: u32, policy: &NumericPolicy) -> Result<EstimateReport> {
    policy.validate()?;
    check_order(n)?;
    check_excluded(u, v)?;
    check_strip(u, v, n)?;
    if x == 0 {
        return Err(Error::domain("theorem1_Jx", "x = 0"));
    }
    let lead = leading_part(u, v, x as f64, policy)?;
    let s_uv = S_N(u, v, x, n, policy)?;
    let s_vu = S_N(v, u, x, n, policy)?;
    let (t_uv, l1) = t_n_parts(u, v, x, n, 0, policy)?;
    let (t_vu, l2) = t_n_parts(v, u, x, n, 0, policy)?;
    let value = lead - s_uv - s_vu - t_uv - t_vu;
    Ok(EstimateReport {
        value: ensure_finite(value, "theorem1_Jx")?,
        predicted_error_scale: policy.abs_tol.max(policy.rel_tol * value.norm()),
        terms_used: 2 * n as usize + l1 + l2,
        branch_notes: "principal branches; Gamma quotients in log space".into(),
        exceptional: None,
    })
}

/// `x^n zeta(u + n, x + 1)` without forming `x^n` and a tiny zeta separately
/// once `Re u + n` is large.
fn scaled_tail_zeta(u: Complex, n: usize, x: u64, policy: &NumericPolicy) -> Result<Complex> {
    let xf = x as f64;
    let s = u + n as f64;
    if s.re <= 30.0 {
        return Ok(hurwitz_zeta(s, xf + 1.0, policy)? * xf.powi(n as i32));
    }
    // sum_{k > x} (x/k)^n k^{-u}, terms fall off at least like (k/(x+1))^{-30}
    let mut acc = ComplexSum::new(true);
    let mut k = x + 1;
    loop {
        let kf = k as f64;
        let term = (n as f64 * (xf / kf).ln() - u * kf.ln()).exp();
        acc.add(term);
        if term.norm() < 1e-18 * acc.value().norm() || term.norm() == 0.0 {
            break;
        }
        k += 1;
    }
    Ok(acc.value())
}

/// `sum_{n >= 0} (u)_n x^{n+1-v} / (1-v)_{n+1} zeta_x(u+n, 1)`, stopped once
/// three successive terms fall below tolerance.
fn infinite_s(u: Complex, v: Complex, x: u64, policy: &NumericPolicy) -> Result<(Complex, usize)> {
    let xf = x as f64;
    let pw = real_pow_neg(xf, v - 1.0); // x^{1-v}
    let mut ratio = (1.0 - v).inv(); // (u)_n / (1-v)_{n+1}
    let mut acc = ComplexSum::new(policy.extended());
    let mut small = 0;
    for n in 0..MAX_SERIES_TERMS {
        let term = ratio * pw * scaled_tail_zeta(u, n, x, policy)?;
        acc.add(term);
        let target = policy.abs_tol.max(policy.rel_tol * acc.value().norm()) * 1e-2;
        if term.norm() < target {
            small += 1;
            if small == 3 {
                return Ok((acc.value(), n + 1));
            }
        } else {
            small = 0;
        }
        let nf = n as f64;
        ratio = ratio * (u + nf) / (2.0 - v + nf);
    }
    Err(Error::convergence(
        "corollary1_Jx",
        format!("series not settled after {MAX_SERIES_TERMS} terms"),
    ))
}

/// `J_x(u, v)` from the `N -> infinity` form with both infinite series.
pub fn corollary1_Jx(u: Complex, v: Complex, x: u64, policy: &NumericPolicy) -> Result<EstimateReport> {
    policy.validate()?;
    check_excluded(u, v)?;
    if x == 0 {
        return Err(Error::domain("corollary1_Jx", "x = 0"));
    }
    let lead = leading_part(u, v, x as f64, policy)?;
    let (a, na) = infinite_s(u, v, x, policy)?;
    let (b, nb) = infinite_s(v, u, x, policy)?;
    let value = lead - a - b;
    Ok(EstimateReport {
        value: ensure_finite(value, "corollary1_Jx")?,
        predicted_error_scale: policy.abs_tol.max(policy.rel_tol * value.norm()),
        terms_used: na + nb,
        branch_notes: "principal branches; series stopped on three sub-tolerance terms".into(),
        exceptional: None,
    })
}

/// Individual terms of the first series, for decay checks.
#[cfg(test)]
fn series_terms(u: Complex, v: Complex, x: u64, count: usize) -> Vec<Complex> {
    let p = NumericPolicy::default();
    let pw = real_pow_neg(x as f64, v - 1.0);
    let mut ratio = (1.0 - v).inv();
    (0..count)
        .map(|n| {
            let t = ratio * pw * scaled_tail_zeta(u, n, x, &p).unwrap();
            ratio = ratio * (u + n as f64) / (2.0 - v + n as f64);
            t
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meansq::integral_Jx;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn pol() -> NumericPolicy {
        NumericPolicy::default()
    }

    #[test]
    fn excluded_set_membership() {
        assert!(in_excluded_set(c(2.0, 0.0), c(0.5, 1.0)));
        assert!(in_excluded_set(c(0.3, 1.0), c(-1.0, 0.0)));
        assert!(in_excluded_set(c(0.7, 1.0), c(0.3, -1.0)));
        assert!(in_excluded_set(c(1.2, 1.0), c(0.8, -1.0)));
        // u + v = 3 is allowed
        assert!(!in_excluded_set(c(1.2, 1.0), c(1.8, -1.0)));
        assert!(!in_excluded_set(c(0.75, 5.0), c(0.6, -3.0)));
        assert!(matches!(
            theorem1_Jx(c(2.0, 0.0), c(0.5, 1.0), 1, 2, &pol()),
            Err(Error::ExcludedSet { .. })
        ));
    }

    #[test]
    fn s_n_single_term_and_prefix() {
        let (u, v) = (c(3.0, 0.0), c(2.5, 0.0));
        let s1 = S_N(u, v, 1, 1, &pol()).unwrap();
        let e = modified_hurwitz_zeta(u, 1.0, 1, &pol()).unwrap() / (1.0 - v);
        assert!((s1 - e).norm() < 1e-15);

        let (u, v) = (c(2.0, 5.0), c(2.0, -5.0));
        let s2 = S_N(u, v, 4, 2, &pol()).unwrap();
        let s3 = S_N(u, v, 4, 3, &pol()).unwrap();
        let third = pochhammer(u, 2).unwrap() * real_pow_neg(4.0, v - 3.0)
            / pochhammer(1.0 - v, 3).unwrap()
            * modified_hurwitz_zeta(u + 2.0, 1.0, 4, &pol()).unwrap();
        assert!((s2 + third - s3).norm() < 1e-14 * s3.norm());
    }

    #[test]
    fn s_n_three_terms_by_hand() {
        let (u, v, x) = (c(2.0, 5.0), c(2.0, -5.0), 4u64);
        let mut e = Complex::new(0.0, 0.0);
        for n in 0..3i64 {
            let num: Complex = (0..n).map(|k| u + k as f64).product();
            let den: Complex = (0..=n).map(|k| 1.0 - v + k as f64).product();
            let xp = ((n as f64 + 1.0 - v) * (x as f64).ln()).exp();
            e += num * xp / den * hurwitz_zeta(u + n as f64, 5.0, &pol()).unwrap();
        }
        let s = S_N(u, v, x, 3, &pol()).unwrap();
        assert!((s - e).norm() < 1e-14 * e.norm());
    }

    #[test]
    fn expanded_matches_integral_form() {
        let (u, v, x, n) = (c(2.2, 3.0), c(2.1, -3.0), 2, 3);
        let a = T_N_integral(u, v, x, n, &pol()).unwrap();
        for m in 1..=3 {
            let b = T_N_expanded(u, v, x, n, m, &pol()).unwrap();
            assert!((a - b).norm() < 1e-9, "M = {m}: {a} vs {b}");
        }
    }

    #[test]
    fn t_n_decays_with_n() {
        // |T_N| <~ N^{Re(u+v)-1} eps_x^N with eps_2 = 2/3
        let (u, v, x) = (c(2.2, 3.0), c(2.1, -3.0), 2);
        let t4 = T_N_integral(u, v, x, 4, &pol()).unwrap().norm();
        let t8 = T_N_integral(u, v, x, 8, &pol()).unwrap().norm();
        let w = (u + v).re - 1.0;
        let env = |n: f64| n.powf(w) * (2.0f64 / 3.0).powf(n);
        let observed = t8 / t4;
        let predicted = env(8.0) / env(4.0);
        assert!(observed < 4.0 * predicted, "{observed} vs {predicted}");
        assert!(t8 < t4);
    }

    #[test]
    fn envelope_grows_with_x() {
        let env = |x: f64, n: i32| (x / (x + 1.0)).powi(n);
        assert!(env(9.0, 6) > env(1.0, 6));
    }

    #[test]
    fn theorem1_matches_quadrature() {
        let (u, v) = (c(0.75, 5.0), c(0.6, -3.0));
        for x in [1, 2, 5] {
            let j = integral_Jx(u, v, x, &pol()).unwrap().value;
            let t = theorem1_Jx(u, v, x, 2, &pol()).unwrap().value;
            assert!((j - t).norm() < 1e-8, "x = {x}: {t} vs {j}");
        }
    }

    #[test]
    fn theorem1_independent_of_n() {
        let (u, v, x) = (c(0.75, 5.0), c(0.6, -3.0), 2);
        let r: Vec<Complex> = (1..=3)
            .map(|n| theorem1_Jx(u, v, x, n, &pol()).unwrap().value)
            .collect();
        assert!((r[0] - r[1]).norm() < 1e-8 && (r[1] - r[2]).norm() < 1e-8, "{r:?}");
    }

    #[test]
    fn corollary1_matches_theorem1() {
        let (u, v, x) = (c(0.75, 5.0), c(0.6, -3.0), 2);
        let a = corollary1_Jx(u, v, x, &pol()).unwrap();
        let b = theorem1_Jx(u, v, x, 2, &pol()).unwrap();
        assert!((a.value - b.value).norm() < 1e-8);
        let slow = corollary1_Jx(u, v, 9, &pol()).unwrap();
        let fast = corollary1_Jx(u, v, 1, &pol()).unwrap();
        assert!(slow.terms_used > fast.terms_used);
    }

    #[test]
    fn corollary1_term_ratio_tends_to_one_half() {
        let terms = series_terms(c(0.75, 5.0), c(0.6, -3.0), 1, 200);
        let r = terms[199].norm() / terms[198].norm();
        assert!((r - 0.5).abs() < 0.01, "{r}");
    }
}
