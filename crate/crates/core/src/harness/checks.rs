//! The acceptance grids AC-1 .. AC-7, shared by `hzmean verify` and the
//! `acceptance` test target.

use super::{fit_error_exponents, run_sweep, Estimator, SweepRow, SweepSpec, XRule};
use crate::asymptotics::{
    reconciliation_identities, theorem1_Jx, theorem2_Ix, theorem3_mean,
};
use crate::error::{Error, Result};
use crate::hurwitz::{CellCoords, StripPoint};
use crate::lattice::{
    count_frac_below, hyperbola_double_sum, hyperbola_naive, hyperbola_normalized_deviation,
    saffari_density,
};
use crate::meansq::{
    fourier_modes_for_tail, fourier_representation_Ix, integral_Ix, integral_Jx,
    large_interval_mean,
};
use crate::numerics::{fresnel_psi, fresnel_psi_endpoint_form, Complex, NumericPolicy};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub pass: bool,
    pub summary: String,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({:.1}s) {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.seconds,
            self.summary
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Estimators,
    Lattice,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "estimators" => Ok(Suite::Estimators),
            "lattice" => Ok(Suite::Lattice),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidInput(format!("unknown suite '{other}'"))),
        }
    }
}

/// Settings shared by the checks: the envelope constant for residual bounds
/// and the correction factor used by AC-3a.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckSettings {
    pub envelope: f64,
    pub correction_factor: f64,
    pub policy: NumericPolicy,
}

impl Default for CheckSettings {
    fn default() -> Self {
        CheckSettings {
            envelope: 20.0,
            correction_factor: 0.25,
            policy: NumericPolicy::with_tolerance(1e-10),
        }
    }
}

fn timed(id: &'static str, f: impl FnOnce() -> Result<(bool, String, Vec<String>)>) -> CheckOutcome {
    let start = Instant::now();
    let (pass, summary, details) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}"), Vec::new()),
    };
    CheckOutcome {
        id,
        pass,
        summary,
        details,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// AC-1: the exact decomposition against quadrature of `J_x`.
pub fn ac1_theorem1(cfg: &CheckSettings) -> CheckOutcome {
    timed("AC-1", || {
        let pol = cfg.policy;
        let pairs = [(c(0.75, 5.0), c(0.6, -3.0)), (c(2.2, 3.0), c(2.1, -3.0)), (c(0.4, 8.0), c(0.7, 2.0))];
        let mut worst: f64 = 0.0;
        let mut details = Vec::new();
        let mut pass = true;
        for (u, v) in pairs {
            for x in [1u64, 2, 5] {
                let oracle = integral_Jx(u, v, x, &pol)?.value;
                for n in 1..=3u32 {
                    let r = match theorem1_Jx(u, v, x, n, &pol) {
                        Ok(rep) => (rep.value - oracle).norm(),
                        Err(e) => {
                            pass = false;
                            details.push(format!("u={u} v={v} x={x} N={n}: {e}"));
                            continue;
                        }
                    };
                    worst = worst.max(r);
                    if r > 1e-8 {
                        pass = false;
                    }
                    details.push(format!("u={u} v={v} x={x} N={n} residual={r:.3e}"));
                }
            }
        }
        Ok((pass, format!("max |thm1 - J_x| = {worst:.3e} (bound 1e-8, 27 points)"), details))
    })
}

/// The critical-line (`cor3`) grid used by AC-2.
pub fn cor3_rows(policy: NumericPolicy) -> Result<Vec<SweepRow>> {
    let mut spec = SweepSpec::new(
        Estimator::Cor3,
        vec![0.5],
        vec![100.0, 200.0, 400.0, 800.0, 1600.0],
        XRule::Fixed(vec![1, 2, 4]),
    );
    spec.policy = policy;
    run_sweep(&spec)
}

/// AC-2: fitted `t` exponent of the `cor3` residual and its envelope.
pub fn ac2_corollary3(cfg: &CheckSettings) -> CheckOutcome {
    timed("AC-2", || {
        let rows = cor3_rows(cfg.policy)?;
        if let Some(r) = rows.iter().find(|r| !r.error_flag.is_empty()) {
            return Err(Error::InvalidInput(format!("row t={} x={} failed: {}", r.t, r.x, r.error_flag)));
        }
        let fit = fit_error_exponents(&rows, cfg.policy.abs_tol)?;
        let e_t = fit.exponents["t"];
        let worst = rows
            .iter()
            .map(|r| r.residual / (r.x as f64 / r.t))
            .fold(0.0, f64::max);
        let fit_ok = (-1.25..=-0.75).contains(&e_t);
        let env_ok = worst <= cfg.envelope;
        let details = rows
            .iter()
            .map(|r| format!("t={} x={} residual={:.3e} residual*t/x={:.3}", r.t, r.x, r.residual, r.residual * r.t / r.x as f64))
            .collect();
        Ok((
            fit_ok && env_ok,
            format!(
                "e_t = {e_t:.3} (want [-1.25, -0.75]), e_x = {:.3}, R^2 = {:.3}; max residual/(x/t) = {worst:.3} (bound {})",
                fit.exponents.get("x").copied().unwrap_or(f64::NAN),
                fit.r_squared,
                cfg.envelope
            ),
            details,
        ))
    })
}

/// The first `count` cells `x` with `||y|| >= eta`.
pub fn non_exceptional_cells(t: f64, eta: f64, count: usize) -> Vec<u64> {
    let top = (t / (2.0 * PI)).floor() as u64;
    (1..=top)
        .filter(|&x| CellCoords::new(t, x).map(|c| !c.in_exceptional_set(eta)).unwrap_or(false))
        .take(count)
        .collect()
}

/// AC-3a: the non-exceptional envelope of the stationary-phase estimate.
pub fn ac3a_theorem2(cfg: &CheckSettings) -> CheckOutcome {
    timed("AC-3a", || {
        let eta = 0.2;
        let mut pass = true;
        let mut worst: f64 = 0.0;
        let mut details = Vec::new();
        for t in [500.0, 1000.0, 2000.0] {
            let sp = StripPoint::new(0.5, t)?;
            for x in non_exceptional_cells(t, eta, 5) {
                let o = integral_Ix(sp, x, &cfg.policy)?.value.re;
                let e = theorem2_Ix(sp, x, eta, cfg.correction_factor, &cfg.policy)?;
                let cell = CellCoords::new(t, x)?;
                let bound = 1.0 / (x as f64 * eta * eta) + t.powf(-0.5) * (cell.y + 2.0).ln() / eta;
                let r = (o - e.value.re).abs();
                worst = worst.max(r / bound);
                pass &= r <= cfg.envelope * bound;
                details.push(format!("t={t} x={x} ||y||={:.3} residual={r:.3e} scale={bound:.3e}", cell.dist));
            }
        }
        Ok((pass, format!("max residual/scale = {worst:.3} (bound {}, 15 cells)", cfg.envelope), details))
    })
}

/// Residuals of the stationary-phase estimate at one cell for correction
/// factors 0, 1/4 and 1.
pub fn boundary_layer_ab(t: f64, x: u64, policy: &NumericPolicy) -> Result<[f64; 4]> {
    let sp = StripPoint::new(0.5, t)?;
    let o = integral_Ix(sp, x, policy)?.value.re;
    let mut r = [o, 0.0, 0.0, 0.0];
    for (i, cf) in [0.0, 0.25, 1.0].into_iter().enumerate() {
        r[i + 1] = (o - theorem2_Ix(sp, x, 0.2, cf, policy)?.value.re).abs();
    }
    Ok(r)
}

/// AC-3b: the boundary-layer term at exact divisors, factor 1/4 against none;
/// factor 1 and two small-`y` cells are reported alongside.
pub fn ac3b_correction(cfg: &CheckSettings) -> CheckOutcome {
    timed("AC-3b", || {
        let t = 2.0 * PI * 720.0;
        let mut pass = true;
        let mut details = Vec::new();
        let mut ratios = Vec::new();
        for x in [16u64, 20, 24] {
            let [o, r0, rq, r1] = boundary_layer_ab(t, x, &cfg.policy)?;
            let ratio = r0 / rq;
            pass &= ratio >= 5.0;
            ratios.push(ratio);
            details.push(format!(
                "x={x} y={} oracle={o:.6} |res| none={r0:.3e} 1/4={rq:.3e} 1={r1:.3e} gain(1/4)={ratio:.2} gain(1)={:.2}",
                720 / x,
                r0 / r1
            ));
        }
        for x in [360u64, 720] {
            let [o, r0, rq, r1] = boundary_layer_ab(t, x, &cfg.policy)?;
            details.push(format!(
                "(extra) x={x} y={} oracle={o:.6} |res| none={r0:.3e} 1/4={rq:.3e} 1={r1:.3e} gain(1/4)={:.2} gain(1)={:.2}",
                720 / x,
                r0 / rq,
                r0 / r1
            ));
        }
        Ok((
            pass,
            format!(
                "gain with factor 1/4 at x=16,20,24: {:.2}, {:.2}, {:.2} (need >= 5)",
                ratios[0], ratios[1], ratios[2]
            ),
            details,
        ))
    })
}

/// AC-4: long-interval mean against the leading term.
pub fn ac4_theorem3(cfg: &CheckSettings) -> CheckOutcome {
    timed("AC-4", || {
        let mut details = Vec::new();
        let mut devs = Vec::new();
        let mut last_ratio = f64::NAN;
        for n in [100.0, 200.0, 400.0] {
            let t = 2.0 * PI * n;
            let mean = large_interval_mean(StripPoint::new(0.5, t)?, &cfg.policy)?.value.re;
            let lead = theorem3_mean(0.5, t)?.value.re;
            last_ratio = mean / lead;
            devs.push((last_ratio - 1.0).abs());
            details.push(format!("sigma=0.5 t/2pi={n} mean={mean:.6} ratio={last_ratio:.5}"));
        }
        let t = 2.0 * PI * 400.0;
        let mean = large_interval_mean(StripPoint::new(0.3, t)?, &cfg.policy)?.value.re;
        let r03 = mean / theorem3_mean(0.3, t)?.value.re;
        details.push(format!("sigma=0.3 t/2pi=400 mean={mean:.6} ratio={r03:.5}"));
        let pass = (0.85..=1.15).contains(&last_ratio)
            && devs[0] > devs[1]
            && devs[1] > devs[2]
            && (0.8..=1.2).contains(&r03);
        Ok((
            pass,
            format!(
                "|ratio-1| = {:.4}, {:.4}, {:.4}; ratio at 400 = {last_ratio:.4}; sigma=0.3 ratio = {r03:.4}",
                devs[0], devs[1], devs[2]
            ),
            details,
        ))
    })
}

/// AC-5: fractional-part density at `n = 10^5`.
pub fn ac5_saffari(_cfg: &CheckSettings) -> CheckOutcome {
    timed("AC-5", || {
        let n = 100_000u64;
        let nf = n as f64;
        let bound = 5.0 * nf.powf(-2.0 / 3.0) * nf.ln();
        let mut worst: f64 = 0.0;
        let mut details = Vec::new();
        for d in [0.1, 0.25, 0.4] {
            let emp = count_frac_below(n, d) as f64 / nf;
            let err = (emp - saffari_density(d)?).abs();
            worst = worst.max(err);
            details.push(format!("delta={d} empirical={emp:.6} density={:.6} error={err:.3e}", saffari_density(d)?));
        }
        Ok((worst <= bound, format!("max error {worst:.3e} (bound {bound:.3e})"), details))
    })
}

/// AC-6: hyperbola split against the double loop, and the normalised deviation.
pub fn ac6_hyperbola(_cfg: &CheckSettings) -> CheckOutcome {
    timed("AC-6", || {
        let mut details = Vec::new();
        let mut worst_rel: f64 = 0.0;
        let sigmas = [0.25, 0.5, 0.75];
        for n in [100u64, 1_000, 10_000] {
            for s in sigmas {
                let a = hyperbola_double_sum(n, s)?;
                let b = hyperbola_naive(n, s);
                let rel = (a - b).abs() / b.abs();
                worst_rel = worst_rel.max(rel);
                details.push(format!("N={n} sigma={s} split={a:.12e} naive={b:.12e} rel={rel:.1e}"));
            }
        }
        let mut worst_dev: f64 = 0.0;
        let mut worst_spread: f64 = 0.0;
        for s in sigmas {
            let devs = [100u64, 1_000, 10_000, 100_000]
                .iter()
                .map(|&n| hyperbola_normalized_deviation(n, s))
                .collect::<Result<Vec<_>>>()?;
            let max = devs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
            let min = devs.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
            worst_dev = worst_dev.max(max);
            worst_spread = worst_spread.max(max / min);
            details.push(format!(
                "sigma={s} deviation/N^sigma over N=1e2..1e5: {devs:.4?} max/min |.| = {:.3}",
                max / min
            ));
        }
        Ok((
            worst_rel <= 1e-10 && worst_dev <= 50.0 && worst_spread <= 50.0,
            format!(
                "max rel diff {worst_rel:.1e} (bound 1e-10); max |deviation| {worst_dev:.3}, max/min {worst_spread:.2} (both bound 50)"
            ),
            details,
        ))
    })
}

/// AC-7: Fresnel forms, the functional equation and the Fourier representation.
pub fn ac7_identities(cfg: &CheckSettings) -> CheckOutcome {
    timed("AC-7", || {
        let mut details = Vec::new();
        let pol = cfg.policy;
        let psi0 = (fresnel_psi(0.0, &pol)? - 1.0).norm();
        let mut psi_gap: f64 = 0.0;
        for eps in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let d = (fresnel_psi(eps, &pol)? - fresnel_psi_endpoint_form(eps, &pol)?).norm();
            psi_gap = psi_gap.max(d);
        }
        details.push(format!("|Psi(0) - 1| = {psi0:.1e}; max form gap = {psi_gap:.1e}"));
        let mut fe: f64 = 0.0;
        for sigma in [0.3, 0.8] {
            let r = reconciliation_identities(sigma, 1000.0, 0.25, &pol)?;
            fe = fe.max(r.functional_residual);
            details.push(format!("sigma={sigma} functional-equation residual {:.1e}", r.functional_residual));
        }
        let sp = StripPoint::new(0.5, 40.0)?;
        let oracle = integral_Ix(sp, 2, &pol)?.value.re;
        let m = fourier_modes_for_tail(sp, 2, 5e-7)?;
        let partial = fourier_representation_Ix(sp, 2, m, &pol)?;
        let fgap = (oracle - partial).abs();
        details.push(format!("Fourier: M={m} partial={partial:.12} oracle={oracle:.12} gap={fgap:.3e}"));
        let pass = psi0 <= 1e-12 && psi_gap <= 1e-9 && fe <= 1e-10 && fgap <= 1e-6;
        Ok((
            pass,
            format!("Psi(0) err {psi0:.1e}, Psi forms {psi_gap:.1e}, functional eq {fe:.1e}, Fourier gap {fgap:.2e} at M={m}"),
            details,
        ))
    })
}

pub fn suite_checks(suite: Suite) -> Vec<fn(&CheckSettings) -> CheckOutcome> {
    let identities: Vec<fn(&CheckSettings) -> CheckOutcome> = vec![ac1_theorem1, ac7_identities];
    let estimators: Vec<fn(&CheckSettings) -> CheckOutcome> =
        vec![ac2_corollary3, ac3a_theorem2, ac3b_correction, ac4_theorem3];
    let lattice: Vec<fn(&CheckSettings) -> CheckOutcome> = vec![ac5_saffari, ac6_hyperbola];
    match suite {
        Suite::Identities => identities,
        Suite::Estimators => estimators,
        Suite::Lattice => lattice,
        Suite::All => vec![
            ac1_theorem1,
            ac2_corollary3,
            ac3a_theorem2,
            ac3b_correction,
            ac4_theorem3,
            ac5_saffari,
            ac6_hyperbola,
            ac7_identities,
        ],
    }
}

/// Runs every check of `suite` in order.
pub fn run_suite(suite: Suite, cfg: &CheckSettings) -> Vec<CheckOutcome> {
    suite_checks(suite).into_iter().map(|f| f(cfg)).collect()
}
