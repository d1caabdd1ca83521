//! Globally adaptive Gauss–Kronrod (G7/K15) quadrature for complex integrands.
//!
//! The caller supplies the initial breakpoints, which is how oscillation-aware
//! panelization is expressed. Bisection always targets the panel with the
//! largest error estimate. The final value is reduced in ascending-panel order,
//! so results are bit-stable for a fixed policy.

use super::summation::{ComplexSum, RealSum};
use super::{Complex, NumericPolicy};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: Complex,
    pub error_estimate: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex,
    err: f64,
    floor: f64,
}

/// One K15 panel with the QUADPACK error heuristic.
/// Returns `(value, error estimate, roundoff floor)`.
pub fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(Complex, f64, f64)>
where
    F: Fn(f64) -> Result<Complex> + ?Sized,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    let mut fv1 = [Complex::new(0.0, 0.0); 7];
    let mut fv2 = [Complex::new(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let hl = h.abs();
    let value = resk * h;
    let resabs = resabs * hl;
    let resasc = resasc * hl;
    let mut err = ((resk - resg) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    Ok((value, err, floor))
}

#[derive(PartialEq)]
struct ByError(f64, usize);

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Uniform breakpoints `a, a + h, ..., b` with `panels` pieces.
pub fn uniform_breakpoints(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let n = panels.max(1);
    (0..=n)
        .map(|k| {
            if k == n {
                b
            } else {
                a + (b - a) * (k as f64 / n as f64)
            }
        })
        .collect()
}

/// Integrate `f` over `[breakpoints[0], breakpoints.last()]` to
/// `max(abs_tol, rel_tol * |I|)`.
///
/// Fails with [`Error::ToleranceNotMet`] (carrying the best estimate) when the
/// panel budget `policy.max_subdivisions` runs out.
pub fn integrate<F>(f: F, breakpoints: &[f64], policy: &NumericPolicy) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<Complex> + Sync,
{
    if breakpoints.len() < 2 {
        return Err(Error::InvalidInput("quadrature needs at least two breakpoints".into()));
    }
    let initial: Vec<(f64, f64)> = breakpoints.windows(2).map(|w| (w[0], w[1])).collect();
    let eval = |&(a, b): &(f64, f64)| -> Result<Panel> {
        let (value, err, floor) = gk15(&f, a, b)?;
        Ok(Panel { a, b, value, err, floor })
    };
    let mut panels: Vec<Panel> = if initial.len() >= 32 {
        initial.par_iter().map(eval).collect::<Result<Vec<_>>>()?
    } else {
        initial.iter().map(eval).collect::<Result<Vec<_>>>()?
    };
    let mut evaluations = 15 * panels.len();

    let mut heap: BinaryHeap<ByError> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| ByError(p.err, i))
        .collect();
    let mut total_err = RealSum::sum(panels.iter().map(|p| p.err), true);
    let mut total = ComplexSum::sum(panels.iter().map(|p| p.value), true);
    // error that refinement cannot remove: roundoff floors plus panels too
    // narrow to bisect
    let mut stuck = RealSum::sum(panels.iter().map(|p| p.floor), true);

    loop {
        let target = policy.abs_tol.max(policy.rel_tol * total.norm());
        if total_err - stuck <= target {
            break;
        }
        let Some(ByError(_, idx)) = heap.pop() else {
            return Err(Error::ToleranceNotMet {
                estimate: total_err,
                requested: target,
                cell: None,
            });
        };
        if panels.len() >= policy.max_subdivisions {
            return Err(Error::ToleranceNotMet {
                estimate: total_err,
                requested: target,
                cell: None,
            });
        }
        let p = panels[idx];
        let mid = 0.5 * (p.a + p.b);
        if (p.b - p.a).abs() <= 8.0 * f64::EPSILON * p.a.abs().max(p.b.abs()) || mid == p.a || mid == p.b {
            stuck += p.err - p.floor;
            continue;
        }
        let left = eval(&(p.a, mid))?;
        let right = eval(&(mid, p.b))?;
        evaluations += 30;
        total_err += left.err + right.err - p.err;
        stuck += left.floor + right.floor - p.floor;
        total += left.value + right.value - p.value;
        panels[idx] = left;
        panels.push(right);
        heap.push(ByError(left.err, idx));
        heap.push(ByError(right.err, panels.len() - 1));
    }

    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let extended = policy.extended();
    let value = ComplexSum::sum(panels.iter().map(|p| p.value), extended);
    let error_estimate = RealSum::sum(panels.iter().map(|p| p.err), true);
    Ok(QuadratureResult {
        value,
        error_estimate,
        panels: panels.len(),
        evaluations,
    })
}
