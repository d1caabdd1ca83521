//! Parameter sweeps of estimator against oracle, exponent fits, and the
//! verification suites behind the `hzmean` CLI.

pub mod checks;
pub mod config;
mod fit;

pub use checks::{run_suite, CheckOutcome, Suite};
pub use config::{parse_config, ConfigMap};
pub use fit::{fit_error_exponents, FitResult};

use crate::asymptotics::{
    corollary2_Ix, corollary3_Ix, theorem1_Jx, theorem2_Ix, theorem3_mean, EstimateReport,
};
use crate::error::{Error, Result};
use crate::hurwitz::{CellCoords, StripPoint};
use crate::meansq::{
    fourier_modes_for_tail, fourier_representation_Ix, integral_Ix, large_interval_mean,
};
use crate::numerics::NumericPolicy;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Cor2,
    Cor3,
    Thm2,
    Thm3,
    Thm1,
    Fourier,
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "cor2" => Estimator::Cor2,
            "cor3" => Estimator::Cor3,
            "thm2" => Estimator::Thm2,
            "thm3" => Estimator::Thm3,
            "thm1" => Estimator::Thm1,
            "fourier" => Estimator::Fourier,
            other => return Err(Error::InvalidInput(format!("unknown estimator '{other}'"))),
        })
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Cor2 => "cor2",
            Estimator::Cor3 => "cor3",
            Estimator::Thm2 => "thm2",
            Estimator::Thm3 => "thm3",
            Estimator::Thm1 => "thm1",
            Estimator::Fourier => "fourier",
        })
    }
}

/// Which cells a sweep visits at each `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum XRule {
    Fixed(Vec<u64>),
    /// `x = max(1, round(c t))`.
    Proportional(f64),
    /// `x = 1, ..., floor(t/2pi)`.
    AllCells,
}

impl XRule {
    pub fn cells(&self, t: f64) -> Vec<u64> {
        match self {
            XRule::Fixed(v) => v.clone(),
            XRule::Proportional(c) => vec![((c * t).round() as u64).max(1)],
            XRule::AllCells => (1..=(t / (2.0 * PI)).floor() as u64).collect(),
        }
    }
}

impl FromStr for XRule {
    type Err = Error;

    /// `all`, `prop:<c>`, or a comma list of integers (possibly empty).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(XRule::AllCells);
        }
        if let Some(c) = s.strip_prefix("prop:") {
            let c: f64 = c
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad proportional x rule '{s}'")))?;
            return Ok(XRule::Proportional(c));
        }
        let xs = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidInput(format!("bad x value '{p}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(XRule::Fixed(xs))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub estimator: Estimator,
    pub sigma: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub x_rule: XRule,
    pub eta: f64,
    pub n_order: u32,
    pub correction_factor: f64,
    pub policy: NumericPolicy,
    pub out_path: Option<PathBuf>,
}

impl SweepSpec {
    pub fn new(estimator: Estimator, sigma: Vec<f64>, t_grid: Vec<f64>, x_rule: XRule) -> Self {
        SweepSpec {
            estimator,
            sigma,
            t_grid,
            x_rule,
            eta: 0.25,
            n_order: 2,
            correction_factor: 0.25,
            policy: NumericPolicy::default(),
            out_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        if self.sigma.is_empty() {
            return Err(Error::InvalidInput("no sigma values".into()));
        }
        if self.t_grid.is_empty() {
            return Err(Error::InvalidInput("empty t grid".into()));
        }
        if !self.t_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("t grid must be strictly increasing".into()));
        }
        if let Some(t) = self.t_grid.iter().find(|t| !(**t > 1.0)) {
            return Err(Error::InvalidInput(format!("t = {t} (need t > 1)")));
        }
        Ok(())
    }
}

/// One grid point of a sweep. Failed evaluations keep their row with NaN
/// values and the error kind in `error_flag`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub t: f64,
    pub x: u64,
    pub y: f64,
    pub dist_y: f64,
    pub in_a: bool,
    pub oracle: f64,
    pub estimate: f64,
    pub residual: f64,
    pub predicted_scale: f64,
    pub terms_used: usize,
    pub error_flag: String,
}

pub const CSV_HEADER: &str =
    "sigma,t,x,y,dist_y,in_A,oracle,estimate,residual,predicted_scale,terms_used,error_flag";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{:e},{:e},{},{:e},{:e},{},{:e},{:e},{:e},{:e},{},{}",
            self.sigma,
            self.t,
            self.x,
            self.y,
            self.dist_y,
            self.in_a,
            self.oracle,
            self.estimate,
            self.residual,
            self.predicted_scale,
            self.terms_used,
            self.error_flag
        )
    }
}

/// Header plus one line per row, LF endings.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(96 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv());
    }
    out
}

fn grid_points(spec: &SweepSpec) -> Vec<(f64, f64, u64)> {
    let mut pts = Vec::new();
    for &sigma in &spec.sigma {
        for &t in &spec.t_grid {
            if spec.estimator == Estimator::Thm3 {
                // the long-interval mean is one number per t
                pts.push((sigma, t, 1));
                continue;
            }
            for x in spec.x_rule.cells(t) {
                pts.push((sigma, t, x));
            }
        }
    }
    pts
}

fn evaluate(spec: &SweepSpec, sp: StripPoint, x: u64) -> Result<(f64, EstimateReport)> {
    let p = &spec.policy;
    Ok(match spec.estimator {
        Estimator::Cor2 => (
            integral_Ix(sp, x, p)?.value.re,
            corollary2_Ix(sp, x, spec.n_order, p)?,
        ),
        Estimator::Cor3 => {
            if sp.sigma != 0.5 {
                return Err(Error::domain("sweep", "cor3 is the sigma = 1/2 estimate"));
            }
            (integral_Ix(sp, x, p)?.value.re, corollary3_Ix(sp.t, x, p)?)
        }
        Estimator::Thm2 => (
            integral_Ix(sp, x, p)?.value.re,
            theorem2_Ix(sp, x, spec.eta, spec.correction_factor, p)?,
        ),
        Estimator::Thm3 => (
            large_interval_mean(sp, p)?.value.re,
            theorem3_mean(sp.sigma, sp.t)?,
        ),
        Estimator::Thm1 => {
            let s = sp.s();
            let report = theorem1_Jx(s, s.conj(), x, spec.n_order, p)?;
            (integral_Ix(sp, x, p)?.value.re, report)
        }
        Estimator::Fourier => {
            let m = fourier_modes_for_tail(sp, x, p.abs_tol.max(1e-7))?;
            let v = fourier_representation_Ix(sp, x, m, p)?;
            let report = EstimateReport {
                value: v.into(),
                predicted_error_scale: (x as f64).powf(-2.0 * sp.sigma) / (2.0 * PI * PI * m as f64),
                terms_used: m as usize,
                branch_notes: "modes |m| <= M".into(),
                exceptional: None,
            };
            (integral_Ix(sp, x, p)?.value.re, report)
        }
    })
}

fn sweep_row(spec: &SweepSpec, sigma: f64, t: f64, x: u64) -> SweepRow {
    let mut row = SweepRow {
        sigma,
        t,
        x,
        y: f64::NAN,
        dist_y: f64::NAN,
        in_a: false,
        oracle: f64::NAN,
        estimate: f64::NAN,
        residual: f64::NAN,
        predicted_scale: f64::NAN,
        terms_used: 0,
        error_flag: String::new(),
    };
    let outcome = (|| -> Result<()> {
        let cell = CellCoords::new(t, x)?;
        row.y = cell.y;
        row.dist_y = cell.dist;
        row.in_a = cell.in_exceptional_set(spec.eta);
        let sp = StripPoint::new(sigma, t)?;
        let (oracle, report) = evaluate(spec, sp, x)?;
        row.oracle = oracle;
        row.estimate = report.value.re;
        row.residual = (oracle - report.value.re).abs();
        row.predicted_scale = report.predicted_error_scale;
        row.terms_used = report.terms_used;
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error_flag = e.kind().to_string();
    }
    row
}

/// Every grid point of `spec`, computed concurrently and returned in grid
/// order (sigma, then t, then x).
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let pts = grid_points(spec);
    Ok(pts
        .par_iter()
        .map(|&(sigma, t, x)| sweep_row(spec, sigma, t, x))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_rule_parsing() {
        assert_eq!("1,2, 4".parse::<XRule>().unwrap(), XRule::Fixed(vec![1, 2, 4]));
        assert_eq!("".parse::<XRule>().unwrap(), XRule::Fixed(vec![]));
        assert_eq!("all".parse::<XRule>().unwrap(), XRule::AllCells);
        assert_eq!("prop:0.01".parse::<XRule>().unwrap(), XRule::Proportional(0.01));
        assert!("1,x".parse::<XRule>().is_err());
        assert_eq!(XRule::AllCells.cells(2.0 * PI * 3.5), vec![1, 2, 3]);
    }

    #[test]
    fn estimator_names_round_trip() {
        for e in ["cor2", "cor3", "thm2", "thm3", "thm1", "fourier"] {
            assert_eq!(e.parse::<Estimator>().unwrap().to_string(), e);
        }
        assert!("thm4".parse::<Estimator>().is_err());
    }

    #[test]
    fn empty_cell_list_gives_no_rows() {
        let spec = SweepSpec::new(Estimator::Cor3, vec![0.5], vec![200.0, 400.0], XRule::Fixed(vec![]));
        assert!(run_sweep(&spec).unwrap().is_empty());
    }

    #[test]
    fn cor3_sweep_shape_and_residuals() {
        let spec = SweepSpec::new(
            Estimator::Cor3,
            vec![0.5],
            vec![200.0, 400.0, 800.0],
            XRule::Fixed(vec![1, 2, 4]),
        );
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 9);
        for r in &rows {
            assert!(r.error_flag.is_empty());
            assert_eq!(r.residual, (r.oracle - r.estimate).abs());
            assert_eq!(r.predicted_scale, r.x as f64 / r.t);
        }
        assert_eq!(rows[3].t, 400.0);
        assert_eq!(rows[3].x, 1);
    }

    #[test]
    fn failed_points_are_flagged_not_fatal() {
        // cor2 at sigma = 1/2 is degenerate
        let spec = SweepSpec::new(Estimator::Cor2, vec![0.5, 0.7], vec![100.0], XRule::Fixed(vec![1]));
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows[0].error_flag, "degenerate_sigma");
        assert!(rows[0].oracle.is_nan());
        assert!(rows[1].error_flag.is_empty());
        let csv = rows_to_csv(&rows);
        assert!(csv.lines().nth(1).unwrap().ends_with(",degenerate_sigma"));
    }

    #[test]
    fn csv_layout() {
        let spec = SweepSpec::new(Estimator::Cor3, vec![0.5], vec![100.0], XRule::Fixed(vec![2]));
        let csv = rows_to_csv(&run_sweep(&spec).unwrap());
        let mut lines = csv.split('\n');
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 12);
        assert_eq!(row[0], "5e-1");
        assert_eq!(row[2], "2");
        assert!(!csv.contains('\r'));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn rejects_unsorted_grid() {
        let spec = SweepSpec::new(Estimator::Cor3, vec![0.5], vec![400.0, 200.0], XRule::Fixed(vec![1]));
        assert!(run_sweep(&spec).is_err());
    }
}
