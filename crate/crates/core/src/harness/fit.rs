//! Least-squares fit of `log |residual| = c + e_t log t + e_x log x`.

use super::SweepRow;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    /// Fitted exponent per variable (`t`, and `x` when it varies).
    pub exponents: BTreeMap<String, f64>,
    pub log_constant: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Solves the small symmetric system by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Fits `|residual| ~ C t^{e_t} x^{e_x}` over rows without an error flag.
///
/// Residuals below `floor` (the quadrature tolerance) are raised to it before
/// taking logs. The `x` exponent is fitted only when more than one `x`
/// occurs. Needs three rows per free exponent.
pub fn fit_error_exponents(rows: &[SweepRow], floor: f64) -> Result<FitResult> {
    let usable: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| r.error_flag.is_empty() && r.residual.is_finite())
        .collect();
    let varies_x = usable.windows(2).any(|w| w[0].x != w[1].x);
    let free = if varies_x { 2 } else { 1 };
    if usable.len() < 3 * free {
        return Err(Error::InsufficientData { needed: 3 * free, got: usable.len() });
    }
    let design: Vec<Vec<f64>> = usable
        .iter()
        .map(|r| {
            let mut v = vec![1.0, r.t.ln()];
            if varies_x {
                v.push((r.x as f64).ln());
            }
            v
        })
        .collect();
    let obs: Vec<f64> = usable.iter().map(|r| r.residual.max(floor).ln()).collect();
    let k = free + 1;
    let mut ata = vec![vec![0.0; k]; k];
    let mut atb = vec![0.0; k];
    for (row, y) in design.iter().zip(&obs) {
        for i in 0..k {
            atb[i] += row[i] * y;
            for j in 0..k {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let coef = solve(ata, atb)
        .ok_or_else(|| Error::InvalidInput("degenerate design: t does not vary".into()))?;
    let mean = obs.iter().sum::<f64>() / obs.len() as f64;
    let ss_tot: f64 = obs.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = design
        .iter()
        .zip(&obs)
        .map(|(row, y)| {
            let fit: f64 = row.iter().zip(&coef).map(|(a, c)| a * c).sum();
            (y - fit).powi(2)
        })
        .sum();
    // a constant series has nothing to explain
    let r_squared = if ss_tot > 1e-300 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 0.0 };
    let mut exponents = BTreeMap::new();
    exponents.insert("t".to_string(), coef[1]);
    if varies_x {
        exponents.insert("x".to_string(), coef[2]);
    }
    Ok(FitResult {
        exponents,
        log_constant: coef[0],
        r_squared,
        points: usable.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(t: f64, x: u64, residual: f64) -> SweepRow {
        SweepRow {
            sigma: 0.5,
            t,
            x,
            y: 0.0,
            dist_y: 0.0,
            in_a: false,
            oracle: residual,
            estimate: 0.0,
            residual,
            predicted_scale: 0.0,
            terms_used: 0,
            error_flag: String::new(),
        }
    }

    #[test]
    fn exact_power_law() {
        let mut rows = Vec::new();
        for t in [100.0, 200.0, 400.0, 800.0] {
            for x in [1u64, 2, 4] {
                rows.push(row(t, x, 3.0 * x as f64 / t));
            }
        }
        let f = fit_error_exponents(&rows, 1e-30).unwrap();
        assert!((f.exponents["t"] + 1.0).abs() < 1e-6);
        assert!((f.exponents["x"] - 1.0).abs() < 1e-6);
        assert!((f.log_constant - 3f64.ln()).abs() < 1e-9);
        assert!(f.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn constant_residuals() {
        let rows: Vec<SweepRow> = [1.0, 2.0, 4.0, 8.0].iter().map(|&t| row(t * 100.0, 1, 0.01)).collect();
        let f = fit_error_exponents(&rows, 1e-30).unwrap();
        assert!(f.exponents["t"].abs() < 1e-9);
        assert_eq!(f.r_squared, 0.0);
        assert!(!f.exponents.contains_key("x"));
    }

    #[test]
    fn floors_zero_residuals() {
        let rows: Vec<SweepRow> = [100.0, 200.0, 400.0].iter().map(|&t| row(t, 1, 0.0)).collect();
        let f = fit_error_exponents(&rows, 1e-10).unwrap();
        assert!(f.exponents["t"].abs() < 1e-12);
    }

    #[test]
    fn too_few_rows() {
        let rows = vec![row(100.0, 1, 1.0), row(200.0, 2, 1.0), row(400.0, 1, 1.0)];
        assert!(matches!(
            fit_error_exponents(&rows, 1e-10),
            Err(Error::InsufficientData { needed: 6, got: 3 })
        ));
        let mut flagged = row(800.0, 1, 1.0);
        flagged.error_flag = "domain".into();
        let rows = vec![row(100.0, 1, 1.0), row(200.0, 1, 1.0), flagged];
        assert!(matches!(fit_error_exponents(&rows, 1e-10), Err(Error::InsufficientData { .. })));
    }
}
