use std::f64::consts::PI;
use std::sync::OnceLock;

const TABLE_LEN: usize = 120;

/// `B_{2k} / (2k)!` for `k >= 1`, from `2 (-1)^{k+1} zeta(2k) / (2 pi)^{2k}`.
///
/// Returns 0 past the table, where the values are below 1e-300 anyway.
pub fn bernoulli_over_factorial(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(TABLE_LEN);
        v.push(0.0);
        for k in 1..TABLE_LEN {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let z = zeta_even(2 * k);
            // (2 pi)^{-2k} built by repeated multiplication to stay finite
            let mut scale = 1.0;
            for _ in 0..2 * k {
                scale /= 2.0 * PI;
            }
            v.push(sign * 2.0 * z * scale);
        }
        v
    });
    table.get(k).copied().unwrap_or(0.0)
}

fn zeta_even(n: usize) -> f64 {
    match n {
        2 => PI * PI / 6.0,
        4 => PI.powi(4) / 90.0,
        6 => PI.powi(6) / 945.0,
        _ => {
            // terms fall off at least like m^-8; sum small terms first
            let p = n as i32;
            let mut s = 0.0;
            for m in (1..=60).rev() {
                s += (m as f64).powi(-p);
            }
            // midpoint-rule tail beyond m = 60
            s + 60.5f64.powi(1 - p) / (p - 1) as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_values() {
        // B2 = 1/6, B4 = -1/30, B6 = 1/42, B8 = -1/30, B10 = 5/66
        let expected = [
            1.0 / 6.0 / 2.0,
            -1.0 / 30.0 / 24.0,
            1.0 / 42.0 / 720.0,
            -1.0 / 30.0 / 40320.0,
            5.0 / 66.0 / 3628800.0,
        ];
        for (k, e) in expected.iter().enumerate() {
            let got = bernoulli_over_factorial(k + 1);
            assert!((got - e).abs() <= 1e-15 * e.abs(), "k={} {got} {e}", k + 1);
        }
    }

    #[test]
    fn b12_exact() {
        // B12 = -691/2730
        let e = -691.0 / 2730.0 / 479001600.0;
        assert!((bernoulli_over_factorial(6) - e).abs() <= 1e-14 * e.abs());
    }
}
