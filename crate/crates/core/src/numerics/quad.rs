//! Composite Newton–Cotes rules on uniformly spaced samples.

use crate::error::{Error, Result};

/// Composite Simpson rule over equally spaced ordinates with spacing `h`.
///
/// An odd number of intervals is closed with Simpson's 3/8 rule over the last
/// three, so the result is exact for cubics for any sample count >= 3.
/// Two samples fall back to the trapezoid rule.
pub fn simpson_uniform(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::param("samples", "need at least two samples"));
    }
    if n == 2 {
        return Ok(0.5 * h * (values[0] + values[1]));
    }
    let intervals = n - 1;
    let (simpson_end, tail) = if intervals.is_multiple_of(2) {
        (n - 1, None)
    } else {
        (n - 4, Some(n - 4))
    };
    let mut sum = 0.0;
    if simpson_end > 0 {
        let mut odd = 0.0;
        let mut even = 0.0;
        for i in 1..simpson_end {
            if i % 2 == 1 {
                odd += values[i];
            } else {
                even += values[i];
            }
        }
        sum += h / 3.0 * (values[0] + 4.0 * odd + 2.0 * even + values[simpson_end]);
    }
    if let Some(s) = tail {
        let v = &values[s..s + 4];
        sum += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
    }
    Ok(sum)
}

/// Checks that `positions` are strictly increasing and uniformly spaced to
/// `rel_tol` of the mean spacing; returns that spacing.
pub fn uniform_spacing(positions: &[f64], rel_tol: f64) -> Result<f64> {
    if positions.len() < 2 {
        return Err(Error::param("grid", "need at least two positions"));
    }
    let h = (positions[positions.len() - 1] - positions[0]) / (positions.len() - 1) as f64;
    if h <= 0.0 {
        return Err(Error::param("grid", "positions must be strictly increasing"));
    }
    for w in positions.windows(2) {
        let d = w[1] - w[0];
        if d <= 0.0 || (d - h).abs() > rel_tol * h {
            return Err(Error::param("grid", "positions are not uniformly spaced"));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(x: f64) -> f64 {
        2.0 * x * x * x - x * x + 3.0
    }

    #[test]
    fn cubic_is_exact_for_even_and_odd_interval_counts() {
        // integral over [0, 2] = 8 - 8/3 + 6
        let exact = 8.0 - 8.0 / 3.0 + 6.0;
        for n in [3usize, 4, 5, 6, 7, 10, 1001] {
            let h = 2.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|i| cubic(i as f64 * h)).collect();
            let s = simpson_uniform(&v, h).unwrap();
            assert!((s - exact).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn two_points_use_trapezoid() {
        assert_eq!(simpson_uniform(&[1.0, 3.0], 0.5).unwrap(), 1.0);
    }

    #[test]
    fn rejects_nonuniform_grid() {
        assert!(uniform_spacing(&[0.0, 1.0, 3.0], 1e-9).is_err());
        assert!(uniform_spacing(&[0.0, 0.5, 1.0], 1e-9).is_ok());
    }
}
