//! Certified summation of positive series with eventually-geometric decay.
//!
//! Callers supply the term values and a dominating ratio bound
//! `r(n) >= f(n+1)/f(n)` that is eventually below 1 (true for every series
//! here: geometric thermal factors times fixed-degree polynomial growth).
//! Once `r(n) < 1` the tail beyond `n` is bounded by the geometric sum
//! `f(n) * r / (1 - r)`, which is what gets reported as the certificate.

use crate::error::{CosetError, Result};

pub(crate) struct SeriesSum {
    pub value: f64,
    /// Rigorous upper bound on the omitted tail.
    pub tail_bound: f64,
}

/// Sum `f(n)` for `n = start..`, stopping once the certified tail bound
/// drops below `tol`. `ratio_bound(n)` must dominate `f(n+1)/f(n)`.
pub(crate) fn sum_positive_series(
    f: impl Fn(usize) -> f64,
    ratio_bound: impl Fn(usize) -> f64,
    start: usize,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesSum> {
    let mut sum = 0.0;
    let mut n = start;
    for _ in 0..max_terms {
        let term = f(n);
        debug_assert!(term >= 0.0, "series term must be nonnegative");
        sum += term;
        let r = ratio_bound(n);
        if r < 1.0 {
            let tail = term * r / (1.0 - r);
            if tail < tol {
                return Ok(SeriesSum { value: sum, tail_bound: tail });
            }
        }
        n += 1;
    }
    Err(CosetError::NonConvergence { max_terms, residual: f(n) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_certified() {
        // sum q^n = 1/(1-q)
        let q: f64 = 0.7;
        let s = sum_positive_series(|n| q.powi(n as i32), |_| q, 0, 1e-12, 1000).unwrap();
        let exact = 1.0 / (1.0 - q);
        assert!((s.value + s.tail_bound - exact).abs() < 1e-12);
        assert!(s.value <= exact);
        assert!(exact - s.value <= s.tail_bound * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn polynomial_times_geometric() {
        // sum (n+1) q^n = 1/(1-q)^2, ratio (n+2)/(n+1) * q
        let q: f64 = 0.5;
        let s = sum_positive_series(
            |n| (n as f64 + 1.0) * q.powi(n as i32),
            |n| q * (n as f64 + 2.0) / (n as f64 + 1.0),
            0,
            1e-13,
            1000,
        )
        .unwrap();
        let exact = 1.0 / (1.0 - q) / (1.0 - q);
        assert!((exact - s.value).abs() <= s.tail_bound + 1e-14);
    }

    #[test]
    fn nonconvergence_is_error() {
        let r = sum_positive_series(|_| 1.0, |_| 1.0, 0, 1e-10, 50);
        assert!(matches!(r, Err(CosetError::NonConvergence { .. })));
    }
}
