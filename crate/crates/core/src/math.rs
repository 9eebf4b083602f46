//! Log-factorials and binomials, accurate for the index ranges the
//! coefficient formulas reach (n up to ~10^4, where n! overflows f64 long
//! before the coefficients themselves do).

/// ln(n!) via a table for small n and the Stirling series beyond it.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    const TABLE_LEN: usize = 256;
    static TABLE: std::sync::OnceLock<[f64; TABLE_LEN]> = std::sync::OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [0.0; TABLE_LEN];
        for i in 2..TABLE_LEN {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    });
    if n < TABLE_LEN {
        return table[n];
    }
    // Stirling series; error < 1e-15 relative for n >= 256
    let x = n as f64;
    let x2 = x * x;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
}

/// Binomial coefficient as f64.
pub(crate) fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
}

/// sqrt(binom(n, k)).
pub(crate) fn sqrt_binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0.5 * (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))).exp()
}

/// CDF at `upper` of the normalized negative-binomial weights
/// (1-p)^{r+1} p^t binom(t + r, r), the per-mode thermal mass profile.
pub(crate) fn nb_cdf(r: usize, p: f64, upper: usize) -> f64 {
    let mut term = (1.0 - p).powi(r as i32 + 1);
    let mut sum = term;
    for t in 0..upper {
        term *= p * (t + 1 + r) as f64 / (t + 1) as f64;
        sum += term;
    }
    sum.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        // cross table/Stirling boundary consistency
        let direct: f64 = (2..=300).map(|i| (i as f64).ln()).sum();
        assert!((ln_factorial(300) - direct).abs() / direct < 1e-14);
    }

    #[test]
    fn binomials() {
        assert!((binom(6, 3) - 20.0).abs() < 1e-12);
        assert_eq!(binom(3, 5), 0.0);
        assert!((sqrt_binom(4, 2) - 6f64.sqrt()).abs() < 1e-13);
    }
}
