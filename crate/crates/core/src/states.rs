//! Closed-form thermal density operators and state-family properties.
//!
//! The su(2) coefficients C_{m,m',n1,n2}(z, beta) and su(1,1) coefficients
//! Gamma_{n,nbar,n1,n2}(zeta, beta) are evaluated in log-space (magnitudes
//! via log-factorials, phases carried separately) and assembled into sparse
//! [`DensityOperator`] values addressed by occupation tuples. Truncation is
//! certified through the exact trace identity: the untruncated diagonal
//! sums to 1 analytically, so 1 minus the included diagonal is a rigorous
//! deficit bound.
//!
//! Index conventions: spin labels enter as a = j + m in 0..=2j; su(1,1)
//! uses the discrete series |k, m> -> |m + q, m> with k = (1 + q)/2.

use num_complex::Complex64;

use crate::error::{CosetError, Result};
use crate::fock::{DensityOperator, FockSpace, Operator, PureState};
use crate::liealg::{coherent_su2_pure, Su11Params, Su2Params};
use crate::math::ln_factorial;
use crate::quadrature::gauss_legendre;
use crate::tfd::ThermalContext;

/// A density operator together with its certified truncation deficit
/// |tr rho - 1| <= trace_deficit.
pub struct CertifiedRho {
    pub rho: DensityOperator,
    pub trace_deficit: f64,
}

/// su(2) thermal coefficient C_{m,m',n1,n2}(z, beta); `a = j + m` and
/// `a_prime = j + m'` run over 0..=2j.
pub fn c_coeff_su2(
    p: &Su2Params,
    ctx: &ThermalContext,
    a: usize,
    a_prime: usize,
    n1: usize,
    n2: usize,
) -> Complex64 {
    let tj = p.twice_j as usize;
    debug_assert!(a <= tj && a_prime <= tj);
    let b = tj - a;
    let b_prime = tj - a_prime;
    let zr = p.z.norm();
    if zr == 0.0 && a + a_prime > 0 {
        return Complex64::ZERO;
    }
    let mut ln_mag = 0.0;
    // sqrt(binom(2j, a) binom(2j, a'))
    ln_mag += 0.5
        * (2.0 * ln_factorial(tj) - ln_factorial(a) - ln_factorial(b) - ln_factorial(a_prime)
            - ln_factorial(b_prime));
    if a + a_prime > 0 {
        ln_mag += (a + a_prime) as f64 * zr.ln();
    }
    ln_mag -= p.twice_j as f64 * (1.0 + p.z.norm_sqr()).ln();
    ln_mag += -ctx.x() * (n1 + n2) as f64;
    ln_mag += (tj as f64 + 2.0) * (1.0 - ctx.boltzmann()).ln();
    // 1/(sqrt((j+m)! (j-m)! (j+m')! (j-m')!))
    ln_mag -= 0.5
        * (ln_factorial(a) + ln_factorial(b) + ln_factorial(a_prime) + ln_factorial(b_prime));
    // sqrt((n1+j+m)!/n1!) sqrt((n2+j-m)!/n2!) and the primed pair
    ln_mag += 0.5
        * (ln_factorial(n1 + a) - ln_factorial(n1) + ln_factorial(n2 + b) - ln_factorial(n2)
            + ln_factorial(n1 + a_prime)
            - ln_factorial(n1)
            + ln_factorial(n2 + b_prime)
            - ln_factorial(n2));
    let phase = (a as f64 - a_prime as f64) * p.z.arg();
    Complex64::from_polar(ln_mag.exp(), phase)
}

/// Included diagonal trace of the truncated su(2) rho; the untruncated
/// trace is exactly 1, so `1 - included` is the certified deficit.
pub fn su2_trace_included(p: &Su2Params, ctx: &ThermalContext, cutoff: usize) -> f64 {
    let tj = p.twice_j as usize;
    if cutoff < tj {
        return 0.0;
    }
    let em = ctx.boltzmann();
    let zsq = p.z.norm_sqr();
    let mut total = 0.0;
    for a in 0..=tj {
        let b = tj - a;
        // binomial weight binom(2j, a) |z|^{2a} / (1+|z|^2)^{2j}
        let mut ln_w = ln_factorial(tj) - ln_factorial(a) - ln_factorial(b)
            - tj as f64 * (1.0 + zsq).ln();
        if a > 0 {
            if zsq == 0.0 {
                continue;
            }
            ln_w += a as f64 * zsq.ln();
        }
        let w = ln_w.exp();
        total += w * nb_cdf(a, em, cutoff - a) * nb_cdf(b, em, cutoff - b);
    }
    total
}

use crate::math::nb_cdf;

fn suggest_cutoff(
    deficit_at: impl Fn(usize) -> f64,
    start: usize,
    tol: f64,
) -> usize {
    let mut n = start.max(1);
    for _ in 0..64 {
        if deficit_at(n) < tol {
            // binary refine down
            let mut lo = start;
            let mut hi = n;
            while lo + 1 < hi {
                let mid = (lo + hi) / 2;
                if deficit_at(mid) < tol {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return hi;
        }
        n *= 2;
    }
    n
}

/// Assemble the closed-form su(2) thermal density operator
/// rho = sum C |n1+j+m, n2+j-m><n1+j+m', n2+j-m'| on a 2-mode space,
/// rejecting cutoffs whose certified trace deficit exceeds `tail_tol`.
pub fn rho_su2(
    p: &Su2Params,
    ctx: &ThermalContext,
    cutoff: usize,
    tail_tol: f64,
) -> Result<CertifiedRho> {
    let tj = p.twice_j as usize;
    if cutoff < tj {
        return Err(CosetError::InvalidParameter(format!(
            "cutoff {cutoff} < 2j = {tj}"
        )));
    }
    if !(ctx.x() > 0.0) {
        return Err(CosetError::InvalidParameter(
            "thermal rho requires x > 0".into(),
        ));
    }
    let deficit = 1.0 - su2_trace_included(p, ctx, cutoff);
    if deficit >= tail_tol {
        let suggested = suggest_cutoff(
            |n| 1.0 - su2_trace_included(p, ctx, n),
            cutoff,
            tail_tol,
        );
        return Err(CosetError::TailBound {
            required: tail_tol,
            achieved: deficit,
            suggested_cutoff: suggested,
        });
    }
    let space = FockSpace::new(2, cutoff)?;
    let mut rho = DensityOperator::zero(space);
    for a in 0..=tj {
        let b = tj - a;
        for a_prime in 0..=tj {
            let b_prime = tj - a_prime;
            if p.z.norm() == 0.0 && a != a_prime {
                continue;
            }
            for n1 in 0..=(cutoff - a.max(a_prime)) {
                for n2 in 0..=(cutoff - b.max(b_prime)) {
                    let v = c_coeff_su2(p, ctx, a, a_prime, n1, n2);
                    let row = space.index_of(&[n1 + a, n2 + b]);
                    let col = space.index_of(&[n1 + a_prime, n2 + b_prime]);
                    rho.accumulate(row, col, v);
                }
            }
        }
    }
    Ok(CertifiedRho { rho, trace_deficit: deficit.max(0.0) })
}

/// su(1,1) thermal coefficient Gamma_{n,nbar,n1,n2}(zeta, beta).
pub fn gamma_coeff_su11(
    p: &Su11Params,
    ctx: &ThermalContext,
    n: usize,
    nbar: usize,
    n1: usize,
    n2: usize,
) -> Complex64 {
    let q = p.q as usize;
    let zr = p.zeta.norm();
    if zr == 0.0 && n + nbar > 0 {
        return Complex64::ZERO;
    }
    let mut ln_mag = (1.0 + q as f64) * (1.0 - p.zeta.norm_sqr()).ln();
    if n + nbar > 0 {
        ln_mag += (n + nbar) as f64 * zr.ln();
    }
    ln_mag += -ctx.x() * (n1 + n2) as f64;
    ln_mag += (n + nbar + q) as f64 * (1.0 - ctx.boltzmann()).ln()
        + 2.0 * (1.0 - ctx.boltzmann()).ln();
    ln_mag -= ln_factorial(q) + ln_factorial(n) + ln_factorial(nbar);
    ln_mag += 0.5
        * (ln_factorial(n2 + n) - ln_factorial(n2) + ln_factorial(n1 + n + q) - ln_factorial(n1)
            + ln_factorial(n2 + nbar)
            - ln_factorial(n2)
            + ln_factorial(n1 + nbar + q)
            - ln_factorial(n1));
    let phase = (n as f64 - nbar as f64) * p.zeta.arg();
    Complex64::from_polar(ln_mag.exp(), phase)
}

/// Coherent-index weight D(n) = (1-|zeta|^2)^{1+q} |zeta|^{2n} binom(n+q, q);
/// sums to 1 over all n.
pub(crate) fn su11_coherent_weight(p: &Su11Params, n: usize) -> f64 {
    let q = p.q as usize;
    let r2 = p.zeta.norm_sqr();
    if r2 == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    ((1.0 + q as f64) * (1.0 - r2).ln() + n as f64 * r2.ln() + ln_factorial(n + q)
        - ln_factorial(n)
        - ln_factorial(q))
    .exp()
}

/// Included diagonal trace of the truncated su(1,1) rho (untruncated
/// trace is exactly 1).
pub fn su11_trace_included(p: &Su11Params, ctx: &ThermalContext, cutoff: usize) -> f64 {
    let q = p.q as usize;
    if cutoff < q {
        return 0.0;
    }
    let em = ctx.boltzmann();
    let mut total = 0.0;
    for n in 0..=(cutoff - q) {
        let d = su11_coherent_weight(p, n);
        if d == 0.0 {
            continue;
        }
        total += d * nb_cdf(n + q, em, cutoff - q - n) * nb_cdf(n, em, cutoff - n);
    }
    total
}

/// Assemble the closed-form su(1,1) thermal density operator
/// rho = sum Gamma |n1+n+q, n2+n><n1+nbar+q, n2+nbar|.
pub fn rho_su11(
    p: &Su11Params,
    ctx: &ThermalContext,
    cutoff: usize,
    tail_tol: f64,
) -> Result<CertifiedRho> {
    let q = p.q as usize;
    if cutoff < q {
        return Err(CosetError::InvalidParameter(format!(
            "cutoff {cutoff} < q = {q}"
        )));
    }
    if p.zeta.norm() >= 1.0 {
        return Err(CosetError::InvalidParameter(format!(
            "zeta must satisfy |zeta| < 1, got |zeta| = {}",
            p.zeta.norm()
        )));
    }
    if !(ctx.x() > 0.0) {
        return Err(CosetError::InvalidParameter(
            "thermal rho requires x > 0".into(),
        ));
    }
    let deficit = 1.0 - su11_trace_included(p, ctx, cutoff);
    if deficit >= tail_tol {
        let suggested = suggest_cutoff(
            |n| 1.0 - su11_trace_included(p, ctx, n),
            cutoff,
            tail_tol,
        );
        return Err(CosetError::TailBound {
            required: tail_tol,
            achieved: deficit,
            suggested_cutoff: suggested,
        });
    }
    let space = FockSpace::new(2, cutoff)?;
    let mut rho = DensityOperator::zero(space);
    let n_cap = cutoff - q;
    for n in 0..=n_cap {
        for nbar in 0..=n_cap {
            if p.zeta.norm() == 0.0 && (n != nbar) {
                continue;
            }
            let top = n.max(nbar);
            for n1 in 0..=(cutoff - q - top) {
                for n2 in 0..=(cutoff - top) {
                    let v = gamma_coeff_su11(p, ctx, n, nbar, n1, n2);
                    let row = space.index_of(&[n1 + n + q, n2 + n]);
                    let col = space.index_of(&[n1 + nbar + q, n2 + nbar]);
                    rho.accumulate(row, col, v);
                }
            }
        }
    }
    Ok(CertifiedRho { rho, trace_deficit: deficit.max(0.0) })
}

/// Smallest cutoff whose certified su(2) trace deficit clears `tail_tol`.
pub fn suggest_cutoff_su2(p: &Su2Params, ctx: &ThermalContext, tail_tol: f64) -> usize {
    suggest_cutoff(
        |n| 1.0 - su2_trace_included(p, ctx, n),
        p.twice_j as usize + 1,
        tail_tol,
    )
}

/// Smallest cutoff whose certified su(1,1) trace deficit clears `tail_tol`.
pub fn suggest_cutoff_su11(p: &Su11Params, ctx: &ThermalContext, tail_tol: f64) -> usize {
    suggest_cutoff(
        |n| 1.0 - su11_trace_included(p, ctx, n),
        p.q as usize + 1,
        tail_tol,
    )
}

/// Non-orthogonality overlap
/// <z1(beta)|z2(beta)> = (1 + z1^* z2)^{2j} / ((1+|z1|^2)^j (1+|z2|^2)^j),
/// independent of beta because U(beta) is unitary.
pub fn overlap_su2(z1: Complex64, z2: Complex64, twice_j: u32) -> Complex64 {
    let num = (Complex64::ONE + z1.conj() * z2).powu(twice_j);
    let den =
        ((1.0 + z1.norm_sqr()) * (1.0 + z2.norm_sqr())).powf(twice_j as f64 / 2.0);
    num / den
}

/// <zeta1(beta)|zeta2(beta)> =
/// (1-|zeta1|^2)^{(1+q)/2} (1-|zeta2|^2)^{(1+q)/2} (1 - zeta1^* zeta2)^{-(1+q)}.
pub fn overlap_su11(zeta1: Complex64, zeta2: Complex64, q: u32) -> Result<Complex64> {
    if zeta1.norm() >= 1.0 || zeta2.norm() >= 1.0 {
        return Err(CosetError::InvalidParameter(
            "su(1,1) labels must lie strictly inside the unit disk".into(),
        ));
    }
    let pref = ((1.0 - zeta1.norm_sqr()) * (1.0 - zeta2.norm_sqr()))
        .powf((1.0 + q as f64) / 2.0);
    let core = (Complex64::ONE - zeta1.conj() * zeta2).powi(-(1 + q as i32));
    Ok(pref * core)
}

/// Residual of the over-completeness identity for su(2): evaluates
/// || integral dmu |z><z| - P_{2j+1} ||_max with
/// dmu = (2j+1)/pi d^2 z / (1+|z|^2)^2, via the polar substitution
/// z = tan(theta/2) e^{i phi} (Gauss-Legendre in cos(theta), trapezoid in
/// phi). Exact for the polynomial integrands at modest node counts.
pub fn identity_resolution_su2(twice_j: u32, n_theta: usize, n_phi: usize) -> Result<f64> {
    let tj = twice_j as usize;
    let space = FockSpace::new(2, tj.max(1))?;
    let dim = space.dim();
    let mut accum = vec![Complex64::ZERO; dim * dim];
    let (nodes, weights) = gauss_legendre(n_theta);
    for (u, w_u) in nodes.iter().zip(&weights) {
        // z magnitude: tan(theta/2) with u = cos(theta)
        let r = ((1.0 - u) / (1.0 + u)).sqrt();
        for l in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * l as f64 / n_phi as f64;
            let z = Complex64::from_polar(r, phi);
            let p = Su2Params::new(twice_j, z)?;
            let psi = coherent_su2_pure(&p, space)?;
            let weight = (twice_j as f64 + 1.0) * w_u / (2.0 * n_phi as f64);
            let amp = psi.amplitudes();
            for (row, &ar) in amp.iter().enumerate() {
                if ar == Complex64::ZERO {
                    continue;
                }
                for (col, &ac) in amp.iter().enumerate() {
                    accum[row * dim + col] += weight * ar * ac.conj();
                }
            }
        }
    }
    // subtract the projector onto the spin-j subspace
    for a in 0..=tj {
        let idx = space.index_of(&[a, tj - a]);
        accum[idx * dim + idx] -= Complex64::ONE;
    }
    Ok(accum.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Thermal variant of the over-completeness residual: conjugating the
/// family by the (unitary) Bogoliubov oracle must leave the residual
/// unchanged. Evaluated on the doubled space at small cutoff.
pub fn identity_resolution_su2_thermal(
    twice_j: u32,
    ctx: &ThermalContext,
    cutoff: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<f64> {
    let tj = twice_j as usize;
    let phys = FockSpace::new(2, cutoff)?;
    let doubled = phys.doubled()?;
    let dim = doubled.dim();
    let mut accum = vec![Complex64::ZERO; dim * dim];
    let (nodes, weights) = gauss_legendre(n_theta);
    for (u, w_u) in nodes.iter().zip(&weights) {
        let r = ((1.0 - u) / (1.0 + u)).sqrt();
        for l in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * l as f64 / n_phi as f64;
            let z = Complex64::from_polar(r, phi);
            let p = Su2Params::new(twice_j, z)?;
            let psi = coherent_su2_pure(&p, phys)?
                .embed_physical(doubled)?;
            let thermal = crate::tfd::apply_bogoliubov(&psi, ctx, crate::tol::TOL_EXP)?;
            let weight = (twice_j as f64 + 1.0) * w_u / (2.0 * n_phi as f64);
            let amp = thermal.amplitudes();
            for (row, &ar) in amp.iter().enumerate() {
                if ar.norm_sqr() < 1e-60 {
                    continue;
                }
                for (col, &ac) in amp.iter().enumerate() {
                    accum[row * dim + col] += weight * ar * ac.conj();
                }
            }
        }
    }
    // subtract U(beta) P_{2j+1} U(beta)^dagger
    for a in 0..=tj {
        let basis = PureState::basis_state(phys, &[a, tj - a]).embed_physical(doubled)?;
        let tb = crate::tfd::apply_bogoliubov(&basis, ctx, crate::tol::TOL_EXP)?;
        let amp = tb.amplitudes();
        for (row, &ar) in amp.iter().enumerate() {
            if ar.norm_sqr() < 1e-60 {
                continue;
            }
            for (col, &ac) in amp.iter().enumerate() {
                accum[row * dim + col] -= ar * ac.conj();
            }
        }
    }
    Ok(accum.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// Expectation of an operator in a certified rho, surfaced for callers
/// that want tr(rho A) next to the deficit.
pub fn expectation(rho: &CertifiedRho, op: &Operator) -> Result<Complex64> {
    rho.rho.expectation(op)
}
