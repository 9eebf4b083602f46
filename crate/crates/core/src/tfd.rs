//! Thermofield machinery: thermal context, Bogoliubov transformation,
//! thermal vacuum, and the brute-force doubled-space constructions used as
//! oracles for every closed-form result.
//!
//! Doubled-space layout: physical modes at positions 0..k-1, tilde modes at
//! k..2k-1; the tilde partner of mode i is mode k+i. The Bogoliubov angle
//! follows tanh(theta) = e^{-x/2}, the unique choice reproducing the
//! thermal-vacuum coefficients g_n = e^{-x n/2} sqrt(1 - e^{-x}).

use num_complex::Complex64;

use crate::error::{CosetError, Result};
use crate::fock::{
    apply_exponential, ladder, FockSpace, LadderKind, Operator, PureState,
};
use crate::liealg::{
    coherent_hw_pure_with_tol, su11_alpha_from_zeta, su11_generators, su2_eta_from_z,
    su2_generators, HwParams, Su11Params, Su2Params,
};
use crate::tol::TOL_EXP;

/// CODATA 2018 reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// CODATA 2018 Boltzmann constant, J/K.
pub const K_BOLTZMANN: f64 = 1.380_649e-23;

/// The single dimensionless thermal parameter x = beta hbar omega together
/// with the derived Bogoliubov coefficients.
///
/// u = cosh(theta) = (1 - e^{-x})^{-1/2}, v = sinh(theta) =
/// e^{-x/2} (1 - e^{-x})^{-1/2}, theta = artanh(e^{-x/2}). At x = 0 the
/// context is constructible but the coefficients are infinite; Bogoliubov
/// operations reject it.
#[derive(Debug, Clone, Copy)]
pub struct ThermalContext {
    x: f64,
    u: f64,
    v: f64,
    theta: f64,
}

impl ThermalContext {
    pub fn from_x(x: f64) -> Result<Self> {
        if !(x >= 0.0) {
            return Err(CosetError::InvalidParameter(format!(
                "thermal parameter x must be >= 0, got {x}"
            )));
        }
        if x == 0.0 {
            return Ok(Self { x, u: f64::INFINITY, v: f64::INFINITY, theta: f64::INFINITY });
        }
        let em = (-x).exp();
        let u = (1.0 - em).powf(-0.5);
        let v = (-x / 2.0).exp() * u;
        let theta = (-x / 2.0).exp().atanh();
        Ok(Self { x, u, v, theta })
    }

    /// Physical form: x = hbar omega / (k_B T), with omega in rad/s.
    pub fn from_physical(omega_hz: f64, temp_k: f64) -> Result<Self> {
        if !(omega_hz > 0.0) || !(temp_k > 0.0) {
            return Err(CosetError::InvalidParameter(format!(
                "omega and T must be positive, got omega = {omega_hz}, T = {temp_k}"
            )));
        }
        Self::from_x(HBAR * omega_hz / (K_BOLTZMANN * temp_k))
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// e^{-x}, the Boltzmann factor all coefficient formulas run on.
    pub fn boltzmann(&self) -> f64 {
        (-self.x).exp()
    }

    /// cosh(theta).
    pub fn u(&self) -> f64 {
        self.u
    }

    /// sinh(theta).
    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn require_finite_theta(&self) -> Result<()> {
        if !self.theta.is_finite() {
            return Err(CosetError::InvalidParameter(
                "x = 0 (infinite temperature): Bogoliubov angle diverges".into(),
            ));
        }
        Ok(())
    }
}

fn doubled_halves(space: FockSpace) -> Result<usize> {
    if space.num_modes() % 2 != 0 {
        return Err(CosetError::OddModeCount(space.num_modes()));
    }
    Ok(space.num_modes() / 2)
}

/// Single-mode Bogoliubov generator
/// G_i = -i theta (a~_i a_i - a~_i^dag a_i^dag) on a doubled space.
/// The full U(beta) = exp(-i G) factorizes over mode pairs.
pub fn bogoliubov_generator(
    space: FockSpace,
    mode: usize,
    ctx: &ThermalContext,
) -> Result<Operator> {
    ctx.require_finite_theta()?;
    let k = doubled_halves(space)?;
    if mode >= k {
        return Err(CosetError::InvalidParameter(format!(
            "mode {mode} out of range for {k} physical modes"
        )));
    }
    let a = ladder(space, mode, LadderKind::Lower)?;
    let adag = ladder(space, mode, LadderKind::Raise)?;
    let ta = ladder(space, k + mode, LadderKind::Lower)?;
    let tadag = ladder(space, k + mode, LadderKind::Raise)?;
    let m = ta.matmul(&a)?.sub(&tadag.matmul(&adag)?)?;
    Ok(m.scale(Complex64::new(0.0, -ctx.theta)))
}

/// Apply U(beta) = prod_i exp(-i G_i) = prod_i exp[theta (a~^dag a^dag - a~ a)]
/// mode pair by mode pair.
pub fn apply_bogoliubov(psi: &PureState, ctx: &ThermalContext, tol: f64) -> Result<PureState> {
    ctx.require_finite_theta()?;
    let k = doubled_halves(psi.space())?;
    let mut current = psi.clone();
    for mode in 0..k {
        let g = bogoliubov_generator(psi.space(), mode, ctx)?;
        // -i G = theta (a~^dag a^dag - a~ a), anti-Hermitian
        let gen = g.scale(Complex64::new(0.0, -1.0));
        current = apply_exponential(&gen, &current, tol)?;
    }
    Ok(current)
}

/// Inverse transformation U(beta)^dagger.
pub fn apply_bogoliubov_inverse(
    psi: &PureState,
    ctx: &ThermalContext,
    tol: f64,
) -> Result<PureState> {
    ctx.require_finite_theta()?;
    let k = doubled_halves(psi.space())?;
    let mut current = psi.clone();
    for mode in 0..k {
        let g = bogoliubov_generator(psi.space(), mode, ctx)?;
        let gen = g.scale(Complex64::new(0.0, 1.0));
        current = apply_exponential(&gen, &current, tol)?;
    }
    Ok(current)
}

pub const DEFAULT_VACUUM_TAIL_TOL: f64 = 1e-12;

/// Analytic thermal vacuum on a doubled space:
/// product over modes of sum_n sqrt(1 - e^{-x}) e^{-x n / 2} |n, n~>.
///
/// Built directly from the coefficients, independently of the Bogoliubov
/// exponential, so the two constructions cross-check each other.
pub fn thermal_vacuum(ctx: &ThermalContext, k_modes: usize, cutoff: usize) -> Result<PureState> {
    thermal_vacuum_with_tol(ctx, k_modes, cutoff, DEFAULT_VACUUM_TAIL_TOL)
}

pub fn thermal_vacuum_with_tol(
    ctx: &ThermalContext,
    k_modes: usize,
    cutoff: usize,
    tail_tol: f64,
) -> Result<PureState> {
    if !(ctx.x > 0.0) {
        return Err(CosetError::InvalidParameter(
            "thermal vacuum requires x > 0".into(),
        ));
    }
    // per-mode squared-norm deficit is exactly e^{-x (N+1)} (geometric tail)
    let per_mode_tail = (-ctx.x * (cutoff as f64 + 1.0)).exp();
    let total_tail = k_modes as f64 * per_mode_tail;
    if total_tail >= tail_tol {
        let needed = (-(tail_tol / k_modes as f64).ln() / ctx.x).ceil() as usize;
        return Err(CosetError::TailBound {
            required: tail_tol,
            achieved: total_tail,
            suggested_cutoff: needed,
        });
    }
    let space = FockSpace::new(2 * k_modes, cutoff)?;
    let phys = FockSpace::with_max_dim(k_modes, cutoff, usize::MAX)?;
    let em = ctx.boltzmann();
    let weight = (1.0 - em).powf(k_modes as f64 / 2.0);
    let mut psi = PureState::zero(space);
    let mut occ = vec![0usize; 2 * k_modes];
    for a in 0..phys.dim() {
        let occ_phys = phys.occupation(a);
        let total: usize = occ_phys.iter().sum();
        for (i, &n) in occ_phys.iter().enumerate() {
            occ[i] = n;
            occ[k_modes + i] = n;
        }
        let amp = weight * (-ctx.x * total as f64 / 2.0).exp();
        psi.amp_mut()[space.index_of(&occ)] = Complex64::new(amp, 0.0);
    }
    Ok(psi)
}

/// Thermal vacuum via the Bogoliubov exponential, U(beta)|0, 0~>.
pub fn thermal_vacuum_via_bogoliubov(
    ctx: &ThermalContext,
    k_modes: usize,
    cutoff: usize,
) -> Result<PureState> {
    let space = FockSpace::new(2 * k_modes, cutoff)?;
    let vac = PureState::basis_state(space, &vec![0; 2 * k_modes]);
    apply_bogoliubov(&vac, ctx, TOL_EXP)
}

/// Guard band sufficient to push cutoff-edge contamination of the
/// amplitudes below `target` at thermal parameter `x`: edge errors decay
/// like e^{-x d} with the distance d from the edge.
pub fn bogoliubov_guard_band(ctx: &ThermalContext, target: f64) -> usize {
    ((-target.ln() / ctx.x()).ceil() as usize).clamp(4, 400)
}

/// U(beta)|0, 0~> computed on an enlarged space and projected back, so the
/// amplitudes up to `cutoff` are free of edge contamination.
pub fn thermal_vacuum_via_bogoliubov_guarded(
    ctx: &ThermalContext,
    k_modes: usize,
    cutoff: usize,
    guard: usize,
) -> Result<PureState> {
    let big = thermal_vacuum_via_bogoliubov(ctx, k_modes, cutoff + guard)?;
    big.project_to(FockSpace::new(2 * k_modes, cutoff)?)
}

/// Doubled-space su(2) thermal coherent state
/// |z(beta)> = U(beta) exp(eta J+ - eta^* J-) |j,-j, 0~, 0~>.
///
/// The displacement is applied on the physical modes (the pure block is
/// closed under J+-, so it is exact there), the tilde vacuum is tensored
/// on, and U(beta) acts mode pair by mode pair.
pub fn thermal_coherent_su2_oracle(
    p: &Su2Params,
    ctx: &ThermalContext,
    cutoff: usize,
) -> Result<PureState> {
    let phys = FockSpace::new(2, cutoff)?;
    if cutoff < p.twice_j as usize {
        return Err(CosetError::InvalidParameter(format!(
            "cutoff {cutoff} < 2j = {}",
            p.twice_j
        )));
    }
    let eta = p.eta.unwrap_or_else(|| su2_eta_from_z(p.z));
    let g = su2_generators(phys)?;
    let gen = g.j_plus.scale(eta).sub(&g.j_minus.scale(eta.conj()))?;
    let reference = PureState::basis_state(phys, &[0, p.twice_j as usize]);
    let displaced = apply_exponential(&gen, &reference, TOL_EXP)?;
    let doubled = phys.doubled()?;
    let embedded = displaced.embed_physical(doubled)?;
    apply_bogoliubov(&embedded, ctx, TOL_EXP)
}

/// Doubled-space su(1,1) thermal coherent state
/// |zeta(beta)> = U(beta) exp(alpha K+ - alpha^* K-) |k,0, 0~, 0~>.
pub fn thermal_coherent_su11_oracle(
    p: &Su11Params,
    ctx: &ThermalContext,
    cutoff: usize,
) -> Result<PureState> {
    let phys = FockSpace::new(2, cutoff)?;
    if cutoff < p.q as usize {
        return Err(CosetError::InvalidParameter(format!(
            "cutoff {cutoff} < q = {}",
            p.q
        )));
    }
    let alpha = p.alpha.unwrap_or_else(|| su11_alpha_from_zeta(p.zeta));
    let g = su11_generators(phys)?;
    let gen = g.k_plus.scale(alpha).sub(&g.k_minus.scale(alpha.conj()))?;
    let reference = PureState::basis_state(phys, &[p.q as usize, 0]);
    let displaced = apply_exponential(&gen, &reference, TOL_EXP)?;
    let doubled = phys.doubled()?;
    let embedded = displaced.embed_physical(doubled)?;
    apply_bogoliubov(&embedded, ctx, TOL_EXP)
}

/// Thermal Glauber state |alpha(beta)> = U(beta) D(alpha) U^dag(beta) |0(beta)>
/// = U(beta) D(alpha) |0, 0~> after the U^dag U cancellation.
pub fn thermal_coherent_hw(
    alpha: Complex64,
    ctx: &ThermalContext,
    cutoff: usize,
) -> Result<PureState> {
    let phys = FockSpace::new(1, cutoff)?;
    // reuse the certified Glauber constructor for the displaced vacuum;
    // the tail check doubles as the oracle's own truncation guard
    let displaced = coherent_hw_pure_with_tol(&HwParams { alpha }, phys, 1e-10)?;
    let doubled = phys.doubled()?;
    let embedded = displaced.embed_physical(doubled)?;
    apply_bogoliubov(&embedded, ctx, TOL_EXP)
}

/// Gram matrix of the one-pair states U(beta)|n, 0~> for n = 0..=n_top on
/// a (1 physical + 1 tilde) space.
fn bogoliubov_pair_gram(
    ctx: &ThermalContext,
    n_top: usize,
    pair_cutoff: usize,
    tol: f64,
) -> Result<Vec<Vec<Complex64>>> {
    if pair_cutoff < n_top {
        return Err(CosetError::InvalidParameter(format!(
            "pair cutoff {pair_cutoff} below the highest occupation {n_top} it must host"
        )));
    }
    let space = FockSpace::new(2, pair_cutoff)?;
    let mut states = Vec::with_capacity(n_top + 1);
    for n in 0..=n_top {
        let basis = PureState::basis_state(space, &[n, 0]);
        states.push(apply_bogoliubov(&basis, ctx, tol)?);
    }
    let mut gram = vec![vec![Complex64::ZERO; n_top + 1]; n_top + 1];
    for (i, si) in states.iter().enumerate() {
        for (j, sj) in states.iter().enumerate() {
            gram[i][j] = crate::fock::inner(si, sj)?;
        }
    }
    Ok(gram)
}

/// Doubled-space inner product <z1(beta)|z2(beta)> evaluated through the
/// exact mode-pair factorization: the 4-mode state tensors into two
/// (mode, tilde-partner) pairs, so the inner product is a sum of products
/// of one-pair Gram-matrix elements. Lets the truncation run much deeper
/// than the full 4-mode space allows at small x.
pub fn doubled_overlap_su2_factorized(
    p1: &Su2Params,
    p2: &Su2Params,
    ctx: &ThermalContext,
    pair_cutoff: usize,
) -> Result<Complex64> {
    if p1.twice_j != p2.twice_j {
        return Err(CosetError::InvalidParameter(
            "overlap requires matching j".into(),
        ));
    }
    let tj = p1.twice_j as usize;
    let phys = FockSpace::new(2, tj)?;
    let c1 = crate::liealg::coherent_su2_pure(p1, phys)?;
    let c2 = crate::liealg::coherent_su2_pure(p2, phys)?;
    let gram = bogoliubov_pair_gram(ctx, tj, pair_cutoff, TOL_EXP)?;
    let mut acc = Complex64::ZERO;
    for a1 in 0..=tj {
        let amp1 = c1.amp(&[a1, tj - a1]);
        if amp1 == Complex64::ZERO {
            continue;
        }
        for a2 in 0..=tj {
            let amp2 = c2.amp(&[a2, tj - a2]);
            if amp2 == Complex64::ZERO {
                continue;
            }
            acc += amp1.conj() * amp2 * gram[a1][a2] * gram[tj - a1][tj - a2];
        }
    }
    Ok(acc)
}

/// su(1,1) analogue of [`doubled_overlap_su2_factorized`].
pub fn doubled_overlap_su11_factorized(
    p1: &Su11Params,
    p2: &Su11Params,
    ctx: &ThermalContext,
    label_cutoff: usize,
    pair_cutoff: usize,
) -> Result<Complex64> {
    if p1.q != p2.q {
        return Err(CosetError::InvalidParameter(
            "overlap requires matching q".into(),
        ));
    }
    let q = p1.q as usize;
    let phys = FockSpace::new(2, label_cutoff + q)?;
    let c1 = crate::liealg::coherent_su11_pure_with_tol(p1, phys, 1e-13)?;
    let c2 = crate::liealg::coherent_su11_pure_with_tol(p2, phys, 1e-13)?;
    let gram = bogoliubov_pair_gram(ctx, label_cutoff + q, pair_cutoff, TOL_EXP)?;
    let mut acc = Complex64::ZERO;
    for n1 in 0..=label_cutoff {
        let amp1 = c1.amp(&[n1 + q, n1]);
        if amp1 == Complex64::ZERO {
            continue;
        }
        for n2 in 0..=label_cutoff {
            let amp2 = c2.amp(&[n2 + q, n2]);
            if amp2 == Complex64::ZERO {
                continue;
            }
            acc += amp1.conj() * amp2 * gram[n1 + q][n2 + q] * gram[n1][n2];
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{inner, number_op, partial_trace_tilde};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn context_identities() {
        for x in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let ctx = ThermalContext::from_x(x).unwrap();
            assert!((ctx.u() * ctx.u() - ctx.v() * ctx.v() - 1.0).abs() < 1e-12, "x={x}");
            assert!((ctx.v() / ctx.u() - (-x / 2.0).exp()).abs() < 1e-13);
            assert!((ctx.theta().tanh() - (-x / 2.0).exp()).abs() < 1e-13);
        }
        // zero-temperature limit
        let ctx = ThermalContext::from_x(60.0).unwrap();
        assert!(ctx.v() < 1e-12);
        assert!((ctx.u() - 1.0).abs() < 1e-12);

        // x = ln 2: e^{-x} = 1/2, u = sqrt(2), v = 1
        let ctx = ThermalContext::from_x(2f64.ln()).unwrap();
        assert!((ctx.u() - 2f64.sqrt()).abs() < 1e-13);
        assert!((ctx.v() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn context_edge_cases() {
        assert!(ThermalContext::from_x(-1.0).is_err());
        let ctx = ThermalContext::from_x(0.0).unwrap();
        assert_eq!(ctx.x(), 0.0);
        let space = FockSpace::new(2, 3).unwrap();
        assert!(bogoliubov_generator(space, 0, &ctx).is_err());
    }

    #[test]
    fn context_physical_units() {
        // omega = 1e7 rad/s, T = 0.005 K
        let ctx = ThermalContext::from_physical(1e7, 0.005).unwrap();
        assert!((ctx.x() - 0.015276465155155291).abs() < 1e-12);
        assert!(ThermalContext::from_physical(-1.0, 1.0).is_err());
        assert!(ThermalContext::from_physical(1.0, 0.0).is_err());
    }

    #[test]
    fn generator_is_anti_hermitian_after_minus_i() {
        let space = FockSpace::new(2, 6).unwrap();
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let g = bogoliubov_generator(space, 0, &ctx).unwrap();
        // (-i G)^dag = +i G
        let minus_ig = g.scale(c(0.0, -1.0));
        let diff = minus_ig
            .adjoint()
            .max_abs_diff(&g.scale(c(0.0, 1.0)));
        assert!(diff < 1e-14);
    }

    #[test]
    fn bogoliubov_norm_preserved() {
        let space = FockSpace::new(2, 20).unwrap();
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let psi = PureState::basis_state(space, &[2, 1]);
        let out = apply_bogoliubov(&psi, &ctx, 1e-13).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn thermal_vacuum_coefficients_via_exponential() {
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let cutoff = 40;
        let out = thermal_vacuum_via_bogoliubov(&ctx, 1, cutoff).unwrap();
        let space = out.space();
        let pref = (1.0 - (-1.0f64).exp()).sqrt();
        let mut worst: f64 = 0.0;
        for n in 0..=cutoff {
            let want = pref * (-(n as f64) / 2.0).exp();
            let got = out.amp(&[n, n]);
            worst = worst.max((got - c(want, 0.0)).norm());
        }
        // off-diagonal amplitudes must vanish
        for idx in 0..space.dim() {
            let occ = space.occupation(idx);
            if occ[0] != occ[1] {
                assert!(out.amplitudes()[idx].norm() < 1e-13);
            }
        }
        assert!(
            worst < 1e-9,
            "worst thermal-vacuum amplitude deviation {worst:.3e}"
        );
        eprintln!("thermal vacuum amplitude deviation at cutoff 40: {worst:.3e}");
    }

    #[test]
    fn thermal_vacuum_analytic_matches_exponential() {
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let analytic = thermal_vacuum(&ctx, 1, 40).unwrap();
        let viaexp = thermal_vacuum_via_bogoliubov(&ctx, 1, 40).unwrap();
        assert!(analytic.max_abs_diff(&viaexp) < 1e-9);
    }

    #[test]
    fn thermal_vacuum_zero_temperature_limit() {
        let ctx = ThermalContext::from_x(40.0).unwrap();
        let tv = thermal_vacuum(&ctx, 1, 5).unwrap();
        let vac = PureState::basis_state(tv.space(), &[0, 0]);
        assert!(tv.max_abs_diff(&vac) < 1e-8);
    }

    #[test]
    fn thermal_vacuum_occupation() {
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let tv = thermal_vacuum(&ctx, 1, 40).unwrap();
        let n_op = number_op(tv.space(), 0).unwrap();
        let val = inner(&tv, &n_op.apply(&tv).unwrap()).unwrap();
        let want = 1.0 / (1f64.exp() - 1.0);
        assert!((val - c(want, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn thermal_vacuum_reduced_is_bose_diagonal() {
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let tv = thermal_vacuum(&ctx, 1, 30).unwrap();
        let rho = partial_trace_tilde(&tv).unwrap();
        for n in 0..=30usize {
            let want = (1.0 - (-1.0f64).exp()) * (-(n as f64)).exp();
            assert!((rho.entry(n, n) - c(want, 0.0)).norm() < 1e-12, "n={n}");
        }
        assert!(rho.hermiticity_residual() < 1e-15);
    }

    #[test]
    fn thermal_vacuum_tail_rejection() {
        let ctx = ThermalContext::from_x(0.1).unwrap();
        let err = thermal_vacuum(&ctx, 1, 10);
        match err {
            Err(CosetError::TailBound { suggested_cutoff, .. }) => {
                assert!(suggested_cutoff > 200);
            }
            other => panic!("expected tail error, got {other:?}"),
        }
    }

    #[test]
    fn su2_oracle_zero_temperature_reduces_to_pure() {
        let ctx = ThermalContext::from_x(40.0).unwrap();
        let p = Su2Params::new(1, c(0.1, 0.0)).unwrap();
        let state = thermal_coherent_su2_oracle(&p, &ctx, 6).unwrap();
        let phys = FockSpace::new(2, 6).unwrap();
        let pure = crate::liealg::coherent_su2_pure(&p, phys).unwrap();
        let embedded = pure.embed_physical(phys.doubled().unwrap()).unwrap();
        let overlap = inner(&embedded, &state).unwrap().norm();
        assert!(overlap > 1.0 - 1e-8, "overlap {overlap}");
    }

    #[test]
    fn su2_oracle_norm_and_structure() {
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let p = Su2Params::new(1, Complex64::ZERO).unwrap();
        let state = thermal_coherent_su2_oracle(&p, &ctx, 14).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn su11_oracle_zero_temperature_reduces_to_pure() {
        let ctx = ThermalContext::from_x(40.0).unwrap();
        let p = Su11Params::new(0, c(0.2, 0.0)).unwrap();
        let state = thermal_coherent_su11_oracle(&p, &ctx, 12).unwrap();
        let phys = FockSpace::new(2, 12).unwrap();
        let pure = crate::liealg::coherent_su11_pure(&p, phys).unwrap();
        let embedded = pure.embed_physical(phys.doubled().unwrap()).unwrap();
        let overlap = inner(&embedded, &state).unwrap().norm();
        assert!(overlap > 1.0 - 1e-8, "overlap {overlap}");
    }

    #[test]
    fn su11_oracle_zero_label_is_two_thermal_vacua() {
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let p = Su11Params::new(0, Complex64::ZERO).unwrap();
        // truncation contamination decays geometrically with the distance
        // from the cutoff edge; entries up to 6 quanta need cutoff ~18
        let state = thermal_coherent_su11_oracle(&p, &ctx, 18).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-9);
        let rho = partial_trace_tilde(&state).unwrap();
        // reduced state is a product of Bose thermal distributions
        let phys = FockSpace::new(2, 18).unwrap();
        let w = 1.0 - ctx.boltzmann();
        for n1 in 0..=6usize {
            for n2 in 0..=6usize {
                let idx = phys.index_of(&[n1, n2]);
                let want = w * w * ctx.boltzmann().powi((n1 + n2) as i32);
                assert!(
                    (rho.entry(idx, idx) - c(want, 0.0)).norm() < 1e-9,
                    "n1={n1} n2={n2}"
                );
            }
        }
    }

    #[test]
    fn hw_oracle_checks() {
        let ctx = ThermalContext::from_x(1.0).unwrap();
        let alpha = c(0.3, 0.0);
        let state = thermal_coherent_hw(alpha, &ctx, 30).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-9);
        // <a> = alpha cosh(theta): independent check of the
        // displacement/Bogoliubov ordering
        let a = ladder(state.space(), 0, LadderKind::Lower).unwrap();
        let val = inner(&state, &a.apply(&state).unwrap()).unwrap();
        let want = alpha * ctx.u();
        assert!((val - want).norm() < 1e-9, "{val} vs {want}");

        // zero-temperature limit: Glauber state tensor tilde vacuum
        let cold = ThermalContext::from_x(40.0).unwrap();
        let state = thermal_coherent_hw(alpha, &cold, 20).unwrap();
        let phys = FockSpace::new(1, 20).unwrap();
        let glauber = coherent_hw_pure_with_tol(&HwParams { alpha }, phys, 1e-10).unwrap();
        let embedded = glauber.embed_physical(phys.doubled().unwrap()).unwrap();
        assert!(inner(&embedded, &state).unwrap().norm() > 1.0 - 1e-8);
    }

    #[test]
    fn factorized_overlap_matches_full_doubled_space() {
        let ctx = ThermalContext::from_x(2.0).unwrap();
        let cutoff = 16;
        let p1 = Su2Params::new(1, c(0.2, 0.1)).unwrap();
        let p2 = Su2Params::new(1, c(0.5, 0.0)).unwrap();
        let s1 = thermal_coherent_su2_oracle(&p1, &ctx, cutoff).unwrap();
        let s2 = thermal_coherent_su2_oracle(&p2, &ctx, cutoff).unwrap();
        let full = inner(&s1, &s2).unwrap();
        let fact = doubled_overlap_su2_factorized(&p1, &p2, &ctx, cutoff).unwrap();
        assert!((full - fact).norm() < 1e-10, "{full} vs {fact}");

        let q1 = Su11Params::new(1, c(0.2, 0.0)).unwrap();
        let q2 = Su11Params::new(1, c(0.1, 0.1)).unwrap();
        let t1 = thermal_coherent_su11_oracle(&q1, &ctx, cutoff).unwrap();
        let t2 = thermal_coherent_su11_oracle(&q2, &ctx, cutoff).unwrap();
        let full = inner(&t1, &t2).unwrap();
        let fact = doubled_overlap_su11_factorized(&q1, &q2, &ctx, 12, cutoff).unwrap();
        assert!((full - fact).norm() < 1e-9, "{full} vs {fact}");
    }

    #[test]
    fn thermal_overlap_invariance() {
        // <z1(beta)|z2(beta)> equals the pure overlap: U(beta) cancels
        let ctx = ThermalContext::from_x(2.0).unwrap();
        let cutoff = 16;
        let phys = FockSpace::new(2, cutoff).unwrap();
        let p1 = Su2Params::new(1, Complex64::ZERO).unwrap();
        let p2 = Su2Params::new(1, c(0.1, 0.0)).unwrap();
        let s1 = thermal_coherent_su2_oracle(&p1, &ctx, cutoff).unwrap();
        let s2 = thermal_coherent_su2_oracle(&p2, &ctx, cutoff).unwrap();
        let thermal = inner(&s1, &s2).unwrap();
        let pure1 = crate::liealg::coherent_su2_pure(&p1, phys).unwrap();
        let pure2 = crate::liealg::coherent_su2_pure(&p2, phys).unwrap();
        let pure = inner(&pure1, &pure2).unwrap();
        assert!((thermal - pure).norm() < 1e-9, "{thermal} vs {pure}");
    }
}
