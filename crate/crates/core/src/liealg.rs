//! su(2) and su(1,1) in their two-boson representations, pure coherent
//! states in closed form, and the displacement-parameter maps.
//!
//! Dicke states map onto Fock occupations as |j,m> = |n1 = j+m, n2 = j-m>
//! (Schwinger); the su(1,1) discrete series uses |k,m> = |n1 = m+q, n2 = m>
//! with Bargmann index k = (1+q)/2.

use num_complex::Complex64;

use crate::error::{CosetError, Result};
use crate::fock::{ladder, number_op, FockSpace, LadderKind, Operator, PureState};
use crate::math::sqrt_binom;
use crate::tail::sum_positive_series;

/// Default tail tolerance on the squared norm of truncated pure states.
pub const DEFAULT_STATE_TAIL_TOL: f64 = 1e-12;

/// Spin coherent-state parameters. `j` is stored doubled so half-integer
/// representations stay exact.
#[derive(Debug, Clone, Copy)]
pub struct Su2Params {
    pub twice_j: u32,
    /// Stereographic coset label.
    pub z: Complex64,
    /// Optional displacement parameter; when present the oracle uses it
    /// directly instead of inverting the default map.
    pub eta: Option<Complex64>,
}

impl Su2Params {
    pub fn new(twice_j: u32, z: Complex64) -> Result<Self> {
        if twice_j == 0 {
            return Err(CosetError::InvalidParameter("twice_j must be >= 1".into()));
        }
        Ok(Self { twice_j, z, eta: None })
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }
}

/// su(1,1) discrete-series parameters with k = (1 + q)/2.
#[derive(Debug, Clone, Copy)]
pub struct Su11Params {
    pub q: u32,
    /// Unit-disk coset label, |zeta| < 1.
    pub zeta: Complex64,
    pub alpha: Option<Complex64>,
}

impl Su11Params {
    pub fn new(q: u32, zeta: Complex64) -> Result<Self> {
        if zeta.norm() >= 1.0 {
            return Err(CosetError::InvalidParameter(format!(
                "zeta must satisfy |zeta| < 1, got |zeta| = {}",
                zeta.norm()
            )));
        }
        Ok(Self { q, zeta, alpha: None })
    }

    /// Bargmann index k = (1 + q)/2.
    pub fn bargmann_k(&self) -> f64 {
        (1.0 + self.q as f64) / 2.0
    }
}

/// Heisenberg-Weyl (Glauber) coherent-state parameter.
#[derive(Debug, Clone, Copy)]
pub struct HwParams {
    pub alpha: Complex64,
}

pub struct Su2Generators {
    pub j_plus: Operator,
    pub j_minus: Operator,
    pub j_z: Operator,
}

pub struct Su11Generators {
    pub k_plus: Operator,
    pub k_minus: Operator,
    pub k_zero: Operator,
}

fn require_two_modes(space: FockSpace) -> Result<()> {
    if space.num_modes() < 2 {
        return Err(CosetError::InvalidParameter(format!(
            "need at least 2 modes for the two-boson representation, got {}",
            space.num_modes()
        )));
    }
    Ok(())
}

/// Schwinger representation on modes 0, 1:
/// J+ = a1^dag a2, J- = a2^dag a1, Jz = (n1 - n2)/2.
pub fn su2_generators(space: FockSpace) -> Result<Su2Generators> {
    require_two_modes(space)?;
    let raise1 = ladder(space, 0, LadderKind::Raise)?;
    let lower1 = ladder(space, 0, LadderKind::Lower)?;
    let raise2 = ladder(space, 1, LadderKind::Raise)?;
    let lower2 = ladder(space, 1, LadderKind::Lower)?;
    let j_plus = raise1.matmul(&lower2)?;
    let j_minus = raise2.matmul(&lower1)?;
    let half = Complex64::new(0.5, 0.0);
    let j_z = number_op(space, 0)?
        .sub(&number_op(space, 1)?)?
        .scale(half);
    Ok(Su2Generators { j_plus, j_minus, j_z })
}

/// Two-boson representation on modes 0, 1:
/// K+ = a1^dag a2^dag, K- = a1 a2, K0 = (n1 + n2 + 1)/2.
pub fn su11_generators(space: FockSpace) -> Result<Su11Generators> {
    require_two_modes(space)?;
    let raise1 = ladder(space, 0, LadderKind::Raise)?;
    let lower1 = ladder(space, 0, LadderKind::Lower)?;
    let raise2 = ladder(space, 1, LadderKind::Raise)?;
    let lower2 = ladder(space, 1, LadderKind::Lower)?;
    let k_plus = raise1.matmul(&raise2)?;
    let k_minus = lower1.matmul(&lower2)?;
    let half = Complex64::new(0.5, 0.0);
    let k_zero = number_op(space, 0)?
        .add(&number_op(space, 1)?)?
        .add(&Operator::identity(space))?
        .scale(half);
    Ok(Su11Generators { k_plus, k_minus, k_zero })
}

/// J^2 = Jz^2 + (J+ J- + J- J+)/2.
pub fn casimir_su2(space: FockSpace) -> Result<Operator> {
    let g = su2_generators(space)?;
    let sym = g
        .j_plus
        .matmul(&g.j_minus)?
        .add(&g.j_minus.matmul(&g.j_plus)?)?
        .scale(Complex64::new(0.5, 0.0));
    g.j_z.matmul(&g.j_z)?.add(&sym)
}

/// K^2 = K0^2 - K1^2 - K2^2 = K0^2 - (K+ K- + K- K+)/2, with K1, K2
/// entering only through K+- = +-i(K1 +- i K2).
pub fn casimir_su11(space: FockSpace) -> Result<Operator> {
    let g = su11_generators(space)?;
    let sym = g
        .k_plus
        .matmul(&g.k_minus)?
        .add(&g.k_minus.matmul(&g.k_plus)?)?
        .scale(Complex64::new(0.5, 0.0));
    g.k_zero.matmul(&g.k_zero)?.sub(&sym)
}

/// Pure spin coherent state
/// |z> = (1+|z|^2)^{-j} sum_m z^{j+m} sqrt(binom(2j, j+m)) |j+m, j-m>.
/// Exact unit norm for any cutoff >= 2j (the sum is finite).
pub fn coherent_su2_pure(p: &Su2Params, space: FockSpace) -> Result<PureState> {
    require_two_modes(space)?;
    let tj = p.twice_j as usize;
    if space.cutoff() < tj {
        return Err(CosetError::InvalidParameter(format!(
            "cutoff {} < 2j = {tj}",
            space.cutoff()
        )));
    }
    let norm = (1.0 + p.z.norm_sqr()).powf(-(p.twice_j as f64) / 2.0);
    let mut psi = PureState::zero(space);
    let mut occ = vec![0usize; space.num_modes()];
    let mut z_pow = Complex64::ONE;
    for a in 0..=tj {
        occ[0] = a;
        occ[1] = tj - a;
        let amp = z_pow * sqrt_binom(tj, a) * norm;
        psi.amp_mut()[space.index_of(&occ)] = amp;
        z_pow *= p.z;
    }
    Ok(psi)
}

/// Pure su(1,1) coherent state
/// |zeta, k> = (1-|zeta|^2)^{(1+q)/2} sum_n sqrt(binom(n+q, q)) zeta^n |n+q, n>,
/// normalized within `tail_tol` on the squared norm.
pub fn coherent_su11_pure(p: &Su11Params, space: FockSpace) -> Result<PureState> {
    coherent_su11_pure_with_tol(p, space, DEFAULT_STATE_TAIL_TOL)
}

pub fn coherent_su11_pure_with_tol(
    p: &Su11Params,
    space: FockSpace,
    tail_tol: f64,
) -> Result<PureState> {
    require_two_modes(space)?;
    if p.zeta.norm() >= 1.0 {
        return Err(CosetError::InvalidParameter(format!(
            "zeta must satisfy |zeta| < 1, got |zeta| = {}",
            p.zeta.norm()
        )));
    }
    let q = p.q as usize;
    if space.cutoff() < q {
        return Err(CosetError::InvalidParameter(format!(
            "cutoff {} < q = {q}",
            space.cutoff()
        )));
    }
    let n_max = space.cutoff() - q;
    let r2 = p.zeta.norm_sqr();
    let norm_factor = (1.0 - r2).powf((1.0 + q as f64) / 2.0);
    // squared-norm tail beyond n_max, certified
    if r2 > 0.0 {
        let weight = |n: usize| {
            (1.0 - r2).powi(1 + q as i32) * crate::math::binom(n + q, q) * r2.powi(n as i32)
        };
        let ratio = |n: usize| r2 * (n + 1 + q) as f64 / (n + 1) as f64;
        let tail = sum_positive_series(weight, ratio, n_max + 1, tail_tol, 100_000)
            .map(|s| s.value + s.tail_bound)
            .unwrap_or(f64::INFINITY);
        if tail >= tail_tol {
            // find the cutoff that would work
            let mut suggested = space.cutoff();
            for n in 0..=1_000_000usize {
                let r = ratio(n);
                if r < 1.0 && weight(n) * r / (1.0 - r) < tail_tol {
                    suggested = n + q + 1;
                    break;
                }
            }
            return Err(CosetError::TailBound {
                required: tail_tol,
                achieved: tail,
                suggested_cutoff: suggested,
            });
        }
    }
    let mut psi = PureState::zero(space);
    let mut occ = vec![0usize; space.num_modes()];
    let mut zeta_pow = Complex64::ONE;
    for n in 0..=n_max {
        occ[0] = n + q;
        occ[1] = n;
        psi.amp_mut()[space.index_of(&occ)] = zeta_pow * sqrt_binom(n + q, q) * norm_factor;
        zeta_pow *= p.zeta;
    }
    Ok(psi)
}

/// Glauber coherent state e^{-|alpha|^2/2} sum alpha^n/sqrt(n!) |n> on a
/// single-mode space, with a certified Poisson tail.
pub fn coherent_hw_pure(p: &HwParams, space: FockSpace) -> Result<PureState> {
    coherent_hw_pure_with_tol(p, space, DEFAULT_STATE_TAIL_TOL)
}

pub fn coherent_hw_pure_with_tol(
    p: &HwParams,
    space: FockSpace,
    tail_tol: f64,
) -> Result<PureState> {
    if space.num_modes() != 1 {
        return Err(CosetError::InvalidParameter(
            "Glauber state lives on a single-mode space".into(),
        ));
    }
    let a2 = p.alpha.norm_sqr();
    if a2 > 0.0 {
        // Poisson squared-norm tail beyond the cutoff
        let weight = |n: usize| (-a2).exp() * (a2.ln() * n as f64 - crate::math::ln_factorial(n)).exp();
        let ratio = |n: usize| a2 / (n + 1) as f64;
        let tail = sum_positive_series(weight, ratio, space.cutoff() + 1, tail_tol, 100_000)
            .map(|s| s.value + s.tail_bound)
            .unwrap_or(f64::INFINITY);
        if tail >= tail_tol {
            let mut suggested = space.cutoff();
            for n in 0..1_000_000 {
                let r = ratio(n);
                if r < 1.0 && weight(n) * r / (1.0 - r) < tail_tol {
                    suggested = n + 1;
                    break;
                }
            }
            return Err(CosetError::TailBound {
                required: tail_tol,
                achieved: tail,
                suggested_cutoff: suggested,
            });
        }
    }
    let mut psi = PureState::zero(space);
    let pref = (-a2 / 2.0).exp();
    let mut pow = Complex64::new(pref, 0.0);
    let mut fact_sqrt = 1.0;
    for n in 0..=space.cutoff() {
        if n > 0 {
            pow *= p.alpha;
            fact_sqrt *= (n as f64).sqrt();
        }
        psi.amp_mut()[n] = pow / fact_sqrt;
    }
    Ok(psi)
}

/// Which form of the su(2) eta -> z map to use. The implicit relation
/// z/sqrt(1+|z|^2) = eta sin|eta| / |eta|, solved for z, coincides with the
/// direct tangent form z = (eta/|eta|) tan|eta| identically; both are kept
/// so the verify suite can demonstrate the agreement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Su2Map {
    SineRelation,
    #[default]
    Tangent,
}

/// eta -> z for su(2). Pole at |eta| = pi/2 (mod pi) under either form.
pub fn displacement_map_su2(eta: Complex64, map: Su2Map) -> Result<Complex64> {
    let r = eta.norm();
    if r == 0.0 {
        return Ok(Complex64::ZERO);
    }
    match map {
        Su2Map::Tangent => {
            if r.cos().abs() < 1e-12 {
                return Err(CosetError::InvalidParameter(format!(
                    "displacement magnitude |eta| = {r} sits at a pole of tan"
                )));
            }
            Ok(eta / r * r.tan())
        }
        Su2Map::SineRelation => {
            let w = eta / r * r.sin();
            let denom = 1.0 - w.norm_sqr();
            if denom <= 1e-24 {
                return Err(CosetError::InvalidParameter(format!(
                    "displacement magnitude |eta| = {r} sits at a pole of the sine relation"
                )));
            }
            Ok(w / denom.sqrt())
        }
    }
}

/// z -> eta inverse of the tangent map: eta = (z/|z|) arctan|z|.
pub fn su2_eta_from_z(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::ZERO
    } else {
        z / r * r.atan()
    }
}

/// alpha -> zeta for su(1,1): zeta = (alpha/|alpha|) tanh|alpha|.
pub fn displacement_map_su11(alpha: Complex64) -> Complex64 {
    let r = alpha.norm();
    if r == 0.0 {
        Complex64::ZERO
    } else {
        alpha / r * r.tanh()
    }
}

/// zeta -> alpha inverse: alpha = (zeta/|zeta|) artanh|zeta|.
pub fn su11_alpha_from_zeta(zeta: Complex64) -> Complex64 {
    let r = zeta.norm();
    if r == 0.0 {
        Complex64::ZERO
    } else {
        zeta / r * r.atanh()
    }
}
