//! Self-verification suites.
//!
//! `run(Quick)` exercises the algebraic invariants, one oracle-equivalence
//! point per algebra, the limits and the cross-route agreements; `Full`
//! adds the over-completeness quadratures, randomized Wigner oracle sets,
//! fidelity scans and the full-size oracle equivalences. Printed-form
//! discrepancies where the implemented default matches the oracle are
//! reported as findings, not failures.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::fock::{
    apply_exponential, inner, ladder, partial_trace_tilde, FockSpace, LadderKind, Operator,
    PureState,
};
use crate::liealg::{
    casimir_su11, casimir_su2, coherent_su11_pure, coherent_su2_pure, displacement_map_su2,
    su11_generators, su2_generators, Su11Params, Su2Map, Su2Params,
};
use crate::measures::{
    chi_factor, fidelity_su11_numeric, fidelity_su11_series, fidelity_su2_closed,
    fidelity_su2_numeric, laguerre_assoc, wigner_numeric, ChiOrientation, Su11WignerEvaluator,
    Su2WignerEvaluator, WignerPoint, VACUUM_ORIGIN_RAW,
};
use crate::states::{
    identity_resolution_su2, identity_resolution_su2_thermal, overlap_su2, overlap_su11,
    rho_su11, rho_su2, su11_coherent_weight,
};
use crate::tfd::{
    bogoliubov_generator, doubled_overlap_su11_factorized, doubled_overlap_su2_factorized,
    thermal_coherent_su11_oracle, thermal_coherent_su2_oracle, thermal_vacuum,
    thermal_vacuum_via_bogoliubov, thermal_vacuum_via_bogoliubov_guarded, ThermalContext,
};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    Quick,
    Full,
}

/// One certified check: `observed <= threshold` must hold.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub threshold: f64,
    pub detail: String,
}

/// A printed-form-vs-oracle resolution worth surfacing; not a failure.
#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub topic: String,
    pub summary: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub checks: Vec<CheckResult>,
    pub findings: Vec<Finding>,
    pub all_passed: bool,
}

impl VerifyReport {
    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

struct Suite {
    checks: Vec<CheckResult>,
    findings: Vec<Finding>,
}

impl Suite {
    fn new() -> Self {
        Self { checks: Vec::new(), findings: Vec::new() }
    }

    fn check(&mut self, name: &str, observed: f64, threshold: f64, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed: observed <= threshold && observed.is_finite(),
            observed,
            threshold,
            detail: detail.into(),
        });
    }

    fn finding(&mut self, topic: &str, summary: String) {
        self.findings.push(Finding { topic: topic.into(), summary });
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Max entrywise deviation between two operators on the truncation
/// interior (all occupations strictly below the cutoff).
fn interior_residual(a: &Operator, b: &Operator, space: FockSpace) -> f64 {
    let mut m: f64 = 0.0;
    for r in 0..space.dim() {
        if space.occupation(r).iter().any(|&n| n >= space.cutoff()) {
            continue;
        }
        for col in 0..space.dim() {
            if space.occupation(col).iter().any(|&n| n >= space.cutoff()) {
                continue;
            }
            m = m.max((a.entry(r, col) - b.entry(r, col)).norm());
        }
    }
    m
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

pub fn run(level: VerifyLevel) -> Result<VerifyReport> {
    let mut s = Suite::new();

    fock_checks(&mut s)?;
    liealg_checks(&mut s)?;
    tfd_checks(&mut s)?;
    states_checks(&mut s, level)?;
    measures_checks(&mut s, level)?;
    if level == VerifyLevel::Full {
        full_extras(&mut s)?;
    }

    let all_passed = s.checks.iter().all(|chk| chk.passed);
    Ok(VerifyReport { level, checks: s.checks, findings: s.findings, all_passed })
}

fn fock_checks(s: &mut Suite) -> Result<()> {
    // index bijection
    let space = FockSpace::new(3, 4)?;
    let mut bad = 0usize;
    for idx in 0..space.dim() {
        if space.index_of(&space.occupation(idx)) != idx {
            bad += 1;
        }
    }
    s.check("fock.index_bijection", bad as f64, 0.0, "round-trip failures over 125 indices");

    // ladder adjointness, exact
    let sp = FockSpace::new(2, 6)?;
    let lower = ladder(sp, 0, LadderKind::Lower)?;
    let raise = ladder(sp, 0, LadderKind::Raise)?;
    s.check(
        "fock.ladder_adjoint",
        lower.adjoint().max_abs_diff(&raise),
        0.0,
        "adjoint(lower) vs raise, entrywise",
    );

    // commutator on the interior
    let one = FockSpace::new(1, 10)?;
    let a = ladder(one, 0, LadderKind::Lower)?;
    let ad = ladder(one, 0, LadderKind::Raise)?;
    let comm = a.commutator(&ad)?;
    s.check(
        "fock.commutator_interior",
        interior_residual(&comm, &Operator::identity(one), one),
        1e-13,
        "[a, a^dag] = 1 below the cutoff edge",
    );

    // exponential: Glauber displacement closed form
    let g = FockSpace::new(1, 25)?;
    let alpha = c(0.3, 0.0);
    let gen = ladder(g, 0, LadderKind::Raise)?
        .scale(alpha)
        .sub(&ladder(g, 0, LadderKind::Lower)?.scale(alpha.conj()))?;
    let disp = apply_exponential(&gen, &PureState::basis_state(g, &[0]), 1e-14)?;
    let glauber = crate::liealg::coherent_hw_pure(&crate::liealg::HwParams { alpha }, g)?;
    s.check(
        "fock.exp_glauber",
        disp.max_abs_diff(&glauber),
        1e-10,
        "exp(alpha a^dag - alpha^* a)|0> vs closed-form amplitudes",
    );
    s.check(
        "fock.exp_unitary",
        (disp.norm() - 1.0).abs(),
        tol::TOL_UNITARY,
        "norm preservation under anti-Hermitian exponential",
    );

    // partial trace: trace = |psi|^2 and Hermiticity
    let d = FockSpace::new(2, 8)?;
    let mut psi = PureState::zero(d);
    for (i, v) in psi.amp_mut().iter_mut().enumerate() {
        *v = c((0.19 * i as f64).sin(), (0.31 * i as f64).cos());
    }
    let rho = partial_trace_tilde(&psi)?;
    s.check(
        "fock.ptrace_trace",
        (rho.trace().re - psi.norm_sq()).abs() / psi.norm_sq(),
        tol::TOL_PTRACE,
        "tr rho vs |psi|^2, relative",
    );
    s.check(
        "fock.ptrace_hermitian",
        rho.hermiticity_residual() / psi.norm_sq(),
        1e-14,
        "partial trace output Hermiticity",
    );
    Ok(())
}

fn liealg_checks(s: &mut Suite) -> Result<()> {
    let sp = FockSpace::new(2, 5)?;
    let g2 = su2_generators(sp)?;
    let comm = g2.j_plus.commutator(&g2.j_minus)?;
    s.check(
        "liealg.su2_commutator",
        interior_residual(&comm, &g2.j_z.scale(c(2.0, 0.0)), sp),
        1e-13,
        "[J+, J-] = 2 Jz on the interior",
    );
    let g11 = su11_generators(sp)?;
    let comm = g11.k_minus.commutator(&g11.k_plus)?;
    s.check(
        "liealg.su11_commutator",
        interior_residual(&comm, &g11.k_zero.scale(c(2.0, 0.0)), sp),
        1e-13,
        "[K-, K+] = 2 K0 on the interior",
    );

    // Casimir eigenvalues on representation blocks
    let j2 = casimir_su2(sp)?;
    let mut worst: f64 = 0.0;
    for tj in 1..=4usize {
        let want = tj as f64 * (tj as f64 + 2.0) / 4.0;
        for a in 0..=tj {
            let psi = PureState::basis_state(sp, &[a, tj - a]);
            let mut r = j2.apply(&psi)?;
            r.add_scaled(&psi, c(-want, 0.0));
            worst = worst.max(r.norm());
        }
    }
    s.check("liealg.casimir_su2", worst, 1e-12, "J^2 = j(j+1) on spin blocks");

    let k2 = casimir_su11(sp)?;
    let mut worst: f64 = 0.0;
    for q in 0..=2usize {
        let k = (1.0 + q as f64) / 2.0;
        for n in 0..=2usize {
            let psi = PureState::basis_state(sp, &[n + q, n]);
            let mut r = k2.apply(&psi)?;
            r.add_scaled(&psi, c(-k * (k - 1.0), 0.0));
            worst = worst.max(r.norm());
        }
    }
    s.check("liealg.casimir_su11", worst, 1e-12, "K^2 = k(k-1) on discrete series");

    // coherent-state norms
    let big = FockSpace::new(2, 8)?;
    let p = Su2Params::new(6, c(0.1, 0.0))?;
    let psi = coherent_su2_pure(&p, big)?;
    s.check(
        "liealg.su2_coherent_norm",
        (psi.norm() - 1.0).abs(),
        1e-13,
        "finite binomial sum is an exact unit vector",
    );
    let s30 = FockSpace::new(2, 30)?;
    let p11 = Su11Params::new(3, c(0.1, 0.0))?;
    let psi = coherent_su11_pure(&p11, s30)?;
    s.check(
        "liealg.su11_coherent_norm",
        (psi.norm() - 1.0).abs(),
        1e-12,
        "certified-tail normalization at cutoff 30",
    );

    // displacement map vs exponential oracle, both map forms
    let tj = 3u32;
    let dsp = FockSpace::new(2, tj as usize)?;
    let gens = su2_generators(dsp)?;
    let mut worst_fid_deficit: f64 = 0.0;
    let mut map_gap: f64 = 0.0;
    for eta in [c(0.1, 0.0), c(0.3, 0.2)] {
        let gen = gens.j_plus.scale(eta).sub(&gens.j_minus.scale(eta.conj()))?;
        let displaced =
            apply_exponential(&gen, &PureState::basis_state(dsp, &[0, tj as usize]), 1e-14)?;
        let z_tan = displacement_map_su2(eta, Su2Map::Tangent)?;
        let z_sin = displacement_map_su2(eta, Su2Map::SineRelation)?;
        map_gap = map_gap.max((z_tan - z_sin).norm());
        let closed = coherent_su2_pure(&Su2Params::new(tj, z_tan)?, dsp)?;
        let fid = inner(&closed, &displaced)?.norm_sqr();
        worst_fid_deficit = worst_fid_deficit.max(1.0 - fid);
    }
    s.check(
        "liealg.su2_displacement_oracle",
        worst_fid_deficit,
        1e-10,
        "exp(eta J+ - eta^* J-)|j,-j> vs closed form at the mapped z",
    );
    s.finding(
        "su2_parameter_map",
        format!(
            "the printed relation z/sqrt(1+|z|^2) = eta sin|eta|/|eta|, solved for z, \
             coincides with the tangent map z = (eta/|eta|) tan|eta| (max gap {map_gap:.2e} \
             over test points); the exponential oracle confirms both, fidelity deficit \
             {worst_fid_deficit:.2e}. Default: tangent form."
        ),
    );

    // Laguerre recurrence reference value
    s.check(
        "measures.laguerre_reference",
        (laguerre_assoc(2, 0, 1.0) + 0.5).abs(),
        1e-14,
        "L_2^0(1) = -1/2",
    );
    Ok(())
}

fn tfd_checks(s: &mut Suite) -> Result<()> {
    let ctx = ThermalContext::from_x(1.0)?;
    s.check(
        "tfd.bogoliubov_identity",
        (ctx.u() * ctx.u() - ctx.v() * ctx.v() - 1.0).abs(),
        tol::TOL_BOGOLIUBOV,
        "u^2 - v^2 = 1",
    );

    let space = FockSpace::new(2, 12)?;
    let g = bogoliubov_generator(space, 0, &ctx)?;
    let minus_ig = g.scale(c(0.0, -1.0));
    s.check(
        "tfd.generator_anti_hermitian",
        minus_ig.adjoint().max_abs_diff(&g.scale(c(0.0, 1.0))),
        1e-14,
        "(-iG)^dag = +iG",
    );

    let analytic = thermal_vacuum(&ctx, 1, 40)?;
    let viaexp = thermal_vacuum_via_bogoliubov(&ctx, 1, 40)?;
    s.check(
        "tfd.thermal_vacuum_routes",
        analytic.max_abs_diff(&viaexp),
        tol::TOL_THERMAL_VACUUM,
        "analytic coefficients vs Bogoliubov exponential, same space",
    );

    // guarded amplitudes against the exact g_n
    let guarded = thermal_vacuum_via_bogoliubov_guarded(&ctx, 1, 40, 14)?;
    let pref = (1.0 - ctx.boltzmann()).sqrt();
    let mut worst: f64 = 0.0;
    for n in 0..=40usize {
        let want = pref * (-(n as f64) / 2.0).exp();
        worst = worst.max((guarded.amp(&[n, n]) - c(want, 0.0)).norm());
    }
    s.check(
        "tfd.thermal_vacuum_coefficients",
        worst,
        1e-10,
        "U(beta)|0,0~> amplitudes vs e^{-xn/2} sqrt(1-e^{-x}), guard-banded",
    );

    // zero-temperature limit
    let cold = ThermalContext::from_x(40.0)?;
    let tv = thermal_vacuum(&cold, 1, 5)?;
    s.check(
        "tfd.zero_temperature_vacuum",
        tv.max_abs_diff(&PureState::basis_state(tv.space(), &[0, 0])),
        1e-8,
        "|0(beta)> -> |0, 0~> at x = 40",
    );
    Ok(())
}

fn states_checks(s: &mut Suite, level: VerifyLevel) -> Result<()> {
    let ctx = ThermalContext::from_x(1.0)?;

    // oracle equivalence, one point per algebra
    let (cutoff, threshold) = match level {
        VerifyLevel::Quick => (20usize, 1e-7),
        VerifyLevel::Full => (25usize, tol::TOL_ORACLE),
    };
    let p2 = Su2Params::new(1, c(0.1, 0.0))?;
    let closed = rho_su2(&p2, &ctx, cutoff, 1e-2)?;
    let reduced = partial_trace_tilde(&thermal_coherent_su2_oracle(&p2, &ctx, cutoff)?)?;
    s.check(
        "states.oracle_equivalence_su2",
        closed.rho.max_abs_diff(&reduced),
        threshold,
        format!("closed-form rho vs Bogoliubov+trace oracle, cutoff {cutoff}"),
    );

    let p11 = Su11Params::new(0, c(0.2, 0.0))?;
    let closed11 = rho_su11(&p11, &ctx, cutoff, 1e-2)?;
    let reduced11 = partial_trace_tilde(&thermal_coherent_su11_oracle(&p11, &ctx, cutoff)?)?;
    s.check(
        "states.oracle_equivalence_su11",
        closed11.rho.max_abs_diff(&reduced11),
        threshold,
        format!("closed-form rho vs Bogoliubov+trace oracle, cutoff {cutoff}"),
    );
    s.finding(
        "gamma_exponent",
        format!(
            "the printed su(1,1) exponent [1-e^(-x)]^(n+nbar+q+2) is confirmed: the \
             diagonal telescopes to unit trace and the reduced oracle matches entrywise \
             to {:.2e} at (q=0, zeta=0.2, x=1)",
            closed11.rho.max_abs_diff(&reduced11)
        ),
    );

    // trace, Hermiticity, PSD
    let pj1 = Su2Params::new(2, c(0.3, 0.0))?;
    let r = rho_su2(&pj1, &ctx, 60, 1e-8)?;
    s.check(
        "states.rho_su2_trace",
        (r.rho.trace().re - 1.0).abs(),
        1e-8,
        "certified deficit at cutoff 60",
    );
    s.check(
        "states.rho_su2_hermitian",
        r.rho.hermiticity_residual(),
        tol::TOL_HERM,
        "entrywise rho vs adjoint",
    );
    let small = rho_su2(&pj1, &ctx, 14, 1e-3)?;
    s.check(
        "states.rho_su2_psd",
        if small.rho.is_psd_within(tol::TOL_PSD) { 0.0 } else { 1.0 },
        0.0,
        "Cholesky certificate of rho + tol I",
    );
    let r11 = rho_su11(&p11, &ctx, 30, 1e-8)?;
    s.check(
        "states.rho_su11_trace",
        (r11.rho.trace().re - 1.0).abs(),
        1e-8,
        "certified deficit at cutoff 30",
    );
    s.check(
        "states.rho_su11_psd",
        if rho_su11(&p11, &ctx, 14, 1e-2)?.rho.is_psd_within(tol::TOL_PSD) { 0.0 } else { 1.0 },
        0.0,
        "Cholesky certificate of rho + tol I",
    );

    // T -> 0 reduction
    let cold = ThermalContext::from_x(40.0)?;
    let space = FockSpace::new(2, 10)?;
    let rc = rho_su2(&p2, &cold, 10, 1e-8)?;
    s.check(
        "states.zero_temperature_su2",
        rc.rho.max_abs_diff_pure(&coherent_su2_pure(&p2, space)?),
        tol::TOL_ZERO_T,
        "rho -> |z><z| at x = 40",
    );
    let rc11 = rho_su11(&p11, &cold, 12, 1e-8)?;
    let space12 = FockSpace::new(2, 12)?;
    s.check(
        "states.zero_temperature_su11",
        rc11.rho.max_abs_diff_pure(&coherent_su11_pure(&p11, space12)?),
        tol::TOL_ZERO_T,
        "rho -> |zeta,k><zeta,k| at x = 40",
    );

    // overlap formulas vs doubled-space inner products; the deep-cutoff
    // x = 0.5 battery lives in the full level
    let xs: &[f64] = match level {
        VerifyLevel::Quick => &[1.0, 5.0],
        VerifyLevel::Full => &[0.5, 1.0, 5.0],
    };
    let mut worst: f64 = 0.0;
    for &x in xs {
        let cx = ThermalContext::from_x(x)?;
        // thermal headroom above the highest label occupation each pair hosts
        let headroom = (50.0 / x).ceil() as usize + 10;
        for (z1, z2) in [(c(0.0, 0.0), c(0.1, 0.0)), (c(0.1, 0.0), c(0.5, 0.2))] {
            let a = Su2Params::new(1, z1)?;
            let b = Su2Params::new(1, z2)?;
            let lhs = doubled_overlap_su2_factorized(&a, &b, &cx, 1 + headroom)?;
            worst = worst.max((lhs - overlap_su2(z1, z2, 1)).norm());
        }
        let label_cutoff = 24usize;
        for (w1, w2) in [(c(0.1, 0.0), c(0.2, 0.0)), (c(0.2, 0.1), c(0.3, 0.0))] {
            let a = Su11Params::new(0, w1)?;
            let b = Su11Params::new(0, w2)?;
            let lhs =
                doubled_overlap_su11_factorized(&a, &b, &cx, label_cutoff, label_cutoff + headroom)?;
            worst = worst.max((lhs - overlap_su11(w1, w2, 0)?).norm());
        }
    }
    s.check(
        "states.overlap_beta_independence",
        worst,
        tol::TOL_OVERLAP,
        "printed overlaps vs doubled-space inner products",
    );

    // su(1,1) coherent-weight normalization at the figure parameters
    let fig = Su11Params::new(3, c(0.1, 0.0))?;
    let total: f64 = (0..=400).map(|n| su11_coherent_weight(&fig, n)).sum();
    s.check(
        "states.su11_weight_normalization",
        (total - 1.0).abs(),
        1e-6,
        "coherent-index weights D(n) telescope to 1 by n = 400",
    );
    Ok(())
}

fn measures_checks(s: &mut Suite, level: VerifyLevel) -> Result<()> {
    let ctx = ThermalContext::from_x(1.0)?;

    // su(2) fidelity: closed form vs numeric, and the sqrt reading
    let p_half = Su2Params::new(1, c(0.1, 0.0))?;
    let f_num = fidelity_su2_numeric(&p_half, &ctx, 30)?;
    let f_closed = fidelity_su2_closed(1, &ctx);
    s.check(
        "measures.fidelity_su2_agreement",
        (f_num - f_closed).abs(),
        1e-8,
        "sqrt(<z|rho|z>) vs (1-e^{-x})^{j+1} at (j=1/2, z=0.1, x=1)",
    );
    let fig_ctx = ThermalContext::from_physical(1e7, 0.005)?;
    let p3 = Su2Params::new(6, c(0.1, 0.0))?;
    let f_num_fig = fidelity_su2_numeric(&p3, &fig_ctx, 40)?;
    let f_closed_fig = fidelity_su2_closed(6, &fig_ctx);
    s.check(
        "measures.fidelity_su2_figure_params",
        (f_num_fig - f_closed_fig).abs(),
        1e-8,
        "same at (j=3, x=0.015276)",
    );
    s.finding(
        "fidelity_sqrt_su2",
        format!(
            "the printed F = (1-e^(-x))^(j+1) matches sqrt(<z|rho|z>) to {:.2e} (and the \
             unsquared form differs by {:.2e}): the printed su(2) expression already \
             includes the square root of the definition",
            (f_num - f_closed).abs(),
            (f_num * f_num - f_closed).abs()
        ),
    );

    // su(1,1) fidelity: series vs numeric, and the missing sqrt
    let p11 = Su11Params::new(0, c(0.2, 0.0))?;
    let series = fidelity_su11_series(&p11, &ctx, 1e-12)?;
    let numeric = fidelity_su11_numeric(&p11, &ctx, 30)?;
    s.check(
        "measures.fidelity_su11_agreement",
        (series.value - numeric).abs(),
        1e-7,
        "sqrt(printed series) vs sqrt(<zeta|rho|zeta>) at (q=0, zeta=0.2, x=1)",
    );
    s.finding(
        "fidelity_sqrt_su11",
        format!(
            "the printed su(1,1) series evaluates <zeta|rho|zeta> = F^2 directly \
             (series vs quadratic form gap {:.2e}); unlike su(2), it does NOT include \
             the square root, so the library returns sqrt(series)",
            (series.quadratic_form - numeric * numeric).abs()
        ),
    );

    // Wigner: vacuum anchor and closed-vs-numeric orientation findings
    let space = FockSpace::new(2, 4)?;
    let vac = crate::fock::DensityOperator::from_pure(&PureState::basis_state(space, &[0, 0]));
    let origin = WignerPoint { q1: 0.0, p1: 0.0, q2: 0.0, p2: 0.0 };
    s.check(
        "measures.wigner_vacuum_anchor",
        (wigner_numeric(&vac, &origin, 1.0)? - VACUUM_ORIGIN_RAW).abs(),
        1e-12,
        "raw-convention vacuum origin value 4",
    );

    let n_points = if level == VerifyLevel::Full { 20 } else { 4 };
    let rho2 = rho_su2(&p_half, &ctx, 25, 1e-9)?.rho;
    let eval2 = Su2WignerEvaluator::new(&p_half, &ctx, 1.0, 1e-10, ChiOrientation::Oracle)?;
    let mut rng = SplitMix64(0xC0FFEE);
    let mut worst_rel: f64 = 0.0;
    for _ in 0..n_points {
        let pt = WignerPoint {
            q1: rng.uniform(-2.0, 2.0),
            p1: rng.uniform(-2.0, 2.0),
            q2: rng.uniform(-2.0, 2.0),
            p2: rng.uniform(-2.0, 2.0),
        };
        let closed = eval2.eval(&pt)?;
        let numeric = wigner_numeric(&rho2, &pt, 1.0)?;
        worst_rel = worst_rel.max((closed.value - numeric).abs() / numeric.abs().max(1e-12));
    }
    s.check(
        "measures.wigner_su2_oracle",
        worst_rel,
        tol::TOL_WIGNER_REL,
        format!("closed form vs numeric transform, {n_points} random points"),
    );

    let rho11 = rho_su11(&p11, &ctx, 25, 1e-9)?.rho;
    let eval11 = Su11WignerEvaluator::new(&p11, &ctx, 1.0, 1e-10, ChiOrientation::Oracle)?;
    let mut worst_rel: f64 = 0.0;
    for _ in 0..n_points {
        let pt = WignerPoint {
            q1: rng.uniform(-2.0, 2.0),
            p1: rng.uniform(-2.0, 2.0),
            q2: rng.uniform(-2.0, 2.0),
            p2: rng.uniform(-2.0, 2.0),
        };
        let closed = eval11.eval(&pt)?;
        let numeric = wigner_numeric(&rho11, &pt, 1.0)?;
        worst_rel = worst_rel.max((closed.value - numeric).abs() / numeric.abs().max(1e-12));
    }
    s.check(
        "measures.wigner_su11_oracle",
        worst_rel,
        tol::TOL_WIGNER_REL,
        format!("closed form vs numeric transform, {n_points} random points"),
    );

    // chi orientation findings
    let pt = WignerPoint { q1: 0.9, p1: 0.3, q2: 0.8, p2: -0.4 };
    let p_complex = Su2Params::new(2, c(0.3, 0.2))?;
    let rho_cx = rho_su2(&p_complex, &ctx, 22, 1e-6)?.rho;
    let oracle_v =
        Su2WignerEvaluator::new(&p_complex, &ctx, 1.0, 1e-9, ChiOrientation::Oracle)?.eval(&pt)?;
    let printed_v =
        Su2WignerEvaluator::new(&p_complex, &ctx, 1.0, 1e-9, ChiOrientation::Printed)?.eval(&pt)?;
    let numeric_v = wigner_numeric(&rho_cx, &pt, 1.0)?;
    s.finding(
        "chi_orientation_su2",
        format!(
            "su(2): at a complex label z = 0.3+0.2i the printed chi ordering deviates from \
             the numeric Wigner transform by {:.2e} (relative) while the kernel orientation \
             matches to {:.2e}; for real z both coincide. Default: oracle orientation",
            (printed_v.value - numeric_v).abs() / numeric_v.abs().max(1e-12),
            (oracle_v.value - numeric_v).abs() / numeric_v.abs().max(1e-12),
        ),
    );
    let pt11 = WignerPoint { q1: 0.9, p1: 0.0, q2: 0.8, p2: 0.0 };
    let printed11 =
        Su11WignerEvaluator::new(&p11, &ctx, 1.0, 1e-9, ChiOrientation::Printed)?.eval(&pt11)?;
    let oracle11 =
        Su11WignerEvaluator::new(&p11, &ctx, 1.0, 1e-9, ChiOrientation::Oracle)?.eval(&pt11)?;
    let numeric11 = wigner_numeric(&rho11, &pt11, 1.0)?;
    s.finding(
        "chi_orientation_su11",
        format!(
            "su(1,1): the printed chi (with the published su(2) ordering rule) deviates \
             from the numeric Wigner transform by {:.2e} (relative) even for real zeta; \
             the kernel orientation matches to {:.2e}. Default: oracle orientation",
            (printed11.value - numeric11).abs() / numeric11.abs().max(1e-12),
            (oracle11.value - numeric11).abs() / numeric11.abs().max(1e-12),
        ),
    );

    // chi printed-product sanity (the published combined product itself)
    let x1 = c(0.4, 0.3);
    let x2 = c(-0.2, 0.6);
    let v = chi_factor(-1, 1, x1, x2) - (-x2 * x1.conj()).powu(2);
    s.check(
        "measures.chi_printed_product",
        v.norm(),
        1e-15,
        "chi combined product matches its defining cases",
    );

    // reality of the closed-form sum
    s.check(
        "measures.wigner_reality",
        eval2.eval(&WignerPoint { q1: 1.3, p1: -0.7, q2: 0.4, p2: 0.9 })?.im_residual,
        tol::TOL_WIGNER_IM,
        "imaginary residual of the closed-form sum",
    );
    Ok(())
}

fn full_extras(s: &mut Suite) -> Result<()> {
    // over-completeness quadrature
    for tj in [1u32, 2, 6] {
        let r = identity_resolution_su2(tj, 64, 64)?;
        s.check(
            &format!("states.identity_resolution_2j{tj}"),
            r,
            tol::TOL_RESOLUTION,
            "quadrature resolution of identity at 64x64 nodes",
        );
    }
    let ctx5 = ThermalContext::from_x(5.0)?;
    let plain = identity_resolution_su2(1, 16, 16)?;
    let thermal = identity_resolution_su2_thermal(1, &ctx5, 5, 16, 16)?;
    s.check(
        "states.identity_resolution_thermal",
        (plain - thermal).abs(),
        1e-9,
        "conjugation by the unitary oracle leaves the residual unchanged",
    );

    // fidelity scan: closed vs numeric over an x sweep
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let x = 0.1 * (10.0f64 / 0.1).powf(i as f64 / 49.0);
        let cx = ThermalContext::from_x(x)?;
        let p = Su2Params::new(2, c(0.3, 0.0))?;
        let f_num = fidelity_su2_numeric(&p, &cx, 24)?;
        worst = worst.max((f_num - fidelity_su2_closed(2, &cx)).abs());
    }
    s.check(
        "measures.fidelity_su2_scan",
        worst,
        1e-7,
        "closed vs numeric over 50 log-spaced x in [0.1, 10]",
    );

    // su(1,1) fidelity at the figure parameters
    let fig_ctx = ThermalContext::from_physical(1e7, 0.005)?;
    let fig_p = Su11Params::new(3, c(0.1, 0.0))?;
    let series = fidelity_su11_series(&fig_p, &fig_ctx, 1e-10)?;
    let numeric = fidelity_su11_numeric(&fig_p, &fig_ctx, 40)?;
    s.check(
        "measures.fidelity_su11_figure_params",
        (series.value - numeric).abs(),
        tol::TOL_FIDELITY_SU11,
        "series vs numeric at (q=3, zeta=0.1, x=0.015276)",
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_is_green() {
        let start = std::time::Instant::now();
        let report = run(VerifyLevel::Quick).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        for chk in &report.checks {
            assert!(
                chk.passed,
                "check {} failed: observed {:.3e} > {:.3e} ({})",
                chk.name, chk.observed, chk.threshold, chk.detail
            );
        }
        assert!(report.all_passed);
        assert!(!report.findings.is_empty());
        eprintln!(
            "verify quick: {} checks, {} findings, {elapsed:.1} s",
            report.checks.len(),
            report.findings.len()
        );
        assert!(elapsed < 60.0, "quick suite took {elapsed:.1} s");
    }
}
