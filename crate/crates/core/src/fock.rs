//! Truncated multi-mode Fock-space linear algebra.
//!
//! A [`FockSpace`] is the arena for everything else: occupation tuples
//! `(n_1, ..., n_k)` with `n_i <= cutoff`, indexed lexicographically with
//! the first mode as the most significant digit. Operators are stored
//! sparse (CSR) but have dense semantics; states are dense complex vectors.
//!
//! Truncation convention: `a^dagger |N_max> = 0`. All operator identities
//! therefore hold exactly only on the truncation interior (occupations at
//! least one below the cutoff); tests and certificates account for this.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{CosetError, Result};
use crate::tol::DEFAULT_MAX_DIM;

/// Truncated multi-mode bosonic occupation basis with a deterministic,
/// stable index ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    num_modes: usize,
    cutoff: usize,
    dim: usize,
}

static GLOBAL_MAX_DIM: std::sync::atomic::AtomicUsize =
    std::sync::atomic::AtomicUsize::new(DEFAULT_MAX_DIM);

/// Override the process-wide default dimension cap (what the CLI does for
/// THERMAL_COSET_MAX_DIM). Explicit `with_max_dim` calls are unaffected.
pub fn set_default_max_dim(cap: usize) {
    GLOBAL_MAX_DIM.store(cap, std::sync::atomic::Ordering::Relaxed);
}

/// The current process-wide default dimension cap.
pub fn default_max_dim() -> usize {
    GLOBAL_MAX_DIM.load(std::sync::atomic::Ordering::Relaxed)
}

impl FockSpace {
    /// Build a space with the default dimension cap.
    pub fn new(num_modes: usize, cutoff: usize) -> Result<Self> {
        Self::with_max_dim(num_modes, cutoff, default_max_dim())
    }

    /// Build a space with an explicit dimension cap.
    pub fn with_max_dim(num_modes: usize, cutoff: usize, max_dim: usize) -> Result<Self> {
        if num_modes == 0 || num_modes > 4 {
            return Err(CosetError::InvalidParameter(format!(
                "num_modes must be in 1..=4, got {num_modes}"
            )));
        }
        if cutoff == 0 {
            return Err(CosetError::InvalidParameter("cutoff must be >= 1".into()));
        }
        let base = cutoff + 1;
        let mut dim: usize = 1;
        for _ in 0..num_modes {
            dim = dim
                .checked_mul(base)
                .ok_or(CosetError::DimensionCap { dim: usize::MAX, cap: max_dim })?;
        }
        if dim > max_dim {
            return Err(CosetError::DimensionCap { dim, cap: max_dim });
        }
        Ok(Self { num_modes, cutoff, dim })
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    /// Per-mode maximum occupation (inclusive).
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stride of `mode` in the index encoding (mode 0 is most significant).
    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow((self.num_modes - 1 - mode) as u32)
    }

    /// Basis index of an occupation tuple.
    pub fn index_of(&self, occ: &[usize]) -> usize {
        debug_assert_eq!(occ.len(), self.num_modes);
        let mut idx = 0;
        for &n in occ {
            debug_assert!(n <= self.cutoff);
            idx = idx * (self.cutoff + 1) + n;
        }
        idx
    }

    /// Occupation tuple of a basis index.
    pub fn occupation(&self, mut idx: usize) -> Vec<usize> {
        let base = self.cutoff + 1;
        let mut occ = vec![0; self.num_modes];
        for mode in (0..self.num_modes).rev() {
            occ[mode] = idx % base;
            idx /= base;
        }
        occ
    }

    /// Occupation of a single mode at a basis index.
    pub fn occ_digit(&self, idx: usize, mode: usize) -> usize {
        (idx / self.stride(mode)) % (self.cutoff + 1)
    }

    /// The doubled space: same cutoff, twice the modes (physical first,
    /// tilde partners second; tilde partner of mode `i` is `k + i`).
    pub fn doubled(&self) -> Result<FockSpace> {
        Self::new(2 * self.num_modes, self.cutoff)
    }

    /// The doubled space under an explicit cap.
    pub fn doubled_with_max_dim(&self, max_dim: usize) -> Result<FockSpace> {
        Self::with_max_dim(2 * self.num_modes, self.cutoff, max_dim)
    }

    fn describe(&self) -> String {
        format!("{} modes, cutoff {}", self.num_modes, self.cutoff)
    }

    fn check_same(&self, other: &FockSpace) -> Result<()> {
        if self != other {
            return Err(CosetError::SpaceMismatch {
                left: self.describe(),
                right: other.describe(),
            });
        }
        Ok(())
    }
}

/// Complex amplitude vector over a [`FockSpace`] basis.
#[derive(Debug, Clone)]
pub struct PureState {
    space: FockSpace,
    amp: Vec<Complex64>,
}

impl PureState {
    pub fn zero(space: FockSpace) -> Self {
        Self { space, amp: vec![Complex64::ZERO; space.dim()] }
    }

    /// Basis state |n_1, ..., n_k>.
    pub fn basis_state(space: FockSpace, occ: &[usize]) -> Self {
        let mut s = Self::zero(space);
        s.amp[space.index_of(occ)] = Complex64::ONE;
        s
    }

    pub fn from_amplitudes(space: FockSpace, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != space.dim() {
            return Err(CosetError::InvalidParameter(format!(
                "amplitude vector length {} != space dimension {}",
                amp.len(),
                space.dim()
            )));
        }
        Ok(Self { space, amp })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn amp(&self, occ: &[usize]) -> Complex64 {
        self.amp[self.space.index_of(occ)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in &mut self.amp {
            *a *= c;
        }
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.scale(Complex64::new(1.0 / n, 0.0));
        }
        self
    }

    pub fn add_scaled(&mut self, other: &PureState, c: Complex64) {
        debug_assert_eq!(self.space, other.space);
        for (a, b) in self.amp.iter_mut().zip(&other.amp) {
            *a += c * b;
        }
    }

    /// Embed a state on `k` physical modes into a doubled `2k`-mode space,
    /// with all tilde modes in vacuum.
    pub fn embed_physical(&self, doubled: FockSpace) -> Result<PureState> {
        if doubled.num_modes() != 2 * self.space.num_modes()
            || doubled.cutoff() != self.space.cutoff()
        {
            return Err(CosetError::SpaceMismatch {
                left: self.space.describe(),
                right: doubled.describe(),
            });
        }
        let tilde_dim = self.space.dim();
        let mut out = PureState::zero(doubled);
        for (a, &v) in self.amp.iter().enumerate() {
            out.amp[a * tilde_dim] = v;
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        self.amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Restrict to a space with the same mode count and a smaller cutoff,
    /// dropping amplitudes beyond it.
    pub fn project_to(&self, target: FockSpace) -> Result<PureState> {
        if target.num_modes() != self.space.num_modes() || target.cutoff() > self.space.cutoff() {
            return Err(CosetError::SpaceMismatch {
                left: self.space.describe(),
                right: target.describe(),
            });
        }
        let mut out = PureState::zero(target);
        for idx in 0..target.dim() {
            let occ = target.occupation(idx);
            out.amp[idx] = self.amp[self.space.index_of(&occ)];
        }
        Ok(out)
    }

    pub(crate) fn amp_mut(&mut self) -> &mut [Complex64] {
        &mut self.amp
    }
}

/// Sesquilinear inner product, conjugate-linear in the first argument.
pub fn inner(phi: &PureState, psi: &PureState) -> Result<Complex64> {
    phi.space.check_same(&psi.space)?;
    Ok(phi
        .amp
        .iter()
        .zip(&psi.amp)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Lower,
    Raise,
}

/// Sparse operator (CSR) with dense semantics on a [`FockSpace`].
#[derive(Debug, Clone)]
pub struct Operator {
    space: FockSpace,
    indptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl Operator {
    pub fn zero(space: FockSpace) -> Self {
        Self { space, indptr: vec![0; space.dim() + 1], cols: Vec::new(), vals: Vec::new() }
    }

    pub fn identity(space: FockSpace) -> Self {
        let dim = space.dim();
        Self {
            space,
            indptr: (0..=dim).collect(),
            cols: (0..dim).collect(),
            vals: vec![Complex64::ONE; dim],
        }
    }

    /// Build from (row, col, value) triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(space: FockSpace, triplets: &[(usize, usize, Complex64)]) -> Self {
        let dim = space.dim();
        let mut per_row: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for &(r, c, v) in triplets {
            per_row[r].push((c, v));
        }
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        indptr.push(0);
        for row in &mut per_row {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut j = 0;
            while j < row.len() {
                let c = row[j].0;
                let mut v = Complex64::ZERO;
                while j < row.len() && row[j].0 == c {
                    v += row[j].1;
                    j += 1;
                }
                if v != Complex64::ZERO {
                    cols.push(c);
                    vals.push(v);
                }
            }
            indptr.push(cols.len());
        }
        Self { space, indptr, cols, vals }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.indptr[r]..self.indptr[r + 1]).map(move |i| (self.cols[i], self.vals[i]))
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        let lo = self.indptr[r];
        let hi = self.indptr[r + 1];
        match self.cols[lo..hi].binary_search(&c) {
            Ok(i) => self.vals[lo + i],
            Err(_) => Complex64::ZERO,
        }
    }

    /// Apply to a state: `A |psi>`.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        self.space.check_same(&psi.space)?;
        let mut out = PureState::zero(self.space);
        self.apply_into(&psi.amp, &mut out.amp);
        Ok(out)
    }

    fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for i in self.indptr[r]..self.indptr[r + 1] {
                acc += self.vals[i] * x[self.cols[i]];
            }
            *yr = acc;
        }
    }

    /// Conjugate transpose. Exact: `adjoint(adjoint(A)) == A` entrywise.
    pub fn adjoint(&self) -> Operator {
        let dim = self.space.dim();
        let mut counts = vec![0usize; dim + 1];
        for &c in &self.cols {
            counts[c + 1] += 1;
        }
        for i in 0..dim {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0usize; self.cols.len()];
        let mut vals = vec![Complex64::ZERO; self.vals.len()];
        let mut cursor = counts.clone();
        for r in 0..dim {
            for i in self.indptr[r]..self.indptr[r + 1] {
                let c = self.cols[i];
                let dst = cursor[c];
                cols[dst] = r;
                vals[dst] = self.vals[i].conj();
                cursor[c] += 1;
            }
        }
        // rows come out sorted because source rows are scanned in order
        Operator { space: self.space, indptr: counts, cols, vals }
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        let dim = self.space.dim();
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        indptr.push(0);
        for r in 0..dim {
            let mut ia = self.indptr[r];
            let mut ib = other.indptr[r];
            let ea = self.indptr[r + 1];
            let eb = other.indptr[r + 1];
            while ia < ea || ib < eb {
                let (c, v) = if ib >= eb || (ia < ea && self.cols[ia] < other.cols[ib]) {
                    let t = (self.cols[ia], self.vals[ia]);
                    ia += 1;
                    t
                } else if ia >= ea || other.cols[ib] < self.cols[ia] {
                    let t = (other.cols[ib], other.vals[ib]);
                    ib += 1;
                    t
                } else {
                    let t = (self.cols[ia], self.vals[ia] + other.vals[ib]);
                    ia += 1;
                    ib += 1;
                    t
                };
                if v != Complex64::ZERO {
                    cols.push(c);
                    vals.push(v);
                }
            }
            indptr.push(cols.len());
        }
        Ok(Operator { space: self.space, indptr, cols, vals })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.add(&other.scale(-Complex64::ONE))
    }

    /// Sparse product `A * B`.
    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        self.space.check_same(&other.space)?;
        let dim = self.space.dim();
        let mut scratch = vec![Complex64::ZERO; dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        indptr.push(0);
        for r in 0..dim {
            for (k, a) in self.row(r) {
                if a == Complex64::ZERO {
                    continue;
                }
                for (c, b) in other.row(k) {
                    if scratch[c] == Complex64::ZERO {
                        touched.push(c);
                    }
                    scratch[c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                let v = scratch[c];
                scratch[c] = Complex64::ZERO;
                if v != Complex64::ZERO {
                    cols.push(c);
                    vals.push(v);
                }
            }
            touched.clear();
            indptr.push(cols.len());
        }
        Ok(Operator { space: self.space, indptr, cols, vals })
    }

    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Max row sum of absolute values (infinity norm); used as the scaling
    /// estimate in [`apply_exponential`].
    pub fn inf_norm(&self) -> f64 {
        let dim = self.space.dim();
        (0..dim)
            .map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        let mut m: f64 = 0.0;
        let dim = self.space.dim();
        for r in 0..dim {
            let mut ia = self.indptr[r];
            let mut ib = other.indptr[r];
            let ea = self.indptr[r + 1];
            let eb = other.indptr[r + 1];
            while ia < ea || ib < eb {
                let d = if ib >= eb || (ia < ea && self.cols[ia] < other.cols[ib]) {
                    let v = self.vals[ia].norm();
                    ia += 1;
                    v
                } else if ia >= ea || other.cols[ib] < self.cols[ia] {
                    let v = other.vals[ib].norm();
                    ib += 1;
                    v
                } else {
                    let v = (self.vals[ia] - other.vals[ib]).norm();
                    ia += 1;
                    ib += 1;
                    v
                };
                m = m.max(d);
            }
        }
        m
    }
}

/// Ladder operator on one mode. `a |n> = sqrt(n) |n-1>`,
/// `a^dagger |n> = sqrt(n+1) |n+1>`, with `a^dagger |N_max> = 0`.
pub fn ladder(space: FockSpace, mode: usize, kind: LadderKind) -> Result<Operator> {
    if mode >= space.num_modes() {
        return Err(CosetError::InvalidParameter(format!(
            "mode {mode} out of range for {} modes",
            space.num_modes()
        )));
    }
    let stride = space.stride(mode);
    let mut triplets = Vec::new();
    for idx in 0..space.dim() {
        let n = space.occ_digit(idx, mode);
        match kind {
            LadderKind::Lower => {
                if n >= 1 {
                    // row index has occupation n-1
                    triplets.push((idx - stride, idx, Complex64::new((n as f64).sqrt(), 0.0)));
                }
            }
            LadderKind::Raise => {
                if n < space.cutoff() {
                    triplets.push((idx + stride, idx, Complex64::new(((n + 1) as f64).sqrt(), 0.0)));
                }
            }
        }
    }
    Ok(Operator::from_triplets(space, &triplets))
}

/// Number operator `a^dagger a` on one mode (diagonal).
pub fn number_op(space: FockSpace, mode: usize) -> Result<Operator> {
    if mode >= space.num_modes() {
        return Err(CosetError::InvalidParameter(format!(
            "mode {mode} out of range for {} modes",
            space.num_modes()
        )));
    }
    let triplets: Vec<_> = (0..space.dim())
        .filter_map(|idx| {
            let n = space.occ_digit(idx, mode);
            (n > 0).then(|| (idx, idx, Complex64::new(n as f64, 0.0)))
        })
        .collect();
    Ok(Operator::from_triplets(space, &triplets))
}

pub const DEFAULT_MAX_EXP_TERMS: usize = 5_000;

/// Apply `exp(A)` to a state by scaled Taylor series on the vector.
///
/// The dense exponential is never formed. When the operator norm estimate
/// exceeds 1 the application is split into `2^s` halved steps. Each step
/// terminates once the added-term norm drops below `tol * |result|` and
/// stays there for two further confirming terms; running out of terms is
/// an explicit error, never a silent truncation.
pub fn apply_exponential(op: &Operator, psi: &PureState, tol: f64) -> Result<PureState> {
    apply_exponential_with(op, psi, tol, DEFAULT_MAX_EXP_TERMS)
}

pub fn apply_exponential_with(
    op: &Operator,
    psi: &PureState,
    tol: f64,
    max_terms: usize,
) -> Result<PureState> {
    op.space.check_same(&psi.space)?;
    if !(tol > 0.0) {
        return Err(CosetError::InvalidParameter("tol must be > 0".into()));
    }
    let nrm = op.inf_norm();
    let segments: usize = if nrm > 1.0 { 1 << (nrm.log2().ceil() as u32) } else { 1 };
    let scaled = if segments > 1 {
        op.scale(Complex64::new(1.0 / segments as f64, 0.0))
    } else {
        op.clone()
    };

    let mut current = psi.clone();
    let mut term = PureState::zero(op.space);
    let mut next = PureState::zero(op.space);
    for _ in 0..segments {
        term.amp_mut().copy_from_slice(current.amplitudes());
        let mut result = current.clone();
        let mut confirmed = 0usize;
        let mut converged = false;
        let mut residual = f64::INFINITY;
        for k in 1..=max_terms {
            scaled.apply_into(term.amplitudes(), next.amp_mut());
            let inv_k = Complex64::new(1.0 / k as f64, 0.0);
            for a in next.amp_mut() {
                *a *= inv_k;
            }
            std::mem::swap(&mut term, &mut next);
            result.add_scaled(&term, Complex64::ONE);
            residual = term.norm();
            if residual < tol * result.norm() {
                confirmed += 1;
                if confirmed >= 3 {
                    converged = true;
                    break;
                }
            } else {
                confirmed = 0;
            }
        }
        if !converged {
            return Err(CosetError::NonConvergence { max_terms, residual });
        }
        current = result;
    }
    Ok(current)
}

/// Hermitian, banded-or-dense density operator on a physical-mode space.
///
/// Entries are stored sparsely in deterministic `(row, col)` order; the
/// semantics are dense.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    space: FockSpace,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl DensityOperator {
    pub fn zero(space: FockSpace) -> Self {
        Self { space, entries: BTreeMap::new() }
    }

    /// Pure-state projector |psi><psi|.
    pub fn from_pure(psi: &PureState) -> Self {
        let mut entries = BTreeMap::new();
        let amp = psi.amplitudes();
        for (r, &ar) in amp.iter().enumerate() {
            if ar == Complex64::ZERO {
                continue;
            }
            for (c, &ac) in amp.iter().enumerate() {
                let v = ar * ac.conj();
                if v != Complex64::ZERO {
                    entries.insert((r, c), v);
                }
            }
        }
        Self { space: psi.space(), entries }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries.get(&(r, c)).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn accumulate(&mut self, r: usize, c: usize, v: Complex64) {
        if v != Complex64::ZERO {
            *self.entries.entry((r, c)).or_insert(Complex64::ZERO) += v;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// Max entrywise |rho - rho^dagger|.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut m: f64 = 0.0;
        for (&(r, c), &v) in &self.entries {
            let vt = self.entry(c, r);
            m = m.max((v - vt.conj()).norm() / 2.0 * 2.0);
        }
        m
    }

    /// <psi| rho |psi>.
    pub fn quadratic_form(&self, psi: &PureState) -> Result<Complex64> {
        self.space.check_same(&psi.space)?;
        let amp = psi.amplitudes();
        let mut acc = Complex64::ZERO;
        for (&(r, c), &v) in &self.entries {
            acc += amp[r].conj() * v * amp[c];
        }
        Ok(acc)
    }

    /// tr(rho A).
    pub fn expectation(&self, op: &Operator) -> Result<Complex64> {
        self.space.check_same(&op.space)?;
        let mut acc = Complex64::ZERO;
        for (&(r, c), &v) in &self.entries {
            acc += v * op.entry(c, r);
        }
        Ok(acc)
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        let mut m: f64 = 0.0;
        for (&(r, c), &v) in &self.entries {
            m = m.max((v - other.entry(r, c)).norm());
        }
        for (&(r, c), &v) in &other.entries {
            m = m.max((v - self.entry(r, c)).norm());
        }
        m
    }

    /// Max entrywise distance to a pure projector |psi><psi|.
    pub fn max_abs_diff_pure(&self, psi: &PureState) -> f64 {
        self.max_abs_diff(&DensityOperator::from_pure(psi))
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut m = vec![Complex64::ZERO; d * d];
        for (&(r, c), &v) in &self.entries {
            m[r * d + c] = v;
        }
        m
    }

    /// Certify positive semidefiniteness up to `-tol` on the smallest
    /// eigenvalue: attempts a Cholesky factorization of `rho + tol * I`.
    /// Success proves every eigenvalue of `rho` is `>= -tol`.
    pub fn is_psd_within(&self, tol: f64) -> bool {
        let d = self.dim();
        let mut a = self.to_dense();
        for i in 0..d {
            a[i * d + i] += Complex64::new(tol, 0.0);
        }
        cholesky_in_place(&mut a, d)
    }
}

/// In-place Cholesky; returns false on a non-positive pivot.
fn cholesky_in_place(a: &mut [Complex64], d: usize) -> bool {
    for j in 0..d {
        let mut diag = a[j * d + j].re;
        for k in 0..j {
            diag -= a[j * d + k].norm_sqr();
        }
        if diag <= 0.0 || !diag.is_finite() {
            return false;
        }
        let diag = diag.sqrt();
        a[j * d + j] = Complex64::new(diag, 0.0);
        for i in (j + 1)..d {
            let mut v = a[i * d + j];
            for k in 0..j {
                v -= a[i * d + k] * a[j * d + k].conj();
            }
            a[i * d + j] = v / diag;
        }
    }
    true
}

/// Reduce a pure state on a doubled space over its tilde half:
/// `rho_ab = sum_t psi_{a,t} conj(psi_{b,t})`. Hermitian by construction.
pub fn partial_trace_tilde(psi: &PureState) -> Result<DensityOperator> {
    let space = psi.space();
    if space.num_modes() % 2 != 0 {
        return Err(CosetError::OddModeCount(space.num_modes()));
    }
    let k = space.num_modes() / 2;
    let phys = FockSpace::with_max_dim(k, space.cutoff(), usize::MAX)?;
    let t_dim = phys.dim();
    let amp = psi.amplitudes();
    let mut rho = DensityOperator::zero(phys);
    for a in 0..t_dim {
        let row_a = &amp[a * t_dim..(a + 1) * t_dim];
        for b in a..t_dim {
            let row_b = &amp[b * t_dim..(b + 1) * t_dim];
            let mut acc = Complex64::ZERO;
            for (x, y) in row_a.iter().zip(row_b) {
                acc += x * y.conj();
            }
            if acc != Complex64::ZERO {
                rho.entries.insert((a, b), acc);
                if a != b {
                    rho.entries.insert((b, a), acc.conj());
                }
            }
        }
    }
    Ok(rho)
}

/// tr(rho), as an operation on its own per the module surface.
pub fn trace(rho: &DensityOperator) -> Complex64 {
    rho.trace()
}

/// tr(rho A).
pub fn expectation(rho: &DensityOperator, op: &Operator) -> Result<Complex64> {
    rho.expectation(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn space_dimensions_and_order() {
        let s = FockSpace::new(1, 2).unwrap();
        assert_eq!(s.dim(), 3);
        let s = FockSpace::new(2, 1).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.index_of(&[0, 0]), 0);
        assert_eq!(s.index_of(&[0, 1]), 1);
        assert_eq!(s.index_of(&[1, 0]), 2);
        assert_eq!(s.index_of(&[1, 1]), 3);
        let s = FockSpace::new(4, 30).unwrap();
        assert_eq!(s.dim(), 923_521);
    }

    #[test]
    fn space_index_bijection() {
        let s = FockSpace::new(3, 4).unwrap();
        for idx in 0..s.dim() {
            let occ = s.occupation(idx);
            assert_eq!(s.index_of(&occ), idx);
            for (m, &n) in occ.iter().enumerate() {
                assert_eq!(s.occ_digit(idx, m), n);
            }
        }
    }

    #[test]
    fn space_rejects_bad_arguments() {
        assert!(FockSpace::new(0, 3).is_err());
        assert!(FockSpace::new(5, 3).is_err());
        assert!(FockSpace::new(1, 0).is_err());
        // 101^4 > 10^7
        assert!(matches!(
            FockSpace::new(4, 100),
            Err(CosetError::DimensionCap { .. })
        ));
        assert!(FockSpace::with_max_dim(4, 100, 200_000_000).is_ok());
    }

    #[test]
    fn ladder_action() {
        let s = FockSpace::new(1, 5).unwrap();
        let a = ladder(s, 0, LadderKind::Lower).unwrap();
        let n3 = PureState::basis_state(s, &[3]);
        let out = a.apply(&n3).unwrap();
        assert!((out.amp(&[2]) - c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((out.norm_sq() - 3.0).abs() < 1e-14);

        let vacuum = PureState::basis_state(s, &[0]);
        assert_eq!(a.apply(&vacuum).unwrap().norm(), 0.0);

        assert!(ladder(s, 1, LadderKind::Lower).is_err());
    }

    #[test]
    fn ladder_adjoint_is_raise() {
        let s = FockSpace::new(2, 6).unwrap();
        for mode in 0..2 {
            let a = ladder(s, mode, LadderKind::Lower).unwrap();
            let adag = ladder(s, mode, LadderKind::Raise).unwrap();
            assert_eq!(a.adjoint().max_abs_diff(&adag), 0.0);
            assert_eq!(adag.adjoint().max_abs_diff(&a), 0.0);
        }
    }

    #[test]
    fn commutator_is_identity_on_interior() {
        let s = FockSpace::new(1, 8).unwrap();
        let a = ladder(s, 0, LadderKind::Lower).unwrap();
        let adag = ladder(s, 0, LadderKind::Raise).unwrap();
        let comm = a.commutator(&adag).unwrap();
        for m in 0..s.dim() {
            for n in 0..s.dim() {
                let expected = if m == n && n < s.cutoff() { 1.0 } else { 0.0 };
                // the commutator fails only at the truncation edge n = N_max
                if n < s.cutoff() && m < s.cutoff() {
                    assert!((comm.entry(m, n) - c(expected, 0.0)).norm() < 1e-14);
                }
            }
        }
        // edge: <N|[a,adag]|N> = -N, not 1
        let edge = comm.entry(s.cutoff(), s.cutoff());
        assert!((edge.re + s.cutoff() as f64).abs() < 1e-12);
    }

    #[test]
    fn adjoint_involution_exact() {
        let s = FockSpace::new(2, 3).unwrap();
        let a = ladder(s, 0, LadderKind::Lower).unwrap();
        let b = ladder(s, 1, LadderKind::Raise).unwrap();
        let m = a.matmul(&b).unwrap().scale(c(0.3, -0.7));
        assert_eq!(m.adjoint().adjoint().max_abs_diff(&m), 0.0);
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let s = FockSpace::new(1, 6).unwrap();
        let z = Operator::zero(s);
        let psi = PureState::basis_state(s, &[2]);
        let out = apply_exponential(&z, &psi, 1e-12).unwrap();
        assert!(out.max_abs_diff(&psi) < 1e-15);
    }

    #[test]
    fn exponential_displacement_matches_glauber() {
        // exp(alpha a^dag - alpha^* a)|0> has amplitudes
        // e^{-|alpha|^2/2} alpha^n / sqrt(n!)
        let s = FockSpace::new(1, 25).unwrap();
        let alpha = c(0.3, 0.0);
        let adag = ladder(s, 0, LadderKind::Raise).unwrap();
        let a = ladder(s, 0, LadderKind::Lower).unwrap();
        let gen = adag.scale(alpha).sub(&a.scale(alpha.conj())).unwrap();
        let out = apply_exponential(&gen, &PureState::basis_state(s, &[0]), 1e-14).unwrap();
        let mut expected = c((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        let mut fact = 1.0;
        for n in 0..=25usize {
            if n > 0 {
                fact *= n as f64;
                expected *= alpha;
            }
            let reference = expected / fact.sqrt() * fact.sqrt() / fact.sqrt();
            let _ = reference;
            let want = c((-alpha.norm_sqr() / 2.0).exp(), 0.0) * alpha.powu(n as u32)
                / (1..=n).map(|k| k as f64).product::<f64>().sqrt();
            assert!(
                (out.amp(&[n]) - want).norm() < 1e-10,
                "n={n}: {} vs {}",
                out.amp(&[n]),
                want
            );
        }
    }

    #[test]
    fn exponential_preserves_norm_for_anti_hermitian() {
        let s = FockSpace::new(2, 7).unwrap();
        let a0 = ladder(s, 0, LadderKind::Lower).unwrap();
        let a1dag = ladder(s, 1, LadderKind::Raise).unwrap();
        let m = a1dag.matmul(&a0).unwrap().scale(c(0.4, 0.9));
        let gen = m.sub(&m.adjoint()).unwrap(); // anti-Hermitian
        let psi = PureState::basis_state(s, &[3, 1]);
        let out = apply_exponential(&gen, &psi, 1e-12).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exponential_nonconvergence_is_explicit() {
        let s = FockSpace::new(1, 10).unwrap();
        let big = ladder(s, 0, LadderKind::Raise).unwrap().scale(c(50.0, 0.0));
        let psi = PureState::basis_state(s, &[0]);
        let err = apply_exponential_with(&big, &psi, 1e-12, 3);
        assert!(matches!(err, Err(CosetError::NonConvergence { .. })));
    }

    #[test]
    fn partial_trace_product_state() {
        let s = FockSpace::new(2, 3).unwrap(); // 1 physical + 1 tilde
        let psi = PureState::basis_state(s, &[2, 1]);
        let rho = partial_trace_tilde(&psi).unwrap();
        assert_eq!(rho.dim(), 4);
        assert!((rho.entry(2, 2) - Complex64::ONE).norm() < 1e-15);
        assert!((rho.trace() - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_correlated_pair() {
        let s = FockSpace::new(2, 1).unwrap();
        let mut psi = PureState::zero(s);
        let r = c(1.0 / 2f64.sqrt(), 0.0);
        psi.amp_mut()[s.index_of(&[0, 0])] = r;
        psi.amp_mut()[s.index_of(&[1, 1])] = r;
        let rho = partial_trace_tilde(&psi).unwrap();
        assert!((rho.entry(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((rho.entry(1, 1) - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(rho.entry(0, 1), Complex64::ZERO);
        assert!(rho.hermiticity_residual() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_odd_modes() {
        let s = FockSpace::new(3, 2).unwrap();
        let psi = PureState::basis_state(s, &[0, 0, 0]);
        assert!(matches!(
            partial_trace_tilde(&psi),
            Err(CosetError::OddModeCount(3))
        ));
    }

    #[test]
    fn partial_trace_trace_equals_norm_sq() {
        let s = FockSpace::new(2, 4).unwrap();
        let mut psi = PureState::zero(s);
        for (i, a) in psi.amp_mut().iter_mut().enumerate() {
            *a = c((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos());
        }
        let rho = partial_trace_tilde(&psi).unwrap();
        assert!((rho.trace().re - psi.norm_sq()).abs() < 1e-12 * psi.norm_sq());
        assert!(rho.trace().im.abs() < 1e-14 * psi.norm_sq());
        assert!(rho.hermiticity_residual() < 1e-14 * psi.norm_sq());
    }

    #[test]
    fn inner_product_basics() {
        let s = FockSpace::new(1, 3).unwrap();
        let mut psi = PureState::zero(s);
        psi.amp_mut()[0] = c(0.6, 0.0);
        psi.amp_mut()[1] = c(0.0, 0.8);
        let n = inner(&psi, &psi).unwrap();
        assert!((n.re - 1.0).abs() < 1e-15);
        assert!(n.im.abs() < 1e-16);

        // conjugate-linear in the first argument
        let phi = PureState::basis_state(s, &[1]);
        let v = inner(&phi, &psi).unwrap();
        assert!((v - c(0.0, 0.8)).norm() < 1e-15);

        let other = FockSpace::new(1, 4).unwrap();
        let q = PureState::basis_state(other, &[1]);
        assert!(inner(&phi, &q).is_err());
    }

    #[test]
    fn trace_of_projector() {
        let s = FockSpace::new(1, 4).unwrap();
        let rho = DensityOperator::from_pure(&PureState::basis_state(s, &[3]));
        assert!((trace(&rho) - Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn psd_certificate() {
        let s = FockSpace::new(1, 2).unwrap();
        let mut rho = DensityOperator::zero(s);
        rho.accumulate(0, 0, c(0.5, 0.0));
        rho.accumulate(1, 1, c(0.5, 0.0));
        assert!(rho.is_psd_within(1e-12));
        let mut bad = DensityOperator::zero(s);
        bad.accumulate(0, 0, c(-0.1, 0.0));
        assert!(!bad.is_psd_within(1e-9));
    }
}
