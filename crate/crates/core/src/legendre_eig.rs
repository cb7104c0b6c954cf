//! Reference eigenvalues `χ_n(γ)` from the symmetric tridiagonal operator
//! that the spheroidal equation induces on normalized Legendre coefficients.
//!
//! Even and odd eigenfunctions decouple; for parity `p` the operator acts on
//! the coefficients of `P_k`, `k = p + 2j`. Eigenvalues are isolated by
//! Sturm-count bisection in double precision, then polished with the same
//! count carried out in double-double arithmetic. The operator entries are
//! of size `γ²` while small eigenvalues are of size `γ`, so a plain double
//! count would leave a relative error of order `γ·ε₀`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dd::DoubleDouble;
use crate::EPS0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EigError {
    #[error("operator dimension must be at least 2, got {0}")]
    InvalidDim(usize),
    #[error("bandlimit must be finite and nonnegative, got {0}")]
    InvalidGamma(f64),
    #[error("operator has non-finite entries")]
    NonFinite,
    #[error("eigenvalue index {idx} out of range for dimension {dim}")]
    IndexOutOfRange { idx: usize, dim: usize },
    #[error("operator parts have inconsistent lengths ({diag} diagonal, {offdiag} off-diagonal)")]
    Shape { diag: usize, offdiag: usize },
    #[error(
        "chi_{n}({gamma}) did not converge after {enlargements} enlargements \
         (dim {dim}): last iterates {prev} and {last}"
    )]
    NotConverged { n: usize, gamma: f64, enlargements: usize, dim: usize, prev: f64, last: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Symmetric tridiagonal matrix; `offdiag[j]` couples rows `j` and `j+1`.
#[derive(Debug, Clone)]
pub struct TridiagonalOperator {
    pub parity: Parity,
    pub gamma: f64,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    // squared off-diagonal, double and double-double
    e2: Vec<f64>,
    diag_dd: Vec<DoubleDouble>,
    e2_dd: Vec<DoubleDouble>,
    // suffix bounds for the early exit of the Sturm recurrence
    suffix_min_diag: Vec<f64>,
    suffix_max_off: Vec<f64>,
}

impl TridiagonalOperator {
    /// Generic operator from explicit entries (parity and gamma are labels).
    pub fn from_entries(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, EigError> {
        if diag.len() < 2 {
            return Err(EigError::InvalidDim(diag.len()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(EigError::Shape { diag: diag.len(), offdiag: offdiag.len() });
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(EigError::NonFinite);
        }
        let e2_dd: Vec<DoubleDouble> = offdiag.iter().map(|&b| DoubleDouble::product(b, b)).collect();
        let diag_dd = diag.iter().map(|&a| DoubleDouble::from_f64(a)).collect();
        Ok(Self::assemble(Parity::Even, 0.0, diag, offdiag, diag_dd, e2_dd))
    }

    fn assemble(
        parity: Parity,
        gamma: f64,
        diag: Vec<f64>,
        offdiag: Vec<f64>,
        diag_dd: Vec<DoubleDouble>,
        e2_dd: Vec<DoubleDouble>,
    ) -> Self {
        let n = diag.len();
        let e2 = e2_dd.iter().map(|v| v.to_f64()).collect();
        let mut suffix_min_diag = alloc::vec![0.0; n + 1];
        suffix_min_diag[n] = f64::INFINITY;
        for i in (0..n).rev() {
            suffix_min_diag[i] = suffix_min_diag[i + 1].min(diag[i]);
        }
        let mut suffix_max_off = alloc::vec![0.0f64; n];
        for i in (0..n - 1).rev() {
            suffix_max_off[i] = suffix_max_off[i + 1].max(offdiag[i].abs());
        }
        Self { parity, gamma, diag, offdiag, e2, diag_dd, e2_dd, suffix_min_diag, suffix_max_off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Leading principal `m × m` block.
    pub fn leading(&self, m: usize) -> Result<Self, EigError> {
        if m < 2 || m > self.dim() {
            return Err(EigError::InvalidDim(m));
        }
        Ok(Self::assemble(
            self.parity,
            self.gamma,
            self.diag[..m].to_vec(),
            self.offdiag[..m - 1].to_vec(),
            self.diag_dd[..m].to_vec(),
            self.e2_dd[..m - 1].to_vec(),
        ))
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let pad = 4.0 * EPS0 * lo.abs().max(hi.abs()).max(1.0);
        (lo - pad, hi + pad)
    }

    fn pivmin(&self) -> f64 {
        f64::MIN_POSITIVE * self.e2.iter().fold(1.0f64, |m, &v| m.max(v))
    }

    /// Whether the recurrence may stop after row `i` with pivot `d`: every
    /// later pivot is then provably at least the largest remaining coupling.
    #[inline]
    fn tail_is_positive(&self, i: usize, d: f64, x: f64) -> bool {
        let b = self.suffix_max_off[i] * (1.0 + 1e-6);
        d > b && self.suffix_min_diag[i + 1] - x > 2.0 * b
    }

    /// Number of eigenvalues strictly below `x` (negative pivots of
    /// `T - xI = LDLᵀ`).
    pub fn sturm_count(&self, x: f64) -> usize {
        let n = self.dim();
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..n {
            d = if i == 0 { self.diag[0] - x } else { (self.diag[i] - x) - self.e2[i - 1] / d };
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            } else if i + 1 < n && self.tail_is_positive(i, d, x) {
                break;
            }
        }
        count
    }

    /// [`Self::sturm_count`] evaluated in double-double arithmetic.
    pub fn sturm_count_dd(&self, x: f64) -> usize {
        let n = self.dim();
        let pivmin = DoubleDouble::from_f64(-self.pivmin());
        let mut count = 0;
        let mut d = DoubleDouble::from_f64(1.0);
        for i in 0..n {
            let shifted = self.diag_dd[i].sub_f64(x);
            d = if i == 0 { shifted } else { shifted - self.e2_dd[i - 1] / d };
            if d.hi.abs() < -pivmin.hi {
                d = pivmin;
            }
            if d.is_negative() {
                count += 1;
            } else if i + 1 < n && self.tail_is_positive(i, d.hi, x) {
                break;
            }
        }
        count
    }
}

/// Operator for bandlimit `gamma` and the given parity, truncated to `dim`.
pub fn build_operator(gamma: f64, parity: Parity, dim: usize) -> Result<TridiagonalOperator, EigError> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(EigError::InvalidGamma(gamma));
    }
    if dim < 2 {
        return Err(EigError::InvalidDim(dim));
    }
    let g2 = DoubleDouble::product(gamma, gamma);
    let g4 = g2 * g2;
    let p = parity.offset();
    let mut diag_dd = Vec::with_capacity(dim);
    let mut e2_dd = Vec::with_capacity(dim - 1);
    for j in 0..dim {
        let k = (p + 2 * j) as f64;
        let kk1 = k * (k + 1.0);
        let ratio = DoubleDouble::from_f64(2.0 * kk1 - 1.0)
            / DoubleDouble::product(2.0 * k - 1.0, 2.0 * k + 3.0);
        diag_dd.push(DoubleDouble::from_f64(kk1) + g2 * ratio);
        if j + 1 < dim {
            let m = (k + 1.0) * (k + 2.0);
            let num = DoubleDouble::product(m, m);
            let den = DoubleDouble::product(2.0 * k + 3.0, 2.0 * k + 3.0)
                * DoubleDouble::product(2.0 * k + 1.0, 2.0 * k + 5.0);
            e2_dd.push(g4 * (num / den));
        }
    }
    let diag: Vec<f64> = diag_dd.iter().map(|v| v.to_f64()).collect();
    let offdiag: Vec<f64> = e2_dd.iter().map(|v| libm::sqrt(v.to_f64())).collect();
    if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
        return Err(EigError::NonFinite);
    }
    Ok(TridiagonalOperator::assemble(parity, gamma, diag, offdiag, diag_dd, e2_dd))
}

/// The `idx`-th smallest eigenvalue (0-based).
///
/// Double-precision bisection from the Gershgorin interval down to a bracket
/// of relative width `4ε₀`, followed by a double-double polish that narrows
/// the bracket to adjacent doubles.
pub fn eigenvalue_kth(op: &TridiagonalOperator, idx: usize) -> Result<f64, EigError> {
    let dim = op.dim();
    if idx >= dim {
        return Err(EigError::IndexOutOfRange { idx, dim });
    }
    let (mut lo, mut hi) = op.gershgorin();
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 4.0 * EPS0 * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            break;
        }
        if op.sturm_count(mid) > idx {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // Bracket verification with the accurate count; widen until it holds.
    let scale = op.diag.iter().map(|a| a.abs()).fold(0.0f64, f64::max)
        + 2.0 * op.offdiag.iter().map(|b| b.abs()).fold(0.0f64, f64::max);
    let (g_lo, g_hi) = op.gershgorin();
    let mut w = 16.0 * EPS0 * scale.max(1.0);
    let (mut a, mut b);
    loop {
        a = (lo - w).max(g_lo);
        b = (hi + w).min(g_hi);
        let ok_lo = a == g_lo || op.sturm_count_dd(a) <= idx;
        let ok_hi = b == g_hi || op.sturm_count_dd(b) > idx;
        if ok_lo && ok_hi {
            break;
        }
        w *= 4.0;
    }
    loop {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if op.sturm_count_dd(mid) > idx {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResult {
    pub chi: f64,
    pub dim_used: usize,
    pub converged: bool,
    /// Difference between the last two iterates.
    pub residual: f64,
}

/// Initial truncation for `chi_integer` (per parity class).
pub fn initial_dim(n: usize, gamma: f64) -> usize {
    let base = 50 + libm::floor(2.0 * n as f64 / PI) as usize + libm::floor(libm::sqrt(gamma * n as f64)) as usize;
    base.max(n / 2 + 10)
}

pub const MAX_ENLARGEMENTS: usize = 12;

/// `χ_n(γ)`, enlarging the truncation by half until two successive
/// eigenvalues agree to `2ε₀` relative.
pub fn chi_integer(n: usize, gamma: f64) -> Result<EigenResult, EigError> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(EigError::InvalidGamma(gamma));
    }
    let parity = Parity::of(n);
    let idx = n / 2;
    let mut dim = initial_dim(n, gamma);
    // The operator is positive semidefinite for γ ≥ 0; the pivot guard can
    // leave an exact zero eigenvalue a few subnormals below zero.
    let solve = |dim: usize| -> Result<f64, EigError> {
        Ok(eigenvalue_kth(&build_operator(gamma, parity, dim)?, idx)?.max(0.0))
    };
    let mut prev = solve(dim)?;
    for _ in 0..MAX_ENLARGEMENTS {
        dim += dim / 2;
        let chi = solve(dim)?;
        let diff = (chi - prev).abs();
        if diff <= 2.0 * EPS0 * chi.abs() || chi.abs() <= EPS0 {
            return Ok(EigenResult { chi, dim_used: dim, converged: true, residual: diff });
        }
        prev = chi;
    }
    let last = solve(dim)?;
    Err(EigError::NotConverged { n, gamma, enlargements: MAX_ENLARGEMENTS, dim, prev, last })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn legendre_limit_operator() {
        let op = build_operator(0.0, Parity::Even, 3).unwrap();
        assert_eq!(op.diag, vec![0.0, 6.0, 20.0]);
        assert_eq!(op.offdiag, vec![0.0, 0.0]);
        let odd = build_operator(0.0, Parity::Odd, 4).unwrap();
        assert_eq!(odd.diag, vec![2.0, 12.0, 30.0, 56.0]);
    }

    #[test]
    fn first_diagonal_entry_at_unit_bandlimit() {
        let op = build_operator(1.0, Parity::Even, 2).unwrap();
        assert!((op.diag[0] - 1.0 / 3.0).abs() <= EPS0 / 3.0);
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(build_operator(-1.0, Parity::Even, 5), Err(EigError::InvalidGamma(_))));
        assert!(matches!(build_operator(1.0, Parity::Even, 1), Err(EigError::InvalidDim(1))));
        let op = build_operator(1.0, Parity::Even, 5).unwrap();
        assert!(matches!(eigenvalue_kth(&op, 5), Err(EigError::IndexOutOfRange { .. })));
        assert!(matches!(
            TridiagonalOperator::from_entries(vec![1.0, f64::NAN], vec![0.0]),
            Err(EigError::NonFinite)
        ));
    }

    #[test]
    fn diagonal_case_is_exact() {
        let op = build_operator(0.0, Parity::Even, 6).unwrap();
        let v = eigenvalue_kth(&op, 1).unwrap();
        assert!((v - 6.0).abs() <= 4.0 * EPS0 * 6.0);
    }

    #[test]
    fn two_by_two_closed_form() {
        let s2 = core::f64::consts::SQRT_2;
        let op = TridiagonalOperator::from_entries(vec![0.0, 6.0], vec![s2]).unwrap();
        let r = libm::sqrt(11.0);
        let l0 = eigenvalue_kth(&op, 0).unwrap();
        let l1 = eigenvalue_kth(&op, 1).unwrap();
        assert!((l0 - (3.0 - r)).abs() <= 4.0 * EPS0 * 3.0, "{l0}");
        assert!((l1 - (3.0 + r)).abs() <= 4.0 * EPS0 * 7.0, "{l1}");
        assert_eq!(op.sturm_count(l0 + 1e-12), 1);
        assert_eq!(op.sturm_count(l1 + 1e-12), 2);
    }

    #[test]
    fn small_integer_cases() {
        assert_eq!(chi_integer(0, 0.0).unwrap().chi, 0.0);
        let r = chi_integer(5, 0.0).unwrap();
        assert!((r.chi - 30.0).abs() <= 4.0 * EPS0 * 30.0);
        assert!(r.converged);
    }

    #[test]
    fn adaptive_matches_fixed_large_dimension() {
        let fixed = eigenvalue_kth(&build_operator(10.0, Parity::Even, 400).unwrap(), 0).unwrap();
        let adaptive = chi_integer(0, 10.0).unwrap().chi;
        assert!((fixed - adaptive).abs() <= 1e-13 * fixed);
        let op = build_operator(10.0, Parity::Odd, 50).unwrap();
        let v = eigenvalue_kth(&op, 0).unwrap();
        let w = chi_integer(1, 10.0).unwrap().chi;
        assert!((v - w).abs() <= 1e-13 * w);
    }

    #[test]
    fn early_exit_matches_full_recurrence() {
        let op = build_operator(300.0, Parity::Odd, 400).unwrap();
        for x in [10.0, 1e3, 3e4, 9e4, 2e5] {
            let full = {
                let mut c = 0;
                let mut d = 1.0;
                for i in 0..op.dim() {
                    d = if i == 0 { op.diag[0] - x } else { (op.diag[i] - x) - op.e2[i - 1] / d };
                    if d < 0.0 {
                        c += 1;
                    }
                }
                c
            };
            assert_eq!(op.sturm_count(x), full, "x={x}");
            assert_eq!(op.sturm_count_dd(x), full, "x={x}");
        }
    }
}
