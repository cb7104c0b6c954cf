//! Chebyshev extrema grids, value/coefficient transforms, evaluation and
//! adaptive piecewise expansions.
//!
//! A `k`-term expansion on `[a, b]` is `Σ_j c_j T_j(t)` with the affine map
//! `t = (2x - a - b) / (b - a)`. Node values live on the `k`-point extrema
//! (Lobatto) grid, which contains both endpoints.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::EPS0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChebError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("a Chebyshev grid needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("adaptive expansion needs an even term count, got {0}")]
    OddTermCount(usize),
    #[error("expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("x = {x} is outside the valid range [{a}, {b}]")]
    OutOfRange { x: f64, a: f64, b: f64 },
    #[error("non-finite sample {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },
    #[error(
        "subinterval [{a}, {b}] is at the resolution limit and still fails the tail \
         criterion (tail/total = {ratio:e}); the function is not smooth at this scale"
    )]
    Unresolved { a: f64, b: f64, ratio: f64 },
    #[error("invalid piecewise model: {0}")]
    InvalidModel(&'static str),
}

/// `cos(mπ/n)` with exact symmetry: uses `sin` of the complementary angle so
/// that the middle node of an odd grid is exactly zero.
fn cos_pi_ratio(m: usize, n: usize) -> f64 {
    let num = n as f64 - 2.0 * m as f64;
    libm::sin(PI * num / (2.0 * n as f64))
}

/// `k`-point Chebyshev extrema grid on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebGrid {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
}

impl ChebGrid {
    pub fn k(&self) -> usize {
        self.nodes.len()
    }
}

/// Nodes `(b+a)/2 - (b-a)/2 · cos(jπ/(k-1))`, `j = 0..k`.
pub fn extrema_grid(a: f64, b: f64, k: usize) -> Result<ChebGrid, ChebError> {
    if k < 2 {
        return Err(ChebError::TooFewNodes(k));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(ChebError::InvalidInterval { a, b });
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let n = k - 1;
    let mut nodes: Vec<f64> = (0..k).map(|j| mid - half * cos_pi_ratio(j, n)).collect();
    nodes[0] = a;
    nodes[n] = b;
    Ok(ChebGrid { a, b, nodes })
}

/// Cached `T_j(t_i)` table for the `k`-point extrema grid on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct ChebTransform {
    k: usize,
    // row j, column i: T_j(t_i) with t_i = -cos(iπ/(k-1))
    table: Vec<f64>,
}

impl ChebTransform {
    pub fn new(k: usize) -> Result<Self, ChebError> {
        if k < 2 {
            return Err(ChebError::TooFewNodes(k));
        }
        let n = k - 1;
        let mut table = Vec::with_capacity(k * k);
        for j in 0..k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..k {
                // cos(j·iπ/n) reduced to [0, 2n)
                let m = (i * j) % (2 * n);
                let c = if m <= n { cos_pi_ratio(m, n) } else { cos_pi_ratio(2 * n - m, n) };
                table.push(sign * c);
            }
        }
        Ok(Self { k, table })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Coefficients of the degree-`k-1` interpolant of `values` (given on the
    /// extrema grid, left to right).
    pub fn vals_to_coeffs(&self, values: &[f64]) -> Result<Vec<f64>, ChebError> {
        let k = self.k;
        if values.len() != k {
            return Err(ChebError::SizeMismatch { expected: k, got: values.len() });
        }
        let n = k - 1;
        let scale = 2.0 / n as f64;
        let mut coeffs = Vec::with_capacity(k);
        for j in 0..k {
            let row = &self.table[j * k..(j + 1) * k];
            let mut acc = 0.5 * (row[0] * values[0] + row[n] * values[n]);
            for i in 1..n {
                acc += row[i] * values[i];
            }
            let mut c = scale * acc;
            if j == 0 || j == n {
                c *= 0.5;
            }
            coeffs.push(c);
        }
        Ok(coeffs)
    }

    /// Values at the extrema grid of the expansion with the given coefficients.
    pub fn coeffs_to_vals(&self, coeffs: &[f64]) -> Result<Vec<f64>, ChebError> {
        let k = self.k;
        if coeffs.len() != k {
            return Err(ChebError::SizeMismatch { expected: k, got: coeffs.len() });
        }
        Ok((0..k)
            .map(|i| (0..k).map(|j| coeffs[j] * self.table[j * k + i]).sum())
            .collect())
    }
}

/// A single `k`-term Chebyshev expansion on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebExpansion {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<f64>,
}

impl ChebExpansion {
    /// Interpolant of `values` sampled on `extrema_grid(a, b, values.len())`.
    pub fn from_values(a: f64, b: f64, values: &[f64]) -> Result<Self, ChebError> {
        if !(a < b) {
            return Err(ChebError::InvalidInterval { a, b });
        }
        let transform = ChebTransform::new(values.len())?;
        Ok(Self { a, b, coeffs: transform.vals_to_coeffs(values)? })
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub fn eval(&self, x: f64) -> Result<f64, ChebError> {
        if !self.contains(x) {
            return Err(ChebError::OutOfRange { x, a: self.a, b: self.b });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Clenshaw recurrence; `x` is assumed to lie in `[a, b]`.
    #[inline]
    pub fn eval_unchecked(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        clenshaw(&self.coeffs, t)
    }

    /// Barycentric evaluation through the node values of this expansion.
    pub fn eval_barycentric(&self, x: f64) -> Result<f64, ChebError> {
        if !self.contains(x) {
            return Err(ChebError::OutOfRange { x, a: self.a, b: self.b });
        }
        let transform = ChebTransform::new(self.k())?;
        let values = transform.coeffs_to_vals(&self.coeffs)?;
        let grid = extrema_grid(self.a, self.b, self.k())?;
        Ok(barycentric_extrema(&grid.nodes, &values, x))
    }

    /// `Σ_{j≥k/2} c_j² / Σ_j c_j²` (zero for the zero function).
    pub fn tail_ratio(&self) -> f64 {
        tail_ratio(&self.coeffs)
    }
}

#[inline]
pub fn clenshaw(coeffs: &[f64], t: f64) -> f64 {
    let two_t = 2.0 * t;
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs[1..].iter().rev() {
        let b0 = c + two_t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + t * b1 - b2
}

/// Barycentric interpolation on a Chebyshev extrema grid (weights `(-1)^j`,
/// halved at both ends). Returns the stored value exactly at a node.
#[inline]
pub fn barycentric_extrema(nodes: &[f64], values: &[f64], x: f64) -> f64 {
    let n = nodes.len() - 1;
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..=n {
        let d = x - nodes[j];
        if d == 0.0 {
            return values[j];
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n {
            w *= 0.5;
        }
        let w = w / d;
        num += w * values[j];
        den += w;
    }
    num / den
}

pub fn tail_ratio(coeffs: &[f64]) -> f64 {
    let k = coeffs.len();
    let total: f64 = coeffs.iter().map(|c| c * c).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tail: f64 = coeffs[k / 2..].iter().map(|c| c * c).sum();
    tail / total
}

/// Default multiplier in the acceptance rule `tail < factor·ε₀²·total`.
pub const TAIL_FACTOR: f64 = 100.0;

/// The accept rule for a piece: `Σ_{j=k/2}^{k-1} c_j² < factor·ε₀²·Σ_j c_j²`.
/// The identically zero expansion is accepted.
pub fn passes_tail(coeffs: &[f64], factor: f64) -> bool {
    let k = coeffs.len();
    let total: f64 = coeffs.iter().map(|c| c * c).sum();
    if total == 0.0 {
        return true;
    }
    let tail: f64 = coeffs[k / 2..].iter().map(|c| c * c).sum();
    tail < factor * EPS0 * EPS0 * total
}

/// [`passes_tail`] with the total replaced by `max(total, floor²)`, so that
/// a piece whose values are small against `floor` is judged on the absolute
/// scale `floor`.
pub fn passes_tail_floor(coeffs: &[f64], factor: f64, floor: f64) -> bool {
    let k = coeffs.len();
    let total: f64 = coeffs.iter().map(|c| c * c).sum();
    let total = total.max(floor * floor);
    if total == 0.0 {
        return true;
    }
    let tail: f64 = coeffs[k / 2..].iter().map(|c| c * c).sum();
    tail < factor * EPS0 * EPS0 * total
}

/// Piecewise `k`-term Chebyshev expansion over `x_0 < x_1 < … < x_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseChebModel {
    k: usize,
    breakpoints: Vec<f64>,
    pieces: Vec<ChebExpansion>,
}

impl PiecewiseChebModel {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<ChebExpansion>) -> Result<Self, ChebError> {
        if pieces.is_empty() {
            return Err(ChebError::InvalidModel("no pieces"));
        }
        if breakpoints.len() != pieces.len() + 1 {
            return Err(ChebError::InvalidModel("breakpoint count must be piece count + 1"));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(ChebError::InvalidModel("non-finite breakpoint"));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(ChebError::InvalidModel("breakpoints not strictly increasing"));
        }
        let k = pieces[0].k();
        if k < 2 {
            return Err(ChebError::TooFewNodes(k));
        }
        for (i, p) in pieces.iter().enumerate() {
            if p.k() != k {
                return Err(ChebError::InvalidModel("pieces disagree on term count"));
            }
            if p.a != breakpoints[i] || p.b != breakpoints[i + 1] {
                return Err(ChebError::InvalidModel("piece interval does not match breakpoints"));
            }
            if p.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(ChebError::InvalidModel("non-finite coefficient"));
            }
        }
        Ok(Self { k, breakpoints, pieces })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[ChebExpansion] {
        &self.pieces
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
    }

    /// Index of the piece whose half-open interval `[x_i, x_{i+1})` holds `x`;
    /// the last piece is closed on the right.
    #[inline]
    pub fn piece_index(&self, x: f64) -> usize {
        let i = self.breakpoints.partition_point(|&t| t <= x);
        i.saturating_sub(1).min(self.pieces.len() - 1)
    }

    pub fn eval(&self, x: f64) -> Result<f64, ChebError> {
        let (a, b) = self.domain();
        if !(x >= a && x <= b) {
            return Err(ChebError::OutOfRange { x, a, b });
        }
        Ok(self.pieces[self.piece_index(x)].eval_unchecked(x))
    }

    /// Largest per-piece tail ratio (see [`tail_ratio`]).
    pub fn max_tail_ratio(&self) -> f64 {
        self.pieces.iter().map(ChebExpansion::tail_ratio).fold(0.0, f64::max)
    }

    pub fn all_pieces_pass_tail(&self, factor: f64) -> bool {
        self.pieces.iter().all(|p| passes_tail(&p.coeffs, factor))
    }
}

/// Adaptive bisection with the default tail rule; `f` is infallible.
pub fn adaptive_expand<F>(mut f: F, a: f64, b: f64, k: usize) -> Result<PiecewiseChebModel, ChebError>
where
    F: FnMut(f64) -> f64,
{
    adaptive_expand_try(|x| Ok::<f64, ChebError>(f(x)), a, b, k, TAIL_FACTOR)
}

/// Adaptive construction of a piecewise expansion of `f` over `[a, b]`.
///
/// Keeps a to-process stack and a processed list. Each interval is sampled on
/// its `k`-point extrema grid; it is accepted when [`passes_tail`] holds with
/// `tail_factor`, otherwise split at its midpoint. The processed list comes
/// out left to right.
pub fn adaptive_expand_try<E, F>(f: F, a: f64, b: f64, k: usize, tail_factor: f64) -> Result<PiecewiseChebModel, E>
where
    E: From<ChebError>,
    F: FnMut(f64) -> Result<f64, E>,
{
    adaptive_expand_floor(f, a, b, k, tail_factor, 0.0)
}

/// [`adaptive_expand_try`] with the accept rule [`passes_tail_floor`].
pub fn adaptive_expand_floor<E, F>(
    f: F,
    a: f64,
    b: f64,
    k: usize,
    tail_factor: f64,
    floor: f64,
) -> Result<PiecewiseChebModel, E>
where
    E: From<ChebError>,
    F: FnMut(f64) -> Result<f64, E>,
{
    adaptive_expand_seeded(f, &[a, b], k, tail_factor, floor)
}

/// Adaptive expansion starting from the intervals between the given
/// increasing `seeds` (first and last are the domain ends) rather than from
/// the whole domain.
pub fn adaptive_expand_seeded<E, F>(
    mut f: F,
    seeds: &[f64],
    k: usize,
    tail_factor: f64,
    floor: f64,
) -> Result<PiecewiseChebModel, E>
where
    E: From<ChebError>,
    F: FnMut(f64) -> Result<f64, E>,
{
    if k % 2 != 0 {
        return Err(ChebError::OddTermCount(k).into());
    }
    if seeds.len() < 2 {
        return Err(ChebError::InvalidModel("need at least two seed points").into());
    }
    for w in seeds.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(ChebError::InvalidInterval { a, b }.into());
        }
    }
    let transform = ChebTransform::new(k)?;
    let mut todo: Vec<(f64, f64)> = seeds.windows(2).rev().map(|w| (w[0], w[1])).collect();
    let mut done: Vec<ChebExpansion> = Vec::new();
    let mut values = Vec::with_capacity(k);

    while let Some((lo, hi)) = todo.pop() {
        let grid = extrema_grid(lo, hi, k)?;
        values.clear();
        for &x in &grid.nodes {
            let v = f(x)?;
            if !v.is_finite() {
                return Err(ChebError::NonFinite { x, value: v }.into());
            }
            values.push(v);
        }
        let coeffs = transform.vals_to_coeffs(&values)?;
        if passes_tail_floor(&coeffs, tail_factor, floor) {
            done.push(ChebExpansion { a: lo, b: hi, coeffs });
            continue;
        }
        let floor = 256.0 * EPS0 * lo.abs().max(hi.abs()).max(1.0);
        let mid = 0.5 * (lo + hi);
        if hi - lo < floor || !(mid > lo && mid < hi) {
            return Err(ChebError::Unresolved { a: lo, b: hi, ratio: tail_ratio(&coeffs) }.into());
        }
        todo.push((mid, hi));
        todo.push((lo, mid));
    }

    let mut breakpoints = Vec::with_capacity(done.len() + 1);
    breakpoints.push(done[0].a);
    breakpoints.extend(done.iter().map(|p| p.b));
    Ok(PiecewiseChebModel::new(breakpoints, done)?)
}
