//! Runtime evaluation of `χ_n(γ)` and the phase derivatives from a built
//! table, and the `CHITBL01` byte format.
//!
//! Evaluation touches one panel: each of its `K` node models is evaluated at
//! `σ`, then the node values are interpolated in `γ` with the barycentric
//! formula on the panel's extrema grid.
//!
//! # Byte format
//!
//! Little-endian throughout.
//!
//! ```text
//! magic        8 bytes   "CHITBL01"
//! version      u32       1
//! k            u32       terms per piece (= nodes per panel)
//! panel count  u32
//! flags        u32       0
//! per panel:   l u32, a f64, b f64, then k nodes
//! per node:    gamma f64, then 4 models (chi, d1, d2, d3)
//! per model:   m u32, m+1 breakpoints f64, m·k coefficients f64
//! ```

use alloc::vec::Vec;

use crate::chebkit::{extrema_grid, ChebExpansion, PiecewiseChebModel};
use crate::tablegen::{panel_interval, NodeExpansionSet, SIGMA_MAX};

pub const MAGIC: &[u8; 8] = b"CHITBL01";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("not a CHITBL01 file (bad magic)")]
    BadMagic,
    #[error("unsupported format version {found} (this build reads {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },
    #[error("truncated input: needed {needed} bytes at offset {offset}, {available} available")]
    Truncated { offset: usize, needed: usize, available: usize },
    #[error("{extra} unexpected trailing bytes")]
    TrailingBytes { extra: usize },
    #[error("table invariant violated: {0}")]
    Invariant(&'static str),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("gamma = {gamma} is outside the table range [{lo}, {hi}]")]
    GammaOutOfRange { gamma: f64, lo: f64, hi: f64 },
    #[error("sigma = {sigma} is outside [0, {max}]")]
    SigmaOutOfRange { sigma: f64, max: f64 },
    #[error("n = {n} exceeds 1.1*gamma = {max} for gamma = {gamma}")]
    IndexTooLarge { n: u64, gamma: f64, max: f64 },
}

/// Either an integer index `n` or the scaled index `σ = ξ/γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QueryIndex {
    N(u64),
    Sigma(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalQuery {
    pub gamma: f64,
    pub index: QueryIndex,
    pub want_derivatives: bool,
}

impl EvalQuery {
    pub fn n(gamma: f64, n: u64) -> Self {
        Self { gamma, index: QueryIndex::N(n), want_derivatives: false }
    }

    pub fn sigma(gamma: f64, sigma: f64) -> Self {
        Self { gamma, index: QueryIndex::Sigma(sigma), want_derivatives: false }
    }

    pub fn with_derivatives(mut self) -> Self {
        self.want_derivatives = true;
        self
    }
}

/// Work done by one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalWork {
    pub panels: u32,
    /// Piece lookups (binary search + one Clenshaw sum each).
    pub model_lookups: u32,
    /// Barycentric interpolations across the node grid.
    pub bary_steps: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalAnswer {
    pub chi: f64,
    /// `ψ'(0), ψ''(0), ψ'''(0)` when requested.
    pub derivatives: Option<[f64; 3]>,
    pub work: EvalWork,
}

/// One `γ` interval with its node expansions.
#[derive(Debug, Clone, PartialEq)]
pub struct TablePanel {
    pub l: u32,
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<NodeExpansionSet>,
    gammas: Vec<f64>,
    weights: Vec<f64>,
}

impl TablePanel {
    /// Validates the interval, the node grid and every model domain.
    pub fn new(l: u32, a: f64, b: f64, nodes: Vec<NodeExpansionSet>) -> Result<Self, FormatError> {
        if l == 0 || l > 7 || (a, b) != panel_interval(l) {
            return Err(FormatError::Invariant("panel interval is not [4^(2+l), 4^(3+l)]"));
        }
        let k = nodes.len();
        if k < 2 {
            return Err(FormatError::Invariant("panel needs at least two nodes"));
        }
        let grid = extrema_grid(a, b, k).map_err(|_| FormatError::Invariant("bad panel grid"))?;
        for (node, &g) in nodes.iter().zip(&grid.nodes) {
            if node.gamma.to_bits() != g.to_bits() {
                return Err(FormatError::Invariant("node gamma is off the panel grid"));
            }
            for m in node.models() {
                if m.domain() != (0.0, SIGMA_MAX) {
                    return Err(FormatError::Invariant("model domain is not [0, 1.1]"));
                }
                if m.k() != k {
                    return Err(FormatError::Invariant("model term count differs from node count"));
                }
            }
        }
        // barycentric weights of the extrema grid: (-1)^j, halved at the ends
        let mut weights: Vec<f64> = (0..k).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        weights[0] *= 0.5;
        weights[k - 1] *= 0.5;
        Ok(Self { l, a, b, nodes, gammas: grid.nodes, weights })
    }

    pub fn piece_count(&self) -> usize {
        self.nodes.iter().map(NodeExpansionSet::piece_count).sum()
    }

    /// Barycentric interpolation of per-node values `v(node)` at `gamma`.
    #[inline]
    fn interpolate(&self, gamma: f64, mut v: impl FnMut(&NodeExpansionSet) -> f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((node, &g), &w) in self.nodes.iter().zip(&self.gammas).zip(&self.weights) {
            let d = gamma - g;
            if d == 0.0 {
                return v(node);
            }
            let t = w / d;
            num += t * v(node);
            den += t;
        }
        num / den
    }
}

/// The full precomputed artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiTable {
    k: usize,
    panels: Vec<TablePanel>,
}

impl ChiTable {
    /// Panels must be consecutive in `l` with a shared node count.
    pub fn new(panels: Vec<TablePanel>) -> Result<Self, FormatError> {
        let first = panels.first().ok_or(FormatError::Invariant("table has no panels"))?;
        let k = first.nodes.len();
        for w in panels.windows(2) {
            if w[1].l != w[0].l + 1 || w[1].a != w[0].b {
                return Err(FormatError::Invariant("panels do not tile a contiguous gamma range"));
            }
        }
        if panels.iter().any(|p| p.nodes.len() != k) {
            return Err(FormatError::Invariant("panels disagree on node count"));
        }
        Ok(Self { k, panels })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn panels(&self) -> &[TablePanel] {
        &self.panels
    }

    pub fn gamma_range(&self) -> (f64, f64) {
        (self.panels[0].a, self.panels[self.panels.len() - 1].b)
    }

    pub fn l_range(&self) -> (u32, u32) {
        (self.panels[0].l, self.panels[self.panels.len() - 1].l)
    }

    /// The panel holding `gamma`; a shared boundary goes to the lower panel.
    pub fn panel_for(&self, gamma: f64) -> Result<&TablePanel, EvalError> {
        let (lo, hi) = self.gamma_range();
        if !(gamma >= lo && gamma <= hi) {
            return Err(EvalError::GammaOutOfRange { gamma, lo, hi });
        }
        let i = self.panels.partition_point(|p| p.b < gamma);
        Ok(&self.panels[i])
    }

    /// `σ` for a query, with its range checks.
    pub fn sigma_of(&self, q: &EvalQuery) -> Result<f64, EvalError> {
        match q.index {
            QueryIndex::N(n) => {
                let max = SIGMA_MAX * q.gamma;
                if n as f64 > max {
                    return Err(EvalError::IndexTooLarge { n, gamma: q.gamma, max });
                }
                // n ≤ 1.1γ may still round to a quotient just above 1.1
                Ok((n as f64 / q.gamma).min(SIGMA_MAX))
            }
            QueryIndex::Sigma(s) => {
                if !(s >= 0.0 && s <= SIGMA_MAX) {
                    return Err(EvalError::SigmaOutOfRange { sigma: s, max: SIGMA_MAX });
                }
                Ok(s)
            }
        }
    }

    pub fn eval(&self, q: &EvalQuery) -> Result<EvalAnswer, EvalError> {
        let panel = self.panel_for(q.gamma)?;
        let sigma = self.sigma_of(q)?;
        let k = panel.nodes.len() as u32;
        let mut work = EvalWork { panels: 1, model_lookups: k, bary_steps: 1 };
        let chi = panel.interpolate(q.gamma, |n| eval_in(&n.chi_model, sigma));
        let derivatives = q.want_derivatives.then(|| {
            work.model_lookups += 3 * k;
            work.bary_steps += 3;
            [
                q.gamma * panel.interpolate(q.gamma, |n| eval_in(&n.d1_model, sigma)),
                q.gamma * panel.interpolate(q.gamma, |n| eval_in(&n.d2_model, sigma)),
                q.gamma * panel.interpolate(q.gamma, |n| eval_in(&n.d3_model, sigma)),
            ]
        });
        Ok(EvalAnswer { chi, derivatives, work })
    }
}

#[inline]
fn eval_in(m: &PiecewiseChebModel, sigma: f64) -> f64 {
    m.pieces()[m.piece_index(sigma)].eval_unchecked(sigma)
}

/// `χ` (and optionally the phase derivatives) for one query.
pub fn chi_eval(table: &ChiTable, q: &EvalQuery) -> Result<EvalAnswer, EvalError> {
    table.eval(q)
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

/// Serialize to `CHITBL01` bytes.
pub fn encode_table(t: &ChiTable) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, FORMAT_VERSION);
    put_u32(&mut out, t.k as u32);
    put_u32(&mut out, t.panels.len() as u32);
    put_u32(&mut out, 0);
    for p in &t.panels {
        put_u32(&mut out, p.l);
        put_f64(&mut out, p.a);
        put_f64(&mut out, p.b);
        for node in &p.nodes {
            put_f64(&mut out, node.gamma);
            for m in node.models() {
                put_u32(&mut out, m.pieces().len() as u32);
                for &x in m.breakpoints() {
                    put_f64(&mut out, x);
                }
                for piece in m.pieces() {
                    for &c in &piece.coeffs {
                        put_f64(&mut out, c);
                    }
                }
            }
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        let available = self.buf.len() - self.pos;
        if n > available {
            return Err(FormatError::Truncated { offset: self.pos, needed: n, available });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn f64(&mut self) -> Result<f64, FormatError> {
        let b = self.take(8)?;
        let mut a = [0u8; 8];
        a.copy_from_slice(b);
        Ok(f64::from_le_bytes(a))
    }

    /// Fail early (before allocating) when `count` items of `size` bytes
    /// cannot fit in the rest of the input.
    fn expect(&self, count: usize, size: usize) -> Result<(), FormatError> {
        let available = self.buf.len() - self.pos;
        match count.checked_mul(size) {
            Some(n) if n <= available => Ok(()),
            _ => Err(FormatError::Truncated { offset: self.pos, needed: count.saturating_mul(size), available }),
        }
    }
}

fn read_model(r: &mut Reader<'_>, k: usize) -> Result<PiecewiseChebModel, FormatError> {
    let m = r.u32()? as usize;
    if m == 0 {
        return Err(FormatError::Invariant("model with no pieces"));
    }
    r.expect(m + 1 + m * k, 8)?;
    let mut breakpoints = Vec::with_capacity(m + 1);
    for _ in 0..=m {
        breakpoints.push(r.f64()?);
    }
    if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(FormatError::Invariant("breakpoints not strictly increasing"));
    }
    let mut pieces = Vec::with_capacity(m);
    for i in 0..m {
        let mut coeffs = Vec::with_capacity(k);
        for _ in 0..k {
            coeffs.push(r.f64()?);
        }
        pieces.push(ChebExpansion { a: breakpoints[i], b: breakpoints[i + 1], coeffs });
    }
    PiecewiseChebModel::new(breakpoints, pieces).map_err(|_| FormatError::Invariant("malformed piecewise model"))
}

/// Parse and validate `CHITBL01` bytes.
pub fn decode_table(bytes: &[u8]) -> Result<ChiTable, FormatError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    r.take(MAGIC.len())?;
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion { found: version, expected: FORMAT_VERSION });
    }
    let k = r.u32()? as usize;
    let panel_count = r.u32()? as usize;
    let flags = r.u32()?;
    if flags != 0 {
        return Err(FormatError::Invariant("unknown flags set"));
    }
    if !(2..=4096).contains(&k) {
        return Err(FormatError::Invariant("term count out of range"));
    }
    if panel_count == 0 || panel_count > 7 {
        return Err(FormatError::Invariant("panel count out of range"));
    }
    let mut panels = Vec::with_capacity(panel_count);
    for _ in 0..panel_count {
        let l = r.u32()?;
        let a = r.f64()?;
        let b = r.f64()?;
        let mut nodes = Vec::with_capacity(k);
        for _ in 0..k {
            let gamma = r.f64()?;
            let chi_model = read_model(&mut r, k)?;
            let d1_model = read_model(&mut r, k)?;
            let d2_model = read_model(&mut r, k)?;
            let d3_model = read_model(&mut r, k)?;
            nodes.push(NodeExpansionSet { gamma, chi_model, d1_model, d2_model, d3_model });
        }
        panels.push(TablePanel::new(l, a, b, nodes)?);
    }
    if r.pos != bytes.len() {
        return Err(FormatError::TrailingBytes { extra: bytes.len() - r.pos });
    }
    ChiTable::new(panels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebkit::adaptive_expand;
    use crate::tablegen::{GammaPanel, K};

    /// A synthetic panel whose node models are cheap closed forms.
    fn synthetic(l: u32) -> TablePanel {
        let p = GammaPanel::new(l).unwrap();
        let nodes = p
            .gamma_nodes
            .iter()
            .map(|&g| {
                let m = |f: &dyn Fn(f64) -> f64| adaptive_expand(f, 0.0, SIGMA_MAX, K).unwrap();
                NodeExpansionSet {
                    gamma: g,
                    chi_model: m(&|s| g * (1.0 + 2.0 * g * s) + s * s * s),
                    d1_model: m(&|s| 1.0 + s),
                    d2_model: m(&|_| 0.0),
                    d3_model: m(&|s| libm::exp(-s)),
                }
            })
            .collect();
        TablePanel::new(l, p.a, p.b, nodes).unwrap()
    }

    fn table() -> ChiTable {
        ChiTable::new(alloc::vec![synthetic(1), synthetic(2)]).unwrap()
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let t = table();
        let bytes = encode_table(&t);
        let back = decode_table(&bytes).unwrap();
        assert_eq!(back, t);
        assert_eq!(encode_table(&back), bytes);
    }

    #[test]
    fn corrupt_inputs_are_distinguished() {
        let bytes = encode_table(&table());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert_eq!(decode_table(&bad), Err(FormatError::BadMagic));
        let mut bad = bytes.clone();
        bad[8] = 2;
        assert!(matches!(decode_table(&bad), Err(FormatError::UnsupportedVersion { found: 2, .. })));
        assert!(matches!(decode_table(&bytes[..bytes.len() - 3]), Err(FormatError::Truncated { .. })));
        let mut bad = bytes.clone();
        bad.push(0);
        assert_eq!(decode_table(&bad), Err(FormatError::TrailingBytes { extra: 1 }));
        // second breakpoint of the first model pushed below the first
        let mut bad = bytes.clone();
        let off = 8 + 16 + 20 + 8 + 4 + 8;
        bad[off..off + 8].copy_from_slice(&(-1.0f64).to_le_bytes());
        assert!(matches!(decode_table(&bad), Err(FormatError::Invariant(_))));
    }

    #[test]
    fn evaluation_reproduces_nodes_and_interpolates() {
        let t = table();
        let p = &t.panels()[0];
        let g = p.nodes[7].gamma;
        let want = p.nodes[7].chi_model.eval(0.5).unwrap();
        let got = t.eval(&EvalQuery::sigma(g, 0.5)).unwrap();
        assert_eq!(got.chi, want);
        // off-node: the synthetic chi is a quadratic in gamma, reproduced by the grid
        let g = 100.3;
        let s = 0.7;
        let got = t.eval(&EvalQuery::sigma(g, s).with_derivatives()).unwrap();
        let exact = g * (1.0 + 2.0 * g * s) + s * s * s;
        assert!((got.chi - exact).abs() < 1e-13 * exact);
        let d = got.derivatives.unwrap();
        assert!((d[0] - g * (1.0 + s)).abs() < 1e-13 * g);
        assert_eq!(got.work, EvalWork { panels: 1, model_lookups: 4 * K as u32, bary_steps: 4 });
    }

    #[test]
    fn boundary_and_range_handling() {
        let t = table();
        assert_eq!(t.panel_for(256.0).unwrap().l, 1);
        assert_eq!(t.panel_for(256.0001).unwrap().l, 2);
        assert!(matches!(t.eval(&EvalQuery::n(50.0, 1)), Err(EvalError::GammaOutOfRange { .. })));
        assert!(matches!(t.eval(&EvalQuery::n(100.0, 111)), Err(EvalError::IndexTooLarge { .. })));
        assert!(t.eval(&EvalQuery::n(100.0, 110)).is_ok());
        assert!(t.eval(&EvalQuery::n(1024.0, 1126)).is_ok());
        assert!(matches!(t.eval(&EvalQuery::sigma(100.0, 1.2)), Err(EvalError::SigmaOutOfRange { .. })));
        let a = t.eval(&EvalQuery::n(100.0, 40)).unwrap().chi;
        let b = t.eval(&EvalQuery::sigma(100.0, 0.4)).unwrap().chi;
        assert_eq!(a, b);
    }
}
