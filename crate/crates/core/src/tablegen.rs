//! Construction of the per-`γ`-node expansions.
//!
//! For one bandlimit `γ` the index map `g(χ) = ξ(χ; γ)` is expanded on
//! `[χ₀(γ), χ_m(γ)]`, `m = ⌈1.1γ⌉`, then inverted to `f(σ) = χ` with
//! `g(f(σ)) = γσ` on `σ ∈ [0, 1.1]`. The phase derivatives at the origin are
//! expanded in `σ` as well, scaled by `1/γ`.
//!
//! The `γ` axis is cut into panels `[4^{2+l}, 4^{3+l}]`, `l = 1..=7`, each
//! carrying [`K`] nodes on the extrema grid.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::chebkit::{adaptive_expand_floor, adaptive_expand_seeded, extrema_grid, ChebError, PiecewiseChebModel, TAIL_FACTOR};
use crate::chitab::{ChiTable, FormatError, TablePanel};
use crate::legendre_eig::{chi_integer, EigError};
use crate::phasekit::{psi_at_zero, riccati_probe, PhaseError, PhaseProbe};

/// Terms per expansion and nodes per `γ` panel.
pub const K: usize = 30;
/// Upper end of the `σ` range.
pub const SIGMA_MAX: f64 = 1.1;
/// Largest panel index; panel `L_MAX` ends at `4^{3+L_MAX} = 2²⁰`.
pub const L_MAX: u32 = 7;
/// Accept factor for the derivative models: tail RMS below about `10⁵ε` of
/// the model's largest value. The probe's third derivative carries rounding
/// noise near `10ε`, which the `χ` rule cannot tell apart from signal, and
/// the derivatives are only needed to about `1e-10`.
pub const DERIV_TAIL_FACTOR: f64 = 1e10;
/// Ratio of `χ` between consecutive seed breakpoints near the bottom of the
/// spectrum, so that no piece spans values of very different size.
pub const SEED_RATIO: f64 = 16.0;
/// Points at which a finished `σ ↦ χ` model is checked for monotonicity.
pub const MONOTONE_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableGenError {
    #[error("panel range {l_min}..={l_max} is invalid (need 1 <= l_min <= l_max <= 7)")]
    PanelRange { l_min: u32, l_max: u32 },
    #[error("gamma = {0} is below the table floor 64")]
    GammaTooSmall(f64),
    #[error(transparent)]
    Cheb(#[from] ChebError),
    #[error(transparent)]
    Eig(#[from] EigError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Table(#[from] FormatError),
    #[error("sampled xi is not increasing: xi({chi_a}) = {xi_a} but xi({chi_b}) = {xi_b}")]
    NonMonotoneXi { chi_a: f64, xi_a: f64, chi_b: f64, xi_b: f64 },
    #[error("sigma = {sigma} has no bracket inside the built range (xi in [{xi_lo}, {xi_hi}])")]
    NoBracket { sigma: f64, xi_lo: f64, xi_hi: f64 },
    #[error("chi model is not increasing near sigma = {sigma}")]
    NonMonotoneChi { sigma: f64 },
    #[error("node build failed at panel l = {l}, node {i}, gamma = {gamma}: {source}")]
    Node { l: u32, i: usize, gamma: f64, source: Box<TableGenError> },
}

/// One `γ` interval `[4^{2+l}, 4^{3+l}]` and its node grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaPanel {
    pub l: u32,
    pub a: f64,
    pub b: f64,
    pub gamma_nodes: Vec<f64>,
}

impl GammaPanel {
    pub fn new(l: u32) -> Result<Self, TableGenError> {
        if !(1..=L_MAX).contains(&l) {
            return Err(TableGenError::PanelRange { l_min: l, l_max: l });
        }
        let (a, b) = panel_interval(l);
        let gamma_nodes = extrema_grid(a, b, K)?.nodes;
        Ok(Self { l, a, b, gamma_nodes })
    }
}

/// `[4^{2+l}, 4^{3+l}]`.
pub fn panel_interval(l: u32) -> (f64, f64) {
    let a = (1u64 << (2 * (2 + l))) as f64;
    (a, 4.0 * a)
}

pub fn check_panel_range(l_min: u32, l_max: u32) -> Result<(), TableGenError> {
    if l_min >= 1 && l_min <= l_max && l_max <= L_MAX {
        Ok(())
    } else {
        Err(TableGenError::PanelRange { l_min, l_max })
    }
}

/// Expansion of `g(χ) = ξ(χ; γ)` between the integer anchors.
#[derive(Debug, Clone, PartialEq)]
pub struct GModel {
    pub gamma: f64,
    pub model: PiecewiseChebModel,
    /// `χ₀(γ)`, where `ξ = 0`.
    pub chi_lo: f64,
    /// `χ_m(γ)` with `m = n_top`, where `ξ = m`.
    pub chi_hi: f64,
    pub n_top: usize,
    /// Distinct phase evaluations spent.
    pub evaluations: usize,
}

impl GModel {
    #[inline]
    fn g(&self, chi: f64) -> f64 {
        let p = &self.model.pieces()[self.model.piece_index(chi)];
        p.eval_unchecked(chi)
    }
}

/// `⌈1.1γ⌉`.
pub fn top_index(gamma: f64) -> usize {
    libm::ceil(SIGMA_MAX * gamma) as usize
}

/// Memo keyed by the bits of a positive argument; for positive doubles the
/// bit order is the numeric order.
type Memo<T> = BTreeMap<u64, T>;

/// Adaptive expansion of `ξ(χ)` on `[χ₀(γ), χ_{⌈1.1γ⌉}(γ)]`. The sampled
/// values must increase with `χ`.
pub fn build_g_model(gamma: f64) -> Result<GModel, TableGenError> {
    if !(gamma >= 64.0) {
        return Err(TableGenError::GammaTooSmall(gamma));
    }
    let n_top = top_index(gamma);
    let chi_lo = chi_integer(0, gamma)?.chi;
    let chi_hi = chi_integer(n_top, gamma)?.chi;
    let mut memo: Memo<f64> = BTreeMap::new();
    let mut seeds = alloc::vec![chi_lo];
    let mut c = chi_lo * SEED_RATIO;
    while c < chi_hi {
        seeds.push(c);
        c *= SEED_RATIO;
    }
    seeds.push(chi_hi);
    let model = adaptive_expand_seeded::<TableGenError, _>(
        |chi| {
            if let Some(&v) = memo.get(&chi.to_bits()) {
                return Ok(v);
            }
            let v = psi_at_zero(chi, gamma)?.xi;
            memo.insert(chi.to_bits(), v);
            Ok(v)
        },
        &seeds,
        K,
        TAIL_FACTOR,
        0.0,
    )?;
    let mut prev: Option<(f64, f64)> = None;
    for (&bits, &xi) in &memo {
        let chi = f64::from_bits(bits);
        if let Some((c, x)) = prev {
            if !(xi > x) {
                return Err(TableGenError::NonMonotoneXi { chi_a: c, xi_a: x, chi_b: chi, xi_b: xi });
            }
        }
        prev = Some((chi, xi));
    }
    Ok(GModel { gamma, model, chi_lo, chi_hi, n_top, evaluations: memo.len() })
}

/// Solve `g(χ) = γσ` on the model by bisection. `σ = 0` returns `χ₀` and
/// targets at or above the top anchor return `χ_m`.
pub fn solve_sigma(g: &GModel, sigma: f64) -> Result<f64, TableGenError> {
    let target = g.gamma * sigma;
    if sigma == 0.0 {
        return Ok(g.chi_lo);
    }
    let (mut lo, mut hi) = (g.chi_lo, g.chi_hi);
    let (g_lo, g_hi) = (g.g(lo), g.g(hi));
    if !(sigma > 0.0 && sigma <= SIGMA_MAX) || target > g.n_top as f64 {
        return Err(TableGenError::NoBracket { sigma, xi_lo: g_lo, xi_hi: g_hi });
    }
    if target <= g_lo {
        return Ok(lo);
    }
    if target >= g_hi {
        return Ok(hi);
    }
    // Past the 10ε relative bracket the loop keeps halving until the
    // midpoint is no longer representable strictly inside.
    loop {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if g.g(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if target - g.g(lo) <= g.g(hi) - target { lo } else { hi })
}

/// Adaptive expansion of `f(σ) = χ_σ(γ)` on `[0, 1.1]` through the inverse of
/// the `g` model; the result is checked to increase on a dense sample.
pub fn invert_to_f(g: &GModel) -> Result<PiecewiseChebModel, TableGenError> {
    let model = adaptive_expand_seeded::<TableGenError, _>(|s| solve_sigma(g, s), &sigma_seeds(g.gamma), K, TAIL_FACTOR, 0.0)?;
    check_increasing(&model)?;
    Ok(model)
}

/// `σ` seeds where `χ ≈ γ(1 + 2γσ)` grows by [`SEED_RATIO`].
pub fn sigma_seeds(gamma: f64) -> Vec<f64> {
    let mut seeds = alloc::vec![0.0];
    let mut r = SEED_RATIO;
    loop {
        let s = (r - 1.0) / (2.0 * gamma);
        if s >= 0.5 * SIGMA_MAX {
            break;
        }
        seeds.push(s);
        r *= SEED_RATIO;
    }
    seeds.push(SIGMA_MAX);
    seeds
}

fn check_increasing(model: &PiecewiseChebModel) -> Result<(), TableGenError> {
    let mut prev = f64::NEG_INFINITY;
    for j in 0..MONOTONE_SAMPLES {
        let sigma = SIGMA_MAX * j as f64 / (MONOTONE_SAMPLES - 1) as f64;
        let v = model.eval(sigma)?;
        if !(v > prev) {
            return Err(TableGenError::NonMonotoneChi { sigma });
        }
        prev = v;
    }
    Ok(())
}

/// The four `σ`-expansions stored for one `γ` node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeExpansionSet {
    pub gamma: f64,
    /// `σ ↦ χ_σ(γ)`.
    pub chi_model: PiecewiseChebModel,
    /// `σ ↦ ψ'(0)/γ`, `ψ''(0)/γ`, `ψ'''(0)/γ` at `χ = chi_model(σ)`.
    pub d1_model: PiecewiseChebModel,
    pub d2_model: PiecewiseChebModel,
    pub d3_model: PiecewiseChebModel,
}

impl NodeExpansionSet {
    pub fn models(&self) -> [&PiecewiseChebModel; 4] {
        [&self.chi_model, &self.d1_model, &self.d2_model, &self.d3_model]
    }

    pub fn piece_count(&self) -> usize {
        self.models().iter().map(|m| m.pieces().len()).sum()
    }
}

/// Build every expansion for one node.
pub fn build_node_set(gamma: f64) -> Result<NodeExpansionSet, TableGenError> {
    let g = build_g_model(gamma)?;
    let chi_model = invert_to_f(&g)?;
    let mut probes: Memo<PhaseProbe> = BTreeMap::new();
    let mut probe_at = |sigma: f64| -> Result<PhaseProbe, TableGenError> {
        let chi = chi_model.eval(sigma)?;
        if let Some(p) = probes.get(&chi.to_bits()) {
            return Ok(*p);
        }
        let p = riccati_probe(chi, gamma)?;
        probes.insert(chi.to_bits(), p);
        Ok(p)
    };
    // Each derivative is judged against its largest magnitude on the node's
    // σ range, so pieces where it passes through zero are not refined into
    // the probe's absolute noise.
    let grid = extrema_grid(0.0, SIGMA_MAX, K)?;
    let mut scale = [0.0f64; 3];
    for &s in &grid.nodes {
        let p = probe_at(s)?;
        for (m, v) in scale.iter_mut().zip([p.psi1, p.psi2, p.psi3]) {
            *m = m.max((v / gamma).abs());
        }
    }
    let mut expand = |pick: fn(&PhaseProbe) -> f64, floor: f64| {
        adaptive_expand_floor::<TableGenError, _>(
            |s| Ok(pick(&probe_at(s)?) / gamma),
            0.0,
            SIGMA_MAX,
            K,
            DERIV_TAIL_FACTOR,
            floor,
        )
    };
    let d1_model = expand(|p| p.psi1, scale[0])?;
    let d2_model = expand(|p| p.psi2, scale[1])?;
    let d3_model = expand(|p| p.psi3, scale[2])?;
    Ok(NodeExpansionSet { gamma, chi_model, d1_model, d2_model, d3_model })
}

/// `(l, i, γ)` for every node of panels `l_min..=l_max`, in table order.
pub fn node_jobs(l_min: u32, l_max: u32) -> Result<Vec<(u32, usize, f64)>, TableGenError> {
    check_panel_range(l_min, l_max)?;
    let mut jobs = Vec::new();
    for l in l_min..=l_max {
        let panel = GammaPanel::new(l)?;
        jobs.extend(panel.gamma_nodes.iter().enumerate().map(|(i, &g)| (l, i, g)));
    }
    Ok(jobs)
}

/// Assemble a table from node results given in [`node_jobs`] order.
pub fn assemble(l_min: u32, l_max: u32, nodes: Vec<NodeExpansionSet>) -> Result<ChiTable, TableGenError> {
    check_panel_range(l_min, l_max)?;
    let mut it = nodes.into_iter();
    let mut panels = Vec::new();
    for l in l_min..=l_max {
        let p = GammaPanel::new(l)?;
        let nodes: Vec<NodeExpansionSet> = it.by_ref().take(K).collect();
        panels.push(TablePanel::new(p.l, p.a, p.b, nodes)?);
    }
    Ok(ChiTable::new(panels)?)
}

/// Serial build of panels `l_min..=l_max`.
pub fn build_table_serial(l_min: u32, l_max: u32) -> Result<ChiTable, TableGenError> {
    let jobs = node_jobs(l_min, l_max)?;
    let mut nodes = Vec::with_capacity(jobs.len());
    for (l, i, gamma) in jobs {
        let n = build_node_set(gamma)
            .map_err(|e| TableGenError::Node { l, i, gamma, source: Box::new(e) })?;
        nodes.push(n);
    }
    assemble(l_min, l_max, nodes)
}
