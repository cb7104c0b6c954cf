//! Table-versus-eigensolver comparison over (panel × σ-quartile) cells.

use chitbl_core::chitab::{ChiTable, EvalQuery};
use chitbl_core::legendre_eig::chi_integer;
use chitbl_core::phasekit::xi_of_chi;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::pool::par_map;

/// Largest accepted relative deviation of a table value from the eigensolver.
pub const CHI_TOL: f64 = 1e-13;
/// Largest accepted `|ξ(χ_n) − n|`.
pub const XI_TOL: f64 = 1e-9;
/// Upper ends of the σ cells; the lower end of cell `q` is `q/4`.
pub const QUARTILES: [(f64, f64); 4] = [(0.0, 0.25), (0.25, 0.5), (0.5, 0.75), (0.75, 1.0)];

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Random `γ` per cell and random `n` per `γ`.
    pub samples: usize,
    pub xi_samples: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { samples: 100, xi_samples: 100, seed: 0, jobs: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub l: u32,
    pub gamma_range: (f64, f64),
    pub sigma_range: (f64, f64),
    pub evaluations: usize,
    pub max_rel: f64,
    pub worst: (f64, u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct XiReport {
    pub samples: usize,
    pub max_abs: f64,
    pub worst: (f64, u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub cells: Vec<CellReport>,
    pub xi: XiReport,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.max_rel <= CHI_TOL) && self.xi.max_abs <= XI_TOL
    }

    pub fn max_rel(&self) -> f64 {
        self.cells.iter().map(|c| c.max_rel).fold(0.0, f64::max)
    }
}

/// Integers `n` with `n/γ` in `[lo, hi)`.
pub(crate) fn n_range(gamma: f64, lo: f64, hi: f64) -> (u64, u64) {
    let first = (lo * gamma).ceil() as u64;
    let mut last = (hi * gamma).ceil() as u64;
    if last as f64 >= hi * gamma {
        last = last.saturating_sub(1);
    }
    (first, last.max(first))
}

/// Random `(γ, [n])` groups for every cell, in cell order.
pub fn cell_samples(table: &ChiTable, samples: usize, seed: u64) -> Vec<(usize, f64, Vec<u64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut cell = 0;
    for p in table.panels() {
        for &(lo, hi) in &QUARTILES {
            for _ in 0..samples {
                let gamma = rng.gen_range(p.a..=p.b);
                let (n0, n1) = n_range(gamma, lo, hi);
                let ns = (0..samples).map(|_| rng.gen_range(n0..=n1)).collect();
                out.push((cell, gamma, ns));
            }
            cell += 1;
        }
    }
    out
}

fn oracle(n: u64, gamma: f64) -> Result<f64, CliError> {
    chi_integer(n as usize, gamma)
        .map(|r| r.chi)
        .map_err(|e| CliError::Verification(format!("eigensolver failed at gamma = {gamma}, n = {n}: {e}")))
}

pub fn verify(table: &ChiTable, opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let mut cells: Vec<CellReport> = Vec::new();
    for p in table.panels() {
        for &sigma_range in &QUARTILES {
            cells.push(CellReport {
                l: p.l,
                gamma_range: (p.a, p.b),
                sigma_range,
                evaluations: 0,
                max_rel: 0.0,
                worst: (0.0, 0),
            });
        }
    }
    let groups = cell_samples(table, opts.samples, opts.seed);
    let results = par_map(&groups, opts.jobs, |_, (_, gamma, ns)| {
        let mut worst = (0.0f64, 0u64);
        for &n in ns {
            let want = oracle(n, *gamma)?;
            let got = table.eval(&EvalQuery::n(*gamma, n))?.chi;
            let rel = (got - want).abs() / want.abs();
            if !(rel <= worst.0) {
                worst = (rel, n);
            }
        }
        Ok::<_, CliError>(worst)
    })
    .map_err(|(_, e)| e)?;
    for ((cell, gamma, ns), (rel, n)) in groups.iter().zip(results) {
        let c = &mut cells[*cell];
        c.evaluations += ns.len();
        if !(rel <= c.max_rel) {
            c.max_rel = rel;
            c.worst = (*gamma, n);
        }
    }
    let xi = xi_check(table, opts)?;
    Ok(VerifyReport { cells, xi })
}

/// `|ξ(χ_n(γ)) − n|` on random `(γ, n)` in the table range.
pub fn xi_check(table: &ChiTable, opts: &VerifyOptions) -> Result<XiReport, CliError> {
    let (lo, hi) = table.gamma_range();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5849_5f43_4845_434b);
    let points: Vec<(f64, u64)> = (0..opts.xi_samples)
        .map(|_| {
            let gamma = rng.gen_range(lo..=hi);
            (gamma, rng.gen_range(0..=(1.1 * gamma).floor() as u64))
        })
        .collect();
    let errs = par_map(&points, opts.jobs, |_, &(gamma, n)| {
        let chi = oracle(n, gamma)?;
        let xi = xi_of_chi(chi, gamma)
            .map_err(|e| CliError::Verification(format!("phase evaluation failed at gamma = {gamma}, n = {n}: {e}")))?;
        Ok::<_, CliError>((xi - n as f64).abs())
    })
    .map_err(|(_, e)| e)?;
    let mut report = XiReport { samples: points.len(), max_abs: 0.0, worst: (0.0, 0) };
    for (&p, e) in points.iter().zip(errs) {
        if !(e <= report.max_abs) {
            report.max_abs = e;
            report.worst = p;
        }
    }
    Ok(report)
}
