//! Latency measurement in the layout of a (γ range × σ range) table.

use std::hint::black_box;
use std::time::Instant;

use chitbl_core::chitab::{ChiTable, EvalQuery};
use chitbl_core::legendre_eig::chi_integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::verify::{n_range, QUARTILES};

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    pub reps: usize,
    /// Random queries per cell.
    pub samples: usize,
    pub seed: u64,
    /// Eigensolver calls per cell for the comparison column; 0 skips it.
    pub oxr_samples: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { reps: 100, samples: 100, seed: 0, oxr_samples: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub l: u32,
    pub gamma_range: (f64, f64),
    pub sigma_range: (f64, f64),
    /// Table evaluations performed.
    pub evaluations: u64,
    /// Mean seconds per table evaluation, loop overhead removed.
    pub table_mean: f64,
    pub oxr_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub cells: Vec<BenchCell>,
    pub reps: usize,
}

impl BenchReport {
    pub fn evaluations(&self) -> u64 {
        self.cells.iter().map(|c| c.evaluations).sum()
    }

    /// Mean over all table evaluations.
    pub fn mean_latency(&self) -> f64 {
        let total: f64 = self.cells.iter().map(|c| c.table_mean * c.evaluations as f64).sum();
        total / self.evaluations() as f64
    }

    /// Largest over smallest cell latency.
    pub fn table_spread(&self) -> f64 {
        let (lo, hi) = self
            .cells
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), c| (lo.min(c.table_mean), hi.max(c.table_mean)));
        hi / lo
    }

    /// Per-panel mean of the eigensolver column, in panel order.
    pub fn oxr_by_panel(&self) -> Vec<(u32, f64)> {
        let mut out: Vec<(u32, f64, usize)> = Vec::new();
        for c in &self.cells {
            let Some(t) = c.oxr_mean else { continue };
            match out.last_mut() {
                Some(last) if last.0 == c.l => {
                    last.1 += t;
                    last.2 += 1;
                }
                _ => out.push((c.l, t, 1)),
            }
        }
        out.into_iter().map(|(l, s, n)| (l, s / n as f64)).collect()
    }

    pub fn oxr_increasing(&self) -> bool {
        self.oxr_by_panel().windows(2).all(|w| w[1].1 > w[0].1)
    }
}

fn queries(rng: &mut ChaCha8Rng, a: f64, b: f64, lo: f64, hi: f64, count: usize) -> Vec<EvalQuery> {
    (0..count)
        .map(|_| {
            let gamma = rng.gen_range(a..=b);
            let (n0, n1) = n_range(gamma, lo, hi);
            EvalQuery::n(gamma, rng.gen_range(n0..=n1))
        })
        .collect()
}

fn time_loop(reps: usize, qs: &[EvalQuery], mut body: impl FnMut(&EvalQuery)) -> f64 {
    let start = Instant::now();
    for _ in 0..reps {
        for q in qs {
            body(black_box(q));
        }
    }
    start.elapsed().as_secs_f64()
}

pub fn bench(table: &ChiTable, opts: &BenchOptions) -> BenchReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cells = Vec::new();
    for p in table.panels() {
        for &(lo, hi) in &QUARTILES {
            let qs = queries(&mut rng, p.a, p.b, lo, hi, opts.samples);
            let mut evaluations = 0u64;
            let busy = time_loop(opts.reps, &qs, |q| {
                evaluations += 1;
                let _ = black_box(table.eval(q));
            });
            let empty = time_loop(opts.reps, &qs, |q| {
                black_box(q);
            });
            let table_mean = ((busy - empty) / evaluations.max(1) as f64).max(0.0);
            let oxr_mean = (opts.oxr_samples > 0).then(|| {
                let qs = queries(&mut rng, p.a, p.b, lo, hi, opts.oxr_samples);
                let t = time_loop(1, &qs, |q| {
                    let chitbl_core::chitab::QueryIndex::N(n) = q.index else { return };
                    let _ = black_box(chi_integer(n as usize, q.gamma));
                });
                t / qs.len() as f64
            });
            cells.push(BenchCell {
                l: p.l,
                gamma_range: (p.a, p.b),
                sigma_range: (lo, hi),
                evaluations,
                table_mean,
                oxr_mean,
            });
        }
    }
    BenchReport { cells, reps: opts.reps }
}
