//! Command-line surface.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use chitbl_core::chitab::{ChiTable, EvalQuery, QueryIndex};
use clap::{Args, Parser, Subcommand};

use crate::bench::{bench, BenchOptions, BenchReport};
use crate::build::build_table;
use crate::error::CliError;
use crate::pool::default_jobs;
use crate::store::{load_table, save_table};
use crate::verify::{verify, VerifyOptions, VerifyReport, CHI_TOL, XI_TOL};

#[derive(Debug, Parser)]
#[command(name = "chitbl", version, about = "Precomputed tables of prolate spheroidal eigenvalues chi_n(gamma)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a table for panels lmin..=lmax (panel l covers gamma in [4^(2+l), 4^(3+l)]).
    Build(BuildArgs),
    /// Evaluate chi (and optionally the phase derivatives) at one point.
    Eval(EvalArgs),
    /// Compare the table with the eigensolver on random samples.
    Verify(VerifyArgs),
    /// Measure evaluation latency.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct TableArg {
    /// Table file.
    #[arg(long, env = "CHITBL_PATH")]
    pub table: Option<PathBuf>,
}

impl TableArg {
    fn load(&self) -> Result<ChiTable, CliError> {
        let path = self
            .table
            .as_deref()
            .ok_or_else(|| CliError::Usage("no table given: pass --table or set CHITBL_PATH".into()))?;
        load_table(path)
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=7))]
    pub lmin: u32,
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u32).range(1..=7))]
    pub lmax: u32,
    /// Worker threads (default: available cores).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    /// Output file (default: $CHITBL_PATH, else chitbl.bin).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Do not report per-node progress on stderr.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("index").required(true).args(["n", "sigma"])))]
pub struct EvalArgs {
    #[command(flatten)]
    pub table: TableArg,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Also print psi'(0), psi''(0), psi'''(0).
    #[arg(long)]
    pub derivs: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub table: TableArg,
    /// Random gammas per cell and random n per gamma.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
    /// Samples for the xi(chi_n) = n check.
    #[arg(long, default_value_t = 100)]
    pub xi_samples: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    /// Also write the per-cell results as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub table: TableArg,
    /// Repetitions of each evaluation.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub reps: u32,
    /// Random queries per cell.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Eigensolver calls per cell for the comparison column (0 skips it).
    #[arg(long, default_value_t = 0)]
    pub oxr_samples: u32,
    /// Also write the per-cell results as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Run a parsed command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Build(a) => cmd_build(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    }
}

fn io_err<'a>(path: &'a Path, action: &'static str) -> impl Fn(std::io::Error) -> CliError + 'a {
    move |source| CliError::Io { action, path: path.to_path_buf(), source }
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Io { action: "write", path: PathBuf::from("<stdout>"), source }
}

/// Seventeen significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_build(a: &BuildArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.lmin > a.lmax {
        return Err(CliError::Usage(format!("--lmin {} exceeds --lmax {}", a.lmin, a.lmax)));
    }
    let path = match &a.out {
        Some(p) => p.clone(),
        None => std::env::var_os("CHITBL_PATH").map_or_else(|| PathBuf::from("chitbl.bin"), PathBuf::from),
    };
    let jobs = a.jobs.map_or_else(default_jobs, |j| j as usize);
    let start = Instant::now();
    let quiet = a.quiet;
    let table = build_table(a.lmin, a.lmax, jobs, |l, i, gamma| {
        if !quiet {
            eprintln!("  node l={l} i={i:>2} gamma={gamma:.6e} done ({:.1} s)", start.elapsed().as_secs_f64());
        }
    })?;
    let elapsed = start.elapsed().as_secs_f64();
    let size = save_table(&table, &path)?;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(stdout_err);
    for p in table.panels() {
        let counts = p.nodes.iter().fold([0usize; 4], |mut acc, n| {
            for (c, m) in acc.iter_mut().zip(n.models()) {
                *c += m.pieces().len();
            }
            acc
        });
        w(
            out,
            format!(
                "panel l={} gamma=[{}, {}]: {} pieces (chi {}, d1 {}, d2 {}, d3 {})",
                p.l,
                p.a,
                p.b,
                p.piece_count(),
                counts[0],
                counts[1],
                counts[2],
                counts[3]
            ),
        )?;
    }
    w(out, format!("build time: {elapsed:.1} s with {jobs} job(s)"))?;
    w(out, format!("wrote {} ({size} bytes, {:.3} MB)", path.display(), size as f64 / 1e6))?;
    Ok(())
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let table = a.table.load()?;
    let index = match (a.n, a.sigma) {
        (Some(n), None) => QueryIndex::N(n),
        (None, Some(s)) => QueryIndex::Sigma(s),
        _ => return Err(CliError::Usage("give exactly one of --n and --sigma".into())),
    };
    let q = EvalQuery { gamma: a.gamma, index, want_derivatives: a.derivs };
    let ans = table.eval(&q)?;
    writeln!(out, "chi  {}", fmt17(ans.chi)).map_err(stdout_err)?;
    if let Some(d) = ans.derivatives {
        for (name, v) in ["psi1", "psi2", "psi3"].iter().zip(d) {
            writeln!(out, "{name} {}", fmt17(v)).map_err(stdout_err)?;
        }
    }
    Ok(())
}

pub fn print_verify(r: &VerifyReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{:<22} {:<14} {:>8} {:>12}  worst (gamma, n)", "gamma range", "sigma range", "evals", "max rel err")?;
    for c in &r.cells {
        writeln!(
            out,
            "{:<22} {:<14} {:>8} {:>12.3e}  ({:.6}, {}){}",
            format!("[{}, {}]", c.gamma_range.0, c.gamma_range.1),
            format!("[{:.2}, {:.2})", c.sigma_range.0, c.sigma_range.1),
            c.evaluations,
            c.max_rel,
            c.worst.0,
            c.worst.1,
            if c.max_rel <= CHI_TOL { "" } else { "  FAIL" }
        )?;
    }
    writeln!(
        out,
        "xi identity: {} samples, max |xi(chi_n) - n| = {:.3e} at (gamma, n) = ({:.6}, {}){}",
        r.xi.samples,
        r.xi.max_abs,
        r.xi.worst.0,
        r.xi.worst.1,
        if r.xi.max_abs <= XI_TOL { "" } else { "  FAIL" }
    )
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let table = a.table.load()?;
    let opts = VerifyOptions {
        samples: a.samples as usize,
        xi_samples: a.xi_samples as usize,
        seed: a.seed,
        jobs: a.jobs as usize,
    };
    let report = verify(&table, &opts)?;
    print_verify(&report, out).map_err(stdout_err)?;
    if let Some(path) = &a.csv {
        let mut s = String::from("gamma_lo,gamma_hi,sigma_lo,sigma_hi,evaluations,max_rel,worst_gamma,worst_n\n");
        for c in &report.cells {
            s += &format!(
                "{},{},{},{},{},{:e},{},{}\n",
                c.gamma_range.0, c.gamma_range.1, c.sigma_range.0, c.sigma_range.1, c.evaluations, c.max_rel, c.worst.0, c.worst.1
            );
        }
        std::fs::write(path, s).map_err(io_err(path, "write"))?;
    }
    if report.passed() {
        writeln!(out, "PASS").map_err(stdout_err)?;
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "max relative error {:.3e} (limit {CHI_TOL:e}), xi error {:.3e} (limit {XI_TOL:e})",
            report.max_rel(),
            report.xi.max_abs
        )))
    }
}

pub fn print_bench(r: &BenchReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{:<22} {:<14} {:>14} {:>14}", "gamma range", "sigma range", "table (s)", "eigensolver (s)")?;
    for c in &r.cells {
        writeln!(
            out,
            "{:<22} {:<14} {:>14.3e} {:>14}",
            format!("[{}, {}]", c.gamma_range.0, c.gamma_range.1),
            format!("[{:.2}, {:.2})", c.sigma_range.0, c.sigma_range.1),
            c.table_mean,
            c.oxr_mean.map_or_else(|| "-".to_string(), |t| format!("{t:.3e}"))
        )?;
    }
    writeln!(
        out,
        "{} evaluations ({} reps); mean {:.3e} s; max/min cell ratio {:.2}",
        r.evaluations(),
        r.reps,
        r.mean_latency(),
        r.table_spread()
    )?;
    if r.cells.iter().any(|c| c.oxr_mean.is_some()) {
        writeln!(out, "eigensolver time increasing across panels: {}", r.oxr_increasing())?;
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let table = a.table.load()?;
    let opts = BenchOptions {
        reps: a.reps as usize,
        samples: a.samples as usize,
        seed: a.seed,
        oxr_samples: a.oxr_samples as usize,
    };
    let report = bench(&table, &opts);
    print_bench(&report, out).map_err(stdout_err)?;
    if let Some(path) = &a.csv {
        let mut s = String::from("gamma_lo,gamma_hi,sigma_lo,sigma_hi,evaluations,table_mean_s,oxr_mean_s\n");
        for c in &report.cells {
            s += &format!(
                "{},{},{},{},{},{:e},{}\n",
                c.gamma_range.0,
                c.gamma_range.1,
                c.sigma_range.0,
                c.sigma_range.1,
                c.evaluations,
                c.table_mean,
                c.oxr_mean.map_or_else(String::new, |t| format!("{t:e}"))
            );
        }
        std::fs::write(path, s).map_err(io_err(path, "write"))?;
    }
    Ok(())
}
