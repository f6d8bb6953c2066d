//! Monte-Carlo experiments reproducing the mana figures as tables.
//!
//! Every grid point draws from its own seed, derived from the master seed
//! and the point's coordinates, so tables are reproducible bit-for-bit and
//! independent of thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::ensembles::{batch_records, derive_seed, sample_haar_pure, EnsembleSpec, SeededStream};
use crate::error::{ManaError, Result};
use crate::output::{Cell, Table};
use crate::predictions::{
    exact_mixed_norm, exact_pure_norm, gaussian_variance, gaussian_wigner_norm, reduced_deficit,
    ExactMixedParams,
};
use crate::qudit::check_dim;
use crate::stats::{log_log_slope, Summary};
use crate::wigner::{wigner_fft, wigner_norm};

/// Width of the entropy-deficit bins, in nats.
pub const DELTA_BIN_WIDTH: f64 = 0.05;

/// Fewest samples a bin needs before it is reported.
pub const MIN_BIN_SAMPLES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FigureId {
    MixedIntro,
    MixedDetail,
    MixedVar,
    ExactDb,
    Ensembles,
    PureNorm,
    PureStd,
    PureMana,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::MixedIntro,
        FigureId::MixedDetail,
        FigureId::MixedVar,
        FigureId::ExactDb,
        FigureId::Ensembles,
        FigureId::PureNorm,
        FigureId::PureStd,
        FigureId::PureMana,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::MixedIntro => "fig_mixed_intro",
            FigureId::MixedDetail => "fig_mixed_detail",
            FigureId::MixedVar => "fig_mixed_var",
            FigureId::ExactDb => "fig_exact_db",
            FigureId::Ensembles => "fig_ensembles",
            FigureId::PureNorm => "fig_pure_norm",
            FigureId::PureStd => "fig_pure_std",
            FigureId::PureMana => "fig_pure_mana",
        }
    }

    fn tag(&self) -> u64 {
        *self as u64 + 1
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = ManaError;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| ManaError::OutOfRegime(format!("unknown experiment `{s}`")))
    }
}

/// One experiment run. `dims` are system dimensions; `knobs` are ancilla
/// dimensions or mixture sizes depending on the figure.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub figure: FigureId,
    pub dims: Vec<usize>,
    pub knobs: Vec<usize>,
    pub delta_step: f64,
    pub n_samples: usize,
    pub master_seed: u64,
}

fn odd_range(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).filter(|d| d % 2 == 1).collect()
}

fn primes_between(lo: usize, hi: usize) -> Vec<usize> {
    (lo.max(2)..=hi)
        .filter(|&n| (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0))
        .collect()
}

/// Mixture sizes / ancilla dimensions spanning `Δ` from `ln d` down to near 0.
pub fn ensemble_knobs() -> Vec<usize> {
    let mut v: Vec<usize> = (1..=40).collect();
    v.extend([50, 70, 100, 150, 200, 300, 500]);
    v
}

impl ExperimentConfig {
    /// Desk-scale defaults: `d ≤ 27`, 1000 samples per point.
    pub fn default_for(figure: FigureId) -> Self {
        let (dims, knobs) = match figure {
            FigureId::MixedIntro => (vec![3, 5, 9, 15, 27], vec![]),
            FigureId::MixedDetail => (vec![3, 5, 9, 15, 27], primes_between(3, 71)),
            FigureId::MixedVar => (vec![5], (1..=30).collect()),
            FigureId::ExactDb => (vec![3, 5], (1..=13).collect()),
            FigureId::Ensembles => (vec![11], ensemble_knobs()),
            FigureId::PureNorm => (odd_range(3, 27), vec![]),
            FigureId::PureStd => (vec![3, 5, 7, 9, 15, 27], vec![]),
            FigureId::PureMana => (odd_range(3, 27), vec![]),
        };
        ExperimentConfig {
            figure,
            dims,
            knobs,
            delta_step: 0.1,
            n_samples: 1000,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1 {
            return Err(ManaError::out_of_range("n_samples", 0.0, "≥ 1"));
        }
        if self.dims.is_empty() {
            return Err(ManaError::OutOfRegime("no dimensions given".into()));
        }
        for &d in &self.dims {
            check_dim(d)?;
        }
        if self.knobs.contains(&0) {
            return Err(ManaError::out_of_range("knob", 0.0, "≥ 1"));
        }
        let needs_knobs = matches!(
            self.figure,
            FigureId::MixedDetail | FigureId::MixedVar | FigureId::ExactDb | FigureId::Ensembles
        );
        if needs_knobs && self.knobs.is_empty() {
            return Err(ManaError::OutOfRegime(format!(
                "{} needs at least one knob value",
                self.figure
            )));
        }
        if !(self.delta_step > 0.0) {
            return Err(ManaError::out_of_range("delta_step", self.delta_step, "(0, ∞)"));
        }
        Ok(())
    }

    fn seed(&self, a: u64, b: u64) -> u64 {
        let s = derive_seed(self.master_seed, self.figure.tag());
        derive_seed(derive_seed(s, a), b)
    }
}

/// Runs the configured experiment.
pub fn run_figure(config: &ExperimentConfig) -> Result<Table> {
    config.validate()?;
    match config.figure {
        FigureId::MixedIntro => fig_mixed_intro(config),
        FigureId::MixedDetail => fig_mixed_detail(config),
        FigureId::MixedVar => fig_mixed_var(config),
        FigureId::ExactDb => fig_exact_db(config),
        FigureId::Ensembles => fig_ensembles(config),
        FigureId::PureNorm => fig_pure_norm(config),
        FigureId::PureStd => fig_pure_std(config),
        FigureId::PureMana => fig_pure_mana(config),
    }
}

/// Wigner norm and mana of `n` Haar pure states on `d` dimensions.
pub fn pure_norms(d: usize, n: usize, seed: u64) -> Result<Vec<f64>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let psi = sample_haar_pure(d, &SeededStream::new(seed, i))?;
            Ok(wigner_norm(&wigner_fft(&psi)?))
        })
        .collect()
}

/// Realized `(Δ, Wigner norm)` for `n` samples of an ensemble.
pub fn ensemble_samples(spec: &EnsembleSpec, n: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    Ok(batch_records(spec, n, seed)?
        .into_iter()
        .map(|r| (r.delta, r.wigner_norm))
        .collect())
}

/// Target deficits `0, step, 2·step, …` up to `ln d`, with `ln d` included.
pub fn delta_grid(d: usize, step: f64) -> Vec<f64> {
    let max = (d as f64).ln();
    let mut v: Vec<f64> = (0..)
        .map(|i| i as f64 * step)
        .take_while(|&x| x < max - 1e-9)
        .collect();
    v.push(max);
    v
}

fn ln_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| x.ln()).collect()
}

/// Index of the `DELTA_BIN_WIDTH` bin containing `delta`.
pub fn delta_bin(delta: f64) -> i64 {
    (delta / DELTA_BIN_WIDTH).floor() as i64
}

fn fig_mixed_intro(cfg: &ExperimentConfig) -> Result<Table> {
    let mut t = Table::new(&[
        "d",
        "delta",
        "n_samples",
        "mean_mana",
        "stderr",
        "pred_gaussian",
        "mean_norm",
        "norm_stderr",
    ]);
    for &d in &cfg.dims {
        for (k, delta) in delta_grid(d, cfg.delta_step).into_iter().enumerate() {
            let spec = EnsembleSpec::SimpleMixture { dim: d, delta };
            let samples = ensemble_samples(&spec, cfg.n_samples, cfg.seed(d as u64, k as u64))?;
            let norms: Vec<f64> = samples.iter().map(|s| s.1).collect();
            let m = Summary::of(&ln_all(&norms));
            let w = Summary::of(&norms);
            t.push(vec![
                d.into(),
                delta.into(),
                cfg.n_samples.into(),
                m.mean.into(),
                m.stderr.into(),
                gaussian_wigner_norm(delta)?.ln().into(),
                w.mean.into(),
                w.stderr.into(),
            ]);
        }
    }
    Ok(t)
}

/// Per-sample reduced-state mana at `d_a = 5` for each ancilla dimension,
/// plus per-`Δ` means of simple mixtures for each `d`.
fn fig_mixed_detail(cfg: &ExperimentConfig) -> Result<Table> {
    const HIST_D_A: usize = 5;
    let mut t = Table::new(&[
        "panel",
        "d",
        "knob",
        "sample_index",
        "delta",
        "mana",
        "stderr",
        "pred_gaussian",
    ]);
    for (k, &d_b) in cfg.knobs.iter().enumerate() {
        let spec = EnsembleSpec::Reduced { d_a: HIST_D_A, d_b };
        let samples = ensemble_samples(&spec, cfg.n_samples, cfg.seed(0, k as u64))?;
        for (i, (delta, norm)) in samples.into_iter().enumerate() {
            t.push(vec![
                "histogram".into(),
                HIST_D_A.into(),
                d_b.into(),
                i.into(),
                delta.into(),
                norm.ln().into(),
                Cell::Empty,
                gaussian_wigner_norm(delta)?.ln().into(),
            ]);
        }
    }
    for &d in &cfg.dims {
        for (k, delta) in delta_grid(d, cfg.delta_step).into_iter().enumerate() {
            let spec = EnsembleSpec::SimpleMixture { dim: d, delta };
            let samples = ensemble_samples(&spec, cfg.n_samples, cfg.seed(d as u64, k as u64))?;
            let m = Summary::of(&samples.iter().map(|s| s.1.ln()).collect::<Vec<_>>());
            t.push(vec![
                "finite_size".into(),
                d.into(),
                Cell::Empty,
                Cell::Empty,
                delta.into(),
                m.mean.into(),
                m.stderr.into(),
                gaussian_wigner_norm(delta)?.ln().into(),
            ]);
        }
    }
    Ok(t)
}

fn bin_center(bin: i64) -> f64 {
    (bin as f64 + 0.5) * DELTA_BIN_WIDTH
}

/// Standard deviation of the Wigner norm of reduced states, binned both by
/// realized `Δ` and by ancilla dimension.
fn fig_mixed_var(cfg: &ExperimentConfig) -> Result<Table> {
    let mut t = Table::new(&[
        "d",
        "binning",
        "knob",
        "delta",
        "n_samples",
        "std_norm",
        "std_stderr",
        "pred_std",
    ]);
    for &d in &cfg.dims {
        let mut pooled: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
        let mut by_knob = Vec::new();
        for (k, &d_b) in cfg.knobs.iter().enumerate() {
            let spec = EnsembleSpec::Reduced { d_a: d, d_b };
            let samples = ensemble_samples(&spec, cfg.n_samples, cfg.seed(d as u64, k as u64))?;
            for &(delta, norm) in &samples {
                pooled.entry(delta_bin(delta)).or_default().push(norm);
            }
            let norms: Vec<f64> = samples.iter().map(|s| s.1).collect();
            by_knob.push((d_b, reduced_deficit(d, d_b)?, Summary::of(&norms)));
        }
        for (bin, norms) in pooled {
            if norms.len() < MIN_BIN_SAMPLES {
                continue;
            }
            let delta = bin_center(bin).min((d as f64).ln());
            let s = Summary::of(&norms);
            t.push(vec![
                d.into(),
                "delta".into(),
                Cell::Empty,
                delta.into(),
                s.n.into(),
                s.std.into(),
                s.std_stderr.into(),
                gaussian_variance(d, delta)?.sqrt().into(),
            ]);
        }
        for (d_b, delta, s) in by_knob {
            t.push(vec![
                d.into(),
                "d_b".into(),
                d_b.into(),
                delta.into(),
                s.n.into(),
                s.std.into(),
                s.std_stderr.into(),
                gaussian_variance(d, delta)?.sqrt().into(),
            ]);
        }
    }
    Ok(t)
}

fn fig_exact_db(cfg: &ExperimentConfig) -> Result<Table> {
    let mut t = Table::new(&[
        "d_a",
        "d_b",
        "n_samples",
        "mean_mana",
        "stderr",
        "pred_exact",
        "mean_norm",
        "norm_stderr",
        "pred_exact_norm",
    ]);
    for &d_a in &cfg.dims {
        for &d_b in &cfg.knobs {
            let spec = EnsembleSpec::Reduced { d_a, d_b };
            let samples =
                ensemble_samples(&spec, cfg.n_samples, cfg.seed(d_a as u64, d_b as u64))?;
            let norms: Vec<f64> = samples.iter().map(|s| s.1).collect();
            let m = Summary::of(&ln_all(&norms));
            let w = Summary::of(&norms);
            let exact = exact_mixed_norm(&ExactMixedParams::new(d_a, d_b)?)?;
            t.push(vec![
                d_a.into(),
                d_b.into(),
                cfg.n_samples.into(),
                m.mean.into(),
                m.stderr.into(),
                exact.ln().into(),
                w.mean.into(),
                w.stderr.into(),
                exact.into(),
            ]);
        }
    }
    Ok(t)
}

/// Mana per realized-`Δ` bin for one ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedMana {
    pub bin: i64,
    pub mean_delta: f64,
    pub mana: Summary,
}

/// Bins `(Δ, norm)` samples and summarizes mana in bins holding at least
/// `MIN_BIN_SAMPLES` samples.
pub fn bin_mana(samples: &[(f64, f64)]) -> Vec<BinnedMana> {
    let mut bins: BTreeMap<i64, Vec<(f64, f64)>> = BTreeMap::new();
    for &s in samples {
        bins.entry(delta_bin(s.0)).or_default().push(s);
    }
    bins.into_iter()
        .filter(|(_, v)| v.len() >= MIN_BIN_SAMPLES)
        .map(|(bin, v)| BinnedMana {
            bin,
            mean_delta: v.iter().map(|s| s.0).sum::<f64>() / v.len() as f64,
            mana: Summary::of(&v.iter().map(|s| s.1.ln()).collect::<Vec<_>>()),
        })
        .collect()
}

/// The three-ensemble comparison at dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleComparison {
    pub d: usize,
    pub average: Vec<BinnedMana>,
    pub reduced: Vec<BinnedMana>,
    /// Simple mixtures drawn at the pooled mean `Δ` of the other two
    /// ensembles in each shared bin.
    pub simple: Vec<BinnedMana>,
}

pub fn compare_ensembles(
    d: usize,
    knobs: &[usize],
    n_samples: usize,
    seed_of: impl Fn(u64, u64) -> u64 + Sync,
) -> Result<EnsembleComparison> {
    let collect = |which: u64| -> Result<Vec<(f64, f64)>> {
        let mut all = Vec::new();
        for (k, &knob) in knobs.iter().enumerate() {
            let spec = if which == 2 {
                EnsembleSpec::AverageMixture { dim: d, n: knob }
            } else {
                EnsembleSpec::Reduced { d_a: d, d_b: knob }
            };
            all.extend(ensemble_samples(&spec, n_samples, seed_of(which, k as u64))?);
        }
        Ok(all)
    };
    let average = bin_mana(&collect(2)?);
    let reduced = bin_mana(&collect(3)?);
    let mut simple = Vec::new();
    for a in &average {
        let Some(r) = reduced.iter().find(|r| r.bin == a.bin) else {
            continue;
        };
        let na = a.mana.n as f64;
        let nr = r.mana.n as f64;
        let target = ((a.mean_delta * na + r.mean_delta * nr) / (na + nr)).min((d as f64).ln());
        let spec = EnsembleSpec::SimpleMixture { dim: d, delta: target };
        let samples = ensemble_samples(&spec, n_samples, seed_of(1, a.bin as u64))?;
        simple.push(BinnedMana {
            bin: a.bin,
            mean_delta: target,
            mana: Summary::of(&samples.iter().map(|s| s.1.ln()).collect::<Vec<_>>()),
        });
    }
    Ok(EnsembleComparison {
        d,
        average,
        reduced,
        simple,
    })
}

fn fig_ensembles(cfg: &ExperimentConfig) -> Result<Table> {
    let mut t = Table::new(&[
        "d",
        "ensemble",
        "bin_lo",
        "delta",
        "n_samples",
        "mean_mana",
        "stderr",
        "pred_gaussian",
    ]);
    for &d in &cfg.dims {
        let cmp = compare_ensembles(d, &cfg.knobs, cfg.n_samples, |w, k| {
            cfg.seed(d as u64 * 4 + w, k)
        })?;
        for (name, rows) in [
            ("simple_mixture", &cmp.simple),
            ("average_mixture", &cmp.average),
            ("reduced", &cmp.reduced),
        ] {
            for b in rows {
                t.push(vec![
                    d.into(),
                    name.into(),
                    (b.bin as f64 * DELTA_BIN_WIDTH).into(),
                    b.mean_delta.into(),
                    b.mana.n.into(),
                    b.mana.mean.into(),
                    b.mana.stderr.into(),
                    gaussian_wigner_norm(b.mean_delta)?.ln().into(),
                ]);
            }
        }
    }
    Ok(t)
}

fn fig_pure_norm(cfg: &ExperimentConfig) -> Result<Table> {
    let mut t = Table::new(&[
        "d",
        "n_samples",
        "mean_norm",
        "stderr",
        "pred_exact",
        "pred_gaussian",
    ]);
    for &d in &cfg.dims {
        let s = Summary::of(&pure_norms(d, cfg.n_samples, cfg.seed(d as u64, 0))?);
        t.push(vec![
            d.into(),
            cfg.n_samples.into(),
            s.mean.into(),
            s.stderr.into(),
            exact_pure_norm(d)?.into(),
            gaussian_wigner_norm((d as f64).ln())?.into(),
        ]);
    }
    Ok(t)
}

/// Standard deviation of the pure-state Wigner norm with the Gaussian
/// prediction and a power law fitted to the sampled values.
fn fig_pure_std(cfg: &ExperimentConfig) -> Result<Table> {
    let mut rows = Vec::new();
    for &d in &cfg.dims {
        let s = Summary::of(&pure_norms(d, cfg.n_samples, cfg.seed(d as u64, 0))?);
        rows.push((d, s));
    }
    let fit = if rows.len() >= 2 {
        let xs: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
        let ys: Vec<f64> = rows.iter().map(|r| r.1.std).collect();
        let slope = log_log_slope(&xs, &ys);
        let lx: Vec<f64> = ln_all(&xs);
        let ly: Vec<f64> = ln_all(&ys);
        let intercept = (ly.iter().sum::<f64>() - slope * lx.iter().sum::<f64>()) / lx.len() as f64;
        Some((slope, intercept))
    } else {
        None
    };
    let mut t = Table::new(&[
        "d",
        "n_samples",
        "std_norm",
        "std_stderr",
        "pred_gaussian_std",
        "fit_std",
    ]);
    for (d, s) in rows {
        let fitted = fit.map(|(b, a)| (a + b * (d as f64).ln()).exp());
        t.push(vec![
            d.into(),
            s.n.into(),
            s.std.into(),
            s.std_stderr.into(),
            gaussian_variance(d, (d as f64).ln())?.sqrt().into(),
            fitted.into(),
        ]);
    }
    Ok(t)
}

fn fig_pure_mana(cfg: &ExperimentConfig) -> Result<Table> {
    let mut t = Table::new(&[
        "d",
        "n_samples",
        "mean_mana",
        "stderr",
        "ln_mean_norm",
        "deviation",
        "pred_exact",
        "pred_gaussian",
    ]);
    for &d in &cfg.dims {
        let norms = pure_norms(d, cfg.n_samples, cfg.seed(d as u64, 0))?;
        let m = Summary::of(&ln_all(&norms));
        let ln_mean = Summary::of(&norms).mean.ln();
        t.push(vec![
            d.into(),
            cfg.n_samples.into(),
            m.mean.into(),
            m.stderr.into(),
            ln_mean.into(),
            (m.mean - ln_mean).into(),
            exact_pure_norm(d)?.ln().into(),
            gaussian_wigner_norm((d as f64).ln())?.ln().into(),
        ]);
    }
    Ok(t)
}

/// Mana of every sample, for checks that apply state by state.
pub fn sample_mana(spec: &EnsembleSpec, n: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    Ok(batch_records(spec, n, seed)?
        .into_iter()
        .map(|r| (r.s2, r.mana))
        .collect())
}
