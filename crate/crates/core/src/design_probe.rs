//! Chebyshev expansion of the Wigner norm and tail bounds for telling
//! Haar-random states apart from low-mana ensembles.

use std::f64::consts::{FRAC_2_PI, PI};

use rayon::prelude::*;

use crate::ensembles::{sample_haar_pure, SeededStream};
use crate::error::{ManaError, Result};
use crate::output::Table;
use crate::predictions::exact_pure_norm;
use crate::qudit::check_dim;
use crate::wigner::{wigner_fft, wigner_norm, WignerFunction};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let nf = n as f64;
    (p, nf * (z * p - p0) / (z * z - 1.0))
}

/// Chebyshev coefficients of `|x|` on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    pub coeffs: Vec<f64>,
    pub max_order: usize,
}

impl ChebyshevSeries {
    /// `Σ_n τ_n T_n(x)` by Clenshaw's recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }

    /// `Σ_{p,q} Σ_n τ_n T_n(W(p,q))`.
    pub fn reconstruct(&self, w: &WignerFunction) -> f64 {
        w.values().iter().map(|&x| self.eval(x)).sum()
    }
}

/// `τ_n` from Gauss–Legendre quadrature of the Fourier integrals of
/// `|cos θ|` over `[0, 2π]`, split at the kinks `π/2` and `3π/2`.
pub fn chebyshev_coeffs(k: usize) -> Result<ChebyshevSeries> {
    if k < 2 {
        return Err(ManaError::out_of_range("K", k as f64, "K ≥ 2"));
    }
    let (x, w) = gauss_legendre(k + 64);
    let pieces = [(0.0, 0.5 * PI), (0.5 * PI, 1.5 * PI), (1.5 * PI, 2.0 * PI)];
    let mut nodes = Vec::with_capacity(3 * x.len());
    for (lo, hi) in pieces {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (xi, wi) in x.iter().zip(&w) {
            let theta: f64 = mid + half * xi;
            nodes.push((theta, wi * half * theta.cos().abs()));
        }
    }
    let coeffs = (0..=k)
        .map(|n| {
            let integral: f64 = nodes
                .iter()
                .map(|&(theta, weight)| weight * (n as f64 * theta).cos())
                .sum();
            if n == 0 {
                integral / (2.0 * PI)
            } else {
                integral / PI
            }
        })
        .collect();
    Ok(ChebyshevSeries { coeffs, max_order: k })
}

/// `τ_0 = 2/π`, `τ_{2k} = (4/π)(−1)^{k+1}/(4k²−1)`, odd orders vanish.
pub fn chebyshev_closed_form(n: usize) -> f64 {
    if n == 0 {
        return FRAC_2_PI;
    }
    if n % 2 == 1 {
        return 0.0;
    }
    let k = (n / 2) as f64;
    let sign = if (n / 2) % 2 == 1 { 1.0 } else { -1.0 };
    4.0 / PI * sign / (4.0 * k * k - 1.0)
}

/// Truncated reconstruction of the Wigner norm at order `k`.
pub fn reconstruct_wigner_norm(w: &WignerFunction, k: usize) -> Result<f64> {
    Ok(chebyshev_coeffs(k)?.reconstruct(w))
}

/// A-priori bound on `|reconstruct − wigner_norm|` for `D²` points:
/// `(2/π) D² / (K + 1)`.
pub fn truncation_bound(big_d: usize, k: usize) -> f64 {
    FRAC_2_PI * (big_d * big_d) as f64 / (k as f64 + 1.0)
}

/// `min(1, 1/(D δ²))`.
pub fn haar_tail_bound(big_d: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(ManaError::out_of_range("δ", delta, "(0, ∞)"));
    }
    Ok((1.0 / (big_d as f64 * delta * delta)).min(1.0))
}

/// Wigner-norm threshold `ε^{−c t⁴ lg t}` of a near-Clifford `t`-design.
pub fn design_norm_threshold(t: u32, eps: f64, c: f64) -> f64 {
    let t = t as f64;
    eps.powf(-c * t.powi(4) * t.log2())
}

/// Probability bound `1/(D(√(2/π)√D − w))` with `w = ε^{−c t⁴ lg t}`,
/// valid for `D > w²`.
pub fn confusion_probability(big_d: f64, t: u32, eps: f64, c: f64) -> Result<f64> {
    if t < 1 || !(eps > 0.0 && eps <= 1.0) {
        return Err(ManaError::OutOfRegime(format!(
            "need t ≥ 1 and ε ∈ (0, 1], got t = {t}, ε = {eps}"
        )));
    }
    let w = design_norm_threshold(t, eps, c);
    let gap = FRAC_2_PI.sqrt() * big_d.sqrt() - w;
    if !(big_d > w * w) || !(gap > 0.0) {
        return Err(ManaError::OutOfRegime(format!(
            "D = {big_d} is not above ε^(-2ct⁴lg t) = {}",
            w * w
        )));
    }
    Ok(1.0 / (big_d * gap))
}

/// Haar pure states with Wigner norm below a threshold, next to the
/// Chebyshev-inequality bound.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishResult {
    pub d: usize,
    pub threshold: f64,
    pub n_samples: usize,
    pub empirical_rate: f64,
    pub stderr: f64,
    /// `haar_tail_bound(d, ⟨W⟩ − threshold)`, or 1 when the threshold is
    /// not below the mean.
    pub analytic_bound: f64,
}

impl DistinguishResult {
    /// `rate ≤ bound + n_sigma · stderr`.
    pub fn within_bound(&self, n_sigma: f64) -> bool {
        self.empirical_rate <= self.analytic_bound + n_sigma * self.stderr
    }
}

pub fn empirical_distinguish(
    d: usize,
    n_samples: usize,
    threshold: f64,
    master_seed: u64,
) -> Result<DistinguishResult> {
    check_dim(d)?;
    if n_samples < 1 {
        return Err(ManaError::out_of_range("n_samples", 0.0, "≥ 1"));
    }
    let below = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| -> Result<usize> {
            let psi = sample_haar_pure(d, &SeededStream::new(master_seed, i))?;
            Ok(usize::from(wigner_norm(&wigner_fft(&psi)?) < threshold))
        })
        .sum::<Result<usize>>()?;
    let n = n_samples as f64;
    let rate = below as f64 / n;
    let gap = exact_pure_norm(d)? - threshold;
    let bound = if gap > 0.0 { haar_tail_bound(d, gap)? } else { 1.0 };
    Ok(DistinguishResult {
        d,
        threshold,
        n_samples,
        empirical_rate: rate,
        stderr: (rate * (1.0 - rate) / n).sqrt(),
        analytic_bound: bound,
    })
}

/// `d,threshold,n_samples,empirical_rate,analytic_bound`.
pub fn distinguish_table(results: &[DistinguishResult]) -> Table {
    let mut t = Table::new(&["d", "threshold", "n_samples", "empirical_rate", "analytic_bound"]);
    for r in results {
        t.push(vec![
            r.d.into(),
            r.threshold.into(),
            r.n_samples.into(),
            r.empirical_rate.into(),
            r.analytic_bound.into(),
        ]);
    }
    t
}
