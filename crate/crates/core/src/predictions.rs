//! Closed-form predictions for the Wigner norm and mana of random states:
//! the Gaussian approximation, exact pure-state and reduced-state moments,
//! saddle-point parameters and the quick mana estimate.

use std::f64::consts::{FRAC_2_PI, LN_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{ManaError, Result};
use crate::output::{Cell, Table};
use crate::qudit::check_dim;
use crate::special::{
    erf, hyp2f1_terminating, log_double_factorial_ratio, log_gamma, rational_to_log_signed,
    LogSigned,
};

/// Largest moment order accepted by the moment functions.
pub const MOMENT_CAP: u32 = 20;

/// Slack allowed when an entropy argument sits on the edge of its range.
const RANGE_SLACK: f64 = 1e-12;

/// Mean and variance of a single Wigner-function value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub mu: f64,
    pub sigma2: f64,
    pub delta: f64,
    pub big_d: usize,
}

impl GaussianParams {
    /// `μ = 1/D²` and `σ² = μ²(e^Δ − 1)`.
    pub fn from_deficit(big_d: usize, delta: f64) -> Result<Self> {
        if delta < 0.0 || !delta.is_finite() {
            return Err(ManaError::out_of_range("Δ", delta, "[0, ∞)"));
        }
        let mu = 1.0 / (big_d as f64 * big_d as f64);
        Ok(GaussianParams {
            mu,
            sigma2: mu * mu * delta.exp_m1(),
            delta,
            big_d,
        })
    }

    /// `σ / μ`.
    pub fn ratio(&self) -> f64 {
        self.sigma2.sqrt() / self.mu
    }
}

/// Mean Wigner norm of a Gaussian-distributed Wigner function with
/// `σ²/μ² = e^Δ − 1`:
/// `√(2/π)(σ/μ)e^{−μ²/2σ²} + erf(μ/(σ√2))`.
pub fn gaussian_wigner_norm(delta: f64) -> Result<f64> {
    if delta < 0.0 || !delta.is_finite() {
        return Err(ManaError::out_of_range("Δ", delta, "[0, ∞)"));
    }
    if delta == 0.0 {
        return Ok(1.0);
    }
    let r = delta.exp_m1().sqrt();
    Ok(FRAC_2_PI.sqrt() * r * (-0.5 / (r * r)).exp() + erf(1.0 / (r * 2f64.sqrt())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLimits {
    /// `√(2/π) e^{Δ/2}`.
    pub large_delta: f64,
    /// `1 + √(2/π) Δ^{3/2} e^{−1/(2Δ)}`.
    pub small_delta: f64,
}

pub fn gaussian_limits(delta: f64) -> Result<GaussianLimits> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(ManaError::out_of_range("Δ", delta, "(0, ∞)"));
    }
    let c = FRAC_2_PI.sqrt();
    Ok(GaussianLimits {
        large_delta: c * (0.5 * delta).exp(),
        small_delta: 1.0 + c * delta.powf(1.5) * (-0.5 / delta).exp(),
    })
}

/// Variance of the Wigner norm when the `D²` values are independent
/// Gaussians: `D^{−2}[e^Δ − ⟨W⟩²]`, clamped at 0.
pub fn gaussian_variance(big_d: usize, delta: f64) -> Result<f64> {
    if big_d < 2 {
        return Err(ManaError::out_of_range("D", big_d as f64, "D ≥ 2"));
    }
    let d = big_d as f64;
    let max = d.ln();
    if !(-RANGE_SLACK..=max + RANGE_SLACK).contains(&delta) {
        return Err(ManaError::out_of_range("Δ", delta, format!("[0, ln {big_d}]")));
    }
    let delta = delta.clamp(0.0, max);
    let w = gaussian_wigner_norm(delta)?;
    Ok(((delta.exp() - w * w) / (d * d)).max(0.0))
}

/// `d^{−1}(1 − 2/π)`, the large-`d` pure-state variance.
pub fn pure_variance_estimate(d: usize) -> f64 {
    (1.0 - FRAC_2_PI) / d as f64
}

/// Haar-averaged pure-state Wigner norm `d!!/(d−1)!!`.
pub fn exact_pure_norm(d: usize) -> Result<f64> {
    check_dim(d)?;
    Ok(log_double_factorial_ratio(d as u64)?.exp())
}

/// `∫_{−1}^{1} (1+x)^{a−1}(1−x)^{b−1}|x|^n dx / ∫_{−1}^{1} (1+x)^{a−1}(1−x)^{b−1} dx`
/// evaluated exactly by expanding the polynomial.
pub fn beta_abs_moment_exact(a: u64, b: u64, n: u32) -> BigRational {
    assert!(a >= 1 && b >= 1, "exponents must be positive");
    let poly = poly_mul(&binomial_row(a - 1, false), &binomial_row(b - 1, true));
    let mut num = BigRational::zero();
    let mut den = BigRational::zero();
    // ∫_{−1}^{1} |x|^n x^k dx = 2/(n+k+1) for even k, 0 for odd k
    for (k, c) in poly.iter().enumerate().step_by(2) {
        let c = BigRational::from_integer(c.clone());
        num += &c / BigRational::from_integer(BigInt::from(n as u64 + k as u64 + 1));
        den += c / BigRational::from_integer(BigInt::from(k as u64 + 1));
    }
    num / den
}

/// Coefficients of `(1 ± x)^m`.
fn binomial_row(m: u64, negate: bool) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    let mut c = BigInt::one();
    for k in 1..=m {
        c = c * BigInt::from(m - k + 1) / BigInt::from(k);
        row.push(if negate && k % 2 == 1 { -c.clone() } else { c.clone() });
    }
    row
}

fn poly_mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `⟨|W(p,q)|ⁿ⟩` over Haar pure states on `d` dimensions, computed exactly.
pub fn pure_abs_moment(d: usize, n: u32) -> Result<f64> {
    check_dim(d)?;
    if n > MOMENT_CAP {
        return Err(ManaError::out_of_range("n", n as f64, format!("[0, {MOMENT_CAP}]")));
    }
    let a = (d as u64 + 1) / 2;
    let b = (d as u64 - 1) / 2;
    let m = beta_abs_moment_exact(a, b, n);
    let scaled = m / BigRational::from_integer(BigInt::from(d as u64).pow(n));
    Ok(rational_to_log_signed(&scaled).to_f64())
}

/// Dimensions of a reduced state `Tr_B |ψ⟩⟨ψ|` on `d_a ⊗ d_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactMixedParams {
    pub d_a: usize,
    pub d_b: usize,
    /// `d_a · d_b`.
    pub big_d: u64,
    /// `d_b (d_a + 1)/2`.
    pub a: u64,
    /// `d_b (d_a − 1)/2`.
    pub b: u64,
}

impl ExactMixedParams {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        check_dim(d_a)?;
        if d_b < 1 {
            return Err(ManaError::out_of_range("d_B", d_b as f64, "d_B ≥ 1"));
        }
        let (da, db) = (d_a as u64, d_b as u64);
        Ok(ExactMixedParams {
            d_a,
            d_b,
            big_d: da * db,
            a: db * (da + 1) / 2,
            b: db * (da - 1) / 2,
        })
    }

    /// `ln[Γ(D) / (Γ(a)Γ(b) 2^{D−1})]`.
    fn log_prefactor(&self) -> Result<f64> {
        Ok(log_gamma(self.big_d as f64)?
            - log_gamma(self.a as f64)?
            - log_gamma(self.b as f64)?
            - (self.big_d - 1) as f64 * LN_2)
    }
}

/// `ln B(x, y)`.
fn log_beta(x: f64, y: f64) -> Result<f64> {
    Ok(log_gamma(x)? + log_gamma(y)? - log_gamma(x + y)?)
}

/// `⟨|W(p,q)|ⁿ⟩` for reduced states, from the terminating series
/// `B(n+1,b)₂F₁(1−a,n+1;n+1+b;−1) + B(n+1,a)₂F₁(1−b,n+1;n+1+a;−1)`.
pub fn char_fn_moment(params: &ExactMixedParams, n: u32) -> Result<f64> {
    Ok(char_fn_moment_log(params, n)?.to_f64())
}

pub fn char_fn_moment_log(params: &ExactMixedParams, n: u32) -> Result<LogSigned> {
    if n > MOMENT_CAP {
        return Err(ManaError::out_of_range("n", n as f64, format!("[0, {MOMENT_CAP}]")));
    }
    let (a, b, nf) = (params.a as f64, params.b as f64, n as f64);
    let f1 = hyp2f1_terminating(1.0 - a, nf + 1.0, nf + 1.0 + b, -1.0)?;
    let f2 = hyp2f1_terminating(1.0 - b, nf + 1.0, nf + 1.0 + a, -1.0)?;
    let t1 = LogSigned::from_ln(log_beta(nf + 1.0, b)?) * f1;
    let t2 = LogSigned::from_ln(log_beta(nf + 1.0, a)?) * f2;
    let scale = params.log_prefactor()? - nf * (params.d_a as f64).ln();
    Ok(LogSigned::from_ln(scale) * t1.add(t2))
}

/// Mean Wigner norm of reduced states:
/// `d_a Γ(D)/(2^{D−1}Γ(a)Γ(b)) [F₁/(b(b+1)) + F₂/(a(a+1))]`.
pub fn exact_mixed_norm(params: &ExactMixedParams) -> Result<f64> {
    let (a, b) = (params.a as f64, params.b as f64);
    let f1 = hyp2f1_terminating(1.0 - a, 2.0, 2.0 + b, -1.0)?;
    let f2 = hyp2f1_terminating(1.0 - b, 2.0, 2.0 + a, -1.0)?;
    let bracket = (f1 / LogSigned::from_f64(b * (b + 1.0)))
        .add(f2 / LogSigned::from_f64(a * (a + 1.0)));
    let scale = (params.d_a as f64).ln() + params.log_prefactor()?;
    Ok((LogSigned::from_ln(scale) * bracket).to_f64())
}

/// Saddle-point mean and variance of `W(p,q)` for reduced states:
/// `μ = d_B/(d_A(D−2))`, `σ² = 1/(d_A²(D−2))`.
///
/// `big_d` is `d_a` and `delta` is `ln(1 + σ²/μ²)`.
pub fn saddle_params(d_a: usize, d_b: usize) -> Result<GaussianParams> {
    let big_d = d_a * d_b;
    if d_a < 1 || d_b < 1 || big_d < 3 {
        return Err(ManaError::out_of_range("d_A·d_B", big_d as f64, "d_A·d_B ≥ 3"));
    }
    let (da, db, dd) = (d_a as u128, d_b as u128, big_d as u128 - 2);
    let mu = db as f64 / (da * dd) as f64;
    let sigma2 = 1.0 / (da * da * dd) as f64;
    // σ²/μ² = D − 2 over d_B² exactly
    let ratio = dd as f64 / (db * db) as f64;
    Ok(GaussianParams {
        mu,
        sigma2,
        delta: ratio.ln_1p(),
        big_d: d_a,
    })
}

/// Haar-averaged purity of a reduced state, `(d_A + d_B)/(d_A d_B + 1)`.
pub fn avg_purity(d_a: usize, d_b: usize) -> Result<f64> {
    if d_a < 1 || d_b < 1 {
        return Err(ManaError::out_of_range("dims", d_a.min(d_b) as f64, "≥ 1"));
    }
    Ok((d_a + d_b) as f64 / (d_a * d_b + 1) as f64)
}

/// Entropy deficit of the average reduced-state purity,
/// `ln d_a + ln avg_purity(d_a, d_b)`.
pub fn reduced_deficit(d_a: usize, d_b: usize) -> Result<f64> {
    Ok(((d_a as f64).ln() + avg_purity(d_a, d_b)?.ln()).max(0.0))
}

/// `max(0, ½[ℓ ln d − S₂ − ln(π/2)])`.
pub fn mana_quick_estimate(ell: u32, d: usize, s2: f64) -> Result<f64> {
    check_dim(d)?;
    let max = ell as f64 * (d as f64).ln();
    if !(-RANGE_SLACK..=max + RANGE_SLACK).contains(&s2) {
        return Err(ManaError::out_of_range("S2", s2, format!("[0, {ell} ln {d}]")));
    }
    Ok((0.5 * (max - s2 - (PI / 2.0).ln())).max(0.0))
}

/// A Monte-Carlo estimate paired with its closed-form prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    pub quantity: String,
    pub estimate: f64,
    pub stderr: f64,
    pub prediction: f64,
}

impl PredictionRecord {
    pub fn z_score(&self) -> f64 {
        let diff = (self.estimate - self.prediction).abs();
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

pub const PREDICTION_HEADER: [&str; 7] = [
    "d_a",
    "d_b",
    "delta",
    "pred_gaussian",
    "pred_exact",
    "pred_variance",
    "mana_quick",
];

/// Predictions for reduced states `(d_a, d_b)`, with `Δ` taken from the
/// average purity.
pub fn prediction_table_dims(d_a: usize, d_bs: &[usize]) -> Result<Table> {
    let mut t = Table::new(&PREDICTION_HEADER);
    for &d_b in d_bs {
        let params = ExactMixedParams::new(d_a, d_b)?;
        let delta = reduced_deficit(d_a, d_b)?;
        let s2 = (d_a as f64).ln() - delta;
        t.push(vec![
            d_a.into(),
            d_b.into(),
            delta.into(),
            gaussian_wigner_norm(delta)?.into(),
            exact_mixed_norm(&params)?.into(),
            gaussian_variance(d_a, delta)?.into(),
            mana_quick_estimate(1, d_a, s2.max(0.0))?.into(),
        ]);
    }
    Ok(t)
}

/// Gaussian predictions on a grid of entropy deficits at dimension `big_d`.
pub fn prediction_table_deltas(big_d: usize, deltas: &[f64]) -> Result<Table> {
    check_dim(big_d)?;
    let mut t = Table::new(&PREDICTION_HEADER);
    for &delta in deltas {
        let s2 = ((big_d as f64).ln() - delta).max(0.0);
        t.push(vec![
            big_d.into(),
            Cell::Empty,
            delta.into(),
            gaussian_wigner_norm(delta)?.into(),
            Cell::Empty,
            gaussian_variance(big_d, delta)?.into(),
            mana_quick_estimate(1, big_d, s2)?.into(),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gaussian_norm_examples() {
        assert_eq!(gaussian_wigner_norm(0.0).unwrap(), 1.0);
        let v = gaussian_wigner_norm(9f64.ln()).unwrap();
        assert!(close(v, 2.396, 1e-3), "{v}");
        let big = gaussian_wigner_norm(10.0).unwrap();
        let lim = FRAC_2_PI.sqrt() * 5f64.exp();
        assert!((big - lim).abs() / big < 0.01);
        assert!(gaussian_wigner_norm(-0.1).is_err());
        let p = GaussianParams::from_deficit(7, 1.3).unwrap();
        assert!(close(p.sigma2 / (p.mu * p.mu), 1.3f64.exp() - 1.0, 1e-12));
        assert!(close(p.mu, 1.0 / 49.0, 1e-18));
    }

    #[test]
    fn limits() {
        let l = gaussian_limits(6.0).unwrap();
        assert!((l.large_delta / gaussian_wigner_norm(6.0).unwrap() - 1.0).abs() < 0.01);
        let s = gaussian_limits(0.1).unwrap();
        assert!(close(s.small_delta, 1.0 + FRAC_2_PI.sqrt() * 0.1f64.powf(1.5) * (-5f64).exp(), 1e-15));
        let pure = gaussian_limits(11f64.ln()).unwrap().large_delta;
        assert!(close(pure, FRAC_2_PI.sqrt() * 11f64.sqrt(), 1e-12));
        assert!(gaussian_limits(0.0).is_err());
    }

    #[test]
    fn variance() {
        assert_eq!(gaussian_variance(25, 0.0).unwrap(), 0.0);
        for d in [25usize, 49, 101] {
            let v = gaussian_variance(d, (d as f64).ln()).unwrap();
            assert!((v / pure_variance_estimate(d) - 1.0).abs() < 0.01, "d={d}");
        }
        let v5 = gaussian_variance(5, 5f64.ln()).unwrap();
        assert!((v5 - 0.0727).abs() / 0.0727 < 0.02, "{v5}");
        assert!(gaussian_variance(5, 2.0).is_err());
        assert!(gaussian_variance(5, -0.5).is_err());
    }

    #[test]
    fn pure_norms() {
        assert!(close(exact_pure_norm(3).unwrap(), 1.5, 1e-14));
        assert!(close(exact_pure_norm(5).unwrap(), 1.875, 1e-14));
        assert!(close(exact_pure_norm(7).unwrap(), 2.1875, 1e-14));
        assert!(exact_pure_norm(4).is_err());
    }

    #[test]
    fn pure_moments() {
        assert!(close(pure_abs_moment(3, 1).unwrap(), 1.0 / 6.0, 1e-15));
        assert!(close(pure_abs_moment(5, 2).unwrap(), 1.0 / 125.0, 1e-17));
        assert!(close(pure_abs_moment(3, 0).unwrap(), 1.0, 1e-15));
        for d in [3usize, 5, 9, 15] {
            let m1 = pure_abs_moment(d, 1).unwrap() * (d * d) as f64;
            assert!(close(m1, exact_pure_norm(d).unwrap(), 1e-13));
            let m2 = pure_abs_moment(d, 2).unwrap();
            assert!(close(m2 * (d * d * d) as f64, 1.0, 1e-13));
        }
        assert!(pure_abs_moment(3, MOMENT_CAP + 1).is_err());
    }

    #[test]
    fn mixed_moments() {
        let p31 = ExactMixedParams::new(3, 1).unwrap();
        assert!(close(char_fn_moment(&p31, 1).unwrap(), 1.0 / 6.0, 1e-12));
        assert!(close(exact_mixed_norm(&p31).unwrap(), 1.5, 1e-12));
        let p51 = ExactMixedParams::new(5, 1).unwrap();
        assert!(close(exact_mixed_norm(&p51).unwrap(), 1.875, 1e-12));
        let p33 = ExactMixedParams::new(3, 3).unwrap();
        assert!(close(exact_mixed_norm(&p33).unwrap(), 147.0 / 128.0, 1e-12));
        for (da, db) in [(3, 4), (5, 7), (9, 2), (7, 40)] {
            let p = ExactMixedParams::new(da, db).unwrap();
            assert!(close(char_fn_moment(&p, 0).unwrap(), 1.0, 1e-10), "{da},{db}");
        }
        assert!(ExactMixedParams::new(4, 2).is_err());
        assert!(ExactMixedParams::new(3, 0).is_err());
    }

    #[test]
    fn mixed_norm_large_ancilla() {
        let mut prev = f64::INFINITY;
        for db in [1usize, 2, 5, 20, 60, 200] {
            let v = exact_mixed_norm(&ExactMixedParams::new(5, db).unwrap()).unwrap();
            assert!(v >= 1.0 && v < prev, "d_b={db}: {v}");
            prev = v;
        }
        assert!(prev - 1.0 < 1e-6);
    }

    #[test]
    fn saddle_and_purity() {
        let s = saddle_params(3, 5).unwrap();
        assert!(close(s.mu, 5.0 / 39.0, 1e-16));
        assert!(close(s.sigma2, 1.0 / 117.0, 1e-17));
        let far = saddle_params(3, 100).unwrap();
        assert!((far.mu * 9.0 - 1.0).abs() < 0.01);
        assert!(saddle_params(1, 2).is_err());
        assert!(close(avg_purity(3, 3).unwrap(), 0.6, 1e-16));
        assert_eq!(avg_purity(7, 1).unwrap(), 1.0);
        assert!(close(avg_purity(5, 13).unwrap(), 18.0 / 66.0, 1e-16));
    }

    #[test]
    fn quick_estimate() {
        let v = mana_quick_estimate(1, 3, 0.0).unwrap();
        assert!(close(v, 0.5 * (3.0 / (PI / 2.0)).ln(), 1e-15));
        assert!(close(v, 0.3236, 1e-4));
        assert_eq!(mana_quick_estimate(1, 3, 3f64.ln()).unwrap(), 0.0);
        assert!(close(mana_quick_estimate(2, 9, 0.0).unwrap(), 1.971, 1e-3));
        assert!(mana_quick_estimate(1, 3, 2.0).is_err());
    }

    #[test]
    fn tables() {
        let t = prediction_table_dims(5, &[1, 2, 3]).unwrap();
        assert_eq!(t.header.join(","), PREDICTION_HEADER.join(","));
        assert!(close(t.rows[0][4].as_f64().unwrap(), 1.875, 1e-12));
        let deltas: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        let t = prediction_table_deltas(81, &deltas).unwrap();
        let g: Vec<f64> = t.column("pred_gaussian").unwrap().into_iter().flatten().collect();
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
