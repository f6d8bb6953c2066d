//! Seeded sampling of Haar-random pure states and of three unitarily
//! invariant mixed-state ensembles.
//!
//! Every sample draws from its own ChaCha8 stream selected by
//! `(master_seed, stream_index)`, so batches are reproducible regardless of
//! how the work is split across threads.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{ManaError, Result};
use crate::output::{Cell, Table};
use crate::qudit::{check_dim, CMatrix};
use crate::state::{entropy_deficit, renyi2, DensityMatrix, PureState};
use crate::wigner::{self, wigner_fft};

/// Identifies one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeededStream {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Mixes a tag into a master seed (SplitMix64 finalizer), giving independent
/// seeds for the points of an experiment grid.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    let mut z = master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Which mixed-state distribution to draw from, with its single knob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleSpec {
    /// `(1−α) I/D + α|ψ⟩⟨ψ|` with α fixed by the target entropy deficit.
    SimpleMixture { dim: usize, delta: f64 },
    /// `N⁻¹ Σ_j |ψ_j⟩⟨ψ_j|` over `N` independent Haar states.
    AverageMixture { dim: usize, n: usize },
    /// `Tr_B |ψ⟩⟨ψ|` for a Haar state on `d_a · d_b` dimensions.
    Reduced { d_a: usize, d_b: usize },
}

impl EnsembleSpec {
    pub fn dim(&self) -> usize {
        match *self {
            EnsembleSpec::SimpleMixture { dim, .. } | EnsembleSpec::AverageMixture { dim, .. } => {
                dim
            }
            EnsembleSpec::Reduced { d_a, .. } => d_a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnsembleSpec::SimpleMixture { .. } => "simple_mixture",
            EnsembleSpec::AverageMixture { .. } => "average_mixture",
            EnsembleSpec::Reduced { .. } => "reduced",
        }
    }

    /// Target Δ, `N`, or `d_B`.
    pub fn knob(&self) -> f64 {
        match *self {
            EnsembleSpec::SimpleMixture { delta, .. } => delta,
            EnsembleSpec::AverageMixture { n, .. } => n as f64,
            EnsembleSpec::Reduced { d_b, .. } => d_b as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EnsembleSpec::SimpleMixture { dim, delta } => {
                check_dim(dim)?;
                check_deficit(dim, delta)
            }
            EnsembleSpec::AverageMixture { dim, n } => {
                check_dim(dim)?;
                if n < 1 {
                    return Err(ManaError::out_of_range("N", n as f64, "N ≥ 1"));
                }
                Ok(())
            }
            EnsembleSpec::Reduced { d_a, d_b } => {
                check_dim(d_a)?;
                if d_b < 1 {
                    return Err(ManaError::out_of_range("d_B", d_b as f64, "d_B ≥ 1"));
                }
                Ok(())
            }
        }
    }
}

fn check_deficit(dim: usize, delta: f64) -> Result<()> {
    let max = (dim as f64).ln();
    if !(0.0..=max).contains(&delta) {
        return Err(ManaError::out_of_range(
            "target Δ",
            delta,
            format!("[0, ln {dim}]"),
        ));
    }
    Ok(())
}

/// Vector of i.i.d. standard complex Gaussians, normalized.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|z| *z /= norm);
            return v;
        }
    }
}

/// Haar-random pure state on `dim ≥ 2` dimensions.
pub fn sample_haar_pure(dim: usize, stream: &SeededStream) -> Result<PureState> {
    if dim < 2 {
        return Err(ManaError::out_of_range("D", dim as f64, "D ≥ 2"));
    }
    let mut rng = stream.rng();
    PureState::normalized(haar_vector(dim, &mut rng))
}

/// Mixing weight giving purity `e^{−S₂}`:
/// `α = sqrt((e^{−S₂} − 1/D) / (1 − 1/D))`.
pub fn alpha_for_deficit(dim: usize, s2_target: f64) -> Result<f64> {
    let d = dim as f64;
    let purity = (-s2_target).exp();
    let lo = 1.0 / d;
    // a few ulps of slack for targets computed as ln D − Δ
    let eps = 1e-14;
    if dim < 2 || !(lo - eps..=1.0 + eps).contains(&purity) {
        return Err(ManaError::out_of_range(
            "purity e^{-S2}",
            purity,
            format!("[1/{dim}, 1]"),
        ));
    }
    Ok(((purity - lo) / (1.0 - lo)).clamp(0.0, 1.0).sqrt())
}

/// `(1−α) I/D + α|ψ⟩⟨ψ|`.
pub fn simple_mixture(psi: &PureState, alpha: f64) -> DensityMatrix {
    let d = psi.dim();
    let amps = psi.amps();
    let diag = (1.0 - alpha) / d as f64;
    let rho = DMatrix::from_fn(d, d, |i, j| {
        let mut z = amps[i] * amps[j].conj() * alpha;
        if i == j {
            z.re += diag;
            z.im = 0.0;
        }
        z
    });
    DensityMatrix::from_parts_unchecked(rho, vec![d])
}

pub fn sample_simple_mixture(
    dim: usize,
    target_delta: f64,
    stream: &SeededStream,
) -> Result<DensityMatrix> {
    check_deficit(dim, target_delta)?;
    let s2 = (dim as f64).ln() - target_delta;
    let alpha = alpha_for_deficit(dim, s2)?;
    let psi = sample_haar_pure(dim, stream)?;
    Ok(simple_mixture(&psi, alpha))
}

pub fn sample_average_mixture(dim: usize, n: usize, stream: &SeededStream) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(ManaError::out_of_range("D", dim as f64, "D ≥ 2"));
    }
    if n < 1 {
        return Err(ManaError::out_of_range("N", n as f64, "N ≥ 1"));
    }
    let mut rng = stream.rng();
    let mut rho = CMatrix::zeros(dim, dim);
    for _ in 0..n {
        let v = haar_vector(dim, &mut rng);
        for j in 0..dim {
            let vj = v[j].conj();
            for i in 0..dim {
                rho[(i, j)] += v[i] * vj;
            }
        }
    }
    rho /= Complex64::new(n as f64, 0.0);
    Ok(DensityMatrix::from_parts_unchecked(rho, vec![dim]))
}

/// Reduced state on `A` of a Haar state on `A ⊗ B`, amplitudes indexed `i·d_B + j`.
pub fn sample_reduced(d_a: usize, d_b: usize, stream: &SeededStream) -> Result<DensityMatrix> {
    check_dim(d_a)?;
    if d_b < 1 {
        return Err(ManaError::out_of_range("d_B", d_b as f64, "d_B ≥ 1"));
    }
    let mut rng = stream.rng();
    let psi = haar_vector(d_a * d_b, &mut rng);
    let m = DMatrix::from_row_slice(d_a, d_b, &psi);
    let rho = &m * m.adjoint();
    Ok(DensityMatrix::from_parts_unchecked(rho, vec![d_a]))
}

pub fn sample(spec: &EnsembleSpec, stream: &SeededStream) -> Result<DensityMatrix> {
    match *spec {
        EnsembleSpec::SimpleMixture { dim, delta } => {
            check_dim(dim)?;
            sample_simple_mixture(dim, delta, stream)
        }
        EnsembleSpec::AverageMixture { dim, n } => {
            check_dim(dim)?;
            sample_average_mixture(dim, n, stream)
        }
        EnsembleSpec::Reduced { d_a, d_b } => sample_reduced(d_a, d_b, stream),
    }
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix,
/// with the phases of `R`'s diagonal divided out.
pub fn haar_unitary(dim: usize, stream: &SeededStream) -> CMatrix {
    let mut rng = stream.rng();
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// `n` samples; sample `i` uses stream `(master_seed, i)`.
pub fn sample_batch(spec: &EnsembleSpec, n: usize, master_seed: u64) -> Result<Vec<DensityMatrix>> {
    spec.validate()?;
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample(spec, &SeededStream::new(master_seed, i)))
        .collect()
}

/// One row of a batch export.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchRecord {
    pub sample_index: u64,
    pub d_a: usize,
    pub knob: f64,
    pub s2: f64,
    pub delta: f64,
    pub wigner_norm: f64,
    pub mana: f64,
}

pub fn batch_records(spec: &EnsembleSpec, n: usize, master_seed: u64) -> Result<Vec<BatchRecord>> {
    spec.validate()?;
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let rho = sample(spec, &SeededStream::new(master_seed, i))?;
            let w = wigner_fft(&rho)?;
            let norm = wigner::wigner_norm(&w);
            Ok(BatchRecord {
                sample_index: i,
                d_a: spec.dim(),
                knob: spec.knob(),
                s2: renyi2(&rho),
                delta: entropy_deficit(&rho),
                wigner_norm: norm,
                mana: norm.ln(),
            })
        })
        .collect()
}

/// `sample_index,d_a,d_b_or_knob,s2,delta,wigner_norm,mana`.
pub fn records_table(records: &[BatchRecord]) -> Table {
    let mut t = Table::new(&[
        "sample_index",
        "d_a",
        "d_b_or_knob",
        "s2",
        "delta",
        "wigner_norm",
        "mana",
    ]);
    for r in records {
        t.push(vec![
            Cell::Int(r.sample_index as i64),
            r.d_a.into(),
            r.knob.into(),
            r.s2.into(),
            r.delta.into(),
            r.wigner_norm.into(),
            r.mana.into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::max_modulus;
    use crate::wigner::mana;

    #[test]
    fn determinism() {
        let s = SeededStream::new(42, 7);
        assert_eq!(sample_haar_pure(3, &s).unwrap(), sample_haar_pure(3, &s).unwrap());
        let other = SeededStream::new(42, 8);
        assert_ne!(sample_haar_pure(3, &s).unwrap(), sample_haar_pure(3, &other).unwrap());
        let a = sample_average_mixture(3, 2, &s).unwrap();
        assert_eq!(a, sample_average_mixture(3, 2, &s).unwrap());
        assert_eq!(
            sample_batch(&EnsembleSpec::Reduced { d_a: 3, d_b: 2 }, 20, 9).unwrap(),
            sample_batch(&EnsembleSpec::Reduced { d_a: 3, d_b: 2 }, 20, 9).unwrap()
        );
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_for_deficit(7, 7f64.ln()).unwrap().abs() < 1e-7);
        assert!((alpha_for_deficit(7, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let alpha = alpha_for_deficit(3, 2f64.ln()).unwrap();
        assert!((alpha - 0.5).abs() < 1e-15);
        let psi = sample_haar_pure(3, &SeededStream::new(1, 0)).unwrap();
        let rho = simple_mixture(&psi, alpha);
        assert!((rho.purity() - 0.5).abs() < 1e-14);
        assert!(alpha_for_deficit(3, -0.1).is_err());
        assert!(alpha_for_deficit(3, 2.0).is_err());
    }

    #[test]
    fn simple_mixture_hits_target() {
        let s = SeededStream::new(3, 1);
        let rho = sample_simple_mixture(11, 1.0, &s).unwrap();
        assert!((rho.purity() - std::f64::consts::E / 11.0).abs() < 1e-10);
        let zero = sample_simple_mixture(11, 0.0, &s).unwrap();
        assert!(mana(&wigner_fft(&zero).unwrap()).abs() < 1e-12);
        let pure = sample_simple_mixture(11, 11f64.ln(), &s).unwrap();
        assert!(renyi2(&pure) < 1e-12);
        assert!(sample_simple_mixture(11, 3.0, &s).is_err());
        assert!(sample_simple_mixture(11, -0.01, &s).is_err());
    }

    #[test]
    fn samplers_produce_valid_states() {
        let s = SeededStream::new(5, 5);
        for rho in [
            sample_average_mixture(5, 4, &s).unwrap(),
            sample_reduced(5, 3, &s).unwrap(),
            sample_simple_mixture(5, 0.7, &s).unwrap(),
        ] {
            assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        }
        assert!(renyi2(&sample_average_mixture(5, 1, &s).unwrap()) < 1e-12);
        assert!(renyi2(&sample_reduced(5, 1, &s).unwrap()) < 1e-12);
    }

    #[test]
    fn invalid_arguments() {
        let s = SeededStream::new(0, 0);
        assert!(sample_haar_pure(1, &s).is_err());
        assert!(sample_haar_pure(2, &s).is_ok());
        assert!(sample_average_mixture(5, 0, &s).is_err());
        assert!(sample_reduced(4, 2, &s).is_err());
        assert!(sample_reduced(3, 0, &s).is_err());
        assert!(EnsembleSpec::SimpleMixture { dim: 5, delta: 2.0 }.validate().is_err());
    }

    #[test]
    fn unitary_is_unitary() {
        let u = haar_unitary(6, &SeededStream::new(8, 0));
        assert!(max_modulus(&(&u * u.adjoint() - CMatrix::identity(6, 6))) < 1e-12);
    }

    #[test]
    fn record_table_header() {
        let recs = batch_records(&EnsembleSpec::AverageMixture { dim: 3, n: 2 }, 3, 1).unwrap();
        let t = records_table(&recs);
        assert_eq!(
            t.header.join(","),
            "sample_index,d_a,d_b_or_knob,s2,delta,wigner_norm,mana"
        );
        assert_eq!(t.rows.len(), 3);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(1, 5), derive_seed(1, 5));
    }
}
