//! Statistical properties of the samplers.

use mana_core::ensembles::{
    batch_records, haar_unitary, sample, sample_haar_pure, sample_simple_mixture, EnsembleSpec,
    SeededStream,
};
use mana_core::predictions::avg_purity;
use mana_core::state::{entropy_deficit, renyi2};
use mana_core::stats::{ks_critical, ks_statistic, Summary};
use mana_core::wigner::{mana, wigner_fft};
use rayon::prelude::*;

#[test]
fn haar_component_weight() {
    let xs: Vec<f64> = (0..100_000u64)
        .into_par_iter()
        .map(|i| sample_haar_pure(5, &SeededStream::new(21, i)).unwrap().amps()[0].norm_sqr())
        .collect();
    assert!(Summary::of(&xs).z_score(0.2) < 4.0);
}

#[test]
fn haar_fixed_subspace_weight() {
    // projector onto span{(|0⟩+|1⟩)/√2, |4⟩, |7⟩}
    let xs: Vec<f64> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let a = sample_haar_pure(9, &SeededStream::new(22, i)).unwrap();
            let a = a.amps();
            0.5 * (a[0] + a[1]).norm_sqr() + a[4].norm_sqr() + a[7].norm_sqr()
        })
        .collect();
    assert!(Summary::of(&xs).z_score(1.0 / 3.0) < 4.0);
}

#[test]
fn simple_mixture_entropy_is_exact() {
    for (i, delta) in [0.0, 0.3, 1.0, 2.0, 11f64.ln()].into_iter().enumerate() {
        for j in 0..50u64 {
            let rho = sample_simple_mixture(11, delta, &SeededStream::new(i as u64, j)).unwrap();
            assert!((entropy_deficit(&rho) - delta).abs() < 1e-10);
        }
    }
}

#[test]
fn average_mixture_purity() {
    let recs = batch_records(&EnsembleSpec::AverageMixture { dim: 11, n: 1000 }, 20, 23).unwrap();
    let target = 1.0 / 11.0 + (1.0 - 1.0 / 11.0) / 1000.0;
    for r in recs {
        let purity = (-r.s2).exp();
        assert!((purity - target).abs() / target < 0.1);
    }
}

#[test]
fn reduced_purity_examples() {
    for (d_a, d_b) in [(3usize, 3usize), (5, 13)] {
        let recs = batch_records(&EnsembleSpec::Reduced { d_a, d_b }, 10_000, 24).unwrap();
        let purities: Vec<f64> = recs.iter().map(|r| (-r.s2).exp()).collect();
        let target = avg_purity(d_a, d_b).unwrap();
        assert!(Summary::of(&purities).z_score(target) < 4.0, "({d_a},{d_b})");
    }
}

/// Mana of `n` samples, optionally conjugated by a fixed unitary.
fn manas(spec: &EnsembleSpec, n: usize, seed: u64, rotate: bool) -> Vec<f64> {
    let u = haar_unitary(spec.dim(), &SeededStream::new(999, 0));
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rho = sample(spec, &SeededStream::new(seed, i)).unwrap();
            if rotate {
                rho = rho.conjugate(&u).unwrap();
            }
            mana(&wigner_fft(&rho).unwrap())
        })
        .collect()
}

#[test]
fn unitary_invariance_ks() {
    let specs = [
        EnsembleSpec::SimpleMixture { dim: 5, delta: 1.0 },
        EnsembleSpec::AverageMixture { dim: 5, n: 3 },
        EnsembleSpec::Reduced { d_a: 5, d_b: 3 },
    ];
    let n = 2000;
    for (k, spec) in specs.iter().enumerate() {
        let a = manas(spec, n, 100 + k as u64, false);
        let b = manas(spec, n, 200 + k as u64, true);
        let stat = ks_statistic(&a, &b);
        assert!(stat < ks_critical(n, n, 0.001), "{}: {stat}", spec.name());
    }
}

#[test]
fn pure_states_have_zero_entropy() {
    let rho = sample(&EnsembleSpec::Reduced { d_a: 7, d_b: 1 }, &SeededStream::new(1, 1)).unwrap();
    assert!(renyi2(&rho) < 1e-12);
}
