//! Self-checks of the operator algebra, Wigner constraints and
//! closed-form consistency, with an optional injected fault.

use num_complex::Complex64;

use crate::design_probe::{chebyshev_closed_form, chebyshev_coeffs};
use crate::ensembles::{sample_haar_pure, sample_reduced, SeededStream};
use crate::error::Result;
use crate::predictions::{
    char_fn_moment, exact_mixed_norm, exact_pure_norm, gaussian_wigner_norm, ExactMixedParams,
};
use crate::qudit::{check_phase_point_set, phase_point_ops, CMatrix};
use crate::state::PureState;
use crate::wigner::{mana, wigner_with, WignerPath};

/// Perturbation applied before the checks run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds `10⁻³` to one off-diagonal entry of `A(1,1)` at `d = 3`.
    CorruptPhasePoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(CheckResult {
            name: name.into(),
            residual,
            tolerance,
        });
    }
}

pub const ALGEBRA_TOL: f64 = 1e-9;
pub const CONSTRAINT_TOL: f64 = 1e-10;
pub const PATH_TOL: f64 = 1e-10;

/// Runs every check for odd `d` from 3 to `max_d`.
pub fn run_verify(max_d: usize, fault: Option<Fault>) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for d in (3..=max_d).step_by(2) {
        let mut ops: Vec<CMatrix> = phase_point_ops(d)?.into_iter().map(|o| o.entries).collect();
        if fault == Some(Fault::CorruptPhasePoint) && d == 3 {
            ops[d + 1][(0, 1)] += Complex64::new(1e-3, 0.0);
        }
        let alg = check_phase_point_set(d, &ops)?;
        for (name, r) in alg.entries() {
            report.push(format!("algebra d={d} {name}"), r, ALGEBRA_TOL);
        }
    }

    for d in [3usize, 5, 9] {
        let psi = sample_haar_pure(d, &SeededStream::new(1, d as u64))?;
        let rho = sample_reduced(d, 2, &SeededStream::new(2, d as u64))?;
        let direct = wigner_with(WignerPath::Direct, &psi)?;
        let (norm, purity) = direct.constraint_residuals();
        report.push(format!("wigner d={d} normalization"), norm, CONSTRAINT_TOL);
        report.push(format!("wigner d={d} purity"), purity, CONSTRAINT_TOL);
        let (norm, purity) = wigner_with(WignerPath::Direct, &rho)?.constraint_residuals();
        report.push(format!("wigner mixed d={d} normalization"), norm, CONSTRAINT_TOL);
        report.push(format!("wigner mixed d={d} purity"), purity, CONSTRAINT_TOL);
        for path in [WignerPath::Fft, WignerPath::MatrixTrace] {
            let other = wigner_with(path, &psi)?;
            let diff = direct
                .values()
                .iter()
                .zip(other.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            report.push(format!("wigner d={d} {} vs direct", path.name()), diff, PATH_TOL);
        }
        let basis = PureState::basis(d, 1)?;
        report.push(
            format!("stabilizer d={d} mana"),
            mana(&wigner_with(WignerPath::Fft, &basis)?).abs(),
            CONSTRAINT_TOL,
        );
    }

    let mut ladder = 0.0f64;
    let mut pure_match = 0.0f64;
    let mut zeroth = 0.0f64;
    for d_a in [3usize, 5, 7, 9] {
        for d_b in 1..=9 {
            let p = ExactMixedParams::new(d_a, d_b)?;
            let norm = exact_mixed_norm(&p)?;
            let m1 = char_fn_moment(&p, 1)? * (d_a * d_a) as f64;
            ladder = ladder.max((norm - m1).abs() / norm);
            zeroth = zeroth.max((char_fn_moment(&p, 0)? - 1.0).abs());
            if d_b == 1 {
                pure_match = pure_match.max((norm - exact_pure_norm(d_a)?).abs());
            }
        }
    }
    report.push("exact norm vs first moment", ladder, 1e-10);
    report.push("exact norm at d_b=1 vs pure", pure_match, 1e-10);
    report.push("zeroth moment", zeroth, 1e-10);

    let series = chebyshev_coeffs(100)?;
    let cheb = (0..=100)
        .map(|n| (series.coeffs[n] - chebyshev_closed_form(n)).abs())
        .fold(0.0, f64::max);
    report.push("chebyshev coefficients", cheb, 1e-8);

    let mut prev = gaussian_wigner_norm(0.0)?;
    let mut monotone = 0.0f64;
    let mut jensen = 0.0f64;
    for i in 1..=100 {
        let delta = i as f64 * 0.05;
        let w = gaussian_wigner_norm(delta)?;
        monotone = monotone.max(prev - w);
        jensen = jensen.max(w.ln() - 0.5 * delta);
        prev = w;
    }
    report.push("gaussian norm increasing", monotone.max(0.0), 0.0);
    report.push("gaussian jensen", jensen.max(0.0), 0.0);
    Ok(report)
}
