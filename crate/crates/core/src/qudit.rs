//! Modular arithmetic, generalized Pauli (Weyl) operators and phase-space
//! point operators on odd-dimensional qudits.
//!
//! Everything here is dense and exists for verification and small-d
//! cross-checks. The fast Wigner transforms live in [`crate::wigner`].
//!
//! Convention: `A(p,q)` has eigenvalues `+1` (multiplicity `(d+1)/2`) and
//! `-1` (multiplicity `(d-1)/2`), so `Tr A = 1`, `Tr[A A'] = d δ δ'` and the
//! Wigner function carries an explicit `1/d`: `W(p,q) = Tr[ρ A(p,q)] / d`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{ManaError, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest `d` for which [`verify_algebra`] runs a full eigendecomposition
/// of every phase-point operator.
pub const DEFAULT_VERIFY_CAP: usize = 31;

/// Largest `d` for which the covariance and block-structure checks run.
pub const STRUCTURE_CHECK_CAP: usize = 9;

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 3 || d % 2 == 0 {
        return Err(ManaError::InvalidDimension(d));
    }
    Ok(())
}

/// Dimensions of a (possibly multi-qudit) register. Every factor is odd and
/// at least 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuditDim {
    dims: Vec<usize>,
}

impl QuditDim {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(ManaError::InvalidDimension(0));
        }
        let mut total: usize = 1;
        for &d in &dims {
            check_dim(d)?;
            total = total
                .checked_mul(d)
                .ok_or(ManaError::InvalidDimension(usize::MAX))?;
        }
        // D × D complex entries must be addressable.
        total
            .checked_mul(total)
            .and_then(|n| n.checked_mul(std::mem::size_of::<Complex64>()))
            .ok_or(ManaError::InvalidDimension(total))?;
        Ok(QuditDim { dims })
    }

    pub fn single(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension `D = ∏ d_i`.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn num_qudits(&self) -> usize {
        self.dims.len()
    }
}

/// Label `(a1, a2)` of the Weyl operator `T = ω^{-2⁻¹ a1 a2} Z^{a1} X^{a2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliLabel {
    pub a1: usize,
    pub a2: usize,
}

/// A point `(p, q)` of the `d × d` discrete phase space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    pub p: usize,
    pub q: usize,
}

impl PhasePoint {
    pub fn new(p: usize, q: usize) -> Self {
        PhasePoint { p, q }
    }

    fn check(&self, d: usize) -> Result<()> {
        if self.p >= d || self.q >= d {
            return Err(ManaError::out_of_range(
                "phase point coordinate",
                self.p.max(self.q) as f64,
                format!("[0, {d})"),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Shift,
    Clock,
    Pauli,
    PhasePoint,
}

/// A dense operator together with what it is supposed to be.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: CMatrix,
    pub kind: OperatorKind,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }
}

/// Inverse of 2 in `Z_d`, i.e. `(d + 1) / 2`.
pub fn inv2(d: usize) -> Result<usize> {
    check_dim(d)?;
    Ok((d + 1) / 2)
}

/// `ω^k` with `ω = e^{2πi/d}`; `k` is reduced mod `d` before the angle is formed.
pub fn omega_pow(d: usize, k: i64) -> Complex64 {
    let k = k.rem_euclid(d as i64);
    Complex64::from_polar(1.0, TAU * k as f64 / d as f64)
}

/// Shift operator `X|j⟩ = |j+1 mod d⟩`.
pub fn shift_op(d: usize) -> Result<OperatorMatrix> {
    check_dim(d)?;
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + 1) % d, j)] = Complex64::new(1.0, 0.0);
    }
    Ok(OperatorMatrix {
        entries: m,
        kind: OperatorKind::Shift,
    })
}

/// Clock operator `Z|j⟩ = ω^j |j⟩`.
pub fn clock_op(d: usize) -> Result<OperatorMatrix> {
    check_dim(d)?;
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        m[(j, j)] = omega_pow(d, j as i64);
    }
    Ok(OperatorMatrix {
        entries: m,
        kind: OperatorKind::Clock,
    })
}

/// Weyl operator `T_{a1,a2} = ω^{-2⁻¹ a1 a2} Z^{a1} X^{a2}`.
pub fn pauli_op(d: usize, label: PauliLabel) -> Result<OperatorMatrix> {
    let half = inv2(d)?;
    if label.a1 >= d || label.a2 >= d {
        return Err(ManaError::out_of_range(
            "Pauli label",
            label.a1.max(label.a2) as f64,
            format!("[0, {d})"),
        ));
    }
    let phase_exp = -((half * label.a1 % d * label.a2 % d) as i64);
    // Z^{a1} X^{a2} |k⟩ = ω^{a1 (k+a2)} |k+a2⟩
    let mut m = CMatrix::zeros(d, d);
    for k in 0..d {
        let row = (k + label.a2) % d;
        m[(row, k)] = omega_pow(d, (label.a1 * row) as i64 + phase_exp);
    }
    Ok(OperatorMatrix {
        entries: m,
        kind: OperatorKind::Pauli,
    })
}

/// `A(0,0) = d⁻¹ Σ_a T_a`, the parity operator `|j⟩ ↦ |-j⟩`.
pub fn phase_point_origin(d: usize) -> Result<CMatrix> {
    let mut acc = CMatrix::zeros(d, d);
    for a1 in 0..d {
        for a2 in 0..d {
            acc += pauli_op(d, PauliLabel { a1, a2 })?.entries;
        }
    }
    Ok(acc / Complex64::new(d as f64, 0.0))
}

/// `T A T†` for a Weyl operator `T`, using that `T` has one nonzero per column.
fn conjugate_by(t: &CMatrix, a: &CMatrix) -> CMatrix {
    let d = t.nrows();
    // src[i] = k with T_{i,k} ≠ 0
    let mut src = vec![0usize; d];
    for k in 0..d {
        let i = (0..d).find(|&i| t[(i, k)].norm_sqr() > 0.0).unwrap_or(k);
        src[i] = k;
    }
    CMatrix::from_fn(d, d, |i, j| {
        t[(i, src[i])] * a[(src[i], src[j])] * t[(j, src[j])].conj()
    })
}

/// Phase-space point operator `A(p,q) = T_{(p,q)} A(0,0) T_{(p,q)}†`.
pub fn phase_point_op(d: usize, pt: PhasePoint) -> Result<OperatorMatrix> {
    check_dim(d)?;
    pt.check(d)?;
    translate_phase_point(d, pt, &phase_point_origin(d)?)
}

/// `A(p,q)` from a precomputed `A(0,0)`, for callers that build many.
pub fn translate_phase_point(d: usize, pt: PhasePoint, origin: &CMatrix) -> Result<OperatorMatrix> {
    pt.check(d)?;
    let t = pauli_op(d, PauliLabel { a1: pt.p, a2: pt.q })?.entries;
    Ok(OperatorMatrix {
        entries: conjugate_by(&t, origin),
        kind: OperatorKind::PhasePoint,
    })
}

/// All `d²` phase-point operators, ordered `p`-major (`index = p * d + q`).
pub fn phase_point_ops(d: usize) -> Result<Vec<OperatorMatrix>> {
    check_dim(d)?;
    let origin = phase_point_origin(d)?;
    let mut ops = Vec::with_capacity(d * d);
    for p in 0..d {
        for q in 0..d {
            ops.push(translate_phase_point(d, PhasePoint::new(p, q), &origin)?);
        }
    }
    Ok(ops)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Tensor-product phase-point operator `A(p₁,q₁) ⊗ … ⊗ A(p_ℓ,q_ℓ)`.
pub fn phase_point_op_multi(dims: &QuditDim, pts: &[PhasePoint]) -> Result<OperatorMatrix> {
    if pts.len() != dims.num_qudits() {
        return Err(ManaError::DimensionMismatch {
            expected: dims.num_qudits(),
            got: pts.len(),
        });
    }
    let mut acc = CMatrix::identity(1, 1);
    for (&d, &pt) in dims.dims().iter().zip(pts) {
        let a = phase_point_op(d, pt)?;
        acc = kron(&acc, &a.entries);
    }
    Ok(OperatorMatrix {
        entries: acc,
        kind: OperatorKind::PhasePoint,
    })
}

/// Maximum elementwise deviation from Hermiticity.
/// Largest entry modulus.
pub fn max_modulus(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of the Hermitian part of `m`, sorted descending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Max deviation of the spectrum from `{+1 × (D+1)/2, −1 × (D−1)/2}`.
pub fn spectrum_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let plus = n.div_ceil(2);
    hermitian_eigenvalues(m)
        .iter()
        .enumerate()
        .map(|(i, &ev)| {
            let target = if i < plus { 1.0 } else { -1.0 };
            (ev - target).abs()
        })
        .fold(0.0, f64::max)
}

/// Max residuals of the phase-point operator algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraReport {
    pub d: usize,
    pub hermiticity: f64,
    pub spectrum: f64,
    pub trace: f64,
    pub orthogonality: f64,
    /// `T_u A(p,q) T_u† = A(p+u₁, q+u₂)`; only computed for `d ≤ STRUCTURE_CHECK_CAP`.
    pub covariance: Option<f64>,
    /// Reconstruction of the `1 ⊕ 2×2` block form; only for `d ≤ STRUCTURE_CHECK_CAP`.
    pub block_structure: Option<f64>,
}

impl AlgebraReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.hermiticity,
            self.spectrum,
            self.trace,
            self.orthogonality,
            self.covariance.unwrap_or(0.0),
            self.block_structure.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Named residuals, for reporting.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![
            ("hermiticity", self.hermiticity),
            ("spectrum", self.spectrum),
            ("trace", self.trace),
            ("orthogonality", self.orthogonality),
        ];
        if let Some(c) = self.covariance {
            v.push(("covariance", c));
        }
        if let Some(b) = self.block_structure {
            v.push(("block_structure", b));
        }
        v
    }
}

/// Gram matrix `G_ij = Tr[A_i A_j]` of a set of operators.
pub fn trace_gram(ops: &[CMatrix]) -> CMatrix {
    let n = ops.len();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let rows = ops[0].len();
    // Tr[A B] = vec(Aᵀ) · vec(B)
    let left = CMatrix::from_fn(rows, n, |r, k| ops[k].transpose().as_slice()[r]);
    let right = CMatrix::from_fn(rows, n, |r, k| ops[k].as_slice()[r]);
    left.transpose() * right
}

/// Check a full set of `d²` phase-point operators (ordered `p`-major).
///
/// Takes the operators explicitly so a caller can feed in a perturbed set.
pub fn check_phase_point_set(d: usize, ops: &[CMatrix]) -> Result<AlgebraReport> {
    check_dim(d)?;
    if ops.len() != d * d {
        return Err(ManaError::DimensionMismatch {
            expected: d * d,
            got: ops.len(),
        });
    }
    let mut hermiticity = 0.0f64;
    let mut spectrum = 0.0f64;
    let mut trace = 0.0f64;
    for a in ops {
        hermiticity = hermiticity.max(hermiticity_residual(a));
        spectrum = spectrum.max(spectrum_residual(a));
        trace = trace.max((a.trace() - Complex64::new(1.0, 0.0)).norm());
    }
    let gram = trace_gram(ops);
    let mut orthogonality = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { d as f64 } else { 0.0 };
            orthogonality = orthogonality.max((gram[(i, j)] - target).norm());
        }
    }

    let (covariance, block_structure) = if d <= STRUCTURE_CHECK_CAP {
        (
            Some(covariance_residual(d, ops)?),
            Some(block_structure_residual(d, ops)),
        )
    } else {
        (None, None)
    };

    Ok(AlgebraReport {
        d,
        hermiticity,
        spectrum,
        trace,
        orthogonality,
        covariance,
        block_structure,
    })
}

fn covariance_residual(d: usize, ops: &[CMatrix]) -> Result<f64> {
    let mut worst = 0.0f64;
    for u1 in 0..d {
        for u2 in 0..d {
            let t = pauli_op(d, PauliLabel { a1: u1, a2: u2 })?.entries;
            for p in 0..d {
                for q in 0..d {
                    let moved = conjugate_by(&t, &ops[p * d + q]);
                    let target = &ops[((p + u1) % d) * d + (q + u2) % d];
                    worst = worst.max(max_modulus(&(moved - target)));
                }
            }
        }
    }
    Ok(worst)
}

/// Reorders the basis as `q, q+1, q-1, q+2, q-2, …` and compares `A(p,q)`
/// against `1 ⊕ ⨁_y [[0, ω^{2py}], [ω^{-2py}, 0]]`.
fn block_structure_residual(d: usize, ops: &[CMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for p in 0..d {
        for q in 0..d {
            let a = &ops[p * d + q];
            let mut order = vec![q];
            for y in 1..=(d - 1) / 2 {
                order.push((q + y) % d);
                order.push((q + d - y) % d);
            }
            let permuted = CMatrix::from_fn(d, d, |i, j| a[(order[i], order[j])]);
            let mut expected = CMatrix::zeros(d, d);
            expected[(0, 0)] = Complex64::new(1.0, 0.0);
            for y in 1..=(d - 1) / 2 {
                let c = omega_pow(d, (2 * p * y) as i64);
                let r = 2 * y - 1;
                expected[(r, r + 1)] = c;
                expected[(r + 1, r)] = c.conj();
            }
            worst = worst.max(max_modulus(&(permuted - expected)));
        }
    }
    worst
}

/// Self-check of the operator algebra at dimension `d`, with the default cap.
pub fn verify_algebra(d: usize) -> Result<AlgebraReport> {
    verify_algebra_with_cap(d, DEFAULT_VERIFY_CAP)
}

pub fn verify_algebra_with_cap(d: usize, cap: usize) -> Result<AlgebraReport> {
    check_dim(d)?;
    if d > cap {
        return Err(ManaError::CapExceeded { d, cap });
    }
    let ops: Vec<CMatrix> = phase_point_ops(d)?
        .into_iter()
        .map(|o| o.entries)
        .collect();
    check_phase_point_set(d, &ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn matrix_power(m: &CMatrix, k: usize) -> CMatrix {
        let mut out = CMatrix::identity(m.nrows(), m.ncols());
        for _ in 0..k {
            out = &out * m;
        }
        out
    }

    #[test]
    fn pauli_matches_clock_shift_product() {
        for d in [3usize, 5, 7] {
            let z = clock_op(d).unwrap().entries;
            let x = shift_op(d).unwrap().entries;
            let half = inv2(d).unwrap();
            for a1 in 0..d {
                for a2 in 0..d {
                    let phase = omega_pow(d, -((half * a1 % d * a2 % d) as i64));
                    let want = matrix_power(&z, a1) * matrix_power(&x, a2) * phase;
                    let got = pauli_op(d, PauliLabel { a1, a2 }).unwrap().entries;
                    assert!(max_modulus(&(got - want)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn inverse_of_two() {
        assert_eq!(inv2(3).unwrap(), 2);
        assert_eq!(inv2(5).unwrap(), 3);
        assert_eq!(inv2(9).unwrap(), 5);
        for d in (3..101).step_by(2) {
            assert_eq!(2 * inv2(d).unwrap() % d, 1);
        }
        assert_eq!(inv2(4), Err(ManaError::InvalidDimension(4)));
        assert_eq!(inv2(1), Err(ManaError::InvalidDimension(1)));
    }

    #[test]
    fn shift_and_clock() {
        let x = shift_op(3).unwrap().entries;
        let mut e2 = nalgebra::DVector::from_element(3, c(0.0, 0.0));
        e2[2] = c(1.0, 0.0);
        let moved = &x * &e2;
        assert_eq!(moved[0], c(1.0, 0.0));
        assert_eq!(moved[1] + moved[2], c(0.0, 0.0));

        let z = clock_op(3).unwrap().entries;
        let w = omega_pow(3, 1);
        assert!((z[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z[(1, 1)] - w).norm() < 1e-15);
        assert!((z[(2, 2)] - w * w).norm() < 1e-15);

        for d in [3, 5, 7] {
            let x = shift_op(d).unwrap().entries;
            let z = clock_op(d).unwrap().entries;
            let lhs = &z * &x;
            let rhs = (&x * &z) * omega_pow(d, 1);
            assert!(max_modulus(&(lhs - rhs)) < 1e-12);
        }
        assert!(shift_op(6).is_err());
    }

    #[test]
    fn pauli_examples() {
        let id = pauli_op(3, PauliLabel { a1: 0, a2: 0 }).unwrap().entries;
        assert!(max_modulus(&(id - CMatrix::identity(3, 3))) < 1e-15);

        let t10 = pauli_op(3, PauliLabel { a1: 1, a2: 0 }).unwrap().entries;
        assert!(max_modulus(&(t10 - clock_op(3).unwrap().entries)) < 1e-15);

        let t11 = pauli_op(3, PauliLabel { a1: 1, a2: 1 }).unwrap().entries;
        let zx = clock_op(3).unwrap().entries * shift_op(3).unwrap().entries;
        assert!(max_modulus(&(&t11 - zx * omega_pow(3, -2))) < 1e-12);
        let should_be_id = &t11 * t11.adjoint();
        assert!(max_modulus(&(should_be_id - CMatrix::identity(3, 3))) < 1e-12);

        assert!(pauli_op(3, PauliLabel { a1: 3, a2: 0 }).is_err());
    }

    #[test]
    fn paulis_are_unitary() {
        for d in [3, 5, 9] {
            for a1 in 0..d {
                for a2 in 0..d {
                    let t = pauli_op(d, PauliLabel { a1, a2 }).unwrap().entries;
                    let r = max_modulus(&(&t * t.adjoint() - CMatrix::identity(d, d)));
                    assert!(r < 1e-12, "d={d} a=({a1},{a2}) residual {r}");
                }
            }
        }
    }

    #[test]
    fn phase_points_d3() {
        let ops = phase_point_ops(3).unwrap();
        let mats: Vec<CMatrix> = ops.iter().map(|o| o.entries.clone()).collect();
        let gram = trace_gram(&mats);
        for i in 0..9 {
            for j in 0..9 {
                let target = if i == j { 3.0 } else { 0.0 };
                assert!((gram[(i, j)] - c(target, 0.0)).norm() < 1e-9);
            }
            let ev = hermitian_eigenvalues(&mats[i]);
            assert!((ev[0] - 1.0).abs() < 1e-9);
            assert!((ev[1] - 1.0).abs() < 1e-9);
            assert!((ev[2] + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn origin_is_parity() {
        let a = phase_point_op(5, PhasePoint::new(0, 0)).unwrap().entries;
        for i in 0..5 {
            for j in 0..5 {
                let target = if (i + j) % 5 == 0 { 1.0 } else { 0.0 };
                assert!((a[(i, j)] - c(target, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_is_one_d5() {
        for p in 0..5 {
            for q in 0..5 {
                let a = phase_point_op(5, PhasePoint::new(p, q)).unwrap();
                assert!((a.trace() - c(1.0, 0.0)).norm() < 1e-12);
                assert!(hermiticity_residual(&a.entries) < 1e-12);
            }
        }
        assert!(phase_point_op(5, PhasePoint::new(5, 0)).is_err());
    }

    #[test]
    fn multi_qudit_operators() {
        let dims = QuditDim::new(vec![3, 3]).unwrap();
        let a = phase_point_op_multi(&dims, &[PhasePoint::new(1, 2), PhasePoint::new(0, 1)])
            .unwrap()
            .entries;
        assert_eq!(a.nrows(), 9);
        assert!(hermiticity_residual(&a) < 1e-12);
        let ev = hermitian_eigenvalues(&a);
        assert_eq!(ev.iter().filter(|&&e| (e - 1.0).abs() < 1e-9).count(), 5);
        assert_eq!(ev.iter().filter(|&&e| (e + 1.0).abs() < 1e-9).count(), 4);
        assert!(spectrum_residual(&a) < 1e-9);

        let single = QuditDim::single(3).unwrap();
        let pt = PhasePoint::new(2, 1);
        let lhs = phase_point_op_multi(&single, &[pt]).unwrap().entries;
        let rhs = phase_point_op(3, pt).unwrap().entries;
        assert!(max_modulus(&(lhs - rhs)) < 1e-15);

        let mixed = QuditDim::new(vec![3, 5]).unwrap();
        let a = phase_point_op_multi(&mixed, &[PhasePoint::new(2, 2), PhasePoint::new(4, 1)])
            .unwrap();
        assert!((a.trace() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(spectrum_residual(&a.entries) < 1e-9);

        assert!(matches!(
            phase_point_op_multi(&mixed, &[PhasePoint::new(0, 0)]),
            Err(ManaError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn qudit_dim_validation() {
        assert!(QuditDim::new(vec![3, 4]).is_err());
        assert!(QuditDim::new(vec![]).is_err());
        assert_eq!(QuditDim::new(vec![3, 5, 7]).unwrap().total(), 105);
    }

    #[test]
    fn verify_small_dims() {
        for d in [3, 7, 15] {
            let r = verify_algebra(d).unwrap();
            assert!(r.max_residual() < 1e-9, "d={d}: {r:?}");
            assert_eq!(r.covariance.is_some(), d <= STRUCTURE_CHECK_CAP);
        }
        assert_eq!(
            verify_algebra(33),
            Err(ManaError::CapExceeded { d: 33, cap: 31 })
        );
    }

    #[test]
    fn perturbed_set_is_caught() {
        let mut ops: Vec<CMatrix> = phase_point_ops(5)
            .unwrap()
            .into_iter()
            .map(|o| o.entries)
            .collect();
        ops[7][(0, 1)] += c(1e-3, 0.0);
        let r = check_phase_point_set(5, &ops).unwrap();
        assert!(r.hermiticity > 1e-4);
    }
}
