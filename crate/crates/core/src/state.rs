//! Pure states and density matrices on a register of dimension `D`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{ManaError, Result};
use crate::qudit::{hermitian_eigenvalues, hermiticity_residual, CMatrix};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted as floating-point noise.
pub const NEGATIVE_EIGEN_TOL: f64 = -1e-10;

/// A normalized state vector. `dims` records the tensor structure; its
/// product equals the vector length.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Single-register state. Fails if `Σ|ψ_j|²` differs from 1 by more than `1e-12`.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let d = amps.len();
        Self::with_dims(amps, vec![d])
    }

    pub fn with_dims(amps: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != amps.len() || amps.len() < 2 {
            return Err(ManaError::DimensionMismatch {
                expected: total,
                got: amps.len(),
            });
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(ManaError::NotNormalized(norm2));
        }
        Ok(PureState { amps, dims })
    }

    /// Normalizes `amps` first. Fails on the zero vector.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(ManaError::NotNormalized(norm));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Self::new(amps)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(ManaError::out_of_range(
                "basis index",
                index as f64,
                format!("[0, {dim})"),
            ));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        let v = DVector::from_column_slice(&self.amps);
        DensityMatrix {
            rho: &v * v.adjoint(),
            dims: self.dims.clone(),
        }
    }

    /// Applies a unitary. The result is renormalized to absorb rounding.
    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(ManaError::DimensionMismatch {
                expected: self.dim(),
                got: u.nrows(),
            });
        }
        let v = u * DVector::from_column_slice(&self.amps);
        let norm = v.norm();
        Ok(PureState {
            amps: v.iter().map(|a| a / norm).collect(),
            dims: self.dims.clone(),
        })
    }
}

/// Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(rho: CMatrix) -> Result<Self> {
        let d = rho.nrows();
        Self::with_dims(rho, vec![d])
    }

    pub fn with_dims(rho: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let n = rho.nrows();
        if rho.ncols() != n {
            return Err(ManaError::DimensionMismatch {
                expected: n,
                got: rho.ncols(),
            });
        }
        let total: usize = dims.iter().product();
        if total != n {
            return Err(ManaError::DimensionMismatch {
                expected: total,
                got: n,
            });
        }
        let herm = hermiticity_residual(&rho);
        if herm > HERMITIAN_TOL {
            return Err(ManaError::NotHermitian(herm));
        }
        let tr = rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(ManaError::InvalidTrace(tr.re));
        }
        let min_ev = hermitian_eigenvalues(&rho).last().copied().unwrap_or(0.0);
        if min_ev < NEGATIVE_EIGEN_TOL {
            return Err(ManaError::NotPositive(min_ev));
        }
        Ok(DensityMatrix { rho, dims })
    }

    /// For samplers whose output is a density matrix by construction.
    pub(crate) fn from_parts_unchecked(rho: CMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix { rho, dims }
    }

    /// `I / D`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            rho: CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
            dims: vec![dim],
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// `Tr ρ²`, computed as `Σ |ρ_ij|²`.
    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(ManaError::DimensionMismatch {
                expected: self.dim(),
                got: u.nrows(),
            });
        }
        let mut out = u * &self.rho * u.adjoint();
        // symmetrize away rounding
        let h = (&out + out.adjoint()) * Complex64::new(0.5, 0.0);
        out = h;
        Ok(DensityMatrix {
            rho: out,
            dims: self.dims.clone(),
        })
    }
}

/// Second Rényi entropy `S₂ = −ln Tr ρ²` in nats.
pub fn renyi2(rho: &DensityMatrix) -> f64 {
    // clamp: rounding can push Tr ρ² of a pure state a hair above 1
    (-rho.purity().ln()).max(0.0)
}

/// Entropy deficit `Δ = ln D − S₂`.
pub fn entropy_deficit(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    (d.ln() - renyi2(rho)).clamp(0.0, d.ln())
}
