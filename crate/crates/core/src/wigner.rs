//! Discrete Wigner transform, Wigner norm and mana.
//!
//! Three evaluation paths produce the same `D × D` array:
//!
//! * [`WignerPath::MatrixTrace`]: `W(p,q) = Tr[ρ A(p,q)] / D` with dense
//!   phase-point operators, `O(D⁴)` and only meant for cross-checks;
//! * [`WignerPath::Direct`]: `W(p,q) = D⁻¹ Σ_x ω^{-px} ρ_{q+x/2, q-x/2}`, `O(D³)`;
//! * [`WignerPath::Fft`]: for each `q` the sequence `x ↦ ρ_{q+x/2, q-x/2}`
//!   is transformed with one length-`D` DFT, `O(D² log D)`.
//!
//! An ℓ-qudit register is handled as one register of dimension `D = ∏ d_i`;
//! both constructions share the phase-point spectrum, which is all the
//! statistics here depend on. [`wigner_tensor_product`] evaluates the
//! tensor-product phase-point operators for small systems.

use std::cell::RefCell;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{ManaError, Result};
use crate::output::fmt_f64;
use crate::qudit::{self, omega_pow, phase_point_op_multi, PhasePoint, QuditDim};
use crate::state::{renyi2, DensityMatrix, PureState};

/// Dimension above which the FFT path spreads columns across threads.
const PARALLEL_FFT_MIN_DIM: usize = 64;

/// Anything that can hand out density-matrix elements `ρ_ij`.
pub trait WignerSource: Sync {
    fn dim(&self) -> usize;
    fn dims(&self) -> &[usize];
    fn element(&self, i: usize, j: usize) -> Complex64;
    /// Second Rényi entropy of the state, in nats.
    fn s2(&self) -> f64;
}

impl WignerSource for PureState {
    fn dim(&self) -> usize {
        PureState::dim(self)
    }
    fn dims(&self) -> &[usize] {
        PureState::dims(self)
    }
    #[inline]
    fn element(&self, i: usize, j: usize) -> Complex64 {
        let a = self.amps();
        a[i] * a[j].conj()
    }
    fn s2(&self) -> f64 {
        0.0
    }
}

impl WignerSource for DensityMatrix {
    fn dim(&self) -> usize {
        DensityMatrix::dim(self)
    }
    fn dims(&self) -> &[usize] {
        DensityMatrix::dims(self)
    }
    #[inline]
    fn element(&self, i: usize, j: usize) -> Complex64 {
        self.matrix()[(i, j)]
    }
    fn s2(&self) -> f64 {
        renyi2(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WignerPath {
    MatrixTrace,
    Direct,
    Fft,
}

impl WignerPath {
    pub const ALL: [WignerPath; 3] = [WignerPath::MatrixTrace, WignerPath::Direct, WignerPath::Fft];

    pub fn name(&self) -> &'static str {
        match self {
            WignerPath::MatrixTrace => "matrix_trace",
            WignerPath::Direct => "direct",
            WignerPath::Fft => "fft",
        }
    }
}

/// Real phase-space array, `values[p * D + q] = W(p, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerFunction {
    dim: usize,
    dims: Vec<usize>,
    values: Vec<f64>,
    s2: f64,
}

impl WignerFunction {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Second Rényi entropy of the source state.
    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.values[p * self.dim + q]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.values.iter().map(|w| w * w).sum()
    }

    /// `(|Σ W − 1|, |Σ W² − e^{−S₂}/D|)`.
    pub fn constraint_residuals(&self) -> (f64, f64) {
        let target = (-self.s2).exp() / self.dim as f64;
        ((self.sum() - 1.0).abs(), (self.sum_sq() - target).abs())
    }

    /// Largest `|W(p,q)|` admitted by the purity constraint, `sqrt(e^{−S₂}/D)`.
    pub fn magnitude_bound(&self) -> f64 {
        ((-self.s2).exp() / self.dim as f64).sqrt()
    }

    /// Entropy deficit `Δ = ln D − S₂`.
    pub fn entropy_deficit(&self) -> f64 {
        (self.dim as f64).ln() - self.s2
    }

    /// Jensen bound on the mana, `½ [ln D − S₂]`.
    pub fn jensen_bound(&self) -> f64 {
        0.5 * self.entropy_deficit()
    }

    /// Writes `p,q,w` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["p", "q", "w"])?;
        for p in 0..self.dim {
            for q in 0..self.dim {
                wtr.write_record([p.to_string(), q.to_string(), fmt_f64(self.get(p, q))])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// L¹ norm `Σ |W(p,q)|`.
pub fn wigner_norm(w: &WignerFunction) -> f64 {
    w.values.iter().map(|x| x.abs()).sum()
}

/// `ln` of the Wigner norm.
pub fn mana(w: &WignerFunction) -> f64 {
    wigner_norm(w).ln()
}

fn validated<S: WignerSource + ?Sized>(src: &S) -> Result<(usize, Vec<usize>)> {
    let dims = QuditDim::new(src.dims().to_vec())?;
    if dims.total() != src.dim() {
        return Err(ManaError::DimensionMismatch {
            expected: dims.total(),
            got: src.dim(),
        });
    }
    Ok((src.dim(), dims.dims().to_vec()))
}

/// Wigner function of a pure state by the direct sum.
pub fn wigner_pure(state: &PureState) -> Result<WignerFunction> {
    wigner_direct(state)
}

/// Wigner function of a density matrix by the direct sum.
pub fn wigner_rho(rho: &DensityMatrix) -> Result<WignerFunction> {
    wigner_direct(rho)
}

pub fn wigner_with<S: WignerSource + ?Sized>(path: WignerPath, src: &S) -> Result<WignerFunction> {
    match path {
        WignerPath::MatrixTrace => wigner_matrix_trace(src),
        WignerPath::Direct => wigner_direct(src),
        WignerPath::Fft => wigner_fft(src),
    }
}

/// `O(D³)` evaluation of the defining sum.
pub fn wigner_direct<S: WignerSource + ?Sized>(src: &S) -> Result<WignerFunction> {
    let (d, dims) = validated(src)?;
    let half = qudit::inv2(d)?;
    let phases: Vec<Complex64> = (0..d).map(|k| omega_pow(d, -(k as i64))).collect();
    let inv_d = 1.0 / d as f64;
    let mut values = vec![0.0; d * d];
    let mut f = vec![Complex64::new(0.0, 0.0); d];
    for q in 0..d {
        fill_correlation(src, d, half, q, &mut f);
        for p in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, fx) in f.iter().enumerate() {
                acc += phases[p * x % d] * fx;
            }
            values[p * d + q] = acc.re * inv_d;
        }
    }
    Ok(WignerFunction {
        dim: d,
        dims,
        values,
        s2: src.s2(),
    })
}

/// `f_q(x) = ρ_{q + x/2, q − x/2}` for `x = 0..D`.
#[inline]
fn fill_correlation<S: WignerSource + ?Sized>(
    src: &S,
    d: usize,
    half: usize,
    q: usize,
    f: &mut [Complex64],
) {
    for (x, slot) in f.iter_mut().enumerate() {
        let shift = half * x % d;
        let plus = (q + shift) % d;
        let minus = (q + d - shift) % d;
        *slot = src.element(plus, minus);
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// FFT-structured evaluation: one length-`D` DFT per column `q`.
pub fn wigner_fft<S: WignerSource + ?Sized>(src: &S) -> Result<WignerFunction> {
    let (d, dims) = validated(src)?;
    let half = qudit::inv2(d)?;
    let inv_d = 1.0 / d as f64;

    let column = |q: usize| -> Vec<f64> {
        let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(d));
        let mut buf = vec![Complex64::new(0.0, 0.0); d];
        fill_correlation(src, d, half, q, &mut buf);
        fft.process(&mut buf);
        buf.iter().map(|z| z.re * inv_d).collect()
    };

    let columns: Vec<Vec<f64>> = if d >= PARALLEL_FFT_MIN_DIM {
        (0..d).into_par_iter().map(column).collect()
    } else {
        (0..d).map(column).collect()
    };

    let mut values = vec![0.0; d * d];
    for (q, col) in columns.iter().enumerate() {
        for (p, w) in col.iter().enumerate() {
            values[p * d + q] = *w;
        }
    }
    Ok(WignerFunction {
        dim: d,
        dims,
        values,
        s2: src.s2(),
    })
}

/// `W(p,q) = Tr[ρ A(p,q)] / D` with dense single-register operators.
pub fn wigner_matrix_trace<S: WignerSource + ?Sized>(src: &S) -> Result<WignerFunction> {
    let (d, dims) = validated(src)?;
    let inv_d = 1.0 / d as f64;
    // one operator at a time: all d² of them would need d⁴ entries
    let origin = qudit::phase_point_origin(d)?;
    let values = (0..d * d)
        .map(|k| {
            let a = qudit::translate_phase_point(d, PhasePoint::new(k / d, k % d), &origin)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc += src.element(j, i) * a.entries[(i, j)];
                }
            }
            Ok(acc.re * inv_d)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(WignerFunction {
        dim: d,
        dims,
        values,
        s2: src.s2(),
    })
}

/// Wigner function built from tensor products of single-qudit operators.
///
/// Points are flattened as `p⃗` then `q⃗`, each in mixed radix with the first
/// qudit most significant. Dense and `O(D⁵)`: small systems only.
pub fn wigner_tensor_product<S: WignerSource + ?Sized>(src: &S) -> Result<WignerFunction> {
    let (d, dims) = validated(src)?;
    let qd = QuditDim::new(dims.clone())?;
    let inv_d = 1.0 / d as f64;
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0; dims.len()];
        for (slot, &di) in out.iter_mut().zip(&dims).rev() {
            *slot = idx % di;
            idx /= di;
        }
        out
    };
    let mut values = vec![0.0; d * d];
    for pi in 0..d {
        let ps = digits(pi);
        for qi in 0..d {
            let qs = digits(qi);
            let pts: Vec<PhasePoint> = ps
                .iter()
                .zip(&qs)
                .map(|(&p, &q)| PhasePoint::new(p, q))
                .collect();
            let a = phase_point_op_multi(&qd, &pts)?.entries;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc += src.element(j, i) * a[(i, j)];
                }
            }
            values[pi * d + qi] = acc.re * inv_d;
        }
    }
    Ok(WignerFunction {
        dim: d,
        dims,
        values,
        s2: src.s2(),
    })
}
