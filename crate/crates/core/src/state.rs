//! Two-qubit density matrices and the X-shaped reduced state of a spin pair.
//!
//! Basis ordering is `(up up, up down, down up, down down)` with `up` the
//! `+1` eigenstate of `sigma^z`.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::CorrelationSet;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Validated 4x4 density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4(Matrix4<Complex64>);

impl DensityMatrix4 {
    pub fn new(m: Matrix4<Complex64>) -> Result<Self> {
        let skew = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if skew > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (residual {skew:e})")));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min = hermitian_eigenvalues(&m).min();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self(m))
    }

    /// Real symmetric input, e.g. from an X-state.
    pub fn from_real(m: &Matrix4<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    /// Pure state `|psi><psi|` of a normalized vector.
    pub fn pure(psi: &Vector4<Complex64>) -> Result<Self> {
        Self::new(psi * psi.adjoint())
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix4::identity() * Complex64::new(0.25, 0.0))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn eigen(&self) -> SymmetricEigen<Complex64, nalgebra::U4> {
        SymmetricEigen::new(self.0)
    }

    pub fn eigenvalues(&self) -> Vector4<f64> {
        hermitian_eigenvalues(&self.0)
    }
}

pub(crate) fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> Vector4<f64> {
    // Symmetrize first; SymmetricEigen only reads one triangle.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues
}

/// Entries of the X-shaped two-spin state
///
/// ```text
/// | a+  0   0   c- |
/// | 0   b   c+  0  |
/// | 0   c+  b   0  |
/// | c-  0   0   a- |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinPairState {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl SpinPairState {
    pub fn to_matrix(&self) -> Matrix4<f64> {
        let (ap, am, b, cp, cm) = (self.a_plus, self.a_minus, self.b, self.c_plus, self.c_minus);
        Matrix4::new(
            ap, 0.0, 0.0, cm, //
            0.0, b, cp, 0.0, //
            0.0, cp, b, 0.0, //
            cm, 0.0, 0.0, am,
        )
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix4> {
        DensityMatrix4::from_real(&self.to_matrix())
    }

    pub fn trace(&self) -> f64 {
        self.a_plus + self.a_minus + 2.0 * self.b
    }

    /// Closed-form spectrum: `b +- c+` from the inner block and
    /// `(a+ + a-)/2 +- sqrt(((a+ - a-)/2)^2 + c-^2)` from the outer one.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mean = 0.5 * (self.a_plus + self.a_minus);
        let half_gap = 0.5 * (self.a_plus - self.a_minus);
        let root = half_gap.hypot(self.c_minus);
        [
            self.b + self.c_plus,
            self.b - self.c_plus,
            mean + root,
            mean - root,
        ]
    }
}

/// Assembles the two-spin state from magnetization and correlators.
pub fn reduced_density_matrix(corrs: &CorrelationSet) -> Result<SpinPairState> {
    corrs.validate()?;
    let CorrelationSet { mz, xx, yy, zz, .. } = *corrs;
    let state = SpinPairState {
        a_plus: 0.25 + 0.5 * mz + 0.25 * zz,
        a_minus: 0.25 - 0.5 * mz + 0.25 * zz,
        b: 0.25 * (1.0 - zz),
        c_plus: 0.25 * (xx + yy),
        c_minus: 0.25 * (xx - yy),
    };
    let min = state.eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    Ok(state)
}
