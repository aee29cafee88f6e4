//! Quantum Fisher information and coherence quantifiers of two-qubit states.
//!
//! Every X-state fast path has a general-definition counterpart working on an
//! arbitrary [`DensityMatrix4`]; the two routes are kept independent so each
//! can serve as the other's check.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::CorrelationSet;
use crate::state::{reduced_density_matrix, DensityMatrix4, PSD_TOL};

/// Eigenvalue pairs with `p_m + p_n` at or below this are dropped from the
/// spectral QFI sum.
pub const QFI_PAIR_THRESHOLD: f64 = 1e-12;

/// Denominator magnitude below which the closed-form QFI is not evaluated.
pub const CLOSED_FORM_SINGULAR_TOL: f64 = 1e-9;

/// Ratio between the spectral local-observable QFI sum and the printed
/// closed-form expression, measured on random X-states (constant to ~1e-12).
pub const CLOSED_FORM_QFI_SCALE: f64 = 4.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> Matrix2<Complex64> {
    Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn pauli_y() -> Matrix2<Complex64> {
    Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn pauli_z() -> Matrix2<Complex64> {
    Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// `A (x) I + I (x) B`
pub fn local_sum(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let id = Matrix2::<Complex64>::identity();
    a.kronecker(&id) + id.kronecker(b)
}

/// Complete set of four single-qubit observables, orthonormal under the
/// trace inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSet(pub [Matrix2<Complex64>; 4]);

impl Default for ObservableSet {
    /// `{I, sigma^x, sigma^y, sigma^z} / sqrt(2)`
    fn default() -> Self {
        let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self([
            Matrix2::identity() * s,
            pauli_x() * s,
            pauli_y() * s,
            pauli_z() * s,
        ])
    }
}

impl ObservableSet {
    /// `U A_mu U^dagger` for every member.
    pub fn rotated(&self, u: &Matrix2<Complex64>) -> Self {
        Self(self.0.map(|a| u * a * u.adjoint()))
    }

    /// Largest deviation of `Tr(A_mu A_nu)` from `delta_mu_nu`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.0.iter().enumerate() {
            for (k, b) in self.0.iter().enumerate() {
                let target = if i == k { 1.0 } else { 0.0 };
                worst = worst.max(((a * b).trace() - c(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Spectral QFI of `rho` for the generator `a`:
/// `2 sum_{m,n} (p_m - p_n)^2 / (p_m + p_n) |<m|A|n>|^2`.
pub fn qfi_single(rho: &DensityMatrix4, a: &Matrix4<Complex64>) -> Result<f64> {
    let skew = (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if skew > 1e-12 {
        return Err(Error::InvalidState(format!(
            "generator is not Hermitian (residual {skew:e})"
        )));
    }
    let eig = rho.eigen();
    let v = &eig.eigenvectors;
    let rotated = v.adjoint() * a * v;
    let p = &eig.eigenvalues;
    let mut sum = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            let total = p[m] + p[n];
            if total > QFI_PAIR_THRESHOLD {
                let diff = p[m] - p[n];
                sum += diff * diff / total * rotated[(m, n)].norm_sqr();
            }
        }
    }
    Ok(2.0 * sum)
}

/// `sum_mu F(rho, A_mu (x) I + I (x) B_mu)` for arbitrary local bases.
pub fn qfi_total_with(rho: &DensityMatrix4, first: &ObservableSet, second: &ObservableSet) -> Result<f64> {
    first
        .0
        .iter()
        .zip(&second.0)
        .map(|(a, b)| qfi_single(rho, &local_sum(a, b)))
        .sum()
}

/// Basis-independent QFI using the Pauli observable set on both spins.
pub fn qfi_total_direct(rho: &DensityMatrix4) -> Result<f64> {
    let set = ObservableSet::default();
    qfi_total_with(rho, &set, &set)
}

/// Closed-form QFI of the X-state, evaluated exactly as printed.
///
/// Equals [`qfi_total_direct`] divided by [`CLOSED_FORM_QFI_SCALE`].
pub fn qfi_closed_form(corrs: &CorrelationSet) -> Result<f64> {
    let CorrelationSet { mz, xx, yy, zz, .. } = *corrs;
    let m2 = mz * mz;
    let den = (1.0 + xx) * (1.0 + yy) - m2;
    if den.abs() <= CLOSED_FORM_SINGULAR_TOL {
        return Err(Error::SingularDenominator { value: den });
    }
    if (1.0 + zz).abs() <= CLOSED_FORM_SINGULAR_TOL {
        return Err(Error::SingularDenominator { value: 1.0 + zz });
    }
    let num = (3.0 * m2 + zz * zz - 2.0 * zz) * (xx + yy)
        + (1.0 - 2.0 * zz) * (xx * xx + yy * yy)
        + 2.0 * (m2 + zz * zz - 2.0 * m2 * zz)
        + (xx.powi(3) + yy.powi(3));
    Ok((xx - yy).powi(2) / (1.0 + zz) + num / den)
}

/// Sum of absolute values of the off-diagonal entries.
pub fn coherence_l1(rho: &DensityMatrix4) -> f64 {
    let m = rho.matrix();
    let mut sum = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                sum += m[(i, j)].norm();
            }
        }
    }
    sum
}

/// `2 (|c+| + |c-|) = max(|xx|, |yy|)`.
pub fn coherence_l1_xstate(corrs: &CorrelationSet) -> f64 {
    0.5 * ((corrs.xx + corrs.yy).abs() + (corrs.xx - corrs.yy).abs())
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Base-2 von Neumann entropy of a spectrum; values in `[-PSD_TOL, 0)` count
/// as zero.
pub fn entropy_bits(spectrum: impl IntoIterator<Item = f64>) -> Result<f64> {
    let mut s = 0.0;
    for p in spectrum {
        if p < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {p:e}")));
        }
        s -= xlog2x(p.max(0.0));
    }
    Ok(s)
}

fn clamp_small_negative(value: f64) -> Result<f64> {
    if value < -PSD_TOL {
        return Err(Error::InvalidState(format!(
            "relative entropy of coherence is negative ({value:e})"
        )));
    }
    Ok(value.max(0.0))
}

/// `S(diag rho) - S(rho)` in bits.
pub fn coherence_rec(rho: &DensityMatrix4) -> Result<f64> {
    let diag = (0..4).map(|i| rho.matrix()[(i, i)].re);
    let value = entropy_bits(diag)? - entropy_bits(rho.eigenvalues().iter().copied())?;
    clamp_small_negative(value)
}

fn clamp_probability(name: &str, x: f64) -> Result<f64> {
    if !(-PSD_TOL..=1.0 + PSD_TOL).contains(&x) {
        return Err(Error::InvalidState(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Relative entropy of coherence of the X-state from its correlators.
pub fn coherence_rec_xstate(corrs: &CorrelationSet) -> Result<f64> {
    let CorrelationSet { mz, xx, yy, zz, .. } = *corrs;
    let root = (4.0 * mz * mz + (xx - yy).powi(2)).sqrt();
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let xi = clamp_probability("xi", (1.0 - zz + sign * (xx + yy)) / 4.0)?;
        let eta = clamp_probability("eta", (sign * root + 1.0 + zz) / 4.0)?;
        let zeta = clamp_probability("zeta", (1.0 + zz + sign * 2.0 * mz) / 4.0)?;
        total += xlog2x(xi) + xlog2x(eta) - xlog2x(zeta);
    }
    let eps = clamp_probability("epsilon", (1.0 - zz) / 4.0)?;
    clamp_small_negative(total - 2.0 * xlog2x(eps))
}

/// Cramer-Rao lower bound `1 / sqrt(nu F)` on the phase uncertainty.
pub fn cramer_rao_bound(fisher: f64, repetitions: u64) -> Result<f64> {
    if !(fisher > 0.0) {
        return Err(Error::NonpositiveInformation { value: fisher });
    }
    if repetitions == 0 {
        return Err(Error::InvalidRepetitions);
    }
    Ok(1.0 / (repetitions as f64 * fisher).sqrt())
}

/// QFI, l1 coherence and relative entropy of coherence at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSet {
    pub qfi: f64,
    pub c_l1: f64,
    pub c_rec: f64,
    /// Printed closed-form QFI when its denominators are regular.
    pub qfi_closed_form: Option<f64>,
}

impl MeasureSet {
    pub fn get(&self, measure: Measure) -> f64 {
        match measure {
            Measure::Qfi => self.qfi,
            Measure::L1 => self.c_l1,
            Measure::Rec => self.c_rec,
        }
    }
}

/// Selector for one column of a [`MeasureSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Qfi,
    L1,
    Rec,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Qfi, Measure::L1, Measure::Rec];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Qfi => "qfi",
            Measure::L1 => "c_l1",
            Measure::Rec => "c_rec",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// Evaluates all measures on the X-state built from `corrs`.
pub fn measures_at(corrs: &CorrelationSet) -> Result<MeasureSet> {
    let rho = reduced_density_matrix(corrs)?.density_matrix()?;
    Ok(MeasureSet {
        qfi: qfi_total_direct(&rho)?,
        c_l1: coherence_l1_xstate(corrs),
        c_rec: coherence_rec_xstate(corrs)?,
        qfi_closed_form: qfi_closed_form(corrs).ok(),
    })
}
