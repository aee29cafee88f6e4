//! Thermodynamic-limit magnetization, kernel `Q_r` and two-point correlators
//! of the periodic XY chain with Dzyaloshinsky-Moriya coupling.
//!
//! All quantities are one-dimensional integrals over `phi` in `[0, pi]` of
//! ratios involving the dispersion
//!
//! ```text
//! Delta(phi) = sqrt([J (cos phi - 2 D sin phi) - 1]^2 + J^2 gamma^2 sin^2 phi)
//! ```
//!
//! The transverse correlators are Toeplitz determinants of the kernel, the
//! longitudinal one follows from Wick's theorem.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{CorrelationSet, ModelParams};
use crate::quadrature::{integrate_many, QuadratureSpec};

/// Largest supported spin separation for the Toeplitz determinants.
pub const MAX_SEPARATION: usize = 100;

/// Factor applied to every kernel entry of the Toeplitz matrices.
///
/// Fixed by matching `r = 1, 2, 3` against exact diagonalization and the
/// finite-chain free-fermion solver; the determinant carries `0.5^r`.
pub const TOEPLITZ_ENTRY_SCALE: f64 = 0.5;

/// `J (cos phi - 2 D sin phi) - 1`
#[inline]
fn bracket(p: &ModelParams, phi: f64) -> f64 {
    p.j * (phi.cos() - 2.0 * p.d * phi.sin()) - 1.0
}

pub fn delta_dispersion(params: &ModelParams, phi: f64) -> f64 {
    let b = bracket(params, phi);
    let pairing = params.j * params.gamma * phi.sin();
    (b * b + pairing * pairing).sqrt()
}

/// `bracket / Delta`, with the removable `0/0` at a gap closing set to zero.
#[inline]
fn ratio(num: f64, delta: f64) -> f64 {
    if delta == 0.0 {
        0.0
    } else {
        num / delta
    }
}

/// Zeros of `J cos phi - 2 J D sin phi - 1` inside `(0, pi)`, ascending.
///
/// Uses `a cos phi + b sin phi = R cos(phi - psi)` with `R = sqrt(a^2 + b^2)`.
pub fn singularity_breakpoints(params: &ModelParams) -> Vec<f64> {
    let a = params.j;
    let b = -2.0 * params.j * params.d;
    let amplitude = a.hypot(b);
    if amplitude < 1.0 {
        return Vec::new();
    }
    let psi = b.atan2(a);
    let spread = (1.0 / amplitude).clamp(-1.0, 1.0).acos();
    let mut roots: Vec<f64> = [-1.0, 0.0, 1.0]
        .iter()
        .flat_map(|&n| {
            let shift = 2.0 * PI * n;
            [psi + spread + shift, psi - spread + shift]
        })
        .filter(|&phi| phi > 1e-14 && phi < PI - 1e-14)
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    roots
}

/// Copy of `spec` whose breakpoints also contain the model's singular points.
pub fn effective_spec(params: &ModelParams, spec: &QuadratureSpec) -> QuadratureSpec {
    let mut points = spec.breakpoints.clone();
    points.extend(singularity_breakpoints(params));
    points.retain(|&x| x > 0.0 && x < PI);
    points.sort_by(f64::total_cmp);
    points.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    QuadratureSpec {
        breakpoints: points,
        ..spec.clone()
    }
}

/// `<sigma^z>` of the infinite chain.
pub fn magnetization(params: &ModelParams, spec: &QuadratureSpec) -> Result<f64> {
    let p = *params;
    let spec = effective_spec(&p, spec);
    let res = integrate_many(
        |phi, out| {
            let b = bracket(&p, phi);
            out[0] = -ratio(b, delta_dispersion(&p, phi)) / PI;
        },
        1,
        0.0,
        PI,
        &spec,
    )?;
    Ok(res.values[0])
}

/// Kernel values `Q_k` for `k = -range ..= range`, evaluated on shared nodes.
///
/// Splitting `Q_k = E_k + gamma O_k` into its even and odd parts in `k`
/// means only `2 range + 1` integrals are needed.
#[derive(Debug, Clone)]
pub struct KernelTable {
    range: usize,
    even: Vec<f64>,
    odd: Vec<f64>,
    gamma: f64,
}

impl KernelTable {
    pub fn compute(params: &ModelParams, range: usize, spec: &QuadratureSpec) -> Result<Self> {
        let p = *params;
        let spec = effective_spec(&p, spec);
        // At gamma = 0 the odd integrand has a non-integrable pole at the gap
        // zero, but its weight gamma vanishes, so it is skipped.
        let with_odd = p.gamma != 0.0;
        let n = if with_odd { 2 * range + 1 } else { range + 1 };
        let res = integrate_many(
            |phi, out| {
                let delta = delta_dispersion(&p, phi);
                let b = ratio(bracket(&p, phi), delta);
                out[0] = -2.0 * b / PI;
                for k in 1..=range {
                    out[k] = -2.0 * (k as f64 * phi).cos() * b / PI;
                }
                if with_odd {
                    let s = ratio(phi.sin(), delta);
                    for k in 1..=range {
                        out[range + k] = 2.0 * p.j * (k as f64 * phi).sin() * s / PI;
                    }
                }
            },
            n,
            0.0,
            PI,
            &spec,
        )?;
        let even = res.values[..=range].to_vec();
        let mut odd = vec![0.0];
        if with_odd {
            odd.extend_from_slice(&res.values[range + 1..]);
        } else {
            odd.resize(range + 1, 0.0);
        }
        Ok(Self {
            range,
            even,
            odd,
            gamma: p.gamma,
        })
    }

    pub fn range(&self) -> usize {
        self.range
    }

    /// `Q_k`; panics if `|k|` exceeds the computed range.
    pub fn q(&self, k: i64) -> f64 {
        let idx = k.unsigned_abs() as usize;
        assert!(idx <= self.range, "kernel index {k} outside table");
        let odd = if k < 0 { -self.odd[idx] } else { self.odd[idx] };
        self.even[idx] + self.gamma * odd
    }

    /// Magnetization recovered from `Q_0 = 2 <sigma^z>`.
    pub fn magnetization(&self) -> f64 {
        0.5 * self.even[0]
    }

    fn toeplitz_det(&self, r: usize, offset: i64) -> f64 {
        let m = DMatrix::from_fn(r, r, |i, j| {
            TOEPLITZ_ENTRY_SCALE * self.q(i as i64 - j as i64 + offset)
        });
        m.lu().determinant()
    }

    pub fn corr_xx(&self, r: usize) -> f64 {
        self.toeplitz_det(r, -1)
    }

    pub fn corr_yy(&self, r: usize) -> f64 {
        self.toeplitz_det(r, 1)
    }

    pub fn corr_zz(&self, r: usize) -> f64 {
        let mz = self.magnetization();
        let r = r as i64;
        mz * mz - 0.25 * self.q(r) * self.q(-r)
    }
}

/// `Q_r` for any integer `r`.
pub fn kernel_q(params: &ModelParams, r: i64, spec: &QuadratureSpec) -> Result<f64> {
    let table = KernelTable::compute(params, r.unsigned_abs() as usize, spec)?;
    Ok(table.q(r))
}

fn check_separation(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidSeparation { r: 0 });
    }
    if r > MAX_SEPARATION {
        return Err(Error::SeparationTooLarge {
            r,
            max: MAX_SEPARATION,
        });
    }
    Ok(())
}

pub fn corr_xx(params: &ModelParams, r: usize, spec: &QuadratureSpec) -> Result<f64> {
    check_separation(r)?;
    Ok(KernelTable::compute(params, r, spec)?.corr_xx(r))
}

pub fn corr_yy(params: &ModelParams, r: usize, spec: &QuadratureSpec) -> Result<f64> {
    check_separation(r)?;
    Ok(KernelTable::compute(params, r, spec)?.corr_yy(r))
}

pub fn corr_zz(params: &ModelParams, r: usize, spec: &QuadratureSpec) -> Result<f64> {
    check_separation(r)?;
    Ok(KernelTable::compute(params, r, spec)?.corr_zz(r))
}

/// Magnetization and the xx, yy, zz correlators at separation `r`.
pub fn correlation_set(params: &ModelParams, r: usize, spec: &QuadratureSpec) -> Result<CorrelationSet> {
    check_separation(r)?;
    let table = KernelTable::compute(params, r, spec)?;
    Ok(CorrelationSet {
        r,
        mz: table.magnetization(),
        xx: table.corr_xx(r),
        yy: table.corr_yy(r),
        zz: table.corr_zz(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn p(j: f64, gamma: f64, d: f64) -> ModelParams {
        ModelParams::new(j, gamma, d).unwrap()
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(delta_dispersion(&p(0.0, 0.7, 3.0), 1.0), 1.0);
        assert!((delta_dispersion(&p(1.0, 1.0, 0.0), PI) - 2.0).abs() < 1e-15);
        assert_eq!(delta_dispersion(&p(1.0, 1.0, 0.0), 0.0), 0.0);
    }

    #[test]
    fn breakpoint_examples() {
        let bp = singularity_breakpoints(&p(2.0, 0.0, 0.0));
        assert_eq!(bp.len(), 1);
        assert!((bp[0] - FRAC_PI_3).abs() < 1e-14);
        assert!(singularity_breakpoints(&p(0.5, 0.0, 0.0)).is_empty());
        for phi in singularity_breakpoints(&p(1.0, 0.0, 0.5)) {
            assert!((phi.cos() - phi.sin() - 1.0).abs() < 1e-12);
        }
    }

    /// Sign-change scan plus bisection, independent of the phase-amplitude
    /// closed form.
    fn bisection_roots(params: &ModelParams) -> Vec<f64> {
        let g = |phi: f64| bracket(params, phi);
        let n = 20_000;
        let mut roots = Vec::new();
        for i in 0..n {
            let (mut lo, mut hi) = (PI * i as f64 / n as f64, PI * (i + 1) as f64 / n as f64);
            if g(lo) == 0.0 && lo > 0.0 {
                roots.push(lo);
                continue;
            }
            if g(lo) * g(hi) >= 0.0 {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(lo) * g(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        roots
    }

    #[test]
    fn breakpoints_agree_with_bisection() {
        for &(j, d) in &[
            (2.0, 0.0),
            (1.0, 0.5),
            (1.5, 0.3),
            (-1.7, 0.2),
            (3.0, -1.0),
            (0.8, 1.0),
            (1.2, 0.0),
        ] {
            let params = p(j, 0.0, d);
            let closed = singularity_breakpoints(&params);
            let scanned = bisection_roots(&params);
            assert_eq!(closed.len(), scanned.len(), "J={j} D={d}: {closed:?} vs {scanned:?}");
            for (a, b) in closed.iter().zip(&scanned) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn polarized_limit() {
        let spec = QuadratureSpec::default();
        let params = p(0.0, 0.4, 0.9);
        assert!((magnetization(&params, &spec).unwrap() - 1.0).abs() < 1e-14);
        assert!(kernel_q(&params, 1, &spec).unwrap().abs() < 1e-14);
        assert!((kernel_q(&params, 0, &spec).unwrap() - 2.0).abs() < 1e-14);
        let c = correlation_set(&params, 5, &spec).unwrap();
        assert!((c.mz - 1.0).abs() < 1e-14);
        assert!(c.xx.abs() < 1e-14 && c.yy.abs() < 1e-14);
        assert!((c.zz - 1.0).abs() < 1e-14);
    }

    #[test]
    fn critical_ising_magnetization_is_two_over_pi() {
        // integrand reduces to sin(phi/2)/pi
        let m = magnetization(&p(1.0, 1.0, 0.0), &QuadratureSpec::default()).unwrap();
        assert!((m - 2.0 / PI).abs() < 1e-10);
    }

    #[test]
    fn q0_is_twice_magnetization() {
        let spec = QuadratureSpec::default();
        for params in [p(0.5, 1.0, 0.0), p(1.3, 0.5, 0.7), p(2.0, 0.0, 0.25), p(-0.7, -0.2, 1.0)] {
            let m = magnetization(&params, &spec).unwrap();
            let q0 = kernel_q(&params, 0, &spec).unwrap();
            assert!((q0 - 2.0 * m).abs() < 1e-10, "{params:?}");
        }
    }

    #[test]
    fn isotropic_ordered_phase_converges() {
        // gamma = 0 turns the integrand into a step; mz = 1 - 2 acos(1/J) / pi.
        let q = QuadratureSpec::default();
        for j in [1.05, 1.5, 2.0] {
            let c = correlation_set(&p(j, 0.0, 0.0), 5, &q).unwrap();
            let exact = 1.0 - 2.0 * (1.0 / j).acos() / PI;
            assert!((c.mz - exact).abs() < 1e-10, "J={j}");
        }
    }

    #[test]
    fn separation_limits() {
        let spec = QuadratureSpec::default();
        let params = p(0.5, 1.0, 0.0);
        assert!(matches!(
            corr_xx(&params, 101, &spec),
            Err(Error::SeparationTooLarge { r: 101, max: 100 })
        ));
        assert!(matches!(corr_yy(&params, 0, &spec), Err(Error::InvalidSeparation { .. })));
    }

    #[test]
    fn r1_determinants_are_scaled_kernel_entries() {
        let spec = QuadratureSpec::default();
        let params = p(0.8, 0.6, 0.3);
        let qm1 = kernel_q(&params, -1, &spec).unwrap();
        let q1 = kernel_q(&params, 1, &spec).unwrap();
        assert!((corr_xx(&params, 1, &spec).unwrap() - 0.5 * qm1).abs() < 1e-12);
        assert!((corr_yy(&params, 1, &spec).unwrap() - 0.5 * q1).abs() < 1e-12);
    }

    #[test]
    fn anisotropy_swap() {
        let spec = QuadratureSpec::default();
        for &(j, g, d, r) in &[(0.5, 0.5, 0.5, 2), (1.4, 0.8, 0.2, 3), (1.8, 0.3, 1.0, 5)] {
            let a = correlation_set(&p(j, g, d), r, &spec).unwrap();
            let b = correlation_set(&p(j, -g, d), r, &spec).unwrap();
            assert!((a.xx - b.yy).abs() < 1e-9);
            assert!((a.yy - b.xx).abs() < 1e-9);
            assert!((a.mz - b.mz).abs() < 1e-12);
            assert!((a.zz - b.zz).abs() < 1e-9);
        }
    }

    #[test]
    fn halving_tolerance_stays_within_error_estimate() {
        let params = p(1.1, 0.3, 0.4);
        let spec = effective_spec(&params, &QuadratureSpec { rel_tol: 1e-6, ..Default::default() });
        let integrand = |phi: f64| -ratio(bracket(&params, phi), delta_dispersion(&params, phi)) / PI;
        let coarse = crate::quadrature::integrate_adaptive(integrand, &spec).unwrap();
        let fine = crate::quadrature::integrate_adaptive(
            integrand,
            &QuadratureSpec { rel_tol: 5e-7, ..spec.clone() },
        )
        .unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error_estimate);
    }
}
