//! Exact diagonalization of short periodic chains.
//!
//! Basis index bit `n - 1 - i` holds site `i` (0-based), so site 0 is the
//! leftmost Kronecker factor; bit value 0 is spin up.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{CorrelationSet, ModelParams};
use crate::state::DensityMatrix4;

use super::FiniteChainSpec;

pub const MIN_DENSE_SITES: usize = 2;
pub const MAX_DENSE_SITES: usize = 14;

/// Sparse representation of the periodic-chain Hamiltonian
///
/// ```text
/// H = sum_i (J/2) [(1+g) X_i X_{i+1} + (1-g) Y_i Y_{i+1} + 2D (X_i Y_{i+1} - Y_i X_{i+1})] - Z_i
/// ```
///
/// whose Jordan-Wigner dispersion is `2 [J (cos k - 2 D sin k) - 1]`.
#[derive(Debug, Clone)]
pub struct ChainHamiltonian {
    n: usize,
    diagonal: Vec<f64>,
    /// `(row, col, value)` with `row != col`; both triangles are stored.
    hops: Vec<(usize, usize, Complex64)>,
}

pub fn build_hamiltonian(spec: &FiniteChainSpec) -> Result<ChainHamiltonian> {
    let n = spec.n;
    if !(MIN_DENSE_SITES..=MAX_DENSE_SITES).contains(&n) {
        return Err(Error::SizeOutOfRange {
            n,
            min: MIN_DENSE_SITES,
            max: MAX_DENSE_SITES,
        });
    }
    let ModelParams { j, gamma, d } = spec.params;
    let dim = 1usize << n;
    let bit = |site: usize| n - 1 - site;

    let same = Complex64::new(j * gamma, 0.0);
    let up_down = Complex64::new(j, -2.0 * j * d);
    let down_up = Complex64::new(j, 2.0 * j * d);

    let mut diagonal = vec![0.0; dim];
    let mut hops = Vec::with_capacity(dim * n);
    for (s, diag) in diagonal.iter_mut().enumerate() {
        let downs = s.count_ones() as f64;
        *diag = -(n as f64 - 2.0 * downs);
        for site in 0..n {
            let next = (site + 1) % n;
            let (bi, bj) = (bit(site), bit(next));
            let si = (s >> bi) & 1;
            let sj = (s >> bj) & 1;
            let t = s ^ (1 << bi) ^ (1 << bj);
            let value = match (si, sj) {
                (0, 1) => up_down,
                (1, 0) => down_up,
                _ => same,
            };
            if value != Complex64::new(0.0, 0.0) {
                hops.push((t, s, value));
            }
        }
    }
    Ok(ChainHamiltonian { n, diagonal, hops })
}

impl ChainHamiltonian {
    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            diagonal: self.diagonal.iter().map(|x| x * factor).collect(),
            hops: self.hops.iter().map(|&(r, c, v)| (r, c, v * factor)).collect(),
        }
    }

    /// Dense matrix restricted to `indices` (all of which must share a
    /// fermion parity, or be the full basis).
    fn dense_block(&self, indices: &[usize]) -> Mat<Complex64> {
        let mut position = vec![usize::MAX; self.dim()];
        for (k, &s) in indices.iter().enumerate() {
            position[s] = k;
        }
        let m = indices.len();
        let mut h = Mat::<Complex64>::zeros(m, m);
        for (k, &s) in indices.iter().enumerate() {
            h[(k, k)] = Complex64::new(self.diagonal[s], 0.0);
        }
        for &(row, col, v) in &self.hops {
            let (pr, pc) = (position[row], position[col]);
            if pr != usize::MAX && pc != usize::MAX {
                h[(pr, pc)] += v;
            }
        }
        h
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        let all: Vec<usize> = (0..self.dim()).collect();
        self.dense_block(&all)
    }

    /// `max |H - H^dagger|` over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let h = self.to_dense();
        let mut worst: f64 = 0.0;
        for r in 0..h.nrows() {
            for c in 0..h.ncols() {
                worst = worst.max((h[(r, c)] - h[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Basis states with an even (`true`) or odd number of down spins.
    pub fn parity_sector(&self, even: bool) -> Vec<usize> {
        (0..self.dim())
            .filter(|s| (s.count_ones() % 2 == 0) == even)
            .collect()
    }

    /// Every eigenvalue, ascending, from block diagonalization.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let mut all = Vec::with_capacity(self.dim());
        for even in [true, false] {
            let block = self.dense_block(&self.parity_sector(even));
            let values = block
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| Error::Eigen(format!("{e:?}")))?;
            all.extend(values);
        }
        all.sort_by(f64::total_cmp);
        Ok(all)
    }
}

/// Zero-temperature state: equal-weight mixture over the ground manifold.
#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub energy: f64,
    pub degeneracy: usize,
    pub sites: usize,
    /// Orthonormal ground-manifold vectors in the full `2^N` basis.
    pub vectors: Vec<Vec<Complex64>>,
    pub spectral_width: f64,
}

/// Fully diagonalizes both parity blocks and keeps every eigenvector within
/// `rel_tol * (E_max - E_min)` of the minimum.
pub fn ground_state(h: &ChainHamiltonian, rel_tol: f64) -> Result<GroundStateResult> {
    let mut candidates: Vec<(f64, Vec<Complex64>)> = Vec::new();
    let mut e_min = f64::INFINITY;
    let mut e_max = f64::NEG_INFINITY;
    let mut blocks = Vec::new();
    for even in [true, false] {
        let indices = h.parity_sector(even);
        let block = h.dense_block(&indices);
        let eig = block
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let values: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
        e_min = e_min.min(values[0]);
        e_max = e_max.max(values[values.len() - 1]);
        blocks.push((indices, values, eig));
    }
    let width = e_max - e_min;
    let cutoff = e_min + rel_tol * width;
    for (indices, values, eig) in &blocks {
        let u = eig.U();
        for (col, &e) in values.iter().enumerate() {
            if e > cutoff {
                break;
            }
            let mut full = vec![Complex64::new(0.0, 0.0); h.dim()];
            for (k, &s) in indices.iter().enumerate() {
                full[s] = u[(k, col)];
            }
            candidates.push((e, full));
        }
    }
    Ok(GroundStateResult {
        energy: e_min,
        degeneracy: candidates.len(),
        sites: h.sites(),
        vectors: candidates.into_iter().map(|(_, v)| v).collect(),
        spectral_width: width,
    })
}

/// Two-site reduced state on sites `i < j` (1-based) of an `n`-site chain.
pub fn reduced_two_spin(gs: &GroundStateResult, i: usize, j: usize, n: usize) -> Result<DensityMatrix4> {
    if !(1 <= i && i < j && j <= n) || n != gs.sites {
        return Err(Error::IndexOutOfRange { i, j, n });
    }
    let bi = n - i;
    let bj = n - j;
    let mask = (1usize << bi) | (1usize << bj);
    let weight = 1.0 / gs.vectors.len() as f64;
    let mut rho = nalgebra::Matrix4::<Complex64>::zeros();
    for v in &gs.vectors {
        for (s, &amp) in v.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = 2 * ((s >> bi) & 1) + ((s >> bj) & 1);
            let base = s & !mask;
            for a in 0..2 {
                for b in 0..2 {
                    let t = base | (a << bi) | (b << bj);
                    rho[(row, 2 * a + b)] += amp * v[t].conj() * weight;
                }
            }
        }
    }
    DensityMatrix4::new(rho)
}

fn expectation(rho: &DensityMatrix4, op: &nalgebra::Matrix4<Complex64>) -> f64 {
    (rho.matrix() * op).trace().re
}

/// Site-averaged correlators at separation `r` of an already solved chain.
pub fn correlators_from_ground_state(gs: &GroundStateResult, r: usize) -> Result<CorrelationSet> {
    use crate::measures::{pauli_x, pauli_y, pauli_z};
    let n = gs.sites;
    if r == 0 || 2 * r > n {
        return Err(Error::InvalidSeparation { r: r as i64 });
    }
    let id = nalgebra::Matrix2::<Complex64>::identity();
    let z_sum = pauli_z().kronecker(&id) + id.kronecker(&pauli_z());
    let xx_op = pauli_x().kronecker(&pauli_x());
    let yy_op = pauli_y().kronecker(&pauli_y());
    let zz_op = pauli_z().kronecker(&pauli_z());
    let (mut mz, mut xx, mut yy, mut zz) = (0.0, 0.0, 0.0, 0.0);
    for site in 0..n {
        let other = (site + r) % n;
        let (a, b) = (site.min(other) + 1, site.max(other) + 1);
        let rho = reduced_two_spin(gs, a, b, n)?;
        mz += 0.5 * expectation(&rho, &z_sum);
        xx += expectation(&rho, &xx_op);
        yy += expectation(&rho, &yy_op);
        zz += expectation(&rho, &zz_op);
    }
    let inv = 1.0 / n as f64;
    Ok(CorrelationSet::new(r, mz * inv, xx * inv, yy * inv, zz * inv))
}

/// Ground-state correlators of an `N`-site ring by exact diagonalization.
pub fn finite_correlators(spec: &FiniteChainSpec, r: usize) -> Result<CorrelationSet> {
    if r == 0 || 2 * r > spec.n {
        return Err(Error::InvalidSeparation { r: r as i64 });
    }
    let h = build_hamiltonian(spec)?;
    let gs = ground_state(&h, spec.degeneracy_rel_tol)?;
    correlators_from_ground_state(&gs, r)
}
