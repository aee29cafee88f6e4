//! Finite-ring free-fermion solution after the Jordan-Wigner map.
//!
//! With `Z = 2n - 1` the ring becomes, per fermion-parity sector,
//!
//! ```text
//! H = N + sum_k eps_k n_k + sum_{pairs} (w_k c+_k c+_-k + h.c.)
//! eps_k = 2 [J (cos k - 2 D sin k) - 1],   w_k = 2 i J g sin k
//! ```
//!
//! with antiperiodic momenta for even fermion number and periodic ones for
//! odd. Each `(k, -k)` pair is a 4-state problem, so the sector ground state
//! is a product over pairs; a parity mismatch is repaired by the cheapest
//! single-pair flip. Spin strings become Majorana products evaluated as
//! Pfaffians.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::CorrelationSet;

use super::pfaffian::pfaffian;
use super::FiniteChainSpec;

pub const MIN_FREE_FERMION_SITES: usize = 2;
pub const MAX_FREE_FERMION_SITES: usize = 4096;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy)]
enum Group {
    Pair(usize, usize),
    Single(usize),
}

/// Options available to one momentum group: best even/odd energies plus the
/// extreme energies used for the spectral width.
#[derive(Debug, Clone, Copy)]
struct GroupOptions {
    even_min: f64,
    odd_min: f64,
    even_max: f64,
    odd_max: f64,
}

#[derive(Debug, Clone)]
struct Sector {
    energy: f64,
    max_energy: f64,
    momenta: Vec<f64>,
    occupation: Vec<f64>,
    /// `<c_k c_-k>` indexed by `k`.
    anomalous: Vec<Complex64>,
}

/// Ground state (or equal-weight mixture of degenerate sector ground states)
/// of the ring.
#[derive(Debug, Clone)]
pub struct FreeFermionState {
    pub sites: usize,
    pub energy: f64,
    pub degeneracy: usize,
    pub spectral_width: f64,
    sectors: Vec<Sector>,
}

fn dispersion(j: f64, d: f64, k: f64) -> f64 {
    2.0 * (j * (k.cos() - 2.0 * d * k.sin()) - 1.0)
}

/// Minimizes `sum_g choice_g` subject to the total odd-choice parity.
/// Returns `(total, odd choices)`.
fn constrained_min(options: &[(f64, f64)], want_odd: bool) -> (f64, Vec<bool>) {
    let mut odd: Vec<bool> = options.iter().map(|&(e, o)| o < e).collect();
    let mut total: f64 = options.iter().map(|&(e, o)| e.min(o)).sum();
    let parity = odd.iter().filter(|&&x| x).count() % 2 == 1;
    if parity != want_odd {
        let (idx, cost) = options
            .iter()
            .enumerate()
            .map(|(i, &(e, o))| (i, (e - o).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one momentum group");
        odd[idx] = !odd[idx];
        total += cost;
    }
    (total, odd)
}

fn solve_sector(spec: &FiniteChainSpec, even_fermions: bool) -> Sector {
    let n = spec.n;
    let (j, g, d) = (spec.params.j, spec.params.gamma, spec.params.d);
    let shift = if even_fermions { 0.5 } else { 0.0 };
    let momenta: Vec<f64> = (0..n).map(|m| 2.0 * PI * (m as f64 + shift) / n as f64).collect();
    let partner = |m: usize| if even_fermions { n - 1 - m } else { (n - m) % n };

    let mut groups = Vec::new();
    for m in 0..n {
        let p = partner(m);
        if p == m {
            groups.push(Group::Single(m));
        } else if m < p {
            groups.push(Group::Pair(m, p));
        }
    }

    let eps: Vec<f64> = momenta.iter().map(|&k| dispersion(j, d, k)).collect();
    let options: Vec<GroupOptions> = groups
        .iter()
        .map(|grp| match *grp {
            Group::Pair(a, b) => {
                let s = 0.5 * (eps[a] + eps[b]);
                let w = 2.0 * j * g * momenta[a].sin();
                let root = s.hypot(w);
                GroupOptions {
                    even_min: s - root,
                    odd_min: eps[a].min(eps[b]),
                    even_max: s + root,
                    odd_max: eps[a].max(eps[b]),
                }
            }
            Group::Single(a) => GroupOptions {
                even_min: 0.0,
                odd_min: eps[a],
                even_max: 0.0,
                odd_max: eps[a],
            },
        })
        .collect();

    let want_odd = !even_fermions;
    let low: Vec<(f64, f64)> = options.iter().map(|o| (o.even_min, o.odd_min)).collect();
    let (e_low, odd) = constrained_min(&low, want_odd);
    let high: Vec<(f64, f64)> = options.iter().map(|o| (-o.even_max, -o.odd_max)).collect();
    let (e_high, _) = constrained_min(&high, want_odd);

    let mut occupation = vec![0.0; n];
    let mut anomalous = vec![ZERO; n];
    for (grp, &is_odd) in groups.iter().zip(&odd) {
        match *grp {
            Group::Single(a) => occupation[a] = if is_odd { 1.0 } else { 0.0 },
            Group::Pair(a, b) if is_odd => {
                let lower = if eps[a] <= eps[b] { a } else { b };
                occupation[lower] = 1.0;
            }
            Group::Pair(a, b) => {
                let (u, v) = bcs_ground(eps[a] + eps[b], Complex64::new(0.0, 2.0 * j * g * momenta[a].sin()));
                let pair = -u.conj() * v;
                occupation[a] = v.norm_sqr();
                occupation[b] = v.norm_sqr();
                anomalous[a] = pair;
                anomalous[b] = -pair;
            }
        }
    }

    Sector {
        energy: n as f64 + e_low,
        max_energy: n as f64 - e_high,
        momenta,
        occupation,
        anomalous,
    }
}

/// Lowest eigenvector `(u, v)` of `[[0, conj(w)], [w, sum]]` in the basis
/// `(|0>, c+_k c+_-k |0>)`.
fn bcs_ground(sum: f64, w: Complex64) -> (Complex64, Complex64) {
    if w.norm() == 0.0 {
        return if sum < 0.0 {
            (ZERO, Complex64::new(1.0, 0.0))
        } else {
            (Complex64::new(1.0, 0.0), ZERO)
        };
    }
    let s = 0.5 * sum;
    let root = s.hypot(w.norm());
    // Avoid cancellation in s - root when s > 0.
    let lambda = if s > 0.0 { -w.norm_sqr() / (s + root) } else { s - root };
    let u = w.conj();
    let v = Complex64::new(lambda, 0.0);
    let norm = (u.norm_sqr() + v.norm_sqr()).sqrt();
    (u / norm, v / norm)
}

#[derive(Debug, Clone, Copy)]
enum Majorana {
    /// `c+ + c`
    A,
    /// `c+ - c`
    B,
}

impl Majorana {
    fn beta(self) -> f64 {
        match self {
            Majorana::A => 1.0,
            Majorana::B => -1.0,
        }
    }
}

impl Sector {
    fn fourier(&self, values: impl Fn(usize) -> Complex64, dist: i64) -> Complex64 {
        let n = self.momenta.len();
        let mut acc = ZERO;
        for (m, &k) in self.momenta.iter().enumerate() {
            let v = values(m);
            if v != ZERO {
                acc += Complex64::from_polar(1.0, k * dist as f64) * v;
            }
        }
        acc / n as f64
    }

    /// `<c+_a c_b>`
    fn normal(&self, a: i64, b: i64) -> Complex64 {
        self.fourier(|m| Complex64::new(self.occupation[m], 0.0), b - a)
    }

    /// `<c_a c_b>`
    fn pairing(&self, a: i64, b: i64) -> Complex64 {
        self.fourier(|m| self.anomalous[m], a - b)
    }

    fn contraction(&self, (oa, a): (Majorana, i64), (ob, b): (Majorana, i64)) -> Complex64 {
        let (ba, bb) = (oa.beta(), ob.beta());
        let delta = if a == b { 1.0 } else { 0.0 };
        self.pairing(b, a).conj()
            + self.normal(a, b) * bb
            + (Complex64::new(delta, 0.0) - self.normal(b, a)) * ba
            + self.pairing(a, b) * (ba * bb)
    }

    fn string(&self, ops: &[(Majorana, i64)]) -> Complex64 {
        let len = ops.len();
        let mut m = DMatrix::<Complex64>::zeros(len, len);
        for x in 0..len {
            for y in x + 1..len {
                let v = self.contraction(ops[x], ops[y]);
                m[(x, y)] = v;
                m[(y, x)] = -v;
            }
        }
        pfaffian(&m)
    }

    fn correlators(&self, r: usize) -> CorrelationSet {
        use Majorana::{A, B};
        let r = r as i64;
        let mz = 2.0 * self.normal(0, 0).re - 1.0;

        let mut xx_ops = Vec::with_capacity(2 * r as usize);
        for l in 0..r {
            xx_ops.push((B, l));
            xx_ops.push((A, l + 1));
        }
        let mut yy_ops = vec![(A, 0)];
        for l in 1..r {
            yy_ops.push((A, l));
            yy_ops.push((B, l));
        }
        yy_ops.push((B, r));
        let zz_ops = [(A, 0), (B, 0), (A, r), (B, r)];

        CorrelationSet::new(
            r as usize,
            mz,
            self.string(&xx_ops).re,
            -self.string(&yy_ops).re,
            self.string(&zz_ops).re,
        )
    }
}

fn check_size(n: usize) -> Result<()> {
    if !(MIN_FREE_FERMION_SITES..=MAX_FREE_FERMION_SITES).contains(&n) {
        return Err(Error::SizeOutOfRange {
            n,
            min: MIN_FREE_FERMION_SITES,
            max: MAX_FREE_FERMION_SITES,
        });
    }
    Ok(())
}

/// Solves both parity sectors and keeps every sector whose ground energy lies
/// within `degeneracy_rel_tol * width` of the lowest.
pub fn free_fermion_ground_state(spec: &FiniteChainSpec) -> Result<FreeFermionState> {
    check_size(spec.n)?;
    let sectors = [solve_sector(spec, true), solve_sector(spec, false)];
    let e_min = sectors.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min);
    let e_max = sectors.iter().map(|s| s.max_energy).fold(f64::NEG_INFINITY, f64::max);
    let width = e_max - e_min;
    let cutoff = e_min + spec.degeneracy_rel_tol * width;
    let kept: Vec<Sector> = sectors.into_iter().filter(|s| s.energy <= cutoff).collect();
    Ok(FreeFermionState {
        sites: spec.n,
        energy: e_min,
        degeneracy: kept.len(),
        spectral_width: width,
        sectors: kept,
    })
}

impl FreeFermionState {
    pub fn correlators(&self, r: usize) -> Result<CorrelationSet> {
        if r == 0 || 2 * r > self.sites {
            return Err(Error::InvalidSeparation { r: r as i64 });
        }
        let weight = 1.0 / self.sectors.len() as f64;
        let mut acc = [0.0; 4];
        for sector in &self.sectors {
            for (slot, v) in acc.iter_mut().zip(sector.correlators(r).fields()) {
                *slot += weight * v;
            }
        }
        Ok(CorrelationSet::new(r, acc[0], acc[1], acc[2], acc[3]))
    }
}

pub fn free_fermion_correlators(spec: &FiniteChainSpec, r: usize) -> Result<CorrelationSet> {
    free_fermion_ground_state(spec)?.correlators(r)
}
