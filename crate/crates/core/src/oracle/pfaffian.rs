//! Pfaffian of a complex antisymmetric matrix by pivoted Parlett-Reid
//! elimination.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `Pf(A)` for antisymmetric `A`; only the strict upper triangle is read.
pub fn pfaffian(a: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "pfaffian needs a square matrix");
    let zero = Complex64::new(0.0, 0.0);
    if n % 2 == 1 {
        return zero;
    }
    // Rebuild from the upper triangle so callers need not fill both halves.
    let mut m = DMatrix::<Complex64>::from_fn(n, n, |r, c| {
        if r < c {
            a[(r, c)]
        } else if r > c {
            -a[(c, r)]
        } else {
            zero
        }
    });
    let mut pf = Complex64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        // Largest entry in column k below the diagonal becomes the pivot.
        let (mut p, mut best) = (k + 1, m[(k + 1, k)].norm());
        for row in k + 2..n {
            let v = m[(row, k)].norm();
            if v > best {
                p = row;
                best = v;
            }
        }
        if best == 0.0 {
            return zero;
        }
        if p != k + 1 {
            m.swap_rows(k + 1, p);
            m.swap_columns(k + 1, p);
            pf = -pf;
        }
        let pivot = m[(k, k + 1)];
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<Complex64> = (k + 2..n).map(|i| m[(k, i)] / pivot).collect();
            // Eliminate row/column k using row/column k+1 on the trailing block.
            for (ii, i) in (k + 2..n).enumerate() {
                for j in k + 2..n {
                    let update = tau[ii] * m[(j, k + 1)] - m[(i, k + 1)] * tau[j - k - 2];
                    m[(i, j)] += update;
                }
            }
        }
        k += 2;
    }
    pf
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn brute(a: &DMatrix<Complex64>, idx: &[usize]) -> Complex64 {
        if idx.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let first = idx[0];
        let mut total = Complex64::new(0.0, 0.0);
        for (pos, &other) in idx.iter().enumerate().skip(1) {
            let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != first && x != other).collect();
            let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
            total += a[(first, other)] * brute(a, &rest) * sign;
        }
        total
    }

    fn random_antisymmetric(n: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for r in 0..n {
            for c in r + 1..n {
                let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(r, c)] = v;
                m[(c, r)] = -v;
            }
        }
        m
    }

    #[test]
    fn small_cases() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.3, -0.2);
        m[(1, 0)] = -m[(0, 1)];
        assert_eq!(pfaffian(&m), Complex64::new(0.3, -0.2));
        assert_eq!(pfaffian(&DMatrix::zeros(3, 3)), Complex64::new(0.0, 0.0));
        assert_eq!(pfaffian(&DMatrix::zeros(0, 0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn matches_expansion_and_determinant() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [2, 4, 6, 8] {
            for _ in 0..5 {
                let a = random_antisymmetric(n, &mut rng);
                let pf = pfaffian(&a);
                let idx: Vec<usize> = (0..n).collect();
                assert!((pf - brute(&a, &idx)).norm() < 1e-12, "n={n}");
                assert!((pf * pf - a.clone().determinant()).norm() < 1e-10, "n={n}");
            }
        }
    }

    #[test]
    fn needs_pivoting() {
        // Zero in the natural pivot position.
        let mut a = DMatrix::<Complex64>::zeros(4, 4);
        let one = Complex64::new(1.0, 0.0);
        a[(0, 2)] = one;
        a[(1, 3)] = one;
        for (r, c) in [(0, 2), (1, 3)] {
            a[(c, r)] = -a[(r, c)];
        }
        let idx: Vec<usize> = (0..4).collect();
        assert!((pfaffian(&a) - brute(&a, &idx)).norm() < 1e-15);
        assert!((pfaffian(&a) + one).norm() < 1e-15);
    }
}
