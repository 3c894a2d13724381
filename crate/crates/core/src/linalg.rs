//! Exact dense linear algebra over Q and over F_p.

use num_traits::{One, Zero};

use crate::fp::{inv_mod, mul_mod};
use crate::poly::Q;

pub type QMat = Vec<Vec<Q>>;

pub fn to_qmat(m: &[Vec<i64>]) -> QMat {
    m.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMat) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of the right kernel {v : m v = 0}.
pub fn nullspace(m: &QMat, cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `m x = b` for square invertible `m`; `None` if singular.
pub fn solve(m: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut aug: QMat = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn identity(n: usize) -> QMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

/// Rank over F_p of an integer matrix by Gaussian elimination.
pub fn rank_mod_p(m: &[Vec<i64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in (r + 1)..rows {
            let f = a[i][c];
            if f != 0 {
                for j in c..cols {
                    let t = mul_mod(f, a[r][j], p);
                    a[i][j] = (a[i][j] + p - t) % p;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let m = to_qmat(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for row in &m {
                let s: Q = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn solve_small() {
        let m = to_qmat(&[vec![2, 1], vec![1, 3]]);
        let x = solve(&m, &[q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Q::new(4.into(), 5.into()), Q::new(7.into(), 5.into())]);
        assert!(solve(&to_qmat(&[vec![1, 1], vec![2, 2]]), &[q(1), q(2)]).is_none());
    }

    #[test]
    fn rank_mod_small_primes() {
        let m = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(rank_mod_p(&m, 3), 1);
        assert_eq!(rank_mod_p(&m, 5), 2);
    }
}
