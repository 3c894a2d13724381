//! Smith normal form invariants of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Nonzero invariant factors d_1 | d_2 | ... of an integer matrix.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in (t + 1)..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let s = &f * &a[t][j];
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in (t + 1)..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = a[t][j].div_floor(&a[t][t]);
                for r in a.iter_mut().skip(t) {
                    let s = &f * &r[t];
                    r[j] -= s;
                }
                if !a[t][j].is_zero() {
                    for r in a.iter_mut() {
                        r.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: pivot must divide every remaining entry
            let mut bad = None;
            'o: for i in (t + 1)..rows {
                for j in (t + 1)..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        bad = Some(i);
                        break 'o;
                    }
                }
            }
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// dim H_1(G; F_p) for a group whose abelianization has relation matrix
/// `m` (rows relators, columns generators).
pub fn d_p_from_smith(m: &[Vec<i64>], cols: usize, p: u64) -> usize {
    let inv = invariant_factors(m);
    let pb = BigInt::from(p);
    let divisible = inv.iter().filter(|d| (*d % &pb).is_zero()).count();
    cols - inv.len() + divisible
}

/// Torsion and free rank of the abelian group Z^cols / rowspace(m).
pub fn abelian_invariants(m: &[Vec<i64>], cols: usize) -> (Vec<BigInt>, usize) {
    let inv = invariant_factors(m);
    let free = cols - inv.len();
    let torsion = inv.into_iter().filter(|d| !d.is_one()).collect();
    (torsion, free)
}
