//! Polynomials over a prime field `F_p` and their factorization
//! (squarefree decomposition, distinct-degree and equal-degree splitting).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, t))` when n = p^t with t >= 1.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, t)] => Some((*p, *t)),
        _ => None,
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// A polynomial over `F_p`, constant term first, trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.coeffs, self.p)
    }
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly { p, coeffs: vec![1 % p] }
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (mul_mod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(self.p, (0..n).map(|i| (get(&self.coeffs, i) + get(&o.coeffs, i)) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n)
                .map(|i| (get(&self.coeffs, i) + self.p - get(&o.coeffs, i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.degree().unwrap();
        let inv = inv_mod(d.lead(), p);
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (Self::zero(p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], inv, p);
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = (rem[k] + p - mul_mod(c, dc, p)) % p;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// For `f` with `f' = 0`: the polynomial `g` with `g^p = f`.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    /// Factorization into monic irreducibles with multiplicities, sorted.
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        assert!(!self.is_zero());
        let mut out = Vec::new();
        for (sf, mult) in self.monic().squarefree_decomposition() {
            for (g, d) in sf.distinct_degree() {
                for h in g.equal_degree(d) {
                    out.push((h, mult));
                }
            }
        }
        out.sort();
        out
    }

    /// Degrees of the irreducible factors (with multiplicity), sorted.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (sf, mult) in self.monic().squarefree_decomposition() {
            for (g, d) in sf.distinct_degree() {
                let k = g.degree().unwrap() / d;
                out.extend(std::iter::repeat_n(d, k * mult));
            }
        }
        out.sort();
        out
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, i)` with
    /// `f = prod g^i`, each `g` squarefree.
    pub fn squarefree_decomposition(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        if d.is_zero() {
            for (g, m) in f.pth_root().squarefree_decomposition() {
                out.push((g, m * p as usize));
            }
            return out;
        }
        let mut c = f.gcd(&d);
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.div_rem(&y).0;
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.div_rem(&w).0;
        }
        if !c.is_one() {
            for (g, m) in c.pth_root().squarefree_decomposition() {
                out.push((g, m * p as usize));
            }
        }
        out
    }

    /// Distinct-degree factorization of a squarefree monic polynomial.
    pub fn distinct_degree(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Self::x(p);
        let mut h = x.clone();
        let mut d = 1;
        while f.degree().unwrap_or(0) >= 2 * d {
            h = h.pow_mod(p as u128, &f);
            let g = h.sub(&x).gcd(&f);
            if !g.is_one() {
                f = f.div_rem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            let deg = f.degree().unwrap();
            out.push((f, deg));
        }
        out
    }

    /// Splits a squarefree monic product of irreducibles of degree `d`
    /// (Cantor–Zassenhaus; trace map in characteristic 2).
    pub fn equal_degree(&self, d: usize) -> Vec<FpPoly> {
        let n = self.degree().unwrap_or(0);
        if n == d {
            return vec![self.monic()];
        }
        let p = self.p;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p ^ ((n as u64) << 32));
        loop {
            let a = Self::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = ((p as u128).pow(d as u32) - 1) / 2;
                a.pow_mod(e, self).sub(&Self::one(p))
            };
            let g = b.gcd(self);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let mut out = g.equal_degree(d);
                out.extend(self.div_rem(&g).0.equal_degree(d));
                out.sort();
                return out;
            }
        }
    }

    pub fn is_irreducible(&self) -> bool {
        let n = self.degree().unwrap_or(0);
        n >= 1 && self.factor_degrees() == vec![n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[(FpPoly, usize)], p: u64) -> FpPoly {
        let mut acc = FpPoly::one(p);
        for (g, m) in fs {
            for _ in 0..*m {
                acc = acc.mul(g);
            }
        }
        acc
    }

    /// All monic polynomials of degree `d` over `F_p`.
    fn monic_of_degree(p: u64, d: usize) -> Vec<FpPoly> {
        let mut out = Vec::new();
        let total = p.pow(d as u32);
        for idx in 0..total {
            let mut c = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                c.push(k % p);
                k /= p;
            }
            c.push(1);
            out.push(FpPoly::new(p, c));
        }
        out
    }

    /// Trial division by every monic polynomial of degree up to deg/2.
    fn trial_factor(f: &FpPoly) -> Vec<(FpPoly, usize)> {
        let p = f.p;
        let mut f = f.monic();
        let mut out: Vec<(FpPoly, usize)> = Vec::new();
        let mut d = 1;
        while 2 * d <= f.degree().unwrap_or(0) {
            for g in monic_of_degree(p, d) {
                let mut m = 0;
                loop {
                    let (quo, r) = f.div_rem(&g);
                    if !r.is_zero() {
                        break;
                    }
                    f = quo;
                    m += 1;
                }
                if m > 0 {
                    out.push((g, m));
                }
            }
            d += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            out.push((f, 1));
        }
        out.sort();
        out
    }

    #[test]
    fn factor_small_cases() {
        // x^2 + 1 = (x-2)(x+2) mod 5
        let f = FpPoly::from_i64(5, &[1, 0, 1]);
        let fs = f.factor();
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs, 5), f);
        // x^2 + 1 = (x+1)^2 mod 2
        let f = FpPoly::from_i64(2, &[1, 0, 1]);
        assert_eq!(f.factor(), vec![(FpPoly::new(2, vec![1, 1]), 2)]);
    }

    #[test]
    fn factor_matches_trial_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &[2u64, 3, 5, 7, 11] {
            for _ in 0..40 {
                let deg = rng.gen_range(1..=7);
                let mut c: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                c.push(1);
                let f = FpPoly::new(p, c);
                assert_eq!(f.factor(), trial_factor(&f), "p={p} f={f:?}");
            }
        }
    }

    #[test]
    fn repeated_pth_powers() {
        // (x+1)^6 over F_3 has f' = 0 parts
        let base = FpPoly::from_i64(3, &[1, 1]);
        let mut f = FpPoly::one(3);
        for _ in 0..6 {
            f = f.mul(&base);
        }
        assert_eq!(f.factor(), vec![(base, 6)]);
    }
}
