//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored constant term first with no trailing zeros, so the
//! zero polynomial is the empty vector. Everything here is exact: Sturm
//! sequences, resultants and root isolation never touch floating point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly(")?;
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write!(f, " {:+}x^{}", c, i)?;
        }
        write!(f, ")")
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| Q::from_integer(c.clone())).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn x() -> Self {
        QPoly { coeffs: vec![Q::zero(), Q::one()] }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + to_f64(c);
        }
        acc
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead_inv = d.lead().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &c * dc;
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (quo, r) = r0.div_rem(&r1);
            let s = &s0 - &(&quo * &s1);
            let t = &t0 - &(&quo * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// `self / gcd(self, self')`: same roots, all simple.
    pub fn squarefree_part(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &QPoly::constant(c.clone());
        }
        acc
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_bigints(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Upper bound on the absolute value of every complex root (Cauchy).
    pub fn cauchy_bound(&self) -> Q {
        let lead = self.lead().abs();
        let mut m = Q::zero();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + Q::one()
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

pub fn to_f64(c: &Q) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::NAN)
}

/// Determinant of a square rational matrix by fraction-tracking elimination.
pub fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut d = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        let p = m[col][col].clone();
        d *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    d
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &QPoly, g: &QPoly) -> Q {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Q::zero();
    };
    if m == 0 && n == 0 {
        return Q::one();
    }
    if m == 0 {
        return f.lead().pow(n as i32);
    }
    if n == 0 {
        return g.lead().pow(m as i32);
    }
    let size = m + n;
    let mut s = vec![vec![Q::zero(); size]; size];
    for row in 0..n {
        for (i, c) in f.coeffs.iter().enumerate() {
            s[row][row + m - i] = c.clone();
        }
    }
    for row in 0..m {
        for (i, c) in g.coeffs.iter().enumerate() {
            s[n + row][row + n - i] = c.clone();
        }
    }
    det(s)
}

/// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
pub fn discriminant(f: &QPoly) -> Q {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Q::zero();
    }
    if n == 1 {
        return Q::one();
    }
    let r = resultant(f, &f.derivative()) / f.lead();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Sturm sequence of a polynomial (which should be squarefree for the
/// root counts below to count distinct roots exactly once).
pub fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sgn(c: &Q) -> i8 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

pub fn sign_changes_at(seq: &[QPoly], x: &Q) -> usize {
    sign_changes(seq.iter().map(|p| sgn(&p.eval(x))))
}

pub fn sign_changes_at_infinity(seq: &[QPoly], positive: bool) -> usize {
    sign_changes(seq.iter().map(|p| {
        let s = sgn(&p.lead());
        let odd = p.degree().unwrap_or(0) % 2 == 1;
        if !positive && odd {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &QPoly) -> usize {
    let sf = p.squarefree_part();
    if sf.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&sf);
    sign_changes_at_infinity(&seq, false) - sign_changes_at_infinity(&seq, true)
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots_in(seq: &[QPoly], a: &Q, b: &Q) -> usize {
    sign_changes_at(seq, a).saturating_sub(sign_changes_at(seq, b))
}

/// Isolates the smallest root strictly greater than `above` to an interval
/// `(lo, hi]` of width at most `2^-bits`. Returns `None` if there is none.
pub fn smallest_root_above(p: &QPoly, above: &Q, bits: u32) -> Option<(Q, Q)> {
    let sf = p.squarefree_part();
    if sf.degree().unwrap_or(0) == 0 {
        return None;
    }
    let seq = sturm_sequence(&sf);
    let bound = sf.cauchy_bound();
    let lo = above.clone();
    if &bound <= above || count_roots_in(&seq, &lo, &bound) == 0 {
        return None;
    }
    let mut hi = bound;
    // shrink hi while keeping at least one root in (lo, hi]
    let width = Q::new(BigInt::one(), BigInt::one() << bits);
    let mut lo_cur = lo;
    while &hi - &lo_cur > width {
        let mid = (&lo_cur + &hi) / q(2);
        if count_roots_in(&seq, &lo_cur, &mid) > 0 {
            hi = mid;
        } else {
            lo_cur = mid;
        }
    }
    Some((lo_cur, hi))
}

/// Disjoint intervals `(lo, hi]`, in increasing order, each containing
/// exactly one distinct real root.
pub fn isolate_real_roots(p: &QPoly) -> Vec<(Q, Q)> {
    let sf = p.squarefree_part();
    if sf.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let seq = sturm_sequence(&sf);
    let b = sf.cauchy_bound() + q(1);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match count_roots_in(&seq, &lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / q(2);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort();
    out
}

/// Signs of `g` at the real roots of the squarefree polynomial `f`, in
/// increasing order of the roots. Exact: each isolating interval is refined
/// until `g` has no root in its closure.
pub fn signs_at_real_roots(f: &QPoly, g: &QPoly) -> Vec<i8> {
    let h = f.gcd(g);
    let hseq = (h.degree().unwrap_or(0) > 0).then(|| sturm_sequence(&h.squarefree_part()));
    let gseq = (g.degree().unwrap_or(0) > 0).then(|| sturm_sequence(&g.squarefree_part()));
    let fseq = sturm_sequence(&f.squarefree_part());
    isolate_real_roots(f)
        .into_iter()
        .map(|(mut lo, mut hi)| {
            if let Some(hs) = &hseq {
                if count_roots_in(hs, &lo, &hi) > 0 {
                    return 0;
                }
            }
            let Some(gs) = &gseq else { return sgn(&g.lead()) };
            while count_roots_in(gs, &lo, &hi) > 0 || g.eval(&lo).is_zero() {
                let mid = (&lo + &hi) / q(2);
                if count_roots_in(&fseq, &lo, &mid) > 0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            sgn(&g.eval(&hi))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_isolation_and_signs() {
        let f = QPoly::from_ints(&[-2, 0, 1]);
        let iv = isolate_real_roots(&f);
        assert_eq!(iv.len(), 2);
        assert!(iv[0].1 <= iv[1].0);
        // x - 1 at -sqrt2, sqrt2
        assert_eq!(signs_at_real_roots(&f, &QPoly::from_ints(&[-1, 1])), vec![-1, 1]);
        assert_eq!(signs_at_real_roots(&f, &QPoly::from_ints(&[-2, 0, 1])), vec![0, 0]);
        assert_eq!(signs_at_real_roots(&f, &QPoly::from_ints(&[3])), vec![1, 1]);
    }

    #[test]
    fn division_roundtrip() {
        let a = QPoly::from_ints(&[1, 0, -2, -1, 0, 1]);
        let b = QPoly::from_ints(&[3, 1, 2]);
        let (quo, r) = a.div_rem(&b);
        assert_eq!(&(&quo * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn xgcd_identity() {
        let f = QPoly::from_ints(&[-1, 1, 1]);
        let g = QPoly::from_ints(&[2, 0, 1]);
        let (d, s, t) = f.xgcd(&g);
        assert_eq!(d, QPoly::one());
        assert_eq!(&(&s * &f) + &(&t * &g), d);
    }

    #[test]
    fn quadratic_discriminants() {
        assert_eq!(discriminant(&QPoly::from_ints(&[1, 0, 1])), q(-4));
        assert_eq!(discriminant(&QPoly::from_ints(&[-5, 0, 1])), q(20));
        // x^3 + px + q  ->  -4p^3 - 27q^2
        assert_eq!(discriminant(&QPoly::from_ints(&[1, -1, 0, 1])), q(4 - 27));
    }

    #[test]
    fn resultant_is_product_of_evaluations() {
        // f = (x-1)(x-2), g = x + 3: Res = g(1) g(2) = 4 * 5
        let f = QPoly::from_ints(&[2, -3, 1]);
        let g = QPoly::from_ints(&[3, 1]);
        assert_eq!(resultant(&f, &g), q(20));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(count_real_roots(&QPoly::from_ints(&[1, 0, 1])), 0);
        assert_eq!(count_real_roots(&QPoly::from_ints(&[-2, 0, 1])), 2);
        assert_eq!(count_real_roots(&QPoly::from_ints(&[1, 0, -2, -1, 0, 1])), 3);
        // repeated root counted once
        assert_eq!(count_real_roots(&QPoly::from_ints(&[1, -2, 1])), 1);
    }

    #[test]
    fn root_isolation_sqrt2() {
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let (lo, hi) = smallest_root_above(&p, &q(0), 30).unwrap();
        assert!(to_f64(&lo) < 2f64.sqrt() && 2f64.sqrt() <= to_f64(&hi));
        assert!(smallest_root_above(&p, &q(2), 10).is_none());
    }
}
