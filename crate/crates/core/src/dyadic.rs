//! Certified dyadic enclosures of logarithms and square roots.
//!
//! An [`Enclosure`] is a closed rational interval known to contain a real
//! number. All endpoints are dyadic rationals, so arithmetic stays exact and
//! comparisons against rational thresholds either decide or say so.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::Q;

pub const DEFAULT_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    True,
    False,
    Undecided,
}

impl Decision {
    pub fn is_true(self) -> bool {
        self == Decision::True
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Q,
    pub hi: Q,
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", crate::poly::to_f64(&self.lo), crate::poly::to_f64(&self.hi))
    }
}

impl Enclosure {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    pub fn exact(x: Q) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn int(n: i64) -> Self {
        Self::exact(Q::from_integer(n.into()))
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        (crate::poly::to_f64(&self.lo) + crate::poly::to_f64(&self.hi)) / 2.0
    }

    pub fn scale(&self, c: &Q) -> Self {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: a, hi: b }
        }
    }

    pub fn square(&self) -> Self {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if !self.lo.is_negative() {
            Enclosure { lo: a, hi: b }
        } else if !self.hi.is_positive() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: Q::zero(), hi: a.max(b) }
        }
    }

    /// Sign of the enclosed value relative to zero: `True` if certainly
    /// positive, `False` if certainly non-positive.
    pub fn is_positive(&self) -> Decision {
        if self.lo.is_positive() {
            Decision::True
        } else if !self.hi.is_positive() {
            Decision::False
        } else {
            Decision::Undecided
        }
    }

    /// Decides `value >= t`.
    pub fn ge(&self, t: &Q) -> Decision {
        if &self.lo >= t {
            Decision::True
        } else if &self.hi < t {
            Decision::False
        } else {
            Decision::Undecided
        }
    }

    /// Decides `value <= t`.
    pub fn le(&self, t: &Q) -> Decision {
        if &self.hi <= t {
            Decision::True
        } else if &self.lo > t {
            Decision::False
        } else {
            Decision::Undecided
        }
    }

    /// The ceiling, if both endpoints agree on it.
    pub fn ceil(&self) -> Option<BigInt> {
        let a = self.lo.ceil().to_integer();
        let b = self.hi.ceil().to_integer();
        (a == b).then_some(a)
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, o: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, o: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure { lo: -&self.hi, hi: -&self.lo }
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, o: &Enclosure) -> Enclosure {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// floor(log2 x) for rational x > 0.
fn floor_log2(x: &Q) -> i64 {
    let n = x.numer().bits() as i64;
    let d = x.denom().bits() as i64;
    // 2^(n-1) <= num < 2^n, same for den, so log2 x in (n-1-d, n-d+1)
    let mut k = n - d;
    let two = Q::from_integer(2.into());
    let pk = |k: i64| {
        if k >= 0 {
            Q::from_integer(pow2(k as u32))
        } else {
            Q::new(BigInt::one(), pow2((-k) as u32))
        }
    };
    while pk(k) > *x {
        k -= 1;
    }
    while &pk(k) * &two <= *x {
        k += 1;
    }
    k
}

/// Encloses log2(x) for rational x > 0 in an interval of width 2^-bits.
pub fn log2_enclosure(x: &Q, bits: u32) -> Enclosure {
    assert!(x.is_positive(), "log2 of a non-positive number");
    let k = floor_log2(x);
    let w = bits + 64;
    // y = x / 2^k in [1, 2), scaled by 2^w
    let (num, den) = if k >= 0 {
        (x.numer() << w, x.denom() << (k as u32))
    } else {
        (x.numer() << (w + (-k) as u32), x.denom().clone())
    };
    let (q, r) = num.div_rem(&den);
    let mut lo = q.clone();
    let mut hi = if r.is_zero() { q } else { q + 1 };
    let one = pow2(w);
    let two = pow2(w + 1);
    let mut bits_lo = BigInt::zero();
    let mut bits_hi = BigInt::zero();
    for _ in 0..bits {
        lo = (&lo * &lo) >> w;
        let hsq = &hi * &hi;
        hi = ceil_shift(&hsq, w);
        bits_lo <<= 1;
        bits_hi <<= 1;
        if lo >= two {
            lo >>= 1;
            bits_lo += 1;
        }
        if hi >= two {
            hi = ceil_shift(&hi, 1);
            bits_hi += 1;
        }
        debug_assert!(lo >= one);
    }
    let denom = pow2(bits);
    let kq = Q::from_integer(k.into());
    let exact = hi == one && lo == one;
    let hi_num = if exact { bits_hi } else { bits_hi + 1 };
    Enclosure {
        lo: &kq + Q::new(bits_lo, denom.clone()),
        hi: &kq + Q::new(hi_num, denom),
    }
}

fn ceil_shift(x: &BigInt, s: u32) -> BigInt {
    let q = x >> s;
    if (&q << s) == *x {
        q
    } else {
        q + 1
    }
}

pub fn log2_int(n: u64) -> Enclosure {
    log2_enclosure(&Q::from_integer(n.into()), DEFAULT_BITS)
}

/// Encloses sqrt(x) for rational x >= 0 with dyadic endpoints.
pub fn sqrt_enclosure(x: &Q, bits: u32) -> Enclosure {
    assert!(!x.is_negative());
    // sqrt(n/d) = sqrt(n*d)/d
    let nd: BigInt = x.numer() * x.denom();
    let scale = pow2(2 * bits);
    let s = (&nd * &scale).sqrt();
    let exact = &s * &s == &nd * &scale;
    let den = x.denom() * pow2(bits);
    let lo = Q::new(s.clone(), den.clone());
    let hi = if exact { lo.clone() } else { Q::new(s + 1, den) };
    Enclosure { lo, hi }
}

/// Rational number as a decimal string truncated to `digits` places.
pub fn to_decimal(x: &Q, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let v = (a.numer() * &scale) / a.denom();
    let (ip, fp) = v.div_rem(&scale);
    let sign = if neg && (ip.sign() != Sign::NoSign || !fp.is_zero()) { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{ip}");
    }
    format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qf};

    fn contains_f64(e: &Enclosure, v: f64) -> bool {
        crate::poly::to_f64(&e.lo) <= v + 1e-12 && crate::poly::to_f64(&e.hi) >= v - 1e-12
    }

    #[test]
    fn exact_powers_of_two() {
        let e = log2_enclosure(&q(8), 64);
        assert_eq!(e.lo, q(3));
        assert_eq!(e.hi, q(3));
        let e = log2_enclosure(&qf(1, 4), 64);
        assert_eq!(e.lo, q(-2));
    }

    #[test]
    fn encloses_float_logs() {
        for &(n, d) in &[(80i64, 1i64), (52, 3), (3, 1), (1, 3), (1000001, 7), (5, 4)] {
            let e = log2_enclosure(&qf(n, d), 64);
            assert!(contains_f64(&e, (n as f64 / d as f64).log2()), "{n}/{d}");
            assert!(e.width() <= qf(1, 1 << 62));
        }
    }

    #[test]
    fn log_enclosure_is_certified_by_powers() {
        // 2^lo <= x <= 2^hi checked exactly at low precision
        for n in 2..200i64 {
            let e = log2_enclosure(&q(n), 8);
            let lo = &e.lo * q(256);
            let hi = &e.hi * q(256);
            let x256 = BigInt::from(n).pow(256);
            let lo_i = lo.to_integer();
            let hi_i = hi.to_integer();
            let p = |k: &BigInt| -> BigInt {
                let k: u32 = k.try_into().unwrap();
                pow2(k)
            };
            assert!(p(&lo_i) <= x256, "n={n}");
            assert!(p(&hi_i) >= x256, "n={n}");
        }
    }

    #[test]
    fn sqrt_bounds() {
        let e = sqrt_enclosure(&q(2), 40);
        assert!(&e.lo * &e.lo <= q(2));
        assert!(&e.hi * &e.hi >= q(2));
        let e = sqrt_enclosure(&qf(9, 4), 10);
        assert_eq!(e.lo, qf(3, 2));
        assert_eq!(e.hi, qf(3, 2));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(to_decimal(&qf(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal(&qf(5, 2), 1), "2.5");
    }
}
