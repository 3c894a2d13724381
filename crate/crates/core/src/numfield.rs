//! Number fields `Q[x]/(f)` given by a monic integer polynomial.
//!
//! Only the defining polynomial is stored. Prime splitting is read off the
//! factorization of `f` mod p whenever p does not divide the index of
//! `Z[theta]`, which is certified by the discriminant or by Dedekind's
//! criterion.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{is_prime, primes_up_to, FpPoly};
use crate::poly::{self, QPoly, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumFieldError {
    #[error("defining polynomial must have degree at least 1")]
    ZeroDegree,
    #[error("defining polynomial must be monic")]
    NotMonic,
    #[error("defining polynomial has a repeated root")]
    NotSquarefree,
    #[error("defining polynomial is reducible: it has the rational root {root}")]
    ReduciblePolynomial { root: BigInt },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{p} may divide the index of Z[theta]; splitting data must be supplied manually")]
    NonMonogenicPrime { p: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreducibility {
    /// Proven: no rational root in degree <= 3, or the factor-degree
    /// patterns mod small primes leave no room for a proper factor.
    Certified,
    Unverified,
}

struct FieldData {
    min_poly: Vec<BigInt>,
    qpoly: QPoly,
    signature: (usize, usize),
    irreducibility: Irreducibility,
}

/// A number field; cheap to clone and safe to share between threads.
#[derive(Clone)]
pub struct NumberField(Arc<FieldData>);

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({:?})", self.0.min_poly)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.min_poly == o.0.min_poly
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Builds the field from integer coefficients, constant term first.
    pub fn new(coeffs: &[i64]) -> Result<Self, NumFieldError> {
        Self::from_bigints(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_bigints(mut coeffs: Vec<BigInt>) -> Result<Self, NumFieldError> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(NumFieldError::ZeroDegree);
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(NumFieldError::NotMonic);
        }
        let qpoly = QPoly::from_bigints(&coeffs);
        if !qpoly.is_squarefree() {
            return Err(NumFieldError::NotSquarefree);
        }
        if let Some(root) = rational_root(&coeffs) {
            if coeffs.len() > 2 {
                return Err(NumFieldError::ReduciblePolynomial { root });
            }
        }
        let d = coeffs.len() - 1;
        let irreducibility = if d <= 3 || degree_patterns_certify(&coeffs) {
            Irreducibility::Certified
        } else {
            Irreducibility::Unverified
        };
        let r1 = poly::count_real_roots(&qpoly);
        let signature = (r1, (d - r1) / 2);
        Ok(NumberField(Arc::new(FieldData { min_poly: coeffs, qpoly, signature, irreducibility })))
    }

    pub fn rationals() -> Self {
        Self::new(&[0, 1]).expect("x is a valid defining polynomial")
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.0.min_poly
    }

    pub fn qpoly(&self) -> &QPoly {
        &self.0.qpoly
    }

    pub fn degree(&self) -> usize {
        self.0.min_poly.len() - 1
    }

    pub fn signature(&self) -> (usize, usize) {
        self.0.signature
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.0.irreducibility
    }

    pub fn poly_discriminant(&self) -> BigInt {
        poly_discriminant(&self.0.min_poly)
    }

    /// Primes of the field above `p`, via the factorization of the
    /// defining polynomial mod p.
    pub fn split_prime(&self, p: u64) -> Result<Vec<PrimeIdeal>, NumFieldError> {
        if !is_prime(p) {
            return Err(NumFieldError::NotPrime(p));
        }
        let f = self.reduce_mod(p);
        let factors = f.factor();
        let disc = self.poly_discriminant();
        let p2 = BigInt::from(p * p);
        if (&disc % &p2).is_zero() && !dedekind_ok(&self.0.min_poly, p, &factors) {
            return Err(NumFieldError::NonMonogenicPrime { p });
        }
        Ok(factors
            .into_iter()
            .map(|(g, e)| PrimeIdeal { p, e, f: g.degree().unwrap(), local_factor: g.coeffs })
            .collect())
    }

    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        FpPoly::new(p, self.0.min_poly.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
    }

    pub fn element(&self, coeffs: Vec<Q>) -> FieldElement {
        FieldElement::new(self.clone(), coeffs)
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> FieldElement {
        self.element(coeffs.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    pub fn rational(&self, c: Q) -> FieldElement {
        self.element(vec![c])
    }

    pub fn zero(&self) -> FieldElement {
        self.element(vec![])
    }

    pub fn one(&self) -> FieldElement {
        self.rational(Q::one())
    }

    /// The class of x.
    pub fn generator(&self) -> FieldElement {
        self.element(vec![Q::zero(), Q::one()])
    }
}

/// Discriminant of an integer polynomial.
pub fn poly_discriminant(coeffs: &[BigInt]) -> BigInt {
    let d = poly::discriminant(&QPoly::from_bigints(coeffs));
    debug_assert!(d.is_integer());
    d.to_integer()
}

/// An integer root of a monic integer polynomial, if any.
fn rational_root(coeffs: &[BigInt]) -> Option<BigInt> {
    let a0 = coeffs[0].abs();
    if a0.is_zero() {
        return Some(BigInt::zero());
    }
    let qp = QPoly::from_bigints(coeffs);
    let bound = qp.cauchy_bound().ceil().to_integer();
    let test = |r: &BigInt| qp.eval(&Q::from_integer(r.clone())).is_zero();
    let mut d = BigInt::one();
    while &d * &d <= a0 {
        if (&a0 % &d).is_zero() {
            for c in [d.clone(), &a0 / &d] {
                if c <= bound {
                    for r in [c.clone(), -c] {
                        if test(&r) {
                            return Some(r);
                        }
                    }
                }
            }
        }
        if d > bound {
            break;
        }
        d += 1;
    }
    None
}

/// Intersects, over primes p <= 100 not dividing the discriminant, the sets
/// of degrees a rational factor could have; true if only 0 and d remain.
fn degree_patterns_certify(coeffs: &[BigInt]) -> bool {
    let d = coeffs.len() - 1;
    let disc = poly_discriminant(coeffs);
    let mut possible = vec![true; d + 1];
    for p in primes_up_to(100) {
        if (&disc % BigInt::from(p)).is_zero() {
            continue;
        }
        let pb = BigInt::from(p);
        let f = FpPoly::new(p, coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect());
        let mut sums = vec![false; d + 1];
        sums[0] = true;
        for k in f.factor_degrees() {
            for s in (k..=d).rev() {
                if sums[s - k] {
                    sums[s] = true;
                }
            }
        }
        for s in 0..=d {
            possible[s] &= sums[s];
        }
        if (1..d).all(|s| !possible[s]) {
            return true;
        }
    }
    false
}

/// Dedekind's criterion: p does not divide the index of Z[theta] iff
/// gcd(F, g, h) = 1 mod p, where g = product of the distinct irreducible
/// factors, h = f / g mod p, and F = (g h - f) / p over Z.
fn dedekind_ok(f: &[BigInt], p: u64, factors: &[(FpPoly, usize)]) -> bool {
    let mut g = FpPoly::one(p);
    for (gi, _) in factors {
        g = g.mul(gi);
    }
    let fbar = FpPoly::new(p, {
        let pb = BigInt::from(p);
        f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect()
    });
    let h = fbar.div_rem(&g).0;
    let lift = |u: &FpPoly| QPoly::from_bigints(&u.coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
    let diff = &(&lift(&g) * &lift(&h)) - &QPoly::from_bigints(f);
    let pb = BigInt::from(p);
    let big_f: Vec<u64> = diff
        .coeffs()
        .iter()
        .map(|c| {
            let c = c.to_integer();
            debug_assert!((&c % &pb).is_zero());
            (c / &pb).mod_floor(&pb).to_u64().unwrap()
        })
        .collect();
    let big_f = FpPoly::new(p, big_f);
    big_f.gcd(&g).gcd(&h).is_one()
}

/// A prime of the field above the rational prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: usize,
    pub f: usize,
    /// Monic irreducible factor of the defining polynomial mod p,
    /// constant term first.
    pub local_factor: Vec<u64>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f as u32)
    }

    pub fn local_degree(&self) -> usize {
        self.e * self.f
    }

    /// A prime of Q(theta) described only by its numerical data.
    pub fn synthetic(p: u64, e: usize, f: usize) -> Self {
        PrimeIdeal { p, e, f, local_factor: vec![] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalQuadratic {
    Contains,
    DoesNotContain,
    Undecided,
}

/// Whether the completion at the prime contains a quadratic extension of Q_p.
pub fn local_quadratic_subextension(prime: &PrimeIdeal) -> LocalQuadratic {
    if prime.f % 2 == 0 || (prime.e % 2 == 0 && prime.p != 2) {
        LocalQuadratic::Contains
    } else if (prime.e * prime.f) % 2 == 1 {
        LocalQuadratic::DoesNotContain
    } else {
        LocalQuadratic::Undecided
    }
}

/// An element of a number field in the power basis.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: NumberField,
    coeffs: Vec<Q>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl FieldElement {
    pub fn new(field: NumberField, coeffs: Vec<Q>) -> Self {
        let p = QPoly::new(coeffs).rem(field.qpoly());
        let d = field.degree();
        let mut c = p.coeffs().to_vec();
        c.resize(d, Q::zero());
        FieldElement { field, coeffs: c }
    }

    fn from_poly(field: &NumberField, p: &QPoly) -> Self {
        Self::new(field.clone(), p.coeffs().to_vec())
    }

    fn as_poly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_one())
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs.iter().skip(1).all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    pub fn scale(&self, c: &Q) -> Self {
        FieldElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = self.as_poly().xgcd(self.field.qpoly());
        debug_assert_eq!(g, QPoly::one());
        Some(Self::from_poly(&self.field, &s))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = self.field.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by this element in the power basis
    /// (column j is the image of x^j).
    pub fn mult_matrix(&self) -> Vec<Vec<Q>> {
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut basis = self.field.one();
        let x = self.field.generator();
        for _ in 0..d {
            cols.push((&basis * self).coeffs);
            basis = &basis * &x;
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Characteristic polynomial of the multiplication map, monic.
    pub fn charpoly(&self) -> QPoly {
        charpoly(&self.mult_matrix())
    }

    pub fn norm(&self) -> Q {
        let cp = self.charpoly();
        let d = self.field.degree();
        let c0 = cp.coeff(0);
        if d % 2 == 0 {
            c0
        } else {
            -c0
        }
    }

    pub fn trace(&self) -> Q {
        -self.charpoly().coeff(self.field.degree() - 1)
    }

    /// Algebraic integer test: the characteristic polynomial is integral.
    pub fn is_integral(&self) -> bool {
        self.charpoly().is_integral()
    }

    /// Value under the real embedding sending x to `root`.
    pub fn eval_f64(&self, root: f64) -> f64 {
        self.as_poly().eval_f64(root)
    }

    /// Exact signs at the real places, ordered by the real roots.
    pub fn real_signs(&self) -> Vec<i8> {
        poly::signs_at_real_roots(self.field.qpoly(), &self.as_poly())
    }
}

/// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier.
pub fn charpoly(a: &[Vec<Q>]) -> QPoly {
    let n = a.len();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m: Vec<Vec<Q>> = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if a[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    next[i][j] += &a[i][l] * &m[l][j];
                }
            }
            next[i][i] += &c[n - k + 1];
        }
        m = next;
        let mut tr = Q::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        c[n - k] = -tr / Q::from_integer(BigInt::from(k));
    }
    QPoly::new(c)
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.field, o.field);
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.field, o.field);
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.field, o.field);
        FieldElement::from_poly(&self.field, &(&self.as_poly() * &o.as_poly()))
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}
