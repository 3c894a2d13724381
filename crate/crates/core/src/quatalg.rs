//! Quaternion algebras given by Hilbert symbols, local ramification, and
//! the dihedral symbol `(-1, tau_n)` with `tau_n = 4cos^2(2pi/n) - 4`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{factorize, prime_power};
use crate::numfield::{
    local_quadratic_subextension, FieldElement, LocalQuadratic, NumFieldError, NumberField, PrimeIdeal,
};
use crate::poly::{self, QPoly, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatError {
    #[error("Hilbert symbol entries must be nonzero")]
    ZeroEntry,
    #[error("dihedral parameter must be at least 3, got {0}")]
    SmallDihedral(u64),
    #[error("minimal polynomial of 2cos(2pi/{0}) failed the numerical root check")]
    RootCheck(u64),
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalStatus {
    Ramified,
    Split,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

/// p-adic valuation of a nonzero integer.
fn val(n: &BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    v
}

/// `p^(v mod 2) * u mod p^k` where `x = p^v u` with u a p-adic unit.
fn local_coefficient(x: &Q, p: u64, k: u32) -> u64 {
    let m = p.pow(k);
    let (vn, vd) = (val(x.numer(), p), val(x.denom(), p));
    let pb = BigInt::from(p);
    let un = x.numer() / pb.pow(vn);
    let ud = x.denom() / pb.pow(vd);
    let mb = BigInt::from(m);
    let un = un.mod_floor(&mb).to_u64().unwrap();
    let ud = ud.mod_floor(&mb).to_u64().unwrap();
    let ud_inv = inv_mod_composite(ud, m);
    let u = ((un as u128 * ud_inv as u128) % m as u128) as u64;
    let v = (vn as i64 - vd as i64).rem_euclid(2);
    if v == 1 {
        ((u as u128 * p as u128) % m as u128) as u64
    } else {
        u
    }
}

fn inv_mod_composite(a: u64, m: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(m));
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

/// Decides isotropy of `z^2 = a x^2 + b y^2` over Q_p by searching for a
/// primitive solution modulo p^3 (odd p) or 2^5. Works for every prime,
/// including those not dividing 2ab.
pub fn hilbert_search(a: &Q, b: &Q, p: u64) -> LocalStatus {
    assert!(!a.is_zero() && !b.is_zero());
    let k = if p == 2 { 5 } else { 3 };
    let m = p.pow(k);
    let ca = local_coefficient(a, p, k) as u128;
    let cb = local_coefficient(b, p, k) as u128;
    let mu = m as u128;
    let square = |c: u128| is_square_mod_prime_power(c as u64, p, k);
    // a primitive solution has x or y a unit: normalize that one to 1
    for y in 0..mu {
        if square((ca + cb * y % mu * y) % mu) {
            return LocalStatus::Split;
        }
    }
    for x in (0..mu).step_by(p as usize) {
        if square((ca * x % mu * x + cb) % mu) {
            return LocalStatus::Split;
        }
    }
    LocalStatus::Ramified
}

/// Whether c is a square modulo p^k.
fn is_square_mod_prime_power(c: u64, p: u64, k: u32) -> bool {
    let m = p.pow(k);
    let mut c = c % m;
    if c == 0 {
        return true;
    }
    let mut r = k;
    while c % p == 0 {
        c /= p;
        r -= 1;
    }
    if (k - r) % 2 == 1 {
        return false;
    }
    // c is now a unit modulo p^r
    if p == 2 {
        match r {
            1 => true,
            2 => c % 4 == 1,
            _ => c % 8 == 1,
        }
    } else {
        crate::fp::pow_mod(c % p, (p - 1) / 2, p) == 1
    }
}

/// Local Hilbert symbol of rational entries at a place of Q.
pub fn hilbert_symbol_qp(a: &Q, b: &Q, place: Place) -> LocalStatus {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol entries must be nonzero");
    match place {
        Place::Infinite => {
            if a.is_negative() && b.is_negative() {
                LocalStatus::Ramified
            } else {
                LocalStatus::Split
            }
        }
        Place::Finite(p) => {
            let divides = |x: &Q| {
                let pb = BigInt::from(p);
                (x.numer() % &pb).is_zero() || (x.denom() % &pb).is_zero()
            };
            if p != 2 && !divides(a) && !divides(b) {
                return LocalStatus::Split;
            }
            hilbert_search(a, b, p)
        }
    }
}

/// Status of `(a, b / Q_p)` after base change to the completion at `prime`:
/// a local field of even degree over Q_p splits every quaternion algebra
/// over Q_p.
pub fn base_change_status(a: &Q, b: &Q, prime: &PrimeIdeal) -> LocalStatus {
    match hilbert_symbol_qp(a, b, Place::Finite(prime.p)) {
        LocalStatus::Ramified if prime.local_degree() % 2 == 1 => LocalStatus::Ramified,
        _ => LocalStatus::Split,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePlace {
    pub p: u64,
    /// `None` when the splitting of p could not be read off the defining
    /// polynomial.
    pub e: Option<usize>,
    pub f: Option<usize>,
    pub status: LocalStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationReport {
    pub real: usize,
    pub finite: Vec<FinitePlace>,
    /// The total number of ramified places is even, or can still be made
    /// even by the undecided places.
    pub parity_ok: bool,
}

impl RamificationReport {
    pub fn ramified_finite(&self) -> Vec<&FinitePlace> {
        self.finite.iter().filter(|f| f.status == LocalStatus::Ramified).collect()
    }
}

#[derive(Clone, Debug)]
pub struct QuaternionAlgebra {
    pub base_field: NumberField,
    pub a: FieldElement,
    pub b: FieldElement,
}

impl QuaternionAlgebra {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroEntry);
        }
        Ok(QuaternionAlgebra { base_field: a.field().clone(), a, b })
    }

    pub fn over_q(a: Q, b: Q) -> Result<Self, QuatError> {
        let k = NumberField::rationals();
        Self::new(k.rational(a), k.rational(b))
    }

    /// Real places at which both entries are negative.
    pub fn real_ramification(&self) -> usize {
        let sa = self.a.real_signs();
        let sb = self.b.real_signs();
        sa.iter().zip(&sb).filter(|(x, y)| **x < 0 && **y < 0).count()
    }

    /// Rational primes at which the algebra may ramify: 2 and the primes
    /// dividing the norms of the entries.
    pub fn candidate_primes(&self) -> Vec<u64> {
        let mut ps = vec![2u64];
        for x in [&self.a, &self.b] {
            let n = x.norm();
            for part in [n.numer().abs(), n.denom().clone()] {
                let v = part.to_u64().expect("entry norms must fit in 64 bits");
                ps.extend(factorize(v).into_iter().map(|(p, _)| p));
            }
        }
        ps.sort();
        ps.dedup();
        ps
    }

    pub fn ramification_report(&self) -> RamificationReport {
        let real = self.real_ramification();
        let rational = self.a.as_rational().zip(self.b.as_rational());
        let mut finite = Vec::new();
        for p in self.candidate_primes() {
            match self.base_field.split_prime(p) {
                Ok(primes) => {
                    for pr in primes {
                        let status = match &rational {
                            Some((a, b)) => base_change_status(a, b, &pr),
                            None => LocalStatus::Undecided,
                        };
                        finite.push(FinitePlace { p, e: Some(pr.e), f: Some(pr.f), status });
                    }
                }
                Err(_) => {
                    // the Q_p symbol alone decides the case where it splits
                    let status = match &rational {
                        Some((a, b)) if hilbert_symbol_qp(a, b, Place::Finite(p)) == LocalStatus::Split => {
                            LocalStatus::Split
                        }
                        _ => LocalStatus::Undecided,
                    };
                    finite.push(FinitePlace { p, e: None, f: None, status });
                }
            }
        }
        let ramified = real + finite.iter().filter(|f| f.status == LocalStatus::Ramified).count();
        let undecided = finite.iter().any(|f| f.status == LocalStatus::Undecided);
        RamificationReport { real, finite, parity_ok: undecided || ramified % 2 == 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClozelStatus {
    Satisfied,
    Violated { witness: PrimeIdeal },
    Undecided,
}

/// No completion at a finitely ramified prime contains a quadratic
/// extension of Q_p.
pub fn clozel_hypothesis(_field: &NumberField, finite_ramification: &[PrimeIdeal]) -> ClozelStatus {
    let mut undecided = false;
    for pr in finite_ramification {
        match local_quadratic_subextension(pr) {
            LocalQuadratic::Contains => return ClozelStatus::Violated { witness: pr.clone() },
            LocalQuadratic::Undecided => undecided = true,
            LocalQuadratic::DoesNotContain => {}
        }
    }
    if undecided {
        ClozelStatus::Undecided
    } else {
        ClozelStatus::Satisfied
    }
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> QPoly {
    let mut c = vec![Q::zero(); n as usize + 1];
    c[0] = -Q::one();
    c[n as usize] = Q::one();
    let mut f = QPoly::new(c);
    for d in 1..n {
        if n % d == 0 {
            let (quo, r) = f.div_rem(&cyclotomic(d));
            debug_assert!(r.is_zero());
            f = quo;
        }
    }
    f
}

/// Minimal polynomial of 2cos(2pi/n): writes the palindromic cyclotomic
/// polynomial as x^m Psi(x + 1/x) using x^k + x^-k = C_k(x + 1/x) with
/// C_0 = 2, C_1 = y, C_{k+1} = y C_k - C_{k-1}.
pub fn two_cos_min_poly(n: u64) -> QPoly {
    assert!(n >= 3);
    let phi = cyclotomic(n);
    let m = phi.degree().unwrap() / 2;
    let y = QPoly::x();
    let mut cheb = vec![QPoly::constant(Q::from_integer(2.into())), y.clone()];
    for k in 2..=m {
        let next = &(&y * &cheb[k - 1]) - &cheb[k - 2];
        cheb.push(next);
    }
    let mut psi = QPoly::constant(phi.coeff(m));
    for k in 1..=m {
        psi = &psi + &cheb[k].scale(&phi.coeff(m + k));
    }
    psi
}

/// Confirms that `psi` has a root within 2^-60 of 2cos(2pi/n).
fn root_check(psi: &QPoly, n: u64) -> bool {
    let c = 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
    let eps = Q::new(BigInt::one(), BigInt::one() << 30);
    let approx = Q::from_float(c).unwrap();
    let lo = &approx - &eps;
    let seq = poly::sturm_sequence(psi);
    if poly::count_roots_in(&seq, &lo, &(&approx + &eps)) != 1 {
        return false;
    }
    let Some((rlo, rhi)) = poly::smallest_root_above(psi, &lo, 60) else { return false };
    let r = (poly::to_f64(&rlo) + poly::to_f64(&rhi)) / 2.0;
    (r - c).abs() < 1e-9 && &rhi - &rlo <= Q::new(BigInt::one(), BigInt::one() << 60)
}

#[derive(Clone, Debug)]
pub struct TauN {
    pub n: u64,
    /// Q(cos 2pi/n), presented by the minimal polynomial of 2cos(2pi/n).
    pub field: NumberField,
    pub tau: FieldElement,
}

/// `tau_n = 4cos^2(2pi/n) - 4 = y^2 - 4` with y = 2cos(2pi/n).
pub fn tau_n(n: u64) -> Result<TauN, QuatError> {
    if n < 3 {
        return Err(QuatError::SmallDihedral(n));
    }
    let psi = two_cos_min_poly(n);
    if !root_check(&psi, n) {
        return Err(QuatError::RootCheck(n));
    }
    let coeffs: Vec<BigInt> = psi.to_bigints().expect("cyclotomic data is integral");
    let field = NumberField::from_bigints(coeffs)?;
    let y = field.generator();
    let tau = &(&y * &y) - &field.from_ints(&[4]);
    Ok(TauN { n, field, tau })
}

/// Norm of tau_n from Q(cos 2pi/n) to Q, as Res(Psi_n, y^2 - 4).
pub fn tau_n_norm(n: u64) -> Result<Q, QuatError> {
    if n < 3 {
        return Err(QuatError::SmallDihedral(n));
    }
    let psi = two_cos_min_poly(n);
    Ok(poly::resultant(&psi, &QPoly::from_ints(&[-4, 0, 1])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum DihedralCase {
    /// n is not a prime power.
    NotPrimePower,
    /// n = p^t, n != 4.
    PrimePower { p: u64, t: u32 },
    /// n = 4: only dyadic places can ramify.
    Dyadic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralReport {
    pub n: u64,
    pub field_degree: usize,
    pub two_cos_min_poly: Vec<String>,
    /// tau_n in the power basis of 2cos(2pi/n); it generates d(O).
    pub tau: Vec<String>,
    pub norm: String,
    pub tau_is_unit: bool,
    pub case: DihedralCase,
    /// Rational primes under which a finite ramified place may lie.
    pub candidate_primes: Vec<u64>,
    /// |norm| predicted from n: p if n is a power of p, else 1. Only for
    /// n odd, or n even and n > 4.
    pub prime_power_prediction: Option<u64>,
    pub prime_power_consistent: Option<bool>,
    pub ram_f_empty: bool,
}

pub fn dihedral_ramification_analysis(n: u64) -> Result<DihedralReport, QuatError> {
    let t = tau_n(n)?;
    let norm = tau_n_norm(n)?;
    let abs = norm.abs();
    debug_assert!(abs.is_integer());
    let abs_u = abs.to_integer().to_u64().expect("norm of tau_n fits in 64 bits");
    let tau_is_unit = abs_u == 1;
    let pp = prime_power(n);
    let case = match pp {
        _ if n == 4 => DihedralCase::Dyadic,
        Some((p, t)) => DihedralCase::PrimePower { p, t },
        None => DihedralCase::NotPrimePower,
    };
    let candidate_primes: Vec<u64> = factorize(abs_u).into_iter().map(|(p, _)| p).collect();
    let prediction_applies = n % 2 == 1 || n > 4;
    let prime_power_prediction = prediction_applies.then(|| pp.map_or(1, |(p, _)| p));
    let prime_power_consistent = prime_power_prediction.map(|v| v == abs_u);
    let s = |c: &Q| c.to_string();
    Ok(DihedralReport {
        n,
        field_degree: t.field.degree(),
        two_cos_min_poly: t.field.min_poly().iter().map(|c| c.to_string()).collect(),
        tau: t.tau.coeffs().iter().map(s).collect(),
        norm: s(&norm),
        tau_is_unit,
        case,
        candidate_primes,
        prime_power_prediction,
        prime_power_consistent,
        ram_f_empty: tau_is_unit,
    })
}
