//! Finite quotients: SL(2, R) and PSL(2, R) for R = Z/m or F_q, reduction
//! of number-field matrices at a prime, closures in direct products,
//! normalizers of Klein four subgroups, and pulled-back coset tables.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::fp::{self, FpPoly};
use crate::fpgroups::{GroupError, Presentation, SubgroupTable};
use crate::numfield::{FieldElement, PrimeIdeal};
use crate::traceorders::Mat2;

pub const DEFAULT_ORDER_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("a denominator is divisible by {0}")]
    DenominatorNotCoprime(u64),
    #[error("prime ideal carries no residue field polynomial")]
    NoResidueField,
    #[error("unsupported ring: {0}")]
    BadRing(String),
    #[error("group order {0} exceeds the cap {1}")]
    BudgetExceeded(u64, u64),
    #[error("reduced matrix {0} does not have determinant 1")]
    NotSpecialLinear(usize),
    #[error("relator {0} does not map to the identity")]
    RelatorViolated(usize),
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("slot {0}: A, B and AB must be non-trivial commuting involutions")]
    NotKleinFour(usize),
    #[error("expected {want} entries, got {got}")]
    WrongArity { want: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finite commutative ring given by addition and multiplication tables
/// on 0..size.
#[derive(Clone, Debug)]
pub struct Ring {
    size: u32,
    kind: RingKind,
    add: Vec<u32>,
    mul: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RingKind {
    /// Z/m.
    Integers(u32),
    /// F_p[t]/(h), elements written in base p, constant digit first.
    Field { p: u32, modulus: Vec<u32> },
}

const MAX_RING: u32 = 1024;

impl Ring {
    pub fn integers(m: u32) -> Result<Self, QuotientError> {
        if !(1..=MAX_RING).contains(&m) {
            return Err(QuotientError::BadRing(format!("Z/{m}")));
        }
        let n = m as usize;
        let add = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let mul = (0..n * n).map(|k| ((k / n) * (k % n) % n) as u32).collect();
        Ok(Ring { size: m, kind: RingKind::Integers(m), add, mul })
    }

    /// F_p[t]/(h) for a monic irreducible h, constant term first.
    pub fn residue_field(p: u64, h: &[u64]) -> Result<Self, QuotientError> {
        let h = FpPoly::new(p, h.to_vec());
        let f = h.degree().ok_or(QuotientError::NoResidueField)?;
        if f == 0 || h.lead() != 1 || !h.is_irreducible() {
            return Err(QuotientError::BadRing(format!("{h:?} is not monic irreducible mod {p}")));
        }
        if f == 1 {
            return Self::integers(p as u32);
        }
        let q = (p as u32).checked_pow(f as u32).filter(|&q| q <= MAX_RING).ok_or_else(|| QuotientError::BadRing(format!("{p}^{f} too large")))?;
        let n = q as usize;
        let decode = |x: usize| {
            let mut d = Vec::with_capacity(f);
            let mut x = x as u64;
            for _ in 0..f {
                d.push(x % p);
                x /= p;
            }
            FpPoly::new(p, d)
        };
        let encode = |a: &FpPoly| {
            let mut c = a.coeffs.clone();
            c.resize(f, 0);
            c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32
        };
        let polys: Vec<FpPoly> = (0..n).map(decode).collect();
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                add[i * n + j] = encode(&polys[i].add(&polys[j]));
                mul[i * n + j] = encode(&polys[i].mul(&polys[j]).rem(&h));
            }
        }
        let modulus = h.coeffs.iter().map(|&c| c as u32).collect();
        Ok(Ring { size: q, kind: RingKind::Field { p: p as u32, modulus }, add, mul })
    }

    /// F_q for a prime power q, using the first monic irreducible in
    /// lexicographic order.
    pub fn finite_field(q: u64) -> Result<Self, QuotientError> {
        let (p, f) = fp::prime_power(q).ok_or_else(|| QuotientError::BadRing(format!("{q} is not a prime power")))?;
        if f == 1 {
            return Self::integers(p as u32);
        }
        let f = f as usize;
        for k in 0..p.pow(f as u32) {
            let mut c: Vec<u64> = (0..f).map(|i| k / p.pow(i as u32) % p).collect();
            c.push(1);
            if FpPoly::new(p, c.clone()).is_irreducible() {
                return Self::residue_field(p, &c);
            }
        }
        unreachable!("an irreducible of every degree exists")
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.size + b) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.size + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        (0..self.size).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    fn from_int(&self, n: i64) -> u32 {
        match self.kind {
            RingKind::Integers(m) => n.rem_euclid(m as i64) as u32,
            RingKind::Field { p, .. } => n.rem_euclid(p as i64) as u32,
        }
    }
}

pub type Matrix = [u32; 4];

/// SL(2, R) or PSL(2, R) with every element enumerated.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    ring: Ring,
    projective: bool,
    elems: Vec<Matrix>,
    index: HashMap<Matrix, u32>,
    neg_one: u32,
    id: u32,
}

impl FiniteMatrixGroup {
    pub fn new(ring: Ring, projective: bool) -> Self {
        let n = ring.size;
        let one = 1 % n;
        let neg_one = ring.neg(one);
        let mut g = FiniteMatrixGroup { ring, projective, elems: Vec::new(), index: HashMap::new(), neg_one, id: 0 };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let m = [a, b, c, d];
                        if g.det(&m) == one && g.canon(m) == m {
                            g.index.insert(m, g.elems.len() as u32);
                            g.elems.push(m);
                        }
                    }
                }
            }
        }
        g.id = g.from_ints([[1, 0], [0, 1]]).expect("identity");
        g
    }

    pub fn sl(q: u64) -> Result<Self, QuotientError> {
        Ok(Self::new(Ring::finite_field(q)?, false))
    }

    pub fn psl(q: u64) -> Result<Self, QuotientError> {
        Ok(Self::new(Ring::finite_field(q)?, true))
    }

    pub fn sl_mod(m: u32) -> Result<Self, QuotientError> {
        Ok(Self::new(Ring::integers(m)?, false))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn projective(&self) -> bool {
        self.projective
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elems
    }

    pub fn matrix(&self, i: u32) -> Matrix {
        self.elems[i as usize]
    }

    fn det(&self, m: &Matrix) -> u32 {
        let r = &self.ring;
        r.add(r.mul(m[0], m[3]), r.neg(r.mul(m[1], m[2])))
    }

    fn negate(&self, m: Matrix) -> Matrix {
        m.map(|x| self.ring.mul(self.neg_one, x))
    }

    /// In the projective case, the lexicographically smaller of M and -M.
    pub fn canon(&self, m: Matrix) -> Matrix {
        if self.projective {
            m.min(self.negate(m))
        } else {
            m
        }
    }

    pub fn index_of(&self, m: Matrix) -> Option<u32> {
        self.index.get(&self.canon(m)).copied()
    }

    pub fn from_ints(&self, m: [[i64; 2]; 2]) -> Option<u32> {
        let r = &self.ring;
        self.index_of([r.from_int(m[0][0]), r.from_int(m[0][1]), r.from_int(m[1][0]), r.from_int(m[1][1])])
    }

    pub fn identity(&self) -> u32 {
        self.id
    }

    pub fn mul(&self, i: u32, j: u32) -> u32 {
        let (a, b) = (&self.elems[i as usize], &self.elems[j as usize]);
        let r = &self.ring;
        let e = |x: usize, y: usize| r.add(r.mul(a[2 * x], b[y]), r.mul(a[2 * x + 1], b[2 + y]));
        self.index[&self.canon([e(0, 0), e(0, 1), e(1, 0), e(1, 1)])]
    }

    pub fn inverse(&self, i: u32) -> u32 {
        let [a, b, c, d] = self.elems[i as usize];
        let r = &self.ring;
        self.index[&self.canon([d, r.neg(b), r.neg(c), a])]
    }

    pub fn element_order(&self, i: u32) -> usize {
        let id = self.identity();
        let mut x = i;
        let mut k = 1;
        while x != id {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order()];
        let id = self.identity();
        seen[id as usize] = true;
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order() as u32).filter(|&i| seen[i as usize]).collect()
    }

    /// The closed-form order: |SL(2,q)| = q(q^2 - 1), divided by
    /// gcd(2, q - 1) in the projective case. Only for fields.
    pub fn field_order_formula(&self) -> Option<u64> {
        let q = self.ring.size as u64;
        let is_field = match self.ring.kind {
            RingKind::Integers(m) => fp::is_prime(m as u64),
            RingKind::Field { .. } => true,
        };
        is_field.then(|| {
            let sl = q * (q * q - 1);
            if self.projective {
                sl / (q - 1).gcd(&2)
            } else {
                sl
            }
        })
    }

    /// [[a, b], [c, d], modulus, projective].
    pub fn element_json(&self, i: u32) -> serde_json::Value {
        let [a, b, c, d] = self.elems[i as usize];
        serde_json::json!([[a, b], [c, d], self.ring.size, self.projective])
    }

    /// The generators [[1,1],[0,1]] and [[1,0],[1,1]].
    pub fn standard_generators(&self) -> [u32; 2] {
        [self.from_ints([[1, 1], [0, 1]]).unwrap(), self.from_ints([[1, 0], [1, 1]]).unwrap()]
    }

    /// Some pair of distinct commuting involutions, if any.
    pub fn klein_four(&self) -> Option<(u32, u32)> {
        let id = self.identity();
        let inv: Vec<u32> = (0..self.order() as u32).filter(|&x| x != id && self.mul(x, x) == id).collect();
        for (k, &a) in inv.iter().enumerate() {
            for &b in &inv[k + 1..] {
                if self.mul(a, b) == self.mul(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

fn reduce_element(x: &FieldElement, ring: &Ring, p: u64, h: &FpPoly) -> Result<u32, QuotientError> {
    // theta maps to t in F_p[t]/(h)
    let mut c = Vec::with_capacity(x.coeffs().len());
    for q in x.coeffs() {
        let den = (q.denom() % BigInt::from(p)).to_u64().unwrap();
        if den == 0 {
            return Err(QuotientError::DenominatorNotCoprime(p));
        }
        let num = q.numer().mod_floor(&BigInt::from(p)).to_u64().unwrap();
        c.push(fp::mul_mod(num, fp::inv_mod(den, p), p));
    }
    let r = FpPoly::new(p, c).rem(h);
    let mut digits = r.coeffs;
    digits.resize(h.degree().unwrap(), 0);
    let code = digits.iter().rev().fold(0u64, |acc, &d| acc * p + d);
    debug_assert!(code < ring.size as u64);
    Ok(code as u32)
}

/// Images of matrices over a number field in SL(2) or PSL(2) over the
/// residue field of `prime`.
pub fn reduce_mod_prime(gens: &[Mat2], prime: &PrimeIdeal, projective: bool) -> Result<(FiniteMatrixGroup, Vec<u32>), QuotientError> {
    if prime.local_factor.is_empty() {
        return Err(QuotientError::NoResidueField);
    }
    let ring = Ring::residue_field(prime.p, &prime.local_factor)?;
    let group = FiniteMatrixGroup::new(ring, projective);
    let h = FpPoly::new(prime.p, prime.local_factor.clone());
    let images = gens
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let e = m.entries().map(|x| reduce_element(x, group.ring(), prime.p, &h));
            let m = [e[0].clone()?, e[1].clone()?, e[2].clone()?, e[3].clone()?];
            group.index_of(m).ok_or(QuotientError::NotSpecialLinear(k))
        })
        .collect::<Result<_, _>>()?;
    Ok((group, images))
}

/// Word image under generator images; letters are 1-based and signed.
pub fn evaluate_word(group: &FiniteMatrixGroup, images: &[u32], w: &[i32]) -> u32 {
    w.iter().fold(group.identity(), |acc, &l| {
        let g = images[l.unsigned_abs() as usize - 1];
        group.mul(acc, if l > 0 { g } else { group.inverse(g) })
    })
}

pub fn check_relators(group: &FiniteMatrixGroup, images: &[u32], pres: &Presentation) -> Result<(), QuotientError> {
    if images.len() != pres.num_gens() {
        return Err(QuotientError::WrongArity { want: pres.num_gens(), got: images.len() });
    }
    let id = group.identity();
    match pres.rels().iter().position(|r| evaluate_word(group, images, r) != id) {
        Some(i) => Err(QuotientError::RelatorViolated(i)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub order: u64,
    pub product_order: u64,
    pub onto: bool,
    pub per_factor_onto: Vec<bool>,
    /// Factors are PSL(2, p) for distinct primes p >= 5.
    pub hall_hypothesis: bool,
}

/// Closure of the subgroup of a direct product generated by tuples;
/// `gens[g][k]` is the k-th coordinate of generator g.
pub fn product_surjectivity(factors: &[FiniteMatrixGroup], gens: &[Vec<u32>], cap: u64) -> Result<SurjectivityReport, QuotientError> {
    let n = factors.len();
    for g in gens {
        if g.len() != n {
            return Err(QuotientError::WrongArity { want: n, got: g.len() });
        }
    }
    let sizes: Vec<u64> = factors.iter().map(|f| f.order() as u64).collect();
    let total = sizes.iter().try_fold(1u64, |a, &b| a.checked_mul(b)).unwrap_or(u64::MAX);
    if total > cap {
        return Err(QuotientError::BudgetExceeded(total, cap));
    }
    // right multiplication tables per factor and generator
    let tables: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|k| gens.iter().map(|g| (0..sizes[k] as u32).map(|x| factors[k].mul(x, g[k])).collect()).collect())
        .collect();
    let mut stride = vec![1u64; n];
    for k in (0..n.saturating_sub(1)).rev() {
        stride[k] = stride[k + 1] * sizes[k + 1];
    }
    let encode = |xs: &[u32]| xs.iter().zip(&stride).map(|(&x, &s)| x as u64 * s).sum::<u64>();
    let mut seen = vec![0u64; (total as usize).div_ceil(64)];
    let start: Vec<u32> = factors.iter().map(|f| f.identity()).collect();
    let s0 = encode(&start);
    seen[(s0 / 64) as usize] |= 1 << (s0 % 64);
    let mut queue = VecDeque::from([start]);
    let mut order = 1u64;
    while let Some(x) = queue.pop_front() {
        for gi in 0..gens.len() {
            let y: Vec<u32> = (0..n).map(|k| tables[k][gi][x[k] as usize]).collect();
            let c = encode(&y);
            let (w, b) = ((c / 64) as usize, c % 64);
            if seen[w] >> b & 1 == 0 {
                seen[w] |= 1 << b;
                order += 1;
                queue.push_back(y);
            }
        }
    }
    let per_factor_onto = (0..n)
        .map(|k| {
            let gk: Vec<u32> = gens.iter().map(|g| g[k]).collect();
            factors[k].closure(&gk).len() == factors[k].order()
        })
        .collect();
    let mut primes: Vec<u32> = Vec::new();
    let hall_hypothesis = factors.iter().all(|f| match f.ring.kind {
        RingKind::Integers(p) if f.projective && p >= 5 && fp::is_prime(p as u64) && !primes.contains(&p) => {
            primes.push(p);
            true
        }
        _ => false,
    });
    Ok(SurjectivityReport { order, product_order: total, onto: order == total, per_factor_onto, hall_hypothesis })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizerReport {
    pub n: usize,
    /// Order of the subgroup of tuples with a single slot from {1, A_i, B_i, A_iB_i}.
    pub witness_order: u64,
    pub normalizer_order: u64,
    pub quotient_order: u64,
    pub bound: u64,
    pub holds: bool,
}

/// N(H)/H for the diagonal Klein four group H = <(A_i), (B_i)> in a
/// direct product. The normalizer is exact: g normalizes H iff every slot
/// induces the same permutation of the three involutions.
pub fn normalizer_quotient_order(factors: &[FiniteMatrixGroup], a: &[u32], b: &[u32]) -> Result<NormalizerReport, QuotientError> {
    let n = factors.len();
    if a.len() != n || b.len() != n {
        return Err(QuotientError::WrongArity { want: n, got: a.len().min(b.len()) });
    }
    if n == 0 {
        return Err(QuotientError::WrongArity { want: 1, got: 0 });
    }
    let mut triples = Vec::with_capacity(n);
    for k in 0..n {
        let g = &factors[k];
        let id = g.identity();
        let ab = g.mul(a[k], b[k]);
        let ok = [a[k], b[k], ab].iter().all(|&x| x != id && g.mul(x, x) == id) && ab == g.mul(b[k], a[k]) && a[k] != b[k];
        if !ok {
            return Err(QuotientError::NotKleinFour(k));
        }
        triples.push([a[k], b[k], ab]);
    }
    // for each permutation of {A, B, AB}, count per slot the g with
    // gAg^-1 = s(A) and gBg^-1 = s(B); AB then follows
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut counts = vec![[0u64; 6]; n];
    for k in 0..n {
        let g = &factors[k];
        let t = triples[k];
        for x in 0..g.order() as u32 {
            let xi = g.inverse(x);
            let ca = g.mul(g.mul(x, t[0]), xi);
            let cb = g.mul(g.mul(x, t[1]), xi);
            for (s, p) in perms.iter().enumerate() {
                if ca == t[p[0]] && cb == t[p[1]] {
                    counts[k][s] += 1;
                }
            }
        }
    }
    let normalizer_order: u64 = (0..6).map(|s| counts.iter().map(|c| c[s]).product::<u64>()).sum();
    let quotient_order = normalizer_order / 4;
    let bound = 4u64.pow(n as u32 - 1);
    Ok(NormalizerReport {
        n,
        witness_order: 4u64.pow(n as u32),
        normalizer_order,
        quotient_order,
        bound,
        holds: quotient_order >= bound,
    })
}

/// Brute-force normalizer order by enumerating the product; used to
/// cross-check the slotwise count.
pub fn normalizer_order_by_enumeration(factors: &[FiniteMatrixGroup], a: &[u32], b: &[u32], cap: u64) -> Result<u64, QuotientError> {
    let n = factors.len();
    let total = factors.iter().map(|f| f.order() as u64).product::<u64>();
    if total > cap {
        return Err(QuotientError::BudgetExceeded(total, cap));
    }
    let h: Vec<Vec<u32>> = {
        let ab: Vec<u32> = (0..n).map(|k| factors[k].mul(a[k], b[k])).collect();
        vec![a.to_vec(), b.to_vec(), ab]
    };
    let mut count = 0;
    let mut x = vec![0u32; n];
    'outer: loop {
        let conj = |v: &[u32]| -> Vec<u32> { (0..n).map(|k| factors[k].mul(factors[k].mul(x[k], v[k]), factors[k].inverse(x[k]))).collect() };
        if h.contains(&conj(a)) && h.contains(&conj(b)) {
            count += 1;
        }
        for k in 0..n {
            x[k] += 1;
            if (x[k] as usize) < factors[k].order() {
                continue 'outer;
            }
            x[k] = 0;
        }
        break;
    }
    Ok(count)
}

/// Coset table of the preimage of a subgroup H under generator images in
/// a finite group. Coset 0 is the preimage itself.
pub fn pullback_cover_table(pres: &Presentation, group: &FiniteMatrixGroup, images: &[u32], subgroup: &[u32]) -> Result<SubgroupTable, QuotientError> {
    check_relators(group, images, pres)?;
    let mut in_h = vec![false; group.order()];
    for &h in subgroup {
        in_h[h as usize] = true;
    }
    if !in_h[group.identity() as usize] || subgroup.iter().any(|&x| subgroup.iter().any(|&y| !in_h[group.mul(x, y) as usize])) {
        return Err(QuotientError::NotSubgroup);
    }
    let key = |x: u32| subgroup.iter().map(|&h| group.mul(h, x)).min().unwrap();
    let mut ids: HashMap<u32, usize> = HashMap::from([(key(group.identity()), 0)]);
    let mut reps = vec![group.identity()];
    let ng = pres.num_gens();
    let mut action: Vec<Vec<usize>> = vec![Vec::new(); ng];
    let mut c = 0;
    while c < reps.len() {
        for (g, row) in action.iter_mut().enumerate() {
            let y = group.mul(reps[c], images[g]);
            let k = key(y);
            let next = ids.len();
            let id = *ids.entry(k).or_insert(next);
            if id == reps.len() {
                reps.push(y);
            }
            row.push(id);
        }
        c += 1;
    }
    Ok(SubgroupTable::new(pres.clone(), action)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;

    #[test]
    fn orders_match_formula() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let g = FiniteMatrixGroup::sl(p).unwrap();
            let gens = g.standard_generators();
            assert_eq!(g.closure(&gens).len() as u64, p * (p * p - 1));
            assert_eq!(g.order() as u64, g.field_order_formula().unwrap());
            let pg = FiniteMatrixGroup::psl(p).unwrap();
            assert_eq!(pg.order() as u64, pg.field_order_formula().unwrap());
        }
        assert_eq!(FiniteMatrixGroup::sl(4).unwrap().order(), 60);
        assert_eq!(FiniteMatrixGroup::sl(9).unwrap().order(), 720);
        assert_eq!(FiniteMatrixGroup::sl_mod(4).unwrap().order(), 48);
    }

    #[test]
    fn reduction_mod_five() {
        let k = NumberField::rationals();
        let gens = [Mat2::from_ints(&k, [[1, 1], [0, 1]]), Mat2::from_ints(&k, [[1, 0], [1, 1]]), Mat2::identity(&k)];
        let prime = PrimeIdeal { p: 5, e: 1, f: 1, local_factor: vec![0, 1] };
        let (g, im) = reduce_mod_prime(&gens, &prime, false).unwrap();
        assert_eq!(g.closure(&im[..2]).len(), 120);
        assert_eq!(im[2], g.identity());
        let half = Mat2::new(k.rational(crate::poly::qf(1, 5)), k.zero(), k.zero(), k.from_ints(&[5]));
        assert_eq!(reduce_mod_prime(&[half], &prime, false).unwrap_err(), QuotientError::DenominatorNotCoprime(5));
    }

    #[test]
    fn reduction_to_f9_is_multiplicative() {
        let k = NumberField::new(&[1, 0, 1]).unwrap();
        let i = k.generator();
        let one = k.one();
        let a = Mat2::new(one.clone(), i.clone(), k.zero(), one.clone());
        let b = Mat2::new(one.clone(), k.zero(), &i + &one, one.clone());
        let primes = k.split_prime(3).unwrap();
        assert_eq!(primes.len(), 1);
        assert_eq!(primes[0].f, 2);
        let (g, im) = reduce_mod_prime(&[a.clone(), b.clone(), a.mul(&b)], &primes[0], false).unwrap();
        assert_eq!(g.ring().size(), 9);
        assert_eq!(g.mul(im[0], im[1]), im[2]);
    }

    #[test]
    fn hall_product() {
        let g5 = FiniteMatrixGroup::psl(5).unwrap();
        let g7 = FiniteMatrixGroup::psl(7).unwrap();
        let [s5, t5] = g5.standard_generators();
        let [s7, t7] = g7.standard_generators();
        let r = product_surjectivity(&[g5.clone(), g7.clone()], &[vec![s5, t7], vec![t5, s7]], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(r.order, 10080);
        assert!(r.onto && r.hall_hypothesis);
        let d = product_surjectivity(&[g5.clone(), g5.clone()], &[vec![s5, s5], vec![t5, t5]], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(d.order, 60);
        assert!(!d.onto && !d.hall_hypothesis);
        assert_eq!(d.per_factor_onto, vec![true, true]);
        let single = product_surjectivity(&[g5.clone()], &[vec![s5], vec![t5]], DEFAULT_ORDER_CAP).unwrap();
        assert!(single.onto);
        assert!(matches!(product_surjectivity(&[g5.clone(), g7], &[vec![s5]], 100), Err(QuotientError::WrongArity { .. })));
        assert!(matches!(product_surjectivity(&[g5.clone(), g5], &[vec![s5, s5]], 100), Err(QuotientError::BudgetExceeded(3600, 100))));
    }

    #[test]
    fn normalizer_bound() {
        let g5 = FiniteMatrixGroup::psl(5).unwrap();
        let g7 = FiniteMatrixGroup::psl(7).unwrap();
        let (a5, b5) = g5.klein_four().unwrap();
        let (a7, b7) = g7.klein_four().unwrap();
        let fs = [g5.clone(), g7.clone()];
        let r = normalizer_quotient_order(&fs, &[a5, a7], &[b5, b7]).unwrap();
        assert_eq!(r.witness_order, 16);
        assert!(r.holds && r.quotient_order >= 4);
        assert_eq!(r.normalizer_order, normalizer_order_by_enumeration(&fs, &[a5, a7], &[b5, b7], DEFAULT_ORDER_CAP).unwrap());
        let one = normalizer_quotient_order(&fs[..1], &[a5], &[b5]).unwrap();
        assert_eq!(one.bound, 1);
        assert!(one.holds);
        let id = g5.identity();
        assert_eq!(normalizer_quotient_order(&fs, &[id, a7], &[b5, b7]), Err(QuotientError::NotKleinFour(0)));
    }

    #[test]
    fn pullback_tables() {
        let g5 = FiniteMatrixGroup::psl(5).unwrap();
        let [s, t] = g5.standard_generators();
        let free = Presentation::free(2);
        let (a, b) = g5.klein_four().unwrap();
        let v4 = g5.closure(&[a, b]);
        assert_eq!(v4.len(), 4);
        let table = pullback_cover_table(&free, &g5, &[s, t], &v4).unwrap();
        assert_eq!(table.index(), 15);
        let whole: Vec<u32> = (0..60).collect();
        assert_eq!(pullback_cover_table(&free, &g5, &[s, t], &whole).unwrap().index(), 1);
        let rel = Presentation::from_words(2, vec![vec![1, 1, 1, 1, 1]]).unwrap();
        assert!(pullback_cover_table(&rel, &g5, &[s, t], &v4).is_ok());
        let bad = Presentation::from_words(2, vec![vec![1, 1]]).unwrap();
        assert_eq!(pullback_cover_table(&bad, &g5, &[s, t], &v4).unwrap_err(), QuotientError::RelatorViolated(0));
        assert_eq!(pullback_cover_table(&free, &g5, &[s, t], &[a]).unwrap_err(), QuotientError::NotSubgroup);
    }
}
