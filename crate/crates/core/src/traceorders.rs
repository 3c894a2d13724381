//! 2x2 matrices over a number field, the trace identities for SL(2), the
//! order `R[1, a, b, ab]` generated by two matrices, and Jorgensen
//! involutions `ab - ba`.

use std::fmt;

use thiserror::Error;

use crate::numfield::{FieldElement, NumberField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("matrix does not have determinant 1")]
    NonUnimodular,
    #[error("generators commute")]
    CommutingGenerators,
    #[error("trace of {0} is not an algebraic integer")]
    NonIntegralTraces(&'static str),
    #[error("1, a, b, ab are linearly dependent (a and b share a fixed point)")]
    DegenerateBasis,
    #[error("structure constant of {0} is not an algebraic integer")]
    NonIntegralStructure(String),
    #[error("ab - ba is singular: a and b have a common fixed point")]
    CommonFixedPoint,
    #[error("relation failed: {0}")]
    RelationFailure(&'static str),
    #[error("matrices are defined over different fields")]
    FieldMismatch,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub e: [[FieldElement; 2]; 2],
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{:?}, {:?}], [{:?}, {:?}]]", self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1])
    }
}

impl Mat2 {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub fn from_ints(k: &NumberField, m: [[i64; 2]; 2]) -> Self {
        let f = |x: i64| k.from_ints(&[x]);
        Mat2::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    pub fn identity(k: &NumberField) -> Self {
        Mat2::scalar(&k.one())
    }

    pub fn scalar(x: &FieldElement) -> Self {
        let z = x.field().zero();
        Mat2::new(x.clone(), z.clone(), z, x.clone())
    }

    pub fn field(&self) -> &NumberField {
        self.e[0][0].field()
    }

    pub fn entries(&self) -> [&FieldElement; 4] {
        [&self.e[0][0], &self.e[0][1], &self.e[1][0], &self.e[1][1]]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let g = |i: usize, j: usize| &(&self.e[i][0] * &o.e[0][j]) + &(&self.e[i][1] * &o.e[1][j]);
        Mat2::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let g = |i: usize, j: usize| &self.e[i][j] + &o.e[i][j];
        Mat2::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let g = |i: usize, j: usize| &self.e[i][j] - &o.e[i][j];
        Mat2::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn scale(&self, x: &FieldElement) -> Mat2 {
        let g = |i: usize, j: usize| &self.e[i][j] * x;
        Mat2::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn neg(&self) -> Mat2 {
        let g = |i: usize, j: usize| -&self.e[i][j];
        Mat2::new(g(0, 0), g(0, 1), g(1, 0), g(1, 1))
    }

    pub fn det(&self) -> FieldElement {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    pub fn trace(&self) -> FieldElement {
        &self.e[0][0] + &self.e[1][1]
    }

    /// Inverse, or `None` if singular.
    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det().inverse()?;
        let adj = Mat2::new(self.e[1][1].clone(), -&self.e[0][1], -&self.e[1][0], self.e[0][0].clone());
        Some(adj.scale(&d))
    }

    pub fn is_scalar(&self) -> bool {
        self.e[0][1].is_zero() && self.e[1][0].is_zero() && self.e[0][0] == self.e[1][1]
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|x| x.is_zero())
    }

    /// Equality up to a nonzero scalar, by cross-multiplying entries.
    pub fn proj_eq(&self, o: &Mat2) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        let a = self.entries();
        let b = o.entries();
        for i in 0..4 {
            for j in 0..4 {
                if &(a[i] * b[j]) != &(a[j] * b[i]) {
                    return false;
                }
            }
        }
        true
    }

    fn check_unimodular(&self) -> Result<(), TraceError> {
        if self.det().is_one() {
            Ok(())
        } else {
            Err(TraceError::NonUnimodular)
        }
    }
}

fn same_field(a: &Mat2, b: &Mat2) -> Result<(), TraceError> {
    if a.field() == b.field() {
        Ok(())
    } else {
        Err(TraceError::FieldMismatch)
    }
}

/// Checks the six SL(2) trace identities for the pair (a, b).
pub fn verify_trace_identities(a: &Mat2, b: &Mat2) -> Result<bool, TraceError> {
    same_field(a, b)?;
    a.check_unimodular()?;
    b.check_unimodular()?;
    let k = a.field();
    let one = Mat2::identity(k);
    let ai = a.inverse().unwrap();
    let bi = b.inverse().unwrap();
    let (ta, tb) = (a.trace(), b.trace());
    let ab = a.mul(b);
    let ba = b.mul(a);
    let tab = ab.trace();
    let checks = [
        a.add(&ai) == one.scale(&ta),
        a.mul(a) == a.scale(&ta).sub(&one),
        a.mul(&ab) == ab.scale(&ta).sub(b),
        ab.mul(a) == one.scale(&-&tb).add(&a.scale(&tab)).add(b),
        bi.mul(&ai) == ai.scale(&tb).sub(&b.mul(&ai)),
        ba.add(&ab) == one.scale(&(&tab - &(&ta * &tb))).add(&a.scale(&tb)).add(&b.scale(&ta)),
    ];
    Ok(checks.iter().all(|&c| c))
}

/// Solves `sum_l x_l basis_l = m` over the field; `None` if the basis is
/// degenerate.
fn coordinates(basis: &[Mat2; 4], m: &Mat2) -> Option<Vec<FieldElement>> {
    // rows are matrix entries, columns are basis elements
    let mut rows: Vec<Vec<FieldElement>> = (0..4)
        .map(|r| {
            let mut row: Vec<FieldElement> = basis.iter().map(|b| b.entries()[r].clone()).collect();
            row.push(m.entries()[r].clone());
            row
        })
        .collect();
    for c in 0..4 {
        let pr = (c..4).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(c, pr);
        let inv = rows[c][c].inverse().unwrap();
        for x in rows[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..4 {
            if r != c && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for j in 0..5 {
                    let t = &f * &rows[c][j];
                    rows[r][j] = &rows[r][j] - &t;
                }
            }
        }
    }
    Some(rows.into_iter().map(|r| r[4].clone()).collect())
}

#[derive(Clone, Debug)]
pub struct ElementaryOrder {
    pub a: Mat2,
    pub b: Mat2,
    /// 1, a, b, ab.
    pub basis: [Mat2; 4],
    /// structure[i][j] are the coordinates of basis_i * basis_j.
    pub structure: Vec<Vec<Vec<FieldElement>>>,
}

const BASIS_NAMES: [&str; 4] = ["1", "a", "b", "ab"];

/// Builds `R[1, a, b, ab]` and certifies closure: all 64 structure
/// constants are computed and checked to be algebraic integers.
pub fn build_order(a: &Mat2, b: &Mat2) -> Result<ElementaryOrder, TraceError> {
    same_field(a, b)?;
    a.check_unimodular()?;
    b.check_unimodular()?;
    let ab = a.mul(b);
    if ab == b.mul(a) {
        return Err(TraceError::CommutingGenerators);
    }
    for (name, t) in [("a", a.trace()), ("b", b.trace()), ("ab", ab.trace())] {
        if !t.is_integral() {
            return Err(TraceError::NonIntegralTraces(name));
        }
    }
    let basis = [Mat2::identity(a.field()), a.clone(), b.clone(), ab];
    let mut structure = Vec::with_capacity(4);
    for i in 0..4 {
        let mut row = Vec::with_capacity(4);
        for j in 0..4 {
            let c = coordinates(&basis, &basis[i].mul(&basis[j])).ok_or(TraceError::DegenerateBasis)?;
            if let Some(bad) = c.iter().position(|x| !x.is_integral()) {
                return Err(TraceError::NonIntegralStructure(format!(
                    "{}*{} along {}",
                    BASIS_NAMES[i], BASIS_NAMES[j], BASIS_NAMES[bad]
                )));
            }
            row.push(c);
        }
        structure.push(row);
    }
    Ok(ElementaryOrder { a: a.clone(), b: b.clone(), basis, structure })
}

impl ElementaryOrder {
    /// Whether `x` lies in the order: its coordinates are algebraic integers.
    pub fn contains(&self, x: &Mat2) -> bool {
        coordinates(&self.basis, x).is_some_and(|c| c.iter().all(|v| v.is_integral()))
    }

    /// Whether `x O x^-1 = O`.
    pub fn normalized_by(&self, x: &Mat2) -> bool {
        let Some(xi) = x.inverse() else { return false };
        self.basis
            .iter()
            .all(|m| self.contains(&x.mul(m).mul(&xi)) && self.contains(&xi.mul(m).mul(x)))
    }

    pub fn all_integral(&self) -> bool {
        self.structure.iter().flatten().flatten().all(|x| x.is_integral())
    }
}

/// `tr[a, b] - 2` with `[a, b] = a b a^-1 b^-1`.
pub fn commutator_trace_minus_two(a: &Mat2, b: &Mat2) -> FieldElement {
    let c = a.mul(b).mul(&a.inverse().unwrap()).mul(&b.inverse().unwrap());
    &c.trace() - &a.field().from_ints(&[2])
}

/// Generator of the discriminant ideal of the order.
pub fn order_discriminant(order: &ElementaryOrder) -> FieldElement {
    commutator_trace_minus_two(&order.a, &order.b)
}

#[derive(Clone, Debug)]
pub struct JorgensenCertificate {
    pub tau: Mat2,
    pub trace_zero: bool,
    pub square_scalar: bool,
    pub inverts_a: bool,
    pub inverts_b: bool,
}

impl JorgensenCertificate {
    pub fn holds(&self) -> bool {
        self.trace_zero && self.square_scalar && self.inverts_a && self.inverts_b
    }
}

/// `tau = ab - ba` with its certified properties.
pub fn jorgensen_involution(a: &Mat2, b: &Mat2) -> Result<JorgensenCertificate, TraceError> {
    same_field(a, b)?;
    a.check_unimodular()?;
    b.check_unimodular()?;
    let tau = a.mul(b).sub(&b.mul(a));
    let Some(ti) = tau.inverse() else { return Err(TraceError::CommonFixedPoint) };
    let conj = |m: &Mat2| tau.mul(m).mul(&ti);
    Ok(JorgensenCertificate {
        trace_zero: tau.trace().is_zero(),
        square_scalar: tau.mul(&tau).is_scalar(),
        inverts_a: conj(a) == a.inverse().unwrap(),
        inverts_b: conj(b) == b.inverse().unwrap(),
        tau,
    })
}

/// Checks that tau1, tau2 generate a projective Klein four group with
/// tau1 a tau1 = a^-1, tau1 alpha tau1 = alpha, tau2 a tau2 = a and
/// tau2 alpha tau2 = alpha^-1, all up to scalars.
pub fn klein_four_relations(a: &Mat2, alpha: &Mat2, tau1: &Mat2, tau2: &Mat2) -> Result<bool, TraceError> {
    for (name, t) in [("tau1^2 is not scalar", tau1), ("tau2^2 is not scalar", tau2)] {
        if t.inverse().is_none() || !t.mul(t).is_scalar() {
            return Err(TraceError::RelationFailure(name));
        }
    }
    let t1t2 = tau1.mul(tau2);
    if !t1t2.proj_eq(&tau2.mul(tau1)) || t1t2.is_scalar() {
        return Ok(false);
    }
    let ai = a.inverse().ok_or(TraceError::RelationFailure("a is singular"))?;
    let alphai = alpha.inverse().ok_or(TraceError::RelationFailure("alpha is singular"))?;
    let rels: [(&'static str, Mat2, &Mat2); 4] = [
        ("tau1 a tau1 = a^-1", tau1.mul(a).mul(tau1), &ai),
        ("tau1 alpha tau1 = alpha", tau1.mul(alpha).mul(tau1), alpha),
        ("tau2 a tau2 = a", tau2.mul(a).mul(tau2), a),
        ("tau2 alpha tau2 = alpha^-1", tau2.mul(alpha).mul(tau2), &alphai),
    ];
    for (name, lhs, rhs) in rels.iter() {
        if !lhs.proj_eq(rhs) {
            return Err(TraceError::RelationFailure(name));
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn qk() -> NumberField {
        NumberField::rationals()
    }

    #[test]
    fn parabolic_pair() {
        let k = qk();
        let a = Mat2::from_ints(&k, [[1, 1], [0, 1]]);
        let b = Mat2::from_ints(&k, [[1, 0], [1, 1]]);
        assert!(verify_trace_identities(&a, &b).unwrap());
        let o = build_order(&a, &b).unwrap();
        assert!(o.all_integral());
        assert_eq!(order_discriminant(&o).as_rational(), Some(q(1)));
        let j = jorgensen_involution(&a, &b).unwrap();
        assert!(j.holds());
        assert!(j.tau.proj_eq(&Mat2::from_ints(&k, [[1, 0], [0, -1]])));
        let lemma = b.inverse().unwrap().mul(&a.inverse().unwrap());
        assert!(o.contains(&lemma));
    }

    #[test]
    fn errors() {
        let k = qk();
        let a = Mat2::from_ints(&k, [[1, 1], [0, 1]]);
        let two = Mat2::from_ints(&k, [[2, 0], [0, 1]]);
        assert_eq!(verify_trace_identities(&a, &two), Err(TraceError::NonUnimodular));
        assert!(matches!(build_order(&a, &a), Err(TraceError::CommutingGenerators)));
        assert!(matches!(jorgensen_involution(&a, &a), Err(TraceError::CommonFixedPoint)));
        let half = k.rational(crate::poly::qf(1, 2));
        let h = Mat2::new(half.clone(), k.zero(), k.zero(), k.from_ints(&[2]));
        let b = Mat2::from_ints(&k, [[1, 0], [1, 1]]);
        // tr h = 5/2
        assert!(matches!(build_order(&h, &b), Err(TraceError::NonIntegralTraces("a"))));
        // upper triangular pair over Q(sqrt 2): non-commuting but reducible
        let k2 = NumberField::new(&[-2, 0, 1]).unwrap();
        let t = k2.from_ints(&[1, 1]);
        let d = Mat2::new(t.clone(), k2.zero(), k2.zero(), t.inverse().unwrap());
        let u = Mat2::from_ints(&k2, [[1, 1], [0, 1]]);
        assert!(matches!(build_order(&d, &u), Err(TraceError::DegenerateBasis)));
        assert!(commutator_trace_minus_two(&d, &u).is_zero());
        let _ = half;
    }

    #[test]
    fn identity_degenerates_correctly() {
        let k = qk();
        let one = Mat2::identity(&k);
        let b = Mat2::from_ints(&k, [[2, 1], [1, 1]]);
        assert!(verify_trace_identities(&one, &b).unwrap());
    }

    #[test]
    fn klein_four_synthetic() {
        let k = qk();
        let t1 = Mat2::from_ints(&k, [[0, 1], [-1, 0]]);
        let t2 = Mat2::from_ints(&k, [[1, 0], [0, -1]]);
        let a = Mat2::new(k.from_ints(&[2]), k.zero(), k.zero(), k.rational(crate::poly::qf(1, 2)));
        // alpha commutes with tau1 and is inverted by tau2
        let alpha = Mat2::from_ints(&k, [[2, 1], [-1, 2]]);
        assert_eq!(klein_four_relations(&a, &alpha, &t1, &t2), Ok(true));
        assert_eq!(klein_four_relations(&a, &alpha, &t1, &t1), Ok(false));
        let bad = Mat2::from_ints(&k, [[1, 1], [0, 1]]);
        assert!(matches!(klein_four_relations(&a, &alpha, &bad, &t2), Err(TraceError::RelationFailure(_))));
    }
}
