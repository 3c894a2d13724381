//! Combinatorial 3-orbifolds: a presentation of the complement of the
//! singular locus, one meridian word per locus edge, and the labelled locus.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroups::{d_p, d_p_smith, exponent_sums, GroupError, Presentation, Word, WordSpec};
use crate::linalg::{nullspace, rank, to_qmat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbifoldError {
    #[error("invalid singular locus: {0}")]
    InvalidLocus(String),
    #[error("singular locus is empty")]
    EmptyLocus,
    #[error("unknown edge {0}")]
    UnknownEdge(u32),
    #[error("relator {0} is not killed by the homomorphism")]
    RelatorNotKilled(usize),
    #[error("homomorphism has {got} exponents, expected {want}")]
    WrongArity { want: usize, got: usize },
    #[error("matrix {0} is not an involution")]
    NotInvolution(u8),
    #[error("involutions do not commute")]
    NotCommuting,
    #[error("matrices must be square of equal size")]
    DimensionMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusEdge {
    pub id: u32,
    pub ends: [u32; 2],
    pub order: u64,
    pub meridian: Word,
    pub core: Option<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLocus {
    pub vertices: Vec<u32>,
    pub edges: Vec<LocusEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub edges: Vec<u32>,
    pub vertices: Vec<u32>,
}

impl Component {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    pub fn b1(&self) -> usize {
        (1 - self.euler_characteristic()) as usize
    }
}

impl SingularLocus {
    /// Every vertex is trivalent, or lies on a component where all vertices
    /// have degree two (a circle). Orders are at least 2.
    pub fn validate(&self) -> Result<(), OrbifoldError> {
        let bad = |s: String| Err(OrbifoldError::InvalidLocus(s));
        let mut deg: BTreeMap<u32, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        if deg.len() != self.vertices.len() {
            return bad("duplicate vertex id".into());
        }
        let mut ids = std::collections::HashSet::new();
        for e in &self.edges {
            if !ids.insert(e.id) {
                return bad(format!("duplicate edge id {}", e.id));
            }
            if e.order < 2 {
                return bad(format!("edge {} has order {}", e.id, e.order));
            }
            for v in e.ends {
                match deg.get_mut(&v) {
                    Some(d) => *d += 1,
                    None => return bad(format!("edge {} ends at unknown vertex {v}", e.id)),
                }
            }
        }
        let all: Vec<u32> = self.edges.iter().map(|e| e.id).collect();
        for c in self.components(&all) {
            let degs: Vec<usize> = c.vertices.iter().map(|v| deg[v]).collect();
            let circle = degs.iter().all(|&d| d == 2);
            let graph = degs.iter().all(|&d| d == 3);
            if !circle && !graph {
                return bad(format!("component with edges {:?} mixes degrees", c.edges));
            }
        }
        if let Some((v, _)) = deg.iter().find(|(_, &d)| d == 0) {
            return bad(format!("isolated vertex {v}"));
        }
        Ok(())
    }

    pub fn edge(&self, id: u32) -> Option<&LocusEdge> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// Connected components of the subgraph spanned by `edge_ids`, each
    /// with the vertices it touches.
    pub fn components(&self, edge_ids: &[u32]) -> Vec<Component> {
        let index: HashMap<u32, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let chosen: Vec<&LocusEdge> = self.edges.iter().filter(|e| edge_ids.contains(&e.id)).collect();
        for e in &chosen {
            let (a, b) = (find(&mut parent, index[&e.ends[0]]), find(&mut parent, index[&e.ends[1]]));
            parent[a] = b;
        }
        let mut groups: BTreeMap<usize, Component> = BTreeMap::new();
        for e in &chosen {
            let r = find(&mut parent, index[&e.ends[0]]);
            let c = groups.entry(r).or_insert(Component { edges: vec![], vertices: vec![] });
            c.edges.push(e.id);
            for v in e.ends {
                if !c.vertices.contains(&v) {
                    c.vertices.push(v);
                }
            }
        }
        let mut out: Vec<Component> = groups.into_values().collect();
        for c in &mut out {
            c.edges.sort_unstable();
            c.vertices.sort_unstable();
        }
        out.sort_by(|a, b| a.edges.cmp(&b.edges));
        out
    }

    pub fn all_edge_ids(&self) -> Vec<u32> {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn b1(&self, edge_ids: &[u32]) -> usize {
        self.components(edge_ids).iter().map(Component::b1).sum()
    }
}

/// sing_p split by the sign of the Euler characteristic of its components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratification {
    pub p: u64,
    pub edges: Vec<u32>,
    pub zero: Vec<Component>,
    pub negative: Vec<Component>,
    /// Arcs: components of positive Euler characteristic, in neither class.
    pub positive: Vec<Component>,
    pub b1: usize,
}

impl Serialize for Component {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Component", 3)?;
        st.serialize_field("edges", &self.edges)?;
        st.serialize_field("vertices", &self.vertices)?;
        st.serialize_field("chi", &self.euler_characteristic())?;
        st.end()
    }
}

pub fn stratify(locus: &SingularLocus, p: u64) -> Stratification {
    let edges: Vec<u32> = locus.edges.iter().filter(|e| e.order % p == 0).map(|e| e.id).collect();
    let comps = locus.components(&edges);
    let b1 = comps.iter().map(Component::b1).sum();
    let (mut zero, mut negative, mut positive) = (vec![], vec![], vec![]);
    for c in comps {
        match c.euler_characteristic().signum() {
            0 => zero.push(c),
            -1 => negative.push(c),
            _ => positive.push(c),
        }
    }
    Stratification { p, edges, zero, negative, positive, b1 }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldData {
    pub manifold: Presentation,
    pub locus: SingularLocus,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    id: u32,
    ends: [u32; 2],
    order: u64,
    meridian: WordSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    core: Option<WordSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocus {
    vertices: Vec<u32>,
    edges: Vec<RawEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrbifold {
    manifold: Presentation,
    locus: RawLocus,
}

impl TryFrom<RawOrbifold> for OrbifoldData {
    type Error = OrbifoldError;
    fn try_from(raw: RawOrbifold) -> Result<Self, OrbifoldError> {
        let gens = raw.manifold.gens().to_vec();
        let edges = raw
            .locus
            .edges
            .into_iter()
            .map(|e| {
                Ok(LocusEdge {
                    id: e.id,
                    ends: e.ends,
                    order: e.order,
                    meridian: e.meridian.resolve(&gens)?,
                    core: e.core.map(|c| c.resolve(&gens)).transpose()?,
                })
            })
            .collect::<Result<Vec<_>, GroupError>>()?;
        OrbifoldData::new(raw.manifold, SingularLocus { vertices: raw.locus.vertices, edges })
    }
}

impl From<OrbifoldData> for RawOrbifold {
    fn from(d: OrbifoldData) -> Self {
        let edges = d
            .locus
            .edges
            .into_iter()
            .map(|e| RawEdge {
                id: e.id,
                ends: e.ends,
                order: e.order,
                meridian: WordSpec::Ints(e.meridian),
                core: e.core.map(WordSpec::Ints),
            })
            .collect();
        RawOrbifold { manifold: d.manifold, locus: RawLocus { vertices: d.locus.vertices, edges } }
    }
}

impl Serialize for OrbifoldData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawOrbifold::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrbifoldData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawOrbifold::deserialize(d)?;
        OrbifoldData::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl OrbifoldData {
    pub fn new(manifold: Presentation, locus: SingularLocus) -> Result<Self, OrbifoldError> {
        locus.validate()?;
        let n = manifold.num_gens() as i32;
        for e in &locus.edges {
            for w in std::iter::once(&e.meridian).chain(e.core.iter()) {
                if w.iter().any(|&x| x == 0 || x.abs() > n) {
                    return Err(GroupError::BadWord { word: format!("{w:?}"), reason: format!("edge {}", e.id) }.into());
                }
            }
        }
        Ok(OrbifoldData { manifold, locus })
    }
}

fn power(w: &[i32], n: u64) -> Word {
    (0..n).flat_map(|_| w.iter().copied()).collect()
}

/// The manifold presentation with each meridian raised to its edge order.
pub fn orbifold_presentation(data: &OrbifoldData) -> Presentation {
    data.manifold
        .with_relators(data.locus.edges.iter().map(|e| power(&e.meridian, e.order)))
        .expect("meridians were validated")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyBound {
    pub p: u64,
    pub bound: usize,
    pub actual: usize,
    pub actual_smith: usize,
    pub holds: bool,
}

/// d_p(O) against b_1(sing_p(O)); d_p is computed twice.
pub fn homology_lower_bound(data: &OrbifoldData, p: u64) -> HomologyBound {
    let bound = stratify(&data.locus, p).b1;
    let pres = orbifold_presentation(data);
    let actual = d_p(&pres, p);
    let actual_smith = d_p_smith(&pres, p);
    HomologyBound { p, bound, actual, actual_smith, holds: actual >= bound && actual == actual_smith }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeficitReport {
    pub manifold_deficit: i64,
    pub meridian_relators: i64,
    pub deficit: i64,
    pub bound: i64,
    pub holds: bool,
}

/// |R| - |X| with one meridian relator per circle and -3 chi(Y) per graph
/// component Y, against 2 b_1(sing O) - 2.
pub fn presentation_deficit(data: &OrbifoldData) -> Result<DeficitReport, OrbifoldError> {
    if data.locus.edges.is_empty() {
        return Err(OrbifoldError::EmptyLocus);
    }
    let comps = data.locus.components(&data.locus.all_edge_ids());
    let meridian_relators: i64 = comps.iter().map(|c| if c.euler_characteristic() == 0 { 1 } else { -3 * c.euler_characteristic() }).sum();
    let manifold_deficit = data.manifold.rels().len() as i64 - data.manifold.num_gens() as i64;
    let deficit = manifold_deficit + meridian_relators;
    let bound = 2 * comps.iter().map(|c| c.b1() as i64).sum::<i64>() - 2;
    Ok(DeficitReport { manifold_deficit, meridian_relators, deficit, bound, holds: deficit <= bound })
}

fn image(w: &[i32], phi: &[i64]) -> i64 {
    exponent_sums(w, phi.len()).iter().zip(phi).map(|(a, b)| a * b).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CyclicCover {
    Satisfied { component: Vec<u32> },
    NotSatisfied,
}

/// Looks for a component of sing_p^0 whose core curve lies in ker phi.
pub fn cyclic_cover_hypothesis(data: &OrbifoldData, phi: &[i64], p: u64) -> Result<CyclicCover, OrbifoldError> {
    let pres = orbifold_presentation(data);
    if phi.len() != pres.num_gens() {
        return Err(OrbifoldError::WrongArity { want: pres.num_gens(), got: phi.len() });
    }
    if let Some(i) = pres.rels().iter().position(|r| image(r, phi) != 0) {
        return Err(OrbifoldError::RelatorNotKilled(i));
    }
    for c in stratify(&data.locus, p).zero {
        let core = c.edges.iter().find_map(|&id| data.locus.edge(id).and_then(|e| e.core.clone()));
        if core.is_some_and(|w| image(&w, phi) == 0) {
            return Ok(CyclicCover::Satisfied { component: c.edges });
        }
    }
    Ok(CyclicCover::NotSatisfied)
}

/// Searches Hom(H_1(O), Z) for a surjection killing the core of some
/// component of sing_p^0.
pub fn find_cyclic_cover_phi(data: &OrbifoldData, p: u64) -> Option<(Vec<i64>, Vec<u32>)> {
    let pres = orbifold_presentation(data);
    let n = pres.num_gens();
    for c in stratify(&data.locus, p).zero {
        let Some(core) = c.edges.iter().find_map(|&id| data.locus.edge(id).and_then(|e| e.core.clone())) else {
            continue;
        };
        let mut rows = pres.exponent_matrix();
        rows.push(exponent_sums(&core, n));
        let kernel = nullspace(&to_qmat(&rows), n);
        let Some(v) = kernel.first() else { continue };
        let lcm = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * crate::poly::Q::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
        let phi: Option<Vec<i64>> = ints.iter().map(|x| i64::try_from(x / &g).ok()).collect();
        if let Some(phi) = phi {
            return Some((phi, c.edges));
        }
    }
    None
}

/// Adds the meridians of the selected edges themselves as relators.
pub fn quotient_by_meridians(data: &OrbifoldData, selected: &[u32]) -> Result<Presentation, OrbifoldError> {
    let mut extra = Vec::new();
    for &id in selected {
        extra.push(data.locus.edge(id).ok_or(OrbifoldError::UnknownEdge(id))?.meridian.clone());
    }
    Ok(orbifold_presentation(data).with_relators(extra)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenspaceReport {
    pub ambient: usize,
    pub dims: [usize; 3],
    pub claim_holds: bool,
}

fn mat_mul_i(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn plus_one_eigenspace(h: &[Vec<i64>]) -> usize {
    let n = h.len();
    let shifted: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| h[i][j] - i64::from(i == j)).collect()).collect();
    n - rank(&to_qmat(&shifted))
}

/// +1-eigenspace dimensions of h1, h2 and h1 h2 for commuting integral
/// involutions; on a space of dimension at least 4 one of them is >= 2.
pub fn involution_eigenspace_analysis(h1: &[Vec<i64>], h2: &[Vec<i64>]) -> Result<EigenspaceReport, OrbifoldError> {
    let n = h1.len();
    if n == 0 || h2.len() != n || h1.iter().chain(h2).any(|r| r.len() != n) {
        return Err(OrbifoldError::DimensionMismatch);
    }
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if mat_mul_i(h1, h1) != id {
        return Err(OrbifoldError::NotInvolution(1));
    }
    if mat_mul_i(h2, h2) != id {
        return Err(OrbifoldError::NotInvolution(2));
    }
    let h3 = mat_mul_i(h1, h2);
    if h3 != mat_mul_i(h2, h1) {
        return Err(OrbifoldError::NotCommuting);
    }
    let dims = [plus_one_eigenspace(h1), plus_one_eigenspace(h2), plus_one_eigenspace(&h3)];
    let claim_holds = n < 4 || dims.iter().any(|&d| d >= 2);
    Ok(EigenspaceReport { ambient: n, dims, claim_holds })
}

/// A planar trivalent graph grown from a theta graph by splitting faces,
/// plus unlinked circles, all sitting in the 3-sphere. The complement group
/// is free on the bounded faces and on one generator per circle; the
/// meridian of an edge is x_f x_g^{-1} for the faces f, g on its two sides.
pub fn random_planar_orbifold(rng: &mut impl Rng, splits: usize, circles: usize, orders: &[u64]) -> OrbifoldData {
    // directed edge: (edge id, forward)
    let mut ends: Vec<[u32; 2]> = vec![[0, 1], [0, 1], [0, 1]];
    let mut faces: Vec<Vec<(usize, bool)>> = vec![vec![(0, true), (1, false)], vec![(1, true), (2, false)], vec![(2, true), (0, false)]];
    let mut nv = 2u32;
    for _ in 0..splits {
        let f = rng.gen_range(0..faces.len());
        let len = faces[f].len();
        let i = rng.gen_range(0..len);
        let mut j = rng.gen_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        let (i, j) = (i.min(j), i.max(j));
        let (a, b) = (faces[f][i].0, faces[f][j].0);
        let (x, y) = (nv, nv + 1);
        nv += 2;
        // split edge e at vertex v: e keeps (s, v), new edge (v, t)
        let split = |e: usize, v: u32, ends: &mut Vec<[u32; 2]>, faces: &mut Vec<Vec<(usize, bool)>>| -> usize {
            let [s, t] = ends[e];
            ends[e] = [s, v];
            ends.push([v, t]);
            let ne = ends.len() - 1;
            for face in faces.iter_mut() {
                let mut out = Vec::with_capacity(face.len() + 1);
                for &(g, fwd) in face.iter() {
                    if g == e {
                        if fwd {
                            out.extend([(e, true), (ne, true)]);
                        } else {
                            out.extend([(ne, false), (e, false)]);
                        }
                    } else {
                        out.push((g, fwd));
                    }
                }
                *face = out;
            }
            ne
        };
        split(a, x, &mut ends, &mut faces);
        split(b, y, &mut ends, &mut faces);
        let c = ends.len();
        ends.push([x, y]);
        let face = faces[f].clone();
        // positions of the halves ending at x and y
        let ends_at = |(g, fwd): (usize, bool), v: u32, ends: &Vec<[u32; 2]>| if fwd { ends[g][1] == v } else { ends[g][0] == v };
        let px = (0..face.len()).find(|&k| ends_at(face[k], x, &ends)).unwrap();
        let py = (0..face.len()).find(|&k| ends_at(face[k], y, &ends)).unwrap();
        let rot = |from: usize, to: usize| -> Vec<(usize, bool)> {
            let mut out = Vec::new();
            let mut k = (from + 1) % face.len();
            loop {
                out.push(face[k]);
                if k == to {
                    break;
                }
                k = (k + 1) % face.len();
            }
            out
        };
        let mut f1 = rot(px, py);
        f1.push((c, false));
        let mut f2 = rot(py, px);
        f2.push((c, true));
        faces[f] = f1;
        faces.push(f2);
    }
    // the outer face is face 0; each other face gets a generator
    let ne = ends.len();
    let mut side: Vec<Vec<usize>> = vec![vec![]; ne];
    for (fi, face) in faces.iter().enumerate() {
        for &(g, _) in face {
            side[g].push(fi);
        }
    }
    let gen_of = |f: usize| -> Option<i32> { (f != 0).then_some(f as i32) };
    let mut edges = Vec::new();
    for (e, &[s, t]) in ends.iter().enumerate() {
        let mut m = Vec::new();
        if let Some(g) = gen_of(side[e][0]) {
            m.push(g);
        }
        if let Some(g) = gen_of(side[e][1]) {
            m.push(-g);
        }
        edges.push(LocusEdge { id: e as u32, ends: [s, t], order: *orders.choose(rng).unwrap(), meridian: m, core: None });
    }
    let face_gens = faces.len() - 1;
    let mut vertices: Vec<u32> = (0..nv).collect();
    for k in 0..circles {
        let v = nv + k as u32;
        vertices.push(v);
        let g = (face_gens + k + 1) as i32;
        edges.push(LocusEdge { id: (ne + k) as u32, ends: [v, v], order: *orders.choose(rng).unwrap(), meridian: vec![g], core: Some(vec![]) });
    }
    let manifold = Presentation::free(face_gens + circles);
    OrbifoldData::new(manifold, SingularLocus { vertices, edges }).expect("planar construction is valid")
}

pub fn seeded_planar_orbifold(seed: u64, splits: usize, circles: usize, orders: &[u64]) -> OrbifoldData {
    random_planar_orbifold(&mut ChaCha8Rng::seed_from_u64(seed), splits, circles, orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(id: u32, ends: [u32; 2], order: u64, meridian: Word) -> LocusEdge {
        LocusEdge { id, ends, order, meridian, core: None }
    }

    /// Theta graph in S^3: complement free on two faces a, b; the three
    /// edges have meridians a, a^-1 b, b^-1.
    fn theta(orders: [u64; 3]) -> OrbifoldData {
        let locus = SingularLocus {
            vertices: vec![0, 1],
            edges: vec![edge(0, [0, 1], orders[0], vec![1]), edge(1, [0, 1], orders[1], vec![-1, 2]), edge(2, [0, 1], orders[2], vec![-2])],
        };
        OrbifoldData::new(Presentation::free(2), locus).unwrap()
    }

    fn circle(order: u64, meridian: Word, core: Word, gens: usize) -> OrbifoldData {
        let locus = SingularLocus { vertices: vec![0], edges: vec![LocusEdge { id: 0, ends: [0, 0], order, meridian, core: Some(core) }] };
        OrbifoldData::new(Presentation::free(gens), locus).unwrap()
    }

    #[test]
    fn stratify_examples() {
        let s = stratify(&theta([2, 2, 2]).locus, 2);
        assert_eq!(s.negative.len(), 1);
        assert_eq!(s.negative[0].euler_characteristic(), -1);
        assert_eq!(s.b1, 2);
        let s = stratify(&circle(3, vec![1], vec![2], 2).locus, 2);
        assert!(s.edges.is_empty());
        // two order-2 edges of a theta graph close up into a circle
        let s = stratify(&theta([2, 2, 3]).locus, 2);
        assert_eq!(s.zero.len(), 1);
        assert!(s.positive.is_empty());
    }

    #[test]
    fn arcs_are_reported_separately() {
        // K4 with a single edge of order 2
        let pairs = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
        let edges = pairs.iter().enumerate().map(|(i, &e)| edge(i as u32, e, if i == 0 { 2 } else { 3 }, vec![])).collect();
        let locus = SingularLocus { vertices: vec![0, 1, 2, 3], edges };
        locus.validate().unwrap();
        let s = stratify(&locus, 2);
        assert_eq!(s.positive.len(), 1);
        assert_eq!(s.positive[0].euler_characteristic(), 1);
        assert!(s.zero.is_empty() && s.negative.is_empty());
    }

    #[test]
    fn presentation_and_bound() {
        let c = circle(2, vec![1], vec![2], 2);
        let p = orbifold_presentation(&c);
        assert_eq!(p.rels(), &[vec![1, 1]]);
        let t = theta([2, 2, 2]);
        let h = homology_lower_bound(&t, 2);
        assert_eq!(h.bound, 2);
        assert!(h.holds && h.actual >= 2);
        let h = homology_lower_bound(&t, 3);
        assert_eq!(h.bound, 0);
        assert!(h.holds);
    }

    #[test]
    fn deficits() {
        let c = circle(2, vec![1], vec![], 1);
        let d = presentation_deficit(&c).unwrap();
        assert_eq!((d.deficit, d.bound, d.holds), (0, 0, true));
        let t = theta([2, 2, 2]);
        assert_eq!(presentation_deficit(&t).unwrap().meridian_relators, 3);
        let empty = OrbifoldData::new(Presentation::free(1), SingularLocus { vertices: vec![], edges: vec![] }).unwrap();
        assert_eq!(presentation_deficit(&empty), Err(OrbifoldError::EmptyLocus));
    }

    #[test]
    fn cyclic_cover_examples() {
        let c = circle(2, vec![], vec![2], 2);
        let c = OrbifoldData { locus: SingularLocus { edges: vec![LocusEdge { meridian: vec![], ..c.locus.edges[0].clone() }], ..c.locus }, ..c };
        assert!(matches!(cyclic_cover_hypothesis(&c, &[1, 0], 2).unwrap(), CyclicCover::Satisfied { .. }));
        let mut d = c.clone();
        d.locus.edges[0].core = Some(vec![1]);
        assert_eq!(cyclic_cover_hypothesis(&d, &[1, 0], 2).unwrap(), CyclicCover::NotSatisfied);
        let e = circle(2, vec![1], vec![2], 2);
        assert_eq!(cyclic_cover_hypothesis(&e, &[1, 0], 2), Err(OrbifoldError::RelatorNotKilled(0)));
        // b1 = 2 after killing the meridian: free on b, c
        let f = circle(2, vec![1], vec![2], 3);
        let (phi, _) = find_cyclic_cover_phi(&f, 2).unwrap();
        assert!(matches!(cyclic_cover_hypothesis(&f, &phi, 2).unwrap(), CyclicCover::Satisfied { .. }));
    }

    #[test]
    fn meridian_quotients() {
        let t = theta([2, 2, 2]);
        let all = quotient_by_meridians(&t, &[0, 1, 2]).unwrap();
        assert_eq!(d_p(&all, 2), 0);
        let none = quotient_by_meridians(&t, &[]).unwrap();
        assert_eq!(none, orbifold_presentation(&t));
        assert!(d_p(&orbifold_presentation(&t), 2) - d_p(&all, 2) <= 3);
        assert_eq!(quotient_by_meridians(&t, &[9]), Err(OrbifoldError::UnknownEdge(9)));
    }

    #[test]
    fn eigenspaces() {
        let diag = |d: &[i64]| -> Vec<Vec<i64>> { (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0 }).collect()).collect() };
        let r = involution_eigenspace_analysis(&diag(&[1, -1, -1, -1]), &diag(&[-1, 1, -1, -1])).unwrap();
        assert_eq!(r.dims, [1, 1, 2]);
        assert!(r.claim_holds);
        let r = involution_eigenspace_analysis(&diag(&[1; 4]), &diag(&[1; 4])).unwrap();
        assert_eq!(r.dims, [4, 4, 4]);
        assert_eq!(involution_eigenspace_analysis(&diag(&[2, 1]), &diag(&[1, 1])), Err(OrbifoldError::NotInvolution(1)));
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(involution_eigenspace_analysis(&swap, &diag(&[1, -1])), Err(OrbifoldError::NotCommuting));
    }

    #[test]
    fn planar_instances_are_trivalent_and_satisfy_the_bound() {
        for seed in 0..20 {
            let o = seeded_planar_orbifold(seed, 6, 2, &[2, 3, 4, 6]);
            let graph: Vec<u32> = o.locus.edges.iter().filter(|e| e.ends[0] != e.ends[1]).map(|e| e.id).collect();
            let comps = o.locus.components(&graph);
            assert_eq!(comps.len(), 1);
            assert_eq!(comps[0].b1(), comps[0].vertices.len() / 2 + 1);
            for p in [2, 3] {
                assert!(homology_lower_bound(&o, p).holds, "seed {seed} p {p}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let j = r#"{"manifold":{"gens":["x","y"],"rels":[]},"locus":{"vertices":[0],"edges":[{"id":0,"ends":[0,0],"order":2,"meridian":"x","core":"y"}]}}"#;
        let o: OrbifoldData = serde_json::from_str(j).unwrap();
        assert_eq!(o.locus.edges[0].core, Some(vec![2]));
        let back: OrbifoldData = serde_json::from_str(&serde_json::to_string(&o).unwrap()).unwrap();
        assert_eq!(back, o);
    }
}
