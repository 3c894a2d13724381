//! Schreier coset graphs and their Cheeger constants.
//!
//! Every generator contributes one undirected edge per coset. A generator
//! fixing a coset gives a loop: it adds 2 to the degree and never lies in
//! a boundary.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{sqrt_enclosure, Decision, Enclosure, DEFAULT_BITS};
use crate::fpgroups::SubgroupTable;
use crate::numfield::charpoly;
use crate::poly::{smallest_root_above, Q};

pub const EXACT_LIMIT: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheegerError {
    #[error("{0} vertices exceed the exhaustive limit")]
    TooLargeForExact(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has fewer than two vertices")]
    TooSmall,
    #[error("edge endpoint {0} out of range")]
    BadVertex(usize),
    #[error("family mixes generating sets of sizes {0} and {1}")]
    MixedGeneratorSets(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetGraph {
    #[serde(rename = "V")]
    pub v: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<usize>,
}

impl CosetGraph {
    pub fn from_edges(v: usize, edges: Vec<[usize; 2]>) -> Result<Self, CheegerError> {
        let g = CosetGraph { v, edges, generators: None };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), CheegerError> {
        match self.edges.iter().flatten().find(|&&x| x >= self.v) {
            Some(&x) => Err(CheegerError::BadVertex(x)),
            None => Ok(()),
        }
    }

    /// `perms[g][x]` is the image of point x under generator g.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Self {
        let v = perms.first().map_or(0, Vec::len);
        let edges = perms.iter().flat_map(|p| p.iter().enumerate().map(|(x, &y)| [x, y])).collect();
        CosetGraph { v, edges, generators: Some(perms.len()) }
    }

    pub fn from_table(t: &SubgroupTable) -> Self {
        Self::from_permutations(t.action())
    }

    /// Z/n with generating set {1}.
    pub fn cycle(n: usize) -> Self {
        Self::from_permutations(&[(0..n).map(|i| (i + 1) % n).collect()])
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j])).collect();
        CosetGraph { v: n, edges, generators: None }
    }

    /// SL(2, p) acting on the projective line by Moebius maps, with the
    /// generators [[1,1],[0,1]] and [[1,0],[1,1]]. The point at infinity is p.
    pub fn projective_line(p: usize) -> Self {
        let inf = p;
        let mobius = |[a, b, c, d]: [usize; 4]| -> Vec<usize> {
            (0..=p)
                .map(|x| {
                    let (num, den) = if x == inf { (a, c) } else { ((a * x + b) % p, (c * x + d) % p) };
                    if den == 0 {
                        inf
                    } else {
                        let inv = crate::fp::inv_mod(den as u64, p as u64) as usize;
                        num * inv % p
                    }
                })
                .collect()
        };
        Self::from_permutations(&[mobius([1, 1, 0, 1]), mobius([1, 0, 1, 1])])
    }

    /// Degrees with a loop counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.v];
        for &[a, b] in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        if self.v == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.v).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = self.v;
        for &[a, b] in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
        comps == 1
    }

    /// Combinatorial Laplacian D - A; loops cancel.
    pub fn laplacian(&self) -> Vec<Vec<Q>> {
        let mut l = vec![vec![0i64; self.v]; self.v];
        for &[a, b] in &self.edges {
            if a != b {
                l[a][a] += 1;
                l[b][b] += 1;
                l[a][b] -= 1;
                l[b][a] -= 1;
            }
        }
        l.into_iter().map(|r| r.into_iter().map(|x| Q::from_integer(x.into())).collect()).collect()
    }
}

/// min |dA| / |A| over 0 < |A| <= |V|/2, by a Gray-code walk over subsets.
pub fn cheeger_exact(g: &CosetGraph) -> Result<Q, CheegerError> {
    g.validate()?;
    let n = g.v;
    if n < 2 {
        return Err(CheegerError::TooSmall);
    }
    if n > EXACT_LIMIT {
        return Err(CheegerError::TooLargeForExact(n));
    }
    let mut nbrs = vec![Vec::new(); n];
    for &[a, b] in &g.edges {
        if a != b {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
    }
    let mut inside = vec![false; n];
    let (mut size, mut boundary) = (0usize, 0i64);
    let mut best: Option<(i64, usize)> = None;
    for k in 1u64..(1u64 << n) {
        let v = k.trailing_zeros() as usize;
        let entering = !inside[v];
        for &u in &nbrs[v] {
            boundary += if inside[u] == entering { -1 } else { 1 };
        }
        inside[v] = entering;
        size = if entering { size + 1 } else { size - 1 };
        if 2 * size <= n && best.map_or(true, |(b, s)| boundary * (s as i64) < b * size as i64) {
            best = Some((boundary, size));
        }
    }
    let (b, s) = best.expect("some admissible subset");
    Ok(Q::new(b.into(), (s as i64).into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralBounds {
    pub lambda2: Enclosure,
    pub lower: Enclosure,
    pub upper: Enclosure,
    pub d_max: usize,
}

impl SpectralBounds {
    /// lower <= h <= upper, decided on the enclosures.
    pub fn brackets(&self, h: &Q) -> Decision {
        match (self.lower.le(h), self.upper.ge(h)) {
            (Decision::True, Decision::True) => Decision::True,
            (Decision::False, _) | (_, Decision::False) => Decision::False,
            _ => Decision::Undecided,
        }
    }
}

/// (lambda2 / 2, sqrt(2 d_max lambda2)) with lambda2 isolated by Sturm
/// sequences on the Laplacian's characteristic polynomial.
pub fn cheeger_spectral_bounds(g: &CosetGraph) -> Result<SpectralBounds, CheegerError> {
    g.validate()?;
    if g.v < 2 {
        return Err(CheegerError::TooSmall);
    }
    if !g.is_connected() {
        return Err(CheegerError::Disconnected);
    }
    let cp = charpoly(&g.laplacian());
    let (lo, hi) = smallest_root_above(&cp, &Q::from_integer(0.into()), DEFAULT_BITS).expect("a connected graph has lambda2 > 0");
    // the charpoly is monic over Z, so a rational eigenvalue is an integer
    let k = Q::from_integer(hi.floor().to_integer());
    let lambda2 = if k > lo && cp.eval(&k).is_zero() { Enclosure::exact(k) } else { Enclosure::new(lo, hi) };
    let half = Q::new(1.into(), 2.into());
    let d_max = g.degrees().into_iter().max().unwrap_or(0);
    let two_d = Q::from_integer((2 * d_max as i64).into());
    let upper = Enclosure::new(
        sqrt_enclosure(&(&lambda2.lo * &two_d), DEFAULT_BITS).lo,
        sqrt_enclosure(&(&lambda2.hi * &two_d), DEFAULT_BITS).hi,
    );
    Ok(SpectralBounds { lower: lambda2.scale(&half), upper, lambda2, d_max })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyEntry {
    pub vertices: usize,
    #[serde(serialize_with = "crate::ser::q_opt::serialize")]
    pub h_exact: Option<Q>,
    pub bounds: Option<SpectralBounds>,
}

impl FamilyEntry {
    /// The best certified lower bound on h.
    pub fn h_lower(&self) -> Q {
        match (&self.h_exact, &self.bounds) {
            (Some(h), _) => h.clone(),
            (None, Some(b)) => b.lower.lo.clone(),
            (None, None) => Q::from_integer(0.into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauVerdict {
    ConsistentWithTau,
    TrendToZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub entries: Vec<FamilyEntry>,
    #[serde(with = "crate::ser::q")]
    pub inf: Q,
    pub verdict: TauVerdict,
}

/// Cheeger values along a family: exact where the exhaustive budget
/// allows, spectral bounds where connected. The verdict reads the computed
/// prefix only: a trend to zero means the last third of the sequence has
/// fallen below half its first value.
pub fn tau_family_report(graphs: &[CosetGraph]) -> Result<FamilyReport, CheegerError> {
    let sizes: Vec<usize> = graphs.iter().filter_map(|g| g.generators).collect();
    if let Some(w) = sizes.windows(2).find(|w| w[0] != w[1]) {
        return Err(CheegerError::MixedGeneratorSets(w[0], w[1]));
    }
    let mut entries = Vec::with_capacity(graphs.len());
    for g in graphs {
        let h_exact = match cheeger_exact(g) {
            Ok(h) => Some(h),
            Err(CheegerError::TooLargeForExact(_)) => None,
            Err(e) => return Err(e),
        };
        let bounds = match cheeger_spectral_bounds(g) {
            Ok(b) => Some(b),
            Err(CheegerError::Disconnected) => None,
            Err(e) => return Err(e),
        };
        entries.push(FamilyEntry { vertices: g.v, h_exact, bounds });
    }
    let lows: Vec<Q> = entries.iter().map(FamilyEntry::h_lower).collect();
    let inf = lows.iter().min().cloned().unwrap_or_else(|| Q::from_integer(0.into()));
    let verdict = match lows.first() {
        Some(first) if lows.len() >= 3 => {
            let tail = &lows[lows.len() - lows.len() / 3..];
            let half = first / Q::from_integer(2.into());
            if tail.iter().all(|h| *h <= half) {
                TauVerdict::TrendToZero
            } else {
                TauVerdict::ConsistentWithTau
            }
        }
        _ => TauVerdict::ConsistentWithTau,
    };
    Ok(FamilyReport { entries, inf, verdict })
}

#[derive(Serialize)]
struct CsvRow {
    index: usize,
    h_lower: String,
    h_exact: String,
    h_upper: String,
}

/// Columns index, h_lower, h_exact (blank if unknown), h_upper.
pub fn family_csv(report: &FamilyReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (i, e) in report.entries.iter().enumerate() {
        let (lo, hi) = match &e.bounds {
            Some(b) => (b.lower.lo.to_string(), b.upper.hi.to_string()),
            None => (String::new(), String::new()),
        };
        let ex = e.h_exact.as_ref().map(Q::to_string).unwrap_or_default();
        w.serialize(CsvRow { index: i + 1, h_lower: lo, h_exact: ex, h_upper: hi }).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qf};

    #[test]
    fn exact_examples() {
        assert_eq!(cheeger_exact(&CosetGraph::cycle(4)).unwrap(), q(1));
        assert_eq!(cheeger_exact(&CosetGraph::cycle(6)).unwrap(), qf(2, 3));
        assert_eq!(cheeger_exact(&CosetGraph::complete(4)).unwrap(), q(2));
        for n in 3..=16 {
            assert_eq!(cheeger_exact(&CosetGraph::cycle(n)).unwrap(), qf(2, (n / 2) as i64));
        }
        assert_eq!(cheeger_exact(&CosetGraph::cycle(27)), Err(CheegerError::TooLargeForExact(27)));
    }

    #[test]
    fn spectral_examples() {
        let k4 = cheeger_spectral_bounds(&CosetGraph::complete(4)).unwrap();
        assert!(k4.lambda2.lo <= q(4) && q(4) <= k4.lambda2.hi);
        assert_eq!(k4.brackets(&q(2)), Decision::True);
        let c6 = cheeger_spectral_bounds(&CosetGraph::cycle(6)).unwrap();
        assert_eq!(c6.brackets(&qf(2, 3)), Decision::True);
        assert_eq!(c6.d_max, 2);
        let two_triangles = CosetGraph::from_edges(6, vec![[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]]).unwrap();
        assert_eq!(cheeger_spectral_bounds(&two_triangles), Err(CheegerError::Disconnected));
    }

    #[test]
    fn loops_do_not_cross() {
        // Z/3 acting trivially plus a 3-cycle: loops add degree only
        let g = CosetGraph::from_permutations(&[vec![1, 2, 0], vec![0, 1, 2]]);
        assert_eq!(g.degrees(), vec![4, 4, 4]);
        assert_eq!(cheeger_exact(&g).unwrap(), q(2));
    }

    #[test]
    fn families() {
        let cyc: Vec<CosetGraph> = (4..=24).map(CosetGraph::cycle).collect();
        let r = tau_family_report(&cyc).unwrap();
        assert_eq!(r.verdict, TauVerdict::TrendToZero);
        assert_eq!(r.inf, qf(2, 12));
        let k4s = vec![CosetGraph::complete(4); 5];
        let r = tau_family_report(&k4s).unwrap();
        assert_eq!(r.inf, q(2));
        assert_eq!(r.verdict, TauVerdict::ConsistentWithTau);
        let pl: Vec<CosetGraph> = [5, 7, 11].map(CosetGraph::projective_line).to_vec();
        assert!(pl.iter().all(|g| g.is_connected() && g.degrees().iter().all(|&d| d == 4)));
        let r = tau_family_report(&pl).unwrap();
        assert_eq!(r.verdict, TauVerdict::ConsistentWithTau);
        assert!(r.inf > qf(1, 4));
        let mixed = vec![CosetGraph::cycle(4), pl[0].clone()];
        assert_eq!(tau_family_report(&mixed), Err(CheegerError::MixedGeneratorSets(1, 2)));
        let csv = family_csv(&tau_family_report(&cyc[..2]).unwrap());
        assert!(csv.starts_with("index,h_lower,h_exact,h_upper\n1,"));
    }
}
