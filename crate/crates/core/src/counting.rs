//! Subgroup censuses of small matrix groups and the counting estimates
//! built on them: ranks, essential subgroups, levels against indices, and
//! subgroup growth from homology against congruence counts.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::finquot::{FiniteMatrixGroup, QuotientError, RingKind};
use crate::fp;
use crate::poly::Q;
use crate::towers::TowerRecord;

pub const CENSUS_BUDGET: usize = 10_000;
const TABLE_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("group order {0} exceeds the census budget {1}")]
    BudgetExceeded(usize, usize),
    #[error("tower record is empty")]
    EmptyTower,
    #[error("census is not of SL(2, Z/m)")]
    NotCongruenceQuotient,
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

type Bits = Vec<u64>;

fn bits_of(n: usize, xs: impl IntoIterator<Item = u32>) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for x in xs {
        b[x as usize / 64] |= 1 << (x % 64);
    }
    b
}

fn has(b: &Bits, x: u32) -> bool {
    b[x as usize / 64] >> (x % 64) & 1 == 1
}

fn members(b: &Bits) -> impl Iterator<Item = u32> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| (0..64).filter(move |k| word >> k & 1 == 1).map(move |k| (w * 64 + k) as u32))
}

fn is_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Multiplication with a full table for small groups.
struct Mult<'a> {
    group: &'a FiniteMatrixGroup,
    table: Option<Vec<u16>>,
    inv: Vec<u32>,
}

impl<'a> Mult<'a> {
    fn new(group: &'a FiniteMatrixGroup) -> Self {
        let n = group.order();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for x in 0..n as u32 {
                for y in 0..n as u32 {
                    t.push(group.mul(x, y) as u16);
                }
            }
            t
        });
        let inv = (0..n as u32).map(|x| group.inverse(x)).collect();
        Mult { group, table, inv }
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        match &self.table {
            Some(t) => t[x as usize * self.group.order() + y as usize] as u32,
            None => self.group.mul(x, y),
        }
    }

    fn conj(&self, x: u32, h: u32) -> u32 {
        self.mul(self.mul(x, h), self.inv[x as usize])
    }

    fn closure(&self, gens: &[u32]) -> Bits {
        let n = self.group.order();
        let id = self.group.identity();
        let mut b = bits_of(n, [id]);
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !has(&b, y) {
                    b[y as usize / 64] |= 1 << (y % 64);
                    stack.push(y);
                }
            }
        }
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupInfo {
    pub order: usize,
    /// Minimal number of generators.
    pub d: usize,
    pub generators: Vec<u32>,
    /// Index of the conjugacy class.
    pub class: usize,
    #[serde(skip)]
    elements: Bits,
}

impl SubgroupInfo {
    pub fn contains(&self, x: u32) -> bool {
        has(&self.elements, x)
    }

    pub fn elements(&self) -> Vec<u32> {
        members(&self.elements).collect()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupInfo) -> bool {
        is_subset(&self.elements, &other.elements)
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroupCensus {
    pub group: FiniteMatrixGroup,
    /// Sorted by (order, elements).
    pub subgroups: Vec<SubgroupInfo>,
    pub classes: usize,
}

/// All subgroups, by conjugacy class. Class representatives of layer k are
/// joined with every cyclic subgroup; a class first met in layer k has
/// d(H) = k, since a k-generated subgroup is the join of a (k-1)-generated
/// one with a cyclic subgroup.
pub fn subgroup_census(group: &FiniteMatrixGroup) -> Result<FiniteGroupCensus, CountingError> {
    subgroup_census_with(group, CENSUS_BUDGET)
}

/// As [`subgroup_census`] with a caller-chosen cap on the group order.
pub fn subgroup_census_with(group: &FiniteMatrixGroup, budget: usize) -> Result<FiniteGroupCensus, CountingError> {
    let n = group.order();
    if n > budget {
        return Err(CountingError::BudgetExceeded(n, budget));
    }
    let m = Mult::new(group);
    let id = group.identity();
    // one generator per cyclic subgroup
    let mut cyclic: HashMap<Bits, u32> = HashMap::new();
    for x in 0..n as u32 {
        cyclic.entry(m.closure(&[x])).or_insert(x);
    }
    let mut cyclic: Vec<(Bits, u32)> = cyclic.into_iter().collect();
    cyclic.sort_by(|a, b| a.0.cmp(&b.0));

    let mut seen: HashMap<Bits, usize> = HashMap::new();
    let mut all: Vec<SubgroupInfo> = Vec::new();
    let mut classes = 0;
    let mut add_class = |elements: Bits, gens: Vec<u32>, d: usize, seen: &mut HashMap<Bits, usize>, all: &mut Vec<SubgroupInfo>| {
        let class = classes;
        classes += 1;
        let order = members(&elements).count();
        for x in 0..n as u32 {
            let conj = bits_of(n, members(&elements).map(|h| m.conj(x, h)));
            if !seen.contains_key(&conj) {
                seen.insert(conj.clone(), all.len());
                let generators = gens.iter().map(|&g| m.conj(x, g)).collect();
                all.push(SubgroupInfo { order, d, generators, class, elements: conj });
            }
        }
    };
    let trivial = bits_of(n, [id]);
    add_class(trivial, vec![], 0, &mut seen, &mut all);
    let mut layer: Vec<usize> = vec![0];
    let mut d = 0;
    while !layer.is_empty() {
        d += 1;
        let mut next = Vec::new();
        // closures in parallel, merged in a fixed order
        let joins: Vec<(Bits, Vec<u32>)> = layer
            .par_iter()
            .flat_map_iter(|&r| {
                let (rep, m, cyclic) = (&all[r], &m, &cyclic);
                cyclic.iter().filter(|(cyc, _)| !is_subset(cyc, &rep.elements)).map(move |(_, g)| {
                    let mut gens = rep.generators.clone();
                    gens.push(*g);
                    (m.closure(&gens), gens)
                })
            })
            .collect();
        for (k, gens) in joins {
            if !seen.contains_key(&k) {
                next.push(all.len());
                add_class(k, gens, d, &mut seen, &mut all);
            }
        }
        layer = next;
    }
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by(|&a, &b| (all[a].order, &all[a].elements).cmp(&(all[b].order, &all[b].elements)));
    let subgroups = order.into_iter().map(|i| all[i].clone()).collect();
    Ok(FiniteGroupCensus { group: group.clone(), subgroups, classes })
}

impl FiniteGroupCensus {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn count(&self) -> usize {
        self.subgroups.len()
    }

    /// sup d(H).
    pub fn rank(&self) -> usize {
        self.subgroups.iter().map(|h| h.d).max().unwrap_or(0)
    }

    pub fn count_of_index(&self, index: usize) -> usize {
        self.subgroups.iter().filter(|h| h.order * index == self.order()).count()
    }

    /// Counts by index, ascending.
    pub fn counts_by_index(&self) -> Vec<(usize, usize)> {
        let mut c: HashMap<usize, usize> = HashMap::new();
        for h in &self.subgroups {
            *c.entry(self.order() / h.order).or_default() += 1;
        }
        let mut v: Vec<_> = c.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// The modulus m when the group is SL(2, Z/m).
    pub fn modulus(&self) -> Option<u32> {
        match self.group.ring().kind() {
            RingKind::Integers(m) if !self.group.projective() => Some(*m),
            _ => None,
        }
    }

    /// Census as JSON: order, d, class and generator matrices per subgroup.
    pub fn to_json(&self) -> serde_json::Value {
        let subs: Vec<serde_json::Value> = self
            .subgroups
            .iter()
            .map(|h| {
                serde_json::json!({
                    "order": h.order,
                    "d": h.d,
                    "class": h.class,
                    "generators": h.generators.iter().map(|&g| self.group.element_json(g)).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "order": self.order(), "count": self.count(), "classes": self.classes, "rank": self.rank(), "subgroups": subs })
    }
}

/// d_2 of the abelianization: |G / G^2 [G, G]| = 2^{d_2}.
pub fn d2_abelianization(group: &FiniteMatrixGroup) -> usize {
    let m = Mult::new(group);
    let n = group.order() as u32;
    let mut gens: Vec<u32> = (0..n).map(|x| m.mul(x, x)).collect();
    for x in 0..n {
        for y in 0..n {
            gens.push(m.mul(m.mul(x, y), m.mul(m.inv[x as usize], m.inv[y as usize])));
        }
    }
    gens.sort_unstable();
    gens.dedup();
    let sub = members(&m.closure(&gens)).count();
    (group.order() / sub).trailing_zeros() as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub rank: usize,
    pub bound: usize,
    pub holds: bool,
}

/// rank(SL(2, Z/p^a)) <= 3d with d the field degree.
pub fn rank_bound_check(census: &FiniteGroupCensus, field_degree: usize) -> RankCheck {
    let rank = census.rank();
    let bound = 3 * field_degree;
    RankCheck { rank, bound, holds: rank <= bound }
}

/// Elements of the kernel of SL(2, Z/m) -> SL(2, Z/i) for i | m.
pub fn congruence_kernel(group: &FiniteMatrixGroup, i: u32) -> Vec<u32> {
    (0..group.order() as u32)
        .filter(|&x| {
            let [a, b, c, d] = group.matrix(x);
            a % i == 1 % i && b % i == 0 && c % i == 0 && d % i == 1 % i
        })
        .collect()
}

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m % d == 0).collect()
}

pub const EXCEPTIONAL_Q: [u32; 5] = [2, 3, 5, 7, 11];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialReport {
    pub modulus: u32,
    pub count: usize,
    pub min_index: Option<usize>,
    /// For prime moduli: q + 1 and whether the minimum equals it.
    pub q_plus_one: Option<usize>,
    pub matches_q_plus_one: Option<bool>,
    pub exceptional: bool,
    /// min_index / m, the linear constant in the level.
    #[serde(serialize_with = "crate::ser::q_opt::serialize")]
    pub index_over_level: Option<Q>,
}

/// Subgroups of SL(2, Z/m) containing no kernel M(I) for a proper
/// divisor I of m (I = 1 excludes the whole group).
pub fn essential_subgroups(census: &FiniteGroupCensus) -> Result<(Vec<usize>, EssentialReport), CountingError> {
    let m = census.modulus().ok_or(CountingError::NotCongruenceQuotient)?;
    let kernels: Vec<Vec<u32>> = divisors(m).into_iter().filter(|&i| i != m).map(|i| congruence_kernel(&census.group, i)).collect();
    let ess: Vec<usize> = (0..census.count())
        .filter(|&k| {
            let h = &census.subgroups[k];
            !kernels.iter().any(|ker| ker.iter().all(|&x| h.contains(x)))
        })
        .collect();
    let min_index = ess.iter().map(|&k| census.order() / census.subgroups[k].order).min();
    let prime = fp::is_prime(m as u64);
    let q1 = prime.then_some(m as usize + 1);
    let report = EssentialReport {
        modulus: m,
        count: ess.len(),
        min_index,
        q_plus_one: q1,
        matches_q_plus_one: q1.zip(min_index).map(|(a, b)| a == b),
        exceptional: EXCEPTIONAL_Q.contains(&m),
        index_over_level: min_index.map(|i| Q::new((i as i64).into(), (m as i64).into())),
    };
    Ok((ess, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub level: u32,
    pub index: usize,
    pub holds: bool,
    /// Smallest c with N(J) <= c [G : H].
    #[serde(with = "crate::ser::q")]
    pub minimal_c: Q,
}

/// The least divisor J of m with M(J) inside H, against c times the index.
pub fn level_vs_index_check(group: &FiniteMatrixGroup, h: &[u32], c: &Q) -> Result<LevelCheck, CountingError> {
    let m = match group.ring().kind() {
        RingKind::Integers(m) if !group.projective() => *m,
        _ => return Err(CountingError::NotCongruenceQuotient),
    };
    let mut in_h = vec![false; group.order()];
    for &x in h {
        in_h[x as usize] = true;
    }
    if !in_h[group.identity() as usize] || h.iter().any(|&x| h.iter().any(|&y| !in_h[group.mul(x, y) as usize])) {
        return Err(CountingError::NotSubgroup);
    }
    let level = divisors(m).into_iter().find(|&i| congruence_kernel(group, i).iter().all(|&x| in_h[x as usize])).expect("M(m) is trivial");
    let index = group.order() / h.len();
    let minimal_c = Q::new((level as i64).into(), (index as i64).into());
    Ok(LevelCheck { level, index, holds: &minimal_c <= c, minimal_c })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRow {
    pub n: usize,
    /// 2^{d_2} - 1 subgroups of index n from the tower level of index n/2.
    #[serde(serialize_with = "ser_opt_bigint")]
    pub s_n_lower: Option<BigInt>,
    /// Subgroups of index n summed over the censused SL(2, Z/m).
    pub census_c_n: usize,
    /// n^{b log n / log log n}; absent for n < 3.
    pub curve: Option<f64>,
}

fn ser_opt_bigint<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountTable {
    /// inf d_2 / index over the tower prefix.
    #[serde(with = "crate::ser::q")]
    pub lambda: Q,
    /// Least b with census c_n <= n^{b log n / log log n} on the sample.
    pub b: f64,
    pub rows: Vec<CountRow>,
}

/// Exponential lower bounds on subgroup counts from a d_2 tower against
/// congruence subgroup counts from censuses of SL(2, Z/m).
pub fn sn_vs_cn_table(tower: &TowerRecord, censuses: &[FiniteGroupCensus]) -> Result<CountTable, CountingError> {
    if tower.levels.is_empty() {
        return Err(CountingError::EmptyTower);
    }
    let lambda = tower.levels.iter().map(|l| Q::new(l.d_p.into(), l.degree.into())).min().unwrap();
    let mut by_index: HashMap<usize, usize> = HashMap::new();
    for c in censuses {
        for (i, k) in c.counts_by_index() {
            *by_index.entry(i).or_default() += k;
        }
    }
    let mut ns: Vec<usize> = by_index.keys().copied().collect();
    ns.extend(tower.levels.iter().map(|l| 2 * l.degree as usize));
    ns.sort_unstable();
    ns.dedup();
    let shape = |n: usize| {
        let l = (n as f64).ln();
        l * l / l.ln()
    };
    let b = ns
        .iter()
        .filter(|&&n| n >= 3)
        .map(|&n| (by_index.get(&n).copied().unwrap_or(0).max(1) as f64).ln() / shape(n))
        .fold(0.0, f64::max);
    let rows = ns
        .into_iter()
        .map(|n| {
            let s_n_lower = tower.levels.iter().find(|l| 2 * l.degree as usize == n).map(|l| (BigInt::one() << l.d_p) - 1);
            let curve = (n >= 3).then(|| (b * shape(n)).exp());
            CountRow { n, s_n_lower, census_c_n: by_index.get(&n).copied().unwrap_or(0), curve }
        })
        .collect();
    Ok(CountTable { lambda, b, rows })
}

/// Columns n, s_n_lower, census_c_n, curve.
pub fn count_table_csv(t: &CountTable) -> String {
    #[derive(Serialize)]
    struct Row {
        n: usize,
        s_n_lower: String,
        census_c_n: usize,
        curve: String,
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &t.rows {
        let row = Row {
            n: r.n,
            s_n_lower: r.s_n_lower.as_ref().map(|x| x.to_string()).unwrap_or_default(),
            census_c_n: r.census_c_n,
            curve: r.curve.map(|c| format!("{c:.6e}")).unwrap_or_default(),
        };
        w.serialize(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

/// Largest omega(m) log log m / log m over 3 <= m <= max_m, where omega
/// counts distinct prime factors.
pub fn omega_ratio_max(max_m: u64) -> f64 {
    let mut omega = vec![0u32; max_m as usize + 1];
    for p in 2..=max_m as usize {
        if omega[p] == 0 {
            for k in (p..=max_m as usize).step_by(p) {
                omega[k] += 1;
            }
        }
    }
    (3..=max_m as usize)
        .map(|m| {
            let l = (m as f64).ln();
            omega[m] as f64 * l.ln() / l
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn census(m: u32) -> FiniteGroupCensus {
        subgroup_census(&FiniteMatrixGroup::sl_mod(m).unwrap()).unwrap()
    }

    #[test]
    fn small_censuses() {
        let s3 = census(2);
        assert_eq!(s3.count(), 6);
        assert_eq!(s3.classes, 4);
        assert_eq!(s3.rank(), 2);
        let triv = census(1);
        assert_eq!(triv.order(), 1);
        assert_eq!(triv.count(), 1);
        let c3 = census(3);
        assert_eq!(c3.order(), 24);
        // SL(2,3): 1, Z2, 4 Z3, 3 Z4, Z6 x4, Q8, whole
        assert_eq!(c3.count(), 15);
        assert!(rank_bound_check(&c3, 1).holds);
    }

    #[test]
    fn index_two_counts() {
        for m in [2, 3, 4, 5, 6] {
            let c = census(m);
            let d2 = d2_abelianization(&c.group);
            assert_eq!(c.count_of_index(2), (1 << d2) - 1, "m = {m}");
        }
    }

    #[test]
    fn essential_examples() {
        let (_, r5) = essential_subgroups(&census(5)).unwrap();
        assert_eq!(r5.min_index, Some(5));
        assert!(r5.exceptional);
        assert_eq!(r5.matches_q_plus_one, Some(false));
        let c4 = census(4);
        let (ess, _) = essential_subgroups(&c4).unwrap();
        let m2 = congruence_kernel(&c4.group, 2);
        assert_eq!(m2.len(), 8);
        assert!(ess.iter().all(|&k| !m2.iter().all(|&x| c4.subgroups[k].contains(x))));
        assert!(ess.len() < c4.count());
    }

    #[test]
    fn levels() {
        let g4 = FiniteMatrixGroup::sl_mod(4).unwrap();
        let m2 = congruence_kernel(&g4, 2);
        let r = level_vs_index_check(&g4, &m2, &q(1)).unwrap();
        assert_eq!((r.level, r.index, r.holds), (2, 6, true));
        let all: Vec<u32> = (0..48).collect();
        let r = level_vs_index_check(&g4, &all, &q(1)).unwrap();
        assert_eq!((r.level, r.index), (1, 1));
        let c5 = census(5);
        let (ess, rep) = essential_subgroups(&c5).unwrap();
        let k = *ess.iter().find(|&&k| c5.order() / c5.subgroups[k].order == rep.min_index.unwrap()).unwrap();
        let r = level_vs_index_check(&c5.group, &c5.subgroups[k].elements(), &q(1)).unwrap();
        assert_eq!((r.level, r.index, r.holds), (5, 5, true));
    }

    #[test]
    fn counting_table() {
        use crate::towers::TowerRecordLevel;
        let tower = TowerRecord { levels: (1..=4).map(|i| TowerRecordLevel { degree: i, d_p: i, vertex_count: None, chi_sing_minus: None }).collect() };
        let cs: Vec<_> = (2..=4).map(census).collect();
        let t = sn_vs_cn_table(&tower, &cs).unwrap();
        assert_eq!(t.lambda, q(1));
        let row = t.rows.iter().find(|r| r.n == 8).unwrap();
        assert_eq!(row.s_n_lower, Some(BigInt::from(15)));
        for r in t.rows.iter().filter(|r| r.n >= 3) {
            assert!(r.census_c_n as f64 <= r.curve.unwrap() * (1.0 + 1e-9));
        }
        assert_eq!(sn_vs_cn_table(&TowerRecord { levels: vec![] }, &cs), Err(CountingError::EmptyTower));
        assert!(count_table_csv(&t).starts_with("n,s_n_lower,census_c_n,curve\n"));
    }

    #[test]
    fn omega_constant() {
        assert!(omega_ratio_max(100_000) <= 1.3841);
    }
}
