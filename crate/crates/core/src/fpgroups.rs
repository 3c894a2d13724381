//! Finitely presented groups and their finite-index subgroups.
//!
//! A word is a sequence of nonzero integers: `k` is the k-th generator
//! (1-based) and `-k` its inverse. In JSON a relator may also be a string
//! over single-letter generator names, with capitals as inverses.

use std::collections::{HashMap, HashSet, VecDeque};

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{log2_enclosure, Decision, Enclosure, DEFAULT_BITS};
use crate::linalg::rank_mod_p;
use crate::poly::Q;

pub type Word = Vec<i32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("presentation has no generators")]
    NoGenerators,
    #[error("bad word {word:?}: {reason}")]
    BadWord { word: String, reason: String },
    #[error("invalid coset table: {0}")]
    InvalidTable(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("homomorphism to Z is not surjective (exponent gcd {0})")]
    NotSurjective(i64),
    #[error("relator {0} is not killed by the homomorphism")]
    RelatorNotKilled(usize),
    #[error("expected {want} exponents, got {got}")]
    WrongArity { want: usize, got: usize },
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.pop();
        w.remove(0);
    }
    w
}

/// Smallest rotation of `w` or its inverse, for deduplicating relators.
fn cyclic_canonical(w: &[i32]) -> Word {
    let mut best: Option<Word> = None;
    for v in [w.to_vec(), inverse(w)] {
        for k in 0..v.len().max(1) {
            let mut r = v[k..].to_vec();
            r.extend_from_slice(&v[..k]);
            if best.as_ref().map_or(true, |b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct Presentation {
    gens: Vec<String>,
    rels: Vec<Word>,
}

/// A word as it appears in JSON: letters or signed generator numbers.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSpec {
    Letters(String),
    Ints(Vec<i32>),
}

impl WordSpec {
    pub fn resolve(&self, gens: &[String]) -> Result<Word, GroupError> {
        match self {
            WordSpec::Ints(w) => {
                let n = gens.len() as i32;
                match w.iter().find(|&&x| x == 0 || x.abs() > n) {
                    Some(x) => Err(GroupError::BadWord { word: format!("{w:?}"), reason: format!("letter {x} out of range") }),
                    None => Ok(w.clone()),
                }
            }
            WordSpec::Letters(s) => parse_word(gens, s),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    gens: Vec<String>,
    rels: Vec<WordSpec>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = GroupError;
    fn try_from(raw: RawPresentation) -> Result<Self, GroupError> {
        let gens = raw.gens;
        let rels = raw
            .rels
            .into_iter()
            .map(|r| r.resolve(&gens))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(gens, rels)
    }
}

impl From<Presentation> for RawPresentation {
    fn from(p: Presentation) -> Self {
        let letters = p.letter_names();
        let rels = p
            .rels
            .iter()
            .map(|w| if letters { WordSpec::Letters(p.word_to_string(w)) } else { WordSpec::Ints(w.clone()) })
            .collect();
        RawPresentation { gens: p.gens, rels }
    }
}

/// Parses a word over single-letter generator names; capitals invert.
pub fn parse_word(gens: &[String], s: &str) -> Result<Word, GroupError> {
    let bad = |reason: &str| GroupError::BadWord { word: s.to_string(), reason: reason.to_string() };
    let mut w = Vec::new();
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        let lower = ch.to_lowercase().to_string();
        let Some(i) = gens.iter().position(|g| *g == lower) else {
            return Err(bad(&format!("unknown letter {ch}")));
        };
        let k = i as i32 + 1;
        w.push(if ch.is_uppercase() { -k } else { k });
    }
    Ok(w)
}

fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

impl Presentation {
    /// Relators are freely reduced and empty ones dropped.
    pub fn new(gens: Vec<String>, rels: Vec<Word>) -> Result<Self, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        let n = gens.len() as i32;
        let mut out = Vec::new();
        for w in rels {
            if let Some(&x) = w.iter().find(|&&x| x == 0 || x.abs() > n) {
                return Err(GroupError::BadWord { word: format!("{w:?}"), reason: format!("letter {x} out of range") });
            }
            let r = free_reduce(&w);
            if !r.is_empty() {
                out.push(r);
            }
        }
        Ok(Presentation { gens, rels: out })
    }

    pub fn free(n: usize) -> Self {
        Presentation { gens: default_names(n.max(1)), rels: vec![] }
    }

    pub fn from_words(n: usize, rels: Vec<Word>) -> Result<Self, GroupError> {
        Self::new(default_names(n), rels)
    }

    pub fn parse(gens: &[&str], rels: &[&str]) -> Result<Self, GroupError> {
        let gens: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let rels = rels.iter().map(|r| parse_word(&gens, r)).collect::<Result<Vec<_>, _>>()?;
        Self::new(gens, rels)
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn rels(&self) -> &[Word] {
        &self.rels
    }

    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self, GroupError> {
        let mut rels = self.rels.clone();
        rels.extend(extra);
        Self::new(self.gens.clone(), rels)
    }

    fn letter_names(&self) -> bool {
        self.gens.iter().all(|g| g.len() == 1 && g.chars().all(|c| c.is_ascii_lowercase()))
    }

    pub fn word_to_string(&self, w: &[i32]) -> String {
        if self.letter_names() {
            w.iter()
                .map(|&x| {
                    let g = &self.gens[x.unsigned_abs() as usize - 1];
                    if x < 0 {
                        g.to_uppercase()
                    } else {
                        g.clone()
                    }
                })
                .collect()
        } else {
            let parts: Vec<String> = w
                .iter()
                .map(|&x| {
                    let g = &self.gens[x.unsigned_abs() as usize - 1];
                    if x < 0 {
                        format!("{g}^-1")
                    } else {
                        g.clone()
                    }
                })
                .collect();
            parts.join(" ")
        }
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.rels.iter().map(|w| exponent_sums(w, self.gens.len())).collect()
    }
}

pub fn exponent_sums(w: &[i32], n: usize) -> Vec<i64> {
    let mut row = vec![0i64; n];
    for &x in w {
        row[x.unsigned_abs() as usize - 1] += x.signum() as i64;
    }
    row
}

/// dim H_1(G; F_p), by elimination over F_p.
pub fn d_p(pres: &Presentation, p: u64) -> usize {
    pres.num_gens() - rank_mod_p(&pres.exponent_matrix(), p)
}

/// Same as [`d_p`], read off the Smith normal form over Z.
pub fn d_p_smith(pres: &Presentation, p: u64) -> usize {
    crate::smith::d_p_from_smith(&pres.exponent_matrix(), pres.num_gens(), p)
}

/// Right action of a presentation's generators on the cosets of a subgroup.
/// Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupTable {
    parent: Presentation,
    action: Vec<Vec<usize>>,
}

impl SubgroupTable {
    /// `action[g][c]` is the coset `c · x_g`.
    pub fn new(parent: Presentation, action: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let bad = |s: String| Err(GroupError::InvalidTable(s));
        if action.len() != parent.num_gens() {
            return bad(format!("{} generator rows for {} generators", action.len(), parent.num_gens()));
        }
        let n = action.first().map_or(0, |r| r.len());
        if n == 0 {
            return bad("empty table".into());
        }
        for (g, row) in action.iter().enumerate() {
            let mut seen = vec![false; n];
            if row.len() != n {
                return bad(format!("row {g} has length {}", row.len()));
            }
            for &c in row {
                if c >= n || std::mem::replace(&mut seen[c], true) {
                    return bad(format!("generator {g} is not a permutation"));
                }
            }
        }
        let t = SubgroupTable { parent, action };
        if t.orbit_of_zero() != n {
            return bad("action is not transitive".into());
        }
        for (i, r) in t.parent.rels.iter().enumerate() {
            if (0..n).any(|c| t.apply(c, r) != c) {
                return bad(format!("relator {i} acts nontrivially"));
            }
        }
        Ok(t)
    }

    pub fn trivial(parent: &Presentation) -> Self {
        SubgroupTable { parent: parent.clone(), action: vec![vec![0]; parent.num_gens()] }
    }

    pub fn index(&self) -> usize {
        self.action[0].len()
    }

    pub fn parent(&self) -> &Presentation {
        &self.parent
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    fn orbit_of_zero(&self) -> usize {
        let inv = self.inverse_action();
        let n = self.index();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(c) = stack.pop() {
            for row in self.action.iter().chain(inv.iter()) {
                let d = row[c];
                if !seen[d] {
                    seen[d] = true;
                    count += 1;
                    stack.push(d);
                }
            }
        }
        count
    }

    fn inverse_action(&self) -> Vec<Vec<usize>> {
        self.action
            .iter()
            .map(|row| {
                let mut inv = vec![0; row.len()];
                for (c, &d) in row.iter().enumerate() {
                    inv[d] = c;
                }
                inv
            })
            .collect()
    }

    pub fn step(&self, c: usize, letter: i32) -> usize {
        let g = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            self.action[g][c]
        } else {
            self.action[g].iter().position(|&d| d == c).expect("permutation")
        }
    }

    pub fn apply(&self, c: usize, w: &[i32]) -> usize {
        w.iter().fold(c, |c, &x| self.step(c, x))
    }

    pub fn contains(&self, w: &[i32]) -> bool {
        self.apply(0, w) == 0
    }

    /// Normal iff every coset has the same stabilizer as coset 0, i.e. the
    /// action commutes with a permutation sending 0 to each coset.
    pub fn is_normal(&self) -> bool {
        let inv = self.inverse_action();
        (0..self.index()).all(|c| self.relabel_exists(c, &inv))
    }

    fn relabel_exists(&self, c: usize, inv: &[Vec<usize>]) -> bool {
        let n = self.index();
        let mut map = vec![usize::MAX; n];
        map[0] = c;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for (row, irow) in self.action.iter().zip(inv) {
                for (a, b) in [(row[x], row[map[x]]), (irow[x], irow[map[x]])] {
                    if map[a] == usize::MAX {
                        map[a] = b;
                        stack.push(a);
                    } else if map[a] != b {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Table of the intersection of two subgroups of the same group.
pub fn intersect_tables(a: &SubgroupTable, b: &SubgroupTable) -> SubgroupTable {
    assert_eq!(a.parent.num_gens(), b.parent.num_gens());
    let k = a.parent.num_gens();
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order = vec![(0, 0)];
    ids.insert((0, 0), 0);
    let mut i = 0;
    while i < order.len() {
        let (x, y) = order[i];
        for g in 0..k {
            for letter in [g as i32 + 1, -(g as i32) - 1] {
                let next = (a.step(x, letter), b.step(y, letter));
                if !ids.contains_key(&next) {
                    ids.insert(next, order.len());
                    order.push(next);
                }
            }
        }
        i += 1;
    }
    let action = (0..k).map(|g| order.iter().map(|&(x, y)| ids[&(a.action[g][x], b.action[g][y])]).collect()).collect();
    SubgroupTable { parent: a.parent.clone(), action }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transversal {
    BreadthFirst,
    DepthFirst,
}

pub fn reidemeister_schreier(t: &SubgroupTable) -> Presentation {
    reidemeister_schreier_with(t, Transversal::BreadthFirst)
}

/// Schreier generators are the non-tree edges `(c, g)` of a spanning tree of
/// the coset graph; every parent relator is rewritten from every coset.
pub fn reidemeister_schreier_with(t: &SubgroupTable, strategy: Transversal) -> Presentation {
    let n = t.index();
    let k = t.parent.num_gens();
    let inv = t.inverse_action();
    let mut tree: HashSet<(usize, usize)> = HashSet::new();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut frontier = VecDeque::from([0usize]);
    while let Some(c) = match strategy {
        Transversal::BreadthFirst => frontier.pop_front(),
        Transversal::DepthFirst => frontier.pop_back(),
    } {
        let gens: Vec<usize> = match strategy {
            Transversal::BreadthFirst => (0..k).collect(),
            Transversal::DepthFirst => (0..k).rev().collect(),
        };
        for g in gens {
            let d = t.action[g][c];
            if !seen[d] {
                seen[d] = true;
                tree.insert((c, g));
                frontier.push_back(d);
            }
            let e = inv[g][c];
            if !seen[e] {
                seen[e] = true;
                tree.insert((e, g));
                frontier.push_back(e);
            }
        }
    }
    let mut label: HashMap<(usize, usize), i32> = HashMap::new();
    let mut names = Vec::new();
    for c in 0..n {
        for g in 0..k {
            if !tree.contains(&(c, g)) {
                label.insert((c, g), names.len() as i32 + 1);
                names.push(if n == 1 { t.parent.gens[g].clone() } else { format!("{}_{}", t.parent.gens[g], c) });
            }
        }
    }
    let mut rels = Vec::new();
    for r in &t.parent.rels {
        for start in 0..n {
            let mut c = start;
            let mut w = Vec::new();
            for &x in r {
                let g = x.unsigned_abs() as usize - 1;
                if x > 0 {
                    if let Some(&s) = label.get(&(c, g)) {
                        w.push(s);
                    }
                    c = t.action[g][c];
                } else {
                    let d = inv[g][c];
                    if let Some(&s) = label.get(&(d, g)) {
                        w.push(-s);
                    }
                    c = d;
                }
            }
            rels.push(w);
        }
    }
    Presentation::new(names, rels).expect("Schreier generators are in range")
}

/// Removes trivial and duplicate relators and eliminates generators that a
/// relator of length one or two expresses directly.
pub fn simplify(pres: &Presentation) -> Presentation {
    let mut gens = pres.gens.clone();
    let mut rels: Vec<Word> = pres.rels.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
    loop {
        let pick = rels.iter().position(|r| r.len() == 1 || (r.len() == 2 && r[0].abs() != r[1].abs()));
        let Some(i) = pick else { break };
        let r = rels.remove(i);
        let x = r[0].abs();
        // x^e = replacement
        let replacement: Word = if r.len() == 1 { vec![] } else { vec![-r[1] * r[0].signum()] };
        rels = rels
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                for &l in w {
                    if l.abs() == x {
                        if l > 0 {
                            out.extend_from_slice(&replacement);
                        } else {
                            out.extend(inverse(&replacement));
                        }
                    } else {
                        out.push(l);
                    }
                }
                // renumber generators above x
                out.iter().map(|&l| if l.abs() > x { l - l.signum() } else { l }).collect::<Word>()
            })
            .map(|w| cyclic_reduce(&w))
            .filter(|w| !w.is_empty())
            .collect();
        gens.remove(x as usize - 1);
    }
    let mut seen = HashSet::new();
    rels.retain(|r| seen.insert(cyclic_canonical(r)));
    if gens.is_empty() {
        // trivial group: keep one generator killed by a relator
        return Presentation { gens: vec!["a".into()], rels: vec![vec![1]] };
    }
    Presentation { gens, rels }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_index: usize,
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_index: 12, max_nodes: 10_000_000 }
    }
}

const UNDEF: usize = usize::MAX;

#[derive(Clone)]
struct Partial {
    rows: Vec<Vec<usize>>,
    live: usize,
}

impl Partial {
    fn define(&mut self, c: usize, col: usize, d: usize) {
        self.rows[c][col] = d;
        self.rows[d][col ^ 1] = c;
    }

    /// Scans every relator from every live coset until nothing new is
    /// deduced. False on a coincidence.
    fn deduce(&mut self, rels: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for r in rels {
                for c in 0..self.live {
                    let mut f = c;
                    let mut i = 0;
                    while i < r.len() && self.rows[f][r[i]] != UNDEF {
                        f = self.rows[f][r[i]];
                        i += 1;
                    }
                    if i == r.len() {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let mut b = c;
                    let mut j = r.len();
                    while j > i && self.rows[b][r[j - 1] ^ 1] != UNDEF {
                        b = self.rows[b][r[j - 1] ^ 1];
                        j -= 1;
                    }
                    if j == i {
                        if f != b {
                            return false;
                        }
                    } else if j == i + 1 {
                        if self.rows[f][r[i]] != UNDEF || self.rows[b][r[i] ^ 1] != UNDEF {
                            return false;
                        }
                        self.define(f, r[i], b);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        (0..self.live).find_map(|c| self.rows[c].iter().position(|&x| x == UNDEF).map(|col| (c, col)))
    }
}

pub fn low_index_subgroups(pres: &Presentation, n: usize) -> Result<Vec<SubgroupTable>, GroupError> {
    low_index_subgroups_with(pres, n, Budget::default())
}

/// All subgroups of index at most `n`, one standardized coset table each,
/// sorted by index and then lexicographically by table.
pub fn low_index_subgroups_with(pres: &Presentation, n: usize, budget: Budget) -> Result<Vec<SubgroupTable>, GroupError> {
    if n > budget.max_index {
        return Err(GroupError::BudgetExceeded(format!("index {n} above cap {}", budget.max_index)));
    }
    let k = pres.num_gens();
    let rels: Vec<Vec<usize>> = pres
        .rels
        .iter()
        .map(|w| w.iter().map(|&x| 2 * (x.unsigned_abs() as usize - 1) + usize::from(x < 0)).collect())
        .collect();
    let start = Partial { rows: vec![vec![UNDEF; 2 * k]; n.max(1)], live: 1 };
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut stack = Vec::new();
    let mut s = start;
    if s.deduce(&rels) {
        stack.push(s);
    }
    while let Some(s) = stack.pop() {
        nodes += 1;
        if nodes > budget.max_nodes {
            return Err(GroupError::BudgetExceeded(format!("more than {} search nodes", budget.max_nodes)));
        }
        let Some((c, col)) = s.first_undefined() else {
            let action = (0..k).map(|g| (0..s.live).map(|c| s.rows[c][2 * g]).collect()).collect();
            out.push(SubgroupTable { parent: pres.clone(), action });
            continue;
        };
        let mut children = Vec::new();
        for d in 0..s.live {
            if s.rows[d][col ^ 1] == UNDEF {
                let mut t = s.clone();
                t.define(c, col, d);
                if t.deduce(&rels) {
                    children.push(t);
                }
            }
        }
        if s.live < n {
            let mut t = s.clone();
            t.live += 1;
            t.define(c, col, s.live);
            if t.deduce(&rels) {
                children.push(t);
            }
        }
        stack.extend(children.into_iter().rev());
    }
    out.sort_by(|a, b| (a.index(), &a.action).cmp(&(b.index(), &b.action)));
    Ok(out)
}

fn check_phi(pres: &Presentation, phi: &[i64]) -> Result<(), GroupError> {
    if phi.len() != pres.num_gens() {
        return Err(GroupError::WrongArity { want: pres.num_gens(), got: phi.len() });
    }
    let g = phi.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g != 1 {
        return Err(GroupError::NotSurjective(g));
    }
    for (i, r) in pres.rels.iter().enumerate() {
        let s: i64 = exponent_sums(r, phi.len()).iter().zip(phi).map(|(a, b)| a * b).sum();
        if s != 0 {
            return Err(GroupError::RelatorNotKilled(i));
        }
    }
    Ok(())
}

/// Table of phi^{-1}(iZ): cosets are residues mod i.
pub fn cyclic_table(pres: &Presentation, phi: &[i64], i: usize) -> Result<SubgroupTable, GroupError> {
    check_phi(pres, phi)?;
    let m = i as i64;
    let action = phi.iter().map(|&e| (0..i).map(|c| (c as i64 + e).rem_euclid(m) as usize).collect()).collect();
    Ok(SubgroupTable { parent: pres.clone(), action })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerLevel {
    pub index: usize,
    pub d_p: Vec<(u64, usize)>,
}

pub fn cyclic_tower(pres: &Presentation, phi: &[i64], depth: usize, primes: &[u64]) -> Result<Vec<TowerLevel>, GroupError> {
    check_phi(pres, phi)?;
    (1..=depth)
        .map(|i| {
            let sub = reidemeister_schreier(&cyclic_table(pres, phi, i)?);
            Ok(TowerLevel { index: i, d_p: primes.iter().map(|&p| (p, d_p(&sub, p))).collect() })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsCheck {
    pub holds: bool,
    pub margin: Q,
}

/// d^2/4 - |R| + |X| - d > 0.
pub fn golod_shafarevich_check(d: u64, num_relators: u64, num_generators: u64) -> GsCheck {
    let d = Q::from_integer(d.into());
    let margin = &d * &d / Q::from_integer(4.into()) - Q::from_integer(num_relators.into())
        + Q::from_integer(num_generators.into())
        - d;
    GsCheck { holds: margin > Q::zero(), margin }
}

#[derive(Clone, Debug)]
pub struct GsChained {
    pub d: u64,
    pub value: Enclosure,
    pub positive: Decision,
}

/// (d - 6 log2(d-1) - 12)^2 / 4 - 3d + 2, enclosed.
pub fn gs_chained(d: u64) -> GsChained {
    assert!(d >= 2);
    let lg = log2_enclosure(&Q::from_integer((d - 1).into()), DEFAULT_BITS);
    let inner = &Enclosure::int(d as i64 - 12) - &lg.scale(&Q::from_integer(6.into()));
    let value = &inner.square().scale(&Q::new(1.into(), 4.into())) + &Enclosure::int(2 - 3 * d as i64);
    let positive = value.is_positive();
    GsChained { d, value, positive }
}

/// One level H_i >= J_i >= K_i, given by indices in G and d(J_i/K_i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargenessTriple {
    pub index_h: u64,
    pub index_j: u64,
    pub d_jk: u64,
    pub abelian: bool,
}

#[derive(Clone, Debug)]
pub struct LargenessReport {
    pub abelian: bool,
    pub log_ratios: Vec<Enclosure>,
    pub condition_ii: bool,
    pub d_ratios: Vec<Q>,
    pub sup_d_ratio: Q,
    pub tail_inf_d_ratio: Q,
    pub condition_iii: bool,
}

impl LargenessReport {
    pub fn consistent(&self) -> bool {
        self.abelian && self.condition_ii && self.condition_iii
    }
}

/// Finite-prefix reading of the three conditions. (ii): log2[H:J]/[G:H]
/// is never certainly decreasing and ends certainly above `log_threshold`.
/// (iii): the ratios d(J/K)/[G:J] over the second half of the prefix stay
/// at least half their supremum.
pub fn largeness_conditions(data: &[LargenessTriple], log_threshold: &Q) -> LargenessReport {
    let abelian = !data.is_empty() && data.iter().all(|t| t.abelian);
    let log_ratios: Vec<Enclosure> = data
        .iter()
        .map(|t| {
            let hj = Q::new(t.index_j.into(), t.index_h.into());
            log2_enclosure(&hj, DEFAULT_BITS).scale(&Q::new(1.into(), t.index_h.into()))
        })
        .collect();
    let never_drops = log_ratios.windows(2).all(|w| w[1].hi >= w[0].lo);
    let condition_ii = never_drops && log_ratios.last().is_some_and(|e| e.ge(log_threshold) == Decision::True);
    let d_ratios: Vec<Q> = data.iter().map(|t| Q::new(t.d_jk.into(), t.index_j.into())).collect();
    let sup_d_ratio = d_ratios.iter().max().cloned().unwrap_or_else(Q::zero);
    let tail_inf_d_ratio = d_ratios[d_ratios.len() / 2..].iter().min().cloned().unwrap_or_else(Q::zero);
    let condition_iii = sup_d_ratio > Q::zero() && &tail_inf_d_ratio * Q::from_integer(2.into()) >= sup_d_ratio;
    LargenessReport { abelian, log_ratios, condition_ii, d_ratios, sup_d_ratio, tail_inf_d_ratio, condition_iii }
}

/// Rank of a free group recognized from a presentation with no relators
/// after simplification.
pub fn free_rank(pres: &Presentation) -> Option<usize> {
    let s = simplify(pres);
    if s.rels.is_empty() {
        Some(s.num_gens())
    } else if s.rels == vec![vec![1]] && s.num_gens() == 1 {
        Some(0)
    } else {
        None
    }
}
