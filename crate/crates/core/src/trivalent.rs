//! Short cycles and small b1 = 2 subgraphs in trivalent multigraphs.
//!
//! Loops and parallel edges are allowed. Radii of balls are handled in
//! doubled units: an edge `uw` lies in the ball of doubled radius `R`
//! about `v` iff `d(u) + d(w) + 1 <= R`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{log2_enclosure, Decision, Enclosure, DEFAULT_BITS};
use crate::poly::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} has degree {1}, expected 3")]
    NotTrivalent(usize, usize),
    #[error("edge endpoint {0} out of range")]
    BadVertex(usize),
    #[error("graph is empty")]
    Empty,
    #[error("first Betti number {0} is below 2")]
    FirstBettiTooSmall(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivalentGraph {
    #[serde(rename = "V")]
    pub v: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TrivalentGraph {
    pub fn new(v: usize, edges: Vec<[usize; 2]>) -> Result<Self, GraphError> {
        let g = TrivalentGraph { v, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.v == 0 {
            return Err(GraphError::Empty);
        }
        let mut deg = vec![0; self.v];
        for &[a, b] in &self.edges {
            for x in [a, b] {
                if x >= self.v {
                    return Err(GraphError::BadVertex(x));
                }
                deg[x] += 1;
            }
        }
        match deg.iter().position(|&d| d != 3) {
            Some(i) => Err(GraphError::NotTrivalent(i, deg[i])),
            None => Ok(()),
        }
    }

    /// (neighbour, edge index) pairs; a loop appears twice.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.v];
        for (i, &[a, b]) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    pub fn num_components(&self) -> usize {
        let adj = self.incidence();
        let mut seen = vec![false; self.v];
        let mut count = 0;
        for s in 0..self.v {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &(y, _) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    pub fn b1(&self) -> usize {
        self.edges.len() + self.num_components() - self.v
    }

    pub fn complete4() -> Self {
        Self::new(4, vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]).unwrap()
    }

    pub fn theta() -> Self {
        Self::new(2, vec![[0, 1], [0, 1], [0, 1]]).unwrap()
    }

    pub fn cube() -> Self {
        let mut e = Vec::new();
        for a in 0..8usize {
            for bit in [1, 2, 4] {
                if a & bit == 0 {
                    e.push([a, a | bit]);
                }
            }
        }
        Self::new(8, e).unwrap()
    }

    pub fn petersen() -> Self {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push([i, (i + 1) % 5]);
            e.push([i, i + 5]);
            e.push([5 + i, 5 + (i + 2) % 5]);
        }
        Self::new(10, e).unwrap()
    }
}

/// BFS data about one root: tree edges and the non-tree edges
/// sorted by the doubled radius at which they enter the ball.
struct Ball {
    parent: Vec<Option<(usize, usize)>>,
    extra: Vec<(usize, usize)>,
}

fn ball(g: &TrivalentGraph, adj: &[Vec<(usize, usize)>], root: usize) -> Ball {
    let mut dist = vec![usize::MAX; g.v];
    let mut parent = vec![None; g.v];
    let mut tree = vec![false; g.edges.len()];
    dist[root] = 0;
    let mut q = VecDeque::from([root]);
    while let Some(x) = q.pop_front() {
        for &(y, e) in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                parent[y] = Some((x, e));
                tree[e] = true;
                q.push_back(y);
            }
        }
    }
    let mut extra: Vec<(usize, usize)> = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(i, &[a, b])| !tree[i] && dist[a] != usize::MAX && dist[b] != usize::MAX)
        .map(|(i, &[a, b])| (dist[a] + dist[b] + 1, i))
        .collect();
    extra.sort_unstable();
    Ball { parent, extra }
}

impl Ball {
    fn path_to_root(&self, mut x: usize) -> Vec<(usize, usize)> {
        // (vertex, edge to its parent)
        let mut out = Vec::new();
        while let Some((p, e)) = self.parent[x] {
            out.push((x, e));
            x = p;
        }
        out
    }
}

/// Upper-conservative comparison of an integer against an enclosed bound.
fn at_most(count: usize, bound: &Enclosure) -> Decision {
    bound.ge(&Q::from_integer(count.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
    pub length: usize,
    pub bound: Enclosure,
    pub holds: Decision,
}

/// 2 log2((V+2)/3) + 2.
pub fn short_cycle_bound(v: usize) -> Enclosure {
    let l = log2_enclosure(&Q::new((v as i64 + 2).into(), 3.into()), DEFAULT_BITS);
    &l.scale(&Q::from_integer(2.into())) + &Enclosure::int(2)
}

/// 6 log2(b1 - 1) + 12.
pub fn b1_two_bound(b1: usize) -> Enclosure {
    let l = log2_enclosure(&Q::from_integer((b1 as i64 - 1).into()), DEFAULT_BITS);
    &l.scale(&Q::from_integer(6.into())) + &Enclosure::int(12)
}

/// A shortest simple closed curve, found from the root whose first
/// non-tree edge enters the ball soonest.
pub fn short_cycle(g: &TrivalentGraph) -> Result<CycleReport, GraphError> {
    g.validate()?;
    let adj = g.incidence();
    let mut best: Option<(usize, usize, Ball)> = None;
    for root in 0..g.v {
        let b = ball(g, &adj, root);
        if let Some(&(key, e)) = b.extra.first() {
            if best.as_ref().map_or(true, |(k, _, _)| key < *k) {
                best = Some((key, e, b));
            }
        }
    }
    let (_, e, b) = best.expect("a trivalent graph has a cycle");
    let [u, w] = g.edges[e];
    let mut on_u_side = vec![false; g.v];
    let mut x = u;
    on_u_side[x] = true;
    while let Some((p, _)) = b.parent[x] {
        x = p;
        on_u_side[x] = true;
    }
    let mut w_side = Vec::new();
    let mut x = w;
    while !on_u_side[x] {
        let (p, pe) = b.parent[x].unwrap();
        w_side.push((x, pe));
        x = p;
    }
    let lca = x;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut x = u;
    while x != lca {
        let (p, pe) = b.parent[x].unwrap();
        vertices.push(x);
        edges.push(pe);
        x = p;
    }
    vertices.push(lca);
    for &(y, pe) in w_side.iter().rev() {
        vertices.push(y);
        edges.push(pe);
    }
    edges.push(e);
    let length = edges.len();
    let bound = short_cycle_bound(g.v);
    let holds = at_most(length, &bound);
    Ok(CycleReport { edges, vertices, length, bound, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchPath {
    Ball,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgraphReport {
    pub edges: Vec<usize>,
    pub b1: usize,
    pub bound: Enclosure,
    pub holds: Decision,
    pub path: SearchPath,
}

fn subgraph_b1(g: &TrivalentGraph, edges: &[usize]) -> (usize, usize) {
    // (b1, components) of the subgraph spanned by the edges
    let mut verts: Vec<usize> = edges.iter().flat_map(|&e| g.edges[e]).collect();
    verts.sort_unstable();
    verts.dedup();
    let idx: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = verts.len();
    for &e in edges {
        let [a, b] = g.edges[e];
        let (ra, rb) = (find(&mut parent, idx[&a]), find(&mut parent, idx[&b]));
        if ra != rb {
            parent[ra] = rb;
            comps -= 1;
        }
    }
    (edges.len() + comps - verts.len(), comps)
}

fn prune_leaves(g: &TrivalentGraph, mut edges: Vec<usize>) -> Vec<usize> {
    loop {
        let mut deg: HashMap<usize, usize> = HashMap::new();
        for &e in &edges {
            for x in g.edges[e] {
                *deg.entry(x).or_default() += 1;
            }
        }
        let before = edges.len();
        edges.retain(|&e| g.edges[e].iter().all(|x| deg[x] > 1));
        if edges.len() == before {
            return edges;
        }
    }
}

/// A connected subgraph with b1 = 2: from the root minimizing the doubled
/// radius R2, the tree paths to the first two non-tree edges together with
/// those edges. Falls back to exhaustive search if that exceeds the bound.
pub fn b1_two_subgraph(g: &TrivalentGraph) -> Result<SubgraphReport, GraphError> {
    g.validate()?;
    let b1x = g.b1();
    if b1x < 2 {
        return Err(GraphError::FirstBettiTooSmall(b1x));
    }
    let adj = g.incidence();
    let mut best: Option<(usize, Ball)> = None;
    for root in 0..g.v {
        let b = ball(g, &adj, root);
        if b.extra.len() >= 2 {
            let key = b.extra[1].0;
            if best.as_ref().map_or(true, |(k, _)| key < *k) {
                best = Some((key, b));
            }
        }
    }
    let bound = b1_two_bound(b1x);
    let (_, b) = best.ok_or(GraphError::FirstBettiTooSmall(b1x))?;
    let mut edges: Vec<usize> = Vec::new();
    for &(_, e) in &b.extra[..2] {
        edges.push(e);
        for x in g.edges[e] {
            edges.extend(b.path_to_root(x).into_iter().map(|(_, pe)| pe));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let edges = prune_leaves(g, edges);
    debug_assert_eq!(subgraph_b1(g, &edges), (2, 1));
    let holds = at_most(edges.len(), &bound);
    if holds == Decision::True {
        return Ok(SubgraphReport { edges, b1: 2, bound, holds, path: SearchPath::Ball });
    }
    let edges = min_b1_two_subgraph(g);
    let holds = at_most(edges.len(), &bound);
    Ok(SubgraphReport { edges, b1: 2, bound, holds, path: SearchPath::Exhaustive })
}

/// All simple cycles, as sorted edge lists, read off the cycle space.
pub fn simple_cycles(g: &TrivalentGraph) -> Vec<Vec<usize>> {
    let adj = g.incidence();
    let mut in_tree = vec![false; g.edges.len()];
    let mut seen = vec![false; g.v];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.v];
    for s in 0..g.v {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    in_tree[e] = true;
                    parent[y] = Some((x, e));
                    q.push_back(y);
                }
            }
        }
    }
    let path = |mut x: usize| {
        let mut es = Vec::new();
        while let Some((p, e)) = parent[x] {
            es.push(e);
            x = p;
        }
        es
    };
    let fundamental: Vec<Vec<bool>> = (0..g.edges.len())
        .filter(|&e| !in_tree[e])
        .map(|e| {
            let mut v = vec![false; g.edges.len()];
            v[e] = true;
            let [a, b] = g.edges[e];
            for f in path(a).into_iter().chain(path(b)) {
                v[f] ^= true;
            }
            v
        })
        .collect();
    let k = fundamental.len();
    assert!(k < 24, "cycle space too large for enumeration");
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let mut v = vec![false; g.edges.len()];
        for (i, f) in fundamental.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (x, &y) in v.iter_mut().zip(f) {
                    *x ^= y;
                }
            }
        }
        let es: Vec<usize> = (0..v.len()).filter(|&e| v[e]).collect();
        let mut deg: HashMap<usize, usize> = HashMap::new();
        for &e in &es {
            for x in g.edges[e] {
                *deg.entry(x).or_default() += 1;
            }
        }
        if deg.values().all(|&d| d == 2) && subgraph_b1(g, &es).1 == 1 {
            out.push(es);
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

pub fn girth(g: &TrivalentGraph) -> usize {
    simple_cycles(g).iter().map(Vec::len).min().unwrap_or(0)
}

fn distances_from_set(g: &TrivalentGraph, adj: &[Vec<(usize, usize)>], src: &[usize]) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
    let mut dist = vec![usize::MAX; g.v];
    let mut parent = vec![None; g.v];
    let mut q = VecDeque::new();
    for &s in src {
        dist[s] = 0;
        q.push_back(s);
    }
    while let Some(x) = q.pop_front() {
        for &(y, e) in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                parent[y] = Some((x, e));
                q.push_back(y);
            }
        }
    }
    (dist, parent)
}

/// A connected b1 = 2 subgraph with the fewest edges: the best theta or
/// figure-eight formed by two cycles, or two disjoint cycles joined by a
/// shortest path.
pub fn min_b1_two_subgraph(g: &TrivalentGraph) -> Vec<usize> {
    let cycles = simple_cycles(g);
    let adj = g.incidence();
    let verts = |c: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = c.iter().flat_map(|&e| g.edges[e]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut best: Option<Vec<usize>> = None;
    for (i, c1) in cycles.iter().enumerate() {
        let v1 = verts(c1);
        let (dist, parent) = distances_from_set(g, &adj, &v1);
        for c2 in &cycles[i + 1..] {
            let v2 = verts(c2);
            let mut union: Vec<usize> = c1.iter().chain(c2).copied().collect();
            union.sort_unstable();
            union.dedup();
            let candidate = if v2.iter().any(|x| v1.contains(x)) {
                if subgraph_b1(g, &union) != (2, 1) {
                    continue;
                }
                union
            } else {
                let Some(&end) = v2.iter().min_by_key(|&&x| dist[x]) else { continue };
                if dist[end] == usize::MAX {
                    continue;
                }
                let mut x = end;
                while let Some((p, e)) = parent[x] {
                    union.push(e);
                    x = p;
                }
                union
            };
            if best.as_ref().map_or(true, |b| candidate.len() < b.len()) {
                best = Some(candidate);
            }
        }
    }
    best.unwrap_or_default()
}

fn multiplicity_matrix(g: &TrivalentGraph) -> Vec<Vec<u8>> {
    let mut m = vec![vec![0u8; g.v]; g.v];
    for &[a, b] in &g.edges {
        m[a][b] += 1;
        if a != b {
            m[b][a] += 1;
        }
    }
    m
}

fn refined_colors(g: &TrivalentGraph, m: &[Vec<u8>]) -> Vec<u64> {
    let mut colors: Vec<u64> = (0..g.v).map(|x| m[x][x] as u64).collect();
    for _ in 0..g.v {
        let next: Vec<u64> = (0..g.v)
            .map(|x| {
                let mut nb: Vec<(u64, u8)> = (0..g.v).filter(|&y| y != x && m[x][y] > 0).map(|y| (colors[y], m[x][y])).collect();
                nb.sort_unstable();
                let mut h = DefaultHasher::new();
                (colors[x], nb).hash(&mut h);
                h.finish()
            })
            .collect();
        colors = next;
    }
    colors
}

fn invariant(colors: &[u64]) -> u64 {
    let mut c = colors.to_vec();
    c.sort_unstable();
    let mut h = DefaultHasher::new();
    c.hash(&mut h);
    h.finish()
}

struct Candidate {
    graph: TrivalentGraph,
    mult: Vec<Vec<u8>>,
    colors: Vec<u64>,
}

impl Candidate {
    fn new(graph: TrivalentGraph) -> Self {
        let mult = multiplicity_matrix(&graph);
        let colors = refined_colors(&graph, &mult);
        Candidate { graph, mult, colors }
    }
}

fn isomorphic(a: &Candidate, b: &Candidate) -> bool {
    let n = a.graph.v;
    if n != b.graph.v {
        return false;
    }
    // visit a's vertices in BFS order so each one after the first touches
    // an already mapped vertex
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for y in 0..n {
            if !seen[y] && a.mult[x][y] > 0 {
                seen[y] = true;
                order.push(y);
            }
        }
        i += 1;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(k: usize, order: &[usize], a: &Candidate, b: &Candidate, map: &mut [usize], used: &mut [bool]) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for t in 0..b.graph.v {
            if used[t] || b.colors[t] != a.colors[x] || b.mult[t][t] != a.mult[x][x] {
                continue;
            }
            if order[..k].iter().any(|&y| a.mult[x][y] != b.mult[t][map[y]]) {
                continue;
            }
            map[x] = t;
            used[t] = true;
            if go(k + 1, order, a, b, map, used) {
                return true;
            }
            used[t] = false;
        }
        map[x] = usize::MAX;
        false
    }
    go(0, &order, a, b, &mut map, &mut used)
}

fn augmentations(g: &TrivalentGraph) -> Vec<TrivalentGraph> {
    let (x, y) = (g.v, g.v + 1);
    let m = g.edges.len();
    let mut out = Vec::new();
    // subdivide edge e at s: e becomes (a, s), new edge (s, b)
    let sub = |edges: &mut Vec<[usize; 2]>, e: usize, s: usize| {
        let [a, b] = edges[e];
        edges[e] = [a, s];
        edges.push([s, b]);
    };
    for e in 0..m {
        for f in e..m {
            let mut edges = g.edges.clone();
            sub(&mut edges, e, x);
            // when f == e, put y on the second half of the same edge
            let f = if f == e { edges.len() - 1 } else { f };
            sub(&mut edges, f, y);
            edges.push([x, y]);
            out.push(TrivalentGraph { v: g.v + 2, edges });
        }
        let mut edges = g.edges.clone();
        sub(&mut edges, e, x);
        edges.push([x, y]);
        edges.push([y, y]);
        out.push(TrivalentGraph { v: g.v + 2, edges });
    }
    out
}

/// Connected trivalent multigraphs up to isomorphism, by vertex count
/// 2, 4, ..., max_v. Every such graph on V + 2 vertices comes from one on V
/// vertices by joining two new points on edges, or by hanging a loop off a
/// new point on an edge.
pub fn connected_trivalent_multigraphs(max_v: usize) -> Vec<Vec<TrivalentGraph>> {
    let theta = TrivalentGraph::theta();
    let dumbbell = TrivalentGraph { v: 2, edges: vec![[0, 0], [0, 1], [1, 1]] };
    let mut levels = vec![vec![theta, dumbbell]];
    let mut v = 2;
    while v + 2 <= max_v {
        let mut buckets: HashMap<u64, Vec<Candidate>> = HashMap::new();
        let mut kept = Vec::new();
        for g in levels.last().unwrap() {
            for h in augmentations(g) {
                let c = Candidate::new(h);
                let key = invariant(&c.colors);
                let bucket = buckets.entry(key).or_default();
                if !bucket.iter().any(|o| isomorphic(o, &c)) {
                    kept.push(c.graph.clone());
                    bucket.push(c);
                }
            }
        }
        levels.push(kept);
        v += 2;
    }
    levels
}
