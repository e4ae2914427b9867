//! Bounded universes: plane completions, patch/cactus candidates and
//! compatibility certificates.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::embed::{Dart, EmbeddedGraph, Placement};
use crate::graph::{Graph, Vertex};
use crate::paths::{solve_dp, DpInstance};
use crate::placement::{chords_placeable, Slot};
use crate::region::{find_interleaving, pad_walks, Corner};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("k^(2^k) does not fit in 128 bits for k = {0}")]
    Overflow(usize),
}

/// The patch-size bound k^(2^k).
pub fn patch_bound(k: usize) -> Result<u128, EnumError> {
    if k == 0 {
        return Err(EnumError::ZeroK);
    }
    let exp = 1u32.checked_shl(k as u32).filter(|_| k < 32).ok_or(EnumError::Overflow(k))?;
    (k as u128).checked_pow(exp).ok_or(EnumError::Overflow(k))
}

/// A simple plane graph without isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub graph: EmbeddedGraph,
    pub code: Vec<u64>,
}

impl Completion {
    pub fn edge_count(&self) -> usize {
        self.graph.edges().len()
    }

    /// Every component is a path.
    pub fn is_linear_forest(&self) -> bool {
        is_linear_forest(self.graph.n(), self.graph.edges())
    }
}

pub fn is_linear_forest(n: usize, edges: &[(Vertex, Vertex)]) -> bool {
    let g = Graph::from_edges(n, edges);
    if (0..n).any(|v| g.degree(v) > 2) || g.simplified().edges().len() != edges.len() {
        return false;
    }
    // acyclic: edges = vertices - components, counted over touched vertices
    let (count, _) = g.components();
    edges.len() + count == n
}

/// Edge lists with `m` distinct edges and no isolated vertex on vertices 0..n where
/// vertex labels appear in increasing order of first use. Isomorphic repeats remain.
pub fn abstract_graphs(m: usize) -> Vec<Vec<(Vertex, Vertex)>> {
    let all: Vec<(Vertex, Vertex)> =
        (0..2 * m).flat_map(|u| (u + 1..2 * m).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..m).collect();
    if m == 0 || all.len() < m {
        return out;
    }
    loop {
        let es: Vec<(Vertex, Vertex)> = idx.iter().map(|&i| all[i]).collect();
        let mut next = 0;
        let mut ok = true;
        for &(u, v) in &es {
            for x in [u, v] {
                if x > next {
                    ok = false;
                } else if x == next {
                    next += 1;
                }
            }
        }
        if ok {
            out.push(es);
        }
        // next m-combination
        let mut i = m;
        while i > 0 && idx[i - 1] == all.len() - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

/// Every sphere embedding of the abstract graph: all rotation systems, and for
/// disconnected graphs every nesting of components into faces.
pub fn all_embeddings(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<EmbeddedGraph> {
    let mut darts: Vec<Vec<Dart>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        darts[u].push(Dart::new(i, 0));
        darts[v].push(Dart::new(i, 1));
    }
    // cyclic orders: first dart fixed
    let options: Vec<Vec<Vec<Dart>>> = darts
        .iter()
        .map(|ds| {
            if ds.is_empty() {
                return vec![Vec::new()];
            }
            permutations(&ds[1..])
                .into_iter()
                .map(|mut p| {
                    p.insert(0, ds[0]);
                    p
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let rotation: Vec<Vec<Dart>> = (0..n).map(|v| options[v][idx[v]].clone()).collect();
        if let Ok(g) = EmbeddedGraph::new(n, edges.to_vec(), rotation) {
            out.extend(all_placements(&g));
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            idx[i] += 1;
            if idx[i] < options[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn all_placements(g: &EmbeddedGraph) -> Vec<EmbeddedGraph> {
    let c = g.component_count();
    let darts_of = |comp: usize| -> Vec<Option<Dart>> {
        let ds: Vec<Option<Dart>> =
            g.component_vertices(comp).iter().flat_map(|&v| g.rotation(v).iter().map(|&d| Some(d))).collect();
        if ds.is_empty() {
            vec![None]
        } else {
            ds
        }
    };
    let mut choices: Vec<Vec<Placement>> = vec![vec![Placement::Root]];
    for comp in 1..c {
        let mut opts = Vec::new();
        for host in 0..comp {
            for hd in darts_of(host) {
                for od in darts_of(comp) {
                    opts.push(Placement::In { host_component: host, host: hd, outer: od });
                }
            }
        }
        choices.push(opts);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; c];
    loop {
        let placement: Vec<Placement> = (0..c).map(|i| choices[i][idx[i]].clone()).collect();
        if let Ok(h) = g.clone().with_placement(placement) {
            out.push(h);
        }
        let mut i = 0;
        loop {
            if i == c {
                return out;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// One completion per topological-isomorphism class with 1..=B edges, ordered by edge
/// count then canonical code.
pub fn enum_completions(b: usize) -> Vec<Completion> {
    let mut out = Vec::new();
    for m in 1..=b {
        let mut classes: BTreeMap<Vec<u64>, EmbeddedGraph> = BTreeMap::new();
        for es in abstract_graphs(m) {
            let n = 1 + es.iter().map(|&(_, v)| v).max().unwrap();
            for g in all_embeddings(n, &es) {
                let code = g.canonical_code(None);
                classes.entry(code).or_insert(g);
            }
        }
        out.extend(classes.into_iter().map(|(code, graph)| Completion { graph, code }));
    }
    out
}

/// Only the linear forests of [`enum_completions`], plus the empty patch first.
pub fn linear_forest_shapes(b: usize) -> Vec<Vec<(Vertex, Vertex)>> {
    let mut out = vec![Vec::new()];
    let mut seen = BTreeSet::new();
    for m in 1..=b {
        // shapes are multisets of path lengths
        fn parts(m: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if m == 0 {
                out.push(cur.clone());
                return;
            }
            for l in (1..=m.min(max)).rev() {
                cur.push(l);
                parts(m - l, l, cur, out);
                cur.pop();
            }
        }
        let mut ps = Vec::new();
        parts(m, m, &mut Vec::new(), &mut ps);
        for p in ps {
            let mut es = Vec::new();
            let mut next = 0;
            for l in p {
                for i in 0..l {
                    es.push((next + i, next + i + 1));
                }
                next += l + 1;
            }
            if seen.insert(es.clone()) {
                out.push(es);
            }
        }
    }
    out
}

/// A completion with a cactus interface: one walk per hole over the completion's
/// vertices (possibly empty), and the corner used by each edge end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchCandidate {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
    pub walks: Vec<Vec<Vertex>>,
    pub corners: Vec<(Corner, Corner)>,
}

impl PatchCandidate {
    pub fn lambda(&self) -> usize {
        self.walks.len()
    }

    /// The walks padded to proper cacti.
    pub fn padded(&self) -> Vec<Vec<Slot>> {
        let (p, _) = pad_walks(self.n, &self.walks);
        let mut pad = 0;
        p.into_iter()
            .map(|w| {
                let w = if w.is_empty() { vec![usize::MAX; 3] } else { w };
                w.into_iter()
                    .map(|x| {
                        if x < self.n {
                            Slot::Real(x)
                        } else {
                            pad += 1;
                            Slot::Pad(pad - 1)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The chords can be drawn outside the padded cactus with the chosen corners.
    pub fn placeable(&self) -> bool {
        let (padded, pos) = pad_walks(self.n, &self.walks);
        let mut hole_map = vec![usize::MAX; self.walks.len()];
        let mut walks = Vec::new();
        for (h, w) in padded.into_iter().enumerate() {
            if !w.is_empty() {
                hole_map[h] = walks.len();
                walks.push(w);
            }
        }
        let map = |c: Corner| Corner { hole: hole_map[c.hole], pos: pos[c.hole][c.pos] };
        let chords: Vec<(Corner, Corner)> = self.corners.iter().map(|&(a, b)| (map(a), map(b))).collect();
        let total = walks.iter().flatten().max().map_or(self.n, |&m| m + 1);
        chords_placeable(total, &walks, &chords)
    }

    pub fn part_of(&self, v: Vertex) -> Option<usize> {
        self.walks.iter().position(|w| w.contains(&v))
    }

    /// Holes relabelled, rotated and vertices renamed by first appearance; the
    /// minimum over all choices. Orientation is kept.
    pub fn key(&self) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        let order: Vec<usize> = (0..self.walks.len()).collect();
        for perm in permutations(&order) {
            let mut starts: Vec<Vec<usize>> = vec![vec![]];
            for &h in &perm {
                let len = self.walks[h].len().max(1);
                starts = starts
                    .into_iter()
                    .flat_map(|s| {
                        (0..len).map(move |o| {
                            let mut t = s.clone();
                            t.push(o);
                            t
                        })
                    })
                    .collect();
            }
            for st in starts {
                let mut name: BTreeMap<Vertex, usize> = BTreeMap::new();
                let mut new_pos: BTreeMap<Corner, Corner> = BTreeMap::new();
                let mut code = Vec::new();
                for (i, &h) in perm.iter().enumerate() {
                    let w = &self.walks[h];
                    code.push(usize::MAX - w.len());
                    for j in 0..w.len() {
                        let p = (st[i] + j) % w.len();
                        let next = name.len();
                        let x = *name.entry(w[p]).or_insert(next);
                        code.push(x);
                        new_pos.insert(Corner { hole: h, pos: p }, Corner { hole: i, pos: j });
                    }
                }
                let mut es: Vec<(usize, usize, usize, usize)> = self
                    .corners
                    .iter()
                    .map(|&(a, b)| {
                        let (a, b) = (new_pos[&a], new_pos[&b]);
                        let (x, y) = ((a.hole, a.pos), (b.hole, b.pos));
                        let (x, y) = if x <= y { (x, y) } else { (y, x) };
                        (x.0, x.1, y.0, y.1)
                    })
                    .collect();
                es.sort_unstable();
                code.push(usize::MAX);
                for e in es {
                    code.extend([e.0, e.1, e.2, e.3]);
                }
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        best.unwrap_or_default()
    }
}

/// Distinct cyclic sequences (up to rotation) of a multiset, cactus-shaped.
fn cyclic_arrangements(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let first = items[0];
    let rest: Vec<Vertex> = items[1..].to_vec();
    for p in permutations(&rest) {
        let mut w = vec![first];
        w.extend(p);
        let canon = crate::embed::least_rotation(&w);
        let len = canon.len();
        let repeats = len > 1 && (0..len).any(|i| canon[i] == canon[(i + 1) % len]);
        if !repeats && find_interleaving(&canon).is_none() && seen.insert(canon.clone()) {
            out.push(canon);
        }
    }
    out
}

/// All (completion, cactus) pairs with exactly `lambda` walks in which the completion
/// can be drawn outside the cactus. Walk sequences repeat a vertex at most
/// max(1, degree) times; every occurrence is used by some edge end.
pub fn enum_pairs(n: usize, edges: &[(Vertex, Vertex)], lambda: usize) -> Vec<PatchCandidate> {
    let g = Graph::from_edges(n, edges);
    let mut out = Vec::new();
    let mut keys = BTreeSet::new();
    if lambda == 0 {
        return out;
    }
    let mult_max: Vec<usize> = (0..n).map(|v| g.degree(v).max(1)).collect();
    // vertex -> part
    let mut part = vec![0usize; n];
    loop {
        // mult[v] + 1 occurrences of v
        let mut mult = vec![0usize; n];
        loop {
            let mut members: Vec<Vec<Vertex>> = vec![Vec::new(); lambda];
            for v in 0..n {
                for _ in 0..=mult[v] {
                    members[part[v]].push(v);
                }
            }
            let arrangements: Vec<Vec<Vec<Vertex>>> = members.iter().map(|m| cyclic_arrangements(m)).collect();
            if arrangements.iter().all(|a| !a.is_empty()) {
                let mut ai = vec![0usize; lambda];
                loop {
                    let walks: Vec<Vec<Vertex>> = (0..lambda).map(|h| arrangements[h][ai[h]].clone()).collect();
                    for corners in corner_assignments(n, edges, &walks) {
                        let pc = PatchCandidate { n, edges: edges.to_vec(), walks: walks.clone(), corners };
                        let key = pc.key();
                        if !keys.contains(&key) && pc.placeable() {
                            keys.insert(key);
                            out.push(pc);
                        }
                    }
                    if !odometer(&mut ai, |h| arrangements[h].len()) {
                        break;
                    }
                }
            }
            if !odometer(&mut mult, |v| mult_max[v]) {
                break;
            }
        }
        if !odometer(&mut part, |_| lambda) {
            break;
        }
    }
    out.sort_by_key(|pc| pc.key());
    out
}

/// Advances a mixed-radix counter; false after wrapping to all zeros.
fn odometer(idx: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in 0..idx.len() {
        idx[i] += 1;
        if idx[i] < radix(i) {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Corner choices for every edge end such that every walk occurrence is used.
fn corner_assignments(n: usize, edges: &[(Vertex, Vertex)], walks: &[Vec<Vertex>]) -> Vec<Vec<(Corner, Corner)>> {
    let mut occ: Vec<Vec<Corner>> = vec![Vec::new(); n];
    for (h, w) in walks.iter().enumerate() {
        for (p, &v) in w.iter().enumerate() {
            occ[v].push(Corner { hole: h, pos: p });
        }
    }
    let mut out = Vec::new();
    let mut cur: Vec<(Corner, Corner)> = Vec::new();
    fn rec(edges: &[(Vertex, Vertex)], occ: &[Vec<Corner>], cur: &mut Vec<(Corner, Corner)>, out: &mut Vec<Vec<(Corner, Corner)>>) {
        let i = cur.len();
        if i == edges.len() {
            let used: BTreeSet<Corner> = cur.iter().flat_map(|&(a, b)| [a, b]).collect();
            if occ.iter().flatten().all(|c| used.contains(c)) {
                out.push(cur.clone());
            }
            return;
        }
        let (u, v) = edges[i];
        for &a in &occ[u] {
            for &b in &occ[v] {
                cur.push((a, b));
                rec(edges, occ, cur, out);
                cur.pop();
            }
        }
    }
    rec(edges, &occ, &mut cur, &mut out);
    out
}

/// A vertex of the certificate graph H: a completion vertex or an abstract terminal.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HVertex {
    J(Vertex),
    /// end 0 is a_i, end 1 is b_i
    T(usize, u8),
}

/// Where an abstract terminal sits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TerminalSite {
    /// it is this completion vertex
    Vertex(Vertex),
    /// strictly inside this part
    Part(usize),
}

/// A compatibility triple for a candidate: the graph H inside the cactus parts and
/// the terminal positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub candidate: PatchCandidate,
    pub k: usize,
    pub terminals: Vec<[TerminalSite; 2]>,
    /// (part, end, end)
    pub h_edges: Vec<(usize, HVertex, HVertex)>,
}

impl Certificate {
    /// vertices of the union graph: completion vertices, then a_i, b_i
    pub fn union_graph(&self) -> (Graph, Vec<(Vertex, Vertex)>) {
        let n = self.candidate.n;
        let id = |x: HVertex| -> Vertex {
            match x {
                HVertex::J(v) => v,
                HVertex::T(i, e) => match self.terminals[i][e as usize] {
                    TerminalSite::Vertex(v) => v,
                    TerminalSite::Part(_) => n + 2 * i + e as usize,
                },
            }
        };
        let mut g = Graph::from_edges(n + 2 * self.k, &self.candidate.edges);
        for &(_, a, b) in &self.h_edges {
            g.add_edge(id(a), id(b));
        }
        let pairs = (0..self.k).map(|i| (id(HVertex::T(i, 0)), id(HVertex::T(i, 1)))).collect();
        (g, pairs)
    }

    /// Part of an H vertex.
    pub fn part(&self, x: HVertex) -> usize {
        match x {
            HVertex::J(v) => self.candidate.part_of(v).expect("completion vertex on a walk"),
            HVertex::T(i, e) => match self.terminals[i][e as usize] {
                TerminalSite::Vertex(v) => self.candidate.part_of(v).unwrap(),
                TerminalSite::Part(p) => p,
            },
        }
    }

    /// Conditions: H edges stay in one part, H vertices off the cactus are terminals,
    /// and the union is exactly k disjoint terminal paths solvable by DP.
    pub fn check(&self) -> Result<(), String> {
        for &(p, a, b) in &self.h_edges {
            if self.part(a) != p || self.part(b) != p {
                return Err(format!("edge {a:?}-{b:?} leaves part {p}"));
            }
        }
        let (g, pairs) = self.union_graph();
        let inst = DpInstance::new(g.clone(), pairs.clone()).map_err(|e| e.to_string())?;
        let sol = solve_dp(&inst).map_err(|e| e.to_string())?.ok_or("union has no disjoint paths")?;
        // exactly the paths: every edge used
        let used: usize = sol.paths.iter().map(|p| p.len() - 1).sum();
        if used != g.edges().len() {
            return Err("union is not exactly k paths".into());
        }
        Ok(())
    }
}

/// Components of a linear forest as vertex sequences from the smaller end.
pub fn forest_paths(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<Vec<Vertex>> {
    let g = Graph::from_edges(n, edges);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] || g.degree(s) != 1 {
            continue;
        }
        let mut path = vec![s];
        seen[s] = true;
        let mut cur = s;
        while let Some(&w) = g.neighbors(cur).iter().find(|&&w| !seen[w]) {
            seen[w] = true;
            path.push(w);
            cur = w;
        }
        out.push(path);
    }
    out
}

/// All compatibility triples for a linear-forest candidate with k terminal pairs.
pub fn enum_certificates(pc: &PatchCandidate, k: usize) -> Vec<Certificate> {
    let comps = forest_paths(pc.n, &pc.edges);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    // distribute components over k ordered lists with orientation
    let c = comps.len();
    let mut assign = vec![0usize; c];
    loop {
        for order in permutations(&(0..c).collect::<Vec<_>>()) {
            for flips in 0..(1u32 << c) {
                let mut lists: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); k];
                for &ci in &order {
                    let p = &comps[ci];
                    let (x, y) = (p[0], *p.last().unwrap());
                    let e = if flips >> ci & 1 == 1 { (y, x) } else { (x, y) };
                    lists[assign[ci]].push(e);
                }
                for cert in chainings(pc, k, &lists) {
                    let key = (cert.terminals.clone(), {
                        let mut e = cert.h_edges.clone();
                        e.sort();
                        e
                    });
                    if seen.insert(key) && cert.check().is_ok() {
                        out.push(cert);
                    }
                }
            }
        }
        if !odometer(&mut assign, |_| k) {
            break;
        }
    }
    out
}

/// Ways to close each list of oriented components into a path a_i .. b_i.
fn chainings(pc: &PatchCandidate, k: usize, lists: &[Vec<(Vertex, Vertex)>]) -> Vec<Certificate> {
    let lambda = pc.lambda();
    let mut partial: Vec<(Vec<[TerminalSite; 2]>, Vec<(usize, HVertex, HVertex)>)> = vec![(Vec::new(), Vec::new())];
    for (i, list) in lists.iter().enumerate().take(k) {
        let mut opts: Vec<([TerminalSite; 2], Vec<(usize, HVertex, HVertex)>)> = Vec::new();
        if list.is_empty() {
            for p in 0..lambda {
                opts.push((
                    [TerminalSite::Part(p), TerminalSite::Part(p)],
                    vec![(p, HVertex::T(i, 0), HVertex::T(i, 1))],
                ));
            }
        } else {
            // middle links must stay inside one part
            let mut mid = Vec::new();
            let mut ok = true;
            for w in list.windows(2) {
                let (y, x) = (w[0].1, w[1].0);
                let (py, px) = (pc.part_of(y).unwrap(), pc.part_of(x).unwrap());
                if py != px {
                    ok = false;
                    break;
                }
                mid.push((py, HVertex::J(y), HVertex::J(x)));
            }
            if !ok {
                return Vec::new();
            }
            let first = list[0].0;
            let last = list.last().unwrap().1;
            let (pf, pl) = (pc.part_of(first).unwrap(), pc.part_of(last).unwrap());
            for start_on in [true, false] {
                for end_on in [true, false] {
                    let mut es = mid.clone();
                    let a = if start_on {
                        TerminalSite::Vertex(first)
                    } else {
                        es.push((pf, HVertex::T(i, 0), HVertex::J(first)));
                        TerminalSite::Part(pf)
                    };
                    let b = if end_on {
                        TerminalSite::Vertex(last)
                    } else {
                        es.push((pl, HVertex::J(last), HVertex::T(i, 1)));
                        TerminalSite::Part(pl)
                    };
                    opts.push(([a, b], es));
                }
            }
        }
        let mut next = Vec::new();
        for (ts, es) in &partial {
            for (t, e) in &opts {
                let mut ts2 = ts.clone();
                ts2.push(*t);
                let mut es2 = es.clone();
                es2.extend(e.iter().copied());
                next.push((ts2, es2));
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(terminals, h_edges)| Certificate { candidate: pc.clone(), k, terminals, h_edges })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert_eq!(patch_bound(1).unwrap(), 1);
        assert_eq!(patch_bound(2).unwrap(), 16);
        assert_eq!(patch_bound(3).unwrap(), 6561);
        assert!(patch_bound(0).is_err());
        assert!(patch_bound(6).is_err());
    }

    #[test]
    fn completion_counts() {
        assert_eq!(enum_completions(1).len(), 1);
        assert_eq!(enum_completions(2).len(), 3);
    }

    #[test]
    fn linear_forests() {
        assert!(is_linear_forest(3, &[(0, 1), (1, 2)]));
        assert!(!is_linear_forest(3, &[(0, 1), (1, 2), (2, 0)]));
        assert!(!is_linear_forest(4, &[(0, 1), (0, 2), (0, 3)]));
        let shapes = linear_forest_shapes(3);
        assert_eq!(shapes.len(), 1 + 1 + 2 + 3);
    }

    #[test]
    fn single_edge_pairs() {
        let one = enum_pairs(2, &[(0, 1)], 1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].padded()[0].len(), 3);
        let two = enum_pairs(2, &[(0, 1)], 2);
        // split over both holes, or both on one hole with the other hole empty
        assert_eq!(two.len(), 2);
        assert!(enum_pairs(2, &[(0, 1)], 0).is_empty());
    }

    #[test]
    fn certificates_for_single_edge() {
        let pc = &enum_pairs(2, &[(0, 1)], 1)[0];
        let certs = enum_certificates(pc, 1);
        assert!(!certs.is_empty());
        assert!(certs.iter().all(|c| c.check().is_ok()));
        // a1 -> u, v -> b1 through two H edges is among them
        assert!(certs.iter().any(|c| c.h_edges.len() == 2));
    }
}
