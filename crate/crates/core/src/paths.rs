//! Exact disjoint-paths search and rooted topological-minor containment.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error("terminal {0} is not a vertex of the graph")]
    UnknownTerminal(Vertex),
    #[error("terminal {0} appears more than once")]
    RepeatedTerminal(Vertex),
    #[error("no terminal pairs given")]
    NoPairs,
    #[error("root map is not a bijection: {0}")]
    BadRootMap(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpInstance {
    pub graph: Graph,
    pub pairs: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DpSolution {
    pub paths: Vec<Vec<Vertex>>,
}

impl DpInstance {
    pub fn new(graph: Graph, pairs: Vec<(Vertex, Vertex)>) -> Result<Self, DpError> {
        let inst = DpInstance { graph, pairs };
        inst.check()?;
        Ok(inst)
    }

    fn check(&self) -> Result<(), DpError> {
        if self.pairs.is_empty() {
            return Err(DpError::NoPairs);
        }
        let mut seen = HashSet::new();
        for &(s, t) in &self.pairs {
            for x in [s, t] {
                if x >= self.graph.n() {
                    return Err(DpError::UnknownTerminal(x));
                }
                if !seen.insert(x) {
                    return Err(DpError::RepeatedTerminal(x));
                }
            }
        }
        Ok(())
    }

    pub fn is_terminal(&self, v: Vertex) -> bool {
        self.pairs.iter().any(|&(s, t)| s == v || t == v)
    }
}

struct Search<'a> {
    g: &'a Graph,
    pairs: &'a [(Vertex, Vertex)],
    used: Vec<bool>,
    failed: HashSet<(usize, Vec<u64>)>,
}

impl Search<'_> {
    fn key(&self) -> Vec<u64> {
        let mut k = vec![0u64; self.used.len().div_ceil(64)];
        for (i, &u) in self.used.iter().enumerate() {
            if u {
                k[i / 64] |= 1 << (i % 64);
            }
        }
        k
    }

    /// Remaining pairs from `from` on are each connected through unused vertices.
    fn connectable(&self, from: usize) -> bool {
        self.pairs[from..]
            .iter()
            .all(|&(s, t)| self.g.reachable(s, t, |v| !self.used[v]))
    }

    fn route(&mut self, i: usize, out: &mut Vec<Vec<Vertex>>) -> bool {
        if i == self.pairs.len() {
            return true;
        }
        let key = (i, self.key());
        if self.failed.contains(&key) {
            return false;
        }
        let (s, t) = self.pairs[i];
        let mut path = vec![s];
        if self.extend(i, t, &mut path, out) {
            return true;
        }
        self.failed.insert(key);
        false
    }

    fn extend(&mut self, i: usize, t: Vertex, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) -> bool {
        let u = *path.last().unwrap();
        for &w in self.g.neighbors(u) {
            if w == t {
                path.push(t);
                out.push(path.clone());
                if self.connectable(i + 1) && self.route(i + 1, out) {
                    return true;
                }
                out.pop();
                path.pop();
                continue;
            }
            if self.used[w] {
                continue;
            }
            self.used[w] = true;
            path.push(w);
            if self.g.reachable(w, t, |v| !self.used[v]) && self.extend(i, t, path, out) {
                return true;
            }
            path.pop();
            self.used[w] = false;
        }
        false
    }
}

/// Lexicographically least tuple of k pairwise internally disjoint paths, if any.
/// Internal vertices avoid every terminal; since terminals are distinct the paths
/// are vertex-disjoint.
pub fn solve_dp(inst: &DpInstance) -> Result<Option<DpSolution>, DpError> {
    inst.check()?;
    let g = &inst.graph;
    let mut used = vec![false; g.n()];
    for &(s, t) in &inst.pairs {
        used[s] = true;
        used[t] = true;
    }
    let mut search = Search { g, pairs: &inst.pairs, used, failed: HashSet::new() };
    if !search.connectable(0) {
        return Ok(None);
    }
    let mut out = Vec::new();
    Ok(if search.route(0, &mut out) { Some(DpSolution { paths: out }) } else { None })
}

/// Independent check of a claimed solution; the error names the first violation.
pub fn check_solution(inst: &DpInstance, sol: &DpSolution) -> Result<(), String> {
    if sol.paths.len() != inst.pairs.len() {
        return Err(format!("expected {} paths, got {}", inst.pairs.len(), sol.paths.len()));
    }
    for (i, (p, &(s, t))) in sol.paths.iter().zip(&inst.pairs).enumerate() {
        if p.len() < 2 || p[0] != s || *p.last().unwrap() != t {
            return Err(format!("path {} does not join {} to {}", i + 1, s, t));
        }
        for w in p.windows(2) {
            if !inst.graph.has_edge(w[0], w[1]) {
                return Err(format!("path {} uses missing edge {}-{}", i + 1, w[0], w[1]));
            }
        }
        let distinct: HashSet<_> = p.iter().collect();
        if distinct.len() != p.len() {
            return Err(format!("path {} repeats a vertex", i + 1));
        }
    }
    // two paths may only meet at a vertex that is a terminal of both
    for i in 0..sol.paths.len() {
        for j in i + 1..sol.paths.len() {
            let ends_i = [inst.pairs[i].0, inst.pairs[i].1];
            let ends_j = [inst.pairs[j].0, inst.pairs[j].1];
            for v in &sol.paths[i] {
                if sol.paths[j].contains(v) && !(ends_i.contains(v) && ends_j.contains(v)) {
                    return Err(format!("paths {} and {} share vertex {}", i + 1, j + 1, v));
                }
            }
        }
    }
    Ok(())
}

/// Unordered endpoint pairs joined by the solution's paths.
pub fn path_pattern(sol: &DpSolution) -> Result<BTreeSet<(Vertex, Vertex)>, DpError> {
    if sol.paths.is_empty() {
        return Err(DpError::NoPairs);
    }
    Ok(sol
        .paths
        .iter()
        .map(|p| {
            let (a, b) = (p[0], *p.last().unwrap());
            (a.min(b), a.max(b))
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopMinorWitness {
    /// image of every pattern vertex
    pub psi0: Vec<Vertex>,
    /// host path for every pattern edge, oriented from the image of its first endpoint
    pub psi1: Vec<Vec<Vertex>>,
}

/// Finds a subdivision of `pattern` in `host` that sends each rooted pattern vertex
/// `a` to `b` for every `(a, b)` in `roots`. Loops in the pattern are not supported
/// (they never arise from simple patterns).
pub fn rooted_topminor(
    pattern: &Graph,
    host: &Graph,
    roots: &[(Vertex, Vertex)],
) -> Result<Option<TopMinorWitness>, DpError> {
    let mut psi0 = vec![usize::MAX; pattern.n()];
    let mut taken = vec![false; host.n()];
    for &(a, b) in roots {
        if a >= pattern.n() || b >= host.n() {
            return Err(DpError::BadRootMap(format!("({a},{b}) out of range")));
        }
        if psi0[a] != usize::MAX {
            return Err(DpError::BadRootMap(format!("pattern vertex {a} rooted twice")));
        }
        if taken[b] {
            return Err(DpError::BadRootMap(format!("host vertex {b} used twice")));
        }
        psi0[a] = b;
        taken[b] = true;
    }
    if pattern.edges().iter().any(|&(u, v)| u == v) {
        return Err(DpError::BadRootMap("pattern has a loop".into()));
    }
    let mut edges: Vec<(Vertex, Vertex)> = pattern.edges().to_vec();
    edges.sort_unstable();
    let free: Vec<Vertex> = (0..pattern.n()).filter(|&a| psi0[a] == usize::MAX).collect();
    let mut tm = TopMinor { pattern, host, edges: &edges, psi0, taken };
    let mut paths = Vec::new();
    if !tm.assign(&free, 0, &mut paths) {
        return Ok(None);
    }
    // report paths in the pattern's own edge order
    let mut remaining: Vec<Option<Vec<Vertex>>> = paths.into_iter().map(Some).collect();
    let mut psi1 = Vec::new();
    for &(u, v) in pattern.edges() {
        let i = edges
            .iter()
            .enumerate()
            .position(|(i, &e)| e == (u, v) && remaining[i].is_some())
            .unwrap();
        psi1.push(remaining[i].take().unwrap());
    }
    Ok(Some(TopMinorWitness { psi0: tm.psi0, psi1 }))
}

struct TopMinor<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    edges: &'a [(Vertex, Vertex)],
    psi0: Vec<Vertex>,
    /// branch images and path interiors
    taken: Vec<bool>,
}

impl TopMinor<'_> {
    fn assign(&mut self, free: &[Vertex], i: usize, paths: &mut Vec<Vec<Vertex>>) -> bool {
        if i == free.len() {
            return self.route(0, paths);
        }
        let a = free[i];
        let need = self.pattern.degree(a);
        for b in 0..self.host.n() {
            if self.taken[b] || self.host.degree(b) < need {
                continue;
            }
            self.taken[b] = true;
            self.psi0[a] = b;
            if self.assign(free, i + 1, paths) {
                return true;
            }
            self.psi0[a] = usize::MAX;
            self.taken[b] = false;
        }
        false
    }

    fn route(&mut self, i: usize, paths: &mut Vec<Vec<Vertex>>) -> bool {
        if i == self.edges.len() {
            return true;
        }
        let (u, v) = self.edges[i];
        let (s, t) = (self.psi0[u], self.psi0[v]);
        let mut path = vec![s];
        self.extend(i, t, &mut path, paths)
    }

    fn extend(&mut self, i: usize, t: Vertex, path: &mut Vec<Vertex>, paths: &mut Vec<Vec<Vertex>>) -> bool {
        let u = *path.last().unwrap();
        for &w in self.host.neighbors(u) {
            if w == t {
                // a direct edge may realise only one pattern edge
                if path.len() == 1 && paths.iter().any(|p| p.len() == 2 && is_same_edge(p, u, t)) {
                    continue;
                }
                path.push(t);
                paths.push(path.clone());
                if self.route(i + 1, paths) {
                    return true;
                }
                paths.pop();
                path.pop();
                continue;
            }
            if self.taken[w] {
                continue;
            }
            self.taken[w] = true;
            path.push(w);
            if self.host.reachable(w, t, |x| !self.taken[x]) && self.extend(i, t, path, paths) {
                return true;
            }
            path.pop();
            self.taken[w] = false;
        }
        false
    }
}

fn is_same_edge(p: &[Vertex], a: Vertex, b: Vertex) -> bool {
    (p[0] == a && p[1] == b) || (p[0] == b && p[1] == a)
}

/// Rechecks a witness from scratch.
pub fn check_witness(pattern: &Graph, host: &Graph, roots: &[(Vertex, Vertex)], w: &TopMinorWitness) -> Result<(), String> {
    if w.psi0.len() != pattern.n() || w.psi1.len() != pattern.edges().len() {
        return Err("witness has the wrong shape".into());
    }
    let images: HashSet<_> = w.psi0.iter().collect();
    if images.len() != w.psi0.len() || w.psi0.iter().any(|&b| b >= host.n()) {
        return Err("branch vertices are not an injection into the host".into());
    }
    for &(a, b) in roots {
        if w.psi0[a] != b {
            return Err(format!("root {a} is not sent to {b}"));
        }
    }
    for (e, (&(u, v), p)) in pattern.edges().iter().zip(&w.psi1).enumerate() {
        let ends = (p[0], *p.last().unwrap());
        if ends != (w.psi0[u], w.psi0[v]) && ends != (w.psi0[v], w.psi0[u]) {
            return Err(format!("path of edge {e} has the wrong ends"));
        }
        if p.len() < 2 || p.windows(2).any(|x| !host.has_edge(x[0], x[1])) {
            return Err(format!("path of edge {e} is not a host path"));
        }
        let inner: HashSet<_> = p.iter().collect();
        if inner.len() != p.len() {
            return Err(format!("path of edge {e} is not simple"));
        }
        for x in &p[1..p.len() - 1] {
            if images.contains(x) {
                return Err(format!("path of edge {e} passes a branch vertex"));
            }
        }
    }
    for i in 0..w.psi1.len() {
        for j in 0..w.psi1.len() {
            if i == j {
                continue;
            }
            let (a, b) = (&w.psi1[i], &w.psi1[j]);
            if a[1..a.len() - 1].iter().any(|x| b.contains(x)) {
                return Err(format!("interior of path {i} meets path {j}"));
            }
            if i < j && a.len() == 2 && b.len() == 2 && is_same_edge(a, b[0], b[1]) {
                return Err(format!("edges {i} and {j} share a host edge"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> Graph {
        let mut es = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = r * 3 + c;
                if c < 2 {
                    es.push((v, v + 1));
                }
                if r < 2 {
                    es.push((v, v + 3));
                }
            }
        }
        Graph::from_edges(9, &es)
    }

    /// every k-tuple of simple paths, checked pairwise
    fn brute(g: &Graph, pairs: &[(Vertex, Vertex)]) -> bool {
        fn all_paths(g: &Graph, s: Vertex, t: Vertex) -> Vec<Vec<Vertex>> {
            let mut out = Vec::new();
            let mut stack = vec![(vec![s], 0usize)];
            while let Some((p, _)) = stack.pop() {
                let u = *p.last().unwrap();
                if u == t {
                    out.push(p);
                    continue;
                }
                for &w in g.neighbors(u) {
                    if !p.contains(&w) {
                        let mut q = p.clone();
                        q.push(w);
                        stack.push((q, 0));
                    }
                }
            }
            out
        }
        fn rec(g: &Graph, pairs: &[(Vertex, Vertex)], chosen: &mut Vec<Vec<Vertex>>) -> bool {
            if chosen.len() == pairs.len() {
                let inst = DpInstance { graph: g.clone(), pairs: pairs.to_vec() };
                return check_solution(&inst, &DpSolution { paths: chosen.clone() }).is_ok();
            }
            let (s, t) = pairs[chosen.len()];
            for p in all_paths(g, s, t) {
                chosen.push(p);
                if rec(g, pairs, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        rec(g, pairs, &mut Vec::new())
    }

    #[test]
    fn simple_path() {
        let inst = DpInstance::new(Graph::from_edges(3, &[(0, 1), (1, 2)]), vec![(0, 2)]).unwrap();
        assert_eq!(solve_dp(&inst).unwrap().unwrap().paths, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn star_blocks_two_pairs() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let inst = DpInstance::new(g, vec![(1, 2), (3, 4)]).unwrap();
        assert!(solve_dp(&inst).unwrap().is_none());
    }

    #[test]
    fn grid_diagonals_match_brute_force() {
        let g = grid3();
        let pairs = vec![(0, 8), (2, 6)];
        let inst = DpInstance::new(g.clone(), pairs.clone()).unwrap();
        let got = solve_dp(&inst).unwrap();
        assert_eq!(got.is_some(), brute(&g, &pairs));
        // both diagonals cross in the planar grid with all four corners on the outer face
        assert!(got.is_none());
        let side = DpInstance::new(g.clone(), vec![(0, 2), (6, 8)]).unwrap();
        let sol = solve_dp(&side).unwrap().unwrap();
        check_solution(&side, &sol).unwrap();
    }

    #[test]
    fn bad_terminals() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(DpInstance::new(g.clone(), vec![(0, 5)]).unwrap_err(), DpError::UnknownTerminal(5));
        assert_eq!(DpInstance::new(g.clone(), vec![(0, 0)]).unwrap_err(), DpError::RepeatedTerminal(0));
        assert_eq!(DpInstance::new(g, vec![]).unwrap_err(), DpError::NoPairs);
    }

    #[test]
    fn pattern_is_a_set() {
        let sol = DpSolution { paths: vec![vec![3, 1], vec![0, 2]] };
        assert_eq!(path_pattern(&sol).unwrap(), BTreeSet::from([(0, 2), (1, 3)]));
        assert!(path_pattern(&DpSolution { paths: vec![] }).is_err());
    }

    #[test]
    fn topminor_examples() {
        let edge = Graph::from_edges(2, &[(0, 1)]);
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let w = rooted_topminor(&edge, &path, &[(0, 0), (1, 2)]).unwrap().unwrap();
        assert_eq!(w.psi1, vec![vec![0, 1, 2]]);
        let mut k4 = Vec::new();
        let mut k5 = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                if v < 4 {
                    k4.push((u, v));
                }
                k5.push((u, v));
            }
        }
        let k4 = Graph::from_edges(4, &k4);
        let id: Vec<_> = (0..4).map(|v| (v, v)).collect();
        let w = rooted_topminor(&k4, &k4, &id).unwrap().unwrap();
        check_witness(&k4, &k4, &id, &w).unwrap();
        let k5 = Graph::from_edges(5, &k5);
        assert!(rooted_topminor(&k5, &grid3(), &[]).unwrap().is_none());
        assert!(rooted_topminor(&edge, &path, &[(0, 0), (1, 0)]).is_err());
    }

    #[test]
    fn parallel_pattern_edges_need_two_routes() {
        let two = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let single = Graph::from_edges(2, &[(0, 1)]);
        assert!(rooted_topminor(&two, &single, &[(0, 0), (1, 1)]).unwrap().is_none());
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let w = rooted_topminor(&two, &tri, &[(0, 0), (1, 1)]).unwrap().unwrap();
        check_witness(&two, &tri, &[(0, 0), (1, 1)], &w).unwrap();
    }
}
