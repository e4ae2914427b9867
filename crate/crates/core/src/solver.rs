//! Exact PDPC solving: minimal patch search by routing with patch jumps,
//! a universe cross-check, minimisation and solution auditing.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use thiserror::Error;

use crate::enumerate::{linear_forest_shapes, patch_bound};
use crate::graph::{Graph, Vertex};
use crate::paths::{check_solution, solve_dp, DpInstance, DpSolution};
use crate::placement::{place_edges, PatchPlacement};
use crate::reduce::reduce_to_fixpoint;
use crate::region::{validate_instance, PdpcInstance, Prepared};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// path search that adds patch edges on demand
    Routing,
    /// every linear-forest patch in size order
    Universe,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// worker threads; 0 uses the rayon default
    pub jobs: usize,
    /// largest search bound accepted
    pub cap: usize,
    pub strategy: Strategy,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { jobs: 0, cap: 64, strategy: Strategy::Routing }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes { placement: PatchPlacement, solution: DpSolution, size: usize },
    /// no patch with at most `ell` edges, larger patches not searched
    NoWithinEll { ell: usize },
    /// no patch of any size up to the patch bound
    Infeasible,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn size(&self) -> Option<usize> {
        match self {
            Verdict::Yes { size, .. } => Some(*size),
            _ => None,
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("invalid instance: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// The search bounds of an instance: (bound within the budget, bound over all sizes).
/// Minimal patches are linear forests on boundary vertices, so no minimal patch has
/// more than |boundary| - 1 edges.
pub fn search_bounds(prep: &Prepared, opts: &SolveOptions) -> Result<(usize, usize), SolveError> {
    let k = prep.k();
    if k > 3 {
        return Err(SolveError::Unsupported(format!("k = {k} terminal pairs, at most 3 supported")));
    }
    let pb = patch_bound(k).map_err(|e| SolveError::Unsupported(e.to_string()))?;
    let forest = prep.boundary.len().saturating_sub(1) as u128;
    let full = pb.min(forest) as usize;
    if full > opts.cap && prep.ell > opts.cap {
        return Err(SolveError::Unsupported(format!("search bound {full} exceeds cap {}", opts.cap)));
    }
    Ok((prep.ell.min(full), full))
}

pub fn solve(inst: &PdpcInstance, opts: &SolveOptions) -> Result<Verdict, SolveError> {
    let prep = validate_instance(inst).map_err(SolveError::Invalid)?;
    solve_prepared(&prep, opts)
}

pub fn solve_prepared(prep: &Prepared, opts: &SolveOptions) -> Result<Verdict, SolveError> {
    let (bound, full) = search_bounds(prep, opts)?;
    let found = with_pool(opts.jobs, || match opts.strategy {
        Strategy::Routing => routing_search(prep, bound),
        Strategy::Universe => universe_search(prep, bound),
    })??;
    match found {
        Some(edges) => finish(prep, &edges),
        None if bound >= full => Ok(Verdict::Infeasible),
        None => Ok(Verdict::NoWithinEll { ell: prep.ell }),
    }
}

/// Minimum patch size over all sizes up to the patch bound, ignoring the budget.
#[derive(Clone, Debug)]
pub struct MinOutcome {
    pub min: Option<usize>,
    pub verdict: Verdict,
}

pub fn min_solve(inst: &PdpcInstance, opts: &SolveOptions) -> Result<MinOutcome, SolveError> {
    let mut prep = validate_instance(inst).map_err(SolveError::Invalid)?;
    let (_, full) = search_bounds(&prep, opts)?;
    prep.ell = full;
    let verdict = solve_prepared(&prep, opts)?;
    Ok(MinOutcome { min: verdict.size(), verdict })
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, SolveError> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SolveError::Internal(e.to_string()))?;
    Ok(pool.install(f))
}

/// G plus the patch edges.
pub fn union_graph(prep: &Prepared, edges: &[(Vertex, Vertex)]) -> Graph {
    let mut g = prep.graph.clone();
    for &(u, v) in edges {
        g.add_edge(u, v);
    }
    g
}

/// Places a minimal patch, takes the least DP solution and checks it end to end.
fn finish(prep: &Prepared, edges: &[(Vertex, Vertex)]) -> Result<Verdict, SolveError> {
    let placed = place_edges(prep, edges).ok_or_else(|| SolveError::Internal("found patch cannot be placed".into()))?;
    let placement = PatchPlacement::new(prep, &placed);
    let inst = DpInstance::new(union_graph(prep, &placement.vertex_edges()), prep.pairs.clone())
        .map_err(|e| SolveError::Internal(e.to_string()))?;
    let solution = solve_dp(&inst)
        .map_err(|e| SolveError::Internal(e.to_string()))?
        .ok_or_else(|| SolveError::Internal("found patch does not route".into()))?;
    audit(prep, &placement.vertex_edges(), &solution.paths).map_err(SolveError::Internal)?;
    if !placement.edges.is_empty() {
        let red = reduce_to_fixpoint(prep, &placement, &solution).map_err(|e| SolveError::Internal(e.to_string()))?;
        if red.placement.size() != placement.size() {
            return Err(SolveError::Internal("minimal patch shrank under reduction".into()));
        }
    }
    let size = placement.size();
    Ok(Verdict::Yes { placement, solution, size })
}

/// Checks a claimed patch and path system against the instance; the error names
/// the first violation found.
pub fn audit(prep: &Prepared, edges: &[(Vertex, Vertex)], paths: &[Vec<Vertex>]) -> Result<(), String> {
    let n = prep.n();
    for &(u, v) in edges {
        if u >= n || v >= n || !prep.on_boundary(u) || !prep.on_boundary(v) {
            return Err(format!("endpoint off boundary: patch edge ({u},{v})"));
        }
    }
    let mut seen = BTreeSet::new();
    for &(u, v) in edges {
        if u == v || prep.graph.has_edge(u, v) || !seen.insert((u.min(v), u.max(v))) {
            return Err(format!("patch not simple: edge ({u},{v})"));
        }
    }
    if edges.len() > prep.ell {
        return Err(format!("budget exceeded: {} edges, budget {}", edges.len(), prep.ell));
    }
    if place_edges(prep, edges).is_none() {
        return Err("patch not embeddable in the region".into());
    }
    let inst = DpInstance { graph: union_graph(prep, edges), pairs: prep.pairs.clone() };
    if paths.len() != prep.k() {
        return Err(format!("wrong endpoints: expected {} paths, got {}", prep.k(), paths.len()));
    }
    for (i, (p, &(s, t))) in paths.iter().zip(&prep.pairs).enumerate() {
        if p.first() != Some(&s) || p.last() != Some(&t) {
            return Err(format!("wrong endpoints: path {i} does not join {s} and {t}"));
        }
        if p.iter().any(|&x| x >= n) {
            return Err(format!("path {i} has an unknown vertex"));
        }
        for w in p.windows(2) {
            if !inst.graph.has_edge(w[0], w[1]) {
                return Err(format!("missing edge: path {i} steps {}-{}", w[0], w[1]));
            }
        }
    }
    check_solution(&inst, &DpSolution { paths: paths.to_vec() }).map_err(|e| format!("disjointness violated: {e}"))
}

type Bits = u128;

struct Router<'a> {
    prep: &'a Prepared,
    boundary_bits: Bits,
    placeable: HashMap<Vec<(Vertex, Vertex)>, bool>,
    failed: HashSet<(usize, Vertex, Bits, Vec<(Vertex, Vertex)>, usize)>,
}

impl<'a> Router<'a> {
    fn new(prep: &'a Prepared) -> Self {
        let boundary_bits = prep.boundary.iter().fold(0, |b, &v| b | 1 << v);
        Router { prep, boundary_bits, placeable: HashMap::new(), failed: HashSet::new() }
    }

    fn can_place(&mut self, patch: &[(Vertex, Vertex)]) -> bool {
        let mut key = patch.to_vec();
        key.sort_unstable();
        if let Some(&b) = self.placeable.get(&key) {
            return b;
        }
        let b = place_edges(self.prep, &key).is_some();
        self.placeable.insert(key, b);
        b
    }

    /// 0-1 distance from `from` to `to` through unused vertices, a jump between two
    /// boundary vertices costing 1.
    fn dist(&self, from: Vertex, to: Vertex, used: Bits) -> Option<usize> {
        let n = self.prep.n();
        let hub = n;
        let mut d = vec![usize::MAX; n + 1];
        let mut q = VecDeque::new();
        d[from] = 0;
        q.push_back(from);
        let free = |v: Vertex| v == to || used >> v & 1 == 0;
        while let Some(x) = q.pop_front() {
            if x == to {
                return Some(d[x]);
            }
            if x == hub {
                for &b in &self.prep.boundary {
                    if free(b) && d[b] > d[hub] {
                        d[b] = d[hub];
                        q.push_front(b);
                    }
                }
                continue;
            }
            for &w in self.prep.graph.neighbors(x) {
                if free(w) && d[w] > d[x] {
                    d[w] = d[x];
                    q.push_front(w);
                }
            }
            if self.boundary_bits >> x & 1 == 1 && d[hub] > d[x] + 1 {
                d[hub] = d[x] + 1;
                q.push_back(hub);
            }
        }
        None
    }

    fn lower_bound(&self, pair: usize, cur: Vertex, used: Bits) -> Option<usize> {
        let mut total = self.dist(cur, self.prep.pairs[pair].1, used)?;
        for &(s, t) in &self.prep.pairs[pair + 1..] {
            total += self.dist(s, t, used)?;
        }
        Some(total)
    }

    /// Moves from `cur` on pair `pair`: (next vertex, is a patch edge).
    fn moves(&self, pair: usize, cur: Vertex, used: Bits, budget: usize) -> Vec<(Vertex, bool)> {
        let t = self.prep.pairs[pair].1;
        let free = |v: Vertex| v == t || used >> v & 1 == 0;
        let mut out: Vec<(Vertex, bool)> =
            self.prep.graph.neighbors(cur).iter().filter(|&&w| free(w)).map(|&w| (w, false)).collect();
        out.sort_unstable();
        out.dedup();
        if budget > 0 && self.prep.on_boundary(cur) {
            for &b in &self.prep.boundary {
                if b != cur && free(b) && !self.prep.graph.has_edge(cur, b) {
                    out.push((b, true));
                }
            }
        }
        out
    }

    fn route(&mut self, pair: usize, cur: Vertex, used: Bits, patch: &mut Vec<(Vertex, Vertex)>, budget: usize) -> bool {
        let k = self.prep.k();
        if cur == self.prep.pairs[pair].1 {
            if pair + 1 == k {
                return true;
            }
            return self.route(pair + 1, self.prep.pairs[pair + 1].0, used, patch, budget);
        }
        match self.lower_bound(pair, cur, used) {
            Some(lb) if lb <= budget => {}
            _ => return false,
        }
        let mut key_patch = patch.clone();
        key_patch.sort_unstable();
        let key = (pair, cur, used, key_patch, budget);
        if self.failed.contains(&key) {
            return false;
        }
        for (w, is_patch) in self.moves(pair, cur, used, budget) {
            if self.step(pair, cur, w, is_patch, used, patch, budget) {
                return true;
            }
        }
        self.failed.insert(key);
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &mut self,
        pair: usize,
        cur: Vertex,
        w: Vertex,
        is_patch: bool,
        used: Bits,
        patch: &mut Vec<(Vertex, Vertex)>,
        budget: usize,
    ) -> bool {
        if is_patch {
            patch.push((cur.min(w), cur.max(w)));
            let ok = self.can_place(patch) && self.route(pair, w, used | 1 << w, patch, budget - 1);
            if !ok {
                patch.pop();
            }
            ok
        } else {
            self.route(pair, w, used | 1 << w, patch, budget)
        }
    }
}

/// Iterative deepening over the patch size; the first size with a routing wins.
fn routing_search(prep: &Prepared, bound: usize) -> Result<Option<Vec<(Vertex, Vertex)>>, SolveError> {
    if prep.n() > Bits::BITS as usize {
        return Err(SolveError::Unsupported(format!("{} vertices, at most {} supported", prep.n(), Bits::BITS)));
    }
    let terminals: Bits = prep.pairs.iter().fold(0, |b, &(s, t)| b | 1 << s | 1 << t);
    let (s0, _) = prep.pairs[0];
    for size in 0..=bound {
        let root = Router::new(prep);
        let first = root.moves(0, s0, terminals, size);
        if root.lower_bound(0, s0, terminals).is_none_or(|lb| lb > size) {
            continue;
        }
        let hit = first.par_iter().find_map_first(|&(w, is_patch)| {
            let mut r = Router::new(prep);
            let mut patch = Vec::new();
            if r.step(0, s0, w, is_patch, terminals, &mut patch, size) {
                Some(patch)
            } else {
                None
            }
        });
        if let Some(mut p) = hit {
            p.sort_unstable();
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Every linear forest on boundary vertices in size order, routed by DP and placed.
fn universe_search(prep: &Prepared, bound: usize) -> Result<Option<Vec<(Vertex, Vertex)>>, SolveError> {
    let shapes = linear_forest_shapes(bound);
    for size in 0..=bound {
        let mut seen: HashSet<Vec<(Vertex, Vertex)>> = HashSet::new();
        for shape in shapes.iter().filter(|s| s.len() == size) {
            let m = shape.iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
            let mut found = None;
            injective_maps(m, &prep.boundary, &mut |img| {
                let mut edges: Vec<(Vertex, Vertex)> = shape
                    .iter()
                    .map(|&(a, b)| (img[a].min(img[b]), img[a].max(img[b])))
                    .collect();
                edges.sort_unstable();
                if edges.iter().any(|&(u, v)| prep.graph.has_edge(u, v)) || !seen.insert(edges.clone()) {
                    return false;
                }
                let Ok(inst) = DpInstance::new(union_graph(prep, &edges), prep.pairs.clone()) else { return false };
                if matches!(solve_dp(&inst), Ok(Some(_))) && place_edges(prep, &edges).is_some() {
                    found = Some(edges);
                    return true;
                }
                false
            });
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

/// Calls `f` on every injective map of 0..m into `pool` until it returns true.
pub(crate) fn injective_maps(m: usize, pool: &[Vertex], f: &mut dyn FnMut(&[Vertex]) -> bool) {
    fn rec(m: usize, pool: &[Vertex], cur: &mut Vec<Vertex>, f: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if cur.len() == m {
            return f(cur);
        }
        for &v in pool {
            if !cur.contains(&v) {
                cur.push(v);
                if rec(m, pool, cur, f) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    rec(m, pool, &mut Vec::new(), f);
}
