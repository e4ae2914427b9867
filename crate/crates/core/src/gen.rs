//! Seeded instance generators and small fixed families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::EmbeddedGraph;
use crate::graph::Vertex;
use crate::paths::DpSolution;
use crate::placement::{place_edges, PatchPlacement};
use crate::region::{validate_instance, Hole, OuterRegion, PdpcInstance, Prepared};

/// Assembles an instance from paths laid along hole boundaries.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    neighbors: Vec<Vec<Vertex>>,
    holes: Vec<(Vec<Vertex>, Vec<Vertex>)>,
}

impl Builder {
    pub fn new(holes: usize) -> Self {
        Builder { neighbors: Vec::new(), holes: vec![(Vec::new(), Vec::new()); holes] }
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    fn path(&mut self, len: usize) -> Vec<Vertex> {
        let start = self.n();
        let vs: Vec<Vertex> = (start..start + len).collect();
        for (i, _) in vs.iter().enumerate() {
            let mut ns = Vec::new();
            if i > 0 {
                ns.push(start + i - 1);
            }
            if i + 1 < len {
                ns.push(start + i + 1);
            }
            self.neighbors.push(ns);
        }
        vs
    }

    /// A path of `len` vertices whose vertices at positions `on` (increasing)
    /// appear consecutively on the walk of `hole`.
    pub fn path_on(&mut self, hole: usize, len: usize, on: &[usize]) -> Vec<Vertex> {
        let vs = self.path(len);
        self.holes[hole].0.extend(on.iter().map(|&i| vs[i]));
        vs
    }

    /// A path strictly inside `hole`.
    pub fn path_inside(&mut self, hole: usize, len: usize) -> Vec<Vertex> {
        let vs = self.path(len);
        self.holes[hole].1.extend(&vs);
        vs
    }

    /// A path not yet placed on any walk.
    pub fn path_off(&mut self, len: usize) -> Vec<Vertex> {
        self.path(len)
    }

    /// Appends a vertex to the walk of `hole`.
    pub fn push_walk(&mut self, hole: usize, v: Vertex) {
        self.holes[hole].0.push(v);
    }

    /// Appends an already present vertex to the walk again (a cut vertex).
    pub fn revisit(&mut self, hole: usize, v: Vertex) {
        self.holes[hole].0.push(v);
    }

    pub fn finish(&self, pairs: Vec<(Vertex, Vertex)>, ell: usize) -> Option<PdpcInstance> {
        let g = EmbeddedGraph::from_neighbor_order(&self.neighbors).ok()?.with_terminals(pairs).ok()?;
        let holes = self.holes.iter().map(|(w, i)| Hole { walk: w.clone(), inside: i.clone() }).collect();
        let inst = PdpcInstance { g, region: OuterRegion { holes }, ell };
        validate_instance(&inst).ok().map(|_| inst)
    }
}

pub const FAMILIES: [&str; 4] = ["cycle-terminals", "two-holes", "inactive-padding", "random"];

#[derive(Clone, Debug)]
pub struct GenParams {
    pub k: usize,
    pub ell: usize,
    /// boundary vertices per hole, at least 1
    pub size: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { k: 2, ell: 4, size: 5 }
    }
}

pub fn generate(family: &str, seed: u64, p: &GenParams) -> Option<PdpcInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        "cycle-terminals" => Some(cycle_terminals(&mut rng, p)),
        "two-holes" => Some(two_holes(&mut rng, p)),
        "inactive-padding" => Some(inactive_padding(&mut rng, p, 1 + (seed % 3) as usize)),
        "random" => Some(random_instance(&mut rng, p)),
        _ => None,
    }
}

fn pick_pairs(rng: &mut ChaCha8Rng, pool: &[Vertex], k: usize) -> Vec<(Vertex, Vertex)> {
    let mut vs = pool.to_vec();
    vs.shuffle(rng);
    vs.truncate(2 * k);
    vs.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect()
}

/// One hole through lone vertices, terminals on it.
pub fn cycle_terminals(rng: &mut ChaCha8Rng, p: &GenParams) -> PdpcInstance {
    let size = p.size.max(2 * p.k);
    let mut b = Builder::new(1);
    for _ in 0..size {
        b.path_on(0, 1, &[0]);
    }
    let all: Vec<Vertex> = (0..b.n()).collect();
    let pairs = pick_pairs(rng, &all, p.k);
    b.finish(pairs, p.ell).expect("lone vertices on one hole form a valid instance")
}

/// Two holes of lone vertices, each pair split between them when possible.
pub fn two_holes(rng: &mut ChaCha8Rng, p: &GenParams) -> PdpcInstance {
    let size = p.size.max(p.k);
    let mut b = Builder::new(2);
    let mut sides = [Vec::new(), Vec::new()];
    for (h, side) in sides.iter_mut().enumerate() {
        for _ in 0..size {
            side.extend(b.path_on(h, 1, &[0]));
        }
    }
    sides[0].shuffle(rng);
    sides[1].shuffle(rng);
    let pairs = (0..p.k).map(|i| (sides[0][i], sides[1][i])).collect();
    b.finish(pairs, p.ell).expect("lone vertices on two holes form a valid instance")
}

/// Random paths along one or two holes, some vertices only in the hole, terminals anywhere
/// on the graph parts. Retries until the instance validates.
pub fn random_instance(rng: &mut ChaCha8Rng, p: &GenParams) -> PdpcInstance {
    loop {
        let holes = rng.gen_range(1..=2);
        let mut b = Builder::new(holes);
        let mut pool = Vec::new();
        for h in 0..holes {
            let mut budget = rng.gen_range(1..=p.size.max(1));
            let mut comps: Vec<(usize, Vec<usize>)> = Vec::new();
            while budget > 0 {
                let len = rng.gen_range(1..=3usize);
                let mut on: Vec<usize> = (0..len).filter(|_| rng.gen_bool(0.6)).collect();
                if on.is_empty() {
                    on.push(rng.gen_range(0..len));
                }
                on.truncate(budget);
                budget -= on.len();
                comps.push((len, on));
            }
            comps.shuffle(rng);
            for (len, on) in comps {
                let on = if rng.gen_bool(0.5) { on } else { on.into_iter().rev().map(|i| len - 1 - i).collect() };
                pool.extend(b.path_on(h, len, &on));
            }
            if rng.gen_bool(0.15) {
                pool.extend(b.path_inside(h, rng.gen_range(1..=2)));
            }
        }
        if pool.len() < 2 * p.k {
            continue;
        }
        let pairs = pick_pairs(rng, &pool, p.k);
        if let Some(inst) = b.finish(pairs, rng.gen_range(0..=p.ell)) {
            return inst;
        }
    }
}

/// A random instance plus `extra` holes that carry no terminal.
pub fn inactive_padding(rng: &mut ChaCha8Rng, p: &GenParams, extra: usize) -> PdpcInstance {
    loop {
        let base = random_instance(rng, p);
        let mut b = Builder::new(base.region.holes.len() + extra);
        // rebuild the base parts in order so vertex ids are kept
        let g = &base.g;
        b.neighbors = (0..g.n()).map(|v| g.abstract_graph().neighbors(v).to_vec()).collect();
        for (h, hole) in base.region.holes.iter().enumerate() {
            b.holes[h] = (hole.walk.clone(), hole.inside.clone());
        }
        for h in base.region.holes.len()..b.holes.len() {
            for _ in 0..rng.gen_range(1..=3) {
                let len = rng.gen_range(1..=3usize);
                let on: Vec<usize> = if rng.gen_bool(0.5) { vec![0] } else { (0..len).collect() };
                b.path_on(h, len, &on);
            }
        }
        if let Some(inst) = b.finish(g.terminals().to_vec(), base.ell) {
            return inst;
        }
    }
}

/// Piece of a hole boundary in [`exhaustive_family`].
#[derive(Copy, Clone, Debug)]
enum Piece {
    Lone,
    /// a two-vertex path with both ends on the walk
    Edge,
    /// a three-vertex path touching the walk at its ends
    Bent,
    /// the first vertex of the hole again
    Revisit,
}

/// Every instance of a small fixed class: edgeless and sparse graphs on at most six
/// boundary vertices in one or two holes (one layout with a cut vertex), every
/// choice of one or two terminal pairs and budgets 0..=3.
pub fn exhaustive_family() -> Vec<PdpcInstance> {
    use Piece::*;
    let layouts: Vec<Vec<Vec<Piece>>> = vec![
        vec![vec![Lone; 4]],
        vec![vec![Lone; 5]],
        vec![vec![Lone; 6]],
        vec![vec![Lone, Lone], vec![Lone, Lone, Lone]],
        vec![vec![Lone; 3], vec![Lone; 3]],
        vec![vec![Edge, Lone, Lone]],
        vec![vec![Edge, Lone, Edge]],
        vec![vec![Bent, Lone, Lone]],
        vec![vec![Edge, Lone], vec![Lone, Lone]],
        vec![vec![Lone, Lone, Lone, Revisit, Lone, Lone]],
    ];
    let mut out = Vec::new();
    for layout in layouts {
        let mut b = Builder::new(layout.len());
        for (h, pieces) in layout.iter().enumerate() {
            let mut first = None;
            for piece in pieces {
                let vs = match piece {
                    Lone => b.path_on(h, 1, &[0]),
                    Edge => b.path_on(h, 2, &[0, 1]),
                    Bent => b.path_on(h, 3, &[0, 2]),
                    Revisit => {
                        b.revisit(h, first.expect("revisit after a vertex"));
                        continue;
                    }
                };
                first.get_or_insert(vs[0]);
            }
        }
        let n = b.n();
        for k in 1..=2 {
            for pairs in pair_choices(n, k) {
                for ell in 0..=3 {
                    if let Some(inst) = b.finish(pairs.clone(), ell) {
                        out.push(inst);
                    }
                }
            }
        }
    }
    out
}

/// k vertex-disjoint pairs from 0..n, unordered within and across pairs.
fn pair_choices(n: usize, k: usize) -> Vec<Vec<(Vertex, Vertex)>> {
    let all: Vec<(Vertex, Vertex)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    if k == 1 {
        return all.into_iter().map(|p| vec![p]).collect();
    }
    for (i, &p) in all.iter().enumerate() {
        for &q in &all[i + 1..] {
            if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                out.push(vec![p, q]);
            }
        }
    }
    out
}

/// Three holes with graph paths along them and three pairs that must cross between
/// holes, one hole a cactus with a cut vertex.
pub fn figure_two_like() -> PdpcInstance {
    let mut b = Builder::new(3);
    // hole 0: a path touching the boundary at both ends, and a lone vertex
    let a = b.path_on(0, 4, &[0, 3]);
    let a2 = b.path_on(0, 1, &[0]);
    // hole 1: a cut vertex splitting the walk into two lobes
    let c = b.path_on(1, 1, &[0]);
    let d = b.path_on(1, 2, &[0, 1]);
    b.revisit(1, c[0]);
    let e = b.path_on(1, 1, &[0]);
    // hole 2: a path with its middle vertex on the boundary
    let f = b.path_on(2, 3, &[0, 1, 2]);
    b.path_on(2, 1, &[0]);
    let pairs = vec![(a[1], d[1]), (e[0], f[0]), (f[2], a2[0])];
    b.finish(pairs, 8).expect("figure instance validates")
}

/// One hole crossed by four parallel patch edges that two paths use alternately,
/// so a dual path crosses them reading a, b, a, b; extra lone boundary vertices are
/// sprinkled in. Returns the instance with the striped patch and its paths.
pub fn striped(seed: u64) -> (PdpcInstance, PatchPlacement, DpSolution) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut b = Builder::new(1);
        let p1 = b.path_off(1)[0];
        let py = b.path_off(2);
        let p3 = b.path_off(1)[0];
        let qx = b.path_off(2);
        let q2 = b.path_off(1)[0];
        let q4 = b.path_off(1)[0];
        let (p2, p4, q1, q3) = (py[0], py[1], qx[0], qx[1]);
        let mut walk = vec![p1, p2, p3, p4, q4, q3, q2, q1];
        for _ in 0..rng.gen_range(0..=2) {
            let v = b.path_off(1)[0];
            let at = rng.gen_range(0..=walk.len());
            walk.insert(at, v);
        }
        for v in walk {
            b.push_walk(0, v);
        }
        let Some(inst) = b.finish(vec![(p1, p3), (q2, q4)], 4) else { continue };
        let prep = validate_instance(&inst).expect("finished instances validate");
        let edges = [(p1, q1), (p2, q2), (p3, q3), (p4, q4)];
        let Some(placed) = place_edges(&prep, &edges) else { continue };
        let paths = vec![vec![p1, q1, q3, p3], vec![q2, p2, p4, q4]];
        return (inst, PatchPlacement::new(&prep, &placed), DpSolution { paths });
    }
}

/// A feasible, usually far from minimal, patch with its paths: each pair walks at
/// random, jumping between boundary vertices when the patch stays drawable.
pub fn random_patched_solution(prep: &Prepared, seed: u64, tries: usize) -> Option<(PatchPlacement, DpSolution)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = prep.n();
    'attempt: for _ in 0..tries {
        let mut used = vec![false; n];
        for &(s, t) in &prep.pairs {
            used[s] = true;
            used[t] = true;
        }
        let mut patch: Vec<(Vertex, Vertex)> = Vec::new();
        let mut paths = Vec::new();
        for &(s, t) in &prep.pairs {
            let mut path = vec![s];
            let mut cur = s;
            while cur != t {
                if path.len() > 3 * n {
                    continue 'attempt;
                }
                let mut moves: Vec<(Vertex, bool)> = prep
                    .graph
                    .neighbors(cur)
                    .iter()
                    .filter(|&&w| w == t || !used[w])
                    .map(|&w| (w, false))
                    .collect();
                if prep.on_boundary(cur) {
                    moves.extend(
                        prep.boundary
                            .iter()
                            .filter(|&&w| w != cur && (w == t || !used[w]) && !prep.graph.has_edge(cur, w))
                            .map(|&w| (w, true)),
                    );
                }
                // reaching t early is rarer than wandering
                if moves.len() > 1 && rng.gen_bool(0.7) {
                    moves.retain(|&(w, _)| w != t);
                }
                moves.shuffle(&mut rng);
                let mut moved = false;
                for (w, jump) in moves {
                    if jump {
                        patch.push((cur.min(w), cur.max(w)));
                        if place_edges(prep, &patch).is_none() {
                            patch.pop();
                            continue;
                        }
                    }
                    used[w] = true;
                    path.push(w);
                    cur = w;
                    moved = true;
                    break;
                }
                if !moved {
                    continue 'attempt;
                }
            }
            paths.push(path);
        }
        let placed = place_edges(prep, &patch)?;
        return Some((PatchPlacement::new(prep, &placed), DpSolution { paths }));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_validate() {
        for fam in FAMILIES {
            for seed in 0..20 {
                let inst = generate(fam, seed, &GenParams::default()).unwrap();
                assert!(validate_instance(&inst).is_ok(), "{fam} {seed}");
            }
        }
        assert!(generate("nope", 0, &GenParams::default()).is_none());
    }

    #[test]
    fn generation_is_seeded() {
        let p = GenParams::default();
        assert_eq!(generate("random", 7, &p), generate("random", 7, &p));
    }

    #[test]
    fn inactive_holes_have_no_terminals() {
        let inst = generate("inactive-padding", 4, &GenParams::default()).unwrap();
        let prep = validate_instance(&inst).unwrap();
        assert!(prep.active.iter().any(|&a| !a));
    }

    #[test]
    fn fixed_instances() {
        assert!(!exhaustive_family().is_empty());
        let fig = figure_two_like();
        assert_eq!(fig.region.holes.len(), 3);
        assert_eq!(fig.g.terminals().len(), 3);
    }
}
