//! Patch reduction: dual path graphs, even infixes and shortcut replacement.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::embed::Dart;
use crate::graph::{Graph, Vertex};
use crate::paths::{check_solution, DpInstance, DpSolution};
use crate::placement::{chords_placeable, draw, place_edges, Drawing, PatchEdge, PatchPlacement};
use crate::region::{Corner, Prepared};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("patch is not normalized: {0} (run normalize_patch first)")]
    NotNormalized(String),
    #[error("patch cannot be drawn inside the region")]
    NotPlaceable,
    #[error("solution does not fit the patch: {0}")]
    BadSolution(String),
    #[error("internal: {0}")]
    Internal(String),
}

/// Prefix parity vectors `z_0..z_n`; the first equal pair `(i, i')` by smallest `i`
/// then smallest `i'`. The infix is `w[i..i']`.
pub fn even_infix<T: Ord>(w: &[T]) -> Option<(usize, usize)> {
    let letters: BTreeSet<&T> = w.iter().collect();
    let index: BTreeMap<&T, usize> = letters.into_iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut z = vec![vec![false; index.len()]];
    for x in w {
        let mut next = z.last().unwrap().clone();
        next[index[x]] ^= true;
        z.push(next);
    }
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if z[i] == z[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Dual of the patch inside the region: one vertex per face of holes plus patch
/// that is not a hole, one edge per patch edge, labelled by the path using it.
#[derive(Clone, Debug)]
pub struct DualPathGraph {
    pub faces: usize,
    /// per patch edge: (face left of u->v, face left of v->u, path label)
    pub edges: Vec<(usize, usize, usize)>,
}

impl DualPathGraph {
    pub fn degree(&self, f: usize) -> usize {
        self.edges.iter().filter(|&&(a, b, _)| a == f || b == f).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.faces).map(|f| self.degree(f)).max().unwrap_or(0)
    }
}

/// Up and down ends of each edge of a dual path, in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingString {
    /// faces r_0..r_z
    pub faces: Vec<usize>,
    /// patch edge index of each step
    pub edges: Vec<usize>,
    pub labels: Vec<usize>,
    /// (up, down): the end on the left and on the right when crossing
    pub up_down: Vec<(Vertex, Vertex)>,
}

/// Replacement plan for one all-even crossing string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortcutPlan {
    pub crossing: CrossingString,
    /// (path, tail of e_j, head of e_{j+1}, corners) per shortcut
    pub shortcuts: Vec<(usize, Vertex, Vertex, Corner, Corner)>,
}

struct Context {
    drawing: Drawing,
    face_of: Vec<usize>,
    hole_faces: BTreeSet<usize>,
    /// per patch edge, the path using it and the step index along it
    owner: Vec<(usize, usize)>,
}

fn patch_edges_of_paths(prep: &Prepared, placement: &PatchPlacement, sol: &DpSolution) -> Result<Vec<Option<(usize, usize)>>, ReduceError> {
    let mut owner = vec![None; placement.edges.len()];
    let index: BTreeMap<(Vertex, Vertex), usize> =
        placement.edges.iter().enumerate().map(|(i, e)| ((e.u.min(e.v), e.u.max(e.v)), i)).collect();
    for (q, p) in sol.paths.iter().enumerate() {
        for (j, w) in p.windows(2).enumerate() {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            if prep.graph.has_edge(w[0], w[1]) {
                continue;
            }
            match index.get(&key) {
                Some(&i) => owner[i] = Some((q, j)),
                None => return Err(ReduceError::BadSolution(format!("step {}-{} is neither a graph nor a patch edge", w[0], w[1]))),
            }
        }
    }
    Ok(owner)
}

fn context(prep: &Prepared, placement: &PatchPlacement, sol: &DpSolution) -> Result<Context, ReduceError> {
    let owner = patch_edges_of_paths(prep, placement, sol)?;
    let owner: Vec<(usize, usize)> = owner
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| ReduceError::NotNormalized(format!("patch edge {i} is unused"))))
        .collect::<Result<_, _>>()?;
    let drawing = draw(prep.n(), &prep.walks, &placement.chords()).ok_or(ReduceError::NotPlaceable)?;
    let faces = drawing.graph.trace_faces();
    let face_of = drawing.graph.face_of_darts(&faces);
    let mut hole_faces = BTreeSet::new();
    for (h, w) in prep.walks.iter().enumerate() {
        for p in 0..w.len() {
            hole_faces.insert(face_of[index(drawing.walk_dart(Corner { hole: h, pos: p }).rev())]);
        }
    }
    Ok(Context { drawing, face_of, hole_faces, owner })
}

fn index(d: Dart) -> usize {
    2 * d.edge + d.end as usize
}

impl Context {
    fn sides(&self, i: usize) -> (usize, usize) {
        let d = self.drawing.chord_dart(i, 0);
        (self.face_of[index(d)], self.face_of[index(d.rev())])
    }

    /// face ids of non-hole faces, renumbered densely
    fn dense(&self) -> BTreeMap<usize, usize> {
        let mut all: BTreeSet<usize> = self.face_of.iter().copied().filter(|f| *f != usize::MAX).collect();
        // faces without darts cannot be touched by chords
        all.retain(|f| !self.hole_faces.contains(f));
        all.into_iter().enumerate().map(|(i, f)| (f, i)).collect()
    }
}

/// P* of a normalized patch.
pub fn dual_path_graph(prep: &Prepared, placement: &PatchPlacement, sol: &DpSolution) -> Result<DualPathGraph, ReduceError> {
    let ctx = context(prep, placement, sol)?;
    let dense = ctx.dense();
    let mut edges = Vec::new();
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..placement.edges.len() {
        let (a, b) = ctx.sides(i);
        let (a, b) = (dense[&a], dense[&b]);
        let q = ctx.owner[i].0;
        let touched: BTreeSet<usize> = [a, b].into_iter().collect();
        for f in touched {
            if !seen.insert((f, q)) {
                return Err(ReduceError::NotNormalized(format!("a face meets two edges of path {}", q + 1)));
            }
        }
        edges.push((a, b, q));
    }
    Ok(DualPathGraph { faces: dense.len(), edges })
}

/// Rebuilds a placement for new vertex-level edges, keeping preferred corners when
/// they still draw.
fn replace(prep: &Prepared, edges: Vec<PatchEdge>) -> Result<PatchPlacement, ReduceError> {
    let chords: Vec<(Corner, Corner)> = edges.iter().map(|e| e.chord()).collect();
    if chords_placeable(prep.n(), &prep.walks, &chords) {
        return Ok(PatchPlacement::new(prep, &edges));
    }
    let vs: Vec<(Vertex, Vertex)> = edges.iter().map(|e| (e.u, e.v)).collect();
    match place_edges(prep, &vs) {
        Some(es) => Ok(PatchPlacement::new(prep, &es)),
        None => Err(ReduceError::NotPlaceable),
    }
}

fn union_graph(prep: &Prepared, placement: &PatchPlacement) -> Graph {
    let mut g = prep.graph.clone();
    for e in &placement.edges {
        g.add_edge(e.u, e.v);
    }
    g
}

/// Checks that `sol` solves DP on G plus the patch.
pub fn check_feasible(prep: &Prepared, placement: &PatchPlacement, sol: &DpSolution) -> Result<(), ReduceError> {
    let inst = DpInstance { graph: union_graph(prep, placement), pairs: prep.pairs.clone() };
    check_solution(&inst, sol).map_err(ReduceError::BadSolution)
}

/// Patch edges of the paths (steps that are not graph edges), with corners from
/// `corners_of` or fresh ones.
fn collect_patch(prep: &Prepared, paths: &[Vec<Vertex>], corners_of: &BTreeMap<(Vertex, Vertex), (Corner, Corner)>) -> Vec<PatchEdge> {
    let mut out = Vec::new();
    for p in paths {
        for w in p.windows(2) {
            if prep.graph.has_edge(w[0], w[1]) {
                continue;
            }
            let (u, v) = (w[0].min(w[1]), w[0].max(w[1]));
            let (cu, cv) = corners_of.get(&(u, v)).copied().unwrap_or((prep.corners[u][0], prep.corners[v][0]));
            out.push(PatchEdge { u, v, cu, cv });
        }
    }
    out
}

fn corner_map(placement: &PatchPlacement) -> BTreeMap<(Vertex, Vertex), (Corner, Corner)> {
    placement.edges.iter().map(|e| ((e.u, e.v), (e.cu, e.cv))).collect()
}

/// Drops unused patch edges and shortcuts paths meeting a face twice, until stable.
pub fn normalize_patch(prep: &Prepared, placement: &PatchPlacement, sol: &DpSolution) -> Result<(PatchPlacement, DpSolution), ReduceError> {
    check_feasible(prep, placement, sol)?;
    let mut paths = sol.paths.clone();
    let mut corners = corner_map(placement);
    loop {
        let edges = collect_patch(prep, &paths, &corners);
        let current = replace(prep, edges)?;
        corners = corner_map(&current);
        let ctx = context(prep, &current, &DpSolution { paths: paths.clone() })?;
        // first face, in face order, meeting two edges of one path
        let mut by_face: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for i in 0..current.edges.len() {
            let (a, b) = ctx.sides(i);
            let q = ctx.owner[i].0;
            by_face.entry((a, q)).or_default().push(i);
            if b != a {
                by_face.entry((b, q)).or_default().push(i);
            }
        }
        let hit = by_face.iter().find(|(_, es)| es.len() >= 2).map(|(&(_, q), es)| (q, es.clone()));
        let Some((q, es)) = hit else {
            return Ok((current, DpSolution { paths }));
        };
        // first and last of these edges along the path
        let steps: Vec<usize> = es.iter().map(|&i| ctx.owner[i].1).collect();
        let (j1, j2) = (*steps.iter().min().unwrap(), *steps.iter().max().unwrap());
        let path = &paths[q];
        let (p1, p2) = (path[j1], path[j2 + 1]);
        let e1 = current.edges[es[steps.iter().position(|&s| s == j1).unwrap()]];
        let e2 = current.edges[es[steps.iter().position(|&s| s == j2).unwrap()]];
        let mut np = path[..=j1].to_vec();
        np.extend_from_slice(&path[j2 + 1..]);
        if !prep.graph.has_edge(p1, p2) {
            let (u, v) = (p1.min(p2), p1.max(p2));
            let (c1, c2) = (e1.corner_at(p1), e2.corner_at(p2));
            corners.insert((u, v), if u == p1 { (c1, c2) } else { (c2, c1) });
        }
        paths[q] = np;
    }
}

/// All simple paths of P* as edge sequences starting from a face, in a fixed order.
fn simple_paths(d: &DualPathGraph) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d.faces];
    for (i, &(a, b, _)) in d.edges.iter().enumerate() {
        if a != b {
            inc[a].push((b, i));
            inc[b].push((a, i));
        }
    }
    let mut out = Vec::new();
    for s in 0..d.faces {
        let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![s], vec![])];
        while let Some((fs, es)) = stack.pop() {
            if !es.is_empty() {
                out.push((fs.clone(), es.clone()));
            }
            let u = *fs.last().unwrap();
            for &(w, e) in inc[u].iter().rev() {
                if !fs.contains(&w) {
                    let mut f2 = fs.clone();
                    f2.push(w);
                    let mut e2 = es.clone();
                    e2.push(e);
                    stack.push((f2, e2));
                }
            }
        }
    }
    out
}

/// Shortest dual path whose label string is an even infix of some longer simple path.
pub fn plan_shortcut(prep: &Prepared, placement: &PatchPlacement, sol: &DpSolution) -> Result<Option<ShortcutPlan>, ReduceError> {
    let d = dual_path_graph(prep, placement, sol)?;
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    for (fs, es) in simple_paths(&d) {
        let labels: Vec<usize> = es.iter().map(|&e| d.edges[e].2).collect();
        if let Some((i, j)) = even_infix(&labels) {
            let cand = (j - i, fs[i..=j].to_vec(), es[i..j].to_vec());
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    let Some((_, faces, edges)) = best else { return Ok(None) };
    let ctx = context(prep, placement, sol)?;
    let dense = ctx.dense();
    let labels: Vec<usize> = edges.iter().map(|&e| ctx.owner[e].0).collect();
    let mut up_down = Vec::new();
    for (step, &e) in edges.iter().enumerate() {
        let pe = placement.edges[e];
        let (left, _) = ctx.sides(e);
        // crossing u->v from its left face to its right face: v is on the left
        if dense[&left] == faces[step] {
            up_down.push((pe.v, pe.u));
        } else {
            up_down.push((pe.u, pe.v));
        }
    }
    let crossing = CrossingString { faces, edges: edges.clone(), labels, up_down };
    let mut shortcuts = Vec::new();
    let mut by_path: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in &edges {
        by_path.entry(ctx.owner[e].0).or_default().push(e);
    }
    for (q, mut es) in by_path {
        es.sort_by_key(|&e| ctx.owner[e].1);
        let path = &sol.paths[q];
        for pair in es.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            let tail = path[ctx.owner[a].1];
            let head = path[ctx.owner[b].1 + 1];
            let ca = placement.edges[a].corner_at(tail);
            let cb = placement.edges[b].corner_at(head);
            shortcuts.push((q, tail, head, ca, cb));
        }
    }
    Ok(Some(ShortcutPlan { crossing, shortcuts }))
}

/// One shortcut round on a normalized patch, if any dual path has an even infix.
pub fn reduce_step(prep: &Prepared, placement: &PatchPlacement, sol: &DpSolution) -> Result<Option<(PatchPlacement, DpSolution)>, ReduceError> {
    let Some(plan) = plan_shortcut(prep, placement, sol)? else { return Ok(None) };
    let mut paths = sol.paths.clone();
    let mut corners = corner_map(placement);
    // apply from the back of each path so earlier indices stay valid
    let mut per_path: BTreeMap<usize, Vec<(Vertex, Vertex, Corner, Corner)>> = BTreeMap::new();
    for &(q, t, h, ct, ch) in &plan.shortcuts {
        per_path.entry(q).or_default().push((t, h, ct, ch));
    }
    for (q, cuts) in per_path {
        let mut p = paths[q].clone();
        for &(t, h, ct, ch) in cuts.iter().rev() {
            let i = p.iter().position(|&x| x == t).unwrap();
            let j = p.iter().position(|&x| x == h).unwrap();
            let mut np = p[..=i].to_vec();
            np.extend_from_slice(&p[j..]);
            p = np;
            if !prep.graph.has_edge(t, h) {
                let (u, v) = (t.min(h), t.max(h));
                corners.insert((u, v), if u == t { (ct, ch) } else { (ch, ct) });
            }
        }
        paths[q] = p;
    }
    let edges = collect_patch(prep, &paths, &corners);
    let next = replace(prep, edges).map_err(|_| ReduceError::Internal("shortcut patch cannot be drawn".into()))?;
    let sol2 = DpSolution { paths };
    check_feasible(prep, &next, &sol2).map_err(|e| ReduceError::Internal(format!("shortcut solution invalid: {e}")))?;
    if next.size() >= placement.size() {
        return Err(ReduceError::Internal("shortcut did not shrink the patch".into()));
    }
    Ok(Some((next, sol2)))
}

/// Result of repeated normalization and shortcutting.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub placement: PatchPlacement,
    pub solution: DpSolution,
    /// patch size after each normalization or shortcut round, starting with the input
    pub sizes: Vec<usize>,
}

pub fn reduce_to_fixpoint(prep: &Prepared, placement: &PatchPlacement, sol: &DpSolution) -> Result<Reduction, ReduceError> {
    let mut sizes = vec![placement.size()];
    let (mut cur, mut s) = normalize_patch(prep, placement, sol)?;
    if cur.size() != placement.size() {
        sizes.push(cur.size());
    }
    while let Some((next, s2)) = reduce_step(prep, &cur, &s)? {
        sizes.push(next.size());
        let (n2, s3) = normalize_patch(prep, &next, &s2)?;
        if n2.size() != next.size() {
            sizes.push(n2.size());
        }
        cur = n2;
        s = s3;
    }
    Ok(Reduction { placement: cur, solution: s, sizes })
}
