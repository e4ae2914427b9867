//! PDPC instances: the region of allowed edges given by its holes, instance
//! validation with boundary padding, and the inactive-hole reduction.

use std::collections::{BTreeMap, BTreeSet};

use crate::embed::{walk_embedding, CactusBoundary, EmbeddedGraph, Walk};
use crate::graph::{biconnected_components, Graph, Vertex};

/// One weakly connected component of the complement of the region: its boundary
/// walk (region on the left, cut vertices repeated) and the vertices of graph
/// components lying strictly inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    pub walk: Vec<Vertex>,
    pub inside: Vec<Vertex>,
}

impl Hole {
    pub fn new(walk: Vec<Vertex>) -> Self {
        Hole { walk, inside: Vec::new() }
    }

    pub fn cactus(&self, n: usize) -> Result<CactusBoundary, String> {
        CactusBoundary::from_walk(n, &self.walk).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterRegion {
    pub holes: Vec<Hole>,
}

impl OuterRegion {
    pub fn boundary_vertices(&self) -> BTreeSet<Vertex> {
        self.holes.iter().flat_map(|h| h.walk.iter().copied()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdpcInstance {
    pub g: EmbeddedGraph,
    pub region: OuterRegion,
    pub ell: usize,
}

/// A corner of the region: position `pos` of the walk of hole `hole`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub hole: usize,
    pub pos: usize,
}

/// A validated instance with everything the solvers need precomputed.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub graph: Graph,
    pub pairs: Vec<(Vertex, Vertex)>,
    pub walks: Vec<Vec<Vertex>>,
    /// walks after padding; entries `>= n` are padding vertices
    pub padded: Vec<Vec<Vertex>>,
    /// padded position of every original walk position
    pub padded_pos: Vec<Vec<usize>>,
    /// corners of every vertex, in walk order
    pub corners: Vec<Vec<Corner>>,
    pub hole_of: Vec<Option<usize>>,
    /// real boundary vertices in increasing order
    pub boundary: Vec<Vertex>,
    /// per hole: does its closure contain a terminal
    pub active: Vec<bool>,
    pub ell: usize,
}

impl Prepared {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_terminal(&self, v: Vertex) -> bool {
        self.pairs.iter().any(|&(s, t)| s == v || t == v)
    }

    pub fn on_boundary(&self, v: Vertex) -> bool {
        self.hole_of[v].is_some()
    }

    pub fn lambda(&self) -> usize {
        self.walks.len()
    }

    pub fn vertex_at(&self, c: Corner) -> Vertex {
        self.walks[c.hole][c.pos]
    }
}

/// Positions whose vertices interleave as x..y..x..y along a cyclic sequence.
pub(crate) fn find_interleaving<T: Ord + Copy>(seq: &[T]) -> Option<(T, T)> {
    let mut pos: BTreeMap<T, Vec<usize>> = BTreeMap::new();
    for (i, &x) in seq.iter().enumerate() {
        pos.entry(x).or_default().push(i);
    }
    let repeated: Vec<(&T, &Vec<usize>)> = pos.iter().filter(|(_, p)| p.len() > 1).collect();
    for (i, &(x, px)) in repeated.iter().enumerate() {
        for &(y, py) in &repeated[i + 1..] {
            // arcs between consecutive occurrences of x; all of y must share one arc
            let arc = |p: usize| px.iter().filter(|&&q| q < p).count() % px.len();
            let first = arc(py[0]);
            if py.iter().any(|&p| arc(p) != first) {
                return Some((*x, *y));
            }
        }
    }
    None
}

/// Walk matching: is `occ` a cyclic subsequence of `face` (same direction), allowing
/// an occurrence to reuse the position of the previous one?
fn cyclic_weak_subsequence(occ: &[Vertex], face: &[Vertex]) -> bool {
    let len = face.len();
    if occ.is_empty() {
        return true;
    }
    'start: for s in 0..len {
        if face[s] != occ[0] {
            continue;
        }
        let mut p = s;
        for &x in &occ[1..] {
            while face[p % len] != x {
                p += 1;
                if p >= s + len {
                    continue 'start;
                }
            }
        }
        return true;
    }
    false
}

/// Validates the instance and builds the prepared form. All problems found are
/// reported; structural problems stop the later checks.
pub fn validate_instance(inst: &PdpcInstance) -> Result<Prepared, Vec<String>> {
    let g = &inst.g;
    let n = g.n();
    let mut errs = Vec::new();
    let pairs = g.terminals().to_vec();
    if pairs.is_empty() {
        errs.push("no terminal pairs".to_string());
    }
    for &(s, t) in &pairs {
        if s == t {
            errs.push(format!("terminal pair ({s},{t}) has equal ends"));
        }
    }
    let holes = &inst.region.holes;
    if holes.is_empty() {
        errs.push("region has no holes".to_string());
    }
    let mut hole_of: Vec<Option<usize>> = vec![None; n];
    for (h, hole) in holes.iter().enumerate() {
        if hole.walk.is_empty() {
            errs.push(format!("hole {h} has an empty boundary walk"));
            continue;
        }
        let mut ok = true;
        for &v in &hole.walk {
            if v >= n {
                errs.push(format!("unknown boundary vertex {v} in hole {h}"));
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let w = &hole.walk;
        if w.len() > 1 && (0..w.len()).any(|i| w[i] == w[(i + 1) % w.len()]) {
            errs.push(format!("hole {h} repeats a vertex on consecutive walk positions"));
            continue;
        }
        if let Some((x, y)) = find_interleaving(w) {
            errs.push(format!("hole {h} is not a cactus walk: cut vertices {x} and {y} interleave"));
            continue;
        }
        for &v in w {
            match hole_of[v] {
                Some(o) if o != h => errs.push(format!("vertex {v} lies on holes {o} and {h}")),
                _ => hole_of[v] = Some(h),
            }
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    // components against holes
    let comps = g.component_count();
    let mut comp_hole: Vec<Option<usize>> = vec![None; comps];
    let mut comp_inside: Vec<Option<usize>> = vec![None; comps];
    for v in 0..n {
        if let Some(h) = hole_of[v] {
            let c = g.component_of(v);
            match comp_hole[c] {
                Some(o) if o != h => {
                    errs.push(format!("component containing vertex {v} touches holes {o} and {h}"));
                }
                _ => comp_hole[c] = Some(h),
            }
        }
    }
    for (h, hole) in holes.iter().enumerate() {
        for &v in &hole.inside {
            if v >= n {
                errs.push(format!("unknown inside vertex {v} in hole {h}"));
                continue;
            }
            let c = g.component_of(v);
            if comp_hole[c].is_some() {
                errs.push(format!("inside vertex {v} of hole {h} belongs to a component touching the boundary"));
            }
            match comp_inside[c] {
                Some(o) if o != h => errs.push(format!("component of vertex {v} is inside holes {o} and {h}")),
                _ => comp_inside[c] = Some(h),
            }
        }
    }
    for c in 0..comps {
        if comp_hole[c].is_none() && comp_inside[c].is_none() {
            let v = g.component_vertices(c)[0];
            errs.push(format!("component containing vertex {v} is not enclosed by any hole"));
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    // the region lies in a single face of g: every touching component meets the
    // boundary in the order of one of its face walks
    let faces = g.trace_faces();
    let mut comp_walks: Vec<Vec<(usize, Vec<Vertex>)>> = vec![Vec::new(); comps];
    for f in &faces {
        for (w, order) in f.walks.iter().zip(g.boundary_orders(f)) {
            let c = match w {
                Walk::Darts(ds) => g.component_of(g.tail(ds[0])),
                Walk::Vertex(v) => g.component_of(*v),
            };
            comp_walks[c].push((f.id, order));
        }
    }
    let mut common: Option<BTreeSet<usize>> = None;
    for (h, hole) in holes.iter().enumerate() {
        let seq: Vec<usize> = hole.walk.iter().map(|&v| g.component_of(v)).collect();
        if let Some((a, b)) = find_interleaving(&seq) {
            let (va, vb) = (g.component_vertices(a)[0], g.component_vertices(b)[0]);
            errs.push(format!("hole {h} alternates between the components of {va} and {vb}"));
            continue;
        }
        let touching: BTreeSet<usize> = seq.iter().copied().collect();
        for c in touching {
            let occ: Vec<Vertex> = hole.walk.iter().copied().filter(|&v| g.component_of(v) == c).collect();
            let fs: BTreeSet<usize> = comp_walks[c]
                .iter()
                .filter(|(_, order)| cyclic_weak_subsequence(&occ, order))
                .map(|(f, _)| *f)
                .collect();
            if fs.is_empty() {
                errs.push(format!(
                    "hole {h} visits the component of vertex {} out of its face order",
                    g.component_vertices(c)[0]
                ));
                continue;
            }
            common = Some(match common {
                None => fs,
                Some(prev) => prev.intersection(&fs).copied().collect(),
            });
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    if common.as_ref().is_some_and(|s| s.is_empty()) {
        return Err(vec!["boundary walks do not lie in a common face of the graph".to_string()]);
    }
    let walks: Vec<Vec<Vertex>> = holes.iter().map(|h| h.walk.clone()).collect();
    let (padded, padded_pos) = pad_walks(n, &walks);
    let mut corners = vec![Vec::new(); n];
    for (h, w) in walks.iter().enumerate() {
        for (p, &v) in w.iter().enumerate() {
            corners[v].push(Corner { hole: h, pos: p });
        }
    }
    let boundary: Vec<Vertex> = (0..n).filter(|&v| hole_of[v].is_some()).collect();
    let terminal_comps: BTreeSet<usize> = pairs.iter().flat_map(|&(s, t)| [g.component_of(s), g.component_of(t)]).collect();
    let active = (0..holes.len())
        .map(|h| terminal_comps.iter().any(|&c| comp_hole[c] == Some(h) || comp_inside[c] == Some(h)))
        .collect();
    for (h, w) in padded.iter().enumerate() {
        // padding must leave a proper cactus
        let total = n + padded.iter().flatten().filter(|&&v| v >= n).count();
        let cb = CactusBoundary::from_walk(total, w).map_err(|e| vec![format!("hole {h}: {e}")])?;
        cb.validate().map_err(|e| vec![format!("hole {h}: {e}")])?;
    }
    Ok(Prepared {
        graph: g.abstract_graph(),
        pairs,
        walks,
        padded,
        padded_pos,
        corners,
        hole_of,
        boundary,
        active,
        ell: inst.ell,
    })
}

/// Report form of [`validate_instance`].
pub fn check_instance(inst: &PdpcInstance) -> (bool, Vec<String>) {
    match validate_instance(inst) {
        Ok(_) => (true, Vec::new()),
        Err(e) => (false, e),
    }
}

/// Pads every lobe (block of the walk) with fewer than three vertices with new
/// isolated vertices numbered from `n` up. Padding goes into the first walk step of
/// the lobe. Returns the padded walks and the new position of each old position.
pub fn pad_walks(n: usize, walks: &[Vec<Vertex>]) -> (Vec<Vec<Vertex>>, Vec<Vec<usize>>) {
    let mut next = n;
    let mut out = Vec::new();
    let mut positions = Vec::new();
    for w in walks {
        let len = w.len();
        let steps: Vec<(Vertex, Vertex)> = (0..len).map(|i| (w[i], w[(i + 1) % len])).collect();
        let mut insert = vec![0usize; len];
        for block in biconnected_components(n.max(w.iter().max().map_or(0, |m| m + 1)), &steps) {
            let verts: BTreeSet<Vertex> = block.iter().flat_map(|&e| [steps[e].0, steps[e].1]).collect();
            if verts.len() < 3 {
                insert[block[0]] += 3 - verts.len();
            }
        }
        let mut pw = Vec::new();
        let mut pp = Vec::new();
        for i in 0..len {
            pp.push(pw.len());
            pw.push(w[i]);
            for _ in 0..insert[i] {
                pw.push(next);
                next += 1;
            }
        }
        out.push(pw);
        positions.push(pp);
    }
    (out, positions)
}

/// Outcome of dropping holes whose closure holds no terminal.
#[derive(Clone, Debug)]
pub struct ActiveReduction {
    pub instance: PdpcInstance,
    /// old vertex -> new vertex
    pub vertex_map: Vec<Option<Vertex>>,
    /// new vertex -> old vertex
    pub inverse: Vec<Vertex>,
    /// new hole -> old hole
    pub kept_holes: Vec<usize>,
}

/// Keeps only the holes whose closure contains a terminal, together with the graph
/// parts inside them.
pub fn reduce_active(inst: &PdpcInstance) -> Result<ActiveReduction, Vec<String>> {
    let prep = validate_instance(inst)?;
    let g = &inst.g;
    let kept_holes: Vec<usize> = (0..prep.lambda()).filter(|&h| prep.active[h]).collect();
    if kept_holes.is_empty() {
        return Err(vec!["no active hole: every terminal lies outside all holes".to_string()]);
    }
    let mut keep = vec![false; g.component_count()];
    for &h in &kept_holes {
        for &v in inst.region.holes[h].walk.iter().chain(&inst.region.holes[h].inside) {
            keep[g.component_of(v)] = true;
        }
    }
    let (ng, map) = g.restrict_components(&keep);
    let mut inverse = vec![0; ng.n()];
    for (old, m) in map.iter().enumerate() {
        if let Some(v) = m {
            inverse[*v] = old;
        }
    }
    let holes = kept_holes
        .iter()
        .map(|&h| {
            let hole = &inst.region.holes[h];
            Hole {
                walk: hole.walk.iter().map(|&v| map[v].unwrap()).collect(),
                inside: hole.inside.iter().map(|&v| map[v].unwrap()).collect(),
            }
        })
        .collect();
    Ok(ActiveReduction {
        instance: PdpcInstance { g: ng, region: OuterRegion { holes }, ell: inst.ell },
        vertex_map: map,
        inverse,
        kept_holes,
    })
}

/// Planar drawing sanity for a walk: the boundary graph of one hole embeds.
pub fn walk_is_cactus(n: usize, walk: &[Vertex]) -> bool {
    find_interleaving(walk).is_none() && walk_embedding(n, &[walk.to_vec()], &[]).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// edgeless graph on n vertices, one hole through `walk`
    fn edgeless(n: usize, walk: Vec<Vertex>, pairs: Vec<(Vertex, Vertex)>) -> PdpcInstance {
        let g = EmbeddedGraph::new(n, vec![], vec![vec![]; n]).unwrap().with_terminals(pairs).unwrap();
        PdpcInstance { g, region: OuterRegion { holes: vec![Hole::new(walk)] }, ell: 1 }
    }

    #[test]
    fn interleaving_detection() {
        assert!(find_interleaving(&[0, 1, 0, 1]).is_some());
        assert!(find_interleaving(&[0, 1, 0, 2]).is_none());
        assert!(find_interleaving(&[0, 1, 2, 1, 0, 3]).is_none());
        assert!(find_interleaving(&[0, 1, 2, 0, 1, 2]).is_some());
    }

    #[test]
    fn weak_subsequence() {
        assert!(cyclic_weak_subsequence(&[2, 0], &[0, 1, 2]));
        assert!(!cyclic_weak_subsequence(&[2, 1, 0, 1], &[0, 1, 2]));
        assert!(cyclic_weak_subsequence(&[1, 1], &[0, 1, 2, 1]));
        assert!(cyclic_weak_subsequence(&[0, 0], &[0, 1]));
    }

    #[test]
    fn unknown_boundary_vertex() {
        let inst = edgeless(3, vec![0, 1, 7], vec![(0, 1)]);
        let errs = validate_instance(&inst).unwrap_err();
        assert!(errs[0].contains("unknown boundary vertex"));
    }

    #[test]
    fn two_vertex_hole_is_padded() {
        let inst = edgeless(2, vec![0, 1], vec![(0, 1)]);
        let p = validate_instance(&inst).unwrap();
        assert_eq!(p.padded, vec![vec![0, 2, 1]]);
        let one = edgeless(1, vec![0], vec![]);
        assert!(validate_instance(&one).is_err());
    }

    #[test]
    fn padding_per_lobe() {
        let (p, pos) = pad_walks(3, &[vec![0, 1, 0, 2]]);
        assert_eq!(p, vec![vec![0, 3, 1, 0, 4, 2]]);
        assert_eq!(pos, vec![vec![0, 2, 3, 5]]);
        let (p, _) = pad_walks(1, &[vec![0]]);
        assert_eq!(p, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn unenclosed_component_rejected() {
        let g = EmbeddedGraph::new(3, vec![], vec![vec![]; 3]).unwrap().with_terminals(vec![(0, 1)]).unwrap();
        let inst = PdpcInstance { g, region: OuterRegion { holes: vec![Hole::new(vec![0, 1])] }, ell: 0 };
        let errs = validate_instance(&inst).unwrap_err();
        assert!(errs[0].contains("not enclosed"));
    }

    #[test]
    fn face_order_respected() {
        // path 0-1-2 visited as 0,2,1 with region on the left: face walk is 0,1,2,1
        let g = EmbeddedGraph::from_neighbor_order(&[vec![1], vec![0, 2], vec![1]])
            .unwrap()
            .with_terminals(vec![(0, 2)])
            .unwrap();
        let ok = PdpcInstance { g: g.clone(), region: OuterRegion { holes: vec![Hole::new(vec![0, 1, 2])] }, ell: 0 };
        assert!(validate_instance(&ok).is_ok());
        let bad = PdpcInstance { g, region: OuterRegion { holes: vec![Hole::new(vec![0, 2, 1, 2])] }, ell: 0 };
        assert!(validate_instance(&bad).is_err());
    }

    #[test]
    fn inactive_hole_removed() {
        let g = EmbeddedGraph::from_neighbor_order(&[vec![], vec![], vec![4], vec![], vec![2]])
            .unwrap()
            .with_terminals(vec![(0, 1)])
            .unwrap();
        let region = OuterRegion { holes: vec![Hole::new(vec![0, 1, 3]), Hole::new(vec![2, 4])] };
        let inst = PdpcInstance { g, region, ell: 1 };
        let red = reduce_active(&inst).unwrap();
        assert_eq!(red.kept_holes, vec![0]);
        assert_eq!(red.instance.g.n(), 3);
        assert_eq!(red.instance.region.holes[0].walk, vec![0, 1, 2]);
        let again = reduce_active(&red.instance).unwrap();
        assert_eq!(again.instance, red.instance);
    }
}
