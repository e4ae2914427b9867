//! Placing patch edges inside the region: corner-exact embeddability, the
//! wheel-pinned planarity test and concrete drawings of holes plus patch.

use std::collections::BTreeMap;

use crate::embed::{Dart, EmbedError, EmbeddedGraph};
use crate::graph::{Graph, Vertex};
use crate::planarity::is_planar;
use crate::region::{pad_walks, Corner, Prepared};

/// A patch edge with the corner used at each end.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatchEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub cu: Corner,
    pub cv: Corner,
}

impl PatchEdge {
    /// Orients so that `u < v`.
    pub fn normalized(self) -> PatchEdge {
        if self.u <= self.v {
            self
        } else {
            PatchEdge { u: self.v, v: self.u, cu: self.cv, cv: self.cu }
        }
    }

    pub fn chord(&self) -> (Corner, Corner) {
        (self.cu, self.cv)
    }

    pub fn corner_at(&self, x: Vertex) -> Corner {
        if x == self.u {
            self.cu
        } else {
            self.cv
        }
    }

    pub fn other(&self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A slot of a cactus walk: a real boundary vertex or the i-th padding vertex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Real(Vertex),
    Pad(usize),
}

/// A concrete patch: its edges with corners and the cactus interface J, one walk
/// per hole (the used corners in walk order, padded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchPlacement {
    pub edges: Vec<PatchEdge>,
    pub cactus: Vec<Vec<Slot>>,
}

impl PatchPlacement {
    pub fn new(prep: &Prepared, edges: &[PatchEdge]) -> PatchPlacement {
        let mut es: Vec<PatchEdge> = edges.iter().map(|e| e.normalized()).collect();
        es.sort();
        let cactus = cactus_of(prep, &es);
        PatchPlacement { edges: es, cactus }
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    pub fn chords(&self) -> Vec<(Corner, Corner)> {
        self.edges.iter().map(|e| e.chord()).collect()
    }
}

/// The cactus J of a patch: per hole, the used corners in walk order, padded so
/// that every lobe has at least three vertices.
pub fn cactus_of(prep: &Prepared, edges: &[PatchEdge]) -> Vec<Vec<Slot>> {
    let mut used: Vec<Vec<bool>> = prep.walks.iter().map(|w| vec![false; w.len()]).collect();
    for e in edges {
        used[e.cu.hole][e.cu.pos] = true;
        used[e.cv.hole][e.cv.pos] = true;
    }
    let n = prep.n();
    let subs: Vec<Vec<Vertex>> = prep
        .walks
        .iter()
        .enumerate()
        .map(|(h, w)| (0..w.len()).filter(|&p| used[h][p]).map(|p| w[p]).collect())
        .collect();
    let (padded, _) = pad_walks(n, &subs);
    let mut next_pad = 0;
    padded
        .into_iter()
        .map(|w| {
            let w = if w.is_empty() { vec![usize::MAX; 3] } else { w };
            w.into_iter()
                .map(|x| {
                    if x < n {
                        Slot::Real(x)
                    } else {
                        next_pad += 1;
                        Slot::Pad(next_pad - 1)
                    }
                })
                .collect()
        })
        .collect()
}

/// Ends of chords at a corner in counter-clockwise order, as (chord index, end).
pub type CornerOrders = BTreeMap<Corner, Vec<(usize, u8)>>;

/// Embedding of the holes `holes` (indices into `walks`) with the given chords and
/// corner orders. Walk edges come first, hole by hole; chord `i` is edge
/// `base_chords + i` where only chords listed in `chords` between those holes appear.
fn build(
    n: usize,
    walks: &[Vec<Vertex>],
    holes: &[usize],
    chords: &[(usize, (Corner, Corner))],
    orders: &CornerOrders,
) -> Result<(EmbeddedGraph, Vec<usize>, usize), EmbedError> {
    let mut edges = Vec::new();
    let mut base = vec![usize::MAX; walks.len()];
    for &h in holes {
        base[h] = edges.len();
        let w = &walks[h];
        for i in 0..w.len() {
            edges.push((w[i], w[(i + 1) % w.len()]));
        }
    }
    let chord_base = edges.len();
    let mut local = BTreeMap::new();
    for (j, &(i, (a, b))) in chords.iter().enumerate() {
        local.insert(i, chord_base + j);
        edges.push((walks[a.hole][a.pos], walks[b.hole][b.pos]));
    }
    let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); n];
    for &h in holes {
        let w = &walks[h];
        let len = w.len();
        let mut occ: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        for (p, &v) in w.iter().enumerate() {
            occ.entry(v).or_default().push(p);
        }
        for (&v, ps) in &occ {
            let mut order = vec![ps[0]];
            order.extend(ps[1..].iter().rev());
            for p in order {
                rotation[v].push(Dart::new(base[h] + p, 0));
                if let Some(ends) = orders.get(&Corner { hole: h, pos: p }) {
                    for &(i, end) in ends {
                        if let Some(&e) = local.get(&i) {
                            rotation[v].push(Dart::new(e, end));
                        }
                    }
                }
                rotation[v].push(Dart::new(base[h] + (p + len - 1) % len, 1));
            }
        }
    }
    let g = EmbeddedGraph::new(n, edges, rotation)?;
    Ok((g, base, chord_base))
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Groups of holes joined by chords.
fn hole_groups(lambda: usize, chords: &[(Corner, Corner)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..lambda).collect();
    for &(a, b) in chords {
        let (x, y) = (find(&mut parent, a.hole), find(&mut parent, b.hole));
        parent[x] = y;
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for h in 0..lambda {
        let r = find(&mut parent, h);
        groups.entry(r).or_default().push(h);
    }
    groups.into_values().collect()
}

fn strictly_interleave(len: usize, a: (usize, usize), b: (usize, usize)) -> bool {
    let ps = [a.0, a.1, b.0, b.1];
    if ps.iter().enumerate().any(|(i, x)| ps[i + 1..].contains(x)) {
        return false;
    }
    // b.0 and b.1 on different arcs cut by a
    let inside = |x: usize| (x + len - a.0) % len < (a.1 + len - a.0) % len;
    inside(b.0) != inside(b.1)
}

/// Counter-clockwise end orders for chords joining one hole to itself: ends at a
/// corner sorted by forward distance to the other end.
fn single_hole_orders(len: usize, chords: &[(usize, (Corner, Corner))], orders: &mut CornerOrders) {
    let mut at: BTreeMap<Corner, Vec<(usize, usize, u8)>> = BTreeMap::new();
    for &(i, (a, b)) in chords {
        at.entry(a).or_default().push(((b.pos + len - a.pos) % len, i, 0));
        at.entry(b).or_default().push(((a.pos + len - b.pos) % len, i, 1));
    }
    for (c, mut ends) in at {
        ends.sort_unstable();
        orders.insert(c, ends.into_iter().map(|(_, i, e)| (i, e)).collect());
    }
}

fn next_permutation(v: &mut [(usize, u8)]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Corner orders for a group spanning several holes, by exhaustive search over
/// the orders at every corner.
fn multi_hole_orders(
    n: usize,
    walks: &[Vec<Vertex>],
    holes: &[usize],
    chords: &[(usize, (Corner, Corner))],
) -> Option<CornerOrders> {
    let mut orders: CornerOrders = BTreeMap::new();
    for &(i, (a, b)) in chords {
        orders.entry(a).or_default().push((i, 0));
        orders.entry(b).or_default().push((i, 1));
    }
    let keys: Vec<Corner> = orders.keys().copied().collect();
    for k in &keys {
        orders.get_mut(k).unwrap().sort_unstable();
    }
    loop {
        if build(n, walks, holes, chords, &orders).is_ok() {
            return Some(orders);
        }
        // odometer over permutations
        let mut advanced = false;
        for k in &keys {
            let v = orders.get_mut(k).unwrap();
            if next_permutation(v) {
                advanced = true;
                break;
            }
            v.sort_unstable();
        }
        if !advanced {
            return None;
        }
    }
}

/// ccw chord-end orders realising the chords inside the region, if possible.
pub fn chord_orders(n: usize, walks: &[Vec<Vertex>], chords: &[(Corner, Corner)]) -> Option<CornerOrders> {
    let mut orders = BTreeMap::new();
    for group in hole_groups(walks.len(), chords) {
        let mine: Vec<(usize, (Corner, Corner))> = chords
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, (a, _))| group.contains(&a.hole))
            .collect();
        if mine.is_empty() {
            continue;
        }
        if group.len() == 1 {
            let len = walks[group[0]].len();
            for (x, &(_, a)) in mine.iter().enumerate() {
                for &(_, b) in &mine[x + 1..] {
                    if strictly_interleave(len, (a.0.pos, a.1.pos), (b.0.pos, b.1.pos)) {
                        return None;
                    }
                }
            }
            single_hole_orders(len, &mine, &mut orders);
        } else {
            orders.extend(multi_hole_orders(n, walks, &group, &mine)?);
        }
    }
    Some(orders)
}

/// Whether chords with fixed corners can be drawn pairwise non-crossing inside the region.
pub fn chords_placeable(n: usize, walks: &[Vec<Vertex>], chords: &[(Corner, Corner)]) -> bool {
    chord_orders(n, walks, chords).is_some()
}

/// A drawing of all holes together with the chords.
#[derive(Clone, Debug)]
pub struct Drawing {
    pub graph: EmbeddedGraph,
    /// first edge id of each hole's walk
    pub base: Vec<usize>,
    /// edge id of chord i is `chord_base + i`
    pub chord_base: usize,
}

impl Drawing {
    /// Dart along the walk of `c.hole` leaving position `c.pos` (region on its left).
    pub fn walk_dart(&self, c: Corner) -> Dart {
        Dart::new(self.base[c.hole] + c.pos, 0)
    }

    pub fn chord_dart(&self, i: usize, end: u8) -> Dart {
        Dart::new(self.chord_base + i, end)
    }
}

pub fn draw(n: usize, walks: &[Vec<Vertex>], chords: &[(Corner, Corner)]) -> Option<Drawing> {
    let orders = chord_orders(n, walks, chords)?;
    let holes: Vec<usize> = (0..walks.len()).collect();
    let indexed: Vec<(usize, (Corner, Corner))> = chords.iter().copied().enumerate().collect();
    let (graph, base, chord_base) = build(n, walks, &holes, &indexed, &orders).ok()?;
    Some(Drawing { graph, base, chord_base })
}

/// Chooses corners for vertex-level patch edges (first choice in a fixed order
/// that can be drawn), backtracking over the edges.
pub fn place_edges(prep: &Prepared, edges: &[(Vertex, Vertex)]) -> Option<Vec<PatchEdge>> {
    for &(u, v) in edges {
        if !prep.on_boundary(u) || !prep.on_boundary(v) || u == v {
            return None;
        }
    }
    let mut chosen = Vec::new();
    if place_rec(prep, edges, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn place_rec(prep: &Prepared, edges: &[(Vertex, Vertex)], chosen: &mut Vec<PatchEdge>) -> bool {
    let i = chosen.len();
    if i == edges.len() {
        return true;
    }
    let (u, v) = edges[i];
    for &cu in &prep.corners[u] {
        for &cv in &prep.corners[v] {
            chosen.push(PatchEdge { u, v, cu, cv });
            let chords: Vec<(Corner, Corner)> = chosen.iter().map(|e| e.chord()).collect();
            if chords_placeable(prep.n(), &prep.walks, &chords) && place_rec(prep, edges, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// The wheel-pinned graph: the boundary walks, one wheel per hole attached by an
/// external edge at every corner of the padded walk, and the patch edges.
pub fn pinned_graph(prep: &Prepared, edges: &[(Vertex, Vertex)]) -> Graph {
    let pads = prep.padded.iter().flatten().filter(|&&v| v >= prep.n()).count();
    let mut g = Graph::new(prep.n() + pads);
    for w in &prep.padded {
        let len = w.len();
        for i in 0..len {
            g.add_edge(w[i], w[(i + 1) % len]);
        }
        let center = g.add_vertex();
        let rim: Vec<Vertex> = (0..len).map(|_| g.add_vertex()).collect();
        for i in 0..len {
            g.add_edge(center, rim[i]);
            g.add_edge(rim[i], rim[(i + 1) % len]);
            g.add_edge(rim[i], w[i]);
        }
    }
    for &(u, v) in edges {
        g.add_edge(u, v);
    }
    g
}

/// Abstract planarity of the wheel-pinned graph. Exact only for a single hole:
/// with two or more holes it cannot see the relative orientation of the holes.
pub fn pinned_planar(prep: &Prepared, edges: &[(Vertex, Vertex)]) -> bool {
    is_planar(&pinned_graph(prep, edges))
}

/// Every corner choice and every end order at every corner, each drawing checked
/// from scratch. The slow reference used by the oracle.
pub fn place_edges_exhaustive(prep: &Prepared, edges: &[(Vertex, Vertex)]) -> Option<Vec<PatchEdge>> {
    for &(u, v) in edges {
        if !prep.on_boundary(u) || !prep.on_boundary(v) || u == v {
            return None;
        }
    }
    let choices: Vec<Vec<(Corner, Corner)>> = edges
        .iter()
        .map(|&(u, v)| {
            let mut c = Vec::new();
            for &a in &prep.corners[u] {
                for &b in &prep.corners[v] {
                    c.push((a, b));
                }
            }
            c
        })
        .collect();
    let mut idx = vec![0usize; edges.len()];
    let holes: Vec<usize> = (0..prep.lambda()).collect();
    loop {
        let chords: Vec<(Corner, Corner)> = idx.iter().enumerate().map(|(i, &j)| choices[i][j]).collect();
        let indexed: Vec<(usize, (Corner, Corner))> = chords.iter().copied().enumerate().collect();
        let mut orders: CornerOrders = BTreeMap::new();
        for &(i, (a, b)) in &indexed {
            orders.entry(a).or_default().push((i, 0));
            orders.entry(b).or_default().push((i, 1));
        }
        let keys: Vec<Corner> = orders.keys().copied().collect();
        loop {
            if build(prep.n(), &prep.walks, &holes, &indexed, &orders).is_ok() {
                return Some(
                    edges
                        .iter()
                        .zip(&chords)
                        .map(|(&(u, v), &(cu, cv))| PatchEdge { u, v, cu, cv })
                        .collect(),
                );
            }
            let mut advanced = false;
            for k in &keys {
                let v = orders.get_mut(k).unwrap();
                if next_permutation(v) {
                    advanced = true;
                    break;
                }
                v.sort_unstable();
            }
            if !advanced {
                break;
            }
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return None;
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
