//! Sphere embeddings as rotation systems, faces, boundary orders and
//! canonical codes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{biconnected_components, Graph, Vertex};

/// One end of an edge: `end == 0` leaves the first endpoint, `end == 1` the second.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: usize,
    pub end: u8,
}

impl Dart {
    pub fn new(edge: usize, end: u8) -> Self {
        Dart { edge, end }
    }

    pub fn rev(self) -> Dart {
        Dart { edge: self.edge, end: 1 - self.end }
    }

    fn index(self) -> usize {
        2 * self.edge + self.end as usize
    }
}

/// Where a connected component sits relative to the components placed before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    Root,
    /// Inside the face left of `host` (a dart of `host_component`, or `None` when that
    /// component is a lone vertex); `outer` is the dart of this component whose left face
    /// contains the host (`None` for a lone vertex).
    In { host_component: usize, host: Option<Dart>, outer: Option<Dart> },
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("edge {edge} has endpoint {vertex} outside 0..{n}")]
    UnknownVertex { edge: usize, vertex: Vertex, n: usize },
    #[error("rotation given for {got} vertices, expected {expected}")]
    RotationLength { got: usize, expected: usize },
    #[error("dart {0:?} is missing from the rotations")]
    MissingDart(Dart),
    #[error("dart {0:?} appears more than once")]
    DuplicateDart(Dart),
    #[error("dart {dart:?} listed at vertex {at} but it leaves vertex {tail}")]
    MisplacedDart { dart: Dart, at: Vertex, tail: Vertex },
    #[error("component {component} is not embedded in the sphere (genus {genus})")]
    NotSpherical { component: usize, genus: usize },
    #[error("placement of component {component}: {reason}")]
    BadPlacement { component: usize, reason: String },
    #[error("terminal error: {0}")]
    Terminals(String),
    #[error("{0}")]
    Domain(String),
}

/// A closed boundary walk of a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Walk {
    Darts(Vec<Dart>),
    /// the trivial walk around a lone vertex
    Vertex(Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub walks: Vec<Walk>,
    pub components: Vec<usize>,
}

/// A (possibly disconnected) multigraph embedded in the sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    rotation: Vec<Vec<Dart>>,
    placement: Vec<Placement>,
    terminals: Vec<(Vertex, Vertex)>,
    // derived
    comp_of: Vec<usize>,
    comp_vertices: Vec<Vec<Vertex>>,
    pos: Vec<(Vertex, usize)>,
}

impl EmbeddedGraph {
    /// Builds and validates an embedding with the default placement (every component
    /// after the first sits in the face left of the first dart of component 0).
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>, rotation: Vec<Vec<Dart>>) -> Result<Self, EmbedError> {
        let mut g = Self::unchecked(n, edges, rotation)?;
        g.placement = g.default_placement();
        g.check_placement()?;
        Ok(g)
    }

    /// Simple graph from ccw neighbour lists; `order[v]` lists the neighbours of `v`.
    pub fn from_neighbor_order(order: &[Vec<Vertex>]) -> Result<Self, EmbedError> {
        let n = order.len();
        let mut edge_id: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
        let mut edges = Vec::new();
        for (u, ns) in order.iter().enumerate() {
            for &v in ns {
                if v >= n {
                    return Err(EmbedError::UnknownVertex { edge: edges.len(), vertex: v, n });
                }
                let k = (u.min(v), u.max(v));
                if let std::collections::btree_map::Entry::Vacant(e) = edge_id.entry(k) {
                    e.insert(edges.len());
                    edges.push(k);
                }
            }
        }
        let mut rotation = vec![Vec::new(); n];
        for (u, ns) in order.iter().enumerate() {
            for &v in ns {
                let e = edge_id[&(u.min(v), u.max(v))];
                let end = if edges[e].0 == u { 0 } else { 1 };
                rotation[u].push(Dart::new(e, end));
            }
        }
        Self::new(n, edges, rotation)
    }

    fn unchecked(n: usize, edges: Vec<(Vertex, Vertex)>, rotation: Vec<Vec<Dart>>) -> Result<Self, EmbedError> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(EmbedError::UnknownVertex { edge: i, vertex: w, n });
                }
            }
        }
        if rotation.len() != n {
            return Err(EmbedError::RotationLength { got: rotation.len(), expected: n });
        }
        let mut pos = vec![(usize::MAX, usize::MAX); 2 * edges.len()];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d.edge >= edges.len() || d.end > 1 {
                    return Err(EmbedError::Domain(format!("dart {d:?} at vertex {v} names no edge end")));
                }
                let tail = if d.end == 0 { edges[d.edge].0 } else { edges[d.edge].1 };
                if tail != v {
                    return Err(EmbedError::MisplacedDart { dart: d, at: v, tail });
                }
                if pos[d.index()].0 != usize::MAX {
                    return Err(EmbedError::DuplicateDart(d));
                }
                pos[d.index()] = (v, i);
            }
        }
        for e in 0..edges.len() {
            for end in 0..2 {
                if pos[2 * e + end].0 == usize::MAX {
                    return Err(EmbedError::MissingDart(Dart::new(e, end as u8)));
                }
            }
        }
        let mut g = EmbeddedGraph {
            n,
            edges,
            rotation,
            placement: Vec::new(),
            terminals: Vec::new(),
            comp_of: Vec::new(),
            comp_vertices: Vec::new(),
            pos,
        };
        let (count, comp_of) = g.abstract_graph().components();
        let mut comp_vertices = vec![Vec::new(); count];
        for v in 0..n {
            comp_vertices[comp_of[v]].push(v);
        }
        g.comp_of = comp_of;
        g.comp_vertices = comp_vertices;
        for c in 0..count {
            let genus = g.component_genus(c);
            if genus != 0 {
                return Err(EmbedError::NotSpherical { component: c, genus });
            }
        }
        Ok(g)
    }

    pub fn with_placement(mut self, placement: Vec<Placement>) -> Result<Self, EmbedError> {
        self.placement = placement;
        self.check_placement()?;
        Ok(self)
    }

    pub fn with_terminals(mut self, pairs: Vec<(Vertex, Vertex)>) -> Result<Self, EmbedError> {
        let mut seen = vec![false; self.n];
        for &(s, t) in &pairs {
            for x in [s, t] {
                if x >= self.n {
                    return Err(EmbedError::Terminals(format!("terminal {x} is not a vertex")));
                }
                if seen[x] {
                    return Err(EmbedError::Terminals(format!("terminal {x} listed twice")));
                }
                seen[x] = true;
            }
        }
        self.terminals = pairs;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn rotation(&self, v: Vertex) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    pub fn placement(&self) -> &[Placement] {
        &self.placement
    }

    pub fn terminals(&self) -> &[(Vertex, Vertex)] {
        &self.terminals
    }

    pub fn component_count(&self) -> usize {
        self.comp_vertices.len()
    }

    pub fn component_of(&self, v: Vertex) -> usize {
        self.comp_of[v]
    }

    pub fn component_vertices(&self, c: usize) -> &[Vertex] {
        &self.comp_vertices[c]
    }

    pub fn tail(&self, d: Dart) -> Vertex {
        if d.end == 0 {
            self.edges[d.edge].0
        } else {
            self.edges[d.edge].1
        }
    }

    pub fn head(&self, d: Dart) -> Vertex {
        self.tail(d.rev())
    }

    /// Next dart along the face on the left of `d`.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        let (v, i) = self.pos[d.rev().index()];
        let rot = &self.rotation[v];
        rot[(i + rot.len() - 1) % rot.len()]
    }

    pub fn abstract_graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges)
    }

    fn first_dart(&self, c: usize) -> Option<Dart> {
        self.comp_vertices[c].iter().find_map(|&v| self.rotation[v].first().copied())
    }

    fn default_placement(&self) -> Vec<Placement> {
        let host = self.first_dart(0);
        (0..self.component_count())
            .map(|c| {
                if c == 0 {
                    Placement::Root
                } else {
                    Placement::In { host_component: 0, host, outer: self.first_dart(c) }
                }
            })
            .collect()
    }

    fn check_placement(&self) -> Result<(), EmbedError> {
        let count = self.component_count();
        if self.placement.len() != count {
            return Err(EmbedError::BadPlacement {
                component: self.placement.len().min(count),
                reason: format!("{} placements for {} components", self.placement.len(), count),
            });
        }
        for (c, p) in self.placement.iter().enumerate() {
            let bad = |reason: &str| EmbedError::BadPlacement { component: c, reason: reason.to_string() };
            match p {
                Placement::Root => {
                    if c != 0 {
                        return Err(bad("only the first component may be the root"));
                    }
                }
                Placement::In { host_component, host, outer } => {
                    if c == 0 {
                        return Err(bad("the first component must be the root"));
                    }
                    if *host_component >= c {
                        return Err(bad("host must be an earlier component"));
                    }
                    let has_darts = |k: usize| self.first_dart(k).is_some();
                    match host {
                        Some(d) => {
                            if d.edge >= self.edges.len() || self.comp_of[self.tail(*d)] != *host_component {
                                return Err(bad("host dart is not on the host component"));
                            }
                        }
                        None => {
                            if has_darts(*host_component) {
                                return Err(bad("host component has edges, a host dart is required"));
                            }
                        }
                    }
                    match outer {
                        Some(d) => {
                            if d.edge >= self.edges.len() || self.comp_of[self.tail(*d)] != c {
                                return Err(bad("outer dart is not on this component"));
                            }
                        }
                        None => {
                            if has_darts(c) {
                                return Err(bad("component has edges, an outer dart is required"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Dart walks of component `c` (each dart in exactly one walk).
    fn component_walks(&self, c: usize) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; 2 * self.edges.len()];
        let mut walks = Vec::new();
        for &v in &self.comp_vertices[c] {
            for &d in &self.rotation[v] {
                if seen[d.index()] {
                    continue;
                }
                let mut walk = Vec::new();
                let mut x = d;
                while !seen[x.index()] {
                    seen[x.index()] = true;
                    walk.push(x);
                    x = self.next_in_face(x);
                }
                walks.push(walk);
            }
        }
        walks
    }

    fn component_genus(&self, c: usize) -> usize {
        let verts = self.comp_vertices[c].len() as i64;
        let darts: usize = self.comp_vertices[c].iter().map(|&v| self.rotation[v].len()).sum();
        if darts == 0 {
            return 0;
        }
        let edges = (darts / 2) as i64;
        let faces = self.component_walks(c).len() as i64;
        let chi = verts - edges + faces;
        ((2 - chi) / 2).max(0) as usize
    }

    /// Faces of the whole arrangement: per-component walks merged along the placement.
    pub fn trace_faces(&self) -> Vec<Face> {
        let count = self.component_count();
        let mut walks: Vec<(usize, Walk)> = Vec::new();
        let mut walk_of_dart = vec![usize::MAX; 2 * self.edges.len()];
        let mut lone_walk = vec![usize::MAX; count];
        for c in 0..count {
            let ws = self.component_walks(c);
            if ws.is_empty() {
                lone_walk[c] = walks.len();
                walks.push((c, Walk::Vertex(self.comp_vertices[c][0])));
            }
            for w in ws {
                for &d in &w {
                    walk_of_dart[d.index()] = walks.len();
                }
                walks.push((c, Walk::Darts(w)));
            }
        }
        let mut parent: Vec<usize> = (0..walks.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for (c, p) in self.placement.iter().enumerate() {
            if let Placement::In { host_component, host, outer } = p {
                let a = match outer {
                    Some(d) => walk_of_dart[d.index()],
                    None => lone_walk[c],
                };
                let b = match host {
                    Some(d) => walk_of_dart[d.index()],
                    None => lone_walk[*host_component],
                };
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut face_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut faces: Vec<Face> = Vec::new();
        for (i, (c, w)) in walks.into_iter().enumerate() {
            let r = find(&mut parent, i);
            let id = *face_of_root.entry(r).or_insert_with(|| {
                faces.push(Face { id: faces.len(), walks: Vec::new(), components: Vec::new() });
                faces.len() - 1
            });
            faces[id].walks.push(w);
            if !faces[id].components.contains(&c) {
                faces[id].components.push(c);
            }
        }
        faces
    }

    /// Face id of the face on the left of every dart.
    pub fn face_of_darts(&self, faces: &[Face]) -> Vec<usize> {
        let mut out = vec![usize::MAX; 2 * self.edges.len()];
        for f in faces {
            for w in &f.walks {
                if let Walk::Darts(ds) = w {
                    for d in ds {
                        out[d.index()] = f.id;
                    }
                }
            }
        }
        out
    }

    /// Cyclic vertex sequences of a face, one per boundary walk, face on the left.
    pub fn boundary_orders(&self, f: &Face) -> Vec<Vec<Vertex>> {
        f.walks
            .iter()
            .map(|w| match w {
                Walk::Darts(ds) => ds.iter().map(|&d| self.tail(d)).collect(),
                Walk::Vertex(v) => vec![*v],
            })
            .collect()
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    /// Canonical code, invariant under relabelling and under reflection. Optional
    /// vertex colours are part of the code.
    pub fn canonical_code(&self, colors: Option<&[u32]>) -> Vec<u64> {
        canon::code(self, colors, true)
    }

    /// Like [`canonical_code`](Self::canonical_code) but distinguishing mirror images.
    pub fn oriented_code(&self, colors: Option<&[u32]>) -> Vec<u64> {
        canon::code(self, colors, false)
    }

    /// Dissolve a vertex with exactly two distinct neighbours. Vertices above `v`
    /// shift down by one; the new edge `{x, y}` (if added) gets the last edge id.
    pub fn dissolve(&self, v: Vertex) -> Result<EmbeddedGraph, EmbedError> {
        if v >= self.n {
            return Err(EmbedError::Domain(format!("vertex {v} does not exist")));
        }
        if self.terminals.iter().any(|&(s, t)| s == v || t == v) {
            return Err(EmbedError::Domain(format!("vertex {v} is a terminal")));
        }
        let rot = &self.rotation[v];
        if rot.len() != 2 {
            return Err(EmbedError::Domain(format!("vertex {v} has degree {}, expected 2", rot.len())));
        }
        let (dx, dy) = (rot[0], rot[1]);
        let (x, y) = (self.head(dx), self.head(dy));
        if x == y || x == v || y == v {
            return Err(EmbedError::Domain(format!("vertex {v} needs two distinct neighbours")));
        }
        let existing = self
            .edges
            .iter()
            .position(|&(a, b)| (a == x && b == y) || (a == y && b == x));
        let (ex, ey) = (dx.edge, dy.edge);
        let shift = |w: Vertex| if w > v { w - 1 } else { w };
        let mut new_id = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i != ex && i != ey {
                new_id[i] = edges.len();
                edges.push((shift(a), shift(b)));
            }
        }
        let (xy, added) = match existing {
            Some(e) => (new_id[e], false),
            None => {
                edges.push((shift(x), shift(y)));
                (edges.len() - 1, true)
            }
        };
        // x->v and v->y become x->y, y->v and v->x become y->x
        let xy_first = edges[xy].0;
        let map_dart = |d: Dart| -> Dart {
            if d.edge == ex || d.edge == ey {
                let from_x = if d.edge == ex { self.tail(d) == x } else { self.tail(d) == v };
                Dart::new(xy, if (xy_first == shift(x)) == from_x { 0 } else { 1 })
            } else {
                Dart::new(new_id[d.edge], d.end)
            }
        };
        let mut rotation = Vec::new();
        for (w, r) in self.rotation.iter().enumerate() {
            if w == v {
                continue;
            }
            let mut nr = Vec::new();
            for &d in r {
                if (d.edge == ex || d.edge == ey) && !added {
                    continue;
                }
                nr.push(map_dart(d));
            }
            rotation.push(nr);
        }
        let mut g = Self::unchecked(self.n - 1, edges, rotation)?;
        let terminals = self.terminals.iter().map(|&(s, t)| (shift(s), shift(t))).collect();
        g.terminals = terminals;
        // component ids are recomputed; map old placements component by component
        let mut placement = g.default_placement();
        if self.component_count() == g.component_count() {
            let old_rep: Vec<Vertex> = (0..self.component_count())
                .map(|c| self.comp_vertices[c].iter().copied().find(|&w| w != v).unwrap_or(v))
                .collect();
            let ok = old_rep.iter().enumerate().all(|(c, &r)| r != v && g.comp_of[shift(r)] == c);
            if ok {
                let keep = |d: Option<Dart>| d.map(map_dart);
                placement = self
                    .placement
                    .iter()
                    .map(|p| match p {
                        Placement::Root => Placement::Root,
                        Placement::In { host_component, host, outer } => {
                            Placement::In { host_component: *host_component, host: keep(*host), outer: keep(*outer) }
                        }
                    })
                    .collect();
            }
        }
        g.placement = placement;
        g.check_placement()?;
        Ok(g)
    }
}

impl EmbeddedGraph {
    /// Keeps whole components (`keep[c]`); nested components whose host disappears
    /// move into the face the removed host sat in. Returns the old-to-new vertex map.
    pub fn restrict_components(&self, keep: &[bool]) -> (EmbeddedGraph, Vec<Option<Vertex>>) {
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if keep[self.comp_of[v]] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut edge_map = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if let (Some(x), Some(y)) = (map[a], map[b]) {
                edge_map[i] = edges.len();
                edges.push((x, y));
            }
        }
        let md = |d: Dart| Dart::new(edge_map[d.edge], d.end);
        let rotation: Vec<Vec<Dart>> =
            (0..self.n).filter(|&v| map[v].is_some()).map(|v| self.rotation[v].iter().map(|&d| md(d)).collect()).collect();
        let mut g = EmbeddedGraph::unchecked(next, edges, rotation).expect("restriction of a valid embedding");
        g.terminals = self
            .terminals
            .iter()
            .filter_map(|&(s, t)| Some((map[s]?, map[t]?)))
            .collect();
        // old component -> new component, in order
        let old_to_new: Vec<Option<usize>> = (0..self.component_count())
            .map(|c| map[self.comp_vertices[c][0]].map(|v| g.comp_of[v]))
            .collect();
        // placement of each old component, following removed hosts upwards
        let lift = |c: usize| -> (Option<(usize, Option<Dart>)>, usize) {
            // returns (kept host with its dart, or None when the chain ends at a removed root) and the top removed ancestor
            let mut cur = c;
            loop {
                match &self.placement[cur] {
                    Placement::Root => return (None, cur),
                    Placement::In { host_component, host, .. } => {
                        if keep[*host_component] {
                            return (Some((*host_component, *host)), cur);
                        }
                        cur = *host_component;
                    }
                }
            }
        };
        let mut placement = vec![Placement::Root; g.component_count()];
        let mut new_root: Option<usize> = None;
        for c in 0..self.component_count() {
            let Some(nc) = old_to_new[c] else { continue };
            let outer = match &self.placement[c] {
                Placement::In { outer, .. } => outer.map(md),
                Placement::Root => self.first_dart(c).map(md),
            };
            let host = if keep[c] && matches!(self.placement[c], Placement::Root) { None } else { lift(c).0 };
            placement[nc] = match host {
                Some((hc, hd)) => Placement::In { host_component: old_to_new[hc].unwrap(), host: hd.map(md), outer },
                None => match new_root {
                    None => {
                        new_root = Some(c);
                        Placement::Root
                    }
                    Some(r) => {
                        let r_outer = match &self.placement[r] {
                            Placement::In { outer, .. } => outer.map(md),
                            Placement::Root => self.first_dart(r).map(md),
                        };
                        Placement::In { host_component: old_to_new[r].unwrap(), host: r_outer, outer }
                    }
                },
            };
        }
        g.placement = placement;
        g.check_placement().expect("restricted placement stays valid");
        (g, map)
    }
}

/// Boundary of a cactus set: the embedded graph of its noose segments and, per
/// cycle, a dart whose left face is the interior disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CactusBoundary {
    pub graph: EmbeddedGraph,
    pub interior: Vec<Dart>,
}

impl CactusBoundary {
    /// Boundary traced by a cyclic walk with the outside on its left; consecutive
    /// occurrences become edges and every lobe's interior is marked.
    pub fn from_walk(n: usize, walk: &[Vertex]) -> Result<Self, EmbedError> {
        let (graph, _) = walk_embedding(n, &[walk.to_vec()], &[])?;
        let faces = graph.trace_faces();
        let face_of = graph.face_of_darts(&faces);
        let len = walk.len();
        // forward darts bound the outside; every other face is a lobe interior
        let outside = if len > 0 { Some(face_of[Dart::new(0, 0).index()]) } else { None };
        let mut interior = Vec::new();
        let mut done = std::collections::BTreeSet::new();
        for e in 0..len {
            let d = Dart::new(e, 1);
            let f = face_of[d.index()];
            if Some(f) != outside && done.insert(f) {
                interior.push(d);
            }
        }
        Ok(CactusBoundary { graph, interior })
    }

    /// Number of components of Γ − v, minus those of Γ, plus one.
    pub fn multiplicity(&self, v: Vertex) -> Result<usize, EmbedError> {
        let g = self.graph.abstract_graph();
        if v >= g.n() || (g.degree(v) == 0 && !g.edges().iter().any(|&(a, b)| a == v || b == v)) {
            return Err(EmbedError::Domain(format!("vertex {v} is not on the cactus boundary")));
        }
        let on: Vec<Vertex> = (0..g.n()).filter(|&w| g.edges().iter().any(|&(a, b)| a == w || b == w)).collect();
        let (sub, map) = g.induced(&on);
        let before = sub.component_count_without(&[]);
        let after = sub.component_count_without(&[map[v].unwrap()]);
        Ok(after + 1 - before)
    }

    pub fn total_multiplicity(&self) -> usize {
        let g = self.graph.abstract_graph();
        (0..g.n()).filter_map(|v| self.multiplicity(v).ok()).sum()
    }

    /// Every block is a cycle and each interior marker bounds exactly its own cycle.
    pub fn validate(&self) -> Result<(), String> {
        let g = &self.graph;
        let blocks = biconnected_components(g.n(), g.edges());
        for b in &blocks {
            let mut deg: BTreeMap<Vertex, usize> = BTreeMap::new();
            for &e in b {
                let (u, v) = g.edges()[e];
                *deg.entry(u).or_default() += 1;
                *deg.entry(v).or_default() += 1;
            }
            if b.len() < 2 && g.edges()[b[0]].0 != g.edges()[b[0]].1 {
                return Err(format!("edge {} is a bridge, not part of a cycle", b[0]));
            }
            if deg.values().any(|&d| d != 2) {
                return Err(format!("block with edges {b:?} is not a cycle"));
            }
        }
        if self.interior.len() != blocks.len() {
            return Err(format!("{} interior markers for {} cycles", self.interior.len(), blocks.len()));
        }
        let faces = g.trace_faces();
        let face_of = g.face_of_darts(&faces);
        let mut used_faces = std::collections::BTreeSet::new();
        let mut used_blocks = std::collections::BTreeSet::new();
        for &d in &self.interior {
            if d.edge >= g.edges().len() {
                return Err(format!("interior marker {d:?} names no edge"));
            }
            let f = face_of[d.index()];
            if !used_faces.insert(f) {
                return Err("two interior markers name the same face".into());
            }
            let bi = blocks.iter().position(|b| b.contains(&d.edge)).unwrap();
            if !used_blocks.insert(bi) {
                return Err(format!("cycle {bi} has two interior markers"));
            }
            let face = &faces[f];
            let clean = face.walks.len() == 1
                && match &face.walks[0] {
                    Walk::Darts(ds) => ds.iter().all(|x| blocks[bi].contains(&x.edge)) && ds.len() == blocks[bi].len(),
                    Walk::Vertex(_) => false,
                };
            if !clean {
                return Err(format!("interior of cycle {bi} is not a disk bounded by that cycle"));
            }
        }
        Ok(())
    }
}

/// Embedding of hole walks (outside on the left) plus extra chords attached at
/// walk positions. Vertex ids are kept; `walks` must be vertex-disjoint.
/// Each chord is `(walk, pos, walk, pos)` and is inserted, per corner, in the
/// order given by `corner_order`. Returns the graph and the dart ids of the chords.
pub(crate) fn walk_embedding(
    n: usize,
    walks: &[Vec<Vertex>],
    chords: &[((usize, usize), (usize, usize))],
) -> Result<(EmbeddedGraph, Vec<usize>), EmbedError> {
    walk_embedding_ordered(n, walks, chords, None)
}

pub(crate) fn walk_embedding_ordered(
    n: usize,
    walks: &[Vec<Vertex>],
    chords: &[((usize, usize), (usize, usize))],
    corner_order: Option<&BTreeMap<(usize, usize), Vec<(usize, u8)>>>,
) -> Result<(EmbeddedGraph, Vec<usize>), EmbedError> {
    let mut edges = Vec::new();
    let mut base = Vec::new();
    for w in walks {
        base.push(edges.len());
        for i in 0..w.len() {
            edges.push((w[i], w[(i + 1) % w.len()]));
        }
    }
    let mut chord_ids = Vec::new();
    for &((ha, pa), (hb, pb)) in chords {
        chord_ids.push(edges.len());
        edges.push((walks[ha][pa], walks[hb][pb]));
    }
    // ends of chords at each corner
    let mut at_corner: BTreeMap<(usize, usize), Vec<(usize, u8)>> = BTreeMap::new();
    for (i, &(a, b)) in chords.iter().enumerate() {
        at_corner.entry(a).or_default().push((chord_ids[i], 0));
        at_corner.entry(b).or_default().push((chord_ids[i], 1));
    }
    if let Some(order) = corner_order {
        for (k, v) in order {
            at_corner.insert(*k, v.clone());
        }
    }
    let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); n];
    for (h, w) in walks.iter().enumerate() {
        let len = w.len();
        // occurrences of each vertex in walk order
        let mut occ: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        for (p, &v) in w.iter().enumerate() {
            occ.entry(v).or_default().push(p);
        }
        for (&v, ps) in &occ {
            // ccw around v: corner(o1), corner(o_r), ..., corner(o2)
            let mut order = vec![ps[0]];
            order.extend(ps[1..].iter().rev());
            for p in order {
                let next = Dart::new(base[h] + p, 0);
                let prev = Dart::new(base[h] + (p + len - 1) % len, 1);
                rotation[v].push(next);
                if let Some(ends) = at_corner.get(&(h, p)) {
                    for &(e, end) in ends {
                        rotation[v].push(Dart::new(e, end));
                    }
                }
                rotation[v].push(prev);
            }
        }
    }
    let g = EmbeddedGraph::unchecked(n, edges, rotation)?;
    let placement = g.default_placement();
    let g = EmbeddedGraph { placement, ..g };
    Ok((g, chord_ids))
}

mod canon {
    use super::*;

    /// Map code of one component from a start dart, in one orientation.
    struct Numbering {
        num: Vec<usize>,
        code: Vec<u64>,
    }

    fn rot_list(g: &EmbeddedGraph, v: Vertex, flip: bool) -> Vec<Dart> {
        let mut r = g.rotation[v].clone();
        if flip {
            r.reverse();
        }
        r
    }

    fn number_from(g: &EmbeddedGraph, start: Dart, flip: bool, colors: Option<&[u32]>) -> Numbering {
        let mut num = vec![usize::MAX; 2 * g.edges.len()];
        let mut order: Vec<Dart> = Vec::new();
        let mut verts: Vec<Vertex> = Vec::new();
        let visit = |v: Vertex, entry: Dart, num: &mut Vec<usize>, order: &mut Vec<Dart>, verts: &mut Vec<Vertex>| {
            let r = rot_list(g, v, flip);
            let i = r.iter().position(|&d| d == entry).unwrap();
            for k in 0..r.len() {
                let d = r[(i + k) % r.len()];
                num[d.index()] = order.len();
                order.push(d);
            }
            verts.push(v);
        };
        visit(g.tail(start), start, &mut num, &mut order, &mut verts);
        let mut i = 0;
        while i < order.len() {
            let r = order[i].rev();
            if num[r.index()] == usize::MAX {
                visit(g.tail(r), r, &mut num, &mut order, &mut verts);
            }
            i += 1;
        }
        let mut code = vec![verts.len() as u64];
        for &v in &verts {
            code.push(colors.map_or(0, |c| c[v] as u64));
            code.push(g.rotation[v].len() as u64);
        }
        for d in &order {
            code.push(num[d.rev().index()] as u64);
        }
        Numbering { num, code }
    }

    struct Ctx<'a> {
        g: &'a EmbeddedGraph,
        colors: Option<&'a [u32]>,
        /// per component: list of (face id, darts of the walk)
        walks: Vec<Vec<(usize, Vec<Dart>)>>,
        /// per face: components having a walk in it
        face_comps: Vec<Vec<usize>>,
        lone_face: Vec<usize>,
    }

    fn push_list(out: &mut Vec<u64>, items: &[u64]) {
        out.push(items.len() as u64);
        out.extend_from_slice(items);
    }

    impl Ctx<'_> {
        fn comp_code(&self, c: usize, parent_face: Option<usize>, flip: bool) -> Vec<u64> {
            let g = self.g;
            let Some(_) = g.first_dart(c) else {
                let v = g.comp_vertices[c][0];
                let mut out = vec![u64::MAX, self.colors.map_or(0, |cl| cl[v] as u64)];
                let f = self.lone_face[c];
                if Some(f) != parent_face {
                    let child = self.face_code(f, c, flip);
                    push_list(&mut out, &child);
                }
                return out;
            };
            let mut best: Option<Vec<u64>> = None;
            for &v in &g.comp_vertices[c] {
                for &d in &g.rotation[v] {
                    let nb = number_from(g, d, flip, self.colors);
                    // faces of this component keyed by smallest dart number (orientation aware)
                    let mut keyed: Vec<(usize, usize)> = self.walks[c]
                        .iter()
                        .map(|(f, ds)| {
                            let k = ds
                                .iter()
                                .map(|&x| nb.num[if flip { x.rev() } else { x }.index()])
                                .min()
                                .unwrap();
                            (k, *f)
                        })
                        .collect();
                    keyed.sort_unstable();
                    let mut out = Vec::new();
                    push_list(&mut out, &nb.code);
                    let marker = keyed
                        .iter()
                        .position(|&(_, f)| Some(f) == parent_face)
                        .map_or(u64::MAX, |p| p as u64);
                    out.push(marker);
                    for &(_, f) in &keyed {
                        if Some(f) == parent_face {
                            out.push(0);
                            continue;
                        }
                        let child = self.face_code(f, c, flip);
                        push_list(&mut out, &child);
                    }
                    if best.as_ref().is_none_or(|b| out < *b) {
                        best = Some(out);
                    }
                }
            }
            best.unwrap()
        }

        /// Children of `f` seen from component `from`, as a sorted multiset of codes.
        fn face_code(&self, f: usize, from: usize, flip: bool) -> Vec<u64> {
            let mut kids: Vec<Vec<u64>> = self.face_comps[f]
                .iter()
                .filter(|&&c| c != from)
                .map(|&c| self.comp_code(c, Some(f), flip))
                .collect();
            kids.sort();
            let mut out = Vec::new();
            for k in kids {
                push_list(&mut out, &k);
            }
            out
        }
    }

    pub(super) fn code(g: &EmbeddedGraph, colors: Option<&[u32]>, allow_mirror: bool) -> Vec<u64> {
        let faces = g.trace_faces();
        let count = g.component_count();
        let mut walks: Vec<Vec<(usize, Vec<Dart>)>> = vec![Vec::new(); count];
        let mut face_comps = vec![Vec::new(); faces.len()];
        let mut lone_face = vec![usize::MAX; count];
        for f in &faces {
            face_comps[f.id] = f.components.clone();
            for w in &f.walks {
                match w {
                    Walk::Darts(ds) => {
                        let c = g.comp_of[g.tail(ds[0])];
                        walks[c].push((f.id, ds.clone()));
                    }
                    Walk::Vertex(v) => lone_face[g.comp_of[*v]] = f.id,
                }
            }
        }
        let ctx = Ctx { g, colors, walks, face_comps, lone_face };
        let flips: &[bool] = if allow_mirror { &[false, true] } else { &[false] };
        let mut best: Option<Vec<u64>> = None;
        for &flip in flips {
            for root in 0..count {
                let c = ctx.comp_code(root, None, flip);
                if best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
        let mut out = vec![g.n as u64, g.edges.len() as u64];
        out.extend(best.unwrap_or_default());
        out
    }
}

/// Whether the two embeddings are equivalent under a sphere homeomorphism
/// (reflections included).
pub fn topologically_isomorphic(g1: &EmbeddedGraph, g2: &EmbeddedGraph) -> bool {
    g1.n() == g2.n() && g1.edges().len() == g2.edges().len() && g1.canonical_code(None) == g2.canonical_code(None)
}

/// Every vertex's rotation cyclically shifted by `shift[v]`; the same embedding.
pub fn rotate_rotations(g: &EmbeddedGraph, shift: &[usize]) -> EmbeddedGraph {
    let rotation: Vec<Vec<Dart>> = g
        .rotation
        .iter()
        .enumerate()
        .map(|(v, r)| {
            if r.is_empty() {
                return Vec::new();
            }
            let k = shift[v] % r.len();
            r[k..].iter().chain(r[..k].iter()).copied().collect()
        })
        .collect();
    let mut h = EmbeddedGraph::unchecked(g.n, g.edges.clone(), rotation).expect("same embedding");
    h.placement = g.placement.clone();
    h.terminals = g.terminals.clone();
    h
}

/// Rotate a cyclic sequence so that it starts at its lexicographically least rotation.
pub fn least_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    (0..seq.len().max(1))
        .map(|i| seq[i.min(seq.len())..].iter().chain(seq[..i.min(seq.len())].iter()).cloned().collect::<Vec<T>>())
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> EmbeddedGraph {
        let order: Vec<Vec<Vertex>> = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
        EmbeddedGraph::from_neighbor_order(&order).unwrap()
    }

    fn k4() -> EmbeddedGraph {
        // vertex 3 in the middle of triangle 0,1,2 (ccw)
        EmbeddedGraph::from_neighbor_order(&[vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = cycle(3);
        let faces = g.trace_faces();
        assert_eq!(faces.len(), 2);
        for f in &faces {
            assert_eq!(f.walks.len(), 1);
            assert_eq!(g.boundary_orders(f)[0].len(), 3);
        }
    }

    #[test]
    fn single_edge_has_one_face() {
        let g = EmbeddedGraph::from_neighbor_order(&[vec![1], vec![0]]).unwrap();
        let faces = g.trace_faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(g.boundary_orders(&faces[0])[0].len(), 2);
    }

    #[test]
    fn k4_faces_are_triangles() {
        let g = k4();
        let faces = g.trace_faces();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| g.boundary_orders(f)[0].len() == 3));
    }

    #[test]
    fn nonplanar_rotation_rejected() {
        // K4 with one rotation flipped has genus 1
        let r = EmbeddedGraph::from_neighbor_order(&[vec![1, 2, 3], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]]);
        assert!(matches!(r, Err(EmbedError::NotSpherical { .. })));
    }

    #[test]
    fn path_face_repeats_middle_vertex() {
        let g = EmbeddedGraph::from_neighbor_order(&[vec![1], vec![0, 2], vec![1]]).unwrap();
        let faces = g.trace_faces();
        let order = &g.boundary_orders(&faces[0])[0];
        assert_eq!(least_rotation(order), vec![0, 1, 2, 1]);
    }

    #[test]
    fn figure_eight_outer_face_repeats_cut_vertex() {
        // triangles (0,1,2) and (0,3,4) sharing 0
        let cb = CactusBoundary::from_walk(5, &[0, 1, 2, 0, 3, 4]).unwrap();
        let faces = cb.graph.trace_faces();
        assert_eq!(faces.len(), 3);
        let outer: Vec<_> = faces
            .iter()
            .map(|f| cb.graph.boundary_orders(f)[0].clone())
            .filter(|o| o.len() == 6)
            .collect();
        assert_eq!(outer.len(), 1);
        assert_eq!(outer[0].iter().filter(|&&v| v == 0).count(), 2);
        assert_eq!(cb.multiplicity(0).unwrap(), 2);
        assert_eq!(cb.multiplicity(1).unwrap(), 1);
        assert!(cb.validate().is_ok());
    }

    #[test]
    fn lone_vertices_and_euler() {
        let g = EmbeddedGraph::new(3, vec![], vec![vec![], vec![], vec![]]).unwrap();
        assert_eq!(g.trace_faces().len(), 1);
        assert_eq!(g.component_count(), 3);
    }

    #[test]
    fn isomorphism_basics() {
        assert!(topologically_isomorphic(&cycle(3), &cycle(3)));
        let path4 = EmbeddedGraph::from_neighbor_order(&[vec![1], vec![0, 2], vec![1, 3], vec![2, 4], vec![3]]).unwrap();
        assert!(!topologically_isomorphic(&cycle(4), &path4));
    }

    #[test]
    fn dissolve_examples() {
        let p = EmbeddedGraph::from_neighbor_order(&[vec![1], vec![0, 2], vec![1]]).unwrap();
        let d = p.dissolve(1).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.edges().len(), 1);
        let c4 = cycle(4);
        let c3 = c4.dissolve(1).unwrap();
        assert!(topologically_isomorphic(&c3, &cycle(3)));
        // triangle: dissolving suppresses the parallel edge
        let t = cycle(3).dissolve(0).unwrap();
        assert_eq!(t.edges().len(), 1);
        assert!(cycle(3).with_terminals(vec![(0, 1)]).unwrap().dissolve(0).is_err());
        assert!(k4().dissolve(0).is_err());
    }

    #[test]
    fn cactus_validation() {
        let tri = CactusBoundary::from_walk(3, &[0, 1, 2]).unwrap();
        assert!(tri.validate().is_ok());
        // theta graph: two vertices joined by three paths
        let theta = EmbeddedGraph::from_neighbor_order(&[vec![2, 3, 4], vec![4, 3, 2], vec![0, 1], vec![0, 1], vec![0, 1]])
            .unwrap();
        let cb = CactusBoundary { graph: theta, interior: vec![Dart::new(0, 0)] };
        assert!(cb.validate().is_err());
    }

    #[test]
    fn three_cycles_at_one_vertex() {
        let cb = CactusBoundary::from_walk(7, &[0, 1, 2, 0, 3, 4, 0, 5, 6]).unwrap();
        assert!(cb.validate().is_ok());
        assert_eq!(cb.multiplicity(0).unwrap(), 3);
    }
}
