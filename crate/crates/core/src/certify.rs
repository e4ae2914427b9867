//! Realizing a compatibility certificate in a concrete instance: matching the
//! cactus parts to holes and routing the H paths inside the graph parts.

use std::collections::BTreeMap;

use crate::enumerate::{
    enum_certificates, enum_pairs, linear_forest_shapes, Certificate, HVertex, PatchCandidate, TerminalSite,
};
use crate::graph::{Graph, Vertex};
use crate::paths::rooted_topminor;
use crate::planarity::is_planar;
use crate::region::{reduce_active, PdpcInstance, Prepared};

/// A padded cactus walk closed off by a wheel with one external edge per corner.
#[derive(Clone, Debug)]
pub struct EnhancedPart {
    pub graph: Graph,
    /// walk vertices, in order
    pub walk: Vec<Vertex>,
    pub center: Vertex,
    pub rim: Vec<Vertex>,
}

/// The enhanced graph of one cactus part: the walk (padded vertices renumbered
/// 0..m), a wheel W_m and an edge from every rim vertex to its corner.
pub fn enhance_part(walk_len: usize) -> EnhancedPart {
    let m = walk_len.max(3);
    let mut g = Graph::new(m);
    let walk: Vec<Vertex> = (0..m).collect();
    for i in 0..m {
        g.add_edge(i, (i + 1) % m);
    }
    let center = g.add_vertex();
    let rim: Vec<Vertex> = (0..m).map(|_| g.add_vertex()).collect();
    for i in 0..m {
        g.add_edge(center, rim[i]);
        g.add_edge(rim[i], rim[(i + 1) % m]);
        g.add_edge(rim[i], walk[i]);
    }
    debug_assert!(is_planar(&g));
    EnhancedPart { graph: g, walk, center, rim }
}

/// Host side of certification: the active part of an instance split per hole.
#[derive(Clone, Debug)]
pub struct HostContext {
    pub prep: Prepared,
    /// per hole: the host vertices of its graph part, sorted
    pub part_vertices: Vec<Vec<Vertex>>,
    /// per hole: the induced graph and the map host vertex -> local vertex
    pub part_graphs: Vec<(Graph, BTreeMap<Vertex, Vertex>)>,
    /// per host vertex: its terminal as (pair, end)
    pub terminal_of: Vec<Option<(usize, u8)>>,
}

impl HostContext {
    pub fn new(inst: &PdpcInstance) -> Result<HostContext, Vec<String>> {
        let red = reduce_active(inst)?;
        let prep = crate::region::validate_instance(&red.instance)?;
        let (_, comp) = prep.graph.components();
        let mut owner: Vec<Option<usize>> = vec![None; prep.n()];
        for (h, hole) in red.instance.region.holes.iter().enumerate() {
            for &v in hole.walk.iter().chain(&hole.inside) {
                owner[comp[v]] = Some(h);
            }
        }
        let lambda = prep.lambda();
        let mut part_vertices = vec![Vec::new(); lambda];
        for v in 0..prep.n() {
            if let Some(h) = owner[comp[v]] {
                part_vertices[h].push(v);
            }
        }
        let part_graphs = part_vertices
            .iter()
            .map(|vs| {
                let (g, _) = prep.graph.induced(vs);
                let map = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
                (g, map)
            })
            .collect();
        let mut terminal_of = vec![None; prep.n()];
        for (i, &(s, t)) in prep.pairs.iter().enumerate() {
            terminal_of[s] = Some((i, 0));
            terminal_of[t] = Some((i, 1));
        }
        Ok(HostContext { prep, part_vertices, part_graphs, terminal_of })
    }

    pub fn lambda(&self) -> usize {
        self.prep.lambda()
    }

    pub fn k(&self) -> usize {
        self.prep.k()
    }

    fn hole_of_vertex(&self, v: Vertex) -> Option<usize> {
        self.part_vertices.iter().position(|vs| vs.binary_search(&v).is_ok())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(i: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(i + 1, p, out);
            p.swap(i, j);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

/// Whether the certificate `cert` with terminal bijection `rho` (pair i of the
/// certificate goes to host pair rho[i], a to s and b to t) is realised by the host.
pub fn certify_realizable(ctx: &HostContext, cert: &Certificate, rho: &[usize]) -> bool {
    let pc = &cert.candidate;
    if pc.lambda() != ctx.lambda() || cert.k != ctx.k() || rho.len() != cert.k {
        return false;
    }
    let host_terminal = |i: usize, e: u8| -> Vertex {
        let (s, t) = ctx.prep.pairs[rho[i]];
        if e == 0 {
            s
        } else {
            t
        }
    };
    for phi in permutations(pc.lambda()) {
        // terminals placed in a part must live in the matched host part
        let mut ok = true;
        for i in 0..cert.k {
            for e in 0..2u8 {
                let p = cert.part(HVertex::T(i, e));
                if ctx.hole_of_vertex(host_terminal(i, e)) != Some(phi[p]) {
                    ok = false;
                }
            }
        }
        if ok && (0..pc.lambda()).all(|p| part_realizable(ctx, cert, p, phi[p], &host_terminal)) {
            return true;
        }
    }
    false
}

fn part_realizable(
    ctx: &HostContext,
    cert: &Certificate,
    part: usize,
    hole: usize,
    host_terminal: &dyn Fn(usize, u8) -> Vertex,
) -> bool {
    let pc = &cert.candidate;
    let jw = &pc.walks[part];
    let hw = &ctx.prep.walks[hole];
    // required image of a completion vertex that is itself a terminal
    let mut forced: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for (i, sites) in cert.terminals.iter().enumerate() {
        for (e, site) in sites.iter().enumerate() {
            if let TerminalSite::Vertex(v) = site {
                forced.insert(*v, host_terminal(i, e as u8));
            }
        }
    }
    let mut found = false;
    order_preserving_maps(jw.len(), hw.len(), &mut |beta| {
        // vertex consistency and injectivity
        let mut img: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        let mut used: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        for (j, &hp) in beta.iter().enumerate() {
            let (x, y) = (jw[j], hw[hp]);
            if *img.entry(x).or_insert(y) != y || *used.entry(y).or_insert(x) != x {
                return false;
            }
        }
        for (&x, &y) in &img {
            match forced.get(&x) {
                Some(&t) if t != y => return false,
                None if ctx.terminal_of[y].is_some() => return false,
                _ => {}
            }
        }
        if route_part(ctx, cert, part, hole, &img, host_terminal) {
            found = true;
            return true;
        }
        false
    });
    found
}

/// Calls `f` on every strictly increasing cyclic map from `a` positions into `b`
/// positions (position 0 may go anywhere, the rest follow in cyclic order) until
/// it returns true.
fn order_preserving_maps(a: usize, b: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    if a == 0 {
        f(&[]);
        return;
    }
    if a > b {
        return;
    }
    let mut cur = Vec::with_capacity(a);
    fn rec(a: usize, b: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == a {
            return f(cur);
        }
        let last = *cur.last().unwrap();
        let remaining = a - cur.len();
        // offsets from start stay below b
        let mut off = (last + b - start) % b + 1;
        while off + remaining <= b {
            cur.push((start + off) % b);
            if rec(a, b, start, cur, f) {
                return true;
            }
            cur.pop();
            off += 1;
        }
        false
    }
    for s in 0..b {
        cur.clear();
        cur.push(s);
        if rec(a, b, s, &mut cur, f) {
            return;
        }
    }
}

fn route_part(
    ctx: &HostContext,
    cert: &Certificate,
    part: usize,
    hole: usize,
    img: &BTreeMap<Vertex, Vertex>,
    host_terminal: &dyn Fn(usize, u8) -> Vertex,
) -> bool {
    let (host, local) = &ctx.part_graphs[hole];
    let mut ids: BTreeMap<HVertex, Vertex> = BTreeMap::new();
    let mut roots: Vec<(Vertex, Vertex)> = Vec::new();
    let mut add = |x: HVertex, target: Vertex, ids: &mut BTreeMap<HVertex, Vertex>| -> Option<Vertex> {
        if let Some(&id) = ids.get(&x) {
            return Some(id);
        }
        let id = ids.len();
        ids.insert(x, id);
        roots.push((id, *local.get(&target)?));
        Some(id)
    };
    for (&x, &y) in img {
        if add(HVertex::J(x), y, &mut ids).is_none() {
            return false;
        }
    }
    let canon = |x: HVertex| -> HVertex {
        if let HVertex::T(i, e) = x {
            if let TerminalSite::Vertex(v) = cert.terminals[i][e as usize] {
                return HVertex::J(v);
            }
        }
        x
    };
    for i in 0..cert.k {
        for e in 0..2u8 {
            if cert.terminals[i][e as usize] == TerminalSite::Part(part)
                && add(HVertex::T(i, e), host_terminal(i, e), &mut ids).is_none()
            {
                return false;
            }
        }
    }
    let mut pattern = Graph::new(ids.len());
    for &(p, a, b) in &cert.h_edges {
        if p == part {
            let (a, b) = (canon(a), canon(b));
            match (ids.get(&a), ids.get(&b)) {
                (Some(&x), Some(&y)) => pattern.add_edge(x, y),
                _ => return false,
            }
        }
    }
    matches!(rooted_topminor(&pattern, host, &roots), Ok(Some(_)))
}

/// A certificate realised in the host, with its terminal bijection.
#[derive(Clone, Debug)]
pub struct Realised {
    pub certificate: Certificate,
    pub rho: Vec<usize>,
}

/// Searches all linear-forest candidates with at most `bound` edges for a
/// certificate realised by the instance.
pub fn find_certificate(inst: &PdpcInstance, bound: usize) -> Result<Option<Realised>, Vec<String>> {
    let ctx = HostContext::new(inst)?;
    let rhos = permutations(ctx.k());
    for shape in linear_forest_shapes(bound) {
        let n = shape.iter().map(|&(_, v)| v + 1).max().unwrap_or(0);
        let candidates = if shape.is_empty() {
            vec![PatchCandidate {
                n: 0,
                edges: Vec::new(),
                walks: vec![Vec::new(); ctx.lambda()],
                corners: Vec::new(),
            }]
        } else {
            enum_pairs(n, &shape, ctx.lambda())
        };
        for pc in &candidates {
            for cert in enum_certificates(pc, ctx.k()) {
                for rho in &rhos {
                    if certify_realizable(&ctx, &cert, rho) {
                        return Ok(Some(Realised { certificate: cert, rho: rho.clone() }));
                    }
                }
            }
        }
    }
    Ok(None)
}
