//! Abstract planarity by path addition on each biconnected block
//! (Demoucron, Malgrange and Pertuiset).

use std::collections::{HashSet, VecDeque};

use crate::graph::{biconnected_components, Graph, Vertex};

/// True iff the graph (loops and parallel edges allowed) has a sphere embedding.
pub fn is_planar(g: &Graph) -> bool {
    let s = g.simplified();
    let n = s.n();
    let m = s.edges().len();
    if n >= 3 && m > 3 * n - 6 {
        return false;
    }
    for block in biconnected_components(n, s.edges()) {
        if block.len() < 9 {
            // every graph with at most 8 edges is planar (K5 has 10, K3,3 has 9)
            continue;
        }
        let mut verts: Vec<Vertex> = block.iter().flat_map(|&e| [s.edges()[e].0, s.edges()[e].1]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local = |v: Vertex| verts.binary_search(&v).unwrap();
        let es: Vec<(usize, usize)> = block.iter().map(|&e| (local(s.edges()[e].0), local(s.edges()[e].1))).collect();
        if es.len() > 3 * verts.len() - 6 {
            return false;
        }
        if !block_planar(&Graph::from_edges(verts.len(), &es)) {
            return false;
        }
    }
    true
}

struct Fragment {
    attachments: Vec<Vertex>,
    /// inner vertices (empty for a single chord)
    inner: Vec<Vertex>,
    chord: Option<(Vertex, Vertex)>,
}

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    (u.min(v), u.max(v))
}

fn block_planar(g: &Graph) -> bool {
    let n = g.n();
    let cycle = match find_cycle(g) {
        Some(c) => c,
        None => return true,
    };
    let mut in_h = vec![false; n];
    let mut h_edges: HashSet<(Vertex, Vertex)> = HashSet::new();
    for i in 0..cycle.len() {
        in_h[cycle[i]] = true;
        h_edges.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces: Vec<Vec<Vertex>> = vec![cycle, rev];
    let total = g.edges().len();
    while h_edges.len() < total {
        let frags = fragments(g, &in_h, &h_edges);
        if frags.is_empty() {
            break;
        }
        let mut choice: Option<(usize, usize)> = None;
        for (fi, fr) in frags.iter().enumerate() {
            let adm: Vec<usize> = (0..faces.len())
                .filter(|&f| fr.attachments.iter().all(|a| faces[f].contains(a)))
                .collect();
            if adm.is_empty() {
                return false;
            }
            if adm.len() == 1 {
                choice = Some((fi, adm[0]));
                break;
            }
            if choice.is_none() {
                choice = Some((fi, adm[0]));
            }
        }
        let (fi, face_idx) = choice.unwrap();
        let path = fragment_path(g, &frags[fi], &in_h);
        for w in path.windows(2) {
            h_edges.insert(key(w[0], w[1]));
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
    true
}

fn find_cycle(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = u;
                    stack.push(w);
                } else if w != parent[u] && depth[w] < depth[u] {
                    // back edge u -> ancestor-or-cousin w; walk both up to their meeting point
                    let mut a = u;
                    let mut b = w;
                    let mut left = vec![a];
                    let mut right = vec![b];
                    while a != b {
                        if depth[a] >= depth[b] {
                            a = parent[a];
                            left.push(a);
                        } else {
                            b = parent[b];
                            right.push(b);
                        }
                    }
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    if left.len() >= 3 {
                        return Some(left);
                    }
                }
            }
        }
    }
    None
}

fn fragments(g: &Graph, in_h: &[bool], h_edges: &HashSet<(Vertex, Vertex)>) -> Vec<Fragment> {
    let n = g.n();
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        if in_h[u] && in_h[v] && !h_edges.contains(&key(u, v)) {
            out.push(Fragment { attachments: vec![u, v], inner: vec![], chord: Some((u, v)) });
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut inner = vec![s];
        let mut att = Vec::new();
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if in_h[w] {
                    if !att.contains(&w) {
                        att.push(w);
                    }
                } else if !seen[w] {
                    seen[w] = true;
                    inner.push(w);
                    queue.push_back(w);
                }
            }
        }
        att.sort_unstable();
        out.push(Fragment { attachments: att, inner, chord: None });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices.
fn fragment_path(g: &Graph, fr: &Fragment, in_h: &[bool]) -> Vec<Vertex> {
    if let Some((u, v)) = fr.chord {
        return vec![u, v];
    }
    let start = fr.attachments[0];
    let inner: HashSet<Vertex> = fr.inner.iter().copied().collect();
    let mut prev: std::collections::HashMap<Vertex, Vertex> = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    for &w in g.neighbors(start) {
        if inner.contains(&w) && !prev.contains_key(&w) {
            prev.insert(w, start);
            queue.push_back(w);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if in_h[w] && w != start {
                let mut path = vec![w, u];
                let mut cur = u;
                while let Some(&p) = prev.get(&cur) {
                    path.push(p);
                    if p == start {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return path;
            }
            if inner.contains(&w) && !prev.contains_key(&w) {
                prev.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a biconnected block has two attachments")
}

fn split_face(face: &[Vertex], path: &[Vertex]) -> (Vec<Vertex>, Vec<Vertex>) {
    let a = path[0];
    let b = *path.last().unwrap();
    let len = face.len();
    let ia = face.iter().position(|&x| x == a).unwrap();
    let ib = face.iter().position(|&x| x == b).unwrap();
    let arc = |from: usize, to: usize| -> Vec<Vertex> {
        let mut out = vec![face[from]];
        let mut i = from;
        while i != to {
            i = (i + 1) % len;
            out.push(face[i]);
        }
        out
    };
    let interior = &path[1..path.len() - 1];
    // f1: a..b along the face, then back to a through the path
    let mut f1 = arc(ia, ib);
    f1.extend(interior.iter().rev());
    // f2: b..a along the face, then forward through the path
    let mut f2 = arc(ib, ia);
    f2.extend(interior.iter());
    (f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut es = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                es.push((u, v));
            }
        }
        Graph::from_edges(n, &es)
    }

    fn k33() -> Vec<(usize, usize)> {
        let mut es = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                es.push((u, v));
            }
        }
        es
    }

    #[test]
    fn small_complete_graphs() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
    }

    #[test]
    fn k33_and_minus_edge() {
        let es = k33();
        assert!(!is_planar(&Graph::from_edges(6, &es)));
        assert!(is_planar(&Graph::from_edges(6, &es[1..])));
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut es = Vec::new();
        for i in 0..5 {
            es.push((i, (i + 1) % 5));
            es.push((i, i + 5));
            es.push((i + 5, (i + 2) % 5 + 5));
        }
        assert!(!is_planar(&Graph::from_edges(10, &es)));
    }

    #[test]
    fn subdivided_k5_is_not_planar() {
        // every K5 edge subdivided once: 15 vertices, 20 edges, sparse enough for the edge bound
        let mut es = Vec::new();
        let mut next = 5;
        for u in 0..5 {
            for v in u + 1..5 {
                es.push((u, next));
                es.push((next, v));
                next += 1;
            }
        }
        assert!(!is_planar(&Graph::from_edges(next, &es)));
    }

    #[test]
    fn grid_and_wheel_are_planar() {
        let mut es = Vec::new();
        for r in 0..4 {
            for c in 0..4 {
                let v = r * 4 + c;
                if c < 3 {
                    es.push((v, v + 1));
                }
                if r < 3 {
                    es.push((v, v + 4));
                }
            }
        }
        assert!(is_planar(&Graph::from_edges(16, &es)));
        let mut w = Vec::new();
        for i in 0..8 {
            w.push((8, i));
            w.push((i, (i + 1) % 8));
        }
        assert!(is_planar(&Graph::from_edges(9, &w)));
    }
}
