//! Plain undirected graphs used by the path solvers and the planarity test.

use std::collections::VecDeque;

pub type Vertex = usize;

/// Undirected graph on `0..n`. Parallel edges and loops are kept in the edge
/// list but the adjacency lists are simple (sorted, deduplicated, loop-free).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    /// Panics if an endpoint is out of range.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range for n={}", self.n);
        self.edges.push((u, v));
        if u != v {
            insert_sorted(&mut self.adj[u], v);
            insert_sorted(&mut self.adj[v], u);
        }
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Simple version: loops dropped, parallel edges merged, edges sorted.
    pub fn simplified(&self) -> Graph {
        let mut es: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        es.sort_unstable();
        es.dedup();
        Graph::from_edges(self.n, &es)
    }

    /// Component index per vertex, numbered by smallest vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    /// Number of connected components after deleting the vertices in `removed`.
    pub fn component_count_without(&self, removed: &[Vertex]) -> usize {
        let mut seen = vec![false; self.n];
        for &r in removed {
            seen[r] = true;
        }
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Is `t` reachable from `s` using only vertices for which `allowed` holds
    /// (the endpoints are always allowed)?
    pub fn reachable(&self, s: Vertex, t: Vertex, allowed: impl Fn(Vertex) -> bool) -> bool {
        if s == t {
            return true;
        }
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if w == t {
                    return true;
                }
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Graph induced on `keep` (in the given order); returns it with the
    /// old-to-new vertex map.
    pub fn induced(&self, keep: &[Vertex]) -> (Graph, Vec<Option<Vertex>>) {
        let mut map = vec![None; self.n];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = Some(i);
        }
        let mut g = Graph::new(keep.len());
        for &(u, v) in &self.edges {
            if let (Some(a), Some(b)) = (map[u], map[v]) {
                g.add_edge(a, b);
            }
        }
        (g, map)
    }
}

fn insert_sorted(list: &mut Vec<Vertex>, v: Vertex) {
    if let Err(pos) = list.binary_search(&v) {
        list.insert(pos, v);
    }
}

/// Biconnected components as edge-index lists (Hopcroft-Tarjan, iterative).
/// Loops form their own blocks; parallel edges stay in the block of their endpoints.
pub fn biconnected_components(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<Vec<usize>> {
    let mut inc: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); n];
    let mut blocks = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u == v {
            blocks.push(vec![i]);
        } else {
            inc[u].push((v, i));
            inc[v].push((u, i));
        }
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut used_edge = vec![false; edges.len()];
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // frame: (vertex, parent edge, next incidence index)
        let mut stack: Vec<(Vertex, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (u, pe, ref mut idx)) = stack.last_mut() {
            if *idx < inc[u].len() {
                let (w, ei) = inc[u][*idx];
                *idx += 1;
                if ei == pe || used_edge[ei] {
                    continue;
                }
                used_edge[ei] = true;
                edge_stack.push(ei);
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, ei, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_simple() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (2, 2)]);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.degree(2), 0);
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.simplified().edges(), &[(0, 1)]);
    }

    #[test]
    fn blocks_of_figure_eight() {
        // two triangles sharing vertex 0
        let es = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)];
        let mut bs = biconnected_components(5, &es);
        bs.sort();
        assert_eq!(bs, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn blocks_of_path_are_bridges() {
        let bs = biconnected_components(3, &[(0, 1), (1, 2)]);
        assert_eq!(bs.len(), 2);
    }

    #[test]
    fn parallel_edges_share_a_block() {
        let bs = biconnected_components(2, &[(0, 1), (0, 1)]);
        assert_eq!(bs, vec![vec![0, 1]]);
    }

    #[test]
    fn components_and_removal() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
        assert_eq!(g.components().0, 2);
        assert_eq!(g.component_count_without(&[1]), 3);
        assert!(g.reachable(0, 2, |_| true));
        assert!(!g.reachable(0, 2, |v| v != 1));
    }
}
