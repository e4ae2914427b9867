//! Brute-force reference solver for tiny instances: every edge subset in size
//! order, exhaustive path search and exhaustive placement.

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::placement::place_edges_exhaustive;
use crate::region::{validate_instance, PdpcInstance, Prepared};

pub const MAX_BOUNDARY: usize = 10;
pub const MAX_ELL: usize = 4;
pub const MAX_K: usize = 2;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("invalid instance: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("oracle refuses: {0}")]
    TooLarge(String),
}

/// Smallest patch size within the budget, or None if none exists.
pub fn brute_oracle(inst: &PdpcInstance) -> Result<Option<usize>, OracleError> {
    let prep = validate_instance(inst).map_err(OracleError::Invalid)?;
    if prep.boundary.len() > MAX_BOUNDARY {
        return Err(OracleError::TooLarge(format!("{} boundary vertices > {MAX_BOUNDARY}", prep.boundary.len())));
    }
    if prep.ell > MAX_ELL {
        return Err(OracleError::TooLarge(format!("budget {} > {MAX_ELL}", prep.ell)));
    }
    if prep.k() > MAX_K {
        return Err(OracleError::TooLarge(format!("{} pairs > {MAX_K}", prep.k())));
    }
    Ok(brute_prepared(&prep))
}

fn brute_prepared(prep: &Prepared) -> Option<usize> {
    let b = &prep.boundary;
    let mut candidates = Vec::new();
    for (i, &u) in b.iter().enumerate() {
        for &v in &b[i + 1..] {
            if !prep.graph.has_edge(u, v) {
                candidates.push((u, v));
            }
        }
    }
    // relaxation: all candidate edges at once
    if !brute_paths(&with_edges(&prep.graph, &candidates), &prep.pairs) {
        return None;
    }
    for size in 0..=prep.ell.min(candidates.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let edges: Vec<(Vertex, Vertex)> = idx.iter().map(|&i| candidates[i]).collect();
            if brute_paths(&with_edges(&prep.graph, &edges), &prep.pairs) && place_edges_exhaustive(prep, &edges).is_some() {
                return Some(size);
            }
            if !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
    }
    None
}

fn with_edges(g: &Graph, edges: &[(Vertex, Vertex)]) -> Graph {
    let mut h = g.clone();
    for &(u, v) in edges {
        h.add_edge(u, v);
    }
    h
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let m = idx.len();
    let mut i = m;
    while i > 0 && idx[i - 1] == n - m + i - 1 {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    idx[i - 1] += 1;
    for j in i..m {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Plain backtracking over simple paths, pair by pair, no pruning.
fn brute_paths(g: &Graph, pairs: &[(Vertex, Vertex)]) -> bool {
    let mut used = vec![false; g.n()];
    for &(s, t) in pairs {
        used[s] = true;
        used[t] = true;
    }
    fn go(g: &Graph, pairs: &[(Vertex, Vertex)], i: usize, cur: Vertex, used: &mut Vec<bool>) -> bool {
        if i == pairs.len() {
            return true;
        }
        let t = pairs[i].1;
        for &w in g.neighbors(cur) {
            if w == t {
                let next = pairs.get(i + 1).map_or(0, |p| p.0);
                if go(g, pairs, i + 1, next, used) {
                    return true;
                }
            } else if !used[w] {
                used[w] = true;
                if go(g, pairs, i, w, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    if pairs.is_empty() {
        return true;
    }
    go(g, pairs, 0, pairs[0].0, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::EmbeddedGraph;
    use crate::region::{Hole, OuterRegion};

    fn cycle_instance(n: usize, pairs: Vec<(Vertex, Vertex)>, ell: usize) -> PdpcInstance {
        let g = EmbeddedGraph::new(n, vec![], vec![vec![]; n]).unwrap().with_terminals(pairs).unwrap();
        PdpcInstance { g, region: OuterRegion { holes: vec![Hole::new((0..n).collect())] }, ell }
    }

    #[test]
    fn small_cases() {
        assert_eq!(brute_oracle(&cycle_instance(4, vec![(0, 2)], 2)).unwrap(), Some(1));
        assert_eq!(brute_oracle(&cycle_instance(4, vec![(0, 2), (1, 3)], 3)).unwrap(), None);
        assert_eq!(brute_oracle(&cycle_instance(4, vec![(0, 1), (2, 3)], 1)).unwrap(), None);
    }

    #[test]
    fn refuses_large() {
        assert!(matches!(brute_oracle(&cycle_instance(11, vec![(0, 2)], 1)), Err(OracleError::TooLarge(_))));
        assert!(matches!(brute_oracle(&cycle_instance(4, vec![(0, 2)], 5)), Err(OracleError::TooLarge(_))));
    }
}
