//! Route two terminal pairs through a grid and check the result.

use pdpc::graph::Graph;
use pdpc::paths::{check_solution, solve_dp, DpInstance};

fn main() {
    // 3x3 grid, vertex r*3+c
    let mut g = Graph::new(9);
    for r in 0..3 {
        for c in 0..3 {
            let v = r * 3 + c;
            if c < 2 {
                g.add_edge(v, v + 1);
            }
            if r < 2 {
                g.add_edge(v, v + 3);
            }
        }
    }
    for pairs in [vec![(0, 2), (6, 8)], vec![(0, 8), (2, 6)]] {
        let inst = DpInstance::new(g.clone(), pairs.clone()).unwrap();
        match solve_dp(&inst).unwrap() {
            Some(sol) => {
                check_solution(&inst, &sol).unwrap();
                println!("{pairs:?}: {:?}", sol.paths);
            }
            None => println!("{pairs:?}: no disjoint paths"),
        }
    }
}
