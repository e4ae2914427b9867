//! Solve an instance file, or a built-in one, and print the patch.
//!
//! cargo run --example solve_instance -- [instance.txt]

use pdpc::gen::figure_two_like;
use pdpc::io::{parse_instance, write_solution, SolutionFile};
use pdpc::solver::{min_solve, SolveOptions, Verdict};

fn main() {
    let inst = match std::env::args().nth(1) {
        Some(p) => parse_instance(&std::fs::read_to_string(p).unwrap()).unwrap(),
        None => figure_two_like(),
    };
    let out = min_solve(&inst, &SolveOptions::default()).unwrap();
    println!("minimum patch size: {:?} (budget {})", out.min, inst.ell);
    if let Verdict::Yes { placement, solution, .. } = out.verdict {
        print!("{}", write_solution(&SolutionFile::from_patch(&placement.edges, &solution.paths)));
    }
}
