//! Find a patch of bounded size through the certificate search and compare with the solver.

use pdpc::certify::find_certificate;
use pdpc::gen::{generate, GenParams};
use pdpc::solver::{solve, SolveOptions};

fn main() {
    let p = GenParams { k: 2, ell: 3, size: 3 };
    for seed in 0..6 {
        let inst = generate("cycle-terminals", seed, &p).unwrap();
        let solver = solve(&inst, &SolveOptions::default()).unwrap().size();
        let cert = find_certificate(&inst, inst.ell).unwrap();
        match cert {
            Some(r) => println!(
                "seed {seed}: solver {solver:?}, certificate with {} edges, rho {:?}",
                r.certificate.candidate.edges.len(),
                r.rho
            ),
            None => println!("seed {seed}: solver {solver:?}, no certificate"),
        }
    }
}
