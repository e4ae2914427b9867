//! Shrink a wasteful patch by shortcutting repeated faces.

use pdpc::gen::striped;
use pdpc::reduce::reduce_to_fixpoint;
use pdpc::region::validate_instance;

fn main() {
    let (inst, placement, sol) = striped(0);
    let prep = validate_instance(&inst).unwrap();
    println!("start: {} patch edges {:?}", placement.size(), placement.vertex_edges());
    let red = reduce_to_fixpoint(&prep, &placement, &sol).unwrap();
    println!("sizes per round: {:?}", red.sizes);
    println!("end: {:?}", red.placement.vertex_edges());
    for p in &red.solution.paths {
        println!("  path {p:?}");
    }
}
