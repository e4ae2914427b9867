//! List plane completions and the patch bound for small k.

use pdpc::enumerate::{enum_completions, linear_forest_shapes, patch_bound};

fn main() {
    for k in 1..=3 {
        println!("patch_bound({k}) = {}", patch_bound(k).unwrap());
    }
    let b = 3;
    let all = enum_completions(b);
    println!("{} completions with at most {b} edges", all.len());
    for c in &all {
        println!("  {:?} linear forest: {}", c.graph.edges(), c.is_linear_forest());
    }
    println!("{} linear forest shapes with at most {b} edges", linear_forest_shapes(b).len());
}
