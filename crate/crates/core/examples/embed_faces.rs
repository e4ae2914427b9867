//! Trace the faces of a small plane graph and print their boundary walks.

use pdpc::embed::{rotate_rotations, topologically_isomorphic, EmbeddedGraph};

fn main() {
    // a square with one diagonal, plus a pendant vertex hanging off corner 2
    let order = vec![vec![1, 2, 3], vec![2, 0], vec![4, 3, 0, 1], vec![2, 0], vec![2]];
    let g = EmbeddedGraph::from_neighbor_order(&order).expect("valid rotation system");
    let faces = g.trace_faces();
    println!("{} vertices, {} edges, {} faces", g.n(), g.edges().len(), faces.len());
    for f in &faces {
        for w in g.boundary_orders(f) {
            println!("face {}: {:?}", f.id, w);
        }
    }
    let shifted = rotate_rotations(&g, &[1, 0, 2, 1, 0]);
    println!("rotated copy is the same embedding: {}", topologically_isomorphic(&g, &shifted));
}
