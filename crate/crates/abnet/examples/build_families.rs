//! Construct the classic network families and print their JSON documents:
//! toppling networks from a matrix, sandpile networks of a graph, and
//! rotor-router networks.
//!
//! ```bash
//! cargo run --example build_families
//! ```

use abnet::builders::{build_rotor, build_sandpile, build_toppling, GraphSpec, TopplingSpec};
use abnet::json::network_to_string;

fn main() {
    let toppling = build_toppling(&TopplingSpec::with_names(
        vec!["a".into(), "b".into()],
        vec![vec![2, 0], vec![-1, 3]],
    ))
    .unwrap();
    println!("toppling chain:\n{}\n", network_to_string(&toppling).unwrap());

    let graph = GraphSpec::undirected(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
    let sandpile = build_sandpile(&graph).unwrap();
    println!("sandpile triangle:\n{}\n", network_to_string(&sandpile).unwrap());

    let rotor = build_rotor(&graph).unwrap();
    println!("rotor triangle:\n{}", network_to_string(&rotor).unwrap());
}
