//! Replace a network by the toppling network with the same Laplacian and
//! check that the two are homotopic (same kernel, same production matrix)
//! and share the halting verdict.
//!
//! ```bash
//! cargo run --example sandpilization
//! ```

use abnet::algebra::homotopic;
use abnet::builders::{build_rotor, sandpilize, GraphSpec};
use abnet::halting::halts_on_all_inputs;

fn main() {
    let rotor = build_rotor(&GraphSpec::undirected(
        &["a", "b", "c"],
        &[("a", "b"), ("b", "c"), ("c", "a")],
    ))
    .unwrap();
    let sand = sandpilize(&rotor, rotor.default_state()).unwrap();

    println!("original: {}", rotor.name);
    println!("sandpilization: {}", sand.name);
    println!(
        "homotopic: {}",
        homotopic(&rotor, &sand, rotor.default_state(), sand.default_state()).unwrap()
    );

    let before = halts_on_all_inputs(&rotor, rotor.default_state()).unwrap();
    let after = halts_on_all_inputs(&sand, sand.default_state()).unwrap();
    println!(
        "halts on all inputs: original {} / sandpilization {}",
        before.halts_all, after.halts_all
    );
}
