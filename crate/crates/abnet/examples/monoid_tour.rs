//! Inspect the transition monoid of a single processor whose state
//! diagram has a tail entering a cycle: the minimal idempotent, the
//! recurrent states, and the group acting freely and transitively on
//! them.
//!
//! ```bash
//! cargo run --example monoid_tour
//! ```

use abnet::monoid::{
    check_torsor, minimal_idempotent, recurrent_states, TransformationMonoid,
};

fn main() {
    // One generator t on {0, 1, 2} with t: 0 -> 1 -> 2 -> 1.
    let monoid = TransformationMonoid::generate(3, &[vec![1, 2, 1]], 1000).unwrap();
    println!("elements ({}):", monoid.len());
    for (element, witness) in monoid.elements.iter().zip(&monoid.witness) {
        println!("  t^{} = {:?}", witness[0], element.0);
    }

    let e = minimal_idempotent(&monoid);
    println!("minimal idempotent e = {:?} (e . e = e)", e.0);
    println!("recurrent states eQ = {:?}", recurrent_states(&monoid));

    let torsor = check_torsor(&monoid).unwrap();
    println!(
        "group on eQ: transitive = {}, free = {}, |eM| = {}, |eQ| = {}",
        torsor.transitive, torsor.free, torsor.group_size, torsor.recurrent_size
    );
}
