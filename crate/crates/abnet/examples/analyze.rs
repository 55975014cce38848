//! Compute the algebraic invariants of a network: letter periods, the
//! kernel lattice, the production matrix, and the Laplacian.
//!
//! ```bash
//! cargo run --example analyze
//! ```

use abnet::algebra::production_matrix;
use abnet::builders::{build_toppling, TopplingSpec};
use abnet::linalg::rat_to_string;

fn main() {
    let net = build_toppling(&TopplingSpec::with_names(
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![3, -1, 0], vec![-2, 4, -2], vec![-2, -2, 5]],
    ))
    .unwrap();

    let production = production_matrix(&net, net.default_state()).unwrap();

    println!("letter periods: {:?}", production.periods());
    for (proc_, lattice) in net.vertices().iter().zip(&production.kernel.per_vertex) {
        println!(
            "kernel at {}: basis {:?} (index {})",
            proc_.id,
            lattice.basis,
            lattice.index()
        );
    }

    println!("\nproduction matrix P (a produced per b processed):");
    for i in 0..production.matrix.rows() {
        let row: Vec<String> = production.matrix.row(i).iter().map(rat_to_string).collect();
        println!("  {row:?}");
    }

    println!("\nLaplacian L = (I - P) D:");
    for i in 0..production.laplacian.rows() {
        let row: Vec<String> = production
            .laplacian
            .row(i)
            .iter()
            .map(rat_to_string)
            .collect();
        println!("  {row:?}");
    }
}
