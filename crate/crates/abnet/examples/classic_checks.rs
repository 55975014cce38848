//! The classic non-halting certificate for chip-firing: when `L y <= 0`
//! for a nonnegative nonzero `y` and a legal execution topples every
//! vertex `v` at least `y_v` times, the run can never halt. On undirected
//! or Eulerian graphs the all-ones vector works.
//!
//! ```bash
//! cargo run --example classic_checks
//! ```

use num_bigint::BigInt;
use num_traits::One;

use abnet::builders::{build_sandpile, topple_counts, GraphSpec};
use abnet::halting::classic_criteria;
use abnet::model::{run_to_completion, Config, LetterVec};

fn main() {
    // Eulerian directed cycle: every vertex has in-degree = out-degree.
    let net = build_sandpile(&GraphSpec::directed(
        &["a", "b", "c"],
        &[("a", "b"), ("b", "c"), ("c", "a")],
    ))
    .unwrap();
    let ones: Vec<BigInt> = (0..3).map(|_| BigInt::one()).collect();

    // Run three steps: each vertex processes (and topples) once.
    let cfg = Config::new(LetterVec::from_u64s(&[1, 1, 1]), net.default_state().to_vec());
    let partial = run_to_completion(&net, &cfg, 3).unwrap();
    let record = partial.record();
    let counts = topple_counts(&net, &cfg.state, &record.odometer.0).unwrap();
    println!("topple counts after 3 steps: {counts:?}");

    let certified = classic_criteria(&net, &ones, &counts).unwrap();
    println!("all-ones certificate accepted: {certified}");

    // One vertex short of the certificate.
    let mut short = counts.clone();
    short[2] = BigInt::from(0);
    println!(
        "with vertex c untoppled: {}",
        classic_criteria(&net, &ones, &short).unwrap()
    );
}
