//! Decide halting for individual inputs by iterating the full-pass map and
//! watching for coordinatewise domination between visits to the same
//! state.
//!
//! ```bash
//! cargo run --example per_input
//! ```

use abnet::builders::{build_sandpile, GraphSpec};
use abnet::halting::{halt_on_input, HaltOptions, InputVerdict};
use abnet::model::{Config, LetterVec};

fn main() {
    // A directed cycle: one chip circulates forever, two chips at one
    // vertex still circulate, and the empty input halts at once.
    let net = build_sandpile(&GraphSpec::directed(
        &["a", "b", "c"],
        &[("a", "b"), ("b", "c"), ("c", "a")],
    ))
    .unwrap();

    for input in [vec![0, 0, 0], vec![1, 0, 0], vec![2, 1, 0]] {
        let cfg = Config::new(LetterVec::from_u64s(&input), net.default_state().to_vec());
        let verdict = halt_on_input(&net, &cfg, &HaltOptions::default()).unwrap();
        print!("input {}: ", net.format_letters(&cfg.letters));
        match verdict {
            InputVerdict::Halts {
                odometer, rounds, ..
            } => println!(
                "halts after {rounds} rounds, odometer {}",
                net.format_letters(&odometer)
            ),
            InputVerdict::NeverHalts {
                certificate,
                rounds,
            } => println!("never halts (round {rounds}, certificate {certificate:?})"),
            InputVerdict::Inconclusive { rounds } => {
                println!("inconclusive after {rounds} rounds")
            }
        }
    }
}
