//! Decide halting on all inputs, with a machine-checkable certificate
//! either way: positive minors and a nonnegative inverse for a halting
//! network, a verified strong amplifier for a non-halting one.
//!
//! ```bash
//! cargo run --example halting_verdicts
//! ```

use abnet::builders::{build_sandpile, build_toppling, GraphSpec, TopplingSpec};
use abnet::halting::{halts_on_all_inputs, HaltEvidence};
use abnet::linalg::rat_to_string;

fn main() {
    let halting = build_toppling(&TopplingSpec::with_names(
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![3, -1, 0], vec![-2, 4, -2], vec![-2, -2, 5]],
    ))
    .unwrap();
    let diverging = build_sandpile(&GraphSpec::undirected(
        &["a", "b", "c"],
        &[("a", "b"), ("b", "c"), ("c", "a")],
    ))
    .unwrap();

    for net in [halting, diverging] {
        let verdict = halts_on_all_inputs(&net, net.default_state()).unwrap();
        println!("{}: halts on all inputs = {}", net.name, verdict.halts_all);
        match &verdict.evidence {
            HaltEvidence::Toppling(check) => {
                let minors: Vec<String> = check.minors.iter().map(rat_to_string).collect();
                println!("  leading principal minors: {minors:?} (all positive)");
                let witness: Vec<String> =
                    check.witness.as_ref().unwrap().iter().map(rat_to_string).collect();
                println!("  witness x with Lx = 1 > 0: {witness:?}");
            }
            HaltEvidence::Amplifier(amp) => {
                println!(
                    "  strong amplifier: input {} returns the state with output {}",
                    net.format_letters(&amp.x),
                    net.format_letters(amp.output.as_ref().unwrap()),
                );
            }
        }
        println!(
            "  spectral radius bracket: [{:.6}, {:.6}] (informational)\n",
            verdict.pf.lower, verdict.pf.upper
        );
    }
}
