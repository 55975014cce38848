//! Build a small toppling network, run an input to completion, and show
//! that two different schedulers produce the same odometer and final
//! configuration.
//!
//! ```bash
//! cargo run --example simulate
//! ```

use abnet::builders::{build_toppling, TopplingSpec};
use abnet::model::{run_with, Config, LetterVec, RunOptions, Scheduler};

fn main() {
    // Three vertices with thresholds 3, 4, 5; vertex a is productive (it
    // sends out four chips for every three it consumes).
    let net = build_toppling(&TopplingSpec::with_names(
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![3, -1, 0], vec![-2, 4, -2], vec![-2, -2, 5]],
    ))
    .unwrap();

    let cfg = Config::new(LetterVec::from_u64s(&[100, 0, 0]), vec![0, 0, 0]);
    println!("input:    {}", net.format_letters(&cfg.letters));

    for scheduler in [Scheduler::RoundRobin, Scheduler::Fifo] {
        let outcome = run_with(
            &net,
            &cfg,
            &RunOptions {
                max_steps: 1_000_000,
                scheduler,
                record_trace: false,
            },
        )
        .unwrap();
        let record = outcome.halted().expect("this network halts on all inputs");
        println!(
            "{scheduler:?}: odometer {} -> letters {}",
            net.format_letters(&record.odometer),
            net.format_letters(&record.final_config.letters),
        );
    }
}
