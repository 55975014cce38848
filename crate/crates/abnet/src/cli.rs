//! Command implementations behind the `abnet` binary: each returns a JSON
//! report plus a process exit code, so the binary itself only parses
//! arguments and prints.
//!
//! Exit codes: 0 success (or: input halts), 1 failure (invalid network or
//! analysis error), 2 parse error, 10 input never halts, 20 inconclusive.

use serde_json::{json, Value};

use crate::algebra::{local_components, strong_components};
use crate::builders::{build_rotor, build_sandpile, build_toppling, sandpilize};
use crate::error::{Error, Result};
use crate::halting::{
    halt_on_input, halts_on_all_inputs, HaltEvidence, HaltOptions, HaltVerdict, InputVerdict,
    NonHaltCertificate,
};
use crate::json::{
    bigint_vec_value, canonical_string, config_from_input, fingerprint, graph_from_str,
    input_from_str, network_from_str, network_to_file, rat_matrix_value, rat_vec_value,
    state_labels_from_value, state_value, toppling_from_str, u64_vec_value,
};
use crate::linalg::{all_principal_minors, rat_to_string};
use crate::model::{run_to_completion, validate_abelian, Network, RunOutcome, Violation};
use crate::monoid::{
    check_torsor, generate_monoid, minimal_idempotent, monoid_budget, recurrent_structure,
    TransformationMonoid,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NEVER_HALTS: i32 = 10;
pub const EXIT_INCONCLUSIVE: i32 = 20;

/// A finished command: the JSON document to print and the exit code.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub report: Value,
    pub exit_code: i32,
}

impl CommandOutput {
    fn new(report: Value, exit_code: i32) -> CommandOutput {
        CommandOutput { report, exit_code }
    }

    fn parse_error(err: &Error) -> CommandOutput {
        CommandOutput::new(json!({"error": err.to_string()}), EXIT_PARSE)
    }

    fn failure(err: &Error) -> CommandOutput {
        CommandOutput::new(json!({"error": err.to_string()}), EXIT_FAIL)
    }

    /// Canonical one-line rendering of the report.
    pub fn to_canonical_string(&self) -> String {
        canonical_string(&self.report).unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}"))
    }
}

fn envelope(net: &Network) -> Result<Value> {
    Ok(json!({
        "version": env!("CARGO_PKG_VERSION"),
        "network": net.name,
        "fingerprint": fingerprint(net)?,
    }))
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Some(e)) = (base.as_object_mut(), extra.as_object()) {
        for (k, v) in e {
            b.insert(k.clone(), v.clone());
        }
    }
    base
}

fn violation_value(v: &Violation) -> Value {
    json!({
        "vertex": v.vertex,
        "a": v.a,
        "b": v.b,
        "state": v.state,
        "identity": match v.kind {
            crate::model::ViolationKind::TransitionCommutation => "transition",
            crate::model::ViolationKind::EmitCommutation => "emit",
        },
    })
}

/// Parse and check the abelian axioms. Exit 0 with an empty violation list
/// on success, 1 otherwise.
pub fn cmd_validate(network_text: &str) -> CommandOutput {
    let net = match network_from_str(network_text) {
        Ok(n) => n,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    let violations = validate_abelian(&net);
    let report = match envelope(&net) {
        Ok(env) => merge(
            env,
            json!({
                "valid": violations.is_empty(),
                "violations": violations.iter().map(violation_value).collect::<Vec<_>>(),
            }),
        ),
        Err(e) => return CommandOutput::failure(&e),
    };
    let code = if violations.is_empty() { EXIT_OK } else { EXIT_FAIL };
    CommandOutput::new(report, code)
}

fn resolve_state(net: &Network, state_text: Option<&str>) -> Result<Vec<u32>> {
    match state_text {
        None => Ok(net.default_state().to_vec()),
        Some(text) => {
            let value: Value = serde_json::from_str(text)?;
            let labels = state_labels_from_value(&value)?;
            net.state_from_labels(&labels)
        }
    }
}

fn halt_verdict_value(net: &Network, verdict: &HaltVerdict) -> Value {
    let certificate = match &verdict.evidence {
        HaltEvidence::Toppling(check) => json!({
            "type": "toppling",
            "minors": rat_vec_value(&check.minors),
            "inverse_nonnegative": check.inverse_nonnegative,
            "witness": check.witness.as_ref().map(|w| rat_vec_value(w)),
        }),
        HaltEvidence::Amplifier(amp) => json!({
            "type": "amplifier",
            "x": bigint_vec_value(&amp.x.0),
            "state": state_value(net, &amp.state),
            "output": amp.output.as_ref().map(|y| bigint_vec_value(&y.0)),
            "strong": amp.strong,
        }),
    };
    json!({
        "halts_on_all_inputs": verdict.halts_all,
        "certificate": certificate,
        "pf": {
            "lambda": verdict.pf.lambda,
            "lower": verdict.pf.lower,
            "upper": verdict.pf.upper,
            "converged": verdict.pf.converged,
            "iterations": verdict.pf.iterations,
        },
    })
}

/// Full algebraic analysis plus the halting verdict.
pub fn cmd_analyze(
    network_text: &str,
    state_text: Option<&str>,
    debug_all_minors: bool,
) -> CommandOutput {
    let net = match network_from_str(network_text) {
        Ok(n) => n,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    let violations = validate_abelian(&net);
    if !violations.is_empty() {
        return CommandOutput::new(
            json!({
                "error": "network is not abelian",
                "violations": violations.iter().map(violation_value).collect::<Vec<_>>(),
            }),
            EXIT_FAIL,
        );
    }
    match analyze_report(&net, state_text, debug_all_minors) {
        Ok(report) => CommandOutput::new(report, EXIT_OK),
        Err(e @ Error::Json(_)) => CommandOutput::parse_error(&e),
        Err(e) => CommandOutput::failure(&e),
    }
}

fn analyze_report(
    net: &Network,
    state_text: Option<&str>,
    debug_all_minors: bool,
) -> Result<Value> {
    let state = resolve_state(net, state_text)?;
    let verdict = halts_on_all_inputs(net, &state)?;
    let strong = strong_components(net, &state)?;
    let local = local_components(net)?;
    let production = &verdict.production;

    let alphabet: Vec<&str> = net.letters().iter().map(|l| l.name.as_str()).collect();
    let kernel_hnf: Vec<Value> = net
        .vertices()
        .iter()
        .zip(&production.kernel.per_vertex)
        .map(|(p, lattice)| {
            json!({
                "vertex": p.id,
                "alphabet": p.alphabet,
                "basis": lattice.basis.iter().map(|row| bigint_vec_value(row)).collect::<Vec<_>>(),
                "index": lattice.index().to_string(),
            })
        })
        .collect();

    let mut report = merge(
        envelope(net)?,
        json!({
            "alphabet": alphabet,
            "state": state_value(net, &state),
            "base_state": state_value(net, &production.base_state),
            "periods": u64_vec_value(production.periods()),
            "kernel_hnf": kernel_hnf,
            "P": rat_matrix_value(&production.matrix),
            "D": u64_vec_value(production.periods()),
            "L": rat_matrix_value(&production.laplacian),
            "local_components": {
                "per_vertex": local.per_vertex,
                "counts": local.counts,
                "state_component": local.label_of(&state),
            },
            "strong_components": strong
                .components
                .iter()
                .map(|letters| {
                    letters.iter().map(|&a| net.letter(a).name.clone()).collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
            "block_order": strong
                .permutation
                .iter()
                .map(|&a| net.letter(a).name.clone())
                .collect::<Vec<_>>(),
            "P_block_triangular": rat_matrix_value(&strong.permuted),
            "halting": halt_verdict_value(net, &verdict),
        }),
    );
    if debug_all_minors {
        let minors = all_principal_minors(&production.laplacian)?;
        report = merge(
            report,
            json!({
                "all_principal_minors": minors
                    .iter()
                    .map(|(subset, d)| json!({
                        "subset": subset,
                        "det": rat_to_string(d),
                    }))
                    .collect::<Vec<_>>(),
            }),
        );
    }
    Ok(report)
}

/// Per-input halting: the full-pass loop with optional amplifier support,
/// cross-checked against a direct scheduled simulation when it halts.
pub fn cmd_run(
    network_text: &str,
    input_text: &str,
    max_rounds: Option<usize>,
    max_steps: u64,
    use_amplifier: bool,
) -> CommandOutput {
    let net = match network_from_str(network_text) {
        Ok(n) => n,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    let input = match input_from_str(input_text) {
        Ok(i) => i,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    let cfg = match config_from_input(&net, &input) {
        Ok(c) => c,
        Err(e) => return CommandOutput::parse_error(&e),
    };

    let run = || -> Result<(Value, i32)> {
        let mut options = HaltOptions {
            max_rounds,
            amplifier: None,
        };
        let mut amplifier_note = Value::Null;
        if use_amplifier {
            let verdict = halts_on_all_inputs(&net, &cfg.state)?;
            if let HaltEvidence::Amplifier(amp) = verdict.evidence {
                // The threshold argument needs a locally recurrent start.
                let monoids = crate::algebra::LocalMonoids::compute(&net, monoid_budget())?;
                let applicable = monoids.is_locally_recurrent(&cfg.state)
                    && monoids.same_local_component(&cfg.state, &amp.state);
                amplifier_note = json!({
                    "x": bigint_vec_value(&amp.x.0),
                    "state": state_value(&net, &amp.state),
                    "applicable": applicable,
                });
                options.amplifier = Some(amp);
            } else {
                amplifier_note = json!("network halts on all inputs; no amplifier exists");
            }
        }
        let verdict = halt_on_input(&net, &cfg, &options)?;
        let (mut body, code) = match &verdict {
            InputVerdict::Halts {
                odometer,
                final_config,
                rounds,
            } => {
                let simulation = match run_to_completion(&net, &cfg, max_steps)? {
                    RunOutcome::Halted(record) => {
                        json!({"agrees": &record.odometer == odometer})
                    }
                    RunOutcome::OutOfBudget(_) => json!({"agrees": Value::Null, "note": "step budget exhausted before completion"}),
                };
                (
                    json!({
                        "outcome": "halts",
                        "rounds": rounds,
                        "odometer": bigint_vec_value(&odometer.0),
                        "final_letters": bigint_vec_value(&final_config.letters.0),
                        "final_state": state_value(&net, &final_config.state),
                        "simulation": simulation,
                    }),
                    EXIT_OK,
                )
            }
            InputVerdict::NeverHalts {
                certificate,
                rounds,
            } => {
                let cert = match certificate {
                    NonHaltCertificate::DicksonPair { earlier, later } => json!({
                        "type": "dickson_pair",
                        "m": earlier,
                        "n": later,
                    }),
                    NonHaltCertificate::AmplifierThreshold => json!({
                        "type": "amplifier_threshold",
                    }),
                };
                (
                    json!({
                        "outcome": "never_halts",
                        "rounds": rounds,
                        "certificate": cert,
                    }),
                    EXIT_NEVER_HALTS,
                )
            }
            InputVerdict::Inconclusive { rounds } => (
                json!({
                    "outcome": "inconclusive",
                    "rounds": rounds,
                }),
                EXIT_INCONCLUSIVE,
            ),
        };
        if !amplifier_note.is_null() {
            body = merge(body, json!({"amplifier": amplifier_note}));
        }
        let report = merge(
            envelope(&net)?,
            merge(
                json!({
                    "alphabet": net.letters().iter().map(|l| l.name.clone()).collect::<Vec<_>>(),
                    "input": {
                        "letters": bigint_vec_value(&cfg.letters.0),
                        "state": state_value(&net, &cfg.state),
                    },
                }),
                body,
            ),
        );
        Ok((report, code))
    };
    match run() {
        Ok((report, code)) => CommandOutput::new(report, code),
        Err(e) => CommandOutput::failure(&e),
    }
}

/// Local and strong component decompositions.
pub fn cmd_components(network_text: &str, state_text: Option<&str>) -> CommandOutput {
    let net = match network_from_str(network_text) {
        Ok(n) => n,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    let build = || -> Result<Value> {
        let state = resolve_state(&net, state_text)?;
        let local = local_components(&net)?;
        let strong = strong_components(&net, &state)?;
        Ok(merge(
            envelope(&net)?,
            json!({
                "state": state_value(&net, &state),
                "local_components": {
                    "per_vertex": local.per_vertex,
                    "counts": local.counts,
                    "total": local.total().to_string(),
                    "state_component": local.label_of(&state),
                },
                "strong_components": strong
                    .components
                    .iter()
                    .map(|letters| letters.iter().map(|&a| net.letter(a).name.clone()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "block_order": strong.permutation.iter().map(|&a| net.letter(a).name.clone()).collect::<Vec<_>>(),
                "P_block_triangular": rat_matrix_value(&strong.permuted),
                "kernel_sections_agree": strong.kernel_agrees,
            }),
        ))
    };
    match build() {
        Ok(report) => CommandOutput::new(report, EXIT_OK),
        Err(e) => CommandOutput::failure(&e),
    }
}

fn vertex_monoid_value(net: &Network, v: usize) -> Result<Value> {
    let proc_ = net.vertex(v);
    let budget = monoid_budget();
    let monoid = generate_monoid(proc_, budget)?;
    let structure = recurrent_structure(&monoid);
    let label = |q: u32| proc_.states[q as usize].clone();

    // Torsor reports per irreducible component of the action.
    let ncomp = structure.component_of.iter().max().map_or(0, |&m| m + 1);
    let mut torsors = Vec::with_capacity(ncomp);
    for comp in 0..ncomp {
        let states: Vec<usize> = (0..proc_.state_count())
            .filter(|&s| structure.component_of[s] == comp)
            .collect();
        let mut remap = vec![0u32; proc_.state_count()];
        for (new, &old) in states.iter().enumerate() {
            remap[old] = new as u32;
        }
        let tables: Vec<Vec<u32>> = (0..proc_.letter_count())
            .map(|a| {
                states
                    .iter()
                    .map(|&s| remap[proc_.next_state(a, s as u32) as usize])
                    .collect()
            })
            .collect();
        let restricted = TransformationMonoid::generate(states.len(), &tables, budget)?;
        let report = check_torsor(&restricted)?;
        torsors.push(json!({
            "component": comp,
            "states": states.iter().map(|&s| label(s as u32)).collect::<Vec<_>>(),
            "transitive": report.transitive,
            "free": report.free,
            "group_size": report.group_size,
            "recurrent_size": report.recurrent_size,
        }));
    }

    let e = minimal_idempotent(&monoid);
    Ok(json!({
        "vertex": proc_.id,
        "elements": monoid.len(),
        "idempotents": monoid.idempotents().count(),
        "min_idempotent": (0..proc_.state_count() as u32)
            .map(|q| label(e.apply(q)))
            .collect::<Vec<_>>(),
        "recurrent_states": structure.recurrent.iter().map(|&q| label(q as u32)).collect::<Vec<_>>(),
        "group_size": structure.group.len(),
        "components": structure.component_of,
        "torsors": torsors,
    }))
}

/// Recurrent structure of every vertex's transition monoid.
pub fn cmd_monoid(network_text: &str) -> CommandOutput {
    let net = match network_from_str(network_text) {
        Ok(n) => n,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    let build = || -> Result<Value> {
        let vertices: Vec<Value> = (0..net.vertex_count())
            .map(|v| vertex_monoid_value(&net, v))
            .collect::<Result<_>>()?;
        Ok(merge(envelope(&net)?, json!({"monoids": vertices})))
    };
    match build() {
        Ok(report) => CommandOutput::new(report, EXIT_OK),
        Err(e) => CommandOutput::failure(&e),
    }
}

fn network_output(net: Result<Network>) -> CommandOutput {
    match net {
        Ok(net) => match serde_json::to_value(network_to_file(&net)) {
            Ok(v) => CommandOutput::new(v, EXIT_OK),
            Err(e) => CommandOutput::failure(&Error::Json(e)),
        },
        Err(e) => CommandOutput::failure(&e),
    }
}

/// Build a toppling network from a matrix document.
pub fn cmd_build_topp(matrix_text: &str) -> CommandOutput {
    let spec = match toppling_from_str(matrix_text) {
        Ok(s) => s,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    network_output(build_toppling(&spec))
}

/// Build a sandpile network from a graph document.
pub fn cmd_build_sand(graph_text: &str) -> CommandOutput {
    let spec = match graph_from_str(graph_text) {
        Ok(s) => s,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    network_output(build_sandpile(&spec))
}

/// Build a rotor-router network from a graph document.
pub fn cmd_build_rotor(graph_text: &str) -> CommandOutput {
    let spec = match graph_from_str(graph_text) {
        Ok(s) => s,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    network_output(build_rotor(&spec))
}

/// Replace a network by the toppling network of its Laplacian.
pub fn cmd_sandpilize(network_text: &str, state_text: Option<&str>) -> CommandOutput {
    let net = match network_from_str(network_text) {
        Ok(n) => n,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    let state = match resolve_state(&net, state_text) {
        Ok(s) => s,
        Err(e) => return CommandOutput::parse_error(&e),
    };
    network_output(sandpilize(&net, &state))
}
