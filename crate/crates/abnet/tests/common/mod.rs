#![allow(dead_code)]

//! Shared fixtures and randomized generators for the integration suites.

use std::collections::HashMap;

use rand::Rng;

use abnet::builders::{build_rotor, build_sandpile, build_toppling, GraphSpec, TopplingSpec};
use abnet::model::{validate_abelian, Network, ProcessorDef};

pub fn ex3() -> Network {
    build_toppling(&TopplingSpec::with_names(
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![3, -1, 0], vec![-2, 4, -2], vec![-2, -2, 5]],
    ))
    .unwrap()
}

pub fn sand_k2() -> Network {
    build_sandpile(&GraphSpec::undirected(&["a", "b"], &[("a", "b")])).unwrap()
}

pub fn sand_triangle() -> Network {
    build_sandpile(&GraphSpec::undirected(
        &["a", "b", "c"],
        &[("a", "b"), ("b", "c"), ("c", "a")],
    ))
    .unwrap()
}

/// Directed Eulerian cycle a -> b -> c -> a.
pub fn sand_cycle3() -> Network {
    build_sandpile(&GraphSpec::directed(
        &["a", "b", "c"],
        &[("a", "b"), ("b", "c"), ("c", "a")],
    ))
    .unwrap()
}

/// Undirected triangle with one extra edge into a sink vertex.
pub fn sand_triangle_sink() -> Network {
    build_sandpile(&GraphSpec {
        vertices: vec!["a".into(), "b".into(), "c".into(), "s".into()],
        edges: vec![
            ("a".into(), "b".into()),
            ("b".into(), "a".into()),
            ("b".into(), "c".into()),
            ("c".into(), "b".into()),
            ("c".into(), "a".into()),
            ("a".into(), "c".into()),
            ("a".into(), "s".into()),
        ],
        rotor_order: None,
    })
    .unwrap()
}

/// Undirected 3x3 grid, no sink.
pub fn sand_grid3() -> Network {
    let names: Vec<String> = (0..3)
        .flat_map(|r| (0..3).map(move |c| format!("v{r}{c}")))
        .collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut edges = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            if c + 1 < 3 {
                edges.push((3 * r + c, 3 * r + c + 1));
            }
            if r + 1 < 3 {
                edges.push((3 * r + c, 3 * (r + 1) + c));
            }
        }
    }
    let edge_refs: Vec<(&str, &str)> = edges
        .iter()
        .map(|&(i, j)| (name_refs[i], name_refs[j]))
        .collect();
    build_sandpile(&GraphSpec::undirected(&name_refs, &edge_refs)).unwrap()
}

pub fn topp_trivial() -> Network {
    build_toppling(&TopplingSpec::with_names(vec!["a".into()], vec![vec![1]])).unwrap()
}

/// a feeds b, b absorbs.
pub fn topp_chain() -> Network {
    build_toppling(&TopplingSpec::with_names(
        vec!["a".into(), "b".into()],
        vec![vec![2, 0], vec![-1, 3]],
    ))
    .unwrap()
}

pub fn rotor_k2() -> Network {
    build_rotor(&GraphSpec::undirected(&["a", "b"], &[("a", "b")])).unwrap()
}

pub fn rotor_triangle() -> Network {
    build_rotor(&GraphSpec::undirected(
        &["a", "b", "c"],
        &[("a", "b"), ("b", "c"), ("c", "a")],
    ))
    .unwrap()
}

/// Non-unary, halting: two letters on Z/2, each emitting one `b` from the
/// high state.
pub fn two_letter_emitter() -> Network {
    Network::new(
        "emitter",
        vec![ProcessorDef {
            id: "v".into(),
            alphabet: vec!["a".into(), "b".into()],
            states: vec!["0".into(), "1".into()],
            transition: vec![vec![1, 0], vec![1, 0]],
            emit: vec![
                vec![vec![], vec![("b".into(), 1)]],
                vec![vec![], vec![("b".into(), 1)]],
            ],
        }],
        None,
    )
    .unwrap()
}

/// Non-unary, non-halting: both letters emit one `a` and one `b` from the
/// high state, so the production matrix has spectral radius one.
pub fn two_letter_doubler() -> Network {
    let both = vec![("a".to_string(), 1), ("b".to_string(), 1)];
    Network::new(
        "doubler",
        vec![ProcessorDef {
            id: "v".into(),
            alphabet: vec!["a".into(), "b".into()],
            states: vec!["0".into(), "1".into()],
            transition: vec![vec![1, 0], vec![1, 0]],
            emit: vec![vec![vec![], both.clone()], vec![vec![], both]],
        }],
        None,
    )
    .unwrap()
}

/// Non-unary, zero emissions: the Klein four-group acting on itself.
pub fn klein_net() -> Network {
    Network::new(
        "klein",
        vec![ProcessorDef {
            id: "v".into(),
            alphabet: vec!["a".into(), "b".into()],
            states: (0..4).map(|s| s.to_string()).collect(),
            transition: vec![vec![2, 3, 0, 1], vec![1, 0, 3, 2]],
            emit: vec![vec![vec![]; 4], vec![vec![]; 4]],
        }],
        None,
    )
    .unwrap()
}

/// Unary with a non-recurrent state: 0 -> 1 -> 2 -> 1, emitting on the
/// wrap 2 -> 1.
pub fn rho_net() -> Network {
    Network::new(
        "rho",
        vec![ProcessorDef {
            id: "r".into(),
            alphabet: vec!["r".into()],
            states: vec!["0".into(), "1".into(), "2".into()],
            transition: vec![vec![1, 2, 1]],
            emit: vec![vec![vec![], vec![], vec![]]],
        }],
        None,
    )
    .unwrap()
}

/// One letter, one state, re-emits itself every processing: the minimal
/// non-halting network. Not sandpilizable (Laplacian diagonal is zero).
pub fn self_loop_emitter() -> Network {
    Network::new(
        "loop",
        vec![ProcessorDef {
            id: "a".into(),
            alphabet: vec!["a".into()],
            states: vec!["0".into()],
            transition: vec![vec![0]],
            emit: vec![vec![vec![("a".into(), 1)]]],
        }],
        None,
    )
    .unwrap()
}

/// Non-unary two-vertex network: the pair vertex forwards to a unary
/// absorber.
pub fn two_vertex_mixed() -> Network {
    Network::new(
        "mixed",
        vec![
            ProcessorDef {
                id: "v".into(),
                alphabet: vec!["a".into(), "b".into()],
                states: vec!["0".into(), "1".into()],
                transition: vec![vec![1, 0], vec![1, 0]],
                emit: vec![
                    vec![vec![], vec![("w".into(), 1)]],
                    vec![vec![], vec![("w".into(), 1)]],
                ],
            },
            ProcessorDef {
                id: "u".into(),
                alphabet: vec!["w".into()],
                states: vec!["0".into(), "1".into()],
                transition: vec![vec![1, 0]],
                emit: vec![vec![vec![], vec![]]],
            },
        ],
        None,
    )
    .unwrap()
}

/// The sandpilizable corpus: unary and non-unary, halting and not.
pub fn fixture_corpus() -> Vec<Network> {
    vec![
        ex3(),
        sand_k2(),
        sand_triangle(),
        sand_cycle3(),
        sand_triangle_sink(),
        topp_trivial(),
        topp_chain(),
        rotor_k2(),
        rotor_triangle(),
        klein_net(),
        two_letter_emitter(),
        two_letter_doubler(),
        rho_net(),
        two_vertex_mixed(),
    ]
}

/// Fixtures small enough for exhaustive input enumeration.
pub fn small_fixtures() -> Vec<Network> {
    vec![
        ex3(),
        sand_k2(),
        sand_triangle(),
        sand_cycle3(),
        sand_triangle_sink(),
        topp_trivial(),
        topp_chain(),
        rotor_k2(),
        rotor_triangle(),
        klein_net(),
        two_letter_emitter(),
        two_letter_doubler(),
        rho_net(),
        self_loop_emitter(),
        two_vertex_mixed(),
    ]
}

/// All maps on `n` states commuting with every table in `fixed`.
fn centralizer(n: usize, fixed: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (n as u64).pow(n as u32);
    for code in 0..total {
        let mut f = Vec::with_capacity(n);
        let mut rest = code;
        for _ in 0..n {
            f.push((rest % n as u64) as u32);
            rest /= n as u64;
        }
        let commutes = fixed.iter().all(|g| {
            (0..n).all(|q| f[g[q] as usize] == g[f[q] as usize])
        });
        if commutes {
            out.push(f);
        }
    }
    out
}

/// A random valid network: random commuting transitions with emissions of
/// the form `N(a, q) = potential(t_a q) - potential(q) + c_a`, which
/// satisfy the emission-commutation identity by construction. Unary
/// vertices may carry arbitrary emissions instead.
pub fn random_network<R: Rng>(rng: &mut R, letter_budget: u64) -> Network {
    loop {
        let n_vertices = rng.gen_range(1..=3);
        let mut defs: Vec<ProcessorDef> = Vec::new();
        // Fix all ids and alphabets up front so emissions can target any
        // letter in the network.
        let shapes: Vec<(usize, usize)> = (0..n_vertices)
            .map(|_| (rng.gen_range(1..=2), rng.gen_range(1..=4)))
            .collect();
        let mut all_letters = Vec::new();
        for (v, &(na, _)) in shapes.iter().enumerate() {
            for a in 0..na {
                all_letters.push(format!("v{v}l{a}"));
            }
        }
        for (v, &(na, nq)) in shapes.iter().enumerate() {
            let mut transition: Vec<Vec<u32>> = Vec::new();
            let first: Vec<u32> = (0..nq).map(|_| rng.gen_range(0..nq as u32)).collect();
            transition.push(first);
            while transition.len() < na {
                let candidates = centralizer(nq, &transition);
                transition.push(candidates[rng.gen_range(0..candidates.len())].clone());
            }
            let emit: Vec<Vec<Vec<(String, u64)>>> = if na == 1 && rng.gen_bool(0.5) {
                // Unary processors commute vacuously: free-form but sparse
                // emissions, so subcritical instances stay common.
                vec![(0..nq)
                    .map(|_| {
                        let mut row = Vec::new();
                        for l in &all_letters {
                            if rng.gen_bool(0.15) {
                                let count = if rng.gen_bool(0.2) { 2 } else { 1 };
                                row.push((l.clone(), count.min(letter_budget)));
                            }
                        }
                        row
                    })
                    .collect()]
            } else {
                // Potential-based emissions on a sparse set of letters.
                let active: Vec<bool> = (0..all_letters.len())
                    .map(|_| rng.gen_bool(0.35))
                    .collect();
                let potential: Vec<Vec<i64>> = (0..nq)
                    .map(|_| {
                        (0..all_letters.len())
                            .map(|l| if active[l] { rng.gen_range(0..=1) } else { 0 })
                            .collect()
                    })
                    .collect();
                (0..na)
                    .map(|a| {
                        let offsets: Vec<i64> = (0..all_letters.len())
                            .map(|l| {
                                let needed = (0..nq)
                                    .map(|q| {
                                        potential[q][l]
                                            - potential[transition[a][q] as usize][l]
                                    })
                                    .max()
                                    .unwrap_or(0)
                                    .max(0);
                                if needed == 0 && active[l] && rng.gen_bool(0.15) {
                                    1
                                } else {
                                    needed
                                }
                            })
                            .collect();
                        (0..nq)
                            .map(|q| {
                                all_letters
                                    .iter()
                                    .enumerate()
                                    .map(|(l, name)| {
                                        let count = potential[transition[a][q] as usize][l]
                                            - potential[q][l]
                                            + offsets[l];
                                        (name.clone(), count as u64)
                                    })
                                    .filter(|&(_, c)| c > 0)
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            };
            defs.push(ProcessorDef {
                id: format!("v{v}"),
                alphabet: (0..na).map(|a| format!("v{v}l{a}")).collect(),
                states: (0..nq).map(|q| q.to_string()).collect(),
                transition,
                emit,
            });
        }
        let net = Network::new("random", defs, None).unwrap();
        if validate_abelian(&net).is_empty() {
            return net;
        }
    }
}

/// Random commuting generator tables on up to `max_states` states, drawn
/// from several structural families.
pub fn random_commuting_tables<R: Rng>(rng: &mut R, max_states: usize) -> (usize, Vec<Vec<u32>>) {
    match rng.gen_range(0..4) {
        // A single random function.
        0 => {
            let n = rng.gen_range(1..=max_states);
            let t: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n as u32)).collect();
            (n, vec![t])
        }
        // A random function and one of its powers.
        1 => {
            let n = rng.gen_range(1..=max_states);
            let t: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n as u32)).collect();
            let k = rng.gen_range(1..=3);
            let mut p: Vec<u32> = (0..n as u32).collect();
            for _ in 0..k {
                p = p.iter().map(|&q| t[q as usize]).collect();
            }
            (n, vec![t, p])
        }
        // Independent actions on the factors of a product.
        2 => {
            let n1 = rng.gen_range(1..=(max_states / 2).max(1));
            let n2 = rng.gen_range(1..=(max_states / n1).max(1));
            let f: Vec<u32> = (0..n1).map(|_| rng.gen_range(0..n1 as u32)).collect();
            let g: Vec<u32> = (0..n2).map(|_| rng.gen_range(0..n2 as u32)).collect();
            let n = n1 * n2;
            let ta: Vec<u32> = (0..n)
                .map(|s| f[s / n2] * n2 as u32 + (s % n2) as u32)
                .collect();
            let tb: Vec<u32> = (0..n)
                .map(|s| (s / n2) as u32 * n2 as u32 + g[s % n2])
                .collect();
            (n, vec![ta, tb])
        }
        // Translations of a cyclic group.
        _ => {
            let n = rng.gen_range(1..=max_states);
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let ta: Vec<u32> = (0..n).map(|q| ((q + a) % n) as u32).collect();
            let tb: Vec<u32> = (0..n).map(|q| ((q + b) % n) as u32).collect();
            (n, vec![ta, tb])
        }
    }
}

/// Wrap commuting tables into a one-vertex, zero-emission network.
pub fn processor_from_tables(n: usize, tables: &[Vec<u32>]) -> Network {
    let na = tables.len();
    Network::new(
        "proc",
        vec![ProcessorDef {
            id: "v".into(),
            alphabet: (0..na).map(|a| format!("l{a}")).collect(),
            states: (0..n).map(|q| q.to_string()).collect(),
            transition: tables.to_vec(),
            emit: vec![vec![vec![]; n]; na],
        }],
        None,
    )
    .unwrap()
}

/// Enumerate all nonnegative integer vectors of the given dimension with
/// coordinate sum at most `total`.
pub fn inputs_up_to(dim: usize, total: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; dim];
    fn rec(i: usize, left: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == current.len() {
            out.push(current.clone());
            return;
        }
        for v in 0..=left {
            current[i] = v;
            rec(i + 1, left - v, current, out);
        }
        current[i] = 0;
    }
    rec(0, total, &mut current, &mut out);
    out
}

/// All locally recurrent total states of a network.
pub fn locally_recurrent_states(net: &Network) -> Vec<Vec<u32>> {
    let monoids = abnet::algebra::LocalMonoids::compute(net, 1_000_000).unwrap();
    let per_vertex: Vec<Vec<u32>> = monoids
        .vertices
        .iter()
        .map(|v| v.structure.recurrent.iter().map(|&q| q as u32).collect())
        .collect();
    let mut out = Vec::new();
    let mut combo: Vec<usize> = vec![0; per_vertex.len()];
    loop {
        out.push(
            combo
                .iter()
                .zip(&per_vertex)
                .map(|(&i, states)| states[i])
                .collect(),
        );
        let mut v = 0;
        loop {
            if v == combo.len() {
                return out;
            }
            combo[v] += 1;
            if combo[v] < per_vertex[v].len() {
                break;
            }
            combo[v] = 0;
            v += 1;
        }
    }
}

/// Vertex-name -> state-label map for building input documents.
pub fn state_map(net: &Network, state: &[u32]) -> HashMap<String, String> {
    net.state_labels(state).into_iter().collect()
}
