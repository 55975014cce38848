//! File formats and canonical JSON.
//!
//! Networks, inputs, graphs, and toppling matrices all travel as JSON.
//! Report and network serialization is canonical: object keys are sorted
//! and there is no insignificant whitespace, so identical inputs produce
//! byte-identical documents, which makes fingerprints and golden tests
//! stable.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::builders::{GraphSpec, TopplingSpec};
use crate::error::{Error, Result};
use crate::linalg::{rat_to_string, RatMatrix};
use crate::model::{Config, LetterVec, Network, ProcessorDef};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexFile {
    pub id: String,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    /// letter -> next state index, one entry per state.
    pub transition: BTreeMap<String, Vec<u32>>,
    /// letter -> per-state emission counts.
    pub emit: BTreeMap<String, Vec<BTreeMap<String, u64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkFile {
    pub name: String,
    pub vertices: Vec<VertexFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<BTreeMap<String, String>>,
}

/// An input: an optional state override plus letter counts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InputFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub letters: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotor_order: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
}

pub fn network_from_str(text: &str) -> Result<Network> {
    let file: NetworkFile = serde_json::from_str(text)?;
    network_from_file(&file)
}

pub fn network_from_file(file: &NetworkFile) -> Result<Network> {
    let mut defs = Vec::with_capacity(file.vertices.len());
    for v in &file.vertices {
        let mut transition = Vec::with_capacity(v.alphabet.len());
        let mut emit = Vec::with_capacity(v.alphabet.len());
        for letter in &v.alphabet {
            let trow = v.transition.get(letter).ok_or_else(|| {
                Error::MalformedNetwork(format!(
                    "vertex `{}`: missing transition table for letter `{letter}`",
                    v.id
                ))
            })?;
            let erow = v.emit.get(letter).ok_or_else(|| {
                Error::MalformedNetwork(format!(
                    "vertex `{}`: missing emit table for letter `{letter}`",
                    v.id
                ))
            })?;
            transition.push(trow.clone());
            emit.push(
                erow.iter()
                    .map(|per_state| {
                        per_state
                            .iter()
                            .map(|(l, &c)| (l.clone(), c))
                            .collect::<Vec<_>>()
                    })
                    .collect(),
            );
        }
        for table_letter in v.transition.keys().chain(v.emit.keys()) {
            if !v.alphabet.contains(table_letter) {
                return Err(Error::MalformedNetwork(format!(
                    "vertex `{}`: table for letter `{table_letter}` outside its alphabet",
                    v.id
                )));
            }
        }
        defs.push(ProcessorDef {
            id: v.id.clone(),
            alphabet: v.alphabet.clone(),
            states: v.states.clone(),
            transition,
            emit,
        });
    }
    let initial: Option<HashMap<String, String>> = file
        .initial_state
        .as_ref()
        .map(|m| m.iter().map(|(k, v)| (k.clone(), v.clone())).collect());
    Network::new(file.name.clone(), defs, initial.as_ref())
}

pub fn network_to_file(net: &Network) -> NetworkFile {
    let vertices = net
        .vertices()
        .iter()
        .map(|p| {
            let mut transition = BTreeMap::new();
            let mut emit = BTreeMap::new();
            for (local, letter) in p.alphabet.iter().enumerate() {
                transition.insert(letter.clone(), p.transition_table(local).to_vec());
                let rows: Vec<BTreeMap<String, u64>> = (0..p.state_count() as u32)
                    .map(|q| {
                        p.emissions(local, q)
                            .iter()
                            .map(|&(l, c)| (net.letter(l).name.clone(), c))
                            .collect()
                    })
                    .collect();
                emit.insert(letter.clone(), rows);
            }
            VertexFile {
                id: p.id.clone(),
                alphabet: p.alphabet.clone(),
                states: p.states.clone(),
                transition,
                emit,
            }
        })
        .collect();
    let initial_state = Some(
        net.vertices()
            .iter()
            .zip(net.default_state())
            .map(|(p, &q)| (p.id.clone(), p.states[q as usize].clone()))
            .collect(),
    );
    NetworkFile {
        name: net.name.clone(),
        vertices,
        initial_state,
    }
}

/// Canonical serialization: sorted keys, compact separators.
pub fn canonical_string<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's object maps are ordered, so a round-trip through Value
    // sorts every key.
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&v)?)
}

pub fn network_to_string(net: &Network) -> Result<String> {
    canonical_string(&network_to_file(net))
}

/// Content hash of the canonical network document.
pub fn fingerprint(net: &Network) -> Result<String> {
    let text = network_to_string(net)?;
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    Ok(format!("{:x}", hasher.finalize()))
}

pub fn input_from_str(text: &str) -> Result<InputFile> {
    Ok(serde_json::from_str(text)?)
}

/// Build a configuration from an input file: the state defaults to the
/// network's initial state, and absent letters default to zero.
pub fn config_from_input(net: &Network, input: &InputFile) -> Result<Config> {
    let state = match &input.state {
        Some(labels) => {
            let map: HashMap<String, String> =
                labels.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            net.state_from_labels(&map)?
        }
        None => net.default_state().to_vec(),
    };
    let mut letters = LetterVec::zeros(net.alphabet_len());
    for (name, &count) in &input.letters {
        let id = net.letter_id(name)?;
        letters.set(id, BigInt::from(count));
    }
    Ok(Config::new(letters, state))
}

/// Accept either a bare `{vertex: state}` object or a document with a
/// `state` field.
pub fn state_labels_from_value(value: &Value) -> Result<HashMap<String, String>> {
    let object = match value.get("state") {
        Some(inner) => inner,
        None => value,
    };
    let map = object
        .as_object()
        .ok_or_else(|| Error::InvalidSpec("expected a JSON object of state labels".into()))?;
    map.iter()
        .map(|(k, v)| {
            v.as_str()
                .map(|s| (k.clone(), s.to_string()))
                .ok_or_else(|| Error::InvalidSpec(format!("state label for `{k}` must be a string")))
        })
        .collect()
}

pub fn graph_from_str(text: &str) -> Result<GraphSpec> {
    let file: GraphFile = serde_json::from_str(text)?;
    Ok(GraphSpec {
        vertices: file.vertices,
        edges: file.edges,
        rotor_order: file
            .rotor_order
            .map(|m| m.into_iter().collect::<HashMap<_, _>>()),
    })
}

pub fn toppling_from_str(text: &str) -> Result<TopplingSpec> {
    let file: MatrixFile = serde_json::from_str(text)?;
    Ok(match file.vertices {
        Some(vertices) => TopplingSpec::with_names(vertices, file.matrix),
        None => TopplingSpec::new(file.matrix),
    })
}

/// Integer vector in global alphabet order, as decimal strings.
pub fn bigint_vec_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn u64_vec_value(v: &[u64]) -> Value {
    Value::Array(v.iter().map(|&x| Value::String(x.to_string())).collect())
}

/// Matrix as row-major arrays of canonical rational strings.
pub fn rat_matrix_value(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|x| Value::String(rat_to_string(x)))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn rat_vec_value(v: &[num_rational::BigRational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rat_to_string(x))).collect())
}

/// State tuple as a `{vertex: label}` object.
pub fn state_value(net: &Network, state: &[u32]) -> Value {
    let map: serde_json::Map<String, Value> = net
        .state_labels(state)
        .into_iter()
        .map(|(v, s)| (v, Value::String(s)))
        .collect();
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_toppling, TopplingSpec};

    fn ex3() -> Network {
        build_toppling(&TopplingSpec::with_names(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![3, -1, 0], vec![-2, 4, -2], vec![-2, -2, 5]],
        ))
        .unwrap()
    }

    #[test]
    fn network_roundtrip_is_canonical() {
        let net = ex3();
        let text = network_to_string(&net).unwrap();
        let back = network_from_str(&text).unwrap();
        assert_eq!(network_to_string(&back).unwrap(), text);
        assert_eq!(fingerprint(&net).unwrap(), fingerprint(&back).unwrap());
        // Sorted keys, compact form.
        assert!(text.find("\"name\"").unwrap() < text.find("\"vertices\"").unwrap());
        assert!(!text.contains(": "));
    }

    #[test]
    fn input_defaults_and_unknown_letters() {
        let net = ex3();
        let input = input_from_str(r#"{"letters": {"a": 3}}"#).unwrap();
        let cfg = config_from_input(&net, &input).unwrap();
        assert_eq!(cfg.letters, LetterVec::from_u64s(&[3, 0, 0]));
        assert_eq!(cfg.state, vec![0, 0, 0]);

        let bad = input_from_str(r#"{"letters": {"zzz": 1}}"#).unwrap();
        assert!(config_from_input(&net, &bad).is_err());

        let with_state =
            input_from_str(r#"{"state": {"a": "2"}, "letters": {}}"#).unwrap();
        let cfg = config_from_input(&net, &with_state).unwrap();
        assert_eq!(cfg.state, vec![2, 0, 0]);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(network_from_str("{").is_err());
        assert!(network_from_str(r#"{"name": "x", "vertices": [{"id": "v", "alphabet": ["v"], "states": ["0"], "transition": {}, "emit": {}}]}"#).is_err());
    }

    #[test]
    fn state_value_object_uses_vertex_labels() {
        let net = ex3();
        let v = state_value(&net, &[1, 2, 3]);
        assert_eq!(v["a"], "1");
        assert_eq!(v["b"], "2");
        assert_eq!(v["c"], "3");
    }
}
