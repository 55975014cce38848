//! Constructors for the classic network families: toppling networks from
//! an integer matrix, sandpile networks of a directed graph, rotor-router
//! networks, and the sandpilization transform that replaces a network by
//! the toppling network of its Laplacian.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::production_matrix;
use crate::error::{Error, Result};
use crate::model::{Network, ProcessorDef};

/// An integer square matrix with positive diagonal and nonpositive
/// off-diagonal entries, defining one unary processor per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopplingSpec {
    pub vertices: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
}

impl TopplingSpec {
    /// Spec with default vertex names `v0, v1, ...`.
    pub fn new(matrix: Vec<Vec<i64>>) -> TopplingSpec {
        let vertices = (0..matrix.len()).map(|i| format!("v{i}")).collect();
        TopplingSpec { vertices, matrix }
    }

    pub fn with_names(vertices: Vec<String>, matrix: Vec<Vec<i64>>) -> TopplingSpec {
        TopplingSpec { vertices, matrix }
    }

    fn validate(&self) -> Result<()> {
        let n = self.matrix.len();
        if self.vertices.len() != n {
            return Err(Error::InvalidSpec(format!(
                "{} vertex names for a {n}x{n} matrix",
                self.vertices.len()
            )));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSpec("matrix is not square".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                if i == j && x <= 0 {
                    return Err(Error::InvalidSpec(format!(
                        "diagonal entry ({i},{i}) = {x} must be positive"
                    )));
                }
                if i != j && x > 0 {
                    return Err(Error::InvalidSpec(format!(
                        "off-diagonal entry ({i},{j}) = {x} must be nonpositive"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A unary network where vertex `v` cycles through `matrix[v][v]` states,
/// emitting `-matrix[u][v]` letters `u` on the wrap-around transition.
pub fn build_toppling(spec: &TopplingSpec) -> Result<Network> {
    spec.validate()?;
    let n = spec.matrix.len();
    let mut defs = Vec::with_capacity(n);
    for v in 0..n {
        let threshold = spec.matrix[v][v] as usize;
        let states: Vec<String> = (0..threshold).map(|q| q.to_string()).collect();
        let transition: Vec<u32> = (0..threshold)
            .map(|q| ((q + 1) % threshold) as u32)
            .collect();
        let mut emit: Vec<Vec<(String, u64)>> = vec![Vec::new(); threshold];
        for u in 0..n {
            if u != v && spec.matrix[u][v] < 0 {
                emit[threshold - 1].push((spec.vertices[u].clone(), (-spec.matrix[u][v]) as u64));
            }
        }
        defs.push(ProcessorDef {
            id: spec.vertices[v].clone(),
            alphabet: vec![spec.vertices[v].clone()],
            states,
            transition: vec![transition],
            emit: vec![emit],
        });
    }
    Network::new(format!("topp{n}"), defs, None)
}

/// A directed multigraph given by vertex names and an edge multiset, with
/// an optional per-vertex cyclic order of out-edges for rotor networks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub rotor_order: Option<HashMap<String, Vec<String>>>,
}

impl GraphSpec {
    pub fn directed(vertices: &[&str], edges: &[(&str, &str)]) -> GraphSpec {
        GraphSpec {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|&(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            rotor_order: None,
        }
    }

    /// Encode an undirected graph as symmetric directed pairs.
    pub fn undirected(vertices: &[&str], edges: &[(&str, &str)]) -> GraphSpec {
        let mut directed = Vec::with_capacity(edges.len() * 2);
        for &(a, b) in edges {
            directed.push((a.to_string(), b.to_string()));
            directed.push((b.to_string(), a.to_string()));
        }
        GraphSpec {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: directed,
            rotor_order: None,
        }
    }

    fn vertex_index(&self) -> Result<HashMap<&str, usize>> {
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate vertex `{v}`")));
            }
        }
        Ok(index)
    }

    fn out_edges(&self) -> Result<Vec<Vec<usize>>> {
        let index = self.vertex_index()?;
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (a, b) in &self.edges {
            let &va = index
                .get(a.as_str())
                .ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let &vb = index
                .get(b.as_str())
                .ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            out[va].push(vb);
        }
        Ok(out)
    }
}

/// The sandpile network of a directed graph without self-loops: threshold
/// equals outdegree, one chip sent along each out-edge per topple.
/// Vertices with no out-edges are sinks: they are omitted from the network
/// and chips sent to them vanish.
pub fn build_sandpile(g: &GraphSpec) -> Result<Network> {
    for (a, b) in &g.edges {
        if a == b {
            return Err(Error::InvalidSpec(format!("self-loop at `{a}`")));
        }
    }
    let out = g.out_edges()?;
    let keep: Vec<usize> = (0..g.vertices.len())
        .filter(|&v| !out[v].is_empty())
        .collect();
    let rank: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = keep.len();
    let mut matrix = vec![vec![0i64; n]; n];
    for (i, &v) in keep.iter().enumerate() {
        matrix[i][i] = out[v].len() as i64;
        for &target in &out[v] {
            if let Some(&j) = rank.get(&target) {
                matrix[j][i] -= 1;
            }
        }
    }
    let names = keep.iter().map(|&v| g.vertices[v].clone()).collect();
    let mut net = build_toppling(&TopplingSpec::with_names(names, matrix))?;
    net.name = format!("sand({})", g.vertices.join(","));
    Ok(net)
}

/// The rotor-router network of a graph: each vertex steps its rotor to the
/// next out-edge and forwards one chip along it. Every vertex needs
/// outdegree at least one and self-loops are not allowed.
pub fn build_rotor(g: &GraphSpec) -> Result<Network> {
    let index = g.vertex_index()?;
    let out = g.out_edges()?;
    let mut defs = Vec::with_capacity(g.vertices.len());
    for (v, name) in g.vertices.iter().enumerate() {
        let order: Vec<usize> = match g.rotor_order.as_ref().and_then(|m| m.get(name)) {
            Some(targets) => {
                let resolved: Vec<usize> = targets
                    .iter()
                    .map(|t| {
                        index
                            .get(t.as_str())
                            .copied()
                            .ok_or_else(|| Error::UnknownVertex(t.clone()))
                    })
                    .collect::<Result<_>>()?;
                let mut sorted = resolved.clone();
                sorted.sort_unstable();
                let mut expected = out[v].clone();
                expected.sort_unstable();
                if sorted != expected {
                    return Err(Error::InvalidSpec(format!(
                        "rotor order at `{name}` does not match the out-edge multiset"
                    )));
                }
                resolved
            }
            None => out[v].clone(),
        };
        if order.is_empty() {
            return Err(Error::InvalidSpec(format!(
                "rotor vertex `{name}` has no out-edges"
            )));
        }
        if order.contains(&v) {
            return Err(Error::InvalidSpec(format!("self-loop at `{name}`")));
        }
        let d = order.len();
        let states: Vec<String> = (0..d).map(|q| q.to_string()).collect();
        let transition: Vec<u32> = (0..d).map(|q| ((q + 1) % d) as u32).collect();
        // The chip leaves along the post-increment rotor position.
        let emit: Vec<Vec<(String, u64)>> = (0..d)
            .map(|q| vec![(g.vertices[order[(q + 1) % d]].clone(), 1)])
            .collect();
        defs.push(ProcessorDef {
            id: name.clone(),
            alphabet: vec![name.clone()],
            states,
            transition: vec![transition],
            emit: vec![emit],
        });
    }
    Network::new(format!("rotor({})", g.vertices.join(",")), defs, None)
}

/// Replace a network by the toppling network of its Laplacian at `q`: one
/// vertex per letter with threshold equal to the letter's period. Fails if
/// some diagonal Laplacian entry is not positive (a letter reproducing
/// itself at rate one or more), since no toppling network represents that.
pub fn sandpilize(net: &Network, q: &[u32]) -> Result<Network> {
    let production = production_matrix(net, q)?;
    let n = net.alphabet_len();
    let mut matrix = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let entry = production.laplacian.get(i, j);
            debug_assert!(entry.denom().to_u64() == Some(1));
            let value = entry
                .numer()
                .to_i64()
                .ok_or_else(|| Error::InvalidSpec("Laplacian entry overflows i64".into()))?;
            if i == j && value <= 0 {
                return Err(Error::InvalidSpec(format!(
                    "letter `{}` reproduces itself at rate >= 1; no toppling network has its Laplacian",
                    net.letter(i).name
                )));
            }
            matrix[i][j] = value;
        }
    }
    let names: Vec<String> = net.letters().iter().map(|l| l.name.clone()).collect();
    let mut out = build_toppling(&TopplingSpec::with_names(names, matrix))?;
    out.name = format!("S({})", net.name);
    Ok(out)
}

/// True when every vertex owns exactly one letter.
pub fn is_unary(net: &Network) -> bool {
    net.vertices().iter().all(|p| p.letter_count() == 1)
}

/// Per-vertex topple counts of a unary run: how many times each vertex
/// wrapped from its last state to state zero, given the per-letter
/// processing counts and the starting state indices.
pub fn topple_counts(net: &Network, start: &[u32], odometer: &[BigInt]) -> Result<Vec<BigInt>> {
    if !is_unary(net) {
        return Err(Error::NotUnary);
    }
    Ok(net
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, p)| {
            let r = BigInt::from(p.state_count() as u64);
            (BigInt::from(start[v]) + &odometer[p.letter_offset()]) / r
        })
        .collect())
}
