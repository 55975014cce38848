//! Finite commutative transformation monoids of a single processor.
//!
//! A processor's letters generate a commutative monoid of maps on its state
//! space. The product of all idempotents is the minimal idempotent `e`; its
//! image `eQ` is the set of recurrent states, and `eM` is an abelian group
//! acting on `eQ`. On an irreducible faithful action this group action is a
//! torsor (free and transitive), which is what makes the kernel lattice of
//! the algebra layer well defined.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::model::Processor;

/// Default cap on monoid enumeration, overridable via the
/// `ABNET_MONOID_BUDGET` environment variable.
pub const DEFAULT_MONOID_BUDGET: usize = 1_000_000;

/// Resolve the monoid element budget from the environment, falling back to
/// [`DEFAULT_MONOID_BUDGET`].
pub fn monoid_budget() -> usize {
    std::env::var("ABNET_MONOID_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MONOID_BUDGET)
}

/// A total map on state indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transformation(pub Vec<u32>);

impl Transformation {
    pub fn identity(n: usize) -> Transformation {
        Transformation((0..n as u32).collect())
    }

    pub fn apply(&self, q: u32) -> u32 {
        self.0[q as usize]
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &Transformation) -> Transformation {
        Transformation(other.0.iter().map(|&q| self.0[q as usize]).collect())
    }

    pub fn is_idempotent(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(q, &t)| self.0[t as usize] == self.0[q])
    }

    pub fn image(&self) -> Vec<u32> {
        let mut img: Vec<u32> = self.0.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

/// The closure of a commuting set of generator maps, with one witness
/// exponent vector per element recording how it was first reached.
#[derive(Debug, Clone)]
pub struct TransformationMonoid {
    pub state_count: usize,
    pub elements: Vec<Transformation>,
    /// Index of each generator within `elements`, one per generator input.
    pub generators: Vec<usize>,
    /// `witness[i]` is an exponent vector over the generators whose
    /// composition equals `elements[i]`; witnesses are BFS-minimal.
    pub witness: Vec<Vec<u64>>,
    index: HashMap<Vec<u32>, usize>,
}

impl TransformationMonoid {
    /// Enumerate the monoid generated by `generator_tables` on `n` states.
    /// Fails if two generators do not commute or the element count exceeds
    /// `budget`.
    pub fn generate(
        n: usize,
        generator_tables: &[Vec<u32>],
        budget: usize,
    ) -> Result<TransformationMonoid> {
        let gens: Vec<Transformation> = generator_tables
            .iter()
            .map(|t| Transformation(t.clone()))
            .collect();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].compose(&gens[j]) != gens[j].compose(&gens[i]) {
                    return Err(Error::NonCommutingGenerators {
                        vertex: String::new(),
                        a: i.to_string(),
                        b: j.to_string(),
                    });
                }
            }
        }

        let mut elements = vec![Transformation::identity(n)];
        let mut witness = vec![vec![0u64; gens.len()]];
        let mut index = HashMap::new();
        index.insert(elements[0].0.clone(), 0);
        let mut head = 0;
        while head < elements.len() {
            for (gi, g) in gens.iter().enumerate() {
                let next = g.compose(&elements[head]);
                if !index.contains_key(&next.0) {
                    if elements.len() >= budget {
                        return Err(Error::MonoidBudgetExceeded { budget });
                    }
                    let mut w = witness[head].clone();
                    w[gi] += 1;
                    index.insert(next.0.clone(), elements.len());
                    elements.push(next);
                    witness.push(w);
                }
            }
            head += 1;
        }
        let generators = gens.iter().map(|g| index[&g.0]).collect();
        Ok(TransformationMonoid {
            state_count: n,
            elements,
            generators,
            witness,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element_index(&self, t: &Transformation) -> Option<usize> {
        self.index.get(&t.0).copied()
    }

    pub fn generator(&self, gi: usize) -> &Transformation {
        &self.elements[self.generators[gi]]
    }

    pub fn idempotents(&self) -> impl Iterator<Item = &Transformation> {
        self.elements.iter().filter(|t| t.is_idempotent())
    }
}

/// Enumerate the transition monoid of a processor.
pub fn generate_monoid(proc_: &Processor, budget: usize) -> Result<TransformationMonoid> {
    let tables: Vec<Vec<u32>> = (0..proc_.letter_count())
        .map(|a| proc_.transition_table(a).to_vec())
        .collect();
    TransformationMonoid::generate(proc_.state_count(), &tables, budget).map_err(|e| match e {
        Error::NonCommutingGenerators { a, b, .. } => Error::NonCommutingGenerators {
            vertex: proc_.id.clone(),
            a: proc_
                .alphabet
                .get(a.parse::<usize>().unwrap_or(0))
                .cloned()
                .unwrap_or(a),
            b: proc_
                .alphabet
                .get(b.parse::<usize>().unwrap_or(0))
                .cloned()
                .unwrap_or(b),
        },
        other => other,
    })
}

/// The product of all idempotents. It is itself idempotent and lies in
/// `mM` for every element `m`.
pub fn minimal_idempotent(monoid: &TransformationMonoid) -> Transformation {
    let mut e = Transformation::identity(monoid.state_count);
    for f in monoid.idempotents() {
        e = e.compose(f);
    }
    e
}

/// The recurrent states `eQ`: fixed points of the minimal idempotent.
pub fn recurrent_states(monoid: &TransformationMonoid) -> Vec<usize> {
    let e = minimal_idempotent(monoid);
    (0..monoid.state_count)
        .filter(|&q| e.apply(q as u32) as usize == q)
        .collect()
}

/// Partition the states into irreducible components: connected components
/// of the undirected graph with an edge `{q, g(q)}` per generator `g`.
pub fn state_components(n: usize, generator_tables: &[Vec<u32>]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for table in generator_tables {
        for (q, &t) in table.iter().enumerate() {
            let a = find(&mut parent, q);
            let b = find(&mut parent, t as usize);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    // Normalize labels by first appearance.
    let mut labels = HashMap::new();
    let mut out = Vec::with_capacity(n);
    for q in 0..n {
        let root = find(&mut parent, q);
        let next = labels.len();
        out.push(*labels.entry(root).or_insert(next));
    }
    out
}

/// Irreducible components of a monoid action (classes of `x ~ x'` iff
/// `mx = m'x'` for some elements `m, m'`).
pub fn irreducible_components(monoid: &TransformationMonoid) -> Vec<usize> {
    let tables: Vec<Vec<u32>> = monoid
        .generators
        .iter()
        .map(|&gi| monoid.elements[gi].0.clone())
        .collect();
    state_components(monoid.state_count, &tables)
}

/// Recurrent structure of one processor: the minimal idempotent, its fixed
/// states, the group `eM`, and the component partition.
#[derive(Debug, Clone)]
pub struct RecurrentStructure {
    pub min_idempotent: Transformation,
    /// Sorted recurrent state indices (`eQ`).
    pub recurrent: Vec<usize>,
    /// Indices into the monoid's elements forming the group `eM`.
    pub group: Vec<usize>,
    pub component_of: Vec<usize>,
}

pub fn recurrent_structure(monoid: &TransformationMonoid) -> RecurrentStructure {
    let e = minimal_idempotent(monoid);
    let recurrent = (0..monoid.state_count)
        .filter(|&q| e.apply(q as u32) as usize == q)
        .collect();
    let mut group: Vec<usize> = monoid
        .elements
        .iter()
        .map(|m| {
            monoid
                .element_index(&e.compose(m))
                .expect("monoid is closed under composition")
        })
        .collect();
    group.sort_unstable();
    group.dedup();
    RecurrentStructure {
        min_idempotent: e,
        recurrent,
        group,
        component_of: irreducible_components(monoid),
    }
}

/// Report on the induced group action of `eM` on `eQ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorReport {
    pub transitive: bool,
    pub free: bool,
    pub group_size: usize,
    pub recurrent_size: usize,
}

/// Check that `eM` acts transitively on `eQ`, and freely when the monoid's
/// action is faithful (always the case for transformation monoids, whose
/// elements are distinct tables). Requires an irreducible action.
pub fn check_torsor(monoid: &TransformationMonoid) -> Result<TorsorReport> {
    let components = irreducible_components(monoid);
    if components.iter().any(|&c| c != 0) {
        return Err(Error::ReducibleAction);
    }
    let structure = recurrent_structure(monoid);
    let e = &structure.min_idempotent;
    let eq = &structure.recurrent;
    let group: Vec<&Transformation> = structure
        .group
        .iter()
        .map(|&i| &monoid.elements[i])
        .collect();

    let transitive = match eq.first() {
        None => true,
        Some(&x0) => {
            let mut orbit: Vec<usize> = group.iter().map(|g| g.apply(x0 as u32) as usize).collect();
            orbit.sort_unstable();
            orbit.dedup();
            orbit == *eq
        }
    };
    let free = group.iter().all(|g| {
        let fixes_some = eq.iter().any(|&x| g.apply(x as u32) as usize == x);
        !fixes_some || g.0 == e.0
    });
    Ok(TorsorReport {
        transitive,
        free,
        group_size: group.len(),
        recurrent_size: eq.len(),
    })
}

/// The five recurrence conditions for each state, evaluated within its
/// irreducible component: (1) reachable from every state, (2) recoverable
/// after any element, (3) in the image of every element, (4) in the image
/// of the minimal idempotent, (5) fixed by the minimal idempotent. On each
/// component all five classify identically.
pub fn recurrence_conditions(monoid: &TransformationMonoid) -> [Vec<bool>; 5] {
    let n = monoid.state_count;
    let components = irreducible_components(monoid);
    let e = minimal_idempotent(monoid);
    let mut conds: [Vec<bool>; 5] = Default::default();
    for c in conds.iter_mut() {
        *c = vec![false; n];
    }
    for x in 0..n {
        let comp: Vec<usize> = (0..n).filter(|&y| components[y] == components[x]).collect();
        conds[0][x] = comp
            .iter()
            .all(|&y| monoid.elements.iter().any(|m| m.apply(y as u32) as usize == x));
        conds[1][x] = monoid.elements.iter().all(|m| {
            let mx = m.apply(x as u32);
            monoid.elements.iter().any(|m2| m2.apply(mx) as usize == x)
        });
        conds[2][x] = monoid
            .elements
            .iter()
            .all(|m| comp.iter().any(|&y| m.apply(y as u32) as usize == x));
        conds[3][x] = comp.iter().any(|&y| e.apply(y as u32) as usize == x);
        conds[4][x] = e.apply(x as u32) as usize == x;
    }
    conds
}

/// True iff the five recurrence conditions agree on every state.
pub fn recurrence_conditions_agree(monoid: &TransformationMonoid) -> bool {
    let conds = recurrence_conditions(monoid);
    (0..monoid.state_count).all(|x| {
        let v = conds[0][x];
        conds.iter().all(|c| c[x] == v)
    })
}

/// Find the earliest pair `m < n` with `seq[m] <= seq[n]` componentwise,
/// minimizing `n` first and then `m`. Returns `None` while the sequence is
/// still an antichain.
pub fn dickson_find(seq: &[Vec<BigInt>]) -> Option<(usize, usize)> {
    for n in 1..seq.len() {
        for m in 0..n {
            if dominates(&seq[n], &seq[m]) {
                return Some((m, n));
            }
        }
    }
    None
}

fn dominates(bigger: &[BigInt], smaller: &[BigInt]) -> bool {
    bigger.len() == smaller.len() && smaller.iter().zip(bigger).all(|(s, b)| s <= b)
}

/// Online domination watch: push vectors one at a time; the first push that
/// dominates an earlier vector reports the earliest such index. Keeps only
/// the minimal antichain, so memory stays proportional to the frontier.
#[derive(Debug, Clone, Default)]
pub struct DicksonTracker {
    frontier: Vec<(usize, Vec<BigInt>)>,
    pushed: usize,
}

impl DicksonTracker {
    pub fn new() -> DicksonTracker {
        DicksonTracker::default()
    }

    pub fn len(&self) -> usize {
        self.pushed
    }

    pub fn is_empty(&self) -> bool {
        self.pushed == 0
    }

    /// Returns `Some(m)` when an earlier retained vector with index `m` is
    /// dominated by `v` (the smallest such index).
    pub fn push(&mut self, index: usize, v: Vec<BigInt>) -> Option<usize> {
        self.pushed += 1;
        if let Some(&(m, _)) = self
            .frontier
            .iter()
            .filter(|(_, u)| dominates(&v, u))
            .min_by_key(|(m, _)| *m)
        {
            return Some(m);
        }
        // v is incomparable-or-below everything kept: drop dominated entries.
        self.frontier.retain(|(_, u)| !dominates(u, &v));
        self.frontier.push((index, v));
        None
    }
}

/// Smallest `k >= 1` with `t^k` idempotent, together with that power.
/// Exists for every element of a finite monoid.
pub fn idempotent_power(t: &Transformation) -> (u64, Transformation) {
    let mut power = t.clone();
    let mut k = 1u64;
    loop {
        if power.is_idempotent() {
            return (k, power);
        }
        power = t.compose(&power);
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho_monoid() -> TransformationMonoid {
        // 0 -> 1 -> 2 -> 1: a tail entering a 2-cycle.
        TransformationMonoid::generate(3, &[vec![1, 2, 1]], 100).unwrap()
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let m = TransformationMonoid::generate(3, &[vec![1, 2, 0]], 100).unwrap();
        assert_eq!(m.len(), 3);
        let e = minimal_idempotent(&m);
        assert_eq!(e, Transformation::identity(3));
        assert_eq!(recurrent_states(&m), vec![0, 1, 2]);
        let report = check_torsor(&m).unwrap();
        assert!(report.transitive && report.free);
        assert_eq!(report.group_size, 3);
        assert_eq!(report.recurrent_size, 3);
    }

    #[test]
    fn rho_shape_has_three_elements_and_squared_idempotent() {
        let m = rho_monoid();
        // {id, t, t^2} with t^3 = t.
        assert_eq!(m.len(), 3);
        let t = m.generator(0).clone();
        let t2 = t.compose(&t);
        assert_eq!(t.compose(&t2), t);
        let e = minimal_idempotent(&m);
        assert_eq!(e, t2);
        assert!(e.is_idempotent());
        assert_eq!(recurrent_states(&m), vec![1, 2]);
        assert_eq!(irreducible_components(&m), vec![0, 0, 0]);
        let report = check_torsor(&m).unwrap();
        assert!(report.transitive && report.free);
        assert_eq!(report.group_size, 2);
        assert_eq!(report.recurrent_size, 2);
    }

    #[test]
    fn klein_four_group_from_two_commuting_shifts() {
        // Q = Z/2 x Z/2 encoded as 2*i + j; generators shift each factor.
        let ta = vec![2, 3, 0, 1];
        let tb = vec![1, 0, 3, 2];
        let m = TransformationMonoid::generate(4, &[ta, tb], 100).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.elements.iter().all(|t| {
            let tt = t.compose(t);
            m.elements.iter().any(|u| u.compose(&tt) == Transformation::identity(4))
        }));
    }

    #[test]
    fn non_commuting_generators_are_rejected() {
        let swap = vec![1, 0];
        let to_zero = vec![0, 0];
        let err = TransformationMonoid::generate(2, &[swap, to_zero], 100).unwrap_err();
        assert!(matches!(err, Error::NonCommutingGenerators { .. }));
    }

    #[test]
    fn budget_is_enforced() {
        let err = TransformationMonoid::generate(3, &[vec![1, 2, 0]], 2).unwrap_err();
        assert!(matches!(err, Error::MonoidBudgetExceeded { budget: 2 }));
    }

    #[test]
    fn constant_map_gives_singleton_recurrent_image() {
        let m = TransformationMonoid::generate(3, &[vec![0, 0, 0]], 100).unwrap();
        let e = minimal_idempotent(&m);
        assert_eq!(e.image().len(), 1);
    }

    #[test]
    fn disjoint_orbits_split_into_two_components() {
        // Letters act independently on {0,1} and {2,3}.
        let ta = vec![1, 0, 2, 3];
        let tb = vec![0, 1, 3, 2];
        let m = TransformationMonoid::generate(4, &[ta, tb], 100).unwrap();
        assert_eq!(irreducible_components(&m), vec![0, 0, 1, 1]);
        assert!(check_torsor(&m).is_err());
        assert!(recurrence_conditions_agree(&m));
    }

    #[test]
    fn singleton_state_space_is_one_component() {
        let m = TransformationMonoid::generate(1, &[vec![0]], 10).unwrap();
        assert_eq!(irreducible_components(&m), vec![0]);
    }

    #[test]
    fn minimal_idempotent_is_accessible_from_everywhere() {
        let m = rho_monoid();
        let e = minimal_idempotent(&m);
        for elem in &m.elements {
            assert!(
                m.elements.iter().any(|u| elem.compose(u) == e),
                "e not in mM for m = {elem:?}"
            );
        }
    }

    #[test]
    fn every_element_acts_invertibly_on_recurrent_states() {
        let m = rho_monoid();
        let eq = recurrent_states(&m);
        for elem in &m.elements {
            let mut image: Vec<usize> = eq.iter().map(|&q| elem.apply(q as u32) as usize).collect();
            image.sort_unstable();
            assert_eq!(image, eq);
        }
    }

    #[test]
    fn dickson_examples() {
        let seq: Vec<Vec<BigInt>> = [[1, 2], [2, 1], [0, 3], [1, 2]]
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(dickson_find(&seq), Some((0, 3)));

        let zero_first: Vec<Vec<BigInt>> = [[0, 0], [5, 7]]
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(dickson_find(&zero_first), Some((0, 1)));

        let antichain: Vec<Vec<BigInt>> = [[3, 0], [2, 1], [1, 2]]
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(dickson_find(&antichain), None);
    }

    #[test]
    fn tracker_matches_batch_search() {
        let seq: Vec<Vec<BigInt>> = [[3, 0], [2, 1], [1, 2], [2, 2]]
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut tracker = DicksonTracker::new();
        let mut hit = None;
        for (i, v) in seq.iter().enumerate() {
            if let Some(m) = tracker.push(i, v.clone()) {
                hit = Some((m, i));
                break;
            }
        }
        assert_eq!(hit, dickson_find(&seq));
    }

    #[test]
    fn some_power_of_every_element_is_idempotent() {
        let m = rho_monoid();
        for elem in &m.elements {
            let (_, p) = idempotent_power(elem);
            assert!(p.is_idempotent());
        }
    }
}
