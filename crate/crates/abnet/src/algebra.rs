//! Algebraic invariants of a network: locally recurrent states, the kernel
//! lattice of letter vectors acting trivially on them, letter periods, the
//! production matrix, the Laplacian, and the two decompositions (local
//! components by state, strong components by alphabet).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hnf, IntLattice, RatMatrix};
use crate::model::{local_action, Config, LetterId, LetterVec, Network, VertexId};
use crate::monoid::{
    generate_monoid, monoid_budget, recurrent_structure, state_components, RecurrentStructure,
    Transformation, TransformationMonoid,
};

/// Cached per-vertex transition monoids and their recurrent structure.
#[derive(Debug, Clone)]
pub struct LocalMonoids {
    pub vertices: Vec<VertexMonoid>,
}

#[derive(Debug, Clone)]
pub struct VertexMonoid {
    pub monoid: TransformationMonoid,
    pub structure: RecurrentStructure,
}

impl LocalMonoids {
    pub fn compute(net: &Network, budget: usize) -> Result<LocalMonoids> {
        let mut vertices = Vec::with_capacity(net.vertex_count());
        for proc_ in net.vertices() {
            let monoid = generate_monoid(proc_, budget)?;
            let structure = recurrent_structure(&monoid);
            vertices.push(VertexMonoid { monoid, structure });
        }
        Ok(LocalMonoids { vertices })
    }

    /// Apply the minimal idempotent of every vertex to a state tuple.
    pub fn recurrent_projection(&self, q: &[u32]) -> Vec<u32> {
        self.vertices
            .iter()
            .zip(q)
            .map(|(v, &s)| v.structure.min_idempotent.apply(s))
            .collect()
    }

    pub fn is_locally_recurrent(&self, q: &[u32]) -> bool {
        self.recurrent_projection(q) == q
    }

    /// Per-vertex irreducible component labels of a state tuple.
    pub fn component_label(&self, q: &[u32]) -> Vec<usize> {
        self.vertices
            .iter()
            .zip(q)
            .map(|(v, &s)| v.structure.component_of[s as usize])
            .collect()
    }

    pub fn same_local_component(&self, q1: &[u32], q2: &[u32]) -> bool {
        self.component_label(q1) == self.component_label(q2)
    }

    /// Apply one monoid element per vertex (indices into each vertex's
    /// element list) to a state tuple.
    pub fn apply_elements(&self, elements: &[usize], q: &[u32]) -> Vec<u32> {
        self.vertices
            .iter()
            .zip(elements)
            .zip(q)
            .map(|((v, &m), &s)| v.monoid.elements[m].apply(s))
            .collect()
    }
}

/// Project a state tuple onto the locally recurrent states by applying
/// each vertex's minimal idempotent. Idempotent: applying it twice equals
/// applying it once.
pub fn locally_recurrent(net: &Network, q: &[u32]) -> Result<Vec<u32>> {
    let monoids = LocalMonoids::compute(net, monoid_budget())?;
    Ok(monoids.recurrent_projection(q))
}

/// The kernel lattice of a network (restricted to one local component):
/// per-vertex lattices of letter vectors acting as the identity on the
/// recurrent states, their product over the global alphabet, and the
/// per-letter periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelData {
    pub per_vertex: Vec<IntLattice>,
    pub global: IntLattice,
    /// Smallest `n >= 1` with `n` processings of the letter acting as the
    /// identity on the recurrent states; global alphabet order.
    pub periods: Vec<u64>,
    /// Order of the per-vertex permutation group acting on the recurrent
    /// states.
    pub group_orders: Vec<usize>,
}

impl KernelData {
    /// True iff `x` (global alphabet order) lies in the product lattice.
    pub fn contains(&self, net: &Network, x: &[BigInt]) -> bool {
        let mut ok = true;
        for (v, lattice) in self.per_vertex.iter().enumerate() {
            let range = net.vertex(v).global_letters();
            ok &= lattice.contains(&x[range]);
        }
        ok
    }

    /// Smallest `n >= 1` such that `n * x` lies in the lattice. Always at
    /// most the product of the per-vertex indices.
    pub fn smallest_multiple_in_kernel(&self, net: &Network, x: &[BigInt]) -> BigInt {
        let mut n = BigInt::one();
        for (v, lattice) in self.per_vertex.iter().enumerate() {
            let range = net.vertex(v).global_letters();
            let part = &x[range];
            let index = lattice.index();
            let mut found: Option<BigInt> = None;
            if let Some(cap) = index.to_u64().filter(|&c| c <= 1_000_000) {
                for k in 1..=cap {
                    let scaled: Vec<BigInt> = part.iter().map(|c| c * k).collect();
                    if lattice.contains(&scaled) {
                        found = Some(BigInt::from(k));
                        break;
                    }
                }
            }
            // The group order always works as a fallback multiplier.
            let k_v = found.unwrap_or(index);
            n = num_integer::lcm(n, k_v);
        }
        n
    }
}

/// Permutation group generated by letter actions on a recurrent state set,
/// enumerated with BFS witnesses; relations harvested from the non-tree
/// edges of the Cayley graph generate the kernel lattice.
fn kernel_of_action(
    letter_count: usize,
    perms: &[Transformation],
    budget: usize,
) -> Result<(IntLattice, Vec<u64>, usize)> {
    if letter_count == 0 {
        return Ok((hnf(0, &[])?, vec![], 1));
    }
    let k = perms[0].0.len();
    let identity = Transformation::identity(k);
    let mut elements = vec![identity.clone()];
    let mut witness = vec![vec![BigInt::zero(); letter_count]];
    let mut index = std::collections::HashMap::new();
    index.insert(elements[0].0.clone(), 0usize);
    let mut relations: Vec<Vec<BigInt>> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        for (a, sigma) in perms.iter().enumerate() {
            let next = sigma.compose(&elements[head]);
            match index.get(&next.0) {
                None => {
                    if elements.len() >= budget {
                        return Err(Error::MonoidBudgetExceeded { budget });
                    }
                    let mut w = witness[head].clone();
                    w[a] += 1;
                    index.insert(next.0.clone(), elements.len());
                    elements.push(next);
                    witness.push(w);
                }
                Some(&existing) => {
                    let mut rel = witness[head].clone();
                    rel[a] += 1;
                    for (r, w) in rel.iter_mut().zip(&witness[existing]) {
                        *r -= w;
                    }
                    relations.push(rel);
                }
            }
        }
        head += 1;
    }
    let order = elements.len();
    let lattice = hnf(letter_count, &relations)?;
    if lattice.index() != BigInt::from(order) {
        return Err(Error::InternalInconsistency(format!(
            "kernel index {} disagrees with group order {order}",
            lattice.index()
        )));
    }
    let mut periods = Vec::with_capacity(letter_count);
    for sigma in perms {
        let mut power = sigma.clone();
        let mut r = 1u64;
        while power != identity {
            power = sigma.compose(&power);
            r += 1;
        }
        periods.push(r);
    }
    Ok((lattice, periods, order))
}

/// Compute the kernel of the local component containing `q`, using cached
/// monoids. The recurrent set of each vertex is taken within the component
/// of `q_v`.
pub fn total_kernel_with(net: &Network, monoids: &LocalMonoids, q: &[u32]) -> Result<KernelData> {
    let budget = monoid_budget();
    let mut per_vertex = Vec::with_capacity(net.vertex_count());
    let mut periods = Vec::new();
    let mut group_orders = Vec::new();
    for (v, proc_) in net.vertices().iter().enumerate() {
        let comp_of = &monoids.vertices[v].structure.component_of;
        let target = comp_of[q[v] as usize];
        let comp_states: Vec<usize> = (0..proc_.state_count())
            .filter(|&s| comp_of[s] == target)
            .collect();
        let (lattice, r, order) = vertex_kernel(proc_, &comp_states, budget)?;
        periods.extend(r);
        group_orders.push(order);
        per_vertex.push(lattice);
    }
    let global = IntLattice::product(&per_vertex);
    Ok(KernelData {
        per_vertex,
        global,
        periods,
        group_orders,
    })
}

/// Kernel of the local component of `q` (the default scope used by the
/// halting analysis).
pub fn total_kernel(net: &Network, q: &[u32]) -> Result<KernelData> {
    let monoids = LocalMonoids::compute(net, monoid_budget())?;
    total_kernel_with(net, &monoids, q)
}

/// Kernel over the full processors (all components at once): letter
/// vectors acting as the identity on every locally recurrent state.
pub fn total_kernel_global(net: &Network) -> Result<KernelData> {
    let budget = monoid_budget();
    let mut per_vertex = Vec::with_capacity(net.vertex_count());
    let mut periods = Vec::new();
    let mut group_orders = Vec::new();
    for proc_ in net.vertices() {
        let all: Vec<usize> = (0..proc_.state_count()).collect();
        let (lattice, r, order) = vertex_kernel(proc_, &all, budget)?;
        periods.extend(r);
        group_orders.push(order);
        per_vertex.push(lattice);
    }
    let global = IntLattice::product(&per_vertex);
    Ok(KernelData {
        per_vertex,
        global,
        periods,
        group_orders,
    })
}

/// Kernel of one processor over a closed subset of its states: restrict
/// the transition tables, find the recurrent states there, and enumerate
/// the permutation group of letter actions.
fn vertex_kernel(
    proc_: &crate::model::Processor,
    states: &[usize],
    budget: usize,
) -> Result<(IntLattice, Vec<u64>, usize)> {
    let na = proc_.letter_count();
    if na == 0 {
        return Ok((hnf(0, &[])?, vec![], 1));
    }
    let mut remap = vec![usize::MAX; proc_.state_count()];
    for (new, &old) in states.iter().enumerate() {
        remap[old] = new;
    }
    let tables: Vec<Vec<u32>> = (0..na)
        .map(|a| {
            states
                .iter()
                .map(|&s| {
                    let t = proc_.next_state(a, s as u32) as usize;
                    debug_assert!(remap[t] != usize::MAX, "restriction not closed");
                    remap[t] as u32
                })
                .collect()
        })
        .collect();
    let monoid = TransformationMonoid::generate(states.len(), &tables, budget)?;
    let e = crate::monoid::minimal_idempotent(&monoid);
    let recurrent: Vec<u32> = (0..states.len() as u32)
        .filter(|&s| e.apply(s) == s)
        .collect();
    // Letter actions restricted to the recurrent states are permutations.
    let mut back = vec![u32::MAX; states.len()];
    for (i, &s) in recurrent.iter().enumerate() {
        back[s as usize] = i as u32;
    }
    let mut perms = Vec::with_capacity(na);
    for table in &tables {
        let perm: Vec<u32> = recurrent
            .iter()
            .map(|&s| back[table[s as usize] as usize])
            .collect();
        if perm.contains(&u32::MAX) {
            return Err(Error::InternalInconsistency(format!(
                "letter action does not preserve the recurrent states of `{}`",
                proc_.id
            )));
        }
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != perm.len() {
            return Err(Error::InternalInconsistency(format!(
                "letter action is not a bijection on the recurrent states of `{}`",
                proc_.id
            )));
        }
        perms.push(Transformation(perm));
    }
    kernel_of_action(na, &perms, budget)
}

/// The production matrix and Laplacian of a network at a base state,
/// together with the kernel data they were derived from.
#[derive(Debug, Clone)]
pub struct ProductionData {
    pub kernel: KernelData,
    /// The locally recurrent base state the columns were measured at.
    pub base_state: Vec<u32>,
    /// `matrix[a][b]` = letters `a` produced per letter `b` processed.
    pub matrix: RatMatrix,
    /// `(I - P) D` with `D = diag(periods)`; integer entries.
    pub laplacian: RatMatrix,
}

impl ProductionData {
    pub fn periods(&self) -> &[u64] {
        &self.kernel.periods
    }

    pub fn diag(&self) -> RatMatrix {
        let n = self.kernel.periods.len();
        let mut d = RatMatrix::zeros(n, n);
        for (i, &r) in self.kernel.periods.iter().enumerate() {
            d.set(i, i, BigRational::from_integer(BigInt::from(r)));
        }
        d
    }
}

/// Measure column `b` of the production matrix: run `r_b` copies of letter
/// `b` through the local action at `q̂` and divide the output counts by
/// `r_b`. The state must return to `q̂` exactly.
fn production_columns(
    net: &Network,
    base: &[u32],
    kernel: &KernelData,
) -> Result<(RatMatrix, RatMatrix)> {
    let n = net.alphabet_len();
    let mut p = RatMatrix::zeros(n, n);
    for b in 0..n {
        let r_b = kernel.periods[b];
        let mut x = LetterVec::zeros(n);
        x.set(b, BigInt::from(r_b));
        let start = Config::new(LetterVec::zeros(n), base.to_vec());
        let result = local_action(net, &x, &start)?;
        if result.state != base {
            return Err(Error::InternalInconsistency(format!(
                "kernel vector {} failed to return the state to its base",
                net.format_letters(&x)
            )));
        }
        for a in 0..n {
            p.set(
                a,
                b,
                BigRational::new(result.letters.0[a].clone(), BigInt::from(r_b)),
            );
        }
    }
    if !p.is_nonnegative() {
        return Err(Error::InternalInconsistency(
            "production matrix has a negative entry".into(),
        ));
    }
    let periods: Vec<BigRational> = kernel
        .periods
        .iter()
        .map(|&r| BigRational::from_integer(BigInt::from(r)))
        .collect();
    let laplacian = RatMatrix::identity(n).sub(&p)?.scale_cols(&periods)?;
    if !laplacian.is_integral() {
        return Err(Error::InternalInconsistency(
            "Laplacian has a non-integer entry".into(),
        ));
    }
    Ok((p, laplacian))
}

pub fn production_with(net: &Network, monoids: &LocalMonoids, q: &[u32]) -> Result<ProductionData> {
    let base = monoids.recurrent_projection(q);
    let kernel = total_kernel_with(net, monoids, &base)?;
    let (matrix, laplacian) = production_columns(net, &base, &kernel)?;
    Ok(ProductionData {
        kernel,
        base_state: base,
        matrix,
        laplacian,
    })
}

/// Production matrix of the local component containing `q`, measured at
/// the recurrent projection of `q`.
pub fn production_matrix(net: &Network, q: &[u32]) -> Result<ProductionData> {
    let monoids = LocalMonoids::compute(net, monoid_budget())?;
    production_with(net, &monoids, q)
}

const EXHAUSTIVE_STATE_LIMIT: u128 = 10_000;
const SAMPLES_PER_COMPONENT: usize = 100;

/// Check that the production matrix is constant across the locally
/// recurrent states of every local component: exhaustive below
/// [`EXHAUSTIVE_STATE_LIMIT`] total states, sampled above it.
pub fn production_independence_check(net: &Network) -> Result<bool> {
    let monoids = LocalMonoids::compute(net, monoid_budget())?;
    let total_states: u128 = net
        .vertices()
        .iter()
        .map(|p| p.state_count() as u128)
        .product();
    let exhaustive = total_states <= EXHAUSTIVE_STATE_LIMIT;

    // Recurrent states per vertex per component label.
    let mut per_vertex: Vec<Vec<Vec<u32>>> = Vec::new();
    for (v, vm) in monoids.vertices.iter().enumerate() {
        let ncomp = vm.structure.component_of.iter().max().map_or(0, |&m| m + 1);
        let mut groups: Vec<Vec<u32>> = vec![Vec::new(); ncomp];
        for s in 0..net.vertex(v).state_count() {
            let comp = vm.structure.component_of[s];
            // Recurrent within the component: fixed by the restricted
            // minimal idempotent; equivalently fixed points of the full
            // component restriction's idempotent. Compute via the
            // component-restricted monoid.
            groups[comp].push(s as u32);
        }
        let refined: Vec<Vec<u32>> = groups
            .iter()
            .map(|states| component_recurrent_states(net, v, states))
            .collect::<Result<_>>()?;
        per_vertex.push(refined);
    }

    let comp_counts: Vec<usize> = per_vertex.iter().map(Vec::len).collect();
    let mut combo = vec![0usize; net.vertex_count()];
    loop {
        // One local component: choose per-vertex recurrent state sets.
        let sets: Vec<&Vec<u32>> = combo
            .iter()
            .enumerate()
            .map(|(v, &c)| &per_vertex[v][c])
            .collect();
        if sets.iter().all(|s| !s.is_empty()) {
            let first_state: Vec<u32> = sets.iter().map(|s| s[0]).collect();
            let kernel = total_kernel_with(net, &monoids, &first_state)?;
            let (reference, _) = production_columns(net, &first_state, &kernel)?;
            let check_state = |state: &[u32]| -> Result<bool> {
                let (p, _) = production_columns(net, state, &kernel)?;
                Ok(p == reference)
            };
            if exhaustive {
                let mut idx = vec![0usize; sets.len()];
                'states: loop {
                    let state: Vec<u32> = idx.iter().zip(&sets).map(|(&i, s)| s[i]).collect();
                    if !check_state(&state)? {
                        return Ok(false);
                    }
                    for v in 0..idx.len() {
                        idx[v] += 1;
                        if idx[v] < sets[v].len() {
                            continue 'states;
                        }
                        idx[v] = 0;
                    }
                    break;
                }
            } else {
                let mut rng = 0x9e3779b97f4a7c15u64;
                for _ in 0..SAMPLES_PER_COMPONENT {
                    let state: Vec<u32> = sets
                        .iter()
                        .map(|s| {
                            rng ^= rng << 13;
                            rng ^= rng >> 7;
                            rng ^= rng << 17;
                            s[(rng % s.len() as u64) as usize]
                        })
                        .collect();
                    if !check_state(&state)? {
                        return Ok(false);
                    }
                }
            }
        }
        // Next component combination.
        let mut v = 0;
        loop {
            if v == combo.len() {
                return Ok(true);
            }
            combo[v] += 1;
            if combo[v] < comp_counts[v] {
                break;
            }
            combo[v] = 0;
            v += 1;
        }
    }
}

/// Recurrent states of one vertex within a closed state subset.
fn component_recurrent_states(net: &Network, v: VertexId, states: &[u32]) -> Result<Vec<u32>> {
    let proc_ = net.vertex(v);
    if proc_.letter_count() == 0 {
        return Ok(states.to_vec());
    }
    let mut remap = vec![usize::MAX; proc_.state_count()];
    for (new, &old) in states.iter().enumerate() {
        remap[old as usize] = new;
    }
    let tables: Vec<Vec<u32>> = (0..proc_.letter_count())
        .map(|a| {
            states
                .iter()
                .map(|&s| remap[proc_.next_state(a, s) as usize] as u32)
                .collect()
        })
        .collect();
    let monoid = TransformationMonoid::generate(states.len(), &tables, monoid_budget())?;
    let e = crate::monoid::minimal_idempotent(&monoid);
    Ok(states
        .iter()
        .enumerate()
        .filter(|&(i, _)| e.apply(i as u32) == i as u32)
        .map(|(_, &s)| s)
        .collect())
}

/// The partition side of the component analysis: per-vertex irreducible
/// component labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalComponents {
    /// `per_vertex[v][q]` is the component label of state `q` at vertex `v`.
    pub per_vertex: Vec<Vec<usize>>,
    /// Number of components at each vertex.
    pub counts: Vec<usize>,
}

impl LocalComponents {
    /// Total number of local components of the network (product of the
    /// per-vertex counts).
    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).product()
    }

    pub fn label_of(&self, q: &[u32]) -> Vec<usize> {
        self.per_vertex
            .iter()
            .zip(q)
            .map(|(labels, &s)| labels[s as usize])
            .collect()
    }
}

/// Partition every vertex's state space into irreducible components.
pub fn local_components(net: &Network) -> Result<LocalComponents> {
    let mut per_vertex = Vec::with_capacity(net.vertex_count());
    let mut counts = Vec::with_capacity(net.vertex_count());
    for proc_ in net.vertices() {
        let tables: Vec<Vec<u32>> = (0..proc_.letter_count())
            .map(|a| proc_.transition_table(a).to_vec())
            .collect();
        let labels = state_components(proc_.state_count(), &tables);
        counts.push(labels.iter().max().map_or(0, |&m| m + 1).max(1));
        per_vertex.push(labels);
    }
    Ok(LocalComponents { per_vertex, counts })
}

/// The restriction of the network to the local component containing `q`:
/// same graph and alphabet, smaller state spaces, default state `q`.
pub fn restrict_to_component(net: &Network, q: &[u32]) -> Result<Network> {
    let components = local_components(net)?;
    let kept: Vec<Vec<usize>> = components
        .per_vertex
        .iter()
        .zip(q)
        .map(|(labels, &s)| {
            let target = labels[s as usize];
            (0..labels.len()).filter(|&i| labels[i] == target).collect()
        })
        .collect();
    net.restrict_vertex_states(&kept, q)
}

/// The alphabet side of the component analysis: strongly connected
/// components of the production graph in block order, the permuted
/// production matrix, and the diagonal-block cross-check against the
/// restricted subnetworks.
#[derive(Debug, Clone)]
pub struct StrongComponents {
    pub production: ProductionData,
    /// Letter ids per strong component; component `i` can only feed
    /// components `j <= i`, so the permuted matrix is block upper
    /// triangular.
    pub components: Vec<Vec<LetterId>>,
    pub component_of: Vec<usize>,
    /// Concatenated block order (letter ids).
    pub permutation: Vec<LetterId>,
    /// `P` permuted into block order.
    pub permuted: RatMatrix,
    /// Per component: does the kernel of the restricted subnetwork agree
    /// with the coordinate section of the full kernel?
    pub kernel_agrees: Vec<bool>,
}

/// Strong components of the production graph at state `q`, with the
/// block-triangularity and diagonal-block identities verified.
pub fn strong_components(net: &Network, q: &[u32]) -> Result<StrongComponents> {
    let production = production_matrix(net, q)?;
    let n = net.alphabet_len();
    // Edge a -> b iff processing a produces b.
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| production.matrix.get(b, a).is_positive())
                .collect()
        })
        .collect();
    let component_of = kosaraju(n, &adj);
    let ncomp = component_of.iter().max().map_or(0, |&m| m + 1);
    let mut components: Vec<Vec<LetterId>> = vec![Vec::new(); ncomp];
    for a in 0..n {
        components[component_of[a]].push(a);
    }
    let permutation: Vec<LetterId> = components.iter().flatten().copied().collect();
    let permuted = production.matrix.permuted(&permutation);

    // Every block below the diagonal must vanish.
    for (pi, &a) in permutation.iter().enumerate() {
        for (pj, &b) in permutation.iter().enumerate() {
            if component_of[a] > component_of[b] && !permuted.get(pi, pj).is_zero() {
                return Err(Error::InternalInconsistency(format!(
                    "production matrix is not block triangular at ({a}, {b})"
                )));
            }
        }
    }

    // Diagonal block = production matrix of the restricted subnetwork.
    let mut kernel_agrees = Vec::with_capacity(ncomp);
    for letters in &components {
        let (sub, kept) = net.restrict_alphabet(letters)?;
        let sub_production = production_matrix(&sub, q)?;
        let expected = production.matrix.submatrix(&kept, &kept);
        if sub_production.matrix != expected {
            return Err(Error::InternalInconsistency(
                "restricted subnetwork production differs from the diagonal block".into(),
            ));
        }
        // Kernel comparison: coordinate section of the full kernel versus
        // the restricted network's own kernel.
        let mut agrees = true;
        for (v, lattice) in sub_production.kernel.per_vertex.iter().enumerate() {
            let full_range = net.vertex(v).global_letters();
            let keep_local: Vec<usize> = kept
                .iter()
                .filter(|&&g| full_range.contains(&g))
                .map(|&g| g - full_range.start)
                .collect();
            let section = production.kernel.per_vertex[v].coordinate_section(&keep_local)?;
            if &section != lattice {
                agrees = false;
            }
        }
        kernel_agrees.push(agrees);
    }

    Ok(StrongComponents {
        production,
        components,
        component_of,
        permutation,
        permuted,
        kernel_agrees,
    })
}

/// Kosaraju labeling: edge `a -> b` implies `label(a) >= label(b)`, so
/// sink components get the smallest labels.
fn kosaraju(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // Iterative DFS with explicit finish events.
        let mut stack = vec![(start, 0usize)];
        seen[start] = true;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i < adj[u].len() {
                let v = adj[u][*i];
                *i += 1;
                if !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
                stack.pop();
            }
        }
    }
    let mut radj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, next) in adj.iter().enumerate() {
        for &v in next {
            radj[v].push(u);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut discovered = 0usize;
    for &start in order.iter().rev() {
        if label[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        label[start] = discovered;
        while let Some(u) = stack.pop() {
            for &v in &radj[u] {
                if label[v] == usize::MAX {
                    label[v] = discovered;
                    stack.push(v);
                }
            }
        }
        discovered += 1;
    }
    // Discovery order is topological (sources first); reverse so that
    // reachability implies a larger-or-equal label.
    label.iter().map(|&l| discovered - 1 - l).collect()
}

/// Two networks are homotopic when they share the graph and alphabet and
/// have identical kernel lattices and production matrices.
pub fn homotopic(net1: &Network, net2: &Network, q1: &[u32], q2: &[u32]) -> Result<bool> {
    let same_vertices = net1.vertex_count() == net2.vertex_count()
        && net1
            .vertices()
            .iter()
            .zip(net2.vertices())
            .all(|(a, b)| a.id == b.id);
    let same_letters = net1.alphabet_len() == net2.alphabet_len()
        && net1
            .letters()
            .iter()
            .zip(net2.letters())
            .all(|(a, b)| a.name == b.name && a.owner == b.owner);
    if !same_vertices || !same_letters {
        return Err(Error::AlphabetMismatch);
    }
    let p1 = production_matrix(net1, q1)?;
    let p2 = production_matrix(net2, q2)?;
    Ok(p1.kernel.per_vertex == p2.kernel.per_vertex && p1.matrix == p2.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_rotor, build_sandpile, build_toppling, GraphSpec, TopplingSpec};
    use crate::linalg::rat_to_string;
    use crate::model::ProcessorDef;

    fn ex3() -> Network {
        build_toppling(&TopplingSpec::with_names(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![3, -1, 0], vec![-2, 4, -2], vec![-2, -2, 5]],
        ))
        .unwrap()
    }

    fn rho_net() -> Network {
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

    fn klein_net() -> Network {
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

    fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(rat_to_string).collect())
            .collect()
    }

    #[test]
    fn group_processors_are_already_recurrent() {
        let net = ex3();
        for q in [[0, 0, 0], [2, 3, 4], [1, 0, 2]] {
            assert_eq!(locally_recurrent(&net, &q).unwrap(), q);
        }
    }

    #[test]
    fn rho_state_zero_projects_into_the_cycle() {
        let net = rho_net();
        assert_eq!(locally_recurrent(&net, &[0]).unwrap(), vec![2]);
        assert_eq!(locally_recurrent(&net, &[1]).unwrap(), vec![1]);
        let qhat = locally_recurrent(&net, &[0]).unwrap();
        assert_eq!(locally_recurrent(&net, &qhat).unwrap(), qhat);
    }

    #[test]
    fn worked_example_kernel_periods_and_index() {
        let net = ex3();
        let kernel = total_kernel(&net, net.default_state()).unwrap();
        assert_eq!(kernel.periods, vec![3, 4, 5]);
        assert_eq!(kernel.group_orders, vec![3, 4, 5]);
        assert_eq!(kernel.global.index(), BigInt::from(60));
        for (lattice, r) in kernel.per_vertex.iter().zip([3i64, 4, 5]) {
            assert_eq!(lattice.basis, vec![vec![BigInt::from(r)]]);
        }
    }

    #[test]
    fn identity_actions_have_full_kernel() {
        let net = Network::new(
            "idle",
            vec![ProcessorDef {
                id: "v".into(),
                alphabet: vec!["a".into(), "b".into()],
                states: vec!["0".into(), "1".into()],
                transition: vec![vec![0, 1], vec![0, 1]],
                emit: vec![vec![vec![], vec![]], vec![vec![], vec![]]],
            }],
            None,
        )
        .unwrap();
        let kernel = total_kernel(&net, &[0]).unwrap();
        assert_eq!(kernel.periods, vec![1, 1]);
        assert_eq!(kernel.global.index(), BigInt::from(1));
    }

    #[test]
    fn klein_four_kernel_has_index_four() {
        let net = klein_net();
        let kernel = total_kernel(&net, &[0]).unwrap();
        assert_eq!(kernel.periods, vec![2, 2]);
        assert_eq!(kernel.group_orders, vec![4]);
        assert_eq!(
            kernel.per_vertex[0].basis,
            vec![
                vec![BigInt::from(2), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(2)],
            ]
        );
    }

    #[test]
    fn worked_example_production_and_laplacian() {
        let net = ex3();
        let production = production_matrix(&net, net.default_state()).unwrap();
        assert_eq!(
            matrix_strings(&production.matrix),
            vec![
                vec!["0", "1/4", "0"],
                vec!["2/3", "0", "2/5"],
                vec!["2/3", "1/2", "0"],
            ]
        );
        assert_eq!(
            matrix_strings(&production.laplacian),
            vec![
                vec!["3", "-1", "0"],
                vec!["-2", "4", "-2"],
                vec!["-2", "-2", "5"],
            ]
        );
    }

    #[test]
    fn zero_emission_network_production_is_zero() {
        let net = klein_net();
        let production = production_matrix(&net, &[0]).unwrap();
        assert_eq!(
            matrix_strings(&production.matrix),
            vec![vec!["0", "0"], vec!["0", "0"]]
        );
        // L = D.
        assert_eq!(
            matrix_strings(&production.laplacian),
            vec![vec!["2", "0"], vec!["0", "2"]]
        );
    }

    #[test]
    fn sandpile_pair_production_is_the_swap() {
        let net = build_sandpile(&GraphSpec::undirected(&["a", "b"], &[("a", "b")])).unwrap();
        let production = production_matrix(&net, net.default_state()).unwrap();
        assert_eq!(
            matrix_strings(&production.matrix),
            vec![vec!["0", "1"], vec!["1", "0"]]
        );
        assert_eq!(
            matrix_strings(&production.laplacian),
            vec![vec!["1", "-1"], vec!["-1", "1"]]
        );
    }

    #[test]
    fn kernel_vectors_return_the_state_and_produce_linearly() {
        let net = ex3();
        let production = production_matrix(&net, net.default_state()).unwrap();
        let base = &production.base_state;
        let samples: Vec<Vec<u64>> = vec![
            vec![3, 0, 0],
            vec![0, 4, 0],
            vec![0, 0, 5],
            vec![3, 4, 0],
            vec![3, 4, 5],
            vec![6, 4, 10],
        ];
        for k in samples {
            let kv = LetterVec::from_u64s(&k);
            assert!(production.kernel.contains(&net, &kv.0));
            let out = local_action(&net, &kv, &Config::new(LetterVec::zeros(3), base.clone()))
                .unwrap();
            assert_eq!(&out.state, base);
            // Output counts equal P k exactly.
            let k_rat: Vec<BigRational> = kv
                .0
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            let pk = production.matrix.mul_vec(&k_rat).unwrap();
            for (produced, expected) in out.letters.0.iter().zip(&pk) {
                assert_eq!(&BigRational::from_integer(produced.clone()), expected);
            }
        }
    }

    #[test]
    fn production_is_independent_of_the_recurrent_state() {
        assert!(production_independence_check(&ex3()).unwrap());
        assert!(production_independence_check(&rho_net()).unwrap());
        assert!(production_independence_check(&klein_net()).unwrap());
    }

    #[test]
    fn state_returns_transport_along_monoid_elements() {
        let net = ex3();
        let monoids = LocalMonoids::compute(&net, 10_000).unwrap();
        let y = LetterVec::from_u64s(&[3, 4, 5]);
        let q = vec![0u32, 0, 0];
        let base = local_action(&net, &y, &Config::new(LetterVec::zeros(3), q.clone())).unwrap();
        assert_eq!(base.state, q);
        // For every element tuple m, y acted at m(q) gives the same letters
        // and state m(q).
        let sizes: Vec<usize> = monoids.vertices.iter().map(|v| v.monoid.len()).collect();
        let mut combo = vec![0usize; sizes.len()];
        loop {
            let mq = monoids.apply_elements(&combo, &q);
            let out =
                local_action(&net, &y, &Config::new(LetterVec::zeros(3), mq.clone())).unwrap();
            assert_eq!(out.state, mq);
            assert_eq!(out.letters, base.letters);
            let mut v = 0;
            loop {
                if v == combo.len() {
                    return;
                }
                combo[v] += 1;
                if combo[v] < sizes[v] {
                    break;
                }
                combo[v] = 0;
                v += 1;
            }
        }
    }

    #[test]
    fn two_orbit_vertex_splits_into_two_components() {
        let net = Network::new(
            "orbits",
            vec![ProcessorDef {
                id: "v".into(),
                alphabet: vec!["a".into(), "b".into()],
                states: (0..4).map(|s| s.to_string()).collect(),
                transition: vec![vec![1, 0, 2, 3], vec![0, 1, 3, 2]],
                emit: vec![vec![vec![]; 4], vec![vec![]; 4]],
            }],
            None,
        )
        .unwrap();
        let components = local_components(&net).unwrap();
        assert_eq!(components.counts, vec![2]);
        assert_eq!(components.per_vertex[0], vec![0, 0, 1, 1]);
        assert_eq!(components.total(), 2);

        let restricted = restrict_to_component(&net, &[2]).unwrap();
        assert_eq!(restricted.vertex(0).state_count(), 2);
        assert_eq!(restricted.alphabet_len(), 2);
        assert_eq!(restricted.default_state(), &[0]);
    }

    #[test]
    fn single_component_families() {
        assert_eq!(local_components(&ex3()).unwrap().total(), 1);
        assert_eq!(local_components(&rho_net()).unwrap().total(), 1);
    }

    #[test]
    fn worked_example_is_one_strong_component() {
        let net = ex3();
        let strong = strong_components(&net, net.default_state()).unwrap();
        assert_eq!(strong.components.len(), 1);
        assert_eq!(strong.components[0], vec![0, 1, 2]);
        assert!(strong.kernel_agrees.iter().all(|&b| b));
    }

    #[test]
    fn zero_emission_letters_are_singleton_components() {
        let net = klein_net();
        let strong = strong_components(&net, &[0]).unwrap();
        assert_eq!(strong.components.len(), 2);
        assert!(strong
            .permuted
            .row(0)
            .iter()
            .chain(strong.permuted.row(1))
            .all(Zero::is_zero));
    }

    #[test]
    fn chain_network_is_block_triangular() {
        // a feeds b; b emits nothing.
        let net = build_toppling(&TopplingSpec::with_names(
            vec!["a".into(), "b".into()],
            vec![vec![2, 0], vec![-1, 3]],
        ))
        .unwrap();
        let strong = strong_components(&net, net.default_state()).unwrap();
        assert_eq!(strong.components, vec![vec![1], vec![0]]);
        assert_eq!(strong.permutation, vec![1, 0]);
        assert_eq!(
            matrix_strings(&strong.permuted),
            vec![vec!["0", "1/2"], vec!["0", "0"]]
        );
        assert!(strong.kernel_agrees.iter().all(|&b| b));
    }

    #[test]
    fn homotopy_examples() {
        let net = ex3();
        assert!(homotopic(&net, &net, net.default_state(), net.default_state()).unwrap());

        let triangle = [("a", "b"), ("b", "c"), ("c", "a")];
        let sand = build_sandpile(&GraphSpec::undirected(&["a", "b", "c"], &triangle)).unwrap();
        let rotor = build_rotor(&GraphSpec::undirected(&["a", "b", "c"], &triangle)).unwrap();
        assert!(homotopic(
            &rotor,
            &sand,
            rotor.default_state(),
            sand.default_state()
        )
        .unwrap());

        let k2 = build_sandpile(&GraphSpec::undirected(&["a", "b"], &[("a", "b")])).unwrap();
        assert!(matches!(
            homotopic(&net, &k2, net.default_state(), k2.default_state()),
            Err(Error::AlphabetMismatch)
        ));
    }
}
