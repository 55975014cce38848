//! Networks of communicating automata and their execution semantics.
//!
//! A network is a directed system of processors, one per vertex. Each
//! processor owns a set of letters; processing a letter advances the owner's
//! internal state and emits new letters into the system. The central
//! property checked by [`validate_abelian`] is that per-vertex transitions
//! and emissions commute, which makes the final result of a halting run
//! independent of processing order.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type LetterId = usize;
pub type VertexId = usize;

/// One letter of the global alphabet together with the vertex that owns it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub owner: VertexId,
    pub local_index: usize,
}

/// Plain data used to construct a [`Processor`]. Emission targets are
/// given by letter name and resolved against the global alphabet when the
/// network is assembled.
#[derive(Debug, Clone)]
pub struct ProcessorDef {
    pub id: String,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    /// `transition[a][q]` is the state reached by processing local letter
    /// `a` in state `q`.
    pub transition: Vec<Vec<u32>>,
    /// `emit[a][q]` lists `(letter name, count)` pairs passed when local
    /// letter `a` is processed in state `q` (read before the transition).
    pub emit: Vec<Vec<Vec<(String, u64)>>>,
}

/// A single automaton sitting at one vertex of the network.
#[derive(Debug, Clone)]
pub struct Processor {
    pub id: String,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    offset: LetterId,
    transition: Vec<Vec<u32>>,
    emit: Vec<Vec<Vec<(LetterId, u64)>>>,
}

impl Processor {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len()
    }

    /// Global id of this processor's first letter.
    pub fn letter_offset(&self) -> LetterId {
        self.offset
    }

    pub fn global_letters(&self) -> std::ops::Range<LetterId> {
        self.offset..self.offset + self.alphabet.len()
    }

    pub fn next_state(&self, local: usize, q: u32) -> u32 {
        self.transition[local][q as usize]
    }

    pub fn transition_table(&self, local: usize) -> &[u32] {
        &self.transition[local]
    }

    pub fn emissions(&self, local: usize, q: u32) -> &[(LetterId, u64)] {
        &self.emit[local][q as usize]
    }
}

/// An immutable network of processors with a fixed global alphabet.
///
/// The global alphabet is the concatenation of per-vertex alphabets in
/// vertex order; it fixes the coordinate order of every vector and matrix
/// produced by the analysis layers.
#[derive(Debug, Clone)]
pub struct Network {
    pub name: String,
    vertices: Vec<Processor>,
    letters: Vec<Letter>,
    letter_lookup: HashMap<String, LetterId>,
    vertex_lookup: HashMap<String, VertexId>,
    default_state: Vec<u32>,
}

impl Network {
    pub fn new(
        name: impl Into<String>,
        defs: Vec<ProcessorDef>,
        initial_state: Option<&HashMap<String, String>>,
    ) -> Result<Network> {
        let mut letters = Vec::new();
        let mut letter_lookup = HashMap::new();
        let mut vertex_lookup = HashMap::new();
        for (v, def) in defs.iter().enumerate() {
            if vertex_lookup.insert(def.id.clone(), v).is_some() {
                return Err(Error::MalformedNetwork(format!(
                    "duplicate vertex id `{}`",
                    def.id
                )));
            }
            if def.states.is_empty() {
                return Err(Error::MalformedNetwork(format!(
                    "vertex `{}` has no states",
                    def.id
                )));
            }
            let mut seen = HashMap::new();
            for (qi, s) in def.states.iter().enumerate() {
                if seen.insert(s.clone(), qi).is_some() {
                    return Err(Error::MalformedNetwork(format!(
                        "duplicate state label `{s}` at vertex `{}`",
                        def.id
                    )));
                }
            }
            for (li, a) in def.alphabet.iter().enumerate() {
                let id = letters.len();
                if letter_lookup.insert(a.clone(), id).is_some() {
                    return Err(Error::MalformedNetwork(format!(
                        "duplicate letter id `{a}`"
                    )));
                }
                letters.push(Letter {
                    name: a.clone(),
                    owner: v,
                    local_index: li,
                });
            }
        }

        let mut vertices = Vec::with_capacity(defs.len());
        let mut offset = 0;
        for def in defs {
            let nq = def.states.len();
            let na = def.alphabet.len();
            if def.transition.len() != na || def.emit.len() != na {
                return Err(Error::MalformedNetwork(format!(
                    "vertex `{}`: transition/emit tables must have one row per letter",
                    def.id
                )));
            }
            let mut transition = Vec::with_capacity(na);
            let mut emit = Vec::with_capacity(na);
            for (li, (trow, erow)) in def.transition.iter().zip(&def.emit).enumerate() {
                if trow.len() != nq || erow.len() != nq {
                    return Err(Error::MalformedNetwork(format!(
                        "vertex `{}`, letter `{}`: tables must cover all {} states",
                        def.id, def.alphabet[li], nq
                    )));
                }
                if let Some(&bad) = trow.iter().find(|&&t| t as usize >= nq) {
                    return Err(Error::MalformedNetwork(format!(
                        "vertex `{}`: transition target {bad} out of range",
                        def.id
                    )));
                }
                let mut eresolved = Vec::with_capacity(nq);
                for per_state in erow {
                    let mut counts: Vec<(LetterId, u64)> = Vec::new();
                    for (target, count) in per_state {
                        let id = *letter_lookup
                            .get(target)
                            .ok_or_else(|| Error::UnknownLetter(target.clone()))?;
                        match counts.iter_mut().find(|(l, _)| *l == id) {
                            Some((_, c)) => *c += count,
                            None => counts.push((id, *count)),
                        }
                    }
                    counts.retain(|&(_, c)| c > 0);
                    counts.sort_by_key(|&(l, _)| l);
                    eresolved.push(counts);
                }
                transition.push(trow.clone());
                emit.push(eresolved);
            }
            vertices.push(Processor {
                id: def.id,
                alphabet: def.alphabet,
                states: def.states,
                offset,
                transition,
                emit,
            });
            offset += vertices.last().unwrap().alphabet.len();
        }

        let mut default_state = vec![0u32; vertices.len()];
        if let Some(init) = initial_state {
            for (vname, sname) in init {
                let &v = vertex_lookup
                    .get(vname)
                    .ok_or_else(|| Error::UnknownVertex(vname.clone()))?;
                let q = vertices[v]
                    .states
                    .iter()
                    .position(|s| s == sname)
                    .ok_or_else(|| Error::UnknownState {
                        vertex: vname.clone(),
                        state: sname.clone(),
                    })?;
                default_state[v] = q as u32;
            }
        }

        Ok(Network {
            name: name.into(),
            vertices,
            letters,
            letter_lookup,
            vertex_lookup,
            default_state,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Processor] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Processor {
        &self.vertices[v]
    }

    pub fn alphabet_len(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, a: LetterId) -> &Letter {
        &self.letters[a]
    }

    pub fn letter_id(&self, name: &str) -> Result<LetterId> {
        self.letter_lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertex_lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn default_state(&self) -> &[u32] {
        &self.default_state
    }

    pub fn default_config(&self) -> Config {
        Config {
            letters: LetterVec::zeros(self.alphabet_len()),
            state: self.default_state.clone(),
        }
    }

    /// Build a state tuple from `vertex name -> state label` entries,
    /// starting from the default state.
    pub fn state_from_labels(&self, labels: &HashMap<String, String>) -> Result<Vec<u32>> {
        let mut state = self.default_state.clone();
        for (vname, sname) in labels {
            let v = self.vertex_id(vname)?;
            let q = self.vertices[v]
                .states
                .iter()
                .position(|s| s == sname)
                .ok_or_else(|| Error::UnknownState {
                    vertex: vname.clone(),
                    state: sname.clone(),
                })?;
            state[v] = q as u32;
        }
        Ok(state)
    }

    pub fn state_labels(&self, state: &[u32]) -> Vec<(String, String)> {
        self.vertices
            .iter()
            .zip(state)
            .map(|(p, &q)| (p.id.clone(), p.states[q as usize].clone()))
            .collect()
    }

    /// Restrict every vertex to a subset of its states. `kept[v]` lists the
    /// retained original state indices in increasing order; transitions must
    /// stay inside the kept sets. `default` gives the original state indices
    /// used as the restricted network's default state.
    pub fn restrict_vertex_states(&self, kept: &[Vec<usize>], default: &[u32]) -> Result<Network> {
        if kept.len() != self.vertices.len() || default.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vertices.len(),
                got: kept.len().min(default.len()),
            });
        }
        let mut defs = Vec::new();
        let mut new_default = HashMap::new();
        for (v, proc_) in self.vertices.iter().enumerate() {
            let keep = &kept[v];
            let mut remap = HashMap::new();
            for (new_q, &old_q) in keep.iter().enumerate() {
                remap.insert(old_q, new_q as u32);
            }
            let mut transition = Vec::new();
            let mut emit = Vec::new();
            for local in 0..proc_.alphabet.len() {
                let mut trow = Vec::with_capacity(keep.len());
                let mut erow = Vec::with_capacity(keep.len());
                for &old_q in keep {
                    let target = proc_.transition[local][old_q] as usize;
                    let new_target = *remap.get(&target).ok_or_else(|| {
                        Error::MalformedNetwork(format!(
                            "state restriction at vertex `{}` is not closed under transitions",
                            proc_.id
                        ))
                    })?;
                    trow.push(new_target);
                    erow.push(
                        proc_.emit[local][old_q]
                            .iter()
                            .map(|&(l, c)| (self.letters[l].name.clone(), c))
                            .collect(),
                    );
                }
                transition.push(trow);
                emit.push(erow);
            }
            let d = *remap.get(&(default[v] as usize)).ok_or_else(|| {
                Error::MalformedNetwork(format!(
                    "default state at vertex `{}` is outside the kept set",
                    proc_.id
                ))
            })?;
            new_default.insert(proc_.id.clone(), proc_.states[keep[d as usize]].clone());
            defs.push(ProcessorDef {
                id: proc_.id.clone(),
                alphabet: proc_.alphabet.clone(),
                states: keep.iter().map(|&q| proc_.states[q].clone()).collect(),
                transition,
                emit,
            });
        }
        Network::new(self.name.clone(), defs, Some(&new_default))
    }

    /// Restrict the alphabet to a subset of global letters, dropping the
    /// removed letters' transition rows and all emissions of removed
    /// letters. Returns the restricted network and the kept letters in
    /// original global order (new id -> old id).
    pub fn restrict_alphabet(&self, keep: &[LetterId]) -> Result<(Network, Vec<LetterId>)> {
        let mut mask = vec![false; self.letters.len()];
        for &a in keep {
            if a >= self.letters.len() {
                return Err(Error::UnknownLetter(a.to_string()));
            }
            mask[a] = true;
        }
        let kept: Vec<LetterId> = (0..self.letters.len()).filter(|&a| mask[a]).collect();
        let mut defs = Vec::new();
        for proc_ in &self.vertices {
            let mut alphabet = Vec::new();
            let mut transition = Vec::new();
            let mut emit = Vec::new();
            for (local, name) in proc_.alphabet.iter().enumerate() {
                let global = proc_.offset + local;
                if !mask[global] {
                    continue;
                }
                alphabet.push(name.clone());
                transition.push(proc_.transition[local].clone());
                emit.push(
                    proc_.emit[local]
                        .iter()
                        .map(|per_state| {
                            per_state
                                .iter()
                                .filter(|&&(l, _)| mask[l])
                                .map(|&(l, c)| (self.letters[l].name.clone(), c))
                                .collect()
                        })
                        .collect(),
                );
            }
            defs.push(ProcessorDef {
                id: proc_.id.clone(),
                alphabet,
                states: proc_.states.clone(),
                transition,
                emit,
            });
        }
        let default: HashMap<String, String> = self
            .vertices
            .iter()
            .zip(&self.default_state)
            .map(|(p, &q)| (p.id.clone(), p.states[q as usize].clone()))
            .collect();
        let net = Network::new(self.name.clone(), defs, Some(&default))?;
        Ok((net, kept))
    }

    /// Render a letter vector as `{name: count, ...}` in alphabet order.
    pub fn format_letters(&self, x: &LetterVec) -> String {
        let mut out = String::from("{");
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("{}: {}", l.name, x.0[i]));
        }
        out.push('}');
        out
    }
}

/// An integer count per letter of the global alphabet. Counts may be
/// negative; counts are arbitrary precision since directed toppling can
/// need exponentially many processings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LetterVec(pub Vec<BigInt>);

impl LetterVec {
    pub fn zeros(n: usize) -> LetterVec {
        LetterVec(vec![BigInt::zero(); n])
    }

    pub fn from_u64s(counts: &[u64]) -> LetterVec {
        LetterVec(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, a: LetterId) -> &BigInt {
        &self.0[a]
    }

    pub fn set(&mut self, a: LetterId, v: BigInt) {
        self.0[a] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &LetterVec) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn add_assign(&mut self, other: &LetterVec) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &LetterVec) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a -= b;
        }
    }

    pub fn sum(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl fmt::Display for LetterVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A full system configuration: waiting letter counts plus the internal
/// state of every processor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    pub letters: LetterVec,
    pub state: Vec<u32>,
}

impl Config {
    pub fn new(letters: LetterVec, state: Vec<u32>) -> Config {
        Config { letters, state }
    }
}

/// The result of a completed (or truncated) run: how many letters of each
/// type were processed and where the system ended up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecRecord {
    pub odometer: LetterVec,
    pub final_config: Config,
    pub trace: Option<Vec<LetterId>>,
}

/// Outcome of [`run_to_completion`]: either the run halted, or the step
/// budget ran out first (inconclusive; use the analysis layer instead).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Halted(ExecRecord),
    OutOfBudget(ExecRecord),
}

impl RunOutcome {
    pub fn halted(&self) -> Option<&ExecRecord> {
        match self {
            RunOutcome::Halted(r) => Some(r),
            RunOutcome::OutOfBudget(_) => None,
        }
    }

    pub fn record(&self) -> &ExecRecord {
        match self {
            RunOutcome::Halted(r) | RunOutcome::OutOfBudget(r) => r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    TransitionCommutation,
    EmitCommutation,
}

/// A witness that two letters at one vertex fail to commute in some state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub vertex: String,
    pub a: String,
    pub b: String,
    pub state: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::TransitionCommutation => "transitions",
            ViolationKind::EmitCommutation => "emissions",
        };
        write!(
            f,
            "vertex `{}`: {what} of `{}` and `{}` do not commute at state `{}`",
            self.vertex, self.a, self.b, self.state
        )
    }
}

/// Check the commutativity axioms at every vertex: for each pair of local
/// letters `a, b` and each state `q`, transitions must satisfy
/// `t_a(t_b(q)) = t_b(t_a(q))` and emissions must satisfy
/// `N(a,q) + N(b, t_a q) = N(b,q) + N(a, t_b q)`.
///
/// Violations are data, not errors: an empty list means the network is
/// abelian.
pub fn validate_abelian(net: &Network) -> Vec<Violation> {
    let mut violations = Vec::new();
    let na_global = net.alphabet_len();
    let mut lhs = vec![0i128; na_global];
    let mut rhs = vec![0i128; na_global];
    for proc_ in net.vertices() {
        let na = proc_.alphabet.len();
        let nq = proc_.states.len();
        for a in 0..na {
            for b in a + 1..na {
                for q in 0..nq as u32 {
                    let taq = proc_.next_state(a, q);
                    let tbq = proc_.next_state(b, q);
                    if proc_.next_state(b, taq) != proc_.next_state(a, tbq) {
                        violations.push(Violation {
                            vertex: proc_.id.clone(),
                            a: proc_.alphabet[a].clone(),
                            b: proc_.alphabet[b].clone(),
                            state: proc_.states[q as usize].clone(),
                            kind: ViolationKind::TransitionCommutation,
                        });
                    }
                    lhs.iter_mut().for_each(|c| *c = 0);
                    rhs.iter_mut().for_each(|c| *c = 0);
                    for &(l, c) in proc_.emissions(a, q) {
                        lhs[l] += c as i128;
                    }
                    for &(l, c) in proc_.emissions(b, taq) {
                        lhs[l] += c as i128;
                    }
                    for &(l, c) in proc_.emissions(b, q) {
                        rhs[l] += c as i128;
                    }
                    for &(l, c) in proc_.emissions(a, tbq) {
                        rhs[l] += c as i128;
                    }
                    if lhs != rhs {
                        violations.push(Violation {
                            vertex: proc_.id.clone(),
                            a: proc_.alphabet[a].clone(),
                            b: proc_.alphabet[b].clone(),
                            state: proc_.states[q as usize].clone(),
                            kind: ViolationKind::EmitCommutation,
                        });
                    }
                }
            }
        }
    }
    violations
}

fn check_letter(net: &Network, a: LetterId) -> Result<()> {
    if a >= net.alphabet_len() {
        return Err(Error::UnknownLetter(format!("#{a}")));
    }
    Ok(())
}

pub(crate) fn step_in_place(net: &Network, cfg: &mut Config, a: LetterId) {
    let letter = &net.letters[a];
    let proc_ = &net.vertices[letter.owner];
    let q = cfg.state[letter.owner];
    cfg.letters.0[a] -= 1;
    for &(l, c) in proc_.emissions(letter.local_index, q) {
        cfg.letters.0[l] += c;
    }
    cfg.state[letter.owner] = proc_.next_state(letter.local_index, q);
}

/// Process a single letter: decrement its count, emit the messages read at
/// the current state, then advance the owner's state. Legality (the count
/// being positive beforehand) is the caller's concern; counts may go
/// negative.
pub fn step(net: &Network, cfg: &Config, a: LetterId) -> Result<Config> {
    check_letter(net, a)?;
    let mut next = cfg.clone();
    step_in_place(net, &mut next, a);
    Ok(next)
}

/// Execute a word of letters left to right. The returned flag is true iff
/// the word was legal: every letter had a positive count when processed.
pub fn execute_word(net: &Network, cfg: &Config, word: &[LetterId]) -> Result<(Config, bool)> {
    let mut current = cfg.clone();
    let mut legal = true;
    for &a in word {
        check_letter(net, a)?;
        if current.letters.0[a] < BigInt::from(1) {
            legal = false;
        }
        step_in_place(net, &mut current, a);
    }
    Ok((current, legal))
}

/// Process letter `a` exactly `k` times, accelerating through state cycles
/// of the owning vertex so the cost is bounded by the vertex's state count
/// rather than by `k`.
pub(crate) fn process_letter_times(net: &Network, cfg: &mut Config, a: LetterId, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let letter = &net.letters[a];
    let proc_ = &net.vertices[letter.owner];
    let local = letter.local_index;
    cfg.letters.0[a] -= k;

    let mut emitted = vec![BigInt::zero(); net.alphabet_len()];
    let mut seen: HashMap<u32, usize> = HashMap::new();
    let mut path: Vec<u32> = Vec::new();
    let mut s = cfg.state[letter.owner];
    let mut walked: u64 = 0;
    let k_small = k.to_u64();

    loop {
        if k_small == Some(walked) {
            break;
        }
        if let Some(&pos) = seen.get(&s) {
            // Entered a cycle of period `p`; jump over the remaining steps.
            let p = path.len() - pos;
            let remaining = k - BigInt::from(walked);
            let full = &remaining / BigInt::from(p as u64);
            let rem = (&remaining % BigInt::from(p as u64)).to_usize().unwrap();
            if !full.is_zero() {
                let mut cycle_sum = vec![BigInt::zero(); net.alphabet_len()];
                for &state in &path[pos..] {
                    for &(l, c) in proc_.emissions(local, state) {
                        cycle_sum[l] += c;
                    }
                }
                for (e, c) in emitted.iter_mut().zip(cycle_sum) {
                    *e += c * &full;
                }
            }
            for &state in &path[pos..pos + rem] {
                for &(l, c) in proc_.emissions(local, state) {
                    emitted[l] += c;
                }
            }
            s = path[pos + rem];
            break;
        }
        seen.insert(s, path.len());
        path.push(s);
        for &(l, c) in proc_.emissions(local, s) {
            emitted[l] += c;
        }
        s = proc_.next_state(local, s);
        walked += 1;
    }

    cfg.state[letter.owner] = s;
    for (dst, e) in cfg.letters.0.iter_mut().zip(emitted) {
        *dst += e;
    }
}

/// Execute `y_a` processings of each letter `a` (in any order; the result
/// is order-independent on a valid abelian network). Counts are not
/// required to be available: this is the raw operator, not a legal run.
pub fn execute_counts(net: &Network, cfg: &Config, y: &LetterVec) -> Result<Config> {
    if y.len() != net.alphabet_len() {
        return Err(Error::DimensionMismatch {
            expected: net.alphabet_len(),
            got: y.len(),
        });
    }
    if !y.is_nonneg() {
        return Err(Error::NegativeCount(y.to_string()));
    }
    let mut current = cfg.clone();
    for a in 0..y.len() {
        process_letter_times(net, &mut current, a, &y.0[a]);
    }
    Ok(current)
}

/// The local action: add `x_a` letters of each type `a` on top of `cfg0`
/// and process each added letter exactly once.
pub fn local_action(net: &Network, x: &LetterVec, cfg0: &Config) -> Result<Config> {
    if !x.is_nonneg() {
        return Err(Error::NegativeCount(x.to_string()));
    }
    let mut start = cfg0.clone();
    start.letters.add_assign(x);
    execute_counts(net, &start, x)
}

/// Scheduling policies for [`run_to_completion`]. Any complete legal
/// execution yields the same odometer and final configuration; providing
/// two genuinely different policies makes that property testable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheduler {
    /// Sweep the global alphabet in order, processing one waiting letter
    /// per visit.
    #[default]
    RoundRobin,
    /// First-in-first-out queue of letter batches: initial letters are
    /// enqueued in alphabet order and emissions are appended as produced.
    Fifo,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub max_steps: u64,
    pub scheduler: Scheduler,
    pub record_trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_steps: 1_000_000,
            scheduler: Scheduler::RoundRobin,
            record_trace: false,
        }
    }
}

/// Run the network until no positive letter counts remain or the step
/// budget is exhausted. Requires a nonnegative starting letter vector.
pub fn run_to_completion(net: &Network, cfg: &Config, max_steps: u64) -> Result<RunOutcome> {
    run_with(
        net,
        cfg,
        &RunOptions {
            max_steps,
            ..RunOptions::default()
        },
    )
}

pub fn run_with(net: &Network, cfg: &Config, options: &RunOptions) -> Result<RunOutcome> {
    if !cfg.letters.is_nonneg() {
        return Err(Error::NegativeCount(cfg.letters.to_string()));
    }
    match options.scheduler {
        Scheduler::RoundRobin => run_round_robin(net, cfg, options),
        Scheduler::Fifo => run_fifo(net, cfg, options),
    }
}

fn run_round_robin(net: &Network, cfg: &Config, options: &RunOptions) -> Result<RunOutcome> {
    let mut current = cfg.clone();
    let mut odometer = LetterVec::zeros(net.alphabet_len());
    let mut trace = options.record_trace.then(Vec::new);
    let mut steps: u64 = 0;
    let one = BigInt::from(1);
    loop {
        let mut progressed = false;
        for a in 0..net.alphabet_len() {
            if current.letters.0[a] >= one {
                if steps == options.max_steps {
                    return Ok(RunOutcome::OutOfBudget(ExecRecord {
                        odometer,
                        final_config: current,
                        trace,
                    }));
                }
                step_in_place(net, &mut current, a);
                odometer.0[a] += 1;
                steps += 1;
                progressed = true;
                if let Some(t) = trace.as_mut() {
                    t.push(a);
                }
            }
        }
        if !progressed {
            return Ok(RunOutcome::Halted(ExecRecord {
                odometer,
                final_config: current,
                trace,
            }));
        }
    }
}

fn run_fifo(net: &Network, cfg: &Config, options: &RunOptions) -> Result<RunOutcome> {
    let mut current = cfg.clone();
    let mut odometer = LetterVec::zeros(net.alphabet_len());
    let mut trace = options.record_trace.then(Vec::new);
    let mut queue: VecDeque<(LetterId, BigInt)> = VecDeque::new();
    for a in 0..net.alphabet_len() {
        if current.letters.0[a] > BigInt::zero() {
            queue.push_back((a, current.letters.0[a].clone()));
        }
    }
    let mut steps = BigInt::zero();
    let budget = BigInt::from(options.max_steps);
    while let Some((a, count)) = queue.pop_front() {
        let available = &budget - &steps;
        let (batch, truncated) = if count > available {
            (available, true)
        } else {
            (count, false)
        };
        if !batch.is_zero() {
            let before = current.letters.clone();
            process_letter_times(net, &mut current, a, &batch);
            odometer.0[a] += &batch;
            steps += &batch;
            if let Some(t) = trace.as_mut() {
                let reps = batch.to_usize().unwrap_or(usize::MAX);
                t.extend(std::iter::repeat_n(a, reps));
            }
            // Emissions of the batch, in alphabet order.
            for b in 0..net.alphabet_len() {
                let mut delta = &current.letters.0[b] - &before.0[b];
                if b == a {
                    delta += &batch;
                }
                if delta > BigInt::zero() {
                    queue.push_back((b, delta));
                }
            }
        }
        if truncated {
            return Ok(RunOutcome::OutOfBudget(ExecRecord {
                odometer,
                final_config: current,
                trace,
            }));
        }
    }
    Ok(RunOutcome::Halted(ExecRecord {
        odometer,
        final_config: current,
        trace,
    }))
}
