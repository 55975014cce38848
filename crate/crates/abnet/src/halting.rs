//! Halting decision procedures: the toppling-matrix test on the Laplacian
//! decides halting on all inputs; a strong amplifier certifies the
//! negative case; Dickson domination pairs and amplifier thresholds decide
//! individual inputs during simulation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{production_matrix, LocalMonoids, ProductionData};
use crate::error::{Error, Result};
use crate::linalg::{inverse, leading_principal_minors, RatMatrix};
use crate::model::{local_action, Config, LetterVec, Network};
use crate::monoid::{monoid_budget, DicksonTracker};
use crate::pf::{pf_estimate, PfReport};
use crate::simplex::{feasible_point, Sense};

/// Evidence attached to a toppling-matrix verdict: the leading principal
/// minors, whether the exact inverse is entrywise nonnegative, and (for a
/// positive verdict) a strictly positive vector with strictly positive
/// image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToppleCheck {
    pub verdict: bool,
    pub minors: Vec<BigRational>,
    pub inverse_nonnegative: bool,
    pub witness: Option<Vec<BigRational>>,
}

/// Decide whether a matrix with nonpositive off-diagonal entries satisfies
/// the equivalent toppling-matrix conditions. The exact nonnegative-inverse
/// test is the primary decider; positivity of the leading principal minors
/// is cross-checked, and a positive verdict carries the witness
/// `x = L^{-1} . 1` (so that `L x = 1 > 0`). Disagreement between the
/// routes aborts.
pub fn is_toppling_matrix(l: &RatMatrix) -> Result<ToppleCheck> {
    if !l.is_square() {
        return Err(Error::NotSquare {
            rows: l.rows(),
            cols: l.cols(),
        });
    }
    let n = l.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && l.get(i, j).is_positive() {
                return Err(Error::PositiveOffDiagonal { row: i, col: j });
            }
        }
    }
    let minors = leading_principal_minors(l)?;
    let minors_positive = minors.iter().all(Signed::is_positive);

    let (inverse_nonnegative, witness_route, witness) = match inverse(l) {
        Err(Error::SingularMatrix) => (false, false, None),
        Err(e) => return Err(e),
        Ok(inv) => {
            let nonneg = inv.is_nonnegative();
            let ones = vec![BigRational::one(); n];
            let x = inv.mul_vec(&ones)?;
            let x_positive = x.iter().all(Signed::is_positive);
            let lx = l.mul_vec(&x)?;
            let lx_positive = lx.iter().all(Signed::is_positive);
            (nonneg, x_positive && lx_positive, Some(x))
        }
    };
    if minors_positive != inverse_nonnegative || minors_positive != witness_route {
        return Err(Error::InternalInconsistency(format!(
            "toppling conditions disagree: minors {minors_positive}, inverse {inverse_nonnegative}, witness {witness_route}"
        )));
    }
    Ok(ToppleCheck {
        verdict: inverse_nonnegative,
        minors,
        inverse_nonnegative,
        witness: if inverse_nonnegative { witness } else { None },
    })
}

/// A candidate input/state pair for the non-halting certificate: the
/// local action at `x.state` returns to `state` with output at least `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Amplifier {
    pub x: LetterVec,
    pub state: Vec<u32>,
    pub strong: bool,
    pub output: Option<LetterVec>,
}

/// Run the local action of `amp.x` at `amp.state` and record whether the
/// state returns exactly and the output dominates `x`.
pub fn verify_strong_amplifier(net: &Network, amp: &mut Amplifier) -> Result<bool> {
    if !amp.x.is_nonneg() || amp.x.is_zero() {
        return Err(Error::InvalidCertificate(
            "amplifier input must be nonnegative and nonzero".into(),
        ));
    }
    let start = Config::new(LetterVec::zeros(net.alphabet_len()), amp.state.clone());
    let result = local_action(net, &amp.x, &start)?;
    let ok = result.state == amp.state && result.letters.dominates(&amp.x);
    amp.strong = ok;
    amp.output = Some(result.letters);
    Ok(ok)
}

/// Search for a strong amplifier when the toppling test failed: find a
/// rational `y >= 0, y != 0` with `P y >= y` by exact feasibility, scale it
/// into the kernel lattice, and verify the result by execution.
pub fn find_amplifier(net: &Network, production: &ProductionData) -> Result<Amplifier> {
    let n = net.alphabet_len();
    let mut rows = Vec::with_capacity(n + 1);
    rows.push((
        vec![BigRational::one(); n],
        Sense::Eq,
        BigRational::one(),
    ));
    for i in 0..n {
        let mut coeffs: Vec<BigRational> = production.matrix.row(i).to_vec();
        coeffs[i] -= BigRational::one();
        rows.push((coeffs, Sense::Ge, BigRational::zero()));
    }
    let y = feasible_point(n, &rows).ok_or_else(|| {
        Error::InternalInconsistency(
            "no amplifier direction found although the toppling test failed".into(),
        )
    })?;

    let denom_lcm = y
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let z: Vec<BigInt> = y.iter().map(|v| v.numer() * (&denom_lcm / v.denom())).collect();
    let scale = production.kernel.smallest_multiple_in_kernel(net, &z);
    let x = LetterVec(z.iter().map(|v| v * &scale).collect());

    let mut amp = Amplifier {
        x,
        state: production.base_state.clone(),
        strong: false,
        output: None,
    };
    if !verify_strong_amplifier(net, &mut amp)? {
        return Err(Error::InternalInconsistency(
            "amplifier candidate failed execution verification".into(),
        ));
    }
    Ok(amp)
}

/// Why a network does or does not halt on all inputs.
#[derive(Debug, Clone)]
pub enum HaltEvidence {
    /// The Laplacian is a toppling matrix.
    Toppling(ToppleCheck),
    /// A verified strong amplifier.
    Amplifier(Amplifier),
}

/// Global verdict for one initial state (constant on its local component).
#[derive(Debug, Clone)]
pub struct HaltVerdict {
    pub halts_all: bool,
    pub evidence: HaltEvidence,
    /// Floating spectral-radius bracket; informational only.
    pub pf: PfReport,
    pub production: ProductionData,
}

/// Decide whether the network halts on all inputs to initial state `q`:
/// compute the production matrix and Laplacian of the local component of
/// `q` and test the Laplacian. A negative verdict always carries a
/// verified strong amplifier.
pub fn halts_on_all_inputs(net: &Network, q: &[u32]) -> Result<HaltVerdict> {
    let production = production_matrix(net, q)?;
    let check = is_toppling_matrix(&production.laplacian)?;
    let pf = pf_estimate(&production.matrix)?;
    if check.verdict {
        Ok(HaltVerdict {
            halts_all: true,
            evidence: HaltEvidence::Toppling(check),
            pf,
            production,
        })
    } else {
        let amp = find_amplifier(net, &production)?;
        Ok(HaltVerdict {
            halts_all: false,
            evidence: HaltEvidence::Amplifier(amp),
            pf,
            production,
        })
    }
}

/// Options for the per-input halting loop.
#[derive(Debug, Clone, Default)]
pub struct HaltOptions {
    pub max_rounds: Option<usize>,
    /// A verified strong amplifier for the input's local component. Only
    /// applied when the initial state is locally recurrent.
    pub amplifier: Option<Amplifier>,
}

pub const DEFAULT_MAX_ROUNDS: usize = 10_000;

/// What a non-halting certificate consisted of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonHaltCertificate {
    /// Rounds `earlier < later` reached the same state with the later
    /// letter vector dominating the earlier (and nonzero).
    DicksonPair { earlier: usize, later: usize },
    /// The cumulative odometer passed the amplifier's input vector while
    /// the initial state was locally recurrent.
    AmplifierThreshold,
}

/// Verdict for a single input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputVerdict {
    Halts {
        odometer: LetterVec,
        final_config: Config,
        rounds: usize,
    },
    NeverHalts {
        certificate: NonHaltCertificate,
        rounds: usize,
    },
    Inconclusive {
        rounds: usize,
    },
}

/// Decide halting for one input by iterating the full-pass map
/// `x_n.q_n = x_{n-1} (local action) q_{n-1}` and watching for: an empty
/// letter vector (halted), a same-state domination pair (never halts), or
/// the cumulative odometer crossing a supplied strong amplifier (never
/// halts). Gives up after `max_rounds`.
pub fn halt_on_input(net: &Network, cfg: &Config, options: &HaltOptions) -> Result<InputVerdict> {
    if !cfg.letters.is_nonneg() {
        return Err(Error::NegativeCount(cfg.letters.to_string()));
    }
    let max_rounds = options.max_rounds.unwrap_or(DEFAULT_MAX_ROUNDS);

    // The amplifier threshold argument needs a locally recurrent start in
    // the amplifier's component.
    let amplifier = match &options.amplifier {
        Some(amp) if amp.strong => {
            let monoids = LocalMonoids::compute(net, monoid_budget())?;
            let applicable = monoids.is_locally_recurrent(&cfg.state)
                && monoids.same_local_component(&cfg.state, &amp.state);
            applicable.then_some(amp)
        }
        _ => None,
    };

    let mut x = cfg.letters.clone();
    let mut state = cfg.state.clone();
    let mut odometer = LetterVec::zeros(net.alphabet_len());
    let mut history: HashMap<Vec<u32>, DicksonTracker> = HashMap::new();
    let mut rounds = 0usize;
    loop {
        if x.is_zero() {
            return Ok(InputVerdict::Halts {
                odometer,
                final_config: Config::new(x, state),
                rounds,
            });
        }
        let tracker = history.entry(state.clone()).or_default();
        if let Some(earlier) = tracker.push(rounds, x.0.clone()) {
            return Ok(InputVerdict::NeverHalts {
                certificate: NonHaltCertificate::DicksonPair {
                    earlier,
                    later: rounds,
                },
                rounds,
            });
        }
        if let Some(amp) = amplifier {
            if odometer.dominates(&amp.x) {
                return Ok(InputVerdict::NeverHalts {
                    certificate: NonHaltCertificate::AmplifierThreshold,
                    rounds,
                });
            }
        }
        if rounds == max_rounds {
            return Ok(InputVerdict::Inconclusive { rounds });
        }
        let start = Config::new(LetterVec::zeros(net.alphabet_len()), state);
        let next = local_action(net, &x, &start)?;
        odometer.add_assign(&x);
        x = next.letters;
        state = next.state;
        rounds += 1;
    }
}

/// Classic non-halting certificate for unary networks: given `y >= 0`
/// nonzero with `L y <= 0`, a legal execution in which every vertex
/// topples at least `y_v` times proves the run never halts. With `y` the
/// all-ones vector this is the familiar criterion for sandpiles on
/// undirected or Eulerian graphs.
pub fn classic_criteria(net: &Network, y: &[BigInt], topple_counts: &[BigInt]) -> Result<bool> {
    if !crate::builders::is_unary(net) {
        return Err(Error::NotUnary);
    }
    let n = net.alphabet_len();
    if y.len() != n || topple_counts.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len().min(topple_counts.len()),
        });
    }
    if y.iter().any(Signed::is_negative) || y.iter().all(Zero::is_zero) {
        return Err(Error::InvalidCertificate(
            "certificate vector must be nonnegative and nonzero".into(),
        ));
    }
    let production = production_matrix(net, net.default_state())?;
    let y_rat: Vec<BigRational> = y
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    let ly = production.laplacian.mul_vec(&y_rat)?;
    if ly.iter().any(Signed::is_positive) {
        return Err(Error::InvalidCertificate(
            "Laplacian image of the certificate vector must be nonpositive".into(),
        ));
    }
    Ok(topple_counts.iter().zip(y).all(|(t, want)| t >= want))
}
