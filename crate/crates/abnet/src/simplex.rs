//! Exact rational linear feasibility via phase-1 simplex.
//!
//! Small dense problems only. Bland's rule is used throughout, so the
//! heavily degenerate systems produced by the amplifier search terminate.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sense of one constraint row `a . y (sense) b` over variables `y >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Ge,
}

/// Find `y >= 0` satisfying every row, or `None` if the system is
/// infeasible.
pub fn feasible_point(
    num_vars: usize,
    rows: &[(Vec<BigRational>, Sense, BigRational)],
) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let surplus: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.1 == Sense::Ge)
        .map(|(i, _)| i)
        .collect();
    let n = num_vars + surplus.len();
    let total = n + m; // artificials at the end

    // Canonical tableau with artificial basis.
    let mut t = vec![vec![BigRational::zero(); total]; m];
    let mut rhs = vec![BigRational::zero(); m];
    for (i, (coeffs, sense, b)) in rows.iter().enumerate() {
        assert_eq!(coeffs.len(), num_vars, "constraint width mismatch");
        for (j, c) in coeffs.iter().enumerate() {
            t[i][j] = c.clone();
        }
        if *sense == Sense::Ge {
            let s = num_vars + surplus.iter().position(|&r| r == i).unwrap();
            t[i][s] = -BigRational::one();
        }
        rhs[i] = b.clone();
        if rhs[i].is_negative() {
            for v in t[i].iter_mut() {
                *v = -std::mem::take(v);
            }
            rhs[i] = -std::mem::take(&mut rhs[i]);
        }
        t[i][n + i] = BigRational::one();
    }
    let mut basis: Vec<usize> = (n..total).collect();

    // Phase-1 cost: minimize the sum of artificial variables.
    let cost = |j: usize| -> BigRational {
        if j >= n {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    };

    loop {
        // Reduced costs relative to the current basis.
        let mut entering = None;
        for j in 0..total {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost(j);
            for i in 0..m {
                r -= cost(basis[i]) * &t[i][j];
            }
            if r.is_negative() {
                entering = Some(j);
                break; // Bland: smallest improving index
            }
        }
        let Some(enter) = entering else {
            break;
        };

        // Ratio test; ties broken by smallest basic variable index.
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &rhs[i] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-1 objective is bounded; a pivot row must exist");

        // Pivot.
        let pivot = t[leave][enter].clone();
        for v in t[leave].iter_mut() {
            *v /= &pivot;
        }
        rhs[leave] /= &pivot;
        for i in 0..m {
            if i == leave || t[i][enter].is_zero() {
                continue;
            }
            let factor = t[i][enter].clone();
            for j in 0..total {
                let delta = &factor * &t[leave][j];
                t[i][j] -= delta;
            }
            let delta = &factor * &rhs[leave];
            rhs[i] -= delta;
        }
        basis[leave] = enter;
    }

    let objective: BigRational = (0..m).map(|i| cost(basis[i]) * &rhs[i]).sum();
    if !objective.is_zero() {
        return None;
    }
    let mut y = vec![BigRational::zero(); num_vars];
    for (i, &b) in basis.iter().enumerate() {
        if b < num_vars {
            y[b] = rhs[i].clone();
        }
    }
    Some(y)
}
