//! Floating-point spectral radius estimation for nonnegative matrices.
//!
//! Power iteration with a Collatz-Wielandt bracket evaluated on the average
//! of two consecutive iterates, which closes the bracket even for
//! imprimitive matrices whose plain iterates oscillate. This is reporting
//! machinery only: halting verdicts are always decided by exact arithmetic.

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

pub const PF_TOLERANCE: f64 = 1e-9;
pub const PF_MAX_ITERATIONS: usize = 100_000;

/// Result of the power iteration: a bracket `[lower, upper]` that contains
/// the spectral radius, the iterate it was evaluated at, and whether the
/// bracket closed below the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct PfReport {
    pub lambda: f64,
    pub lower: f64,
    pub upper: f64,
    pub vector: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Estimate the spectral radius of a nonnegative square matrix.
/// Non-convergence is reported, never raised.
pub fn pf_estimate(p: &RatMatrix) -> Result<PfReport> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    if !p.is_nonnegative() {
        return Err(Error::InvalidSpec(
            "spectral radius estimation requires a nonnegative matrix".into(),
        ));
    }
    let n = p.rows();
    if n == 0 {
        return Ok(PfReport {
            lambda: 0.0,
            lower: 0.0,
            upper: 0.0,
            vector: vec![],
            converged: true,
            iterations: 0,
        });
    }
    let m = p.to_f64();
    let mut v = vec![1.0 / n as f64; n];
    let mut report = PfReport {
        lambda: f64::NAN,
        lower: 0.0,
        upper: f64::INFINITY,
        vector: v.clone(),
        converged: false,
        iterations: 0,
    };
    for it in 1..=PF_MAX_ITERATIONS {
        let w = mat_vec(&m, &v);
        let w2 = mat_vec(&m, &w);
        let avg: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        let image: Vec<f64> = w.iter().zip(&w2).map(|(a, b)| a + b).collect();

        let mut lower = f64::INFINITY;
        let mut upper = 0.0f64;
        for (a, u) in avg.iter().zip(&image) {
            if *a > 0.0 {
                let ratio = u / a;
                lower = lower.min(ratio);
                upper = upper.max(ratio);
            } else if *u > 0.0 {
                upper = f64::INFINITY;
            }
        }
        if !lower.is_finite() {
            // Empty support: the zero matrix acting on nothing.
            lower = 0.0;
        }
        let scale: f64 = avg.iter().sum();
        report = PfReport {
            lambda: if upper.is_finite() {
                0.5 * (lower + upper)
            } else {
                lower
            },
            lower,
            upper,
            vector: if scale > 0.0 {
                avg.iter().map(|x| x / scale).collect()
            } else {
                avg.clone()
            },
            converged: upper.is_finite() && upper - lower <= PF_TOLERANCE,
            iterations: it,
        };
        if report.converged {
            return Ok(report);
        }
        let norm: f64 = w.iter().sum();
        if norm <= 0.0 {
            // Power of the matrix annihilated a positive vector: nilpotent.
            report.lambda = 0.0;
            report.lower = 0.0;
            report.upper = 0.0;
            report.converged = true;
            return Ok(report);
        }
        v = w.iter().map(|x| x / norm).collect();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn mat(rows: &[&[(i64, i64)]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn permutation_matrix_brackets_one() {
        let p = mat(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        let r = pf_estimate(&p).unwrap();
        assert!(r.converged);
        assert!(r.lower <= 1.0 + 1e-12 && 1.0 - 1e-12 <= r.upper);
        assert!((r.lambda - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_matrix_has_zero_radius() {
        let p = mat(&[&[(0, 1), (0, 1)], &[(0, 1), (0, 1)]]);
        let r = pf_estimate(&p).unwrap();
        assert!(r.converged);
        assert_eq!(r.lambda, 0.0);
    }

    #[test]
    fn nilpotent_matrix_converges_to_zero() {
        let p = mat(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]);
        let r = pf_estimate(&p).unwrap();
        assert!(r.converged);
        assert_eq!(r.lambda, 0.0);
    }

    #[test]
    fn bracket_contains_exact_two_by_two_radius() {
        // For a nonnegative 2x2 matrix the spectral radius is
        // (tr + sqrt(tr^2 - 4 det)) / 2, real since the discriminant is
        // (a - d)^2 + 4bc >= 0.
        let cases = [
            [[(1i64, 2i64), (1, 3)], [(1, 4), (1, 5)]],
            [[(0, 1), (2, 1)], [(3, 1), (0, 1)]],
            [[(1, 1), (0, 1)], [(0, 1), (5, 1)]],
            [[(2, 3), (1, 7)], [(0, 1), (2, 3)]],
        ];
        for c in cases {
            let p = mat(&[&c[0], &c[1]]);
            let a = c[0][0].0 as f64 / c[0][0].1 as f64;
            let b = c[0][1].0 as f64 / c[0][1].1 as f64;
            let cc = c[1][0].0 as f64 / c[1][0].1 as f64;
            let d = c[1][1].0 as f64 / c[1][1].1 as f64;
            let tr = a + d;
            let det = a * d - b * cc;
            let exact = 0.5 * (tr + (tr * tr - 4.0 * det).sqrt());
            let r = pf_estimate(&p).unwrap();
            assert!(
                r.lower <= exact + 1e-7 && exact <= r.upper + 1e-7,
                "bracket [{}, {}] misses {exact}",
                r.lower,
                r.upper
            );
        }
    }
}
