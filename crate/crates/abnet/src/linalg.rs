//! Exact integer and rational dense linear algebra: Hermite normal form
//! bases for integer lattices, fraction-free determinants and principal
//! minors, and exact inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parse "n" or "num/den" into an exact rational.
pub fn rat_from_str(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidSpec(format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::InvalidSpec(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
    }
}

/// Render a rational in lowest terms as "n" or "num/den".
pub fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A dense matrix of arbitrary-precision rationals in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> RatMatrix {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<RatMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::MalformedNetwork("ragged matrix rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>]) -> RatMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        RatMatrix {
            rows: r,
            cols: c,
            data: rows
                .iter()
                .flatten()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    /// Entries are all integers (denominator one).
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    /// Scale column `j` by `f` for each `(j, f)`.
    pub fn scale_cols(&self, factors: &[BigRational]) -> Result<RatMatrix> {
        if factors.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: factors.len(),
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = out.get(i, j) * &factors[j];
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> RatMatrix {
        let n = perm.len();
        let mut out = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(perm[i], perm[j]).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut out = RatMatrix::zeros(rows.len(), cols.len());
        for (oi, &i) in rows.iter().enumerate() {
            for (oj, &j) in cols.iter().enumerate() {
                out.set(oi, oj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rat_to_f64).collect())
            .collect()
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    let n = bigint_to_f64(r.numer());
    let d = bigint_to_f64(r.denom());
    n / d
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// Exact determinant of an integer matrix by fraction-free (Bareiss)
/// elimination.
pub fn int_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                debug_assert!((&num % &prev).is_zero(), "fraction-free step not exact");
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Clear denominators row by row; returns the integer matrix and the
/// per-row multipliers.
fn clear_rows(m: &RatMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut out = Vec::with_capacity(m.rows());
    let mut mults = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let lcm = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        out.push(
            m.row(i)
                .iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect(),
        );
        mults.push(lcm);
    }
    (out, mults)
}

/// Exact determinant of a square rational matrix.
pub fn det(m: &RatMatrix) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let (a, mults) = clear_rows(m);
    let scale = mults.into_iter().fold(BigInt::one(), |acc, x| acc * x);
    Ok(BigRational::new(int_det(a), scale))
}

/// Exact determinants of the leading `k x k` submatrices for `k = 1..=n`.
pub fn leading_principal_minors(m: &RatMatrix) -> Result<Vec<BigRational>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let idx: Vec<usize> = (0..m.rows()).collect();
    (1..=m.rows())
        .map(|k| det(&m.submatrix(&idx[..k], &idx[..k])))
        .collect()
}

/// Largest dimension accepted by [`all_principal_minors`]; the subset
/// count is exponential.
pub const ALL_MINORS_LIMIT: usize = 12;

/// Exact determinants of every nonempty principal submatrix, keyed by the
/// index subset. Exponential in `n`; intended as a debug cross-check for
/// matrices up to [`ALL_MINORS_LIMIT`].
pub fn all_principal_minors(m: &RatMatrix) -> Result<Vec<(Vec<usize>, BigRational)>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n > ALL_MINORS_LIMIT {
        return Err(Error::InvalidSpec(format!(
            "all-minors check is limited to {ALL_MINORS_LIMIT}x{ALL_MINORS_LIMIT} matrices"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u64..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let d = det(&m.submatrix(&subset, &subset))?;
        out.push((subset, d));
    }
    Ok(out)
}

/// Exact inverse: fraction-free forward elimination on the augmented
/// system followed by rational back-substitution. `m * inverse(m)` is the
/// identity exactly.
pub fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(RatMatrix::zeros(0, 0));
    }
    let (scaled, mults) = clear_rows(m);
    let mut a: Vec<Vec<BigInt>> = scaled
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            let mut aug = vec![BigInt::zero(); n];
            aug[i] = BigInt::one();
            row.extend(aug);
            row
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let r = (k + 1..n)
                .find(|&r| !a[r][k].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(k, r);
        }
        if k == n - 1 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..2 * n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                debug_assert!((&num % &prev).is_zero(), "fraction-free step not exact");
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if a[n - 1][n - 1].is_zero() {
        return Err(Error::SingularMatrix);
    }

    // Back-substitute on the upper-triangular augmented system.
    let mut x = vec![vec![BigRational::zero(); n]; n];
    for i in (0..n).rev() {
        for col in 0..n {
            let mut acc = BigRational::from_integer(a[i][n + col].clone());
            for j in i + 1..n {
                acc -= BigRational::from_integer(a[i][j].clone()) * &x[j][col];
            }
            x[i][col] = acc / BigRational::from_integer(a[i][i].clone());
        }
    }
    // Undo the row scaling: columns of the inverse pick up the multipliers.
    let mut out = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, &x[i][j] * BigRational::from_integer(mults[j].clone()));
        }
    }
    Ok(out)
}

/// An integer lattice of full rank, stored as a Hermite-normal-form basis:
/// rows are basis vectors, the matrix is upper triangular with positive
/// diagonal, and entries above each pivot are reduced modulo it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLattice {
    pub dim: usize,
    pub basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    /// The full lattice `Z^dim`.
    pub fn full(dim: usize) -> IntLattice {
        IntLattice {
            dim,
            basis: (0..dim)
                .map(|i| {
                    let mut row = vec![BigInt::zero(); dim];
                    row[i] = BigInt::one();
                    row
                })
                .collect(),
        }
    }

    /// Index of the lattice in `Z^dim`: the product of the diagonal.
    pub fn index(&self) -> BigInt {
        (0..self.dim).fold(BigInt::one(), |acc, i| acc * &self.basis[i][i])
    }

    /// Exact membership test by triangular division.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut rem: Vec<BigInt> = v.to_vec();
        for i in 0..self.dim {
            let (q, r) = rem[i].div_rem(&self.basis[i][i]);
            if !r.is_zero() {
                return false;
            }
            for j in i..self.dim {
                rem[j] -= &q * &self.basis[i][j];
            }
        }
        rem.iter().all(Zero::is_zero)
    }

    /// Block-diagonal product lattice, in the given order.
    pub fn product(parts: &[IntLattice]) -> IntLattice {
        let dim = parts.iter().map(|p| p.dim).sum();
        let mut basis = Vec::with_capacity(dim);
        let mut offset = 0;
        for part in parts {
            for row in &part.basis {
                let mut full = vec![BigInt::zero(); dim];
                full[offset..offset + part.dim].clone_from_slice(row);
                basis.push(full);
            }
            offset += part.dim;
        }
        IntLattice { dim, basis }
    }

    /// The sublattice of vectors supported on the `keep` coordinates,
    /// expressed in those coordinates. Always full rank for a finite-index
    /// lattice.
    pub fn coordinate_section(&self, keep: &[usize]) -> Result<IntLattice> {
        let complement: Vec<usize> = (0..self.dim).filter(|i| !keep.contains(i)).collect();
        let order: Vec<usize> = complement.iter().chain(keep.iter()).copied().collect();
        let permuted: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|row| order.iter().map(|&j| row[j].clone()).collect())
            .collect();
        let full = hnf(self.dim, &permuted)?;
        let rows: Vec<Vec<BigInt>> = full.basis[complement.len()..]
            .iter()
            .map(|row| row[complement.len()..].to_vec())
            .collect();
        Ok(IntLattice {
            dim: keep.len(),
            basis: rows,
        })
    }
}

/// Hermite normal form basis of the integer span of `relations`, which must
/// have full rank `dim`.
pub fn hnf(dim: usize, relations: &[Vec<BigInt>]) -> Result<IntLattice> {
    for r in relations {
        if r.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: r.len(),
            });
        }
    }
    let mut rows: Vec<Vec<BigInt>> = relations
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if dim == 0 {
        return Ok(IntLattice { dim, basis: vec![] });
    }

    let mut r = 0;
    for col in 0..dim {
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by_key(|&i| rows[i][col].abs());
            let Some(p) = pivot else {
                return Err(Error::RankDeficient);
            };
            rows.swap(r, p);
            let mut finished = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[r][col];
                if !q.is_zero() {
                    for j in col..dim {
                        let delta = &q * &rows[r][j];
                        rows[i][j] -= delta;
                    }
                }
                if !rows[i][col].is_zero() {
                    finished = false;
                }
            }
            if finished {
                break;
            }
        }
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        r += 1;
    }

    let mut basis: Vec<Vec<BigInt>> = rows.into_iter().take(dim).collect();
    // Reduce entries above each pivot.
    for j in 0..dim {
        for i in 0..j {
            let q = basis[i][j].div_floor(&basis[j][j]);
            if !q.is_zero() {
                for k in j..dim {
                    let delta = &q * &basis[j][k];
                    basis[i][k] -= delta;
                }
            }
        }
    }
    Ok(IntLattice { dim, basis })
}
