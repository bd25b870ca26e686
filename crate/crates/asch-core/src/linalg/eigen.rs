//! Characteristic polynomials, integer spectra, exact inverses and common
//! eigenbases of commuting rational matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::IntPolynomial;
use super::rational::{Rat, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix has a non-integral entry at ({row},{col})")]
    NonIntegralEntries { row: usize, col: usize },
    #[error("characteristic polynomial has a non-integer root (irrational or rational spectrum)")]
    NonIntegralSpectrum,
    #[error("matrix is not diagonalizable over the rationals")]
    NotDiagonalizable,
    #[error("joint eigenspace of dimension {dim} > 1: refinement stalled")]
    JointEigenspaceNotSimple { dim: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrices in the family do not pairwise commute")]
    NotCommuting,
    #[error("family members must be square matrices of one common dimension")]
    DimensionMismatch,
}

fn require_square_integral(m: &RationalMatrix) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m[(r, c)].is_integer() {
                return Err(LinalgError::NonIntegralEntries { row: r, col: c });
            }
        }
    }
    Ok(m.to_integer_entries().unwrap())
}

/// det(xI - M) as a monic integer polynomial, computed by fraction-free
/// (Bareiss) elimination over Z[x]; every division is exact.
pub fn char_poly(m: &RationalMatrix) -> Result<IntPolynomial, LinalgError> {
    let entries = require_square_integral(m)?;
    let n = entries.len();
    let mut a: Vec<Vec<IntPolynomial>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut coeffs = vec![-entries[r][c].clone()];
                    if r == c {
                        coeffs.push(BigInt::one());
                    }
                    IntPolynomial::from_coeffs(coeffs)
                })
                .collect()
        })
        .collect();

    let mut sign = 1i32;
    let mut prev = IntPolynomial::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(IntPolynomial::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            a[i][k] = IntPolynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign < 0 { &IntPolynomial::zero() - &det } else { det })
}

/// All roots of `char_poly(m)` with multiplicity, provided every root is an
/// integer. Candidates are divisors of the constant term within the
/// Gershgorin radius of the matrix; each found root is deflated out.
///
/// Returned sorted in descending order.
pub fn integer_eigenvalues(m: &RationalMatrix) -> Result<Vec<BigInt>, LinalgError> {
    let entries = require_square_integral(m)?;
    let bound = entries
        .iter()
        .map(|row| row.iter().map(|e| e.abs()).sum::<BigInt>())
        .max()
        .unwrap_or_else(BigInt::zero);
    let mut p = char_poly(m)?;
    let mut roots = Vec::new();

    // Zero roots first: strip trailing zero constant terms.
    while p.degree().is_some_and(|d| d > 0) && p.coeff(0).is_zero() {
        roots.push(BigInt::zero());
        p = p.deflate(&BigInt::zero()).expect("zero is a root");
    }

    let mut t = BigInt::one();
    while p.degree().is_some_and(|d| d > 0) && t <= bound {
        let divides = (&p.coeff(0) % &t).is_zero();
        if divides {
            for cand in [t.clone(), -t.clone()] {
                while p.degree().is_some_and(|d| d > 0) && p.eval(&cand).is_zero() {
                    roots.push(cand.clone());
                    p = p.deflate(&cand).expect("verified root");
                }
            }
        }
        t += 1;
    }
    if p.degree().is_some_and(|d| d > 0) {
        return Err(LinalgError::NonIntegralSpectrum);
    }
    roots.sort();
    roots.reverse();
    Ok(roots)
}

/// Exact inverse by Gauss-Jordan elimination over the rationals.
pub fn rat_inverse(m: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = RationalMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[(r, col)].is_zero())
            .ok_or(LinalgError::Singular)?;
        if pivot != col {
            for j in 0..n {
                let x = a[(pivot, j)].clone();
                a[(pivot, j)] = std::mem::replace(&mut a[(col, j)], x);
                let y = inv[(pivot, j)].clone();
                inv[(pivot, j)] = std::mem::replace(&mut inv[(col, j)], y);
            }
        }
        let p = a[(col, col)].clone();
        for j in 0..n {
            a[(col, j)] = &a[(col, j)] / &p;
            inv[(col, j)] = &inv[(col, j)] / &p;
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for j in 0..n {
                let t = &factor * &a[(col, j)];
                a[(r, j)] = &a[(r, j)] - &t;
                let t = &factor * &inv[(col, j)];
                inv[(r, j)] = &inv[(r, j)] - &t;
            }
        }
    }
    Ok(inv)
}

/// Basis of the null space of `m`, by reduction to row echelon form.
pub fn kernel(m: &RationalMatrix) -> Vec<Vec<Rat>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let x = a[(p, j)].clone();
                a[(p, j)] = std::mem::replace(&mut a[(r, j)], x);
            }
        }
        let pv = a[(r, c)].clone();
        for j in 0..cols {
            a[(r, j)] = &a[(r, j)] / &pv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..cols {
                let t = &f * &a[(r, j)];
                a[(i, j)] = &a[(i, j)] - &t;
            }
        }
        pivot_col_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols: std::collections::BTreeSet<usize> = pivot_col_of_row.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = -a[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// A joint eigenvector of a commuting family together with its eigenvalue
/// tuple (one integer per family member).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointEigenvector {
    pub vector: Vec<Rat>,
    pub values: Vec<BigInt>,
}

/// Simultaneously diagonalize a pairwise-commuting family of integral square
/// matrices whose joint eigenspaces are all one-dimensional.
///
/// The full space is split by the eigenvalues of each family member in turn;
/// every surviving subspace must end up one-dimensional.
pub fn common_eigenbasis(family: &[RationalMatrix]) -> Result<Vec<JointEigenvector>, LinalgError> {
    if family.is_empty() {
        return Err(LinalgError::DimensionMismatch);
    }
    let n = family[0].rows();
    for m in family {
        if !m.is_square() || m.rows() != n {
            return Err(LinalgError::DimensionMismatch);
        }
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if family[i].mul(&family[j]) != family[j].mul(&family[i]) {
                return Err(LinalgError::NotCommuting);
            }
        }
    }

    // Subspaces are kept as lists of spanning column vectors.
    let mut subspaces: Vec<Vec<Vec<Rat>>> = vec![(0..n)
        .map(|i| {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            v
        })
        .collect()];

    for m in family {
        let eigs = integer_eigenvalues(m)?;
        let mut distinct: Vec<BigInt> = Vec::new();
        for e in eigs {
            if !distinct.contains(&e) {
                distinct.push(e);
            }
        }
        let mut next = Vec::new();
        for space in subspaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let dim = space.len();
            let mut covered = 0;
            for lambda in &distinct {
                // Columns of `w` are (M - lambda I) applied to the basis of
                // the subspace; its kernel picks out the lambda-part.
                let shift = Rat::from_integer(lambda.clone());
                let w = RationalMatrix::from_fn(n, dim, |r, c| {
                    let mut acc = Rat::zero();
                    for k in 0..n {
                        if !m[(r, k)].is_zero() {
                            acc += &m[(r, k)] * &space[c][k];
                        }
                    }
                    if r < n {
                        acc -= &shift * &space[c][r];
                    }
                    acc
                });
                let ker = kernel(&w);
                if ker.is_empty() {
                    continue;
                }
                covered += ker.len();
                let sub: Vec<Vec<Rat>> = ker
                    .iter()
                    .map(|coeffs| {
                        (0..n)
                            .map(|r| {
                                coeffs
                                    .iter()
                                    .zip(&space)
                                    .fold(Rat::zero(), |acc, (c, b)| acc + c * &b[r])
                            })
                            .collect()
                    })
                    .collect();
                next.push(sub);
            }
            if covered != dim {
                return Err(LinalgError::NotDiagonalizable);
            }
        }
        subspaces = next;
    }

    let mut out = Vec::new();
    for space in subspaces {
        if space.len() != 1 {
            return Err(LinalgError::JointEigenspaceNotSimple { dim: space.len() });
        }
        let mut v = space.into_iter().next().unwrap();
        let lead = v
            .iter()
            .find(|x| !x.is_zero())
            .expect("basis vector is nonzero")
            .clone();
        for x in &mut v {
            *x = &*x / &lead;
        }
        let idx = v.iter().position(|x| !x.is_zero()).unwrap();
        let mut values = Vec::with_capacity(family.len());
        for m in family {
            let mv = m.mul_vec(&v);
            let lambda = &mv[idx] / &v[idx];
            if !lambda.is_integer() {
                return Err(LinalgError::NonIntegralSpectrum);
            }
            for (a, b) in mv.iter().zip(&v) {
                if *a != &lambda * b {
                    return Err(LinalgError::NotDiagonalizable);
                }
            }
            values.push(lambda.to_integer());
        }
        out.push(JointEigenvector { vector: v, values });
    }
    Ok(out)
}
