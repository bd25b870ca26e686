//! First and second eigenmatrices of a certified scheme, with the duality
//! and orthogonality identities.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{
    common_eigenbasis, rat_inverse, LinalgError, Rat, RationalMatrix,
};
use crate::scheme::{intersection_matrices, SchemeCertificate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectraError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("no eigenvalue tuple equals the valencies; certificate is inconsistent")]
    PerronRowMissing,
    #[error("multiplicity of eigenspace {index} is {value}, not a positive integer")]
    NonIntegralMultiplicity { index: usize, value: String },
}

/// Exact spectrum of a scheme: first eigenmatrix `P` (rows = eigenspaces),
/// second eigenmatrix `Q = |X| P^-1` (columns = eigenspaces), valencies and
/// multiplicities.
///
/// `compute_spectrum` produces the canonical ordering (Perron row first, the
/// rest lexicographically descending by eigenvalue tuple); reordered copies
/// for context-specific presentations keep all identities intact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub p: RationalMatrix,
    pub q: RationalMatrix,
    pub valencies: Vec<BigInt>,
    pub multiplicities: Vec<BigInt>,
    pub size_x: u64,
}

impl Spectrum {
    pub fn classes(&self) -> usize {
        self.p.rows() - 1
    }

    /// Copy with eigenspaces reordered by `perm` (`perm[new] = old`): rows of
    /// `P`, columns of `Q` and the multiplicity list move together.
    pub fn reorder_eigenspaces(&self, perm: &[usize]) -> Spectrum {
        assert_eq!(perm.len(), self.p.rows());
        Spectrum {
            p: self.p.permute_rows(perm),
            q: self.q.permute_cols(perm),
            valencies: self.valencies.clone(),
            multiplicities: perm.iter().map(|&o| self.multiplicities[o].clone()).collect(),
            size_x: self.size_x,
        }
    }
}

/// Assemble the spectrum of a certified scheme.
///
/// The rows of `P` are the joint eigenvalue tuples of the intersection
/// matrices; `Q` is computed by exact inversion, and the dual-eigenvalue
/// identity is then available as an independent cross-check via
/// [`verify_duality`].
pub fn compute_spectrum(cert: &SchemeCertificate) -> Result<Spectrum, SpectraError> {
    let b = intersection_matrices(cert);
    let joint = common_eigenbasis(&b)?;
    let valencies: Vec<BigInt> = cert.valencies().iter().map(|&k| BigInt::from(k)).collect();

    let mut rows: Vec<Vec<BigInt>> = joint.into_iter().map(|j| j.values).collect();
    let perron = rows
        .iter()
        .position(|r| *r == valencies)
        .ok_or(SpectraError::PerronRowMissing)?;
    let perron_row = rows.swap_remove(perron);
    rows.sort();
    rows.reverse();
    rows.insert(0, perron_row);

    let w = cert.d() + 1;
    let p = RationalMatrix::from_fn(w, w, |r, c| Rat::from_integer(rows[r][c].clone()));
    let size_x = cert.n() as u64;
    let q = rat_inverse(&p)?.scale(&Rat::from_integer(BigInt::from(size_x)));

    let mut multiplicities = Vec::with_capacity(w);
    for j in 0..w {
        let m = &q[(0, j)];
        if !m.is_integer() || !m.numer().is_positive() {
            return Err(SpectraError::NonIntegralMultiplicity {
                index: j,
                value: crate::linalg::format_rat(m),
            });
        }
        multiplicities.push(m.to_integer());
    }
    debug_assert_eq!(
        multiplicities.iter().sum::<BigInt>(),
        BigInt::from(size_x)
    );

    let spec = Spectrum {
        p,
        q,
        valencies,
        multiplicities,
        size_x,
    };
    debug_assert!(verify_duality(&spec).is_ok());
    Ok(spec)
}

/// One violated identity found by [`verify_duality`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualityViolation {
    /// Q[i][j] * k_i != P[j][i] * m_j.
    DualEigenvalue { i: usize, j: usize, lhs: Rat, rhs: Rat },
    /// (Q^T D_k Q)[a][b] != |X| m_a delta_{a,b}.
    Orthogonality { a: usize, b: usize, lhs: Rat, rhs: Rat },
}

impl std::fmt::Display for DualityViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DualityViolation::DualEigenvalue { i, j, lhs, rhs } => write!(
                f,
                "dual eigenvalue cell ({i},{j}): Q[{i}][{j}]*k_{i} = {lhs} != P[{j}][{i}]*m_{j} = {rhs}"
            ),
            DualityViolation::Orthogonality { a, b, lhs, rhs } => write!(
                f,
                "orthogonality cell ({a},{b}): sum_i k_i Q[i][{a}] Q[i][{b}] = {lhs}, expected {rhs}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DualityReport {
    pub violations: Vec<DualityViolation>,
}

impl DualityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check Q[i][j] k_i = P[j][i] m_j for all cells and the orthogonality
/// Q^T D_k Q = |X| D_m; violations become report content, not errors.
pub fn verify_duality(spec: &Spectrum) -> DualityReport {
    let w = spec.p.rows();
    let mut violations = Vec::new();
    for i in 0..w {
        for j in 0..w {
            let lhs = &spec.q[(i, j)] * Rat::from_integer(spec.valencies[i].clone());
            let rhs = &spec.p[(j, i)] * Rat::from_integer(spec.multiplicities[j].clone());
            if lhs != rhs {
                violations.push(DualityViolation::DualEigenvalue { i, j, lhs, rhs });
            }
        }
    }
    for a in 0..w {
        for b in 0..w {
            let mut lhs = Rat::zero();
            for i in 0..w {
                lhs += Rat::from_integer(spec.valencies[i].clone())
                    * &spec.q[(i, a)]
                    * &spec.q[(i, b)];
            }
            let rhs = if a == b {
                Rat::from_integer(BigInt::from(spec.size_x) * &spec.multiplicities[a])
            } else {
                Rat::zero()
            };
            if lhs != rhs {
                violations.push(DualityViolation::Orthogonality { a, b, lhs, rhs });
            }
        }
    }
    DualityReport { violations }
}
