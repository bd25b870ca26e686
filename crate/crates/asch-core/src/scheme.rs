//! Relation partitions on a finite point set, the four association-scheme
//! axioms, and the resulting certificate (intersection numbers, valencies,
//! adjacency bitsets).

use rayon::prelude::*;

use crate::bitmat::{and_popcount, BitMatrix};
use crate::linalg::{rat_int, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("relation table shape mismatch: expected {expected} entries, got {got}")]
    BadShape { expected: usize, got: usize },
    #[error("class count d={0} exceeds the supported maximum of 255")]
    ClassCountTooLarge(usize),
    #[error("relation index {index} out of range at ({x},{y}) (class count d={d})")]
    IndexOutOfRange { x: usize, y: usize, index: usize, d: usize },
    #[error("relation table not symmetric: rel({x},{y})={fwd} but rel({y},{x})={bwd}")]
    NotSymmetric { x: usize, y: usize, fwd: usize, bwd: usize },
    #[error("identity relation violated at ({x},{y}): rel={rel}")]
    IdentityViolation { x: usize, y: usize, rel: usize },
    #[error("relation {index} is empty")]
    EmptyRelation { index: usize },
    #[error(
        "intersection number p[{i},{j}]^{k} is not constant: \
         pair ({},{}) gives {count_a} but pair ({},{}) gives {count_b}",
        pair_a.0, pair_a.1, pair_b.0, pair_b.1
    )]
    IntersectionNumberNotConstant {
        i: usize,
        j: usize,
        k: usize,
        pair_a: (usize, usize),
        count_a: u64,
        pair_b: (usize, usize),
        count_b: u64,
    },
}

/// A partition of `X x X` into `d+1` relation classes, class 0 intended to be
/// the identity. Construction checks shape only; the axioms are the job of
/// [`verify_axioms`], so ill-formed tables can be built for negative tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPartition {
    n: usize,
    d: usize,
    rel: Vec<u8>,
}

impl RelationPartition {
    pub fn new(n: usize, d: usize, rel: Vec<u8>) -> Result<Self, SchemeError> {
        if d > 255 {
            return Err(SchemeError::ClassCountTooLarge(d));
        }
        if rel.len() != n * n {
            return Err(SchemeError::BadShape {
                expected: n * n,
                got: rel.len(),
            });
        }
        for x in 0..n {
            for y in 0..n {
                let r = rel[x * n + y] as usize;
                if r > d {
                    return Err(SchemeError::IndexOutOfRange { x, y, index: r, d });
                }
            }
        }
        Ok(RelationPartition { n, d, rel })
    }

    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        let mut rel = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let v = f(x, y);
                assert!(v <= d);
                rel.push(v as u8);
            }
        }
        RelationPartition { n, d, rel }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn rel(&self, x: usize, y: usize) -> usize {
        self.rel[x * self.n + y] as usize
    }

    pub fn set_rel(&mut self, x: usize, y: usize, v: usize) {
        assert!(v <= self.d);
        self.rel[x * self.n + y] = v as u8;
    }

    /// Relabel the points by `perm` (new index of each old point).
    pub fn permute_points(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut rel = vec![0u8; self.n * self.n];
        for x in 0..self.n {
            for y in 0..self.n {
                rel[perm[x] * self.n + perm[y]] = self.rel[x * self.n + y];
            }
        }
        RelationPartition {
            n: self.n,
            d: self.d,
            rel,
        }
    }

    /// Relabel the relation classes by `sigma` (new index of each old class).
    pub fn permute_classes(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.d + 1);
        RelationPartition {
            n: self.n,
            d: self.d,
            rel: self.rel.iter().map(|&r| sigma[r as usize] as u8).collect(),
        }
    }
}

/// The verified data of an association scheme: intersection numbers,
/// valencies, per-relation adjacency bitsets, and the partition itself.
#[derive(Debug, Clone)]
pub struct SchemeCertificate {
    partition: RelationPartition,
    /// p[i][j][k] flattened as ((i * (d+1)) + j) * (d+1) + k.
    p: Vec<u64>,
    valencies: Vec<u64>,
    adjacency: Vec<BitMatrix>,
}

impl SchemeCertificate {
    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn d(&self) -> usize {
        self.partition.d()
    }

    pub fn partition(&self) -> &RelationPartition {
        &self.partition
    }

    #[inline]
    pub fn rel(&self, x: usize, y: usize) -> usize {
        self.partition.rel(x, y)
    }

    pub fn p(&self, i: usize, j: usize, k: usize) -> u64 {
        let w = self.d() + 1;
        self.p[(i * w + j) * w + k]
    }

    pub fn valency(&self, i: usize) -> u64 {
        self.valencies[i]
    }

    pub fn valencies(&self) -> &[u64] {
        &self.valencies
    }

    pub fn adjacency(&self, i: usize) -> &BitMatrix {
        &self.adjacency[i]
    }
}

/// Verify the four scheme axioms for a relation partition and produce its
/// certificate.
///
/// The intersection number for each (i,j,k) is read off one representative
/// pair per class and then checked against every pair of `X x X` via
/// bit-parallel row products, in parallel over rows.
pub fn verify_axioms(rp: &RelationPartition) -> Result<SchemeCertificate, SchemeError> {
    let n = rp.n();
    let d = rp.d();
    let w = d + 1;

    for x in 0..n {
        let r = rp.rel(x, x);
        if r != 0 {
            return Err(SchemeError::IdentityViolation { x, y: x, rel: r });
        }
        for y in x + 1..n {
            let fwd = rp.rel(x, y);
            let bwd = rp.rel(y, x);
            if fwd != bwd {
                return Err(SchemeError::NotSymmetric { x, y, fwd, bwd });
            }
            if fwd == 0 {
                return Err(SchemeError::IdentityViolation { x, y, rel: 0 });
            }
        }
    }

    // Lexicographically first representative pair of each class.
    let mut reps: Vec<Option<(usize, usize)>> = vec![None; w];
    for x in 0..n {
        for y in 0..n {
            let k = rp.rel(x, y);
            if reps[k].is_none() {
                reps[k] = Some((x, y));
            }
        }
    }
    let reps: Vec<(usize, usize)> = reps
        .into_iter()
        .enumerate()
        .map(|(index, r)| r.ok_or(SchemeError::EmptyRelation { index }))
        .collect::<Result<_, _>>()?;

    let mut adjacency: Vec<BitMatrix> = (0..w).map(|_| BitMatrix::new(n)).collect();
    for x in 0..n {
        for y in 0..n {
            adjacency[rp.rel(x, y)].set(x, y);
        }
    }

    let mut p = vec![0u64; w * w * w];
    for i in 0..w {
        for j in 0..w {
            for k in 0..w {
                let val = if i == 0 {
                    u64::from(j == k)
                } else if j == 0 {
                    u64::from(i == k)
                } else {
                    let (x, y) = reps[k];
                    and_popcount(adjacency[i].row(x), adjacency[j].row(y))
                };
                p[(i * w + j) * w + k] = val;
            }
        }
    }

    // Global check of A_i A_j = sum_k p[i][j][k] A_k for 1 <= i <= j; the
    // remaining cases follow from symmetry and A_0 = I.
    for i in 1..w {
        for j in i..w {
            let expected = &p[(i * w + j) * w..(i * w + j + 1) * w];
            let violation = (0..n)
                .into_par_iter()
                .filter_map(|x| {
                    let ri = adjacency[i].row(x);
                    for y in 0..n {
                        let k = rp.rel(x, y);
                        let count = and_popcount(ri, adjacency[j].row(y));
                        if count != expected[k] {
                            return Some((x, y, k, count));
                        }
                    }
                    None
                })
                .min();
            if let Some((x, y, k, count)) = violation {
                return Err(SchemeError::IntersectionNumberNotConstant {
                    i,
                    j,
                    k,
                    pair_a: reps[k],
                    count_a: expected[k],
                    pair_b: (x, y),
                    count_b: count,
                });
            }
            if i != j {
                for k in 0..w {
                    p[(j * w + i) * w + k] = p[(i * w + j) * w + k];
                }
            }
        }
    }

    let valencies: Vec<u64> = (0..w).map(|i| p[(i * w + i) * w]).collect();
    debug_assert!(valencies
        .iter()
        .enumerate()
        .all(|(i, &k)| adjacency[i].row_count_ones(0) == k));
    debug_assert!((0..w).all(|i| (0..w)
        .all(|k| (0..w).map(|j| p[(i * w + j) * w + k]).sum::<u64>() == valencies[i])));

    Ok(SchemeCertificate {
        partition: rp.clone(),
        p,
        valencies,
        adjacency,
    })
}

/// The intersection matrices B_i with (B_i)[k][j] = p[i][j]^k. B_0 is the
/// identity and the family pairwise commutes; their common eigenvalue tuples
/// are the rows of the first eigenmatrix.
pub fn intersection_matrices(cert: &SchemeCertificate) -> Vec<RationalMatrix> {
    let w = cert.d() + 1;
    (0..w)
        .map(|i| {
            RationalMatrix::from_fn(w, w, |k, j| rat_int(cert.p(i, j, k) as i64))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn complete_graph(n: usize) -> RelationPartition {
        RelationPartition::from_fn(n, 1, |x, y| usize::from(x != y))
    }

    #[test]
    fn complete_graph_certificate() {
        let cert = verify_axioms(&complete_graph(4)).unwrap();
        assert_eq!(cert.valencies(), &[1, 3]);
        assert_eq!(cert.p(1, 1, 1), 2);
        assert_eq!(cert.p(1, 1, 0), 3);
        let b = intersection_matrices(&cert);
        assert_eq!(b[0], RationalMatrix::identity(2));
        assert_eq!(b[1], RationalMatrix::from_int_rows(&[vec![0, 3], vec![1, 2]]));
    }

    #[test]
    fn asymmetric_table_rejected() {
        let mut rp = complete_graph(4);
        rp.set_rel(1, 2, 0);
        let err = verify_axioms(&rp).unwrap_err();
        assert!(matches!(err, SchemeError::NotSymmetric { x: 1, y: 2, .. }));
    }

    #[test]
    fn diagonal_violation_rejected() {
        let mut rp = complete_graph(4);
        rp.set_rel(2, 2, 1);
        assert!(matches!(
            verify_axioms(&rp).unwrap_err(),
            SchemeError::IdentityViolation { x: 2, y: 2, rel: 1 }
        ));
    }

    #[test]
    fn empty_relation_rejected() {
        let rp = RelationPartition::from_fn(4, 2, |x, y| usize::from(x != y));
        assert!(matches!(
            verify_axioms(&rp).unwrap_err(),
            SchemeError::EmptyRelation { index: 2 }
        ));
    }

    #[test]
    fn pentagon_is_a_scheme_with_witnessed_failures() {
        // C5: distance partition of the 5-cycle.
        let pent = RelationPartition::from_fn(5, 2, |x, y| {
            let diff = (x + 5 - y) % 5;
            match diff.min(5 - diff) {
                0 => 0,
                1 => 1,
                _ => 2,
            }
        });
        assert!(verify_axioms(&pent).is_ok());
        // Corrupt one symmetric pair: constancy must fail with a witness.
        let mut bad = pent.clone();
        bad.set_rel(0, 1, 2);
        bad.set_rel(1, 0, 2);
        assert!(matches!(
            verify_axioms(&bad).unwrap_err(),
            SchemeError::IntersectionNumberNotConstant { .. }
        ));
    }

    #[test]
    fn single_point_scheme() {
        let rp = RelationPartition::from_fn(1, 0, |_, _| 0);
        let cert = verify_axioms(&rp).unwrap();
        assert_eq!(cert.valencies(), &[1]);
    }
}
