//! Closed relation subsets, quotient schemes, recognition of two-fold covers
//! of strongly regular graphs, and the antipodal bijection.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::linalg::{Rat, RationalMatrix};
use crate::scheme::{verify_axioms, RelationPartition, SchemeCertificate, SchemeError};
use crate::spectra::{compute_spectrum, Spectrum, SpectraError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("index subset is not closed under the intersection numbers")]
    NotClosed,
    #[error("blocks of the relation union have unequal sizes ({sizes:?})")]
    UnequalBlocks { sizes: Vec<usize> },
    #[error("quotient relation between blocks {x} and {y} is not well defined")]
    QuotientNotWellDefined { x: usize, y: usize },
    #[error("not a four-class two-fold cover: {0}")]
    NotAFourClassCover(String),
    #[error("cover cannot be arranged into the canonical form: {0}")]
    ArrangementImpossible(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn unite(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            // Keep the smaller root so block ids follow minimal elements.
            let (lo, hi) = (rx.min(ry), rx.max(ry));
            self.parent[hi] = lo;
        }
    }
}

/// All index subsets containing 0 whose relation union is an equivalence
/// relation, i.e. all closed subsets of the certificate. Includes the
/// trivial subset {0} and the full index set.
pub fn find_closed_subsets(cert: &SchemeCertificate) -> Vec<Vec<usize>> {
    let d = cert.d();
    assert!(d <= 24, "closed-subset enumeration is for small class counts");
    let mut out = Vec::new();
    for mask in 0..(1u32 << d) {
        let subset: Vec<usize> = std::iter::once(0)
            .chain((1..=d).filter(|&i| mask >> (i - 1) & 1 == 1))
            .collect();
        let inside = |k: usize| subset.contains(&k);
        let closed = subset.iter().all(|&i| {
            subset
                .iter()
                .all(|&j| (0..=d).all(|k| inside(k) || cert.p(i, j, k) == 0))
        });
        if closed {
            out.push(subset);
        }
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// Equivalence classes of relation indices induced by a closed subset:
/// j ~ k when p[i][j]^k != 0 for some i in the subset. Classes are sorted by
/// their minimal element, so the class of the subset itself comes first.
fn index_classes(cert: &SchemeCertificate, subset: &[usize]) -> Vec<Vec<usize>> {
    let d = cert.d();
    let mut uf = UnionFind::new(d + 1);
    for &i in subset {
        for j in 0..=d {
            for k in 0..=d {
                if cert.p(i, j, k) != 0 {
                    uf.unite(j, k);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for j in 0..=d {
        groups.entry(uf.find(j)).or_default().push(j);
    }
    groups.into_values().collect()
}

/// The quotient of a scheme by a closed subset: block structure on the
/// points, index classes, and the re-verified quotient scheme.
#[derive(Debug, Clone)]
pub struct QuotientStructure {
    pub index_set: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    pub block_map: Vec<usize>,
    pub block_size: usize,
    pub quotient: RelationPartition,
    pub cert: SchemeCertificate,
}

/// Build the quotient scheme with respect to a closed index subset.
///
/// Blocks are the classes of the union relation; the quotient table is read
/// off the index classes and checked for consistency on every point pair,
/// then the quotient is re-certified through `verify_axioms`.
pub fn quotient_scheme(
    cert: &SchemeCertificate,
    subset: &[usize],
) -> Result<QuotientStructure, CoverError> {
    let d = cert.d();
    let n = cert.n();
    let mut subset: Vec<usize> = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if !subset.contains(&0) || subset.iter().any(|&i| i > d) {
        return Err(CoverError::NotClosed);
    }
    let inside = |k: usize| subset.contains(&k);
    let closed = subset.iter().all(|&i| {
        subset
            .iter()
            .all(|&j| (0..=d).all(|k| inside(k) || cert.p(i, j, k) == 0))
    });
    if !closed {
        return Err(CoverError::NotClosed);
    }

    let mut uf = UnionFind::new(n);
    for x in 0..n {
        for y in x + 1..n {
            if inside(cert.rel(x, y)) {
                uf.unite(x, y);
            }
        }
    }
    let mut block_of_root: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut block_map = vec![0usize; n];
    for (x, slot) in block_map.iter_mut().enumerate() {
        let root = uf.find(x);
        let next = block_of_root.len();
        *slot = *block_of_root.entry(root).or_insert(next);
    }
    let q = block_of_root.len();
    let mut sizes = vec![0usize; q];
    for &b in &block_map {
        sizes[b] += 1;
    }
    if sizes.iter().any(|&s| s != sizes[0]) {
        return Err(CoverError::UnequalBlocks { sizes });
    }
    let block_size = sizes[0];

    let classes = index_classes(cert, &subset);
    if classes[0] != subset {
        return Err(CoverError::NotClosed);
    }
    let mut class_of_index = vec![0usize; d + 1];
    for (c, class) in classes.iter().enumerate() {
        for &i in class {
            class_of_index[i] = c;
        }
    }

    let unset = u8::MAX;
    let mut qrel = vec![unset; q * q];
    for x in 0..n {
        for y in 0..n {
            let (bx, by) = (block_map[x], block_map[y]);
            let c = class_of_index[cert.rel(x, y)] as u8;
            let cell = &mut qrel[bx * q + by];
            if *cell == unset {
                *cell = c;
            } else if *cell != c {
                return Err(CoverError::QuotientNotWellDefined { x: bx, y: by });
            }
        }
    }
    let quotient = RelationPartition::new(q, classes.len() - 1, qrel)?;
    let qcert = verify_axioms(&quotient)?;

    Ok(QuotientStructure {
        index_set: subset,
        classes,
        block_map,
        block_size,
        quotient,
        cert: qcert,
    })
}

/// A recognized two-fold cover of a strongly regular graph, rearranged to
/// the canonical form: the matching is relation 4, the paired relations are
/// 1 and 3, the self-paired one is 2; eigenspaces are ordered so that the
/// quotient columns come first with r > s, then the antipodal columns with
/// m3 <= m4.
#[derive(Debug, Clone)]
pub struct CoverProfile {
    /// Relabeling applied to the input relations (old index -> new index).
    pub arrangement: Vec<usize>,
    /// The antipodal bijection recovered from the valency-1 relation.
    pub phi: Vec<usize>,
    /// Certificate of the rearranged cover.
    pub cert: SchemeCertificate,
    /// Spectrum of the rearranged cover in the canonical eigenspace order.
    pub spectrum: Spectrum,
    /// Quotient by the matching, with its spectrum ordered so that r > s.
    pub quotient: QuotientStructure,
    pub quotient_spectrum: Spectrum,
    /// Quotient parameters (m, r, s, n).
    pub m: Rat,
    pub r: Rat,
    pub s: Rat,
    pub n_quotient: u64,
    /// Antipodal eigenspace multiplicities and angles, m3 <= m4.
    pub m3: BigInt,
    pub m4: BigInt,
    pub alpha3: Rat,
    pub alpha4: Rat,
    /// Valency of relation 1.
    pub k: u64,
}

/// Recognize a 4-class two-fold cover and put it into canonical form.
pub fn recognize_cover(cert: &SchemeCertificate) -> Result<CoverProfile, CoverError> {
    let d = cert.d();
    if d != 4 {
        return Err(CoverError::NotAFourClassCover(format!(
            "class count is {d}, expected 4"
        )));
    }
    // A symmetric valency-one relation is a perfect matching, so {0,v} is
    // closed; among such candidates take the first whose index classes have
    // the cover shape {0,v}, {a,b}, {c}.
    let candidates: Vec<usize> = (1..=4)
        .filter(|&i| cert.valency(i) == 1 && (1..=4).all(|k| cert.p(i, i, k) == 0))
        .collect();
    if candidates.is_empty() {
        return Err(CoverError::NotAFourClassCover(
            "no non-identity relation of valency one".into(),
        ));
    }
    let mut shaped = None;
    let mut last_classes = Vec::new();
    for &v in &candidates {
        let classes = index_classes(cert, &[0, v]);
        if classes.len() == 3 && classes[0] == vec![0, v] {
            let sizes = (classes[1].len(), classes[2].len());
            if sizes == (2, 1) {
                shaped = Some((v, classes[1].clone(), classes[2][0]));
            } else if sizes == (1, 2) {
                shaped = Some((v, classes[2].clone(), classes[1][0]));
            }
        }
        if shaped.is_some() {
            break;
        }
        last_classes = classes;
    }
    let Some((v, pair, single)) = shaped else {
        return Err(CoverError::ArrangementImpossible(format!(
            "index classes {last_classes:?} do not split into a pair and a singleton"
        )));
    };

    // Tie-break between the paired relations: relation 1 is the one whose
    // eigenvalue tuple (its column of P) is lexicographically greater.
    let spec_in = compute_spectrum(cert)?;
    let (a, b) = (pair[0], pair[1]);
    let (r1, r3) = if spec_in.p.col(a) > spec_in.p.col(b) {
        (a, b)
    } else {
        (b, a)
    };

    let mut arrangement = vec![0usize; 5];
    arrangement[0] = 0;
    arrangement[v] = 4;
    arrangement[single] = 2;
    arrangement[r1] = 1;
    arrangement[r3] = 3;

    let arranged = cert.partition().permute_classes(&arrangement);
    let cert = verify_axioms(&arranged)?;
    let canon = compute_spectrum(&cert)?;

    // Eigenspaces split by the matching eigenvalue: +1 rows descend from the
    // quotient, -1 rows are antipodal.
    let mut symmetric = Vec::new();
    let mut antipodal = Vec::new();
    for j in 0..5 {
        let e = &canon.p[(j, 4)];
        if *e == Rat::one() {
            symmetric.push(j);
        } else if *e == -Rat::one() {
            antipodal.push(j);
        } else {
            return Err(CoverError::ArrangementImpossible(format!(
                "matching eigenvalue {e} is not +-1"
            )));
        }
    }
    if symmetric.len() != 3 || symmetric[0] != 0 || antipodal.len() != 2 {
        return Err(CoverError::ArrangementImpossible(
            "eigenspaces do not split 3 + 2 over the matching".into(),
        ));
    }
    // Among the two non-trivial quotient eigenspaces exactly one satisfies
    // Q[1][j] > Q[2][j]; that one carries r and comes first.
    let (ca, cb) = (symmetric[1], symmetric[2]);
    let carries_r = |j: usize| canon.q[(1, j)] > canon.q[(2, j)];
    let (e1, e2) = match (carries_r(ca), carries_r(cb)) {
        (true, false) => (ca, cb),
        (false, true) => (cb, ca),
        _ => {
            return Err(CoverError::ArrangementImpossible(
                "no unique eigenspace ordering satisfies r > s".into(),
            ))
        }
    };
    // Antipodal columns ordered by ascending multiplicity (m3 <= m4); on a
    // tie, the column with the larger row-1 entry comes first.
    let (mut e3, mut e4) = (antipodal[0], antipodal[1]);
    if canon.multiplicities[e3] > canon.multiplicities[e4]
        || (canon.multiplicities[e3] == canon.multiplicities[e4]
            && canon.q[(1, e3)] < canon.q[(1, e4)])
    {
        std::mem::swap(&mut e3, &mut e4);
    }
    let spectrum = canon.reorder_eigenspaces(&[0, e1, e2, e3, e4]);

    let n = cert.n();
    let mut phi = vec![usize::MAX; n];
    for (x, slot) in phi.iter_mut().enumerate() {
        *slot = (0..n)
            .find(|&y| y != x && cert.rel(x, y) == 4)
            .expect("valency-1 relation pairs every point");
    }

    let quotient = quotient_scheme(&cert, &[0, 4])?;
    let qcanon = compute_spectrum(&quotient.cert)?;
    let quotient_spectrum = if qcanon.q[(1, 1)] > qcanon.q[(2, 1)] {
        qcanon
    } else {
        qcanon.reorder_eigenspaces(&[0, 2, 1])
    };

    let m = quotient_spectrum.q[(0, 1)].clone();
    let r = quotient_spectrum.q[(1, 1)].clone();
    let s = quotient_spectrum.q[(2, 1)].clone();
    let n_quotient = quotient.quotient.n() as u64;
    let m3 = spectrum.multiplicities[3].clone();
    let m4 = spectrum.multiplicities[4].clone();
    let alpha3 = &spectrum.q[(1, 3)] / Rat::from_integer(m3.clone());
    let alpha4 = &spectrum.q[(1, 4)] / Rat::from_integer(m4.clone());
    let k = cert.valency(1);

    Ok(CoverProfile {
        arrangement,
        phi,
        cert,
        spectrum,
        quotient,
        quotient_spectrum,
        m,
        r,
        s,
        n_quotient,
        m3,
        m4,
        alpha3,
        alpha4,
        k,
    })
}

/// One named identity with both sides evaluated exactly.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: Rat,
    pub rhs: Rat,
    pub ok: bool,
}

impl std::fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.ok { "ok" } else { "VIOLATED" };
        write!(
            f,
            "{}: {} vs {} [{verdict}]",
            self.name,
            crate::linalg::format_rat(&self.lhs),
            crate::linalg::format_rat(&self.rhs)
        )
    }
}

impl CoverProfile {
    /// The closed form of the cover's second eigenmatrix in terms of the
    /// quotient parameters.
    pub fn q_template(&self) -> RationalMatrix {
        let one = Rat::one();
        let n = Rat::from_integer(BigInt::from(self.n_quotient));
        let m3 = Rat::from_integer(self.m3.clone());
        let m4 = Rat::from_integer(self.m4.clone());
        let m3a3 = &m3 * &self.alpha3;
        let m4a4 = &m4 * &self.alpha4;
        let quot_cols = [
            [one.clone(), self.m.clone(), &n - &self.m - &one],
            [one.clone(), self.r.clone(), -&self.r - &one],
            [one.clone(), self.s.clone(), -&self.s - &one],
        ];
        let rows = vec![
            vec![
                quot_cols[0][0].clone(),
                quot_cols[0][1].clone(),
                quot_cols[0][2].clone(),
                m3.clone(),
                m4.clone(),
            ],
            vec![
                quot_cols[1][0].clone(),
                quot_cols[1][1].clone(),
                quot_cols[1][2].clone(),
                m3a3.clone(),
                m4a4.clone(),
            ],
            vec![
                quot_cols[2][0].clone(),
                quot_cols[2][1].clone(),
                quot_cols[2][2].clone(),
                Rat::zero(),
                Rat::zero(),
            ],
            vec![
                quot_cols[1][0].clone(),
                quot_cols[1][1].clone(),
                quot_cols[1][2].clone(),
                -&m3a3,
                -&m4a4,
            ],
            vec![
                quot_cols[0][0].clone(),
                quot_cols[0][1].clone(),
                quot_cols[0][2].clone(),
                -&m3,
                -&m4,
            ],
        ];
        RationalMatrix::from_rows(rows)
    }

    /// Cells where the computed Q differs from the closed-form template
    /// (empty for a genuine cover).
    pub fn q_template_diff(&self) -> Vec<(usize, usize)> {
        self.spectrum.q.diff_cells(&self.q_template())
    }

    /// The cover parameter identities, each evaluated exactly.
    pub fn identity_checks(&self) -> Vec<IdentityCheck> {
        let n = Rat::from_integer(BigInt::from(self.n_quotient));
        let m3 = Rat::from_integer(self.m3.clone());
        let m4 = Rat::from_integer(self.m4.clone());
        let k = Rat::from_integer(BigInt::from(self.k));
        let sum = &m3 + &m4;
        let balance = &m3 * &self.alpha3 + &m4 * &self.alpha4;
        let product = &k * &self.alpha3 * &self.alpha4;
        vec![
            IdentityCheck {
                name: "m3 + m4 = n",
                ok: sum == n,
                lhs: sum,
                rhs: n,
            },
            IdentityCheck {
                name: "m3*alpha3 + m4*alpha4 = 0",
                ok: balance.is_zero(),
                lhs: balance,
                rhs: Rat::zero(),
            },
            IdentityCheck {
                name: "k*alpha3*alpha4 = -1",
                ok: product == -Rat::one(),
                lhs: product,
                rhs: -Rat::one(),
            },
            IdentityCheck {
                name: "r > s",
                ok: self.r > self.s,
                lhs: self.r.clone(),
                rhs: self.s.clone(),
            },
        ]
    }

    /// Check that columns 0..2 of the cover's Q, read along the quotient
    /// index classes, reproduce the quotient's Q. Returns offending cells.
    pub fn quotient_embedding_diff(&self) -> Vec<(usize, usize)> {
        let mut diffs = Vec::new();
        // Rows 0,1,2 of the quotient correspond to cover rows 0,1,2; the
        // paired rows 4 and 3 must repeat rows 0 and 1 on those columns.
        for col in 0..3 {
            for (qrow, crow) in [(0, 0), (1, 1), (2, 2)] {
                if self.quotient_spectrum.q[(qrow, col)] != self.spectrum.q[(crow, col)] {
                    diffs.push((qrow, col));
                }
            }
            if self.spectrum.q[(4, col)] != self.spectrum.q[(0, col)] {
                diffs.push((4, col));
            }
            if self.spectrum.q[(3, col)] != self.spectrum.q[(1, col)] {
                diffs.push((3, col));
            }
        }
        diffs
    }
}

/// Verification of the antipodal action: phi is a fixed-point-free
/// involution and composing with it swaps relation i with 4-i.
#[derive(Debug, Clone, Default)]
pub struct AntipodalReport {
    pub not_involution: Vec<usize>,
    pub fixed_points: Vec<usize>,
    /// First witness (x, y) per relation index i with rel(x, phi(y)) != 4-i.
    pub relation_violations: Vec<(usize, (usize, usize))>,
}

impl AntipodalReport {
    pub fn is_ok(&self) -> bool {
        self.not_involution.is_empty()
            && self.fixed_points.is_empty()
            && self.relation_violations.is_empty()
    }
}

pub fn antipodal_action(profile: &CoverProfile) -> AntipodalReport {
    let cert = &profile.cert;
    let phi = &profile.phi;
    let n = cert.n();
    let mut report = AntipodalReport::default();
    for x in 0..n {
        if phi[phi[x]] != x {
            report.not_involution.push(x);
        }
        if phi[x] == x {
            report.fixed_points.push(x);
        }
    }
    let mut seen = [false; 5];
    for x in 0..n {
        for (y, &py) in phi.iter().enumerate() {
            let i = cert.rel(x, y);
            if cert.rel(x, py) != 4 - i && !seen[i] {
                seen[i] = true;
                report.relation_violations.push((i, (x, y)));
            }
        }
    }
    report.relation_violations.sort();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_multipartite(groups: usize, size: usize) -> SchemeCertificate {
        // Imprimitive 2-class scheme: same group -> relation 2 (or identity).
        let rp = RelationPartition::from_fn(groups * size, 2, |x, y| {
            if x == y {
                0
            } else if x / size == y / size {
                2
            } else {
                1
            }
        });
        verify_axioms(&rp).unwrap()
    }

    #[test]
    fn closed_subsets_of_complete_multipartite() {
        let cert = complete_multipartite(4, 3);
        let subsets = find_closed_subsets(&cert);
        assert_eq!(subsets, vec![vec![0], vec![0, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn quotient_of_complete_multipartite_is_complete() {
        let cert = complete_multipartite(4, 3);
        let q = quotient_scheme(&cert, &[0, 2]).unwrap();
        assert_eq!(q.block_size, 3);
        assert_eq!(q.quotient.n(), 4);
        assert_eq!(q.quotient.d(), 1);
        assert_eq!(q.cert.valencies(), &[1, 3]);
        assert_eq!(q.classes, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn non_closed_subset_rejected() {
        let cert = complete_multipartite(4, 3);
        assert!(matches!(
            quotient_scheme(&cert, &[0, 1]),
            Err(CoverError::NotClosed)
        ));
    }

    #[test]
    fn primitive_scheme_is_not_a_cover() {
        let rp = RelationPartition::from_fn(4, 1, |x, y| usize::from(x != y));
        let cert = verify_axioms(&rp).unwrap();
        assert!(matches!(
            recognize_cover(&cert),
            Err(CoverError::NotAFourClassCover(_))
        ));
    }
}
