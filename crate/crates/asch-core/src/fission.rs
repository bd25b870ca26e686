//! Clique profiles, the clique bound with its equality regularity, spread
//! validation, the five-class fission of a cover along a spread, and
//! reconciliation of the computed spectrum against closed-form templates.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bitmat::{and_popcount, BitSet};
use crate::imprimitive::{CoverError, CoverProfile};
use crate::linalg::{format_rat, Rat, RationalMatrix};
use crate::scheme::{verify_axioms, RelationPartition, SchemeCertificate, SchemeError};
use crate::spectra::{compute_spectrum, Spectrum, SpectraError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FissionError {
    #[error("subset is empty")]
    EmptySubset,
    #[error("theta = {theta} is not negative; the clique bound does not apply")]
    NonNegativeTheta { theta: String },
    #[error("subset is not a tight clique: {reason}")]
    NotTight { reason: String },
    #[error(
        "outside count for relation {relation} is not constant: \
         point {x_ref} gives {count_ref}, point {x_other} gives {count_other}"
    )]
    NotConstant {
        relation: usize,
        x_ref: usize,
        count_ref: u64,
        x_other: usize,
        count_other: u64,
    },
    #[error("regularity identity violated: {0}")]
    RegularityIdentity(String),
    #[error("block {0} realizes a relation outside {{0,2,4}}")]
    BlockNotClique(usize),
    #[error("block {0} does not attain the clique bound")]
    BlockNotTight(usize),
    #[error("blocks do not partition the point set: {0}")]
    NotAPartition(String),
    #[error("fission eigenspace {label} does not match its inherited column")]
    EigenspaceMismatch { label: usize },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

/// The relation indices realized inside `Y x Y`, sorted.
pub fn clique_profile(
    cert: &SchemeCertificate,
    subset: &[usize],
) -> Result<Vec<usize>, FissionError> {
    if subset.is_empty() {
        return Err(FissionError::EmptySubset);
    }
    let mut profile = std::collections::BTreeSet::new();
    for (i, &x) in subset.iter().enumerate() {
        for &y in &subset[i..] {
            profile.insert(cert.rel(x, y));
        }
    }
    Ok(profile.into_iter().collect())
}

/// theta = min(P[1][2], P[2][2]) and the clique bound 2(1 - P[0][2]/theta)
/// for a cover spectrum in canonical arrangement. theta must be negative.
pub fn delsarte_bound(spec: &Spectrum) -> Result<(Rat, Rat), FissionError> {
    assert!(
        spec.p.rows() >= 3,
        "clique bound needs at least three eigenspaces"
    );
    let theta = spec.p[(1, 2)].clone().min(spec.p[(2, 2)].clone());
    if theta >= Rat::zero() {
        return Err(FissionError::NonNegativeTheta {
            theta: format_rat(&theta),
        });
    }
    let two = Rat::from_integer(BigInt::from(2));
    let bound = &two * (Rat::one() - &spec.p[(0, 2)] / &theta);
    Ok((theta, bound))
}

/// Outside-regularity constants of a tight clique: how many points of `Y`
/// each outside point sees through relations 1, 2 and 3, together with the
/// quotient counts they halve to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityConstants {
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
    pub quotient_c1: u64,
    pub quotient_c2: u64,
}

/// Check that a subset attaining the clique bound is outside-regular: the
/// count |R_i(x) ∩ Y| is independent of the outside point x for i = 1, 2, 3.
/// Also verifies c1 = c3 and the halving onto the quotient counts.
pub fn verify_tight_regularity(
    profile: &CoverProfile,
    subset: &[usize],
) -> Result<RegularityConstants, FissionError> {
    if subset.is_empty() {
        return Err(FissionError::EmptySubset);
    }
    let cert = &profile.cert;
    let n = cert.n();
    let prof = clique_profile(cert, subset)?;
    if !prof.iter().all(|i| [0, 2, 4].contains(i)) {
        return Err(FissionError::NotTight {
            reason: format!("profile {prof:?} is not contained in {{0,2,4}}"),
        });
    }
    let (_, bound) = delsarte_bound(&profile.spectrum)?;
    if Rat::from_integer(BigInt::from(subset.len())) != bound {
        return Err(FissionError::NotTight {
            reason: format!("size {} != bound {}", subset.len(), format_rat(&bound)),
        });
    }
    let mask = BitSet::from_members(n, subset.iter().copied());
    for &y in subset {
        if !mask.contains(profile.phi[y]) {
            return Err(FissionError::NotTight {
                reason: format!("subset is not closed under the antipodal map at point {y}"),
            });
        }
    }

    // Quotient image of the subset.
    let qcert = &profile.quotient.cert;
    let qn = qcert.n();
    let qmask = BitSet::from_members(
        qn,
        subset.iter().map(|&y| profile.quotient.block_map[y]),
    );

    let mut constants: Option<(usize, [u64; 3])> = None;
    for x in 0..n {
        if mask.contains(x) {
            continue;
        }
        let c = [
            and_popcount(cert.adjacency(1).row(x), mask.words()),
            and_popcount(cert.adjacency(2).row(x), mask.words()),
            and_popcount(cert.adjacency(3).row(x), mask.words()),
        ];
        match &constants {
            None => constants = Some((x, c)),
            Some((x_ref, c_ref)) => {
                if let Some(i) = (0..3).find(|&i| c[i] != c_ref[i]) {
                    return Err(FissionError::NotConstant {
                        relation: i + 1,
                        x_ref: *x_ref,
                        count_ref: c_ref[i],
                        x_other: x,
                        count_other: c[i],
                    });
                }
            }
        }
        let xq = profile.quotient.block_map[x];
        let qc1 = and_popcount(qcert.adjacency(1).row(xq), qmask.words());
        let qc2 = and_popcount(qcert.adjacency(2).row(xq), qmask.words());
        if c[0] + c[2] != 2 * qc1 {
            return Err(FissionError::RegularityIdentity(format!(
                "c1 + c3 = {} does not halve to the quotient count {qc1} at point {x}",
                c[0] + c[2]
            )));
        }
        if c[1] != 2 * qc2 {
            return Err(FissionError::RegularityIdentity(format!(
                "c2 = {} does not halve to the quotient count {qc2} at point {x}",
                c[1]
            )));
        }
    }
    let (x_ref, c) = constants.ok_or_else(|| FissionError::NotTight {
        reason: "subset covers every point; no outside point exists".into(),
    })?;
    if c[0] != c[2] {
        return Err(FissionError::RegularityIdentity(format!(
            "c1 = {} != c3 = {} at point {x_ref}",
            c[0], c[2]
        )));
    }
    Ok(RegularityConstants {
        c1: c[0],
        c2: c[1],
        c3: c[2],
        quotient_c1: (c[0] + c[2]) / 2,
        quotient_c2: c[1] / 2,
    })
}

/// A partition of the points into cliques attaining the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePartition {
    /// Point -> block index.
    pub blocks: Vec<usize>,
    /// Number of blocks.
    pub f: usize,
    pub theta: Rat,
    pub bound: Rat,
}

impl CliquePartition {
    pub fn block_members(&self, b: usize) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&x| self.blocks[x] == b)
            .collect()
    }

    pub fn block_size(&self) -> usize {
        self.blocks.len() / self.f
    }
}

/// Validate a proposed spread: every block must be a clique realizing only
/// relations {0,2,4} and attaining the bound.
pub fn validate_spread(
    profile: &CoverProfile,
    blocks: &[usize],
) -> Result<CliquePartition, FissionError> {
    let cert = &profile.cert;
    let n = cert.n();
    if blocks.len() != n {
        return Err(FissionError::NotAPartition(format!(
            "{} block assignments for {n} points",
            blocks.len()
        )));
    }
    let f = blocks.iter().max().map_or(0, |&m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); f];
    for (x, &b) in blocks.iter().enumerate() {
        members[b].push(x);
    }
    if let Some(b) = members.iter().position(|m| m.is_empty()) {
        return Err(FissionError::NotAPartition(format!("block {b} is empty")));
    }
    let (theta, bound) = delsarte_bound(&profile.spectrum)?;
    for (b, ys) in members.iter().enumerate() {
        let prof = clique_profile(cert, ys)?;
        if !prof.iter().all(|i| [0, 2, 4].contains(i)) {
            return Err(FissionError::BlockNotClique(b));
        }
        if Rat::from_integer(BigInt::from(ys.len())) != bound {
            return Err(FissionError::BlockNotTight(b));
        }
    }
    Ok(CliquePartition {
        blocks: blocks.to_vec(),
        f,
        theta,
        bound,
    })
}

/// The five-class refinement of a cover along a spread: relation 2 splits
/// into its within-block part (new relation 2) and the rest (new relation
/// 5). Certified from scratch, with the spectrum presented in the inherited
/// eigenspace order.
#[derive(Debug, Clone)]
pub struct FissionScheme {
    pub refined: RelationPartition,
    pub cert: SchemeCertificate,
    /// Spectrum with eigenspaces ordered 0,1,3,4 = inherited from the cover,
    /// 5 = block projection, 2 = the remaining split of the cover's third
    /// eigenspace.
    pub spectrum: Spectrum,
    /// For eigenspace j in the order above, its column index in the
    /// canonical (Perron-first, lexicographic) order.
    pub canonical_column: [usize; 6],
}

/// Refine a cover along a validated spread and certify the result.
pub fn fission(
    profile: &CoverProfile,
    partition: &CliquePartition,
) -> Result<FissionScheme, FissionError> {
    let cert = &profile.cert;
    let n = cert.n();
    let refined = RelationPartition::from_fn(n, 5, |x, y| {
        let r = cert.rel(x, y);
        if r == 2 && partition.blocks[x] != partition.blocks[y] {
            5
        } else {
            r
        }
    });
    let fcert = verify_axioms(&refined)?;
    let canon = compute_spectrum(&fcert)?;

    // Expected second-eigenmatrix columns: eigenspaces 0,1,3,4 inherit the
    // cover's columns with the relation-2 row repeated on relation 5, and
    // the block projection has |X|/|Y| - 1 on {0,2,4} and -1 on {1,3,5}.
    let size_x = BigInt::from(n);
    let block_size = BigInt::from(partition.block_size());
    let ratio = Rat::from_integer(&size_x / &block_size) - Rat::one();
    let minus_one = -Rat::one();
    let mut expected: Vec<(usize, Vec<Rat>)> = Vec::new();
    for t in [0usize, 1, 3, 4] {
        let col: Vec<Rat> = (0..6)
            .map(|i| profile.spectrum.q[(if i == 5 { 2 } else { i }, t)].clone())
            .collect();
        expected.push((t, col));
    }
    expected.push((
        5,
        (0..6)
            .map(|i| {
                if i % 2 == 0 {
                    ratio.clone()
                } else {
                    minus_one.clone()
                }
            })
            .collect(),
    ));

    let mut canonical_column = [usize::MAX; 6];
    let mut used = [false; 6];
    for (label, col) in &expected {
        let found = (0..6).find(|&j| !used[j] && (0..6).all(|i| canon.q[(i, j)] == col[i]));
        match found {
            Some(j) => {
                canonical_column[*label] = j;
                used[j] = true;
            }
            None => return Err(FissionError::EigenspaceMismatch { label: *label }),
        }
    }
    let remaining = (0..6).find(|&j| !used[j]).expect("one column left");
    canonical_column[2] = remaining;

    let spectrum = canon.reorder_eigenspaces(&canonical_column);
    Ok(FissionScheme {
        refined,
        cert: fcert,
        spectrum,
        canonical_column,
    })
}

/// One differing cell, in the template's own coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDiff {
    pub row: usize,
    pub col: usize,
    pub computed: Rat,
    pub paper: Rat,
}

impl std::fmt::Display for CellDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CELL row={} col={} computed={} paper={}",
            self.row,
            self.col,
            format_rat(&self.computed),
            format_rat(&self.paper)
        )
    }
}

/// Best alignment of a computed matrix against a printed template, allowing
/// the 2<->5 transposition on rows and on columns (indices 0,1,3,4 are
/// pinned by the inherited eigenspaces).
#[derive(Debug, Clone)]
pub struct TemplateComparison {
    pub name: &'static str,
    pub rows_2_5_transposed: bool,
    pub cols_2_5_transposed: bool,
    pub diffs: Vec<CellDiff>,
}

impl TemplateComparison {
    pub fn exact(&self) -> bool {
        self.diffs.is_empty()
    }
}

fn swap_25(n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(2, 5);
    p
}

fn compare_against_template(
    name: &'static str,
    computed: &RationalMatrix,
    template: &RationalMatrix,
) -> TemplateComparison {
    assert_eq!(computed.rows(), template.rows());
    assert_eq!(computed.cols(), template.cols());
    let id: Vec<usize> = (0..computed.rows()).collect();
    let sw = swap_25(computed.rows());
    let mut best: Option<TemplateComparison> = None;
    for (rows_swapped, rperm) in [(false, &id), (true, &sw)] {
        for (cols_swapped, cperm) in [(false, &id), (true, &sw)] {
            let mut diffs = Vec::new();
            for i in 0..computed.rows() {
                for j in 0..computed.cols() {
                    let (ti, tj) = (rperm[i], cperm[j]);
                    if computed[(i, j)] != template[(ti, tj)] {
                        diffs.push(CellDiff {
                            row: ti,
                            col: tj,
                            computed: computed[(i, j)].clone(),
                            paper: template[(ti, tj)].clone(),
                        });
                    }
                }
            }
            diffs.sort_by_key(|d| (d.row, d.col));
            let cand = TemplateComparison {
                name,
                rows_2_5_transposed: rows_swapped,
                cols_2_5_transposed: cols_swapped,
                diffs,
            };
            if best
                .as_ref()
                .is_none_or(|b| cand.diffs.len() < b.diffs.len())
            {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// Reconciliation of the computed fission spectrum against the closed-form
/// second-eigenmatrix template, the printed power-of-two instance, and the
/// stated valency and first-eigenmatrix formulas. Mismatches are report
/// content, never errors.
#[derive(Debug, Clone)]
pub struct ReconciliationReport {
    pub q_template: TemplateComparison,
    pub printed_q: Option<TemplateComparison>,
    pub valency_diffs: Vec<CellDiff>,
    pub valency_template: Vec<Rat>,
    pub p_template: Option<TemplateComparison>,
}

fn checked_div(a: &Rat, b: &Rat) -> Option<Rat> {
    if b.is_zero() {
        None
    } else {
        Some(a / b)
    }
}

/// The closed-form second eigenmatrix of the fission in terms of the cover
/// parameters (m, r, s, n, m3, m4, alpha3, alpha4).
pub fn fission_q_template(profile: &CoverProfile) -> Option<RationalMatrix> {
    let one = Rat::one();
    let n = Rat::from_integer(BigInt::from(profile.n_quotient));
    let (m, r, s) = (&profile.m, &profile.r, &profile.s);
    let ms = checked_div(m, s)?;
    let m3 = Rat::from_integer(profile.m3.clone());
    let m4 = Rat::from_integer(profile.m4.clone());
    let m3a3 = &m3 * &profile.alpha3;
    let m4a4 = &m4 * &profile.alpha4;
    let wide = &n - m - &one + &ms;
    Some(RationalMatrix::from_rows(vec![
        vec![one.clone(), m.clone(), wide.clone(), m3.clone(), m4.clone(), -&ms],
        vec![one.clone(), r.clone(), -r, m3a3.clone(), m4a4.clone(), -&one],
        vec![one.clone(), s.clone(), -s, Rat::zero(), Rat::zero(), -&one],
        vec![one.clone(), r.clone(), -r, -&m3a3, -&m4a4, -&one],
        vec![one.clone(), m.clone(), wide, -&m3, -&m4, -&ms],
        vec![one.clone(), s.clone(), -s - &one + &ms, Rat::zero(), Rat::zero(), -&ms],
    ]))
}

/// The printed second eigenmatrix of the power-of-two instances, in terms of
/// the extension degree; `None` unless the profile matches that family.
pub fn printed_q_template(profile: &CoverProfile) -> Option<RationalMatrix> {
    let size_x = 2 * profile.n_quotient;
    if !size_x.is_power_of_two() {
        return None;
    }
    let e = size_x.trailing_zeros();
    if e.is_multiple_of(2) || e < 7 {
        return None;
    }
    let t = (e - 1) / 2; // size_x = 2^(2t+1)
    let h = BigInt::from(1u64 << (t - 1));
    let g = BigInt::from(1u64 << t.div_ceil(2));
    let full = BigInt::from(1u64 << t);
    let fm1 = &full - BigInt::one();
    let ri = Rat::from_integer;
    // Only the intended family: parameters must line up exactly.
    if profile.m != ri(&h * &fm1)
        || profile.r != ri(h.clone())
        || profile.s != ri(-h.clone())
        || profile.m3 != full
        || profile.m4 != &full * &fm1
    {
        return None;
    }
    let one = Rat::one();
    Some(RationalMatrix::from_rows(vec![
        vec![
            one.clone(),
            ri(&h * &fm1),
            ri(&h * &fm1),
            ri(full.clone()),
            ri(&full * &fm1),
            ri(fm1.clone()),
        ],
        vec![one.clone(), ri(h.clone()), ri(-&h - 1), ri(g.clone()), ri(-&g), -&one],
        vec![one.clone(), ri(-&h), ri(&h - 1), Rat::zero(), Rat::zero(), -&one],
        vec![one.clone(), ri(h.clone()), ri(-&h - 1), ri(-&g), ri(g.clone()), -&one],
        vec![
            one.clone(),
            ri(&h * &fm1),
            ri(&h * &fm1),
            ri(-&full),
            ri(-(&full * &fm1)),
            ri(fm1.clone()),
        ],
        vec![one.clone(), ri(-&h), ri(-&h), Rat::zero(), Rat::zero(), ri(fm1)],
    ]))
}

/// The stated fission valencies (1, k, 2(n-k-1)+m/s, k, 1, -m/s).
pub fn stated_valency_template(profile: &CoverProfile) -> Option<Vec<Rat>> {
    let one = Rat::one();
    let two = Rat::from_integer(BigInt::from(2));
    let n = Rat::from_integer(BigInt::from(profile.n_quotient));
    let k = Rat::from_integer(BigInt::from(profile.k));
    let ms = checked_div(&profile.m, &profile.s)?;
    Some(vec![
        one.clone(),
        k.clone(),
        &two * (&n - &k - &one) + &ms,
        k,
        one,
        -ms,
    ])
}

/// The stated fission first eigenmatrix; `None` when a denominator in the
/// formulas vanishes.
pub fn stated_p_template(profile: &CoverProfile) -> Option<RationalMatrix> {
    let one = Rat::one();
    let two = Rat::from_integer(BigInt::from(2));
    let n = Rat::from_integer(BigInt::from(profile.n_quotient));
    let k = Rat::from_integer(BigInt::from(profile.k));
    let (m, r, s) = (&profile.m, &profile.r, &profile.s);
    let alpha = &profile.alpha3;
    let ms = checked_div(m, s)?;
    let num = m + s * &two * (&n - &k - &one);
    let den2 = m * (s - &one) + s * (&n - &one);
    let p21 = checked_div(&(&k * r * s), &den2)?;
    let kr_m = checked_div(&(&k * r), m)?;
    let ks_m = checked_div(&(&k * s), m)?;
    let num_m = checked_div(&num, m)?;
    let p22 = checked_div(&(s * &num), &den2)?;
    let p25 = checked_div(&(m * (m - s * (s + &one))), &(s * &den2))?;
    let inv_alpha = checked_div(&one, alpha)?;
    let ak = alpha * &k;
    Some(RationalMatrix::from_rows(vec![
        vec![
            one.clone(),
            k.clone(),
            &two * (&n - &k - &one) + &ms,
            k.clone(),
            one.clone(),
            -&ms,
        ],
        vec![one.clone(), kr_m.clone(), num_m.clone(), kr_m, one.clone(), -&one],
        vec![one.clone(), p21.clone(), p22, p21, one.clone(), p25],
        vec![one.clone(), ak.clone(), Rat::zero(), -&ak, -&one, Rat::zero()],
        vec![one.clone(), -&inv_alpha, Rat::zero(), inv_alpha, -&one, Rat::zero()],
        vec![one.clone(), ks_m.clone(), num_m, ks_m, one, -ms],
    ]))
}

/// Compare the certified fission spectrum against every closed-form
/// statement and collect the cell-level differences.
pub fn reconcile_fission_formulas(
    fs: &FissionScheme,
    profile: &CoverProfile,
) -> ReconciliationReport {
    let q_template = match fission_q_template(profile) {
        Some(t) => compare_against_template("q-template", &fs.spectrum.q, &t),
        None => TemplateComparison {
            name: "q-template",
            rows_2_5_transposed: false,
            cols_2_5_transposed: false,
            diffs: Vec::new(),
        },
    };
    let printed_q = printed_q_template(profile)
        .map(|t| compare_against_template("printed-q", &fs.spectrum.q, &t));

    let valency_template = stated_valency_template(profile).unwrap_or_default();
    let mut valency_diffs = Vec::new();
    for (i, paper) in valency_template.iter().enumerate() {
        let computed = Rat::from_integer(BigInt::from(fs.cert.valency(i)));
        if computed != *paper {
            valency_diffs.push(CellDiff {
                row: 0,
                col: i,
                computed,
                paper: paper.clone(),
            });
        }
    }

    let p_template =
        stated_p_template(profile).map(|t| compare_against_template("p-template", &fs.spectrum.p, &t));

    ReconciliationReport {
        q_template,
        printed_q,
        valency_diffs,
        valency_template,
        p_template,
    }
}

impl std::fmt::Display for TemplateComparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "SECTION {}", self.name)?;
        let swaps = match (self.rows_2_5_transposed, self.cols_2_5_transposed) {
            (false, false) => "none".to_string(),
            (true, false) => "rows 2 5".to_string(),
            (false, true) => "cols 2 5".to_string(),
            (true, true) => "rows 2 5, cols 2 5".to_string(),
        };
        writeln!(f, "TRANSPOSED {swaps}")?;
        for d in &self.diffs {
            writeln!(f, "{d}")?;
        }
        if self.diffs.is_empty() {
            writeln!(f, "MATCH exact")
        } else {
            writeln!(f, "MISMATCHES {}", self.diffs.len())
        }
    }
}

impl std::fmt::Display for ReconciliationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.q_template)?;
        match &self.printed_q {
            Some(c) => write!(f, "{c}")?,
            None => writeln!(f, "SECTION printed-q\nNOT APPLICABLE")?,
        }
        writeln!(f, "SECTION valencies")?;
        if self.valency_template.is_empty() {
            writeln!(f, "NOT EVALUABLE")?;
        }
        for d in &self.valency_diffs {
            writeln!(f, "{d}")?;
        }
        if self.valency_diffs.is_empty() && !self.valency_template.is_empty() {
            writeln!(f, "MATCH exact")?;
        } else if !self.valency_template.is_empty() {
            writeln!(f, "MISMATCHES {}", self.valency_diffs.len())?;
        }
        match &self.p_template {
            Some(c) => write!(f, "{c}")?,
            None => writeln!(f, "SECTION p-template\nNOT EVALUABLE")?,
        }
        Ok(())
    }
}
