//! Gram-level extraction of weighing matrices from the antipodal eigenspaces
//! of a fission scheme, and exact verification of mutual unbiasedness.
//!
//! No real-valued embedding is ever materialized: a clique's representatives
//! form an orthonormal basis of the eigenspace, so every product of family
//! members is computable from Gram blocks alone, in exact arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::fission::{CliquePartition, FissionScheme};
use crate::imprimitive::CoverProfile;
use crate::linalg::{format_rat, Rat, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MuwmError {
    #[error(
        "eigenspace {eigenindex} has multiplicity {multiplicity}, but cross-polytope \
         decomposition needs twice the multiplicity to equal the clique size {clique_size}"
    )]
    MultiplicityMismatch {
        eigenindex: usize,
        multiplicity: BigInt,
        clique_size: usize,
    },
    #[error("unit Gram value {value} at relation {relation} breaks the angle set {{0,-1,+-alpha}}")]
    AngleSetViolation { relation: usize, value: String },
    #[error("cross-clique Gram entry at block ({},{}) cell ({},{}) is {value}, not in {{0,+-alpha}}", block.0, block.1, cell.0, cell.1)]
    NonConstantAngle {
        block: (usize, usize),
        cell: (usize, usize),
        value: String,
    },
    #[error("weight 1/alpha^2 = {value} is not a positive integer")]
    NonIntegralWeight { value: String },
    #[error("W[{a}][{b}] fails the weighing property at cell ({},{})", cell.0, cell.1)]
    WeighingViolation {
        a: usize,
        b: usize,
        cell: (usize, usize),
    },
    #[error(
        "unbiasedness fails for cliques ({a},{c}) through reference {reference} at cell ({},{})",
        cell.0, cell.1
    )]
    UnbiasednessViolation {
        a: usize,
        c: usize,
        reference: usize,
        cell: (usize, usize),
    },
    #[error("bad representative selection: {0}")]
    BadRepresentatives(String),
}

/// Comparison of the clique size against twice the antipodal multiplicities,
/// under both readings of the third valency summand.
#[derive(Debug, Clone)]
pub struct MuwmBoundReport {
    /// k0 + k4 + (within-clique valency of the split relation).
    pub within_sum: u64,
    /// k0 + k4 + (valency of the cross-clique relation 5).
    pub literal_sum: u64,
    /// min(2 m3, 2 m4).
    pub rhs: BigInt,
    pub within_equality: bool,
    pub literal_equality: bool,
    /// Closed-form size -m/(2s) as stated, next to the computed dimension.
    pub stated_size: Option<Rat>,
    pub computed_size: u64,
}

impl std::fmt::Display for MuwmBoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "BOUND within-clique reading: {} <= {} [{}]",
            self.within_sum,
            self.rhs,
            if self.within_equality { "equality" } else { "strict" }
        )?;
        writeln!(
            f,
            "BOUND literal reading: {} <= {} [{}]",
            self.literal_sum,
            self.rhs,
            if self.literal_equality {
                "equality"
            } else if BigInt::from(self.literal_sum) <= self.rhs {
                "strict"
            } else {
                "VIOLATED: inconsistent reading"
            }
        )?;
        match &self.stated_size {
            Some(s) => writeln!(
                f,
                "SIZE computed={} stated=-m/(2s)={}",
                self.computed_size,
                format_rat(s)
            ),
            None => writeln!(f, "SIZE computed={}", self.computed_size),
        }
    }
}

/// Evaluate the multiplicity bound for a fission scheme, reporting both the
/// within-clique reading (whose equality case feeds the extraction) and the
/// literal cross-clique reading.
pub fn muwm_bound(fs: &FissionScheme, profile: &CoverProfile) -> MuwmBoundReport {
    let k = fs.cert.valencies();
    let within_sum = k[0] + k[4] + k[2];
    let literal_sum = k[0] + k[4] + k[5];
    let rhs = (BigInt::from(2) * &profile.m3).min(BigInt::from(2) * &profile.m4);
    let two_s = Rat::from_integer(BigInt::from(2)) * &profile.s;
    let stated_size = if two_s.is_zero() {
        None
    } else {
        Some(-(&profile.m / two_s))
    };
    MuwmBoundReport {
        within_sum,
        literal_sum,
        within_equality: BigInt::from(within_sum) == rhs,
        literal_equality: BigInt::from(literal_sum) == rhs,
        rhs,
        stated_size,
        computed_size: within_sum / 2,
    }
}

/// Closed-form (size, weight) expressions (-m/(2s), 1/alpha) next to which
/// the computed values are reported.
pub fn stated_parameters(profile: &CoverProfile, alpha: &Rat) -> (Option<Rat>, Option<Rat>) {
    let two_s = Rat::from_integer(BigInt::from(2)) * &profile.s;
    let size = if two_s.is_zero() {
        None
    } else {
        Some(-(&profile.m / two_s))
    };
    let weight = if alpha.is_zero() {
        None
    } else {
        Some(Rat::one() / alpha)
    };
    (size, weight)
}

/// Per-clique representative Gram data for one antipodal eigenspace: one
/// point from each antipodal pair, the unit Gram value of every relation,
/// and the relation table restricted to representatives.
#[derive(Debug, Clone)]
pub struct GramBlocks {
    pub eigenindex: usize,
    /// Representatives per clique = clique size / 2 = the multiplicity.
    pub dim: usize,
    pub f: usize,
    /// The off-clique angle: unit Gram value of relation 1.
    pub alpha: Rat,
    /// Unit Gram value per relation index.
    pub gram_by_relation: Vec<Rat>,
    /// Chosen representatives, one sorted list per clique.
    pub reps: Vec<Vec<usize>>,
    rel_between_reps: Vec<u8>,
}

impl GramBlocks {
    fn flat(&self, a: usize, u: usize) -> usize {
        a * self.dim + u
    }

    pub fn rel_between(&self, a: usize, u: usize, b: usize, v: usize) -> usize {
        self.rel_between_reps[self.flat(a, u) * (self.f * self.dim) + self.flat(b, v)] as usize
    }

    /// Materialize the Gram block of an ordered clique pair.
    pub fn block(&self, a: usize, b: usize) -> RationalMatrix {
        RationalMatrix::from_fn(self.dim, self.dim, |u, v| {
            self.gram_by_relation[self.rel_between(a, u, b, v)].clone()
        })
    }
}

/// Build the Gram blocks for eigenspace 3 or 4, with the representative of
/// each antipodal pair chosen as the lexicographically smaller point.
pub fn gram_blocks(
    fs: &FissionScheme,
    eigenindex: usize,
    partition: &CliquePartition,
) -> Result<GramBlocks, MuwmError> {
    gram_blocks_with_flips(fs, eigenindex, partition, None)
}

/// As [`gram_blocks`], but `flips[p] = true` selects the larger point of the
/// p-th antipodal pair (pairs ordered by their smaller point within each
/// clique, cliques in order). The certificates must be invariant under any
/// such choice.
pub fn gram_blocks_with_flips(
    fs: &FissionScheme,
    eigenindex: usize,
    partition: &CliquePartition,
    flips: Option<&[bool]>,
) -> Result<GramBlocks, MuwmError> {
    assert!(
        eigenindex == 3 || eigenindex == 4,
        "antipodal eigenspaces are 3 and 4"
    );
    let clique_size = partition.block_size();
    let m_e = fs.spectrum.multiplicities[eigenindex].clone();
    if BigInt::from(2) * &m_e != BigInt::from(clique_size) {
        return Err(MuwmError::MultiplicityMismatch {
            eigenindex,
            multiplicity: m_e,
            clique_size,
        });
    }
    let m_e = Rat::from_integer(m_e);
    let gram_by_relation: Vec<Rat> = (0..6)
        .map(|i| &fs.spectrum.q[(i, eigenindex)] / &m_e)
        .collect();

    // The full angle set over X must be {1 (self), alpha, 0, -alpha, -1
    // (antipode), 0} over relations 0..5.
    let alpha = gram_by_relation[1].clone();
    let pattern_ok = gram_by_relation[0].is_one()
        && gram_by_relation[4] == -Rat::one()
        && gram_by_relation[2].is_zero()
        && gram_by_relation[5].is_zero()
        && gram_by_relation[3] == -&alpha
        && !alpha.is_zero()
        && alpha.clone().abs() != Rat::one();
    if !pattern_ok {
        let relation = (0..6)
            .find(|&i| {
                let v = &gram_by_relation[i];
                match i {
                    0 => !v.is_one(),
                    4 => *v != -Rat::one(),
                    2 | 5 => !v.is_zero(),
                    1 => v.is_zero() || v.clone().abs() == Rat::one(),
                    _ => *v != -&alpha,
                }
            })
            .unwrap_or(1);
        return Err(MuwmError::AngleSetViolation {
            relation,
            value: format_rat(&gram_by_relation[relation]),
        });
    }

    // Antipodal partner of each point through the valency-one relation.
    let n = fs.cert.n();
    let mut partner = vec![usize::MAX; n];
    for (x, slot) in partner.iter_mut().enumerate() {
        *slot = (0..n)
            .find(|&y| y != x && fs.cert.rel(x, y) == 4)
            .expect("valency-one relation pairs every point");
    }

    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); partition.f];
    let mut pair_index = 0usize;
    for (b, bucket) in reps.iter_mut().enumerate() {
        for (x, &p) in partner.iter().enumerate() {
            if partition.blocks[x] != b || x > p {
                continue;
            }
            if partition.blocks[p] != b {
                return Err(MuwmError::BadRepresentatives(format!(
                    "antipodal pair ({x},{p}) straddles blocks"
                )));
            }
            let take_larger = flips.is_some_and(|fl| {
                *fl.get(pair_index).unwrap_or(&false)
            });
            bucket.push(if take_larger { p } else { x });
            pair_index += 1;
        }
        bucket.sort_unstable();
        if bucket.len() != clique_size / 2 {
            return Err(MuwmError::BadRepresentatives(format!(
                "clique {b} yields {} representatives, expected {}",
                bucket.len(),
                clique_size / 2
            )));
        }
    }
    if let Some(fl) = flips {
        if fl.len() != pair_index {
            return Err(MuwmError::BadRepresentatives(format!(
                "{} flips supplied for {pair_index} antipodal pairs",
                fl.len()
            )));
        }
    }

    let dim = clique_size / 2;
    let total = partition.f * dim;
    let flat: Vec<usize> = reps.iter().flatten().copied().collect();
    let mut rel_between_reps = vec![0u8; total * total];
    for i in 0..total {
        for j in 0..total {
            rel_between_reps[i * total + j] = fs.cert.rel(flat[i], flat[j]) as u8;
        }
    }

    let gb = GramBlocks {
        eigenindex,
        dim,
        f: partition.f,
        alpha,
        gram_by_relation,
        reps,
        rel_between_reps,
    };

    // Structural checks: within-clique representative Grams are identity;
    // cross-clique entries only see relations with values in {0, +-alpha}.
    for a in 0..gb.f {
        for u in 0..dim {
            for v in 0..dim {
                let r = gb.rel_between(a, u, a, v);
                let ok = if u == v { r == 0 } else { r == 2 };
                if !ok {
                    return Err(MuwmError::NonConstantAngle {
                        block: (a, a),
                        cell: (u, v),
                        value: format_rat(&gb.gram_by_relation[r]),
                    });
                }
            }
        }
        for b in 0..gb.f {
            if a == b {
                continue;
            }
            for u in 0..dim {
                for v in 0..dim {
                    let r = gb.rel_between(a, u, b, v);
                    if !matches!(r, 1 | 3 | 5) {
                        return Err(MuwmError::NonConstantAngle {
                            block: (a, b),
                            cell: (u, v),
                            value: format_rat(&gb.gram_by_relation[r]),
                        });
                    }
                }
            }
        }
    }
    Ok(gb)
}

/// A square matrix with entries in {-1, 0, 1}, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl SignMatrix {
    fn identity(dim: usize) -> Self {
        let mut data = vec![0i64; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        SignMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.dim + c]
    }

    /// self * other^T in machine integers (entries stay far below overflow).
    fn mul_transpose(&self, other: &SignMatrix) -> Vec<i64> {
        let d = self.dim;
        let mut out = vec![0i64; d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = 0i64;
                for k in 0..d {
                    acc += self.data[r * d + k] * other.data[c * d + k];
                }
                out[r * d + c] = acc;
            }
        }
        out
    }
}

/// The extracted family: for every ordered clique pair (a,b) with a != b,
/// the {0,+-1} matrix (1/alpha) G_ab of weight 1/alpha^2; the diagonal
/// blocks are identities.
#[derive(Debug, Clone)]
pub struct WeighingFamily {
    pub dim: usize,
    pub f: usize,
    pub alpha: Rat,
    pub weight: u64,
    pub reps: Vec<Vec<usize>>,
    grid: Vec<SignMatrix>,
}

impl WeighingFamily {
    pub fn block(&self, a: usize, b: usize) -> &SignMatrix {
        &self.grid[a * self.f + b]
    }

    /// Negate one entry. Fault injection for exercising the certificate
    /// checks; a verified family never round-trips through this.
    pub fn flip_sign(&mut self, a: usize, b: usize, r: usize, c: usize) {
        let dim = self.dim;
        self.grid[a * self.f + b].data[r * dim + c] *= -1;
    }
}

/// Scale the cross-clique Gram blocks by 1/alpha and certify the weighing
/// property W W^T = W^T W = (1/alpha^2) I for every ordered pair.
pub fn extract_weighing_family(gram: &GramBlocks) -> Result<WeighingFamily, MuwmError> {
    let w_rat = Rat::one() / (&gram.alpha * &gram.alpha);
    if !w_rat.is_integer() || !w_rat.numer().is_positive() {
        return Err(MuwmError::NonIntegralWeight {
            value: format_rat(&w_rat),
        });
    }
    let weight = w_rat.to_integer().to_u64().ok_or(MuwmError::NonIntegralWeight {
        value: format_rat(&w_rat),
    })?;

    // Entry of W by relation index: (gram value) / alpha, required in
    // {-1, 0, 1}.
    let mut entry_by_relation = [0i64; 6];
    for (slot, value) in entry_by_relation.iter_mut().zip(&gram.gram_by_relation) {
        let scaled = value / &gram.alpha;
        *slot = if scaled.is_zero() {
            0
        } else if scaled.is_one() {
            1
        } else if scaled == -Rat::one() {
            -1
        } else {
            // Within-clique relations never reach cross blocks; mark them
            // with a sentinel outside {-1,0,1} so misuse is caught below.
            i64::MAX
        };
    }

    let (f, dim) = (gram.f, gram.dim);
    let mut grid = Vec::with_capacity(f * f);
    for a in 0..f {
        for b in 0..f {
            if a == b {
                grid.push(SignMatrix::identity(dim));
                continue;
            }
            let mut data = vec![0i64; dim * dim];
            for u in 0..dim {
                for v in 0..dim {
                    let r = gram.rel_between(a, u, b, v);
                    let e = entry_by_relation[r];
                    if e.abs() > 1 {
                        return Err(MuwmError::NonConstantAngle {
                            block: (a, b),
                            cell: (u, v),
                            value: format_rat(&gram.gram_by_relation[r]),
                        });
                    }
                    data[u * dim + v] = e;
                }
            }
            grid.push(SignMatrix { dim, data });
        }
    }

    let fam = WeighingFamily {
        dim,
        f,
        alpha: gram.alpha.clone(),
        weight,
        reps: gram.reps.clone(),
        grid,
    };

    // Weighing property for every off-diagonal block, both sides.
    for a in 0..f {
        for b in 0..f {
            if a == b {
                continue;
            }
            let wm = fam.block(a, b);
            let prod = wm.mul_transpose(wm);
            for r in 0..dim {
                for c in 0..dim {
                    let expect = if r == c { weight as i64 } else { 0 };
                    if prod[r * dim + c] != expect {
                        return Err(MuwmError::WeighingViolation { a, b, cell: (r, c) });
                    }
                }
            }
            for r in 0..dim {
                let nonzero = (0..dim).filter(|&c| wm.entry(r, c) != 0).count() as u64;
                let col_nonzero = (0..dim).filter(|&c| wm.entry(c, r) != 0).count() as u64;
                if nonzero != weight || col_nonzero != weight {
                    return Err(MuwmError::WeighingViolation { a, b, cell: (r, r) });
                }
            }
        }
    }
    Ok(fam)
}

/// Certificate of completed unbiasedness checks: every ordered clique pair
/// (a,c) verified through every reference clique b outside {a,c}, plus the
/// self products W W^T = w I.
#[derive(Debug, Clone)]
pub struct UnbiasednessCertificate {
    pub ordered_pairs: usize,
    pub references_per_pair: usize,
    pub self_checks: usize,
}

impl std::fmt::Display for UnbiasednessCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "UNBIASED: {}/{} ordered pairs OK",
            self.ordered_pairs, self.ordered_pairs
        )
    }
}

/// Verify W_ab W_cb^T = (1/alpha) W_ac for all distinct cliques a, c and
/// every reference b outside {a, c}: the product of two family members
/// sharing a reference is sqrt(weight) times the {0,+-1} matrix of the pair.
pub fn verify_unbiased(fam: &WeighingFamily) -> Result<UnbiasednessCertificate, MuwmError> {
    // 1/alpha is rational; write alpha = p/q, then the check is
    // p * (W_ab W_cb^T) == q * W_ac in machine integers.
    let p = fam
        .alpha
        .numer()
        .to_i64()
        .expect("angle numerator fits machine word");
    let q = fam
        .alpha
        .denom()
        .to_i64()
        .expect("angle denominator fits machine word");

    let f = fam.f;
    let dim = fam.dim;
    let mut self_checks = 0;
    for a in 0..f {
        for b in 0..f {
            if a == b {
                continue;
            }
            let prod = fam.block(a, b).mul_transpose(fam.block(a, b));
            for r in 0..dim {
                for c in 0..dim {
                    let expect = if r == c { fam.weight as i64 } else { 0 };
                    if prod[r * dim + c] != expect {
                        return Err(MuwmError::WeighingViolation { a, b, cell: (r, c) });
                    }
                }
            }
            self_checks += 1;
        }
    }

    let mut ordered_pairs = 0;
    for a in 0..f {
        for c in 0..f {
            if a == c {
                continue;
            }
            for b in 0..f {
                if b == a || b == c {
                    continue;
                }
                let prod = fam.block(a, b).mul_transpose(fam.block(c, b));
                let target = fam.block(a, c);
                for r in 0..dim {
                    for s in 0..dim {
                        if p * prod[r * dim + s] != q * target.entry(r, s) {
                            return Err(MuwmError::UnbiasednessViolation {
                                a,
                                c,
                                reference: b,
                                cell: (r, s),
                            });
                        }
                    }
                }
            }
            ordered_pairs += 1;
        }
    }
    Ok(UnbiasednessCertificate {
        ordered_pairs,
        references_per_pair: f.saturating_sub(2),
        self_checks,
    })
}
