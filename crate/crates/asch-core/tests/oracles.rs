//! Independent oracles for the derived constants of the 128-point instance:
//! brute-force counting and algebraic identities computed away from the
//! library's own code paths, with the resulting values frozen.

mod common;

use asch_core::linalg::rat_int;
use asch_core::*;
use common::{big, int_matrix, m3, rat};
use num_bigint::BigInt;

/// Brute-force intersection numbers by classifying all 128^3 ordered
/// triples, then compare with the certificate.
#[test]
fn triple_loop_intersection_numbers() {
    let p = m3();
    let cert = &p.cert4;
    let n = cert.n();
    let w = cert.d() + 1;
    let mut triples = vec![0u64; w * w * w];
    for x in 0..n {
        for z in 0..n {
            let i = cert.rel(x, z);
            for y in 0..n {
                let j = cert.rel(z, y);
                let k = cert.rel(x, y);
                triples[(i * w + j) * w + k] += 1;
            }
        }
    }
    let class_sizes: Vec<u64> = (0..w)
        .map(|k| cert.valency(k) * n as u64)
        .collect();
    for i in 0..w {
        for j in 0..w {
            for k in 0..w {
                let total = triples[(i * w + j) * w + k];
                assert_eq!(total % class_sizes[k], 0);
                assert_eq!(
                    total / class_sizes[k],
                    cert.p(i, j, k),
                    "p[{i}][{j}]^{k}"
                );
            }
        }
    }
}

/// The first intersection matrix has characteristic polynomial with root
/// multiset {28, 4, -4, 14, -2}; the root/multiplicity pairing is
/// cross-checked by sum(m_j lambda_j) = 0 and sum(m_j lambda_j^2) = |X| k_1.
#[test]
fn quintic_of_first_intersection_matrix() {
    let p = m3();
    let b = intersection_matrices(&p.cert4);
    let roots_with_mults: [(i64, i64); 5] = [(28, 1), (4, 28), (-4, 35), (14, 8), (-2, 56)];
    let weighted: i64 = roots_with_mults.iter().map(|&(l, m)| l * m).sum();
    assert_eq!(weighted, 0);
    let weighted_sq: i64 = roots_with_mults.iter().map(|&(l, m)| l * l * m).sum();
    assert_eq!(weighted_sq, 128 * 28);

    let roots: Vec<BigInt> = roots_with_mults.iter().map(|&(l, _)| big(l)).collect();
    let expected = IntPolynomial::from_roots(&roots);
    assert_eq!(char_poly(&b[1]).unwrap(), expected);

    let mut eigs = integer_eigenvalues(&b[1]).unwrap();
    eigs.sort();
    eigs.reverse();
    assert_eq!(eigs, vec![big(28), big(14), big(4), big(-2), big(-4)]);
}

/// The last intersection matrix of the cover is the index-reversing
/// permutation matrix, and every B_i has column sums k_i.
#[test]
fn intersection_matrix_structure() {
    let p = m3();
    let b = intersection_matrices(&p.profile.cert);
    let antidiag = RationalMatrix::from_fn(5, 5, |r, c| {
        if r + c == 4 {
            rat_int(1)
        } else {
            rat_int(0)
        }
    });
    assert_eq!(b[4], antidiag);
    // Row-sum identity: sum_j p[i][j]^k = k_i for every k.
    for (i, bi) in b.iter().enumerate() {
        for k in 0..5 {
            let row_sum: Rat = (0..5).map(|j| bi[(k, j)].clone()).sum();
            assert_eq!(row_sum, rat_int(p.profile.cert.valency(i) as i64));
        }
    }
}

/// Rows of the first eigenmatrix satisfy the left-eigenrow identity
/// u B_i = P[j][i] u; frozen quotient rows verified through it.
#[test]
fn quotient_eigenmatrix_rows() {
    let p = m3();
    let qs = &p.profile.quotient;
    let expected_rows: [[i64; 3]; 3] = [[1, 28, 35], [1, 4, -5], [1, -4, 3]];
    let b = intersection_matrices(&qs.cert);
    for row in expected_rows {
        let u: Vec<Rat> = row.iter().map(|&v| rat_int(v)).collect();
        for (i, bi) in b.iter().enumerate() {
            // (u B_i)_l = P[j][i] * u_l for all l.
            for l in 0..3 {
                let lhs: Rat = (0..3).map(|k| &u[k] * &bi[(k, l)]).sum();
                assert_eq!(lhs, &u[l] * rat_int(row[i]));
            }
        }
    }
    let spec = compute_spectrum(&qs.cert).unwrap();
    assert_eq!(
        spec.p,
        int_matrix(&[&[1, 28, 35], &[1, 4, -5], &[1, -4, 3]])
    );
    assert_eq!(spec.q, spec.p);
}

/// Derive P from the frozen second eigenmatrix via the dual-eigenvalue
/// formula P[j][i] = k_i Q[i][j] / m_j, check P Q = |X| I, and compare with
/// the computed spectrum.
#[test]
fn first_eigenmatrix_from_printed_q() {
    let p = m3();
    let printed_q = int_matrix(&[
        &[1, 28, 35, 8, 56],
        &[1, 4, -5, 4, -4],
        &[1, -4, 3, 0, 0],
        &[1, 4, -5, -4, 4],
        &[1, 28, 35, -8, -56],
    ]);
    let k = [1i64, 28, 70, 28, 1];
    let m = [1i64, 28, 35, 8, 56];
    let derived_p = RationalMatrix::from_fn(5, 5, |j, i| {
        &printed_q[(i, j)] * rat(k[i], m[j])
    });
    let expected_p = int_matrix(&[
        &[1, 28, 70, 28, 1],
        &[1, 4, -10, 4, 1],
        &[1, -4, 6, -4, 1],
        &[1, 14, 0, -14, -1],
        &[1, -2, 0, 2, -1],
    ]);
    assert_eq!(derived_p, expected_p);
    assert_eq!(
        derived_p.mul(&printed_q),
        RationalMatrix::identity(5).scale(&rat_int(128))
    );
    assert_eq!(p.profile.spectrum.p, expected_p);
    assert_eq!(p.profile.spectrum.q, printed_q);
}

/// Common eigenbasis rows of the unarranged instance, as a set; the
/// eigenvectors themselves must be pairwise non-proportional.
#[test]
fn joint_eigenvalue_tuples_as_set() {
    let p = m3();
    let b = intersection_matrices(&p.cert4);
    let joint = common_eigenbasis(&b).unwrap();
    for (i, u) in joint.iter().enumerate() {
        for v in &joint[i + 1..] {
            // Vectors were scaled to leading coefficient one, so
            // proportional means equal.
            assert_ne!(u.vector, v.vector);
        }
    }
    let mut rows: Vec<Vec<BigInt>> = joint.into_iter().map(|j| j.values).collect();
    rows.sort();
    let mut expected: Vec<Vec<BigInt>> = [
        [1i64, 28, 70, 28, 1],
        [1, 4, -10, 4, 1],
        [1, -4, 6, -4, 1],
        [1, 14, 0, -14, -1],
        [1, -2, 0, 2, -1],
    ]
    .iter()
    .map(|r| r.iter().map(|&v| big(v)).collect())
    .collect();
    expected.sort();
    assert_eq!(rows, expected);
}

/// Outside-regularity constants by raw counting over the relation table:
/// every outside point sees the clique through (4, 8, 4) points of
/// relations (1, 2, 3). Cross-checked against the coset weight distribution
/// and the library's bitset computation.
#[test]
fn regularity_constants_by_raw_count() {
    let p = m3();
    let cert = &p.profile.cert;
    let block0: Vec<usize> = p.partition.block_members(0);
    let mut seen = std::collections::BTreeSet::new();
    for x in 0..cert.n() {
        if block0.contains(&x) {
            continue;
        }
        let mut c = [0u64; 6];
        for &y in &block0 {
            c[cert.rel(x, y)] += 1;
        }
        seen.insert(c);
    }
    assert_eq!(seen.len(), 1, "counts constant over all outside points");
    assert_eq!(seen.into_iter().next().unwrap(), [0, 4, 8, 4, 0, 0]);

    // Same constants as the weight distribution of a nonzero coset.
    let mut dist = std::collections::BTreeMap::new();
    for w in p.code.words().iter().filter(|w| w.b == 1) {
        *dist.entry(w.weight()).or_insert(0u64) += 1;
    }
    assert_eq!(dist, [(2, 4), (4, 8), (6, 4)].into_iter().collect());

    for b in 0..p.partition.f {
        let reg = verify_tight_regularity(&p.profile, &p.partition.block_members(b)).unwrap();
        assert_eq!((reg.c1, reg.c2, reg.c3), (4, 8, 4));
        assert_eq!((reg.quotient_c1, reg.quotient_c2), (4, 4));
    }
}

#[test]
fn clique_profiles() {
    let p = m3();
    let cert = &p.profile.cert;
    let rm = p.partition.block_members(0);
    assert_eq!(clique_profile(cert, &rm).unwrap(), vec![0, 2, 4]);
    assert_eq!(clique_profile(cert, &[7]).unwrap(), vec![0]);
    let x = 3;
    let pair = [x, p.profile.phi[x]];
    assert_eq!(clique_profile(cert, &pair).unwrap(), vec![0, 4]);
    // An antipodal pair is a clique but far from tight.
    assert!(matches!(
        verify_tight_regularity(&p.profile, &pair),
        Err(FissionError::NotTight { .. })
    ));
}

#[test]
fn clique_bound_values() {
    let p = m3();
    let (theta, bound) = delsarte_bound(&p.profile.spectrum).unwrap();
    assert_eq!(theta, rat_int(-10));
    assert_eq!(bound, rat_int(16));
}

/// The refinement identity: the split parts reassemble the original
/// relation and all other relations are untouched.
#[test]
fn fission_refinement_identity() {
    let p = m3();
    let cover = p.profile.cert.partition();
    let refined = &p.fission.refined;
    for x in 0..cover.n() {
        for y in 0..cover.n() {
            let r = cover.rel(x, y);
            let rr = refined.rel(x, y);
            if r == 2 {
                assert!(rr == 2 || rr == 5);
                assert_eq!(rr == 2, p.partition.blocks[x] == p.partition.blocks[y]);
            } else {
                assert_eq!(rr, r);
            }
        }
    }
}

/// Eigenspace inheritance: the fission's columns 0,1,3,4 equal the cover's
/// columns with the relation-2 row repeated, and the block-projection
/// column is (|X|/|Y| - 1) on {0,2,4} and -1 on {1,3,5}.
#[test]
fn fission_eigenspace_inheritance() {
    let p = m3();
    let cq = &p.profile.spectrum.q;
    let fq = &p.fission.spectrum.q;
    for t in [0usize, 1, 3, 4] {
        for i in 0..6 {
            let src = if i == 5 { 2 } else { i };
            assert_eq!(fq[(i, t)], cq[(src, t)], "column {t} row {i}");
        }
    }
    for i in 0..6 {
        let expect = if i % 2 == 0 { rat_int(7) } else { rat_int(-1) };
        assert_eq!(fq[(i, 5)], expect);
    }
    // Block projection column checked cell-wise against its matrix form
    // (1/|Y|) blockdiag(J) - (1/|X|) J on the point level.
    let n = p.fission.cert.n();
    for x in 0..n {
        for y in 0..n {
            let direct = if p.partition.blocks[x] == p.partition.blocks[y] {
                rat(1, 16) - rat(1, 128)
            } else {
                -rat(1, 128)
            };
            let by_column = &fq[(p.fission.refined.rel(x, y), 5)] * rat(1, 128);
            assert_eq!(direct, by_column);
        }
    }
    // Rank of the projection = multiplicity = f - 1; the split keeps the
    // cover's third multiplicity: m2 + m5 = 35.
    assert_eq!(p.fission.spectrum.multiplicities[5], big(7));
    assert_eq!(
        &p.fission.spectrum.multiplicities[2] + &p.fission.spectrum.multiplicities[5],
        p.profile.spectrum.multiplicities[2]
    );
}

/// Closed subsets double-checked by union-find over the point set: each
/// returned subset's relation union must split into equal blocks, and
/// non-returned subsets must not.
#[test]
fn closed_subsets_against_union_find() {
    let p = m3();
    for (cert, expected) in [
        (&p.cert4, vec![vec![0], vec![0, 4], vec![0, 1, 2, 3, 4]]),
        (
            &p.fission.cert,
            vec![
                vec![0],
                vec![0, 4],
                vec![0, 2, 4],
                vec![0, 1, 2, 3, 4, 5],
            ],
        ),
    ] {
        let closed = find_closed_subsets(cert);
        assert_eq!(closed, expected);
        let n = cert.n();
        for mask in 0u32..(1 << cert.d()) {
            let subset: Vec<usize> = std::iter::once(0)
                .chain((1..=cert.d()).filter(|&i| mask >> (i - 1) & 1 == 1))
                .collect();
            // Raw union-find on the point set.
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(parent: &mut Vec<usize>, x: usize) -> usize {
                if parent[x] != x {
                    let r = find(parent, parent[x]);
                    parent[x] = r;
                }
                parent[x]
            }
            for x in 0..n {
                for y in x + 1..n {
                    if subset.contains(&cert.rel(x, y)) {
                        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                        if rx != ry {
                            parent[rx] = ry;
                        }
                    }
                }
            }
            let mut sizes = std::collections::BTreeMap::new();
            for x in 0..n {
                *sizes.entry(find(&mut parent, x)).or_insert(0usize) += 1;
            }
            // The union is an equivalence relation exactly when every block
            // size equals sum of the subset valencies.
            let expected_size: u64 = subset.iter().map(|&i| cert.valency(i)).sum();
            let is_equivalence = sizes.values().all(|&s| s as u64 == expected_size);
            assert_eq!(
                is_equivalence,
                closed.contains(&subset),
                "subset {subset:?}"
            );
        }
    }
}

/// Adding a fixed codeword to every point permutes the points without
/// changing any relation.
#[test]
fn translation_invariance() {
    let p = m3();
    let code = &p.code;
    let index_of: std::collections::HashMap<&[u64], usize> = code
        .words()
        .iter()
        .enumerate()
        .map(|(i, w)| (w.bits(), i))
        .collect();
    let t = code.word(37);
    let perm: Vec<usize> = code
        .words()
        .iter()
        .map(|w| {
            let sum: Vec<u64> = w.bits().iter().zip(t.bits()).map(|(a, b)| a ^ b).collect();
            index_of[sum.as_slice()]
        })
        .collect();
    let rp = p.cert4.partition();
    assert_eq!(&rp.permute_points(&perm), rp);
}

/// The base strongly regular quotient is primitive: only the trivial and
/// the full subset are closed.
#[test]
fn primitive_quotient_closed_subsets() {
    let p = m3();
    assert_eq!(
        find_closed_subsets(&p.profile.quotient.cert),
        vec![vec![0], vec![0, 1, 2]]
    );
}

/// Quotients of the fission: by {0,4} a 3-class scheme on 64 points, by
/// {0,2,4} the 1-class scheme on the 8 blocks.
#[test]
fn fission_quotients() {
    let p = m3();
    let q1 = quotient_scheme(&p.fission.cert, &[0, 4]).unwrap();
    assert_eq!((q1.quotient.n(), q1.quotient.d()), (64, 3));
    let q2 = quotient_scheme(&p.fission.cert, &[0, 2, 4]).unwrap();
    assert_eq!((q2.quotient.n(), q2.quotient.d()), (8, 1));
    assert_eq!(q2.cert.valencies(), &[1, 7]);
}

/// The antipodal map of the instance is complementation: relation-preserving
/// checks plus the label structure (partner differs only in the affine bit).
#[test]
fn antipodal_map_is_complementation() {
    let p = m3();
    let report = antipodal_action(&p.profile);
    assert!(report.is_ok());
    for (x, &px) in p.profile.phi.iter().enumerate() {
        assert_eq!(px, x ^ 1);
        let (wx, wp) = (p.code.word(x), p.code.word(px));
        assert_eq!((wx.a, wx.b, 1 - wx.eps), (wp.a, wp.b, wp.eps));
    }
    // A corrupted involution gets witnessed.
    let mut broken = p.profile.clone();
    broken.phi.swap(0, 2);
    let report = antipodal_action(&broken);
    assert!(!report.is_ok());
    assert!(report
        .relation_violations
        .iter()
        .any(|&(i, _)| i == 0 || i == 4));
}

#[test]
fn spread_negatives() {
    let p = m3();
    let n = p.profile.cert.n();
    // Halving every block: sizes 8 != 16.
    let halved: Vec<usize> = (0..n)
        .map(|x| p.partition.blocks[x] * 2 + usize::from(x % 16 >= 8))
        .collect();
    assert!(matches!(
        validate_spread(&p.profile, &halved),
        Err(FissionError::BlockNotTight(_) | FissionError::BlockNotClique(_))
    ));
    // Swapping two points across cosets mixes blocks.
    let mut mixed = p.partition.blocks.clone();
    mixed.swap(0, 17);
    assert!(matches!(
        validate_spread(&p.profile, &mixed),
        Err(FissionError::BlockNotClique(_))
    ));
    // Invalid partitions never reach the refinement.
    let bad = CliquePartition {
        blocks: vec![0; n],
        f: 1,
        theta: p.partition.theta.clone(),
        bound: p.partition.bound.clone(),
    };
    assert!(fission(&p.profile, &bad).is_err());
}

/// Gram data of the small antipodal eigenspace and failure of the large one.
#[test]
fn gram_block_values() {
    let p = m3();
    let gram = gram_blocks(&p.fission, 3, &p.partition).unwrap();
    let expected: Vec<Rat> = [
        rat(1, 1),
        rat(1, 2),
        rat(0, 1),
        rat(-1, 2),
        rat(-1, 1),
        rat(0, 1),
    ]
    .to_vec();
    assert_eq!(gram.gram_by_relation, expected);
    assert_eq!(gram.alpha, rat(1, 2));
    assert_eq!((gram.dim, gram.f), (8, 8));
    for a in 0..gram.f {
        assert_eq!(gram.block(a, a), RationalMatrix::identity(8));
    }
    // Gram symmetry across an ordered pair.
    assert_eq!(gram.block(2, 5), gram.block(5, 2).transpose());
    assert!(matches!(
        gram_blocks(&p.fission, 4, &p.partition),
        Err(MuwmError::MultiplicityMismatch { .. })
    ));
}

/// Pairwise products of family members: W_ab W_cb^T = 2 W_ac, and the self
/// product is the weight times the identity.
#[test]
fn unbiasedness_products() {
    let p = m3();
    let gram = gram_blocks(&p.fission, 3, &p.partition).unwrap();
    let fam = extract_weighing_family(&gram).unwrap();
    assert_eq!(fam.weight, 4);
    let cert = verify_unbiased(&fam).unwrap();
    assert_eq!(cert.ordered_pairs, 56);
    assert_eq!(cert.references_per_pair, 6);

    // Spot-check one product in rational arithmetic.
    let (a, c, b) = (1, 4, 6);
    let to_rat = |m: &muwm::SignMatrix| {
        RationalMatrix::from_fn(8, 8, |r, s| rat_int(m.entry(r, s)))
    };
    let prod = to_rat(fam.block(a, b)).mul(&to_rat(fam.block(c, b)).transpose());
    assert_eq!(prod, to_rat(fam.block(a, c)).scale(&rat_int(2)));
    let self_prod = to_rat(fam.block(a, b)).mul(&to_rat(fam.block(a, b)).transpose());
    assert_eq!(self_prod, RationalMatrix::identity(8).scale(&rat_int(4)));

    // A single flipped sign on a nonzero entry is caught.
    let mut corrupted = fam.clone();
    let col = (0..8)
        .find(|&c| corrupted.block(1, 0).entry(3, c) != 0)
        .unwrap();
    corrupted.flip_sign(1, 0, 3, col);
    assert!(matches!(
        verify_unbiased(&corrupted),
        Err(MuwmError::WeighingViolation { .. } | MuwmError::UnbiasednessViolation { .. })
    ));
}

/// The full-scheme angle set {0, -1, +-alpha} and the bound report readings.
#[test]
fn muwm_bound_readings() {
    let p = m3();
    let report = muwm_bound(&p.fission, &p.profile);
    assert_eq!(report.within_sum, 16);
    assert!(report.within_equality);
    assert_eq!(report.literal_sum, 58);
    assert!(!report.literal_equality);
    assert_eq!(report.rhs, big(16));
    assert_eq!(report.stated_size, Some(rat(7, 2)));
    let (size, weight) = muwm::stated_parameters(&p.profile, &rat(1, 2));
    assert_eq!(size, Some(rat(7, 2)));
    assert_eq!(weight, Some(rat_int(2)));
}
