//! GF(2^m) arithmetic and the four-weight code family built from traces of
//! `a*x + b*x^3`, together with its distance scheme and the coset spread by
//! the first-order Reed-Muller subcode.

use std::collections::{BTreeMap, HashSet};

use crate::scheme::{RelationPartition, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GoldError {
    #[error("extension degree m={0} must be odd")]
    EvenDegree(u32),
    #[error("extension degree m={0} is outside the supported range 3..=15")]
    UnsupportedDegree(u32),
    #[error("code fails its own weight spectrum check: weight {weight} with count {count} is not allowed")]
    WeightSpectrumViolation { weight: u64, count: u64 },
    #[error("codeword collision: expected {expected} distinct words, found {found}")]
    CodeSizeViolation { expected: u64, found: u64 },
    #[error("unexpected distance {dist} between codewords {x} and {y}")]
    UnexpectedDistance { x: usize, y: usize, dist: u64 },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Fixed modulus per extension degree, so emitted files are reproducible.
/// Index = m; value = polynomial bitmask including the leading term.
const MODULI: [(u32, u32); 7] = [
    (3, 0b1011),               // x^3 + x + 1
    (5, 0b100101),             // x^5 + x^2 + 1
    (7, 0b10000011),           // x^7 + x + 1
    (9, 0b1000010001),         // x^9 + x^4 + 1
    (11, 0b100000000101),      // x^11 + x^2 + 1
    (13, 0b10000000011011),    // x^13 + x^4 + x^3 + x + 1
    (15, 0b1000000000000011),  // x^15 + x + 1
];

/// GF(2^m) in polynomial basis, elements packed into the low m bits of u16.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryField {
    m: u32,
    modulus: u32,
}

/// Remainder of GF(2)[x] division, both polynomials as bitmasks.
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = 31 - b.leading_zeros();
    while a != 0 {
        let da = 31 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

impl BinaryField {
    pub fn new(m: u32) -> Result<Self, GoldError> {
        if !(3..=15).contains(&m) {
            return Err(GoldError::UnsupportedDegree(m));
        }
        if m.is_multiple_of(2) {
            return Err(GoldError::EvenDegree(m));
        }
        let modulus = MODULI
            .iter()
            .find(|&&(deg, _)| deg == m)
            .map(|&(_, p)| p)
            .expect("odd degree in range has a table entry");
        // Irreducibility self-check: no factor of degree 1..=m/2.
        for g in 2u32..(1 << (m / 2 + 1)) {
            if poly_rem(modulus, g) == 0 {
                panic!("modulus table entry for m={m} is reducible");
            }
        }
        Ok(BinaryField { m, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        1 << self.m
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        let mut acc: u32 = 0;
        let a = a as u32;
        for i in 0..self.m {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        for bit in (self.m..2 * self.m).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= self.modulus << (bit - self.m);
            }
        }
        acc as u16
    }

    pub fn cube(&self, a: u16) -> u16 {
        self.mul(a, self.mul(a, a))
    }

    /// Absolute trace to GF(2): sum of the m conjugates.
    pub fn trace(&self, a: u16) -> u8 {
        let mut t = a;
        let mut s = a;
        for _ in 1..self.m {
            s = self.mul(s, s);
            t ^= s;
        }
        debug_assert!(t <= 1, "trace lands in the prime field");
        t as u8
    }
}

/// One codeword: the coefficient labels and the packed coordinate bits
/// (coordinate x = value at the field element with encoding x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeWord {
    pub a: u16,
    pub b: u16,
    pub eps: u8,
    bits: Vec<u64>,
}

impl CodeWord {
    pub fn bit(&self, i: usize) -> bool {
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn weight(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn to_bit_string(&self, len: usize) -> String {
        (0..len).map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }
}

/// The length-2^m code {Tr(a x + b x^3) + eps}, ordered by (b, a, eps).
///
/// The (b, a, eps) order groups each Reed-Muller coset (fixed b) into one
/// contiguous block and puts complementary words at adjacent indices.
#[derive(Debug, Clone)]
pub struct GoldCode {
    pub field: BinaryField,
    words: Vec<CodeWord>,
    weight_counts: BTreeMap<u64, u64>,
}

pub fn hamming_distance(u: &CodeWord, v: &CodeWord) -> u64 {
    u.bits
        .iter()
        .zip(&v.bits)
        .map(|(x, y)| (x ^ y).count_ones() as u64)
        .sum()
}

/// Build the code by full enumeration and run its structural self-checks:
/// distinct-word count 2^(2m+1), all-ones membership, and the four-weight
/// spectrum.
pub fn build_gold_code(m: u32) -> Result<GoldCode, GoldError> {
    let field = BinaryField::new(m)?;
    let n_coords = field.order();
    let words_per_row = n_coords.div_ceil(64);

    // Linearity in (a, b, eps) lets every word be assembled from the
    // single-generator rows Tr(a x) and Tr(b x^3).
    let cubes: Vec<u16> = (0..n_coords).map(|x| field.cube(x as u16)).collect();
    let mut lin_rows = Vec::with_capacity(n_coords);
    let mut cubic_rows = Vec::with_capacity(n_coords);
    for c in 0..n_coords {
        let mut lin = vec![0u64; words_per_row];
        let mut cubic = vec![0u64; words_per_row];
        for x in 0..n_coords {
            if field.trace(field.mul(c as u16, x as u16)) == 1 {
                lin[x >> 6] |= 1 << (x & 63);
            }
            if field.trace(field.mul(c as u16, cubes[x])) == 1 {
                cubic[x >> 6] |= 1 << (x & 63);
            }
        }
        lin_rows.push(lin);
        cubic_rows.push(cubic);
    }
    let mut ones = vec![u64::MAX; words_per_row];
    if n_coords % 64 != 0 {
        *ones.last_mut().unwrap() = (1u64 << (n_coords % 64)) - 1;
    }

    let mut words = Vec::with_capacity(2 * n_coords * n_coords);
    for (b, cubic) in cubic_rows.iter().enumerate() {
        for (a, lin) in lin_rows.iter().enumerate() {
            for eps in 0..2u8 {
                let mut bits: Vec<u64> = lin
                    .iter()
                    .zip(cubic)
                    .map(|(x, y)| x ^ y)
                    .collect();
                if eps == 1 {
                    for (w, o) in bits.iter_mut().zip(&ones) {
                        *w ^= o;
                    }
                }
                words.push(CodeWord {
                    a: a as u16,
                    b: b as u16,
                    eps,
                    bits,
                });
            }
        }
    }

    let expected = 2 * (n_coords as u64) * (n_coords as u64);
    let distinct: HashSet<&[u64]> = words.iter().map(|w| w.bits.as_slice()).collect();
    if distinct.len() as u64 != expected {
        return Err(GoldError::CodeSizeViolation {
            expected,
            found: distinct.len() as u64,
        });
    }
    debug_assert_eq!(words[1].bits, ones, "word (a,b,eps)=(0,0,1) is all-ones");

    let mut weight_counts = BTreeMap::new();
    for w in &words {
        *weight_counts.entry(w.weight()).or_insert(0u64) += 1;
    }
    let allowed = distance_classes(m);
    for (&weight, &count) in &weight_counts {
        if !allowed.contains(&weight) {
            return Err(GoldError::WeightSpectrumViolation { weight, count });
        }
    }

    Ok(GoldCode {
        field,
        words,
        weight_counts,
    })
}

/// The five admissible distances in increasing order:
/// 0, 2^(m-1) - 2^((m-1)/2), 2^(m-1), 2^(m-1) + 2^((m-1)/2), 2^m.
pub fn distance_classes(m: u32) -> [u64; 5] {
    let half = 1u64 << (m - 1);
    let gap = 1u64 << ((m - 1) / 2);
    [0, half - gap, half, half + gap, 1 << m]
}

impl GoldCode {
    pub fn m(&self) -> u32 {
        self.field.degree()
    }

    /// Number of codewords = number of scheme points.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Codeword length 2^m.
    pub fn word_length(&self) -> usize {
        self.field.order()
    }

    pub fn word(&self, i: usize) -> &CodeWord {
        &self.words[i]
    }

    pub fn words(&self) -> &[CodeWord] {
        &self.words
    }

    /// Reed-Muller coset label of a codeword (the cubic coefficient b).
    pub fn coset_of(&self, i: usize) -> u16 {
        self.words[i].b
    }

    pub fn weight_counts(&self) -> &BTreeMap<u64, u64> {
        &self.weight_counts
    }

    /// Distance partition: relation index = rank of the Hamming distance in
    /// the admissible distance list.
    pub fn scheme(&self) -> Result<RelationPartition, GoldError> {
        let classes = distance_classes(self.m());
        let n = self.len();
        let mut rel = vec![0u8; n * n];
        for x in 0..n {
            for y in x + 1..n {
                let dist = hamming_distance(&self.words[x], &self.words[y]);
                let class = classes
                    .iter()
                    .position(|&c| c == dist)
                    .ok_or(GoldError::UnexpectedDistance { x, y, dist })?;
                rel[x * n + y] = class as u8;
                rel[y * n + x] = class as u8;
            }
        }
        Ok(RelationPartition::new(n, 4, rel)?)
    }

    /// Spread blocks: point -> Reed-Muller coset index; returns the block map
    /// and the block count 2^m.
    pub fn rm_coset_partition(&self) -> (Vec<usize>, usize) {
        let blocks = (0..self.len()).map(|i| self.coset_of(i) as usize).collect();
        (blocks, self.field.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_defining_relation() {
        let f = BinaryField::new(3).unwrap();
        let g = 0b010; // x
        assert_eq!(f.mul(g, f.mul(g, g)), 0b011); // x^3 = x + 1
        assert_eq!(f.add(0b101, 0b011), 0b110);
    }

    #[test]
    fn trace_is_balanced_on_gf8() {
        let f = BinaryField::new(3).unwrap();
        let zeros = (0..8).filter(|&x| f.trace(x) == 0).count();
        assert_eq!(zeros, 4);
    }

    #[test]
    fn cube_map_bijective_on_gf32() {
        let f = BinaryField::new(5).unwrap();
        let images: HashSet<u16> = (0..32).map(|x| f.cube(x)).collect();
        assert_eq!(images.len(), 32);
    }

    #[test]
    fn even_and_out_of_range_degrees_rejected() {
        assert_eq!(BinaryField::new(4).unwrap_err(), GoldError::EvenDegree(4));
        assert_eq!(
            BinaryField::new(17).unwrap_err(),
            GoldError::UnsupportedDegree(17)
        );
        assert_eq!(build_gold_code(4).unwrap_err(), GoldError::EvenDegree(4));
    }

    #[test]
    fn m3_weight_distribution() {
        let code = build_gold_code(3).unwrap();
        assert_eq!(code.len(), 128);
        assert_eq!(code.word_length(), 8);
        let counts: Vec<(u64, u64)> = code
            .weight_counts()
            .iter()
            .map(|(&w, &c)| (w, c))
            .collect();
        assert_eq!(counts, vec![(0, 1), (2, 28), (4, 70), (6, 28), (8, 1)]);
    }

    #[test]
    fn weights_closed_under_complement() {
        let code = build_gold_code(3).unwrap();
        let n = code.word_length() as u64;
        for (&w, &c) in code.weight_counts() {
            assert_eq!(code.weight_counts()[&(n - w)], c);
        }
        let total: u64 = code.weight_counts().values().sum();
        assert_eq!(total, 128);
    }

    #[test]
    fn coset_labels_add() {
        let code = build_gold_code(3).unwrap();
        // xor of codewords x and y is a codeword whose coset label is the
        // xor of the labels.
        let x = code.word(5);
        let y = code.word(100);
        let bits: Vec<u64> = x.bits().iter().zip(y.bits()).map(|(u, v)| u ^ v).collect();
        let z = code
            .words()
            .iter()
            .find(|w| w.bits() == bits.as_slice())
            .unwrap();
        assert_eq!(z.b, x.b ^ y.b);
        assert_eq!(z.a, x.a ^ y.a);
    }

    #[test]
    fn complement_pairs_are_adjacent() {
        let code = build_gold_code(3).unwrap();
        let len = code.word_length() as u64;
        for i in (0..code.len()).step_by(2) {
            assert_eq!(hamming_distance(code.word(i), code.word(i + 1)), len);
        }
    }

    #[test]
    fn rm_subcode_is_block_zero() {
        let code = build_gold_code(3).unwrap();
        let (blocks, f) = code.rm_coset_partition();
        assert_eq!(f, 8);
        let block0: Vec<usize> = (0..code.len()).filter(|&i| blocks[i] == 0).collect();
        assert_eq!(block0.len(), 16);
        // Block 0 is the b=0 subcode: weights only in {0, 2^(m-1), 2^m}.
        for &i in &block0 {
            assert!(matches!(code.word(i).weight(), 0 | 4 | 8));
        }
    }
}
