//! Shared pipeline fixtures; each suite uses the pieces it needs.
#![allow(dead_code)]


use std::sync::OnceLock;

use asch_core::*;

pub struct Pipeline {
    pub code: GoldCode,
    pub cert4: SchemeCertificate,
    pub profile: CoverProfile,
    pub partition: CliquePartition,
    pub fission: FissionScheme,
}

fn build(m: u32) -> Pipeline {
    let code = build_gold_code(m).expect("code builds");
    let rp = code.scheme().expect("distances fall in the five classes");
    let cert4 = verify_axioms(&rp).expect("distance partition certifies");
    let profile = recognize_cover(&cert4).expect("cover recognized");
    let (blocks, _f) = code.rm_coset_partition();
    let partition = validate_spread(&profile, &blocks).expect("coset spread validates");
    let fission = fission(&profile, &partition).expect("fission certifies");
    Pipeline {
        code,
        cert4,
        profile,
        partition,
        fission,
    }
}

pub fn m3() -> &'static Pipeline {
    static CELL: OnceLock<Pipeline> = OnceLock::new();
    CELL.get_or_init(|| build(3))
}

pub fn m5() -> &'static Pipeline {
    static CELL: OnceLock<Pipeline> = OnceLock::new();
    CELL.get_or_init(|| build(5))
}

pub fn int_matrix(rows: &[&[i64]]) -> RationalMatrix {
    RationalMatrix::from_int_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn big(v: i64) -> num_bigint::BigInt {
    num_bigint::BigInt::from(v)
}
