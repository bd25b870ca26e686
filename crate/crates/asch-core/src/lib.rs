//! Exact-arithmetic construction, certification and dissection of symmetric
//! association schemes.
//!
//! The crate certifies the scheme axioms for a relation partition, computes
//! first and second eigenmatrices over the rationals, recognizes two-fold
//! covers of strongly regular graphs, refines a cover along a spread of
//! tight cliques into a five-class scheme, extracts mutually unbiased
//! weighing matrices from the antipodal eigenspaces, and generates the
//! four-weight trace-code instances that exercise the whole pipeline.
//!
//! Everything is computed in exact integer or rational arithmetic; no
//! floating point is used anywhere. Schemes with irrational eigenvalues are
//! rejected rather than approximated.

pub mod bitmat;
pub mod fission;
pub mod gold;
pub mod imprimitive;
pub mod io;
pub mod linalg;
pub mod muwm;
pub mod scheme;
pub mod spectra;

pub use fission::{
    clique_profile, delsarte_bound, fission, reconcile_fission_formulas, validate_spread,
    verify_tight_regularity, CliquePartition, FissionError, FissionScheme, ReconciliationReport,
};
pub use gold::{build_gold_code, BinaryField, GoldCode, GoldError};
pub use imprimitive::{
    antipodal_action, find_closed_subsets, quotient_scheme, recognize_cover, AntipodalReport,
    CoverError, CoverProfile, QuotientStructure,
};
pub use linalg::{
    char_poly, common_eigenbasis, integer_eigenvalues, rat_inverse, IntPolynomial, LinalgError,
    Rat, RationalMatrix,
};
pub use muwm::{
    gram_blocks_with_flips,
    extract_weighing_family, gram_blocks, muwm_bound, verify_unbiased, GramBlocks, MuwmBoundReport,
    MuwmError, UnbiasednessCertificate, WeighingFamily,
};
pub use scheme::{
    intersection_matrices, verify_axioms, RelationPartition, SchemeCertificate, SchemeError,
};
pub use spectra::{compute_spectrum, verify_duality, DualityReport, Spectrum, SpectraError};
