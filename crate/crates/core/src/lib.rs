//! Caps (quad-free sets) in the affine geometry `AG(n, 2)`.
//!
//! Points of `Z_2^n` are bit masks; sums are XORs. The crate covers affine
//! spans and maps, the cap test and first quad closure, basis/dependent
//! decompositions with extended types and basis exchange, canonical forms
//! for affine equivalence, and an orderly-generation classifier that
//! reproduces the classification of caps in `AG(7, 2)`.

pub mod capset;
pub mod classifier;
pub mod decomp;
pub mod equivalence;
pub mod error;
pub mod gf2;
pub mod report;
pub mod templates;

pub use capset::{extension_candidates, find_quad, is_cap, is_cap_by_quads, is_complete, is_quad, quad_closure_1, Cap};
pub use classifier::{classify, lemma_violations, max_cap_size, tait_won_bounds, ClassEntry, ClassTable};
pub use decomp::{
    all_bases, decompose, decompose_set, exchange_basis, extended_type, support_intersection, type_census,
    BasisDecomposition, Dependent, ExtendedType,
};
pub use equivalence::{are_equivalent, canonical_form, find_isomorphism, verify_map, CanonicalForm};
pub use error::{Error, Result};
pub use gf2::{
    affine_dim, affine_span, apply_affine_map, bit_string, coordinates, extract_basis, is_affinely_independent,
    random_invertible_affine, xor_sum, AffineMap, Point, PointSet,
};
pub use report::{verify_paper, verify_paper_with, ReportOptions, Status, VerificationReport};
pub use templates::{expected_extended_type, higherdim_pair, instantiate, TemplateId, TemplateTable};
