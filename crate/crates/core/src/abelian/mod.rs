//! Subtractions, Mal'tsev operations and the abelian groups that come out
//! of diagonal punctuations.
//!
//! Pushouts along surjections are computed as quotients by generated
//! congruences; every construction verifies the properties it relies on
//! and reports a witness when the input falls outside them.

mod diagonal;
mod direction;
mod maltsev;
mod split;
mod subtraction;

pub use diagonal::{
    abelianization_map, check_affine_diagonal, check_domega_equivalence, diagonal_punctuation, factor_through_eta,
    DiagonalPunctuation, DomegaReport, DpSummary, Tables, Verified,
};
pub use direction::{direction, Direction, DirectionSummary};
pub use maltsev::{find_maltsev_ops, fiber_ops_from_ternary, is_autonomous, FiberOps, MaltsevOp};
pub use split::{
    comparison_targets, dp_split, fiber_product, find_fiber_subtraction, verify_universality, FiberGroups,
    SplitAbelianization, SplitSummary, UniversalityReport,
};
pub use subtraction::{
    find_right_cancellers, find_subtractions, find_unital_magmas, group_from_subtraction, InducedGroup, Subtraction,
    UnitalMagma,
};
