//! Exact analysis of square matrices over ℚ and GF(p) through their
//! principal minors: clan and HL-clan structure, (≤k)-equivalence of minor
//! tables, principal unimodularity, sign-diagonal witness recovery for
//! dense skew matrices, and reconstruction from order-≤4 minors.

pub mod clans;
pub mod error;
pub mod field;
pub mod generate;
pub mod io;
pub mod matrix;
pub mod minors;
pub mod subsets;
pub mod witness;

pub use clans::{
    clan_closure, find_nontrivial_clan, hl_indecomposable, is_clan, is_hl_clan, is_irreducible,
    is_separable, peel_inseparable, ClanKind, ClanReport, CLAN_SWEEP_LIMIT,
};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use generate::{
    apply_witness, flip_on_set, gen_random_dense, gen_skew_cycle, gen_sym_cycle, CycleVariant,
    SplitMix64,
};
pub use matrix::{
    default_labels, density_report, determinant, extend_infinity, pfaffian, rank, DensityReport,
    Matrix, SkewMatrix, INFINITY_LABEL,
};
pub use minors::{
    hl_equivalent, hl_mismatches, is_principally_unimodular, principal_minors,
    principal_minors_with_threads, wesp_check, EquivalenceVerdict, MinorTable, PU_SWEEP_LIMIT,
};
pub use witness::{
    check_lopez, diag_similar_up_to_transposition, equivalence_classes, reconstruct_from_minors,
    recover_witness, RelationMode, SignPartition, Witness,
};
