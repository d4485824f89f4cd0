//! Finite matrix groups of Lie type and their standard subgroups.

mod enumerate;
mod family;
mod matrix;
mod subgroups;

pub mod cache;

use thiserror::Error;

pub use enumerate::{
    build_group, build_group_bounded, family_label, ConjugacyClass, EnumeratedGroup, GroupKind, GroupParts,
    DEFAULT_MAX_ORDER,
};
pub use family::{GroupFamily, ALL_FAMILIES};
pub use matrix::{block_index, packable, Matrix, MAX_DIM};
pub use subgroups::{levi_decompose, subgroup_data, LeviDecomposition, Parabolic, Reductive, SubgroupData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("estimated order {estimate} exceeds the bound {bound}")]
    BoundExceeded { estimate: u64, bound: u64 },
    #[error("{dim}x{dim} matrices over F_{q} do not fit a 64-bit key")]
    KeyOverflow { dim: usize, q: u32 },
    #[error("generator {generator} does not satisfy the defining equations of {family}")]
    GeneratorNotInFamily { family: GroupFamily, generator: String },
    #[error("element set is empty")]
    Empty,
    #[error("element set is not closed under products or inverses")]
    NotClosed,
    #[error("structural invariant violated: {0}")]
    Structure(String),
    #[error("element is not in the parabolic subgroup {0}")]
    NotInParabolic(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("field: {0}")]
    Field(#[from] crate::field::FieldError),
}
