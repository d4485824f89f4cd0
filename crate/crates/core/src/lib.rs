//! Exact character theory for small finite reductive groups: GL(2), Sp(4),
//! GSp(4) and the paramodular Levi over small finite fields.
//!
//! Field arithmetic and group enumeration are exact. Character values are
//! complex numbers over a float type chosen by the caller (`f32` or `f64`);
//! the aliases below fix it to one of them.

pub mod classfun;
pub mod cli;
pub mod field;
pub mod genericity;
pub mod groups;
pub mod scalar;
pub mod tables;
pub mod verify;

pub use field::{FieldElement, FieldTable};
pub use groups::{build_group, EnumeratedGroup, GroupFamily, Reductive};
pub use scalar::Real;

pub type ClassFunctionF64 = classfun::ClassFunction<f64>;
pub type ClassFunctionF32 = classfun::ClassFunction<f32>;
pub type IrreducibleTableF64 = tables::IrreducibleTable<f64>;
pub type IrreducibleTableF32 = tables::IrreducibleTable<f32>;
