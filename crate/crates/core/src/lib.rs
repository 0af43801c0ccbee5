//! Finite-field permutations built from linear translators.
//!
//! The crate is `no_std` (it needs `alloc`). Every construction is paired
//! with an exhaustive oracle over value tables, so all claims can be checked
//! directly on fields of a few thousand elements.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod construct;
pub mod error;
pub mod field;
pub mod funcrep;
pub mod inverse;
mod poly;
pub mod recipe;
pub mod special;
pub mod translator;

pub use error::{Error, Result};
pub use field::{make_field, ArithOp, Element, Field, FieldDesc, SubfieldView};
pub use funcrep::{Domain, FuncTable, LinearizedMap, SpectrumRow};
pub use translator::TranslatorWitness;
