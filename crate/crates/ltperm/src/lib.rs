//! Batch front end for `ltperm-core`: family sweeps written as JSON Lines or
//! CSV catalogs, translator search, and replay verification of stored recipes.

pub mod catalog;
pub mod cli;
pub mod sample;
