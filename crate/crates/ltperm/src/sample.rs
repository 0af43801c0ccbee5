//! Seeded generators of test tables. The same seed always gives the same
//! sequence of tables.

use ltperm_core::{Domain, Element, Field, FuncTable, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed used by catalog sweeps and the acceptance suite unless overridden.
pub const DEFAULT_SEED: u64 = 0x5eed_2017;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform table of GF(p^k) into itself.
pub fn subfield_table(field: &Field, k: u32, rng: &mut impl Rng) -> Result<FuncTable> {
    let elements = field.subfield_view(k)?.elements;
    let values = (0..elements.len())
        .map(|_| elements[rng.random_range(0..elements.len())])
        .collect();
    FuncTable::from_values(field, Domain::Subfield(k), Domain::Subfield(k), values)
}

/// Uniform permutation of GF(p^k).
pub fn subfield_permutation(field: &Field, k: u32, rng: &mut impl Rng) -> Result<FuncTable> {
    let mut values = field.subfield_view(k)?.elements;
    values.shuffle(rng);
    FuncTable::from_values(field, Domain::Subfield(k), Domain::Subfield(k), values)
}

/// `count` self-maps of GF(p^k), alternating permutations and arbitrary maps.
pub fn subfield_tables(field: &Field, k: u32, count: usize, seed: u64) -> Result<Vec<FuncTable>> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                subfield_permutation(field, k, &mut r)
            } else {
                subfield_table(field, k, &mut r)
            }
        })
        .collect()
}

/// `count` distinct nonzero elements, `1` first, the rest seeded.
pub fn distinct_nonzero(field: &Field, count: usize, seed: u64) -> Vec<Element> {
    let mut r = rng(seed);
    let mut out = vec![field.one()];
    let count = count.min(field.nonzero().len());
    while out.len() < count {
        let e = nonzero(field, &mut r);
        if !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

/// Uniform table of the whole field into itself.
pub fn full_table(field: &Field, rng: &mut impl Rng) -> FuncTable {
    let elements = field.elements();
    FuncTable::from_fn(field, |_| elements[rng.random_range(0..elements.len())])
}

/// Uniform permutation of the whole field.
pub fn full_permutation(field: &Field, rng: &mut impl Rng) -> FuncTable {
    let mut values: Vec<Element> = field.elements().to_vec();
    values.shuffle(rng);
    let mut it = values.into_iter();
    FuncTable::from_fn(field, |_| it.next().expect("one value per element"))
}

/// A uniform nonzero element.
pub fn nonzero(field: &Field, rng: &mut impl Rng) -> Element {
    let nz = field.nonzero();
    nz[rng.random_range(0..nz.len())]
}

/// `count` tables, half of them permutations, so both verdicts occur.
pub fn mixed_tables(field: &Field, count: usize, seed: u64) -> Vec<FuncTable> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                full_permutation(field, &mut r)
            } else {
                full_table(field, &mut r)
            }
        })
        .collect()
}
