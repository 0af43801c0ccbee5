//! Catalog entries: a recipe, its re-computed oracle verdicts, and a digest of
//! the table it replays to.

use std::io::Write;

use anyhow::{bail, Context};
use ltperm_core::construct::{affine_trace, subfield_monomial};
use ltperm_core::recipe::{
    linear_indices, replay_any, table_indices, AnyRecipe, Family, Recipe, SpecialSpec,
};
use ltperm_core::special::{Sign, SpecialRecipe};
use ltperm_core::translator::{find_translators, quad_trace_condition, QuadTraceParams};
use ltperm_core::{Element, Error, Field, FuncTable, LinearizedMap};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResults {
    pub is_permutation: bool,
    pub is_involution: bool,
    /// `None` when the family has no closed-form inverse for the parameters.
    pub inverse_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub recipe: AnyRecipe,
    pub oracle_results: OracleResults,
    pub predicted_permutation: bool,
    pub table_sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl CatalogEntry {
    /// Prediction and oracle disagree, or a claimed inverse failed.
    pub fn is_mismatch(&self) -> bool {
        if is_inverse(&self.recipe) {
            return self.oracle_results.inverse_verified != Some(true);
        }
        self.predicted_permutation != self.oracle_results.is_permutation
            || self.oracle_results.inverse_verified == Some(false)
    }

    pub fn id(&self) -> Option<&str> {
        match &self.recipe {
            AnyRecipe::Special(s) => s.id.as_deref(),
            AnyRecipe::General(g) => g.id.as_deref(),
        }
    }
}

fn is_inverse(r: &AnyRecipe) -> bool {
    match r {
        AnyRecipe::Special(s) => s.inverse_of.is_some(),
        AnyRecipe::General(g) => g.inverse_of.is_some(),
    }
}

fn forward_of(r: &AnyRecipe) -> AnyRecipe {
    let mut r = r.clone();
    match &mut r {
        AnyRecipe::Special(s) => s.inverse_of = None,
        AnyRecipe::General(g) => g.inverse_of = None,
    }
    r
}

pub fn table_digest(t: &FuncTable) -> String {
    let mut h = Sha256::new();
    for i in t.indices() {
        h.update(i.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Replays `recipe` and runs every oracle on the result.
pub fn evaluate(recipe: &AnyRecipe, max_bits: u32) -> Result<CatalogEntry, Error> {
    let forward = replay_any(&forward_of(recipe), max_bits)?;
    let (table, inverse_verified) = if is_inverse(recipe) {
        let inv = replay_any(recipe, max_bits)?.table;
        let ok = inv.compose(&forward.table)?.is_identity()
            && forward.table.compose(&inv)?.is_identity();
        (inv, Some(ok))
    } else {
        let ok = match &forward.inverse {
            Some(inv) => Some(
                inv.compose(&forward.table)?.is_identity()
                    && forward.table.compose(inv)?.is_identity(),
            ),
            None => None,
        };
        (forward.table.clone(), ok)
    };
    let mut recipe = recipe.clone();
    if let AnyRecipe::General(g) = &mut recipe {
        g.verified.is_permutation = forward.table.is_permutation();
        g.verified.g_is_permutation = forward.predicted_permutation;
    }
    Ok(CatalogEntry {
        recipe,
        oracle_results: OracleResults {
            is_permutation: table.is_permutation(),
            is_involution: table.is_involution(),
            inverse_verified,
        },
        predicted_permutation: forward.predicted_permutation,
        table_sha256: table_digest(&table),
        timing_ms: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogFamily {
    Special,
    TrinomialCpp,
    CrSpe,
    Translator,
    CrQuad,
    TracePower,
    ZeroTranslator,
    Involution,
}

impl CatalogFamily {
    pub const NAMES: [&'static str; 8] = [
        "special",
        "trinomial-cpp",
        "cr-spe",
        "translator",
        "cr-quad",
        "trace-power",
        "zero-translator",
        "involution",
    ];

    pub fn parse(s: &str) -> Option<CatalogFamily> {
        Some(match s {
            "special" => CatalogFamily::Special,
            "trinomial-cpp" => CatalogFamily::TrinomialCpp,
            "cr-spe" => CatalogFamily::CrSpe,
            "translator" => CatalogFamily::Translator,
            "cr-quad" => CatalogFamily::CrQuad,
            "trace-power" => CatalogFamily::TracePower,
            "zero-translator" => CatalogFamily::ZeroTranslator,
            "involution" => CatalogFamily::Involution,
            _ => return None,
        })
    }
}

/// Sweep parameters shared by all families.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub family: CatalogFamily,
    pub field: Field,
    pub k: u32,
    pub all_delta: bool,
    pub all_s: bool,
    pub delta: Option<u32>,
    pub s: Option<u64>,
    pub seed: u64,
    pub samples: usize,
    pub betas: usize,
    pub i: Option<u32>,
    pub l: u32,
    pub with_inverses: bool,
    pub max_bits: u32,
}

fn idx(field: &Field, e: Element) -> u64 {
    field.index_of(e) as u64
}

fn s_values(sw: &Sweep) -> Vec<u64> {
    if sw.all_s {
        (0..=sw.field.order() as u64 - 2).collect()
    } else {
        vec![sw.s.unwrap_or(1)]
    }
}

fn need_half(sw: &Sweep) -> anyhow::Result<()> {
    if sw.field.n() != 2 * sw.k {
        bail!("family needs n = 2k (got n = {}, k = {})", sw.field.n(), sw.k);
    }
    Ok(())
}

fn need_odd(sw: &Sweep) -> anyhow::Result<()> {
    if sw.field.p() == 2 {
        bail!("family needs an odd characteristic");
    }
    Ok(())
}

fn betas(sw: &Sweep) -> Vec<Element> {
    sample::distinct_nonzero(&sw.field, sw.betas.max(1), sw.seed ^ 0xbe7a)
}

fn h_tables(sw: &Sweep, salt: u64) -> anyhow::Result<Vec<FuncTable>> {
    let mut r = sample::rng(sw.seed.wrapping_add(salt));
    let mut out = vec![subfield_monomial(&sw.field, sw.k, sw.field.one(), 1)?];
    while out.len() < sw.samples.max(1) {
        out.push(sample::subfield_table(&sw.field, sw.k, &mut r)?);
    }
    Ok(out)
}

fn general(mut r: Recipe, id: String) -> AnyRecipe {
    r.id = Some(id);
    AnyRecipe::General(r)
}

fn with_inverse(out: &mut Vec<AnyRecipe>, r: AnyRecipe, emit: bool) {
    if emit {
        let mut inv = r.clone();
        match &mut inv {
            AnyRecipe::Special(s) => {
                s.inverse_of = s.id.clone();
                s.id = s.id.as_ref().map(|i| format!("{i}-inv"));
            }
            AnyRecipe::General(g) => {
                g.inverse_of = g.id.clone();
                g.id = g.id.as_ref().map(|i| format!("{i}-inv"));
            }
        }
        out.push(r);
        out.push(inv);
    } else {
        out.push(r);
    }
}

/// All recipes of a sweep, in a fixed order.
pub fn recipes(sw: &Sweep) -> anyhow::Result<Vec<AnyRecipe>> {
    let f = &sw.field;
    let k = sw.k;
    let mut out = Vec::new();
    match sw.family {
        CatalogFamily::Special => {
            need_half(sw)?;
            let deltas: Vec<Element> = if sw.all_delta {
                f.elements().to_vec()
            } else {
                vec![f.element_at(sw.delta.unwrap_or(1))?]
            };
            let l = LinearizedMap::identity(f, k)?;
            for &delta in &deltas {
                for s in s_values(sw) {
                    let r = SpecialRecipe::new(f, k, l.clone(), delta, s, Sign::Minus)?;
                    let mut spec = SpecialSpec::from_recipe(&r);
                    spec.id = Some(format!("special-{}-{}", f.index_of(delta), s));
                    out.push(AnyRecipe::Special(spec));
                }
            }
        }
        CatalogFamily::TrinomialCpp => {
            if f.p() != 2 || !f.n().is_multiple_of(3) {
                bail!("trinomial family needs p = 2 and 3 | n");
            }
            let m = f.n() / 3;
            let sub = f.subfield_view(m)?.elements;
            for &nu in sub.iter().filter(|&&e| !e.is_zero() && e != f.one()) {
                let inv = f.inv(nu)?;
                let b_set: Vec<u64> = sub
                    .iter()
                    .filter(|&&b| !b.is_zero() && b != inv)
                    .map(|&b| idx(f, b))
                    .collect();
                let r = Recipe::new(Family::TrinomialCpp, f, f.n())
                    .elem("nu", f, nu)
                    .list("b_set", b_set);
                out.push(general(r, format!("trinomial_cpp-{}", f.index_of(nu))));
            }
        }
        CatalogFamily::CrSpe => {
            need_odd(sw)?;
            need_half(sw)?;
            let view = f.subfield_view(k)?;
            let kernel: Vec<Element> = view.kernel.iter().copied().filter(|e| !e.is_zero()).collect();
            let deltas = if sw.all_delta { kernel } else { kernel[..1].to_vec() };
            let pk = (f.p() as u64).pow(k);
            for &delta in &deltas {
                for &rho in view.elements.iter().filter(|e| !e.is_zero()) {
                    for ell in 1..=pk {
                        let l = LinearizedMap::new(f, k, vec![rho])?;
                        let s = ell * (pk - 1) + 1;
                        let r = SpecialRecipe::new(f, k, l, delta, s, Sign::Minus)?;
                        let mut spec = SpecialSpec::from_recipe(&r);
                        spec.id = Some(format!(
                            "cr_spe-{}-{}-{}",
                            f.index_of(delta),
                            f.index_of(rho),
                            ell
                        ));
                        out.push(AnyRecipe::Special(spec));
                    }
                }
            }
        }
        CatalogFamily::Translator => {
            for (bi, beta) in betas(sw).into_iter().enumerate() {
                let t = affine_trace(f, k, beta, f.zero())?;
                let hs = h_tables(sw, bi as u64)?;
                for w in find_translators(&t)? {
                    for (j, h) in hs.iter().enumerate() {
                        let r = Recipe::new(Family::Translator, f, k)
                            .elem("beta", f, beta)
                            .elem("a", f, f.zero())
                            .elem("gamma", f, w.gamma())
                            .list("L", linear_indices(&LinearizedMap::identity(f, k)?))
                            .list("h", table_indices(h));
                        let id = format!(
                            "translator-{}-{}-{}",
                            f.index_of(beta),
                            f.index_of(w.gamma()),
                            j
                        );
                        with_inverse(&mut out, general(r, id), sw.with_inverses && w.b().is_zero());
                    }
                }
            }
        }
        CatalogFamily::CrQuad => {
            if f.p() != 2 {
                bail!("quadratic trace family needs p = 2");
            }
            let i = sw.i.unwrap_or(k - 1);
            let hs = h_tables(sw, 0)?;
            let sub = f.subfield_view(k)?.elements;
            for &beta in sub.iter().filter(|e| !e.is_zero()) {
                let q = QuadTraceParams::new(f, beta, i, sw.l, k)?;
                for &gamma in f.nonzero() {
                    if !quad_trace_condition(f, &q, gamma)? {
                        continue;
                    }
                    for (j, h) in hs.iter().enumerate() {
                        let r = Recipe::new(Family::CrQuad, f, k)
                            .elem("beta", f, beta)
                            .int("i", i as u64)
                            .int("l", sw.l as u64)
                            .elem("gamma", f, gamma)
                            .list("L", linear_indices(&LinearizedMap::identity(f, k)?))
                            .list("h", table_indices(h));
                        let id = format!("cr_quad-{}-{}-{}", f.index_of(beta), f.index_of(gamma), j);
                        out.push(general(r, id));
                    }
                }
            }
        }
        CatalogFamily::TracePower => {
            need_half(sw)?;
            let sub = f.subfield_view(k)?.elements;
            let deltas = if sw.all_delta {
                sub.clone()
            } else {
                vec![f.element_at(sw.delta.unwrap_or(1))?]
            };
            for &gamma in f.nonzero() {
                for &delta in &deltas {
                    for s in s_values(sw) {
                        let r = Recipe::new(Family::TracePower, f, k)
                            .elem("gamma", f, gamma)
                            .elem("delta", f, delta)
                            .int("s", s)
                            .list("L", linear_indices(&LinearizedMap::identity(f, k)?));
                        let id = format!(
                            "trace_power-{}-{}-{}",
                            f.index_of(gamma),
                            f.index_of(delta),
                            s
                        );
                        let b0 = f.rel_trace(k, gamma)?.is_zero();
                        with_inverse(&mut out, general(r, id), sw.with_inverses && b0);
                    }
                }
            }
        }
        CatalogFamily::ZeroTranslator => {
            need_odd(sw)?;
            let i = sw.i.unwrap_or(0);
            let hs = h_tables(sw, 0)?;
            let l_map = LinearizedMap::identity(f, k)?;
            for &gamma in f.nonzero() {
                match ltperm_core::inverse::zero_translator_family(f, gamma, i, sw.l, &l_map, &hs[0]) {
                    Err(Error::GammaConditionFailed) => continue,
                    Err(e) => return Err(e.into()),
                    Ok(_) => {}
                }
                for (j, h) in hs.iter().enumerate() {
                    let r = Recipe::new(Family::ZeroTranslator, f, k)
                        .elem("gamma", f, gamma)
                        .int("i", i as u64)
                        .int("l", sw.l as u64)
                        .list("L", linear_indices(&l_map))
                        .list("h", table_indices(h));
                    let id = format!("zero_translator-{}-{}", f.index_of(gamma), j);
                    with_inverse(&mut out, general(r, id), sw.with_inverses);
                }
            }
        }
        CatalogFamily::Involution => {
            need_odd(sw)?;
            let sub = f.subfield_view(k)?.elements;
            for beta in betas(sw) {
                let t = affine_trace(f, k, beta, f.zero())?;
                for w in find_translators(&t)?.into_iter().filter(|w| !w.b().is_zero()) {
                    for &lambda in sub.iter().filter(|e| !e.is_zero()) {
                        if f.add(f.one(), f.mul(lambda, w.b())).is_zero() {
                            continue;
                        }
                        let r = Recipe::new(Family::InvolutionScaled, f, k)
                            .elem("beta", f, beta)
                            .elem("gamma", f, w.gamma())
                            .elem("lambda", f, lambda);
                        let id = format!(
                            "involution-{}-{}-{}",
                            f.index_of(beta),
                            f.index_of(w.gamma()),
                            f.index_of(lambda)
                        );
                        out.push(general(r, id));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Evaluates recipes in parallel; output order matches input order.
pub fn evaluate_all(
    recipes: &[AnyRecipe],
    max_bits: u32,
    timing: bool,
) -> anyhow::Result<Vec<CatalogEntry>> {
    recipes
        .par_iter()
        .map(|r| {
            let start = std::time::Instant::now();
            let mut e = evaluate(r, max_bits).map_err(anyhow::Error::from)?;
            if timing {
                e.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            Ok(e)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub constructed: usize,
    pub verified_permutations: usize,
    pub mismatches: usize,
}

impl Summary {
    pub fn of(entries: &[CatalogEntry]) -> Summary {
        Summary {
            constructed: entries.len(),
            verified_permutations: entries
                .iter()
                .filter(|e| e.oracle_results.is_permutation)
                .count(),
            mismatches: entries.iter().filter(|e| e.is_mismatch()).count(),
        }
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "constructed={} verified_permutations={} mismatches={}",
            self.constructed, self.verified_permutations, self.mismatches
        )
    }
}

pub fn write_jsonl(out: &mut impl Write, entries: &[CatalogEntry]) -> anyhow::Result<()> {
    for e in entries {
        serde_json::to_writer(&mut *out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Column order of the CSV export.
pub const CSV_COLUMNS: [&str; 11] = [
    "id",
    "family",
    "p",
    "n",
    "k",
    "params",
    "is_permutation",
    "is_involution",
    "inverse_verified",
    "predicted_permutation",
    "table_sha256",
];

pub fn write_csv(out: impl Write, entries: &[CatalogEntry]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for e in entries {
        let (family, field, k, params) = match &e.recipe {
            AnyRecipe::Special(s) => (
                s.family.clone(),
                &s.field,
                s.k,
                serde_json::json!({"sign": s.sign, "delta": s.delta, "s": s.s, "L": s.l}),
            ),
            AnyRecipe::General(g) => (
                g.family.clone(),
                &g.field,
                g.k,
                serde_json::to_value(&g.params)?,
            ),
        };
        let inv = match e.oracle_results.inverse_verified {
            Some(v) => v.to_string(),
            None => String::new(),
        };
        w.write_record([
            e.id().unwrap_or("").to_string(),
            family,
            field.p.to_string(),
            field.n.to_string(),
            k.to_string(),
            params.to_string(),
            e.oracle_results.is_permutation.to_string(),
            e.oracle_results.is_involution.to_string(),
            inv,
            e.predicted_permutation.to_string(),
            e.table_sha256.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One line of a file handed to `verify`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum VerifyInput {
    Entry(CatalogEntry),
    Recipe(AnyRecipe),
}

/// Differences between stored and recomputed results, empty when they agree.
pub fn verify_line(input: &VerifyInput, max_bits: u32) -> Result<Vec<String>, Error> {
    let mut diffs = Vec::new();
    match input {
        VerifyInput::Entry(stored) => {
            let fresh = evaluate(&stored.recipe, max_bits)?;
            if fresh.oracle_results != stored.oracle_results {
                diffs.push(format!(
                    "oracle_results: stored {:?}, recomputed {:?}",
                    stored.oracle_results, fresh.oracle_results
                ));
            }
            if fresh.predicted_permutation != stored.predicted_permutation {
                diffs.push(format!(
                    "predicted_permutation: stored {}, recomputed {}",
                    stored.predicted_permutation, fresh.predicted_permutation
                ));
            }
            if fresh.table_sha256 != stored.table_sha256 {
                diffs.push(format!(
                    "table_sha256: stored {}, recomputed {}",
                    stored.table_sha256, fresh.table_sha256
                ));
            }
            if fresh.recipe != stored.recipe {
                diffs.push("recipe.verified differs from recomputed verdicts".to_string());
            }
        }
        VerifyInput::Recipe(AnyRecipe::General(r)) => {
            let fresh = evaluate(&AnyRecipe::General(r.clone()), max_bits)?;
            if let AnyRecipe::General(g) = &fresh.recipe {
                if g.verified != r.verified {
                    diffs.push(format!(
                        "verified: stored {:?}, recomputed {:?}",
                        r.verified, g.verified
                    ));
                }
            }
        }
        VerifyInput::Recipe(r @ AnyRecipe::Special(_)) => {
            let fresh = evaluate(r, max_bits)?;
            if fresh.is_mismatch() {
                diffs.push(format!(
                    "prediction {} disagrees with oracle {}",
                    fresh.predicted_permutation, fresh.oracle_results.is_permutation
                ));
            }
        }
    }
    Ok(diffs)
}

pub fn parse_line(line: &str) -> anyhow::Result<VerifyInput> {
    serde_json::from_str(line).context("line is neither a catalog entry nor a recipe")
}
