//! Serializable construction records. A recipe names a family and binds its
//! parameters (field elements as enumeration indices); replaying it rebuilds
//! the exact table.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::construct::{
    affine_trace, build_translator_permutation, cr_quad_family, g_map, is_b_complete,
    trinomial_cpp, Construction,
};
use crate::error::{Error, Result};
use crate::field::{Element, Field, FieldDesc};
use crate::funcrep::{Domain, FuncTable, LinearizedMap};
use crate::inverse::{involution_scaled, inverse_b0, zero_translator_family};
use crate::special::{
    build_special, kernel_reduction, predicate_var1, special_inverse_even_s, trace_power_family,
    Sign, SpecialRecipe,
};
use crate::translator::{QuadTraceParams, TranslatorWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `L(x) + L(γ) h(T^n_k(βx) + a)`.
    Translator,
    /// `L(x) + L(γ) h(T^n_k(β x^{2^i + 2^{i+lk}}))`, `p = 2`.
    CrQuad,
    /// The complete trinomial `h` over GF(2^{3m}).
    TrinomialCpp,
    /// `L(x) + L(γ)(x^{p^k} + x + δ)^s`.
    TracePower,
    /// 0-translator family of the odd quadratic trace.
    ZeroTranslator,
    /// `x + γλ T^n_k(βx)`.
    InvolutionScaled,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Translator,
        Family::CrQuad,
        Family::TrinomialCpp,
        Family::TracePower,
        Family::ZeroTranslator,
        Family::InvolutionScaled,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Translator => "translator",
            Family::CrQuad => "cr_quad",
            Family::TrinomialCpp => "trinomial_cpp",
            Family::TracePower => "trace_power",
            Family::ZeroTranslator => "zero_translator",
            Family::InvolutionScaled => "involution_scaled",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or(Error::UnknownFamily)
    }
}

/// An integer or a list of integers.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum Param {
    Int(u64),
    List(Vec<u64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verified {
    pub is_permutation: bool,
    pub g_is_permutation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Recipe {
    pub family: String,
    pub field: FieldDesc,
    pub k: u32,
    pub params: BTreeMap<String, Param>,
    pub verified: Verified,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub id: Option<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub inverse_of: Option<String>,
}

/// `{"family": "special", "sign", "field", "k", "delta", "s", "L"}`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpecialSpec {
    pub family: String,
    pub sign: String,
    pub field: FieldDesc,
    pub k: u32,
    pub delta: u32,
    pub s: u64,
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    pub l: Vec<u32>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub id: Option<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub inverse_of: Option<String>,
}

/// Either record shape.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum AnyRecipe {
    Special(SpecialSpec),
    General(Recipe),
}

/// The result of replaying a recipe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replayed {
    pub field: Field,
    /// The table the recipe describes (the inverse, for inverse recipes).
    pub table: FuncTable,
    /// The family's own criterion for bijectivity of the forward map.
    pub predicted_permutation: bool,
    /// A closed-form inverse of the forward map, where the family has one.
    pub inverse: Option<FuncTable>,
}

struct Params<'a> {
    field: &'a Field,
    map: &'a BTreeMap<String, Param>,
}

impl Params<'_> {
    fn int(&self, name: &'static str) -> Result<u64> {
        match self.map.get(name) {
            Some(Param::Int(v)) => Ok(*v),
            _ => Err(Error::InvalidParameter(name)),
        }
    }

    fn u32(&self, name: &'static str) -> Result<u32> {
        u32::try_from(self.int(name)?).map_err(|_| Error::InvalidParameter(name))
    }

    fn elem(&self, name: &'static str) -> Result<Element> {
        let idx = self.u32(name)?;
        self.field.element_at(idx).map_err(|_| Error::InvalidParameter(name))
    }

    fn list(&self, name: &'static str) -> Result<Vec<Element>> {
        match self.map.get(name) {
            Some(Param::List(v)) => v
                .iter()
                .map(|&i| {
                    u32::try_from(i)
                        .ok()
                        .and_then(|i| self.field.element_at(i).ok())
                        .ok_or(Error::InvalidParameter(name))
                })
                .collect(),
            _ => Err(Error::InvalidParameter(name)),
        }
    }

    fn linear(&self, k: u32) -> Result<LinearizedMap> {
        LinearizedMap::new(self.field, k, self.list("L")?)
    }

    fn subfield_table(&self, name: &'static str, k: u32) -> Result<FuncTable> {
        FuncTable::from_values(self.field, Domain::Subfield(k), Domain::Subfield(k), self.list(name)?)
    }
}

/// Enumeration indices of the values of a table.
pub fn table_indices(t: &FuncTable) -> Vec<u64> {
    t.indices().into_iter().map(u64::from).collect()
}

pub fn element_index(field: &Field, e: Element) -> u64 {
    field.index_of(e) as u64
}

pub fn linear_indices(l: &LinearizedMap) -> Vec<u64> {
    l.coeffs().iter().map(|&c| element_index(l.field(), c)).collect()
}

impl Recipe {
    pub fn new(family: Family, field: &Field, k: u32) -> Recipe {
        Recipe {
            family: family.as_str().to_string(),
            field: field.desc(),
            k,
            params: BTreeMap::new(),
            verified: Verified { is_permutation: false, g_is_permutation: false },
            id: None,
            inverse_of: None,
        }
    }

    pub fn int(mut self, name: &str, v: u64) -> Recipe {
        self.params.insert(name.to_string(), Param::Int(v));
        self
    }

    pub fn elem(self, name: &str, field: &Field, e: Element) -> Recipe {
        self.int(name, element_index(field, e))
    }

    pub fn list(mut self, name: &str, v: Vec<u64>) -> Recipe {
        self.params.insert(name.to_string(), Param::List(v));
        self
    }

    pub fn family(&self) -> Result<Family> {
        Family::parse(&self.family)
    }

    /// Replays the recipe and records the oracle verdicts in `verified`.
    pub fn sealed(mut self, max_bits: u32) -> Result<(Recipe, Replayed)> {
        let forward = Recipe { inverse_of: None, ..self.clone() };
        let replayed = replay(&forward, max_bits)?;
        self.verified = Verified {
            is_permutation: replayed.table.is_permutation(),
            g_is_permutation: replayed.predicted_permutation,
        };
        let replayed = if self.inverse_of.is_some() { replay(&self, max_bits)? } else { replayed };
        Ok((self, replayed))
    }
}

fn witness(f: FuncTable, gamma: Element, b: Element) -> Result<TranslatorWitness> {
    TranslatorWitness::new(f, gamma, b)
}

fn from_construction(field: &Field, c: Construction) -> Replayed {
    Replayed {
        field: field.clone(),
        table: c.table,
        predicted_permutation: c.g_is_permutation,
        inverse: None,
    }
}

/// Rebuilds the table described by `r`. For inverse recipes the returned
/// table is the closed-form inverse.
pub fn replay(r: &Recipe, max_bits: u32) -> Result<Replayed> {
    let field = Field::from_desc(&r.field, max_bits)?;
    let p = Params { field: &field, map: &r.params };
    let k = r.k;
    let mut out = match r.family()? {
        Family::Translator => {
            let beta = p.elem("beta")?;
            let a = p.elem("a")?;
            let gamma = p.elem("gamma")?;
            let l = p.linear(k)?;
            let h = p.subfield_table("h", k)?;
            let f = affine_trace(&field, k, beta, a)?;
            let b = field.sub(f.eval(gamma), f.eval(Element::ZERO));
            let w = witness(f, gamma, b)?;
            let c = build_translator_permutation(&l, &h, &w)?;
            let inverse = if b.is_zero() { Some(inverse_b0(&w, &h, &l)?) } else { None };
            Replayed { inverse, ..from_construction(&field, c) }
        }
        Family::CrQuad => {
            let q = QuadTraceParams::new(&field, p.elem("beta")?, p.u32("i")?, p.u32("l")?, k)?;
            let l = p.linear(k)?;
            let h = p.subfield_table("h", k)?;
            from_construction(&field, cr_quad_family(&q, p.elem("gamma")?, &l, &h)?)
        }
        Family::TrinomialCpp => {
            let t = trinomial_cpp(&field, p.elem("nu")?)?;
            let bs = p.list("b_set")?;
            let complete = bs.iter().all(|&b| is_b_complete(&t.h, b));
            Replayed { field: field.clone(), table: t.h, predicted_permutation: complete, inverse: None }
        }
        Family::TracePower => {
            let l = p.linear(k)?;
            let fam = trace_power_family(&field, p.elem("gamma")?, p.elem("delta")?, p.int("s")?, &l)?;
            Replayed {
                field: field.clone(),
                table: fam.table,
                predicted_permutation: fam.g_is_permutation,
                inverse: fam.inverse,
            }
        }
        Family::ZeroTranslator => {
            let l = p.linear(k)?;
            let h = p.subfield_table("h", k)?;
            let fam = zero_translator_family(&field, p.elem("gamma")?, p.u32("i")?, p.u32("l")?, &l, &h)?;
            Replayed {
                field: field.clone(),
                table: fam.table,
                predicted_permutation: true,
                inverse: Some(fam.inverse),
            }
        }
        Family::InvolutionScaled => {
            let f = affine_trace(&field, k, p.elem("beta")?, field.zero())?;
            let gamma = p.elem("gamma")?;
            let b = f.eval(gamma);
            let w = witness(f, gamma, b)?;
            let table = involution_scaled(&w, p.elem("lambda")?)?;
            Replayed { field: field.clone(), table, predicted_permutation: true, inverse: None }
        }
    };
    if r.inverse_of.is_some() {
        out.table = out.inverse.clone().ok_or(Error::PreconditionFailed(
            "family has no closed-form inverse for these parameters",
        ))?;
    }
    Ok(out)
}

impl SpecialSpec {
    pub fn from_recipe(r: &SpecialRecipe) -> SpecialSpec {
        SpecialSpec {
            family: "special".to_string(),
            sign: r.sign.as_str().to_string(),
            field: r.field.desc(),
            k: r.k,
            delta: r.field.index_of(r.delta),
            s: r.s,
            l: r.l.coeffs().iter().map(|&c| r.field.index_of(c)).collect(),
            id: None,
            inverse_of: None,
        }
    }

    pub fn to_recipe(&self, max_bits: u32) -> Result<SpecialRecipe> {
        if self.family != "special" {
            return Err(Error::UnknownFamily);
        }
        let field = Field::from_desc(&self.field, max_bits)?;
        let sign = Sign::parse(&self.sign).ok_or(Error::InvalidParameter("sign"))?;
        let delta = field.element_at(self.delta)?;
        let coeffs = self
            .l
            .iter()
            .map(|&i| field.element_at(i))
            .collect::<Result<Vec<_>>>()?;
        let l = LinearizedMap::new(&field, self.k, coeffs)?;
        SpecialRecipe::new(&field, self.k, l, delta, self.s, sign)
    }
}

/// The reduced-criterion verdict for a special recipe: the binary subfield
/// map for `p = 2` with `L = id`, the kernel map for odd `p` when `L` has
/// subfield coefficients, and `None` outside both scopes.
pub fn special_prediction(r: &SpecialRecipe) -> Result<Option<bool>> {
    let f = &r.field;
    if f.p() == 2 {
        if r.l.is_identity() {
            return predicate_var1(f, r.delta, r.s, r.k).map(Some);
        }
        return Ok(None);
    }
    if r.sign == Sign::Minus && r.l.has_subfield_coefficients() && r.l.is_permutation() {
        return Ok(Some(kernel_reduction(r)?.is_permutation()));
    }
    Ok(None)
}

pub fn replay_special(spec: &SpecialSpec, max_bits: u32) -> Result<Replayed> {
    let r = spec.to_recipe(max_bits)?;
    let table = build_special(&r)?;
    let predicted = special_prediction(&r)?;
    let inverse = special_inverse(&r, &table)?;
    let mut out = Replayed {
        field: r.field.clone(),
        predicted_permutation: predicted.unwrap_or_else(|| table.is_permutation()),
        table,
        inverse,
    };
    if spec.inverse_of.is_some() {
        out.table = out.inverse.clone().ok_or(Error::PreconditionFailed(
            "family has no closed-form inverse for these parameters",
        ))?;
    }
    Ok(out)
}

/// `F∘F` for binary `L = id` with `δ ∈ GF(2^k)`; `F_{p-1}` for odd `p`, even
/// `s` and `δ ∈ S`.
fn special_inverse(r: &SpecialRecipe, table: &FuncTable) -> Result<Option<FuncTable>> {
    let f = &r.field;
    if !r.l.is_identity() {
        return Ok(None);
    }
    if f.p() == 2 {
        if f.in_subfield(r.k, r.delta) {
            return Ok(Some(table.clone()));
        }
        return Ok(None);
    }
    if r.s.is_multiple_of(2) && r.sign == Sign::Minus && f.in_trace_kernel(r.k, r.delta) {
        return special_inverse_even_s(r).map(Some);
    }
    Ok(None)
}

pub fn replay_any(r: &AnyRecipe, max_bits: u32) -> Result<Replayed> {
    match r {
        AnyRecipe::Special(s) => replay_special(s, max_bits),
        AnyRecipe::General(g) => replay(g, max_bits),
    }
}

/// The `b` of a translator recipe, for reporting.
pub fn translator_b(field: &Field, r: &Recipe) -> Result<Element> {
    let p = Params { field, map: &r.params };
    let f = affine_trace(field, r.k, p.elem("beta")?, p.elem("a")?)?;
    Ok(field.sub(f.eval(p.elem("gamma")?), f.eval(Element::ZERO)))
}

/// `g_map` of a recipe's own `h` at its translator constant.
pub fn translator_g(field: &Field, r: &Recipe) -> Result<FuncTable> {
    let p = Params { field, map: &r.params };
    g_map(&p.subfield_table("h", r.k)?, translator_b(field, r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::subfield_monomial;
    use crate::field::HARD_MAX_FIELD_BITS;

    #[test]
    fn translator_recipe_replays() {
        let f = Field::new(2, 4).unwrap();
        let h = subfield_monomial(&f, 2, f.one(), 2).unwrap();
        let r = Recipe::new(Family::Translator, &f, 2)
            .elem("beta", &f, f.generator())
            .elem("a", &f, f.zero())
            .elem("gamma", &f, f.nonzero()[4])
            .list("L", alloc::vec![1, 0])
            .list("h", table_indices(&h));
        let (sealed, rep) = r.sealed(HARD_MAX_FIELD_BITS).unwrap();
        assert_eq!(sealed.verified.is_permutation, sealed.verified.g_is_permutation);
        let again = replay(&sealed, HARD_MAX_FIELD_BITS).unwrap();
        assert_eq!(again.table, rep.table);
        assert_eq!(translator_g(&f, &sealed).unwrap().is_permutation(), rep.predicted_permutation);
    }

    #[test]
    fn inverse_recipe() {
        let f = Field::new(3, 2).unwrap();
        let gamma = *f
            .nonzero()
            .iter()
            .find(|&&g| f.rel_trace(1, g).unwrap().is_zero())
            .unwrap();
        let mut r = Recipe::new(Family::TracePower, &f, 1)
            .elem("gamma", &f, gamma)
            .elem("delta", &f, f.one())
            .int("s", 2)
            .list("L", alloc::vec![1]);
        let fwd = replay(&r, 20).unwrap();
        r.inverse_of = Some("fwd".to_string());
        let inv = replay(&r, 20).unwrap();
        assert!(inv.table.compose(&fwd.table).unwrap().is_identity());
    }

    #[test]
    fn special_spec_round_trip() {
        let f = Field::new(3, 2).unwrap();
        let r = SpecialRecipe::with_identity(&f, 1, f.nonzero()[2], 4).unwrap();
        let spec = SpecialSpec::from_recipe(&r);
        assert_eq!(spec.to_recipe(20).unwrap(), r);
        let rep = replay_special(&spec, 20).unwrap();
        assert_eq!(rep.predicted_permutation, rep.table.is_permutation());
    }

    #[test]
    fn bad_params() {
        let f = Field::new(2, 4).unwrap();
        let r = Recipe::new(Family::Translator, &f, 2);
        assert_eq!(replay(&r, 20).unwrap_err(), Error::InvalidParameter("beta"));
        assert_eq!(Family::parse("nope").unwrap_err(), Error::UnknownFamily);
    }
}
