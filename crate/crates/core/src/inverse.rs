//! Iterated compositions and closed-form inverses of translator permutations.

use crate::construct::{assemble, g_map};
use crate::error::{Error, Result};
use crate::field::{Element, Field};
use crate::funcrep::{Domain, FuncTable, LinearizedMap};
use crate::translator::{quad_trace_translator, QuadTraceParams, TranslatorWitness};

fn identity_l(w: &TranslatorWitness) -> Result<LinearizedMap> {
    LinearizedMap::identity(w.field(), w.k())
}

/// Compares `F∘F` for `F(x) = x + γ h(f(x))` with
/// `x + γ h(f(x)) + γ h(b h(f(x)) + f(x))`.
pub fn two_fold_check(w: &TranslatorWitness, h: &FuncTable) -> Result<bool> {
    let field = w.field();
    let f = w.f();
    let gamma = w.gamma();
    let b = w.b();
    let big_f = assemble(&identity_l(w)?, gamma, h, f)?;
    let twice = big_f.t_fold(2)?;
    let closed = FuncTable::from_fn(field, |x| {
        let hf = h.eval(f.eval(x));
        let inner = field.add(field.mul(b, hf), f.eval(x));
        field.add(x, field.mul(gamma, field.add(hf, h.eval(inner))))
    });
    Ok(twice == closed)
}

/// Inverse of `F(x) = L(x) + L(γ) h(f(x))` when `b = 0`:
/// `y + (p-1) γ h(f(y))` with `y = L^{-1}(x)`.
pub fn inverse_b0(w: &TranslatorWitness, h: &FuncTable, l: &LinearizedMap) -> Result<FuncTable> {
    if !w.b().is_zero() {
        return Err(Error::BNonzero);
    }
    let field = w.field();
    if l.field() != field {
        return Err(Error::FieldMismatch);
    }
    if l.k() != w.k() {
        return Err(Error::DomainMismatch);
    }
    let l_inv = l.inverse_table()?;
    let f = w.f();
    let c = field.mul(field.scalar(field.p() as i64 - 1), w.gamma());
    Ok(FuncTable::from_fn(field, |x| {
        let y = l_inv.eval(x);
        field.add(y, field.mul(c, h.eval(f.eval(y))))
    }))
}

/// A permutation built from a 0-translator together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvertedFamily {
    pub table: FuncTable,
    pub inverse: FuncTable,
    pub is_permutation: bool,
    pub inverse_verified: bool,
}

fn two_sided(f: &FuncTable, g: &FuncTable) -> Result<bool> {
    Ok(g.compose(f)?.is_identity() && f.compose(g)?.is_identity())
}

/// `F(x) = L(x) + L(γ) h(T^n_k(x^{p^i + p^{i+lk}}))` for odd `p`, where `γ`
/// satisfies `γ^{p^{2kl} - 1} = -1` and `T^n_k(γ^{1 + p^{lk}}) = 0`.
pub fn zero_translator_family(
    field: &Field,
    gamma: Element,
    i: u32,
    l: u32,
    l_map: &LinearizedMap,
    h: &FuncTable,
) -> Result<InvertedFamily> {
    if field.p() == 2 {
        return Err(Error::InvalidParameter("family needs odd p"));
    }
    let k = l_map.k();
    let r = field.check_divisor(k)?;
    let q = QuadTraceParams::new(field, field.one(), i, l, k)?;
    if gamma.is_zero() {
        return Err(Error::GammaConditionFailed);
    }
    let e = (field.p() as u64).pow(2 * k * l) - 1;
    let cond1 = field.pow(gamma, e) == field.scalar(-1);
    let pl = (field.p() as u64).pow(l * k);
    let cond2 = field
        .rel_trace_unchecked(k, r, field.pow(gamma, 1 + pl))
        .is_zero();
    if !cond1 || !cond2 {
        return Err(Error::GammaConditionFailed);
    }
    let w = quad_trace_translator(field, &q, gamma)?
        .ok_or(Error::InvariantViolation("0-translator conditions did not yield b = 0"))?;
    if !w.b().is_zero() {
        return Err(Error::InvariantViolation("0-translator conditions did not yield b = 0"));
    }
    let table = assemble(l_map, gamma, h, w.f())?;
    let inverse = inverse_b0(&w, h, l_map)?;
    Ok(InvertedFamily {
        is_permutation: table.is_permutation(),
        inverse_verified: two_sided(&table, &inverse)?,
        table,
        inverse,
    })
}

/// `F(x) = x + γ λ f(x)` for a `b`-translator with `b != 0` and odd `p`.
/// `λ = -2/b` makes `F` an involution.
pub fn involution_scaled(w: &TranslatorWitness, lambda: Element) -> Result<FuncTable> {
    let field = w.field();
    if field.p() == 2 {
        return Err(Error::PreconditionFailed("scaled involutions need odd p"));
    }
    let b = w.b();
    if b.is_zero() {
        return Err(Error::PreconditionFailed("scaled involutions need b != 0"));
    }
    let k = w.k();
    if lambda.is_zero() || !field.in_subfield(k, lambda) {
        return Err(Error::InvalidParameter("lambda must be a nonzero subfield element"));
    }
    if field.add(field.one(), field.mul(lambda, b)).is_zero() {
        return Err(Error::LambdaForbidden);
    }
    let h = FuncTable::tabulate(field, Domain::Subfield(k), Domain::Subfield(k), |u| {
        field.mul(lambda, u)
    })?;
    debug_assert!(g_map(&h, b)?.is_permutation());
    let table = assemble(&identity_l(w)?, w.gamma(), &h, w.f())?;
    if !table.is_permutation() {
        return Err(Error::InvariantViolation("scaled construction is not a permutation"));
    }
    Ok(table)
}

/// `-2 b^{-1}`.
pub fn involution_lambda(field: &Field, b: Element) -> Result<Element> {
    Ok(field.mul(field.scalar(-2), field.inv(b)?))
}
