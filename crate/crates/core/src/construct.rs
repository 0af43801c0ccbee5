//! Permutations `F(x) = L(x) + L(γ) h(f(x))` built from linear translators,
//! binomial linear maps, and complete mappings.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Element, Field};
use crate::funcrep::{Domain, FuncTable, LinearizedMap};
use crate::translator::{quad_trace_translator, QuadTraceParams, TranslatorWitness};

/// A constructed table together with the verdict of its reduced criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub table: FuncTable,
    /// Whether `u ↦ u + b h(u)` permutes GF(p^k).
    pub g_is_permutation: bool,
    pub b: Element,
}

fn check_self_map(h: &FuncTable) -> Result<()> {
    match (h.domain(), h.codomain()) {
        (Domain::Full, Domain::Full) => Ok(()),
        (Domain::Subfield(a), Domain::Subfield(b)) if a == b => Ok(()),
        _ => Err(Error::DomainMismatch),
    }
}

/// `u ↦ u + b h(u)` on the domain of `h`.
pub fn g_map(h: &FuncTable, b: Element) -> Result<FuncTable> {
    check_self_map(h)?;
    let field = h.field();
    if !h.codomain().contains(field, b) {
        return Err(Error::BNotInSubfield);
    }
    let values = h
        .domain_elements()
        .iter()
        .zip(h.values())
        .map(|(&u, &hu)| field.add(u, field.mul(b, hu)))
        .collect();
    FuncTable::from_values(field, h.domain(), h.codomain(), values)
}

/// Both `h` and `u ↦ u + b h(u)` are permutations.
pub fn is_b_complete(h: &FuncTable, b: Element) -> bool {
    h.is_permutation() && g_map(h, b).map(|g| g.is_permutation()).unwrap_or(false)
}

/// Every `b` for which `u ↦ u + b h(u)` permutes the domain of `h`.
pub fn complete_b_values(h: &FuncTable) -> Result<Vec<Element>> {
    check_self_map(h)?;
    let mut out = Vec::new();
    for &b in h.domain_elements() {
        if g_map(h, b)?.is_permutation() {
            out.push(b);
        }
    }
    Ok(out)
}

/// `L(x) + L(γ) h(f(x))` without any scope checks.
pub(crate) fn assemble(
    l: &LinearizedMap,
    gamma: Element,
    h: &FuncTable,
    f: &FuncTable,
) -> Result<FuncTable> {
    let field = l.field();
    if h.field() != field || f.field() != field {
        return Err(Error::FieldMismatch);
    }
    let k = l.k();
    if h.domain() != Domain::Subfield(k) || h.codomain() != Domain::Subfield(k) {
        return Err(Error::DomainMismatch);
    }
    if f.domain() != Domain::Full || f.codomain() != Domain::Subfield(k) {
        return Err(Error::DomainMismatch);
    }
    let lg = l.eval(gamma);
    let values = field
        .elements()
        .iter()
        .zip(f.values())
        .map(|(&x, &fx)| field.add(l.eval(x), field.mul(lg, h.eval(fx))))
        .collect();
    FuncTable::from_values(field, Domain::Full, Domain::Full, values)
}

/// `F(x) = L(x) + L(γ) h(f(x))` for a verified `b`-translator `γ` of `f`.
/// `F` permutes GF(p^n) exactly when `u ↦ u + b h(u)` permutes GF(p^k).
pub fn build_translator_permutation(
    l: &LinearizedMap,
    h: &FuncTable,
    w: &TranslatorWitness,
) -> Result<Construction> {
    let field = l.field();
    if w.field() != field {
        return Err(Error::FieldMismatch);
    }
    if w.k() != l.k() {
        return Err(Error::DomainMismatch);
    }
    if l.k() == 1 || l.k() == field.n() {
        return Err(Error::KTooSmall);
    }
    if !l.is_permutation() {
        return Err(Error::LNotPermutation);
    }
    if !w.reverify() {
        return Err(Error::WitnessInvalid);
    }
    let table = assemble(l, w.gamma(), h, w.f())?;
    let g_is_permutation = g_map(h, w.b())?.is_permutation();
    Ok(Construction { table, g_is_permutation, b: w.b() })
}

/// `a x + b x^{p^k}` on GF(p^{2k}) with its closed-form predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearBinomial {
    pub map: LinearizedMap,
    /// `(a/b)^{p^k + 1} != 1`.
    pub is_perm: bool,
    /// `T^n_k(a) = 0` and `b^{p^k + 1} = 1 - a^2`.
    pub is_invol: bool,
}

pub fn linear_binomial(field: &Field, a: Element, b: Element, k: u32) -> Result<LinearBinomial> {
    if field.n() != 2 * k {
        return Err(Error::InvalidParameter("binomial linear map needs n = 2k"));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidParameter("binomial linear map needs a, b != 0"));
    }
    let map = LinearizedMap::binomial(field, k, a, b)?;
    let e = (field.p() as u64).pow(k) + 1;
    let is_perm = field.pow(field.div(a, b)?, e) != field.one();
    let is_invol = field.rel_trace(k, a)?.is_zero()
        && field.pow(b, e) == field.sub(field.one(), field.mul(a, a));
    Ok(LinearBinomial { map, is_perm, is_invol })
}

/// `h(x) = x^{2^{2m}+1} + x^{2^m+1} + ν x` on GF(2^{3m}) and the `b` it is
/// guaranteed complete for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trinomial {
    pub m: u32,
    pub nu: Element,
    pub h: FuncTable,
    /// GF(2^m) without 0 and `ν^{-1}`, in enumeration order.
    pub admissible_b: Vec<Element>,
}

pub fn trinomial_cpp(field: &Field, nu: Element) -> Result<Trinomial> {
    if field.p() != 2 || !field.n().is_multiple_of(3) {
        return Err(Error::InvalidParameter("trinomial family lives on GF(2^{3m})"));
    }
    let m = field.n() / 3;
    if nu.is_zero() || nu == field.one() || !field.in_subfield(m, nu) {
        return Err(Error::NuInvalid);
    }
    let e1 = (1u64 << (2 * m)) + 1;
    let e2 = (1u64 << m) + 1;
    let h = FuncTable::from_fn(field, |x| {
        field.add(field.add(field.pow(x, e1), field.pow(x, e2)), field.mul(nu, x))
    });
    let nu_inv = field.inv(nu)?;
    let admissible_b = field
        .subfield_view(m)?
        .elements
        .into_iter()
        .filter(|&b| !b.is_zero() && b != nu_inv)
        .collect();
    Ok(Trinomial { m, nu, h, admissible_b })
}

/// `L(x) + L(γ) h(T^n_k(β x^{2^i + 2^{i+lk}}))` with `i ≡ -1 (mod k)` over a
/// binary field; the translator constant is `T^n_k(β γ^{2^i + 2^{i+lk}})`.
pub fn cr_quad_family(
    q: &QuadTraceParams,
    gamma: Element,
    l: &LinearizedMap,
    h: &FuncTable,
) -> Result<Construction> {
    let field = l.field();
    if field.p() != 2 {
        return Err(Error::InvalidParameter("quadratic trace family needs p = 2"));
    }
    if !(q.i + 1).is_multiple_of(q.k) {
        return Err(Error::InvalidParameter("need i = sk - 1"));
    }
    let w = quad_trace_translator(field, q, gamma)?
        .ok_or(Error::InvariantViolation("quadratic trace translator missing"))?;
    build_translator_permutation(l, h, &w)
}

/// `x ↦ T^n_k(βx) + a` as a table into GF(p^k).
pub fn affine_trace(field: &Field, k: u32, beta: Element, a: Element) -> Result<FuncTable> {
    let r = field.check_divisor(k)?;
    if !field.in_subfield(k, a) {
        return Err(Error::CodomainViolation);
    }
    FuncTable::tabulate(field, Domain::Full, Domain::Subfield(k), |x| {
        field.add(field.rel_trace_unchecked(k, r, field.mul(beta, x)), a)
    })
}

/// `u ↦ c u^d` on GF(p^k).
pub fn subfield_monomial(field: &Field, k: u32, c: Element, d: u64) -> Result<FuncTable> {
    if !field.in_subfield(k, c) {
        return Err(Error::CodomainViolation);
    }
    FuncTable::tabulate(field, Domain::Subfield(k), Domain::Subfield(k), |u| {
        field.mul(c, field.pow(u, d))
    })
}

/// The identity of GF(p^k) as a table.
pub fn subfield_identity(field: &Field, k: u32) -> Result<FuncTable> {
    FuncTable::tabulate(field, Domain::Subfield(k), Domain::Subfield(k), |u| u)
}

/// A self-map of GF(p^k) given by positions in the subfield's own
/// enumeration order.
pub fn subfield_table_from_positions(field: &Field, k: u32, positions: &[u32]) -> Result<FuncTable> {
    let elements = field.subfield_view(k)?.elements;
    if positions.len() != elements.len() {
        return Err(Error::DomainMismatch);
    }
    let values = positions
        .iter()
        .map(|&i| elements.get(i as usize).copied().ok_or(Error::CodomainViolation))
        .collect::<Result<Vec<_>>>()?;
    FuncTable::from_values(field, Domain::Subfield(k), Domain::Subfield(k), values)
}
