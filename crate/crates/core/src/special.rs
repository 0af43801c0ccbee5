//! The class `F(x) = L(x) + (x^{p^k} ± x + δ)^s` over GF(p^{2k}) and its
//! reductions to maps of GF(p^k) or of the trace kernel.

use alloc::vec::Vec;

use crate::construct::{assemble, g_map};
use crate::error::{Error, Result};
use crate::field::{Element, Field};
use crate::funcrep::{Domain, FuncTable, LinearizedMap, SpectrumRow};
use crate::inverse::inverse_b0;
use crate::translator::TranslatorWitness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    /// `x^{p^k} + x + δ`.
    Plus,
    /// `x^{p^k} - x + δ`.
    Minus,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "plus" => Some(Sign::Plus),
            "minus" => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialRecipe {
    pub field: Field,
    pub k: u32,
    pub l: LinearizedMap,
    pub delta: Element,
    pub s: u64,
    pub sign: Sign,
}

impl SpecialRecipe {
    pub fn new(
        field: &Field,
        k: u32,
        l: LinearizedMap,
        delta: Element,
        s: u64,
        sign: Sign,
    ) -> Result<SpecialRecipe> {
        let recipe = SpecialRecipe { field: field.clone(), k, l, delta, s, sign };
        recipe.validate()?;
        Ok(recipe)
    }

    /// `F(x) = x + (x^{p^k} - x + δ)^s`.
    pub fn with_identity(field: &Field, k: u32, delta: Element, s: u64) -> Result<SpecialRecipe> {
        let l = LinearizedMap::identity(field, k)?;
        SpecialRecipe::new(field, k, l, delta, s, Sign::Minus)
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        if f.n() != 2 * self.k {
            return Err(Error::InvariantViolation("special class needs n = 2k"));
        }
        if self.s > f.order() as u64 - 2 {
            return Err(Error::InvariantViolation("s must lie in [0, p^n - 2]"));
        }
        if !f.contains(self.delta) {
            return Err(Error::FieldMismatch);
        }
        if self.l.field() != f || self.l.k() != self.k {
            return Err(Error::InvariantViolation("L must be linear over GF(p^k)"));
        }
        Ok(())
    }

    /// `x^{p^k} ± x + δ`.
    pub fn inner(&self, x: Element) -> Element {
        let f = &self.field;
        let fx = f.frobenius(x, self.k);
        let lin = match self.sign {
            Sign::Plus => f.add(fx, x),
            Sign::Minus => f.sub(fx, x),
        };
        f.add(lin, self.delta)
    }

    pub fn eval(&self, x: Element) -> Element {
        let f = &self.field;
        f.add(self.l.eval(x), f.pow(self.inner(x), self.s))
    }
}

pub fn build_special(r: &SpecialRecipe) -> Result<FuncTable> {
    r.validate()?;
    Ok(FuncTable::from_fn(&r.field, |x| r.eval(x)))
}

fn check_char2(field: &Field, k: u32) -> Result<()> {
    if field.p() != 2 || field.n() != 2 * k {
        return Err(Error::PreconditionFailed("binary reduction needs p = 2 and n = 2k"));
    }
    Ok(())
}

fn check_oddp(field: &Field, k: u32) -> Result<()> {
    if field.p() == 2 || field.n() != 2 * k {
        return Err(Error::PreconditionFailed("kernel reduction needs odd p and n = 2k"));
    }
    Ok(())
}

/// `g(y) = y + (y+δ)^s + (y+δ)^{2^k s}` on GF(2^k).
pub fn g_reduction_char2(field: &Field, delta: Element, s: u64, k: u32) -> Result<FuncTable> {
    check_char2(field, k)?;
    FuncTable::tabulate(field, Domain::Subfield(k), Domain::Subfield(k), |y| {
        let z = field.pow(field.add(y, delta), s);
        field.add(y, field.add(z, field.frobenius(z, k)))
    })
}

/// `x + (x^{2^k} + x + δ)^s` permutes GF(2^{2k}) iff `g` permutes GF(2^k).
pub fn predicate_var1(field: &Field, delta: Element, s: u64, k: u32) -> Result<bool> {
    Ok(g_reduction_char2(field, delta, s, k)?.is_permutation())
}

/// One component row of `F` next to its reduced prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumIdentity {
    pub lhs: SpectrumRow,
    /// The reduced side, present when `λ` is in the reduction's range.
    pub rhs: Option<Vec<i64>>,
    pub holds: bool,
}

/// For `λ ∉ GF(2^k)` the component `Tr(λF)` is balanced; for `λ ∈ GF(2^k)*`
/// its Walsh value equals `2^k sum_y (-1)^{T^k_1(λ g(y))}`.
pub fn spectrum_identity_char2(
    field: &Field,
    delta: Element,
    s: u64,
    k: u32,
    lambda: Element,
) -> Result<SpectrumIdentity> {
    check_char2(field, k)?;
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let recipe = SpecialRecipe::with_identity(field, k, delta, s)?;
    let lhs = build_special(&recipe)?.component_spectrum(lambda)?;
    if !field.in_subfield(k, lambda) {
        let holds = lhs.is_balanced();
        return Ok(SpectrumIdentity { lhs, rhs: None, holds });
    }
    let g = g_reduction_char2(field, delta, s, k)?;
    let mut sum = 0i64;
    for &gy in g.values() {
        sum += match field.subfield_abs_trace(k, field.mul(lambda, gy))? {
            0 => 1,
            _ => -1,
        };
    }
    let rhs = (1i64 << k) * sum;
    let holds = lhs.walsh_value() == Some(rhs);
    Ok(SpectrumIdentity { lhs, rhs: Some(alloc::vec![rhs]), holds })
}

/// `G(y) = -L(y) + (y+δ)^s - (y+δ)^{p^k s}` on the kernel `S` of `T^n_k`.
pub fn kernel_reduction(r: &SpecialRecipe) -> Result<FuncTable> {
    r.validate()?;
    let field = &r.field;
    check_oddp(field, r.k)?;
    if r.sign != Sign::Minus {
        return Err(Error::PreconditionFailed("kernel reduction needs x^{p^k} - x + δ"));
    }
    if !r.l.has_subfield_coefficients() {
        return Err(Error::PreconditionFailed("L needs coefficients in GF(p^k)"));
    }
    if !r.l.is_permutation() {
        return Err(Error::LNotPermutation);
    }
    let k = r.k;
    FuncTable::tabulate(field, Domain::Kernel(k), Domain::Kernel(k), |y| {
        let z = field.pow(field.add(y, r.delta), r.s);
        field.add(field.neg(r.l.eval(y)), field.sub(z, field.frobenius(z, k)))
    })
    .map_err(|e| match e {
        Error::CodomainViolation => Error::ImageEscapesS,
        e => e,
    })
}

/// `F` permutes GF(p^{2k}) iff `G` permutes `S`.
pub fn predicate_var2(r: &SpecialRecipe) -> Result<bool> {
    Ok(kernel_reduction(r)?.is_permutation())
}

/// For `λ ∉ S` the component `Tr(λF)` is balanced; for `λ ∈ S*` the residue
/// counts of `Tr(λF)` are `p^k` times those of `T^k_1(λ G(y))` over `S`.
pub fn spectrum_identity_oddp(r: &SpecialRecipe, lambda: Element) -> Result<SpectrumIdentity> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let g = kernel_reduction(r)?;
    let field = &r.field;
    let lhs = build_special(r)?.component_spectrum(lambda)?;
    if !field.in_trace_kernel(r.k, lambda) {
        let holds = lhs.is_balanced();
        return Ok(SpectrumIdentity { lhs, rhs: None, holds });
    }
    let scale = (field.p() as i64).pow(r.k);
    let mut counts = alloc::vec![0i64; field.p() as usize];
    for &gy in g.values() {
        counts[field.subfield_abs_trace(r.k, field.mul(lambda, gy))? as usize] += scale;
    }
    let holds = lhs.counts.iter().zip(&counts).all(|(&a, &b)| a as i64 == b);
    Ok(SpectrumIdentity { lhs, rhs: Some(counts), holds })
}

/// `F^{-1} = F_{p-1}` for `F(x) = x + (x^{p^k} - x + δ)^s` with even `s`
/// and `T^n_k(δ) = 0`.
pub fn special_inverse_even_s(r: &SpecialRecipe) -> Result<FuncTable> {
    r.validate()?;
    let field = &r.field;
    if field.p() == 2 {
        return Err(Error::PreconditionFailed("needs odd p"));
    }
    if !r.s.is_multiple_of(2) {
        return Err(Error::PreconditionFailed("needs even s"));
    }
    if r.sign != Sign::Minus || !r.l.is_identity() {
        return Err(Error::PreconditionFailed("needs L = id and x^{p^k} - x + δ"));
    }
    if !field.in_trace_kernel(r.k, r.delta) {
        return Err(Error::PreconditionFailed("needs T^n_k(δ) = 0"));
    }
    let big = build_special(r)?;
    let inv = big.t_fold(field.p() - 1)?;
    if !(inv.compose(&big)?.is_identity() && big.compose(&inv)?.is_identity()) {
        return Err(Error::InvariantViolation("(p-1)-fold composition is not the inverse"));
    }
    Ok(inv)
}

/// `F(x) = ρx + (x^{p^k} - x + δ)^{ℓ(p^k - 1) + 1}` with `δ ∈ S*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrSpe {
    pub s: u64,
    /// `ρ != 2(-1)^ℓ`.
    pub predicted: bool,
    /// Bijectivity of `y ↦ ρy - 2(-1)^ℓ y` on `S`, when it maps `S` to itself.
    pub reduced: Option<bool>,
    /// Exhaustive check on `F`.
    pub oracle: bool,
}

pub fn cr_spe_check(field: &Field, rho: Element, ell: u64, delta: Element, k: u32) -> Result<CrSpe> {
    check_oddp(field, k)?;
    if delta.is_zero() || !field.in_trace_kernel(k, delta) {
        return Err(Error::DeltaNotInS);
    }
    if rho.is_zero() || !field.contains(rho) {
        return Err(Error::InvalidParameter("rho must be a nonzero field element"));
    }
    let pk = (field.p() as u64).pow(k);
    if ell == 0 || ell > pk {
        return Err(Error::InvalidParameter("need 1 <= ell <= p^k"));
    }
    let s = ell * (pk - 1) + 1;
    let two_sign = field.scalar(if ell.is_multiple_of(2) { 2 } else { -2 });
    let predicted = rho != two_sign;
    let c = field.sub(rho, two_sign);
    let reduced = FuncTable::tabulate(field, Domain::Kernel(k), Domain::Kernel(k), |y| {
        field.mul(c, y)
    })
    .ok()
    .map(|t| t.is_permutation());
    let l = LinearizedMap::new(field, k, alloc::vec![rho])?;
    let recipe = SpecialRecipe::new(field, k, l, delta, s, Sign::Minus)?;
    let oracle = build_special(&recipe)?.is_permutation();
    Ok(CrSpe { s, predicted, reduced, oracle })
}

/// `F(x) = L(x) + L(γ)(x^{p^k} + x + δ)^s` with `δ ∈ GF(p^k)`: `γ` is a
/// `b`-translator of `x^{p^k} + x + δ` with `b = γ^{p^k} + γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePowerFamily {
    pub table: FuncTable,
    pub b: Element,
    /// `γ^{p^k} + γ == T^n_k(γ)`.
    pub b_matches_trace: bool,
    /// Whether `u ↦ u + b u^s` permutes GF(p^k).
    pub g_is_permutation: bool,
    /// `x + (p-1)γ(f(x))^s` precomposed with `L^{-1}`, when `b = 0`.
    pub inverse: Option<FuncTable>,
}

pub fn trace_power_family(
    field: &Field,
    gamma: Element,
    delta: Element,
    s: u64,
    l: &LinearizedMap,
) -> Result<TracePowerFamily> {
    let k = l.k();
    if field.n() != 2 * k {
        return Err(Error::InvariantViolation("family needs n = 2k"));
    }
    if !field.in_subfield(k, delta) {
        return Err(Error::InvalidParameter("delta must lie in GF(p^k)"));
    }
    if gamma.is_zero() {
        return Err(Error::GammaZero);
    }
    if !l.is_permutation() {
        return Err(Error::LNotPermutation);
    }
    let f = FuncTable::tabulate(field, Domain::Full, Domain::Subfield(k), |x| {
        field.add(field.add(field.frobenius(x, k), x), delta)
    })?;
    let b = field.add(field.frobenius(gamma, k), gamma);
    let b_matches_trace = b == field.rel_trace(k, gamma)?;
    let w = TranslatorWitness::new(f, gamma, b)
        .map_err(|_| Error::InvariantViolation("γ^{p^k} + γ is not the translator constant"))?;
    let h = FuncTable::tabulate(field, Domain::Subfield(k), Domain::Subfield(k), |u| {
        field.pow(u, s)
    })?;
    let table = assemble(l, gamma, &h, w.f())?;
    let g_is_permutation = g_map(&h, b)?.is_permutation();
    let inverse = if b.is_zero() {
        Some(inverse_b0(&w, &h, l)?)
    } else {
        None
    };
    Ok(TracePowerFamily { table, b, b_matches_trace, g_is_permutation, inverse })
}

/// Checks that `x ↦ h(x^{p^k} - x) L(x) + g(x^{p^k} - x)` permutes GF(p^{2k})
/// iff `y ↦ h(y) L(y) + g(y)^{p^k} - g(y)` permutes `S`, and returns the
/// shared verdict. `g` and `h` are tables on `S`; `h` takes nonzero values in
/// GF(p^k).
pub fn agw_reduction(l: &LinearizedMap, g: &FuncTable, h: &FuncTable) -> Result<bool> {
    let field = l.field();
    let k = l.k();
    if field.n() != 2 * k {
        return Err(Error::PreconditionFailed("needs n = 2k"));
    }
    if !l.has_subfield_coefficients() {
        return Err(Error::PreconditionFailed("L needs coefficients in GF(p^k)"));
    }
    if !l.is_permutation() {
        return Err(Error::LNotPermutation);
    }
    if g.domain() != Domain::Kernel(k) || h.domain() != Domain::Kernel(k) {
        return Err(Error::DomainMismatch);
    }
    if h.values().iter().any(|&v| v.is_zero() || !field.in_subfield(k, v)) {
        return Err(Error::HNotSubfieldValued);
    }
    let big = FuncTable::from_fn(field, |x| {
        let y = field.sub(field.frobenius(x, k), x);
        field.add(field.mul(h.eval(y), l.eval(x)), g.eval(y))
    });
    let small = FuncTable::tabulate(field, Domain::Kernel(k), Domain::Kernel(k), |y| {
        let gy = g.eval(y);
        field.add(field.mul(h.eval(y), l.eval(y)), field.sub(field.frobenius(gy, k), gy))
    })
    .map_err(|_| Error::InvariantViolation("reduced map leaves S"))?;
    let lhs = big.is_permutation();
    if lhs != small.is_permutation() {
        return Err(Error::InvariantViolation("reduced criterion disagrees with the full map"));
    }
    Ok(lhs)
}
