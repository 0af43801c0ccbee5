//! Linear translators: exhaustive detection and search, plus the algebraic
//! filters that rule them out for monomials, binomials and trace monomials.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Element, Field};
use crate::funcrep::{Domain, FuncTable};

/// A verified triple `(f, γ, b)` with `f(x + uγ) - f(x) = u b` for every
/// `x` in GF(p^n) and `u` in GF(p^k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslatorWitness {
    f: FuncTable,
    gamma: Element,
    b: Element,
    k: u32,
}

impl TranslatorWitness {
    /// Verifies the triple exhaustively.
    pub fn new(f: FuncTable, gamma: Element, b: Element) -> Result<TranslatorWitness> {
        if !is_translator(&f, gamma, b)? {
            return Err(Error::WitnessInvalid);
        }
        let k = subfield_degree(&f)?;
        Ok(TranslatorWitness { f, gamma, b, k })
    }

    pub fn f(&self) -> &FuncTable {
        &self.f
    }

    pub fn gamma(&self) -> Element {
        self.gamma
    }

    pub fn b(&self) -> Element {
        self.b
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    /// Re-runs the exhaustive check.
    pub fn reverify(&self) -> bool {
        is_translator(&self.f, self.gamma, self.b).unwrap_or(false)
    }
}

fn subfield_degree(f: &FuncTable) -> Result<u32> {
    match (f.domain(), f.codomain()) {
        (Domain::Full, Domain::Subfield(k)) => Ok(k),
        _ => Err(Error::DomainMismatch),
    }
}

/// Exhaustive check of the translator identity over all `(x, u)`.
pub fn is_translator(f: &FuncTable, gamma: Element, b: Element) -> Result<bool> {
    let k = subfield_degree(f)?;
    let field = f.field();
    if gamma.is_zero() {
        return Err(Error::GammaZero);
    }
    if !field.contains(gamma) {
        return Err(Error::FieldMismatch);
    }
    if !field.in_subfield(k, b) {
        return Err(Error::BNotInSubfield);
    }
    Ok(holds_for_all(f, k, gamma, b))
}

fn holds_for_all(f: &FuncTable, k: u32, gamma: Element, b: Element) -> bool {
    let field = f.field();
    let values = f.values();
    let subfield = FuncTable::tabulate(field, Domain::Subfield(k), Domain::Subfield(k), |u| u)
        .expect("k divides n");
    for &u in subfield.domain_elements() {
        let shift = field.mul(u, gamma);
        let ub = field.mul(u, b);
        for (&x, &fx) in field.elements().iter().zip(values) {
            let fy = values[field.index_of(field.add(x, shift)) as usize];
            if field.sub(fy, fx) != ub {
                return false;
            }
        }
    }
    true
}

/// All translators of `f`, in enumeration order of γ. For a fixed γ the only
/// candidate is `b = f(γ) - f(0)`.
pub fn find_translators(f: &FuncTable) -> Result<Vec<TranslatorWitness>> {
    let k = subfield_degree(f)?;
    let field = f.field();
    let f0 = f.eval(Element::ZERO);
    Ok(field
        .nonzero()
        .iter()
        .filter_map(|&gamma| {
            let b = field.sub(f.eval(gamma), f0);
            holds_for_all(f, k, gamma, b).then(|| TranslatorWitness {
                f: f.clone(),
                gamma,
                b,
                k,
            })
        })
        .collect())
}

/// `binom(n, k) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        // small binomial via multiplicative formula mod p
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..kd {
            num = num * (nd - i) % p;
            den = den * (i + 1) % p;
        }
        acc = acc * num % p * crate::poly::inv_mod(den as u32, p as u32) as u64 % p;
        n /= p;
        k /= p;
    }
    acc as u32
}

/// True iff every base-p digit of `t` is at most the matching digit of `d`.
pub fn lucas_dominates(mut t: u64, mut d: u64, p: u32) -> bool {
    let p = p as u64;
    while t > 0 {
        if t % p > d % p {
            return false;
        }
        t /= p;
        d /= p;
    }
    true
}

/// Coefficients `c_0 .. c_{q-2}` of `f(x + uγ) - f(x)` for
/// `f = sum_i coeffs[i] x^i` (zero-padded to length `q`).
pub fn derivative_coefficients(
    field: &Field,
    coeffs: &[Element],
    ugamma: Element,
) -> Result<Vec<Element>> {
    let q = field.order() as usize;
    if coeffs.len() > q {
        return Err(Error::InvalidParameter("more than p^n coefficients"));
    }
    let mut b = coeffs.to_vec();
    b.resize(q, Element::ZERO);
    let p = field.p();
    let mut out = vec![Element::ZERO; q - 1];
    for (t, c) in out.iter_mut().enumerate() {
        let mut acc = Element::ZERO;
        for (i, &bi) in b.iter().enumerate().skip(t + 1) {
            if bi.is_zero() {
                continue;
            }
            let binom = binom_mod_p(i as u64, t as u64, p);
            if binom == 0 {
                continue;
            }
            let term = field.mul(field.pow(ugamma, (i - t) as u64), bi);
            acc = field.add(acc, field.mul(field.scalar(binom as i64), term));
        }
        *c = acc;
    }
    Ok(out)
}

/// Exponents `d` for which `x^d` maps GF(p^n) into GF(p^k):
/// `j (p^n - 1)/(p^k - 1)` for `1 <= j <= p^k - 1`.
pub fn subfield_monomial_exponents(p: u32, n: u32, k: u32) -> Result<Vec<u64>> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::NotADivisor { k, n });
    }
    let pk = (p as u64).pow(k);
    let base = ((p as u64).pow(n) - 1) / (pk - 1);
    Ok((1..pk).map(|j| j * base).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinomialClass {
    /// `f = x^{p^e} + x^{p^{e+k}}` with `n = 2k`, the relative trace of
    /// `x^{p^e}`. Only `e = 0` has translators with `b != 0`.
    TraceForm { e: u32 },
    NoTranslator,
}

/// Classifies `f(x) = β x^i + x^j` (`i < j`, image in GF(p^k)).
pub fn classify_binomial(field: &Field, beta: Element, i: u64, j: u64, k: u32) -> Result<BinomialClass> {
    field.check_divisor(k)?;
    if i >= j {
        return Err(Error::InvalidParameter("binomial needs i < j"));
    }
    if beta.is_zero() {
        return Err(Error::InvalidParameter("binomial needs beta != 0"));
    }
    let p = field.p() as u64;
    let pk = p.pow(k);
    if field.n() != 2 * k || beta != field.one() {
        return Ok(BinomialClass::NoTranslator);
    }
    Ok((0..k)
        .find(|&e| i == p.pow(e) && j == p.pow(e) * pk)
        .map_or(BinomialClass::NoTranslator, |e| BinomialClass::TraceForm { e }))
}

/// Outcome of the digit filter on `f(x) = T^n_k(β x^d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMonomialVerdict {
    Impossible,
    /// `d = p^j`.
    Linear { j: u32 },
    /// `d = p^j (1 + p^i)` with `i ∉ {0, n/2}`.
    Quadratic { i: u32, j: u32 },
}

impl TraceMonomialVerdict {
    pub fn is_possible(self) -> bool {
        self != TraceMonomialVerdict::Impossible
    }
}

/// Necessary condition for `T^n_k(β x^d)` to have a linear translator, when
/// that function is not constant (`T^4_2(x^5)` vanishes identically). The
/// weight is the base-p digit sum, so `2 p^j` counts as weight two with `i = 0`.
pub fn trace_monomial_weight_filter(d: u64, p: u32, n: u32) -> Result<TraceMonomialVerdict> {
    let q = (p as u64).pow(n);
    if d == 0 || d >= q {
        return Err(Error::InvalidParameter("exponent must lie in [1, p^n - 1]"));
    }
    let mut positions = Vec::new();
    let mut v = d;
    let mut pos = 0u32;
    while v > 0 {
        for _ in 0..(v % p as u64) {
            positions.push(pos);
        }
        v /= p as u64;
        pos += 1;
    }
    Ok(match positions.as_slice() {
        [j] => TraceMonomialVerdict::Linear { j: *j },
        [a, b] => {
            let i = b - a;
            if i == 0 || (n.is_multiple_of(2) && i == n / 2) {
                TraceMonomialVerdict::Impossible
            } else {
                TraceMonomialVerdict::Quadratic { i, j: *a }
            }
        }
        _ => TraceMonomialVerdict::Impossible,
    })
}

/// `f(x) = T^n_k(β x^{p^i + p^{i + lk}})` with `0 < l < n/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadTraceParams {
    pub beta: Element,
    pub i: u32,
    pub l: u32,
    pub k: u32,
}

impl QuadTraceParams {
    pub fn new(field: &Field, beta: Element, i: u32, l: u32, k: u32) -> Result<QuadTraceParams> {
        let r = field.check_divisor(k)?;
        if l == 0 || l >= r {
            return Err(Error::InvalidParameter("need 0 < l < n/k"));
        }
        if beta.is_zero() || !field.contains(beta) {
            return Err(Error::InvalidParameter("beta must be a nonzero field element"));
        }
        Ok(QuadTraceParams { beta, i, l, k })
    }

    pub fn j(&self) -> u32 {
        self.i + self.k * self.l
    }

    /// `β x^{p^i + p^j}`, before the trace.
    pub fn inner(&self, field: &Field, x: Element) -> Element {
        field.mul(
            self.beta,
            field.mul(field.frobenius(x, self.i), field.frobenius(x, self.j())),
        )
    }

    pub fn eval(&self, field: &Field, x: Element) -> Element {
        let r = field.n() / self.k;
        field.rel_trace_unchecked(self.k, r, self.inner(field, x))
    }

    pub fn table(&self, field: &Field) -> FuncTable {
        FuncTable::tabulate(field, Domain::Full, Domain::Subfield(self.k), |x| self.eval(field, x))
            .expect("relative trace lands in the subfield")
    }
}

/// `β γ^{p^{i+lk}} + β^{p^{(r-l)k}} γ^{p^{i+(r-l)k}} = 0`, the condition for
/// the derivative of the quadratic trace to be independent of `x`.
pub fn quad_trace_condition(field: &Field, q: &QuadTraceParams, gamma: Element) -> Result<bool> {
    if gamma.is_zero() {
        return Err(Error::GammaZero);
    }
    let r = field.check_divisor(q.k)?;
    let back = (r - q.l) * q.k;
    let lhs = field.mul(q.beta, field.frobenius(gamma, q.i + q.l * q.k));
    let rhs = field.mul(
        field.frobenius(q.beta, back),
        field.frobenius(gamma, q.i + back),
    );
    Ok(field.add(lhs, rhs).is_zero())
}

/// The translator constant for γ when the quadratic trace condition holds:
/// for p = 2 the trace term `T^n_k(β γ^{2^i + 2^{i+lk}})` when `k | i + 1`,
/// otherwise 0 if that term vanishes; for odd p only `b = 0` is possible.
/// Returns the verified witness, or `None` when neither case applies.
pub fn quad_trace_translator(
    field: &Field,
    q: &QuadTraceParams,
    gamma: Element,
) -> Result<Option<TranslatorWitness>> {
    if !quad_trace_condition(field, q, gamma)? {
        return Err(Error::ConditionNotMet);
    }
    let r = field.n() / q.k;
    let term = field.rel_trace_unchecked(q.k, r, q.inner(field, gamma));
    let b = if field.p() == 2 && (q.i + 1).is_multiple_of(q.k) {
        term
    } else if term.is_zero() {
        Element::ZERO
    } else {
        return Ok(None);
    };
    let f = q.table(field);
    match TranslatorWitness::new(f, gamma, b) {
        Ok(w) => Ok(Some(w)),
        Err(Error::WitnessInvalid) => Err(Error::InvariantViolation(
            "quadratic trace translator failed exhaustive verification",
        )),
        Err(e) => Err(e),
    }
}
