//! Exact arithmetic in GF(p^n).
//!
//! Elements are stored packed: the little-endian coefficient vector
//! `(c_0, .., c_{n-1})` becomes the integer `sum c_i p^i`. The field
//! precomputes its enumeration order (0, then `g^0, g^1, .., g^{q-2}` for a
//! fixed primitive element `g`) together with the inverse index, so products,
//! powers and Frobenius maps are table lookups. Sums are XOR for `p = 2` and
//! Zech logarithms otherwise.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::poly;

/// Fields larger than `2^DEFAULT_MAX_FIELD_BITS` elements are rejected unless
/// the caller raises the cap.
pub const DEFAULT_MAX_FIELD_BITS: u32 = 20;
/// Absolute ceiling for the cap override.
pub const HARD_MAX_FIELD_BITS: u32 = 26;

/// A field element in packed little-endian base-`p` form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);

    pub const fn packed(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable description of a field: `{"p", "n", "modulus"}` with the
/// modulus coefficients little-endian (the leading 1 included).
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FieldDesc {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

struct Inner {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Element,
    /// `enumeration[0] = 0`, `enumeration[i] = g^{i-1}`.
    enumeration: Vec<Element>,
    /// Inverse of `enumeration`, indexed by packed value.
    index: Vec<u32>,
    /// `zech[d]` is the enumeration index of `1 + g^d` (odd p only).
    zech: Vec<u32>,
    /// `p^j mod (q - 1)` for `j < n`.
    frob_mult: Vec<u64>,
}

/// The ambient field GF(p^n). Cheap to clone; clones share tables.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl core::fmt::Debug for Field {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.inner.p)
            .field("n", &self.inner.n)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn digits(mut v: u32, p: u32, n: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(v % p);
        v /= p;
    }
    poly::trim(out)
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Lexicographically smallest monic irreducible of degree `n`, comparing the
/// coefficient vectors from the constant term upwards.
fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    let total = (p as u64).pow(n);
    for t in 0..total {
        let mut coeffs = vec![0u32; n as usize + 1];
        let mut v = t;
        for i in (0..n as usize).rev() {
            coeffs[i] = (v % p as u64) as u32;
            v /= p as u64;
        }
        coeffs[n as usize] = 1;
        if poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Validates `(p, n, modulus)` and builds the field under the default size cap.
pub fn make_field(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Field> {
    Field::with_cap(p, n, modulus, DEFAULT_MAX_FIELD_BITS)
}

impl Field {
    pub fn new(p: u32, n: u32) -> Result<Field> {
        make_field(p, n, None)
    }

    pub fn with_modulus(p: u32, n: u32, modulus: &[u32]) -> Result<Field> {
        make_field(p, n, Some(modulus))
    }

    pub fn from_desc(desc: &FieldDesc, max_bits: u32) -> Result<Field> {
        Field::with_cap(desc.p, desc.n, Some(&desc.modulus), max_bits)
    }

    pub fn with_cap(p: u32, n: u32, modulus: Option<&[u32]>, max_bits: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let max_bits = max_bits.min(HARD_MAX_FIELD_BITS);
        let q = (p as u64).checked_pow(n).filter(|&q| q <= 1u64 << max_bits);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p, n, max_bits });
        };
        let q = q as u32;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(Error::DegreeMismatch {
                        expected: n,
                        found: m.len().saturating_sub(1),
                    });
                }
                if m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus);
                }
                if !poly::is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus);
                }
                m.to_vec()
            }
            None => default_modulus(p, n),
        };

        let q1 = (q - 1) as u64;
        let factors = prime_factors(q1);
        let one = [1u32];
        let generator_digits = (1..q)
            .map(|v| digits(v, p, n))
            .find(|g| {
                factors
                    .iter()
                    .all(|&r| poly::powmod(g, q1 / r, &modulus, p) != one)
            })
            .expect("the multiplicative group is cyclic");
        let generator = Element(pack(&generator_digits, p));

        let mut enumeration = Vec::with_capacity(q as usize);
        enumeration.push(Element::ZERO);
        let mut cur = vec![1u32];
        for _ in 0..q1 {
            enumeration.push(Element(pack(&cur, p)));
            cur = poly::mulmod(&cur, &generator_digits, &modulus, p);
        }
        let mut index = vec![u32::MAX; q as usize];
        for (i, e) in enumeration.iter().enumerate() {
            index[e.0 as usize] = i as u32;
        }
        debug_assert!(index.iter().all(|&i| i != u32::MAX));

        let zech = if p == 2 {
            Vec::new()
        } else {
            (0..q1 as usize)
                .map(|d| {
                    let e = enumeration[d + 1].0;
                    let low = e % p;
                    index[(e - low + (low + 1) % p) as usize]
                })
                .collect()
        };

        let mut frob_mult = Vec::with_capacity(n as usize);
        let mut m = 1u64 % q1.max(1);
        for _ in 0..n {
            frob_mult.push(m);
            m = m * p as u64 % q1.max(1);
        }

        Ok(Field {
            inner: Arc::new(Inner {
                p,
                n,
                q,
                modulus,
                generator,
                enumeration,
                index,
                zech,
                frob_mult,
            }),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn n(&self) -> u32 {
        self.inner.n
    }

    /// Number of elements `p^n`.
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn generator(&self) -> Element {
        self.inner.generator
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc {
            p: self.inner.p,
            n: self.inner.n,
            modulus: self.inner.modulus.clone(),
        }
    }

    pub fn zero(&self) -> Element {
        Element::ZERO
    }

    pub fn one(&self) -> Element {
        Element(1)
    }

    /// The image of the integer `c` in the prime subfield.
    pub fn scalar(&self, c: i64) -> Element {
        Element(c.rem_euclid(self.inner.p as i64) as u32)
    }

    /// The root of the modulus, `x mod m(x)` (zero when n = 1 and m = x).
    pub fn root(&self) -> Element {
        if self.inner.n == 1 {
            let m0 = self.inner.modulus[0];
            Element((self.inner.p - m0) % self.inner.p)
        } else {
            Element(self.inner.p)
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Element> {
        if coeffs.len() > self.inner.n as usize || coeffs.iter().any(|&c| c >= self.inner.p) {
            return Err(Error::FieldMismatch);
        }
        Ok(Element(pack(coeffs, self.inner.p)))
    }

    pub fn from_packed(&self, v: u32) -> Result<Element> {
        if v >= self.inner.q {
            return Err(Error::FieldMismatch);
        }
        Ok(Element(v))
    }

    /// Little-endian coefficient vector of length n.
    pub fn coeffs(&self, e: Element) -> Vec<u32> {
        let mut v = e.0;
        (0..self.inner.n)
            .map(|_| {
                let c = v % self.inner.p;
                v /= self.inner.p;
                c
            })
            .collect()
    }

    pub fn contains(&self, e: Element) -> bool {
        e.0 < self.inner.q
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> &[Element] {
        &self.inner.enumeration
    }

    pub fn nonzero(&self) -> &[Element] {
        &self.inner.enumeration[1..]
    }

    pub fn element_at(&self, idx: u32) -> Result<Element> {
        self.inner
            .enumeration
            .get(idx as usize)
            .copied()
            .ok_or(Error::FieldMismatch)
    }

    /// Position of `e` in enumeration order.
    #[inline]
    pub fn index_of(&self, e: Element) -> u32 {
        self.inner.index[e.0 as usize]
    }

    /// Discrete logarithm to the fixed generator, `None` for zero.
    #[inline]
    pub fn log(&self, e: Element) -> Option<u32> {
        if e.0 == 0 {
            None
        } else {
            Some(self.inner.index[e.0 as usize] - 1)
        }
    }

    #[inline]
    fn elem_from_log(&self, l: u64) -> Element {
        let q1 = (self.inner.q - 1) as u64;
        self.inner.enumeration[1 + (l % q1) as usize]
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        if self.inner.p == 2 {
            return Element(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let q1 = self.inner.q - 1;
        let la = self.inner.index[a.0 as usize] - 1;
        let lb = self.inner.index[b.0 as usize] - 1;
        let d = (lb + q1 - la) % q1;
        let z = self.inner.zech[d as usize];
        if z == 0 {
            Element::ZERO
        } else {
            self.elem_from_log(la as u64 + (z - 1) as u64)
        }
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        if self.inner.p == 2 || a.0 == 0 {
            return a;
        }
        let q1 = (self.inner.q - 1) as u64;
        let la = (self.inner.index[a.0 as usize] - 1) as u64;
        self.elem_from_log(la + q1 / 2)
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if a.0 == 0 || b.0 == 0 {
            return Element::ZERO;
        }
        let la = self.inner.index[a.0 as usize] - 1;
        let lb = self.inner.index[b.0 as usize] - 1;
        self.elem_from_log(la as u64 + lb as u64)
    }

    pub fn inv(&self, a: Element) -> Result<Element> {
        let la = self.log(a).ok_or(Error::DivisionByZero)? as u64;
        let q1 = (self.inner.q - 1) as u64;
        Ok(self.elem_from_log(q1 - la % q1))
    }

    pub fn div(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1` and `0^e = 0` for `e > 0`.
    #[inline]
    pub fn pow(&self, a: Element, e: u64) -> Element {
        match self.log(a) {
            None => {
                if e == 0 {
                    self.one()
                } else {
                    Element::ZERO
                }
            }
            Some(la) => {
                let q1 = (self.inner.q - 1) as u64;
                let r = (la as u128 * (e % q1) as u128 % q1 as u128) as u64;
                self.elem_from_log(r)
            }
        }
    }

    /// Dispatches one of the elementary operations. Unary operations ignore `b`.
    pub fn arith(&self, a: Element, b: Element, op: ArithOp) -> Result<Element> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::FieldMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Neg => self.neg(a),
            ArithOp::Inv => self.inv(a)?,
            ArithOp::Pow(e) => self.pow(a, e),
        })
    }

    /// Horner evaluation of `sum_i coeffs[i] x^i`.
    pub fn eval_poly(&self, coeffs: &[Element], x: Element) -> Element {
        coeffs
            .iter()
            .rev()
            .fold(Element::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// `x^{p^j}`.
    #[inline]
    pub fn frobenius(&self, x: Element, j: u32) -> Element {
        match self.log(x) {
            None => Element::ZERO,
            Some(l) => {
                let m = self.inner.frob_mult[(j % self.inner.n) as usize];
                self.elem_from_log(l as u64 * m)
            }
        }
    }

    pub(crate) fn check_divisor(&self, k: u32) -> Result<u32> {
        if k == 0 || !self.inner.n.is_multiple_of(k) {
            return Err(Error::NotADivisor { k, n: self.inner.n });
        }
        Ok(self.inner.n / k)
    }

    /// Relative trace `T^n_k(x) = sum_{i<n/k} x^{p^{ik}}`.
    pub fn rel_trace(&self, k: u32, x: Element) -> Result<Element> {
        let r = self.check_divisor(k)?;
        Ok(self.rel_trace_unchecked(k, r, x))
    }

    #[inline]
    pub(crate) fn rel_trace_unchecked(&self, k: u32, r: u32, x: Element) -> Element {
        let mut acc = Element::ZERO;
        for i in 0..r {
            acc = self.add(acc, self.frobenius(x, i * k));
        }
        acc
    }

    /// Absolute trace onto GF(p), returned as an integer in `[0, p)`.
    #[inline]
    pub fn abs_trace(&self, x: Element) -> u32 {
        self.rel_trace_unchecked(1, self.inner.n, x).0
    }

    /// `T^k_1(z)` for `z` in the subfield GF(p^k): `sum_{i<k} z^{p^i}`,
    /// returned as an integer in `[0, p)`.
    pub fn subfield_abs_trace(&self, k: u32, z: Element) -> Result<u32> {
        self.check_divisor(k)?;
        if !self.in_subfield(k, z) {
            return Err(Error::CodomainViolation);
        }
        let mut acc = Element::ZERO;
        for i in 0..k {
            acc = self.add(acc, self.frobenius(z, i));
        }
        Ok(acc.0)
    }

    /// Membership in GF(p^k); false when `k` does not divide `n`.
    #[inline]
    pub fn in_subfield(&self, k: u32, x: Element) -> bool {
        if k == 0 || !self.inner.n.is_multiple_of(k) {
            return false;
        }
        self.frobenius(x, k) == x
    }

    /// Membership in the kernel of `T^n_k`.
    pub fn in_trace_kernel(&self, k: u32, x: Element) -> bool {
        match self.check_divisor(k) {
            Ok(r) => self.rel_trace_unchecked(k, r, x).is_zero(),
            Err(_) => false,
        }
    }

    pub fn subfield_view(&self, k: u32) -> Result<SubfieldView> {
        let r = self.check_divisor(k)?;
        let elements = self
            .elements()
            .iter()
            .copied()
            .filter(|&x| self.frobenius(x, k) == x)
            .collect();
        let kernel = self
            .elements()
            .iter()
            .copied()
            .filter(|&x| self.rel_trace_unchecked(k, r, x).is_zero())
            .collect();
        Ok(SubfieldView { k, elements, kernel })
    }

    /// Human-readable polynomial in the modulus root `a`, e.g. `2a^2 + a + 1`.
    pub fn format(&self, e: Element) -> String {
        let coeffs = self.coeffs(e);
        let mut out = String::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let _ = match (i, c) {
                (0, c) => write!(out, "{c}"),
                (1, 1) => write!(out, "a"),
                (1, c) => write!(out, "{c}a"),
                (i, 1) => write!(out, "a^{i}"),
                (i, c) => write!(out, "{c}a^{i}"),
            };
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// The subfield GF(p^k) and the kernel of `T^n_k`, both listed in the parent
/// field's enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubfieldView {
    pub k: u32,
    pub elements: Vec<Element>,
    pub kernel: Vec<Element>,
}
