//! Exhaustive value tables and the brute-force oracles run against them.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Element, Field};

/// A subset of the field a table is defined on or maps into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Full,
    /// The subfield GF(p^k).
    Subfield(u32),
    /// The kernel of `T^n_k`, a GF(p^k)-subspace.
    Kernel(u32),
}

impl Domain {
    pub fn contains(self, field: &Field, x: Element) -> bool {
        match self {
            Domain::Full => field.contains(x),
            Domain::Subfield(k) => field.in_subfield(k, x),
            Domain::Kernel(k) => field.in_trace_kernel(k, x),
        }
    }
}

#[derive(Clone)]
enum Positions {
    Full,
    Subfield { k: u32, step: u32, elements: Arc<[Element]> },
    Map { k: u32, elements: Arc<[Element]>, pos: Arc<[u32]> },
}

impl Positions {
    fn build(field: &Field, domain: Domain) -> Result<Positions> {
        match domain {
            Domain::Full => Ok(Positions::Full),
            Domain::Subfield(k) => {
                field.check_divisor(k)?;
                let sub = (field.p() as u64).pow(k) as u32;
                let step = (field.order() - 1) / (sub - 1);
                let mut elements = Vec::with_capacity(sub as usize);
                elements.push(Element::ZERO);
                for j in 0..sub - 1 {
                    elements.push(field.nonzero()[(j * step) as usize]);
                }
                Ok(Positions::Subfield { k, step, elements: elements.into() })
            }
            Domain::Kernel(k) => {
                let r = field.check_divisor(k)?;
                let mut pos = vec![u32::MAX; field.order() as usize];
                let mut elements = Vec::new();
                for (i, &x) in field.elements().iter().enumerate() {
                    if field.rel_trace_unchecked(k, r, x).is_zero() {
                        pos[i] = elements.len() as u32;
                        elements.push(x);
                    }
                }
                Ok(Positions::Map { k, elements: elements.into(), pos: pos.into() })
            }
        }
    }

    #[inline]
    fn position(&self, field: &Field, x: Element) -> Option<usize> {
        if !field.contains(x) {
            return None;
        }
        match self {
            Positions::Full => Some(field.index_of(x) as usize),
            Positions::Subfield { step, .. } => match field.log(x) {
                None => Some(0),
                Some(l) if l % step == 0 => Some((l / step) as usize + 1),
                Some(_) => None,
            },
            Positions::Map { pos, .. } => {
                let i = pos[field.index_of(x) as usize];
                (i != u32::MAX).then_some(i as usize)
            }
        }
    }

    fn elements<'a>(&'a self, field: &'a Field) -> &'a [Element] {
        match self {
            Positions::Full => field.elements(),
            Positions::Subfield { elements, .. } | Positions::Map { elements, .. } => elements,
        }
    }

    fn kind(&self) -> Domain {
        match self {
            Positions::Full => Domain::Full,
            Positions::Subfield { k, .. } => Domain::Subfield(*k),
            Positions::Map { k, .. } => Domain::Kernel(*k),
        }
    }
}

/// Exhaustive value table of a map from a domain subset of GF(p^n) into a
/// codomain subset, listed in the domain's enumeration order.
#[derive(Clone)]
pub struct FuncTable {
    field: Field,
    domain: Positions,
    codomain: Domain,
    values: Vec<Element>,
}

impl core::fmt::Debug for FuncTable {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FuncTable")
            .field("domain", &self.domain.kind())
            .field("codomain", &self.codomain)
            .field("values", &self.values)
            .finish()
    }
}

impl PartialEq for FuncTable {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.domain.kind() == other.domain.kind()
            && self.codomain == other.codomain
            && self.values == other.values
    }
}

impl Eq for FuncTable {}

impl FuncTable {
    /// Tabulates `f` over `domain`, rejecting any value outside `codomain`.
    pub fn tabulate(
        field: &Field,
        domain: Domain,
        codomain: Domain,
        mut f: impl FnMut(Element) -> Element,
    ) -> Result<FuncTable> {
        let positions = Positions::build(field, domain)?;
        let values: Vec<Element> = positions.elements(field).iter().map(|&x| f(x)).collect();
        FuncTable::assemble(field, positions, codomain, values)
    }

    /// Tabulates a map of the whole field into itself.
    pub fn from_fn(field: &Field, f: impl FnMut(Element) -> Element) -> FuncTable {
        let values = field.elements().iter().copied().map(f).collect();
        FuncTable {
            field: field.clone(),
            domain: Positions::Full,
            codomain: Domain::Full,
            values,
        }
    }

    pub fn from_values(
        field: &Field,
        domain: Domain,
        codomain: Domain,
        values: Vec<Element>,
    ) -> Result<FuncTable> {
        let positions = Positions::build(field, domain)?;
        if values.len() != positions.elements(field).len() {
            return Err(Error::DomainMismatch);
        }
        FuncTable::assemble(field, positions, codomain, values)
    }

    /// Builds a table from enumeration indices of its values.
    pub fn from_indices(
        field: &Field,
        domain: Domain,
        codomain: Domain,
        indices: &[u32],
    ) -> Result<FuncTable> {
        let values = indices
            .iter()
            .map(|&i| field.element_at(i))
            .collect::<Result<Vec<_>>>()?;
        FuncTable::from_values(field, domain, codomain, values)
    }

    fn assemble(
        field: &Field,
        domain: Positions,
        codomain: Domain,
        values: Vec<Element>,
    ) -> Result<FuncTable> {
        if let Domain::Subfield(k) | Domain::Kernel(k) = codomain {
            field.check_divisor(k)?;
        }
        if values.iter().any(|&v| !codomain.contains(field, v)) {
            return Err(Error::CodomainViolation);
        }
        Ok(FuncTable {
            field: field.clone(),
            domain,
            codomain,
            values,
        })
    }

    pub fn identity(field: &Field) -> FuncTable {
        FuncTable::from_fn(field, |x| x)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn domain(&self) -> Domain {
        self.domain.kind()
    }

    pub fn codomain(&self) -> Domain {
        self.codomain
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Domain elements, aligned with `values()`.
    pub fn domain_elements(&self) -> &[Element] {
        self.domain.elements(&self.field)
    }

    /// Enumeration indices of the values.
    pub fn indices(&self) -> Vec<u32> {
        self.values.iter().map(|&v| self.field.index_of(v)).collect()
    }

    #[inline]
    pub fn get(&self, x: Element) -> Option<Element> {
        self.domain
            .position(&self.field, x)
            .map(|i| self.values[i])
    }

    /// Value at `x`. Panics if `x` is outside the domain.
    #[inline]
    pub fn eval(&self, x: Element) -> Element {
        match self.get(x) {
            Some(v) => v,
            None => panic!("{:?} is outside the table domain {:?}", x, self.domain()),
        }
    }

    /// True iff the table is a bijection of its domain onto itself.
    pub fn is_permutation(&self) -> bool {
        if self.domain.kind() != self.codomain {
            return false;
        }
        let mut seen = vec![false; self.values.len()];
        for &v in &self.values {
            match self.domain.position(&self.field, v) {
                Some(i) if !seen[i] => seen[i] = true,
                _ => return false,
            }
        }
        true
    }

    /// True iff `F(F(x)) = x` everywhere.
    pub fn is_involution(&self) -> bool {
        if self.domain.kind() != self.codomain {
            return false;
        }
        self.domain_elements()
            .iter()
            .zip(&self.values)
            .all(|(&x, &v)| self.get(v) == Some(x))
    }

    pub fn is_identity(&self) -> bool {
        self.domain_elements()
            .iter()
            .zip(&self.values)
            .all(|(x, v)| x == v)
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &FuncTable) -> Result<FuncTable> {
        if self.field != inner.field {
            return Err(Error::FieldMismatch);
        }
        let values = inner
            .values
            .iter()
            .map(|&v| self.get(v).ok_or(Error::DomainMismatch))
            .collect::<Result<Vec<_>>>()?;
        Ok(FuncTable {
            field: self.field.clone(),
            domain: inner.domain.clone(),
            codomain: self.codomain,
            values,
        })
    }

    /// `t`-fold composition of the table with itself, `t >= 1`.
    pub fn t_fold(&self, t: u32) -> Result<FuncTable> {
        if t == 0 {
            return Err(Error::InvalidParameter("t-fold composition needs t >= 1"));
        }
        if self.domain.kind() != self.codomain {
            return Err(Error::DomainMismatch);
        }
        let mut acc = self.clone();
        for _ in 1..t {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Inverse table of a bijection, `None` if the table is not one.
    pub fn inverse(&self) -> Option<FuncTable> {
        if !self.is_permutation() {
            return None;
        }
        let mut values = vec![Element::ZERO; self.values.len()];
        for (&x, &v) in self.domain_elements().iter().zip(&self.values) {
            let i = self.domain.position(&self.field, v)?;
            values[i] = x;
        }
        Some(FuncTable {
            field: self.field.clone(),
            domain: self.domain.clone(),
            codomain: self.codomain,
            values,
        })
    }

    /// Residue counts of the component function `x ↦ Tr(λF(x))`.
    pub fn component_spectrum(&self, lambda: Element) -> Result<SpectrumRow> {
        if lambda.is_zero() {
            return Err(Error::ZeroLambda);
        }
        if !self.field.contains(lambda) {
            return Err(Error::FieldMismatch);
        }
        let mut counts = vec![0u64; self.field.p() as usize];
        for &v in &self.values {
            counts[self.field.abs_trace(self.field.mul(lambda, v)) as usize] += 1;
        }
        Ok(SpectrumRow { lambda, counts })
    }

    /// True iff every component function `Tr(λF)`, `λ ≠ 0`, is balanced.
    pub fn all_components_balanced(&self) -> bool {
        self.field
            .nonzero()
            .iter()
            .all(|&l| self.component_spectrum(l).map(|row| row.is_balanced()).unwrap_or(false))
    }
}

/// Exact value distribution of one component function. For prime `p` the
/// character sum `sum ζ^{Tr(λF(x))}` vanishes iff all counts are equal, so no
/// complex arithmetic is needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumRow {
    pub lambda: Element,
    pub counts: Vec<u64>,
}

impl SpectrumRow {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    /// `sum (-1)^{Tr(λF(x))}` for characteristic 2.
    pub fn walsh_value(&self) -> Option<i64> {
        match self.counts.as_slice() {
            [zeros, ones] => Some(*zeros as i64 - *ones as i64),
            _ => None,
        }
    }
}

/// `L(x) = sum_i λ_i x^{p^{ki}}`, a GF(p^k)-linear map of GF(p^n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedMap {
    field: Field,
    k: u32,
    coeffs: Vec<Element>,
}

impl LinearizedMap {
    pub fn new(field: &Field, k: u32, coeffs: Vec<Element>) -> Result<LinearizedMap> {
        let r = field.check_divisor(k)?;
        if coeffs.len() > r as usize {
            return Err(Error::InvalidParameter("more coefficients than n/k"));
        }
        if coeffs.iter().any(|&c| !field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        let mut coeffs = coeffs;
        coeffs.resize(r as usize, Element::ZERO);
        Ok(LinearizedMap { field: field.clone(), k, coeffs })
    }

    pub fn identity(field: &Field, k: u32) -> Result<LinearizedMap> {
        LinearizedMap::new(field, k, vec![field.one()])
    }

    /// `a x + b x^{p^k}`.
    pub fn binomial(field: &Field, k: u32, a: Element, b: Element) -> Result<LinearizedMap> {
        LinearizedMap::new(field, k, vec![a, b])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    #[inline]
    pub fn eval(&self, x: Element) -> Element {
        let f = &self.field;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Element::ZERO, |acc, (i, &c)| {
                f.add(acc, f.mul(c, f.frobenius(x, self.k * i as u32)))
            })
    }

    pub fn table(&self) -> FuncTable {
        FuncTable::from_fn(&self.field, |x| self.eval(x))
    }

    /// Bijective iff the only root is 0.
    pub fn is_permutation(&self) -> bool {
        self.field.nonzero().iter().all(|&x| !self.eval(x).is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs[0] == self.field.one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn has_subfield_coefficients(&self) -> bool {
        self.coeffs.iter().all(|&c| self.field.in_subfield(self.k, c))
    }

    /// Table of `L^{-1}`.
    pub fn inverse_table(&self) -> Result<FuncTable> {
        self.table().inverse().ok_or(Error::LNotPermutation)
    }
}
