//! Arithmetic in GF(2^k) and the tower GF(q) ⊂ GF(q^4).
//!
//! Elements are stored in the polynomial basis over GF(2): bit `i` of
//! [`FieldElement::bits`] is the coefficient of `x^i` modulo the field's
//! defining polynomial. Fields of degree up to [`TABLE_MAX_DEGREE`] carry
//! log/antilog tables; larger ones fall back to carry-less multiplication.

pub mod poly;
mod small;
mod tower;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use small::{SmallField, Symbol, SMALL_MAX_DEGREE};
pub use tower::TowerContext;

/// Largest degree for which log/antilog tables are built (2 x 64 MiB at 24).
pub const TABLE_MAX_DEGREE: u32 = 24;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 40;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub const fn from_bits(bits: u64) -> Self {
        FieldElement(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        u64::from_str_radix(s.trim(), 16)
            .map(FieldElement)
            .map_err(|e| Error::Parameter(format!("bad hex field element {s:?}: {e}")))
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

#[derive(Clone)]
struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// Description of a field that makes every certificate reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldHeader {
    pub degree: u32,
    pub modulus: String,
    pub alpha: String,
}

/// GF(2^k) with a fixed modulus and primitive element.
#[derive(Clone)]
pub struct FieldContext {
    degree: u32,
    modulus: u64,
    primitive: FieldElement,
    order_primes: Vec<u64>,
    trace_mask: u64,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("degree", &self.degree)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .field("primitive", &self.primitive)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl FieldContext {
    /// GF(2^k) under the standard modulus (see [`poly::standard_modulus`]).
    pub fn new(degree: u32) -> Result<Self> {
        Self::with_table_limit(degree, TABLE_MAX_DEGREE)
    }

    pub fn with_table_limit(degree: u32, table_max_degree: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::Parameter(format!(
                "field degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        Self::build(degree, poly::standard_modulus(degree), table_max_degree)
    }

    /// GF(2^k) under a caller-chosen modulus, verified irreducible.
    pub fn with_modulus(degree: u32, modulus: u64) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) || poly::degree(modulus as u128) != Some(degree) {
            return Err(Error::Parameter(format!(
                "modulus {modulus:#x} does not have degree {degree}"
            )));
        }
        if !poly::is_irreducible(modulus) {
            return Err(Error::Parameter(format!(
                "modulus {modulus:#x} is reducible"
            )));
        }
        Self::build(degree, modulus, TABLE_MAX_DEGREE)
    }

    fn build(degree: u32, modulus: u64, table_max_degree: u32) -> Result<Self> {
        let order = (1u64 << degree) - 1;
        let mut ctx = FieldContext {
            degree,
            modulus,
            primitive: FieldElement::ONE,
            order_primes: poly::prime_factors(order),
            trace_mask: 0,
            tables: None,
        };
        ctx.primitive = ctx.find_primitive();
        ctx.trace_mask = (0..degree)
            .filter(|&i| ctx.trace_direct(FieldElement(1 << i)))
            .fold(0, |m, i| m | (1 << i));
        if degree <= table_max_degree {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn build_tables(&self) -> Tables {
        let order = self.order() as usize;
        let mut exp = vec![0u32; order];
        let mut log = vec![0u32; order + 1];
        let alpha = self.primitive;
        let top = 1u64 << self.degree;
        let mut cur = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur as u32;
            log[cur as usize] = i as u32;
            cur = if alpha.0 == 2 {
                let s = cur << 1;
                if s & top != 0 {
                    s ^ self.modulus
                } else {
                    s
                }
            } else {
                poly::mulmod(cur, alpha.0, self.modulus)
            };
        }
        debug_assert_eq!(cur, 1);
        Tables { log, exp }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, 2^k.
    pub fn size(&self) -> u64 {
        1u64 << self.degree
    }

    /// Order of the multiplicative group, 2^k - 1.
    pub fn order(&self) -> u64 {
        (1u64 << self.degree) - 1
    }

    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            degree: self.degree,
            modulus: format!("{:x}", self.modulus),
            alpha: self.primitive.to_hex(),
        }
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.size()
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let order = t.exp.len();
                let mut s = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                if s >= order {
                    s -= order;
                }
                FieldElement(t.exp[s] as u64)
            }
            None => FieldElement(poly::mulmod(a.0, b.0, self.modulus)),
        }
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let order = self.order() as u128;
                let l = (t.log[a.0 as usize] as u128 * e as u128 % order) as usize;
                FieldElement(t.exp[l] as u64)
            }
            None => FieldElement(poly::powmod(a.0, e as u128, self.modulus)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.pow(a, self.order() - 1))
    }

    /// a^(2^s).
    pub fn frobenius(&self, a: FieldElement, s: u32) -> FieldElement {
        (0..s % self.degree).fold(a, |x, _| self.square(x))
    }

    /// Discrete logarithm to base α, `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[a.0 as usize] as u64),
            None => {
                // baby-step giant-step
                let order = self.order();
                let step = (order as f64).sqrt().ceil() as u64;
                let mut baby = std::collections::HashMap::with_capacity(step as usize);
                let mut cur = FieldElement::ONE;
                for j in 0..step {
                    baby.entry(cur.0).or_insert(j);
                    cur = self.mul(cur, self.primitive);
                }
                let giant = self.pow(self.inv(self.primitive).ok()?, step);
                let mut gamma = a;
                for i in 0..=step {
                    if let Some(&j) = baby.get(&gamma.0) {
                        return Some((i * step + j) % order);
                    }
                    gamma = self.mul(gamma, giant);
                }
                None
            }
        }
    }

    /// α^i.
    #[inline]
    pub fn exp(&self, i: u64) -> FieldElement {
        match &self.tables {
            Some(t) => FieldElement(t.exp[(i % self.order()) as usize] as u64),
            None => self.pow(self.primitive, i),
        }
    }

    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::Domain("zero has no multiplicative order".into()));
        }
        let mut order = self.order();
        for &p in &self.order_primes {
            while order % p == 0 && self.pow(a, order / p) == FieldElement::ONE {
                order /= p;
            }
        }
        Ok(order)
    }

    pub fn is_primitive(&self, a: FieldElement) -> bool {
        !a.is_zero()
            && self.contains(a)
            && self.pow(a, self.order()) == FieldElement::ONE
            && self
                .order_primes
                .iter()
                .all(|&p| self.pow(a, self.order() / p) != FieldElement::ONE)
    }

    /// The primitive element with the smallest encoding.
    pub fn find_primitive(&self) -> FieldElement {
        (1..self.size())
            .map(FieldElement)
            .find(|&a| self.is_primitive(a))
            .expect("every finite field has a primitive element")
    }

    fn trace_direct(&self, a: FieldElement) -> bool {
        let mut acc = FieldElement::ZERO;
        let mut cur = a;
        for _ in 0..self.degree {
            acc += cur;
            cur = self.square(cur);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 == 1
    }

    /// Absolute trace Tr_{2^k/2}(a) as a bit.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> u8 {
        ((a.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// Additive character value (-1)^Tr(a).
    #[inline]
    pub fn character(&self, a: FieldElement) -> i64 {
        1 - 2 * self.trace(a) as i64
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size()).map(FieldElement)
    }
}
