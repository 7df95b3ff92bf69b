use super::{FieldContext, FieldElement};
use crate::error::{Error, Result};

/// A GF(q) symbol in the standalone polynomial-basis representation.
pub type Symbol = u16;

/// Largest degree with a full multiplication table (q = 1024, 2 MiB).
pub const SMALL_MAX_DEGREE: u32 = 10;

/// GF(q) with complete multiplication and inversion tables, for the
/// symbol-level work on codewords and projective points.
#[derive(Clone)]
pub struct SmallField {
    ctx: FieldContext,
    mul: Vec<Symbol>,
    inv: Vec<Symbol>,
}

impl std::fmt::Debug for SmallField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SmallField(q = {}, modulus = {:#x})",
            self.q(),
            self.ctx.modulus()
        )
    }
}

impl SmallField {
    pub fn new(degree: u32) -> Result<Self> {
        Self::from_context(FieldContext::new(degree)?)
    }

    pub fn from_context(ctx: FieldContext) -> Result<Self> {
        let m = ctx.degree();
        if m > SMALL_MAX_DEGREE {
            return Err(Error::Parameter(format!(
                "GF(2^{m}) is too large for a symbol field (max degree {SMALL_MAX_DEGREE})"
            )));
        }
        let q = ctx.size() as usize;
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                mul[(a << m) | b] = ctx
                    .mul(
                        FieldElement::from_bits(a as u64),
                        FieldElement::from_bits(b as u64),
                    )
                    .bits() as Symbol;
            }
        }
        let mut inv = vec![0; q];
        for a in 1..q {
            inv[a] = ctx.inv(FieldElement::from_bits(a as u64)).unwrap().bits() as Symbol;
        }
        Ok(SmallField { ctx, mul, inv })
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn degree(&self) -> u32 {
        self.ctx.degree()
    }

    pub fn q(&self) -> usize {
        1 << self.ctx.degree()
    }

    #[inline(always)]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        self.mul[((a as usize) << self.ctx.degree()) | b as usize]
    }

    /// Inverse; zero maps to zero, callers check for it.
    #[inline(always)]
    pub fn inv(&self, a: Symbol) -> Symbol {
        self.inv[a as usize]
    }

    #[inline(always)]
    pub fn div(&self, a: Symbol, b: Symbol) -> Symbol {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Symbol, e: u64) -> Symbol {
        self.ctx.pow(FieldElement::from_bits(a as u64), e).bits() as Symbol
    }

    /// a^(2^s).
    pub fn frobenius(&self, a: Symbol, s: u32) -> Symbol {
        (0..s % self.degree()).fold(a, |x, _| self.mul(x, x))
    }

    pub fn elements(&self) -> impl Iterator<Item = Symbol> {
        0..self.q() as Symbol
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Symbol> {
        1..self.q() as Symbol
    }
}
