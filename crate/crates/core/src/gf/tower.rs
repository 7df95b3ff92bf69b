use std::collections::HashMap;

use serde::Serialize;

use super::{FieldContext, FieldElement, SmallField, Symbol, SMALL_MAX_DEGREE, TABLE_MAX_DEGREE};
use crate::error::{Error, Result};

/// GF(q) ⊂ GF(r) with q = 2^m and r = q^4.
///
/// GF(r) is represented directly modulo a degree-4m polynomial. The subfield
/// is its fixed field under e ↦ e^q, identified with the standalone GF(q)
/// through x ↦ γ, where γ is the smallest subfield root of GF(q)'s modulus.
#[derive(Clone, Debug)]
pub struct TowerContext {
    m: u32,
    sub: SmallField,
    big: FieldContext,
    gamma: FieldElement,
    embed: Vec<FieldElement>,
    project: HashMap<u64, Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerHeader {
    pub m: u32,
    pub q: u64,
    pub r: u64,
    pub modulus_q: String,
    pub modulus_r: String,
    pub alpha: String,
    pub gamma: String,
}

impl TowerContext {
    pub fn new(m: u32) -> Result<Self> {
        Self::with_table_limit(m, TABLE_MAX_DEGREE)
    }

    pub fn with_table_limit(m: u32, table_max_degree: u32) -> Result<Self> {
        if !(1..=SMALL_MAX_DEGREE).contains(&m) {
            return Err(Error::Parameter(format!(
                "m = {m} outside 1..={SMALL_MAX_DEGREE}"
            )));
        }
        let sub = SmallField::new(m)?;
        let big = FieldContext::with_table_limit(4 * m, table_max_degree)?;
        let q = 1u64 << m;

        // Nonzero subfield elements are the powers of α^((r-1)/(q-1)).
        let step = big.order() / (q - 1);
        let generator = big.pow(big.primitive(), step);
        let mut subfield: Vec<FieldElement> =
            std::iter::successors(Some(FieldElement::ONE), |&e| {
                let next = big.mul(e, generator);
                (next != FieldElement::ONE).then_some(next)
            })
            .collect();
        subfield.push(FieldElement::ZERO);
        subfield.sort();
        debug_assert_eq!(subfield.len() as u64, q);

        let modulus_q = sub.context().modulus();
        let eval = |g: FieldElement| {
            let mut acc = FieldElement::ZERO;
            for i in (0..=m).rev() {
                acc = big.mul(acc, g);
                if (modulus_q >> i) & 1 == 1 {
                    acc += FieldElement::ONE;
                }
            }
            acc
        };
        let gamma = *subfield
            .iter()
            .find(|&&g| eval(g).is_zero())
            .ok_or_else(|| Error::Arithmetic("GF(q) modulus has no root in the subfield".into()))?;

        let powers: Vec<FieldElement> =
            std::iter::successors(Some(FieldElement::ONE), |&e| Some(big.mul(e, gamma)))
                .take(m as usize)
                .collect();
        let embed: Vec<FieldElement> = (0..q)
            .map(|s| {
                (0..m)
                    .filter(|&i| (s >> i) & 1 == 1)
                    .fold(FieldElement::ZERO, |acc, i| acc + powers[i as usize])
            })
            .collect();
        let project: HashMap<u64, Symbol> = embed
            .iter()
            .enumerate()
            .map(|(s, e)| (e.bits(), s as Symbol))
            .collect();
        if project.len() as u64 != q {
            return Err(Error::Arithmetic(
                "subfield embedding is not injective".into(),
            ));
        }

        Ok(TowerContext {
            m,
            sub,
            big,
            gamma,
            embed,
            project,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        1 << self.m
    }

    pub fn r(&self) -> u64 {
        self.big.size()
    }

    pub fn sub(&self) -> &SmallField {
        &self.sub
    }

    pub fn big(&self) -> &FieldContext {
        &self.big
    }

    pub fn header(&self) -> TowerHeader {
        TowerHeader {
            m: self.m,
            q: self.q(),
            r: self.r(),
            modulus_q: format!("{:x}", self.sub.context().modulus()),
            modulus_r: format!("{:x}", self.big.modulus()),
            alpha: self.big.primitive().to_hex(),
            gamma: self.gamma.to_hex(),
        }
    }

    /// e^q = e.
    pub fn in_subfield(&self, e: FieldElement) -> bool {
        self.big.frobenius(e, self.m) == e
    }

    pub fn embed(&self, s: Symbol) -> FieldElement {
        self.embed[s as usize]
    }

    /// Inverse of [`Self::embed`]; `None` outside the subfield.
    pub fn project(&self, e: FieldElement) -> Option<Symbol> {
        self.project.get(&e.bits()).copied()
    }

    /// Tr_{r/q}(e) = e + e^q + e^(q^2) + e^(q^3), as an element of GF(r).
    pub fn trace_to_sub(&self, e: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut cur = e;
        for _ in 0..4 {
            acc += cur;
            cur = self.big.pow(cur, self.q());
        }
        acc
    }

    /// Tr_{r/q}(e) in the standalone GF(q) representation.
    pub fn trace_symbol(&self, e: FieldElement) -> Symbol {
        self.project(self.trace_to_sub(e))
            .expect("relative trace lands in the subfield")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subfield_size_and_embedding() {
        for m in 1..=4 {
            let t = TowerContext::new(m).unwrap();
            let fixed = t.big().elements().filter(|&e| t.in_subfield(e)).count() as u64;
            assert_eq!(fixed, t.q());
            let f = t.sub();
            for a in f.elements() {
                assert!(t.in_subfield(t.embed(a)));
                for b in f.elements() {
                    assert_eq!(t.embed(f.mul(a, b)), t.big().mul(t.embed(a), t.embed(b)));
                    assert_eq!(t.embed(a ^ b), t.embed(a) + t.embed(b));
                }
            }
        }
    }

    #[test]
    fn trace_of_zero_and_subfield_elements() {
        let t = TowerContext::new(2).unwrap();
        assert_eq!(t.trace_to_sub(FieldElement::ZERO), FieldElement::ZERO);
        for c in t.sub().elements() {
            assert_eq!(t.trace_to_sub(t.embed(c)), FieldElement::ZERO);
        }
    }

    #[test]
    fn trace_kernel_q4() {
        let t = TowerContext::new(2).unwrap();
        let kernel = t
            .big()
            .elements()
            .filter(|&e| t.trace_to_sub(e).is_zero())
            .count();
        assert_eq!(kernel, 64);
    }

    #[test]
    fn trace_properties_exhaustive() {
        for m in 1..=4 {
            let t = TowerContext::new(m).unwrap();
            let big = t.big();
            let mut image = vec![0u64; t.q() as usize];
            for e in big.elements() {
                let tr = t.trace_to_sub(e);
                assert_eq!(big.pow(tr, t.q()), tr);
                let s = t.trace_symbol(e);
                image[s as usize] += 1;
                // transitivity Tr_{r/2} = Tr_{q/2} ∘ Tr_{r/q}
                let sub_ctx = t.sub().context();
                assert_eq!(
                    sub_ctx.trace(FieldElement::from_bits(s as u64)),
                    big.trace(e)
                );
            }
            // surjective with equal fibres
            assert!(image.iter().all(|&c| c == t.r() / t.q()));
        }
    }

    #[test]
    fn trace_is_subfield_linear() {
        let t = TowerContext::new(3).unwrap();
        let big = t.big();
        for (i, e) in big.elements().step_by(37).enumerate() {
            let f = big.exp(i as u64 * 11 + 3);
            for c in t.sub().elements() {
                let ce = t.embed(c);
                let lhs = t.trace_symbol(big.mul(ce, e) + f);
                let rhs = t.sub().mul(c, t.trace_symbol(e)) ^ t.trace_symbol(f);
                assert_eq!(lhs, rhs);
            }
        }
    }
}
