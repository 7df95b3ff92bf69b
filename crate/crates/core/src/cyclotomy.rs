//! Cyclotomic classes of GF(r)*, their Gaussian periods, and the solution
//! count of Tr_{r/q}(a·x^N) = 0.
//!
//! Class C_i of order N is α^i⟨α^N⟩, so membership is the discrete log
//! reduced mod N. In characteristic 2 the canonical additive character is
//! (-1)^Tr(x), which makes every period an exact integer.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, TowerContext};

/// Largest r for which brute-force oracles run automatically.
pub const BRUTE_FORCE_MAX_R: u64 = 1 << 16;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The cyclotomic classes of order `N` in GF(r).
#[derive(Clone, Copy, Debug)]
pub struct CyclotomicSystem<'t> {
    tower: &'t TowerContext,
    order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussianPeriods {
    pub order: u64,
    pub values: Vec<i64>,
}

impl GaussianPeriods {
    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }
}

/// Z(r, a) from the character-sum closed form, with the brute-force count
/// attached when r is small enough.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZCount {
    pub closed_form: u64,
    pub brute_force: Option<u64>,
}

impl ZCount {
    pub fn value(&self) -> u64 {
        self.closed_form
    }

    pub fn verified_by_oracle(&self) -> bool {
        self.brute_force == Some(self.closed_form)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultisetReport {
    pub e1: u64,
    pub class: u64,
    /// gcd((r-1)/(q-1), e1), the order of the target classes.
    pub target_order: u64,
    pub multiplicity: u64,
    pub pass: bool,
}

impl<'t> CyclotomicSystem<'t> {
    pub fn new(tower: &'t TowerContext, order: u64) -> Result<Self> {
        let group = tower.big().order();
        if order == 0 || group % order != 0 {
            return Err(Error::Parameter(format!(
                "class order {order} does not divide r - 1 = {group}"
            )));
        }
        Ok(CyclotomicSystem { tower, order })
    }

    pub fn tower(&self) -> &'t TowerContext {
        self.tower
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn class_size(&self) -> u64 {
        self.tower.big().order() / self.order
    }

    /// Index i with e ∈ C_i; `None` for zero.
    pub fn class_index(&self, e: FieldElement) -> Option<u64> {
        let big = self.tower.big();
        if e.is_zero() {
            return None;
        }
        if big.has_tables() {
            return big.log(e).map(|l| l % self.order);
        }
        // e ∈ C_i iff e^((r-1)/N) = ζ^i with ζ = α^((r-1)/N).
        let t = big.pow(e, self.class_size());
        let zeta = big.pow(big.primitive(), self.class_size());
        let mut cur = FieldElement::ONE;
        for i in 0..self.order {
            if cur == t {
                return Some(i);
            }
            cur = big.mul(cur, zeta);
        }
        None
    }

    /// η_i = Σ_{x ∈ C_i} (-1)^Tr(x) by direct summation.
    pub fn gaussian_periods(&self) -> GaussianPeriods {
        let big = self.tower.big();
        let n = self.order as usize;
        let group = big.order();
        let chunk = 1u64 << 12;
        let chunks = group.div_ceil(chunk);
        let values = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut local = vec![0i64; n];
                let start = c * chunk;
                let end = (start + chunk).min(group);
                let mut x = big.exp(start);
                let alpha = big.primitive();
                for j in start..end {
                    local[(j % self.order) as usize] += big.character(x);
                    x = big.mul(x, alpha);
                }
                local
            })
            .reduce(
                || vec![0i64; n],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        GaussianPeriods {
            order: self.order,
            values,
        }
    }

    /// gcd((r-1)/(q-1), N).
    pub fn reduced_order(&self) -> u64 {
        let big = self.tower.big();
        gcd(big.order() / (self.tower.q() - 1), self.order)
    }

    /// Z(r, a) = #{x ∈ GF(r) : Tr_{r/q}(a·x^N) = 0}.
    pub fn count_z(&self, a: FieldElement) -> Result<ZCount> {
        let big = self.tower.big();
        let r = big.size();
        let brute = (r <= BRUTE_FORCE_MAX_R).then(|| self.count_z_brute_force(a));
        if a.is_zero() {
            return Ok(ZCount {
                closed_form: r,
                brute_force: brute,
            });
        }
        let q = self.tower.q() as i128;
        let g = self.reduced_order();
        // Σ_{z ∈ C_0^(g)} χ(a z): C_0^(g) = ⟨α^g⟩
        let step = big.pow(big.primitive(), g);
        let mut z = FieldElement::ONE;
        let mut sum = 0i128;
        for _ in 0..big.order() / g {
            sum += big.character(big.mul(a, z)) as i128;
            z = big.mul(z, step);
        }
        let numer = q + r as i128 - 1 + (q - 1) * g as i128 * sum;
        if numer < 0 || numer % q != 0 {
            return Err(Error::Arithmetic(format!(
                "closed form for Z(r, a) is not a nonnegative integer: {numer}/{q}"
            )));
        }
        let closed_form = (numer / q) as u64;
        if let Some(b) = brute {
            if b != closed_form {
                return Err(Error::Arithmetic(format!(
                    "Z(r, a): closed form {closed_form} disagrees with enumeration {b}"
                )));
            }
        }
        Ok(ZCount {
            closed_form,
            brute_force: brute,
        })
    }

    fn count_z_brute_force(&self, a: FieldElement) -> u64 {
        let big = self.tower.big();
        big.elements()
            .filter(|&x| {
                let xn = big.pow(x, self.order);
                self.tower.trace_to_sub(big.mul(a, xn)).is_zero()
            })
            .count() as u64
    }

    /// Materializes {{ x·y : y ∈ GF(q)*, x ∈ C_i^(e1) }} and compares it with
    /// C_i^(g) repeated (q-1)·g/e1 times, g = gcd((r-1)/(q-1), e1).
    pub fn multiset_identity(&self, e1: u64, class: u64) -> Result<MultisetReport> {
        let tower = self.tower;
        let big = tower.big();
        let group = big.order();
        if big.size() > BRUTE_FORCE_MAX_R {
            return Err(Error::Budget {
                what: "multiset materialization",
                needed: big.size() as u128,
                limit: BRUTE_FORCE_MAX_R as u128,
            });
        }
        if e1 == 0 || group % e1 != 0 || class >= e1 {
            return Err(Error::Parameter(format!(
                "need e1 | r - 1 and 0 <= i < e1, got e1 = {e1}, i = {class}"
            )));
        }
        let q = tower.q();
        let g = gcd(group / (q - 1), e1);
        let multiplicity = (q - 1) * g / e1;

        let mut counts = vec![0u64; group as usize];
        let step = big.pow(big.primitive(), e1);
        let mut x = big.exp(class);
        for _ in 0..group / e1 {
            for y in tower.sub().nonzero() {
                let prod = big.mul(x, tower.embed(y));
                counts[big.log(prod).expect("nonzero product") as usize] += 1;
            }
            x = big.mul(x, step);
        }
        let pass = counts.iter().enumerate().all(|(l, &c)| {
            let expected = if (l as u64) % g == class % g {
                multiplicity
            } else {
                0
            };
            c == expected
        });
        Ok(MultisetReport {
            e1,
            class,
            target_order: g,
            multiplicity,
            pass,
        })
    }
}
