use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{multiplicative_order, LinearCode};
use crate::cyclotomy::{gcd, CyclotomicSystem};
use crate::error::{Error, Result};
use crate::gf::{Symbol, TowerContext};

/// Largest q^k enumerated codeword by codeword.
pub const ENUMERATION_BUDGET: u128 = 1 << 28;

/// Weight → number of codewords, including A_0 = 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightDistribution {
    counts: BTreeMap<usize, u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: BTreeMap<usize, u64>) -> Self {
        let counts = counts.into_iter().filter(|&(_, c)| c != 0).collect();
        WeightDistribution { counts }
    }

    pub fn get(&self, w: usize) -> u64 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&w, &c)| (w, c))
    }

    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    /// Nonzero weights only.
    pub fn nonzero(&self) -> BTreeMap<usize, u64> {
        self.counts
            .iter()
            .filter(|(&w, _)| w > 0)
            .map(|(&w, &c)| (w, c))
            .collect()
    }

    /// Σ_{w>0} A_w = q^k - 1 and Σ w·A_w = q^(k-1)(q-1)n, the first two power
    /// moments for a code whose dual has minimum distance at least 2.
    pub fn pless_moments_hold(&self, n: usize, k: usize, q: u64) -> bool {
        let qk = (q as u128).pow(k as u32);
        let first: u128 = self
            .iter()
            .filter(|&(w, _)| w > 0)
            .map(|(_, c)| c as u128)
            .sum();
        let second: u128 = self.iter().map(|(w, c)| w as u128 * c as u128).sum();
        first == qk - 1 && second == qk / q as u128 * (q as u128 - 1) * n as u128
    }
}

/// Codeword with coefficient digits of `index` in base q, row 0 least significant.
pub fn codeword_from_index(code: &LinearCode, mut index: u64) -> Vec<Symbol> {
    let q = code.q();
    let coeffs: Vec<Symbol> = (0..code.dimension())
        .map(|_| {
            let d = (index % q) as Symbol;
            index /= q;
            d
        })
        .collect();
    code.encode(&coeffs)
}

pub(crate) fn check_budget(code: &LinearCode) -> Result<u64> {
    let total = (code.q() as u128).pow(code.dimension() as u32);
    if total > ENUMERATION_BUDGET {
        return Err(Error::Budget {
            what: "codeword enumeration",
            needed: total,
            limit: ENUMERATION_BUDGET,
        });
    }
    Ok(total as u64)
}

/// Exact distribution by visiting all q^k codewords.
pub fn weight_distribution_by_enumeration(code: &LinearCode) -> Result<WeightDistribution> {
    let total = check_budget(code)?;
    let hist = weight_histogram(code, total);
    let counts = hist.into_iter().enumerate().map(|(w, c)| (w, c)).collect();
    Ok(WeightDistribution::from_counts(counts))
}

fn weight_histogram(code: &LinearCode, total: u64) -> Vec<u64> {
    let f = code.field();
    let q = code.q();
    let n = code.len();
    let k = code.dimension();
    let multiples: Vec<Vec<Vec<Symbol>>> = code
        .rows()
        .iter()
        .map(|row| {
            f.elements()
                .map(|c| row.iter().map(|&x| f.mul(c, x)).collect())
                .collect()
        })
        .collect();
    let last = &multiples[k - 1];
    let prefixes = total / q;
    (0..prefixes)
        .into_par_iter()
        .fold(
            || (vec![0u64; n + 1], vec![0 as Symbol; n]),
            |(mut hist, mut partial), p| {
                partial.iter_mut().for_each(|x| *x = 0);
                let mut idx = p;
                for mult in &multiples[..k - 1] {
                    let d = (idx % q) as usize;
                    idx /= q;
                    if d != 0 {
                        partial.iter_mut().zip(&mult[d]).for_each(|(x, &y)| *x ^= y);
                    }
                }
                for tail in last {
                    let w = partial.iter().zip(tail).filter(|(&a, &b)| a != b).count();
                    hist[w] += 1;
                }
                (hist, partial)
            },
        )
        .map(|(h, _)| h)
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassWeight {
    pub class: u64,
    pub size: u64,
    pub period: i64,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodWeights {
    /// gcd((r-1)/(q-1), N)
    pub reduced_order: u64,
    pub classes: Vec<ClassWeight>,
    pub distribution: WeightDistribution,
}

/// Weight of c(β) from the Gaussian period of β's class in
/// C^(g), g = gcd((r-1)/(q-1), N):
///
/// wt = (q-1)(r-1 - g·η) / (q·N).
pub fn weight_distribution_by_periods(tower: &TowerContext, classes: u64) -> Result<PeriodWeights> {
    let big = tower.big();
    let group = big.order();
    if classes <= 1 || group % classes != 0 {
        return Err(Error::Parameter(format!(
            "N = {classes} must exceed 1 and divide {group}"
        )));
    }
    let q = tower.q();
    let r = big.size();
    let n = group / classes;
    let g = gcd(group / (q - 1), classes);
    let periods = CyclotomicSystem::new(tower, g)?.gaussian_periods();
    let size = group / g;

    let mut per_beta: BTreeMap<usize, u64> = BTreeMap::new();
    per_beta.insert(0, 1);
    let mut out = Vec::with_capacity(g as usize);
    for (i, &eta) in periods.values.iter().enumerate() {
        let numer = (q as i128 - 1) * (group as i128 - g as i128 * eta as i128);
        let denom = q as i128 * classes as i128;
        if numer < 0 || numer % denom != 0 || numer / denom > n as i128 {
            return Err(Error::Arithmetic(format!(
                "class {i}: weight {numer}/{denom} is not an integer in [0, {n}]"
            )));
        }
        let weight = (numer / denom) as u64;
        *per_beta.entry(weight as usize).or_default() += size;
        out.push(ClassWeight {
            class: i as u64,
            size,
            period: eta,
            weight,
        });
    }

    // β ↦ c(β) is q^(4-m_0)-to-one.
    let m0 = multiplicative_order(q, n).ok_or_else(|| Error::Arithmetic("gcd(q, n) ≠ 1".into()))?;
    let kernel = r / q.pow(m0 as u32);
    let mut counts = BTreeMap::new();
    for (w, c) in per_beta {
        if c % kernel != 0 {
            return Err(Error::Arithmetic(format!(
                "weight {w}: {c} preimages not divisible by {kernel}"
            )));
        }
        counts.insert(w, c / kernel);
    }
    Ok(PeriodWeights {
        reduced_order: g,
        classes: out,
        distribution: WeightDistribution::from_counts(counts),
    })
}

/// Σ_{i<k} ⌈d / q^i⌉.
pub fn griesmer_length(k: usize, d: u64, q: u64) -> u64 {
    (0..k as u32).map(|i| d.div_ceil(q.pow(i))).sum()
}

pub fn meets_griesmer(n: usize, k: usize, d: u64, q: u64) -> bool {
    n as u64 == griesmer_length(k, d, q)
}

impl LinearCode {
    /// Griesmer equality for the code with the given minimum distance.
    pub fn meets_griesmer(&self, min_distance: u64) -> bool {
        meets_griesmer(self.len(), self.dimension(), min_distance, self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic_code::{build_irreducible_cyclic, ovoid_code};

    #[test]
    fn enumeration_q4() {
        let t = TowerContext::new(2).unwrap();
        let d = weight_distribution_by_enumeration(&ovoid_code(&t).unwrap()).unwrap();
        assert_eq!(d.get(0), 1);
        assert_eq!(d.nonzero(), BTreeMap::from([(12, 204), (16, 51)]));
        assert!(d.pless_moments_hold(17, 4, 4));
        assert_eq!(d.total(), 256);
    }

    #[test]
    fn periods_q4_class_structure() {
        let t = TowerContext::new(2).unwrap();
        let p = weight_distribution_by_periods(&t, 15).unwrap();
        assert_eq!(p.reduced_order, 5);
        assert_eq!(p.classes[0].weight, 16);
        assert_eq!(p.classes[0].size, 51);
        assert!(p.classes[1..]
            .iter()
            .all(|c| c.weight == 12 && c.size == 51));
        assert_eq!(
            p.distribution.nonzero(),
            BTreeMap::from([(12, 204), (16, 51)])
        );
    }

    #[test]
    fn weight_depends_only_on_class() {
        let t = TowerContext::new(2).unwrap();
        let code = ovoid_code(&t).unwrap();
        let p = weight_distribution_by_periods(&t, 15).unwrap();
        let big = t.big();
        let theta = big.pow(big.primitive(), 15);
        for j in 0..255u64 {
            let beta = big.exp(j);
            let mut x = beta;
            let mut w = 0;
            for _ in 0..code.len() {
                w += (t.trace_symbol(x) != 0) as u64;
                x = big.mul(x, theta);
            }
            assert_eq!(w, p.classes[(j % 5) as usize].weight);
        }
    }

    #[test]
    fn paths_agree_on_other_family_members() {
        let t = TowerContext::new(2).unwrap();
        for classes in [3, 5, 15, 17, 51, 85] {
            let code = build_irreducible_cyclic(&t, classes).unwrap();
            let e = weight_distribution_by_enumeration(&code).unwrap();
            let p = weight_distribution_by_periods(&t, classes).unwrap();
            assert_eq!(e, p.distribution, "N = {classes}");
        }
    }

    #[test]
    fn budget_refusal() {
        let unit = |k: usize| -> Vec<Vec<Symbol>> {
            (0..k)
                .map(|i| (0..6).map(|j| (i == j) as Symbol).collect())
                .collect()
        };
        let small = crate::gf::SmallField::new(4).unwrap();
        let ok = LinearCode::new(small, unit(4), crate::cyclic_code::CodeOrigin::External).unwrap();
        assert!(weight_distribution_by_enumeration(&ok).is_ok());
        // 256^4 = 2^32 codewords
        let f = crate::gf::SmallField::new(8).unwrap();
        let too_big =
            LinearCode::new(f, unit(4), crate::cyclic_code::CodeOrigin::External).unwrap();
        assert!(matches!(
            weight_distribution_by_enumeration(&too_big),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn griesmer_values() {
        assert_eq!(griesmer_length(4, 12, 4), 17);
        assert_eq!(griesmer_length(4, 56, 8), 65);
        assert_eq!(griesmer_length(4, 240, 16), 257);
        assert!(!meets_griesmer(18, 4, 12, 4));
    }
}
