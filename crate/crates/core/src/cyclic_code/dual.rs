use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::{LinearCode, WeightDistribution};
use crate::combinatorics::next_combination;
use crate::error::{Error, Result};
use crate::gf::Symbol;
use crate::linalg;

/// A⊥_ℓ for 0 ≤ ℓ ≤ n, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualDistribution {
    pub q: u64,
    pub n: usize,
    /// Dimension of the dual, n - k.
    pub k: usize,
    pub counts: Vec<BigUint>,
}

impl DualDistribution {
    pub fn get(&self, l: usize) -> &BigUint {
        &self.counts[l]
    }

    pub fn min_distance(&self) -> Option<usize> {
        (1..=self.n).find(|&l| !self.counts[l].is_zero())
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

impl Serialize for DualDistribution {
    /// Nonzero entries as a map ℓ → decimal string (counts exceed 64 bits).
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<usize, String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| (l, c.to_string()))
            .collect();
        map.serialize(s)
    }
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut cur = BigInt::one();
    row.push(cur.clone());
    for j in 0..n {
        cur = cur * BigInt::from(n - j) / BigInt::from(j + 1);
        row.push(cur.clone());
    }
    row
}

fn powers(base: u64, n: usize) -> Vec<BigInt> {
    let b = BigInt::from(base);
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = BigInt::one();
    for _ in 0..=n {
        out.push(cur.clone());
        cur *= &b;
    }
    out
}

fn exact_div(num: BigInt, den: &BigInt, what: impl FnOnce() -> String) -> Result<BigUint> {
    let (quot, rem) = (&num / den, &num % den);
    if !rem.is_zero() || quot.sign() == Sign::Minus {
        return Err(Error::Arithmetic(format!(
            "{}: {num} / {den} is not a nonnegative integer",
            what()
        )));
    }
    Ok(quot.to_biguint().expect("nonnegative"))
}

/// A⊥_ℓ = q^(-k) Σ_w A_w K_ℓ(w), where
/// K_ℓ(w) = Σ_j (-1)^j C(w, j) C(n-w, ℓ-j) (q-1)^(ℓ-j).
pub fn macwilliams_transform(
    dist: &WeightDistribution,
    n: usize,
    k: usize,
    q: u64,
) -> Result<DualDistribution> {
    if dist.total() != (q as u128).pow(k as u32) {
        return Err(Error::Parameter(format!(
            "distribution totals {} codewords, expected q^k = {}",
            dist.total(),
            (q as u128).pow(k as u32)
        )));
    }
    if dist.iter().any(|(w, _)| w > n) {
        return Err(Error::Parameter("weight exceeds length".into()));
    }
    let qm1 = powers(q - 1, n);
    let terms: Vec<(BigInt, Vec<BigInt>, Vec<BigInt>, usize)> = dist
        .iter()
        .map(|(w, a)| (BigInt::from(a), binomial_row(w), binomial_row(n - w), w))
        .collect();
    let size = BigInt::from(q).pow(k as u32);
    let counts = (0..=n)
        .into_par_iter()
        .map(|l| {
            let mut acc = BigInt::zero();
            for (a, cw, cnw, w) in &terms {
                let lo = l.saturating_sub(n - w);
                let hi = l.min(*w);
                let mut kraw = BigInt::zero();
                for j in lo..=hi {
                    let t = &cw[j] * &cnw[l - j] * &qm1[l - j];
                    if j % 2 == 0 {
                        kraw += t;
                    } else {
                        kraw -= t;
                    }
                }
                acc += a * kraw;
            }
            exact_div(acc, &size, || format!("A⊥_{l}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualDistribution {
        q,
        n,
        k: n - k,
        counts,
    })
}

/// The multiplicities u = (q²-q)(q²+1) and v = (q-1)(q²+1) of the two
/// nonzero weights of an ovoid code.
pub fn ovoid_multiplicities(q: u64) -> (u64, u64) {
    ((q * q - q) * (q * q + 1), (q - 1) * (q * q + 1))
}

/// Closed form for A⊥_ℓ of any [q²+1, 4, q²-q] code, 4 ≤ ℓ ≤ q²+1.
pub fn closed_dual_formula(q: u64, l: usize) -> Result<BigUint> {
    if q < 4 || !q.is_power_of_two() {
        return Err(Error::Parameter(format!("need q = 2^m ≥ 4, got {q}")));
    }
    let n = (q * q + 1) as usize;
    if !(4..=n).contains(&l) {
        return Err(Error::Parameter(format!("ℓ = {l} outside [4, {n}]")));
    }
    let (u, v) = ovoid_multiplicities(q);
    let (u, v) = (BigInt::from(u), BigInt::from(v));
    let qm1 = powers(q - 1, n);
    let sign = |e: usize| {
        if e % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        }
    };
    let q2 = (q * q) as usize;

    let numer = if l == n {
        &qm1[n] + &u * &qm1[q as usize + 1] + &v * BigInt::from(q - 1)
    } else {
        let c_n = binomial_row(n);
        let c_a = binomial_row(q2 - q as usize);
        let c_b = binomial_row(q as usize + 1);
        let c_q2 = binomial_row(q2);
        let first = &c_n[l] * &qm1[l];
        let mut mid = BigInt::zero();
        for i in 0..=l.min(q2 - q as usize) {
            let j = l - i;
            if j <= q as usize + 1 {
                mid += sign(i) * &c_a[i] * &c_b[j] * &qm1[j];
            }
        }
        let last = sign(l) * &c_q2[l] + sign(l - 1) * BigInt::from(q - 1) * &c_q2[l - 1];
        first + u * mid + v * last
    };
    exact_div(numer, &BigInt::from(q).pow(4), || {
        format!("closed form at q = {q}, ℓ = {l}")
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualDistanceReport {
    pub distance: usize,
    /// Lexicographically first dependent column set of minimum size.
    pub witness: Vec<usize>,
    /// Coefficients of the dependency, first one normalized to 1.
    pub coefficients: Vec<Symbol>,
    /// Number of column subsets checked at each size below the distance.
    pub subsets_checked: Vec<u64>,
}

/// Minimum distance of the dual from the generator matrix alone: the size
/// of the smallest linearly dependent set of columns.
pub fn dual_distance_direct(code: &LinearCode) -> Result<DualDistanceReport> {
    let f = code.field();
    let n = code.len();
    let k = code.dimension();
    let cols: Vec<Vec<Symbol>> = (0..n).map(|j| code.column(j)).collect();
    let mut checked = Vec::new();
    for size in 1..=(k + 1).min(n) {
        let found = (0..n).into_par_iter().find_map_first(|first| {
            let mut rest: Vec<usize> = (first + 1..first + size).collect();
            if rest.last().is_some_and(|&x| x >= n) {
                return None;
            }
            loop {
                let mut set = Vec::with_capacity(size);
                set.push(first);
                set.extend_from_slice(&rest);
                let rows: Vec<Vec<Symbol>> = set.iter().map(|&j| cols[j].clone()).collect();
                if linalg::rank(f, &rows) < size {
                    return Some(set);
                }
                if rest.is_empty() || !advance_tail(&mut rest, first + 1, n) {
                    return None;
                }
            }
        });
        if let Some(set) = found {
            // columns as matrix columns: null space of the k x size matrix
            let mat: Vec<Vec<Symbol>> = (0..k)
                .map(|i| set.iter().map(|&j| cols[j][i]).collect())
                .collect();
            let ns = linalg::null_space(f, &mat, size);
            let v = ns
                .into_iter()
                .find(|v| v.iter().all(|&x| x != 0))
                .ok_or_else(|| {
                    Error::Arithmetic("minimal dependent set without full-support relation".into())
                })?;
            let inv = f.inv(v[0]);
            let coefficients = v.iter().map(|&x| f.mul(x, inv)).collect();
            return Ok(DualDistanceReport {
                distance: size,
                witness: set,
                coefficients,
                subsets_checked: checked,
            });
        }
        checked.push(crate::combinatorics::binomial(n as u64, size as u64));
    }
    Err(Error::Arithmetic(
        "no dependent column set of size ≤ k+1".into(),
    ))
}

/// next_combination over values in [lo, n).
fn advance_tail(c: &mut [usize], lo: usize, n: usize) -> bool {
    for x in c.iter_mut() {
        *x -= lo;
    }
    let ok = next_combination(c, n - lo);
    for x in c.iter_mut() {
        *x += lo;
    }
    ok
}
