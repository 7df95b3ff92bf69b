//! Block designs held by codeword supports, verified by counting every
//! t-subset of points.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, next_combination, BinomialTable};
use crate::cyclic_code::{codeword_from_index, LinearCode};
use crate::error::{Error, Result};
use crate::gf::{SmallField, Symbol};
use crate::linalg;
use crate::projgeo::{all_points, dot, Coords};

/// Distinct supports of the codewords of one weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportFamily {
    pub weight: usize,
    pub codewords: u64,
    pub supports: Vec<Vec<usize>>,
    /// Number of codewords per support, when it is the same for all.
    pub multiplicity: Option<u64>,
}

pub fn supports_of_weight(code: &LinearCode, weight: usize) -> Result<SupportFamily> {
    let total = crate::cyclic_code::weights::check_budget(code)?;
    let words = (code.len() + 63) / 64;
    let mut found: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let c = codeword_from_index(code, idx);
            if c.iter().filter(|&&x| x != 0).count() != weight {
                return None;
            }
            let mut bits = vec![0u64; words];
            for (j, &x) in c.iter().enumerate() {
                if x != 0 {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            Some(bits)
        })
        .collect();
    let codewords = found.len() as u64;
    found.par_sort_unstable();
    let mut supports = Vec::new();
    let mut counts = Vec::new();
    for bits in found.chunk_by(|a, b| a == b) {
        counts.push(bits.len() as u64);
        let b = &bits[0];
        supports.push(
            (0..code.len())
                .filter(|&j| b[j / 64] >> (j % 64) & 1 == 1)
                .collect::<Vec<_>>(),
        );
    }
    let multiplicity = counts
        .first()
        .copied()
        .filter(|&c| counts.iter().all(|&x| x == c));
    supports.sort();
    Ok(SupportFamily {
        weight,
        codewords,
        supports,
        multiplicity,
    })
}

/// Supports of the weight-4 codewords of the dual: 4-sets of generator
/// columns admitting a dependency with every coefficient nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dual4Family {
    pub supports: Vec<Vec<usize>>,
    /// Dual codewords of weight exactly 4.
    pub codewords: u64,
}

pub fn dual_weight4_supports(code: &LinearCode) -> Dual4Family {
    if code.dimension() == 4 {
        dual_weight4_by_planes(code)
    } else {
        dual_weight4_by_subsets(code)
    }
}

/// Number of relations Σ c_j col_j = 0 over `set` with every c_j nonzero.
fn full_support_relations(f: &SmallField, cols: &[Vec<Symbol>], set: &[usize]) -> u64 {
    let k = cols[0].len();
    let mat: Vec<Vec<Symbol>> = (0..k)
        .map(|i| set.iter().map(|&j| cols[j][i]).collect())
        .collect();
    let basis = linalg::null_space(f, &mat, set.len());
    let q = f.q() as u64;
    (1..q.pow(basis.len() as u32))
        .filter(|&idx| {
            let mut v = vec![0 as Symbol; set.len()];
            let mut x = idx;
            for b in &basis {
                let c = (x % q) as Symbol;
                x /= q;
                for (slot, &bv) in v.iter_mut().zip(b) {
                    *slot ^= f.mul(c, bv);
                }
            }
            v.iter().all(|&s| s != 0)
        })
        .count() as u64
}

/// Every 4-subset of columns, tested directly.
fn dual_weight4_by_subsets(code: &LinearCode) -> Dual4Family {
    let f = code.field();
    let n = code.len();
    let cols: Vec<Vec<Symbol>> = (0..n).map(|j| code.column(j)).collect();
    let per_first: Vec<(Vec<Vec<usize>>, u64)> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            let mut words = 0;
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let w = full_support_relations(f, &cols, &[a, b, c, d]);
                        if w > 0 {
                            out.push(vec![a, b, c, d]);
                            words += w;
                        }
                    }
                }
            }
            (out, words)
        })
        .collect();
    let codewords = per_first.iter().map(|(_, w)| w).sum();
    let supports = per_first.into_iter().flat_map(|(s, _)| s).collect();
    Dual4Family {
        supports,
        codewords,
    }
}

/// Dependent 4-sets of columns in GF(q)^4 are coplanar, so they are found
/// plane by plane. In a plane section with no three dependent columns each
/// 4-subset spans the plane and has exactly q-1 full-support relations.
fn dual_weight4_by_planes(code: &LinearCode) -> Dual4Family {
    let f = code.field();
    let n = code.len();
    let cols: Vec<Vec<Symbol>> = (0..n).map(|j| code.column(j)).collect();
    let coords: Vec<Coords> = cols.iter().map(|c| [c[0], c[1], c[2], c[3]]).collect();
    let q = f.q() as u64;
    let mut found: Vec<([u32; 4], u64)> = all_points(f)
        .par_iter()
        .flat_map_iter(|u| {
            let on: Vec<usize> = (0..n)
                .filter(|&j| dot(f, u.coords(), &coords[j]) == 0)
                .collect();
            let mut out = Vec::new();
            if on.len() < 4 {
                return out;
            }
            let arc = {
                let mut c = vec![0, 1, 2];
                let mut ok = true;
                loop {
                    if linalg::rank4(f, &[coords[on[c[0]]], coords[on[c[1]]], coords[on[c[2]]]]) < 3
                    {
                        ok = false;
                        break;
                    }
                    if !next_combination(&mut c, on.len()) {
                        break;
                    }
                }
                ok
            };
            let mut c = vec![0, 1, 2, 3];
            loop {
                let set = [on[c[0]], on[c[1]], on[c[2]], on[c[3]]];
                let w = if arc {
                    q - 1
                } else {
                    full_support_relations(f, &cols, &set)
                };
                if w > 0 {
                    out.push((set.map(|x| x as u32), w));
                }
                if !next_combination(&mut c, on.len()) {
                    break;
                }
            }
            out
        })
        .collect();
    // subsets spanning less than a plane turn up in several planes
    found.par_sort_unstable();
    found.dedup();
    let codewords = found.iter().map(|(_, w)| w).sum();
    let supports = found
        .into_iter()
        .map(|(s, _)| s.iter().map(|&x| x as usize).collect())
        .collect();
    Dual4Family {
        supports,
        codewords,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingStrategy {
    /// Increment every t-subset inside every block.
    Direct,
    /// Inclusion-exclusion over subsets inside block complements.
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageWitness {
    pub subset: Vec<usize>,
    pub blocks: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DesignReport {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    /// Common number of blocks through each t-subset, if constant.
    pub lambda: Option<u64>,
    pub expected_lambda: Option<u64>,
    pub blocks: usize,
    pub verified: bool,
    /// b·C(k, t) = λ·C(v, t)
    pub block_count_identity: bool,
    pub strategy: CountingStrategy,
    /// Two t-subsets with different coverage when λ is not constant.
    pub witnesses: Option<[CoverageWitness; 2]>,
}

/// Blocks of equal size k over the points 0..v, each sorted, all distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDesign {
    v: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
    report: Option<DesignReport>,
}

impl BlockDesign {
    pub fn new(v: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in blocks.iter_mut() {
            b.sort_unstable();
            if b.windows(2).any(|w| w[0] == w[1]) || b.last().is_some_and(|&x| x >= v) {
                return Err(Error::Parameter(format!(
                    "block {b:?} is not a subset of 0..{v}"
                )));
            }
        }
        let k = blocks.first().map_or(0, Vec::len);
        if blocks.iter().any(|b| b.len() != k) {
            return Err(Error::Parameter("blocks have different sizes".into()));
        }
        let mut sorted = blocks.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("repeated block".into()));
        }
        Ok(BlockDesign {
            v,
            k,
            blocks,
            report: None,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn report(&self) -> Option<&DesignReport> {
        self.report.as_ref()
    }

    pub fn is_verified(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.verified)
    }

    /// Every block replaced by its complement in 0..v. Unverified.
    pub fn complement(&self) -> BlockDesign {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut inside = vec![false; self.v];
                b.iter().for_each(|&x| inside[x] = true);
                (0..self.v).filter(|&x| !inside[x]).collect()
            })
            .collect();
        BlockDesign {
            v: self.v,
            k: self.v - self.k,
            blocks,
            report: None,
        }
    }

    /// One sorted block per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for b in &self.blocks {
            let line: Vec<String> = b.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn from_text(v: usize, text: &str) -> Result<Self> {
        let blocks = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                l.split_whitespace()
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Parse {
                        line: i + 1,
                        msg: e.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        BlockDesign::new(v, blocks)
    }

    /// Counts the blocks through every t-subset and records the outcome.
    pub fn verify(&mut self, t: usize, expected_lambda: Option<u64>) -> Result<&DesignReport> {
        self.verify_with(t, expected_lambda, None)
    }

    pub fn verify_with(
        &mut self,
        t: usize,
        expected_lambda: Option<u64>,
        strategy: Option<CountingStrategy>,
    ) -> Result<&DesignReport> {
        if t == 0 || t > self.k {
            return Err(Error::Parameter(format!(
                "t = {t} must be in 1..={}",
                self.k
            )));
        }
        let strategy = strategy.unwrap_or(if 2 * self.k > self.v {
            CountingStrategy::Complement
        } else {
            CountingStrategy::Direct
        });
        let table = BinomialTable::new(self.v, t);
        let coverage = match strategy {
            CountingStrategy::Direct => count_direct(&self.blocks, self.v, t, &table),
            CountingStrategy::Complement => {
                count_by_complement(&self.complement().blocks, self.v, t, &table)
            }
        };
        let first = coverage.first().map_or(0, |&c| c as u64);
        let odd = coverage.iter().position(|&c| c as u64 != first);
        let witnesses = odd.map(|r| {
            [
                CoverageWitness {
                    subset: table.unrank(0, t, self.v),
                    blocks: first,
                },
                CoverageWitness {
                    subset: table.unrank(r as u64, t, self.v),
                    blocks: coverage[r] as u64,
                },
            ]
        });
        let lambda = odd.is_none().then_some(first);
        let b = self.blocks.len() as u128;
        let identity = lambda.is_some_and(|l| {
            b * binomial(self.k as u64, t as u64) as u128
                == l as u128 * binomial(self.v as u64, t as u64) as u128
        });
        let verified =
            lambda.is_some() && identity && expected_lambda.is_none_or(|e| Some(e) == lambda);
        self.report = Some(DesignReport {
            t,
            v: self.v,
            k: self.k,
            lambda,
            expected_lambda,
            blocks: self.blocks.len(),
            verified,
            block_count_identity: identity,
            strategy,
            witnesses,
        });
        Ok(self.report.as_ref().expect("just set"))
    }
}

/// Builds the design from `blocks` and verifies it as a t-design.
pub fn verify_design(
    blocks: Vec<Vec<usize>>,
    v: usize,
    t: usize,
    expected_lambda: Option<u64>,
) -> Result<BlockDesign> {
    let mut d = BlockDesign::new(v, blocks)?;
    d.verify(t, expected_lambda)?;
    Ok(d)
}

fn add_vectors(mut a: Vec<u32>, b: Vec<u32>) -> Vec<u32> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

/// For every s-subset of a block, bump its colex rank.
fn for_each_subset_rank(
    block: &[usize],
    s: usize,
    table: &BinomialTable,
    mut visit: impl FnMut(usize),
) {
    if s == 0 {
        visit(0);
        return;
    }
    if block.len() < s {
        return;
    }
    if s == 3 {
        for c in 2..block.len() {
            let rc = table.get(block[c], 3);
            for b in 1..c {
                let rb = rc + table.get(block[b], 2);
                for &a in &block[..b] {
                    visit((rb + table.get(a, 1)) as usize);
                }
            }
        }
        return;
    }
    let mut pos: Vec<usize> = (0..s).collect();
    loop {
        let sub: Vec<usize> = pos.iter().map(|&p| block[p]).collect();
        visit(table.rank(&sub));
        if !next_combination(&mut pos, block.len()) {
            break;
        }
    }
}

fn count_direct(blocks: &[Vec<usize>], v: usize, t: usize, table: &BinomialTable) -> Vec<u32> {
    let size = binomial(v as u64, t as u64) as usize;
    blocks
        .par_iter()
        .fold(
            || vec![0u32; size],
            |mut acc, b| {
                for_each_subset_rank(b, t, table, |r| acc[r] += 1);
                acc
            },
        )
        .reduce(|| vec![0u32; size], add_vectors)
}

/// #{B ⊇ T} = Σ_{S ⊆ T} (-1)^|S| #{B : S ⊆ complement(B)}.
fn count_by_complement(
    complements: &[Vec<usize>],
    v: usize,
    t: usize,
    table: &BinomialTable,
) -> Vec<u32> {
    let inside: Vec<Vec<u32>> = (0..=t)
        .map(|s| count_direct(complements, v, s, table))
        .collect();
    let size = binomial(v as u64, t as u64) as usize;
    let mut out = vec![0u32; size];
    let mut subset: Vec<usize> = (0..t).collect();
    loop {
        let mut total: i64 = 0;
        for mask in 0u32..(1 << t) {
            let sub: Vec<usize> = (0..t)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| subset[i])
                .collect();
            let c = inside[sub.len()][table.rank(&sub)] as i64;
            total += if sub.len() % 2 == 0 { c } else { -c };
        }
        out[table.rank(&subset)] = total as u32;
        if !next_combination(&mut subset, v) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic_code::ovoid_code;
    use crate::gf::TowerContext;

    fn fano() -> Vec<Vec<usize>> {
        vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ]
    }

    #[test]
    fn fano_plane() {
        let d = verify_design(fano(), 7, 2, Some(1)).unwrap();
        let r = d.report().unwrap();
        assert!(r.verified);
        assert_eq!(r.lambda, Some(1));
        // not a 3-design
        let mut d = BlockDesign::new(7, fano()).unwrap();
        let r = d.verify(3, None).unwrap();
        assert!(!r.verified && r.lambda.is_none());
        let w = r.witnesses.as_ref().unwrap();
        assert_ne!(w[0].blocks, w[1].blocks);
    }

    #[test]
    fn complement_involution_and_strategies() {
        let d = BlockDesign::new(7, fano()).unwrap();
        let c = d.complement();
        assert_eq!(c.k(), 4);
        assert_eq!(c.complement().blocks(), d.blocks());
        for t in 1..=2 {
            let mut a = c.clone();
            let mut b = c.clone();
            let ra = a
                .verify_with(t, None, Some(CountingStrategy::Direct))
                .unwrap()
                .clone();
            let rb = b
                .verify_with(t, None, Some(CountingStrategy::Complement))
                .unwrap()
                .clone();
            assert_eq!(ra.lambda, rb.lambda);
        }
    }

    #[test]
    fn invalid_blocks() {
        assert!(BlockDesign::new(5, vec![vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(BlockDesign::new(5, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(BlockDesign::new(3, vec![vec![0, 5]]).is_err());
        let mut d = BlockDesign::new(5, vec![vec![0, 1]]).unwrap();
        assert!(d.verify(3, None).is_err());
    }

    #[test]
    fn q4_designs() {
        let t = TowerContext::new(2).unwrap();
        let code = ovoid_code(&t).unwrap();
        let fam = supports_of_weight(&code, 12).unwrap();
        assert_eq!(
            (fam.codewords, fam.supports.len(), fam.multiplicity),
            (204, 68, Some(3))
        );
        let mut d = BlockDesign::new(17, fam.supports).unwrap();
        assert_eq!(d.verify(3, Some(22)).unwrap().lambda, Some(22));
        let mut direct = d.clone();
        assert!(
            direct
                .verify_with(3, Some(22), Some(CountingStrategy::Direct))
                .unwrap()
                .verified
        );
        let mut c = d.complement();
        assert!(c.verify(3, Some(1)).unwrap().verified);

        let dual = dual_weight4_supports(&code);
        assert_eq!((dual.supports.len(), dual.codewords), (340, 1020));
        assert_eq!(dual_weight4_by_subsets(&code), dual);
        assert!(verify_design(dual.supports, 17, 3, Some(2))
            .unwrap()
            .is_verified());
    }

    #[test]
    fn plane_path_with_collinear_columns() {
        use crate::cyclic_code::CodeOrigin;
        let f = crate::gf::SmallField::new(2).unwrap();
        // columns e1, e2, e1+e2, e3, e4, e1+e3, e3+2e4, 0
        let cols = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [1, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [1, 0, 1, 0],
            [0, 0, 1, 2],
            [0, 0, 0, 0],
        ];
        let rows: Vec<Vec<Symbol>> = (0..4)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        let code = LinearCode::new(f, rows, CodeOrigin::External).unwrap();
        assert_eq!(
            dual_weight4_by_planes(&code),
            dual_weight4_by_subsets(&code)
        );
    }

    #[test]
    fn zero_weight_support() {
        let t = TowerContext::new(2).unwrap();
        let fam = supports_of_weight(&ovoid_code(&t).unwrap(), 0).unwrap();
        assert_eq!(fam.supports, vec![Vec::<usize>::new()]);
        assert_eq!(fam.codewords, 1);
    }

    #[test]
    fn text_roundtrip() {
        let d = BlockDesign::new(7, fano()).unwrap();
        let back = BlockDesign::from_text(7, &d.to_text()).unwrap();
        assert_eq!(back.blocks(), d.blocks());
    }
}
