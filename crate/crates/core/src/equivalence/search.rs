//! Exhaustive search for a semilinear map taking one cap onto another.
//!
//! For every field automorphism φ, a frame of φ(A) is fixed: three points
//! f0, f1, f2, a fourth point f3 on their plane section and a point f4 off
//! it. A map M with M φ(A) = B is determined by the images g0..g4 and one
//! scalar. The search runs over ordered triples (g0, g1, g2) of B, then over
//! g3 on the plane section of B through them, which fixes M on the plane;
//! every point of that section must land in B before g4 and the scalar are
//! tried against the remaining points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fingerprint::{fingerprint, Fingerprint};
use crate::error::{Error, Result};
use crate::gf::{SmallField, Symbol};
use crate::linalg::{self, Mat4};
use crate::projgeo::{dot, Coords, PointIndex, ProjPoint, ProjPointSet, Provenance, SemilinearMap};

pub const EXACT_MAX_Q: u64 = 8;
pub const DEFAULT_BUDGET: u64 = 1 << 24;
const BATCH: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Exact for q ≤ 8, randomized above.
    Auto,
    Exact,
    Randomized,
    FingerprintOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Maximum number of (φ, g0, g1, g2) branches examined.
    pub budget: u64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: SearchMode::Auto,
            budget: DEFAULT_BUDGET,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equivalent,
    /// Every branch exhausted without a witness.
    Inequivalent,
    /// Budget ran out first.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Rows of the matrix, hex symbols.
    pub matrix: Vec<String>,
    /// x ↦ M · x^(2^frobenius)
    pub frobenius: u32,
    /// Applying the map to A reproduced B.
    pub verified: bool,
    #[serde(skip)]
    pub map: SemilinearMap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub branches_total: u64,
    pub branches_examined: u64,
    /// plane maps sending the whole plane section into B
    pub plane_matches: u64,
    /// (g4, scalar) extensions tested
    pub extensions_tested: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub mode: SearchMode,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub fingerprint_a: Fingerprint,
    pub fingerprint_b: Fingerprint,
    pub fingerprints_match: bool,
    pub stats: SearchStats,
}

/// φ(A) with its frame and coordinates in the frame basis.
struct Source {
    frobenius: u32,
    /// coordinates (a0, a1, a2, a4) of each point in the basis f0, f1, f2, f4
    circle: Vec<[Symbol; 4]>,
    off: Vec<[Symbol; 4]>,
    section_size: usize,
    c: [Symbol; 3],
    inverse: Mat4,
}

struct Target {
    points: Vec<Coords>,
    index: PointIndex,
}

fn normal_of(f: &SmallField, a: &Coords, b: &Coords, c: &Coords) -> Option<Coords> {
    let rows = vec![a.to_vec(), b.to_vec(), c.to_vec()];
    let mut ns = linalg::null_space(f, &rows, 4);
    if ns.len() != 1 {
        return None;
    }
    let n = ns.pop()?;
    Some([n[0], n[1], n[2], n[3]])
}

fn prepare(a: &ProjPointSet, frobenius: u32) -> Option<Source> {
    let f = a.field();
    let mut sorted: Vec<ProjPoint> = a
        .points()
        .iter()
        .map(|p| {
            ProjPoint::normalize(f, p.coords().map(|x| f.frobenius(x, frobenius))).expect("nonzero")
        })
        .collect();
    sorted.sort();
    let pts: Vec<Coords> = sorted.iter().map(|p| *p.coords()).collect();
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some(u) = normal_of(f, &pts[i], &pts[j], &pts[k]) else {
                    continue;
                };
                let on: Vec<usize> = (0..n).filter(|&x| dot(f, &u, &pts[x]) == 0).collect();
                let general = |l: usize| {
                    [[i, j, l], [i, k, l], [j, k, l]]
                        .iter()
                        .all(|t| linalg::rank4(f, &t.map(|x| pts[x])) == 3)
                };
                let Some(l) = on
                    .iter()
                    .copied()
                    .find(|&l| l != i && l != j && l != k && general(l))
                else {
                    continue;
                };
                let Some(o) = (0..n).find(|x| !on.contains(x)) else {
                    continue;
                };
                let basis = linalg::mat4_from_columns(&[pts[i], pts[j], pts[k], pts[o]]);
                let inverse =
                    linalg::mat4_inverse(f, &basis).expect("off-plane point completes a basis");
                let coef = |x: usize| linalg::mat4_apply(f, &inverse, &pts[x]);
                let c3 = coef(l);
                let frame = [i, j, k, l, o];
                let circle = on
                    .iter()
                    .copied()
                    .filter(|x| !frame.contains(x))
                    .map(coef)
                    .collect();
                let off = (0..n)
                    .filter(|x| !on.contains(x) && *x != o)
                    .map(coef)
                    .collect();
                return Some(Source {
                    frobenius,
                    circle,
                    off,
                    section_size: on.len(),
                    c: [c3[0], c3[1], c3[2]],
                    inverse,
                });
            }
        }
    }
    None
}

fn combine(f: &SmallField, a: &[Symbol; 4], cols: &[Coords; 3]) -> Coords {
    let mut v = [0; 4];
    for (i, col) in cols.iter().enumerate() {
        if a[i] != 0 {
            for (x, &g) in v.iter_mut().zip(col) {
                *x ^= f.mul(a[i], g);
            }
        }
    }
    v
}

fn member(f: &SmallField, t: &Target, v: Coords) -> bool {
    ProjPoint::normalize(f, v).is_some_and(|p| t.index.get(&p).is_some())
}

#[derive(Default)]
struct Outcome {
    plane_matches: u64,
    extensions: u64,
    witnesses: Vec<SemilinearMap>,
}

/// All maps in one branch (g0, g1, g2), in (g3, g4, scalar) order, stopping
/// after `limit` witnesses.
fn run_branch(f: &SmallField, src: &Source, tgt: &Target, g: [usize; 3], limit: usize) -> Outcome {
    let mut out = Outcome::default();
    let gs = g.map(|i| tgt.points[i]);
    let Some(nb) = normal_of(f, &gs[0], &gs[1], &gs[2]) else {
        return out;
    };
    let plane: Vec<usize> = (0..tgt.points.len())
        .filter(|&x| dot(f, &nb, &tgt.points[x]) == 0)
        .collect();
    if plane.len() != src.section_size {
        return out;
    }
    let lead = nb.iter().position(|&x| x != 0).expect("nonzero normal");
    let mut unit = [0; 4];
    unit[lead] = 1;
    let ginv = linalg::mat4_inverse(f, &linalg::mat4_from_columns(&[gs[0], gs[1], gs[2], unit]))
        .expect("basis");
    let off_b: Vec<usize> = (0..tgt.points.len())
        .filter(|x| !plane.contains(x))
        .collect();

    for &g3 in plane.iter().filter(|x| !g.contains(x)) {
        let d = linalg::mat4_apply(f, &ginv, &tgt.points[g3]);
        if d[..3].contains(&0) {
            continue;
        }
        let s: [Symbol; 3] = std::array::from_fn(|i| f.div(d[i], src.c[i]));
        let cols: [Coords; 3] = std::array::from_fn(|i| gs[i].map(|x| f.mul(s[i], x)));
        if !src
            .circle
            .iter()
            .all(|a| member(f, tgt, combine(f, a, &cols)))
        {
            continue;
        }
        out.plane_matches += 1;
        let partial: Vec<(Coords, Symbol)> = src
            .off
            .iter()
            .map(|a| (combine(f, a, &cols), a[3]))
            .collect();
        for &g4 in &off_b {
            let p4 = tgt.points[g4];
            for lambda in f.nonzero() {
                out.extensions += 1;
                let ok = partial.iter().all(|(u, a4)| {
                    let v: Coords =
                        std::array::from_fn(|i| f.mul(lambda, u[i]) ^ f.mul(*a4, p4[i]));
                    member(f, tgt, v)
                });
                if ok {
                    let scaled: [Coords; 4] = [
                        cols[0].map(|x| f.mul(lambda, x)),
                        cols[1].map(|x| f.mul(lambda, x)),
                        cols[2].map(|x| f.mul(lambda, x)),
                        p4,
                    ];
                    let m = linalg::mat4_mul(f, &linalg::mat4_from_columns(&scaled), &src.inverse);
                    let map = SemilinearMap::new(f, m, src.frobenius)
                        .expect("invertible")
                        .normalized(f);
                    out.witnesses.push(map);
                    if out.witnesses.len() >= limit {
                        return out;
                    }
                }
            }
        }
    }
    out
}

struct Problem {
    field: SmallField,
    sources: Vec<Source>,
    target: Target,
    n: u64,
}

impl Problem {
    fn new(a: &ProjPointSet, b: &ProjPointSet) -> Result<Self> {
        let f = a.field().clone();
        let sources = (0..f.degree())
            .map(|e| prepare(a, e))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::Parameter(
                    "search needs three points whose plane holds a fourth in general position"
                        .into(),
                )
            })?;
        let sorted: Vec<Coords> = b.sorted().iter().map(|p| *p.coords()).collect();
        let target_set = ProjPointSet::new(f.clone(), sorted.clone(), Provenance::File)?;
        let target = Target {
            points: sorted,
            index: target_set.index(),
        };
        Ok(Problem {
            field: f,
            sources,
            target,
            n: b.len() as u64,
        })
    }

    fn per_frobenius(&self) -> u64 {
        self.n * (self.n - 1) * (self.n - 2)
    }

    fn total(&self) -> u64 {
        self.sources.len() as u64 * self.per_frobenius()
    }

    /// Branch number → (φ, ordered distinct triple), lexicographic.
    fn decode(&self, idx: u64) -> (usize, [usize; 3]) {
        let n = self.n;
        let e = idx / self.per_frobenius();
        let r = idx % self.per_frobenius();
        let i0 = r / ((n - 1) * (n - 2));
        let r = r % ((n - 1) * (n - 2));
        let mut i1 = r / (n - 2);
        if i1 >= i0 {
            i1 += 1;
        }
        let mut i2 = r % (n - 2);
        let (lo, hi) = (i0.min(i1), i0.max(i1));
        if i2 >= lo {
            i2 += 1;
        }
        if i2 >= hi {
            i2 += 1;
        }
        (e as usize, [i0 as usize, i1 as usize, i2 as usize])
    }

    fn run(&self, idx: u64, limit: usize) -> Outcome {
        let (e, g) = self.decode(idx);
        run_branch(&self.field, &self.sources[e], &self.target, g, limit)
    }

    /// First witness over the branch sequence, scanned in fixed batches so
    /// the statistics do not depend on scheduling.
    fn first_witness(
        &self,
        branches: impl Iterator<Item = u64>,
    ) -> (Option<SemilinearMap>, SearchStats) {
        let mut stats = SearchStats {
            branches_total: self.total(),
            ..SearchStats::default()
        };
        let mut it = branches.peekable();
        while it.peek().is_some() {
            let batch: Vec<u64> = it.by_ref().take(BATCH).collect();
            let outcomes: Vec<Outcome> = batch.par_iter().map(|&i| self.run(i, 1)).collect();
            for o in outcomes {
                stats.branches_examined += 1;
                stats.plane_matches += o.plane_matches;
                stats.extensions_tested += o.extensions;
                if let Some(w) = o.witnesses.into_iter().next() {
                    return (Some(w), stats);
                }
            }
        }
        (None, stats)
    }
}

fn witness(a: &ProjPointSet, b: &ProjPointSet, map: SemilinearMap) -> Witness {
    let verified = map.apply_set(a).same_set(b);
    Witness {
        matrix: map.matrix_hex(),
        frobenius: map.frobenius,
        verified,
        map,
    }
}

pub fn search_equivalence(
    a: &ProjPointSet,
    b: &ProjPointSet,
    opts: SearchOptions,
) -> Result<EquivalenceReport> {
    if a.q() != b.q() {
        return Err(Error::Parameter(format!(
            "point sets over GF({}) and GF({})",
            a.q(),
            b.q()
        )));
    }
    let q = a.q();
    let mode = match opts.mode {
        SearchMode::Auto if q <= EXACT_MAX_Q => SearchMode::Exact,
        SearchMode::Auto => SearchMode::Randomized,
        SearchMode::Exact if q > EXACT_MAX_Q => {
            return Err(Error::Parameter(format!(
                "exact search is limited to q <= {EXACT_MAX_Q}"
            )));
        }
        m => m,
    };
    let fingerprint_a = fingerprint(a);
    let fingerprint_b = fingerprint(b);
    let fingerprints_match = fingerprint_a == fingerprint_b;
    let mut report = EquivalenceReport {
        mode,
        verdict: Verdict::Inconclusive,
        witness: None,
        fingerprint_a,
        fingerprint_b,
        fingerprints_match,
        stats: SearchStats::default(),
    };
    if mode == SearchMode::FingerprintOnly {
        if !fingerprints_match {
            report.verdict = Verdict::Inequivalent;
        }
        return Ok(report);
    }
    if a.len() != b.len() {
        report.verdict = Verdict::Inequivalent;
        return Ok(report);
    }
    if a.same_set(b) {
        report.verdict = Verdict::Equivalent;
        report.witness = Some(witness(a, b, SemilinearMap::identity()));
        return Ok(report);
    }
    let problem = Problem::new(a, b)?;
    let total = problem.total();
    let (found, stats) = match mode {
        SearchMode::Exact => problem.first_witness(0..total.min(opts.budget)),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let sample: Vec<u64> = (0..opts.budget).map(|_| rng.gen_range(0..total)).collect();
            problem.first_witness(sample.into_iter())
        }
    };
    report.stats = stats;
    report.verdict = match &found {
        Some(_) => Verdict::Equivalent,
        None if mode == SearchMode::Exact && report.stats.branches_examined == total => {
            Verdict::Inequivalent
        }
        None => Verdict::Inconclusive,
    };
    report.witness = found.map(|m| witness(a, b, m));
    Ok(report)
}

/// Every semilinear map taking A onto B, up to `limit`, in search order.
pub fn enumerate_equivalences(
    a: &ProjPointSet,
    b: &ProjPointSet,
    limit: usize,
) -> Result<Vec<SemilinearMap>> {
    if a.q() != b.q() || a.q() > EXACT_MAX_Q {
        return Err(Error::Parameter(format!(
            "enumeration needs a common q <= {EXACT_MAX_Q}"
        )));
    }
    if a.len() != b.len() {
        return Ok(Vec::new());
    }
    let problem = Problem::new(a, b)?;
    let mut out = Vec::new();
    let total = problem.total();
    let mut start = 0;
    while start < total && out.len() < limit {
        let end = (start + BATCH as u64).min(total);
        let found: Vec<Outcome> = (start..end)
            .into_par_iter()
            .map(|i| problem.run(i, limit))
            .collect();
        for o in found {
            out.extend(o.witnesses);
        }
        start = end;
    }
    out.truncate(limit);
    Ok(out)
}
