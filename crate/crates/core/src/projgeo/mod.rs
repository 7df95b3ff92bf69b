//! Points of PG(3, q), q = 2^m, and the ovoids among them.
//!
//! A point is a nonzero vector of GF(q)^4 up to scalars, stored with its
//! first nonzero coordinate equal to 1. Planes are handled the same way as
//! dual vectors; a point lies on a plane when their dot product vanishes.

mod cap;
mod map;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::cyclic_code::{LinearCode, WeightDistribution};
use crate::error::{Error, Result};
use crate::gf::{SmallField, Symbol};

pub use cap::{
    certify_cap, certify_cap_naive, collinear_triples_line_sweep, collinear_triples_naive,
    plane_profile, plane_sections, CapCertificate, CollinearWitness, Strategy,
};
pub use map::SemilinearMap;

pub type Coords = [Symbol; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(Coords);

impl ProjPoint {
    /// Scales `v` so its first nonzero coordinate is 1; `None` for zero.
    #[inline]
    pub fn normalize(f: &SmallField, v: Coords) -> Option<Self> {
        let lead = *v.iter().find(|&&x| x != 0)?;
        if lead == 1 {
            return Some(ProjPoint(v));
        }
        let inv = f.inv(lead);
        Some(ProjPoint(v.map(|x| f.mul(x, inv))))
    }

    pub fn coords(&self) -> &Coords {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        let c = self.0;
        format!("{:x} {:x} {:x} {:x}", c[0], c[1], c[2], c[3])
    }
}

#[inline]
pub fn dot(f: &SmallField, a: &Coords, b: &Coords) -> Symbol {
    f.mul(a[0], b[0]) ^ f.mul(a[1], b[1]) ^ f.mul(a[2], b[2]) ^ f.mul(a[3], b[3])
}

/// All q³+q²+q+1 normalized nonzero vectors, in increasing order.
pub fn all_points(f: &SmallField) -> Vec<ProjPoint> {
    let q = f.q() as u32;
    let mut out = Vec::with_capacity((q * q * q + q * q + q + 1) as usize);
    for lead in (0..4).rev() {
        let free = 3 - lead;
        for idx in 0..q.pow(free as u32) {
            let mut c = [0 as Symbol; 4];
            c[lead] = 1;
            let mut x = idx;
            for slot in (lead + 1..4).rev() {
                c[slot] = (x % q) as Symbol;
                x /= q;
            }
            out.push(ProjPoint(c));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    EllipticQuadric { a: Symbol },
    Tits { sigma: u64 },
    FromCode,
    File,
    Transformed,
}

/// Lookup from point to its position in a set.
pub struct PointIndex {
    m: u32,
    dense: Option<Vec<u32>>,
    sparse: HashMap<u64, u32>,
}

const DENSE_INDEX_MAX_BITS: u32 = 24;

impl PointIndex {
    fn new(m: u32, points: &[ProjPoint]) -> Self {
        let bits = 4 * m;
        let mut index = PointIndex {
            m,
            dense: None,
            sparse: HashMap::new(),
        };
        if bits <= DENSE_INDEX_MAX_BITS {
            let mut dense = vec![u32::MAX; 1 << bits];
            for (i, p) in points.iter().enumerate() {
                dense[index.key(p) as usize] = i as u32;
            }
            index.dense = Some(dense);
        } else {
            index.sparse = points
                .iter()
                .enumerate()
                .map(|(i, p)| (index.key(p), i as u32))
                .collect();
        }
        index
    }

    #[inline]
    fn key(&self, p: &ProjPoint) -> u64 {
        let c = p.0;
        let m = self.m;
        (c[0] as u64) << (3 * m) | (c[1] as u64) << (2 * m) | (c[2] as u64) << m | c[3] as u64
    }

    #[inline]
    pub fn get(&self, p: &ProjPoint) -> Option<usize> {
        let k = self.key(p);
        match &self.dense {
            Some(d) => {
                let v = d[k as usize];
                (v != u32::MAX).then_some(v as usize)
            }
            None => self.sparse.get(&k).map(|&v| v as usize),
        }
    }
}

/// An ordered list of distinct points of PG(3, q).
#[derive(Clone, Debug)]
pub struct ProjPointSet {
    field: SmallField,
    points: Vec<ProjPoint>,
    provenance: Provenance,
}

impl ProjPointSet {
    /// Normalizes every vector and rejects zero vectors and repeats.
    pub fn new(field: SmallField, vectors: Vec<Coords>, provenance: Provenance) -> Result<Self> {
        let mut points = Vec::with_capacity(vectors.len());
        let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
        let q = field.q() as Symbol;
        for (i, v) in vectors.into_iter().enumerate() {
            if v.iter().any(|&x| x >= q) {
                return Err(Error::Parameter(format!(
                    "point {i}: coordinate outside GF({q})"
                )));
            }
            let p = ProjPoint::normalize(&field, v)
                .ok_or_else(|| Error::Parameter(format!("point {i} is the zero vector")))?;
            if let Some(&j) = seen.get(&p) {
                return Err(Error::Parameter(format!(
                    "points {j} and {i} coincide ({})",
                    p.to_hex()
                )));
            }
            seen.insert(p, i);
            points.push(p);
        }
        Ok(ProjPointSet {
            field,
            points,
            provenance,
        })
    }

    pub fn field(&self) -> &SmallField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn index(&self) -> PointIndex {
        PointIndex::new(self.field.degree(), &self.points)
    }

    /// Points in increasing coordinate order.
    pub fn sorted(&self) -> Vec<ProjPoint> {
        let mut v = self.points.clone();
        v.sort();
        v
    }

    /// Same points as `other`, ignoring order.
    pub fn same_set(&self, other: &ProjPointSet) -> bool {
        self.q() == other.q() && self.sorted() == other.sorted()
    }

    /// `PG3 q=<q>`, then one point per line as four hex symbols.
    pub fn to_text(&self) -> String {
        let mut s = format!("PG3 q={}\n", self.q());
        for p in &self.points {
            let _ = writeln!(s, "{}", p.to_hex());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let q: u64 = header
            .strip_prefix("PG3 q=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: hl,
                msg: "header must be `PG3 q=<q>`".into(),
            })?;
        if !q.is_power_of_two() || q < 2 {
            return Err(Error::Parse {
                line: hl,
                msg: format!("q = {q} is not a power of two"),
            });
        }
        let field = SmallField::new(q.trailing_zeros())?;
        let mut vectors = Vec::new();
        for (ln, line) in lines {
            let parts: Vec<Symbol> = line
                .split_whitespace()
                .map(|t| Symbol::from_str_radix(t, 16))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line: ln,
                    msg: format!("bad coordinate: {e}"),
                })?;
            let c: Coords = parts.try_into().map_err(|_| Error::Parse {
                line: ln,
                msg: "expected 4 coordinates".into(),
            })?;
            vectors.push(c);
        }
        ProjPointSet::new(field, vectors, Provenance::File)
    }
}

fn check_even_q(m: u32) -> Result<SmallField> {
    if m < 2 {
        return Err(Error::Parameter(format!(
            "ovoids need q = 2^m with m ≥ 2, got m = {m}"
        )));
    }
    SmallField::new(m)
}

/// Smallest-encoding a with t² + t + a irreducible over GF(q).
pub fn elliptic_parameter(f: &SmallField) -> Symbol {
    f.elements()
        .find(|&a| f.elements().all(|t| f.mul(t, t) ^ t ^ a != 0))
        .expect("an irreducible quadratic exists over every finite field")
}

/// {(0,0,1,0)} ∪ {(x, y, x² + xy + a y², 1)}.
pub fn elliptic_quadric(m: u32) -> Result<ProjPointSet> {
    let f = check_even_q(m)?;
    let a = elliptic_parameter(&f);
    let mut v = vec![[0, 0, 1, 0]];
    for x in f.elements() {
        for y in f.elements() {
            let z = f.mul(x, x) ^ f.mul(x, y) ^ f.mul(a, f.mul(y, y));
            v.push([x, y, z, 1]);
        }
    }
    ProjPointSet::new(f, v, Provenance::EllipticQuadric { a })
}

/// {(0,0,1,0)} ∪ {(x, y, x^σ + xy + y^(σ+2), 1)} for q = 2^(2e+1), σ = 2^(e+1).
pub fn tits_ovoid(m: u32) -> Result<ProjPointSet> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::Parameter(format!(
            "the Tits ovoid needs q = 2^(2e+1) with e ≥ 1, got q = 2^{m}"
        )));
    }
    let f = SmallField::new(m)?;
    let e = (m - 1) / 2;
    let sigma = 1u64 << (e + 1);
    let mut v = vec![[0, 0, 1, 0]];
    for x in f.elements() {
        for y in f.elements() {
            let z = f.pow(x, sigma) ^ f.mul(x, y) ^ f.pow(y, sigma + 2);
            v.push([x, y, z, 1]);
        }
    }
    ProjPointSet::new(f, v, Provenance::Tits { sigma })
}

/// Normalized generator columns of a 4-dimensional code, rejecting zero and
/// repeated columns.
pub fn points_from_columns(code: &LinearCode) -> Result<ProjPointSet> {
    if code.dimension() != 4 {
        return Err(Error::Parameter(format!(
            "need a 4-row generator matrix, got {}",
            code.dimension()
        )));
    }
    let vectors: Vec<Coords> = (0..code.len())
        .map(|j| {
            let c = code.column(j);
            [c[0], c[1], c[2], c[3]]
        })
        .collect();
    ProjPointSet::new(code.field().clone(), vectors, Provenance::FromCode)
}

/// The generator columns of a [q²+1, 4, q²-q] code, after checking those
/// parameters against the code's weight distribution.
pub fn points_from_code(code: &LinearCode, dist: &WeightDistribution) -> Result<ProjPointSet> {
    let q = code.q();
    let (n, k) = (code.len(), code.dimension());
    let d = dist.min_nonzero_weight().unwrap_or(0) as u64;
    let expect = ((q * q + 1) as usize, 4usize, q * q - q);
    if (n, k, d) != expect || dist.total() != (q as u128).pow(k as u32) {
        return Err(Error::Parameter(format!(
            "code is [{n}, {k}, {d}] over GF({q}), not an ovoid code [{}, {}, {}]",
            expect.0, expect.1, expect.2
        )));
    }
    points_from_columns(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic_code::{ovoid_code, weight_distribution_by_enumeration, CodeOrigin};
    use crate::gf::TowerContext;

    #[test]
    fn normalization_is_canonical() {
        let f = SmallField::new(2).unwrap();
        let p = ProjPoint::normalize(&f, [0, 2, 3, 1]).unwrap();
        assert_eq!(p.coords(), &[0, 1, f.div(3, 2), f.div(1, 2)]);
        for s in f.nonzero() {
            let scaled = [0, f.mul(s, 2), f.mul(s, 3), s];
            assert_eq!(ProjPoint::normalize(&f, scaled).unwrap(), p);
        }
        assert!(ProjPoint::normalize(&f, [0; 4]).is_none());
    }

    #[test]
    fn point_count() {
        let f = SmallField::new(2).unwrap();
        let pts = all_points(&f);
        assert_eq!(pts.len(), 85);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn elliptic_sizes_and_parameter() {
        for m in 2..=4 {
            let e = elliptic_quadric(m).unwrap();
            let q = e.q() as usize;
            assert_eq!(e.len(), q * q + 1);
            let Provenance::EllipticQuadric { a } = *e.provenance() else {
                panic!()
            };
            let f = e.field();
            assert!(f.elements().all(|t| f.mul(t, t) ^ t ^ a != 0));
        }
        assert!(elliptic_quadric(1).is_err());
    }

    #[test]
    fn tits_admissibility() {
        assert!(tits_ovoid(2).is_err());
        assert!(tits_ovoid(4).is_err());
        let t = tits_ovoid(3).unwrap();
        assert_eq!(t.len(), 65);
        assert_eq!(*t.provenance(), Provenance::Tits { sigma: 4 });
        assert_eq!(
            *tits_ovoid(5).unwrap().provenance(),
            Provenance::Tits { sigma: 8 }
        );
    }

    #[test]
    fn duplicates_and_zero_rejected() {
        let f = SmallField::new(2).unwrap();
        assert!(ProjPointSet::new(
            f.clone(),
            vec![[1, 0, 0, 0], [2, 0, 0, 0]],
            Provenance::File
        )
        .is_err());
        assert!(ProjPointSet::new(f, vec![[0, 0, 0, 0]], Provenance::File).is_err());
    }

    #[test]
    fn code_points_q4() {
        let t = TowerContext::new(2).unwrap();
        let code = ovoid_code(&t).unwrap();
        let dist = weight_distribution_by_enumeration(&code).unwrap();
        let pts = points_from_code(&code, &dist).unwrap();
        assert_eq!(pts.len(), 17);
    }

    #[test]
    fn repeated_column_rejected() {
        let t = TowerContext::new(2).unwrap();
        let code = ovoid_code(&t).unwrap();
        let mut rows = code.rows().to_vec();
        for row in rows.iter_mut() {
            row[0] = row[1];
        }
        let bad = LinearCode::new(code.field().clone(), rows, CodeOrigin::External).unwrap();
        let dist = weight_distribution_by_enumeration(&bad).unwrap();
        assert!(points_from_code(&bad, &dist).is_err());
        assert!(points_from_columns(&bad).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let e = elliptic_quadric(2).unwrap();
        let text = e.to_text();
        assert!(text.starts_with("PG3 q=4\n"));
        let back = ProjPointSet::from_text(&text).unwrap();
        assert_eq!(back.points(), e.points());
        assert!(ProjPointSet::from_text("PG3 q=4\n1 2 3\n").is_err());
        assert!(ProjPointSet::from_text("PG2 q=4\n").is_err());
    }

    #[test]
    fn index_lookup() {
        let e = elliptic_quadric(3).unwrap();
        let idx = e.index();
        for (i, p) in e.points().iter().enumerate() {
            assert_eq!(idx.get(p), Some(i));
        }
        let outside = all_points(e.field())
            .into_iter()
            .find(|p| !e.points().contains(p))
            .unwrap();
        assert_eq!(idx.get(&outside), None);
    }
}
