use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::gf::{SmallField, Symbol};
use crate::linalg;
use crate::projgeo::{all_points, dot, plane_profile, Coords, ProjPointSet};

/// Data preserved by every semilinear map of PG(3, q).
///
/// Circles are the plane sections with exactly q+1 points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub q: u64,
    pub points: usize,
    pub plane_profile: BTreeMap<usize, u64>,
    pub circles: usize,
    /// number of circles through a pair → number of pairs
    pub pair_tally: BTreeMap<u64, u64>,
    /// |C ∩ D| over unordered pairs of distinct circles → number of pairs
    pub circle_intersections: BTreeMap<usize, u64>,
    /// circles of at least five points lying on a conic of their plane
    pub conic_circles: u64,
}

/// Each circle as a point-index list together with its plane.
fn circles(ps: &ProjPointSet) -> Vec<(Coords, Vec<usize>)> {
    let f = ps.field();
    let size = ps.q() as usize + 1;
    let pts: Vec<Coords> = ps.points().iter().map(|p| *p.coords()).collect();
    all_points(f)
        .par_iter()
        .filter_map(|u| {
            let on: Vec<usize> = (0..pts.len())
                .filter(|&i| dot(f, u.coords(), &pts[i]) == 0)
                .collect();
            (on.len() == size).then(|| (*u.coords(), on))
        })
        .collect()
}

/// Whether the coplanar points lie on a conic. Plane coordinates drop the
/// coordinate where the plane's normal has its leading 1.
pub fn on_conic(f: &SmallField, normal: &Coords, points: &[Coords]) -> bool {
    let lead = normal.iter().position(|&x| x != 0).expect("nonzero normal");
    let rows: Vec<Vec<Symbol>> = points
        .iter()
        .map(|p| {
            let y: Vec<Symbol> = (0..4).filter(|&i| i != lead).map(|i| p[i]).collect();
            vec![
                f.mul(y[0], y[0]),
                f.mul(y[1], y[1]),
                f.mul(y[2], y[2]),
                f.mul(y[0], y[1]),
                f.mul(y[0], y[2]),
                f.mul(y[1], y[2]),
            ]
        })
        .collect();
    linalg::rank(f, &rows) < 6
}

pub fn fingerprint(ps: &ProjPointSet) -> Fingerprint {
    let f = ps.field();
    let n = ps.len();
    let circ = circles(ps);
    let words = n.div_ceil(64);
    let bits: Vec<Vec<u64>> = circ
        .iter()
        .map(|(_, c)| {
            let mut b = vec![0u64; words];
            c.iter().for_each(|&i| b[i / 64] |= 1 << (i % 64));
            b
        })
        .collect();

    let mut through = vec![0u64; n * n];
    for (_, c) in &circ {
        for (a, &i) in c.iter().enumerate() {
            for &j in &c[a + 1..] {
                through[i * n + j] += 1;
            }
        }
    }
    let mut pair_tally = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            *pair_tally.entry(through[i * n + j]).or_insert(0) += 1;
        }
    }

    let circle_intersections = (0..bits.len())
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<usize, u64>, i| {
            for j in i + 1..bits.len() {
                let c = bits[i]
                    .iter()
                    .zip(&bits[j])
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum();
                *acc.entry(c).or_insert(0) += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let conic_circles = circ
        .par_iter()
        .filter(|(u, c)| {
            c.len() >= 5
                && on_conic(
                    f,
                    u,
                    &c.iter()
                        .map(|&i| *ps.points()[i].coords())
                        .collect::<Vec<_>>(),
                )
        })
        .count() as u64;

    Fingerprint {
        q: ps.q(),
        points: n,
        plane_profile: plane_profile(ps),
        circles: circ.len(),
        pair_tally,
        circle_intersections,
        conic_circles,
    }
}
