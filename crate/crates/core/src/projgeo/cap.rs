use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{all_points, dot, ProjPoint, ProjPointSet};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    LineSweep,
    Naive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollinearWitness {
    pub indices: [usize; 3],
    pub points: [String; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapCertificate {
    pub q: u64,
    pub points: usize,
    pub strategy: Strategy,
    pub is_cap: bool,
    pub collinear_triples: u64,
    pub witness: Option<CollinearWitness>,
    /// |plane ∩ set| → number of planes
    pub plane_profile: BTreeMap<usize, u64>,
    pub planes_total: u64,
    pub within_cap_bound: bool,
    /// A cap of q²+1 points meeting planes only in 1 or q+1 points.
    pub is_ovoid: bool,
}

/// Collinear triples by scanning, for each pair, the other q-1 points of
/// their line. Each triple i<j<k is counted once, from the pair (i, j).
/// Returns the count and the lexicographically first triple.
pub fn collinear_triples_line_sweep(ps: &ProjPointSet) -> (u64, Option<[usize; 3]>) {
    let f = ps.field();
    let pts = ps.points();
    let index = ps.index();
    let n = pts.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let p = pts[i].coords();
            let mut count = 0u64;
            let mut first: Option<[usize; 3]> = None;
            for j in i + 1..n {
                let r = pts[j].coords();
                for t in f.nonzero() {
                    let v = [
                        p[0] ^ f.mul(t, r[0]),
                        p[1] ^ f.mul(t, r[1]),
                        p[2] ^ f.mul(t, r[2]),
                        p[3] ^ f.mul(t, r[3]),
                    ];
                    let point =
                        ProjPoint::normalize(f, v).expect("distinct points are independent");
                    if let Some(k) = index.get(&point) {
                        if k > j {
                            count += 1;
                            let cand = [i, j, k];
                            if first.is_none_or(|w| cand < w) {
                                first = Some(cand);
                            }
                        }
                    }
                }
            }
            (count, first)
        })
        .reduce(|| (0, None), merge_triples)
}

fn merge_triples(
    a: (u64, Option<[usize; 3]>),
    b: (u64, Option<[usize; 3]>),
) -> (u64, Option<[usize; 3]>) {
    let first = match (a.1, b.1) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    (a.0 + b.0, first)
}

/// Rank test on every 3-subset.
pub fn collinear_triples_naive(ps: &ProjPointSet) -> (u64, Option<[usize; 3]>) {
    let f = ps.field();
    let pts = ps.points();
    let n = pts.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            let mut first = None;
            for j in i + 1..n {
                for k in j + 1..n {
                    if linalg::rank4(f, &[*pts[i].coords(), *pts[j].coords(), *pts[k].coords()]) < 3
                    {
                        count += 1;
                        first.get_or_insert([i, j, k]);
                    }
                }
            }
            (count, first)
        })
        .reduce(|| (0, None), merge_triples)
}

/// |plane ∩ set| tallied over all q³+q²+q+1 planes.
pub fn plane_profile(ps: &ProjPointSet) -> BTreeMap<usize, u64> {
    let f = ps.field();
    let planes = all_points(f);
    let pts: Vec<_> = ps.points().iter().map(|p| *p.coords()).collect();
    let hist = planes
        .par_iter()
        .fold(
            || vec![0u64; pts.len() + 1],
            |mut h, u| {
                let c = pts.iter().filter(|x| dot(f, u.coords(), x) == 0).count();
                h[c] += 1;
                h
            },
        )
        .reduce(
            || vec![0u64; pts.len() + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    hist.into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect()
}

/// Point indices on each plane meeting the set in exactly `size` points,
/// planes in increasing dual-coordinate order.
pub fn plane_sections(ps: &ProjPointSet, size: usize) -> Vec<Vec<usize>> {
    let f = ps.field();
    let pts: Vec<_> = ps.points().iter().map(|p| *p.coords()).collect();
    all_points(f)
        .par_iter()
        .filter_map(|u| {
            let on: Vec<usize> = (0..pts.len())
                .filter(|&i| dot(f, u.coords(), &pts[i]) == 0)
                .collect();
            (on.len() == size).then_some(on)
        })
        .collect()
}

fn certificate(
    ps: &ProjPointSet,
    strategy: Strategy,
    triples: (u64, Option<[usize; 3]>),
) -> CapCertificate {
    let q = ps.q();
    let n = ps.len();
    let profile = plane_profile(ps);
    let planes_total = profile.values().sum();
    let (collinear_triples, first) = triples;
    let witness = first.map(|idx| CollinearWitness {
        indices: idx,
        points: idx.map(|i| ps.points()[i].to_hex()),
    });
    let is_cap = witness.is_none();
    let ovoid_profile = BTreeMap::from([(1usize, q * q + 1), (q as usize + 1, q * q * q + q)]);
    CapCertificate {
        q,
        points: n,
        strategy,
        is_cap,
        collinear_triples,
        witness,
        is_ovoid: is_cap && n as u64 == q * q + 1 && profile == ovoid_profile,
        plane_profile: profile,
        planes_total,
        within_cap_bound: !is_cap || n as u64 <= q * q + 1,
    }
}

pub fn certify_cap(ps: &ProjPointSet) -> CapCertificate {
    certificate(ps, Strategy::LineSweep, collinear_triples_line_sweep(ps))
}

pub fn certify_cap_naive(ps: &ProjPointSet) -> CapCertificate {
    certificate(ps, Strategy::Naive, collinear_triples_naive(ps))
}
