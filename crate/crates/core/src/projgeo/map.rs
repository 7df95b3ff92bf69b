use rand::Rng;
use serde::Serialize;

use super::{Coords, ProjPoint, ProjPointSet, Provenance};
use crate::error::{Error, Result};
use crate::gf::{SmallField, Symbol};
use crate::linalg::{self, Mat4};

/// x ↦ M · x^(2^e), coordinatewise Frobenius followed by an invertible matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemilinearMap {
    pub matrix: Mat4,
    pub frobenius: u32,
}

impl SemilinearMap {
    pub fn identity() -> Self {
        SemilinearMap {
            matrix: linalg::mat4_identity(),
            frobenius: 0,
        }
    }

    pub fn new(f: &SmallField, matrix: Mat4, frobenius: u32) -> Result<Self> {
        if linalg::mat4_inverse(f, &matrix).is_none() {
            return Err(Error::Parameter("matrix is singular".into()));
        }
        Ok(SemilinearMap {
            matrix,
            frobenius: frobenius % f.degree(),
        })
    }

    /// Uniform invertible matrix; random field automorphism when `semilinear`.
    pub fn random<R: Rng>(f: &SmallField, rng: &mut R, semilinear: bool) -> Self {
        let q = f.q() as Symbol;
        loop {
            let mut m = [[0; 4]; 4];
            for row in m.iter_mut() {
                for x in row.iter_mut() {
                    *x = rng.gen_range(0..q);
                }
            }
            if linalg::mat4_inverse(f, &m).is_some() {
                let frobenius = if semilinear {
                    rng.gen_range(0..f.degree())
                } else {
                    0
                };
                return SemilinearMap {
                    matrix: m,
                    frobenius,
                };
            }
        }
    }

    #[inline]
    pub fn apply_coords(&self, f: &SmallField, v: &Coords) -> Coords {
        let x = v.map(|c| f.frobenius(c, self.frobenius));
        linalg::mat4_apply(f, &self.matrix, &x)
    }

    pub fn apply(&self, f: &SmallField, p: &ProjPoint) -> ProjPoint {
        ProjPoint::normalize(f, self.apply_coords(f, p.coords())).expect("invertible map")
    }

    pub fn apply_set(&self, ps: &ProjPointSet) -> ProjPointSet {
        let f = ps.field();
        let v = ps
            .points()
            .iter()
            .map(|p| self.apply_coords(f, p.coords()))
            .collect();
        ProjPointSet::new(f.clone(), v, Provenance::Transformed).expect("bijection on points")
    }

    /// Same map with the matrix scaled so its first nonzero entry is 1.
    pub fn normalized(&self, f: &SmallField) -> Self {
        let lead = self
            .matrix
            .iter()
            .flatten()
            .copied()
            .find(|&x| x != 0)
            .unwrap_or(1);
        let inv = f.inv(lead);
        SemilinearMap {
            matrix: self.matrix.map(|r| r.map(|x| f.mul(x, inv))),
            frobenius: self.frobenius,
        }
    }

    /// Rows of hex symbols.
    pub fn matrix_hex(&self) -> Vec<String> {
        self.matrix
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| format!("{x:x}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }
}
