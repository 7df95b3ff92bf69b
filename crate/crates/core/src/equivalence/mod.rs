//! Projective semilinear equivalence of point sets in PG(3, q).

mod fingerprint;
mod search;

pub use fingerprint::{fingerprint, on_conic, Fingerprint};
pub use search::{
    enumerate_equivalences, search_equivalence, EquivalenceReport, SearchMode, SearchOptions,
    SearchStats, Verdict, Witness, DEFAULT_BUDGET, EXACT_MAX_Q,
};

use crate::error::{Error, Result};
use crate::gf::SmallField;
use crate::linalg::{self, Mat4};
use crate::projgeo::{Coords, ProjPoint};

/// Five points of PG(3, q), no four coplanar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    points: [ProjPoint; 5],
}

impl Frame {
    pub fn new(f: &SmallField, points: [ProjPoint; 5]) -> Result<Self> {
        for skip in 0..5 {
            let four: Vec<Coords> = (0..5)
                .filter(|&i| i != skip)
                .map(|i| *points[i].coords())
                .collect();
            if linalg::rank4(f, &four) < 4 {
                return Err(Error::Parameter(
                    "four of the frame points are coplanar".into(),
                ));
            }
        }
        Ok(Frame { points })
    }

    pub fn points(&self) -> &[ProjPoint; 5] {
        &self.points
    }

    /// Matrix sending e_0..e_3 to the first four points, scaled so that
    /// (1,1,1,1) goes to the fifth.
    fn standard_matrix(&self, f: &SmallField) -> Mat4 {
        let cols: [Coords; 4] = std::array::from_fn(|i| *self.points[i].coords());
        let base = linalg::mat4_from_columns(&cols);
        let inv = linalg::mat4_inverse(f, &base).expect("frame points independent");
        let c = linalg::mat4_apply(f, &inv, self.points[4].coords());
        let scaled: [Coords; 4] = std::array::from_fn(|i| cols[i].map(|x| f.mul(c[i], x)));
        linalg::mat4_from_columns(&scaled)
    }
}

/// The unique projectivity taking each point of `from` to the matching
/// point of `to`.
pub fn projectivity_from_frames(f: &SmallField, from: &Frame, to: &Frame) -> Mat4 {
    let a = from.standard_matrix(f);
    let b = to.standard_matrix(f);
    let a_inv = linalg::mat4_inverse(f, &a).expect("invertible");
    linalg::mat4_mul(f, &b, &a_inv)
}
