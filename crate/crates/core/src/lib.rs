//! Irreducible cyclic codes of length q²+1 over GF(q), q = 2^m, and the
//! ovoids of PG(3, q) their generator matrices define.
//!
//! The crate builds the codes from the trace construction, computes their
//! weight distributions by exhaustive enumeration and by Gaussian periods,
//! transforms them to the dual, reads the generator columns as a point set,
//! certifies that set as a cap with the plane profile of an ovoid, extracts
//! the 3-designs carried by the code, and probes projective-semilinear
//! equivalence against the elliptic quadric and the Tits ovoid.
//!
//! ```
//! use ovoid_core::{cyclic_code, gf::TowerContext};
//!
//! let tower = TowerContext::new(2).unwrap(); // GF(4) ⊂ GF(256)
//! let code = cyclic_code::build_irreducible_cyclic(&tower, 15).unwrap();
//! assert_eq!((code.len(), code.dimension()), (17, 4));
//! let dist = cyclic_code::weight_distribution_by_enumeration(&code).unwrap();
//! assert_eq!(dist.get(12), 204);
//! assert_eq!(dist.get(16), 51);
//! ```

pub mod combinatorics;
pub mod cyclic_code;
pub mod cyclotomy;
pub mod designs;
pub mod equivalence;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod projgeo;

pub use error::{Error, Result};
