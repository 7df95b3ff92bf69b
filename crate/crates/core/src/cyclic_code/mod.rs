//! Linear codes over GF(q), in particular the irreducible cyclic codes
//!
//! C(r, N) = { (Tr_{r/q}(β θ^i))_{0 ≤ i < n} : β ∈ GF(r) },  θ = α^N, n = (r-1)/N.
//!
//! For N = q²-1 these have parameters [q²+1, 4, q²-q].

mod dual;
pub(crate) mod weights;

use std::fmt::Write as _;

use serde::Serialize;

use crate::cyclotomy::gcd;
use crate::error::{Error, Result};
use crate::gf::{SmallField, Symbol, TowerContext};
use crate::linalg;

pub use dual::{
    closed_dual_formula, dual_distance_direct, macwilliams_transform, ovoid_multiplicities,
    DualDistanceReport, DualDistribution,
};
pub use weights::{
    codeword_from_index, griesmer_length, meets_griesmer, weight_distribution_by_enumeration,
    weight_distribution_by_periods, ClassWeight, PeriodWeights, WeightDistribution,
    ENUMERATION_BUDGET,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CodeOrigin {
    IrreducibleCyclic { m: u32, classes: u64 },
    External,
}

/// A k x n generator matrix of full row rank over GF(q).
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: SmallField,
    rows: Vec<Vec<Symbol>>,
    origin: CodeOrigin,
}

impl LinearCode {
    /// Fails unless the rows are nonempty, of equal length, and independent.
    pub fn new(field: SmallField, rows: Vec<Vec<Symbol>>, origin: CodeOrigin) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parameter(
                "generator rows must be nonempty and equal length".into(),
            ));
        }
        let q = field.q() as Symbol;
        if rows.iter().flatten().any(|&s| s >= q) {
            return Err(Error::Parameter(format!("symbol outside GF({q})")));
        }
        if linalg::rank(&field, &rows) != rows.len() {
            return Err(Error::Parameter(
                "generator matrix does not have full row rank".into(),
            ));
        }
        Ok(LinearCode {
            field,
            rows,
            origin,
        })
    }

    pub fn field(&self) -> &SmallField {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// Code length n.
    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension k.
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Symbol>] {
        &self.rows
    }

    pub fn origin(&self) -> &CodeOrigin {
        &self.origin
    }

    pub fn column(&self, j: usize) -> Vec<Symbol> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// Σ coeffs[i] · row_i.
    pub fn encode(&self, coeffs: &[Symbol]) -> Vec<Symbol> {
        assert_eq!(coeffs.len(), self.dimension());
        let mut out = vec![0; self.len()];
        for (&c, row) in coeffs.iter().zip(&self.rows) {
            if c != 0 {
                for (o, &x) in out.iter_mut().zip(row) {
                    *o ^= self.field.mul(c, x);
                }
            }
        }
        out
    }

    /// Whether `word` lies in the row space.
    pub fn contains(&self, word: &[Symbol]) -> bool {
        if word.len() != self.len() {
            return false;
        }
        let mut rows = self.rows.clone();
        rows.push(word.to_vec());
        linalg::rank(&self.field, &rows) == self.dimension()
    }

    /// Text form: header `q n k`, then one row of hex symbols per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.q(), self.len(), self.dimension());
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| format!("{x:x}")).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    /// Parses [`Self::to_text`] output. Symbols are read in the standard
    /// GF(q) representation.
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
        let nums: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: hl,
                msg: format!("bad header: {e}"),
            })?;
        let [q, n, k] = nums[..] else {
            return Err(Error::Parse {
                line: hl,
                msg: "header must be `q n k`".into(),
            });
        };
        if !q.is_power_of_two() || q < 2 {
            return Err(Error::Parse {
                line: hl,
                msg: format!("q = {q} is not a power of two"),
            });
        }
        let field = SmallField::new(q.trailing_zeros())?;
        let mut rows = Vec::new();
        for (ln, line) in lines {
            let row: Vec<Symbol> = line
                .split_whitespace()
                .map(|t| Symbol::from_str_radix(t, 16))
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line: ln,
                    msg: format!("bad symbol: {e}"),
                })?;
            if row.len() as u64 != n {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {n} symbols, got {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() as u64 != k {
            return Err(Error::Parse {
                line: hl,
                msg: format!("expected {k} rows, got {}", rows.len()),
            });
        }
        LinearCode::new(field, rows, CodeOrigin::External)
    }
}

/// Multiplicative order of q modulo n.
pub fn multiplicative_order(q: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if gcd(q, n) != 1 {
        return None;
    }
    let mut x = q % n;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * q as u128 % n as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// The code C(r, N) with generator rows c(1), c(α), c(α²), c(α³), reduced
/// to an independent subset when the dimension m_0 = ord_n(q) is below 4.
pub fn build_irreducible_cyclic(tower: &TowerContext, classes: u64) -> Result<LinearCode> {
    let big = tower.big();
    let group = big.order();
    if classes <= 1 || group % classes != 0 {
        return Err(Error::Parameter(format!(
            "N = {classes} must exceed 1 and divide r - 1 = {group}"
        )));
    }
    let n = group / classes;
    let theta = big.pow(big.primitive(), classes);
    let mut rows = Vec::with_capacity(4);
    let mut beta = crate::gf::FieldElement::ONE;
    for _ in 0..4 {
        let mut row = Vec::with_capacity(n as usize);
        let mut x = beta;
        for _ in 0..n {
            row.push(tower.trace_symbol(x));
            x = big.mul(x, theta);
        }
        rows.push(row);
        beta = big.mul(beta, big.primitive());
    }
    let field = tower.sub().clone();
    let mut basis: Vec<Vec<Symbol>> = Vec::new();
    for row in rows {
        let mut trial = basis.clone();
        trial.push(row);
        if linalg::rank(&field, &trial) == trial.len() {
            basis = trial;
        }
    }
    let expected = multiplicative_order(tower.q(), n).unwrap_or(0);
    if basis.len() as u64 != expected {
        return Err(Error::Arithmetic(format!(
            "dimension {} differs from ord_{n}(q) = {expected}",
            basis.len()
        )));
    }
    LinearCode::new(
        field,
        basis,
        CodeOrigin::IrreducibleCyclic {
            m: tower.m(),
            classes,
        },
    )
}

/// N = q² - 1, the ovoid member of the family.
pub fn ovoid_code(tower: &TowerContext) -> Result<LinearCode> {
    let q = tower.q();
    build_irreducible_cyclic(tower, q * q - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_q4_q8() {
        let t = TowerContext::new(2).unwrap();
        let c = build_irreducible_cyclic(&t, 15).unwrap();
        assert_eq!((c.q(), c.len(), c.dimension()), (4, 17, 4));
        let t = TowerContext::new(3).unwrap();
        let c = ovoid_code(&t).unwrap();
        assert_eq!((c.q(), c.len(), c.dimension()), (8, 65, 4));
    }

    #[test]
    fn rejects_bad_class_count() {
        let t = TowerContext::new(2).unwrap();
        assert!(build_irreducible_cyclic(&t, 7).is_err());
        assert!(build_irreducible_cyclic(&t, 1).is_err());
    }

    #[test]
    fn small_dimension_members() {
        // n = 5 over GF(4): ord_5(4) = 2
        let t = TowerContext::new(2).unwrap();
        let c = build_irreducible_cyclic(&t, 51).unwrap();
        assert_eq!((c.len(), c.dimension()), (5, 2));
        // n = 3: ord_3(4) = 1
        let c = build_irreducible_cyclic(&t, 85).unwrap();
        assert_eq!((c.len(), c.dimension()), (3, 1));
    }

    #[test]
    fn text_roundtrip() {
        let t = TowerContext::new(2).unwrap();
        let c = ovoid_code(&t).unwrap();
        let text = c.to_text();
        assert!(text.starts_with("4 17 4\n"));
        let back = LinearCode::from_text(&text).unwrap();
        assert_eq!(back.rows(), c.rows());
        assert_eq!(back.origin(), &CodeOrigin::External);
        assert!(LinearCode::from_text("4 17 4\n1 2 3\n").is_err());
        assert!(LinearCode::from_text("3 2 1\n1 2\n").is_err());
    }

    #[test]
    fn rank_deficient_rejected() {
        let f = SmallField::new(2).unwrap();
        let rows = vec![vec![1, 2, 3], vec![2, 3, 1]]; // second = x · first
        assert!(LinearCode::new(f, rows, CodeOrigin::External).is_err());
    }

    #[test]
    fn cyclic_shift_closure() {
        let t = TowerContext::new(2).unwrap();
        let c = ovoid_code(&t).unwrap();
        for idx in (0..256u64).step_by(3) {
            let w = codeword_from_index(&c, idx);
            let mut shifted = w.clone();
            shifted.rotate_left(1);
            assert!(c.contains(&shifted));
        }
        let mut bad = vec![0; 17];
        bad[0] = 1;
        assert!(!c.contains(&bad));
    }

    #[test]
    fn order_helper() {
        assert_eq!(multiplicative_order(4, 17), Some(4));
        assert_eq!(multiplicative_order(8, 65), Some(4));
        assert_eq!(multiplicative_order(4, 6), None);
    }
}
