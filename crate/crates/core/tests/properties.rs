use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;

use ovoid_core::cyclic_code::{
    codeword_from_index, macwilliams_transform, weight_distribution_by_enumeration, CodeOrigin,
    LinearCode, WeightDistribution,
};
use ovoid_core::designs::BlockDesign;
use ovoid_core::equivalence::{search_equivalence, SearchOptions, Verdict};
use ovoid_core::gf::{FieldContext, FieldElement, SmallField, Symbol};
use ovoid_core::linalg;
use ovoid_core::projgeo::{certify_cap, elliptic_quadric, SemilinearMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn element(k: u32) -> impl Strategy<Value = u64> {
    let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    any::<u64>().prop_map(move |x| x & mask)
}

fn cached(k: u32) -> &'static FieldContext {
    static FIELDS: [OnceLock<FieldContext>; 41] = [const { OnceLock::new() }; 41];
    FIELDS[k as usize].get_or_init(|| FieldContext::new(k).unwrap())
}

fn field_axioms(f: &FieldContext, a: u64, b: u64, c: u64) {
    let (a, b, c) = (
        FieldElement::from_bits(a),
        FieldElement::from_bits(b),
        FieldElement::from_bits(c),
    );
    assert_eq!(f.mul(a, b), f.mul(b, a));
    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
    assert_eq!(f.square(a + b), f.square(a) + f.square(b));
    if !a.is_zero() {
        assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
    }
    assert_eq!(f.trace(a + b), f.trace(a) ^ f.trace(b));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gf16_axioms(a in element(16), b in element(16), c in element(16)) {
        field_axioms(cached(16), a, b, c);
    }

    #[test]
    fn gf24_axioms(a in element(24), b in element(24), c in element(24)) {
        field_axioms(cached(24), a, b, c);
    }

    #[test]
    fn gf40_axioms(a in element(40), b in element(40), c in element(40)) {
        field_axioms(cached(40), a, b, c);
    }

    #[test]
    fn frobenius_order_divides_degree(k in 2u32..=20, a in element(20)) {
        let f = cached(k);
        let a = FieldElement::from_bits(a & ((1 << k) - 1));
        prop_assert_eq!(f.frobenius(a, k), a);
        prop_assert_eq!(f.pow(a, f.size()), a);
    }

    /// Random generator matrices: MacWilliams of the enumerated distribution
    /// matches enumerating the dual, and Krawtchouk applied twice is identity.
    #[test]
    fn macwilliams_round_trip(m in 1u32..=2, k in 1usize..=3, extra in 1usize..=4, seed in any::<u64>()) {
        let f = SmallField::new(m).unwrap();
        let n = k + extra;
        let q = f.q() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = loop {
            let rows: Vec<Vec<Symbol>> = (0..k)
                .map(|_| (0..n).map(|_| rand::Rng::gen_range(&mut rng, 0..q as Symbol)).collect())
                .collect();
            if linalg::rank(&f, &rows) == k {
                break rows;
            }
        };
        let code = LinearCode::new(f.clone(), rows.clone(), CodeOrigin::External).unwrap();
        let dist = weight_distribution_by_enumeration(&code).unwrap();
        if (0..n).all(|j| code.column(j).iter().any(|&x| x != 0)) {
            prop_assert!(dist.pless_moments_hold(n, k, q));
        }
        let dual = macwilliams_transform(&dist, n, k, q).unwrap();

        let h = linalg::null_space(&f, &rows, n);
        let dual_code = LinearCode::new(f, h, CodeOrigin::External).unwrap();
        let direct = weight_distribution_by_enumeration(&dual_code).unwrap();
        for w in 0..=n {
            prop_assert_eq!(dual.counts[w].clone(), direct.get(w).into());
        }
        let back = macwilliams_transform(&direct, n, n - k, q).unwrap();
        for w in 0..=n {
            prop_assert_eq!(back.counts[w].clone(), dist.get(w).into());
        }
    }

    #[test]
    fn codewords_are_in_the_code(seed in any::<u64>()) {
        let f = SmallField::new(2).unwrap();
        let rows = vec![vec![1, 0, 1, 2, 3], vec![0, 1, 3, 1, 1]];
        let code = LinearCode::new(f, rows, CodeOrigin::External).unwrap();
        let idx = seed % 16;
        prop_assert!(code.contains(&codeword_from_index(&code, idx)));
    }

    #[test]
    fn complement_is_involution(v in 4usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + (seed as usize) % (v - 1);
        let mut blocks: Vec<Vec<usize>> = (0..6)
            .map(|_| rand::seq::index::sample(&mut rng, v, k).into_vec())
            .collect();
        blocks.iter_mut().for_each(|b| b.sort());
        blocks.sort();
        blocks.dedup();
        let d = BlockDesign::new(v, blocks).unwrap();
        let c = d.complement();
        prop_assert_eq!(c.k(), v - k);
        let cc = c.complement();
        prop_assert_eq!(cc.blocks(), d.blocks());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Caps stay caps and disguised ovoids are recognised.
    #[test]
    fn planted_disguise_q4(seed in any::<u64>()) {
        let e = elliptic_quadric(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let secret = SemilinearMap::random(e.field(), &mut rng, true);
        let image = secret.apply_set(&e);
        prop_assert!(certify_cap(&image).is_ovoid);
        let r = search_equivalence(&e, &image, SearchOptions::default()).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Equivalent);
        let w = r.witness.unwrap();
        prop_assert!(w.verified);
        prop_assert!(w.map.apply_set(&e).same_set(&image));
    }
}

#[test]
fn distribution_totals() {
    let d = WeightDistribution::from_counts(BTreeMap::from([(0, 1), (2, 3)]));
    assert_eq!(d.total(), 4);
    assert_eq!(d.min_nonzero_weight(), Some(2));
}
