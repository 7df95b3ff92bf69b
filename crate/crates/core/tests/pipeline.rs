use num_bigint::BigUint;
use ovoid_core::cyclic_code::{
    closed_dual_formula, dual_distance_direct, macwilliams_transform, ovoid_code,
    ovoid_multiplicities, weight_distribution_by_enumeration, weight_distribution_by_periods,
};
use ovoid_core::designs::{dual_weight4_supports, supports_of_weight, verify_design, BlockDesign};
use ovoid_core::equivalence::{
    enumerate_equivalences, fingerprint, search_equivalence, SearchOptions, Verdict,
};
use ovoid_core::gf::TowerContext;
use ovoid_core::projgeo::{certify_cap, elliptic_quadric, points_from_code, tits_ovoid};

#[test]
fn q8_code_to_ovoid() {
    let tower = TowerContext::new(3).unwrap();
    let code = ovoid_code(&tower).unwrap();
    let dist = weight_distribution_by_enumeration(&code).unwrap();
    let (u, v) = ovoid_multiplicities(8);
    assert_eq!(
        dist.nonzero().into_iter().collect::<Vec<_>>(),
        vec![(56, u), (64, v)]
    );
    assert_eq!(
        weight_distribution_by_periods(&tower, 63)
            .unwrap()
            .distribution,
        dist
    );
    assert!(dist.pless_moments_hold(65, 4, 8));

    let ps = points_from_code(&code, &dist).unwrap();
    let cert = certify_cap(&ps);
    assert!(cert.is_ovoid, "{cert:?}");
}

#[test]
fn q8_dual() {
    let tower = TowerContext::new(3).unwrap();
    let code = ovoid_code(&tower).unwrap();
    let dist = weight_distribution_by_enumeration(&code).unwrap();
    let dual = macwilliams_transform(&dist, 65, 4, 8).unwrap();
    for l in 1..4 {
        assert_eq!(dual.counts[l], BigUint::from(0u8));
    }
    for l in 4..=65 {
        assert_eq!(
            closed_dual_formula(8, l).unwrap(),
            dual.counts[l],
            "ℓ = {l}"
        );
    }
    // 520 secant planes, each holding C(9, 4) supports of 7 codewords
    assert_eq!(dual.counts[4], BigUint::from(458_640u32));
    let direct = dual_distance_direct(&code).unwrap();
    assert_eq!(direct.distance, 4);
    assert_eq!(direct.witness.len(), 4);
}

#[test]
fn q8_designs() {
    let tower = TowerContext::new(3).unwrap();
    let code = ovoid_code(&tower).unwrap();
    let fam = supports_of_weight(&code, 56).unwrap();
    assert_eq!(fam.supports.len(), 520);
    assert_eq!(fam.multiplicity, Some(7));
    let mut d = BlockDesign::new(65, fam.supports).unwrap();
    let r = d.verify(3, Some(330)).unwrap();
    assert!(r.verified && r.block_count_identity);
    let mut c = d.complement();
    assert!(c.verify(3, Some(1)).unwrap().verified);

    let dual = dual_weight4_supports(&code);
    assert_eq!(dual.supports.len(), 65_520);
    assert_eq!(dual.codewords, 458_640);
    assert!(verify_design(dual.supports, 65, 3, Some(6))
        .unwrap()
        .is_verified());
}

#[test]
fn wrong_lambda_is_not_verified() {
    let tower = TowerContext::new(2).unwrap();
    let code = ovoid_code(&tower).unwrap();
    let fam = supports_of_weight(&code, 12).unwrap();
    let d = verify_design(fam.supports, 17, 3, Some(21)).unwrap();
    let r = d.report().unwrap();
    assert_eq!(r.lambda, Some(22));
    assert!(!r.verified);
}

#[test]
fn elliptic_stabilizer_q4() {
    let e = elliptic_quadric(2).unwrap();
    let all = enumerate_equivalences(&e, &e, usize::MAX).unwrap();
    // PΓO⁻(4, 4) ≅ PΓL(2, 16)
    assert_eq!(all.len(), 16 * 255 * 4);
}

#[test]
fn tits_q32_is_ovoid() {
    let t = tits_ovoid(5).unwrap();
    assert!(certify_cap(&t).is_ovoid);
}

#[test]
fn fingerprint_differs_means_inequivalent() {
    let tower = TowerContext::new(3).unwrap();
    let code = points_from_code(
        &ovoid_code(&tower).unwrap(),
        &weight_distribution_by_enumeration(&ovoid_code(&tower).unwrap()).unwrap(),
    )
    .unwrap();
    let sets = [code, elliptic_quadric(3).unwrap(), tits_ovoid(3).unwrap()];
    for a in &sets {
        for b in &sets {
            let r = search_equivalence(a, b, SearchOptions::default()).unwrap();
            if fingerprint(a) != fingerprint(b) {
                assert_eq!(r.verdict, Verdict::Inequivalent);
            }
            if let Some(w) = &r.witness {
                assert!(w.verified);
            }
        }
    }
}
