//! Randomized property tests over the exact-arithmetic core.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use gelfond_lab::combinatorics::{orbit, pullback_intersection, LatticeSet};
use gelfond_lab::factorgcd::factor_q;
use gelfond_lab::poly::{check_gauss_bounds, rat, ratio, RatPoly};
use gelfond_lab::resultants::{build_structured_matrix, check_det_identity, sylvester_resultant};
use gelfond_lab::transforms::AffineMap;
use gelfond_lab::verdict::Outcome;

fn arb_poly(max_deg: usize, h: i64) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(-h..=h, 1..=max_deg + 1).prop_filter_map("nonzero", |c| {
        let p = RatPoly::from_ints(&c);
        (!p.is_zero()).then_some(p)
    })
}

fn arb_rational(max: i64) -> impl Strategy<Value = BigRational> {
    (-max..=max, 1..=4i64).prop_map(|(p, q)| ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn gauss_bound_on_factor_chains(
        factors in prop::collection::vec(arb_poly(4, 8), 1..=4)
    ) {
        let v = check_gauss_bounds(&factors).unwrap();
        prop_assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn factorization_reconstructs_input(p in arb_poly(6, 9)) {
        let f = factor_q(&p).unwrap();
        prop_assert_eq!(f.reconstruct(), p.clone());
        // factors are primitive with positive leading coefficient
        for (q, m) in &f.factors {
            prop_assert!(*m >= 1);
            prop_assert_eq!(q.content().unwrap(), rat(1));
        }
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        a in arb_poly(4, 5), b in arb_poly(4, 5), c in arb_poly(3, 5)
    ) {
        prop_assume!(a.deg() >= 1 && b.deg() >= 1 && c.deg() >= 1);
        let res = sylvester_resultant(&a.mul(&c), &b.mul(&c)).unwrap();
        prop_assert_eq!(res, BigRational::from_integer(BigInt::from(0)));
        let res_ab = sylvester_resultant(&a, &b).unwrap();
        let gcd = gelfond_lab::factorgcd::gcd_q(&a, &b).unwrap();
        prop_assert_eq!(res_ab.is_zero(), gcd.deg() >= 1);
    }

    #[test]
    fn resultant_is_multiplicative(
        a in arb_poly(3, 4), b in arb_poly(3, 4), c in arb_poly(3, 4)
    ) {
        prop_assume!(a.deg() >= 1 && b.deg() >= 1 && c.deg() >= 1);
        let lhs = sylvester_resultant(&a.mul(&b), &c).unwrap();
        let rhs = sylvester_resultant(&a, &c).unwrap() * sylvester_resultant(&b, &c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn det_identity_exact(
        q in arb_poly(2, 3),
        polys in prop::collection::vec(arb_poly(3, 4), 4),
        x in arb_rational(3),
        y in arb_rational(3),
    ) {
        prop_assume!(x != y);
        let m = build_structured_matrix(&q, &[x, y], 2, 4, &polys).unwrap();
        let (v, _) = check_det_identity(&m);
        prop_assert_eq!(v.outcome, Outcome::Holds);
        prop_assert_eq!(v.precision_bits, 0);
    }

    #[test]
    fn affine_maps_compose_and_invert(
        a1 in 1..=5i64, b1 in -5..=5i64, a2 in 1..=5i64, b2 in -5..=5i64,
        p in arb_poly(4, 6)
    ) {
        let m1 = AffineMap::from_ints(a1, b1).unwrap();
        let m2 = AffineMap::from_ints(a2, b2).unwrap();
        // applying m1 then m2 equals applying the composition
        let seq = m2.apply(&m1.apply(&p));
        let comp = m1.compose(&m2).apply(&p);
        prop_assert_eq!(seq, comp);
        prop_assert_eq!(m1.invert().apply(&m1.apply(&p)), p);
    }

    #[test]
    fn orbit_pullback_adjunction(
        pts in prop::collection::vec(prop::collection::vec(0..3i64, 4), 1..5),
        extra in prop::collection::vec(prop::collection::vec(0..4i64, 4), 0..4),
    ) {
        let e = LatticeSet::new(4, pts).unwrap();
        let mut f_pts: Vec<Vec<i64>> = orbit(&e).iter().cloned().collect();
        f_pts.extend(extra);
        let f = LatticeSet::new(4, f_pts).unwrap();
        // orbit(E) <= F iff E <= pullback(F)
        prop_assert!(orbit(&e).is_subset(&f));
        prop_assert!(e.is_subset(&pullback_intersection(&f, false)));
        // and the pullback is the largest such set
        let pb = pullback_intersection(&f, false);
        prop_assert!(orbit(&pb).is_subset(&f));
    }
}
