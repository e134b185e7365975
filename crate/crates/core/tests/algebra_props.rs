use ajt_lab::ajt::verdict;
use ajt_lab::binomial::{derivation, fp_identity_test, t_decompose, BinomialProduct, FpMode};
use ajt_lab::group::{GroupContext, GroupVector};
use ajt_lab::matrix::{MatrixFp, MonomialMatrix};
use ajt_lab::ring::{GroupRingElement, Ring};
use ajt_lab::scan::canonical_form;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn context() -> impl Strategy<Value = GroupContext> {
    prop_oneof![
        Just((2u32, 1usize)),
        Just((2, 2)),
        Just((2, 3)),
        Just((3, 1)),
        Just((3, 2)),
        Just((5, 1)),
        Just((5, 2)),
    ]
    .prop_map(|(p, n)| GroupContext::new(p, n).unwrap())
}

fn element(ctx: GroupContext, ring: Ring) -> impl Strategy<Value = GroupRingElement> {
    prop::collection::vec(-4i64..=4, ctx.order())
        .prop_map(move |c| GroupRingElement::from_coeffs(ctx, ring, c).unwrap())
}

fn vector(ctx: GroupContext) -> impl Strategy<Value = GroupVector> {
    prop::collection::vec(0..ctx.p(), ctx.n()).prop_map(move |c| ctx.vector(c).unwrap())
}

fn ring() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Z), Just(Ring::Fp)]
}

fn triple() -> impl Strategy<Value = (GroupRingElement, GroupRingElement, GroupRingElement)> {
    (context(), ring())
        .prop_flat_map(|(ctx, r)| (element(ctx, r), element(ctx, r), element(ctx, r)))
}

fn nonsingular(p: u32, n: usize) -> impl Strategy<Value = MatrixFp> {
    prop::collection::vec(prop::collection::vec(0..p as i64, n), n)
        .prop_map(move |rows| MatrixFp::from_rows(p, &rows).unwrap())
        .prop_filter("singular", |m| m.is_nonsingular())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((x, y, z) in triple()) {
        let xy = x.mul_general(&y).unwrap();
        prop_assert_eq!(&xy, &y.mul_general(&x).unwrap());
        prop_assert_eq!(
            xy.mul_general(&z).unwrap(),
            x.mul_general(&y.mul_general(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(
            x.mul_general(&y.add(&z).unwrap()).unwrap(),
            xy.add(&x.mul_general(&z).unwrap()).unwrap()
        );
        let one = GroupRingElement::one(x.ctx(), x.ring());
        prop_assert_eq!(&x.mul_general(&one).unwrap(), &x);
        prop_assert!(x.add(&x.neg().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn binomial_fast_path_matches_convolution(
        (x, v) in (context(), ring()).prop_flat_map(|(c, r)| (element(c, r), vector(c)))
    ) {
        let b = GroupRingElement::one(x.ctx(), x.ring())
            .sub(&GroupRingElement::monomial(x.ctx(), x.ring(), &v).unwrap())
            .unwrap();
        prop_assert_eq!(x.mul_binomial(&v).unwrap(), x.mul_general(&b).unwrap());
    }

    #[test]
    fn reduction_is_a_ring_homomorphism(
        (x, y) in context().prop_flat_map(|c| (element(c, Ring::Z), element(c, Ring::Z)))
    ) {
        let rx = x.reduce_mod_p().unwrap();
        let ry = y.reduce_mod_p().unwrap();
        prop_assert_eq!(x.mul_general(&y).unwrap().reduce_mod_p().unwrap(), rx.mul_general(&ry).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().reduce_mod_p().unwrap(), rx.add(&ry).unwrap());
    }

    #[test]
    fn shift_and_unshift(
        (x, v) in (context(), ring()).prop_flat_map(|(c, r)| (element(c, r), vector(c)))
    ) {
        let back = x.shift(&v).unwrap().shift(&x.ctx().neg(&v)).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn division_round_trip(
        (q0, axis) in (context(), ring()).prop_flat_map(|(c, r)| (element(c, r), 0..c.n()))
    ) {
        let e = q0.ctx().basis(axis).unwrap();
        let big_q = q0.mul_binomial(&e).unwrap();
        prop_assert!(big_q.in_binomial_ideal(axis).unwrap());
        let q = big_q.divide_by_binomial(axis).unwrap();
        prop_assert_eq!(q.mul_binomial(&e).unwrap(), big_q);
    }

    #[test]
    fn t_decomposition_round_trip(
        (x, axis) in context().prop_flat_map(|c| (element(c, Ring::Fp), 0..c.n()))
    ) {
        let d = t_decompose(&x, axis).unwrap();
        prop_assert_eq!(d.parts.len(), x.ctx().p() as usize);
        for part in &d.parts {
            prop_assert!(part.supported_off_axis(axis));
        }
        prop_assert_eq!(d.reconstruct().unwrap(), x);
    }

    #[test]
    fn leibniz_rule(
        (x, y, axis) in context().prop_flat_map(|c| (element(c, Ring::Fp), element(c, Ring::Fp), 0..c.n()))
    ) {
        let lhs = derivation(&x.mul_general(&y).unwrap(), axis).unwrap();
        let rhs = derivation(&x, axis).unwrap().mul_general(&y).unwrap()
            .add(&x.mul_general(&derivation(&y, axis).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn predicates_ignore_factor_order(
        (ctx, factors, seed) in context().prop_flat_map(|c| {
            (Just(c), prop::collection::vec(vector(c), 0..7), any::<u64>())
        })
    ) {
        let bp = BinomialProduct::new(ctx, factors.clone()).unwrap();
        let mut shuffled = factors;
        let len = shuffled.len();
        if len > 1 {
            shuffled.rotate_left((seed % len as u64) as usize);
            shuffled.swap(0, len - 1);
        }
        let other = BinomialProduct::new(ctx, shuffled).unwrap();
        prop_assert_eq!(bp.z_identity_holds(), other.z_identity_holds());
        prop_assert_eq!(bp.good_x_witness(), other.good_x_witness());
        prop_assert_eq!(bp.dense_product(Ring::Z).unwrap(), other.dense_product(Ring::Z).unwrap());
        let z = bp.dense_product(Ring::Z).unwrap();
        prop_assert_eq!(bp.z_identity_holds(), z.is_zero());
        prop_assert!(z.l1_norm() <= 1u128 << bp.factors().len());
        if bp.z_identity_holds() {
            prop_assert!(z.reduce_mod_p().unwrap().is_zero());
        }
    }

    #[test]
    fn reduced_and_full_fp_tests_agree(
        m in prop_oneof![nonsingular(2, 2), nonsingular(3, 2), nonsingular(5, 2), nonsingular(2, 3), nonsingular(3, 3)]
    ) {
        prop_assert_eq!(
            fp_identity_test(&m, FpMode::Full).unwrap(),
            fp_identity_test(&m, FpMode::Reduced).unwrap()
        );
        let v = verdict(&m).unwrap();
        prop_assert!(v.consistent);
        prop_assert!(v.mod_p_compatible());
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant(
        m in prop_oneof![nonsingular(2, 2), nonsingular(3, 2), nonsingular(5, 2), nonsingular(3, 3)]
    ) {
        let c = canonical_form(&m);
        prop_assert_eq!(&canonical_form(&c), &c);
        let (a, b) = (verdict(&m).unwrap(), verdict(&c).unwrap());
        prop_assert_eq!(a.fp_identity, b.fp_identity);
        prop_assert_eq!(a.z_identity, b.z_identity);
        prop_assert_eq!(a.is_counterexample(), b.is_counterexample());
    }

    #[test]
    fn canonical_form_is_constant_on_orbits(
        m in prop_oneof![nonsingular(3, 2), nonsingular(5, 2), nonsingular(3, 3)],
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let left = MonomialMatrix::random(m.n(), m.p(), &mut rng);
        let right = MonomialMatrix::random(m.n(), m.p(), &mut rng);
        let t = m.monomial_transform(&left, &right);
        prop_assert_eq!(canonical_form(&t), canonical_form(&m));
    }
}
