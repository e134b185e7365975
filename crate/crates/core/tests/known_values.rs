use ajt_lab::ajt::{find_good_vector, is_counterexample, verdict};
use ajt_lab::binomial::{derivation, fp_identity_test, t_decompose, BinomialProduct, FpMode};
use ajt_lab::error::Error;
use ajt_lab::group::{GroupContext, GroupVector};
use ajt_lab::lemma::{
    build_vprime, check_all, check_factorization, check_ut_identities, expansion_check, extract_b1,
    kernel_equivalence_check, split_rows, verify_bases, xprime_search, LabOptions,
    DEFAULT_LAB_BUDGET,
};
use ajt_lab::matrix::MatrixFp;
use ajt_lab::ring::{GroupRingElement, Ring};
use ajt_lab::scan::{
    canonical_form, enumerate_invertible, flagged_orbits, scan, ScanConfig, Shard,
};

fn m(p: u32, rows: &[&[i64]]) -> MatrixFp {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    MatrixFp::from_rows(p, &rows).unwrap()
}

fn v(ctx: GroupContext, c: &[u32]) -> GroupVector {
    ctx.vector(c.to_vec()).unwrap()
}

fn el(ctx: GroupContext, ring: Ring, c: &[i64]) -> GroupRingElement {
    GroupRingElement::from_coeffs(ctx, ring, c.to_vec()).unwrap()
}

#[test]
fn contexts_and_monomials() {
    assert_eq!(GroupContext::new(2, 1).unwrap().order(), 2);
    assert_eq!(GroupContext::new(3, 2).unwrap().order(), 9);
    assert_eq!(GroupContext::new(4, 2), Err(Error::NotPrime(4)));

    let c21 = GroupContext::new(2, 1).unwrap();
    assert_eq!(
        GroupRingElement::monomial(c21, Ring::Z, &v(c21, &[1]))
            .unwrap()
            .coeffs(),
        &[0, 1]
    );
    let c32 = GroupContext::new(3, 2).unwrap();
    assert_eq!(
        GroupRingElement::monomial(c32, Ring::Z, &v(c32, &[0, 0])).unwrap(),
        GroupRingElement::one(c32, Ring::Z)
    );
    let c22 = GroupContext::new(2, 2).unwrap();
    assert_eq!(
        GroupRingElement::monomial(c22, Ring::Z, &v(c22, &[1, 0]))
            .unwrap()
            .coeffs()[1],
        1
    );
}

#[test]
fn addition_and_products() {
    let c = GroupContext::new(2, 1).unwrap();
    let one = GroupRingElement::one(c, Ring::Z);
    assert!(one.add(&one.neg().unwrap()).unwrap().is_zero());
    let g = GroupRingElement::monomial(c, Ring::Z, &v(c, &[1])).unwrap();
    assert_eq!(g.add(&g).unwrap().coeffs(), &[0, 2]);
    let gf = GroupRingElement::monomial(c, Ring::Fp, &v(c, &[1])).unwrap();
    assert!(gf.add(&gf).unwrap().is_zero());

    let t = one.sub(&g).unwrap();
    let sq = t.mul_general(&t).unwrap();
    assert_eq!(sq.coeffs(), &[2, -2]);
    assert!(!sq.is_zero());
    assert!(sq.reduce_mod_p().unwrap().is_zero());
    assert_eq!(t.mul_general(&one).unwrap(), t);

    let c3 = GroupContext::new(3, 1).unwrap();
    let t3 = el(c3, Ring::Z, &[1, -1, 0]);
    assert!(t3
        .mul_general(&el(c3, Ring::Z, &[1, 1, 1]))
        .unwrap()
        .is_zero());
    assert_eq!(
        el(c3, Ring::Z, &[0, 4, 0]).reduce_mod_p().unwrap().coeffs(),
        &[0, 1, 0]
    );
}

#[test]
fn binomial_multiplication_and_division() {
    let c = GroupContext::new(3, 2).unwrap();
    let one = GroupRingElement::one(c, Ring::Z);
    let e1 = c.basis(0).unwrap();
    let x = one.mul_binomial(&e1).unwrap();
    assert_eq!(x.coeffs(), &[1, -1, 0, 0, 0, 0, 0, 0, 0]);
    assert!(one.mul_binomial(&c.zero_vector()).unwrap().is_zero());

    assert_eq!(x.divide_by_binomial(0).unwrap(), one);
    let two_e1 = c.scale(&e1, 2);
    let q = one
        .mul_binomial(&two_e1)
        .unwrap()
        .divide_by_binomial(0)
        .unwrap();
    assert_eq!(q.coeffs(), &[1, 1, 0, 0, 0, 0, 0, 0, 0]);
    assert_eq!(
        one.divide_by_binomial(0),
        Err(Error::NotInIdeal { axis: 0 })
    );
}

#[test]
fn binomial_products() {
    let c22 = GroupContext::new(2, 2).unwrap();
    let (e1, e2) = (c22.basis(0).unwrap(), c22.basis(1).unwrap());
    assert_eq!(
        BinomialProduct::new(c22, vec![])
            .unwrap()
            .dense_product(Ring::Z)
            .unwrap(),
        GroupRingElement::one(c22, Ring::Z)
    );
    let doubled = BinomialProduct::new(c22, vec![e1.clone(), e1.clone()]).unwrap();
    assert_eq!(
        doubled.dense_product(Ring::Z).unwrap().coeffs(),
        &[2, -2, 0, 0]
    );

    let c32 = GroupContext::new(3, 2).unwrap();
    let ce = BinomialProduct::new(
        c32,
        vec![
            c32.basis(0).unwrap(),
            c32.basis(1).unwrap(),
            v(c32, &[1, 1]),
            v(c32, &[1, 2]),
        ],
    )
    .unwrap();
    assert!(ce.dense_product(Ring::Fp).unwrap().is_zero());
    assert!(ce.z_identity_holds());
    assert_eq!(ce.good_x_witness(), None);

    let bp = BinomialProduct::new(
        c22,
        vec![e1.clone(), e2.clone(), v(c22, &[1, 1]), v(c22, &[1, 0])],
    )
    .unwrap();
    assert!(bp.z_identity_holds());
    assert!(bp.dense_product(Ring::Z).unwrap().is_zero());
    let bp = BinomialProduct::new(c22, vec![e1.clone(), e1, e2.clone(), e2]).unwrap();
    assert!(!bp.z_identity_holds());
    assert_eq!(bp.good_x_witness(), Some(v(c22, &[1, 1])));
    assert!(
        BinomialProduct::new(c22, vec![c22.zero_vector(), v(c22, &[1, 1])])
            .unwrap()
            .z_identity_holds()
    );

    let c51 = GroupContext::new(5, 1).unwrap();
    let bp = BinomialProduct::new(c51, vec![c51.basis(0).unwrap()]).unwrap();
    assert_eq!(bp.good_x_witness(), Some(v(c51, &[1])));
}

#[test]
fn fp_identity_in_both_modes() {
    for (mat, expected) in [
        (m(2, &[&[1, 0], &[0, 1]]), true),
        (m(3, &[&[1, 1], &[1, 2]]), true),
        (m(5, &[&[1, 0], &[0, 1]]), false),
    ] {
        assert_eq!(
            fp_identity_test(&mat, FpMode::Full).unwrap(),
            expected,
            "{mat}"
        );
        assert_eq!(
            fp_identity_test(&mat, FpMode::Reduced).unwrap(),
            expected,
            "{mat}"
        );
    }
    assert_eq!(
        fp_identity_test(&m(3, &[&[1, 2], &[2, 1]]), FpMode::Reduced),
        Err(Error::Singular { p: 3 })
    );
}

#[test]
fn decomposition_and_derivation() {
    let c = GroupContext::new(5, 2).unwrap();
    let g = GroupRingElement::monomial(c, Ring::Fp, &c.basis(1).unwrap()).unwrap();
    let d = t_decompose(&g, 1).unwrap();
    assert!(d.part(0).coeffs()[0] == 1 && d.part(1).coeffs()[0] == 4);
    assert!(d.parts[2..].iter().all(GroupRingElement::is_zero));
    let one = GroupRingElement::one(c, Ring::Fp);
    let d = t_decompose(&one, 1).unwrap();
    assert_eq!(d.part(0), &one);
    assert!(d.parts[1..].iter().all(GroupRingElement::is_zero));

    assert_eq!(derivation(&g, 1).unwrap(), g);
    assert!(derivation(&one, 1).unwrap().is_zero());
    let t = one.sub(&g).unwrap();
    assert_eq!(derivation(&t, 1).unwrap(), g.neg().unwrap());
}

#[test]
fn single_matrix_verdicts() {
    let i5 = m(5, &[&[1, 0], &[0, 1]]);
    let c52 = i5.ctx();
    assert_eq!(find_good_vector(&i5).unwrap(), Some(v(c52, &[1, 1])));
    assert!(!is_counterexample(&i5).unwrap());
    let r = verdict(&i5).unwrap();
    assert!(!r.fp_identity && !r.z_identity && r.consistent);

    assert_eq!(find_good_vector(&m(2, &[&[1, 1], &[1, 0]])).unwrap(), None);

    let ce = m(3, &[&[1, 1], &[1, 2]]);
    assert_eq!(find_good_vector(&ce).unwrap(), None);
    assert!(is_counterexample(&ce).unwrap());
    let r = verdict(&ce).unwrap();
    assert!(r.fp_identity && r.z_identity && r.ajt_witness.is_none() && r.consistent);

    let i2 = m(2, &[&[1, 0], &[0, 1]]);
    assert!(!is_counterexample(&i2).unwrap());
    let r = verdict(&i2).unwrap();
    assert!(r.fp_identity && !r.z_identity && r.consistent && r.violates_conjecture());
    assert_eq!(r.ajt_witness, Some(v(i2.ctx(), &[1, 1])));
}

#[test]
fn row_split_and_expansion() {
    let ce = m(3, &[&[1, 1], &[1, 2]]);
    let s = split_rows(&ce, 0).unwrap();
    assert_eq!(
        s.a_prime
            .iter()
            .map(|a| a.coords().to_vec())
            .collect::<Vec<_>>(),
        vec![vec![0, 1], vec![0, 2]]
    );
    assert_eq!(s.pivots, vec![1, 1]);
    assert_eq!(s.reconstruct(ce.ctx()).unwrap(), ce.rows());
    assert!(expansion_check(&ce, 0).unwrap());

    let p2 = m(2, &[&[1, 1], &[1, 0]]);
    let s = split_rows(&p2, 1).unwrap();
    assert_eq!(
        s.a_prime
            .iter()
            .map(|a| a.coords().to_vec())
            .collect::<Vec<_>>(),
        vec![vec![1, 0], vec![1, 0]]
    );
    assert_eq!(s.pivots, vec![1, 0]);
    assert!(expansion_check(&p2, 1).unwrap());
}

#[test]
fn b1_extraction() {
    for (mat, axis) in [
        (m(3, &[&[1, 1], &[1, 2]]), 0),
        (m(2, &[&[1, 0], &[0, 1]]), 0),
    ] {
        let b1 = extract_b1(&mat, axis).unwrap().unwrap();
        assert!(b1.routes_agree() && b1.is_zero());
    }
    assert!(extract_b1(&m(5, &[&[1, 0], &[0, 1]]), 0).unwrap().is_none());
}

#[test]
fn vprime_construction_on_small_counterexamples() {
    for mat in [m(3, &[&[1, 1], &[1, 2]]), m(2, &[&[1, 1], &[1, 0]])] {
        let c = build_vprime(&mat, 0, DEFAULT_LAB_BUDGET).unwrap();
        assert_eq!(c.big.n(), 6);
        assert_eq!((c.b1().count(), c.b2().count()), (6, 6));
        assert!(verify_bases(&c).both_bases());
        let ut = check_ut_identities(&c).unwrap();
        assert_eq!(ut.len(), 4);
        assert!(ut.iter().all(|&ok| ok));
        assert!(check_factorization(&c).unwrap().sides_equal);
        let search = xprime_search(&c, None).unwrap();
        assert_eq!(
            search.witness.is_some(),
            !c.full_product().z_identity_holds()
        );
    }

    let c = build_vprime(&m(5, &[&[1, 0], &[0, 1]]), 0, DEFAULT_LAB_BUDGET).unwrap();
    assert!(xprime_search(&c, Some(&[1, 1])).unwrap().witness.is_some());
}

#[test]
fn kernel_characterization() {
    let c = GroupContext::new(3, 2).unwrap();
    let coset_sum = el(c, Ring::Z, &[1, 1, 1, 0, 0, 0, 0, 0, 0]);
    let k = kernel_equivalence_check(&coset_sum, 0).unwrap();
    assert!(k.annihilated_by_t && k.annihilated_by_t_squared && k.constant_on_cosets && k.agree());
    let k = kernel_equivalence_check(&GroupRingElement::one(c, Ring::Z), 0).unwrap();
    assert!(
        !k.annihilated_by_t && !k.annihilated_by_t_squared && !k.constant_on_cosets && k.agree()
    );
}

#[test]
fn lemma_gating() {
    let r = check_all(&m(5, &[&[1, 0], &[0, 1]]), 0, &LabOptions::default()).unwrap();
    assert!(!r.fp_identity);
    assert!(r.b1_zero.is_skipped() && r.ut_identities.is_skipped() && r.factorization.is_skipped());
    assert!(r.hard_failures().is_empty());

    let r = check_all(&m(7, &[&[3]]), 0, &LabOptions::default()).unwrap();
    assert!(r.bases.is_skipped() && r.factorization.is_skipped());

    let err = check_all(
        &m(3, &[&[1, 1, 0], &[1, 2, 0], &[0, 0, 1]]),
        0,
        &LabOptions::default(),
    )
    .unwrap_err();
    assert!(err.to_string().contains("3^15"), "{err}");
}

#[test]
fn enumeration_counts() {
    for (p, expected) in [(2, 6), (3, 48), (5, 480)] {
        assert_eq!(
            enumerate_invertible(p, 2, Shard::whole()).unwrap().count(),
            expected
        );
    }
}

#[test]
fn canonical_forms() {
    let i = m(5, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    assert_eq!(canonical_form(&i), i);
    let x = m(5, &[&[0, 3, 1], &[2, 0, 4], &[1, 1, 1]]);
    let c = canonical_form(&x);
    assert_eq!(canonical_form(&c), c);
    let (a, b) = (verdict(&x).unwrap(), verdict(&c).unwrap());
    assert_eq!(
        (a.fp_identity, a.z_identity, a.is_counterexample()),
        (b.fp_identity, b.z_identity, b.is_counterexample())
    );
}

#[test]
fn small_scans() {
    let r = scan(&ScanConfig::new(2, 2)).unwrap();
    assert_eq!(r.totals.enumerated, 6);
    assert!(r
        .violations
        .iter()
        .any(|f| f.matrix == m(2, &[&[1, 0], &[0, 1]])));

    let r = scan(&ScanConfig::new(3, 2)).unwrap();
    assert_eq!(r.totals.enumerated, 48);
    assert!(r.totals.counterexamples >= 1 && r.inconsistencies.is_empty());
    let target = canonical_form(&m(3, &[&[1, 1], &[1, 2]]));
    assert!(flagged_orbits(&r.counterexamples).contains(&target));

    let r = scan(&ScanConfig::new(5, 2)).unwrap();
    assert_eq!(r.totals.enumerated, 480);
    assert!(
        r.violations.is_empty() && r.counterexamples.is_empty() && r.inconsistencies.is_empty()
    );
}

#[test]
fn canonical_scans_cover_larger_groups() {
    for (p, n) in [(5, 3), (7, 2)] {
        let mut cfg = ScanConfig::new(p, n);
        cfg.canonicalize = true;
        let r = scan(&cfg).unwrap();
        assert!(!r.canonicalization_disabled);
        assert_eq!(
            r.totals.covered,
            ajt_lab::scan::gl_order(p, n),
            "p={p} n={n}"
        );
        assert!(r.inconsistencies.is_empty());
    }
    let shards: Vec<_> = (0..3)
        .map(|k| {
            let mut cfg = ScanConfig::new(7, 3);
            cfg.canonicalize = true;
            cfg.shard = Shard::new(k, 3).unwrap();
            scan(&cfg).unwrap()
        })
        .collect();
    let merged = ajt_lab::scan::merge(&shards).unwrap();
    assert_eq!(merged.totals.covered, 33_784_128);
    assert!(merged.inconsistencies.is_empty());
}
