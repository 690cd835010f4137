//! Seeded property suites over the engine's structural identities, plus the
//! canonical-form and rescaling invariants not covered by the randomized
//! suites module.

use lndlab_core::ideal::{in_radical, IdealHandle};
use lndlab_core::lnd::Derivation;
use lndlab_core::parse::parse_polynomial;
use lndlab_core::poly::rat;
use lndlab_core::suites;
use lndlab_core::util::DetRng;
use lndlab_core::{Limits, MonomialOrder, RingContext};

#[test]
fn randomized_suites_pass() {
    let limits = Limits::default();
    let results = suites::run_all(0, 200, &limits).unwrap();
    for r in &results {
        assert!(r.cases >= 200, "{} ran only {} cases", r.name, r.cases);
        assert_eq!(r.failures, 0, "{} failed: {:?}", r.name, r.first_failure);
    }
}

#[test]
fn canonical_form_is_a_parse_fixed_point() {
    let ring = RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
    let mut rng = DetRng::new(99);
    for _ in 0..200 {
        let p = suites::random_poly(&ring, &mut rng, 4, 5);
        let text = p.to_string();
        let reparsed = parse_polynomial(&ring, &text).unwrap();
        assert_eq!(reparsed, p);
        assert_eq!(reparsed.to_string(), text);
    }
}

#[test]
fn kernel_span_behaves_factorially_closed() {
    // for the triangular example: products of kernel elements stay in the
    // kernel, and multiplying in a non-kernel factor leaves it
    let limits = Limits::default();
    let ring = RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    let delta = Derivation::new(
        &ring,
        vec![p("0"), p("-2*z"), p("x^2")],
        IdealHandle::zero(&ring),
        &limits,
    )
    .unwrap();
    let kernel_ring = RingContext::new(vec!["X", "T"], MonomialOrder::GrevLex).unwrap();
    let assignment = vec![
        ("X".to_string(), p("x")),
        ("T".to_string(), p("x^2*y + z^2")),
    ];
    let mut rng = DetRng::new(7);
    for _ in 0..200 {
        let u = suites::random_poly(&kernel_ring, &mut rng, 2, 3)
            .substitute(&assignment)
            .unwrap();
        let v = suites::random_poly(&kernel_ring, &mut rng, 2, 3)
            .substitute(&assignment)
            .unwrap();
        assert!(delta.apply(&u.mul(&v).unwrap()).unwrap().is_zero());
        if !u.is_zero() {
            // y is not in the kernel, and neither is u*y
            let uy = u.mul(&p("y")).unwrap();
            assert!(!delta.apply(&uy).unwrap().is_zero());
        }
    }
}

#[test]
fn fixed_locus_is_invariant_under_constant_rescaling() {
    let limits = Limits::default();
    let ring = RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    let delta = Derivation::new(
        &ring,
        vec![p("0"), p("-2*z"), p("x^2")],
        IdealHandle::zero(&ring),
        &limits,
    )
    .unwrap();
    let scaled = delta.scale(&rat(-7, 3));
    let a = lndlab_core::lnd::fixed_locus_ideal(&delta);
    let b = lndlab_core::lnd::fixed_locus_ideal(&scaled);
    for g in a.generators() {
        assert!(in_radical(&b, g, &limits).unwrap());
    }
    for g in b.generators() {
        assert!(in_radical(&a, g, &limits).unwrap());
    }
}

#[test]
fn preimage_solver_is_sound_on_solvable_instances() {
    let limits = Limits::default();
    let ring = RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    let delta = Derivation::new(
        &ring,
        vec![p("0"), p("-2*z"), p("x^2")],
        IdealHandle::zero(&ring),
        &limits,
    )
    .unwrap();
    let mut rng = DetRng::new(13);
    for _ in 0..60 {
        let s = suites::random_poly(&ring, &mut rng, 3, 3);
        let target = delta.apply(&s).unwrap();
        let cap = s.total_degree().unwrap_or(0) + 1;
        match lndlab_core::lnd::derivation_preimage(&delta, &target, cap, &limits).unwrap() {
            lndlab_core::lnd::PreimageVerdict::Solution(found) => {
                assert_eq!(delta.apply(&found).unwrap(), target);
            }
            other => panic!("expected a solution for target delta({s}) = {target}, got {other:?}"),
        }
    }
}
