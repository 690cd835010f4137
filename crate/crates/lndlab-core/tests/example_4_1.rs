//! End-to-end reproduction of the triangular derivation on k[x,y,z] with
//! delta(x) = 0, delta(y) = -2z, delta(z) = x^2: kernel k[x, t] with
//! t = x^2 y + z^2, plinth x^2, two modification stages, a two-line fiber
//! over the special locus, and a not-trivial bundle verdict.

use lndlab_core::fiber::{
    line_count_lower_bound, reduce_mod_prime, triviality_verdict, FiberAnalyzer, FiberMethod,
    LadderForFibers, TrivialityVerdict,
};
use lndlab_core::ideal::IdealHandle;
use lndlab_core::lnd::{
    dixmier_projection, local_nilpotency_check, plinth_witness_check, Derivation, KernelWitness,
    LocalSlice, NilpotencyVerdict, PlinthClaim,
};
use lndlab_core::modification::{
    endpoint_exponent_zero, generation_identity_check, ladder_profile, stage_presents_b,
    terminal_check, ChainBuilder, PresentedAlgebra,
};
use lndlab_core::parse::parse_polynomial;
use lndlab_core::poly::rat_int;
use lndlab_core::subalgebra::SubalgebraContext;
use lndlab_core::{Limits, MonomialOrder, Polynomial, RingContext};

fn b_ring() -> RingContext {
    RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
}

fn p(r: &RingContext, s: &str) -> Polynomial {
    parse_polynomial(r, s).unwrap()
}

fn derivation(r: &RingContext, limits: &Limits) -> Derivation {
    Derivation::new(
        r,
        vec![p(r, "0"), p(r, "-2*z"), p(r, "x^2")],
        IdealHandle::zero(r),
        limits,
    )
    .unwrap()
}

fn subring(r: &RingContext, limits: &Limits) -> SubalgebraContext {
    let tags = vec![
        ("X".to_string(), p(r, "x")),
        ("T".to_string(), p(r, "x^2*y + z^2")),
        ("Z".to_string(), p(r, "z")),
    ];
    SubalgebraContext::new(r, &IdealHandle::zero(r), &tags, limits).unwrap()
}

#[test]
fn kernel_slice_plinth_and_dixmier() {
    let limits = Limits::default();
    let r = b_ring();
    let d = derivation(&r, &limits);

    let nil = local_nilpotency_check(&d, 8).unwrap();
    assert_eq!(
        nil,
        NilpotencyVerdict::LocallyNilpotent(vec![
            ("x".into(), 1),
            ("y".into(), 3),
            ("z".into(), 2)
        ])
    );

    let witness = KernelWitness {
        generators: vec![
            ("X".into(), p(&r, "x")),
            ("T".into(), p(&r, "x^2*y + z^2")),
        ],
    };
    witness.validate(&d).unwrap();

    let slice = LocalSlice { z: p(&r, "z"), a: p(&r, "x^2") };
    slice.validate(&d).unwrap();

    // pi(y) = t / x^2 recovers the kernel generator independently
    let proj = dixmier_projection(&d, &slice, &p(&r, "y"), 16).unwrap();
    assert_eq!(proj.numerator, p(&r, "x^2*y + z^2"));
    assert_eq!(proj.denominator().unwrap(), p(&r, "x^2"));

    let claim = PlinthClaim {
        generator: p(&r, "x^2"),
        witness: p(&r, "z"),
        factorization: vec![(p(&r, "x"), 2)],
    };
    let report = plinth_witness_check(&d, &claim, 6, &limits).unwrap();
    assert!(report.all_passed());
}

#[test]
fn chain_and_ladder() {
    let limits = Limits::default();
    let r = b_ring();
    let d = derivation(&r, &limits);
    let ctx = subring(&r, &limits);
    let builder = ChainBuilder { subring: &ctx, delta: &d, limits: &limits };

    // the minimal exponent pushing the generators into A[z] is 2
    let mu = ctx
        .minimal_exponents(&[p(&r, "x")], &[p(&r, "x"), p(&r, "y"), p(&r, "z")], 5, &limits)
        .unwrap();
    assert_eq!(mu, Some(vec![2]));

    let chain = builder.build(&p(&r, "x"), 2).unwrap();
    let tr = ctx.tag_ring().clone();
    let tp = |s: &str| parse_polynomial(&tr, s).unwrap();

    // I_1 = (X, Z^2 - T), I_2 = (X^2, Z^2 - T)
    assert!(chain.stages[0]
        .contraction
        .equals(&IdealHandle::new(&tr, vec![tp("X"), tp("Z^2 - T")]))
        .unwrap());
    assert!(chain.stages[1]
        .contraction
        .equals(&IdealHandle::new(&tr, vec![tp("X^2"), tp("Z^2 - T")]))
        .unwrap());

    // stage generators: B_1 = A[z][xy], B_2 = A[z][y] (up to sign)
    assert_eq!(chain.stages[0].realizations.len(), 1);
    assert_eq!(chain.stages[0].realizations[0].1, p(&r, "-x*y"));
    assert_eq!(chain.stages[1].realizations[0].1, p(&r, "-y"));

    // delta(W) = 2 X Z on stage 1, 2 Z on stage 2
    let d1 = &chain.stages[0].derivation;
    assert_eq!(d1.image_of("W1").unwrap(), &parse_polynomial(d1.ring(), "2*X*Z").unwrap());
    let d2 = &chain.stages[1].derivation;
    assert_eq!(d2.image_of("W1").unwrap(), &parse_polynomial(d2.ring(), "2*Z").unwrap());

    // inclusions hold; the chain does not stabilize before the end
    assert!(chain.stages[1].includes_previous);
    assert!(!chain.stages[0].equals_previous);
    assert!(!chain.stages[1].equals_previous);
    assert_eq!(chain.stabilized_at, None);

    // terminal: x^2 y, x^2 x, x^2 z all land in A[z]
    let term = terminal_check(
        &ctx,
        &[(p(&r, "x"), 2)],
        &[
            ("x".into(), p(&r, "x")),
            ("y".into(), p(&r, "y")),
            ("z".into(), p(&r, "z")),
        ],
        &limits,
    )
    .unwrap();
    assert!(term.terminal);

    // presentation equality of stage 2 with B under x -> X, y -> -W1, z -> Z
    let amb2 = chain.stages[1].algebra.ambient.clone();
    let candidate = vec![
        ("x".to_string(), parse_polynomial(&amb2, "X").unwrap()),
        ("y".to_string(), parse_polynomial(&amb2, "-W1").unwrap()),
        ("z".to_string(), parse_polynomial(&amb2, "Z").unwrap()),
    ];
    assert!(stage_presents_b(&builder, &chain.stages[1], &candidate).unwrap());

    // Lemma-2.2-style generation identity: g = Z^2 - T lies in I_2, so
    // I_j = (X^j, g) for j <= 2
    let gen_id = generation_identity_check(&chain, &ctx, &limits).unwrap();
    assert_eq!(gen_id.ell, 2);
    assert!(gen_id.holds);

    // ladder: gbar = Z^2 - T of slice-degree 2, exponents [1, 1], l_1 = 2,
    // q_1 = p - l_1 = 0
    let ladder = ladder_profile(&chain, "X", "Z", 2, &limits).unwrap();
    assert_eq!(ladder.gbar, tp("Z^2 - T"));
    assert_eq!(ladder.gbar_degree, 2);
    assert_eq!(ladder.exponents, vec![1, 1]);
    assert_eq!(ladder.breakpoints, vec![(1, 2)]);
    assert_eq!(ladder.q1, 0);
    assert!(ladder.violations.is_empty(), "{:?}", ladder.violations);
    assert_eq!(line_count_lower_bound(&ladder).unwrap(), 2);

    // q_nu = 0: the final stage has a generator with delta-image outside (alpha)
    assert!(endpoint_exponent_zero(&chain).unwrap());
}

#[test]
fn reductions_mod_the_prime() {
    let limits = Limits::default();
    let r = b_ring();
    let ctx = subring(&r, &limits);
    let tr = ctx.tag_ring().clone();
    // z^2 - t (as an element of A[z]) reduces to Z^2 - T; alpha to zero
    let red = reduce_mod_prime(&ctx, &p(&r, "z^2 - (x^2*y + z^2)"), &p(&r, "x"), &limits).unwrap();
    assert_eq!(red, parse_polynomial(&tr, "Z^2 - T").unwrap());
    let red2 = reduce_mod_prime(&ctx, &p(&r, "z^2"), &p(&r, "x"), &limits).unwrap();
    assert_eq!(red2, parse_polynomial(&tr, "Z^2").unwrap());
    assert!(reduce_mod_prime(&ctx, &p(&r, "x"), &p(&r, "x"), &limits).unwrap().is_zero());
}

#[test]
fn fibers_and_verdict() {
    let limits = Limits::default();
    let r = b_ring();
    let d = derivation(&r, &limits);
    let ctx = subring(&r, &limits);
    let builder = ChainBuilder { subring: &ctx, delta: &d, limits: &limits };
    let chain = builder.build(&p(&r, "x"), 2).unwrap();
    let ladder = ladder_profile(&chain, "X", "Z", 2, &limits).unwrap();

    let algebra = PresentedAlgebra::free(&r);
    let kernel = vec![("X".to_string(), p(&r, "x")), ("T".to_string(), p(&r, "x^2*y + z^2"))];
    let ladders = vec![LadderForFibers { prime_tag: "X".into(), gbar: ladder.gbar.clone() }];
    let analyzer = FiberAnalyzer {
        algebra: &algebra,
        kernel: &kernel,
        slice_tag: "Z",
        ladders: &ladders,
        limits: &limits,
    };

    // over (0, 1): two reduced lines
    let f01 = analyzer
        .fiber_at_point(&[("X".into(), rat_int(0)), ("T".into(), rat_int(1))], 0)
        .unwrap();
    assert_eq!(f01.method, FiberMethod::TriangularFactorization);
    assert_eq!(f01.degree, Some(2));
    assert_eq!(f01.components, Some(2));
    assert_eq!(f01.multiplicities, vec![1, 1]);

    // over the origin: one line with multiplicity two
    let f00 = analyzer
        .fiber_at_point(&[("X".into(), rat_int(0)), ("T".into(), rat_int(0))], 0)
        .unwrap();
    assert_eq!(f00.components, Some(1));
    assert_eq!(f00.multiplicities, vec![2]);
    assert_eq!(f00.degree, Some(2));

    // generic fibers over x != 0 are single lines, certified by the slice
    // residue generating the fiber ring (oracle: y = (tau - z^2)/xi^2)
    for (xi, tau) in [(1i64, 0i64), (2, 5), (-3, 7)] {
        let point = vec![("X".to_string(), rat_int(xi)), ("T".to_string(), rat_int(tau))];
        assert!(analyzer.certify_single_line(&point, &p(&r, "z")).unwrap());
        let report = analyzer.fiber_at_point(&point, 0).unwrap();
        assert_eq!(report.components, Some(1), "fiber over ({xi}, {tau})");
        assert_eq!(report.multiplicities, vec![1]);
    }

    // the two-component fiber witnesses non-triviality
    let claim = PlinthClaim {
        generator: p(&r, "x^2"),
        witness: p(&r, "z"),
        factorization: vec![(p(&r, "x"), 2)],
    };
    let verdict = triviality_verdict(Some(&claim), false, &[f01.clone(), f00]);
    assert!(matches!(verdict, TrivialityVerdict::NotTrivial(_)));

    // a derivation with a slice is a trivial bundle with empty fixed locus
    let slice_d = Derivation::new(
        &r,
        vec![p(&r, "0"), p(&r, "0"), p(&r, "1")],
        IdealHandle::zero(&r),
        &limits,
    )
    .unwrap();
    assert!(lndlab_core::lnd::fixed_locus_ideal(&slice_d).is_unit_ideal().unwrap());
    assert_eq!(triviality_verdict(None, true, &[]), TrivialityVerdict::TrivialBundle);
}

#[test]
fn fixed_locus_geometry() {
    let limits = Limits::default();
    let r = b_ring();
    let d = derivation(&r, &limits);
    let fl = lndlab_core::lnd::fixed_locus_ideal(&d);
    // radical-level equality with (x, z): the fiber over the origin
    let target = IdealHandle::new(&r, vec![p(&r, "x"), p(&r, "z")]);
    for g in fl.generators() {
        assert!(lndlab_core::ideal::in_radical(&target, g, &limits).unwrap());
    }
    for g in target.generators() {
        assert!(lndlab_core::ideal::in_radical(&fl, g, &limits).unwrap());
    }
}
