//! End-to-end reproduction of the (2,5) derivation on k[x,y,z]:
//! delta(x) = -2FR, delta(y) = 6x^2R - G, delta(z) = 2x(5yR + F^2) with
//! F = xz - y^2, G = zF^2 + 2x^2yF + x^5, R = x^3 + yF. Kernel k[F, G],
//! plinth (FG), two modification chains (one per prime), ladders of slice
//! degree five and two, and the 5/2/10 fiber pattern.

use lndlab_core::fiber::{
    triviality_verdict, FiberAnalyzer, LadderForFibers, TrivialityVerdict,
};
use lndlab_core::ideal::{in_radical, IdealHandle};
use lndlab_core::lnd::{
    irreducibility_check, local_nilpotency_check, plinth_witness_check, Derivation,
    IrreducibilityVerdict, KernelWitness, LocalSlice, NilpotencyVerdict, PlinthClaim,
};
use lndlab_core::modification::{
    endpoint_exponent_zero, generation_identity_check, ladder_profile, stage_equals_declared,
    terminal_check, ChainBuilder, PresentedAlgebra,
};
use lndlab_core::parse::parse_polynomial;
use lndlab_core::poly::rat_int;
use lndlab_core::subalgebra::SubalgebraContext;
use lndlab_core::{Limits, MonomialOrder, Polynomial, RingContext};

struct Setup {
    ring: RingContext,
    delta: Derivation,
    f: Polynomial,
    g: Polynomial,
    r: Polynomial,
    s: Polynomial,
    limits: Limits,
}

fn setup() -> Setup {
    let limits = Limits::default();
    let ring = RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    let f = p("x*z - y^2");
    let g = p("z*(x*z - y^2)^2 + 2*x^2*y*(x*z - y^2) + x^5");
    let r = p("x^3 + y*(x*z - y^2)");
    let s = p("x^2*y + (x*z - y^2)*z");
    let dx = f.mul(&r).unwrap().scale(&rat_int(-2));
    let dy = p("6*x^2").mul(&r).unwrap().sub(&g).unwrap();
    let dz = p("2*x")
        .mul(&p("5*y").mul(&r).unwrap().add(&f.pow(2).unwrap()).unwrap())
        .unwrap();
    let delta =
        Derivation::new(&ring, vec![dx, dy, dz], IdealHandle::zero(&ring), &limits).unwrap();
    Setup { ring, delta, f, g, r, s, limits }
}

fn subring(st: &Setup) -> SubalgebraContext {
    let tags = vec![
        ("F".to_string(), st.f.clone()),
        ("G".to_string(), st.g.clone()),
        ("R".to_string(), st.r.clone()),
    ];
    SubalgebraContext::new(&st.ring, &IdealHandle::zero(&st.ring), &tags, &st.limits).unwrap()
}

#[test]
fn derivation_identities() {
    let st = setup();
    // kernel: delta(F) = delta(G) = 0; local slice: delta(R) = -FG
    assert!(st.delta.apply(&st.f).unwrap().is_zero());
    assert!(st.delta.apply(&st.g).unwrap().is_zero());
    let fg = st.f.mul(&st.g).unwrap();
    assert_eq!(st.delta.apply(&st.r).unwrap(), fg.neg());

    // the two structural identities: R^2 + F^3 = Gx and FS = G - x^2 R
    let p = |s: &str| parse_polynomial(&st.ring, s).unwrap();
    let u = st.r.pow(2).unwrap().add(&st.f.pow(3).unwrap()).unwrap();
    assert_eq!(u, st.g.mul(&p("x")).unwrap());
    let lhs = st.f.mul(&st.s).unwrap();
    let rhs = st.g.sub(&p("x^2").mul(&st.r).unwrap()).unwrap();
    assert_eq!(lhs, rhs);

    // locally nilpotent and irreducible
    assert!(matches!(
        local_nilpotency_check(&st.delta, 24).unwrap(),
        NilpotencyVerdict::LocallyNilpotent(_)
    ));
    assert_eq!(
        irreducibility_check(&st.delta, &st.limits).unwrap(),
        IrreducibilityVerdict::Irreducible
    );

    let witness = KernelWitness {
        generators: vec![("F".into(), st.f.clone()), ("G".into(), st.g.clone())],
    };
    witness.validate(&st.delta).unwrap();
    let slice = LocalSlice { z: st.r.clone(), a: fg.neg() };
    slice.validate(&st.delta).unwrap();
}

#[test]
fn plinth_and_fixed_locus() {
    let st = setup();
    // plinth generated by FG with witness -R
    let claim = PlinthClaim {
        generator: st.f.mul(&st.g).unwrap(),
        witness: st.r.neg(),
        factorization: vec![(st.f.clone(), 1), (st.g.clone(), 1)],
    };
    let report = plinth_witness_check(&st.delta, &claim, 6, &st.limits).unwrap();
    assert!(report.witness_ok);
    assert!(report.generator_in_kernel);
    assert!(report.minimality.iter().all(|(_, ok)| *ok), "{:?}", report.minimality);

    // fixed locus: radical equality with (x, y)
    let fl = lndlab_core::lnd::fixed_locus_ideal(&st.delta);
    let p = |s: &str| parse_polynomial(&st.ring, s).unwrap();
    let xy = IdealHandle::new(&st.ring, vec![p("x"), p("y")]);
    for g in fl.generators() {
        assert!(in_radical(&xy, g, &st.limits).unwrap());
    }
    for g in xy.generators() {
        assert!(in_radical(&fl, g, &st.limits).unwrap());
    }
}

#[test]
fn exponent_discovery() {
    let st = setup();
    let ctx = subring(&st);
    let p = |s: &str| parse_polynomial(&st.ring, s).unwrap();
    let mu = ctx
        .minimal_exponents(
            &[st.f.clone(), st.g.clone()],
            &[p("x"), p("y"), p("z")],
            6,
            &st.limits,
        )
        .unwrap();
    assert_eq!(mu, Some(vec![2, 5]));
}

#[test]
fn f_first_chain() {
    let st = setup();
    let ctx = subring(&st);
    let builder = ChainBuilder { subring: &ctx, delta: &st.delta, limits: &st.limits };
    let chain = builder.build(&st.f, 2).unwrap();

    // I_1 = (F, g) with g = G^3 - (R^2 + F^3)^2 R
    let tr = ctx.tag_ring().clone();
    let tp = |s: &str| parse_polynomial(&tr, s).unwrap();
    let g_tag = tp("G^3 - (R^2 + F^3)^2 * R");
    assert!(chain.stages[0]
        .contraction
        .equals(&IdealHandle::new(&tr, vec![tp("F"), g_tag.clone()]))
        .unwrap());

    // B^{(1)} = k[F, G, R, G^2 S]: both stages present exactly that
    // subalgebra of B, so the chain stabilizes after the first stage
    let g2s = st.g.pow(2).unwrap().mul(&st.s).unwrap();
    assert!(stage_equals_declared(&builder, &chain, &chain.stages[0], &[g2s.clone()]).unwrap());
    assert!(stage_equals_declared(&builder, &chain, &chain.stages[1], &[g2s.clone()]).unwrap());
    assert!(chain.stages[1].includes_previous);
    assert!(chain.stages[1].equals_previous);
    assert_eq!(chain.stabilized_at, Some(1));
    // and it does not present a smaller algebra: A[R] alone is not enough
    assert!(!chain.stages[0].equals_previous);

    // ladder over F: gbar = G^3 - R^5 (mod F), slice degree five
    let ladder = ladder_profile(&chain, "F", "R", 1, &st.limits).unwrap();
    assert_eq!(ladder.gbar_degree, 5);
    assert_eq!(ladder.exponents, vec![1, 2]);
    assert_eq!(ladder.breakpoints, vec![(1, 1), (2, 2)]);
    assert_eq!(ladder.q1, 0);
    assert!(ladder.violations.is_empty(), "{:?}", ladder.violations);

    // Lemma-2.2 identity: g lies only in I_1 here, so ell = 1
    let gen_id = generation_identity_check(&chain, &ctx, &st.limits).unwrap();
    assert!(gen_id.holds);

    assert!(endpoint_exponent_zero(&chain).unwrap());
}

#[test]
fn g_first_chain() {
    let st = setup();
    let ctx = subring(&st);
    let builder = ChainBuilder { subring: &ctx, delta: &st.delta, limits: &st.limits };
    let chain = builder.build(&st.g, 5).unwrap();

    // I_1 = (G, u) with u = R^2 + F^3; B^{(1)} = k[F, G, R, x]
    let tr = ctx.tag_ring().clone();
    let tp = |s: &str| parse_polynomial(&tr, s).unwrap();
    assert!(chain.stages[0]
        .contraction
        .equals(&IdealHandle::new(&tr, vec![tp("G"), tp("R^2 + F^3")]))
        .unwrap());
    let p = |s: &str| parse_polynomial(&st.ring, s).unwrap();
    assert_eq!(
        chain.stages[0].realizations.iter().map(|(_, r)| r.clone()).collect::<Vec<_>>(),
        vec![p("x")]
    );
    // every stage presents B^{(1)} = k[F, G, R, x]
    for stage in &chain.stages {
        assert!(
            stage_equals_declared(&builder, &chain, stage, &[p("x")]).unwrap(),
            "stage {} should present k[F,G,R,x]",
            stage.exponent
        );
    }
    for stage in &chain.stages[1..] {
        assert!(stage.includes_previous);
        assert!(stage.equals_previous, "stage {} should equal B_1", stage.exponent);
    }
    assert_eq!(chain.stabilized_at, Some(1));

    // ladder over G: ubar = R^2 + F^3, slice degree two, full staircase
    let ladder = ladder_profile(&chain, "G", "R", 1, &st.limits).unwrap();
    assert_eq!(ladder.gbar_degree, 2);
    assert_eq!(ladder.exponents, vec![1, 2, 3, 4, 5]);
    assert_eq!(
        ladder.breakpoints,
        vec![(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]
    );
    assert_eq!(ladder.q1, 0);
    assert!(ladder.violations.is_empty(), "{:?}", ladder.violations);

    let gen_id = generation_identity_check(&chain, &ctx, &st.limits).unwrap();
    assert!(gen_id.holds);
}

#[test]
fn terminal_membership() {
    let st = setup();
    let ctx = subring(&st);
    let p = |s: &str| parse_polynomial(&st.ring, s).unwrap();
    let report = terminal_check(
        &ctx,
        &[(st.f.clone(), 2), (st.g.clone(), 5)],
        &[
            ("x".into(), p("x")),
            ("y".into(), p("y")),
            ("z".into(), p("z")),
        ],
        &st.limits,
    )
    .unwrap();
    assert!(report.terminal, "{:?}", report.witnesses);
    for (_, w) in &report.witnesses {
        assert!(w.is_some());
    }
}

#[test]
fn fibers_five_two_ten() {
    let st = setup();
    let ctx = subring(&st);
    let builder = ChainBuilder { subring: &ctx, delta: &st.delta, limits: &st.limits };
    let f_chain = builder.build(&st.f, 2).unwrap();
    let f_ladder = ladder_profile(&f_chain, "F", "R", 1, &st.limits).unwrap();
    let g_chain = builder.build(&st.g, 5).unwrap();
    let g_ladder = ladder_profile(&g_chain, "G", "R", 1, &st.limits).unwrap();

    let algebra = PresentedAlgebra::free(&st.ring);
    let kernel = vec![("F".to_string(), st.f.clone()), ("G".to_string(), st.g.clone())];
    let ladders = vec![
        LadderForFibers { prime_tag: "F".into(), gbar: f_ladder.gbar.clone() },
        LadderForFibers { prime_tag: "G".into(), gbar: g_ladder.gbar.clone() },
    ];
    let analyzer = FiberAnalyzer {
        algebra: &algebra,
        kernel: &kernel,
        slice_tag: "R",
        ladders: &ladders,
        limits: &st.limits,
    };

    // over (F, G) = (0, 1): five lines
    let f01 = analyzer
        .fiber_at_point(&[("F".into(), rat_int(0)), ("G".into(), rat_int(1))], 0)
        .unwrap();
    assert_eq!(f01.components, Some(5), "method {:?}", f01.method);
    assert_eq!(f01.multiplicities, vec![1, 1, 1, 1, 1]);

    // over (1, 0): two lines
    let f10 = analyzer
        .fiber_at_point(&[("F".into(), rat_int(1)), ("G".into(), rat_int(0))], 0)
        .unwrap();
    assert_eq!(f10.components, Some(2), "method {:?}", f10.method);
    assert_eq!(f10.multiplicities, vec![1, 1]);

    // over the origin: one line of multiplicity ten, sliced degree ten
    let f00 = analyzer
        .fiber_at_point(&[("F".into(), rat_int(0)), ("G".into(), rat_int(0))], 0)
        .unwrap();
    assert_eq!(f00.degree, Some(10), "method {:?}", f00.method);
    assert_eq!(f00.components, Some(1));
    assert_eq!(f00.multiplicities, vec![10]);

    // generic fibers are single lines (slice residue generates)
    let generic = vec![("F".to_string(), rat_int(1)), ("G".to_string(), rat_int(2))];
    assert!(analyzer.certify_single_line(&generic, &st.r).unwrap());

    let verdict = triviality_verdict(None, false, &[f01, f10, f00]);
    assert!(matches!(verdict, TrivialityVerdict::NotTrivial(_)));
}
