//! The hypersurface-family instance with m = 0, f = x, p = 2, h = z:
//! delta(x) = 0, delta(y) = z, delta(z) = x^2 on k[x,y,z]. Kernel
//! k[x, x^2 y - z^2/2], plinth x^2, and the general fiber over V(x) is two
//! lines (the slice-degree of the reduced minimal element).

use lndlab_core::fiber::{FiberAnalyzer, LadderForFibers};
use lndlab_core::ideal::IdealHandle;
use lndlab_core::lnd::{plinth_witness_check, Derivation, KernelWitness, PlinthClaim};
use lndlab_core::modification::{ladder_profile, stage_presents_b, ChainBuilder, PresentedAlgebra};
use lndlab_core::parse::parse_polynomial;
use lndlab_core::poly::rat_int;
use lndlab_core::subalgebra::SubalgebraContext;
use lndlab_core::{Limits, MonomialOrder, Polynomial, RingContext};

fn setup() -> (RingContext, Derivation, Limits) {
    let limits = Limits::default();
    let ring = RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    let delta = Derivation::new(
        &ring,
        vec![p("0"), p("z"), p("x^2")],
        IdealHandle::zero(&ring),
        &limits,
    )
    .unwrap();
    (ring, delta, limits)
}

#[test]
fn kernel_plinth_and_two_line_fibers() {
    let (ring, delta, limits) = setup();
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    // kernel: x and K = x^2 y - z^2/2
    let witness = KernelWitness {
        generators: vec![
            ("X".into(), p("x")),
            ("K".into(), p("x^2*y - 1/2*z^2")),
        ],
    };
    witness.validate(&delta).unwrap();

    let claim = PlinthClaim {
        generator: p("x^2"),
        witness: p("z"),
        factorization: vec![(p("x"), 2)],
    };
    let report = plinth_witness_check(&delta, &claim, 6, &limits).unwrap();
    assert!(report.all_passed());
    assert_eq!(report.minimality, vec![("x".to_string(), true)]);

    // chain along x up to the discovered exponent
    let tags = vec![
        ("X".to_string(), p("x")),
        ("K".to_string(), p("x^2*y - 1/2*z^2")),
        ("Z".to_string(), p("z")),
    ];
    let ctx = SubalgebraContext::new(&ring, &IdealHandle::zero(&ring), &tags, &limits).unwrap();
    let mu = ctx
        .minimal_exponents(&[p("x")], &[p("x"), p("y"), p("z")], 5, &limits)
        .unwrap();
    assert_eq!(mu, Some(vec![2]));
    let builder = ChainBuilder { subring: &ctx, delta: &delta, limits: &limits };
    let chain = builder.build(&p("x"), 2).unwrap();

    // the chain ends at B: the stage generator is y up to a rational unit
    assert_eq!(chain.stages[1].realizations.len(), 1);
    let y_real = chain.stages[1].realizations[0].1.clone();
    assert_eq!(y_real.primitive_part(), p("y"), "stage generator {y_real}");
    let c = y_real.leading_term(MonomialOrder::GrevLex).unwrap().1.clone();
    let amb2 = chain.stages[1].algebra.ambient.clone();
    let w = Polynomial::var(&amb2, "W1").unwrap();
    let inv = Polynomial::constant(&amb2, rat_int(1) / c);
    let candidate = vec![
        ("x".to_string(), parse_polynomial(&amb2, "X").unwrap()),
        ("y".to_string(), w.mul(&inv).unwrap()),
        ("z".to_string(), parse_polynomial(&amb2, "Z").unwrap()),
    ];
    assert!(stage_presents_b(&builder, &chain.stages[1], &candidate).unwrap());

    // ladder: gbar of slice-degree two = deg_z h + 1
    let ladder = ladder_profile(&chain, "X", "Z", 2, &limits).unwrap();
    assert_eq!(ladder.gbar_degree, 2);
    assert!(ladder.violations.is_empty(), "{:?}", ladder.violations);

    // general fibers over V(x): two components each
    let algebra = PresentedAlgebra::free(&ring);
    let kernel = vec![
        ("X".to_string(), p("x")),
        ("K".to_string(), p("x^2*y - 1/2*z^2")),
    ];
    let ladders = vec![LadderForFibers { prime_tag: "X".into(), gbar: ladder.gbar.clone() }];
    let analyzer = FiberAnalyzer {
        algebra: &algebra,
        kernel: &kernel,
        slice_tag: "Z",
        ladders: &ladders,
        limits: &limits,
    };
    for tau in [1i64, -2, 5] {
        let report = analyzer
            .fiber_at_point(&[("X".into(), rat_int(0)), ("K".into(), rat_int(tau))], 0)
            .unwrap();
        assert_eq!(report.components, Some(2), "fiber over (0, {tau}): {report:?}");
        assert_eq!(report.multiplicities, vec![1, 1]);
    }
    // and generic fibers off V(x) are single lines
    let generic = vec![("X".to_string(), rat_int(3)), ("K".to_string(), rat_int(1))];
    assert!(analyzer.certify_single_line(&generic, &p("z")).unwrap());
}
