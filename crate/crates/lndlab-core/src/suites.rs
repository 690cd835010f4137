//! Seeded self-check suites: randomized verification of the engine's
//! structural identities (basis s-polynomials, membership against a
//! brute-force oracle, saturation idempotence, the Leibniz rule, Dixmier
//! images, gcd/lcm). Fixed seed and case count give a fixed run.

use num_traits::{One, Zero};

use crate::error::Result;
use crate::ideal::{multivariate_gcd, multivariate_lcm, saturation, IdealHandle};
use crate::limits::Limits;
use crate::lnd::{dixmier_projection, Derivation, LocalSlice};
use crate::parse::parse_polynomial;
use crate::poly::{rat_int, Polynomial, Rational};
use crate::ring::{Monomial, MonomialOrder, RingContext};
use crate::util::DetRng;

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u32,
    pub failures: u32,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

fn small_ring() -> RingContext {
    RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
}

/// Random polynomial: up to `max_terms` terms of total degree <= `max_deg`,
/// coefficients in [-9, 9] \ {0}.
pub fn random_poly(ring: &RingContext, rng: &mut DetRng, max_deg: u16, max_terms: usize) -> Polynomial {
    let nterms = 1 + (rng.next_u64() as usize) % max_terms;
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let mut exps = vec![0u16; ring.nvars()];
        let mut budget = max_deg;
        for e in exps.iter_mut() {
            if budget == 0 {
                break;
            }
            *e = (rng.next_u64() % (budget as u64 + 1)) as u16;
            budget -= *e;
        }
        let mut c = rng.int_in(-9, 9);
        if c == 0 {
            c = 1;
        }
        terms.push((Monomial::from_exponents(&exps), rat_int(c)));
    }
    Polynomial::from_terms(ring, terms)
}

fn random_nonzero(ring: &RingContext, rng: &mut DetRng, max_deg: u16, max_terms: usize) -> Polynomial {
    loop {
        let p = random_poly(ring, rng, max_deg, max_terms);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Every s-polynomial of basis pairs reduces to zero and every input
/// generator reduces to zero against the computed basis.
pub fn spoly_reduction_suite(seed: u64, cases: u32, limits: &Limits) -> Result<SuiteResult> {
    let mut result =
        SuiteResult { name: "groebner-spoly-reduction", cases: 0, failures: 0, first_failure: None };
    let ring = small_ring();
    let mut rng = DetRng::new(seed ^ 0x5347_0001);
    let orders = [MonomialOrder::GrevLex, MonomialOrder::Lex, MonomialOrder::Block { split: 1 }];
    while result.cases < cases {
        let ngens = 2 + (rng.next_u64() % 2) as usize;
        let gens: Vec<Polynomial> =
            (0..ngens).map(|_| random_nonzero(&ring, &mut rng, 3, 3)).collect();
        let ord = orders[(rng.next_u64() % 3) as usize];
        let ideal = IdealHandle::new(&ring, gens.clone());
        let gb = match ideal.groebner_basis_with_limits(ord, limits) {
            Ok(gb) => gb,
            Err(_) => continue, // guardrail trips are not failures of the property
        };
        let mut ok = true;
        for g in &gens {
            if !ideal.normal_form_with_limits(g, ord, limits)?.is_zero() {
                ok = false;
            }
        }
        'pairs: for i in 0..gb.len() {
            for j in i + 1..gb.len() {
                let (mi, ci) = gb[i].leading_term(ord).unwrap();
                let (mj, cj) = gb[j].leading_term(ord).unwrap();
                let lcm = mi.lcm(mj);
                let si = gb[i]
                    .mul_term(&lcm.checked_div(mi).unwrap(), &(Rational::one() / ci.clone()));
                let sj = gb[j]
                    .mul_term(&lcm.checked_div(mj).unwrap(), &(Rational::one() / cj.clone()));
                let s = si.sub(&sj)?;
                if !ideal.normal_form_with_limits(&s, ord, limits)?.is_zero() {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        result.record(ok, || format!("gens {gens:?} order {ord:?}"));
    }
    Ok(result)
}

/// Brute-force membership oracle: p lies in the span of {m * g_i} with
/// deg(m * g_i) <= bound, decided by exact linear algebra.
fn oracle_member(gens: &[Polynomial], p: &Polynomial, bound: u16) -> bool {
    let ring = p.ring();
    // columns: all shifted generators within the bound
    let mut columns: Vec<Polynomial> = Vec::new();
    for g in gens {
        let gdeg = g.total_degree().unwrap_or(0) as u16;
        if gdeg > bound {
            continue;
        }
        for m in monomials_up_to(ring.nvars(), (bound - gdeg) as u32) {
            columns.push(g.mul_term(&m, &Rational::one()));
        }
    }
    let mut rows: Vec<Monomial> = Vec::new();
    for c in columns.iter().chain(std::iter::once(p)) {
        for (m, _) in c.terms() {
            if !rows.contains(m) {
                rows.push(m.clone());
            }
        }
    }
    rows.sort();
    let ncols = columns.len();
    let mut mat = vec![vec![Rational::zero(); ncols + 1]; rows.len()];
    for (j, c) in columns.iter().enumerate() {
        for (m, v) in c.terms() {
            let i = rows.iter().position(|r| r == m).unwrap();
            mat[i][j] = v.clone();
        }
    }
    for (m, v) in p.terms() {
        let i = rows.iter().position(|r| r == m).unwrap();
        mat[i][ncols] = v.clone();
    }
    gauss_consistent(mat, ncols)
}

fn monomials_up_to(nvars: usize, cap: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u16; nvars];
    loop {
        if current.iter().map(|&e| e as u32).sum::<u32>() <= cap {
            out.push(Monomial::from_exponents(&current));
        }
        let mut k = nvars;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            current[k] += 1;
            if current.iter().map(|&e| e as u32).sum::<u32>() <= cap {
                break;
            }
            current[k] = 0;
        }
    }
}

fn gauss_consistent(mut mat: Vec<Vec<Rational>>, ncols: usize) -> bool {
    let nrows = mat.len();
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(sel) = (row..nrows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, sel);
        let inv = Rational::one() / mat[row][col].clone();
        for c in col..=ncols {
            mat[row][c] = &mat[row][c] * &inv;
        }
        for r in 0..nrows {
            if r != row && !mat[r][col].is_zero() {
                let k = mat[r][col].clone();
                for c in col..=ncols {
                    let d = &k * &mat[row][c];
                    mat[r][c] -= d;
                }
            }
        }
        row += 1;
        if row == nrows {
            break;
        }
    }
    for r in row..nrows {
        if !mat[r][ncols].is_zero() {
            return false;
        }
    }
    true
}

/// normal_form(p) = 0 agrees with the linear-algebra oracle: constructed
/// members reduce to zero (and the oracle confirms them); nonzero normal
/// forms are rejected by the oracle at the matching degree bound.
pub fn membership_oracle_suite(seed: u64, cases: u32, limits: &Limits) -> Result<SuiteResult> {
    let mut result =
        SuiteResult { name: "membership-vs-linear-oracle", cases: 0, failures: 0, first_failure: None };
    let ring = small_ring();
    let mut rng = DetRng::new(seed ^ 0x5347_0002);
    while result.cases < cases {
        let gens: Vec<Polynomial> =
            (0..2).map(|_| random_nonzero(&ring, &mut rng, 2, 3)).collect();
        let ideal = IdealHandle::new(&ring, gens.clone());
        let ok = if result.cases % 2 == 0 {
            // a member by construction
            let q1 = random_poly(&ring, &mut rng, 2, 2);
            let q2 = random_poly(&ring, &mut rng, 2, 2);
            let p = gens[0].mul(&q1)?.add(&gens[1].mul(&q2)?)?;
            let nf_zero = ideal
                .normal_form_with_limits(&p, MonomialOrder::GrevLex, limits)?
                .is_zero();
            let bound = p.total_degree().unwrap_or(0) as u16 + 4;
            nf_zero && (p.is_zero() || oracle_member(&gens, &p, bound))
        } else {
            // a random element; when its normal form is nonzero the oracle
            // must reject the normal form as well
            let p = random_poly(&ring, &mut rng, 4, 4);
            let nf = ideal.normal_form_with_limits(&p, MonomialOrder::GrevLex, limits)?;
            if nf.is_zero() {
                let bound = p.total_degree().unwrap_or(0) as u16 + 4;
                p.is_zero() || oracle_member(&gens, &p, bound)
            } else {
                let bound = nf.total_degree().unwrap_or(0) as u16 + 4;
                !oracle_member(&gens, &nf, bound)
            }
        };
        result.record(ok, || format!("gens {gens:?}"));
    }
    Ok(result)
}

/// sat(sat(I, f), f) = sat(I, f) and I ⊆ sat(I, f).
pub fn saturation_idempotence_suite(seed: u64, cases: u32, limits: &Limits) -> Result<SuiteResult> {
    let mut result =
        SuiteResult { name: "saturation-idempotence", cases: 0, failures: 0, first_failure: None };
    let ring = small_ring();
    let mut rng = DetRng::new(seed ^ 0x5347_0003);
    while result.cases < cases {
        let gens: Vec<Polynomial> =
            (0..2).map(|_| random_nonzero(&ring, &mut rng, 2, 2)).collect();
        let f = random_nonzero(&ring, &mut rng, 2, 2);
        let ideal = IdealHandle::new(&ring, gens.clone());
        let once = match saturation(&ideal, &f, limits) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let twice = saturation(&once, &f, limits)?;
        let ok = twice.equals(&once)? && once.contains_ideal(&ideal)?;
        result.record(ok, || format!("gens {gens:?} f {f}"));
    }
    Ok(result)
}

/// delta(pq) = p delta(q) + q delta(p) for random derivations and inputs.
pub fn leibniz_suite(seed: u64, cases: u32, limits: &Limits) -> Result<SuiteResult> {
    let mut result = SuiteResult { name: "leibniz-rule", cases: 0, failures: 0, first_failure: None };
    let ring = small_ring();
    let mut rng = DetRng::new(seed ^ 0x5347_0004);
    while result.cases < cases {
        let images: Vec<Polynomial> =
            (0..3).map(|_| random_poly(&ring, &mut rng, 2, 2)).collect();
        let delta = Derivation::new(&ring, images, IdealHandle::zero(&ring), limits)?;
        let p = random_poly(&ring, &mut rng, 3, 3);
        let q = random_poly(&ring, &mut rng, 3, 3);
        let lhs = delta.apply(&p.mul(&q)?)?;
        let rhs = p.mul(&delta.apply(&q)?)?.add(&q.mul(&delta.apply(&p)?)?)?;
        result.record(lhs == rhs, || format!("p {p} q {q}"));
    }
    Ok(result)
}

/// The Dixmier projection lands in the kernel: for the triangular example
/// derivation, delta applied to the numerator of pi(b) vanishes.
pub fn dixmier_kernel_suite(seed: u64, cases: u32, limits: &Limits) -> Result<SuiteResult> {
    let mut result =
        SuiteResult { name: "dixmier-image-in-kernel", cases: 0, failures: 0, first_failure: None };
    let ring = small_ring();
    let p = |s: &str| parse_polynomial(&ring, s).unwrap();
    let delta = Derivation::new(
        &ring,
        vec![p("0"), p("-2*z"), p("x^2")],
        IdealHandle::zero(&ring),
        limits,
    )?;
    let slice = LocalSlice { z: p("z"), a: p("x^2") };
    let mut rng = DetRng::new(seed ^ 0x5347_0005);
    while result.cases < cases {
        let b = random_poly(&ring, &mut rng, 3, 4);
        let proj = dixmier_projection(&delta, &slice, &b, 64)?;
        let image = delta.apply(&proj.numerator)?;
        result.record(image.is_zero(), || format!("b = {b}, pi(b) = {proj}"));
    }
    Ok(result)
}

/// gcd(p, q) * lcm(p, q) = p * q up to a rational unit.
pub fn gcd_lcm_suite(seed: u64, cases: u32, limits: &Limits) -> Result<SuiteResult> {
    let mut result = SuiteResult { name: "gcd-lcm-product", cases: 0, failures: 0, first_failure: None };
    let ring = small_ring();
    let mut rng = DetRng::new(seed ^ 0x5347_0006);
    while result.cases < cases {
        // build p, q sharing a factor half the time
        let a = random_nonzero(&ring, &mut rng, 2, 2);
        let b = random_nonzero(&ring, &mut rng, 2, 2);
        let c = random_nonzero(&ring, &mut rng, 1, 2);
        let (p, q) = if result.cases % 2 == 0 {
            (a.mul(&c)?, b.mul(&c)?)
        } else {
            (a, b)
        };
        let g = multivariate_gcd(&p, &q, limits)?;
        let l = multivariate_lcm(&p, &q, limits)?;
        let lhs = g.mul(&l)?.primitive_part();
        let rhs = p.mul(&q)?.primitive_part();
        let ok = lhs == rhs && p.exact_div(&g).is_ok() && q.exact_div(&g).is_ok();
        result.record(ok, || format!("p {p} q {q} gcd {g} lcm {l}"));
    }
    Ok(result)
}

/// Run every randomized suite with the given seed and case count.
pub fn run_all(seed: u64, cases: u32, limits: &Limits) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        spoly_reduction_suite(seed, cases, limits)?,
        membership_oracle_suite(seed, cases, limits)?,
        saturation_idempotence_suite(seed, cases, limits)?,
        leibniz_suite(seed, cases, limits)?,
        dixmier_kernel_suite(seed, cases, limits)?,
        gcd_lcm_suite(seed, cases, limits)?,
    ])
}
