//! Fiber analysis of the quotient morphism: reductions modulo kernel
//! primes, component and multiplicity counts of closed fibers, single-line
//! certification of generic fibers, and the bundle-triviality verdict.
//!
//! Three routes feed a fiber report, tried in order:
//!   1. a triangular lex basis (one univariate eliminant, the other bound
//!      variables cut out linearly, one free parameter),
//!   2. evaluation of the ladder's minimal element at the point, when the
//!      point lies on exactly one plinth prime,
//!   3. a seeded hyperplane slice with an exact characteristic polynomial of
//!      a generic linear form on the finite quotient.
//! Route 3 counts slice points, which equals the component count only when
//! every component meets the hyperplane once (the union-of-lines regime);
//! routes 1 and 2 are used wherever they apply.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ideal::{dimension, multivariate_gcd, quotient_basis, zero_dim_degree, IdealHandle};
use crate::limits::Limits;
use crate::lnd::PlinthClaim;
use crate::modification::{LadderProfile, PresentedAlgebra};
use crate::poly::{rat_int, Polynomial, Rational};
use crate::ring::{Monomial, MonomialOrder, RingContext};
use crate::subalgebra::SubalgebraContext;
use crate::util::DetRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberMethod {
    TriangularFactorization,
    LadderEvaluation,
    HyperplaneCharpoly,
    HyperplaneDegreeOnly,
}

impl FiberMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            FiberMethod::TriangularFactorization => "triangular-factorization",
            FiberMethod::LadderEvaluation => "ladder-evaluation",
            FiberMethod::HyperplaneCharpoly => "hyperplane-charpoly",
            FiberMethod::HyperplaneDegreeOnly => "hyperplane-degree-only",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiberReport {
    pub point: Vec<(String, Rational)>,
    /// Degree with multiplicity: the eliminant degree for the triangular
    /// and ladder routes, the sliced vector-space dimension otherwise.
    pub degree: Option<u64>,
    /// Geometric component count over the algebraic closure.
    pub components: Option<u32>,
    /// One entry per geometric component.
    pub multiplicities: Vec<u32>,
    pub method: FiberMethod,
    pub notes: Vec<String>,
}

impl FiberReport {
    pub fn is_single_reduced_line(&self) -> bool {
        self.components == Some(1) && self.multiplicities == vec![1]
    }
}

/// Reduce an element through the tagged presentation of A[z] modulo a prime
/// of A: express it in tag coordinates, then send the prime's tag to zero.
/// The prime must itself reduce to a single tag variable.
pub fn reduce_mod_prime(
    ctx: &SubalgebraContext,
    p: &Polynomial,
    alpha: &Polynomial,
    limits: &Limits,
) -> Result<Polynomial> {
    let alpha_tag = prime_tag_name(ctx, alpha, limits)?;
    let expr = ctx.expect_membership(p, limits)?;
    let zero = Polynomial::zero(ctx.tag_ring());
    expr.substitute(&[(alpha_tag, zero)])
}

/// The tag variable that `alpha` maps to, with its unit normalization
/// checked: the membership expression must be c * tag for a rational c.
pub fn prime_tag_name(
    ctx: &SubalgebraContext,
    alpha: &Polynomial,
    limits: &Limits,
) -> Result<String> {
    let expr = ctx
        .membership(alpha, limits)?
        .ok_or_else(|| Error::NotKernelElement(alpha.to_string()))?;
    let terms = expr.terms();
    if terms.len() == 1 {
        let (m, _) = &terms[0];
        let support: Vec<usize> = m.support().collect();
        if support.len() == 1 && m.exponent(support[0]) == 1 {
            return Ok(ctx.tag_ring().name(support[0]).to_string());
        }
    }
    Err(Error::UnsupportedPrime(alpha.to_string()))
}

/// Certified lower bound for the number of lines in a general fiber over
/// V(alpha): the slice-degree of the ladder's minimal element. Degree <= 1
/// contradicts the expected shape and is an invariant violation.
pub fn line_count_lower_bound(ladder: &LadderProfile) -> Result<u32> {
    if ladder.gbar_degree <= 1 {
        return Err(Error::InvariantViolated(format!(
            "reduced minimal element has slice-degree {}, expected > 1",
            ladder.gbar_degree
        )));
    }
    Ok(ladder.gbar_degree)
}

/// Ladder data usable for fiber evaluation: tag name of the prime plus the
/// reduced minimal element in tag coordinates.
#[derive(Debug, Clone)]
pub struct LadderForFibers {
    pub prime_tag: String,
    pub gbar: Polynomial,
}

pub struct FiberAnalyzer<'a> {
    pub algebra: &'a PresentedAlgebra,
    /// Kernel generators of A, with the tag names used for point
    /// coordinates.
    pub kernel: &'a [(String, Polynomial)],
    /// Name of the slice tag inside the tag ring (the z̄ coordinate).
    pub slice_tag: &'a str,
    pub ladders: &'a [LadderForFibers],
    pub limits: &'a Limits,
}

impl<'a> FiberAnalyzer<'a> {
    fn fiber_ideal(&self, point: &[(String, Rational)]) -> Result<IdealHandle> {
        let ring = &self.algebra.ambient;
        let mut gens: Vec<Polynomial> = self.algebra.relations.generators().to_vec();
        for (name, gen) in self.kernel {
            let value = point
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Other(format!("point misses a value for {name}")))?;
            gens.push(gen.sub(&Polynomial::constant(ring, value))?);
        }
        Ok(IdealHandle::new(ring, gens))
    }

    /// Analyze the closed fiber over a rational point of Spec A.
    pub fn fiber_at_point(
        &self,
        point: &[(String, Rational)],
        seed: u64,
    ) -> Result<FiberReport> {
        let ideal = self.fiber_ideal(point)?;
        match dimension(&ideal, self.limits)? {
            Some(1) => {}
            Some(d) => return Err(Error::UnexpectedDimension { got: d, expected: 1 }),
            None => return Err(Error::UnexpectedDimension { got: 0, expected: 1 }),
        }
        let mut notes = Vec::new();
        if let Some((u, _)) = self.triangular_eliminant(&ideal)? {
            let fact = crate::univar::univariate_squarefree_factor(&u)?;
            let (components, multiplicities) = profile(&fact);
            return Ok(FiberReport {
                point: point.to_vec(),
                degree: Some(u.total_degree().unwrap_or(0) as u64),
                components: Some(components),
                multiplicities,
                method: FiberMethod::TriangularFactorization,
                notes,
            });
        }
        if let Some(u) = self.ladder_eliminant(point)? {
            let fact = crate::univar::univariate_squarefree_factor(&u)?;
            let (components, multiplicities) = profile(&fact);
            return Ok(FiberReport {
                point: point.to_vec(),
                degree: Some(u.total_degree().unwrap_or(0) as u64),
                components: Some(components),
                multiplicities,
                method: FiberMethod::LadderEvaluation,
                notes,
            });
        }
        // hyperplane slice with seed-independence checking
        let (degree, charpoly) = self.sliced_analysis(&ideal, seed, &mut notes)?;
        match charpoly {
            Some(coeffs) => {
                let fact = crate::univar::factor_dense(coeffs, "s")?;
                let (components, multiplicities) = profile(&fact);
                Ok(FiberReport {
                    point: point.to_vec(),
                    degree: Some(degree),
                    components: Some(components),
                    multiplicities,
                    method: FiberMethod::HyperplaneCharpoly,
                    notes,
                })
            }
            None => Ok(FiberReport {
                point: point.to_vec(),
                degree: Some(degree),
                components: None,
                multiplicities: Vec::new(),
                method: FiberMethod::HyperplaneDegreeOnly,
                notes,
            }),
        }
    }

    /// Triangular shape: pick an eliminant variable v carrying a univariate
    /// basis element u, one free variable, and check every other variable is
    /// cut out linearly (with u-coprime leading coefficient) by elements
    /// whose support stays inside the already-classified variables.
    fn triangular_eliminant(&self, ideal: &IdealHandle) -> Result<Option<(Polynomial, usize)>> {
        let ring = ideal.ring();
        let n = ring.nvars();
        let gb = ideal.groebner_basis_with_limits(MonomialOrder::Lex, self.limits)?;
        if gb.is_empty() {
            return Ok(None);
        }
        let absent: Vec<usize> = (0..n)
            .filter(|&v| gb.iter().all(|g| !g.support().contains(&v)))
            .collect();
        if absent.len() > 1 {
            return Ok(None);
        }
        let univariate_in = |v: usize| -> Option<Polynomial> {
            gb.iter()
                .find(|g| g.support() == vec![v])
                .cloned()
        };
        for v in 0..n {
            let Some(u) = univariate_in(v) else { continue };
            let free_candidates: Vec<usize> = match absent.first() {
                Some(&f) => vec![f],
                None => (0..n).filter(|&f| f != v).collect(),
            };
            'free: for &f in &free_candidates {
                if f == v {
                    continue;
                }
                let mut classified = vec![false; n];
                classified[v] = true;
                classified[f] = true;
                loop {
                    let mut progressed = false;
                    for w in 0..n {
                        if classified[w] {
                            continue;
                        }
                        for g in gb.iter() {
                            if g.degree_in(w) != Some(1) {
                                continue;
                            }
                            let ok_support = g
                                .support()
                                .iter()
                                .all(|&s| s == w || classified[s]);
                            if !ok_support {
                                continue;
                            }
                            let lc = crate::univar::coefficients_in(g, w).pop().unwrap();
                            let gcd = multivariate_gcd(&lc, &u, self.limits)?;
                            if gcd.is_constant() {
                                classified[w] = true;
                                progressed = true;
                                break;
                            }
                        }
                    }
                    if classified.iter().all(|&c| c) {
                        return Ok(Some((u, v)));
                    }
                    if !progressed {
                        continue 'free;
                    }
                }
            }
        }
        Ok(None)
    }

    /// Evaluate the ladder's minimal element at the point when the point
    /// lies on exactly one plinth prime.
    fn ladder_eliminant(&self, point: &[(String, Rational)]) -> Result<Option<Polynomial>> {
        let vanishing: Vec<&LadderForFibers> = self
            .ladders
            .iter()
            .filter(|l| {
                point
                    .iter()
                    .any(|(n, v)| *n == l.prime_tag && v.is_zero())
            })
            .collect();
        if vanishing.len() != 1 {
            return Ok(None);
        }
        let ladder = vanishing[0];
        let ring = ladder.gbar.ring().clone();
        // substitute every kernel tag value; the slice tag stays
        let mut assignment: Vec<(String, Polynomial)> = Vec::new();
        for (name, value) in point {
            if ring.index_of(name).is_some() {
                assignment.push((name.clone(), Polynomial::constant(&ring, value.clone())));
            }
        }
        let evaluated = ladder.gbar.substitute(&assignment)?;
        if evaluated.is_zero() || evaluated.is_constant() {
            return Ok(None);
        }
        let support = evaluated.support();
        let slice_idx = ring.index_of(self.slice_tag);
        if support.len() != 1 || Some(support[0]) != slice_idx {
            return Ok(None);
        }
        Ok(Some(evaluated))
    }

    /// Degree of the hyperplane-sliced fiber, consistent across three
    /// consecutive seeds, plus the characteristic polynomial of a seeded
    /// generic linear form on the quotient when available.
    fn sliced_analysis(
        &self,
        ideal: &IdealHandle,
        seed: u64,
        notes: &mut Vec<String>,
    ) -> Result<(u64, Option<Vec<Rational>>)> {
        let ring = ideal.ring();
        let mut attempt = 0u64;
        loop {
            let seeds = [seed + attempt, seed + attempt + 1, seed + attempt + 2];
            let mut degrees = Vec::new();
            let mut first: Option<(IdealHandle, u64)> = None;
            for s in seeds {
                let h = random_affine_form(ring, s);
                let mut gens = ideal.generators().to_vec();
                gens.push(h);
                let sliced = IdealHandle::new(ring, gens);
                match zero_dim_degree(&sliced, self.limits)? {
                    Some(d) => {
                        degrees.push(d as u64);
                        if first.is_none() {
                            first = Some((sliced, d as u64));
                        }
                    }
                    None => {
                        degrees.clear();
                        break;
                    }
                }
            }
            if degrees.len() == 3 && degrees.iter().all(|&d| d == degrees[0]) {
                let (sliced, degree) = first.unwrap();
                let charpoly = self.charpoly_profile(&sliced, seed + attempt + 17)?;
                return Ok((degree, charpoly));
            }
            notes.push(format!(
                "hyperplane seeds {seeds:?} disagreed or degenerated; reseeding"
            ));
            attempt += 3;
            if attempt > 24 {
                return Err(Error::Other(
                    "no stable hyperplane slice found after repeated reseeding".into(),
                ));
            }
        }
    }

    /// Exact characteristic polynomial of multiplication by a seeded linear
    /// form on the finite quotient algebra.
    fn charpoly_profile(
        &self,
        sliced: &IdealHandle,
        seed: u64,
    ) -> Result<Option<Vec<Rational>>> {
        let Some(basis) = quotient_basis(sliced, self.limits)? else {
            return Ok(None);
        };
        let n = basis.len();
        if n == 0 {
            return Ok(None);
        }
        let ring = sliced.ring();
        let lambda = random_affine_form(ring, seed);
        let ord = ring.default_order();
        let mut matrix = vec![vec![Rational::zero(); n]; n];
        for (j, m) in basis.iter().enumerate() {
            let mono = Polynomial::from_terms(ring, vec![(m.clone(), Rational::one())]);
            let image = sliced.normal_form_with_limits(&lambda.mul(&mono)?, ord, self.limits)?;
            for (mm, c) in image.terms() {
                let Some(i) = basis.iter().position(|b| b == mm) else {
                    return Err(Error::Other("normal form left the standard basis".into()));
                };
                matrix[i][j] = c.clone();
            }
        }
        Ok(Some(char_poly(&matrix)))
    }

    /// Certify that a fiber is one reduced line by exhibiting its coordinate
    /// ring as generated by the residue of the local slice: every ambient
    /// variable must reduce to a polynomial in the slice modulo the fiber
    /// ideal.
    pub fn certify_single_line(
        &self,
        point: &[(String, Rational)],
        slice_element: &Polynomial,
    ) -> Result<bool> {
        let ideal = self.fiber_ideal(point)?;
        if dimension(&ideal, self.limits)? != Some(1) {
            return Ok(false);
        }
        let tags = vec![("@s".to_string(), slice_element.clone())];
        let ctx =
            SubalgebraContext::new(&self.algebra.ambient, &ideal, &tags, self.limits)?;
        for i in 0..self.algebra.ambient.nvars() {
            let v = Polynomial::var_index(&self.algebra.ambient, i);
            if ctx.membership(&v, self.limits)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn profile(f: &crate::univar::UnivariateFactorization) -> (u32, Vec<u32>) {
    let mut multiplicities = Vec::new();
    for (factor, m) in &f.factors {
        let d = factor.total_degree().unwrap_or(0);
        for _ in 0..d {
            multiplicities.push(*m);
        }
    }
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    (multiplicities.len() as u32, multiplicities)
}

/// Seed-deterministic affine form with small integer coefficients, involving
/// every variable (numerators in [-97, 97], denominators 1).
pub fn random_affine_form(ring: &RingContext, seed: u64) -> Polynomial {
    let mut rng = DetRng::new(seed ^ 0x8f1e_553d_0014_27abu64);
    let mut terms: Vec<(Monomial, Rational)> = Vec::new();
    for i in 0..ring.nvars() {
        let mut c = rng.int_in(-97, 97);
        if c == 0 {
            c = 1 + (i as i64 % 7);
        }
        terms.push((Monomial::var(ring.nvars(), i, 1), rat_int(c)));
    }
    let constant = rng.int_in(-97, 97);
    terms.push((Monomial::one(ring.nvars()), rat_int(constant)));
    Polynomial::from_terms(ring, terms)
}

/// Faddeev-LeVerrier: exact characteristic polynomial of a rational matrix,
/// returned as dense coefficients (constant first, monic).
fn char_poly(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut aux: Vec<Vec<Rational>> = m.to_vec();
    let mut c = Rational::one();
    for k in 1..=n {
        if k > 1 {
            // aux = M * (aux + c * I)
            let mut shifted = aux.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] += &c;
            }
            let mut next = vec![vec![Rational::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Rational::zero();
                    for l in 0..n {
                        if !m[i][l].is_zero() && !shifted[l][j].is_zero() {
                            acc += &m[i][l] * &shifted[l][j];
                        }
                    }
                    next[i][j] = acc;
                }
            }
            aux = next;
        }
        let trace: Rational = (0..n).map(|i| aux[i][i].clone()).fold(Rational::zero(), |a, b| a + b);
        c = -trace / rat_int(k as i64);
        coeffs[n - k] = c.clone();
    }
    coeffs
}

/// Bundle-triviality per the slice/fiber dichotomy: a global slice gives a
/// trivial bundle; a sampled fiber with two or more components or a
/// multiplicity at least two rules it out; otherwise the evidence is
/// inconclusive (genericity is never certified).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrivialityVerdict {
    TrivialBundle,
    NotTrivial(String),
    Inconclusive(String),
}

pub fn triviality_verdict(
    plinth: Option<&PlinthClaim>,
    has_global_slice: bool,
    reports: &[FiberReport],
) -> TrivialityVerdict {
    if has_global_slice {
        return TrivialityVerdict::TrivialBundle;
    }
    if let Some(claim) = plinth {
        if claim.generator.is_constant() && !claim.generator.is_zero() {
            return TrivialityVerdict::TrivialBundle;
        }
    }
    for report in reports {
        let comps = report.components.unwrap_or(0);
        let max_mult = report.multiplicities.iter().copied().max().unwrap_or(0);
        if comps >= 2 || max_mult >= 2 {
            let point: Vec<String> =
                report.point.iter().map(|(n, v)| format!("{n}={v}")).collect();
            return TrivialityVerdict::NotTrivial(format!(
                "fiber over ({}) has {comps} component(s) with multiplicities {:?}",
                point.join(", "),
                report.multiplicities
            ));
        }
    }
    TrivialityVerdict::Inconclusive(
        "no witnessing fiber found; genericity cannot be certified".into(),
    )
}
