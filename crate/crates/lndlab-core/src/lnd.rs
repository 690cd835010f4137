//! Locally nilpotent derivations: application by the Leibniz rule, bounded
//! nilpotency checks, irreducibility, kernel witnesses, the Dixmier
//! projection onto the kernel, bounded preimage solving, plinth claims and
//! the fixed-point locus.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ideal::{multivariate_gcd, IdealHandle};
use crate::limits::Limits;
use crate::poly::{rat_int, Polynomial, Rational};
use crate::ring::{Monomial, RingContext};

/// A derivation of a presented algebra, given by the images of the ambient
/// variables and extended by the Leibniz rule. Construction checks that the
/// relation ideal is delta-stable.
#[derive(Debug, Clone)]
pub struct Derivation {
    ring: RingContext,
    images: Vec<Polynomial>,
    relations: IdealHandle,
}

impl Derivation {
    pub fn new(
        ring: &RingContext,
        images: Vec<Polynomial>,
        relations: IdealHandle,
        limits: &Limits,
    ) -> Result<Self> {
        if images.len() != ring.nvars() {
            return Err(Error::Other("need one image per ring variable".into()));
        }
        for img in &images {
            if !img.ring().same_ring(ring) {
                return Err(Error::RingMismatch(img.ring().describe(), ring.describe()));
            }
        }
        let d = Derivation { ring: ring.clone(), images, relations };
        for rel in d.relations.generators() {
            let img = d.apply_raw(rel)?;
            let nf = d.relations.normal_form_with_limits(&img, d.ring.default_order(), limits)?;
            if !nf.is_zero() {
                return Err(Error::RelationsNotStable(rel.to_string(), nf.to_string()));
            }
        }
        Ok(d)
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn relations(&self) -> &IdealHandle {
        &self.relations
    }

    pub fn image_of(&self, var: &str) -> Result<&Polynomial> {
        let i = self.ring.index_of(var).ok_or_else(|| Error::UnknownVariable(var.into()))?;
        Ok(&self.images[i])
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|p| p.is_zero())
    }

    fn apply_raw(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(&self.ring);
        for (i, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let d = p.partial_derivative_index(i);
            if !d.is_zero() {
                acc = acc.add(&d.mul(img)?)?;
            }
        }
        Ok(acc)
    }

    /// Leibniz extension of the images, reduced modulo the relations.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if !p.ring().same_ring(&self.ring) {
            return Err(Error::RingMismatch(p.ring().describe(), self.ring.describe()));
        }
        let raw = self.apply_raw(p)?;
        if self.relations.is_zero_ideal() {
            return Ok(raw);
        }
        self.relations.normal_form(&raw, self.ring.default_order())
    }

    /// Iterate delta on `p` until zero, at most `bound` times. Returns the
    /// least n with delta^n(p) = 0.
    pub fn nilpotency_degree(&self, p: &Polynomial, bound: usize) -> Result<usize> {
        let mut cur = p.clone();
        for n in 0..=bound {
            if cur.is_zero() {
                return Ok(n);
            }
            cur = self.apply(&cur)?;
        }
        Err(Error::NilpotencyBoundExceeded(p.to_string(), bound))
    }

    /// Rescale every image by a constant.
    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            ring: self.ring.clone(),
            images: self.images.iter().map(|p| p.scale(c)).collect(),
            relations: self.relations.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NilpotencyVerdict {
    /// Least n_v with delta^(n_v)(v) = 0, per ambient variable.
    LocallyNilpotent(Vec<(String, usize)>),
    /// Some variable did not reach zero within the bound. This does NOT
    /// certify non-nilpotency.
    ExceededBound { variable: String, bound: usize },
}

pub fn local_nilpotency_check(delta: &Derivation, bound: usize) -> Result<NilpotencyVerdict> {
    let mut degrees = Vec::new();
    for (i, name) in delta.ring().names().iter().enumerate() {
        let v = Polynomial::var_index(delta.ring(), i);
        match delta.nilpotency_degree(&v, bound) {
            Ok(n) => degrees.push((name.clone(), n)),
            Err(Error::NilpotencyBoundExceeded(..)) => {
                return Ok(NilpotencyVerdict::ExceededBound { variable: name.clone(), bound })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(NilpotencyVerdict::LocallyNilpotent(degrees))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Irreducible,
    /// A common non-unit factor of all variable images.
    Reducible(Polynomial),
}

/// The ideal (delta(B))B equals (delta(v) : v ambient)B by the Leibniz rule,
/// so delta is irreducible iff the gcd of the variable images is a nonzero
/// rational constant.
pub fn irreducibility_check(delta: &Derivation, limits: &Limits) -> Result<IrreducibilityVerdict> {
    if delta.is_zero() {
        return Err(Error::ZeroDerivation);
    }
    let mut gcd = Polynomial::zero(delta.ring());
    for img in delta.images() {
        if img.is_zero() {
            continue;
        }
        gcd = if gcd.is_zero() {
            img.primitive_part()
        } else {
            multivariate_gcd(&gcd, img, limits)?
        };
        if gcd.is_constant() {
            return Ok(IrreducibilityVerdict::Irreducible);
        }
    }
    if gcd.is_constant() {
        Ok(IrreducibilityVerdict::Irreducible)
    } else {
        Ok(IrreducibilityVerdict::Reducible(gcd))
    }
}

/// Claimed generators of Ker delta; validation checks each is annihilated.
#[derive(Debug, Clone)]
pub struct KernelWitness {
    pub generators: Vec<(String, Polynomial)>,
}

impl KernelWitness {
    pub fn validate(&self, delta: &Derivation) -> Result<()> {
        for (name, gen) in &self.generators {
            let img = delta.apply(gen)?;
            if !img.is_zero() {
                return Err(Error::NotKernelElement(format!("{name} = {gen} (delta gives {img})")));
            }
        }
        Ok(())
    }
}

/// z with delta(z) = a and delta(a) = 0, a nonzero.
#[derive(Debug, Clone)]
pub struct LocalSlice {
    pub z: Polynomial,
    pub a: Polynomial,
}

impl LocalSlice {
    pub fn validate(&self, delta: &Derivation) -> Result<()> {
        if self.a.is_zero() {
            return Err(Error::SliceInvalid {
                z: self.z.to_string(),
                got: "0".into(),
                expected: "a nonzero kernel element".into(),
            });
        }
        let dz = delta.apply(&self.z)?;
        if dz != self.a {
            return Err(Error::SliceInvalid {
                z: self.z.to_string(),
                got: dz.to_string(),
                expected: self.a.to_string(),
            });
        }
        let da = delta.apply(&self.a)?;
        if !da.is_zero() {
            return Err(Error::SliceInvalid {
                z: self.a.to_string(),
                got: da.to_string(),
                expected: "0".into(),
            });
        }
        Ok(())
    }

    /// A slice proper: delta(z) is a nonzero constant.
    pub fn is_global_slice(&self) -> bool {
        self.a.is_constant() && !self.a.is_zero()
    }
}

/// numerator / denominator_base^exponent, normalized so the base does not
/// divide the numerator while the exponent is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedElement {
    pub numerator: Polynomial,
    pub denominator_base: Polynomial,
    pub exponent: u32,
}

impl LocalizedElement {
    pub fn new(numerator: Polynomial, base: Polynomial, exponent: u32) -> Self {
        let mut el = LocalizedElement { numerator, denominator_base: base, exponent };
        el.normalize();
        el
    }

    fn normalize(&mut self) {
        while self.exponent > 0 {
            match self.numerator.exact_div(&self.denominator_base) {
                Ok(q) => {
                    self.numerator = q;
                    self.exponent -= 1;
                }
                Err(_) => break,
            }
        }
        if self.numerator.is_zero() {
            self.exponent = 0;
        }
    }

    pub fn denominator(&self) -> Result<Polynomial> {
        self.denominator_base.pow(self.exponent)
    }

    /// Equality as elements of the localization: cross-multiplied identity.
    pub fn same_value(&self, other: &LocalizedElement) -> Result<bool> {
        let lhs = self.numerator.mul(&other.denominator()?)?;
        let rhs = other.numerator.mul(&self.denominator()?)?;
        Ok(lhs == rhs)
    }
}

impl std::fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else if self.exponent == 1 {
            write!(f, "({}) / ({})", self.numerator, self.denominator_base)
        } else {
            write!(f, "({}) / ({})^{}", self.numerator, self.denominator_base, self.exponent)
        }
    }
}

/// Dixmier projection pi(b) = sum_i (-1)^i delta^i(b) z^i / (i! a^i), a
/// kernel element of the localization B[a^{-1}]. The sum is finite because
/// delta is locally nilpotent on b; `bound` caps the iteration.
pub fn dixmier_projection(
    delta: &Derivation,
    slice: &LocalSlice,
    b: &Polynomial,
    bound: usize,
) -> Result<LocalizedElement> {
    slice.validate(delta)?;
    let mut iterates = vec![b.clone()];
    loop {
        let next = delta.apply(iterates.last().unwrap())?;
        if next.is_zero() {
            break;
        }
        if iterates.len() > bound {
            return Err(Error::NilpotencyBoundExceeded(b.to_string(), bound));
        }
        iterates.push(next);
    }
    let n = iterates.len() - 1; // delta^(n+1)(b) = 0
    // common denominator a^n: numerator = sum (-1)^i delta^i(b) z^i a^(n-i) / i!
    let mut numerator = Polynomial::zero(delta.ring());
    let mut factorial = Rational::one();
    for (i, di) in iterates.iter().enumerate() {
        if i > 0 {
            factorial *= rat_int(i as i64);
        }
        let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
        let coeff = sign / factorial.clone();
        let term = di
            .mul(&slice.z.pow(i as u32)?)?
            .mul(&slice.a.pow((n - i) as u32)?)?
            .scale(&coeff);
        numerator = numerator.add(&term)?;
    }
    Ok(LocalizedElement::new(numerator, slice.a.clone(), n as u32))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreimageVerdict {
    Solution(Polynomial),
    /// No polynomial s of total degree <= the cap solves delta(s) = target.
    /// A bounded certificate only.
    NoSolutionUpTo(u32),
}

/// Solve delta(s) = target exactly as a linear system over Q in the
/// coefficients of a general polynomial of total degree <= cap.
pub fn derivation_preimage(
    delta: &Derivation,
    target: &Polynomial,
    cap: u32,
    limits: &Limits,
) -> Result<PreimageVerdict> {
    if target.is_zero() {
        return Ok(PreimageVerdict::Solution(Polynomial::zero(delta.ring())));
    }
    let ring = delta.ring();
    let n = ring.nvars();
    let candidates = monomials_up_to(n, cap);
    if candidates.len() > 4000 {
        return Err(Error::LimitExceeded(format!(
            "preimage ansatz would need {} unknowns",
            candidates.len()
        )));
    }
    // images of candidate monomials and the target, reduced mod relations
    let mut columns: Vec<Polynomial> = Vec::with_capacity(candidates.len());
    for m in &candidates {
        let mono = Polynomial::from_terms(ring, vec![(m.clone(), Rational::one())]);
        columns.push(delta.apply(&mono)?);
    }
    let target_nf = if delta.relations().is_zero_ideal() {
        target.clone()
    } else {
        delta.relations().normal_form_with_limits(target, ring.default_order(), limits)?
    };
    // row index: every monomial appearing anywhere
    let mut rows: Vec<Monomial> = Vec::new();
    for c in columns.iter().chain(std::iter::once(&target_nf)) {
        for (m, _) in c.terms() {
            if !rows.contains(m) {
                rows.push(m.clone());
            }
        }
    }
    rows.sort();
    let rix = |m: &Monomial| rows.iter().position(|r| r == m).unwrap();
    let nrows = rows.len();
    let ncols = columns.len();
    let mut mat = vec![vec![Rational::zero(); ncols + 1]; nrows];
    for (j, c) in columns.iter().enumerate() {
        for (m, v) in c.terms() {
            mat[rix(m)][j] = v.clone();
        }
    }
    for (m, v) in target_nf.terms() {
        mat[rix(m)][ncols] = v.clone();
    }
    match solve_linear(mat, ncols) {
        None => Ok(PreimageVerdict::NoSolutionUpTo(cap)),
        Some(coeffs) => {
            let terms: Vec<(Monomial, Rational)> = candidates
                .into_iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let s = Polynomial::from_terms(ring, terms);
            // soundness: the solver's claim is re-checked exactly
            debug_assert_eq!(delta.apply(&s)?, target_nf);
            Ok(PreimageVerdict::Solution(s))
        }
    }
}

fn monomials_up_to(nvars: usize, cap: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u16; nvars];
    loop {
        let deg: u32 = current.iter().map(|&e| e as u32).sum();
        if deg <= cap {
            out.push(Monomial::from_exponents(&current));
        }
        // odometer with degree pruning
        let mut k = nvars;
        loop {
            if k == 0 {
                out.sort();
                return out;
            }
            k -= 1;
            current[k] += 1;
            let d: u32 = current.iter().map(|&e| e as u32).sum();
            if d <= cap {
                break;
            }
            current[k] = 0;
        }
    }
}

/// Gauss-Jordan over Q; returns a particular solution (free unknowns zero)
/// of the augmented system, or None when inconsistent.
fn solve_linear(mut mat: Vec<Vec<Rational>>, ncols: usize) -> Option<Vec<Rational>> {
    let nrows = mat.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
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
                    let delta = &k * &mat[row][c];
                    mat[r][c] -= delta;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // inconsistent iff some zero row has nonzero rhs
    for r in row..nrows {
        if !mat[r][ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rational::zero(); ncols];
    for (col, piv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = piv {
            sol[col] = mat[*r][ncols].clone();
        }
    }
    Some(sol)
}

/// A claimed principal plinth ideal: generator a = prod alpha_i^(p_i),
/// witness s with delta(s) = a.
#[derive(Debug, Clone)]
pub struct PlinthClaim {
    pub generator: Polynomial,
    pub witness: Polynomial,
    pub factorization: Vec<(Polynomial, u32)>,
}

#[derive(Debug, Clone)]
pub struct PlinthReport {
    pub witness_ok: bool,
    pub generator_in_kernel: bool,
    /// Per prime factor: bounded minimality evidence that generator/alpha_i
    /// has no preimage of total degree <= the cap.
    pub minimality: Vec<(String, bool)>,
    pub minimality_cap: u32,
    /// Unit plinth: the witness is a global slice.
    pub is_unit: bool,
}

impl PlinthReport {
    pub fn all_passed(&self) -> bool {
        self.witness_ok && self.generator_in_kernel && self.minimality.iter().all(|(_, ok)| *ok)
    }
}

/// Verify delta(witness) = generator, delta(generator) = 0, the factor
/// product, and bounded minimality per prime factor.
pub fn plinth_witness_check(
    delta: &Derivation,
    claim: &PlinthClaim,
    cap: u32,
    limits: &Limits,
) -> Result<PlinthReport> {
    // factorization consistency: product equals the generator up to a
    // rational unit
    let mut prod = Polynomial::one(delta.ring());
    for (alpha, e) in &claim.factorization {
        prod = prod.mul(&alpha.pow(*e)?)?;
    }
    if prod.primitive_part() != claim.generator.primitive_part() {
        return Err(Error::PlinthMalformed(format!(
            "product of factors {prod} does not match generator {}",
            claim.generator
        )));
    }
    let witness_ok = delta.apply(&claim.witness)? == claim.generator;
    let generator_in_kernel = delta.apply(&claim.generator)?.is_zero();
    let is_unit = claim.generator.is_constant() && !claim.generator.is_zero();
    let mut minimality = Vec::new();
    if !is_unit {
        for (alpha, _) in &claim.factorization {
            let reduced = claim.generator.exact_div(alpha)?;
            let verdict = derivation_preimage(delta, &reduced, cap, limits)?;
            minimality.push((
                alpha.to_string(),
                matches!(verdict, PreimageVerdict::NoSolutionUpTo(_)),
            ));
        }
    }
    Ok(PlinthReport { witness_ok, generator_in_kernel, minimality, minimality_cap: cap, is_unit })
}

/// The ideal cutting out the fixed-point locus: generated by the images of
/// the ambient variables (plus the relations of the presentation).
pub fn fixed_locus_ideal(delta: &Derivation) -> IdealHandle {
    let mut gens: Vec<Polynomial> = delta.images().to_vec();
    gens.extend(delta.relations().generators().iter().cloned());
    IdealHandle::new(delta.ring(), gens)
}

#[derive(Debug, Clone)]
pub enum FixedPointVerdict {
    /// (alpha, theta) is the unit ideal, so the action has no fixed points.
    FixedPointFree,
    /// The candidate fixed locus V(alpha, theta), as a reduced basis.
    CandidateFixedLocus(Vec<Polynomial>),
}

pub fn fixed_point_free_check(
    delta: &Derivation,
    theta: &Polynomial,
    alpha: &Polynomial,
    limits: &Limits,
) -> Result<FixedPointVerdict> {
    let mut gens = vec![alpha.clone(), theta.clone()];
    gens.extend(delta.relations().generators().iter().cloned());
    let ideal = IdealHandle::new(delta.ring(), gens);
    let gb = ideal.groebner_basis_with_limits(delta.ring().default_order(), limits)?;
    if gb.len() == 1 && gb[0].is_constant() {
        Ok(FixedPointVerdict::FixedPointFree)
    } else {
        Ok(FixedPointVerdict::CandidateFixedLocus(gb.as_ref().clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::ring::MonomialOrder;

    fn ring3() -> RingContext {
        RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
    }

    fn p(r: &RingContext, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    /// delta(x) = 0, delta(y) = -2z, delta(z) = x^2
    fn ex41(r: &RingContext) -> Derivation {
        Derivation::new(
            r,
            vec![p(r, "0"), p(r, "-2*z"), p(r, "x^2")],
            IdealHandle::zero(r),
            &Limits::default(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_of_the_triangular_derivation() {
        let r = ring3();
        let d = ex41(&r);
        assert!(d.apply(&p(&r, "x^2*y + z^2")).unwrap().is_zero());
        assert_eq!(d.apply(&p(&r, "y")).unwrap(), p(&r, "-2*z"));
    }

    #[test]
    fn nilpotency_degrees() {
        let r = ring3();
        let d = ex41(&r);
        let v = local_nilpotency_check(&d, 10).unwrap();
        assert_eq!(
            v,
            NilpotencyVerdict::LocallyNilpotent(vec![
                ("x".into(), 1),
                ("y".into(), 3),
                ("z".into(), 2)
            ])
        );
        // a semisimple derivation exceeds any bound
        let semi = Derivation::new(
            &r,
            vec![p(&r, "x"), p(&r, "0"), p(&r, "0")],
            IdealHandle::zero(&r),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(
            local_nilpotency_check(&semi, 10).unwrap(),
            NilpotencyVerdict::ExceededBound { variable: "x".into(), bound: 10 }
        );
        // the zero derivation kills everything at the first step
        let zero = Derivation::new(
            &r,
            vec![p(&r, "0"), p(&r, "0"), p(&r, "0")],
            IdealHandle::zero(&r),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(
            local_nilpotency_check(&zero, 3).unwrap(),
            NilpotencyVerdict::LocallyNilpotent(vec![
                ("x".into(), 1),
                ("y".into(), 1),
                ("z".into(), 1)
            ])
        );
    }

    #[test]
    fn irreducibility() {
        let r = ring3();
        let limits = Limits::default();
        let d = ex41(&r);
        assert_eq!(irreducibility_check(&d, &limits).unwrap(), IrreducibilityVerdict::Irreducible);
        // x * delta has the manufactured common factor x
        let xd = Derivation::new(
            &r,
            vec![p(&r, "0"), p(&r, "-2*x*z"), p(&r, "x^3")],
            IdealHandle::zero(&r),
            &limits,
        )
        .unwrap();
        assert_eq!(
            irreducibility_check(&xd, &limits).unwrap(),
            IrreducibilityVerdict::Reducible(p(&r, "x"))
        );
        let zero = Derivation::new(
            &r,
            vec![p(&r, "0"), p(&r, "0"), p(&r, "0")],
            IdealHandle::zero(&r),
            &limits,
        )
        .unwrap();
        assert!(matches!(irreducibility_check(&zero, &limits), Err(Error::ZeroDerivation)));
    }

    #[test]
    fn dixmier_projection_recovers_the_kernel_generator() {
        let r = ring3();
        let d = ex41(&r);
        let slice = LocalSlice { z: p(&r, "z"), a: p(&r, "x^2") };
        // pi(y) = (x^2 y + z^2) / x^2
        let img = dixmier_projection(&d, &slice, &p(&r, "y"), 16).unwrap();
        assert_eq!(img.numerator, p(&r, "x^2*y + z^2"));
        assert_eq!(img.denominator().unwrap(), p(&r, "x^2"));
        // kernel elements are fixed, the slice maps into the base
        let fixed = dixmier_projection(&d, &slice, &p(&r, "x"), 16).unwrap();
        assert_eq!(fixed, LocalizedElement::new(p(&r, "x"), p(&r, "x^2"), 0));
        let zed = dixmier_projection(&d, &slice, &p(&r, "z"), 16).unwrap();
        assert!(zed.numerator.is_zero());
        // pi lands in the kernel
        assert!(d.apply(&img.numerator).unwrap().is_zero());
    }

    #[test]
    fn preimages() {
        let r = ring3();
        let limits = Limits::default();
        let d = ex41(&r);
        match derivation_preimage(&d, &p(&r, "x^2"), 3, &limits).unwrap() {
            PreimageVerdict::Solution(s) => assert_eq!(d.apply(&s).unwrap(), p(&r, "x^2")),
            other => panic!("expected a solution, got {other:?}"),
        }
        assert_eq!(
            derivation_preimage(&d, &p(&r, "x"), 6, &limits).unwrap(),
            PreimageVerdict::NoSolutionUpTo(6)
        );
        assert_eq!(
            derivation_preimage(&d, &p(&r, "0"), 6, &limits).unwrap(),
            PreimageVerdict::Solution(Polynomial::zero(&r))
        );
    }

    #[test]
    fn plinth_checks() {
        let r = ring3();
        let limits = Limits::default();
        let d = ex41(&r);
        let claim = PlinthClaim {
            generator: p(&r, "x^2"),
            witness: p(&r, "z"),
            factorization: vec![(p(&r, "x"), 2)],
        };
        let report = plinth_witness_check(&d, &claim, 6, &limits).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.minimality, vec![("x".to_string(), true)]);

        // wrong witness: delta(z) = x^2, not x
        let bad = PlinthClaim {
            generator: p(&r, "x"),
            witness: p(&r, "z"),
            factorization: vec![(p(&r, "x"), 1)],
        };
        let report = plinth_witness_check(&d, &bad, 4, &limits).unwrap();
        assert!(!report.witness_ok);

        // malformed factorization
        let malformed = PlinthClaim {
            generator: p(&r, "x^2"),
            witness: p(&r, "z"),
            factorization: vec![(p(&r, "x"), 3)],
        };
        assert!(matches!(
            plinth_witness_check(&d, &malformed, 4, &limits),
            Err(Error::PlinthMalformed(_))
        ));
    }

    #[test]
    fn fixed_locus() {
        let r = ring3();
        let limits = Limits::default();
        let d = ex41(&r);
        let fl = fixed_locus_ideal(&d);
        let expected = IdealHandle::new(&r, vec![p(&r, "2*z"), p(&r, "x^2")]);
        assert!(fl.equals(&expected).unwrap());

        // derivation with a slice: unit fixed-locus ideal
        let with_slice = Derivation::new(
            &r,
            vec![p(&r, "0"), p(&r, "1"), p(&r, "x^2")],
            IdealHandle::zero(&r),
            &limits,
        )
        .unwrap();
        assert!(fixed_locus_ideal(&with_slice).is_unit_ideal().unwrap());
    }

    #[test]
    fn fixed_point_free_checks() {
        let r = ring3();
        let limits = Limits::default();
        let d = ex41(&r);
        assert!(matches!(
            fixed_point_free_check(&d, &p(&r, "1 + x"), &p(&r, "x"), &limits).unwrap(),
            FixedPointVerdict::FixedPointFree
        ));
        // theta = 2z, alpha = x: V(x, z) survives
        match fixed_point_free_check(&d, &p(&r, "2*z"), &p(&r, "x"), &limits).unwrap() {
            FixedPointVerdict::CandidateFixedLocus(gb) => {
                let got = IdealHandle::new(&r, gb);
                assert!(got.equals(&IdealHandle::new(&r, vec![p(&r, "x"), p(&r, "z")])).unwrap());
            }
            other => panic!("expected a candidate locus, got {other:?}"),
        }
        assert!(matches!(
            fixed_point_free_check(&d, &p(&r, "y"), &p(&r, "1"), &limits).unwrap(),
            FixedPointVerdict::FixedPointFree
        ));
    }

    #[test]
    fn relation_stability_is_enforced() {
        let r = ring3();
        let limits = Limits::default();
        // relations (x) with delta(x) = y is not stable
        let rel = IdealHandle::new(&r, vec![p(&r, "x")]);
        assert!(matches!(
            Derivation::new(&r, vec![p(&r, "y"), p(&r, "0"), p(&r, "0")], rel.clone(), &limits),
            Err(Error::RelationsNotStable(..))
        ));
        // delta(x) = x is stable on (x)
        assert!(Derivation::new(&r, vec![p(&r, "x"), p(&r, "0"), p(&r, "0")], rel, &limits).is_ok());
    }
}
