//! Ideal handles with cached reduced Groebner bases, plus the ideal calculus
//! built on them: normal forms, elimination, intersection, saturation,
//! gcd/lcm via principal intersections, radical membership and the
//! zero-dimensional toolkit.
//!
//! The basis engine is Buchberger's algorithm with the Gebauer-Moeller pair
//! update and the normal selection strategy. Fixed input and order give a
//! fixed reduced basis, so caches and golden outputs are reproducible.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poly::{Polynomial, Rational};
use crate::ring::{Monomial, MonomialOrder, RingContext};

/// Term list sorted descending under the engine's active order.
type Terms = Vec<(Monomial, Rational)>;

struct Engine {
    ord: MonomialOrder,
    limits: Limits,
    steps: u64,
}

impl Engine {
    fn new(ord: MonomialOrder, limits: &Limits) -> Self {
        Engine { ord, limits: limits.clone(), steps: 0 }
    }

    fn sorted(&self, p: &Polynomial) -> Terms {
        let mut t: Terms = p.terms().to_vec();
        t.sort_unstable_by(|a, b| self.ord.compare(&b.0, &a.0));
        t
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(Error::LimitExceeded(format!(
                "more than {} reduction steps in one basis computation",
                self.limits.max_steps
            )));
        }
        Ok(())
    }

    fn check_degree(&self, m: &Monomial) -> Result<()> {
        if m.total_degree() > self.limits.max_total_degree {
            return Err(Error::LimitExceeded(format!(
                "intermediate total degree {} exceeds cap {}",
                m.total_degree(),
                self.limits.max_total_degree
            )));
        }
        Ok(())
    }

    /// f - c * m * g, all term lists sorted under `self.ord`.
    fn sub_mul(&self, f: &Terms, c: &Rational, m: &Monomial, g: &Terms) -> Result<Terms> {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        while i < f.len() && j < g.len() {
            let gm = g[j].0.mul(m);
            self.check_degree(&gm)?;
            match self.ord.compare(&f[i].0, &gm) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm, -(c * &g[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = &f[i].1 - c * &g[j].1;
                    if !coeff.is_zero() {
                        out.push((gm, coeff));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        for (gm0, gc) in &g[j..] {
            let gm = gm0.mul(m);
            self.check_degree(&gm)?;
            out.push((gm, -(c * gc)));
        }
        Ok(out)
    }

    /// Full normal form of `f` against `basis`: no term of the result is
    /// divisible by any basis leading monomial.
    fn reduce(&mut self, mut f: Terms, basis: &[Terms]) -> Result<Terms> {
        let mut head = 0usize; // terms before `head` are irreducible
        'outer: while head < f.len() {
            let (tm, tc) = (f[head].0.clone(), f[head].1.clone());
            for g in basis {
                if g.is_empty() {
                    continue;
                }
                let (gm, gc) = (&g[0].0, &g[0].1);
                if gm.divides(&tm) {
                    self.tick()?;
                    let qm = tm.checked_div(gm).unwrap();
                    let qc = &tc / gc;
                    let tail = f.split_off(head);
                    let reduced = self.sub_mul(&tail, &qc, &qm, g)?;
                    f.extend(reduced);
                    continue 'outer;
                }
            }
            head += 1;
        }
        Ok(f)
    }

    fn spoly(&self, f: &Terms, g: &Terms) -> Result<Terms> {
        let (fm, fc) = (&f[0].0, &f[0].1);
        let (gm, gc) = (&g[0].0, &g[0].1);
        let l = fm.lcm(gm);
        self.check_degree(&l)?;
        let mf = l.checked_div(fm).unwrap();
        let mg = l.checked_div(gm).unwrap();
        // (1/lc(f)) * mf * f - (1/lc(g)) * mg * g
        let scaled: Terms = f
            .iter()
            .map(|(m, c)| (m.mul(&mf), c / fc))
            .collect();
        self.sub_mul(&scaled, &(Rational::one() / gc.clone()), &mg, g)
    }

    /// Strip rational content so coefficients are coprime integers with a
    /// positive leading coefficient. Keeps numbers small across reductions.
    fn make_primitive(terms: &mut Terms) {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::Signed;
        if terms.is_empty() {
            return;
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in terms.iter() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if terms[0].1.is_negative() {
            factor = -factor;
        }
        for (_, c) in terms.iter_mut() {
            *c *= &factor;
        }
    }

    /// Gebauer-Moeller update of the pair set after appending basis index `t`.
    fn update_pairs(
        &self,
        basis: &[Terms],
        pairs: &mut Vec<(usize, usize, Monomial)>,
        t: usize,
    ) {
        let lt = |i: usize| -> &Monomial { &basis[i][0].0 };
        let lcm_t = |i: usize| lt(i).lcm(lt(t));

        let candidates: Vec<(usize, Monomial)> =
            (0..t).filter(|&i| !basis[i].is_empty()).map(|i| (i, lcm_t(i))).collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for k in 0..candidates.len() {
            let (i, ref li) = candidates[k];
            let coprime = lt(i).coprime(lt(t));
            let dominated = candidates[k + 1..]
                .iter()
                .any(|(_, lj)| lj.divides(li))
                || kept.iter().any(|(_, lj)| lj.divides(li));
            if coprime || !dominated {
                kept.push((i, li.clone()));
            }
        }
        // old pairs made redundant by the new leading term
        pairs.retain(|(i, j, lij)| {
            !(lt(t).divides(lij) && lcm_t(*i) != *lij && lcm_t(*j) != *lij)
        });
        for (i, l) in kept {
            if !lt(i).coprime(lt(t)) {
                pairs.push((i, t, l));
            }
        }
    }

    /// Reduced Groebner basis: monic, fully interreduced, sorted by
    /// descending leading monomial.
    fn buchberger(&mut self, inputs: Vec<Terms>) -> Result<Vec<Terms>> {
        let mut basis: Vec<Terms> = Vec::new();
        let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
        for input in inputs {
            if input.is_empty() {
                continue;
            }
            let mut r = self.reduce(input, &basis)?;
            if r.is_empty() {
                continue;
            }
            Self::make_primitive(&mut r);
            basis.push(r);
            self.update_pairs(&basis, &mut pairs, basis.len() - 1);
        }
        while !pairs.is_empty() {
            // normal selection: minimal lcm under the active order
            let mut best = 0;
            for k in 1..pairs.len() {
                let c = self.ord.compare(&pairs[k].2, &pairs[best].2);
                if c == Ordering::Less
                    || (c == Ordering::Equal
                        && (pairs[k].0, pairs[k].1) < (pairs[best].0, pairs[best].1))
                {
                    best = k;
                }
            }
            let (i, j, _) = pairs.swap_remove(best);
            let s = self.spoly(&basis[i], &basis[j])?;
            let mut r = self.reduce(s, &basis)?;
            if r.is_empty() {
                continue;
            }
            Self::make_primitive(&mut r);
            basis.push(r);
            self.update_pairs(&basis, &mut pairs, basis.len() - 1);
        }
        self.reduce_basis(basis)
    }

    fn reduce_basis(&mut self, mut basis: Vec<Terms>) -> Result<Vec<Terms>> {
        // minimal: drop elements whose leading monomial another one divides
        let mut keep: Vec<bool> = vec![true; basis.len()];
        for i in 0..basis.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..basis.len() {
                if i != j
                    && keep[j]
                    && basis[j][0].0.divides(&basis[i][0].0)
                    && (basis[j][0].0 != basis[i][0].0 || j < i)
                {
                    keep[i] = false;
                    break;
                }
            }
        }
        let minimal: Vec<Terms> =
            basis.drain(..).zip(keep).filter_map(|(b, k)| k.then_some(b)).collect();
        // reduced: tail-reduce each against the others, then make monic
        let mut out: Vec<Terms> = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<Terms> = minimal
                .iter()
                .enumerate()
                .filter_map(|(j, b)| (j != i).then(|| b.clone()))
                .collect();
            let r = self.reduce(minimal[i].clone(), &others)?;
            debug_assert!(!r.is_empty(), "minimal basis element reduced to zero");
            out.push(r);
        }
        for b in &mut out {
            let lc = b[0].1.clone();
            for (_, c) in b.iter_mut() {
                *c /= &lc;
            }
        }
        out.sort_by(|a, b| self.ord.compare(&b[0].0, &a[0].0));
        Ok(out)
    }
}

/// A finitely generated ideal together with lazily computed reduced Groebner
/// bases, one per monomial order. Read-only sharing across threads is safe;
/// the cache uses interior synchronization.
pub struct IdealHandle {
    ring: RingContext,
    generators: Vec<Polynomial>,
    cache: Mutex<BTreeMap<MonomialOrder, Arc<Vec<Polynomial>>>>,
}

impl IdealHandle {
    pub fn new(ring: &RingContext, generators: Vec<Polynomial>) -> Self {
        let gens = generators.into_iter().filter(|g| !g.is_zero()).collect();
        IdealHandle { ring: ring.clone(), generators: gens, cache: Mutex::new(BTreeMap::new()) }
    }

    pub fn zero(ring: &RingContext) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn groebner_basis(&self, ord: MonomialOrder) -> Result<Arc<Vec<Polynomial>>> {
        self.groebner_basis_with_limits(ord, &Limits::default())
    }

    pub fn groebner_basis_with_limits(
        &self,
        ord: MonomialOrder,
        limits: &Limits,
    ) -> Result<Arc<Vec<Polynomial>>> {
        if let Some(gb) = self.cache.lock().unwrap().get(&ord) {
            return Ok(gb.clone());
        }
        if self.ring.nvars() > limits.max_vars {
            return Err(Error::LimitExceeded(format!(
                "{} variables exceed the cap of {}",
                self.ring.nvars(),
                limits.max_vars
            )));
        }
        let mut engine = Engine::new(ord, limits);
        let inputs: Vec<Terms> = self.generators.iter().map(|g| engine.sorted(g)).collect();
        let basis = engine.buchberger(inputs)?;
        let polys: Vec<Polynomial> =
            basis.into_iter().map(|t| Polynomial::from_terms(&self.ring, t)).collect();
        let arc = Arc::new(polys);
        self.cache.lock().unwrap().insert(ord, arc.clone());
        Ok(arc)
    }

    /// Remainder of `p` modulo the reduced basis; zero iff `p` is a member.
    pub fn normal_form(&self, p: &Polynomial, ord: MonomialOrder) -> Result<Polynomial> {
        self.normal_form_with_limits(p, ord, &Limits::default())
    }

    pub fn normal_form_with_limits(
        &self,
        p: &Polynomial,
        ord: MonomialOrder,
        limits: &Limits,
    ) -> Result<Polynomial> {
        if !p.ring().same_ring(&self.ring) {
            return Err(Error::RingMismatch(p.ring().describe(), self.ring.describe()));
        }
        let gb = self.groebner_basis_with_limits(ord, limits)?;
        let mut engine = Engine::new(ord, limits);
        let basis: Vec<Terms> = gb.iter().map(|g| engine.sorted(g)).collect();
        let r = engine.reduce(engine.sorted(p), &basis)?;
        Ok(Polynomial::from_terms(&self.ring, r))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p, self.ring.default_order())?.is_zero())
    }

    pub fn is_unit_ideal(&self) -> Result<bool> {
        let gb = self.groebner_basis(self.ring.default_order())?;
        Ok(gb.len() == 1 && gb[0].is_constant() && !gb[0].is_zero())
    }

    /// Ideal equality by mutual zero-reduction of generators.
    pub fn equals(&self, other: &IdealHandle) -> Result<bool> {
        if !self.ring.same_ring(&other.ring) {
            return Err(Error::RingMismatch(self.ring.describe(), other.ring.describe()));
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

/// Ring with `extra` fresh variables appended after the originals.
pub fn extend_ring(ring: &RingContext, extra: &[&str], order: MonomialOrder) -> Result<RingContext> {
    let mut names: Vec<String> = ring.names().to_vec();
    for e in extra {
        if ring.index_of(e).is_some() {
            return Err(Error::TagCollision((*e).into()));
        }
        names.push((*e).to_string());
    }
    RingContext::new(names, order)
}

/// I ∩ k[keep], computed with a block elimination basis. `keep` must be a
/// subset of the ring's variables; the result lives in the ring on exactly
/// those variables (original relative order).
pub fn elimination_ideal(ideal: &IdealHandle, keep: &[&str], limits: &Limits) -> Result<IdealHandle> {
    let ring = ideal.ring();
    for k in keep {
        if ring.index_of(k).is_none() {
            return Err(Error::UnknownVariable((*k).into()));
        }
    }
    let kept: Vec<String> = ring
        .names()
        .iter()
        .filter(|n| keep.contains(&n.as_str()))
        .cloned()
        .collect();
    let eliminated: Vec<String> =
        ring.names().iter().filter(|n| !keep.contains(&n.as_str())).cloned().collect();
    if eliminated.is_empty() {
        return Ok(ideal.clone());
    }
    if kept.is_empty() {
        return Err(Error::Other("cannot eliminate every variable".into()));
    }
    let split = eliminated.len();
    let mut names = eliminated;
    names.extend(kept.iter().cloned());
    let work = RingContext::new(names, MonomialOrder::Block { split })?;
    let gens: Result<Vec<Polynomial>> =
        ideal.generators().iter().map(|g| g.into_ring(&work)).collect();
    let work_ideal = IdealHandle::new(&work, gens?);
    let gb = work_ideal.groebner_basis_with_limits(MonomialOrder::Block { split }, limits)?;
    let keep_order = match ring.default_order() {
        MonomialOrder::Lex => MonomialOrder::Lex,
        _ => MonomialOrder::GrevLex,
    };
    let keep_ring = RingContext::new(kept, keep_order)?;
    let mut out = Vec::new();
    for g in gb.iter() {
        if g.support().iter().all(|&i| i >= split) {
            out.push(g.into_ring(&keep_ring)?);
        }
    }
    Ok(IdealHandle::new(&keep_ring, out))
}

/// Like `elimination_ideal` but mapping the contraction back into the
/// original ring (for intersections/saturations that stay in place).
fn eliminate_in_place(
    ring: &RingContext,
    work: &RingContext,
    split: usize,
    gens: Vec<Polynomial>,
    limits: &Limits,
) -> Result<IdealHandle> {
    let work_ideal = IdealHandle::new(work, gens);
    let gb = work_ideal.groebner_basis_with_limits(MonomialOrder::Block { split }, limits)?;
    let mut out = Vec::new();
    for g in gb.iter() {
        if g.support().iter().all(|&i| i >= split) {
            out.push(g.into_ring(ring)?);
        }
    }
    Ok(IdealHandle::new(ring, out))
}

/// I ∩ J via the tag-variable trick: eliminate t from t·I + (1−t)·J.
pub fn ideal_intersection(a: &IdealHandle, b: &IdealHandle, limits: &Limits) -> Result<IdealHandle> {
    if !a.ring().same_ring(b.ring()) {
        return Err(Error::RingMismatch(a.ring().describe(), b.ring().describe()));
    }
    let ring = a.ring();
    let mut names = vec!["@t".to_string()];
    names.extend(ring.names().iter().cloned());
    let work = RingContext::new(names, MonomialOrder::Block { split: 1 })?;
    let t = Polynomial::var(&work, "@t")?;
    let one_minus_t = Polynomial::one(&work).sub(&t)?;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(g.into_ring(&work)?.mul(&t)?);
    }
    for g in b.generators() {
        gens.push(g.into_ring(&work)?.mul(&one_minus_t)?);
    }
    eliminate_in_place(ring, &work, 1, gens, limits)
}

/// Saturation I : f^∞ via a Rabinowitsch variable: eliminate t from
/// I + (1 − t·f).
pub fn saturation(ideal: &IdealHandle, f: &Polynomial, limits: &Limits) -> Result<IdealHandle> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if f.is_constant() {
        return Ok(ideal.clone());
    }
    let ring = ideal.ring();
    let mut names = vec!["@t".to_string()];
    names.extend(ring.names().iter().cloned());
    let work = RingContext::new(names, MonomialOrder::Block { split: 1 })?;
    let t = Polynomial::var(&work, "@t")?;
    let rabinowitsch = Polynomial::one(&work).sub(&t.mul(&f.into_ring(&work)?)?)?;
    let mut gens: Vec<Polynomial> = Vec::new();
    for g in ideal.generators() {
        gens.push(g.into_ring(&work)?);
    }
    gens.push(rabinowitsch);
    eliminate_in_place(ring, &work, 1, gens, limits)
}

/// Colon ideal I : f = (I ∩ (f)) / f.
pub fn colon_ideal(ideal: &IdealHandle, f: &Polynomial, limits: &Limits) -> Result<IdealHandle> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let principal = IdealHandle::new(f.ring(), vec![f.clone()]);
    let meet = ideal_intersection(ideal, &principal, limits)?;
    let gens: Result<Vec<Polynomial>> =
        meet.generators().iter().map(|g| g.exact_div(f)).collect();
    Ok(IdealHandle::new(ideal.ring(), gens?))
}

/// f ∈ √I, decided by the Rabinowitsch trick (no elimination needed: the
/// extended ideal is the unit ideal iff f vanishes on V(I)).
pub fn in_radical(ideal: &IdealHandle, f: &Polynomial, limits: &Limits) -> Result<bool> {
    if f.is_zero() {
        return Ok(ideal.is_zero_ideal() || !ideal.is_unit_ideal()?);
    }
    let ring = ideal.ring();
    let mut names = vec!["@t".to_string()];
    names.extend(ring.names().iter().cloned());
    let work = RingContext::new(names, MonomialOrder::GrevLex)?;
    let t = Polynomial::var(&work, "@t")?;
    let mut gens: Vec<Polynomial> = Vec::new();
    for g in ideal.generators() {
        gens.push(g.into_ring(&work)?);
    }
    gens.push(Polynomial::one(&work).sub(&t.mul(&f.into_ring(&work)?)?)?);
    let h = IdealHandle::new(&work, gens);
    let gb = h.groebner_basis_with_limits(MonomialOrder::GrevLex, limits)?;
    Ok(gb.len() == 1 && gb[0].is_constant())
}

/// lcm(p, q): the generator of the principal ideal (p) ∩ (q), normalized to
/// an integer-primitive polynomial with positive leading coefficient.
pub fn multivariate_lcm(p: &Polynomial, q: &Polynomial, limits: &Limits) -> Result<Polynomial> {
    if p.is_zero() || q.is_zero() {
        return Ok(Polynomial::zero(p.ring()));
    }
    let a = IdealHandle::new(p.ring(), vec![p.clone()]);
    let b = IdealHandle::new(q.ring(), vec![q.clone()]);
    let meet = ideal_intersection(&a, &b, limits)?;
    let gb = meet.groebner_basis(p.ring().default_order())?;
    debug_assert_eq!(gb.len(), 1, "intersection of principal ideals must be principal");
    Ok(gb[0].primitive_part())
}

/// gcd up to a rational unit, via lcm = generator of (p) ∩ (q) and exact
/// division. gcd(p, 0) = p.
pub fn multivariate_gcd(p: &Polynomial, q: &Polynomial, limits: &Limits) -> Result<Polynomial> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::Other("gcd(0, 0) is undefined".into()));
    }
    if p.is_zero() {
        return Ok(q.primitive_part());
    }
    if q.is_zero() {
        return Ok(p.primitive_part());
    }
    let lcm = multivariate_lcm(p, q, limits)?;
    let prod = p.mul(q)?;
    Ok(prod.exact_div(&lcm)?.primitive_part())
}

/// Monomials outside the leading-term ideal, when finitely many (i.e. when
/// the ideal is zero-dimensional). Sorted ascending by degree then position.
pub fn quotient_basis(ideal: &IdealHandle, limits: &Limits) -> Result<Option<Vec<Monomial>>> {
    let ring = ideal.ring();
    let ord = ring.default_order();
    let gb = ideal.groebner_basis_with_limits(ord, limits)?;
    if gb.is_empty() {
        return Ok(None); // the zero ideal: infinite quotient
    }
    let lts: Vec<Monomial> = gb
        .iter()
        .map(|g| g.leading_term(ord).map(|(m, _)| m.clone()).unwrap())
        .collect();
    let n = ring.nvars();
    // zero-dimensional iff every variable has a pure-power leading term
    let mut bounds = vec![0u16; n];
    for v in 0..n {
        let mut found = None;
        for m in &lts {
            if m.support().all(|i| i == v) {
                let e = m.exponent(v);
                found = Some(found.map_or(e, |f: u16| f.min(e)));
            }
        }
        match found {
            Some(e) => bounds[v] = e,
            None => return Ok(None),
        }
    }
    let mut basis = Vec::new();
    let mut current = vec![0u16; n];
    loop {
        let m = Monomial::from_exponents(&current);
        if !lts.iter().any(|lt| lt.divides(&m)) {
            basis.push(m);
        }
        // odometer over the box [0, bounds)
        let mut k = n;
        loop {
            if k == 0 {
                let mut out = basis;
                out.sort_by(|a, b| {
                    a.total_degree().cmp(&b.total_degree()).then_with(|| a.cmp(b))
                });
                return Ok(Some(out));
            }
            k -= 1;
            if bounds[k] == 0 {
                continue;
            }
            current[k] += 1;
            if current[k] < bounds[k] {
                break;
            }
            current[k] = 0;
        }
    }
}

/// Vector-space dimension of the quotient (count of standard monomials), or
/// `None` when the ideal is not zero-dimensional.
pub fn zero_dim_degree(ideal: &IdealHandle, limits: &Limits) -> Result<Option<usize>> {
    Ok(quotient_basis(ideal, limits)?.map(|b| b.len()))
}

/// Krull dimension of the quotient ring (dimension of the variety), computed
/// from the leading-term ideal as the largest set of variables containing no
/// leading monomial's support. `None` for the unit ideal.
pub fn dimension(ideal: &IdealHandle, limits: &Limits) -> Result<Option<usize>> {
    let ring = ideal.ring();
    let ord = ring.default_order();
    let gb = ideal.groebner_basis_with_limits(ord, limits)?;
    if gb.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Ok(None);
    }
    if gb.is_empty() {
        return Ok(Some(ring.nvars()));
    }
    let lts: Vec<Monomial> = gb
        .iter()
        .map(|g| g.leading_term(ord).map(|(m, _)| m.clone()).unwrap())
        .collect();
    let n = ring.nvars();
    for size in (0..=n).rev() {
        // subsets of the variables, largest first
        let mut found = false;
        let mut subset: Vec<usize> = (0..size).collect();
        'subsets: loop {
            let independent = lts.iter().all(|m| {
                let mut support = m.support();
                !support.all(|i| subset.contains(&i))
            });
            if independent {
                found = true;
                break 'subsets;
            }
            // next combination
            let mut k = size;
            loop {
                if k == 0 {
                    break 'subsets;
                }
                k -= 1;
                if subset[k] < n - (size - k) {
                    subset[k] += 1;
                    for l in k + 1..size {
                        subset[l] = subset[l - 1] + 1;
                    }
                    continue 'subsets;
                }
            }
        }
        if found {
            return Ok(Some(size));
        }
    }
    Ok(Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ring3() -> RingContext {
        RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
    }

    fn p(r: &RingContext, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    fn ideal(r: &RingContext, gens: &[&str]) -> IdealHandle {
        IdealHandle::new(r, gens.iter().map(|s| p(r, s)).collect())
    }

    #[test]
    fn trivial_bases() {
        let r = ring3();
        let i = ideal(&r, &["x"]);
        let gb = i.groebner_basis(MonomialOrder::Lex).unwrap();
        assert_eq!(gb.as_slice(), &[p(&r, "x")]);
        let z = IdealHandle::zero(&r);
        assert!(z.groebner_basis(MonomialOrder::Lex).unwrap().is_empty());
    }

    #[test]
    fn already_a_basis() {
        // all s-polynomials reduce to zero by hand
        let r = RingContext::new(vec!["x", "z", "t"], MonomialOrder::Lex).unwrap();
        let i = ideal(&r, &["x", "z^2 - t"]);
        let gb = i.groebner_basis(MonomialOrder::Lex).unwrap();
        assert_eq!(gb.as_slice(), &[p(&r, "x"), p(&r, "z^2 - t")]);
    }

    #[test]
    fn normal_forms() {
        let r = ring3();
        let i = ideal(&r, &["x"]);
        assert!(i.normal_form(&p(&r, "x^2*y"), MonomialOrder::Lex).unwrap().is_zero());
        let r2 = RingContext::new(vec!["x", "z", "t"], MonomialOrder::Lex).unwrap();
        let j = ideal(&r2, &["x", "z^2 - t"]);
        assert!(j.normal_form(&p(&r2, "z^2 - t"), MonomialOrder::Lex).unwrap().is_zero());
        assert_eq!(j.normal_form(&p(&r2, "z"), MonomialOrder::Lex).unwrap(), p(&r2, "z"));
    }

    #[test]
    fn elimination_examples() {
        let limits = Limits::default();
        let r = RingContext::new(vec!["x", "z", "t"], MonomialOrder::Lex).unwrap();
        let i = ideal(&r, &["x", "z^2 - t"]);
        let e = elimination_ideal(&i, &["z", "t"], &limits).unwrap();
        let kr = e.ring().clone();
        assert!(e.equals(&ideal(&kr, &["z^2 - t"])).unwrap());

        let same = elimination_ideal(&i, &["x", "z", "t"], &limits).unwrap();
        assert!(same.equals(&i).unwrap());
    }

    #[test]
    fn elimination_matches_resultant_oracle() {
        // Res_x(xz - y^2, x^5 - 1) = -(y^10 - z^5) up to sign
        let limits = Limits::default();
        let r = ring3();
        let i = ideal(&r, &["x*z - y^2", "x^5 - 1"]);
        let e = elimination_ideal(&i, &["y", "z"], &limits).unwrap();
        let kr = e.ring().clone();
        let expected = ideal(&kr, &["y^10 - z^5"]);
        assert!(e.equals(&expected).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let limits = Limits::default();
        let r = ring3();
        let a = ideal(&r, &["x"]);
        let b = ideal(&r, &["z"]);
        assert!(ideal_intersection(&a, &b, &limits).unwrap().equals(&ideal(&r, &["x*z"])).unwrap());

        let c = ideal(&r, &["x^2"]);
        assert!(ideal_intersection(&c, &a, &limits).unwrap().equals(&c).unwrap());

        let xy = ideal(&r, &["x", "y"]);
        let got = ideal_intersection(&xy, &b, &limits).unwrap();
        assert!(got.equals(&ideal(&r, &["x*z", "y*z"])).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let limits = Limits::default();
        let r = ring3();
        // (x^2, xy) contains a power of x, so the saturation is the unit
        // ideal; the single colon ideal is (x, y).
        let i = ideal(&r, &["x^2", "x*y"]);
        let s = saturation(&i, &p(&r, "x"), &limits).unwrap();
        assert!(s.is_unit_ideal().unwrap());
        assert!(colon_ideal(&i, &p(&r, "x"), &limits)
            .unwrap()
            .equals(&ideal(&r, &["x", "y"]))
            .unwrap());
        // saturation of an f-torsion-free ideal: idempotence and containment
        let j = ideal(&r, &["x*y", "x*z"]);
        let sj = saturation(&j, &p(&r, "x"), &limits).unwrap();
        assert!(sj.equals(&ideal(&r, &["y", "z"])).unwrap());
        let sj2 = saturation(&sj, &p(&r, "x"), &limits).unwrap();
        assert!(sj2.equals(&sj).unwrap());
        assert!(sj.contains_ideal(&j).unwrap());
        // saturating by a unit is the identity
        assert!(saturation(&j, &p(&r, "1"), &limits).unwrap().equals(&j).unwrap());
    }

    #[test]
    fn saturation_by_nonzerodivisor_is_identity() {
        let limits = Limits::default();
        let r = RingContext::new(vec!["x", "z", "t", "Y"], MonomialOrder::GrevLex).unwrap();
        let i = ideal(&r, &["x*Y - (z^2 - t)"]);
        let s = saturation(&i, &p(&r, "x"), &limits).unwrap();
        assert!(s.equals(&ideal(&r, &["x*Y - z^2 + t"])).unwrap());
    }

    #[test]
    fn gcd_examples() {
        let limits = Limits::default();
        let r = ring3();
        assert_eq!(multivariate_gcd(&p(&r, "2*z"), &p(&r, "x^2"), &limits).unwrap(), p(&r, "1"));
        assert_eq!(multivariate_gcd(&p(&r, "x^2*y"), &p(&r, "0"), &limits).unwrap(), p(&r, "x^2*y"));
        assert_eq!(
            multivariate_gcd(&p(&r, "x^2*y"), &p(&r, "x*y^2"), &limits).unwrap(),
            p(&r, "x*y")
        );
        // gcd * lcm = product up to a rational unit
        let a = p(&r, "x^2 - y^2");
        let b = p(&r, "x^2 + 2*x*y + y^2");
        let g = multivariate_gcd(&a, &b, &limits).unwrap();
        let l = multivariate_lcm(&a, &b, &limits).unwrap();
        let prod = a.mul(&b).unwrap().primitive_part();
        assert_eq!(g.mul(&l).unwrap().primitive_part(), prod);
        assert_eq!(g, p(&r, "x + y"));
    }

    #[test]
    fn zero_dim_degrees() {
        let limits = Limits::default();
        let r = ring3();
        let i = ideal(&r, &["x", "z^2 - 1", "y - 3"]);
        assert_eq!(zero_dim_degree(&i, &limits).unwrap(), Some(2));
        let point = ideal(&r, &["x", "y", "z"]);
        assert_eq!(zero_dim_degree(&point, &limits).unwrap(), Some(1));
        let r2 = RingContext::new(vec!["x", "y"], MonomialOrder::GrevLex).unwrap();
        let line = ideal(&r2, &["x"]);
        assert_eq!(zero_dim_degree(&line, &limits).unwrap(), None);
    }

    #[test]
    fn dimensions() {
        let limits = Limits::default();
        let r = ring3();
        assert_eq!(dimension(&ideal(&r, &["x"]), &limits).unwrap(), Some(2));
        assert_eq!(dimension(&ideal(&r, &["x", "y"]), &limits).unwrap(), Some(1));
        assert_eq!(dimension(&ideal(&r, &["x", "y", "z"]), &limits).unwrap(), Some(0));
        assert_eq!(dimension(&ideal(&r, &["1"]), &limits).unwrap(), None);
        assert_eq!(dimension(&IdealHandle::zero(&r), &limits).unwrap(), Some(3));
    }

    #[test]
    fn radical_membership() {
        let limits = Limits::default();
        let r = ring3();
        let i = ideal(&r, &["x^2", "y^3"]);
        assert!(in_radical(&i, &p(&r, "x"), &limits).unwrap());
        assert!(in_radical(&i, &p(&r, "x + y"), &limits).unwrap());
        assert!(!in_radical(&i, &p(&r, "z"), &limits).unwrap());
    }

    #[test]
    fn unit_ideal_detection() {
        let r = ring3();
        assert!(ideal(&r, &["x", "1 + x"]).is_unit_ideal().unwrap());
        assert!(!ideal(&r, &["x", "y"]).is_unit_ideal().unwrap());
    }

    #[test]
    fn degree_guardrail_trips() {
        let r = RingContext::new(vec!["x", "y"], MonomialOrder::GrevLex).unwrap();
        let i = ideal(&r, &["x^40 - y", "y^40 - x"]);
        let tight = Limits::default().with_max_degree(16);
        assert!(matches!(
            i.groebner_basis_with_limits(MonomialOrder::Lex, &tight),
            Err(Error::LimitExceeded(_))
        ));
    }
}
