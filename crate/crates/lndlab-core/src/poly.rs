//! Exact multivariate polynomials over arbitrary-precision rationals.
//!
//! Terms are kept sorted in descending order of the ring's default monomial
//! order with no zero coefficients, so equality, hashing and display are
//! canonical.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Monomial, MonomialOrder, RingContext};

/// Exact rational scalar: normalized quotient of arbitrary-precision integers.
pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: RingContext,
    /// Sorted descending by `ring.default_order()`; no zero coefficients.
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(ring: &RingContext) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingContext, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
    }

    pub fn one(ring: &RingContext) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: &RingContext, name: &str) -> Result<Self> {
        let idx = ring.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(Self::var_index(ring, idx))
    }

    pub fn var_index(ring: &RingContext, index: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(ring.nvars(), index, 1), Rational::one())],
        }
    }

    pub fn from_terms(ring: &RingContext, terms: Vec<(Monomial, Rational)>) -> Self {
        let mut p = Polynomial { ring: ring.clone(), terms };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let ord = self.ring.default_order();
        self.terms.sort_unstable_by(|a, b| ord.compare(&b.0, &a.0));
        let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.drain(..) {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += c;
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The constant value when `is_constant`, else `None`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max()
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for i in m.support() {
                seen[i] = true;
            }
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
    }

    pub fn leading_term(&self, ord: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        if ord == self.ring.default_order() {
            return self.terms.first().map(|(m, c)| (m, c));
        }
        self.terms
            .iter()
            .max_by(|a, b| ord.compare(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if !self.ring.same_ring(&other.ring) {
            return Err(Error::RingMismatch(self.ring.describe(), other.ring.describe()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let ord = self.ring.default_order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match ord.compare(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { -c.clone() } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let (m, a) = &self.terms[i];
                    let b = &other.terms[j].1;
                    let c = if negate { a - b } else { a + b };
                    if !c.is_zero() {
                        out.push((m.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (m, c) in &other.terms[j..] {
            out.push((m.clone(), if negate { -c.clone() } else { c.clone() }));
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(mm, k)| (mm.mul(m), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Self::zero(&self.ring);
        for (m, c) in &small.terms {
            acc = acc.merge(&large.mul_term(m, c), false);
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact polynomial division; fails with `InexactDivision` when `self`
    /// is not a multiple of `divisor`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ord = self.ring.default_order();
        let (dm, dc) = divisor.leading_term(ord).map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Rational)> = Vec::new();
        while !rem.is_zero() {
            let (lm, lc) = rem.leading_term(ord).map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let qm = lm.checked_div(&dm).ok_or_else(|| Error::InexactDivision {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
            })?;
            let qc = lc / &dc;
            rem = rem.merge(&divisor.mul_term(&qm, &qc), true);
            quot.push((qm, qc));
        }
        Ok(Polynomial::from_terms(&self.ring, quot))
    }

    /// Formal partial derivative with respect to the named variable.
    pub fn partial_derivative(&self, var: &str) -> Result<Polynomial> {
        let idx = self
            .ring
            .index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.into()))?;
        Ok(self.partial_derivative_index(idx))
    }

    pub fn partial_derivative_index(&self, idx: usize) -> Polynomial {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(idx);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[idx] = e - 1;
            terms.push((Monomial::from_exponents(&exps), c * rat_int(e as i64)));
        }
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Simultaneous substitution. Every assigned variable must exist in this
    /// ring; unassigned variables must exist (by name) in the target ring.
    /// With an empty assignment the polynomial is returned unchanged.
    pub fn substitute(&self, assignment: &[(String, Polynomial)]) -> Result<Polynomial> {
        if assignment.is_empty() {
            return Ok(self.clone());
        }
        let target = assignment[0].1.ring().clone();
        for (_, img) in assignment {
            if !img.ring().same_ring(&target) {
                return Err(Error::RingMismatch(img.ring().describe(), target.describe()));
            }
        }
        // image of every source variable in the target ring
        let mut images: Vec<Polynomial> = Vec::with_capacity(self.ring.nvars());
        for i in 0..self.ring.nvars() {
            let name = self.ring.name(i);
            if let Some((_, img)) = assignment.iter().find(|(n, _)| n == name) {
                images.push(img.clone());
            } else {
                images.push(Polynomial::var(&target, name)?);
            }
        }
        for (name, _) in assignment {
            if self.ring.index_of(name).is_none() {
                return Err(Error::UnknownVariable(name.clone()));
            }
        }
        // powers are cached per variable as needed
        let mut pow_cache: Vec<Vec<Polynomial>> =
            images.iter().map(|img| vec![Polynomial::one(&target), img.clone()]).collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut pow_cache[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[i])?;
                    cache.push(next);
                }
                t = t.mul(&cache[e as usize])?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Evaluate at rational values for all variables.
    pub fn evaluate(&self, values: &[Rational]) -> Result<Rational> {
        if values.len() != self.ring.nvars() {
            return Err(Error::Other("evaluation needs one value per variable".into()));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t *= &values[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Rename this polynomial into another ring that contains (at least) all
    /// variables in `self`'s support, matched by name.
    pub fn into_ring(&self, target: &RingContext) -> Result<Polynomial> {
        if self.ring.same_ring(target) {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> =
            (0..self.ring.nvars()).map(|i| target.index_of(self.ring.name(i))).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; target.nvars()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = e,
                    None => return Err(Error::UnknownVariable(self.ring.name(i).into())),
                }
            }
            terms.push((Monomial::from_exponents(&exps), c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Multiply by the unique positive rational that makes the coefficients
    /// coprime integers, then flip signs so the leading coefficient under the
    /// ring's default order is positive. Returns the normalized polynomial.
    pub fn primitive_part(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let factor = BigRational::new(den_lcm, num_gcd);
        let mut p = self.scale(&factor);
        if p.terms[0].1.is_negative() {
            p = p.neg();
        }
        p
    }

    /// Monic under the given order (unit normalization over the field).
    pub fn monic(&self, ord: MonomialOrder) -> Polynomial {
        match self.leading_term(ord) {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = Rational::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    /// Canonical, order-stable comparison used for deterministic sorting of
    /// polynomial lists (not a ring-theoretic notion).
    pub fn canonical_cmp(&self, other: &Polynomial) -> Ordering {
        let da = self.total_degree().unwrap_or(0);
        let db = other.total_degree().unwrap_or(0);
        da.cmp(&db)
            .then_with(|| self.terms.len().cmp(&other.terms.len()))
            .then_with(|| {
                for ((ma, ca), (mb, cb)) in self.terms.iter().zip(other.terms.iter()) {
                    let c = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (vi, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e == 1 {
                    factors.push(self.ring.name(vi).to_string());
                } else {
                    factors.push(format!("{}^{}", self.ring.name(vi), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn ring() -> RingContext {
        RingContext::new(vec!["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
    }

    fn p(r: &RingContext, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    #[test]
    fn binomial_square() {
        let r = ring();
        let xy = p(&r, "x + y");
        let sq = xy.mul(&xy).unwrap();
        assert_eq!(sq, p(&r, "x^2 + 2*x*y + y^2"));
    }

    #[test]
    fn example_f_from_products() {
        let r = ring();
        let f = p(&r, "x").mul(&p(&r, "z")).unwrap().sub(&p(&r, "y").mul(&p(&r, "y")).unwrap()).unwrap();
        assert_eq!(f, p(&r, "x*z - y^2"));
    }

    #[test]
    fn exact_division_by_monomial() {
        let r = ring();
        let q = p(&r, "x^2*y + z^2*x^2").exact_div(&p(&r, "x^2")).unwrap();
        assert_eq!(q, p(&r, "y + z^2"));
        assert!(matches!(
            p(&r, "x + 1").exact_div(&p(&r, "x^2")),
            Err(Error::InexactDivision { .. })
        ));
    }

    #[test]
    fn derivative_examples() {
        let r = ring();
        let t = p(&r, "x^2*y + z^2");
        assert_eq!(t.partial_derivative("z").unwrap(), p(&r, "2*z"));
        assert_eq!(p(&r, "5").partial_derivative("x").unwrap(), Polynomial::zero(&r));
    }

    #[test]
    fn derivative_product_rule_oracle() {
        // d/dR of G^3 - (R^2+F^3)^2 R, computed two ways
        let r = RingContext::new(vec!["F", "G", "R"], MonomialOrder::GrevLex).unwrap();
        let g = p(&r, "G^3 - (R^2 + F^3)^2 * R");
        let direct = g.partial_derivative("R").unwrap();
        let oracle = p(&r, "-(R^2+F^3)^2 - 4*R^2*(R^2+F^3)");
        assert_eq!(direct, oracle);
    }

    #[test]
    fn substitution_examples() {
        let r = ring();
        let f = p(&r, "x*z - y^2");
        let zero = Polynomial::zero(&r);
        let got = f.substitute(&[("x".into(), zero)]).unwrap();
        assert_eq!(got, p(&r, "-y^2"));

        let t = p(&r, "x^2*y + z^2");
        let v = t
            .substitute(&[
                ("x".into(), Polynomial::constant(&r, rat_int(0))),
                ("y".into(), Polynomial::constant(&r, rat_int(1))),
                ("z".into(), Polynomial::constant(&r, rat_int(2))),
            ])
            .unwrap();
        assert_eq!(v, Polynomial::constant(&r, rat_int(4)));
        assert_eq!(t.substitute(&[]).unwrap(), t);
    }

    #[test]
    fn primitive_part_normalizes() {
        let r = ring();
        let q = p(&r, "2/3*x^2 - 4/3*y");
        let prim = q.primitive_part();
        assert_eq!(prim, p(&r, "x^2 - 2*y"));
        let neg = p(&r, "-x - y").primitive_part();
        assert_eq!(neg, p(&r, "x + y"));
    }

    #[test]
    fn display_round_trip_is_fixed_point() {
        let r = ring();
        for s in ["x^2*y + z^2", "-x + 1/2", "x*z - y^2", "0", "3"] {
            let q = p(&r, s);
            let shown = q.to_string();
            assert_eq!(p(&r, &shown), q);
            assert_eq!(p(&r, &shown).to_string(), shown);
        }
    }
}
