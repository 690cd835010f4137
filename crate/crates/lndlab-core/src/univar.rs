//! Univariate machinery: Yun squarefree decomposition, irreducible
//! factorization over the rationals (Berlekamp mod p, Hensel lifting,
//! Zassenhaus recombination), and the content/pseudo-remainder toolkit for
//! univariate polynomials with polynomial coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poly::{Polynomial, Rational};
use crate::ring::RingContext;

/// Squarefree decomposition plus rational irreducible factorization.
/// The product `content * prod factors[i].0 ^ factors[i].1` reconstructs the
/// input; factors are monic and pairwise distinct.
#[derive(Debug, Clone)]
pub struct UnivariateFactorization {
    pub variable: Option<String>,
    pub content: Rational,
    pub factors: Vec<(Polynomial, u32)>,
}

impl UnivariateFactorization {
    /// Number of distinct roots over the algebraic closure: the degree of
    /// the squarefree part (every irreducible rational factor is separable).
    pub fn geometric_root_count(&self) -> u32 {
        self.factors
            .iter()
            .map(|(f, _)| f.total_degree().unwrap_or(0))
            .sum()
    }

    /// One (degree, multiplicity) entry per irreducible factor.
    pub fn multiplicity_profile(&self) -> Vec<(u32, u32)> {
        self.factors
            .iter()
            .map(|(f, m)| (f.total_degree().unwrap_or(0), *m))
            .collect()
    }

    pub fn reconstruct(&self, ring: &RingContext) -> Result<Polynomial> {
        let mut acc = Polynomial::constant(ring, self.content.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m)?)?;
        }
        Ok(acc)
    }
}

/// Factor a univariate polynomial given as dense coefficients (constant
/// term first); the factors come back in a fresh one-variable ring.
pub fn factor_dense(coefficients: Vec<Rational>, variable: &str) -> Result<UnivariateFactorization> {
    let ring = RingContext::new(vec![variable], crate::ring::MonomialOrder::GrevLex)?;
    let p = from_dense(&ring, 0, &DenseQ(coefficients).trim());
    univariate_squarefree_factor(&p)
}

/// Squarefree decomposition and full rational factorization of a univariate
/// polynomial (supported on at most one variable of its ring).
pub fn univariate_squarefree_factor(u: &Polynomial) -> Result<UnivariateFactorization> {
    if u.is_zero() {
        return Err(Error::Other("cannot factor the zero polynomial".into()));
    }
    let support = u.support();
    if support.len() > 1 {
        let names: Vec<&str> = support.iter().map(|&i| u.ring().name(i)).collect();
        return Err(Error::NotUnivariate(names.join(",")));
    }
    if support.is_empty() {
        return Ok(UnivariateFactorization {
            variable: None,
            content: u.as_constant().unwrap(),
            factors: Vec::new(),
        });
    }
    let var = support[0];
    let dense = to_dense(u, var);
    let (content, monic) = dense.monic();
    let mut factors: Vec<(DenseQ, u32)> = Vec::new();
    for (part, mult) in yun_squarefree(&monic) {
        if part.degree() == 0 {
            continue;
        }
        for irr in factor_squarefree_rational(&part)? {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0 .0.cmp(&b.0 .0))
            .then_with(|| a.1.cmp(&b.1))
    });
    Ok(UnivariateFactorization {
        variable: Some(u.ring().name(var).to_string()),
        content,
        factors: factors
            .into_iter()
            .map(|(f, m)| (from_dense(u.ring(), var, &f), m))
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// dense representation over Q
// ---------------------------------------------------------------------------

/// Dense coefficient vector, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct DenseQ(pub Vec<Rational>);

impl DenseQ {
    pub fn zero() -> Self {
        DenseQ(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// (leading coefficient pulled out, monic polynomial)
    pub fn monic(&self) -> (Rational, DenseQ) {
        if self.is_zero() {
            return (Rational::zero(), DenseQ::zero());
        }
        let lc = self.lc();
        let inv = Rational::one() / lc.clone();
        (lc, DenseQ(self.0.iter().map(|c| c * &inv).collect()))
    }

    pub fn derivative(&self) -> DenseQ {
        if self.0.len() <= 1 {
            return DenseQ::zero();
        }
        DenseQ(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as i64 + 1)))
                .collect(),
        )
        .trim()
    }

    pub fn divrem(&self, divisor: &DenseQ) -> (DenseQ, DenseQ) {
        assert!(!divisor.is_zero());
        let mut rem = self.0.clone();
        let dlc = divisor.lc();
        let dd = divisor.degree();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd || (rem.len() == dd + 1 && dd == 0) {
            if rem.is_empty() {
                break;
            }
            let shift = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &dlc;
            if q.is_zero() {
                rem.pop();
                continue;
            }
            for (i, c) in divisor.0.iter().enumerate() {
                let idx = shift + i;
                let delta = c * &q;
                rem[idx] -= delta;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            quot[shift] = q;
            while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
                rem.pop();
            }
        }
        (DenseQ(quot).trim(), DenseQ(rem).trim())
    }

    pub fn gcd(&self, other: &DenseQ) -> DenseQ {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().1
        }
    }
}

pub(crate) fn to_dense(p: &Polynomial, var: usize) -> DenseQ {
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exponent(var) as usize] = c.clone();
    }
    DenseQ(out).trim()
}

pub(crate) fn from_dense(ring: &RingContext, var: usize, d: &DenseQ) -> Polynomial {
    let mut terms = Vec::new();
    for (i, c) in d.0.iter().enumerate() {
        if !c.is_zero() {
            terms.push((crate::ring::Monomial::var(ring.nvars(), var, i as u16), c.clone()));
        }
    }
    Polynomial::from_terms(ring, terms)
}

/// Yun's algorithm: monic input, returns (squarefree part, multiplicity)
/// pairs whose powers multiply back to the input.
fn yun_squarefree(f: &DenseQ) -> Vec<(DenseQ, u32)> {
    if f.degree() == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let g = f.gcd(&df);
    if g.degree() == 0 {
        return vec![(f.clone(), 1)];
    }
    let mut out = Vec::new();
    let (mut w, _) = f.divrem(&g);
    let (mut y, _) = df.divrem(&g);
    let mut i = 1u32;
    loop {
        // z = y - w'
        let dw = w.derivative();
        let mut z = y.clone();
        let max = z.0.len().max(dw.0.len());
        z.0.resize(max, Rational::zero());
        for (k, c) in dw.0.iter().enumerate() {
            z.0[k] -= c;
        }
        let z = z.trim();
        if z.is_zero() {
            if w.degree() > 0 {
                out.push((w, i));
            }
            break;
        }
        let d = w.gcd(&z);
        if d.degree() > 0 {
            out.push((d.clone(), i));
        }
        w = w.divrem(&d).0;
        y = z.divrem(&d).0;
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// factorization over Z / Q
// ---------------------------------------------------------------------------

/// Integer coefficient vector, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
struct DenseZ(Vec<BigInt>);

impl DenseZ {
    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &BigInt {
        self.0.last().unwrap()
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    fn primitive(mut self) -> Self {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        if g.is_zero() || g.is_one() {
            return self;
        }
        for c in self.0.iter_mut() {
            *c = &*c / &g;
        }
        self
    }

    fn height(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    fn to_q(&self) -> DenseQ {
        DenseQ(self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect()).trim()
    }
}

fn q_to_z(f: &DenseQ) -> (Rational, DenseZ) {
    // factor = lcm of denominators / gcd of numerators; f = (1/factor) * Z-poly
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for c in &f.0 {
        den_lcm = den_lcm.lcm(c.denom());
        num_gcd = num_gcd.gcd(&c.numer().abs());
    }
    let scale = BigRational::new(den_lcm, num_gcd.clone());
    let mut out = Vec::with_capacity(f.0.len());
    for c in &f.0 {
        let v = c * &scale;
        debug_assert!(v.is_integer());
        out.push(v.to_integer());
    }
    (Rational::one() / scale, DenseZ(out).trim())
}

/// Irreducible monic rational factors of a monic squarefree polynomial.
fn factor_squarefree_rational(f: &DenseQ) -> Result<Vec<DenseQ>> {
    let mut out: Vec<DenseQ> = Vec::new();
    let (_, mut z) = q_to_z(f);
    z = z.primitive();
    // pull out a root at zero first so every candidate prime works
    if z.0.first().map(|c| c.is_zero()).unwrap_or(false) {
        out.push(DenseQ(vec![Rational::zero(), Rational::one()]));
        z.0.remove(0);
        z = z.trim();
    }
    if z.degree() >= 1 {
        for g in factor_squarefree_integer(&z)? {
            out.push(g.to_q().monic().1);
        }
    }
    out.sort();
    Ok(out)
}

const SMALL_PRIMES: [u64; 15] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn factor_squarefree_integer(f: &DenseZ) -> Result<Vec<DenseZ>> {
    let n = f.degree();
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    // choose a prime where f stays squarefree with invertible leading coefficient
    let mut chosen: Option<(u64, Vec<ModPoly>)> = None;
    for &p in &SMALL_PRIMES {
        if (f.lc() % p).is_zero() {
            continue;
        }
        let fp = ModPoly::from_dense(f, p).monic();
        let dfp = fp.derivative();
        if dfp.is_zero() {
            continue;
        }
        if fp.gcd(&dfp).degree() != 0 {
            continue;
        }
        let factors = berlekamp(&fp, p);
        chosen = Some((p, factors));
        break;
    }
    let (p, mod_factors) = chosen.ok_or_else(|| {
        Error::Other("no small prime keeps the polynomial squarefree".into())
    })?;
    if mod_factors.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    // lift to p^k beyond twice the Landau-Mignotte bound
    let bound: BigInt = {
        let h = f.height();
        let two = BigInt::from(2);
        let sqrt_n1 = BigInt::from(((n + 1) as f64).sqrt().ceil() as i64);
        sqrt_n1 * two.pow(n as u32 + 1) * h * f.lc().abs()
    };
    let mut pk = BigInt::from(p);
    let mut k = 1u32;
    while pk <= BigInt::from(2) * &bound {
        pk *= p;
        k += 1;
    }
    let lifted = hensel_lift_tree(f, &mod_factors, p, k);
    Ok(recombine(f.clone(), lifted, &pk))
}

/// Zassenhaus recombination: try subsets of modular factors in increasing
/// cardinality, trial-dividing the integer polynomial.
fn recombine(mut f: DenseZ, mut modular: Vec<DenseZpk>, pk: &BigInt) -> Vec<DenseZ> {
    let mut out = Vec::new();
    let mut subset_size = 1usize;
    'outer: while 2 * subset_size <= modular.len() {
        let idxs: Vec<usize> = (0..modular.len()).collect();
        for combo in combinations(&idxs, subset_size) {
            let mut cand = DenseZpk::constant(f.lc().clone(), pk);
            for &i in &combo {
                cand = cand.mul(&modular[i], pk);
            }
            let cand_z = cand.symmetric_with(pk).primitive();
            if cand_z.degree() == 0 {
                continue;
            }
            if let Some(quot) = exact_div_z(&f, &cand_z) {
                out.push(cand_z);
                f = quot;
                let mut keep = Vec::new();
                for (i, m) in modular.into_iter().enumerate() {
                    if !combo.contains(&i) {
                        keep.push(m);
                    }
                }
                modular = keep;
                continue 'outer;
            }
        }
        subset_size += 1;
    }
    if f.degree() >= 1 {
        out.push(f.primitive());
    }
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for rest in combinations(&items[1..], k - 1) {
        let mut v = vec![items[0]];
        v.extend(rest);
        out.push(v);
    }
    out.extend(combinations(&items[1..], k));
    out
}

fn exact_div_z(f: &DenseZ, g: &DenseZ) -> Option<DenseZ> {
    let (q, r) = f.to_q().divrem(&g.to_q());
    if !r.is_zero() {
        return None;
    }
    let mut out = Vec::with_capacity(q.0.len());
    for c in &q.0 {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(DenseZ(out).trim())
}

// --- arithmetic mod p^k -----------------------------------------------------

#[derive(Debug, Clone)]
struct DenseZpk(Vec<BigInt>);

impl DenseZpk {
    fn constant(c: BigInt, pk: &BigInt) -> Self {
        DenseZpk(vec![c.mod_floor(pk)])
    }

    fn from_z(f: &DenseZ, pk: &BigInt) -> Self {
        DenseZpk(f.0.iter().map(|c| c.mod_floor(pk)).collect()).trim()
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    fn mul(&self, other: &DenseZpk, pk: &BigInt) -> DenseZpk {
        if self.0.is_empty() || other.0.is_empty() {
            return DenseZpk(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        for c in out.iter_mut() {
            *c = c.mod_floor(pk);
        }
        DenseZpk(out).trim()
    }

    /// Coefficients in the symmetric range (-pk/2, pk/2].
    fn symmetric_with(&self, pk: &BigInt) -> DenseZ {
        DenseZ(
            self.0
                .iter()
                .map(|c| if c * 2 > *pk { c - pk } else { c.clone() })
                .collect(),
        )
        .trim()
    }
}

/// Multifactor Hensel lifting via a factor tree of two-factor quadratic
/// lifts. `factors` are the monic irreducible factors mod p; the result is
/// the lift of `lc(f) * prod(factors)` to mod p^k (leading factor folded
/// into the first element's leading coefficient handling at recombination).
fn hensel_lift_tree(f: &DenseZ, factors: &[ModPoly], p: u64, k: u32) -> Vec<DenseZpk> {
    let pk = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        return vec![DenseZpk::from_z(&f.clone().primitive(), &pk)];
    }
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    // g = monic product of left; h = lc(f) * product of right (mod p)
    let mut g0 = ModPoly::one(p);
    for m in left {
        g0 = g0.mul(m);
    }
    let mut h0 = ModPoly::constant((f.lc().mod_floor(&BigInt::from(p))).to_u64().unwrap(), p);
    for m in right {
        h0 = h0.mul(m);
    }
    let (g, h) = hensel_lift_pair(f, &g0, &h0, p, k);
    // recurse: g is monic, h carries the leading coefficient
    let g_z = g.symmetric_with(&pk);
    let h_z = h.symmetric_with(&pk);
    let mut out = hensel_lift_tree(&g_z, left, p, k);
    out.extend(hensel_lift_tree(&h_z, right, p, k));
    out
}

/// Quadratic two-factor Hensel lift: from f ≡ g·h (mod p) with g monic and
/// a Bezout identity s·g + t·h ≡ 1 (mod p), to f ≡ g*·h* (mod p^k), where
/// g* stays monic and both factorization and Bezout data double in precision
/// each round.
fn hensel_lift_pair(f: &DenseZ, g0: &ModPoly, h0: &ModPoly, p: u64, k: u32) -> (DenseZpk, DenseZpk) {
    let (s0, t0) = bezout(g0, h0);
    let mut modulus = BigInt::from(p);
    let target = BigInt::from(p).pow(k);
    let mut g = DenseZpk(g0.lift());
    let mut h = DenseZpk(h0.lift());
    let mut s = DenseZpk(s0.lift());
    let mut t = DenseZpk(t0.lift());
    while modulus < target {
        let m2 = &modulus * &modulus;
        // e = f - g h; the correction g += rem(te, g), h += se + quot(te, g) h
        let gh = g.mul(&h, &m2);
        let e = sub_mod(&DenseZpk::from_z(f, &m2), &gh, &m2);
        let te = t.mul(&e, &m2);
        let (q, r) = divrem_monic(&te, &g, &m2);
        let g_new = add_mod(&g, &r, &m2);
        let se = s.mul(&e, &m2);
        let h_new = add_mod(&add_mod(&h, &se, &m2), &q.mul(&h, &m2), &m2);
        // refresh Bezout: b = s g' + t h' - 1; t -= rem(tb, g'),
        // s -= s b + quot(tb, g') h'
        let sg = s.mul(&g_new, &m2);
        let th = t.mul(&h_new, &m2);
        let b = sub_mod(
            &add_mod(&sg, &th, &m2),
            &DenseZpk::constant(BigInt::one(), &m2),
            &m2,
        );
        let tb = t.mul(&b, &m2);
        let (c, d) = divrem_monic(&tb, &g_new, &m2);
        let t_new = sub_mod(&t, &d, &m2);
        let sb = s.mul(&b, &m2);
        let ch = c.mul(&h_new, &m2);
        let s_new = sub_mod(&sub_mod(&s, &sb, &m2), &ch, &m2);
        g = g_new;
        h = h_new;
        s = s_new;
        t = t_new;
        modulus = m2;
    }
    (g, h)
}

fn add_mod(a: &DenseZpk, b: &DenseZpk, m: &BigInt) -> DenseZpk {
    let n = a.0.len().max(b.0.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.0.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.0.iter().enumerate() {
        out[i] += c;
    }
    for c in out.iter_mut() {
        *c = c.mod_floor(m);
    }
    DenseZpk(out).trim()
}

fn sub_mod(a: &DenseZpk, b: &DenseZpk, m: &BigInt) -> DenseZpk {
    let n = a.0.len().max(b.0.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.0.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.0.iter().enumerate() {
        out[i] -= c;
    }
    for c in out.iter_mut() {
        *c = c.mod_floor(m);
    }
    DenseZpk(out).trim()
}

/// Division with remainder by a monic divisor, coefficients mod m.
fn divrem_monic(f: &DenseZpk, g: &DenseZpk, m: &BigInt) -> (DenseZpk, DenseZpk) {
    assert!(g.0.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let dd = g.0.len() - 1;
    let mut rem = f.0.clone();
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let q = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - dd;
        if !q.is_zero() {
            for (i, c) in g.0.iter().enumerate() {
                rem[shift + i] = (&rem[shift + i] - c * &q).mod_floor(m);
            }
            quot[shift] = q;
        }
        debug_assert!(rem.last().unwrap().is_zero());
        rem.pop();
        while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
            rem.pop();
        }
    }
    (DenseZpk(quot).trim(), DenseZpk(rem).trim())
}

// --- arithmetic mod a small prime p ------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct ModPoly {
    p: u64,
    c: Vec<u64>, // lowest degree first, no trailing zeros
}

impl ModPoly {
    fn from_dense(f: &DenseZ, p: u64) -> ModPoly {
        let pp = BigInt::from(p);
        ModPoly {
            p,
            c: f.0.iter().map(|x| x.mod_floor(&pp).to_u64().unwrap()).collect(),
        }
        .trim()
    }

    fn constant(c: u64, p: u64) -> ModPoly {
        ModPoly { p, c: vec![c % p] }.trim()
    }

    fn one(p: u64) -> ModPoly {
        ModPoly::constant(1, p)
    }

    fn x(p: u64) -> ModPoly {
        ModPoly { p, c: vec![0, 1] }
    }

    fn trim(mut self) -> Self {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn lift(&self) -> Vec<BigInt> {
        self.c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = mod_inv(*self.c.last().unwrap(), self.p);
        ModPoly { p: self.p, c: self.c.iter().map(|&x| x * inv % self.p).collect() }
    }

    fn derivative(&self) -> ModPoly {
        if self.c.len() <= 1 {
            return ModPoly { p: self.p, c: Vec::new() };
        }
        ModPoly {
            p: self.p,
            c: self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, &x)| x * ((i as u64 + 1) % self.p) % self.p)
                .collect(),
        }
        .trim()
    }

    fn sub(&self, other: &ModPoly) -> ModPoly {
        let n = self.c.len().max(other.c.len());
        let mut out = vec![0u64; n];
        for (i, &x) in self.c.iter().enumerate() {
            out[i] = x;
        }
        for (i, &x) in other.c.iter().enumerate() {
            out[i] = (out[i] + self.p - x % self.p) % self.p;
        }
        ModPoly { p: self.p, c: out }.trim()
    }

    fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly { p: self.p, c: Vec::new() };
        }
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        ModPoly { p: self.p, c: out }.trim()
    }

    fn scale(&self, k: u64) -> ModPoly {
        ModPoly { p: self.p, c: self.c.iter().map(|&x| x * (k % self.p) % self.p).collect() }
            .trim()
    }

    fn divrem(&self, g: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!g.is_zero());
        let p = self.p;
        let dlc_inv = mod_inv(*g.c.last().unwrap(), p);
        let dd = g.degree();
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let q = rem.last().unwrap() * dlc_inv % p;
            let shift = rem.len() - 1 - dd;
            if q != 0 {
                for (i, &c) in g.c.iter().enumerate() {
                    rem[shift + i] = (rem[shift + i] + p - c * q % p) % p;
                }
            }
            quot[shift] = q;
            debug_assert_eq!(*rem.last().unwrap(), 0);
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (
            ModPoly { p, c: quot }.trim(),
            ModPoly { p, c: rem }.trim(),
        )
    }

    fn rem(&self, g: &ModPoly) -> ModPoly {
        self.divrem(g).1
    }

    fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is prime; Fermat
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Extended Euclid mod p: (s, t) with s·g + t·h = 1.
fn bezout(g: &ModPoly, h: &ModPoly) -> (ModPoly, ModPoly) {
    let p = g.p;
    let (mut r0, mut r1) = (g.clone(), h.clone());
    let (mut s0, mut s1) = (ModPoly::one(p), ModPoly { p, c: Vec::new() });
    let (mut t0, mut t1) = (ModPoly { p, c: Vec::new() }, ModPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    debug_assert_eq!(r0.degree(), 0, "factors must be coprime mod p");
    let inv = mod_inv(r0.c[0], p);
    (s0.scale(inv), t0.scale(inv))
}

/// Berlekamp factorization of a monic squarefree polynomial mod a small
/// prime. Returns monic irreducible factors.
fn berlekamp(f: &ModPoly, p: u64) -> Vec<ModPoly> {
    let n = f.degree();
    if n <= 1 {
        return vec![f.clone()];
    }
    // Frobenius matrix: rows are x^{ip} mod f
    let xp = {
        // x^p mod f by repeated multiplication (p is small)
        let mut acc = ModPoly::one(p);
        let x = ModPoly::x(p);
        for _ in 0..p {
            acc = acc.mul(&x).rem(f);
        }
        acc
    };
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur = ModPoly::one(p);
    for _ in 0..n {
        let mut row = cur.c.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = cur.mul(&xp).rem(f);
    }
    // kernel of (Q - I)^T: vectors v with v(x)^p ≡ v(x) mod f
    let mut mat = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            mat[j][i] = rows[i][j]; // transpose
        }
    }
    for i in 0..n {
        mat[i][i] = (mat[i][i] + p - 1) % p;
    }
    let kernel = nullspace(mat, p);
    let r = kernel.len();
    let mut factors = vec![f.clone()];
    if r == 1 {
        return factors;
    }
    for v in kernel {
        if factors.len() == r {
            break;
        }
        let vp = ModPoly { p, c: v }.trim();
        if vp.degree() == 0 {
            continue;
        }
        let mut next: Vec<ModPoly> = Vec::new();
        for w in factors {
            if w.degree() <= 1 || next.len() + 1 == r {
                next.push(w);
                continue;
            }
            let mut pieces = Vec::new();
            let mut rest = w.clone();
            for c in 0..p {
                if rest.degree() == 0 {
                    break;
                }
                let shifted = vp.sub(&ModPoly::constant(c, p));
                let g = rest.gcd(&shifted);
                if g.degree() >= 1 && g.degree() < rest.degree() {
                    let (q, _) = rest.divrem(&g);
                    pieces.push(g);
                    rest = q;
                }
            }
            if rest.degree() >= 1 {
                pieces.push(rest);
            }
            next.extend(pieces);
        }
        factors = next;
    }
    factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.c.cmp(&b.c)));
    factors
}

/// Basis of the nullspace of `mat` over F_p.
fn nullspace(mut mat: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = mat.len();
    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; n];
    let mut row = 0usize;
    for col in 0..n {
        let mut sel = None;
        for r in row..n {
            if mat[r][col] != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        mat.swap(row, sel);
        let inv = mod_inv(mat[row][col], p);
        for c in 0..n {
            mat[row][c] = mat[row][c] * inv % p;
        }
        for r in 0..n {
            if r != row && mat[r][col] != 0 {
                let k = mat[r][col];
                for c in 0..n {
                    mat[r][c] = (mat[r][c] + p - k * mat[row][c] % p) % p;
                }
            }
        }
        pivot_col_of_row[row] = Some(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.iter().flatten().copied().collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, pc) in pivot_col_of_row.iter().enumerate() {
            if let Some(pc) = pc {
                v[*pc] = (p - mat[r][free] % p) % p;
            }
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// univariate-in-one-variable with polynomial coefficients
// ---------------------------------------------------------------------------

/// Content of `p` seen as univariate in `var`: the gcd of its coefficient
/// polynomials (which live in the other variables).
pub fn content_in(p: &Polynomial, var: usize, limits: &Limits) -> Result<Polynomial> {
    let coeffs = coefficients_in(p, var);
    let mut acc = Polynomial::zero(p.ring());
    for c in coeffs {
        if acc.is_zero() {
            acc = c;
        } else {
            acc = crate::ideal::multivariate_gcd(&acc, &c, limits)?;
        }
        if acc.is_constant() && !acc.is_zero() {
            return Ok(Polynomial::one(p.ring()));
        }
    }
    Ok(acc.primitive_part())
}

/// Coefficient polynomials of `p` in `var`, lowest degree first (zero
/// coefficients included so indices line up with exponents).
pub fn coefficients_in(p: &Polynomial, var: usize) -> Vec<Polynomial> {
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<(crate::ring::Monomial, Rational)>> = vec![Vec::new(); deg + 1];
    for (m, c) in p.terms() {
        let e = m.exponent(var) as usize;
        let mut exps = m.exponents().to_vec();
        exps[var] = 0;
        buckets[e].push((crate::ring::Monomial::from_exponents(&exps), c.clone()));
    }
    buckets
        .into_iter()
        .map(|terms| Polynomial::from_terms(p.ring(), terms))
        .collect()
}

/// Primitive part with respect to `var`: divide out `content_in`.
pub fn primitive_in(p: &Polynomial, var: usize, limits: &Limits) -> Result<Polynomial> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    let c = content_in(p, var, limits)?;
    Ok(p.exact_div(&c)?.primitive_part())
}

/// Pseudo-remainder of f by g with respect to `var`:
/// lc(g)^(deg f - deg g + 1) * f = q*g + r with deg_var r < deg_var g.
pub fn pseudo_rem(f: &Polynomial, g: &Polynomial, var: usize) -> Result<Polynomial> {
    let dg = g.degree_in(var).unwrap_or(0);
    let lc_g = coefficients_in(g, var).pop().unwrap();
    let mut r = f.clone();
    loop {
        let dr = match r.degree_in(var) {
            None => break,
            Some(d) => d,
        };
        if r.is_zero() || dr < dg {
            break;
        }
        let lc_r = coefficients_in(&r, var).pop().unwrap();
        let shift = Polynomial::var_index(r.ring(), var).pow((dr - dg) as u32)?;
        // r := lc_g * r - lc_r * x^(dr-dg) * g
        r = r.mul(&lc_g)?.sub(&lc_r.mul(&shift)?.mul(g)?)?;
    }
    Ok(r)
}

/// Gcd of two polynomials viewed as univariate in `var` over the fraction
/// field of the remaining variables, returned content-free (primitive in
/// `var`, integer-primitive overall). This is the "monic generator up to
/// units" used for principal ideals of K[z].
pub fn gcd_univariate_over_fractions(
    f: &Polynomial,
    g: &Polynomial,
    var: usize,
    limits: &Limits,
) -> Result<Polynomial> {
    if f.is_zero() {
        return primitive_in(g, var, limits);
    }
    if g.is_zero() {
        return primitive_in(f, var, limits);
    }
    let mut a = primitive_in(f, var, limits)?;
    let mut b = primitive_in(g, var, limits)?;
    if a.degree_in(var) < b.degree_in(var) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b, var)?;
        a = b;
        b = if r.is_zero() { r } else { primitive_in(&r, var, limits)? };
    }
    primitive_in(&a, var, limits)
}
