//! Ring contexts, exponent-vector monomials and monomial orders.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// How monomials are compared. Block elimination puts the first `split`
/// variables in a dominant block (graded reverse lexicographic inside each
/// block), which realizes every contraction/elimination in the ideal engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block { split: usize },
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Lex => lex_cmp(&a.0, &b.0),
            MonomialOrder::GrevLex => grevlex_cmp(&a.0, &b.0),
            MonomialOrder::Block { split } => {
                let s = split.min(a.0.len());
                grevlex_cmp(&a.0[..s], &b.0[..s]).then_with(|| grevlex_cmp(&a.0[s..], &b.0[s..]))
            }
        }
    }
}

fn lex_cmp(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn grevlex_cmp(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    // same degree: the monomial with the smaller last nonzero difference wins
    for (x, y) in a.iter().zip(b.iter()).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// A dense exponent vector, one slot per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub(crate) SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, index: usize, power: u16) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = power;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u16 {
        self.0[index]
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Componentwise quotient; `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    /// True when the two have no common variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

#[derive(Debug)]
struct RingData {
    names: Vec<String>,
    default_order: MonomialOrder,
}

/// Shared, immutable description of a polynomial ring: the ordered variable
/// list and the default monomial order. Two contexts are interchangeable iff
/// they agree on both.
#[derive(Clone)]
pub struct RingContext(Arc<RingData>);

impl RingContext {
    pub fn new<S: Into<String>>(names: Vec<S>, default_order: MonomialOrder) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Other("a ring needs at least one variable".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Other("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Other(format!("duplicate variable name `{n}`")));
            }
        }
        if let MonomialOrder::Block { split } = default_order {
            if split == 0 || split >= names.len() {
                return Err(Error::Other(format!(
                    "block split {split} must lie strictly inside the variable list"
                )));
            }
        }
        Ok(RingContext(Arc::new(RingData { names, default_order })))
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn default_order(&self) -> MonomialOrder {
        self.0.default_order
    }

    pub fn same_ring(&self, other: &RingContext) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.names == other.0.names && self.0.default_order == other.0.default_order)
    }

    pub fn describe(&self) -> String {
        format!("Q[{}]", self.0.names.join(","))
    }
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other)
    }
}

impl Eq for RingContext {}

impl std::hash::Hash for RingContext {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.names.hash(state);
        self.0.default_order.hash(state);
    }
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u16]) -> Monomial {
        Monomial::from_exponents(exps)
    }

    #[test]
    fn lex_orders_by_first_difference() {
        let ord = MonomialOrder::Lex;
        assert_eq!(ord.compare(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[1, 2, 0]), &m(&[1, 1, 9])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[0, 0, 1]), &m(&[0, 0, 1])), Ordering::Equal);
    }

    #[test]
    fn grevlex_orders_by_degree_then_reverse() {
        let ord = MonomialOrder::GrevLex;
        // x^5 > x^3 y z (same degree, smaller last exponent wins)
        assert_eq!(ord.compare(&m(&[5, 0, 0]), &m(&[3, 1, 1])), Ordering::Greater);
        // x^2 y^3 > x^3 y z
        assert_eq!(ord.compare(&m(&[2, 3, 0]), &m(&[3, 1, 1])), Ordering::Greater);
        // degree dominates
        assert_eq!(ord.compare(&m(&[0, 0, 3]), &m(&[1, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn block_order_is_an_elimination_order() {
        let ord = MonomialOrder::Block { split: 1 };
        // any positive power of the first block beats anything in the second
        assert_eq!(ord.compare(&m(&[1, 0, 0]), &m(&[0, 9, 9])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[0, 2, 0]), &m(&[0, 1, 1])), Ordering::Greater);
    }

    #[test]
    fn monomial_arithmetic() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert_eq!(a.mul(&b), m(&[3, 4]));
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert_eq!(a.gcd(&b), m(&[1, 1]));
        assert_eq!(a.checked_div(&m(&[1, 1])), Some(m(&[1, 0])));
        assert_eq!(a.checked_div(&b), None);
        assert!(m(&[1, 0]).coprime(&m(&[0, 2])));
    }

    #[test]
    fn ring_context_rejects_bad_input() {
        assert!(RingContext::new(vec!["x", "x"], MonomialOrder::Lex).is_err());
        assert!(RingContext::new(Vec::<String>::new(), MonomialOrder::Lex).is_err());
        assert!(RingContext::new(vec!["x", "y"], MonomialOrder::Block { split: 2 }).is_err());
    }
}
