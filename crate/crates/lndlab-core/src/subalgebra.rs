//! Tagged subalgebra presentations: graph ideals, membership normal forms,
//! contraction ideals R ∩ f^i·B expressed in tag coordinates, and discovery
//! of the minimal exponents needed to push ambient generators into the
//! subalgebra.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::IdealHandle;
use crate::limits::Limits;
use crate::poly::Polynomial;
use crate::ring::{MonomialOrder, RingContext};

/// A finitely generated subalgebra of a presented algebra, carried as tagged
/// generators. The graph ideal (relations, T_j − ρ_j) under a block
/// elimination order answers membership questions and contractions; its
/// basis is computed once and shared.
pub struct SubalgebraContext {
    ambient: RingContext,
    tags: Vec<(String, Polynomial)>,
    work: RingContext,
    ord: MonomialOrder,
    tag_ring: RingContext,
    graph: IdealHandle,
}

impl SubalgebraContext {
    pub fn new(
        ambient: &RingContext,
        relations: &IdealHandle,
        tags: &[(String, Polynomial)],
        limits: &Limits,
    ) -> Result<Self> {
        if tags.is_empty() {
            return Err(Error::Other("a subalgebra needs at least one generator".into()));
        }
        for (name, gen) in tags {
            if ambient.index_of(name).is_some() {
                return Err(Error::TagCollision(name.clone()));
            }
            if !gen.ring().same_ring(ambient) {
                return Err(Error::RingMismatch(gen.ring().describe(), ambient.describe()));
            }
        }
        let split = ambient.nvars();
        let mut names: Vec<String> = ambient.names().to_vec();
        for (name, _) in tags {
            if names.contains(name) {
                return Err(Error::TagCollision(name.clone()));
            }
            names.push(name.clone());
        }
        let ord = MonomialOrder::Block { split };
        let work = RingContext::new(names, ord)?;
        let tag_ring =
            RingContext::new(tags.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(), MonomialOrder::GrevLex)?;
        let mut gens: Vec<Polynomial> = Vec::new();
        for r in relations.generators() {
            gens.push(r.into_ring(&work)?);
        }
        for (name, gen) in tags {
            gens.push(Polynomial::var(&work, name)?.sub(&gen.into_ring(&work)?)?);
        }
        let graph = IdealHandle::new(&work, gens);
        graph.groebner_basis_with_limits(ord, limits)?;
        Ok(SubalgebraContext {
            ambient: ambient.clone(),
            tags: tags.to_vec(),
            work,
            ord,
            tag_ring,
            graph,
        })
    }

    pub fn ambient(&self) -> &RingContext {
        &self.ambient
    }

    pub fn tag_ring(&self) -> &RingContext {
        &self.tag_ring
    }

    pub fn tags(&self) -> &[(String, Polynomial)] {
        &self.tags
    }

    pub fn work_ring(&self) -> &RingContext {
        &self.work
    }

    fn is_tag_only(&self, p: &Polynomial) -> bool {
        let split = self.ambient.nvars();
        p.support().iter().all(|&i| i >= split)
    }

    /// Normal form against the graph basis; ambient input, work-ring output.
    pub fn normal_form(&self, p: &Polynomial, limits: &Limits) -> Result<Polynomial> {
        let pw = p.into_ring(&self.work)?;
        self.graph.normal_form_with_limits(&pw, self.ord, limits)
    }

    /// Normal form of a polynomial already living in the work ring.
    pub fn normal_form_work(&self, p: &Polynomial, limits: &Limits) -> Result<Polynomial> {
        self.graph.normal_form_with_limits(p, self.ord, limits)
    }

    /// When `p` lies in the subalgebra (modulo relations), its expression in
    /// tag coordinates; otherwise `None`.
    pub fn membership(&self, p: &Polynomial, limits: &Limits) -> Result<Option<Polynomial>> {
        let nf = self.normal_form(p, limits)?;
        if self.is_tag_only(&nf) {
            Ok(Some(nf.into_ring(&self.tag_ring)?))
        } else {
            Ok(None)
        }
    }

    pub fn expect_membership(&self, p: &Polynomial, limits: &Limits) -> Result<Polynomial> {
        self.membership(p, limits)?
            .ok_or_else(|| Error::NotInSubalgebra(p.to_string()))
    }

    /// Substitute tag generators: tag-ring input, ambient output.
    pub fn realize(&self, tag_poly: &Polynomial) -> Result<Polynomial> {
        let assignment: Vec<(String, Polynomial)> = self.tags.clone();
        tag_poly.into_ring(&self.work)?.substitute(&assignment)
    }

    /// The relation ideal of the subalgebra presentation (tag-ring syzygies):
    /// all h with h(ρ) = 0 modulo the ambient relations.
    pub fn syzygies(&self, limits: &Limits) -> Result<IdealHandle> {
        self.contract_graph(None, limits)
    }

    /// Contraction R ∩ f^i·B presented in tag coordinates: all h(T) with
    /// h(ρ) ∈ relations + (f^i). A constant f degenerates to the unit
    /// contraction, which is presented by the subalgebra's relation ideal.
    pub fn contract(&self, f: &Polynomial, i: u32, limits: &Limits) -> Result<IdealHandle> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if f.is_constant() || i == 0 {
            return self.syzygies(limits);
        }
        // f^i is first reduced against the graph basis (iteratively, to keep
        // intermediate normal forms small); the contraction ideal is
        // unchanged because the two generators agree modulo the graph.
        let fw = f.into_ring(&self.work)?;
        let mut power = self.graph.normal_form_with_limits(&fw, self.ord, limits)?;
        for _ in 1..i {
            power = self
                .graph
                .normal_form_with_limits(&power.mul(&fw)?, self.ord, limits)?;
        }
        self.contract_graph(Some(power), limits)
    }

    fn contract_graph(&self, extra: Option<Polynomial>, limits: &Limits) -> Result<IdealHandle> {
        let gb: Arc<Vec<Polynomial>> = self.graph.groebner_basis_with_limits(self.ord, limits)?;
        let mut gens: Vec<Polynomial> = gb.as_ref().clone();
        if let Some(e) = extra {
            gens.push(e);
        }
        let work_ideal = IdealHandle::new(&self.work, gens);
        let basis = work_ideal.groebner_basis_with_limits(self.ord, limits)?;
        let mut out = Vec::new();
        for g in basis.iter() {
            if self.is_tag_only(g) {
                out.push(g.into_ring(&self.tag_ring)?);
            }
        }
        Ok(IdealHandle::new(&self.tag_ring, out))
    }

    /// Normal form of α_1^(e_1)···α_s^(e_s) · b, built by interleaving
    /// multiplications with reductions so intermediates stay reduced.
    fn power_normal_form(
        &self,
        primes: &[Polynomial],
        exponents: &[u32],
        b: &Polynomial,
        limits: &Limits,
    ) -> Result<Polynomial> {
        let mut cur = self.normal_form(b, limits)?;
        for (alpha, &e) in primes.iter().zip(exponents.iter()) {
            let aw = alpha.into_ring(&self.work)?;
            for _ in 0..e {
                cur = self.normal_form_work(&cur.mul(&aw)?, limits)?;
            }
        }
        Ok(cur)
    }

    /// Is α^e · b in the subalgebra?
    pub fn power_membership(
        &self,
        primes: &[Polynomial],
        exponents: &[u32],
        b: &Polynomial,
        limits: &Limits,
    ) -> Result<bool> {
        Ok(self.is_tag_only(&self.power_normal_form(primes, exponents, b, limits)?))
    }

    /// Pointwise-minimal exponents (μ_1, ..., μ_s) with
    /// α_1^(μ_1)···α_s^(μ_s)·b_j in the subalgebra for every generator b_j,
    /// found by coordinate descent from the cap. `None` when even the cap
    /// vector fails.
    pub fn minimal_exponents(
        &self,
        primes: &[Polynomial],
        generators: &[Polynomial],
        cap: u32,
        limits: &Limits,
    ) -> Result<Option<Vec<u32>>> {
        let all_in = |e: &[u32]| -> Result<bool> {
            for b in generators {
                if !self.power_membership(primes, e, b, limits)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut exps = vec![cap; primes.len()];
        if !all_in(&exps)? {
            return Ok(None);
        }
        loop {
            let mut changed = false;
            for i in 0..exps.len() {
                while exps[i] > 0 {
                    let mut trial = exps.clone();
                    trial[i] -= 1;
                    if all_in(&trial)? {
                        exps = trial;
                        changed = true;
                    } else {
                        break;
                    }
                }
            }
            if !changed {
                return Ok(Some(exps));
            }
        }
    }
}

/// One-shot contraction { h(T) : h(ρ) ∈ B_relations + (f^i) } in the tag
/// ring, via the graph ideal and elimination of the ambient variables.
pub fn subalgebra_contract(
    relations: &IdealHandle,
    subring_gens: &[(String, Polynomial)],
    f: &Polynomial,
    i: u32,
    limits: &Limits,
) -> Result<IdealHandle> {
    let ctx = SubalgebraContext::new(relations.ring(), relations, subring_gens, limits)?;
    ctx.contract(f, i, limits)
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

    fn ex41_context(limits: &Limits) -> SubalgebraContext {
        let r = ring3();
        let tags = vec![
            ("X".to_string(), p(&r, "x")),
            ("T".to_string(), p(&r, "x^2*y + z^2")),
            ("Z".to_string(), p(&r, "z")),
        ];
        SubalgebraContext::new(&r, &IdealHandle::zero(&r), &tags, limits).unwrap()
    }

    #[test]
    fn contraction_of_x_b() {
        let limits = Limits::default();
        let ctx = ex41_context(&limits);
        let r = ring3();
        let i1 = ctx.contract(&p(&r, "x"), 1, &limits).unwrap();
        let tr = ctx.tag_ring().clone();
        let expected = IdealHandle::new(&tr, vec![p(&tr, "X"), p(&tr, "Z^2 - T")]);
        assert!(i1.equals(&expected).unwrap());

        let i2 = ctx.contract(&p(&r, "x"), 2, &limits).unwrap();
        let expected2 = IdealHandle::new(&tr, vec![p(&tr, "X^2"), p(&tr, "Z^2 - T")]);
        assert!(i2.equals(&expected2).unwrap());
    }

    #[test]
    fn unit_contraction_is_the_syzygy_ideal() {
        let limits = Limits::default();
        let ctx = ex41_context(&limits);
        let r = ring3();
        // x, x^2 y + z^2, z are algebraically independent
        let syz = ctx.contract(&p(&r, "1"), 1, &limits).unwrap();
        assert!(syz.is_zero_ideal());
        assert!(ctx.syzygies(&limits).unwrap().is_zero_ideal());
    }

    #[test]
    fn membership_and_realize() {
        let limits = Limits::default();
        let ctx = ex41_context(&limits);
        let r = ring3();
        // x^2 y = T - Z^2
        let m = ctx.membership(&p(&r, "x^2*y"), &limits).unwrap().unwrap();
        let tr = ctx.tag_ring().clone();
        assert_eq!(m, p(&tr, "T - Z^2"));
        assert_eq!(ctx.realize(&m).unwrap(), p(&r, "x^2*y"));
        // y alone is not in A[z]
        assert!(ctx.membership(&p(&r, "y"), &limits).unwrap().is_none());
    }

    #[test]
    fn minimal_exponents_example() {
        let limits = Limits::default();
        let ctx = ex41_context(&limits);
        let r = ring3();
        let primes = vec![p(&r, "x")];
        let gens = vec![p(&r, "x"), p(&r, "y"), p(&r, "z")];
        let mu = ctx.minimal_exponents(&primes, &gens, 5, &limits).unwrap();
        assert_eq!(mu, Some(vec![2]));
    }

    #[test]
    fn tag_collision_is_rejected() {
        let limits = Limits::default();
        let r = ring3();
        let tags = vec![("x".to_string(), p(&r, "x"))];
        assert!(matches!(
            SubalgebraContext::new(&r, &IdealHandle::zero(&r), &tags, &limits),
            Err(Error::TagCollision(_))
        ));
    }
}
