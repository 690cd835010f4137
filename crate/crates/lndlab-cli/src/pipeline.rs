//! Orchestration: run the requested analysis stages over a parsed spec in
//! dependency order, assembling the report. Stage failures from engine
//! guardrails abort the dependent stages but keep the partial report.

use std::collections::BTreeMap;
use std::time::Instant;

use lndlab_core::fiber::{
    prime_tag_name, triviality_verdict, FiberAnalyzer, FiberReport, LadderForFibers,
    TrivialityVerdict,
};
use lndlab_core::ideal::in_radical;
use lndlab_core::lnd::{
    dixmier_projection, fixed_locus_ideal, irreducibility_check, local_nilpotency_check,
    plinth_witness_check, IrreducibilityVerdict, NilpotencyVerdict,
};
use lndlab_core::modification::{
    endpoint_exponent_zero, generation_identity_check, ladder_profile, stage_equals_declared,
    stage_presents_b, terminal_check, ChainBuilder, LadderProfile, ModificationChain,
    PresentedAlgebra,
};
use lndlab_core::parse::parse_polynomial;
use lndlab_core::poly::rat_int;
use lndlab_core::subalgebra::SubalgebraContext;
use lndlab_core::util::DetRng;
use lndlab_core::{Limits, Polynomial};

use crate::report::*;
use crate::specfile::DerivationSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Check,
    Chain,
    Ladder,
    Fiber,
    Verdict,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Check => "check",
            Stage::Chain => "chain",
            Stage::Ladder => "ladder",
            Stage::Fiber => "fiber",
            Stage::Verdict => "verdict",
        }
    }

    /// Close a stage selection under prerequisites, in pipeline order.
    pub fn closure(requested: &[Stage]) -> Vec<Stage> {
        let mut set = std::collections::BTreeSet::new();
        for s in requested {
            match s {
                Stage::Check => {
                    set.insert(Stage::Check);
                }
                Stage::Chain => {
                    set.extend([Stage::Check, Stage::Chain]);
                }
                Stage::Ladder => {
                    set.extend([Stage::Check, Stage::Chain, Stage::Ladder]);
                }
                Stage::Fiber => {
                    set.extend([Stage::Check, Stage::Chain, Stage::Ladder, Stage::Fiber]);
                }
                Stage::Verdict => {
                    set.extend([
                        Stage::Check,
                        Stage::Chain,
                        Stage::Ladder,
                        Stage::Fiber,
                        Stage::Verdict,
                    ]);
                }
            }
        }
        set.into_iter().collect()
    }
}

pub struct Pipeline<'a> {
    pub spec: &'a DerivationSpec,
    pub seed: u64,
    pub limits: Limits,
    pub nilpotency_bound: Option<usize>,
}

struct ChainData {
    chain: ModificationChain,
    mu: u32,
}

impl<'a> Pipeline<'a> {
    pub fn run(&self, requested: &[Stage]) -> AnalysisReport {
        let stages = Stage::closure(requested);
        let mut report = AnalysisReport::new(&self.spec.name, self.seed);
        report.stages_run = stages.iter().map(|s| s.name().to_string()).collect();

        let mut vacuous = false;
        let mut reducible = false;
        let mut aborted = false;
        let mut subring: Option<SubalgebraContext> = None;
        let mut chains: BTreeMap<String, ChainData> = BTreeMap::new();
        let mut ladders: BTreeMap<String, LadderProfile> = BTreeMap::new();
        let mut fiber_reports: Vec<FiberReport> = Vec::new();

        for stage in &stages {
            let start = Instant::now();
            let outcome: Result<(), String> = match stage {
                Stage::Check => self.run_check(&mut report, &mut vacuous, &mut reducible),
                Stage::Chain => {
                    if vacuous {
                        report.diagnostics.push(
                            "chain stage skipped as vacuous: the plinth is the unit ideal".into(),
                        );
                        Ok(())
                    } else if reducible {
                        report.diagnostics.push(
                            "chain stage skipped: the derivation is reducible".into(),
                        );
                        Ok(())
                    } else {
                        self.run_chain(&mut report, &mut subring, &mut chains)
                    }
                }
                Stage::Ladder => {
                    if vacuous || reducible || chains.is_empty() {
                        if !vacuous && !reducible {
                            report
                                .diagnostics
                                .push("ladder stage skipped: no chains available".into());
                        }
                        Ok(())
                    } else {
                        self.run_ladder(&mut report, &chains, &mut ladders)
                    }
                }
                Stage::Fiber => {
                    if vacuous {
                        report.diagnostics.push(
                            "fiber stage skipped as vacuous: every fiber is a single line".into(),
                        );
                        Ok(())
                    } else if reducible {
                        Ok(())
                    } else {
                        self.run_fiber(&mut report, &subring, &ladders, &mut fiber_reports)
                    }
                }
                Stage::Verdict => self.run_verdict(&mut report, vacuous, &fiber_reports),
            };
            report
                .timings_ms
                .push((stage.name().to_string(), start.elapsed().as_millis()));
            if let Err(e) = outcome {
                report
                    .diagnostics
                    .push(format!("stage {} aborted: {e}", stage.name()));
                aborted = true;
            }
        }
        if aborted {
            report.diagnostics.push("partial report: at least one stage aborted".into());
        }
        report
    }

    fn run_check(
        &self,
        report: &mut AnalysisReport,
        vacuous: &mut bool,
        reducible: &mut bool,
    ) -> Result<(), String> {
        let spec = self.spec;
        let limits = &self.limits;
        let bound = self.nilpotency_bound.unwrap_or(spec.bounds.nilpotency);
        let nil = local_nilpotency_check(&spec.derivation, bound).map_err(|e| e.to_string())?;
        let locally_nilpotent = match nil {
            NilpotencyVerdict::LocallyNilpotent(degrees) => NilpotencyJson {
                verdict: Verdict::Pass,
                degrees: Some(degrees.into_iter().map(|(v, n)| (v, n as u64)).collect()),
                exceeded_at: None,
                bound: bound as u64,
            },
            NilpotencyVerdict::ExceededBound { variable, bound } => NilpotencyJson {
                verdict: Verdict::Inconclusive,
                degrees: None,
                exceeded_at: Some(variable),
                bound: bound as u64,
            },
        };

        let irreducible = match irreducibility_check(&spec.derivation, limits) {
            Ok(IrreducibilityVerdict::Irreducible) => CheckRecord {
                name: "irreducible".into(),
                anchor: "image-gcd-is-a-unit".into(),
                verdict: Verdict::Pass,
                detail: None,
            },
            Ok(IrreducibilityVerdict::Reducible(factor)) => {
                *reducible = true;
                CheckRecord {
                    name: "irreducible".into(),
                    anchor: "image-gcd-is-a-unit".into(),
                    verdict: Verdict::Fail,
                    detail: Some(format!("reducible: common factor {factor}")),
                }
            }
            Err(e) => return Err(e.to_string()),
        };

        // kernel and slice were validated at parse time
        let kernel = CheckRecord {
            name: "kernel-witness".into(),
            anchor: "kernel-generators-annihilated".into(),
            verdict: Verdict::Pass,
            detail: Some(
                spec.kernel
                    .iter()
                    .map(|(n, p)| format!("{n} = {p}"))
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
        };
        let slice = CheckRecord {
            name: "local-slice".into(),
            anchor: "slice-image-in-kernel".into(),
            verdict: Verdict::Pass,
            detail: Some(format!("delta({}) = {}", spec.slice.z, spec.slice.a)),
        };

        // Dixmier projection of every ambient variable lands in the kernel
        let mut dixmier_details = Vec::new();
        let mut dixmier_ok = true;
        for i in 0..spec.ring.nvars() {
            let v = Polynomial::var_index(&spec.ring, i);
            match dixmier_projection(&spec.derivation, &spec.slice, &v, spec.bounds.nilpotency.max(8)) {
                Ok(projected) => {
                    match spec.derivation.apply(&projected.numerator) {
                        Ok(img) if img.is_zero() => {
                            dixmier_details.push(format!("pi({}) = {projected}", spec.ring.name(i)));
                        }
                        _ => dixmier_ok = false,
                    }
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        let dixmier = CheckRecord {
            name: "dixmier-projection".into(),
            anchor: "dixmier-image-in-kernel".into(),
            verdict: if dixmier_ok { Verdict::Pass } else { Verdict::Fail },
            detail: Some(dixmier_details.join("; ")),
        };

        let plinth_report =
            plinth_witness_check(&spec.derivation, &spec.plinth, spec.bounds.preimage_degree, limits)
                .map_err(|e| e.to_string())?;
        *vacuous = plinth_report.is_unit;
        let plinth = PlinthJson {
            generator: spec.plinth.generator.to_string(),
            verified: plinth_report.witness_ok && plinth_report.generator_in_kernel,
            witness: spec.plinth.witness.to_string(),
            factors: spec
                .plinth_factors
                .iter()
                .map(|(t, e)| if *e == 1 { t.clone() } else { format!("{t}^{e}") })
                .collect(),
            minimality: plinth_report
                .minimality
                .iter()
                .zip(spec.plinth_factors.iter())
                .map(|((_, ok), (tag, _))| MinimalityJson {
                    prime: tag.clone(),
                    no_solution_up_to: plinth_report.minimality_cap as u64,
                    verdict: if *ok { Verdict::Bounded } else { Verdict::Fail },
                })
                .collect(),
            minimality_cap: plinth_report.minimality_cap as u64,
            unit: plinth_report.is_unit,
        };

        let fl = fixed_locus_ideal(&spec.derivation);
        let unit_ideal = fl.is_unit_ideal().map_err(|e| e.to_string())?;
        let (radical_expected, radical_matches) = match &spec.fixed_locus_radical {
            None => (None, None),
            Some(target_gens) => {
                let target =
                    lndlab_core::IdealHandle::new(&spec.ring, target_gens.clone());
                let mut matches = true;
                for g in fl.generators() {
                    if !in_radical(&target, g, limits).map_err(|e| e.to_string())? {
                        matches = false;
                    }
                }
                for g in target.generators() {
                    if !in_radical(&fl, g, limits).map_err(|e| e.to_string())? {
                        matches = false;
                    }
                }
                (
                    Some(target_gens.iter().map(|g| g.to_string()).collect()),
                    Some(matches),
                )
            }
        };
        let fixed_locus = FixedLocusJson {
            generators: fl.generators().iter().map(|g| g.to_string()).collect(),
            unit_ideal,
            radical_expected,
            radical_matches,
        };

        report.check = Some(CheckSection {
            locally_nilpotent,
            irreducible,
            kernel,
            slice,
            global_slice: spec.slice.is_global_slice(),
            dixmier: Some(dixmier),
            plinth,
            fixed_locus,
        });
        Ok(())
    }

    fn build_subring(&self) -> Result<SubalgebraContext, String> {
        SubalgebraContext::new(
            &self.spec.ring,
            &self.spec.relations,
            &self.spec.subalgebra,
            &self.limits,
        )
        .map_err(|e| e.to_string())
    }

    fn run_chain(
        &self,
        report: &mut AnalysisReport,
        subring: &mut Option<SubalgebraContext>,
        chains: &mut BTreeMap<String, ChainData>,
    ) -> Result<(), String> {
        let spec = self.spec;
        let limits = &self.limits;
        if subring.is_none() {
            *subring = Some(self.build_subring()?);
        }
        let ctx = subring.as_ref().unwrap();
        let builder = ChainBuilder { subring: ctx, delta: &spec.derivation, limits };

        // minimal exponents pushing the ambient generators into A[z]
        let primes: Vec<Polynomial> = spec
            .plinth_factors
            .iter()
            .map(|(tag, _)| {
                spec.kernel.iter().find(|(n, _)| n == tag).map(|(_, p)| p.clone()).unwrap()
            })
            .collect();
        let generators: Vec<Polynomial> =
            (0..spec.ring.nvars()).map(|i| Polynomial::var_index(&spec.ring, i)).collect();
        let discovered = ctx
            .minimal_exponents(&primes, &generators, spec.bounds.chain_mu, limits)
            .map_err(|e| e.to_string())?;
        let Some(discovered) = discovered else {
            return Err(format!(
                "no exponent vector up to {} pushes the generators into the subring",
                spec.bounds.chain_mu
            ));
        };

        let mut chain_section: BTreeMap<String, ChainJson> = BTreeMap::new();
        for ((tag, _), (prime, mu_discovered)) in
            spec.plinth_factors.iter().zip(primes.iter().zip(discovered.iter()))
        {
            let chain_spec = spec.chains.get(tag).cloned().unwrap_or_default();
            let mu = chain_spec.mu.unwrap_or(*mu_discovered).max(1);
            if chain_spec.mu.is_some() && chain_spec.mu != Some(*mu_discovered) {
                report.diagnostics.push(format!(
                    "chain {tag}: declared mu {} differs from discovered {}",
                    mu, mu_discovered
                ));
            }
            let chain = builder.build(prime, mu).map_err(|e| e.to_string())?;

            let mut stages_json = Vec::new();
            for stage in &chain.stages {
                let matches_declared = match chain_spec.declared_stages.get(&stage.exponent) {
                    None => None,
                    Some(declared) => Some(
                        stage_equals_declared(&builder, &chain, stage, declared)
                            .map_err(|e| e.to_string())?,
                    ),
                };
                let ntags = ctx.tag_ring().nvars();
                stages_json.push(StageJson {
                    exponent: stage.exponent,
                    contraction: stage
                        .contraction
                        .generators()
                        .iter()
                        .map(|g| g.to_string())
                        .collect(),
                    adjoined: stage
                        .realizations
                        .iter()
                        .zip(stage.derivation.images()[ntags..].iter())
                        .map(|((var, real), img)| AdjoinedJson {
                            var: var.clone(),
                            realization: real.to_string(),
                            delta_image: img.to_string(),
                        })
                        .collect(),
                    includes_previous: stage.includes_previous,
                    equals_previous: stage.equals_previous,
                    matches_declared,
                });
            }

            let gen_id = generation_identity_check(&chain, ctx, limits).map_err(|e| e.to_string())?;
            let endpoint = endpoint_exponent_zero(&chain).map_err(|e| e.to_string())?;
            let presents_b = match &chain_spec.equal_b {
                None => None,
                Some(map) => {
                    let last = chain.stages.last().unwrap();
                    let mut candidate = Vec::new();
                    for (var, expr_text) in map {
                        let expr = parse_polynomial(&last.algebra.ambient, expr_text)
                            .map_err(|e| format!("equal_b `{expr_text}`: {e}"))?;
                        candidate.push((var.clone(), expr));
                    }
                    let ok = stage_presents_b(&builder, last, &candidate)
                        .map_err(|e| e.to_string())?;
                    Some(CheckRecord {
                        name: format!("chain-{tag}-presents-b"),
                        anchor: "chain-terminal-presentation".into(),
                        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                        detail: None,
                    })
                }
            };

            chain_section.insert(
                tag.clone(),
                ChainJson {
                    prime: prime.to_string(),
                    mu,
                    stages: stages_json,
                    stabilized_at: chain.stabilized_at,
                    generation_identity: CheckRecord {
                        name: format!("chain-{tag}-generation-identity"),
                        anchor: "contraction-generation-identity".into(),
                        verdict: if gen_id.holds { Verdict::Pass } else { Verdict::Fail },
                        detail: Some(format!("ell = {}", gen_id.ell)),
                    },
                    endpoint_exponent_zero: CheckRecord {
                        name: format!("chain-{tag}-endpoint"),
                        anchor: "endpoint-exponent-zero".into(),
                        verdict: if endpoint { Verdict::Pass } else { Verdict::Fail },
                        detail: None,
                    },
                    presents_b,
                },
            );
            chains.insert(tag.clone(), ChainData { chain, mu });
        }

        // terminal membership with the full exponent vector
        let term = terminal_check(
            ctx,
            &spec
                .plinth_factors
                .iter()
                .zip(primes.iter().zip(discovered.iter()))
                .map(|((_, _), (p, e))| (p.clone(), *e))
                .collect::<Vec<_>>(),
            &(0..spec.ring.nvars())
                .map(|i| {
                    (spec.ring.name(i).to_string(), Polynomial::var_index(&spec.ring, i))
                })
                .collect::<Vec<_>>(),
            limits,
        )
        .map_err(|e| e.to_string())?;
        report.terminal = Some(TerminalJson {
            exponents: spec
                .plinth_factors
                .iter()
                .zip(discovered.iter())
                .map(|((tag, _), e)| (tag.clone(), *e))
                .collect(),
            verdict: if term.terminal { Verdict::Pass } else { Verdict::Fail },
            witnesses: term
                .witnesses
                .iter()
                .map(|(name, w)| TerminalWitnessJson {
                    generator: name.clone(),
                    expression: w.as_ref().map(|p| p.to_string()),
                })
                .collect(),
        });
        report.chain = Some(chain_section);
        Ok(())
    }

    fn run_ladder(
        &self,
        report: &mut AnalysisReport,
        chains: &BTreeMap<String, ChainData>,
        ladders: &mut BTreeMap<String, LadderProfile>,
    ) -> Result<(), String> {
        let spec = self.spec;
        let mut section = BTreeMap::new();
        for (tag, data) in chains {
            let p_exp = spec
                .plinth_factors
                .iter()
                .find(|(t, _)| t == tag)
                .map(|(_, e)| *e)
                .unwrap_or(1);
            let profile = ladder_profile(&data.chain, tag, &spec.slice_tag, p_exp, &self.limits)
                .map_err(|e| e.to_string())?;
            let bound = profile.gbar_degree as u64;
            section.insert(
                tag.clone(),
                LadderJson {
                    gbar: profile.gbar.to_string(),
                    gbar_degree: profile.gbar_degree as u64,
                    exponents: profile.exponents.iter().map(|&e| e as u64).collect(),
                    breakpoints: profile
                        .breakpoints
                        .iter()
                        .map(|&(j, l)| (j as u64, l as u64))
                        .collect(),
                    q1: profile.q1,
                    violations: profile.violations.clone(),
                    line_count_lower_bound: bound,
                },
            );
            ladders.insert(tag.clone(), profile);
        }
        report.ladder = Some(section);
        Ok(())
    }

    fn run_fiber(
        &self,
        report: &mut AnalysisReport,
        subring: &Option<SubalgebraContext>,
        ladders: &BTreeMap<String, LadderProfile>,
        fiber_reports: &mut Vec<FiberReport>,
    ) -> Result<(), String> {
        let spec = self.spec;
        let limits = &self.limits;
        let algebra = PresentedAlgebra {
            ambient: spec.ring.clone(),
            relations: spec.relations.clone(),
            provenance: None,
        };
        let ladder_data: Vec<LadderForFibers> = ladders
            .iter()
            .map(|(tag, l)| LadderForFibers { prime_tag: tag.clone(), gbar: l.gbar.clone() })
            .collect();
        let analyzer = FiberAnalyzer {
            algebra: &algebra,
            kernel: &spec.kernel,
            slice_tag: &spec.slice_tag,
            ladders: &ladder_data,
            limits,
        };

        let mut points_json = Vec::new();
        for (name, point) in &spec.points {
            let fr = analyzer.fiber_at_point(point, self.seed).map_err(|e| e.to_string())?;
            points_json.push(FiberJson {
                name: Some(name.clone()),
                point: point.iter().map(|(t, v)| (t.clone(), v.to_string())).collect(),
                degree: fr.degree,
                components: fr.components,
                multiplicities: fr.multiplicities.clone(),
                method: fr.method.as_str().to_string(),
                notes: fr.notes.clone(),
            });
            fiber_reports.push(fr);
        }

        // seeded generic samples off the vanishing locus of the plinth
        // generator, each certified (or not) as a single reduced line
        let mut generic_json = Vec::new();
        if !spec.plinth.generator.is_constant() {
            let ctx = match subring {
                Some(c) => c,
                None => return Err("fiber sampling needs the subring context".into()),
            };
            let gen_tags =
                ctx.membership(&spec.plinth.generator, limits).map_err(|e| e.to_string())?;
            let Some(gen_tags) = gen_tags else {
                return Err("plinth generator is not a kernel-tag expression".into());
            };
            let mut rng = DetRng::new(self.seed ^ 0x67e2_91a3_55aa_10c4);
            let mut found = 0;
            let mut attempts = 0;
            while found < spec.bounds.samples && attempts < 200 {
                attempts += 1;
                let point: Vec<(String, lndlab_core::Rational)> = spec
                    .kernel
                    .iter()
                    .map(|(t, _)| (t.clone(), rat_int(rng.int_in(-9, 9))))
                    .collect();
                // evaluate the plinth generator at the sampled tag values
                let tag_ring = ctx.tag_ring();
                let values: Vec<lndlab_core::Rational> = (0..tag_ring.nvars())
                    .map(|i| {
                        point
                            .iter()
                            .find(|(t, _)| t == tag_ring.name(i))
                            .map(|(_, v)| v.clone())
                            .unwrap_or_else(|| rat_int(0))
                    })
                    .collect();
                let a_value = gen_tags.evaluate(&values).map_err(|e| e.to_string())?;
                if a_value == rat_int(0) {
                    continue;
                }
                found += 1;
                let certified = analyzer
                    .certify_single_line(&point, &spec.slice.z)
                    .map_err(|e| e.to_string())?;
                generic_json.push(GenericFiberJson {
                    point: point.iter().map(|(t, v)| (t.clone(), v.to_string())).collect(),
                    single_line_certified: certified,
                });
            }
        }

        report.fiber = Some(FiberSection { points: points_json, generic: generic_json });
        Ok(())
    }

    fn run_verdict(
        &self,
        report: &mut AnalysisReport,
        vacuous: bool,
        fiber_reports: &[FiberReport],
    ) -> Result<(), String> {
        let spec = self.spec;
        let has_slice = spec.slice.is_global_slice() || vacuous;
        let verdict = triviality_verdict(Some(&spec.plinth), has_slice, fiber_reports);
        let (label, witness) = match &verdict {
            TrivialityVerdict::TrivialBundle => ("trivial-bundle".to_string(), None),
            TrivialityVerdict::NotTrivial(w) => ("not-trivial".to_string(), Some(w.clone())),
            TrivialityVerdict::Inconclusive(w) => ("inconclusive".to_string(), Some(w.clone())),
        };
        let fl_unit = fixed_locus_ideal(&spec.derivation)
            .is_unit_ideal()
            .map_err(|e| e.to_string())?;
        report.verdict = Some(VerdictSection {
            triviality: label,
            witness,
            fixed_point_free: fl_unit,
        });
        Ok(())
    }
}

/// Helper for the fiber stage: the prime tag of a kernel element (exposed
/// for tests).
pub fn kernel_prime_tag(
    ctx: &SubalgebraContext,
    alpha: &Polynomial,
    limits: &Limits,
) -> Result<String, String> {
    prime_tag_name(ctx, alpha, limits).map_err(|e| e.to_string())
}
