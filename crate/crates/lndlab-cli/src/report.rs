//! The analysis report: a stable, machine-readable record of every check
//! the pipeline ran, with verdicts, witnesses and anchors. JSON output is
//! byte-identical across runs for a fixed spec and seed (timings are only
//! ever printed in the text rendering).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one check. `Bounded` marks checks whose positive answer is a
/// bounded certificate (for example "no preimage up to degree 6");
/// `Inconclusive` marks honestly undecided questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Bounded,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    /// Stable identifier of the mathematical fact being checked.
    pub anchor: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NilpotencyJson {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<BTreeMap<String, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceeded_at: Option<String>,
    pub bound: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PlinthJson {
    pub generator: String,
    pub verified: bool,
    pub witness: String,
    pub factors: Vec<String>,
    /// Bounded minimality evidence per prime factor.
    pub minimality: Vec<MinimalityJson>,
    pub minimality_cap: u64,
    pub unit: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MinimalityJson {
    pub prime: String,
    pub no_solution_up_to: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FixedLocusJson {
    pub generators: Vec<String>,
    pub unit_ideal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical_expected: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical_matches: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckSection {
    pub locally_nilpotent: NilpotencyJson,
    pub irreducible: CheckRecord,
    pub kernel: CheckRecord,
    pub slice: CheckRecord,
    pub global_slice: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dixmier: Option<CheckRecord>,
    pub plinth: PlinthJson,
    pub fixed_locus: FixedLocusJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StageJson {
    pub exponent: u32,
    pub contraction: Vec<String>,
    pub adjoined: Vec<AdjoinedJson>,
    pub includes_previous: bool,
    pub equals_previous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_declared: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AdjoinedJson {
    pub var: String,
    pub realization: String,
    pub delta_image: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChainJson {
    pub prime: String,
    pub mu: u32,
    pub stages: Vec<StageJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilized_at: Option<u32>,
    pub generation_identity: CheckRecord,
    pub endpoint_exponent_zero: CheckRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presents_b: Option<CheckRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TerminalJson {
    pub exponents: BTreeMap<String, u32>,
    pub verdict: Verdict,
    pub witnesses: Vec<TerminalWitnessJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TerminalWitnessJson {
    pub generator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LadderJson {
    pub gbar: String,
    pub gbar_degree: u64,
    pub exponents: Vec<u64>,
    pub breakpoints: Vec<(u64, u64)>,
    pub q1: i64,
    pub violations: Vec<String>,
    pub line_count_lower_bound: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FiberJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub point: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<u32>,
    pub multiplicities: Vec<u32>,
    pub method: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GenericFiberJson {
    pub point: BTreeMap<String, String>,
    pub single_line_certified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FiberSection {
    pub points: Vec<FiberJson>,
    pub generic: Vec<GenericFiberJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerdictSection {
    pub triviality: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub fixed_point_free: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub spec: String,
    pub seed: u64,
    pub stages_run: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<BTreeMap<String, ChainJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terminal: Option<TerminalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<BTreeMap<String, LadderJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictSection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub diagnostics: Vec<String>,
    /// Wall-clock stage timings in milliseconds; excluded from JSON so the
    /// machine-readable output is byte-stable.
    #[serde(skip)]
    pub timings_ms: Vec<(String, u128)>,
}

impl AnalysisReport {
    pub fn new(spec: &str, seed: u64) -> Self {
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            spec: spec.to_string(),
            seed,
            stages_run: Vec::new(),
            check: None,
            chain: None,
            terminal: None,
            ladder: None,
            fiber: None,
            verdict: None,
            diagnostics: Vec::new(),
            timings_ms: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<AnalysisReport> {
        serde_json::from_str(text)
    }

    /// Collect every verdict in the report.
    fn verdicts(&self) -> Vec<(String, Verdict)> {
        let mut out = Vec::new();
        if let Some(check) = &self.check {
            out.push(("locally_nilpotent".into(), check.locally_nilpotent.verdict));
            out.push((check.irreducible.name.clone(), check.irreducible.verdict));
            out.push((check.kernel.name.clone(), check.kernel.verdict));
            out.push((check.slice.name.clone(), check.slice.verdict));
            if let Some(d) = &check.dixmier {
                out.push((d.name.clone(), d.verdict));
            }
            out.push((
                "plinth".into(),
                if check.plinth.verified { Verdict::Pass } else { Verdict::Fail },
            ));
            for m in &check.plinth.minimality {
                out.push((format!("plinth-minimality-{}", m.prime), m.verdict));
            }
            if let Some(matches) = check.fixed_locus.radical_matches {
                out.push((
                    "fixed-locus-radical".into(),
                    if matches { Verdict::Pass } else { Verdict::Fail },
                ));
            }
        }
        if let Some(chains) = &self.chain {
            for (tag, c) in chains {
                out.push((format!("chain-{tag}-generation-identity"), c.generation_identity.verdict));
                out.push((
                    format!("chain-{tag}-endpoint"),
                    c.endpoint_exponent_zero.verdict,
                ));
                if let Some(p) = &c.presents_b {
                    out.push((format!("chain-{tag}-presents-b"), p.verdict));
                }
                for s in &c.stages {
                    if !s.includes_previous {
                        out.push((format!("chain-{tag}-stage-{}-inclusion", s.exponent), Verdict::Fail));
                    }
                    if s.matches_declared == Some(false) {
                        out.push((format!("chain-{tag}-stage-{}-declared", s.exponent), Verdict::Fail));
                    }
                }
            }
        }
        if let Some(term) = &self.terminal {
            out.push(("terminal".into(), term.verdict));
        }
        if let Some(ladders) = &self.ladder {
            for (tag, l) in ladders {
                out.push((
                    format!("ladder-{tag}"),
                    if l.violations.is_empty() { Verdict::Pass } else { Verdict::Fail },
                ));
            }
        }
        if let Some(verdict) = &self.verdict {
            let v = match verdict.triviality.as_str() {
                "inconclusive" => Verdict::Inconclusive,
                _ => Verdict::Pass,
            };
            out.push(("triviality".into(), v));
        }
        out
    }

    /// CI-facing exit code: 0 all pass, 1 any failed invariant, 2 bounded or
    /// inconclusive outcomes only, 3 is reserved for input errors.
    pub fn exit_code(&self) -> i32 {
        let verdicts = self.verdicts();
        if verdicts.iter().any(|(_, v)| *v == Verdict::Fail) {
            return 1;
        }
        if verdicts.iter().any(|(_, v)| *v == Verdict::Inconclusive) {
            return 2;
        }
        0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "spec: {}   seed: {}", self.spec, self.seed);
        let _ = writeln!(out, "stages: {}", self.stages_run.join(", "));
        if let Some(check) = &self.check {
            let _ = writeln!(out, "\n[check]");
            match &check.locally_nilpotent.degrees {
                Some(d) => {
                    let degs: Vec<String> =
                        d.iter().map(|(v, n)| format!("{v}:{n}")).collect();
                    let _ = writeln!(out, "  locally nilpotent: yes ({})", degs.join(", "));
                }
                None => {
                    let _ = writeln!(
                        out,
                        "  locally nilpotent: bound {} exceeded at {}",
                        check.locally_nilpotent.bound,
                        check.locally_nilpotent.exceeded_at.as_deref().unwrap_or("?")
                    );
                }
            }
            let fmt_check = |c: &CheckRecord| -> String {
                let mut line = format!("  {}: {:?}", c.name, c.verdict);
                if let Some(d) = &c.detail {
                    let _ = write!(line, " ({d})");
                }
                line.to_lowercase()
            };
            let _ = writeln!(out, "{}", fmt_check(&check.irreducible));
            let _ = writeln!(out, "{}", fmt_check(&check.kernel));
            let _ = writeln!(out, "{}", fmt_check(&check.slice));
            if let Some(d) = &check.dixmier {
                let _ = writeln!(out, "{}", fmt_check(d));
            }
            let _ = writeln!(
                out,
                "  plinth: generator {} {} [anchor: plinth-principal-generator]",
                check.plinth.generator,
                if check.plinth.verified { "verified" } else { "FAILED" }
            );
            for m in &check.plinth.minimality {
                let _ = writeln!(
                    out,
                    "    minimality over {}: no solution up to degree {} [anchor: plinth-minimality-bounded]",
                    m.prime, m.no_solution_up_to
                );
            }
            let _ = writeln!(
                out,
                "  fixed locus: ({}) unit={} radical_matches={:?}",
                check.fixed_locus.generators.join(", "),
                check.fixed_locus.unit_ideal,
                check.fixed_locus.radical_matches
            );
        }
        if let Some(chains) = &self.chain {
            for (tag, c) in chains {
                let _ = writeln!(out, "\n[chain {tag}] mu = {}", c.mu);
                for s in &c.stages {
                    let gens: Vec<String> =
                        s.adjoined.iter().map(|a| format!("{}={}", a.var, a.realization)).collect();
                    let _ = writeln!(
                        out,
                        "  stage {}: adjoined {{{}}} includes_prev={} equals_prev={}{}",
                        s.exponent,
                        gens.join(", "),
                        s.includes_previous,
                        s.equals_previous,
                        match s.matches_declared {
                            Some(true) => " declared:ok",
                            Some(false) => " declared:MISMATCH",
                            None => "",
                        }
                    );
                }
                if let Some(i) = c.stabilized_at {
                    let _ = writeln!(out, "  stabilized at stage {i}");
                }
                let _ = writeln!(
                    out,
                    "  generation identity: {:?} [anchor: contraction-generation-identity]",
                    c.generation_identity.verdict
                );
                let _ = writeln!(
                    out,
                    "  endpoint exponent zero: {:?} [anchor: endpoint-exponent-zero]",
                    c.endpoint_exponent_zero.verdict
                );
                if let Some(p) = &c.presents_b {
                    let _ = writeln!(out, "  presents B: {:?} [anchor: chain-terminal-presentation]", p.verdict);
                }
            }
        }
        if let Some(term) = &self.terminal {
            let exps: Vec<String> =
                term.exponents.iter().map(|(t, e)| format!("{t}^{e}")).collect();
            let _ = writeln!(
                out,
                "\n[terminal] a = {}: {:?} [anchor: terminal-generator-membership]",
                exps.join("*"),
                term.verdict
            );
        }
        if let Some(ladders) = &self.ladder {
            for (tag, l) in ladders {
                let _ = writeln!(
                    out,
                    "\n[ladder {tag}] gbar = {} (degree {}), exponents {:?}, breakpoints {:?}, q1 = {} [anchor: ladder-power-shape]",
                    l.gbar, l.gbar_degree, l.exponents, l.breakpoints, l.q1
                );
                for v in &l.violations {
                    let _ = writeln!(out, "  VIOLATION: {v}");
                }
            }
        }
        if let Some(fiber) = &self.fiber {
            let _ = writeln!(out, "\n[fiber]");
            for f in &fiber.points {
                let pt: Vec<String> = f.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(
                    out,
                    "  {} ({}): degree {:?}, components {:?}, multiplicities {:?} via {}",
                    f.name.as_deref().unwrap_or("point"),
                    pt.join(", "),
                    f.degree,
                    f.components,
                    f.multiplicities,
                    f.method
                );
            }
            for g in &fiber.generic {
                let pt: Vec<String> = g.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(
                    out,
                    "  generic ({}): single line certified = {}",
                    pt.join(", "),
                    g.single_line_certified
                );
            }
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "\n[verdict] {}", v.triviality);
            if let Some(w) = &v.witness {
                let _ = writeln!(out, "  witness: {w}");
            }
            let _ = writeln!(out, "  fixed-point free: {}", v.fixed_point_free);
        }
        for d in &self.diagnostics {
            let _ = writeln!(out, "note: {d}");
        }
        if !self.timings_ms.is_empty() {
            let _ = writeln!(out, "\ntimings:");
            for (stage, ms) in &self.timings_ms {
                let _ = writeln!(out, "  {stage}: {ms} ms");
            }
        }
        out
    }
}
