//! The sectioned plain-text derivation spec format (`.lnd`): ring and
//! derivation data, kernel witnesses, slice, plinth claim, sample points,
//! bounds, and per-prime chain declarations. Parsing validates every
//! witness (a claimed kernel generator that the derivation does not kill is
//! rejected here, before any analysis runs) and anchors every diagnostic to
//! a line number.

use std::collections::BTreeMap;
use std::path::Path;

use lndlab_core::ideal::IdealHandle;
use lndlab_core::lnd::{Derivation, KernelWitness, LocalSlice, PlinthClaim};
use lndlab_core::parse::parse_polynomial;
use lndlab_core::poly::Rational;
use lndlab_core::{Limits, MonomialOrder, Polynomial, RingContext};

#[derive(Debug, Clone)]
pub struct SpecError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for SpecError {}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError { line, message: message.into() })
}

#[derive(Debug, Clone)]
pub struct Bounds {
    pub nilpotency: usize,
    pub preimage_degree: u32,
    pub chain_mu: u32,
    pub samples: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { nilpotency: 16, preimage_degree: 6, chain_mu: 6, samples: 3 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ChainSpec {
    pub mu: Option<u32>,
    /// Declared stage algebras: stage index -> generators (in B).
    pub declared_stages: BTreeMap<u32, Vec<Polynomial>>,
    /// Candidate presentation map for the final stage: ambient variable of
    /// B -> raw expression over the stage variables (parsed later, once the
    /// stage ambient exists).
    pub equal_b: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone)]
pub struct DerivationSpec {
    pub name: String,
    pub ring: RingContext,
    pub relations: IdealHandle,
    pub derivation: Derivation,
    pub kernel: Vec<(String, Polynomial)>,
    pub slice_tag: String,
    pub slice: LocalSlice,
    pub plinth: PlinthClaim,
    /// Plinth factorization in kernel-tag terms: (tag, exponent).
    pub plinth_factors: Vec<(String, u32)>,
    pub subalgebra: Vec<(String, Polynomial)>,
    pub fixed_locus_radical: Option<Vec<Polynomial>>,
    pub points: Vec<(String, Vec<(String, Rational)>)>,
    pub bounds: Bounds,
    pub chains: BTreeMap<String, ChainSpec>,
}

struct RawSection {
    name: String,
    arg: Option<String>,
    entries: Vec<(usize, String, String)>, // (line, key, value)
}

fn split_sections(text: &str) -> Result<Vec<RawSection>, SpecError> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return err(Some(line_no), "unterminated section header");
            };
            let mut parts = inner.split_whitespace();
            let name = parts.next().unwrap_or("").to_string();
            let arg = parts.next().map(|s| s.to_string());
            if parts.next().is_some() {
                return err(Some(line_no), "too many tokens in section header");
            }
            sections.push(RawSection { name, arg, entries: Vec::new() });
            continue;
        }
        let Some(eq) = line.find('=') else {
            return err(Some(line_no), format!("expected `key = value`, got `{line}`"));
        };
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        let Some(section) = sections.last_mut() else {
            return err(Some(line_no), "entry before any section header");
        };
        section.entries.push((line_no, key, value));
    }
    Ok(sections)
}

/// Parse an expression that may reference earlier `[define]` names: parse in
/// the ring extended by the define names, then substitute.
fn parse_with_defines(
    ring: &RingContext,
    defines: &[(String, Polynomial)],
    text: &str,
    line: usize,
) -> Result<Polynomial, SpecError> {
    let result = if defines.is_empty() {
        parse_polynomial(ring, text)
    } else {
        let mut names: Vec<String> = ring.names().to_vec();
        for (n, _) in defines {
            names.push(n.clone());
        }
        let ext = RingContext::new(names, ring.default_order())
            .map_err(|e| SpecError { line: Some(line), message: e.to_string() })?;
        parse_polynomial(&ext, text).and_then(|p| {
            let assignment: Vec<(String, Polynomial)> = defines.to_vec();
            // ring variables map to themselves; defines to their values
            let mut full = assignment;
            for i in 0..ring.nvars() {
                full.push((ring.name(i).to_string(), Polynomial::var_index(ring, i)));
            }
            p.substitute(&full)
        })
    };
    result.map_err(|e| SpecError { line: Some(line), message: format!("in `{text}`: {e}") })
}

pub fn parse_spec(path: &Path, limits: &Limits) -> Result<DerivationSpec, SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpecError { line: None, message: format!("cannot read {}: {e}", path.display()) })?;
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse_spec_text(&name, &text, limits)
}

pub fn parse_spec_text(
    name: &str,
    text: &str,
    limits: &Limits,
) -> Result<DerivationSpec, SpecError> {
    let sections = split_sections(text)?;
    let find = |n: &str| sections.iter().find(|s| s.name == n);

    // [ring]
    let ring_section = find("ring").ok_or(SpecError {
        line: None,
        message: "missing [ring] section".into(),
    })?;
    let vars_entry = ring_section
        .entries
        .iter()
        .find(|(_, k, _)| k == "vars")
        .ok_or(SpecError { line: None, message: "[ring] needs `vars = ...`".into() })?;
    let var_names: Vec<String> =
        vars_entry.2.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    let ring = RingContext::new(var_names, MonomialOrder::GrevLex)
        .map_err(|e| SpecError { line: Some(vars_entry.0), message: e.to_string() })?;

    // [define]
    let mut defines: Vec<(String, Polynomial)> = Vec::new();
    if let Some(sec) = find("define") {
        for (line, key, value) in &sec.entries {
            if ring.index_of(key).is_some() || defines.iter().any(|(n, _)| n == key) {
                return err(Some(*line), format!("define `{key}` collides with an existing name"));
            }
            let p = parse_with_defines(&ring, &defines, value, *line)?;
            defines.push((key.clone(), p));
        }
    }

    // [relations]
    let mut relation_gens: Vec<Polynomial> = Vec::new();
    if let Some(sec) = find("relations") {
        for (line, _, value) in &sec.entries {
            relation_gens.push(parse_with_defines(&ring, &defines, value, *line)?);
        }
    }
    let relations = IdealHandle::new(&ring, relation_gens);

    // [derivation]
    let der_section = find("derivation").ok_or(SpecError {
        line: None,
        message: "missing [derivation] section".into(),
    })?;
    let mut images: Vec<Option<(usize, Polynomial)>> = vec![None; ring.nvars()];
    for (line, key, value) in &der_section.entries {
        let Some(i) = ring.index_of(key) else {
            return err(Some(*line), format!("`{key}` is not a ring variable"));
        };
        if images[i].is_some() {
            return err(Some(*line), format!("duplicate image for `{key}`"));
        }
        images[i] = Some((*line, parse_with_defines(&ring, &defines, value, *line)?));
    }
    let mut image_polys = Vec::with_capacity(ring.nvars());
    for (i, img) in images.into_iter().enumerate() {
        match img {
            Some((_, p)) => image_polys.push(p),
            None => {
                return err(None, format!("[derivation] misses an image for `{}`", ring.name(i)))
            }
        }
    }
    let derivation = Derivation::new(&ring, image_polys, relations.clone(), limits)
        .map_err(|e| SpecError { line: None, message: e.to_string() })?;

    // [kernel]: validated as actual kernel elements right here
    let kernel_section = find("kernel").ok_or(SpecError {
        line: None,
        message: "missing [kernel] section".into(),
    })?;
    let mut kernel: Vec<(String, Polynomial)> = Vec::new();
    for (line, key, value) in &kernel_section.entries {
        if ring.index_of(key).is_some() {
            return err(Some(*line), format!("kernel tag `{key}` collides with a ring variable"));
        }
        let p = parse_with_defines(&ring, &defines, value, *line)?;
        let image = derivation
            .apply(&p)
            .map_err(|e| SpecError { line: Some(*line), message: e.to_string() })?;
        if !image.is_zero() {
            return err(
                Some(*line),
                format!("claimed kernel generator `{key} = {p}` is not killed: delta gives {image}"),
            );
        }
        kernel.push((key.clone(), p));
    }
    if kernel.is_empty() {
        return err(None, "[kernel] needs at least one generator".into());
    }

    // [slice]
    let slice_section = find("slice").ok_or(SpecError {
        line: None,
        message: "missing [slice] section".into(),
    })?;
    let get = |sec: &RawSection, key: &str| -> Option<(usize, String)> {
        sec.entries.iter().find(|(_, k, _)| k == key).map(|(l, _, v)| (*l, v.clone()))
    };
    let (tag_line, slice_tag) = get(slice_section, "tag")
        .ok_or(SpecError { line: None, message: "[slice] needs `tag = ...`".into() })?;
    if ring.index_of(&slice_tag).is_some() || kernel.iter().any(|(n, _)| n == &slice_tag) {
        return err(Some(tag_line), format!("slice tag `{slice_tag}` collides with an existing name"));
    }
    let (el_line, element_text) = get(slice_section, "element")
        .ok_or(SpecError { line: None, message: "[slice] needs `element = ...`".into() })?;
    let (im_line, image_text) = get(slice_section, "image")
        .ok_or(SpecError { line: None, message: "[slice] needs `image = ...`".into() })?;
    let slice_element = parse_with_defines(&ring, &defines, &element_text, el_line)?;
    let slice_image = parse_with_defines(&ring, &defines, &image_text, im_line)?;
    let slice = LocalSlice { z: slice_element.clone(), a: slice_image };
    slice
        .validate(&derivation)
        .map_err(|e| SpecError { line: Some(el_line), message: e.to_string() })?;

    // [plinth]
    let plinth_section = find("plinth").ok_or(SpecError {
        line: None,
        message: "missing [plinth] section".into(),
    })?;
    let (gen_line, gen_text) = get(plinth_section, "generator")
        .ok_or(SpecError { line: None, message: "[plinth] needs `generator = ...`".into() })?;
    let (wit_line, wit_text) = get(plinth_section, "witness")
        .ok_or(SpecError { line: None, message: "[plinth] needs `witness = ...`".into() })?;
    let generator = parse_with_defines(&ring, &defines, &gen_text, gen_line)?;
    let witness = parse_with_defines(&ring, &defines, &wit_text, wit_line)?;
    let mut plinth_factors: Vec<(String, u32)> = Vec::new();
    if let Some((f_line, factors_text)) = get(plinth_section, "factors") {
        for part in factors_text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (tag, exp) = match part.split_once('^') {
                Some((t, e)) => {
                    let exp: u32 = e.trim().parse().map_err(|_| SpecError {
                        line: Some(f_line),
                        message: format!("bad exponent in `{part}`"),
                    })?;
                    (t.trim().to_string(), exp)
                }
                None => (part.to_string(), 1),
            };
            if !kernel.iter().any(|(n, _)| n == &tag) {
                return err(Some(f_line), format!("plinth factor `{tag}` is not a kernel tag"));
            }
            plinth_factors.push((tag, exp));
        }
    }
    let factorization: Vec<(Polynomial, u32)> = plinth_factors
        .iter()
        .map(|(tag, e)| {
            let p = kernel.iter().find(|(n, _)| n == tag).map(|(_, p)| p.clone()).unwrap();
            (p, *e)
        })
        .collect();
    let plinth = PlinthClaim { generator, witness, factorization };

    // [subalgebra] (defaults to kernel tags + the slice tag)
    let mut subalgebra: Vec<(String, Polynomial)> = Vec::new();
    if let Some(sec) = find("subalgebra") {
        for (line, key, value) in &sec.entries {
            let p = parse_with_defines(&ring, &defines, value, *line)?;
            subalgebra.push((key.clone(), p));
        }
        if !subalgebra.iter().any(|(n, p)| n == &slice_tag && *p == slice_element) {
            return err(None, "[subalgebra] must include the slice tag with the slice element");
        }
    } else {
        subalgebra = kernel.clone();
        subalgebra.push((slice_tag.clone(), slice_element.clone()));
    }

    // [fixed_locus]
    let mut fixed_locus_radical = None;
    if let Some(sec) = find("fixed_locus") {
        if let Some((line, value)) = get(sec, "radical") {
            let mut gens = Vec::new();
            for part in value.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                gens.push(parse_with_defines(&ring, &defines, part, line)?);
            }
            fixed_locus_radical = Some(gens);
        }
    }

    // [points]
    let mut points = Vec::new();
    if let Some(sec) = find("points") {
        for (line, key, value) in &sec.entries {
            let mut assignment = Vec::new();
            for part in value.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let Some((tag, v)) = part.split_once('=') else {
                    return err(Some(*line), format!("expected `TAG = value`, got `{part}`"));
                };
                let tag = tag.trim().to_string();
                if !kernel.iter().any(|(n, _)| n == &tag) {
                    return err(Some(*line), format!("point coordinate `{tag}` is not a kernel tag"));
                }
                let value_poly = parse_polynomial(&ring, v.trim())
                    .map_err(|e| SpecError { line: Some(*line), message: e.to_string() })?;
                let Some(c) = value_poly.as_constant() else {
                    return err(Some(*line), format!("point value `{}` is not rational", v.trim()));
                };
                assignment.push((tag, c));
            }
            for (tag, _) in &kernel {
                if !assignment.iter().any(|(t, _)| t == tag) {
                    return err(Some(*line), format!("point `{key}` misses a value for `{tag}`"));
                }
            }
            points.push((key.clone(), assignment));
        }
    }

    // [bounds]
    let mut bounds = Bounds::default();
    if let Some(sec) = find("bounds") {
        for (line, key, value) in &sec.entries {
            let parse_num = |v: &str| -> Result<u64, SpecError> {
                v.trim().parse().map_err(|_| SpecError {
                    line: Some(*line),
                    message: format!("bad number `{v}`"),
                })
            };
            match key.as_str() {
                "nilpotency" => bounds.nilpotency = parse_num(value)? as usize,
                "preimage_degree" => bounds.preimage_degree = parse_num(value)? as u32,
                "chain_mu" => bounds.chain_mu = parse_num(value)? as u32,
                "samples" => bounds.samples = parse_num(value)? as u32,
                other => return err(Some(*line), format!("unknown bound `{other}`")),
            }
        }
    }

    // [chain TAG] sections
    let mut chains: BTreeMap<String, ChainSpec> = BTreeMap::new();
    for sec in sections.iter().filter(|s| s.name == "chain") {
        let Some(tag) = sec.arg.clone() else {
            return err(None, "[chain] needs a kernel tag argument, e.g. [chain X]");
        };
        if !kernel.iter().any(|(n, _)| n == &tag) {
            return err(None, format!("[chain {tag}]: `{tag}` is not a kernel tag"));
        }
        let mut chain = ChainSpec::default();
        for (line, key, value) in &sec.entries {
            if key == "mu" {
                chain.mu = Some(value.trim().parse().map_err(|_| SpecError {
                    line: Some(*line),
                    message: format!("bad mu `{value}`"),
                })?);
            } else if let Some(stage) = key.strip_prefix("stage") {
                let idx: u32 = stage.trim().parse().map_err(|_| SpecError {
                    line: Some(*line),
                    message: format!("bad stage index in `{key}`"),
                })?;
                let mut gens = Vec::new();
                for part in value.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    gens.push(parse_with_defines(&ring, &defines, part, *line)?);
                }
                chain.declared_stages.insert(idx, gens);
            } else if key == "equal_b" {
                let mut map = Vec::new();
                for part in value.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    let Some((var, expr)) = part.split_once(':') else {
                        return err(Some(*line), format!("expected `var: expr`, got `{part}`"));
                    };
                    let var = var.trim().to_string();
                    if ring.index_of(&var).is_none() {
                        return err(Some(*line), format!("`{var}` is not a ring variable"));
                    }
                    map.push((var, expr.trim().to_string()));
                }
                chain.equal_b = Some(map);
            } else {
                return err(Some(*line), format!("unknown chain entry `{key}`"));
            }
        }
        chains.insert(tag, chain);
    }

    // kernel witness revalidation through the public type, for the record
    KernelWitness { generators: kernel.clone() }
        .validate(&derivation)
        .map_err(|e| SpecError { line: None, message: e.to_string() })?;

    Ok(DerivationSpec {
        name: name.to_string(),
        ring,
        relations,
        derivation,
        kernel,
        slice_tag,
        slice,
        plinth,
        plinth_factors,
        subalgebra,
        fixed_locus_radical,
        points,
        bounds,
        chains,
    })
}
