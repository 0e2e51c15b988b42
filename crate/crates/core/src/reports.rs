//! Serializable reports and their text rendering, shared by the CLI and
//! golden tests. Field order is part of the versioned schema.

use std::fmt::Write;

use serde::Serialize;

use crate::algebra::{Rat, SPoly};
use crate::dmodule::{FeqMode, Verification};
use crate::invariants::{CandidateRootSet, InvariantsReport, ZetaReport};
use crate::multiplier::{ConstraintVector, IdealBasis, JumpingReport};
use crate::resolution::{DivisorKind, ResolutionData, SCHEMA_VERSION};

/// The divisor table in the layout `N_f / N_g / N_fg / k` by column.
pub fn resolution_text(res: &ResolutionData) -> String {
    let mut out = String::new();
    writeln!(out, "germ: {}", res.germ).unwrap();
    writeln!(out, "divisors: {}  blow-ups: {}", res.divisors.len(), res.blowup_count()).unwrap();
    let label = |k: &DivisorKind, id: usize| match k {
        DivisorKind::Exceptional => format!("E{id}"),
        DivisorKind::StrictF => format!("F{id}"),
        DivisorKind::StrictG => format!("G{id}"),
    };
    let mut rows: Vec<(String, Vec<String>)> = vec![
        ("".into(), res.divisors.iter().map(|d| label(&d.kind, d.id)).collect()),
        ("N_f".into(), res.divisors.iter().map(|d| d.n_f.to_string()).collect()),
        ("N_g".into(), res.divisors.iter().map(|d| d.n_g.to_string()).collect()),
        ("N_f/g".into(), res.divisors.iter().map(|d| d.n_fg().to_string()).collect()),
        ("k".into(), res.divisors.iter().map(|d| d.k.to_string()).collect()),
    ];
    rows.push((
        "class".into(),
        res.divisors
            .iter()
            .map(|d| match d.class() {
                crate::resolution::DivisorClass::Zero => "0".to_string(),
                crate::resolution::DivisorClass::Pole => "inf".to_string(),
                crate::resolution::DivisorClass::Dicritical => "d".to_string(),
            })
            .collect(),
    ));
    let width = rows
        .iter()
        .flat_map(|(_, cells)| cells.iter().map(String::len))
        .max()
        .unwrap_or(1)
        .max(2);
    for (head, cells) in &rows {
        let mut line = format!("{head:<6}");
        for c in cells {
            write!(line, " {c:>width$}").unwrap();
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    let edges: Vec<String> = res.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
    writeln!(out, "edges: {}", if edges.is_empty() { "none".to_string() } else { edges.join(", ") }).unwrap();
    out
}

fn opt(r: &Option<Rat>, inf: &str) -> String {
    r.as_ref().map_or(inf.to_string(), Rat::to_string)
}

fn join(v: &[Rat]) -> String {
    if v.is_empty() {
        return "(none)".to_string();
    }
    v.iter().map(Rat::to_string).collect::<Vec<_>>().join(", ")
}

pub fn invariants_text(r: &InvariantsReport) -> String {
    let mut out = String::new();
    writeln!(out, "germ: {}", r.germ).unwrap();
    writeln!(out, "lct(f): {}", opt(&r.lct.f, "none (unit)")).unwrap();
    writeln!(out, "lct(g): {}", opt(&r.lct.g, "none (unit)")).unwrap();
    writeln!(out, "strip: {}", r.strip).unwrap();
    out.push_str(&bs_text(&r.bs_candidates));
    writeln!(
        out,
        "jumping number candidates: {}",
        join(&r.jn_candidates.iter().map(|t| t.value.clone()).collect::<Vec<_>>())
    )
    .unwrap();
    match &r.zeta_candidates {
        Some(z) => out.push_str(&zeta_text(z)),
        None => writeln!(out, "zeta candidates: g is a unit, classical case").unwrap(),
    }
    out
}

pub fn bs_text(set: &CandidateRootSet) -> String {
    let mut out = String::new();
    if set.is_empty() {
        writeln!(out, "candidate roots: none (no zero divisors; b(s) = 1 as for 1/g)").unwrap();
        return out;
    }
    writeln!(out, "candidate roots (l <= {}):", set.ell_max).unwrap();
    for g in &set.generators {
        writeln!(out, "  E{}: -({} + l)/{}  base {} step {}", g.divisor, g.k + 1, g.n, g.base, g.step).unwrap();
    }
    writeln!(out, "  values: {}", join(&set.values())).unwrap();
    out
}

pub fn zeta_text(z: &ZetaReport) -> String {
    let mut out = String::new();
    writeln!(out, "alpha = lct(g): {}", z.alpha).unwrap();
    writeln!(out, "convergence strip: {}", z.strip).unwrap();
    writeln!(out, "zeta - k*alpha (k <= {}): {}", z.lattice_depth, join(&z.left_candidates)).unwrap();
    writeln!(out, "k*alpha - xi (k <= {}): {}", z.lattice_depth, join(&z.right_candidates)).unwrap();
    writeln!(out, "note: {}", z.note).unwrap();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct BsReport {
    pub schema_version: u32,
    pub germ: String,
    pub candidates: CandidateRootSet,
    pub note: Option<String>,
}

impl BsReport {
    pub fn new(res: &ResolutionData, candidates: CandidateRootSet) -> BsReport {
        let note = candidates
            .is_empty()
            .then(|| "no zero divisors: the Bernstein-Sato polynomial is 1".to_string());
        BsReport {
            schema_version: SCHEMA_VERSION,
            germ: res.germ.to_string(),
            candidates,
            note,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaJson {
    pub schema_version: u32,
    pub germ: String,
    #[serde(flatten)]
    pub report: ZetaReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealJson {
    pub lambda: Rat,
    /// `[lo, hi)`; `hi` is null past the scanned range.
    pub interval: (Rat, Option<Rat>),
    pub generators: Vec<String>,
    pub truncation: u32,
    pub stable: bool,
    pub minimal: bool,
    pub dimension: usize,
}

impl IdealJson {
    pub fn new(lambda: &Rat, interval: (Rat, Option<Rat>), ideal: &IdealBasis, names: &[&str]) -> IdealJson {
        IdealJson {
            lambda: lambda.clone(),
            interval,
            generators: ideal.generator_strings(names),
            truncation: ideal.degree(),
            stable: ideal.is_stable().unwrap_or(true),
            minimal: ideal.is_minimal(),
            dimension: ideal.dim(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierJson {
    pub schema_version: u32,
    pub germ: String,
    pub constraints: ConstraintVector,
    pub ideal: IdealJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct JumpingJson {
    pub schema_version: u32,
    pub germ: String,
    pub lambda_max: Rat,
    pub truncation: u32,
    pub jumping_numbers: Vec<Rat>,
    pub regions: Vec<IdealJson>,
}

impl JumpingJson {
    pub fn new(res: &ResolutionData, rep: &JumpingReport) -> JumpingJson {
        let names = res.germ.var_refs();
        JumpingJson {
            schema_version: SCHEMA_VERSION,
            germ: res.germ.to_string(),
            lambda_max: rep.lambda_max.clone(),
            truncation: rep.degree,
            jumping_numbers: rep.jumping_numbers.clone(),
            regions: rep
                .regions
                .iter()
                .map(|r| IdealJson::new(&r.lo, (r.lo.clone(), r.hi.clone()), &r.ideal, &names))
                .collect(),
        }
    }
}

pub fn ideal_text(j: &IdealJson) -> String {
    let hi = opt(&j.interval.1, "...");
    let gens = if j.generators.is_empty() {
        "0".to_string()
    } else {
        j.generators.join(", ")
    };
    let mut line = format!("[{}, {}): ({gens})", j.interval.0, hi);
    if !j.stable {
        line.push_str("  [unstable at this truncation]");
    }
    line
}

pub fn jumping_text(j: &JumpingJson) -> String {
    let mut out = String::new();
    writeln!(out, "germ: {}", j.germ).unwrap();
    writeln!(out, "truncation degree: {}", j.truncation).unwrap();
    writeln!(out, "jumping numbers <= {}: {}", j.lambda_max, join(&j.jumping_numbers)).unwrap();
    for r in &j.regions {
        writeln!(out, "  {}", ideal_text(r)).unwrap();
    }
    out
}

pub fn multiplier_text(m: &MultiplierJson) -> String {
    let mut out = String::new();
    writeln!(out, "germ: {}", m.germ).unwrap();
    writeln!(out, "lambda: {}  truncation degree: {}", m.ideal.lambda, m.ideal.truncation).unwrap();
    let cs: Vec<String> = m.constraints.bounds.iter().map(|(id, c)| format!("E{id} >= {c}")).collect();
    writeln!(out, "constraints: {}", if cs.is_empty() { "none".to_string() } else { cs.join(", ") }).unwrap();
    let gens = if m.ideal.generators.is_empty() {
        "0".to_string()
    } else {
        m.ideal.generators.join(", ")
    };
    writeln!(out, "ideal: ({gens})").unwrap();
    if !m.ideal.stable {
        writeln!(out, "warning: generators may be incomplete; raise --degree").unwrap();
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FeqJson {
    pub schema_version: u32,
    pub f: String,
    pub g: String,
    pub alpha: Rat,
    pub operator: String,
    pub b: String,
    pub mode: FeqMode,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
    /// Numerator of `lhs - rhs` when the equation fails.
    pub witness: Option<String>,
}

impl FeqJson {
    pub fn new(
        names: &[&str],
        operator: String,
        b: &SPoly,
        mode: FeqMode,
        v: &Verification,
    ) -> FeqJson {
        let m = v.lhs.module();
        FeqJson {
            schema_version: SCHEMA_VERSION,
            f: m.f().display(names).to_string(),
            g: m.g().display(names).to_string(),
            alpha: m.alpha().clone(),
            operator,
            b: b.to_string(),
            mode,
            holds: v.holds,
            lhs: v.lhs.display(names),
            rhs: v.rhs.display(names),
            witness: (!v.holds).then(|| v.difference.display(names)),
        }
    }
}

pub fn feq_text(j: &FeqJson) -> String {
    let mut out = String::new();
    let mode = match j.mode {
        FeqMode::Numerator => "numerator",
        FeqMode::Quotient => "quotient",
    };
    writeln!(out, "f = {}, g = {}, alpha = {}, mode = {mode}", j.f, j.g, j.alpha).unwrap();
    writeln!(out, "operator: {}", j.operator).unwrap();
    writeln!(out, "b(s) = {}", j.b).unwrap();
    writeln!(out, "lhs: {}", j.lhs).unwrap();
    writeln!(out, "rhs: {}", j.rhs).unwrap();
    match &j.witness {
        None => writeln!(out, "holds: yes").unwrap(),
        Some(w) => writeln!(out, "holds: no, difference {w}").unwrap(),
    }
    out
}
