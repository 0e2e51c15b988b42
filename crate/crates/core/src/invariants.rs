//! Numerical invariants read off a resolution: log-canonical thresholds,
//! candidate Bernstein-Sato roots and jumping numbers, the convergence strip
//! of the local zeta function and its candidate pole lattice.
//!
//! Every candidate set here is a superset. The true roots or poles cannot be
//! computed from numerical data alone.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::Rat;
use crate::resolution::{DivisorClass, ResolutionData, Side};

pub const DEFAULT_ELL_MAX: u32 = 8;
pub const DEFAULT_LATTICE_DEPTH: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantsError {
    #[error("{0:?} has no divisor with positive multiplicity through the origin")]
    ConstantSide(Side),
    #[error("the denominator is a unit at the origin; use the classical zeta function of f")]
    ClassicalCase,
}

/// `min (k_i + 1) / N_i` over divisors with `N_i > 0` on the chosen side.
pub fn lct(res: &ResolutionData, side: Side) -> Result<Rat, InvariantsError> {
    res.divisors
        .iter()
        .filter(|d| d.n(side) > 0)
        .map(|d| Rat::new(d.k as i64 + 1, d.n(side) as i64))
        .min()
        .ok_or(InvariantsError::ConstantSide(side))
}

/// One arithmetic progression of candidates, from a single divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootGenerator {
    pub divisor: usize,
    pub n: i64,
    pub k: u64,
    /// `(k + 1) / N`.
    pub base: Rat,
    /// `1 / N`.
    pub step: Rat,
}

/// A candidate value with the divisors producing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tagged {
    pub value: Rat,
    pub divisors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateRootSet {
    pub generators: Vec<RootGenerator>,
    pub ell_max: u32,
    /// `-(k + 1 + l) / N` for `l <= ell_max`, closest to zero first.
    pub enumerated: Vec<Tagged>,
}

impl CandidateRootSet {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn values(&self) -> Vec<Rat> {
        self.enumerated.iter().map(|t| t.value.clone()).collect()
    }

    /// Membership in the full (untruncated) candidate set.
    pub fn contains(&self, root: &Rat) -> bool {
        let lambda = -root;
        self.generators.iter().any(|g| in_progression(&lambda, g))
    }
}

fn in_progression(lambda: &Rat, g: &RootGenerator) -> bool {
    let l = lambda * &Rat::from(g.n) - Rat::from(g.k + 1);
    l.is_integer() && !l.is_negative()
}

/// Generators from the divisors with `N > 0`, where `N` is `N_fg`
/// (or `-N_fg` for the reciprocal germ).
fn generators(res: &ResolutionData, reciprocal: bool) -> Vec<RootGenerator> {
    res.divisors
        .iter()
        .filter_map(|d| {
            let n = if reciprocal { -d.n_fg() } else { d.n_fg() };
            (n > 0).then(|| RootGenerator {
                divisor: d.id,
                n,
                k: d.k,
                base: Rat::new(d.k as i64 + 1, n),
                step: Rat::new(1, n),
            })
        })
        .collect()
}

fn tag(values: impl IntoIterator<Item = (Rat, usize)>) -> Vec<Tagged> {
    let mut map: BTreeMap<Rat, Vec<usize>> = BTreeMap::new();
    for (v, id) in values {
        let ids = map.entry(v).or_default();
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    map.into_iter()
        .map(|(value, mut divisors)| {
            divisors.sort_unstable();
            Tagged { value, divisors }
        })
        .collect()
}

fn root_set(res: &ResolutionData, ell_max: u32, reciprocal: bool) -> CandidateRootSet {
    let generators = generators(res, reciprocal);
    let mut enumerated = tag(generators.iter().flat_map(|g| {
        (0..=ell_max).map(move |l| (-Rat::new((g.k + 1 + l as u64) as i64, g.n), g.divisor))
    }));
    enumerated.reverse();
    CandidateRootSet {
        generators,
        ell_max,
        enumerated,
    }
}

/// Candidate roots `-(k + 1 + l) / N_fg` over the zero divisors. Empty when
/// there are none, which is the case of `1/g`.
pub fn candidate_bs_roots(res: &ResolutionData, ell_max: u32) -> CandidateRootSet {
    root_set(res, ell_max, false)
}

/// Candidate roots of the reciprocal germ `g/f`, read from the pole divisors.
pub fn candidate_bs_roots_reciprocal(res: &ResolutionData, ell_max: u32) -> CandidateRootSet {
    root_set(res, ell_max, true)
}

/// Candidates `(k + 1 + l) / N_fg <= lambda_max` over the zero divisors,
/// ascending.
pub fn candidate_jumping_numbers(res: &ResolutionData, lambda_max: &Rat) -> Vec<Tagged> {
    let mut out = Vec::new();
    for g in generators(res, false) {
        let mut v = g.base.clone();
        while &v <= lambda_max {
            out.push((v.clone(), g.divisor));
            v = &v + &g.step;
        }
    }
    tag(out)
}

/// An open interval with possibly infinite ends (`None`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strip {
    pub lower: Option<Rat>,
    pub upper: Option<Rat>,
}

impl Strip {
    pub fn contains(&self, x: &Rat) -> bool {
        self.lower.as_ref().map_or(true, |l| l < x) && self.upper.as_ref().map_or(true, |u| x < u)
    }
}

impl fmt::Display for Strip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            Some(l) => write!(f, "({l}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.upper {
            Some(u) => write!(f, "{u})"),
            None => write!(f, "+inf)"),
        }
    }
}

/// `(-lct(f), lct(g))`, infinite where a side is a unit.
pub fn convergence_strip(res: &ResolutionData) -> Strip {
    Strip {
        lower: lct(res, Side::F).ok().map(|l| -l),
        upper: lct(res, Side::G).ok(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaReport {
    /// `lct(g)`; computed, never supplied.
    pub alpha: Rat,
    pub strip: Strip,
    pub lattice_depth: u32,
    pub ell_max: u32,
    /// Candidate roots standing in for the roots of `b_{f/g}`.
    pub zeta: Vec<Rat>,
    /// Candidate roots standing in for the roots of `b_{g/f}`.
    pub xi: Vec<Rat>,
    /// `zeta - k alpha`, descending.
    pub left_candidates: Vec<Rat>,
    /// `k alpha - xi`, ascending.
    pub right_candidates: Vec<Rat>,
    pub note: String,
}

/// Candidate poles of the local zeta function of `f/g`.
pub fn candidate_zeta_poles(
    res: &ResolutionData,
    lattice_depth: u32,
    ell_max: u32,
) -> Result<ZetaReport, InvariantsError> {
    let alpha = lct(res, Side::G).map_err(|_| InvariantsError::ClassicalCase)?;
    let zeta = candidate_bs_roots(res, ell_max).values();
    let xi = candidate_bs_roots_reciprocal(res, ell_max).values();
    let mut left = std::collections::BTreeSet::new();
    let mut right = std::collections::BTreeSet::new();
    for k in 0..=lattice_depth {
        let ka = &alpha * &Rat::from(k);
        for z in &zeta {
            left.insert(z - &ka);
        }
        for x in &xi {
            right.insert(&ka - x);
        }
    }
    Ok(ZetaReport {
        strip: convergence_strip(res),
        alpha,
        lattice_depth,
        ell_max,
        zeta,
        xi,
        left_candidates: left.into_iter().rev().collect(),
        right_candidates: right.into_iter().collect(),
        note: "candidate supersets built from candidate roots; not exact pole sets".to_string(),
    })
}

/// The combined report printed by `invariants`.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantsReport {
    pub schema_version: u32,
    pub germ: String,
    pub lct: LctPair,
    pub strip: Strip,
    pub bs_candidates: CandidateRootSet,
    pub zeta_candidates: Option<ZetaReport>,
    pub jn_candidates: Vec<Tagged>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LctPair {
    pub f: Option<Rat>,
    pub g: Option<Rat>,
}

pub fn report(res: &ResolutionData, ell_max: u32, lattice_depth: u32, lambda_max: &Rat) -> InvariantsReport {
    InvariantsReport {
        schema_version: crate::resolution::SCHEMA_VERSION,
        germ: res.germ.to_string(),
        lct: LctPair {
            f: lct(res, Side::F).ok(),
            g: lct(res, Side::G).ok(),
        },
        strip: convergence_strip(res),
        bs_candidates: candidate_bs_roots(res, ell_max),
        zeta_candidates: candidate_zeta_poles(res, lattice_depth, ell_max).ok(),
        jn_candidates: candidate_jumping_numbers(res, lambda_max),
    }
}

/// Zero divisors; the only ones that constrain multiplier ideals.
pub fn zero_divisors(res: &ResolutionData) -> Vec<usize> {
    res.divisors
        .iter()
        .filter(|d| d.class() == DivisorClass::Zero)
        .map(|d| d.id)
        .collect()
}
