//! Embedded resolution of the plane curve `f*g = 0` by point blow-ups, with
//! the extra blow-ups that separate zeros from poles.
//!
//! Every blow-up center is a point of the current model, described by a
//! local chart whose origin is the point. Two elementary charts are used:
//! chart A sends `(u, v)` to `(u, u*(v + c))` and chart B sends `(u, v)` to
//! `(u*v, v)`.

mod blowup;
mod branch;
pub(crate) mod json;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{MPoly, Rat, UPoly};
use crate::germ::MeromorphicGerm;

pub use blowup::{resolve_pair, resolve_pair_with_cap, separate_dicritical, DEFAULT_BLOWUP_CAP};

/// Version of the persisted JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolutionError {
    #[error("resolution needs a germ in the plane variables x, y")]
    NotPlane,
    #[error("the germ f/g is constant")]
    ConstantGerm,
    #[error("f*g is a unit at the origin; there is nothing to resolve")]
    UnitGerm,
    #[error("blow-up center with irrational coordinates: {center}")]
    UnsupportedExtension { center: String },
    #[error("more than {cap} blow-ups; raise the cap if this is expected")]
    IterationCap { cap: usize },
    #[error("no divisor with id {0}")]
    UnknownDivisor(usize),
    #[error("the order of the zero polynomial along a divisor is infinite")]
    ZeroPolynomial,
    #[error("the {0} side has no zero at the origin")]
    ConstantSide(Side),
}

/// Which factor of the germ a curve comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    F,
    G,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::F => write!(f, "f"),
            Side::G => write!(f, "g"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorKind {
    Exceptional,
    StrictF,
    StrictG,
}

/// Sign class of `N_fg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorClass {
    Zero,
    Pole,
    Dicritical,
}

/// One elementary step of a chart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "lowercase")]
pub enum ChartStep {
    /// `(u, v) -> (u, u*(v + c))`
    A { c: Rat },
    /// `(u, v) -> (u*v, v)`
    B,
}

/// A local coordinate system `(u, v)` on the blown-up surface, given by the
/// images of `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chart {
    #[serde(with = "json::uv")]
    pub x: MPoly,
    #[serde(with = "json::uv")]
    pub y: MPoly,
    pub steps: Vec<ChartStep>,
}

impl Chart {
    pub fn identity() -> Chart {
        Chart {
            x: MPoly::var(2, 0),
            y: MPoly::var(2, 1),
            steps: Vec::new(),
        }
    }

    fn compose(&self, u_img: &MPoly, v_img: &MPoly, step: ChartStep) -> Chart {
        let imgs = [u_img.clone(), v_img.clone()];
        let mut steps = self.steps.clone();
        steps.push(step);
        Chart {
            x: self.x.substitute(&imgs),
            y: self.y.substitute(&imgs),
            steps,
        }
    }

    /// Follow with chart A centered at `v = c`.
    pub fn then_a(&self, c: &Rat) -> Chart {
        let (u, v) = (MPoly::var(2, 0), MPoly::var(2, 1));
        let shifted = &v + &MPoly::constant(2, c.clone());
        self.compose(&u, &(&u * &shifted), ChartStep::A { c: c.clone() })
    }

    /// Follow with chart B.
    pub fn then_b(&self) -> Chart {
        let (u, v) = (MPoly::var(2, 0), MPoly::var(2, 1));
        self.compose(&(&u * &v), &v, ChartStep::B)
    }

    /// Pull back a polynomial in `x, y`.
    pub fn pull(&self, h: &MPoly) -> MPoly {
        h.substitute(&[self.x.clone(), self.y.clone()])
    }

    /// Jacobian determinant of `(x, y)` with respect to `(u, v)`.
    pub fn jacobian(&self) -> MPoly {
        &(&self.x.derivative(0) * &self.y.derivative(1)) - &(&self.x.derivative(1) * &self.y.derivative(0))
    }
}

/// A smooth branch of a strict transform, `Q(u, v) = 0` in `chart`.
///
/// The branch passes through the points where the non-parameter coordinate
/// is a root `theta` of `modulus` and the parameter coordinate is zero; for
/// a branch through a rational point the modulus is `t`. Several conjugate
/// branches sharing one modulus are one divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub chart: Chart,
    #[serde(with = "json::uv")]
    pub equation: MPoly,
    pub param_axis: usize,
    #[serde(with = "json::upoly_t")]
    pub modulus: UPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Locus {
    /// The divisor is `{u = 0}` in this chart.
    Exceptional { chart: Chart },
    Branch(Branch),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorData {
    pub id: usize,
    pub kind: DivisorKind,
    pub n_f: u64,
    pub n_g: u64,
    pub k: u64,
    pub locus: Locus,
    /// For strict transforms: the irreducible polynomial in `x, y` cutting
    /// out the curve.
    pub component: Option<MPoly>,
}

impl DivisorData {
    pub fn n_fg(&self) -> i64 {
        self.n_f as i64 - self.n_g as i64
    }

    pub fn n(&self, side: Side) -> u64 {
        match side {
            Side::F => self.n_f,
            Side::G => self.n_g,
        }
    }

    pub fn class(&self) -> DivisorClass {
        match self.n_fg() {
            0 => DivisorClass::Dicritical,
            n if n > 0 => DivisorClass::Zero,
            _ => DivisorClass::Pole,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        self.kind == DivisorKind::Exceptional
    }
}

#[derive(Serialize, Deserialize)]
struct DivisorRepr {
    id: usize,
    kind: DivisorKind,
    #[serde(rename = "Nf")]
    n_f: u64,
    #[serde(rename = "Ng")]
    n_g: u64,
    #[serde(rename = "Nfg")]
    n_fg: i64,
    k: u64,
    class: DivisorClass,
    locus: Locus,
    #[serde(with = "json::opt_xy", default, skip_serializing_if = "Option::is_none")]
    component: Option<MPoly>,
}

impl Serialize for DivisorData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DivisorRepr {
            id: self.id,
            kind: self.kind,
            n_f: self.n_f,
            n_g: self.n_g,
            n_fg: self.n_fg(),
            k: self.k,
            class: self.class(),
            locus: self.locus.clone(),
            component: self.component.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<DivisorData, D::Error> {
        use serde::de::Error;
        let r = DivisorRepr::deserialize(d)?;
        let data = DivisorData {
            id: r.id,
            kind: r.kind,
            n_f: r.n_f,
            n_g: r.n_g,
            k: r.k,
            locus: r.locus,
            component: r.component,
        };
        if data.n_fg() != r.n_fg || data.class() != r.class {
            return Err(D::Error::custom(format!("divisor {}: Nfg or class inconsistent with Nf, Ng", r.id)));
        }
        Ok(data)
    }
}

/// A squarefree factor of `f` or `g` vanishing at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(with = "json::xy")]
    pub poly: MPoly,
    pub side: Side,
    pub multiplicity: u32,
}

/// An exceptional divisor through a point, as a coordinate axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisDivisor {
    pub id: usize,
    /// 0: the divisor is `{u = 0}`; 1: it is `{v = 0}`.
    pub axis: usize,
}

/// Local strict transform of a piece through a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCurve {
    pub piece: usize,
    #[serde(with = "json::uv")]
    pub equation: MPoly,
    pub strict_id: Option<usize>,
}

/// A point of a blown-up model, at the origin of `chart`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPoint {
    pub chart: Chart,
    pub exceptional: Vec<AxisDivisor>,
    pub curves: Vec<LocalCurve>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CrossingSite {
    Rational { point: LocalPoint },
    /// Conjugate points over the roots of `modulus` on the newest
    /// exceptional divisor; these cannot be blown up over the rationals.
    Conjugate {
        #[serde(with = "json::upoly_t")]
        modulus: UPoly,
    },
}

/// An intersection point of two components of the total transform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub components: Vec<usize>,
    pub site: CrossingSite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlowupKind {
    Resolution,
    Separation,
}

/// One point blow-up: the divisor it created and the divisors already known
/// to pass through its center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub divisor: usize,
    pub center_on: Vec<usize>,
    pub kind: BlowupKind,
}

/// Partition of divisor ids by the sign of `N_fg`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Classification {
    pub zero: Vec<usize>,
    pub pole: Vec<usize>,
    pub dicritical: Vec<usize>,
}

/// Result of resolving `f*g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionData {
    pub schema_version: u32,
    pub germ: MeromorphicGerm,
    pub pieces: Vec<Piece>,
    pub divisors: Vec<DivisorData>,
    pub edges: Vec<(usize, usize)>,
    pub history: Vec<BlowupRecord>,
    pub crossings: Vec<Crossing>,
    pub blowup_cap: usize,
}

impl ResolutionData {
    pub fn divisor(&self, id: usize) -> Result<&DivisorData, ResolutionError> {
        id.checked_sub(1)
            .and_then(|i| self.divisors.get(i))
            .ok_or(ResolutionError::UnknownDivisor(id))
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.divisors.iter().map(|d| d.id)
    }

    /// Order of vanishing of `h` along a divisor.
    pub fn ord_along(&self, id: usize, h: &MPoly) -> Result<u64, ResolutionError> {
        ord_along(self, id, h)
    }

    pub fn classify(&self) -> Classification {
        classify(self)
    }

    /// Ids adjacent to `id` in the dual graph.
    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Number of point blow-ups performed.
    pub fn blowup_count(&self) -> usize {
        self.history.len()
    }

    /// True if some crossing joins a zero divisor and a pole divisor.
    pub fn has_mixed_crossing(&self) -> bool {
        self.edges.iter().any(|&(a, b)| {
            let (na, nb) = (self.divisors[a - 1].n_fg(), self.divisors[b - 1].n_fg());
            (na > 0 && nb < 0) || (na < 0 && nb > 0)
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("resolution data serializes")
    }

    pub fn from_json(text: &str) -> Result<ResolutionData, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub(crate) fn recompute_edges(&mut self) {
        let mut edges = BTreeSet::new();
        for c in &self.crossings {
            for (i, &a) in c.components.iter().enumerate() {
                for &b in &c.components[i + 1..] {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        }
        self.edges = edges.into_iter().collect();
    }
}

/// Order of vanishing of `h` along divisor `id`: the `u`-adic valuation of
/// the pullback for exceptional divisors, and the multiplicity of the curve's
/// irreducible equation in `h` for strict transforms.
pub fn ord_along(res: &ResolutionData, id: usize, h: &MPoly) -> Result<u64, ResolutionError> {
    let d = res.divisor(id)?;
    if h.is_zero() {
        return Err(ResolutionError::ZeroPolynomial);
    }
    match (&d.locus, &d.component) {
        (Locus::Exceptional { chart }, _) => Ok(chart.pull(h).valuation(0).expect("nonzero pullback") as u64),
        (Locus::Branch(_), Some(c)) => Ok(h.divide_out(c).expect("nonconstant component").1 as u64),
        (Locus::Branch(b), None) => {
            let bound = res.germ.f().total_degree().unwrap_or(0) + res.germ.g().total_degree().unwrap_or(0);
            let c = branch::find_component(b, bound).ok_or(ResolutionError::UnknownDivisor(id))?;
            Ok(h.divide_out(&c).expect("nonconstant component").1 as u64)
        }
    }
}

/// Ids partitioned by the sign of `N_fg`.
pub fn classify(res: &ResolutionData) -> Classification {
    let mut out = Classification::default();
    for d in &res.divisors {
        match d.class() {
            DivisorClass::Zero => out.zero.push(d.id),
            DivisorClass::Pole => out.pole.push(d.id),
            DivisorClass::Dicritical => out.dicritical.push(d.id),
        }
    }
    out
}

/// Resolve and separate in one step, with the default blow-up cap.
pub fn resolve(germ: &MeromorphicGerm) -> Result<ResolutionData, ResolutionError> {
    separate_dicritical(resolve_pair(germ)?)
}
