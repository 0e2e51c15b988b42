//! Multiplier ideals `J((f/g)^lambda)` and mixed ideals `J(f^l1 g^l2)` from
//! a resolution.
//!
//! A polynomial `h` lies in the ideal when `ord_E(h) >= c_E` for every
//! divisor with a positive bound `c_E`. Restricted to polynomials of degree
//! at most `D` this is a linear condition on the coefficients of `h`, so
//! `J ∩ P_D` is computed exactly as a null space. Strict transforms are
//! handled by factoring out `prod F^c`; an exceptional divisor then asks
//! the pullback of the cofactor to vanish modulo `u^b` in its chart.
//!
//! Truncated spaces are kept in reduced echelon form over the monomials of
//! degree `<= D` in ascending graded order, so each row is led by its lowest
//! monomial and two spaces are equal exactly when their rows agree.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::{monomials_up_to, linalg::Echelon, linalg::SparseRow, MPoly, Mono, Rat};
use crate::invariants;
use crate::resolution::{Chart, Locus, ResolutionData, ResolutionError, Side};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MultiplierError {
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error("lambda must be non-negative, got {0}")]
    NegativeLambda(Rat),
    #[error("truncation degree must be at least 1")]
    ZeroDegree,
    #[error("divisor {0} has no recorded curve equation")]
    MissingComponent(usize),
    #[error("generators found up to degree {degree} do not generate the ideal in degree {}", degree + 2)]
    StabilityWarning { degree: u32 },
    #[error("the colon relation needs t >= lambda")]
    ColonExponent,
}

/// Positive lower bounds on `ord_E`, keyed by divisor id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintVector {
    pub bounds: BTreeMap<usize, u64>,
}

impl ConstraintVector {
    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    fn signed(&self) -> BTreeMap<usize, i64> {
        self.bounds.iter().map(|(&id, &c)| (id, c as i64)).collect()
    }
}

fn check_lambda(l: &Rat) -> Result<(), MultiplierError> {
    if l.is_negative() {
        return Err(MultiplierError::NegativeLambda(l.clone()));
    }
    Ok(())
}

/// `c_i = floor(lambda N_fg,i) - k_i` over the zero divisors, kept when
/// positive.
pub fn constraint_vector(res: &ResolutionData, lambda: &Rat) -> ConstraintVector {
    let mut bounds = BTreeMap::new();
    for d in res.divisors.iter().filter(|d| d.n_fg() > 0) {
        let c = (lambda * &Rat::from(d.n_fg())).floor_i64() - d.k as i64;
        if c > 0 {
            bounds.insert(d.id, c as u64);
        }
    }
    ConstraintVector { bounds }
}

/// `c_i = floor(l1 N_f,i + l2 N_g,i) - k_i` over all divisors.
pub fn mixed_constraint_vector(res: &ResolutionData, l1: &Rat, l2: &Rat) -> ConstraintVector {
    let mut bounds = BTreeMap::new();
    for d in &res.divisors {
        let v = l1 * &Rat::from(d.n_f) + l2 * &Rat::from(d.n_g);
        let c = v.floor_i64() - d.k as i64;
        if c > 0 {
            bounds.insert(d.id, c as u64);
        }
    }
    ConstraintVector { bounds }
}

/// Monomials of degree `<= degree`, ascending, with their positions.
#[derive(Debug, Clone)]
struct Space {
    nvars: usize,
    degree: u32,
    monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl Space {
    fn new(nvars: usize, degree: u32) -> Space {
        let monos = monomials_up_to(nvars, degree);
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Space {
            nvars,
            degree,
            monos,
            index,
        }
    }

    fn row(&self, p: &MPoly) -> Option<SparseRow> {
        let mut row = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            row.push((*self.index.get(m)?, c.clone()));
        }
        row.sort_by_key(|(j, _)| *j);
        Some(row)
    }

    fn poly(&self, row: &SparseRow) -> MPoly {
        MPoly::from_terms(self.nvars, row.iter().map(|(j, c)| (self.monos[*j].clone(), c.clone())))
    }
}

/// Exact `{h in P_D : ord_E(h) >= c_E}` for the given bounds. Bounds that are
/// not positive are ignored.
fn valuative_subspace(
    res: &ResolutionData,
    bounds: &BTreeMap<usize, i64>,
    space: &Space,
) -> Result<Echelon, MultiplierError> {
    let nvars = space.nvars;
    // Strict transforms: h must be divisible by F^c. Conjugate branches may
    // share a curve equation, in which case the largest bound wins.
    let mut strict: Vec<(MPoly, u32)> = Vec::new();
    for (&id, &c) in bounds.iter().filter(|(_, &c)| c > 0) {
        let d = res.divisor(id)?;
        if d.is_exceptional() {
            continue;
        }
        let f = d.component.clone().ok_or(MultiplierError::MissingComponent(id))?;
        match strict.iter_mut().find(|(g, _)| *g == f) {
            Some(slot) => slot.1 = slot.1.max(c as u32),
            None => strict.push((f, c as u32)),
        }
    }
    let pi = strict.iter().fold(MPoly::one(nvars), |acc, (f, c)| &acc * &f.pow(*c));
    let dpi = pi.total_degree().unwrap_or(0);
    let mut out = Echelon::new(space.monos.len());
    if dpi > space.degree {
        return Ok(out);
    }
    let cofactor = Space::new(nvars, space.degree - dpi);
    let mut constraints = Echelon::new(cofactor.monos.len());
    for (&id, &c) in bounds.iter().filter(|(_, &c)| c > 0) {
        let d = res.divisor(id)?;
        let Locus::Exceptional { chart } = &d.locus else {
            continue;
        };
        let mut shift = 0i64;
        for (f, e) in &strict {
            shift += *e as i64 * chart.pull(f).valuation(0).expect("nonzero pullback") as i64;
        }
        let b = c - shift;
        if b <= 0 {
            continue;
        }
        for row in pullback_rows(chart, &cofactor, b as u32) {
            constraints.insert(&row);
            if constraints.is_full() {
                break;
            }
        }
    }
    for v in constraints.kernel() {
        let h = &pi * &cofactor.poly(&v);
        out.insert(&space.row(&h).expect("degree within bound"));
    }
    Ok(out)
}

/// Linear conditions for the pullback of a generic element of `space` to
/// vanish modulo `u^b`: one row per monomial `u^j v^l`, `j < b`.
fn pullback_rows(chart: &Chart, space: &Space, b: u32) -> Vec<SparseRow> {
    let powers = |p: &MPoly| {
        let p = p.truncate_var(0, b);
        let mut out = vec![MPoly::one(2)];
        for _ in 0..space.degree {
            let next = out.last().unwrap().mul_truncated(&p, 0, b);
            out.push(next);
        }
        out
    };
    let xp = powers(&chart.x);
    let yp = powers(&chart.y);
    let mut rows: BTreeMap<Mono, SparseRow> = BTreeMap::new();
    for (j, m) in space.monos.iter().enumerate() {
        let pb = xp[m.0[0] as usize].mul_truncated(&yp[m.0[1] as usize], 0, b);
        for (key, c) in pb.terms() {
            rows.entry(key.clone()).or_default().push((j, c.clone()));
        }
    }
    rows.into_values().collect()
}

/// `J ∩ P_D` in reduced form together with extracted generators.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    space: Space,
    echelon: Echelon,
    generators: Vec<MPoly>,
    minimal: bool,
    stable: Option<bool>,
}

impl PartialEq for IdealBasis {
    fn eq(&self, other: &IdealBasis) -> bool {
        self.space.degree == other.space.degree && self.echelon.rows() == other.echelon.rows()
    }
}

impl IdealBasis {
    fn from_echelon(space: Space, echelon: Echelon) -> IdealBasis {
        let (generators, minimal) = extract_generators(&space, &echelon);
        IdealBasis {
            space,
            echelon,
            generators,
            minimal,
            stable: None,
        }
    }

    /// The ideal generated by `gens`, truncated at `degree`.
    pub fn from_generators(gens: &[MPoly], degree: u32) -> IdealBasis {
        let nvars = gens.first().map_or(2, MPoly::nvars);
        let space = Space::new(nvars, degree);
        let echelon = span_of_multiples(&space, gens);
        IdealBasis::from_echelon(space, echelon)
    }

    pub fn degree(&self) -> u32 {
        self.space.degree
    }

    /// Dimension of `J ∩ P_D`.
    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_unit(&self) -> bool {
        self.echelon.pivot_columns().first() == Some(&0)
    }

    /// Reduced basis, ascending by leading (lowest) monomial.
    pub fn basis(&self) -> Vec<MPoly> {
        self.echelon.rows().iter().map(|r| self.space.poly(r)).collect()
    }

    /// Leading monomials of the reduced basis.
    pub fn staircase(&self) -> Vec<Mono> {
        self.echelon.pivot_columns().into_iter().map(|j| self.space.monos[j].clone()).collect()
    }

    pub fn generators(&self) -> &[MPoly] {
        &self.generators
    }

    /// No generator is redundant among those of degree `<= D`.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Whether the generators still generate in degree `D + 2`; `None` when
    /// not checked.
    pub fn is_stable(&self) -> Option<bool> {
        self.stable
    }

    pub fn require_stable(self) -> Result<IdealBasis, MultiplierError> {
        match self.stable {
            Some(false) => Err(MultiplierError::StabilityWarning { degree: self.degree() }),
            _ => Ok(self),
        }
    }

    /// Membership of a polynomial of degree `<= D`; `None` above that.
    pub fn contains(&self, h: &MPoly) -> Option<bool> {
        if h.is_zero() {
            return Some(true);
        }
        self.space.row(h).map(|r| self.echelon.contains(&r))
    }

    pub fn generator_strings(&self, names: &[&str]) -> Vec<String> {
        self.generators.iter().map(|g| g.display(names).to_string()).collect()
    }
}

fn span_of_multiples(space: &Space, gens: &[MPoly]) -> Echelon {
    let mut e = Echelon::new(space.monos.len());
    for g in gens {
        add_multiples(space, &mut e, g);
    }
    e
}

fn add_multiples(space: &Space, e: &mut Echelon, g: &MPoly) {
    let Some(dg) = g.total_degree() else {
        return;
    };
    if dg > space.degree {
        return;
    }
    for m in monomials_up_to(space.nvars, space.degree - dg) {
        let row = space.row(&g.mul_monomial(&m, &Rat::one())).expect("degree within bound");
        e.insert(&row);
        if e.is_full() {
            return;
        }
    }
}

/// Rows led by the corners of the staircase, then any row they miss, then
/// drop generators the others already produce.
fn extract_generators(space: &Space, echelon: &Echelon) -> (Vec<MPoly>, bool) {
    let rows = echelon.rows();
    let leads: Vec<&Mono> = rows.iter().map(|r| &space.monos[r[0].0]).collect();
    let mut gens: Vec<MPoly> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let corner = !leads.iter().enumerate().any(|(j, m)| j != i && m.divides(leads[i]));
        if corner {
            gens.push(space.poly(row));
        }
    }
    let mut closure = span_of_multiples(space, &gens);
    for row in &rows {
        if closure.rank() == echelon.rank() {
            break;
        }
        if !closure.contains(row) {
            let g = space.poly(row);
            add_multiples(space, &mut closure, &g);
            gens.push(g);
        }
    }
    let mut i = gens.len();
    while i > 0 {
        i -= 1;
        if gens.len() == 1 {
            break;
        }
        let others: Vec<MPoly> = gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        if span_of_multiples(space, &others).rank() == echelon.rank() {
            gens.remove(i);
        }
    }
    (gens, true)
}

/// Truncation degree used when none is given: enough to see every active
/// bound through a coordinate, and at least `deg f * ceil(lambda_max)`.
pub fn default_degree(res: &ResolutionData, lambda_max: &Rat) -> u32 {
    let cv = constraint_vector(res, lambda_max);
    let mut need = 0u64;
    for (&id, &c) in &cv.bounds {
        let d = res.divisor(id).expect("id from the resolution");
        let per = match (&d.locus, &d.component) {
            (Locus::Exceptional { .. }, _) => {
                let vx = res.ord_along(id, &MPoly::var(2, 0)).unwrap_or(0);
                let vy = res.ord_along(id, &MPoly::var(2, 1)).unwrap_or(0);
                let m = [vx, vy].into_iter().filter(|&v| v > 0).min().unwrap_or(1);
                c.div_ceil(m)
            }
            (_, Some(f)) => c * f.total_degree().unwrap_or(1) as u64,
            (_, None) => c,
        };
        need = need.max(per);
    }
    let deg_f = res.germ.f().total_degree().unwrap_or(0) as u64;
    let floor = deg_f * lambda_max.ceil_i64().max(0) as u64;
    (need + 2).max(floor).max(1) as u32
}

fn ideal(res: &ResolutionData, bounds: &BTreeMap<usize, i64>, degree: u32) -> Result<IdealBasis, MultiplierError> {
    if degree == 0 {
        return Err(MultiplierError::ZeroDegree);
    }
    let space = Space::new(res.germ.nvars(), degree);
    let echelon = valuative_subspace(res, bounds, &space)?;
    let mut basis = IdealBasis::from_echelon(space, echelon);
    let wide = Space::new(res.germ.nvars(), degree + 2);
    let exact = valuative_subspace(res, bounds, &wide)?;
    basis.stable = Some(span_of_multiples(&wide, &basis.generators).rank() == exact.rank());
    Ok(basis)
}

/// `J((f/g)^lambda) ∩ P_D`, with generators and a stability flag.
pub fn multiplier_ideal(res: &ResolutionData, lambda: &Rat, degree: u32) -> Result<IdealBasis, MultiplierError> {
    check_lambda(lambda)?;
    ideal(res, &constraint_vector(res, lambda).signed(), degree)
}

/// `J(f^l1 g^l2) ∩ P_D`.
pub fn mixed_multiplier_ideal(
    res: &ResolutionData,
    l1: &Rat,
    l2: &Rat,
    degree: u32,
) -> Result<IdealBasis, MultiplierError> {
    check_lambda(l1)?;
    check_lambda(l2)?;
    ideal(res, &mixed_constraint_vector(res, l1, l2).signed(), degree)
}

/// Untruncated membership: compares `ord_E(h)` with every bound.
pub fn membership(res: &ResolutionData, h: &MPoly, lambda: &Rat) -> Result<bool, MultiplierError> {
    if h.is_zero() {
        return Ok(true);
    }
    for (&id, &c) in &constraint_vector(res, lambda).bounds {
        if res.ord_along(id, h)? < c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Jumping numbers up to `lambda_max` with the ideal starting at each.
pub fn jumping_numbers(
    res: &ResolutionData,
    lambda_max: &Rat,
    degree: u32,
) -> Result<Vec<(Rat, IdealBasis)>, MultiplierError> {
    Ok(jumping_report(res, lambda_max, degree)?
        .regions
        .into_iter()
        .skip(1)
        .map(|r| (r.lo, r.ideal))
        .collect())
}

/// A maximal interval `[lo, hi)` on which the ideal is constant.
#[derive(Debug, Clone)]
pub struct Region {
    pub lo: Rat,
    /// `None` when the next jump lies beyond the scanned range.
    pub hi: Option<Rat>,
    pub ideal: IdealBasis,
}

#[derive(Debug, Clone)]
pub struct JumpingReport {
    pub degree: u32,
    pub lambda_max: Rat,
    pub jumping_numbers: Vec<Rat>,
    /// The first region starts at 0 (open there); the others at a jump.
    pub regions: Vec<Region>,
}

/// Scan candidate jumping numbers in order. The constraint vector only
/// changes at candidates, so the ideal just below a candidate is the one at
/// the previous candidate.
pub fn jumping_report(res: &ResolutionData, lambda_max: &Rat, degree: u32) -> Result<JumpingReport, MultiplierError> {
    check_lambda(lambda_max)?;
    if degree == 0 {
        return Err(MultiplierError::ZeroDegree);
    }
    let space = Space::new(res.germ.nvars(), degree);
    let candidates: Vec<Rat> = invariants::candidate_jumping_numbers(res, lambda_max)
        .into_iter()
        .map(|t| t.value)
        .collect();
    let mut prev_cv = constraint_vector(res, &Rat::zero());
    let mut prev_rank = valuative_subspace(res, &prev_cv.signed(), &space)?.rank();
    let mut regions = vec![Region {
        lo: Rat::zero(),
        hi: None,
        ideal: ideal(res, &prev_cv.signed(), degree)?,
    }];
    let mut jumps = Vec::new();
    for (i, lambda) in candidates.iter().enumerate() {
        let cv = constraint_vector(res, lambda);
        if let Some(next) = candidates.get(i + 1) {
            let mid = (lambda + next) * Rat::new(1, 2);
            debug_assert_eq!(constraint_vector(res, &mid), cv, "bounds move only at candidates");
        }
        if cv == prev_cv {
            continue;
        }
        let rank = valuative_subspace(res, &cv.signed(), &space)?.rank();
        if rank < prev_rank {
            regions.last_mut().expect("initial region").hi = Some(lambda.clone());
            regions.push(Region {
                lo: lambda.clone(),
                hi: None,
                ideal: ideal(res, &cv.signed(), degree)?,
            });
            jumps.push(lambda.clone());
        }
        prev_cv = cv;
        prev_rank = rank;
    }
    Ok(JumpingReport {
        degree,
        lambda_max: lambda_max.clone(),
        jumping_numbers: jumps,
        regions,
    })
}

/// `J((f/g)^n) = (f^n)` at truncation `D`.
pub fn check_integer_power(res: &ResolutionData, n: u32, degree: u32) -> Result<bool, MultiplierError> {
    let lhs = multiplier_ideal(res, &Rat::from(n), degree)?;
    let rhs = IdealBasis::from_generators(&[res.germ.f().pow(n)], degree);
    Ok(lhs == rhs)
}

/// `{h in P_D : h m in target}`.
fn preimage(space: &Space, m: &MPoly, target_space: &Space, target: &Echelon) -> Echelon {
    let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for (j, mono) in space.monos.iter().enumerate() {
        let img = target_space
            .row(&m.mul_monomial(mono, &Rat::one()))
            .expect("target degree covers the product");
        for (k, c) in target.reduce(&img) {
            rows.entry(k).or_default().push((j, c));
        }
    }
    let mut constraints = Echelon::new(space.monos.len());
    for row in rows.values() {
        constraints.insert(row);
    }
    let mut out = Echelon::new(space.monos.len());
    for v in constraints.kernel() {
        out.insert(&v);
    }
    out
}

/// `h in J((f/g)^(lambda + l))` iff `h g^l in f^l J((f/g)^lambda)`, checked
/// on `P_D`.
pub fn check_skoda(res: &ResolutionData, lambda: &Rat, ell: u32, degree: u32) -> Result<bool, MultiplierError> {
    check_lambda(lambda)?;
    let nvars = res.germ.nvars();
    let f_l = res.germ.f().pow(ell);
    let g_l = res.germ.g().pow(ell);
    let lhs = multiplier_ideal(res, &(lambda + &Rat::from(ell)), degree)?;
    let top = degree + g_l.total_degree().unwrap_or(0);
    let top_space = Space::new(nvars, top);
    let mut target = Echelon::new(top_space.monos.len());
    let df = f_l.total_degree().unwrap_or(0);
    if df <= top {
        let inner_space = Space::new(nvars, top - df);
        let inner = valuative_subspace(res, &constraint_vector(res, lambda).signed(), &inner_space)?;
        for row in inner.rows() {
            let h = &f_l * &inner_space.poly(&row);
            target.insert(&top_space.row(&h).expect("degree within bound"));
        }
    }
    let rhs = preimage(&lhs.space, &g_l, &top_space, &target);
    Ok(lhs.echelon.rows() == rhs.rows())
}

/// `J(f^lambda g^(t - lambda)) : g^t = J((f/g)^lambda)` on `P_D`.
pub fn check_colon_relation(res: &ResolutionData, lambda: &Rat, t: u32, degree: u32) -> Result<bool, MultiplierError> {
    check_lambda(lambda)?;
    let t_rat = Rat::from(t);
    if &t_rat < lambda {
        return Err(MultiplierError::ColonExponent);
    }
    let nvars = res.germ.nvars();
    let g_t = res.germ.g().pow(t);
    let top = degree + g_t.total_degree().unwrap_or(0);
    let top_space = Space::new(nvars, top);
    let mixed = valuative_subspace(res, &mixed_constraint_vector(res, lambda, &(&t_rat - lambda)).signed(), &top_space)?;
    let rhs = multiplier_ideal(res, lambda, degree)?;
    let lhs = preimage(&rhs.space, &g_t, &top_space, &mixed);
    Ok(lhs.rows() == rhs.echelon.rows())
}

/// Whether `J((f/g)^(lambda + 1)) = f J((f/g)^lambda)` on `P_D`. This can
/// fail for meromorphic germs.
pub fn check_periodicity(res: &ResolutionData, lambda: &Rat, degree: u32) -> Result<bool, MultiplierError> {
    let lhs = multiplier_ideal(res, &(lambda + &Rat::one()), degree)?;
    let f = res.germ.f();
    let space = Space::new(res.germ.nvars(), degree);
    let mut rhs = Echelon::new(space.monos.len());
    let df = f.total_degree().unwrap_or(0);
    if df <= degree {
        let inner_space = Space::new(res.germ.nvars(), degree - df);
        let inner = valuative_subspace(res, &constraint_vector(res, lambda).signed(), &inner_space)?;
        for row in inner.rows() {
            rhs.insert(&space.row(&(f * &inner_space.poly(&row))).expect("degree within bound"));
        }
    }
    Ok(lhs.echelon.rows() == rhs.rows())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckEntry {
    pub lambda: Rat,
    /// `-lambda`, expected to be a root of the Bernstein-Sato polynomial.
    pub predicted_root: Rat,
    pub in_candidates: bool,
    pub divisors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    /// The window `(lower, 1]`.
    pub lower: Rat,
    pub entries: Vec<CrosscheckEntry>,
}

impl CrosscheckReport {
    pub fn all_present(&self) -> bool {
        self.entries.iter().all(|e| e.in_candidates)
    }
}

/// Jumping numbers in `(1 - lct(g), 1]` against the candidate root set.
pub fn jn_bs_crosscheck(res: &ResolutionData, degree: u32) -> Result<CrosscheckReport, MultiplierError> {
    let lower = match invariants::lct(res, Side::G) {
        Ok(a) => (Rat::one() - a).max(Rat::zero()),
        Err(_) => Rat::zero(),
    };
    let roots = invariants::candidate_bs_roots(res, 0);
    let mut entries = Vec::new();
    for (lambda, _) in jumping_numbers(res, &Rat::one(), degree)? {
        if lambda <= lower {
            continue;
        }
        let predicted_root = -&lambda;
        let divisors = roots
            .generators
            .iter()
            .filter(|g| {
                let l = &lambda * &Rat::from(g.n) - Rat::from(g.k + 1);
                l.is_integer() && !l.is_negative()
            })
            .map(|g| g.divisor)
            .collect::<Vec<_>>();
        entries.push(CrosscheckEntry {
            in_candidates: roots.contains(&predicted_root),
            lambda,
            predicted_root,
            divisors,
        });
    }
    Ok(CrosscheckReport { lower, entries })
}
