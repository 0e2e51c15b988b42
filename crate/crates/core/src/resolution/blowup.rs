//! The blow-up engine.

use std::collections::BTreeMap;

use crate::algebra::{rational_roots, squarefree_decomposition, MPoly, Mono, Rat, UPoly};
use crate::germ::MeromorphicGerm;

use super::branch::find_component;
use super::{
    AxisDivisor, BlowupKind, BlowupRecord, Branch, Chart, Crossing, CrossingSite, DivisorData, DivisorKind,
    LocalCurve, LocalPoint, Locus, Piece, ResolutionData, ResolutionError, Side, SCHEMA_VERSION,
};

/// Default safety bound on the number of point blow-ups.
pub const DEFAULT_BLOWUP_CAP: usize = 64;

struct Engine<'a> {
    pieces: &'a [Piece],
    divisors: Vec<DivisorData>,
    crossings: Vec<Crossing>,
    history: Vec<BlowupRecord>,
    cap: usize,
    kind: BlowupKind,
}

fn linear_coeffs(q: &MPoly) -> (Rat, Rat) {
    (q.coeff(&Mono(vec![1, 0])), q.coeff(&Mono(vec![0, 1])))
}

fn describe(chart: &Chart) -> String {
    format!(
        "chart x = {}, y = {}",
        chart.x.display(&["u", "v"]),
        chart.y.display(&["u", "v"])
    )
}

impl Engine<'_> {
    fn next_id(&self) -> usize {
        self.divisors.len() + 1
    }

    fn needs_blowup(&self, p: &LocalPoint) -> bool {
        if p.exceptional.len() + p.curves.len() >= 3 {
            return true;
        }
        if p.curves.iter().any(|c| c.equation.order() != Some(1)) {
            return true;
        }
        for (i, a) in p.curves.iter().enumerate() {
            let (a1, a2) = linear_coeffs(&a.equation);
            for e in &p.exceptional {
                let tangent = if e.axis == 0 { a2.is_zero() } else { a1.is_zero() };
                if tangent {
                    return true;
                }
            }
            for b in &p.curves[i + 1..] {
                let (b1, b2) = linear_coeffs(&b.equation);
                if (&a1 * &b2 - &a2 * &b1).is_zero() {
                    return true;
                }
            }
        }
        false
    }

    fn new_strict(&mut self, piece: usize, branch: Branch) -> usize {
        let p = &self.pieces[piece];
        let id = self.next_id();
        let e = p.multiplicity as u64;
        let (kind, n_f, n_g) = match p.side {
            Side::F => (DivisorKind::StrictF, e, 0),
            Side::G => (DivisorKind::StrictG, 0, e),
        };
        self.divisors.push(DivisorData {
            id,
            kind,
            n_f,
            n_g,
            k: 0,
            locus: Locus::Branch(branch),
            component: None,
        });
        id
    }

    fn finish(&mut self, mut p: LocalPoint) {
        for i in 0..p.curves.len() {
            if p.curves[i].strict_id.is_some() {
                continue;
            }
            let q = &p.curves[i].equation;
            let (a1, a2) = linear_coeffs(q);
            let param_axis = match p.exceptional.first() {
                Some(e) => e.axis,
                None if !a2.is_zero() => 0,
                None => {
                    debug_assert!(!a1.is_zero());
                    1
                }
            };
            let branch = Branch {
                chart: p.chart.clone(),
                equation: q.clone(),
                param_axis,
                modulus: UPoly::var(),
            };
            let id = self.new_strict(p.curves[i].piece, branch);
            p.curves[i].strict_id = Some(id);
        }
        let mut components: Vec<usize> = p.exceptional.iter().map(|e| e.id).collect();
        components.extend(p.curves.iter().filter_map(|c| c.strict_id));
        if components.len() >= 2 {
            self.crossings.push(Crossing {
                components,
                site: CrossingSite::Rational { point: p },
            });
        }
    }

    fn blow_up(&mut self, p: LocalPoint) -> Result<Vec<LocalPoint>, ResolutionError> {
        if self.history.len() >= self.cap {
            return Err(ResolutionError::IterationCap { cap: self.cap });
        }
        let mut n_f = 0u64;
        let mut n_g = 0u64;
        let mut k = 1u64;
        for e in &p.exceptional {
            let d = &self.divisors[e.id - 1];
            n_f += d.n_f;
            n_g += d.n_g;
            k += d.k;
        }
        let mut orders = Vec::with_capacity(p.curves.len());
        for c in &p.curves {
            let m = c.equation.order().expect("curve through the point") as u64;
            let piece = &self.pieces[c.piece];
            match piece.side {
                Side::F => n_f += piece.multiplicity as u64 * m,
                Side::G => n_g += piece.multiplicity as u64 * m,
            }
            orders.push(m as u32);
        }
        let new_id = self.next_id();
        self.divisors.push(DivisorData {
            id: new_id,
            kind: DivisorKind::Exceptional,
            n_f,
            n_g,
            k,
            locus: Locus::Exceptional {
                chart: p.chart.then_a(&Rat::zero()),
            },
            component: None,
        });
        let mut center_on: Vec<usize> = p.exceptional.iter().map(|e| e.id).collect();
        center_on.extend(p.curves.iter().filter_map(|c| c.strict_id));
        center_on.sort_unstable();
        self.history.push(BlowupRecord {
            divisor: new_id,
            center_on,
            kind: self.kind,
        });

        // Directions of the tangent cone: chart A at v = c*u for rational c,
        // chart B for the direction u = 0.
        let mut a_points: BTreeMap<Rat, Vec<usize>> = BTreeMap::new();
        let mut b_curves: Vec<usize> = Vec::new();
        let mut residuals: Vec<(usize, UPoly)> = Vec::new();
        for (i, c) in p.curves.iter().enumerate() {
            let init = c.equation.initial_form();
            let tangent = init
                .eval_var(0, &Rat::one())
                .to_upoly(1)
                .expect("bivariate initial form");
            let deficiency = orders[i] as usize - tangent.degree().unwrap_or(0);
            if deficiency > 0 {
                b_curves.push(i);
            }
            let split = rational_roots(&tangent);
            for (root, _) in &split.roots {
                a_points.entry(root.clone()).or_default().push(i);
            }
            if split.residual_degree() > 0 {
                let r = split.residual;
                let center = || format!("{} at the roots of {} on the new divisor", describe(&p.chart), r.display("t"));
                if !r.gcd(&r.derivative()).is_constant() {
                    return Err(ResolutionError::UnsupportedExtension { center: center() });
                }
                if residuals.iter().any(|(_, other)| !r.gcd(other).is_constant()) {
                    return Err(ResolutionError::UnsupportedExtension { center: center() });
                }
                residuals.push((i, r));
            }
        }
        let old_axis1: Vec<usize> = p.exceptional.iter().filter(|e| e.axis == 1).map(|e| e.id).collect();
        let old_axis0: Vec<usize> = p.exceptional.iter().filter(|e| e.axis == 0).map(|e| e.id).collect();
        if !old_axis1.is_empty() {
            a_points.entry(Rat::zero()).or_default();
        }

        let mut children = Vec::new();
        let (u, v) = (MPoly::var(2, 0), MPoly::var(2, 1));
        for (c, idxs) in &a_points {
            let chart = p.chart.then_a(c);
            let shifted = &v + &MPoly::constant(2, c.clone());
            let imgs = [u.clone(), &u * &shifted];
            let mut exceptional = vec![AxisDivisor { id: new_id, axis: 0 }];
            if c.is_zero() {
                exceptional.extend(old_axis1.iter().map(|&id| AxisDivisor { id, axis: 1 }));
            }
            let curves = idxs
                .iter()
                .map(|&i| {
                    let cur = &p.curves[i];
                    LocalCurve {
                        piece: cur.piece,
                        equation: cur.equation.substitute(&imgs).div_var_power(0, orders[i]),
                        strict_id: cur.strict_id,
                    }
                })
                .collect();
            children.push(LocalPoint {
                chart,
                exceptional,
                curves,
            });
        }
        if !b_curves.is_empty() || !old_axis0.is_empty() {
            let imgs = [&u * &v, v.clone()];
            let mut exceptional: Vec<AxisDivisor> = old_axis0.iter().map(|&id| AxisDivisor { id, axis: 0 }).collect();
            exceptional.push(AxisDivisor { id: new_id, axis: 1 });
            let curves = b_curves
                .iter()
                .map(|&i| {
                    let cur = &p.curves[i];
                    LocalCurve {
                        piece: cur.piece,
                        equation: cur.equation.substitute(&imgs).div_var_power(1, orders[i]),
                        strict_id: cur.strict_id,
                    }
                })
                .collect();
            children.push(LocalPoint {
                chart: p.chart.then_b(),
                exceptional,
                curves,
            });
        }

        // Branches through conjugate points are already smooth and meet the
        // new divisor transversally; they become strict divisors right away.
        for (i, r) in residuals {
            let cur = &p.curves[i];
            let chart = p.chart.then_a(&Rat::zero());
            let imgs = [u.clone(), &u * &v];
            let equation = cur.equation.substitute(&imgs).div_var_power(0, orders[i]);
            let sid = match cur.strict_id {
                Some(id) => id,
                None => self.new_strict(
                    cur.piece,
                    Branch {
                        chart,
                        equation,
                        param_axis: 0,
                        modulus: r.clone(),
                    },
                ),
            };
            self.crossings.push(Crossing {
                components: vec![new_id, sid],
                site: CrossingSite::Conjugate { modulus: r },
            });
        }
        Ok(children)
    }

    /// Process `start` and everything above it, depth first.
    fn run(&mut self, start: LocalPoint, force: bool) -> Result<(), ResolutionError> {
        let mut stack = vec![(start, force)];
        while let Some((p, force)) = stack.pop() {
            if force || self.needs_blowup(&p) {
                let children = self.blow_up(p)?;
                for c in children.into_iter().rev() {
                    stack.push((c, false));
                }
            } else {
                self.finish(p);
            }
        }
        Ok(())
    }
}

fn pieces_of(germ: &MeromorphicGerm) -> Vec<Piece> {
    let origin = [Rat::zero(), Rat::zero()];
    let mut out = Vec::new();
    for (side, poly) in [(Side::F, germ.f()), (Side::G, germ.g())] {
        for (p, e) in squarefree_decomposition(poly).expect("nonzero side") {
            if p.eval(&origin).is_zero() {
                out.push(Piece {
                    poly: p,
                    side,
                    multiplicity: e,
                });
            }
        }
    }
    out
}

fn relabel(id: &mut usize, map: &[usize]) {
    *id = map[*id - 1];
}

fn relabel_point(p: &mut LocalPoint, map: &[usize]) {
    for e in &mut p.exceptional {
        relabel(&mut e.id, map);
    }
    for c in &mut p.curves {
        if let Some(id) = c.strict_id.as_mut() {
            relabel(id, map);
        }
    }
}

fn assign_components(res: &mut ResolutionData) {
    let mut by_piece: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut piece_of: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &res.crossings {
        if let CrossingSite::Rational { point } = &c.site {
            for cur in &point.curves {
                if let Some(id) = cur.strict_id {
                    piece_of.insert(id, cur.piece);
                }
            }
        }
    }
    for d in &res.divisors {
        if d.is_exceptional() {
            continue;
        }
        let piece = piece_of.get(&d.id).copied().or_else(|| {
            // Strict divisors through conjugate points (or isolated smooth
            // curves) are matched by which piece contains their branch.
            let Locus::Branch(b) = &d.locus else { return None };
            res.pieces.iter().position(|p| {
                let side_ok = (d.kind == DivisorKind::StrictF) == (p.side == Side::F);
                side_ok && b.chart.pull(&p.poly).div_exact(&b.equation).is_some()
            })
        });
        if let Some(p) = piece {
            by_piece.entry(p).or_default().push(d.id);
        }
    }
    for (piece, ids) in by_piece {
        let poly = res.pieces[piece].poly.clone();
        for id in &ids {
            let component = if ids.len() == 1 {
                poly.monic()
            } else {
                let Locus::Branch(b) = &res.divisors[id - 1].locus else { continue };
                let deg = poly.total_degree().unwrap_or(1);
                find_component(b, deg).unwrap_or_else(|| poly.monic())
            };
            res.divisors[id - 1].component = Some(component);
        }
    }
}

/// Log resolution of `f*g` at the origin, with the default blow-up cap.
pub fn resolve_pair(germ: &MeromorphicGerm) -> Result<ResolutionData, ResolutionError> {
    resolve_pair_with_cap(germ, DEFAULT_BLOWUP_CAP)
}

/// Log resolution of `f*g` at the origin.
///
/// Divisors are numbered from 1: exceptional divisors in creation order,
/// then strict transforms of `f`, then those of `g`.
pub fn resolve_pair_with_cap(germ: &MeromorphicGerm, cap: usize) -> Result<ResolutionData, ResolutionError> {
    if !germ.is_plane() {
        return Err(ResolutionError::NotPlane);
    }
    if germ.is_constant() {
        return Err(ResolutionError::ConstantGerm);
    }
    let pieces = pieces_of(germ);
    if pieces.is_empty() {
        return Err(ResolutionError::UnitGerm);
    }
    let start = LocalPoint {
        chart: Chart::identity(),
        exceptional: Vec::new(),
        curves: pieces
            .iter()
            .enumerate()
            .map(|(i, p)| LocalCurve {
                piece: i,
                equation: p.poly.clone(),
                strict_id: None,
            })
            .collect(),
    };
    let mut engine = Engine {
        pieces: &pieces,
        divisors: Vec::new(),
        crossings: Vec::new(),
        history: Vec::new(),
        cap,
        kind: BlowupKind::Resolution,
    };
    engine.run(start, false)?;

    // Renumber: exceptional, strict f, strict g.
    let order_key = |d: &DivisorData| match d.kind {
        DivisorKind::Exceptional => 0,
        DivisorKind::StrictF => 1,
        DivisorKind::StrictG => 2,
    };
    let mut order: Vec<usize> = (0..engine.divisors.len()).collect();
    order.sort_by_key(|&i| (order_key(&engine.divisors[i]), i));
    let mut map = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        map[old] = new + 1;
    }
    let mut divisors: Vec<DivisorData> = order.iter().map(|&i| engine.divisors[i].clone()).collect();
    for d in &mut divisors {
        relabel(&mut d.id, &map);
    }
    let mut crossings = engine.crossings;
    for c in &mut crossings {
        for id in &mut c.components {
            relabel(id, &map);
        }
        c.components.sort_unstable();
        if let CrossingSite::Rational { point } = &mut c.site {
            relabel_point(point, &map);
        }
    }
    let mut history = engine.history;
    for h in &mut history {
        relabel(&mut h.divisor, &map);
        for id in &mut h.center_on {
            relabel(id, &map);
        }
        h.center_on.sort_unstable();
    }
    let mut res = ResolutionData {
        schema_version: SCHEMA_VERSION,
        germ: germ.clone(),
        pieces,
        divisors,
        edges: Vec::new(),
        history,
        crossings,
        blowup_cap: cap,
    };
    res.recompute_edges();
    assign_components(&mut res);
    Ok(res)
}

fn is_mixed(res: &ResolutionData, c: &Crossing) -> bool {
    let signs: Vec<i64> = c.components.iter().map(|&id| res.divisors[id - 1].n_fg().signum()).collect();
    signs.contains(&1) && signs.contains(&-1)
}

/// Blow up every crossing of a zero divisor with a pole divisor until none
/// is left. New divisors are appended after the existing ones.
pub fn separate_dicritical(mut res: ResolutionData) -> Result<ResolutionData, ResolutionError> {
    while let Some(idx) = res.crossings.iter().position(|c| is_mixed(&res, c)) {
        let crossing = res.crossings.remove(idx);
        let point = match crossing.site {
            CrossingSite::Rational { point } => point,
            CrossingSite::Conjugate { modulus } => {
                return Err(ResolutionError::UnsupportedExtension {
                    center: format!(
                        "crossing of divisors {:?} at the roots of {}",
                        crossing.components,
                        modulus.display("t")
                    ),
                })
            }
        };
        let pieces = res.pieces.clone();
        let mut engine = Engine {
            pieces: &pieces,
            divisors: std::mem::take(&mut res.divisors),
            crossings: std::mem::take(&mut res.crossings),
            history: std::mem::take(&mut res.history),
            cap: res.blowup_cap,
            kind: BlowupKind::Separation,
        };
        let result = engine.run(point, true);
        res.divisors = engine.divisors;
        res.crossings = engine.crossings;
        res.history = engine.history;
        result?;
        for c in &mut res.crossings {
            c.components.sort_unstable();
        }
    }
    res.recompute_edges();
    Ok(res)
}
