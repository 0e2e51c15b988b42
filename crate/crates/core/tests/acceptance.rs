//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its runtime; the test fails if any criterion fails or runs over its
//! time budget.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use merogerm::algebra::{q, MPoly, Mono, Rat, UPoly};
use merogerm::dmodule::{
    act_dt, act_t, monomial_bs, monomial_bs_operator, monomial_germ, verify_functional_equation, DiffOperator,
    FeqMode, TwistedElement, TwistedModule,
};
use merogerm::invariants::{candidate_jumping_numbers, convergence_strip, lct, Strip};
use merogerm::multiplier::{
    check_colon_relation, check_integer_power, check_periodicity, check_skoda, default_degree, jn_bs_crosscheck,
    jumping_numbers, jumping_report, membership, multiplier_ideal, IdealBasis,
};
use merogerm::parse_germ;
use merogerm::parser::parse_polynomial_in;
use merogerm::resolution::{resolve, ResolutionData, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn res(text: &str) -> ResolutionData {
    resolve(&parse_germ(text).unwrap()).unwrap()
}

fn p(text: &str) -> MPoly {
    parse_polynomial_in(text, &["x".to_string(), "y".to_string()]).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table(r: &ResolutionData) -> Vec<(u64, u64, u64)> {
    r.divisors.iter().map(|d| (d.n_f, d.n_g, d.k)).collect()
}

fn triples(nf: &[u64], ng: &[u64], k: &[u64]) -> Vec<(u64, u64, u64)> {
    nf.iter().zip(ng).zip(k).map(|((a, b), c)| (*a, *b, *c)).collect()
}

/// Degree sequence of the dual graph, sorted: chains and leaves are what
/// survive a renumbering.
type Triple = (u64, u64, u64);

fn graph_shape(r: &ResolutionData) -> Vec<(Triple, Vec<Triple>)> {
    let mut shape: Vec<_> = r
        .divisors
        .iter()
        .map(|d| {
            let mut nb: Vec<_> = r
                .neighbors(d.id)
                .into_iter()
                .map(|j| {
                    let e = r.divisor(j).unwrap();
                    (e.n_f, e.n_g, e.k)
                })
                .collect();
            nb.sort();
            ((d.n_f, d.n_g, d.k), nb)
        })
        .collect();
    shape.sort();
    shape
}

fn criterion_1() -> Outcome {
    let r1 = res("(y^3+x^5)/x");
    let want1 = triples(&[3, 5, 9, 15, 1, 0, 3, 3], &[1, 1, 2, 3, 0, 1, 2, 3], &[1, 2, 4, 7, 0, 0, 2, 3]);
    ensure(table(&r1) == want1, || format!("g = x table {:?}", table(&r1)))?;
    let edges1 = vec![(1, 3), (1, 7), (2, 4), (3, 4), (4, 5), (6, 8), (7, 8)];
    ensure(r1.edges == edges1, || format!("g = x edges {:?}", r1.edges))?;
    // E4 is the rupture divisor with three branches; E8 joins the pole curve.
    ensure(r1.neighbors(4) == vec![2, 3, 5], || "E4 neighbours".into())?;
    ensure(r1.neighbors(8) == vec![6, 7], || "E8 neighbours".into())?;

    let r2 = res("(y^3+x^5)/y");
    let want2 = triples(
        &[3, 5, 9, 15, 1, 0, 5, 5, 5],
        &[1, 2, 3, 5, 0, 1, 3, 4, 5],
        &[1, 2, 4, 7, 0, 0, 3, 4, 5],
    );
    ensure(table(&r2) == want2, || format!("g = y table {:?}", table(&r2)))?;
    let edges2 = vec![(1, 3), (2, 4), (2, 7), (3, 4), (4, 5), (6, 9), (7, 8), (8, 9)];
    ensure(r2.edges == edges2, || format!("g = y edges {:?}", r2.edges))?;
    ensure(r2.neighbors(8) == vec![7, 9] && r2.neighbors(9) == vec![6, 8], || "E7-E8-E9 chain".into())?;
    ensure(graph_shape(&r2).iter().filter(|(_, nb)| nb.len() == 1).count() == 3, || "leaves".into())?;
    Ok("8 and 9 divisor tables and dual graphs exact".into())
}

fn criterion_2() -> Outcome {
    let cases: [(&str, Rat, Vec<Rat>); 3] = [
        ("(y^3+x^5)/x", q(4, 1), vec![q(8, 12), q(11, 12), q(1, 1), q(23, 12), q(2, 1), q(3, 1), q(4, 1)]),
        ("(y^3+x^5)/y", q(3, 1), vec![q(8, 10), q(1, 1), q(2, 1), q(3, 1)]),
        ("y^3+x^5", q(1, 1), vec![q(8, 15), q(11, 15), q(13, 15), q(14, 15), q(1, 1)]),
    ];
    let mut notes = Vec::new();
    for (text, lmax, want) in cases {
        let t = Instant::now();
        let r = res(text);
        let d = default_degree(&r, &lmax);
        let got: Vec<Rat> = jumping_numbers(&r, &lmax, d)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        ensure(got == want, || format!("{text}: {got:?}"))?;
        ensure(t.elapsed() < Duration::from_secs(10), || format!("{text}: {:?}", t.elapsed()))?;
        notes.push(format!("{text} D={d}"));
    }
    Ok(notes.join(", "))
}

fn chain_matches(text: &str, lmax: Rat, chain: &[&[&str]]) -> Result<(), String> {
    let r = res(text);
    let rep = jumping_report(&r, &lmax, 12).map_err(|e| e.to_string())?;
    ensure(rep.regions.len() == chain.len(), || format!("{text}: {} regions", rep.regions.len()))?;
    for (region, gens) in rep.regions.iter().zip(chain) {
        let want = IdealBasis::from_generators(&gens.iter().map(|g| p(g)).collect::<Vec<_>>(), 12);
        ensure(region.ideal == want, || format!("{text}: region at {} is {:?}", region.lo, region.ideal.generators()))?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let f = "y^3+x^5";
    let f2 = "(y^3+x^5)^2";
    let f3 = "(y^3+x^5)^3";
    chain_matches(
        "(y^3+x^5)/x",
        q(2, 1),
        &[&["1"], &["x", "y"], &["x^2", "y"], &[f], &["x*(y^3+x^5)", "y*(y^3+x^5)"], &[f2]],
    )?;
    chain_matches("(y^3+x^5)/y", q(3, 1), &[&["1"], &["x", "y"], &[f], &[f2], &[f3]])?;
    Ok("both chains equal as truncated ideals at D = 12".into())
}

fn criterion_4() -> Outcome {
    ensure(lct(&res("y^3+x^5"), Side::F) == Ok(q(8, 15)), || "lct(y^3+x^5)".into())?;
    let r = res("(y^2+x^4)/(x^2+y^4)");
    ensure(lct(&r, Side::F) == Ok(q(3, 4)), || "lct(y^2+x^4)".into())?;
    ensure(lct(&r, Side::G) == Ok(q(3, 4)), || "lct(x^2+y^4)".into())?;
    let s = convergence_strip(&r);
    ensure(s == Strip { lower: Some(q(-3, 4)), upper: Some(q(3, 4)) }, || format!("strip {s}"))?;
    Ok("8/15, 3/4, 3/4, (-3/4, 3/4)".into())
}

/// All ordered pairs of exponent lists with entries >= 1 and total in 1..=n.
fn monomial_shapes(n: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    fn compositions(total: u32) -> Vec<Vec<u32>> {
        if total == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=total {
            for mut rest in compositions(total - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for total in 1..=n {
        for a in 0..=total {
            for num in compositions(a) {
                for den in compositions(total - a) {
                    out.push((num.clone(), den));
                }
            }
        }
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, max_deg: u32, max_terms: usize) -> MPoly {
    let terms = rng.gen_range(1..=max_terms);
    MPoly::from_terms(
        nvars,
        (0..terms).map(|_| {
            let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
            (Mono(e), Rat::new(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)))
        }),
    )
}

fn criterion_5() -> Outcome {
    let shapes = monomial_shapes(8);
    let alphas = [Rat::zero(), q(1, 2), Rat::one()];
    let mut count = 0;
    for (num, den) in &shapes {
        let (f, g) = monomial_germ(num, den);
        let op = monomial_bs_operator(num, den);
        let b = monomial_bs(num, den);
        for a in &alphas {
            let m = TwistedModule::new(f.clone(), g.clone(), a.clone());
            let v = verify_functional_equation(&op, &b, &m, FeqMode::Numerator);
            ensure(v.holds, || format!("monomial {num:?}/{den:?} alpha {a}"))?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let mut f = random_poly(&mut rng, 2, 3, 3);
        let mut g = random_poly(&mut rng, 2, 3, 3);
        if f.is_zero() {
            f = MPoly::var(2, 0);
        }
        if g.is_zero() {
            g = MPoly::one(2);
        }
        let alpha = alphas[i % 3].clone();
        let m = TwistedModule::new(f, g, alpha);
        let e = TwistedElement::new(&m, random_poly(&mut rng, 3, 2, 4), rng.gen_range(0..3), rng.gen_range(0..3));
        let dtt = act_dt(&act_t(&e));
        let tdt = act_t(&act_dt(&e));
        ensure(dtt.sub(&tdt) == e, || format!("[dt, t] = 1 fails on {e:?}"))?;
        let minus = MPoly::constant(3, Rat::from(-1));
        ensure(dtt.scale_poly(&minus) == e.scale_poly(&m.s()), || format!("-dt t = s fails on {e:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for a in &alphas {
        for _ in 0..5 {
            let mut g = random_poly(&mut rng, 2, 3, 3);
            if g.is_zero() {
                g = MPoly::var(2, 1);
            }
            let m = TwistedModule::new(MPoly::one(2), g, a.clone());
            let v = verify_functional_equation(&DiffOperator::identity(2), &UPoly::one(), &m, FeqMode::Numerator);
            ensure(v.holds, || "b of 1/g".into())?;
        }
    }
    Ok(format!("{count} monomial equations, 100 random t/dt checks, b(1/g) = 1"))
}

fn criterion_6() -> Outcome {
    let germs = ["(y^3+x^5)/x", "(y^3+x^5)/y", "x/y", "(y^2+x^4)/(x^2+y^4)"];
    let mut checks = 0;
    for text in germs {
        let r = res(text);
        let d = default_degree(&r, &q(3, 1));
        for n in [1, 2] {
            ensure(check_integer_power(&r, n, d).map_err(|e| e.to_string())?, || format!("{text}: J(n = {n})"))?;
            checks += 1;
        }
        let jumps = jumping_numbers(&r, &q(2, 1), d).map_err(|e| e.to_string())?;
        let cands: Vec<Rat> = candidate_jumping_numbers(&r, &q(2, 1)).into_iter().map(|t| t.value).collect();
        for (l, _) in &jumps {
            ensure(check_skoda(&r, l, 1, d).map_err(|e| e.to_string())?, || format!("{text}: skoda at {l}"))?;
            ensure(cands.contains(l), || format!("{text}: {l} not a candidate"))?;
            checks += 2;
        }
        for l in [q(1, 2), q(8, 12), q(1, 1)] {
            ensure(check_colon_relation(&r, &l, 1, d).map_err(|e| e.to_string())?, || format!("{text}: colon at {l}"))?;
            checks += 1;
        }
        let cross = jn_bs_crosscheck(&r, d).map_err(|e| e.to_string())?;
        ensure(cross.all_present(), || format!("{text}: crosscheck {cross:?}"))?;
        checks += cross.entries.len();
    }
    let r1 = res("(y^3+x^5)/x");
    ensure(!check_periodicity(&r1, &q(8, 12), 12).map_err(|e| e.to_string())?, || "periodicity held".into())?;
    let lhs = multiplier_ideal(&r1, &q(20, 12), 12).map_err(|e| e.to_string())?;
    ensure(lhs == IdealBasis::from_generators(&[p("y^3+x^5")], 12), || "J at 20/12".into())?;
    Ok(format!("{checks} checks on 4 germs, periodicity witness reproduced"))
}

fn criterion_7() -> Outcome {
    let r = res("(y^3+x^5)/x");
    let cands: Vec<Rat> = candidate_jumping_numbers(&r, &q(2, 1)).into_iter().map(|t| t.value).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ideals: BTreeMap<Rat, IdealBasis> = BTreeMap::new();
    let mut members = 0;
    for _ in 0..200 {
        let l = cands[rng.gen_range(0..cands.len())].clone();
        // Raising the lowest degree makes membership likely at small lambda.
        let low = rng.gen_range(1..=5u32);
        let terms = rng.gen_range(1..=6);
        let mut h = MPoly::zero(2);
        for _ in 0..terms {
            let deg = rng.gen_range(low..=6u32);
            let a = rng.gen_range(0..=deg);
            let b = deg - a;
            h.add_term(Mono(vec![a, b]), Rat::from(rng.gen_range(-5i64..=5)));
        }
        if h.is_zero() {
            h = MPoly::one(2);
        }
        if !ideals.contains_key(&l) {
            ideals.insert(l.clone(), multiplier_ideal(&r, &l, 12).map_err(|e| e.to_string())?);
        }
        let oracle = membership(&r, &h, &l).map_err(|e| e.to_string())?;
        ensure(ideals[&l].contains(&h) == Some(oracle), || format!("h = {h:?} at {l}"))?;
        members += oracle as usize;
    }
    Ok(format!("200 agreements ({members} members)"))
}

fn main() {
    type Criterion = (u32, Duration, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        (1, Duration::from_secs(1), criterion_1),
        (2, Duration::from_secs(30), criterion_2),
        (3, Duration::from_secs(30), criterion_3),
        (4, Duration::from_secs(1), criterion_4),
        (5, Duration::from_secs(10), criterion_5),
        (6, Duration::from_secs(60), criterion_6),
        (7, Duration::from_secs(30), criterion_7),
    ];
    let mut failed = Vec::new();
    for (n, budget, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let status = match (&outcome, elapsed <= budget) {
            (Ok(_), true) => "PASS",
            _ => "FAIL",
        };
        let detail = match &outcome {
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        println!("criterion {n}: {status} ({:.2?} of {:?}) {detail}", elapsed, budget);
        if status == "FAIL" {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
