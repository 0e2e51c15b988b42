use merogerm::algebra::{q, MPoly, Rat};
use merogerm::multiplier::*;
use merogerm::parser::parse_polynomial_in;
use merogerm::resolution::{resolve, ResolutionData};
use merogerm::parse_germ;

fn res(text: &str) -> ResolutionData {
    resolve(&parse_germ(text).unwrap()).unwrap()
}

fn p(text: &str) -> MPoly {
    parse_polynomial_in(text, &["x".to_string(), "y".to_string()]).unwrap()
}

fn ideal_of(gens: &[&str], d: u32) -> IdealBasis {
    let gens: Vec<MPoly> = gens.iter().map(|g| p(g)).collect();
    IdealBasis::from_generators(&gens, d)
}

#[test]
fn constraint_vectors() {
    let r = res("(y^3+x^5)/x");
    let cv = constraint_vector(&r, &q(8, 12));
    assert_eq!(cv.bounds.into_iter().collect::<Vec<_>>(), vec![(4, 1)]);
    assert!(constraint_vector(&r, &q(7, 12)).is_empty());
    assert!(constraint_vector(&r, &Rat::zero()).is_empty());
}

#[test]
fn example_ideals() {
    let r1 = res("(y^3+x^5)/x");
    assert_eq!(multiplier_ideal(&r1, &q(8, 12), 8).unwrap(), ideal_of(&["x", "y"], 8));
    assert_eq!(multiplier_ideal(&r1, &q(11, 12), 8).unwrap(), ideal_of(&["x^2", "y"], 8));
    let r2 = res("(y^3+x^5)/y");
    assert!(multiplier_ideal(&r2, &q(1, 2), 8).unwrap().is_unit());
    let rf = res("y^3+x^5");
    assert_eq!(mixed_multiplier_ideal(&rf, &q(8, 15), &Rat::zero(), 8).unwrap(), ideal_of(&["x", "y"], 8));
    assert_eq!(
        mixed_multiplier_ideal(&rf, &q(14, 15), &Rat::zero(), 8).unwrap(),
        ideal_of(&["x^3", "x*y", "y^2"], 8)
    );
    assert!(mixed_multiplier_ideal(&r1, &Rat::zero(), &Rat::zero(), 8).unwrap().is_unit());
    let g = multiplier_ideal(&r1, &q(11, 12), 8).unwrap();
    let names = ["x", "y"];
    assert_eq!(g.generator_strings(&names), vec!["y", "x^2"]);
    assert_eq!(g.is_stable(), Some(true));
}

#[test]
fn membership_examples() {
    let r1 = res("(y^3+x^5)/x");
    assert!(!membership(&r1, &p("x"), &q(11, 12)).unwrap());
    assert!(membership(&r1, &p("y"), &q(11, 12)).unwrap());
    assert!(membership(&r1, &p("1"), &q(1, 2)).unwrap());
    assert!(membership(&r1, &MPoly::zero(2), &q(3, 1)).unwrap());
}

#[test]
fn jumping_numbers_examples() {
    let cases: [(&str, Rat, Vec<Rat>); 3] = [
        ("(y^3+x^5)/x", q(4, 1), vec![q(8, 12), q(11, 12), q(1, 1), q(23, 12), q(2, 1), q(3, 1), q(4, 1)]),
        ("(y^3+x^5)/y", q(3, 1), vec![q(8, 10), q(1, 1), q(2, 1), q(3, 1)]),
        ("y^3+x^5", q(1, 1), vec![q(8, 15), q(11, 15), q(13, 15), q(14, 15), q(1, 1)]),
    ];
    for (text, lmax, expected) in cases {
        let r = res(text);
        let d = default_degree(&r, &lmax);
        let got: Vec<Rat> = jumping_numbers(&r, &lmax, d).unwrap().into_iter().map(|(l, _)| l).collect();
        assert_eq!(got, expected, "{text}");
    }
}

#[test]
fn chains_at_degree_twelve() {
    let f = "y^3+x^5";
    let xf = "x*y^3+x^6";
    let yf = "y^4+x^5*y";
    let f2 = "y^6+2*x^5*y^3+x^10";
    let r1 = res("(y^3+x^5)/x");
    let rep = jumping_report(&r1, &q(2, 1), 12).unwrap();
    let chain: [&[&str]; 6] = [&["1"], &["x", "y"], &["x^2", "y"], &[f], &[xf, yf], &[f2]];
    assert_eq!(rep.regions.len(), chain.len());
    for (region, gens) in rep.regions.iter().zip(chain) {
        assert_eq!(region.ideal, ideal_of(gens, 12), "region starting at {}", region.lo);
    }
    let r2 = res("(y^3+x^5)/y");
    let rep = jumping_report(&r2, &q(2, 1), 12).unwrap();
    let chain: [&[&str]; 4] = [&["1"], &["x", "y"], &[f], &[f2]];
    assert_eq!(rep.regions.len(), chain.len());
    for (region, gens) in rep.regions.iter().zip(chain) {
        assert_eq!(region.ideal, ideal_of(gens, 12), "region starting at {}", region.lo);
    }
    assert_eq!(rep.regions[1].hi, Some(q(1, 1)));
}

#[test]
fn structural_checks() {
    let r1 = res("(y^3+x^5)/x");
    let r2 = res("(y^3+x^5)/y");
    let rxy = res("x/y");
    assert!(check_integer_power(&r1, 1, 10).unwrap());
    assert!(check_integer_power(&r2, 2, 12).unwrap());
    assert!(check_integer_power(&rxy, 1, 6).unwrap());
    assert!(check_skoda(&r1, &q(11, 12), 1, 12).unwrap());
    assert!(check_skoda(&r1, &Rat::zero(), 1, 12).unwrap());
    assert!(check_skoda(&res("x"), &q(1, 2), 1, 6).unwrap());
    assert!(check_colon_relation(&r1, &q(8, 12), 1, 10).unwrap());
    assert!(check_colon_relation(&res("y/x"), &Rat::zero(), 1, 6).unwrap());
    assert!(check_colon_relation(&res("y^3+x^5"), &q(8, 15), 1, 8).unwrap());
    assert!(matches!(
        check_colon_relation(&r1, &q(3, 2), 1, 8),
        Err(MultiplierError::ColonExponent)
    ));
    assert!(!check_periodicity(&r1, &q(8, 12), 12).unwrap());
    let lhs = multiplier_ideal(&r1, &q(20, 12), 12).unwrap();
    assert_eq!(lhs, ideal_of(&["y^3+x^5"], 12));
}

#[test]
fn crosscheck_windows() {
    let rep = jn_bs_crosscheck(&res("(y^3+x^5)/x"), 12).unwrap();
    assert_eq!(rep.lower, Rat::zero());
    let roots: Vec<Rat> = rep.entries.iter().map(|e| e.predicted_root.clone()).collect();
    assert_eq!(roots, vec![q(-2, 3), q(-11, 12), q(-1, 1)]);
    assert!(rep.all_present());
    let rep = jn_bs_crosscheck(&res("y^3+x^5"), 8).unwrap();
    assert_eq!(rep.entries[0].predicted_root, q(-8, 15));
    assert!(rep.all_present());
    assert!(jn_bs_crosscheck(&res("1/(x^2+y^3)"), 6).unwrap().entries.is_empty());
}
