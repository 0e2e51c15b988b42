use merogerm::algebra::{q, Rat};
use merogerm::invariants::*;
use merogerm::parse_germ;
use merogerm::resolution::{resolve, ResolutionData, Side};

fn res(text: &str) -> ResolutionData {
    resolve(&parse_germ(text).unwrap()).unwrap()
}

#[test]
fn log_canonical_thresholds() {
    assert_eq!(lct(&res("y^3+x^5"), Side::F).unwrap(), q(8, 15));
    assert_eq!(lct(&res("x"), Side::F).unwrap(), Rat::one());
    let r = res("(y^2+x^4)/(x^2+y^4)");
    assert_eq!(lct(&r, Side::F).unwrap(), q(3, 4));
    assert_eq!(lct(&r, Side::G).unwrap(), q(3, 4));
    assert_eq!(lct(&res("x"), Side::G), Err(InvariantsError::ConstantSide(Side::G)));
}

#[test]
fn strips() {
    let s = convergence_strip(&res("(y^2+x^4)/(x^2+y^4)"));
    assert_eq!(s, Strip { lower: Some(q(-3, 4)), upper: Some(q(3, 4)) });
    assert_eq!(s.to_string(), "(-3/4, 3/4)");
    let s = convergence_strip(&res("y^3+x^5"));
    assert_eq!(s, Strip { lower: Some(q(-8, 15)), upper: None });
    let s = convergence_strip(&res("(y^3+x^5)/x"));
    assert_eq!(s, Strip { lower: Some(q(-8, 15)), upper: Some(Rat::one()) });
    assert!(s.contains(&Rat::zero()));
}

#[test]
fn bs_candidates() {
    let r = res("(y^3+x^5)/x");
    let set = candidate_bs_roots(&r, 8);
    let e4 = set.generators.iter().find(|g| g.divisor == 4).unwrap();
    assert_eq!((e4.base.clone(), e4.step.clone()), (q(8, 12), q(1, 12)));
    for v in [q(-8, 12), q(-9, 12), q(-10, 12), q(-11, 12), q(-1, 1)] {
        assert!(set.values().contains(&v), "{v}");
    }
    assert!(set.values().iter().all(Rat::is_negative));
    assert!(set.generators.iter().all(|g| g.n > 0));

    let set = candidate_bs_roots(&res("x"), 3);
    assert_eq!(set.values(), vec![q(-1, 1), q(-2, 1), q(-3, 1), q(-4, 1)]);
    assert!(candidate_bs_roots(&res("1/(x^2+y^3)"), 8).is_empty());
}

#[test]
fn jumping_candidates() {
    let r = res("(y^3+x^5)/x");
    let c: Vec<Rat> = candidate_jumping_numbers(&r, &q(2, 1)).into_iter().map(|t| t.value).collect();
    for v in [q(8, 12), q(9, 12), q(10, 12), q(11, 12), q(1, 1), q(23, 12), q(2, 1)] {
        assert!(c.contains(&v), "{v}");
    }
    assert!(c.windows(2).all(|w| w[0] < w[1]));
    let c: Vec<Rat> = candidate_jumping_numbers(&res("x"), &q(3, 1)).into_iter().map(|t| t.value).collect();
    assert_eq!(c, vec![q(1, 1), q(2, 1), q(3, 1)]);
    assert!(candidate_jumping_numbers(&res("1/(x^2+y^3)"), &q(3, 1)).is_empty());
}

#[test]
fn zeta_lattices() {
    assert_eq!(
        candidate_zeta_poles(&res("y^3+x^5"), 2, 2).unwrap_err(),
        InvariantsError::ClassicalCase
    );
    let z = candidate_zeta_poles(&res("(y^3+x^5)/x"), 1, 8).unwrap();
    assert_eq!(z.alpha, Rat::one());
    assert!(z.left_candidates.contains(&q(-8, 12)));
    assert!(z.left_candidates.contains(&q(-20, 12)));
    let z = candidate_zeta_poles(&res("x/y"), 2, 2).unwrap();
    assert_eq!(z.alpha, Rat::one());
    assert_eq!(z.zeta, vec![q(-1, 1), q(-2, 1), q(-3, 1)]);
    assert!(z.left_candidates.contains(&q(-1, 1)));
    assert!(z.right_candidates.contains(&q(1, 1)));
    let z = candidate_zeta_poles(&res("1/(x^2+y^3)"), 3, 3).unwrap();
    assert!(z.zeta.is_empty());
    assert!(z.left_candidates.is_empty());
}
