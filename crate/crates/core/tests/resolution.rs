use merogerm::algebra::MPoly;
use merogerm::parse_germ;
use merogerm::resolution::{
    classify, ord_along, resolve, resolve_pair, separate_dicritical, DivisorKind, ResolutionData, ResolutionError,
};

fn table(res: &ResolutionData) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    (
        res.divisors.iter().map(|d| d.n_f).collect(),
        res.divisors.iter().map(|d| d.n_g).collect(),
        res.divisors.iter().map(|d| d.k).collect(),
    )
}

fn poly(text: &str) -> MPoly {
    parse_germ(text).unwrap().f().clone()
}

#[test]
fn cusp_over_x() {
    let res = resolve(&parse_germ("(y^3 + x^5)/x").unwrap()).unwrap();
    assert_eq!(
        table(&res),
        (
            vec![3, 5, 9, 15, 1, 0, 3, 3],
            vec![1, 1, 2, 3, 0, 1, 2, 3],
            vec![1, 2, 4, 7, 0, 0, 2, 3]
        )
    );
    assert_eq!(res.edges, vec![(1, 3), (1, 7), (2, 4), (3, 4), (4, 5), (6, 8), (7, 8)]);
    let c = classify(&res);
    assert_eq!(c.zero, vec![1, 2, 3, 4, 5, 7]);
    assert_eq!(c.pole, vec![6]);
    assert_eq!(c.dicritical, vec![8]);
}

#[test]
fn cusp_over_y() {
    let res = resolve(&parse_germ("(y^3 + x^5)/y").unwrap()).unwrap();
    assert_eq!(
        table(&res),
        (
            vec![3, 5, 9, 15, 1, 0, 5, 5, 5],
            vec![1, 2, 3, 5, 0, 1, 3, 4, 5],
            vec![1, 2, 4, 7, 0, 0, 3, 4, 5]
        )
    );
    assert!(!res.has_mixed_crossing());
}

#[test]
fn smooth_germ_needs_nothing() {
    let res = resolve(&parse_germ("x").unwrap()).unwrap();
    assert_eq!(res.divisors.len(), 1);
    assert_eq!(res.divisors[0].kind, DivisorKind::StrictF);
    assert_eq!(table(&res), (vec![1], vec![0], vec![0]));
    assert!(res.history.is_empty());
}

#[test]
fn x_over_y_gets_one_dicritical() {
    let res = resolve_pair(&parse_germ("x/y").unwrap()).unwrap();
    assert_eq!(res.divisors.len(), 2);
    let sep = separate_dicritical(res).unwrap();
    assert_eq!(table(&sep), (vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 1]));
    assert_eq!(sep.edges, vec![(1, 3), (2, 3)]);
}

#[test]
fn ord_along_pullbacks() {
    let res = resolve(&parse_germ("(y^3 + x^5)/x").unwrap()).unwrap();
    assert_eq!(ord_along(&res, 4, &poly("x")).unwrap(), 3);
    assert_eq!(ord_along(&res, 4, &poly("y")).unwrap(), 5);
    assert_eq!(ord_along(&res, 4, &poly("y^3 + x^5")).unwrap(), 15);
    assert_eq!(ord_along(&res, 2, &poly("1")).unwrap(), 0);
    assert!(matches!(
        ord_along(&res, 4, &MPoly::zero(2)),
        Err(ResolutionError::ZeroPolynomial)
    ));
    for d in &res.divisors {
        assert_eq!(ord_along(&res, d.id, res.germ.f()).unwrap(), d.n_f, "divisor {}", d.id);
        assert_eq!(ord_along(&res, d.id, res.germ.g()).unwrap(), d.n_g, "divisor {}", d.id);
    }
}

#[test]
fn conjugate_branches() {
    let res = resolve(&parse_germ("(y^2 + x^4)/(x^2 + y^4)").unwrap()).unwrap();
    assert_eq!(table(&res), (vec![2, 4, 2, 1, 0], vec![2, 2, 4, 0, 1], vec![1, 2, 2, 0, 0]));
}
