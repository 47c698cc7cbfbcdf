use std::collections::HashMap;

use centerfocus::poly::{int, rat, Monomial, Poly, PolyError, Rational, Symbols, VarId};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn symbols() -> Symbols {
    Symbols::new(["a", "b", "c"])
}

fn p(text: &str) -> Poly {
    Poly::parse(text, &symbols()).unwrap()
}

const VARS: [VarId; 4] = [VarId::X, VarId::Y, VarId::coeff(0), VarId::coeff(1)];

fn poly_strategy(max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -9i64..=9, 1i64..=4), 0..=max_terms).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|((e0, e1, e2, e3), n, d)| {
            let m = Monomial::from_pairs([(VARS[0], e0), (VARS[1], e1), (VARS[2], e2), (VARS[3], e3)]);
            (m, rat(n, d))
        }))
    })
}

fn values_strategy() -> impl Strategy<Value = HashMap<VarId, Rational>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 4)
        .prop_map(|v| VARS.iter().zip(v).map(|(var, (n, d))| (*var, rat(n, d))).collect())
}

fn config() -> Config {
    Config { cases: 1000, rng_seed: RngSeed::Fixed(20240601), failure_persistence: None, ..Config::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_axioms(a in poly_strategy(5), b in poly_strategy(4), c in poly_strategy(3)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Poly::zero(), a.clone());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn canonical_form_decides_equality(a in poly_strategy(5), b in poly_strategy(5)) {
        let s = symbols();
        prop_assert_eq!((&a - &b).is_zero(), a.to_text(&s) == b.to_text(&s));
    }

    #[test]
    fn derivative_is_linear_and_leibniz(a in poly_strategy(5), b in poly_strategy(4), k in -5i64..=5) {
        for v in VARS {
            prop_assert_eq!((&a + &b.scale(&int(k))).derivative(v), &a.derivative(v) + &b.derivative(v).scale(&int(k)));
            prop_assert_eq!((&a * &b).derivative(v), &(&a * &b.derivative(v)) + &(&b * &a.derivative(v)));
        }
    }

    #[test]
    fn division_round_trip(q in poly_strategy(3), r in poly_strategy(4)) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&q * &r).divide_exact(&q), Ok(r));
    }

    #[test]
    fn parse_round_trip(a in poly_strategy(6)) {
        let s = symbols();
        prop_assert_eq!(Poly::parse(&a.to_text(&s), &s), Ok(a));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly_strategy(4), b in poly_strategy(4), vals in values_strategy()) {
        let ev = |p: &Poly| p.eval(&vals).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
    }

    #[test]
    fn substitution_composes(a in poly_strategy(4), f in poly_strategy(2), g in poly_strategy(2), h in poly_strategy(2)) {
        // A: x -> f, a -> g; B: y -> h, x -> g
        let first = HashMap::from([(VarId::X, f.clone()), (VarId::coeff(0), g.clone())]);
        let second = HashMap::from([(VarId::Y, h.clone()), (VarId::X, g.clone())]);
        let mut composed: HashMap<VarId, Poly> = first.iter().map(|(v, p)| (*v, p.substitute(&second))).collect();
        composed.entry(VarId::Y).or_insert(h);
        prop_assert_eq!(a.substitute(&first).substitute(&second), a.substitute(&composed));
    }
}

#[test]
fn products() {
    assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
    assert_eq!(&p("a*x + 1/2") + &Poly::zero(), p("a*x + 1/2"));
    // (x^2 + y^2)^3 by repeated multiplication against the binomial expansion
    let base = p("x^2 + y^2");
    let cube = &(&base * &base) * &base;
    assert_eq!(cube, p("x^6 + 3*x^4*y^2 + 3*x^2*y^4 + y^6"));
    assert_eq!(base.pow(3), cube);
}

#[test]
fn derivatives() {
    assert_eq!(p("x^2*y").derivative(VarId::X), p("2*x*y"));
    assert!(p("7/3").derivative(VarId::X).is_zero());
    assert_eq!(p("a^3*x").derivative(VarId::coeff(0)), p("3*a^2*x"));
}

#[test]
fn substitution() {
    let s = Symbols::new(["c", "d", "e", "f"]);
    let k2 = Poly::parse("-e*x^2 + c*x*y - f*x*y + d*y^2", &s).unwrap();
    let at = |n: i64| Poly::int(n);
    let chart = HashMap::from([
        (s.lookup("c").unwrap(), at(0)),
        (s.lookup("d").unwrap(), at(1)),
        (s.lookup("e").unwrap(), at(-1)),
        (s.lookup("f").unwrap(), at(0)),
    ]);
    assert_eq!(k2.substitute(&chart), Poly::parse("x^2 + y^2", &s).unwrap());
    assert_eq!(k2.substitute(&HashMap::new()), k2);
    // bindings are simultaneous
    let swap = HashMap::from([(VarId::X, Poly::y()), (VarId::Y, Poly::x())]);
    assert_eq!(p("x^2*y").substitute(&swap), p("x*y^2"));
}

#[test]
fn multidegrees() {
    let s = Symbols::new(["a", "b", "c", "d", "e", "f"]);
    let q = |t: &str| Poly::parse(t, &s).unwrap();
    let id = |n: &str| s.lookup(n).unwrap();
    let phase = vec![VarId::X, VarId::Y];
    let linear = vec![id("c"), id("d"), id("e"), id("f")];
    let constant = vec![id("a"), id("b")];
    let k2 = q("-e*x^2 + c*x*y - f*x*y + d*y^2");
    assert_eq!(k2.multidegree(&[phase.clone(), linear.clone()]), Ok(vec![2, 1]));
    assert!(q("x + x^2").multidegree(&[phase]).is_err());
    let i3 = q("-e*a^2 + c*a*b - f*a*b + d*b^2");
    assert_eq!(i3.multidegree(&[constant, linear]), Ok(vec![2, 1]));
}

#[test]
fn exact_division() {
    assert_eq!(p("x^2 - y^2").divide_exact(&p("x - y")), Ok(p("x + y")));
    assert_eq!(p("x").divide_exact(&p("y")), Err(PolyError::NotDivisible));
    assert_eq!(p("x").divide_exact(&Poly::zero()), Err(PolyError::DivisionByZero));
}

#[test]
fn canonical_text() {
    let s = symbols();
    assert_eq!(p("y^2 + x^2").to_text(&s), "x^2 + y^2");
    assert_eq!(Poly::zero().to_text(&s), "0");
    let spaced = p(" - 1/2*a*x +  3 ");
    assert_eq!(spaced, p("3-1/2*a*x"));
    assert_eq!(Poly::parse(&spaced.to_text(&s), &s), Ok(spaced));
}

#[test]
fn parser_rejects_unknown_symbols_with_position() {
    let err = Poly::parse("x + 2*zz", &symbols()).unwrap_err();
    assert_eq!(err, PolyError::UnknownSymbol { name: "zz".into(), pos: 6 });
}
