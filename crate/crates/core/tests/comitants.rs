mod common;

use centerfocus::focal::{f4_comitant, focal_quantities, null_pseudo_quantity};
use centerfocus::lie::{self, ComitantType, ComitantVerdict, LieError};
use centerfocus::linalg::Deadline;
use centerfocus::poly::{int, Poly, Rational, VarId};
use centerfocus::system::{Signature, SystemSpec};
use common::{equivariant_at, random_matrix, small_rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s01() -> SystemSpec {
    SystemSpec::build_generic(Signature::s01())
}

fn s12() -> SystemSpec {
    SystemSpec::build_generic(Signature::s12())
}

fn gens(spec: &SystemSpec) -> Vec<(&'static str, Poly)> {
    [
        ("i1", "c + f"),
        ("i2", "c^2 + 2*d*e + f^2"),
        ("i3", "-e*a^2 + c*a*b - f*a*b + d*b^2"),
        ("k1", "-b*x + a*y"),
        ("k2", "-e*x^2 + c*x*y - f*x*y + d*y^2"),
        ("k3", "-e*a*x - f*b*x + c*a*y + d*b*y"),
    ]
    .into_iter()
    .map(|(n, t)| (n, spec.parse_poly(t).unwrap()))
    .collect()
}

/// Equivariance under random substitutions, with the weight from the type.
fn substitution_oracle(p: &Poly, spec: &SystemSpec, rng: &mut ChaCha8Rng) -> bool {
    let Ok(t) = lie::type_of(p, spec) else { return false };
    let Some(g) = lie::weight_of(&t, spec.signature()) else { return false };
    (0..3).all(|_| {
        let point = (0..spec.slots().len()).map(|i| (VarId::coeff(i as u32), small_rational(rng))).collect();
        let m = random_matrix(rng);
        let (x, y) = (small_rational(rng), small_rational(rng));
        equivariant_at(p, spec, &point, &m, g, (&x, &y))
    })
}

#[test]
fn operator_algebra() {
    let spec = s12();
    let ops = lie::operators(&spec).unwrap();
    for a in &ops.x {
        for b in &ops.x {
            assert!(lie::decompose(&a.bracket(b), &ops).is_some());
        }
    }
    let zero = [int(0), int(0), int(0), int(0)];
    assert_eq!(lie::decompose(&ops.x[0].bracket(&ops.x[3]), &ops), Some(zero));
    let c = lie::decompose(&ops.x[1].bracket(&ops.x[2]), &ops).unwrap();
    assert!(c[1] == int(0) && c[2] == int(0), "[X2, X3] lies in span(X1, X4): {c:?}");
}

#[test]
fn operators_on_generators() {
    let spec = s12();
    let ops = lie::operators(&spec).unwrap();
    let i1 = spec.parse_poly("c + f").unwrap();
    assert!(ops.x[1].apply(&i1).is_zero() && ops.x[2].apply(&i1).is_zero());

    let spec = s01();
    let ops = lie::operators(&spec).unwrap();
    let k1 = spec.parse_poly("-b*x + a*y").unwrap();
    assert_eq!(ops.x[0].apply(&k1), k1);
    assert_eq!(ops.x[3].apply(&k1), k1);
}

#[test]
fn types_and_weights() {
    let spec = s12();
    let k2 = spec.parse_poly("-e*x^2 + c*x*y - f*x*y + d*y^2").unwrap();
    assert_eq!(lie::type_of(&k2, &spec), Ok(ComitantType::new(2, vec![1, 0])));
    assert_eq!(lie::type_of(&spec.parse_poly("c + f").unwrap(), &spec), Ok(ComitantType::new(0, vec![1, 0])));
    assert!(matches!(lie::type_of(&spec.parse_poly("x + x^2").unwrap(), &spec), Err(LieError::Inhomogeneous { .. })));
    let sig = Signature::s12();
    assert_eq!(lie::weight_of(&ComitantType::new(4, vec![8, 2]), &sig), Some(-1));
    assert_eq!(lie::weight_of(&ComitantType::new(6, vec![20, 4]), &sig), Some(-1));
    assert_eq!(lie::weight_of(&ComitantType::new(0, vec![0, 0]), &sig), Some(0));
    assert_eq!(lie::weight_of(&ComitantType::new(1, vec![0, 0]), &sig), None);
}

#[test]
fn generators_are_comitants() {
    let spec = s01();
    let ops = lie::operators(&spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let weights = [0, 0, -1, -1, -1, -1];
    for ((name, p), w) in gens(&spec).iter().zip(weights) {
        match lie::is_comitant(p, &spec, &ops).unwrap() {
            ComitantVerdict::Comitant { weight, .. } => assert_eq!(weight, w, "{name}"),
            other => panic!("{name}: {other:?}"),
        }
        assert!(substitution_oracle(p, &spec, &mut rng), "{name}");
    }
}

#[test]
fn non_comitant_witness() {
    let spec = s12();
    let ops = lie::operators(&spec).unwrap();
    match lie::is_comitant(&Poly::x(), &spec, &ops).unwrap() {
        ComitantVerdict::NotComitant { operator, residual, .. } => {
            assert_eq!(operator, 2);
            assert!(residual == Poly::y() || residual == -&Poly::y(), "{residual:?}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn verdict_agrees_with_substitution_oracle() {
    // products of generators are comitants; perturbed ones are not
    let spec = s01();
    let ops = lie::operators(&spec).unwrap();
    let g = gens(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut seen = [0, 0];
    for _ in 0..40 {
        let a = &g[rng.gen_range(0..6)].1;
        let b = &g[rng.gen_range(0..6)].1;
        let mut p = a * b;
        if rng.gen_bool(0.5) {
            // a same-type term that breaks equivariance
            let (m, _) = p.iter().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            p += Poly::term(int(1), m);
        }
        let verdict = lie::is_comitant(&p, &spec, &ops).unwrap().is_comitant();
        assert_eq!(verdict, substitution_oracle(&p, &spec, &mut rng), "{}", spec.render(&p));
        seen[verdict as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn null_pseudo_quantity_is_an_invariant() {
    let spec = s12();
    let ops = lie::operators(&spec).unwrap();
    let g0 = null_pseudo_quantity(&spec).unwrap();
    assert_eq!(g0, spec.parse_poly("c + f").unwrap());
    assert!(matches!(lie::is_comitant(&g0, &spec, &ops).unwrap(), ComitantVerdict::Comitant { weight: 0, .. }));
    assert!(spec.restrict_to_variety().unwrap().specialize(&g0).is_zero());
}

#[test]
fn reconstruction() {
    let spec = s12();
    let ops = lie::operators(&spec).unwrap();
    let k2 = spec.parse_poly("-e*x^2 + c*x*y - f*x*y + d*y^2").unwrap();
    let s = spec.parse_poly("-e").unwrap();
    assert_eq!(lie::reconstruct_from_semi_invariant(&s, 2, &ops), Ok(k2));
    let c = Poly::int(5);
    assert_eq!(lie::reconstruct_from_semi_invariant(&c, 0, &ops), Ok(c));
    // the x^2 coefficient of a non-comitant does not close the series
    let bad = spec.parse_poly("g").unwrap();
    assert!(matches!(
        lie::reconstruct_from_semi_invariant(&bad, 0, &ops),
        Err(LieError::NotLeadingSemiInvariant { .. })
    ));
}

#[test]
fn quartic_comitant_round_trip_and_substitution() {
    let spec = s12();
    let ops = lie::operators(&spec).unwrap();
    let f4 = f4_comitant(&spec, &ops, Deadline::none()).unwrap();
    let s = lie::leading_semi_invariant(&f4.f4, 4);
    assert_eq!(lie::reconstruct_from_semi_invariant(&s, 4, &ops).unwrap(), f4.f4);
    assert!(matches!(f4.verdict, ComitantVerdict::Comitant { weight: -1, .. }));
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    assert!(substitution_oracle(&f4.f4, &spec, &mut rng));
    // chain ratios of D3 between consecutive G_{1,i}
    let chain: Vec<Rational> = f4.chain.iter().map(|c| c.clone().unwrap()).collect();
    assert_eq!(chain, [4, 1, -6, 1].map(int));
}

#[test]
fn isobarity() {
    let spec = s12();
    let ops = lie::operators(&spec).unwrap();
    let c = spec.parse_poly("c").unwrap();
    assert!(lie::isobarity_of(&c, &spec, &ops).is_ok());
    let mixed = spec.parse_poly("c + g").unwrap();
    assert!(matches!(lie::isobarity_of(&mixed, &spec, &ops), Err(LieError::NotIsobaric { .. })));
    assert!(matches!(lie::isobarity_of(&Poly::x(), &spec, &ops), Err(LieError::PhaseDependent)));
}

#[test]
fn independence_ranks() {
    let spec = s12();
    let p = |t: &str| spec.parse_poly(t).unwrap();
    assert_eq!(lie::independence_rank(&[p("c"), p("f"), p("c + f")], 3, 1), Ok(2));
    let s = s01();
    let inv: Vec<Poly> = gens(&s).into_iter().take(3).map(|(_, g)| g).collect();
    assert_eq!(lie::independence_rank(&inv, 3, 1), Ok(3));
    let v = spec.restrict_to_variety().unwrap();
    let l = focal_quantities(&v, 2).unwrap().l;
    assert_eq!(lie::independence_rank(&l, 3, 1), Ok(2));
    assert_eq!(lie::independence_rank(&[], 3, 1), Err(LieError::Empty));
}
