use centerfocus::hilbert::rho_bound;
use centerfocus::poly::{int, rat, Poly};
use centerfocus::system::{CoeffValue, Signature, SystemError, SystemSpec};

fn names(spec: &SystemSpec) -> Vec<&str> {
    spec.slots().iter().map(|s| s.display_name.as_str()).collect()
}

#[test]
fn named_layouts() {
    let s12 = SystemSpec::build_generic(Signature::s12());
    assert_eq!(names(&s12), ["c", "d", "e", "f", "g", "h", "k", "l", "m", "n"]);
    let s123 = SystemSpec::build_generic(Signature::s123());
    assert_eq!(s123.slots().len(), 18);
    assert_eq!(&names(&s123)[10..], ["p", "q", "r", "s", "t", "u", "v", "w"]);
    let s01 = SystemSpec::build_generic(Signature::s01());
    assert_eq!(names(&s01), ["a", "b", "c", "d", "e", "f"]);
    let s13 = SystemSpec::build_generic(Signature::parse("1,3").unwrap());
    assert_eq!(&names(&s13)[4..6], ["p3_0", "p3_1"]);
}

#[test]
fn prefactors_are_binomial() {
    let s123 = SystemSpec::build_generic(Signature::s123());
    let pre = |n: &str| s123.slot(s123.slot_id(n).unwrap()).prefactor;
    assert_eq!([pre("h"), pre("m"), pre("q"), pre("r"), pre("u"), pre("v")], [2, 2, 3, 3, 3, 3]);
    assert_eq!([pre("g"), pre("p"), pre("s"), pre("t"), pre("w")], [1, 1, 1, 1, 1]);
}

#[test]
fn slot_count_identity() {
    for sig in ["1", "1,2", "1,3", "1,2,3", "0,1", "1,4,7", "1,2,3,4"] {
        let sig = Signature::parse(sig).unwrap();
        let spec = SystemSpec::build_generic(sig.clone());
        let count: usize = sig.degrees().iter().map(|d| 2 * (*d as usize + 1)).sum();
        assert_eq!(spec.slots().len(), count);
        assert_eq!(rho_bound(&sig) as usize, count - 1, "{sig}");
    }
}

#[test]
fn vector_fields() {
    let s12 = SystemSpec::build_generic(Signature::s12());
    let vf = s12.vector_field();
    assert_eq!(vf.p, s12.parse_poly("c*x + d*y + g*x^2 + 2*h*x*y + k*y^2").unwrap());
    assert_eq!(vf.q, s12.parse_poly("e*x + f*y + l*x^2 + 2*m*x*y + n*y^2").unwrap());

    let s123 = SystemSpec::build_generic(Signature::s123());
    let vf = s123.vector_field();
    let (p3, q3) = s123.component(3);
    assert_eq!(p3, s123.parse_poly("p*x^3 + 3*q*x^2*y + 3*r*x*y^2 + s*y^3").unwrap());
    assert_eq!(q3, s123.parse_poly("t*x^3 + 3*u*x^2*y + 3*v*x*y^2 + w*y^3").unwrap());
    // homogeneous components are exactly the signature degrees
    for d in 0..=4 {
        let (p, q) = s123.component(d);
        assert_eq!(p.is_zero() && q.is_zero(), ![1, 2, 3].contains(&d));
    }
    assert_eq!(&vf.p - &p3, s123.component(1).0 + s123.component(2).0);

    let s01 = SystemSpec::build_generic(Signature::s01());
    assert_eq!(s01.vector_field().p, s01.parse_poly("a + c*x + d*y").unwrap());

    let zero = SystemSpec::parse_shorthand("s(1,2); c=0,d=0,e=0,f=0").unwrap();
    assert!(zero.vector_field().p.is_zero() && zero.vector_field().q.is_zero());
}

#[test]
fn variety_restriction() {
    let s12 = SystemSpec::build_generic(Signature::s12());
    let v = s12.restrict_to_variety().unwrap();
    let vf = v.vector_field();
    assert_eq!(vf.p, v.parse_poly("y + g*x^2 + 2*h*x*y + k*y^2").unwrap());
    assert_eq!(vf.q, v.parse_poly("-x + l*x^2 + 2*m*x*y + n*y^2").unwrap());
    assert_eq!(v.restrict_to_variety().unwrap(), v);
    assert!(v.is_on_variety() && !s12.is_on_variety());
    let gens = v.linear_generators().unwrap();
    assert_eq!(gens.k2, Poly::x().pow(2) + Poly::y().pow(2));
    // nonlinear coefficients untouched
    let concrete = SystemSpec::parse_shorthand("s(1,2); g=3,n=-1/2").unwrap();
    let r = concrete.restrict_to_variety().unwrap();
    assert_eq!(r.value("g"), Some(&CoeffValue::Value(int(3))));
    assert_eq!(r.value("n"), Some(&CoeffValue::Value(rat(-1, 2))));
}

#[test]
fn variety_conflict_is_reported() {
    let spec = SystemSpec::parse_shorthand("s(1,2); c=1").unwrap();
    assert!(matches!(spec.restrict_to_variety(), Err(SystemError::VarietyConflict { .. })));
    assert!(matches!(SystemSpec::parse_shorthand("s(1,2); V; d=2"), Err(SystemError::VarietyConflict { .. })));
}

#[test]
fn linear_generators_and_discriminants() {
    let s12 = SystemSpec::build_generic(Signature::s12());
    let g = s12.linear_generators().unwrap();
    assert_eq!(g.i1, s12.parse_poly("c + f").unwrap());
    assert_eq!(g.i2, s12.parse_poly("c^2 + 2*d*e + f^2").unwrap());
    assert_eq!(g.k2, s12.parse_poly("-e*x^2 + c*x*y - f*x*y + d*y^2").unwrap());

    let v = s12.restrict_to_variety().unwrap();
    let g = v.linear_generators().unwrap();
    assert!(g.i1.is_zero());
    // c^2 + 2de + f^2 at (0, 1, -1, 0)
    assert_eq!(g.i2, Poly::int(-2));
    let (classical, invariant) = v.discriminants().unwrap();
    assert_eq!(classical, Poly::int(-4));
    assert_eq!(invariant, Poly::int(-4));
    // the two expressions agree identically
    let (c, i) = s12.discriminants().unwrap();
    assert_eq!(c, i);
}

#[test]
fn shorthand_and_json() {
    let v = SystemSpec::parse_shorthand("s(1,2); V").unwrap();
    assert!(v.is_on_variety());
    assert_eq!(v.value("g"), Some(&CoeffValue::Symbolic));

    let c = SystemSpec::parse_shorthand("s(1,2); V; g=1,n=1,m=1").unwrap();
    assert!(c.is_concrete());
    assert_eq!(c.value("h"), Some(&CoeffValue::Value(int(0))));

    let j = SystemSpec::from_json(r#"{"signature": [1, 2], "coefficients": {"g": "1/2", "h": null}}"#).unwrap();
    assert_eq!(j.value("g"), Some(&CoeffValue::Value(rat(1, 2))));
    assert_eq!(j.value("h"), Some(&CoeffValue::Symbolic));
    assert_eq!(j.value("k"), Some(&CoeffValue::Symbolic));
}

#[test]
fn malformed_inputs() {
    assert!(matches!(SystemSpec::parse_shorthand("s(2,1)"), Err(SystemError::MalformedSignature(_))));
    assert!(matches!(Signature::parse("1,1,2"), Err(SystemError::MalformedSignature(_))));
    assert!(matches!(Signature::parse("2,3"), Err(SystemError::MalformedSignature(_))));
    match SystemSpec::parse_shorthand("s(1,2); g=1,zz=2") {
        Err(SystemError::UnknownCoefficient { name, pos }) => {
            assert_eq!(name, "zz");
            assert_eq!(pos, 12);
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        SystemSpec::from_json(r#"{"signature": [1, 2], "coefficients": {"q": "1"}}"#),
        Err(SystemError::UnknownCoefficient { .. })
    ));
}
