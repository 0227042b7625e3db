mod common;

use common::*;
use evstab::arith::{gf_construct, Field, FiniteField, FunctionField, GaloisField, ProjPoint, Rationals};
use evstab::dynamics::RationalMap;
use evstab::error::Error;
use evstab::parse::{parse_element, parse_field, parse_map, parse_point, parse_poly, parse_valuation, FieldSpec};
use evstab::poly::Poly;
use proptest::prelude::*;

fn gf_field() -> impl Strategy<Value = GaloisField> {
    prop::sample::select(vec![(2u64, 1u32), (5, 1), (2, 2), (2, 3), (3, 2), (7, 2)])
        .prop_map(|(p, m)| gf_construct(p, m).unwrap())
}

fn ff_poly(k: &FunctionField, raw: &[(Vec<u64>, Vec<u64>)]) -> Poly<evstab::arith::FuncFieldElem> {
    let c = raw
        .iter()
        .map(|(n, d)| ff_elem(k, n, d).unwrap_or_else(|| k.zero()))
        .collect();
    Poly::from_coeffs(k, c)
}

fn ff_coeffs() -> impl Strategy<Value = Vec<(Vec<u64>, Vec<u64>)>> {
    prop::collection::vec((gf_coeffs(2), gf_coeffs(2)), 0..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn q_poly_round_trips(f in qpoly_strategy(6)) {
        let q = Rationals;
        prop_assert_eq!(parse_poly(&q, &f.format(&q, "z")).unwrap(), f);
    }

    #[test]
    fn gf_poly_round_trips(k in gf_field(), c in gf_coeffs(6)) {
        let f = gf_poly(&k, &c);
        let text = f.format(&k, "z");
        prop_assert_eq!(parse_poly(&k, &text).unwrap(), f, "{}", text);
    }

    #[test]
    fn gf_elements_round_trip(k in gf_field(), i in any::<u64>()) {
        let a = k.element(i % k.order());
        prop_assert_eq!(parse_element(&k, &k.format_elem(&a)).unwrap(), a);
    }

    #[test]
    fn function_field_poly_round_trips(p in prop::sample::select(vec![2u64, 3, 5]), raw in ff_coeffs()) {
        let k = FunctionField::new(GaloisField::prime(p).unwrap()).unwrap();
        let f = ff_poly(&k, &raw);
        let text = f.format(&k, "z");
        prop_assert_eq!(parse_poly(&k, &text).unwrap(), f, "{}", text);
    }

    #[test]
    fn q_maps_round_trip(f in qpoly_strategy(3), g in qpoly_strategy(3)) {
        let q = Rationals;
        if let Ok(phi) = RationalMap::new(&q, f, g) {
            prop_assert_eq!(parse_map(&q, &phi.format()).unwrap(), phi);
        }
    }

    #[test]
    fn gf_maps_round_trip(k in gf_field(), f in gf_coeffs(3), g in gf_coeffs(3)) {
        if let Ok(phi) = RationalMap::new(&k, gf_poly(&k, &f), gf_poly(&k, &g)) {
            prop_assert_eq!(parse_map(&k, &phi.format()).unwrap(), phi);
        }
    }

    #[test]
    fn garbage_never_panics(s in "[-+*/^()z0-9 ta.]{0,24}") {
        let q = Rationals;
        let _ = parse_poly(&q, &s);
        let _ = parse_map(&q, &s);
        let k = gf_construct(3, 2).unwrap();
        let _ = parse_map(&k, &s);
        let _ = parse_field(&s);
    }

    #[test]
    fn parse_errors_point_inside_input(s in "[-+*/^()z0-9 ]{0,24}") {
        if let Err(Error::Parse { offset, .. }) = parse_poly(&Rationals, &s) {
            prop_assert!(offset <= s.len());
        }
    }
}

#[test]
fn field_names() {
    assert!(matches!(parse_field("Q").unwrap(), FieldSpec::Q(_)));
    assert_eq!(parse_field("GF(5)").unwrap().name(), "GF(5)");
    assert_eq!(parse_field(" GF(3, 2) ").unwrap().name(), "GF(3,2)");
    assert!(matches!(parse_field("GF(7)(t)").unwrap(), FieldSpec::FuncField(_)));
    match parse_field("GF(4)") {
        Err(Error::Parse { offset, message }) => {
            assert_eq!(offset, 3);
            assert!(message.contains("GF(2,2)"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn points_and_valuations() {
    let q = Rationals;
    assert_eq!(parse_point(&q, "inf").unwrap(), ProjPoint::Infinity);
    assert_eq!(parse_point(&q, "-1/4").unwrap(), ProjPoint::Finite(rat(-1, 4)));
    let ff = parse_field("GF(2)(t)").unwrap();
    assert_eq!(parse_valuation(&ff, "t").unwrap().residue_order(), 2);
    assert_eq!(parse_valuation(&ff, "t^2 + t + 1").unwrap().residue_order(), 4);
    assert!(parse_valuation(&ff, "t^2 + 1").is_err());
    let qs = parse_field("Q").unwrap();
    assert_eq!(parse_valuation(&qs, "3").unwrap().describe(), "3-adic");
    assert!(parse_valuation(&qs, "6").is_err());
    assert!(parse_valuation(&parse_field("GF(5)").unwrap(), "5").is_err());
}

#[test]
fn expressions_are_expanded() {
    let q = Rationals;
    let phi = parse_map(&q, "(z^2 + 2*z + 2)/(z + 5)").unwrap();
    assert_eq!(phi.degree(), 2);
    let f = parse_poly(&q, "(z+1)^3 - z^(1+2)").unwrap();
    assert_eq!(f, int_poly(&[1, 3, 3]));
    let k = gf_construct(2, 2).unwrap();
    // a^2 = a + 1 in GF(4)
    assert_eq!(parse_element(&k, "a^2").unwrap(), parse_element(&k, "a + 1").unwrap());
    assert!(matches!(parse_poly(&q, "z/0"), Err(Error::Parse { offset: 1, .. })));
}
