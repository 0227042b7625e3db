mod common;

use common::*;
use evstab::arith::{Field, FiniteField, GaloisField, PAdic, ProjPoint, Rat, Rationals, Valuation};
use evstab::dynamics::{preimage_poly, RationalMap};
use evstab::factor::count_irreducible_factors;
use evstab::stability::{
    eisenstein_bound, evstab1_certificate, evstab2_certificate, fullmain_certificate,
    is_bijective_on_residue_extensions, orbit_valuation_check, polycor_bound, Certificate, FullmainOptions,
    Outcome,
};
use proptest::prelude::*;

fn exhaustive_agreement(p: u64, max_deg: usize) {
    let k = GaloisField::prime(p).unwrap();
    let maps = all_maps(&k, max_deg);
    let mut bijective = 0;
    for phi in &maps {
        let by_condition = is_bijective_on_residue_extensions(phi).unwrap().bijective;
        let by_search = (1..=3).all(|e| injective_on_extension(phi, e));
        assert_eq!(by_condition, by_search, "{} over GF({p})", phi.format());
        bijective += usize::from(by_condition);
    }
    assert!(bijective > 0);
}

#[test]
fn bijectivity_condition_matches_search_gf2() {
    exhaustive_agreement(2, 4);
}

#[test]
fn bijectivity_condition_matches_search_gf3() {
    exhaustive_agreement(3, 3);
}

fn q_map() -> impl Strategy<Value = RationalMap<Rationals>> {
    (
        prop::collection::vec(small_rat(), 1..=3),
        prop::collection::vec(small_rat(), 1..=3),
    )
        .prop_filter_map("constant or degenerate map", |(f, g)| {
            let m = RationalMap::new(&Rationals, qpoly(&f), qpoly(&g)).ok()?;
            (m.degree() >= 2).then_some(m)
        })
}

fn q_point() -> impl Strategy<Value = ProjPoint<Rat>> {
    prop_oneof![
        1 => Just(ProjPoint::Infinity),
        8 => small_rat().prop_map(ProjPoint::Finite),
    ]
}

fn prime() -> impl Strategy<Value = PAdic> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| PAdic::new(p).unwrap())
}

/// Counts of irreducible factors of `P_n` for `n = 1..` while `d^n <= cap`.
fn observed_counts(phi: &RationalMap<Rationals>, alpha: &ProjPoint<Rat>, cap: usize) -> Vec<u64> {
    let q = Rationals;
    let mut out = Vec::new();
    let mut n = 1;
    while phi.degree().pow(n as u32) <= cap {
        let p = preimage_poly(phi, n, alpha, cap).unwrap();
        out.push(count_irreducible_factors(&q, &p, 0).unwrap());
        n += 1;
    }
    out
}

fn assert_sound(cert: &Certificate, counts: &[u64]) -> Result<(), TestCaseError> {
    for (i, &c) in counts.iter().enumerate() {
        prop_assert!(
            c <= cert.bound,
            "{:?}: n = {} has {c} factors, bound {}",
            cert.theorem,
            i + 1,
            cert.bound
        );
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn orbit_valuation_check_never_errors(phi in q_map(), v in prime()) {
        prop_assert!(orbit_valuation_check(&phi, &v, 8).is_ok());
    }

    #[test]
    fn general_criterion_at_zero_matches_first(phi in q_map(), v in prime()) {
        let zero = ProjPoint::Finite(Rationals.zero());
        let a = evstab1_certificate(&phi, &v).unwrap();
        let b = evstab2_certificate(&phi, &v, &zero).unwrap();
        prop_assert_eq!(a.certified().map(|c| c.bound), b.certified().map(|c| c.bound));
    }

    #[test]
    fn period_index_fits_residue_line(phi in q_map(), alpha in q_point(), v in prime()) {
        if let Outcome::Certified(c) = fullmain_certificate(&phi, &v, &alpha, FullmainOptions::default()).unwrap() {
            let i = c.period_index.unwrap();
            prop_assert!(i >= 1 && i as u64 <= v.residue_field().order() + 1);
        }
    }

    #[test]
    fn refusals_name_a_failed_hypothesis(phi in q_map(), alpha in q_point(), v in prime()) {
        for out in [
            evstab1_certificate(&phi, &v).unwrap(),
            evstab2_certificate(&phi, &v, &alpha).unwrap(),
            fullmain_certificate(&phi, &v, &alpha, FullmainOptions::default()).unwrap(),
        ] {
            match out {
                Outcome::Refused(r) => {
                    let last = r.hypotheses.last().unwrap();
                    prop_assert!(!last.passed);
                    prop_assert_eq!(&last.name, &r.failed);
                }
                Outcome::Certified(c) => prop_assert!(c.hypotheses.iter().all(|h| h.passed)),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certified_bounds_hold_for_rational_maps(phi in q_map(), alpha in q_point(), v in prime()) {
        let zero = ProjPoint::Finite(Rationals.zero());
        if let Outcome::Certified(c) = evstab1_certificate(&phi, &v).unwrap() {
            assert_sound(&c, &observed_counts(&phi, &zero, 16))?;
        }
        let certs = [
            evstab2_certificate(&phi, &v, &alpha).unwrap(),
            fullmain_certificate(&phi, &v, &alpha, FullmainOptions::default()).unwrap(),
        ];
        if certs.iter().any(|o| o.certified().is_some()) {
            let counts = observed_counts(&phi, &alpha, 16);
            for c in certs.iter().filter_map(|o| o.certified()) {
                assert_sound(c, &counts)?;
            }
        }
    }

    #[test]
    fn certified_bounds_hold_for_quadratic_family(
        num in prop::sample::select(vec![1i64, 3, 5, 7, 9, -3, -5, -7, 2, 4, -2]),
        den in prop::sample::select(vec![1i64, 2, 3, 4, 5, 8, 9]),
        alpha in q_point(),
        v in prime(),
    ) {
        let q = Rationals;
        let phi = RationalMap::polynomial(&q, qpoly(&[rat(num, den), q.zero(), q.one()])).unwrap();
        let mut certs = vec![
            evstab2_certificate(&phi, &v, &alpha).unwrap(),
            fullmain_certificate(&phi, &v, &alpha, FullmainOptions::default()).unwrap(),
        ];
        if alpha.finite().is_some() {
            certs.push(polycor_bound(&phi, &v, &alpha).unwrap());
        }
        if certs.iter().any(|o| o.certified().is_some()) {
            let counts = observed_counts(&phi, &alpha, 32);
            for c in certs.iter().filter_map(|o| o.certified()) {
                assert_sound(c, &counts)?;
            }
        }
    }

    #[test]
    fn eisenstein_bound_holds(c in prop::collection::vec(-30i64..=30, 2..=7), v in prime()) {
        let q = Rationals;
        let f = int_poly(&c);
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        if let Outcome::Certified(cert) = eisenstein_bound(&q, &f, &v).unwrap() {
            prop_assert!(count_irreducible_factors(&q, &f, 0).unwrap() <= cert.bound);
        }
    }
}

#[test]
fn eisenstein_bound_certifies_classic_example() {
    let q = Rationals;
    let v = PAdic::new(2).unwrap();
    // z^4 + 2z + 2 is Eisenstein at 2
    let out = eisenstein_bound(&q, &int_poly(&[2, 2, 0, 0, 1]), &v).unwrap();
    assert_eq!(out.certified().unwrap().bound, 1);
    // z^2 + 4 has v(a_0) = 2 and two linear factors over Q(i) but one over Q
    let out = eisenstein_bound(&q, &int_poly(&[4, 0, 1]), &v).unwrap();
    assert_eq!(out.certified().unwrap().bound, 2);
    assert_eq!(v.value(&rat(4, 1)), evstab::arith::ExtInt::Finite(2));
}
