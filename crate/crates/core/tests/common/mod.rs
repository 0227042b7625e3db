#![allow(dead_code)]

use std::collections::BTreeSet;

use evstab::arith::{gf_construct, Field, FiniteField, FuncFieldElem, FunctionField, GaloisField, GfElem, ProjPoint, Rat, Rationals};
use evstab::dynamics::RationalMap;
use evstab::poly::Poly;
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn qpoly(c: &[Rat]) -> Poly<Rat> {
    Poly::from_coeffs(&Rationals, c.to_vec())
}

pub fn int_poly(c: &[i64]) -> Poly<Rat> {
    Poly::from_coeffs(&Rationals, c.iter().map(|&x| rat(x, 1)).collect())
}

pub fn gf_poly(k: &GaloisField, c: &[u64]) -> Poly<GfElem> {
    Poly::from_coeffs(k, c.iter().map(|&i| k.element(i % k.order())).collect())
}

pub fn ff_elem(k: &FunctionField, num: &[u64], den: &[u64]) -> Option<FuncFieldElem> {
    let b = k.base();
    let den = gf_poly(b, den);
    if den.is_zero() {
        return None;
    }
    k.fraction(gf_poly(b, num), den).ok()
}

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=24).prop_map(|(n, d)| rat(n, d))
}

pub fn qpoly_strategy(max_deg: usize) -> impl Strategy<Value = Poly<Rat>> {
    prop::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(|c| qpoly(&c))
}

pub fn gf_coeffs(max_deg: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 0..=max_deg + 1)
}

/// Independent irreducibility test over GF(q): degree n is irreducible iff
/// it has no factor of degree e <= n/2, i.e. gcd(f, z^(q^e) - z) = 1.
pub fn irreducible_by_gcds<K: FiniteField>(k: &K, f: &Poly<K::Elem>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    let f = f.monic(k);
    let x = Poly::x(k);
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        // h = z^(q^e) mod f by q-th powering with plain repeated squaring
        h = h.powmod(k.order(), &f, k);
        if !h.sub(&x, k).gcd(&f, k).is_constant() {
            return false;
        }
    }
    true
}

/// All polynomials over GF(q) of degree at most `d`, including zero.
pub fn all_polys(k: &GaloisField, d: usize) -> Vec<Poly<GfElem>> {
    let q = k.order();
    let total = q.pow(d as u32 + 1);
    (0..total)
        .map(|mut i| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..=d {
                c.push(k.element(i % q));
                i /= q;
            }
            Poly::from_coeffs(k, c)
        })
        .collect()
}

pub fn is_monic<F: Field>(k: &F, f: &Poly<F::Elem>) -> bool {
    f.leading().is_some_and(|c| k.is_one(c))
}

/// Exhaustive injectivity of a map over a prime field on `P^1(GF(p^e))`.
pub fn injective_on_extension(phi: &RationalMap<GaloisField>, e: u32) -> bool {
    let k = phi.field();
    let big = gf_construct(k.p(), e).unwrap();
    let up = |g: &Poly<GfElem>| {
        Poly::from_coeffs(&big, g.coeffs().iter().map(|c| big.from_digits(&[c.0])).collect())
    };
    let lifted = RationalMap::new(&big, up(phi.numerator()), up(phi.denominator())).unwrap();
    let index = |x: &ProjPoint<GfElem>| match x {
        ProjPoint::Infinity => big.order(),
        ProjPoint::Finite(a) => big.index_of(a),
    };
    let images: BTreeSet<u64> = big.projective_line().iter().map(|x| index(&lifted.apply(x))).collect();
    images.len() as u64 == big.order() + 1
}

/// Every map of degree 1..=max_deg over k, each once.
pub fn all_maps(k: &GaloisField, max_deg: usize) -> Vec<RationalMap<GaloisField>> {
    let polys = all_polys(k, max_deg);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in &polys {
        for g in &polys {
            if let Ok(m) = RationalMap::new(k, f.clone(), g.clone()) {
                if seen.insert(m.format()) {
                    out.push(m);
                }
            }
        }
    }
    out
}
