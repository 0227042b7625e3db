//! Maps over a finite field that permute `P^1(E)` for every finite
//! extension `E`.
//!
//! Three equivalent tests are implemented: the normal form
//! `(c1 z^(p^j) + c2) / (c3 z^(p^j) + c4)`, unique preimages of every point
//! of `P^1(k)` over the algebraic closure, and exhaustive injectivity on
//! `P^1(GF(q^e))` for small `e`.

use serde::Serialize;

use crate::arith::{format_point, gf_construct, Field, FiniteField, GaloisField, GfElem, ProjPoint};
use crate::dynamics::RationalMap;
use crate::error::{Error, Result};
use crate::factor::{factor_gfq, squarefree_decompose};
use crate::poly::Poly;

/// `phi = (c1 z^(p^j) + c2) / (c3 z^(p^j) + c4)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub j: u32,
    pub c: [String; 4],
}

/// A point of `P^1(k)` with more than one preimage over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberWitness {
    pub beta: String,
    pub distinct_preimages: usize,
}

/// Two points of `P^1(GF(q^e))` with the same image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub extension_degree: u32,
    pub field: String,
    pub points: [String; 2],
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectivityReport {
    pub bijective: bool,
    pub normal_form: Option<NormalForm>,
    pub fiber_witness: Option<FiberWitness>,
    pub collision: Option<Collision>,
}

/// Largest extension degree searched for collisions when the normal form fails.
pub const WITNESS_EXTENSIONS: u32 = 2;

/// Decides bijectivity on all residue extensions by the normal form, and
/// cross-checks it against the unique-preimage condition on `P^1(k)`.
pub fn is_bijective_on_residue_extensions(phi: &RationalMap<GaloisField>) -> Result<BijectivityReport> {
    let k = phi.field();
    let normal_form = normal_form(phi);
    let fiber_witness = fiber_witness(phi)?;
    if normal_form.is_some() == fiber_witness.is_some() {
        return Err(Error::invariant(format!(
            "normal form and fiber test disagree for {} over {}",
            phi.format(),
            k.name()
        )));
    }
    let bijective = normal_form.is_some();
    let collision = if bijective {
        None
    } else {
        (1..=WITNESS_EXTENSIONS).find_map(|e| find_collision(phi, e).ok().flatten())
    };
    Ok(BijectivityReport {
        bijective,
        normal_form,
        fiber_witness,
        collision,
    })
}

/// The normal form when both `f` and `g` are supported on degrees `{0, p^j}`.
pub fn normal_form(phi: &RationalMap<GaloisField>) -> Option<NormalForm> {
    let k = phi.field();
    let p = k.characteristic() as usize;
    let d = phi.degree();
    let mut j = 0;
    let mut pj = 1;
    while pj < d {
        pj *= p;
        j += 1;
    }
    if pj != d {
        return None;
    }
    let supported = |h: &Poly<GfElem>| {
        h.coeffs()
            .iter()
            .enumerate()
            .all(|(i, c)| i == 0 || i == d || k.is_zero(c))
    };
    let (f, g) = (phi.numerator(), phi.denominator());
    if !supported(f) || !supported(g) {
        return None;
    }
    let c = [f.coeff(d, k), f.coeff(0, k), g.coeff(d, k), g.coeff(0, k)].map(|x| k.format_elem(&x));
    Some(NormalForm { j, c })
}

/// Number of distinct points of `P^1` over the algebraic closure mapping to `beta`.
pub fn distinct_preimages(phi: &RationalMap<GaloisField>, beta: &ProjPoint<GfElem>) -> Result<usize> {
    let k = phi.field();
    let h = match beta {
        ProjPoint::Infinity => phi.denominator().clone(),
        ProjPoint::Finite(b) => phi.numerator().sub(&phi.denominator().scale(b, k), k),
    };
    let deg = h
        .degree()
        .ok_or_else(|| Error::invariant("fiber polynomial vanished for a coprime pair"))?;
    let finite = if deg == 0 {
        0
    } else {
        squarefree_decompose(k, &h)?
            .iter()
            .map(|(g, _)| g.degree().unwrap())
            .sum()
    };
    Ok(finite + usize::from(deg < phi.degree()))
}

fn fiber_witness(phi: &RationalMap<GaloisField>) -> Result<Option<FiberWitness>> {
    let k = phi.field();
    for beta in k.projective_line() {
        let n = distinct_preimages(phi, &beta)?;
        if n != 1 {
            return Ok(Some(FiberWitness {
                beta: format_point(k, &beta),
                distinct_preimages: n,
            }));
        }
    }
    Ok(None)
}

/// `GF(q^e)` together with the images of the elements of `GF(q)`.
pub struct Extension {
    pub field: GaloisField,
    embedding: Vec<GfElem>,
}

impl Extension {
    pub fn new(base: &GaloisField, e: u32) -> Result<Self> {
        let p = base.p();
        let big = gf_construct(p, base.m() * e)?;
        let embedding = if base.m() == 1 {
            (0..p).map(|i| big.from_i64(i as i64)).collect()
        } else {
            // send the generator of the base to the least root of its modulus
            let modulus = Poly::from_coeffs(
                &big,
                base.modulus().iter().map(|&c| big.from_i64(c as i64)).collect(),
            );
            let rep = factor_gfq(&big, &modulus, 0)?;
            let root = rep
                .factors
                .iter()
                .find(|(g, _)| g.degree() == Some(1))
                .map(|(g, _)| big.neg(&g.coeffs()[0]))
                .ok_or_else(|| Error::invariant("base modulus has no root in the extension"))?;
            base.elements()
                .map(|x| {
                    let digits = base.digits(x);
                    let coeffs = digits.iter().map(|&d| big.from_i64(d as i64)).collect();
                    Poly::from_coeffs(&big, coeffs).eval(&root, &big)
                })
                .collect()
        };
        Ok(Extension { field: big, embedding })
    }

    pub fn embed(&self, x: &GfElem) -> GfElem {
        self.embedding[x.0 as usize]
    }

    pub fn embed_map(&self, phi: &RationalMap<GaloisField>) -> Result<RationalMap<GaloisField>> {
        let lift = |h: &Poly<GfElem>| {
            Poly::from_coeffs(&self.field, h.coeffs().iter().map(|c| self.embed(c)).collect())
        };
        RationalMap::new(&self.field, lift(phi.numerator()), lift(phi.denominator()))
    }
}

/// Whether `phi` is injective on `P^1(GF(q^e))`.
pub fn is_bijective_on_extension(phi: &RationalMap<GaloisField>, e: u32) -> Result<bool> {
    Ok(find_collision(phi, e)?.is_none())
}

/// Exhaustive search for two points of `P^1(GF(q^e))` with the same image.
pub fn find_collision(phi: &RationalMap<GaloisField>, e: u32) -> Result<Option<Collision>> {
    let ext = Extension::new(phi.field(), e)?;
    let big = &ext.field;
    let psi = ext.embed_map(phi)?;
    let size = big.order() as usize + 1;
    let mut seen: Vec<Option<ProjPoint<GfElem>>> = vec![None; size];
    let slot = |x: &ProjPoint<GfElem>| match x {
        ProjPoint::Finite(a) => big.index_of(a) as usize,
        ProjPoint::Infinity => size - 1,
    };
    for x in big.projective_line() {
        let y = psi.apply(&x);
        let s = slot(&y);
        if let Some(prev) = &seen[s] {
            return Ok(Some(Collision {
                extension_degree: e,
                field: big.name(),
                points: [format_point(big, prev), format_point(big, &x)],
                image: format_point(big, &y),
            }));
        }
        seen[s] = Some(x);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(k: &GaloisField, f: &[i64], g: &[i64]) -> RationalMap<GaloisField> {
        let p = |c: &[i64]| Poly::from_coeffs(k, c.iter().map(|&x| k.from_i64(x)).collect());
        RationalMap::new(k, p(f), p(g)).unwrap()
    }

    #[test]
    fn examples() {
        let f2 = gf_construct(2, 1).unwrap();
        let r = is_bijective_on_residue_extensions(&map(&f2, &[1, 0, 1], &[1])).unwrap();
        assert!(r.bijective);
        let nf = r.normal_form.unwrap();
        assert_eq!(nf.j, 1);
        assert_eq!(nf.c, ["1", "1", "0", "1"].map(String::from));
        for e in 1..=3 {
            assert!(is_bijective_on_extension(&map(&f2, &[1, 0, 1], &[1]), e).unwrap());
        }

        let f3 = gf_construct(3, 1).unwrap();
        let r = is_bijective_on_residue_extensions(&map(&f3, &[0, 0, 1], &[1])).unwrap();
        assert!(!r.bijective);
        let c = r.collision.unwrap();
        assert_eq!(c.extension_degree, 1);
        assert_eq!(c.points, ["1".to_string(), "2".to_string()]);
        assert_eq!(c.image, "1");

        let r = is_bijective_on_residue_extensions(&map(&f3, &[0, 0, 0, 1], &[1])).unwrap();
        assert!(r.bijective);
        assert_eq!(r.normal_form.unwrap().j, 1);
    }

    #[test]
    fn extension_embedding_respects_arithmetic() {
        let f4 = gf_construct(2, 2).unwrap();
        let ext = Extension::new(&f4, 2).unwrap();
        let big = &ext.field;
        for x in f4.elements() {
            for y in f4.elements() {
                assert_eq!(ext.embed(&f4.mul(&x, &y)), big.mul(&ext.embed(&x), &ext.embed(&y)));
                assert_eq!(ext.embed(&f4.add(&x, &y)), big.add(&ext.embed(&x), &ext.embed(&y)));
            }
        }
    }

    #[test]
    fn cube_map_needs_extension_witness() {
        // z^3 permutes GF(2) and GF(8) but not GF(4)
        let f2 = gf_construct(2, 1).unwrap();
        let phi = map(&f2, &[0, 0, 0, 1], &[1]);
        assert!(is_bijective_on_extension(&phi, 1).unwrap());
        assert!(!is_bijective_on_extension(&phi, 2).unwrap());
        let r = is_bijective_on_residue_extensions(&phi).unwrap();
        assert!(!r.bijective);
        assert_eq!(r.collision.unwrap().extension_degree, 2);
        let w = r.fiber_witness.unwrap();
        assert_eq!((w.beta.as_str(), w.distinct_preimages), ("1", 3));
    }
}
