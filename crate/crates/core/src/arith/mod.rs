//! Exact coefficient fields and discrete valuations.
//!
//! Every field is a small context object implementing [`Field`]; elements are
//! plain values whose arithmetic goes through the context. This keeps
//! `GF(p^m)` (whose multiplication needs the modulus) and `F_p(t)` on the
//! same footing as `Q`.

mod ext_int;
mod funcfield;
mod gf;
pub mod primes;
mod rational;
mod valuation;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use rand::Rng;

use crate::poly::Poly;

pub use ext_int::ExtInt;
pub use funcfield::{FuncFieldElem, FunctionField};
pub use gf::{gf_construct, GaloisField, GfElem};
pub use rational::{Rat, Rationals};
pub use valuation::{
    point_valuation, reduce_point, AnyValuation, NoValuation, PAdic, PlaceAdic, Valuation,
};

/// A field with exact, canonical element representations.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;

    /// Text form accepted back by the expression parser.
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Short name such as `Q`, `GF(5)` or `GF(5)(t)`.
    fn name(&self) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `p`-th root in characteristic `p`, when it exists in the field.
    fn pth_root(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Named constants the parser may reference (`t` in `F_p(t)`, the
    /// generator `a` of `GF(p^m)`).
    fn symbol(&self, _name: &str) -> Option<Self::Elem> {
        None
    }

    /// Hash of an element for cycle detection. Override when the derived
    /// `Hash` is expensive.
    fn fingerprint(&self, a: &Self::Elem) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        a.hash(&mut h);
        std::hash::Hasher::finish(&h)
    }

    /// Rough storage size of an element, used to stop runaway orbits.
    fn size_bits(&self, _a: &Self::Elem) -> u64 {
        0
    }

    /// The scalar `c` such that `c * p` is in canonical scaling for every
    /// `p` in `polys`. The leading coefficient of the last nonzero entry
    /// carries the normalization ("leading data"). Default: make it monic.
    fn canonical_scalar(&self, polys: &[&Poly<Self::Elem>]) -> Self::Elem {
        polys
            .iter()
            .rev()
            .find_map(|p| p.leading())
            .and_then(|lc| self.inv(lc))
            .unwrap_or_else(|| self.one())
    }

    /// Resultant with the convention `Res(a, b) = lc(a)^deg b * prod b(roots of a)`.
    fn resultant(&self, a: &Poly<Self::Elem>, b: &Poly<Self::Elem>) -> Self::Elem {
        crate::poly::resultant_euclid(self, a, b)
    }
}

/// A finite field `GF(q)` with elements indexed by `0..q`.
pub trait FiniteField: Field {
    fn order(&self) -> u64;
    fn degree(&self) -> u32;
    fn element(&self, index: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;

    fn elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + '_> {
        Box::new((0..self.order()).map(move |i| self.element(i)))
    }

    /// All points of `P^1` over this field: finite points in index order, then infinity.
    fn projective_line(&self) -> Vec<ProjPoint<Self::Elem>> {
        let mut pts: Vec<_> = self.elements().map(ProjPoint::Finite).collect();
        pts.push(ProjPoint::Infinity);
        pts
    }

    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem {
        self.element(rng.gen_range(0..self.order()))
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_zero(a) || self.characteristic() == 2 {
            return true;
        }
        self.is_one(&self.pow(a, (self.order() - 1) / 2))
    }
}

/// A point of the projective line over a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint<E> {
    Finite(E),
    Infinity,
}

impl<E> ProjPoint<E> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&E> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

pub fn format_point<F: Field>(field: &F, p: &ProjPoint<F::Elem>) -> String {
    match p {
        ProjPoint::Finite(x) => field.format_elem(x),
        ProjPoint::Infinity => "inf".to_string(),
    }
}

/// `1/x` on `P^1` with `1/0 = inf` and `1/inf = 0`.
pub fn invert_point<F: Field>(field: &F, p: &ProjPoint<F::Elem>) -> ProjPoint<F::Elem> {
    match p {
        ProjPoint::Infinity => ProjPoint::Finite(field.zero()),
        ProjPoint::Finite(x) => match field.inv(x) {
            Some(y) => ProjPoint::Finite(y),
            None => ProjPoint::Infinity,
        },
    }
}
