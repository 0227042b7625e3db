//! Discrete valuations with finite residue fields.
//!
//! Two kinds are supported: `p`-adic valuations on `Q`, and `pi`-adic
//! valuations on `F_p(t)` for a monic irreducible `pi` (with `pi = t` the
//! usual `t`-adic place). The degree place at infinity is not offered.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::Zero;

use super::rational::int_valuation;
use super::{ExtInt, Field, FiniteField, FuncFieldElem, FunctionField, GaloisField, GfElem, ProjPoint, Rat, Rationals};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// A normalized discrete valuation `v` on a field `K` (surjective onto `Z`
/// on `K^*`), with valuation ring `R`, maximal ideal `p` and finite residue
/// field `k = R/p`.
pub trait Valuation<F: Field>: Clone + Debug + Send + Sync {
    type Residue: FiniteField;

    fn field(&self) -> &F;
    fn residue_field(&self) -> &Self::Residue;

    /// `v(x)`, with `v(0) = +inf`.
    fn value(&self, x: &F::Elem) -> ExtInt;

    fn uniformizer(&self) -> F::Elem;

    /// The class of `x` in `k`; `x` must lie in `R`.
    fn residue(&self, x: &F::Elem) -> Result<<Self::Residue as Field>::Elem>;

    /// A representative in `R` of a residue class.
    fn lift(&self, r: &<Self::Residue as Field>::Elem) -> F::Elem;

    fn describe(&self) -> String;
}

/// `v` extended to `P^1(K)` with `v(inf) = -inf`.
pub fn point_valuation<F: Field, V: Valuation<F>>(v: &V, x: &ProjPoint<F::Elem>) -> ExtInt {
    match x {
        ProjPoint::Infinity => ExtInt::NegInf,
        ProjPoint::Finite(a) => v.value(a),
    }
}

/// Reduction `P^1(K) -> P^1(k)`: write `x = (a : b)` with `min(v(a), v(b)) = 0`
/// and reduce both coordinates.
pub fn reduce_point<F: Field, V: Valuation<F>>(
    v: &V,
    x: &ProjPoint<F::Elem>,
) -> ProjPoint<<V::Residue as Field>::Elem> {
    match x {
        ProjPoint::Infinity => ProjPoint::Infinity,
        ProjPoint::Finite(a) => {
            if v.value(a) >= ExtInt::Finite(0) {
                ProjPoint::Finite(v.residue(a).expect("integral element"))
            } else {
                ProjPoint::Infinity
            }
        }
    }
}

/// The `p`-adic valuation on `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct PAdic {
    p: u64,
    field: Rationals,
    residue: GaloisField,
}

impl PAdic {
    pub fn new(p: u64) -> Result<Self> {
        let residue = GaloisField::prime(p)?;
        Ok(PAdic {
            p,
            field: Rationals,
            residue,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Valuation<Rationals> for PAdic {
    type Residue = GaloisField;

    fn field(&self) -> &Rationals {
        &self.field
    }

    fn residue_field(&self) -> &GaloisField {
        &self.residue
    }

    fn value(&self, x: &Rat) -> ExtInt {
        if x.is_zero() {
            return ExtInt::PosInf;
        }
        ExtInt::Finite(int_valuation(x.numer(), self.p) - int_valuation(x.denom(), self.p))
    }

    fn uniformizer(&self) -> Rat {
        Rat::from_integer(BigInt::from(self.p))
    }

    fn residue(&self, x: &Rat) -> Result<GfElem> {
        if self.value(x) < ExtInt::Finite(0) {
            return Err(Error::Domain(format!("{x} is not {}-integral", self.p)));
        }
        let k = &self.residue;
        let num = k.from_int(x.numer());
        let den = k.from_int(x.denom());
        Ok(k.mul(&num, &k.inv(&den).expect("unit denominator")))
    }

    fn lift(&self, r: &GfElem) -> Rat {
        Rat::from_integer(BigInt::from(r.0))
    }

    fn describe(&self) -> String {
        format!("{}-adic", self.p)
    }
}

/// The `pi`-adic valuation on `F_p(t)` for a monic irreducible `pi`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaceAdic {
    field: FunctionField,
    pi: Poly<GfElem>,
    residue: GaloisField,
}

impl PlaceAdic {
    pub fn new(field: FunctionField, pi: Poly<GfElem>) -> Result<Self> {
        let base = field.base().clone();
        if pi.degree().unwrap_or(0) == 0 || pi.leading() != Some(&base.one()) {
            return Err(Error::argument("place must be a monic polynomial of positive degree"));
        }
        let modulus: Vec<u64> = pi.coeffs().iter().map(|c| c.0).collect();
        let residue = GaloisField::with_modulus(base.p(), modulus)
            .map_err(|_| Error::argument("place polynomial is not irreducible"))?;
        Ok(PlaceAdic { field, pi, residue })
    }

    pub fn t_adic(field: FunctionField) -> Result<Self> {
        let t = Poly::x(field.base());
        Self::new(field, t)
    }

    pub fn pi(&self) -> &Poly<GfElem> {
        &self.pi
    }

    fn order(&self, f: &Poly<GfElem>) -> i64 {
        let k = self.field.base();
        let mut f = f.clone();
        let mut n = 0;
        loop {
            let (q, r) = f.divrem(&self.pi, k).expect("nonzero place");
            if !r.is_zero() {
                return n;
            }
            f = q;
            n += 1;
        }
    }

    fn residue_of_poly(&self, f: &Poly<GfElem>) -> GfElem {
        let k = self.field.base();
        let r = f.rem(&self.pi, k).expect("nonzero place");
        let m = self.residue.m() as usize;
        let mut digits: Vec<u64> = r.coeffs().iter().map(|c| c.0).collect();
        digits.resize(m, 0);
        self.residue.from_digits(&digits)
    }
}

impl Valuation<FunctionField> for PlaceAdic {
    type Residue = GaloisField;

    fn field(&self) -> &FunctionField {
        &self.field
    }

    fn residue_field(&self) -> &GaloisField {
        &self.residue
    }

    fn value(&self, x: &FuncFieldElem) -> ExtInt {
        if x.num().is_zero() {
            return ExtInt::PosInf;
        }
        ExtInt::Finite(self.order(x.num()) - self.order(x.den()))
    }

    fn uniformizer(&self) -> FuncFieldElem {
        self.field.from_poly(self.pi.clone())
    }

    fn residue(&self, x: &FuncFieldElem) -> Result<GfElem> {
        if self.value(x) < ExtInt::Finite(0) {
            return Err(Error::Domain(format!(
                "{} is not integral at {}",
                self.field.format_elem(x),
                self.describe()
            )));
        }
        let k = &self.residue;
        let num = self.residue_of_poly(x.num());
        let den = self.residue_of_poly(x.den());
        Ok(k.mul(&num, &k.inv(&den).expect("unit denominator")))
    }

    fn lift(&self, r: &GfElem) -> FuncFieldElem {
        let base = self.field.base();
        let digits = self.residue.digits(*r);
        self.field
            .from_poly(Poly::from_coeffs(base, digits.into_iter().map(GfElem).collect()))
    }

    fn describe(&self) -> String {
        if self.pi.degree() == Some(1) && self.pi.coeffs()[0].0 == 0 {
            "t-adic".to_string()
        } else {
            format!("({})-adic", self.pi.format(self.field.base(), "t"))
        }
    }
}

/// Placeholder valuation type for fields that carry no nontrivial discrete
/// valuation (finite fields). It has no values.
#[derive(Clone, Debug)]
pub enum NoValuation {}

impl<F: Field> Valuation<F> for NoValuation {
    type Residue = GaloisField;

    fn field(&self) -> &F {
        match *self {}
    }
    fn residue_field(&self) -> &GaloisField {
        match *self {}
    }
    fn value(&self, _x: &F::Elem) -> ExtInt {
        match *self {}
    }
    fn uniformizer(&self) -> F::Elem {
        match *self {}
    }
    fn residue(&self, _x: &F::Elem) -> Result<GfElem> {
        match *self {}
    }
    fn lift(&self, _r: &GfElem) -> F::Elem {
        match *self {}
    }
    fn describe(&self) -> String {
        match *self {}
    }
}

/// Either supported valuation kind, for callers that pick one at run time.
#[derive(Clone, Debug)]
pub enum AnyValuation {
    PAdic(PAdic),
    Place(PlaceAdic),
}

impl AnyValuation {
    pub fn residue_order(&self) -> u64 {
        match self {
            AnyValuation::PAdic(v) => v.residue_field().order(),
            AnyValuation::Place(v) => v.residue_field().order(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AnyValuation::PAdic(v) => v.describe(),
            AnyValuation::Place(v) => v.describe(),
        }
    }
}
