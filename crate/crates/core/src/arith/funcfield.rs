use num_bigint::BigInt;

use super::{Field, GaloisField, GfElem};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Element of `F_p(t)`: a reduced fraction of polynomials in `t` with monic
/// denominator. Zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuncFieldElem {
    num: Poly<GfElem>,
    den: Poly<GfElem>,
}

impl FuncFieldElem {
    pub fn num(&self) -> &Poly<GfElem> {
        &self.num
    }

    pub fn den(&self) -> &Poly<GfElem> {
        &self.den
    }

    /// Whether the element lies in the constant field `F_p`.
    pub fn as_constant(&self) -> Option<GfElem> {
        if self.den.degree() == Some(0) {
            match self.num.degree() {
                None => Some(GfElem(0)),
                Some(0) => Some(self.num.coeffs()[0]),
                _ => None,
            }
        } else {
            None
        }
    }
}

/// The rational function field `F_p(t)` over a prime field.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionField {
    base: GaloisField,
}

impl FunctionField {
    pub fn new(base: GaloisField) -> Result<Self> {
        if !base.is_prime_field() {
            return Err(Error::Unsupported(
                "function fields are supported over prime fields only".into(),
            ));
        }
        Ok(FunctionField { base })
    }

    pub fn base(&self) -> &GaloisField {
        &self.base
    }

    /// Builds `num/den`, reducing to canonical form.
    pub fn fraction(&self, num: Poly<GfElem>, den: Poly<GfElem>) -> Result<FuncFieldElem> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator in F_p(t)".into()));
        }
        Ok(self.normalize(num, den))
    }

    pub fn from_poly(&self, num: Poly<GfElem>) -> FuncFieldElem {
        FuncFieldElem {
            num,
            den: Poly::one(&self.base),
        }
    }

    pub fn t(&self) -> FuncFieldElem {
        self.from_poly(Poly::x(&self.base))
    }

    pub fn constant(&self, c: GfElem) -> FuncFieldElem {
        self.from_poly(Poly::constant(&self.base, c))
    }

    fn normalize(&self, num: Poly<GfElem>, den: Poly<GfElem>) -> FuncFieldElem {
        let k = &self.base;
        if num.is_zero() {
            return FuncFieldElem {
                num,
                den: Poly::one(k),
            };
        }
        let g = num.gcd(&den, k);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g, k), den.div_exact(&g, k))
        };
        let lc = *den.leading().expect("nonzero denominator");
        if lc != k.one() {
            let inv = k.inv(&lc).expect("nonzero");
            num = num.scale(&inv, k);
            den = den.scale(&inv, k);
        }
        FuncFieldElem { num, den }
    }
}

impl Field for FunctionField {
    type Elem = FuncFieldElem;

    fn zero(&self) -> FuncFieldElem {
        self.from_poly(Poly::zero())
    }

    fn one(&self) -> FuncFieldElem {
        self.from_poly(Poly::one(&self.base))
    }

    fn from_int(&self, n: &BigInt) -> FuncFieldElem {
        self.constant(self.base.from_int(n))
    }

    fn add(&self, a: &FuncFieldElem, b: &FuncFieldElem) -> FuncFieldElem {
        let k = &self.base;
        if a.den == b.den {
            return self.normalize(a.num.add(&b.num, k), a.den.clone());
        }
        let num = a.num.mul(&b.den, k).add(&b.num.mul(&a.den, k), k);
        self.normalize(num, a.den.mul(&b.den, k))
    }

    fn sub(&self, a: &FuncFieldElem, b: &FuncFieldElem) -> FuncFieldElem {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &FuncFieldElem) -> FuncFieldElem {
        FuncFieldElem {
            num: a.num.neg(&self.base),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &FuncFieldElem, b: &FuncFieldElem) -> FuncFieldElem {
        let k = &self.base;
        self.normalize(a.num.mul(&b.num, k), a.den.mul(&b.den, k))
    }

    fn inv(&self, a: &FuncFieldElem) -> Option<FuncFieldElem> {
        if a.num.is_zero() {
            None
        } else {
            Some(self.normalize(a.den.clone(), a.num.clone()))
        }
    }

    fn characteristic(&self) -> u64 {
        self.base.p()
    }

    fn format_elem(&self, a: &FuncFieldElem) -> String {
        let num = a.num.format(&self.base, "t");
        if a.den.degree() == Some(0) {
            num
        } else {
            format!("({num})/({})", a.den.format(&self.base, "t"))
        }
    }

    fn name(&self) -> String {
        format!("GF({})(t)", self.base.p())
    }

    fn pth_root(&self, a: &FuncFieldElem) -> Option<FuncFieldElem> {
        let p = self.base.p() as usize;
        let root = |f: &Poly<GfElem>| -> Option<Poly<GfElem>> {
            let mut out = Vec::new();
            for (i, c) in f.coeffs().iter().enumerate() {
                if i % p == 0 {
                    out.push(*c);
                } else if c.0 != 0 {
                    return None;
                }
            }
            Some(Poly::from_coeffs(&self.base, out))
        };
        Some(self.normalize(root(&a.num)?, root(&a.den)?))
    }

    fn symbol(&self, name: &str) -> Option<FuncFieldElem> {
        (name == "t").then(|| self.t())
    }

    fn size_bits(&self, a: &FuncFieldElem) -> u64 {
        (a.num.coeffs().len() + a.den.coeffs().len()) as u64 * 8
    }

    /// Clears `t`-denominators and `t`-content, then makes the leading
    /// coefficient of the leading data monic in `t`.
    fn canonical_scalar(&self, polys: &[&Poly<FuncFieldElem>]) -> FuncFieldElem {
        let k = &self.base;
        let mut lcm = Poly::one(k);
        for c in polys.iter().flat_map(|p| p.coeffs()) {
            let g = lcm.gcd(&c.den, k);
            lcm = lcm.mul(&c.den, k).div_exact(&g, k);
        }
        let mut content = Poly::zero();
        for c in polys.iter().flat_map(|p| p.coeffs()) {
            let scaled = c.num.mul(&lcm.div_exact(&c.den, k), k);
            content = content.gcd(&scaled, k);
        }
        if content.is_zero() {
            return self.one();
        }
        let scalar = self.normalize(lcm, content);
        match polys.iter().rev().find_map(|p| p.leading()) {
            Some(lc) => {
                let scaled = self.mul(lc, &scalar);
                let top = *scaled.num.leading().expect("nonzero");
                self.mul(&scalar, &self.constant(k.inv(&top).expect("nonzero")))
            }
            None => scalar,
        }
    }
}
