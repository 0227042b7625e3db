use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Field;
use crate::poly::Poly;

/// Exact rational number in lowest terms with positive denominator.
pub type Rat = BigRational;

/// The field `Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Rationals {
    pub fn rat(&self, num: i64, den: i64) -> Rat {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::zero()
    }

    fn one(&self) -> Rat {
        Rat::one()
    }

    fn from_int(&self, n: &BigInt) -> Rat {
        Rat::from_integer(n.clone())
    }

    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }

    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }

    fn neg(&self, a: &Rat) -> Rat {
        -a
    }

    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }

    fn inv(&self, a: &Rat) -> Option<Rat> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn format_elem(&self, a: &Rat) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn name(&self) -> String {
        "Q".to_string()
    }

    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }

    // the derived hash expands a continued fraction recursively; reduced
    // form is canonical, so hashing both parts is enough
    fn fingerprint(&self, a: &Rat) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        std::hash::Hash::hash(a.numer(), &mut h);
        std::hash::Hash::hash(a.denom(), &mut h);
        std::hash::Hasher::finish(&h)
    }

    fn size_bits(&self, a: &Rat) -> u64 {
        a.numer().bits() + a.denom().bits()
    }

    /// Clears denominators and integer content jointly, then fixes the sign
    /// so the leading data is positive.
    fn canonical_scalar(&self, polys: &[&Poly<Rat>]) -> Rat {
        let mut lcm = BigInt::one();
        for c in polys.iter().flat_map(|p| p.coeffs()) {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for c in polys.iter().flat_map(|p| p.coeffs()) {
            let scaled = c.numer() * (&lcm / c.denom());
            gcd = gcd.gcd(&scaled);
        }
        if gcd.is_zero() {
            return Rat::one();
        }
        let mut scalar = Rat::new(lcm, gcd);
        if let Some(lc) = polys.iter().rev().find_map(|p| p.leading()) {
            if lc.is_negative() {
                scalar = -scalar;
            }
        }
        scalar
    }

    fn resultant(&self, a: &Poly<Rat>, b: &Poly<Rat>) -> Rat {
        crate::poly::resultant_rational(a, b)
    }
}

/// `p`-adic valuation of a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    if p == 2 {
        return n.trailing_zeros().unwrap_or(0) as i64;
    }
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_scalar_clears_denominators_and_content() {
        let q = Rationals;
        // (2z^2 + 2/3, 2) -> (3z^2 + 1, 3)
        let f = Poly::from_coeffs(&q, vec![q.rat(2, 3), q.zero(), q.from_i64(2)]);
        let g = Poly::constant(&q, q.from_i64(2));
        let c = q.canonical_scalar(&[&f, &g]);
        assert_eq!(c, q.rat(3, 2));
        let g_neg = Poly::constant(&q, q.from_i64(-2));
        assert_eq!(q.canonical_scalar(&[&f, &g_neg]), q.rat(-3, 2));
    }

    #[test]
    fn integer_valuations() {
        assert_eq!(int_valuation(&BigInt::from(48), 2), 4);
        assert_eq!(int_valuation(&BigInt::from(-45), 3), 2);
        assert_eq!(int_valuation(&BigInt::from(7), 5), 0);
    }
}
