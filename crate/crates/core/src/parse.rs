//! Text input: field names, rational expressions in `z`, points and
//! valuations. Errors carry the byte offset of the offending token.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" power)?          exponent: nonnegative integer
//! atom  := integer | identifier | "(" expr ")"
//! ```

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::arith::primes::{is_prime, prime_divisors};
use crate::arith::{
    gf_construct, AnyValuation, Field, FunctionField, GaloisField, PAdic, PlaceAdic, ProjPoint, Rationals,
};
use crate::dynamics::RationalMap;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// A field chosen at run time.
#[derive(Clone, Debug)]
pub enum FieldSpec {
    Q(Rationals),
    Gf(GaloisField),
    FuncField(FunctionField),
}

impl FieldSpec {
    pub fn name(&self) -> String {
        match self {
            FieldSpec::Q(k) => k.name(),
            FieldSpec::Gf(k) => k.name(),
            FieldSpec::FuncField(k) => k.name(),
        }
    }
}

/// `Q`, `GF(p)`, `GF(p,m)` or `GF(p)(t)`.
pub fn parse_field(s: &str) -> Result<FieldSpec> {
    let mut cur = Cursor::new(s);
    cur.skip_ws();
    if cur.eat_str("Q") {
        cur.expect_end()?;
        return Ok(FieldSpec::Q(Rationals));
    }
    if !cur.eat_str("GF") {
        return Err(Error::parse(cur.pos, "expected Q, GF(p), GF(p,m) or GF(p)(t)"));
    }
    cur.expect_char('(')?;
    let (p_at, p) = cur.integer()?;
    let mut m = 1u32;
    let mut m_at = None;
    if cur.eat_char(',') {
        let (at, v) = cur.integer()?;
        m_at = Some(at);
        m = v
            .to_u32()
            .filter(|&m| m >= 1)
            .ok_or_else(|| Error::parse(at, "extension degree must be a positive integer"))?;
    }
    cur.expect_char(')')?;
    let p = p
        .to_u64()
        .filter(|&p| p <= u32::MAX as u64)
        .ok_or_else(|| Error::parse(p_at, "characteristic too large"))?;
    if !is_prime(p) {
        let hint = match prime_divisors(p).as_slice() {
            [q] if m == 1 => {
                let e = (p as f64).log(*q as f64).round() as u32;
                format!("; use GF({q},{e})")
            }
            _ => String::new(),
        };
        return Err(Error::parse(p_at, format!("{p} not prime{hint}")));
    }
    let base = gf_construct(p, m).map_err(|e| Error::parse(m_at.unwrap_or(p_at), e.to_string()))?;
    let at = cur.pos;
    if cur.eat_str("(t)") {
        cur.expect_end()?;
        if m > 1 {
            return Err(Error::parse(at, "function fields need a prime base field"));
        }
        return Ok(FieldSpec::FuncField(FunctionField::new(base)?));
    }
    cur.expect_end()?;
    Ok(FieldSpec::Gf(base))
}

/// A rational map in `z`, normalized.
pub fn parse_map<F: Field>(k: &F, s: &str) -> Result<RationalMap<F>> {
    let (num, den) = parse_rational(k, s, true)?;
    if num.is_zero() && den.is_zero() {
        return Err(Error::parse(0, "expression reduces to 0/0"));
    }
    RationalMap::new(k, num, den)
}

/// A polynomial in `z`.
pub fn parse_poly<F: Field>(k: &F, s: &str) -> Result<Poly<F::Elem>> {
    let (num, den) = parse_rational(k, s, true)?;
    let c = match den.degree() {
        Some(0) => k.inv(&den.coeffs()[0]).expect("nonzero"),
        _ => return Err(Error::parse(0, "expected a polynomial in z")),
    };
    Ok(num.scale(&c, k))
}

/// A field element, or `inf`.
pub fn parse_point<F: Field>(k: &F, s: &str) -> Result<ProjPoint<F::Elem>> {
    if s.trim() == "inf" {
        return Ok(ProjPoint::Infinity);
    }
    Ok(ProjPoint::Finite(parse_element(k, s)?))
}

/// A field element written without `z`.
pub fn parse_element<F: Field>(k: &F, s: &str) -> Result<F::Elem> {
    let (num, den) = parse_rational(k, s, false)?;
    let at = |p: &Poly<F::Elem>| p.coeff(0, k);
    k.div(&at(&num), &at(&den))
        .ok_or_else(|| Error::parse(0, "division by zero"))
}

/// `p` over `Q`; `t` or a monic irreducible polynomial in `t` over `GF(p)(t)`.
pub fn parse_valuation(field: &FieldSpec, s: &str) -> Result<AnyValuation> {
    match field {
        FieldSpec::Q(_) => {
            let mut cur = Cursor::new(s);
            let (at, p) = cur.integer()?;
            cur.expect_end()?;
            let p = p
                .to_u64()
                .filter(|&p| is_prime(p))
                .ok_or_else(|| Error::parse(at, format!("{p} is not a prime")))?;
            Ok(AnyValuation::PAdic(PAdic::new(p)?))
        }
        FieldSpec::FuncField(k) => {
            let x = parse_element(k, s)?;
            if x.den().degree() != Some(0) {
                return Err(Error::parse(0, "place must be a polynomial in t"));
            }
            let c = k.base().inv(&x.den().coeffs()[0]).expect("nonzero");
            let pi = x.num().scale(&c, k.base());
            Ok(AnyValuation::Place(PlaceAdic::new(k.clone(), pi)?))
        }
        FieldSpec::Gf(k) => Err(Error::argument(format!(
            "{} has only the trivial valuation",
            k.name()
        ))),
    }
}

/// Numerator and denominator of an expression; `allow_z` enables the variable.
fn parse_rational<F: Field>(k: &F, s: &str, allow_z: bool) -> Result<(Poly<F::Elem>, Poly<F::Elem>)> {
    let mut p = Parser {
        k,
        cur: Cursor::new(s),
        allow_z,
    };
    let v = p.expr()?;
    p.cur.skip_ws();
    if p.cur.pos < s.len() {
        return Err(Error::parse(p.cur.pos, "unexpected input"));
    }
    Ok((v.num, v.den))
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.as_bytes().get(self.pos).copied()
    }

    fn eat_char(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c as u8) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, t: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(t) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn expect_char(&mut self, c: char) -> Result<()> {
        if self.eat_char(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{c}'")))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.s.len() {
            Err(Error::parse(self.pos, "unexpected input"))
        } else {
            Ok(())
        }
    }

    fn integer(&mut self) -> Result<(usize, BigInt)> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        Ok((start, self.s[start..self.pos].parse().expect("digits")))
    }

    fn identifier(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        (start < self.pos).then(|| (start, &self.s[start..self.pos]))
    }
}

/// `num / den` with `den != 0`.
struct Frac<E> {
    num: Poly<E>,
    den: Poly<E>,
}

struct Parser<'a, F: Field> {
    k: &'a F,
    cur: Cursor<'a>,
    allow_z: bool,
}

impl<F: Field> Parser<'_, F> {
    fn constant(&self, c: F::Elem) -> Frac<F::Elem> {
        Frac {
            num: Poly::constant(self.k, c),
            den: Poly::one(self.k),
        }
    }

    fn expr(&mut self) -> Result<Frac<F::Elem>> {
        let k = self.k;
        let mut acc = self.term()?;
        loop {
            let sign = if self.cur.eat_char('+') {
                true
            } else if self.cur.eat_char('-') {
                false
            } else {
                return Ok(acc);
            };
            let rhs = self.term()?;
            let a = acc.num.mul(&rhs.den, k);
            let b = rhs.num.mul(&acc.den, k);
            acc = Frac {
                num: if sign { a.add(&b, k) } else { a.sub(&b, k) },
                den: acc.den.mul(&rhs.den, k),
            };
        }
    }

    fn term(&mut self) -> Result<Frac<F::Elem>> {
        let k = self.k;
        let mut acc = self.unary()?;
        loop {
            let at = self.cur.pos;
            if self.cur.eat_char('*') {
                let rhs = self.unary()?;
                acc = Frac {
                    num: acc.num.mul(&rhs.num, k),
                    den: acc.den.mul(&rhs.den, k),
                };
            } else if self.cur.eat_char('/') {
                let rhs = self.unary()?;
                if rhs.num.is_zero() {
                    return Err(Error::parse(at, "division by zero"));
                }
                acc = Frac {
                    num: acc.num.mul(&rhs.den, k),
                    den: acc.den.mul(&rhs.num, k),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Frac<F::Elem>> {
        if self.cur.eat_char('-') {
            let v = self.unary()?;
            return Ok(Frac {
                num: v.num.neg(self.k),
                den: v.den,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Frac<F::Elem>> {
        let base = self.atom()?;
        self.cur.skip_ws();
        let at = self.cur.pos;
        if !self.cur.eat_char('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        let e = e
            .to_u64()
            .filter(|_| !e.is_negative())
            .ok_or_else(|| Error::parse(at, "exponent must be a nonnegative integer"))?;
        if e > 1 << 20 {
            return Err(Error::Resource(format!("exponent {e} is too large")));
        }
        Ok(Frac {
            num: base.num.pow(e, self.k),
            den: base.den.pow(e, self.k),
        })
    }

    /// Integer exponent: a literal or parenthesized integer expression,
    /// itself possibly raised to a power (right associative).
    fn exponent(&mut self) -> Result<BigInt> {
        self.cur.skip_ws();
        let at = self.cur.pos;
        let base = if self.cur.eat_char('(') {
            let v = self.int_expr()?;
            self.cur.expect_char(')')?;
            v
        } else if self.cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.cur.integer()?.1
        } else {
            return Err(Error::parse(at, "exponent must be a nonnegative integer"));
        };
        if self.cur.eat_char('^') {
            let e = self.exponent()?;
            let e = e
                .to_u32()
                .filter(|&e| e <= 64)
                .ok_or_else(|| Error::parse(at, "exponent too large"))?;
            return Ok(num_traits::pow(base, e as usize));
        }
        Ok(base)
    }

    fn int_expr(&mut self) -> Result<BigInt> {
        let mut acc = self.exponent()?;
        loop {
            if self.cur.eat_char('+') {
                acc += self.exponent()?;
            } else if self.cur.eat_char('*') {
                acc *= self.exponent()?;
            } else if self.cur.eat_char('-') {
                acc -= self.exponent()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn atom(&mut self) -> Result<Frac<F::Elem>> {
        self.cur.skip_ws();
        let at = self.cur.pos;
        match self.cur.peek() {
            None => Err(Error::parse(at, "unexpected end of input")),
            Some(b'(') => {
                self.cur.pos += 1;
                let v = self.expr()?;
                self.cur.expect_char(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let (_, n) = self.cur.integer()?;
                Ok(self.constant(self.k.from_int(&n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let (at, name) = self.cur.identifier().expect("letter");
                if name == "z" {
                    if !self.allow_z {
                        return Err(Error::parse(at, "the variable z is not allowed here"));
                    }
                    return Ok(Frac {
                        num: Poly::x(self.k),
                        den: Poly::one(self.k),
                    });
                }
                match self.k.symbol(name) {
                    Some(x) => Ok(self.constant(x)),
                    None => Err(Error::parse(
                        at,
                        format!("unknown identifier '{name}' over {}", self.k.name()),
                    )),
                }
            }
            Some(_) => Err(Error::parse(at, "unexpected character")),
        }
    }
}
