//! Dense univariate polynomials.
//!
//! `Poly<E>` only stores coefficients (index = degree, no trailing zeros).
//! All arithmetic takes the coefficient field as its last argument.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Field, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    c: Vec<E>,
}

impl<E> Default for Poly<E> {
    fn default() -> Self {
        Poly { c: Vec::new() }
    }
}

/// Factors sort by degree first, then coefficients from the top down.
impl<E: Ord> Ord for Poly<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl<E: Ord> PartialOrd for Poly<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E: Clone> Poly<E> {
    /// Builds from low-to-high coefficients, trimming zeros at the top.
    pub fn from_coeffs<F: Field<Elem = E>>(k: &F, mut c: Vec<E>) -> Self {
        while c.last().is_some_and(|x| k.is_zero(x)) {
            c.pop();
        }
        Poly { c }
    }

    /// Wraps coefficients the caller has already trimmed.
    pub fn from_trimmed(c: Vec<E>) -> Self {
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one<F: Field<Elem = E>>(k: &F) -> Self {
        Poly { c: vec![k.one()] }
    }

    pub fn x<F: Field<Elem = E>>(k: &F) -> Self {
        Poly {
            c: vec![k.zero(), k.one()],
        }
    }

    pub fn constant<F: Field<Elem = E>>(k: &F, a: E) -> Self {
        Self::from_coeffs(k, vec![a])
    }

    /// `a * z^n`.
    pub fn monomial<F: Field<Elem = E>>(k: &F, a: E, n: usize) -> Self {
        if k.is_zero(&a) {
            return Self::zero();
        }
        let mut c = vec![k.zero(); n + 1];
        c[n] = a;
        Poly { c }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.c
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Zero or a nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn leading(&self) -> Option<&E> {
        self.c.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, i: usize, k: &F) -> E {
        self.c.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn add<F: Field<Elem = E>>(&self, b: &Self, k: &F) -> Self {
        let n = self.c.len().max(b.c.len());
        let out = (0..n)
            .map(|i| match (self.c.get(i), b.c.get(i)) {
                (Some(x), Some(y)) => k.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(k, out)
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        Poly {
            c: self.c.iter().map(|x| k.neg(x)).collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, b: &Self, k: &F) -> Self {
        self.add(&b.neg(k), k)
    }

    pub fn mul<F: Field<Elem = E>>(&self, b: &Self, k: &F) -> Self {
        if self.is_zero() || b.is_zero() {
            return Self::zero();
        }
        let mut out = vec![k.zero(); self.c.len() + b.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(x, y));
            }
        }
        Self::from_coeffs(k, out)
    }

    pub fn scale<F: Field<Elem = E>>(&self, a: &E, k: &F) -> Self {
        if k.is_zero(a) {
            return Self::zero();
        }
        Poly {
            c: self.c.iter().map(|x| k.mul(x, a)).collect(),
        }
    }

    /// Multiplication by `z^n`.
    pub fn shift<F: Field<Elem = E>>(&self, n: usize, k: &F) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![k.zero(); n];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Quotient and remainder with `deg r < deg b`.
    pub fn divrem<F: Field<Elem = E>>(&self, b: &Self, k: &F) -> Result<(Self, Self)> {
        let db = b
            .degree()
            .ok_or_else(|| Error::argument("division by the zero polynomial"))?;
        let Some(da) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if da < db {
            return Ok((Self::zero(), self.clone()));
        }
        let inv = k.inv(b.leading().unwrap()).expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        let mut q = vec![k.zero(); da - db + 1];
        for i in (0..=da - db).rev() {
            let top = &r[i + db];
            if k.is_zero(top) {
                continue;
            }
            let t = k.mul(top, &inv);
            for (j, bj) in b.c.iter().enumerate() {
                r[i + j] = k.sub(&r[i + j], &k.mul(&t, bj));
            }
            q[i] = t;
        }
        r.truncate(db);
        Ok((Self::from_coeffs(k, q), Self::from_coeffs(k, r)))
    }

    pub fn rem<F: Field<Elem = E>>(&self, b: &Self, k: &F) -> Result<Self> {
        Ok(self.divrem(b, k)?.1)
    }

    /// Quotient of a division known to be exact. Panics on a zero divisor.
    pub fn div_exact<F: Field<Elem = E>>(&self, b: &Self, k: &F) -> Self {
        let (q, r) = self.divrem(b, k).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Makes the polynomial monic; zero stays zero.
    pub fn monic<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) if k.is_one(lc) => self.clone(),
            Some(lc) => self.scale(&k.inv(lc).unwrap(), k),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd<F: Field<Elem = E>>(&self, b: &Self, k: &F) -> Self {
        let mut a = self.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b, k).unwrap();
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// `(g, s, t)` with `g = s*self + t*b` and `g` monic.
    pub fn ext_gcd<F: Field<Elem = E>>(&self, b: &Self, k: &F) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(k), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, k).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, k), k);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1, k), k);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = k.inv(&lc).unwrap();
                (r0.scale(&inv, k), s0.scale(&inv, k), t0.scale(&inv, k))
            }
        }
    }

    pub fn derivative<F: Field<Elem = E>>(&self, k: &F) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| k.mul(&k.from_i64(i as i64), x))
            .collect();
        Self::from_coeffs(k, c)
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, k: &F) -> E {
        self.c
            .iter()
            .rev()
            .fold(k.zero(), |acc, a| k.add(&k.mul(&acc, x), a))
    }

    /// `self(u(z))`.
    pub fn compose<F: Field<Elem = E>>(&self, u: &Self, k: &F) -> Self {
        self.c.iter().rev().fold(Self::zero(), |acc, a| {
            acc.mul(u, k).add(&Self::constant(k, a.clone()), k)
        })
    }

    /// `w^D * h(u/w)` for `D >= deg h`, with `h = self`.
    pub fn homogeneous_compose<F: Field<Elem = E>>(
        &self,
        u: &Self,
        w: &Self,
        big_d: usize,
        k: &F,
    ) -> Self {
        let Some(n) = self.degree() else {
            return Self::zero();
        };
        assert!(big_d >= n, "homogenization degree below polynomial degree");
        let mut wpow = vec![Self::one(k)];
        for i in 1..=n {
            let next = wpow[i - 1].mul(w, k);
            wpow.push(next);
        }
        // Horner in (u, w): acc_i = acc_{i+1} * u + h_i * w^{n-i}
        let mut acc = Self::constant(k, self.c[n].clone());
        for i in (0..n).rev() {
            acc = acc.mul(u, k);
            if !k.is_zero(&self.c[i]) {
                acc = acc.add(&wpow[n - i].scale(&self.c[i], k), k);
            }
        }
        let extra = big_d - n;
        if extra > 0 {
            acc = acc.mul(&w.pow(extra as u64, k), k);
        }
        acc
    }

    pub fn pow<F: Field<Elem = E>>(&self, mut e: u64, k: &F) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(k);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, k);
            }
        }
        acc
    }

    /// `self^e mod m`.
    pub fn powmod<F: Field<Elem = E>>(&self, e: u64, m: &Self, k: &F) -> Self {
        let mut base = self.rem(m, k).expect("nonzero modulus");
        let mut acc = Self::one(k).rem(m, k).unwrap();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k).rem(m, k).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, k).rem(m, k).unwrap();
            }
        }
        acc
    }

    /// `z^deg f * f(1/z)`.
    pub fn reciprocal<F: Field<Elem = E>>(&self, k: &F) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        Self::from_coeffs(k, c)
    }

    /// `(-1)^(d(d-1)/2) Res(f, f') / lc(f)`, with `f'` read as a degree
    /// `d - 1` form even when its top coefficient vanishes.
    pub fn discriminant<F: Field<Elem = E>>(&self, k: &F) -> Result<E> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::argument("discriminant needs degree at least 1")),
        };
        let lc = self.leading().unwrap();
        let df = self.derivative(k);
        let Some(dd) = df.degree() else {
            return Ok(k.zero());
        };
        let res = k.resultant(self, &df);
        let corrected = k.mul(&res, &k.pow(lc, (d - 1 - dd) as u64));
        let mut disc = k.div(&corrected, lc).unwrap();
        if (d * (d - 1) / 2) % 2 == 1 {
            disc = k.neg(&disc);
        }
        Ok(disc)
    }

    /// Text form in variable `var`, e.g. `3*z^2 - z + 1/2`. Accepted back by
    /// the expression parser.
    pub fn format<F: Field<Elem = E>>(&self, k: &F, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.c.iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            let s = k.format_elem(c);
            let (negative, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            let compound = body.contains([' ', '/', '+']);
            let term = if i == 0 {
                if body.contains(' ') {
                    format!("({body})")
                } else {
                    body
                }
            } else {
                let mono = if i == 1 {
                    var.to_string()
                } else {
                    format!("{var}^{i}")
                };
                if body == "1" {
                    mono
                } else if compound {
                    format!("({body})*{mono}")
                } else {
                    format!("{body}*{mono}")
                }
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

/// Resultant over any field by the Euclidean recurrence
/// `Res(a, b) = lc(a)^(n-k) Res(a, b mod a)` and `Res(a, b) = (-1)^(mn) Res(b, a)`.
pub fn resultant_euclid<F: Field>(k: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> F::Elem {
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = k.one();
    loop {
        let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
            return k.zero();
        };
        if m == 0 {
            return k.mul(&acc, &k.pow(a.leading().unwrap(), n as u64));
        }
        if n == 0 {
            return k.mul(&acc, &k.pow(b.leading().unwrap(), m as u64));
        }
        if n < m {
            if (m * n) % 2 == 1 {
                acc = k.neg(&acc);
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let r = b.rem(&a, k).unwrap();
        let Some(deg_r) = r.degree() else {
            return k.zero();
        };
        acc = k.mul(&acc, &k.pow(a.leading().unwrap(), (n - deg_r) as u64));
        b = r;
    }
}

/// Splits a nonzero rational polynomial as `content * primitive`, where the
/// primitive part has coprime integer coefficients and positive leading
/// coefficient.
pub fn content_primitive(f: &Poly<Rat>) -> Result<(Rat, Poly<BigInt>)> {
    let lc = f
        .leading()
        .ok_or_else(|| Error::argument("content of the zero polynomial"))?;
    let mut lcm = BigInt::one();
    for c in f.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if lc.is_negative() {
        g = -g;
    }
    let prim = ints.into_iter().map(|x| x / &g).collect();
    Ok((Rat::new(g, lcm), Poly::from_trimmed(prim)))
}

/// Integer polynomial helpers over `Z`, trimming zeros at the top.
pub(crate) mod zpoly {
    use super::*;

    pub fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        c
    }

    pub fn content(c: &[BigInt]) -> BigInt {
        c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) a = q b + r`.
    pub fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let db = b.len() - 1;
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return r;
        }
        let lb = &b[db];
        let mut e = r.len() - b.len() + 1;
        while r.len() >= b.len() {
            let dr = r.len() - 1;
            let top = r[dr].clone();
            for x in r.iter_mut() {
                *x *= lb;
            }
            for (j, bj) in b.iter().enumerate() {
                r[dr - db + j] -= &top * bj;
            }
            r = trim(r);
            e -= 1;
        }
        let scale = num_traits::pow(lb.clone(), e);
        r.into_iter().map(|x| x * &scale).collect()
    }

    /// Exact division by a nonzero integer polynomial; `None` if inexact.
    pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
        if a.is_empty() {
            return Some(Vec::new());
        }
        if a.len() < b.len() {
            return None;
        }
        let db = b.len() - 1;
        let lb = &b[db];
        let mut r = a.to_vec();
        let mut q = vec![BigInt::zero(); a.len() - db];
        for i in (0..q.len()).rev() {
            let (qi, rem) = r[i + db].div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            if !qi.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    r[i + j] -= &qi * bj;
                }
            }
            q[i] = qi;
        }
        if r.iter().all(|x| x.is_zero()) {
            Some(q)
        } else {
            None
        }
    }
}

/// Resultant of integer polynomials via the subresultant remainder sequence.
pub fn resultant_z(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (a, b) = (zpoly::trim(a.to_vec()), zpoly::trim(b.to_vec()));
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let ca = zpoly::content(&a);
    let cb = zpoly::content(&b);
    let (m, n) = (a.len() - 1, b.len() - 1);
    let t = num_traits::pow(ca.clone(), n) * num_traits::pow(cb.clone(), m);
    let mut a: Vec<BigInt> = a.into_iter().map(|x| x / &ca).collect();
    let mut b: Vec<BigInt> = b.into_iter().map(|x| x / &cb).collect();
    let mut s = BigInt::one();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if m % 2 == 1 && n % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        if db == 0 {
            // h <- lc(B)^deg A / h^(deg A - 1)
            let hb = if da == 0 {
                BigInt::one()
            } else {
                num_traits::pow(b[0].clone(), da) * &h / num_traits::pow(h.clone(), da)
            };
            return s * t * hb;
        }
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = zpoly::prem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        a = b;
        b = r.into_iter().map(|x| x / &divisor).collect();
        g = a.last().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        if delta > 0 {
            h = num_traits::pow(g.clone(), delta) * &h / num_traits::pow(h.clone(), delta);
        }
    }
}

/// Resultant over `Q`, scaled from the integer subresultant computation.
pub fn resultant_rational(a: &Poly<Rat>, b: &Poly<Rat>) -> Rat {
    if a.is_zero() || b.is_zero() {
        return Rat::zero();
    }
    let (ca, pa) = content_primitive(a).unwrap();
    let (cb, pb) = content_primitive(b).unwrap();
    let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
    let r = resultant_z(pa.coeffs(), pb.coeffs());
    Rat::from_integer(r) * num_traits::pow(ca, n) * num_traits::pow(cb, m)
}
