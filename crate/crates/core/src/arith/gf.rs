use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::primes::{is_prime, prime_divisors};
use super::{Field, FiniteField};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Element of `GF(p^m)`, encoded as `sum c_i p^i` where `c_i` is the
/// coefficient of `a^i` and `a` is the class of `z` modulo the field modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GfElem(pub u64);

/// Fields larger than this use polynomial multiplication instead of log tables.
const TABLE_LIMIT: u64 = 1 << 16;
/// Largest supported field order.
const ORDER_LIMIT: u64 = 1 << 40;

struct Inner {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus, low-to-high, length `m + 1`.
    modulus: Vec<u64>,
    tables: Option<LogTables>,
}

struct LogTables {
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`.
    log: Vec<u32>,
}

/// The finite field `GF(p^m) = GF(p)[z] / (modulus)`.
#[derive(Clone)]
pub struct GaloisField {
    inner: Arc<Inner>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}, modulus {:?})", self.inner.p, self.inner.m, self.inner.modulus)
    }
}

/// Builds `GF(p^m)` with the lexicographically smallest monic irreducible
/// modulus of degree `m` (coefficients compared from the top down).
pub fn gf_construct(p: u64, m: u32) -> Result<GaloisField> {
    if !is_prime(p) {
        return Err(Error::argument(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::argument("extension degree must be at least 1"));
    }
    if p > u32::MAX as u64 {
        return Err(Error::argument(format!("characteristic {p} exceeds 32 bits")));
    }
    let q = checked_order(p, m)?;
    if m == 1 {
        return GaloisField::from_parts(p, 1, vec![0, 1]);
    }
    let base = GaloisField::prime(p)?;
    // Index i enumerates (c_{m-1}, ..., c_0) with c_{m-1} most significant,
    // which is exactly lexicographic order from the top coefficient down.
    let count = q;
    for idx in 0..count {
        let mut low = vec![0u64; m as usize];
        let mut rest = idx;
        for j in 0..m as usize {
            low[j] = rest % p;
            rest /= p;
        }
        if low[0] == 0 {
            continue;
        }
        let mut coeffs = low;
        coeffs.push(1);
        let f = Poly::from_coeffs(&base, coeffs.iter().map(|&c| GfElem(c)).collect());
        if crate::factor::is_irreducible_gf(&base, &f) {
            return GaloisField::from_parts(p, m, coeffs);
        }
    }
    Err(Error::invariant(format!("no irreducible polynomial of degree {m} over GF({p})")))
}

fn checked_order(p: u64, m: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q
            .checked_mul(p)
            .filter(|&q| q <= ORDER_LIMIT)
            .ok_or_else(|| Error::Resource(format!("field order {p}^{m} exceeds 2^40")))?;
    }
    Ok(q)
}

impl GaloisField {
    /// The prime field `GF(p)`.
    pub fn prime(p: u64) -> Result<Self> {
        gf_construct(p, 1)
    }

    /// `GF(p)[z] / (modulus)` for a caller-supplied monic irreducible modulus
    /// (low-to-high coefficients in `0..p`).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::argument(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::argument("modulus must be monic of degree >= 1 with reduced coefficients"));
        }
        let base = GaloisField::prime(p)?;
        let f = Poly::from_coeffs(&base, modulus.iter().map(|&c| GfElem(c)).collect());
        if !crate::factor::is_irreducible_gf(&base, &f) {
            return Err(Error::argument("modulus is not irreducible"));
        }
        let m = (modulus.len() - 1) as u32;
        GaloisField::from_parts(p, m, modulus)
    }

    fn from_parts(p: u64, m: u32, modulus: Vec<u64>) -> Result<Self> {
        let q = checked_order(p, m)?;
        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            tables: None,
        };
        if m > 1 && q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(GaloisField { inner: Arc::new(inner) })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// The modulus as a polynomial over the prime field.
    pub fn modulus_poly(&self) -> Result<Poly<GfElem>> {
        let base = GaloisField::prime(self.p())?;
        Ok(Poly::from_coeffs(
            &base,
            self.inner.modulus.iter().map(|&c| GfElem(c)).collect(),
        ))
    }

    /// Digits of an element (coefficients of `1, a, ..., a^{m-1}`).
    pub fn digits(&self, x: GfElem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.inner.m as usize);
        let mut rest = x.0;
        for _ in 0..self.inner.m {
            out.push(rest % self.inner.p);
            rest /= self.inner.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> GfElem {
        GfElem(encode(self.inner.p, digits))
    }

    /// Whether this is the subfield `GF(p)` itself.
    pub fn is_prime_field(&self) -> bool {
        self.inner.m == 1
    }
}

fn encode(p: u64, digits: &[u64]) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &d| acc * p + d)
}

fn slow_mul(inner: &Inner, a: u64, b: u64) -> u64 {
    let p = inner.p;
    let m = inner.m as usize;
    let da = split(p, m, a);
    let db = split(p, m, b);
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // Reduce modulo the monic modulus.
    for k in (m..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &mj) in inner.modulus[..m].iter().enumerate() {
            let idx = k - m + j;
            prod[idx] = (prod[idx] + (p - c) * mj) % p;
        }
    }
    encode(p, &prod[..m])
}

fn split(p: u64, m: usize, mut x: u64) -> Vec<u64> {
    let mut out = vec![0u64; m];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn build_tables(inner: &Inner) -> LogTables {
    let q = inner.q;
    let divisors = prime_divisors(q - 1);
    let slow_pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(inner, acc, b);
            }
            b = slow_mul(inner, b, b);
            e >>= 1;
        }
        acc
    };
    let generator = (2..q)
        .find(|&g| divisors.iter().all(|&r| slow_pow(g, (q - 1) / r) != 1))
        .unwrap_or(1);
    let n = (q - 1) as usize;
    let mut exp = vec![0u32; 2 * n];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for i in 0..n {
        exp[i] = x as u32;
        exp[i + n] = x as u32;
        log[x as usize] = i as u32;
        x = slow_mul(inner, x, generator);
    }
    LogTables { exp, log }
}

impl Field for GaloisField {
    type Elem = GfElem;

    fn zero(&self) -> GfElem {
        GfElem(0)
    }

    fn one(&self) -> GfElem {
        GfElem(1)
    }

    fn from_int(&self, n: &BigInt) -> GfElem {
        let r = n.mod_floor(&BigInt::from(self.inner.p));
        GfElem(r.to_u64().expect("residue fits"))
    }

    fn from_i64(&self, n: i64) -> GfElem {
        GfElem(n.rem_euclid(self.inner.p as i64) as u64)
    }

    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let p = self.inner.p;
        if self.inner.m == 1 {
            let s = a.0 + b.0;
            return GfElem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.inner.m {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        GfElem(out)
    }

    fn neg(&self, a: &GfElem) -> GfElem {
        let p = self.inner.p;
        if self.inner.m == 1 {
            return GfElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.inner.m {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        GfElem(out)
    }

    fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        if self.inner.m == 1 {
            let p = self.inner.p;
            return GfElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 });
        }
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        if a.0 == 0 || b.0 == 0 {
            return GfElem(0);
        }
        if self.inner.m == 1 {
            return GfElem(a.0 * b.0 % self.inner.p);
        }
        match &self.inner.tables {
            Some(t) => {
                let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                GfElem(t.exp[i] as u64)
            }
            None => GfElem(slow_mul(&self.inner, a.0, b.0)),
        }
    }

    fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if a.0 == 0 {
            return None;
        }
        if self.inner.m == 1 {
            return Some(GfElem(super::primes::pow_mod(a.0, self.inner.p - 2, self.inner.p)));
        }
        if let Some(t) = &self.inner.tables {
            let n = (self.inner.q - 1) as usize;
            let l = t.log[a.0 as usize] as usize;
            return Some(GfElem(t.exp[(n - l) % n] as u64));
        }
        Some(self.pow(a, self.inner.q - 2))
    }

    fn characteristic(&self) -> u64 {
        self.inner.p
    }

    fn format_elem(&self, a: &GfElem) -> String {
        if self.inner.m == 1 {
            return a.0.to_string();
        }
        let digits = self.digits(*a);
        let terms: Vec<String> = digits
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    fn name(&self) -> String {
        if self.inner.m == 1 {
            format!("GF({})", self.inner.p)
        } else {
            format!("GF({},{})", self.inner.p, self.inner.m)
        }
    }

    fn pth_root(&self, a: &GfElem) -> Option<GfElem> {
        Some(self.pow(a, self.inner.q / self.inner.p))
    }

    fn symbol(&self, name: &str) -> Option<GfElem> {
        (name == "a" && self.inner.m > 1).then(|| GfElem(self.inner.p))
    }
}

impl FiniteField for GaloisField {
    fn order(&self) -> u64 {
        self.inner.q
    }

    fn degree(&self) -> u32 {
        self.inner.m
    }

    fn element(&self, index: u64) -> GfElem {
        debug_assert!(index < self.inner.q);
        GfElem(index)
    }

    fn index_of(&self, a: &GfElem) -> u64 {
        a.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construct_small_fields() {
        let f2 = gf_construct(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        let f4 = gf_construct(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f5 = gf_construct(5, 1).unwrap();
        assert_eq!(f5.order(), 5);
        assert!(matches!(gf_construct(4, 1), Err(Error::Argument(_))));
        assert!(matches!(gf_construct(2, 0), Err(Error::Argument(_))));
    }

    /// The chosen modulus is the first irreducible in the top-down
    /// lexicographic enumeration, checked by brute-force root/factor search.
    #[test]
    fn modulus_is_lexicographically_smallest() {
        // Over GF(3), monic quadratics in order: z^2, z^2+1, ... ; z^2+1 has no roots mod 3.
        assert_eq!(gf_construct(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // Over GF(2), z^3+z+1 precedes z^3+z^2+1.
        assert_eq!(gf_construct(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        // GF(7^2): z^2+1 is irreducible since -1 is a non-residue mod 7.
        assert_eq!(gf_construct(7, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    fn all_small_fields() -> Vec<GaloisField> {
        let mut out = Vec::new();
        for p in [2u64, 3, 5, 7] {
            let mut m = 1;
            while p.pow(m) <= 49 {
                out.push(gf_construct(p, m).unwrap());
                m += 1;
            }
        }
        out
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for k in all_small_fields() {
            let q = k.order();
            for x in k.elements() {
                if x.0 != 0 {
                    let y = k.inv(&x).unwrap();
                    assert_eq!(k.mul(&x, &y), k.one(), "{k:?} inverse of {x:?}");
                }
                assert_eq!(k.add(&x, &k.neg(&x)), k.zero());
            }
            // Frobenius is a bijection.
            let mut images: Vec<u64> = k.elements().map(|x| k.pow(&x, k.p()).0).collect();
            images.sort_unstable();
            images.dedup();
            assert_eq!(images.len() as u64, q);
            // Table multiplication agrees with schoolbook reduction.
            if k.m() > 1 {
                for a in k.elements() {
                    for b in k.elements() {
                        assert_eq!(k.mul(&a, &b).0, slow_mul(&k.inner, a.0, b.0));
                    }
                }
            }
        }
    }

    #[test]
    fn distributivity_gf49() {
        let k = gf_construct(7, 2).unwrap();
        for a in k.elements().step_by(5) {
            for b in k.elements().step_by(3) {
                for c in k.elements().step_by(7) {
                    assert_eq!(
                        k.mul(&a, &k.add(&b, &c)),
                        k.add(&k.mul(&a, &b), &k.mul(&a, &c))
                    );
                }
            }
        }
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        let k = gf_construct(3, 3).unwrap();
        for x in k.elements() {
            let r = k.pth_root(&x).unwrap();
            assert_eq!(k.pow(&r, 3), x);
        }
    }

    #[test]
    fn custom_modulus_rejects_reducible() {
        assert!(GaloisField::with_modulus(5, vec![1, 0, 1]).is_err()); // z^2+1 = (z-2)(z-3) mod 5
        assert!(GaloisField::with_modulus(5, vec![2, 0, 1]).is_ok());
    }
}
