//! Berlekamp-free factoring over finite fields: squarefree layers, then
//! distinct-degree, then randomized equal-degree splitting.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::squarefree::squarefree_decompose;
use super::FactorReport;
use crate::arith::primes::prime_divisors;
use crate::arith::FiniteField;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Rabin's test: `f | z^(q^n) - z` and `gcd(f, z^(q^(n/l)) - z) = 1` for
/// every prime `l | n`.
pub fn is_irreducible_gf<K: FiniteField>(k: &K, f: &Poly<K::Elem>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = f.monic(k);
    let q = k.order();
    let x = Poly::x(k);
    let maximal: Vec<usize> = prime_divisors(n as u64).into_iter().map(|l| n / l as usize).collect();
    let mut h = x.clone();
    for i in 1..=n {
        h = h.powmod(q, &f, k);
        if maximal.contains(&i) && !h.sub(&x, k).gcd(&f, k).is_constant() {
            return false;
        }
    }
    h == x.rem(&f, k).unwrap()
}

/// Splits a monic squarefree `f` into `(g_i, i)` where `g_i` is the product
/// of all irreducible factors of degree `i`.
pub fn distinct_degree<K: FiniteField>(k: &K, f: &Poly<K::Elem>) -> Vec<(Poly<K::Elem>, usize)> {
    let q = k.order();
    let x = Poly::x(k);
    let mut f = f.monic(k);
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 1;
    while f.degree().unwrap_or(0) >= 2 * i {
        h = h.powmod(q, &f, k);
        let g = h.sub(&x, k).gcd(&f, k);
        if !g.is_constant() {
            f = f.div_exact(&g, k);
            h = h.rem(&f, k).unwrap();
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = f.degree().filter(|&d| d > 0) {
        out.push((f, d));
    }
    out
}

/// Splits a monic squarefree `f` whose irreducible factors all have degree
/// `r` (Cantor-Zassenhaus; trace map in characteristic 2).
pub fn equal_degree<K: FiniteField>(
    k: &K,
    f: &Poly<K::Elem>,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<K::Elem>> {
    let n = f.degree().expect("nonzero");
    if n == r {
        return vec![f.clone()];
    }
    let q = k.order();
    loop {
        let coeffs = (0..n).map(|_| k.random(rng)).collect();
        let a = Poly::from_coeffs(k, coeffs);
        if a.is_constant() {
            continue;
        }
        let b = if k.characteristic() == 2 {
            // absolute trace a + a^2 + ... + a^(2^(m r - 1))
            let steps = k.degree() as usize * r;
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..steps {
                t = t.mul(&t, k).rem(f, k).unwrap();
                acc = acc.add(&t, k);
            }
            acc
        } else {
            // norm a^(1 + q + ... + q^(r-1)), then the quadratic character
            let mut t = a.clone();
            let mut norm = a.clone();
            for _ in 1..r {
                t = t.powmod(q, f, k);
                norm = norm.mul(&t, k).rem(f, k).unwrap();
            }
            norm.powmod((q - 1) / 2, f, k).sub(&Poly::one(k), k)
        };
        let g = b.gcd(f, k);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.div_exact(&g, k);
            let mut out = equal_degree(k, &g, r, rng);
            out.extend(equal_degree(k, &h, r, rng));
            return out;
        }
    }
}

/// Complete factorization over `GF(q)`; the random splitting is driven only
/// by `seed`, and the sorted output does not depend on it.
pub fn factor_gfq<K: FiniteField>(k: &K, f: &Poly<K::Elem>, seed: u64) -> Result<FactorReport<K::Elem>> {
    let unit = f
        .leading()
        .cloned()
        .ok_or_else(|| Error::argument("cannot factor the zero polynomial"))?;
    if f.is_constant() {
        return Ok(FactorReport::from_parts(unit, Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (g, m) in squarefree_decompose(k, f)? {
        for (h, r) in distinct_degree(k, &g) {
            for irr in equal_degree(k, &h, r, &mut rng) {
                factors.push((irr, m));
            }
        }
    }
    Ok(FactorReport::from_parts(unit, factors))
}
