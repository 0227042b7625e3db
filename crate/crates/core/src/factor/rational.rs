//! Zassenhaus factorization over `Q`: factor modulo a small prime, lift the
//! factorization quadratically, and recombine lifted factors by trial
//! division over `Z`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gfq::factor_gfq;
use super::FactorReport;
use crate::arith::primes::primes_from;
use crate::arith::{Field, GaloisField, GfElem, Rat, Rationals};
use crate::error::{Error, Result};
use crate::poly::{content_primitive, zpoly, Poly};

/// Good primes consulted for the degree-pattern filter.
const PATTERN_PRIMES: usize = 5;
/// Primes tried for a cheap squarefreeness certificate.
const SQUAREFREE_PRIMES: usize = 8;
/// Give up looking for good primes past this bound.
const PRIME_SEARCH_LIMIT: u64 = 100_000;

/// Complete factorization over `Q` into monic irreducibles.
pub fn factor_q(f: &Poly<Rat>) -> Result<FactorReport<Rat>> {
    let q = Rationals;
    let unit = f
        .leading()
        .cloned()
        .ok_or_else(|| Error::argument("cannot factor the zero polynomial"))?;
    if f.is_constant() {
        return Ok(FactorReport::from_parts(unit, Vec::new()));
    }
    let (_, prim) = content_primitive(f)?;
    let mut factors = Vec::new();
    for (g, m) in squarefree_z(prim.coeffs()) {
        for h in factor_z_squarefree(&g)? {
            let hq = Poly::from_coeffs(&q, h.into_iter().map(Rat::from_integer).collect());
            factors.push((hq.monic(&q), m));
        }
    }
    Ok(FactorReport::from_parts(unit, factors))
}

/// Squarefree decomposition of a primitive integer polynomial with positive
/// leading coefficient into primitive parts. Euclid over `Q` blows up on
/// iterates, so a squarefree image mod a small prime is tried first and Yun's
/// algorithm runs over `Z` with a primitive remainder sequence otherwise.
fn squarefree_z(f: &[BigInt]) -> Vec<(Vec<BigInt>, u32)> {
    let mut out = Vec::new();
    let zeros = f.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.push((vec![BigInt::zero(), BigInt::one()], zeros as u32));
    }
    let f = &f[zeros..];
    if f.len() < 2 {
        return out;
    }
    let lc = &f[f.len() - 1];
    let squarefree_mod_p = primes_from(3)
        .filter(|&p| !(lc % p).is_zero())
        .take(SQUAREFREE_PRIMES)
        .any(|p| {
            let k = GaloisField::prime(p).expect("prime");
            let fp = reduce(&k, f);
            fp.gcd(&fp.derivative(&k), &k).is_constant()
        });
    if squarefree_mod_p {
        out.push((f.to_vec(), 1));
        return out;
    }
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut c = gcd_z(f, &df);
    let mut w = zpoly::div_exact(f, &c).expect("gcd divides");
    let mut i = 1;
    while w.len() > 1 {
        let y = gcd_z(&w, &c);
        let fac = zpoly::div_exact(&w, &y).expect("gcd divides");
        if fac.len() > 1 {
            out.push((fac, i));
        }
        c = zpoly::div_exact(&c, &y).expect("gcd divides");
        w = y;
        i += 1;
    }
    out
}

fn primitive_part(a: Vec<BigInt>) -> Vec<BigInt> {
    let g = zpoly::content(&a);
    let g = if a.last().is_some_and(|x| x.is_negative()) { -g } else { g };
    a.into_iter().map(|x| x / &g).collect()
}

/// Primitive gcd of nonzero integer polynomials, positive leading coefficient.
fn gcd_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (mut a, mut b) = (primitive_part(a.to_vec()), primitive_part(b.to_vec()));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = zpoly::prem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive_part(r) };
    }
    a
}

/// Irreducible factors of a squarefree primitive integer polynomial with
/// positive leading coefficient, each primitive with positive leading
/// coefficient.
pub fn factor_z_squarefree(f: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![f.to_vec()]);
    }
    // pull out powers of z first, cheap and common for iterates
    if f[0].is_zero() {
        let mut rest = factor_z_squarefree(&f[1..])?;
        rest.push(vec![BigInt::zero(), BigInt::one()]);
        return Ok(rest);
    }

    let images = good_images(f)?;
    let allowed = common_degree_sums(&images, n);
    if allowed.is_empty() {
        return Ok(vec![f.to_vec()]);
    }
    let (p, k, modfactors) = images
        .into_iter()
        .min_by_key(|(_, _, fs)| fs.len())
        .expect("at least one good prime");
    if modfactors.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }

    let lc = f[n].clone();
    let norm_sq: BigInt = f.iter().map(|a| a * a).sum();
    // |coefficients of lc * (monic factor)| <= lc * 2^n * ||f||_2; lift past twice that
    let bound_sq = BigInt::from(4) * (BigInt::one() << (2 * n)) * &lc * &lc * norm_sq;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while &modulus * &modulus <= bound_sq {
        modulus = &modulus * &modulus;
    }
    let monic_mod: Vec<Vec<BigInt>> = modfactors
        .iter()
        .map(|g| g.coeffs().iter().map(|c| BigInt::from(c.0)).collect())
        .collect();
    let lifted = hensel_lift(f, &k, &monic_mod, &pb, &modulus);
    Ok(recombine(f.to_vec(), lifted, &modulus, &allowed))
}

type Image = (u64, GaloisField, Vec<Poly<GfElem>>);

/// Factorizations modulo the first few primes `p >= 3` with `p` not
/// dividing the leading coefficient and a squarefree image.
fn good_images(f: &[BigInt]) -> Result<Vec<Image>> {
    let n = f.len() - 1;
    let mut out = Vec::new();
    for p in primes_from(3) {
        if p > PRIME_SEARCH_LIMIT {
            break;
        }
        if (&f[n] % p).is_zero() {
            continue;
        }
        let k = GaloisField::prime(p)?;
        let fp = reduce(&k, f);
        if !fp.gcd(&fp.derivative(&k), &k).is_constant() {
            continue;
        }
        let rep = factor_gfq(&k, &fp, p)?;
        let fs = rep.factors.into_iter().map(|(g, _)| g).collect();
        out.push((p, k, fs));
        if out.len() == PATTERN_PRIMES {
            break;
        }
    }
    if out.is_empty() {
        return Err(Error::Resource("no good prime below the search limit".into()));
    }
    Ok(out)
}

fn reduce(k: &GaloisField, f: &[BigInt]) -> Poly<GfElem> {
    Poly::from_coeffs(k, f.iter().map(|c| k.from_int(c)).collect())
}

/// Proper factor degrees compatible with every modular factorization.
fn common_degree_sums(images: &[Image], n: usize) -> BTreeSet<usize> {
    let mut common: Option<BTreeSet<usize>> = None;
    for (_, _, fs) in images {
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for g in fs {
            let d = g.degree().unwrap();
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        let set: BTreeSet<usize> = (1..n).filter(|&s| sums[s]).collect();
        common = Some(match common {
            None => set,
            Some(c) => c.intersection(&set).copied().collect(),
        });
    }
    common.unwrap_or_default()
}

fn modp(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

fn pmod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    zpoly::trim(a.iter().map(|x| modp(x, m)).collect())
}

fn padd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    pmod(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
            .collect::<Vec<_>>(),
        m,
    )
}

fn psub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    pmod(
        &(0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect::<Vec<_>>(),
        m,
    )
}

fn pmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    pmod(&zpoly::mul(a, b), m)
}

/// Division by a monic polynomial modulo `m`.
fn pdivrem(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let t = modp(&r[i + db], m);
        if !t.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = modp(&(&r[i + j] - &t * bj), m);
            }
        }
        q[i] = t;
    }
    r.truncate(db);
    (zpoly::trim(q), pmod(&r, m))
}

fn to_z(g: &Poly<GfElem>) -> Vec<BigInt> {
    g.coeffs().iter().map(|c| BigInt::from(c.0)).collect()
}

/// Lifts `f = lc * prod g_i (mod p)` with monic `g_i` to monic factors
/// modulo `target`, splitting the factor list in halves recursively.
fn hensel_lift(
    f: &[BigInt],
    k: &GaloisField,
    factors: &[Vec<BigInt>],
    p: &BigInt,
    target: &BigInt,
) -> Vec<Vec<BigInt>> {
    let lc = f.last().unwrap();
    let lc_inv = lc.modinv(target).expect("p does not divide lc");
    let monic_f = pmod(&f.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), target);
    lift_tree(&monic_f, k, factors, p, target)
}

fn lift_tree(
    f: &[BigInt],
    k: &GaloisField,
    factors: &[Vec<BigInt>],
    p: &BigInt,
    target: &BigInt,
) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        return vec![f.to_vec()];
    }
    let mid = factors.len() / 2;
    let prod = |fs: &[Vec<BigInt>]| {
        fs.iter()
            .fold(vec![BigInt::one()], |acc, g| pmul(&acc, g, p))
    };
    let g0 = prod(&factors[..mid]);
    let h0 = prod(&factors[mid..]);
    let (g, h) = lift_pair(f, &g0, &h0, k, p, target);
    let mut out = lift_tree(&g, k, &factors[..mid], p, target);
    out.extend(lift_tree(&h, k, &factors[mid..], p, target));
    out
}

/// Quadratic Hensel lifting of `f = g h (mod p)` for monic `f, g, h` with
/// coprime images, up to modulus `target` (a power of `p`).
fn lift_pair(
    f: &[BigInt],
    g0: &[BigInt],
    h0: &[BigInt],
    k: &GaloisField,
    p: &BigInt,
    target: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let gp = Poly::from_coeffs(k, g0.iter().map(|c| k.from_int(c)).collect());
    let hp = Poly::from_coeffs(k, h0.iter().map(|c| k.from_int(c)).collect());
    let (one, s0, t0) = gp.ext_gcd(&hp, k);
    debug_assert!(one.degree() == Some(0));
    let (mut g, mut h) = (g0.to_vec(), h0.to_vec());
    let (mut s, mut t) = (to_z(&s0), to_z(&t0));
    let mut m = p.clone();
    while &m < target {
        m = &m * &m;
        if &m > target {
            m = target.clone();
        }
        let fm = pmod(f, &m);
        let e = psub(&fm, &pmul(&g, &h, &m), &m);
        // g* = g + t e + q g, h* = h + r where s e = q h + r; h stays monic
        let (qq, r) = pdivrem(&pmul(&s, &e, &m), &h, &m);
        let g_new = padd(&padd(&g, &pmul(&t, &e, &m), &m), &pmul(&qq, &g, &m), &m);
        let h_new = padd(&h, &r, &m);
        let b = psub(
            &padd(&pmul(&s, &g_new, &m), &pmul(&t, &h_new, &m), &m),
            &[BigInt::one()],
            &m,
        );
        let (c, d) = pdivrem(&pmul(&s, &b, &m), &h_new, &m);
        s = psub(&s, &d, &m);
        t = psub(&psub(&t, &pmul(&t, &b, &m), &m), &pmul(&c, &g_new, &m), &m);
        g = g_new;
        h = h_new;
    }
    // g absorbed the unit lc(f) = 1, so both are monic modulo the target
    (g, h)
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1;
    zpoly::trim(
        a.iter()
            .map(|x| {
                let r = modp(x, m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn primitive(a: Vec<BigInt>) -> Vec<BigInt> {
    let mut c = zpoly::content(&a);
    if a.last().is_some_and(|x| x.is_negative()) {
        c = -c;
    }
    a.into_iter().map(|x| x / &c).collect()
}

/// Trial recombination of lifted factors: subsets by increasing size,
/// lexicographic within a size.
fn recombine(
    mut f: Vec<BigInt>,
    mut lifted: Vec<Vec<BigInt>>,
    m: &BigInt,
    allowed: &BTreeSet<usize>,
) -> Vec<Vec<BigInt>> {
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let deg: usize = idx.iter().map(|&i| lifted[i].len() - 1).sum();
            if allowed.contains(&deg) {
                let lc = f.last().unwrap().clone();
                // the constant term of a true factor divides lc * f(0); test it
                // before forming the full product
                let const_ok = f[0].is_zero() || {
                    let c0 = idx
                        .iter()
                        .fold(lc.clone(), |acc, &i| modp(&(acc * &lifted[i][0]), m));
                    let c0 = if c0 > (m >> 1) { c0 - m } else { c0 };
                    !c0.is_zero() && (&lc * &f[0]).is_multiple_of(&c0)
                };
                if const_ok {
                    let mut cand = vec![lc.clone()];
                    for &i in &idx {
                        cand = pmul(&cand, &lifted[i], m);
                    }
                    let cand = symmetric(&cand, m);
                    let g = primitive(cand);
                    if let Some(quot) = zpoly::div_exact(&f, &g) {
                        found.push(g);
                        f = quot;
                        let mut keep = Vec::new();
                        for (i, u) in lifted.into_iter().enumerate() {
                            if !idx.contains(&i) {
                                keep.push(u);
                            }
                        }
                        lifted = keep;
                        continue 'outer;
                    }
                }
            }
            if !next_combination(&mut idx, r) {
                break;
            }
        }
        size += 1;
    }
    if f.len() > 1 {
        found.push(primitive(f));
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())));
    found
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[allow(dead_code)]
fn bits(x: &BigInt) -> u64 {
    x.bits().to_u64().unwrap_or(0)
}
