//! Rational maps `phi = f/g` on the projective line: iteration, preimage
//! polynomials, orbits, reduction modulo a valuation and Mobius conjugation.

use std::collections::HashMap;

use crate::arith::{ExtInt, Field, FiniteField, ProjPoint, Valuation};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Default cap on `deg phi^n`.
pub const DEFAULT_DEGREE_CAP: usize = 1024;
/// Default orbit length explored before giving up.
pub const DEFAULT_ORBIT_CAP: usize = 64;
/// Orbit points larger than this many bits end the search early.
const ORBIT_SIZE_LIMIT: u64 = 1 << 12;

/// `phi = f/g` with coprime `f, g` in canonical scaling and degree
/// `d = max(deg f, deg g) >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap<F: Field> {
    field: F,
    f: Poly<F::Elem>,
    g: Poly<F::Elem>,
    d: usize,
}

impl<F: Field> RationalMap<F> {
    /// Divides out `gcd(f, g)` and applies canonical scaling.
    pub fn new(field: &F, f: Poly<F::Elem>, g: Poly<F::Elem>) -> Result<Self> {
        if f.is_zero() && g.is_zero() {
            return Err(Error::argument("numerator and denominator are both zero"));
        }
        if g.is_zero() {
            return Err(Error::argument("denominator is zero"));
        }
        let h = f.gcd(&g, field);
        let (f, g) = if h.degree() == Some(0) {
            (f, g)
        } else {
            (f.div_exact(&h, field), g.div_exact(&h, field))
        };
        let d = f.degree().unwrap_or(0).max(g.degree().unwrap_or(0));
        if d == 0 {
            return Err(Error::argument("constant map"));
        }
        Ok(Self::scaled(field, f, g, d))
    }

    /// The polynomial map `f`.
    pub fn polynomial(field: &F, f: Poly<F::Elem>) -> Result<Self> {
        Self::new(field, f, Poly::one(field))
    }

    fn scaled(field: &F, f: Poly<F::Elem>, g: Poly<F::Elem>, d: usize) -> Self {
        let c = field.canonical_scalar(&[&f, &g]);
        let (f, g) = if field.is_one(&c) {
            (f, g)
        } else {
            (f.scale(&c, field), g.scale(&c, field))
        };
        RationalMap {
            field: field.clone(),
            f,
            g,
            d,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn numerator(&self) -> &Poly<F::Elem> {
        &self.f
    }

    pub fn denominator(&self) -> &Poly<F::Elem> {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn is_polynomial(&self) -> bool {
        self.g.degree() == Some(0)
    }

    /// `self o other`, without a gcd step: composition keeps pairs coprime.
    pub fn compose(&self, other: &Self) -> Self {
        let k = &self.field;
        let f = self.f.homogeneous_compose(&other.f, &other.g, self.d, k);
        let g = self.g.homogeneous_compose(&other.f, &other.g, self.d, k);
        Self::scaled(k, f, g, self.d * other.d)
    }

    /// `phi^n` with `deg phi^n` at most `cap`.
    pub fn iterate(&self, n: usize, cap: usize) -> Result<Self> {
        Ok(self.iterates(n, cap)?.pop().expect("n >= 1"))
    }

    /// `[phi, phi^2, ..., phi^n]`.
    pub fn iterates(&self, n: usize, cap: usize) -> Result<Vec<Self>> {
        if n == 0 {
            return Err(Error::argument("iterate count must be at least 1"));
        }
        check_degree(self.d, n, cap)?;
        let mut out = vec![self.clone()];
        for _ in 1..n {
            let next = self.compose(out.last().unwrap());
            out.push(next);
        }
        Ok(out)
    }

    /// `f - alpha g` (or `g` at infinity) in canonical scaling.
    pub fn preimage_numerator(&self, alpha: &ProjPoint<F::Elem>) -> Result<Poly<F::Elem>> {
        let k = &self.field;
        let p = match alpha {
            ProjPoint::Infinity => self.g.clone(),
            ProjPoint::Finite(a) => self.f.sub(&self.g.scale(a, k), k),
        };
        if p.is_zero() {
            return Err(Error::invariant("preimage polynomial vanished for a coprime pair"));
        }
        let c = k.canonical_scalar(&[&p]);
        Ok(p.scale(&c, k))
    }

    /// `phi(x)` on `P^1`, using the degree-`d` coefficients at infinity.
    pub fn apply(&self, x: &ProjPoint<F::Elem>) -> ProjPoint<F::Elem> {
        let k = &self.field;
        let (num, den) = match x {
            ProjPoint::Infinity => (self.f.coeff(self.d, k), self.g.coeff(self.d, k)),
            ProjPoint::Finite(a) => (self.f.eval(a, k), self.g.eval(a, k)),
        };
        match k.div(&num, &den) {
            Some(v) => ProjPoint::Finite(v),
            None => ProjPoint::Infinity,
        }
    }

    /// `phi'(x) = (f'g - fg')/g^2` at a finite point; `None` at a pole.
    pub fn derivative_at(&self, x: &F::Elem) -> Option<F::Elem> {
        let k = &self.field;
        let gx = self.g.eval(x, k);
        let num = k.sub(
            &k.mul(&self.f.derivative(k).eval(x, k), &gx),
            &k.mul(&self.f.eval(x, k), &self.g.derivative(k).eval(x, k)),
        );
        k.div(&num, &k.mul(&gx, &gx))
    }

    /// `mu^-1 o phi o mu`.
    pub fn conjugate(&self, mu: &Mobius<F::Elem>) -> Result<Self> {
        let k = &self.field;
        if k.is_zero(&mu.det(k)) {
            return Err(Error::argument("singular Mobius transformation"));
        }
        let num = Poly::from_coeffs(k, vec![mu.b.clone(), mu.a.clone()]);
        let den = Poly::from_coeffs(k, vec![mu.d.clone(), mu.c.clone()]);
        let fu = self.f.homogeneous_compose(&num, &den, self.d, k);
        let gu = self.g.homogeneous_compose(&num, &den, self.d, k);
        // mu^-1 = (d, -b; -c, a)
        let f2 = fu.scale(&mu.d, k).sub(&gu.scale(&mu.b, k), k);
        let g2 = gu.scale(&mu.a, k).sub(&fu.scale(&mu.c, k), k);
        Self::new(k, f2, g2)
    }

    /// Forward orbit of `alpha` until the first repeat. Over finite fields
    /// the cap is raised to `#P^1`, so the orbit always resolves.
    pub fn orbit(&self, alpha: &ProjPoint<F::Elem>, cap: usize) -> OrbitRecord<F::Elem> {
        self.orbit_with_limit(alpha, cap)
    }

    fn orbit_with_limit(&self, alpha: &ProjPoint<F::Elem>, cap: usize) -> OrbitRecord<F::Elem> {
        let key = |x: &ProjPoint<F::Elem>| match x {
            ProjPoint::Finite(a) => self.field.fingerprint(a),
            ProjPoint::Infinity => u64::MAX,
        };
        let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
        let mut points: Vec<ProjPoint<F::Elem>> = Vec::new();
        let mut x = alpha.clone();
        loop {
            let h = key(&x);
            let hit = seen.get(&h).and_then(|js| js.iter().copied().find(|&j| points[j] == x));
            if let Some(j) = hit {
                let period = points.len() - j;
                let status = if j == 0 {
                    OrbitStatus::Periodic { period }
                } else {
                    OrbitStatus::Preperiodic { tail: j, period }
                };
                return OrbitRecord { points, status };
            }
            let too_big = x.finite().is_some_and(|a| self.field.size_bits(a) > ORBIT_SIZE_LIMIT);
            if points.len() >= cap || too_big {
                return OrbitRecord {
                    status: OrbitStatus::Unresolved {
                        cap,
                        steps: points.len(),
                    },
                    points,
                };
            }
            seen.entry(h).or_default().push(points.len());
            points.push(x.clone());
            x = self.apply(&x);
        }
    }

    /// Display form `f/g` (or `f` for polynomial maps with `g = 1`).
    pub fn format(&self) -> String {
        let k = &self.field;
        let f = self.f.format(k, "z");
        if self.g == Poly::one(k) {
            f
        } else {
            format!("({f})/({})", self.g.format(k, "z"))
        }
    }
}

impl<F: FiniteField> RationalMap<F> {
    /// Orbits over a finite field always close up within `#P^1` steps.
    pub fn orbit_finite(&self, alpha: &ProjPoint<F::Elem>) -> OrbitRecord<F::Elem> {
        let bound = (self.field.order() + 1) as usize;
        self.orbit_with_limit(alpha, bound + 1)
    }
}

/// `f_n - alpha g_n` (or `g_n` at infinity) for `phi^n`, canonically scaled.
pub fn preimage_poly<F: Field>(
    phi: &RationalMap<F>,
    n: usize,
    alpha: &ProjPoint<F::Elem>,
    cap: usize,
) -> Result<Poly<F::Elem>> {
    phi.iterate(n, cap)?.preimage_numerator(alpha)
}

/// Rejects `d^n > cap` before any work is done.
pub fn check_degree(d: usize, n: usize, cap: usize) -> Result<usize> {
    let mut deg: usize = 1;
    for _ in 0..n {
        deg = deg
            .checked_mul(d)
            .filter(|&x| x <= cap)
            .ok_or_else(|| Error::Resource(format!("degree {d}^{n} exceeds the cap {cap}")))?;
    }
    Ok(deg)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    Periodic { period: usize },
    Preperiodic { tail: usize, period: usize },
    /// No repeat among the first `steps` points (`steps <= cap`; fewer when
    /// the points grew too large to continue).
    Unresolved { cap: usize, steps: usize },
}

/// `points[i + 1] = phi(points[i])`, listed up to the first repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRecord<E> {
    pub points: Vec<ProjPoint<E>>,
    pub status: OrbitStatus,
}

impl<E> OrbitRecord<E> {
    /// Whether the starting point lies on a cycle; `None` when unresolved.
    pub fn is_periodic(&self) -> Option<bool> {
        match self.status {
            OrbitStatus::Periodic { .. } => Some(true),
            OrbitStatus::Preperiodic { .. } => Some(false),
            OrbitStatus::Unresolved { .. } => None,
        }
    }
}

/// `z -> (a z + b) / (c z + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius<E> {
    pub a: E,
    pub b: E,
    pub c: E,
    pub d: E,
}

impl<E: Clone> Mobius<E> {
    pub fn translation<F: Field<Elem = E>>(k: &F, alpha: E) -> Self {
        Mobius {
            a: k.one(),
            b: alpha,
            c: k.zero(),
            d: k.one(),
        }
    }

    pub fn inversion<F: Field<Elem = E>>(k: &F) -> Self {
        Mobius {
            a: k.zero(),
            b: k.one(),
            c: k.one(),
            d: k.zero(),
        }
    }

    pub fn det<F: Field<Elem = E>>(&self, k: &F) -> E {
        k.sub(&k.mul(&self.a, &self.d), &k.mul(&self.b, &self.c))
    }
}

/// `(f, g)` rescaled so every coefficient is integral and some coefficient is
/// a unit, with its reduction.
#[derive(Clone, Debug)]
pub struct NormalizedAt<F: Field, K: Field> {
    pub f: Poly<F::Elem>,
    pub g: Poly<F::Elem>,
    pub f_red: Poly<K::Elem>,
    pub g_red: Poly<K::Elem>,
}

/// Reduction data for a map at a valuation.
#[derive(Clone, Debug)]
pub struct Reduction<F: Field, K: Field> {
    pub good: bool,
    /// `v(Res(F, G))` of the degree-`d` homogenizations of the normalized pair.
    pub resultant_valuation: ExtInt,
    pub normalized: NormalizedAt<F, K>,
    /// `f~/g~` when it is a nonconstant map.
    pub reduced: Option<RationalMap<K>>,
}

pub fn normalize_at<F: Field, V: Valuation<F>>(phi: &RationalMap<F>, v: &V) -> NormalizedAt<F, V::Residue> {
    let k = phi.field();
    let min = phi
        .f
        .coeffs()
        .iter()
        .chain(phi.g.coeffs())
        .map(|c| v.value(c))
        .min()
        .and_then(|e| e.finite())
        .expect("nonzero map");
    let pi = v.uniformizer();
    let scale = if min >= 0 {
        k.inv(&k.pow(&pi, min as u64)).unwrap()
    } else {
        k.pow(&pi, (-min) as u64)
    };
    let f = phi.f.scale(&scale, k);
    let g = phi.g.scale(&scale, k);
    let res = v.residue_field();
    let red = |p: &Poly<F::Elem>| {
        Poly::from_coeffs(
            res,
            p.coeffs().iter().map(|c| v.residue(c).expect("integral")).collect(),
        )
    };
    NormalizedAt {
        f_red: red(&f),
        g_red: red(&g),
        f,
        g,
    }
}

/// `Res_{d,d}` of the homogenizations of `f` and `g`.
pub fn homogeneous_resultant<F: Field>(k: &F, f: &Poly<F::Elem>, g: &Poly<F::Elem>, d: usize) -> F::Elem {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return k.zero();
    };
    if df == d {
        k.mul(&k.pow(f.leading().unwrap(), (d - dg) as u64), &k.resultant(f, g))
    } else if dg == d {
        let r = k.mul(&k.pow(g.leading().unwrap(), (d - df) as u64), &k.resultant(g, f));
        if d % 2 == 1 {
            k.neg(&r)
        } else {
            r
        }
    } else {
        // both forms vanish at infinity
        k.zero()
    }
}

/// Good reduction test by the resultant, cross-checked against the direct
/// definition `gcd(f~, g~) = 1` and `max(deg f~, deg g~) = d`.
pub fn good_reduction<F: Field, V: Valuation<F>>(
    phi: &RationalMap<F>,
    v: &V,
) -> Result<Reduction<F, V::Residue>> {
    let k = phi.field();
    let normalized = normalize_at(phi, v);
    let res = homogeneous_resultant(k, &normalized.f, &normalized.g, phi.d);
    let resultant_valuation = v.value(&res);
    let by_resultant = resultant_valuation == ExtInt::Finite(0);
    let r = v.residue_field();
    let (fr, gr) = (&normalized.f_red, &normalized.g_red);
    let red_deg = fr.degree().unwrap_or(0).max(gr.degree().unwrap_or(0));
    let coprime = !(fr.is_zero() && gr.is_zero()) && fr.gcd(gr, r).degree() == Some(0);
    let direct = coprime && red_deg == phi.d;
    if direct != by_resultant {
        return Err(Error::invariant(format!(
            "good reduction tests disagree for {} at {}",
            phi.format(),
            v.describe()
        )));
    }
    let reduced = if coprime && red_deg >= 1 && !gr.is_zero() {
        Some(RationalMap::new(r, fr.clone(), gr.clone())?)
    } else {
        None
    };
    Ok(Reduction {
        good: direct,
        resultant_valuation,
        normalized,
        reduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gf_construct, GaloisField, PAdic, Rat, Rationals};

    fn qp(c: &[i64]) -> Poly<Rat> {
        let k = Rationals;
        Poly::from_coeffs(&k, c.iter().map(|&x| k.from_i64(x)).collect())
    }

    fn gp(k: &GaloisField, c: &[i64]) -> Poly<crate::arith::GfElem> {
        Poly::from_coeffs(k, c.iter().map(|&x| k.from_i64(x)).collect())
    }

    fn fin(x: Rat) -> ProjPoint<Rat> {
        ProjPoint::Finite(x)
    }

    #[test]
    fn construction() {
        let q = Rationals;
        let m = RationalMap::new(&q, qp(&[-1, 0, 1]), qp(&[-1, 1])).unwrap();
        assert_eq!((m.numerator(), m.denominator(), m.degree()), (&qp(&[1, 1]), &qp(&[1]), 1));
        let f = Poly::from_coeffs(&q, vec![q.rat(2, 3), q.zero(), q.from_i64(2)]);
        let m = RationalMap::new(&q, f, qp(&[2])).unwrap();
        assert_eq!((m.numerator(), m.denominator()), (&qp(&[1, 0, 3]), &qp(&[3])));
        assert!(RationalMap::new(&q, Poly::zero(), Poly::zero()).is_err());
    }

    #[test]
    fn iteration_examples() {
        let q = Rationals;
        let sq = RationalMap::polynomial(&q, qp(&[0, 0, 1])).unwrap();
        assert_eq!(sq.iterate(3, 1024).unwrap().numerator(), &qp(&[0, 0, 0, 0, 0, 0, 0, 0, 1]));
        let f5 = gf_construct(5, 1).unwrap();
        let m = RationalMap::polynomial(&f5, gp(&f5, &[2, 0, 1])).unwrap();
        assert_eq!(m.iterate(2, 1024).unwrap().numerator(), &gp(&f5, &[1, 0, 4, 0, 1]));
        let f = Poly::from_coeffs(&q, vec![q.rat(1, 3), q.zero(), q.one()]);
        let m = RationalMap::polynomial(&q, f).unwrap();
        let m2 = m.iterate(2, 1024).unwrap();
        assert_eq!((m2.numerator(), m2.denominator()), (&qp(&[4, 0, 6, 0, 9]), &qp(&[9])));
        assert!(matches!(m.iterate(11, 1024), Err(Error::Resource(_))));
    }

    #[test]
    fn preimage_examples() {
        let q = Rationals;
        let sq = RationalMap::polynomial(&q, qp(&[0, 0, 1])).unwrap();
        let p = sq.iterate(2, 1024).unwrap().preimage_numerator(&ProjPoint::Infinity).unwrap();
        assert_eq!(p, qp(&[1]));
        let m = RationalMap::new(&q, qp(&[2, 2, 1]), qp(&[5, 1])).unwrap();
        assert_eq!(m.preimage_numerator(&fin(q.zero())).unwrap(), qp(&[2, 2, 1]));
    }

    #[test]
    fn apply_examples() {
        let q = Rationals;
        let inv = RationalMap::new(&q, qp(&[1]), qp(&[0, 1])).unwrap();
        assert_eq!(inv.apply(&fin(q.zero())), ProjPoint::Infinity);
        assert_eq!(inv.apply(&ProjPoint::Infinity), fin(q.zero()));
        let m = RationalMap::new(&q, qp(&[2, 2, 1]), qp(&[5, 1])).unwrap();
        assert_eq!(m.apply(&fin(q.zero())), fin(q.rat(2, 5)));
        assert_eq!(m.apply(&ProjPoint::Infinity), ProjPoint::Infinity);
        let f5 = gf_construct(5, 1).unwrap();
        let m = RationalMap::polynomial(&f5, gp(&f5, &[2, 0, 1])).unwrap();
        assert_eq!(m.apply(&ProjPoint::Finite(f5.from_i64(3))), ProjPoint::Finite(f5.one()));
    }

    #[test]
    fn orbit_examples() {
        let f5 = gf_construct(5, 1).unwrap();
        let m = RationalMap::polynomial(&f5, gp(&f5, &[2, 0, 1])).unwrap();
        let o = m.orbit_finite(&ProjPoint::Finite(f5.zero()));
        let pts: Vec<_> = o.points.iter().map(|p| p.finite().unwrap().0).collect();
        assert_eq!(pts, vec![0, 2, 1, 3]);
        assert_eq!(o.status, OrbitStatus::Preperiodic { tail: 2, period: 2 });
        let q = Rationals;
        let sq = RationalMap::polynomial(&q, qp(&[0, 0, 1])).unwrap();
        assert_eq!(sq.orbit(&fin(q.one()), 10).status, OrbitStatus::Periodic { period: 1 });
        let m = RationalMap::polynomial(&q, qp(&[1, 0, 1])).unwrap();
        let o = m.orbit(&fin(q.zero()), 10);
        assert_eq!(o.status, OrbitStatus::Unresolved { cap: 10, steps: 10 });
        assert_eq!(o.points[4], fin(q.from_i64(26)));
    }

    #[test]
    fn reduction_examples() {
        let q = Rationals;
        let v = PAdic::new(2).unwrap();
        let f2 = v.residue_field().clone();
        let m = RationalMap::polynomial(&q, Poly::from_coeffs(&q, vec![q.rat(1, 3), q.zero(), q.one()])).unwrap();
        let r = good_reduction(&m, &v).unwrap();
        assert!(r.good);
        let red = r.reduced.unwrap();
        assert_eq!(red.numerator(), &gp(&f2, &[1, 0, 1]));
        assert_eq!(red.denominator(), &gp(&f2, &[1]));

        let m = RationalMap::polynomial(&q, Poly::from_coeffs(&q, vec![q.rat(1, 2), q.zero(), q.one()])).unwrap();
        let r = good_reduction(&m, &v).unwrap();
        assert!(!r.good);
        assert_eq!(r.normalized.f_red, gp(&f2, &[1]));
        assert!(r.normalized.g_red.is_zero());

        let m = RationalMap::new(&q, qp(&[2, 2, 1]), qp(&[5, 1])).unwrap();
        let r = good_reduction(&m, &v).unwrap();
        assert!(r.good);
        let red = r.reduced.unwrap();
        assert_eq!(red.numerator(), &gp(&f2, &[0, 0, 1]));
        assert_eq!(red.denominator(), &gp(&f2, &[1, 1]));
    }

    #[test]
    fn conjugation_examples() {
        let q = Rationals;
        // z^2 + 5 conjugated by z + 2: z^2 + 4z + 4 + 5 - 2
        let m = RationalMap::polynomial(&q, qp(&[5, 0, 1])).unwrap();
        let c = m.conjugate(&Mobius::translation(&q, q.from_i64(2))).unwrap();
        assert_eq!(c.numerator(), &qp(&[7, 4, 1]));
        let sq = RationalMap::polynomial(&q, qp(&[0, 0, 1])).unwrap();
        assert_eq!(sq.conjugate(&Mobius::inversion(&q)).unwrap(), sq);
        let f5 = gf_construct(5, 1).unwrap();
        let m = RationalMap::polynomial(&f5, gp(&f5, &[2, 0, 1])).unwrap();
        let c = m.conjugate(&Mobius::translation(&f5, f5.one())).unwrap();
        assert_eq!(c.numerator(), &gp(&f5, &[2, 2, 1]));
        let singular = Mobius { a: q.one(), b: q.one(), c: q.one(), d: q.one() };
        assert!(m.conjugate(&Mobius::translation(&f5, f5.one())).is_ok());
        assert!(sq.conjugate(&singular).is_err());
    }

    #[test]
    fn derivative() {
        let q = Rationals;
        let m = RationalMap::new(&q, qp(&[2, 2, 1]), qp(&[5, 1])).unwrap();
        // ((2z+2)(z+5) - (z^2+2z+2)) / (z+5)^2 at 0 = (10 - 2)/25
        assert_eq!(m.derivative_at(&q.zero()), Some(q.rat(8, 25)));
    }
}
