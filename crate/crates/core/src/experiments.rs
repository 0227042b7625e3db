//! Measurements on preimage polynomials: factor counts per level, the
//! factor tree above `alpha`, parity audits and settledness estimates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Field, FiniteField, GaloisField, ProjPoint, Rat, Rationals};
use crate::dynamics::RationalMap;
use crate::error::{Error, Result};
use crate::factor::{Factorize, FactorReport};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountLevel {
    pub n: usize,
    pub degree: usize,
    pub total_count: u64,
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountSequence {
    pub levels: Vec<CountLevel>,
    /// Least `M < N` with `r_n` constant for all observed `n >= M`.
    pub stabilization_index: Option<usize>,
    /// Levels `n` with `r_(n+1) < r_n`.
    pub decreases: Vec<usize>,
    /// Levels where infinity lies in `phi^-n(alpha)`, so `deg P_n < d^n`.
    pub infinity_levels: Vec<usize>,
}

impl CountSequence {
    pub fn counts(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.total_count).collect()
    }
}

fn preimage_polys<F: Field>(
    phi: &RationalMap<F>,
    alpha: &ProjPoint<F::Elem>,
    n_max: usize,
    cap: usize,
) -> Result<Vec<Poly<F::Elem>>> {
    phi.iterates(n_max, cap)?
        .iter()
        .map(|it| it.preimage_numerator(alpha))
        .collect()
}

fn factor_all<F: Factorize>(k: &F, polys: &[Poly<F::Elem>], seed: u64) -> Result<Vec<FactorReport<F::Elem>>> {
    polys.par_iter().map(|p| k.factor(p, seed)).collect()
}

/// Factors `P_n = f_n - alpha g_n` for `n = 1..=n_max`, levels in parallel.
pub fn factor_count_sequence<F: Factorize>(
    phi: &RationalMap<F>,
    alpha: &ProjPoint<F::Elem>,
    n_max: usize,
    seed: u64,
    cap: usize,
) -> Result<CountSequence> {
    let k = phi.field();
    let polys = preimage_polys(phi, alpha, n_max, cap)?;
    let reports = factor_all(k, &polys, seed)?;
    let d = phi.degree();
    let mut levels = Vec::with_capacity(n_max);
    let mut infinity_levels = Vec::new();
    for (i, (p, r)) in polys.iter().zip(&reports).enumerate() {
        let n = i + 1;
        let degree = p.degree().unwrap_or(0);
        if degree < d.pow(n as u32) {
            infinity_levels.push(n);
        }
        levels.push(CountLevel {
            n,
            degree,
            total_count: r.total_count,
            degrees: r.degree_multiset(),
        });
    }
    let counts: Vec<u64> = levels.iter().map(|l| l.total_count).collect();
    let decreases = (1..counts.len()).filter(|&i| counts[i] < counts[i - 1]).collect();
    let mut m = counts.len();
    while m > 1 && counts[m - 2] == counts[counts.len() - 1] {
        m -= 1;
    }
    let stabilization_index = (m < counts.len()).then_some(m);
    Ok(CountSequence {
        levels,
        stabilization_index,
        decreases,
        infinity_levels,
    })
}

/// One irreducible factor (or the point at infinity) of some `P_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    /// `None` for the point at infinity.
    pub factor: Option<String>,
    pub multiplicity: u64,
    pub degree: usize,
    /// Index into the previous level; `None` only at level 0.
    pub parent: Option<usize>,
    /// Child degree over parent degree.
    pub ratio: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeProfile {
    pub degree: usize,
    /// `levels[0]` is the root `alpha`; `levels[n]` factors `P_n`.
    pub levels: Vec<Vec<TreeNode>>,
}

impl TreeProfile {
    pub fn children(&self, level: usize, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.levels
            .get(level + 1)
            .into_iter()
            .flat_map(|l| l.iter().enumerate())
            .filter(move |(_, c)| c.parent == Some(index))
            .map(|(j, _)| j)
    }
}

#[derive(Clone, Debug)]
struct Node<E> {
    factor: Option<Poly<E>>,
    multiplicity: u64,
    parent: Option<usize>,
}

impl<E: Clone> Node<E> {
    fn degree(&self) -> usize {
        self.factor.as_ref().map_or(1, |f| f.degree().unwrap_or(0))
    }
}

/// Children of one node: factors of `g^e h(phi)` for a factor `h` of degree
/// `e`, or of `g` above infinity, plus infinity for any degree deficit.
fn pullback<F: Factorize>(phi: &RationalMap<F>, node: &Node<F::Elem>, seed: u64) -> Result<Vec<(Option<Poly<F::Elem>>, u64)>> {
    let k = phi.field();
    let d = phi.degree();
    let (form, full) = match &node.factor {
        Some(h) => {
            let e = h.degree().unwrap_or(0);
            (h.homogeneous_compose(phi.numerator(), phi.denominator(), e, k), d * e)
        }
        None => (phi.denominator().clone(), d),
    };
    let deg = form
        .degree()
        .ok_or_else(|| Error::invariant("pullback of a factor vanished"))?;
    let mut out: Vec<(Option<Poly<F::Elem>>, u64)> = if deg == 0 {
        Vec::new()
    } else {
        k.factor(&form, seed)?
            .factors
            .into_iter()
            .map(|(g, m)| (Some(g), m as u64))
            .collect()
    };
    if deg < full {
        out.push((None, (full - deg) as u64));
    }
    Ok(out)
}

/// The tree of irreducible factors above `alpha` through level `n_max`,
/// checked level by level against a direct factorization of `P_n`.
pub fn tree_profile<F: Factorize>(
    phi: &RationalMap<F>,
    alpha: &ProjPoint<F::Elem>,
    n_max: usize,
    seed: u64,
    cap: usize,
) -> Result<TreeProfile> {
    let k = phi.field();
    let d = phi.degree();
    let polys = preimage_polys(phi, alpha, n_max, cap)?;
    let direct = factor_all(k, &polys, seed)?;
    let root = Node {
        factor: alpha
            .finite()
            .map(|a| Poly::from_coeffs(k, vec![k.neg(a), k.one()])),
        multiplicity: 1,
        parent: None,
    };
    let mut levels: Vec<Vec<Node<F::Elem>>> = vec![vec![root]];
    for n in 1..=n_max {
        let prev = &levels[n - 1];
        let pulled: Vec<_> = prev
            .par_iter()
            .map(|node| pullback(phi, node, seed))
            .collect::<Result<_>>()?;
        let mut level = Vec::new();
        for (j, (node, kids)) in prev.iter().zip(pulled).enumerate() {
            for (factor, m) in kids {
                level.push(Node {
                    factor,
                    multiplicity: node.multiplicity * m,
                    parent: Some(j),
                });
            }
        }
        check_level(&level, &direct[n - 1], d.pow(n as u32), polys[n - 1].degree().unwrap_or(0), n)?;
        levels.push(level);
    }

    let mut out = Vec::with_capacity(levels.len());
    for (n, level) in levels.iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for node in level {
            let ratio = match node.parent {
                None => None,
                Some(j) => {
                    let pd = levels[n - 1][j].degree();
                    let cd = node.degree();
                    if cd % pd != 0 || cd / pd > d {
                        return Err(Error::invariant(format!(
                            "degree ratio {cd}/{pd} at level {n} is not in 1..={d}"
                        )));
                    }
                    Some(cd / pd)
                }
            };
            row.push(TreeNode {
                factor: node.factor.as_ref().map(|f| f.format(k, "z")),
                multiplicity: node.multiplicity,
                degree: node.degree(),
                parent: node.parent,
                ratio,
            });
        }
        out.push(row);
    }
    Ok(TreeProfile { degree: d, levels: out })
}

fn check_level<E: Clone + Ord + std::fmt::Debug>(
    level: &[Node<E>],
    direct: &FactorReport<E>,
    full: usize,
    degree: usize,
    n: usize,
) -> Result<()> {
    let mut union: BTreeMap<&Poly<E>, u64> = BTreeMap::new();
    let mut at_infinity = 0;
    for node in level {
        match &node.factor {
            Some(f) => *union.entry(f).or_default() += node.multiplicity,
            None => at_infinity += node.multiplicity,
        }
    }
    let expected: BTreeMap<&Poly<E>, u64> = direct.factors.iter().map(|(g, m)| (g, *m as u64)).collect();
    if union != expected || at_infinity != (full - degree) as u64 {
        return Err(Error::invariant(format!(
            "factor tree at level {n} does not match the factorization of P_{n}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StickelbergerAudit {
    pub discriminant: String,
    pub discriminant_is_square: bool,
    pub predicted_even: bool,
    pub observed_count: u64,
    pub observed_even: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "result")]
pub enum AuditOutcome {
    Audited(StickelbergerAudit),
    Refused { reason: String },
}

/// Parity of the number of irreducible factors of a squarefree `f` of even
/// degree over `GF(q)`, `q` odd: even exactly when `disc f` is a square.
pub fn stickelberger_audit(k: &GaloisField, f: &Poly<<GaloisField as Field>::Elem>, seed: u64) -> Result<AuditOutcome> {
    if k.characteristic() == 2 {
        return Err(Error::argument("the parity audit needs odd characteristic"));
    }
    match f.degree() {
        Some(n) if n > 0 && n % 2 == 0 => {}
        _ => return Err(Error::argument("the parity audit needs positive even degree")),
    }
    let disc = f.discriminant(k)?;
    if k.is_zero(&disc) {
        return Ok(AuditOutcome::Refused {
            reason: "discriminant is 0 (f is not squarefree)".into(),
        });
    }
    let square = k.is_square(&disc);
    let observed = k.factor(f, seed)?.total_count;
    let observed_even = observed % 2 == 0;
    Ok(AuditOutcome::Audited(StickelbergerAudit {
        discriminant: k.format_elem(&disc),
        discriminant_is_square: square,
        predicted_even: square,
        observed_count: observed,
        observed_even,
        agree: square == observed_even,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SettledLevel {
    pub n: usize,
    /// Exact fraction of the mass of `phi^-n(alpha)` sitting on stable factors.
    pub stable_mass: String,
    /// Total mass of all level-`n` nodes; always `1`.
    pub total_mass: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SettlednessEstimate {
    pub horizon: usize,
    pub levels: Vec<SettledLevel>,
    pub warning: Option<String>,
}

impl SettlednessEstimate {
    pub fn stable_fractions(&self) -> Vec<Rat> {
        self.levels.iter().map(|l| l.stable_mass.parse().expect("exact fraction")).collect()
    }
}

/// Finite-horizon settledness: a level-`n` node is stable when every node
/// in its chain up to level `horizon` has exactly one child. Each node has
/// mass `degree * multiplicity / d^n`.
pub fn settledness_estimate<F: Factorize + FiniteField>(
    phi: &RationalMap<F>,
    alpha: &ProjPoint<F::Elem>,
    horizon: usize,
    seed: u64,
    cap: usize,
) -> Result<SettlednessEstimate> {
    if horizon < 2 {
        return Err(Error::argument("settledness needs a horizon of at least 2"));
    }
    let d = phi.degree();
    let tree = tree_profile(phi, alpha, horizon, seed, cap)?;
    let p = phi.field().characteristic() as usize;
    let warning = d.is_multiple_of(p).then(|| {
        format!("characteristic {p} divides the degree {d}; the settledness question assumes it does not")
    });
    // stable[n][j]: node j at level n has a single-child chain through the horizon
    let mut stable: Vec<Vec<bool>> = vec![Vec::new(); horizon + 1];
    stable[horizon] = vec![true; tree.levels[horizon].len()];
    for n in (1..horizon).rev() {
        let mut kids = vec![Vec::new(); tree.levels[n].len()];
        for (c, node) in tree.levels[n + 1].iter().enumerate() {
            kids[node.parent.expect("nonroot")].push(c);
        }
        stable[n] = kids
            .iter()
            .map(|ks| ks.len() == 1 && stable[n + 1][ks[0]])
            .collect();
    }
    let mut levels = Vec::new();
    for n in 1..horizon {
        let denom = BigInt::from(d).pow(n as u32);
        let mut stable_mass = Rat::from_integer(BigInt::from(0));
        let mut total = Rat::from_integer(BigInt::from(0));
        for (j, node) in tree.levels[n].iter().enumerate() {
            let mass = Rat::new(BigInt::from(node.degree as u64 * node.multiplicity), denom.clone());
            if stable[n][j] {
                stable_mass += &mass;
            }
            total += mass;
        }
        if total != Rat::from_integer(BigInt::from(1)) {
            return Err(Error::invariant(format!("level {n} mass sums to {total}, not 1")));
        }
        levels.push(SettledLevel {
            n,
            stable_mass: stable_mass.to_string(),
            total_mass: total.to_string(),
        });
    }
    Ok(SettlednessEstimate {
        horizon,
        levels,
        warning,
    })
}

/// `z^d`.
pub fn power_map<F: Field>(k: &F, d: usize) -> Result<RationalMap<F>> {
    if d < 2 {
        return Err(Error::argument("power map needs d >= 2"));
    }
    RationalMap::polynomial(k, Poly::monomial(k, k.one(), d))
}

/// Monic Chebyshev polynomial with `T_d(z + 1/z) = z^d + z^-d`.
pub fn chebyshev<F: Field>(k: &F, d: usize) -> Result<RationalMap<F>> {
    if d < 2 {
        return Err(Error::argument("Chebyshev map needs d >= 2"));
    }
    let z = Poly::x(k);
    let mut prev = Poly::constant(k, k.from_i64(2));
    let mut cur = z.clone();
    for _ in 1..d {
        let next = z.mul(&cur, k).sub(&prev, k);
        prev = cur;
        cur = next;
    }
    RationalMap::polynomial(k, cur)
}

/// `z^2 + 1/a` over `Q`.
pub fn quad_family(a: &Rat) -> Result<RationalMap<Rationals>> {
    let k = Rationals;
    let inv = k
        .inv(a)
        .ok_or_else(|| Error::argument("quadratic family needs a != 0"))?;
    RationalMap::polynomial(&k, Poly::from_coeffs(&k, vec![inv, k.zero(), k.one()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::gf_construct;

    fn gf_map(k: &GaloisField, c: &[i64]) -> RationalMap<GaloisField> {
        RationalMap::polynomial(k, Poly::from_coeffs(k, c.iter().map(|&x| k.from_i64(x)).collect())).unwrap()
    }

    fn zero<F: Field>(k: &F) -> ProjPoint<F::Elem> {
        ProjPoint::Finite(k.zero())
    }

    #[test]
    fn non_example_counts() {
        let k = gf_construct(5, 1).unwrap();
        let phi = gf_map(&k, &[2, 0, 1]);
        let s = factor_count_sequence(&phi, &zero(&k), 8, 0, 1024).unwrap();
        for l in &s.levels {
            assert!(l.total_count >= l.n as u64);
            assert_eq!(l.total_count % 2 == 1, l.n % 2 == 1);
        }
        assert!(s.decreases.is_empty());
    }

    #[test]
    fn rational_counts() {
        let k = Rationals;
        let phi = RationalMap::polynomial(&k, Poly::from_coeffs(&k, vec![k.one(), k.zero(), k.one()])).unwrap();
        let s = factor_count_sequence(&phi, &zero(&k), 4, 0, 64).unwrap();
        assert_eq!(s.counts(), vec![1; 4]);
        assert_eq!(s.stabilization_index, Some(1));
        let sq = power_map(&k, 2).unwrap();
        let s = factor_count_sequence(&sq, &ProjPoint::Finite(k.one()), 3, 0, 64).unwrap();
        assert_eq!(s.counts(), vec![2, 3, 4]);
        assert_eq!(s.stabilization_index, None);
    }

    #[test]
    fn trees() {
        let k = Rationals;
        let phi = RationalMap::polynomial(&k, Poly::from_coeffs(&k, vec![k.one(), k.zero(), k.one()])).unwrap();
        let t = tree_profile(&phi, &zero(&k), 4, 0, 64).unwrap();
        for level in &t.levels[1..] {
            assert_eq!(level.len(), 1);
            assert_eq!(level[0].ratio, Some(2));
        }

        let f5 = gf_construct(5, 1).unwrap();
        let t = tree_profile(&gf_map(&f5, &[2, 0, 1]), &zero(&f5), 5, 0, 1024).unwrap();
        for level in &t.levels[2..] {
            assert!(level.iter().any(|n| n.ratio == Some(1)));
        }

        let f3 = gf_construct(3, 1).unwrap();
        let t = tree_profile(&gf_map(&f3, &[0, 0, 1]), &ProjPoint::Finite(f3.one()), 3, 0, 1024).unwrap();
        assert_eq!(t.levels[1].len(), 2);
        assert_eq!(t.levels[1][0].factor.as_deref(), Some("z + 1"));
    }

    #[test]
    fn tree_with_infinity() {
        // alpha = inf for z^2 + 1: the whole tree sits at infinity
        let f5 = gf_construct(5, 1).unwrap();
        let t = tree_profile(&gf_map(&f5, &[1, 0, 1]), &ProjPoint::Infinity, 3, 0, 1024).unwrap();
        for level in &t.levels {
            assert_eq!(level.len(), 1);
            assert_eq!(level[0].factor, None);
        }
        assert_eq!(t.levels[3][0].multiplicity, 8);
    }

    #[test]
    fn stickelberger_examples() {
        let k = gf_construct(5, 1).unwrap();
        let p = |c: &[i64]| Poly::from_coeffs(&k, c.iter().map(|&x| k.from_i64(x)).collect());
        let AuditOutcome::Audited(a) = stickelberger_audit(&k, &p(&[1, 0, 4, 0, 1]), 0).unwrap() else {
            panic!()
        };
        assert!(a.predicted_even && a.agree && a.observed_count == 2);
        let AuditOutcome::Audited(a) = stickelberger_audit(&k, &p(&[2, 0, 1]), 0).unwrap() else {
            panic!()
        };
        assert_eq!((a.discriminant.as_str(), a.predicted_even, a.observed_count), ("2", false, 1));
        let f3 = gf_construct(3, 1).unwrap();
        let f = Poly::from_coeffs(&f3, vec![f3.from_i64(-1), f3.zero(), f3.one()]);
        let AuditOutcome::Audited(a) = stickelberger_audit(&f3, &f, 0).unwrap() else {
            panic!()
        };
        assert_eq!((a.discriminant.as_str(), a.predicted_even, a.observed_count), ("1", true, 2));
        let sq = p(&[1, 2, 1]);
        assert!(matches!(stickelberger_audit(&k, &sq, 0).unwrap(), AuditOutcome::Refused { .. }));
    }

    #[test]
    fn settledness() {
        let k = gf_construct(5, 1).unwrap();
        let s = settledness_estimate(&gf_map(&k, &[2, 0, 1]), &zero(&k), 6, 0, 1024).unwrap();
        assert_eq!(s.levels.len(), 5);
        assert!(s.levels.iter().all(|l| l.total_mass == "1"));
        // z^2 + 2 over GF(3): z^2 - 1 splits at level 1, so z^2 + 2 is never a chain at the root
        let f3 = gf_construct(3, 1).unwrap();
        let s = settledness_estimate(&gf_map(&f3, &[1, 0, 1]), &zero(&f3), 4, 0, 1024).unwrap();
        for r in s.stable_fractions() {
            assert!(r >= Rat::from_integer(0.into()) && r <= Rat::from_integer(1.into()));
        }
    }

    #[test]
    fn presets() {
        let k = Rationals;
        assert_eq!(chebyshev(&k, 2).unwrap().format(), "z^2 - 2");
        assert_eq!(chebyshev(&k, 3).unwrap().format(), "z^3 - 3*z");
        assert_eq!(power_map(&k, 3).unwrap().format(), "z^3");
        assert_eq!(quad_family(&k.rat(3, 1)).unwrap().format(), "(3*z^2 + 1)/(3)");
        assert!(quad_family(&k.zero()).is_err());
        assert!(chebyshev(&k, 1).is_err());
    }

    #[test]
    fn chebyshev_conjugates_power_map() {
        let k = Rationals;
        for d in 2..=6 {
            // T_d o (z + 1/z) = (z^(2d) + 1) / z^d
            let joukowski = RationalMap::new(
                &k,
                Poly::from_coeffs(&k, vec![k.one(), k.zero(), k.one()]),
                Poly::x(&k),
            )
            .unwrap();
            let lhs = chebyshev(&k, d).unwrap().compose(&joukowski);
            let mut top = vec![k.zero(); 2 * d + 1];
            top[0] = k.one();
            top[2 * d] = k.one();
            let rhs = RationalMap::new(&k, Poly::from_coeffs(&k, top), Poly::monomial(&k, k.one(), d)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
