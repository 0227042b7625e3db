//! Factorization into irreducibles with multiplicity over `GF(q)` and `Q`.

mod gfq;
mod rational;
mod squarefree;

pub use gfq::{distinct_degree, equal_degree, factor_gfq, is_irreducible_gf};
pub use rational::{factor_q, factor_z_squarefree};
pub use squarefree::squarefree_decompose;

use crate::arith::{Field, FuncFieldElem, FunctionField, GaloisField, Rat, Rationals};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// `unit * prod factor^mult` reproduces the input. Factors are monic,
/// irreducible and sorted (degree first), each listed once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorReport<E> {
    pub unit: E,
    pub factors: Vec<(Poly<E>, u32)>,
    pub total_count: u64,
}

impl<E: Clone + Ord> FactorReport<E> {
    pub(crate) fn from_parts(unit: E, mut factors: Vec<(Poly<E>, u32)>) -> Self {
        factors.sort();
        // merge repeats, which can come from distinct squarefree layers
        let mut merged: Vec<(Poly<E>, u32)> = Vec::with_capacity(factors.len());
        for (g, m) in factors {
            match merged.last_mut() {
                Some((h, n)) if *h == g => *n += m,
                _ => merged.push((g, m)),
            }
        }
        let total_count = merged.iter().map(|(_, m)| *m as u64).sum();
        FactorReport {
            unit,
            factors: merged,
            total_count,
        }
    }

    /// Degrees of the irreducible factors, repeated by multiplicity, ascending.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (g, m) in &self.factors {
            for _ in 0..*m {
                out.push(g.degree().unwrap_or(0));
            }
        }
        out.sort_unstable();
        out
    }

    /// Multiplies the factorization back out.
    pub fn expand<F: Field<Elem = E>>(&self, k: &F) -> Poly<E> {
        let mut acc = Poly::constant(k, self.unit.clone());
        for (g, m) in &self.factors {
            acc = acc.mul(&g.pow(*m as u64, k), k);
        }
        acc
    }
}

/// Fields whose polynomials this crate can factor.
pub trait Factorize: Field {
    fn factor(&self, f: &Poly<Self::Elem>, seed: u64) -> Result<FactorReport<Self::Elem>>;

    /// Largest degree factored by default in experiment sweeps.
    fn default_degree_cap(&self) -> usize;
}

impl Factorize for GaloisField {
    fn factor(&self, f: &Poly<Self::Elem>, seed: u64) -> Result<FactorReport<Self::Elem>> {
        factor_gfq(self, f, seed)
    }

    fn default_degree_cap(&self) -> usize {
        1024
    }
}

impl Factorize for Rationals {
    fn factor(&self, f: &Poly<Rat>, _seed: u64) -> Result<FactorReport<Rat>> {
        factor_q(f)
    }

    fn default_degree_cap(&self) -> usize {
        64
    }
}

/// Only polynomials with constant (`F_p`) coefficients are factored; the
/// answer is the same over `F_p(t)` since `F_p` is algebraically closed in it.
impl Factorize for FunctionField {
    fn factor(&self, f: &Poly<FuncFieldElem>, seed: u64) -> Result<FactorReport<FuncFieldElem>> {
        let base = self.base();
        let consts: Option<Vec<_>> = f.coeffs().iter().map(|c| c.as_constant()).collect();
        let consts = consts.ok_or_else(|| {
            Error::Unsupported("factoring over F_p(t) needs constant coefficients".into())
        })?;
        let rep = factor_gfq(base, &Poly::from_coeffs(base, consts), seed)?;
        let lift = |g: &Poly<_>| {
            Poly::from_coeffs(self, g.coeffs().iter().map(|&c| self.constant(c)).collect())
        };
        Ok(FactorReport::from_parts(
            self.constant(rep.unit),
            rep.factors.iter().map(|(g, m)| (lift(g), *m)).collect(),
        ))
    }

    fn default_degree_cap(&self) -> usize {
        1024
    }
}

/// Irreducible factors counted with multiplicity; 0 for nonzero constants.
pub fn count_irreducible_factors<F: Factorize>(k: &F, f: &Poly<F::Elem>, seed: u64) -> Result<u64> {
    match f.degree() {
        None => Err(Error::argument("the zero polynomial has no factorization")),
        Some(0) => Ok(0),
        Some(_) => Ok(k.factor(f, seed)?.total_count),
    }
}
