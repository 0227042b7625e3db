use crate::arith::Field;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Squarefree decomposition `f = lc(f) * prod g_i^(m_i)` with monic,
/// squarefree, pairwise coprime `g_i` and distinct `m_i`, sorted by `m_i`.
///
/// In characteristic `p` the part that is a polynomial in `z^p` is handled
/// by taking `p`-th roots of the coefficients and recursing.
pub fn squarefree_decompose<F: Field>(k: &F, f: &Poly<F::Elem>) -> Result<Vec<(Poly<F::Elem>, u32)>> {
    if f.is_constant() {
        return Err(Error::argument("squarefree decomposition needs a nonconstant polynomial"));
    }
    let mut out = Vec::new();
    decompose(k, &f.monic(k), 1, &mut out)?;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let mut merged: Vec<(Poly<F::Elem>, u32)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, n)) if *n == m => *h = h.mul(&g, k),
            _ => merged.push((g, m)),
        }
    }
    Ok(merged)
}

fn decompose<F: Field>(
    k: &F,
    f: &Poly<F::Elem>,
    scale: u32,
    out: &mut Vec<(Poly<F::Elem>, u32)>,
) -> Result<()> {
    let df = f.derivative(k);
    let mut c = f.gcd(&df, k);
    let mut w = f.div_exact(&c, k);
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c, k);
        let fac = w.div_exact(&y, k);
        if !fac.is_constant() {
            out.push((fac, i * scale));
        }
        c = c.div_exact(&y, k);
        w = y;
        i += 1;
    }
    if !c.is_constant() {
        let p = k.characteristic() as usize;
        if p == 0 {
            return Err(Error::invariant("nonconstant cofactor in characteristic zero"));
        }
        let mut root = Vec::new();
        for (j, a) in c.coeffs().iter().enumerate() {
            if j % p == 0 {
                let r = k
                    .pth_root(a)
                    .ok_or_else(|| Error::Unsupported(format!("{} has no p-th root", k.format_elem(a))))?;
                root.push(r);
            } else if !k.is_zero(a) {
                return Err(Error::invariant("cofactor is not a polynomial in z^p"));
            }
        }
        decompose(k, &Poly::from_coeffs(k, root), scale * p as u32, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gf_construct, Rationals};

    #[test]
    fn over_q() {
        let q = Rationals;
        let zm1 = Poly::from_coeffs(&q, vec![q.from_i64(-1), q.one()]);
        let zp1 = Poly::from_coeffs(&q, vec![q.one(), q.one()]);
        let f = zm1.pow(2, &q).mul(&zp1, &q).scale(&q.from_i64(3), &q);
        assert_eq!(squarefree_decompose(&q, &f).unwrap(), vec![(zp1, 1), (zm1, 2)]);
        assert!(squarefree_decompose(&q, &Poly::constant(&q, q.one())).is_err());
    }

    #[test]
    fn characteristic_p() {
        let f2 = gf_construct(2, 1).unwrap();
        let f = Poly::from_coeffs(&f2, vec![f2.one(), f2.zero(), f2.one()]);
        let zp1 = Poly::from_coeffs(&f2, vec![f2.one(), f2.one()]);
        assert_eq!(squarefree_decompose(&f2, &f).unwrap(), vec![(zp1, 2)]);
        let f5 = gf_construct(5, 1).unwrap();
        let z5 = Poly::monomial(&f5, f5.one(), 5);
        assert_eq!(squarefree_decompose(&f5, &z5).unwrap(), vec![(Poly::x(&f5), 5)]);
        // z^2 (z+1)^10 over GF(5): multiplicities 2 and 10
        let zp1 = Poly::from_coeffs(&f5, vec![f5.one(), f5.one()]);
        let g = Poly::x(&f5).pow(2, &f5).mul(&zp1.pow(10, &f5), &f5);
        assert_eq!(squarefree_decompose(&f5, &g).unwrap(), vec![(Poly::x(&f5), 2), (zp1, 10)]);
    }
}
