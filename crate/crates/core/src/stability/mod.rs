//! Certificates bounding the number of irreducible factors of every
//! preimage polynomial `f_n - alpha g_n`.
//!
//! Each criterion checks its hypotheses exactly and either returns a
//! [`Certificate`] (every hypothesis passed, with witnesses) or a
//! [`Refusal`] naming the first hypothesis that failed.

mod bijective;

pub use bijective::{
    distinct_preimages, find_collision, is_bijective_on_extension, is_bijective_on_residue_extensions,
    normal_form, BijectivityReport, Collision, Extension, FiberWitness, NormalForm,
};

use serde::Serialize;

use crate::arith::{
    format_point, invert_point, point_valuation, reduce_point, ExtInt, Field, FiniteField, GaloisField,
    ProjPoint, Valuation,
};
use crate::dynamics::{good_reduction, Mobius, OrbitStatus, RationalMap, Reduction};
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Theorem {
    Eisenstein,
    Evstab1,
    Evstab2,
    Polycor,
    Fullmain,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::Eisenstein => "EISENSTEIN",
            Theorem::Evstab1 => "EVSTAB1",
            Theorem::Evstab2 => "EVSTAB2",
            Theorem::Polycor => "POLYCOR",
            Theorem::Fullmain => "FULLMAIN",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub passed: bool,
    pub witness: String,
}

/// Recorded when non-periodicity of `alpha` could only be presumed from a
/// finite orbit search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Caveat {
    PresumedNonperiodic { cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub theorem: Theorem,
    pub hypotheses: Vec<Hypothesis>,
    /// Upper bound on the number of irreducible factors, with multiplicity.
    pub bound: u64,
    /// The valuation the bound is read from, e.g. `v(phi(0) - 0)`.
    pub bound_source: String,
    /// Least `i >= 1` with `phi~^i(alpha~) = alpha~` (FULLMAIN only).
    pub period_index: Option<usize>,
    pub caveat: Option<Caveat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub theorem: Theorem,
    /// Hypotheses checked before stopping; the last one failed.
    pub hypotheses: Vec<Hypothesis>,
    pub failed: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "result")]
pub enum Outcome<T = Certificate> {
    Certified(T),
    Refused(Refusal),
}

impl<T> Outcome<T> {
    pub fn certified(&self) -> Option<&T> {
        match self {
            Outcome::Certified(c) => Some(c),
            Outcome::Refused(_) => None,
        }
    }

    pub fn refusal(&self) -> Option<&Refusal> {
        match self {
            Outcome::Certified(_) => None,
            Outcome::Refused(r) => Some(r),
        }
    }
}

struct Checklist {
    theorem: Theorem,
    items: Vec<Hypothesis>,
}

impl Checklist {
    fn new(theorem: Theorem) -> Self {
        Checklist {
            theorem,
            items: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, passed: bool, witness: impl Into<String>) -> bool {
        self.items.push(Hypothesis {
            name: name.to_string(),
            passed,
            witness: witness.into(),
        });
        passed
    }

    fn refuse<T>(self) -> Outcome<T> {
        let last = self.items.last().expect("a failed hypothesis").clone();
        Outcome::Refused(Refusal {
            theorem: self.theorem,
            failed: last.name.clone(),
            reason: format!("{}: {}", last.name, last.witness),
            hypotheses: self.items,
        })
    }

    fn certify(self, bound: u64, bound_source: String, period_index: Option<usize>) -> Outcome {
        Outcome::Certified(Certificate {
            theorem: self.theorem,
            hypotheses: self.items,
            bound,
            bound_source,
            period_index,
            caveat: None,
        })
    }
}

fn bound_from(value: ExtInt, what: &str) -> Result<u64> {
    match value {
        ExtInt::Finite(b) if b >= 0 => Ok(b as u64),
        other => Err(Error::invariant(format!("{what} has valuation {other}, not a bound"))),
    }
}

/// Generalized Eisenstein bound: if `v(a_d) = 0`, `v(a_i) > 0` for `i < d`
/// and `a_0 != 0`, then `f` has at most `v(a_0)` irreducible factors.
pub fn eisenstein_bound<F: Field, V: Valuation<F>>(k: &F, f: &Poly<F::Elem>, v: &V) -> Result<Outcome> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::argument("Eisenstein bound needs degree at least 1")),
    };
    let mut cl = Checklist::new(Theorem::Eisenstein);
    let a0 = f.coeff(0, k);
    if !cl.check("a_0 != 0", !k.is_zero(&a0), format!("a_0 = {}", k.format_elem(&a0))) {
        return Ok(cl.refuse());
    }
    let vd = v.value(f.leading().unwrap());
    if !cl.check("v(a_d) = 0", vd == ExtInt::Finite(0), format!("v(a_{d}) = {vd}")) {
        return Ok(cl.refuse());
    }
    for (i, a) in f.coeffs().iter().enumerate().take(d) {
        let vi = v.value(a);
        if vi <= ExtInt::Finite(0) {
            cl.check(
                "v(a_i) > 0 for i < d",
                false,
                format!("v(a_{i}) = {vi} for a_{i} = {}", k.format_elem(a)),
            );
            return Ok(cl.refuse());
        }
    }
    cl.check("v(a_i) > 0 for i < d", true, "all lower coefficients in the maximal ideal");
    let va0 = v.value(&a0);
    let bound = bound_from(va0, "a_0")?;
    Ok(cl.certify(bound, format!("v(a_0) = v({})", k.format_elem(&a0)), None))
}

fn check_degree<F: Field>(cl: &mut Checklist, phi: &RationalMap<F>) -> bool {
    cl.check("degree >= 2", phi.degree() >= 2, format!("d = {}", phi.degree()))
}

fn check_good_reduction<F: Field, V: Valuation<F>>(
    cl: &mut Checklist,
    phi: &RationalMap<F>,
    v: &V,
) -> Result<(bool, Reduction<F, V::Residue>)> {
    let red = good_reduction(phi, v)?;
    let witness = if red.good {
        format!("good reduction at {} (v(Res) = 0)", v.describe())
    } else {
        format!("bad reduction at {} (v(Res) = {})", v.describe(), red.resultant_valuation)
    };
    let ok = cl.check("good reduction", red.good, witness);
    Ok((ok, red))
}

/// Valuations `v(phi^n(0))` for `n = 1..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitValuationReport {
    pub hypotheses: Vec<Hypothesis>,
    pub valuations: Vec<ExtInt>,
}

/// Checks `v(phi^n(0)) = v(phi(0))` under good reduction, `phi(0) != 0`,
/// `v(phi(0)) > 0` and `v(phi'(0)) > 0`. A violation is an internal error.
pub fn orbit_valuation_check<F: Field, V: Valuation<F>>(
    phi: &RationalMap<F>,
    v: &V,
    n_max: usize,
) -> Result<Outcome<OrbitValuationReport>> {
    let k = phi.field();
    let mut cl = Checklist::new(Theorem::Evstab1);
    if !check_good_reduction(&mut cl, phi, v)?.0 {
        return Ok(cl.refuse());
    }
    let zero = ProjPoint::Finite(k.zero());
    let first = phi.apply(&zero);
    let nonzero = first != zero && !first.is_infinity();
    if !cl.check("phi(0) != 0", nonzero, format!("phi(0) = {}", format_point(k, &first))) {
        return Ok(cl.refuse());
    }
    let v1 = point_valuation(v, &first);
    if !cl.check("v(phi(0)) > 0", v1 > ExtInt::Finite(0), format!("v(phi(0)) = {v1}")) {
        return Ok(cl.refuse());
    }
    let (ok, witness) = match phi.derivative_at(&k.zero()) {
        Some(dz) => {
            let vd = v.value(&dz);
            (vd > ExtInt::Finite(0), format!("phi'(0) = {}, v = {vd}", k.format_elem(&dz)))
        }
        None => (false, "phi has a pole at 0".to_string()),
    };
    if !cl.check("v(phi'(0)) > 0", ok, witness) {
        return Ok(cl.refuse());
    }
    let mut x = zero;
    let mut valuations = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        x = phi.apply(&x);
        let vn = point_valuation(v, &x);
        if vn != v1 {
            return Err(Error::invariant(format!(
                "v(phi^{n}(0)) = {vn} differs from v(phi(0)) = {v1}"
            )));
        }
        valuations.push(vn);
    }
    Ok(Outcome::Certified(OrbitValuationReport {
        hypotheses: cl.items,
        valuations,
    }))
}

/// Bound `v(phi(0))` on the factors of every numerator `f_n`, when `phi` has
/// good reduction, `phi(0) != 0` and the reduced numerator is `C z^d`.
pub fn evstab1_certificate<F: Field, V: Valuation<F>>(phi: &RationalMap<F>, v: &V) -> Result<Outcome> {
    let k = phi.field();
    let mut cl = Checklist::new(Theorem::Evstab1);
    if !check_degree(&mut cl, phi) {
        return Ok(cl.refuse());
    }
    let (ok, red) = check_good_reduction(&mut cl, phi, v)?;
    if !ok {
        return Ok(cl.refuse());
    }
    let zero = ProjPoint::Finite(k.zero());
    let image = phi.apply(&zero);
    if !cl.check("phi(0) != 0", image != zero, format!("phi(0) = {}", format_point(k, &image))) {
        return Ok(cl.refuse());
    }
    let r = v.residue_field();
    let fr = &red.normalized.f_red;
    let monomial = fr.degree() == Some(phi.degree()) && fr.coeffs()[..phi.degree()].iter().all(|c| r.is_zero(c));
    if !cl.check("f~ = C z^d", monomial, format!("f~ = {}", fr.format(r, "z"))) {
        return Ok(cl.refuse());
    }
    let bound = bound_from(point_valuation(v, &image), "phi(0)")?;
    Ok(cl.certify(bound, format!("v(phi(0)) = v({})", format_point(k, &image)), None))
}

/// Whether `h = C (z - a)^d` with `C != 0`.
fn is_pure_power<K: Field>(r: &K, h: &Poly<K::Elem>, a: &K::Elem, d: usize) -> bool {
    if h.degree() != Some(d) {
        return false;
    }
    let lin = Poly::from_coeffs(r, vec![r.neg(a), r.one()]);
    h.monic(r) == lin.pow(d as u64, r)
}

/// Bound `v(phi(alpha) - alpha)` (or `v(1/phi(alpha) - 1/alpha)` when
/// `alpha` reduces to infinity) when `phi` has good reduction, does not fix
/// `alpha`, and the reduced map is totally ramified over the reduction of
/// `alpha` with no other preimage.
pub fn evstab2_certificate<F: Field, V: Valuation<F>>(
    phi: &RationalMap<F>,
    v: &V,
    alpha: &ProjPoint<F::Elem>,
) -> Result<Outcome> {
    let k = phi.field();
    let mut cl = Checklist::new(Theorem::Evstab2);
    if !check_degree(&mut cl, phi) {
        return Ok(cl.refuse());
    }
    let (ok, red) = check_good_reduction(&mut cl, phi, v)?;
    if !ok {
        return Ok(cl.refuse());
    }
    let image = phi.apply(alpha);
    if !cl.check(
        "phi(alpha) != alpha",
        image != *alpha,
        format!("phi({}) = {}", format_point(k, alpha), format_point(k, &image)),
    ) {
        return Ok(cl.refuse());
    }
    let reduced = red
        .reduced
        .ok_or_else(|| Error::invariant("good reduction without a reduced map"))?;
    let r = v.residue_field();
    let d = phi.degree();
    let a_red = reduce_point(v, alpha);
    let (ramified, witness) = match &a_red {
        ProjPoint::Finite(a) => {
            let h = reduced.numerator().sub(&reduced.denominator().scale(a, r), r);
            (
                is_pure_power(r, &h, a, d),
                format!("f~ - ({})g~ = {}", r.format_elem(a), h.format(r, "z")),
            )
        }
        ProjPoint::Infinity => {
            let psi = reduced.conjugate(&Mobius::inversion(r))?;
            let h = psi.numerator();
            (
                is_pure_power(r, h, &r.zero(), d),
                format!("alpha~ = inf; numerator of 1/phi~(1/z) = {}", h.format(r, "z")),
            )
        }
    };
    if !cl.check("phi~^-1(alpha~) = {alpha~}", ramified, witness) {
        return Ok(cl.refuse());
    }
    let (value, source) = if point_valuation(v, alpha) >= ExtInt::Finite(0) {
        let a = alpha.finite().expect("integral alpha is finite");
        let phi0 = phi.conjugate(&Mobius::translation(k, a.clone()))?;
        let c = phi0.apply(&ProjPoint::Finite(k.zero()));
        let direct = match &image {
            ProjPoint::Finite(y) => v.value(&k.sub(y, a)),
            ProjPoint::Infinity => ExtInt::NegInf,
        };
        let via_conj = point_valuation(v, &c);
        if via_conj != direct {
            return Err(Error::invariant("translation conjugate disagrees with phi(alpha) - alpha"));
        }
        (direct, format!("v(phi(alpha) - alpha) with alpha = {}", k.format_elem(a)))
    } else {
        let psi = phi.conjugate(&Mobius::inversion(k))?;
        let beta = invert_point(k, alpha);
        let b = beta.finite().expect("1/alpha is integral").clone();
        let value = match psi.apply(&beta) {
            ProjPoint::Finite(y) => v.value(&k.sub(&y, &b)),
            ProjPoint::Infinity => ExtInt::NegInf,
        };
        (value, format!("v(1/phi(alpha) - 1/alpha) with alpha = {}", format_point(k, alpha)))
    };
    let bound = bound_from(value, "the bound expression")?;
    Ok(cl.certify(bound, source, None))
}

/// Bound `-v(alpha)` for a polynomial `phi` with good reduction and
/// `v(alpha) < 0`; cross-checked against the general criterion.
pub fn polycor_bound<F: Field, V: Valuation<F>>(
    phi: &RationalMap<F>,
    v: &V,
    alpha: &ProjPoint<F::Elem>,
) -> Result<Outcome> {
    if !phi.is_polynomial() {
        return Err(Error::argument("the polynomial criterion needs a polynomial map"));
    }
    let k = phi.field();
    let mut cl = Checklist::new(Theorem::Polycor);
    if !check_degree(&mut cl, phi) {
        return Ok(cl.refuse());
    }
    if !check_good_reduction(&mut cl, phi, v)?.0 {
        return Ok(cl.refuse());
    }
    let va = point_valuation(v, alpha);
    let negative = alpha.finite().is_some() && va < ExtInt::Finite(0);
    if !cl.check("v(alpha) < 0", negative, format!("v({}) = {va}", format_point(k, alpha))) {
        return Ok(cl.refuse());
    }
    let bound = bound_from(va.neg(), "-v(alpha)")?;
    match evstab2_certificate(phi, v, alpha)? {
        Outcome::Certified(c) if c.bound == bound => {}
        other => {
            return Err(Error::invariant(format!(
                "polynomial bound {bound} does not match the general criterion: {other:?}"
            )))
        }
    }
    Ok(cl.certify(bound, format!("-v(alpha) with alpha = {}", format_point(k, alpha)), None))
}

#[derive(Clone, Copy, Debug)]
pub struct FullmainOptions {
    pub orbit_cap: usize,
    pub degree_cap: usize,
}

impl Default for FullmainOptions {
    fn default() -> Self {
        FullmainOptions {
            orbit_cap: crate::dynamics::DEFAULT_ORBIT_CAP,
            degree_cap: crate::dynamics::DEFAULT_DEGREE_CAP,
        }
    }
}

/// Bound for maps with good reduction that are bijective on every residue
/// extension: the general criterion applied to `phi^i`, where `i` is the
/// period of the reduction of `alpha`.
///
/// Non-periodicity of `alpha` never rests on the orbit search alone: once
/// the other hypotheses hold and `phi^i(alpha) != alpha`, the valuations
/// `v(phi^(i n)(alpha) - alpha)` are all equal and finite, so no iterate
/// returns to `alpha`.
pub fn fullmain_certificate<F: Field, V: Valuation<F, Residue = GaloisField>>(
    phi: &RationalMap<F>,
    v: &V,
    alpha: &ProjPoint<F::Elem>,
    opts: FullmainOptions,
) -> Result<Outcome> {
    let mut cl = Checklist::new(Theorem::Fullmain);
    if !check_degree(&mut cl, phi) {
        return Ok(cl.refuse());
    }
    let (ok, red) = check_good_reduction(&mut cl, phi, v)?;
    if !ok {
        return Ok(cl.refuse());
    }
    let reduced = red
        .reduced
        .ok_or_else(|| Error::invariant("good reduction without a reduced map"))?;
    let bij = is_bijective_on_residue_extensions(&reduced)?;
    let witness = match (&bij.normal_form, &bij.fiber_witness) {
        (Some(nf), _) => format!(
            "phi~ = {} has normal form (c1 z^q + c2)/(c3 z^q + c4), q = p^{}, c = ({})",
            reduced.format(),
            nf.j,
            nf.c.join(", ")
        ),
        (None, Some(w)) => format!(
            "phi~ = {}: {} has {} distinct preimages",
            reduced.format(),
            w.beta,
            w.distinct_preimages
        ),
        (None, None) => format!("phi~ = {}", reduced.format()),
    };
    if !cl.check("bijective on residue extensions", bij.bijective, witness) {
        return Ok(cl.refuse());
    }

    let r = v.residue_field();
    let a_red = reduce_point(v, alpha);
    let limit = r.order() as usize + 1;
    let mut y = reduced.apply(&a_red);
    let mut i = 1;
    while y != a_red {
        if i > limit {
            return Err(Error::invariant("reduced orbit did not return within #P^1(k) steps"));
        }
        y = reduced.apply(&y);
        i += 1;
    }
    cl.check(
        "i <= #P^1(k)",
        i <= limit,
        format!("i = {i}, alpha~ = {}, #P^1(k) = {limit}", format_point(r, &a_red)),
    );

    let orbit = phi.orbit(alpha, opts.orbit_cap);
    if let OrbitStatus::Periodic { period } = orbit.status {
        cl.check("alpha not periodic", false, format!("alpha has exact period {period}"));
        return Ok(cl.refuse());
    }
    let phi_i = phi.iterate(i, opts.degree_cap)?;
    let back = phi_i.apply(alpha);
    if back == *alpha {
        cl.check("alpha not periodic", false, format!("phi^{i}(alpha) = alpha"));
        return Ok(cl.refuse());
    }
    let orbit_note = match orbit.status {
        OrbitStatus::Preperiodic { tail, period } => {
            format!("orbit is preperiodic (tail {tail}, period {period})")
        }
        OrbitStatus::Unresolved { cap, steps } => format!(
            "no repeat in {steps} orbit steps (cap {cap}); phi^{i}(alpha) != alpha forces v(phi^({i}n)(alpha) - alpha) to stay constant, so alpha is not periodic"
        ),
        OrbitStatus::Periodic { .. } => unreachable!(),
    };
    cl.check("alpha not periodic", true, orbit_note);

    let sub = match evstab2_certificate(&phi_i, v, alpha)? {
        Outcome::Certified(c) => c,
        Outcome::Refused(rf) => {
            return Err(Error::invariant(format!(
                "general criterion refused phi^{i} although its hypotheses follow: {}",
                rf.reason
            )))
        }
    };
    for h in sub.hypotheses {
        cl.items.push(Hypothesis {
            name: format!("phi^{i}: {}", h.name),
            ..h
        });
    }
    let source = sub.bound_source.replacen("phi(", &format!("phi^{i}("), 1);
    Ok(cl.certify(sub.bound, source, Some(i)))
}
