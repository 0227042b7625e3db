//! Command-line front end: argument definitions, command dispatch and
//! report rendering.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use evstab::arith::{format_point, AnyValuation, Field, GaloisField, ProjPoint, Rat, Valuation};
use evstab::dynamics::{preimage_poly, OrbitStatus, RationalMap, DEFAULT_DEGREE_CAP, DEFAULT_ORBIT_CAP};
use evstab::experiments::{
    chebyshev, factor_count_sequence, power_map, quad_family, settledness_estimate, stickelberger_audit, tree_profile,
};
use evstab::factor::{FactorReport, Factorize};
use evstab::parse::{parse_element, parse_field, parse_map, parse_point, parse_poly, parse_valuation, FieldSpec};
use evstab::stability::{
    eisenstein_bound, evstab1_certificate, evstab2_certificate, fullmain_certificate, is_bijective_on_residue_extensions,
    polycor_bound, FullmainOptions, Outcome,
};
use evstab::{Error, Result};

/// Version tag of the report layout.
pub const SCHEMA: &str = "evstab-report/1";

#[derive(Parser, Debug)]
#[command(name = "evstab", version, about = "Iterate rational maps, factor preimages, certify eventual stability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Seed for randomized equal-degree splitting.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Largest iterate degree to build or factor.
    #[arg(long, env = "EVSTAB_DEGREE_CAP", global = true)]
    pub degree_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MapArgs {
    /// Q, GF(p), GF(p,m) or GF(p)(t).
    #[arg(long)]
    pub field: String,
    /// Rational expression in z.
    #[arg(long)]
    pub map: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PointArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub map: MapArgs,
    /// Base point: a field element or `inf`.
    #[arg(long, default_value = "0")]
    pub point: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LevelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub at: PointArgs,
    /// Number of levels.
    #[arg(long = "N", short = 'N', default_value_t = 4)]
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    All,
    Eisenstein,
    Evstab1,
    Evstab2,
    Polycor,
    Fullmain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Power,
    Chebyshev,
    Quad,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Forward orbit of a point until it repeats.
    Orbit {
        #[command(flatten)]
        #[serde(flatten)]
        at: PointArgs,
        /// Maximum orbit length over infinite fields.
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
    /// The n-th iterate as a reduced pair (f_n, g_n).
    Iterate {
        #[command(flatten)]
        #[serde(flatten)]
        map: MapArgs,
        #[arg(long = "N", short = 'N', default_value_t = 2)]
        n: usize,
    },
    /// f_n - alpha g_n (or g_n at infinity).
    PreimagePoly {
        #[command(flatten)]
        #[serde(flatten)]
        level: LevelArgs,
    },
    /// Factor a polynomial in z.
    Factor {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
    },
    /// Irreducible factor counts of P_1, ..., P_N.
    Counts {
        #[command(flatten)]
        #[serde(flatten)]
        level: LevelArgs,
    },
    /// Factor tree above the base point.
    Tree {
        #[command(flatten)]
        #[serde(flatten)]
        level: LevelArgs,
    },
    /// Certify a uniform bound on the factor counts.
    Certify {
        #[command(flatten)]
        #[serde(flatten)]
        at: PointArgs,
        /// A prime over Q; `t` or a monic irreducible in t over GF(p)(t).
        #[arg(long)]
        val: String,
        #[arg(long, value_enum, default_value_t = Strategy::All)]
        strategy: Strategy,
        /// Level of the preimage polynomial checked by the Eisenstein bound.
        #[arg(long = "N", short = 'N', default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        orbit_cap: usize,
    },
    /// Whether a map over GF(q) permutes P^1 of every finite extension.
    Bijectivity {
        #[command(flatten)]
        #[serde(flatten)]
        map: MapArgs,
    },
    /// Compare factor-count parity with the discriminant's quadratic character.
    Stickelberger {
        #[arg(long)]
        field: String,
        #[arg(long)]
        poly: String,
    },
    /// Finite-horizon settledness estimate over GF(q).
    Settled {
        #[command(flatten)]
        #[serde(flatten)]
        level: LevelArgs,
    },
    /// Named map families.
    Preset {
        #[arg(long = "family", value_enum)]
        family: Preset,
        /// Degree for power and chebyshev.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Parameter a of z^2 + 1/a.
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Orbit { .. } => "orbit",
            Command::Iterate { .. } => "iterate",
            Command::PreimagePoly { .. } => "preimage-poly",
            Command::Factor { .. } => "factor",
            Command::Counts { .. } => "counts",
            Command::Tree { .. } => "tree",
            Command::Certify { .. } => "certify",
            Command::Bijectivity { .. } => "bijectivity",
            Command::Stickelberger { .. } => "stickelberger",
            Command::Settled { .. } => "settled",
            Command::Preset { .. } => "preset",
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub command: Value,
    pub seed: u64,
    pub result: Value,
}

/// Whether a command ran to completion or a certificate was refused.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Refused,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Refused => 2,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => 3,
        Error::Parse { .. } | Error::Argument(_) | Error::Domain(_) | Error::Unsupported(_) => 4,
        Error::Invariant(_) => 5,
    }
}

/// Machine-readable form of an error.
pub fn error_json(e: &Error) -> Value {
    let code = match e {
        Error::Argument(_) => "argument",
        Error::Domain(_) => "domain",
        Error::Resource(_) => "resource",
        Error::Parse { .. } => "parse",
        Error::Unsupported(_) => "unsupported",
        Error::Invariant(_) => "invariant",
    };
    let mut v = json!({ "error": { "code": code, "exit": exit_code(e), "message": e.to_string() } });
    if let Error::Parse { offset, .. } = e {
        v["error"]["offset"] = json!(offset);
    }
    v
}

/// Prefixes a parse error with the flag it came from.
fn in_flag<T>(flag: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { offset, message } => Error::Parse {
            offset,
            message: format!("--{flag}: {message}"),
        },
        other => other,
    })
}

macro_rules! with_field {
    ($fs:expr, $k:ident => $body:expr) => {
        match $fs {
            FieldSpec::Q($k) => $body,
            FieldSpec::Gf($k) => $body,
            FieldSpec::FuncField($k) => $body,
        }
    };
}

pub fn run(cli: &Cli) -> Result<(Report, Status)> {
    let (result, status) = dispatch(cli)?;
    let report = Report {
        schema: SCHEMA.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: serde_json::to_value(&cli.command).expect("serializable arguments"),
        seed: cli.seed,
        result,
    };
    Ok((report, status))
}

fn field(s: &str) -> Result<FieldSpec> {
    in_flag("field", parse_field(s))
}

fn dispatch(cli: &Cli) -> Result<(Value, Status)> {
    let seed = cli.seed;
    let cap_or = |default: usize| cli.degree_cap.unwrap_or(default);
    let ok = |v: Value| Ok((v, Status::Ok));
    match &cli.command {
        Command::Orbit { at, cap } => match &field(&at.map.field)? {
            // pigeonhole: orbits over a finite field always close up
            FieldSpec::Gf(k) => ok(orbit_json(k, at, usize::MAX)?),
            FieldSpec::Q(k) => ok(orbit_json(k, at, *cap)?),
            FieldSpec::FuncField(k) => ok(orbit_json(k, at, *cap)?),
        },
        Command::Iterate { map, n } => with_field!(&field(&map.field)?, k => {
            let phi = in_flag("map", parse_map(k, &map.map))?;
            let it = phi.iterate(*n, cap_or(DEFAULT_DEGREE_CAP))?;
            ok(map_json(&it))
        }),
        Command::PreimagePoly { level } => with_field!(&field(&level.at.map.field)?, k => {
            let (phi, alpha) = map_and_point(k, &level.at)?;
            let p = preimage_poly(&phi, level.n, &alpha, cap_or(DEFAULT_DEGREE_CAP))?;
            ok(json!({ "degree": p.degree(), "poly": p.format(k, "z") }))
        }),
        Command::Factor { field: f, poly } => with_field!(&field(f)?, k => {
            let p = in_flag("poly", parse_poly(k, poly))?;
            if p.is_zero() {
                return Err(Error::argument("cannot factor the zero polynomial"));
            }
            let cap = cap_or(k.default_degree_cap());
            if p.degree().unwrap_or(0) > cap {
                return Err(Error::Resource(format!("degree {} exceeds the cap {cap}", p.degree().unwrap())));
            }
            ok(factor_json(k, &k.factor(&p, seed)?))
        }),
        Command::Counts { level } => with_field!(&field(&level.at.map.field)?, k => {
            let (phi, alpha) = map_and_point(k, &level.at)?;
            let seq = factor_count_sequence(&phi, &alpha, level.n, seed, cap_or(k.default_degree_cap()))?;
            let mut v = to_json(&seq);
            v["counts"] = json!(seq.counts());
            ok(v)
        }),
        Command::Tree { level } => with_field!(&field(&level.at.map.field)?, k => {
            let (phi, alpha) = map_and_point(k, &level.at)?;
            ok(to_json(&tree_profile(&phi, &alpha, level.n, seed, cap_or(k.default_degree_cap()))?))
        }),
        Command::Certify { at, val, strategy, n, orbit_cap } => {
            let fs = field(&at.map.field)?;
            let v = in_flag("val", parse_valuation(&fs, val))?;
            let opts = FullmainOptions {
                orbit_cap: *orbit_cap,
                degree_cap: cap_or(DEFAULT_DEGREE_CAP),
            };
            let job = Certify { strategy: *strategy, n: *n, opts };
            match (&fs, &v) {
                (FieldSpec::Q(k), AnyValuation::PAdic(v)) => job.run(k, v, at),
                (FieldSpec::FuncField(k), AnyValuation::Place(v)) => job.run(k, v, at),
                _ => Err(Error::Unsupported(format!("certificates over {}", fs.name()))),
            }
        }
        Command::Bijectivity { map } => {
            let k = gf_only(&field(&map.field)?, "bijectivity")?;
            let phi = in_flag("map", parse_map(&k, &map.map))?;
            let rep = is_bijective_on_residue_extensions(&phi)?;
            let mut v = to_json(&rep);
            v["map"] = json!(phi.format());
            ok(v)
        }
        Command::Stickelberger { field: f, poly } => {
            let k = gf_only(&field(f)?, "stickelberger")?;
            let p = in_flag("poly", parse_poly(&k, poly))?;
            ok(to_json(&stickelberger_audit(&k, &p, seed)?))
        }
        Command::Settled { level } => {
            let k = gf_only(&field(&level.at.map.field)?, "settled")?;
            let (phi, alpha) = map_and_point(&k, &level.at)?;
            ok(to_json(&settledness_estimate(&phi, &alpha, level.n, seed, cap_or(k.default_degree_cap()))?))
        }
        Command::Preset { family, d, a, field: f } => {
            let fs = field(f)?;
            match family {
                Preset::Quad => {
                    let FieldSpec::Q(k) = &fs else {
                        return Err(Error::Unsupported("the quadratic family is defined over Q".into()));
                    };
                    let a: Rat = in_flag("a", parse_element(k, a))?;
                    ok(map_json(&quad_family(&a)?))
                }
                Preset::Power => with_field!(&fs, k => ok(map_json(&power_map(k, *d)?))),
                Preset::Chebyshev => with_field!(&fs, k => ok(map_json(&chebyshev(k, *d)?))),
            }
        }
    }
}

fn gf_only(fs: &FieldSpec, what: &str) -> Result<GaloisField> {
    match fs {
        FieldSpec::Gf(k) => Ok(k.clone()),
        other => Err(Error::Unsupported(format!("{what} needs a finite field, not {}", other.name()))),
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn map_and_point<F: Field>(k: &F, at: &PointArgs) -> Result<(RationalMap<F>, ProjPoint<F::Elem>)> {
    let phi = in_flag("map", parse_map(k, &at.map.map))?;
    let alpha = in_flag("point", parse_point(k, &at.point))?;
    Ok((phi, alpha))
}

fn map_json<F: Field>(phi: &RationalMap<F>) -> Value {
    let k = phi.field();
    json!({
        "map": phi.format(),
        "degree": phi.degree(),
        "numerator": phi.numerator().format(k, "z"),
        "denominator": phi.denominator().format(k, "z"),
    })
}

fn factor_json<F: Field>(k: &F, rep: &FactorReport<F::Elem>) -> Value {
    let factors: Vec<Value> = rep
        .factors
        .iter()
        .map(|(g, m)| json!({ "factor": g.format(k, "z"), "degree": g.degree(), "multiplicity": m }))
        .collect();
    json!({
        "unit": k.format_elem(&rep.unit),
        "factors": factors,
        "total_count": rep.total_count,
        "degrees": rep.degree_multiset(),
    })
}

fn orbit_json<F: Field>(k: &F, at: &PointArgs, cap: usize) -> Result<Value> {
    let (phi, alpha) = map_and_point(k, at)?;
    let rec = phi.orbit(&alpha, cap);
    let status = match rec.status {
        OrbitStatus::Periodic { period } => json!({ "kind": "periodic", "period": period }),
        OrbitStatus::Preperiodic { tail, period } => json!({ "kind": "preperiodic", "tail": tail, "period": period }),
        OrbitStatus::Unresolved { cap, steps } => json!({ "kind": "unresolved", "cap": cap, "steps": steps }),
    };
    let points: Vec<String> = rec.points.iter().map(|p| format_point(k, p)).collect();
    Ok(json!({ "points": points, "status": status }))
}

struct Certify {
    strategy: Strategy,
    n: usize,
    opts: FullmainOptions,
}

impl Certify {
    fn run<F, V>(&self, k: &F, v: &V, at: &PointArgs) -> Result<(Value, Status)>
    where
        F: Factorize,
        V: Valuation<F, Residue = GaloisField>,
    {
        let (phi, alpha) = map_and_point(k, at)?;
        let zero = ProjPoint::Finite(k.zero());
        let all = self.strategy == Strategy::All;
        let mut outcomes: Vec<(Strategy, Outcome)> = Vec::new();
        let want = |s: Strategy| all || self.strategy == s;

        if want(Strategy::Eisenstein) {
            let p = preimage_poly(&phi, self.n, &alpha, self.opts.degree_cap)?;
            if p.degree().unwrap_or(0) >= 1 {
                outcomes.push((Strategy::Eisenstein, eisenstein_bound(k, &p, v)?));
            } else if !all {
                return Err(Error::argument("the preimage polynomial is constant"));
            }
        }
        if want(Strategy::Evstab1) {
            if alpha == zero {
                outcomes.push((Strategy::Evstab1, evstab1_certificate(&phi, v)?));
            } else if !all {
                return Err(Error::argument("evstab1 bounds the numerators f_n; use --point 0"));
            }
        }
        if want(Strategy::Evstab2) {
            outcomes.push((Strategy::Evstab2, evstab2_certificate(&phi, v, &alpha)?));
        }
        if want(Strategy::Polycor) {
            if phi.is_polynomial() {
                outcomes.push((Strategy::Polycor, polycor_bound(&phi, v, &alpha)?));
            } else if !all {
                return Err(Error::argument("polycor needs a polynomial map"));
            }
        }
        if want(Strategy::Fullmain) {
            outcomes.push((Strategy::Fullmain, fullmain_certificate(&phi, v, &alpha, self.opts)?));
        }

        // the Eisenstein bound covers one polynomial only, so it is not a uniform bound
        let best = outcomes
            .iter()
            .filter(|(s, _)| *s != Strategy::Eisenstein)
            .filter_map(|(_, o)| o.certified().map(|c| c.bound))
            .min();
        let certified = outcomes.iter().any(|(_, o)| o.certified().is_some());
        let status = if certified { Status::Ok } else { Status::Refused };
        let results: Vec<Value> = outcomes
            .iter()
            .map(|(s, o)| {
                let mut v = to_json(o);
                v["strategy"] = to_json(s);
                v
            })
            .collect();
        Ok((
            json!({
                "map": phi.format(),
                "point": format_point(k, &alpha),
                "valuation": v.describe(),
                "uniform_bound": best,
                "certificates": results,
            }),
            status,
        ))
    }
}

/// Renders a report as aligned `key  value` lines.
pub fn render_text(report: &Report) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    flatten("", &to_json(report), &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |s: &str| {
        if prefix.is_empty() {
            s.to_string()
        } else {
            format!("{prefix}.{s}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, rows)),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            rows.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, rows)),
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Report text for stdout, terminated by a newline.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Text => render_text(report),
    }
}
