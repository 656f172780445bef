use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use rmt_autocorr::contour::ContourConfig;
use rmt_autocorr::haar::{char_poly_product, monte_carlo_average, Family, GroupSpec};
use rmt_autocorr::identities::{identity_trial, IdentityMaxima};
use rmt_autocorr::orthogonal::{
    ominus_autocorr_det, ominus_autocorr_eps, ominus_autocorr_quadrature, ominus_raw_average, orthogonal_contour,
    so_autocorr_det, so_autocorr_eps, so_autocorr_quadrature, so_autocorr_schur,
};
use rmt_autocorr::scalar::{cabs_f64, lift, lift_mp};
use rmt_autocorr::symcore::{min_separation, PrecisionConfig, PrecisionMode};
use rmt_autocorr::symplectic::{
    sp_autocorr_contour, sp_autocorr_det, sp_autocorr_eps, sp_autocorr_quadrature, sp_autocorr_schur,
    sp_autocorr_subsets, sp_large_n_ratio,
};
use rmt_autocorr::unitary::{
    autocorr_comb, autocorr_contour, autocorr_det, autocorr_quadrature, autocorr_schur, weyl_integrand, UnitaryQuery,
};
use rmt_autocorr::{Error, Mp, C64};

use crate::json::{complex, num, Report};
use crate::parse::{parse_list, Literal};

pub const Z_LIMIT: f64 = 4.0;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Schur,
    Det,
    #[value(alias = "comb")]
    Eps,
    Subsets,
    Contour,
    Quadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Schur => "schur",
            Method::Det => "det",
            Method::Eps => "eps",
            Method::Subsets => "subsets",
            Method::Contour => "contour",
            Method::Quadrature => "quadrature",
        }
    }

    fn double_only(self) -> bool {
        matches!(self, Method::Contour | Method::Quadrature)
    }
}

/// Exact routes available for a family, in report order.
pub fn default_routes(family: Family) -> Vec<Method> {
    match family {
        Family::Unitary => vec![Method::Schur, Method::Det, Method::Eps],
        Family::Symplectic => vec![Method::Schur, Method::Det, Method::Eps, Method::Subsets],
        Family::SpecialOrthogonalEven => vec![Method::Schur, Method::Det, Method::Eps],
        Family::OrthogonalMinus => vec![Method::Det, Method::Eps],
    }
}

/// A fully resolved group, size and shift list.
pub struct Query {
    pub family: Family,
    pub size: usize,
    pub m: usize,
    pub shifts: Vec<C64>,
    /// Decimal text of the shifts when they were typed in directly.
    pub text: Option<Vec<Literal>>,
    pub alphas: Option<Vec<C64>>,
    pub precision: PrecisionConfig,
}

fn family_from_name(name: &str) -> Family {
    match name {
        "u" => Family::Unitary,
        "usp" => Family::Symplectic,
        "so" => Family::SpecialOrthogonalEven,
        _ => Family::OrthogonalMinus,
    }
}

pub struct RawQuery<'a> {
    pub group: &'a str,
    pub size: usize,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub shifts: Option<&'a str>,
    pub alpha: Option<&'a str>,
    pub digits: Option<u32>,
    pub tol: Option<f64>,
}

pub fn precision(digits: Option<u32>, tol: Option<f64>) -> CliResult<PrecisionConfig> {
    match digits {
        None => Ok(PrecisionConfig::double(tol.unwrap_or(1e-9))),
        Some(d) => {
            let default = 10f64.powi(-(2 * d as i32) / 3);
            Ok(PrecisionConfig::extended(d, tol.unwrap_or(default))?)
        }
    }
}

/// `w = e^{-α}` for `U(N)` and `USp(2N)`, `w = e^{α}` for `SO(2N)` and `O⁻(2N)`.
fn alpha_sign(family: Family) -> f64 {
    match family {
        Family::Unitary | Family::Symplectic => -1.0,
        _ => 1.0,
    }
}

impl Query {
    pub fn resolve(raw: RawQuery<'_>, random: Option<(usize, u64)>) -> CliResult<Query> {
        let family = family_from_name(raw.group);
        if raw.size == 0 {
            return Err(CliError::Usage("--N must be at least 1".into()));
        }
        let sign = alpha_sign(family);
        let (shifts, text, alphas) = match (raw.shifts, raw.alpha, random) {
            (Some(s), None, None) => {
                let lits = parse_list(s).map_err(CliError::Usage)?;
                (lits.iter().map(Literal::to_c64).collect(), Some(lits), None)
            }
            (None, Some(a), None) => {
                let al: Vec<C64> = parse_list(a).map_err(CliError::Usage)?.iter().map(Literal::to_c64).collect();
                (al.iter().map(|x| (sign * x).exp()).collect(), None, Some(al))
            }
            (None, None, Some((k, seed))) => (random_shifts(k, seed), None, None),
            _ => return Err(CliError::Usage("give exactly one of --shifts, --alpha or --random".into())),
        };
        if shifts.is_empty() {
            return Err(CliError::Usage("need at least one shift".into()));
        }
        if let Some(n) = raw.n {
            if n != shifts.len() {
                return Err(CliError::Usage(format!("--n {n} but {} shifts were given", shifts.len())));
            }
        }
        let m = match (family, raw.m) {
            (Family::Unitary, Some(m)) if m <= shifts.len() => m,
            (Family::Unitary, Some(m)) => return Err(CliError::Usage(format!("--m {m} exceeds n = {}", shifts.len()))),
            (Family::Unitary, None) => return Err(CliError::Usage("--group u needs --m".into())),
            (_, Some(_)) => return Err(CliError::Usage("--m only applies to --group u".into())),
            (_, None) => 0,
        };
        let precision = precision(raw.digits, raw.tol)?;
        Ok(Query { family, size: raw.size, m, shifts, text, alphas, precision })
    }

    fn digits(&self) -> Option<u32> {
        match self.precision.mode {
            PrecisionMode::Double => None,
            PrecisionMode::Extended { digits } => Some(digits),
        }
    }

    fn mp_shifts(&self, digits: u32) -> CliResult<Vec<Complex<Mp>>> {
        match &self.text {
            Some(lits) => lits.iter().map(|l| l.to_mp(digits).map_err(CliError::Usage)).collect(),
            None => Ok(self.shifts.iter().map(|&z| lift_mp(z, digits)).collect()),
        }
    }

    /// Contour parameters: given directly, or `α = ∓ log w`.
    fn contour_alphas(&self) -> CliResult<Vec<C64>> {
        if let Some(a) = &self.alphas {
            return Ok(a.clone());
        }
        if self.shifts.iter().any(|w| w.norm() == 0.0) {
            return Err(CliError::Usage("the contour route needs nonzero shifts".into()));
        }
        let sign = alpha_sign(self.family);
        Ok(self.shifts.iter().map(|w| sign * w.ln()).collect())
    }

    pub fn echo(&self) -> Value {
        let mut q = json!({
            "group": self.family.name(),
            "N": self.size,
            "shifts": self.shifts.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        });
        if self.family == Family::Unitary {
            q["m"] = json!(self.m);
            q["n"] = json!(self.shifts.len());
        }
        if let Some(a) = &self.alphas {
            q["alpha"] = Value::Array(a.iter().map(|&z| complex(z)).collect());
        }
        q
    }

    pub fn precision_echo(&self) -> Value {
        precision_echo(&self.precision)
    }
}

pub fn precision_echo(p: &PrecisionConfig) -> Value {
    match p.mode {
        PrecisionMode::Double => json!({ "mode": "double", "agreement_tol": num(p.agreement_tol) }),
        PrecisionMode::Extended { digits } => {
            json!({ "mode": "extended", "digits": digits, "agreement_tol": num(p.agreement_tol) })
        }
    }
}

fn random_shifts(k: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let w: Vec<C64> = (0..k)
            .map(|_| C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        if min_separation(&w) > 1e-2 {
            return w;
        }
    }
}

fn unsupported(q: &Query, method: Method) -> CliError {
    CliError::Usage(format!("method {} is not available for --group {}", method.name(), q.family.name()))
}

fn exact_route<T: Report>(q: &Query, method: Method, w: &[Complex<T>]) -> CliResult<Complex<T>> {
    let n = q.size;
    let v = match (q.family, method) {
        (Family::Unitary, _) => {
            let uq = UnitaryQuery::new(n, q.m, w.to_vec())?;
            match method {
                Method::Schur => autocorr_schur(&uq),
                Method::Det => autocorr_det(&uq)?,
                Method::Eps => autocorr_comb(&uq)?,
                _ => return Err(unsupported(q, method)),
            }
        }
        (Family::Symplectic, Method::Schur) => sp_autocorr_schur(n, w)?,
        (Family::Symplectic, Method::Det) => sp_autocorr_det(n, w)?,
        (Family::Symplectic, Method::Eps) => sp_autocorr_eps(n, w)?,
        (Family::Symplectic, Method::Subsets) => sp_autocorr_subsets(n, w)?,
        (Family::SpecialOrthogonalEven, Method::Schur) => so_autocorr_schur(n, w)?,
        (Family::SpecialOrthogonalEven, Method::Det) => so_autocorr_det(n, w)?,
        (Family::SpecialOrthogonalEven, Method::Eps) => so_autocorr_eps(n, w)?,
        (Family::OrthogonalMinus, Method::Det) => ominus_autocorr_det(n, w)?,
        (Family::OrthogonalMinus, Method::Eps) => ominus_autocorr_eps(n, w)?,
        _ => return Err(unsupported(q, method)),
    };
    Ok(v)
}

fn double_route(q: &Query, method: Method, nodes: Option<usize>) -> CliResult<C64> {
    let n = q.size;
    let w = &q.shifts;
    let v = match method {
        Method::Contour => {
            let cfg = ContourConfig::with_nodes(nodes.unwrap_or(128))?;
            let a = q.contour_alphas()?;
            match q.family {
                Family::Unitary => autocorr_contour(n, q.m, &a, &cfg)?,
                Family::Symplectic => sp_autocorr_contour(n, &a, &cfg)?,
                fam => orthogonal_contour(fam, n, &a, &cfg)?,
            }
        }
        Method::Quadrature => match q.family {
            Family::Unitary => autocorr_quadrature(&UnitaryQuery::new(n, q.m, w.clone())?, nodes)?,
            Family::Symplectic => sp_autocorr_quadrature(n, w, nodes)?,
            Family::SpecialOrthogonalEven => so_autocorr_quadrature(n, w, nodes)?,
            Family::OrthogonalMinus => ominus_autocorr_quadrature(n, w, nodes)?,
        },
        _ => unreachable!("exact routes go through exact_route"),
    };
    Ok(v)
}

fn route<T: Report>(q: &Query, method: Method, w: &[Complex<T>], nodes: Option<usize>) -> CliResult<Complex<T>> {
    if !method.double_only() {
        return exact_route(q, method, w);
    }
    if q.digits().is_some() {
        return Err(CliError::Numeric(Error::PrecisionUnsupported(method.name())));
    }
    Ok(lift(double_route(q, method, nodes)?))
}

fn finish(mut v: Value, timing: bool, start: Instant) -> Value {
    if timing {
        v["wall_time_s"] = num(start.elapsed().as_secs_f64());
    }
    v
}

pub fn compute(q: &Query, method: Method, nodes: Option<usize>, timing: bool) -> CliResult<Value> {
    let start = Instant::now();
    let value = match q.digits() {
        None => f64::report(&route(q, method, &q.shifts, nodes)?),
        Some(d) => Mp::report(&route(q, method, &q.mp_shifts(d)?, nodes)?),
    };
    let v = json!({
        "command": "compute",
        "method": method.name(),
        "value": value,
        "error_estimate": null,
        "query": q.echo(),
        "precision": q.precision_echo(),
    });
    Ok(finish(v, timing, start))
}

/// Pairwise `|a - b| / max(|a|, |b|, 1)`, computed at the working precision.
fn deviation<T: Report>(a: &Complex<T>, b: &Complex<T>) -> f64 {
    let scale = cabs_f64(a).max(cabs_f64(b)).max(1.0);
    cabs_f64(&(a.clone() - b.clone())) / scale
}

fn crosscheck_at<T: Report>(
    q: &Query,
    routes: &[Method],
    w: &[Complex<T>],
    nodes: Option<usize>,
    timing: bool,
) -> CliResult<(Value, bool)> {
    let mut values = Vec::with_capacity(routes.len());
    let mut table = Map::new();
    let mut times = Map::new();
    for &m in routes {
        let t = Instant::now();
        let v = route(q, m, w, nodes).map_err(|e| match e {
            CliError::Numeric(err) => CliError::Numeric(tag_route(err, m)),
            other => other,
        })?;
        times.insert(m.name().into(), num(t.elapsed().as_secs_f64()));
        table.insert(m.name().into(), json!({ "value": T::report(&v) }));
        values.push(v);
    }
    let mut devs = Map::new();
    let mut worst: f64 = 0.0;
    for i in 0..routes.len() {
        for j in i + 1..routes.len() {
            let d = deviation(&values[i], &values[j]);
            worst = worst.max(d);
            devs.insert(format!("{}/{}", routes[i].name(), routes[j].name()), num(d));
        }
    }
    let pass = worst <= q.precision.agreement_tol;
    let mut v = json!({
        "command": "crosscheck",
        "routes": table,
        "deviations": devs,
        "max_deviation": num(worst),
        "tol": num(q.precision.agreement_tol),
        "pass": pass,
        "query": q.echo(),
        "precision": q.precision_echo(),
    });
    if timing {
        v["route_wall_time_s"] = Value::Object(times);
    }
    Ok((v, pass))
}

/// Remember which route failed; the error name is unchanged.
fn tag_route(err: Error, m: Method) -> Error {
    match err {
        Error::PoleHit(msg) => Error::PoleHit(format!("{} route: {msg}", m.name())),
        other => other,
    }
}

pub fn crosscheck(q: &Query, routes: &[Method], nodes: Option<usize>, timing: bool) -> CliResult<(Value, bool)> {
    if routes.is_empty() {
        return Err(CliError::Usage("a cross-check needs at least one route".into()));
    }
    let start = Instant::now();
    let (v, pass) = match q.digits() {
        None => crosscheck_at(q, routes, &q.shifts, nodes, timing)?,
        Some(d) => crosscheck_at(q, routes, &q.mp_shifts(d)?, nodes, timing)?,
    };
    Ok((finish(v, timing, start), pass))
}

pub struct IdentityArgs {
    pub trials: u64,
    pub seed: u64,
    pub max_n: usize,
    pub digits: Option<u32>,
    pub tol: Option<f64>,
}

fn disk_point(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(rng.random_range(0.0..1.5), rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn identities(a: &IdentityArgs, timing: bool) -> CliResult<(Value, bool)> {
    if a.max_n == 0 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let start = Instant::now();
    let p = match a.digits {
        None => PrecisionConfig::double(a.tol.unwrap_or(1e-10)),
        Some(d) => PrecisionConfig::extended(d, a.tol.unwrap_or(10f64.powi(-(3 * d as i32) / 4)))?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut max = IdentityMaxima::default();
    for trial in 0..a.trials {
        let n = 1 + (trial as usize) % a.max_n;
        let w: Vec<C64> = loop {
            let w: Vec<C64> = (0..n).map(|_| disk_point(&mut rng)).collect();
            if min_separation(&w) > 1e-3 {
                break w;
            }
        };
        let xs: Vec<C64> = (0..20).map(|_| disk_point(&mut rng)).collect();
        let lead = disk_point(&mut rng);
        let t = match a.digits {
            None => identity_trial(&w, &xs, lead)?,
            Some(d) => {
                let lm = |v: &[C64]| v.iter().map(|&z| lift_mp(z, d)).collect::<Vec<_>>();
                identity_trial(&lm(&w), &lm(&xs), lift_mp(lead, d))?
            }
        };
        max.merge(&t);
    }
    let pass = max.worst() <= p.agreement_tol;
    let v = json!({
        "command": "identities",
        "trials": a.trials,
        "seed": a.seed,
        "max_n": a.max_n,
        "max_residuals": {
            "identity1": num(max.identity1),
            "lemma1": num(max.lemma1),
            "identity2": num(max.identity2),
            "fn_witness_points": num(max.fn_witness),
            "fn_random_points": num(max.fn_random),
            "identity3": num(max.identity3),
            "identity4": num(max.identity4),
        },
        "identity3_plus_exponent": num(max.identity3_plus),
        "tol": num(p.agreement_tol),
        "pass": pass,
        "precision": precision_echo(&p),
    });
    Ok((finish(v, timing, start), pass))
}

pub fn montecarlo(q: &Query, samples: usize, seed: u64, timing: bool) -> CliResult<(Value, bool)> {
    if q.digits().is_some() {
        return Err(CliError::Numeric(Error::PrecisionUnsupported("montecarlo")));
    }
    let start = Instant::now();
    let group = GroupSpec::new(q.family, q.size)?;
    let w = q.shifts.clone();
    let (est, exact, method) = match q.family {
        Family::Unitary => {
            let m = q.m;
            let est = monte_carlo_average(group, |a| weyl_integrand(m, &w, a), seed, samples)?;
            (est, autocorr_schur(&UnitaryQuery::new(q.size, m, w.clone())?), "schur")
        }
        fam => {
            let est = monte_carlo_average(
                group,
                |a| char_poly_product(group, a, &w).expect("length checked"),
                seed,
                samples,
            )?;
            let exact = match fam {
                Family::Symplectic => sp_autocorr_schur(q.size, &w)?,
                Family::SpecialOrthogonalEven => so_autocorr_schur(q.size, &w)?,
                _ => ominus_raw_average(q.size, &w)?,
            };
            (est, exact, if fam == Family::OrthogonalMinus { "eps" } else { "schur" })
        }
    };
    let z = est.z_score(exact);
    let pass = z <= Z_LIMIT;
    let mut v = json!({
        "command": "montecarlo",
        "samples": est.samples,
        "seed": seed,
        "mean": complex(est.mean),
        "std_error": num(est.std_error),
        "error_estimate": num(est.std_error),
        "exact": complex(exact),
        "exact_method": method,
        "z_score": num(z),
        "z_limit": num(Z_LIMIT),
        "pass": pass,
        "query": q.echo(),
        "precision": q.precision_echo(),
    });
    if q.family == Family::OrthogonalMinus {
        // the coset average itself; the signed convention differs by (-1)^k
        v["exact_signed"] = complex(ominus_autocorr_eps(q.size, &w)?);
    }
    Ok((finish(v, timing, start), pass))
}

pub fn scaling(b: &str, sizes: &[usize]) -> CliResult<String> {
    let b: Vec<C64> = parse_list(b).map_err(CliError::Usage)?.iter().map(Literal::to_c64).collect();
    if sizes.is_empty() {
        return Err(CliError::Usage("--sizes needs at least one N".into()));
    }
    let mut out = String::from("N,ratio_re,ratio_im,abs_err\n");
    for &n in sizes {
        let r = sp_large_n_ratio(&b, n)?;
        out.push_str(&format!("{n},{:.16e},{:.16e},{:.16e}\n", r.re, r.im, (r - 1.0).norm()));
    }
    Ok(out)
}
