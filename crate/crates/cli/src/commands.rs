//! One function per command: parameters in, JSON payload out.

use jetmorse::ideal::{closure_power, euler_canonical_check, membership, MonomialIdeal, RationalPower};
use jetmorse::jet_algebra::{dim_gg, enumerate_profiles, faa_di_bruno, push_jet, scale_jet, JetPoint, Poly, TruncatedMap};
use jetmorse::morse::{
    bounded_sections_p1, euler_characteristic, exact_cohomology, lower_bound_q, morse_integrals_with, rr_estimate,
    sm_alternating, wm_bound, CurvatureField, GridSpec, ModelKind, ModelManifold, MorseOptions, MorseSpectrum, P1Point,
    QDivisorMetricP1, DEFAULT_DEGENERATE_THRESHOLD, DEFAULT_TOL,
};
use jetmorse::tower::{
    bound_5_11, calibrate_k1, certify_bigness, gg_morse_spectrum, rhs_coefficient, BoundVariant, EpsilonSchedule, EtaForms,
    GgProblem, Proposal, VBundleCurvature,
};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::config::{rational_value, Command, Params};
use crate::error::{CliError, CliResult};

/// The scalar a sweep tabulates for each run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Summary {
    pub value: f64,
    pub stderr: Option<f64>,
    pub reference: Option<f64>,
    pub ratio: Option<f64>,
    pub ratio_stderr: Option<f64>,
}

impl Summary {
    fn value(value: f64) -> Self {
        Summary { value, ..Summary::default() }
    }
}

/// Result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub payload: Value,
    /// Grid and sample-size details echoed in the record's provenance.
    pub provenance: Map<String, Value>,
    pub summary: Summary,
    /// Set when a numerical diagnostic failed; the run still reports.
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn new(payload: Value, summary: Summary) -> Self {
        Outcome { payload, provenance: Map::new(), summary, diagnostic: None }
    }
}

pub fn dispatch(command: Command, params: Map<String, Value>, seed: Option<u64>) -> CliResult<Outcome> {
    let mut p = Params::new(params);
    let out = match command {
        Command::Dim => dim(&mut p),
        Command::Jets => jets(&mut p),
        Command::Morse => morse(&mut p),
        Command::Bounded => bounded(&mut p),
        Command::Closure => closure(&mut p),
        Command::Gg => gg(&mut p, seed.unwrap_or(0)),
        Command::Certify => certify(&mut p),
    }?;
    p.finish()?;
    Ok(out)
}

fn usize_of(p: &mut Params, key: &str) -> CliResult<usize> {
    let v = p.uint(key)?;
    usize::try_from(v).map_err(|_| CliError::key(key, "too large"))
}

fn positive(p: &mut Params, key: &str) -> CliResult<usize> {
    let v = usize_of(p, key)?;
    if v == 0 {
        return Err(CliError::key(key, "must be at least 1"));
    }
    Ok(v)
}

fn biguint_json(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn rat_json(q: &BigRational) -> Value {
    json!(q.to_string())
}

fn dim(p: &mut Params) -> CliResult<Outcome> {
    let k = positive(p, "k")?;
    let m = usize_of(p, "m")?;
    let r = positive(p, "r")?;
    let list = p.bool_or("profiles", false)?;
    let d = dim_gg(k, m, r)?;
    let mut payload = json!({ "k": k, "m": m, "r": r, "dimension": biguint_json(&d) });
    if list {
        if d > BigUint::from(100_000u32) {
            return Err(CliError::key("profiles", "more than 100000 profiles; drop the listing"));
        }
        let profiles: Vec<Vec<u32>> = enumerate_profiles(k, m, r)?.map(|e| e.concatenated()).collect();
        payload["profiles"] = json!(profiles);
    }
    Ok(Outcome::new(payload, Summary::value(d.to_f64().unwrap_or(f64::INFINITY))))
}

fn rational_list(key: &str, v: &Value) -> CliResult<Vec<BigRational>> {
    match v {
        Value::Array(a) => a.iter().map(|x| rational_value(key, x)).collect(),
        _ => Err(CliError::key(key, "expected an array of rationals")),
    }
}

fn parse_jet(v: Value) -> CliResult<JetPoint<BigRational>> {
    let Value::Object(o) = v else {
        return Err(CliError::key("jet", "expected {\"base\": [...], \"xis\": [[...], ...]}"));
    };
    if let Some(k) = o.keys().find(|k| *k != "base" && *k != "xis") {
        return Err(CliError::key(format!("jet.{k}"), "unknown key"));
    }
    let base = rational_list("jet.base", o.get("base").ok_or_else(|| CliError::key("jet.base", "missing"))?)?;
    let xis = match o.get("xis") {
        Some(Value::Array(a)) => a.iter().map(|x| rational_list("jet.xis", x)).collect::<CliResult<Vec<_>>>()?,
        _ => return Err(CliError::key("jet.xis", "expected an array of vectors")),
    };
    JetPoint::new(base, xis).map_err(|e| CliError::key("jet", e.to_string()))
}

fn jet_json(j: &JetPoint<BigRational>) -> Value {
    json!({
        "base": j.base().iter().map(rat_json).collect::<Vec<_>>(),
        "xis": j.xis().iter().map(|x| x.iter().map(rat_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `[[[e_1, ..., e_n], "c"], ...]` for each component.
fn parse_map(v: Value, order: u32) -> CliResult<TruncatedMap<BigRational>> {
    let bad = || CliError::key("map", "expected one list of [exponents, coefficient] terms per component");
    let Value::Array(comps) = v else { return Err(bad()) };
    let n = comps.len();
    let mut polys = Vec::with_capacity(n);
    for comp in comps {
        let Value::Array(terms) = comp else { return Err(bad()) };
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let Some([Value::Array(e), c]) = t.as_array().map(Vec::as_slice) else { return Err(bad()) };
            let exps = e.iter().map(|x| x.as_u64().and_then(|v| u32::try_from(v).ok())).collect::<Option<Vec<u32>>>().ok_or_else(bad)?;
            parsed.push((exps, rational_value("map", c)?));
        }
        polys.push(Poly::from_terms(n, parsed).map_err(|e| CliError::key("map", e.to_string()))?);
    }
    TruncatedMap::new(polys, order).map_err(|e| CliError::key("map", e.to_string()))
}

fn jets(p: &mut Params) -> CliResult<Outcome> {
    let op = p.string("op")?;
    match op.as_str() {
        "faa_di_bruno" => {
            let j = positive(p, "j")?;
            let table = faa_di_bruno(j)?;
            let terms: Vec<Value> = table.iter().map(|(idx, c)| json!({ "indices": idx, "coefficient": biguint_json(c) })).collect();
            Ok(Outcome::new(json!({ "op": op, "order": j, "terms": terms }), Summary::value(table.len() as f64)))
        }
        "scale" => {
            let lambda = p.rational("lambda")?;
            let jet = parse_jet(p.value("jet")?)?;
            let out = scale_jet(&lambda, &jet).map_err(|e| CliError::key("lambda", e.to_string()))?;
            Ok(Outcome::new(json!({ "op": op, "jet": jet_json(&out) }), Summary::default()))
        }
        "push" => {
            let jet = parse_jet(p.value("jet")?)?;
            let order = p.uint_or("order", jet.order() as u64)?;
            let map = parse_map(p.value("map")?, u32::try_from(order).map_err(|_| CliError::key("order", "too large"))?)?;
            let out = push_jet(&map, &jet)?;
            Ok(Outcome::new(json!({ "op": op, "jet": jet_json(&out) }), Summary::default()))
        }
        other => Err(CliError::key("op", format!("expected faa_di_bruno, scale or push, got {other:?}"))),
    }
}

fn model_of(p: &mut Params, default_bands: u64) -> CliResult<ModelManifold> {
    let kind: ModelKind = p.string("model")?.parse().map_err(|e: jetmorse::Error| CliError::key("model", e.to_string()))?;
    let bands = p.uint_or("bands", default_bands)? as usize;
    let sectors = p.uint_or("sectors", 1)? as usize;
    ModelManifold::new(kind, GridSpec::new(bands, sectors)).map_err(|e| CliError::key("bands", e.to_string()))
}

fn field_of(p: &mut Params, key: &str, model: ModelManifold) -> CliResult<CurvatureField> {
    let desc = p.string(key)?;
    CurvatureField::parse(model, &desc).map_err(|e| CliError::key(key, e.to_string()))
}

fn grid_provenance(model: &ModelManifold) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert(
        "grid".into(),
        json!({ "model": model.kind().to_string(), "bands": model.grid().bands, "sectors": model.grid().sectors, "cells": model.cell_count() }),
    );
    m
}

fn spectrum_json(s: &MorseSpectrum) -> Value {
    json!({
        "integrals": s.integrals,
        "total": s.total,
        "degenerate_mass": s.degenerate_mass,
        "index_mass": s.index_mass,
        "flagged": s.flagged,
    })
}

fn integral_class(field: &CurvatureField) -> Option<Vec<i64>> {
    field.class()?.iter().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect()
}

fn morse_options(p: &mut Params) -> CliResult<MorseOptions> {
    Ok(MorseOptions {
        tol: p.float_or("tol", DEFAULT_TOL)?,
        degenerate_threshold: p.float_or("degenerate_threshold", DEFAULT_DEGENERATE_THRESHOLD)?,
        threads: None,
    })
}

fn degenerate_diagnostic(s: &MorseSpectrum) -> Option<String> {
    s.flagged.then(|| format!("degenerate mass {:.3e} exceeds the threshold", s.degenerate_mass))
}

fn morse(p: &mut Params) -> CliResult<Outcome> {
    let model = model_of(p, 64)?;
    let field = field_of(p, "field", model)?;
    let opts = morse_options(p)?;
    let m = if p.has("m") { Some(p.uint("m")?) } else { None };
    let r = p.uint_or("r", 1)?;
    let q = usize_of_or(p, "q", 0)?;
    let reference = p.opt_string("reference")?;
    let s = morse_integrals_with(&field, &opts);
    let n = s.n();
    if q > n {
        return Err(CliError::key("q", format!("must be at most {n}")));
    }
    let mut payload = spectrum_json(&s);
    payload["model"] = json!(model.kind().to_string());
    payload["field"] = json!(field.description());
    let mut summary = Summary::value(s.integrals[q]);
    let class = integral_class(&field);
    if let Some(m) = m {
        let qs = 0..=n;
        payload["m"] = json!(m);
        payload["wm_bounds"] = json!(qs.clone().map(|q| wm_bound(q, m, r, &s)).collect::<Vec<_>>());
        payload["sm_alternating"] = json!(qs.clone().map(|q| sm_alternating(q, m, r, &s)).collect::<Vec<_>>());
        payload["lower_bounds"] = json!(qs.map(|q| lower_bound_q(q, m, r, &s)).collect::<Vec<_>>());
        let rr = rr_estimate(m, r, &field);
        payload["rr_estimate"] = json!(rr);
        summary = Summary::value(wm_bound(q, m, r, &s));
        if let Some(class) = &class {
            let h = exact_cohomology(model.kind(), class, m)?;
            let chi = euler_characteristic(model.kind(), class, m)?;
            payload["exact_cohomology"] = json!(h.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            payload["euler_characteristic"] = json!(chi.to_string());
            match reference.as_deref() {
                None => {}
                Some("exact") => {
                    let h = r as f64 * h[q] as f64;
                    summary.reference = Some(h);
                    summary.ratio = Some(h / summary.value);
                }
                Some("chi") => {
                    let chi = r as f64 * chi as f64;
                    summary = Summary { value: rr, reference: Some(chi), ratio: Some(chi / rr), ..Summary::default() };
                }
                Some(other) => return Err(CliError::key("reference", format!("expected exact or chi, got {other:?}"))),
            }
        } else if reference.is_some() {
            return Err(CliError::key("reference", "exact cohomology needs a field with an integral class"));
        }
    } else if reference.is_some() {
        return Err(CliError::key("reference", "needs `m`"));
    }
    Ok(Outcome { payload, provenance: grid_provenance(&model), summary, diagnostic: degenerate_diagnostic(&s) })
}

fn usize_of_or(p: &mut Params, key: &str, default: usize) -> CliResult<usize> {
    let v = p.uint_or(key, default as u64)?;
    usize::try_from(v).map_err(|_| CliError::key(key, "too large"))
}

fn bounded(p: &mut Params) -> CliResult<Outcome> {
    let degree = p.int("degree")?;
    let m = p.uint("m")?;
    let weights = match p.value("weights")? {
        Value::Array(a) => a,
        _ => return Err(CliError::key("weights", "expected an array of {\"point\", \"lambda\"} objects")),
    };
    let mut parsed = Vec::with_capacity(weights.len());
    for w in weights {
        let Value::Object(o) = w else {
            return Err(CliError::key("weights", "expected {\"point\": \"a/b\" | \"inf\", \"lambda\": \"a/b\"}"));
        };
        if let Some(k) = o.keys().find(|k| *k != "point" && *k != "lambda") {
            return Err(CliError::key(format!("weights.{k}"), "unknown key"));
        }
        let point = match o.get("point") {
            Some(Value::String(s)) if s == "inf" => P1Point::Infinity,
            Some(v) => P1Point::Finite(rational_value("weights.point", v)?),
            None => return Err(CliError::key("weights.point", "missing")),
        };
        let lambda = rational_value("weights.lambda", o.get("lambda").ok_or_else(|| CliError::key("weights.lambda", "missing"))?)?;
        parsed.push((point, lambda));
    }
    let metric = QDivisorMetricP1::new(degree, parsed).map_err(|e| CliError::key("weights", e.to_string()))?;
    let sections = bounded_sections_p1(&metric, m)?;
    let rounded: Vec<Value> =
        metric.rounded_divisor(m).iter().map(|(pt, c)| json!({ "point": pt.to_string(), "order": c.to_string() })).collect();
    Ok(Outcome::new(
        json!({ "degree": degree, "m": m, "sections": sections.to_string(), "rounded_divisor": rounded }),
        Summary::value(sections as f64),
    ))
}

fn exponent_vectors(key: &str, v: Value) -> CliResult<Vec<Vec<u32>>> {
    let bad = || CliError::key(key, "expected an array of exponent vectors");
    let Value::Array(a) = v else { return Err(bad()) };
    a.iter()
        .map(|g| {
            g.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_u64().and_then(|v| u32::try_from(v).ok()).ok_or_else(bad))
                .collect()
        })
        .collect()
}

fn ideal_json(i: &MonomialIdeal) -> Value {
    json!({ "n": i.n(), "generators": i.generators(), "display": i.to_string() })
}

fn closure(p: &mut Params) -> CliResult<Outcome> {
    let mode = p.opt_string("mode")?.unwrap_or_else(|| "closure".into());
    match mode.as_str() {
        "closure" => {
            let gens = exponent_vectors("generators", p.value("generators")?)?;
            let n = gens.first().map(Vec::len).ok_or_else(|| CliError::key("generators", "the zero ideal has no closure"))?;
            let ideal = MonomialIdeal::new(n, gens).map_err(|e| CliError::key("generators", e.to_string()))?;
            let power = RationalPower::new(p.rational_or("p", BigRational::one())?).map_err(|e| CliError::key("p", e.to_string()))?;
            let closed = closure_power(&ideal, &power)?;
            let mut payload = json!({ "ideal": ideal_json(&ideal), "p": rat_json(power.value()), "closure": ideal_json(&closed) });
            if let Some(t) = p.opt_value("test") {
                let tests = exponent_vectors("test", t)?;
                let members = tests
                    .iter()
                    .map(|b| membership(&ideal, &power, b).map_err(|e| CliError::key("test", e.to_string())))
                    .collect::<CliResult<Vec<bool>>>()?;
                payload["members"] = json!(members);
            }
            Ok(Outcome::new(payload, Summary::value(closed.generators().len() as f64)))
        }
        "euler" => {
            let n = positive(p, "n")?;
            let m = u32::try_from(positive(p, "m")?).map_err(|_| CliError::key("m", "too large"))?;
            let c = euler_canonical_check(n, m)?;
            let expected = MonomialIdeal::maximal(n).power(m);
            Ok(Outcome::new(
                json!({ "line_power": c.line_power, "closure": ideal_json(&c.ideal), "equals_power_of_maximal_ideal": c.ideal == expected }),
                Summary::value(c.ideal.generators().len() as f64),
            ))
        }
        other => Err(CliError::key("mode", format!("expected closure or euler, got {other:?}"))),
    }
}

fn bundle_of(p: &mut Params, model: ModelManifold) -> CliResult<VBundleCurvature> {
    let summands = match p.value("bundle")? {
        Value::Array(a) if !a.is_empty() => a,
        _ => return Err(CliError::key("bundle", "expected a nonempty array of curvature forms, one per line summand")),
    };
    let fields = summands
        .iter()
        .map(|s| {
            let s = s.as_str().ok_or_else(|| CliError::key("bundle", "summands are form strings such as \"-w1 + h2\""))?;
            CurvatureField::parse(model, s).map_err(|e| CliError::key("bundle", e.to_string()))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(VBundleCurvature::diagonal(fields)?)
}

fn gg(p: &mut Params, seed: u64) -> CliResult<Outcome> {
    let model = model_of(p, 8)?;
    let vb = bundle_of(p, model)?;
    let twist = field_of(p, "twist", model)?;
    let k = positive(p, "k")?;
    let sched = match p.opt_value("eps") {
        None => EpsilonSchedule::geometric(k)?,
        Some(v) => {
            let eps = rational_list("eps", &v)?;
            if eps.len() != k {
                return Err(CliError::key("eps", format!("needs k = {k} entries")));
            }
            EpsilonSchedule::new(eps).map_err(|e| CliError::key("eps", e.to_string()))?
        }
    };
    let samples = usize_of_or(p, "samples", 10_000)?;
    if samples == 0 {
        return Err(CliError::key("samples", "must be at least 1"));
    }
    let proposal = match p.opt_string("proposal")?.as_deref() {
        None | Some("matched") => Proposal::Matched,
        Some("importance") => Proposal::Importance,
        Some(other) => return Err(CliError::key("proposal", format!("expected matched or importance, got {other:?}"))),
    };
    let trace_model = p.bool_or("trace_model", false)?;
    let opts = morse_options(p)?;
    let q = usize_of_or(p, "q", 0)?;
    let mut problem = GgProblem::new(vb.clone(), twist.clone(), sched.clone(), samples, seed);
    problem.proposal = proposal;
    problem.trace_model = trace_model;
    problem.tol = opts.tol;
    if q > problem.total_dim() {
        return Err(CliError::key("q", format!("must be at most n + kr - 1 = {}", problem.total_dim())));
    }
    let res = gg_morse_spectrum(&problem)?;
    // calibration needs eta to have a nonzero index integral
    let calib = calibrate_k1(&problem).ok();
    let eta = EtaForms::new(&vb, &twist)?.eta;
    let spectrum = morse_integrals_with(&eta, &opts);
    let (n, r) = (res.n, res.r);
    let kappa = calib.map(|c| c.kappa);
    let rhs: Vec<f64> = (0..res.estimates.len()).map(|q| rhs_coefficient(k, n, r, &spectrum, q)).collect();
    let ratio = |q: usize| -> Option<(f64, f64)> {
        let d = kappa?.value * rhs[q];
        (d != 0.0).then(|| (res.estimates[q].value / d, res.estimates[q].stderr / d.abs()))
    };
    let payload = json!({
        "k": k,
        "n": n,
        "r": r,
        "p": sched.p(),
        "eps": sched.eps().iter().map(rat_json).collect::<Vec<_>>(),
        "proposal": proposal,
        "trace_model": trace_model,
        "estimates": res.estimates.iter().enumerate().map(|(q, e)| json!({ "q": q, "value": e.value, "stderr": e.stderr })).collect::<Vec<_>>(),
        "eta_integrals": spectrum.integrals,
        "rhs": rhs,
        "kappa": kappa.map(|k| json!({ "value": k.value, "stderr": k.stderr })),
        "ratio": (0..rhs.len()).map(|q| ratio(q).map(|(v, s)| json!({ "q": q, "value": v, "stderr": s }))).collect::<Vec<_>>(),
        "effective_sample_size": res.effective_sample_size,
        "degenerate_fraction": res.degenerate_fraction,
        "remainder_dropped": res.remainder_dropped,
        "error_term": "O(1/log k), not quantified",
    });
    let est = res.estimates[q];
    let scale = kappa.map_or(1.0, |k| k.value);
    let summary = Summary {
        value: est.value / scale,
        stderr: Some(est.stderr / scale.abs()),
        reference: Some(rhs[q]),
        ratio: ratio(q).map(|r| r.0),
        ratio_stderr: ratio(q).map(|r| r.1),
    };
    let mut provenance = grid_provenance(&model);
    provenance.insert("samples".into(), json!(samples));
    let diagnostic = (res.degenerate_fraction > opts.degenerate_threshold)
        .then(|| format!("degenerate fraction {:.3e} exceeds the threshold", res.degenerate_fraction))
        .or_else(|| degenerate_diagnostic(&spectrum));
    Ok(Outcome { payload, provenance, summary, diagnostic })
}

fn certify(p: &mut Params) -> CliResult<Outcome> {
    let model = model_of(p, 64)?;
    let (form, variant) = if p.has("eta") {
        (field_of(p, "eta", model)?, BoundVariant::JetDifferentials)
    } else {
        let vb = bundle_of(p, model)?;
        let twist = field_of(p, "twist", model)?;
        let forms = EtaForms::new(&vb, &twist)?;
        match p.opt_string("variant")?.as_deref() {
            None | Some("jet_differentials") => (forms.eta, BoundVariant::JetDifferentials),
            Some("duals") => (forms.eta_star, BoundVariant::Duals),
            Some(other) => return Err(CliError::key("variant", format!("expected jet_differentials or duals, got {other:?}"))),
        }
    };
    let opts = morse_options(p)?;
    let m_ref = p.uint_or("m_ref", 1)?;
    let r = p.uint_or("r", 1)?;
    let s = morse_integrals_with(&form, &opts);
    let cert = certify_bigness(&s, m_ref, r, model.dim())?;
    let mut payload = json!({
        "positive": cert.positive,
        "margin": cert.margin,
        "sections_lower_bound": cert.sections_lower_bound,
        "kahler_current_mode": cert.kahler_current_mode,
        "spectrum": spectrum_json(&s),
    });
    if p.has("k") {
        let k = positive(p, "k")?;
        let m = p.uint("m")?;
        let rho = p.rational_or("rho", BigRational::one())?;
        let rho = jetmorse::scalar::to_f64(&rho);
        let bounds = (0..=s.n())
            .map(|q| bound_5_11(variant, q, m, k, r as usize, rho, &s).map(|b| json!({ "q": q, "lower": b.lower, "upper": b.upper })))
            .collect::<jetmorse::Result<Vec<_>>>()?;
        payload["bounds"] = json!({ "variant": variant, "k": k, "m": m, "terms": bounds, "error_term": "O(1/log k), not quantified" });
    }
    Ok(Outcome { payload, provenance: grid_provenance(&model), summary: Summary::value(cert.margin), diagnostic: degenerate_diagnostic(&s) })
}
