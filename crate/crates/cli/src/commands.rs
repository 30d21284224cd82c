use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use serde_json::{json, Value};
use sigmak_core::analysis::{
    alpha_curve, alpha_limit, deformation_alpha_descent, hessian_diag_scalar, hessian_levelset_numeric,
    midpoint_convexity_test, monotonicity_scan, write_alpha_csv, write_deformation_csv, DeformationFamily,
    ScanOptions, EXPLORATION_LABEL,
};
use sigmak_core::noetherian::{certify_right, certify_right_f64, FailureEvidence, Verdict};
use sigmak_core::presets::{self, Branch, DhymSpec, Phase};
use sigmak_core::report::{chain_entries, float_chain_entries, stability_label, Report, NUMERIC_LABEL};
use sigmak_core::scalar::{format_decimal, format_rational, to_f64};
use sigmak_core::sigma::{certify_upsilon_stable, dominates, MembershipOptions, Stability, UpsilonCone};
use sigmak_core::{Error, ExactRational, Poly, SigmaKPolynomial};

use crate::input::{self, parse_grid, parse_list, parse_number, parse_range, read_equation, read_polynomial};

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input.
    Usage(String),
    /// The input was well formed but violates a precondition.
    Contract(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Contract(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Contract(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::DimensionMismatch { .. } | Error::BadSubsetSize { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Contract(e.to_string()),
        }
    }
}

fn echo(f: &SigmaKPolynomial) -> Value {
    serde_json::to_value(f).expect("equation serializes")
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn verdict_value(v: &Verdict) -> Value {
    match v {
        Verdict::StrictRight => json!("strict"),
        Verdict::RightNotStrict => json!("not-strict"),
        Verdict::NotRight { level, evidence } => json!({
            "failing_level": level,
            "evidence": match evidence {
                FailureEvidence::PositiveAt => "positive-at-next-root",
                FailureEvidence::MissingRoot => "missing-root",
            },
        }),
    }
}

fn noetherian_label(v: &Verdict) -> &'static str {
    match v {
        Verdict::StrictRight => "strictly-right-noetherian",
        Verdict::RightNotStrict => "right-noetherian",
        Verdict::NotRight { .. } => "not-right-noetherian",
    }
}

pub fn certify(path: Option<&str>, digits: usize, float: bool, timings: bool) -> Result<String, Failure> {
    let f = read_equation(path)?;
    let start = Instant::now();
    let r = f.diagonal_restriction();
    let report = if float {
        let cert = certify_right_f64(&r.to_f64_coeffs(), 1e-12)?;
        let stability = match cert.verdict {
            Verdict::StrictRight => Stability::StrictlyStable,
            Verdict::RightNotStrict => Stability::StableNotStrict,
            Verdict::NotRight { .. } => Stability::NotStable,
        };
        let chain = if stability.is_stable() { float_chain_entries(&cert, digits) } else { Vec::new() };
        Report::new(echo(&f), stability_label(stability))
            .with_chain(chain)
            .with_extras(json!({ "mode": NUMERIC_LABEL, "noetherian": verdict_value(&cert.verdict) }))
    } else {
        let sc = certify_upsilon_stable(&f);
        let chain = if sc.stability.is_stable() { chain_entries(&sc.certificate, digits) } else { Vec::new() };
        Report::new(echo(&f), stability_label(sc.stability))
            .with_chain(chain)
            .with_extras(json!({
                "mode": "exact",
                "diagonal_restriction": r.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
                "noetherian": verdict_value(&sc.certificate.verdict),
                "top_multiplicity": sc.certificate.top_multiplicity,
            }))
    };
    let mut report = report;
    if timings {
        report.timings = Some(BTreeMap::from([("certify_ms".to_string(), ms(start))]));
    }
    Ok(report.to_json())
}

fn ordering_symbol(o: Ordering) -> &'static str {
    match o {
        Ordering::Greater => ">",
        Ordering::Equal => "=",
        Ordering::Less => "<",
    }
}

pub fn dominance(g_path: &str, f_path: &str, digits: usize) -> Result<String, Failure> {
    let g = read_equation(Some(g_path))?;
    let f = read_equation(Some(f_path))?;
    if g.n() != f.n() {
        return Err(Failure::Usage(format!("dimensions differ: {} and {}", g.n(), f.n())));
    }
    let d = dominates(&g, &f)?;
    let g_cert = certify_upsilon_stable(&g);
    let f_cert = certify_upsilon_stable(&f);
    let levels: Vec<&str> = d.levels.iter().map(|o| ordering_symbol(*o)).collect();
    let inclusion = if d.dominates {
        "the cone of g is contained in the cone of f"
    } else {
        "the cone of g is not contained in the cone of f"
    };
    let report = Report::new(json!({ "g": echo(&g), "f": echo(&f) }), if d.dominates { "dominates" } else { "does-not-dominate" })
        .with_chain(chain_entries(&g_cert.certificate, digits))
        .with_extras(json!({
            "dominates": d.dominates,
            "levels": levels,
            "inclusion": inclusion,
            "f_chain": chain_entries(&f_cert.certificate, digits),
        }));
    Ok(report.to_json())
}

pub fn membership(path: &str, point: &str, float: bool, margin: f64, exhaustive: bool) -> Result<String, Failure> {
    let f = read_equation(Some(path))?;
    let mu = parse_list(point)?;
    if mu.len() != f.n() {
        return Err(Failure::Usage(format!("point has {} coordinates, equation has n = {}", mu.len(), f.n())));
    }
    let cone = UpsilonCone::new(&f)?;
    let opts = MembershipOptions { margin, exhaustive };
    let (member_of, failing_subset, values, mode) = if float {
        let mu: Vec<f64> = mu.iter().map(to_f64).collect();
        let r = cone.membership(&mu, &opts)?;
        let values: Vec<Value> =
            r.per_level_values.iter().map(|(l, v)| json!({ "level": l, "value": format!("{v:.12e}") })).collect();
        (r.member_of, r.failing_subset, values, NUMERIC_LABEL)
    } else {
        let r = cone.membership(&mu, &opts)?;
        let values: Vec<Value> = r
            .per_level_values
            .iter()
            .map(|(l, v)| json!({ "level": l, "value": format_rational(v) }))
            .collect();
        (r.member_of, r.failing_subset, values, "exact")
    };
    let verdict = match member_of {
        Some(0) => "in-cone".to_string(),
        Some(l) => format!("level-{l}"),
        None => "outside".to_string(),
    };
    let report = Report::new(json!({ "equation": echo(&f), "point": mu.iter().map(format_rational).collect::<Vec<_>>() }), verdict)
        .with_extras(json!({
            "mode": mode,
            "member_of": member_of,
            "c-subsolution": member_of.is_some_and(|m| m <= 1),
            "failing_subset": failing_subset,
            "per_level_values": values,
        }));
    Ok(report.to_json())
}

fn write_csv<F>(path: &str, write: F) -> Result<(), Failure>
where
    F: FnOnce(BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).map_err(|e| Failure::Usage(format!("cannot create {path}: {e}")))?;
    write(BufWriter::new(file)).map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))
}

fn certified(p: &Poly) -> Result<sigmak_core::noetherian::NoetherianCertificate, Failure> {
    let cert = certify_right(p)?;
    if !cert.verdict.is_right() {
        return Err(Failure::Contract(format!("input is {}", noetherian_label(&cert.verdict))));
    }
    Ok(cert)
}

pub fn alpha(
    input: Option<&str>,
    poly: Option<&str>,
    range: Option<&str>,
    samples: usize,
    csv: Option<&str>,
) -> Result<String, Failure> {
    if samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let (p, echoed) = read_polynomial(input, poly)?;
    let cert = certified(&p)?;
    let x0 = cert.root(0).expect("certified chain is complete").to_f64();
    let (lo, hi) = match range {
        Some(r) => {
            let (a, b) = parse_range(r)?;
            (to_f64(&a), to_f64(&b))
        }
        None => (x0, x0 + 10.0),
    };
    let rows = alpha_curve(&p, lo, hi, samples);
    if let Some(path) = csv {
        write_csv(path, |w| write_alpha_csv(w, &rows))?;
    }
    let n = p.deg();
    let limit = alpha_limit(&p)?;
    let bound = 1.0 - 1.0 / n as f64;
    let beyond: Vec<&(f64, f64)> = rows.iter().filter(|(x, a)| *x > x0 && a.is_finite()).collect();
    let nondecreasing = beyond.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-9);
    let below_limit = beyond.iter().all(|(_, a)| *a < bound + 1e-12);
    let scan = monotonicity_scan(&p, &cert, &ScanOptions::default())?;
    let report = Report::new(echoed, noetherian_label(&cert.verdict))
        .with_chain(chain_entries(&cert, 3))
        .with_extras(json!({
            "range": [format!("{lo}"), format!("{hi}")],
            "samples": rows.len(),
            "csv": csv,
            "range_nondecreasing": nondecreasing,
            "range_below_limit": below_limit,
            "max_alpha": beyond.iter().map(|(_, a)| *a).fold(None, |m: Option<f64>, a| Some(m.map_or(a, |m| m.max(a)))).map(|a| format!("{a:.9}")),
            "monotonicity": {
                "passed": scan.passed(),
                "samples": scan.samples.len(),
                "violations": scan.violations,
                "bounded_by_limit": scan.bounded_by_limit,
                "endpoint_ok": scan.endpoint_ok,
            },
            "limit": format_rational(&limit.limit),
            "limit_witness": limit.witness.iter().map(|(x, gap)| json!({ "x": format_rational(x), "gap": format!("{:.6e}", to_f64(gap)) })).collect::<Vec<_>>(),
            "limit_approach_monotone": limit.decreasing,
        }));
    Ok(report.to_json())
}

pub fn deform(
    input: Option<&str>,
    poly: Option<&str>,
    ys: &str,
    x_max: &str,
    samples: usize,
    csv: Option<&str>,
) -> Result<String, Failure> {
    if samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let (p, echoed) = read_polynomial(input, poly)?;
    let cert = certified(&p)?;
    let ys = parse_grid(ys)?;
    let x_max = parse_number(x_max)?;
    let family = DeformationFamily::new(&p)?;
    let hi = to_f64(&x_max);
    let mut rows = Vec::new();
    for y in &ys {
        rows.extend(family.curve(y, hi, samples)?);
    }
    if let Some(path) = csv {
        write_csv(path, |w| write_deformation_csv(w, &rows))?;
    }
    let descent = deformation_alpha_descent(&p, &ys, &x_max, samples)?;
    let (xm, x0) = family.range();
    let verdict = if descent.passed() { "descending-in-y" } else { "not-descending" };
    let report = Report::new(echoed, verdict).with_chain(chain_entries(&cert, 3)).with_extras(json!({
        "multiplicity": family.multiplicity(),
        "y_range": [xm.approx(6), x0.approx(6)],
        "ys": ys.iter().map(format_rational).collect::<Vec<_>>(),
        "x_max": format_rational(&x_max),
        "rows": rows.len(),
        "csv": csv,
        "comparisons": descent.comparisons,
        "failures": descent.failures,
        "min_margin": descent.min_margin.map(|m| format!("{m:.6e}")),
    }));
    Ok(report.to_json())
}

fn usize_param(params: &[String], i: usize, name: &str) -> Result<usize, Failure> {
    let s = params.get(i).ok_or_else(|| Failure::Usage(format!("missing parameter <{name}>")))?;
    s.parse().map_err(|_| Failure::Usage(format!("<{name}> must be a non-negative integer, got '{s}'")))
}

fn rational_param(params: &[String], i: usize, name: &str) -> Result<ExactRational, Failure> {
    let s = params.get(i).ok_or_else(|| Failure::Usage(format!("missing parameter <{name}>")))?;
    parse_number(s)
}

fn expect_params(params: &[String], count: usize, usage: &str) -> Result<(), Failure> {
    if params.len() != count {
        return Err(Failure::Usage(format!("expected parameters: {usage}")));
    }
    Ok(())
}

pub fn preset(name: &str, params: &[String], top: &str, precision: u32) -> Result<String, Failure> {
    let f = match name {
        "monge-ampere" => {
            expect_params(params, 2, "<n> <c0>")?;
            presets::monge_ampere(usize_param(params, 0, "n")?, &rational_param(params, 1, "c0")?)?
        }
        "j-equation" => {
            expect_params(params, 2, "<n> <c>")?;
            presets::j_equation(usize_param(params, 0, "n")?, &rational_param(params, 1, "c")?)?
        }
        "hessian" => {
            expect_params(params, 3, "<n> <k> <c>")?;
            presets::hessian(usize_param(params, 0, "n")?, usize_param(params, 1, "k")?, &rational_param(params, 2, "c")?)?
        }
        "nonneg" | "guan-zhang" => {
            let n = usize_param(params, 0, "n")?;
            let c = params[1..].iter().map(|s| parse_number(s)).collect::<Result<Vec<_>, _>>()?;
            presets::nonneg_coeff(n, &c, &parse_number(top)?)?
        }
        "dhym" => {
            expect_params(params, 2, "<n> <phase>")?;
            let n = usize_param(params, 0, "n")?;
            let phase = Phase::parse(&params[1])?;
            let p = presets::dhym(&DhymSpec { n, phase: phase.clone(), precision })?;
            let mut v = echo(&p.equation);
            let digits = precision as usize;
            v["phase"] = json!(phase.to_string());
            v["branch"] = json!(match p.branch {
                Branch::Supercritical => "supercritical",
                Branch::Mirror => "mirror",
            });
            v["expected_chain"] = json!(p
                .expected_chain
                .iter()
                .map(|x| format_decimal(&sigmak_core::scalar::from_f64(*x), digits))
                .collect::<Vec<_>>());
            v["mode"] = json!(NUMERIC_LABEL);
            return Ok(serde_json::to_string(&v).expect("json"));
        }
        other => return Err(Failure::Usage(format!("unknown preset '{other}'"))),
    };
    Ok(serde_json::to_string(&f).expect("equation serializes"))
}

pub fn convexity(path: Option<&str>, pairs: usize) -> Result<String, Failure> {
    let f = read_equation(path)?;
    let seed = input::seed()?;
    let midpoint = midpoint_convexity_test(&f, pairs, seed)?;
    let cert = certify_upsilon_stable(&f);
    let (t, shift) = f.translate();
    let n = f.n();
    let x0 = cert.certificate.root(0).expect("strictly stable chain").to_f64() - to_f64(&shift);

    let mut diag = Vec::new();
    if n >= 3 {
        for step in [1.0, 2.0, 4.0, 8.0] {
            let x = x0 + step;
            let r = hessian_diag_scalar(&t, &x)?;
            diag.push(json!({
                "x": format!("{:.6}", x + to_f64(&shift)),
                "scalar": format!("{:.9e}", r.scalar),
                "positive": r.scalar > 0.0,
            }));
        }
    }
    let base: Vec<f64> = (0..n - 1).map(|i| x0 + 1.0 + i as f64).collect();
    let exploration = if n >= 2 {
        let h = hessian_levelset_numeric(&t, &base, 1e-4)?;
        json!({
            "label": h.label,
            "base": base.iter().map(|b| format!("{:.6}", b + to_f64(&shift))).collect::<Vec<_>>(),
            "eigenvalues": h.eigenvalues.iter().map(|e| format!("{e:.6e}")).collect::<Vec<_>>(),
            "min_eigenvalue": format!("{:.6e}", h.min_eigenvalue),
        })
    } else {
        json!({ "label": EXPLORATION_LABEL })
    };
    let verdict = if midpoint.failures == 0 { "convex-on-samples" } else { "midpoint-failures" };
    let report = Report::new(echo(&f), verdict).with_chain(chain_entries(&cert.certificate, 3)).with_extras(json!({
        "seed": seed,
        "pairs": midpoint.pairs,
        "failures": midpoint.failures,
        "first_failure": midpoint.first_failure,
        "diagonal_scalar": diag,
        "hessian": exploration,
    }));
    Ok(report.to_json())
}
