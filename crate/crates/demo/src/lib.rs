//! Browser bindings for the certifier. Each export takes and returns JSON
//! strings so the page needs no generated type glue.

use serde_json::json;
use sigmak_core::analysis::alpha_curve;
use sigmak_core::noetherian::certify_right;
use sigmak_core::report::{chain_entries, stability_label, Report};
use sigmak_core::scalar::{format_rational, parse_rational};
use sigmak_core::sigma::{certify_upsilon_stable, MembershipOptions, UpsilonCone};
use sigmak_core::SigmaKPolynomial;
use wasm_bindgen::prelude::*;

fn parse_equation(text: &str) -> Result<SigmaKPolynomial, String> {
    serde_json::from_str(text).map_err(|e| format!("invalid equation: {e}"))
}

pub fn certify_json(equation: &str, digits: usize) -> Result<String, String> {
    let f = parse_equation(equation)?;
    let sc = certify_upsilon_stable(&f);
    let chain = if sc.stability.is_stable() { chain_entries(&sc.certificate, digits) } else { Vec::new() };
    let input = serde_json::to_value(&f).map_err(|e| e.to_string())?;
    Ok(Report::new(input, stability_label(sc.stability)).with_chain(chain).to_json())
}

pub fn alpha_curve_json(equation: &str, span: f64, samples: usize) -> Result<String, String> {
    if samples == 0 {
        return Err("samples must be positive".into());
    }
    if !(span > 0.0) {
        return Err("span must be positive".into());
    }
    let f = parse_equation(equation)?;
    let r = f.diagonal_restriction();
    let cert = certify_right(&r).map_err(|e| e.to_string())?;
    if !cert.verdict.is_right() {
        return Err("the diagonal restriction is not right-Noetherian".into());
    }
    let x0 = cert.root(0).ok_or("missing largest root")?.to_f64();
    let points: Vec<[f64; 2]> = alpha_curve(&r, x0, x0 + span, samples)
        .into_iter()
        .filter(|(_, a)| a.is_finite())
        .map(|(x, a)| [x, a])
        .collect();
    let n = f.n() as f64;
    Ok(json!({ "x0": x0, "limit": 1.0 - 1.0 / n, "points": points }).to_string())
}

pub fn membership_json(equation: &str, point: &str) -> Result<String, String> {
    let f = parse_equation(equation)?;
    let mu = point
        .split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if mu.len() != f.n() {
        return Err(format!("expected {} coordinates, got {}", f.n(), mu.len()));
    }
    let cone = UpsilonCone::new(&f).map_err(|e| e.to_string())?;
    let r = cone.membership(&mu, &MembershipOptions::default()).map_err(|e| e.to_string())?;
    let values: Vec<_> = r.per_level_values.iter().map(|(l, v)| json!({ "level": l, "value": format_rational(v) })).collect();
    Ok(json!({
        "member_of": r.member_of,
        "c-subsolution": r.member_of.is_some_and(|m| m <= 1),
        "failing_subset": r.failing_subset,
        "per_level_values": values,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn certify(equation: &str, digits: usize) -> Result<String, JsValue> {
    certify_json(equation, digits).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = alphaCurve)]
pub fn alpha_curve_js(equation: &str, span: f64, samples: usize) -> Result<String, JsValue> {
    alpha_curve_json(equation, span, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn membership(equation: &str, point: &str) -> Result<String, JsValue> {
    membership_json(equation, point).map_err(|e| JsValue::from_str(&e))
}
