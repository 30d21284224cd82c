//! JSON report shapes shared by the command line tool and the browser demo.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::noetherian::{FloatCertificate, NoetherianCertificate};
use crate::scalar::{format_rational, frac};
use crate::sigma::Stability;

pub const SCHEMA_VERSION: &str = "1";
pub const NUMERIC_LABEL: &str = "numeric (non-certificate)";

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ChainEntry {
    pub level: usize,
    pub approx: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<[String; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub input: Value,
    pub verdict: String,
    pub chain: Vec<ChainEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    pub extras: Value,
}

impl Report {
    pub fn new(input: Value, verdict: impl Into<String>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            input,
            verdict: verdict.into(),
            chain: Vec::new(),
            timings: None,
            extras: Value::Object(Default::default()),
        }
    }

    pub fn with_chain(mut self, chain: Vec<ChainEntry>) -> Self {
        self.chain = chain;
        self
    }

    pub fn with_extras(mut self, extras: Value) -> Self {
        self.extras = extras;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn stability_label(s: Stability) -> &'static str {
    match s {
        Stability::StrictlyStable => "strictly-stable-convex",
        Stability::StableNotStrict => "stable",
        Stability::NotStable => "not-stable",
    }
}

/// Chain entries with `digits` rounded decimals and an isolating interval
/// narrower than the last printed digit.
pub fn chain_entries(cert: &NoetherianCertificate, digits: usize) -> Vec<ChainEntry> {
    let width = frac(1, 10i64.pow(digits.min(15) as u32 + 3));
    cert.chain
        .iter()
        .enumerate()
        .filter_map(|(level, x)| {
            let x = x.as_ref()?.refine(&width);
            Some(ChainEntry {
                level,
                approx: x.approx(digits),
                interval: Some([format_rational(x.lower()), format_rational(x.upper())]),
            })
        })
        .collect()
}

pub fn float_chain_entries(cert: &FloatCertificate, digits: usize) -> Vec<ChainEntry> {
    cert.chain
        .iter()
        .enumerate()
        .filter_map(|(level, x)| {
            let v = (*x)?;
            let v = if v == 0.0 { 0.0 } else { v };
            Some(ChainEntry { level, approx: format!("{v:.digits$}"), interval: None })
        })
        .collect()
}
