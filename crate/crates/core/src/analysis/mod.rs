//! The log-concavity ratio `alpha_p = p p'' / p'^2` and the analytic
//! statements built on it.

mod deformation;
mod hessian;

pub use deformation::{deformation, deformation_alpha_descent, DeformationFamily, DeformationState, DescentReport};
pub use hessian::{
    bordered_identity_check, h_derivatives, hessian_diag_scalar, hessian_levelset_numeric, midpoint_convexity_test,
    DiagScalarReport, HDerivatives, HessianReport, IdentityReport, MidpointReport, EXPLORATION_LABEL,
};

use std::io::{self, Write};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::noetherian::NoetherianCertificate;
use crate::poly::Poly;
use crate::scalar::{frac, from_f64, q, to_f64, ExactRational};

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaValue {
    Exact(ExactRational),
    Approx(f64),
    PosInfinity,
    NegInfinity,
    /// The one-sided limits disagree, or the numeric limit did not settle.
    Undetermined,
}

impl AlphaValue {
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            AlphaValue::Exact(v) => Some(to_f64(v)),
            AlphaValue::Approx(v) => Some(*v),
            AlphaValue::PosInfinity => Some(f64::INFINITY),
            AlphaValue::NegInfinity => Some(f64::NEG_INFINITY),
            AlphaValue::Undetermined => None,
        }
    }

    pub fn exact(&self) -> Option<&ExactRational> {
        match self {
            AlphaValue::Exact(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaRegime {
    Regular,
    CriticalLimit,
    CriticalZeroByDefinition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSample {
    pub x: f64,
    pub value: AlphaValue,
    pub regime: AlphaRegime,
}

/// Exact value of `alpha_p(x)`. At a critical point the limit is taken by
/// cancelling the common power of `(x - a)` in `p p''` and `p'^2`.
pub fn alpha(p: &Poly, x: &ExactRational) -> AlphaSample {
    let d1 = p.derivative(1);
    if d1.is_zero() {
        return AlphaSample {
            x: to_f64(x),
            value: AlphaValue::Exact(ExactRational::zero()),
            regime: AlphaRegime::CriticalZeroByDefinition,
        };
    }
    let dp = d1.eval(x);
    if !dp.is_zero() {
        let v = p.eval(x) * p.derivative(2).eval(x) / (&dp * &dp);
        return AlphaSample { x: to_f64(x), value: AlphaValue::Exact(v), regime: AlphaRegime::Regular };
    }
    AlphaSample { x: to_f64(x), value: series_limit(p, x), regime: AlphaRegime::CriticalLimit }
}

fn lowest_order(p: &Poly) -> Option<usize> {
    p.coeffs().iter().position(|c| !c.is_zero())
}

fn series_limit(p: &Poly, a: &ExactRational) -> AlphaValue {
    let t = p.taylor_shift(a);
    let num = &t * &t.derivative(2);
    let d = t.derivative(1);
    let den = &d * &d;
    let Some(on) = lowest_order(&num) else {
        return AlphaValue::Exact(ExactRational::zero());
    };
    let od = lowest_order(&den).expect("p is not constant");
    if on > od {
        AlphaValue::Exact(ExactRational::zero())
    } else if on == od {
        AlphaValue::Exact(num.coeff(on) / den.coeff(od))
    } else if (od - on) % 2 == 1 {
        AlphaValue::Undetermined
    } else if num.coeff(on).is_positive() {
        AlphaValue::PosInfinity
    } else {
        AlphaValue::NegInfinity
    }
}

fn alpha_plain(p: &[f64], d1: &[f64], d2: &[f64], x: f64) -> f64 {
    let dp = horner(d1, x);
    horner(p, x) * horner(d2, x) / (dp * dp)
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// Double precision `alpha_p(x)`. Critical points are resolved by
/// symmetric limits `x +- 10^-k`, `k = 4..8`.
pub fn alpha_f64(p: &Poly, x: f64) -> AlphaSample {
    let d1p = p.derivative(1);
    if d1p.is_zero() {
        return AlphaSample { x, value: AlphaValue::Approx(0.0), regime: AlphaRegime::CriticalZeroByDefinition };
    }
    let (c, d1, d2) = (p.to_f64_coeffs(), d1p.to_f64_coeffs(), p.derivative(2).to_f64_coeffs());
    let scale = d1.iter().rev().fold(0.0, |acc: f64, a| acc * x.abs() + a.abs());
    if horner(&d1, x).abs() > 1e-12 * scale.max(1.0) {
        return AlphaSample { x, value: AlphaValue::Approx(alpha_plain(&c, &d1, &d2, x)), regime: AlphaRegime::Regular };
    }
    // Expanding around x first keeps p(x + t) free of cancellation.
    let t = p.taylor_shift(&from_f64(x));
    let (c, d1, d2) = (t.to_f64_coeffs(), t.derivative(1).to_f64_coeffs(), t.derivative(2).to_f64_coeffs());
    let left: Vec<f64> = (4..=8).map(|k| alpha_plain(&c, &d1, &d2, -(10f64.powi(-k)))).collect();
    let right: Vec<f64> = (4..=8).map(|k| alpha_plain(&c, &d1, &d2, 10f64.powi(-k))).collect();
    let (l, r) = (left[4], right[4]);
    let settled = |v: &[f64]| (v[4] - v[3]).abs() <= 1e-3;
    let growing = |v: &[f64]| v.windows(2).all(|w| w[1].abs() > w[0].abs()) && v[4].abs() > 1e6;
    let value = if settled(&left) && settled(&right) && (l - r).abs() <= 1e-3 {
        AlphaValue::Approx(0.5 * (l + r))
    } else if growing(&left) && growing(&right) && l.signum() == r.signum() {
        if l > 0.0 {
            AlphaValue::PosInfinity
        } else {
            AlphaValue::NegInfinity
        }
    } else {
        AlphaValue::Undetermined
    };
    AlphaSample { x, value, regime: AlphaRegime::CriticalLimit }
}

/// `d/dx alpha_p(x) = (p'^2 p'' + p p' p''' - 2 p p''^2) / p'^3`.
pub fn alpha_derivative(p: &Poly, x: &ExactRational) -> Result<ExactRational> {
    let v: Vec<ExactRational> = (0..4).map(|k| p.derivative(k).eval(x)).collect();
    if v[1].is_zero() {
        return Err(Error::CriticalPoint);
    }
    let num = &v[1] * &v[1] * &v[2] + &v[0] * &v[1] * &v[3] - q(2) * &v[0] * &v[2] * &v[2];
    Ok(num / (&v[1] * &v[1] * &v[1]))
}

pub fn alpha_derivative_f64(p: &Poly, x: f64) -> Result<f64> {
    let v: Vec<f64> = (0..4).map(|k| p.derivative(k).eval_f64(x)).collect();
    if v[1] == 0.0 {
        return Err(Error::CriticalPoint);
    }
    Ok((v[1] * v[1] * v[2] + v[0] * v[1] * v[3] - 2.0 * v[0] * v[2] * v[2]) / (v[1] * v[1] * v[1]))
}

#[derive(Debug, Clone)]
pub struct AlphaLimit {
    pub limit: ExactRational,
    /// `(X, |alpha(X) - limit|)` along increasing `X`.
    pub witness: Vec<(ExactRational, ExactRational)>,
    pub decreasing: bool,
}

/// The limit `1 - 1/n` of `alpha_p` at infinity, with a numeric witness.
pub fn alpha_limit(p: &Poly) -> Result<AlphaLimit> {
    let n = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeTooLow(0)),
        Some(n) => n,
    };
    let limit = q(1) - frac(1, n as i64);
    let lc = p.leading_coeff().abs();
    let rel = p.coeffs().iter().map(|c| c.abs() / &lc).fold(q(0), |a, b| if b > a { b } else { a });
    let base = (q(1) + rel).ceil();
    let witness: Vec<(ExactRational, ExactRational)> = [1_000, 10_000, 100_000]
        .iter()
        .map(|&s| {
            let x = &base * q(s);
            let a = alpha(p, &x).value.exact().cloned().unwrap_or_else(|| limit.clone());
            let gap = (a - &limit).abs();
            (x, gap)
        })
        .collect();
    let all_zero = witness.iter().all(|(_, g)| g.is_zero());
    let decreasing = all_zero || witness.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(AlphaLimit { limit, witness, decreasing })
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub samples: usize,
    pub tolerance: f64,
    /// Width of the window past `x_1`; chosen from the root spread when `None`.
    pub span: Option<f64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { samples: 512, tolerance: 1e-9, span: None }
    }
}

#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    /// `(x, alpha)` along the grid, in increasing `x`.
    pub samples: Vec<(f64, f64)>,
    pub violations: usize,
    pub increasing: bool,
    pub bounded_by_limit: bool,
    /// `None` when the endpoint could not be checked exactly.
    pub endpoint_ok: Option<bool>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.increasing && self.bounded_by_limit && self.endpoint_ok != Some(false)
    }
}

/// Samples `alpha_p` on `(x_1, x_1 + span]` with a geometric cluster near
/// `x_1` and a uniform tail, comparing consecutive values exactly.
pub fn monotonicity_scan(p: &Poly, cert: &NoetherianCertificate, opts: &ScanOptions) -> Result<MonotonicityReport> {
    if !cert.verdict.is_right() || cert.degree() != p.deg() {
        return Err(Error::NotCertified);
    }
    let n = p.deg();
    let x0 = cert.root(0).ok_or(Error::NotCertified)?;
    let x1 = if n > 1 { cert.root(1).ok_or(Error::NotCertified)? } else { x0 };
    let coincident = n > 1 && crate::roots::compare(x0, x1) == std::cmp::Ordering::Equal;
    let exact_top = if coincident { x0.to_exact_rational() } else { None };
    let x1 = x1.refine(&frac(1, 1_000_000_000_000));
    let base = exact_top.clone().unwrap_or_else(|| x1.upper().clone());
    let x0f = x0.to_f64();
    let span = opts.span.unwrap_or(4.0 * (x0f - x1.to_f64()) + 4.0 * (1.0 + x0f.abs()));
    let eps = 1e-6 * (1.0 + x1.to_f64().abs());
    let geometric = (opts.samples / 2).max(2);
    let uniform = opts.samples.saturating_sub(geometric).max(1);
    let mut offsets: Vec<f64> = (0..geometric)
        .map(|i| eps * (span / eps).powf(i as f64 / (geometric - 1) as f64))
        .chain((1..=uniform).map(|i| span * i as f64 / uniform as f64))
        .collect();
    offsets.sort_by(f64::total_cmp);
    offsets.dedup();

    let limit = q(1) - frac(1, n as i64);
    let tol = from_f64(opts.tolerance);
    let mut values: Vec<(ExactRational, ExactRational)> = Vec::with_capacity(offsets.len() + 1);
    if let Some(top) = &exact_top {
        if let Some(v) = alpha(p, top).value.exact() {
            values.push((top.clone(), v.clone()));
        }
    }
    for off in offsets {
        let x = &base + from_f64(off);
        if let Some(v) = alpha(p, &x).value.exact() {
            values.push((x, v.clone()));
        }
    }
    let violations = values.windows(2).filter(|w| w[1].1 < &w[0].1 - &tol).count();
    let bounded_by_limit = values.iter().all(|(_, a)| a <= &(&limit + &tol));
    let endpoint_ok = if exact_top.is_some() {
        let m = x0.multiplicity() as i64;
        Some(values.first().is_some_and(|(_, a)| *a == q(1) - frac(1, m)))
    } else if n == 1 || coincident {
        None
    } else {
        values.first().zip(values.last()).map(|(a, b)| a.1.is_negative() && a.1 < b.1)
    };
    Ok(MonotonicityReport {
        samples: values.iter().map(|(x, a)| (to_f64(x), to_f64(a))).collect(),
        violations,
        increasing: violations == 0,
        bounded_by_limit,
        endpoint_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeProductReport {
    /// `(n-2) p' p'' >= n p p'''`.
    pub derivative_inequality: bool,
    /// `1 - 2/n >= alpha_p alpha_p'`, or `None` when `p' p'' = 0`.
    pub product_inequality: Option<bool>,
    /// Both inequalities hold strictly.
    pub strict: bool,
}

impl DerivativeProductReport {
    pub fn holds(&self) -> bool {
        self.derivative_inequality && self.product_inequality != Some(false)
    }
}

pub fn derivative_product_check(p: &Poly, x: &ExactRational) -> Result<DerivativeProductReport> {
    let n = p.deg();
    if p.is_zero() || n < 3 {
        return Err(Error::DegreeTooLow(n));
    }
    let v: Vec<ExactRational> = (0..4).map(|k| p.derivative(k).eval(x)).collect();
    let nq = q(n as i64);
    let lhs = (&nq - q(2)) * &v[1] * &v[2];
    let rhs = &nq * &v[0] * &v[3];
    let denom = &v[1] * &v[2];
    let (product_inequality, product_strict) = if denom.is_zero() {
        (None, false)
    } else {
        let bound = q(1) - q(2) / &nq;
        let prod = &v[0] * &v[3] / &denom;
        (Some(bound >= prod), bound > prod)
    };
    Ok(DerivativeProductReport {
        derivative_inequality: lhs >= rhs,
        product_inequality,
        strict: lhs > rhs && product_strict,
    })
}

/// Writes `(x, alpha)` rows under the header `x,alpha`.
pub fn write_alpha_csv<W: Write>(mut w: W, rows: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "x,alpha")?;
    for (x, a) in rows {
        writeln!(w, "{x},{a}")?;
    }
    Ok(())
}

/// Writes `(x, y, alpha)` rows under the header `x,y,alpha`.
pub fn write_deformation_csv<W: Write>(mut w: W, rows: &[(f64, f64, f64)]) -> io::Result<()> {
    writeln!(w, "x,y,alpha")?;
    for (x, y, a) in rows {
        writeln!(w, "{x},{y},{a}")?;
    }
    Ok(())
}

/// Uniform `(x, alpha)` samples on `[lo, hi]`, skipping points where the
/// value is not finite.
pub fn alpha_curve(p: &Poly, lo: f64, hi: f64, samples: usize) -> Vec<(f64, f64)> {
    let steps = samples.max(2) - 1;
    (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .filter_map(|x| alpha_f64(p, x).value.to_f64().filter(|v| v.is_finite()).map(|v| (x, v)))
        .collect()
}
