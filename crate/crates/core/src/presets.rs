//! Named equations and the closed-form stability criteria for `n <= 4`.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots;
use crate::scalar::{format_rational, frac, from_f64, parse_rational, q, to_f64, ExactRational};
use crate::sigma::SigmaKPolynomial;

/// `sigma_n = c_0`.
pub fn monge_ampere(n: usize, c0: &ExactRational) -> Result<SigmaKPolynomial> {
    if !c0.is_positive() {
        return Err(Error::NonPositiveConstant);
    }
    if n == 0 {
        return Err(Error::DegreeTooLow(0));
    }
    let mut c = vec![ExactRational::zero(); n];
    c[0] = c0.clone();
    SigmaKPolynomial::new(c)
}

/// `sigma_n + c_top sigma_(n-1) = sum_(k <= n-2) c_k sigma_k` with
/// nonnegative `c_k`, not all zero, and `c_top` of either sign.
pub fn nonneg_coeff(n: usize, c: &[ExactRational], c_top: &ExactRational) -> Result<SigmaKPolynomial> {
    if n < 2 {
        return Err(Error::DegreeTooLow(n));
    }
    if c.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: c.len() });
    }
    if let Some(k) = c.iter().position(Signed::is_negative) {
        return Err(Error::HypothesisViolated(format!("c_{k} = {} is negative", format_rational(&c[k]))));
    }
    if c.iter().all(Zero::is_zero) {
        return Err(Error::HypothesisViolated("all lower coefficients vanish".into()));
    }
    let mut coeffs = c.to_vec();
    coeffs.push(-c_top);
    SigmaKPolynomial::new(coeffs)
}

/// `sigma_n = c sigma_k`, the Hessian quotient equation.
pub fn hessian(n: usize, k: usize, c: &ExactRational) -> Result<SigmaKPolynomial> {
    if n < 2 || k + 2 > n {
        return Err(Error::DegreeOutOfRange(k));
    }
    let mut lower = vec![ExactRational::zero(); n - 1];
    lower[k] = c.clone();
    nonneg_coeff(n, &lower, &ExactRational::zero())
}

/// `sigma_n = c_top sigma_(n-1)`.
pub fn j_equation(n: usize, c_top: &ExactRational) -> Result<SigmaKPolynomial> {
    if !c_top.is_positive() {
        return Err(Error::NonPositiveConstant);
    }
    if n == 0 {
        return Err(Error::DegreeTooLow(0));
    }
    let mut c = vec![ExactRational::zero(); n];
    c[n - 1] = c_top.clone();
    SigmaKPolynomial::new(c)
}

/// A phase `a pi + b` with rational `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase {
    pub pi_multiple: ExactRational,
    pub offset: ExactRational,
}

impl Phase {
    pub fn new(pi_multiple: ExactRational, offset: ExactRational) -> Self {
        Phase { pi_multiple, offset }
    }

    pub fn of_pi(pi_multiple: ExactRational) -> Self {
        Phase { pi_multiple, offset: ExactRational::zero() }
    }

    /// Accepts `3/4pi`, `3pi/4`, `-pi/2`, `pi`, `2/3pi+1/10` and plain
    /// rationals.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(at) = s.find("pi") else {
            return Ok(Phase { pi_multiple: ExactRational::zero(), offset: parse_rational(&s)? });
        };
        let head = s[..at].trim_end_matches('*');
        let mut a = match head {
            "" | "+" => q(1),
            "-" => q(-1),
            h => parse_rational(h)?,
        };
        let mut rest = &s[at + 2..];
        if let Some(tail) = rest.strip_prefix('/') {
            let end = tail.find(['+', '-']).unwrap_or(tail.len());
            let d = parse_rational(&tail[..end])?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero divisor in phase '{s}'")));
            }
            a /= d;
            rest = &tail[end..];
        }
        let offset = if rest.is_empty() { ExactRational::zero() } else { parse_rational(rest.trim_start_matches('+'))? };
        Ok(Phase { pi_multiple: a, offset })
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.pi_multiple) * PI + to_f64(&self.offset)
    }

    /// Exact sign of `self - t pi` using rational bounds on pi, or `None`
    /// if the bounds cannot separate it from zero.
    fn sign_minus_pi(&self, t: &ExactRational) -> Option<i8> {
        let u = &self.pi_multiple - t;
        if u.is_zero() {
            return Some(sign(&self.offset));
        }
        let (lo, hi) = pi_bounds();
        let (a, b) = (&u * &lo + &self.offset, &u * &hi + &self.offset);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a.is_positive() {
            Some(1)
        } else if b.is_negative() {
            Some(-1)
        } else {
            None
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}pi", format_rational(&self.pi_multiple))?;
        if !self.offset.is_zero() {
            let sign = if self.offset.is_negative() { "" } else { "+" };
            write!(f, "{sign}{}", format_rational(&self.offset))?;
        }
        Ok(())
    }
}

fn sign(x: &ExactRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn pi_bounds() -> (ExactRational, ExactRational) {
    let digits = "314159265358979323846264338327950288";
    let scale = BigInt::from(10).pow(digits.len() as u32 - 1);
    let lo: BigInt = digits.parse().expect("digits");
    (ExactRational::new(lo.clone(), scale.clone()), ExactRational::new(lo + 1, scale))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Phase in `((n-2) pi/2, n pi/2)`.
    Supercritical,
    /// Phase in `(-n pi/2, -(n-2) pi/2)`.
    Mirror,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DhymSpec {
    pub n: usize,
    pub phase: Phase,
    /// Decimal digits kept in each coefficient.
    pub precision: u32,
}

#[derive(Debug, Clone)]
pub struct DhymPreset {
    pub equation: SigmaKPolynomial,
    pub branch: Branch,
    /// Coefficients before rounding.
    pub coefficients: Vec<f64>,
    /// `tan((theta - k pi/2)/(n - k))` on the supercritical branch; the
    /// mirrored expression on the other branch, where the chain is the
    /// left one.
    pub expected_chain: Vec<f64>,
}

pub fn dhym_branch(n: usize, phase: &Phase) -> Result<Branch> {
    let half = |k: i64| frac(k, 2);
    let n = n as i64;
    let above = |t: i64| phase.sign_minus_pi(&half(t)).map(|s| s > 0);
    let below = |t: i64| phase.sign_minus_pi(&half(t)).map(|s| s < 0);
    if above(n - 2) == Some(true) && below(n) == Some(true) {
        Ok(Branch::Supercritical)
    } else if above(-n) == Some(true) && below(-(n - 2)) == Some(true) {
        Ok(Branch::Mirror)
    } else {
        Err(Error::PhaseOutOfRange)
    }
}

/// The deformed Hermitian-Yang-Mills operator
/// `Im(e^{-i theta} prod (1 + i lambda_j))`, normalized so that the
/// `sigma_n` coefficient is one: `c_k = sin(theta - k pi/2) / sin(n pi/2 - theta)`.
pub fn dhym(spec: &DhymSpec) -> Result<DhymPreset> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::DegreeTooLow(0));
    }
    let branch = dhym_branch(n, &spec.phase)?;
    let theta = spec.phase.to_f64();
    let denom = (n as f64 * PI / 2.0 - theta).sin();
    if denom.abs() < 1e-300 {
        return Err(Error::DegeneratePhase);
    }
    let coefficients: Vec<f64> = (0..n).map(|k| (theta - k as f64 * PI / 2.0).sin() / denom).collect();
    let scale = ExactRational::from_integer(BigInt::from(10).pow(spec.precision));
    let rounded = coefficients
        .iter()
        .map(|c| (from_f64(*c) * &scale).round() / &scale)
        .collect();
    let expected_chain = (0..n)
        .map(|k| {
            let kf = k as f64;
            let m = (n - k) as f64;
            match branch {
                Branch::Supercritical => ((theta - kf * PI / 2.0) / m).tan(),
                Branch::Mirror => -((-theta - kf * PI / 2.0) / m).tan(),
            }
        })
        .collect();
    Ok(DhymPreset { equation: SigmaKPolynomial::new(rounded)?, branch, coefficients, expected_chain })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormVerdict {
    StrictlyStable,
    NotStrictlyStable,
}

/// Explicit strict stability criteria in low degree, for operators with
/// `c_(n-1) = 0`:
///
/// * `n = 2`: `c_0 > 0`;
/// * `n = 3`: `c_1 >= 0` and `c_0 > -2 c_1^(3/2)`;
/// * `n = 4`: `c_2 >= 0`, `c_1 >= -2 c_2^(3/2)` and
///   `c_0 > -3 c_2 x_1^2 - 3 c_1 x_1`, where `x_1` is the largest root of
///   `x^3 - 3 c_2 x - c_1`.
///
/// Comparisons against irrational quantities are squared out where
/// possible; the last `n = 4` test uses interval evaluation on a rational
/// bracket of `x_1`.
pub fn closed_form_criterion(f: &SigmaKPolynomial) -> Result<ClosedFormVerdict> {
    let n = f.n();
    if !(2..=4).contains(&n) {
        return Err(Error::DegreeOutOfRange(n));
    }
    let c = f.c();
    if !c[n - 1].is_zero() {
        return Err(Error::TopCoefficientNotZero);
    }
    let strict = match n {
        2 => c[0].is_positive(),
        3 => cubic_criterion(&c[0], &c[1]),
        _ => quartic_criterion(&c[0], &c[1], &c[2]),
    };
    Ok(if strict { ClosedFormVerdict::StrictlyStable } else { ClosedFormVerdict::NotStrictlyStable })
}

/// `c_0 > -2 c_1^(3/2)` with `c_1 >= 0`.
fn cubic_criterion(c0: &ExactRational, c1: &ExactRational) -> bool {
    if c1.is_negative() {
        return false;
    }
    if c0.is_positive() {
        return true;
    }
    if c0.is_zero() {
        return c1.is_positive();
    }
    c0 * c0 < q(4) * c1 * c1 * c1
}

fn quartic_criterion(c0: &ExactRational, c1: &ExactRational, c2: &ExactRational) -> bool {
    if c2.is_negative() {
        return false;
    }
    let disc = q(4) * c2 * c2 * c2 - c1 * c1;
    if c1.is_negative() && disc.is_negative() {
        return false;
    }
    let x1 = x1_formula(to_f64(c1), to_f64(c2), !disc.is_negative());
    let cubic = Poly::new(vec![-c1, q(-3) * c2, q(0), q(1)]);
    let phi = Poly::new(vec![-c0, q(-3) * c1, q(-3) * c2]);
    let Some((mut lo, mut hi)) = bracket(&cubic, x1) else {
        return false;
    };
    for _ in 0..200 {
        let (a, b) = phi.eval_interval(&lo, &hi);
        if b.is_negative() {
            return true;
        }
        if !a.is_negative() {
            return false;
        }
        let mid = (&lo + &hi) / q(2);
        match sign(&cubic.eval(&mid)) {
            0 => return phi.eval(&mid).is_negative(),
            s if s < 0 => lo = mid,
            _ => hi = mid,
        }
    }
    false
}

/// Largest root of `x^3 - 3 c_2 x - c_1`. On `4 c_2^3 = c_1^2` both the
/// trigonometric and the hyperbolic expressions agree; the trigonometric
/// one is used.
fn x1_formula(c1: f64, c2: f64, trigonometric: bool) -> f64 {
    if c2 == 0.0 {
        return c1.cbrt();
    }
    let s = c2.sqrt();
    let ratio = c1 / (2.0 * s * s * s);
    if trigonometric {
        2.0 * s * (ratio.clamp(-1.0, 1.0).acos() / 3.0).cos()
    } else {
        2.0 * s * (ratio.acosh() / 3.0).cosh()
    }
}

/// A rational interval `[lo, hi]` around the largest root of `cubic` with
/// `cubic(lo) < 0 < cubic(hi)`, starting from a floating point estimate.
fn bracket(cubic: &Poly, estimate: f64) -> Option<(ExactRational, ExactRational)> {
    if estimate.is_finite() {
        let mut delta = 1e-12 * (1.0 + estimate.abs());
        for _ in 0..8 {
            let lo = from_f64(estimate - delta);
            let hi = from_f64(estimate + delta);
            let bound_ok = roots::count_above(cubic, &lo) == Some(1);
            if bound_ok && cubic.eval(&lo).is_negative() && cubic.eval(&hi).is_positive() {
                return Some((lo, hi));
            }
            delta *= 100.0;
        }
    }
    let root = roots::largest_real_root(cubic).ok()??;
    if let Some(r) = root.to_exact_rational() {
        if root.multiplicity() > 1 || cubic.derivative(1).eval(&r).is_zero() {
            return Some((r.clone(), r));
        }
    }
    let fine = root.refine(&frac(1, 1_000_000_000));
    Some((fine.lower().clone(), fine.upper().clone()))
}
