#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use sigmak_core::noetherian::Verdict;
use sigmak_core::scalar::{frac, q};
use sigmak_core::{ExactRational, Poly};

/// All complex roots of a polynomial with `f64` coefficients (constant term
/// first), from the eigenvalues of the companion matrix. Zero roots are
/// split off first; `None` when the QR iteration does not converge.
pub fn complex_roots(coeffs: &[f64]) -> Option<Vec<(f64, f64)>> {
    let mut c = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let zeros = c.iter().take_while(|v| **v == 0.0).count();
    let c = &c[zeros..];
    let n = c.len().saturating_sub(1);
    let mut roots = vec![(0.0, 0.0); zeros];
    if n == 0 {
        return Some(roots);
    }
    let lc = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lc;
    }
    let schur = m.try_schur(f64::EPSILON, 10_000)?;
    roots.extend(schur.complex_eigenvalues().iter().map(|z| (z.re, z.im)));
    Some(roots)
}

pub fn real_roots(coeffs: &[f64], im_tol: f64) -> Option<Vec<f64>> {
    let mut r: Vec<f64> =
        complex_roots(coeffs)?.into_iter().filter(|(re, im)| im.abs() <= im_tol * (1.0 + re.abs())).map(|z| z.0).collect();
    r.sort_by(f64::total_cmp);
    Some(r)
}

pub fn derivative_f64(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect()
}

pub fn eval_f64(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

/// Outcome of the floating point chain oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Strict,
    NotRight,
    /// Near-tie or ill-conditioned; decided by the exact path only.
    Excluded,
}

/// Finds every real root of every derivative numerically and checks that
/// the largest roots descend, `x_k >= x_(k+1)`, with strictness at the
/// top. Chains with two values closer than `tie` are excluded.
pub fn float_chain_oracle(coeffs: &[f64], tol: f64, tie: f64) -> OracleVerdict {
    let n = coeffs.len() - 1;
    let mut derivs = vec![coeffs.to_vec()];
    for _ in 1..n {
        let d = derivative_f64(derivs.last().unwrap());
        derivs.push(d);
    }
    let mut chain: Vec<Option<f64>> = Vec::with_capacity(n);
    for d in &derivs {
        let Some(roots) = complex_roots(d) else {
            return OracleVerdict::Excluded;
        };
        // A nearly real complex pair is a near-tie of two real roots.
        if roots.iter().any(|(re, im)| im.abs() > 1e-12 * (1.0 + re.abs()) && im.abs() < tie * (1.0 + re.abs())) {
            return OracleVerdict::Excluded;
        }
        let largest = roots
            .iter()
            .filter(|(re, im)| im.abs() <= 1e-12 * (1.0 + re.abs()))
            .map(|z| z.0)
            .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
        chain.push(largest);
    }
    // p^(k) nearly vanishing at x_(k+1) means x_k and x_(k+1) nearly
    // coincide, even when rounding has split a double root into a complex
    // pair.
    for k in 0..n.saturating_sub(1) {
        if let Some(x) = chain[k + 1] {
            let d = &derivs[k];
            let v = eval_f64(d, x);
            let scale = d.iter().rev().fold(0.0, |acc: f64, a| acc * x.abs() + a.abs());
            if v.abs() <= 1e-9 * scale {
                return OracleVerdict::Excluded;
            }
        }
    }
    for w in chain.windows(2) {
        if let (Some(a), Some(b)) = (w[0], w[1]) {
            if (a - b).abs() < tie * (1.0 + a.abs().max(b.abs())) {
                return OracleVerdict::Excluded;
            }
        }
    }
    // A derivative without real roots is positive everywhere, so the level
    // above it fails.
    if chain.iter().any(Option::is_none) {
        return OracleVerdict::NotRight;
    }
    let chain: Vec<f64> = chain.into_iter().flatten().collect();
    if chain.windows(2).any(|w| w[0] < w[1] - tol * (1.0 + w[1].abs())) {
        return OracleVerdict::NotRight;
    }
    OracleVerdict::Strict
}

pub fn exact_verdict_class(v: &Verdict) -> OracleVerdict {
    match v {
        Verdict::StrictRight => OracleVerdict::Strict,
        Verdict::RightNotStrict => OracleVerdict::Excluded,
        Verdict::NotRight { .. } => OracleVerdict::NotRight,
    }
}

pub fn random_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> ExactRational {
    let d = rng.gen_range(1..=max_den);
    frac(rng.gen_range(-bound * d..=bound * d), d)
}

/// `lc * prod (x - r_i)` with small rational roots.
pub fn random_real_rooted<R: Rng>(rng: &mut R, degree: usize) -> Poly {
    let mut p = Poly::constant(q(rng.gen_range(1..=3)) * if rng.gen_bool(0.5) { q(1) } else { q(-1) });
    for _ in 0..degree {
        let r = frac(rng.gen_range(-40..=40), rng.gen_range(1..=4));
        p = &p * &Poly::linear_root(&r);
    }
    p
}

pub fn random_int_poly<R: Rng>(rng: &mut R, degree: usize, bound: i64) -> Poly {
    let mut c: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-bound..=bound)).collect();
    if c[degree] == 0 {
        c[degree] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    Poly::from_ints(&c)
}
