//! Second-order structure of the level set `{f = 0}` written as the graph
//! of `lambda_n` over the first `n - 1` coordinates.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{binomial_q, format_decimal, from_f64, to_f64, ExactRational, Scalar};
use crate::sigma::{
    certify_upsilon_stable, elementary, sample_region, MembershipOptions, SigmaKPolynomial, Stability, UpsilonCone,
};

/// Label attached to every numeric Hessian report: the positivity of this
/// matrix is an open question, so these numbers are evidence only.
pub const EXPLORATION_LABEL: &str = "conjecture-exploration";

#[derive(Debug, Clone, PartialEq)]
pub struct HDerivatives<S> {
    /// `h_i` for `h = sum c_k sigma_k / sigma_n`.
    pub gradient: Vec<S>,
    /// `h_ij`, an `n x n` matrix.
    pub hessian: Vec<Vec<S>>,
    /// `h_ij + h_nn h_i h_j / h_n^2 - h_in h_j / h_n - h_jn h_i / h_n` for
    /// `i, j < n`.
    pub bordered: Vec<Vec<S>>,
}

fn require_top_zero(f: &SigmaKPolynomial) -> Result<()> {
    if f.c()[f.n() - 1].is_zero() {
        Ok(())
    } else {
        Err(Error::TopCoefficientNotZero)
    }
}

/// `sum_k c_k sigma_k` of the coordinates outside `skip`.
fn c0_without<S: Scalar>(f: &SigmaKPolynomial, lambda: &[S], skip: &[usize]) -> S {
    let rest: Vec<S> = lambda.iter().enumerate().filter(|(i, _)| !skip.contains(i)).map(|(_, v)| v.clone()).collect();
    let e = elementary(&rest);
    f.c().iter().enumerate().take(rest.len() + 1).fold(S::zero(), |acc, (k, c)| {
        if c.is_zero() {
            acc
        } else {
            acc + S::from_q(c) * e[k].clone()
        }
    })
}

pub fn h_derivatives<S: Scalar>(f: &SigmaKPolynomial, lambda: &[S]) -> Result<HDerivatives<S>> {
    let n = f.n();
    if n < 2 {
        return Err(Error::DegreeTooLow(n));
    }
    if lambda.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: lambda.len() });
    }
    require_top_zero(f)?;
    if let Some(i) = lambda.iter().position(Zero::is_zero) {
        return Err(Error::ZeroCoordinate(i));
    }
    let sigma_n = lambda.iter().fold(S::one(), |acc, v| acc * v.clone());
    let residual = f.evaluate(lambda)?;
    let on_level = if S::EXACT {
        residual.is_zero()
    } else {
        residual.abs().to_f64() <= 1e-9 * (1.0 + sigma_n.abs().to_f64())
    };
    if !on_level {
        return Err(Error::NotOnLevelSet(format!("f = {:e}", residual.to_f64())));
    }

    let gradient: Vec<S> = (0..n)
        .map(|i| S::zero() - c0_without(f, lambda, &[i]) / (lambda[i].clone() * sigma_n.clone()))
        .collect();
    let hessian: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let denom = lambda[i].clone() * lambda[j].clone() * sigma_n.clone();
                    if i == j {
                        S::from_usize(2) * c0_without(f, lambda, &[i]) / denom
                    } else {
                        c0_without(f, lambda, &[i, j]) / denom
                    }
                })
                .collect()
        })
        .collect();
    let last = n - 1;
    let hn = gradient[last].clone();
    let bordered = (0..last)
        .map(|i| {
            (0..last)
                .map(|j| {
                    hessian[i][j].clone() + hessian[last][last].clone() * gradient[i].clone() * gradient[j].clone()
                        / (hn.clone() * hn.clone())
                        - hessian[i][last].clone() * gradient[j].clone() / hn.clone()
                        - hessian[j][last].clone() * gradient[i].clone() / hn.clone()
                })
                .collect()
        })
        .collect();
    Ok(HDerivatives { gradient, hessian, bordered })
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub bordered: Vec<Vec<f64>>,
    /// `C_{0;n} / (lambda_n sigma_n)` times the finite-difference Hessian of
    /// the graph function.
    pub finite_difference: Vec<Vec<f64>>,
    pub max_abs_diff: f64,
    pub max_abs_bordered: f64,
}

impl IdentityReport {
    pub fn within(&self, rel: f64) -> bool {
        self.max_abs_diff <= rel * self.max_abs_bordered.max(f64::MIN_POSITIVE)
    }
}

/// Compares the bordered `h` matrix with the rescaled Hessian of
/// `lambda_n(lambda_1, ..., lambda_(n-1))`. The difference quotients are
/// formed in exact arithmetic, so only truncation error remains.
pub fn bordered_identity_check(f: &SigmaKPolynomial, lambda: &[ExactRational], step: f64) -> Result<IdentityReport> {
    let h = h_derivatives(f, lambda)?;
    let n = f.n();
    let last = n - 1;
    let sigma_n = lambda.iter().fold(ExactRational::from_integer(1.into()), |a, v| a * v);
    let factor = c0_without(f, lambda, &[last]) / (&lambda[last] * &sigma_n);
    let base: Vec<ExactRational> = lambda[..last].to_vec();
    let steps: Vec<ExactRational> = base.iter().map(|b| from_f64(step * (1.0 + to_f64(b).abs()))).collect();
    let g = |shift: &[(usize, &ExactRational, i8)]| -> Result<ExactRational> {
        let mut b = base.clone();
        for &(i, s, sign) in shift {
            if sign > 0 {
                b[i] += s;
            } else {
                b[i] -= s;
            }
        }
        f.graph_lambda_n(&b)
    };
    let g0 = g(&[])?;
    let mut fd = vec![vec![0.0; last]; last];
    for i in 0..last {
        for j in i..last {
            let (hi, hj) = (&steps[i], &steps[j]);
            let d2 = if i == j {
                (g(&[(i, hi, 1)])? - ExactRational::from_integer(2.into()) * &g0 + g(&[(i, hi, -1)])?) / (hi * hi)
            } else {
                (g(&[(i, hi, 1), (j, hj, 1)])? - g(&[(i, hi, 1), (j, hj, -1)])? - g(&[(i, hi, -1), (j, hj, 1)])?
                    + g(&[(i, hi, -1), (j, hj, -1)])?)
                    / (ExactRational::from_integer(4.into()) * hi * hj)
            };
            let v = to_f64(&(&factor * d2));
            fd[i][j] = v;
            fd[j][i] = v;
        }
    }
    let bordered: Vec<Vec<f64>> = h.bordered.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let max_abs_bordered = bordered.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let max_abs_diff = bordered
        .iter()
        .flatten()
        .zip(fd.iter().flatten())
        .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    Ok(IdentityReport { bordered, finite_difference: fd, max_abs_diff, max_abs_bordered })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagScalarReport<S> {
    pub lambda_n: S,
    /// The scalar whose sign decides positivity of the reduced Hessian at
    /// the diagonal point `(x, ..., x, lambda_n)`.
    pub scalar: S,
    /// `r'(x)^2 alpha_r'(x) / (n (n - 1))` for the diagonal restriction `r`.
    pub via_alpha: S,
    pub difference: S,
}

/// Evaluates the reduced Hessian scalar at `(x, ..., x, lambda_n)` from the
/// binomial sums, together with its expression through `alpha_r'`.
pub fn hessian_diag_scalar<S: Scalar>(f: &SigmaKPolynomial, x: &S) -> Result<DiagScalarReport<S>> {
    let n = f.n();
    if n < 3 {
        return Err(Error::DegreeTooLow(n));
    }
    require_top_zero(f)?;
    let c = f.c();
    let pw = |k: usize| (0..k).fold(S::one(), |acc, _| acc * x.clone());
    // sum_{k=lo}^{n-2} c_k C(top, k - shift) x^(k - shift)
    let sum = |lo: usize, top: usize, shift: usize| -> S {
        (lo..=n - 2).fold(S::zero(), |acc, k| {
            if c[k].is_zero() || k < shift || k - shift > top {
                acc
            } else {
                acc + S::from_q(&(&c[k] * binomial_q(top, k - shift))) * pw(k - shift)
            }
        })
    };
    let g = pw(n - 1) - sum(1, n - 1, 1);
    if g <= S::zero() {
        return Err(Error::DenominatorNotPositive);
    }
    let lambda_n = sum(0, n - 1, 0) / g.clone();
    let a = pw(n - 2) - sum(2, n - 2, 2);
    let b = sum(1, n - 2, 1);
    let d = pw(n - 3) - sum(3, n - 3, 3);
    let e = sum(2, n - 3, 2);
    let scalar = S::from_usize(2 * (n - 1)) * (lambda_n.clone() * a.clone() - b) * a
        - S::from_usize(n - 2) * g * (lambda_n.clone() * d - e);

    let r = f.diagonal_restriction();
    let v: Vec<S> = (0..4).map(|k| r.derivative(k).eval_scalar(x)).collect();
    if v[1].is_zero() {
        return Err(Error::CriticalPoint);
    }
    let num = v[1].clone() * v[1].clone() * v[2].clone() + v[0].clone() * v[1].clone() * v[3].clone()
        - S::from_usize(2) * v[0].clone() * v[2].clone() * v[2].clone();
    let via_alpha = num / (S::from_usize(n * (n - 1)) * v[1].clone());
    let difference = scalar.clone() - via_alpha.clone();
    Ok(DiagScalarReport { lambda_n, scalar, via_alpha, difference })
}

#[derive(Debug, Clone)]
pub struct HessianReport {
    pub label: &'static str,
    pub matrix: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
}

/// Central-difference Hessian of the graph function at `base`, with steps
/// `step * (1 + |b_i|)`, and its spectrum.
pub fn hessian_levelset_numeric(f: &SigmaKPolynomial, base: &[f64], step: f64) -> Result<HessianReport> {
    let d = base.len();
    if d + 1 != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n() - 1, got: d });
    }
    let g = |b: &[f64]| f.graph_lambda_n(b);
    let g0 = g(base)?;
    let hs: Vec<f64> = base.iter().map(|b| step * (1.0 + b.abs())).collect();
    let at = |moves: &[(usize, f64)]| {
        let mut b = base.to_vec();
        for &(i, dx) in moves {
            b[i] += dx;
        }
        g(&b)
    };
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let (hi, hj) = (hs[i], hs[j]);
            let v = if i == j {
                (at(&[(i, hi)])? - 2.0 * g0 + at(&[(i, -hi)])?) / (hi * hi)
            } else {
                (at(&[(i, hi), (j, hj)])? - at(&[(i, hi), (j, -hj)])? - at(&[(i, -hi), (j, hj)])?
                    + at(&[(i, -hi), (j, -hj)])?)
                    / (4.0 * hi * hj)
            };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(HessianReport {
        label: EXPLORATION_LABEL,
        matrix: (0..d).map(|i| (0..d).map(|j| m[(i, j)]).collect()).collect(),
        min_eigenvalue: eigenvalues.first().copied().unwrap_or(f64::NAN),
        eigenvalues,
    })
}

#[derive(Debug, Clone)]
pub struct MidpointReport {
    pub pairs: usize,
    pub failures: usize,
    /// First failing midpoint, formatted, if any.
    pub first_failure: Option<Vec<String>>,
}

/// Draws `pairs` pairs of points of the cone and checks that each midpoint
/// also lies in the cone.
pub fn midpoint_convexity_test(f: &SigmaKPolynomial, pairs: usize, seed: u64) -> Result<MidpointReport> {
    match certify_upsilon_stable(f).stability {
        Stability::NotStable => return Err(Error::NotStableEquation),
        Stability::StableNotStrict => return Err(Error::NotStrictlyStable),
        Stability::StrictlyStable => {}
    }
    let cone = UpsilonCone::new(f)?;
    let points = sample_region(f, 2 * pairs, seed)?;
    let opts = MembershipOptions::default();
    let half = ExactRational::new(1.into(), 2.into());
    let mut report = MidpointReport { pairs, failures: 0, first_failure: None };
    for pair in points.chunks(2) {
        let mid: Vec<ExactRational> = pair[0].iter().zip(&pair[1]).map(|(a, b)| (a + b) * &half).collect();
        if !cone.membership(&mid, &opts)?.in_cone() {
            report.failures += 1;
            if report.first_failure.is_none() {
                report.first_failure = Some(mid.iter().map(|v| format_decimal(v, 6)).collect());
            }
        }
    }
    Ok(report)
}
