//! Right- and left-Noetherian certificates for univariate polynomials.
//!
//! `p` of degree `n` is right-Noetherian when every derivative `p^(k)` has a
//! real root at or above the largest real root `x_(k+1)` of `p^(k+1)`. The
//! certificate carries the chain `x_0 >= x_1 >= ... >= x_(n-1)` as exact
//! algebraic numbers together with the sign of `p^(k)` at `x_(k+1)`.
//!
//! With a positive leading coefficient, `p^(k)` is strictly increasing on
//! `(x_(k+1), inf)`, so the level-`k` condition holds iff
//! `sign p^(k)(x_(k+1)) <= 0`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{self, AlgebraicNumber};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureEvidence {
    /// `p^(k)` is positive at `x_(k+1)`, so no root of `p^(k)` reaches it.
    PositiveAt,
    /// `p^(k+1)` has no real root at all.
    MissingRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    StrictRight,
    RightNotStrict,
    NotRight { level: usize, evidence: FailureEvidence },
}

impl Verdict {
    pub fn is_right(&self) -> bool {
        !matches!(self, Verdict::NotRight { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone)]
pub struct NoetherianCertificate {
    pub side: Side,
    pub verdict: Verdict,
    /// `chain[k]` is the extreme real root of `p^(k)` (largest for `Right`,
    /// smallest for `Left`), in the coordinates of the input polynomial.
    pub chain: Vec<Option<AlgebraicNumber>>,
    /// `signs[k]` is the sign of `p^(k)` at `x_(k+1)` (after normalizing
    /// the leading coefficient and, for `Left`, reflecting).
    pub signs: Vec<Option<i8>>,
    pub top_multiplicity: Option<u32>,
}

impl NoetherianCertificate {
    pub fn degree(&self) -> usize {
        self.chain.len()
    }

    /// Chain root at level `k`, when computed.
    pub fn root(&self, k: usize) -> Option<&AlgebraicNumber> {
        self.chain.get(k).and_then(Option::as_ref)
    }

    /// Re-checks the certificate: monotone chain and each chain root is a
    /// root of the corresponding derivative of `p`.
    pub fn verify(&self, p: &Poly) -> bool {
        if !self.verdict.is_right() || self.chain.iter().any(Option::is_none) {
            return true;
        }
        let chain: Vec<&AlgebraicNumber> = self.chain.iter().flatten().collect();
        let ordered = chain.windows(2).all(|w| match self.side {
            Side::Right => roots::compare(w[0], w[1]) != Ordering::Less,
            Side::Left => roots::compare(w[0], w[1]) != Ordering::Greater,
        });
        ordered && chain.iter().enumerate().all(|(k, x)| roots::sign_at(&p.derivative(k), x) == 0)
    }
}

/// Decides (strict) right-Noetherianness.
pub fn certify_right(p: &Poly) -> Result<NoetherianCertificate> {
    let n = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeTooLow(0)),
        Some(n) => n,
    };
    let p = p.positive_leading();
    let derivs: Vec<Poly> = (0..n).map(|k| p.derivative(k)).collect();
    let mut chain: Vec<Option<AlgebraicNumber>> = vec![None; n];
    let mut signs: Vec<Option<i8>> = vec![None; n.saturating_sub(1)];
    chain[n - 1] = roots::largest_real_root(&derivs[n - 1])?;

    for k in (0..n - 1).rev() {
        let Some(next) = chain[k + 1].clone() else {
            return Ok(NoetherianCertificate {
                side: Side::Right,
                verdict: Verdict::NotRight { level: k, evidence: FailureEvidence::MissingRoot },
                chain,
                signs,
                top_multiplicity: None,
            });
        };
        let mut probe = next.clone();
        let s = roots::sign_at_refining(&derivs[k], &mut probe);
        signs[k] = Some(s);
        if s > 0 {
            return Ok(NoetherianCertificate {
                side: Side::Right,
                verdict: Verdict::NotRight { level: k, evidence: FailureEvidence::PositiveAt },
                chain,
                signs,
                top_multiplicity: None,
            });
        }
        chain[k] = if s == 0 {
            let m = count_vanishing(&derivs[k], &next);
            Some(next.with_multiplicity(m))
        } else {
            roots::largest_real_root(&derivs[k])?
        };
    }

    let strict = n == 1 || signs[0] == Some(-1);
    let top_multiplicity = chain[0].as_ref().map(AlgebraicNumber::multiplicity);
    Ok(NoetherianCertificate {
        side: Side::Right,
        verdict: if strict { Verdict::StrictRight } else { Verdict::RightNotStrict },
        chain,
        signs,
        top_multiplicity,
    })
}

fn count_vanishing(p: &Poly, alpha: &AlgebraicNumber) -> u32 {
    let mut m = 0;
    let mut d = p.clone();
    while !d.is_zero() && roots::sign_at(&d, alpha) == 0 {
        m += 1;
        d = d.derivative(1);
    }
    m
}

/// Left-Noetherianness via the reflection `x -> -x`, which swaps smallest
/// and largest roots. The chain is reported in the original coordinates.
pub fn certify_left(p: &Poly) -> Result<NoetherianCertificate> {
    let mirrored = certify_right(&p.reflect())?;
    Ok(NoetherianCertificate {
        side: Side::Left,
        chain: mirrored.chain.iter().map(|x| x.as_ref().map(AlgebraicNumber::neg)).collect(),
        ..mirrored
    })
}

/// True iff all roots are real (counted with multiplicity).
pub fn is_real_rooted(p: &Poly) -> Result<bool> {
    Ok(roots::real_root_count_with_multiplicity(p)? as usize == p.deg())
}

pub fn multiplicity_at_largest_root(p: &Poly) -> Result<u32> {
    roots::largest_real_root(p)?.map(|r| r.multiplicity()).ok_or(Error::NoRealRoot)
}

/// Floating-point chain computation, for inputs that are only known
/// approximately. Not a certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatCertificate {
    pub verdict: Verdict,
    pub chain: Vec<Option<f64>>,
}

/// Bisection on the monotone branch of each derivative, in double
/// precision. Signs within `tol * scale` of zero count as zero.
pub fn certify_right_f64(coeffs: &[f64], tol: f64) -> Result<FloatCertificate> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    if c.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let n = c.len() - 1;
    if n == 0 {
        return Err(Error::DegreeTooLow(0));
    }
    if c[n] < 0.0 {
        c.iter_mut().for_each(|v| *v = -*v);
    }
    let derivs: Vec<Vec<f64>> = (0..n).map(|k| derivative_f64(&c, k)).collect();
    let mut chain = vec![None; n];
    let lin = &derivs[n - 1];
    chain[n - 1] = Some(-lin[0] / lin[1]);
    let mut strict = true;
    for k in (0..n - 1).rev() {
        let d = &derivs[k];
        let start = chain[k + 1].unwrap();
        let (v, scale) = eval_with_scale(d, start);
        if v > tol * scale {
            return Ok(FloatCertificate {
                verdict: Verdict::NotRight { level: k, evidence: FailureEvidence::PositiveAt },
                chain,
            });
        }
        if k == 0 && v >= -tol * scale {
            strict = false;
        }
        if v >= -tol * scale {
            chain[k] = Some(start);
            continue;
        }
        let lc = d[d.len() - 1].abs();
        let bound = 1.0 + d[..d.len() - 1].iter().map(|a| a.abs() / lc).fold(0.0, f64::max);
        let (mut lo, mut hi) = (start, bound.max(start + 1.0));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval_f64(d, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        chain[k] = Some(0.5 * (lo + hi));
    }
    Ok(FloatCertificate {
        verdict: if strict { Verdict::StrictRight } else { Verdict::RightNotStrict },
        chain,
    })
}

/// Mirror of [`certify_right_f64`]: the chain holds smallest roots.
pub fn certify_left_f64(coeffs: &[f64], tol: f64) -> Result<FloatCertificate> {
    let reflected: Vec<f64> = coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { *c }).collect();
    let mirrored = certify_right_f64(&reflected, tol)?;
    Ok(FloatCertificate { verdict: mirrored.verdict, chain: mirrored.chain.iter().map(|x| x.map(|v| -v)).collect() })
}

fn derivative_f64(c: &[f64], k: usize) -> Vec<f64> {
    (k..c.len())
        .map(|i| c[i] * ((i - k + 1)..=i).map(|j| j as f64).product::<f64>())
        .collect()
}

fn eval_f64(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// Value and the magnitude sum `sum |a_i x^i|` bounding its rounding error.
fn eval_with_scale(c: &[f64], x: f64) -> (f64, f64) {
    let v = eval_f64(c, x);
    let s = c.iter().rev().fold(0.0, |acc: f64, a| acc * x.abs() + a.abs());
    (v, s.max(f64::MIN_POSITIVE))
}
