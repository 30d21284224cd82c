//! The general inverse sigma_k operator
//! `f(l) = sigma_n(l) - sum_{k<n} c_k sigma_k(l)` and its cone structure.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::noetherian::{self, NoetherianCertificate, Verdict};
use crate::poly::Poly;
use crate::roots;
use crate::scalar::{binomial_q, format_rational, from_f64, parse_rational, pow, ExactRational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaKPolynomial {
    c: Vec<ExactRational>,
}

impl SigmaKPolynomial {
    /// `c = (c_0, ..., c_(n-1))`; the degree is `c.len()`.
    pub fn new(c: Vec<ExactRational>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::DegreeTooLow(0));
        }
        Ok(SigmaKPolynomial { c })
    }

    pub fn from_ints(c: &[i64]) -> Result<Self> {
        Self::new(c.iter().map(|&v| ExactRational::from_integer(v.into())).collect())
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self) -> &[ExactRational] {
        &self.c
    }

    /// Evaluates `f` at `lambda` using the prefix recurrence for the
    /// elementary symmetric polynomials.
    pub fn evaluate<S: Scalar>(&self, lambda: &[S]) -> Result<S> {
        let n = self.n();
        if lambda.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: lambda.len() });
        }
        let e = elementary(lambda);
        let mut acc = e[n].clone();
        for (k, ck) in self.c.iter().enumerate() {
            if !ck.is_zero() {
                acc = acc - S::from_q(ck) * e[k].clone();
            }
        }
        Ok(acc)
    }

    /// The operator obtained by dropping `l` variables:
    /// `sigma_(n-l) - sum_(k>=l) c_k sigma_(k-l)`. By symmetry it does not
    /// depend on which variables are dropped.
    pub fn restrict_level(&self, l: usize) -> Result<SigmaKPolynomial> {
        let n = self.n();
        if l == 0 || l >= n {
            return Err(Error::BadSubsetSize { size: l, max: n.saturating_sub(1) });
        }
        Ok(SigmaKPolynomial { c: self.c[l..].to_vec() })
    }

    /// Same as [`restrict_level`](Self::restrict_level), taking the dropped
    /// index set explicitly.
    pub fn partial_restriction(&self, dropped: &[usize]) -> Result<SigmaKPolynomial> {
        let n = self.n();
        let mut seen = vec![false; n];
        for &i in dropped {
            if i >= n || seen[i] {
                return Err(Error::BadSubsetSize { size: dropped.len(), max: n.saturating_sub(1) });
            }
            seen[i] = true;
        }
        self.restrict_level(dropped.len())
    }

    /// `r_f(x) = f(x, ..., x) = x^n - sum c_k C(n, k) x^k`.
    pub fn diagonal_restriction(&self) -> Poly {
        let n = self.n();
        let mut coeffs: Vec<ExactRational> =
            self.c.iter().enumerate().map(|(k, ck)| -(ck * binomial_q(n, k))).collect();
        coeffs.push(ExactRational::one());
        Poly::new(coeffs)
    }

    /// The substitution `mu = lambda - c_(n-1)`. Returns the operator in the
    /// `mu` variables, whose top coefficient vanishes, and the shift.
    pub fn translate(&self) -> (SigmaKPolynomial, ExactRational) {
        let n = self.n();
        let s = self.c[n - 1].clone();
        let d = (0..n)
            .map(|j| {
                let sum = (j..n).fold(ExactRational::zero(), |acc, k| {
                    acc + &self.c[k] * pow(&s, k - j) * binomial_q(n - j, k - j)
                });
                sum - pow(&s, n - j)
            })
            .collect();
        (SigmaKPolynomial { c: d }, s)
    }

    /// Solves `f(base, lambda_n) = 0` for the last coordinate.
    pub fn graph_lambda_n<S: Scalar>(&self, base: &[S]) -> Result<S> {
        let n = self.n();
        if base.len() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, got: base.len() });
        }
        let e = elementary(base);
        let mut num = S::zero();
        for (k, ck) in self.c.iter().enumerate() {
            if !ck.is_zero() {
                num = num + S::from_q(ck) * e[k].clone();
            }
        }
        let mut den = e[n - 1].clone();
        for j in 0..n - 1 {
            let cj = &self.c[j + 1];
            if !cj.is_zero() {
                den = den - S::from_q(cj) * e[j].clone();
            }
        }
        if den <= S::zero() {
            return Err(Error::DenominatorNotPositive);
        }
        Ok(num / den)
    }
}

/// `e[k] = sigma_k(x)` for `k = 0..=x.len()`.
pub(crate) fn elementary<S: Scalar>(x: &[S]) -> Vec<S> {
    let mut e = vec![S::zero(); x.len() + 1];
    e[0] = S::one();
    for (i, xi) in x.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] = e[k].clone() + xi.clone() * e[k - 1].clone();
        }
    }
    e
}

#[derive(Serialize, Deserialize)]
struct Wire {
    n: usize,
    c: Vec<String>,
}

impl Serialize for SigmaKPolynomial {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        Wire { n: self.n(), c: self.c.iter().map(format_rational).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SigmaKPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        if w.c.len() != w.n {
            return Err(D::Error::custom(format!("expected {} coefficients, got {}", w.n, w.c.len())));
        }
        let c = w
            .c
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        SigmaKPolynomial::new(c).map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    StrictlyStable,
    StableNotStrict,
    NotStable,
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        !matches!(self, Stability::NotStable)
    }
}

#[derive(Debug, Clone)]
pub struct StabilityCertificate {
    pub stability: Stability,
    pub certificate: NoetherianCertificate,
}

pub fn certify_upsilon_stable(f: &SigmaKPolynomial) -> StabilityCertificate {
    let certificate = noetherian::certify_right(&f.diagonal_restriction())
        .expect("diagonal restriction is monic of degree n >= 1");
    let stability = match certificate.verdict {
        Verdict::StrictRight => Stability::StrictlyStable,
        Verdict::RightNotStrict => Stability::StableNotStrict,
        Verdict::NotRight { .. } => Stability::NotStable,
    };
    StabilityCertificate { stability, certificate }
}

#[derive(Debug, Clone, Copy)]
pub struct MembershipOptions {
    /// Strictness margin for floating point inputs; ignored in exact mode.
    pub margin: f64,
    /// Evaluate every index subset instead of only the worst one.
    pub exhaustive: bool,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions { margin: 1e-9, exhaustive: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpsilonReport<S> {
    /// Smallest `l` such that the point lies in `Y_l`; `Some(0)` means the
    /// point lies in the cone itself.
    pub member_of: Option<usize>,
    /// Dropped indices of a subset witnessing the first failing level.
    pub failing_subset: Option<Vec<usize>>,
    /// `(level, minimum value)` for each level checked, top level first.
    pub per_level_values: Vec<(usize, S)>,
}

impl<S> UpsilonReport<S> {
    pub fn in_cone(&self) -> bool {
        self.member_of == Some(0)
    }

    pub fn in_level(&self, l: usize) -> bool {
        self.member_of.is_some_and(|m| m <= l)
    }
}

/// A stable operator together with its restrictions, for repeated
/// membership queries.
#[derive(Debug, Clone)]
pub struct UpsilonCone {
    f: SigmaKPolynomial,
    levels: Vec<SigmaKPolynomial>,
}

impl UpsilonCone {
    pub fn new(f: &SigmaKPolynomial) -> Result<Self> {
        if !certify_upsilon_stable(f).stability.is_stable() {
            return Err(Error::NotStableEquation);
        }
        let levels = (0..f.n()).map(|l| SigmaKPolynomial { c: f.c[l..].to_vec() }).collect();
        Ok(UpsilonCone { f: f.clone(), levels })
    }

    pub fn equation(&self) -> &SigmaKPolynomial {
        &self.f
    }

    pub fn membership<S: Scalar>(&self, mu: &[S], opts: &MembershipOptions) -> Result<UpsilonReport<S>> {
        let n = self.f.n();
        if mu.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: mu.len() });
        }
        let margin = if S::EXACT { S::zero() } else { S::from_q(&from_f64(opts.margin)) };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| mu[a].partial_cmp(&mu[b]).unwrap_or(Ordering::Equal));
        let mut per_level_values = Vec::with_capacity(n);

        for l in (0..n).rev() {
            let g = &self.levels[l];
            let kept: Vec<S> = order[..n - l].iter().map(|&i| mu[i].clone()).collect();
            let mut value = g.evaluate(&kept)?;
            let mut dropped: Vec<usize> = order[n - l..].to_vec();
            let near_zero = !S::EXACT && value.abs() <= margin.clone() * S::from_usize(1000);
            if l > 0 && (opts.exhaustive || near_zero) {
                for subset in subsets(n, l) {
                    let rest: Vec<S> =
                        (0..n).filter(|i| !subset.contains(i)).map(|i| mu[i].clone()).collect();
                    let v = g.evaluate(&rest)?;
                    if v < value {
                        value = v;
                        dropped = subset;
                    }
                }
            }
            let ok = value > margin;
            per_level_values.push((l, value));
            if !ok {
                dropped.sort_unstable();
                return Ok(UpsilonReport {
                    member_of: (l + 1 < n).then_some(l + 1),
                    failing_subset: Some(dropped),
                    per_level_values,
                });
            }
        }
        Ok(UpsilonReport { member_of: Some(0), failing_subset: None, per_level_values })
    }
}

pub fn upsilon_membership<S: Scalar>(
    f: &SigmaKPolynomial,
    mu: &[S],
    opts: &MembershipOptions,
) -> Result<UpsilonReport<S>> {
    UpsilonCone::new(f)?.membership(mu, opts)
}

/// All `l`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, l: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..l).collect();
    if l > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..l).rev().find(|&i| cur[i] < n - l + i) else { return out };
        cur[i] += 1;
        for j in i + 1..l {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct DominanceReport {
    pub dominates: bool,
    /// `compare(y_k, x_k)` for each level, `g` against `f`.
    pub levels: Vec<Ordering>,
}

/// Whether `g` dominates `f`: every chain root of `g` is at least the
/// corresponding chain root of `f`.
pub fn dominates(g: &SigmaKPolynomial, f: &SigmaKPolynomial) -> Result<DominanceReport> {
    if g.n() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: g.n() });
    }
    let cg = certify_upsilon_stable(g);
    let cf = certify_upsilon_stable(f);
    if !cg.stability.is_stable() || !cf.stability.is_stable() {
        return Err(Error::NotStableEquation);
    }
    let levels: Vec<Ordering> = cg
        .certificate
        .chain
        .iter()
        .zip(&cf.certificate.chain)
        .map(|(y, x)| roots::compare(y.as_ref().unwrap(), x.as_ref().unwrap()))
        .collect();
    let dominates = levels.iter().all(|o| *o != Ordering::Less);
    Ok(DominanceReport { dominates, levels })
}

/// Deterministic points inside the cone of a strictly stable operator.
/// Coordinates are drawn from `x_0 + s * U(-1, 2)` with `s = |x_0| + 1`,
/// so points near the boundary (some coordinates below `x_0`) are
/// included; each candidate is kept only if the exact membership check
/// accepts it.
pub fn sample_region(f: &SigmaKPolynomial, count: usize, seed: u64) -> Result<Vec<Vec<ExactRational>>> {
    let cert = certify_upsilon_stable(f);
    if cert.stability != Stability::StrictlyStable {
        return Err(Error::NotStrictlyStable);
    }
    let cone = UpsilonCone::new(f)?;
    let x0f = cert.certificate.chain[0].as_ref().unwrap().to_f64();
    let spread = x0f.abs() + 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 16 * count + 64;
    let mut out = Vec::with_capacity(count);
    let opts = MembershipOptions::default();
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let point: Vec<ExactRational> =
            (0..f.n()).map(|_| from_f64(x0f + spread * rng.gen_range(-1.0..2.0))).collect();
        if cone.membership(&point, &opts)?.in_cone() {
            out.push(point);
        }
    }
    if out.len() < count {
        return Err(Error::SamplingExhausted { wanted: count, attempts });
    }
    Ok(out)
}

/// Positivity of every coordinate-level quantity needed by the cone test,
/// for callers that only have an `f64` point.
pub fn in_cone_f64(cone: &UpsilonCone, mu: &[f64]) -> bool {
    cone.membership(mu, &MembershipOptions::default()).is_ok_and(|r| r.in_cone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, q};

    fn example_f() -> SigmaKPolynomial {
        SigmaKPolynomial::from_ints(&[-20, 9, -64, 19, 0]).unwrap()
    }

    fn example_g() -> SigmaKPolynomial {
        SigmaKPolynomial::from_ints(&[-24, -2, 65, 19, 0]).unwrap()
    }

    #[test]
    fn evaluation_matches_direct_expansion() {
        let ma = SigmaKPolynomial::from_ints(&[1, 0]).unwrap();
        assert_eq!(ma.evaluate(&[q(1), q(1)]).unwrap(), q(0));
        let twelve = vec![q(12); 5];
        let r = example_f().diagonal_restriction();
        assert_eq!(example_f().evaluate(&twelve).unwrap(), r.eval(&q(12)));
        assert!(r.eval(&q(12)) > q(0));
        assert_eq!(
            example_f().evaluate(&vec![q(1); 4]),
            Err(Error::DimensionMismatch { expected: 5, got: 4 })
        );
    }

    #[test]
    fn restrictions_shift_indices() {
        let f = example_f();
        assert_eq!(f.restrict_level(1).unwrap().c(), SigmaKPolynomial::from_ints(&[9, -64, 19, 0]).unwrap().c());
        assert_eq!(f.restrict_level(4).unwrap().c(), &[q(0)]);
        assert_eq!(f.partial_restriction(&[0, 3]).unwrap().n(), 3);
        assert!(matches!(f.restrict_level(5), Err(Error::BadSubsetSize { .. })));
        assert!(matches!(f.partial_restriction(&[1, 1]), Err(Error::BadSubsetSize { .. })));
        let ma = SigmaKPolynomial::from_ints(&[3, 0, 0]).unwrap();
        assert!(ma.restrict_level(1).unwrap().c().iter().all(Zero::is_zero));
    }

    #[test]
    fn diagonal_restrictions() {
        assert_eq!(example_f().diagonal_restriction(), Poly::from_ints(&[20, -45, 640, -190, 0, 1]));
        assert_eq!(example_g().diagonal_restriction(), Poly::from_ints(&[24, 10, -650, -190, 0, 1]));
        let ma = SigmaKPolynomial::from_ints(&[7, 0, 0]).unwrap();
        assert_eq!(ma.diagonal_restriction(), Poly::from_ints(&[-7, 0, 0, 1]));
    }

    #[test]
    fn translation() {
        let f = SigmaKPolynomial::new(vec![frac(3, 2), frac(-5, 3)]).unwrap();
        let (g, s) = f.translate();
        assert_eq!(s, frac(-5, 3));
        assert_eq!(g.c(), &[frac(3, 2) + frac(25, 9), q(0)]);
        let (same, zero) = example_f().translate();
        assert_eq!(same, example_f());
        assert_eq!(zero, q(0));
        let h = SigmaKPolynomial::from_ints(&[2, -3, 5, 1]).unwrap();
        let (t, s) = h.translate();
        assert_eq!(t.diagonal_restriction(), h.diagonal_restriction().taylor_shift(&s));
    }

    #[test]
    fn stability_verdicts() {
        assert_eq!(certify_upsilon_stable(&example_f()).stability, Stability::StrictlyStable);
        let cert = certify_upsilon_stable(&example_g());
        assert_eq!(cert.stability, Stability::StrictlyStable);
        let approx: Vec<String> = cert.certificate.chain.iter().map(|x| x.as_ref().unwrap().approx(3)).collect();
        assert_eq!(approx, ["15.250", "11.673", "8.066", "4.359", "0.000"]);
        let bad = SigmaKPolynomial::from_ints(&[-1, 0]).unwrap();
        assert_eq!(certify_upsilon_stable(&bad).stability, Stability::NotStable);
    }

    #[test]
    fn membership_levels() {
        let opts = MembershipOptions::default();
        let ma = SigmaKPolynomial::from_ints(&[1, 0, 0]).unwrap();
        assert_eq!(upsilon_membership(&ma, &vec![q(2); 3], &opts).unwrap().member_of, Some(0));
        let f = example_f();
        assert_eq!(upsilon_membership(&f, &vec![q(12); 5], &opts).unwrap().member_of, Some(0));
        let five = upsilon_membership(&f, &vec![q(5); 5], &opts).unwrap();
        assert_eq!(five.member_of, Some(3));
        assert!(five.in_level(3) && !five.in_level(2));
        assert_eq!(five.failing_subset.as_ref().unwrap().len(), 2);
        let exhaustive = MembershipOptions { exhaustive: true, ..opts };
        assert_eq!(upsilon_membership(&f, &vec![q(5); 5], &exhaustive).unwrap().member_of, Some(3));
        let bad = SigmaKPolynomial::from_ints(&[-1, 0]).unwrap();
        assert_eq!(upsilon_membership(&bad, &[q(1), q(1)], &opts), Err(Error::NotStableEquation));
    }

    #[test]
    fn float_membership_agrees() {
        let cone = UpsilonCone::new(&example_f()).unwrap();
        assert!(in_cone_f64(&cone, &[12.0, 13.0, 12.5, 20.0, 12.1]));
        assert!(!in_cone_f64(&cone, &[5.0; 5]));
        assert!(!in_cone_f64(&cone, &[-1.0, 30.0, 30.0, 30.0, 30.0]));
    }

    #[test]
    fn dominance() {
        let r = dominates(&example_g(), &example_f()).unwrap();
        use Ordering::*;
        assert!(r.dominates);
        assert_eq!(r.levels, vec![Greater, Greater, Greater, Equal, Equal]);
        assert!(dominates(&example_f(), &example_f()).unwrap().levels.iter().all(|o| *o == Equal));
        let ma = SigmaKPolynomial::from_ints(&[1, 0, 0, 0, 0]).unwrap();
        assert!(!dominates(&ma, &example_f()).unwrap().dominates);
    }

    #[test]
    fn graph_of_the_last_coordinate() {
        let ma = SigmaKPolynomial::from_ints(&[1, 0]).unwrap();
        assert_eq!(ma.graph_lambda_n(&[q(2)]).unwrap(), frac(1, 2));
        let f = example_f();
        let t = frac(11632, 1000);
        let ln = f.graph_lambda_n(&[t.clone(), t.clone(), t.clone(), t.clone()]).unwrap();
        assert!((crate::scalar::to_f64(&ln) - 11.632).abs() < 0.01);
        let base = vec![q(13), frac(29, 2), q(12), q(20)];
        let ln = f.graph_lambda_n(&base).unwrap();
        let mut full = base.clone();
        full.push(ln);
        assert_eq!(f.evaluate(&full).unwrap(), q(0));
        assert_eq!(ma.graph_lambda_n(&[q(0)]), Err(Error::DenominatorNotPositive));
    }

    #[test]
    fn sampling() {
        let ma = SigmaKPolynomial::from_ints(&[1, 0]).unwrap();
        let pts = sample_region(&ma, 3, 42).unwrap();
        assert_eq!(pts.len(), 3);
        for p in &pts {
            assert!(&p[0] * &p[1] > q(1) && p[0] > q(0) && p[1] > q(0));
        }
        assert_eq!(pts, sample_region(&ma, 3, 42).unwrap());
        let cone = UpsilonCone::new(&example_f()).unwrap();
        for p in sample_region(&example_f(), 10, 7).unwrap() {
            assert!(cone.membership(&p, &MembershipOptions::default()).unwrap().in_cone());
        }
        assert!(sample_region(&ma, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn serde_round_trip() {
        let f = SigmaKPolynomial::new(vec![frac(-3, 2), q(0), q(4)]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"n":3,"c":["-3/2","0","4"]}"#);
        assert_eq!(serde_json::from_str::<SigmaKPolynomial>(&s).unwrap(), f);
        assert!(serde_json::from_str::<SigmaKPolynomial>(r#"{"n":2,"c":["1"]}"#).is_err());
        let dec: SigmaKPolynomial = serde_json::from_str(r#"{"n":1,"c":["0.25"]}"#).unwrap();
        assert_eq!(dec.c(), &[frac(1, 4)]);
    }

    #[test]
    fn subsets_enumerate() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }
}
