use num_traits::Zero;

use super::{alpha, alpha_f64};
use crate::error::{Error, Result};
use crate::noetherian::certify_right;
use crate::poly::Poly;
use crate::roots::AlgebraicNumber;
use crate::scalar::{format_decimal, frac, to_f64, ExactRational};

/// `P(., y) = sum_{k >= m} (x - y)^k p^(k)(y) / k!` for one value of `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationState {
    pub y: ExactRational,
    pub m: u32,
    pub poly: Poly,
}

/// The one-parameter family `P(x, y)`, `y` in `[x_m, x_0]`, attached to a
/// right-Noetherian polynomial whose largest root has multiplicity `m`.
#[derive(Debug, Clone)]
pub struct DeformationFamily {
    p: Poly,
    m: u32,
    x0: AlgebraicNumber,
    xm: AlgebraicNumber,
}

const RANGE_SLACK: (i64, i64) = (1, 1_000_000_000);

impl DeformationFamily {
    pub fn new(p: &Poly) -> Result<Self> {
        let cert = certify_right(p)?;
        if !cert.verdict.is_right() {
            return Err(Error::NotCertified);
        }
        let m = cert.top_multiplicity.ok_or(Error::NotCertified)?;
        let fine = frac(1, 1_000_000_000_000);
        let x0 = cert.root(0).ok_or(Error::NotCertified)?.refine(&fine);
        let xm = cert.root(m as usize).unwrap_or(&x0).refine(&fine);
        Ok(DeformationFamily { p: p.clone(), m, x0, xm })
    }

    pub fn multiplicity(&self) -> u32 {
        self.m
    }

    pub fn range(&self) -> (&AlgebraicNumber, &AlgebraicNumber) {
        (&self.xm, &self.x0)
    }

    /// Rational approximants within `1e-9` of the endpoints are accepted.
    pub fn at(&self, y: &ExactRational) -> Result<DeformationState> {
        let slack = frac(RANGE_SLACK.0, RANGE_SLACK.1);
        if *y < self.xm.lower() - &slack || *y > self.x0.upper() + &slack {
            return Err(Error::OutOfDeformationRange(format!(
                "y = {} not in [{}, {}]",
                format_decimal(y, 6),
                self.xm.approx(6),
                self.x0.approx(6)
            )));
        }
        let mut tail = self.p.taylor_shift(y).coeffs().to_vec();
        for c in tail.iter_mut().take(self.m as usize) {
            *c = ExactRational::zero();
        }
        let poly = Poly::new(tail).taylor_shift(&-y);
        Ok(DeformationState { y: y.clone(), m: self.m, poly })
    }

    /// `(x, y, alpha_P(x, y))` on a uniform grid of `(y, hi]`.
    pub fn curve(&self, y: &ExactRational, hi: f64, samples: usize) -> Result<Vec<(f64, f64, f64)>> {
        let state = self.at(y)?;
        let lo = to_f64(y);
        let yf = lo;
        Ok((1..=samples)
            .map(|i| lo + (hi - lo) * i as f64 / samples as f64)
            .filter_map(|x| alpha_f64(&state.poly, x).value.to_f64().map(|a| (x, yf, a)))
            .collect())
    }
}

pub fn deformation(p: &Poly, y: &ExactRational) -> Result<DeformationState> {
    DeformationFamily::new(p)?.at(y)
}

#[derive(Debug, Clone)]
pub struct DescentReport {
    pub comparisons: usize,
    pub failures: usize,
    /// Smallest `alpha_P(x, y_j) - alpha_P(x, y_(j+1))` observed.
    pub min_margin: Option<f64>,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks that `alpha_P(x, y)` strictly decreases between adjacent grid
/// values of `y`, at `samples` points `x` in `(y_(j+1), x_max]`. The
/// comparisons are exact.
pub fn deformation_alpha_descent(
    p: &Poly,
    ys: &[ExactRational],
    x_max: &ExactRational,
    samples: usize,
) -> Result<DescentReport> {
    let family = DeformationFamily::new(p)?;
    let mut ys = ys.to_vec();
    ys.sort();
    let states = ys.iter().map(|y| family.at(y)).collect::<Result<Vec<_>>>()?;
    let mut report = DescentReport { comparisons: 0, failures: 0, min_margin: None };
    for pair in states.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        let width = x_max - &upper.y;
        for i in 1..=samples {
            let x = &upper.y + &width * frac(i as i64, samples as i64);
            let a = alpha(&lower.poly, &x).value;
            let b = alpha(&upper.poly, &x).value;
            report.comparisons += 1;
            match (a.exact(), b.exact()) {
                (Some(a), Some(b)) => {
                    let margin = a - b;
                    if margin <= ExactRational::zero() {
                        report.failures += 1;
                    }
                    let m = to_f64(&margin);
                    report.min_margin = Some(report.min_margin.map_or(m, |v: f64| v.min(m)));
                }
                _ => report.failures += 1,
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots;
    use crate::scalar::q;

    fn quartic() -> Poly {
        Poly::from_ints(&[1275, -260, -24, 0, 1])
    }

    #[test]
    fn tail_at_the_root_reproduces_p() {
        let s = deformation(&quartic(), &q(5)).unwrap();
        assert_eq!(s.m, 2);
        assert_eq!(s.poly, quartic());
    }

    #[test]
    fn y_is_a_root_of_multiplicity_m() {
        let fam = DeformationFamily::new(&quartic()).unwrap();
        for y in [q(2), frac(5, 2), q(4)] {
            let s = fam.at(&y).unwrap();
            assert_eq!(s.poly.eval(&y), q(0));
            assert_eq!(s.poly.derivative(1).eval(&y), q(0));
        }
        let bottom = fam.at(&q(2)).unwrap();
        let top = roots::largest_real_root(&bottom.poly).unwrap().unwrap();
        assert!(top.multiplicity() >= 3);
        assert!(matches!(fam.at(&q(6)), Err(Error::OutOfDeformationRange(_))));
        assert!(matches!(fam.at(&frac(3, 2)), Err(Error::OutOfDeformationRange(_))));
    }

    #[test]
    fn simple_top_root_uses_x1() {
        let p = Poly::from_ints(&[-6, 11, -6, 1]);
        let fam = DeformationFamily::new(&p).unwrap();
        assert_eq!(fam.multiplicity(), 1);
        let (lo, hi) = fam.range();
        assert!((lo.to_f64() - (2.0 + 1.0 / 3f64.sqrt())).abs() < 1e-9);
        assert!((hi.to_f64() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn descent_on_a_small_grid() {
        let ys: Vec<ExactRational> = (9..=20).map(|k| frac(k, 4)).collect();
        let r = deformation_alpha_descent(&quartic(), &ys, &frac(42, 5), 20).unwrap();
        assert!(r.passed());
        assert_eq!(r.comparisons, 11 * 20);
        assert!(r.min_margin.unwrap() > 0.0);
        let single = deformation_alpha_descent(&quartic(), &[q(3)], &q(8), 20).unwrap();
        assert_eq!(single.comparisons, 0);
        assert!(single.passed());
    }
}
