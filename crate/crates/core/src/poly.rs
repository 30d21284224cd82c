//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, q, ExactRational, Scalar};

/// Polynomial with coefficients in ascending degree order.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and `degree()` returns `None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<ExactRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::new(vec![c])
    }

    /// `x - a`
    pub fn linear_root(a: &ExactRational) -> Self {
        Self::new(vec![-a.clone(), BigRational::one()])
    }

    /// `x^n`
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        Poly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> ExactRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, k: &ExactRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff().recip();
        self.scale(&lc)
    }

    /// Negates if the leading coefficient is negative; roots are unchanged.
    pub fn positive_leading(&self) -> Self {
        if self.leading_coeff().is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// k-th derivative.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if k > self.deg() || self.is_zero() {
            return Poly::zero();
        }
        let coeffs = (k..self.coeffs.len())
            .map(|i| {
                // i * (i-1) * ... * (i-k+1)
                let falling: BigInt = ((i - k + 1)..=i).map(BigInt::from).product();
                &self.coeffs[i] * BigRational::from_integer(falling)
            })
            .collect();
        Poly::new(coeffs)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_scalar<S: Scalar>(&self, x: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + S::from_q(c);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.eval_scalar(&x)
    }

    pub fn sign_at(&self, x: &ExactRational) -> i8 {
        crate::scalar::sign(&self.eval(x))
    }

    /// Returns `q` with `q(x) = p(x + a)`.
    pub fn taylor_shift(&self, a: &ExactRational) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // Repeated synthetic division by (x - a).
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Poly::new(c)
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.deg();
        let lc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let t = &rem[i + dd] / &lc;
            if !t.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &t * d;
                }
            }
            quot[i] = t;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic: same real roots, all simple.
    pub fn squarefree_part(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.deg() == 0 {
            return Ok(Poly::constant(BigRational::one()));
        }
        let g = self.gcd(&self.derivative(1));
        Ok(self.div_rem(&g).0.monic())
    }

    /// Sign-correct enclosure of `p` over `[lo, hi]` by interval Horner.
    pub fn eval_interval(&self, lo: &ExactRational, hi: &ExactRational) -> (ExactRational, ExactRational) {
        let mut acc = (BigRational::zero(), BigRational::zero());
        for c in self.coeffs.iter().rev() {
            let products = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let min = products.iter().min().unwrap().clone();
            let max = products.iter().max().unwrap().clone();
            acc = (min + c, max + c);
        }
        acc
    }

    /// Cauchy bound `1 + max |a_i / a_n|`; every root lies strictly inside.
    pub fn cauchy_bound(&self) -> ExactRational {
        let lc = self.leading_coeff().abs();
        let max = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(BigRational::zero);
        max + BigRational::one()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::scalar::to_f64).collect()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", format_rational(&mag))?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}
