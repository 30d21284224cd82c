//! Resultants and discriminants.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{pow, ExactRational};

/// Above this Sylvester size the Euclidean remainder route is used.
const SYLVESTER_LIMIT: usize = 12;

/// Sylvester matrix in the column layout: the first `e` columns carry
/// shifted copies of `p1`, the last `d` columns shifted copies of `p2`.
pub fn sylvester_matrix(p1: &Poly, p2: &Poly) -> Vec<Vec<ExactRational>> {
    let d = p1.deg();
    let e = p2.deg();
    let size = d + e;
    let mut m = vec![vec![BigRational::zero(); size]; size];
    for col in 0..e {
        for k in 0..=d {
            m[col + k][col] = p1.coeff(d - k);
        }
    }
    for col in 0..d {
        for k in 0..=e {
            m[col + k][e + col] = p2.coeff(e - k);
        }
    }
    m
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn determinant(mut m: Vec<Vec<ExactRational>>) -> ExactRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut sign = BigRational::one();
    let mut prev = BigRational::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Resultant through the Euclidean remainder sequence.
pub fn resultant_euclid(p1: &Poly, p2: &Poly) -> ExactRational {
    let (mut a, mut b) = (p1.clone(), p2.clone());
    let mut acc = BigRational::one();
    loop {
        let (da, db) = (a.deg(), b.deg());
        if db == 0 {
            return acc * pow(&b.leading_coeff(), da);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return BigRational::zero();
        }
        let dr = r.deg();
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc *= pow(&b.leading_coeff(), da - dr);
        a = b;
        b = r;
    }
}

pub fn resultant(p1: &Poly, p2: &Poly) -> Result<ExactRational> {
    if p1.is_zero() || p2.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p1.deg() + p2.deg() <= SYLVESTER_LIMIT {
        Ok(determinant(sylvester_matrix(p1, p2)))
    } else {
        Ok(resultant_euclid(p1, p2))
    }
}

/// `(-1)^(n(n-1)/2) / a_n * res(p, p')`.
pub fn discriminant(p: &Poly) -> Result<ExactRational> {
    let n = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::DegreeTooLow(0)),
        Some(n) => n,
    };
    let r = resultant(p, &p.derivative(1))?;
    let sign = if (n * (n - 1) / 2) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    Ok(sign * r / p.leading_coeff())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, q};

    #[test]
    fn linear_resultant() {
        let a = frac(3, 7);
        let b = q(-2);
        let r = resultant(&Poly::linear_root(&a), &Poly::linear_root(&b)).unwrap();
        assert_eq!(r, &a - &b);
    }

    #[test]
    fn depressed_cubic_resultant() {
        // res(x^3 - 3x - 1, 3x^2 - 3) = -81; the discriminant carries the
        // (-1)^(n(n-1)/2) sign and equals 27(4 - 1) = 81.
        let cubic = Poly::from_ints(&[-1, -3, 0, 1]);
        let der = Poly::from_ints(&[-3, 0, 3]);
        assert_eq!(resultant(&cubic, &der).unwrap(), q(-81));
        assert_eq!(discriminant(&cubic).unwrap(), q(81));
    }

    #[test]
    fn resultant_with_constant() {
        let p = Poly::from_ints(&[1, 2, 3, 4]);
        assert_eq!(resultant(&p, &Poly::from_ints(&[5])).unwrap(), q(125));
        assert_eq!(resultant(&p, &Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn classical_discriminants() {
        let (b, c) = (q(3), frac(-5, 2));
        let p = Poly::new(vec![c.clone(), b.clone(), q(1)]);
        assert_eq!(discriminant(&p).unwrap(), &b * &b - q(4) * c);
        assert_eq!(discriminant(&Poly::from_ints(&[1, -2, 1])).unwrap(), q(0));
        assert_eq!(discriminant(&Poly::from_ints(&[4])), Err(Error::DegreeTooLow(0)));
    }

    #[test]
    fn both_routes_agree() {
        let a = Poly::from_ints(&[3, -1, 4, 1, -5, 9, 2]);
        let b = Poly::from_ints(&[2, 6, -5, 3, 5]);
        assert_eq!(determinant(sylvester_matrix(&a, &b)), resultant_euclid(&a, &b));
        assert_eq!(determinant(sylvester_matrix(&b, &a)), resultant_euclid(&b, &a));
    }
}
