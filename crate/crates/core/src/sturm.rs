//! Sturm sequences and real-root counting.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::poly::Poly;
use crate::scalar::ExactRational;

/// Sturm sequence of the squarefree part of a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    /// Builds `p, p', -rem(p, p'), ...` on the squarefree part of `p`.
    ///
    /// Remainders are rescaled by positive constants, which leaves every
    /// sign pattern unchanged.
    pub fn new(p: &Poly) -> Result<Self> {
        let p0 = p.squarefree_part()?;
        let mut chain = vec![p0.clone()];
        let p1 = p0.derivative(1);
        if !p1.is_zero() {
            chain.push(normalize_positive(&p1));
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(normalize_positive(&-r));
            }
        }
        Ok(SturmChain { chain })
    }

    pub fn polys(&self) -> &[Poly] {
        &self.chain
    }

    pub fn squarefree(&self) -> &Poly {
        &self.chain[0]
    }

    /// Sign variations at a finite point, zeros skipped.
    pub fn variations_at(&self, x: &ExactRational) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    /// Sign variations at `+inf` (`positive = true`) or `-inf`.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        count_variations(self.chain.iter().map(|p| {
            let s = if p.leading_coeff().is_positive() { 1 } else { -1 };
            if positive || p.deg() % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Distinct real roots in the half-open interval `(a, b]`.
    pub fn count_in(&self, a: &ExactRational, b: &ExactRational) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_at(a) - self.variations_at(b)
    }

    /// Distinct real roots in the closed interval `[a, b]`.
    pub fn count_closed(&self, a: &ExactRational, b: &ExactRational) -> usize {
        let at_a = usize::from(self.chain[0].eval(a).is_zero());
        if a == b {
            return at_a;
        }
        at_a + self.count_in(a, b)
    }

    /// Distinct real roots on the whole line.
    pub fn count_real(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

fn normalize_positive(p: &Poly) -> Poly {
    let lc = p.leading_coeff().abs();
    p.scale(&(BigRational::from_integer(1.into()) / lc))
}

fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

pub fn sturm_chain(p: &Poly) -> Result<SturmChain> {
    SturmChain::new(p)
}

/// Root count on `(a, b]`, exposed for convenience.
pub fn count_roots(p: &Poly, a: &ExactRational, b: &ExactRational) -> Result<usize> {
    Ok(SturmChain::new(p)?.count_in(a, b))
}
