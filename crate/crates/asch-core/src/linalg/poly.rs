//! Dense integer polynomials, lowest degree first.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::RationalMatrix;

/// A polynomial with arbitrary-precision integer coefficients.
///
/// Coefficients are stored lowest degree first. The zero polynomial has an
/// empty coefficient vector; otherwise the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPolynomial { coeffs: vec![c] }.trimmed()
    }

    /// `x - root`
    pub fn linear_root(root: &BigInt) -> Self {
        IntPolynomial {
            coeffs: vec![-root.clone(), BigInt::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        IntPolynomial { coeffs }.trimmed()
    }

    /// Monic polynomial with the given root multiset.
    pub fn from_roots(roots: &[BigInt]) -> Self {
        roots
            .iter()
            .fold(IntPolynomial::one(), |acc, r| &acc * &Self::linear_root(r))
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation with the argument a square rational matrix.
    pub fn eval_matrix(&self, m: &RationalMatrix) -> RationalMatrix {
        assert!(m.is_square(), "matrix substitution needs a square matrix");
        let n = m.rows();
        let mut acc = RationalMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &acc.mul(m) + &RationalMatrix::scalar(n, c.clone().into());
        }
        acc
    }

    /// Exact division, returning `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        let dd = divisor.degree().unwrap();
        let nd = self.degree().unwrap();
        if nd < dd {
            return None;
        }
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = std::mem::take(&mut rem[k + dd]);
            if top.is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&top, lead);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate().take(dd) {
                rem[k + i] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPolynomial::from_coeffs(quot))
    }

    /// Synthetic division by `x - root`; `None` unless `root` is a root.
    pub fn deflate(&self, root: &BigInt) -> Option<IntPolynomial> {
        self.exact_div(&Self::linear_root(root))
    }
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }
}

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "x")?,
                1 => write!(f, "{a}x")?,
                _ if a.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn arithmetic_and_trim() {
        let p = poly(&[1, 2, 1]); // (x+1)^2
        let q = poly(&[-1, 1]); // x-1
        assert_eq!(&p * &q, poly(&[-1, -1, 1, 1]));
        assert_eq!(&p - &p, IntPolynomial::zero());
        assert_eq!(p.degree(), Some(2));
        assert_eq!(IntPolynomial::zero().degree(), None);
    }

    #[test]
    fn from_roots_expands() {
        let r: Vec<BigInt> = [2i64, -3].iter().map(|&x| BigInt::from(x)).collect();
        // (x-2)(x+3) = x^2 + x - 6
        assert_eq!(IntPolynomial::from_roots(&r), poly(&[-6, 1, 1]));
    }

    #[test]
    fn exact_division() {
        let p = poly(&[-6, 1, 1]);
        let d = p.deflate(&BigInt::from(2)).unwrap();
        assert_eq!(d, poly(&[3, 1]));
        assert!(p.deflate(&BigInt::from(5)).is_none());
    }

    #[test]
    fn eval_horner() {
        let p = poly(&[-6, 1, 1]);
        assert_eq!(p.eval(&BigInt::from(2)), BigInt::zero());
        assert_eq!(p.eval(&BigInt::from(1)), BigInt::from(-4));
    }

    #[test]
    fn display_readable() {
        assert_eq!(poly(&[1, -2, 1]).to_string(), "x^2 - 2x + 1");
        assert_eq!(poly(&[-1, 0, 1]).to_string(), "x^2 - 1");
    }
}
