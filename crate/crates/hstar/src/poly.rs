//! Integer-coefficient polynomials in one variable `t`, stored densely with
//! index = degree and no trailing zeros.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::binomial;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPolynomial { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        IntPolynomial::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_coeffs(coeffs)
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// `(t - 1)^k` expanded.
    pub fn t_minus_one_pow(k: usize) -> IntPolynomial {
        let coeffs = (0..=k)
            .map(|i| {
                let b = binomial(k, i);
                if (k - i) % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .collect();
        IntPolynomial::from_coeffs(coeffs)
    }

    /// Truncate to degree at most `d`.
    pub fn truncated(&self, d: usize) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.iter().take(d + 1).cloned().collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Symmetric coefficient sequence: `c_i = c_{deg - i}`.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// Indices (degree, coefficient) of the negative coefficients.
    pub fn negative_coeffs(&self) -> Vec<(usize, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_negative())
            .map(|(i, c)| (i, c.clone()))
            .collect()
    }
}

impl std::fmt::Display for IntPolynomial {
    /// Low-degree-first human form: `1 + 23t + 23t^2 + t^3`, zero prints `0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
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
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_trims_trailing_zeros() {
        let p = IntPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p, IntPolynomial::from_i64(&[1, 2]));
        assert_eq!(IntPolynomial::from_i64(&[0, 0]).degree(), None);
    }

    #[test]
    fn arithmetic() {
        let p = IntPolynomial::from_i64(&[1, 1]);
        let q = IntPolynomial::from_i64(&[-1, 1]);
        assert_eq!(p.mul(&q), IntPolynomial::from_i64(&[-1, 0, 1]));
        assert_eq!(p.add(&q), IntPolynomial::from_i64(&[0, 2]));
        assert_eq!(p.sub(&p), IntPolynomial::zero());
        assert_eq!(p.shift_up(2), IntPolynomial::from_i64(&[0, 0, 1, 1]));
    }

    #[test]
    fn t_minus_one_powers() {
        assert_eq!(IntPolynomial::t_minus_one_pow(0), IntPolynomial::one());
        assert_eq!(
            IntPolynomial::t_minus_one_pow(2),
            IntPolynomial::from_i64(&[1, -2, 1])
        );
        assert_eq!(
            IntPolynomial::t_minus_one_pow(3),
            IntPolynomial::from_i64(&[-1, 3, -3, 1])
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(
            IntPolynomial::from_i64(&[1, 23, 23, 1]).to_string(),
            "1 + 23t + 23t^2 + t^3"
        );
        assert_eq!(IntPolynomial::from_i64(&[1, 1, 1]).to_string(), "1 + t + t^2");
        assert_eq!(IntPolynomial::from_i64(&[0, -2, 1]).to_string(), "-2t + t^2");
    }

    #[test]
    fn palindrome_and_nonneg() {
        assert!(IntPolynomial::from_i64(&[1, 5, 5, 1]).is_palindromic());
        assert!(!IntPolynomial::from_i64(&[1, 5, 4, 1]).is_palindromic());
        assert!(IntPolynomial::from_i64(&[0, 1]).is_nonnegative());
        let neg = IntPolynomial::from_i64(&[1, -2]);
        assert_eq!(neg.negative_coeffs(), vec![(1, BigInt::from(-2))]);
    }
}
