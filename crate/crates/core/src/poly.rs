//! Integer polynomials in the residue cardinality `q`.
//!
//! All closed-form dimension and multiplicity data is polynomial in `q`
//! ("universal polynomials defined over Z"), so the symbolic side of the
//! toolkit works with this type and only evaluates at a concrete prime power
//! on demand. Coefficients are `i64` (they stay tiny in practice); numeric
//! evaluation is checked `i128` so that levels up to ~30 cannot overflow
//! silently.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Polynomial in `q` with integer coefficients, stored low degree first with
/// no trailing zeros (`coeffs` empty ⇔ zero polynomial).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    pub coeffs: Vec<i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.normalize();
        p
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    /// `c·q^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        if c == 0 {
            return Poly::zero();
        }
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// `1 + q + … + q^{k−1}` (the `q`-integer `[k]_q`; zero for `k = 0`).
    pub fn geometric(k: usize) -> Self {
        Poly { coeffs: vec![1; k] }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
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

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![0i64; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![0i64; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: i64) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `q^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// Exact division by `q^k`; panics if the low-order coefficients are not
    /// all zero (used for Laurent-style cancellations that are provably exact).
    pub fn shift_down_exact(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        assert!(
            self.coeffs.len() > k || self.coeffs.iter().all(|&c| c == 0),
            "shift_down_exact would truncate"
        );
        assert!(
            self.coeffs[..k.min(self.coeffs.len())].iter().all(|&c| c == 0),
            "shift_down_exact: division by q^{k} is not exact"
        );
        Poly::from_coeffs(self.coeffs[k..].to_vec())
    }

    /// Evaluate at `q` with checked 128-bit arithmetic.
    pub fn eval(&self, q: i64) -> Result<i128> {
        let q = q as i128;
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(q).ok_or(Error::Overflow)?;
            acc = acc.checked_add(c as i128).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }
}

impl std::fmt::Display for Poly {
    /// Human form, high degree first: `2q^3 - q + 1`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (k, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "q")?,
                (1, m) => write!(f, "{m}q")?,
                (k, 1) => write!(f, "q^{k}")?,
                (k, m) => write!(f, "{m}q^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_normalization() {
        let p = Poly::from_coeffs(vec![1, 2, 0, 0]);
        assert_eq!(p.coeffs, vec![1, 2]);
        assert_eq!(p.degree(), Some(1));
        let q = Poly::monomial(3, 2);
        assert_eq!(p.mul(&q).coeffs, vec![0, 0, 3, 6]);
        assert_eq!(p.sub(&p), Poly::zero());
        assert!(Poly::zero().degree().is_none());
    }

    #[test]
    fn geometric_sums() {
        // (q^k − 1)/(q − 1) as an honest polynomial.
        let g = Poly::geometric(4);
        assert_eq!(g.eval(3).unwrap(), 1 + 3 + 9 + 27);
        assert_eq!(Poly::geometric(0), Poly::zero());
    }

    #[test]
    fn shifts() {
        let p = Poly::from_coeffs(vec![0, 0, 5, 1]);
        assert_eq!(p.shift_down_exact(2).coeffs, vec![5, 1]);
        assert_eq!(p.shift_down_exact(2).shift_up(2), p);
    }

    #[test]
    #[should_panic(expected = "not exact")]
    fn shift_down_requires_exactness() {
        Poly::from_coeffs(vec![1, 2]).shift_down_exact(1);
    }

    #[test]
    fn eval_overflow_is_loud() {
        let p = Poly::monomial(1, 40);
        assert!(p.eval(1_000_000).is_err());
        assert_eq!(p.eval(2).unwrap(), 1i128 << 40);
    }

    #[test]
    fn display_form() {
        let p = Poly::from_coeffs(vec![1, -1, 2]);
        assert_eq!(p.to_string(), "2q^2 - q + 1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::monomial(1, 1).to_string(), "q");
    }
}
