//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored in ascending degree order; the vector is empty
//! for zero and otherwise ends in a nonzero coefficient. These carry the
//! Hilbert-series side of the engine: numerators, symmetric functions,
//! residuals, fitted length polynomials.

use num::{BigInt, BigRational, One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly {
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RatPoly { coeffs: vec![c] };
        p.normalize();
        p
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        RatPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RatPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_at_one(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    /// Exact division by `(1 - t)`; `None` when the remainder is nonzero
    /// (equivalently when the value at 1 is nonzero).
    pub fn div_by_one_minus_t(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !self.eval_at_one().is_zero() {
            return None;
        }
        // p = (1 - t) q: q_k = p_k + q_{k-1}
        let mut q = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut carry = BigRational::zero();
        for k in 0..self.coeffs.len().saturating_sub(1) {
            carry = &self.coeffs[k] + &carry;
            q.push(carry.clone());
        }
        Some(Self::from_coeffs(q))
    }

    /// Multiplicity of `t = 1` as a root; `None` for the zero polynomial
    /// (every power divides it).
    pub fn vanishing_order_at_one(&self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut p = self.clone();
        let mut order = 0;
        while let Some(q) = p.div_by_one_minus_t() {
            order += 1;
            p = q;
            if p.is_zero() {
                break;
            }
        }
        Some(order)
    }

    /// Interpret `self` as a polynomial in an integer argument `j` and
    /// evaluate exactly.
    pub fn eval_at_integer(&self, j: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(j)))
    }

    /// Substitute `j -> j - 1`.
    pub fn shift_argument_down(&self) -> Self {
        // q(j - 1) = sum_k c_k (j - 1)^k, expanded by repeated multiplication
        let mut out = Self::zero();
        let jm1 = Self::from_i64_coeffs(&[-1, 1]);
        let mut power = Self::one();
        for c in &self.coeffs {
            out = out.add(&power.scale(c));
            power = power.mul(&jm1);
        }
        out
    }

    pub fn render(&self) -> Vec<String> {
        self.coeffs.iter().map(crate::field::render_rational).collect()
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = crate::field::render_rational(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "t")?,
                1 => write!(f, "{mag}*t")?,
                _ if mag == "1" => write!(f, "t^{k}")?,
                _ => write!(f, "{mag}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// The m-fold iterated first difference `q(j) - q(j-1)`; each step drops
/// the degree by one (or reaches zero).
pub fn finite_difference(q: &RatPoly, order: usize) -> RatPoly {
    let mut p = q.clone();
    for _ in 0..order {
        p = p.sub(&p.shift_argument_down());
    }
    p
}

/// Lagrange interpolation through `(x_i, y_i)` with distinct integer
/// abscissas; the result has degree < points.len().
pub fn interpolate(points: &[(i64, BigRational)]) -> RatPoly {
    let mut acc = RatPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut num = RatPoly::one();
        let mut den = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(&RatPoly::from_i64_coeffs(&[-xj, 1]));
            den *= BigRational::from_integer(BigInt::from(xi - xj));
        }
        acc = acc.add(&num.scale(&(yi / den)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn basic_arithmetic_and_normalization() {
        let p = RatPoly::from_i64_coeffs(&[1, 2, 1]); // (1+t)^2
        let q = RatPoly::from_i64_coeffs(&[1, 1]).mul(&RatPoly::from_i64_coeffs(&[1, 1]));
        assert_eq!(p, q);
        assert!(p.sub(&q).is_zero());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn first_difference_of_square() {
        // j^2 - (j-1)^2 = 2j - 1
        let q = RatPoly::from_i64_coeffs(&[0, 0, 1]);
        assert_eq!(finite_difference(&q, 1), RatPoly::from_i64_coeffs(&[-1, 2]));
    }

    #[test]
    fn difference_of_constant_vanishes() {
        let q = RatPoly::from_i64_coeffs(&[5]);
        assert!(finite_difference(&q, 1).is_zero());
    }

    #[test]
    fn third_difference_of_cube_is_six() {
        let q = RatPoly::from_i64_coeffs(&[0, 0, 0, 1]);
        assert_eq!(finite_difference(&q, 3), RatPoly::from_i64_coeffs(&[6]));
    }

    #[test]
    fn division_by_one_minus_t() {
        // 1 - t^3 = (1 - t)(1 + t + t^2)
        let p = RatPoly::from_i64_coeffs(&[1, 0, 0, -1]);
        assert_eq!(
            p.div_by_one_minus_t().unwrap(),
            RatPoly::from_i64_coeffs(&[1, 1, 1])
        );
        assert!(RatPoly::from_i64_coeffs(&[1, 1]).div_by_one_minus_t().is_none());
    }

    #[test]
    fn vanishing_order() {
        // t^2 (1-t)^2 has order 2 at t = 1
        let p = RatPoly::from_i64_coeffs(&[0, 0, 1])
            .mul(&RatPoly::from_i64_coeffs(&[1, -1]).mul(&RatPoly::from_i64_coeffs(&[1, -1])));
        assert_eq!(p.vanishing_order_at_one(), Some(2));
        assert_eq!(RatPoly::one().vanishing_order_at_one(), Some(0));
        assert_eq!(RatPoly::zero().vanishing_order_at_one(), None);
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        // through (0,1), (1,3), (2,9): 2j^2 + 0j + 1? check: j=1 -> 3, j=2 -> 9
        let pts = vec![(0, rat(1)), (1, rat(3)), (2, rat(9))];
        let p = interpolate(&pts);
        for (x, y) in &pts {
            assert_eq!(p.eval_at_integer(*x), *y);
        }
        assert_eq!(p, RatPoly::from_i64_coeffs(&[1, 0, 2]));
    }

    #[test]
    fn argument_shift() {
        // q(j) = j^2 + 1, q(j-1) = j^2 - 2j + 2
        let q = RatPoly::from_i64_coeffs(&[1, 0, 1]);
        assert_eq!(q.shift_argument_down(), RatPoly::from_i64_coeffs(&[2, -2, 1]));
    }

    #[test]
    fn display_form() {
        let p = RatPoly::from_i64_coeffs(&[1, -2, 0, 3]);
        assert_eq!(p.to_string(), "1 - 2*t + 3*t^3");
        assert_eq!(RatPoly::zero().to_string(), "0");
    }
}
