//! Coefficient fields: exact rationals (arbitrary precision) and odd prime fields.
//!
//! Every computation in the engine is parameterized by a [`Field`]. Field
//! elements never round: rationals are stored fully reduced after every
//! operation (num's `Ratio` keeps that invariant), and prime-field elements
//! are canonical residues in `0..p`.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

/// Runtime description of a coefficient field, as it appears in job files
/// and reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// Validate the spec: the prime must be an odd prime.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::PrimeField(p) => {
                if *p <= 2 {
                    Err(format!("prime field characteristic must exceed 2, got {p}"))
                } else if !is_prime(*p) {
                    Err(format!("{p} is not prime"))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// Trial division primality test. Job-file primes are desk scale, so this
/// is never a bottleneck.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exact field arithmetic. Operations take the field by reference so that
/// parameterized fields (a prime modulus) need no global state.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse. Panics on zero; callers guard.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn from_i64(&self, n: i64) -> Self::Elem;

    fn from_ratio(&self, num: i64, den: u64) -> Self::Elem {
        assert!(den != 0, "zero denominator");
        self.div(&self.from_i64(num), &self.from_i64(den as i64))
    }

    /// `a -= b * c`, the inner-loop operation of Gaussian elimination.
    fn sub_mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *a = self.sub(a, &self.mul(b, c));
    }

    /// Pivot-selection weight: lower is better. Unit entries get weight 0 so
    /// elimination prefers pivots that cause no coefficient growth.
    fn pivot_weight(&self, a: &Self::Elem) -> u64;

    /// Exact textual form ("p/q" over the rationals, a residue over F_p).
    fn render(&self, a: &Self::Elem) -> String;
}

/// The field of rational numbers with arbitrary-precision representation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn pivot_weight(&self, a: &BigRational) -> u64 {
        if a.numer().magnitude().is_one() && a.denom().is_one() {
            return 0;
        }
        (a.numer().bits() + a.denom().bits()) as u64
    }
    fn render(&self, a: &BigRational) -> String {
        render_rational(a)
    }
}

/// Render a rational as `p` or `p/q` with `q > 0`.
pub fn render_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

/// A prime field F_p for an odd prime `p`, elements stored as canonical
/// residues. The default heuristic prime is [`DEFAULT_PRIME`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

/// Standard CAS default: large enough that desk-scale examples do not hit
/// accidental characteristic collisions.
pub const DEFAULT_PRIME: u64 = 32003;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, String> {
        FieldSpec::PrimeField(p).validate()?;
        assert!(p < (1 << 62), "modulus too large");
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i64(&self, n: i64) -> u64 {
        let p = self.p as i128;
        let r = (n as i128).rem_euclid(p);
        r as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1, "modulus not prime");
        s0.rem_euclid(self.p as i128) as u64
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn pivot_weight(&self, a: &u64) -> u64 {
        if *a == 1 || *a == self.p - 1 {
            0
        } else {
            1
        }
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(32003));
        assert!(!is_prime(1));
        assert!(!is_prime(32001));
        assert!(!is_prime(91));
    }

    #[test]
    fn spec_validation() {
        assert!(FieldSpec::Rationals.validate().is_ok());
        assert!(FieldSpec::PrimeField(32003).validate().is_ok());
        assert!(FieldSpec::PrimeField(2).validate().is_err());
        assert!(FieldSpec::PrimeField(32001).validate().is_err());
    }

    #[test]
    fn prime_field_inverses() {
        let f = PrimeField::new(32003).unwrap();
        for a in [1u64, 2, 5, 17, 32002, 12345] {
            let b = f.inv(&a);
            assert_eq!(f.mul(&a, &b), 1, "inverse failed for {a}");
        }
    }

    #[test]
    fn prime_field_signed_reduction() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.from_i64(-8), 6);
        assert_eq!(f.from_ratio(1, 2), 4); // 2*4 = 8 = 1 mod 7
    }

    #[test]
    fn rational_render() {
        let f = Rationals;
        assert_eq!(f.render(&f.from_ratio(3, 2)), "3/2");
        assert_eq!(f.render(&f.from_i64(-4)), "-4");
        assert_eq!(f.render(&f.from_ratio(-2, 4)), "-1/2");
    }
}
