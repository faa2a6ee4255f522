//! Exact scalars of `K = k(pi^{1/N})`: reduced rational functions in `u = pi^{1/N}`.

use core::fmt;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::AlgebraError;
use crate::field::{Coeff, GroundField};
use crate::poly::Poly;

/// `u^shift * num(u) / den(u)` with `u = pi^{1/n}`.
///
/// Normal form: `num(0) != 0`, `den(0) == 1`, `gcd(num, den) == 1`; zero is
/// `num == 0, shift == 0, den == 1`. Equality across different `n` compares
/// values, not representations.
#[derive(Clone, Debug)]
pub struct PuiseuxScalar {
    field: GroundField,
    n: u32,
    shift: i64,
    num: Poly,
    den: Poly,
}

impl PuiseuxScalar {
    pub fn zero(field: GroundField, n: u32) -> Self {
        assert!(n >= 1);
        PuiseuxScalar {
            field,
            n,
            shift: 0,
            num: Poly::zero(),
            den: Poly::constant(field.one()),
        }
    }

    pub fn one(field: GroundField, n: u32) -> Self {
        Self::from_coeff(field.one(), n)
    }

    pub fn from_i64(field: GroundField, x: i64, n: u32) -> Self {
        Self::from_coeff(field.from_i64(x), n)
    }

    pub fn from_coeff(c: Coeff, n: u32) -> Self {
        Self::monomial(c, 0, n)
    }

    /// `c * u^k` with `u = pi^{1/n}`.
    pub fn monomial(c: Coeff, k: i64, n: u32) -> Self {
        let field = c.field();
        Self::normalize(field, n, k, Poly::constant(c), Poly::constant(field.one()))
    }

    /// `c * pi^e` for a rational exponent, over the smallest root denominator that
    /// contains it.
    pub fn pi_power(c: Coeff, e: Rational64) -> Self {
        let n = *e.denom() as u32;
        Self::monomial(c, *e.numer(), n)
    }

    /// `u^shift * num / den`, reduced.
    pub fn from_parts(field: GroundField, n: u32, shift: i64, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalize(field, n, shift, num, den)
    }

    fn normalize(field: GroundField, n: u32, mut shift: i64, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(field, n);
        }
        let k = num.low_order().unwrap();
        let mut num = num.shift_down(k);
        shift += k as i64;
        let j = den.low_order().unwrap();
        let mut den = den.shift_down(j);
        shift -= j as i64;
        if !den.is_constant() && !num.is_constant() {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let c0 = den.constant_term().unwrap().inv().unwrap();
        if !c0.is_one() {
            num = num.scale(&c0);
            den = den.scale(&c0);
        }
        PuiseuxScalar {
            field,
            n,
            shift,
            num,
            den,
        }
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    /// Root denominator `N` of `u = pi^{1/N}`.
    pub fn root_denominator(&self) -> u32 {
        self.n
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0
            && self.num.is_constant()
            && self.den.is_constant()
            && self.num.constant_term().is_some_and(Coeff::is_one)
    }

    /// True when the value lies in the ground field `k`.
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.shift == 0 && self.num.is_constant() && self.den.is_constant())
    }

    /// True for `c * pi^e`.
    pub fn is_monomial(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The ground-field value of a constant scalar.
    pub fn as_constant(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        if self.is_constant() {
            return self.num.constant_term().cloned();
        }
        None
    }

    /// Exact pi-adic valuation `shift / N`; `None` for zero.
    pub fn val_pi(&self) -> Option<Rational64> {
        if self.is_zero() {
            None
        } else {
            Some(Rational64::new(self.shift, self.n as i64))
        }
    }

    /// Re-expresses over `N * d` by substituting `u -> u^d`.
    pub fn extend(&self, d: u32) -> Self {
        assert!(d >= 1);
        if d == 1 {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.field, self.n * d);
        }
        PuiseuxScalar {
            field: self.field,
            n: self.n * d,
            shift: self.shift * d as i64,
            num: self.num.inflate(d as usize),
            den: self.den.inflate(d as usize),
        }
    }

    /// Re-expresses over a multiple `n` of the current root denominator.
    pub fn with_root_denominator(&self, n: u32) -> Self {
        assert!(n % self.n == 0, "root denominator {} does not divide {}", self.n, n);
        self.extend(n / self.n)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.field, other.field, "mixed ground fields");
        if self.n == other.n {
            return (self.clone(), other.clone());
        }
        let n = self.n.lcm(&other.n);
        (self.with_root_denominator(n), other.with_root_denominator(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.lift_to(other.n);
        }
        if self.is_zero() {
            return other.lift_to(self.n);
        }
        if self.n != other.n {
            let (a, b) = self.aligned(other);
            return a.add(&b);
        }
        let base = self.shift.min(other.shift);
        let a = self.num.shift_up((self.shift - base) as usize);
        let b = other.num.shift_up((other.shift - base) as usize);
        if self.den == other.den {
            return Self::normalize(self.field, self.n, base, a.add(&b), self.den.clone());
        }
        let num = a.mul(&other.den).add(&b.mul(&self.den));
        Self::normalize(self.field, self.n, base, num, self.den.mul(&other.den))
    }

    fn lift_to(&self, n: u32) -> Self {
        if n % self.n == 0 {
            self.with_root_denominator(n)
        } else {
            self.with_root_denominator(self.n.lcm(&n))
        }
    }

    pub fn neg(&self) -> Self {
        PuiseuxScalar {
            num: self.num.neg(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.n != other.n {
            let (a, b) = self.aligned(other);
            return a.mul(&b);
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field, self.n);
        }
        let shift = self.shift + other.shift;
        if self.den.is_constant() && other.den.is_constant() {
            return PuiseuxScalar {
                field: self.field,
                n: self.n,
                shift,
                num: self.num.mul(&other.num),
                den: self.den.clone(),
            };
        }
        Self::normalize(
            self.field,
            self.n,
            shift,
            self.num.mul(&other.num),
            self.den.mul(&other.den),
        )
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.field, self.n);
        }
        PuiseuxScalar {
            num: self.num.scale(c),
            ..self.clone()
        }
    }

    /// Multiplies by `pi^e`; `e` must be a multiple of `1/N` after alignment.
    pub fn mul_pi_power(&self, e: Rational64) -> Self {
        let n = (self.n as i64).lcm(e.denom()) as u32;
        let me = self.with_root_denominator(n);
        if me.is_zero() {
            return me;
        }
        let k = *(e * Rational64::from_integer(n as i64)).numer();
        PuiseuxScalar {
            shift: me.shift + k,
            ..me
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalize(
            self.field,
            self.n,
            -self.shift,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        let inv = other.inv().ok_or(AlgebraError::DivisionByZero)?;
        Ok(self.mul(&inv))
    }

    /// Reduction modulo the maximal ideal of `R[pi^{1/N}]`.
    pub fn reduce_mod_pi(&self) -> Result<Coeff, AlgebraError> {
        if self.is_zero() || self.shift > 0 {
            return Ok(self.field.zero());
        }
        if self.shift < 0 {
            return Err(AlgebraError::NonIntegral { t_exponent: None });
        }
        Ok(self.num.constant_term().unwrap().clone())
    }

    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.shift >= 0
    }
}

impl PartialEq for PuiseuxScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.field != other.field {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.n == other.n {
            return self.shift == other.shift && self.num == other.num && self.den == other.den;
        }
        let (a, b) = self.aligned(other);
        a == b
    }
}

impl Eq for PuiseuxScalar {}

impl fmt::Display for PuiseuxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let fmt_poly = |p: &Poly, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            let mut first = true;
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                match i {
                    0 => write!(f, "{}", c)?,
                    1 => write!(f, "{}*u", c)?,
                    _ => write!(f, "{}*u^{}", c, i)?,
                }
            }
            Ok(())
        };
        if self.shift != 0 {
            write!(f, "u^{}*", self.shift)?;
        }
        write!(f, "(")?;
        fmt_poly(&self.num, f)?;
        write!(f, ")")?;
        if !self.den.is_constant() {
            write!(f, "/(")?;
            fmt_poly(&self.den, f)?;
            write!(f, ")")?;
        }
        if self.n != 1 {
            write!(f, " [u=pi^(1/{})]", self.n)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: GroundField = GroundField::Rationals;

    fn pi_pow(k: i64, n: u32) -> PuiseuxScalar {
        PuiseuxScalar::monomial(Q.one(), k, n)
    }

    #[test]
    fn val_of_pi_squared_plus_cubed() {
        let x = pi_pow(2, 1).add(&pi_pow(3, 1));
        assert_eq!(x.val_pi(), Some(Rational64::from_integer(2)));
    }

    #[test]
    fn val_of_square_root() {
        assert_eq!(pi_pow(1, 2).val_pi(), Some(Rational64::new(1, 2)));
    }

    #[test]
    fn extension_is_value_preserving() {
        let x = pi_pow(1, 1);
        let y = x.extend(2);
        assert_eq!(y.root_denominator(), 2);
        assert_eq!(y.shift(), 2);
        assert_eq!(x, y);
        assert_eq!(x.extend(2).extend(3), x.extend(6));
    }

    #[test]
    fn rational_function_reduces() {
        // (pi + pi^2) / (1 + pi) = pi
        let one = PuiseuxScalar::one(Q, 1);
        let num = pi_pow(1, 1).add(&pi_pow(2, 1));
        let den = one.add(&pi_pow(1, 1));
        let q = num.div(&den).unwrap();
        assert_eq!(q, pi_pow(1, 1));
        assert!(q.is_monomial());
    }

    #[test]
    fn mixed_denominators_align() {
        let a = pi_pow(1, 2);
        let b = pi_pow(1, 3);
        let s = a.mul(&b);
        assert_eq!(s.val_pi(), Some(Rational64::new(5, 6)));
    }

    #[test]
    fn reduction_mod_pi() {
        let x = PuiseuxScalar::from_i64(Q, 3, 1).add(&pi_pow(1, 2));
        assert_eq!(x.reduce_mod_pi().unwrap(), Q.from_i64(3));
        assert!(pi_pow(-1, 1).reduce_mod_pi().is_err());
    }
}
