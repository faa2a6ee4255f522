//! Dense univariate polynomials in the uniformizer root `u`.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::Coeff;

/// Coefficients in increasing degree, never with a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Coeff>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Coeff) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&Coeff> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&Coeff> {
        self.coeffs.get(i)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divides by `u^k`; the caller guarantees `k <= low_order`.
    pub fn shift_down(&self, k: usize) -> Self {
        Poly::from_coeffs(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let zero = self.coeffs[0].field().zero();
        let mut c = vec![zero; k];
        c.extend(self.coeffs.iter().cloned());
        Poly { coeffs: c }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut c = long.coeffs.clone();
        for (i, x) in short.coeffs.iter().enumerate() {
            c[i] = &c[i] + x;
        }
        Poly::from_coeffs(c)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Coeff) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.coeffs.len() == 1 {
            return self.scale(&other.coeffs[0]);
        }
        if self.coeffs.len() == 1 {
            return other.scale(&self.coeffs[0]);
        }
        let zero = self.coeffs[0].field().zero();
        let mut c = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let zero = inv.field().zero();
        let mut q = vec![zero; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dc);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero());
        q
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Substitutes `u -> u^d`.
    pub fn inflate(&self, d: usize) -> Poly {
        if d == 1 || self.coeffs.len() <= 1 {
            return self.clone();
        }
        let zero = self.coeffs[0].field().zero();
        let mut c = vec![zero; (self.coeffs.len() - 1) * d + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i * d] = x.clone();
        }
        Poly { coeffs: c }
    }

    /// Value at `u = 0`.
    pub fn constant_term(&self) -> Option<&Coeff> {
        self.coeffs.first()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GroundField;

    fn p(xs: &[i64]) -> Poly {
        let f = GroundField::Rationals;
        Poly::from_coeffs(xs.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (u + 1)(u - 2) and (u + 1)(u + 3)
        let a = p(&[-2, -1, 1]);
        let b = p(&[3, 4, 1]);
        assert_eq!(a.gcd(&b), p(&[1, 1]));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[5, 0, 3, 1]);
        let d = p(&[1, 2]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn inflate_substitutes_power() {
        assert_eq!(p(&[1, 2]).inflate(3), p(&[1, 0, 0, 2]));
    }
}
