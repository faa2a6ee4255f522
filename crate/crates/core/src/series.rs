//! Truncated Laurent series in `t` over [`PuiseuxScalar`]s.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::AlgebraError;
use crate::field::{Coeff, GroundField};
use crate::scalar::PuiseuxScalar;

/// Default relative t-precision for series inverses of exact elements.
pub const DEFAULT_T_PRECISION: i64 = 32;

/// An element of `K((t))` known modulo `t^prec` (or exactly, when `prec` is `None`).
///
/// Zero coefficients are never stored and no stored exponent reaches `prec`, so
/// equality is structural.
#[derive(Clone, Debug)]
pub struct TLaurent {
    field: GroundField,
    n: u32,
    terms: BTreeMap<i64, PuiseuxScalar>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl TLaurent {
    pub fn zero(field: GroundField, n: u32) -> Self {
        TLaurent {
            field,
            n,
            terms: BTreeMap::new(),
            prec: None,
        }
    }

    /// `O(t^prec)`.
    pub fn big_o(field: GroundField, n: u32, prec: i64) -> Self {
        TLaurent {
            prec: Some(prec),
            ..Self::zero(field, n)
        }
    }

    pub fn one(field: GroundField, n: u32) -> Self {
        Self::monomial(PuiseuxScalar::one(field, n), 0)
    }

    /// `c * t^e`, exact.
    pub fn monomial(c: PuiseuxScalar, e: i64) -> Self {
        let mut s = Self::zero(c.field(), c.root_denominator());
        if !c.is_zero() {
            s.terms.insert(e, c);
        }
        s
    }

    pub fn t_power(field: GroundField, n: u32, e: i64) -> Self {
        Self::monomial(PuiseuxScalar::one(field, n), e)
    }

    pub fn constant(c: PuiseuxScalar) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `(t-exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(field: GroundField, n: u32, terms: I, prec: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, PuiseuxScalar)>,
    {
        let mut s = TLaurent {
            field,
            n,
            terms: BTreeMap::new(),
            prec,
        };
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    fn add_term(&mut self, e: i64, c: &PuiseuxScalar) {
        if self.prec.is_some_and(|p| e >= p) || c.is_zero() {
            return;
        }
        let c = if c.root_denominator() != self.n {
            let n = self.n.lcm(&c.root_denominator());
            if n != self.n {
                *self = self.with_root_denominator(n);
            }
            c.with_root_denominator(n)
        } else {
            c.clone()
        };
        let sum = match self.terms.get(&e) {
            Some(old) => old.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn root_denominator(&self) -> u32 {
        self.n
    }

    /// Coefficients of `t^e` for `e >= precision` are unknown; `None` means exact.
    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &PuiseuxScalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// No known nonzero coefficient (exact zero or `O(t^p)`).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    pub fn is_one(&self) -> bool {
        self.prec.is_none()
            && self.terms.len() == 1
            && self.terms.get(&0).is_some_and(PuiseuxScalar::is_one)
    }

    pub fn coeff(&self, e: i64) -> PuiseuxScalar {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| PuiseuxScalar::zero(self.field, self.n))
    }

    /// Coefficient of `t^e`, failing when it lies beyond the known precision.
    pub fn coeff_checked(&self, e: i64, context: &str) -> Result<PuiseuxScalar, AlgebraError> {
        if let Some(p) = self.prec {
            if e >= p {
                return Err(AlgebraError::PrecisionExhausted {
                    context: context.into(),
                    needed: e + 1,
                    available: p,
                });
            }
        }
        Ok(self.coeff(e))
    }

    /// Lowest stored exponent.
    pub fn lowest(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest stored exponent.
    pub fn highest(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn lead(&self) -> Option<(i64, &PuiseuxScalar)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    /// Exact t-adic order. `Ok(None)` for the exact zero; an error for `O(t^p)`.
    pub fn val_t(&self) -> Result<Option<i64>, AlgebraError> {
        match (self.lowest(), self.prec) {
            (Some(e), _) => Ok(Some(e)),
            (None, None) => Ok(None),
            (None, Some(p)) => Err(AlgebraError::PrecisionExhausted {
                context: "t-valuation of a series that vanishes to its precision".into(),
                needed: p + 1,
                available: p,
            }),
        }
    }

    /// Minimum pi-valuation of the known coefficients; `None` when none are known.
    pub fn val_pi(&self) -> Option<Rational64> {
        self.terms.values().filter_map(PuiseuxScalar::val_pi).min()
    }

    /// Lower bound on the t-order used for precision propagation.
    fn order_bound(&self) -> Option<i64> {
        self.lowest().or(self.prec)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let p = min_prec(self.prec, Some(prec));
        TLaurent {
            field: self.field,
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e < p.unwrap())
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec: p,
        }
    }

    /// Forgets the precision tag, asserting the element is the Laurent polynomial shown.
    pub fn assume_exact(&self) -> Self {
        TLaurent {
            prec: None,
            ..self.clone()
        }
    }

    pub fn with_root_denominator(&self, n: u32) -> Self {
        if n == self.n {
            return self.clone();
        }
        assert!(n % self.n == 0);
        TLaurent {
            field: self.field,
            n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.with_root_denominator(n)))
                .collect(),
            prec: self.prec,
        }
    }

    /// Re-expresses every coefficient over `N * d`.
    pub fn extend_pi_root(&self, d: u32) -> Self {
        self.with_root_denominator(self.n * d)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = min_prec(self.prec, other.prec);
        let mut out = TLaurent {
            field: self.field,
            n: self.n.lcm(&other.n),
            terms: BTreeMap::new(),
            prec,
        };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        TLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n.lcm(&other.n);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.field, n);
        }
        let p1 = match self.prec {
            Some(p) => Some(p + other.order_bound().unwrap()),
            None => None,
        };
        let p2 = match other.prec {
            Some(p) => Some(p + self.order_bound().unwrap()),
            None => None,
        };
        let prec = min_prec(p1, p2);
        let mut out = TLaurent {
            field: self.field,
            n,
            terms: BTreeMap::new(),
            prec,
        };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if prec.is_some_and(|p| e >= p) {
                    break;
                }
                out.add_term(e, &ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &PuiseuxScalar) -> Self {
        let mut out = TLaurent {
            field: self.field,
            n: self.n.lcm(&c.root_denominator()),
            terms: BTreeMap::new(),
            prec: self.prec,
        };
        if c.is_zero() {
            return out;
        }
        for (e, x) in &self.terms {
            out.add_term(*e, &x.mul(c));
        }
        out
    }

    /// Multiplies by `t^k`, shifting the precision with it.
    pub fn shift_t(&self, k: i64) -> Self {
        TLaurent {
            field: self.field,
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// Multiplies every coefficient by `pi^e`.
    pub fn mul_pi_power(&self, e: Rational64) -> Self {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(k, c)| (*k, c.mul_pi_power(e)))
            .collect();
        let n = (self.n as i64).lcm(e.denom()) as u32;
        TLaurent::from_terms(self.field, n, terms, self.prec)
    }

    /// Multiplicative inverse. Exact monomials invert exactly; everything else is
    /// expanded as a geometric series up to relative precision `rel_prec` (and never
    /// beyond what the input's own precision supports).
    pub fn invert(&self, rel_prec: i64) -> Result<Self, AlgebraError> {
        let (v, c) = match self.lead() {
            Some((v, c)) => (v, c.clone()),
            None => {
                return Err(match self.prec {
                    None => AlgebraError::DivisionByZero,
                    Some(p) => AlgebraError::PrecisionExhausted {
                        context: "inverse of a series that vanishes to its precision".into(),
                        needed: p + 1,
                        available: p,
                    },
                })
            }
        };
        let c_inv = c.inv().unwrap();
        if self.prec.is_none() && self.terms.len() == 1 {
            return Ok(Self::monomial(c_inv, -v));
        }
        // x = c t^v (1 + w); the inverse is known modulo t^{-v + r}
        let mut r = rel_prec;
        if let Some(p) = self.prec {
            r = r.min(p - v);
        }
        let w: Vec<(i64, PuiseuxScalar)> = self
            .terms
            .iter()
            .skip(1)
            .filter(|(e, _)| **e - v < r)
            .map(|(e, x)| (*e - v, x.mul(&c_inv)))
            .collect();
        let mut b: Vec<PuiseuxScalar> = Vec::with_capacity(r.max(0) as usize);
        for k in 0..r.max(0) {
            if k == 0 {
                b.push(PuiseuxScalar::one(self.field, self.n));
                continue;
            }
            let mut acc = PuiseuxScalar::zero(self.field, self.n);
            for (j, wj) in &w {
                if *j > k {
                    break;
                }
                let prev = &b[(k - j) as usize];
                if !prev.is_zero() {
                    acc = acc.sub(&wj.mul(prev));
                }
            }
            b.push(acc);
        }
        let terms = b
            .into_iter()
            .enumerate()
            .map(|(k, x)| (k as i64 - v, x.mul(&c_inv)));
        Ok(TLaurent::from_terms(self.field, self.n, terms, Some(r - v)))
    }

    /// Reduction modulo `pi^{1/N}`, coefficient-wise.
    pub fn specialize_pi_zero(&self) -> Result<Self, AlgebraError> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            let r = c
                .reduce_mod_pi()
                .map_err(|_| AlgebraError::NonIntegral {
                    t_exponent: Some(*e),
                })?;
            terms.push((*e, PuiseuxScalar::from_coeff(r, self.n)));
        }
        Ok(TLaurent::from_terms(self.field, self.n, terms, self.prec))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(PuiseuxScalar::is_integral)
    }

    /// First t-exponent carrying a coefficient of negative pi-valuation.
    pub fn first_non_integral(&self) -> Option<i64> {
        self.terms
            .iter()
            .find(|(_, c)| !c.is_integral())
            .map(|(e, _)| *e)
    }

    /// True when all coefficients lie in the ground field.
    pub fn is_constant_in_pi(&self) -> bool {
        self.terms.values().all(PuiseuxScalar::is_constant)
    }

    /// Ground-field coefficients of a series with constant coefficients.
    pub fn constant_terms(&self) -> Option<Vec<(i64, Coeff)>> {
        self.terms
            .iter()
            .map(|(e, c)| c.as_constant().map(|x| (*e, x)))
            .collect()
    }

    /// Restricts to the exponents in `range`, keeping precision bookkeeping honest.
    pub fn select<F: Fn(i64) -> bool>(&self, keep: F) -> Self {
        TLaurent {
            field: self.field,
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(**e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec: self.prec,
        }
    }
}

impl PartialEq for TLaurent {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.prec == other.prec && self.terms == other.terms
    }
}

impl Eq for TLaurent {}

impl fmt::Display for TLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*t^{}", c, e)?;
        }
        if first && self.prec.is_none() {
            write!(f, "0")?;
        }
        if let Some(p) = self.prec {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(t^{})", p)?;
        }
        Ok(())
    }
}

impl TLaurent {
    /// Human-readable form used in diagnostics.
    pub fn describe(&self) -> alloc::string::String {
        format!("{}", self)
    }
}
