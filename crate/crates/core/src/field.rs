//! Exact ground fields: the rationals and prime fields.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The residue field `k` the whole computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroundField {
    Rationals,
    Prime(u64),
}

impl GroundField {
    /// Builds `F_p`, rejecting composite or tiny moduli.
    pub fn prime(p: u64) -> Option<Self> {
        if is_prime(p) && p < (1 << 62) {
            Some(GroundField::Prime(p))
        } else {
            None
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            GroundField::Rationals => 0,
            GroundField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, x: i64) -> Coeff {
        match *self {
            GroundField::Rationals => Coeff::Q(BigRational::from_integer(BigInt::from(x))),
            GroundField::Prime(p) => Coeff::Fp(x.rem_euclid(p as i64) as u64, p),
        }
    }

    /// Maps a rational into the field; `None` when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Option<Coeff> {
        match *self {
            GroundField::Rationals => Some(Coeff::Q(q.clone())),
            GroundField::Prime(p) => {
                let m = BigInt::from(p);
                let num = reduce_bigint(q.numer(), &m, p);
                let den = reduce_bigint(q.denom(), &m, p);
                if den == 0 {
                    return None;
                }
                Some(Coeff::Fp(mul_mod(num, inv_mod(den, p), p), p))
            }
        }
    }
}

impl fmt::Display for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundField::Rationals => write!(f, "Q"),
            GroundField::Prime(p) => write!(f, "F_{}", p),
        }
    }
}

fn reduce_bigint(x: &BigInt, m: &BigInt, p: u64) -> u64 {
    let r = ((x % m) + m) % m;
    let (_, digits) = r.to_u64_digits();
    let v = digits.first().copied().unwrap_or(0);
    v % p
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i128) as u64
}

/// An element of a [`GroundField`].
///
/// Mixing elements of different fields is a logic error and panics.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Coeff {
    Q(BigRational),
    Fp(u64, u64),
}

impl Coeff {
    pub fn field(&self) -> GroundField {
        match self {
            Coeff::Q(_) => GroundField::Rationals,
            Coeff::Fp(_, p) => GroundField::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_zero(),
            Coeff::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_one(),
            Coeff::Fp(v, _) => *v == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Coeff::Q(q) => Coeff::Q(q.recip()),
            Coeff::Fp(v, p) => Coeff::Fp(inv_mod(*v, *p), *p),
        })
    }

    pub fn div(&self, other: &Coeff) -> Option<Coeff> {
        other.inv().map(|i| self * &i)
    }

    /// Canonical text form: `"p/q"` (or `"p"`) over Q, the residue in `0..p` over F_p.
    pub fn to_literal(&self) -> alloc::string::String {
        use alloc::string::ToString;
        match self {
            Coeff::Q(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    alloc::format!("{}/{}", q.numer(), q.denom())
                }
            }
            Coeff::Fp(v, _) => v.to_string(),
        }
    }

    pub fn is_negative_literal(&self) -> bool {
        matches!(self, Coeff::Q(q) if q.is_negative())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

fn same_prime(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "mixed prime fields");
    a
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a + b),
            (Coeff::Fp(a, p), Coeff::Fp(b, q)) => {
                let p = same_prime(*p, *q);
                Coeff::Fp(((*a as u128 + *b as u128) % p as u128) as u64, p)
            }
            _ => panic!("mixed ground fields"),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a * b),
            (Coeff::Fp(a, p), Coeff::Fp(b, q)) => {
                let p = same_prime(*p, *q);
                Coeff::Fp(mul_mod(*a, *b, p), p)
            }
            _ => panic!("mixed ground fields"),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(-a),
            Coeff::Fp(a, p) => Coeff::Fp(if *a == 0 { 0 } else { p - a }, *p),
        }
    }
}
