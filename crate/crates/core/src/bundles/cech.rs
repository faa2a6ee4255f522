//! Cech cohomology of line bundles on `P^1` for the cover {`P^1 - 0`, formal disc at 0}.
//!
//! For `O(d)` (glued by `t^{-d}`), `H^1(O(d)) = k((t)) / (k[t^-1] + t^{-d} k[[t]])`, with
//! basis the monomials `t^e`, `1 <= e <= -d-1`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{AlgebraError, BundleError};
use crate::field::{Coeff, GroundField};
use crate::linalg;
use crate::scalar::PuiseuxScalar;
use crate::series::TLaurent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub twist: i64,
    /// Coordinate `k` is the coefficient of `t^{k+1}`.
    pub coords: Vec<Coeff>,
}

impl CohClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Coeff::is_zero)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

fn h1_range(d: i64) -> core::ops::RangeInclusive<i64> {
    1..=(-d - 1)
}

fn need_precision(x: &TLaurent, needed: i64, context: &str) -> Result<(), AlgebraError> {
    match x.precision() {
        Some(p) if p < needed => Err(AlgebraError::PrecisionExhausted {
            context: context.into(),
            needed,
            available: p,
        }),
        _ => Ok(()),
    }
}

/// Image of the cochain `x` in `H^1(P^1, O(d))`.
pub fn h1_project(x: &TLaurent, d: i64) -> Result<CohClass, BundleError> {
    if d >= -1 {
        return Ok(CohClass {
            twist: d,
            coords: Vec::new(),
        });
    }
    need_precision(x, -d, "h1_project")?;
    let mut coords = Vec::with_capacity((-d - 1) as usize);
    for e in h1_range(d) {
        let c = x.coeff(e);
        let c = c
            .as_constant()
            .ok_or(BundleError::WrongBase("generic field"))?;
        coords.push(c);
    }
    Ok(CohClass { twist: d, coords })
}

/// Writes a coboundary `x` as `x_out + x_in` with `x_out` in `k[t^-1]` and `x_in` in
/// `t^{-d} k[[t]]`.
pub fn coboundary_split(x: &TLaurent, d: i64) -> Result<(TLaurent, TLaurent), BundleError> {
    need_precision(x, 1.max(-d), "coboundary_split")?;
    let obstruction: Vec<(i64, PuiseuxScalar)> = h1_range(d)
        .map(|e| (e, x.coeff(e)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    if !obstruction.is_empty() {
        let class = h1_range(d)
            .map(|e| x.coeff(e).to_string())
            .collect();
        return Err(BundleError::NotCoboundary { twist: d, class });
    }
    let x_out = x.select(|e| e <= 0).assume_exact();
    let x_in = x.select(|e| e > 0);
    Ok((x_out, x_in))
}

/// `(h^0, h^1)` of `O(d)` from the rank of the Cech differential on a monomial window.
pub fn cohomology_dims(d: i64) -> (usize, usize) {
    let w = d.abs() + 2;
    let field = GroundField::Rationals;
    let one = PuiseuxScalar::one(field, 1);
    let zero = PuiseuxScalar::zero(field, 1);
    let width = (2 * w + 1) as usize;
    let slot = |e: i64| (e + w) as usize;
    let mut cols: Vec<Vec<PuiseuxScalar>> = Vec::new();
    // sections over P^1 - 0: t^{-j}
    for j in 0..=w {
        let mut v = alloc::vec![zero.clone(); width];
        v[slot(-j)] = one.clone();
        cols.push(v);
    }
    // sections over the disc, pushed through the glueing: t^{-d} t^j
    for j in 0..=(w + d) {
        let mut v = alloc::vec![zero.clone(); width];
        v[slot(j - d)] = one.neg();
        cols.push(v);
    }
    let r = linalg::rank(&cols);
    (cols.len() - r, width - r)
}
