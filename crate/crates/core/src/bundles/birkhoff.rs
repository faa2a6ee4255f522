//! Birkhoff factorization `A * M * B = diag(t^{d_1}, ..., t^{d_n})`.
//!
//! Column Hermite reduction over `F[[t]]` turns `M` into an exact Laurent polynomial
//! matrix `H = M * B1`; row reduction over `F[t^-1]` then makes the lowest-order
//! coefficient rows of `A * H` independent, at which point `A * H = D * W` with
//! `W(0)` invertible. Every result is checked against the input before returning.

use alloc::format;
use alloc::vec::Vec;

use super::cocycle::{Base, LoopCocycle};
use super::splitting::SplittingType;
use crate::error::{AlgebraError, BundleError};
use crate::linalg;
use crate::matrix::LMatrix;
use crate::scalar::PuiseuxScalar;
use crate::series::TLaurent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BirkhoffFactorization {
    /// Entries in `F[t^-1]`, exact.
    pub a: LMatrix,
    /// Sorted descending.
    pub d_exponents: Vec<i64>,
    /// Entries in `F[[t]]` with invertible constant term.
    pub b: LMatrix,
    /// `A * M * B = D` holds modulo `t^p` entrywise; `None` when it holds exactly.
    pub certified_precision: Option<i64>,
}

impl BirkhoffFactorization {
    pub fn d(&self) -> LMatrix {
        LMatrix::diag_t_powers(self.a.field(), self.a.root_denominator(), &self.d_exponents)
    }

    /// Splitting exponents `a_i = -d_{n+1-i}`.
    pub fn splitting_type(&self) -> SplittingType {
        SplittingType::new(self.d_exponents.iter().map(|d| -d).collect())
    }
}

fn exhausted(context: alloc::string::String, needed: i64, available: i64) -> BundleError {
    BundleError::Algebra(AlgebraError::PrecisionExhausted {
        context,
        needed,
        available,
    })
}

/// Right `F[[t]]`-column reduction to an exact matrix; returns `(H, B1)` with `M * B1 = H`.
fn hermite(m: &LMatrix, rel_prec: i64) -> Result<(LMatrix, LMatrix), BundleError> {
    let n = m.rows();
    let field = m.field();
    let nd = m.root_denominator();
    let mut h = m.clone();
    let mut b1 = LMatrix::identity(field, nd, n);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<(usize, i64)> = Vec::new();
    for i in 0..n {
        let mut best: Option<(usize, i64)> = None;
        for &c in &remaining {
            if let Some(l) = h.get(i, c).lowest() {
                if best.map_or(true, |(_, bv)| l < bv) {
                    best = Some((c, l));
                }
            }
        }
        let Some((c, v)) = best else {
            let p = remaining.iter().filter_map(|&c| h.get(i, c).precision()).min();
            return Err(match p {
                None => BundleError::Algebra(AlgebraError::Singular),
                Some(p) => exhausted(
                    format!("Birkhoff reduction: row {} vanishes to its precision", i + 1),
                    p + 1,
                    p,
                ),
            });
        };
        for &c2 in &remaining {
            let x = h.get(i, c2);
            if x.lowest().is_none() {
                if let Some(p) = x.precision() {
                    if p < v {
                        return Err(exhausted(
                            format!("Birkhoff pivot search at entry ({}, {})", i + 1, c2 + 1),
                            v,
                            p,
                        ));
                    }
                }
            }
        }
        let unit = h.get(i, c).shift_t(-v);
        let unit_inv = unit.invert(rel_prec)?;
        h.scale_col(c, &unit_inv);
        b1.scale_col(c, &unit_inv);
        h.set(i, c, TLaurent::t_power(field, nd, v));
        for &c2 in &remaining {
            if c2 == c || h.get(i, c2).is_exact_zero() {
                continue;
            }
            let f = h.get(i, c2).shift_t(-v).neg();
            h.add_col_multiple(c2, c, &f);
            b1.add_col_multiple(c2, c, &f);
            h.set(i, c2, TLaurent::zero(field, nd));
        }
        for &(ck, _) in &pivots {
            let x = h.get(i, ck).clone();
            if let Some(p) = x.precision() {
                if p < v {
                    return Err(exhausted(
                        format!("Birkhoff tail reduction at entry ({}, {})", i + 1, ck + 1),
                        v,
                        p,
                    ));
                }
            }
            let high = x.select(|e| e >= v);
            if !high.is_exact_zero() {
                let q = high.shift_t(-v).neg();
                h.add_col_multiple(ck, c, &q);
                b1.add_col_multiple(ck, c, &q);
            }
            h.set(i, ck, x.select(|e| e < v).assume_exact());
        }
        remaining.retain(|&x| x != c);
        pivots.push((c, v));
    }
    Ok((h, b1))
}

/// `a = q * b + r` in `F[t]` up to a common power of `t`: `q` has only exponents
/// `>= 0` and `r` has lower top degree than `b`.
fn poly_divmod(a: &TLaurent, b: &TLaurent) -> (TLaurent, TLaurent) {
    let field = a.field();
    let nd = a.root_denominator().max(b.root_denominator());
    let (db, lb) = b.terms().last().map(|(e, c)| (e, c.clone())).unwrap();
    let lb_inv = lb.inv().unwrap();
    let mut q = TLaurent::zero(field, nd);
    let mut r = a.clone();
    while let Some((dr, lr)) = r.terms().last().map(|(e, c)| (e, c.clone())) {
        if dr < db {
            break;
        }
        let term = TLaurent::monomial(lr.mul(&lb_inv), dr - db);
        r = r.sub(&term.mul(b));
        q = q.add(&term);
    }
    (q, r)
}

/// Column reduction of an exact matrix with monomial determinant by the Euclidean
/// algorithm over `F[t]`; every pivot is then a monomial and nothing is truncated.
fn hermite_exact(m: &LMatrix) -> Result<(LMatrix, LMatrix), BundleError> {
    let n = m.rows();
    let field = m.field();
    let nd = m.root_denominator();
    let mut h = m.clone();
    let mut b1 = LMatrix::identity(field, nd, n);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<(usize, i64)> = Vec::new();
    for i in 0..n {
        let c = loop {
            let live: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&c| !h.get(i, c).is_exact_zero())
                .collect();
            let Some(&c) = live.iter().min_by_key(|&&c| {
                let x = h.get(i, c);
                (x.highest().unwrap(), x.num_terms())
            }) else {
                return Err(BundleError::Algebra(AlgebraError::Singular));
            };
            if live.len() == 1 {
                break c;
            }
            for &c2 in &live {
                if c2 != c {
                    let (q, _) = poly_divmod(h.get(i, c2), h.get(i, c));
                    let q = q.neg();
                    h.add_col_multiple(c2, c, &q);
                    b1.add_col_multiple(c2, c, &q);
                }
            }
        };
        let x = h.get(i, c);
        if x.num_terms() != 1 {
            return Err(BundleError::Certificate(format!(
                "pivot {} is not a monomial",
                x
            )));
        }
        let (v, lead) = x.lead().map(|(e, c)| (e, c.clone())).unwrap();
        let inv = TLaurent::constant(lead.inv().unwrap());
        h.scale_col(c, &inv);
        b1.scale_col(c, &inv);
        for &(ck, _) in &pivots {
            let x = h.get(i, ck).clone();
            let high = x.select(|e| e >= v);
            if !high.is_exact_zero() {
                let q = high.shift_t(-v).neg();
                h.add_col_multiple(ck, c, &q);
                b1.add_col_multiple(ck, c, &q);
            }
        }
        remaining.retain(|&x| x != c);
        pivots.push((c, v));
    }
    Ok((h, b1))
}

fn row_lowest(m: &LMatrix, i: usize) -> i64 {
    m.row(i).iter().filter_map(TLaurent::lowest).min().unwrap()
}

/// Left `F[t^-1]`-row reduction of an exact invertible matrix. Returns `(A, A * H, mu)`
/// where the coefficient rows of `A * H` at `t^{mu_i}` are independent.
fn row_reduce(h: &LMatrix) -> Result<(LMatrix, LMatrix, Vec<i64>), BundleError> {
    let n = h.rows();
    let field = h.field();
    let nd = h.root_denominator();
    let mut a = LMatrix::identity(field, nd, n);
    let mut r = h.clone();
    let iteration_cap = 1_000_000;
    for _ in 0..iteration_cap {
        let mu: Vec<i64> = (0..n).map(|i| row_lowest(&r, i)).collect();
        let lead: Vec<Vec<PuiseuxScalar>> = (0..n)
            .map(|i| r.row(i).iter().map(|x| x.coeff(mu[i])).collect())
            .collect();
        let Some(c) = linalg::dependency(&lead) else {
            return Ok((a, r, mu));
        };
        let i0 = (0..n)
            .filter(|&i| !c[i].is_zero())
            .min_by_key(|&i| mu[i])
            .unwrap();
        let c0_inv = c[i0].inv().unwrap();
        for i in 0..n {
            if i == i0 || c[i].is_zero() {
                continue;
            }
            let f = TLaurent::monomial(c[i].mul(&c0_inv), mu[i0] - mu[i]);
            r.add_row_multiple(i0, i, &f);
            a.add_row_multiple(i0, i, &f);
        }
    }
    Err(BundleError::Certificate("row reduction did not terminate".into()))
}

/// Factorizes an invertible matrix over `F((t))` (with `pi` a scalar of `F`).
///
/// The working precision starts small and doubles up to `rel_prec` while it runs
/// out: coefficient growth over `k(pi^{1/N})` makes long expansions expensive.
pub fn birkhoff_matrix(m: &LMatrix, rel_prec: i64) -> Result<BirkhoffFactorization, BundleError> {
    if !m.is_square() || m.rows() == 0 {
        return Err(BundleError::Shape(m.rows()));
    }
    if has_monomial_det(m) {
        if let Ok(f) = birkhoff_exact(m) {
            return Ok(f);
        }
    }
    let mut p = rel_prec.min(4);
    loop {
        match birkhoff_at(m, p) {
            Err(e) if e.is_precision_exhausted() && p < rel_prec => p = (2 * p).min(rel_prec),
            r => return r,
        }
    }
}

fn has_monomial_det(m: &LMatrix) -> bool {
    m.is_exact() && m.rows() <= 6 && {
        let d = m.det_exact();
        d.is_exact() && d.num_terms() == 1
    }
}

fn birkhoff_exact(m: &LMatrix) -> Result<BirkhoffFactorization, BundleError> {
    let (h, b1) = hermite_exact(m)?;
    finish(m, h, b1, None)
}

fn birkhoff_at(m: &LMatrix, rel_prec: i64) -> Result<BirkhoffFactorization, BundleError> {
    let (h, b1) = hermite(m, rel_prec)?;
    finish(m, h, b1, Some(rel_prec))
}

/// Row reduction and sorting after the column reduction `M * B1 = H`; `W` is inverted
/// exactly when `rel_prec` is `None`.
fn finish(
    m: &LMatrix,
    h: LMatrix,
    b1: LMatrix,
    rel_prec: Option<i64>,
) -> Result<BirkhoffFactorization, BundleError> {
    let n = m.rows();
    let field = m.field();
    let nd = m.root_denominator();
    let (a, ah, mu) = row_reduce(&h)?;
    let mut w = ah;
    for (i, &e) in mu.iter().enumerate() {
        w.scale_row(i, &TLaurent::t_power(field, nd, -e));
    }
    let w_inv = match rel_prec {
        Some(p) => w.inverse(p)?,
        None => {
            let det = w.det_exact();
            let c = det
                .lead()
                .filter(|(e, _)| *e == 0 && det.num_terms() == 1)
                .and_then(|(_, c)| c.inv())
                .ok_or_else(|| BundleError::Certificate("W is not a unit".into()))?;
            w.adjugate().scale(&c)
        }
    };
    let b = b1.mul(&w_inv);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| mu[y].cmp(&mu[x]));
    let mut a_sorted = LMatrix::zeros(field, nd, n, n);
    let mut b_sorted = LMatrix::zeros(field, b.root_denominator(), n, n);
    for (k, &src) in order.iter().enumerate() {
        for j in 0..n {
            a_sorted.set(k, j, a.get(src, j).clone());
            b_sorted.set(j, k, b.get(j, src).clone());
        }
    }
    let d: Vec<i64> = order.iter().map(|&i| mu[i]).collect();
    let certified_precision = certify(m, &a_sorted, &d, &b_sorted)?;
    Ok(BirkhoffFactorization {
        a: a_sorted,
        d_exponents: d,
        b: b_sorted,
        certified_precision,
    })
}

fn certify(m: &LMatrix, a: &LMatrix, d: &[i64], b: &LMatrix) -> Result<Option<i64>, BundleError> {
    let n = m.rows();
    let field = m.field();
    for (i, j, x) in a.entries() {
        if !x.is_exact() || x.highest().is_some_and(|e| e > 0) {
            return Err(BundleError::Certificate(format!(
                "left factor entry ({}, {}) is not a polynomial in t^-1",
                i + 1,
                j + 1
            )));
        }
    }
    for (i, j, x) in b.entries() {
        if let Some(p) = x.precision().filter(|&p| p < 1) {
            return Err(exhausted(
                format!("Birkhoff right factor entry ({}, {})", i + 1, j + 1),
                1,
                p,
            ));
        }
        if x.lowest().is_some_and(|e| e < 0) {
            return Err(BundleError::Certificate(format!(
                "right factor entry ({}, {}) is not a power series in t",
                i + 1,
                j + 1
            )));
        }
    }
    let b0: Vec<Vec<PuiseuxScalar>> = (0..n)
        .map(|i| (0..n).map(|j| b.get(i, j).coeff(0)).collect())
        .collect();
    if linalg::rank(&b0) < n {
        return Err(BundleError::Certificate(
            "right factor is not invertible at t = 0".into(),
        ));
    }
    let amb = a.mul(m).mul(b);
    for (i, j, x) in amb.entries() {
        let expected = if i == j {
            TLaurent::t_power(field, x.root_denominator(), d[i])
        } else {
            TLaurent::zero(field, x.root_denominator())
        };
        if !x.sub(&expected).is_zero() {
            return Err(BundleError::Certificate(format!(
                "A*M*B differs from D at entry ({}, {})",
                i + 1,
                j + 1
            )));
        }
    }
    let p = amb.precision();
    let max_d = d.iter().copied().max().unwrap();
    if let Some(p) = p {
        if p <= max_d {
            return Err(exhausted("Birkhoff certificate".into(), max_d + 1, p));
        }
    }
    Ok(p)
}

/// Factorizes a cocycle over a field (the residue field or the generic field).
pub fn birkhoff_factorize(g: &LoopCocycle, t_prec: i64) -> Result<BirkhoffFactorization, BundleError> {
    if g.base() == Base::Dvr {
        return Err(BundleError::WrongBase(g.base().name()));
    }
    birkhoff_matrix(g.matrix(), t_prec)
}

pub fn splitting_type(g: &LoopCocycle, t_prec: i64) -> Result<SplittingType, BundleError> {
    Ok(birkhoff_factorize(g, t_prec)?.splitting_type())
}
