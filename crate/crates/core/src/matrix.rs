//! Square and rectangular matrices over [`TLaurent`].

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::AlgebraError;
use crate::field::GroundField;
use crate::scalar::PuiseuxScalar;
use crate::series::TLaurent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMatrix {
    rows: usize,
    cols: usize,
    field: GroundField,
    data: Vec<TLaurent>,
}

impl LMatrix {
    pub fn zeros(field: GroundField, n: u32, rows: usize, cols: usize) -> Self {
        LMatrix {
            rows,
            cols,
            field,
            data: (0..rows * cols).map(|_| TLaurent::zero(field, n)).collect(),
        }
    }

    pub fn identity(field: GroundField, n: u32, size: usize) -> Self {
        let mut m = Self::zeros(field, n, size, size);
        for i in 0..size {
            m.set(i, i, TLaurent::one(field, n));
        }
        m
    }

    /// Row-major constructor.
    pub fn from_rows(field: GroundField, rows: Vec<Vec<TLaurent>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        LMatrix {
            rows: r,
            cols: c,
            field,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// `diag(t^{e_1}, ..., t^{e_k})`.
    pub fn diag_t_powers(field: GroundField, n: u32, exps: &[i64]) -> Self {
        let mut m = Self::zeros(field, n, exps.len(), exps.len());
        for (i, e) in exps.iter().enumerate() {
            m.set(i, i, TLaurent::t_power(field, n, *e));
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(field: GroundField, n: u32, perm: &[usize]) -> Self {
        let mut m = Self::zeros(field, n, perm.len(), perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, TLaurent::one(field, n));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &TLaurent {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: TLaurent) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &TLaurent)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, x)| (k / self.cols, k % self.cols, x))
    }

    pub fn row(&self, i: usize) -> &[TLaurent] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Largest root denominator among the entries.
    pub fn root_denominator(&self) -> u32 {
        self.data
            .iter()
            .fold(1u32, |acc, x| acc.lcm(&x.root_denominator()))
    }

    pub fn map<F: FnMut(&TLaurent) -> TLaurent>(&self, f: F) -> Self {
        LMatrix {
            data: self.data.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn try_map<F>(&self, mut f: F) -> Result<Self, AlgebraError>
    where
        F: FnMut(usize, usize, &TLaurent) -> Result<TLaurent, AlgebraError>,
    {
        let mut data = Vec::with_capacity(self.data.len());
        for (i, j, x) in self.entries() {
            data.push(f(i, j, x)?);
        }
        Ok(LMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let n = self.root_denominator().lcm(&other.root_denominator());
        let mut out = Self::zeros(self.field, n, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TLaurent::zero(self.field, n);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        LMatrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.map(TLaurent::neg))
    }

    pub fn scale(&self, c: &PuiseuxScalar) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        LMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data,
        }
    }

    /// Submatrix of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            for j in c0..c1 {
                data.push(self.get(i, j).clone());
            }
        }
        LMatrix {
            rows: r1 - r0,
            cols: c1 - c0,
            field: self.field,
            data,
        }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Minimum precision over the entries; `None` when every entry is exact.
    pub fn precision(&self) -> Option<i64> {
        self.data.iter().filter_map(TLaurent::precision).min()
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(TLaurent::is_exact)
    }

    /// Minimum pi-valuation over all known coefficients.
    pub fn val_pi(&self) -> Option<Rational64> {
        self.data.iter().filter_map(TLaurent::val_pi).min()
    }

    /// All entries vanish to their known precision.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(TLaurent::is_zero)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.data.iter().all(TLaurent::is_exact_zero)
    }

    pub fn specialize_pi_zero(&self) -> Result<Self, AlgebraError> {
        self.try_map(|_, _, x| x.specialize_pi_zero())
    }

    pub fn extend_pi_root(&self, d: u32) -> Self {
        self.map(|x| x.extend_pi_root(d))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        self.map(|x| x.truncate(prec))
    }

    /// Determinant. Cofactor expansion (division free, exact on exact input) up to
    /// size 4, Gaussian elimination beyond.
    pub fn det(&self, rel_prec: i64) -> Result<TLaurent, AlgebraError> {
        assert!(self.is_square());
        if self.rows <= 4 {
            return Ok(self.det_cofactor());
        }
        self.det_gauss(rel_prec)
    }

    /// Division-free determinant by cofactor expansion; exact on exact input.
    pub fn det_exact(&self) -> TLaurent {
        assert!(self.is_square());
        self.det_cofactor()
    }

    /// Classical adjugate, division free: `adj(M) * M = det(M) * I`.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square());
        let size = self.rows;
        let n = self.root_denominator();
        if size == 1 {
            return Self::identity(self.field, n, 1);
        }
        let mut out = Self::zeros(self.field, n, size, size);
        for i in 0..size {
            for j in 0..size {
                let rows: Vec<usize> = (0..size).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..size).filter(|&c| c != j).collect();
                let mut minor = Self::zeros(self.field, n, size - 1, size - 1);
                for (a, &r) in rows.iter().enumerate() {
                    for (b, &c) in cols.iter().enumerate() {
                        minor.set(a, b, self.get(r, c).clone());
                    }
                }
                let d = minor.det_cofactor();
                out.set(j, i, if (i + j) % 2 == 0 { d } else { d.neg() });
            }
        }
        out
    }

    fn det_cofactor(&self) -> TLaurent {
        let n = self.root_denominator();
        match self.rows {
            0 => TLaurent::one(self.field, n),
            1 => self.get(0, 0).clone(),
            2 => self
                .get(0, 0)
                .mul(self.get(1, 1))
                .sub(&self.get(0, 1).mul(self.get(1, 0))),
            size => {
                let mut acc = TLaurent::zero(self.field, n);
                for j in 0..size {
                    let a = self.get(0, j);
                    if a.is_exact_zero() {
                        continue;
                    }
                    let cols: Vec<usize> = (0..size).filter(|&c| c != j).collect();
                    let mut minor = Self::zeros(self.field, n, size - 1, size - 1);
                    for i in 1..size {
                        for (k, &c) in cols.iter().enumerate() {
                            minor.set(i - 1, k, self.get(i, c).clone());
                        }
                    }
                    let term = a.mul(&minor.det_cofactor());
                    acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    fn det_gauss(&self, rel_prec: i64) -> Result<TLaurent, AlgebraError> {
        let size = self.rows;
        let mut m = self.clone();
        let mut det = TLaurent::one(self.field, self.root_denominator());
        for col in 0..size {
            let pivot = (col..size)
                .filter(|&r| !m.get(r, col).is_zero())
                .min_by_key(|&r| m.get(r, col).lowest().unwrap());
            let Some(p) = pivot else {
                return Ok(TLaurent::zero(self.field, self.root_denominator())
                    .truncate(m.precision().unwrap_or(0)));
            };
            if p != col {
                m.swap_rows(p, col);
                det = det.neg();
            }
            let piv = m.get(col, col).clone();
            det = det.mul(&piv);
            let inv = piv.invert(rel_prec)?;
            for r in col + 1..size {
                let f = m.get(r, col).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for c in col..size {
                    let v = m.get(r, c).sub(&f.mul(m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += f * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, f: &TLaurent) {
        for j in 0..self.cols {
            let v = self.get(dst, j).add(&f.mul(self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += col[src] * f`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, f: &TLaurent) {
        for i in 0..self.rows {
            let v = self.get(i, dst).add(&self.get(i, src).mul(f));
            self.set(i, dst, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, f: &TLaurent) {
        for j in 0..self.cols {
            let v = f.mul(self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, f: &TLaurent) {
        for i in 0..self.rows {
            let v = self.get(i, j).mul(f);
            self.set(i, j, v);
        }
    }

    /// Inverse over `K((t))` by Gauss-Jordan with minimal-valuation pivots.
    pub fn inverse(&self, rel_prec: i64) -> Result<Self, AlgebraError> {
        assert!(self.is_square());
        let size = self.rows;
        let n = self.root_denominator();
        let mut m = self.clone();
        let mut inv = Self::identity(self.field, n, size);
        for col in 0..size {
            let pivot = (col..size)
                .filter(|&r| !m.get(r, col).is_zero())
                .min_by_key(|&r| m.get(r, col).lowest().unwrap());
            let Some(p) = pivot else {
                return Err(if m.is_exact() {
                    AlgebraError::Singular
                } else {
                    AlgebraError::PrecisionExhausted {
                        context: "matrix inverse: pivot column vanishes to its precision".into(),
                        needed: m.precision().unwrap_or(0) + 1,
                        available: m.precision().unwrap_or(0),
                    }
                });
            };
            m.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pinv = m.get(col, col).invert(rel_prec)?;
            m.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..size {
                if r == col {
                    continue;
                }
                let f = m.get(r, col).neg();
                if f.is_exact_zero() {
                    continue;
                }
                m.add_row_multiple(r, col, &f);
                inv.add_row_multiple(r, col, &f);
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for LMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: GroundField = GroundField::Rationals;

    fn t(e: i64) -> TLaurent {
        TLaurent::t_power(Q, 1, e)
    }

    fn pi() -> TLaurent {
        TLaurent::constant(PuiseuxScalar::monomial(Q.one(), 1, 1))
    }

    #[test]
    fn adjugate_identity() {
        let one = TLaurent::one(Q, 1);
        let g = LMatrix::from_rows(
            Q,
            alloc::vec![
                alloc::vec![t(-1), pi().add(&t(2)), one.clone()],
                alloc::vec![t(1), one.clone(), pi()],
                alloc::vec![one.clone(), t(3), t(-2)],
            ],
        );
        let det = g.det_exact();
        let prod = g.adjugate().mul(&g);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { det.clone() } else { TLaurent::zero(Q, 1) };
                assert_eq!(prod.get(i, j), &want);
            }
        }
    }

    #[test]
    fn det_of_worked_cocycle_is_one() {
        let g = LMatrix::from_rows(
            Q,
            alloc::vec![alloc::vec![t(1), pi()], alloc::vec![TLaurent::zero(Q, 1), t(-1)]],
        );
        assert!(g.det(16).unwrap().is_one());
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let one = TLaurent::one(Q, 1);
        let g = LMatrix::from_rows(
            Q,
            alloc::vec![
                alloc::vec![t(-1), pi().add(&t(2))],
                alloc::vec![one.add(&t(1)), t(1)],
            ],
        );
        let inv = g.inverse(12).unwrap();
        let prod = g.mul(&inv);
        let p = prod.precision().unwrap();
        assert!(p >= 6, "precision {} too low", p);
        for (i, j, x) in prod.entries() {
            let expect = if i == j { TLaurent::one(Q, 1) } else { TLaurent::zero(Q, 1) };
            assert!(x.sub(&expect).is_zero(), "entry ({}, {}) = {}", i, j, x);
        }
    }

    #[test]
    fn gauss_and_cofactor_agree() {
        let one = TLaurent::one(Q, 1);
        let mut rows = alloc::vec::Vec::new();
        for i in 0..5i64 {
            let mut row = alloc::vec::Vec::new();
            for j in 0..5i64 {
                let x = if i == j { one.add(&t(1)) } else { t((i - j).abs() - 1).scale(&PuiseuxScalar::from_i64(Q, i + 2 * j + 1, 1)) };
                row.push(x);
            }
            rows.push(row);
        }
        let m = LMatrix::from_rows(Q, rows);
        let d1 = m.det_cofactor();
        let d2 = m.det_gauss(20).unwrap();
        assert!(d1.sub(&d2).is_zero());
    }
}
