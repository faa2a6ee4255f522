//! One-parameter degeneration of a block lower triangular cocycle to its Levi part.
//!
//! For `q = [[Q11, 0], [Q21, Q22]]` the fiber at `s` is `[[Q11, 0], [s Q21, Q22]]`,
//! which is conjugate to `q` by a constant block scalar matrix when `s != 0` and is
//! block diagonal at `s = 0`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bundles::{
    birkhoff_matrix, h1_project, Base, CohClass, LoopCocycle, SplittingType,
};
use crate::error::BundleError;
use crate::field::{Coeff, GroundField};
use crate::matrix::LMatrix;
use crate::scalar::PuiseuxScalar;
use crate::series::TLaurent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviFamily {
    pub source: LoopCocycle,
    pub cut: usize,
    pub s_values: Vec<Coeff>,
    pub fibers: Vec<LoopCocycle>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub fibers: Vec<(Coeff, SplittingType)>,
    pub source_type: SplittingType,
    /// Splitting type of the block diagonal part, from the blocks separately.
    pub levi_type: SplittingType,
    /// The `s = 0` polygon weakly dominates the generic one.
    pub degeneration_dominates: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformationError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("source is not block lower triangular: entry ({row}, {col}) is nonzero")]
    NotTriangular { row: usize, col: usize },
    #[error("cut {0} does not split the rank")]
    BadCut(usize),
    #[error("fiber at s = {s} has type {found}, expected {expected}")]
    FiberMismatch {
        s: String,
        expected: SplittingType,
        found: SplittingType,
    },
    #[error("Levi blocks must be diagonal monomial matrices to read off twists")]
    NonDiagonalLevi,
    #[error("first-order classes differ: family {family:?}, engine {engine:?}")]
    ClassMismatch {
        family: Vec<Vec<String>>,
        engine: Vec<Vec<String>>,
    },
}

/// `0, 1, 2, 3` and `extra`, reduced into the field.
pub fn default_s_values(field: GroundField, extra: i64) -> Vec<Coeff> {
    vec![
        field.from_i64(0),
        field.from_i64(1),
        field.from_i64(2),
        field.from_i64(3),
        field.from_i64(extra),
    ]
}

fn fiber_at(q: &LMatrix, cut: usize, s: &Coeff) -> LMatrix {
    let n = q.rows();
    let nd = q.root_denominator();
    let s = PuiseuxScalar::from_coeff(s.clone(), nd);
    let mut out = q.clone();
    for i in cut..n {
        for j in 0..cut {
            out.set(i, j, q.get(i, j).scale(&s));
        }
    }
    out
}

pub fn build_levi_family(
    q_minus: &LoopCocycle,
    cut: usize,
    s_values: &[Coeff],
) -> Result<LeviFamily, DeformationError> {
    let q = q_minus.matrix();
    let n = q.rows();
    if cut == 0 || cut >= n {
        return Err(DeformationError::BadCut(cut));
    }
    if q_minus.base() != Base::ResidueField {
        return Err(BundleError::WrongBase(q_minus.base().name()).into());
    }
    for i in 0..cut {
        for j in cut..n {
            if !q.get(i, j).is_exact_zero() {
                return Err(DeformationError::NotTriangular {
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    let fibers = s_values
        .iter()
        .map(|s| {
            LoopCocycle::from_parts(q_minus.group(), Base::ResidueField, fiber_at(q, cut, s))
        })
        .collect();
    Ok(LeviFamily {
        source: q_minus.clone(),
        cut,
        s_values: s_values.to_vec(),
        fibers,
    })
}

/// Checks that every `s != 0` fiber has the source's splitting type and that the
/// `s = 0` fiber has the Levi type.
pub fn check_fibers(f: &LeviFamily, t_prec: i64) -> Result<FiberReport, DeformationError> {
    let q = f.source.matrix();
    let n = q.rows();
    let source_type = birkhoff_matrix(q, t_prec)?.splitting_type();
    let upper = birkhoff_matrix(&q.block(0, f.cut, 0, f.cut), t_prec)?.splitting_type();
    let lower = birkhoff_matrix(&q.block(f.cut, n, f.cut, n), t_prec)?.splitting_type();
    let mut levi = upper.exponents().to_vec();
    levi.extend_from_slice(lower.exponents());
    let levi_type = SplittingType::new(levi);

    let mut fibers = Vec::with_capacity(f.fibers.len());
    let mut degeneration_dominates = true;
    for (s, fiber) in f.s_values.iter().zip(&f.fibers) {
        let ty = birkhoff_matrix(fiber.matrix(), t_prec)?.splitting_type();
        let expected = if s.is_zero() {
            &levi_type
        } else {
            &source_type
        };
        if &ty != expected {
            return Err(DeformationError::FiberMismatch {
                s: s.to_literal(),
                expected: expected.clone(),
                found: ty,
            });
        }
        if s.is_zero() {
            degeneration_dominates &= ty.dominates(&source_type);
        }
        fibers.push((s.clone(), ty));
    }
    Ok(FiberReport {
        fibers,
        source_type,
        levi_type,
        degeneration_dominates,
    })
}

fn diagonal_exponents(m: &LMatrix) -> Result<Vec<i64>, DeformationError> {
    let mut out = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let x = m.get(i, j);
            if i != j {
                if !x.is_exact_zero() {
                    return Err(DeformationError::NonDiagonalLevi);
                }
                continue;
            }
            match x.lead() {
                Some((e, c)) if x.is_exact() && x.num_terms() == 1 && c.is_one() => out.push(e),
                _ => return Err(DeformationError::NonDiagonalLevi),
            }
        }
    }
    Ok(out)
}

/// Classes of the `s`-linear term of the family, one per lower-left entry.
///
/// The Levi blocks must be `diag(t^{-a})`; entry `(j, i)` of `Q21 Q11^{-1}` is projected
/// to `H^1(O(a_{cut+j} - a_i))`.
pub fn first_order_class(f: &LeviFamily) -> Result<Vec<CohClass>, DeformationError> {
    let q = f.source.matrix();
    let n = q.rows();
    let cut = f.cut;
    let field = q.field();
    let nd = q.root_denominator();
    // s-linear coefficient: fiber(1) - fiber(0)
    let one = fiber_at(q, cut, &field.one());
    let zero = fiber_at(q, cut, &field.zero());
    let linear = one.sub(&zero);
    let a: Vec<i64> = diagonal_exponents(&q.block(0, cut, 0, cut))?
        .into_iter()
        .chain(diagonal_exponents(&q.block(cut, n, cut, n))?)
        .map(|e| -e)
        .collect();
    let mut d1_inv = LMatrix::zeros(field, nd, cut, cut);
    for (i, ai) in a.iter().enumerate().take(cut) {
        d1_inv.set(i, i, TLaurent::t_power(field, nd, *ai));
    }
    let x = linear.block(cut, n, 0, cut).mul(&d1_inv);
    let mut out = Vec::with_capacity((n - cut) * cut);
    for j in 0..n - cut {
        for i in 0..cut {
            out.push(h1_project(x.get(j, i), a[cut + j] - a[i])?);
        }
    }
    Ok(out)
}

fn literals(classes: &[CohClass]) -> Vec<Vec<String>> {
    classes
        .iter()
        .map(|c| c.coords.iter().map(ToString::to_string).collect())
        .collect()
}

/// Finds `lambda != 0` with `family = lambda * engine` in every coordinate.
/// Returns `None` when both sides vanish.
pub fn match_classes(
    family: &[CohClass],
    engine: &[CohClass],
) -> Result<Option<Coeff>, DeformationError> {
    let mismatch = || DeformationError::ClassMismatch {
        family: literals(family),
        engine: literals(engine),
    };
    if family.len() != engine.len()
        || family
            .iter()
            .zip(engine)
            .any(|(x, y)| x.twist != y.twist || x.dim() != y.dim())
    {
        return Err(mismatch());
    }
    let pairs: Vec<(&Coeff, &Coeff)> = family
        .iter()
        .zip(engine)
        .flat_map(|(x, y)| x.coords.iter().zip(&y.coords))
        .collect();
    let Some((fx, ex)) = pairs.iter().find(|(_, e)| !e.is_zero()) else {
        return if pairs.iter().all(|(x, _)| x.is_zero()) {
            Ok(None)
        } else {
            Err(mismatch())
        };
    };
    let lambda = fx.div(ex).unwrap();
    if lambda.is_zero() {
        return Err(mismatch());
    }
    for (x, e) in &pairs {
        if **x != &lambda * *e {
            return Err(mismatch());
        }
    }
    Ok(Some(lambda))
}
