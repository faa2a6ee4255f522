use alloc::format;

use crate::error::BundleError;
use crate::field::GroundField;
use crate::matrix::LMatrix;
use crate::series::TLaurent;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    SL,
    GL,
}

/// Coefficient ring of a cocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    /// The residue field `k`: coefficients are constant in `pi`.
    ResidueField,
    /// The valuation ring `R[pi^{1/N}]`: every coefficient is `pi`-integral.
    Dvr,
    /// The fraction field `K`: `pi` is an invertible scalar.
    GenericField,
}

impl Base {
    pub fn name(&self) -> &'static str {
        match self {
            Base::ResidueField => "residue field",
            Base::Dvr => "DVR",
            Base::GenericField => "generic field",
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Base::Dvr)
    }
}

/// Glueing datum `g` of a bundle on `P^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopCocycle {
    group: Group,
    base: Base,
    matrix: LMatrix,
}

impl LoopCocycle {
    /// Validates the base tag and the determinant condition.
    pub fn new(group: Group, base: Base, matrix: LMatrix, t_precision: i64) -> Result<Self, BundleError> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(BundleError::Shape(matrix.rows()));
        }
        match base {
            Base::ResidueField => {
                if let Some((i, j, _)) = matrix.entries().find(|(_, _, x)| !x.is_constant_in_pi()) {
                    return Err(BundleError::NotInvertible(format!(
                        "entry ({}, {}) depends on pi but the base is the residue field",
                        i, j
                    )));
                }
            }
            Base::Dvr => {
                for (i, j, x) in matrix.entries() {
                    if let Some(e) = x.first_non_integral() {
                        return Err(BundleError::NonIntegralEntry {
                            row: i,
                            col: j,
                            t_exponent: e,
                        });
                    }
                }
            }
            Base::GenericField => {}
        }
        let det = matrix.det(t_precision)?;
        match group {
            Group::SL => {
                let diff = det.sub(&TLaurent::one(matrix.field(), det.root_denominator()));
                if !diff.is_zero() {
                    return Err(BundleError::NotSpecialLinear);
                }
            }
            Group::GL => {
                let (_, lead) = det.lead().ok_or_else(|| {
                    BundleError::NotInvertible("determinant vanishes to its precision".into())
                })?;
                if base == Base::Dvr {
                    let red = det.specialize_pi_zero()?;
                    if red.lowest() != det.lowest() || lead.val_pi() != Some(0.into()) {
                        return Err(BundleError::NotInvertible(
                            "determinant is not a unit of R((t))".into(),
                        ));
                    }
                }
            }
        }
        Ok(LoopCocycle {
            group,
            base,
            matrix,
        })
    }

    /// Wraps a matrix already known to satisfy the invariants.
    pub(crate) fn from_parts(group: Group, base: Base, matrix: LMatrix) -> Self {
        LoopCocycle {
            group,
            base,
            matrix,
        }
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn matrix(&self) -> &LMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> LMatrix {
        self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> GroundField {
        self.matrix.field()
    }

    /// Special fiber: reduction modulo `pi^{1/N}`.
    pub fn special_fiber(&self) -> Result<LoopCocycle, BundleError> {
        if let Some((row, col, x)) = self.matrix.entries().find(|(_, _, x)| !x.is_integral()) {
            return Err(BundleError::NonIntegralEntry {
                row,
                col,
                t_exponent: x.first_non_integral().unwrap(),
            });
        }
        let m = self.matrix.specialize_pi_zero()?;
        Ok(LoopCocycle::from_parts(self.group, Base::ResidueField, m))
    }

    /// Generic fiber: the same matrix with `pi` treated as invertible.
    pub fn generic_fiber(&self) -> LoopCocycle {
        LoopCocycle::from_parts(self.group, Base::GenericField, self.matrix.clone())
    }

    /// Re-tags a residue-field cocycle as a constant family over the DVR.
    pub fn as_dvr(&self) -> Result<LoopCocycle, BundleError> {
        if self.base == Base::GenericField {
            return Err(BundleError::WrongBase(self.base.name()));
        }
        Ok(LoopCocycle::from_parts(self.group, Base::Dvr, self.matrix.clone()))
    }

    pub fn extend_pi_root(&self, d: u32) -> LoopCocycle {
        LoopCocycle::from_parts(self.group, self.base, self.matrix.extend_pi_root(d))
    }
}
