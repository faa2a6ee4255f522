//! Semistable reduction over the valuation ring.
//!
//! Each step normalizes the cocycle so that its special fiber is `diag(t^{-a})`,
//! picks a maximal parabolic `Q` containing the canonical one, conjugates by the
//! largest integral central element `z = lambda(pi^{e*})` and, while the resulting
//! extension class vanishes, first removes it by a coboundary adjustment. The new
//! special fiber is block lower triangular with a nonzero extension class, and its
//! polygon lies strictly below the old one.
//!
//! All intermediate cocycles are exact Laurent polynomial matrices; truncated input
//! is accepted only once [`certify_exact`] shows the truncation already pins down the
//! family up to isomorphism.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use crate::bundles::{
    birkhoff_matrix, canonical_parabolic, coboundary_split, h1_project, polygons_between, Base,
    CanonicalReductionData, CohClass, Group, LoopCocycle, SplittingType,
};
use crate::error::{AlgebraError, BundleError, RootDataError};
use crate::field::GroundField;
use crate::matrix::LMatrix;
use crate::rootdata::{self, CentralWeight, GroupForm};
use crate::scalar::PuiseuxScalar;
use crate::series::{TLaurent, DEFAULT_T_PRECISION};

/// How to pick the maximal parabolic `Q` containing the canonical parabolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutRule {
    /// Boundary with the largest jump in exponents; ties go to the smallest cut.
    LargestGap,
    First,
    Last,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub max_steps: usize,
    /// Relative t-precision for series expansions.
    pub t_precision: i64,
    pub cut_rule: CutRule,
    /// Cap on coboundary adjustments within one step.
    pub max_inner: usize,
    /// Re-factorize the generic fiber after every step.
    pub verify_generic: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_steps: 64,
            t_precision: DEFAULT_T_PRECISION,
            cut_rule: CutRule::LargestGap,
            max_inner: 64,
            verify_generic: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionState {
    pub cocycle: LoopCocycle,
    pub pi_denominator: u32,
    pub generic_type: SplittingType,
    pub special_type: SplittingType,
    pub step_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTrace {
    pub before_type: SplittingType,
    pub after_type: SplittingType,
    pub parabolic: CanonicalReductionData,
    /// `Q` stabilizes the span of the first `cut` basis vectors.
    pub cut: usize,
    pub e_star: Rational64,
    /// Every candidate exponent, in order; the last one is `e_star`.
    pub e_history: Vec<Rational64>,
    pub inner_adjustments: usize,
    pub class_nonzero: bool,
    /// Root denominator after the extension made by this step.
    pub pi_denominator: u32,
    /// Extension classes of the lower-left block, row-major.
    pub classes: Vec<CohClass>,
    /// Special fiber of the modified cocycle.
    pub reduced_fiber: LoopCocycle,
    /// Splitting exponents of the canonical reduction this step started from.
    pub levi_exponents: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("special fiber is already semistable; nothing to do")]
    NothingToDo,
    #[error("generic fiber is not semistable: splitting type {0}")]
    GenericUnstable(SplittingType),
    #[error("special fiber still unstable after {} steps", .trace.len())]
    MaxSteps { trace: Vec<StepTrace> },
    #[error("coboundary adjustments exceeded their bound at e* = {e_star}")]
    InnerLoopBound { e_star: Rational64 },
    #[error("central exponent did not increase: {before} then {after}")]
    InnerNotMonotone {
        before: Rational64,
        after: Rational64,
    },
    #[error("lower-left block vanishes identically: the reduction lifts to all orders")]
    Unbounded,
    #[error("polygon did not descend strictly: {before} -> {after}")]
    DescentViolated {
        before: SplittingType,
        after: SplittingType,
    },
    #[error("generic splitting type changed from {before} to {after}")]
    GenericChanged {
        before: SplittingType,
        after: SplittingType,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl From<AlgebraError> for EngineError {
    fn from(e: AlgebraError) -> Self {
        EngineError::Bundle(e.into())
    }
}

impl EngineError {
    pub fn is_precision_exhausted(&self) -> bool {
        matches!(self, EngineError::Bundle(b) if b.is_precision_exhausted())
    }
}

fn exact_monomial(x: &TLaurent) -> Option<(i64, PuiseuxScalar)> {
    if x.is_exact() && x.num_terms() == 1 {
        x.lead().map(|(e, c)| (e, c.clone()))
    } else {
        None
    }
}

/// Inverse of an exact matrix whose determinant is a monomial `c t^k`.
pub fn exact_inverse(m: &LMatrix) -> Result<LMatrix, EngineError> {
    let det = m.det_exact();
    let (k, c) = exact_monomial(&det).ok_or_else(|| {
        EngineError::Unsupported(format!("determinant {} is not a monomial", det))
    })?;
    let inv = TLaurent::monomial(c.inv().unwrap(), -k);
    Ok(m.adjugate().map(|x| x.mul(&inv)))
}

/// Replaces a truncated cocycle by its known Laurent polynomial part, after checking
/// that every completion of the unknown tail gives an isomorphic family:
/// `g = g0 (1 + g0^{-1} (g - g0))` with `g0^{-1} (g - g0)` in `t R[[t]]`.
pub fn certify_exact(g: &LoopCocycle) -> Result<LoopCocycle, EngineError> {
    let m = g.matrix();
    if m.is_exact() {
        return Ok(g.clone());
    }
    let p = m.precision().unwrap();
    let g0 = m.map(TLaurent::assume_exact);
    let det = g0.det_exact();
    match g.group() {
        Group::SL if !det.is_one() => {
            return Err(AlgebraError::PrecisionExhausted {
                context: "the known terms do not have determinant 1".into(),
                needed: p + 1,
                available: p,
            }
            .into())
        }
        _ => {}
    }
    let inv = exact_inverse(&g0)?;
    let n = m.rows();
    let mut deficit = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let (Some(v), Some(pk)) = (inv.get(i, k).lowest(), m.get(k, j).precision()) {
                    deficit = deficit.max(1 - (v + pk));
                }
            }
        }
    }
    if deficit > 0 {
        return Err(AlgebraError::PrecisionExhausted {
            context: "the truncated input does not determine the bundle family".into(),
            needed: p + deficit,
            available: p,
        }
        .into());
    }
    Ok(LoopCocycle::from_parts(g.group(), g.base(), g0))
}

fn reversal(field: GroundField, n: u32, size: usize) -> LMatrix {
    let perm: Vec<usize> = (0..size).rev().collect();
    LMatrix::permutation(field, n, &perm)
}

/// Returns an equivalent cocycle `w0 A g B w0` whose special fiber is
/// `diag(t^{-a_1}, ..., t^{-a_n})` with `a` descending, together with `a`.
pub fn normalize_to_canonical(
    g: &LoopCocycle,
    t_prec: i64,
) -> Result<(LoopCocycle, SplittingType), EngineError> {
    let g = certify_exact(g)?;
    let special = g.special_fiber()?;
    let f = birkhoff_matrix(special.matrix(), t_prec)?;
    let st = f.splitting_type();
    if st.is_semistable() {
        return Err(EngineError::NothingToDo);
    }
    // B = gbar^{-1} A^{-1} D is a Laurent polynomial matrix when gbar and A are
    let b = exact_inverse(special.matrix())?
        .mul(&exact_inverse(&f.a)?)
        .mul(&f.d());
    if let Some((i, j, _)) = b.entries().find(|(_, _, x)| x.lowest().is_some_and(|e| e < 0)) {
        return Err(BundleError::Certificate(format!(
            "right factor entry ({}, {}) has a pole at t = 0",
            i + 1,
            j + 1
        ))
        .into());
    }
    let size = g.rank();
    let w0 = reversal(g.field(), 1, size);
    let gt = w0.mul(&f.a).mul(g.matrix()).mul(&b).mul(&w0);
    let gt = LoopCocycle::from_parts(g.group(), Base::Dvr, gt);
    let neg: Vec<i64> = st.exponents().iter().map(|a| -a).collect();
    let expected = LMatrix::diag_t_powers(g.field(), 1, &neg);
    if !same_values(gt.special_fiber()?.matrix(), &expected) {
        return Err(EngineError::Postcondition(
            "normalized special fiber is not diagonal".into(),
        ));
    }
    Ok((gt, st))
}

fn same_values(a: &LMatrix, b: &LMatrix) -> bool {
    a.rows() == b.rows()
        && a.cols() == b.cols()
        && a.entries().all(|(i, j, x)| x.sub(b.get(i, j)).is_exact_zero())
}

/// `g = v l u` with `v` block lower unipotent, `l` block diagonal, `u` block upper
/// unipotent, for the split after the first `cut` coordinates.
pub fn block_ldu(
    g: &LMatrix,
    cut: usize,
    rel_prec: i64,
) -> Result<(LMatrix, LMatrix, LMatrix), BundleError> {
    let n = g.rows();
    let field = g.field();
    let nd = g.root_denominator();
    let g11 = g.block(0, cut, 0, cut);
    let g12 = g.block(0, cut, cut, n);
    let g21 = g.block(cut, n, 0, cut);
    let g22 = g.block(cut, n, cut, n);
    let g11_inv = g11.inverse(rel_prec).map_err(|e| match e {
        AlgebraError::Singular => {
            BundleError::NotInvertible("upper-left block is singular".into())
        }
        other => other.into(),
    })?;
    let x = g21.mul(&g11_inv);
    let y = g11_inv.mul(&g12);
    let l2 = g22.sub(&x.mul(&g12));
    let mut v = LMatrix::identity(field, nd, n);
    v.set_block(cut, 0, &x);
    let mut l = LMatrix::zeros(field, nd, n, n);
    l.set_block(0, 0, &g11);
    l.set_block(cut, cut, &l2);
    let mut u = LMatrix::identity(field, nd, n);
    u.set_block(0, cut, &y);
    Ok((v, l, u))
}

fn lower_left_exponent(block: &LMatrix, m: u64) -> Result<Rational64, EngineError> {
    if block.is_exact_zero() {
        return Err(EngineError::Unbounded);
    }
    match block.val_pi() {
        Some(v) => Ok(v / Rational64::from_integer(m as i64)),
        None => {
            let p = block.precision().unwrap_or(0);
            Err(AlgebraError::PrecisionExhausted {
                context: "lower-left block vanishes to its precision".into(),
                needed: p + 1,
                available: p,
            }
            .into())
        }
    }
}

/// Largest `e` with `lambda(pi^e) v lambda(pi^e)^{-1}` integral, for type A where the
/// unipotent radical has a single level of weight `m`.
pub fn maximal_central_exponent(
    v: &LMatrix,
    cut: usize,
    cw: &CentralWeight,
) -> Result<Rational64, EngineError> {
    let n = v.rows();
    let block = v.block(cut, n, 0, cut);
    let e = lower_left_exponent(&block, cw.level_weights[0])?;
    if e <= Rational64::zero() {
        return Err(EngineError::Precondition(
            "lower-left block is not divisible by pi".into(),
        ));
    }
    Ok(e)
}

fn choose_cut(a: &[i64], blocks: &CanonicalReductionData, rule: CutRule) -> usize {
    let offsets = blocks.offsets();
    let cuts = &offsets[1..offsets.len() - 1];
    match rule {
        CutRule::First => cuts[0],
        CutRule::Last => cuts[cuts.len() - 1],
        CutRule::LargestGap => {
            let mut best = cuts[0];
            for &c in cuts {
                if a[c - 1] - a[c] > a[best - 1] - a[best] {
                    best = c;
                }
            }
            best
        }
    }
}

fn group_form(group: Group) -> GroupForm {
    match group {
        Group::SL => GroupForm::SL,
        Group::GL => GroupForm::GL,
    }
}

/// Central weight of the maximal parabolic stabilizing the first `cut` coordinates.
pub fn central_weight_for_cut(
    rank: usize,
    cut: usize,
    group: Group,
) -> Result<CentralWeight, EngineError> {
    let rs = rootdata::build_root_system('A', rank - 1)?;
    let pd = rootdata::maximal_parabolic(&rs, cut - 1)?;
    Ok(rootdata::central_weight(&pd, group_form(group))?)
}

fn reduced_lower_left(
    gt: &LMatrix,
    cut: usize,
    a: &[i64],
    v: Rational64,
) -> Result<Vec<Vec<TLaurent>>, EngineError> {
    let n = gt.rows();
    let mut out = Vec::with_capacity(n - cut);
    for j in 0..n - cut {
        let mut row = Vec::with_capacity(cut);
        for (i, ai) in a.iter().enumerate().take(cut) {
            let x = gt
                .get(cut + j, i)
                .mul_pi_power(-v)
                .specialize_pi_zero()?
                .shift_t(*ai);
            row.push(x);
        }
        out.push(row);
    }
    Ok(out)
}

/// One modification step.
pub fn langton_step(
    state: &ReductionState,
    config: &EngineConfig,
) -> Result<(ReductionState, StepTrace), EngineError> {
    if state.special_type.is_semistable() {
        return Err(EngineError::Precondition(
            "special fiber is already semistable".into(),
        ));
    }
    if !state.generic_type.is_semistable() {
        return Err(EngineError::GenericUnstable(state.generic_type.clone()));
    }
    let t_prec = config.t_precision;
    let group = state.cocycle.group();
    let (gt, before) = normalize_to_canonical(&state.cocycle, t_prec)?;
    let a = before.exponents().to_vec();
    let n = a.len();
    let blocks = canonical_parabolic(&before);
    let cut = choose_cut(&a, &blocks, config.cut_rule);
    let cw = central_weight_for_cut(n, cut, group)?;
    let m = cw.level_weights[0];
    let new_n = state.pi_denominator * cw.required_n as u32;
    let mut gt = gt.extend_pi_root(cw.required_n as u32);
    let field = gt.field();

    let mut history: Vec<Rational64> = Vec::new();
    let mut adjustments = 0;
    let (e_star, v, classes, xbar) = loop {
        let mat = gt.matrix();
        let e = lower_left_exponent(&mat.block(cut, n, 0, cut), m)?;
        if e <= Rational64::zero() {
            return Err(EngineError::Postcondition(
                "normalized cocycle is not block upper triangular modulo pi".into(),
            ));
        }
        if let Some(&prev) = history.last() {
            if e <= prev {
                return Err(EngineError::InnerNotMonotone {
                    before: prev,
                    after: e,
                });
            }
        }
        history.push(e);
        if e > Rational64::from_integer(n as i64) {
            return Err(EngineError::InnerLoopBound { e_star: e });
        }
        let v = e * Rational64::from_integer(m as i64);
        let xbar = reduced_lower_left(mat, cut, &a, v)?;
        let mut classes = Vec::with_capacity((n - cut) * cut);
        for (j, row) in xbar.iter().enumerate() {
            for (i, x) in row.iter().enumerate() {
                classes.push(h1_project(x, a[cut + j] - a[i])?);
            }
        }
        if classes.iter().any(|c| !c.is_zero()) {
            break (e, v, classes, xbar);
        }
        adjustments += 1;
        if adjustments > config.max_inner {
            return Err(EngineError::InnerLoopBound { e_star: e });
        }
        let nd = mat.root_denominator();
        let mut v_out = LMatrix::identity(field, nd, n);
        let mut v_s = LMatrix::identity(field, nd, n);
        for (j, row) in xbar.iter().enumerate() {
            for (i, x) in row.iter().enumerate() {
                let d = a[cut + j] - a[i];
                let (x_out, x_in) = coboundary_split(x, d)?;
                let p = x_out.neg().mul_pi_power(v);
                let q = x_in.neg().shift_t(d).mul_pi_power(v);
                v_out.set(cut + j, i, p);
                v_s.set(cut + j, i, q);
            }
        }
        gt = LoopCocycle::from_parts(group, Base::Dvr, v_out.mul(mat).mul(&v_s));
    };

    // conjugation by z = lambda(pi^{e*})
    let mut g_new = gt.matrix().clone();
    for i in 0..n {
        for j in 0..n {
            let x = g_new.get(i, j);
            if i >= cut && j < cut {
                g_new.set(i, j, x.mul_pi_power(-v));
            } else if i < cut && j >= cut {
                g_new.set(i, j, x.mul_pi_power(v));
            }
        }
    }
    let g_new = LoopCocycle::from_parts(group, Base::Dvr, g_new);
    let special = g_new.special_fiber()?;
    check_step_postconditions(special.matrix(), cut, &a, &xbar)?;
    let after = birkhoff_matrix(special.matrix(), t_prec)?.splitting_type();
    if !before.strictly_dominates(&after) {
        return Err(EngineError::DescentViolated { before, after });
    }
    if config.verify_generic {
        let generic = birkhoff_matrix(g_new.matrix(), t_prec)?.splitting_type();
        if generic != state.generic_type {
            return Err(EngineError::GenericChanged {
                before: state.generic_type.clone(),
                after: generic,
            });
        }
    }
    let trace = StepTrace {
        before_type: before,
        after_type: after.clone(),
        parabolic: blocks,
        cut,
        e_star,
        e_history: history,
        inner_adjustments: adjustments,
        class_nonzero: classes.iter().any(|c| !c.is_zero()),
        pi_denominator: new_n,
        classes,
        reduced_fiber: special,
        levi_exponents: a,
    };
    let next = ReductionState {
        cocycle: g_new,
        pi_denominator: new_n,
        generic_type: state.generic_type.clone(),
        special_type: after,
        step_count: state.step_count + 1,
    };
    Ok((next, trace))
}

/// The special fiber must be `[[D1, 0], [xbar D1, D2]]`.
fn check_step_postconditions(
    special: &LMatrix,
    cut: usize,
    a: &[i64],
    xbar: &[Vec<TLaurent>],
) -> Result<(), EngineError> {
    let n = a.len();
    let field = special.field();
    for i in 0..n {
        for j in 0..n {
            let x = special.get(i, j);
            let want = if i == j {
                TLaurent::t_power(field, 1, -a[i])
            } else if i >= cut && j < cut {
                xbar[i - cut][j].shift_t(-a[j])
            } else {
                TLaurent::zero(field, 1)
            };
            if !x.sub(&want).is_exact_zero() {
                return Err(EngineError::Postcondition(format!(
                    "special fiber entry ({}, {}) is not of block lower triangular Levi form",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Initial state: checks that the generic fiber is semistable and the input integral.
pub fn initial_state(g: &LoopCocycle, config: &EngineConfig) -> Result<ReductionState, EngineError> {
    let g = match g.base() {
        Base::Dvr => g.clone(),
        Base::ResidueField => g.as_dvr()?,
        Base::GenericField => return Err(BundleError::WrongBase(g.base().name()).into()),
    };
    let g = certify_exact(&g)?;
    let det = g.matrix().det_exact();
    match exact_monomial(&det) {
        Some((_, c)) if c.val_pi() == Some(Rational64::zero()) => {}
        _ => {
            return Err(EngineError::Unsupported(format!(
                "the reduction loop needs a determinant of the form c t^k with c a unit, got {}",
                det
            )))
        }
    }
    let t_prec = config.t_precision;
    let generic_type = birkhoff_matrix(g.matrix(), t_prec)?.splitting_type();
    if !generic_type.is_semistable() {
        return Err(EngineError::GenericUnstable(generic_type));
    }
    let special_type = birkhoff_matrix(g.special_fiber()?.matrix(), t_prec)?.splitting_type();
    Ok(ReductionState {
        pi_denominator: g.matrix().root_denominator(),
        cocycle: g,
        generic_type,
        special_type,
        step_count: 0,
    })
}

/// Runs [`langton_step`] until the special fiber is semistable.
pub fn semistable_reduce(
    g: &LoopCocycle,
    config: &EngineConfig,
) -> Result<(ReductionState, Vec<StepTrace>), EngineError> {
    let mut state = initial_state(g, config)?;
    let mut trace = Vec::new();
    while !state.special_type.is_semistable() {
        if trace.len() >= config.max_steps {
            return Err(EngineError::MaxSteps { trace });
        }
        let (next, step) = langton_step(&state, config)?;
        trace.push(step);
        state = next;
    }
    Ok((state, trace))
}

/// Upper bound on the number of steps: the length of the longest strictly descending
/// chain of polygons from `initial` down to `generic`.
pub fn step_bound(initial: &SplittingType, generic: &SplittingType) -> usize {
    polygons_between(generic, initial).len().saturating_sub(1)
}

/// The constant cocycle `diag(t^{-a_i})`: an extension of the split bundle of type `a`
/// whose special fiber is that same bundle.
pub fn extend_trivially(
    s: &SplittingType,
    field: GroundField,
    group: Group,
) -> Result<LoopCocycle, BundleError> {
    let neg: Vec<i64> = s.exponents().iter().map(|a| -a).collect();
    let m = LMatrix::diag_t_powers(field, 1, &neg);
    LoopCocycle::new(group, Base::Dvr, m, DEFAULT_T_PRECISION)
}
