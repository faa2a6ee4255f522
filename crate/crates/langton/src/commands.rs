//! Subcommands as functions from arguments to a JSON value and an exit code.

use std::path::Path;

use langton_core::bundles::{
    birkhoff_matrix, canonical_parabolic, Base, Group, LoopCocycle, SplittingType,
};
use langton_core::deformation::{
    build_levi_family, check_fibers, default_s_values, first_order_class, match_classes,
    DeformationError,
};
use langton_core::engine::{semistable_reduce, step_bound, EngineConfig, EngineError, StepTrace};
use langton_core::rootdata::{
    build_root_system, central_weight, char_bound, maximal_parabolic, GroupForm, RootSystem,
};
use langton_core::{AlgebraError, BundleError, GroundField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::document::{
    coeff_json, cocycle_document, matrix_document, parse_document, rational_json, Document,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BAD_ARGS: i32 = 2;
pub const EXIT_BAD_COCYCLE: i32 = 3;
pub const EXIT_HYPOTHESIS: i32 = 4;
pub const EXIT_PRECISION: i32 = 5;

pub const DEFAULT_T_PRECISION: i64 = 32;

/// What a command prints on stdout and the status it exits with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome {
            json,
            code: EXIT_OK,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmdError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    /// Extra fields for the JSON error object.
    pub detail: Map<String, Value>,
}

impl CmdError {
    pub fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        CmdError {
            code,
            kind,
            message: message.into(),
            detail: Map::new(),
        }
    }

    fn with(mut self, key: &str, v: Value) -> Self {
        self.detail.insert(key.into(), v);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut obj = self.detail.clone();
        obj.insert("error".into(), json!(self.kind));
        obj.insert("message".into(), json!(self.message));
        obj.insert("exit_code".into(), json!(self.code));
        Value::Object(obj)
    }
}

fn precision_error(message: String, t_prec: i64) -> CmdError {
    CmdError::new(
        EXIT_PRECISION,
        "precision_exhausted",
        format!(
            "{}; rerun with a larger --t-precision (current T = {})",
            message, t_prec
        ),
    )
}

fn bundle_error(e: &BundleError, t_prec: i64) -> CmdError {
    if e.is_precision_exhausted() {
        return precision_error(e.to_string(), t_prec);
    }
    match e {
        BundleError::NonIntegralEntry { row, col, .. } => {
            CmdError::new(EXIT_BAD_COCYCLE, "bad_cocycle", e.to_string())
                .with("path", json!(format!("entries[{}][{}]", row, col)))
        }
        BundleError::Certificate(_) | BundleError::NotCoboundary { .. } => {
            CmdError::new(EXIT_FAILURE, "internal", e.to_string())
        }
        BundleError::Algebra(AlgebraError::PrecisionExhausted { .. }) => unreachable!(),
        _ => CmdError::new(EXIT_BAD_COCYCLE, "bad_cocycle", e.to_string()),
    }
}

fn engine_error(e: &EngineError, t_prec: i64) -> CmdError {
    match e {
        EngineError::Bundle(b) => bundle_error(b, t_prec),
        EngineError::GenericUnstable(ty) => CmdError::new(
            EXIT_HYPOTHESIS,
            "generic_unstable",
            format!("generic fiber is not semistable: Harder-Narasimhan type {}", ty),
        )
        .with("generic", json!(ty.exponents())),
        EngineError::Unsupported(_) => CmdError::new(EXIT_BAD_COCYCLE, "unsupported", e.to_string()),
        EngineError::RootData(_) => CmdError::new(EXIT_BAD_ARGS, "bad_arguments", e.to_string()),
        _ => CmdError::new(EXIT_FAILURE, "engine", e.to_string()),
    }
}

/// Reads and parses a cocycle document.
pub fn load_document(path: &Path, t_precision: Option<i64>) -> Result<Document, CmdError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CmdError::new(
            EXIT_BAD_ARGS,
            "bad_arguments",
            format!("cannot read {}: {}", path.display(), e),
        )
    })?;
    parse_text(&text, t_precision)
}

pub fn parse_text(text: &str, t_precision: Option<i64>) -> Result<Document, CmdError> {
    let v: Value = serde_json::from_str(text).map_err(|e| {
        CmdError::new(
            EXIT_BAD_COCYCLE,
            "bad_cocycle",
            format!("invalid JSON at line {}, column {}: {}", e.line(), e.column(), e),
        )
    })?;
    parse_document(&v, t_precision).map_err(|e| {
        CmdError::new(EXIT_BAD_COCYCLE, "bad_cocycle", e.to_string()).with("path", json!(e.path))
    })
}

fn working_precision(doc: &Document) -> i64 {
    doc.t_precision.unwrap_or(DEFAULT_T_PRECISION)
}

fn cocycle(doc: &Document) -> Result<LoopCocycle, CmdError> {
    let t = working_precision(doc);
    doc.cocycle(t).map_err(|e| bundle_error(&e, t))
}

fn type_json(s: &SplittingType) -> Value {
    json!(s.exponents())
}

// ---------------------------------------------------------------- rootdata

fn parse_type(ty: &str, rank: Option<usize>) -> Result<(char, usize), CmdError> {
    let bad = |m: String| CmdError::new(EXIT_BAD_ARGS, "bad_arguments", m);
    let mut chars = ty.trim().chars();
    let label = chars
        .next()
        .filter(char::is_ascii_alphabetic)
        .ok_or_else(|| bad(format!("invalid type {:?}", ty)))?
        .to_ascii_uppercase();
    let digits: String = chars.collect();
    let digits = digits.trim_start_matches('_');
    let from_label = if digits.is_empty() {
        None
    } else {
        Some(
            digits
                .parse::<usize>()
                .map_err(|_| bad(format!("invalid type {:?}", ty)))?,
        )
    };
    match (from_label, rank) {
        (Some(a), Some(b)) if a != b => Err(bad(format!(
            "type {} conflicts with --rank {}",
            ty, b
        ))),
        (Some(r), _) | (None, Some(r)) => Ok((label, r)),
        (None, None) => Err(bad(format!("type {} needs --rank", ty))),
    }
}

pub fn parse_form(s: &str) -> Option<GroupForm> {
    match s.to_ascii_lowercase().as_str() {
        "adjoint" | "ad" => Some(GroupForm::Adjoint),
        "sc" | "simply-connected" | "simply_connected" => Some(GroupForm::SimplyConnected),
        "sl" => Some(GroupForm::SL),
        "gl" => Some(GroupForm::GL),
        _ => None,
    }
}

fn form_name(f: GroupForm) -> &'static str {
    match f {
        GroupForm::Adjoint => "adjoint",
        GroupForm::SimplyConnected => "sc",
        GroupForm::SL => "sl",
        GroupForm::GL => "gl",
    }
}

fn parabolic_json(rs: &RootSystem, beta: usize, form: GroupForm) -> Result<Value, CmdError> {
    let rd = |e: langton_core::RootDataError| {
        CmdError::new(EXIT_BAD_ARGS, "bad_arguments", e.to_string())
    };
    let pd = maximal_parabolic(rs, beta).map_err(rd)?;
    let cw = central_weight(&pd, form).map_err(rd)?;
    let levels: Vec<Value> = (1..=pd.length()).map(|i| json!(pd.level(i))).collect();
    Ok(json!({
        "beta": beta + 1,
        "levi": pd.levi_simple_roots().iter().map(|i| i + 1).collect::<Vec<_>>(),
        "h": pd.length(),
        "levels": levels,
        "level_weights": cw.level_weights,
        "m": cw.kernel_order,
        "required_N": cw.required_n,
    }))
}

/// Root system data; `beta` is 1-based.
pub fn cmd_rootdata(
    ty: &str,
    rank: Option<usize>,
    beta: Option<usize>,
    form: Option<&str>,
) -> Result<Outcome, CmdError> {
    let bad = |m: String| CmdError::new(EXIT_BAD_ARGS, "bad_arguments", m);
    let (label, rank) = parse_type(ty, rank)?;
    let rs = build_root_system(label, rank).map_err(|e| bad(e.to_string()))?;
    let bound = char_bound(label, rank).map_err(|e| bad(e.to_string()))?;
    let form = match form {
        Some(f) => parse_form(f).ok_or_else(|| bad(format!("unknown group form {:?}", f)))?,
        None if rs.is_type_a() => GroupForm::SL,
        None => GroupForm::SimplyConnected,
    };
    let parabolics = (0..rank)
        .map(|b| parabolic_json(&rs, b, form))
        .collect::<Result<Vec<_>, _>>()?;
    let max_h = parabolics
        .iter()
        .map(|p| p["h"].as_u64().unwrap())
        .max()
        .unwrap_or(0);
    let mut out = json!({
        "label": format!("{}{}", label, rank),
        "rank": rank,
        "form": form_name(form),
        "cartan": rs.cartan(),
        "positive_roots": rs.positive_roots(),
        "num_roots": 2 * rs.positive_roots().len(),
        "highest_root": rs.highest_root(),
        "char_bound": bound.to_string(),
        "max_h": max_h,
        "parabolics": parabolics,
    });
    if let Some(b) = beta {
        if b == 0 || b > rank {
            return Err(bad(format!("--beta must lie in 1..={}", rank)));
        }
        let p = parabolic_json(&rs, b - 1, form)?;
        let obj = out.as_object_mut().unwrap();
        for (k, v) in p.as_object().unwrap() {
            obj.insert(k.clone(), v.clone());
        }
    }
    Ok(Outcome::ok(out))
}

// ---------------------------------------------------------------- hn

/// Generic and special splitting types of a document.
pub fn cmd_hn(doc: &Document) -> Result<Outcome, CmdError> {
    let g = cocycle(doc)?;
    let t = working_precision(doc);
    let ty = |m: &LoopCocycle| {
        birkhoff_matrix(m.matrix(), t)
            .map(|f| f.splitting_type())
            .map_err(|e| bundle_error(&e, t))
    };
    let generic = ty(&g)?;
    let special = match g.base() {
        Base::GenericField => None,
        Base::ResidueField => Some(generic.clone()),
        Base::Dvr => Some(ty(&g.special_fiber().map_err(|e| bundle_error(&e, t))?)?),
    };
    let blocks = canonical_parabolic(special.as_ref().unwrap_or(&generic));
    Ok(Outcome::ok(json!({
        "generic": type_json(&generic),
        "special": special.as_ref().map(type_json),
        "canonical_blocks": blocks.block_sizes,
        "semistable": {
            "generic": generic.is_semistable(),
            "special": special.as_ref().map(SplittingType::is_semistable),
        },
    })))
}

// ---------------------------------------------------------------- factor

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fiber {
    Special,
    Generic,
}

/// Birkhoff factorization `A M B = D` of one fiber.
pub fn cmd_factor(doc: &Document, fiber: Option<Fiber>) -> Result<Outcome, CmdError> {
    let g = cocycle(doc)?;
    let t = working_precision(doc);
    let (m, base, name) = match (g.base(), fiber) {
        (Base::Dvr, Some(Fiber::Special) | None) => (
            g.special_fiber().map_err(|e| bundle_error(&e, t))?,
            Base::ResidueField,
            "special",
        ),
        (Base::Dvr, Some(Fiber::Generic)) => (g.generic_fiber(), Base::GenericField, "generic"),
        (Base::ResidueField, Some(Fiber::Generic)) | (Base::GenericField, Some(Fiber::Special)) => {
            return Err(CmdError::new(
                EXIT_BAD_ARGS,
                "bad_arguments",
                format!("a {} document has no {} fiber", g.base().name(), name_of(fiber)),
            ))
        }
        (b, _) => (g.clone(), b, name_of_base(b)),
    };
    let f = birkhoff_matrix(m.matrix(), t).map_err(|e| bundle_error(&e, t))?;
    Ok(Outcome::ok(json!({
        "fiber": name,
        "A": matrix_document(&f.a, Group::GL, base),
        "D": matrix_document(&f.d(), Group::GL, base),
        "B": matrix_document(&f.b, Group::GL, base),
        "d": f.d_exponents,
        "splitting_type": type_json(&f.splitting_type()),
        "certified_precision": f.certified_precision,
    })))
}

fn name_of(f: Option<Fiber>) -> &'static str {
    match f {
        Some(Fiber::Generic) => "generic",
        _ => "special",
    }
}

fn name_of_base(b: Base) -> &'static str {
    match b {
        Base::GenericField => "generic",
        _ => "special",
    }
}

// ---------------------------------------------------------------- reduce

fn engine_config(doc: &Document, max_steps: usize) -> EngineConfig {
    EngineConfig {
        max_steps,
        t_precision: working_precision(doc),
        ..EngineConfig::default()
    }
}

pub fn step_json(s: &StepTrace) -> Value {
    json!({
        "before": type_json(&s.before_type),
        "after": type_json(&s.after_type),
        "blocks": s.parabolic.block_sizes,
        "cut": s.cut,
        "levi": s.levi_exponents,
        "e_star": rational_json(s.e_star),
        "e_history": s.e_history.iter().map(|e| rational_json(*e)).collect::<Vec<_>>(),
        "inner_adjustments": s.inner_adjustments,
        "N": s.pi_denominator,
        "class_nonzero": s.class_nonzero,
        "classes": s.classes.iter().map(|c| json!({
            "twist": c.twist,
            "coords": c.coords.iter().map(coeff_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "reduced_fiber": cocycle_document(&s.reduced_fiber),
    })
}

/// Runs semistable reduction; the outcome is the trace document.
pub fn cmd_reduce(doc: &Document, max_steps: usize) -> Result<Outcome, CmdError> {
    let g = cocycle(doc)?;
    let config = engine_config(doc, max_steps);
    let t = config.t_precision;
    match semistable_reduce(&g, &config) {
        Ok((state, trace)) => {
            let initial = trace
                .first()
                .map(|s| s.before_type.clone())
                .unwrap_or_else(|| state.special_type.clone());
            Ok(Outcome::ok(json!({
                "initial": type_json(&initial),
                "generic": type_json(&state.generic_type),
                "final": type_json(&state.special_type),
                "semistable": state.special_type.is_semistable(),
                "step_bound": step_bound(&initial, &state.generic_type),
                "N": state.pi_denominator,
                "steps": trace.iter().map(step_json).collect::<Vec<_>>(),
                "cocycle": cocycle_document(&state.cocycle),
            })))
        }
        Err(EngineError::MaxSteps { trace }) => {
            let last = trace.last().map(|s| type_json(&s.after_type));
            Ok(Outcome {
                json: json!({
                    "final": last,
                    "semistable": false,
                    "steps": trace.iter().map(step_json).collect::<Vec<_>>(),
                }),
                code: EXIT_FAILURE,
            })
        }
        Err(e) => Err(engine_error(&e, t)),
    }
}

// ---------------------------------------------------------------- check-deformation

/// A random `s` outside `{0, 1, 2, 3}` in the ground field.
pub fn random_s(field: GroundField, seed: u64) -> i64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match field {
        GroundField::Rationals => rng.gen_range(4..1_000_000),
        GroundField::Prime(p) if p > 4 => rng.gen_range(4..p as i64),
        GroundField::Prime(p) => rng.gen_range(1..p as i64),
    }
}

/// Checks the Levi degeneration of one step's reduced special fiber.
pub fn deformation_report(
    step: &StepTrace,
    s_extra: i64,
    t_prec: i64,
) -> Result<(Value, bool), DeformationError> {
    let field = step.reduced_fiber.field();
    let family = build_levi_family(
        &step.reduced_fiber,
        step.cut,
        &default_s_values(field, s_extra),
    )?;
    let report = check_fibers(&family, t_prec)?;
    let classes = first_order_class(&family)?;
    let class_nonzero = classes.iter().any(|c| !c.is_zero());
    let (matches, scalar) = match match_classes(&classes, &step.classes) {
        Ok(l) => (true, l),
        Err(DeformationError::ClassMismatch { .. }) => (false, None),
        Err(e) => return Err(e),
    };
    let ok = matches && report.degeneration_dominates && class_nonzero == step.class_nonzero;
    Ok((
        json!({
            "fibers": report.fibers.iter().map(|(s, ty)| json!({
                "s": coeff_json(s),
                "type": type_json(ty),
            })).collect::<Vec<_>>(),
            "source_type": type_json(&report.source_type),
            "levi_type": type_json(&report.levi_type),
            "class_nonzero": class_nonzero,
            "matches_engine": matches,
            "scalar": scalar.as_ref().map(coeff_json),
        }),
        ok,
    ))
}

/// Runs the reduction and checks the Levi degeneration at step `step` (1-based).
pub fn cmd_check_deformation(
    doc: &Document,
    max_steps: usize,
    step: usize,
    seed: u64,
) -> Result<Outcome, CmdError> {
    let g = cocycle(doc)?;
    let config = engine_config(doc, max_steps);
    let t = config.t_precision;
    let (_, trace) = semistable_reduce(&g, &config).map_err(|e| engine_error(&e, t))?;
    if trace.is_empty() {
        return Err(CmdError::new(
            EXIT_HYPOTHESIS,
            "nothing_to_check",
            "special fiber is already semistable; no modification step to check",
        ));
    }
    let Some(s) = step.checked_sub(1).and_then(|k| trace.get(k)) else {
        return Err(CmdError::new(
            EXIT_BAD_ARGS,
            "bad_arguments",
            format!("--step must lie in 1..={}", trace.len()),
        ));
    };
    let extra = random_s(g.field(), seed);
    match deformation_report(s, extra, t) {
        Ok((mut v, ok)) => {
            v["step"] = json!(step);
            Ok(Outcome {
                json: v,
                code: if ok { EXIT_OK } else { EXIT_FAILURE },
            })
        }
        Err(DeformationError::Bundle(b)) => Err(bundle_error(&b, t)),
        Err(e) => Err(CmdError::new(EXIT_FAILURE, "deformation", e.to_string())),
    }
}
