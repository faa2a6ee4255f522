//! Cocycle documents: the JSON exchange format for loop cocycles.
//!
//! A document is
//!
//! ```json
//! { "field": "Q", "group": "SL", "base": "dvr", "rank": 2, "pi_denominator": 1,
//!   "t_precision": 32, "entries": [[[{"c": "1", "t": 1, "pi": "0"}], ...], ...] }
//! ```
//!
//! An entry is a list of terms `c * t^t * pi^pi`, summed and truncated at `O(t^T)`.
//! Entries whose coefficients are not polynomial in `pi^{1/N}` use the object form
//! `{"num": [terms], "den": [terms], "prec": p}`, meaning `num / den + O(t^p)`; `den`
//! may not involve `t`, `prec` defaults to the document's `T` and `null` means exact.

use std::fmt;

use langton_core::bundles::{Base, Group, LoopCocycle};
use langton_core::poly::Poly;
use langton_core::{BundleError, Coeff, GroundField, LMatrix, PuiseuxScalar, TLaurent};
use num_rational::{BigRational, Rational64};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(path: &str, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        path: path.to_string(),
        message: message.into(),
    })
}

/// A parsed document before cocycle validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub field: GroundField,
    pub group: Group,
    pub base: Base,
    pub pi_denominator: u32,
    /// `None`: entries are exact.
    pub t_precision: Option<i64>,
    pub matrix: LMatrix,
}

impl Document {
    /// Validates the matrix as a cocycle; `series_prec` bounds the determinant check.
    pub fn cocycle(&self, series_prec: i64) -> Result<LoopCocycle, BundleError> {
        LoopCocycle::new(self.group, self.base, self.matrix.clone(), series_prec)
    }
}

pub fn parse_field(s: &str) -> Option<GroundField> {
    let s = s.trim();
    if matches!(s, "Q" | "QQ" | "rationals") {
        return Some(GroundField::Rationals);
    }
    let p = s
        .strip_prefix("F_")
        .or_else(|| s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
        .or_else(|| s.strip_prefix('F'))?;
    GroundField::prime(p.parse().ok()?)
}

pub fn field_name(f: GroundField) -> String {
    f.to_string()
}

pub fn group_name(g: Group) -> &'static str {
    match g {
        Group::SL => "SL",
        Group::GL => "GL",
    }
}

pub fn base_name(b: Base) -> &'static str {
    match b {
        Base::ResidueField => "residue",
        Base::Dvr => "dvr",
        Base::GenericField => "generic",
    }
}

fn parse_base(s: &str) -> Option<Base> {
    match s {
        "residue" => Some(Base::ResidueField),
        "dvr" => Some(Base::Dvr),
        "generic" => Some(Base::GenericField),
        _ => None,
    }
}

fn parse_rational64(v: &Value, path: &str) -> Result<Rational64, ParseError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational64::from_integer(i)),
            None => err(path, "expected an integer or a \"p/q\" string"),
        },
        Value::String(s) => s
            .trim()
            .parse::<Rational64>()
            .or_else(|_| err(path, format!("cannot read {:?} as a rational number", s))),
        _ => err(path, "expected an integer or a \"p/q\" string"),
    }
}

fn parse_coeff(v: &Value, field: GroundField, path: &str) -> Result<Coeff, ParseError> {
    let q: BigRational = match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => BigRational::from_integer(i.into()),
            None => return err(path, "coefficients must be integers or \"p/q\" strings"),
        },
        Value::String(s) => match s.trim().parse::<BigRational>() {
            Ok(q) => q,
            Err(_) => return err(path, format!("cannot read {:?} as a rational number", s)),
        },
        _ => return err(path, "coefficients must be integers or \"p/q\" strings"),
    };
    match field.from_rational(&q) {
        Some(c) => Ok(c),
        None => err(path, format!("denominator of {} vanishes in {}", q, field)),
    }
}

fn parse_i64(v: &Value, path: &str) -> Result<i64, ParseError> {
    match v.as_i64() {
        Some(i) => Ok(i),
        None => err(path, "expected an integer"),
    }
}

fn parse_term(
    v: &Value,
    field: GroundField,
    path: &str,
) -> Result<(i64, PuiseuxScalar), ParseError> {
    let Value::Object(obj) = v else {
        return err(path, "a term is an object {\"c\", \"t\", \"pi\"}");
    };
    if let Some(k) = obj.keys().find(|k| !matches!(k.as_str(), "c" | "t" | "pi")) {
        return err(path, format!("unknown key {:?} in term", k));
    }
    let c = match obj.get("c") {
        Some(c) => parse_coeff(c, field, &format!("{}.c", path))?,
        None => return err(path, "term is missing \"c\""),
    };
    let t = match obj.get("t") {
        Some(t) => parse_i64(t, &format!("{}.t", path))?,
        None => 0,
    };
    let pi = match obj.get("pi") {
        Some(p) => parse_rational64(p, &format!("{}.pi", path))?,
        None => Rational64::from_integer(0),
    };
    Ok((t, PuiseuxScalar::pi_power(c, pi)))
}

fn parse_terms(
    v: &Value,
    field: GroundField,
    n: u32,
    prec: Option<i64>,
    path: &str,
) -> Result<TLaurent, ParseError> {
    let Value::Array(items) = v else {
        return err(path, "expected a list of terms");
    };
    let terms = items
        .iter()
        .enumerate()
        .map(|(k, t)| parse_term(t, field, &format!("{}[{}]", path, k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TLaurent::from_terms(field, n, terms, prec))
}

fn parse_entry(
    v: &Value,
    field: GroundField,
    n: u32,
    doc_prec: Option<i64>,
    path: &str,
) -> Result<TLaurent, ParseError> {
    let Value::Object(obj) = v else {
        return parse_terms(v, field, n, doc_prec, path);
    };
    if let Some(k) = obj.keys().find(|k| !matches!(k.as_str(), "num" | "den" | "prec")) {
        return err(path, format!("unknown key {:?} in entry", k));
    }
    let prec = match obj.get("prec") {
        None => doc_prec,
        Some(Value::Null) => None,
        Some(p) => {
            let p = parse_i64(p, &format!("{}.prec", path))?;
            Some(doc_prec.map_or(p, |d| d.min(p)))
        }
    };
    let num = match obj.get("num") {
        Some(v) => parse_terms(v, field, n, prec, &format!("{}.num", path))?,
        None => return err(path, "entry object is missing \"num\""),
    };
    let Some(den) = obj.get("den") else {
        return Ok(num);
    };
    let den_path = format!("{}.den", path);
    let den = parse_terms(den, field, n, None, &den_path)?;
    if den.terms().any(|(e, _)| e != 0) {
        return err(&den_path, "a denominator may not involve t");
    }
    let d = den.coeff(0);
    match d.inv() {
        Some(inv) => Ok(num.scale(&inv)),
        None => err(&den_path, "denominator is zero"),
    }
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, ParseError> {
    match obj.get(key) {
        Some(v) => Ok(v),
        None => err("", format!("missing field {:?}", key)),
    }
}

/// Parses a document; `t_precision_override` replaces the document's `T`.
pub fn parse_document(v: &Value, t_precision_override: Option<i64>) -> Result<Document, ParseError> {
    let Value::Object(obj) = v else {
        return err("", "a cocycle document is a JSON object");
    };
    let known = [
        "field",
        "group",
        "base",
        "rank",
        "pi_denominator",
        "t_precision",
        "entries",
    ];
    if let Some(k) = obj.keys().find(|k| !known.contains(&k.as_str())) {
        return err(k, "unknown field");
    }
    let field = match get(obj, "field")?.as_str().and_then(parse_field) {
        Some(f) => f,
        None => return err("field", "expected \"Q\" or \"F_p\" with p prime"),
    };
    let group = match get(obj, "group")?.as_str() {
        Some("SL") => Group::SL,
        Some("GL") => Group::GL,
        _ => return err("group", "expected \"SL\" or \"GL\""),
    };
    let base = match obj.get("base") {
        None => Base::Dvr,
        Some(b) => match b.as_str().and_then(parse_base) {
            Some(b) => b,
            None => return err("base", "expected \"dvr\", \"residue\" or \"generic\""),
        },
    };
    let rank = match get(obj, "rank")?.as_u64() {
        Some(r) if r >= 1 => r as usize,
        _ => return err("rank", "expected a positive integer"),
    };
    let pi_denominator = match obj.get("pi_denominator") {
        None => 1,
        Some(v) => match v.as_u64() {
            Some(n) if (1..=u32::MAX as u64).contains(&n) => n as u32,
            _ => return err("pi_denominator", "expected a positive integer"),
        },
    };
    let doc_prec = match obj.get("t_precision") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_i64(v, "t_precision")?),
    };
    let t_precision = t_precision_override.or(doc_prec);
    let Value::Array(rows) = get(obj, "entries")? else {
        return err("entries", "expected a list of rows");
    };
    if rows.len() != rank {
        return err(
            "entries",
            format!("expected {} rows, found {}", rank, rows.len()),
        );
    }
    let mut out_rows = Vec::with_capacity(rank);
    for (i, row) in rows.iter().enumerate() {
        let path = format!("entries[{}]", i);
        let Value::Array(cells) = row else {
            return err(&path, "expected a list of entries");
        };
        if cells.len() != rank {
            return err(
                &path,
                format!("expected {} entries, found {}", rank, cells.len()),
            );
        }
        let mut out = Vec::with_capacity(rank);
        for (j, cell) in cells.iter().enumerate() {
            out.push(parse_entry(
                cell,
                field,
                pi_denominator,
                t_precision,
                &format!("entries[{}][{}]", i, j),
            )?);
        }
        out_rows.push(out);
    }
    let n = out_rows
        .iter()
        .flatten()
        .fold(pi_denominator, |acc, x| lcm(acc, x.root_denominator()));
    let out_rows = out_rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.with_root_denominator(n)).collect())
        .collect();
    Ok(Document {
        field,
        group,
        base,
        pi_denominator: n,
        t_precision,
        matrix: LMatrix::from_rows(field, out_rows),
    })
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

pub fn coeff_json(c: &Coeff) -> Value {
    match c {
        Coeff::Q(_) => Value::String(c.to_literal()),
        Coeff::Fp(v, _) => json!(v),
    }
}

pub fn rational_json(q: Rational64) -> Value {
    Value::String(q.to_string())
}

fn term_json(c: &Coeff, t: i64, pi: Rational64) -> (i64, Rational64, Value) {
    (t, pi, json!({"c": coeff_json(c), "t": t, "pi": rational_json(pi)}))
}

/// Terms of `sum_t t^e u^shift num(u)`, sorted by `(t, pi)`.
fn poly_terms(parts: &[(i64, i64, Poly)], n: u32) -> Value {
    let mut out = Vec::new();
    for (e, shift, p) in parts {
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.push(term_json(c, *e, Rational64::new(shift + k as i64, n as i64)));
            }
        }
    }
    out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    Value::Array(out.into_iter().map(|(_, _, v)| v).collect())
}

fn poly_lcm(a: &Poly, b: &Poly) -> Poly {
    a.mul(b).div_exact(&a.gcd(b))
}

/// One matrix entry; the list form when the coefficients are polynomial in
/// `pi^{1/N}` and the precision is the document's.
pub fn entry_json(x: &TLaurent, doc_prec: Option<i64>) -> Value {
    let n = x.root_denominator();
    let field = x.field();
    let one = Poly::constant(field.one());
    let den = x
        .terms()
        .fold(one.clone(), |acc, (_, c)| poly_lcm(&acc, c.denominator()));
    // normalize to den(0) = 1
    let den = match den.constant_term().and_then(Coeff::inv) {
        Some(inv) => den.scale(&inv),
        None => den,
    };
    let parts: Vec<(i64, i64, Poly)> = x
        .terms()
        .map(|(e, c)| {
            let scaled = c.numerator().mul(&den.div_exact(c.denominator()));
            (e, c.shift(), scaled)
        })
        .collect();
    let num = poly_terms(&parts, n);
    let plain = den.is_constant();
    if plain && x.precision() == doc_prec {
        return num;
    }
    let mut obj = Map::new();
    obj.insert("num".into(), num);
    if !plain {
        obj.insert("den".into(), poly_terms(&[(0, 0, den)], n));
    }
    if x.precision() != doc_prec {
        obj.insert("prec".into(), json!(x.precision()));
    }
    Value::Object(obj)
}

pub fn matrix_json(m: &LMatrix, doc_prec: Option<i64>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| entry_json(m.get(i, j), doc_prec))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Document for a matrix; `T` is the least entry precision, or `null` when exact.
pub fn matrix_document(m: &LMatrix, group: Group, base: Base) -> Value {
    let t_precision = m.precision();
    json!({
        "field": field_name(m.field()),
        "group": group_name(group),
        "base": base_name(base),
        "rank": m.rows(),
        "pi_denominator": m.root_denominator(),
        "t_precision": t_precision,
        "entries": matrix_json(m, t_precision),
    })
}

pub fn cocycle_document(g: &LoopCocycle) -> Value {
    matrix_document(g.matrix(), g.group(), g.base())
}
