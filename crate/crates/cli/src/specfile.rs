//! Problem spec files.
//!
//! ```json
//! {"A": ["1", "1"], "a": ["0", "0"], "B": ["1", "1"], "b": ["1/2", "1/2"],
//!  "sigma": "1", "precision_bits": 256, "order": 32}
//! ```
//!
//! Numbers are `"p/q"` or decimal strings (JSON numbers are accepted too).
//! Complex parameters are written `"1/2+3i"`, `"-0.25-1/3i"`, `"2i"`.
//! Any decimal switches the whole problem to float mode.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use gammaratio::numerics::{parse_real, GaussRational};

use crate::error::CliError;

pub const DEFAULT_PRECISION: u32 = 256;
pub const MIN_PRECISION: u32 = 64;
pub const DEFAULT_ORDER: usize = 32;
pub const PRECISION_ENV: &str = "GAMMARATIO_PRECISION";

/// A number as read, with a flag telling whether it was written as a decimal.
#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub value: GaussRational,
    pub decimal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub big_a: Vec<BigRational>,
    pub a: Vec<GaussRational>,
    pub big_b: Vec<BigRational>,
    pub b: Vec<GaussRational>,
    pub sigma: Option<GaussRational>,
    pub theta: Option<GaussRational>,
    pub precision_bits: Option<u32>,
    pub order: Option<usize>,
    pub float_mode: bool,
}

fn real(text: &str) -> Result<(BigRational, bool), CliError> {
    parse_real(text).map_err(|e| CliError::parse(format!("{e}")))
}

/// Index of the sign that separates real and imaginary parts, if any.
fn split_point(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    (1..bytes.len()).rev().find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
}

/// Parses `re`, `re+imi`, `re-imi` or `imi`.
pub fn parse_complex(text: &str) -> Result<Parsed, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CliError::parse("empty number".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        let (re, decimal) = real(&s)?;
        return Ok(Parsed { value: Complex::new(re, BigRational::zero()), decimal });
    };
    let (re_text, im_text) = match split_point(body) {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im_text = match im_text {
        "" | "+" => "1",
        "-" => "-1",
        t => t,
    };
    let (re, d1) = real(re_text)?;
    let (im, d2) = real(im_text.strip_prefix('+').unwrap_or(im_text))?;
    Ok(Parsed { value: Complex::new(re, im), decimal: d1 || d2 })
}

fn number(v: &Value, field: &str) -> Result<Parsed, CliError> {
    match v {
        Value::String(s) => parse_complex(s).map_err(|e| CliError::parse(format!("field `{field}`: {}", e.message))),
        Value::Number(n) => parse_complex(&n.to_string()),
        _ => Err(CliError::parse(format!("field `{field}`: expected a number string, got {v}"))),
    }
}

fn list(obj: &Map<String, Value>, field: &str) -> Result<Vec<Parsed>, CliError> {
    match obj.get(field) {
        Some(Value::Array(xs)) => xs.iter().map(|x| number(x, field)).collect(),
        Some(other) => Err(CliError::parse(format!("field `{field}`: expected an array, got {other}"))),
        None => Err(CliError::parse(format!("missing field `{field}`"))),
    }
}

fn scales(xs: Vec<Parsed>, field: &str) -> Result<(Vec<BigRational>, bool), CliError> {
    let mut decimal = false;
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        if !x.value.im.is_zero() || !x.value.re.is_positive() {
            return Err(CliError::spec(format!("`{field}` entries must be positive reals")));
        }
        decimal |= x.decimal;
        out.push(x.value.re);
    }
    Ok((out, decimal))
}

fn optional_number(obj: &Map<String, Value>, field: &str) -> Result<Option<Parsed>, CliError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => number(v, field).map(Some),
    }
}

fn optional_count(obj: &Map<String, Value>, field: &str) -> Result<Option<u64>, CliError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Number(n)) => n
            .as_u64()
            .map(Some)
            .ok_or_else(|| CliError::parse(format!("field `{field}`: expected a nonnegative integer"))),
        Some(other) => Err(CliError::parse(format!("field `{field}`: expected an integer, got {other}"))),
    }
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| CliError::parse(format!("malformed JSON at line {}, column {}: {}", e.line(), e.column(), e)))?;
        let Value::Object(obj) = doc else {
            return Err(CliError::parse("spec file must hold a JSON object".into()));
        };
        const KNOWN: [&str; 8] = ["A", "a", "B", "b", "sigma", "theta", "precision_bits", "order"];
        if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(CliError::parse(format!("unknown field `{k}`")));
        }
        let (big_a, da) = scales(list(&obj, "A")?, "A")?;
        let (big_b, db) = scales(list(&obj, "B")?, "B")?;
        let a = list(&obj, "a")?;
        let b = list(&obj, "b")?;
        if big_a.len() != a.len() {
            return Err(CliError::spec(format!("len(A) = {} but len(a) = {}", big_a.len(), a.len())));
        }
        if big_b.len() != b.len() {
            return Err(CliError::spec(format!("len(B) = {} but len(b) = {}", big_b.len(), b.len())));
        }
        let sigma = optional_number(&obj, "sigma")?;
        let theta = optional_number(&obj, "theta")?;
        let float_mode = da
            || db
            || a.iter().chain(&b).any(|x| x.decimal)
            || sigma.as_ref().is_some_and(|x| x.decimal)
            || theta.as_ref().is_some_and(|x| x.decimal);
        let precision_bits = optional_count(&obj, "precision_bits")?
            .map(|p| u32::try_from(p).ok().filter(|&p| p >= MIN_PRECISION).ok_or_else(|| CliError::spec(format!("precision_bits must be at least {MIN_PRECISION}"))))
            .transpose()?;
        let order = optional_count(&obj, "order")?.map(|n| n as usize);
        Ok(ProblemSpec {
            big_a,
            a: a.into_iter().map(|x| x.value).collect(),
            big_b,
            b: b.into_iter().map(|x| x.value).collect(),
            sigma: sigma.map(|x| x.value),
            theta: theta.map(|x| x.value),
            precision_bits,
            order,
            float_mode,
        })
    }
}

/// Precision in bits: command-line flag, then spec file, then environment, then default.
pub fn resolve_precision(flag: Option<u32>, file: Option<u32>) -> Result<u32, CliError> {
    if flag.is_some_and(|p| p < MIN_PRECISION) {
        return Err(CliError::parse(format!("--precision must be at least {MIN_PRECISION}")));
    }
    if let Some(p) = flag.or(file) {
        return Ok(p);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&p| p >= MIN_PRECISION)
            .ok_or_else(|| CliError::parse(format!("{PRECISION_ENV}={v:?} is not a precision of at least {MIN_PRECISION} bits"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}
