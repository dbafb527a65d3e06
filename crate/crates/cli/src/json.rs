//! JSON encoding of reports and a plain-text table renderer.

use serde_json::{json, Value};

use frobsplit_core::arith::{parse_poly, FieldCtx, UniPoly, VarCtx};
use frobsplit_core::divisor::{PrimeLabel, QDivisor};
use frobsplit_core::{Error, Rational};

/// Always `num/den`, so integers print as `1/1`.
pub fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn divisor(d: &QDivisor) -> Value {
    Value::Array(
        d.terms()
            .map(|(label, c)| {
                json!({
                    "prime": label.poly().display(d.var()),
                    "coeff": rational(c),
                    "certified": label.certified(),
                })
            })
            .collect(),
    )
}

/// Parses the encoding produced by [`divisor`]; `coeff` may also be a bare
/// integer string and labels are made monic.
pub fn parse_divisor(
    text: &str,
    field: FieldCtx,
    var: &str,
) -> std::result::Result<QDivisor, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("divisor JSON: {e}"))?;
    let items = value.as_array().ok_or("divisor JSON must be an array")?;
    let vars = VarCtx::new(&[var]).map_err(|e| e.to_string())?;
    let mut terms = Vec::with_capacity(items.len());
    for item in items {
        let prime = item
            .get("prime")
            .and_then(Value::as_str)
            .ok_or("each divisor entry needs a string `prime`")?;
        let coeff = item
            .get("coeff")
            .and_then(Value::as_str)
            .ok_or("each divisor entry needs a string `coeff`")?;
        let coeff: Rational = coeff
            .parse()
            .map_err(|_| format!("`{coeff}` is not a rational number"))?;
        let poly = parse_poly(prime, &vars, field).map_err(|e| e.to_string())?;
        let uni = poly.to_univariate(0).expect("single variable context");
        let label = PrimeLabel::new(uni.monic()).map_err(|e| e.to_string())?;
        terms.push((label, coeff));
    }
    QDivisor::from_terms(field, var, terms).map_err(|e| e.to_string())
}

pub fn unipoly(u: &UniPoly, var: &str) -> Value {
    Value::String(u.display(var))
}

/// Short snake-case name of an error variant.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NotPrime(_) => "not_prime",
        Error::InvalidVarName(_) => "invalid_var_name",
        Error::DuplicateVar(_) => "duplicate_var",
        Error::EmptyVarCtx => "empty_var_ctx",
        Error::Syntax { .. } => "syntax",
        Error::UnknownVariable(_) => "unknown_variable",
        Error::ContextMismatch => "context_mismatch",
        Error::ExponentOverflow => "exponent_overflow",
        Error::QGuard { .. } => "q_guard",
        Error::NotPowerOfP { .. } => "not_power_of_p",
        Error::NotPthPower { .. } => "not_pth_power",
        Error::ArityMismatch { .. } => "arity_mismatch",
        Error::DegreeCap { .. } => "degree_cap",
        Error::ZeroPolynomial => "zero_polynomial",
        Error::ZeroIdeal => "zero_ideal",
        Error::NotInMaximalIdeal => "not_in_maximal_ideal",
        Error::DegenerateFiber(_) => "degenerate_fiber",
        Error::CharacteristicTwo => "characteristic_two",
        Error::NotWeierstrass(_) => "not_weierstrass",
        Error::DegenerateReduction { .. } => "degenerate_reduction",
        Error::GenericFiberNotSplit => "generic_fiber_not_split",
        Error::Inseparable => "inseparable",
        Error::WildRamification { .. } => "wild_ramification",
        Error::ConstantMap => "constant_map",
        Error::ZeroHBar => "zero_h_bar",
        Error::NotVariableCenter => "not_variable_center",
        Error::NotIrreducible(_) => "not_irreducible",
        Error::RationalOverflow => "rational_overflow",
        Error::Internal(_) => "internal",
    }
}

/// Errors caused by malformed input rather than by the mathematics.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotPrime(_)
            | Error::InvalidVarName(_)
            | Error::DuplicateVar(_)
            | Error::EmptyVarCtx
            | Error::Syntax { .. }
            | Error::UnknownVariable(_)
            | Error::ContextMismatch
            | Error::ExponentOverflow
            | Error::QGuard { .. }
            | Error::NotPowerOfP { .. }
            | Error::ArityMismatch { .. }
            | Error::NotIrreducible(_)
    )
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn table(rows: &[Value], out: &mut String) {
    let mut cols: Vec<String> = Vec::new();
    for row in rows {
        if let Value::Object(m) = row {
            for k in m.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    cols.sort();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            cols.iter()
                .map(|c| r.get(c).map_or("-".into(), scalar))
                .collect()
        })
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |vals: Vec<&str>| {
        vals.iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    out.push_str(&line(cols.iter().map(String::as_str).collect()));
    out.push('\n');
    for r in &cells {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
}

/// Scalars as `key: value` lines, arrays of objects as aligned tables.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let Value::Object(m) = v else {
        return scalar(v) + "\n";
    };
    let mut tables = Vec::new();
    for (k, val) in m {
        match val {
            Value::Array(items) if items.iter().any(Value::is_object) => tables.push((k, items)),
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar).collect();
                out.push_str(&format!("{k}: [{}]\n", joined.join(", ")));
            }
            Value::Object(_) => out.push_str(&format!("{k}: {val}\n")),
            _ => out.push_str(&format!("{k}: {}\n", scalar(val))),
        }
    }
    for (k, items) in tables {
        out.push_str(&format!("\n{k}:\n"));
        table(items, &mut out);
    }
    out
}
