//! Deterministic serialization of grids, polynomials and verdict reports.
//!
//! JSON objects use sorted keys and exact coefficient strings, so a report
//! is byte-identical across runs with the same inputs, seed and version.

use crate::bipoly::BiPoly;
use crate::error::Error;
use crate::geometry::{
    nabla_alpha11_paper, nabla_alpha11_perp, split_sff, PpmcReport, TermRecord,
};
use crate::reduced::ReducedPoly;
use crate::scalar::{GaussianRational, Scalar};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Compact cell for tables: bare integer when possible, `num/den` otherwise.
/// The imaginary part of table values is always zero.
pub fn plain_cell(c: &GaussianRational) -> String {
    debug_assert!(c.im.is_integer() && c.im.numer() == &num_bigint::BigInt::from(0));
    if c.re.denom().is_one() {
        format!("{}", c.re.numer())
    } else {
        format!("{}/{}", c.re.numer(), c.re.denom())
    }
}

/// Nested arrays of coefficient strings, row-major: row index a, column b.
pub fn grid_json(p: &ReducedPoly) -> Value {
    let k = p.k();
    let rows: Vec<Value> = (0..=k)
        .map(|a| {
            let row: Vec<Value> = (0..=k)
                .map(|b| Value::String(p.coeff(a, b).to_string()))
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

/// Serializes a polynomial of the full model with its mode tag.
pub fn bipoly_json<S: Scalar>(p: &BiPoly<S>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|((mu, nu), c)| {
            let (re, im) = c.json_parts();
            json!({
                "mu": mu.exponents(),
                "nu": nu.exponents(),
                "re": re,
                "im": im,
            })
        })
        .collect();
    json!({
        "n": p.n(),
        "k": p.k(),
        "mode": S::MODE,
        "terms": terms,
    })
}

fn term_json(t: &TermRecord) -> Value {
    json!({
        "k": t.k,
        "a_k": rational_string(&t.coefficient),
        "alpha": grid_json(&t.alpha),
        "alpha11": grid_json(&t.alpha11),
        "nabla_paper": grid_json(&t.nabla_paper),
        "nabla_perp": grid_json(&t.nabla_perp),
        "residual_zero": t.residual_zero,
        "residual_norm_sq": rational_string(&t.residual_norm_sq),
    })
}

/// Canonical JSON form of a verdict report.
pub fn report_json(r: &PpmcReport) -> Value {
    json!({
        "spec": {
            "n": r.n,
            "terms": r.terms.iter().map(|t| json!({
                "k": t.k,
                "a_k": rational_string(&t.coefficient),
            })).collect::<Vec<_>>(),
        },
        "innerProduct": r.inner_product,
        "terms": r.terms.iter().map(term_json).collect::<Vec<_>>(),
        "verdict": r.verdict.as_str(),
        "version": r.version,
    })
}

/// Header of the per-k coefficient table.
pub const TABLE_HEADER: &str = "k,c11,c00,c20,nabla21,nabla10,residual_zero";

/// One table row: the coefficient families of the split second fundamental
/// form and of the derivative of its (1,1) part, plus the parallelism flag.
pub fn table_row(k: usize) -> Result<String, Error> {
    let split = split_sff(k)?;
    let paper = nabla_alpha11_paper(k)?;
    let residual_zero = nabla_alpha11_perp(k, 1)?.is_zero();
    let at = |p: &ReducedPoly, a: usize, b: usize| {
        if a <= p.k() && b <= p.k() {
            plain_cell(p.coeff(a, b))
        } else {
            "0".to_string()
        }
    };
    Ok(format!(
        "{},{},{},{},{},{},{}",
        k,
        at(&split.alpha11, 1, 1),
        at(&split.alpha11, 0, 0),
        at(&split.alpha, 2, 0),
        at(&paper, 2, 1),
        at(&paper, 1, 0),
        residual_zero
    ))
}

/// The full CSV table for a k range, header included.
pub fn table_csv(k_min: usize, k_max: usize) -> Result<String, Error> {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for k in k_min..=k_max {
        out.push_str(&table_row(k)?);
        out.push('\n');
    }
    Ok(out)
}

/// CSV projection of a verdict report, one row per summand with the grids
/// reduced to their table coefficients.
pub fn report_csv(r: &PpmcReport) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for t in &r.terms {
        let at = |p: &ReducedPoly, a: usize, b: usize| {
            if a <= p.k() && b <= p.k() {
                plain_cell(p.coeff(a, b))
            } else {
                "0".to_string()
            }
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            t.k,
            at(&t.alpha11, 1, 1),
            at(&t.alpha11, 0, 0),
            at(&t.alpha, 2, 0),
            at(&t.nabla_paper, 2, 1),
            at(&t.nabla_paper, 1, 0),
            t.residual_zero
        ));
    }
    out
}
