//! LP-format output for model IRs.
//!
//! The writer emits the classic sections `Minimize`, `Subject To`,
//! `Bounds`, `Binaries`, `End`, one row per line, and is byte-deterministic
//! for a given model. LP files carry decimal literals only, so every row
//! (and the objective) whose exact rational coefficients are not all
//! integral is scaled by the least common multiple of its denominators;
//! row scaling never changes the feasible set, and an objective scaled by
//! `D` is flagged with a leading `\ objective scaled by D` comment so a
//! reported optimum can be divided back. Fixed variables are written as
//! equal bounds (`name = value`).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::fmt::Write as _;

use crate::model::{is_finite_decimal, ModelError, ModelIr, VarId, VarKind};

/// Render `model` as an LP-format string.
///
/// Errors only when a fixing or bound value cannot be written as a finite
/// decimal (bounds, unlike rows, cannot be rescaled).
pub fn write_lp(model: &ModelIr) -> Result<String, ModelError> {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}", model.name);
    for note in &model.notes {
        let _ = writeln!(out, "\\ note: {}", note);
    }

    let obj_scale = common_denominator(
        model
            .objective
            .terms
            .iter()
            .map(|(_, c)| c)
            .chain(std::iter::once(&model.objective.constant)),
    );
    if !obj_scale.is_one() {
        let _ = writeln!(out, "\\ objective scaled by {}", obj_scale);
    }
    out.push_str("Minimize\n");
    let scale_rat = BigRational::from_integer(obj_scale);
    let mut line = String::from(" obj:");
    let mut first = true;
    for (id, coef) in &model.objective.terms {
        push_term(&mut line, coef * &scale_rat, &model.var(*id).name, first);
        first = false;
    }
    let constant = &model.objective.constant * &scale_rat;
    if !constant.is_zero() || first {
        push_term(&mut line, constant, "", first);
    }
    out.push_str(&line);
    out.push('\n');

    out.push_str("Subject To\n");
    for c in &model.constraints {
        let scale = BigRational::from_integer(common_denominator(
            c.terms.iter().map(|(_, c)| c).chain(std::iter::once(&c.rhs)),
        ));
        let mut line = format!(" {}:", c.name);
        let mut first = true;
        for (id, coef) in &c.terms {
            push_term(&mut line, coef * &scale, &model.var(*id).name, first);
            first = false;
        }
        if first {
            line.push_str(" 0");
        }
        let rhs = &c.rhs * &scale;
        let _ = write!(line, " {} {}", c.sense, rhs.numer());
        out.push_str(&line);
        out.push('\n');
    }

    let mut fixed: Vec<Option<&BigRational>> = vec![None; model.vars.len()];
    for (id, value) in &model.fixings {
        fixed[id.0] = Some(value);
    }
    let mut bounds_lines: Vec<String> = Vec::new();
    for (i, var) in model.vars.iter().enumerate() {
        if let Some(value) = fixed[i] {
            bounds_lines.push(format!(
                " {} = {}",
                var.name,
                decimal_literal(value).ok_or_else(|| ModelError::NonDecimalBound {
                    name: var.name.clone()
                })?
            ));
            continue;
        }
        if var.kind == VarKind::Binary {
            continue; // the Binaries section already implies [0, 1]
        }
        let default_lower = var.lower.is_zero();
        let default_upper = var.upper.is_none();
        if default_lower && default_upper {
            continue;
        }
        let lo = decimal_literal(&var.lower).ok_or_else(|| ModelError::NonDecimalBound {
            name: var.name.clone(),
        })?;
        match &var.upper {
            Some(up) => {
                let hi = decimal_literal(up).ok_or_else(|| ModelError::NonDecimalBound {
                    name: var.name.clone(),
                })?;
                bounds_lines.push(format!(" {} <= {} <= {}", lo, var.name, hi));
            }
            None => bounds_lines.push(format!(" {} >= {}", var.name, lo)),
        }
    }
    if !bounds_lines.is_empty() {
        out.push_str("Bounds\n");
        for l in bounds_lines {
            out.push_str(&l);
            out.push('\n');
        }
    }

    let binaries: Vec<&str> = model
        .vars
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(8) {
            out.push(' ');
            out.push_str(&chunk.join(" "));
            out.push('\n');
        }
    }
    out.push_str("End\n");
    Ok(out)
}

/// Append ` + c name` / ` - c name` to `line`, in LP conventions: unit
/// coefficients drop the number, the first term drops a leading `+`.
fn push_term(line: &mut String, coef: BigRational, name: &str, first: bool) {
    debug_assert!(coef.is_integer());
    if coef.is_zero() && !name.is_empty() {
        return;
    }
    let mag = coef.numer().abs();
    let sign = if coef.is_negative() { "-" } else { "+" };
    if first {
        if coef.is_negative() {
            line.push_str(" -");
        }
    } else {
        let _ = write!(line, " {}", sign);
    }
    if name.is_empty() {
        let _ = write!(line, " {}", mag);
    } else if mag == BigInt::one() {
        let _ = write!(line, " {}", name);
    } else {
        let _ = write!(line, " {} {}", mag, name);
    }
}

/// LCM of the denominators of an iterator of rationals.
fn common_denominator<'a>(values: impl Iterator<Item = &'a BigRational>) -> BigInt {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.denom());
    }
    lcm
}

/// Exact decimal rendering of a rational, if one exists.
fn decimal_literal(r: &BigRational) -> Option<String> {
    if r.is_integer() {
        return Some(r.numer().to_string());
    }
    if !is_finite_decimal(r) {
        return None;
    }
    // Scale the denominator up to a power of ten.
    let mut denom = r.denom().clone();
    let mut pow = 0u32;
    let (two, five, ten) = (BigInt::from(2), BigInt::from(5), BigInt::from(10));
    let mut numer = r.numer().abs();
    while !(&denom).is_one() {
        pow += 1;
        if (&denom % &two).is_zero() {
            denom /= &two;
            numer *= &five;
        } else {
            denom /= &five;
            numer *= &two;
        }
    }
    let digits = numer.to_string();
    let pow = pow as usize;
    let padded = if digits.len() <= pow {
        format!("0.{}{}", "0".repeat(pow - digits.len()), digits)
    } else {
        format!("{}.{}", &digits[..digits.len() - pow], &digits[digits.len() - pow..])
    };
    let trimmed = padded.trim_end_matches('0');
    let _ = ten;
    Some(if r.is_negative() {
        format!("-{}", trimmed)
    } else {
        trimmed.to_string()
    })
}

/// Variable ids mentioned anywhere in the model, for writer tests.
#[allow(dead_code)]
pub(crate) fn mentioned_vars(model: &ModelIr) -> Vec<VarId> {
    let mut ids: Vec<VarId> = model
        .constraints
        .iter()
        .flat_map(|c| c.terms.iter().map(|(id, _)| *id))
        .chain(model.objective.terms.iter().map(|(id, _)| *id))
        .collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}
