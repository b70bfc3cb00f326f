//! Reader for solver solution files.
//!
//! The accepted format is one `name value` pair per line; `#` starts a
//! comment and blank lines are skipped. Values may be integers, fractions
//! (`p/q`), decimals, or scientific notation (`1e-09`, `2.5E3`), all
//! converted exactly. Every name must belong to the model; a name may
//! appear at most once; variables never mentioned default to zero.
//!
//! Binary variables tolerate solver noise: a value within `1e-6` of 0 or 1
//! is rounded to that integer, anything farther is an error. Continuous
//! variables are taken verbatim.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};

use crate::model::{ModelError, ModelIr, VarKind};

/// Parse a solution file against `model`, yielding one exact value per
/// declared variable.
pub fn read_solution(text: &str, model: &ModelIr) -> Result<Vec<BigRational>, ModelError> {
    let by_name: std::collections::HashMap<&str, usize> = model
        .vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.name.as_str(), i))
        .collect();
    let tolerance = BigRational::new(BigInt::from(1), BigInt::from(1_000_000));
    let one = BigRational::from_integer(BigInt::from(1));

    let mut point = vec![BigRational::zero(); model.vars.len()];
    let mut assigned = vec![false; model.vars.len()];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 {
            return Err(ModelError::Parse {
                line: line_no,
                msg: format!("expected `name value`, got `{}`", line.trim()),
            });
        }
        let &var_idx = by_name
            .get(tokens[0])
            .ok_or_else(|| ModelError::UnknownVariable(tokens[0].to_string()))?;
        if assigned[var_idx] {
            return Err(ModelError::DuplicateAssignment(tokens[0].to_string()));
        }
        assigned[var_idx] = true;
        let value = parse_value(tokens[1]).ok_or_else(|| ModelError::Parse {
            line: line_no,
            msg: format!("invalid numeric value `{}`", tokens[1]),
        })?;
        point[var_idx] = match model.vars[var_idx].kind {
            VarKind::Binary => {
                if value.abs() <= tolerance {
                    BigRational::zero()
                } else if (&value - &one).abs() <= tolerance {
                    one.clone()
                } else {
                    return Err(ModelError::NotBinaryValue {
                        name: tokens[0].to_string(),
                        value: tokens[1].to_string(),
                    });
                }
            }
            VarKind::Continuous => value,
        };
    }
    Ok(point)
}

/// Parse a numeric literal exactly, including scientific notation.
fn parse_value(s: &str) -> Option<BigRational> {
    if let Some(split) = s.find(['e', 'E']) {
        let mantissa = crate::parse_ratio(&s[..split]).ok()?;
        let exp: i32 = s[split + 1..].parse().ok()?;
        let ten = BigInt::from(10);
        let factor = if exp >= 0 {
            BigRational::from_integer(ten.pow(exp as u32))
        } else {
            BigRational::new(BigInt::from(1), ten.pow(exp.unsigned_abs()))
        };
        return Some(mantissa * factor);
    }
    crate::parse_ratio(s).ok()
}
