//! Parsing and formatting of exact rational numbers.
//!
//! Weights, ratios, and objective values are [`BigRational`]s throughout the
//! crate. The accepted textual forms are integers (`3`, `-12`), fractions
//! (`8/5`), and finite decimals (`1.6`, `-0.25`); every form is converted
//! exactly, so `1.6` is `8/5`, not the nearest double.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

/// Error produced when a string is not a valid rational literal.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRatioError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parse an integer, `p/q` fraction, or finite decimal into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational, ParseRatioError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRatioError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRatioError::Invalid(s.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRatioError::Invalid(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseRatioError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let sign = if int_part.trim_start().starts_with('-') {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let int_digits = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| ParseRatioError::Invalid(s.to_string()))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRatioError::Invalid(s.to_string()));
        }
        let frac_digits: BigInt = frac_part
            .parse()
            .map_err(|_| ParseRatioError::Invalid(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let numer = int_digits.abs() * &scale + frac_digits;
        return Ok(BigRational::new(sign * numer, scale));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| ParseRatioError::Invalid(s.to_string()))?;
    Ok(BigRational::from_integer(n))
}

/// Format a rational as `p` when integral and `p/q` otherwise.
///
/// The output round-trips through [`parse_ratio`] and is the canonical form
/// used in JSON reports and solver output.
pub fn format_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
