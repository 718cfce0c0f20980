//! Exact oracle costs.
//!
//! Costs are rationals so a schedule's ledger and its predicted cost can be
//! compared with `==`. Decimal inputs such as `0.05` parse exactly.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Cost = Ratio<i128>;

pub fn cost_from_int(n: i128) -> Cost {
    Cost::from_integer(n)
}

pub fn cost_to_f64(c: &Cost) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Parses `7`, `0.05`, `-1.5` or `3/8` into an exact rational.
pub fn parse_cost(text: &str) -> Result<Cost> {
    let s = text.trim();
    let bad = || Error::InvalidParameter(format!("not a rational cost: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Cost::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all_digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 30 {
        return Err(bad());
    }
    let int_val: i128 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
    let den = 10i128.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
    let frac_val: i128 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
    let num = int_val.checked_mul(den).and_then(|v| v.checked_add(frac_val)).ok_or_else(bad)?;
    let value = Cost::new(num, den);
    Ok(if neg { -value } else { value })
}

/// Formats a cost as a terminating decimal when one exists, `p/q` otherwise.
pub fn format_cost(c: &Cost) -> String {
    if c.is_integer() {
        return c.numer().to_string();
    }
    let mut den = *c.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den.is_even() {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", c.numer(), c.denom());
    }
    let digits = twos.max(fives);
    let scale = 10i128.pow(digits);
    let scaled = (c * Cost::from_integer(scale)).to_integer();
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.abs();
    let int = abs / scale;
    let frac = abs % scale;
    let frac = format!("{:0width$}", frac, width = digits as usize);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

pub(crate) fn is_positive(c: &Cost) -> bool {
    !c.is_zero() && c.numer().signum() == c.denom().signum()
}
