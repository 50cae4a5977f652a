// Copyright 2026 The trendminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Exact rationals and their decimal renderings.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Non-negative exact rational. Supports and confidences live in `[0, 1]`.
pub type Rational = Ratio<u64>;

/// Parses a plain decimal literal (`"0.0005"`, `"1"`, `".5"`) into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let bad = || Error::Config(format!("not a non-negative decimal: {text:?}"));
    let text = text.trim();
    let (whole, frac) = match text.split_once('.') {
        Some((w, f)) => (w, f),
        None => (text, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let frac = frac.trim_end_matches('0');
    if frac.len() > 18 {
        return Err(Error::Config(format!("too many fractional digits: {text:?}")));
    }
    let scale = 10u64.pow(frac.len() as u32);
    let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let numer = whole
        .checked_mul(scale)
        .and_then(|w| w.checked_add(frac))
        .ok_or_else(bad)?;
    Ok(Rational::new(numer, scale))
}

/// Renders `numer/denom` in plain decimal notation with exactly `digits`
/// significant digits, rounding half up. Zero renders as `"0"`.
pub fn format_significant(value: Rational, digits: u32) -> String {
    assert!(digits >= 1, "at least one significant digit");
    if value.is_zero() {
        return "0".to_string();
    }
    exact_significant(*value.numer() as u128, *value.denom() as u128, digits)
        .unwrap_or_else(|| float_significant(value, digits))
}

fn exact_significant(numer: u128, denom: u128, digits: u32) -> Option<String> {
    let lo = 10u128.pow(digits - 1);
    let hi = 10u128.pow(digits);
    // value * 10^shift lands in [lo, hi)
    let mut shift: i32 = 0;
    let (mut n, mut d) = (numer, denom);
    while n / d >= hi {
        d = d.checked_mul(10)?;
        shift -= 1;
    }
    while n / d < lo {
        n = n.checked_mul(10)?;
        shift += 1;
    }
    let mut q = n / d;
    let rem = n % d;
    if rem.checked_mul(2)? >= d {
        q += 1;
    }
    if q == hi {
        q = lo;
        shift -= 1;
    }
    Some(place_point(&q.to_string(), shift))
}

fn place_point(digits: &str, shift: i32) -> String {
    if shift <= 0 {
        let mut out = digits.to_string();
        out.extend(std::iter::repeat_n('0', (-shift) as usize));
        return out;
    }
    let shift = shift as usize;
    if shift >= digits.len() {
        format!("0.{}{}", "0".repeat(shift - digits.len()), digits)
    } else {
        let (int, frac) = digits.split_at(digits.len() - shift);
        format!("{int}.{frac}")
    }
}

fn float_significant(value: Rational, digits: u32) -> String {
    let x = value.to_f64().unwrap_or(f64::NAN);
    let sci = format!("{:.*e}", (digits - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific rendering");
    let exp: i32 = exp.parse().expect("exponent");
    let mantissa: String = mantissa.chars().filter(|c| *c != '.').collect();
    place_point(&mantissa, digits as i32 - 1 - exp)
}

/// Lossy conversion for heuristics that run in floating point.
pub fn to_f64(value: Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
