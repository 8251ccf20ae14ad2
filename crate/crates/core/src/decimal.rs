//! Decimal rendering and comparison of exact ratios.

use std::fmt;
use std::str::FromStr;

use crate::Ratio;

fn pow10(places: u32) -> u128 {
    10u128.pow(places)
}

/// Renders `value` with exactly `places` decimals, rounding half up.
pub fn render_half_up(value: &Ratio, places: u32) -> String {
    let numer = u128::from(*value.numer());
    let denom = u128::from(*value.denom());
    let scale = pow10(places);
    let scaled = (2 * numer * scale + denom) / (2 * denom);
    let int_part = scaled / scale;
    if places == 0 {
        return int_part.to_string();
    }
    let frac = scaled % scale;
    format!("{int_part}.{frac:0width$}", width = places as usize)
}

/// A non-negative decimal exactly as printed, e.g. `"47.330"` or `"6.91"`.
///
/// Keeps the number of printed decimals so comparisons can honour the
/// precision the value was published at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrintedDecimal {
    text: String,
    scaled: u128,
    places: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a plain decimal number: {0:?}")]
pub struct DecimalParseError(pub String);

impl FromStr for PrintedDecimal {
    type Err = DecimalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DecimalParseError(s.to_string());
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if int_part.is_empty() || !all_digits(int_part) || !all_digits(frac_part) {
            return Err(err());
        }
        if s.ends_with('.') || frac_part.len() > 18 || int_part.len() > 18 {
            return Err(err());
        }
        let places = frac_part.len() as u32;
        let digits: String = [int_part, frac_part].concat();
        let scaled = digits.parse::<u128>().map_err(|_| err())?;
        Ok(PrintedDecimal {
            text: s.to_string(),
            scaled,
            places,
        })
    }
}

impl fmt::Display for PrintedDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl PrintedDecimal {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Number of digits after the decimal point.
    pub fn places(&self) -> u32 {
        self.places
    }

    pub fn to_ratio(&self) -> Ratio {
        let scaled = u64::try_from(self.scaled).expect("printed decimal fits in u64");
        Ratio::new(scaled, 10u64.pow(self.places))
    }

    /// True when `|value − self| < 10^−d`, d being the printed precision.
    ///
    /// Both truncated and rounded renderings of `value` pass.
    pub fn agrees_with(&self, value: &Ratio) -> bool {
        let numer = u128::from(*value.numer());
        let denom = u128::from(*value.denom());
        let lhs = numer * pow10(self.places);
        let rhs = self.scaled * denom;
        lhs.abs_diff(rhs) < denom
    }
}

impl serde::Serialize for PrintedDecimal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.text)
    }
}

impl<'de> serde::Deserialize<'de> for PrintedDecimal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
