//! Constants of the database domain.
//!
//! A constant is either an exact decimal number or a piece of text. The domain
//! is totally ordered: every number sorts before every text value, numbers
//! compare numerically and text compares by code point.

use std::fmt;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use regex::Regex;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constant {
    Number(BigRational),
    Text(String),
}

pub type Tuple = Vec<Constant>;

static GROUPED: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[+-]?\d{1,3}(,\d{3})+(\.\d+)?$").unwrap());
static PLAIN: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^([+-]?)(\d+)?(?:\.(\d+))?(?:[eE]([+-]?\d+))?$").unwrap()
});

impl Constant {
    /// Interprets raw text as a constant. Values that look like decimal
    /// numbers (optionally with `,` thousands separators) become numbers;
    /// everything else is text, with surrounding whitespace trimmed.
    pub fn parse(raw: &str) -> Constant {
        let trimmed = raw.trim();
        let numeric = if GROUPED.is_match(trimmed) {
            trimmed.replace(',', "")
        } else {
            trimmed.to_string()
        };
        match parse_decimal(&numeric) {
            Some(n) => Constant::Number(n),
            None => Constant::Text(trimmed.to_string()),
        }
    }

    pub fn text(s: impl Into<String>) -> Constant {
        Constant::Text(s.into())
    }

    pub fn int(n: i64) -> Constant {
        Constant::Number(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_number(&self) -> bool {
        matches!(self, Constant::Number(_))
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Constant::Text(s) => Some(s),
            Constant::Number(_) => None,
        }
    }

    /// True when rendering this constant bare and re-parsing it would give
    /// a different constant (or would not survive a tokenizer).
    pub fn needs_quotes(&self) -> bool {
        match self {
            Constant::Number(_) => false,
            Constant::Text(s) => {
                s.is_empty()
                    || s.trim() != s
                    || Constant::parse(s) != *self
                    || s.chars().any(|c| !(c.is_alphanumeric() || "_-.".contains(c)))
            }
        }
    }

    /// Renders with double quotes where `needs_quotes` says so.
    pub fn quoted(&self) -> String {
        if self.needs_quotes() {
            let escaped = self.to_string().replace('\\', "\\\\").replace('"', "\\\"");
            format!("\"{escaped}\"")
        } else {
            self.to_string()
        }
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let caps = PLAIN.captures(s)?;
    let int_part = caps.get(2).map_or("", |m| m.as_str());
    let frac_part = caps.get(3).map_or("", |m| m.as_str());
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let mut exponent: i64 = -(frac_part.len() as i64);
    if let Some(e) = caps.get(4) {
        exponent += e.as_str().parse::<i64>().ok()?;
    }
    if exponent.abs() > 4096 {
        return None;
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num_traits::pow(ten, exponent.unsigned_abs() as usize);
    if exponent >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    if &caps[1] == "-" {
        value = -value;
    }
    Some(value)
}

fn write_number(f: &mut fmt::Formatter<'_>, n: &BigRational) -> fmt::Result {
    if n.is_integer() {
        return write!(f, "{}", n.to_integer());
    }
    // Terminating decimals print in positional form, anything else as p/q.
    let mut denom = n.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut places = 0usize;
    let mut twos = 0usize;
    let mut fives = 0usize;
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return write!(f, "{}/{}", n.numer(), n.denom());
    }
    places += twos.max(fives);
    let scaled = n * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if n.is_negative() { "-" } else { "" };
    write!(f, "{sign}{int}.{frac}")
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Number(n) => write_number(f, n),
            Constant::Text(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Constant {
    fn from(s: &str) -> Self {
        Constant::parse(s)
    }
}

impl From<i64> for Constant {
    fn from(n: i64) -> Self {
        Constant::int(n)
    }
}

impl Constant {
    /// Lossy float view, used only for diagnostics.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Constant::Number(n) => n.to_f64(),
            Constant::Text(_) => None,
        }
    }
}

pub fn format_tuple(t: &[Constant]) -> String {
    let parts: Vec<String> = t.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn thousands_separators_are_stripped() {
        assert_eq!(Constant::parse("3,502,000"), Constant::int(3_502_000));
        assert_eq!(Constant::parse(" 779,808 "), Constant::int(779_808));
        assert_eq!(Constant::parse("5000000"), Constant::int(5_000_000));
    }

    #[test]
    fn malformed_groups_stay_text() {
        assert!(matches!(Constant::parse("1,23"), Constant::Text(_)));
        assert!(matches!(Constant::parse("12,3456"), Constant::Text(_)));
        assert_eq!(Constant::parse("New York"), Constant::text("New York"));
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(Constant::parse("0.10"), Constant::parse("0.1"));
        assert_eq!(Constant::parse("1e3"), Constant::int(1000));
        assert_eq!(Constant::parse("2.5").to_string(), "2.5");
        assert_eq!(Constant::parse("-0.125").to_string(), "-0.125");
        assert!(matches!(Constant::parse("7."), Constant::Text(_)));
    }

    #[test]
    fn numbers_sort_before_text() {
        assert!(Constant::int(10) < Constant::text("1a"));
        assert!(Constant::int(9) < Constant::int(10));
        assert!(Constant::text("Amsterdam") < Constant::text("Berlin"));
    }

    #[test]
    fn quoting() {
        assert_eq!(Constant::text("Europe").quoted(), "Europe");
        assert_eq!(Constant::text("New York").quoted(), "\"New York\"");
        assert_eq!(Constant::int(5).quoted(), "5");
    }

    fn constant() -> impl Strategy<Value = Constant> {
        prop_oneof![
            (-1000i64..1000).prop_map(Constant::int),
            "[a-z0-9]{0,3}".prop_map(|s| Constant::parse(&s)),
        ]
    }

    proptest! {
        #[test]
        fn order_is_total_and_transitive(a in constant(), b in constant(), c in constant()) {
            let lt = (a < b) as u8 + (a == b) as u8 + (b < a) as u8;
            prop_assert_eq!(lt, 1);
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }

        #[test]
        fn display_reparses(a in constant()) {
            prop_assert_eq!(Constant::parse(&a.to_string()), a);
        }
    }
}
