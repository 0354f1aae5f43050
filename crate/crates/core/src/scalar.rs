//! Exact scalars: rationals and Gaussian rationals, plus their JSON forms.
//!
//! Rationals travel as strings `"p/q"` (or `"p"`), Gaussian rationals as
//! `{"re": "p/q", "im": "p/q"}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Gaussian = Complex<BigRational>;

// Longer literals are rejected before they reach the bignum parser.
const MAX_LITERAL_LEN: usize = 512;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

pub fn real(re: Rational) -> Gaussian {
    Complex::new(re, Rational::zero())
}

pub fn gint(n: i64) -> Gaussian {
    real(rat(n))
}

/// The imaginary unit.
pub fn i_unit() -> Gaussian {
    Complex::new(Rational::zero(), Rational::one())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() || s.len() > MAX_LITERAL_LEN {
        return Err(Error::Parse(format!("invalid rational literal {s:?}")));
    }
    Rational::from_str(s).map_err(|e| Error::Parse(format!("invalid rational {s:?}: {e}")))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(if q.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

pub fn gaussian_to_c64(z: &Gaussian) -> Complex<f64> {
    Complex::new(to_f64(&z.re), to_f64(&z.im))
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// preferring the smallest denominator on ties.
pub fn nearest_rational(x: f64, max_den: i64) -> Rational {
    let mut best = (f64::INFINITY, 0i64, 1i64);
    for q in 1..=max_den {
        let p = (x * q as f64).round();
        let err = (x - p / q as f64).abs();
        if err < best.0 - 1e-15 {
            best = (err, p as i64, q);
        }
    }
    ratio(best.1, best.2)
}

/// Serde adapter for a single rational as a string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals as strings.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct GaussianRepr {
    #[serde(with = "rational_str")]
    re: Rational,
    #[serde(with = "rational_str")]
    im: Rational,
}

/// Serde adapter for a Gaussian rational as `{"re", "im"}`.
pub mod gaussian_obj {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Gaussian, s: S) -> std::result::Result<S::Ok, S::Error> {
        GaussianRepr {
            re: z.re.clone(),
            im: z.im.clone(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Gaussian, D::Error> {
        let r = GaussianRepr::deserialize(d)?;
        Ok(Complex::new(r.re, r.im))
    }
}

/// Newtype wrapper so collections of Gaussian rationals serialize cleanly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianJson(pub Gaussian);

impl Serialize for GaussianJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        gaussian_obj::serialize(&self.0, s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalJson(pub Rational);

impl Serialize for RationalJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn nearest_rational_prefers_small_denominators() {
        assert_eq!(nearest_rational(0.5000000001, 64), ratio(1, 2));
        assert_eq!(nearest_rational(-1.0, 64), rat(-1));
        assert_eq!(nearest_rational(1e-12, 64), rat(0));
        assert_eq!(nearest_rational(1.0 / 3.0, 64), ratio(1, 3));
    }

    #[test]
    fn gaussian_json_shape() {
        let z = gauss(ratio(1, 2), rat(-3));
        let v = serde_json::to_value(GaussianJson(z)).unwrap();
        assert_eq!(v, serde_json::json!({"re": "1/2", "im": "-3"}));
    }
}
