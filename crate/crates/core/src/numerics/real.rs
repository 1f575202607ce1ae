use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::surd::{decimal_digits, parse_surd, QuadSurd, SurdExpr, SurdKind};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 53;

/// A real input such as a rotation number or an interval length.
///
/// Values entered as rationals or single-radicand surds are kept exactly and
/// compared exactly against Farey fractions. Everything else is an `f64`,
/// which is itself an exact dyadic rational, so comparisons are still exact;
/// `precision` only decides when such a value is too close to a Farey
/// fraction to trust.
#[derive(Clone, Debug, PartialEq)]
pub struct RealValue {
    approx: f64,
    exact: Option<QuadSurd>,
    source: Option<SurdExpr>,
    precision: u32,
}

impl RealValue {
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain(format!("non-finite value {x}")));
        }
        Ok(Self {
            approx: x,
            exact: None,
            source: None,
            precision: DEFAULT_PRECISION,
        })
    }

    pub fn rational(a: i64, q: i64) -> Result<Self> {
        let s = QuadSurd::rational(a, q)?;
        Ok(Self::from_surd(s))
    }

    pub fn from_surd(s: QuadSurd) -> Self {
        Self {
            approx: s.to_f64(),
            exact: Some(s),
            source: None,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn from_expr(e: SurdExpr) -> Self {
        let exact = e.quadratic();
        Self {
            approx: exact.as_ref().map_or_else(|| e.to_f64(), QuadSurd::to_f64),
            exact,
            source: Some(e),
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::from_expr(parse_surd(text)?))
    }

    pub fn with_precision(mut self, bits: u32) -> Result<Self> {
        if !(16..=4096).contains(&bits) {
            return Err(Error::validation(format!(
                "precision {bits} outside supported range 16..=4096"
            )));
        }
        self.precision = bits;
        Ok(self)
    }

    pub fn value(&self) -> f64 {
        self.approx
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact(&self) -> Option<&QuadSurd> {
        self.exact.as_ref()
    }

    pub fn source(&self) -> Option<&SurdExpr> {
        self.source.as_ref()
    }

    pub fn kind(&self) -> SurdKind {
        match (&self.source, &self.exact) {
            (Some(e), _) => e.kind(),
            (None, Some(q)) if q.is_rational() => SurdKind::Rational,
            (None, Some(_)) => SurdKind::Surd,
            (None, None) => SurdKind::Decimal,
        }
    }

    /// Exact sign of `self - a/q`.
    pub fn cmp_ratio(&self, a: u64, q: u64) -> Ordering {
        match &self.exact {
            Some(s) => s.cmp_ratio(&BigInt::from(a), &BigInt::from(q)),
            None => cmp_f64_ratio(self.approx, a, q),
        }
    }

    /// `k*self - c`, rounded once at the end when the value is exact.
    pub fn affine(&self, k: i64, c: i64) -> f64 {
        match &self.exact {
            Some(s) => s.affine(&BigInt::from(k), &BigInt::from(c)).to_f64(),
            None => {
                // k*x - c with a single rounding through fma
                (k as f64).mul_add(self.approx, -(c as f64))
            }
        }
    }

    /// `|self - a/q|`, accurate to a few ulps even when the two agree to
    /// every bit of `self`.
    pub fn distance_to(&self, a: u64, q: u64) -> f64 {
        if let Some(s) = &self.exact {
            return s.affine(&BigInt::from(q), &BigInt::from(a)).to_f64().abs() / q as f64;
        }
        let (a, q) = (a as f64, q as f64);
        let r = a / q;
        // a/q = r + e with e recovered from the exact residual a - r*q
        let e = (-r).mul_add(q, a) / q;
        ((self.approx - r) - e).abs()
    }

    /// Decimal rendering at the working precision.
    pub fn to_decimal(&self) -> String {
        let digits = decimal_digits(self.precision);
        if let Some(s) = &self.exact {
            s.to_decimal(digits)
        } else if let Some(e) = &self.source {
            e.to_decimal(self.precision)
        } else {
            format!("{:.*}", digits, self.approx)
        }
    }

    pub fn text(&self) -> String {
        match (&self.source, &self.exact) {
            (Some(e), _) => e.text().to_string(),
            (None, Some(q)) => q.to_string(),
            (None, None) => format!("{}", self.approx),
        }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

/// Exact comparison of a double with `a/q`.
fn cmp_f64_ratio(x: f64, a: u64, q: u64) -> Ordering {
    if x.is_sign_negative() && x != 0.0 {
        return Ordering::Less;
    }
    if x == 0.0 {
        return if a == 0 {
            Ordering::Equal
        } else {
            Ordering::Less
        };
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    // x = m * 2^e; compare m*q*2^e with a
    if e >= 0 {
        let lhs = (BigInt::from(m) * BigInt::from(q)) << (e as usize);
        return lhs.cmp(&BigInt::from(a));
    }
    let shift = (-e) as u32;
    if shift <= 63 {
        let lhs = m as u128 * q as u128;
        if let Some(rhs) = (a as u128)
            .checked_shl(shift)
            .filter(|r| r >> shift == a as u128)
        {
            return lhs.cmp(&rhs);
        }
    }
    let lhs = BigInt::from(m) * BigInt::from(q);
    let rhs = BigInt::from(a) << (shift as usize);
    lhs.cmp(&rhs)
}

impl Serialize for RealValue {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("RealValue", 5)?;
        st.serialize_field("kind", &self.kind())?;
        st.serialize_field("expr", &self.text())?;
        st.serialize_field("value", &self.approx)?;
        st.serialize_field("decimal", &self.to_decimal())?;
        st.serialize_field("precision", &self.precision)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RealRepr {
    Number(f64),
    Text(String),
    Object {
        expr: Option<String>,
        value: Option<f64>,
        precision: Option<u32>,
    },
}

impl<'de> Deserialize<'de> for RealValue {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = match RealRepr::deserialize(de)? {
            RealRepr::Number(x) => RealValue::from_f64(x),
            RealRepr::Text(t) => RealValue::parse(&t),
            RealRepr::Object {
                expr,
                value,
                precision,
            } => {
                let base = match (expr, value) {
                    (Some(e), _) => RealValue::parse(&e).or_else(|err| match value {
                        Some(x) => RealValue::from_f64(x),
                        None => Err(err),
                    }),
                    (None, Some(x)) => RealValue::from_f64(x),
                    (None, None) => Err(Error::validation("number needs \"expr\" or \"value\"")),
                };
                base.and_then(|b| b.with_precision(precision.unwrap_or(DEFAULT_PRECISION)))
            }
        };
        v.map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_comparisons_are_exact() {
        assert_eq!(cmp_f64_ratio(0.5, 1, 2), Ordering::Equal);
        // the double nearest 1/3 is below it
        assert_eq!(cmp_f64_ratio(1.0 / 3.0, 1, 3), Ordering::Less);
        assert_eq!(cmp_f64_ratio(0.1, 1, 10), Ordering::Greater);
        assert_eq!(cmp_f64_ratio(1e-300, 0, 1), Ordering::Greater);
        assert_eq!(cmp_f64_ratio(1e-300, 1, 1_000_000), Ordering::Less);
        assert_eq!(cmp_f64_ratio(0.75, 3, 4), Ordering::Equal);
    }

    #[test]
    fn exact_affine_keeps_small_values() {
        let x = RealValue::parse("sqrt(1/2)").unwrap();
        // 3/sqrt2 - 2
        let a = x.affine(3, 2);
        assert!((a - (3.0 / 2f64.sqrt() - 2.0)).abs() < 1e-15);
        assert_eq!(x.kind(), SurdKind::Surd);
    }

    #[test]
    fn json_round_trip() {
        let x = RealValue::parse("2/3").unwrap().with_precision(80).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"kind\":\"rational\""));
        assert!(s.contains("\"decimal\":\"0.666666666666666666666666"));
        let y: RealValue = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let z: RealValue = serde_json::from_str("0.25").unwrap();
        assert_eq!(z.value(), 0.25);
    }

    #[test]
    fn precision_bounds() {
        let x = RealValue::from_f64(0.3).unwrap();
        assert!(x.clone().with_precision(8).is_err());
        assert_eq!(x.with_precision(200).unwrap().precision(), 200);
    }
}
