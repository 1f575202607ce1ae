//! Exact quadratic surds `(p + r*sqrt(n))/s` and the small expression
//! language used to enter rotation numbers and interval lengths.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The real number `(p + r*sqrt(n))/s`.
///
/// Normalized so that `s > 0`, `n` is squarefree (or zero), `r == 0` iff
/// `n == 0`, and `gcd(p, r, s) == 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    p: BigInt,
    r: BigInt,
    n: BigInt,
    s: BigInt,
}

impl QuadSurd {
    pub fn new(p: BigInt, r: BigInt, n: BigInt, s: BigInt) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        if n.is_negative() {
            return Err(Error::domain("square root of a negative number"));
        }
        Ok(Self { p, r, n, s }.normalized())
    }

    pub fn rational(p: impl Into<BigInt>, s: impl Into<BigInt>) -> Result<Self> {
        Self::new(p.into(), BigInt::zero(), BigInt::zero(), s.into())
    }

    pub fn integer(p: impl Into<BigInt>) -> Self {
        Self {
            p: p.into(),
            r: BigInt::zero(),
            n: BigInt::zero(),
            s: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    /// `sqrt(num/den)` for a nonnegative rational.
    pub fn sqrt_of_ratio(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        if num.is_negative() != den.is_negative() && !num.is_zero() {
            return Err(Error::domain("square root of a negative number"));
        }
        let (num, den) = (num.abs(), den.abs());
        // sqrt(num/den) = sqrt(num*den)/den
        Self::new(BigInt::zero(), BigInt::one(), num * &den, den)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
    pub fn n(&self) -> &BigInt {
        &self.n
    }
    pub fn s(&self) -> &BigInt {
        &self.s
    }

    pub fn is_rational(&self) -> bool {
        self.r.is_zero()
    }

    /// Numerator and denominator when the value is rational.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        self.is_rational().then(|| (self.p.clone(), self.s.clone()))
    }

    fn normalized(mut self) -> Self {
        if self.s.is_negative() {
            self.p = -self.p;
            self.r = -self.r;
            self.s = -self.s;
        }
        if self.r.is_zero() || self.n.is_zero() {
            self.r = BigInt::zero();
            self.n = BigInt::zero();
        } else {
            let (outer, inner) = split_square(&self.n);
            self.r *= outer;
            self.n = inner;
            if self.n.is_one() {
                self.p += &self.r;
                self.r = BigInt::zero();
                self.n = BigInt::zero();
            }
        }
        let g = self.p.gcd(&self.r).gcd(&self.s);
        if !g.is_zero() && !g.is_one() {
            self.p /= &g;
            self.r /= &g;
            self.s /= &g;
        }
        self
    }

    /// Sign of `self - a/q` for `q > 0`.
    pub fn cmp_ratio(&self, a: &BigInt, q: &BigInt) -> Ordering {
        debug_assert!(q.is_positive());
        // (p + r sqrt n)/s - a/q has the sign of q p - a s + q r sqrt n
        let u = q * &self.p - a * &self.s;
        let v = q * &self.r;
        sign_of_surd(&u, &v, &self.n)
    }

    /// `k * self - c`.
    pub fn affine(&self, k: &BigInt, c: &BigInt) -> Self {
        Self {
            p: k * &self.p - c * &self.s,
            r: k * &self.r,
            n: self.n.clone(),
            s: self.s.clone(),
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        Self {
            p: -self.p.clone(),
            r: -self.r.clone(),
            n: self.n.clone(),
            s: self.s.clone(),
        }
    }

    /// Sum, when both operands share a radicand (or one is rational).
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let n = match (self.is_rational(), other.is_rational()) {
            (true, _) => other.n.clone(),
            (_, true) => self.n.clone(),
            _ if self.n == other.n => self.n.clone(),
            _ => return None,
        };
        Some(
            Self {
                p: &self.p * &other.s + &other.p * &self.s,
                r: &self.r * &other.s + &other.r * &self.s,
                n,
                s: &self.s * &other.s,
            }
            .normalized(),
        )
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        if self.is_rational() || other.is_rational() || self.n == other.n {
            let n = if self.is_rational() {
                other.n.clone()
            } else {
                self.n.clone()
            };
            let p = &self.p * &other.p + &self.r * &other.r * &n;
            let r = &self.p * &other.r + &self.r * &other.p;
            Some(
                Self {
                    p,
                    r,
                    n,
                    s: &self.s * &other.s,
                }
                .normalized(),
            )
        } else {
            None
        }
    }

    /// Reciprocal by multiplying with the conjugate.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        // s/(p + r sqrt n) = s (p - r sqrt n)/(p^2 - r^2 n)
        let den = &self.p * &self.p - &self.r * &self.r * &self.n;
        Ok(Self {
            p: &self.s * &self.p,
            r: -(&self.s * &self.r),
            n: self.n.clone(),
            s: den,
        }
        .normalized())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.r.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        sign_of_surd(&self.p, &self.r, &self.n)
    }

    /// `floor(self * scale)` for `scale > 0`, exactly.
    pub fn scaled_floor(&self, scale: &BigInt) -> BigInt {
        let rad = if self.r.is_zero() {
            BigInt::zero()
        } else {
            // floor(r * scale * sqrt(n))
            let sq = (&self.r * &self.r * scale * scale * &self.n)
                .to_biguint()
                .expect("nonnegative");
            let root = BigInt::from(sq.sqrt());
            if self.r.is_negative() {
                let exact = &root * &root == BigInt::from(sq);
                if exact {
                    -root
                } else {
                    -root - 1
                }
            } else {
                root
            }
        };
        (&self.p * scale + rad).div_floor(&self.s)
    }

    pub fn to_f64(&self) -> f64 {
        if let Some((p, s)) = self.as_rational() {
            return ratio_to_f64(&p, &s);
        }
        let mut k = 96u32;
        loop {
            let scale = BigInt::one() << k;
            let v = self.scaled_floor(&scale);
            if v.bits() >= 64 || k >= 1000 {
                return scaled_to_f64(&v, k);
            }
            k += 64;
        }
    }

    /// Decimal rendering with `digits` digits after the point (truncated
    /// toward negative infinity).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        fixed_to_decimal(&self.scaled_floor(&scale), digits)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.s.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.s)
            }
        } else {
            let op = if self.r.is_negative() { '-' } else { '+' };
            write!(
                f,
                "({} {} {}*sqrt({}))/{}",
                self.p,
                op,
                self.r.abs(),
                self.n,
                self.s
            )
        }
    }
}

/// Sign of `u + v*sqrt(n)` with `n >= 0`.
fn sign_of_surd(u: &BigInt, v: &BigInt, n: &BigInt) -> Ordering {
    let su = u.sign();
    let sv = if n.is_zero() { Sign::NoSign } else { v.sign() };
    match (su, sv) {
        (_, Sign::NoSign) => u.cmp(&BigInt::zero()),
        (Sign::NoSign, _) => v.cmp(&BigInt::zero()),
        (Sign::Plus, Sign::Plus) => Ordering::Greater,
        (Sign::Minus, Sign::Minus) => Ordering::Less,
        _ => {
            let uu = u * u;
            let vv = v * v * n;
            // |u| vs |v| sqrt n decides, the sign follows the larger term
            match uu.cmp(&vv) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => u.cmp(&BigInt::zero()),
                Ordering::Less => v.cmp(&BigInt::zero()),
            }
        }
    }
}

/// Writes `n = outer^2 * inner` with `inner` free of small square factors.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut inner = n.clone();
    let mut outer = BigInt::one();
    let root = n.to_biguint().map(|u| u.sqrt()).unwrap_or_default();
    if BigInt::from(root.clone()) * BigInt::from(root.clone()) == *n {
        return (BigInt::from(root), BigInt::one());
    }
    let mut k = 2u64;
    while k <= 100_000 {
        let kk = BigInt::from(k * k);
        if kk > inner {
            break;
        }
        while (&inner % &kk).is_zero() {
            inner /= &kk;
            outer *= k;
        }
        k += 1;
    }
    (outer, inner)
}

fn ratio_to_f64(p: &BigInt, s: &BigInt) -> f64 {
    if let (Some(a), Some(b)) = (p.to_i64(), s.to_i64()) {
        if a.unsigned_abs() < (1 << 53) && b.unsigned_abs() < (1 << 53) {
            return a as f64 / b as f64;
        }
    }
    let k = 128 + s.bits().saturating_sub(p.bits()) as u32;
    let v = (p << k).div_floor(s);
    scaled_to_f64(&v, k)
}

fn scaled_to_f64(v: &BigInt, k: u32) -> f64 {
    let m = v.to_f64().unwrap_or(f64::NAN);
    if k <= 1022 {
        m * f64::from_bits(((1023 - k) as u64) << 52)
    } else {
        m * 2f64.powi(-(k as i32))
    }
}

fn fixed_to_decimal(v: &BigInt, digits: usize) -> String {
    let neg = v.is_negative();
    let mag = v.abs().to_string();
    let mag = if mag.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int, frac) = mag.split_at(mag.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Syntactic category of a parsed number, kept for serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurdKind {
    Rational,
    Decimal,
    Surd,
}

/// A parsed number expression: a sum of quadratic surds with pairwise
/// distinct radicands.
#[derive(Clone, Debug, PartialEq)]
pub struct SurdExpr {
    text: String,
    kind: SurdKind,
    terms: Vec<QuadSurd>,
}

impl SurdExpr {
    pub fn zero() -> Self {
        Self {
            text: "0".to_string(),
            kind: SurdKind::Rational,
            terms: Vec::new(),
        }
    }

    /// Exact sum.
    pub fn add(&self, other: &SurdExpr) -> SurdExpr {
        let kind = match (self.kind, other.kind) {
            (SurdKind::Surd, _) | (_, SurdKind::Surd) => SurdKind::Surd,
            (SurdKind::Decimal, _) | (_, SurdKind::Decimal) => SurdKind::Decimal,
            _ => SurdKind::Rational,
        };
        let text = if self.terms.is_empty() {
            other.text.clone()
        } else {
            format!("{} + ({})", self.text, other.text)
        };
        SurdExpr {
            text,
            kind,
            terms: Sum(self.terms.clone()).add(Sum(other.terms.clone())).0,
        }
    }

    /// True when the value is `<= 0`; exact unless several radicands mix.
    pub fn is_nonpositive(&self) -> bool {
        match self.quadratic() {
            Some(q) => q.signum() != Ordering::Greater,
            None => self.to_f64() <= 0.0,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn kind(&self) -> SurdKind {
        self.kind
    }

    pub fn terms(&self) -> &[QuadSurd] {
        &self.terms
    }

    /// The value as a single quadratic surd, when it is one.
    pub fn quadratic(&self) -> Option<QuadSurd> {
        self.terms
            .iter()
            .try_fold(QuadSurd::zero(), |acc, t| acc.checked_add(t))
    }

    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        self.quadratic().and_then(|q| q.as_rational())
    }

    pub fn scaled_floor(&self, scale: &BigInt) -> BigInt {
        self.terms.iter().map(|t| t.scaled_floor(scale)).sum()
    }

    pub fn to_f64(&self) -> f64 {
        match self.quadratic() {
            Some(q) => q.to_f64(),
            None => {
                let k = 192;
                let v = self.scaled_floor(&(BigInt::one() << k));
                scaled_to_f64(&v, k)
            }
        }
    }

    /// Decimal rendering carrying roughly `bits` binary digits.
    pub fn to_decimal(&self, bits: u32) -> String {
        let digits = decimal_digits(bits);
        let scale = BigInt::from(10u32).pow(digits as u32);
        fixed_to_decimal(&self.scaled_floor(&scale), digits)
    }
}

impl fmt::Display for SurdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl std::str::FromStr for SurdExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_surd(s)
    }
}

pub(crate) fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).ceil() as usize
}

/// Parses a number expression.
///
/// Accepted forms include `INT`, `INT/INT`, decimals (with optional
/// exponent), `sqrt(INT[/INT])`, `(INT ± INT*sqrt(INT))/INT`, and sums,
/// differences, products and quotients of those, e.g.
/// `1/sqrt(2) - 1/sqrt(3)`. Products and quotients must stay within a single
/// radicand.
pub fn parse_surd(text: &str) -> Result<SurdExpr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        saw_sqrt: false,
        saw_decimal: false,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(Error::parse(0, "empty expression"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    let kind = if p.saw_sqrt {
        SurdKind::Surd
    } else if p.saw_decimal {
        SurdKind::Decimal
    } else {
        SurdKind::Rational
    };
    Ok(SurdExpr {
        text: text.trim().to_string(),
        kind,
        terms: value.0,
    })
}

/// Sum of surds keyed by radicand.
#[derive(Clone, Debug)]
struct Sum(Vec<QuadSurd>);

impl Sum {
    fn single(q: QuadSurd) -> Self {
        if q.is_zero() {
            Sum(Vec::new())
        } else {
            Sum(vec![q])
        }
    }

    fn add(mut self, other: Sum) -> Sum {
        for t in other.0 {
            let slot = self
                .0
                .iter()
                .position(|u| u.n == t.n || (u.is_rational() && t.is_rational()));
            match slot {
                Some(i) => {
                    let merged = self.0[i].checked_add(&t).expect("same radicand");
                    if merged.is_zero() {
                        self.0.remove(i);
                    } else {
                        self.0[i] = merged;
                    }
                }
                None => self.0.push(t),
            }
        }
        // rational part first, then by radicand
        self.0.sort_by(|a, b| a.n.cmp(&b.n));
        self
    }

    fn neg(self) -> Sum {
        Sum(self.0.iter().map(QuadSurd::neg).collect())
    }

    fn as_single(&self) -> Option<QuadSurd> {
        match self.0.as_slice() {
            [] => Some(QuadSurd::zero()),
            [t] => Some(t.clone()),
            // a rational plus one radicand still fits a single surd
            [a, b] => a.checked_add(b),
            _ => None,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    saw_sqrt: bool,
    saw_decimal: bool,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Sum> {
        let negate = self.eat(b'-');
        if !negate {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Sum> {
        let mut acc = self.primary()?;
        loop {
            let start = self.pos;
            if self.eat(b'*') {
                let rhs = self.primary()?;
                acc = self.mul(acc, rhs, start)?;
            } else if self.eat(b'/') {
                let rhs = self.primary()?;
                let single = rhs
                    .as_single()
                    .ok_or_else(|| Error::parse(start, "divisor mixes radicands"))?;
                let inv = single.recip().map_err(|e| match e {
                    Error::Domain(m) => Error::parse(start, m),
                    other => other,
                })?;
                acc = self.mul(acc, Sum::single(inv), start)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn mul(&self, lhs: Sum, rhs: Sum, at: usize) -> Result<Sum> {
        let mut out = Sum(Vec::new());
        for a in &lhs.0 {
            for b in &rhs.0 {
                let prod = a
                    .checked_mul(b)
                    .ok_or_else(|| Error::parse(at, "product of distinct radicands"))?;
                out = out.add(Sum::single(prod));
            }
        }
        Ok(out)
    }

    fn primary(&mut self) -> Result<Sum> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b's') => self.sqrt_call(),
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let q = self.number()?;
                Ok(Sum::single(q))
            }
            Some(_) => Err(Error::parse(
                self.pos,
                "expected a number, sqrt(...) or '('",
            )),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn sqrt_call(&mut self) -> Result<Sum> {
        let start = self.pos;
        if !self.src[self.pos..].starts_with(b"sqrt") {
            return Err(Error::parse(start, "unknown identifier"));
        }
        self.pos += 4;
        self.saw_sqrt = true;
        self.expect(b'(')?;
        self.skip_ws();
        let arg_pos = self.pos;
        let num = self.integer()?;
        let den = if self.eat(b'/') {
            self.skip_ws();
            self.integer()?
        } else {
            BigInt::one()
        };
        self.expect(b')')?;
        let q = QuadSurd::sqrt_of_ratio(num, den).map_err(|e| match e {
            Error::Domain(m) => Error::parse(arg_pos, m),
            other => other,
        })?;
        Ok(Sum::single(q))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits"))
    }

    /// Integer or decimal literal (optionally with exponent), as an exact
    /// rational.
    fn number(&mut self) -> Result<QuadSurd> {
        let start = self.pos;
        let mut mantissa = String::new();
        let mut frac_digits = 0i64;
        let mut seen_point = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                mantissa.push(c as char);
                if seen_point {
                    frac_digits += 1;
                }
            } else if c == b'.' && !seen_point {
                seen_point = true;
                self.saw_decimal = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if mantissa.is_empty() {
            return Err(Error::parse(start, "expected digits"));
        }
        let mut exp = 0i64;
        if matches!(self.peek(), Some(b'e' | b'E')) {
            self.saw_decimal = true;
            self.pos += 1;
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let epos = self.pos;
            let e = self.integer()?;
            let e = e
                .to_i64()
                .filter(|e| *e <= 4000)
                .ok_or_else(|| Error::parse(epos, "exponent out of range"))?;
            exp = if neg { -e } else { e };
        }
        let m: BigInt = mantissa.parse().expect("digits");
        let shift = exp - frac_digits;
        let ten = BigInt::from(10u32);
        let q = if shift >= 0 {
            QuadSurd::integer(m * ten.pow(shift as u32))
        } else {
            QuadSurd::rational(m, ten.pow((-shift) as u32))?
        };
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn sqrt_half() {
        let e = parse_surd("sqrt(1/2)").unwrap();
        assert_eq!(e.kind(), SurdKind::Surd);
        let q = e.quadratic().unwrap();
        assert_eq!(q.to_string(), "(0 + 1*sqrt(2))/2");
        assert_eq!(q.to_f64(), std::f64::consts::FRAC_1_SQRT_2);
        assert!(e.to_decimal(64).starts_with("0.7071067811865475244"));
    }

    #[test]
    fn rational_and_identity_cases() {
        let e = parse_surd("2/3").unwrap();
        assert_eq!(e.kind(), SurdKind::Rational);
        assert_eq!(e.as_rational(), Some((big(2), big(3))));

        let one = parse_surd("(1+0*sqrt(2))/1").unwrap();
        assert_eq!(one.as_rational(), Some((big(1), big(1))));
        assert_eq!(one.to_f64(), 1.0);
    }

    #[test]
    fn decimals_are_exact() {
        let e = parse_surd("0.125").unwrap();
        assert_eq!(e.kind(), SurdKind::Decimal);
        assert_eq!(e.as_rational(), Some((big(1), big(8))));
        let e = parse_surd("25e-2").unwrap();
        assert_eq!(e.as_rational(), Some((big(1), big(4))));
    }

    #[test]
    fn mixed_radicands_stay_separate() {
        let e = parse_surd("1/sqrt(2) - 1/sqrt(3)").unwrap();
        assert!(e.quadratic().is_none());
        let want = 1.0 / 2f64.sqrt() - 1.0 / 3f64.sqrt();
        assert!((e.to_f64() - want).abs() < 3e-16);
    }

    #[test]
    fn one_minus_inverse_root_folds() {
        let e = parse_surd("1 - 1/sqrt(2)").unwrap();
        let q = e.quadratic().unwrap();
        assert_eq!(q.to_string(), "(2 - 1*sqrt(2))/2");
    }

    #[test]
    fn square_factors_are_extracted() {
        let q = parse_surd("sqrt(8)").unwrap().quadratic().unwrap();
        assert_eq!(q.to_string(), "(0 + 2*sqrt(2))/1");
        let q = parse_surd("sqrt(9/4)").unwrap().quadratic().unwrap();
        assert_eq!(q.as_rational(), Some((big(3), big(2))));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_surd("1/") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        match parse_surd("sqrt(2") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_surd("abc"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(parse_surd("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_surd(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_surd("sqrt(2)*sqrt(3)"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn comparisons_are_exact() {
        let x = parse_surd("sqrt(1/2)").unwrap().quadratic().unwrap();
        assert_eq!(x.cmp_ratio(&big(2), &big(3)), Ordering::Greater);
        assert_eq!(x.cmp_ratio(&big(5), &big(7)), Ordering::Less);
        // 70/99 < 1/sqrt 2 < 99/140
        assert_eq!(x.cmp_ratio(&big(70), &big(99)), Ordering::Greater);
        assert_eq!(x.cmp_ratio(&big(99), &big(140)), Ordering::Less);
        let h = QuadSurd::rational(1, 2).unwrap();
        assert_eq!(h.cmp_ratio(&big(2), &big(4)), Ordering::Equal);
    }

    #[test]
    fn scaled_floor_handles_negative_radical() {
        // 5 - 7/sqrt 2 = 0.0502525...
        let c = parse_surd("5 - 7*sqrt(1/2)").unwrap().quadratic().unwrap();
        assert!((c.to_f64() - (5.0 - 7.0 / 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(c.scaled_floor(&big(10_000)), big(502));
    }
}
