//! Gaussian rationals: the field Q(i) with exact, canonical arithmetic.
//!
//! Every value is stored as a pair of reduced [`BigRational`]s, so two
//! values are equal exactly when their fields are equal. The textual form
//! follows a small literal grammar:
//!
//! ```text
//! COMPLEX := RAT | [RAT] SIGN [RAT] "i" | [RAT] "i"
//! RAT     := INT | INT "/" POSINT
//! ```
//!
//! A missing coefficient in front of `i` means 1, and no whitespace is
//! allowed anywhere in a literal.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Error produced while reading a scalar literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected {found} at position {pos} in scalar literal")]
    Unexpected { pos: usize, found: String },
    #[error("zero denominator at position {pos} in scalar literal")]
    ZeroDenominator { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Unexpected { pos, .. } | ParseError::ZeroDenominator { pos } => *pos,
        }
    }
}

/// An element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        // Ratio keeps itself reduced with a positive denominator.
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den + 0i`. Panics on a zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussianRational {
            re: BigRational::new(re.0.into(), re.1.into()),
            im: BigRational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// |z|^2, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_real() {
            return Ok(Self::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.checked_inv()?)
    }

    /// Parses a literal, reporting the 0-based byte position of the first
    /// offending character.
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        Parser::new(text).complex()
    }

    /// Canonical literal: zero imaginary parts are omitted, integers have no
    /// `/1`, and a unit coefficient on `i` is written as a bare `i`.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        if self.is_real() && rhs.is_real() {
            return GaussianRational::real(&self.re + &rhs.re);
        }
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        if self.is_real() && rhs.is_real() {
            return GaussianRational::real(&self.re - &rhs.re);
        }
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.is_zero() || rhs.is_zero() {
            return GaussianRational::zero();
        }
        match (self.is_real(), rhs.is_real()) {
            (true, true) => GaussianRational::real(&self.re * &rhs.re),
            (true, false) => GaussianRational {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            },
            (false, true) => GaussianRational {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            },
            (false, false) => GaussianRational {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

/// Panics on division by zero; use [`GaussianRational::checked_div`] when the
/// divisor is not known to be nonzero.
impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_im = |f: &mut fmt::Formatter<'_>, im: &BigRational| {
            if im.is_one() {
                write!(f, "i")
            } else {
                write!(f, "{im}i")
            }
        };
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            if self.im == -BigRational::one() {
                return write!(f, "-i");
            }
            return write_im(f, &self.im);
        }
        write!(f, "{}", self.re)?;
        if self.im.is_negative() {
            write!(f, "-")?;
        } else {
            write!(f, "+")?;
        }
        write_im(f, &self.im.abs())
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussianRational {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        Self::parse(s)
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.format())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<u8> {
        self.bytes.get(self.pos + offset).copied()
    }

    fn unexpected(&self) -> ParseError {
        let found = match self.peek() {
            Some(b) => format!("character '{}'", b as char),
            None => "end of input".to_string(),
        };
        ParseError::Unexpected {
            pos: self.pos,
            found,
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).ok()?;
        s.parse().ok()
    }

    /// `[SIGN] DIGITS ["/" DIGITS]`, only if digits follow the optional sign.
    fn rational(&mut self, allow_sign: bool) -> std::result::Result<Option<BigRational>, ParseError> {
        let signed = allow_sign && matches!(self.peek(), Some(b'+' | b'-'));
        let first_digit = if signed { self.peek_at(1) } else { self.peek() };
        if !matches!(first_digit, Some(b'0'..=b'9')) {
            return Ok(None);
        }
        let negative = signed && self.peek() == Some(b'-');
        if signed {
            self.pos += 1;
        }
        let mut num = self.digits().ok_or_else(|| self.unexpected())?;
        if negative {
            num = -num;
        }
        if self.peek() != Some(b'/') {
            return Ok(Some(BigRational::from_integer(num)));
        }
        self.pos += 1;
        let den_pos = self.pos;
        let den = self.digits().ok_or_else(|| self.unexpected())?;
        if den.is_zero() {
            return Err(ParseError::ZeroDenominator { pos: den_pos });
        }
        Ok(Some(BigRational::new(num, den)))
    }

    fn expect_end(&self) -> std::result::Result<(), ParseError> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn complex(mut self) -> std::result::Result<GaussianRational, ParseError> {
        let first = self.rational(true)?;
        match self.peek() {
            None => match first {
                Some(re) => Ok(GaussianRational::real(re)),
                None => Err(self.unexpected()),
            },
            Some(b'i') => {
                self.pos += 1;
                self.expect_end()?;
                Ok(GaussianRational {
                    re: BigRational::zero(),
                    im: first.unwrap_or_else(BigRational::one),
                })
            }
            Some(sign @ (b'+' | b'-')) => {
                self.pos += 1;
                let mut im = self.rational(false)?.unwrap_or_else(BigRational::one);
                if self.peek() != Some(b'i') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                self.expect_end()?;
                if sign == b'-' {
                    im = -im;
                }
                Ok(GaussianRational {
                    re: first.unwrap_or_else(BigRational::zero),
                    im,
                })
            }
            Some(_) => Err(self.unexpected()),
        }
    }
}
