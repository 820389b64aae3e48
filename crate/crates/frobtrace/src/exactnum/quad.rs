//! Integers a + b*sqrt(d) with integer coordinates.
//!
//! Hecke eigenvalues on two-dimensional level-1 cusp spaces generate real
//! quadratic fields; integer coordinates in the sqrt(d) basis are sufficient
//! for every space this crate touches, so no half-integer support is needed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::AlgebraicNorm;

/// A quadratic integer a + b*sqrt(d); `d` must be a non-square.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadInt {
    pub d: i64,
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    pub fn new(d: i64, a: BigInt, b: BigInt) -> Self {
        QuadInt { d, a, b }
    }

    pub fn from_i64(d: i64, a: i64, b: i64) -> Self {
        QuadInt::new(d, BigInt::from(a), BigInt::from(b))
    }

    pub fn rational(d: i64, a: BigInt) -> Self {
        QuadInt::new(d, a, BigInt::zero())
    }

    pub fn conj(&self) -> Self {
        QuadInt::new(self.d, self.a.clone(), -&self.b)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check_same_field(&self, rhs: &QuadInt) {
        assert_eq!(
            self.d, rhs.d,
            "mixed quadratic fields: sqrt({}) vs sqrt({})",
            self.d, rhs.d
        );
    }
}

impl AlgebraicNorm for QuadInt {
    /// N(a + b*sqrt(d)) = a^2 - d*b^2.
    fn algebraic_norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(self.d) * &self.b * &self.b
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        self.check_same_field(rhs);
        QuadInt::new(self.d, &self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        self.check_same_field(rhs);
        QuadInt::new(self.d, &self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(self.d, -&self.a, -&self.b)
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    /// (a + b*sqrt(d))(c + e*sqrt(d)) = (ac + d*be) + (ae + bc)*sqrt(d).
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        self.check_same_field(rhs);
        QuadInt::new(
            self.d,
            &self.a * &rhs.a + BigInt::from(self.d) * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl fmt::Display for QuadInt {
    /// Canonical form `a+b*sqrt(d)`, omitting zero parts ("0" for zero).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root_part = if self.b == BigInt::one() {
            format!("sqrt({})", self.d)
        } else if self.b == -BigInt::one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.b, self.d)
        };
        if self.a.is_zero() {
            write!(f, "{}", root_part)
        } else if root_part.starts_with('-') {
            write!(f, "{}{}", self.a, root_part)
        } else {
            write!(f, "{}+{}", self.a, root_part)
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("malformed quadratic integer literal: {0}")]
pub struct ParseQuadError(String);

/// Parses `a`, `a+b*sqrt(d)`, `a-b*sqrt(d)`, `b*sqrt(d)`, `sqrt(d)`.
/// A bare integer gets field discriminant `d`.
pub fn parse_quad(s: &str, d: i64) -> Result<QuadInt, ParseQuadError> {
    let s = s.trim();
    let bad = || ParseQuadError(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let Some(root_pos) = s.find("sqrt(") else {
        let a = s.parse::<BigInt>().map_err(|_| bad())?;
        return Ok(QuadInt::rational(d, a));
    };
    let inner = &s[root_pos + 5..];
    let close = inner.find(')').ok_or_else(bad)?;
    let parsed_d = inner[..close].parse::<i64>().map_err(|_| bad())?;
    if parsed_d != d {
        return Err(bad());
    }
    if !inner[close + 1..].trim().is_empty() {
        return Err(bad());
    }
    let head = &s[..root_pos];
    // head is "", "-", "b*", "a+b*", "a-b*", "a+", "a-"
    let (a_str, b_str) = match head.strip_suffix('*') {
        Some(rest) => match rest[1..].rfind(['+', '-']) {
            Some(i) => (&rest[..i + 1], &rest[i + 1..]),
            None => ("0", rest),
        },
        None => {
            if head.is_empty() || head == "-" || head == "+" {
                ("0", if head == "-" { "-1" } else { "1" })
            } else {
                // forms like "a+" / "a-"
                let sign = head.chars().last().ok_or_else(bad)?;
                if sign != '+' && sign != '-' {
                    return Err(bad());
                }
                (&head[..head.len() - 1], if sign == '-' { "-1" } else { "1" })
            }
        }
    };
    let a = if a_str.is_empty() { BigInt::zero() } else { a_str.parse().map_err(|_| bad())? };
    let b = match b_str {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        _ => b_str.parse().map_err(|_| bad())?,
    };
    Ok(QuadInt::new(d, a, b))
}
