//! Integers of the form a + b*rho with rho^2 + rho + 1 = 0 (so rho is a
//! primitive cube root of unity and rho^2 = -1 - rho).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::AlgebraicNorm;

/// An Eisenstein integer a + b*rho.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl EisensteinInt {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        EisensteinInt { a, b }
    }

    pub fn from_i64(a: i64, b: i64) -> Self {
        EisensteinInt::new(BigInt::from(a), BigInt::from(b))
    }

    pub fn zero() -> Self {
        EisensteinInt::new(BigInt::zero(), BigInt::zero())
    }

    pub fn one() -> Self {
        EisensteinInt::new(BigInt::one(), BigInt::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Complex conjugation, which maps rho to rho^2 = -1 - rho:
    /// conj(a + b*rho) = (a - b) - b*rho.
    pub fn conj(&self) -> Self {
        EisensteinInt::new(&self.a - &self.b, -&self.b)
    }

    /// Multiplication by the rational integer n.
    pub fn scale(&self, n: &BigInt) -> Self {
        EisensteinInt::new(&self.a * n, &self.b * n)
    }

    /// Exact division by a rational integer; panics when not exact.
    pub fn div_exact(&self, n: &BigInt) -> Self {
        assert!(!n.is_zero(), "division by zero");
        let (qa, ra) = num_integer::Integer::div_rem(&self.a, n);
        let (qb, rb) = num_integer::Integer::div_rem(&self.b, n);
        assert!(
            ra.is_zero() && rb.is_zero(),
            "inexact division of Eisenstein integer {} by {}",
            self,
            n
        );
        EisensteinInt::new(qa, qb)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = EisensteinInt::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl AlgebraicNorm for EisensteinInt {
    /// N(a + b*rho) = (a + b*rho)(a + b*rho^2) = a^2 - a*b + b^2 >= 0.
    fn algebraic_norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }
}

impl Add for &EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, rhs: &EisensteinInt) -> EisensteinInt {
        EisensteinInt::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, rhs: &EisensteinInt) -> EisensteinInt {
        EisensteinInt::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Neg for &EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        EisensteinInt::new(-&self.a, -&self.b)
    }
}

impl Mul for &EisensteinInt {
    type Output = EisensteinInt;
    /// (a + b*rho)(c + d*rho) = ac + (ad + bc)*rho + bd*rho^2
    ///                        = (ac - bd) + (ad + bc - bd)*rho.
    fn mul(self, rhs: &EisensteinInt) -> EisensteinInt {
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        EisensteinInt::new(ac - &bd, ad_bc - bd)
    }
}

impl fmt::Display for EisensteinInt {
    /// Canonical form `a+b*rho`, omitting zero parts ("0" for zero).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let rho_part = if self.b == BigInt::one() {
            "rho".to_string()
        } else if self.b == -BigInt::one() {
            "-rho".to_string()
        } else {
            format!("{}*rho", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{}", rho_part)
        } else if rho_part.starts_with('-') {
            write!(f, "{}{}", self.a, rho_part)
        } else {
            write!(f, "{}+{}", self.a, rho_part)
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("malformed Eisenstein integer literal: {0}")]
pub struct ParseEisensteinError(String);

impl FromStr for EisensteinInt {
    type Err = ParseEisensteinError;

    /// Parses `a`, `b*rho`, `a+b*rho`, `a-b*rho` (also bare `rho`, `-rho`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseEisensteinError(s.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        // Split at the last +/- that is not the leading sign; the split
        // position only counts when the tail is the rho term.
        let body = &s[1..];
        let split = body
            .rfind(['+', '-'])
            .map(|i| i + 1)
            .filter(|&i| s[i..].contains("rho"));
        let (a_str, b_str) = match split {
            Some(i) => (&s[..i], &s[i..]),
            None if s.contains("rho") => ("0", s),
            None => (s, ""),
        };
        let a = if a_str.is_empty() {
            BigInt::zero()
        } else {
            a_str.parse::<BigInt>().map_err(|_| bad())?
        };
        let b = if b_str.is_empty() {
            BigInt::zero()
        } else {
            let core = b_str.trim_end_matches("rho");
            match core {
                "" | "+" => BigInt::one(),
                "-" => -BigInt::one(),
                _ => {
                    let core = core.strip_suffix('*').ok_or_else(bad)?;
                    let core = if core == "+" { "1" } else { core };
                    core.parse::<BigInt>().map_err(|_| bad())?
                }
            }
        };
        Ok(EisensteinInt::new(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ei(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::from_i64(a, b)
    }

    #[test]
    fn multiplication_table_spot_checks() {
        // rho * rho = -1 - rho
        assert_eq!(&ei(0, 1) * &ei(0, 1), ei(-1, -1));
        // rho^3 = 1
        assert_eq!(ei(0, 1).pow(3), ei(1, 0));
        // (1 - rho)(1 - rho^2) = N(1 - rho) = 3
        assert_eq!(ei(1, -1).algebraic_norm(), BigInt::from(3));
    }

    #[test]
    fn conjugation_is_an_involution_and_fixes_norm() {
        let x = ei(7, -4);
        assert_eq!(x.conj().conj(), x);
        // x * conj(x) is the norm as a rational integer inside Z[rho].
        assert_eq!(
            &x * &x.conj(),
            EisensteinInt::new(x.algebraic_norm(), BigInt::zero())
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        for (a, b, s) in [
            (3, 2, "3+2*rho"),
            (3, -2, "3-2*rho"),
            (0, 5, "5*rho"),
            (-4, 0, "-4"),
            (0, 0, "0"),
            (0, 1, "rho"),
            (0, -1, "-rho"),
            (-1, -1, "-1-rho"),
        ] {
            let x = ei(a, b);
            assert_eq!(x.to_string(), s);
            assert_eq!(s.parse::<EisensteinInt>().unwrap(), x);
        }
        // Forms produced by hand-written tables.
        assert_eq!("759+261*rho".parse::<EisensteinInt>().unwrap(), ei(759, 261));
        assert_eq!("-4137+1683*rho".parse::<EisensteinInt>().unwrap(), ei(-4137, 1683));
        assert_eq!("12900-114849*rho".parse::<EisensteinInt>().unwrap(), ei(12900, -114849));
        assert!("rho*rho".parse::<EisensteinInt>().is_err());
        assert!("".parse::<EisensteinInt>().is_err());
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let x = ei(a, b);
            let y = ei(c, d);
            prop_assert_eq!(
                (&x * &y).algebraic_norm(),
                x.algebraic_norm() * y.algebraic_norm()
            );
        }

        #[test]
        fn ring_axioms_on_random_triples(
            a in -20i64..20, b in -20i64..20,
            c in -20i64..20, d in -20i64..20,
            e in -20i64..20, f in -20i64..20
        ) {
            let (x, y, z) = (ei(a, b), ei(c, d), ei(e, f));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn parse_round_trips_everything(a in -1000i64..1000, b in -1000i64..1000) {
            let x = ei(a, b);
            prop_assert_eq!(x.to_string().parse::<EisensteinInt>().unwrap(), x);
        }
    }
}
