//! Exact arithmetic primitives.
//!
//! Everything downstream depends on this module being exact: big integers and
//! rationals come from the `num` crates, and the three domain-specific types
//! are implemented here:
//!
//! * [`EisensteinInt`]: Z[rho] with rho^2 + rho + 1 = 0, the coefficient ring
//!   for Picard eigenspace traces.
//! * [`QuadInt`]: Z[sqrt(d)] with integer coordinates, enough to express the
//!   quadratic Hecke eigenvalues that appear in two-dimensional cusp spaces.
//! * [`FieldCtx`]: a small finite field F_q, q = p^n <= 2^20, with
//!   table-driven multiplication and characters, built once and shared by the
//!   census enumerations.

mod eisenstein;
mod field;
mod quad;

pub use eisenstein::EisensteinInt;
pub(crate) use field::is_prime;
pub use field::{split_prime_power, Fe, FieldCtx, FieldError};
pub use quad::{parse_quad, ParseQuadError, QuadInt};

use num_bigint::BigInt;
use num_traits::Zero;

/// Types with a multiplicative algebraic norm down to Z.
pub trait AlgebraicNorm {
    fn algebraic_norm(&self) -> BigInt;
}

impl AlgebraicNorm for BigInt {
    fn algebraic_norm(&self) -> BigInt {
        self.clone()
    }
}

/// Whether the rational prime `ell` divides the algebraic norm of `x`.
///
/// This is the working definition of "ell divides x" used by the congruence
/// checks: a congruence a = b (mod ell) between algebraic integers is
/// verified as ell | N(a - b).
pub fn norm_divisible<T: AlgebraicNorm>(x: &T, ell: u64) -> bool {
    assert!(ell > 0, "modulus must be positive");
    (x.algebraic_norm() % BigInt::from(ell)).is_zero()
}
