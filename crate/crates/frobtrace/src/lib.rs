//! Exact trace computations for modular forms driven by point counts on
//! curves over small finite fields.
//!
//! The library is organized as a pipeline:
//!
//! * [`exactnum`] - exact arithmetic: big integers and rationals, quadratic
//!   and Eisenstein integers, and table-driven small finite fields.
//! * [`census`] - exhaustive isomorphism-class censuses of curves of genus 1,
//!   2 and 3 and of Picard curves, keyed by Frobenius data.
//! * [`qexpansion`] - classical q-expansions (Eisenstein series, delta) and
//!   the Hecke action on level-1 cusp spaces, used as an independent oracle.
//! * [`motives`] - dimension formulas and the symbolic expression algebra for
//!   cohomological correction terms.
//! * [`localsys`] - symplectic characters of Frobenius data and the weighted
//!   class streams over the moduli strata of abelian varieties.
//! * [`hecke`] - the user-facing trace pipelines (elliptic, degree 2 and 3),
//!   lift checks and congruence verifications.
//! * [`picard`] - eigenspace traces for the family of Picard curves.
//!
//! All arithmetic is exact; every division asserts exactness and every trace
//! is produced as an integer (or an explicit quadratic or Eisenstein integer).

pub mod census;
pub mod exactnum;
pub mod hecke;
pub mod localsys;
pub mod motives;
pub mod picard;
pub mod qexpansion;
