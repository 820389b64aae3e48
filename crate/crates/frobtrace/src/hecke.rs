//! Top-level pipelines turning censuses into Hecke traces and eigenvalues
//! for degrees 1 to 3, plus lift and congruence verification.
//!
//! Degree 1: 1 + Tr(T(q), S_k) equals minus the census-weighted character
//! sum over elliptic classes, so the trace follows from one weighted sum.
//! Degree 2: Tr(T(q), S_{j,k}) = -Tr(F_q, e_c(A_2, V_{a,b})) + Tr(F_q,
//! e_extra(a,b)) with (a, b) = (j+k-3, k-3); the first term is a weighted
//! character sum over the degree-2 stream, the second a motive-expression
//! trace whose elliptic symbols resolve through the degree-1 pipeline at
//! the same q. Degree 3 solves e_c(A_3, V_{a,b,c}) = S[a-b, b-c, c+4] +
//! e_extra(a,b,c) for the S-trace.
//!
//! Traces at prime-power q are raw Frobenius traces: exact and internally
//! consistent, but not normalized to any Hecke-operator convention at
//! composite q. Reports carry a flag saying so.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::census::{
    build_census_g1, build_census_g2, build_census_g3, Census, CensusError, G3Census,
    FORMAT_VERSION,
};
use crate::exactnum::{parse_quad, split_prime_power, QuadInt};
use crate::localsys::{
    assemble_a2, assemble_a3, ec_trace_a1, weighted_character_sum, HighestWeight, LocalSysError,
};
use crate::motives::{e2_extra, e3_extra_trace, trace as motive_trace, MotivesError, TraceProvider};
use crate::qexpansion::{hecke_eigen, HeckeEigenvalue, QExpansionError};

#[derive(Debug, Error)]
pub enum HeckeError {
    #[error("weight {0} must be an even integer >= 4")]
    BadWeight(u32),
    #[error("degree-2 weight (j, k) = ({j}, {k}) is unsupported: {why}")]
    BadSiegelWeight { j: u32, k: u32, why: String },
    #[error("degree-3 weight ({a}, {b}, {c}) must satisfy a >= b >= c")]
    BadTriple { a: u32, b: u32, c: u32 },
    #[error("the supplied censuses sit at q = {have}, the request at q = {want}")]
    WrongQ { want: u64, have: u64 },
    #[error("no censuses supplied for q = {0}")]
    MissingCensus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("lift check supports weights 10 and 12, got {0}")]
    UnsupportedLift(u32),
    #[error("eigenvalue table has no entry for p = {0}")]
    TableMissingPrime(u64),
    #[error("eigenvalue table line {line}: {why}")]
    TableParse { line: usize, why: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    LocalSys(#[from] LocalSysError),
    #[error(transparent)]
    Motives(#[from] MotivesError),
    #[error(transparent)]
    QExpansion(#[from] QExpansionError),
    #[error(transparent)]
    Census(#[from] CensusError),
}

/// An exact trace (or eigenvalue, when the space is one-dimensional) of
/// a Hecke operator at q, with the provenance needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub degree: u8,
    /// Space parameters: (k) in degree 1, (j, k) in degree 2,
    /// (j1, j2, k) in degree 3.
    pub weight: Vec<u32>,
    pub q: u64,
    pub trace: BigInt,
    /// Dimension of the cusp space when a curated table knows it.
    pub dim_hint: Option<u32>,
    pub census_version: u32,
    pub formula: &'static str,
    /// Set at composite q: the value is the raw Frobenius trace, not
    /// normalized to a Hecke-operator convention.
    pub raw_frobenius: bool,
}

impl fmt::Display for TraceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = match self.weight.as_slice() {
            [k] => format!("S_{k}"),
            [j, k] => format!("S_{{{j},{k}}}"),
            [j1, j2, k] => format!("S_{{{j1},{j2},{k}}}"),
            _ => unreachable!("weights have 1 to 3 entries"),
        };
        if self.dim_hint == Some(1) {
            write!(f, "eigenvalue lambda({}) on {space} = {}", self.q, self.trace)?;
        } else {
            write!(f, "trace of T({}) on {space} = {}", self.q, self.trace)?;
        }
        if self.raw_frobenius {
            write!(f, " [raw Frobenius trace at composite q]")?;
        }
        Ok(())
    }
}

pub fn is_prime(q: u64) -> bool {
    split_prime_power(q) == Some((q, 1))
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Curated dimensions of degree-2 cusp spaces, only for the weights the
/// golden and vanishing checks need.
fn dim_hint_deg2(j: u32, k: u32) -> Option<u32> {
    match (j, k) {
        (0, 3..=9) | (2, 4) => Some(0),
        (0, 10) | (0, 12) | (0, 35) | (0, 43) | (14, 7) | (4, 17) | (4, 10) => Some(1),
        _ => None,
    }
}

/// Curated dimensions of degree-3 cusp spaces.
fn dim_hint_deg3(j1: u32, j2: u32, k: u32) -> Option<u32> {
    match (j1, j2, k) {
        (6, 3, 6) | (4, 2, 8) | (2, 1, 14) => Some(1),
        _ => None,
    }
}

/// Trace of T(q) on the elliptic cusp space S_k.
pub fn trace_t_sl2(k: u32, q: u64, census_g1: &Census) -> Result<BigInt, HeckeError> {
    if !k.is_multiple_of(2) || k < 4 {
        return Err(HeckeError::BadWeight(k));
    }
    if census_g1.q != q {
        return Err(HeckeError::WrongQ {
            want: q,
            have: census_g1.q,
        });
    }
    Ok(-ec_trace_a1(u64::from(k) - 2, census_g1)? - 1)
}

/// Elliptic symbol resolver backed by the degree-1 pipeline at q.
fn s1_resolver(q: u64, g1: &Census) -> impl Fn(u32) -> Option<BigInt> + '_ {
    move |n| trace_t_sl2(n, q, g1).ok()
}

/// Censuses backing the degree-2 pipeline at one q: genus 2 at q, elliptic
/// classes at q (with automorphism orders) and at q^2.
#[derive(Clone, Debug)]
pub struct Degree2Data {
    g2: Census,
    g1: Census,
    g1_sq: Census,
}

impl Degree2Data {
    pub fn build(q: u64) -> Result<Degree2Data, HeckeError> {
        Ok(Degree2Data {
            g2: build_census_g2(q, false)?,
            g1: build_census_g1(q)?,
            g1_sq: build_census_g1(q * q)?,
        })
    }

    /// Wraps externally supplied censuses (e.g. cached ones). Consistency
    /// of families and sizes is enforced when the data is used.
    pub fn from_parts(g2: Census, g1: Census, g1_sq: Census) -> Degree2Data {
        Degree2Data { g2, g1, g1_sq }
    }

    pub fn q(&self) -> u64 {
        self.g2.q
    }

    pub fn g1(&self) -> &Census {
        &self.g1
    }
}

/// Censuses backing the degree-3 pipeline at one q: the genus-3 pair plus
/// genus 2 and elliptic classes with automorphism orders at q, and
/// elliptic censuses at q^2 and q^3.
#[derive(Clone, Debug)]
pub struct Degree3Data {
    g3: G3Census,
    g2: Census,
    g1: Census,
    g1_sq: Census,
    g1_cube: Census,
}

impl Degree3Data {
    pub fn build(q: u64) -> Result<Degree3Data, HeckeError> {
        Ok(Degree3Data {
            g3: build_census_g3(q, true)?,
            g2: build_census_g2(q, true)?,
            g1: build_census_g1(q)?,
            g1_sq: build_census_g1(q * q)?,
            g1_cube: build_census_g1(q * q * q)?,
        })
    }

    pub fn from_parts(
        g3: G3Census,
        g2: Census,
        g1: Census,
        g1_sq: Census,
        g1_cube: Census,
    ) -> Degree3Data {
        Degree3Data {
            g3,
            g2,
            g1,
            g1_sq,
            g1_cube,
        }
    }

    pub fn q(&self) -> u64 {
        self.g3.quartic.q
    }
}

/// Trace of T(q) on the degree-2 cusp space S_{j,k} via the compact-type
/// trace identity at (a, b) = (j+k-3, k-3).
pub fn trace_t_siegel2(
    j: u32,
    k: u32,
    q: u64,
    data: &Degree2Data,
) -> Result<TraceReport, HeckeError> {
    if !j.is_multiple_of(2) {
        return Err(HeckeError::BadSiegelWeight {
            j,
            k,
            why: "j must be even".into(),
        });
    }
    if k < 3 || (j == 0 && k == 3) {
        return Err(HeckeError::BadSiegelWeight {
            j,
            k,
            why: "k must be at least 3, and (0, 3) maps to the trivial weight".into(),
        });
    }
    if data.q() != q {
        return Err(HeckeError::WrongQ {
            want: q,
            have: data.q(),
        });
    }
    let (a, b) = (j + k - 3, k - 3);
    let lam = HighestWeight::new(&[u64::from(a), u64::from(b)])?;
    let stream = assemble_a2(&data.g2, &data.g1, &data.g1_sq)?;
    let ec = weighted_character_sum(&lam, &stream)?;
    let provider = TraceProvider::new(q, s1_resolver(q, &data.g1));
    let extra = motive_trace(&e2_extra(a, b)?, &provider)?;
    let trace = extra - ec;
    let dim_hint = dim_hint_deg2(j, k);
    if dim_hint == Some(0) && !trace.is_zero() {
        return Err(HeckeError::Internal(format!(
            "S_{{{j},{k}}} is zero-dimensional but the trace at q = {q} is {trace}"
        )));
    }
    Ok(TraceReport {
        degree: 2,
        weight: vec![j, k],
        q,
        trace,
        dim_hint,
        census_version: FORMAT_VERSION,
        formula: "degree-2 trace identity",
        raw_frobenius: !is_prime(q),
    })
}

/// Trace of T(q) on the degree-3 cusp space S_{a-b, b-c, c+4}, solving the
/// degree-3 identity for the S-term.
pub fn trace_t_siegel3(
    a: u32,
    b: u32,
    c: u32,
    q: u64,
    data: &Degree3Data,
) -> Result<TraceReport, HeckeError> {
    if a < b || b < c {
        return Err(HeckeError::BadTriple { a, b, c });
    }
    if data.q() != q {
        return Err(HeckeError::WrongQ {
            want: q,
            have: data.q(),
        });
    }
    let lam = HighestWeight::new(&[u64::from(a), u64::from(b), u64::from(c)])?;
    let a3 = assemble_a3(&data.g3, &data.g2, &data.g1, &data.g1_sq, &data.g1_cube)?;
    let ec3 = weighted_character_sum(&lam, &a3)?;
    let a2 = assemble_a2(&data.g2, &data.g1, &data.g1_sq)?;
    let ec_a2 = |x: u32, y: u32| -> BigInt {
        let inner = HighestWeight::new(&[u64::from(x), u64::from(y)])
            .expect("inner degree-2 weights are monotone");
        weighted_character_sum(&inner, &a2).expect("degree-2 trace is integral")
    };
    let provider = TraceProvider::new(q, s1_resolver(q, &data.g1));
    let extra = e3_extra_trace(a, b, c, &provider, &ec_a2)?;
    let trace = ec3 - extra;
    let (j1, j2, kk) = (a - b, b - c, c + 4);
    let dim_hint = dim_hint_deg3(j1, j2, kk);
    if dim_hint == Some(0) && !trace.is_zero() {
        return Err(HeckeError::Internal(format!(
            "S_{{{j1},{j2},{kk}}} is zero-dimensional but the trace at q = {q} is {trace}"
        )));
    }
    Ok(TraceReport {
        degree: 3,
        weight: vec![j1, j2, kk],
        q,
        trace,
        dim_hint,
        census_version: FORMAT_VERSION,
        formula: "degree-3 motive identity",
        raw_frobenius: !is_prime(q),
    })
}

/// The unique rational Hecke eigenvalue of a one-dimensional cusp space.
fn rational_eigenvalue(k: u32, p: u64) -> Result<BigInt, HeckeError> {
    let prec = 2 * p as usize + 2;
    let eigen = hecke_eigen(k, p, prec)?;
    match eigen.as_slice() {
        [HeckeEigenvalue::Rational(v)] => Ok(v.clone()),
        other => Err(HeckeError::Internal(format!(
            "S_{k} should be one-dimensional rational, got {} eigenvalues",
            other.len()
        ))),
    }
}

/// Checks the lift identity lambda(p) = p^{k-2} + a(p) + p^{k-1} for the
/// one-dimensional lift spaces of weight 10 and 12, with a(p) taken from
/// the elliptic eigenform of weight 2k-2.
pub fn sk_lift_check(k: u32, p: u64, data: &Degree2Data) -> Result<bool, HeckeError> {
    if k != 10 && k != 12 {
        return Err(HeckeError::UnsupportedLift(k));
    }
    if !is_prime(p) {
        return Err(HeckeError::NotPrime(p));
    }
    let lhs = trace_t_siegel2(0, k, p, data)?.trace;
    let ap = rational_eigenvalue(2 * k - 2, p)?;
    let rhs = BigInt::from(p).pow(k - 2) + ap + BigInt::from(p).pow(k - 1);
    Ok(lhs == rhs)
}

/// One prime's verdict in a congruence check: the product over eigenvalue
/// conjugates of (lambda(p) - right side), and whether ell divides it.
#[derive(Clone, Debug)]
pub struct CongruenceVerdict {
    pub p: u64,
    pub norm: BigInt,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub modulus: u64,
    pub verdicts: Vec<CongruenceVerdict>,
}

impl CongruenceReport {
    pub fn all_pass(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.pass)
    }
}

impl fmt::Display for CongruenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            writeln!(
                f,
                "p = {}: {} (norm of difference {}, modulus {})",
                v.p,
                if v.pass { "pass" } else { "FAIL" },
                v.norm,
                self.modulus
            )?;
        }
        Ok(())
    }
}

/// Product over an eigenvalue list of (base - e): quadratic conjugate
/// pairs contribute their algebraic norm, rational entries their plain
/// difference. The product of a complete conjugate set is rational.
fn norm_product(base: &BigInt, eigen: &[HeckeEigenvalue]) -> Result<BigInt, HeckeError> {
    let d = eigen
        .iter()
        .find_map(|e| match e {
            HeckeEigenvalue::Quadratic(v) => Some(v.d),
            HeckeEigenvalue::Rational(_) => None,
        })
        .unwrap_or(1);
    let mut acc = QuadInt::rational(d, BigInt::one());
    for e in eigen {
        let term = match e {
            HeckeEigenvalue::Rational(v) => QuadInt::rational(d, base - v),
            HeckeEigenvalue::Quadratic(v) => QuadInt::new(d, base - &v.a, -v.b.clone()),
        };
        acc = &acc * &term;
    }
    if !acc.is_rational() {
        return Err(HeckeError::Internal(
            "eigenvalue conjugates do not close under the norm product".into(),
        ));
    }
    Ok(acc.a)
}

fn divisible(n: &BigInt, ell: u64) -> bool {
    n.is_multiple_of(&BigInt::from(ell))
}

/// Checks lambda(p) = p^{k-2} + a(p) + p^{j+k-1} (mod ell) for all primes
/// p <= p_max, with lambda from the degree-2 pipeline and a(p) from the
/// weight-f_weight elliptic eigenforms. Quadratic eigenvalue fields are
/// handled through the norm of the difference.
pub fn harder_check_deg2(
    j: u32,
    k: u32,
    ell: u64,
    f_weight: u32,
    p_max: u64,
    data: &[Degree2Data],
) -> Result<CongruenceReport, HeckeError> {
    let mut verdicts = Vec::new();
    for p in primes_up_to(p_max) {
        let d = data
            .iter()
            .find(|d| d.q() == p)
            .ok_or(HeckeError::MissingCensus(p))?;
        let lambda = trace_t_siegel2(j, k, p, d)?.trace;
        let prec = 3 * p as usize + 2;
        let eigen = hecke_eigen(f_weight, p, prec)?;
        if eigen.is_empty() {
            return Err(HeckeError::Internal(format!(
                "S_{f_weight} has no cusp forms to compare against"
            )));
        }
        let base = lambda - BigInt::from(p).pow(k - 2) - BigInt::from(p).pow(j + k - 1);
        let norm = norm_product(&base, &eigen)?;
        let pass = divisible(&norm, ell);
        verdicts.push(CongruenceVerdict { p, norm, pass });
    }
    Ok(CongruenceReport {
        modulus: ell,
        verdicts,
    })
}

/// An eigenvalue in an ingested reference table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableValue {
    Rational(BigInt),
    Quadratic(QuadInt),
}

impl fmt::Display for TableValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableValue::Rational(v) => write!(f, "{v}"),
            TableValue::Quadratic(v) => write!(f, "{v}"),
        }
    }
}

/// An ingested eigenvalue table: `#` header lines, then `q value` rows
/// with exact decimal or `a+b*sqrt(d)` values.
#[derive(Clone, Debug, Default)]
pub struct EigenvalueTable {
    pub header: Vec<String>,
    pub entries: BTreeMap<u64, TableValue>,
}

impl EigenvalueTable {
    pub fn rational(&self, p: u64) -> Result<BigInt, HeckeError> {
        match self.entries.get(&p) {
            Some(TableValue::Rational(v)) => Ok(v.clone()),
            Some(TableValue::Quadratic(v)) => Err(HeckeError::TableParse {
                line: 0,
                why: format!("entry at p = {p} is quadratic ({v}), expected rational"),
            }),
            None => Err(HeckeError::TableMissingPrime(p)),
        }
    }
}

fn parse_table_value(s: &str) -> Result<TableValue, String> {
    if let Some(pos) = s.find("sqrt(") {
        let inner = &s[pos + 5..];
        let close = inner.find(')').ok_or("unclosed sqrt(")?;
        let d: i64 = inner[..close]
            .parse()
            .map_err(|_| format!("bad radicand in {s:?}"))?;
        let v = parse_quad(s, d).map_err(|e| e.to_string())?;
        Ok(TableValue::Quadratic(v))
    } else {
        s.parse::<BigInt>()
            .map(TableValue::Rational)
            .map_err(|_| format!("bad integer {s:?}"))
    }
}

pub fn parse_eigenvalue_table(text: &str) -> Result<EigenvalueTable, HeckeError> {
    let mut table = EigenvalueTable::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            table.header.push(h.trim().to_string());
            continue;
        }
        let err = |why: String| HeckeError::TableParse { line: idx + 1, why };
        let (q_str, val_str) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err("expected `q value`".into()))?;
        let q: u64 = q_str
            .parse()
            .map_err(|_| err(format!("bad q {q_str:?}")))?;
        let value = parse_table_value(val_str.trim()).map_err(err)?;
        if table.entries.insert(q, value).is_some() {
            return Err(HeckeError::TableParse {
                line: idx + 1,
                why: format!("duplicate entry for q = {q}"),
            });
        }
    }
    Ok(table)
}

/// The bundled eigenvalue reference table for the one-dimensional
/// degree-3 space of weight (2, 1, 14), primes up to 19.
pub fn weight_2_1_14_table() -> EigenvalueTable {
    parse_eigenvalue_table(include_str!("../tables/lambda_2_1_14.txt"))
        .expect("bundled table parses")
}

/// Parameters of a degree-3 congruence check: the weight triple of the
/// degree-3 space and the modulus and elliptic weights of the congruence.
#[derive(Clone, Copy, Debug)]
pub struct Deg3Congruence {
    pub weight: (u32, u32, u32),
    pub modulus: u64,
    pub f_weight: u32,
    pub g_weight: u32,
}

/// Checks lambda_F(p) = lambda_f(p) (p^{b+2} + lambda_g(p) + p^{a+3})
/// (mod ell) for all primes p <= p_max. lambda_F comes from the supplied
/// table, lambda_f from the one-dimensional space of weight f_weight, and
/// lambda_g from the (possibly quadratic) eigenforms of weight g_weight,
/// handled through the norm of the difference.
pub fn harder_check_deg3(
    check: &Deg3Congruence,
    lambda_table: &EigenvalueTable,
    p_max: u64,
) -> Result<CongruenceReport, HeckeError> {
    let (a, b, _) = check.weight;
    let (ell, f_weight, g_weight) = (check.modulus, check.f_weight, check.g_weight);
    let mut verdicts = Vec::new();
    for p in primes_up_to(p_max) {
        let lambda_f_big = lambda_table.rational(p)?;
        let af = rational_eigenvalue(f_weight, p)?;
        let prec = 3 * p as usize + 2;
        let g_eigen = hecke_eigen(g_weight, p, prec)?;
        if g_eigen.is_empty() {
            return Err(HeckeError::Internal(format!(
                "S_{g_weight} has no cusp forms to compare against"
            )));
        }
        // lambda_F - lambda_f (P + lambda_g) = (lambda_F - lambda_f P)
        // - lambda_f lambda_g, so scale the eigenvalues by lambda_f and
        // take the norm product around the shifted base.
        let pp = BigInt::from(p).pow(b + 2) + BigInt::from(p).pow(a + 3);
        let base = lambda_f_big - &af * pp;
        let scaled: Vec<HeckeEigenvalue> = g_eigen
            .iter()
            .map(|e| match e {
                HeckeEigenvalue::Rational(v) => HeckeEigenvalue::Rational(&af * v),
                HeckeEigenvalue::Quadratic(v) => {
                    HeckeEigenvalue::Quadratic(QuadInt::new(v.d, &af * &v.a, &af * &v.b))
                }
            })
            .collect();
        let norm = norm_product(&base, &scaled)?;
        let pass = divisible(&norm, ell);
        verdicts.push(CongruenceVerdict { p, norm, pass });
    }
    Ok(CongruenceReport {
        modulus: ell,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::LazyLock;

    use super::*;
    use crate::qexpansion::hecke_trace;

    static DEG2: LazyLock<BTreeMap<u64, Degree2Data>> = LazyLock::new(|| {
        [2u64, 3, 4, 5, 7]
            .into_iter()
            .map(|q| (q, Degree2Data::build(q).unwrap()))
            .collect()
    });

    static DEG3_Q2: LazyLock<Degree3Data> = LazyLock::new(|| Degree3Data::build(2).unwrap());

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn elliptic_traces_match_known_coefficients() {
        let c2 = build_census_g1(2).unwrap();
        let c3 = build_census_g1(3).unwrap();
        let c5 = build_census_g1(5).unwrap();
        assert_eq!(trace_t_sl2(12, 2, &c2).unwrap(), BigInt::from(-24));
        assert_eq!(trace_t_sl2(12, 3, &c3).unwrap(), BigInt::from(252));
        assert_eq!(trace_t_sl2(12, 5, &c5).unwrap(), BigInt::from(4830));
        for (q, c) in [(2, &c2), (3, &c3), (5, &c5)] {
            assert_eq!(trace_t_sl2(10, q, c).unwrap(), BigInt::zero());
        }
        let a16 = rational_eigenvalue(16, 2).unwrap();
        assert_eq!(trace_t_sl2(16, 2, &c2).unwrap(), a16);
        assert!(matches!(
            trace_t_sl2(13, 2, &c2),
            Err(HeckeError::BadWeight(13))
        ));
        assert!(matches!(
            trace_t_sl2(12, 3, &c2),
            Err(HeckeError::WrongQ { want: 3, have: 2 })
        ));
    }

    #[test]
    fn elliptic_traces_match_the_expansion_engine() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let census = build_census_g1(p).unwrap();
            for k in (12..=40).step_by(2) {
                let geometric = trace_t_sl2(k, p, &census).unwrap();
                let prec = 3 * p as usize + 2;
                let analytic = hecke_trace(k, p, prec).unwrap();
                assert_eq!(geometric, analytic, "k = {k}, p = {p}");
            }
        }
    }

    #[test]
    fn degree_two_golden_eigenvalues() {
        let cases: [(u32, u32, u64, &str); 6] = [
            (0, 35, 2, "-25073418240"),
            (0, 35, 3, "-11824551571578840"),
            (14, 7, 3, "511272"),
            (4, 17, 2, "-266112"),
            (0, 43, 5, "-44890110453445302863489062500"),
            (0, 10, 2, "240"),
        ];
        for (j, k, q, expected) in cases {
            let report = trace_t_siegel2(j, k, q, &DEG2[&q]).unwrap();
            assert_eq!(report.trace, big(expected), "S_{{{j},{k}}} at q = {q}");
            assert_eq!(report.dim_hint, Some(1));
            assert!(!report.raw_frobenius);
            assert!(report.to_string().starts_with("eigenvalue lambda"));
        }
    }

    #[test]
    fn degree_two_zero_dimensional_spaces_vanish() {
        for q in [2u64, 3] {
            for (j, k) in [(0u32, 4u32), (0, 5), (0, 6), (0, 7), (0, 8), (0, 9), (2, 4)] {
                let report = trace_t_siegel2(j, k, q, &DEG2[&q]).unwrap();
                assert_eq!(report.trace, BigInt::zero(), "S_{{{j},{k}}} at q = {q}");
                assert_eq!(report.dim_hint, Some(0));
            }
        }
        for q in [4u64, 5, 7] {
            let report = trace_t_siegel2(0, 4, q, &DEG2[&q]).unwrap();
            assert_eq!(report.trace, BigInt::zero());
            assert_eq!(report.raw_frobenius, q == 4);
        }
    }

    #[test]
    fn degree_two_rejects_bad_weights() {
        assert!(matches!(
            trace_t_siegel2(1, 10, 2, &DEG2[&2]),
            Err(HeckeError::BadSiegelWeight { .. })
        ));
        assert!(matches!(
            trace_t_siegel2(0, 3, 2, &DEG2[&2]),
            Err(HeckeError::BadSiegelWeight { .. })
        ));
        assert!(matches!(
            trace_t_siegel2(0, 10, 3, &DEG2[&2]),
            Err(HeckeError::WrongQ { .. })
        ));
    }

    #[test]
    fn lift_identity_holds_for_weights_ten_and_twelve() {
        for k in [10u32, 12] {
            for p in [2u64, 3, 5] {
                assert!(sk_lift_check(k, p, &DEG2[&p]).unwrap(), "k = {k}, p = {p}");
            }
        }
        assert!(matches!(
            sk_lift_check(14, 2, &DEG2[&2]),
            Err(HeckeError::UnsupportedLift(14))
        ));
        assert!(matches!(
            sk_lift_check(10, 4, &DEG2[&4]),
            Err(HeckeError::NotPrime(4))
        ));
    }

    #[test]
    fn degree_two_congruence_holds_mod_41() {
        let data: Vec<Degree2Data> = [2u64, 3, 5, 7]
            .into_iter()
            .map(|q| DEG2[&q].clone())
            .collect();
        let report = harder_check_deg2(4, 10, 41, 22, 7, &data).unwrap();
        assert_eq!(report.verdicts.len(), 4);
        assert!(report.all_pass(), "{report}");

        // Negative control: shifting lambda(p) by one must break the
        // congruence at p = 2 (the norm moves by exactly one).
        let lambda = trace_t_siegel2(4, 10, 2, &DEG2[&2]).unwrap().trace;
        let a22 = rational_eigenvalue(22, 2).unwrap();
        let rhs = BigInt::from(2).pow(8) + &a22 + BigInt::from(2).pow(13);
        assert!(divisible(&(&lambda - &rhs), 41));
        assert!(!divisible(&(&lambda + 1 - &rhs), 41));

        // A difference of zero passes for any modulus.
        let zero = norm_product(
            &a22.clone(),
            &[HeckeEigenvalue::Rational(a22.clone())],
        )
        .unwrap();
        assert!(zero.is_zero() && divisible(&zero, 2));

        assert!(matches!(
            harder_check_deg2(4, 10, 41, 22, 11, &data),
            Err(HeckeError::MissingCensus(11))
        ));
    }

    #[test]
    fn table_parsing_round_trips() {
        let text = "# degree 3\n# weight (2,1,14)\n2 -2073600\n5 4320+96*sqrt(51349)\n7 -1-1*sqrt(5)\n";
        let table = parse_eigenvalue_table(text).unwrap();
        assert_eq!(table.header.len(), 2);
        assert_eq!(table.rational(2).unwrap(), BigInt::from(-2073600));
        assert_eq!(
            table.entries[&5],
            TableValue::Quadratic(QuadInt::from_i64(51349, 4320, 96))
        );
        assert_eq!(
            table.entries[&7],
            TableValue::Quadratic(QuadInt::from_i64(5, -1, -1))
        );
        assert!(matches!(
            table.rational(3),
            Err(HeckeError::TableMissingPrime(3))
        ));
        assert!(matches!(
            table.rational(5),
            Err(HeckeError::TableParse { .. })
        ));

        for bad in ["2", "x 5", "2 12x", "2 1+2*sqrt(5", "2 5\n2 6"] {
            assert!(
                matches!(
                    parse_eigenvalue_table(bad),
                    Err(HeckeError::TableParse { .. })
                ),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn bundled_table_covers_small_primes() {
        let table = weight_2_1_14_table();
        assert_eq!(
            table.entries.keys().copied().collect::<Vec<_>>(),
            vec![2, 3, 5, 7, 11, 13, 17, 19]
        );
        assert_eq!(table.rational(2).unwrap(), BigInt::from(-2073600));
        assert_eq!(
            table.rational(19).unwrap(),
            big("17632053727783741943750240")
        );
    }

    #[test]
    fn degree_three_congruence_holds_mod_199() {
        let check = Deg3Congruence {
            weight: (13, 11, 10),
            modulus: 199,
            f_weight: 12,
            g_weight: 30,
        };
        let table = weight_2_1_14_table();
        let report = harder_check_deg3(&check, &table, 17).unwrap();
        assert_eq!(report.verdicts.len(), 7);
        assert!(report.all_pass(), "{report}");
        assert_eq!(report.verdicts[0].p, 2);
        assert_eq!(report.verdicts[0].norm, big("-232402452480"));

        // Negative controls: a wrong modulus and a perturbed eigenvalue
        // must both fail.
        let wrong = Deg3Congruence {
            modulus: 197,
            ..check
        };
        assert!(!harder_check_deg3(&wrong, &table, 17).unwrap().all_pass());
        let mut perturbed = table.clone();
        perturbed
            .entries
            .insert(2, TableValue::Rational(BigInt::from(-2073599)));
        let broken = harder_check_deg3(&check, &perturbed, 3).unwrap();
        assert!(!broken.verdicts[0].pass);
        assert!(broken.verdicts[1].pass);

        let sparse = parse_eigenvalue_table("2 5\n").unwrap();
        assert!(matches!(
            harder_check_deg3(&check, &sparse, 5),
            Err(HeckeError::TableMissingPrime(3))
        ));
    }

    #[test]
    fn degree_three_golden_eigenvalues_at_q2() {
        let cases: [(u32, u32, u32, i64, [u32; 3]); 3] = [
            (11, 5, 2, 0, [6, 3, 6]),
            (10, 6, 4, 9504, [4, 2, 8]),
            (13, 11, 10, -2073600, [2, 1, 14]),
        ];
        for (a, b, c, expected, space) in cases {
            let report = trace_t_siegel3(a, b, c, 2, &DEG3_Q2).unwrap();
            assert_eq!(report.trace, BigInt::from(expected), "weight ({a},{b},{c})");
            assert_eq!(report.weight, space.to_vec());
            assert_eq!(report.dim_hint, Some(1));
        }
        assert!(matches!(
            trace_t_siegel3(5, 11, 2, 2, &DEG3_Q2),
            Err(HeckeError::BadTriple { .. })
        ));
    }

    #[test]
    fn report_display_shows_convention() {
        let report = TraceReport {
            degree: 2,
            weight: vec![0, 35],
            q: 2,
            trace: BigInt::from(-25073418240i64),
            dim_hint: Some(1),
            census_version: FORMAT_VERSION,
            formula: "degree-2 trace identity",
            raw_frobenius: false,
        };
        assert_eq!(
            report.to_string(),
            "eigenvalue lambda(2) on S_{0,35} = -25073418240"
        );
        let raw = TraceReport {
            raw_frobenius: true,
            dim_hint: None,
            ..report
        };
        assert_eq!(
            raw.to_string(),
            "trace of T(2) on S_{0,35} = -25073418240 [raw Frobenius trace at composite q]"
        );
    }
}
