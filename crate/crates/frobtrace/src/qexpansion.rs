//! Exact q-expansions of level-1 elliptic modular forms: Eisenstein series,
//! the discriminant cusp form, ring operations on truncated expansions, the
//! Hecke action on coefficients, and eigenvalue extraction for cusp spaces
//! of dimension at most two.
//!
//! All coefficients are exact rationals. A precision of N means the
//! coefficients a(0), ..., a(N) are stored and trusted; ring operations
//! propagate the minimum precision of their operands.

use crate::exactnum::{is_prime, QuadInt};
use crate::motives::dim_cusp_sl2;
use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QExpansionError {
    #[error("weight {0} is not an even integer in the supported range")]
    BadWeight(u32),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision too small: need a(0..{needed}), have a(0..{given})")]
    PrecisionTooSmall { needed: usize, given: usize },
    #[error("eigen-decomposition is limited to dim <= 2, space has dim {0}")]
    EigenUnsupportedDimension(usize),
    #[error("eigenvalue does not lie in an integral quadratic ring: {0}")]
    EigenvalueNotRepresentable(String),
}

/// A modular form of a fixed weight, truncated to finite precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    weight: u32,
    /// Coefficients a(0), ..., a(N); the length is precision + 1.
    coeffs: Vec<BigRational>,
}

impl QExpansion {
    fn from_coeffs(weight: u32, coeffs: Vec<BigRational>) -> QExpansion {
        assert!(!coeffs.is_empty(), "need at least the constant term");
        QExpansion { weight, coeffs }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Largest trusted coefficient index N.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The coefficient a(n); panics beyond the stored precision.
    pub fn coeff(&self, n: usize) -> &BigRational {
        assert!(
            n <= self.precision(),
            "coefficient a({}) beyond precision {}",
            n,
            self.precision()
        );
        &self.coeffs[n]
    }

    /// Sum of forms of equal weight, at the minimum of the two precisions.
    pub fn add(&self, other: &QExpansion) -> QExpansion {
        assert_eq!(self.weight, other.weight, "weights must match to add");
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        QExpansion::from_coeffs(self.weight, coeffs)
    }

    pub fn sub(&self, other: &QExpansion) -> QExpansion {
        self.add(&other.scale(&BigRational::from_integer(BigInt::from(-1))))
    }

    pub fn scale(&self, c: &BigRational) -> QExpansion {
        QExpansion::from_coeffs(self.weight, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Product of forms; weights add, precision is the minimum.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !other.coeffs[j].is_zero() {
                    coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        QExpansion::from_coeffs(self.weight + other.weight, coeffs)
    }

    /// e-th power by binary exponentiation at this form's precision.
    pub fn pow(&self, e: u32) -> QExpansion {
        let n = self.precision();
        let mut acc = QExpansion::from_coeffs(0, {
            let mut c = vec![BigRational::zero(); n + 1];
            c[0] = BigRational::one();
            c
        });
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Bernoulli number B_m (B_1 = -1/2 convention).
fn bernoulli(m: u32) -> BigRational {
    let mut b: Vec<BigRational> = Vec::with_capacity(m as usize + 1);
    b.push(BigRational::one());
    for k in 1..=m as usize {
        // sum_{j<k} C(k+1, j) B_j = -(k+1) B_k
        let row = binomial_row(k + 1);
        let mut sum = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            sum += bj * BigRational::from_integer(row[j].clone());
        }
        b.push(-sum / BigRational::from_integer(BigInt::from(k as i64 + 1)));
    }
    b.pop().unwrap()
}

/// Row m of Pascal's triangle: C(m, 0), ..., C(m, m).
fn binomial_row(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=m {
        let prev = row.last().unwrap().clone();
        row.push(prev * BigInt::from((m - k + 1) as u64) / BigInt::from(k as u64));
    }
    row
}

/// sigma_e(n) = sum of d^e over divisors d of n.
fn sigma_power(n: u64, e: u32) -> BigInt {
    let mut sum = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            sum += BigInt::from(d).pow(e);
        }
    }
    sum
}

/// The discriminant form Delta = q prod (1 - q^n)^24 to precision N >= 1.
pub fn delta_expansion(precision: usize) -> QExpansion {
    assert!(precision >= 1, "need at least precision 1");
    // Euler product via the pentagonal number theorem:
    // prod (1 - q^n) = sum_j (-1)^j q^{j(3j-1)/2}.
    let inner = precision - 1;
    let mut eta = vec![BigRational::zero(); inner + 1];
    let mut j: i64 = 0;
    loop {
        let g = j * (3 * j - 1) / 2;
        let g_neg = j * (3 * j + 1) / 2;
        if g as usize > inner && g_neg as usize > inner && j > 0 {
            break;
        }
        let sign = if j % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        if (g as usize) <= inner {
            eta[g as usize] += sign.clone();
        }
        if j > 0 && (g_neg as usize) <= inner {
            eta[g_neg as usize] += sign;
        }
        j += 1;
    }
    let eta = QExpansion::from_coeffs(0, eta);
    let eta24 = eta.pow(24);
    let mut coeffs = Vec::with_capacity(precision + 1);
    coeffs.push(BigRational::zero());
    coeffs.extend(eta24.coeffs.iter().cloned());
    QExpansion::from_coeffs(12, coeffs)
}

/// The normalized Eisenstein series
///   E_k = 1 - (2k / B_k) sum_{n >= 1} sigma_{k-1}(n) q^n
/// for even k >= 4.
pub fn eisenstein_expansion(k: u32, precision: usize) -> Result<QExpansion, QExpansionError> {
    if !k.is_multiple_of(2) || k < 4 {
        return Err(QExpansionError::BadWeight(k));
    }
    let factor = -BigRational::from_integer(BigInt::from(2 * k as i64)) / bernoulli(k);
    let mut coeffs = Vec::with_capacity(precision + 1);
    coeffs.push(BigRational::one());
    for n in 1..=precision as u64 {
        coeffs.push(&factor * BigRational::from_integer(sigma_power(n, k - 1)));
    }
    Ok(QExpansion::from_coeffs(k, coeffs))
}

/// Echelonized basis of the weight-k cusp space, k even >= 12: the forms
/// Delta * E_4^x * E_6^y over 4x + 6y = k - 12, row-reduced so that basis
/// form i has a(j) = delta_{ij} for 1 <= i, j <= dim.
pub fn cusp_basis(k: u32, precision: usize) -> Result<Vec<QExpansion>, QExpansionError> {
    if !k.is_multiple_of(2) || k < 12 {
        return Err(QExpansionError::BadWeight(k));
    }
    let dim = dim_cusp_sl2(k).expect("even k >= 12") as usize;
    if precision < dim + 1 {
        return Err(QExpansionError::PrecisionTooSmall {
            needed: dim + 1,
            given: precision,
        });
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    let delta = delta_expansion(precision);
    let e4 = eisenstein_expansion(4, precision)?;
    let e6 = eisenstein_expansion(6, precision)?;
    let mut rows: Vec<QExpansion> = Vec::new();
    let rest = k - 12;
    for y in 0..=rest / 6 {
        let r = rest - 6 * y;
        if r.is_multiple_of(4) {
            rows.push(delta.mul(&e4.pow(r / 4)).mul(&e6.pow(y)));
        }
    }
    assert_eq!(
        rows.len(),
        dim,
        "monomial count must equal the cusp dimension"
    );

    // Reduced row echelon over the coefficient columns a(1), ..., a(dim).
    // The leading dim x dim coefficient minor of these monomial forms is
    // invertible, so pivot r always lands in column r + 1.
    for r in 0..dim {
        let col = r + 1;
        let pivot_row = (r..dim)
            .find(|&i| !rows[i].coeffs[col].is_zero())
            .expect("echelon pivots must sit at a(1), ..., a(dim)");
        rows.swap(r, pivot_row);
        let inv = rows[r].coeffs[col].recip();
        rows[r] = rows[r].scale(&inv);
        for i in 0..dim {
            if i != r && !rows[i].coeffs[col].is_zero() {
                let c = rows[i].coeffs[col].clone();
                let scaled = rows[r].scale(&c);
                rows[i] = rows[i].sub(&scaled);
            }
        }
    }
    Ok(rows)
}

/// The matrix of T(p) on the echelonized cusp basis: column j holds the
/// basis coordinates of T(p) applied to basis form j, read off from
/// (T(p) f)(n) = a(pn) + p^{k-1} a(n/p).
fn hecke_matrix(
    k: u32,
    p: u64,
    precision: usize,
) -> Result<Vec<Vec<BigRational>>, QExpansionError> {
    if !is_prime(p) {
        return Err(QExpansionError::NotPrime(p));
    }
    let dim = match dim_cusp_sl2(k) {
        Ok(d) if k >= 12 => d as usize,
        _ => return Err(QExpansionError::BadWeight(k)),
    };
    let needed = (p as usize) * dim + 1;
    if precision < needed {
        return Err(QExpansionError::PrecisionTooSmall {
            needed,
            given: precision,
        });
    }
    let basis = cusp_basis(k, precision)?;
    let pk = BigRational::from_integer(BigInt::from(p).pow(k - 1));
    let mut m = vec![vec![BigRational::zero(); dim]; dim];
    for (j, f) in basis.iter().enumerate() {
        for (i, row) in m.iter_mut().enumerate() {
            let n = i + 1;
            let mut t = f.coeffs[p as usize * n].clone();
            if n % p as usize == 0 {
                t += &pk * &f.coeffs[n / p as usize];
            }
            row[j] = t;
        }
    }
    Ok(m)
}

/// Exact trace of T(p) on the weight-k cusp space.
pub fn hecke_trace(k: u32, p: u64, precision: usize) -> Result<BigInt, QExpansionError> {
    let m = hecke_matrix(k, p, precision)?;
    let mut tr = BigRational::zero();
    for (i, row) in m.iter().enumerate() {
        tr += &row[i];
    }
    assert!(tr.is_integer(), "Hecke traces are rational integers");
    Ok(tr.to_integer())
}

/// An exact Hecke eigenvalue: a rational integer or an element of a real
/// quadratic ring Z[sqrt(d)].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeckeEigenvalue {
    Rational(BigInt),
    Quadratic(QuadInt),
}

impl fmt::Display for HeckeEigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeEigenvalue::Rational(v) => write!(f, "{}", v),
            HeckeEigenvalue::Quadratic(v) => write!(f, "{}", v),
        }
    }
}

/// Largest s with s^2 | m, together with the squarefree cofactor d = m / s^2.
/// Correct for m up to (2 * 10^6)^2 by trial division plus a final
/// perfect-square check on the remaining cofactor.
fn square_part(m: i128) -> (i128, i128) {
    assert!(m > 0);
    assert!(
        m <= 4_000_000_000_000i128,
        "square-part extraction bound exceeded"
    );
    let mut s: i128 = 1;
    let mut d: i128 = 1;
    let mut rem = m;
    let mut f: i128 = 2;
    while f * f <= rem && f <= 2_000_000 {
        if rem % f == 0 {
            let mut e = 0u32;
            while rem % f == 0 {
                rem /= f;
                e += 1;
            }
            for _ in 0..e / 2 {
                s *= f;
            }
            if e % 2 == 1 {
                d *= f;
            }
        }
        f += 1;
    }
    if rem > 1 {
        let r = (rem as u64).sqrt() as i128;
        if r * r == rem {
            s *= r;
        } else {
            // any remaining factor above the trial bound is squarefree here
            d *= rem;
        }
    }
    (s, d)
}

/// Eigenvalues of T(p) on the weight-k cusp space, with exact field data.
/// Supports dim <= 2; rational in dimension one, quadratic (or a split
/// rational pair) in dimension two.
pub fn hecke_eigen(
    k: u32,
    p: u64,
    precision: usize,
) -> Result<Vec<HeckeEigenvalue>, QExpansionError> {
    let m = hecke_matrix(k, p, precision)?;
    match m.len() {
        0 => Ok(Vec::new()),
        1 => {
            assert!(m[0][0].is_integer(), "eigenvalue must be integral");
            Ok(vec![HeckeEigenvalue::Rational(m[0][0].to_integer())])
        }
        2 => {
            let t = (&m[0][0] + &m[1][1]).to_integer();
            let det = (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]).to_integer();
            eigen_from_quadratic(k, p, &t, &det)
        }
        dim => Err(QExpansionError::EigenUnsupportedDimension(dim)),
    }
}

/// Roots of x^2 - t x + det exactly, as integers or elements of Z[sqrt(d)].
fn eigen_from_quadratic(
    k: u32,
    p: u64,
    t: &BigInt,
    det: &BigInt,
) -> Result<Vec<HeckeEigenvalue>, QExpansionError> {
    let not_representable = |why: String| QExpansionError::EigenvalueNotRepresentable(why);
    let disc: BigInt = t * t - BigInt::from(4) * det;
    assert!(!disc.is_negative(), "Hecke eigenvalues are totally real");
    if disc.is_zero() {
        let half = t / BigInt::from(2);
        if &half * BigInt::from(2) != *t {
            return Err(not_representable(format!("double root {}/2", t)));
        }
        return Ok(vec![
            HeckeEigenvalue::Rational(half.clone()),
            HeckeEigenvalue::Rational(half),
        ]);
    }

    // Determine the squarefree discriminant field d. For small discriminants
    // extract it directly; otherwise learn d from the same space at a small
    // reference prime (all T(p) share one eigenvalue field) and verify.
    let direct_bound = BigInt::from(4_000_000_000_000i64);
    let (s, d): (BigInt, i64) = if disc <= direct_bound {
        let m = i128::try_from(&disc).expect("bounded discriminant");
        let (s, d) = square_part(m);
        (BigInt::from(s), d as i64)
    } else {
        let mut found = None;
        for p0 in [2u64, 3, 5, 7] {
            if p0 == p {
                continue;
            }
            let needed = (p0 as usize) * 2 + 1;
            let m0 = hecke_matrix(k, p0, needed)?;
            let t0 = (&m0[0][0] + &m0[1][1]).to_integer();
            let det0 = (&m0[0][0] * &m0[1][1] - &m0[0][1] * &m0[1][0]).to_integer();
            let disc0: BigInt = &t0 * &t0 - BigInt::from(4) * det0;
            if disc0.is_zero() || disc0 > direct_bound {
                continue;
            }
            let (_, d0) = square_part(i128::try_from(&disc0).expect("bounded"));
            if d0 > 1 {
                found = Some(d0 as i64);
                break;
            }
        }
        let d = found.ok_or_else(|| {
            not_representable("no reference prime pins down the eigenvalue field".to_string())
        })?;
        let quotient = &disc / BigInt::from(d);
        if &quotient * BigInt::from(d) != disc {
            return Err(not_representable(format!(
                "discriminant {} is not in the field sqrt({})",
                disc, d
            )));
        }
        let s = quotient.sqrt();
        if &s * &s != quotient {
            return Err(not_representable(format!(
                "discriminant {} is not in the field sqrt({})",
                disc, d
            )));
        }
        (s, d)
    };

    if d == 1 {
        // split rational pair (t +- s) / 2
        let two = BigInt::from(2);
        let lo = (t - &s) / &two;
        let hi = (t + &s) / &two;
        if &lo * &two != t - &s || &hi * &two != t + &s {
            return Err(not_representable(format!("half-integral pair ({} +- {})/2", t, s)));
        }
        return Ok(vec![
            HeckeEigenvalue::Rational(hi),
            HeckeEigenvalue::Rational(lo),
        ]);
    }
    let two = BigInt::from(2);
    let a = t / &two;
    let b = &s / &two;
    if &a * &two != *t || &b * &two != s {
        return Err(not_representable(format!(
            "eigenvalue ({} +- {} sqrt({}))/2 is half-integral",
            t, s, d
        )));
    }
    Ok(vec![
        HeckeEigenvalue::Quadratic(QuadInt::new(d, a.clone(), b.clone())),
        HeckeEigenvalue::Quadratic(QuadInt::new(d, a, -b)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn a_int(f: &QExpansion, n: usize) -> BigInt {
        let c = f.coeff(n);
        assert!(c.is_integer(), "a({}) should be integral", n);
        c.to_integer()
    }

    #[test]
    fn bernoulli_numbers() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(bernoulli(2), BigRational::new(BigInt::from(1), BigInt::from(6)));
        assert_eq!(bernoulli(4), BigRational::new(BigInt::from(-1), BigInt::from(30)));
        assert_eq!(bernoulli(6), BigRational::new(BigInt::from(1), BigInt::from(42)));
        assert_eq!(bernoulli(3), BigRational::zero());
        assert_eq!(
            bernoulli(12),
            BigRational::new(BigInt::from(-691), BigInt::from(2730))
        );
    }

    #[test]
    fn delta_leading_coefficients() {
        let d = delta_expansion(6);
        let expected: Vec<i64> = vec![0, 1, -24, 252, -1472, 4830, -6048];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(a_int(&d, n), BigInt::from(*e), "Delta coefficient a({})", n);
        }
        assert_eq!(d.weight(), 12);
        assert_eq!(d.precision(), 6);
    }

    #[test]
    fn eisenstein_leading_coefficients() {
        let e4 = eisenstein_expansion(4, 3).unwrap();
        assert_eq!(a_int(&e4, 0), BigInt::from(1));
        assert_eq!(a_int(&e4, 1), BigInt::from(240));
        assert_eq!(a_int(&e4, 2), BigInt::from(2160));
        let e6 = eisenstein_expansion(6, 2).unwrap();
        assert_eq!(a_int(&e6, 1), BigInt::from(-504));
        // E_12 has non-integral coefficients with denominator 691
        let e12 = eisenstein_expansion(12, 1).unwrap();
        assert_eq!(
            e12.coeff(1),
            &BigRational::new(BigInt::from(65520), BigInt::from(691))
        );
        // constant term is 1 for every even weight
        for k in (4..=40).step_by(2) {
            let e = eisenstein_expansion(k, 1).unwrap();
            assert_eq!(e.coeff(0), &BigRational::one(), "constant term of E_{}", k);
        }
        assert_eq!(
            eisenstein_expansion(5, 3).unwrap_err(),
            QExpansionError::BadWeight(5)
        );
        assert_eq!(
            eisenstein_expansion(2, 3).unwrap_err(),
            QExpansionError::BadWeight(2)
        );
    }

    #[test]
    fn discriminant_from_eisenstein_series() {
        let n = 24;
        let e4 = eisenstein_expansion(4, n).unwrap();
        let e6 = eisenstein_expansion(6, n).unwrap();
        let delta = delta_expansion(n);
        let expr = e4.pow(3).sub(&e6.pow(2)).scale(&BigRational::new(
            BigInt::one(),
            BigInt::from(1728),
        ));
        assert_eq!(expr, delta);
    }

    #[test]
    fn cusp_bases_are_echelonized() {
        let basis = cusp_basis(12, 6).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], delta_expansion(6));

        let basis = cusp_basis(22, 8).unwrap();
        assert_eq!(basis.len(), 1);
        // hand expansion: a(2) of Delta*E4*E6 is -24 + 240 - 504
        assert_eq!(a_int(&basis[0], 1), BigInt::from(1));
        assert_eq!(a_int(&basis[0], 2), BigInt::from(-288));

        for (k, dim) in [(12u32, 1usize), (16, 1), (24, 2), (30, 2), (36, 3), (40, 3)] {
            let basis = cusp_basis(k, 2 * dim + 2).unwrap();
            assert_eq!(basis.len(), dim, "dim of weight-{} cusp space", k);
            for (i, f) in basis.iter().enumerate() {
                for j in 1..=dim {
                    let want = if i + 1 == j { int(1) } else { int(0) };
                    assert_eq!(f.coeff(j), &want, "a({}) of basis form {} at k={}", j, i, k);
                }
            }
        }

        assert_eq!(
            cusp_basis(14, 8).unwrap().len(),
            0,
            "weight 14 cusp space is trivial"
        );
        assert_eq!(cusp_basis(11, 8).unwrap_err(), QExpansionError::BadWeight(11));
        assert_eq!(cusp_basis(10, 8).unwrap_err(), QExpansionError::BadWeight(10));
        assert_eq!(
            cusp_basis(36, 3).unwrap_err(),
            QExpansionError::PrecisionTooSmall { needed: 4, given: 3 }
        );
    }

    #[test]
    fn eigenform_coefficients_are_multiplicative() {
        for k in [12u32, 16, 18, 20, 22, 26] {
            let f = &cusp_basis(k, 36).unwrap()[0];
            for (m, n) in [(2usize, 3usize), (2, 5), (3, 5), (2, 7), (4, 3), (2, 9), (4, 7), (5, 6), (3, 10)] {
                assert_eq!(
                    f.coeff(m) * f.coeff(n),
                    *f.coeff(m * n),
                    "a({})a({}) = a({}) at weight {}",
                    m,
                    n,
                    m * n,
                    k
                );
            }
        }
    }

    #[test]
    fn hecke_eigenvalues_dimension_one() {
        let e = hecke_eigen(12, 2, 5).unwrap();
        assert_eq!(e, vec![HeckeEigenvalue::Rational(BigInt::from(-24))]);
        let e = hecke_eigen(12, 3, 7).unwrap();
        assert_eq!(e, vec![HeckeEigenvalue::Rational(BigInt::from(252))]);
        let e = hecke_eigen(12, 5, 11).unwrap();
        assert_eq!(e, vec![HeckeEigenvalue::Rational(BigInt::from(4830))]);
        let e = hecke_eigen(22, 2, 5).unwrap();
        assert_eq!(e, vec![HeckeEigenvalue::Rational(BigInt::from(-288))]);
        let e = hecke_eigen(18, 2, 5).unwrap();
        assert_eq!(e, vec![HeckeEigenvalue::Rational(BigInt::from(-528))]);
        assert_eq!(hecke_eigen(14, 2, 5).unwrap(), Vec::new());
    }

    #[test]
    fn hecke_eigenvalues_dimension_two() {
        let e = hecke_eigen(30, 2, 5).unwrap();
        let plus = QuadInt::new(51349, BigInt::from(4320), BigInt::from(96));
        let minus = QuadInt::new(51349, BigInt::from(4320), BigInt::from(-96));
        assert_eq!(
            e,
            vec![
                HeckeEigenvalue::Quadratic(plus),
                HeckeEigenvalue::Quadratic(minus)
            ]
        );
        // trace agrees with the eigenvalue sum at several (k, p); irrational
        // parts cancel across a conjugate pair
        for (k, p) in [(24u32, 2u64), (24, 3), (28, 2), (30, 2), (30, 3), (30, 5)] {
            let n = 2 * p as usize + 1;
            let eig = hecke_eigen(k, p, n).unwrap();
            let sum: BigInt = eig
                .iter()
                .map(|e| match e {
                    HeckeEigenvalue::Rational(v) => v.clone(),
                    HeckeEigenvalue::Quadratic(q) => q.a.clone(),
                })
                .sum();
            assert_eq!(sum, hecke_trace(k, p, n).unwrap(), "k={} p={}", k, p);
        }
    }

    #[test]
    fn hecke_errors() {
        assert_eq!(
            hecke_eigen(12, 7, 5).unwrap_err(),
            QExpansionError::PrecisionTooSmall { needed: 8, given: 5 }
        );
        assert_eq!(
            hecke_trace(36, 31, 20).unwrap_err(),
            QExpansionError::PrecisionTooSmall {
                needed: 94,
                given: 20
            }
        );
        assert_eq!(hecke_eigen(12, 4, 9).unwrap_err(), QExpansionError::NotPrime(4));
        assert_eq!(
            hecke_eigen(36, 2, 9).unwrap_err(),
            QExpansionError::EigenUnsupportedDimension(3)
        );
        assert_eq!(hecke_eigen(13, 2, 9).unwrap_err(), QExpansionError::BadWeight(13));
    }

    #[test]
    fn square_part_extraction() {
        assert_eq!(square_part(1), (1, 1));
        assert_eq!(square_part(4), (2, 1));
        assert_eq!(square_part(12), (2, 3));
        assert_eq!(square_part(51349), (1, 51349));
        assert_eq!(square_part(36864 * 51349), (192, 51349));
        // large squarefree cofactor beyond the trial bound
        let p1 = 2_000_003i128;
        assert_eq!(square_part(4 * p1), (2, p1));
    }

    #[test]
    fn hecke_operators_commute() {
        // T(2)T(3) = T(3)T(2) on the 3-dimensional weight-36 space: a strong
        // independent consistency check on the matrix construction.
        let m2 = hecke_matrix(36, 2, 12).unwrap();
        let m3 = hecke_matrix(36, 3, 12).unwrap();
        let prod = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| {
            let n = x.len();
            let mut out = vec![vec![BigRational::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    for (l, yrow) in y.iter().enumerate() {
                        out[i][j] += &x[i][l] * &yrow[j];
                    }
                }
            }
            out
        };
        assert_eq!(prod(&m2, &m3), prod(&m3, &m2));
        // the trace is still available where eigen-decomposition refuses
        hecke_trace(36, 2, 9).unwrap();
        assert!(hecke_eigen(36, 2, 9).is_err());
    }
}
