//! Symplectic characters of Frobenius eigenvalue data and weighted class
//! streams over the strata of principally polarized abelian surfaces and
//! threefolds.
//!
//! [`EigenvalueData`] holds the elementary symmetric functions of the 2g
//! Frobenius eigenvalues of a class (equivalently its L-polynomial), with
//! the relation e_{2g-j} = q^{g-j} e_j always enforced. [`sp_character`]
//! evaluates the irreducible character of highest weight lambda on that
//! data through the symplectic Jacobi-Trudi determinant in the complete
//! homogeneous functions h_k, homogenized for eigenvalue pairs that
//! multiply to q instead of 1: column j >= 2 carries h_{l_i+j} +
//! q^{j-1} h_{l_i-j+2} with l_i = lambda_i - i, and column 1 carries
//! h_{l_i+1} (the classical first column halved). Every expansion term
//! then has degree |lambda|, and at q = 1 the determinant restricts to
//! the classical formula, which pins it as the unique homogenization; the
//! test suite additionally checks it against the Weyl alternant ratio on
//! exact eigenvalue multisets closed under a -> q/a.
//!
//! The assembly functions flatten the strata of the degree-2 and degree-3
//! moduli into streams of (data, stacky mass) pairs:
//!
//! * degree 2: smooth genus-2 classes, unordered pairs of elliptic
//!   classes, and elliptic classes over F_{q^2} glued to their conjugate
//!   (eigenvalue data 1 - a T^2 + q^2 T^4);
//! * degree 3: plane-quartic Jacobians together with their quadratic
//!   twists at half mass each, hyperelliptic Jacobians, elliptic x
//!   genus-2 products, and elliptic triples by the S_3 cycle index with
//!   the two twisted sectors (conjugate pairs over F_{q^2} times a
//!   rational factor, and Frobenius triples over F_{q^3} with data
//!   1 - a T^3 + q^3 T^6).
//!
//! Streams are exact; [`weighted_character_sum`] reduces them in parallel
//! with rational arithmetic and insists on an integral total.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::census::{Census, FamilyTag, G3Census, PowerSums};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalSysError {
    #[error("highest weight {0:?} must be nonincreasing with 1 to 3 parts")]
    BadWeight(Vec<u64>),
    #[error("weight has {weight} parts but the eigenvalue data has genus {data}")]
    GenusMismatch { weight: usize, data: usize },
    #[error("point count {n} over the degree-{i} extension violates the Weil bound at q = {q}")]
    WeilBound { i: usize, n: u64, q: u64 },
    #[error("eigenvalue data is not integral: {0}")]
    NonIntegral(String),
    #[error("elementary coefficients are malformed: {0}")]
    BadElementary(String),
    #[error("expected a {expected} census, got {found} at q = {q}")]
    WrongFamily {
        expected: FamilyTag,
        found: FamilyTag,
        q: u64,
    },
    #[error("census sizes are inconsistent: {0}")]
    SizeMismatch(String),
    #[error("the {0} census lacks automorphism orders")]
    MissingAut(FamilyTag),
    #[error("{0} census keys are not integer power sums")]
    BadKeys(FamilyTag),
    #[error("weighted character sum for weight {weight:?} is not an integer: {total}")]
    NonIntegralSum { weight: Vec<u64>, total: String },
}

/// A dominant weight lambda_1 >= ... >= lambda_g >= 0 for Sp(2g), g <= 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestWeight {
    parts: Vec<u64>,
}

impl HighestWeight {
    pub fn new(parts: &[u64]) -> Result<HighestWeight, LocalSysError> {
        let ok = (1..=3).contains(&parts.len()) && parts.windows(2).all(|w| w[0] >= w[1]);
        if !ok {
            return Err(LocalSysError::BadWeight(parts.to_vec()));
        }
        Ok(HighestWeight {
            parts: parts.to_vec(),
        })
    }

    pub fn genus(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// |lambda|; the fiberwise -1 acts on V_lambda by (-1)^|lambda|.
    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }
}

/// Exact Frobenius eigenvalue data of one class: q and the elementary
/// symmetric functions e_0..e_2g of the 2g eigenvalues, i.e. the
/// L-polynomial sum_j (-1)^j e_j T^j.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EigenvalueData {
    q: u64,
    elem: Vec<BigInt>,
}

impl EigenvalueData {
    /// Builds data from the first g power sums; e_1..e_g come from Newton's
    /// identities, the rest from e_{2g-j} = q^{g-j} e_j.
    pub fn from_power_sums(q: u64, p: &[BigInt]) -> Result<EigenvalueData, LocalSysError> {
        let g = p.len();
        assert!((1..=3).contains(&g), "genus must be 1 to 3");
        let mut elem = vec![BigInt::one()];
        for k in 1..=g {
            // p_k - sum_{i=1}^{k-1} (-1)^{i+1} e_i p_{k-i} = (-1)^{k+1} k e_k
            let mut acc = p[k - 1].clone();
            for i in 1..k {
                let term = &elem[i] * &p[k - 1 - i];
                if i.is_multiple_of(2) {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if k.is_multiple_of(2) {
                acc = -acc;
            }
            let (quo, rem) = acc.div_rem(&BigInt::from(k as i64));
            if !rem.is_zero() {
                return Err(LocalSysError::NonIntegral(format!(
                    "power sums {p:?} at q = {q}"
                )));
            }
            elem.push(quo);
        }
        let qb = BigInt::from(q);
        for m in g + 1..=2 * g {
            let v = qb.pow((m - g) as u32) * &elem[2 * g - m];
            elem.push(v);
        }
        Ok(EigenvalueData { q, elem })
    }

    /// Builds data from a full coefficient list e_0..e_2g; the functional
    /// equation is checked, not assumed.
    pub fn from_elementary(q: u64, elem: &[BigInt]) -> Result<EigenvalueData, LocalSysError> {
        if elem.len().is_multiple_of(2) || !(3..=7).contains(&elem.len()) {
            return Err(LocalSysError::BadElementary(format!(
                "expected 2g+1 coefficients for g in 1..=3, got {}",
                elem.len()
            )));
        }
        let g = (elem.len() - 1) / 2;
        if !elem[0].is_one() {
            return Err(LocalSysError::BadElementary("e_0 must be 1".into()));
        }
        let qb = BigInt::from(q);
        for j in 0..g {
            if elem[2 * g - j] != qb.pow((g - j) as u32) * &elem[j] {
                return Err(LocalSysError::BadElementary(format!(
                    "e_{} != q^{} e_{} at q = {q}",
                    2 * g - j,
                    g - j,
                    j
                )));
            }
        }
        Ok(EigenvalueData {
            q,
            elem: elem.to_vec(),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        (self.elem.len() - 1) / 2
    }

    /// e_j, with e_j = 0 past 2g.
    pub fn elementary(&self, j: usize) -> BigInt {
        self.elem.get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The k-th power sum of the 2g eigenvalues, k >= 1.
    pub fn power_sum(&self, k: usize) -> BigInt {
        assert!(k >= 1);
        let mut p: Vec<BigInt> = Vec::with_capacity(k);
        for m in 1..=k {
            // p_m = (-1)^{m+1} m e_m + sum_{i=1}^{m-1} (-1)^{i+1} e_i p_{m-i}
            let lead = BigInt::from(m as i64) * self.elementary(m);
            let mut acc = if m.is_multiple_of(2) { -lead } else { lead };
            for i in 1..m {
                let term = self.elementary(i) * &p[m - 1 - i];
                if i.is_multiple_of(2) {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            p.push(acc);
        }
        p.pop().expect("k >= 1")
    }

    /// h_0..h_{len-1} from 1/L(T) = sum_k h_k T^k.
    fn h_prefix(&self, len: usize) -> Vec<BigInt> {
        let deg = self.elem.len() - 1;
        let mut h = vec![BigInt::zero(); len.max(1)];
        h[0] = BigInt::one();
        for k in 1..len {
            let mut acc = BigInt::zero();
            for i in 1..=deg.min(k) {
                let term = &self.elem[i] * &h[k - i];
                if i.is_multiple_of(2) {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            h[k] = acc;
        }
        h
    }

    /// Data of a product: the union of the eigenvalue multisets.
    pub fn concat(&self, other: &EigenvalueData) -> Result<EigenvalueData, LocalSysError> {
        if self.q != other.q {
            return Err(LocalSysError::SizeMismatch(format!(
                "cannot combine data at q = {} with data at q = {}",
                self.q, other.q
            )));
        }
        let g = self.genus() + other.genus();
        assert!(g <= 3, "combined genus exceeds 3");
        let mut elem = vec![BigInt::zero(); 2 * g + 1];
        for (i, a) in self.elem.iter().enumerate() {
            for (j, b) in other.elem.iter().enumerate() {
                elem[i + j] += a * b;
            }
        }
        Ok(EigenvalueData { q: self.q, elem })
    }

    /// Negates every eigenvalue (quadratic twist): p_i -> (-1)^i p_i.
    pub fn negate(&self) -> EigenvalueData {
        let elem = self
            .elem
            .iter()
            .enumerate()
            .map(|(j, e)| if j.is_multiple_of(2) { e.clone() } else { -e })
            .collect();
        EigenvalueData {
            q: self.q,
            elem,
        }
    }
}

/// Builds eigenvalue data from point counts N_1..N_g over F_q, ..., F_{q^g}.
pub fn eigen_data(q: u64, counts: &[u64]) -> Result<EigenvalueData, LocalSysError> {
    let g = counts.len();
    assert!((1..=3).contains(&g), "expected 1 to 3 point counts");
    let mut p = Vec::with_capacity(g);
    for (idx, &n) in counts.iter().enumerate() {
        let i = idx + 1;
        let pi = BigInt::from(q).pow(i as u32) + 1 - BigInt::from(n);
        // |p_i| <= 2g sqrt(q^i), compared squared to stay in integers.
        let bound = BigInt::from((2 * g * 2 * g) as u64) * BigInt::from(q).pow(i as u32);
        if &pi * &pi > bound {
            return Err(LocalSysError::WeilBound { i, n, q });
        }
        p.push(pi);
    }
    EigenvalueData::from_power_sums(q, &p)
}

fn det_small(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        3 => {
            let c0 = &m[1][1] * &m[2][2] - &m[1][2] * &m[2][1];
            let c1 = &m[1][0] * &m[2][2] - &m[1][2] * &m[2][0];
            let c2 = &m[1][0] * &m[2][1] - &m[1][1] * &m[2][0];
            &m[0][0] * &c0 - &m[0][1] * &c1 + &m[0][2] * &c2
        }
        _ => unreachable!("genus is 1 to 3"),
    }
}

/// Character of the irreducible Sp(2g) representation of highest weight
/// lambda, evaluated on eigenvalue data with similitude q.
pub fn sp_character(
    lam: &HighestWeight,
    d: &EigenvalueData,
) -> Result<BigInt, LocalSysError> {
    let g = lam.genus();
    if g != d.genus() {
        return Err(LocalSysError::GenusMismatch {
            weight: g,
            data: d.genus(),
        });
    }
    let h = d.h_prefix(lam.parts[0] as usize + g);
    let hh = |k: i64| -> BigInt {
        if k < 0 {
            BigInt::zero()
        } else {
            h[k as usize].clone()
        }
    };
    let q = BigInt::from(d.q);
    let m: Vec<Vec<BigInt>> = (0..g)
        .map(|i| {
            let li = lam.parts[i] as i64 - i as i64 - 1;
            (0..g)
                .map(|j| {
                    if j == 0 {
                        hh(li + 1)
                    } else {
                        let j1 = j as i64 + 1;
                        hh(li + j1) + q.pow(j as u32) * hh(li - j1 + 2)
                    }
                })
                .collect()
        })
        .collect();
    Ok(det_small(&m))
}

/// One class of a weighted stream.
#[derive(Clone, Debug)]
pub struct WeightedClass {
    pub data: EigenvalueData,
    pub mass: BigRational,
}

fn expect_family(c: &Census, family: FamilyTag) -> Result<(), LocalSysError> {
    if c.family != family {
        return Err(LocalSysError::WrongFamily {
            expected: family,
            found: c.family,
            q: c.q,
        });
    }
    Ok(())
}

fn require_aut(c: &Census) -> Result<(), LocalSysError> {
    if c.entries.keys().any(|k| k.aut_order.is_none()) {
        return Err(LocalSysError::MissingAut(c.family));
    }
    Ok(())
}

/// Flattens a census of an integer family into (data, mass) rows.
fn class_rows(c: &Census) -> Result<Vec<WeightedClass>, LocalSysError> {
    c.entries
        .iter()
        .map(|(class, &count)| {
            let PowerSums::Integer(sums) = &class.power_sums else {
                return Err(LocalSysError::BadKeys(c.family));
            };
            let p: Vec<BigInt> = sums.iter().map(|&a| BigInt::from(a)).collect();
            let data = EigenvalueData::from_power_sums(c.q, &p)?;
            let denom = class.aut_order.unwrap_or(c.normalization);
            let mass = BigRational::new(BigInt::from(count), BigInt::from(denom));
            Ok(WeightedClass { data, mass })
        })
        .collect()
}

/// Genus-2 data of an elliptic class over F_{q^2} glued to its conjugate:
/// L-polynomial 1 - a T^2 + q^2 T^4 where a is the class's trace.
fn conjugate_pair_data(q: u64, over_sq: &EigenvalueData) -> EigenvalueData {
    debug_assert_eq!(over_sq.genus(), 1);
    debug_assert_eq!(over_sq.q(), q * q);
    let a = over_sq.power_sum(1);
    EigenvalueData::from_elementary(
        q,
        &[
            BigInt::one(),
            BigInt::zero(),
            -a,
            BigInt::zero(),
            BigInt::from(q * q),
        ],
    )
    .expect("pair data satisfies the functional equation")
}

/// Genus-3 data of an elliptic class over F_{q^3} glued to its two
/// conjugates: L-polynomial 1 - a T^3 + q^3 T^6.
fn conjugate_triple_data(q: u64, over_cube: &EigenvalueData) -> EigenvalueData {
    debug_assert_eq!(over_cube.genus(), 1);
    debug_assert_eq!(over_cube.q(), q * q * q);
    let a = over_cube.power_sum(1);
    EigenvalueData::from_elementary(
        q,
        &[
            BigInt::one(),
            BigInt::zero(),
            BigInt::zero(),
            a,
            BigInt::zero(),
            BigInt::zero(),
            BigInt::from(q * q * q),
        ],
    )
    .expect("triple data satisfies the functional equation")
}

/// Weighted classes of the compact-type degree-2 stratum: smooth genus-2
/// classes, unordered pairs of elliptic classes, and the conjugate-pair
/// sector fed by elliptic classes over F_{q^2}.
///
/// `g1_aut` must carry automorphism orders; `g1_sq` is an ordinary census
/// at q^2.
pub fn assemble_a2(
    g2: &Census,
    g1_aut: &Census,
    g1_sq: &Census,
) -> Result<Vec<WeightedClass>, LocalSysError> {
    expect_family(g2, FamilyTag::G2)?;
    expect_family(g1_aut, FamilyTag::G1)?;
    expect_family(g1_sq, FamilyTag::G1)?;
    let q = g2.q;
    if g1_aut.q != q || g1_sq.q != q * q {
        return Err(LocalSysError::SizeMismatch(format!(
            "degree-2 assembly at q = {q} needs elliptic censuses at q and q^2, got {} and {}",
            g1_aut.q, g1_sq.q
        )));
    }
    require_aut(g1_aut)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    let mut out = class_rows(g2)?;
    let ell = class_rows(g1_aut)?;
    for i in 0..ell.len() {
        for j in i..ell.len() {
            let data = ell[i].data.concat(&ell[j].data)?;
            let mut mass = &ell[i].mass * &ell[j].mass;
            if i == j {
                mass *= &half;
            }
            out.push(WeightedClass { data, mass });
        }
    }
    for row in class_rows(g1_sq)? {
        out.push(WeightedClass {
            data: conjugate_pair_data(q, &row.data),
            mass: row.mass * &half,
        });
    }
    Ok(out)
}

/// Weighted classes of the degree-3 stratum: quartic Jacobians and their
/// twists at half mass, hyperelliptic Jacobians, elliptic x genus-2
/// products, and elliptic triples by the S_3 cycle index with both
/// twisted sectors.
///
/// `g2_aut` and `g1_aut` must carry automorphism orders; `g1_sq` and
/// `g1_cube` are ordinary censuses at q^2 and q^3.
pub fn assemble_a3(
    g3: &G3Census,
    g2_aut: &Census,
    g1_aut: &Census,
    g1_sq: &Census,
    g1_cube: &Census,
) -> Result<Vec<WeightedClass>, LocalSysError> {
    expect_family(&g3.quartic, FamilyTag::G3Quartic)?;
    expect_family(&g3.hyperelliptic, FamilyTag::G3Hyp)?;
    expect_family(g2_aut, FamilyTag::G2)?;
    expect_family(g1_aut, FamilyTag::G1)?;
    expect_family(g1_sq, FamilyTag::G1)?;
    expect_family(g1_cube, FamilyTag::G1)?;
    let q = g3.quartic.q;
    if g3.hyperelliptic.q != q || g2_aut.q != q || g1_aut.q != q {
        return Err(LocalSysError::SizeMismatch(format!(
            "degree-3 assembly mixes censuses at q = {q}, {}, {} and {}",
            g3.hyperelliptic.q, g2_aut.q, g1_aut.q
        )));
    }
    if g1_sq.q != q * q || g1_cube.q != q * q * q {
        return Err(LocalSysError::SizeMismatch(format!(
            "degree-3 assembly at q = {q} needs elliptic censuses at q^2 and q^3, got {} and {}",
            g1_sq.q, g1_cube.q
        )));
    }
    require_aut(g2_aut)?;
    require_aut(g1_aut)?;
    debug_assert!(g3.quartic.entries.keys().all(|k| k.twistable));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let sixth = BigRational::new(BigInt::one(), BigInt::from(6));

    let mut out = Vec::new();
    // A quartic class and its quadratic twist are distinct polarized
    // classes covered by one curve class; each gets half the curve mass.
    for row in class_rows(&g3.quartic)? {
        let mass = row.mass * &half;
        out.push(WeightedClass {
            data: row.data.negate(),
            mass: mass.clone(),
        });
        out.push(WeightedClass {
            data: row.data,
            mass,
        });
    }
    out.extend(class_rows(&g3.hyperelliptic)?);

    let ell = class_rows(g1_aut)?;
    for surf in class_rows(g2_aut)? {
        for e in &ell {
            out.push(WeightedClass {
                data: e.data.concat(&surf.data)?,
                mass: &e.mass * &surf.mass,
            });
        }
    }
    for r1 in &ell {
        for r2 in &ell {
            let pair = r1.data.concat(&r2.data)?;
            let m12 = &r1.mass * &r2.mass;
            for r3 in &ell {
                out.push(WeightedClass {
                    data: pair.concat(&r3.data)?,
                    mass: &m12 * &r3.mass * &sixth,
                });
            }
        }
    }
    let pairs = class_rows(g1_sq)?;
    for r1 in &ell {
        for s in &pairs {
            out.push(WeightedClass {
                data: r1.data.concat(&conjugate_pair_data(q, &s.data))?,
                mass: &r1.mass * &s.mass * &half,
            });
        }
    }
    for u in class_rows(g1_cube)? {
        out.push(WeightedClass {
            data: conjugate_triple_data(q, &u.data),
            mass: u.mass * &third,
        });
    }
    Ok(out)
}

/// Sum of mass * character over a stream; must come out integral.
pub fn weighted_character_sum(
    lam: &HighestWeight,
    stream: &[WeightedClass],
) -> Result<BigInt, LocalSysError> {
    let total = stream
        .par_iter()
        .map(|wc| {
            sp_character(lam, &wc.data).map(|chi| &wc.mass * BigRational::from_integer(chi))
        })
        .try_reduce(BigRational::zero, |a, b| Ok(a + b))?;
    if !total.is_integer() {
        return Err(LocalSysError::NonIntegralSum {
            weight: lam.parts().to_vec(),
            total: total.to_string(),
        });
    }
    Ok(total.to_integer())
}

/// Trace of F_q on e_c of the weight-a local system over the elliptic
/// stratum: the census-weighted character sum.
pub fn ec_trace_a1(a: u64, census: &Census) -> Result<BigInt, LocalSysError> {
    expect_family(census, FamilyTag::G1)?;
    let lam = HighestWeight::new(&[a])?;
    weighted_character_sum(&lam, &class_rows(census)?)
}
