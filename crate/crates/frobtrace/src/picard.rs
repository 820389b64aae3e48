//! Eigenspace traces for the Picard family y^3 = f(x).
//!
//! The first cohomology of a Picard curve splits over Q(rho) into the two
//! mu_3-eigenspaces W and W' of rank 3, and every census entry stores the
//! Frobenius power sums of both. This module turns those censuses into
//! exact traces of Frobenius on e_c of the local systems
//!
//!   Sym^a W (x) Sym^b W' (x) det(W)^i,
//!
//! indexed by weights (a, b, i) with the determinant power i read modulo
//! 6. The trace of one class is h_a(W) h_b(W') e_3(W)^i, with h_m the
//! complete homogeneous symmetric function of the eigenvalue triple, and
//! the e_c trace is the mass-weighted sum over all classes, an algebraic
//! integer in Z[rho].
//!
//! No eigenvalue extraction for honest Picard forms is attempted: the
//! correction terms (Eisenstein plus endoscopic) are not determined by the
//! trace data alone, so alongside raw e_c traces the module only offers
//! structural comparison reports and a probe of the sixth power of the
//! determinant eigenvalue, plus an ingested reference table of eigenvalues
//! of the weight-(1,7) forms for side-by-side display.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::census::{Census, CensusError, FamilyTag, FrobeniusClass, PowerSums};
use crate::exactnum::{split_prime_power, AlgebraicNorm, EisensteinInt};

#[derive(Debug, thiserror::Error)]
pub enum PicardError {
    #[error("expected a picard census, found family {found}")]
    WrongFamily { found: FamilyTag },
    #[error("the supplied census sits at q = {have}, the request at q = {want}")]
    WrongQ { want: u64, have: u64 },
    #[error("malformed census entry: {0}")]
    MalformedEntry(String),
    #[error("eigenspace data violates its oracle: {0}")]
    EigenspaceOracle(String),
    #[error("mass-weighted trace is not an algebraic integer: {0}")]
    NonIntegral(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("reference table line {line}: {why}")]
    TableParse { line: usize, why: String },
    #[error(transparent)]
    Census(#[from] CensusError),
}

/// Weight (a, b, i) of the local system Sym^a W (x) Sym^b W' (x) det(W)^i.
/// The determinant power only matters modulo 6 and is stored canonically
/// in 0..6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PicardWeight {
    a: u32,
    b: u32,
    i: u8,
}

impl PicardWeight {
    pub fn new(a: u32, b: u32, det_power: i64) -> PicardWeight {
        PicardWeight {
            a,
            b,
            i: det_power.rem_euclid(6) as u8,
        }
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn det_power(&self) -> u8 {
        self.i
    }

    /// The GL(3) highest weight (a+i, i, -b+i) of the local system.
    pub fn lambda(&self) -> (i64, i64, i64) {
        let (a, b, i) = (self.a as i64, self.b as i64, self.i as i64);
        (a + i, i, i - b)
    }

    /// The weight of the conjugate local system: a and b swap and the
    /// determinant power negates (modulo 6).
    pub fn conjugate(&self) -> PicardWeight {
        PicardWeight::new(self.b, self.a, -(self.i as i64))
    }
}

impl fmt::Display for PicardWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={}, det^{})", self.a, self.b, self.i)
    }
}

/// Frobenius data of one census class on the two eigenspaces: power sums
/// p_1..p_3 and elementary symmetric functions e_1..e_3 of the eigenvalue
/// triples of W and W'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardClassData {
    pub w_power: [EisensteinInt; 3],
    pub w_conj_power: [EisensteinInt; 3],
    pub w_elem: [EisensteinInt; 3],
    pub w_conj_elem: [EisensteinInt; 3],
}

/// Exact division of an Eisenstein integer by a rational integer, with a
/// caller-supplied label for the error path.
fn div_checked(x: &EisensteinInt, n: i64, what: &str) -> Result<EisensteinInt, PicardError> {
    let n = BigInt::from(n);
    let (qa, ra) = x.a.div_rem(&n);
    let (qb, rb) = x.b.div_rem(&n);
    if !ra.is_zero() || !rb.is_zero() {
        return Err(PicardError::EigenspaceOracle(format!(
            "{what} requires dividing {x} by {n} exactly"
        )));
    }
    Ok(EisensteinInt::new(qa, qb))
}

/// e_1, e_2, e_3 of an eigenvalue triple from its power sums, by the
/// Newton identities; divisions must be exact over Z[rho].
fn elementary(p: &[EisensteinInt; 3]) -> Result<[EisensteinInt; 3], PicardError> {
    let e1 = p[0].clone();
    let e2 = div_checked(&(&(&e1 * &p[0]) - &p[1]), 2, "e_2")?;
    let e3 = div_checked(&(&(&(&e2 * &p[0]) - &(&e1 * &p[1])) + &p[2]), 3, "e_3")?;
    Ok([e1, e2, e3])
}

/// Extracts and validates the eigenspace data of one census entry.
///
/// Hard checks: the entry is a Picard key with three power-sum pairs, each
/// pair is conjugate (so the pair sums are the rational integers
/// q^i + 1 - N_i counted directly at build time), each sum obeys the
/// eigenvalue bound N(p_i) <= 9 q^i, and the eigenvalue products satisfy
/// e_3(W) e_3(W') = q^3.
pub fn picard_class_data(class: &FrobeniusClass, q: u64) -> Result<PicardClassData, PicardError> {
    if class.family != FamilyTag::Picard {
        return Err(PicardError::WrongFamily {
            found: class.family,
        });
    }
    let PowerSums::Eisenstein(pairs) = &class.power_sums else {
        return Err(PicardError::MalformedEntry(
            "picard entry without eigenspace pairs".into(),
        ));
    };
    if pairs.len() != 3 {
        return Err(PicardError::MalformedEntry(format!(
            "expected 3 eigenspace pairs, found {}",
            pairs.len()
        )));
    }
    let mut w_power: Vec<EisensteinInt> = Vec::with_capacity(3);
    let mut w_conj_power: Vec<EisensteinInt> = Vec::with_capacity(3);
    for (idx, (w, wc)) in pairs.iter().enumerate() {
        let degree = idx as u32 + 1;
        if &w.conj() != wc {
            return Err(PicardError::EigenspaceOracle(format!(
                "pair at degree {degree} is not conjugate: ({w}, {wc})"
            )));
        }
        // |p_i| <= 3 q^{i/2} for a rank-3 eigenspace of weight 1.
        let bound = BigInt::from(9) * BigInt::from(q).pow(degree);
        if w.algebraic_norm() > bound {
            return Err(PicardError::EigenspaceOracle(format!(
                "sum {w} at degree {degree} violates the eigenvalue bound at q = {q}"
            )));
        }
        w_power.push(w.clone());
        w_conj_power.push(wc.clone());
    }
    let w_power: [EisensteinInt; 3] = w_power.try_into().expect("length checked");
    let w_conj_power: [EisensteinInt; 3] = w_conj_power.try_into().expect("length checked");
    let w_elem = elementary(&w_power)?;
    let w_conj_elem = elementary(&w_conj_power)?;
    let q3 = EisensteinInt::new(BigInt::from(q).pow(3), BigInt::zero());
    if &w_elem[2] * &w_conj_elem[2] != q3 {
        return Err(PicardError::EigenspaceOracle(format!(
            "eigenvalue products {} and {} do not multiply to q^3 at q = {q}",
            w_elem[2], w_conj_elem[2]
        )));
    }
    Ok(PicardClassData {
        w_power,
        w_conj_power,
        w_elem,
        w_conj_elem,
    })
}

/// The census with the roles of the two eigenspaces exchanged, which is
/// the effect of conjugating the cubic character that labels them.
pub fn conjugate_census(census: &Census) -> Result<Census, PicardError> {
    if census.family != FamilyTag::Picard {
        return Err(PicardError::WrongFamily {
            found: census.family,
        });
    }
    let entries = census
        .entries
        .iter()
        .map(|(class, &count)| {
            let PowerSums::Eisenstein(pairs) = &class.power_sums else {
                return Err(PicardError::MalformedEntry(
                    "picard entry without eigenspace pairs".into(),
                ));
            };
            let swapped = pairs.iter().map(|(w, wc)| (wc.clone(), w.clone())).collect();
            Ok((
                FrobeniusClass {
                    family: class.family,
                    power_sums: PowerSums::Eisenstein(swapped),
                    aut_order: class.aut_order,
                    twistable: class.twistable,
                },
                count,
            ))
        })
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    Ok(Census {
        q: census.q,
        family: census.family,
        normalization: census.normalization,
        entries,
    })
}

/// h_0..h_n of an eigenvalue triple with elementary symmetric functions e,
/// via h_m = e_1 h_{m-1} - e_2 h_{m-2} + e_3 h_{m-3}.
fn h_prefix(e: &[EisensteinInt; 3], n: u32) -> Vec<EisensteinInt> {
    let mut h = vec![EisensteinInt::one()];
    for m in 1..=n as usize {
        let mut v = &e[0] * &h[m - 1];
        if m >= 2 {
            v = &v - &(&e[1] * &h[m - 2]);
        }
        if m >= 3 {
            v = &v + &(&e[2] * &h[m - 3]);
        }
        h.push(v);
    }
    h
}

fn expect_picard_at(census: &Census, q: u64) -> Result<(), PicardError> {
    if census.family != FamilyTag::Picard {
        return Err(PicardError::WrongFamily {
            found: census.family,
        });
    }
    if census.q != q {
        return Err(PicardError::WrongQ {
            want: q,
            have: census.q,
        });
    }
    Ok(())
}

/// Trace of Frobenius on e_c of the weight-(a, b, i) local system: the
/// mass-weighted sum over classes of h_a(W) h_b(W') e_3(W)^i. The total
/// must be an algebraic integer in Z[rho]; a fractional total signals a
/// normalization bug and is reported as an error.
pub fn picard_ec_trace(
    w: &PicardWeight,
    census: &Census,
    q: u64,
) -> Result<EisensteinInt, PicardError> {
    expect_picard_at(census, q)?;
    let mut acc_a = BigRational::zero();
    let mut acc_b = BigRational::zero();
    for (class, &count) in &census.entries {
        let data = picard_class_data(class, q)?;
        let ha = h_prefix(&data.w_elem, w.a).pop().expect("nonempty");
        let hb = h_prefix(&data.w_conj_elem, w.b).pop().expect("nonempty");
        let det = data.w_elem[2].pow(w.i as u32);
        let value = &(&ha * &hb) * &det;
        let mass = census.entry_mass(class, count);
        acc_a += &mass * BigRational::from_integer(value.a);
        acc_b += &mass * BigRational::from_integer(value.b);
    }
    if !acc_a.is_integer() || !acc_b.is_integer() {
        return Err(PicardError::NonIntegral(format!(
            "weight {w} at q = {q} gives {acc_a} + ({acc_b}) rho"
        )));
    }
    Ok(EisensteinInt::new(acc_a.to_integer(), acc_b.to_integer()))
}

/// Multiset of values e_3(W)^6 across the classes of a census, and
/// whether it is constant. The determinant eigenspace is expected to have
/// constant sixth power, but this is observed rather than asserted, so
/// the probe never fails on a varying multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixthPowerReport {
    pub q: u64,
    /// Distinct values of e_3(W)^6 with the number of classes attaining
    /// each.
    pub values: Vec<(EisensteinInt, u64)>,
    pub constant: bool,
}

impl fmt::Display for SixthPowerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constant, self.values.first()) {
            (_, None) => write!(f, "det(W)^6 at q = {}: no classes", self.q),
            (true, Some((v, n))) => write!(
                f,
                "det(W)^6 at q = {}: constant, value {v} across {n} classes",
                self.q
            ),
            (false, _) => {
                write!(f, "det(W)^6 at q = {}: VARIES over", self.q)?;
                for (v, n) in &self.values {
                    write!(f, " [{v} x{n}]")?;
                }
                Ok(())
            }
        }
    }
}

pub fn picard_sixth_power_probe(census: &Census, q: u64) -> Result<SixthPowerReport, PicardError> {
    expect_picard_at(census, q)?;
    let mut tally: BTreeMap<EisensteinInt, u64> = BTreeMap::new();
    for class in census.entries.keys() {
        let data = picard_class_data(class, q)?;
        *tally.entry(data.w_elem[2].pow(6)).or_insert(0) += 1;
    }
    let constant = tally.len() <= 1;
    Ok(SixthPowerReport {
        q,
        values: tally.into_iter().collect(),
        constant,
    })
}

/// An eigenvalue row of the ingested reference table: the Hecke index is
/// a prime element alpha of Z[rho] above the rational prime p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiEigenvalue {
    pub alpha: EisensteinInt,
    pub value: EisensteinInt,
}

/// Reference eigenvalues of the three weight-(1,7) forms generating the
/// module of vector-valued forms over the scalar-valued ring, keyed by
/// the rational prime under alpha. Shipped as context for comparison
/// reports; nothing in this crate claims to reproduce them.
#[derive(Clone, Debug, Default)]
pub struct PhiTable {
    pub header: Vec<String>,
    pub entries: BTreeMap<u64, PhiEigenvalue>,
}

/// Parses `p alpha value` rows with `#` headers; alpha and value use the
/// `a+b*rho` syntax. Each alpha must be a prime element: its norm must be
/// p (split case) or p^2 (inert case).
pub fn parse_phi_table(text: &str) -> Result<PhiTable, PicardError> {
    let mut table = PhiTable::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            table.header.push(h.trim().to_string());
            continue;
        }
        let err = |why: String| PicardError::TableParse { line: idx + 1, why };
        let mut fields = line.split_whitespace();
        let (Some(p_str), Some(alpha_str), Some(value_str), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(err("expected `p alpha value`".into()));
        };
        let p: u64 = p_str
            .parse()
            .map_err(|_| err(format!("bad prime {p_str:?}")))?;
        if split_prime_power(p) != Some((p, 1)) {
            return Err(err(format!("{p} is not prime")));
        }
        let alpha: EisensteinInt = alpha_str.parse().map_err(|_| {
            err(format!("bad element {alpha_str:?}"))
        })?;
        let value: EisensteinInt = value_str.parse().map_err(|_| {
            err(format!("bad element {value_str:?}"))
        })?;
        let norm = alpha.algebraic_norm();
        if norm != BigInt::from(p) && norm != BigInt::from(p * p) {
            return Err(err(format!(
                "norm of {alpha} is {norm}, expected {p} or {}",
                p * p
            )));
        }
        if table.entries.insert(p, PhiEigenvalue { alpha, value }).is_some() {
            return Err(PicardError::TableParse {
                line: idx + 1,
                why: format!("duplicate entry for p = {p}"),
            });
        }
    }
    Ok(table)
}

/// The bundled reference table of weight-(1,7) eigenvalues.
pub fn phi_reference_table() -> PhiTable {
    parse_phi_table(include_str!("../tables/phi_s17.txt")).expect("bundled table parses")
}

/// Which of the two structural Euler-characteristic formulas a comparison
/// report is laid out against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComparisonFamily {
    /// lambda = (6k, 0, 0): scalar-valued side.
    Scalar,
    /// lambda = (6k+1, 0, -1): vector-valued side.
    VectorValued,
}

/// A structural comparison of one computed e_c trace against the expected
/// shape of its interior cohomology,
///
///   e_! = (multiplicities) L^{x,y} + (cusp-form trace term),
///
/// with the Eisenstein and endoscopic corrections left symbolic: they are
/// not determined by the trace data, so the report presents the computed
/// value next to the expected shape without asserting agreement.
#[derive(Clone, Debug)]
pub struct EulerComparison {
    pub family: ComparisonFamily,
    pub k: u32,
    pub weight: PicardWeight,
    pub q: u64,
    pub ec_trace: EisensteinInt,
    /// Multiplicities of the three symmetry types s[4], s[3,1], s[2,2]
    /// in the character-twist part.
    pub l_multiplicity: (u32, u32, u32),
    /// Exponent pair (x, y) of the character factor L^{x,y}.
    pub l_exponents: (u32, u32),
    /// Label of the residual cusp-form trace term.
    pub cusp_label: String,
    /// Reference eigenvalue at this q from the ingested table, shown for
    /// context only.
    pub reference: Option<PhiEigenvalue>,
}

impl fmt::Display for EulerComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m4, m31, m22) = self.l_multiplicity;
        let (x, y) = self.l_exponents;
        writeln!(
            f,
            "e_c trace at q = {} for weight {}: {}",
            self.q, self.weight, self.ec_trace
        )?;
        writeln!(
            f,
            "expected interior shape: ({m4} s[4] + {m31} s[3,1] + {m22} s[2,2]) L^{{{x},{y}}} + {}",
            self.cusp_label
        )?;
        writeln!(
            f,
            "Eisenstein and endoscopic corrections are not determined here; no agreement is asserted"
        )?;
        if let Some(r) = &self.reference {
            writeln!(
                f,
                "reference weight-(1,7) eigenvalue at alpha = {}: {}",
                r.alpha, r.value
            )?;
        }
        Ok(())
    }
}

/// Builds the comparison report for one of the two structural formulas at
/// level k >= 1.
pub fn euler_comparison(
    family: ComparisonFamily,
    k: u32,
    q: u64,
    census: &Census,
    refs: Option<&PhiTable>,
) -> Result<EulerComparison, PicardError> {
    if k == 0 {
        return Err(PicardError::BadParameter(
            "comparison reports need k >= 1".into(),
        ));
    }
    let (weight, l_multiplicity, l_exponents, cusp_label) = match family {
        ComparisonFamily::Scalar => (
            PicardWeight::new(6 * k, 0, 0),
            (k, k, k),
            (6 * k + 1, 1),
            format!("S[0,{},det^2]", 6 * k + 3),
        ),
        ComparisonFamily::VectorValued => (
            PicardWeight::new(6 * k + 1, 1, 0),
            (k, k, k + 1),
            (6 * k + 2, 2),
            format!("S[1,{},det^2]", 6 * k + 4),
        ),
    };
    let ec_trace = picard_ec_trace(&weight, census, q)?;
    let reference = refs.and_then(|t| t.entries.get(&q).cloned());
    Ok(EulerComparison {
        family,
        k,
        weight,
        q,
        ec_trace,
        l_multiplicity,
        l_exponents,
        cusp_label,
        reference,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::LazyLock;

    use super::*;
    use crate::census::build_census_picard;

    static Q4: LazyLock<Census> = LazyLock::new(|| build_census_picard(4).unwrap());
    static Q7: LazyLock<Census> = LazyLock::new(|| build_census_picard(7).unwrap());

    fn ei(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::from_i64(a, b)
    }

    #[test]
    fn weight_encoding_and_conjugation() {
        let w = PicardWeight::new(4, 1, -1);
        assert_eq!(w.det_power(), 5);
        assert_eq!(w.lambda(), (9, 5, 4));
        assert_eq!(w.conjugate(), PicardWeight::new(1, 4, 1));
        assert_eq!(w.conjugate().conjugate(), w);
        let flat = PicardWeight::new(2, 3, 0);
        assert_eq!(flat.conjugate(), PicardWeight::new(3, 2, 0));
        assert_eq!(flat.lambda(), (2, 0, -3));
        assert_eq!(flat.to_string(), "(a=2, b=3, det^0)");
    }

    #[test]
    fn class_data_validates_every_entry() {
        for census in [&*Q4, &*Q7] {
            let q = census.q;
            let q3 = EisensteinInt::from_i64((q * q * q) as i64, 0);
            for class in census.entries.keys() {
                let data = picard_class_data(class, q).unwrap();
                assert_eq!(&data.w_elem[2] * &data.w_conj_elem[2], q3);
                for k in 0..3 {
                    assert_eq!(data.w_conj_power[k], data.w_power[k].conj());
                    let sum = &data.w_power[k] + &data.w_conj_power[k];
                    assert!(sum.b.is_zero(), "pair sums must be rational integers");
                }
            }
        }
        let g1 = crate::census::build_census_g1(7).unwrap();
        let class = g1.entries.keys().next().unwrap();
        assert!(matches!(
            picard_class_data(class, 7),
            Err(PicardError::WrongFamily { .. })
        ));
    }

    #[test]
    fn trivial_weight_counts_points() {
        for census in [&*Q4, &*Q7] {
            let q = census.q;
            let trace = picard_ec_trace(&PicardWeight::new(0, 0, 0), census, q).unwrap();
            assert_eq!(trace, ei((q * q) as i64, 0), "q = {q}");
        }
        assert!(matches!(
            picard_ec_trace(&PicardWeight::new(0, 0, 0), &Q7, 4),
            Err(PicardError::WrongQ { want: 4, have: 7 })
        ));
    }

    #[test]
    fn traces_are_algebraic_integers() {
        for census in [&*Q4, &*Q7] {
            let q = census.q;
            for a in 0..=6u32 {
                for b in 0..=(6 - a) {
                    for i in 0..3i64 {
                        let w = PicardWeight::new(a, b, i);
                        picard_ec_trace(&w, census, q)
                            .unwrap_or_else(|e| panic!("weight {w} at q = {q}: {e}"));
                    }
                }
            }
        }
    }

    #[test]
    fn census_conjugation_conjugates_traces() {
        for census in [&*Q4, &*Q7] {
            let q = census.q;
            let conj = conjugate_census(census).unwrap();
            assert_eq!(conj.total_mass(), census.total_mass());
            for (a, b, i) in [(0u32, 0u32, 1i64), (1, 0, 0), (2, 1, 1), (1, 1, 2), (3, 0, 5)] {
                let w = PicardWeight::new(a, b, i);
                let direct = picard_ec_trace(&w, census, q).unwrap();
                let swapped = picard_ec_trace(&w, &conj, q).unwrap();
                assert_eq!(swapped, direct.conj(), "weight {w} at q = {q}");
            }
        }
    }

    #[test]
    fn weight_swap_conjugates_determinant_free_traces() {
        for census in [&*Q4, &*Q7] {
            let q = census.q;
            for a in 0..=3u32 {
                for b in 0..=3u32 {
                    let w = PicardWeight::new(a, b, 0);
                    let direct = picard_ec_trace(&w, census, q).unwrap();
                    let swapped = picard_ec_trace(&w.conjugate(), census, q).unwrap();
                    assert_eq!(swapped, direct.conj(), "weight {w} at q = {q}");
                }
            }
        }
    }

    #[test]
    fn weight_conjugation_twists_by_the_determinant_constant() {
        // e_3(W)^6 is observed constant per census at the tested sizes
        // (pinned here as a regression); granting that constant C, a
        // conjugated weight with det-power i in 1..6 lands on the exponent
        // 6 - i, so per class the conjugated trace picks up C / q^{3i}:
        //   q^{3i} trace(conj w) = C conj(trace w).
        // At i = 0 the twist disappears; that case has its own test.
        for census in [&*Q4, &*Q7] {
            let q = census.q;
            let report = picard_sixth_power_probe(census, q).unwrap();
            assert!(report.constant, "determinant constancy at q = {q}");
            let c = &report.values[0].0;
            if q == 4 {
                assert_eq!(c, &ei(262144, 0), "2 is inert, so C must be q^9");
            }
            for (a, b) in [(0u32, 0u32), (3, 0), (1, 1), (2, 2), (0, 2)] {
                for i in 1..6i64 {
                    let w = PicardWeight::new(a, b, i);
                    let direct = picard_ec_trace(&w, census, q).unwrap();
                    let swapped = picard_ec_trace(&w.conjugate(), census, q).unwrap();
                    let q3i = EisensteinInt::new(BigInt::from(q).pow(3 * i as u32), BigInt::zero());
                    assert_eq!(&q3i * &swapped, c * &direct.conj(), "weight {w} at q = {q}");
                }
            }
        }
    }

    #[test]
    fn eigenspace_oracle_holds_at_q13() {
        // The builder enforces the direct-count oracle per family member;
        // this revalidates the aggregated classes through the public path.
        let census = build_census_picard(13).unwrap();
        for class in census.entries.keys() {
            picard_class_data(class, 13).unwrap();
        }
    }

    #[test]
    fn sixth_power_probe_is_structurally_sound() {
        for census in [&*Q4, &*Q7] {
            let q = census.q;
            let report = picard_sixth_power_probe(census, q).unwrap();
            let classes: u64 = report.values.iter().map(|(_, n)| n).sum();
            assert_eq!(classes, census.entries.len() as u64);
            assert_eq!(report.constant, report.values.len() <= 1);

            let conj_report = picard_sixth_power_probe(&conjugate_census(census).unwrap(), q)
                .unwrap();
            let mut expected: Vec<(EisensteinInt, u64)> = report
                .values
                .iter()
                .map(|(v, n)| (v.conj(), *n))
                .collect();
            expected.sort();
            assert_eq!(conj_report.values, expected);
        }

        let empty = Census {
            q: 7,
            family: FamilyTag::Picard,
            normalization: 7 * 36,
            entries: BTreeMap::new(),
        };
        let report = picard_sixth_power_probe(&empty, 7).unwrap();
        assert!(report.values.is_empty());
        assert!(report.to_string().contains("no classes"));
    }

    #[test]
    fn reference_table_parses_and_norms_match() {
        let table = phi_reference_table();
        assert_eq!(table.entries.len(), 13);
        let seven = &table.entries[&7];
        assert_eq!(seven.alpha, ei(1, 3));
        assert_eq!(seven.value, ei(759, 261));
        assert_eq!(table.entries[&97].value, ei(5678616, -3870891));
        let two = &table.entries[&2];
        assert_eq!(two.alpha, ei(-2, 0));
        assert_eq!(two.value, ei(72, 0));
        for (&p, row) in &table.entries {
            let norm = row.alpha.algebraic_norm();
            assert!(
                norm == BigInt::from(p) || norm == BigInt::from(p * p),
                "alpha over p = {p}"
            );
        }

        for bad in [
            "7 1+3*rho",
            "7 1+3*rho 759+261*rho extra",
            "8 2 72",
            "7 1+1*rho 5",
            "7 1+3*rho 5\n7 1+3*rho 6",
        ] {
            assert!(
                matches!(parse_phi_table(bad), Err(PicardError::TableParse { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn comparison_reports_have_the_expected_shape() {
        let refs = phi_reference_table();
        let scalar = euler_comparison(ComparisonFamily::Scalar, 1, 7, &Q7, Some(&refs)).unwrap();
        assert_eq!(scalar.weight, PicardWeight::new(6, 0, 0));
        assert_eq!(scalar.l_multiplicity, (1, 1, 1));
        assert_eq!(scalar.l_exponents, (7, 1));
        assert_eq!(scalar.cusp_label, "S[0,9,det^2]");
        assert_eq!(
            scalar.ec_trace,
            picard_ec_trace(&PicardWeight::new(6, 0, 0), &Q7, 7).unwrap()
        );
        assert_eq!(scalar.reference.as_ref().unwrap().value, ei(759, 261));
        assert!(scalar.to_string().contains("no agreement is asserted"));

        let vector =
            euler_comparison(ComparisonFamily::VectorValued, 1, 7, &Q7, None).unwrap();
        assert_eq!(vector.weight, PicardWeight::new(7, 1, 0));
        assert_eq!(vector.l_multiplicity, (1, 1, 2));
        assert_eq!(vector.l_exponents, (8, 2));
        assert_eq!(vector.cusp_label, "S[1,10,det^2]");
        assert!(vector.reference.is_none());

        assert!(matches!(
            euler_comparison(ComparisonFamily::Scalar, 0, 7, &Q7, None),
            Err(PicardError::BadParameter(_))
        ));
    }
}
