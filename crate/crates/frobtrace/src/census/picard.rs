//! Census of the Picard family y^3 = f(x), deg f = 4 squarefree, over F_q
//! with q = 1 (mod 3).
//!
//! The curve carries a mu_3 action (x, y) -> (x, rho y), so Frobenius
//! eigenvalues split into two conjugate triples along the chi- and
//! chi-bar-eigenspaces W and W' of the first cohomology. Per extension
//! degree k = 1, 2, 3 the entry stores the pair of eigenvalue power sums
//! p_k(W) = -s_k and p_k(W') = conj(p_k(W)), where s_k is the cubic
//! character sum of f over F_{q^k} taken with the norm-compatible
//! character chi_k = chi . Norm (the choice that makes p_k(W) the k-th
//! power sum of one fixed eigenvalue triple). The unique point at
//! infinity is fixed by mu_3 and contributes nothing to either sum.
//!
//! Two consistency checks run during the build and fail it hard:
//! p_1(W) + p_1(W') must equal q + 1 - #C(F_q) with the point count taken
//! directly from a cube-count table, and per aggregated entry the product
//! e_3(W) e_3(W') of the eigenvalue products must equal q^3.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::forms::{eval_all, gcd_is_unit, SmallPoly};
use super::{
    check_mass, unsupported, Census, CensusError, FamilyTag, FrobeniusClass, PowerSums,
};
use crate::exactnum::{split_prime_power, EisensteinInt, FieldCtx, Fe};

/// Enumeration cost grows like q^4 forms times q^3 character evaluations.
const MAX_Q: u64 = 31;

type Entries = BTreeMap<FrobeniusClass, u64>;

struct DegreeTables {
    ext: FieldCtx,
    emb: Vec<Fe>,
    /// chi_k(v) = rho^chi[v], with the sentinel 3 for v = 0.
    chi: Vec<u8>,
}

fn degree_tables(base: &FieldCtx, k: u32) -> Result<DegreeTables, CensusError> {
    let ext = FieldCtx::new(base.p, base.n * k)
        .map_err(|e| CensusError::Internal(e.to_string()))?;
    let emb = base
        .embed_into(&ext)
        .map_err(|e| CensusError::Internal(e.to_string()))?;
    // chi_k = chi . Norm, pinned by chi(g) = rho on the base field. For
    // v = G^j the norm is N(G)^j, so chi_k(v) = rho^(t j) where t is the
    // base chi-exponent of N(G); N(G) generates F_q*, so t is 1 or 2.
    let norm_exp = (ext.q - 1) / (base.q - 1);
    let ng = ext.pow(ext.generator(), norm_exp);
    let pre = emb
        .iter()
        .position(|&e| e == ng)
        .ok_or_else(|| CensusError::Internal("norm of a generator left the base field".into()))?;
    let t = base
        .chi3_exp(pre as Fe)
        .expect("norm of a generator is nonzero");
    debug_assert!(t == 1 || t == 2);
    let chi = (0..ext.q as Fe)
        .map(|v| match ext.chi3_exp(v) {
            None => 3u8,
            Some(e) => ((e * t) % 3) as u8,
        })
        .collect();
    Ok(DegreeTables { ext, emb, chi })
}

/// The three (p_k(W), p_k(W')) pairs of one family member.
fn eigenspace_pairs(
    tabs: &[DegreeTables],
    coeffs: &[Fe; 5],
) -> Vec<(EisensteinInt, EisensteinInt)> {
    tabs.iter()
        .map(|t| {
            let vals = eval_all(&t.ext, &coeffs.map(|c| t.emb[c as usize]));
            let mut n = [0i64; 3];
            for &v in &vals {
                let e = t.chi[v as usize];
                if e < 3 {
                    n[e as usize] += 1;
                }
            }
            // s = n0 + n1 rho + n2 rho^2 = (n0 - n2) + (n1 - n2) rho.
            let p = EisensteinInt::from_i64(n[2] - n[0], n[2] - n[1]);
            let pc = p.conj();
            (p, pc)
        })
        .collect()
}

/// e_1, e_2, e_3 of a triple from its first three power sums.
fn elementary_from_power_sums(
    p: &[EisensteinInt; 3],
) -> (EisensteinInt, EisensteinInt, EisensteinInt) {
    let e1 = p[0].clone();
    let e2 = (&(&e1 * &p[0]) - &p[1]).div_exact(&BigInt::from(2));
    let e3 = (&(&(&e2 * &p[0]) - &(&e1 * &p[1])) + &p[2]).div_exact(&BigInt::from(3));
    (e1, e2, e3)
}

pub fn build_census_picard(q: u64) -> Result<Census, CensusError> {
    let Some((p, n)) = split_prime_power(q) else {
        return Err(unsupported(FamilyTag::Picard, q, "not a prime power"));
    };
    if q % 3 != 1 {
        return Err(unsupported(
            FamilyTag::Picard,
            q,
            "the cubic character needs q = 1 (mod 3)",
        ));
    }
    if q > MAX_Q {
        return Err(unsupported(
            FamilyTag::Picard,
            q,
            format!("enumeration supports q <= {MAX_Q}"),
        ));
    }
    // The cubic extension of F_q must stay within the field-table sizes.
    if n > 2 {
        return Err(unsupported(
            FamilyTag::Picard,
            q,
            "the degree-3 extension of F_q exceeds the supported field sizes",
        ));
    }
    let base = FieldCtx::new(p, n).map_err(|e| CensusError::Internal(e.to_string()))?;
    let tabs: Vec<DegreeTables> = (1..=3)
        .map(|k| degree_tables(&base, k))
        .collect::<Result<_, _>>()?;
    let cube_count: Vec<i64> = {
        let mut counts = vec![0i64; q as usize];
        for y in 0..q as Fe {
            counts[base.mul(base.mul(y, y), y) as usize] += 1;
        }
        counts
    };

    // x -> x + b shifts the cubic coefficient by 4 b c4: for odd p each
    // depressed polynomial stands for q translates with identical sums.
    let (c3_vals, weight): (Vec<Fe>, u64) = if p != 2 {
        (vec![0], q)
    } else {
        ((0..q as Fe).collect(), 1)
    };

    let mut entries = Entries::new();
    let qe = q as Fe;
    for c4 in 1..qe {
        for &c3 in &c3_vals {
            for c2 in 0..qe {
                for c1 in 0..qe {
                    for c0 in 0..qe {
                        let coeffs = [c0, c1, c2, c3, c4];
                        let f = SmallPoly::from_slice(&coeffs);
                        if !gcd_is_unit(&base, f, f.derivative(&base)) {
                            continue;
                        }
                        let pairs = eigenspace_pairs(&tabs, &coeffs);

                        // Direct-count oracle for the degree-1 pair.
                        let n1_direct: i64 = 1 + eval_all(&base, &coeffs)
                            .iter()
                            .map(|&v| cube_count[v as usize])
                            .sum::<i64>();
                        let a1 = &pairs[0].0 + &pairs[0].1;
                        if a1 != EisensteinInt::from_i64(q as i64 + 1 - n1_direct, 0) {
                            return Err(CensusError::Internal(format!(
                                "eigenspace sums disagree with the direct point count \
                                 at q = {q}, f = {coeffs:?}"
                            )));
                        }

                        let key = FrobeniusClass {
                            family: FamilyTag::Picard,
                            power_sums: PowerSums::Eisenstein(pairs),
                            aut_order: None,
                            twistable: false,
                        };
                        *entries.entry(key).or_insert(0) += weight;
                    }
                }
            }
        }
    }

    // Every entry's eigenvalue triples must multiply out to q^3.
    let q3 = EisensteinInt::from_i64((q * q * q) as i64, 0);
    for class in entries.keys() {
        let PowerSums::Eisenstein(pairs) = &class.power_sums else {
            unreachable!("picard census builds Eisenstein keys");
        };
        let pw: [EisensteinInt; 3] = [
            pairs[0].0.clone(),
            pairs[1].0.clone(),
            pairs[2].0.clone(),
        ];
        let pwc: [EisensteinInt; 3] = [
            pairs[0].1.clone(),
            pairs[1].1.clone(),
            pairs[2].1.clone(),
        ];
        let (_, _, e3) = elementary_from_power_sums(&pw);
        let (_, _, e3c) = elementary_from_power_sums(&pwc);
        if &e3 * &e3c != q3 {
            return Err(CensusError::Internal(format!(
                "eigenvalue products of an entry do not multiply to q^3 at q = {q}"
            )));
        }
    }

    let census = Census {
        q,
        family: FamilyTag::Picard,
        normalization: q * (q - 1) * (q - 1),
        entries,
    };
    census.validate()?;
    check_mass(&census, BigRational::from_integer(BigInt::from(q * q)))?;
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_sum_to_elementary_round_trip() {
        // alpha = 1 + 3 rho, beta = 2 - rho, gamma = -1 + rho.
        let al = EisensteinInt::from_i64(1, 3);
        let be = EisensteinInt::from_i64(2, -1);
        let ga = EisensteinInt::from_i64(-1, 1);
        let p1 = &(&al + &be) + &ga;
        let p2 = &(&(&al * &al) + &(&be * &be)) + &(&ga * &ga);
        let p3 = &(&(&al * &(&al * &al)) + &(&be * &(&be * &be))) + &(&ga * &(&ga * &ga));
        let (e1, e2, e3) = elementary_from_power_sums(&[p1.clone(), p2, p3]);
        assert_eq!(e1, p1);
        let e2_direct = &(&(&al * &be) + &(&al * &ga)) + &(&be * &ga);
        assert_eq!(e2, e2_direct);
        assert_eq!(e3, &al * &(&be * &ga));
    }

    /// The census pairs must reproduce direct brute-force point counts of
    /// y^3 = f(x) over F_{q^k} for k = 1, 2, 3; this pins the
    /// norm-compatibility of the per-degree characters.
    #[test]
    fn eigenspace_pairs_match_bruteforce_counts_over_extensions() {
        let base = FieldCtx::new(7, 1).unwrap();
        let tabs: Vec<DegreeTables> = (1..=3).map(|k| degree_tables(&base, k).unwrap()).collect();
        for coeffs in [[1, 0, 0, 0, 1], [0, 1, 0, 0, 1], [3, 2, 5, 1, 2], [1, 1, 0, 2, 6]] {
            let f = SmallPoly::from_slice(&coeffs);
            assert!(
                gcd_is_unit(&base, f, f.derivative(&base)),
                "test forms must be squarefree"
            );
            let pairs = eigenspace_pairs(&tabs, &coeffs);
            for (k, t) in tabs.iter().enumerate() {
                let ext = &t.ext;
                let fe: Vec<Fe> = coeffs.iter().map(|&c| t.emb[c as usize]).collect();
                let mut n: i64 = 1;
                for x in 0..ext.q as Fe {
                    let mut v = 0 as Fe;
                    for &c in fe.iter().rev() {
                        v = ext.add(ext.mul(v, x), c);
                    }
                    for y in 0..ext.q as Fe {
                        if ext.mul(ext.mul(y, y), y) == v {
                            n += 1;
                        }
                    }
                }
                let ak = ext.q as i64 + 1 - n;
                assert_eq!(
                    &pairs[k].0 + &pairs[k].1,
                    EisensteinInt::from_i64(ak, 0),
                    "degree {}",
                    k + 1
                );
            }
        }
    }

    #[test]
    fn census_at_q7_has_mass_49() {
        let census = build_census_picard(7).unwrap();
        assert_eq!(
            census.total_mass(),
            BigRational::from_integer(BigInt::from(49))
        );
        assert_eq!(census.normalization, 7 * 36);
        for class in census.entries.keys() {
            let PowerSums::Eisenstein(pairs) = &class.power_sums else {
                panic!("expected Eisenstein keys");
            };
            assert_eq!(pairs.len(), 3);
            for (w, wc) in pairs {
                assert_eq!(&w.conj(), wc);
            }
        }
    }

    #[test]
    fn census_at_q4_has_mass_16() {
        let census = build_census_picard(4).unwrap();
        assert_eq!(
            census.total_mass(),
            BigRational::from_integer(BigInt::from(16))
        );
    }

    #[test]
    fn unsupported_sizes_are_rejected() {
        for q in [3, 5, 6, 11, 16, 27, 37, 49] {
            assert!(
                matches!(build_census_picard(q), Err(CensusError::Unsupported { .. })),
                "q = {q}"
            );
        }
    }
}
