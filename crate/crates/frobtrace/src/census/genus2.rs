//! Genus-2 censuses over F_q.
//!
//! Odd characteristic enumerates the family of squarefree binary sextic
//! forms through its affine sectors: polynomials of degree 6 (two points,
//! one point, or a ramified pair over the place at infinity, decided by the
//! leading coefficient's character) and degree 5 (one ramified point at
//! infinity). Whenever the characteristic allows, the subleading coefficient
//! is removed by a translation and each depressed polynomial stands for q
//! family members. The substitution group is GL2 acting on forms together
//! with square rescalings of the right-hand side, of effective order |GL2|,
//! so the family census carries normalization |GL2(F_q)|.
//!
//! Characteristic 2 enumerates pairs (h, f) with y^2 + h(x) y = f(x),
//! deg h <= 3, deg f <= 6, under substitutions of effective order
//! |GL2(F_q)| q^4.
//!
//! Both spaces double as the state space of an isomorphism-class search
//! (`with_aut = true`): a breadth-first orbit walk under generators of the
//! substitution group, with |Aut| = normalization / orbit size. The class
//! and family censuses are computed by disjoint code paths and the test
//! suite demands they agree key by key, which pins down both the orbit
//! bookkeeping and the depression weights.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::forms::{apply_form_matrix, eval_all, form_comp_matrix, gcd_is_unit, MatrixPair, SmallPoly};
use super::{
    check_mass, merge_entries, unsupported, Census, CensusError, FamilyTag, FrobeniusClass,
};
use crate::exactnum::{split_prime_power, FieldCtx, Fe};

/// Family-scan cap in odd characteristic (cost grows like q^7).
const MAX_Q_ODD: u64 = 23;
/// Class-search cap in odd characteristic (q^7 states in memory).
const MAX_Q_ODD_CLASSES: u64 = 5;
/// Characteristic-2 cap, both modes (q^11 states).
const MAX_Q_CHAR2: u64 = 4;

type Entries = BTreeMap<FrobeniusClass, u64>;

/// Knobs for long-running builds; the default runs in one piece in memory.
#[derive(Clone, Debug, Default)]
pub struct Genus2BuildOptions {
    /// Directory for per-shard partial histograms. A rerun with the same
    /// directory loads finished shards instead of recomputing them. Applies
    /// to the sharded odd-characteristic family scan.
    pub checkpoint_dir: Option<PathBuf>,
    /// Cooperative cancellation flag, checked at shard boundaries and
    /// periodically inside class searches.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Genus2BuildOptions {
    fn cancelled(&self) -> bool {
        self.cancel
            .as_ref()
            .is_some_and(|flag| flag.load(Ordering::Relaxed))
    }
}

pub fn build_census_g2(q: u64, with_aut: bool) -> Result<Census, CensusError> {
    build_census_g2_opts(q, with_aut, &Genus2BuildOptions::default())
}

/// Builds the genus-2 census at q: the family histogram keyed by
/// (a_1, a_2), or the isomorphism-class histogram when `with_aut` is set.
pub fn build_census_g2_opts(
    q: u64,
    with_aut: bool,
    opts: &Genus2BuildOptions,
) -> Result<Census, CensusError> {
    let (p, n) = split_prime_power(q)
        .ok_or_else(|| unsupported(FamilyTag::G2, q, "not a prime power"))?;
    if p == 2 && q > MAX_Q_CHAR2 {
        return Err(unsupported(
            FamilyTag::G2,
            q,
            format!("characteristic-2 enumeration supports q <= {MAX_Q_CHAR2}"),
        ));
    }
    if p != 2 && q > MAX_Q_ODD {
        return Err(unsupported(
            FamilyTag::G2,
            q,
            format!("odd-characteristic enumeration supports q <= {MAX_Q_ODD}"),
        ));
    }
    if with_aut && p != 2 && q > MAX_Q_ODD_CLASSES {
        return Err(unsupported(
            FamilyTag::G2,
            q,
            format!("isomorphism-class search supports q <= {MAX_Q_ODD_CLASSES}"),
        ));
    }
    let ctx = FieldCtx::new(p, n).map_err(|e| CensusError::Internal(e.to_string()))?;
    let big = FieldCtx::new(p, 2 * n).map_err(|e| CensusError::Internal(e.to_string()))?;
    let emb = ctx
        .embed_into(&big)
        .map_err(|e| CensusError::Internal(e.to_string()))?;

    let gl2 = (q * q - 1) * (q * q - q);
    let normalization = if p == 2 { gl2 * q * q * q * q } else { gl2 };
    let entries = match (p == 2, with_aut) {
        (false, false) => odd_mass(&ctx, &big, &emb, normalization, opts)?,
        (false, true) => odd_classes(&ctx, &big, &emb, gl2, opts)?,
        (true, false) => char2_mass(&ctx, &big, &emb, opts)?,
        (true, true) => char2_classes(&ctx, &big, &emb, normalization, opts)?,
    };
    let census = Census {
        q,
        family: FamilyTag::G2,
        normalization,
        entries,
    };
    census.validate()?;
    check_mass(
        &census,
        BigRational::from_integer(BigInt::from(q) * BigInt::from(q) * BigInt::from(q)),
    )?;
    Ok(census)
}

fn g2_class(a1: i64, a2: i64, aut: Option<u64>) -> FrobeniusClass {
    FrobeniusClass::integer(FamilyTag::G2, vec![a1, a2], aut)
}

fn eval_all_emb(big: &FieldCtx, emb: &[Fe], coeffs: &[Fe]) -> Vec<Fe> {
    let ec: Vec<Fe> = coeffs.iter().map(|&c| emb[c as usize]).collect();
    eval_all(big, &ec)
}

// --- odd characteristic ---

/// Character tables shared across the scan, with the constant term folded
/// into the lookup: chi_shift[c0][v] = chi(v + c0).
struct OddTables<'a> {
    ctx: &'a FieldCtx,
    big: &'a FieldCtx,
    emb: &'a [Fe],
    chi_small: Vec<i8>,
    chi_big: Vec<i8>,
    chi_shift_small: Vec<Vec<i8>>,
    chi_shift_big: Vec<Vec<i8>>,
}

impl<'a> OddTables<'a> {
    fn new(ctx: &'a FieldCtx, big: &'a FieldCtx, emb: &'a [Fe]) -> OddTables<'a> {
        let chi_small: Vec<i8> = (0..ctx.q as Fe).map(|v| ctx.chi2(v) as i8).collect();
        let chi_big: Vec<i8> = (0..big.q as Fe).map(|v| big.chi2(v) as i8).collect();
        let chi_shift_small: Vec<Vec<i8>> = (0..ctx.q as Fe)
            .map(|c0| {
                (0..ctx.q as Fe)
                    .map(|v| chi_small[ctx.add(v, c0) as usize])
                    .collect()
            })
            .collect();
        let chi_shift_big: Vec<Vec<i8>> = (0..ctx.q as Fe)
            .map(|c0| {
                let e = emb[c0 as usize];
                (0..big.q as Fe)
                    .map(|v| chi_big[big.add(v, e) as usize])
                    .collect()
            })
            .collect();
        OddTables {
            ctx,
            big,
            emb,
            chi_small,
            chi_big,
            chi_shift_small,
            chi_shift_big,
        }
    }
}

/// Scans the constant coefficient over F_q for one fixed tail
/// (coeffs[1..=deg], with coeffs[0] = 0 as a placeholder) and adds every
/// squarefree member's key to the histogram with the given weight.
fn scan_c0_line(t: &OddTables<'_>, coeffs: &[Fe], weight: u64, out: &mut Entries) {
    let ctx = t.ctx;
    let q = ctx.q;
    let deg = coeffs.len() - 1;
    debug_assert!(coeffs[0] == 0 && coeffs[deg] != 0);

    let tail_small = eval_all(ctx, coeffs);
    let tail_big = eval_all_emb(t.big, t.emb, coeffs);
    let proto = SmallPoly::from_slice(coeffs);
    let deriv = proto.derivative(ctx);
    let c6 = if deg == 6 { coeffs[6] } else { 0 };
    let inf1 = t.chi_small[c6 as usize] as i64;
    let inf2 = t.chi_big[t.emb[c6 as usize] as usize] as i64;

    for c0 in 0..q as Fe {
        let mut f = proto;
        f.c[0] = c0;
        if !gcd_is_unit(ctx, f, deriv) {
            continue;
        }
        let shift_s = &t.chi_shift_small[c0 as usize];
        let shift_b = &t.chi_shift_big[c0 as usize];
        let t1: i64 = tail_small.iter().map(|&v| shift_s[v as usize] as i64).sum();
        let t2: i64 = tail_big.iter().map(|&v| shift_b[v as usize] as i64).sum();
        let a1 = -(t1 + inf1);
        let a2 = -(t2 + inf2);
        *out.entry(g2_class(a1, a2, None)).or_insert(0) += weight;
    }
}

/// One shard of the odd family scan: shards 0..q-1 fix the degree-6 leading
/// coefficient, shards q-1..2(q-1) the degree-5 one.
fn compute_odd_shard(t: &OddTables<'_>, shard: usize) -> Entries {
    let q = t.ctx.q;
    let p = t.ctx.p;
    let qm1 = (q - 1) as usize;
    let merge = |mut a: Entries, b: Entries| {
        merge_entries(&mut a, b);
        a
    };
    if shard < qm1 {
        let c6 = (shard + 1) as Fe;
        // x -> x + b shifts c5 by 6 b c6, so for p >= 5 each depressed
        // polynomial stands for q translates.
        let (c5_vals, weight): (Vec<Fe>, u64) = if p >= 5 {
            (vec![0], q)
        } else {
            ((0..q as Fe).collect(), 1)
        };
        (0..q as Fe)
            .into_par_iter()
            .map(|c4| {
                let mut out = Entries::new();
                for &c5 in &c5_vals {
                    for c3 in 0..q as Fe {
                        for c2 in 0..q as Fe {
                            for c1 in 0..q as Fe {
                                scan_c0_line(t, &[0, c1, c2, c3, c4, c5, c6], weight, &mut out);
                            }
                        }
                    }
                }
                out
            })
            .reduce(Entries::new, merge)
    } else {
        let c5 = (shard - qm1 + 1) as Fe;
        // x -> x + b shifts c4 by 5 b c5: depressible unless p = 5.
        let (c4_vals, weight): (Vec<Fe>, u64) = if p != 5 {
            (vec![0], q)
        } else {
            ((0..q as Fe).collect(), 1)
        };
        (0..q as Fe)
            .into_par_iter()
            .map(|c3| {
                let mut out = Entries::new();
                for &c4 in &c4_vals {
                    for c2 in 0..q as Fe {
                        for c1 in 0..q as Fe {
                            scan_c0_line(t, &[0, c1, c2, c3, c4, c5], weight, &mut out);
                        }
                    }
                }
                out
            })
            .reduce(Entries::new, merge)
    }
}

fn odd_mass(
    ctx: &FieldCtx,
    big: &FieldCtx,
    emb: &[Fe],
    normalization: u64,
    opts: &Genus2BuildOptions,
) -> Result<Entries, CensusError> {
    let q = ctx.q;
    let tables = OddTables::new(ctx, big, emb);
    let shard_count = 2 * (q - 1) as usize;
    let mut entries = Entries::new();
    for shard in 0..shard_count {
        if opts.cancelled() {
            return Err(CensusError::Cancelled);
        }
        let path = opts
            .checkpoint_dir
            .as_ref()
            .map(|dir| dir.join(format!("g2_q{q}_shard{shard:03}.census")));
        if let Some(path) = &path {
            if path.exists() {
                let partial = Census::load(path)?;
                if partial.q != q
                    || partial.family != FamilyTag::G2
                    || partial.normalization != normalization
                {
                    return Err(CensusError::Corrupt {
                        path: path.display().to_string(),
                        line: 0,
                        reason: "checkpoint was built with different parameters".into(),
                    });
                }
                merge_entries(&mut entries, partial.entries);
                continue;
            }
        }
        let partial = compute_odd_shard(&tables, shard);
        if let Some(path) = &path {
            let snapshot = Census {
                q,
                family: FamilyTag::G2,
                normalization,
                entries: partial.clone(),
            };
            let tmp = path.with_extension("census.tmp");
            snapshot.save(&tmp)?;
            std::fs::rename(&tmp, path)?;
        }
        merge_entries(&mut entries, partial);
    }
    Ok(entries)
}

/// Isomorphism classes in odd characteristic: orbit walk over squarefree
/// sextic forms under GL2 substitutions and square rescalings.
fn odd_classes(
    ctx: &FieldCtx,
    big: &FieldCtx,
    emb: &[Fe],
    gl2: u64,
    opts: &Genus2BuildOptions,
) -> Result<Entries, CensusError> {
    let q = ctx.q as usize;
    let g = ctx.generator();
    let mats = [
        form_comp_matrix(ctx, 6, [1, 1, 0, 1]),
        form_comp_matrix(ctx, 6, [g, 0, 0, 1]),
        form_comp_matrix(ctx, 6, [0, 1, 1, 0]),
    ];
    let gsq = ctx.mul(g, g);
    let chi_small: Vec<i8> = (0..ctx.q as Fe).map(|v| ctx.chi2(v) as i8).collect();
    let chi_big: Vec<i8> = (0..big.q as Fe).map(|v| big.chi2(v) as i8).collect();

    let total = q.pow(7);
    let encode = |c: &[Fe; 7]| -> usize {
        c.iter()
            .rev()
            .fold(0usize, |acc, &d| acc * q + d as usize)
    };
    let decode = |mut idx: usize| -> [Fe; 7] {
        let mut c = [0 as Fe; 7];
        for slot in &mut c {
            *slot = (idx % q) as Fe;
            idx /= q;
        }
        c
    };

    let mut visited = vec![false; total];
    let mut entries = Entries::new();
    let mut stack: Vec<u32> = Vec::new();
    for start in 0..total {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        if start % 4096 == 0 && opts.cancelled() {
            return Err(CensusError::Cancelled);
        }
        let coeffs = decode(start);
        // Squarefree as a form: no repeated affine root and no repeated
        // root at infinity (Z^2 divides the form iff c6 = c5 = 0).
        if coeffs[6] == 0 && coeffs[5] == 0 {
            continue;
        }
        let f = SmallPoly::from_slice(&coeffs);
        if !gcd_is_unit(ctx, f, f.derivative(ctx)) {
            continue;
        }

        stack.push(start as u32);
        let mut orbit = 0u64;
        while let Some(state) = stack.pop() {
            orbit += 1;
            let src = decode(state as usize);
            let mut dst = [0 as Fe; 7];
            for m in &mats {
                apply_form_matrix(ctx, m, &src, &mut dst);
                let next = encode(&dst);
                if !visited[next] {
                    visited[next] = true;
                    stack.push(next as u32);
                }
            }
            for (i, &c) in src.iter().enumerate() {
                dst[i] = ctx.mul(c, gsq);
            }
            let next = encode(&dst);
            if !visited[next] {
                visited[next] = true;
                stack.push(next as u32);
            }
        }
        if !gl2.is_multiple_of(orbit) {
            return Err(CensusError::Internal(format!(
                "orbit size {orbit} does not divide |GL2| = {gl2}"
            )));
        }
        let aut = gl2 / orbit;

        let t1: i64 = eval_all(ctx, &coeffs)
            .iter()
            .map(|&v| chi_small[v as usize] as i64)
            .sum();
        let t2: i64 = eval_all_emb(big, emb, &coeffs)
            .iter()
            .map(|&v| chi_big[v as usize] as i64)
            .sum();
        let a1 = -(t1 + chi_small[coeffs[6] as usize] as i64);
        let a2 = -(t2 + chi_big[emb[coeffs[6] as usize] as usize] as i64);
        *entries.entry(g2_class(a1, a2, Some(aut))).or_insert(0) += 1;
    }
    Ok(entries)
}

// --- characteristic 2 ---

fn qsc_table(ctx: &FieldCtx) -> Vec<Vec<u8>> {
    (0..ctx.q as Fe)
        .map(|c| {
            (0..ctx.q as Fe)
                .map(|d| ctx.quadratic_solution_count(c, d) as u8)
                .collect()
        })
        .collect()
}

/// Whether the projective closure of y^2 + h y = f is singular over the
/// place at infinity: h and f are read as a cubic and a sextic form.
fn char2_singular_at_infinity(ctx: &FieldCtx, h: &[Fe], f: &[Fe]) -> bool {
    h[3] == 0
        && ctx.add(
            ctx.mul(f[5], f[5]),
            ctx.mul(ctx.mul(h[2], h[2]), f[6]),
        ) == 0
}

fn char2_mass(
    ctx: &FieldCtx,
    big: &FieldCtx,
    emb: &[Fe],
    opts: &Genus2BuildOptions,
) -> Result<Entries, CensusError> {
    if opts.cancelled() {
        return Err(CensusError::Cancelled);
    }
    let q = ctx.q;
    let qe = q as Fe;
    let qsc_s = qsc_table(ctx);
    let qsc_b = qsc_table(big);

    let entries = (0..(q * q * q * q) as u32)
        .into_par_iter()
        .map(|hidx| {
            let mut out = Entries::new();
            let mut h = [0 as Fe; 4];
            let mut idx = hidx;
            for slot in &mut h {
                *slot = idx % qe;
                idx /= qe;
            }
            let h_poly = SmallPoly::from_slice(&h);
            let hs = eval_all(ctx, &h);
            let hb = eval_all_emb(big, emb, &h);
            let hp = h_poly.derivative(ctx);
            let hp2 = hp.mul(ctx, &hp);
            let qsc_inf_row_s = &qsc_s[h[3] as usize];
            let qsc_inf_row_b = &qsc_b[emb[h[3] as usize] as usize];

            for f6 in 0..qe {
                for f5 in 0..qe {
                    for f4 in 0..qe {
                        for f3 in 0..qe {
                            for f2 in 0..qe {
                                for f1 in 0..qe {
                                    let tail = [0, f1, f2, f3, f4, f5, f6];
                                    if char2_singular_at_infinity(ctx, &h, &tail) {
                                        continue;
                                    }
                                    let gs = eval_all(ctx, &tail);
                                    let gb = eval_all_emb(big, emb, &tail);
                                    let tail_poly = SmallPoly::from_slice(&tail);
                                    let fp = tail_poly.derivative(ctx);
                                    let w0 = fp.mul(ctx, &fp).add(ctx, &hp2.mul(ctx, &tail_poly));
                                    let inf1 = qsc_inf_row_s[f6 as usize] as u64;
                                    let inf2 = qsc_inf_row_b[emb[f6 as usize] as usize] as u64;
                                    for f0 in 0..qe {
                                        let mut shift = SmallPoly {
                                            c: [0; super::forms::POLY_CAP],
                                            len: 5,
                                        };
                                        shift.c[0] = ctx.mul(hp2.c[0], f0);
                                        shift.c[4] = ctx.mul(hp2.c[4], f0);
                                        shift.trim();
                                        let w = w0.add(ctx, &shift);
                                        if !gcd_is_unit(ctx, h_poly, w) {
                                            continue;
                                        }
                                        let f0b = emb[f0 as usize];
                                        let mut n1 = inf1;
                                        for x in 0..q as usize {
                                            n1 += qsc_s[hs[x] as usize]
                                                [ctx.add(gs[x], f0) as usize]
                                                as u64;
                                        }
                                        let mut n2 = inf2;
                                        for xi in 0..big.q as usize {
                                            n2 += qsc_b[hb[xi] as usize]
                                                [big.add(gb[xi], f0b) as usize]
                                                as u64;
                                        }
                                        let a1 = q as i64 + 1 - n1 as i64;
                                        let a2 = (q * q) as i64 + 1 - n2 as i64;
                                        *out.entry(g2_class(a1, a2, None)).or_insert(0) += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            out
        })
        .reduce(Entries::new, |mut a, b| {
            merge_entries(&mut a, b);
            a
        });
    Ok(entries)
}

/// Isomorphism classes in characteristic 2: orbit walk over smooth pairs
/// (cubic form H, sextic form F) under GL2 substitutions, rescalings
/// (H, F) -> (eH, e^2 F), and shears F -> F + U^2 + U H by cubic forms U.
fn char2_classes(
    ctx: &FieldCtx,
    big: &FieldCtx,
    emb: &[Fe],
    normalization: u64,
    opts: &Genus2BuildOptions,
) -> Result<Entries, CensusError> {
    let q = ctx.q as usize;
    let qe = ctx.q as Fe;
    let g = ctx.generator();
    let mat_pairs: Vec<MatrixPair> = [
        [1, 1, 0, 1],
        [g, 0, 0, 1],
        [0, 1, 1, 0],
    ]
    .into_iter()
    .map(|m| (form_comp_matrix(ctx, 3, m), form_comp_matrix(ctx, 6, m)))
    .collect();
    let eps = (ctx.q > 2).then_some((g, ctx.mul(g, g)));
    // F_2-basis shears U = gamma X^j Z^{3-j}.
    let mut u_gens: Vec<(usize, Fe, Fe)> = Vec::new();
    for i in 0..ctx.n {
        let gamma = ctx.pow(g, i as u64);
        for j in 0..4 {
            u_gens.push((j, gamma, ctx.mul(gamma, gamma)));
        }
    }
    let qsc_s = qsc_table(ctx);
    let qsc_b = qsc_table(big);

    let total = q.pow(11);
    let encode = |h: &[Fe; 4], f: &[Fe; 7]| -> usize {
        let mut acc = 0usize;
        for &d in f.iter().rev() {
            acc = acc * q + d as usize;
        }
        for &d in h.iter().rev() {
            acc = acc * q + d as usize;
        }
        acc
    };
    let decode = |mut idx: usize| -> ([Fe; 4], [Fe; 7]) {
        let mut h = [0 as Fe; 4];
        let mut f = [0 as Fe; 7];
        for slot in &mut h {
            *slot = (idx % q) as Fe;
            idx /= q;
        }
        for slot in &mut f {
            *slot = (idx % q) as Fe;
            idx /= q;
        }
        (h, f)
    };

    let mut visited = vec![false; total];
    let mut entries = Entries::new();
    let mut stack: Vec<u32> = Vec::new();
    for start in 0..total {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        if start % 65536 == 0 && opts.cancelled() {
            return Err(CensusError::Cancelled);
        }
        let (h, f) = decode(start);
        if char2_singular_at_infinity(ctx, &h, &f) {
            continue;
        }
        let h_poly = SmallPoly::from_slice(&h);
        let f_poly = SmallPoly::from_slice(&f);
        let hp = h_poly.derivative(ctx);
        let fp = f_poly.derivative(ctx);
        let w = fp
            .mul(ctx, &fp)
            .add(ctx, &hp.mul(ctx, &hp).mul(ctx, &f_poly));
        if !gcd_is_unit(ctx, h_poly, w) {
            continue;
        }

        stack.push(start as u32);
        let mut orbit = 0u64;
        while let Some(state) = stack.pop() {
            orbit += 1;
            let (sh, sf) = decode(state as usize);
            let push = |dh: &[Fe; 4], df: &[Fe; 7], visited: &mut Vec<bool>, stack: &mut Vec<u32>| {
                let next = encode(dh, df);
                if !visited[next] {
                    visited[next] = true;
                    stack.push(next as u32);
                }
            };
            for (m3, m6) in &mat_pairs {
                let mut dh = [0 as Fe; 4];
                let mut df = [0 as Fe; 7];
                apply_form_matrix(ctx, m3, &sh, &mut dh);
                apply_form_matrix(ctx, m6, &sf, &mut df);
                push(&dh, &df, &mut visited, &mut stack);
            }
            if let Some((e1, e2)) = eps {
                let mut dh = [0 as Fe; 4];
                let mut df = [0 as Fe; 7];
                for k in 0..4 {
                    dh[k] = ctx.mul(sh[k], e1);
                }
                for i in 0..7 {
                    df[i] = ctx.mul(sf[i], e2);
                }
                push(&dh, &df, &mut visited, &mut stack);
            }
            for &(j, gamma, gamma2) in &u_gens {
                let mut df = sf;
                df[2 * j] = ctx.add(df[2 * j], gamma2);
                for k in 0..4 {
                    df[j + k] = ctx.add(df[j + k], ctx.mul(gamma, sh[k]));
                }
                push(&sh, &df, &mut visited, &mut stack);
            }
        }
        if !normalization.is_multiple_of(orbit) {
            return Err(CensusError::Internal(format!(
                "orbit size {orbit} does not divide the substitution-group order {normalization}"
            )));
        }
        let aut = normalization / orbit;

        let hs = eval_all(ctx, &h);
        let fs = eval_all(ctx, &f);
        let hb = eval_all_emb(big, emb, &h);
        let fb = eval_all_emb(big, emb, &f);
        let mut n1 = qsc_s[h[3] as usize][f[6] as usize] as u64;
        for x in 0..q {
            n1 += qsc_s[hs[x] as usize][fs[x] as usize] as u64;
        }
        let mut n2 = qsc_b[emb[h[3] as usize] as usize][emb[f[6] as usize] as usize] as u64;
        for xi in 0..big.q as usize {
            n2 += qsc_b[hb[xi] as usize][fb[xi] as usize] as u64;
        }
        let a1 = qe as i64 + 1 - n1 as i64;
        let a2 = (ctx.q * ctx.q) as i64 + 1 - n2 as i64;
        *entries.entry(g2_class(a1, a2, Some(aut))).or_insert(0) += 1;
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expected_mass(q: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(q).pow(3))
    }

    /// Aggregates a class census into family-member counts per key:
    /// each class accounts for normalization / |Aut| members.
    fn members_by_key(classes: &Census) -> Entries {
        let mut out = Entries::new();
        for (class, &count) in &classes.entries {
            let aut = class.aut_order.expect("class census");
            assert!(classes.normalization.is_multiple_of(aut));
            let mut key = class.clone();
            key.aut_order = None;
            *out.entry(key).or_insert(0) += count * (classes.normalization / aut);
        }
        out
    }

    fn cross_check(q: u64) {
        let family = build_census_g2(q, false).unwrap();
        let classes = build_census_g2(q, true).unwrap();
        assert_eq!(family.total_mass(), expected_mass(q), "family mass, q = {q}");
        assert_eq!(classes.total_mass(), expected_mass(q), "class mass, q = {q}");
        assert_eq!(members_by_key(&classes), family.entries, "q = {q}");
        // Quadratic twisting flips a1 and fixes a2, preserving counts.
        for (class, count) in &family.entries {
            let super::super::PowerSums::Integer(sums) = &class.power_sums else {
                unreachable!()
            };
            let mirrored = g2_class(-sums[0], sums[1], None);
            assert_eq!(family.entries.get(&mirrored), Some(count), "q = {q}");
        }
    }

    #[test]
    fn class_and_family_censuses_agree_q2() {
        cross_check(2);
    }

    #[test]
    fn class_and_family_censuses_agree_q3() {
        cross_check(3);
    }

    #[test]
    fn class_and_family_censuses_agree_q4() {
        cross_check(4);
    }

    #[test]
    fn class_and_family_censuses_agree_q5() {
        cross_check(5);
    }

    #[test]
    fn family_scan_is_deterministic_across_runs() {
        let a = build_census_g2(3, false).unwrap();
        let b = build_census_g2(3, false).unwrap();
        assert_eq!(a, b);
        let dir = tempfile::tempdir().unwrap();
        let pa = dir.path().join("a.census");
        let pb = dir.path().join("b.census");
        a.save(&pa).unwrap();
        b.save(&pb).unwrap();
        assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
    }

    #[test]
    fn preset_cancel_flag_stops_the_build() {
        let opts = Genus2BuildOptions {
            checkpoint_dir: None,
            cancel: Some(Arc::new(AtomicBool::new(true))),
        };
        match build_census_g2_opts(5, false, &opts) {
            Err(CensusError::Cancelled) => {}
            other => panic!("expected cancellation, got {other:?}"),
        }
    }

    #[test]
    fn checkpoints_are_loaded_and_missing_shards_recomputed() {
        let q = 5u64;
        let fresh = build_census_g2(q, false).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let opts = Genus2BuildOptions {
            checkpoint_dir: Some(dir.path().to_path_buf()),
            cancel: None,
        };

        // Pre-seed shard 0 with an empty (valid but wrong) partial result:
        // the final mass check must fail, which proves the file was loaded
        // in place of a recomputation.
        let bogus = Census {
            q,
            family: FamilyTag::G2,
            normalization: fresh.normalization,
            entries: Entries::new(),
        };
        let shard0 = dir.path().join(format!("g2_q{q}_shard000.census"));
        bogus.save(&shard0).unwrap();
        match build_census_g2_opts(q, false, &opts) {
            Err(CensusError::Internal(msg)) => assert!(msg.contains("mass")),
            other => panic!("expected a mass failure from the seeded shard, got {other:?}"),
        }

        // The failing run still checkpointed the shards it computed; after
        // removing the bogus one, a rerun recomputes only shard 0 and must
        // reproduce the fresh census.
        std::fs::remove_file(&shard0).unwrap();
        let resumed = build_census_g2_opts(q, false, &opts).unwrap();
        assert_eq!(resumed, fresh);
        let shard_files = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(shard_files, 2 * (q as usize - 1));

        // A further rerun loads every shard from disk.
        let reloaded = build_census_g2_opts(q, false, &opts).unwrap();
        assert_eq!(reloaded, fresh);
    }

    #[test]
    fn unsupported_sizes_are_rejected() {
        for (q, with_aut) in [(8, false), (37, false), (6, false), (11, true)] {
            assert!(
                matches!(
                    build_census_g2(q, with_aut),
                    Err(CensusError::Unsupported { .. })
                ),
                "q = {q}"
            );
        }
    }
}
