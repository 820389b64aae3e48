//! Genus-3 censuses over F_q, q in {2, 3}.
//!
//! Two families are enumerated separately and returned side by side:
//!
//! * plane quartics: smooth zero loci of ternary quartic forms, walked as
//!   orbits under GL3 substitutions and scalar rescalings (both preserve
//!   the curve), with |Aut| = |GL3| / orbit size. Entries are flagged
//!   twistable: the abelian-variety assembly adds the eigenvalue-negated
//!   partner of each class, which is not the Jacobian of any member of
//!   this family.
//! * hyperelliptic curves: squarefree binary octic forms y^2 = F(x, z) in
//!   odd characteristic (affine degree 7 or 8), Artin-Schreier pairs
//!   y^2 + h y = f with deg h <= 4, deg f <= 8 in characteristic 2. The
//!   effective substitution-group orders match the genus-2 module:
//!   |GL2| for odd q, |GL2| q^5 for q = 2^n, giving total mass q^5.
//!
//! Smoothness of a quartic is decided by scanning P^2(F_{q^k}) for
//! k = 1..4 for points where F and its three partials vanish. Degree 4
//! suffices: a singular point of a quartic is either a singular point of
//! an absolutely irreducible component (at most 3 = arithmetic genus of
//! them, or a unique one on a cubic, all permuted by Frobenius, so of
//! residue degree <= 3), a point of a repeated factor (a line or conic,
//! which has closed points of degree <= 2), or an intersection point of
//! two components; the intersection points form Frobenius-stable sets on
//! which the possible cyclic actions have orbits of size <= 4 (the
//! extreme case is four conjugate lines, whose six pairwise intersections
//! split into orbits of sizes 4 and 2). The test suite additionally scans
//! k = 5, 6 at q = 2 and checks that no new singular points appear.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::forms::{apply_form_matrix, eval_all, form_comp_matrix, gcd_is_unit, MatrixPair, SmallPoly};
use super::{check_mass, unsupported, Census, CensusError, FamilyTag, FrobeniusClass};
use crate::exactnum::{split_prime_power, FieldCtx, Fe};

type Entries = BTreeMap<FrobeniusClass, u64>;

/// The two genus-3 sub-censuses at one field size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G3Census {
    pub quartic: Census,
    pub hyperelliptic: Census,
}

pub fn build_census_g3(q: u64, with_aut: bool) -> Result<G3Census, CensusError> {
    if q != 2 && q != 3 {
        return Err(unsupported(
            FamilyTag::G3Quartic,
            q,
            "genus-3 enumeration supports q in {2, 3}",
        ));
    }
    let quartic = quartic_census(q, with_aut)?;
    let hyperelliptic = if q == 2 {
        hyp_char2_census(with_aut)?
    } else {
        hyp_odd_census(q, with_aut)?
    };
    Ok(G3Census {
        quartic,
        hyperelliptic,
    })
}

// --- ternary-form machinery ---

/// Exponents (i, j) of the degree-d monomials X^i Y^j Z^(d-i-j), ordered
/// by i, then j. Degree 4 has 15 of them, degree 3 has 10.
fn tri_monos(d: usize) -> Vec<(usize, usize)> {
    (0..=d)
        .flat_map(|i| (0..=d - i).map(move |j| (i, j)))
        .collect()
}

fn tri_index(d: usize, i: usize, j: usize) -> usize {
    // Rows 0..i hold d + 1 - r entries each.
    i * (2 * (d + 1) - i + 1) / 2 + j
}

/// Multiplies a degree-d ternary polynomial by the linear form
/// lin[0] X + lin[1] Y + lin[2] Z.
fn mul_linear(ctx: &FieldCtx, d: usize, poly: &[Fe], lin: [Fe; 3]) -> Vec<Fe> {
    let src = tri_monos(d);
    let mut out = vec![0 as Fe; (d + 2) * (d + 3) / 2];
    for (s, &(i, j)) in src.iter().enumerate() {
        let c = poly[s];
        if c == 0 {
            continue;
        }
        for (t, l) in [
            (tri_index(d + 1, i + 1, j), lin[0]),
            (tri_index(d + 1, i, j + 1), lin[1]),
            (tri_index(d + 1, i, j), lin[2]),
        ] {
            out[t] = ctx.add(out[t], ctx.mul(c, l));
        }
    }
    out
}

/// Matrix of the substitution F -> F(m * (X, Y, Z)) on degree-d coefficient
/// vectors: column s is the expansion of the image of the s-th monomial.
fn ternary_comp_matrix(ctx: &FieldCtx, d: usize, m: [[Fe; 3]; 3]) -> Vec<Vec<Fe>> {
    let monos = tri_monos(d);
    let dim = monos.len();
    let mut cols: Vec<Vec<Fe>> = Vec::with_capacity(dim);
    for &(a, b) in &monos {
        let c = d - a - b;
        let mut deg = 0usize;
        let mut poly = vec![1 as Fe];
        for (reps, lin) in [(a, m[0]), (b, m[1]), (c, m[2])] {
            for _ in 0..reps {
                poly = mul_linear(ctx, deg, &poly, lin);
                deg += 1;
            }
        }
        cols.push(poly);
    }
    (0..dim)
        .map(|r| cols.iter().map(|col| col[r]).collect())
        .collect()
}

/// Row-sparse form of a substitution matrix: per destination coefficient,
/// the list of (source index, factor). The BFS generators are mostly
/// monomial permutations, so this cuts the walk cost by an order of
/// magnitude against dense application.
type SparseMatrix = Vec<Vec<(u8, Fe)>>;

fn sparsify(m: &[Vec<Fe>]) -> SparseMatrix {
    m.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(s, &c)| (s as u8, c))
                .collect()
        })
        .collect()
}

fn apply_sparse(ctx: &FieldCtx, m: &SparseMatrix, src: &[Fe; 15], dst: &mut [Fe; 15]) {
    for (r, row) in m.iter().enumerate() {
        let mut acc = 0 as Fe;
        for &(s, c) in row {
            acc = ctx.add(acc, ctx.mul(c, src[s as usize]));
        }
        dst[r] = acc;
    }
}

/// One extension field F_{q^k} together with the base-field embedding and
/// the values of all degree-4 and degree-3 monomials at every point of
/// P^2(F_{q^k}) (affine plane, then the affine line at infinity, then
/// (1 : 0 : 0)).
struct PlaneField {
    ctx: FieldCtx,
    emb: Vec<Fe>,
    mono4: Vec<[Fe; 15]>,
    mono3: Vec<[Fe; 10]>,
}

fn plane_field(base: &FieldCtx, k: u32) -> Result<PlaneField, CensusError> {
    let ctx = FieldCtx::new(base.p, base.n * k)
        .map_err(|e| CensusError::Internal(e.to_string()))?;
    let emb = base
        .embed_into(&ctx)
        .map_err(|e| CensusError::Internal(e.to_string()))?;
    let mut pts: Vec<[Fe; 3]> = Vec::new();
    for x in 0..ctx.q as Fe {
        for y in 0..ctx.q as Fe {
            pts.push([x, y, 1]);
        }
    }
    for x in 0..ctx.q as Fe {
        pts.push([x, 1, 0]);
    }
    pts.push([1, 0, 0]);

    let m4 = tri_monos(4);
    let m3 = tri_monos(3);
    let mono4 = pts
        .iter()
        .map(|&[x, y, z]| {
            let mut v = [0 as Fe; 15];
            for (t, &(i, j)) in m4.iter().enumerate() {
                v[t] = ctx.mul(
                    ctx.mul(ctx.pow(x, i as u64), ctx.pow(y, j as u64)),
                    ctx.pow(z, (4 - i - j) as u64),
                );
            }
            v
        })
        .collect();
    let mono3 = pts
        .iter()
        .map(|&[x, y, z]| {
            let mut v = [0 as Fe; 10];
            for (t, &(i, j)) in m3.iter().enumerate() {
                v[t] = ctx.mul(
                    ctx.mul(ctx.pow(x, i as u64), ctx.pow(y, j as u64)),
                    ctx.pow(z, (3 - i - j) as u64),
                );
            }
            v
        })
        .collect();
    Ok(PlaneField {
        ctx,
        emb,
        mono4,
        mono3,
    })
}

fn eval_form<const N: usize>(pf: &PlaneField, coeffs: &[Fe; N], mono: &[Fe; N]) -> Fe {
    let mut acc = 0 as Fe;
    for t in 0..N {
        if coeffs[t] != 0 {
            acc = pf.ctx.add(acc, pf.ctx.mul(pf.emb[coeffs[t] as usize], mono[t]));
        }
    }
    acc
}

/// The three partial derivatives of a quartic, as degree-3 coefficient
/// vectors over the base field.
fn quartic_partials(base: &FieldCtx, c: &[Fe; 15]) -> [[Fe; 10]; 3] {
    let m4 = tri_monos(4);
    let mut out = [[0 as Fe; 10]; 3];
    for (t, &(i, j)) in m4.iter().enumerate() {
        let k = 4 - i - j;
        if c[t] == 0 {
            continue;
        }
        if i > 0 {
            let d = tri_index(3, i - 1, j);
            out[0][d] = base.add(out[0][d], base.mul(c[t], base.from_i64(i as i64)));
        }
        if j > 0 {
            let d = tri_index(3, i, j - 1);
            out[1][d] = base.add(out[1][d], base.mul(c[t], base.from_i64(j as i64)));
        }
        if k > 0 {
            let d = tri_index(3, i, j);
            out[2][d] = base.add(out[2][d], base.mul(c[t], base.from_i64(k as i64)));
        }
    }
    out
}

/// Point counts (a_1, a_2, a_3) of the smooth quartic F = 0, or None if the
/// zero locus is singular. Scans extensions of degree 1..=max_degree; the
/// default 4 is enough to see every singular point (module docs).
fn quartic_counts(
    base: &FieldCtx,
    fields: &[PlaneField],
    coeffs: &[Fe; 15],
) -> Option<[i64; 3]> {
    let parts = quartic_partials(base, coeffs);
    let mut ns = [0i64; 3];
    for (kk, pf) in fields.iter().enumerate() {
        let mut n = 0i64;
        for (idx, mono) in pf.mono4.iter().enumerate() {
            if eval_form(pf, coeffs, mono) != 0 {
                continue;
            }
            n += 1;
            let m3 = &pf.mono3[idx];
            if parts.iter().all(|pc| eval_form(pf, pc, m3) == 0) {
                return None;
            }
        }
        if kk < 3 {
            ns[kk] = n;
        }
    }
    let q = base.q as i64;
    Some([q + 1 - ns[0], q * q + 1 - ns[1], q * q * q + 1 - ns[2]])
}

/// Quartic classes: orbit walk over all q^15 coefficient vectors under
/// GL3 substitution generators and scalar rescaling.
fn quartic_census(q: u64, with_aut: bool) -> Result<Census, CensusError> {
    let (p, n) = split_prime_power(q).expect("q checked by caller");
    let base = FieldCtx::new(p, n).map_err(|e| CensusError::Internal(e.to_string()))?;
    let fields: Vec<PlaneField> = (1..=4)
        .map(|k| plane_field(&base, k))
        .collect::<Result<_, _>>()?;
    let g = base.generator();
    let gl3 = (q * q * q - 1) * (q * q * q - q) * (q * q * q - q * q);

    let mut gens: Vec<SparseMatrix> = [
        [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        [[g, 0, 0], [0, 1, 0], [0, 0, 1]],
    ]
    .into_iter()
    .map(|m| sparsify(&ternary_comp_matrix(&base, 4, m)))
    .collect();
    let scalar: Vec<Vec<Fe>> = (0..15)
        .map(|r| (0..15).map(|s| if r == s { g } else { 0 }).collect())
        .collect();
    gens.push(sparsify(&scalar));

    let qs = q as usize;
    let total = qs.pow(15);
    let encode = |c: &[Fe; 15]| -> usize {
        c.iter().rev().fold(0usize, |acc, &d| acc * qs + d as usize)
    };
    let decode = |mut idx: usize| -> [Fe; 15] {
        let mut c = [0 as Fe; 15];
        for slot in &mut c {
            *slot = (idx % qs) as Fe;
            idx /= qs;
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
        let coeffs = decode(start);
        let counts = quartic_counts(&base, &fields, &coeffs);

        stack.push(start as u32);
        let mut orbit = 0u64;
        while let Some(state) = stack.pop() {
            orbit += 1;
            let src = decode(state as usize);
            let mut dst = [0 as Fe; 15];
            for m in &gens {
                apply_sparse(&base, m, &src, &mut dst);
                let next = encode(&dst);
                if !visited[next] {
                    visited[next] = true;
                    stack.push(next as u32);
                }
            }
        }

        let Some([a1, a2, a3]) = counts else {
            continue;
        };
        if !gl3.is_multiple_of(orbit) {
            return Err(CensusError::Internal(format!(
                "quartic orbit size {orbit} does not divide |GL3| = {gl3}"
            )));
        }
        let (aut, count) = if with_aut {
            (Some(gl3 / orbit), 1)
        } else {
            (None, orbit)
        };
        let key = FrobeniusClass::integer(FamilyTag::G3Quartic, vec![a1, a2, a3], aut);
        *entries.entry(key).or_insert(0) += count;
    }

    let census = Census {
        q,
        family: FamilyTag::G3Quartic,
        normalization: gl3,
        entries,
    };
    census.validate()?;
    Ok(census)
}

// --- hyperelliptic, odd characteristic ---

struct HypOddTables {
    ctx: FieldCtx,
    exts: Vec<(FieldCtx, Vec<Fe>)>,
    chi: Vec<Vec<i8>>,
}

fn hyp_odd_tables(q: u64) -> Result<HypOddTables, CensusError> {
    let (p, n) = split_prime_power(q).expect("q checked by caller");
    let ctx = FieldCtx::new(p, n).map_err(|e| CensusError::Internal(e.to_string()))?;
    let mut exts = Vec::new();
    let mut chi = Vec::new();
    for k in 1..=3 {
        let ext = FieldCtx::new(p, n * k).map_err(|e| CensusError::Internal(e.to_string()))?;
        let emb = ctx
            .embed_into(&ext)
            .map_err(|e| CensusError::Internal(e.to_string()))?;
        chi.push((0..ext.q as Fe).map(|v| ext.chi2(v) as i8).collect());
        exts.push((ext, emb));
    }
    Ok(HypOddTables { ctx, exts, chi })
}

/// Power sums of y^2 = F(x, z) for a squarefree octic form F given by
/// poly coefficients (the z-degree-8 form with coeffs[8] the leading
/// coefficient; the point at infinity contributes chi(coeffs[8])).
fn hyp_odd_key(t: &HypOddTables, coeffs: &[Fe; 9], aut: Option<u64>) -> FrobeniusClass {
    let mut sums = Vec::with_capacity(3);
    for (k, (ext, emb)) in t.exts.iter().enumerate() {
        let chi = &t.chi[k];
        let vals = eval_all(ext, &coeffs.map(|c| emb[c as usize]));
        let mut s: i64 = vals.iter().map(|&v| chi[v as usize] as i64).sum();
        s += chi[emb[coeffs[8] as usize] as usize] as i64;
        sums.push(-s);
    }
    FrobeniusClass::integer(FamilyTag::G3Hyp, sums, aut)
}

fn hyp_form_squarefree(ctx: &FieldCtx, coeffs: &[Fe; 9]) -> bool {
    if coeffs[8] == 0 && coeffs[7] == 0 {
        return false;
    }
    let f = SmallPoly::from_slice(coeffs);
    gcd_is_unit(ctx, f, f.derivative(ctx))
}

fn hyp_odd_census(q: u64, with_aut: bool) -> Result<Census, CensusError> {
    let t = hyp_odd_tables(q)?;
    let ctx = &t.ctx;
    let gl2 = (q * q - 1) * (q * q - q);
    let qs = q as usize;
    let total = qs.pow(9);
    let decode = |mut idx: usize| -> [Fe; 9] {
        let mut c = [0 as Fe; 9];
        for slot in &mut c {
            *slot = (idx % qs) as Fe;
            idx /= qs;
        }
        c
    };

    let mut entries = Entries::new();
    if !with_aut {
        for idx in 0..total {
            let coeffs = decode(idx);
            if !hyp_form_squarefree(ctx, &coeffs) {
                continue;
            }
            *entries.entry(hyp_odd_key(&t, &coeffs, None)).or_insert(0) += 1;
        }
    } else {
        let g = ctx.generator();
        let mats = [
            form_comp_matrix(ctx, 8, [1, 1, 0, 1]),
            form_comp_matrix(ctx, 8, [g, 0, 0, 1]),
            form_comp_matrix(ctx, 8, [0, 1, 1, 0]),
        ];
        let gsq = ctx.mul(g, g);
        let encode = |c: &[Fe; 9]| -> usize {
            c.iter().rev().fold(0usize, |acc, &d| acc * qs + d as usize)
        };
        let mut visited = vec![false; total];
        let mut stack: Vec<u32> = Vec::new();
        for start in 0..total {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let coeffs = decode(start);
            let smooth = hyp_form_squarefree(ctx, &coeffs);
            stack.push(start as u32);
            let mut orbit = 0u64;
            while let Some(state) = stack.pop() {
                orbit += 1;
                let src = decode(state as usize);
                let mut dst = [0 as Fe; 9];
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
            if !smooth {
                continue;
            }
            if !gl2.is_multiple_of(orbit) {
                return Err(CensusError::Internal(format!(
                    "octic orbit size {orbit} does not divide |GL2| = {gl2}"
                )));
            }
            let key = hyp_odd_key(&t, &coeffs, Some(gl2 / orbit));
            *entries.entry(key).or_insert(0) += 1;
        }
    }

    let census = Census {
        q,
        family: FamilyTag::G3Hyp,
        normalization: gl2,
        entries,
    };
    census.validate()?;
    check_mass(
        &census,
        BigRational::from_integer(BigInt::from(q).pow(5)),
    )?;
    Ok(census)
}

// --- hyperelliptic, characteristic 2 ---

struct HypChar2Tables {
    ctx: FieldCtx,
    exts: Vec<(FieldCtx, Vec<Fe>)>,
    qsc: Vec<Vec<Vec<u8>>>,
}

fn hyp_char2_tables() -> Result<HypChar2Tables, CensusError> {
    let ctx = FieldCtx::new(2, 1).map_err(|e| CensusError::Internal(e.to_string()))?;
    let mut exts = Vec::new();
    let mut qsc = Vec::new();
    for k in 1..=3 {
        let ext = FieldCtx::new(2, k).map_err(|e| CensusError::Internal(e.to_string()))?;
        let emb = ctx
            .embed_into(&ext)
            .map_err(|e| CensusError::Internal(e.to_string()))?;
        qsc.push(
            (0..ext.q as Fe)
                .map(|c| {
                    (0..ext.q as Fe)
                        .map(|d| ext.quadratic_solution_count(c, d) as u8)
                        .collect()
                })
                .collect(),
        );
        exts.push((ext, emb));
    }
    Ok(HypChar2Tables { ctx, exts, qsc })
}

/// Whether y^2 + h y = f (deg h <= 4, deg f <= 8) is smooth, including over
/// the place at infinity of the weighted model.
fn hyp_char2_smooth(ctx: &FieldCtx, h: &[Fe; 5], f: &[Fe; 9]) -> bool {
    if h[4] == 0
        && ctx.add(ctx.mul(f[7], f[7]), ctx.mul(ctx.mul(h[3], h[3]), f[8])) == 0
    {
        return false;
    }
    let h_poly = SmallPoly::from_slice(h);
    let f_poly = SmallPoly::from_slice(f);
    let hp = h_poly.derivative(ctx);
    let fp = f_poly.derivative(ctx);
    let w = fp
        .mul(ctx, &fp)
        .add(ctx, &hp.mul(ctx, &hp).mul(ctx, &f_poly));
    gcd_is_unit(ctx, h_poly, w)
}

fn hyp_char2_key(t: &HypChar2Tables, h: &[Fe; 5], f: &[Fe; 9], aut: Option<u64>) -> FrobeniusClass {
    let mut sums = Vec::with_capacity(3);
    for (k, (ext, emb)) in t.exts.iter().enumerate() {
        let qsc = &t.qsc[k];
        let hv = eval_all(ext, &h.map(|c| emb[c as usize]));
        let fv = eval_all(ext, &f.map(|c| emb[c as usize]));
        let mut n: i64 = (0..ext.q as usize)
            .map(|x| qsc[hv[x] as usize][fv[x] as usize] as i64)
            .sum();
        n += qsc[emb[h[4] as usize] as usize][emb[f[8] as usize] as usize] as i64;
        sums.push(ext.q as i64 + 1 - n);
    }
    FrobeniusClass::integer(FamilyTag::G3Hyp, sums, aut)
}

fn hyp_char2_census(with_aut: bool) -> Result<Census, CensusError> {
    let t = hyp_char2_tables()?;
    let ctx = &t.ctx;
    let q = 2u64;
    let normalization = (q * q - 1) * (q * q - q) * q.pow(5);
    let total = 1usize << 14;
    let decode = |idx: usize| -> ([Fe; 5], [Fe; 9]) {
        let mut h = [0 as Fe; 5];
        let mut f = [0 as Fe; 9];
        for (k, slot) in h.iter_mut().enumerate() {
            *slot = ((idx >> k) & 1) as Fe;
        }
        for (k, slot) in f.iter_mut().enumerate() {
            *slot = ((idx >> (5 + k)) & 1) as Fe;
        }
        (h, f)
    };

    let mut entries = Entries::new();
    if !with_aut {
        for idx in 0..total {
            let (h, f) = decode(idx);
            if !hyp_char2_smooth(ctx, &h, &f) {
                continue;
            }
            *entries.entry(hyp_char2_key(&t, &h, &f, None)).or_insert(0) += 1;
        }
    } else {
        let mat_pairs: Vec<MatrixPair> = [
            [1, 1, 0, 1],
            [0, 1, 1, 0],
        ]
        .into_iter()
        .map(|m| (form_comp_matrix(ctx, 4, m), form_comp_matrix(ctx, 8, m)))
        .collect();
        let encode = |h: &[Fe; 5], f: &[Fe; 9]| -> usize {
            let mut acc = 0usize;
            for (k, &d) in h.iter().enumerate() {
                acc |= (d as usize) << k;
            }
            for (k, &d) in f.iter().enumerate() {
                acc |= (d as usize) << (5 + k);
            }
            acc
        };
        let mut visited = vec![false; total];
        let mut stack: Vec<u32> = Vec::new();
        for start in 0..total {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let (h, f) = decode(start);
            let smooth = hyp_char2_smooth(ctx, &h, &f);
            stack.push(start as u32);
            let mut orbit = 0u64;
            while let Some(state) = stack.pop() {
                orbit += 1;
                let (sh, sf) = decode(state as usize);
                let push = |dh: &[Fe; 5],
                                df: &[Fe; 9],
                                visited: &mut Vec<bool>,
                                stack: &mut Vec<u32>| {
                    let next = encode(dh, df);
                    if !visited[next] {
                        visited[next] = true;
                        stack.push(next as u32);
                    }
                };
                for (m4, m8) in &mat_pairs {
                    let mut dh = [0 as Fe; 5];
                    let mut df = [0 as Fe; 9];
                    apply_form_matrix(ctx, m4, &sh, &mut dh);
                    apply_form_matrix(ctx, m8, &sf, &mut df);
                    push(&dh, &df, &mut visited, &mut stack);
                }
                // Shears F -> F + U^2 + U H by the quartic forms U = X^j Z^(4-j).
                for j in 0..5 {
                    let mut df = sf;
                    df[2 * j] = ctx.add(df[2 * j], 1);
                    for k in 0..5 {
                        df[j + k] = ctx.add(df[j + k], sh[k]);
                    }
                    push(&sh, &df, &mut visited, &mut stack);
                }
            }
            if !smooth {
                continue;
            }
            if !normalization.is_multiple_of(orbit) {
                return Err(CensusError::Internal(format!(
                    "orbit size {orbit} does not divide the substitution-group order {normalization}"
                )));
            }
            let key = hyp_char2_key(&t, &h, &f, Some(normalization / orbit));
            *entries.entry(key).or_insert(0) += 1;
        }
    }

    let census = Census {
        q,
        family: FamilyTag::G3Hyp,
        normalization,
        entries,
    };
    census.validate()?;
    check_mass(
        &census,
        BigRational::from_integer(BigInt::from(q).pow(5)),
    )?;
    Ok(census)
}
