//! Shared machinery for censuses over binary forms: coefficient matrices of
//! GL2 substitutions, fixed-capacity polynomial arithmetic for squarefreeness
//! tests, and batch evaluation tables.

use crate::exactnum::{FieldCtx, Fe};

/// Coefficient capacity of a stack polynomial. The largest polynomial any
/// census manipulates is the genus-3 characteristic-2 singularity resultant
/// f'^2 + h'^2 f of degree 14.
pub(crate) const POLY_CAP: usize = 18;

/// Dense polynomial with stack storage; `len` is the coefficient count
/// (degree + 1 after trimming), `len == 0` encodes the zero polynomial.
#[derive(Clone, Copy)]
pub(crate) struct SmallPoly {
    pub c: [Fe; POLY_CAP],
    pub len: usize,
}

impl SmallPoly {
    pub fn from_slice(coeffs: &[Fe]) -> SmallPoly {
        assert!(coeffs.len() <= POLY_CAP);
        let mut c = [0 as Fe; POLY_CAP];
        c[..coeffs.len()].copy_from_slice(coeffs);
        let mut p = SmallPoly {
            c,
            len: coeffs.len(),
        };
        p.trim();
        p
    }

    pub fn trim(&mut self) {
        while self.len > 0 && self.c[self.len - 1] == 0 {
            self.len -= 1;
        }
    }

    /// Formal derivative.
    pub fn derivative(&self, ctx: &FieldCtx) -> SmallPoly {
        let mut out = SmallPoly {
            c: [0; POLY_CAP],
            len: self.len.saturating_sub(1),
        };
        for i in 1..self.len {
            out.c[i - 1] = ctx.mul(ctx.from_int(i as u64), self.c[i]);
        }
        out.trim();
        out
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &SmallPoly) -> SmallPoly {
        let mut out = SmallPoly {
            c: [0; POLY_CAP],
            len: 0,
        };
        if self.len == 0 || other.len == 0 {
            return out;
        }
        out.len = self.len + other.len - 1;
        assert!(out.len <= POLY_CAP, "product exceeds polynomial capacity");
        for i in 0..self.len {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..other.len {
                out.c[i + j] = ctx.add(out.c[i + j], ctx.mul(self.c[i], other.c[j]));
            }
        }
        out.trim();
        out
    }

    pub fn add(&self, ctx: &FieldCtx, other: &SmallPoly) -> SmallPoly {
        let mut out = *self;
        if other.len > out.len {
            out.len = other.len;
        }
        for i in 0..other.len {
            out.c[i] = ctx.add(out.c[i], other.c[i]);
        }
        out.trim();
        out
    }
}

/// Replaces a by a mod b (b nonzero, not necessarily monic).
fn rem_in_place(ctx: &FieldCtx, a: &mut SmallPoly, b: &SmallPoly) {
    debug_assert!(b.len > 0);
    let lead_inv = ctx.inv(b.c[b.len - 1]);
    while a.len >= b.len {
        let factor = ctx.mul(a.c[a.len - 1], lead_inv);
        if factor != 0 {
            let shift = a.len - b.len;
            for i in 0..b.len - 1 {
                a.c[shift + i] = ctx.sub(a.c[shift + i], ctx.mul(factor, b.c[i]));
            }
        }
        a.len -= 1;
        a.trim();
        if a.len == 0 {
            return;
        }
    }
}

/// Whether gcd(a, b) is a nonzero constant, i.e. a and b share no root in
/// any extension field.
pub(crate) fn gcd_is_unit(ctx: &FieldCtx, mut a: SmallPoly, mut b: SmallPoly) -> bool {
    a.trim();
    b.trim();
    while b.len > 0 {
        rem_in_place(ctx, &mut a, &b);
        std::mem::swap(&mut a, &mut b);
    }
    a.len == 1
}

/// Coefficient matrix of the substitution F -> F(a X + b Z, c X + d Z) on
/// Substitution matrices for the two coefficient vectors of a y^2 + h y = f
/// model, h first.
pub(crate) type MatrixPair = (Vec<Vec<Fe>>, Vec<Vec<Fe>>);

/// binary forms of degree `deg`: column j is the expansion of
/// (aX + bZ)^j (cX + dZ)^{deg-j}, so new_i = sum_j m[i][j] old_j.
pub(crate) fn form_comp_matrix(
    ctx: &FieldCtx,
    deg: usize,
    mat: [Fe; 4],
) -> Vec<Vec<Fe>> {
    let [a, b, c, d] = mat;
    // Multiplies a homogeneous coefficient vector (indexed by X-degree) by
    // the linear form u X + v Z.
    let lin_mul = |col: &[Fe], u: Fe, v: Fe| -> Vec<Fe> {
        let mut out = vec![0 as Fe; col.len() + 1];
        for (i, &cc) in col.iter().enumerate() {
            out[i + 1] = ctx.add(out[i + 1], ctx.mul(cc, u));
            out[i] = ctx.add(out[i], ctx.mul(cc, v));
        }
        out
    };
    let mut cols = Vec::with_capacity(deg + 1);
    for j in 0..=deg {
        let mut col = vec![ctx.one()];
        for _ in 0..j {
            col = lin_mul(&col, a, b);
        }
        for _ in 0..deg - j {
            col = lin_mul(&col, c, d);
        }
        cols.push(col);
    }
    (0..=deg)
        .map(|i| cols.iter().map(|col| col[i]).collect())
        .collect()
}

/// Applies a substitution matrix: dst[i] = sum_j m[i][j] src[j].
pub(crate) fn apply_form_matrix(ctx: &FieldCtx, m: &[Vec<Fe>], src: &[Fe], dst: &mut [Fe]) {
    for (i, row) in m.iter().enumerate() {
        let mut acc = 0 as Fe;
        for (j, &mij) in row.iter().enumerate() {
            if mij != 0 && src[j] != 0 {
                acc = ctx.add(acc, ctx.mul(mij, src[j]));
            }
        }
        dst[i] = acc;
    }
}

/// Evaluates sum_i coeffs[i] x^i at every x in F_q; result indexed by x.
pub(crate) fn eval_all(ctx: &FieldCtx, coeffs: &[Fe]) -> Vec<Fe> {
    let mut out = Vec::with_capacity(ctx.q as usize);
    for x in 0..ctx.q as Fe {
        let mut acc = 0 as Fe;
        for &c in coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, x), c);
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_detects_shared_and_disjoint_roots() {
        let ctx = FieldCtx::new(7, 1).unwrap();
        // (x - 1)(x - 2) and (x - 2)(x - 3) share x = 2.
        let a = SmallPoly::from_slice(&[2, ctx.from_i64(-3), 1]);
        let b = SmallPoly::from_slice(&[6, ctx.from_i64(-5), 1]);
        assert!(!gcd_is_unit(&ctx, a, b));
        // (x - 1)(x - 2) and (x - 3)(x - 4) are coprime.
        let c = SmallPoly::from_slice(&[ctx.from_int(12), 0, 1]);
        assert!(gcd_is_unit(&ctx, a, c));
        // Zero against a nonzero constant is a unit gcd; zero against a
        // positive-degree polynomial is not.
        let zero = SmallPoly::from_slice(&[]);
        assert!(gcd_is_unit(&ctx, zero, SmallPoly::from_slice(&[5])));
        assert!(!gcd_is_unit(&ctx, zero, a));
        assert!(!gcd_is_unit(&ctx, zero, zero));
    }

    #[test]
    fn squarefree_test_matches_root_multiplicity() {
        // x^2 (x - 1) has a double root; x (x - 1) (x - 2) does not.
        let ctx = FieldCtx::new(5, 1).unwrap();
        let dbl = SmallPoly::from_slice(&[0, 0, ctx.from_i64(-1), 1]);
        assert!(!gcd_is_unit(&ctx, dbl, dbl.derivative(&ctx)));
        let sqf = SmallPoly::from_slice(&[0, 2, ctx.from_i64(-3), 1]);
        assert!(gcd_is_unit(&ctx, sqf, sqf.derivative(&ctx)));
        // In characteristic 2, x^2 + t has derivative 0 and is a square.
        let ctx2 = FieldCtx::new(2, 2).unwrap();
        let sq = SmallPoly::from_slice(&[2, 0, 1]);
        assert!(!gcd_is_unit(&ctx2, sq, sq.derivative(&ctx2)));
    }

    #[test]
    fn composition_matrices_respect_evaluation() {
        // (F∘A)(x, 1) must equal F(a x + b, c x + d) for every x.
        let ctx = FieldCtx::new(5, 1).unwrap();
        let deg = 6;
        let coeffs: Vec<Fe> = vec![1, 4, 0, 2, 3, 0, 2];
        let mats: [[Fe; 4]; 3] = [[1, 1, 0, 1], [2, 0, 0, 1], [0, 1, 1, 0]];
        for mat in mats {
            let m = form_comp_matrix(&ctx, deg, mat);
            let mut out = vec![0 as Fe; deg + 1];
            apply_form_matrix(&ctx, &m, &coeffs, &mut out);
            let [a, b, c, d] = mat;
            for x in ctx.elements() {
                // Evaluate both forms at (x, 1).
                let eval = |cs: &[Fe], xx: Fe, zz: Fe| -> Fe {
                    let mut acc = 0 as Fe;
                    for (i, &cc) in cs.iter().enumerate() {
                        let mut term = cc;
                        for _ in 0..i {
                            term = ctx.mul(term, xx);
                        }
                        for _ in 0..deg - i {
                            term = ctx.mul(term, zz);
                        }
                        acc = ctx.add(acc, term);
                    }
                    acc
                };
                let lhs = eval(&out, x, 1);
                let rhs = eval(
                    &coeffs,
                    ctx.add(ctx.mul(a, x), b),
                    ctx.add(ctx.mul(c, x), d),
                );
                assert_eq!(lhs, rhs, "mat {mat:?}, x = {x}");
            }
        }
    }

    #[test]
    fn eval_all_agrees_with_horner() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        let coeffs: Vec<Fe> = vec![4, 0, 7, 1];
        let table = eval_all(&ctx, &coeffs);
        for x in ctx.elements() {
            let mut acc = 0 as Fe;
            let mut xp = ctx.one();
            for &c in &coeffs {
                acc = ctx.add(acc, ctx.mul(c, xp));
                xp = ctx.mul(xp, x);
            }
            assert_eq!(table[x as usize], acc);
        }
    }
}
