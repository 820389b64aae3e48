//! Table-driven small finite fields.
//!
//! Elements of F_q, q = p^n, are represented as u32 indices: the element with
//! polynomial coordinates c_0 + c_1*t + ... + c_{n-1}*t^{n-1} over F_p (t a
//! root of the stored monic irreducible modulus) has index sum(c_i * p^i).
//! Index 0 is zero and indices < p are the prime-field constants.
//!
//! Multiplication, inversion and powering run through discrete log tables
//! built once at construction; addition is digit arithmetic (XOR when p = 2).
//! Everything is deterministic: the modulus is the lexicographically first
//! irreducible monic polynomial and the generator is the smallest primitive
//! index, so two contexts for the same (p, n) are identical.

use thiserror::Error;

/// Index of a field element; see the module docs for the encoding.
pub type Fe = u32;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    BadExtensionDegree,
    #[error("field size {p}^{n} exceeds the supported limit 2^20")]
    SizeLimit { p: u64, n: u32 },
    #[error("no embedding: {from} does not embed into {into}")]
    NoEmbedding { from: String, into: String },
}

/// A small finite field F_q with precomputed arithmetic tables.
pub struct FieldCtx {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    /// Monic modulus, length n+1, coefficients in 0..p; [0, 1] when n = 1.
    modulus: Vec<u64>,
    /// exp[k] = g^k for 0 <= k < 2(q-1); doubled so products of two logs
    /// index directly without a modular reduction.
    exp: Vec<Fe>,
    /// log[x] for x != 0; log[0] is a sentinel.
    log: Vec<u32>,
    generator: Fe,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

/// Deterministic trial-division primality test for table-sized inputs.
pub(crate) fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q as p^n with p prime, or None when q is not a prime power.
pub fn split_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut m = q;
            let mut n = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                n += 1;
            }
            return (m == 1).then_some((p, n));
        }
        p += 1;
    }
    Some((q, 1)) // q itself is prime
}

// --- dense polynomial helpers over F_p (construction time only) ---

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&mut prod, modulus, p);
    prod
}

/// Reduces `a` modulo the monic polynomial `modulus` in place.
fn poly_rem(a: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let deg_m = modulus.len() - 1;
    while a.len() > deg_m {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - deg_m;
        if lead != 0 {
            for (i, &mc) in modulus.iter().enumerate() {
                let idx = shift + i;
                a[idx] = (a[idx] + (p - mc % p) * lead) % p;
            }
        }
        a.pop();
        poly_trim(a);
        if a.is_empty() {
            break;
        }
    }
    poly_trim(a);
}

fn poly_pow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    poly_rem(&mut b, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mul_mod(&b, &b, modulus, p);
        }
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // a mod b with b made monic first
        let lead_inv = mod_inverse(*b.last().unwrap(), p);
        let monic: Vec<u64> = b.iter().map(|&c| c * lead_inv % p).collect();
        poly_rem(&mut a, &monic, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0 mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// x^{p^k} mod f, computed by k successive p-th powers.
fn poly_frobenius_power(modulus: &[u64], p: u64, k: u32) -> Vec<u64> {
    let mut t = vec![0u64, 1]; // the polynomial x
    for _ in 0..k {
        t = poly_pow_mod(&t, p, modulus, p);
    }
    t
}

fn poly_is_irreducible(modulus: &[u64], p: u64) -> bool {
    let n = (modulus.len() - 1) as u32;
    // Rabin's test: x^{p^n} = x mod f, and gcd(x^{p^{n/r}} - x, f) = 1 for
    // every prime r dividing n.
    let xpn = poly_frobenius_power(modulus, p, n);
    let mut diff = xpn;
    // subtract x
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    poly_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    let mut m = n;
    let mut r = 2;
    let mut prime_divs = Vec::new();
    while r * r <= m {
        if m.is_multiple_of(r) {
            prime_divs.push(r);
            while m.is_multiple_of(r) {
                m /= r;
            }
        }
        r += 1;
    }
    if m > 1 {
        prime_divs.push(m);
    }
    for r in prime_divs {
        let xk = poly_frobenius_power(modulus, p, n / r);
        let mut diff = xk;
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        if diff.is_empty() {
            return false; // x^{p^{n/r}} = x: f divides a smaller field poly
        }
        let g = poly_gcd(diff, modulus.to_vec(), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Builds F_{p^n}. Deterministic for fixed (p, n).
    pub fn new(p: u64, n: u32) -> Result<FieldCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 0 {
            return Err(FieldError::BadExtensionDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..n {
            q = q.checked_mul(p).ok_or(FieldError::SizeLimit { p, n })?;
            if q > MAX_FIELD_SIZE {
                return Err(FieldError::SizeLimit { p, n });
            }
        }

        let modulus: Vec<u64> = if n == 1 {
            vec![0, 1]
        } else {
            let mut found = None;
            // Lexicographic scan over lower coefficient vectors.
            'scan: for k in 0..q {
                let mut f = Vec::with_capacity(n as usize + 1);
                let mut kk = k;
                for _ in 0..n {
                    f.push(kk % p);
                    kk /= p;
                }
                f.push(1);
                if poly_is_irreducible(&f, p) {
                    found = Some(f);
                    break 'scan;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };

        // Raw multiplication for table construction.
        let digits = |x: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(n as usize);
            let mut xx = x;
            for _ in 0..n {
                v.push(xx % p);
                xx /= p;
            }
            v
        };
        let index_of = |v: &[u64]| -> u64 {
            let mut acc = 0u64;
            for &c in v.iter().rev() {
                acc = acc * p + c;
            }
            acc
        };
        let raw_mul = |a: u64, b: u64| -> u64 {
            if n == 1 {
                a * b % p
            } else {
                let prod = poly_mul_mod(&digits(a), &digits(b), &modulus, p);
                let mut padded = prod;
                padded.resize(n as usize, 0);
                index_of(&padded)
            }
        };

        let order = q - 1;
        let mut exp = vec![0 as Fe; 2 * order as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut generator = 0 as Fe;
        'cand: for cand in 2..q {
            let mut v = 1u64;
            let mut k = 0u64;
            loop {
                exp[k as usize] = v as Fe;
                k += 1;
                v = raw_mul(v, cand);
                if v == 1 {
                    break;
                }
                if k >= order {
                    break;
                }
            }
            if k == order && v == 1 {
                generator = cand as Fe;
                break 'cand;
            }
        }
        assert!(generator != 0 || q == 2, "no primitive element found");
        if q == 2 {
            // trivial multiplicative group
            exp[0] = 1;
            generator = 1;
        }
        for k in 0..order as usize {
            exp[order as usize + k] = exp[k];
            log[exp[k] as usize] = k as u32;
        }

        Ok(FieldCtx {
            p,
            n,
            q,
            modulus,
            exp,
            log,
            generator,
        })
    }

    /// A fixed multiplicative generator (q > 2), the smallest primitive index.
    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn zero(&self) -> Fe {
        0
    }

    pub fn one(&self) -> Fe {
        1
    }

    /// The prime-field constant c mod p.
    pub fn from_int(&self, c: u64) -> Fe {
        (c % self.p) as Fe
    }

    /// The prime-field constant for a signed integer.
    pub fn from_i64(&self, c: i64) -> Fe {
        let r = c.rem_euclid(self.p as i64);
        r as Fe
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..(self.q as Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!((a as u64) < self.q && (b as u64) < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        if self.n == 1 {
            return ((a as u64 + b as u64) % self.p) as Fe;
        }
        let p = self.p;
        let (mut a64, mut b64) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while a64 > 0 || b64 > 0 {
            let s = (a64 % p + b64 % p) % p;
            out += s * place;
            place *= p;
            a64 /= p;
            b64 /= p;
        }
        out as Fe
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        if self.n == 1 {
            return if a == 0 { 0 } else { (self.p - a as u64) as Fe };
        }
        let p = self.p;
        let mut a64 = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while a64 > 0 {
            let d = a64 % p;
            if d != 0 {
                out += (p - d) * place;
            }
            place *= p;
            a64 /= p;
        }
        out as Fe
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        let order = (self.q - 1) as u32;
        // log(a) < order, so the index stays within the doubled table
        self.exp[(order - self.log[a as usize]) as usize]
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let order = (self.q - 1) as u128;
        if order == 0 {
            return 1;
        }
        let k = (self.log[a as usize] as u128 * e as u128) % order;
        self.exp[k as usize]
    }

    /// The p-power Frobenius x -> x^p.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p)
    }

    /// Trace down to the prime field, returned as an integer in 0..p.
    pub fn absolute_trace(&self, a: Fe) -> u64 {
        let mut acc = a;
        let mut t = a;
        for _ in 1..self.n {
            t = self.frobenius(t);
            acc = self.add(acc, t);
        }
        debug_assert!((acc as u64) < self.p, "trace must be a prime-field constant");
        acc as u64
    }

    /// Quadratic character (odd q): 1 on squares, -1 on non-squares, 0 at 0.
    #[inline]
    pub fn chi2(&self, a: Fe) -> i64 {
        debug_assert!(self.p != 2, "quadratic character needs odd characteristic");
        if a == 0 {
            0
        } else if self.log[a as usize].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Whether a cubic character exists (q = 1 mod 3).
    pub fn has_cubic_character(&self) -> bool {
        self.q % 3 == 1
    }

    /// Cubic character exponent: chi3(x) = omega^k returns k in {0,1,2};
    /// None at x = 0. Fixed choice of character via the canonical generator.
    #[inline]
    pub fn chi3_exp(&self, a: Fe) -> Option<u32> {
        debug_assert!(self.has_cubic_character(), "no cubic character for this q");
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize] % 3)
        }
    }

    /// Number of y in F_q with y^2 + c*y = d.
    pub fn quadratic_solution_count(&self, c: Fe, d: Fe) -> u32 {
        if self.p == 2 {
            if c == 0 {
                // squaring is a bijection in characteristic 2
                1
            } else {
                // y = c z reduces to z^2 + z = d/c^2, solvable iff Tr = 0
                let ci = self.inv(c);
                let rhs = self.mul(d, self.mul(ci, ci));
                if self.absolute_trace(rhs) == 0 {
                    2
                } else {
                    0
                }
            }
        } else {
            // complete the square: (y + c/2)^2 = d + c^2/4
            let half = self.inv(self.from_int(2));
            let ch = self.mul(c, half);
            let t = self.add(d, self.mul(ch, ch));
            (1 + self.chi2(t)) as u32
        }
    }

    /// Embedding table into a larger field with the same characteristic:
    /// result[x] is the image of x. Requires n | big.n.
    pub fn embed_into(&self, big: &FieldCtx) -> Result<Vec<Fe>, FieldError> {
        let incompat = || FieldError::NoEmbedding {
            from: format!("F_{}", self.q),
            into: format!("F_{}", big.q),
        };
        if big.p != self.p || !big.n.is_multiple_of(self.n) {
            return Err(incompat());
        }
        if big.n == self.n {
            return Ok(self.elements().collect());
        }
        // Find a root tau of our modulus inside the big field.
        let mut tau = None;
        'roots: for z in big.elements() {
            let mut acc = 0 as Fe;
            for &c in self.modulus.iter().rev() {
                acc = big.add(big.mul(acc, z), big.from_int(c));
            }
            if acc == 0 {
                tau = Some(z);
                break 'roots;
            }
        }
        let tau = tau.ok_or_else(incompat)?;
        let mut table = Vec::with_capacity(self.q as usize);
        for x in self.elements() {
            let mut digits = Vec::with_capacity(self.n as usize);
            let mut xx = x as u64;
            for _ in 0..self.n {
                digits.push((xx % self.p) as Fe);
                xx /= self.p;
            }
            let mut acc = 0 as Fe;
            for &d in digits.iter().rev() {
                acc = big.add(big.mul(acc, tau), d);
            }
            table.push(acc);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldCtx::new(1, 1).unwrap_err(), FieldError::NotPrime(1));
        assert_eq!(
            FieldCtx::new(2, 0).unwrap_err(),
            FieldError::BadExtensionDegree
        );
        assert_eq!(
            FieldCtx::new(2, 21).unwrap_err(),
            FieldError::SizeLimit { p: 2, n: 21 }
        );
        assert_eq!(
            FieldCtx::new(1048583, 1).unwrap_err(),
            FieldError::SizeLimit { p: 1048583, n: 1 }
        );
    }

    #[test]
    fn chi2_mod_5_is_the_legendre_symbol() {
        let f = FieldCtx::new(5, 1).unwrap();
        let values: Vec<i64> = (1..5).map(|x| f.chi2(x)).collect();
        assert_eq!(values, vec![1, -1, -1, 1]);
        assert_eq!(f.chi2(0), 0);
    }

    #[test]
    fn frobenius_on_f8_is_a_bijection_fixing_exactly_f2() {
        let f = FieldCtx::new(2, 3).unwrap();
        let mut seen = [false; 8];
        let mut fixed = Vec::new();
        for x in f.elements() {
            let y = f.frobenius(x);
            assert!(!seen[y as usize]);
            seen[y as usize] = true;
            if y == x {
                fixed.push(x);
            }
        }
        assert!(seen.iter().all(|&b| b));
        assert_eq!(fixed, vec![0, 1]);
        // x^q = x for all x
        for x in f.elements() {
            assert_eq!(f.pow(x, 8), x);
        }
    }

    #[test]
    fn cubic_character_mod_7() {
        let f = FieldCtx::new(7, 1).unwrap();
        assert!(f.has_cubic_character());
        // chi3 is a homomorphism onto Z/3 with equal class sizes
        let mut counts = [0usize; 3];
        for x in 1..7 {
            counts[f.chi3_exp(x).unwrap() as usize] += 1;
        }
        assert_eq!(counts, [2, 2, 2]);
        for x in 1..7u32 {
            for y in 1..7u32 {
                let lhs = f.chi3_exp(f.mul(x, y)).unwrap();
                let rhs = (f.chi3_exp(x).unwrap() + f.chi3_exp(y).unwrap()) % 3;
                assert_eq!(lhs, rhs);
            }
        }
        // the generator is a non-cube, so chi3(g) has exact order 3
        assert_eq!(f.chi3_exp(f.generator()).unwrap(), 1);
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert!(f4.has_cubic_character());
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert!(!f5.has_cubic_character());
    }

    #[test]
    fn character_orthogonality() {
        for (p, n) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (5, 2), (11, 1)] {
            let f = FieldCtx::new(p, n).unwrap();
            let s: i64 = (1..f.q as Fe).map(|x| f.chi2(x)).sum();
            assert_eq!(s, 0, "sum of chi2 over F_{}^* should vanish", f.q);
        }
        for (p, n) in [(7u64, 1u32), (13, 1), (2, 2), (5, 2), (19, 1)] {
            let f = FieldCtx::new(p, n).unwrap();
            assert!(f.has_cubic_character());
            let mut counts = [0usize; 3];
            for x in 1..f.q as Fe {
                counts[f.chi3_exp(x).unwrap() as usize] += 1;
            }
            assert_eq!(counts[0], counts[1]);
            assert_eq!(counts[1], counts[2]);
        }
    }

    #[test]
    fn embedding_is_a_field_homomorphism() {
        let small = FieldCtx::new(3, 2).unwrap();
        let big = FieldCtx::new(3, 4).unwrap();
        let emb = small.embed_into(&big).unwrap();
        // injective
        let mut seen = std::collections::HashSet::new();
        for &y in &emb {
            assert!(seen.insert(y));
        }
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb[small.add(a, b) as usize], big.add(emb[a as usize], emb[b as usize]));
                assert_eq!(emb[small.mul(a, b) as usize], big.mul(emb[a as usize], emb[b as usize]));
            }
        }
        assert_eq!(emb[0], 0);
        assert_eq!(emb[1], 1);
        // constants embed as constants for prime base fields
        let f2 = FieldCtx::new(2, 1).unwrap();
        let f8 = FieldCtx::new(2, 3).unwrap();
        assert_eq!(f2.embed_into(&f8).unwrap(), vec![0, 1]);
        // no embedding F_9 -> F_27
        let f27 = FieldCtx::new(3, 3).unwrap();
        assert!(small.embed_into(&f27).is_err());
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert!(f5.embed_into(&f8).is_err());
    }

    #[test]
    fn quadratic_solution_count_matches_brute_force() {
        for (p, n) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let f = FieldCtx::new(p, n).unwrap();
            for c in f.elements() {
                for d in f.elements() {
                    let brute = f
                        .elements()
                        .filter(|&y| f.add(f.mul(y, y), f.mul(c, y)) == d)
                        .count() as u32;
                    assert_eq!(
                        f.quadratic_solution_count(c, d),
                        brute,
                        "q={} c={} d={}",
                        f.q,
                        c,
                        d
                    );
                }
            }
        }
    }

    #[test]
    fn trace_is_additive_and_frobenius_invariant() {
        let f = FieldCtx::new(2, 4).unwrap();
        for x in f.elements() {
            assert_eq!(f.absolute_trace(x), f.absolute_trace(f.frobenius(x)));
            for y in f.elements() {
                assert_eq!(
                    (f.absolute_trace(x) + f.absolute_trace(y)) % 2,
                    f.absolute_trace(f.add(x, y))
                );
            }
        }
        // trace is onto: both values occur
        assert!(f.elements().any(|x| f.absolute_trace(x) == 1));
    }

    proptest! {
        #[test]
        fn field_axioms(
            case in 0usize..5,
            xs in 0u64..1_000_000,
            ys in 0u64..1_000_000,
            zs in 0u64..1_000_000
        ) {
            let (p, n) = [(2u64, 3u32), (3, 2), (5, 1), (7, 1), (13, 2)][case];
            let f = FieldCtx::new(p, n).unwrap();
            let x = (xs % f.q) as Fe;
            let y = (ys % f.q) as Fe;
            let z = (zs % f.q) as Fe;
            prop_assert_eq!(f.add(x, y), f.add(y, x));
            prop_assert_eq!(f.mul(x, y), f.mul(y, x));
            prop_assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
            prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
            prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
            prop_assert_eq!(f.add(x, f.neg(x)), 0);
            if x != 0 {
                prop_assert_eq!(f.mul(x, f.inv(x)), 1);
            }
            prop_assert_eq!(f.pow(x, f.q), x);
        }
    }
}
