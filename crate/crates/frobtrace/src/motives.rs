//! Formal motive bookkeeping: integer-linear combinations of Lefschetz
//! powers L^m times products of cusp-form symbols S[n], S[j,k], S[a,b,c],
//! the correction terms e2_extra(a,b) and e3_extra(a,b,c), and exact trace
//! evaluation of such expressions at a fixed prime power q.
//!
//! Conventions baked into the algebra:
//!   - S[2] rewrites to -L - 1 on construction, and s_2 = -1;
//!   - S[n] is the zero motive whenever S_n vanishes (odd n, or dim 0);
//!   - s_n = 0 for odd n.
//!
//! Trace evaluation is a ring homomorphism: Tr(L^m) = q^m, Tr is additive
//! on sums and multiplicative on monomial products, and S-symbols resolve
//! through a caller-supplied provider (genus-1 and genus-2 trace pipelines).

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MotivesError {
    #[error("cusp form dimension needs even weight, got {0}")]
    OddWeight(u32),
    #[error("cusp form dimension needs weight at least 2, got {0}")]
    BadWeight(u32),
    #[error("weights ({a},{b}) violate a >= b >= 0 with a = b mod 2")]
    ParityViolation { a: u32, b: u32 },
    #[error("weights ({a},{b},{c}) violate a >= b >= c >= 0")]
    BadTriple { a: u32, b: u32, c: u32 },
    #[error("no trace available for symbol {0}")]
    Unresolvable(String),
}

/// dim S_k(SL(2,Z)) for even k >= 2, with the convention that k = 2
/// counts as -1.
pub fn dim_cusp_sl2(k: u32) -> Result<i64, MotivesError> {
    if !k.is_multiple_of(2) {
        return Err(MotivesError::OddWeight(k));
    }
    if k < 2 {
        return Err(MotivesError::BadWeight(k));
    }
    if k == 2 {
        return Ok(-1);
    }
    let d = (k / 12) as i64;
    Ok(if k % 12 == 2 { d - 1 } else { d })
}

/// s_k extended by s_odd = 0, for use inside correction-term formulas
/// where parity-violating side weights legitimately occur.
fn s_mult(k: u32) -> i64 {
    if !k.is_multiple_of(2) {
        0
    } else {
        dim_cusp_sl2(k).expect("even k >= 2")
    }
}

/// A cusp-form symbol appearing in a motive monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// S[n]: elliptic, weight n.
    S1(u32),
    /// S[j,k]: degree 2.
    S2(u32, u32),
    /// S[a,b,c]: degree 3.
    S3(u32, u32, u32),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::S1(n) => write!(f, "S[{}]", n),
            Symbol::S2(j, k) => write!(f, "S[{},{}]", j, k),
            Symbol::S3(a, b, c) => write!(f, "S[{},{},{}]", a, b, c),
        }
    }
}

/// L^m times a product of at most two symbols, in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Monomial {
    l_pow: u32,
    symbols: Vec<Symbol>,
}

impl Monomial {
    fn unit() -> Monomial {
        Monomial {
            l_pow: 0,
            symbols: Vec::new(),
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut symbols = self.symbols.clone();
        symbols.extend(other.symbols.iter().cloned());
        symbols.sort();
        assert!(
            symbols.len() <= 2,
            "monomials carry at most a two-fold symbol product"
        );
        Monomial {
            l_pow: self.l_pow + other.l_pow,
            symbols,
        }
    }
}

/// An integer-linear combination of monomials in canonical form: terms are
/// kept sorted with merged coefficients and zero terms pruned.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MotiveExpr {
    terms: BTreeMap<Monomial, i64>,
}

impl MotiveExpr {
    pub fn zero() -> MotiveExpr {
        MotiveExpr::default()
    }

    /// The multiplicative unit L^0.
    pub fn unit() -> MotiveExpr {
        MotiveExpr::constant(1)
    }

    pub fn constant(c: i64) -> MotiveExpr {
        let mut e = MotiveExpr::zero();
        e.add_term(Monomial::unit(), c);
        e
    }

    pub fn lefschetz_power(m: u32) -> MotiveExpr {
        let mut e = MotiveExpr::zero();
        e.add_term(
            Monomial {
                l_pow: m,
                symbols: Vec::new(),
            },
            1,
        );
        e
    }

    /// The elliptic symbol S[n] for n >= 2, with the standing rewrites:
    /// S[2] = -L - 1, and S[n] = 0 whenever S_n vanishes.
    pub fn s1(n: u32) -> MotiveExpr {
        assert!(n >= 2, "S[{}] is not defined", n);
        if n == 2 {
            let mut e = MotiveExpr::constant(-1);
            e.add_term(
                Monomial {
                    l_pow: 1,
                    symbols: Vec::new(),
                },
                -1,
            );
            return e;
        }
        if s_mult(n) == 0 {
            return MotiveExpr::zero();
        }
        MotiveExpr::from_symbol(Symbol::S1(n))
    }

    /// The degree-2 symbol S[j,k]; kept formal, never rewritten.
    pub fn s2(j: u32, k: u32) -> MotiveExpr {
        MotiveExpr::from_symbol(Symbol::S2(j, k))
    }

    /// The degree-3 symbol S[a,b,c]; kept formal, never rewritten.
    pub fn s3(a: u32, b: u32, c: u32) -> MotiveExpr {
        MotiveExpr::from_symbol(Symbol::S3(a, b, c))
    }

    fn from_symbol(s: Symbol) -> MotiveExpr {
        let mut e = MotiveExpr::zero();
        e.add_term(
            Monomial {
                l_pow: 0,
                symbols: vec![s],
            },
            1,
        );
        e
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let v = e.get().checked_add(c).expect("coefficient overflow");
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MotiveExpr) -> MotiveExpr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &MotiveExpr) -> MotiveExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MotiveExpr {
        self.scale(-1)
    }

    pub fn scale(&self, c: i64) -> MotiveExpr {
        let mut out = MotiveExpr::zero();
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), coeff.checked_mul(c).expect("coefficient overflow"));
        }
        out
    }

    /// Product of expressions; panics if a product monomial would carry more
    /// than two symbols (outside the algebra's domain).
    pub fn mul(&self, other: &MotiveExpr) -> MotiveExpr {
        let mut out = MotiveExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.checked_mul(*c2).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl fmt::Display for MotiveExpr {
    /// Stable text form, e.g. `5*L^34 + S[34]` or `-L^5*S[16] - L^5 + 2`.
    /// Terms appear in decreasing monomial order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if m.l_pow == 1 {
                parts.push("L".to_string());
            } else if m.l_pow > 1 {
                parts.push(format!("L^{}", m.l_pow));
            }
            for s in &m.symbols {
                parts.push(s.to_string());
            }
            if parts.is_empty() {
                write!(f, "{}", mag)?;
            } else {
                if mag != 1 {
                    write!(f, "{}*", mag)?;
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The degree-2 correction term
///   e2_extra(a,b) = s_{a-b+2}
///                 - s_{a+b+4} * (S[a-b+2] + 1) * L^{b+1}
///                 + { S[b+2] + 1   if a even
///                   { -S[a+3]      if a odd
/// for a >= b >= 0 with a = b mod 2, in canonical form.
pub fn e2_extra(a: u32, b: u32) -> Result<MotiveExpr, MotivesError> {
    if a < b || a % 2 != b % 2 {
        return Err(MotivesError::ParityViolation { a, b });
    }
    Ok(e2_extra_unchecked(a, b))
}

/// The same formula without the parity precondition, for inner pairs of the
/// degree-3 correction term where the expression is evaluated as written
/// even though the corresponding cohomology vanishes.
fn e2_extra_unchecked(a: u32, b: u32) -> MotiveExpr {
    debug_assert!(a >= b);
    let mut e = MotiveExpr::constant(s_mult(a - b + 2));
    let middle = MotiveExpr::s1(a - b + 2)
        .add(&MotiveExpr::unit())
        .mul(&MotiveExpr::lefschetz_power(b + 1))
        .scale(s_mult(a + b + 4));
    e = e.sub(&middle);
    if a.is_multiple_of(2) {
        e = e.add(&MotiveExpr::s1(b + 2)).add(&MotiveExpr::unit());
    } else {
        e = e.sub(&MotiveExpr::s1(a + 3));
    }
    e
}

type S1Resolver<'a> = Box<dyn Fn(u32) -> Option<BigInt> + 'a>;
type S2Resolver<'a> = Box<dyn Fn(u32, u32) -> Option<BigInt> + 'a>;

/// Resolves symbol traces at a fixed q. The S[n] resolver is required; the
/// S[j,k] resolver is optional and only needed for degree-3 work.
pub struct TraceProvider<'a> {
    q: u64,
    s1: S1Resolver<'a>,
    s2: Option<S2Resolver<'a>>,
}

impl<'a> TraceProvider<'a> {
    pub fn new(q: u64, s1: impl Fn(u32) -> Option<BigInt> + 'a) -> TraceProvider<'a> {
        TraceProvider {
            q,
            s1: Box::new(s1),
            s2: None,
        }
    }

    pub fn with_s2(
        mut self,
        s2: impl Fn(u32, u32) -> Option<BigInt> + 'a,
    ) -> TraceProvider<'a> {
        self.s2 = Some(Box::new(s2));
        self
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn resolve(&self, s: &Symbol) -> Result<BigInt, MotivesError> {
        let missing = || MotivesError::Unresolvable(s.to_string());
        match s {
            Symbol::S1(n) => (self.s1)(*n).ok_or_else(missing),
            Symbol::S2(j, k) => self
                .s2
                .as_ref()
                .and_then(|f| f(*j, *k))
                .ok_or_else(missing),
            Symbol::S3(..) => Err(missing()),
        }
    }
}

/// Exact trace of a motive expression at the provider's q.
pub fn trace(expr: &MotiveExpr, provider: &TraceProvider) -> Result<BigInt, MotivesError> {
    let q = BigInt::from(provider.q);
    let mut total = BigInt::zero();
    for (m, &c) in &expr.terms {
        let mut t = q.pow(m.l_pow);
        for s in &m.symbols {
            t *= provider.resolve(s)?;
        }
        total += t * BigInt::from(c);
    }
    Ok(total)
}

/// Trace of S[n] at the provider's q, honoring the standing rewrites.
fn trace_s1(n: u32, provider: &TraceProvider) -> Result<BigInt, MotivesError> {
    trace(&MotiveExpr::s1(n), provider)
}

/// Exact trace at q of the degree-3 correction term
///   e3_extra(a,b,c) = - e_c(A2, V_{a+1,b+1}) - e2_extra(a+1,b+1) x S[c+2]
///                     + e_c(A2, V_{a+1,c})   + e2_extra(a+1,c)   x S[b+3]
///                     - e_c(A2, V_{b,c})     - e2_extra(b,c)     x S[a+4]
/// where x denotes tensoring (trace multiplication). Parity-violating inner
/// pairs contribute e_c = 0, but their e2_extra x S terms are evaluated as
/// written. `ec_a2` supplies Tr(F_q, e_c(A2, V_{a',b'})) for parity-valid
/// pairs at the provider's q.
pub fn e3_extra_trace(
    a: u32,
    b: u32,
    c: u32,
    provider: &TraceProvider,
    ec_a2: &dyn Fn(u32, u32) -> BigInt,
) -> Result<BigInt, MotivesError> {
    if a < b || b < c {
        return Err(MotivesError::BadTriple { a, b, c });
    }
    let pieces: [(i64, u32, u32, u32); 3] = [
        (-1, a + 1, b + 1, c + 2),
        (1, a + 1, c, b + 3),
        (-1, b, c, a + 4),
    ];
    let mut total = BigInt::zero();
    for (sign, x, y, s_weight) in pieces {
        let mut piece = BigInt::zero();
        if x % 2 == y % 2 {
            piece += ec_a2(x, y);
        }
        // Evaluate the tensor factor first: when S[s_weight] is the zero
        // motive the whole product vanishes and the correction term needs
        // no resolving.
        let ts = trace_s1(s_weight, provider)?;
        if !ts.is_zero() {
            piece += trace(&e2_extra_unchecked(x, y), provider)? * ts;
        }
        total += piece * BigInt::from(sign);
    }
    Ok(total)
}
