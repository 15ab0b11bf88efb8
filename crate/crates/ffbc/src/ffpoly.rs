//! Arithmetic in O = F_q[T]: field tables, dense polynomials, ideals.
//!
//! Everything downstream (places, torsion, characters, the Hecke algebra)
//! reduces to exact arithmetic in this module.  The configuration [`Ctx`]
//! pins the base field F_q with q = p^e and carries lookup tables for the
//! field operations; polynomials are dense coefficient vectors of field
//! element codes.
//!
//! Degrees stay small throughout (couple dozen at most), so enumeration,
//! trial-division factoring and table-driven field arithmetic are the right
//! tools; nothing here is asymptotically clever on purpose.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

/// Field element code: for e = 1 the residue mod p, for e > 1 the base-p
/// digit string of the coefficient vector over F_p (lowest power first).
pub type Elem = u8;

/// Largest supported field size; keeps every element in one byte and all
/// tables tiny.
pub const MAX_Q: u32 = 128;

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..=n / 2).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Global configuration: the base field F_q and the derived constants of
/// the specialization (genus 0, one place at infinity of degree 1, narrow
/// class number 1).
#[derive(Clone)]
pub struct Ctx {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// Defining modulus over F_p (ascending coefficients, monic, degree e);
    /// `None` exactly when e = 1.
    pub modulus: Option<Vec<u8>>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    trace: Vec<u8>,
    /// Genus of the projective line.
    pub genus: u32,
    /// Degree of the place at infinity.
    pub d_inf: u32,
    /// Number of sign-normalized rank-one modules; asserted to be 1 at
    /// construction via (q^d_inf - 1)/(q - 1) * h with h = 1.
    pub h_sgn: u32,
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ctx(q={}={}^{})", self.q, self.p, self.e)
    }
}

/// Default defining moduli for the small extension fields used at desk
/// scale; anything else must be supplied explicitly.
fn default_modulus(p: u32, e: u32) -> Option<Vec<u8>> {
    match (p, e) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (3, 3) => Some(vec![1, 2, 0, 1]),
        (5, 2) => Some(vec![2, 0, 1]),
        (7, 2) => Some(vec![1, 0, 1]),
        _ => None,
    }
}

impl Ctx {
    /// Builds the configuration for F_q with q = p^e.
    ///
    /// For e > 1 a monic irreducible `modulus` of degree e over F_p defines
    /// the field; omitted, a built-in default is used when one exists.
    /// Irreducibility of the modulus and the derived constants (genus 0,
    /// d_inf = 1, h_sgn = 1) are verified, not assumed.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u8>>) -> Result<Ctx> {
        if !is_prime(p) {
            return Err(Error::Config(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Config("extension degree e must be >= 1".into()));
        }
        let q = p.checked_pow(e).filter(|&q| q <= MAX_Q).ok_or_else(|| {
            Error::Config(format!("q = {p}^{e} exceeds the supported size {MAX_Q}"))
        })?;
        let modulus = match (e, modulus) {
            (1, None) => None,
            (1, Some(_)) => {
                return Err(Error::Config("a modulus is only meaningful for e > 1".into()))
            }
            (_, m) => {
                let m = m.or_else(|| default_modulus(p, e)).ok_or_else(|| {
                    Error::Config(format!("no built-in modulus for p={p}, e={e}; supply one"))
                })?;
                validate_modulus(p, e, &m)?;
                Some(m)
            }
        };

        let q_us = q as usize;
        let mut ctx = Ctx {
            p,
            e,
            q,
            modulus,
            add: vec![0; q_us * q_us],
            mul: vec![0; q_us * q_us],
            neg: vec![0; q_us],
            inv: vec![0; q_us],
            trace: vec![0; q_us],
            genus: 0,
            d_inf: 1,
            h_sgn: 0,
        };
        ctx.build_tables();

        // h(sgn) = (q^d_inf - 1)/(q - 1) * h(O); h(O) = 1 for a polynomial
        // ring, d_inf = 1 here. Computed, then required to be 1.
        let h_o = 1u32;
        let h_sgn = (q.pow(ctx.d_inf) - 1) / (q - 1) * h_o;
        if h_sgn != 1 {
            return Err(Error::Config(format!("h(sgn) = {h_sgn}, expected 1")));
        }
        ctx.h_sgn = h_sgn;
        Ok(ctx)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let p = self.p as u8;
        let e = self.e as usize;
        if self.e == 1 {
            for a in 0..q {
                for b in 0..q {
                    self.add[a * q + b] = ((a + b) % q) as u8;
                    self.mul[a * q + b] = ((a * b) % q) as u8;
                }
                self.neg[a] = ((q - a) % q) as u8;
                self.trace[a] = a as u8;
            }
        } else {
            let modulus = self.modulus.clone().unwrap();
            let digits = |x: usize| -> Vec<u8> {
                let mut v = vec![0u8; e];
                let mut x = x;
                for d in v.iter_mut() {
                    *d = (x % p as usize) as u8;
                    x /= p as usize;
                }
                v
            };
            let code = |v: &[u8]| -> usize {
                v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
            };
            for a in 0..q {
                let da = digits(a);
                for b in 0..q {
                    let db = digits(b);
                    let sum: Vec<u8> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                    self.add[a * q + b] = code(&sum) as u8;
                    // schoolbook product then reduction mod the modulus
                    let mut prod = vec![0u8; 2 * e];
                    for (i, &x) in da.iter().enumerate() {
                        for (j, &y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    for k in (e..2 * e).rev() {
                        let c = prod[k];
                        if c != 0 {
                            prod[k] = 0;
                            for (i, &m) in modulus.iter().enumerate().take(e) {
                                let sub = (c * m) % p;
                                prod[k - e + i] = (prod[k - e + i] + p - sub) % p;
                            }
                        }
                    }
                    self.mul[a * q + b] = code(&prod[..e]) as u8;
                }
                let neg: Vec<u8> = da.iter().map(|&x| (p - x) % p).collect();
                self.neg[a] = code(&neg) as u8;
            }
        }
        // inverses by exhaustive search; traces by Tr(x) = sum of x^(p^i)
        for a in 1..q {
            for b in 1..q {
                if self.mul[a * q + b] == 1 {
                    self.inv[a] = b as u8;
                    break;
                }
            }
        }
        if self.e > 1 {
            for a in 0..q {
                let mut tr = 0u8;
                let mut pw = a as u8;
                for _ in 0..e {
                    tr = self.add[tr as usize * q + pw as usize];
                    let mut acc = pw;
                    for _ in 1..p {
                        acc = self.mul[acc as usize * q + pw as usize];
                    }
                    pw = acc;
                }
                // the trace lands in the prime field, whose codes are 0..p
                debug_assert!(tr < p);
                self.trace[a] = tr;
            }
        }
    }

    pub fn fadd(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }
    pub fn fsub(&self, a: Elem, b: Elem) -> Elem {
        self.fadd(a, self.neg[b as usize])
    }
    pub fn fmul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }
    pub fn fneg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }
    /// Multiplicative inverse; panics on 0 (callers guard).
    pub fn finv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }
    /// Trace to the prime field, as a residue 0..p.
    pub fn ftrace(&self, a: Elem) -> u8 {
        self.trace[a as usize]
    }
    /// True when the code denotes an element of the prime subfield.
    pub fn in_prime_field(&self, a: Elem) -> bool {
        (a as u32) < self.p
    }
}

/// Dense polynomial over F_q, lowest-degree coefficient first, no trailing
/// zeros; the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<Elem>);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Canonical text form, descending degree: "T^2+T+1", "2*T+1". Coefficients
// print as their element codes, which is the grammar's form for prime
// fields; extension fields get the bracketed form from the parser module,
// which knows p.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.0.len()).rev() {
            let c = self.0[k];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (c, k) {
                (c, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, k) => write!(f, "T^{k}")?,
                (c, 1) => write!(f, "{c}*T")?,
                (c, k) => write!(f, "{c}*T^{k}")?,
            }
        }
        Ok(())
    }
}

// Canonical order: by degree, then by coefficient vector compared from the
// leading coefficient down. This matches the enumeration order (the index
// of a degree-n monic in the enumeration is its coefficient string read as
// a base-q integer).
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly(vec![])
    }
    pub fn one() -> Poly {
        Poly(vec![1])
    }
    /// The variable T.
    pub fn t() -> Poly {
        Poly(vec![0, 1])
    }
    pub fn constant(c: Elem) -> Poly {
        if c == 0 {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }
    /// c * T^k.
    pub fn monomial(c: Elem, k: usize) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly(v)
    }
    /// Builds from an ascending coefficient vector, trimming trailing zeros.
    pub fn from_coeffs(mut v: Vec<Elem>) -> Poly {
        while v.last() == Some(&0) {
            v.pop();
        }
        Poly(v)
    }
    /// Degree; `None` is the "minus infinity" degree of the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }
    pub fn coeff(&self, k: usize) -> Elem {
        self.0.get(k).copied().unwrap_or(0)
    }
    /// Leading coefficient, 0 for the zero polynomial.
    pub fn lead(&self) -> Elem {
        self.0.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }
}

/// Sign of a polynomial: its leading coefficient, with sgn(0) = 0. Monic
/// polynomials are exactly those of sign 1.
pub fn sgn_leading(f: &Poly) -> Elem {
    f.lead()
}

pub fn poly_add(ctx: &Ctx, f: &Poly, g: &Poly) -> Poly {
    let n = f.0.len().max(g.0.len());
    let v = (0..n).map(|i| ctx.fadd(f.coeff(i), g.coeff(i))).collect();
    Poly::from_coeffs(v)
}

pub fn poly_neg(ctx: &Ctx, f: &Poly) -> Poly {
    Poly(f.0.iter().map(|&c| ctx.fneg(c)).collect())
}

pub fn poly_sub(ctx: &Ctx, f: &Poly, g: &Poly) -> Poly {
    poly_add(ctx, f, &poly_neg(ctx, g))
}

pub fn poly_scale(ctx: &Ctx, c: Elem, f: &Poly) -> Poly {
    if c == 0 {
        return Poly::zero();
    }
    Poly(f.0.iter().map(|&a| ctx.fmul(c, a)).collect())
}

pub fn poly_mul(ctx: &Ctx, f: &Poly, g: &Poly) -> Poly {
    if f.is_zero() || g.is_zero() {
        return Poly::zero();
    }
    let mut v = vec![0; f.0.len() + g.0.len() - 1];
    for (i, &a) in f.0.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.0.iter().enumerate() {
            v[i + j] = ctx.fadd(v[i + j], ctx.fmul(a, b));
        }
    }
    Poly::from_coeffs(v)
}

/// Long division: f = quot * g + rem with deg rem < deg g.
pub fn poly_divmod(ctx: &Ctx, f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    if g.is_zero() {
        return Err(Error::DegenerateInput("division by the zero polynomial".into()));
    }
    let dg = g.deg().unwrap();
    let lg_inv = ctx.finv(g.lead());
    let mut rem = f.clone();
    let mut quot = vec![0; f.0.len().saturating_sub(dg)];
    while let Some(dr) = rem.deg() {
        if dr < dg {
            break;
        }
        let c = ctx.fmul(rem.lead(), lg_inv);
        let k = dr - dg;
        quot[k] = c;
        // rem -= c * T^k * g, cancelling the leading term
        let mut v = rem.0;
        for (j, &b) in g.0.iter().enumerate() {
            v[k + j] = ctx.fsub(v[k + j], ctx.fmul(c, b));
        }
        rem = Poly::from_coeffs(v);
    }
    Ok((Poly::from_coeffs(quot), rem))
}

pub fn poly_rem(ctx: &Ctx, f: &Poly, g: &Poly) -> Result<Poly> {
    Ok(poly_divmod(ctx, f, g)?.1)
}

/// Monic normalization: divides by the leading coefficient. Zero maps to
/// zero.
pub fn poly_monic(ctx: &Ctx, f: &Poly) -> Poly {
    match f.lead() {
        0 | 1 => f.clone(),
        c => poly_scale(ctx, ctx.finv(c), f),
    }
}

/// Monic greatest common divisor; gcd(f, 0) is the monic normalization
/// of f.
pub fn poly_gcd(ctx: &Ctx, f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::DegenerateInput("gcd(0, 0)".into()));
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = poly_rem(ctx, &a, &b)?;
        a = b;
        b = r;
    }
    Ok(poly_monic(ctx, &a))
}

/// Extended Euclid: returns (d, s, t) with s*f + t*g = d = gcd(f, g),
/// d monic.
pub fn poly_xgcd(ctx: &Ctx, f: &Poly, g: &Poly) -> Result<(Poly, Poly, Poly)> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::DegenerateInput("gcd(0, 0)".into()));
    }
    let (mut r0, mut r1) = (f.clone(), g.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = poly_divmod(ctx, &r0, &r1)?;
        let step = |x0: &Poly, x1: &Poly| poly_sub(ctx, x0, &poly_mul(ctx, &q, x1));
        (r0, r1) = (r1.clone(), r);
        (s0, s1) = (s1.clone(), step(&s0, &s1));
        (t0, t1) = (t1.clone(), step(&t0, &t1));
    }
    let c = r0.lead();
    if c != 1 {
        let ci = ctx.finv(c);
        r0 = poly_scale(ctx, ci, &r0);
        s0 = poly_scale(ctx, ci, &s0);
        t0 = poly_scale(ctx, ci, &t0);
    }
    Ok((r0, s0, t0))
}

/// Inverse of f modulo m, defined when gcd(f, m) = 1.
pub fn poly_invmod(ctx: &Ctx, f: &Poly, m: &Poly) -> Result<Poly> {
    let (d, s, _) = poly_xgcd(ctx, f, m)?;
    if !d.is_one() {
        return Err(Error::NotCoprime(format!("gcd({f}, {m}) = {d} != 1")));
    }
    poly_rem(ctx, &s, m)
}

pub fn poly_lcm(ctx: &Ctx, f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DegenerateInput("lcm with zero".into()));
    }
    let d = poly_gcd(ctx, f, g)?;
    let (quot, _) = poly_divmod(ctx, f, &d)?;
    Ok(poly_monic(ctx, &poly_mul(ctx, &quot, g)))
}

/// All q^n monic polynomials of degree n, or only the irreducible ones, in
/// the canonical enumeration order (coefficient string read as a base-q
/// integer, ascending).
pub fn enumerate_monic(ctx: &Ctx, n: usize, irreducible_only: bool) -> Vec<Poly> {
    if irreducible_only {
        return irreducibles_of_degree(ctx, n);
    }
    let q = ctx.q as u64;
    let count = q.pow(n as u32);
    (0..count)
        .map(|k| {
            let mut v = vec![0u8; n + 1];
            let mut k = k;
            for d in v.iter_mut().take(n) {
                *d = (k % q) as u8;
                k /= q;
            }
            v[n] = 1;
            Poly(v)
        })
        .collect()
}

/// All q^d polynomials of degree < d (the canonical residues mod any
/// degree-d modulus), in the canonical order.
pub fn enumerate_residues(ctx: &Ctx, d: usize) -> Vec<Poly> {
    let q = ctx.q as u64;
    (0..q.pow(d as u32))
        .map(|k| {
            let mut v = vec![0u8; d];
            let mut k = k;
            for c in v.iter_mut() {
                *c = (k % q) as u8;
                k /= q;
            }
            Poly::from_coeffs(v)
        })
        .collect()
}

/// Monic irreducibles of each degree 1..=n, by repeated trial division:
/// a monic of degree d is irreducible iff no irreducible of degree <= d/2
/// divides it. Degree 0 yields the empty list (units are not primes).
pub fn irreducibles_up_to(ctx: &Ctx, n: usize) -> Vec<Vec<Poly>> {
    let mut table: Vec<Vec<Poly>> = vec![vec![]];
    for d in 1..=n {
        let mut layer = vec![];
        'cand: for f in enumerate_monic(ctx, d, false) {
            for lower in table.iter().take(d / 2 + 1).skip(1) {
                for p in lower {
                    if poly_rem(ctx, &f, p).unwrap().is_zero() {
                        continue 'cand;
                    }
                }
            }
            layer.push(f);
        }
        table.push(layer);
    }
    table
}

pub fn irreducibles_of_degree(ctx: &Ctx, n: usize) -> Vec<Poly> {
    if n == 0 {
        return vec![];
    }
    irreducibles_up_to(ctx, n).swap_remove(n)
}

pub fn is_irreducible(ctx: &Ctx, f: &Poly) -> bool {
    match f.deg() {
        None | Some(0) => false,
        Some(d) => {
            let table = irreducibles_up_to(ctx, d / 2);
            !table
                .iter()
                .flatten()
                .any(|p| poly_rem(ctx, f, p).unwrap().is_zero())
        }
    }
}

fn validate_modulus(p: u32, e: u32, m: &[u8]) -> Result<()> {
    if m.len() != e as usize + 1 || m[e as usize] != 1 {
        return Err(Error::Config(format!("modulus must be monic of degree {e}")));
    }
    if m.iter().any(|&c| c as u32 >= p) {
        return Err(Error::Config("modulus coefficients must lie in 0..p".into()));
    }
    let fp = Ctx::new(p, 1, None)?;
    let poly = Poly::from_coeffs(m.to_vec());
    if !is_irreducible(&fp, &poly) {
        return Err(Error::Config(format!(
            "modulus {poly} is reducible over F_{p}"
        )));
    }
    Ok(())
}

/// Nonzero ideal of O, named by its unique monic generator; the unit ideal
/// is generated by 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonicIdeal {
    gen: Poly,
}

impl fmt::Debug for MonicIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MonicIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

impl MonicIdeal {
    /// Ideal generated by any nonzero polynomial; the generator is
    /// normalized monic.
    pub fn new(ctx: &Ctx, f: &Poly) -> Result<MonicIdeal> {
        if f.is_zero() {
            return Err(Error::DegenerateInput("the zero ideal is excluded".into()));
        }
        Ok(MonicIdeal { gen: poly_monic(ctx, f) })
    }
    pub fn unit() -> MonicIdeal {
        MonicIdeal { gen: Poly::one() }
    }
    pub fn gen(&self) -> &Poly {
        &self.gen
    }
    pub fn is_unit(&self) -> bool {
        self.gen.is_one()
    }
    pub fn deg(&self) -> usize {
        self.gen.deg().unwrap()
    }
    /// Ideal norm q^deg as an exact integer.
    pub fn norm(&self, ctx: &Ctx) -> BigInt {
        BigInt::from(ctx.q).pow(self.deg() as u32)
    }
    /// Ideal norm as a machine integer; fits comfortably at desk scale.
    pub fn norm_u128(&self, ctx: &Ctx) -> u128 {
        (ctx.q as u128).pow(self.deg() as u32)
    }
    pub fn mul(&self, ctx: &Ctx, other: &MonicIdeal) -> MonicIdeal {
        MonicIdeal { gen: poly_mul(ctx, &self.gen, &other.gen) }
    }
    pub fn gcd(&self, ctx: &Ctx, other: &MonicIdeal) -> MonicIdeal {
        MonicIdeal { gen: poly_gcd(ctx, &self.gen, &other.gen).unwrap() }
    }
    pub fn lcm(&self, ctx: &Ctx, other: &MonicIdeal) -> MonicIdeal {
        MonicIdeal { gen: poly_lcm(ctx, &self.gen, &other.gen).unwrap() }
    }
    pub fn divides(&self, ctx: &Ctx, other: &MonicIdeal) -> bool {
        poly_rem(ctx, &other.gen, &self.gen).unwrap().is_zero()
    }
    /// Exact quotient self / other; errors unless other divides self.
    pub fn div_exact(&self, ctx: &Ctx, other: &MonicIdeal) -> Result<MonicIdeal> {
        let (q, r) = poly_divmod(ctx, &self.gen, &other.gen)?;
        if !r.is_zero() {
            return Err(Error::DegenerateInput(format!(
                "{other} does not divide {self}"
            )));
        }
        Ok(MonicIdeal { gen: q })
    }
    pub fn coprime(&self, ctx: &Ctx, other: &MonicIdeal) -> bool {
        self.gcd(ctx, other).is_unit()
    }
    pub fn is_prime(&self, ctx: &Ctx) -> bool {
        is_irreducible(ctx, &self.gen)
    }
    /// All monic divisors, unit and self included, in canonical order.
    pub fn divisors(&self, ctx: &Ctx) -> Vec<MonicIdeal> {
        let factors = factor_monic(ctx, self);
        let mut out = vec![MonicIdeal::unit()];
        for (p, k) in factors {
            let mut next = vec![];
            let mut pw = MonicIdeal::unit();
            for _ in 0..=k {
                for d in &out {
                    next.push(d.mul(ctx, &pw));
                }
                pw = pw.mul(ctx, &p);
            }
            out = next;
        }
        out.sort();
        out
    }
}

/// Prime factorization of a monic ideal by trial division, smallest primes
/// first; the unit ideal factors into the empty list.
pub fn factor_monic(ctx: &Ctx, a: &MonicIdeal) -> Vec<(MonicIdeal, u32)> {
    let mut rest = a.gen().clone();
    let mut out: Vec<(MonicIdeal, u32)> = vec![];
    let d = match rest.deg() {
        None | Some(0) => return out,
        Some(d) => d,
    };
    for p in irreducibles_up_to(ctx, d).into_iter().flatten() {
        if rest.deg() == Some(0) {
            break;
        }
        let mut mult = 0;
        loop {
            let (q, r) = poly_divmod(ctx, &rest, &p).unwrap();
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((MonicIdeal { gen: p }, mult));
        }
    }
    debug_assert!(rest.is_one(), "trial division must exhaust the input");
    out
}

/// Fractional ideal in coprime canonical form num/den.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FracIdeal {
    num: MonicIdeal,
    den: MonicIdeal,
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num.gen(), self.den.gen())
    }
}

impl FracIdeal {
    pub fn new(ctx: &Ctx, num: &MonicIdeal, den: &MonicIdeal) -> FracIdeal {
        let d = num.gcd(ctx, den);
        FracIdeal {
            num: num.div_exact(ctx, &d).unwrap(),
            den: den.div_exact(ctx, &d).unwrap(),
        }
    }
    pub fn num(&self) -> &MonicIdeal {
        &self.num
    }
    pub fn den(&self) -> &MonicIdeal {
        &self.den
    }
    /// Norm N(num)/N(den) as an exact rational.
    pub fn norm(&self, ctx: &Ctx) -> BigRational {
        BigRational::new(self.num.norm(ctx), self.den.norm(ctx))
    }
}
