//! The scalar tower of the algebra: the cyclotomic field Q(zeta_p) in
//! exact coordinates, and Laurent polynomials in the formal variable
//! u = q^(-beta) over it.
//!
//! Character values are p-th roots of unity, structure constants are
//! rational, and the analytic flow twists by integer powers of u; this
//! ring closes over all three at once, so every algebra identity in the
//! crate is decided exactly here.

use crate::qpoly::{qp_divmod, qp_trim, qp_xgcd};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Element of Q(zeta_p) in the power basis 1, zeta, ..., zeta^(p-2); the
/// relation 1 + zeta + ... + zeta^(p-1) = 0 is applied on reduction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclo {
    p: u32,
    coords: Vec<BigRational>,
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::qpoly::qp_format(&qp_trim(self.coords.clone()), "z"))
    }
}

impl Cyclo {
    pub fn zero(p: u32) -> Cyclo {
        Cyclo { p, coords: vec![BigRational::zero(); (p - 1) as usize] }
    }
    pub fn one(p: u32) -> Cyclo {
        Cyclo::from_rational(p, BigRational::one())
    }
    pub fn from_rational(p: u32, r: BigRational) -> Cyclo {
        let mut c = Cyclo::zero(p);
        c.coords[0] = r;
        c
    }
    pub fn from_int(p: u32, n: i64) -> Cyclo {
        Cyclo::from_rational(p, BigRational::from(BigInt::from(n)))
    }
    /// zeta_p^k; any integer k is reduced mod p.
    pub fn zeta_pow(p: u32, k: i64) -> Cyclo {
        let k = k.rem_euclid(p as i64) as usize;
        let mut c = Cyclo::zero(p);
        if k == (p - 1) as usize {
            // zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
            for x in c.coords.iter_mut() {
                *x = -BigRational::one();
            }
        } else {
            c.coords[k] = BigRational::one();
        }
        c
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }
    /// The rational number this element equals, when it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &Cyclo) {
        assert_eq!(self.p, other.p, "mixed cyclotomic orders");
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        self.check(other);
        Cyclo {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
    pub fn neg(&self) -> Cyclo {
        Cyclo { p: self.p, coords: self.coords.iter().map(|a| -a).collect() }
    }
    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.add(&other.neg())
    }
    pub fn scale(&self, r: &BigRational) -> Cyclo {
        Cyclo { p: self.p, coords: self.coords.iter().map(|a| a * r).collect() }
    }
    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        self.check(other);
        let p = self.p as usize;
        // convolution of exponents mod p, then reduction of the zeta^(p-1)
        // coordinate through the vanishing sum of all p-th roots
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        let last = full[p - 1].clone();
        Cyclo {
            p: self.p,
            coords: full[..p - 1].iter().map(|c| c - &last).collect(),
        }
    }
    /// Complex conjugation zeta -> zeta^(p-1) = zeta^(-1).
    pub fn conj(&self) -> Cyclo {
        let p = self.p as usize;
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            full[(p - i) % p] = a.clone();
        }
        let last = full[p - 1].clone();
        Cyclo {
            p: self.p,
            coords: full[..p - 1].iter().map(|c| c - &last).collect(),
        }
    }
    /// Multiplicative inverse, by extended Euclid against the cyclotomic
    /// polynomial 1 + x + ... + x^(p-1); `None` for zero.
    pub fn inverse(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        let phi: Vec<BigRational> = (0..self.p).map(|_| BigRational::one()).collect();
        let me = qp_trim(self.coords.clone());
        let (d, s, _) = qp_xgcd(&me, &phi);
        assert_eq!(d, vec![BigRational::one()], "cyclotomic polynomial not coprime");
        let (_, r) = qp_divmod(&s, &phi);
        let mut coords = r;
        coords.resize((self.p - 1) as usize, BigRational::zero());
        Some(Cyclo { p: self.p, coords })
    }
    pub fn div(&self, other: &Cyclo) -> Cyclo {
        self.mul(&other.inverse().expect("division by zero"))
    }
    /// Numeric value with zeta_p = exp(2 pi i / p).
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coords.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / self.p as f64;
            acc += Complex64::from_polar(1.0, angle)
                * crate::places_zeta::rational_to_f64(c);
        }
        acc
    }
}

/// Laurent polynomial in u with coefficients in Q(zeta_p); no zero
/// coefficients stored.
#[derive(Clone, PartialEq, Eq)]
pub struct UScalar {
    p: u32,
    terms: BTreeMap<i64, Cyclo>,
}

impl fmt::Debug for UScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Ascending powers of u; non-rational coefficients are parenthesized:
// "-1+2*u", "(1+z)*u^2", "u^-1+3".
impl fmt::Display for UScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (&k, c) in &self.terms {
            let (body, negated) = match c.as_rational() {
                Some(r) => {
                    let a = r.abs();
                    let s = if a.is_one() && k != 0 { String::new() } else { a.to_string() };
                    (s, r.is_negative())
                }
                None => {
                    let s = format!("{c}");
                    if s.contains('+') || s.contains('-') {
                        (format!("({s})"), false)
                    } else {
                        (s, false)
                    }
                }
            };
            if out.is_empty() {
                if negated {
                    out.push('-');
                }
            } else {
                out.push(if negated { '-' } else { '+' });
            }
            out.push_str(&body);
            if k != 0 {
                if !body.is_empty() {
                    out.push('*');
                }
                out.push('u');
                if k != 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
            if k == 0 && body.is_empty() {
                out.push('1');
            }
        }
        write!(f, "{out}")
    }
}

impl UScalar {
    pub fn zero(p: u32) -> UScalar {
        UScalar { p, terms: BTreeMap::new() }
    }
    pub fn one(p: u32) -> UScalar {
        UScalar::from_cyclo(Cyclo::one(p))
    }
    pub fn from_cyclo(c: Cyclo) -> UScalar {
        UScalar::monomial(0, c)
    }
    pub fn from_rational(p: u32, r: BigRational) -> UScalar {
        UScalar::from_cyclo(Cyclo::from_rational(p, r))
    }
    pub fn from_int(p: u32, n: i64) -> UScalar {
        UScalar::from_cyclo(Cyclo::from_int(p, n))
    }
    /// c * u^k.
    pub fn monomial(k: i64, c: Cyclo) -> UScalar {
        let p = c.p();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        UScalar { p, terms }
    }
    pub fn u_pow(p: u32, k: i64) -> UScalar {
        UScalar::monomial(k, Cyclo::one(p))
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn terms(&self) -> &BTreeMap<i64, Cyclo> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }
    pub fn coeff(&self, k: i64) -> Cyclo {
        self.terms.get(&k).cloned().unwrap_or_else(|| Cyclo::zero(self.p))
    }
    pub fn min_pow(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }
    pub fn max_pow(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }
    /// The constant this equals when it is free of u.
    pub fn as_cyclo(&self) -> Option<Cyclo> {
        match (self.terms.len(), self.terms.get(&0)) {
            (0, _) => Some(Cyclo::zero(self.p)),
            (1, Some(c)) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &UScalar) -> UScalar {
        assert_eq!(self.p, other.p, "mixed cyclotomic orders");
        let mut terms = self.terms.clone();
        for (&k, c) in &other.terms {
            let entry = terms.entry(k).or_insert_with(|| Cyclo::zero(self.p));
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(&k);
            }
        }
        UScalar { p: self.p, terms }
    }
    pub fn neg(&self) -> UScalar {
        UScalar {
            p: self.p,
            terms: self.terms.iter().map(|(&k, c)| (k, c.neg())).collect(),
        }
    }
    pub fn sub(&self, other: &UScalar) -> UScalar {
        self.add(&other.neg())
    }
    pub fn mul(&self, other: &UScalar) -> UScalar {
        assert_eq!(self.p, other.p, "mixed cyclotomic orders");
        let mut out = UScalar::zero(self.p);
        for (&i, a) in &self.terms {
            for (&j, b) in &other.terms {
                out = out.add(&UScalar::monomial(i + j, a.mul(b)));
            }
        }
        out
    }
    pub fn scale(&self, c: &Cyclo) -> UScalar {
        self.mul(&UScalar::from_cyclo(c.clone()))
    }
    /// Multiply by u^k (the analytic twist step).
    pub fn shift(&self, k: i64) -> UScalar {
        UScalar {
            p: self.p,
            terms: self.terms.iter().map(|(&i, c)| (i + k, c.clone())).collect(),
        }
    }
    /// Coefficient-wise conjugation; u is real and stays fixed.
    pub fn conj(&self) -> UScalar {
        UScalar {
            p: self.p,
            terms: self.terms.iter().map(|(&k, c)| (k, c.conj())).collect(),
        }
    }
    /// Numeric value at a real u > 0.
    pub fn eval_complex(&self, u: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&k, c)| c.to_complex() * u.powi(k as i32))
            .sum()
    }
    /// Exact value at a rational u, defined when every coefficient is
    /// rational.
    pub fn eval_rational(&self, u: &BigRational) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (&k, c) in &self.terms {
            let r = c.as_rational()?;
            acc += r * u.pow(k as i32);
        }
        Some(acc)
    }
}

/// Quotient and remainder of Laurent polynomials viewed as ordinary
/// polynomials in u after clearing the common u-power; the divisor must
/// be nonzero. Returns (q, r) with a = q*b + r and deg r < deg b.
pub fn poly_divmod(a: &UScalar, b: &UScalar) -> (UScalar, UScalar) {
    assert!(!b.is_zero(), "division by zero");
    let p = a.p();
    let mut rem = a.clone();
    let mut quot = UScalar::zero(p);
    let db = b.max_pow().unwrap();
    let lead = b.coeff(db).inverse().expect("nonzero leading coefficient");
    while !rem.is_zero() && rem.max_pow().unwrap() >= db {
        let k = rem.max_pow().unwrap();
        let c = rem.coeff(k).mul(&lead);
        let m = UScalar::monomial(k - db, c);
        quot = quot.add(&m);
        rem = rem.sub(&m.mul(b));
    }
    (quot, rem)
}

/// Monic greatest common divisor of two polynomials in u over the
/// cyclotomic field (Laurent inputs are shifted to honest polynomials
/// first, so powers of u are treated as units).
pub fn poly_gcd(a: &UScalar, b: &UScalar) -> UScalar {
    let p = a.p();
    let norm = |x: &UScalar| -> UScalar {
        match x.min_pow() {
            Some(m) => x.shift(-m),
            None => UScalar::zero(p),
        }
    };
    let (mut x, mut y) = (norm(a), norm(b));
    while !y.is_zero() {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = norm(&r);
    }
    if x.is_zero() {
        return x;
    }
    let lead = x.coeff(x.max_pow().unwrap()).inverse().expect("nonzero");
    x.scale(&lead)
}

/// Laurent-series expansion of num/den through the u^upto coefficient.
/// The denominator must be nonzero; its lowest coefficient is inverted,
/// so the result starts at num.min_pow - den.min_pow.
pub fn series_quotient(num: &UScalar, den: &UScalar, upto: i64) -> UScalar {
    assert!(!den.is_zero(), "division by zero");
    let p = num.p();
    if num.is_zero() {
        return UScalar::zero(p);
    }
    let s = den.min_pow().unwrap();
    let d = den.shift(-s);
    let d0 = d.coeff(0).inverse().expect("lowest coefficient invertible");
    let n = num.shift(-s);
    let start = n.min_pow().unwrap();
    let mut out = UScalar::zero(p);
    for k in start..=upto {
        // n_k = sum_{j <= k} out_j * d_{k-j}
        let mut acc = n.coeff(k);
        for (&j, c) in out.terms() {
            acc = acc.sub(&c.mul(&d.coeff(k - j)));
        }
        let q = acc.mul(&d0);
        if !q.is_zero() {
            out = out.add(&UScalar::monomial(k, q));
        }
    }
    out
}
