//! The dense *-algebra of the dynamical system, in exact form.
//!
//! Elements are finite linear combinations of basis words
//! mu(a) e(lambda) mu*(b) with a, b coprime monic and lambda a torsion
//! point; coefficients live in the Laurent ring of `scalar`. Products
//! are reduced back to the canonical basis, so equality of elements is
//! literal equality of coefficient tables.

use crate::carlitz::{
    torsion_act, torsion_add, torsion_group, torsion_neg, torsion_reduce, TorsionPoint,
};
use crate::characters::{galois_group, GaloisElem};
use crate::error::Result;
use crate::ffpoly::{poly_mul, Ctx, MonicIdeal};
use crate::scalar::UScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Canonical basis word mu(a) e(lambda) mu*(b); the two ideals are
/// coprime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasisKey {
    a: MonicIdeal,
    lam: TorsionPoint,
    b: MonicIdeal,
}

impl BasisKey {
    pub fn new(ctx: &Ctx, a: &MonicIdeal, lam: &TorsionPoint, b: &MonicIdeal) -> Result<BasisKey> {
        if !a.coprime(ctx, b) {
            return Err(crate::Error::NotCoprime(format!(
                "basis word needs coprime ideals, got ({}, {})",
                a.gen(),
                b.gen()
            )));
        }
        Ok(BasisKey { a: a.clone(), lam: lam.clone(), b: b.clone() })
    }
    pub fn unit() -> BasisKey {
        BasisKey {
            a: MonicIdeal::unit(),
            lam: TorsionPoint::zero(),
            b: MonicIdeal::unit(),
        }
    }
    pub fn a(&self) -> &MonicIdeal {
        &self.a
    }
    pub fn lam(&self) -> &TorsionPoint {
        &self.lam
    }
    pub fn b(&self) -> &MonicIdeal {
        &self.b
    }
    /// deg a - deg b, the eigenvalue exponent of the term under the flow.
    pub fn weight(&self) -> i64 {
        self.a.deg() as i64 - self.b.deg() as i64
    }
}

// Term order: a, then b (each by degree first via the polynomial order),
// then lambda by denominator, numerator.
impl Ord for BasisKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.a
            .cmp(&other.a)
            .then_with(|| self.b.cmp(&other.b))
            .then_with(|| self.lam.den().cmp(other.lam.den()))
            .then_with(|| self.lam.num().cmp(other.lam.num()))
    }
}
impl PartialOrd for BasisKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// True when the formatted polynomial has more than one term at top
/// level (bracketed extension-field coefficients do not count).
pub(crate) fn plus_at_top(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars().skip(1) {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' | '-' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

pub(crate) fn key_string(key: &BasisKey, pf: &dyn Fn(&crate::ffpoly::Poly) -> String) -> String {
    let wrap = |s: String| if plus_at_top(&s) { format!("({s})") } else { s };
    let mut parts = Vec::new();
    if !key.a.is_unit() {
        parts.push(format!("mu({})", pf(key.a.gen())));
    }
    if !key.lam.is_zero() {
        parts.push(format!(
            "e({}/{})",
            wrap(pf(key.lam.num())),
            wrap(pf(key.lam.den()))
        ));
    }
    if !key.b.is_unit() {
        parts.push(format!("mu*({})", pf(key.b.gen())));
    }
    if parts.is_empty() {
        parts.push("e(0)".to_string());
    }
    parts.join("*")
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", key_string(self, &|p| p.to_string()))
    }
}

impl fmt::Debug for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Finite linear combination of basis words over the Laurent scalars;
/// zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElem {
    p: u32,
    terms: BTreeMap<BasisKey, UScalar>,
}

impl AlgebraElem {
    pub fn zero(ctx: &Ctx) -> AlgebraElem {
        AlgebraElem { p: ctx.p, terms: BTreeMap::new() }
    }
    pub fn unit(ctx: &Ctx) -> AlgebraElem {
        AlgebraElem::from_term(ctx, BasisKey::unit(), UScalar::one(ctx.p))
    }
    pub fn from_term(ctx: &Ctx, key: BasisKey, coeff: UScalar) -> AlgebraElem {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(key, coeff);
        }
        AlgebraElem { p: ctx.p, terms }
    }
    pub fn mu(ctx: &Ctx, a: &MonicIdeal) -> AlgebraElem {
        AlgebraElem::from_term(
            ctx,
            BasisKey {
                a: a.clone(),
                lam: TorsionPoint::zero(),
                b: MonicIdeal::unit(),
            },
            UScalar::one(ctx.p),
        )
    }
    pub fn mu_star(ctx: &Ctx, b: &MonicIdeal) -> AlgebraElem {
        AlgebraElem::from_term(
            ctx,
            BasisKey {
                a: MonicIdeal::unit(),
                lam: TorsionPoint::zero(),
                b: b.clone(),
            },
            UScalar::one(ctx.p),
        )
    }
    pub fn e(ctx: &Ctx, lam: &TorsionPoint) -> AlgebraElem {
        AlgebraElem::from_term(
            ctx,
            BasisKey {
                a: MonicIdeal::unit(),
                lam: lam.clone(),
                b: MonicIdeal::unit(),
            },
            UScalar::one(ctx.p),
        )
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn terms(&self) -> &BTreeMap<BasisKey, UScalar> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, key: &BasisKey) -> UScalar {
        self.terms.get(key).cloned().unwrap_or_else(|| UScalar::zero(self.p))
    }
    /// Largest ideal degree among all mu legs; bounds how far a vector
    /// can be pushed in a truncated representation.
    pub fn max_ideal_deg(&self) -> usize {
        self.terms
            .keys()
            .map(|k| k.a.deg().max(k.b.deg()))
            .max()
            .unwrap_or(0)
    }
    /// Least common multiple of the annihilators of every torsion label;
    /// the Galois action on this element factors through this level.
    pub fn ann_lcm(&self, ctx: &Ctx) -> MonicIdeal {
        let mut c = MonicIdeal::unit();
        for k in self.terms.keys() {
            c = c.lcm(ctx, &k.lam.annihilator(ctx));
        }
        c
    }

    pub fn add(&self, other: &AlgebraElem) -> AlgebraElem {
        assert_eq!(self.p, other.p, "mixed coefficient fields");
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(k.clone()).or_insert_with(|| UScalar::zero(self.p));
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        AlgebraElem { p: self.p, terms }
    }
    pub fn neg(&self) -> AlgebraElem {
        AlgebraElem {
            p: self.p,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }
    pub fn sub(&self, other: &AlgebraElem) -> AlgebraElem {
        self.add(&other.neg())
    }
    pub fn scale(&self, c: &UScalar) -> AlgebraElem {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let w = v.mul(c);
            if !w.is_zero() {
                terms.insert(k.clone(), w);
            }
        }
        AlgebraElem { p: self.p, terms }
    }
    pub fn scale_rational(&self, r: &BigRational) -> AlgebraElem {
        self.scale(&UScalar::from_rational(self.p, r.clone()))
    }
}

/// Canonical text form: each coefficient is split into scalar monomials
/// rational * z^j * u^k, one grammar term per monomial, in term order.
pub(crate) fn elem_string(x: &AlgebraElem, pf: &dyn Fn(&crate::ffpoly::Poly) -> String) -> String {
    if x.terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (key, coeff) in &x.terms {
        for (&upow, cyc) in coeff.terms() {
            for (zpow, rat) in cyc.coords().iter().enumerate() {
                if rat.is_zero() {
                    continue;
                }
                let mag = rat.abs();
                let mut pieces: Vec<String> = Vec::new();
                if !mag.is_one() {
                    if mag.denom().is_one() {
                        pieces.push(mag.to_string());
                    } else {
                        pieces.push(format!("({mag})"));
                    }
                }
                if zpow > 0 {
                    pieces.push(format!("z^{zpow}"));
                }
                if upow != 0 {
                    pieces.push(format!("u^{upow}"));
                }
                pieces.push(key_string(key, pf));
                if out.is_empty() {
                    if rat.is_negative() {
                        out.push('-');
                    }
                } else {
                    out.push(if rat.is_negative() { '-' } else { '+' });
                }
                out.push_str(&pieces.join("*"));
            }
        }
    }
    out
}

impl fmt::Display for AlgebraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", elem_string(self, &|p| p.to_string()))
    }
}

impl fmt::Debug for AlgebraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The word mu(a) e(lambda) mu*(b) as an element, for arbitrary (not
/// necessarily coprime) monic ideals. A common divisor d is peeled off
/// through mu(d) e(lambda) mu*(d) = (1/Nd) * sum of e over the Nd
/// preimages of lambda under multiplication by d, until the remaining
/// ideals are coprime.
pub fn basis_elem(
    ctx: &Ctx,
    a: &MonicIdeal,
    lam: &TorsionPoint,
    b: &MonicIdeal,
) -> AlgebraElem {
    let d = a.gcd(ctx, b);
    if d.is_unit() {
        return AlgebraElem::from_term(
            ctx,
            BasisKey { a: a.clone(), lam: lam.clone(), b: b.clone() },
            UScalar::one(ctx.p),
        );
    }
    let a1 = a.div_exact(ctx, &d).expect("gcd divides");
    let b1 = b.div_exact(ctx, &d).expect("gcd divides");
    let lam0 = torsion_reduce(ctx, lam.num(), &poly_mul(ctx, lam.den(), d.gen()))
        .expect("nonzero denominator");
    let inv_norm = BigRational::new(BigInt::one(), d.norm(ctx));
    let mut out = AlgebraElem::zero(ctx);
    for nu in torsion_group(ctx, &d, false) {
        let gamma = torsion_add(ctx, &lam0, &nu);
        out = out.add(&basis_elem(ctx, &a1, &gamma, &b1).scale_rational(&inv_norm));
    }
    out
}

/// Bilinear product, reduced to canonical basis form.
pub fn mul(ctx: &Ctx, x: &AlgebraElem, y: &AlgebraElem) -> AlgebraElem {
    assert_eq!(x.p, y.p, "mixed coefficient fields");
    let mut out = AlgebraElem::zero(ctx);
    for (k1, c1) in &x.terms {
        for (k2, c2) in &y.terms {
            // mu*(b1) mu(a2) = mu(a2/d) mu*(b1/d) with d their gcd
            let d = k2.a.gcd(ctx, &k1.b);
            let a2r = k2.a.div_exact(ctx, &d).expect("gcd divides");
            let b1r = k1.b.div_exact(ctx, &d).expect("gcd divides");
            let lam = torsion_add(
                ctx,
                &torsion_act(ctx, a2r.gen(), &k1.lam),
                &torsion_act(ctx, b1r.gen(), &k2.lam),
            );
            let a_tot = k1.a.mul(ctx, &a2r);
            let b_tot = k2.b.mul(ctx, &b1r);
            out = out.add(&basis_elem(ctx, &a_tot, &lam, &b_tot).scale(&c1.mul(c2)));
        }
    }
    out
}

/// Convenience product of several factors, left to right.
pub fn mul_all(ctx: &Ctx, factors: &[AlgebraElem]) -> AlgebraElem {
    let mut acc = AlgebraElem::unit(ctx);
    for f in factors {
        acc = mul(ctx, &acc, f);
    }
    acc
}

/// The involution: (a, lambda, b) -> (b, -lambda, a) with conjugated
/// coefficients.
pub fn adjoint(ctx: &Ctx, x: &AlgebraElem) -> AlgebraElem {
    let mut out = AlgebraElem::zero(ctx);
    for (k, c) in &x.terms {
        let key = BasisKey {
            a: k.b.clone(),
            lam: torsion_neg(ctx, &k.lam),
            b: k.a.clone(),
        };
        out = out.add(&AlgebraElem::from_term(ctx, key, c.conj()));
    }
    out
}

/// The time-iβn step of the flow: a term of weight w = deg a - deg b is
/// scaled by u^{nw}. At n = 0 this is the identity; it is multiplicative
/// because the product preserves total weight.
pub fn kms_twist(x: &AlgebraElem, n: i64) -> AlgebraElem {
    let mut terms = BTreeMap::new();
    for (k, c) in &x.terms {
        terms.insert(k.clone(), c.shift(n * k.weight()));
    }
    AlgebraElem { p: x.p, terms }
}

/// Galois action: mu legs are fixed, torsion labels move by the unit.
/// Every label's annihilator must divide the element's level.
pub fn galois_act_alg(ctx: &Ctx, sigma: &GaloisElem, x: &AlgebraElem) -> Result<AlgebraElem> {
    let mut out = AlgebraElem::zero(ctx);
    for (k, c) in &x.terms {
        let moved = sigma.act(ctx, &k.lam)?;
        let key = BasisKey { a: k.a.clone(), lam: moved, b: k.b.clone() };
        out = out.add(&AlgebraElem::from_term(ctx, key, c.clone()));
    }
    Ok(out)
}

/// Conditional expectation onto the Galois-fixed subalgebra: the finite
/// average of the Galois action at the level lcm of all annihilators.
pub fn cond_expectation(ctx: &Ctx, x: &AlgebraElem) -> AlgebraElem {
    let c = x.ann_lcm(ctx);
    let group = galois_group(ctx, &c);
    let inv_order = BigRational::new(BigInt::one(), BigInt::from(group.len()));
    let mut acc = AlgebraElem::zero(ctx);
    for sigma in &group {
        let moved = galois_act_alg(ctx, sigma, x).expect("level is the lcm of annihilators");
        acc = acc.add(&moved);
    }
    acc.scale_rational(&inv_order)
}
