//! Places of F_q(T), the zeta function with the factor at infinity
//! removed, and congruence-class partial zeta functions, all as exact
//! rational functions in u = q^(-beta).
//!
//! The finite places are the monic irreducibles of O = F_q[T]; the place
//! at infinity has degree 1, so it joins the count at norm q. Genus 0
//! makes the point counts exactly q^n + 1 with no error term, which the
//! Weil check verifies degree by degree.

use crate::error::{Error, Result};
use crate::ffpoly::{
    enumerate_residues, irreducibles_up_to, poly_gcd, poly_rem, Ctx, MonicIdeal, Poly,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use crate::qpoly::{qp_add, qp_divmod, qp_gcd, qp_mul, qp_neg, qp_format, qp_trim};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Rational function in u with rational coefficients, kept in lowest terms
/// with denominator constant term 1; the exact form of every zeta function
/// here.
#[derive(Clone, PartialEq, Eq)]
pub struct ZetaRational {
    num: Vec<BigRational>,
    den: Vec<BigRational>,
}

impl fmt::Debug for ZetaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ZetaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == [BigRational::one()] {
            write!(f, "{}", qp_format(&self.num, "u"))
        } else {
            write!(f, "({})/({})", qp_format(&self.num, "u"), qp_format(&self.den, "u"))
        }
    }
}

impl ZetaRational {
    /// Builds num/den and reduces to canonical form. The denominator must
    /// have a nonzero constant term (the function must be finite at u = 0).
    pub fn new(num: Vec<BigRational>, den: Vec<BigRational>) -> Result<ZetaRational> {
        let num = qp_trim(num);
        let den = qp_trim(den);
        if den.first().map_or(true, |c| c.is_zero()) {
            return Err(Error::DegenerateInput(
                "denominator must be nonzero at u = 0".into(),
            ));
        }
        let mut z = ZetaRational { num, den };
        z.reduce();
        Ok(z)
    }

    pub fn from_ints(num: &[i64], den: &[i64]) -> ZetaRational {
        let conv = |v: &[i64]| {
            v.iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect::<Vec<_>>()
        };
        ZetaRational::new(conv(num), conv(den)).unwrap()
    }

    pub fn zero() -> ZetaRational {
        ZetaRational::from_ints(&[], &[1])
    }

    pub fn one() -> ZetaRational {
        ZetaRational::from_ints(&[1], &[1])
    }

    fn reduce(&mut self) {
        if self.num.is_empty() {
            self.den = vec![BigRational::one()];
            return;
        }
        let g = qp_gcd(&self.num, &self.den);
        if g.len() > 1 {
            self.num = qp_divmod(&self.num, &g).0;
            self.den = qp_divmod(&self.den, &g).0;
        }
        let c0 = self.den[0].clone();
        for c in self.num.iter_mut().chain(self.den.iter_mut()) {
            *c /= &c0;
        }
    }

    pub fn num_coeffs(&self) -> &[BigRational] {
        &self.num
    }

    pub fn den_coeffs(&self) -> &[BigRational] {
        &self.den
    }

    pub fn add(&self, other: &ZetaRational) -> ZetaRational {
        ZetaRational::new(
            qp_add(&qp_mul(&self.num, &other.den), &qp_mul(&other.num, &self.den)),
            qp_mul(&self.den, &other.den),
        )
        .unwrap()
    }

    pub fn sub(&self, other: &ZetaRational) -> ZetaRational {
        ZetaRational::new(
            qp_add(&qp_mul(&self.num, &other.den), &qp_neg(&qp_mul(&other.num, &self.den))),
            qp_mul(&self.den, &other.den),
        )
        .unwrap()
    }

    pub fn mul(&self, other: &ZetaRational) -> ZetaRational {
        ZetaRational::new(qp_mul(&self.num, &other.num), qp_mul(&self.den, &other.den)).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Coefficient of u^n in the power-series expansion around u = 0.
    pub fn series_coeff(&self, n: usize) -> BigRational {
        // s_n = (num_n - sum_{k=1..n} den_k s_{n-k}) / den_0 with den_0 = 1
        let zero = BigRational::zero();
        let mut s: Vec<BigRational> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut acc = self.num.get(m).unwrap_or(&zero).clone();
            for k in 1..=m.min(self.den.len() - 1) {
                acc -= &self.den[k] * &s[m - k];
            }
            s.push(acc / &self.den[0]);
        }
        s.pop().unwrap()
    }

    /// Exact evaluation at a rational u; errors where the denominator
    /// vanishes.
    pub fn eval_rational(&self, u: &BigRational) -> Result<BigRational> {
        let horner = |v: &[BigRational]| {
            v.iter()
                .rev()
                .fold(BigRational::zero(), |acc, c| acc * u + c)
        };
        let d = horner(&self.den);
        if d.is_zero() {
            return Err(Error::DegenerateInput(format!("pole at u = {u}")));
        }
        Ok(horner(&self.num) / d)
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        let horner = |v: &[BigRational]| {
            v.iter().rev().fold(0.0, |acc, c| {
                acc * u + rational_to_f64(c)
            })
        };
        horner(&self.num) / horner(&self.den)
    }
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    let f = |x: &BigInt| -> f64 {
        // digits fit f64 range at desk scale; go through string to avoid
        // bit fiddling
        x.to_string().parse::<f64>().unwrap()
    };
    f(c.numer()) / f(c.denom())
}

// ---------------------------------------------------------------------
// place counting

/// Counts of places by norm exponent: entry n holds the number of places
/// of norm q^n, the place at infinity included at n = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceCountTable {
    pub by_norm: BTreeMap<usize, u64>,
}

/// Number of places of k of norm q^n: the monic irreducibles of degree n,
/// plus the place at infinity when n = 1.
pub fn count_places_norm(ctx: &Ctx, n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::DegenerateInput("no places of norm q^0".into()));
    }
    let irr = irreducibles_up_to(ctx, n)[n].len() as u64;
    Ok(irr + if n == 1 { 1 } else { 0 })
}

pub fn place_count_table(ctx: &Ctx, max_n: usize) -> Result<PlaceCountTable> {
    if max_n == 0 {
        return Err(Error::DegenerateInput("empty norm range".into()));
    }
    let table = irreducibles_up_to(ctx, max_n);
    let by_norm = (1..=max_n)
        .map(|n| (n, table[n].len() as u64 + if n == 1 { 1 } else { 0 }))
        .collect();
    Ok(PlaceCountTable { by_norm })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilReport {
    pub n: usize,
    /// sum over m | n of m * (places of norm q^m)
    pub lhs: u128,
    /// q^n + 1, the point count of the projective line over F_{q^n}
    pub rhs: u128,
    pub pass: bool,
}

/// Checks sum_{m|n} m * Q(q^m) = q^n + 1; genus 0 forces exact equality.
pub fn weil_identity_check(ctx: &Ctx, n: usize) -> Result<WeilReport> {
    if n == 0 {
        return Err(Error::DegenerateInput("degree must be positive".into()));
    }
    let counts = place_count_table(ctx, n)?;
    let lhs = (1..=n)
        .filter(|m| n % m == 0)
        .map(|m| m as u128 * counts.by_norm[&m] as u128)
        .sum();
    let rhs = (ctx.q as u128).pow(n as u32) + 1;
    Ok(WeilReport { n, lhs, rhs, pass: lhs == rhs })
}

// ---------------------------------------------------------------------
// zeta functions

/// The zeta function with the factor at infinity removed: the sum of
/// N(a)^(-beta) over monic a, which collapses to 1/(1 - q u).
pub fn zeta_closed(ctx: &Ctx) -> ZetaRational {
    ZetaRational::from_ints(&[1], &[1, -(ctx.q as i64)])
}

#[derive(Clone, Copy, Debug)]
pub struct ZetaEval {
    pub closed: f64,
    pub truncated: f64,
    pub tail_bound: f64,
}

/// Numeric evaluation at real beta > 1 with the degree-D truncation
/// sum_{n<=D} q^n u^n and the geometric tail bound
/// q^((1-beta)(D+1)) / (1 - q^(1-beta)).
pub fn zeta_evaluate(ctx: &Ctx, beta: f64, d: usize) -> Result<ZetaEval> {
    if beta <= 1.0 {
        return Err(Error::DivergentSeries(format!(
            "zeta series needs beta > 1, got {beta}"
        )));
    }
    let r = (ctx.q as f64).powf(1.0 - beta);
    let closed = 1.0 / (1.0 - r);
    let truncated = (0..=d).map(|n| r.powi(n as i32)).sum();
    let tail_bound = r.powi(d as i32 + 1) / (1.0 - r);
    Ok(ZetaEval { closed, truncated, tail_bound })
}

/// Partial zeta function of the congruence class r mod c: the sum of
/// u^(deg a) over monic a = r (mod c).
///
/// Exactly one monic representative exists per degree n >= deg c in the
/// class (q^(n - deg c) of them, by choice of the monic quotient), and
/// below deg c only r itself qualifies, when monic; hence the closed form
/// ([r monic] u^(deg r) (1 - q u) + u^(deg c)) / (1 - q u).
///
/// The unit modulus denotes the full sum: partial_zeta((1), r) is the
/// whole zeta function.
pub fn partial_zeta(ctx: &Ctx, c: &MonicIdeal, r: &Poly) -> Result<ZetaRational> {
    if c.is_unit() {
        return Ok(zeta_closed(ctx));
    }
    let dc = c.deg();
    if r.deg().map_or(true, |d| d >= dc) {
        return Err(Error::DegenerateInput(format!(
            "residue {r} is not a canonical nonzero representative mod {c}"
        )));
    }
    if !poly_gcd(ctx, r, c.gen())?.is_one() {
        return Err(Error::NotCoprime(format!("gcd({r}, {}) != 1", c.gen())));
    }
    let q = ctx.q as i64;
    let mut num = vec![BigRational::zero(); dc + 1];
    num[dc] = BigRational::one();
    if r.is_monic() {
        let dr = r.deg().unwrap();
        num[dr] += BigRational::one();
        num[dr + 1] -= BigRational::from(BigInt::from(q));
    }
    ZetaRational::new(num, vec![BigRational::one(), BigRational::from(BigInt::from(-q))])
}

// ---------------------------------------------------------------------
// Frobenius class counts (exploratory)

#[derive(Clone, Debug)]
pub struct FrobeniusClassRow {
    /// canonical residue representing the class of (O/c)*
    pub residue: Poly,
    pub per_degree: BTreeMap<usize, u64>,
    pub total: u64,
    pub places: Vec<Poly>,
    pub frequency: f64,
}

/// Tallies of monic irreducibles of degree <= max_degree by their class
/// mod c. Empirics only: the table reports observed frequencies next to
/// the uniform value and asserts nothing about equidistribution.
#[derive(Clone, Debug)]
pub struct FrobeniusTable {
    pub c: MonicIdeal,
    pub max_degree: usize,
    pub rows: Vec<FrobeniusClassRow>,
    /// 1 / #(O/c)*, the uniform frequency the rows sit beside
    pub uniform: f64,
    /// counts are reported, never asserted against a law
    pub no_assertion: bool,
}

pub fn frobenius_counts(ctx: &Ctx, c: &MonicIdeal, max_degree: usize) -> Result<FrobeniusTable> {
    if max_degree == 0 {
        return Err(Error::DegenerateInput("empty degree range".into()));
    }
    let mut tally: BTreeMap<Poly, (BTreeMap<usize, u64>, Vec<Poly>)> = BTreeMap::new();
    if c.is_unit() {
        tally.insert(Poly::zero(), Default::default());
    } else {
        for r in enumerate_residues(ctx, c.deg()) {
            if !r.is_zero() && poly_gcd(ctx, &r, c.gen())?.is_one() {
                tally.insert(r, Default::default());
            }
        }
    }
    let mut grand_total = 0u64;
    for (d, layer) in irreducibles_up_to(ctx, max_degree).into_iter().enumerate() {
        for pi in layer {
            let class = poly_rem(ctx, &pi, c.gen())?;
            if let Some((per_degree, places)) = tally.get_mut(&class) {
                *per_degree.entry(d).or_insert(0) += 1;
                places.push(pi);
                grand_total += 1;
            }
        }
    }
    let uniform = 1.0 / tally.len() as f64;
    let rows = tally
        .into_iter()
        .map(|(residue, (per_degree, places))| {
            let total = per_degree.values().sum();
            FrobeniusClassRow {
                residue,
                per_degree,
                total,
                places,
                frequency: if grand_total == 0 {
                    0.0
                } else {
                    total as f64 / grand_total as f64
                },
            }
        })
        .collect();
    Ok(FrobeniusTable {
        c: c.clone(),
        max_degree,
        rows,
        uniform,
        no_assertion: true,
    })
}
