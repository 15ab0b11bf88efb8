//! The Carlitz module, twisted polynomial arithmetic, and the torsion
//! module presented exactly as k/O.
//!
//! With q = p^e and sign normalization there is a single rank-one module
//! up to the relevant equivalence, the Carlitz module phi_T = T + tau, so
//! ideals act on torsion through their monic generators and the star
//! action on modules is the identity. Torsion points live in k/O as
//! reduced fractions; the multiplication-by-a map there is the exact
//! shadow of evaluating phi_a.

use crate::error::{Error, Result};
use crate::ffpoly::{
    enumerate_residues, factor_monic, poly_add, poly_divmod, poly_gcd, poly_invmod, poly_mul,
    poly_neg, poly_rem, poly_scale, Ctx, Elem, MonicIdeal, Poly,
};
use std::collections::BTreeMap;
use std::fmt;

/// Element of the twisted polynomial ring O{tau}: coefficient i belongs to
/// tau^i, and tau a = a^q tau.
#[derive(Clone, PartialEq, Eq)]
pub struct TwistedPoly {
    pub coeffs: Vec<Poly>,
}

impl fmt::Debug for TwistedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TwistedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*tau"),
                _ => format!("({c})*tau^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TwistedPoly {
    pub fn zero() -> TwistedPoly {
        TwistedPoly { coeffs: vec![] }
    }
    pub fn one() -> TwistedPoly {
        TwistedPoly { coeffs: vec![Poly::one()] }
    }
    pub fn tau() -> TwistedPoly {
        TwistedPoly { coeffs: vec![Poly::zero(), Poly::one()] }
    }
    pub fn from_coeffs(mut coeffs: Vec<Poly>) -> TwistedPoly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        TwistedPoly { coeffs }
    }
    /// Degree in tau; `None` for zero.
    pub fn deg_tau(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    /// The constant-derivative coefficient, i.e. the tau^0 term.
    pub fn d_coeff(&self) -> Poly {
        self.coeffs.first().cloned().unwrap_or_else(Poly::zero)
    }
    pub fn lead(&self) -> Poly {
        self.coeffs.last().cloned().unwrap_or_else(Poly::zero)
    }
}

/// f^(q^i): over F_q the q-power Frobenius fixes coefficients and sends
/// T^k to T^(kq), so iterating it only spreads the exponents.
fn frobenius_pow(f: &Poly, i: usize, q: u32) -> Poly {
    if f.is_zero() || i == 0 {
        return f.clone();
    }
    let stride = (q as usize).pow(i as u32);
    let mut v = vec![0 as Elem; (f.0.len() - 1) * stride + 1];
    for (k, &c) in f.0.iter().enumerate() {
        v[k * stride] = c;
    }
    Poly::from_coeffs(v)
}

pub fn twisted_add(ctx: &Ctx, f: &TwistedPoly, g: &TwistedPoly) -> TwistedPoly {
    let n = f.coeffs.len().max(g.coeffs.len());
    let get = |h: &TwistedPoly, i: usize| h.coeffs.get(i).cloned().unwrap_or_else(Poly::zero);
    TwistedPoly::from_coeffs((0..n).map(|i| poly_add(ctx, &get(f, i), &get(g, i))).collect())
}

/// Composition product with the commutation rule
/// (a tau^i)(b tau^j) = a b^(q^i) tau^(i+j).
pub fn twisted_mul(ctx: &Ctx, f: &TwistedPoly, g: &TwistedPoly) -> TwistedPoly {
    if f.coeffs.is_empty() || g.coeffs.is_empty() {
        return TwistedPoly::zero();
    }
    let mut out = vec![Poly::zero(); f.coeffs.len() + g.coeffs.len() - 1];
    for (i, a) in f.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let term = poly_mul(ctx, a, &frobenius_pow(b, i, ctx.q));
            out[i + j] = poly_add(ctx, &out[i + j], &term);
        }
    }
    TwistedPoly::from_coeffs(out)
}

/// The Carlitz morphism O -> O{tau}: determined by phi_T = T + tau,
/// extended multiplicatively and F_q-linearly. The result has derivative
/// coefficient a, tau-degree deg a, and leading coefficient sgn(a).
pub fn carlitz_phi(ctx: &Ctx, a: &Poly) -> TwistedPoly {
    let phi_t = TwistedPoly { coeffs: vec![Poly::t(), Poly::one()] };
    let mut out = TwistedPoly::zero();
    let mut pw = TwistedPoly::one(); // phi_(T^k)
    for (k, &c) in a.0.iter().enumerate() {
        if k > 0 {
            pw = twisted_mul(ctx, &pw, &phi_t);
        }
        if c != 0 {
            let scaled = TwistedPoly {
                coeffs: pw.coeffs.iter().map(|f| poly_scale(ctx, c, f)).collect(),
            };
            out = twisted_add(ctx, &out, &scaled);
        }
    }
    out
}

/// Point of the torsion module k/O in lowest terms: num/den with den the
/// monic generator of the annihilator, deg num < deg den, zero = 0/1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Canonical text form "num/den", numerator parenthesized when it has more
// than one term; zero prints as "0".
impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = format!("{}", self.num);
        let d = format!("{}", self.den);
        let np = if self.num.0.iter().filter(|&&c| c != 0).count() > 1 {
            format!("({n})")
        } else {
            n
        };
        let dp = if self.den.0.iter().filter(|&&c| c != 0).count() > 1 {
            format!("({d})")
        } else {
            d
        };
        write!(f, "{np}/{dp}")
    }
}

impl TorsionPoint {
    pub fn zero() -> TorsionPoint {
        TorsionPoint { num: Poly::zero(), den: Poly::one() }
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    /// The annihilator ideal ann_O(lambda) = (den).
    pub fn annihilator(&self, ctx: &Ctx) -> MonicIdeal {
        MonicIdeal::new(ctx, &self.den).unwrap()
    }
}

/// Canonical representative of num/den in k/O: common factors removed,
/// denominator monic, numerator reduced mod the denominator.
pub fn torsion_reduce(ctx: &Ctx, num: &Poly, den: &Poly) -> Result<TorsionPoint> {
    if den.is_zero() {
        return Err(Error::DegenerateInput("zero denominator".into()));
    }
    let g = poly_gcd(ctx, num, den)?;
    let (mut num, _) = poly_divmod(ctx, num, &g)?;
    let (mut den, _) = poly_divmod(ctx, den, &g)?;
    let lead = den.lead();
    if lead != 1 {
        let c = ctx.finv(lead);
        num = poly_scale(ctx, c, &num);
        den = poly_scale(ctx, c, &den);
    }
    num = poly_rem(ctx, &num, &den)?;
    if num.is_zero() {
        return Ok(TorsionPoint::zero());
    }
    Ok(TorsionPoint { num, den })
}

/// The action of a on k/O: plain multiplication, which is exactly the
/// Carlitz action of the ideal (a) when a is monic.
pub fn torsion_act(ctx: &Ctx, a: &Poly, lambda: &TorsionPoint) -> TorsionPoint {
    torsion_reduce(ctx, &poly_mul(ctx, a, &lambda.num), &lambda.den).unwrap()
}

pub fn torsion_add(ctx: &Ctx, x: &TorsionPoint, y: &TorsionPoint) -> TorsionPoint {
    let num = poly_add(
        ctx,
        &poly_mul(ctx, &x.num, &y.den),
        &poly_mul(ctx, &y.num, &x.den),
    );
    torsion_reduce(ctx, &num, &poly_mul(ctx, &x.den, &y.den)).unwrap()
}

pub fn torsion_neg(ctx: &Ctx, x: &TorsionPoint) -> TorsionPoint {
    TorsionPoint { num: poly_neg(ctx, &x.num), den: x.den.clone() }
}

/// The a-torsion phi[a] = { r/a : deg r < deg a }, of size Na, in the
/// canonical residue order; with `generators_only`, just the points of
/// exact annihilator a (coprime numerators), of which there are Phi(a).
pub fn torsion_group(ctx: &Ctx, a: &MonicIdeal, generators_only: bool) -> Vec<TorsionPoint> {
    enumerate_residues(ctx, a.deg())
        .into_iter()
        .filter(|r| {
            !generators_only || poly_gcd(ctx, r, a.gen()).map_or(r.is_zero(), |g| g.is_one())
        })
        .map(|r| torsion_reduce(ctx, &r, a.gen()).unwrap())
        .collect()
}

/// Euler Phi and Moebius M of an ideal, both multiplicative over the
/// factorization: Phi(p^n) = Np^n - Np^(n-1), M(p) = -1, M(p^n) = 0 for
/// n >= 2.
pub fn ideal_arith_functions(ctx: &Ctx, a: &MonicIdeal) -> (u128, i64) {
    let mut phi: u128 = 1;
    let mut moebius: i64 = 1;
    for (p, k) in factor_monic(ctx, a) {
        let np = p.norm_u128(ctx);
        phi *= np.pow(k) - np.pow(k - 1);
        moebius = if k == 1 { -moebius } else { 0 };
    }
    (phi, moebius)
}

/// Kernel and image of multiplication-by-a restricted to phi[b]: the
/// kernel is phi[gcd(a,b)] and the image is phi[b/gcd(a,b)].
pub fn kernel_image(
    ctx: &Ctx,
    a: &MonicIdeal,
    b: &MonicIdeal,
) -> (Vec<TorsionPoint>, Vec<TorsionPoint>) {
    let d = a.gcd(ctx, b);
    let image_support = b.div_exact(ctx, &d).unwrap();
    let mut ker = torsion_group(ctx, &d, false);
    let mut im = torsion_group(ctx, &image_support, false);
    ker.sort();
    im.sort();
    (ker, im)
}

/// Partial-fraction decomposition of a torsion point into components with
/// prime-power denominators, keyed by the prime. Zero splits into the
/// empty map.
pub fn crt_split(ctx: &Ctx, lambda: &TorsionPoint) -> BTreeMap<MonicIdeal, TorsionPoint> {
    let mut out = BTreeMap::new();
    for (p, k) in factor_monic(ctx, &lambda.annihilator(ctx)) {
        let mut pk = Poly::one();
        for _ in 0..k {
            pk = poly_mul(ctx, &pk, p.gen());
        }
        let (cofactor, _) = poly_divmod(ctx, &lambda.den, &pk).unwrap();
        // component numerator: num / cofactor mod p^k
        let inv = poly_invmod(ctx, &cofactor, &pk).unwrap();
        let n = poly_rem(ctx, &poly_mul(ctx, &lambda.num, &inv), &pk).unwrap();
        out.insert(p, torsion_reduce(ctx, &n, &pk).unwrap());
    }
    out
}

/// Sum of components with prime-power denominators at pairwise distinct
/// primes; the inverse of `crt_split`.
pub fn crt_join(ctx: &Ctx, parts: &[TorsionPoint]) -> Result<TorsionPoint> {
    let mut seen: Vec<MonicIdeal> = vec![];
    let mut sum = TorsionPoint::zero();
    for part in parts {
        let fs = factor_monic(ctx, &part.annihilator(ctx));
        if fs.len() > 1 {
            return Err(Error::DegenerateInput(format!(
                "component {part} does not have prime-power annihilator"
            )));
        }
        if let Some((p, _)) = fs.into_iter().next() {
            if seen.contains(&p) {
                return Err(Error::DegenerateInput(format!(
                    "two components at the prime {p}"
                )));
            }
            seen.push(p);
        }
        sum = torsion_add(ctx, &sum, part);
    }
    Ok(sum)
}
