//! Finite-level characters of the torsion module, their ideal shifts and
//! roots, admissibility, the Galois action, and the Artin map.
//!
//! A character of phi[c] is stored as a twist parameter t mod c through
//! the residue pairing chi(lambda) = zeta_p^Tr(rc(t*lambda)), where rc
//! extracts the 1/T coefficient of the expansion at infinity and Tr is the
//! field trace to F_p. The pairing is perfect, so every character of
//! phi[c] arises this way exactly once, and all the operations below
//! become polynomial arithmetic on t.

use crate::carlitz::{torsion_group, TorsionPoint};
use crate::error::{Error, Result};
use crate::ffpoly::{
    enumerate_residues, factor_monic, poly_divmod, poly_gcd, poly_mul, poly_rem, Ctx, Elem,
    MonicIdeal, Poly,
};
use std::fmt;

/// Coefficient of T^(-1) in the expansion of num/den at infinity, by long
/// division: it is the constant coefficient of the polynomial quotient of
/// T*num by den.
pub fn residue_coeff(ctx: &Ctx, num: &Poly, den: &Poly) -> Result<Elem> {
    if den.is_zero() {
        return Err(Error::DegenerateInput("expansion of division by zero".into()));
    }
    let shifted = poly_mul(ctx, &Poly::t(), num);
    let (quot, _) = poly_divmod(ctx, &shifted, den)?;
    Ok(quot.coeff(0))
}

/// Character of phi[level], determined by the twist t with deg t < deg
/// level; the trivial character has t = 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelChar {
    level: MonicIdeal,
    t: Poly,
}

impl fmt::Debug for LevelChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LevelChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi({}; {})", self.t, self.level.gen())
    }
}

impl LevelChar {
    /// Builds the character with twist t at the given level; t is reduced
    /// mod the level.
    pub fn new(ctx: &Ctx, t: &Poly, level: &MonicIdeal) -> LevelChar {
        LevelChar { level: level.clone(), t: poly_rem(ctx, t, level.gen()).unwrap() }
    }
    /// The standard character, twist 1.
    pub fn standard(level: &MonicIdeal) -> LevelChar {
        LevelChar { level: level.clone(), t: Poly::one() }
    }
    pub fn trivial(level: &MonicIdeal) -> LevelChar {
        LevelChar { level: level.clone(), t: Poly::zero() }
    }
    pub fn level(&self) -> &MonicIdeal {
        &self.level
    }
    pub fn t(&self) -> &Poly {
        &self.t
    }
    pub fn is_trivial(&self) -> bool {
        self.t.is_zero()
    }
}

/// All q^(deg c) characters of phi[c], in the canonical twist order.
pub fn all_chars(ctx: &Ctx, level: &MonicIdeal) -> Vec<LevelChar> {
    enumerate_residues(ctx, level.deg())
        .into_iter()
        .map(|t| LevelChar { level: level.clone(), t })
        .collect()
}

/// Exponent k in 0..p with chi(lambda) = zeta_p^k.
pub fn char_eval(ctx: &Ctx, chi: &LevelChar, lambda: &TorsionPoint) -> Result<u8> {
    if !lambda.annihilator(ctx).divides(ctx, &chi.level) {
        return Err(Error::LevelMismatch(format!(
            "{lambda} lies outside the {}-torsion",
            chi.level.gen()
        )));
    }
    let num = poly_mul(ctx, &chi.t, lambda.num());
    let rc = residue_coeff(ctx, &num, lambda.den())?;
    Ok(ctx.ftrace(rc))
}

/// The shifted character chi^a: lambda -> chi(a lambda) on phi[level],
/// i.e. t -> t * a mod level. Semigroup law: (chi^a)^b = chi^(ab).
pub fn char_shift(ctx: &Ctx, chi: &LevelChar, a: &MonicIdeal) -> LevelChar {
    LevelChar::new(ctx, &poly_mul(ctx, &chi.t, a.gen()), &chi.level)
}

/// The same character viewed at a larger level (the pairing formula does
/// not change, so neither does t).
pub fn raise_level(ctx: &Ctx, chi: &LevelChar, target: &MonicIdeal) -> Result<LevelChar> {
    if !chi.level.divides(ctx, target) {
        return Err(Error::LevelMismatch(format!(
            "cannot view a level-{} character at level {}",
            chi.level.gen(),
            target.gen()
        )));
    }
    Ok(LevelChar { level: target.clone(), t: chi.t.clone() })
}

/// The character chi' of level level/a with chi'(a mu) = chi(mu), defined
/// exactly when chi is trivial on phi[a], i.e. when a divides t; then
/// t' = t/a.
pub fn char_root(ctx: &Ctx, chi: &LevelChar, a: &MonicIdeal) -> Result<LevelChar> {
    if !a.divides(ctx, &chi.level) {
        return Err(Error::LevelMismatch(format!(
            "{} does not divide the level {}",
            a.gen(),
            chi.level.gen()
        )));
    }
    let (quot, rem) = poly_divmod(ctx, &chi.t, a.gen())?;
    if !rem.is_zero() {
        return Err(Error::NotInFChi(format!(
            "{chi} is non-trivial on the {}-torsion",
            a.gen()
        )));
    }
    Ok(LevelChar { level: chi.level.div_exact(ctx, a)?, t: quot })
}

/// Admissibility of a character: non-triviality on phi[p] for each prime
/// p of its level, decided by direct evaluation over phi[p].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub per_prime: Vec<(MonicIdeal, bool)>,
    pub overall: bool,
    /// true when the level is the unit ideal and the condition is empty
    pub vacuous: bool,
}

pub fn is_admissible(ctx: &Ctx, chi: &LevelChar) -> AdmissibilityReport {
    let mut per_prime = vec![];
    for (p, _) in factor_monic(ctx, &chi.level) {
        let nontrivial = torsion_group(ctx, &p, false)
            .iter()
            .any(|lam| char_eval(ctx, chi, lam).unwrap() != 0);
        per_prime.push((p, nontrivial));
    }
    AdmissibilityReport {
        overall: per_prime.iter().all(|(_, ok)| *ok),
        vacuous: per_prime.is_empty(),
        per_prime,
    }
}

/// Element of (O/c)*, i.e. a Galois element of the c-division field over
/// k, acting on phi[c] as multiplication by its unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisElem {
    level: MonicIdeal,
    unit: Poly,
}

impl fmt::Debug for GaloisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaloisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.unit, self.level.gen())
    }
}

impl GaloisElem {
    pub fn new(ctx: &Ctx, unit: &Poly, level: &MonicIdeal) -> Result<GaloisElem> {
        let unit = poly_rem(ctx, unit, level.gen())?;
        let coprime = if level.is_unit() {
            true
        } else {
            poly_gcd(ctx, &unit, level.gen()).map_or(false, |g| g.is_one())
        };
        if !coprime {
            return Err(Error::NotCoprime(format!(
                "{unit} is not a unit mod {}",
                level.gen()
            )));
        }
        Ok(GaloisElem { level: level.clone(), unit })
    }
    pub fn identity(level: &MonicIdeal) -> GaloisElem {
        GaloisElem { level: level.clone(), unit: Poly::one() }
    }
    pub fn level(&self) -> &MonicIdeal {
        &self.level
    }
    pub fn unit(&self) -> &Poly {
        &self.unit
    }
    pub fn compose(&self, ctx: &Ctx, other: &GaloisElem) -> Result<GaloisElem> {
        if self.level != other.level {
            return Err(Error::LevelMismatch("composing at different levels".into()));
        }
        GaloisElem::new(ctx, &poly_mul(ctx, &self.unit, &other.unit), &self.level)
    }
    /// The action on a torsion point of phi[level]: multiplication by the
    /// unit.
    pub fn act(&self, ctx: &Ctx, lambda: &TorsionPoint) -> Result<TorsionPoint> {
        if !lambda.annihilator(ctx).divides(ctx, &self.level) {
            return Err(Error::LevelMismatch(format!(
                "{lambda} lies outside the {}-torsion",
                self.level.gen()
            )));
        }
        Ok(crate::carlitz::torsion_act(ctx, &self.unit, lambda))
    }
}

/// All elements of (O/c)*, the Galois group of the c-division field.
pub fn galois_group(ctx: &Ctx, level: &MonicIdeal) -> Vec<GaloisElem> {
    if level.is_unit() {
        return vec![GaloisElem::identity(level)];
    }
    enumerate_residues(ctx, level.deg())
        .into_iter()
        .filter(|r| !r.is_zero() && poly_gcd(ctx, r, level.gen()).unwrap().is_one())
        .map(|unit| GaloisElem { level: level.clone(), unit })
        .collect()
}

/// The Artin symbol of an unramified ideal a at level c: the class of its
/// monic generator in (O/c)*, whose Galois action on phi[c] is exactly
/// multiplication by that generator.
pub fn artin(ctx: &Ctx, a: &MonicIdeal, c: &MonicIdeal) -> Result<GaloisElem> {
    if !a.coprime(ctx, c) {
        return Err(Error::NotCoprime(format!("{a} is ramified at the level {c}")));
    }
    GaloisElem::new(ctx, a.gen(), c)
}

/// The action of the Galois group on characters: (sigma chi)(lambda) =
/// chi(sigma lambda), i.e. t -> t * unit mod level. Commutes with
/// char_shift.
pub fn galois_act_char(ctx: &Ctx, sigma: &GaloisElem, chi: &LevelChar) -> Result<LevelChar> {
    if sigma.level != chi.level {
        return Err(Error::LevelMismatch(format!(
            "Galois element at level {} acting on a level-{} character",
            sigma.level.gen(),
            chi.level.gen()
        )));
    }
    Ok(LevelChar::new(ctx, &poly_mul(ctx, &chi.t, &sigma.unit), &chi.level))
}

/// Extends a character to a larger level so that it stays admissible at
/// every new prime: t is kept mod the old level and set to 1 mod each
/// prime of the target not dividing it. On points of the old level the
/// extension agrees with chi, and when chi is admissible so is the
/// result; which admissible extension is chosen cannot matter to any
/// quantity determined by the old level.
pub fn extend_admissible(ctx: &Ctx, chi: &LevelChar, target: &MonicIdeal) -> Result<LevelChar> {
    if !chi.level.divides(ctx, target) {
        return Err(Error::LevelMismatch(format!(
            "target level {} does not contain {}",
            target.gen(),
            chi.level.gen()
        )));
    }
    let mut new_primes = Poly::one();
    for (p, _) in factor_monic(ctx, target) {
        if !p.divides(ctx, &chi.level) {
            new_primes = poly_mul(ctx, &new_primes, p.gen());
        }
    }
    if new_primes.is_one() {
        return raise_level(ctx, chi, target);
    }
    // t' = t mod level, t' = 1 mod the product of new primes
    let m1 = chi.level.gen().clone();
    let m2 = new_primes;
    let (_, s, t_coef) = crate::ffpoly::poly_xgcd(ctx, &m1, &m2)?;
    // s*m1 + t_coef*m2 = 1; CRT: x = t*(t_coef*m2) + 1*(s*m1)
    let part_old = poly_mul(ctx, &poly_mul(ctx, &t_coef, &m2), &chi.t);
    let part_new = poly_mul(ctx, &s, &m1);
    let t_new = crate::ffpoly::poly_add(ctx, &part_old, &part_new);
    Ok(LevelChar::new(ctx, &t_new, target))
}
