//! Verification suites shared by the command line and the test
//! harness: each suite checks one family of identities end to end and
//! reports pass/fail with a witness instead of panicking, so a full
//! run always produces a complete report.

use crate::carlitz::{
    carlitz_phi, crt_join, crt_split, ideal_arith_functions, torsion_act, torsion_add,
    torsion_group, torsion_neg, twisted_mul, TorsionPoint,
};
use crate::characters::{
    all_chars, artin, char_eval, char_root, char_shift, galois_act_char, galois_group,
    is_admissible, raise_level, LevelChar,
};
use crate::error::{Error, Result};
use crate::ffpoly::{
    enumerate_monic, factor_monic, irreducibles_of_degree, poly_divmod, poly_mul, poly_xgcd,
    Ctx, MonicIdeal, Poly,
};
use crate::hecke::{
    adjoint, basis_elem, cond_expectation, galois_act_alg, kms_twist, mul, mul_all,
    AlgebraElem, BasisKey,
};
use crate::places_zeta::{partial_zeta, weil_identity_check, zeta_closed, zeta_evaluate};
use crate::repr::{
    build_rep, gibbs_trace_truncated, mul_oracle_check, rep_apply, RepMatrix, TraceMode,
    TraceResult,
};
use crate::scalar::{series_quotient, Cyclo, UScalar};
use crate::states::{
    gibbs_closed, gibbs_galois_average, kms_verify, partition_function, phi_beta,
    phi_beta_product_identity, gibbs_value_partial_zeta, PartitionMode, StateKind,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

/// Configuration shared by all suites.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub q: u32,
    pub modulus: Option<Vec<u8>>,
    pub maxdeg: usize,
    pub seed: u64,
    /// Named negative control: the matching suite deliberately breaks
    /// one identity so the harness can witness a failure.
    pub perturb: Option<String>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { q: 2, modulus: None, maxdeg: 2, seed: 0, perturb: None }
    }
}

/// Outcome of one suite: every case either confirmed the law or the
/// first counterexample is recorded as the witness.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub law: &'static str,
    pub pass: bool,
    pub cases: usize,
    pub witness: Option<String>,
    pub millis: u128,
}

struct Tally {
    cases: usize,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { cases: 0, witness: None }
    }
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
    fn finish(self, name: &'static str, law: &'static str, start: Instant) -> SuiteResult {
        SuiteResult {
            name,
            law,
            pass: self.witness.is_none(),
            cases: self.cases,
            witness: self.witness,
            millis: start.elapsed().as_millis(),
        }
    }
}

fn make_ctx(cfg: &VerifyConfig) -> Result<Ctx> {
    let (p, e) = prime_power(cfg.q)?;
    Ctx::new(p, e, cfg.modulus.clone())
}

/// Splits q into (p, e) with p prime, erroring on non-prime-powers.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::Config(format!("q must be at least 2, got {q}")));
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut e = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    if m != 1 {
        return Err(Error::Config(format!("q = {q} is not a prime power")));
    }
    Ok((p, e))
}

fn small_ideals(ctx: &Ctx, maxdeg: usize) -> Vec<MonicIdeal> {
    (0..=maxdeg)
        .flat_map(|n| enumerate_monic(ctx, n, false))
        .map(|g| MonicIdeal::new(ctx, &g).expect("monic"))
        .collect()
}

fn small_levels(ctx: &Ctx, maxdeg: usize) -> Vec<MonicIdeal> {
    (1..=maxdeg)
        .flat_map(|n| enumerate_monic(ctx, n, false))
        .map(|g| MonicIdeal::new(ctx, &g).expect("monic"))
        .collect()
}

fn small_labels(ctx: &Ctx, maxdeg: usize) -> Vec<TorsionPoint> {
    let mut out = vec![TorsionPoint::zero()];
    for lev in small_levels(ctx, maxdeg) {
        for lam in torsion_group(ctx, &lev, false) {
            if !out.contains(&lam) {
                out.push(lam);
            }
        }
    }
    out
}

fn moebius_u32(n: u32) -> i64 {
    let mut m = n;
    let mut count = 0;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            count += 1;
        }
        d += 1;
    }
    if m > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

fn suite_poly_arith(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let pool: Vec<Poly> = (0..=cfg.maxdeg + 2)
        .flat_map(|n| enumerate_monic(&ctx, n, false))
        .collect();
    for _ in 0..60 {
        let f = pool[rng.random_range(0..pool.len())].clone();
        let g = pool[rng.random_range(0..pool.len())].clone();
        let (d, s, u) = poly_xgcd(&ctx, &f, &g)?;
        let combo = crate::ffpoly::poly_add(
            &ctx,
            &poly_mul(&ctx, &s, &f),
            &poly_mul(&ctx, &u, &g),
        );
        t.check(combo == d, || format!("xgcd combination for {f}, {g}"));
        let (_, rf) = poly_divmod(&ctx, &f, &d).expect("gcd divides");
        let (_, rg) = poly_divmod(&ctx, &g, &d).expect("gcd divides");
        t.check(rf.is_zero() && rg.is_zero(), || format!("gcd divides {f}, {g}"));
    }
    // factorization reassembles, over the full monic range
    for f in pool.iter().filter(|f| !f.is_one()) {
        let ideal = MonicIdeal::new(&ctx, f)?;
        let mut prod = Poly::one();
        for (p, k) in factor_monic(&ctx, &ideal) {
            t.check(p.is_prime(&ctx), || format!("non-prime factor {} of {f}", p.gen()));
            for _ in 0..k {
                prod = poly_mul(&ctx, &prod, p.gen());
            }
        }
        t.check(&prod == f, || format!("refactor {f}"));
    }
    // irreducible counts against the Moebius-counting formula
    for n in 1..=(cfg.maxdeg + 2) as u32 {
        let got = irreducibles_of_degree(&ctx, n as usize).len() as i64;
        let mut want = 0i64;
        for d in 1..=n {
            if n % d == 0 {
                want += moebius_u32(n / d) * (ctx.q as i64).pow(d);
            }
        }
        want /= n as i64;
        t.check(got == want, || format!("irreducible count at degree {n}: {got} vs {want}"));
    }
    Ok(t.finish(
        "poly-arith",
        "gcd/xgcd identities, unique factorization, and irreducible counts in F_q[T]",
        start,
    ))
}

fn suite_places_weil(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let fudge: u128 = if cfg.perturb.as_deref() == Some("weil") { 1 } else { 0 };
    for n in 1..=8usize {
        let rep = weil_identity_check(&ctx, n)?;
        t.check(rep.pass && rep.lhs == rep.rhs + fudge, || {
            format!(
                "degree {n}: weighted place count {} vs expected {}",
                rep.lhs,
                rep.rhs + fudge
            )
        });
    }
    Ok(t.finish(
        "places-weil",
        "sum over m | n of m times the count of degree-m places equals q^n + 1",
        start,
    ))
}

fn suite_zeta_partial(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let zeta = zeta_closed(&ctx);
    for c in small_levels(&ctx, cfg.maxdeg.min(2)) {
        let dc = c.deg();
        // every coefficient counts the monic members of the class
        for r in crate::ffpoly::enumerate_residues(&ctx, dc) {
            if r.is_zero() || !crate::ffpoly::poly_gcd(&ctx, &r, c.gen())?.is_one() {
                continue;
            }
            let pz = partial_zeta(&ctx, &c, &r)?;
            for n in 0..=dc + 3 {
                let count = enumerate_monic(&ctx, n, false)
                    .iter()
                    .filter(|a| crate::ffpoly::poly_rem(&ctx, a, c.gen()).unwrap() == r)
                    .count();
                t.check(pz.series_coeff(n) == BigRational::from(BigInt::from(count as i64)), || {
                    format!("class {r} mod {} at degree {n}", c.gen())
                });
            }
        }
        // over a prime modulus the unit classes sum to (1 - u^deg) zeta
        if c.is_prime(&ctx) {
            let mut total = crate::places_zeta::ZetaRational::zero();
            for r in crate::ffpoly::enumerate_residues(&ctx, dc) {
                if !r.is_zero() {
                    total = total.add(&partial_zeta(&ctx, &c, &r)?);
                }
            }
            let mut num = vec![BigRational::zero(); dc + 1];
            num[0] = BigRational::one();
            num[dc] -= BigRational::one();
            let expect = crate::places_zeta::ZetaRational::new(
                num,
                vec![BigRational::one(), BigRational::from(BigInt::from(-(ctx.q as i64)))],
            )?;
            t.check(total == expect, || format!("unit-class sum at modulus {}", c.gen()));
        }
    }
    t.check(
        partial_zeta(&ctx, &MonicIdeal::new(&ctx, &Poly::one())?, &Poly::one())? == zeta,
        || "unit modulus".to_string(),
    );
    for beta in [1.5f64, 2.0, 3.0] {
        let ev = zeta_evaluate(&ctx, beta, 12)?;
        let slack = 1e-12 * ev.closed.abs();
        t.check((ev.closed - ev.truncated).abs() <= ev.tail_bound + slack, || {
            format!("tail bound at beta {beta}")
        });
    }
    t.check(zeta_evaluate(&ctx, 1.0, 4).is_err(), || {
        "divergence guard at beta = 1".to_string()
    });
    Ok(t.finish(
        "zeta-partial",
        "congruence-class zeta functions sum to 1/(1-qu); truncations obey the geometric tail",
        start,
    ))
}

fn suite_carlitz(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x11);
    let pool: Vec<Poly> = (1..=cfg.maxdeg)
        .flat_map(|n| enumerate_monic(&ctx, n, false))
        .collect();
    for _ in 0..20 {
        let a = pool[rng.random_range(0..pool.len())].clone();
        let b = pool[rng.random_range(0..pool.len())].clone();
        let ab = poly_mul(&ctx, &a, &b);
        let lhs = carlitz_phi(&ctx, &ab);
        let rhs = twisted_mul(&ctx, &carlitz_phi(&ctx, &a), &carlitz_phi(&ctx, &b));
        t.check(lhs == rhs, || format!("module map at {a} * {b}"));
    }
    for lev in small_levels(&ctx, cfg.maxdeg.min(2)) {
        let pts = torsion_group(&ctx, &lev, false);
        t.check(pts.len() as u128 == lev.norm_u128(&ctx), || {
            format!("torsion count at {}", lev.gen())
        });
        for lam in pts.iter().take(8) {
            let killed = torsion_act(&ctx, lev.gen(), lam);
            t.check(killed.is_zero(), || format!("annihilation of {lam} by {}", lev.gen()));
            t.check(lam.annihilator(&ctx).gen() == lam.den(), || {
                format!("annihilator of {lam}")
            });
        }
        // component split and reassembly
        for lam in pts.iter().take(4) {
            let parts: Vec<TorsionPoint> = crt_split(&ctx, lam).into_values().collect();
            let back = crt_join(&ctx, &parts).expect("coprime components");
            t.check(&back == lam, || format!("component round trip of {lam}"));
        }
    }
    Ok(t.finish(
        "carlitz-torsion",
        "phi_(ab) = phi_a of phi_b; the a-torsion has Na points killed exactly by a",
        start,
    ))
}

fn suite_characters(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    for lev in small_levels(&ctx, cfg.maxdeg.min(2)) {
        let group = galois_group(&ctx, &lev);
        let (phi, _) = ideal_arith_functions(&ctx, &lev);
        t.check(group.len() as u128 == phi, || {
            format!("unit group order at {}", lev.gen())
        });
        let chi = LevelChar::standard(&lev);
        t.check(is_admissible(&ctx, &chi).overall, || {
            format!("standard character at {}", lev.gen())
        });
        // definedness: evaluation succeeds exactly on the level torsion
        for lam in torsion_group(&ctx, &lev, false).iter().take(6) {
            t.check(char_eval(&ctx, &chi, lam).is_ok(), || format!("eval at {lam}"));
        }
        // injectivity of the Galois action on an admissible character
        let mut images: Vec<LevelChar> = Vec::new();
        for sigma in &group {
            let moved = galois_act_char(&ctx, sigma, &chi).expect("level matches");
            t.check(!images.contains(&moved), || {
                format!("character orbit collision at {} under {sigma}", lev.gen())
            });
            images.push(moved);
        }
    }
    // shift law chi^a(lam) = chi(a lam), and root undoes the shift
    for g in enumerate_monic(&ctx, 1, true) {
        let p1 = MonicIdeal::new(&ctx, &g).expect("monic");
        let p2 = p1.mul(&ctx, &p1);
        let chi = LevelChar::standard(&p2);
        let shifted = char_shift(&ctx, &chi, &p1);
        for lam in torsion_group(&ctx, &p2, false) {
            let a = char_eval(&ctx, &shifted, &lam).expect("defined");
            let b = char_eval(&ctx, &chi, &torsion_act(&ctx, p1.gen(), &lam)).expect("defined");
            t.check(a == b, || format!("shift law at {} on {lam}", g));
        }
        let rho = char_root(&ctx, &shifted, &p1).expect("shift is trivial on the p-torsion");
        let back = raise_level(&ctx, &rho, &p2).expect("level divides");
        t.check(back == chi, || format!("shift/root round trip at {}", g));
    }
    // the reciprocity element of a principal prime acts as itself
    for g in enumerate_monic(&ctx, 1, true) {
        let lev = MonicIdeal::new(&ctx, &enumerate_monic(&ctx, 1, true)[0]).expect("monic");
        let p = MonicIdeal::new(&ctx, &g).expect("monic");
        if !p.coprime(&ctx, &lev) {
            continue;
        }
        let fr = artin(&ctx, &p, &lev).expect("coprime");
        for lam in torsion_group(&ctx, &lev, false) {
            let lhs = fr.act(&ctx, &lam).expect("level matches");
            let rhs = torsion_act(&ctx, p.gen(), &lam);
            t.check(lhs == rhs, || format!("reciprocity at {} on {lam}", p.gen()));
        }
    }
    Ok(t.finish(
        "characters",
        "unit group order Phi(c); standard character admissible; Galois orbit injective; shift/root round trip",
        start,
    ))
}

fn suite_relations(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let maxdeg = cfg.maxdeg.min(2);
    let ideals = small_ideals(&ctx, maxdeg);
    let labels = small_labels(&ctx, maxdeg);
    let unit = AlgebraElem::unit(&ctx);
    let f_fudge: Option<UScalar> = (cfg.perturb.as_deref() == Some("f-relation"))
        .then(|| UScalar::from_int(ctx.p, 2));
    t.check(
        AlgebraElem::e(&ctx, &TorsionPoint::zero()) == unit,
        || "projection at zero is the unit".to_string(),
    );
    for a in &ideals {
        // mu*_a mu_a = 1
        let prod = mul(&ctx, &AlgebraElem::mu_star(&ctx, a), &AlgebraElem::mu(&ctx, a));
        t.check(prod == unit, || format!("isometry at {}", a.gen()));
        for b in &ideals {
            // mu_a mu_b = mu_(ab), and the starred version
            let lhs = mul(&ctx, &AlgebraElem::mu(&ctx, a), &AlgebraElem::mu(&ctx, b));
            let rhs = AlgebraElem::mu(&ctx, &a.mul(&ctx, b));
            t.check(lhs == rhs, || format!("shift multiplicativity at {}, {}", a.gen(), b.gen()));
            let lhs = mul(&ctx, &AlgebraElem::mu_star(&ctx, a), &AlgebraElem::mu_star(&ctx, b));
            let rhs = AlgebraElem::mu_star(&ctx, &a.mul(&ctx, b));
            t.check(lhs == rhs, || {
                format!("adjoint shift multiplicativity at {}, {}", a.gen(), b.gen())
            });
            // coprime legs slide across each other
            if a.coprime(&ctx, b) {
                let xy = mul(&ctx, &AlgebraElem::mu(&ctx, a), &AlgebraElem::mu_star(&ctx, b));
                let yx = mul(&ctx, &AlgebraElem::mu_star(&ctx, b), &AlgebraElem::mu(&ctx, a));
                t.check(xy == yx, || format!("coprime slide at {}, {}", a.gen(), b.gen()));
            }
        }
    }
    for lam in &labels {
        // e(lam)* = e(-lam)
        let st = adjoint(&ctx, &AlgebraElem::e(&ctx, lam));
        t.check(st == AlgebraElem::e(&ctx, &torsion_neg(&ctx, lam)), || {
            format!("adjoint of the projection at {lam}")
        });
        for mu in &labels {
            // e(lam) e(mu) = e(lam + mu)
            let lhs = mul(&ctx, &AlgebraElem::e(&ctx, lam), &AlgebraElem::e(&ctx, mu));
            let rhs = AlgebraElem::e(&ctx, &torsion_add(&ctx, lam, mu));
            t.check(lhs == rhs, || format!("label addition at {lam}, {mu}"));
        }
        for a in &ideals {
            // e(lam) mu_a = mu_a e(a * lam)
            let lhs = mul(&ctx, &AlgebraElem::e(&ctx, lam), &AlgebraElem::mu(&ctx, a));
            let rhs = mul(
                &ctx,
                &AlgebraElem::mu(&ctx, a),
                &AlgebraElem::e(&ctx, &torsion_act(&ctx, a.gen(), lam)),
            );
            t.check(lhs == rhs, || format!("slide-through at {lam}, {}", a.gen()));
            // mu_a e(lam) mu_a* averages the preimages of lam under a
            let lhs = mul_all(
                &ctx,
                &[
                    AlgebraElem::mu(&ctx, a),
                    AlgebraElem::e(&ctx, lam),
                    AlgebraElem::mu_star(&ctx, a),
                ],
            );
            let scope = a.mul(&ctx, &lam.annihilator(&ctx));
            let mut rhs = AlgebraElem::zero(&ctx);
            let mut hits = 0u128;
            for gamma in torsion_group(&ctx, &scope, false) {
                if torsion_act(&ctx, a.gen(), &gamma) == *lam {
                    rhs = rhs.add(&AlgebraElem::e(&ctx, &gamma));
                    hits += 1;
                }
            }
            t.check(hits == a.norm_u128(&ctx), || {
                format!("preimage count under {}", a.gen())
            });
            let mut weight = UScalar::from_cyclo(Cyclo::from_rational(
                ctx.p,
                BigRational::new(1.into(), a.norm_u128(&ctx).into()),
            ));
            if let Some(f) = &f_fudge {
                weight = weight.mul(f);
            }
            rhs = rhs.scale(&weight);
            t.check(lhs == rhs, || format!("averaging relation at {lam}, {}", a.gen()));
        }
    }
    Ok(t.finish(
        "relations",
        "the defining presentation: isometries, shift multiplicativity, coprime slides, label addition, slide-through, and the averaging relation",
        start,
    ))
}

fn suite_adjoint_flow(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x22);
    let ideals = small_ideals(&ctx, cfg.maxdeg.min(2));
    let labels = small_labels(&ctx, cfg.maxdeg.min(2));
    let pick = |rng: &mut StdRng| -> AlgebraElem {
        loop {
            let a = &ideals[rng.random_range(0..ideals.len())];
            let b = &ideals[rng.random_range(0..ideals.len())];
            let l = &labels[rng.random_range(0..labels.len())];
            if let Ok(k) = BasisKey::new(&ctx, a, l, b) {
                return AlgebraElem::from_term(&ctx, k, UScalar::one(ctx.p));
            }
        }
    };
    for _ in 0..40 {
        let x = pick(&mut rng);
        let y = pick(&mut rng);
        // star is an involutive anti-homomorphism
        t.check(adjoint(&ctx, &adjoint(&ctx, &x)) == x, || format!("involution at {x}"));
        let lhs = adjoint(&ctx, &mul(&ctx, &x, &y));
        let rhs = mul(&ctx, &adjoint(&ctx, &y), &adjoint(&ctx, &x));
        t.check(lhs == rhs, || format!("anti-homomorphism at {x}, {y}"));
        // the twist is a homomorphism with inverse twist
        let lhs = kms_twist(&mul(&ctx, &x, &y), 1);
        let rhs = mul(&ctx, &kms_twist(&x, 1), &kms_twist(&y, 1));
        t.check(lhs == rhs, || format!("twist homomorphism at {x}, {y}"));
        t.check(kms_twist(&kms_twist(&x, 1), -1) == x, || format!("twist inverse at {x}"));
        // Galois action is a *-map commuting with the twist
        let lev = x.ann_lcm(&ctx);
        for sigma in galois_group(&ctx, &lev).iter().take(3) {
            let moved = galois_act_alg(&ctx, sigma, &x).expect("level covers labels");
            let star_moved = galois_act_alg(&ctx, sigma, &adjoint(&ctx, &x)).expect("level");
            t.check(adjoint(&ctx, &moved) == star_moved, || {
                format!("star equivariance at {x} under {sigma}")
            });
            let tw = galois_act_alg(&ctx, sigma, &kms_twist(&x, 1)).expect("level");
            t.check(kms_twist(&moved, 1) == tw, || {
                format!("flow equivariance at {x} under {sigma}")
            });
        }
    }
    Ok(t.finish(
        "adjoint-flow",
        "star is an involutive anti-automorphism; the modular twist is an invertible homomorphism commuting with the Galois action",
        start,
    ))
}

fn suite_expectation(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    for b in small_levels(&ctx, cfg.maxdeg.min(2)) {
        // closed form: E(e(lam)) for a generator lam of the b-torsion
        for lam in torsion_group(&ctx, &b, true).iter().take(4) {
            let e = cond_expectation(&ctx, &AlgebraElem::e(&ctx, lam));
            let mut closed = AlgebraElem::zero(&ctx);
            let (phi_b, _) = ideal_arith_functions(&ctx, &b);
            for f in b.divisors(&ctx) {
                let (_, mob) =
                    ideal_arith_functions(&ctx, &b.div_exact(&ctx, &f).expect("divisor"));
                if mob == 0 {
                    continue;
                }
                let w = BigRational::new(
                    (mob as i128 * f.norm_u128(&ctx) as i128).into(),
                    (phi_b as i128).into(),
                );
                closed = closed.add(
                    &basis_elem(&ctx, &f, &TorsionPoint::zero(), &f)
                        .scale_rational(&w),
                );
            }
            t.check(e == closed, || format!("closed form at {} for {lam}", b.gen()));
            // idempotence and the module property over the fixed algebra
            t.check(cond_expectation(&ctx, &e) == e, || format!("idempotence at {lam}"));
            let proj = basis_elem(&ctx, &b, &TorsionPoint::zero(), &b);
            let lhs = cond_expectation(&ctx, &mul(&ctx, &proj, &AlgebraElem::e(&ctx, lam)));
            let rhs = mul(&ctx, &proj, &e);
            t.check(lhs == rhs, || format!("module property at {lam}"));
        }
        // generator count
        let gens = torsion_group(&ctx, &b, true);
        let (phi_b, _) = ideal_arith_functions(&ctx, &b);
        t.check(gens.len() as u128 == phi_b, || {
            format!("generator count at {}", b.gen())
        });
    }
    t.check(
        cond_expectation(&ctx, &AlgebraElem::unit(&ctx)) == AlgebraElem::unit(&ctx),
        || "unitality".to_string(),
    );
    Ok(t.finish(
        "expectation",
        "the Galois average is an idempotent conditional expectation with the Moebius closed form on projections",
        start,
    ))
}

fn suite_repr_oracle(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let d = (2 * cfg.maxdeg + 2).max(4);
    let maxdeg = cfg.maxdeg.min(2);
    let ideals = small_ideals(&ctx, maxdeg);
    let labels = small_labels(&ctx, maxdeg.min(1));
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x33);
    let mut words = Vec::new();
    for a in &ideals {
        for b in &ideals {
            for l in &labels {
                if let Ok(k) = BasisKey::new(&ctx, a, l, b) {
                    words.push(AlgebraElem::from_term(&ctx, k, UScalar::one(ctx.p)));
                }
            }
        }
    }
    let mut reps: std::collections::BTreeMap<Poly, crate::repr::TruncatedRep> =
        std::collections::BTreeMap::new();
    for _ in 0..30 {
        let x = &words[rng.random_range(0..words.len())];
        let y = &words[rng.random_range(0..words.len())];
        let prod = mul(&ctx, x, y);
        let lev = x
            .ann_lcm(&ctx)
            .lcm(&ctx, &y.ann_lcm(&ctx))
            .lcm(&ctx, &prod.ann_lcm(&ctx));
        let rep = match reps.entry(lev.gen().clone()) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(build_rep(&ctx, &LevelChar::standard(&lev), d)?)
            }
        };
        match mul_oracle_check(&ctx, rep, x, y) {
            Ok(r) => t.check(r.pass, || {
                format!("matrix oracle at {x}, {y}: discrepancy {}", r.max_discrepancy)
            }),
            Err(Error::UnsafeTruncation(_)) => {}
            Err(e) => t.check(false, || format!("oracle error at {x}, {y}: {e}")),
        }
    }
    // isometry and flow covariance on the standard level
    let lev = MonicIdeal::new(&ctx, &enumerate_monic(&ctx, 1, false)[0]).expect("monic");
    let rep = build_rep(&ctx, &LevelChar::standard(&lev), d)?;
    let idm = RepMatrix::identity(ctx.p, rep.dim());
    for a in ideals.iter().filter(|a| a.deg() >= 1 && a.deg() <= d) {
        let m = rep_apply(&ctx, &rep, &AlgebraElem::mu(&ctx, a))?;
        let cut = rep.block_dim(d - a.deg());
        t.check(m.star().matmul(&m).block_diff(&idm, cut) == 0.0, || {
            format!("matrix isometry at {}", a.gen())
        });
        let weights: Vec<UScalar> = rep
            .index()
            .iter()
            .map(|b| UScalar::u_pow(ctx.p, b.deg() as i64))
            .collect();
        let inv: Vec<UScalar> = rep
            .index()
            .iter()
            .map(|b| UScalar::u_pow(ctx.p, -(b.deg() as i64)))
            .collect();
        let w = RepMatrix::diagonal(ctx.p, weights);
        let wi = RepMatrix::diagonal(ctx.p, inv);
        let conj = w.matmul(&m).matmul(&wi);
        t.check(conj == m.scale(&UScalar::u_pow(ctx.p, a.deg() as i64)), || {
            format!("flow covariance at {}", a.gen())
        });
    }
    Ok(t.finish(
        "repr-oracle",
        "matrix products certify the algebra product on truncation-safe blocks; shifts are isometric and flow-covariant",
        start,
    ))
}

fn suite_states_kms(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x44);
    let ideals = small_ideals(&ctx, cfg.maxdeg.min(2));
    let labels = small_labels(&ctx, cfg.maxdeg.min(2));
    let twist_steps = if cfg.perturb.as_deref() == Some("kms") { 0 } else { 1 };
    let pick = |rng: &mut StdRng| -> AlgebraElem {
        loop {
            let a = &ideals[rng.random_range(0..ideals.len())];
            let b = &ideals[rng.random_range(0..ideals.len())];
            let l = &labels[rng.random_range(0..labels.len())];
            if let Ok(k) = BasisKey::new(&ctx, a, l, b) {
                return AlgebraElem::from_term(&ctx, k, UScalar::one(ctx.p));
            }
        }
    };
    let lev = MonicIdeal::new(&ctx, &enumerate_monic(&ctx, 1, false)[0]).expect("monic");
    let chi = LevelChar::standard(&lev);
    if twist_steps == 0 {
        // negative control: check the exchange law with the twist
        // skipped; a shift against its adjoint breaks it visibly
        let tp = MonicIdeal::new(&ctx, &enumerate_monic(&ctx, 1, true)[0]).expect("monic");
        let lam = &torsion_group(&ctx, &tp, true)[0];
        let x = mul(&ctx, &AlgebraElem::mu(&ctx, &tp), &AlgebraElem::e(&ctx, lam));
        let y = adjoint(&ctx, &x);
        let lhs = phi_beta(&ctx, &mul(&ctx, &y, &x));
        let rhs = phi_beta(&ctx, &mul(&ctx, &x, &y));
        t.check(lhs.eq_exact(&rhs), || {
            format!("exchange law without the twist at {x}, {y}")
        });
        return Ok(t.finish(
            "states-kms",
            "negative control: the exchange law with the modular twist omitted",
            start,
        ));
    }
    for _ in 0..40 {
        let x = pick(&mut rng);
        let y = pick(&mut rng);
        let r = kms_verify(&ctx, &StateKind::PhiBeta, &x, &y)?;
        t.check(r.pass, || format!("exchange law at {x}, {y}"));
        let r = kms_verify(&ctx, &StateKind::Gibbs(chi.clone()), &x, &y)?;
        t.check(r.pass, || format!("Gibbs exchange law at {x}, {y}"));
    }
    // Galois invariance of the invariant state
    for lam in labels.iter().take(6) {
        let x = AlgebraElem::e(&ctx, lam);
        let lev_x = x.ann_lcm(&ctx);
        for sigma in galois_group(&ctx, &lev_x).iter().take(4) {
            let moved = galois_act_alg(&ctx, sigma, &x).expect("level covers");
            t.check(phi_beta(&ctx, &x).eq_exact(&phi_beta(&ctx, &moved)), || {
                format!("invariance at {lam} under {sigma}")
            });
        }
    }
    // the invariant state is the Galois average of a Gibbs state
    for lam in torsion_group(&ctx, &lev, false) {
        let x = AlgebraElem::e(&ctx, &lam);
        let avg = gibbs_galois_average(&ctx, &chi, &x)?;
        t.check(avg.eq_exact(&phi_beta(&ctx, &x)), || {
            format!("Galois mean at {lam}")
        });
    }
    Ok(t.finish(
        "states-kms",
        "phi_beta(yx) = phi_beta(x twist(y)) exactly, for the invariant state and Gibbs states; phi_beta is Galois-invariant and the Galois mean of a Gibbs state",
        start,
    ))
}

fn suite_states_product(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x55);
    let ideals = small_ideals(&ctx, cfg.maxdeg.min(2));
    let labels = small_labels(&ctx, cfg.maxdeg.min(2));
    let mut checked = 0;
    let mut draws = 0;
    while checked < 60 && draws < 4000 {
        draws += 1;
        let a = &ideals[rng.random_range(0..ideals.len())];
        let b = &ideals[rng.random_range(0..ideals.len())];
        let c = &ideals[rng.random_range(0..ideals.len())];
        let d = &ideals[rng.random_range(0..ideals.len())];
        let l1 = &labels[rng.random_range(0..labels.len())];
        let l2 = &labels[rng.random_range(0..labels.len())];
        let (Ok(f1), Ok(f2)) = (BasisKey::new(&ctx, a, l1, b), BasisKey::new(&ctx, c, l2, d))
        else {
            continue;
        };
        let r = phi_beta_product_identity(&ctx, &f1, &f2);
        t.check(r.pass, || format!("closed form at {f1} then {f2}"));
        checked += 1;
    }
    t.check(checked >= 60, || "draw budget exhausted".to_string());
    Ok(t.finish(
        "states-product",
        "phi_beta on a product of basis words equals the indicator-gated Moebius closed form in ann(lam1 + lam2)",
        start,
    ))
}

fn suite_gibbs_trace(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let d = 6usize;
    for lev in small_levels(&ctx, cfg.maxdeg.min(2)) {
        let chi = LevelChar::standard(&lev);
        let rep = build_rep(&ctx, &chi, d)?;
        for lam in &torsion_group(&ctx, &lev, false) {
            let x = AlgebraElem::e(&ctx, lam);
            let closed = gibbs_closed(&ctx, &chi, &x)?;
            let (cn, cd) = closed.as_exact().expect("closed values are exact");
            let want = series_quotient(cn, cd, d as i64);
            match gibbs_trace_truncated(&ctx, &rep, &x, TraceMode::Formal)? {
                TraceResult::Formal(s) => {
                    let got = series_quotient(&s.num, &s.den, d as i64);
                    t.check(got == want, || {
                        format!("trace series at level {} for {lam}", lev.gen())
                    });
                }
                _ => unreachable!("formal mode returns a series"),
            }
        }
    }
    Ok(t.finish(
        "gibbs-trace",
        "the closed-form Gibbs value and the truncated weighted trace have the same series through u^D",
        start,
    ))
}

fn suite_special_values(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    for n in 1..=cfg.maxdeg.min(2) {
        for g in enumerate_monic(&ctx, n, true) {
            let p = MonicIdeal::new(&ctx, &g).expect("monic");
            for chi in all_chars(&ctx, &p) {
                if !is_admissible(&ctx, &chi).overall {
                    continue;
                }
                for lam in torsion_group(&ctx, &p, false) {
                    let v = gibbs_value_partial_zeta(&ctx, &chi, &p, &lam)?;
                    let w = gibbs_closed(&ctx, &chi, &AlgebraElem::e(&ctx, &lam))?;
                    t.check(v.eq_exact(&w), || {
                        format!("zeta assembly at {} for {lam}", p.gen())
                    });
                }
            }
        }
    }
    Ok(t.finish(
        "special-values",
        "the partial-zeta assembly of the Gibbs value on a torsion projection equals the character closed form",
        start,
    ))
}

fn suite_partition(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let start = Instant::now();
    let ctx = make_ctx(cfg)?;
    let mut t = Tally::new();
    let r = partition_function(&ctx, &PartitionMode::Formal, 8)?;
    t.check(r.pass, || "formal coefficients".to_string());
    for beta in [1.5f64, 2.0, 3.0] {
        let r = partition_function(&ctx, &PartitionMode::Numeric(beta), 12)?;
        t.check(r.pass, || {
            format!(
                "tail bound at beta {beta}: discrepancy {:?} vs {:?}",
                r.discrepancy, r.tail_bound
            )
        });
    }
    t.check(
        partition_function(&ctx, &PartitionMode::Numeric(0.5), 4).is_err(),
        || "divergence guard".to_string(),
    );
    Ok(t.finish(
        "partition",
        "the truncated trace of the heat weight matches 1/(1-qu) within the geometric tail",
        start,
    ))
}

type SuiteFn = fn(&VerifyConfig) -> Result<SuiteResult>;

const CATALOG: &[(&str, SuiteFn)] = &[
    ("poly-arith", suite_poly_arith),
    ("places-weil", suite_places_weil),
    ("zeta-partial", suite_zeta_partial),
    ("carlitz-torsion", suite_carlitz),
    ("characters", suite_characters),
    ("relations", suite_relations),
    ("adjoint-flow", suite_adjoint_flow),
    ("expectation", suite_expectation),
    ("repr-oracle", suite_repr_oracle),
    ("states-kms", suite_states_kms),
    ("states-product", suite_states_product),
    ("gibbs-trace", suite_gibbs_trace),
    ("special-values", suite_special_values),
    ("partition", suite_partition),
];

/// Names of all suites, in report order.
pub fn suite_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(n, _)| *n).collect()
}

/// Runs one suite by name.
pub fn run_suite(cfg: &VerifyConfig, name: &str) -> Result<SuiteResult> {
    for (n, f) in CATALOG {
        if *n == name {
            return f(cfg);
        }
    }
    Err(Error::Config(format!(
        "unknown suite {name}; expected one of {}",
        suite_names().join(", ")
    )))
}

/// Runs every suite, in parallel, preserving catalog order in the
/// result; failures are entries in the result, never errors.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    use rayon::prelude::*;
    CATALOG.par_iter().map(|(_, f)| f(cfg)).collect()
}
