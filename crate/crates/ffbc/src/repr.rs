//! Degree-truncated regular representation attached to an admissible
//! character: the independent matrix oracle for algebra products and
//! for Gibbs traces.
//!
//! The representation space is spanned by basis vectors indexed by the
//! monic polynomials of degree at most D. A shift leg pushes the index
//! up and is cut off at the boundary, so every assertion made here is
//! restricted to an interior block where the cutoff cannot be felt.

use crate::carlitz::torsion_act;
use crate::characters::{char_eval, is_admissible, LevelChar};
use crate::error::{Error, Result};
use crate::ffpoly::{enumerate_monic, Ctx, MonicIdeal, Poly};
use crate::hecke::{mul, AlgebraElem, BasisKey};
use crate::scalar::{Cyclo, UScalar};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Truncated representation data: the character and the ordered index
/// of monic polynomials of degree <= D.
pub struct TruncatedRep {
    chi: LevelChar,
    d: usize,
    index: Vec<MonicIdeal>,
    pos: BTreeMap<Poly, usize>,
}

/// Builds the representation; the character must be admissible at its
/// level for the index set to carry the intended transitive action.
pub fn build_rep(ctx: &Ctx, chi: &LevelChar, d: usize) -> Result<TruncatedRep> {
    if !is_admissible(ctx, chi).overall {
        return Err(Error::AdmissibilityRequired(format!(
            "character chi({}; {}) is not admissible",
            chi.t(),
            chi.level().gen()
        )));
    }
    let mut index = Vec::new();
    let mut pos = BTreeMap::new();
    for n in 0..=d {
        for g in enumerate_monic(ctx, n, false) {
            pos.insert(g.clone(), index.len());
            index.push(MonicIdeal::new(ctx, &g)?);
        }
    }
    Ok(TruncatedRep { chi: chi.clone(), d, index, pos })
}

impl TruncatedRep {
    pub fn chi(&self) -> &LevelChar {
        &self.chi
    }
    pub fn max_degree(&self) -> usize {
        self.d
    }
    pub fn dim(&self) -> usize {
        self.index.len()
    }
    pub fn index(&self) -> &[MonicIdeal] {
        &self.index
    }
    pub fn position(&self, b: &MonicIdeal) -> Option<usize> {
        self.pos.get(b.gen()).copied()
    }
    /// Number of index entries of degree <= s (they come first).
    pub fn block_dim(&self, s: usize) -> usize {
        self.index.iter().take_while(|b| b.deg() <= s.min(self.d)).count()
    }
}

/// Sparse column-major matrix over the Laurent scalars, indexed by a
/// truncated representation's basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepMatrix {
    p: u32,
    dim: usize,
    cols: Vec<BTreeMap<usize, UScalar>>,
}

impl RepMatrix {
    pub fn zero(p: u32, dim: usize) -> RepMatrix {
        RepMatrix { p, dim, cols: vec![BTreeMap::new(); dim] }
    }
    pub fn identity(p: u32, dim: usize) -> RepMatrix {
        let mut m = RepMatrix::zero(p, dim);
        for i in 0..dim {
            m.cols[i].insert(i, UScalar::one(p));
        }
        m
    }
    pub fn diagonal(p: u32, entries: Vec<UScalar>) -> RepMatrix {
        let dim = entries.len();
        let mut m = RepMatrix::zero(p, dim);
        for (i, v) in entries.into_iter().enumerate() {
            if !v.is_zero() {
                m.cols[i].insert(i, v);
            }
        }
        m
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn entry(&self, row: usize, col: usize) -> UScalar {
        self.cols[col].get(&row).cloned().unwrap_or_else(|| UScalar::zero(self.p))
    }
    pub fn add_entry(&mut self, row: usize, col: usize, v: &UScalar) {
        let slot = self.cols[col].entry(row).or_insert_with(|| UScalar::zero(self.p));
        *slot = slot.add(v);
        if slot.is_zero() {
            self.cols[col].remove(&row);
        }
    }
    pub fn add(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.dim, other.dim, "matrix sizes differ");
        let mut out = self.clone();
        for (c, col) in other.cols.iter().enumerate() {
            for (&r, v) in col {
                out.add_entry(r, c, v);
            }
        }
        out
    }
    pub fn scale(&self, s: &UScalar) -> RepMatrix {
        let mut out = RepMatrix::zero(self.p, self.dim);
        for (c, col) in self.cols.iter().enumerate() {
            for (&r, v) in col {
                let w = v.mul(s);
                if !w.is_zero() {
                    out.cols[c].insert(r, w);
                }
            }
        }
        out
    }
    /// self * other, applying other first.
    pub fn matmul(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.dim, other.dim, "matrix sizes differ");
        let mut out = RepMatrix::zero(self.p, self.dim);
        for (c, col) in other.cols.iter().enumerate() {
            for (&mid, v) in col {
                for (&r, w) in &self.cols[mid] {
                    out.add_entry(r, c, &w.mul(v));
                }
            }
        }
        out
    }
    /// Conjugate transpose.
    pub fn star(&self) -> RepMatrix {
        let mut out = RepMatrix::zero(self.p, self.dim);
        for (c, col) in self.cols.iter().enumerate() {
            for (&r, v) in col {
                out.cols[r].insert(c, v.conj());
            }
        }
        out
    }
    pub fn is_diagonal(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(c, col)| col.keys().all(|&r| r == c))
    }
    /// Entry-wise comparison of the first `col_cut` columns; returns the
    /// largest numeric magnitude of a difference (at u = 1/2 to weigh
    /// every Laurent coefficient).
    pub fn block_diff(&self, other: &RepMatrix, col_cut: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..col_cut.min(self.dim) {
            let mut rows: Vec<usize> = self.cols[c].keys().copied().collect();
            rows.extend(other.cols[c].keys().copied());
            rows.sort_unstable();
            rows.dedup();
            for r in rows {
                let d = self.entry(r, c).sub(&other.entry(r, c));
                if !d.is_zero() {
                    worst = worst.max(d.eval_complex(0.5).norm());
                    // exact nonzero difference: never let rounding mask it
                    worst = worst.max(f64::MIN_POSITIVE);
                }
            }
        }
        worst
    }
}

fn check_levels(ctx: &Ctx, rep: &TruncatedRep, x: &AlgebraElem) -> Result<()> {
    for key in x.terms().keys() {
        let ann = key.lam().annihilator(ctx);
        if !ann.divides(ctx, rep.chi().level()) {
            return Err(Error::LevelMismatch(format!(
                "label {} lies outside the level {}",
                key.lam(),
                rep.chi().level().gen()
            )));
        }
    }
    Ok(())
}

/// Matrix of a single basis word: the right leg divides the index, the
/// label contributes a root-of-unity phase, the left leg shifts up (and
/// is cut off past the truncation degree).
pub fn rep_term(ctx: &Ctx, rep: &TruncatedRep, key: &BasisKey) -> Result<RepMatrix> {
    let ann = key.lam().annihilator(ctx);
    if !ann.divides(ctx, rep.chi().level()) {
        return Err(Error::LevelMismatch(format!(
            "label {} lies outside the level {}",
            key.lam(),
            rep.chi().level().gen()
        )));
    }
    let mut m = RepMatrix::zero(ctx.p, rep.dim());
    for (col, c) in rep.index().iter().enumerate() {
        if !key.b().divides(ctx, c) {
            continue;
        }
        let c1 = c.div_exact(ctx, key.b()).expect("divisor checked");
        let target = key.a().mul(ctx, &c1);
        if target.deg() > rep.max_degree() {
            continue;
        }
        let moved = torsion_act(ctx, c1.gen(), key.lam());
        let k = char_eval(ctx, rep.chi(), &moved).expect("annihilator divides the level");
        let row = rep.position(&target).expect("degree checked");
        m.cols[col].insert(row, UScalar::from_cyclo(Cyclo::zeta_pow(ctx.p, k as i64)));
    }
    Ok(m)
}

/// Matrix of an algebra element, extended linearly from its basis words.
pub fn rep_apply(ctx: &Ctx, rep: &TruncatedRep, x: &AlgebraElem) -> Result<RepMatrix> {
    check_levels(ctx, rep, x)?;
    let mut m = RepMatrix::zero(ctx.p, rep.dim());
    for (key, coeff) in x.terms() {
        m = m.add(&rep_term(ctx, rep, key)?.scale(coeff));
    }
    Ok(m)
}

/// How a truncated trace is reported: as exact numerator/denominator
/// series in u, or as a number at u = q^(-beta).
pub enum TraceMode {
    Formal,
    Numeric(f64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSeries {
    pub num: UScalar,
    pub den: UScalar,
}

pub enum TraceResult {
    Formal(TraceSeries),
    Numeric(Complex64),
}

/// Weighted diagonal sum [sum over deg b <= D of <pi(x) e_b, e_b>
/// u^(deg b)] over [sum over deg b <= D of u^(deg b)]. Only balanced
/// terms (equal legs) reach the diagonal, so the matrix is never built.
pub fn gibbs_trace_truncated(
    ctx: &Ctx,
    rep: &TruncatedRep,
    x: &AlgebraElem,
    mode: TraceMode,
) -> Result<TraceResult> {
    check_levels(ctx, rep, x)?;
    let mut num = UScalar::zero(ctx.p);
    let mut den = UScalar::zero(ctx.p);
    for c in rep.index() {
        den = den.add(&UScalar::u_pow(ctx.p, c.deg() as i64));
        let mut diag = Cyclo::zero(ctx.p);
        for (key, coeff) in x.terms() {
            if key.a() != key.b() || !key.b().divides(ctx, c) {
                continue;
            }
            let c1 = c.div_exact(ctx, key.b()).expect("divisor checked");
            let moved = torsion_act(ctx, c1.gen(), key.lam());
            let k = char_eval(ctx, rep.chi(), &moved).expect("annihilator divides the level");
            let contrib = coeff
                .as_cyclo()
                .map(|cc| cc.mul(&Cyclo::zeta_pow(ctx.p, k as i64)));
            match contrib {
                Some(cc) => diag = diag.add(&cc),
                None => {
                    // coefficients carrying powers of u still enter the
                    // trace; fold them in at the term's weight
                    for (&up, cc) in coeff.terms() {
                        let w = UScalar::monomial(
                            up + c.deg() as i64,
                            cc.mul(&Cyclo::zeta_pow(ctx.p, k as i64)),
                        );
                        num = num.add(&w);
                    }
                    continue;
                }
            }
        }
        if !diag.is_zero() {
            num = num.add(&UScalar::monomial(c.deg() as i64, diag));
        }
    }
    match mode {
        TraceMode::Formal => Ok(TraceResult::Formal(TraceSeries { num, den })),
        TraceMode::Numeric(beta) => {
            if beta <= 1.0 {
                return Err(Error::DivergentSeries(format!(
                    "numeric trace needs beta > 1, got {beta}"
                )));
            }
            let u = (ctx.q as f64).powf(-beta);
            let n = num.eval_complex(u);
            let d = den.eval_complex(u);
            Ok(TraceResult::Numeric(n / d))
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub pass: bool,
    pub safe_deg: usize,
    pub max_discrepancy: f64,
}

/// Compares the matrix of a product against the product of matrices on
/// the interior block where truncation cannot interfere: columns of
/// degree at most D minus both elements' leg degrees.
pub fn mul_oracle_check(
    ctx: &Ctx,
    rep: &TruncatedRep,
    x: &AlgebraElem,
    y: &AlgebraElem,
) -> Result<OracleReport> {
    let need = x.max_ideal_deg() + y.max_ideal_deg();
    if need > rep.max_degree() {
        return Err(Error::UnsafeTruncation(format!(
            "legs of total degree {need} exceed the cutoff {}",
            rep.max_degree()
        )));
    }
    let safe_deg = rep.max_degree() - need;
    let lhs = rep_apply(ctx, rep, &mul(ctx, x, y))?;
    let rhs = rep_apply(ctx, rep, x)?.matmul(&rep_apply(ctx, rep, y)?);
    let max_discrepancy = lhs.block_diff(&rhs, rep.block_dim(safe_deg));
    Ok(OracleReport { pass: max_discrepancy == 0.0, safe_deg, max_discrepancy })
}

/// Exploratory probe: dimension of the joint commutant of the given
/// elements' matrices (and their adjoints) restricted to the interior
/// block of the given degree. Reported, never asserted against.
pub fn commutant_probe(
    ctx: &Ctx,
    rep: &TruncatedRep,
    elems: &[AlgebraElem],
    safe_deg: usize,
) -> Result<usize> {
    let n = rep.block_dim(safe_deg);
    if n == 0 || n > 40 {
        return Err(Error::Config(format!("probe block size {n} out of range 1..=40")));
    }
    let mut gens: Vec<Vec<Vec<Cyclo>>> = Vec::new();
    for x in elems {
        let m = rep_apply(ctx, rep, x)?;
        for mm in [m.star(), m] {
            let mut dense = vec![vec![Cyclo::zero(ctx.p); n]; n];
            for c in 0..n {
                for (&r, v) in &mm.cols[c] {
                    if r < n {
                        dense[r][c] = v
                            .as_cyclo()
                            .ok_or_else(|| Error::Config("probe needs u-free matrices".into()))?;
                    }
                }
            }
            gens.push(dense);
        }
    }
    // unknown M with [M, A] = 0 for every generator A: one linear row
    // per (generator, i, j) over the n^2 entries of M
    let unknowns = n * n;
    let mut rows: Vec<Vec<Cyclo>> = Vec::new();
    for a in &gens {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![Cyclo::zero(ctx.p); unknowns];
                // (A M)_{ij} = sum_k A_{ik} M_{kj}; (M A)_{ij} = sum_k M_{ik} A_{kj}
                for k in 0..n {
                    row[k * n + j] = row[k * n + j].add(&a[i][k]);
                    row[i * n + k] = row[i * n + k].sub(&a[k][j]);
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    // Gaussian elimination over the cyclotomic field
    let mut rank = 0usize;
    for col in 0..unknowns {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inverse().expect("pivot nonzero");
        for c in col..unknowns {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for c in col..unknowns {
                    row[c] = row[c].sub(&f.mul(&pivot_row[c]));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(unknowns - rank)
}

/// Dense JSON export: rows of entries, each entry the p-1 cyclotomic
/// coordinates as exact rational strings. Only u-free matrices (plain
/// images of algebra elements) can be exported this way.
pub fn matrix_to_json(m: &RepMatrix) -> Result<Value> {
    let mut rows = Vec::with_capacity(m.dim());
    for r in 0..m.dim() {
        let mut row = Vec::with_capacity(m.dim());
        for c in 0..m.dim() {
            let cyc = m
                .entry(r, c)
                .as_cyclo()
                .ok_or_else(|| Error::Config("JSON export needs a u-free matrix".into()))?;
            row.push(json!(cyc
                .coords()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()));
        }
        rows.push(Value::Array(row));
    }
    Ok(Value::Array(rows))
}

/// CSV export of complex entries (evaluated at u = q^(-beta) when a
/// matrix carries powers of u; plain images are u-free so beta is
/// irrelevant for them).
pub fn matrix_to_csv(m: &RepMatrix, u: f64) -> String {
    let mut out = String::new();
    for r in 0..m.dim() {
        let mut cells = Vec::with_capacity(m.dim());
        for c in 0..m.dim() {
            let z = m.entry(r, c).eval_complex(u);
            cells.push(format!("{:+.12e}{:+.12e}i", z.re, z.im));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::TorsionPoint;
    use crate::carlitz::{torsion_group, torsion_reduce};
    use crate::characters::all_chars;
    use crate::hecke::{basis_elem, cond_expectation, mul_all};
    use crate::parser::parse_expr;
    use num_rational::BigRational;

    fn ctx_q(q: u32) -> Ctx {
        match q {
            2 => Ctx::new(2, 1, None).unwrap(),
            3 => Ctx::new(3, 1, None).unwrap(),
            _ => panic!("test field"),
        }
    }
    fn ideal(ctx: &Ctx, coeffs: &[u8]) -> MonicIdeal {
        MonicIdeal::new(ctx, &Poly::from_coeffs(coeffs.to_vec())).unwrap()
    }
    fn point(ctx: &Ctx, num: &[u8], den: &[u8]) -> TorsionPoint {
        torsion_reduce(ctx, &Poly::from_coeffs(num.to_vec()), &Poly::from_coeffs(den.to_vec()))
            .unwrap()
    }
    fn std_rep(ctx: &Ctx, d: usize) -> TruncatedRep {
        let t = ideal(ctx, &[0, 1]);
        build_rep(ctx, &LevelChar::standard(&t), d).unwrap()
    }

    #[test]
    fn index_sizes_and_admissibility() {
        let ctx = ctx_q(2);
        assert_eq!(std_rep(&ctx, 3).dim(), 15);
        assert_eq!(std_rep(&ctx, 0).dim(), 1);
        let ctx3 = ctx_q(3);
        assert_eq!(std_rep(&ctx3, 2).dim(), 13);
        // block boundaries follow the degree layering
        let rep = std_rep(&ctx, 3);
        assert_eq!(rep.block_dim(0), 1);
        assert_eq!(rep.block_dim(1), 3);
        assert_eq!(rep.block_dim(2), 7);
        assert_eq!(rep.block_dim(9), 15);
        // a character vanishing on the level torsion is rejected
        let t = ideal(&ctx3, &[0, 1]);
        let bad = LevelChar::new(&ctx3, &Poly::from_coeffs(vec![0, 1]), &t);
        assert!(matches!(
            build_rep(&ctx3, &bad, 2),
            Err(Error::AdmissibilityRequired(_))
        ));
    }

    #[test]
    fn generator_images() {
        let ctx = ctx_q(2);
        let rep = std_rep(&ctx, 3);
        // unit acts as the identity
        assert_eq!(
            rep_apply(&ctx, &rep, &AlgebraElem::unit(&ctx)).unwrap(),
            RepMatrix::identity(2, rep.dim())
        );
        // the torsion projection is diagonal with sign given by
        // divisibility of the index by T
        let e = parse_expr(&ctx, "e(1/T)").unwrap();
        let m = rep_apply(&ctx, &rep, &e).unwrap();
        assert!(m.is_diagonal());
        let t = ideal(&ctx, &[0, 1]);
        for (i, b) in rep.index().iter().enumerate() {
            let want = if t.divides(&ctx, b) { 1i64 } else { -1 };
            assert_eq!(
                m.entry(i, i),
                UScalar::from_rational(2, BigRational::from_integer(want.into())),
                "diagonal at {}",
                b.gen()
            );
        }
        // mu mu* is the 0/1 projection onto multiples of T
        let proj = rep_apply(&ctx, &rep, &basis_elem(&ctx, &t, &TorsionPoint::zero(), &t)).unwrap();
        assert!(proj.is_diagonal());
        for (i, b) in rep.index().iter().enumerate() {
            let want = if t.divides(&ctx, b) { UScalar::one(2) } else { UScalar::zero(2) };
            assert_eq!(proj.entry(i, i), want);
        }
        // shift legs move the index with the right phases
        let x = parse_expr(&ctx, "mu(T)*e(1/T)").unwrap();
        let mx = rep_apply(&ctx, &rep, &x).unwrap();
        let one_pos = rep.position(&MonicIdeal::unit()).unwrap();
        let t_pos = rep.position(&t).unwrap();
        assert_eq!(
            mx.entry(t_pos, one_pos),
            UScalar::from_rational(2, BigRational::from_integer((-1).into()))
        );
    }

    #[test]
    fn unimodular_diagonal_labels() {
        for q in [2u32, 3] {
            let ctx = ctx_q(q);
            let t2 = ideal(&ctx, &[0, 0, 1]);
            let rep = build_rep(&ctx, &LevelChar::standard(&t2), 3).unwrap();
            for lam in torsion_group(&ctx, &t2, false) {
                let m = rep_apply(&ctx, &rep, &AlgebraElem::e(&ctx, &lam)).unwrap();
                assert!(m.is_diagonal());
                for i in 0..m.dim() {
                    let v = m.entry(i, i).as_cyclo().unwrap();
                    assert!(v.mul(&v.conj()).is_one(), "unimodular at q={q}");
                }
            }
        }
    }

    #[test]
    fn isometry_on_interior() {
        let ctx = ctx_q(2);
        let rep = std_rep(&ctx, 4);
        for coeffs in [vec![0u8, 1], vec![1, 1], vec![1, 1, 1]] {
            let a = ideal(&ctx, &coeffs);
            let m = rep_apply(&ctx, &rep, &AlgebraElem::mu(&ctx, &a)).unwrap();
            let prod = m.star().matmul(&m);
            let cut = rep.block_dim(rep.max_degree() - a.deg());
            assert_eq!(
                prod.block_diff(&RepMatrix::identity(2, rep.dim()), cut),
                0.0,
                "isometry for {}",
                a.gen()
            );
        }
    }

    #[test]
    fn oracle_examples() {
        let ctx = ctx_q(2);
        // the product's labels deepen to the T^2-torsion, so the
        // character must live at that level for both sides to exist
        let t2 = ideal(&ctx, &[0, 0, 1]);
        let rep = build_rep(&ctx, &LevelChar::standard(&t2), 6).unwrap();
        let x = parse_expr(&ctx, "mu(T)*mu*(T+1)").unwrap();
        let y = parse_expr(&ctx, "mu(T+1)*e(1/T)*mu*(T)").unwrap();
        let r = mul_oracle_check(&ctx, &rep, &x, &y).unwrap();
        assert!(r.pass && r.max_discrepancy == 0.0 && r.safe_deg == 4);
        let unit = AlgebraElem::unit(&ctx);
        assert!(mul_oracle_check(&ctx, &rep, &unit, &unit).unwrap().pass);
        // an averaging-relation instance in matrices
        let t = ideal(&ctx, &[0, 1]);
        let lam = point(&ctx, &[1], &[0, 1]);
        let w = mul_all(
            &ctx,
            &[
                AlgebraElem::mu(&ctx, &t),
                AlgebraElem::e(&ctx, &lam),
                AlgebraElem::mu_star(&ctx, &t),
            ],
        );
        let r2 = mul_oracle_check(&ctx, &rep, &AlgebraElem::mu(&ctx, &t), &w).unwrap();
        assert!(r2.pass);
        // legs too deep for the cutoff
        let deep = parse_expr(&ctx, "mu(T^4)").unwrap();
        assert!(matches!(
            mul_oracle_check(&ctx, &rep, &deep, &deep),
            Err(Error::UnsafeTruncation(_))
        ));
    }

    #[test]
    fn homomorphism_small_exhaustive() {
        let ctx = ctx_q(2);
        let lams = torsion_group(&ctx, &ideal(&ctx, &[0, 1]), false);
        let mut words = Vec::new();
        for da in 0..=1usize {
            for a in enumerate_monic(&ctx, da, false) {
                for db in 0..=1usize {
                    for b in enumerate_monic(&ctx, db, false) {
                        for lam in &lams {
                            words.push(basis_elem(
                                &ctx,
                                &MonicIdeal::new(&ctx, &a).unwrap(),
                                lam,
                                &MonicIdeal::new(&ctx, &b).unwrap(),
                            ));
                        }
                    }
                }
            }
        }
        // re-coprimalization deepens the product's labels, so the rep's
        // level is chosen per pair to cover everything involved
        let mut reps: BTreeMap<Poly, TruncatedRep> = BTreeMap::new();
        for x in &words {
            for y in &words {
                let prod = mul(&ctx, x, y);
                let lev = x
                    .ann_lcm(&ctx)
                    .lcm(&ctx, &y.ann_lcm(&ctx))
                    .lcm(&ctx, &prod.ann_lcm(&ctx));
                let rep = reps.entry(lev.gen().clone()).or_insert_with(|| {
                    build_rep(&ctx, &LevelChar::standard(&lev), 4).unwrap()
                });
                assert!(mul_oracle_check(&ctx, rep, x, y).unwrap().pass);
            }
        }
    }

    #[test]
    fn flow_covariance_in_matrices() {
        // conjugating a shift by the degree weighting multiplies it by
        // u^(leg degree)
        let ctx = ctx_q(2);
        let rep = std_rep(&ctx, 3);
        let weights: Vec<UScalar> =
            rep.index().iter().map(|b| UScalar::u_pow(2, b.deg() as i64)).collect();
        let inv_weights: Vec<UScalar> =
            rep.index().iter().map(|b| UScalar::u_pow(2, -(b.deg() as i64))).collect();
        let w = RepMatrix::diagonal(2, weights);
        let w_inv = RepMatrix::diagonal(2, inv_weights);
        for coeffs in [vec![0u8, 1], vec![1, 1]] {
            let a = ideal(&ctx, &coeffs);
            let m = rep_apply(&ctx, &rep, &AlgebraElem::mu(&ctx, &a)).unwrap();
            let conj = w.matmul(&m).matmul(&w_inv);
            assert_eq!(conj, m.scale(&UScalar::u_pow(2, a.deg() as i64)));
        }
    }

    #[test]
    fn trace_examples() {
        let ctx = ctx_q(2);
        let rep10 = std_rep(&ctx, 10);
        // the unit traces to an exact ratio of equal series
        match gibbs_trace_truncated(&ctx, &rep10, &AlgebraElem::unit(&ctx), TraceMode::Formal)
            .unwrap()
        {
            TraceResult::Formal(s) => assert_eq!(s.num, s.den),
            _ => unreachable!(),
        }
        // numeric value of the basic projection at beta = 2
        let e = parse_expr(&ctx, "e(1/T)").unwrap();
        match gibbs_trace_truncated(&ctx, &rep10, &e, TraceMode::Numeric(2.0)).unwrap() {
            TraceResult::Numeric(z) => {
                assert!((z.re + 0.5).abs() < 2f64.powi(-10), "got {z}");
                assert!(z.im.abs() < 1e-12);
            }
            _ => unreachable!(),
        }
        // frozen numerator/denominator of the rank-one projection sum
        let rep3 = std_rep(&ctx, 3);
        let t = ideal(&ctx, &[0, 1]);
        let proj = basis_elem(&ctx, &t, &TorsionPoint::zero(), &t);
        match gibbs_trace_truncated(&ctx, &rep3, &proj, TraceMode::Formal).unwrap() {
            TraceResult::Formal(s) => {
                let num = parse_u(&ctx, &[(1, 1), (2, 2), (3, 4)]);
                let den = parse_u(&ctx, &[(0, 1), (1, 2), (2, 4), (3, 8)]);
                assert_eq!(s.num, num);
                assert_eq!(s.den, den);
            }
            _ => unreachable!(),
        }
        // divergence guard
        assert!(matches!(
            gibbs_trace_truncated(&ctx, &rep3, &e, TraceMode::Numeric(1.0)),
            Err(Error::DivergentSeries(_))
        ));
        // labels outside the level are rejected
        let deep = parse_expr(&ctx, "e(1/T^2)").unwrap();
        assert!(matches!(
            rep_apply(&ctx, &rep3, &deep),
            Err(Error::LevelMismatch(_))
        ));
    }

    fn parse_u(ctx: &Ctx, terms: &[(i64, i64)]) -> UScalar {
        let mut s = UScalar::zero(ctx.p);
        for &(k, c) in terms {
            s = s.add(&UScalar::monomial(
                k,
                Cyclo::from_rational(ctx.p, BigRational::from_integer(c.into())),
            ));
        }
        s
    }

    #[test]
    fn trace_of_fixed_elements_ignores_character() {
        for q in [2u32, 3] {
            let ctx = ctx_q(q);
            let t2 = ideal(&ctx, &[0, 0, 1]);
            let chars: Vec<LevelChar> = all_chars(&ctx, &t2)
                .into_iter()
                .filter(|c| is_admissible(&ctx, c).overall)
                .collect();
            assert!(chars.len() >= 2 || q == 2);
            let lam = point(&ctx, &[1], &[0, 0, 1]);
            let x = cond_expectation(&ctx, &AlgebraElem::e(&ctx, &lam));
            let mut seen: Option<(UScalar, UScalar)> = None;
            for chi in &chars {
                let rep = build_rep(&ctx, chi, 5).unwrap();
                match gibbs_trace_truncated(&ctx, &rep, &x, TraceMode::Formal).unwrap() {
                    TraceResult::Formal(s) => match &seen {
                        None => seen = Some((s.num, s.den)),
                        Some((n0, d0)) => {
                            assert_eq!(&s.num, n0, "q={q} chi changes the trace");
                            assert_eq!(&s.den, d0);
                        }
                    },
                    _ => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn commutant_probe_small() {
        let ctx = ctx_q(2);
        let rep = std_rep(&ctx, 2);
        let t = ideal(&ctx, &[0, 1]);
        let t1 = ideal(&ctx, &[1, 1]);
        let gens = vec![
            AlgebraElem::mu(&ctx, &t),
            AlgebraElem::mu(&ctx, &t1),
            parse_expr(&ctx, "e(1/T)").unwrap(),
        ];
        // the generators and their adjoints leave only scalars on the
        // interior block
        assert_eq!(commutant_probe(&ctx, &rep, &gens, 1).unwrap(), 1);
        // with the shifts removed, the diagonal projection commutes
        // with more
        let small = vec![parse_expr(&ctx, "e(1/T)").unwrap()];
        assert!(commutant_probe(&ctx, &rep, &small, 1).unwrap() > 1);
    }

    #[test]
    fn exports() {
        let ctx = ctx_q(2);
        let rep = std_rep(&ctx, 1);
        let e = parse_expr(&ctx, "e(1/T)").unwrap();
        let m = rep_apply(&ctx, &rep, &e).unwrap();
        let v = matrix_to_json(&m).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0][0], json!(["-1"]));
        assert_eq!(rows[1][1], json!(["1"]));
        assert_eq!(rows[0][1], json!(["0"]));
        let csv = matrix_to_csv(&m, 0.25);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("-1.000000000000e0+0.000000000000e0i"));
        // weighted matrices refuse the exact export
        let w = RepMatrix::diagonal(2, vec![UScalar::u_pow(2, 1); 3]);
        assert!(matrix_to_json(&w).is_err());
    }
}
