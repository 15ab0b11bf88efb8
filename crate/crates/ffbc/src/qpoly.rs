//! Dense polynomials over Q (ascending coefficients, trimmed): the small
//! arithmetic kernel behind rational functions in u and cyclotomic
//! inversion.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) fn qp_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

pub(crate) fn qp_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    qp_trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

pub(crate) fn qp_neg(a: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|c| -c).collect()
}

pub(crate) fn qp_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    qp_add(a, &qp_neg(b))
}

pub(crate) fn qp_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    qp_trim(v)
}

pub(crate) fn qp_divmod(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    let mut rem: Vec<BigRational> = a.to_vec();
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while rem.len() > db {
        let c = rem.last().unwrap() / lead;
        let k = rem.len() - 1 - db;
        for (j, y) in b.iter().enumerate() {
            let t = &c * y;
            rem[k + j] -= t;
        }
        quot[k] = c;
        rem = qp_trim(rem);
    }
    (qp_trim(quot), rem)
}

/// Monic gcd.
pub(crate) fn qp_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut x, mut y) = (qp_trim(a.to_vec()), qp_trim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = qp_divmod(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c /= &lead;
        }
    }
    x
}

/// Extended Euclid: (d, s, t) with s*a + t*b = d = gcd(a, b), d monic.
pub(crate) fn qp_xgcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (qp_trim(a.to_vec()), qp_trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![BigRational::one()], vec![]);
    let (mut t0, mut t1) = (vec![], vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = qp_divmod(&r0, &r1);
        let step = |x0: &[BigRational], x1: &[BigRational]| qp_sub(x0, &qp_mul(&q, x1));
        let (ns, nt) = (step(&s0, &s1), step(&t0, &t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, ns);
        (t0, t1) = (t1, nt);
    }
    if let Some(lead) = r0.last().cloned() {
        for c in r0.iter_mut().chain(s0.iter_mut()).chain(t0.iter_mut()) {
            *c /= &lead;
        }
    }
    (r0, s0, t0)
}

/// Canonical text form, ascending powers: "1-2*u+u^2".
pub(crate) fn qp_format(v: &[BigRational], var: &str) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push(if c.is_negative() { '-' } else { '+' });
        }
        let a = c.abs();
        match k {
            0 => out.push_str(&a.to_string()),
            _ => {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                if k == 1 {
                    out.push_str(var);
                } else {
                    out.push_str(&format!("{var}^{k}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
