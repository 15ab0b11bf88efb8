//! Text and JSON forms for polynomials, torsion fractions, characters,
//! and algebra elements.
//!
//! Formatting is canonical (descending-degree polynomials, basis terms
//! in their stored order, one scalar monomial per printed term); parsing
//! is whitespace-insensitive and accepts a few convenient supersets of
//! the canonical form, such as bare `z` for `z^1` and improper torsion
//! fractions, which are reduced on the way in.

use crate::carlitz::{torsion_reduce, TorsionPoint};
use crate::characters::{GaloisElem, LevelChar};
use crate::error::{Error, Result};
use crate::ffpoly::{Ctx, MonicIdeal, Poly};
use crate::hecke::{self, mul, AlgebraElem};
use crate::scalar::{Cyclo, UScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::str::FromStr;

/// Canonical text for a polynomial: prime fields use bare digit
/// coefficients, extension fields bracket each coefficient as a
/// polynomial in x over the prime field.
pub fn format_poly(ctx: &Ctx, f: &Poly) -> String {
    if ctx.e == 1 {
        return f.to_string();
    }
    if f.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for k in (0..=f.deg().unwrap()).rev() {
        let c = f.coeff(k);
        if c == 0 {
            continue;
        }
        let mut digits = Vec::new();
        let mut v = c;
        while v > 0 {
            digits.push(v % ctx.p as u8);
            v /= ctx.p as u8;
        }
        let mut inner = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let head = if d == 1 && i > 0 { String::new() } else { d.to_string() };
            let tail = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let sep = if head.is_empty() || tail.is_empty() { "" } else { "*" };
            inner.push(format!("{head}{sep}{tail}"));
        }
        let coeff = format!("[{}]", inner.join("+"));
        let term = match k {
            0 => coeff,
            1 => format!("{coeff}*T"),
            _ => format!("{coeff}*T^{k}"),
        };
        parts.push(term);
    }
    parts.join("+")
}

/// Canonical text for a torsion point: "0", or "num/den" with
/// multi-term numerators and denominators parenthesized.
pub fn format_frac(ctx: &Ctx, lam: &TorsionPoint) -> String {
    if lam.is_zero() {
        return "0".to_string();
    }
    let wrap = |s: String| if hecke::plus_at_top(&s) { format!("({s})") } else { s };
    format!(
        "{}/{}",
        wrap(format_poly(ctx, lam.num())),
        wrap(format_poly(ctx, lam.den()))
    )
}

/// Canonical text for a character: "chi(t; c)".
pub fn format_char(ctx: &Ctx, chi: &LevelChar) -> String {
    format!(
        "chi({}; {})",
        format_poly(ctx, chi.t()),
        format_poly(ctx, chi.level().gen())
    )
}

/// Canonical text for a Galois element: "unit mod c".
pub fn format_galois(ctx: &Ctx, sigma: &GaloisElem) -> String {
    format!(
        "{} mod {}",
        format_poly(ctx, sigma.unit()),
        format_poly(ctx, sigma.level().gen())
    )
}

/// Canonical text for an algebra element.
pub fn format_elem(ctx: &Ctx, x: &AlgebraElem) -> String {
    hecke::elem_string(x, &|p| format_poly(ctx, p))
}

struct Cur<'a> {
    ctx: &'a Ctx,
    b: &'a [u8],
    pos: usize,
}

impl<'a> Cur<'a> {
    fn new(ctx: &'a Ctx, s: &'a str) -> Cur<'a> {
        Cur { ctx, b: s.as_bytes(), pos: 0 }
    }
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }
    fn skip_ws(&mut self) {
        while self.pos < self.b.len() && self.b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.b.get(self.pos).copied()
    }
    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }
    fn eat_kw(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.b[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }
    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn parse_uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.b.len() && self.b[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.b[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::Parse { pos: start, msg: "number too large".to_string() })
    }
    fn parse_int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let n = self.parse_uint()? as i64;
        Ok(if neg { -n } else { n })
    }

    /// One exponent suffix: "^k" or nothing (meaning 1).
    fn parse_pow(&mut self) -> Result<i64> {
        if self.eat(b'^') {
            self.parse_int()
        } else {
            Ok(1)
        }
    }

    /// A polynomial in the given variable over the prime field, bare
    /// integer coefficients. Used for bracket interiors and, in prime
    /// fields, for polynomials in T.
    fn parse_prime_poly(&mut self, var: u8) -> Result<Poly> {
        let mut coeffs: Vec<u8> = Vec::new();
        let p = self.ctx.p as u64;
        loop {
            // one term: c, c*var^k, or var^k
            let has_coeff = self.peek().map_or(false, |c| c.is_ascii_digit());
            let c = if has_coeff {
                let n = self.parse_uint()?;
                (n % p) as u8
            } else {
                1
            };
            let k = if has_coeff {
                if self.eat(b'*') {
                    self.expect(var)?;
                    self.parse_pow()?
                } else {
                    0
                }
            } else {
                self.expect(var)?;
                self.parse_pow()?
            };
            if k < 0 {
                return self.err("negative degree");
            }
            let k = k as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = ((coeffs[k] as u64 + c as u64) % p) as u8;
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Extension-field coefficient: "[poly in x]" giving the element
    /// code, or a bare prime-field digit.
    fn parse_coeff_code(&mut self) -> Result<u8> {
        if self.eat(b'[') {
            let inner = self.parse_prime_poly(b'x')?;
            self.expect(b']')?;
            if let Some(d) = inner.deg() {
                if d >= self.ctx.e as usize {
                    return self.err("coefficient not reduced modulo the field generator");
                }
            }
            let mut code = 0u64;
            for i in (0..self.ctx.e as usize).rev() {
                code = code * self.ctx.p as u64 + inner.coeff(i) as u64;
            }
            Ok(code as u8)
        } else {
            let n = self.parse_uint()?;
            if n >= self.ctx.p as u64 {
                return self.err("bare coefficient must lie in the prime field");
            }
            Ok(n as u8)
        }
    }

    fn parse_poly(&mut self) -> Result<Poly> {
        if self.ctx.e == 1 {
            return self.parse_prime_poly(b'T');
        }
        let mut coeffs: Vec<u8> = Vec::new();
        loop {
            let has_coeff = self.peek().map_or(false, |d| d == b'[' || d.is_ascii_digit());
            let c = if has_coeff { self.parse_coeff_code()? } else { 1 };
            let k = if has_coeff {
                if self.eat(b'*') {
                    self.expect(b'T')?;
                    self.parse_pow()?
                } else {
                    0
                }
            } else {
                self.expect(b'T')?;
                self.parse_pow()?
            };
            if k < 0 {
                return self.err("negative degree");
            }
            let k = k as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = self.ctx.fadd(coeffs[k], c);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Polynomial, optionally parenthesized.
    fn parse_poly_group(&mut self) -> Result<Poly> {
        if self.eat(b'(') {
            let f = self.parse_poly()?;
            self.expect(b')')?;
            Ok(f)
        } else {
            self.parse_poly()
        }
    }

    fn parse_frac(&mut self) -> Result<TorsionPoint> {
        let num = self.parse_poly_group()?;
        if self.eat(b'/') {
            let den = self.parse_poly_group()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            torsion_reduce(self.ctx, &num, &den)
        } else {
            // an integral value is zero in the torsion module
            Ok(TorsionPoint::zero())
        }
    }

    fn parse_monic_ideal(&mut self) -> Result<MonicIdeal> {
        self.skip_ws();
        let start = self.pos;
        let g = self.parse_poly_group()?;
        if !g.is_zero() && !g.is_monic() {
            return Err(Error::Parse { pos: start, msg: "non-monic ideal argument".to_string() });
        }
        MonicIdeal::new(self.ctx, &g)
            .map_err(|e| Error::Parse { pos: start, msg: e.to_string() })
    }

    /// True when the characters from `pos` to the matching ')' form a
    /// parenthesized rational, distinguishing "(1/2)*..." from a
    /// parenthesized subexpression.
    fn paren_is_rational(&self) -> bool {
        let mut i = self.pos + 1;
        let mut seen = false;
        while i < self.b.len() {
            match self.b[i] {
                b')' => return seen,
                b'0'..=b'9' | b'/' => {
                    seen = true;
                    i += 1;
                }
                c if c.is_ascii_whitespace() => i += 1,
                _ => return false,
            }
        }
        false
    }

    fn parse_rational(&mut self) -> Result<BigRational> {
        let parens = self.peek() == Some(b'(');
        if parens {
            self.pos += 1;
        }
        let n = self.parse_uint()?;
        let r = if self.eat(b'/') {
            let d = self.parse_uint()?;
            if d == 0 {
                return self.err("zero denominator in scalar");
            }
            BigRational::new(BigInt::from(n), BigInt::from(d))
        } else {
            BigRational::from(BigInt::from(n))
        };
        if parens {
            self.expect(b')')?;
        }
        Ok(r)
    }

    /// Leading scalar monomial of a term, if present:
    /// rational, z^j, u^k, in that order, any nonempty subset.
    fn parse_scalar(&mut self) -> Result<Option<UScalar>> {
        let starts_rational = match self.peek() {
            Some(d) if d.is_ascii_digit() => true,
            Some(b'(') => self.paren_is_rational(),
            _ => false,
        };
        let mut any = false;
        let mut r = BigRational::one();
        if starts_rational {
            r = self.parse_rational()?;
            any = true;
        }
        let mut zpow = 0i64;
        let mut save = self.pos;
        if (any && self.eat(b'*') || !any) && self.peek() == Some(b'z') {
            self.pos += 1;
            zpow = self.parse_pow()?;
            any = true;
        } else {
            self.pos = save;
        }
        let mut upow = 0i64;
        save = self.pos;
        if (any && self.eat(b'*') || !any) && self.peek() == Some(b'u') {
            self.pos += 1;
            upow = self.parse_pow()?;
            any = true;
        } else {
            self.pos = save;
        }
        if !any {
            return Ok(None);
        }
        let c = Cyclo::zeta_pow(self.ctx.p, zpow).scale(&r);
        Ok(Some(UScalar::monomial(upow, c)))
    }

    fn parse_factor(&mut self) -> Result<AlgebraElem> {
        let ctx = self.ctx;
        if self.eat_kw("mu*(") {
            let b = self.parse_monic_ideal()?;
            self.expect(b')')?;
            return Ok(AlgebraElem::mu_star(ctx, &b));
        }
        if self.eat_kw("mu(") {
            let a = self.parse_monic_ideal()?;
            self.expect(b')')?;
            return Ok(AlgebraElem::mu(ctx, &a));
        }
        if self.eat_kw("e(") {
            let lam = self.parse_frac()?;
            self.expect(b')')?;
            return Ok(AlgebraElem::e(ctx, &lam));
        }
        if self.eat(b'(') {
            let x = self.parse_elem()?;
            self.expect(b')')?;
            return Ok(x);
        }
        self.err("expected mu(...), mu*(...), e(...), or a parenthesized expression")
    }

    fn parse_term(&mut self) -> Result<AlgebraElem> {
        let scalar = self.parse_scalar()?;
        if scalar.is_some() {
            self.expect(b'*')?;
        }
        let mut x = self.parse_factor()?;
        loop {
            let save = self.pos;
            if self.eat(b'*') {
                if self.peek() == Some(b'(') && self.paren_is_rational() {
                    // a trailing rational is not a factor
                    self.pos = save;
                    break;
                }
                match self.parse_factor() {
                    Ok(f) => x = mul(self.ctx, &x, &f),
                    Err(e) => return Err(e),
                }
            } else {
                break;
            }
        }
        if let Some(c) = scalar {
            x = x.scale(&c);
        }
        Ok(x)
    }

    fn parse_elem(&mut self) -> Result<AlgebraElem> {
        let mut acc = AlgebraElem::zero(self.ctx);
        let mut negate = self.eat(b'-');
        loop {
            let t = self.parse_term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

/// Parse a polynomial in T.
pub fn parse_poly(ctx: &Ctx, text: &str) -> Result<Poly> {
    let mut cur = Cur::new(ctx, text);
    let f = cur.parse_poly()?;
    if !cur.at_end() {
        return cur.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parse a torsion fraction "num/den" or "0"; improper fractions are
/// reduced.
pub fn parse_frac(ctx: &Ctx, text: &str) -> Result<TorsionPoint> {
    let mut cur = Cur::new(ctx, text);
    let lam = cur.parse_frac()?;
    if !cur.at_end() {
        return cur.err("unexpected trailing input");
    }
    Ok(lam)
}

/// Parse a character "chi(t; c)".
pub fn parse_char(ctx: &Ctx, text: &str) -> Result<LevelChar> {
    let mut cur = Cur::new(ctx, text);
    if !cur.eat_kw("chi(") {
        return cur.err("expected chi(t; c)");
    }
    let t = cur.parse_poly()?;
    cur.expect(b';')?;
    let level = cur.parse_monic_ideal()?;
    cur.expect(b')')?;
    if !cur.at_end() {
        return cur.err("unexpected trailing input");
    }
    Ok(LevelChar::new(ctx, &t, &level))
}

/// Parse a Galois element "unit mod c".
pub fn parse_galois(ctx: &Ctx, text: &str) -> Result<GaloisElem> {
    let mut cur = Cur::new(ctx, text);
    let unit = cur.parse_poly()?;
    if !cur.eat_kw("mod") {
        return cur.err("expected 'mod'");
    }
    let level = cur.parse_monic_ideal()?;
    if !cur.at_end() {
        return cur.err("unexpected trailing input");
    }
    GaloisElem::new(ctx, &unit, &level)
}

/// Parse an algebra expression; the result is in canonical basis form.
pub fn parse_expr(ctx: &Ctx, text: &str) -> Result<AlgebraElem> {
    if text.trim() == "0" {
        return Ok(AlgebraElem::zero(ctx));
    }
    let mut cur = Cur::new(ctx, text);
    let x = cur.parse_elem()?;
    if !cur.at_end() {
        return cur.err("unexpected trailing input");
    }
    Ok(x)
}

/// JSON form of an element: a list of terms
/// {a, b, lambda: {num, den}, coeff: [{u_pow, cyclo: [p-1 rationals]}]}
/// in canonical term order.
pub fn elem_to_json(ctx: &Ctx, x: &AlgebraElem) -> Value {
    let mut terms = Vec::new();
    for (key, coeff) in x.terms() {
        let coeffs: Vec<Value> = coeff
            .terms()
            .iter()
            .map(|(&k, c)| {
                json!({
                    "u_pow": k,
                    "cyclo": c.coords().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        terms.push(json!({
            "a": format_poly(ctx, key.a().gen()),
            "b": format_poly(ctx, key.b().gen()),
            "lambda": {
                "num": format_poly(ctx, key.lam().num()),
                "den": format_poly(ctx, key.lam().den()),
            },
            "coeff": coeffs,
        }));
    }
    Value::Array(terms)
}

/// Rebuild an element from its JSON form.
pub fn elem_from_json(ctx: &Ctx, v: &Value) -> Result<AlgebraElem> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse { pos: 0, msg: "expected a JSON array of terms".to_string() })?;
    let jerr = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
    let mut out = AlgebraElem::zero(ctx);
    for item in arr {
        let get = |k: &str| -> Result<&str> {
            item.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| jerr(&format!("missing field {k}")))
        };
        let a = MonicIdeal::new(ctx, &parse_poly(ctx, get("a")?)?)
            .map_err(|e| jerr(&e.to_string()))?;
        let b = MonicIdeal::new(ctx, &parse_poly(ctx, get("b")?)?)
            .map_err(|e| jerr(&e.to_string()))?;
        let lam_v = item.get("lambda").ok_or_else(|| jerr("missing field lambda"))?;
        let num = parse_poly(
            ctx,
            lam_v.get("num").and_then(Value::as_str).ok_or_else(|| jerr("missing lambda.num"))?,
        )?;
        let den = parse_poly(
            ctx,
            lam_v.get("den").and_then(Value::as_str).ok_or_else(|| jerr("missing lambda.den"))?,
        )?;
        if den.is_zero() {
            return Err(jerr("zero denominator"));
        }
        let lam = torsion_reduce(ctx, &num, &den)?;
        let mut coeff = UScalar::zero(ctx.p);
        let coeff_v = item
            .get("coeff")
            .and_then(Value::as_array)
            .ok_or_else(|| jerr("missing field coeff"))?;
        for c in coeff_v {
            let u_pow = c
                .get("u_pow")
                .and_then(Value::as_i64)
                .ok_or_else(|| jerr("missing u_pow"))?;
            let cyc_v = c
                .get("cyclo")
                .and_then(Value::as_array)
                .ok_or_else(|| jerr("missing cyclo"))?;
            if cyc_v.len() != (ctx.p - 1) as usize {
                return Err(jerr("cyclo coordinate count must be p-1"));
            }
            let mut cyc = Cyclo::zero(ctx.p);
            for (j, rv) in cyc_v.iter().enumerate() {
                let s = rv.as_str().ok_or_else(|| jerr("cyclo entries must be strings"))?;
                let r = BigRational::from_str(s).map_err(|_| jerr("bad rational"))?;
                if !r.is_zero() {
                    cyc = cyc.add(&Cyclo::zeta_pow(ctx.p, j as i64).scale(&r));
                }
            }
            if !cyc.is_zero() {
                coeff = coeff.add(&UScalar::monomial(u_pow, cyc));
            }
        }
        // routed through the constructor so non-coprime data still lands
        // in canonical form
        out = out.add(&hecke::basis_elem(ctx, &a, &lam, &b).scale(&coeff));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::torsion_group;
    use crate::ffpoly::enumerate_monic;
    use crate::hecke::{basis_elem, BasisKey};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ctx_q(q: u32) -> Ctx {
        match q {
            2 => Ctx::new(2, 1, None).unwrap(),
            3 => Ctx::new(3, 1, None).unwrap(),
            4 => Ctx::new(2, 2, None).unwrap(),
            _ => panic!("test field"),
        }
    }
    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn poly_text_prime_field() {
        let ctx = ctx_q(3);
        for s in ["T^2+T+1", "2*T+1", "T", "0", "1", "2", "T^3+2*T"] {
            let f = parse_poly(&ctx, s).unwrap();
            assert_eq!(format_poly(&ctx, &f), s);
        }
        // whitespace and coefficient folding
        assert_eq!(
            parse_poly(&ctx, " T ^ 2 + T + T ").unwrap(),
            parse_poly(&ctx, "T^2+2*T").unwrap()
        );
        assert_eq!(parse_poly(&ctx, "4*T").unwrap(), parse_poly(&ctx, "T").unwrap());
        assert!(parse_poly(&ctx, "T^").is_err());
        assert!(parse_poly(&ctx, "T+").is_err());
        assert!(parse_poly(&ctx, "y").is_err());
    }

    #[test]
    fn poly_text_extension_field() {
        let ctx = ctx_q(4);
        // codes: x = 2, x+1 = 3
        let f = Poly::from_coeffs(vec![2, 3]);
        assert_eq!(format_poly(&ctx, &f), "[x+1]*T+[x]");
        assert_eq!(parse_poly(&ctx, "[x+1]*T+[x]").unwrap(), f);
        assert_eq!(parse_poly(&ctx, "[ x + 1 ] * T + [ x ]").unwrap(), f);
        let g = Poly::from_coeffs(vec![0, 0, 1]);
        assert_eq!(format_poly(&ctx, &g), "[1]*T^2");
        assert_eq!(parse_poly(&ctx, "[1]*T^2").unwrap(), g);
        assert_eq!(parse_poly(&ctx, "T^2").unwrap(), g);
        // bare digits stay prime-field; reduced bracket contents enforced
        assert!(parse_poly(&ctx, "2*T").is_err());
        assert!(parse_poly(&ctx, "[x^2]*T").is_err());
        // round trip across all low-degree polynomials
        for d in 0..=2usize {
            for f in enumerate_monic(&ctx, d, false) {
                assert_eq!(parse_poly(&ctx, &format_poly(&ctx, &f)).unwrap(), f);
            }
        }
    }

    #[test]
    fn frac_text() {
        let ctx = ctx_q(2);
        let lam = parse_frac(&ctx, "(T+1)/T^2").unwrap();
        assert_eq!(format_frac(&ctx, &lam), "(T+1)/T^2");
        // the parenthesizing is optional on input
        assert_eq!(parse_frac(&ctx, "T+1/T^2").unwrap(), lam);
        // improper fractions reduce
        assert_eq!(
            parse_frac(&ctx, "(T^2+1)/T").unwrap(),
            parse_frac(&ctx, "1/T").unwrap()
        );
        // integral values vanish
        assert!(parse_frac(&ctx, "T^3").unwrap().is_zero());
        assert_eq!(format_frac(&ctx, &TorsionPoint::zero()), "0");
        assert!(parse_frac(&ctx, "1/0").is_err());
    }

    #[test]
    fn char_and_galois_text() {
        let ctx = ctx_q(3);
        let t2 = MonicIdeal::new(&ctx, &parse_poly(&ctx, "T^2").unwrap()).unwrap();
        let chi = LevelChar::new(&ctx, &parse_poly(&ctx, "T+1").unwrap(), &t2);
        assert_eq!(format_char(&ctx, &chi), "chi(T+1; T^2)");
        assert_eq!(parse_char(&ctx, "chi(T+1;T^2)").unwrap(), chi);
        assert_eq!(parse_char(&ctx, " chi( T+1 ; T^2 ) ").unwrap(), chi);
        assert!(parse_char(&ctx, "chi(T+1)").is_err());
        let sigma = GaloisElem::new(&ctx, &parse_poly(&ctx, "2").unwrap(), &t2).unwrap();
        assert_eq!(format_galois(&ctx, &sigma), "2 mod T^2");
        assert_eq!(parse_galois(&ctx, "2 mod T^2").unwrap(), sigma);
        assert!(parse_galois(&ctx, "T mod T^2").is_err());
    }

    #[test]
    fn expression_examples() {
        let ctx = ctx_q(2);
        let x = parse_expr(&ctx, "mu(T)*e(1/T)*mu*(T+1)").unwrap();
        assert_eq!(x.terms().len(), 1);
        let (key, c) = x.terms().iter().next().unwrap();
        assert_eq!(format_poly(&ctx, key.a().gen()), "T");
        assert_eq!(format_poly(&ctx, key.b().gen()), "T+1");
        assert_eq!(format_frac(&ctx, key.lam()), "1/T");
        assert!(c.is_one());
        // normalization through the basis constructor
        let y = parse_expr(&ctx, "mu(T)*mu*(T)").unwrap();
        let t = MonicIdeal::new(&ctx, &parse_poly(&ctx, "T").unwrap()).unwrap();
        assert_eq!(y, basis_elem(&ctx, &t, &TorsionPoint::zero(), &t));
        assert_eq!(format_elem(&ctx, &y), "(1/2)*e(0)+(1/2)*e(1/T)");
        // scalars, zeta powers, signs
        let ctx3 = ctx_q(3);
        let z = parse_expr(&ctx3, "(1/2)*e(0) + z^1*e(1/T)").unwrap();
        assert_eq!(z.terms().len(), 2);
        assert_eq!(
            z.coeff(&BasisKey::unit()),
            UScalar::from_rational(3, rat(1, 2))
        );
        let lam = parse_frac(&ctx3, "1/T").unwrap();
        let ekey = BasisKey::new(&ctx3, &MonicIdeal::unit(), &lam, &MonicIdeal::unit()).unwrap();
        assert_eq!(z.coeff(&ekey), UScalar::from_cyclo(Cyclo::zeta_pow(3, 1)));
        // z alone means z^1; u exponents may be negative
        assert_eq!(parse_expr(&ctx3, "z*e(1/T)").unwrap(), parse_expr(&ctx3, "z^1*e(1/T)").unwrap());
        let w = parse_expr(&ctx3, "u^-2*mu(T)").unwrap();
        assert_eq!(
            w,
            AlgebraElem::mu(&ctx3, &MonicIdeal::new(&ctx3, &Poly::t()).unwrap())
                .scale(&UScalar::u_pow(3, -2))
        );
        // parenthesized subexpressions multiply out
        let dist = parse_expr(&ctx, "mu(T)*(e(1/T)+e(0))*mu*(T)").unwrap();
        let viaterms = parse_expr(&ctx, "mu(T)*e(1/T)*mu*(T)+mu(T)*e(0)*mu*(T)").unwrap();
        assert_eq!(dist, viaterms);
        // subtraction and the zero element
        assert!(parse_expr(&ctx, "e(1/T)-e(1/T)").unwrap().is_zero());
        assert!(parse_expr(&ctx, "0").unwrap().is_zero());
        assert_eq!(format_elem(&ctx, &AlgebraElem::zero(&ctx)), "0");
        assert_eq!(
            format_elem(&ctx, &parse_expr(&ctx, "-e(1/T)").unwrap()),
            "-e(1/T)"
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let ctx = ctx_q(2);
        for (text, want_pos) in [
            ("", 0usize),
            ("foo", 0),
            ("mu(T", 4),
            ("e(1/T", 5),
            ("mu(T+1)*", 8),
            ("e(1/T))", 6),
            ("mu(2*T)", 3),
        ] {
            match parse_expr(&ctx, text) {
                Err(Error::Parse { pos, .. }) => {
                    assert_eq!(pos, want_pos, "position for {text:?}")
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
        // non-monic ideal argument is rejected at its position
        let ctx3 = ctx_q(3);
        assert!(matches!(
            parse_expr(&ctx3, "mu(2*T)"),
            Err(Error::Parse { pos: 3, .. })
        ));
    }

    #[test]
    fn round_trips_random() {
        for q in [2u32, 3] {
            let ctx = ctx_q(q);
            let mut rng = StdRng::seed_from_u64(5);
            for _ in 0..40 {
                let mut x = AlgebraElem::zero(&ctx);
                for _ in 0..rng.random_range(1..=3) {
                    let pick = |rng: &mut StdRng| {
                        let d = rng.random_range(0..=2usize);
                        let all = enumerate_monic(&ctx, d, false);
                        MonicIdeal::new(&ctx, &all[rng.random_range(0..all.len())]).unwrap()
                    };
                    let a = pick(&mut rng);
                    let b = pick(&mut rng);
                    let c = pick(&mut rng);
                    let lams = torsion_group(&ctx, &c, false);
                    let lam = lams[rng.random_range(0..lams.len())].clone();
                    let r = [rat(1, 1), rat(-2, 3), rat(1, 2)][rng.random_range(0..3)].clone();
                    let zc = Cyclo::zeta_pow(ctx.p, rng.random_range(0..ctx.p) as i64).scale(&r);
                    let coeff = UScalar::monomial(rng.random_range(-2..=2), zc);
                    x = x.add(&basis_elem(&ctx, &a, &lam, &b).scale(&coeff));
                }
                let text = format_elem(&ctx, &x);
                assert_eq!(parse_expr(&ctx, &text).unwrap(), x, "text round trip {text}");
                let v = elem_to_json(&ctx, &x);
                assert_eq!(elem_from_json(&ctx, &v).unwrap(), x, "json round trip");
            }
        }
    }

    #[test]
    fn json_shape() {
        let ctx = ctx_q(2);
        let x = parse_expr(&ctx, "u^1*mu(T)*e(1/T)*mu*(T+1)").unwrap();
        let v = elem_to_json(&ctx, &x);
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        let t = &arr[0];
        assert_eq!(t["a"], "T");
        assert_eq!(t["b"], "T+1");
        assert_eq!(t["lambda"]["num"], "1");
        assert_eq!(t["lambda"]["den"], "T");
        assert_eq!(t["coeff"][0]["u_pow"], 1);
        assert_eq!(t["coeff"][0]["cyclo"][0], "1");
        // non-coprime JSON data still normalizes on the way in
        let crooked = json!([{
            "a": "T", "b": "T",
            "lambda": {"num": "0", "den": "1"},
            "coeff": [{"u_pow": 0, "cyclo": ["2"]}],
        }]);
        let y = elem_from_json(&ctx, &crooked).unwrap();
        let t_ideal = MonicIdeal::new(&ctx, &Poly::t()).unwrap();
        assert_eq!(
            y,
            basis_elem(&ctx, &t_ideal, &TorsionPoint::zero(), &t_ideal).scale_rational(&rat(2, 1))
        );
        assert!(elem_from_json(&ctx, &json!({})).is_err());
        assert!(elem_from_json(&ctx, &json!([{"a": "T"}])).is_err());
    }

    #[test]
    fn extension_field_expressions() {
        let ctx = ctx_q(4);
        let text = "mu([1]*T)*e([x]/([1]*T^2+[x+1]))";
        let x = parse_expr(&ctx, text).unwrap();
        assert_eq!(parse_expr(&ctx, &format_elem(&ctx, &x)).unwrap(), x);
        let v = elem_to_json(&ctx, &x);
        assert_eq!(elem_from_json(&ctx, &v).unwrap(), x);
    }
}
