//! Python bindings for the ffbc workbench.
//!
//! A [`Workbench`] fixes the base field F_q and exposes the same
//! operations as the command line tool: places and zeta values, Carlitz
//! torsion, characters and the Galois action, Hecke algebra elements
//! built from the expression grammar (`mu(a)`, `mu*(b)`, `e(r/c)`, sums
//! and products), state evaluation, the representation oracle, and the
//! verification suites.  Inputs and outputs are plain strings in the
//! canonical text forms, so values round-trip through the parser.
//!
//! State values are exact by default (a Laurent polynomial in u, or a
//! quotient of two); passing `beta` evaluates at u = q^(-beta) and
//! returns a float, or a complex number when the imaginary part is not
//! negligible.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict, PyFloat, PyString};

use ffbc::carlitz::{
    carlitz_phi, ideal_arith_functions, torsion_act, torsion_add, torsion_group,
};
use ffbc::characters::{
    all_chars, artin, char_eval, extend_admissible, galois_act_char, galois_group, is_admissible,
};
use ffbc::ffpoly::{enumerate_monic, factor_monic, Ctx, MonicIdeal};
use ffbc::hecke::{adjoint, cond_expectation, galois_act_alg, kms_twist, mul, AlgebraElem};
use ffbc::parser::{
    elem_to_json, format_char, format_elem, format_frac, format_galois, format_poly, parse_char,
    parse_expr, parse_frac, parse_galois, parse_poly,
};
use ffbc::places_zeta::{place_count_table, weil_identity_check, zeta_closed, zeta_evaluate};
use ffbc::repr::{build_rep, mul_oracle_check};
use ffbc::states::{
    gibbs_closed, gibbs_value_partial_zeta, kms_verify, partition_function, phi_beta,
    theta_series, PartitionMode, StateKind, StateValue,
};
use ffbc::verify::{prime_power, run_suite, VerifyConfig};

fn err(e: ffbc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn same_field(a: &Ctx, b: &Ctx) -> bool {
    a.p == b.p && a.e == b.e && a.modulus == b.modulus
}

fn ideal(ctx: &Ctx, text: &str) -> PyResult<MonicIdeal> {
    let f = parse_poly(ctx, text).map_err(err)?;
    MonicIdeal::new(ctx, &f).map_err(err)
}

/// "num" when the denominator is one, "(num) / (den)" otherwise.
fn exact_display(v: &StateValue) -> PyResult<String> {
    match v.as_exact() {
        Some((num, den)) => Ok(if den.is_one() {
            num.to_string()
        } else {
            format!("({}) / ({})", num, den)
        }),
        None => Err(PyValueError::new_err("state value is not exact")),
    }
}

fn complex_to_py(py: Python<'_>, v: num_complex::Complex64) -> Py<PyAny> {
    if v.im.abs() <= 1e-12 * (1.0 + v.re.abs()) {
        PyFloat::new(py, v.re).into_any().unbind()
    } else {
        PyComplex::from_doubles(py, v.re, v.im).into_any().unbind()
    }
}

/// Exact display string, or a number when a beta is supplied.
fn value_to_py(
    py: Python<'_>,
    ctx: &Ctx,
    v: &StateValue,
    beta: Option<f64>,
) -> PyResult<Py<PyAny>> {
    match beta {
        None => Ok(PyString::new(py, &exact_display(v)?).into_any().unbind()),
        Some(b) => match v.numeric(ctx, b).map_err(err)? {
            StateValue::Numeric { value, .. } => Ok(complex_to_py(py, value)),
            StateValue::Exact { .. } => {
                Err(PyValueError::new_err("numeric evaluation stayed exact"))
            }
        },
    }
}

/// An element of the Hecke algebra in canonical basis form, tied to the
/// workbench it was created by.
#[pyclass(frozen)]
pub struct Element {
    ctx: Ctx,
    elem: AlgebraElem,
}

impl Element {
    fn bind(&self, other: &Element) -> PyResult<()> {
        if same_field(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(PyValueError::new_err(
                "elements belong to workbenches over different fields",
            ))
        }
    }
}

#[pymethods]
impl Element {
    fn __repr__(&self) -> String {
        format_elem(&self.ctx, &self.elem)
    }

    fn __str__(&self) -> String {
        format_elem(&self.ctx, &self.elem)
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        match other.extract::<PyRef<Element>>() {
            Ok(o) => same_field(&self.ctx, &o.ctx) && self.elem == o.elem,
            Err(_) => false,
        }
    }

    fn __add__(&self, other: PyRef<'_, Element>) -> PyResult<Element> {
        self.bind(&other)?;
        Ok(Element { ctx: self.ctx.clone(), elem: self.elem.add(&other.elem) })
    }

    fn __sub__(&self, other: PyRef<'_, Element>) -> PyResult<Element> {
        self.bind(&other)?;
        Ok(Element { ctx: self.ctx.clone(), elem: self.elem.sub(&other.elem) })
    }

    fn __mul__(&self, other: PyRef<'_, Element>) -> PyResult<Element> {
        self.bind(&other)?;
        Ok(Element { ctx: self.ctx.clone(), elem: mul(&self.ctx, &self.elem, &other.elem) })
    }

    fn __neg__(&self) -> Element {
        Element { ctx: self.ctx.clone(), elem: self.elem.neg() }
    }

    /// The *-algebra adjoint.
    fn adjoint(&self) -> Element {
        Element { ctx: self.ctx.clone(), elem: adjoint(&self.ctx, &self.elem) }
    }

    /// Formal time evolution: each word mu_a e(lam) mu*_b picks up the
    /// factor u^(n (deg a - deg b)).
    fn twist(&self, n: i64) -> Element {
        Element { ctx: self.ctx.clone(), elem: kms_twist(&self.elem, n) }
    }

    /// Conditional expectation onto the Galois-fixed subalgebra.
    fn expect(&self) -> Element {
        Element { ctx: self.ctx.clone(), elem: cond_expectation(&self.ctx, &self.elem) }
    }

    #[getter]
    fn num_terms(&self) -> usize {
        self.elem.terms().len()
    }

    #[getter]
    fn is_zero(&self) -> bool {
        self.elem.is_zero()
    }

    /// Largest leg degree over all terms.
    #[getter]
    fn max_degree(&self) -> usize {
        self.elem.max_ideal_deg()
    }

    /// Generator of the lcm of the label annihilators.
    #[getter]
    fn ann_level(&self) -> String {
        format_poly(&self.ctx, self.elem.ann_lcm(&self.ctx).gen())
    }

    /// JSON text of the canonical term list.
    fn to_json(&self) -> String {
        elem_to_json(&self.ctx, &self.elem).to_string()
    }
}

/// The workbench for one base field F_q.
///
/// `Workbench(q)` for prime or prime-power q; for q = p^e with e > 1 an
/// optional `modulus` gives the defining polynomial over F_p as a list
/// of ascending coefficients (a built-in default is used when omitted).
#[pyclass(frozen)]
pub struct Workbench {
    ctx: Ctx,
}

#[pymethods]
impl Workbench {
    #[new]
    #[pyo3(signature = (q, modulus=None))]
    fn new(q: u32, modulus: Option<Vec<u8>>) -> PyResult<Workbench> {
        let (p, e) = prime_power(q).map_err(err)?;
        let ctx = Ctx::new(p, e, modulus).map_err(err)?;
        Ok(Workbench { ctx })
    }

    fn __repr__(&self) -> String {
        format!("Workbench(q={})", self.ctx.q)
    }

    #[getter]
    fn q(&self) -> u32 {
        self.ctx.q
    }

    #[getter]
    fn p(&self) -> u32 {
        self.ctx.p
    }

    #[getter]
    fn e(&self) -> u32 {
        self.ctx.e
    }

    #[getter]
    fn modulus(&self) -> Option<Vec<u8>> {
        self.ctx.modulus.clone()
    }

    // ---- places and zeta ----

    /// Numbers of places of norm q^n for n = 1..max_norm, as a dict.
    fn places(&self, max_norm: usize) -> PyResult<std::collections::BTreeMap<usize, u64>> {
        Ok(place_count_table(&self.ctx, max_norm).map_err(err)?.by_norm)
    }

    /// Point count identity over F_{q^n}: sum of m Q(q^m) over m | n
    /// against q^n + 1.
    fn weil_check(&self, py: Python<'_>, n: usize) -> PyResult<Py<PyDict>> {
        let r = weil_identity_check(&self.ctx, n).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("n", r.n)?;
        d.set_item("lhs", r.lhs)?;
        d.set_item("rhs", r.rhs)?;
        d.set_item("pass", r.pass)?;
        Ok(d.unbind())
    }

    /// The zeta function of the affine line as a rational function of u.
    fn zeta_closed(&self) -> String {
        zeta_closed(&self.ctx).to_string()
    }

    /// Numeric zeta value at real beta > 1 with a degree-maxdeg
    /// truncation and its geometric tail bound.
    #[pyo3(signature = (beta, maxdeg=12))]
    fn zeta_eval(&self, py: Python<'_>, beta: f64, maxdeg: usize) -> PyResult<Py<PyDict>> {
        let r = zeta_evaluate(&self.ctx, beta, maxdeg).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("closed", r.closed)?;
        d.set_item("truncated", r.truncated)?;
        d.set_item("tail_bound", r.tail_bound)?;
        Ok(d.unbind())
    }

    /// Truncated partition sum against the closed form 1/(1-qu),
    /// formally or at a numeric beta.
    #[pyo3(signature = (maxdeg=12, beta=None))]
    fn partition(&self, py: Python<'_>, maxdeg: usize, beta: Option<f64>) -> PyResult<Py<PyDict>> {
        let mode = match beta {
            Some(b) => PartitionMode::Numeric(b),
            None => PartitionMode::Formal,
        };
        let r = partition_function(&self.ctx, &mode, maxdeg).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("truncated", r.truncated.to_string())?;
        d.set_item("closed", r.closed.to_string())?;
        d.set_item("truncated_value", r.truncated_value)?;
        d.set_item("closed_value", r.closed_value)?;
        d.set_item("discrepancy", r.discrepancy)?;
        d.set_item("tail_bound", r.tail_bound)?;
        d.set_item("pass", r.pass)?;
        Ok(d.unbind())
    }

    // ---- polynomials and ideals ----

    /// Monic polynomials of the given degree, optionally only the
    /// irreducible ones.
    #[pyo3(signature = (degree, irreducible_only=false))]
    fn monics(&self, degree: usize, irreducible_only: bool) -> Vec<String> {
        enumerate_monic(&self.ctx, degree, irreducible_only)
            .iter()
            .map(|f| format_poly(&self.ctx, f))
            .collect()
    }

    /// Prime factorization of a monic polynomial as (prime, exponent)
    /// pairs.
    fn factor(&self, a: &str) -> PyResult<Vec<(String, u32)>> {
        let a = ideal(&self.ctx, a)?;
        Ok(factor_monic(&self.ctx, &a)
            .iter()
            .map(|(p, k)| (format_poly(&self.ctx, p.gen()), *k))
            .collect())
    }

    /// Order of the unit group of O/a.
    fn euler_phi(&self, a: &str) -> PyResult<u128> {
        Ok(ideal_arith_functions(&self.ctx, &ideal(&self.ctx, a)?).0)
    }

    /// Moebius function of a monic ideal.
    fn moebius(&self, a: &str) -> PyResult<i64> {
        Ok(ideal_arith_functions(&self.ctx, &ideal(&self.ctx, a)?).1)
    }

    // ---- Carlitz module and torsion ----

    /// Coefficients of the Carlitz polynomial phi_a as polynomials in T,
    /// ascending in powers of the Frobenius.
    fn carlitz(&self, py: Python<'_>, a: &str) -> PyResult<Py<PyDict>> {
        let f = parse_poly(&self.ctx, a).map_err(err)?;
        let phi = carlitz_phi(&self.ctx, &f);
        let d = PyDict::new(py);
        d.set_item(
            "coeffs",
            phi.coeffs.iter().map(|c| format_poly(&self.ctx, c)).collect::<Vec<_>>(),
        )?;
        d.set_item("display", phi.to_string())?;
        Ok(d.unbind())
    }

    /// The a-torsion of the Carlitz module: all points, or one generator
    /// per cyclic summand when generators_only is set.
    #[pyo3(signature = (level, generators_only=false))]
    fn torsion(&self, level: &str, generators_only: bool) -> PyResult<Vec<String>> {
        let a = ideal(&self.ctx, level)?;
        Ok(torsion_group(&self.ctx, &a, generators_only)
            .iter()
            .map(|lam| format_frac(&self.ctx, lam))
            .collect())
    }

    /// Carlitz action of the polynomial a on a torsion point.
    fn torsion_act(&self, a: &str, lam: &str) -> PyResult<String> {
        let f = parse_poly(&self.ctx, a).map_err(err)?;
        let x = parse_frac(&self.ctx, lam).map_err(err)?;
        Ok(format_frac(&self.ctx, &torsion_act(&self.ctx, &f, &x)))
    }

    /// Sum of two torsion points.
    fn torsion_add(&self, x: &str, y: &str) -> PyResult<String> {
        let a = parse_frac(&self.ctx, x).map_err(err)?;
        let b = parse_frac(&self.ctx, y).map_err(err)?;
        Ok(format_frac(&self.ctx, &torsion_add(&self.ctx, &a, &b)))
    }

    /// Monic generator of the annihilator ideal of a torsion point.
    fn annihilator(&self, lam: &str) -> PyResult<String> {
        let x = parse_frac(&self.ctx, lam).map_err(err)?;
        Ok(format_poly(&self.ctx, x.annihilator(&self.ctx).gen()))
    }

    // ---- characters and the Galois action ----

    /// All characters of the given level, as "chi(t; c)" strings.
    fn chars(&self, level: &str) -> PyResult<Vec<String>> {
        let c = ideal(&self.ctx, level)?;
        Ok(all_chars(&self.ctx, &c)
            .iter()
            .map(|chi| format_char(&self.ctx, chi))
            .collect())
    }

    /// Exponent k with chi(lam) = zeta_p^k, for lam in the level torsion.
    fn char_exponent(&self, chi: &str, lam: &str) -> PyResult<u8> {
        let chi = parse_char(&self.ctx, chi).map_err(err)?;
        let x = parse_frac(&self.ctx, lam).map_err(err)?;
        char_eval(&self.ctx, &chi, &x).map_err(err)
    }

    /// Character value as a complex number on the unit circle.
    fn char_value(&self, py: Python<'_>, chi: &str, lam: &str) -> PyResult<Py<PyAny>> {
        let k = self.char_exponent(chi, lam)? as f64;
        let angle = 2.0 * std::f64::consts::PI * k / self.ctx.p as f64;
        Ok(complex_to_py(py, num_complex::Complex64::from_polar(1.0, angle)))
    }

    /// Admissibility of a character: nontrivial on the kernel of every
    /// prime-level reduction.
    fn admissible(&self, py: Python<'_>, chi: &str) -> PyResult<Py<PyDict>> {
        let chi = parse_char(&self.ctx, chi).map_err(err)?;
        let r = is_admissible(&self.ctx, &chi);
        let d = PyDict::new(py);
        d.set_item("overall", r.overall)?;
        d.set_item("vacuous", r.vacuous)?;
        d.set_item(
            "per_prime",
            r.per_prime
                .iter()
                .map(|(p, ok)| (format_poly(&self.ctx, p.gen()), *ok))
                .collect::<Vec<_>>(),
        )?;
        Ok(d.unbind())
    }

    /// Admissible extension of a character to a multiple of its level.
    fn extend_char(&self, chi: &str, target: &str) -> PyResult<String> {
        let chi = parse_char(&self.ctx, chi).map_err(err)?;
        let t = ideal(&self.ctx, target)?;
        let ext = extend_admissible(&self.ctx, &chi, &t).map_err(err)?;
        Ok(format_char(&self.ctx, &ext))
    }

    /// The Galois group of the level-c torsion extension, as
    /// "unit mod c" strings.
    fn galois_group(&self, level: &str) -> PyResult<Vec<String>> {
        let c = ideal(&self.ctx, level)?;
        Ok(galois_group(&self.ctx, &c)
            .iter()
            .map(|s| format_galois(&self.ctx, s))
            .collect())
    }

    /// Artin element of an ideal coprime to the level: multiplication
    /// by its generator on the torsion.
    fn artin(&self, a: &str, level: &str) -> PyResult<String> {
        let a = ideal(&self.ctx, a)?;
        let c = ideal(&self.ctx, level)?;
        let s = artin(&self.ctx, &a, &c).map_err(err)?;
        Ok(format_galois(&self.ctx, &s))
    }

    /// Galois action on a torsion point.
    fn galois_act_torsion(&self, sigma: &str, lam: &str) -> PyResult<String> {
        let s = parse_galois(&self.ctx, sigma).map_err(err)?;
        let x = parse_frac(&self.ctx, lam).map_err(err)?;
        Ok(format_frac(&self.ctx, &s.act(&self.ctx, &x).map_err(err)?))
    }

    /// Galois action on a character.
    fn galois_act_char(&self, sigma: &str, chi: &str) -> PyResult<String> {
        let s = parse_galois(&self.ctx, sigma).map_err(err)?;
        let chi = parse_char(&self.ctx, chi).map_err(err)?;
        let out = galois_act_char(&self.ctx, &s, &chi).map_err(err)?;
        Ok(format_char(&self.ctx, &out))
    }

    /// Galois action on an algebra element, through the labels.
    fn galois_act(&self, sigma: &str, x: PyRef<'_, Element>) -> PyResult<Element> {
        let s = parse_galois(&self.ctx, sigma).map_err(err)?;
        let out = galois_act_alg(&self.ctx, &s, &x.elem).map_err(err)?;
        Ok(Element { ctx: self.ctx.clone(), elem: out })
    }

    // ---- algebra elements ----

    /// Parse an expression in the canonical grammar: mu(a), mu*(b),
    /// e(r/c), integer scalars, +, -, *, parentheses.
    fn element(&self, expr: &str) -> PyResult<Element> {
        let elem = parse_expr(&self.ctx, expr).map_err(err)?;
        Ok(Element { ctx: self.ctx.clone(), elem })
    }

    /// The isometry mu_a of a monic ideal.
    fn mu(&self, a: &str) -> PyResult<Element> {
        let a = ideal(&self.ctx, a)?;
        Ok(Element { ctx: self.ctx.clone(), elem: AlgebraElem::mu(&self.ctx, &a) })
    }

    /// The adjoint isometry mu*_b.
    fn mu_star(&self, b: &str) -> PyResult<Element> {
        let b = ideal(&self.ctx, b)?;
        Ok(Element { ctx: self.ctx.clone(), elem: AlgebraElem::mu_star(&self.ctx, &b) })
    }

    /// The projection e(lam) of a torsion point.
    fn proj(&self, lam: &str) -> PyResult<Element> {
        let x = parse_frac(&self.ctx, lam).map_err(err)?;
        Ok(Element { ctx: self.ctx.clone(), elem: AlgebraElem::e(&self.ctx, &x) })
    }

    // ---- states ----

    /// The high-temperature state: keeps balanced diagonal words, with
    /// value u^(deg a) on mu_a e(lam) mu*_a at the zero label times the
    /// label projection weight.
    #[pyo3(signature = (x, beta=None))]
    fn phi(&self, py: Python<'_>, x: PyRef<'_, Element>, beta: Option<f64>) -> PyResult<Py<PyAny>> {
        let v = phi_beta(&self.ctx, &x.elem);
        value_to_py(py, &self.ctx, &v, beta)
    }

    /// Gibbs state of an admissible character; the character is first
    /// extended admissibly to cover the element's labels.
    #[pyo3(signature = (chi, x, beta=None))]
    fn gibbs(
        &self,
        py: Python<'_>,
        chi: &str,
        x: PyRef<'_, Element>,
        beta: Option<f64>,
    ) -> PyResult<Py<PyAny>> {
        let base = parse_char(&self.ctx, chi).map_err(err)?;
        let need = base.level().lcm(&self.ctx, &x.elem.ann_lcm(&self.ctx));
        let chi = extend_admissible(&self.ctx, &base, &need).map_err(err)?;
        let v = gibbs_closed(&self.ctx, &chi, &x.elem).map_err(err)?;
        value_to_py(py, &self.ctx, &v, beta)
    }

    /// Character sum over the monic orbit of a torsion point, cleared
    /// by the zeta denominator.
    #[pyo3(signature = (chi, lam, beta=None))]
    fn theta(&self, py: Python<'_>, chi: &str, lam: &str, beta: Option<f64>) -> PyResult<Py<PyAny>> {
        let chi = parse_char(&self.ctx, chi).map_err(err)?;
        let x = parse_frac(&self.ctx, lam).map_err(err)?;
        let v = theta_series(&self.ctx, &chi, &x).map_err(err)?;
        value_to_py(py, &self.ctx, &v, beta)
    }

    /// Gibbs value of a prime-level torsion projection assembled from
    /// partial zeta functions; agrees with the closed form.
    #[pyo3(signature = (chi, prime, lam, beta=None))]
    fn special_value(
        &self,
        py: Python<'_>,
        chi: &str,
        prime: &str,
        lam: &str,
        beta: Option<f64>,
    ) -> PyResult<Py<PyAny>> {
        let chi = parse_char(&self.ctx, chi).map_err(err)?;
        let p = ideal(&self.ctx, prime)?;
        let x = parse_frac(&self.ctx, lam).map_err(err)?;
        let v = gibbs_value_partial_zeta(&self.ctx, &chi, &p, &x).map_err(err)?;
        value_to_py(py, &self.ctx, &v, beta)
    }

    /// KMS exchange identity state(xy) = state(twist(y) x) for the
    /// given state: "phi" or a character string for its Gibbs state.
    fn kms_check(
        &self,
        py: Python<'_>,
        state: &str,
        x: PyRef<'_, Element>,
        y: PyRef<'_, Element>,
    ) -> PyResult<Py<PyDict>> {
        let kind = if state == "phi" {
            StateKind::PhiBeta
        } else {
            StateKind::Gibbs(parse_char(&self.ctx, state).map_err(err)?)
        };
        let r = kms_verify(&self.ctx, &kind, &x.elem, &y.elem).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("pass", r.pass)?;
        d.set_item("lhs", exact_display(&r.lhs)?)?;
        d.set_item("rhs", exact_display(&r.rhs)?)?;
        Ok(d.unbind())
    }

    // ---- representation ----

    /// Multiplicativity oracle on the degree-maxdeg truncation of the
    /// ideal-space representation: the matrix of x y against the product
    /// of matrices, on the interior block safe from truncation.
    fn oracle_check(
        &self,
        py: Python<'_>,
        chi: &str,
        maxdeg: usize,
        x: PyRef<'_, Element>,
        y: PyRef<'_, Element>,
    ) -> PyResult<Py<PyDict>> {
        let base = parse_char(&self.ctx, chi).map_err(err)?;
        let prod = mul(&self.ctx, &x.elem, &y.elem);
        let need = base
            .level()
            .lcm(&self.ctx, &x.elem.ann_lcm(&self.ctx))
            .lcm(&self.ctx, &y.elem.ann_lcm(&self.ctx))
            .lcm(&self.ctx, &prod.ann_lcm(&self.ctx));
        let chi = extend_admissible(&self.ctx, &base, &need).map_err(err)?;
        let rep = build_rep(&self.ctx, &chi, maxdeg).map_err(err)?;
        let r = mul_oracle_check(&self.ctx, &rep, &x.elem, &y.elem).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("pass", r.pass)?;
        d.set_item("safe_deg", r.safe_deg)?;
        d.set_item("max_discrepancy", r.max_discrepancy)?;
        d.set_item("dim", rep.dim())?;
        Ok(d.unbind())
    }

    // ---- verification ----

    /// Run one verification suite at this workbench's field.
    #[pyo3(signature = (name, maxdeg=2, seed=0, perturb=None))]
    fn run_suite(
        &self,
        py: Python<'_>,
        name: &str,
        maxdeg: usize,
        seed: u64,
        perturb: Option<String>,
    ) -> PyResult<Py<PyDict>> {
        let cfg = VerifyConfig {
            q: self.ctx.q,
            modulus: self.ctx.modulus.clone(),
            maxdeg,
            seed,
            perturb,
        };
        let r = run_suite(&cfg, name).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("name", r.name)?;
        d.set_item("law", r.law)?;
        d.set_item("pass", r.pass)?;
        d.set_item("cases", r.cases)?;
        d.set_item("witness", r.witness)?;
        d.set_item("millis", r.millis)?;
        Ok(d.unbind())
    }
}

/// Names of the verification suites, in catalog order.
#[pyfunction]
fn suite_names() -> Vec<String> {
    ffbc::verify::suite_names().iter().map(|s| s.to_string()).collect()
}

#[pymodule]
fn ffbc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Workbench>()?;
    m.add_class::<Element>()?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    Ok(())
}
