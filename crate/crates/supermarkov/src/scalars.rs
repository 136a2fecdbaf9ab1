//! Exact coefficient rings: arbitrary-precision rationals and Laurent
//! polynomials in named variables with half-integer exponents.
//!
//! Everything downstream (Grassmann algebra, supermatrices, dimer sums,
//! recurrences) is generic over [`Scalar`], so the unit-weight mode
//! (rational coefficients) and the weighted mode (Laurent coefficients in
//! `x, y, z` with exponents in (1/2)Z) share a single code path.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Shorthand for building a `Rational` from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for building a `Rational` fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Result<Rational> {
    if r.is_negative() {
        return Err(Error::NonSquare(format!("{}", render_rational(r))));
    }
    let sqrt_part = |n: &BigInt| -> Result<BigInt> {
        let s = n.sqrt();
        if &(&s * &s) == n {
            Ok(s)
        } else {
            Err(Error::NonSquare(render_rational(r)))
        }
    };
    Ok(Rational::new(sqrt_part(r.numer())?, sqrt_part(r.denom())?))
}

/// Exact integer power of a rational; negative exponents invert.
pub fn rational_pow(r: &Rational, e: i64) -> Result<Rational> {
    let mag = u32::try_from(e.unsigned_abs())
        .map_err(|_| Error::Unsupported(format!("exponent {e} out of range")))?;
    if e >= 0 {
        Ok(Rational::new(r.numer().pow(mag), r.denom().pow(mag)))
    } else if Zero::is_zero(r) {
        Err(Error::DivisionByZero)
    } else {
        Ok(Rational::new(r.denom().pow(mag), r.numer().pow(mag)))
    }
}

/// Canonical text for a rational: `num/den`, or just `num` when `den` is 1.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The scalar-ring interface every higher module is generic over.
///
/// Exactly two rings implement it: [`Rational`] and [`LaurentPoly`].
/// All operations are exact; there are no floating-point escapes.
pub trait Scalar: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    /// Exact multiplicative inverse. Rationals invert unless zero; Laurent
    /// polynomials invert only when they are a single monomial.
    fn inv(&self) -> Result<Self>;
    /// Exact division with a zero remainder required; errors otherwise.
    fn exact_div(&self, den: &Self) -> Result<Self>;
    /// Canonical text rendering (deterministic term order, no floats).
    fn render(&self) -> String;
    /// Rendering suitable for use as a factor in a product, wrapping
    /// multi-term values in parentheses.
    fn render_factor(&self) -> String {
        self.render()
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn from_int(n: i64) -> Self {
        rat(n)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn exact_div(&self, den: &Self) -> Result<Self> {
        if Zero::is_zero(den) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / den)
        }
    }
    fn render(&self) -> String {
        render_rational(self)
    }
}

/// Scalars usable as edge/arc weights: they know the λ-length of a named
/// initial arc and can take exact square roots of monomial values.
///
/// In the unit ring every λ-length is 1 and every monomial is 1, so the
/// rational implementation is trivial; the Laurent implementation carries
/// the actual variables.
pub trait WeightScalar: Scalar {
    /// λ-length of the initial arc named `var` (one of `"x"`, `"y"`, `"z"`).
    fn lambda(var: &str) -> Self;
    /// Exact square root of a monomial value (cycle weights are always
    /// perfect-square monomials).
    fn monomial_sqrt(&self) -> Result<Self>;
}

impl WeightScalar for Rational {
    fn lambda(_var: &str) -> Self {
        <Rational as One>::one()
    }
    fn monomial_sqrt(&self) -> Result<Self> {
        rational_sqrt(self)
    }
}

/// Variable-name → exponent in half-steps (true exponent = count / 2).
/// Variables with zero exponent are never stored.
pub type Exponents = BTreeMap<String, i64>;

/// A single monomial `c * Π v^(h_v / 2)` with exact rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfMonomial {
    pub coefficient: Rational,
    pub exponents: Exponents,
}

impl HalfMonomial {
    pub fn new(coefficient: Rational, exponents: Exponents) -> Self {
        let exponents = if Zero::is_zero(&coefficient) {
            Exponents::new()
        } else {
            exponents.into_iter().filter(|(_, h)| *h != 0).collect()
        };
        HalfMonomial {
            coefficient,
            exponents,
        }
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.insert_term(self.exponents.clone(), self.coefficient.clone());
        p
    }
}

/// Exact square root of a monomial: the coefficient must be a perfect
/// square and every exponent must be an integer (even half-step count).
pub fn monomial_sqrt(m: &HalfMonomial) -> Result<HalfMonomial> {
    let coefficient = rational_sqrt(&m.coefficient)?;
    let mut exponents = Exponents::new();
    for (v, h) in &m.exponents {
        if h % 2 != 0 {
            return Err(Error::NonSquare(format!(
                "{}: exponent of `{v}` is not an integer",
                m.to_poly().render()
            )));
        }
        exponents.insert(v.clone(), h / 2);
    }
    Ok(HalfMonomial::new(coefficient, exponents))
}

/// Laurent polynomial in named variables with half-integer exponents and
/// exact rational coefficients. Terms are kept in a canonical order
/// (lexicographic by variable name, then exponent) with no zero terms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl LaurentPoly {
    pub fn constant(c: Rational) -> Self {
        let mut p = LaurentPoly::default();
        p.insert_term(Exponents::new(), c);
        p
    }

    /// The variable `name` (exponent 1, i.e. two half-steps).
    pub fn var(name: &str) -> Self {
        Self::monomial(<Rational as One>::one(), &[(name, 2)])
    }

    /// Monomial from a coefficient and `(variable, half-step-count)` pairs.
    pub fn monomial(coefficient: Rational, halves: &[(&str, i64)]) -> Self {
        let mut exponents = Exponents::new();
        for (v, h) in halves {
            if *h != 0 {
                *exponents.entry((*v).to_string()).or_insert(0) += h;
            }
        }
        exponents.retain(|_, h| *h != 0);
        let mut p = LaurentPoly::default();
        p.insert_term(exponents, coefficient);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(&mut self, exp: Exponents, c: Rational) {
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if Zero::is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// The polynomial as a single monomial, if it is one.
    pub fn as_monomial(&self) -> Option<HalfMonomial> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some(HalfMonomial::new(c.clone(), e.clone()))
        } else {
            None
        }
    }

    /// Exact evaluation with every variable assigned a nonzero rational.
    /// Half-integer exponents require the assigned value to be a perfect
    /// square.
    pub fn substitute(&self, assignment: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut total = <Rational as Zero>::zero();
        for (exp, c) in &self.terms {
            let mut acc = c.clone();
            for (v, h) in exp {
                let val = assignment
                    .get(v)
                    .ok_or_else(|| Error::UnassignedVariable(v.clone()))?;
                if Zero::is_zero(val) {
                    return Err(Error::ZeroAssignment(v.clone()));
                }
                let factor = if h % 2 == 0 {
                    rational_pow(val, h / 2)?
                } else {
                    let root = rational_sqrt(val)?;
                    rational_pow(&root, *h)?
                };
                acc *= factor;
            }
            total += acc;
        }
        Ok(total)
    }

    /// All variable names appearing in the polynomial.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for e in self.terms.keys() {
            out.extend(e.keys().cloned());
        }
        out
    }

    fn render_term(exp: &Exponents, c: &Rational, is_first: bool) -> String {
        let mut parts: Vec<String> = Vec::new();
        let abs = c.abs();
        if exp.is_empty() || !One::is_one(&abs) {
            parts.push(render_rational(&abs));
        }
        for (v, h) in exp {
            parts.push(match *h {
                2 => v.clone(),
                h if h % 2 == 0 && h > 0 => format!("{v}^{}", h / 2),
                h if h % 2 == 0 => format!("{v}^({})", h / 2),
                h => format!("{v}^({h}/2)"),
            });
        }
        let unsigned = parts.join("*");
        if is_first {
            if c.is_negative() {
                format!("-{unsigned}")
            } else {
                unsigned
            }
        } else if c.is_negative() {
            format!(" - {unsigned}")
        } else {
            format!(" + {unsigned}")
        }
    }
}

impl Scalar for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::default()
    }
    fn one() -> Self {
        LaurentPoly::constant(<Rational as One>::one())
    }
    fn from_int(n: i64) -> Self {
        LaurentPoly::constant(rat(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.is_empty() && One::is_one(c))
                .unwrap_or(false)
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                for (v, h) in eb {
                    let slot = e.entry(v.clone()).or_insert(0);
                    *slot += h;
                    if *slot == 0 {
                        e.remove(v);
                    }
                }
                out.insert_term(e, ca * cb);
            }
        }
        out
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.as_monomial().ok_or_else(|| {
            Error::NotInvertible(format!("non-monomial Laurent polynomial {}", self.render()))
        })?;
        let coefficient = m.coefficient.recip();
        let exponents: Exponents = m.exponents.iter().map(|(v, h)| (v.clone(), -h)).collect();
        Ok(HalfMonomial::new(coefficient, exponents).to_poly())
    }
    fn exact_div(&self, den: &Self) -> Result<Self> {
        laurent_exact_div(self, den)
    }
    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            out.push_str(&Self::render_term(e, c, i == 0));
        }
        out
    }
    fn render_factor(&self) -> String {
        if self.terms.len() > 1 {
            format!("({})", self.render())
        } else {
            self.render()
        }
    }
}

impl WeightScalar for LaurentPoly {
    fn lambda(var: &str) -> Self {
        LaurentPoly::var(var)
    }
    fn monomial_sqrt(&self) -> Result<Self> {
        let m = self
            .as_monomial()
            .ok_or_else(|| Error::NonSquare(format!("non-monomial value {}", self.render())))?;
        Ok(monomial_sqrt(&m)?.to_poly())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Exact multivariate division `num / den` with zero remainder required.
///
/// Both operands are shifted into the ordinary polynomial ring by stripping
/// per-variable minimum exponents (monomial content), then divided by long
/// division under the lexicographic order on dense exponent vectors; the
/// quotient is shifted back. Any nonzero remainder is an error — Laurent
/// divisibility in this crate is always a structural fact (cluster-algebra
/// style), never an approximation.
fn laurent_exact_div(num: &LaurentPoly, den: &LaurentPoly) -> Result<LaurentPoly> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    let mut varset: BTreeSet<&String> = BTreeSet::new();
    for e in num.terms.keys().chain(den.terms.keys()) {
        varset.extend(e.keys());
    }
    let vars: Vec<String> = varset.into_iter().cloned().collect();
    let dense = |e: &Exponents| -> Vec<i64> {
        vars.iter().map(|v| e.get(v).copied().unwrap_or(0)).collect()
    };
    let min_vec = |p: &LaurentPoly| -> Vec<i64> {
        let mut m = vec![i64::MAX; vars.len()];
        for e in p.terms.keys() {
            for (slot, val) in m.iter_mut().zip(dense(e)) {
                *slot = (*slot).min(val);
            }
        }
        m
    };
    let nmin = min_vec(num);
    let dmin = min_vec(den);
    let shift = |p: &LaurentPoly, base: &[i64]| -> BTreeMap<Vec<i64>, Rational> {
        p.terms
            .iter()
            .map(|(e, c)| {
                let mut d = dense(e);
                for (slot, b) in d.iter_mut().zip(base) {
                    *slot -= b;
                }
                (d, c.clone())
            })
            .collect()
    };
    let mut rem = shift(num, &nmin);
    let dpoly: Vec<(Vec<i64>, Rational)> = shift(den, &dmin).into_iter().collect();
    let (dlead_m, dlead_c) = dpoly.last().cloned().expect("divisor has terms");

    let mut quot: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    while let Some((rm, rc)) = rem.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) {
        let mut qm = vec![0i64; vars.len()];
        for (slot, (r, d)) in qm.iter_mut().zip(rm.iter().zip(&dlead_m)) {
            *slot = r - d;
            if *slot < 0 {
                return Err(Error::NotExact(format!(
                    "{} does not divide {}",
                    den.render(),
                    num.render()
                )));
            }
        }
        let qc = &rc / &dlead_c;
        for (dm, dc) in &dpoly {
            let mut m = qm.clone();
            for (slot, d) in m.iter_mut().zip(dm) {
                *slot += d;
            }
            let delta = &qc * dc;
            match rem.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(-delta);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let v = e.get() - &delta;
                    if Zero::is_zero(&v) {
                        e.remove();
                    } else {
                        *e.get_mut() = v;
                    }
                }
            }
        }
        quot.insert(qm, qc);
    }

    let mut out = LaurentPoly::zero();
    for (qm, qc) in quot {
        let mut exps = Exponents::new();
        for (i, v) in vars.iter().enumerate() {
            let h = qm[i] + nmin[i] - dmin[i];
            if h != 0 {
                exps.insert(v.clone(), h);
            }
        }
        out.insert_term(exps, qc);
    }
    Ok(out)
}
