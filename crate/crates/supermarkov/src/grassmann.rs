//! Finite-dimensional Grassmann (exterior) algebra over a scalar ring.
//!
//! Values of this algebra are what all super λ-lengths, μ-invariants, and
//! supermatrix entries live in. An [`AlgebraContext`] fixes a finite list
//! of odd (anticommuting) generators; a [`GrassmannElement`] is a linear
//! combination of basis words over those generators, each word stored as a
//! bitmask of generator indices in a fixed storage order.
//!
//! The storage order is *only* a canonical form — semantic signs (the
//! "positive ordering" of μ-invariant products on a snake graph) are always
//! supplied externally, via the sign table passed to [`project_torus`].
//!
//! [`project_torus`]: GrassmannElement::project_torus

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::scalars::{LaurentPoly, Rational, Scalar};

/// What family of generator lists a context describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextKind {
    /// Two generators `sigma`, `theta` (the target of torus projection).
    Torus,
    /// Interleaved generators `sigma1, theta1, ..., sigman, thetan`
    /// carried by the 2n-tile torus snake graph.
    TorusFamily(usize),
    /// Generators `theta1, ..., thetaq, sigma{q+1}` decorating the ideal
    /// triangulation of an annulus with q marked points on one boundary.
    Annulus(usize),
}

/// A fixed, ordered list of odd generators.
///
/// `names[i]` is the display name of the generator with storage index `i`;
/// `display_ranks[i]` is its position in *display* order (the order words
/// are printed in, which may differ from the storage order).
#[derive(Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    kind: ContextKind,
    names: Vec<String>,
    display_ranks: Vec<usize>,
}

/// Maximum number of odd generators per context (words are u64 bitmasks).
pub const MAX_GENERATORS: usize = 64;

impl AlgebraContext {
    /// The two-generator algebra on `sigma`, `theta`.
    pub fn torus() -> Arc<AlgebraContext> {
        static CTX: OnceLock<Arc<AlgebraContext>> = OnceLock::new();
        CTX.get_or_init(|| {
            Arc::new(AlgebraContext {
                kind: ContextKind::Torus,
                names: vec!["sigma".into(), "theta".into()],
                display_ranks: vec![0, 1],
            })
        })
        .clone()
    }

    /// The 2n-generator algebra `sigma1, theta1, sigma2, theta2, ...`
    /// (storage order), displayed as `sigma1..sigman` then `theta1..thetan`.
    pub fn torus_family(n: usize) -> Result<Arc<AlgebraContext>> {
        if 2 * n > MAX_GENERATORS {
            return Err(Error::SizeLimit(2 * n, MAX_GENERATORS));
        }
        if n == 0 {
            return Err(Error::InvalidContext("torus family needs n >= 1".into()));
        }
        let mut names = Vec::with_capacity(2 * n);
        let mut display_ranks = Vec::with_capacity(2 * n);
        for k in 1..=n {
            names.push(format!("sigma{k}"));
            display_ranks.push(k - 1);
            names.push(format!("theta{k}"));
            display_ranks.push(n + k - 1);
        }
        Ok(Arc::new(AlgebraContext {
            kind: ContextKind::TorusFamily(n),
            names,
            display_ranks,
        }))
    }

    /// The (q+1)-generator algebra `theta1, ..., thetaq, sigma{q+1}`
    /// (storage order), displayed in the reverse order
    /// `sigma{q+1}, thetaq, ..., theta1`.
    pub fn annulus(q: usize) -> Result<Arc<AlgebraContext>> {
        if q + 1 > MAX_GENERATORS {
            return Err(Error::SizeLimit(q + 1, MAX_GENERATORS));
        }
        if q == 0 {
            return Err(Error::InvalidContext("annulus needs q >= 1".into()));
        }
        let mut names: Vec<String> = (1..=q).map(|k| format!("theta{k}")).collect();
        names.push(format!("sigma{}", q + 1));
        let count = q + 1;
        let display_ranks = (0..count).map(|i| count - 1 - i).collect();
        Ok(Arc::new(AlgebraContext {
            kind: ContextKind::Annulus(q),
            names,
            display_ranks,
        }))
    }

    pub fn kind(&self) -> ContextKind {
        self.kind
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_name(&self, index: usize) -> &str {
        &self.names[index]
    }

    /// Storage index of the generator with the given display name.
    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidContext(format!("no generator named `{name}`")))
    }

    /// Storage index of `sigma{k}` in a torus-family context (1-based k).
    pub fn family_sigma(&self, k: usize) -> usize {
        debug_assert!(matches!(self.kind, ContextKind::TorusFamily(n) if k >= 1 && k <= n));
        2 * k - 2
    }

    /// Storage index of `theta{k}` in a torus-family context (1-based k).
    pub fn family_theta(&self, k: usize) -> usize {
        debug_assert!(matches!(self.kind, ContextKind::TorusFamily(n) if k >= 1 && k <= n));
        2 * k - 1
    }

    /// Storage index of `theta{k}` in an annulus context (1-based k).
    pub fn annulus_theta(&self, k: usize) -> usize {
        debug_assert!(matches!(self.kind, ContextKind::Annulus(q) if k >= 1 && k <= q));
        k - 1
    }

    /// Storage index of `sigma{q+1}` in an annulus context.
    pub fn annulus_sigma(&self) -> usize {
        match self.kind {
            ContextKind::Annulus(q) => q,
            _ => unreachable!("annulus_sigma outside an annulus context"),
        }
    }

    /// The generators of `word` in display order, as (storage index) list,
    /// together with the sign of the permutation taking storage order to
    /// display order.
    fn display_order(&self, word: u64) -> (Vec<usize>, i64) {
        let mut idxs: Vec<usize> = (0..self.generator_count())
            .filter(|i| word >> i & 1 == 1)
            .collect();
        let ranks: Vec<usize> = idxs.iter().map(|&i| self.display_ranks[i]).collect();
        let mut inversions = 0u32;
        for a in 0..ranks.len() {
            for b in a + 1..ranks.len() {
                if ranks[a] > ranks[b] {
                    inversions += 1;
                }
            }
        }
        idxs.sort_by_key(|&i| self.display_ranks[i]);
        (idxs, if inversions % 2 == 0 { 1 } else { -1 })
    }

    /// Display-order word string, e.g. `sigma3*theta1`.
    pub fn word_name(&self, word: u64) -> String {
        let (idxs, _) = self.display_order(word);
        idxs.iter()
            .map(|&i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Sign relating the stored coefficient of `word` to the coefficient
    /// of the same word written in display order.
    pub fn display_sign(&self, word: u64) -> i64 {
        self.display_order(word).1
    }
}

/// Sign of moving every generator of `wb` past the generators of `wa` to
/// form the sorted word `wa | wb`; `None` when the words share a generator
/// (the product annihilates).
fn merge_sign(wa: u64, wb: u64) -> Option<i64> {
    if wa & wb != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = wb;
    while rest != 0 {
        let b = rest.trailing_zeros();
        rest &= rest - 1;
        if b < 63 {
            inversions += (wa >> (b + 1)).count_ones();
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// An element of the Grassmann algebra over a scalar ring `S`.
///
/// Terms map basis words (bitmasks over the context's storage order) to
/// nonzero coefficients; the empty word's coefficient is the *body*, the
/// rest are the *soul*.
#[derive(Clone, Debug)]
pub struct GrassmannElement<S: Scalar> {
    ctx: Arc<AlgebraContext>,
    terms: BTreeMap<u64, S>,
}

impl<S: Scalar> PartialEq for GrassmannElement<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.terms == other.terms
    }
}
impl<S: Scalar> Eq for GrassmannElement<S> {}

impl<S: Scalar> GrassmannElement<S> {
    pub fn zero(ctx: &Arc<AlgebraContext>) -> Self {
        GrassmannElement {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_scalar(ctx: &Arc<AlgebraContext>, value: S) -> Self {
        let mut out = Self::zero(ctx);
        out.insert_term(0, value);
        out
    }

    pub fn one(ctx: &Arc<AlgebraContext>) -> Self {
        Self::from_scalar(ctx, S::one())
    }

    pub fn from_int(ctx: &Arc<AlgebraContext>, n: i64) -> Self {
        Self::from_scalar(ctx, S::from_int(n))
    }

    /// The generator with the given storage index.
    pub fn generator(ctx: &Arc<AlgebraContext>, index: usize) -> Self {
        assert!(
            index < ctx.generator_count(),
            "generator index {index} out of range for a {}-generator context",
            ctx.generator_count()
        );
        let mut out = Self::zero(ctx);
        out.insert_term(1u64 << index, S::one());
        out
    }

    /// The generator with the given display name.
    pub fn generator_named(ctx: &Arc<AlgebraContext>, name: &str) -> Result<Self> {
        Ok(Self::generator(ctx, ctx.generator_index(name)?))
    }

    /// A single basis word with the given coefficient (stored orientation).
    pub fn word(ctx: &Arc<AlgebraContext>, word: u64, coefficient: S) -> Self {
        assert!(
            word >> ctx.generator_count() == 0,
            "word uses generators outside the context"
        );
        let mut out = Self::zero(ctx);
        out.insert_term(word, coefficient);
        out
    }

    /// The product `sigma*theta` in the two-generator torus context.
    pub fn sigma_theta() -> GrassmannElement<S> {
        let ctx = AlgebraContext::torus();
        GrassmannElement::word(&ctx, 0b11, S::one())
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn same_context(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    fn insert_term(&mut self, word: u64, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Stored terms in ascending word order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &S)> {
        self.terms.iter().map(|(w, c)| (*w, c))
    }

    /// Coefficient of a stored basis word (zero if absent).
    pub fn coefficient(&self, word: u64) -> S {
        self.terms.get(&word).cloned().unwrap_or_else(S::zero)
    }

    /// The empty-word coefficient.
    pub fn body(&self) -> S {
        self.coefficient(0)
    }

    /// Everything except the body.
    pub fn soul(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&0);
        out
    }

    /// Split into the body and the soul's display-ordered terms: each soul
    /// entry is (display word string, coefficient *in display orientation*),
    /// listed in ascending stored-word order.
    pub fn body_soul(&self) -> (S, Vec<(String, S)>) {
        let mut soul = Vec::new();
        for (&w, c) in &self.terms {
            if w == 0 {
                continue;
            }
            let sign = self.ctx.display_sign(w);
            let coeff = if sign >= 0 { c.clone() } else { c.neg() };
            soul.push((self.ctx.word_name(w), coeff));
        }
        (self.body(), soul)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every basis word has even length (a super number).
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|w| w.count_ones() % 2 == 0)
    }

    /// True when every basis word has odd length.
    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|w| w.count_ones() % 2 == 1)
    }

    fn assert_same_ctx(&self, other: &Self) {
        assert!(
            self.same_context(other),
            "Grassmann algebra context mismatch: {:?} vs {:?}",
            self.ctx.kind,
            other.ctx.kind
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_ctx(other);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert_term(*w, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GrassmannElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(w, c)| (*w, c.neg())).collect(),
        }
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ctx);
        }
        GrassmannElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(w, c)| (*w, c.mul(s))).collect(),
        }
    }

    /// Bilinear product with anticommuting generators: basis words merge
    /// with the sign of the sorting permutation, repeated generators
    /// annihilate.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_ctx(other);
        let mut out = Self::zero(&self.ctx);
        for (&wa, ca) in &self.terms {
            for (&wb, cb) in &other.terms {
                if let Some(sign) = merge_sign(wa, wb) {
                    let c = ca.mul(cb);
                    out.insert_term(wa | wb, if sign >= 0 { c } else { c.neg() });
                }
            }
        }
        out
    }

    /// Exact multiplicative inverse via the finite Neumann series
    /// `1/(b+s) = b⁻¹·Σ_k (−s/b)^k`, which terminates because the soul is
    /// nilpotent. Requires the body to be invertible in the scalar ring.
    pub fn inv(&self) -> Result<Self> {
        let body = self.body();
        if body.is_zero() {
            return Err(Error::NotInvertible(
                "Grassmann element with zero body".into(),
            ));
        }
        let inv_body = body.inv()?;
        let neumann_step = self.soul().scale(&inv_body).neg(); // −s/b
        let mut acc = Self::one(&self.ctx);
        let mut power = Self::one(&self.ctx);
        for _ in 0..self.ctx.generator_count() {
            power = power.mul(&neumann_step);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&inv_body))
    }

    /// Exact division `self / den` where the denominator's body need not be
    /// a unit of the scalar ring, only nonzero: multiply through by the
    /// conjugate `Σ_k (−1)^k s^k b^(m−k)` so the denominator becomes the
    /// pure scalar `b^(m+1)`, then divide coefficients exactly.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        self.assert_same_ctx(den);
        let b = den.body();
        if b.is_zero() {
            return Err(Error::NotInvertible(
                "division by a Grassmann element with zero body".into(),
            ));
        }
        let soul = den.soul();
        // Soul powers until they vanish (bounded by the generator count).
        let mut soul_powers = vec![Self::one(&self.ctx)];
        loop {
            let next = soul_powers.last().unwrap().mul(&soul);
            if next.is_zero() {
                break;
            }
            soul_powers.push(next);
        }
        let m = soul_powers.len() - 1;
        // b^0..b^(m+1)
        let mut body_powers = vec![S::one()];
        for _ in 0..=m {
            body_powers.push(body_powers.last().unwrap().mul(&b));
        }
        let mut conj = Self::zero(&self.ctx);
        for (k, sk) in soul_powers.iter().enumerate() {
            let term = sk.scale(&body_powers[m - k]);
            conj = if k % 2 == 0 {
                conj.add(&term)
            } else {
                conj.sub(&term)
            };
        }
        let numerator = self.mul(&conj);
        let denom_scalar = &body_powers[m + 1];
        let mut out = Self::zero(&self.ctx);
        for (&w, c) in &numerator.terms {
            out.insert_term(w, c.exact_div(denom_scalar)?);
        }
        Ok(out)
    }

    /// Integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.ctx);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Collapse a torus-family element onto the two-generator algebra:
    /// all `sigma_j` become `sigma`, all `theta_k` become `theta`, and each
    /// mixed word `sigma_j*theta_k` maps to `sign_of(j,k) * sigma*theta`.
    /// Words with more than one sigma or more than one theta vanish.
    ///
    /// `sign_of(j,k)` is the externally supplied positive-ordering sign for
    /// the product written sigma-first (1-based indices).
    pub fn project_torus(&self, sign_of: impl Fn(usize, usize) -> i64) -> Result<Self> {
        let n = match self.ctx.kind {
            ContextKind::TorusFamily(n) => n,
            k => {
                return Err(Error::InvalidContext(format!(
                    "torus projection needs a torus-family context, got {k:?}"
                )))
            }
        };
        let torus = AlgebraContext::torus();
        let mut out = Self::zero(&torus);
        for (&w, c) in &self.terms {
            let mut sigmas = Vec::new();
            let mut thetas = Vec::new();
            for k in 1..=n {
                if w >> (2 * k - 2) & 1 == 1 {
                    sigmas.push(k);
                }
                if w >> (2 * k - 1) & 1 == 1 {
                    thetas.push(k);
                }
            }
            if sigmas.len() > 1 || thetas.len() > 1 {
                continue; // repeated generator after identification
            }
            match (sigmas.first(), thetas.first()) {
                (None, None) => out.insert_term(0, c.clone()),
                (Some(_), None) => out.insert_term(0b01, c.clone()),
                (None, Some(_)) => out.insert_term(0b10, c.clone()),
                (Some(&j), Some(&k)) => {
                    // Stored word is ascending in storage order
                    // (sigma_j at 2j−2, theta_k at 2k−1): sigma-first
                    // exactly when j <= k; otherwise flip the sign to
                    // read the coefficient of sigma_j*theta_k.
                    let flip = if j <= k { 1 } else { -1 };
                    let total = flip * sign_of(j, k);
                    let c = match total {
                        1 => c.clone(),
                        -1 => c.neg(),
                        _ => continue,
                    };
                    out.insert_term(0b11, c);
                }
            }
        }
        Ok(out)
    }

    /// Canonical text form: body first, then soul words in ascending
    /// stored order with display-orientation coefficients.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (&w, stored) in &self.terms {
            let (word_str, c) = if w == 0 {
                (String::new(), stored.clone())
            } else {
                let sign = self.ctx.display_sign(w);
                (
                    self.ctx.word_name(w),
                    if sign >= 0 { stored.clone() } else { stored.neg() },
                )
            };
            let neg = c.render().starts_with('-');
            let mag = if neg { c.neg() } else { c.clone() };
            let mut piece = if word_str.is_empty() {
                mag.render()
            } else if mag.is_one() {
                word_str
            } else {
                format!("{}*{}", mag.render_factor(), word_str)
            };
            if first {
                if neg {
                    piece = format!("-{piece}");
                }
                out.push_str(&piece);
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&piece);
            }
        }
        out
    }

    /// JSON form `{"body": "...", "soul": {"<display word>": "...", ...}}`
    /// with soul keys in ascending stored-word order and coefficients in
    /// display orientation.
    pub fn to_json(&self) -> serde_json::Value {
        let (body, soul) = self.body_soul();
        let mut soul_map = serde_json::Map::new();
        for (word, c) in soul {
            soul_map.insert(word, serde_json::Value::String(c.render()));
        }
        serde_json::json!({
            "body": body.render(),
            "soul": serde_json::Value::Object(soul_map),
        })
    }
}

impl GrassmannElement<LaurentPoly> {
    /// Evaluate every coefficient at the given variable assignment,
    /// producing an element with rational coefficients.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, Rational>,
    ) -> Result<GrassmannElement<Rational>> {
        let mut out = GrassmannElement::<Rational>::zero(&self.ctx);
        for (&w, c) in &self.terms {
            out.insert_term(w, c.substitute(assignment)?);
        }
        Ok(out)
    }
}

impl<S: Scalar> fmt::Display for GrassmannElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
