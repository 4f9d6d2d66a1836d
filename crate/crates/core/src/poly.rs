//! Sparse commutative polynomials with exact rational coefficients.
//!
//! Variables live in a [`VariableContext`]. Lie-algebra coordinates come
//! first; auxiliary parameters such as `u` or `zinv` are appended after them
//! and flagged *formal*. Directional derivatives and Poisson brackets only
//! differentiate in the non-formal variables.
//!
//! Terms are kept in a hash map; iteration in canonical order (graded
//! lexicographic, leading term first) is available through
//! [`CPoly::sorted_terms`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
    formal: Vec<bool>,
}

impl VariableContext {
    /// Non-formal variables followed by formal ones.
    pub fn new<S: AsRef<str>>(names: &[S], formal: &[S]) -> Arc<Self> {
        let mut all: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut flags = vec![false; all.len()];
        for f in formal {
            all.push(f.as_ref().to_string());
            flags.push(true);
        }
        Arc::new(VariableContext { names: all, formal: flags })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of non-formal variables; these are always indices `0..lie_dim`.
    pub fn lie_dim(&self) -> usize {
        self.formal.iter().take_while(|f| !**f).count()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_formal(&self, i: usize) -> bool {
        self.formal[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same non-formal variables plus the given formal ones (existing formal
    /// variables are kept, new names appended).
    pub fn with_formal(&self, extra: &[&str]) -> Arc<Self> {
        let mut ctx = self.clone();
        for e in extra {
            if ctx.index_of(e).is_none() {
                ctx.names.push(e.to_string());
                ctx.formal.push(true);
            }
        }
        Arc::new(ctx)
    }

    /// Only the non-formal part.
    pub fn lie_part(&self) -> Arc<Self> {
        let d = self.lie_dim();
        Arc::new(VariableContext {
            names: self.names[..d].to_vec(),
            formal: vec![false; d],
        })
    }

    fn check_layout(&self) -> Result<()> {
        let d = self.lie_dim();
        if self.formal[d..].iter().all(|f| *f) {
            Ok(())
        } else {
            Err(Error::Parse("formal variables must follow all Lie coordinates".into()))
        }
    }
}

/// Sparse exponent vector: `(variable, exponent)` pairs sorted by variable,
/// exponents strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(u32, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial(smallvec::smallvec![(i as u32, 1)])
    }

    /// Builds from arbitrary pairs; merges duplicates, drops zero exponents.
    pub fn from_pairs(pairs: &[(usize, u32)]) -> Self {
        let mut m: BTreeMap<u32, u32> = BTreeMap::new();
        for &(v, e) in pairs {
            *m.entry(v as u32).or_default() += e;
        }
        Monomial(m.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn from_dense(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| (i as u32, *e))
                .collect(),
        )
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    /// Degree counting only the variables `< lie_dim`.
    pub fn lie_degree(&self, lie_dim: usize) -> u32 {
        self.0.iter().filter(|p| (p.0 as usize) < lie_dim).map(|p| p.1).sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0
            .iter()
            .find(|p| p.0 as usize == var)
            .map(|p| p.1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lowers the exponent of `var` by one; `None` if it does not occur.
    pub fn divide_var(&self, var: usize) -> Option<(Monomial, u32)> {
        let pos = self.0.iter().position(|p| p.0 as usize == var)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((Monomial(out), e))
    }

    /// Removes `var` entirely, returning the rest and the removed exponent.
    pub fn split_var(&self, var: usize) -> (Monomial, u32) {
        match self.0.iter().position(|p| p.0 as usize == var) {
            Some(pos) => {
                let mut out = self.0.clone();
                let (_, e) = out.remove(pos);
                (Monomial(out), e)
            }
            None => (self.clone(), 0),
        }
    }

    /// Graded lexicographic comparison: total degree first, then the
    /// exponent of variable 0, variable 1, ... (larger exponent is larger).
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            for k in 0..a.len().min(b.len()) {
                if a[k].0 != b[k].0 {
                    // the side that has the smaller variable has a positive
                    // exponent where the other has zero
                    return if a[k].0 < b[k].0 { Ordering::Greater } else { Ordering::Less };
                }
                if a[k].1 != b[k].1 {
                    return a[k].1.cmp(&b[k].1);
                }
            }
            a.len().cmp(&b.len())
        })
    }
}

/// Sparse polynomial over a shared variable context.
#[derive(Clone)]
pub struct CPoly {
    ctx: Arc<VariableContext>,
    terms: FxHashMap<Monomial, Scalar>,
}

impl PartialEq for CPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for CPoly {}

fn same_ctx(a: &Arc<VariableContext>, b: &Arc<VariableContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl CPoly {
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        CPoly { ctx: ctx.clone(), terms: FxHashMap::default() }
    }

    pub fn constant(ctx: &Arc<VariableContext>, c: Scalar) -> Self {
        let mut p = CPoly::zero(ctx);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(ctx: &Arc<VariableContext>) -> Self {
        CPoly::constant(ctx, Scalar::one())
    }

    pub fn var(ctx: &Arc<VariableContext>, i: usize) -> Self {
        assert!(i < ctx.len(), "variable index out of range");
        let mut p = CPoly::zero(ctx);
        p.add_term(Monomial::var(i), Scalar::one());
        p
    }

    pub fn var_named(ctx: &Arc<VariableContext>, name: &str) -> Result<Self> {
        let i = ctx.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(CPoly::var(ctx, i))
    }

    pub fn from_terms(ctx: &Arc<VariableContext>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = CPoly::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Linear form `Σ coeffs[i]·x_i` over the first `coeffs.len()` variables.
    pub fn linear(ctx: &Arc<VariableContext>, coeffs: &[Scalar]) -> Self {
        CPoly::from_terms(ctx, coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(i), c.clone())))
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in canonical order: descending graded lex.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in the non-formal variables only.
    pub fn lie_degree(&self) -> Option<u32> {
        let d = self.ctx.lie_dim();
        self.terms.keys().map(|m| m.lie_degree(d)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: u32) -> CPoly {
        CPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &CPoly) -> Result<CPoly> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &CPoly) -> Result<CPoly> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::ContextMismatch);
        }
        let mut out = CPoly::zero(&self.ctx);
        out.terms.reserve(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> CPoly {
        if c.is_zero() {
            return CPoly::zero(&self.ctx);
        }
        CPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> CPoly {
        let mut acc = CPoly::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// ∂/∂x_var
    pub fn partial(&self, var: usize) -> CPoly {
        let mut out = CPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            if let Some((rest, e)) = m.divide_var(var) {
                out.add_term(rest, c * &Scalar::from_int(e as i64));
            }
        }
        out
    }

    /// Σ_i dir[i]·∂/∂x_i over the non-formal variables.
    pub fn directional_derivative(&self, dir: &[Scalar]) -> Result<CPoly> {
        let d = self.ctx.lie_dim();
        if dir.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: dir.len() });
        }
        let mut out = CPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            for (v, e) in m.pairs() {
                if v >= d || dir[v].is_zero() {
                    continue;
                }
                let (rest, _) = m.divide_var(v).unwrap();
                out.add_term(rest, &(c * &dir[v]) * &Scalar::from_int(e as i64));
            }
        }
        Ok(out)
    }

    /// Σ_i dir[i]·∂/∂x_i where the direction entries are themselves
    /// polynomials in the formal variables.
    pub fn directional_derivative_poly(&self, dir: &[CPoly]) -> Result<CPoly> {
        let d = self.ctx.lie_dim();
        if dir.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: dir.len() });
        }
        let mut out = CPoly::zero(&self.ctx);
        for (v, dv) in dir.iter().enumerate() {
            if dv.is_zero() {
                continue;
            }
            let p = self.partial(v);
            if !p.is_zero() {
                out = out.try_add(&p.try_mul(dv)?)?;
            }
        }
        Ok(out)
    }

    /// `[H_(0), H_(1), ..., H_(deg)]` with `H_(k) = (1/k!)·∂_γ^k H`.
    pub fn shift_expand(&self, gamma: &[Scalar]) -> Result<Vec<CPoly>> {
        let deg = self.lie_degree().unwrap_or(0);
        let mut out = Vec::with_capacity(deg as usize + 1);
        let mut cur = self.clone();
        out.push(cur.clone());
        for k in 1..=deg {
            cur = cur.directional_derivative(gamma)?.scale(&Scalar::new(1, k as i64));
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Full evaluation at a point with one value per variable.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ctx.len() {
            return Err(Error::DimensionMismatch { expected: self.ctx.len(), got: point.len() });
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                t = &t * &point[v].pow(e);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Replaces each variable `x_i` by `images[i]` (all in `target`).
    pub fn substitute(&self, images: &[CPoly], target: &Arc<VariableContext>) -> Result<CPoly> {
        if images.len() != self.ctx.len() {
            return Err(Error::DimensionMismatch { expected: self.ctx.len(), got: images.len() });
        }
        let mut powers: FxHashMap<(usize, u32), CPoly> = FxHashMap::default();
        let mut out = CPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = CPoly::constant(target, c.clone());
            for (v, e) in m.pairs() {
                let pw = powers.entry((v, e)).or_insert_with(|| images[v].pow(e)).clone();
                t = t.try_mul(&pw)?;
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Rewrites into another context by variable name. Fails if a variable
    /// that actually occurs is missing from `target`.
    pub fn embed(&self, target: &Arc<VariableContext>) -> Result<CPoly> {
        let map: Vec<Option<usize>> = self.ctx.names().iter().map(|n| target.index_of(n)).collect();
        let mut out = CPoly::zero(target);
        for (m, c) in &self.terms {
            let mut pairs = Vec::new();
            for (v, e) in m.pairs() {
                let t = map[v].ok_or_else(|| Error::UnknownVariable(self.ctx.name(v).into()))?;
                pairs.push((t, e));
            }
            out.add_term(Monomial::from_pairs(&pairs), c.clone());
        }
        Ok(out)
    }

    /// Coefficient of `x_var^power`, as a polynomial not involving `x_var`.
    pub fn extract_coeff(&self, var: usize, power: u32) -> CPoly {
        let mut out = CPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let (rest, e) = m.split_var(var);
            if e == power {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Highest exponent of `var` occurring.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Variables that occur with a positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flat_map(|m| m.pairs().map(|p| p.0)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from(self)).expect("polynomial serialisation")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("polynomial serialisation")
    }

    pub fn from_json_str(s: &str) -> Result<CPoly> {
        let pj: PolyJson = serde_json::from_str(s)?;
        pj.try_into()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CPoly> {
        let pj: PolyJson = serde_json::from_value(v.clone())?;
        pj.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: Scalar,
    exps: Exps,
}

/// Exponent map keyed by variable index, serialised in numeric key order.
struct Exps(Vec<(usize, u32)>);

impl Serialize for Exps {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (v, e) in &self.0 {
            m.serialize_entry(&v.to_string(), e)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Exps {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, u32>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for (k, e) in raw {
            let v: usize = k
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad variable index {k:?}")))?;
            out.push((v, e));
        }
        Ok(Exps(out))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    context: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    formal: Vec<String>,
    terms: Vec<TermJson>,
}

impl From<&CPoly> for PolyJson {
    fn from(p: &CPoly) -> Self {
        let d = p.ctx.lie_dim();
        PolyJson {
            context: p.ctx.names()[..d].to_vec(),
            formal: p.ctx.names()[d..].to_vec(),
            terms: p
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| TermJson {
                    coeff: c.clone(),
                    exps: Exps(m.pairs().collect()),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for CPoly {
    type Error = Error;

    fn try_from(pj: PolyJson) -> Result<CPoly> {
        let ctx = VariableContext::new(&pj.context, &pj.formal);
        ctx.check_layout()?;
        let mut p = CPoly::zero(&ctx);
        for t in pj.terms {
            if let Some((v, _)) = t.exps.0.iter().find(|(v, _)| *v >= ctx.len()) {
                return Err(Error::Parse(format!("variable index {v} out of range")));
            }
            p.add_term(Monomial::from_pairs(&t.exps.0), t.coeff);
        }
        Ok(p)
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.signum() < 0;
            let a = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(a.to_string());
            }
            for (v, e) in m.pairs() {
                if e == 1 {
                    parts.push(self.ctx.name(v).to_string());
                } else {
                    parts.push(format!("{}^{}", self.ctx.name(v), e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPoly({self})")
    }
}

// Operator forms panic on a context mismatch; use `try_add`/`try_mul` to
// get an error instead.
impl<'a> Add<&'a CPoly> for &'a CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        self.try_add(rhs).expect("context mismatch in polynomial addition")
    }
}

impl<'a> Sub<&'a CPoly> for &'a CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        self.try_add(&-rhs).expect("context mismatch in polynomial subtraction")
    }
}

impl<'a> Mul<&'a CPoly> for &'a CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        self.try_mul(rhs).expect("context mismatch in polynomial multiplication")
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        self.scale(&Scalar::from_int(-1))
    }
}
