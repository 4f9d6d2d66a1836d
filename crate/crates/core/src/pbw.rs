//! The universal enveloping algebra `U(g)` in PBW normal form.
//!
//! An element is a combination of nondecreasing index words
//! `ξ_{i1}⋯ξ_{ik}`, `i1 ≤ ⋯ ≤ ik`. Products are reduced by moving each
//! letter of the right factor into place: `w'·ξ_i·ξ_j = w'·ξ_j·ξ_i + w'·[ξ_i, ξ_j]`
//! for `i > j`. Word-times-letter results and symmetrised monomials are
//! memoised per algebra in concurrent maps, so they are shared across
//! threads.

use std::fmt;
use std::hash::BuildHasherDefault;
use std::sync::Arc;

use dashmap::DashMap;
use rustc_hash::{FxHashMap, FxHasher};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Mat};
use crate::poly::{CPoly, Monomial};
use crate::ring::Ring;
use crate::scalar::Scalar;

pub type Word = SmallVec<[u16; 8]>;

type Fx = BuildHasherDefault<FxHasher>;
type Terms = Arc<Vec<(Word, Scalar)>>;

/// `U(g)` together with its memo tables.
pub struct UAlgebra {
    lie: Arc<LieAlgebra>,
    mul_cache: DashMap<(Word, u16), Terms, Fx>,
    sym_cache: DashMap<Monomial, Terms, Fx>,
}

impl fmt::Debug for UAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U({})", self.lie.name())
    }
}

impl UAlgebra {
    pub fn new(lie: Arc<LieAlgebra>) -> Arc<Self> {
        Arc::new(UAlgebra { lie, mul_cache: DashMap::default(), sym_cache: DashMap::default() })
    }

    pub fn of(lie: &LieAlgebra) -> Arc<Self> {
        Self::new(Arc::new(lie.clone()))
    }

    pub fn lie(&self) -> &Arc<LieAlgebra> {
        &self.lie
    }

    pub fn cache_sizes(&self) -> (usize, usize) {
        (self.mul_cache.len(), self.sym_cache.len())
    }

    /// Normal form of `w·ξ_j` for a normal word `w`.
    fn word_times_letter(&self, w: &Word, j: u16) -> Terms {
        match w.last() {
            None => return Arc::new(vec![(smallvec::smallvec![j], Scalar::one())]),
            Some(&last) if last <= j => {
                let mut v = w.clone();
                v.push(j);
                return Arc::new(vec![(v, Scalar::one())]);
            }
            _ => {}
        }
        let key = (w.clone(), j);
        if let Some(hit) = self.mul_cache.get(&key) {
            return hit.clone();
        }
        let i = *w.last().unwrap();
        let mut prefix = w.clone();
        prefix.pop();
        let mut acc: FxHashMap<Word, Scalar> = FxHashMap::default();
        // (w'·ξ_j)·ξ_i
        for (v, c) in self.word_times_letter(&prefix, j).iter() {
            for (x, d) in self.word_times_letter(v, i).iter() {
                add_into(&mut acc, x.clone(), c * d);
            }
        }
        // w'·[ξ_i, ξ_j]
        for (k, c) in self.lie.bracket(i as usize, j as usize) {
            for (x, d) in self.word_times_letter(&prefix, *k as u16).iter() {
                add_into(&mut acc, x.clone(), c * d);
            }
        }
        let out: Terms = Arc::new(acc.into_iter().collect());
        self.mul_cache.insert(key, out.clone());
        out
    }

    /// Normal form of `u·v` for normal words.
    fn word_times_word(&self, u: &Word, v: &Word) -> Vec<(Word, Scalar)> {
        match (u.last(), v.first()) {
            (None, _) => return vec![(v.clone(), Scalar::one())],
            (_, None) => return vec![(u.clone(), Scalar::one())],
            (Some(a), Some(b)) if a <= b => {
                let mut w = u.clone();
                w.extend_from_slice(v);
                return vec![(w, Scalar::one())];
            }
            _ => {}
        }
        let mut cur: FxHashMap<Word, Scalar> = FxHashMap::default();
        cur.insert(u.clone(), Scalar::one());
        for &l in v {
            let mut next: FxHashMap<Word, Scalar> = FxHashMap::default();
            for (w, c) in &cur {
                for (x, d) in self.word_times_letter(w, l).iter() {
                    add_into(&mut next, x.clone(), c * d);
                }
            }
            cur = next;
        }
        cur.into_iter().collect()
    }

    /// Symmetrised monomial, memoised. Uses
    /// `ϖ(m) = (1/deg m)·Σ_v e_v·ϖ(m/x_v)·ξ_v`, grouping orderings by their last letter.
    fn sym_monomial(&self, m: &Monomial) -> Terms {
        if m.is_one() {
            return Arc::new(vec![(Word::new(), Scalar::one())]);
        }
        if let Some(hit) = self.sym_cache.get(m) {
            return hit.clone();
        }
        let k = m.degree();
        let mut acc: FxHashMap<Word, Scalar> = FxHashMap::default();
        for (v, e) in m.pairs() {
            let (rest, _) = m.divide_var(v).unwrap();
            let w = Scalar::new(e as i64, k as i64);
            for (x, c) in self.sym_monomial(&rest).iter() {
                for (y, d) in self.word_times_letter(x, v as u16).iter() {
                    add_into(&mut acc, y.clone(), &(&w * c) * d);
                }
            }
        }
        let out: Terms = Arc::new(acc.into_iter().collect());
        self.sym_cache.insert(m.clone(), out.clone());
        out
    }
}

fn add_into(acc: &mut FxHashMap<Word, Scalar>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match acc.entry(w) {
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

/// Element of `U(g)` in PBW normal form.
#[derive(Clone)]
pub struct PBWElement {
    alg: Arc<UAlgebra>,
    terms: FxHashMap<Word, Scalar>,
}

impl PartialEq for PBWElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl PBWElement {
    pub fn zero(alg: &Arc<UAlgebra>) -> Self {
        PBWElement { alg: alg.clone(), terms: FxHashMap::default() }
    }

    pub fn scalar(alg: &Arc<UAlgebra>, c: Scalar) -> Self {
        let mut e = Self::zero(alg);
        add_into(&mut e.terms, Word::new(), c);
        e
    }

    pub fn generator(alg: &Arc<UAlgebra>, i: usize) -> Self {
        assert!(i < alg.lie.dim());
        let mut e = Self::zero(alg);
        e.terms.insert(smallvec::smallvec![i as u16], Scalar::one());
        e
    }

    /// Linear element `Σ v_i ξ_i`.
    pub fn linear(alg: &Arc<UAlgebra>, v: &[Scalar]) -> Self {
        let mut e = Self::zero(alg);
        for (i, c) in v.iter().enumerate() {
            add_into(&mut e.terms, smallvec::smallvec![i as u16], c.clone());
        }
        e
    }

    /// Reduces an arbitrary (not necessarily sorted) product of generators.
    pub fn from_word(alg: &Arc<UAlgebra>, letters: &[usize]) -> Self {
        let mut e = Self::scalar(alg, Scalar::one());
        for &l in letters {
            e = e.mul(&Self::generator(alg, l));
        }
        e
    }

    /// Builds from terms that must already be nondecreasing words.
    pub fn from_normal_terms(alg: &Arc<UAlgebra>, terms: impl IntoIterator<Item = (Vec<usize>, Scalar)>) -> Result<Self> {
        let mut e = Self::zero(alg);
        for (w, c) in terms {
            if w.windows(2).any(|p| p[0] > p[1]) || w.iter().any(|&i| i >= alg.lie.dim()) {
                return Err(Error::Parse(format!("word {w:?} is not a normal word")));
            }
            add_into(&mut e.terms, w.into_iter().map(|i| i as u16).collect(), c);
        }
        Ok(e)
    }

    pub fn algebra(&self) -> &Arc<UAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[u16]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Filtration degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(Error::AlgebraMismatch);
        }
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (w, c) in &small.terms {
            add_into(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(Error::AlgebraMismatch);
        }
        let mut acc: FxHashMap<Word, Scalar> = FxHashMap::default();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let ab = a * b;
                for (w, c) in self.alg.word_times_word(u, v) {
                    add_into(&mut acc, w, &ab * &c);
                }
            }
        }
        Ok(PBWElement { alg: self.alg.clone(), terms: acc })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        PBWElement { alg: self.alg.clone(), terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.try_mul(other)?.try_add(&other.try_mul(self)?.scale(&Scalar::from_int(-1)))?)
    }

    /// Top-degree part as a polynomial in the algebra's coordinates.
    pub fn symbol(&self) -> CPoly {
        let ctx = self.alg.lie.ctx();
        let Some(d) = self.degree() else { return CPoly::zero(ctx) };
        self.homogeneous_part(d)
    }

    /// Words of length exactly `d`, read as commutative monomials.
    pub fn homogeneous_part(&self, d: usize) -> CPoly {
        let ctx = self.alg.lie.ctx();
        CPoly::from_terms(
            ctx,
            self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| {
                let pairs: Vec<(usize, u32)> = w.iter().map(|&i| (i as usize, 1)).collect();
                (Monomial::from_pairs(&pairs), c.clone())
            }),
        )
    }

    /// Terms sorted by decreasing length, then lexicographically.
    pub fn sorted_terms(&self) -> Vec<(&Word, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let words: Vec<WordJson> = self
            .sorted_terms()
            .into_iter()
            .map(|(w, c)| WordJson { idx: w.iter().map(|&i| i as usize).collect(), coeff: c.clone() })
            .collect();
        serde_json::json!({ "words": words })
    }

    pub fn from_json(alg: &Arc<UAlgebra>, v: &serde_json::Value) -> Result<Self> {
        let words: Vec<WordJson> = serde_json::from_value(
            v.get("words").cloned().ok_or_else(|| Error::Parse("missing \"words\"".into()))?,
        )?;
        Self::from_normal_terms(alg, words.into_iter().map(|w| (w.idx, w.coeff)))
    }

    /// Image under a representation given by one matrix per basis element.
    pub fn represent(&self, mats: &[Mat]) -> Mat {
        let n = mats.first().map(|m| m.len()).unwrap_or(0);
        let mut out = linalg::zeros(n, n);
        for (w, c) in &self.terms {
            let mut m = linalg::identity(n);
            for &i in w {
                m = linalg::mul(&m, &mats[i as usize]);
            }
            for (r, row) in m.iter().enumerate() {
                for (s, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        out[r][s] += &(c * x);
                    }
                }
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct WordJson {
    idx: Vec<usize>,
    coeff: Scalar,
}

impl Ring for PBWElement {
    fn zero_like(&self) -> Self {
        PBWElement::zero(&self.alg)
    }
    fn one_like(&self) -> Self {
        PBWElement::scalar(&self.alg, Scalar::one())
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("PBW elements from different algebras")
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("PBW elements from different algebras")
    }
    fn scale(&self, c: &Scalar) -> Self {
        PBWElement::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.alg.lie.basis();
        for (i, (w, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.signum() < 0;
            let a = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if !a.is_one() || w.is_empty() {
                parts.push(a.to_string());
            }
            parts.extend(w.iter().map(|&k| names[k as usize].clone()));
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PBW({self})")
    }
}

/// `ϖ: S(g) → U(g)`, averaging over all orderings of each monomial.
/// Formal variables are not allowed.
pub fn symmetrise(alg: &Arc<UAlgebra>, p: &CPoly) -> Result<PBWElement> {
    let ctx = p.ctx();
    if ctx.len() != alg.lie.dim() || ctx.names() != alg.lie.basis() {
        return Err(Error::ContextMismatch);
    }
    let mut acc: FxHashMap<Word, Scalar> = FxHashMap::default();
    for (m, c) in p.terms() {
        for (w, d) in alg.sym_monomial(m).iter() {
            add_into(&mut acc, w.clone(), c * d);
        }
    }
    Ok(PBWElement { alg: alg.clone(), terms: acc })
}

/// `[ξ_b, z] = 0` for every basis element.
pub fn is_central(z: &PBWElement) -> Result<bool> {
    for b in 0..z.alg.lie.dim() {
        if !PBWElement::generator(&z.alg, b).commutator(z)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which adjacent out-of-order pair a reference straightener rewrites first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Unmemoised straightening of an arbitrary word, rewriting one descent at a
/// time. Independent of the memoised product; used to cross-check it.
pub fn straighten_reference(alg: &Arc<UAlgebra>, letters: &[usize], strategy: Strategy) -> PBWElement {
    let lie = &alg.lie;
    let mut pending: Vec<(Vec<usize>, Scalar)> = vec![(letters.to_vec(), Scalar::one())];
    let mut done: FxHashMap<Word, Scalar> = FxHashMap::default();
    while let Some((w, c)) = pending.pop() {
        let descents = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]);
        let pos = match strategy {
            Strategy::Leftmost => descents.min(),
            Strategy::Rightmost => descents.max(),
        };
        let Some(p) = pos else {
            add_into(&mut done, w.iter().map(|&i| i as u16).collect(), c);
            continue;
        };
        let (i, j) = (w[p], w[p + 1]);
        let mut swapped = w.clone();
        swapped.swap(p, p + 1);
        pending.push((swapped, c.clone()));
        for (k, s) in lie.bracket(i, j) {
            let mut shorter = w[..p].to_vec();
            shorter.push(*k);
            shorter.extend_from_slice(&w[p + 2..]);
            pending.push((shorter, &c * s));
        }
    }
    PBWElement { alg: alg.clone(), terms: done }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gl2() -> Arc<UAlgebra> {
        UAlgebra::of(&LieAlgebra::gl(2))
    }

    #[test]
    fn e21_e12() {
        let u = gl2();
        // E21·E12 = E12·E21 - E11 + E22
        let e = PBWElement::from_word(&u, &[2, 1]);
        let expect = PBWElement::from_normal_terms(
            &u,
            [(vec![1, 2], q(1, 1)), (vec![0], q(-1, 1)), (vec![3], q(1, 1))],
        )
        .unwrap();
        assert_eq!(e, expect);
    }

    #[test]
    fn symmetrised_square_is_plain_square() {
        let u = gl2();
        let ctx = u.lie().ctx().clone();
        let p = &CPoly::var(&ctx, 1) * &CPoly::var(&ctx, 1);
        let s = symmetrise(&u, &p).unwrap();
        assert_eq!(s, PBWElement::from_word(&u, &[1, 1]));
    }

    #[test]
    fn symmetrised_product_has_half_bracket() {
        let u = gl2();
        let ctx = u.lie().ctx().clone();
        let p = &CPoly::var(&ctx, 1) * &CPoly::var(&ctx, 2);
        let s = symmetrise(&u, &p).unwrap();
        // (E12 E21 + E21 E12)/2 = E12 E21 + (E22 - E11)/2
        let expect = PBWElement::from_normal_terms(
            &u,
            [(vec![1, 2], q(1, 1)), (vec![0], q(-1, 2)), (vec![3], q(1, 2))],
        )
        .unwrap();
        assert_eq!(s, expect);
        assert_eq!(s.symbol(), p);
    }

    #[test]
    fn casimir_is_central() {
        for lie in [LieAlgebra::gl(2), LieAlgebra::sp(4)] {
            let u = UAlgebra::of(&lie);
            let ctx = lie.ctx().clone();
            // Σ_ij F_ij F_ji is invariant; its symmetrisation is central
            let m = lie.entry_matrix().unwrap();
            let n = lie.n();
            let mut c = CPoly::zero(&ctx);
            for i in 0..n {
                for j in 0..n {
                    c = &c + &(&m[i][j] * &m[j][i]);
                }
            }
            assert!(is_central(&symmetrise(&u, &c).unwrap()).unwrap());
            assert!(!is_central(&PBWElement::generator(&u, 1)).unwrap());
        }
    }

    #[test]
    fn strategies_agree_with_memoised_product() {
        let lie = LieAlgebra::sp(4);
        let u = UAlgebra::of(&lie);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let len = rng.gen_range(0..6);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..lie.dim())).collect();
            let memo = PBWElement::from_word(&u, &w);
            assert_eq!(straighten_reference(&u, &w, Strategy::Leftmost), memo, "{w:?}");
            assert_eq!(straighten_reference(&u, &w, Strategy::Rightmost), memo, "{w:?}");
        }
    }

    #[test]
    fn mismatched_algebras_error() {
        let a = PBWElement::generator(&gl2(), 0);
        let b = PBWElement::generator(&gl2(), 0);
        assert_eq!(a.try_add(&b).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn json_round_trip() {
        let u = gl2();
        let e = PBWElement::from_word(&u, &[3, 2, 1, 0]);
        let v = e.to_json();
        assert_eq!(PBWElement::from_json(&u, &v).unwrap(), e);
        assert!(PBWElement::from_json(&u, &serde_json::json!({"words":[{"idx":[2,1],"coeff":"1/1"}]})).is_err());
    }
}
