//! Symmetrised determinant-like functions of matrices with entries in a
//! possibly noncommutative ring, and the invariant families built from them.
//!
//! `Det_m(M) = (1/m!) Σ_{a1<…<am} Σ_{σ,τ∈S_m} sgn(στ) M_{a_σ1 a_τ1}⋯M_{a_σm a_τm}`
//!
//! `Per_m(M)` is the same sum over multisets `a1 ≤ … ≤ am`, without signs
//! and weighted by `1/(α_1!⋯α_N!)` for the multiplicities `α_k`.
//!
//! Writing `τ = ρσ`, the double sum becomes
//! `Σ_ρ sgn ρ · Σ_σ N_σ1⋯N_σm` with `N_j = M_{a_j a_ρj}`. The inner sum over
//! orderings is evaluated over subsets (grouping by the last factor), and
//! memoised by the multiset of matrix positions involved.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Family, Functional, LieAlgebra};
use crate::pbw::{PBWElement, UAlgebra};
use crate::poly::{CPoly, VariableContext};
use crate::ring::{CentralPoly, Ring};
use crate::scalar::Scalar;

pub type AlgMatrix<T> = Vec<Vec<T>>;

/// Name of the formal variable standing for `z⁻¹`.
pub const ZINV: &str = "zinv";

fn permutations(m: usize) -> Vec<(Vec<usize>, i64)> {
    // Heap's algorithm with signs
    fn rec(k: usize, a: &mut Vec<usize>, sign: &mut i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if k <= 1 {
            out.push((a.clone(), *sign));
            return;
        }
        for i in 0..k {
            rec(k - 1, a, sign, out);
            if i + 1 < k {
                if k % 2 == 0 {
                    a.swap(i, k - 1);
                } else {
                    a.swap(0, k - 1);
                }
                *sign = -*sign;
            }
        }
    }
    let mut a: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    let mut sign = 1;
    rec(m, &mut a, &mut sign, &mut out);
    out
}

/// `Σ_σ x_σ1⋯x_σm` over all orderings of the given factors.
pub fn sym_product<T: Ring>(factors: &[T], one: &T) -> T {
    let m = factors.len();
    let mut table: Vec<T> = Vec::with_capacity(1 << m);
    table.push(one.clone());
    for mask in 1usize..(1 << m) {
        let mut acc = one.zero_like();
        for (t, x) in factors.iter().enumerate() {
            if mask & (1 << t) != 0 {
                let prev = &table[mask & !(1 << t)];
                if !prev.is_zero() && !x.is_zero() {
                    acc = acc.add(&prev.mul(x));
                }
            }
        }
        table.push(acc);
    }
    table.pop().unwrap()
}

struct SymCache<'a, T: Ring> {
    m: &'a AlgMatrix<T>,
    one: T,
    memo: HashMap<Vec<(usize, usize)>, T>,
}

impl<'a, T: Ring> SymCache<'a, T> {
    fn new(m: &'a AlgMatrix<T>) -> Result<Self> {
        let one = m
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::Precondition("empty matrix".into()))?
            .one_like();
        Ok(SymCache { m, one, memo: HashMap::new() })
    }

    fn get(&mut self, positions: &[(usize, usize)]) -> T {
        let mut key = positions.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let factors: Vec<T> = key.iter().map(|&(i, j)| self.m[i][j].clone()).collect();
        let v = sym_product(&factors, &self.one);
        self.memo.insert(key, v.clone());
        v
    }
}

fn check_square<T>(m: &AlgMatrix<T>) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition("matrix must be square and nonempty".into()));
    }
    Ok(n)
}

fn combinations(n: usize, k: usize, with_repeats: bool) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, rep: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(if rep { i } else { i + 1 }, n, k, rep, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, with_repeats, &mut Vec::new(), &mut out);
    out
}

/// Symmetrised `Det_k(M)`; `Det_0 = 1`.
pub fn det_sym<T: Ring>(m: &AlgMatrix<T>, k: usize) -> Result<T> {
    let n = check_square(m)?;
    let mut cache = SymCache::new(m)?;
    if k == 0 {
        return Ok(cache.one.clone());
    }
    if k > n {
        return Ok(cache.one.zero_like());
    }
    let perms = permutations(k);
    let mut acc = cache.one.zero_like();
    for a in combinations(n, k, false) {
        for (rho, sign) in &perms {
            let pos: Vec<(usize, usize)> = (0..k).map(|j| (a[j], a[rho[j]])).collect();
            let s = cache.get(&pos);
            acc = acc.add(&s.scale(&Scalar::from_int(*sign)));
        }
    }
    Ok(acc.scale(&Scalar::factorial(k as u32).inv().unwrap()))
}

/// Symmetrised `Per_k(M)`; `Per_0 = 1`.
pub fn per_sym<T: Ring>(m: &AlgMatrix<T>, k: usize) -> Result<T> {
    let n = check_square(m)?;
    let mut cache = SymCache::new(m)?;
    if k == 0 {
        return Ok(cache.one.clone());
    }
    let perms = permutations(k);
    let mut acc = cache.one.zero_like();
    for a in combinations(n, k, true) {
        let mut alpha_fact = Scalar::one();
        let mut run = 1;
        for j in 1..=k {
            if j < k && a[j] == a[j - 1] {
                run += 1;
            } else {
                alpha_fact = &alpha_fact * &Scalar::factorial(run);
                run = 1;
            }
        }
        let mut inner = cache.one.zero_like();
        for (rho, _) in &perms {
            let pos: Vec<(usize, usize)> = (0..k).map(|j| (a[j], a[rho[j]])).collect();
            inner = inner.add(&cache.get(&pos));
        }
        acc = acc.add(&inner.scale(&alpha_fact.inv().unwrap()));
    }
    Ok(acc.scale(&Scalar::factorial(k as u32).inv().unwrap()))
}

/// `Pf(M) = 1/(2^n n!) Σ_{σ∈S_2n} sgn σ · M_{σ1,σ2'} ⋯ M_{σ(2n-1),σ(2n)'}`
/// with `j' = N-1-j`, summed over every permutation in the written order.
/// Limited to `N = 2n ≤ 6`.
pub fn pfaffian_sym<T: Ring>(m: &AlgMatrix<T>) -> Result<T> {
    let big_n = check_square(m)?;
    if big_n % 2 != 0 {
        return Err(Error::Precondition("Pfaffian needs an even matrix size".into()));
    }
    if big_n > 6 {
        return Err(Error::Unsupported("Pfaffian is limited to matrices of size at most 6".into()));
    }
    let n = big_n / 2;
    let one = m[0][0].one_like();
    let mut acc = one.zero_like();
    for (sigma, sign) in permutations(big_n) {
        let mut prod = one.clone();
        for p in 0..n {
            let (r, c) = (sigma[2 * p], big_n - 1 - sigma[2 * p + 1]);
            prod = prod.mul(&m[r][c]);
            if prod.is_zero() {
                break;
            }
        }
        if !prod.is_zero() {
            acc = acc.add(&prod.scale(&Scalar::from_int(sign)));
        }
    }
    let norm = &Scalar::from_int(1 << n) * &Scalar::factorial(n as u32);
    Ok(acc.scale(&norm.inv().unwrap()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixFunction {
    Det,
    Per,
    Pf,
}

impl std::str::FromStr for MatrixFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" => Ok(MatrixFunction::Det),
            "per" => Ok(MatrixFunction::Per),
            "pf" => Ok(MatrixFunction::Pf),
            _ => Err(Error::Parse(format!("unknown matrix function {s:?}"))),
        }
    }
}

fn apply<T: Ring>(f: MatrixFunction, m: &AlgMatrix<T>, k: usize) -> Result<T> {
    match f {
        MatrixFunction::Det => det_sym(m, k),
        MatrixFunction::Per => per_sym(m, k),
        MatrixFunction::Pf => pfaffian_sym(m),
    }
}

/// Degree of `f` applied with parameter `k` on an `n × n` matrix.
pub fn function_degree(f: MatrixFunction, n: usize, k: usize) -> usize {
    match f {
        MatrixFunction::Pf => n / 2,
        _ => k,
    }
}

/// `Det_m(F)`, `Per_m(F)` or `Pf(F)` on the coordinate matrix, in `S(g)`.
pub fn invariant(alg: &LieAlgebra, f: MatrixFunction, m: usize) -> Result<CPoly> {
    apply(f, &alg.entry_matrix()?, m)
}

/// Coefficients `c_0, …, c_d` of `f(μ + F·z⁻¹)` with `c_k` the coefficient
/// of `z^{-(d-k)}`, `d` the degree. Then `c_k = (1/k!)·∂_μ^k f(F)`.
pub fn shift_poly(alg: &LieAlgebra, mu: &Functional, f: MatrixFunction, m: usize) -> Result<Vec<CPoly>> {
    let mum = mu.matrix.as_ref().ok_or_else(|| Error::Unsupported("functional has no matrix form".into()))?;
    let ctx = alg.ctx().with_formal(&[ZINV]);
    let z = ctx.index_of(ZINV).unwrap();
    let zinv = CPoly::var(&ctx, z);
    let entries = alg.entry_matrix_in(&ctx)?;
    let shifted: AlgMatrix<CPoly> = entries
        .iter()
        .zip(mum)
        .map(|(row, mrow)| {
            row.iter()
                .zip(mrow)
                .map(|(e, x)| &CPoly::constant(&ctx, x.clone()) + &(e * &zinv))
                .collect()
        })
        .collect();
    let total = apply(f, &shifted, m)?;
    let d = function_degree(f, alg.n(), m);
    let lie = alg.ctx();
    (0..=d)
        .map(|k| total.extract_coeff(z, (d - k) as u32).embed(lie))
        .collect()
}

/// The same coefficients computed directly in `U(g)`: entries are
/// `μ_ij + F_ij·t` with `t` central, so each coefficient is a PBW element.
pub fn shift_poly_pbw(u: &Arc<UAlgebra>, mu: &Functional, f: MatrixFunction, m: usize) -> Result<Vec<PBWElement>> {
    let alg = u.lie();
    let mum = mu.matrix.as_ref().ok_or_else(|| Error::Unsupported("functional has no matrix form".into()))?;
    let n = alg.n();
    let mut mat: AlgMatrix<CentralPoly<PBWElement>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let sv = alg.entry(i, j).ok_or_else(|| Error::Unsupported("algebra has no matrix realisation".into()))?;
            let mut v = vec![Scalar::zero(); alg.dim()];
            for (b, c) in sv {
                v[*b] = c.clone();
            }
            let e = PBWElement::linear(u, &v);
            let c = PBWElement::scalar(u, mum[i][j].clone());
            row.push(CentralPoly::constant(c).add(&CentralPoly::linear(e)));
        }
        mat.push(row);
    }
    let total = apply(f, &mat, m)?;
    let d = function_degree(f, n, m);
    Ok((0..=d).map(|k| total.coeff(d - k)).collect())
}

/// The matrix function on `M = [F_ij]` read as a PBW matrix.
pub fn invariant_pbw(u: &Arc<UAlgebra>, f: MatrixFunction, m: usize) -> Result<PBWElement> {
    let mu = u.lie().zero_functional();
    Ok(shift_poly_pbw(u, &mu, f, m)?.swap_remove(0))
}

/// Which generating invariants a family uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvariantKind {
    Det,
    Per,
}

/// A generating invariant: the matrix function and its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantSpec {
    pub function: MatrixFunction,
    pub m: usize,
}

/// Standard generating invariants of `S(g)^g`:
/// - gl_N: `Det_1..Det_N` (or `Per_1..Per_N`);
/// - sp_2n: `Det_2, Det_4, …, Det_2n`;
/// - o_2n+1: `Per_2, …, Per_2n`;
/// - o_2n: `Per_2, …, Per_{2n-2}` and the Pfaffian.
pub fn generating_specs(alg: &LieAlgebra, kind: InvariantKind) -> Result<Vec<InvariantSpec>> {
    let n = alg.n();
    let f = match kind {
        InvariantKind::Det => MatrixFunction::Det,
        InvariantKind::Per => MatrixFunction::Per,
    };
    Ok(match alg.family() {
        Family::Gl => (1..=n).map(|m| InvariantSpec { function: f, m }).collect(),
        Family::Sp => (1..=n / 2).map(|k| InvariantSpec { function: f, m: 2 * k }).collect(),
        Family::O if n % 2 == 1 => (1..=n / 2).map(|k| InvariantSpec { function: f, m: 2 * k }).collect(),
        Family::O => {
            let mut v: Vec<InvariantSpec> = (1..n / 2).map(|k| InvariantSpec { function: f, m: 2 * k }).collect();
            v.push(InvariantSpec { function: MatrixFunction::Pf, m: n / 2 });
            v
        }
        Family::Custom => return Err(Error::Unsupported("no standard invariants for a custom algebra".into())),
    })
}

pub fn generating_invariants(alg: &LieAlgebra, kind: InvariantKind) -> Result<Vec<CPoly>> {
    generating_specs(alg, kind)?
        .into_iter()
        .map(|s| invariant(alg, s.function, s.m))
        .collect()
}

/// The context with `zinv`, for callers that want the undivided shift polynomial.
pub fn zinv_context(alg: &LieAlgebra) -> Arc<VariableContext> {
    alg.ctx().with_formal(&[ZINV])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::is_invariant;
    use crate::scalar::q;

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        let s: i64 = p.iter().map(|x| x.1).sum();
        assert_eq!(s, 0);
        for (perm, sign) in &p {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            assert_eq!(*sign, if inv % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn gl2_invariants() {
        let g = LieAlgebra::gl(2);
        let ctx = g.ctx();
        let v = |i| CPoly::var(ctx, i);
        assert_eq!(invariant(&g, MatrixFunction::Det, 1).unwrap(), &v(0) + &v(3));
        assert_eq!(invariant(&g, MatrixFunction::Det, 2).unwrap(), &(&v(0) * &v(3)) - &(&v(1) * &v(2)));
        // Ψ_2 = Σ_{a≤b} permanental 2-minors with 1/α! weights
        let psi2 = &(&(&v(0) * &v(0)) + &(&v(3) * &v(3))) + &(&(&v(0) * &v(3)) + &(&v(1) * &v(2)));
        assert_eq!(invariant(&g, MatrixFunction::Per, 2).unwrap(), psi2);
    }

    #[test]
    fn standard_invariants_are_invariant() {
        for (alg, kind) in [
            (LieAlgebra::gl(3), InvariantKind::Det),
            (LieAlgebra::gl(3), InvariantKind::Per),
            (LieAlgebra::sp(4), InvariantKind::Det),
            (LieAlgebra::o(5), InvariantKind::Per),
            (LieAlgebra::o(4), InvariantKind::Per),
        ] {
            for h in generating_invariants(&alg, kind).unwrap() {
                assert!(is_invariant(&alg, &h).unwrap(), "{} {h}", alg.name());
            }
        }
    }

    #[test]
    fn shift_coefficients_are_directional_derivatives() {
        let g = LieAlgebra::gl(3);
        let mu = g.diagonal_functional(&[q(1, 1), q(2, 1), q(5, 1)]).unwrap();
        let coeffs = shift_poly(&g, &mu, MatrixFunction::Det, 3).unwrap();
        let phi3 = invariant(&g, MatrixFunction::Det, 3).unwrap();
        assert_eq!(coeffs, phi3.shift_expand(&mu.values).unwrap());
        // constant term is det μ
        assert_eq!(coeffs[3], CPoly::constant(g.ctx(), q(10, 1)));
    }

    #[test]
    fn pfaffian_of_o4() {
        let g = LieAlgebra::o(4);
        let pf = invariant(&g, MatrixFunction::Pf, 2).unwrap();
        assert_eq!(pf.degree(), Some(2));
        assert!(is_invariant(&g, &pf).unwrap());
        assert!(pfaffian_sym(&linalg_ints(3)).is_err());
    }

    fn linalg_ints(n: usize) -> AlgMatrix<CPoly> {
        let ctx = VariableContext::new(&["x"], &[] as &[&str]);
        vec![vec![CPoly::one(&ctx); n]; n]
    }
}
