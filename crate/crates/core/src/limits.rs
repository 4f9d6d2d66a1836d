//! Limits of shift algebras along `γ + uμ` as `u → 0`, and the
//! Gelfand–Tsetlin type chain subalgebras of `U(gl_N)` and `U(sp_2n)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{self, AlgMatrix};
use crate::lie::{Family, Functional, LieAlgebra, Subalgebra, Subspace};
use crate::pbw::{symmetrise, PBWElement, UAlgebra};
use crate::poisson;
use crate::poly::CPoly;
use crate::ring::{CentralPoly, Ring};
use crate::scalar::Scalar;

pub const U_VAR: &str = "u";

/// Coefficient of the smallest power of `u` present, and that power.
pub fn lowest_u_component<T: Ring>(f: &CentralPoly<T>) -> Result<(T, usize)> {
    f.lowest()
        .map(|(s, c)| (c.clone(), s))
        .ok_or_else(|| Error::Precondition("zero has no lowest u-component".into()))
}

/// `∂^k_{γ+uμ} h` with `u` a formal variable, differentiated `k` times.
pub fn pencil_shift_formal(h: &CPoly, gamma: &[Scalar], mu: &[Scalar], k: u32) -> Result<CentralPoly<CPoly>> {
    let lie = h.ctx().clone();
    let ctx = lie.with_formal(&[U_VAR]);
    let u = CPoly::var_named(&ctx, U_VAR)?;
    let dir: Vec<CPoly> = gamma
        .iter()
        .zip(mu)
        .map(|(g, m)| &CPoly::constant(&ctx, g.clone()) + &u.scale(m))
        .collect();
    let mut cur = h.embed(&ctx)?;
    for _ in 0..k {
        cur = cur.directional_derivative_poly(&dir)?;
    }
    let uvar = ctx.index_of(U_VAR).unwrap();
    let top = cur.degree_in(uvar);
    let coeffs = (0..=top).map(|s| cur.extract_coeff(uvar, s).embed(&lie)).collect::<Result<Vec<_>>>()?;
    Ok(CentralPoly::from_coeffs(coeffs, CPoly::zero(&lie)))
}

/// The same expansion as `Σ_s C(k,s)·u^s·∂_μ^s ∂_γ^{k−s} h`.
pub fn pencil_shift_binomial(h: &CPoly, gamma: &[Scalar], mu: &[Scalar], k: u32) -> Result<CentralPoly<CPoly>> {
    let mut coeffs = Vec::with_capacity(k as usize + 1);
    let mut dg = vec![h.clone()];
    for _ in 0..k {
        let next = dg.last().unwrap().directional_derivative(gamma)?;
        dg.push(next);
    }
    for s in 0..=k {
        let mut p = dg[(k - s) as usize].clone();
        for _ in 0..s {
            p = p.directional_derivative(mu)?;
        }
        coeffs.push(p.scale(&Scalar::binomial(k, s)));
    }
    Ok(CentralPoly::from_coeffs(coeffs, CPoly::zero(h.ctx())))
}

/// `b = c·a` for a nonzero scalar `c`, with both nonzero.
pub fn proportional(a: &CPoly, b: &CPoly) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let (m, ca) = a.sorted_terms()[0];
    let c = &b.coeff(m) / ca;
    !c.is_zero() && &a.scale(&c) == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitCase {
    /// `k ≤ deg H − deg ^γH`: the limit is the `γ`-shift.
    Gamma,
    /// Otherwise the `μ̄`-shift of `^γH` inside `S(g_γ)`.
    MuBar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEntry {
    pub invariant: usize,
    pub k: u32,
    /// `deg H − deg ^γH`
    pub split: u32,
    pub lowest_power: usize,
    pub case: LimitCase,
    pub routes_agree: bool,
    pub matches: bool,
}

pub struct VinbergLimit {
    pub q: Subalgebra,
    pub mu_bar: Functional,
    pub entries: Vec<LimitEntry>,
    pub family: Vec<CPoly>,
}

impl VinbergLimit {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.routes_agree && e.matches)
    }
}

/// Confirms that `γ` is nilpotent, that `μ` is regular in `g` and that
/// `μ̄ = μ|g_γ` is regular in `g_γ`. Both regularity checks compare a
/// stabiliser dimension with `rank g`, which bounds the index of `g_γ` from
/// below.
pub fn limit_preconditions(g: &LieAlgebra, gamma: &Functional, mu: &Functional) -> Result<(Subalgebra, Functional)> {
    let rank = g.rank().ok_or_else(|| Error::Unsupported("limits need a classical algebra".into()))?;
    if !gamma.is_nilpotent() {
        return Err(Error::Precondition("γ must be nilpotent".into()));
    }
    let dm = g.stabiliser(mu).dim();
    if dm != rank {
        return Err(Error::Precondition(format!("μ is not regular: stabiliser dimension {dm}, rank {rank}")));
    }
    let q = g.restrict(&g.stabiliser(gamma))?;
    let mu_bar = q.restrict_functional(mu);
    let dq = q.alg.stabiliser(&mu_bar).dim();
    if dq != rank {
        return Err(Error::Precondition(format!("μ̄ is not regular in g_γ: stabiliser dimension {dq}, rank {rank}")));
    }
    Ok((q, mu_bar))
}

/// Lowest `u`-components of `∂^k_{γ+uμ} H_i` for `0 ≤ k < deg H_i`, each
/// compared with the expected `γ`-shift or `μ̄`-shift.
pub fn vinberg_limit_family(g: &LieAlgebra, gamma: &Functional, mu: &Functional, invariants: &[CPoly]) -> Result<VinbergLimit> {
    let (q, mu_bar) = limit_preconditions(g, gamma, mu)?;
    let mut entries = Vec::new();
    let mut family = Vec::new();
    for (i, h) in invariants.iter().enumerate() {
        let deg = h.degree().unwrap_or(0);
        let (split, top) = poisson::gamma_top(h, gamma)?;
        let top_q = q.descend(&top)?;
        for k in 0..deg {
            let formal = pencil_shift_formal(h, &gamma.values, &mu.values, k)?;
            let binom = pencil_shift_binomial(h, &gamma.values, &mu.values, k)?;
            let (low, power) = lowest_u_component(&formal)?;
            let (case, expected_power, prediction) = if k <= split {
                let mut p = h.clone();
                for _ in 0..k {
                    p = p.directional_derivative(&gamma.values)?;
                }
                (LimitCase::Gamma, 0, p)
            } else {
                let mut p = top_q.clone();
                for _ in 0..(k - split) {
                    p = p.directional_derivative(&mu_bar.values)?;
                }
                (LimitCase::MuBar, (k - split) as usize, q.lift(&p)?)
            };
            entries.push(LimitEntry {
                invariant: i,
                k,
                split,
                lowest_power: power,
                case,
                routes_agree: formal == binom,
                matches: power == expected_power && proportional(&prediction, &low),
            });
            family.push(low);
        }
    }
    Ok(VinbergLimit { q, mu_bar, entries, family })
}

/// `ϖ` of each limit family member.
pub fn quantised_limit_family(u: &Arc<UAlgebra>, limit: &VinbergLimit) -> Result<Vec<(String, PBWElement)>> {
    limit
        .entries
        .iter()
        .zip(&limit.family)
        .map(|(e, p)| Ok((format!("lim H{}_({})", e.invariant, e.k), symmetrise(u, p)?)))
        .collect()
}

/// Chain subalgebra spanned by the basis elements whose matrix position
/// lies in `lo..=hi` in both indices, with its matrix of coordinates.
fn chain_member(g: &LieAlgebra, lo: usize, hi: usize) -> Result<(Subalgebra, AlgMatrix<CPoly>)> {
    let indices: Vec<usize> = g
        .positions()
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| (lo..=hi).contains(&i) && (lo..=hi).contains(&j))
        .map(|(b, _)| b)
        .collect();
    let sub = g.restrict(&Subspace::coordinate(&indices, g.dim()))?;
    let ctx = sub.alg.ctx().clone();
    let local = |b: usize| sub.space.pivots.iter().position(|&p| p == b);
    let mut mat = Vec::new();
    for i in lo..=hi {
        let mut row = Vec::new();
        for j in lo..=hi {
            let sv = g.entry(i, j).ok_or_else(|| Error::Unsupported("algebra has no matrix realisation".into()))?;
            let mut p = CPoly::zero(&ctx);
            for (b, c) in sv {
                let a = local(*b).ok_or_else(|| Error::Precondition("chain member is not closed".into()))?;
                p = &p + &CPoly::var(&ctx, a).scale(c);
            }
            row.push(p);
        }
        mat.push(row);
    }
    Ok((sub, mat))
}

pub struct GtFamily {
    pub algebra: Arc<UAlgebra>,
    pub elements: Vec<(String, PBWElement)>,
    pub symbols: Vec<CPoly>,
}

impl GtFamily {
    fn push(&mut self, label: String, p: CPoly) -> Result<()> {
        self.elements.push((label, symmetrise(&self.algebra, &p)?));
        self.symbols.push(p);
        Ok(())
    }
}

/// `E_ii` and `ϖ(Det_m)` of each `gl` on the trailing indices `k..N`.
pub fn gt_gl(n: usize) -> Result<GtFamily> {
    if n < 1 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    let g = LieAlgebra::gl(n);
    let mut fam = GtFamily { algebra: UAlgebra::of(&g), elements: Vec::new(), symbols: Vec::new() };
    for i in 0..n {
        let b = g.basis_index(i, i).unwrap();
        fam.push(g.basis()[b].clone(), CPoly::var(g.ctx(), b))?;
    }
    for k in 0..n {
        let (sub, mat) = chain_member(&g, k, n - 1)?;
        for m in 1..=(n - k) {
            let p = sub.lift(&invariants::det_sym(&mat, m)?)?;
            fam.push(format!("Phi{m}^({k})"), p)?;
        }
    }
    Ok(fam)
}

/// For `sp_2n`: `F_ii` (`i < n`), and for each `sp` on the indices
/// `m..=2n−1−m` the invariants `Det_2i` with their first shifts along
/// `h(m)`, the coordinate functional of `F_mm`.
pub fn gt_sp(n: usize) -> Result<GtFamily> {
    if n < 1 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let g = LieAlgebra::sp(2 * n);
    let mut fam = GtFamily { algebra: UAlgebra::of(&g), elements: Vec::new(), symbols: Vec::new() };
    for i in 0..n {
        let b = g.basis_index(i, i).unwrap();
        fam.push(g.basis()[b].clone(), CPoly::var(g.ctx(), b))?;
    }
    for m in 0..n {
        let (sub, mat) = chain_member(&g, m, 2 * n - 1 - m)?;
        let fmm = g.basis_index(m, m).unwrap();
        let mut h = vec![Scalar::zero(); sub.alg.dim()];
        h[sub.space.pivots.iter().position(|&p| p == fmm).unwrap()] = Scalar::one();
        for i in 1..=(n - m) {
            let phi = invariants::det_sym(&mat, 2 * i)?;
            let dphi = phi.directional_derivative(&h)?;
            fam.push(format!("Phi{}^({m})", 2 * i), sub.lift(&phi)?)?;
            if !dphi.is_zero() {
                fam.push(format!("dPhi{}^({m})", 2 * i), sub.lift(&dphi)?)?;
            }
        }
    }
    Ok(fam)
}

/// Symmetrised determinant of the `F_ij` block on the given indices,
/// computed with PBW entries.
pub fn pbw_block_det(u: &Arc<UAlgebra>, indices: &[usize]) -> Result<PBWElement> {
    let g = u.lie();
    if g.family() == Family::Custom {
        return Err(Error::Unsupported("algebra has no matrix realisation".into()));
    }
    let mut mat: AlgMatrix<PBWElement> = Vec::new();
    for &i in indices {
        let mut row = Vec::new();
        for &j in indices {
            let mut v = vec![Scalar::zero(); g.dim()];
            for (b, c) in g.entry(i, j).unwrap() {
                v[*b] = c.clone();
            }
            row.push(PBWElement::linear(u, &v));
        }
        mat.push(row);
    }
    invariants::det_sym(&mat, indices.len())
}

/// `Det[F_ij]_{i,j∈{2,3,4}} − Det[F_ij]_{i,j∈{1,2,3}}` in `U(sp_4)`.
pub fn sp4_det_difference(u: &Arc<UAlgebra>) -> Result<PBWElement> {
    let a = pbw_block_det(u, &[1, 2, 3])?;
    let b = pbw_block_det(u, &[0, 1, 2])?;
    a.try_add(&b.scale(&Scalar::from_int(-1)))
}
