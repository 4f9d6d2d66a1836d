//! Lie–Poisson structure on `S(g)`, argument shifts of invariants and the
//! commutative checks built on them.
//!
//! Polynomials live in the algebra's coordinate context, optionally extended
//! by formal variables; formal variables behave as constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Functional, LieAlgebra, Subspace};
use crate::linalg;
use crate::poly::{CPoly, Monomial};
use crate::scalar::Scalar;

fn check_ctx(g: &LieAlgebra, p: &CPoly) -> Result<()> {
    let c = p.ctx();
    if c.lie_dim() != g.dim() || c.names()[..g.dim()] != *g.basis() {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

/// `{a, b} = Σ_{i,j} ∂_i a · ∂_j b · [ξ_i, ξ_j]`.
pub fn poisson_bracket(g: &LieAlgebra, a: &CPoly, b: &CPoly) -> Result<CPoly> {
    check_ctx(g, a)?;
    check_ctx(g, b)?;
    if a.ctx() != b.ctx() {
        return Err(Error::ContextMismatch);
    }
    let ctx = a.ctx();
    let dim = g.dim();
    let da: Vec<usize> = a.support_vars().into_iter().filter(|&v| v < dim).collect();
    let db: Vec<(usize, CPoly)> = b
        .support_vars()
        .into_iter()
        .filter(|&v| v < dim)
        .map(|v| (v, b.partial(v)))
        .collect();
    let mut out = CPoly::zero(ctx);
    for i in da {
        // Σ_j ∂_j b · [ξ_i, ξ_j]
        let mut inner = CPoly::zero(ctx);
        for (j, pbj) in &db {
            let br = g.bracket(i, *j);
            if br.is_empty() {
                continue;
            }
            let lin = CPoly::from_terms(ctx, br.iter().map(|(k, c)| (Monomial::var(*k), c.clone())));
            inner = &inner + &(pbj * &lin);
        }
        if !inner.is_zero() {
            out = &out + &(&a.partial(i) * &inner);
        }
    }
    Ok(out)
}

/// `{ξ_b, H} = 0` for every basis element.
pub fn is_invariant(g: &LieAlgebra, h: &CPoly) -> Result<bool> {
    for b in 0..g.dim() {
        if !poisson_bracket(g, &CPoly::var(h.ctx(), b), h)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invariance under a subalgebra given by its basis vectors in `g`.
pub fn is_invariant_under(g: &LieAlgebra, s: &Subspace, h: &CPoly) -> Result<bool> {
    for row in &s.rows {
        let lin = CPoly::linear(h.ctx(), row);
        if !poisson_bracket(g, &lin, h)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `p ∈ S(s)`: every derivative along the annihilator of `s` vanishes.
pub fn lies_in_subalgebra(p: &CPoly, s: &Subspace) -> Result<bool> {
    for v in s.annihilator() {
        if !p.directional_derivative(&v)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One member of a shifted family: `(1/k!)·∂_γ^k H_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Shifted {
    pub invariant: usize,
    pub k: u32,
    pub poly: CPoly,
}

/// Nonzero shifts `(1/k!)·∂_γ^k H_i` for `0 ≤ k < deg H_i`.
///
/// Every input must be homogeneous and `g`-invariant.
pub fn mf_family(g: &LieAlgebra, invariants: &[CPoly], gamma: &Functional) -> Result<Vec<Shifted>> {
    let mut out = Vec::new();
    for (i, h) in invariants.iter().enumerate() {
        check_ctx(g, h)?;
        if !h.is_homogeneous() {
            return Err(Error::Precondition(format!("invariant {i} is not homogeneous")));
        }
        if !is_invariant(g, h)? {
            return Err(Error::Precondition(format!("polynomial {i} is not invariant")));
        }
        let deg = h.degree().unwrap_or(0);
        let parts = h.shift_expand(&gamma.values)?;
        for (k, p) in parts.into_iter().enumerate().take(deg as usize) {
            if !p.is_zero() {
                out.push(Shifted { invariant: i, k: k as u32, poly: p });
            }
        }
    }
    Ok(out)
}

/// `(m, ^γH)`: `m` is the largest order with `∂_γ^m H ≠ 0` and
/// `^γH = (1/m!)·∂_γ^m H`.
pub fn gamma_top(h: &CPoly, gamma: &Functional) -> Result<(u32, CPoly)> {
    let parts = h.shift_expand(&gamma.values)?;
    let (m, top) = parts
        .into_iter()
        .enumerate()
        .rev()
        .find(|(_, p)| !p.is_zero())
        .ok_or_else(|| Error::Precondition("zero polynomial has no top shift".into()))?;
    Ok((m as u32, top))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degrees: Vec<u32>,
    pub sum: u32,
    pub b_q_gamma: usize,
    pub dim_q: usize,
    pub ind_q: usize,
}

/// Degrees of `^γH_i` against `b(g_γ)`; the index of `g_γ` is estimated
/// from random functionals.
pub fn degrees_top(g: &LieAlgebra, invariants: &[CPoly], gamma: &Functional, seed: u64) -> Result<DegreeReport> {
    let mut degrees = Vec::new();
    for h in invariants {
        degrees.push(gamma_top(h, gamma)?.1.degree().unwrap_or(0));
    }
    let q = g.restrict(&g.stabiliser(gamma))?;
    let ind_q = q.alg.index_estimate(6, seed);
    let dim_q = q.alg.dim();
    Ok(DegreeReport {
        sum: degrees.iter().sum(),
        degrees,
        b_q_gamma: (dim_q + ind_q) / 2,
        dim_q,
        ind_q,
    })
}

/// Outcome of a family-wide commutation check.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub pairs_checked: usize,
    pub failures: Vec<String>,
    pub degrees: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_q_gamma: Option<usize>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All pairwise Poisson brackets within a family.
pub fn check_poisson_commutative(g: &LieAlgebra, family: &[CPoly]) -> Result<CheckReport> {
    use rayon::prelude::*;
    let pairs: Vec<(usize, usize)> = (0..family.len())
        .flat_map(|i| ((i + 1)..family.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<Option<String>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let br = poisson_bracket(g, &family[i], &family[j])?;
            Ok((!br.is_zero()).then(|| format!("{{{i},{j}}} has {} nonzero terms", br.num_terms())))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    Ok(CheckReport {
        pairs_checked: pairs.len(),
        failures,
        degrees: family.iter().map(|p| p.degree().unwrap_or(0)).collect(),
        b_q_gamma: None,
    })
}

/// Rank of the Jacobian `[∂_k p_j(x)]` at a point of the Lie coordinates.
pub fn jacobian_rank(polys: &[CPoly], point: &[Scalar]) -> Result<usize> {
    let mut rows = Vec::with_capacity(polys.len());
    for p in polys {
        let d = p.ctx().lie_dim();
        if point.len() != p.ctx().len() {
            return Err(Error::DimensionMismatch { expected: p.ctx().len(), got: point.len() });
        }
        let mut row = Vec::with_capacity(d);
        for k in 0..d {
            row.push(p.partial(k).evaluate(point)?);
        }
        rows.push(row);
    }
    Ok(linalg::rank(&rows))
}

/// Largest Jacobian rank over `trials` random integer points in `[-10, 10]`.
pub fn independence_witness(polys: &[CPoly], trials: usize, seed: u64) -> Result<usize> {
    let Some(first) = polys.first() else { return Ok(0) };
    let n = first.ctx().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let point: Vec<Scalar> = (0..n).map(|_| Scalar::from_int(rng.gen_range(-10..=10))).collect();
        best = best.max(jacobian_rank(polys, &point)?);
        if best == polys.len() {
            break;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KostantPoint {
    pub differential_rank: usize,
    pub stabiliser_dim: usize,
    /// `rank = n` exactly when `dim g_x = n`
    pub equivalence_holds: bool,
    /// every `d_x H_i` lies in `g_x`
    pub differentials_in_stabiliser: bool,
}

/// Pointwise comparison of the differentials of the invariants with the
/// stabiliser at `x`.
pub fn kostant_pointwise_check(g: &LieAlgebra, invariants: &[CPoly], x: &Functional) -> Result<KostantPoint> {
    let n = invariants.len();
    let gram = g.skew_form(x);
    let mut rows = Vec::new();
    let mut inside = true;
    for h in invariants {
        check_ctx(g, h)?;
        let dx: Vec<Scalar> = (0..g.dim()).map(|k| h.partial(k).evaluate(&x.values)).collect::<Result<_>>()?;
        if linalg::mat_vec(&gram, &dx).iter().any(|c| !c.is_zero()) {
            inside = false;
        }
        rows.push(dx);
    }
    let rank = linalg::rank(&rows);
    let stab = g.stabiliser(x).dim();
    Ok(KostantPoint {
        differential_rank: rank,
        stabiliser_dim: stab,
        equivalence_holds: (rank == n) == (stab == n),
        differentials_in_stabiliser: inside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableContext;
    use crate::scalar::q;
    use rand::Rng;

    fn random_poly(ctx: &std::sync::Arc<VariableContext>, dim: usize, rng: &mut impl Rng) -> CPoly {
        let mut p = CPoly::zero(ctx);
        for _ in 0..rng.gen_range(1..5) {
            let exps: Vec<u32> = (0..dim).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..3) } else { 0 }).collect();
            p.add_term(Monomial::from_dense(&exps), Scalar::from_int(rng.gen_range(-4..=4)));
        }
        p
    }

    #[test]
    fn bracket_of_coordinates_is_structure_constant() {
        let g = LieAlgebra::gl(2);
        let ctx = g.ctx();
        let br = poisson_bracket(&g, &CPoly::var(ctx, 1), &CPoly::var(ctx, 2)).unwrap();
        assert_eq!(br, &CPoly::var(ctx, 0) - &CPoly::var(ctx, 3));
    }

    #[test]
    fn jacobi_and_leibniz_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [LieAlgebra::gl(2), LieAlgebra::sp(4)] {
            let ctx = g.ctx().clone();
            for _ in 0..10 {
                let (a, b, c) = (
                    random_poly(&ctx, g.dim(), &mut rng),
                    random_poly(&ctx, g.dim(), &mut rng),
                    random_poly(&ctx, g.dim(), &mut rng),
                );
                let pb = |x: &CPoly, y: &CPoly| poisson_bracket(&g, x, y).unwrap();
                let jac = &(&pb(&a, &pb(&b, &c)) + &pb(&b, &pb(&c, &a))) + &pb(&c, &pb(&a, &b));
                assert!(jac.is_zero());
                assert_eq!(pb(&a, &(&b * &c)), &(&pb(&a, &b) * &c) + &(&b * &pb(&a, &c)));
                assert_eq!(pb(&a, &b), -&pb(&b, &a));
            }
        }
    }

    #[test]
    fn formal_variables_are_constants() {
        let g = LieAlgebra::gl(2);
        let ctx = g.ctx().with_formal(&["u"]);
        let u = CPoly::var(&ctx, 4);
        let a = &CPoly::var(&ctx, 1) * &u;
        let br = poisson_bracket(&g, &a, &CPoly::var(&ctx, 2)).unwrap();
        assert_eq!(br, &(&CPoly::var(&ctx, 0) - &CPoly::var(&ctx, 3)) * &u);
    }

    #[test]
    fn trace_square_shifts() {
        // H = E11 E22 - E12 E21 on gl2, γ = dual of E12
        let g = LieAlgebra::gl(2);
        let ctx = g.ctx();
        let v = |i| CPoly::var(ctx, i);
        let h = &(&v(0) * &v(3)) - &(&v(1) * &v(2));
        assert!(is_invariant(&g, &h).unwrap());
        let gamma = g.functional_from_values(vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)]).unwrap();
        let (m, top) = gamma_top(&h, &gamma).unwrap();
        assert_eq!(m, 1);
        assert_eq!(top, -&v(2));
        let stab = g.stabiliser(&gamma);
        assert!(lies_in_subalgebra(&top, &stab).unwrap());
        assert!(is_invariant_under(&g, &stab, &top).unwrap());
        assert!(!lies_in_subalgebra(&v(1), &stab).unwrap());
    }

    #[test]
    fn kostant_at_zero_and_generic_point() {
        let g = LieAlgebra::gl(2);
        let ctx = g.ctx();
        let v = |i| CPoly::var(ctx, i);
        let invs = vec![&v(0) + &v(3), &(&v(0) * &v(3)) - &(&v(1) * &v(2))];
        let zero = kostant_pointwise_check(&g, &invs, &g.zero_functional()).unwrap();
        assert_eq!(zero.differential_rank, 1);
        assert_eq!(zero.stabiliser_dim, 4);
        assert!(zero.equivalence_holds && zero.differentials_in_stabiliser);
        let x = g.functional_from_values(vec![q(1, 1), q(2, 1), q(3, 1), q(5, 1)]).unwrap();
        let p = kostant_pointwise_check(&g, &invs, &x).unwrap();
        assert_eq!((p.differential_rank, p.stabiliser_dim), (2, 2));
        assert!(p.equivalence_holds && p.differentials_in_stabiliser);
    }

    #[test]
    fn non_invariant_input_is_rejected() {
        let g = LieAlgebra::gl(2);
        let p = CPoly::var(g.ctx(), 1);
        assert!(matches!(mf_family(&g, &[p], &g.zero_functional()), Err(Error::Precondition(_))));
    }
}
