//! Quantum shift-of-argument families in `U(g)` and the checks on them.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{self, InvariantKind, InvariantSpec};
use crate::lie::{Functional, LieAlgebra, Subalgebra};
use crate::linalg;
use crate::pbw::{symmetrise, PBWElement, UAlgebra, Word};
use crate::poisson::{self, CheckReport};
use crate::poly::CPoly;
use crate::scalar::Scalar;

/// A shifted invariant and its symmetrisation.
#[derive(Debug, Clone)]
pub struct Generator {
    pub label: String,
    pub invariant: usize,
    pub k: u32,
    pub classical: CPoly,
    pub quantum: PBWElement,
}

/// Nonzero `(1/k!)·∂_μ^k f(F)` for `0 ≤ k < deg`, taken from the shift
/// polynomial `f(μ + F z⁻¹)`.
pub fn shift_family(alg: &LieAlgebra, mu: &Functional, specs: &[InvariantSpec]) -> Result<Vec<(usize, u32, CPoly)>> {
    let mut out = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let coeffs = invariants::shift_poly(alg, mu, s.function, s.m)?;
        let deg = coeffs.len() - 1;
        for (k, c) in coeffs.into_iter().enumerate().take(deg) {
            if !c.is_zero() {
                out.push((i, k as u32, c));
            }
        }
    }
    Ok(out)
}

fn spec_label(s: &InvariantSpec) -> String {
    match s.function {
        invariants::MatrixFunction::Det => format!("Phi{}", s.m),
        invariants::MatrixFunction::Per => format!("Psi{}", s.m),
        invariants::MatrixFunction::Pf => "Pf".to_string(),
    }
}

/// Generators `ϖ(∂_μ^k H)` of the quantum shift algebra: `Det` shifts for
/// gl (or `Per` with `kind = Per`) and sp, `Per` shifts for o, plus the
/// Pfaffian shifts for even o.
pub fn a_mu_generators(u: &Arc<UAlgebra>, mu: &Functional, kind: InvariantKind) -> Result<Vec<Generator>> {
    let alg = u.lie();
    let specs = invariants::generating_specs(alg, kind)?;
    let fam = shift_family(alg, mu, &specs)?;
    fam.into_par_iter()
        .map(|(i, k, c)| {
            let quantum = symmetrise(u, &c)?;
            Ok(Generator {
                label: format!("{}_({k})", spec_label(&specs[i])),
                invariant: i,
                k,
                classical: c,
                quantum,
            })
        })
        .collect()
}

/// Default invariant kind per family: `Det` for gl and sp, `Per` for o.
pub fn default_kind(alg: &LieAlgebra) -> InvariantKind {
    match alg.family() {
        crate::lie::Family::O => InvariantKind::Per,
        _ => InvariantKind::Det,
    }
}

/// All pairwise commutators within a family of PBW elements.
pub fn check_commutative(elements: &[(String, PBWElement)]) -> Result<CheckReport> {
    let pairs: Vec<(usize, usize)> = (0..elements.len())
        .flat_map(|i| ((i + 1)..elements.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<Option<String>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let c = elements[i].1.commutator(&elements[j].1)?;
            Ok((!c.is_zero()).then(|| {
                format!("[{}, {}] has {} nonzero terms", elements[i].0, elements[j].0, c.num_terms())
            }))
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
        degrees: elements.iter().map(|e| e.1.degree().unwrap_or(0) as u32).collect(),
        b_q_gamma: None,
    })
}

pub fn labelled(gens: &[Generator]) -> Vec<(String, PBWElement)> {
    gens.iter().map(|g| (g.label.clone(), g.quantum.clone())).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradedDegree {
    pub degree: usize,
    pub dim_gr: usize,
    pub dim_mf: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradedReport {
    pub max_degree: usize,
    pub products: usize,
    pub degrees: Vec<GradedDegree>,
}

impl GradedReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.equal)
    }
}

fn exponent_vectors(degrees: &[usize], max: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: usize, degrees: &[usize], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == degrees.len() {
            out.push(cur.clone());
            return;
        }
        let mut e = 0;
        loop {
            cur.push(e);
            rec(i + 1, left - e as usize * degrees[i], degrees, cur, out);
            cur.pop();
            e += 1;
            if degrees[i] == 0 || e as usize * degrees[i] > left {
                break;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, max, degrees, &mut Vec::new(), &mut out);
    out
}

fn span_rank(polys: &[CPoly]) -> (usize, Vec<crate::poly::Monomial>) {
    let mut monos: Vec<crate::poly::Monomial> = polys.iter().flat_map(|p| p.terms().map(|t| t.0.clone())).collect();
    monos.sort_by(|a, b| a.grlex_cmp(b));
    monos.dedup();
    let rows: linalg::Mat = polys.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect();
    (linalg::rank(&rows), monos)
}

/// Compares `gr` of the subalgebra generated by the quantum generators with
/// the algebra generated by their classical counterparts, degree by degree
/// up to `max_degree`. Products of generators of total degree `≤ max_degree`
/// are reduced in filtration order, so cancellations of leading terms are
/// seen; the comparison is truncated at `max_degree`.
pub fn graded_image_check(gens: &[Generator], max_degree: usize) -> Result<GradedReport> {
    let Some(first) = gens.first() else {
        return Ok(GradedReport { max_degree, products: 0, degrees: Vec::new() });
    };
    let u = first.quantum.algebra().clone();
    let ctx = u.lie().ctx().clone();
    let degrees: Vec<usize> = gens.iter().map(|g| g.classical.degree().unwrap_or(0) as usize).collect();
    if degrees.iter().any(|&d| d == 0) {
        return Err(Error::Precondition("constant generator in graded check".into()));
    }
    let exps = exponent_vectors(&degrees, max_degree);

    let products: Vec<(PBWElement, CPoly, usize)> = exps
        .par_iter()
        .map(|e| {
            let mut q = PBWElement::scalar(&u, Scalar::one());
            let mut c = CPoly::one(&ctx);
            let mut d = 0;
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    q = q.try_mul(&gens[i].quantum).expect("same algebra");
                    c = &c * &gens[i].classical;
                    d += degrees[i];
                }
            }
            (q, c, d)
        })
        .collect();

    // columns: words of decreasing length
    let mut words: Vec<Word> = products.iter().flat_map(|p| p.0.terms().map(|t| t.0.clone())).collect();
    words.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    words.dedup();
    let col: BTreeMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let rows: linalg::Mat = products
        .iter()
        .map(|p| {
            let mut r = vec![Scalar::zero(); words.len()];
            for (w, c) in p.0.terms() {
                r[col[w]] = c.clone();
            }
            r
        })
        .collect();
    let (ech, pivots) = linalg::rref(&rows);

    let mut report = Vec::new();
    for d in 0..=max_degree {
        // symbols in degree d: degree-d parts of echelon rows whose pivot has length d
        let gr: Vec<CPoly> = ech
            .iter()
            .zip(&pivots)
            .filter(|(_, &p)| words[p].len() == d)
            .map(|(row, _)| {
                let mut e = PBWElement::zero(&u);
                let terms = words
                    .iter()
                    .zip(row)
                    .filter(|(w, c)| w.len() == d && !c.is_zero())
                    .map(|(w, c)| (w.iter().map(|&i| i as usize).collect::<Vec<_>>(), c.clone()));
                e = e.try_add(&PBWElement::from_normal_terms(&u, terms).expect("normal words")).unwrap();
                e.homogeneous_part(d)
            })
            .collect();
        let mf: Vec<CPoly> = products.iter().filter(|p| p.2 == d).map(|p| p.1.clone()).collect();
        let (rg, _) = span_rank(&gr);
        let (rm, _) = span_rank(&mf);
        let both: Vec<CPoly> = gr.iter().chain(mf.iter()).cloned().collect();
        let (rb, _) = span_rank(&both);
        report.push(GradedDegree { degree: d, dim_gr: rg, dim_mf: rm, equal: rg == rm && rm == rb });
    }
    Ok(GradedReport { max_degree, products: products.len(), degrees: report })
}

/// Elements `ϖ_q(∂_ν^k P_i)` in `U(g_γ)` where `P_i = ^γH_i` is written in
/// coordinates of `q = g_γ`, for nilpotent `γ`.
pub struct CentraliserFamily {
    pub q: Subalgebra,
    pub uq: Arc<UAlgebra>,
    pub tops: Vec<CPoly>,
    pub elements: Vec<(String, PBWElement)>,
    pub classical: Vec<CPoly>,
}

pub fn centraliser_quantisation(g: &LieAlgebra, gamma: &Functional, invariants: &[CPoly], nu: &Functional) -> Result<CentraliserFamily> {
    if !gamma.is_nilpotent() {
        return Err(Error::Precondition("γ must be nilpotent".into()));
    }
    let stab = g.stabiliser(gamma);
    let q = g.restrict(&stab)?;
    if nu.values.len() != q.alg.dim() {
        return Err(Error::DimensionMismatch { expected: q.alg.dim(), got: nu.values.len() });
    }
    let uq = UAlgebra::new(q.alg.clone());
    let mut tops = Vec::new();
    let mut elements = Vec::new();
    let mut classical = Vec::new();
    for (i, h) in invariants.iter().enumerate() {
        let (_, top) = poisson::gamma_top(h, gamma)?;
        if !poisson::lies_in_subalgebra(&top, &stab)? {
            return Err(Error::Precondition(format!("top shift of invariant {i} is not in S(g_γ)")));
        }
        let p = q.descend(&top)?;
        let deg = p.degree().unwrap_or(0);
        let parts = p.shift_expand(&nu.values)?;
        for (k, c) in parts.into_iter().enumerate().take(deg as usize) {
            if !c.is_zero() {
                elements.push((format!("P{i}_({k})"), symmetrise(&uq, &c)?));
                classical.push(c);
            }
        }
        tops.push(p);
    }
    Ok(CentraliserFamily { q, uq, tops, elements, classical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn gl2_regular_family_commutes() {
        let g = LieAlgebra::gl(2);
        let u = UAlgebra::of(&g);
        let mu = g.diagonal_functional(&[q(1, 1), q(2, 1)]).unwrap();
        let gens = a_mu_generators(&u, &mu, InvariantKind::Det).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(check_commutative(&labelled(&gens)).unwrap().passed());
        let rep = graded_image_check(&gens, 3).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn non_commuting_pair_is_reported() {
        let g = LieAlgebra::gl(2);
        let u = UAlgebra::of(&g);
        let els = vec![
            ("E12".to_string(), PBWElement::generator(&u, 1)),
            ("E21".to_string(), PBWElement::generator(&u, 2)),
        ];
        let rep = check_commutative(&els).unwrap();
        assert_eq!(rep.pairs_checked, 1);
        assert_eq!(rep.failures.len(), 1);
    }

    #[test]
    fn exponent_enumeration() {
        let v = exponent_vectors(&[1, 2], 3);
        // (0,0) (0,1) (1,0) (1,1) (2,0) (3,0)
        assert_eq!(v.len(), 6);
    }
}
