//! Finite-dimensional Lie algebras given by structure constants, with the
//! classical matrix families gl_N, o_N and sp_N built in.
//!
//! Matrix indices are 0-based in code; `i' = N-1-i` is the mirror index.
//! For o_N and sp_N the spanning elements are
//! `F_ij = E_ij - θ_ij E_j'i'` with `θ_ij = 1` (orthogonal) or
//! `θ_ij = ε_i ε_j` (symplectic, `ε_i = +1` for `i < N/2`, `-1` otherwise).
//! Since `F_ij = -θ_ij F_j'i'`, the basis keeps one representative per pair:
//! positions with `i + j < N - 1` (above the antidiagonal), plus the
//! antidiagonal `F_{i,i'}` for sp (where it equals `2 E_{i,i'}`). For o the
//! antidiagonal elements vanish.
//!
//! A functional `μ ∈ g*` is stored by its values on the basis together with
//! the matrix `[μ(E_ij)]` (gl) or `[μ(F_ij)]` (o, sp).

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::poly::{CPoly, VariableContext};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gl,
    O,
    Sp,
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gl => "gl",
            Family::O => "o",
            Family::Sp => "sp",
            Family::Custom => "custom",
        })
    }
}

/// Sparse vector: `(basis index, coefficient)`.
pub type SVec = Vec<(usize, Scalar)>;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    id: u64,
    family: Family,
    n: usize,
    basis: Vec<String>,
    // brackets[i * dim + j] = [ξ_i, ξ_j]
    brackets: Vec<SVec>,
    ctx: Arc<VariableContext>,
    /// Matrix entries `E_ij`/`F_ij` as combinations of basis elements.
    entries: Option<Vec<Vec<SVec>>>,
    /// Matrix position of each basis element (classical families).
    reps: Vec<(usize, usize)>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.n == other.n && self.basis == other.basis && self.brackets == other.brackets
    }
}

fn label(prefix: char, n: usize, i: usize, j: usize) -> String {
    if n <= 9 {
        format!("{prefix}{}{}", i + 1, j + 1)
    } else {
        format!("{prefix}{}_{}", i + 1, j + 1)
    }
}

fn mirror(n: usize, i: usize) -> usize {
    n - 1 - i
}

fn theta(family: Family, n: usize, i: usize, j: usize) -> i64 {
    match family {
        Family::Sp => {
            let e = |k: usize| if k < n / 2 { 1 } else { -1 };
            e(i) * e(j)
        }
        _ => 1,
    }
}

fn commutator(a: &Mat, b: &Mat) -> Mat {
    let ab = linalg::mul(a, b);
    let ba = linalg::mul(b, a);
    ab.iter()
        .zip(&ba)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

impl LieAlgebra {
    fn finish(
        family: Family,
        n: usize,
        basis: Vec<String>,
        brackets: Vec<SVec>,
        entries: Option<Vec<Vec<SVec>>>,
        reps: Vec<(usize, usize)>,
    ) -> Self {
        let ctx = VariableContext::new(&basis, &[] as &[String]);
        LieAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            family,
            n,
            basis,
            brackets,
            ctx,
            entries,
            reps,
        }
    }

    /// gl_N with basis `E_ij` in row-major order.
    pub fn gl(n: usize) -> Self {
        assert!(n >= 1);
        let idx = |i: usize, j: usize| i * n + j;
        let mut basis = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                basis.push(label('E', n, i, j));
            }
        }
        let dim = n * n;
        let mut brackets = vec![Vec::new(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        // [E_ij, E_kl] = δ_jk E_il - δ_li E_kj
                        let mut v: HashMap<usize, Scalar> = HashMap::new();
                        if j == k {
                            *v.entry(idx(i, l)).or_default() += &Scalar::one();
                        }
                        if l == i {
                            *v.entry(idx(k, j)).or_default() -= &Scalar::one();
                        }
                        let mut sv: SVec = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                        sv.sort_by_key(|p| p.0);
                        brackets[idx(i, j) * dim + idx(k, l)] = sv;
                    }
                }
            }
        }
        let entries = (0..n)
            .map(|i| (0..n).map(|j| vec![(idx(i, j), Scalar::one())]).collect())
            .collect();
        let reps = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        Self::finish(Family::Gl, n, basis, brackets, Some(entries), reps)
    }

    /// o_N (N ≥ 2).
    pub fn o(n: usize) -> Self {
        assert!(n >= 2);
        Self::classical(Family::O, n)
    }

    /// sp_N; `n` is the matrix size and must be even.
    pub fn sp(n: usize) -> Self {
        assert!(n >= 2 && n % 2 == 0, "sp needs an even matrix size");
        Self::classical(Family::Sp, n)
    }

    fn classical(family: Family, n: usize) -> Self {
        let mut reps = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i + j < n - 1 || (family == Family::Sp && i + j == n - 1) {
                    reps.push((i, j));
                }
            }
        }
        let pos: HashMap<(usize, usize), usize> = reps.iter().enumerate().map(|(b, &p)| (p, b)).collect();
        let basis: Vec<String> = reps.iter().map(|&(i, j)| label('F', n, i, j)).collect();

        // F_ij as a combination of basis elements
        let mut entries = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if let Some(&b) = pos.get(&(i, j)) {
                    entries[i][j] = vec![(b, Scalar::one())];
                } else if let Some(&b) = pos.get(&(mirror(n, j), mirror(n, i))) {
                    entries[i][j] = vec![(b, Scalar::from_int(-theta(family, n, i, j)))];
                }
            }
        }

        let mats: Vec<Mat> = reps
            .iter()
            .map(|&(i, j)| {
                let mut m = linalg::zeros(n, n);
                m[i][j] += &Scalar::one();
                m[mirror(n, j)][mirror(n, i)] -= &Scalar::from_int(theta(family, n, i, j));
                m
            })
            .collect();

        let dim = reps.len();
        let mut brackets = vec![Vec::new(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let c = commutator(&mats[a], &mats[b]);
                let mut sv = SVec::new();
                for (k, &(i, j)) in reps.iter().enumerate() {
                    let mut coef = c[i][j].clone();
                    if i + j == n - 1 {
                        coef = &coef / &Scalar::from_int(2);
                    }
                    if !coef.is_zero() {
                        sv.push((k, coef));
                    }
                }
                // the coordinates must reproduce the commutator exactly
                let mut recon = linalg::zeros(n, n);
                for (k, coef) in &sv {
                    for (r, row) in mats[*k].iter().enumerate() {
                        for (s, x) in row.iter().enumerate() {
                            if !x.is_zero() {
                                recon[r][s] += &(coef * x);
                            }
                        }
                    }
                }
                assert_eq!(recon, c, "classical basis is not closed under the bracket");
                brackets[a * dim + b] = sv;
            }
        }
        Self::finish(family, n, basis, brackets, Some(entries), reps)
    }

    /// Builds an algebra from explicit structure constants `(i, j, k, c)`
    /// meaning `[ξ_i, ξ_j] ∋ c·ξ_k`. Only the given pairs are set; the caller
    /// is responsible for antisymmetry (see [`check_structure`](Self::check_structure)).
    pub fn from_structure_constants(basis: Vec<String>, constants: &[(usize, usize, usize, Scalar)]) -> Result<Self> {
        let dim = basis.len();
        let mut acc: Vec<HashMap<usize, Scalar>> = vec![HashMap::new(); dim * dim];
        for (i, j, k, c) in constants {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::InvalidAlgebra(format!("index out of range in ({i},{j},{k})")));
            }
            *acc[i * dim + j].entry(*k).or_default() += c;
        }
        let brackets = acc
            .into_iter()
            .map(|m| {
                let mut v: SVec = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                v.sort_by_key(|p| p.0);
                v
            })
            .collect();
        Ok(Self::finish(Family::Custom, dim, basis, brackets, None, Vec::new()))
    }

    /// Parses names such as `gl3`, `gl_3`, `o5`, `sp4`.
    pub fn parse(name: &str) -> Result<Self> {
        let s = name.trim().to_ascii_lowercase().replace('_', "");
        let (fam, num) = if let Some(r) = s.strip_prefix("gl") {
            (Family::Gl, r)
        } else if let Some(r) = s.strip_prefix("sp") {
            (Family::Sp, r)
        } else if let Some(r) = s.strip_prefix("so") {
            (Family::O, r)
        } else if let Some(r) = s.strip_prefix('o') {
            (Family::O, r)
        } else {
            return Err(Error::Parse(format!("unknown algebra {name:?}")));
        };
        let n: usize = num.parse().map_err(|_| Error::Parse(format!("bad size in {name:?}")))?;
        match fam {
            Family::Gl if n >= 1 => Ok(Self::gl(n)),
            Family::O if n >= 2 => Ok(Self::o(n)),
            Family::Sp if n >= 2 && n % 2 == 0 => Ok(Self::sp(n)),
            _ => Err(Error::Parse(format!("unsupported algebra {name:?}"))),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Matrix size for classical algebras, dimension otherwise.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::Custom => format!("custom{}", self.dim()),
            f => format!("{f}{}", self.n),
        }
    }

    /// Coordinate context: one non-formal variable per basis element.
    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    /// Rank for the classical families.
    pub fn rank(&self) -> Option<usize> {
        match self.family {
            Family::Gl => Some(self.n),
            Family::O | Family::Sp => Some(self.n / 2),
            Family::Custom => None,
        }
    }

    pub fn bracket(&self, i: usize, j: usize) -> &SVec {
        &self.brackets[i * self.dim() + j]
    }

    pub fn bracket_vec(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![Scalar::zero(); dim];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.bracket(i, j) {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    /// The matrix entries `E_ij` / `F_ij` as combinations of basis elements.
    pub fn entry(&self, i: usize, j: usize) -> Option<&SVec> {
        self.entries.as_ref().map(|e| &e[i][j])
    }

    /// Matrix position `(i, j)` of each basis element (classical families).
    pub fn positions(&self) -> &[(usize, usize)] {
        &self.reps
    }

    /// Basis index of the element at matrix position `(i, j)`, if it is one.
    pub fn basis_index(&self, i: usize, j: usize) -> Option<usize> {
        self.reps.iter().position(|&p| p == (i, j))
    }

    /// Matrix of coordinate polynomials `[E_ij]` or `[F_ij]`.
    pub fn entry_matrix(&self) -> Result<Vec<Vec<CPoly>>> {
        self.entry_matrix_in(&self.ctx)
    }

    /// Same as [`entry_matrix`](Self::entry_matrix) in a context that
    /// extends this algebra's coordinates.
    pub fn entry_matrix_in(&self, ctx: &Arc<VariableContext>) -> Result<Vec<Vec<CPoly>>> {
        let entries = self
            .entries
            .as_ref()
            .ok_or_else(|| Error::Unsupported("algebra has no matrix realisation".into()))?;
        Ok(entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|sv| CPoly::from_terms(ctx, sv.iter().map(|(b, c)| (crate::poly::Monomial::var(*b), c.clone()))))
                    .collect()
            })
            .collect())
    }

    /// Checks antisymmetry and the Jacobi identity on all basis triples.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        let dim = self.dim();
        let e = |i: usize| {
            let mut v = vec![Scalar::zero(); dim];
            v[i] = Scalar::one();
            v
        };
        for i in 0..dim {
            for j in 0..dim {
                let a = self.bracket_vec(&e(i), &e(j));
                let b = self.bracket_vec(&e(j), &e(i));
                if a.iter().zip(&b).any(|(x, y)| !(x + y).is_zero()) {
                    return Err(format!("antisymmetry fails for ({}, {})", self.basis[i], self.basis[j]));
                }
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let t1 = self.bracket_vec(&e(i), &self.bracket_vec(&e(j), &e(k)));
                    let t2 = self.bracket_vec(&e(j), &self.bracket_vec(&e(k), &e(i)));
                    let t3 = self.bracket_vec(&e(k), &self.bracket_vec(&e(i), &e(j)));
                    if (0..dim).any(|l| !(&(&t1[l] + &t2[l]) + &t3[l]).is_zero()) {
                        return Err(format!(
                            "Jacobi identity fails for ({}, {}, {})",
                            self.basis[i], self.basis[j], self.basis[k]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Copy with one structure constant perturbed; used for fault injection.
    pub fn with_corrupted_constant(&self, i: usize, j: usize, k: usize, delta: Scalar) -> Self {
        let mut out = self.clone();
        out.id = NEXT_ID.fetch_add(1, Ordering::Relaxed);
        out.family = Family::Custom;
        out.entries = None;
        out.reps.clear();
        let dim = self.dim();
        let slot = &mut out.brackets[i * dim + j];
        match slot.iter_mut().find(|p| p.0 == k) {
            Some(p) => p.1 = &p.1 + &delta,
            None => slot.push((k, delta)),
        }
        slot.retain(|p| !p.1.is_zero());
        slot.sort_by_key(|p| p.0);
        out
    }

    /// Matrix `Γ_ab = γ([ξ_a, ξ_b])`.
    pub fn skew_form(&self, gamma: &Functional) -> Mat {
        let dim = self.dim();
        let mut m = linalg::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                m[a][b] = self.bracket(a, b).iter().map(|(k, c)| c * &gamma.values[*k]).sum();
            }
        }
        m
    }

    /// `g_γ = ker γ̂`, the stabiliser of `γ` under the coadjoint action.
    pub fn stabiliser(&self, gamma: &Functional) -> Subspace {
        let basis = linalg::kernel(&self.skew_form(gamma), self.dim());
        Subspace::from_rows(basis, self.dim())
    }

    /// Smallest stabiliser dimension over `trials` random functionals.
    pub fn index_estimate(&self, trials: usize, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..trials.max(1))
            .map(|_| self.stabiliser(&self.random_functional(&mut rng)).dim())
            .min()
            .unwrap()
    }

    /// Index: the exact value `rank` for the classical families, a random
    /// estimate otherwise.
    pub fn index(&self, seed: u64) -> usize {
        self.rank().unwrap_or_else(|| self.index_estimate(8, seed))
    }

    /// `(dim + ind) / 2`.
    pub fn b(&self, seed: u64) -> usize {
        (self.dim() + self.index(seed)) / 2
    }

    /// Structure constants restricted to a subalgebra.
    pub fn restrict(&self, s: &Subspace) -> Result<Subalgebra> {
        let d = s.dim();
        let mut constants = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let v = self.bracket_vec(&s.rows[a], &s.rows[b]);
                let coords = linalg::coordinates_in(&s.rows, &s.pivots, &v).ok_or(Error::NotASubalgebra)?;
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        constants.push((a, b, k, c));
                    }
                }
            }
        }
        let labels = s.rows.iter().map(|r| self.vector_label(r)).collect();
        let alg = LieAlgebra::from_structure_constants(labels, &constants)?;
        Ok(Subalgebra { alg: Arc::new(alg), parent: self.ctx.clone(), space: s.clone() })
    }

    fn vector_label(&self, v: &[Scalar]) -> String {
        let nz: Vec<(usize, &Scalar)> = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        if nz.len() == 1 && nz[0].1.is_one() {
            return self.basis[nz[0].0].clone();
        }
        let mut s = String::new();
        for (i, (k, c)) in nz.iter().enumerate() {
            let neg = c.signum() < 0;
            let a = if neg { -*c } else { (*c).clone() };
            if i > 0 {
                s.push(if neg { '-' } else { '+' });
            } else if neg {
                s.push('-');
            }
            if !a.is_one() {
                s.push_str(&format!("{a}*"));
            }
            s.push_str(&self.basis[*k]);
        }
        format!("({s})")
    }

    pub fn functional_from_values(&self, values: Vec<Scalar>) -> Result<Functional> {
        if values.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: values.len() });
        }
        let matrix = self.entries.as_ref().map(|entries| {
            entries
                .iter()
                .map(|row| row.iter().map(|sv| sv.iter().map(|(b, c)| c * &values[*b]).sum()).collect())
                .collect()
        });
        Ok(Functional { values, matrix })
    }

    /// Inverse of the matrix form; rejects matrices that break the o/sp
    /// symmetry `M_j'i' = -θ_ij M_ij`.
    pub fn functional_from_matrix(&self, m: &Mat) -> Result<Functional> {
        let entries = self
            .entries
            .as_ref()
            .ok_or_else(|| Error::Unsupported("algebra has no matrix realisation".into()))?;
        let n = self.n;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidFunctional(format!("expected a {n}x{n} matrix")));
        }
        debug_assert_eq!(entries.len(), n);
        let values = self.reps.iter().map(|&(i, j)| m[i][j].clone()).collect();
        let f = self.functional_from_values(values)?;
        if f.matrix.as_ref() != Some(m) {
            return Err(Error::InvalidFunctional(format!("matrix does not lie in {}", self.name())));
        }
        Ok(f)
    }

    pub fn zero_functional(&self) -> Functional {
        self.functional_from_values(vec![Scalar::zero(); self.dim()]).unwrap()
    }

    /// Integer values in `[-10, 10]` on every basis element.
    pub fn random_functional(&self, rng: &mut impl Rng) -> Functional {
        let values = (0..self.dim()).map(|_| Scalar::from_int(rng.gen_range(-10..=10))).collect();
        self.functional_from_values(values).unwrap()
    }

    /// Matrix `diag(d_1, …)`: all N entries for gl, otherwise
    /// `diag(d_1..d_k, [0], -d_k..-d_1)` with `k = N/2`.
    pub fn diagonal_functional(&self, d: &[Scalar]) -> Result<Functional> {
        let n = self.n;
        let diag: Vec<Scalar> = match self.family {
            Family::Gl => {
                if d.len() != n {
                    return Err(Error::InvalidFunctional(format!("need {n} diagonal entries")));
                }
                d.to_vec()
            }
            Family::O | Family::Sp => {
                let k = n / 2;
                if d.len() != k {
                    return Err(Error::InvalidFunctional(format!("need {k} diagonal entries")));
                }
                let mut v = d.to_vec();
                if n % 2 == 1 {
                    v.push(Scalar::zero());
                }
                v.extend(d.iter().rev().map(|x| -x));
                v
            }
            Family::Custom => return Err(Error::Unsupported("diagonal functional on a custom algebra".into())),
        };
        let mut m = linalg::zeros(n, n);
        for (i, x) in diag.into_iter().enumerate() {
            m[i][i] = x;
        }
        self.functional_from_matrix(&m)
    }

    /// Realises Jordan data as a matrix inside the algebra's matrix form.
    pub fn jordan_to_functional(&self, data: &JordanData) -> Result<Functional> {
        let m = crate::jordan::realise(self.family, self.n, data)?;
        self.functional_from_matrix(&m)
    }

    /// The algebra element `Σ c_k ξ_k` as a matrix (classical families).
    pub fn element_matrix(&self, v: &[Scalar]) -> Result<Mat> {
        if self.entries.is_none() {
            return Err(Error::Unsupported("algebra has no matrix realisation".into()));
        }
        // the basis element at (i, j) is E_ij - θ E_j'i', which on the sp
        // antidiagonal is 2 E_{i,i'}
        let n = self.n;
        let mut m = linalg::zeros(n, n);
        for (&(i, j), x) in self.reps.iter().zip(v) {
            if x.is_zero() {
                continue;
            }
            if self.family == Family::Gl {
                m[i][j] += x;
            } else {
                m[i][j] += x;
                let t = Scalar::from_int(theta(self.family, n, i, j));
                m[mirror(n, j)][mirror(n, i)] -= &(&t * x);
            }
        }
        Ok(m)
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        AlgebraDescriptor {
            family: self.family,
            n: self.n,
            basis: self.basis.clone(),
            structure_constants: if self.family == Family::Custom {
                let dim = self.dim();
                let mut v = Vec::new();
                for i in 0..dim {
                    for j in 0..dim {
                        for (k, c) in self.bracket(i, j) {
                            v.push((i, j, *k, c.clone()));
                        }
                    }
                }
                Some(v)
            } else {
                None
            },
        }
    }

    pub fn from_descriptor(d: &AlgebraDescriptor) -> Result<Self> {
        let alg = match d.family {
            Family::Gl => Self::gl(d.n),
            Family::O => Self::o(d.n),
            Family::Sp if d.n % 2 == 0 => Self::sp(d.n),
            Family::Sp => return Err(Error::InvalidAlgebra("sp needs an even matrix size".into())),
            Family::Custom => {
                let sc = d
                    .structure_constants
                    .as_ref()
                    .ok_or_else(|| Error::InvalidAlgebra("custom algebra needs structure constants".into()))?;
                return Self::from_structure_constants(d.basis.clone(), sc);
            }
        };
        if !d.basis.is_empty() && d.basis != alg.basis {
            return Err(Error::InvalidAlgebra("basis labels do not match the family".into()));
        }
        Ok(alg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDescriptor {
    pub family: Family,
    pub n: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Vec<(usize, usize, usize, Scalar)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    pub values: Vec<Scalar>,
    /// `[μ(E_ij)]` or `[μ(F_ij)]`; absent for custom algebras.
    pub matrix: Option<Mat>,
}

impl Functional {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// `matrix^N = 0`.
    pub fn is_nilpotent(&self) -> bool {
        match &self.matrix {
            Some(m) => linalg::is_zero(&linalg::pow(m, m.len() as u32)),
            None => false,
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Functional {
        Functional {
            values: self.values.iter().map(|x| x * c).collect(),
            matrix: self.matrix.as_ref().map(|m| m.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()),
        }
    }

    pub fn add(&self, other: &Functional) -> Functional {
        Functional {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            matrix: match (&self.matrix, &other.matrix) {
                (Some(a), Some(b)) => Some(
                    a.iter()
                        .zip(b)
                        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
                        .collect(),
                ),
                _ => None,
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.matrix {
            Some(m) => serde_json::json!({ "matrix": m }),
            None => serde_json::json!({ "values": self.values }),
        }
    }
}

/// Subspace of an algebra, stored as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub rows: Mat,
    pub pivots: Vec<usize>,
    pub ambient: usize,
}

impl Subspace {
    pub fn from_rows(rows: Mat, ambient: usize) -> Self {
        let (rows, pivots) = linalg::rref(&rows);
        Subspace { rows, pivots, ambient }
    }

    /// Span of the given basis elements.
    pub fn coordinate(indices: &[usize], ambient: usize) -> Self {
        let rows = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Scalar::zero(); ambient];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Self::from_rows(rows, ambient)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        linalg::coordinates_in(&self.rows, &self.pivots, v).is_some()
    }

    /// Annihilator in the dual: directions `v` with `Σ_k s_k v_k = 0` for every row `s`.
    pub fn annihilator(&self) -> Mat {
        linalg::kernel(&self.rows, self.ambient)
    }
}

/// A subalgebra with its own structure constants and the embedding into
/// the parent.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    pub alg: Arc<LieAlgebra>,
    pub parent: Arc<VariableContext>,
    pub space: Subspace,
}

impl Subalgebra {
    /// Rewrites a polynomial in subalgebra coordinates in terms of the
    /// parent coordinates (`y_a ↦ Σ_k s_ak x_k`).
    pub fn lift(&self, p: &CPoly) -> Result<CPoly> {
        let target = if p.ctx().lie_dim() == p.ctx().len() {
            self.parent.clone()
        } else {
            let formal: Vec<&str> = p.ctx().names()[p.ctx().lie_dim()..].iter().map(|s| s.as_str()).collect();
            self.parent.with_formal(&formal)
        };
        let mut images: Vec<CPoly> = self.space.rows.iter().map(|r| CPoly::linear(&target, r)).collect();
        for f in p.ctx().lie_dim()..p.ctx().len() {
            images.push(CPoly::var_named(&target, p.ctx().name(f))?);
        }
        p.substitute(&images, &target)
    }

    /// For `p ∈ S(subalgebra) ⊂ S(parent)`, returns it in subalgebra
    /// coordinates. The caller should confirm membership first (see
    /// [`crate::poisson::lies_in_subalgebra`]); otherwise the result is the
    /// restriction to the pivot slice.
    pub fn descend(&self, p: &CPoly) -> Result<CPoly> {
        let ctx = self.alg.ctx().clone();
        let mut images = vec![CPoly::zero(&ctx); self.space.ambient];
        for (a, &piv) in self.space.pivots.iter().enumerate() {
            images[piv] = CPoly::var(&ctx, a);
        }
        if p.ctx().lie_dim() != p.ctx().len() {
            return Err(Error::Unsupported("descend expects a polynomial without formal variables".into()));
        }
        p.substitute(&images, &ctx)
    }

    /// `μ̄ = μ` restricted to the subalgebra.
    pub fn restrict_functional(&self, mu: &Functional) -> Functional {
        let values = self
            .space
            .rows
            .iter()
            .map(|r| r.iter().zip(&mu.values).map(|(a, b)| a * b).sum())
            .collect();
        Functional { values, matrix: None }
    }
}

/// Eigenvalue label: a rational number or a symbol such as `l` / `-l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Eigen {
    Num(Scalar),
    Sym { name: String, negated: bool },
}

impl Eigen {
    pub fn parse(s: &str) -> Result<Self> {
        if let Ok(q) = s.parse::<Scalar>() {
            return Ok(Eigen::Num(q));
        }
        let t = s.trim();
        let (negated, name) = match t.strip_prefix('-') {
            Some(r) => (true, r.trim()),
            None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::InvalidJordanData(format!("bad eigenvalue label {s:?}")));
        }
        Ok(Eigen::Sym { name: name.to_string(), negated })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Eigen::Num(q) if q.is_zero())
    }

    pub fn neg(&self) -> Eigen {
        match self {
            Eigen::Num(q) => Eigen::Num(-q),
            Eigen::Sym { name, negated } => Eigen::Sym { name: name.clone(), negated: !negated },
        }
    }

    pub fn value(&self) -> Result<Scalar> {
        match self {
            Eigen::Num(q) => Ok(q.clone()),
            Eigen::Sym { name, .. } => Err(Error::InvalidJordanData(format!(
                "symbolic eigenvalue {name:?} has no numeric realisation"
            ))),
        }
    }
}

impl fmt::Display for Eigen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigen::Num(q) => write!(f, "{q}"),
            Eigen::Sym { name, negated } => write!(f, "{}{name}", if *negated { "-" } else { "" }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanBlockJson {
    pub ev: serde_json::Value,
    pub sizes: Vec<usize>,
}

/// One eigenvalue with the sizes of its Jordan blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanGroup {
    pub ev: Eigen,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanData(pub Vec<JordanGroup>);

impl JordanData {
    pub fn nilpotent(sizes: &[usize]) -> Self {
        JordanData(vec![JordanGroup { ev: Eigen::Num(Scalar::zero()), sizes: sizes.to_vec() }])
    }

    /// `[{"ev":"0","sizes":[1,1]}, ...]`; `ev` may be a number or a string.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: Vec<JordanBlockJson> = serde_json::from_str(s)?;
        let mut groups = Vec::new();
        for b in raw {
            let label = match &b.ev {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => return Err(Error::InvalidJordanData(format!("bad eigenvalue {other}"))),
            };
            let mut sizes = b.sizes;
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(Error::InvalidJordanData("block sizes must be positive".into()));
            }
            groups.push(JordanGroup { ev: Eigen::parse(&label)?, sizes });
        }
        for (i, g) in groups.iter().enumerate() {
            if groups[..i].iter().any(|h| h.ev == g.ev) {
                return Err(Error::InvalidJordanData(format!("eigenvalue {} listed twice", g.ev)));
            }
        }
        Ok(JordanData(groups))
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|g| g.sizes.iter().sum::<usize>()).sum()
    }

    /// Row-wise sum of the block diagrams.
    pub fn induced_partition(&self) -> Vec<usize> {
        let rows = self.0.iter().map(|g| g.sizes.len()).max().unwrap_or(0);
        let mut out = vec![0; rows];
        for g in &self.0 {
            for (i, s) in g.sizes.iter().enumerate() {
                out[i] += s;
            }
        }
        out
    }

    /// Admissibility for the family with matrix size `n`.
    pub fn validate(&self, family: Family, n: usize) -> Result<()> {
        if self.size() != n {
            return Err(Error::InvalidJordanData(format!("sizes add up to {}, expected {n}", self.size())));
        }
        let count = |sizes: &[usize], s: usize| sizes.iter().filter(|&&x| x == s).count();
        let parity_rule = |sizes: &[usize], odd: bool| -> Result<()> {
            for &s in sizes {
                if (s % 2 == 1) == odd && count(sizes, s) % 2 == 1 {
                    return Err(Error::InvalidJordanData(format!(
                        "blocks of size {s} at eigenvalue 0 must come in pairs"
                    )));
                }
            }
            Ok(())
        };
        match family {
            Family::Gl => Ok(()),
            Family::Sp | Family::O => {
                for g in &self.0 {
                    if g.ev.is_zero() {
                        parity_rule(&g.sizes, family == Family::Sp)?;
                    } else {
                        let partner = self.0.iter().find(|h| h.ev == g.ev.neg());
                        match partner {
                            Some(h) if h.sizes == g.sizes => {}
                            _ => {
                                return Err(Error::InvalidJordanData(format!(
                                    "eigenvalue {} needs a partner {} with the same blocks",
                                    g.ev,
                                    g.ev.neg()
                                )))
                            }
                        }
                    }
                }
                Ok(())
            }
            Family::Custom => Err(Error::Unsupported("Jordan data for a custom algebra".into())),
        }
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name(), self.dim())
    }
}

/// Parses a functional given as shorthand or JSON:
/// `zero`, `random`, `regular`, `diag:1,2,3`, `scalar:c`, `nilpotent:2,1`,
/// `jordan:[...]`, a bare matrix `[[...]]`, `{"matrix": ...}` or
/// `{"values": [...]}`.
pub fn parse_functional(alg: &LieAlgebra, spec: &str, rng: &mut impl Rng) -> Result<Functional> {
    let s = spec.trim();
    let parse_list = |r: &str| -> Result<Vec<Scalar>> {
        r.split(',')
            .map(|x| x.trim().parse::<Scalar>().map_err(|e| Error::Parse(e.to_string())))
            .collect()
    };
    if s == "zero" || s == "0" {
        return Ok(alg.zero_functional());
    }
    if s == "random" {
        return Ok(alg.random_functional(rng));
    }
    if s == "regular" {
        let k = match alg.family() {
            Family::Gl => alg.n(),
            Family::O | Family::Sp => alg.n() / 2,
            Family::Custom => return Ok(alg.random_functional(rng)),
        };
        let d: Vec<Scalar> = (1..=k as i64).map(Scalar::from_int).collect();
        return alg.diagonal_functional(&d);
    }
    if let Some(r) = s.strip_prefix("diag:") {
        return alg.diagonal_functional(&parse_list(r)?);
    }
    if let Some(r) = s.strip_prefix("scalar:") {
        if alg.family() != Family::Gl {
            return Err(Error::InvalidFunctional("scalar functionals only exist for gl".into()));
        }
        let c: Scalar = r.trim().parse().map_err(|e: crate::scalar::ParseScalarError| Error::Parse(e.to_string()))?;
        return alg.diagonal_functional(&vec![c; alg.n()]);
    }
    if let Some(r) = s.strip_prefix("nilpotent:") {
        let sizes: Vec<usize> = r
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad block size {x:?}"))))
            .collect::<Result<_>>()?;
        let mut sizes = sizes;
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        return alg.jordan_to_functional(&JordanData::nilpotent(&sizes));
    }
    if let Some(r) = s.strip_prefix("jordan:") {
        return alg.jordan_to_functional(&JordanData::from_json_str(r)?);
    }
    let v: serde_json::Value = serde_json::from_str(s).map_err(|_| Error::Parse(format!("unrecognised functional {spec:?}")))?;
    let to_mat = |v: &serde_json::Value| -> Result<Mat> {
        let m: Vec<Vec<Scalar>> = serde_json::from_value(v.clone())?;
        Ok(m)
    };
    if v.is_array() {
        return alg.functional_from_matrix(&to_mat(&v)?);
    }
    if let Some(m) = v.get("matrix") {
        return alg.functional_from_matrix(&to_mat(m)?);
    }
    if let Some(vals) = v.get("values") {
        let vals: Vec<Scalar> = serde_json::from_value(vals.clone())?;
        return alg.functional_from_values(vals);
    }
    Err(Error::Parse(format!("unrecognised functional {spec:?}")))
}
