//! Partitions for induced nilpotent orbits and the skew diagram of free
//! generators in types A and C.

use std::fmt;

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Family, Functional, JordanData, LieAlgebra};

/// Weakly decreasing positive rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        rows.retain(|&r| r > 0);
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!("{rows:?} is not weakly decreasing")));
        }
        Ok(Partition(rows))
    }

    pub fn rows(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn multiplicity(&self, r: usize) -> usize {
        self.0.iter().filter(|&&x| x == r).count()
    }

    /// Every odd row length occurs an even number of times.
    pub fn is_symplectic(&self) -> bool {
        self.0.iter().all(|&r| r % 2 == 0 || self.multiplicity(r) % 2 == 0)
    }

    /// Row-wise sum.
    pub fn add(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        Partition((0..n).map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0)).collect())
    }

    pub fn scaled(&self, c: usize) -> Partition {
        Partition(self.0.iter().map(|r| r * c).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n`, largest first.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for r in (1..=left.min(max)).rev() {
            cur.push(r);
            rec(left - r, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn induced_partition_a(blocks: &[Partition]) -> Result<Partition> {
    let first = blocks.first().ok_or_else(|| Error::Precondition("no blocks".into()))?;
    Ok(blocks[1..].iter().fold(first.clone(), |acc, b| acc.add(b)))
}

/// Repeatedly takes the first odd row length (from the top) with odd
/// multiplicity and moves one box from its last occurrence to the next row.
pub fn kempken_modify(pi: &Partition) -> Result<Partition> {
    let mut rows = pi.0.clone();
    // every step moves a box one row down
    for _ in 0..=pi.total() * pi.total() {
        let p = Partition(rows.clone());
        let Some(beta) = rows.iter().copied().find(|&r| r % 2 == 1 && p.multiplicity(r) % 2 == 1) else {
            return Ok(p);
        };
        let last = rows.iter().rposition(|&r| r == beta).unwrap();
        let stuck = || Error::Precondition(format!("Kempken procedure stuck at {p}"));
        let next = *rows.get(last + 1).ok_or_else(stuck)?;
        if next % 2 == 0 {
            return Err(stuck());
        }
        rows[last] -= 1;
        rows[last + 1] += 1;
    }
    Err(Error::Precondition(format!("Kempken procedure did not terminate on {pi}")))
}

/// The row holding `m` when `1..=total` is written row by row into `pi`.
pub fn row_index(pi: &Partition, m: usize) -> Result<usize> {
    if m == 0 || m > pi.total() {
        return Err(Error::Precondition(format!("m = {m} outside 1..={}", pi.total())));
    }
    let mut acc = 0;
    for (i, r) in pi.0.iter().enumerate() {
        acc += r;
        if m <= acc {
            return Ok(i + 1);
        }
    }
    unreachable!()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagramType {
    A,
    C,
}

/// `Γ/σ` with cells `(m, k)` ordered by `m` then `k`, both descending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewGeneratorSet {
    pub kind: DiagramType,
    pub pi: Partition,
    pub pi_gamma: Partition,
    /// `(m, r(m))` for the `m` indexing rows of `Γ`, ascending.
    pub r: Vec<(usize, usize)>,
    pub gamma_shape: Partition,
    pub sigma: Partition,
    pub cells: Vec<(usize, usize)>,
    pub excluded: Vec<(usize, usize)>,
}

fn build(kind: DiagramType, pi: Partition, pi_gamma: Partition, ms: Vec<usize>) -> Result<SkewGeneratorSet> {
    let r: Vec<(usize, usize)> = ms.iter().map(|&m| Ok((m, row_index(&pi_gamma, m)?))).collect::<Result<_>>()?;
    let mut cells = Vec::new();
    let mut excluded = Vec::new();
    for &(m, rm) in r.iter().rev() {
        for k in (0..m).rev() {
            if k + rm <= m {
                cells.push((m, k));
            } else {
                excluded.push((m, k));
            }
        }
    }
    // σ keeps its trailing zeros, one entry per row of Γ
    let sigma = Partition(r.iter().rev().map(|&(_, rm)| rm - 1).collect());
    let gamma_shape = Partition(ms.iter().rev().copied().collect());
    Ok(SkewGeneratorSet { kind, pi, pi_gamma, r, gamma_shape, sigma, cells, excluded })
}

pub fn generator_set_a(n: usize, pi: &Partition) -> Result<SkewGeneratorSet> {
    if pi.total() != n {
        return Err(Error::DimensionMismatch { expected: n, got: pi.total() });
    }
    build(DiagramType::A, pi.clone(), pi.clone(), (1..=n).collect())
}

/// `pi` is the induced partition; it is modified to `Π_γ` first.
pub fn generator_set_c(n: usize, pi: &Partition) -> Result<SkewGeneratorSet> {
    if pi.total() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, got: pi.total() });
    }
    let pi_gamma = kempken_modify(pi)?;
    build(DiagramType::C, pi.clone(), pi_gamma, (1..=n).map(|m| 2 * m).collect())
}

/// Diagram for Jordan data of a gl_N (type A) or sp_2n (type C) element.
pub fn generator_set_from_jordan(kind: DiagramType, data: &JordanData) -> Result<SkewGeneratorSet> {
    let size = data.size();
    let pi = Partition::new(data.induced_partition())?;
    match kind {
        DiagramType::A => {
            data.validate(Family::Gl, size)?;
            generator_set_a(size, &pi)
        }
        DiagramType::C => {
            data.validate(Family::Sp, size)?;
            generator_set_c(size / 2, &pi)
        }
    }
}

struct OrderedMap<'a>(&'a [(usize, usize)]);

impl Serialize for OrderedMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (m, r) in self.0 {
            map.serialize_entry(&m.to_string(), r)?;
        }
        map.end()
    }
}

impl Serialize for SkewGeneratorSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(6))?;
        map.serialize_entry("Pi", &self.pi)?;
        map.serialize_entry("Pi_gamma", &self.pi_gamma)?;
        map.serialize_entry("r", &OrderedMap(&self.r))?;
        map.serialize_entry("sigma", &self.sigma.0)?;
        map.serialize_entry("cells", &self.cells)?;
        map.serialize_entry("excluded", &self.excluded)?;
        map.end()
    }
}

impl SkewGeneratorSet {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// `½(dim g − dim g_x) + rank`.
pub fn expected_generator_count(g: &LieAlgebra, x: &Functional) -> Result<usize> {
    let rank = g.rank().ok_or_else(|| Error::Unsupported("rank of a custom algebra".into()))?;
    let orbit = g.dim() - g.stabiliser(x).dim();
    if orbit % 2 == 1 {
        return Err(Error::Precondition("odd orbit dimension".into()));
    }
    Ok(orbit / 2 + rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{generating_invariants, InvariantKind};
    use crate::lie::{Eigen, JordanGroup};
    use crate::poisson::degrees_top;
    use crate::scalar::Scalar;

    fn p(rows: &[usize]) -> Partition {
        Partition::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn induced_sums() {
        assert_eq!(induced_partition_a(&[p(&[2, 1]), p(&[2, 1, 1])]).unwrap(), p(&[4, 2, 1]));
        assert_eq!(induced_partition_a(&[p(&[3, 1])]).unwrap(), p(&[3, 1]));
        assert_eq!(induced_partition_a(&[p(&[1, 1]), p(&[2, 1, 1]), p(&[2, 1, 1])]).unwrap(), p(&[5, 3, 2]));
        assert!(induced_partition_a(&[]).is_err());
    }

    #[test]
    fn kempken_examples() {
        assert_eq!(kempken_modify(&p(&[3, 3])).unwrap(), p(&[3, 3]));
        assert_eq!(kempken_modify(&p(&[5, 3, 2])).unwrap(), p(&[4, 4, 2]));
        assert_eq!(kempken_modify(&p(&[2, 2])).unwrap(), p(&[2, 2]));
        assert!(kempken_modify(&p(&[3])).is_err());
        assert!(kempken_modify(&p(&[3, 2])).is_err());
    }

    #[test]
    fn row_indices() {
        let pg = p(&[4, 4, 2]);
        let r: Vec<usize> = [2, 4, 6, 8, 10].iter().map(|&m| row_index(&pg, m).unwrap()).collect();
        assert_eq!(r, vec![1, 1, 2, 2, 3]);
        let small = p(&[2, 1]);
        assert_eq!((1..=3).map(|m| row_index(&small, m).unwrap()).collect::<Vec<_>>(), vec![1, 1, 2]);
        assert!(row_index(&small, 0).is_err());
        assert!(row_index(&small, 4).is_err());
    }

    #[test]
    fn type_a_sets() {
        let reg = generator_set_a(4, &p(&[4])).unwrap();
        assert_eq!(reg.cells.len(), 10);
        assert!(reg.excluded.is_empty());
        let zero = generator_set_a(4, &p(&[1, 1, 1, 1])).unwrap();
        assert_eq!(zero.cells, vec![(4, 0), (3, 0), (2, 0), (1, 0)]);
        let s = generator_set_a(3, &p(&[2, 1])).unwrap();
        assert_eq!(s.cells, vec![(3, 1), (3, 0), (2, 1), (2, 0), (1, 0)]);
        assert!(generator_set_a(4, &p(&[2, 1])).is_err());
    }

    #[test]
    fn type_c_extremes() {
        let reg = generator_set_c(3, &p(&[6])).unwrap();
        assert!(reg.sigma.rows().iter().all(|&x| x == 0));
        assert_eq!(reg.cells.len(), 12);
        let zero = generator_set_c(3, &p(&[1; 6])).unwrap();
        assert_eq!(zero.sigma.rows(), &[5, 3, 1]);
        assert_eq!(zero.cells, vec![(6, 0), (4, 0), (2, 0)]);
    }

    #[test]
    fn sp10_golden() {
        let s = generator_set_c(5, &p(&[5, 3, 2])).unwrap();
        assert_eq!(s.pi_gamma, p(&[4, 4, 2]));
        assert_eq!(s.sigma.rows(), &[2, 1, 1, 0, 0]);
        assert_eq!(s.excluded, vec![(10, 9), (10, 8), (8, 7), (6, 5)]);
        assert_eq!(s.cells.len(), 26);
        assert!(s.to_json_string().starts_with(r#"{"Pi":[5,3,2],"Pi_gamma":[4,4,2],"r":{"2":1,"4":1,"6":2,"8":2,"10":3},"sigma":[2,1,1,0,0],"cells":[[10,7],[10,6]"#));
    }

    /// Π = α + 2β with α symplectic at eigenvalue 0 and β the blocks of a
    /// ±λ pair (possibly several pairs, whose sum is again a partition).
    fn admissible_c(total: usize) -> Vec<(Partition, Partition)> {
        let mut out = Vec::new();
        for a in 0..=total {
            if (total - a) % 2 == 1 {
                continue;
            }
            let alphas: Vec<Partition> = if a == 0 {
                vec![Partition(vec![])]
            } else {
                partitions(a).into_iter().filter(|p| p.is_symplectic()).collect()
            };
            let betas: Vec<Partition> =
                if a == total { vec![Partition(vec![])] } else { partitions((total - a) / 2) };
            for al in &alphas {
                for be in &betas {
                    out.push((al.clone(), be.clone()));
                }
            }
        }
        out
    }

    #[test]
    fn r_equivalence_type_c() {
        for total in (2..=12).step_by(2) {
            for (a, b) in admissible_c(total) {
                let pi = a.add(&b.scaled(2));
                let pg = kempken_modify(&pi).unwrap();
                assert!(pg.is_symplectic(), "{pi} -> {pg}");
                assert_eq!(pg.total(), pi.total());
                for m in (2..=total).step_by(2) {
                    assert_eq!(row_index(&pg, m).unwrap(), row_index(&pi, m).unwrap(), "{pi} -> {pg}, m = {m}");
                }
            }
        }
    }

    fn jordan_c(a: &Partition, b: &Partition) -> JordanData {
        let mut groups = Vec::new();
        if !a.is_empty() {
            groups.push(JordanGroup { ev: Eigen::Num(Scalar::zero()), sizes: a.rows().to_vec() });
        }
        if !b.is_empty() {
            groups.push(JordanGroup { ev: Eigen::Num(Scalar::from_int(1)), sizes: b.rows().to_vec() });
            groups.push(JordanGroup { ev: Eigen::Num(Scalar::from_int(-1)), sizes: b.rows().to_vec() });
        }
        JordanData(groups)
    }

    #[test]
    fn counts_match_stabilisers_type_c() {
        for n in 1..=4 {
            let g = LieAlgebra::sp(2 * n);
            for (a, b) in admissible_c(2 * n) {
                let data = jordan_c(&a, &b);
                let set = generator_set_from_jordan(DiagramType::C, &data).unwrap();
                let mu = g.jordan_to_functional(&data).unwrap();
                let gamma = g.jordan_to_functional(&JordanData::nilpotent(set.pi_gamma.rows())).unwrap();
                let from_mu = expected_generator_count(&g, &mu).unwrap();
                let from_gamma = expected_generator_count(&g, &gamma).unwrap();
                assert_eq!(set.cells.len(), from_mu, "sp{} {a} + 2{b}", 2 * n);
                assert_eq!(from_mu, from_gamma);
            }
        }
    }

    /// Ordered lists of partitions with sizes adding up to `n`, one per
    /// distinct eigenvalue.
    fn block_lists(n: usize) -> Vec<Vec<Partition>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for s in 1..=n {
            for head in partitions(s) {
                for mut tail in block_lists(n - s) {
                    tail.insert(0, head.clone());
                    out.push(tail);
                }
            }
        }
        out
    }

    #[test]
    fn counts_match_stabilisers_type_a() {
        for n in 1..=5 {
            let g = LieAlgebra::gl(n);
            for blocks in block_lists(n) {
                let data = JordanData(
                    blocks
                        .iter()
                        .enumerate()
                        .map(|(i, b)| JordanGroup { ev: Eigen::Num(Scalar::from_int(i as i64)), sizes: b.rows().to_vec() })
                        .collect(),
                );
                let set = generator_set_from_jordan(DiagramType::A, &data).unwrap();
                let mu = g.jordan_to_functional(&data).unwrap();
                assert_eq!(set.cells.len(), expected_generator_count(&g, &mu).unwrap(), "gl{n} {blocks:?}");
            }
            for pi in partitions(n) {
                let gamma = g.jordan_to_functional(&JordanData::nilpotent(pi.rows())).unwrap();
                assert_eq!(generator_set_a(n, &pi).unwrap().cells.len(), expected_generator_count(&g, &gamma).unwrap());
            }
        }
    }

    #[test]
    fn k_range_matches_top_degrees() {
        for n in 1..=4 {
            let g = LieAlgebra::gl(n);
            let invs = generating_invariants(&g, InvariantKind::Det).unwrap();
            for pi in partitions(n) {
                let gamma = g.jordan_to_functional(&JordanData::nilpotent(pi.rows())).unwrap();
                let rep = degrees_top(&g, &invs, &gamma, 7).unwrap();
                for m in 1..=n {
                    assert_eq!(rep.degrees[m - 1] as usize, row_index(&pi, m).unwrap(), "gl{n} {pi} m = {m}");
                }
            }
        }
    }

    #[test]
    fn gl3_expected_count() {
        let g = LieAlgebra::gl(3);
        let gamma = g.jordan_to_functional(&JordanData::nilpotent(&[2, 1])).unwrap();
        assert_eq!(expected_generator_count(&g, &gamma).unwrap(), 5);
        assert_eq!(expected_generator_count(&g, &g.zero_functional()).unwrap(), 3);
    }
}
