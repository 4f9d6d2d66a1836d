//! Matrices with prescribed Jordan data inside gl_N, o_N and sp_N.
//!
//! For o/sp the matrix is first assembled from invariant pieces, each with a
//! known invariant form:
//! - a block `J_k(λ)` paired with `-J_k(λ)ᵀ` on `V ⊕ V*` (any eigenvalue);
//! - a single nilpotent block of size `L` (even for sp, odd for o) with the
//!   form `ω(e_a, e_b) = s·(-1)^(L+1-a)` when `a + b = L + 1`.
//!
//! A hyperbolic basis `(p_i, q_i)` of the total space (plus one anisotropic
//! vector for odd orthogonal N) is then mapped onto `e_i, e_i'`, which
//! carry the form the algebra preserves. The result is conjugated into that
//! basis, and the Gram matrix is checked exactly before returning.

use crate::error::{Error, Result};
use crate::lie::{Family, JordanData};
use crate::linalg::{self, Mat};
use crate::scalar::Scalar;

fn jordan_block(lambda: &Scalar, k: usize) -> Mat {
    let mut m = linalg::zeros(k, k);
    for i in 0..k {
        m[i][i] = lambda.clone();
        if i + 1 < k {
            m[i][i + 1] = Scalar::one();
        }
    }
    m
}

struct Piece {
    a: Mat,
    gram: Mat,
    pairs: Vec<(Vec<Scalar>, Vec<Scalar>)>,
    /// anisotropic vector with `ω(m, m) = ±1`
    middle: Option<(Vec<Scalar>, i64)>,
}

fn unit(d: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); d];
    v[i] = Scalar::one();
    v
}

fn pair_piece(lambda: &Scalar, k: usize, symplectic: bool) -> Piece {
    let j = jordan_block(lambda, k);
    let mut a = linalg::zeros(2 * k, 2 * k);
    let mut gram = linalg::zeros(2 * k, 2 * k);
    for r in 0..k {
        for c in 0..k {
            a[r][c] = j[r][c].clone();
            a[k + r][k + c] = -&j[c][r];
        }
        gram[r][k + r] = Scalar::one();
        gram[k + r][r] = Scalar::from_int(if symplectic { -1 } else { 1 });
    }
    let pairs = (0..k).map(|i| (unit(2 * k, i), unit(2 * k, k + i))).collect();
    Piece { a, gram, pairs, middle: None }
}

fn single_piece(l: usize, want_middle: i64) -> Piece {
    let a = jordan_block(&Scalar::zero(), l);
    // 1-based a in the formula; here 0-based index i has a = i + 1
    let base = |i: usize| -> i64 { if (l - i) % 2 == 0 { 1 } else { -1 } };
    let h = l / 2;
    let s = if l % 2 == 1 { want_middle * base(h) } else { 1 };
    let mut gram = linalg::zeros(l, l);
    for i in 0..l {
        gram[i][l - 1 - i] = Scalar::from_int(s * base(i));
    }
    let pairs = (0..h)
        .map(|i| {
            let mut q = unit(l, l - 1 - i);
            q[l - 1 - i] = Scalar::from_int(s * base(i)).inv().unwrap();
            (unit(l, i), q)
        })
        .collect();
    let middle = (l % 2 == 1).then(|| (unit(l, h), s * base(h)));
    Piece { a, gram, pairs, middle }
}

fn direct_sum(pieces: &[Piece]) -> (Mat, Mat, Vec<(Vec<Scalar>, Vec<Scalar>)>, Vec<(Vec<Scalar>, i64)>) {
    let total: usize = pieces.iter().map(|p| p.a.len()).sum();
    let mut a = linalg::zeros(total, total);
    let mut gram = linalg::zeros(total, total);
    let mut pairs = Vec::new();
    let mut middles = Vec::new();
    let mut off = 0;
    let embed = |v: &[Scalar], off: usize| {
        let mut w = vec![Scalar::zero(); total];
        for (i, x) in v.iter().enumerate() {
            w[off + i] = x.clone();
        }
        w
    };
    for p in pieces {
        let d = p.a.len();
        for r in 0..d {
            for c in 0..d {
                a[off + r][off + c] = p.a[r][c].clone();
                gram[off + r][off + c] = p.gram[r][c].clone();
            }
        }
        for (x, y) in &p.pairs {
            pairs.push((embed(x, off), embed(y, off)));
        }
        if let Some((m, s)) = &p.middle {
            middles.push((embed(m, off), *s));
        }
        off += d;
    }
    (a, gram, pairs, middles)
}

fn target_form(family: Family, n: usize) -> Mat {
    let mut g = linalg::zeros(n, n);
    for a in 0..n {
        let b = n - 1 - a;
        g[a][b] = Scalar::from_int(match family {
            Family::Sp if a >= n / 2 => -1,
            _ => 1,
        });
    }
    g
}

/// Matrix realisation of the Jordan data in the given family.
pub fn realise(family: Family, n: usize, data: &JordanData) -> Result<Mat> {
    data.validate(family, n)?;
    if family == Family::Gl {
        let mut m = linalg::zeros(n, n);
        let mut off = 0;
        for g in &data.0 {
            let lambda = g.ev.value()?;
            for &k in &g.sizes {
                let j = jordan_block(&lambda, k);
                for r in 0..k {
                    for c in 0..k {
                        m[off + r][off + c] = j[r][c].clone();
                    }
                }
                off += k;
            }
        }
        return Ok(m);
    }
    let symplectic = family == Family::Sp;
    let mut pieces = Vec::new();
    let mut next_middle = 1;
    let mut done: Vec<usize> = Vec::new();
    for (gi, g) in data.0.iter().enumerate() {
        if done.contains(&gi) {
            continue;
        }
        if g.ev.is_zero() {
            // sizes that need a partner block: odd for sp, even for o
            let mut sizes = g.sizes.clone();
            while let Some(k) = sizes.first().copied() {
                sizes.remove(0);
                let paired = (k % 2 == 1) == symplectic;
                if paired {
                    let pos = sizes.iter().position(|&x| x == k).expect("validated multiplicity");
                    sizes.remove(pos);
                    pieces.push(pair_piece(&Scalar::zero(), k, symplectic));
                } else {
                    pieces.push(single_piece(k, next_middle));
                    if k % 2 == 1 {
                        next_middle = -next_middle;
                    }
                }
            }
        } else {
            let lambda = g.ev.value()?;
            let partner = data
                .0
                .iter()
                .position(|h| h.ev == g.ev.neg())
                .expect("validated partner");
            done.push(partner);
            for &k in &g.sizes {
                pieces.push(pair_piece(&lambda, k, symplectic));
            }
        }
    }
    let (a, gram, mut pairs, mut middles) = direct_sum(&pieces);
    // combine anisotropic vectors of opposite sign into hyperbolic pairs
    let form = |u: &[Scalar], v: &[Scalar]| -> Scalar { u.iter().zip(linalg::mat_vec(&gram, v)).map(|(x, y)| x * &y).sum() };
    while middles.len() >= 2 {
        let pi = middles.iter().position(|m| m.1 == 1).unwrap();
        let (m1, _) = middles.remove(pi);
        let ni = middles.iter().position(|m| m.1 == -1).unwrap();
        let (m2, _) = middles.remove(ni);
        let p: Vec<Scalar> = m1.iter().zip(&m2).map(|(x, y)| x + y).collect();
        let half = Scalar::new(1, 2);
        let q: Vec<Scalar> = m1.iter().zip(&m2).map(|(x, y)| &(x - y) * &half).collect();
        pairs.push((p, q));
    }
    let h = n / 2;
    if pairs.len() != h || middles.len() != n % 2 || middles.first().is_some_and(|m| m.1 != 1) {
        return Err(Error::InvalidJordanData("could not build a hyperbolic basis".into()));
    }
    let mut cols: Vec<Vec<Scalar>> = vec![Vec::new(); n];
    for (i, (p, q)) in pairs.into_iter().enumerate() {
        cols[i] = p;
        cols[n - 1 - i] = q;
    }
    if let Some((m, _)) = middles.pop() {
        cols[h] = m;
    }
    let p = linalg::transpose(&cols);
    let check: Mat = (0..n).map(|r| (0..n).map(|c| form(&cols[r], &cols[c])).collect()).collect();
    if check != target_form(family, n) {
        return Err(Error::InvalidJordanData("internal: basis change does not preserve the form".into()));
    }
    let pinv = linalg::inverse(&p).ok_or_else(|| Error::InvalidJordanData("internal: singular basis change".into()))?;
    Ok(linalg::mul(&pinv, &linalg::mul(&a, &p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;

    /// ranks of (X - λ)^k for k = 1..=n
    fn rank_profile(m: &Mat, lambda: &Scalar) -> Vec<usize> {
        let n = m.len();
        let mut shifted = m.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = &row[i] - lambda;
        }
        (1..=n).map(|k| linalg::rank(&linalg::pow(&shifted, k as u32))).collect()
    }

    fn profile_of_sizes(n: usize, sizes: &[usize]) -> Vec<usize> {
        // rank of N^k on a block of size s is max(s - k, 0); other eigenvalue blocks stay invertible
        let other = n - sizes.iter().sum::<usize>();
        (1..=n).map(|k| other + sizes.iter().map(|&s| s.saturating_sub(k)).sum::<usize>()).collect()
    }

    #[test]
    fn symplectic_nilpotent_types() {
        for sizes in [vec![4], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1], vec![6], vec![3, 3], vec![4, 2], vec![2, 2, 1, 1]] {
            let n: usize = sizes.iter().sum();
            let alg = LieAlgebra::sp(n);
            let f = alg.jordan_to_functional(&JordanData::nilpotent(&sizes)).unwrap();
            assert!(f.is_nilpotent());
            assert_eq!(rank_profile(f.matrix.as_ref().unwrap(), &Scalar::zero()), profile_of_sizes(n, &sizes), "{sizes:?}");
        }
    }

    #[test]
    fn orthogonal_nilpotent_types() {
        for sizes in [vec![3], vec![1, 1, 1], vec![5], vec![3, 1, 1], vec![2, 2, 1], vec![3, 1], vec![2, 2], vec![1, 1, 1, 1]] {
            let n: usize = sizes.iter().sum();
            let alg = LieAlgebra::o(n);
            let f = alg.jordan_to_functional(&JordanData::nilpotent(&sizes)).unwrap();
            assert_eq!(rank_profile(f.matrix.as_ref().unwrap(), &Scalar::zero()), profile_of_sizes(n, &sizes), "{sizes:?}");
        }
    }

    #[test]
    fn mixed_symplectic_data() {
        let data = JordanData::from_json_str(
            r#"[{"ev":"0","sizes":[1,1]},{"ev":"3","sizes":[2,1,1]},{"ev":"-3","sizes":[2,1,1]}]"#,
        )
        .unwrap();
        let alg = LieAlgebra::sp(10);
        let f = alg.jordan_to_functional(&data).unwrap();
        let m = f.matrix.as_ref().unwrap();
        assert_eq!(rank_profile(m, &Scalar::from_int(3)), profile_of_sizes(10, &[2, 1, 1]));
        assert_eq!(rank_profile(m, &Scalar::from_int(-3)), profile_of_sizes(10, &[2, 1, 1]));
        assert_eq!(rank_profile(m, &Scalar::zero()), profile_of_sizes(10, &[1, 1]));
        // centraliser: gl_4 part with nilpotent (2,1,1) has dim 10, sp_2 part 3
        assert_eq!(alg.stabiliser(&f).dim(), 13);
    }

    #[test]
    fn symbolic_eigenvalue_needs_number() {
        let data = JordanData::from_json_str(r#"[{"ev":"l","sizes":[1]},{"ev":"-l","sizes":[1]}]"#).unwrap();
        assert!(realise(Family::Sp, 2, &data).is_err());
    }
}
