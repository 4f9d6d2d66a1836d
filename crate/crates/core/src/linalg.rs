//! Dense exact linear algebra over the rationals: echelon forms, kernels,
//! inverses. Matrices are row-major `Vec<Vec<Scalar>>`.

use crate::scalar::Scalar;

pub type Mat = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn from_ints(rows: &[&[i64]]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        assert_eq!(a[i].len(), k, "inner dimension mismatch");
        for (l, bl) in b.iter().enumerate() {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !bl[j].is_zero() {
                    out[i][j] += &(&a[i][l] * &bl[j]);
                }
            }
        }
    }
    out
}

pub fn pow(a: &Mat, e: u32) -> Mat {
    let mut acc = identity(a.len());
    for _ in 0..e {
        acc = mul(&acc, a);
    }
    acc
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn is_zero(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(Scalar::is_zero))
}

pub fn mat_vec(a: &Mat, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Reduced row echelon form; returns the nonzero rows and the pivot columns.
pub fn rref(a: &Mat) -> (Mat, Vec<usize>) {
    let mut m: Mat = a.clone();
    let rows = m.len();
    if rows == 0 {
        return (m, Vec::new());
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(a: &Mat) -> usize {
    rref(a).1.len()
}

/// Basis of `{v : a·v = 0}`, itself in reduced echelon form.
pub fn kernel(a: &Mat, cols: usize) -> Mat {
    let (r, pivots) = rref(a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Scalar::zero(); cols];
        v[f] = Scalar::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -&row[f];
        }
        basis.push(v);
    }
    rref(&basis).0
}

/// `None` if singular.
pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let aug: Mat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Coordinates of `v` in the row space spanned by an echelon basis with the
/// given pivots, or `None` if `v` is outside the span.
pub fn coordinates_in(basis: &Mat, pivots: &[usize], v: &[Scalar]) -> Option<Vec<Scalar>> {
    let coords: Vec<Scalar> = pivots.iter().map(|&p| v[p].clone()).collect();
    let mut recon = vec![Scalar::zero(); v.len()];
    for (c, row) in coords.iter().zip(basis) {
        for (x, y) in recon.iter_mut().zip(row) {
            *x += &(c * y);
        }
    }
    (recon.as_slice() == v).then_some(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one() {
        let a = from_ints(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(3));
        assert!(inverse(&from_ints(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn coordinates() {
        let (b, p) = rref(&from_ints(&[&[1, 1, 0], &[0, 1, 1]]));
        let v: Vec<Scalar> = [2, 5, 3].iter().map(|&x| Scalar::from_int(x)).collect();
        let c = coordinates_in(&b, &p, &v).unwrap();
        assert_eq!(c.len(), 2);
        let w: Vec<Scalar> = [1, 0, 0].iter().map(|&x| Scalar::from_int(x)).collect();
        assert!(coordinates_in(&b, &p, &w).is_none());
    }
}
