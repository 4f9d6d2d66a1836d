//! The minimal ring interface the symmetrised matrix functions need, and
//! polynomials in one central variable over such a ring.

use crate::poly::CPoly;
use crate::scalar::Scalar;

/// Associative unital algebra over the rationals, not necessarily
/// commutative. `zero_like`/`one_like` exist because elements carry their
/// context (variables or Lie algebra).
pub trait Ring: Clone + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    fn is_zero(&self) -> bool;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }
}

impl Ring for CPoly {
    fn zero_like(&self) -> Self {
        CPoly::zero(self.ctx())
    }
    fn one_like(&self) -> Self {
        CPoly::one(self.ctx())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Scalar) -> Self {
        CPoly::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        CPoly::is_zero(self)
    }
}

/// `Σ_k coeffs[k]·t^k` with `t` central. Trailing zero coefficients are
/// trimmed, so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralPoly<T: Ring> {
    coeffs: Vec<T>,
    zero: T,
}

impl<T: Ring> CentralPoly<T> {
    pub fn constant(c: T) -> Self {
        let zero = c.zero_like();
        let mut p = CentralPoly { coeffs: vec![c], zero };
        p.trim();
        p
    }

    /// `c·t`
    pub fn linear(c: T) -> Self {
        let zero = c.zero_like();
        let mut p = CentralPoly { coeffs: vec![zero.clone(), c], zero };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<T>, zero: T) -> Self {
        let mut p = CentralPoly { coeffs, zero };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient, and that coefficient.
    pub fn lowest(&self) -> Option<(usize, &T)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }
}

impl<T: Ring> Ring for CentralPoly<T> {
    fn zero_like(&self) -> Self {
        CentralPoly { coeffs: Vec::new(), zero: self.zero.clone() }
    }
    fn one_like(&self) -> Self {
        CentralPoly::constant(self.zero.one_like())
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        CentralPoly::from_coeffs(coeffs, self.zero.clone())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return self.zero_like();
        }
        let mut coeffs = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        CentralPoly::from_coeffs(coeffs, self.zero.clone())
    }
    fn scale(&self, c: &Scalar) -> Self {
        CentralPoly::from_coeffs(self.coeffs.iter().map(|x| x.scale(c)).collect(), self.zero.clone())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}
