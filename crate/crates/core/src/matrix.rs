//! Small dense containers of [`TermSum`] entries.

use std::ops::{Index, IndexMut, Mul};

use crate::scalar::Real;
use crate::term::TermSum;

/// Fixed-length column of term sums.
#[derive(Debug, Clone, PartialEq)]
pub struct TermVector<T: Real, const N: usize>(pub [TermSum<T>; N]);

/// Square `N×N` matrix of term sums, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TermMatrix<T: Real, const N: usize>(pub [[TermSum<T>; N]; N]);

impl<T: Real, const N: usize> TermVector<T, N> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| TermSum::zero()))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TermSum<T>> {
        self.0.iter()
    }

    /// Largest componentwise termwise distance.
    pub fn distance(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.distance(b))
            .fold(T::zero(), T::max)
    }

    pub fn term_count(&self) -> usize {
        self.0.iter().map(TermSum::len).sum()
    }
}

impl<T: Real, const N: usize> TermMatrix<T, N> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| {
            std::array::from_fn(|_| TermSum::zero())
        }))
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = TermSum::one();
        }
        m
    }

    pub fn distance(&self, other: &Self) -> T {
        let mut d = T::zero();
        for i in 0..N {
            for j in 0..N {
                d = d.max(self.0[i][j].distance(&other.0[i][j]));
            }
        }
        d
    }
}

impl<T: Real, const N: usize> Index<usize> for TermVector<T, N> {
    type Output = TermSum<T>;

    fn index(&self, i: usize) -> &TermSum<T> {
        &self.0[i]
    }
}

impl<T: Real, const N: usize> IndexMut<usize> for TermVector<T, N> {
    fn index_mut(&mut self, i: usize) -> &mut TermSum<T> {
        &mut self.0[i]
    }
}

impl<T: Real, const N: usize> Index<(usize, usize)> for TermMatrix<T, N> {
    type Output = TermSum<T>;

    fn index(&self, (i, j): (usize, usize)) -> &TermSum<T> {
        &self.0[i][j]
    }
}

impl<T: Real, const N: usize> IndexMut<(usize, usize)> for TermMatrix<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut TermSum<T> {
        &mut self.0[i][j]
    }
}

impl<'a, T: Real, const N: usize> Mul<&'a TermVector<T, N>> for &'a TermMatrix<T, N> {
    type Output = TermVector<T, N>;

    fn mul(self, v: &'a TermVector<T, N>) -> TermVector<T, N> {
        TermVector(std::array::from_fn(|i| {
            let mut acc = TermSum::zero();
            for k in 0..N {
                acc += &self.0[i][k] * &v.0[k];
            }
            acc
        }))
    }
}

impl<'a, T: Real, const N: usize> Mul<&'a TermMatrix<T, N>> for &'a TermMatrix<T, N> {
    type Output = TermMatrix<T, N>;

    fn mul(self, rhs: &'a TermMatrix<T, N>) -> TermMatrix<T, N> {
        TermMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = TermSum::zero();
                for k in 0..N {
                    acc += &self.0[i][k] * &rhs.0[k][j];
                }
                acc
            })
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn ts(a: f64, f: f64, s: i64) -> TermSum<f64> {
        TermSum::from_term(Term::real(a, f, s))
    }

    #[test]
    fn identity_is_neutral() {
        let v = TermVector([ts(1.0, 2.0, 1), ts(0.5, 0.0, -1), TermSum::zero()]);
        let id = TermMatrix::<f64, 3>::identity();
        assert_eq!(&id * &v, v);
    }

    #[test]
    fn matrix_products_associate_with_vector() {
        let mut a = TermMatrix::<f64, 3>::zero();
        let mut b = TermMatrix::<f64, 3>::zero();
        for i in 0..3 {
            for j in 0..3 {
                a[(i, j)] = ts(1.0 + i as f64, j as f64, (i as i64) - 1) + ts(0.25, -1.0, 0);
                b[(i, j)] = ts(0.5 - j as f64, 2.0 * i as f64, j as i64);
            }
        }
        let v = TermVector([ts(1.0, 0.0, 0), ts(0.3, 1.0, 2), ts(-0.2, -3.0, -1)]);
        let lhs = &(&a * &b) * &v;
        let rhs = &a * &(&b * &v);
        assert!(lhs.distance(&rhs) < 1e-13);
    }
}
