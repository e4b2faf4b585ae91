//! Dense rank-3 and rank-4 complex tensors of small edge length.
//!
//! The edge lengths that occur here are tiny (n ≤ 8 or so), so everything is
//! stored densely in row-major order and iterated lexicographically. The
//! lexicographic order is part of the contract: summation order is
//! deterministic everywhere, which keeps reports bit-reproducible.

use num_complex::Complex64;

pub type C64 = Complex64;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense real matrix.
pub type RMat = nalgebra::DMatrix<f64>;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Rank-3 complex tensor with all three indices of range `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 {
            n,
            data: vec![C64::ZERO; n * n * n],
        }
    }

    pub fn from_vec(n: usize, data: Vec<C64>) -> Option<Self> {
        (data.len() == n * n * n).then_some(Tensor3 { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> C64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: C64) {
        self.data[(a * self.n + b) * self.n + c] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Lexicographic index iteration.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
    }
}

/// Rank-4 complex tensor with all four indices of range `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4 {
    n: usize,
    data: Vec<C64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Tensor4 {
            n,
            data: vec![C64::ZERO; n * n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.data[((i * self.n + j) * self.n + k) * self.n + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: C64) {
        self.data[((i * self.n + j) * self.n + k) * self.n + l] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Tensor4) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn indices(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| (i, j, k, l))))
        })
    }
}

/// Max |A_{ij} − conj(A_{ji})| over all entries.
pub fn hermitian_residual(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_mat(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Commutator [A, B] = AB − BA.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_roundtrip() {
        let mut t = Tensor3::zeros(3);
        t.set(1, 2, 0, c64(2.0, -1.0));
        assert_eq!(t.get(1, 2, 0), c64(2.0, -1.0));
        assert_eq!(t.get(0, 2, 1), C64::ZERO);
        assert_eq!(t.indices().count(), 27);
    }

    #[test]
    fn hermitian_residual_detects_asymmetry() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = c64(1.0, 1.0);
        m[(1, 0)] = c64(1.0, -1.0);
        assert_eq!(hermitian_residual(&m), 0.0);
        m[(1, 0)] = c64(1.0, 1.0);
        assert!(hermitian_residual(&m) > 1.0);
    }
}
