use alloc::format;
use alloc::vec::Vec;
use core::fmt::Debug;

#[allow(unused_imports)] // unused when std is in the dependency graph
use num_traits::Float;

use crate::linalg::CMatrix;
use crate::C64;

/// A finite-dimensional normed space that group elements act on.
pub trait Carrier: Clone + Debug + PartialEq {
    fn zeros_like(&self) -> Self;

    /// `self += alpha * other`.
    fn axpy(&mut self, alpha: C64, other: &Self);

    /// The model norm: sup norm on sequences, operator norm on matrices.
    fn norm(&self) -> f64;

    /// Coordinates in a fixed linear basis.
    fn coords(&self) -> Vec<C64>;

    /// An element of the same shape with the given coordinates.
    fn with_coords(&self, coords: &[C64]) -> Self;

    fn same_shape(&self, other: &Self) -> bool;

    fn shape_label(&self) -> alloc::string::String;

    fn scaled(&self, alpha: C64) -> Self {
        let mut out = self.zeros_like();
        out.axpy(alpha, self);
        out
    }

    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(C64::new(-1.0, 0.0), other);
        out
    }

    fn distance(&self, other: &Self) -> f64 {
        self.minus(other).norm()
    }
}

/// A carrier that is also a unital `*`-algebra.
pub trait StarAlgebra: Carrier {
    fn product(&self, other: &Self) -> Self;
    fn star(&self) -> Self;
    fn unit_like(&self) -> Self;
}

/// A truncated sequence `(x_0, …, x_{N-1})` with the sup norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence(pub Vec<C64>);

impl Sequence {
    pub fn zeros(n: usize) -> Self {
        Self(alloc::vec![C64::new(0.0, 0.0); n])
    }

    /// The unit vector `δ_k`.
    pub fn delta(n: usize, k: usize) -> Self {
        let mut s = Self::zeros(n);
        s.0[k] = C64::new(1.0, 0.0);
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, z)| **z != C64::new(0.0, 0.0)).map(|(i, _)| i).collect()
    }
}

impl Carrier for Sequence {
    fn zeros_like(&self) -> Self {
        Self::zeros(self.len())
    }

    fn axpy(&mut self, alpha: C64, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += alpha * b;
        }
    }

    fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn coords(&self) -> Vec<C64> {
        self.0.clone()
    }

    fn with_coords(&self, coords: &[C64]) -> Self {
        Self(coords.to_vec())
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.len() == other.len()
    }

    fn shape_label(&self) -> alloc::string::String {
        format!("sequence of length {}", self.len())
    }
}

impl StarAlgebra for Sequence {
    fn product(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    fn star(&self) -> Self {
        Self(self.0.iter().map(|z| z.conj()).collect())
    }

    fn unit_like(&self) -> Self {
        Self(alloc::vec![C64::new(1.0, 0.0); self.len()])
    }
}

impl Carrier for CMatrix {
    fn zeros_like(&self) -> Self {
        CMatrix::zeros(self.rows(), self.cols())
    }

    fn axpy(&mut self, alpha: C64, other: &Self) {
        CMatrix::axpy(self, alpha, other)
    }

    fn norm(&self) -> f64 {
        self.op_norm()
    }

    fn coords(&self) -> Vec<C64> {
        self.to_vec()
    }

    fn with_coords(&self, coords: &[C64]) -> Self {
        CMatrix::new(self.rows(), self.cols(), coords.to_vec()).expect("coordinate count matches shape")
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.shape() == other.shape()
    }

    fn shape_label(&self) -> alloc::string::String {
        format!("{}x{} matrix", self.rows(), self.cols())
    }
}

impl StarAlgebra for CMatrix {
    fn product(&self, other: &Self) -> Self {
        self * other
    }

    fn star(&self) -> Self {
        self.adjoint()
    }

    fn unit_like(&self) -> Self {
        CMatrix::identity(self.rows())
    }
}

/// A 2x2 block operator `[[a, b], [c, d]]` whose blocks are diagonal
/// (multiplication) operators on the truncated sequence space.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockElement {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub c: Vec<C64>,
    pub d: Vec<C64>,
}

impl BlockElement {
    /// All four blocks must have the same truncation length.
    pub fn new(a: Vec<C64>, b: Vec<C64>, c: Vec<C64>, d: Vec<C64>) -> crate::Result<Self> {
        let n = a.len();
        for blk in [&b, &c, &d] {
            if blk.len() != n {
                return Err(crate::Error::ShapeMismatch {
                    expected: format!("blocks of length {n}"),
                    found: format!("block of length {}", blk.len()),
                });
            }
        }
        Ok(Self { a, b, c, d })
    }

    pub fn zeros(n: usize) -> Self {
        let z = alloc::vec![C64::new(0.0, 0.0); n];
        Self { a: z.clone(), b: z.clone(), c: z.clone(), d: z }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    fn blocks(&self) -> [&Vec<C64>; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    fn blocks_mut(&mut self) -> [&mut Vec<C64>; 4] {
        [&mut self.a, &mut self.b, &mut self.c, &mut self.d]
    }

    /// Zeroes every entry with index `>= k`.
    pub fn truncated(&self, k: usize) -> Self {
        let mut out = self.clone();
        for blk in out.blocks_mut() {
            for z in blk.iter_mut().skip(k) {
                *z = C64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Largest entry difference over all blocks.
    pub fn max_entry_diff(&self, other: &Self) -> f64 {
        self.blocks()
            .iter()
            .zip(other.blocks())
            .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(p, q)| (p - q).norm()))
            .fold(0.0, f64::max)
    }
}

/// Operator norm of `[[a, b], [c, d]]`.
fn norm_2x2(a: C64, b: C64, c: C64, d: C64) -> f64 {
    // Largest singular value from the Gram matrix trace and determinant.
    let fro2 = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    let det = (a * d - b * c).norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0);
    ((fro2 + disc.sqrt()) / 2.0).sqrt()
}

impl Carrier for BlockElement {
    fn zeros_like(&self) -> Self {
        Self::zeros(self.len())
    }

    fn axpy(&mut self, alpha: C64, other: &Self) {
        for (dst, src) in self.blocks_mut().into_iter().zip(other.blocks()) {
            for (x, y) in dst.iter_mut().zip(src) {
                *x += alpha * y;
            }
        }
    }

    /// The block operator acts on `ℓ² ⊕ ℓ²` coordinate by coordinate, so its
    /// norm is the largest 2x2 norm over coordinates.
    fn norm(&self) -> f64 {
        (0..self.len())
            .map(|n| norm_2x2(self.a[n], self.b[n], self.c[n], self.d[n]))
            .fold(0.0, f64::max)
    }

    fn coords(&self) -> Vec<C64> {
        self.blocks().iter().flat_map(|b| b.iter().copied()).collect()
    }

    fn with_coords(&self, coords: &[C64]) -> Self {
        let n = self.len();
        Self {
            a: coords[..n].to_vec(),
            b: coords[n..2 * n].to_vec(),
            c: coords[2 * n..3 * n].to_vec(),
            d: coords[3 * n..4 * n].to_vec(),
        }
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.len() == other.len()
    }

    fn shape_label(&self) -> alloc::string::String {
        format!("2x2 block element of length {}", self.len())
    }
}

impl StarAlgebra for BlockElement {
    fn product(&self, o: &Self) -> Self {
        let n = self.len();
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.a[i] = self.a[i] * o.a[i] + self.b[i] * o.c[i];
            out.b[i] = self.a[i] * o.b[i] + self.b[i] * o.d[i];
            out.c[i] = self.c[i] * o.a[i] + self.d[i] * o.c[i];
            out.d[i] = self.c[i] * o.b[i] + self.d[i] * o.d[i];
        }
        out
    }

    fn star(&self) -> Self {
        let conj = |v: &Vec<C64>| v.iter().map(|z| z.conj()).collect::<Vec<_>>();
        Self { a: conj(&self.a), b: conj(&self.c), c: conj(&self.b), d: conj(&self.d) }
    }

    fn unit_like(&self) -> Self {
        let n = self.len();
        let one = alloc::vec![C64::new(1.0, 0.0); n];
        let zero = alloc::vec![C64::new(0.0, 0.0); n];
        Self { a: one.clone(), b: zero.clone(), c: zero, d: one }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn block_norm_matches_dense_norm() {
        let (a, b, c, d) = (c64(0.3, 0.1), c64(-1.0, 0.4), c64(0.0, 2.0), c64(0.5, -0.5));
        let dense = CMatrix::new(2, 2, alloc::vec![a, b, c, d]).unwrap();
        assert!((norm_2x2(a, b, c, d) - dense.op_norm()).abs() < 1e-14);
    }

    #[test]
    fn block_product_matches_dense_product() {
        let x = BlockElement::new(
            alloc::vec![c64(1.0, 0.0)],
            alloc::vec![c64(2.0, 1.0)],
            alloc::vec![c64(0.0, -1.0)],
            alloc::vec![c64(3.0, 0.0)],
        )
        .unwrap();
        let y = BlockElement::new(
            alloc::vec![c64(0.5, 0.0)],
            alloc::vec![c64(0.0, 1.0)],
            alloc::vec![c64(1.0, 1.0)],
            alloc::vec![c64(-2.0, 0.0)],
        )
        .unwrap();
        let dense = |e: &BlockElement| CMatrix::new(2, 2, alloc::vec![e.a[0], e.b[0], e.c[0], e.d[0]]).unwrap();
        let prod = x.product(&y);
        assert!(dense(&prod).dist(&(&dense(&x) * &dense(&y))) < 1e-14);
        assert!(dense(&x.star()).dist(&dense(&x).adjoint()) < 1e-14);
    }

    #[test]
    fn mixed_lengths_rejected() {
        let r = BlockElement::new(alloc::vec![], alloc::vec![c64(1.0, 0.0)], alloc::vec![], alloc::vec![]);
        assert!(r.is_err());
    }
}
