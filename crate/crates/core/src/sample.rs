//! Seeded generators for test instances.

use alloc::vec::Vec;

use rand::Rng;

use crate::group::{BlockElement, Sequence};
use crate::linalg::CMatrix;
use crate::C64;

pub fn complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Entries uniform in the unit square.
pub fn matrix(d: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| complex(rng))
}

/// Random matrix rescaled to operator norm `norm`.
pub fn matrix_with_norm(d: usize, norm: f64, rng: &mut impl Rng) -> CMatrix {
    let m = matrix(d, rng);
    let n = m.op_norm();
    m.scale(C64::new(norm / n, 0.0))
}

/// Hermitian matrix with entries of size about `scale`.
pub fn hermitian(d: usize, scale: f64, rng: &mut impl Rng) -> CMatrix {
    matrix(d, rng).hermitian_part().scale(C64::new(scale, 0.0))
}

/// Random unitary from Gram-Schmidt on a random matrix.
pub fn unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let cols: Vec<Vec<C64>> = (0..d).map(|_| (0..d).map(|_| complex(rng)).collect()).collect();
    let q = crate::linalg::orthonormal_basis(&cols, 1e-12);
    if q.len() == d {
        CMatrix::from_columns(&q)
    } else {
        CMatrix::identity(d)
    }
}

/// Faithful density matrix whose eigenvalues are at least `floor / d`
/// before normalization.
pub fn density(d: usize, floor: f64, rng: &mut impl Rng) -> CMatrix {
    let eig: Vec<f64> = (0..d).map(|_| floor + rng.gen_range(0.0..1.0)).collect();
    let total: f64 = eig.iter().sum();
    let u = unitary(d, rng);
    let diag = CMatrix::from_real_diag(&eig.iter().map(|e| e / total).collect::<Vec<_>>());
    (&(&u * &diag) * &u.adjoint()).hermitian_part()
}

/// Block-diagonal faithful density for the given block sizes.
pub fn block_density(blocks: &[usize], floor: f64, rng: &mut impl Rng) -> CMatrix {
    let d: usize = blocks.iter().sum();
    let mut rho = CMatrix::zeros(d, d);
    let mut offset = 0;
    let mut weights = Vec::new();
    for &b in blocks {
        let w = floor + rng.gen_range(0.0..1.0);
        weights.push(w);
        let block = density(b, floor, rng);
        for i in 0..b {
            for j in 0..b {
                rho[(offset + i, offset + j)] = block[(i, j)] * w;
            }
        }
        offset += b;
    }
    let total: f64 = weights.iter().sum();
    rho.scale(C64::new(1.0 / total, 0.0)).hermitian_part()
}

/// Random composition of `d` into blocks.
pub fn blocks(d: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut out = Vec::new();
    let mut left = d;
    while left > 0 {
        let b = rng.gen_range(1..=left);
        out.push(b);
        left -= b;
    }
    out
}

pub fn sequence(n: usize, rng: &mut impl Rng) -> Sequence {
    Sequence((0..n).map(|_| complex(rng)).collect())
}

pub fn block_element(n: usize, rng: &mut impl Rng) -> BlockElement {
    let mut v = || (0..n).map(|_| complex(rng)).collect::<Vec<_>>();
    BlockElement { a: v(), b: v(), c: v(), d: v() }
}

/// A point with `|Im z| <= max_im` and `|Re z| <= max_re`.
pub fn strip_point(max_re: f64, max_im: f64, rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-max_re..=max_re), rng.gen_range(-max_im..=max_im))
}
