//! Subspaces of `C^n` given by spanning vectors.
//!
//! Orthonormal bases come from modified Gram-Schmidt with column pivoting
//! and one reorthogonalization pass, which is rank revealing enough for the
//! well-separated problems in this crate.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is in the dependency graph
use num_traits::Float;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::C64;

/// `⟨u, v⟩ = Σ conj(u_i) v_i`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(v: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = inner(q, v);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

/// Orthonormal basis of `span(vectors)`. Directions whose residual falls
/// below `rank_tol` times the largest input norm are treated as dependent.
pub fn orthonormal_basis(vectors: &[Vec<C64>], rank_tol: f64) -> Vec<Vec<C64>> {
    let scale = vectors.iter().map(|v| vec_norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut pending: Vec<Vec<C64>> = vectors.to_vec();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    while !pending.is_empty() {
        for v in pending.iter_mut() {
            project_out(v, basis.last().map(core::slice::from_ref).unwrap_or(&[]));
        }
        let (best, norm) = pending
            .iter()
            .enumerate()
            .map(|(i, v)| (i, vec_norm(v)))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if norm <= rank_tol * scale {
            break;
        }
        let mut v = pending.swap_remove(best);
        project_out(&mut v, &basis);
        let norm = vec_norm(&v);
        if norm <= rank_tol * scale {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of an orthonormal family
/// in `C^dim`.
pub fn orthogonal_complement(basis: &[Vec<C64>], dim: usize) -> Vec<Vec<C64>> {
    let mut full: Vec<Vec<C64>> = basis.to_vec();
    let mut out = Vec::new();
    while full.len() < dim {
        let mut best: Option<(Vec<C64>, f64)> = None;
        for k in 0..dim {
            let mut e = alloc::vec![C64::new(0.0, 0.0); dim];
            e[k] = C64::new(1.0, 0.0);
            project_out(&mut e, &full);
            let n = vec_norm(&e);
            if best.as_ref().map_or(true, |b| n > b.1) {
                best = Some((e, n));
            }
        }
        let (mut e, n) = best.expect("dim > 0");
        e.iter_mut().for_each(|x| *x /= n);
        full.push(e.clone());
        out.push(e);
    }
    out
}

/// Orthonormal basis of `ker(m)`.
pub fn nullspace(m: &CMatrix, rank_tol: f64) -> Vec<Vec<C64>> {
    // m v = 0 iff v is orthogonal to every conjugated row.
    let rows: Vec<Vec<C64>> =
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].conj()).collect()).collect();
    let row_space = orthonormal_basis(&rows, rank_tol);
    orthogonal_complement(&row_space, m.cols())
}

/// Largest `‖v - Q Q* v‖` over `v` in `vectors`, for orthonormal `q`.
pub fn projection_residual(q: &[Vec<C64>], vectors: &[Vec<C64>]) -> f64 {
    vectors
        .iter()
        .map(|v| {
            let mut r = v.clone();
            project_out(&mut r, q);
            vec_norm(&r)
        })
        .fold(0.0, f64::max)
}

/// Subspace equality for spanning sets of vectors.
///
/// Both sets are orthonormalized (rank cutoff `1e-10`), and the spans are
/// equal iff the dimensions agree and each orthonormal basis projects onto
/// the other with residual at most `tol`.
pub fn subspace_equal_vectors(s1: &[Vec<C64>], s2: &[Vec<C64>], tol: f64) -> Result<bool> {
    let len = s1.iter().chain(s2).map(Vec::len).next().unwrap_or(0);
    if let Some(bad) = s1.iter().chain(s2).find(|v| v.len() != len) {
        return Err(Error::ShapeMismatch {
            expected: format!("length {len}"),
            found: format!("length {}", bad.len()),
        });
    }
    let q1 = orthonormal_basis(s1, 1e-10);
    let q2 = orthonormal_basis(s2, 1e-10);
    if q1.len() != q2.len() {
        return Ok(false);
    }
    Ok(projection_residual(&q1, &q2) <= tol && projection_residual(&q2, &q1) <= tol)
}

/// [`subspace_equal_vectors`] on matrices, flattened row-major.
pub fn subspace_equal(s1: &[CMatrix], s2: &[CMatrix], tol: f64) -> Result<bool> {
    let shape = s1.iter().chain(s2).map(CMatrix::shape).next();
    if let Some(bad) = s1.iter().chain(s2).find(|m| Some(m.shape()) != shape) {
        let (r, c) = shape.unwrap();
        return Err(Error::ShapeMismatch {
            expected: format!("{r}x{c}"),
            found: format!("{}x{}", bad.rows(), bad.cols()),
        });
    }
    let flat = |s: &[CMatrix]| s.iter().map(CMatrix::to_vec).collect::<Vec<_>>();
    subspace_equal_vectors(&flat(s1), &flat(s2), tol)
}

/// Orthonormal basis of `span(a) ∩ span(b)`.
pub fn subspace_intersection(a: &[Vec<C64>], b: &[Vec<C64>], rank_tol: f64) -> Vec<Vec<C64>> {
    let qa = orthonormal_basis(a, rank_tol);
    let qb = orthonormal_basis(b, rank_tol);
    if qa.is_empty() || qb.is_empty() {
        return Vec::new();
    }
    let n = qa[0].len();
    // Columns [Qa | -Qb]; kernel vectors (c, d) give Qa c = Qb d.
    let mut cols: Vec<Vec<C64>> = qa.clone();
    cols.extend(qb.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = CMatrix::from_columns(&cols);
    debug_assert_eq!(m.rows(), n);
    let kernel = nullspace(&m, rank_tol);
    let vectors: Vec<Vec<C64>> = kernel
        .iter()
        .map(|k| {
            let mut v = alloc::vec![C64::new(0.0, 0.0); n];
            for (j, q) in qa.iter().enumerate() {
                for (x, y) in v.iter_mut().zip(q) {
                    *x += k[j] * y;
                }
            }
            v
        })
        .collect();
    orthonormal_basis(&vectors, rank_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn e(n: usize, j: usize, k: usize) -> CMatrix {
        CMatrix::unit(n, j, k)
    }

    #[test]
    fn scaled_unit_spans_the_same_line() {
        let two = e(2, 0, 0).scale(c64(2.0, 0.0));
        assert!(subspace_equal(&[e(2, 0, 0)], &[two], 1e-12).unwrap());
    }

    #[test]
    fn orthogonal_units_differ() {
        assert!(!subspace_equal(&[e(2, 0, 0)], &[e(2, 1, 1)], 1e-12).unwrap());
    }

    #[test]
    fn change_of_basis() {
        let s1 = [&e(2, 0, 0) + &e(2, 1, 1), &e(2, 0, 0) - &e(2, 1, 1)];
        let s2 = [e(2, 0, 0), e(2, 1, 1)];
        assert!(subspace_equal(&s1, &s2, 1e-12).unwrap());
    }

    #[test]
    fn shape_mismatch() {
        let r = subspace_equal(&[e(2, 0, 0)], &[e(3, 0, 0)], 1e-12);
        assert!(matches!(r, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = CMatrix::from_real_rows(&[&[1.0, 1.0, 0.0], &[2.0, 2.0, 0.0]]);
        let k = nullspace(&m, 1e-12);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(vec_norm(&(&m * v.as_slice())) < 1e-14);
        }
    }

    #[test]
    fn intersection_of_planes() {
        let x = alloc::vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
        let y = alloc::vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)];
        let z = alloc::vec![c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)];
        let meet = subspace_intersection(&[x.clone(), y.clone()], &[y.clone(), z], 1e-12);
        assert_eq!(meet.len(), 1);
        assert!(subspace_equal_vectors(&meet, &[y], 1e-12).unwrap());
    }
}
