use alloc::vec::Vec;

use num_traits::Float;

use super::CMatrix;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::C64;

const MAX_SWEEPS: usize = 100;

/// Spectral data of a Hermitian matrix: `A = V diag(λ) V*` with `λ`
/// ascending and `V` unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are the eigenvectors.
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(f(λ)) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let values: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += v[(i, k)] * values[k] * v[(j, k)].conj();
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|l| C64::new(l, 0.0))
    }

    /// `‖V*V - I‖_op`.
    pub fn unitarity_defect(&self) -> f64 {
        let vv = &self.vectors.adjoint() * &self.vectors;
        vv.dist(&CMatrix::identity(self.dim()))
    }

    /// Groups indices of eigenvalues that agree within `tol` (relative to the
    /// spectral radius). Clusters are returned in ascending order.
    pub fn clusters(&self, tol: f64) -> Vec<Vec<usize>> {
        let scale = self.eigenvalues.iter().map(|l| l.abs()).fold(1.0, f64::max);
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            match out.last_mut() {
                Some(last) if (l - self.eigenvalues[*last.last().unwrap()]).abs() <= tol * scale => {
                    last.push(i)
                }
                _ => out.push(alloc::vec![i]),
            }
        }
        out
    }
}

/// Hermitian eigendecomposition with the default symmetry tolerance.
pub fn eig_hermitian(a: &CMatrix) -> Result<EigenDecomposition> {
    eig_hermitian_with(a, Tolerances::default().hermitian)
}

/// Cyclic Jacobi for a Hermitian matrix. `hermitian_tol` is relative to the
/// operator norm scale of `a` (estimated by the Frobenius norm).
pub fn eig_hermitian_with(a: &CMatrix, hermitian_tol: f64) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: alloc::string::String::from("square matrix"),
            found: alloc::format!("{}x{}", a.rows(), a.cols()),
        });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.rows();
    let scale = a.frobenius_norm();
    let asymmetry = a.hermitian_asymmetry();
    if asymmetry > hermitian_tol * scale.max(f64::MIN_POSITIVE) && asymmetry > 0.0 {
        return Err(Error::NotHermitian { asymmetry });
    }
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);

    if scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
                .map(|(p, q)| m[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * scale {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
        if !converged {
            return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { eigenvalues, vectors })
}

/// One complex Jacobi rotation annihilating `m[(p, q)]`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let beta = apq.norm();
    if beta == 0.0 {
        return;
    }
    let phase = apq / beta;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = 0.5 * Float::atan2(2.0 * beta, aqq - app);
    let (s, c) = Float::sin_cos(theta);
    // J = [[c, s e^{iφ}], [-s e^{-iφ}, c]] on the (p, q) plane; m <- J* m J.
    let jpq = phase * s;
    let jqp = -phase.conj() * s;
    let n = m.rows();
    for i in 0..n {
        let mip = m[(i, p)];
        let miq = m[(i, q)];
        m[(i, p)] = mip * c + miq * jqp;
        m[(i, q)] = mip * jpq + miq * c;
    }
    for j in 0..n {
        let mpj = m[(p, j)];
        let mqj = m[(q, j)];
        m[(p, j)] = mpj * c + mqj * jqp.conj();
        m[(q, j)] = mpj * jpq.conj() + mqj * c;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c + viq * jqp;
        v[(i, q)] = vip * jpq + viq * c;
    }
}

/// A strictly positive Hermitian matrix, kept in spectral form.
///
/// Eigenvalues are stored through their logarithms so that powers
/// `P^w = V diag(exp(w ln λ)) V*` never form `λ` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMatrix {
    log_eigenvalues: Vec<f64>,
    vectors: CMatrix,
}

impl PositiveMatrix {
    /// Checks positivity: the smallest eigenvalue must exceed `1e-12` times
    /// the largest.
    pub fn new(a: &CMatrix) -> Result<Self> {
        let eig = eig_hermitian(a)?;
        let max = eig.eigenvalues().last().copied().unwrap_or(0.0);
        let min = eig.eigenvalues().first().copied().unwrap_or(0.0);
        if !(max > 0.0) || min <= 1e-12 * max {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self {
            log_eigenvalues: eig.eigenvalues.iter().map(|l| l.ln()).collect(),
            vectors: eig.vectors,
        })
    }

    /// `e^H` for Hermitian `H`.
    pub fn exp_of(h: &CMatrix) -> Result<Self> {
        let eig = eig_hermitian(h)?;
        Ok(Self { log_eigenvalues: eig.eigenvalues, vectors: eig.vectors })
    }

    /// Diagonal positive matrix `diag(e^{λ_k})` from exponents.
    pub fn from_log_diag(exponents: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..exponents.len()).collect();
        order.sort_by(|&i, &j| exponents[i].total_cmp(&exponents[j]));
        let n = exponents.len();
        let vectors = CMatrix::from_fn(n, n, |i, j| {
            if i == order[j] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        Self { log_eigenvalues: order.iter().map(|&i| exponents[i]).collect(), vectors }
    }

    pub fn dim(&self) -> usize {
        self.log_eigenvalues.len()
    }

    /// Ascending `ln λ_k`.
    pub fn log_eigenvalues(&self) -> &[f64] {
        &self.log_eigenvalues
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.log_eigenvalues.iter().map(|l| l.exp()).collect()
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn spectral(&self) -> EigenDecomposition {
        EigenDecomposition { eigenvalues: self.log_eigenvalues.clone(), vectors: self.vectors.clone() }
    }

    pub fn matrix(&self) -> CMatrix {
        self.power(C64::new(1.0, 0.0))
    }

    /// `ln P`, Hermitian.
    pub fn log(&self) -> CMatrix {
        self.spectral().apply(|l| C64::new(l, 0.0))
    }

    /// `P^w` on the principal branch.
    pub fn power(&self, w: C64) -> CMatrix {
        self.spectral().apply(|l| (w * l).exp())
    }

    pub fn inverse(&self) -> CMatrix {
        self.power(C64::new(-1.0, 0.0))
    }
}

/// `P^w = V diag(λ_k^w) V*` with `λ^w = exp(w ln λ)`.
pub fn matrix_power(p: &PositiveMatrix, w: C64) -> CMatrix {
    p.power(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        let a = CMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        a.hermitian_part()
    }

    #[test]
    fn diagonal_input_is_its_own_decomposition() {
        let eig = eig_hermitian(&CMatrix::from_real_diag(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(eig.eigenvalues(), &[1.0, 2.0, 3.0]);
        assert_eq!(eig.vectors(), &CMatrix::identity(3));
    }

    #[test]
    fn pauli_x() {
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let eig = eig_hermitian(&x).unwrap();
        assert!((eig.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn seeded_random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [1, 2, 6, 17, 40] {
            let a = random_hermitian(n, &mut rng);
            let eig = eig_hermitian(&a).unwrap();
            let residual = eig.reconstruct().dist(&a);
            assert!(residual <= 1e-10 * a.op_norm(), "n={n} residual={residual}");
            assert!(eig.unitarity_defect() <= 1e-10);
            assert!(eig.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn matrix_power_examples() {
        let e = core::f64::consts::E;
        let p = PositiveMatrix::new(&CMatrix::from_real_diag(&[e, e * e])).unwrap();
        assert!(matrix_power(&p, c64(0.0, 0.0)).dist(&CMatrix::identity(2)) < 1e-15);
        let inv = matrix_power(&p, c64(-1.0, 0.0));
        assert!(inv.dist(&CMatrix::from_real_diag(&[1.0 / e, 1.0 / (e * e)])) < 1e-15);
        let four = PositiveMatrix::new(&CMatrix::from_real_diag(&[4.0])).unwrap();
        assert!((matrix_power(&four, c64(0.5, 0.0))[(0, 0)] - c64(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_singular_positive() {
        let a = CMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(matches!(PositiveMatrix::new(&a), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn degenerate_eigenspace_basis_is_irrelevant() {
        // diag(1, 1, 3) with the degenerate block rotated by an arbitrary unitary
        // gives the same functional calculus.
        let eig = eig_hermitian(&CMatrix::from_real_diag(&[1.0, 1.0, 3.0])).unwrap();
        let (c, s) = (0.28_f64, 0.96_f64);
        let mut rotated = eig.vectors().clone();
        for i in 0..3 {
            let a = eig.vectors()[(i, 0)];
            let b = eig.vectors()[(i, 1)];
            rotated[(i, 0)] = a * c + b * c64(0.0, s);
            rotated[(i, 1)] = a * c64(0.0, s) + b * c;
        }
        let other = EigenDecomposition { eigenvalues: eig.eigenvalues().to_vec(), vectors: rotated };
        let f = |l: f64| c64(0.0, 0.7 * l).exp() * l.sqrt();
        assert!(eig.apply(f).dist(&other.apply(f)) < 1e-14);
        assert!(other.unitarity_defect() < 1e-14);
    }
}
