//! Small dense linear-algebra helpers over `Complex<T>`.

use crate::scalar::Real;
use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex;

pub type CMat<T> = DMatrix<Complex<T>>;
pub type CVec<T> = DVector<Complex<T>>;

pub fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::from_config(re), T::from_config(im))
}

pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Magnitude of a complex scalar, without a `Float` bound.
pub fn cabs<T: Real>(c: &Complex<T>) -> T {
    (c.re * c.re + c.im * c.im).sqrt()
}

pub fn zeros<T: Real>(rows: usize, cols: usize) -> CMat<T> {
    CMat::<T>::zeros(rows, cols)
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    CMat::<T>::identity(n, n)
}

/// Numerical rank by singular values above `tol`.
pub fn rank<T: Real>(m: &CMat<T>, tol: T) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = SVD::new(m.clone(), false, false);
    svd.singular_values.iter().filter(|&&s| s > tol).count()
}

/// Orthonormal basis of the column space, as matrix columns.
pub fn column_space<T: Real>(m: &CMat<T>, tol: T) -> CMat<T> {
    let mut span = SpanBasis::new(m.nrows(), tol);
    for j in 0..m.ncols() {
        span.try_add(&m.column(j).into_owned());
    }
    span.into_matrix()
}

/// Orthonormal basis of the right null space `{v : m v = 0}`.
pub fn null_space<T: Real>(m: &CMat<T>, tol: T) -> CMat<T> {
    let cols = m.ncols();
    // Kernel = orthogonal complement of the column space of the adjoint.
    let row_space = column_space(&m.adjoint(), tol);
    let mut span = SpanBasis::new(cols, tol);
    for j in 0..row_space.ncols() {
        span.try_add(&row_space.column(j).into_owned());
    }
    let mut kernel: Vec<CVec<T>> = Vec::new();
    for i in 0..cols {
        let mut e = CVec::<T>::zeros(cols);
        e[i] = cx(1.0, 0.0);
        if span.try_add(&e) {
            kernel.push(span.cols.last().unwrap().clone());
        }
    }
    let mut out = zeros(cols, kernel.len());
    for (j, v) in kernel.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Incremental orthonormal span with a fixed residual tolerance.
#[derive(Debug, Clone)]
pub struct SpanBasis<T: Real> {
    dim: usize,
    tol: T,
    pub cols: Vec<CVec<T>>,
}

impl<T: Real> SpanBasis<T> {
    pub fn new(dim: usize, tol: T) -> Self {
        Self {
            dim,
            tol,
            cols: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    /// Residual of `v` against the current span (two Gram-Schmidt passes).
    pub fn residual(&self, v: &CVec<T>) -> CVec<T> {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &self.cols {
                let c = q.dotc(&r);
                r -= q * c;
            }
        }
        r
    }

    /// Adds `v` if it leaves the current span; returns whether it did.
    pub fn try_add(&mut self, v: &CVec<T>) -> bool {
        let r = self.residual(v);
        let n = r.norm();
        if n > self.tol {
            self.cols.push(r / Complex::new(n, T::zero()));
            true
        } else {
            false
        }
    }

    pub fn contains(&self, v: &CVec<T>) -> bool {
        self.residual(v).norm() <= self.tol
    }

    pub fn into_matrix(self) -> CMat<T> {
        let mut out = zeros(self.dim, self.cols.len());
        for (j, v) in self.cols.iter().enumerate() {
            out.set_column(j, v);
        }
        out
    }

    pub fn as_matrix(&self) -> CMat<T> {
        self.clone().into_matrix()
    }
}

/// Eigenvalues of a Hermitian matrix (symmetrized defensively).
pub fn hermitian_eigenvalues<T: Real>(m: &CMat<T>) -> DVector<T> {
    let h = (m + m.adjoint()) * cx::<T>(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues
}

pub fn min_eigenvalue<T: Real>(m: &CMat<T>) -> T {
    hermitian_eigenvalues(m)
        .iter()
        .copied()
        .fold(T::from_config(f64::INFINITY), |a, b| if b < a { b } else { a })
}

/// Largest singular value.
pub fn spectral_norm<T: Real>(m: &CMat<T>) -> T {
    if m.nrows() == 0 || m.ncols() == 0 {
        return T::zero();
    }
    let gram = m.adjoint() * m;
    let eig = hermitian_eigenvalues(&gram);
    let mx = eig
        .iter()
        .copied()
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    if mx > T::zero() {
        mx.sqrt()
    } else {
        T::zero()
    }
}

/// Least-squares solve via SVD; returns the solution and the residual norm.
pub fn lstsq<T: Real>(a: &CMat<T>, b: &CVec<T>, tol: T) -> (CVec<T>, T) {
    let svd = SVD::new(a.clone(), true, true);
    let x = svd.solve(b, tol).expect("svd solve");
    let res = (a * &x - b).norm();
    (x, res)
}

/// Max entry magnitude, as the residual measure used throughout.
pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter()
        .map(cabs)
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

pub fn max_abs_vec<T: Real>(v: &CVec<T>) -> T {
    v.iter()
        .map(cabs)
        .fold(T::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace_of_wide_matrix() {
        // 1x3 matrix [1 1 0]: rank 1, kernel dim 2.
        let m = CMat::<f64>::from_row_slice(1, 3, &[cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert_eq!(rank(&m, 1e-10), 1);
        let k = null_space(&m, 1e-10);
        assert_eq!(k.ncols(), 2);
        assert!(max_abs(&(&m * &k)) < 1e-10);
    }

    #[test]
    fn span_basis_detects_dependence() {
        let mut span = SpanBasis::<f64>::new(2, 1e-10);
        let v1 = CVec::<f64>::from_vec(vec![cx(1.0, 0.0), cx(0.0, 1.0)]);
        let v2 = &v1 * cx::<f64>(0.0, 2.0);
        assert!(span.try_add(&v1));
        assert!(!span.try_add(&v2));
        assert_eq!(span.len(), 1);
    }

    #[test]
    fn spectral_norm_of_projection_is_one() {
        let m = CMat::<f64>::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)],
        );
        assert!((spectral_norm(&m) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn generic_scalar_instantiates_at_f32() {
        let m = CMat::<f32>::identity(3, 3);
        assert_eq!(rank(&m, 1e-5f32), 3);
        assert!((spectral_norm(&m) - 1.0f32).abs() < 1e-5);
    }
}
