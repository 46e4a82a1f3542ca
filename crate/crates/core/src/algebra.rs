//! Finite-dimensional associative *-algebras by structure constants.
//!
//! Provides the machinery every crossed product is run through: radical
//! computation from the trace form, Wedderburn block extraction through a
//! random central self-adjoint splitting element, a faithful *-representation
//! built from the left regular representation with the trace inner product,
//! and positivity and operator-norm checks on top of it.

use crate::linalg::{self, cabs, czero, CMat, CVec};
use crate::scalar::Real;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("structure constants not associative at ({i}, {j}, {k}): residual {residual}")]
    NotAssociative {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },
    #[error("involution axiom {axiom} fails: residual {residual}")]
    InvolutionBroken { axiom: &'static str, residual: f64 },
    #[error("algebra is not semisimple: radical has dimension {radical_dim}")]
    NotSemisimple { radical_dim: usize },
    #[error("element is not self-adjoint: residual {residual}")]
    NotSelfAdjoint { residual: f64 },
    #[error("no unit element: least-squares residual {residual}")]
    NoUnit { residual: f64 },
    #[error("trace inner product is not positive definite: min eigenvalue {min_eig}")]
    GramNotPositive { min_eig: f64 },
    #[error("central splitting degenerate after {retries} retries")]
    DegenerateSplit { retries: usize },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
}

/// Wedderburn data of an algebra: radical dimension and the multiset of
/// full-matrix block sizes of the semisimple quotient.
///
/// Equal block counts mean Morita equivalence for such algebras; sizes are
/// reported but equivalence never compares them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub radical_dim: usize,
    /// Block sizes, ascending.
    pub blocks: Vec<usize>,
    /// Seed that produced the splitting element.
    pub seed: u64,
}

impl BlockReport {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

type SparseVec<T> = Vec<(usize, Complex<T>)>;

/// An associative *-algebra over the complex numbers, by structure
/// constants on a distinguished basis.
#[derive(Debug, Clone)]
pub struct FdStarAlgebra<T: Real> {
    dim: usize,
    /// `mul[i][j]` holds the expansion of `b_i b_j`.
    mul: Vec<Vec<SparseVec<T>>>,
    /// Conjugate-linear involution: coordinates of `x*` are
    /// `invol * conj(coords of x)`; column `j` is the expansion of `b_j*`.
    invol: CMat<T>,
}

impl<T: Real> FdStarAlgebra<T> {
    /// Builds and validates: associativity on all basis triples and the
    /// involution axioms (involutive, anti-multiplicative), to `tol`.
    pub fn new(
        dim: usize,
        mul: Vec<Vec<SparseVec<T>>>,
        invol: CMat<T>,
        tol: T,
    ) -> Result<Self, AlgebraError> {
        if mul.len() != dim
            || mul.iter().any(|row| row.len() != dim)
            || invol.nrows() != dim
            || invol.ncols() != dim
        {
            return Err(AlgebraError::DimMismatch(format!(
                "structure tables do not match dimension {dim}"
            )));
        }
        let alg = Self { dim, mul, invol };
        alg.validate(tol)?;
        Ok(alg)
    }

    fn validate(&self, tol: T) -> Result<(), AlgebraError> {
        let n = self.dim;
        // (b_i b_j) b_k == b_i (b_j b_k)
        for i in 0..n {
            for j in 0..n {
                let ij = &self.mul[i][j];
                for k in 0..n {
                    let mut lhs = CVec::<T>::zeros(n);
                    for &(l, c) in ij {
                        axpy_sparse(&mut lhs, c, &self.mul[l][k]);
                    }
                    let mut rhs = CVec::<T>::zeros(n);
                    for &(l, c) in &self.mul[j][k] {
                        axpy_sparse(&mut rhs, c, &self.mul[i][l]);
                    }
                    let residual = linalg::max_abs_vec(&(lhs - rhs));
                    if residual > tol {
                        return Err(AlgebraError::NotAssociative {
                            i,
                            j,
                            k,
                            residual: residual.to_f64(),
                        });
                    }
                }
            }
        }
        // Involutive: J conj(J) = I.
        let twice = &self.invol * conj_mat(&self.invol);
        let res = linalg::max_abs(&(twice - linalg::identity::<T>(n)));
        if res > tol {
            return Err(AlgebraError::InvolutionBroken {
                axiom: "involutive",
                residual: res.to_f64(),
            });
        }
        // Anti-multiplicative: (b_i b_j)* = b_j* b_i*.
        for i in 0..n {
            for j in 0..n {
                let mut prod = CVec::<T>::zeros(n);
                for &(l, c) in &self.mul[i][j] {
                    prod[l] += c;
                }
                let lhs = self.star_vec(&prod);
                let rhs = self.mul_vec(&self.invol.column(j).into_owned(), &self.invol.column(i).into_owned());
                let res = linalg::max_abs_vec(&(lhs - rhs));
                if res > tol {
                    return Err(AlgebraError::InvolutionBroken {
                        axiom: "anti-multiplicative",
                        residual: res.to_f64(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Builds from a dense structure closure `c(i, j) -> coords of b_i b_j`.
    pub fn from_dense(
        dim: usize,
        c: impl Fn(usize, usize) -> CVec<T>,
        invol: CMat<T>,
        tol: T,
    ) -> Result<Self, AlgebraError> {
        let mul = (0..dim)
            .map(|i| (0..dim).map(|j| to_sparse(&c(i, j), tol)).collect())
            .collect();
        Self::new(dim, mul, invol, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn invol_matrix(&self) -> &CMat<T> {
        &self.invol
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec<T> {
        &self.mul[i][j]
    }

    /// Product of two coordinate vectors.
    pub fn mul_vec(&self, x: &CVec<T>, y: &CVec<T>) -> CVec<T> {
        let mut out = CVec::<T>::zeros(self.dim);
        for i in 0..self.dim {
            if x[i] == czero::<T>() {
                continue;
            }
            for j in 0..self.dim {
                let c = x[i] * y[j];
                if c != czero::<T>() {
                    axpy_sparse(&mut out, c, &self.mul[i][j]);
                }
            }
        }
        out
    }

    /// Involution of a coordinate vector.
    pub fn star_vec(&self, x: &CVec<T>) -> CVec<T> {
        &self.invol * x.map(|c| c.conj())
    }

    /// Left multiplication matrix of an element.
    pub fn left_mult(&self, x: &CVec<T>) -> CMat<T> {
        let mut m = linalg::zeros::<T>(self.dim, self.dim);
        for i in 0..self.dim {
            if x[i] == czero::<T>() {
                continue;
            }
            for j in 0..self.dim {
                for &(k, c) in &self.mul[i][j] {
                    m[(k, j)] += x[i] * c;
                }
            }
        }
        m
    }

    /// Trace pairing `tr(L_{b_a} L_{b_b})` for all basis pairs.
    pub fn trace_pairing(&self) -> CMat<T> {
        let n = self.dim;
        let mut t = linalg::zeros::<T>(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut acc = czero::<T>();
                for j in 0..n {
                    for &(i, c) in &self.mul[a][j] {
                        if let Some(&(_, d)) = self.mul[b][i].iter().find(|&&(k, _)| k == j) {
                            acc += c * d;
                        }
                    }
                }
                t[(a, b)] = acc;
            }
        }
        t
    }

    /// Basis of the radical: the kernel of the trace form, which equals the
    /// Jacobson radical in characteristic zero.
    pub fn radical(&self, tol: T) -> CMat<T> {
        if self.dim == 0 {
            return linalg::zeros::<T>(0, 0);
        }
        linalg::null_space(&self.trace_pairing(), tol)
    }

    /// The unit element, if one exists.
    pub fn unit(&self, tol: T) -> Result<CVec<T>, AlgebraError> {
        let n = self.dim;
        if n == 0 {
            return Err(AlgebraError::NoUnit { residual: 0.0 });
        }
        // Stack the equations u b_j = b_j and b_j u = b_j for all j.
        let rows = 2 * n * n;
        let mut a = linalg::zeros::<T>(rows, n);
        let mut rhs = CVec::<T>::zeros(rows);
        for j in 0..n {
            for i in 0..n {
                for &(k, c) in &self.mul[i][j] {
                    a[(j * n + k, i)] += c;
                }
                for &(k, c) in &self.mul[j][i] {
                    a[(n * n + j * n + k, i)] += c;
                }
            }
            rhs[j * n + j] = linalg::cx(1.0, 0.0);
            rhs[n * n + j * n + j] = linalg::cx(1.0, 0.0);
        }
        let (u, res) = linalg::lstsq(&a, &rhs, tol);
        if res > tol * T::from_config(10.0) {
            return Err(AlgebraError::NoUnit {
                residual: res.to_f64(),
            });
        }
        Ok(u)
    }

    /// Basis of the center, as matrix columns.
    pub fn center(&self, tol: T) -> CMat<T> {
        let n = self.dim;
        let mut stacked = linalg::zeros::<T>(n * n, n);
        for k in 0..n {
            for i in 0..n {
                // Column i of the k-th block: b_i b_k - b_k b_i.
                for &(l, c) in &self.mul[i][k] {
                    stacked[(k * n + l, i)] += c;
                }
                for &(l, c) in &self.mul[k][i] {
                    stacked[(k * n + l, i)] -= c;
                }
            }
        }
        linalg::null_space(&stacked, tol)
    }

    /// Wedderburn block report.
    ///
    /// Quotients by the radical, then splits the semisimple part along the
    /// spectral idempotents of a seeded random self-adjoint central element;
    /// retries with a fresh element on eigenvalue collision.
    pub fn blocks(&self, seed: u64, tol: T, retries: usize) -> Result<BlockReport, AlgebraError> {
        let rad = self.radical(tol);
        let radical_dim = rad.ncols();
        let semis = if radical_dim == 0 {
            self.clone()
        } else {
            self.quotient_by_ideal(&rad, tol)?.0
        };
        let n = semis.dim;
        if n == 0 {
            return Ok(BlockReport {
                radical_dim,
                blocks: vec![],
                seed,
            });
        }
        let unit = semis.unit(tol)?;
        let center = semis.center(tol);
        let c = center.ncols();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        for _attempt in 0..retries {
            // Random self-adjoint central element.
            let coeffs = CVec::<T>::from_iterator(
                c,
                (0..c).map(|_| linalg::cx::<T>(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
            );
            let raw = &center * coeffs;
            let z = (raw.clone() + semis.star_vec(&raw)) * linalg::cx::<T>(0.5, 0.0);
            // Operator of z on the center in center coordinates.
            let mut on_center = linalg::zeros::<T>(c, c);
            let pinv = center.clone().svd(true, true);
            for j in 0..c {
                let img = semis.mul_vec(&z, &center.column(j).into_owned());
                let coords = pinv.solve(&img, tol).map_err(|_| {
                    AlgebraError::DimMismatch("center projection failed".into())
                })?;
                on_center.set_column(j, &coords);
            }
            let eigs = nalgebra::linalg::Schur::new(on_center).unpack().1;
            let lambdas: Vec<Complex<T>> = (0..c).map(|i| eigs[(i, i)]).collect();
            let collision = (0..c).any(|i| {
                (0..i).any(|j| cabs(&(lambdas[i] - lambdas[j])) < T::from_config(1e-8))
            });
            if collision {
                continue;
            }
            // Lagrange interpolation gives the central primitive idempotents.
            let mut blocks = Vec::with_capacity(c);
            let mut total = 0usize;
            let mut ok = true;
            for i in 0..c {
                let mut p = unit.clone();
                for j in 0..c {
                    if j == i {
                        continue;
                    }
                    let shifted = &z - &unit * lambdas[j];
                    p = semis.mul_vec(&p, &shifted)
                        / (lambdas[i] - lambdas[j]);
                }
                let block_dim = linalg::rank(&semis.left_mult(&p), tol);
                let size = (block_dim as f64).sqrt().round() as usize;
                if size * size != block_dim {
                    ok = false;
                    break;
                }
                total += block_dim;
                blocks.push(size);
            }
            if !ok || total != n {
                continue;
            }
            blocks.sort_unstable();
            return Ok(BlockReport {
                radical_dim,
                blocks,
                seed,
            });
        }
        Err(AlgebraError::DegenerateSplit { retries })
    }

    /// Quotient by a two-sided *-closed ideal given by an orthonormal-ish
    /// basis (columns). Returns the quotient algebra, the projection from
    /// old coordinates to quotient coordinates, and the lift back.
    pub fn quotient_by_ideal(
        &self,
        ideal: &CMat<T>,
        tol: T,
    ) -> Result<(FdStarAlgebra<T>, CMat<T>, CMat<T>), AlgebraError> {
        let n = self.dim;
        let mut span = linalg::SpanBasis::new(n, tol);
        for j in 0..ideal.ncols() {
            span.try_add(&ideal.column(j).into_owned());
        }
        // Orthonormal complement.
        let mut comp: Vec<CVec<T>> = Vec::new();
        for i in 0..n {
            let mut e = CVec::<T>::zeros(n);
            e[i] = linalg::cx(1.0, 0.0);
            if span.try_add(&e) {
                comp.push(span.cols.last().unwrap().clone());
            }
        }
        let q = comp.len();
        let mut lift = linalg::zeros::<T>(n, q);
        for (j, v) in comp.iter().enumerate() {
            lift.set_column(j, v);
        }
        let proj = lift.adjoint();
        let quot = FdStarAlgebra::from_dense(
            q,
            |i, j| {
                let prod = self.mul_vec(
                    &lift.column(i).into_owned(),
                    &lift.column(j).into_owned(),
                );
                &proj * prod
            },
            &proj * &self.invol * conj_mat(&lift),
            tol,
        )?;
        Ok((quot, proj, lift))
    }

    /// Closes a set of seed vectors into a two-sided *-closed ideal by
    /// alternating basis multiplications until the span stabilizes.
    pub fn ideal_closure(&self, seeds: &[CVec<T>], tol: T) -> linalg::SpanBasis<T> {
        let mut span = linalg::SpanBasis::new(self.dim, tol);
        let mut frontier: Vec<CVec<T>> = Vec::new();
        for v in seeds {
            if span.try_add(v) {
                frontier.push(span.cols.last().unwrap().clone());
            }
            let sv = self.star_vec(v);
            if span.try_add(&sv) {
                frontier.push(span.cols.last().unwrap().clone());
            }
        }
        let mut basis_vecs: Vec<CVec<T>> = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut e = CVec::<T>::zeros(self.dim);
            e[i] = linalg::cx(1.0, 0.0);
            basis_vecs.push(e);
        }
        while let Some(v) = frontier.pop() {
            for b in &basis_vecs {
                for w in [self.mul_vec(b, &v), self.mul_vec(&v, b)] {
                    if span.try_add(&w) {
                        frontier.push(span.cols.last().unwrap().clone());
                        let sw = self.star_vec(&w);
                        if span.try_add(&sw) {
                            frontier.push(span.cols.last().unwrap().clone());
                        }
                    }
                }
            }
        }
        span
    }
}

/// A certified model: semisimple, with a faithful *-representation built
/// from left multiplication and the trace inner product. Carries the data
/// needed for operator norms and positivity checks.
#[derive(Debug, Clone)]
pub struct CStarModel<T: Real> {
    pub alg: FdStarAlgebra<T>,
    w: CMat<T>,
    w_inv: CMat<T>,
}

impl<T: Real> CStarModel<T> {
    /// Certifies semisimplicity (radical must vanish) and positivity of the
    /// trace inner product `(x, y) -> tr(L_{y* x})`, then fixes the
    /// transported left regular representation as the faithful model.
    pub fn certify(alg: FdStarAlgebra<T>, tol: T) -> Result<Self, AlgebraError> {
        let radical_dim = alg.radical(tol).ncols();
        if radical_dim > 0 {
            return Err(AlgebraError::NotSemisimple { radical_dim });
        }
        let n = alg.dim();
        if n == 0 {
            return Ok(Self {
                alg,
                w: linalg::zeros::<T>(0, 0),
                w_inv: linalg::zeros::<T>(0, 0),
            });
        }
        // Gram matrix S_ij = tr(L_{b_j^* b_i}) = sum_a conj-free pairing.
        let t = alg.trace_pairing();
        let mut s = linalg::zeros::<T>(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = czero::<T>();
                for a in 0..n {
                    // b_j^* = sum_a invol[a][j] b_a, and tr is linear.
                    acc += alg.invol[(a, j)] * t[(a, i)];
                }
                s[(i, j)] = acc;
            }
        }
        let s = (&s + s.adjoint()) * linalg::cx::<T>(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::new(s);
        let min = eig
            .eigenvalues
            .iter()
            .copied()
            .fold(T::from_config(f64::INFINITY), |a, b| if b < a { b } else { a });
        if min <= tol {
            return Err(AlgebraError::GramNotPositive {
                min_eig: min.to_f64(),
            });
        }
        let u = eig.eigenvectors;
        let sqrt = CMat::<T>::from_diagonal(&eig.eigenvalues.map(|v| Complex::new(v.sqrt(), T::zero())));
        let inv_sqrt =
            CMat::<T>::from_diagonal(&eig.eigenvalues.map(|v| Complex::new(T::one() / v.sqrt(), T::zero())));
        let w = sqrt * u.adjoint();
        let w_inv = u * inv_sqrt;
        Ok(Self { alg, w, w_inv })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Faithful *-representation of an element.
    pub fn rep(&self, x: &CVec<T>) -> CMat<T> {
        &self.w * self.alg.left_mult(x) * &self.w_inv
    }

    /// Spectral norm in the model.
    pub fn op_norm(&self, x: &CVec<T>) -> T {
        if self.dim() == 0 {
            return T::zero();
        }
        linalg::spectral_norm(&self.rep(x))
    }

    /// Minimum spectral point of a self-adjoint element.
    pub fn min_eig(&self, x: &CVec<T>, tol: T) -> Result<T, AlgebraError> {
        let res = linalg::max_abs_vec(&(self.alg.star_vec(x) - x));
        if res > tol {
            return Err(AlgebraError::NotSelfAdjoint {
                residual: res.to_f64(),
            });
        }
        if self.dim() == 0 {
            return Ok(T::zero());
        }
        Ok(linalg::min_eigenvalue(&self.rep(x)))
    }

    /// Positivity: self-adjoint with spectrum above `-tol`.
    pub fn is_positive(&self, x: &CVec<T>, tol: T) -> Result<bool, AlgebraError> {
        Ok(self.min_eig(x, tol)? >= -tol)
    }
}

fn axpy_sparse<T: Real>(out: &mut CVec<T>, c: Complex<T>, v: &SparseVec<T>) {
    for &(k, d) in v {
        out[k] += c * d;
    }
}

fn to_sparse<T: Real>(v: &CVec<T>, tol: T) -> SparseVec<T> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| cabs(c) > tol)
        .map(|(k, &c)| (k, c))
        .collect()
}

fn conj_mat<T: Real>(m: &CMat<T>) -> CMat<T> {
    m.map(|c| c.conj())
}

/// JSON form: `{dim, triples: [[i, j, k, re, im]], invol: [[[re, im]]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub triples: Vec<(usize, usize, usize, f64, f64)>,
    pub invol: Vec<Vec<[f64; 2]>>,
}

impl AlgebraJson {
    pub fn from_algebra<T: Real>(alg: &FdStarAlgebra<T>) -> Self {
        let mut triples = Vec::new();
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                for &(k, c) in alg.basis_product(i, j) {
                    triples.push((i, j, k, c.re.to_f64(), c.im.to_f64()));
                }
            }
        }
        let invol = (0..alg.dim())
            .map(|r| {
                (0..alg.dim())
                    .map(|c| {
                        let v = alg.invol_matrix()[(r, c)];
                        [v.re.to_f64(), v.im.to_f64()]
                    })
                    .collect()
            })
            .collect();
        Self {
            dim: alg.dim(),
            triples,
            invol,
        }
    }

    pub fn to_algebra<T: Real>(&self, tol: T) -> Result<FdStarAlgebra<T>, AlgebraError> {
        let mut mul = vec![vec![SparseVec::<T>::new(); self.dim]; self.dim];
        for &(i, j, k, re, im) in &self.triples {
            if i >= self.dim || j >= self.dim || k >= self.dim {
                return Err(AlgebraError::DimMismatch("triple index out of range".into()));
            }
            mul[i][j].push((k, linalg::cx(re, im)));
        }
        if self.invol.len() != self.dim || self.invol.iter().any(|r| r.len() != self.dim) {
            return Err(AlgebraError::DimMismatch("involution matrix shape".into()));
        }
        let mut invol = linalg::zeros::<T>(self.dim, self.dim);
        for (r, row) in self.invol.iter().enumerate() {
            for (c, &[re, im]) in row.iter().enumerate() {
                invol[(r, c)] = linalg::cx(re, im);
            }
        }
        FdStarAlgebra::new(self.dim, mul, invol, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cx;

    const TOL: f64 = 1e-9;

    /// Full 2x2 matrix algebra on matrix units e11, e12, e21, e22.
    pub(crate) fn m2() -> FdStarAlgebra<f64> {
        let enc = |a: usize, b: usize| a * 2 + b;
        let mut mul = vec![vec![Vec::new(); 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        if b == c {
                            mul[enc(a, b)][enc(c, d)].push((enc(a, d), cx::<f64>(1.0, 0.0)));
                        }
                    }
                }
            }
        }
        let mut invol = linalg::zeros::<f64>(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                invol[(enc(b, a), enc(a, b))] = cx(1.0, 0.0);
            }
        }
        FdStarAlgebra::new(4, mul, invol, TOL).unwrap()
    }

    /// Group algebra of Z2.
    fn z2_group_algebra() -> FdStarAlgebra<f64> {
        let mut mul = vec![vec![Vec::new(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                mul[i][j].push(((i + j) % 2, cx::<f64>(1.0, 0.0)));
            }
        }
        FdStarAlgebra::new(2, mul, linalg::identity::<f64>(2), TOL).unwrap()
    }

    /// Span of {1, n} with n^2 = 0.
    fn dual_numbers() -> FdStarAlgebra<f64> {
        let mut mul = vec![vec![Vec::new(); 2]; 2];
        mul[0][0].push((0, cx::<f64>(1.0, 0.0)));
        mul[0][1].push((1, cx::<f64>(1.0, 0.0)));
        mul[1][0].push((1, cx::<f64>(1.0, 0.0)));
        FdStarAlgebra::new(2, mul, linalg::identity::<f64>(2), TOL).unwrap()
    }

    /// Direct sum C + M2.
    fn c_plus_m2() -> FdStarAlgebra<f64> {
        let m2 = m2();
        let mut mul = vec![vec![Vec::new(); 5]; 5];
        mul[0][0].push((0, cx::<f64>(1.0, 0.0)));
        for i in 0..4 {
            for j in 0..4 {
                for &(k, c) in m2.basis_product(i, j) {
                    mul[i + 1][j + 1].push((k + 1, c));
                }
            }
        }
        let mut invol = linalg::zeros::<f64>(5, 5);
        invol[(0, 0)] = cx(1.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                invol[(i + 1, j + 1)] = m2.invol_matrix()[(i, j)];
            }
        }
        FdStarAlgebra::new(5, mul, invol, TOL).unwrap()
    }

    #[test]
    fn m2_is_semisimple_with_one_block_of_size_two() {
        let alg = m2();
        assert_eq!(alg.radical(TOL).ncols(), 0);
        let report = alg.blocks(7, TOL, 5).unwrap();
        assert_eq!(report.blocks, vec![2]);
        assert_eq!(report.radical_dim, 0);
    }

    #[test]
    fn dual_numbers_have_one_dimensional_radical() {
        let alg = dual_numbers();
        let rad = alg.radical(TOL);
        assert_eq!(rad.ncols(), 1);
        // The radical is spanned by n (second basis vector).
        assert!(rad.column(0)[1].norm() > 0.9);
        let report = alg.blocks(7, TOL, 5).unwrap();
        assert_eq!(report.radical_dim, 1);
        assert_eq!(report.blocks, vec![1]);
    }

    #[test]
    fn z2_group_algebra_splits_into_two_characters() {
        let alg = z2_group_algebra();
        assert_eq!(alg.radical(TOL).ncols(), 0);
        let report = alg.blocks(7, TOL, 5).unwrap();
        assert_eq!(report.blocks, vec![1, 1]);
    }

    #[test]
    fn c_plus_m2_blocks() {
        let report = c_plus_m2().blocks(7, TOL, 5).unwrap();
        assert_eq!(report.blocks, vec![1, 2]);
    }

    #[test]
    fn radical_is_a_two_sided_ideal() {
        let alg = dual_numbers();
        let rad = alg.radical(TOL);
        let closure = alg.ideal_closure(
            &(0..rad.ncols())
                .map(|j| rad.column(j).into_owned())
                .collect::<Vec<_>>(),
            TOL,
        );
        assert_eq!(closure.len(), rad.ncols(), "closing changes nothing");
    }

    #[test]
    fn blocks_are_invariant_under_basis_change() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let alg = c_plus_m2();
        let n = alg.dim();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        // Random invertible real change of basis.
        let p = loop {
            let cand = CMat::<f64>::from_fn(n, n, |_, _| cx(rng.gen_range(-1.0..1.0), 0.0));
            if linalg::rank(&cand, 1e-6) == n {
                break cand;
            }
        };
        let p_inv = p.clone().try_inverse().unwrap();
        let conj = FdStarAlgebra::from_dense(
            n,
            |i, j| {
                let x = p.column(i).into_owned();
                let y = p.column(j).into_owned();
                &p_inv * alg.mul_vec(&x, &y)
            },
            &p_inv * alg.invol_matrix() * p.map(|c| c.conj()),
            1e-7,
        )
        .unwrap();
        let a = alg.blocks(7, TOL, 5).unwrap();
        let b = conj.blocks(7, 1e-7, 5).unwrap();
        assert_eq!(a.blocks, b.blocks);
    }

    #[test]
    fn faithful_rep_is_star_preserving_and_injective() {
        for alg in [m2(), z2_group_algebra(), c_plus_m2()] {
            let model = CStarModel::certify(alg, TOL).unwrap();
            let n = model.dim();
            for i in 0..n {
                let mut e = CVec::<f64>::zeros(n);
                e[i] = cx(1.0, 0.0);
                let lhs = model.rep(&model.alg.star_vec(&e));
                let rhs = model.rep(&e).adjoint();
                assert!(linalg::max_abs(&(lhs - rhs)) < 1e-8, "star-preserving");
            }
            // Injectivity by rank of the flattened representation map.
            let mut flat = linalg::zeros::<f64>(n * n, n);
            for i in 0..n {
                let mut e = CVec::<f64>::zeros(n);
                e[i] = cx(1.0, 0.0);
                let m = model.rep(&e);
                for r in 0..n {
                    for c in 0..n {
                        flat[(r * n + c, i)] = m[(r, c)];
                    }
                }
            }
            assert_eq!(linalg::rank(&flat, 1e-8), n);
        }
    }

    #[test]
    fn dual_numbers_are_rejected_by_certification() {
        assert!(matches!(
            CStarModel::certify(dual_numbers(), TOL),
            Err(AlgebraError::NotSemisimple { radical_dim: 1 })
        ));
    }

    #[test]
    fn unit_norm_is_one_and_projections_have_norm_one() {
        let model = CStarModel::certify(c_plus_m2(), TOL).unwrap();
        let unit = model.alg.unit(TOL).unwrap();
        assert!((model.op_norm(&unit) - 1.0).abs() < 1e-8);
        // A nonzero self-adjoint idempotent: e11 in the M2 block.
        let mut e = CVec::<f64>::zeros(5);
        e[1] = cx(1.0, 0.0);
        assert!((model.op_norm(&e) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cstar_identity_on_random_elements() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let model = CStarModel::certify(c_plus_m2(), TOL).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = CVec::<f64>::from_iterator(
                5,
                (0..5).map(|_| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
            );
            let xs = model.alg.star_vec(&x);
            let xx = model.alg.mul_vec(&xs, &x);
            let lhs = model.op_norm(&xx);
            let rhs = model.op_norm(&x).powi(2);
            assert!((lhs - rhs).abs() < 1e-8 * (1.0 + rhs));
        }
    }

    #[test]
    fn positivity_of_squares_and_negatives() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let model = CStarModel::certify(m2(), TOL).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = CVec::<f64>::from_iterator(
                4,
                (0..4).map(|_| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
            );
            let xs = model.alg.star_vec(&x);
            let xx = model.alg.mul_vec(&xs, &x);
            assert!(model.is_positive(&xx, 1e-8).unwrap());
            if xx.norm() > 1e-6 {
                let neg = -xx;
                assert!(!model.is_positive(&neg, 1e-8).unwrap());
            }
        }
        // Non-self-adjoint input is rejected.
        let mut e12 = CVec::<f64>::zeros(4);
        e12[1] = cx(1.0, 0.0);
        assert!(matches!(
            model.is_positive(&e12, 1e-8),
            Err(AlgebraError::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn quotient_by_radical_of_dual_numbers_is_scalars() {
        let alg = dual_numbers();
        let rad = alg.radical(TOL);
        let (quot, _, _) = alg.quotient_by_ideal(&rad, TOL).unwrap();
        assert_eq!(quot.dim(), 1);
        let report = quot.blocks(7, TOL, 5).unwrap();
        assert_eq!(report.blocks, vec![1]);
    }

    #[test]
    fn json_roundtrip_preserves_structure() {
        let alg = c_plus_m2();
        let json = AlgebraJson::from_algebra(&alg);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: AlgebraJson = serde_json::from_str(&text).unwrap();
        let back = parsed.to_algebra::<f64>(TOL).unwrap();
        assert_eq!(back.dim(), alg.dim());
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let mut a = CVec::<f64>::zeros(alg.dim());
                for &(k, c) in alg.basis_product(i, j) {
                    a[k] += c;
                }
                let mut b = CVec::<f64>::zeros(alg.dim());
                for &(k, c) in back.basis_product(i, j) {
                    b[k] += c;
                }
                assert!(linalg::max_abs_vec(&(a - b)) < 1e-12);
            }
        }
    }

    #[test]
    fn f32_instantiation_works_on_m2() {
        let enc = |a: usize, b: usize| a * 2 + b;
        let mut mul = vec![vec![Vec::new(); 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        if b == c {
                            mul[enc(a, b)][enc(c, d)].push((enc(a, d), cx::<f32>(1.0, 0.0)));
                        }
                    }
                }
            }
        }
        let mut invol = linalg::zeros::<f32>(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                invol[(enc(b, a), enc(a, b))] = cx(1.0, 0.0);
            }
        }
        let alg = FdStarAlgebra::<f32>::new(4, mul, invol, 1e-4).unwrap();
        let report = alg.blocks(7, 1e-4, 5).unwrap();
        assert_eq!(report.blocks, vec![2]);
    }
}
