//! Pseudo-Euclidean linear algebra on small dense coordinate vectors.
//!
//! Every ambient space in this crate is `R^(2n+1)` with a diagonal metric
//! `diag(e1, e1, e2, e2, ..., en, en, 1)` whose signs come in equal adjacent
//! pairs. Null vectors have zero indefinite norm, so rank and residual tests
//! use the coordinate (euclidean) norm throughout.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Coordinate vector in the ambient space.
pub type Vector = DVector<f64>;

/// Default absolute tolerance for algebraic residuals.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative slack used when picking elimination pivots. Entries within this
/// fraction of the largest candidate count as tied, and ties go to the lowest
/// column index. Keeps pivot choices stable under small perturbations of
/// symmetric configurations.
pub const PIVOT_SLACK: f64 = 1e-3;

/// Flat diagonal metric with paired signs and a trailing `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor {
    pair_signs: Vec<i8>,
    diagonal: Vector,
}

impl MetricTensor {
    /// Builds `diag(s1, s1, ..., sn, sn, 1)` from one sign per pair.
    pub fn new(pair_signs: &[i8]) -> Result<Self> {
        if pair_signs.is_empty() {
            return Err(Error::InvalidSignature(
                "at least one sign pair is required".into(),
            ));
        }
        if let Some(bad) = pair_signs.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::InvalidSignature(format!(
                "pair signs must be +1 or -1, got {bad}"
            )));
        }
        if !pair_signs.contains(&-1) {
            return Err(Error::InvalidSignature(
                "all pairs are positive; a Riemannian ambient has no lightlike hypersurfaces"
                    .into(),
            ));
        }
        let mut diag = Vec::with_capacity(2 * pair_signs.len() + 1);
        for s in pair_signs {
            diag.push(f64::from(*s));
            diag.push(f64::from(*s));
        }
        diag.push(1.0);
        Ok(Self {
            pair_signs: pair_signs.to_vec(),
            diagonal: Vector::from_vec(diag),
        })
    }

    /// Builds the metric from its first `2n` diagonal entries.
    pub fn from_diagonal(diagonal_signs: &[f64]) -> Result<Self> {
        if !diagonal_signs.len().is_multiple_of(2) {
            return Err(Error::InvalidSignature(format!(
                "expected an even number of diagonal signs, got {}",
                diagonal_signs.len()
            )));
        }
        let mut pairs = Vec::with_capacity(diagonal_signs.len() / 2);
        for chunk in diagonal_signs.chunks(2) {
            if chunk[0] != chunk[1] {
                return Err(Error::InvalidSignature(format!(
                    "signs must come in equal adjacent pairs, got ({}, {})",
                    chunk[0], chunk[1]
                )));
            }
            pairs.push(if chunk[0] == 1.0 {
                1
            } else if chunk[0] == -1.0 {
                -1
            } else {
                return Err(Error::InvalidSignature(format!(
                    "diagonal entries must be +1 or -1, got {}",
                    chunk[0]
                )));
            });
        }
        Self::new(&pairs)
    }

    pub fn n_pairs(&self) -> usize {
        self.pair_signs.len()
    }

    /// Ambient dimension `2n + 1`.
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn pair_signs(&self) -> &[i8] {
        &self.pair_signs
    }

    pub fn sign(&self, i: usize) -> f64 {
        self.diagonal[i]
    }

    pub fn diagonal(&self) -> &Vector {
        &self.diagonal
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.diagonal)
    }

    /// `g(u, v) = sum_i e_i u_i v_i`.
    ///
    /// Panics when the dimensions disagree; see [`MetricTensor::checked_inner`].
    pub fn inner(&self, u: &Vector, v: &Vector) -> f64 {
        assert_eq!(u.len(), self.dim(), "vector dimension mismatch");
        assert_eq!(v.len(), self.dim(), "vector dimension mismatch");
        u.iter()
            .zip(v.iter())
            .zip(self.diagonal.iter())
            .map(|((a, b), s)| s * a * b)
            .sum()
    }

    pub fn checked_inner(&self, u: &Vector, v: &Vector) -> Result<f64> {
        for w in [u, v] {
            if w.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: w.len(),
                });
            }
        }
        Ok(self.inner(u, v))
    }

    /// Converts a covector (e.g. `dF`) into the vector `g^{-1} w`.
    pub fn raise_index(&self, covector: &Vector) -> Vector {
        assert_eq!(covector.len(), self.dim(), "covector dimension mismatch");
        covector.component_div(&self.diagonal)
    }

    pub fn lower_index(&self, v: &Vector) -> Vector {
        assert_eq!(v.len(), self.dim(), "vector dimension mismatch");
        v.component_mul(&self.diagonal)
    }

    /// Matrix of pairwise inner products.
    pub fn gram(&self, vectors: &[Vector]) -> DMatrix<f64> {
        let k = vectors.len();
        DMatrix::from_fn(k, k, |i, j| self.inner(&vectors[i], &vectors[j]))
    }

    /// `g(u,u) g(v,v) - g(u,v)^2`.
    pub fn gram_det2(&self, u: &Vector, v: &Vector) -> f64 {
        let uv = self.inner(u, v);
        self.inner(u, u) * self.inner(v, v) - uv * uv
    }
}

/// Standard basis vector `e_i` of `R^dim`.
pub fn basis_vector(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

/// Matrix whose columns are the given vectors.
pub fn columns(dim: usize, vectors: &[Vector]) -> DMatrix<f64> {
    DMatrix::from_fn(dim, vectors.len(), |i, j| vectors[j][i])
}

/// Number of singular values above `tol * sigma_max`.
pub fn euclidean_rank(dim: usize, vectors: &[Vector], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let sv = columns(dim, vectors).singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * max).count()
}

/// Least-squares coefficients of `v` in the columns of `basis` and the
/// euclidean norm of what is left over.
pub fn least_squares(dim: usize, basis: &[Vector], v: &Vector) -> (Vector, f64) {
    if basis.is_empty() {
        return (Vector::zeros(0), v.norm());
    }
    let a = columns(dim, basis);
    // Householder QR for independent columns. The SVD path is kept for
    // rank-deficient input only: nalgebra's SVD can lose about 1e-7 of
    // accuracy when two singular values nearly coincide.
    let qr = a.clone().qr();
    let r = qr.r();
    let diag_max = r.diagonal().amax();
    let independent = basis.len() <= dim && r.diagonal().iter().all(|d| d.abs() > 1e-12 * diag_max);
    let coeffs = if independent {
        r.solve_upper_triangular(&(qr.q().transpose() * v))
            .unwrap_or_else(|| Vector::zeros(basis.len()))
    } else {
        a.clone()
            .svd(true, true)
            .solve(v, 1e-14)
            .unwrap_or_else(|_| Vector::zeros(basis.len()))
    };
    let residual = (&a * &coeffs - v).norm();
    (coeffs, residual)
}

/// Null space of a dense matrix together with the pivot columns used.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpace {
    /// One basis vector per free column, with a `1` in that column.
    pub basis: Vec<Vector>,
    /// Pivot columns in ascending order.
    pub pivots: Vec<usize>,
}

/// Reduced row echelon null space with full pivoting.
///
/// The pivot is the largest remaining entry; entries within [`PIVOT_SLACK`] of
/// it are treated as tied and the lowest column (then lowest row) wins.
/// Entries below `tol` times the largest input entry are treated as zero.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> NullSpace {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let scale = a.amax();
    let mut used = vec![false; cols];
    let mut pivot_of_row: Vec<usize> = Vec::new();

    if scale > 0.0 {
        for row in 0..rows {
            let mut best = 0.0_f64;
            for j in (0..cols).filter(|j| !used[*j]) {
                for i in row..rows {
                    best = best.max(a[(i, j)].abs());
                }
            }
            if best <= tol * scale {
                break;
            }
            let threshold = best * (1.0 - PIVOT_SLACK);
            let (pi, pj) = (0..cols)
                .filter(|j| !used[*j])
                .flat_map(|j| (row..rows).map(move |i| (i, j)))
                .find(|&(i, j)| a[(i, j)].abs() >= threshold)
                .expect("a pivot at least as large as the threshold exists");

            a.swap_rows(row, pi);
            let p = a[(row, pj)];
            for j in 0..cols {
                a[(row, j)] /= p;
            }
            for i in (0..rows).filter(|i| *i != row) {
                let factor = a[(i, pj)];
                if factor != 0.0 {
                    for j in 0..cols {
                        a[(i, j)] -= factor * a[(row, j)];
                    }
                }
            }
            used[pj] = true;
            pivot_of_row.push(pj);
        }
    }

    let basis = (0..cols)
        .filter(|j| !used[*j])
        .map(|free| {
            let mut x = Vector::zeros(cols);
            x[free] = 1.0;
            for (r, &pc) in pivot_of_row.iter().enumerate() {
                x[pc] = -a[(r, free)];
            }
            x
        })
        .collect();

    let mut pivots = pivot_of_row;
    pivots.sort_unstable();
    NullSpace { basis, pivots }
}

/// A subspace given by a linearly independent basis and its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
    gram: DMatrix<f64>,
}

impl Subspace {
    /// Checks linear independence with a euclidean rank test at `tol`.
    pub fn new(g: &MetricTensor, basis: Vec<Vector>, tol: f64) -> Result<Self> {
        let dim = g.dim();
        if let Some(bad) = basis.iter().find(|b| b.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        let rank = euclidean_rank(dim, &basis, tol);
        if rank != basis.len() {
            return Err(Error::LinearlyDependent {
                rank,
                expected: basis.len(),
            });
        }
        let gram = g.gram(&basis);
        Ok(Self {
            ambient_dim: dim,
            basis,
            gram,
        })
    }

    /// The whole ambient space with its standard basis.
    pub fn standard(g: &MetricTensor) -> Self {
        let basis: Vec<Vector> = (0..g.dim()).map(|i| basis_vector(g.dim(), i)).collect();
        let gram = g.matrix();
        Self {
            ambient_dim: g.dim(),
            basis,
            gram,
        }
    }

    pub fn empty(g: &MetricTensor) -> Self {
        Self {
            ambient_dim: g.dim(),
            basis: Vec::new(),
            gram: DMatrix::zeros(0, 0),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vector> {
        self.basis
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Smallest eigenvalue of the Gram matrix in absolute value, and the
    /// largest, as a pair. Both are zero for the trivial subspace.
    pub fn gram_spectrum_bounds(&self) -> (f64, f64) {
        if self.dim() == 0 {
            return (0.0, 0.0);
        }
        let eig = SymmetricEigen::new(self.gram.clone()).eigenvalues;
        let min = eig.iter().fold(f64::INFINITY, |m, e| m.min(e.abs()));
        let max = eig.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        (min, max)
    }

    /// Smallest |eigenvalue| of the Gram matrix after scaling every basis
    /// vector to unit euclidean length. Invariant under rescaling the basis
    /// vectors individually; zero for the trivial subspace.
    pub fn normalized_nondegeneracy(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let norms: Vec<f64> = self
            .basis
            .iter()
            .map(|b| b.norm().max(f64::MIN_POSITIVE))
            .collect();
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.gram[(i, j)] / (norms[i] * norms[j])
        });
        SymmetricEigen::new(scaled)
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, e| m.min(e.abs()))
    }

    /// Whether the metric restricted to this subspace is non-degenerate at
    /// `tol`, judged by [`Subspace::normalized_nondegeneracy`].
    pub fn is_nondegenerate(&self, tol: f64) -> bool {
        self.dim() == 0 || self.normalized_nondegeneracy() > tol
    }

    /// Euclidean distance from `v` to the span.
    pub fn span_residual(&self, v: &Vector) -> f64 {
        least_squares(self.ambient_dim, &self.basis, v).1
    }
}

/// Orthogonal complement of `span` inside `within`, with the pivot columns
/// chosen by the elimination.
pub(crate) fn orthocomplement_pivoted(
    g: &MetricTensor,
    span: &Subspace,
    within: &Subspace,
    require_split: bool,
    tol: f64,
) -> Result<(Subspace, Vec<usize>)> {
    if span.dim() == 0 {
        return Ok((within.clone(), Vec::new()));
    }
    if require_split && !span.is_nondegenerate(tol) {
        return Err(Error::DegenerateSpan {
            eigenvalue: span.normalized_nondegeneracy(),
        });
    }
    let constraints = DMatrix::from_fn(span.dim(), within.dim(), |i, j| {
        g.inner(&span.basis()[i], &within.basis()[j])
    });
    let ns = null_space(&constraints, tol);
    let basis = ns
        .basis
        .iter()
        .map(|c| {
            within
                .basis()
                .iter()
                .zip(c.iter())
                .fold(Vector::zeros(g.dim()), |acc, (w, ci)| acc + w * *ci)
        })
        .collect();
    Ok((Subspace::new(g, basis, tol)?, ns.pivots))
}

/// Vectors of `within` that are `g`-orthogonal to every vector of `span`.
///
/// With `require_split` the restriction of `g` to `span` must be
/// non-degenerate, so that `within = span (+) complement` is a direct sum.
pub fn orthocomplement(
    g: &MetricTensor,
    span: &Subspace,
    within: &Subspace,
    require_split: bool,
    tol: f64,
) -> Result<Subspace> {
    orthocomplement_pivoted(g, span, within, require_split, tol).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g5() -> MetricTensor {
        MetricTensor::new(&[-1, 1]).unwrap()
    }

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    #[test]
    fn fixture_normals_are_null() {
        let g = g5();
        assert_eq!(
            g.inner(
                &v(&[1.0, 0.0, 1.0, 0.0, 0.0]),
                &v(&[1.0, 0.0, 1.0, 0.0, 0.0])
            ),
            0.0
        );
        let e5 = basis_vector(5, 4);
        assert_eq!(g.inner(&e5, &e5), 1.0);
        let s = 2f64.sqrt();
        let xb = v(&[s, 0.0, 1.0, 0.0, 1.0]);
        assert!(g.inner(&xb, &xb).abs() < 1e-15);
    }

    #[test]
    fn checked_inner_rejects_mismatch() {
        let g = g5();
        let err = g
            .checked_inner(&v(&[1.0, 0.0]), &basis_vector(5, 0))
            .unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 5,
                found: 2
            }
        );
    }

    #[test]
    fn raise_index_examples() {
        let g = g5();
        assert_eq!(
            g.raise_index(&v(&[-1.0, 0.0, 1.0, 0.0, 0.0])),
            v(&[1.0, 0.0, 1.0, 0.0, 0.0])
        );
        assert_eq!(g.raise_index(&basis_vector(5, 4)), basis_vector(5, 4));
        let s = 2f64.sqrt();
        assert_eq!(
            g.raise_index(&v(&[-s, 0.0, 1.0, 0.0, 1.0])),
            v(&[s, 0.0, 1.0, 0.0, 1.0])
        );
    }

    #[test]
    fn signatures() {
        assert!(MetricTensor::new(&[1, 1]).is_err());
        assert!(MetricTensor::new(&[]).is_err());
        assert!(MetricTensor::new(&[-1, 2]).is_err());
        assert!(MetricTensor::from_diagonal(&[-1.0, 1.0, 1.0, 1.0]).is_err());
        let g = MetricTensor::from_diagonal(&[-1.0, -1.0, 1.0, 1.0]).unwrap();
        assert_eq!(g, g5());
        assert_eq!(g.diagonal().as_slice(), &[-1.0, -1.0, 1.0, 1.0, 1.0]);
        assert_eq!(MetricTensor::new(&[-1]).unwrap().dim(), 3);
    }

    #[test]
    fn gram_det2_examples() {
        let g = g5();
        // phi_bar xi and phi_bar N of the tangential hyperplane x3 = x1
        let pxi = v(&[0.0, 1.0, 0.0, 1.0, 0.0]);
        let pn = v(&[0.0, -0.5, 0.0, 0.5, 0.0]);
        assert_eq!(g.gram_det2(&pxi, &pn), -1.0);
        assert_eq!(g.gram_det2(&pxi, &pxi), 0.0);
        let s = 2f64.sqrt();
        let pxi_b = v(&[0.0, s, 0.0, 1.0, 0.0]);
        let pn_b = v(&[0.0, -s / 4.0, 0.0, 0.25, 0.0]);
        assert!((g.gram_det2(&pxi_b, &pn_b) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn null_space_pivots_lowest_column_on_ties() {
        let m = DMatrix::from_row_slice(2, 5, &[-1.0, 0.0, 1.0, 0.0, 0.0, 0.5, 0.0, 0.5, 0.0, 0.0]);
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.pivots, vec![0, 2]);
        assert_eq!(
            ns.basis,
            vec![basis_vector(5, 1), basis_vector(5, 3), basis_vector(5, 4)]
        );
    }

    #[test]
    fn null_space_of_zero_matrix_is_everything() {
        let ns = null_space(&DMatrix::zeros(2, 3), 1e-12);
        assert!(ns.pivots.is_empty());
        assert_eq!(ns.basis.len(), 3);
    }

    #[test]
    fn orthocomplement_in_tangential_screen() {
        let g = g5();
        let screen = Subspace::new(
            &g,
            vec![basis_vector(5, 1), basis_vector(5, 3), basis_vector(5, 4)],
            1e-12,
        )
        .unwrap();
        let span = Subspace::new(
            &g,
            vec![
                v(&[0.0, 1.0, 0.0, 1.0, 0.0]),
                v(&[0.0, -0.5, 0.0, 0.5, 0.0]),
            ],
            1e-12,
        )
        .unwrap();
        let d = orthocomplement(&g, &span, &screen, true, 1e-12).unwrap();
        assert_eq!(d.basis(), &[basis_vector(5, 4)]);

        let same = orthocomplement(&g, &Subspace::empty(&g), &screen, true, 1e-12).unwrap();
        assert_eq!(same, screen);
    }

    #[test]
    fn orthocomplement_in_proper_screen() {
        let g = g5();
        let s = 2f64.sqrt();
        let screen = Subspace::new(
            &g,
            vec![
                basis_vector(5, 1),
                basis_vector(5, 3),
                v(&[0.0, 0.0, -1.0, 0.0, 1.0]),
            ],
            1e-12,
        )
        .unwrap();
        let span = Subspace::new(
            &g,
            vec![
                v(&[0.0, s, 0.0, 1.0, 0.0]),
                v(&[0.0, -s / 4.0, 0.0, 0.25, 0.0]),
            ],
            1e-12,
        )
        .unwrap();
        let d = orthocomplement(&g, &span, &screen, true, 1e-12).unwrap();
        assert_eq!(d.dim(), 1);
        let w = v(&[0.0, 0.0, -0.5, 0.0, 0.5]);
        let b = &d.basis()[0];
        // parallel to (0,0,-1/2,0,1/2)
        assert!((b.dot(&w).abs() - b.norm() * w.norm()).abs() < 1e-12);
    }

    #[test]
    fn orthocomplement_rejects_degenerate_split() {
        let g = g5();
        let null = Subspace::new(&g, vec![v(&[1.0, 0.0, 1.0, 0.0, 0.0])], 1e-12).unwrap();
        let err = orthocomplement(&g, &null, &Subspace::standard(&g), true, 1e-9).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpan { .. }));
        // Without a split request the complement is the 4-dim null hyperplane.
        let c = orthocomplement(&g, &null, &Subspace::standard(&g), false, 1e-9).unwrap();
        assert_eq!(c.dim(), 4);
    }

    #[test]
    fn subspace_rejects_dependent_basis() {
        let g = g5();
        let e1 = basis_vector(5, 0);
        let err = Subspace::new(&g, vec![e1.clone(), e1 * 2.0], 1e-9).unwrap_err();
        assert!(matches!(
            err,
            Error::LinearlyDependent {
                rank: 1,
                expected: 2
            }
        ));
    }

    fn vec5() -> impl Strategy<Value = Vector> {
        prop::collection::vec(-10.0f64..10.0, 5).prop_map(Vector::from_vec)
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_and_bilinear(u in vec5(), w in vec5(), x in vec5(), a in -3.0f64..3.0) {
            let g = g5();
            prop_assert!((g.inner(&u, &w) - g.inner(&w, &u)).abs() <= 1e-12);
            let lhs = g.inner(&(&u * a + &w), &x);
            let rhs = a * g.inner(&u, &x) + g.inner(&w, &x);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }

        #[test]
        fn raise_then_lower_is_identity(w in vec5(), x in vec5()) {
            let g = g5();
            let raised = g.raise_index(&w);
            prop_assert_eq!(g.lower_index(&raised), w.clone());
            prop_assert!((g.inner(&raised, &x) - w.dot(&x)).abs() <= 1e-12);
        }

        #[test]
        fn orthocomplement_is_orthogonal(a in vec5(), b in vec5()) {
            let g = g5();
            let Ok(span) = Subspace::new(&g, vec![a, b], 1e-6) else { return Ok(()); };
            let c = orthocomplement(&g, &span, &Subspace::standard(&g), false, 1e-12).unwrap();
            prop_assert_eq!(c.dim(), 3);
            for x in c.basis() {
                for s in span.basis() {
                    prop_assert!(g.inner(x, s).abs() <= 1e-9 * (1.0 + x.norm() * s.norm()));
                }
            }
        }
    }
}
