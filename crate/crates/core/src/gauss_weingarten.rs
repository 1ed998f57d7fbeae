//! Second fundamental forms, shape operators and the transversal 1-form by
//! finite differences.
//!
//! The ambient space is flat, so the Levi-Civita derivative of a vector field
//! is its coordinate directional derivative. Tangent fields are extended by
//! keeping their coordinates fixed in the frame field's tangent basis, and
//! probe points `p +- hX` are pulled back onto the hypersurface with one
//! Newton step before the frame is rebuilt there.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::{build_screen_frame, Hypersurface, NullFrame, ScreenPolicy};
use crate::linalg::Vector;
use crate::structure::AmbientStructure;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Central difference `(field(p + hX) - field(p - hX)) / 2h`.
pub fn ambient_derivative<F>(field: F, p: &Vector, x: &Vector, h: f64) -> Result<Vector>
where
    F: Fn(&Vector) -> Result<Vector>,
{
    let plus = field(&(p + x * h)).map_err(|e| Error::EvaluationFailure(e.to_string()))?;
    let minus = field(&(p - x * h)).map_err(|e| Error::EvaluationFailure(e.to_string()))?;
    Ok((plus - minus) / (2.0 * h))
}

/// The deterministic frame construction viewed as a local field of frames.
///
/// Only `xi`, `N` and the screen are built. Frames are accepted when the
/// auxiliary vector and the screen elimination pivots match the base point,
/// so the field is smooth wherever it evaluates.
#[derive(Debug, Clone)]
pub struct FrameField {
    structure: AmbientStructure,
    hypersurface: Hypersurface,
    policy: ScreenPolicy,
    tol: f64,
    base: NullFrame,
}

impl FrameField {
    pub fn new(
        s: &AmbientStructure,
        h: &Hypersurface,
        p: &Vector,
        policy: &ScreenPolicy,
        tol: f64,
    ) -> Result<Self> {
        let base = build_screen_frame(s, h, p, policy, tol)?;
        Ok(Self {
            structure: s.clone(),
            hypersurface: h.clone(),
            policy: policy.clone(),
            tol,
            base,
        })
    }

    pub fn base(&self) -> &NullFrame {
        &self.base
    }

    /// Frame at a point of the hypersurface near the base point.
    pub fn evaluate(&self, q: &Vector, direction: usize) -> Result<NullFrame> {
        let frame = build_screen_frame(
            &self.structure,
            &self.hypersurface,
            q,
            &self.policy,
            self.tol,
        )
        .map_err(|e| Error::EvaluationFailure(e.to_string()))?;
        let (got, base) = (&frame.pivots, &self.base.pivots);
        if got.auxiliary != base.auxiliary || got.screen != base.screen {
            return Err(Error::PivotInstability { direction });
        }
        Ok(frame)
    }

    /// Samples retracted points within `radius` of the base point along
    /// random tangent directions and checks that the pivots do not change.
    pub fn certify(&self, radius: f64, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = self.base.tangent_basis();
        for k in 0..samples {
            let mut x = Vector::zeros(self.base.dim());
            for t in &basis {
                x += t * rng.random_range(-1.0..1.0);
            }
            let norm = x.norm();
            if norm == 0.0 {
                continue;
            }
            let r = radius * rng.random_range(0.0..1.0);
            let q = self
                .hypersurface
                .retract(&(&self.base.point + x * (r / norm)));
            self.evaluate(&q, k)?;
        }
        Ok(())
    }
}

/// Extrinsic data at one point, in the coordinates of the base tangent
/// basis `t_0 = xi, t_1.. = screen basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalData {
    pub step: f64,
    pub tangent_basis: Vec<Vector>,
    pub n: Vector,
    /// `B(t_i, t_j)`
    pub b: DMatrix<f64>,
    /// `C(t_i, s_k)` for screen vectors `s_k = t_(k+1)`.
    pub c: DMatrix<f64>,
    /// Column `i` holds `A_N t_i` in tangent coordinates.
    pub a_n: DMatrix<f64>,
    /// Column `i` holds `A*_xi t_i` in tangent coordinates.
    pub a_star_xi: DMatrix<f64>,
    pub tau: Vector,
    /// `theta(t_i) = g(t_i, N)`
    pub theta: Vector,
    /// `A_N t_i` as ambient vectors.
    pub a_n_vectors: Vec<Vector>,
    /// `A*_xi t_i` as ambient vectors.
    pub a_star_vectors: Vec<Vector>,
    /// `[i][j]`: ambient derivative of the field `t_j` along `t_i`.
    pub basis_derivatives: Vec<Vec<Vector>>,
    /// `[i]`: derivative of the Gram matrix `g(t_j, t_k)` along `t_i`.
    pub gram_derivatives: Vec<DMatrix<f64>>,
}

pub fn second_fundamental(
    s: &AmbientStructure,
    h: &Hypersurface,
    p: &Vector,
    policy: &ScreenPolicy,
    step: f64,
    tol: f64,
) -> Result<SecondFundamentalData> {
    let g = s.metric();
    let field = FrameField::new(s, h, p, policy, tol)?;
    let base = field.base();
    let tangent = base.tangent_basis();
    let m = tangent.len();
    let (xi, n) = (&base.xi, &base.n);

    let mut basis_derivatives = Vec::with_capacity(m);
    let mut n_derivatives = Vec::with_capacity(m);
    let mut gram_derivatives = Vec::with_capacity(m);
    for (i, t) in tangent.iter().enumerate() {
        let plus = field.evaluate(&h.retract(&(p + t * step)), i)?;
        let minus = field.evaluate(&h.retract(&(p - t * step)), i)?;
        let (tp, tm) = (plus.tangent_basis(), minus.tangent_basis());
        let scale = 1.0 / (2.0 * step);
        basis_derivatives.push(
            tp.iter()
                .zip(&tm)
                .map(|(a, b)| (a - b) * scale)
                .collect::<Vec<_>>(),
        );
        n_derivatives.push((&plus.n - &minus.n) * scale);
        let (gp, gm) = (g.gram(&tp), g.gram(&tm));
        gram_derivatives.push((gp - gm) * scale);
    }

    let b = DMatrix::from_fn(m, m, |i, j| g.inner(&basis_derivatives[i][j], xi));
    let tau = Vector::from_fn(m, |i, _| g.inner(&n_derivatives[i], xi));
    let theta = Vector::from_iterator(m, tangent.iter().map(|t| g.inner(t, n)));
    let c = DMatrix::from_fn(m, m - 1, |i, k| {
        let nabla = &basis_derivatives[i][k + 1] - n * b[(i, k + 1)];
        g.inner(&nabla, n)
    });

    let a_n_vectors: Vec<Vector> = (0..m).map(|i| -(&n_derivatives[i] - n * tau[i])).collect();
    let a_star_vectors: Vec<Vector> = (0..m)
        .map(|i| -(&basis_derivatives[i][0]) - xi * tau[i])
        .collect();
    let coords = |vs: &[Vector]| {
        let mut out = DMatrix::zeros(m, m);
        for (i, v) in vs.iter().enumerate() {
            out.set_column(i, &base.tangent_coordinates(v).0);
        }
        out
    };
    let a_n = coords(&a_n_vectors);
    let a_star_xi = coords(&a_star_vectors);

    Ok(SecondFundamentalData {
        step,
        tangent_basis: tangent,
        n: n.clone(),
        b,
        c,
        a_n,
        a_star_xi,
        tau,
        theta,
        a_n_vectors,
        a_star_vectors,
        basis_derivatives,
        gram_derivatives,
    })
}

impl SecondFundamentalData {
    /// Largest absolute entry among `B`, `C`, `tau`, `A_N`, `A*_xi`.
    pub fn max_abs(&self) -> f64 {
        [
            self.b.amax(),
            self.c.amax(),
            self.tau.amax(),
            self.a_n.amax(),
            self.a_star_xi.amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Maximum residuals of the Gauss-Weingarten identities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GwResiduals {
    /// `B(X, Y) - B(Y, X)`
    pub symmetry: f64,
    /// `g(A*_xi X, Y) - B(X, Y)`
    pub shape_b: f64,
    /// `g(A_N X, PY) - C(X, PY)`
    pub shape_c: f64,
    /// `(nabla_X g)(Y, Z) - B(X, Y) theta(Z) - B(X, Z) theta(Y)`
    pub nabla_g: f64,
    /// `B(X, xi)`
    pub b_xi: f64,
}

impl GwResiduals {
    pub fn max(&self) -> f64 {
        [
            self.symmetry,
            self.shape_b,
            self.shape_c,
            self.nabla_g,
            self.b_xi,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GwReport {
    pub step: f64,
    pub residuals: GwResiduals,
    pub passed: bool,
}

pub fn verify_gw_identities(
    s: &AmbientStructure,
    data: &SecondFundamentalData,
    tol: f64,
) -> GwReport {
    let g = s.metric();
    let t = &data.tangent_basis;
    let m = t.len();
    let mut r = GwResiduals::default();
    let nabla: Vec<Vec<Vector>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| &data.basis_derivatives[i][j] - &data.n * data.b[(i, j)])
                .collect()
        })
        .collect();

    for (i, nabla_i) in nabla.iter().enumerate() {
        r.b_xi = r.b_xi.max(data.b[(i, 0)].abs());
        for j in 0..m {
            r.symmetry = r.symmetry.max((data.b[(i, j)] - data.b[(j, i)]).abs());
            r.shape_b = r
                .shape_b
                .max((g.inner(&data.a_star_vectors[i], &t[j]) - data.b[(i, j)]).abs());
            if j >= 1 {
                r.shape_c = r
                    .shape_c
                    .max((g.inner(&data.a_n_vectors[i], &t[j]) - data.c[(i, j - 1)]).abs());
            }
            for k in 0..m {
                let nabla_g = data.gram_derivatives[i][(j, k)]
                    - g.inner(&nabla_i[j], &t[k])
                    - g.inner(&t[j], &nabla_i[k]);
                let expected = data.b[(i, j)] * data.theta[k] + data.b[(i, k)] * data.theta[j];
                r.nabla_g = r.nabla_g.max((nabla_g - expected).abs());
            }
        }
    }
    GwReport {
        step: data.step,
        residuals: r,
        passed: r.max() <= tol,
    }
}

/// Identity residuals at each step size, for observing the `O(h^2)` decay.
pub fn fd_convergence(
    s: &AmbientStructure,
    h: &Hypersurface,
    p: &Vector,
    policy: &ScreenPolicy,
    steps: &[f64],
    tol: f64,
) -> Result<Vec<GwReport>> {
    steps
        .iter()
        .map(|&step| {
            let data = second_fundamental(s, h, p, policy, step, tol)?;
            Ok(verify_gw_identities(s, &data, f64::INFINITY))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;

    const TOL: f64 = 1e-9;

    fn model() -> AmbientStructure {
        AmbientStructure::standard_model(2, &[-1, 1]).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let p = Vector::from_row_slice(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        let x = basis_vector(5, 2);
        let constant = |_: &Vector| Ok(Vector::from_element(5, 3.0));
        assert_eq!(
            ambient_derivative(constant, &p, &x, 1e-5).unwrap(),
            Vector::zeros(5)
        );
        let identity = |q: &Vector| Ok(q.clone());
        assert!((ambient_derivative(identity, &p, &x, 1e-5).unwrap() - &x).amax() < 1e-10);

        let s = model();
        let cone = Hypersurface::null_cone(s.metric());
        let xi_field = |q: &Vector| Ok(s.metric().raise_index(&cone.gradient(q)));
        let tangent = Vector::from_row_slice(&[0.0, 1.0, 0.0, 0.0, 0.0]);
        let d = ambient_derivative(xi_field, &p, &tangent, 1e-5).unwrap();
        assert!((d - &tangent * 2.0).amax() < 1e-10);
    }

    #[test]
    fn derivative_reports_failures() {
        let p = Vector::zeros(2);
        let x = Vector::from_row_slice(&[1.0, 0.0]);
        let failing = |_: &Vector| -> Result<Vector> { Err(Error::ZeroGradient { norm: 0.0 }) };
        assert!(matches!(
            ambient_derivative(failing, &p, &x, 1e-3),
            Err(Error::EvaluationFailure(_))
        ));
    }

    #[test]
    fn affine_fixtures_are_totally_geodesic() {
        let s = model();
        let r2 = 2f64.sqrt();
        for covector in [[-1.0, 0.0, 1.0, 0.0, 0.0], [-r2, 0.0, 1.0, 0.0, 1.0]] {
            let h = Hypersurface::affine(Vector::from_row_slice(&covector), 0.0, 0.0);
            let data = second_fundamental(
                &s,
                &h,
                &Vector::zeros(5),
                &ScreenPolicy::BasisScan,
                DEFAULT_FD_STEP,
                TOL,
            )
            .unwrap();
            assert_eq!(data.max_abs(), 0.0);
            let r = verify_gw_identities(&s, &data, TOL);
            assert_eq!(r.residuals.max(), 0.0);
            assert!(r.passed);
        }
    }

    #[test]
    fn null_cone_matches_closed_form() {
        // xi = 2q on the cone, so B(X, Y) = -g(Y, D_X xi) = -2 g(X, Y)
        let s = model();
        let cone = Hypersurface::null_cone(s.metric());
        let p = Vector::from_row_slice(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        let data = second_fundamental(
            &s,
            &cone,
            &p,
            &ScreenPolicy::BasisScan,
            DEFAULT_FD_STEP,
            TOL,
        )
        .unwrap();
        let gram = s.metric().gram(&data.tangent_basis);
        assert!((&data.b + gram * 2.0).amax() <= 1e-6, "{}", data.b);
        let r = verify_gw_identities(&s, &data, 1e-5);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn corrupted_b_is_detected() {
        let s = model();
        let cone = Hypersurface::null_cone(s.metric());
        let p = Vector::from_row_slice(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        let mut data = second_fundamental(
            &s,
            &cone,
            &p,
            &ScreenPolicy::BasisScan,
            DEFAULT_FD_STEP,
            TOL,
        )
        .unwrap();
        data.b[(1, 2)] += 1e-3;
        let r = verify_gw_identities(&s, &data, 1e-5);
        assert!(r.residuals.shape_b >= 1e-3 * (1.0 - 1e-6));
        assert!(!r.passed);
    }

    #[test]
    fn pivot_changes_are_rejected() {
        let s = model();
        // Near-tie between x1 and z in the screen elimination on the cone.
        let cone = Hypersurface::null_cone(s.metric());
        let p = Vector::from_row_slice(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        let field = FrameField::new(&s, &cone, &p, &ScreenPolicy::BasisScan, TOL).unwrap();
        field.certify(1e-3, 32, 5).unwrap();
        let far = cone
            .project(
                &Vector::from_row_slice(&[1.0, 0.0, 0.0, 0.9, 0.3]),
                1e-14,
                50,
            )
            .expect("projection converges");
        assert!(matches!(
            field.evaluate(&far, 7),
            Err(Error::PivotInstability { direction: 7 })
        ));
    }
}
