//! Implicit hypersurfaces `F(x) = c` and pointwise null frames on them.
//!
//! A [`NullFrame`] at a point of a lightlike hypersurface carries the normal
//! `xi` (the index-raised gradient), a transversal null `N` with
//! `g(xi, N) = 1`, the screen `S(TM) = {xi, N}^perp`, the two vectors
//! `phi xi`, `phi N` (both in the screen) and the complement `D'` of their
//! span inside the screen.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, columns, orthocomplement_pivoted, MetricTensor, Subspace, Vector,
};
use crate::structure::AmbientStructure;

/// Points closer than this to the apex of the null cone are rejected.
pub const CONE_VERTEX_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    /// `F(x) = w.x + k`
    Affine { covector: Vector, constant: f64 },
    /// `F(x) = x^T A x + w.x + k` with `A` symmetric.
    Quadric {
        matrix: DMatrix<f64>,
        covector: Vector,
        constant: f64,
    },
    /// `F(x) = g(x, x)`; the apex is excluded.
    NullCone { metric: DMatrix<f64> },
}

/// The level set `F(x) = level`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypersurface {
    expression: Expression,
    level: f64,
}

impl Hypersurface {
    pub fn affine(covector: Vector, constant: f64, level: f64) -> Self {
        Self {
            expression: Expression::Affine { covector, constant },
            level,
        }
    }

    pub fn quadric(
        matrix: DMatrix<f64>,
        covector: Vector,
        constant: f64,
        level: f64,
    ) -> Result<Self> {
        let n = covector.len();
        if matrix.shape() != (n, n) {
            return Err(Error::InvalidHypersurface(format!(
                "quadric matrix must be {n}x{n}, got {:?}",
                matrix.shape()
            )));
        }
        if (&matrix - matrix.transpose()).amax() > 0.0 {
            return Err(Error::InvalidHypersurface(
                "quadric matrix must be symmetric".into(),
            ));
        }
        Ok(Self {
            expression: Expression::Quadric {
                matrix,
                covector,
                constant,
            },
            level,
        })
    }

    /// The null cone `g(x, x) = 0` of the ambient metric.
    pub fn null_cone(g: &MetricTensor) -> Self {
        Self {
            expression: Expression::NullCone { metric: g.matrix() },
            level: 0.0,
        }
    }

    pub fn expression(&self) -> &Expression {
        &self.expression
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn dim(&self) -> usize {
        match &self.expression {
            Expression::Affine { covector, .. } | Expression::Quadric { covector, .. } => {
                covector.len()
            }
            Expression::NullCone { metric } => metric.nrows(),
        }
    }

    /// The same level set described by `alpha F = alpha c`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let expression = match &self.expression {
            Expression::Affine { covector, constant } => Expression::Affine {
                covector: covector * alpha,
                constant: constant * alpha,
            },
            Expression::Quadric {
                matrix,
                covector,
                constant,
            } => Expression::Quadric {
                matrix: matrix * alpha,
                covector: covector * alpha,
                constant: constant * alpha,
            },
            Expression::NullCone { metric } => Expression::Quadric {
                matrix: metric * alpha,
                covector: Vector::zeros(metric.nrows()),
                constant: 0.0,
            },
        };
        Self {
            expression,
            level: self.level * alpha,
        }
    }

    pub fn value(&self, x: &Vector) -> f64 {
        match &self.expression {
            Expression::Affine { covector, constant } => covector.dot(x) + constant,
            Expression::Quadric {
                matrix,
                covector,
                constant,
            } => x.dot(&(matrix * x)) + covector.dot(x) + constant,
            Expression::NullCone { metric } => x.dot(&(metric * x)),
        }
    }

    /// The differential `dF` at `x`, as a covector.
    pub fn gradient(&self, x: &Vector) -> Vector {
        match &self.expression {
            Expression::Affine { covector, .. } => covector.clone(),
            Expression::Quadric {
                matrix, covector, ..
            } => matrix * x * 2.0 + covector,
            Expression::NullCone { metric } => metric * x * 2.0,
        }
    }

    /// One Newton step back onto the level set along the euclidean gradient.
    pub fn retract(&self, q: &Vector) -> Vector {
        let grad = self.gradient(q);
        let norm_sq = grad.norm_squared();
        if norm_sq == 0.0 {
            return q.clone();
        }
        q - grad * ((self.value(q) - self.level) / norm_sq)
    }

    /// Repeated Newton steps until `|F - c| <= tol`.
    pub fn project(&self, q: &Vector, tol: f64, max_iter: usize) -> Option<Vector> {
        let residual = |x: &Vector| (self.value(x) - self.level).abs();
        let mut x = q.clone();
        for _ in 0..max_iter {
            if residual(&x) <= tol {
                // A few more steps take the residual down to rounding level.
                for _ in 0..3 {
                    let next = self.retract(&x);
                    if residual(&next).partial_cmp(&residual(&x)) != Some(std::cmp::Ordering::Less)
                    {
                        break;
                    }
                    x = next;
                }
                return Some(x);
            }
            let next = self.retract(&x);
            if next == x || !next.iter().all(|c| c.is_finite()) {
                return None;
            }
            x = next;
        }
        None
    }
}

/// How the auxiliary vector that fixes `N` (and hence the screen) is chosen.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScreenPolicy {
    /// Scan `e_1, e_2, ...` in index order, taking the first candidate
    /// whose pairing with `xi` is within [`AUXILIARY_SLACK`] of the best.
    #[default]
    BasisScan,
    /// Use the given vector.
    AuxiliaryVector { auxiliary: Vec<f64> },
}

/// Which candidate the screen policy settled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuxiliaryChoice {
    /// `e_i`, projected onto `(phi xi)^perp`.
    Basis(usize),
    Given,
}

/// Discrete choices made while building a frame. Two frames with equal
/// pivots come from the same smooth branch of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramePivots {
    pub auxiliary: AuxiliaryChoice,
    pub screen: Vec<usize>,
    pub dprime: Vec<usize>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NullFrame {
    pub point: Vector,
    pub xi: Vector,
    pub n: Vector,
    pub phi_xi: Vector,
    pub phi_n: Vector,
    /// `2n - 1` vectors spanning `S(TM)`.
    pub screen_basis: Vec<Vector>,
    /// `2n - 3` vectors, or `2n - 2` when `phi xi` and `phi N` are parallel.
    pub dprime_basis: Vec<Vector>,
    /// `eta(N)`
    pub a: f64,
    /// `eta(xi)`
    pub b: f64,
    pub pivots: FramePivots,
}

/// Normalised residuals of the seven frame constraints.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FrameResiduals {
    pub xi_null: f64,
    pub n_null: f64,
    pub xi_n_pairing: f64,
    pub screen_orthogonal: f64,
    pub phi_in_screen: f64,
    pub dprime_orthogonal: f64,
    /// Smallest |eigenvalue| of the screen Gram matrix with unit-length
    /// basis vectors. Must stay above the tolerance.
    pub screen_nondegeneracy: f64,
}

impl FrameResiduals {
    /// Largest of the six residuals that must vanish.
    pub fn max(&self) -> f64 {
        [
            self.xi_null,
            self.n_null,
            self.xi_n_pairing,
            self.screen_orthogonal,
            self.phi_in_screen,
            self.dprime_orthogonal,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max() <= tol && self.screen_nondegeneracy > tol
    }
}

impl NullFrame {
    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// `{xi} u screen_basis`, a basis of `TM` at the point.
    pub fn tangent_basis(&self) -> Vec<Vector> {
        std::iter::once(self.xi.clone())
            .chain(self.screen_basis.iter().cloned())
            .collect()
    }

    pub fn is_degenerate_split(&self) -> bool {
        self.pivots.degenerate
    }

    /// Coordinates of `v` in `tangent_basis() u {N}`: the tangent part and
    /// the coefficient along `N` (which is `g(v, xi)`).
    pub fn tangent_coordinates(&self, v: &Vector) -> (Vector, f64) {
        let mut cols = self.tangent_basis();
        cols.push(self.n.clone());
        let m = columns(self.dim(), &cols);
        let c = m
            .lu()
            .solve(v)
            .expect("tangent basis and N span the ambient space");
        let k = c.len() - 1;
        (c.rows(0, k).into_owned(), c[k])
    }

    /// Ambient vector with the given tangent coordinates.
    pub fn from_tangent_coordinates(&self, coords: &Vector) -> Vector {
        let mut v = &self.xi * coords[0];
        for (s, c) in self.screen_basis.iter().zip(coords.iter().skip(1)) {
            v += s * *c;
        }
        v
    }

    pub fn residuals(&self, g: &MetricTensor, tol: f64) -> FrameResiduals {
        let rel =
            |x: f64, a: &Vector, b: &Vector| x.abs() / (a.norm() * b.norm()).max(f64::MIN_POSITIVE);
        let mut r = FrameResiduals {
            xi_null: rel(g.inner(&self.xi, &self.xi), &self.xi, &self.xi),
            n_null: rel(g.inner(&self.n, &self.n), &self.n, &self.n),
            xi_n_pairing: (g.inner(&self.xi, &self.n) - 1.0).abs(),
            ..FrameResiduals::default()
        };
        for s in &self.screen_basis {
            r.screen_orthogonal = r
                .screen_orthogonal
                .max(rel(g.inner(&self.n, s), &self.n, s))
                .max(rel(g.inner(&self.xi, s), &self.xi, s));
        }
        let screen = Subspace::new(g, self.screen_basis.clone(), tol);
        match &screen {
            Ok(sc) => {
                for v in [&self.phi_xi, &self.phi_n] {
                    r.phi_in_screen = r
                        .phi_in_screen
                        .max(sc.span_residual(v) / v.norm().max(f64::MIN_POSITIVE));
                }
                r.screen_nondegeneracy = sc.normalized_nondegeneracy();
            }
            Err(_) => {
                r.phi_in_screen = f64::INFINITY;
                r.screen_nondegeneracy = 0.0;
            }
        }
        for d in &self.dprime_basis {
            r.dprime_orthogonal = r
                .dprime_orthogonal
                .max(rel(g.inner(d, &self.phi_xi), d, &self.phi_xi))
                .max(rel(g.inner(d, &self.phi_n), d, &self.phi_n));
        }
        r
    }
}

/// The index-raised gradient `xi = g^{-1} dF` at a point of a lightlike
/// hypersurface.
pub fn normal_xi(s: &AmbientStructure, h: &Hypersurface, p: &Vector, tol: f64) -> Result<Vector> {
    if p.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: p.len(),
        });
    }
    if h.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: h.dim(),
        });
    }
    let residual = (h.value(p) - h.level()).abs();
    if residual > tol {
        return Err(Error::NotOnHypersurface { residual });
    }
    if matches!(h.expression(), Expression::NullCone { .. }) && p.norm() < CONE_VERTEX_RADIUS {
        return Err(Error::ZeroGradient {
            norm: 2.0 * p.norm(),
        });
    }
    let grad = h.gradient(p);
    if grad.norm() <= tol {
        return Err(Error::ZeroGradient { norm: grad.norm() });
    }
    let xi = s.metric().raise_index(&grad);
    let nullity = s.inner(&xi, &xi).abs() / xi.norm_squared();
    if nullity > tol {
        return Err(Error::NotLightlike { nullity });
    }
    Ok(xi)
}

/// A basis candidate is accepted when its pairing quality
/// `|g(V, xi)| / (|V| |xi|)` is at least this fraction of the best one.
/// Lower indices win among comparable candidates, and `N` stays within a
/// factor `1 / AUXILIARY_SLACK` of the best conditioned choice.
pub const AUXILIARY_SLACK: f64 = 0.5;

/// Picks the auxiliary vector `V` with `g(V, phi xi) = 0` and `g(V, xi) != 0`.
///
/// Candidates are moved onto the hyperplane `g(V, phi xi) = 0` by euclidean
/// orthogonal projection. Unlike projecting along `phi xi`, this stays well
/// conditioned when `phi xi` is null or nearly so, and it leaves
/// `g(V, xi)` unchanged because `phi xi` is euclidean-orthogonal to `xi`.
fn choose_auxiliary(
    s: &AmbientStructure,
    xi: &Vector,
    phi_xi: &Vector,
    policy: &ScreenPolicy,
    tol: f64,
) -> Result<(Vector, AuxiliaryChoice)> {
    let g = s.metric();
    let dim = s.dim();
    let normal = g.lower_index(phi_xi);
    let normal_sq = normal.norm_squared();
    let project = |c: &Vector| -> Vector {
        if normal_sq == 0.0 {
            c.clone()
        } else {
            c - &normal * (normal.dot(c) / normal_sq)
        }
    };
    // Zero for vectors that are mostly cancellation.
    let quality = |c: &Vector, v: &Vector| -> f64 {
        let norm = v.norm();
        if norm <= 1e-6 * c.norm() {
            return 0.0;
        }
        g.inner(v, xi).abs() / (norm * xi.norm())
    };

    match policy {
        ScreenPolicy::BasisScan => {
            let candidates: Vec<(Vector, f64)> = (0..dim)
                .map(|i| {
                    let e = basis_vector(dim, i);
                    let v = project(&e);
                    let q = quality(&e, &v);
                    (v, q)
                })
                .collect();
            let best = candidates.iter().fold(0.0_f64, |m, (_, q)| m.max(*q));
            if best <= tol {
                return Err(Error::PolicyFailure(
                    "no basis vector yields an admissible auxiliary vector".into(),
                ));
            }
            let (i, (v, _)) = candidates
                .into_iter()
                .enumerate()
                .find(|(_, (_, q))| *q >= AUXILIARY_SLACK * best)
                .expect("the best candidate qualifies");
            Ok((v, AuxiliaryChoice::Basis(i)))
        }
        ScreenPolicy::AuxiliaryVector { auxiliary } => {
            if auxiliary.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: auxiliary.len(),
                });
            }
            let c = Vector::from_column_slice(auxiliary);
            let orth = g.inner(&c, phi_xi).abs() <= tol * c.norm() * phi_xi.norm();
            if orth && quality(&c, &c) > tol {
                Ok((c, AuxiliaryChoice::Given))
            } else {
                Err(Error::PolicyFailure(format!(
                    "auxiliary vector needs g(V, phi xi) = 0 and g(V, xi) != 0 \
                     (got g(V, phi xi) = {:e}, g(V, xi) = {:e})",
                    g.inner(&c, phi_xi),
                    g.inner(&c, xi)
                )))
            }
        }
    }
}

/// Builds `xi`, `N` and the screen distribution only. `dprime_basis` is left
/// empty; this is the part of the frame that varies smoothly across the
/// `2ab = 1` locus.
pub fn build_screen_frame(
    s: &AmbientStructure,
    h: &Hypersurface,
    p: &Vector,
    policy: &ScreenPolicy,
    tol: f64,
) -> Result<NullFrame> {
    let g = s.metric();
    let xi = normal_xi(s, h, p, tol)?;
    let phi_xi = s.phi(&xi);
    let b = s.eta_of(&xi);

    let (v, auxiliary) = choose_auxiliary(s, &xi, &phi_xi, policy, tol)?;
    let v_xi = g.inner(&v, &xi);
    let n = (&v - &xi * (g.inner(&v, &v) / (2.0 * v_xi))) / v_xi;
    let phi_n = s.phi(&n);
    let a = s.eta_of(&n);

    let normal_plane = Subspace::new(g, vec![xi.clone(), n.clone()], tol)
        .map_err(|e| Error::FrameInvalid(format!("xi and N: {e}")))?;
    let (screen, screen_pivots) =
        orthocomplement_pivoted(g, &normal_plane, &Subspace::standard(g), true, tol)?;
    if !screen.is_nondegenerate(tol) {
        return Err(Error::DegenerateScreen {
            eigenvalue: screen.normalized_nondegeneracy(),
        });
    }

    let degenerate = (2.0 * a * b - 1.0).abs() <= tol;
    let frame = NullFrame {
        point: p.clone(),
        xi,
        n,
        phi_xi,
        phi_n,
        screen_basis: screen.into_basis(),
        dprime_basis: Vec::new(),
        a,
        b,
        pivots: FramePivots {
            auxiliary,
            screen: screen_pivots,
            dprime: Vec::new(),
            degenerate,
        },
    };
    let r = frame.residuals(g, tol);
    if !r.holds(tol) {
        return Err(Error::FrameInvalid(format!("{r:?}")));
    }
    Ok(frame)
}

/// Builds the null frame at `p` with the screen fixed by `policy`.
pub fn build_null_frame(
    s: &AmbientStructure,
    h: &Hypersurface,
    p: &Vector,
    policy: &ScreenPolicy,
    tol: f64,
) -> Result<NullFrame> {
    let mut frame = build_screen_frame(s, h, p, policy, tol)?;
    let g = s.metric();
    let screen = Subspace::new(g, frame.screen_basis.clone(), tol)?;
    let (a, b) = (frame.a, frame.b);
    let (phi_xi, phi_n) = (&frame.phi_xi, &frame.phi_n);
    let n_pairs = g.n_pairs();
    let degenerate = frame.pivots.degenerate;
    let (span, expected_dprime) = if degenerate {
        (vec![phi_xi.clone()], 2 * n_pairs - 2)
    } else {
        if n_pairs < 2 {
            return Err(Error::FrameInvalid(format!(
                "phi xi and phi N independent (2ab - 1 = {:e}) in a 3-dimensional ambient",
                2.0 * a * b - 1.0
            )));
        }
        (vec![phi_xi.clone(), phi_n.clone()], 2 * n_pairs - 3)
    };
    let span = Subspace::new(g, span, tol)
        .map_err(|e| Error::FrameInvalid(format!("phi xi, phi N: {e}")))?;
    let (dprime, dprime_pivots) = orthocomplement_pivoted(g, &span, &screen, true, tol)?;
    if dprime.dim() != expected_dprime {
        return Err(Error::FrameInvalid(format!(
            "D' has dimension {}, expected {expected_dprime}",
            dprime.dim()
        )));
    }
    frame.dprime_basis = dprime.into_basis();
    frame.pivots.dprime = dprime_pivots;
    let r = frame.residuals(g, tol);
    if !r.holds(tol) {
        return Err(Error::FrameInvalid(format!("{r:?}")));
    }
    Ok(frame)
}

/// Outcome of testing `phi D' subset D'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DPrimeInvariance {
    pub invariant: bool,
    /// Largest relative component of `phi d` along `phi xi`, `phi N`, `xi`, `N`.
    pub max_off_component: f64,
    /// Largest relative component of `phi d` along `xi` and `N`; zero for
    /// every frame since `phi D'` always lies in the screen.
    pub outside_screen: f64,
    /// `max |g(phi d, phi N) + a eta(d)|`
    pub phi_n_identity: f64,
    /// `max |g(phi d, phi xi) + b eta(d)|`
    pub phi_xi_identity: f64,
}

pub fn check_dprime_invariance(
    s: &AmbientStructure,
    frame: &NullFrame,
    tol: f64,
) -> DPrimeInvariance {
    let g = s.metric();
    let (pxi, pn) = (&frame.phi_xi, &frame.phi_n);
    let mut out = DPrimeInvariance {
        invariant: true,
        max_off_component: 0.0,
        outside_screen: 0.0,
        phi_n_identity: 0.0,
        phi_xi_identity: 0.0,
    };
    let g11 = g.inner(pxi, pxi);
    let g12 = g.inner(pxi, pn);
    let g22 = g.inner(pn, pn);
    let det = g11 * g22 - g12 * g12;

    for d in &frame.dprime_basis {
        let v = s.phi(d);
        let scale = d.norm().max(f64::MIN_POSITIVE);
        let along_xi = g.inner(&v, &frame.n);
        let along_n = g.inner(&v, &frame.xi);
        let outside = (&frame.xi * along_xi + &frame.n * along_n).norm() / scale;

        let (r1, r2) = (g.inner(&v, pxi), g.inner(&v, pn));
        let in_plane = if frame.is_degenerate_split() {
            pxi * (r1 / g11)
        } else {
            let c_xi = (g22 * r1 - g12 * r2) / det;
            let c_n = (g11 * r2 - g12 * r1) / det;
            pxi * c_xi + pn * c_n
        };
        let off = outside.max(in_plane.norm() / scale);

        out.outside_screen = out.outside_screen.max(outside);
        out.max_off_component = out.max_off_component.max(off);
        out.phi_n_identity = out.phi_n_identity.max((r2 + frame.a * s.eta_of(d)).abs());
        out.phi_xi_identity = out.phi_xi_identity.max((r1 + frame.b * s.eta_of(d)).abs());
    }
    out.invariant = out.max_off_component <= tol;
    out
}
