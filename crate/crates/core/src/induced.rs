//! The almost complex structure induced on a proper inascreen hypersurface.
//!
//! Since `zeta` is transversal, `phi_bar X = phi X + omega(X) zeta` splits
//! every tangent `X`. Pairing with `xi` gives `omega(X) = g(phi_bar X, xi) / b`.
//! `phi` squares to `-I` and is Hermitian for the degenerate metric
//! `g~ = g + omega (x) omega`.
//!
//! All tensors are stored in the coordinates of the frame's tangent basis
//! `{xi} u screen_basis`; coordinate `0` is always `xi`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, ZetaDecomposition};
use crate::error::{Error, Result};
use crate::hypersurface::NullFrame;
use crate::linalg::{least_squares, Vector};
use crate::structure::AmbientStructure;

#[derive(Debug, Clone, PartialEq)]
pub struct InducedStructure {
    pub tangent_basis: Vec<Vector>,
    /// Columns are `phi t_k` in tangent coordinates.
    pub phi: DMatrix<f64>,
    pub omega: Vector,
    pub eta_restricted: Vector,
    /// Induced (degenerate) metric `g` in tangent coordinates.
    pub metric: DMatrix<f64>,
    pub b: f64,
    /// The transversal `N` and the covector `g(xi, .)`, used to project
    /// ambient vectors onto the tangent space along `N`.
    pub transversal: Vector,
    pub xi_covector: Vector,
}

/// How far the computed split is from its defining identities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct InducedResiduals {
    /// `max |g(phi t_k, xi)|`, the part of `phi X` that left `TM`.
    pub tangency: f64,
    /// `phi^2 + I`
    pub phi_squared: f64,
    /// `omega(phi X) - eta(X)`
    pub omega_phi_eta: f64,
    /// `omega(xi)`
    pub omega_xi: f64,
    /// `phi xi - phi_bar xi`
    pub phi_xi: f64,
}

impl InducedResiduals {
    pub fn max(&self) -> f64 {
        [
            self.tangency,
            self.phi_squared,
            self.omega_phi_eta,
            self.omega_xi,
            self.phi_xi,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl InducedStructure {
    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn apply_phi(&self, x: &Vector) -> Vector {
        &self.phi * x
    }

    pub fn omega_of(&self, x: &Vector) -> f64 {
        self.omega.dot(x)
    }

    pub fn eta_of(&self, x: &Vector) -> f64 {
        self.eta_restricted.dot(x)
    }

    pub fn g(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.metric * y))
    }

    /// `g~(X, Y) = g(X, Y) + omega(X) omega(Y)`
    pub fn g_tilde(&self, x: &Vector, y: &Vector) -> f64 {
        self.g(x, y) + self.omega_of(x) * self.omega_of(y)
    }

    pub fn g_tilde_matrix(&self) -> DMatrix<f64> {
        &self.metric + &self.omega * self.omega.transpose()
    }

    /// Tangent coordinates of `xi`.
    pub fn xi(&self) -> Vector {
        let mut x = Vector::zeros(self.dim());
        x[0] = 1.0;
        x
    }

    /// Tangent coordinates of `u - g(u, xi) N`, the projection of an
    /// ambient vector along `N`, together with its euclidean norm.
    pub fn project_tangent(&self, u: &Vector) -> (Vector, f64) {
        let x = u - &self.transversal * self.xi_covector.dot(u);
        let (coords, _) = least_squares(x.len(), &self.tangent_basis, &x);
        (coords, x.norm())
    }

    pub fn phi_xi(&self) -> Vector {
        self.phi.column(0).into_owned()
    }
}

/// Builds `(phi, omega)` from a proper frame (`b != 0`).
pub fn induced_phi_omega(
    s: &AmbientStructure,
    frame: &NullFrame,
    dec: &ZetaDecomposition,
    tol: f64,
) -> Result<InducedStructure> {
    let b = dec.b;
    if b.abs() <= tol {
        return Err(Error::ZetaTangent { b });
    }
    let g = s.metric();
    let tangent_basis = frame.tangent_basis();
    let m = tangent_basis.len();
    let mut phi = DMatrix::zeros(m, m);
    let mut omega = Vector::zeros(m);
    let mut tangency = 0.0_f64;
    for (k, t) in tangent_basis.iter().enumerate() {
        let pt = s.phi(t);
        let w = g.inner(&pt, &frame.xi) / b;
        let phi_t = pt - s.zeta() * w;
        let (coords, along_n) = frame.tangent_coordinates(&phi_t);
        tangency = tangency.max(along_n.abs());
        omega[k] = w;
        phi.set_column(k, &coords);
    }
    let eta_restricted = Vector::from_iterator(m, tangent_basis.iter().map(|t| s.eta_of(t)));
    let metric = g.gram(&tangent_basis);

    let ind = InducedStructure {
        tangent_basis,
        phi,
        omega,
        eta_restricted,
        metric,
        b,
        transversal: frame.n.clone(),
        xi_covector: g.lower_index(&frame.xi),
    };
    let r = induced_residuals(s, frame, &ind, tangency);
    if r.max() > tol {
        return Err(Error::FrameInvalid(format!("induced split: {r:?}")));
    }
    Ok(ind)
}

fn induced_residuals(
    s: &AmbientStructure,
    frame: &NullFrame,
    ind: &InducedStructure,
    tangency: f64,
) -> InducedResiduals {
    let m = ind.dim();
    let phi2 = &ind.phi * &ind.phi + DMatrix::identity(m, m);
    let omega_phi = ind.phi.transpose() * &ind.omega - &ind.eta_restricted;
    let (phi_bar_xi, _) = frame.tangent_coordinates(&s.phi(&frame.xi));
    InducedResiduals {
        tangency,
        phi_squared: phi2.amax(),
        omega_phi_eta: omega_phi.amax(),
        omega_xi: ind.omega[0].abs(),
        phi_xi: (ind.phi_xi() - phi_bar_xi).amax(),
    }
}

/// Maximum residuals of the Hermitian-type identities over random pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianReport {
    pub trials: usize,
    pub seed: u64,
    /// `g~(phi X, phi Y) - g~(X, Y)`
    pub hermitian: f64,
    /// `g(phi X, phi Y) - g(X, Y) + eta(X) eta(Y) - omega(X) omega(Y)`
    pub metric_split: f64,
    /// `g(phi X, Y) + omega(X) eta(Y) + g(X, phi Y) + omega(Y) eta(X)`
    pub skew_split: f64,
    /// `phi^2 X + X`
    pub phi_squared: f64,
    /// `omega(phi X) - eta(X)`
    pub omega_phi_eta: f64,
    /// `g~(X, xi)`
    pub degeneracy_xi: f64,
    /// `g~(X, phi xi)`
    pub degeneracy_phi_xi: f64,
    pub passed: bool,
}

impl HermitianReport {
    pub fn max(&self) -> f64 {
        [
            self.hermitian,
            self.metric_split,
            self.skew_split,
            self.phi_squared,
            self.omega_phi_eta,
            self.degeneracy_xi,
            self.degeneracy_phi_xi,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn verify_hermitian(
    ind: &InducedStructure,
    trials: usize,
    seed: u64,
    tol: f64,
) -> HermitianReport {
    let m = ind.dim();
    let dim = ind.transversal.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Test vectors have unit euclidean length in the ambient space, so the
    // residuals do not depend on how the tangent basis or F is scaled.
    let unit_basis: Vec<Vector> = (0..m)
        .map(|i| {
            let mut x = Vector::zeros(m);
            x[i] = 1.0 / ind.tangent_basis[i].norm();
            x
        })
        .collect();
    let mut random_unit = || loop {
        let u = Vector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
        let (x, norm) = ind.project_tangent(&u);
        if norm > 1e-3 {
            return x / norm;
        }
    };
    let mut pairs: Vec<(Vector, Vector)> = Vec::with_capacity(trials + m * m);
    for x in &unit_basis {
        for y in &unit_basis {
            pairs.push((x.clone(), y.clone()));
        }
    }
    for _ in 0..trials {
        let x = random_unit();
        let y = random_unit();
        pairs.push((x, y));
    }

    let xi = ind.xi();
    let phi_xi = ind.phi_xi();
    let mut r = HermitianReport {
        trials,
        seed,
        hermitian: 0.0,
        metric_split: 0.0,
        skew_split: 0.0,
        phi_squared: 0.0,
        omega_phi_eta: 0.0,
        degeneracy_xi: 0.0,
        degeneracy_phi_xi: 0.0,
        passed: false,
    };
    for (x, y) in &pairs {
        let (px, py) = (ind.apply_phi(x), ind.apply_phi(y));
        let (wx, wy) = (ind.omega_of(x), ind.omega_of(y));
        let (ex, ey) = (ind.eta_of(x), ind.eta_of(y));
        r.hermitian = r
            .hermitian
            .max((ind.g_tilde(&px, &py) - ind.g_tilde(x, y)).abs());
        r.metric_split = r
            .metric_split
            .max((ind.g(&px, &py) - ind.g(x, y) + ex * ey - wx * wy).abs());
        r.skew_split = r
            .skew_split
            .max((ind.g(&px, y) + wx * ey + ind.g(x, &py) + wy * ex).abs());
        r.phi_squared = r.phi_squared.max((ind.apply_phi(&px) + x).amax());
        r.omega_phi_eta = r.omega_phi_eta.max((ind.omega_of(&px) - ex).abs());
        r.degeneracy_xi = r.degeneracy_xi.max(ind.g_tilde(x, &xi).abs());
        r.degeneracy_phi_xi = r.degeneracy_phi_xi.max(ind.g_tilde(x, &phi_xi).abs());
    }
    r.passed = r.max() <= tol;
    r
}

/// Concrete quantities that keep a proper inascreen hypersurface from being
/// invariant, `(g, phi)`-Hermitian or `phi`-skew.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub b: f64,
    /// `omega(phi xi)`, equal to `b`.
    pub omega_phi_xi: f64,
    /// `g(xi, xi) - g(phi xi, phi xi)`, equal to `b^2`.
    pub hermitian_defect_xi_xi: f64,
    /// `-(g(phi X, xi) + g(X, phi xi))` at `X = phi xi`, equal to `b^2`.
    pub skew_defect: f64,
    pub passed: bool,
}

/// Returns `None` unless the decomposition is proper inascreen.
pub fn nonexistence_witness(
    ind: &InducedStructure,
    dec: &ZetaDecomposition,
    tol: f64,
) -> Result<Option<ObstructionReport>> {
    if !classify(dec, tol)?.proper {
        return Ok(None);
    }
    let xi = ind.xi();
    let phi_xi = ind.phi_xi();
    let b = ind.b;
    let omega_phi_xi = ind.omega_of(&phi_xi);
    let hermitian_defect_xi_xi = ind.g(&xi, &xi) - ind.g(&phi_xi, &phi_xi);
    let skew_defect = -(ind.g(&ind.apply_phi(&phi_xi), &xi) + ind.g(&phi_xi, &phi_xi));
    let b2 = b * b;
    let passed = b.abs() > tol
        && (omega_phi_xi - b).abs() <= tol
        && (hermitian_defect_xi_xi - b2).abs() <= tol
        && (skew_defect - b2).abs() <= tol
        && skew_defect > tol * tol;
    Ok(Some(ObstructionReport {
        b,
        omega_phi_xi,
        hermitian_defect_xi_xi,
        skew_defect,
        passed,
    }))
}
