//! Flat indefinite almost contact metric model spaces.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{basis_vector, MetricTensor, Vector};

/// The tensors `(g, phi, zeta, eta)` of a flat almost contact metric space
/// on `R^(2n+1)`.
///
/// Construction only checks shapes; use [`AmbientStructure::validate`] to
/// measure how well the axioms hold.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientStructure {
    metric: MetricTensor,
    phi_bar: DMatrix<f64>,
    zeta: Vector,
    eta: Vector,
}

impl AmbientStructure {
    /// The J-paired model: `phi e_(2k-1) = e_(2k)`, `phi e_(2k) = -e_(2k-1)`,
    /// `phi e_(2n+1) = 0`, `zeta = e_(2n+1)`, `eta = dz`.
    pub fn standard_model(n_pairs: usize, signs: &[i8]) -> Result<Self> {
        if n_pairs == 0 || signs.len() != n_pairs {
            return Err(Error::InvalidSignature(format!(
                "expected {n_pairs} pair signs (n >= 1), got {}",
                signs.len()
            )));
        }
        let metric = MetricTensor::new(signs)?;
        let dim = metric.dim();
        let mut phi_bar = DMatrix::zeros(dim, dim);
        for k in 0..n_pairs {
            let (a, b) = (2 * k, 2 * k + 1);
            phi_bar[(b, a)] = 1.0;
            phi_bar[(a, b)] = -1.0;
        }
        let zeta = basis_vector(dim, dim - 1);
        let eta = zeta.clone();
        Ok(Self {
            metric,
            phi_bar,
            zeta,
            eta,
        })
    }

    pub fn from_parts(
        metric: MetricTensor,
        phi_bar: DMatrix<f64>,
        zeta: Vector,
        eta: Vector,
    ) -> Result<Self> {
        let dim = metric.dim();
        if phi_bar.shape() != (dim, dim) {
            return Err(Error::InvalidStructure(format!(
                "phi_bar must be {dim}x{dim}, got {:?}",
                phi_bar.shape()
            )));
        }
        for v in [&zeta, &eta] {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        Ok(Self {
            metric,
            phi_bar,
            zeta,
            eta,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn metric(&self) -> &MetricTensor {
        &self.metric
    }

    pub fn phi_bar(&self) -> &DMatrix<f64> {
        &self.phi_bar
    }

    pub fn zeta(&self) -> &Vector {
        &self.zeta
    }

    /// Coefficients of the 1-form `eta`.
    pub fn eta(&self) -> &Vector {
        &self.eta
    }

    pub fn phi(&self, v: &Vector) -> Vector {
        &self.phi_bar * v
    }

    pub fn eta_of(&self, v: &Vector) -> f64 {
        self.eta.dot(v)
    }

    pub fn inner(&self, u: &Vector, v: &Vector) -> f64 {
        self.metric.inner(u, v)
    }

    /// Evaluates every axiom on the standard basis and on `trials` seeded
    /// random vector pairs.
    pub fn validate(&self, trials: usize, seed: u64, tol: f64) -> ValidationReport {
        let dim = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples: Vec<(Vector, Vector)> = Vec::with_capacity(dim * dim + trials);
        for i in 0..dim {
            for j in 0..dim {
                samples.push((basis_vector(dim, i), basis_vector(dim, j)));
            }
        }
        for _ in 0..trials {
            let u = Vector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
            let v = Vector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
            samples.push((u, v));
        }

        let mut r = AxiomResiduals {
            eta_zeta: (self.eta_of(&self.zeta) - 1.0).abs(),
            phi_zeta: self.phi(&self.zeta).amax(),
            ..AxiomResiduals::default()
        };
        for (u, v) in &samples {
            let (pu, pv) = (self.phi(u), self.phi(v));
            let phi2 = self.phi(&pu) + u - &self.zeta * self.eta_of(u);
            r.phi_squared = r.phi_squared.max(phi2.amax());
            r.eta_phi = r.eta_phi.max(self.eta_of(&pu).abs());
            r.compatibility = r.compatibility.max(
                (self.inner(&pu, &pv) - self.inner(u, v) + self.eta_of(u) * self.eta_of(v)).abs(),
            );
            r.eta_metric = r
                .eta_metric
                .max((self.inner(u, &self.zeta) - self.eta_of(u)).abs());
            r.skew = r.skew.max((self.inner(&pu, v) + self.inner(u, &pv)).abs());
        }
        let passed = r.max() <= tol;
        ValidationReport {
            seed,
            trials,
            tol,
            residuals: r,
            passed,
        }
    }
}

/// Maximum absolute residual of each axiom.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AxiomResiduals {
    /// `eta(zeta) = 1`
    pub eta_zeta: f64,
    /// `phi^2 = -I + eta (x) zeta`
    pub phi_squared: f64,
    /// `phi zeta = 0`
    pub phi_zeta: f64,
    /// `eta o phi = 0`
    pub eta_phi: f64,
    /// `g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)`
    pub compatibility: f64,
    /// `g(X, zeta) = eta(X)`
    pub eta_metric: f64,
    /// `g(phi X, Y) = -g(X, phi Y)`
    pub skew: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        [
            self.eta_zeta,
            self.phi_squared,
            self.phi_zeta,
            self.eta_phi,
            self.compatibility,
            self.eta_metric,
            self.skew,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub residuals: AxiomResiduals,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_model_is_exact() {
        let s = AmbientStructure::standard_model(2, &[-1, 1]).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(
            s.metric().diagonal().as_slice(),
            &[-1.0, -1.0, 1.0, 1.0, 1.0]
        );
        let rep = s.validate(200, 3, 1e-12);
        assert!(rep.passed);
        assert_eq!(rep.residuals.eta_zeta, 0.0);
        assert_eq!(rep.residuals.phi_zeta, 0.0);
        assert!(rep.residuals.max() <= 1e-15);
    }

    #[test]
    fn smallest_model() {
        let s = AmbientStructure::standard_model(1, &[-1]).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.metric().diagonal().as_slice(), &[-1.0, -1.0, 1.0]);
        assert!(s.validate(10, 0, 1e-12).passed);
    }

    #[test]
    fn riemannian_signature_rejected() {
        assert!(matches!(
            AmbientStructure::standard_model(2, &[1, 1]),
            Err(Error::InvalidSignature(_))
        ));
        assert!(AmbientStructure::standard_model(3, &[-1, 1]).is_err());
    }

    #[test]
    fn scaled_zeta_is_detected() {
        let s = AmbientStructure::standard_model(2, &[-1, 1]).unwrap();
        let broken = AmbientStructure::from_parts(
            s.metric().clone(),
            s.phi_bar().clone(),
            s.zeta() * 2.0,
            s.eta().clone(),
        )
        .unwrap();
        let rep = broken.validate(10, 0, 1e-9);
        assert_eq!(rep.residuals.eta_zeta, 1.0);
        assert!(!rep.passed);
    }

    #[test]
    fn mismatched_pairing_breaks_compatibility() {
        let s = AmbientStructure::standard_model(2, &[-1, 1]).unwrap();
        // phi pairs e1 <-> e3 and e2 <-> e4 across the sign blocks
        let mut phi = DMatrix::zeros(5, 5);
        phi[(2, 0)] = 1.0;
        phi[(0, 2)] = -1.0;
        phi[(3, 1)] = 1.0;
        phi[(1, 3)] = -1.0;
        let broken = AmbientStructure::from_parts(
            s.metric().clone(),
            phi,
            s.zeta().clone(),
            s.eta().clone(),
        )
        .unwrap();
        let rep = broken.validate(0, 0, 1e-9);
        // g(phi e1, phi e1) - g(e1, e1) = g(e3, e3) - g(e1, e1) = 2
        assert_eq!(rep.residuals.compatibility, 2.0);
        assert!(!rep.passed);
    }

    #[test]
    fn from_parts_checks_shapes() {
        let s = AmbientStructure::standard_model(1, &[-1]).unwrap();
        assert!(AmbientStructure::from_parts(
            s.metric().clone(),
            DMatrix::zeros(2, 2),
            s.zeta().clone(),
            s.eta().clone()
        )
        .is_err());
    }

    #[test]
    fn validation_is_reproducible() {
        let s = AmbientStructure::standard_model(3, &[-1, 1, -1]).unwrap();
        assert_eq!(s.validate(50, 9, 1e-12), s.validate(50, 9, 1e-12));
    }
}
