//! Position of the structure vector relative to a null frame.
//!
//! `zeta` splits as `W' + f1 phi N + f2 phi xi + a xi + b N` with `W'` in
//! `D'`. Exactly one of two things happens: `2ab = 1` and `W' = 0`
//! (ascreen), or `f1 = f2 = 0` and `W' != 0` (inascreen).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::{build_null_frame, Hypersurface, NullFrame, ScreenPolicy};
use crate::linalg::{euclidean_rank, Vector};
use crate::structure::AmbientStructure;

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaDecomposition {
    /// `eta(N)`
    pub a: f64,
    /// `eta(xi)`
    pub b: f64,
    pub f1: f64,
    pub f2: f64,
    /// Screen part `zeta - a xi - b N`.
    pub w: Vector,
    /// `D'` part of `w`.
    pub w_prime: Vector,
    /// `phi xi = lambda phi N`, set only when `2ab = 1`.
    pub lambda: Option<f64>,
    /// `g(phi xi, phi N)` Gram determinant of `{phi xi, phi N}`.
    pub gram_det: f64,
    /// Euclidean norm of `zeta - W' - f1 phi N - f2 phi xi - a xi - b N`.
    pub residual: f64,
    /// Largest relative `g`-pairing of `W'` with `phi xi`, `phi N`, `xi`, `N`.
    pub w_prime_orthogonality: f64,
    /// `g(W, W)`
    pub w_norm_sq: f64,
}

impl ZetaDecomposition {
    pub fn two_ab_minus_one(&self) -> f64 {
        2.0 * self.a * self.b - 1.0
    }

    /// `|g(W, W) + 2ab - 1|`
    pub fn unit_identity(&self) -> f64 {
        (self.w_norm_sq + self.two_ab_minus_one()).abs()
    }

    /// `|b^2 f2 - f1 (1 - ab)|` and `|a^2 f1 - f2 (1 - ab)|`.
    pub fn mu2_residuals(&self) -> (f64, f64) {
        let (a, b) = (self.a, self.b);
        (
            (b * b * self.f2 - self.f1 * (1.0 - a * b)).abs(),
            (a * a * self.f1 - self.f2 * (1.0 - a * b)).abs(),
        )
    }

    /// `|(2ab - 1) f1|` and `|(2ab - 1) f2|`.
    pub fn c4_residuals(&self) -> (f64, f64) {
        let d = self.two_ab_minus_one();
        ((d * self.f1).abs(), (d * self.f2).abs())
    }

    /// Named residuals, for reports.
    pub fn diagnostics(&self) -> BTreeMap<String, f64> {
        let (m1, m2) = self.mu2_residuals();
        let (c1, c2) = self.c4_residuals();
        BTreeMap::from([
            ("unit_identity".to_string(), self.unit_identity()),
            ("mu2_phi_xi".to_string(), m1),
            ("mu2_phi_n".to_string(), m2),
            ("c4_f1".to_string(), c1),
            ("c4_f2".to_string(), c2),
            ("decomposition".to_string(), self.residual),
            (
                "w_prime_orthogonality".to_string(),
                self.w_prime_orthogonality,
            ),
        ])
    }

    /// Largest of the identity residuals that must vanish on every frame.
    pub fn max_identity_residual(&self) -> f64 {
        self.diagnostics().values().fold(0.0, |m, v| m.max(*v))
    }
}

/// Splits `zeta` against the frame.
pub fn decompose_zeta(
    s: &AmbientStructure,
    frame: &NullFrame,
    tol: f64,
) -> Result<ZetaDecomposition> {
    let g = s.metric();
    let r = frame.residuals(g, tol);
    if !r.holds(tol) {
        return Err(Error::FrameInvalid(format!("{r:?}")));
    }
    let zeta = s.zeta();
    let (xi, n, pxi, pn) = (&frame.xi, &frame.n, &frame.phi_xi, &frame.phi_n);

    let a = g.inner(n, zeta);
    let b = g.inner(xi, zeta);
    let w = zeta - xi * a - n * b;
    let gram_det = g.gram_det2(pxi, pn);

    let (f1, f2, w_prime, lambda) = if (2.0 * a * b - 1.0).abs() <= tol {
        let lambda = pxi.dot(pn) / pn.norm_squared();
        let f2 = w.dot(pxi) / pxi.norm_squared();
        (0.0, f2, Vector::zeros(s.dim()), Some(lambda))
    } else {
        // Gram system of {phi N, phi xi} against W
        let (g11, g12, g22) = (g.inner(pn, pn), g.inner(pn, pxi), g.inner(pxi, pxi));
        let (r1, r2) = (g.inner(&w, pn), g.inner(&w, pxi));
        let det = g11 * g22 - g12 * g12;
        let f1 = (g22 * r1 - g12 * r2) / det;
        let f2 = (g11 * r2 - g12 * r1) / det;
        let w_prime = &w - pn * f1 - pxi * f2;
        (f1, f2, w_prime, None)
    };

    let residual = (zeta - &w_prime - pn * f1 - pxi * f2 - xi * a - n * b).norm();
    let wp_norm = w_prime.norm();
    let w_prime_orthogonality = if wp_norm == 0.0 {
        0.0
    } else {
        [pxi, pn, xi, n]
            .iter()
            .map(|v| g.inner(&w_prime, v).abs() / (wp_norm * v.norm()))
            .fold(0.0, f64::max)
    };

    Ok(ZetaDecomposition {
        a,
        b,
        f1,
        f2,
        w_norm_sq: g.inner(&w, &w),
        w,
        w_prime,
        lambda,
        gram_det,
        residual,
        w_prime_orthogonality,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Ascreen,
    Inascreen,
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassLabel::Ascreen => "ascreen",
            ClassLabel::Inascreen => "inascreen",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: ClassLabel,
    /// Inascreen with `a = b = 0`: `zeta` is tangent to the hypersurface.
    pub tangential: bool,
    /// Inascreen with `b != 0`.
    pub proper: bool,
    pub diagnostics: BTreeMap<String, f64>,
}

impl Classification {
    /// `"ascreen"`, `"inascreen, tangential"`, `"inascreen, proper"` or plain
    /// `"inascreen"`.
    pub fn describe(&self) -> String {
        match (self.label, self.tangential, self.proper) {
            (ClassLabel::Inascreen, true, _) => "inascreen, tangential".into(),
            (ClassLabel::Inascreen, _, true) => "inascreen, proper".into(),
            (label, _, _) => label.to_string(),
        }
    }
}

pub fn classify(dec: &ZetaDecomposition, tol: f64) -> Result<Classification> {
    if dec.residual > tol {
        return Err(Error::Inconsistent(format!(
            "decomposition residual {:e} exceeds tolerance",
            dec.residual
        )));
    }
    let degenerate = dec.two_ab_minus_one().abs() <= tol;
    let wp = dec.w_prime.norm();
    let label = if wp > tol {
        ClassLabel::Inascreen
    } else if degenerate {
        ClassLabel::Ascreen
    } else {
        return Err(Error::Inconsistent(format!(
            "2ab - 1 = {:e} but W' vanishes (g(W,W) + 2ab - 1 = {:e})",
            dec.two_ab_minus_one(),
            dec.unit_identity()
        )));
    };
    let inascreen = label == ClassLabel::Inascreen;
    let tangential = inascreen && dec.a.abs() <= tol && dec.b.abs() <= tol;
    let proper = inascreen && dec.b.abs() > tol;
    if proper && dec.w_prime.len() < 5 {
        return Err(Error::DimensionTooSmall {
            dim: dec.w_prime.len(),
        });
    }
    let mut diagnostics = dec.diagnostics();
    diagnostics.insert("two_ab_minus_one".into(), dec.two_ab_minus_one());
    diagnostics.insert("w_prime_norm".into(), wp);
    Ok(Classification {
        label,
        tangential,
        proper,
        diagnostics,
    })
}

/// Points where `b = 0` must also have `a = 0` under the basis scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentialZetaReport {
    pub points_checked: usize,
    pub tangent_points: usize,
    /// `(point index, a, b)` of every violation.
    pub violations: Vec<(usize, f64, f64)>,
    /// `(point index, message)` of points where no frame could be built.
    pub errors: Vec<(usize, String)>,
    pub passed: bool,
}

pub fn verify_tangential_zeta(
    s: &AmbientStructure,
    h: &Hypersurface,
    points: &[Vector],
    tol: f64,
) -> TangentialZetaReport {
    let mut report = TangentialZetaReport {
        points_checked: points.len(),
        tangent_points: 0,
        violations: Vec::new(),
        errors: Vec::new(),
        passed: false,
    };
    for (i, p) in points.iter().enumerate() {
        match build_null_frame(s, h, p, &ScreenPolicy::BasisScan, tol) {
            Ok(frame) => {
                if frame.b.abs() <= tol {
                    report.tangent_points += 1;
                    if frame.a.abs() > tol {
                        report.violations.push((i, frame.a, frame.b));
                    }
                }
            }
            Err(e) => report.errors.push((i, e.to_string())),
        }
    }
    report.passed = report.violations.is_empty() && report.errors.is_empty();
    report
}

/// Independence certificates for a proper inascreen frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    /// Gram determinant of `{phi xi, phi N}`, equal to `2ab - 1`.
    pub gram_det: f64,
    pub phi_pair_independent: bool,
    /// Euclidean rank of `[tangent basis | zeta]`.
    pub rank_with_zeta: usize,
    pub zeta_transversal: bool,
    pub ambient_dim: usize,
    pub passed: bool,
}

/// Returns `None` when the frame is not proper inascreen.
pub fn check_independence(
    s: &AmbientStructure,
    frame: &NullFrame,
    dec: &ZetaDecomposition,
    tol: f64,
) -> Result<Option<IndependenceReport>> {
    let class = classify(dec, tol)?;
    if !class.proper {
        return Ok(None);
    }
    let dim = s.dim();
    if dim < 5 {
        return Err(Error::DimensionTooSmall { dim });
    }
    let gram_det = s.metric().gram_det2(&frame.phi_xi, &frame.phi_n);
    let mut cols = frame.tangent_basis();
    cols.push(s.zeta().clone());
    let rank_with_zeta = euclidean_rank(dim, &cols, tol);
    let phi_pair_independent = gram_det.abs() > tol;
    let zeta_transversal = rank_with_zeta == cols.len();
    Ok(Some(IndependenceReport {
        gram_det,
        phi_pair_independent,
        rank_with_zeta,
        zeta_transversal,
        ambient_dim: dim,
        passed: phi_pair_independent && zeta_transversal,
    }))
}
