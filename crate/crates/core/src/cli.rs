//! Run configurations, named presets and JSON reports behind the
//! `lightlike` binary.
//!
//! A run loads one [`RunConfig`], evaluates every point independently and
//! assembles a [`RunReport`] in input order. Exit codes: 0 success, 1 a
//! structural check failed, 2 the configuration is unusable.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, decompose_zeta, verify_tangential_zeta, ClassLabel};
use crate::error::{Error, Result};
use crate::gauss_weingarten::{
    second_fundamental, verify_gw_identities, GwReport, DEFAULT_FD_STEP,
};
use crate::hypersurface::{
    build_null_frame, AuxiliaryChoice, FrameResiduals, Hypersurface, ScreenPolicy,
};
use crate::induced::{
    induced_phi_omega, nonexistence_witness, verify_hermitian, HermitianReport, ObstructionReport,
};
use crate::linalg::{Vector, DEFAULT_TOL};
use crate::sampling::{sample_points, SampleBox};
use crate::structure::{AmbientStructure, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientConfig {
    pub n_pairs: usize,
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// `g(x, x) = 0`
    NullCone,
    /// `x3 - x1 = 0` in the 5-dimensional model.
    FixtureA,
    /// `-sqrt(2) x1 + x3 + z = 0` in the 5-dimensional model.
    FixtureB,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HypersurfaceConfig {
    /// `covector . x + constant = level`
    Affine {
        covector: Vec<f64>,
        #[serde(default)]
        constant: f64,
        #[serde(default)]
        level: f64,
    },
    /// `x^T matrix x + covector . x + constant = level`
    Quadric {
        matrix: Vec<Vec<f64>>,
        #[serde(default)]
        covector: Option<Vec<f64>>,
        #[serde(default)]
        constant: f64,
        #[serde(default)]
        level: f64,
    },
    Builtin {
        name: Builtin,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub count: usize,
    /// Defaults to the run seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, rename = "box")]
    pub bounds: SampleBox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsConfig {
    Explicit(Vec<Vec<f64>>),
    Sample { sample: SampleConfig },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Threshold for nullity, `b = 0`, `2ab = 1` and frame construction.
    pub null: f64,
    /// Bound on algebraic identity residuals.
    pub residual: f64,
    pub fd_step: f64,
    /// Bound on finite-difference identity residuals.
    pub gw: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            null: DEFAULT_TOL,
            residual: DEFAULT_TOL,
            fd_step: DEFAULT_FD_STEP,
            gw: 1e-5,
        }
    }
}

fn default_trials() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub ambient: AmbientConfig,
    pub hypersurface: HypersurfaceConfig,
    #[serde(default)]
    pub screen_policy: ScreenPolicy,
    pub points: PointsConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Random vector pairs per Hermitian and axiom check.
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Command-line overrides applied on top of a loaded config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub fd_step: Option<f64>,
    pub seed: Option<u64>,
}

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

fn vector(values: &[f64], dim: usize, what: &str) -> Result<Vector> {
    if values.len() != dim {
        return Err(Error::Config(format!(
            "{what} has {} entries, expected {dim}",
            values.len()
        )));
    }
    Ok(Vector::from_column_slice(values))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(config_err)?;
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn with_overrides(mut self, o: &Overrides) -> Result<Self> {
        if let Some(tol) = o.tol {
            self.tolerances.null = tol;
            self.tolerances.residual = tol;
        }
        if let Some(step) = o.fd_step {
            self.tolerances.fd_step = step;
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
            if let PointsConfig::Sample { sample } = &mut self.points {
                sample.seed = Some(seed);
            }
        }
        self.check()?;
        Ok(self)
    }

    /// Checks everything that does not depend on individual points.
    pub fn check(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("null", t.null),
            ("residual", t.residual),
            ("fd_step", t.fd_step),
            ("gw", t.gw),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        let s = self.structure()?;
        self.hypersurface_for(&s)?;
        if let ScreenPolicy::AuxiliaryVector { auxiliary } = &self.screen_policy {
            vector(auxiliary, s.dim(), "screen_policy.auxiliary")?;
        }
        if let PointsConfig::Explicit(points) = &self.points {
            for p in points {
                vector(p, s.dim(), "point")?;
            }
        }
        Ok(())
    }

    pub fn structure(&self) -> Result<AmbientStructure> {
        AmbientStructure::standard_model(self.ambient.n_pairs, &self.ambient.signs)
    }

    pub fn hypersurface_for(&self, s: &AmbientStructure) -> Result<Hypersurface> {
        let dim = s.dim();
        match &self.hypersurface {
            HypersurfaceConfig::Affine {
                covector,
                constant,
                level,
            } => Ok(Hypersurface::affine(
                vector(covector, dim, "covector")?,
                *constant,
                *level,
            )),
            HypersurfaceConfig::Quadric {
                matrix,
                covector,
                constant,
                level,
            } => {
                if matrix.len() != dim || matrix.iter().any(|row| row.len() != dim) {
                    return Err(Error::Config(format!("quadric matrix must be {dim}x{dim}")));
                }
                let m = DMatrix::from_fn(dim, dim, |i, j| matrix[i][j]);
                let w = match covector {
                    Some(c) => vector(c, dim, "covector")?,
                    None => Vector::zeros(dim),
                };
                Hypersurface::quadric(m, w, *constant, *level)
            }
            HypersurfaceConfig::Builtin { name } => {
                if *name == Builtin::NullCone {
                    return Ok(Hypersurface::null_cone(s.metric()));
                }
                if dim != 5 {
                    return Err(Error::Config(format!(
                        "{name:?} lives in the 5-dimensional model, ambient has dimension {dim}"
                    )));
                }
                let covector = match name {
                    Builtin::FixtureA => [-1.0, 0.0, 1.0, 0.0, 0.0],
                    _ => [-(2f64.sqrt()), 0.0, 1.0, 0.0, 1.0],
                };
                Ok(Hypersurface::affine(
                    Vector::from_row_slice(&covector),
                    0.0,
                    0.0,
                ))
            }
        }
    }

    pub fn points_for(&self, h: &Hypersurface) -> Result<Vec<Vector>> {
        match &self.points {
            PointsConfig::Explicit(points) => Ok(points
                .iter()
                .map(|p| Vector::from_column_slice(p))
                .collect()),
            PointsConfig::Sample { sample } => sample_points(
                h,
                sample.count,
                sample.seed.unwrap_or(self.seed),
                sample.bounds,
                self.tolerances.null * 1e-3,
            ),
        }
    }
}

/// Built-in example configurations, by name.
pub fn presets() -> Vec<(&'static str, RunConfig)> {
    let ambient = AmbientConfig {
        n_pairs: 2,
        signs: vec![-1, 1],
    };
    let base = |hypersurface, screen_policy, points| RunConfig {
        ambient: ambient.clone(),
        hypersurface,
        screen_policy,
        points,
        tolerances: Tolerances::default(),
        trials: default_trials(),
        seed: 0,
    };
    let fixture_b = HypersurfaceConfig::Builtin {
        name: Builtin::FixtureB,
    };
    vec![
        (
            "fixture-a",
            base(
                HypersurfaceConfig::Builtin {
                    name: Builtin::FixtureA,
                },
                ScreenPolicy::BasisScan,
                PointsConfig::Explicit(vec![
                    vec![0.0; 5],
                    vec![1.0, 0.0, 1.0, 0.0, 0.0],
                    vec![0.5, -2.0, 0.5, 3.0, 1.0],
                ]),
            ),
        ),
        (
            "fixture-b",
            base(
                fixture_b.clone(),
                ScreenPolicy::BasisScan,
                PointsConfig::Explicit(vec![vec![0.0; 5], vec![0.0, 1.0, 0.0, -1.0, 0.0]]),
            ),
        ),
        (
            "fixture-b-ascreen",
            base(
                fixture_b,
                ScreenPolicy::AuxiliaryVector {
                    auxiliary: vec![0.0, 0.0, 0.0, 0.0, 1.0],
                },
                PointsConfig::Explicit(vec![vec![0.0; 5]]),
            ),
        ),
        (
            "null-cone",
            RunConfig {
                seed: 7,
                ..base(
                    HypersurfaceConfig::Builtin {
                        name: Builtin::NullCone,
                    },
                    ScreenPolicy::BasisScan,
                    PointsConfig::Sample {
                        sample: SampleConfig {
                            count: 16,
                            seed: Some(7),
                            bounds: SampleBox::default(),
                        },
                    },
                )
            },
        ),
    ]
}

pub fn preset(name: &str) -> Option<RunConfig> {
    presets()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub xi: Vec<f64>,
    pub n: Vec<f64>,
    pub phi_xi: Vec<f64>,
    pub phi_n: Vec<f64>,
    pub screen_basis: Vec<Vec<f64>>,
    pub dprime_basis: Vec<Vec<f64>>,
    pub a: f64,
    pub b: f64,
    pub auxiliary: AuxiliaryChoice,
    pub residuals: FrameResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    /// For example `"inascreen, proper"`.
    pub class: String,
    pub label: ClassLabel,
    pub tangential: bool,
    pub proper: bool,
    pub a: f64,
    pub b: f64,
    pub f1: f64,
    pub f2: f64,
    pub w_prime: Vec<f64>,
    pub lambda: Option<f64>,
    pub gram_det: f64,
    pub two_ab_minus_one: f64,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedRecord {
    /// Row-major matrix of the induced `phi` in tangent coordinates.
    pub phi_matrix: Vec<Vec<f64>>,
    pub omega: Vec<f64>,
    pub hermitian: HermitianReport,
    pub obstruction: Option<ObstructionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GwRecord {
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    pub tau: Vec<f64>,
    pub theta: Vec<f64>,
    pub a_n: Vec<Vec<f64>>,
    pub a_star_xi: Vec<Vec<f64>>,
    pub residuals: GwReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub index: usize,
    pub point: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced: Option<InducedRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss_weingarten: Option<GwRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Largest residual of one identity over the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub name: String,
    pub max_residual: f64,
    /// Index of the point attaining the maximum, if the identity is per point.
    pub point: Option<usize>,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub points: usize,
    pub errors: usize,
    pub class_counts: BTreeMap<String, usize>,
    pub max_residuals: BTreeMap<String, f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub config: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<ValidationReport>,
    pub records: Vec<PointRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityEntry>,
    pub summary: Summary,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(config_err)
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.passed {
            EXIT_OK
        } else {
            EXIT_FAILURE
        }
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn vecs(vs: &[Vector]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.as_slice().to_vec()).collect()
}

#[derive(Debug, Clone, Copy)]
struct Blocks {
    induced: bool,
    gauss_weingarten: bool,
}

struct Context<'a> {
    config: &'a RunConfig,
    structure: AmbientStructure,
    hypersurface: Hypersurface,
}

impl Context<'_> {
    fn evaluate(&self, index: usize, p: &Vector, blocks: Blocks) -> PointRecord {
        let mut record = PointRecord {
            index,
            point: p.as_slice().to_vec(),
            frame: None,
            classification: None,
            induced: None,
            gauss_weingarten: None,
            error: None,
        };
        if let Err(e) = self.fill(&mut record, p, blocks) {
            record.error = Some(e.to_string());
        }
        record
    }

    fn fill(&self, record: &mut PointRecord, p: &Vector, blocks: Blocks) -> Result<()> {
        let (s, h) = (&self.structure, &self.hypersurface);
        let tol = self.config.tolerances;
        let policy = &self.config.screen_policy;
        let frame = build_null_frame(s, h, p, policy, tol.null)?;
        record.frame = Some(FrameRecord {
            xi: frame.xi.as_slice().to_vec(),
            n: frame.n.as_slice().to_vec(),
            phi_xi: frame.phi_xi.as_slice().to_vec(),
            phi_n: frame.phi_n.as_slice().to_vec(),
            screen_basis: vecs(&frame.screen_basis),
            dprime_basis: vecs(&frame.dprime_basis),
            a: frame.a,
            b: frame.b,
            auxiliary: frame.pivots.auxiliary,
            residuals: frame.residuals(s.metric(), tol.null),
        });

        let dec = decompose_zeta(s, &frame, tol.null)?;
        let class = classify(&dec, tol.null)?;
        record.classification = Some(ClassRecord {
            class: class.describe(),
            label: class.label,
            tangential: class.tangential,
            proper: class.proper,
            a: dec.a,
            b: dec.b,
            f1: dec.f1,
            f2: dec.f2,
            w_prime: dec.w_prime.as_slice().to_vec(),
            lambda: dec.lambda,
            gram_det: dec.gram_det,
            two_ab_minus_one: dec.two_ab_minus_one(),
            residuals: dec.diagnostics(),
        });

        if blocks.induced && class.proper {
            let ind = induced_phi_omega(s, &frame, &dec, tol.null)?;
            let seed = self.config.seed.wrapping_add(record.index as u64);
            record.induced = Some(InducedRecord {
                phi_matrix: rows(&ind.phi),
                omega: ind.omega.as_slice().to_vec(),
                hermitian: verify_hermitian(&ind, self.config.trials, seed, tol.residual),
                obstruction: nonexistence_witness(&ind, &dec, tol.null)?,
            });
        }

        if blocks.gauss_weingarten {
            let data = second_fundamental(s, h, p, policy, tol.fd_step, tol.null)?;
            record.gauss_weingarten = Some(GwRecord {
                b: rows(&data.b),
                c: rows(&data.c),
                tau: data.tau.as_slice().to_vec(),
                theta: data.theta.as_slice().to_vec(),
                a_n: rows(&data.a_n),
                a_star_xi: rows(&data.a_star_xi),
                residuals: verify_gw_identities(s, &data, tol.gw),
            });
        }
        Ok(())
    }
}

#[derive(Default)]
struct IdentityTable {
    entries: BTreeMap<String, IdentityEntry>,
}

impl IdentityTable {
    fn add(&mut self, name: &str, residual: f64, point: Option<usize>, tol: f64) {
        let entry = self
            .entries
            .entry(name.to_string())
            .or_insert(IdentityEntry {
                name: name.to_string(),
                max_residual: 0.0,
                point: None,
                tol,
                passed: true,
            });
        // A NaN residual replaces any finite maximum and then sticks.
        if residual > entry.max_residual || (residual.is_nan() && !entry.max_residual.is_nan()) {
            entry.max_residual = residual;
            entry.point = point;
        }
        entry.passed = entry.max_residual <= entry.tol;
    }

    fn add_record(&mut self, r: &PointRecord, tol: &Tolerances) {
        let at = Some(r.index);
        if let Some(f) = &r.frame {
            let fr = &f.residuals;
            for (name, v) in [
                ("frame.xi_null", fr.xi_null),
                ("frame.n_null", fr.n_null),
                ("frame.xi_n_pairing", fr.xi_n_pairing),
                ("frame.screen_orthogonal", fr.screen_orthogonal),
                ("frame.phi_in_screen", fr.phi_in_screen),
                ("frame.dprime_orthogonal", fr.dprime_orthogonal),
            ] {
                self.add(name, v, at, tol.residual);
            }
        }
        if let Some(c) = &r.classification {
            for (name, v) in &c.residuals {
                self.add(&format!("zeta.{name}"), *v, at, tol.residual);
            }
            self.add(
                "zeta.gram_det",
                (c.gram_det - c.two_ab_minus_one).abs(),
                at,
                tol.residual,
            );
        }
        if let Some(i) = &r.induced {
            let h = &i.hermitian;
            for (name, v) in [
                ("induced.hermitian", h.hermitian),
                ("induced.metric_split", h.metric_split),
                ("induced.skew_split", h.skew_split),
                ("induced.phi_squared", h.phi_squared),
                ("induced.omega_phi_eta", h.omega_phi_eta),
                ("induced.degeneracy_xi", h.degeneracy_xi),
                ("induced.degeneracy_phi_xi", h.degeneracy_phi_xi),
            ] {
                self.add(name, v, at, tol.residual);
            }
            if let Some(o) = &i.obstruction {
                let b2 = o.b * o.b;
                self.add(
                    "witness.omega_phi_xi",
                    (o.omega_phi_xi - o.b).abs(),
                    at,
                    tol.residual,
                );
                self.add(
                    "witness.hermitian_defect",
                    (o.hermitian_defect_xi_xi - b2).abs(),
                    at,
                    tol.residual,
                );
                self.add(
                    "witness.skew_defect",
                    (o.skew_defect - b2).abs(),
                    at,
                    tol.residual,
                );
            }
        }
        if let Some(g) = &r.gauss_weingarten {
            let s = &g.residuals.residuals;
            for (name, v) in [
                ("gauss_weingarten.symmetry", s.symmetry),
                ("gauss_weingarten.shape_b", s.shape_b),
                ("gauss_weingarten.shape_c", s.shape_c),
                ("gauss_weingarten.nabla_g", s.nabla_g),
                ("gauss_weingarten.b_xi", s.b_xi),
            ] {
                self.add(name, v, at, tol.gw);
            }
        }
    }

    fn into_vec(self) -> Vec<IdentityEntry> {
        self.entries.into_values().collect()
    }
}

fn summarize(records: &[PointRecord], identities: &[IdentityEntry]) -> Summary {
    let mut class_counts = BTreeMap::new();
    for c in records.iter().filter_map(|r| r.classification.as_ref()) {
        *class_counts.entry(c.class.clone()).or_insert(0) += 1;
    }
    let mut max_residuals = BTreeMap::new();
    for e in identities {
        let group = e.name.split('.').next().unwrap_or(&e.name).to_string();
        let slot = max_residuals.entry(group).or_insert(0.0f64);
        *slot = slot.max(e.max_residual);
    }
    let errors = records.iter().filter(|r| r.error.is_some()).count();
    Summary {
        points: records.len(),
        errors,
        class_counts,
        max_residuals,
        passed: errors == 0 && identities.iter().all(|e| e.passed),
    }
}

fn evaluate_all(
    config: &RunConfig,
    blocks: Blocks,
) -> Result<(Context<'_>, Vec<Vector>, Vec<PointRecord>)> {
    let structure = config.structure()?;
    let hypersurface = config.hypersurface_for(&structure)?;
    let points = config.points_for(&hypersurface)?;
    let ctx = Context {
        config,
        structure,
        hypersurface,
    };
    let records = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| ctx.evaluate(i, p, blocks))
        .collect();
    Ok((ctx, points, records))
}

/// Frames and class labels for every point.
pub fn run_classify(config: &RunConfig) -> Result<RunReport> {
    let blocks = Blocks {
        induced: false,
        gauss_weingarten: false,
    };
    let (_, _, records) = evaluate_all(config, blocks)?;
    let summary = summarize(&records, &[]);
    Ok(RunReport {
        command: "classify".into(),
        config: config.clone(),
        ambient: None,
        records,
        identities: Vec::new(),
        summary,
    })
}

/// The full identity suite: ambient axioms, frame constraints, the `zeta`
/// decomposition, induced structure, obstruction witnesses, the tangential
/// `a = 0` check and the Gauss-Weingarten identities.
pub fn run_verify(config: &RunConfig) -> Result<RunReport> {
    let blocks = Blocks {
        induced: true,
        gauss_weingarten: true,
    };
    let (ctx, points, records) = evaluate_all(config, blocks)?;
    let tol = config.tolerances;
    let mut table = IdentityTable::default();

    let ambient = ctx
        .structure
        .validate(config.trials, config.seed, tol.residual);
    let ar = &ambient.residuals;
    for (name, v) in [
        ("ambient.eta_zeta", ar.eta_zeta),
        ("ambient.phi_squared", ar.phi_squared),
        ("ambient.phi_zeta", ar.phi_zeta),
        ("ambient.eta_phi", ar.eta_phi),
        ("ambient.compatibility", ar.compatibility),
        ("ambient.eta_metric", ar.eta_metric),
        ("ambient.skew", ar.skew),
    ] {
        table.add(name, v, None, tol.residual);
    }

    for r in &records {
        table.add_record(r, &tol);
    }

    let tangential = verify_tangential_zeta(&ctx.structure, &ctx.hypersurface, &points, tol.null);
    table.add("zeta.tangential_a", 0.0, None, tol.null);
    for (i, a, _) in &tangential.violations {
        table.add("zeta.tangential_a", a.abs(), Some(*i), tol.null);
    }

    let identities = table.into_vec();
    let summary = summarize(&records, &identities);
    Ok(RunReport {
        command: "verify".into(),
        config: config.clone(),
        ambient: Some(ambient),
        records,
        identities,
        summary,
    })
}

/// Frame, decomposition and class at a single point.
pub fn run_frame(config: &RunConfig, point: &[f64]) -> Result<PointRecord> {
    let structure = config.structure()?;
    let hypersurface = config.hypersurface_for(&structure)?;
    let p = vector(point, structure.dim(), "--point")?;
    let ctx = Context {
        config,
        structure,
        hypersurface,
    };
    let blocks = Blocks {
        induced: false,
        gauss_weingarten: false,
    };
    let mut record = PointRecord {
        index: 0,
        point: point.to_vec(),
        frame: None,
        classification: None,
        induced: None,
        gauss_weingarten: None,
        error: None,
    };
    ctx.fill(&mut record, &p, blocks)?;
    Ok(record)
}

/// Exit code for an error that aborted a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::InvalidSignature(_)
        | Error::InvalidStructure(_)
        | Error::InvalidHypersurface(_)
        | Error::DimensionMismatch { .. } => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

/// What a command prints and returns.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn error(e: &Error) -> Self {
        Self {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Classify {
        config: std::path::PathBuf,
    },
    Verify {
        config: std::path::PathBuf,
    },
    Frame {
        config: std::path::PathBuf,
        point: Vec<f64>,
    },
    Examples {
        out: Option<std::path::PathBuf>,
    },
}

fn report_output(report: Result<RunReport>) -> CommandOutput {
    match report {
        Ok(report) => {
            let mut stderr = String::new();
            for r in &report.records {
                if let Some(e) = &r.error {
                    stderr.push_str(&format!("point {}: {e}\n", r.index));
                }
            }
            for e in report.identities.iter().filter(|e| !e.passed) {
                stderr.push_str(&format!(
                    "{}: residual {:e} exceeds {:e} (point {:?})\n",
                    e.name, e.max_residual, e.tol, e.point
                ));
            }
            CommandOutput {
                code: report.exit_code(),
                stdout: report.to_json() + "\n",
                stderr,
            }
        }
        Err(e) => CommandOutput::error(&e),
    }
}

pub fn execute(command: &Command, overrides: &Overrides) -> CommandOutput {
    let load = |path: &Path| RunConfig::load(path).and_then(|c| c.with_overrides(overrides));
    match command {
        Command::Classify { config } => report_output(load(config).and_then(|c| run_classify(&c))),
        Command::Verify { config } => report_output(load(config).and_then(|c| run_verify(&c))),
        Command::Frame { config, point } => match load(config).and_then(|c| run_frame(&c, point)) {
            Ok(record) => CommandOutput {
                code: EXIT_OK,
                stdout: serde_json::to_string_pretty(&record).expect("record serializes") + "\n",
                stderr: String::new(),
            },
            Err(e) => CommandOutput::error(&e),
        },
        Command::Examples { out } => write_examples(out.as_deref()),
    }
}

fn write_examples(out: Option<&Path>) -> CommandOutput {
    let presets = presets();
    match out {
        None => {
            let all: BTreeMap<&str, &RunConfig> = presets.iter().map(|(n, c)| (*n, c)).collect();
            CommandOutput {
                code: EXIT_OK,
                stdout: serde_json::to_string_pretty(&all).expect("presets serialize") + "\n",
                stderr: String::new(),
            }
        }
        Some(dir) => {
            let mut stdout = String::new();
            let result = fs::create_dir_all(dir).and_then(|_| {
                for (name, config) in &presets {
                    let path = dir.join(format!("{name}.json"));
                    fs::write(&path, config.to_json() + "\n")?;
                    stdout.push_str(&format!("{}\n", path.display()));
                }
                Ok(())
            });
            match result {
                Ok(()) => CommandOutput {
                    code: EXIT_OK,
                    stdout,
                    stderr: String::new(),
                },
                Err(e) => CommandOutput::error(&Error::Config(format!("{}: {e}", dir.display()))),
            }
        }
    }
}
