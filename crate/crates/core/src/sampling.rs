//! Seeded generators for null vectors, lightlike hyperplanes and points on
//! hypersurfaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::{Hypersurface, CONE_VERTEX_RADIUS};
use crate::linalg::{MetricTensor, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonzero null vector with entries of order one. With
/// `tangential` its last coordinate is zero.
pub fn random_null_vector<R: Rng>(g: &MetricTensor, rng: &mut R, tangential: bool) -> Vector {
    let dim = g.dim();
    loop {
        let mut v = Vector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
        if tangential {
            v[dim - 1] = 0.0;
        }
        let (mut pos, mut neg) = (0.0, 0.0);
        for i in 0..dim {
            if g.sign(i) > 0.0 {
                pos += v[i] * v[i];
            } else {
                neg += v[i] * v[i];
            }
        }
        if pos < 1e-3 || neg < 1e-3 {
            continue;
        }
        let scale = (pos / neg).sqrt();
        for i in 0..dim {
            if g.sign(i) < 0.0 {
                v[i] *= scale;
            }
        }
        return v;
    }
}

/// A lightlike hyperplane `g(xi, x) = g(xi, p)` through a random point `p`
/// with `|p_i| <= 1`. Returns the hypersurface and `p`.
pub fn random_lightlike_hyperplane<R: Rng>(
    g: &MetricTensor,
    rng: &mut R,
    tangential: bool,
) -> (Hypersurface, Vector) {
    let xi = random_null_vector(g, rng, tangential);
    let covector = g.lower_index(&xi);
    let p = Vector::from_fn(g.dim(), |_, _| rng.random_range(-1.0..1.0));
    let constant = -covector.dot(&p);
    (Hypersurface::affine(covector, constant, 0.0), p)
}

/// `count` seeded random lightlike hyperplanes; every `tangential_every`-th
/// one has `zeta` tangent (0 disables).
pub fn hyperplane_corpus(
    g: &MetricTensor,
    count: usize,
    seed: u64,
    tangential_every: usize,
) -> Vec<(Hypersurface, Vector)> {
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let tangential = tangential_every > 0 && k % tangential_every == tangential_every - 1;
            random_lightlike_hyperplane(g, &mut r, tangential)
        })
        .collect()
}

/// Points of the null cone away from its vertex.
pub fn null_cone_points(g: &MetricTensor, count: usize, seed: u64) -> Vec<Vector> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| random_null_vector(g, &mut r, false))
        .collect()
}

/// Box from which starting points are drawn before projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub min: f64,
    pub max: f64,
}

impl Default for SampleBox {
    fn default() -> Self {
        Self {
            min: -1.0,
            max: 1.0,
        }
    }
}

/// Draws uniform points from the box and projects them onto `h` by Newton
/// iteration, discarding starts that do not converge or land near a cone
/// vertex.
pub fn sample_points(
    h: &Hypersurface,
    count: usize,
    seed: u64,
    bounds: SampleBox,
    tol: f64,
) -> Result<Vec<Vector>> {
    if bounds.min.partial_cmp(&bounds.max) != Some(std::cmp::Ordering::Less) {
        return Err(Error::Config(format!(
            "empty sample box [{}, {}]",
            bounds.min, bounds.max
        )));
    }
    let mut r = rng(seed);
    let dim = h.dim();
    let mut out = Vec::with_capacity(count);
    let max_attempts = 100 * count.max(1);
    for _ in 0..max_attempts {
        if out.len() == count {
            break;
        }
        let start = Vector::from_fn(dim, |_, _| r.random_range(bounds.min..bounds.max));
        if let Some(q) = h.project(&start, tol, 50) {
            if h.gradient(&q).norm() > CONE_VERTEX_RADIUS.sqrt() {
                out.push(q);
            }
        }
    }
    if out.len() < count {
        return Err(Error::EvaluationFailure(format!(
            "found {} of {count} points after {max_attempts} attempts",
            out.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn metric() -> MetricTensor {
        MetricTensor::new(&[-1, 1]).unwrap()
    }

    #[test]
    fn corpus_is_null_and_seeded() {
        let g = metric();
        let corpus = hyperplane_corpus(&g, 20, 4, 5);
        assert_eq!(corpus.len(), 20);
        for (k, (h, p)) in corpus.iter().enumerate() {
            let xi = g.raise_index(&h.gradient(p));
            assert!(g.inner(&xi, &xi).abs() <= 1e-12);
            assert!(h.value(p).abs() <= 1e-12);
            if k % 5 == 4 {
                assert_eq!(xi[4], 0.0);
            }
        }
        assert_eq!(corpus, hyperplane_corpus(&g, 20, 4, 5));
        assert_ne!(corpus, hyperplane_corpus(&g, 20, 5, 5));
    }

    #[test]
    fn projected_points_lie_on_cone() {
        let g = metric();
        let cone = Hypersurface::null_cone(&g);
        let pts = sample_points(&cone, 10, 1, SampleBox::default(), 1e-13).unwrap();
        for p in &pts {
            assert!(cone.value(p).abs() <= 1e-13);
        }
        assert!(sample_points(&cone, 1, 1, SampleBox { min: 1.0, max: 0.0 }, 1e-13).is_err());
    }

    proptest! {
        #[test]
        fn null_vectors_are_null(seed in any::<u64>(), tangential in any::<bool>()) {
            let g = MetricTensor::new(&[-1, 1, -1]).unwrap();
            let v = random_null_vector(&g, &mut rng(seed), tangential);
            prop_assert!(g.inner(&v, &v).abs() <= 1e-12);
            prop_assert!(v.norm() > 0.01);
        }
    }
}
