//! Fixture B (`-sqrt2 x1 + x3 + z = 0` in signature (-1, -1, +1, +1, +1))
//! recomputed in exact arithmetic over Q(sqrt 2) and compared with the
//! floating-point pipeline.

use std::ops::{Add, Div, Mul, Neg, Sub};

use lightlike::classify::{classify, decompose_zeta};
use lightlike::hypersurface::{build_null_frame, Hypersurface, ScreenPolicy};
use lightlike::linalg::Vector;
use lightlike::structure::AmbientStructure;
use num_rational::Rational64;

/// `p + q sqrt 2`
#[derive(Debug, Clone, Copy, PartialEq)]
struct Q2 {
    p: Rational64,
    q: Rational64,
}

impl Q2 {
    fn int(p: i64) -> Self {
        Self {
            p: Rational64::from_integer(p),
            q: Rational64::from_integer(0),
        }
    }

    fn sqrt2() -> Self {
        Self {
            p: Rational64::from_integer(0),
            q: Rational64::from_integer(1),
        }
    }

    fn to_f64(self) -> f64 {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        f(self.p) + f(self.q) * 2f64.sqrt()
    }
}

impl Add for Q2 {
    type Output = Q2;
    fn add(self, o: Q2) -> Q2 {
        Q2 {
            p: self.p + o.p,
            q: self.q + o.q,
        }
    }
}

impl Sub for Q2 {
    type Output = Q2;
    fn sub(self, o: Q2) -> Q2 {
        self + (-o)
    }
}

impl Neg for Q2 {
    type Output = Q2;
    fn neg(self) -> Q2 {
        Q2 {
            p: -self.p,
            q: -self.q,
        }
    }
}

impl Mul for Q2 {
    type Output = Q2;
    fn mul(self, o: Q2) -> Q2 {
        let two = Rational64::from_integer(2);
        Q2 {
            p: self.p * o.p + two * self.q * o.q,
            q: self.p * o.q + self.q * o.p,
        }
    }
}

impl Div for Q2 {
    type Output = Q2;
    fn div(self, o: Q2) -> Q2 {
        let two = Rational64::from_integer(2);
        let norm = o.p * o.p - two * o.q * o.q;
        let conj = Q2 {
            p: o.p / norm,
            q: -o.q / norm,
        };
        self * conj
    }
}

type V = [Q2; 5];

const SIGNS: [i64; 5] = [-1, -1, 1, 1, 1];

fn inner(u: &V, v: &V) -> Q2 {
    (0..5).fold(Q2::int(0), |acc, i| acc + Q2::int(SIGNS[i]) * u[i] * v[i])
}

fn phi(v: &V) -> V {
    [-v[1], v[0], -v[3], v[2], Q2::int(0)]
}

fn comb(terms: &[(Q2, &V)]) -> V {
    let mut out = [Q2::int(0); 5];
    for (c, v) in terms {
        for i in 0..5 {
            out[i] = out[i] + *c * v[i];
        }
    }
    out
}

fn raise(covector: &V) -> V {
    let mut out = *covector;
    for i in 0..5 {
        out[i] = Q2::int(SIGNS[i]) * covector[i];
    }
    out
}

fn transversal(xi: &V, v: &V) -> V {
    let v_xi = inner(v, xi);
    let c = inner(v, v) / (Q2::int(2) * v_xi);
    let one_over = Q2::int(1) / v_xi;
    comb(&[(one_over, v), (-(c * one_over), xi)])
}

fn assert_close(name: &str, exact: &V, approx: &Vector) {
    for i in 0..5 {
        assert!(
            (exact[i].to_f64() - approx[i]).abs() <= 1e-12,
            "{name}[{i}]: exact {} vs {}",
            exact[i].to_f64(),
            approx[i]
        );
    }
}

fn setup() -> (AmbientStructure, Hypersurface, V, V) {
    let s = AmbientStructure::standard_model(2, &[-1, 1]).unwrap();
    let h = Hypersurface::affine(
        Vector::from_row_slice(&[-(2f64.sqrt()), 0.0, 1.0, 0.0, 1.0]),
        0.0,
        0.0,
    );
    let covector = [-Q2::sqrt2(), Q2::int(0), Q2::int(1), Q2::int(0), Q2::int(1)];
    let zeta = [Q2::int(0), Q2::int(0), Q2::int(0), Q2::int(0), Q2::int(1)];
    (s, h, raise(&covector), zeta)
}

#[test]
fn basis_scan_frame_matches_exact_values() {
    let (s, h, xi, zeta) = setup();
    // e1 already satisfies g(e1, phi xi) = 0, so the scan keeps it unprojected
    let e1 = [Q2::int(1), Q2::int(0), Q2::int(0), Q2::int(0), Q2::int(0)];
    assert_eq!(inner(&e1, &phi(&xi)), Q2::int(0));
    let n = transversal(&xi, &e1);
    assert_eq!(inner(&n, &n), Q2::int(0));
    assert_eq!(inner(&xi, &n), Q2::int(1));

    let frame =
        build_null_frame(&s, &h, &Vector::zeros(5), &ScreenPolicy::BasisScan, 1e-9).unwrap();
    assert_close("xi", &xi, &frame.xi);
    assert_close("N", &n, &frame.n);

    let a = inner(&n, &zeta);
    let b = inner(&xi, &zeta);
    assert_eq!(
        a,
        Q2 {
            p: Rational64::new(1, 4),
            q: Rational64::from_integer(0)
        }
    );
    assert_eq!(b, Q2::int(1));

    let w = comb(&[(Q2::int(1), &zeta), (-a, &xi), (-b, &n)]);
    let two_ab_minus_one = Q2::int(2) * a * b - Q2::int(1);
    assert_eq!(inner(&w, &w) + two_ab_minus_one, Q2::int(0));

    // W against {phi N, phi xi} by the 2x2 Gram system
    let (pn, pxi) = (phi(&n), phi(&xi));
    let (g11, g12, g22) = (inner(&pn, &pn), inner(&pn, &pxi), inner(&pxi, &pxi));
    let (r1, r2) = (inner(&w, &pn), inner(&w, &pxi));
    let det = g11 * g22 - g12 * g12;
    assert_eq!(det, two_ab_minus_one);
    let f1 = (g22 * r1 - g12 * r2) / det;
    let f2 = (g11 * r2 - g12 * r1) / det;
    let w_prime = comb(&[(Q2::int(1), &w), (-f1, &pn), (-f2, &pxi)]);

    let dec = decompose_zeta(&s, &frame, 1e-9).unwrap();
    assert!((dec.a - a.to_f64()).abs() <= 1e-12);
    assert!((dec.b - b.to_f64()).abs() <= 1e-12);
    assert!((dec.f1 - f1.to_f64()).abs() <= 1e-12);
    assert!((dec.f2 - f2.to_f64()).abs() <= 1e-12);
    assert!((dec.gram_det - det.to_f64()).abs() <= 1e-12);
    assert_close("W'", &w_prime, &dec.w_prime);
    assert_eq!(
        classify(&dec, 1e-9).unwrap().describe(),
        "inascreen, proper"
    );
}

#[test]
fn zeta_auxiliary_frame_matches_exact_values() {
    let (s, h, xi, zeta) = setup();
    let n = transversal(&xi, &zeta);
    let a = inner(&n, &zeta);
    let b = inner(&xi, &zeta);
    assert_eq!(Q2::int(2) * a * b, Q2::int(1));

    // phi xi = lambda phi N
    let (pxi, pn) = (phi(&xi), phi(&n));
    let lambda = pxi[1] / pn[1];
    assert_eq!(lambda, Q2::int(-2));
    for i in 0..5 {
        assert_eq!(pxi[i], lambda * pn[i]);
    }

    let policy = ScreenPolicy::AuxiliaryVector {
        auxiliary: vec![0.0, 0.0, 0.0, 0.0, 1.0],
    };
    let frame = build_null_frame(&s, &h, &Vector::zeros(5), &policy, 1e-9).unwrap();
    assert_close("N", &n, &frame.n);
    let dec = decompose_zeta(&s, &frame, 1e-9).unwrap();
    assert!((dec.lambda.unwrap() - lambda.to_f64()).abs() <= 1e-12);
    assert!((dec.a - a.to_f64()).abs() <= 1e-12);
    assert_eq!(classify(&dec, 1e-9).unwrap().describe(), "ascreen");
}
