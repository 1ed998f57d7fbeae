//! Splits `zeta` against the frame and classifies the hypersurface, showing
//! how the choice of transversal changes the answer.

use lightlike::classify::{classify, decompose_zeta};
use lightlike::hypersurface::{build_null_frame, Hypersurface, ScreenPolicy};
use lightlike::linalg::Vector;
use lightlike::structure::AmbientStructure;

fn main() -> lightlike::Result<()> {
    let s = AmbientStructure::standard_model(2, &[-1, 1])?;
    let r2 = 2f64.sqrt();
    let a = Hypersurface::affine(
        Vector::from_row_slice(&[-1.0, 0.0, 1.0, 0.0, 0.0]),
        0.0,
        0.0,
    );
    let b = Hypersurface::affine(Vector::from_row_slice(&[-r2, 0.0, 1.0, 0.0, 1.0]), 0.0, 0.0);
    let zeta_aux = ScreenPolicy::AuxiliaryVector {
        auxiliary: vec![0.0, 0.0, 0.0, 0.0, 1.0],
    };
    let cases = [
        ("x3 = x1, basis scan", &a, ScreenPolicy::BasisScan),
        (
            "-sqrt2 x1 + x3 + z = 0, basis scan",
            &b,
            ScreenPolicy::BasisScan,
        ),
        ("-sqrt2 x1 + x3 + z = 0, V = zeta", &b, zeta_aux),
    ];
    for (name, h, policy) in cases {
        let frame = build_null_frame(&s, h, &Vector::zeros(5), &policy, 1e-9)?;
        let dec = decompose_zeta(&s, &frame, 1e-9)?;
        let class = classify(&dec, 1e-9)?;
        println!("{name}");
        println!("  class           {}", class.describe());
        println!("  a, b            {:.6}, {:.6}", dec.a, dec.b);
        println!("  2ab - 1         {:.6}", dec.two_ab_minus_one());
        println!("  g(W, W)         {:.6}", dec.w_norm_sq);
        println!("  W'              {:?}", dec.w_prime.as_slice());
        if let Some(lambda) = dec.lambda {
            println!("  phi xi = lambda phi N, lambda = {lambda:.6}");
        }
        println!(
            "  max identity residual {:.1e}\n",
            dec.max_identity_residual()
        );
    }
    Ok(())
}
