//! Builds the null frame of two lightlike hyperplanes in the 5-dimensional
//! model and prints its pieces.

use lightlike::hypersurface::{
    build_null_frame, check_dprime_invariance, Hypersurface, ScreenPolicy,
};
use lightlike::linalg::Vector;
use lightlike::structure::AmbientStructure;

fn show(name: &str, v: &Vector) {
    let entries: Vec<String> = v.iter().map(|x| format!("{x:+.6}")).collect();
    println!("  {name:<8} ({})", entries.join(", "));
}

fn main() -> lightlike::Result<()> {
    let s = AmbientStructure::standard_model(2, &[-1, 1])?;
    let r2 = 2f64.sqrt();
    let planes = [
        ("x3 - x1 = 0", [-1.0, 0.0, 1.0, 0.0, 0.0]),
        ("-sqrt2 x1 + x3 + z = 0", [-r2, 0.0, 1.0, 0.0, 1.0]),
    ];
    for (name, covector) in planes {
        let h = Hypersurface::affine(Vector::from_row_slice(&covector), 0.0, 0.0);
        let frame = build_null_frame(&s, &h, &Vector::zeros(5), &ScreenPolicy::BasisScan, 1e-9)?;
        println!("{name}");
        show("xi", &frame.xi);
        show("N", &frame.n);
        show("phi xi", &frame.phi_xi);
        show("phi N", &frame.phi_n);
        for (k, v) in frame.screen_basis.iter().enumerate() {
            show(&format!("S[{k}]"), v);
        }
        for (k, v) in frame.dprime_basis.iter().enumerate() {
            show(&format!("D'[{k}]"), v);
        }
        println!("  a = {:.6}, b = {:.6}", frame.a, frame.b);
        println!(
            "  max constraint residual {:.1e}",
            frame.residuals(s.metric(), 1e-9).max()
        );
        let inv = check_dprime_invariance(&s, &frame, 1e-9);
        println!("  phi D' inside D': {}\n", inv.invariant);
    }
    Ok(())
}
