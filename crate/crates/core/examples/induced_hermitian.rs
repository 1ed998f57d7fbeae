//! The induced `(phi, omega)` structure and modified metric on a proper
//! inascreen hyperplane, and the witnesses that rule out the naive
//! Hermitian and skew conditions.

use lightlike::classify::decompose_zeta;
use lightlike::hypersurface::{build_null_frame, Hypersurface, ScreenPolicy};
use lightlike::induced::{induced_phi_omega, nonexistence_witness, verify_hermitian};
use lightlike::linalg::Vector;
use lightlike::structure::AmbientStructure;

fn main() -> lightlike::Result<()> {
    let s = AmbientStructure::standard_model(2, &[-1, 1])?;
    let h = Hypersurface::affine(
        Vector::from_row_slice(&[-(2f64.sqrt()), 0.0, 1.0, 0.0, 1.0]),
        0.0,
        0.0,
    );
    let frame = build_null_frame(&s, &h, &Vector::zeros(5), &ScreenPolicy::BasisScan, 1e-9)?;
    let dec = decompose_zeta(&s, &frame, 1e-9)?;
    let ind = induced_phi_omega(&s, &frame, &dec, 1e-9)?;

    println!("phi in the tangent basis (xi, screen):\n{:.4}", ind.phi);
    println!("omega = {:?}", ind.omega.as_slice());
    println!("g~ =\n{:.4}", ind.g_tilde_matrix());

    let report = verify_hermitian(&ind, 1000, 7, 1e-9);
    println!(
        "g~(phi X, phi Y) = g~(X, Y)   max residual {:.1e}",
        report.hermitian
    );
    println!(
        "phi^2 = -I                    max residual {:.1e}",
        report.phi_squared
    );
    println!(
        "g~(X, xi) = g~(X, phi xi) = 0  max residual {:.1e}",
        report.degeneracy_xi.max(report.degeneracy_phi_xi)
    );

    if let Some(w) = nonexistence_witness(&ind, &dec, 1e-9)? {
        println!("omega(phi xi) = {:.6} (b = {:.6})", w.omega_phi_xi, w.b);
        println!(
            "g(xi, xi) - g(phi xi, phi xi) = {:.6} (b^2 = {:.6})",
            w.hermitian_defect_xi_xi,
            w.b * w.b
        );
    }
    Ok(())
}
