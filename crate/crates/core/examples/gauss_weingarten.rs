//! Second fundamental forms of the null cone by finite differences, compared
//! with the closed form `B = -2 g`, and the step-halving error decay.

use lightlike::gauss_weingarten::{fd_convergence, second_fundamental, verify_gw_identities};
use lightlike::hypersurface::{Hypersurface, ScreenPolicy};
use lightlike::linalg::Vector;
use lightlike::structure::AmbientStructure;

fn main() -> lightlike::Result<()> {
    let s = AmbientStructure::standard_model(2, &[-1, 1])?;
    let cone = Hypersurface::null_cone(s.metric());
    let p = Vector::from_row_slice(&[1.0, 0.0, 0.0, 0.0, 1.0]);
    let policy = ScreenPolicy::BasisScan;

    let data = second_fundamental(&s, &cone, &p, &policy, 1e-5, 1e-9)?;
    let closed_form = s.metric().gram(&data.tangent_basis) * -2.0;
    println!("B =\n{:.6}", data.b);
    println!("max |B + 2 g| = {:.1e}", (&data.b - closed_form).amax());
    println!("tau = {:?}", data.tau.as_slice());
    let report = verify_gw_identities(&s, &data, 1e-5);
    println!("{:#?}", report.residuals);

    println!(
        "\n{:>10} {:>12} {:>12} {:>12}",
        "h", "shape_b", "shape_c", "nabla_g"
    );
    let steps = [1e-4, 5e-5, 2.5e-5];
    for (h, r) in steps
        .iter()
        .zip(fd_convergence(&s, &cone, &p, &policy, &steps, 1e-9)?)
    {
        let r = r.residuals;
        println!(
            "{h:>10.1e} {:>12.3e} {:>12.3e} {:>12.3e}",
            r.shape_b, r.shape_c, r.nabla_g
        );
    }
    Ok(())
}
