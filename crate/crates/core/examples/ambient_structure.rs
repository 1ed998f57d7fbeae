//! Checks the almost contact metric axioms on every model up to dimension 7.

use lightlike::structure::AmbientStructure;

fn sign_patterns(n: usize) -> Vec<Vec<i8>> {
    (0..1u32 << n)
        .map(|mask| {
            (0..n)
                .map(|k| if mask >> k & 1 == 1 { 1 } else { -1 })
                .collect::<Vec<i8>>()
        })
        .filter(|s| s.contains(&-1))
        .collect()
}

fn main() {
    println!(
        "{:<12} {:>4} {:>12} {:>8}",
        "signs", "dim", "max resid", "passed"
    );
    for n in 1..=3 {
        for signs in sign_patterns(n) {
            let s = AmbientStructure::standard_model(n, &signs).expect("valid signature");
            let report = s.validate(1000, 42, 1e-12);
            println!(
                "{:<12} {:>4} {:>12.3e} {:>8}",
                format!("{signs:?}"),
                s.dim(),
                report.residuals.max(),
                report.passed
            );
        }
    }

    match AmbientStructure::standard_model(2, &[1, 1]) {
        Ok(_) => println!("(+1, +1) unexpectedly accepted"),
        Err(e) => println!("(+1, +1) rejected: {e}"),
    }
}
