//! Classifies seeded random lightlike hyperplanes in the 5- and 7-dimensional
//! models and checks that `b = 0` forces `a = 0` under the basis scan.

use std::collections::BTreeMap;

use lightlike::classify::{classify, decompose_zeta, verify_tangential_zeta};
use lightlike::hypersurface::{build_null_frame, ScreenPolicy};
use lightlike::sampling::hyperplane_corpus;
use lightlike::structure::AmbientStructure;

fn main() -> lightlike::Result<()> {
    for signs in [vec![-1, 1], vec![-1, 1, 1], vec![-1, -1, 1]] {
        let s = AmbientStructure::standard_model(signs.len(), &signs)?;
        let corpus = hyperplane_corpus(s.metric(), 100, 2024, 5);
        let mut counts = BTreeMap::new();
        let mut worst = 0.0_f64;
        for (h, p) in &corpus {
            let frame = build_null_frame(&s, h, p, &ScreenPolicy::BasisScan, 1e-9)?;
            let dec = decompose_zeta(&s, &frame, 1e-9)?;
            worst = worst.max(dec.max_identity_residual());
            *counts.entry(classify(&dec, 1e-9)?.describe()).or_insert(0) += 1;
        }
        let tangential = corpus
            .iter()
            .map(|(h, p)| verify_tangential_zeta(&s, h, std::slice::from_ref(p), 1e-9))
            .filter(|r| r.tangent_points > 0)
            .all(|r| r.passed);
        println!("signs {signs:?}: {counts:?}");
        println!("  max identity residual {worst:.1e}, b = 0 implies a = 0: {tangential}");
    }
    Ok(())
}
