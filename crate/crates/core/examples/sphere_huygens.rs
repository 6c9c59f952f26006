//! The pole delta on S³ under exp(itΔ) at t = 2πn/m concentrates on the
//! spheres at geodesic distance 2πj/m.
//!
//!     cargo run --release --example sphere_huygens

use zoll::sphere::{huygens_concentration, sphere_revival_residual, sphere_spectrum};
use zoll::RationalTime;

pub fn fraction(n: i64, m: i64, order: usize) -> f64 {
    let rt = RationalTime::new(n, m).expect("nonzero m");
    let k = order as f64;
    huygens_concentration(3, rt, order, 1.0 / (k * k), 10.0 / k)
        .expect("odd d")
        .fraction
}

fn main() {
    for e in &sphere_spectrum(3, 3).expect("d >= 1").entries {
        println!(
            "k = {}: -Δ eigenvalue {}, multiplicity {}, shifted root {}",
            e.k,
            e.laplace_eigenvalue,
            e.multiplicity,
            e.shifted()
        );
    }
    let rt = RationalTime::new(1, 4).expect("nonzero m");
    let rev = sphere_revival_residual(3, rt, 512).expect("odd d");
    println!("revival residual at 2π·{rt}: {:.2e}", rev.residual);
    for (n, m) in [(1, 2), (1, 3), (1, 4)] {
        let rt = RationalTime::new(n, m).expect("nonzero m");
        let report = huygens_concentration(3, rt, 256, 1.0 / 65536.0, 10.0 / 256.0).expect("odd d");
        let fractions: Vec<String> = [64, 128, 256].iter().map(|&k| format!("{:.4}", fraction(n, m, k))).collect();
        println!(
            "t = 2π·{rt}: distances {:?}, mass fraction at K = 64,128,256: {}",
            report.predicted,
            fractions.join(", ")
        );
    }
}
