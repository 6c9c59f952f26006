//! exp(-itL²) as a finite sum of half-wave propagators at t = 2πn/m, for a
//! random Hermitian matrix with integer spectrum.
//!
//!     cargo run --release --example operator_revival

use zoll::gauss::times_up_to;
use zoll::operator::{make_operator, random_spectrum, revival_residual, unitarity_defect};

pub struct Summary {
    pub operators: usize,
    pub times: usize,
    pub worst_relative: f64,
}

pub fn run(operators: u64, dim: usize, m_max: i64) -> Summary {
    let mut worst_relative = 0.0f64;
    let mut times = 0;
    for seed in 0..operators {
        let op = make_operator(random_spectrum(dim, 50, seed), seed).expect("dim >= 1");
        assert!(unitarity_defect(op.basis()) < 1e-12);
        for rt in times_up_to(m_max) {
            worst_relative = worst_relative.max(revival_residual(&op, rt) / dim as f64);
            times += 1;
        }
    }
    Summary {
        operators: operators as usize,
        times,
        worst_relative,
    }
}

fn main() {
    let op = make_operator(random_spectrum(6, 50, 1), 1).expect("dim >= 1");
    println!("spectrum {:?}", op.eigenvalues());
    for rt in times_up_to(4) {
        println!("  t = 2π·{rt:<4} residual {:.2e}", revival_residual(&op, rt));
    }
    let s = run(10, 24, 16);
    println!(
        "{} operators, {} (operator, time) pairs: worst residual/dim {:.2e}",
        s.operators, s.times, s.worst_relative
    );
}
