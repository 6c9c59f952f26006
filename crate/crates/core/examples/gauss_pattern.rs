//! Gauss sums at t = 2πn/m and the mod-4 vanishing pattern.
//!
//!     cargo run --example gauss_pattern

use zoll::gauss::{classify_pattern, comb_weights, times_up_to, verify_pattern};
use zoll::RationalTime;

pub struct Summary {
    pub times_checked: usize,
    pub mismatches: usize,
    pub worst_zero: f64,
}

pub fn run() -> Summary {
    for (n, m) in [(1, 4), (1, 3), (1, 2), (3, 8)] {
        let rt = RationalTime::new(n, m).expect("nonzero m");
        let comb = comb_weights(rt);
        let mags: Vec<String> = comb.weights.iter().map(|w| format!("{:.4}", w.value.norm())).collect();
        println!("{rt:>5}  {:<12} |g| = [{}]", classify_pattern(rt).tag(), mags.join(", "));
    }
    let mut summary = Summary {
        times_checked: 0,
        mismatches: 0,
        worst_zero: 0.0,
    };
    for rt in times_up_to(64) {
        let check = verify_pattern(rt);
        summary.times_checked += 1;
        summary.mismatches += usize::from(!check.matches);
        summary.worst_zero = summary.worst_zero.max(check.max_zero_magnitude);
    }
    summary
}

fn main() {
    let s = run();
    println!(
        "{} reduced times with m <= 64: {} mismatches, largest flagged zero {:.2e}",
        s.times_checked, s.mismatches, s.worst_zero
    );
}
