//! The evolved delta at a rational time, tested against smooth functions,
//! matches the finite comb Σ_j g(n,m;j) δ(x − 2πj/m).
//!
//!     cargo run --example talbot_comb

use zoll::circle::{comb_pair, default_filter, delta_state, TestFunction};
use zoll::gauss::comb_weights;
use zoll::RationalTime;

pub struct Row {
    pub rt: RationalTime,
    pub order: usize,
    pub error: f64,
}

pub fn run() -> Vec<Row> {
    let phi = TestFunction::random_real(16, 3);
    let mut rows = Vec::new();
    for (n, m) in [(1, 2), (1, 3), (1, 4), (3, 8)] {
        let rt = RationalTime::new(n, m).expect("nonzero m");
        let comb = comb_weights(rt);
        for order in [64, 256, 1024] {
            let eps = default_filter(order);
            let state = delta_state(order).expect("order >= 1").evolve(rt).filtered(eps);
            let error = (state.pair(&phi) - comb_pair(&comb, &phi.filtered(eps))).norm();
            rows.push(Row { rt, order, error });
        }
    }
    rows
}

fn main() {
    println!("{:>5} {:>6} {:>12}", "rt", "K", "|error|");
    for r in run() {
        println!("{:>5} {:>6} {:>12.3e}", r.rt, r.order, r.error);
    }
}
