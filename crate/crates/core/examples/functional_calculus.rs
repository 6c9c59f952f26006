//! f(L) three ways: spectral projections, a trapezoid rule over the half-wave
//! group, and the same rule with a ⟨L⟩^{-2} regularization.
//!
//!     cargo run --example functional_calculus

use zoll::operator::{
    functional_calculus_direct, functional_calculus_quadrature, make_operator, operator_norm, random_spectrum,
    regularized_calculus, SpectralFunction,
};
use zoll::{Error, Time};

pub struct Case {
    pub quadrature: f64,
    pub regularized: f64,
    pub too_few_nodes_rejected: bool,
}

pub fn case(seed: u64) -> Case {
    let op = make_operator(random_spectrum(12, 15, seed), seed).expect("dim >= 1");
    let radius = op.spectral_radius() + 2;
    let t = Time::Real(0.3 + seed as f64);
    let f = SpectralFunction::from_fn(radius, |k| t.phase(k * k) / (1.0 + (k * k) as f64));
    let nodes = (2 * (radius + op.spectral_radius()) + 1) as usize;
    let direct = functional_calculus_direct(&op, &f).expect("window covers spectrum");
    let quad = functional_calculus_quadrature(&op, &f, nodes).expect("enough nodes");
    let reg = regularized_calculus(&op, &f, 2.0, nodes).expect("enough nodes");
    let too_few_nodes_rejected = matches!(
        functional_calculus_quadrature(&op, &f, nodes - 1),
        Err(Error::InsufficientNodes { .. })
    );
    Case {
        quadrature: operator_norm(&(&direct - &quad)),
        regularized: operator_norm(&(&direct - &reg)),
        too_few_nodes_rejected,
    }
}

pub fn run() -> Vec<Case> {
    (0..20).map(case).collect()
}

fn main() {
    for (seed, c) in run().iter().enumerate().take(5) {
        println!(
            "seed {seed}: quadrature {:.2e}, regularized {:.2e}, node bound enforced: {}",
            c.quadrature, c.regularized, c.too_few_nodes_rejected
        );
    }
}
