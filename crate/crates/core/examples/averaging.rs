//! Residue-class projections from the half-wave group, and one averaging step
//! for a perturbation Q: B1 commutes with L and B1 − Q = [iT, L].
//!
//!     cargo run --example averaging

use zoll::operator::{
    average_perturbation, block_compression, commutator, homological_solve, make_operator, operator_norm,
    projection_recovery, random_hermitian, random_spectrum,
};

pub struct Case {
    pub projections: f64,
    pub compression: f64,
    pub commutator: f64,
    pub homological: f64,
    pub rejected: f64,
    pub sign: i8,
}

pub fn case(seed: u64) -> Case {
    let op = make_operator(random_spectrum(10, 12, seed), seed).expect("dim >= 1");
    let mut projections = 0.0f64;
    for m in 1..=8 {
        let rec = projection_recovery(&op, m).expect("m >= 1");
        projections = projections
            .max(rec.residual)
            .max(rec.idempotency_defect())
            .max(rec.orthogonality_defect())
            .max(rec.completeness_defect());
    }
    let q = random_hermitian(op.dim(), seed + 1000);
    let nodes = (2 * op.spectral_diameter() + 1) as usize;
    let b1 = average_perturbation(&op, &q, nodes).expect("valid perturbation");
    let exact = block_compression(&op, &q).expect("valid perturbation");
    let sol = homological_solve(&op, &q).expect("valid perturbation");
    Case {
        projections,
        compression: operator_norm(&(&b1 - &exact)),
        commutator: operator_norm(&commutator(&op.matrix(), &b1)),
        homological: sol.residual,
        rejected: sol.rejected_residual,
        sign: sol.sign,
    }
}

pub fn run() -> Vec<Case> {
    (0..20).map(case).collect()
}

fn main() {
    for (seed, c) in run().iter().enumerate().take(5) {
        println!(
            "seed {seed}: projections {:.1e}  |B1 - exact| {:.1e}  |[L,B1]| {:.1e}  homological {:.1e} (sign {:+}, other sign {:.1})",
            c.projections, c.compression, c.commutator, c.homological, c.sign, c.rejected
        );
    }
}
