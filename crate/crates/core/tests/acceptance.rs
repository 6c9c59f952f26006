//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Runs without the
//! libtest harness so the lines reach the terminal uncaptured.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zoll::circle::{check_reflection_symmetry, check_translation_symmetry, comb_pair, delta_state, TestFunction};
use zoll::gauss::{comb_weights, gauss_sum, times_up_to, verify_pattern};
use zoll::operator::{
    average_perturbation, block_compression, commutator, functional_calculus_direct, functional_calculus_quadrature,
    homological_solve, make_operator, operator_norm, projection_recovery, random_hermitian, random_spectrum,
    regularized_calculus, revival_residual, IntegerSpectrumOperator, SpectralFunction,
};
use zoll::singularity::{calibrate, center_grid, scan, Verdict, DEFAULT_RELATIVE_THRESHOLD, DEFAULT_WINDOW_WIDTH};
use zoll::sphere::{
    curvature_phase, huygens_concentration, phase_split_residual, predicted_distances, sphere_revival_residual,
    zonal_delta, Generator,
};
use zoll::{Error, RationalTime, Time};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rt(n: i64, m: i64) -> RationalTime {
    RationalTime::new(n, m).unwrap()
}

fn ac1() -> Outcome {
    let (mut times, mut mismatches, mut worst_zero, mut magnitude_err) = (0, 0, 0.0f64, 0.0f64);
    for rt in times_up_to(64) {
        let check = verify_pattern(rt);
        times += 1;
        mismatches += usize::from(!check.matches);
        worst_zero = worst_zero.max(check.max_zero_magnitude);
        // closed form: |g| = 1/√m for odd m, √(2/m) on the surviving parity for even m
        let m = rt.denominator();
        for w in comb_weights(rt).weights {
            let exact = match m % 4 {
                1 | 3 => 1.0 / (m as f64).sqrt(),
                2 if w.j % 2 == 1 => (2.0 / m as f64).sqrt(),
                0 if w.j % 2 == 0 => (2.0 / m as f64).sqrt(),
                _ => 0.0,
            };
            magnitude_err = magnitude_err.max((w.value.norm() - exact).abs());
        }
    }
    outcome(
        mismatches == 0 && worst_zero < 1e-10 && magnitude_err < 1e-12,
        format!(
            "{times} coprime times m<=64: {mismatches} mismatches, max flagged |g| {worst_zero:.1e}, closed-form |g| error {magnitude_err:.1e}"
        ),
    )
}

fn ac2() -> Outcome {
    // naive trig on both sides as the oracle
    let mut worst = 0.0f64;
    for rt in times_up_to(32) {
        let (n, m) = (rt.numerator() as f64, rt.denominator());
        let g: Vec<Complex64> = (0..m).map(|j| gauss_sum(rt, j).unwrap()).collect();
        for k in -200i64..=200 {
            let lhs = Complex64::from_polar(1.0, -TAU * n * ((k * k) % m) as f64 / m as f64);
            let rhs: Complex64 = g
                .iter()
                .enumerate()
                .map(|(j, gj)| gj * Complex64::from_polar(1.0, -TAU * ((j as i64 * k).rem_euclid(m)) as f64 / m as f64))
                .sum();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    outcome(worst < 1e-11, format!("max residual over |k|<=200, m<=32: {worst:.2e} (< 1e-11)"))
}

fn random_operator(rng: &mut ChaCha8Rng, max_dim: usize, radius: i64) -> IntegerSpectrumOperator {
    let dim = rng.random_range(1..=max_dim);
    let seed = rng.random();
    make_operator(random_spectrum(dim, radius, seed), seed).unwrap()
}

fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.clone().exp()
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for _ in 0..50 {
        let op = random_operator(&mut rng, 32, 50);
        for rt in times_up_to(16) {
            worst = worst.max(revival_residual(&op, rt) / op.dim() as f64);
            pairs += 1;
        }
    }
    // Padé exponentials of the assembled matrix, no eigenbasis
    let mut oracle = 0.0f64;
    for seed in 0..5u64 {
        let op = make_operator(random_spectrum(8, 6, seed), seed).unwrap();
        let l = op.matrix();
        let l2 = &l * &l;
        for rt in times_up_to(6) {
            let t = Complex64::new(0.0, -rt.to_f64());
            let lhs = expm(&(&l2 * t));
            let m = rt.denominator();
            let mut rhs = DMatrix::<Complex64>::zeros(op.dim(), op.dim());
            for j in 0..m {
                let s = Complex64::new(0.0, -TAU * j as f64 / m as f64);
                rhs += expm(&(&l * s)) * gauss_sum(rt, j).unwrap();
            }
            oracle = oracle.max(operator_norm(&(lhs - rhs)));
        }
    }
    outcome(
        worst < 1e-10 && oracle < 1e-8,
        format!(
            "50 operators x m<=16 ({pairs} pairs): max residual/dim {worst:.2e} (< 1e-10); matrix-exponential oracle {oracle:.1e}"
        ),
    )
}

fn ac4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut quad, mut reg) = (0.0f64, 0.0f64);
    let mut detected = 0;
    for case in 0..20 {
        let op = random_operator(&mut rng, 24, 30);
        let radius = op.spectral_radius() + rng.random_range(0..5);
        let t = Time::Real(rng.random_range(0.0..TAU));
        let f = SpectralFunction::from_fn(radius, |k| t.phase(k * k + case) * (1.0 + 0.1 * k as f64));
        let nodes = (2 * (radius + op.spectral_radius()) + 1) as usize;
        let direct = functional_calculus_direct(&op, &f).unwrap();
        quad = quad.max(operator_norm(&(&direct - functional_calculus_quadrature(&op, &f, nodes).unwrap())));
        reg = reg.max(operator_norm(&(&direct - regularized_calculus(&op, &f, 2.0, nodes).unwrap())));
        let q_err = matches!(
            functional_calculus_quadrature(&op, &f, nodes - 1),
            Err(Error::InsufficientNodes { .. })
        );
        let r_err = matches!(
            regularized_calculus(&op, &f, 2.0, nodes - 1),
            Err(Error::InsufficientNodes { .. })
        );
        detected += usize::from(q_err && r_err);
    }
    outcome(
        quad < 1e-10 && reg < 1e-10 && detected == 20,
        format!("20 cases: quadrature {quad:.2e}, regularized N=2 {reg:.2e}; node-bound violations detected {detected}/20"),
    )
}

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut idem, mut orth, mut comp, mut resid) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let op = random_operator(&mut rng, 24, 40);
        for m in 1..=8 {
            let rec = projection_recovery(&op, m).unwrap();
            idem = idem.max(rec.idempotency_defect());
            orth = orth.max(rec.orthogonality_defect());
            comp = comp.max(rec.completeness_defect());
            resid = resid.max(rec.residual);
        }
    }
    outcome(
        idem.max(orth).max(comp).max(resid) < 1e-10,
        format!("10 operators x m<=8: idempotent {idem:.1e}, orthogonal {orth:.1e}, complete {comp:.1e}, vs spectral {resid:.1e}"),
    )
}

fn ac6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut compress, mut comm, mut homol, mut rejected) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    let mut signs = Vec::new();
    for _ in 0..20 {
        let op = random_operator(&mut rng, 20, 15);
        let q = random_hermitian(op.dim(), rng.random());
        let nodes = (2 * op.spectral_diameter() + 1) as usize;
        let b1 = average_perturbation(&op, &q, nodes).unwrap();
        compress = compress.max(operator_norm(&(&b1 - block_compression(&op, &q).unwrap())));
        comm = comm.max(operator_norm(&commutator(&op.matrix(), &b1)));
        let sol = homological_solve(&op, &q).unwrap();
        homol = homol.max(sol.residual);
        if op.eigenvalues().windows(2).any(|w| w[0] != w[1]) {
            rejected = rejected.min(sol.rejected_residual);
        }
        signs.push(sol.sign);
    }
    signs.dedup();
    outcome(
        compress < 1e-10 && comm < 1e-10 && homol < 1e-10,
        format!(
            "20 cases: |B1 - compression| {compress:.1e}, |[L,B1]| {comm:.1e}, homological {homol:.1e} with sign {signs:?} (other sign >= {rejected:.1e})"
        ),
    )
}

fn ac7() -> Outcome {
    let orders = [64usize, 256, 1024];
    let times = [rt(1, 2), rt(1, 3), rt(1, 4), rt(3, 8)];
    let (mut at_max, mut monotone) = (0.0f64, true);
    let mut unfiltered = 0.0f64;
    for seed in 0..5 {
        let phi = TestFunction::random_real(16, seed);
        for &rt in &times {
            let comb = comb_weights(rt);
            let errs: Vec<f64> = orders
                .iter()
                .map(|&k| {
                    let eps = 1.0 / (k * k) as f64;
                    let state = delta_state(k).unwrap().evolve(rt);
                    unfiltered = unfiltered.max((state.pair(&phi) - comb_pair(&comb, &phi)).norm());
                    (state.filtered(eps).pair(&phi) - comb_pair(&comb, &phi.filtered(eps))).norm()
                })
                .collect();
            at_max = at_max.max(errs[2]);
            // identity is exact once K >= 16, so the errors are round-off: allow a 1e-13 floor
            monotone &= errs.windows(2).all(|w| w[1] <= 1.1 * w[0] + 1e-13);
        }
    }
    outcome(
        at_max < 1e-6 && monotone,
        format!(
            "4 times x 5 test functions: filtered error at K=1024 {at_max:.1e} (< 1e-6), monotone within 10% + 1e-13 floor: {monotone}; unfiltered {unfiltered:.1e}"
        ),
    )
}

fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut translation, mut reflection) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let t = rng.random_range(-1000.0..1000.0);
        translation = translation.max(check_translation_symmetry(t, 128).unwrap());
        reflection = reflection.max(check_reflection_symmetry(t, 128).unwrap());
    }
    outcome(
        translation < 1e-12 && reflection < 1e-12,
        format!("100 random t in [-1000, 1000], K=128: translation {translation:.1e}, reflection {reflection:.1e}"),
    )
}

fn ac9() -> Outcome {
    let mut worst = 0.0f64;
    for rt in times_up_to(16) {
        worst = worst.max(sphere_revival_residual(3, rt, 512).unwrap().residual);
    }
    let delta = zonal_delta(3, 512).unwrap();
    let full = rt(1, 1);
    let evolved = delta.evolve(full, Generator::Laplace, 0.0).unwrap();
    let global = curvature_phase(3, full);
    let full_err = evolved
        .coeffs()
        .iter()
        .zip(delta.coeffs())
        .map(|(a, c)| (a - global * c).norm() / c.norm())
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let split = (0..20)
        .map(|_| phase_split_residual(3, rng.random_range(0.0..TAU), 512).unwrap())
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-12 && full_err < 1e-12 && split < 1e-9,
        format!(
            "d=3 K=512 m<=16: revival {worst:.1e}; full revival at 2pi {full_err:.1e}; exp(itΔ) = phase·exp(-itL²) split {split:.1e}"
        ),
    )
}

fn ac10() -> Outcome {
    let fractions: Vec<f64> = [64usize, 128, 256]
        .iter()
        .map(|&k| {
            let k_f = k as f64;
            huygens_concentration(3, rt(1, 2), k, 1.0 / (k_f * k_f), 10.0 / k_f)
                .unwrap()
                .fraction
        })
        .collect();
    let nondecreasing = fractions.windows(2).all(|w| w[1] >= w[0] - 0.05);
    let predicted = predicted_distances(rt(1, 4));
    let set_ok = predicted.len() == 2 && predicted[0].abs() < 1e-15 && (predicted[1] - PI).abs() < 1e-15;
    outcome(
        fractions[2] >= 0.9 && nondecreasing && set_ok,
        format!(
            "rt=1/2 mass fraction at K=64,128,256: {:.4}, {:.4}, {:.4} (>= 0.9, slack 0.05); rt=1/4 distances {predicted:?}",
            fractions[0], fractions[1], fractions[2]
        ),
    )
}

fn ac11() -> Outcome {
    let orders = [256usize, 1024, 4096];
    let cal = calibrate(DEFAULT_WINDOW_WIDTH, &orders, DEFAULT_RELATIVE_THRESHOLD).unwrap();
    let grid = center_grid(16);
    let step = TAU / 16.0;
    let at_pi = scan(rt(1, 2), &grid, DEFAULT_WINDOW_WIDTH, &orders, cal.threshold).unwrap();
    let flagged: Vec<f64> = at_pi
        .iter()
        .filter(|p| p.score.verdict == Verdict::Singular)
        .map(|p| p.center)
        .collect();
    let local = !flagged.is_empty() && flagged.iter().all(|&c| (c - PI).abs() <= step + 1e-12);
    let golden = scan(TAU * 0.618_033_988_749, &grid, DEFAULT_WINDOW_WIDTH, &orders, cal.threshold).unwrap();
    let singular = golden.iter().filter(|p| p.score.verdict == Verdict::Singular).count();
    outcome(
        local && singular >= 14,
        format!(
            "threshold {:.2e}: t=pi flags {:?}; t=2pi*0.618.. flags {singular}/16 (>= 14)",
            cal.threshold,
            flagged.iter().map(|c| format!("{c:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 11] = [
        ("AC1", "gauss vanishing pattern", ac1, Some(Duration::from_secs(1))),
        ("AC2", "scalar revival identity", ac2, Some(Duration::from_secs(1))),
        ("AC3", "operator revival", ac3, Some(Duration::from_secs(30))),
        ("AC4", "functional calculus", ac4, Some(Duration::from_secs(5))),
        ("AC5", "projection recovery", ac5, None),
        ("AC6", "averaging and homological equation", ac6, None),
        ("AC7", "circle comb pairing", ac7, None),
        ("AC8", "circle symmetries", ac8, None),
        ("AC9", "sphere revival", ac9, None),
        ("AC10", "huygens focusing", ac10, None),
        ("AC11", "singular support dichotomy", ac11, Some(Duration::from_secs(60))),
    ];
    let mut failures = 0;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let pass = result.pass && in_time;
        failures += usize::from(!pass);
        let limit = budget.map_or(String::new(), |b| format!(" < {}s", b.as_secs()));
        println!(
            "[{}] {id} {name}: {} ({:.2}s{limit})",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
