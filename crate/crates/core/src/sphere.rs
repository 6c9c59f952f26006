//! Zonal Schrödinger and half-wave evolution on the round sphere S^d.
//!
//! Degree-`k` harmonics have Laplace eigenvalue `-k(k+d-1)`, and
//! `k(k+d-1) + (d-1)²/4 = (k + (d-1)/2)²`, so on odd spheres the operator
//! `L = sqrt(-Δ + (d-1)²/4)` has integer spectrum `k + (d-1)/2`. Then
//! `exp(itΔ) = exp(it(d-1)²/4) exp(-itL²)` and the comb decomposition of
//! `exp(-itL²)` into half-wave propagators applies.
//!
//! States rotationally symmetric about a pole are stored by their
//! coefficients against the L²-normalized zonal harmonics
//! `Y_k(θ) = sqrt(dim_k / |S^d|) P̃_k(cos θ)`, with `P̃_k(1) = 1`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::circle::circular_distance;
use crate::error::{Error, Result};
use crate::gauss::{comb_weights, RationalTime};
use crate::phase::Time;
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub k: usize,
    /// `k(k+d-1)`, the eigenvalue of `-Δ`.
    pub laplace_eigenvalue: i64,
    /// `2k + d - 1`, twice the shifted eigenvalue `k + (d-1)/2`.
    pub shifted_twice: i64,
    /// Dimension of the degree-`k` harmonics.
    pub multiplicity: u128,
}

impl SpectrumEntry {
    pub fn shifted(&self) -> f64 {
        self.shifted_twice as f64 / 2.0
    }

    /// The shifted eigenvalue when it is an integer (odd `d`).
    pub fn shifted_integer(&self) -> Option<i64> {
        (self.shifted_twice % 2 == 0).then_some(self.shifted_twice / 2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereSpectrum {
    pub d: usize,
    pub entries: Vec<SpectrumEntry>,
}

fn check_dimension(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    Ok(())
}

fn require_odd(d: usize) -> Result<()> {
    check_dimension(d)?;
    if d.is_multiple_of(2) {
        return Err(Error::UnsupportedDimension(d));
    }
    Ok(())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(k+d, d) − C(k−2+d, d)`.
pub fn harmonic_dimension(d: usize, k: usize) -> u128 {
    let (d, k) = (d as u128, k as u128);
    binomial(k + d, d) - if k >= 2 { binomial(k - 2 + d, d) } else { 0 }
}

pub fn sphere_spectrum(d: usize, max_degree: usize) -> Result<SphereSpectrum> {
    check_dimension(d)?;
    let entries = (0..=max_degree)
        .map(|k| SpectrumEntry {
            k,
            laplace_eigenvalue: (k * (k + d - 1)) as i64,
            shifted_twice: (2 * k + d - 1) as i64,
            multiplicity: harmonic_dimension(d, k),
        })
        .collect();
    Ok(SphereSpectrum { d, entries })
}

/// Surface measure `|S^d|`, from `|S^0| = 2`, `|S^1| = 2π`, `|S^d| = 2π|S^{d-2}|/(d-1)`.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => 2.0,
        1 => TAU,
        _ => TAU * sphere_area(d - 2) / (d - 1) as f64,
    }
}

/// `Y_0(x), …, Y_K(x)` at `x = cos θ`, by the three-term recurrence for the
/// Legendre polynomials of dimension `d + 1`.
pub fn zonal_harmonics(d: usize, max_degree: usize, x: f64) -> Vec<f64> {
    let n = (d + 1) as f64;
    let mut p = Vec::with_capacity(max_degree + 1);
    p.push(1.0);
    if max_degree >= 1 {
        p.push(x);
    }
    for k in 1..max_degree {
        let kf = k as f64;
        let next = ((2.0 * kf + n - 2.0) * x * p[k] - kf * p[k - 1]) / (kf + n - 2.0);
        p.push(next);
    }
    let area = sphere_area(d);
    p.iter()
        .enumerate()
        .map(|(k, v)| v * (harmonic_dimension(d, k) as f64 / area).sqrt())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// `exp(itΔ)`: phase `exp(-itk(k+d-1))`.
    Laplace,
    /// `exp(-itL)`: phase `exp(-it(k+(d-1)/2))`, odd `d` only.
    HalfWave,
}

/// Coefficients `a_k` of a zonal state against `Y_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonalState {
    d: usize,
    coeffs: Vec<Complex64>,
}

impl ZonalState {
    pub fn new(d: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_dimension(d)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidOrder { min: 1, got: 0 });
        }
        Ok(Self { d, coeffs })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn evolve(&self, t: impl Into<Time>, generator: Generator, filter_eps: f64) -> Result<Self> {
        let t = t.into();
        let d = self.d as i64;
        if generator == Generator::HalfWave {
            require_odd(self.d)?;
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let k = k as i64;
                let phase = match generator {
                    Generator::Laplace => t.phase(k * (k + d - 1)),
                    Generator::HalfWave => t.phase(k + (d - 1) / 2),
                };
                a * phase * (-filter_eps * (k * k) as f64).exp()
            })
            .collect();
        Ok(Self { d: self.d, coeffs })
    }

    /// `u(θ) = Σ_k a_k Y_k(cos θ)`.
    pub fn value(&self, theta: f64) -> Complex64 {
        zonal_harmonics(self.d, self.max_degree(), theta.cos())
            .iter()
            .zip(&self.coeffs)
            .map(|(y, a)| a * y)
            .sum()
    }

    pub fn profile(&self, thetas: &[f64]) -> Vec<Complex64> {
        thetas.iter().map(|&t| self.value(t)).collect()
    }

    /// `Σ_k |a_k|²`, the squared L² norm on the sphere.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `∫ u dμ = a_0 |S^d|^{1/2}`.
    pub fn integral(&self) -> Complex64 {
        self.coeffs[0] * sphere_area(self.d).sqrt()
    }

    /// L² mass in the polar shell `a ≤ θ ≤ b`, by Gauss–Legendre in `θ`.
    pub fn shell_mass(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let bandwidth = (2 * self.max_degree() + self.d) as f64;
        let nodes = (bandwidth * (b - a) / 2.0).ceil() as usize + 24;
        let rule = GaussLegendre::new(nodes);
        let shell = sphere_area(self.d - 1);
        let power = (self.d - 1) as i32;
        shell
            * rule.integrate(a, b, |theta| {
                self.value(theta).norm_sqr() * theta.sin().powi(power)
            })
    }
}

/// The delta at the pole truncated to degree `K`: `a_k = Y_k(pole) = sqrt(dim_k/|S^d|)`.
pub fn zonal_delta(d: usize, max_degree: usize) -> Result<ZonalState> {
    check_dimension(d)?;
    let area = sphere_area(d);
    let coeffs = (0..=max_degree)
        .map(|k| Complex64::new((harmonic_dimension(d, k) as f64 / area).sqrt(), 0.0))
        .collect();
    Ok(ZonalState { d, coeffs })
}

/// `exp(it(d-1)²/4)`, the factor with `exp(itΔ) = exp(it(d-1)²/4) exp(-itL²)`.
pub fn curvature_phase(d: usize, t: impl Into<Time>) -> Complex64 {
    let q = ((d - 1) * (d - 1)) as i64;
    t.into().divided(4).conj_phase(q)
}

/// Largest eigenvalue-level defect of `exp(-itk(k+d-1)) = exp(it(d-1)²/4) exp(-itλ²)`
/// over `k ≤ K`, with `λ = k + (d-1)/2`.
pub fn phase_split_residual(d: usize, t: impl Into<Time>, max_degree: usize) -> Result<f64> {
    require_odd(d)?;
    let t = t.into();
    let global = curvature_phase(d, t);
    let d = d as i64;
    Ok((0..=max_degree as i64)
        .map(|k| {
            let lambda = k + (d - 1) / 2;
            (t.phase(k * (k + d - 1)) - global * t.phase(lambda * lambda)).norm()
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereRevival {
    /// `max_k |exp(-2πi(n/m)λ²) − Σ_j g(n,m;j) exp(-2πi(j/m)λ)|`.
    pub residual: f64,
    /// `exp(it(d-1)²/4)` at `t = 2πn/m`.
    pub curvature_phase: Complex64,
}

pub fn sphere_revival_residual(d: usize, rt: RationalTime, max_degree: usize) -> Result<SphereRevival> {
    require_odd(d)?;
    let comb = comb_weights(rt);
    let m = rt.denominator();
    let half_waves: Vec<Time> = (0..m)
        .map(|j| Time::Rational(RationalTime::new(j, m).expect("m > 0")))
        .collect();
    let schrodinger = Time::Rational(rt);
    let residual = (0..=max_degree as i64)
        .map(|k| {
            let lambda = k + (d as i64 - 1) / 2;
            let lhs = schrodinger.phase(lambda * lambda);
            let rhs: Complex64 = comb
                .weights
                .iter()
                .map(|w| w.value * half_waves[w.j as usize].phase(lambda))
                .sum();
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max);
    Ok(SphereRevival {
        residual,
        curvature_phase: curvature_phase(d, rt),
    })
}

/// Geodesic distances `2πj/m` folded into `[0, π]` over the nonzero comb weights, deduplicated.
pub fn predicted_distances(rt: RationalTime) -> Vec<f64> {
    let comb = comb_weights(rt);
    let mut out: Vec<f64> = comb
        .support()
        .into_iter()
        .map(|j| circular_distance(comb.position(j), 0.0))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HuygensReport {
    pub predicted: Vec<f64>,
    /// Fraction of L² mass within `arc_halfwidth` of a predicted distance.
    pub fraction: f64,
    pub total_mass: f64,
}

/// Merged `[δ − h, δ + h] ∩ [0, π]` arcs around each distance.
fn arcs(distances: &[f64], halfwidth: f64) -> Vec<(f64, f64)> {
    let mut raw: Vec<(f64, f64)> = distances
        .iter()
        .map(|d| ((d - halfwidth).max(0.0), (d + halfwidth).min(PI)))
        .collect();
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in raw {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

/// Evolves the pole delta by `exp(i(2πn/m)Δ)` with a Gaussian filter and
/// measures how much of its mass sits near the predicted distance spheres.
pub fn huygens_concentration(
    d: usize,
    rt: RationalTime,
    max_degree: usize,
    filter_eps: f64,
    arc_halfwidth: f64,
) -> Result<HuygensReport> {
    require_odd(d)?;
    if arc_halfwidth.is_nan() || arc_halfwidth <= 0.0 {
        return Err(Error::InvalidParameter("arc halfwidth must be positive".into()));
    }
    let state = zonal_delta(d, max_degree)?.evolve(rt, Generator::Laplace, filter_eps)?;
    let predicted = predicted_distances(rt);
    let inside_arcs = arcs(&predicted, arc_halfwidth);

    let mut cuts = vec![0.0, PI];
    for &(lo, hi) in &inside_arcs {
        cuts.push(lo);
        cuts.push(hi);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let (mut inside, mut total) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let mass = state.shell_mass(w[0], w[1]);
        let mid = 0.5 * (w[0] + w[1]);
        if inside_arcs.iter().any(|&(lo, hi)| lo <= mid && mid <= hi) {
            inside += mass;
        }
        total += mass;
    }
    Ok(HuygensReport {
        predicted,
        fraction: if total > 0.0 { inside / total } else { 0.0 },
        total_mass: total,
    })
}
