//! Position-space singularity indicators for the evolved delta on S¹.
//!
//! Around a center `c` the truncated `G(t, ·)` is multiplied by the bump
//! `w(x) = cos^{2p}((x − c)/2)`, a trigonometric polynomial of degree `p`, so
//! the Fourier coefficients of `wG` are a finite convolution. The partial
//! local `H^{1/2}` norm `Σ_{|k| ≤ K−p} ⟨k⟩ |(wG)^(k)|²` keeps only the modes
//! that the truncation at `K` leaves exact; it stays bounded where `G` is
//! smooth and grows like `K²` near a point mass.
//!
//! Floating-point times are rational, so the irrational-time statement is
//! only a finite-`K` trend here, never a decision.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::circle::{delta_state, FourierState};
use crate::error::{Error, Result};
use crate::operator::bracket;
use crate::phase::Time;

/// Full width at half maximum of the default window.
pub const DEFAULT_WINDOW_WIDTH: f64 = PI / 8.0;

/// Default verdict threshold as a fraction of the slope at the `t = 0` delta.
pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 1e-2;

/// Raised-cosine bump `cos^{2p}((x − c)/2)` with full width at half maximum `width`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    center: f64,
    width: f64,
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl Window {
    pub fn raised_cosine(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width < PI) {
            return Err(Error::InvalidWindow(format!("width {width} outside (0, π)")));
        }
        let degree = (0.5f64.ln() / (2.0 * (width / 4.0).cos().ln())).ceil().max(1.0) as usize;
        let p = degree as i64;
        // b_j = C(2p, p+j) / 4^p, starting from C(2p, p)/4^p = Π (2i−1)/(2i)
        let mut mags = Vec::with_capacity(degree + 1);
        let mut b = (1..=degree).fold(1.0, |acc, i| acc * (2 * i - 1) as f64 / (2 * i) as f64);
        for j in 0..=p {
            mags.push(b);
            b *= (p - j) as f64 / (p + j + 1) as f64;
        }
        let at = Time::Real(center);
        let coeffs = (-p..=p)
            .map(|j| at.phase(j) * mags[j.unsigned_abs() as usize])
            .collect();
        Ok(Self {
            center,
            width,
            degree,
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// `ŵ(j)` for `|j| ≤ p`.
    pub fn coeff(&self, j: i64) -> Complex64 {
        let p = self.degree as i64;
        if j.abs() > p {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(j + p) as usize]
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((x - self.center) / 2.0).cos().powi(2 * self.degree as i32)
    }

    /// Coefficients of `w·u` on `|k| ≤ K − p`, exact for the series truncated at `K`.
    fn multiply(&self, state: &FourierState) -> Vec<(i64, Complex64)> {
        let p = self.degree as i64;
        let inner = state.order() as i64 - p;
        if inner < 0 {
            return Vec::new();
        }
        (-inner..=inner)
            .map(|k| {
                let v = (-p..=p).map(|j| self.coeff(j) * state.coeff(k - j)).sum();
                (k, v)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicatorCurve {
    pub center: f64,
    pub window_width: f64,
    pub orders: Vec<usize>,
    pub values: Vec<f64>,
}

fn check_orders(orders: &[usize]) -> Result<()> {
    if orders.is_empty() {
        return Err(Error::TooFewPoints { min: 1, got: 0 });
    }
    if orders[0] == 0 || orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "truncation orders must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Indicator from an already evolved state whose order is at least `max(orders)`.
pub fn indicator_for_state(
    state: &FourierState,
    window: &Window,
    orders: &[usize],
) -> Result<IndicatorCurve> {
    check_orders(orders)?;
    let k_max = *orders.last().expect("nonempty");
    if state.order() < k_max {
        return Err(Error::InvalidOrder {
            min: k_max,
            got: state.order(),
        });
    }
    let truncated = FourierState::from_coeffs(
        k_max,
        (-(k_max as i64)..=k_max as i64).map(|k| state.coeff(k)).collect(),
    )?;
    let product = window.multiply(&truncated);
    let p = window.degree as i64;
    let values = orders
        .iter()
        .map(|&order| {
            let inner = order as i64 - p;
            product
                .iter()
                .filter(|(k, _)| k.abs() <= inner)
                .map(|(k, v)| bracket(*k) * v.norm_sqr())
                .sum()
        })
        .collect();
    Ok(IndicatorCurve {
        center: window.center,
        window_width: window.width,
        orders: orders.to_vec(),
        values,
    })
}

/// Partial local `H^{1/2}` norms of `G(t, ·)` around `center` for each truncation in `orders`.
pub fn indicator(t: impl Into<Time>, center: f64, window_width: f64, orders: &[usize]) -> Result<IndicatorCurve> {
    check_orders(orders)?;
    let window = Window::raised_cosine(center, window_width)?;
    let state = delta_state(*orders.last().expect("nonempty"))?.evolve(t);
    indicator_for_state(&state, &window, orders)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Smooth,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityScore {
    /// Least-squares slope of the indicator values against `ln K`.
    pub slope: f64,
    pub verdict: Verdict,
}

pub fn score(curve: &IndicatorCurve, threshold: f64) -> Result<SingularityScore> {
    let n = curve.orders.len();
    if n < 3 {
        return Err(Error::TooFewPoints { min: 3, got: n });
    }
    let xs: Vec<f64> = curve.orders.iter().map(|&k| (k as f64).ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = curve.values.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&curve.values) {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    let slope = sxy / sxx;
    let verdict = if slope > threshold {
        Verdict::Singular
    } else {
        Verdict::Smooth
    };
    Ok(SingularityScore { slope, verdict })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub center: f64,
    pub score: SingularityScore,
}

/// [`indicator`] and [`score`] at every center, sharing one evolved state.
pub fn scan(
    t: impl Into<Time>,
    centers: &[f64],
    window_width: f64,
    orders: &[usize],
    threshold: f64,
) -> Result<Vec<ScanPoint>> {
    check_orders(orders)?;
    if orders.len() < 3 {
        return Err(Error::TooFewPoints {
            min: 3,
            got: orders.len(),
        });
    }
    let state = delta_state(*orders.last().expect("nonempty"))?.evolve(t);
    centers
        .par_iter()
        .map(|&center| {
            let window = Window::raised_cosine(center, window_width)?;
            let curve = indicator_for_state(&state, &window, orders)?;
            Ok(ScanPoint {
                center,
                score: score(&curve, threshold)?,
            })
        })
        .collect()
}

/// Threshold anchored on the `t = 0` delta: its own point must read singular
/// and the antipode smooth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Calibration {
    pub reference_slope: f64,
    pub antipode_slope: f64,
    pub relative_threshold: f64,
    pub threshold: f64,
}

pub fn calibrate(window_width: f64, orders: &[usize], relative_threshold: f64) -> Result<Calibration> {
    if !(relative_threshold > 0.0 && relative_threshold < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "relative threshold {relative_threshold} outside (0, 1)"
        )));
    }
    let reference = score(&indicator(0.0, 0.0, window_width, orders)?, f64::INFINITY)?.slope;
    let antipode = score(&indicator(0.0, PI, window_width, orders)?, f64::INFINITY)?.slope;
    let threshold = relative_threshold * reference;
    if antipode >= threshold {
        return Err(Error::InvalidParameter(format!(
            "calibration failed: antipode slope {antipode:.3e} not below threshold {threshold:.3e}"
        )));
    }
    Ok(Calibration {
        reference_slope: reference,
        antipode_slope: antipode,
        relative_threshold,
        threshold,
    })
}

/// `count` centers `2πi/count`.
pub fn center_grid(count: usize) -> Vec<f64> {
    (0..count).map(|i| TAU * i as f64 / count as f64).collect()
}
