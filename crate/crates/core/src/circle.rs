//! The free Schrödinger flow on S¹ in truncated Fourier form.
//!
//! `G(t, x) = (1/2π) Σ_k exp(-itk² + ikx)` is stored by its coefficients on
//! `|k| ≤ K`. Distributional statements are checked by pairing against
//! band-limited test functions, never pointwise.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauss::{root_of_unity, CombRepresentation};
use crate::phase::Time;

/// Default Gaussian filter strength `1/K²`.
pub fn default_filter(order: usize) -> f64 {
    1.0 / (order as f64).powi(2)
}

/// Coefficients `c_k` for `k ∈ [-K, K]`, stored at index `k + K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    order: usize,
    coeffs: Vec<Complex64>,
}

impl FourierState {
    pub fn from_coeffs(order: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * order + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * order + 1,
                got: coeffs.len(),
            });
        }
        Ok(Self { order, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let k0 = self.order as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - k0, *c))
    }

    /// `c_k`, zero outside the window.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k + self.order as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// `c_k ↦ exp(-itk²) c_k`.
    pub fn evolve(&self, t: impl Into<Time>) -> Self {
        let t = t.into();
        let coeffs = self
            .modes()
            .map(|(k, c)| c * t.phase(k * k))
            .collect();
        Self {
            order: self.order,
            coeffs,
        }
    }

    /// `c_k ↦ exp(-eps k²) c_k`.
    pub fn filtered(&self, eps: f64) -> Self {
        let coeffs = self
            .modes()
            .map(|(k, c)| c * (-eps * (k * k) as f64).exp())
            .collect();
        Self {
            order: self.order,
            coeffs,
        }
    }

    /// `Σ_k c_k exp(-eps k²) exp(ikx)` at every grid angle. `eps = 0` is the raw truncation.
    pub fn evaluate_grid(&self, grid: &[f64], filter_eps: f64) -> Vec<Complex64> {
        let state = if filter_eps > 0.0 {
            self.filtered(filter_eps)
        } else {
            self.clone()
        };
        grid.par_iter()
            .map(|&x| {
                let at = Time::Real(x);
                state.modes().map(|(k, c)| c * at.conj_phase(k)).sum()
            })
            .collect()
    }

    /// `⟨G, φ⟩ = 2π Σ_k c_k φ̂(−k)`; modes missing from either side count as zero.
    pub fn pair(&self, phi: &TestFunction) -> Complex64 {
        let sum: Complex64 = self.modes().map(|(k, c)| c * phi.coeff(-k)).sum();
        sum * TAU
    }

    /// `max_k |c_k − c_{−k}|`.
    pub fn reflection_defect(&self) -> f64 {
        (1..=self.order as i64)
            .map(|k| (self.coeff(k) - self.coeff(-k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Truncated delta at `x = 0`: `c_k = 1/2π` on `|k| ≤ K`.
pub fn delta_state(order: usize) -> Result<FourierState> {
    if order < 1 {
        return Err(Error::InvalidOrder { min: 1, got: order });
    }
    Ok(FourierState {
        order,
        coeffs: vec![Complex64::new(1.0 / TAU, 0.0); 2 * order + 1],
    })
}

/// A band-limited test function given by `φ̂(k) = (1/2π)∫ φ(x) exp(-ikx) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    order: usize,
    coeffs: Vec<Complex64>,
}

impl TestFunction {
    pub fn from_coeffs(order: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * order + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * order + 1,
                got: coeffs.len(),
            });
        }
        Ok(Self { order, coeffs })
    }

    pub fn constant(value: f64) -> Self {
        Self {
            order: 0,
            coeffs: vec![Complex64::new(value, 0.0)],
        }
    }

    /// `exp(ikx)`.
    pub fn fourier_mode(k: i64) -> Self {
        let order = k.unsigned_abs() as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * order + 1];
        coeffs[(k + order as i64) as usize] = Complex64::new(1.0, 0.0);
        Self { order, coeffs }
    }

    /// A real test function with random coefficients decaying like `1/(1+k²)`.
    pub fn random_real(order: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * order + 1];
        coeffs[order] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for k in 1..=order {
            let scale = 1.0 / (1.0 + (k * k) as f64);
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale;
            coeffs[order + k] = c;
            coeffs[order - k] = c.conj();
        }
        Self { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k + self.order as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let k0 = self.order as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - k0, *c))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        (0..=self.order as i64).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= tol)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let at = Time::Real(x);
        self.modes().map(|(k, c)| c * at.conj_phase(k)).sum()
    }

    /// `φ(2πj/m)` with the angles `kj mod m` reduced exactly.
    pub fn eval_at_fraction(&self, j: i64, m: i64) -> Complex64 {
        self.modes()
            .map(|(k, c)| c * root_of_unity((k as i128 * j as i128).rem_euclid(m as i128) as i64, m))
            .sum()
    }

    /// `φ̂(k) ↦ exp(-eps k²) φ̂(k)`, i.e. convolution with the heat kernel.
    pub fn filtered(&self, eps: f64) -> Self {
        let coeffs = self
            .modes()
            .map(|(k, c)| c * (-eps * (k * k) as f64).exp())
            .collect();
        Self {
            order: self.order,
            coeffs,
        }
    }
}

/// `Σ_j g(n,m;j) φ(2πj/m)`: the comb tested against `φ`.
pub fn comb_pair(comb: &CombRepresentation, phi: &TestFunction) -> Complex64 {
    let m = comb.m();
    comb.weights
        .iter()
        .map(|w| w.value * phi.eval_at_fraction(w.j, m))
        .sum()
}

/// Checks `G(t, x+2t) = exp(i(x+t)) G(t, x)` coefficientwise on `|k| ≤ K−1`:
/// the left side has coefficient `c_k exp(2itk)`, the right `exp(it) c_{k−1}`.
/// Returns the largest modulus error.
pub fn check_translation_symmetry(t: impl Into<Time>, order: usize) -> Result<f64> {
    if order < 2 {
        return Err(Error::InvalidOrder { min: 2, got: order });
    }
    let t = t.into();
    let g = delta_state(order)?.evolve(t);
    let shift = t.conj_phase(1);
    let k_max = order as i64 - 1;
    Ok((-k_max..=k_max)
        .map(|k| {
            let lhs = g.coeff(k) * t.conj_phase(2 * k);
            let rhs = shift * g.coeff(k - 1);
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max))
}

/// `max_k |c_k − c_{−k}|` for the evolved delta.
pub fn check_reflection_symmetry(t: impl Into<Time>, order: usize) -> Result<f64> {
    Ok(delta_state(order)?.evolve(t).reflection_defect())
}

/// `|filtered G(t, x)|` with one row per time and one column per angle.
/// Empty `times` or `grid` give an empty matrix.
pub fn carpet(times: &[f64], grid: &[f64], order: usize, filter_eps: f64) -> Result<Vec<Vec<f64>>> {
    if times.is_empty() || grid.is_empty() {
        return Ok(Vec::new());
    }
    let delta = delta_state(order)?;
    Ok(times
        .iter()
        .map(|&t| {
            delta
                .evolve(t)
                .evaluate_grid(grid, filter_eps)
                .into_iter()
                .map(|z| z.norm())
                .collect()
        })
        .collect())
}

/// `count` equally spaced angles `2πi/count` on `[0, 2π)`.
pub fn uniform_grid(count: usize) -> Vec<f64> {
    (0..count).map(|i| TAU * i as f64 / count as f64).collect()
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d).min(PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{comb_weights, RationalTime};

    fn rt(n: i64, m: i64) -> RationalTime {
        RationalTime::new(n, m).unwrap()
    }

    #[test]
    fn delta_examples() {
        let d = delta_state(1).unwrap();
        assert_eq!(d.coeffs().len(), 3);
        assert!(d.coeffs().iter().all(|c| (c.re - 1.0 / TAU).abs() < 1e-17 && c.im == 0.0));
        let one = TestFunction::constant(1.0);
        assert!((d.pair(&one) - 1.0).norm() < 1e-15);
        assert!(matches!(delta_state(0), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn delta_pairs_to_point_value() {
        let phi = TestFunction::random_real(12, 3);
        let got = delta_state(16).unwrap().pair(&phi);
        assert!((got - phi.eval(0.0)).norm() < 1e-14);
    }

    #[test]
    fn evolve_identities() {
        let d = delta_state(40).unwrap();
        assert_eq!(d.evolve(0.0), d);
        let full = d.evolve(rt(0, 1));
        assert_eq!(full, d);
        let float_full = d.evolve(TAU);
        for (a, b) in float_full.coeffs().iter().zip(d.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn half_period_focuses_on_antipode() {
        // comb (1,2) is δ(x − π): pairing against any band-limited φ gives φ(π)
        let phi = TestFunction::random_real(10, 11);
        let g = delta_state(64).unwrap().evolve(rt(1, 2));
        assert!((g.pair(&phi) - phi.eval(PI)).norm() < 1e-13);
        let float_g = delta_state(64).unwrap().evolve(PI);
        assert!((float_g.pair(&phi) - phi.eval(PI)).norm() < 1e-12);
    }

    #[test]
    fn grid_evaluation_peaks() {
        let order = 256;
        let eps = default_filter(order);
        let grid = uniform_grid(512);
        let argmax = |v: &[Complex64]| {
            v.iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .unwrap()
                .0
        };
        let d = delta_state(order).unwrap();
        assert_eq!(argmax(&d.evaluate_grid(&grid, eps)), 0);
        assert_eq!(argmax(&d.evolve(PI).evaluate_grid(&grid, eps)), 256);

        let flat = delta_state(8).unwrap().evaluate_grid(&grid, 50.0);
        for z in flat {
            assert!((z.norm() - 1.0 / TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn comb_pair_examples() {
        let wave = TestFunction::fourier_mode(1);
        let got = comb_pair(&comb_weights(rt(1, 2)), &wave);
        assert!((got + 1.0).norm() < 1e-15);

        let phi = TestFunction::random_real(5, 9);
        let got = comb_pair(&comb_weights(rt(0, 1)), &phi);
        assert!((got - phi.eval(0.0)).norm() < 1e-14);

        let got = comb_pair(&comb_weights(rt(1, 4)), &TestFunction::constant(1.0));
        assert!((got - 1.0).norm() < 1e-15);
    }

    #[test]
    fn pairing_reproduces_comb_at_rational_times() {
        let phi = TestFunction::random_real(16, 5);
        for (n, m) in [(1, 2), (1, 3), (1, 4), (3, 8), (2, 5)] {
            let g = delta_state(64).unwrap().evolve(rt(n, m));
            let diff = g.pair(&phi) - comb_pair(&comb_weights(rt(n, m)), &phi);
            assert!(diff.norm() < 1e-13, "{n}/{m}: {diff}");
        }
    }

    #[test]
    fn translation_symmetry_examples() {
        assert!(check_translation_symmetry(0.7, 64).unwrap() < 1e-12);
        assert_eq!(check_translation_symmetry(0.0, 64).unwrap(), 0.0);
        let golden = TAU * (5f64.sqrt() - 1.0) / 2.0;
        assert!(check_translation_symmetry(golden, 128).unwrap() < 1e-12);
        assert!(check_translation_symmetry(0.3, 1).is_err());
    }

    #[test]
    fn reflection_symmetry_examples() {
        assert!(check_reflection_symmetry(PI / 3.0, 32).unwrap() < 1e-15);
        assert_eq!(check_reflection_symmetry(12.345, 100).unwrap(), 0.0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 5];
        coeffs[3] = Complex64::new(1.0, 0.0);
        let lopsided = FourierState::from_coeffs(2, coeffs).unwrap();
        assert!(lopsided.evolve(0.4).reflection_defect() > 0.5);
    }

    #[test]
    fn carpet_rows_and_degenerate_inputs() {
        let order = 256;
        let grid = uniform_grid(256);
        let eps = default_filter(order);
        let rows = carpet(&[0.0], &grid, order, eps).unwrap();
        let row = &rows[0];
        let imax = (0..row.len()).max_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap();
        assert_eq!(imax, 0);

        let contrast = |row: &[f64]| {
            let mut sorted = row.to_vec();
            sorted.sort_by(f64::total_cmp);
            sorted[sorted.len() - 1] / sorted[sorted.len() / 2]
        };
        let rows = carpet(&[PI, PI + 0.01], &grid, order, eps).unwrap();
        assert!(contrast(&rows[0]) > contrast(&rows[1]));

        assert!(carpet(&[], &grid, order, eps).unwrap().is_empty());
        assert!(carpet(&[0.0], &[], order, eps).unwrap().is_empty());
    }

    #[test]
    fn test_function_reality() {
        assert!(TestFunction::random_real(8, 1).is_real(0.0));
        assert!(!TestFunction::fourier_mode(2).is_real(1e-12));
    }

    #[test]
    fn distance_folds_into_half_turn() {
        assert!((circular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
        assert!((circular_distance(0.0, PI) - PI).abs() < 1e-15);
    }
}
