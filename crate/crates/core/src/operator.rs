//! Finite Hermitian models `L = U diag(λ) U†` with integer eigenvalues.
//!
//! Every function of `L` is formed through the stored eigendecomposition, so
//! propagators are unitary to round-off. Quadrature routes sample
//! `exp(-iyL)` at the equal-weight nodes `y = 2πq/N`, which integrate the
//! integer-frequency integrands exactly once `N` exceeds their bandwidth.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauss::{comb_weights, root_of_unity, RationalTime};
use crate::phase::Time;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct IntegerSpectrumOperator {
    eigenvalues: Vec<i64>,
    basis: CMatrix,
}

impl IntegerSpectrumOperator {
    /// Eigenvalues placed in a pseudo-random unitary basis drawn from `seed`.
    pub fn new(eigenvalues: Vec<i64>, seed: u64) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let basis = random_unitary(eigenvalues.len(), seed);
        Ok(Self { eigenvalues, basis })
    }

    /// `L = diag(λ)` in the standard basis.
    pub fn diagonal(eigenvalues: Vec<i64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let basis = CMatrix::identity(eigenvalues.len(), eigenvalues.len());
        Ok(Self { eigenvalues, basis })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[i64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn spectral_radius(&self) -> i64 {
        self.eigenvalues.iter().map(|l| l.abs()).max().unwrap_or(0)
    }

    pub fn spectral_diameter(&self) -> i64 {
        let max = self.eigenvalues.iter().max().copied().unwrap_or(0);
        let min = self.eigenvalues.iter().min().copied().unwrap_or(0);
        max - min
    }

    /// `U diag(f(λ)) U†`.
    pub fn spectral_matrix<F: Fn(i64) -> Complex64>(&self, f: F) -> CMatrix {
        let mut scaled = self.basis.clone();
        for (mut col, &lambda) in scaled.column_iter_mut().zip(&self.eigenvalues) {
            col *= f(lambda);
        }
        scaled * self.basis.adjoint()
    }

    pub fn matrix(&self) -> CMatrix {
        self.spectral_matrix(|l| Complex64::new(l as f64, 0.0))
    }

    /// `exp(-itL^power)`.
    pub fn propagator(&self, t: impl Into<Time>, power: u32) -> CMatrix {
        let t = t.into();
        self.spectral_matrix(|l| t.phase(l.pow(power)))
    }

    /// `V(t) = exp(-itL)`.
    pub fn half_wave(&self, t: impl Into<Time>) -> CMatrix {
        self.propagator(t, 1)
    }

    /// `⟨L⟩^s = Σ_k (1 + k²)^{s/2} P_k`.
    pub fn bracket_power(&self, s: f64) -> CMatrix {
        self.spectral_matrix(|l| Complex64::new(bracket(l).powf(s), 0.0))
    }

    /// Orthogonal projection onto the eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projection<F: Fn(i64) -> bool>(&self, keep: F) -> CMatrix {
        self.spectral_matrix(|l| if keep(l) { Complex64::new(1.0, 0.0) } else { ZERO })
    }

    /// `U† A U`: `A` written in the eigenbasis of `L`.
    pub fn to_eigenbasis(&self, a: &CMatrix) -> CMatrix {
        self.basis.adjoint() * a * &self.basis
    }

    pub fn from_eigenbasis(&self, a: &CMatrix) -> CMatrix {
        &self.basis * a * self.basis.adjoint()
    }
}

/// `⟨k⟩ = (1 + k²)^{1/2}`.
pub fn bracket(k: i64) -> f64 {
    (1.0 + (k as f64).powi(2)).sqrt()
}

/// Same as [`IntegerSpectrumOperator::new`].
pub fn make_operator(eigenvalues: Vec<i64>, seed: u64) -> Result<IntegerSpectrumOperator> {
    IntegerSpectrumOperator::new(eigenvalues, seed)
}

fn gaussian_matrix(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Unitary factor of the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_matrix(dim, &mut rng).qr().q()
}

/// `dim` integers drawn uniformly from `[-radius, radius]`.
pub fn random_spectrum(dim: usize, radius: i64, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| rng.random_range(-radius..=radius)).collect()
}

/// `(A + A†)/2` for a complex Gaussian `A`.
pub fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_matrix(dim, &mut rng);
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.max()
}

pub fn unitarity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    operator_norm(&(a.adjoint() * a - CMatrix::identity(n, n)))
}

pub fn hermitian_defect(a: &CMatrix) -> f64 {
    operator_norm(&(a - a.adjoint()))
}

/// `AB − BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// A function `Z → C` supported on the window `[-Λ, Λ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    radius: i64,
    values: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn from_fn<F: Fn(i64) -> Complex64>(radius: i64, f: F) -> Self {
        assert!(radius >= 0, "window radius must be nonnegative");
        Self {
            radius,
            values: (-radius..=radius).map(f).collect(),
        }
    }

    pub fn zero(radius: i64) -> Self {
        Self::from_fn(radius, |_| ZERO)
    }

    /// `δ_{k,k0}`.
    pub fn indicator(radius: i64, k0: i64) -> Self {
        Self::from_fn(radius, |k| if k == k0 { Complex64::new(1.0, 0.0) } else { ZERO })
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn get(&self, k: i64) -> Complex64 {
        if k.abs() > self.radius {
            ZERO
        } else {
            self.values[(k + self.radius) as usize]
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i as i64 - self.radius, *v))
    }

    fn check_covers(&self, op: &IntegerSpectrumOperator) -> Result<()> {
        match op.eigenvalues.iter().find(|l| l.abs() > self.radius) {
            Some(&eigenvalue) => Err(Error::WindowTooSmall {
                radius: self.radius,
                eigenvalue,
            }),
            None => Ok(()),
        }
    }
}

/// `f(L) = Σ_k f(k) P_k` from the eigendecomposition.
pub fn functional_calculus_direct(op: &IntegerSpectrumOperator, f: &SpectralFunction) -> Result<CMatrix> {
    f.check_covers(op)?;
    Ok(op.spectral_matrix(|l| f.get(l)))
}

fn required_nodes(op: &IntegerSpectrumOperator, f: &SpectralFunction) -> usize {
    (2 * (f.radius + op.spectral_radius()) + 1) as usize
}

/// `(1/N) Σ_q h(y_q) exp(-i y_q L)` with `y_q = 2πq/N` and `h(y) = Σ_k weight(k) exp(iky)`.
fn sampled_half_wave_sum<W: Fn(i64) -> Complex64>(
    op: &IntegerSpectrumOperator,
    f: &SpectralFunction,
    nodes: usize,
    weight: W,
) -> CMatrix {
    let dim = op.dim();
    let n = nodes as i64;
    let mut acc = CMatrix::zeros(dim, dim);
    for q in 0..n {
        let h: Complex64 = f
            .support()
            .map(|(k, _)| weight(k) * root_of_unity((k * q).rem_euclid(n), n))
            .sum();
        if h == ZERO {
            continue;
        }
        let y = Time::Rational(RationalTime::new(q, n).expect("nodes > 0"));
        acc += op.half_wave(y) * h;
    }
    acc / Complex64::new(nodes as f64, 0.0)
}

/// `f(L) = Σ_k (1/2π)∫ f(k) exp(iky) exp(-iyL) dy`, with the `y`-integral
/// done by the equal-weight periodic rule.
pub fn functional_calculus_quadrature(
    op: &IntegerSpectrumOperator,
    f: &SpectralFunction,
    nodes: usize,
) -> Result<CMatrix> {
    f.check_covers(op)?;
    let required = required_nodes(op, f);
    if nodes < required {
        return Err(Error::InsufficientNodes { nodes, required });
    }
    Ok(sampled_half_wave_sum(op, f, nodes, |k| f.get(k)))
}

/// `⟨L⟩^N (1/2π)∫ Σ_k ⟨k⟩^{-N} f(k) exp(iky) exp(-iyL) dy`, the form whose
/// `k`-series converges absolutely for `N > 1`.
pub fn regularized_calculus(
    op: &IntegerSpectrumOperator,
    f: &SpectralFunction,
    exponent: f64,
    nodes: usize,
) -> Result<CMatrix> {
    if exponent.is_nan() || exponent <= 1.0 {
        return Err(Error::InvalidRegularization(exponent));
    }
    f.check_covers(op)?;
    let required = required_nodes(op, f);
    if nodes < required {
        return Err(Error::InsufficientNodes { nodes, required });
    }
    let inner = sampled_half_wave_sum(op, f, nodes, |k| f.get(k) * bracket(k).powf(-exponent));
    Ok(op.bracket_power(exponent) * inner)
}

/// `‖exp(-i(2πn/m)L²) − Σ_j g(n,m;j) exp(-i(2πj/m)L)‖` in operator norm.
pub fn revival_residual(op: &IntegerSpectrumOperator, rt: RationalTime) -> f64 {
    let m = rt.denominator();
    let lhs = op.propagator(rt, 2);
    let mut rhs = CMatrix::zeros(op.dim(), op.dim());
    for w in comb_weights(rt).weights {
        let t = RationalTime::new(w.j, m).expect("m > 0");
        rhs += op.half_wave(t) * w.value;
    }
    operator_norm(&(lhs - rhs))
}

/// Residue-class projections `𝐏_l = Σ_{λ ≡ l mod m} P_λ` recovered from the
/// half-wave group at `2πj/m`.
#[derive(Debug, Clone)]
pub struct ProjectionRecovery {
    /// `a_{lj} = (1/m) exp(2πi lj/m)`.
    pub coefficients: CMatrix,
    /// `Σ_j a_{lj} V(2πj/m)` for `l = 0..m`.
    pub recovered: Vec<CMatrix>,
    /// `max_l ‖𝐏_l − Σ_j a_{lj} V(2πj/m)‖` against the projections built from the eigenbasis.
    pub residual: f64,
}

impl ProjectionRecovery {
    /// `max_l ‖𝐏_l² − 𝐏_l‖`.
    pub fn idempotency_defect(&self) -> f64 {
        self.recovered
            .iter()
            .map(|p| operator_norm(&(p * p - p)))
            .fold(0.0, f64::max)
    }

    /// `max_{l≠l'} ‖𝐏_l 𝐏_l'‖`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, pa) in self.recovered.iter().enumerate() {
            for pb in self.recovered.iter().skip(a + 1) {
                worst = worst.max(operator_norm(&(pa * pb)));
            }
        }
        worst
    }

    /// `‖Σ_l 𝐏_l − I‖`.
    pub fn completeness_defect(&self) -> f64 {
        let dim = self.recovered.first().map_or(0, |p| p.nrows());
        let sum = self
            .recovered
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, p| acc + p);
        operator_norm(&(sum - CMatrix::identity(dim, dim)))
    }

    pub fn coefficient_determinant(&self) -> Complex64 {
        self.coefficients.clone().determinant()
    }
}

pub fn projection_recovery(op: &IntegerSpectrumOperator, m: usize) -> Result<ProjectionRecovery> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let mi = m as i64;
    let coefficients = CMatrix::from_fn(m, m, |l, j| root_of_unity((l * j) as i64 % mi, mi) / m as f64);
    let half_waves: Vec<CMatrix> = (0..mi)
        .map(|j| op.half_wave(RationalTime::new(j, mi).expect("m > 0")))
        .collect();
    let mut recovered = Vec::with_capacity(m);
    let mut residual: f64 = 0.0;
    for l in 0..m {
        let sum = half_waves
            .iter()
            .enumerate()
            .fold(CMatrix::zeros(op.dim(), op.dim()), |acc, (j, v)| acc + v * coefficients[(l, j)]);
        let exact = op.projection(|lambda| lambda.rem_euclid(mi) == l as i64);
        residual = residual.max(operator_norm(&(&exact - &sum)));
        recovered.push(sum);
    }
    Ok(ProjectionRecovery {
        coefficients,
        recovered,
        residual,
    })
}

fn check_perturbation(op: &IntegerSpectrumOperator, q: &CMatrix) -> Result<()> {
    if q.nrows() != op.dim() || q.ncols() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: q.nrows().max(q.ncols()),
        });
    }
    let defect = hermitian_defect(q);
    if defect > 1e-12 * operator_norm(q).max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// `B1 = (1/2π)∫_0^{2π} exp(itL) Q exp(-itL) dt` by the periodic rule.
pub fn average_perturbation(op: &IntegerSpectrumOperator, q: &CMatrix, nodes: usize) -> Result<CMatrix> {
    check_perturbation(op, q)?;
    let required = (2 * op.spectral_diameter() + 1) as usize;
    if nodes < required {
        return Err(Error::InsufficientNodes { nodes, required });
    }
    let n = nodes as i64;
    let mut acc = CMatrix::zeros(op.dim(), op.dim());
    for s in 0..n {
        let v = op.half_wave(RationalTime::new(s, n).expect("nodes > 0"));
        acc += v.adjoint() * q * v;
    }
    Ok(acc / Complex64::new(nodes as f64, 0.0))
}

/// Keeps only the entries of `Q` (in the eigenbasis of `L`) between equal eigenvalues.
pub fn block_compression(op: &IntegerSpectrumOperator, q: &CMatrix) -> Result<CMatrix> {
    check_perturbation(op, q)?;
    let mut inner = op.to_eigenbasis(q);
    let ev = &op.eigenvalues;
    for a in 0..op.dim() {
        for b in 0..op.dim() {
            if ev[a] != ev[b] {
                inner[(a, b)] = ZERO;
            }
        }
    }
    Ok(op.from_eigenbasis(&inner))
}

/// Solution of the homological equation `B1 − Q = [iT, L]`.
#[derive(Debug, Clone)]
pub struct HomologicalSolution {
    /// Hermitian generator, zero on the diagonal blocks of `L`.
    pub generator: CMatrix,
    /// Sign `s` in `T_ab = s Q_ab / (i(λ_a − λ_b))` that closes the identity.
    pub sign: i8,
    /// `‖(B1 − Q) − [iT, L]‖` for the chosen sign.
    pub residual: f64,
    /// The same residual for the rejected sign.
    pub rejected_residual: f64,
}

/// Builds `T` in the eigenbasis for both signs and keeps whichever satisfies
/// `B1 − Q = [iT, L]`; `B1` is the exact block compression.
pub fn homological_solve(op: &IntegerSpectrumOperator, q: &CMatrix) -> Result<HomologicalSolution> {
    let b1 = block_compression(op, q)?;
    let target = &b1 - q;
    let inner = op.to_eigenbasis(q);
    let ev = &op.eigenvalues;
    let base = CMatrix::from_fn(op.dim(), op.dim(), |a, b| {
        if ev[a] == ev[b] {
            ZERO
        } else {
            inner[(a, b)] / Complex64::new(0.0, (ev[a] - ev[b]) as f64)
        }
    });
    let l = op.matrix();
    let i = Complex64::new(0.0, 1.0);
    let residual_for = |t: &CMatrix| operator_norm(&(&target - commutator(&(t * i), &l)));

    let plus = op.from_eigenbasis(&base);
    let minus = -plus.clone();
    let (r_plus, r_minus) = (residual_for(&plus), residual_for(&minus));
    let (generator, sign, residual, rejected_residual) = if r_plus <= r_minus {
        (plus, 1, r_plus, r_minus)
    } else {
        (minus, -1, r_minus, r_plus)
    };
    Ok(HomologicalSolution {
        generator,
        sign,
        residual,
        rejected_residual,
    })
}

/// Summary record for one `(operator, time)` revival check.
#[derive(Debug, Clone, Serialize)]
pub struct RevivalRecord {
    pub dim: usize,
    pub spectrum: Vec<i64>,
    pub rt: String,
    pub residual: f64,
}
