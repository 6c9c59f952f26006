//! Quadratic Gauss sums `g(n,m;j) = (1/m) Σ_l exp(2πi(jl − nl²)/m)` and the
//! comb they define at rational times.
//!
//! The exact magnitudes lie in `{0, m^{-1/2}, (2/m)^{1/2}}`, so a float
//! evaluation classifies zeros safely with the threshold `m^{-1/2}/2`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The time `t = 2πn/m` as a canonical reduced fraction with `0 ≤ n < m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalTime {
    n: i64,
    m: i64,
}

impl RationalTime {
    /// Reduces `n/m` to lowest terms with positive denominator and `n` taken mod `m`.
    pub fn new(n: i64, m: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDenominator);
        }
        let g = gcd(n, m);
        let (mut n, mut m) = (n / g, m / g);
        if m < 0 {
            n = -n;
            m = -m;
        }
        Ok(Self {
            n: n.rem_euclid(m),
            m,
        })
    }

    pub fn numerator(&self) -> i64 {
        self.n
    }

    pub fn denominator(&self) -> i64 {
        self.m
    }

    /// `2πn/m` as a float.
    pub fn to_f64(&self) -> f64 {
        TAU * self.n as f64 / self.m as f64
    }
}

impl fmt::Display for RationalTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.n, self.m)
    }
}

/// Same as [`RationalTime::new`].
pub fn reduce_time(n: i64, m: i64) -> Result<RationalTime> {
    RationalTime::new(n, m)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1) as i64
}

/// `exp(2πi r/m)` with `r` already reduced into `[0, m)`.
pub(crate) fn root_of_unity(r: i64, m: i64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * r as f64 / m as f64)
}

/// Direct summation of `g(n,m;j)`. Exponents are reduced mod `m` in integer
/// arithmetic before conversion, so the only rounding is in the final sum.
pub fn gauss_sum(rt: RationalTime, j: i64) -> Result<Complex64> {
    let (n, m) = (rt.n as i128, rt.m as i128);
    if !(0..rt.m).contains(&j) {
        return Err(Error::IndexOutOfRange { index: j, len: rt.m });
    }
    let j = j as i128;
    let sum: Complex64 = (0..m)
        .map(|l| {
            let r = (j * l - n * l * l).rem_euclid(m);
            root_of_unity(r as i64, rt.m)
        })
        .sum();
    Ok(sum / rt.m as f64)
}

/// Zero threshold `m^{-1/2}/2`, halfway between 0 and the smallest nonzero magnitude.
pub fn zero_threshold(m: i64) -> f64 {
    0.5 / (m as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussWeight {
    pub j: i64,
    pub value: Complex64,
    pub is_zero: bool,
}

/// Weights of `G(2πn/m, x) = Σ_j g(n,m;j) δ(x − 2πj/m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombRepresentation {
    pub time: RationalTime,
    pub weights: Vec<GaussWeight>,
}

impl CombRepresentation {
    pub fn m(&self) -> i64 {
        self.time.m
    }

    /// Angle of the `j`-th tooth, `2πj/m`.
    pub fn position(&self, j: i64) -> f64 {
        TAU * j as f64 / self.time.m as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.time.m).map(|j| self.position(j)).collect()
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.weights.iter().map(|w| w.value)
    }

    /// Indices `j` with a nonzero weight.
    pub fn support(&self) -> Vec<i64> {
        self.weights
            .iter()
            .filter(|w| !w.is_zero)
            .map(|w| w.j)
            .collect()
    }

    pub fn weight_sum(&self) -> Complex64 {
        self.values().sum()
    }

    pub fn weight_norm_sq(&self) -> f64 {
        self.values().map(|v| v.norm_sqr()).sum()
    }
}

pub fn comb_weights(rt: RationalTime) -> CombRepresentation {
    let threshold = zero_threshold(rt.m);
    let weights = (0..rt.m)
        .map(|j| {
            let value = gauss_sum(rt, j).expect("j in range");
            GaussWeight {
                j,
                value,
                is_zero: value.norm() < threshold,
            }
        })
        .collect();
    CombRepresentation { time: rt, weights }
}

/// Which teeth of the comb carry weight, by the residue of `m` mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    AllNonzero,
    OddOnly,
    EvenOnly,
}

impl Pattern {
    pub fn predicts_zero(self, j: i64) -> bool {
        match self {
            Pattern::AllNonzero => false,
            Pattern::OddOnly => j % 2 == 0,
            Pattern::EvenOnly => j % 2 != 0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Pattern::AllNonzero => "all-nonzero",
            Pattern::OddOnly => "odd-j-only",
            Pattern::EvenOnly => "even-j-only",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

pub fn classify_pattern(rt: RationalTime) -> Pattern {
    match rt.m % 4 {
        1 | 3 => Pattern::AllNonzero,
        2 => Pattern::OddOnly,
        _ => Pattern::EvenOnly,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternCheck {
    pub matches: bool,
    /// Largest `|g|` among entries flagged zero (0 when none are).
    pub max_zero_magnitude: f64,
}

/// Compares the numerically flagged zeros against [`classify_pattern`].
pub fn verify_pattern(rt: RationalTime) -> PatternCheck {
    let pattern = classify_pattern(rt);
    let comb = comb_weights(rt);
    let matches = comb
        .weights
        .iter()
        .all(|w| w.is_zero == pattern.predicts_zero(w.j));
    let max_zero_magnitude = comb
        .weights
        .iter()
        .filter(|w| w.is_zero)
        .map(|w| w.value.norm())
        .fold(0.0, f64::max);
    PatternCheck {
        matches,
        max_zero_magnitude,
    }
}

/// All canonical rational times with denominator `m` (numerators coprime to `m`).
pub fn coprime_times(m: i64) -> impl Iterator<Item = RationalTime> {
    (0..m).filter(move |&n| gcd(n, m) == 1).map(move |n| RationalTime { n, m })
}

/// All canonical rational times with `1 ≤ m ≤ m_max`.
pub fn times_up_to(m_max: i64) -> impl Iterator<Item = RationalTime> {
    (1..=m_max).flat_map(coprime_times)
}
