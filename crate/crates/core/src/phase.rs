//! Unimodular phases `exp(-i t q)` for integer frequencies `q`.
//!
//! Evolution phases like `t·k²` reach 10⁸ for the truncations used here, so a
//! naive `(t * q).sin_cos()` loses ~10⁻⁸ of absolute accuracy. Real times are
//! reduced mod 2π in double-double arithmetic; rational times are reduced
//! exactly in integers.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gauss::{root_of_unity, RationalTime};

/// Low word of 2π (`TAU + TAU_LO` is 2π to ~1e-32).
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// An evolution time, either a float or an exact `2πn/m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Time {
    Real(f64),
    Rational(RationalTime),
}

impl Time {
    pub fn as_f64(&self) -> f64 {
        match self {
            Time::Real(t) => *t,
            Time::Rational(rt) => rt.to_f64(),
        }
    }

    /// `exp(-i t q)`.
    pub fn phase(&self, q: i64) -> Complex64 {
        match self {
            Time::Real(t) => {
                let (s, c) = reduce_angle(*t, q).sin_cos();
                Complex64::new(c, -s)
            }
            Time::Rational(rt) => {
                let (n, m) = (rt.numerator() as i128, rt.denominator() as i128);
                let r = (-(n * q as i128)).rem_euclid(m);
                root_of_unity(r as i64, rt.denominator())
            }
        }
    }

    /// `t / divisor`, exact for rational times.
    pub fn divided(&self, divisor: i64) -> Time {
        match self {
            Time::Real(t) => Time::Real(t / divisor as f64),
            Time::Rational(rt) => Time::Rational(
                RationalTime::new(rt.numerator(), rt.denominator() * divisor)
                    .expect("nonzero divisor"),
            ),
        }
    }

    /// `exp(+i t q)`.
    pub fn conj_phase(&self, q: i64) -> Complex64 {
        self.phase(q).conj()
    }
}

impl From<f64> for Time {
    fn from(t: f64) -> Self {
        Time::Real(t)
    }
}

impl From<RationalTime> for Time {
    fn from(rt: RationalTime) -> Self {
        Time::Rational(rt)
    }
}

/// `t·q mod 2π` in `[-π, π]`, accurate to a few ulps of π for `|q| < 2^53`.
pub fn reduce_angle(t: f64, q: i64) -> f64 {
    let qf = q as f64;
    let p = t * qf;
    let err = t.mul_add(qf, -p);
    let turns = (p / TAU).round();
    let r = (-turns).mul_add(TAU, p);
    (-turns).mul_add(TAU_LO, r) + err
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_matches_float_for_small_arguments() {
        let rt = RationalTime::new(3, 7).unwrap();
        for q in -50..50 {
            let exact = Time::from(rt).phase(q);
            let float = Time::Real(rt.to_f64()).phase(q);
            assert!((exact - float).norm() < 1e-13);
        }
    }

    fn angle_diff(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn reduction_is_additive_for_large_frequencies() {
        for &t in &[0.7, TAU * 0.618_033_988_749, 123.456] {
            for &(a, b) in &[(16_777_216_i64, 9_999_991), (4096 * 4096, -4095 * 4095), (1 << 40, 3)] {
                let lhs = reduce_angle(t, a + b);
                let rhs = reduce_angle(t, a) + reduce_angle(t, b);
                assert!(angle_diff(lhs, rhs) < 4e-15, "t={t} a={a} b={b}");
            }
        }
    }

    #[test]
    fn reduction_matches_naive_for_small_frequencies() {
        for q in -100..100 {
            assert!(angle_diff(reduce_angle(0.731, q), 0.731 * q as f64) < 1e-13);
        }
    }

    #[test]
    fn phases_are_unimodular() {
        for q in [-7, 0, 3, 1 << 40] {
            assert!((Time::Real(0.37).phase(q).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn full_turn_is_identity_for_rational_time() {
        let full = Time::from(RationalTime::new(1, 1).unwrap());
        for q in [-3, 0, 1, 999_999_937] {
            assert_eq!(full.phase(q), Complex64::new(1.0, 0.0));
        }
    }
}
