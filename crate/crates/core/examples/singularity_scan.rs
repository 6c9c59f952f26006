//! Windowed H^{1/2} growth of G(t,·): at t = π the only singular point is
//! x = π, at an irrational multiple of 2π every center is singular.
//!
//!     cargo run --release --example singularity_scan

use std::f64::consts::PI;

use zoll::singularity::{
    calibrate, center_grid, scan, Calibration, ScanPoint, Verdict, DEFAULT_RELATIVE_THRESHOLD, DEFAULT_WINDOW_WIDTH,
};
use zoll::{RationalTime, Time};

pub const ORDERS: [usize; 3] = [256, 1024, 4096];

pub fn calibration() -> Calibration {
    calibrate(DEFAULT_WINDOW_WIDTH, &ORDERS, DEFAULT_RELATIVE_THRESHOLD).expect("valid window")
}

pub fn run(t: Time, centers: usize, threshold: f64) -> Vec<ScanPoint> {
    scan(t, &center_grid(centers), DEFAULT_WINDOW_WIDTH, &ORDERS, threshold).expect("valid scan")
}

fn render(points: &[ScanPoint]) -> String {
    points
        .iter()
        .map(|p| if p.score.verdict == Verdict::Singular { '#' } else { '.' })
        .collect()
}

fn main() {
    let cal = calibration();
    println!(
        "threshold {:.3e} (delta slope {:.3e}, antipode {:.3e})",
        cal.threshold, cal.reference_slope, cal.antipode_slope
    );
    let half = Time::Rational(RationalTime::new(1, 2).expect("nonzero m"));
    println!("t = π            {}", render(&run(half, 16, cal.threshold)));
    println!("t = 2π·0.618...  {}", render(&run(Time::Real(2.0 * PI * 0.618_033_988_749), 16, cal.threshold)));
}
