//! Writes the Talbot carpet |G(t,x)| over one period as a PGM image.
//!
//!     cargo run --release --example talbot_carpet -- carpet.pgm

use std::f64::consts::TAU;
use std::path::Path;

use zoll::circle::{carpet, default_filter, uniform_grid};
use zoll::report::{encode_pgm, write_atomic, LogScale};

/// Max over median of each row: large on comb rows, near 1 elsewhere.
pub fn contrast(row: &[f64]) -> f64 {
    let mut sorted = row.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted[sorted.len() - 1] / sorted[sorted.len() / 2]
}

pub fn run(path: &Path, rows: usize, cols: usize, order: usize) -> std::io::Result<Vec<f64>> {
    let times: Vec<f64> = (0..rows).map(|r| TAU * r as f64 / (rows - 1) as f64).collect();
    let data = carpet(&times, &uniform_grid(cols), order, default_filter(order)).expect("order >= 1");
    let scale = LogScale::fit(&data, 3.0);
    write_atomic(path, &encode_pgm(&data, scale))?;
    Ok(data.iter().map(|r| contrast(r)).collect())
}

fn main() -> std::io::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "carpet.pgm".into());
    let contrasts = run(Path::new(&path), 241, 512, 256)?;
    // rows 0, 60, 80, 120 sit at t = 0, π/2, 2π/3, π
    for r in [0, 60, 80, 120, 121] {
        println!("t = {:.4}: contrast {:.1}", TAU * r as f64 / 240.0, contrasts[r]);
    }
    println!("wrote {path}");
    Ok(())
}
