//! Encoders, run manifests and the verification suites behind `zoll verify`.
//!
//! Output is deterministic: fixed iteration order, shortest round-trip float
//! formatting, no timestamps.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::circle::circular_distance;
use crate::gauss::{classify_pattern, comb_weights, times_up_to, verify_pattern, CombRepresentation, RationalTime};
use crate::operator::{
    average_perturbation, block_compression, commutator, functional_calculus_direct,
    functional_calculus_quadrature, homological_solve, make_operator, operator_norm, projection_recovery,
    random_hermitian, random_spectrum, regularized_calculus, revival_residual, SpectralFunction,
};
use crate::phase::Time;
use crate::singularity::{calibrate, center_grid, scan, Verdict, DEFAULT_RELATIVE_THRESHOLD, DEFAULT_WINDOW_WIDTH};
use crate::sphere::{huygens_concentration, sphere_revival_residual, zonal_delta, Generator};

/// Every tunable of one run, echoed next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub params: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            params: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let value = serde_json::to_value(value).expect("manifest values serialize");
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Writes through a sibling temp file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A header plus rows of preformatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Header row, comma separated, `.` decimals, one record per line.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// One JSON object per line, keys in header order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let obj: serde_json::Map<String, Value> = self
                .header
                .iter()
                .cloned()
                .zip(row.iter().cloned())
                .collect();
            out.push_str(&serde_json::to_string(&obj).expect("row serializes"));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json_lines(),
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn gauss_table(rt: RationalTime) -> Table {
    let pattern = classify_pattern(rt);
    let comb = comb_weights(rt);
    let mut table = Table::new(&["j", "re", "im", "abs", "is_zero", "pattern"]);
    for w in &comb.weights {
        table.push(vec![
            w.j.into(),
            w.value.re.into(),
            w.value.im.into(),
            w.value.norm().into(),
            w.is_zero.into(),
            pattern.tag().into(),
        ]);
    }
    table
}

pub fn comb_table(comb: &CombRepresentation) -> Table {
    let mut table = Table::new(&["j", "position", "re", "im", "abs", "is_zero"]);
    for w in &comb.weights {
        table.push(vec![
            w.j.into(),
            comb.position(w.j).into(),
            w.value.re.into(),
            w.value.im.into(),
            w.value.norm().into(),
            w.is_zero.into(),
        ]);
    }
    table
}

/// Affine map of `ln v` onto `[0, 255]`: `pixel = (ln v − lo) · 255 / (hi − lo)`, clamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogScale {
    pub lo: f64,
    pub hi: f64,
}

impl LogScale {
    /// `hi` is the log of the largest value, `lo` sits `decades` powers of ten below.
    pub fn fit(data: &[Vec<f64>], decades: f64) -> Self {
        let max = data
            .iter()
            .flatten()
            .copied()
            .filter(|v| v.is_finite())
            .fold(f64::MIN_POSITIVE, f64::max);
        let hi = max.ln();
        Self {
            lo: hi - decades * std::f64::consts::LN_10,
            hi,
        }
    }

    pub fn pixel(&self, v: f64) -> u8 {
        if v.is_nan() || v <= 0.0 {
            return 0;
        }
        let x = (v.ln() - self.lo) * 255.0 / (self.hi - self.lo);
        x.round().clamp(0.0, 255.0) as u8
    }
}

/// Binary PGM (`P5`, maxval 255).
pub fn encode_pgm(data: &[Vec<f64>], scale: LogScale) -> Vec<u8> {
    let rows = data.len();
    let cols = data.first().map_or(0, Vec::len);
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    for row in data {
        out.extend(row.iter().map(|&v| scale.pixel(v)));
    }
    out
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(suite: &str, name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            name: name.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }
}

pub fn checks_to_json_lines(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| serde_json::to_string(c).expect("check serializes") + "\n")
        .collect()
}

/// Vanishing pattern, weight sum, Parseval and the scalar revival identity for all `m ≤ m_max`.
pub fn verify_gauss(m_max: i64) -> Vec<Check> {
    let mut pattern_mismatches = 0;
    let (mut zero_mag, mut sum_err, mut parseval_err, mut revival_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for rt in times_up_to(m_max) {
        let check = verify_pattern(rt);
        if !check.matches {
            pattern_mismatches += 1;
        }
        zero_mag = zero_mag.max(check.max_zero_magnitude);
        let comb = comb_weights(rt);
        sum_err = sum_err.max((comb.weight_sum() - 1.0).norm());
        parseval_err = parseval_err.max((comb.weight_norm_sq() - 1.0).abs());
        revival_err = revival_err.max(scalar_revival_error(&comb, 200));
    }
    vec![
        Check::new("gauss", "pattern-mismatches", pattern_mismatches as f64, 0.0),
        Check::new("gauss", "flagged-zero-magnitude", zero_mag, 1e-10),
        Check::new("gauss", "weight-sum", sum_err, 1e-12),
        Check::new("gauss", "parseval", parseval_err, 1e-12),
        Check::new("gauss", "scalar-revival", revival_err, 1e-11),
    ]
}

/// `max_{|k| ≤ k_max} |exp(-2πink²/m) − Σ_j g(n,m;j) exp(-2πijk/m)|`.
pub fn scalar_revival_error(comb: &CombRepresentation, k_max: i64) -> f64 {
    let rt = comb.time;
    let m = rt.denominator();
    let step = Time::Rational(RationalTime::new(1, m).expect("m > 0"));
    let roots: Vec<num_complex::Complex64> = (0..m).map(|r| step.phase(r)).collect();
    (-k_max..=k_max)
        .map(|k| {
            let lhs = Time::Rational(rt).phase(k * k);
            let rhs: num_complex::Complex64 = comb
                .weights
                .iter()
                .map(|w| w.value * roots[(w.j * k).rem_euclid(m) as usize])
                .sum();
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

/// Operator-level identities for one seeded operator with spectrum in `[-20, 20]`.
pub fn verify_revival(dim: usize, m_max: i64, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let spectrum = random_spectrum(dim, 20, seed);
    let op = match make_operator(spectrum, seed) {
        Ok(op) => op,
        Err(e) => {
            checks.push(Check::new("revival", format!("construction: {e}"), f64::INFINITY, 0.0));
            return checks;
        }
    };
    let tol = 1e-10 * dim as f64;
    let worst = times_up_to(m_max)
        .map(|rt| revival_residual(&op, rt))
        .fold(0.0, f64::max);
    checks.push(Check::new("revival", format!("operator-revival m<={m_max}"), worst, tol));

    let mut proj = 0.0f64;
    for m in 1..=(m_max.min(8) as usize) {
        let rec = projection_recovery(&op, m).expect("m > 0");
        proj = proj
            .max(rec.residual)
            .max(rec.idempotency_defect())
            .max(rec.orthogonality_defect())
            .max(rec.completeness_defect());
    }
    checks.push(Check::new("revival", "projection-recovery", proj, 1e-10));

    let radius = op.spectral_radius() + 3;
    let f = SpectralFunction::from_fn(radius, |k| Time::Real(0.61).phase(k * k + 3 * k));
    let nodes = (2 * (radius + op.spectral_radius()) + 1) as usize;
    let direct = functional_calculus_direct(&op, &f).expect("window covers spectrum");
    let quad = functional_calculus_quadrature(&op, &f, nodes).expect("node bound holds");
    let reg = regularized_calculus(&op, &f, 2.0, nodes).expect("node bound holds");
    checks.push(Check::new("revival", "quadrature-calculus", operator_norm(&(&direct - &quad)), 1e-10));
    checks.push(Check::new("revival", "regularized-calculus", operator_norm(&(&direct - &reg)), 1e-10));

    let q = random_hermitian(dim, seed.wrapping_add(1));
    let avg_nodes = (2 * op.spectral_diameter() + 1) as usize;
    let b1 = average_perturbation(&op, &q, avg_nodes).expect("valid perturbation");
    let exact = block_compression(&op, &q).expect("valid perturbation");
    checks.push(Check::new("revival", "average-vs-compression", operator_norm(&(&b1 - &exact)), 1e-10));
    checks.push(Check::new("revival", "average-commutes", operator_norm(&commutator(&op.matrix(), &b1)), 1e-10));
    let sol = homological_solve(&op, &q).expect("valid perturbation");
    checks.push(Check::new(
        "revival",
        format!("homological-residual sign={}", sol.sign),
        sol.residual,
        1e-10,
    ));
    checks
}

/// Sphere revival for all `m' ≤ m`, full revival at `2π`, and Huygens focusing at `(1, m)`.
pub fn verify_sphere(d: usize, max_degree: usize, m: i64) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    for rt in times_up_to(m) {
        match sphere_revival_residual(d, rt, max_degree) {
            Ok(r) => worst = worst.max(r.residual),
            Err(e) => {
                checks.push(Check::new("sphere", format!("revival: {e}"), f64::INFINITY, 0.0));
                return checks;
            }
        }
    }
    checks.push(Check::new("sphere", format!("eigenvalue-revival m<={m}"), worst, 1e-12));

    let delta = zonal_delta(d, max_degree).expect("d validated above");
    let full = Time::Rational(RationalTime::new(1, 1).expect("nonzero"));
    let laplace = delta.evolve(full, Generator::Laplace, 0.0).expect("valid generator");
    let half = delta.evolve(full, Generator::HalfWave, 0.0).expect("odd d");
    let err = laplace
        .coeffs()
        .iter()
        .zip(half.coeffs())
        .zip(delta.coeffs())
        .map(|((a, b), c)| ((a - c).norm() / c.norm()).max((b - c).norm() / c.norm()))
        .fold(0.0, f64::max);
    checks.push(Check::new("sphere", "full-revival", err, 1e-12));

    let rt = RationalTime::new(1, m).expect("m > 0");
    let k = max_degree as f64;
    match huygens_concentration(d, rt, max_degree, 1.0 / (k * k), 10.0 / k) {
        Ok(report) => checks.push(Check::new(
            "sphere",
            format!("huygens-deficit rt={rt} fraction={:.6}", report.fraction),
            1.0 - report.fraction,
            0.1,
        )),
        Err(e) => checks.push(Check::new("sphere", format!("huygens: {e}"), f64::INFINITY, 0.0)),
    }
    checks
}

/// The rational/irrational dichotomy on a `centers`-point grid at truncations up to `k_max`.
pub fn verify_scan(k_max: usize, centers: usize) -> Vec<Check> {
    let orders = [k_max / 16, k_max / 4, k_max];
    let grid = center_grid(centers);
    let step = TAU / centers as f64;
    let cal = match calibrate(DEFAULT_WINDOW_WIDTH, &orders, DEFAULT_RELATIVE_THRESHOLD) {
        Ok(c) => c,
        Err(e) => return vec![Check::new("scan", format!("calibration: {e}"), f64::INFINITY, 0.0)],
    };
    let half = RationalTime::new(1, 2).expect("nonzero");
    let points = scan(half, &grid, DEFAULT_WINDOW_WIDTH, &orders, cal.threshold).expect("valid scan");
    let false_positive = points
        .iter()
        .filter(|p| p.score.verdict == Verdict::Singular && circular_distance(p.center, PI) > step + 1e-12)
        .count();
    let detected = points
        .iter()
        .any(|p| p.score.verdict == Verdict::Singular && circular_distance(p.center, PI) <= step + 1e-12);
    let mut checks = vec![
        Check::new("scan", "rational-false-positives", false_positive as f64, 0.0),
        Check::new("scan", "rational-comb-missed", if detected { 0.0 } else { 1.0 }, 0.0),
    ];
    let golden = TAU * 0.618_033_988_749;
    let points = scan(golden, &grid, DEFAULT_WINDOW_WIDTH, &orders, cal.threshold).expect("valid scan");
    let smooth = points.iter().filter(|p| p.score.verdict == Verdict::Smooth).count();
    let allowed = centers - (centers * 14).div_ceil(16);
    checks.push(Check::new("scan", "irrational-smooth-centers", smooth as f64, allowed as f64));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_table_layout() {
        let t = gauss_table(RationalTime::new(1, 4).unwrap());
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "j,re,im,abs,is_zero,pattern");
        assert_eq!(lines.len(), 5);
        assert!(lines[2].ends_with(",true,even-j-only"));
        let cells: Vec<f64> = lines[1].split(',').take(4).map(|c| c.parse().unwrap()).collect();
        assert!((cells[1] - 0.5).abs() < 1e-15 && (cells[2] + 0.5).abs() < 1e-15);
        let json = t.to_json_lines();
        let first: Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
        assert_eq!(first["pattern"], "even-j-only");
    }

    #[test]
    fn csv_quotes_separators() {
        let mut t = Table::new(&["a"]);
        t.push(vec!["x,y".into()]);
        assert_eq!(t.to_csv(), "a\n\"x,y\"\n");
    }

    #[test]
    fn pgm_header_and_scaling() {
        let data = vec![vec![1.0, 0.1, 0.0], vec![1e-5, 0.5, 1.0]];
        let scale = LogScale::fit(&data, 2.0);
        let bytes = encode_pgm(&data, scale);
        let header = b"P5\n3 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        let px = &bytes[header.len()..];
        assert_eq!(px.len(), 6);
        assert_eq!(px[0], 255);
        assert_eq!(px[1], 128);
        assert_eq!(px[2], 0);
        assert_eq!(px[3], 0);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"second");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_atomic(&dir.path().join("missing/out.txt"), b"x").is_err());
    }

    #[test]
    fn manifest_is_sorted_and_stable() {
        let mut m = RunManifest::new("gauss");
        m.param("m", 4).param("eps", 0.25).param("n", 1);
        let a = m.to_json();
        assert_eq!(a, m.clone().to_json());
        assert!(a.find("\"eps\"").unwrap() < a.find("\"m\"").unwrap());
    }

    #[test]
    fn small_suites_pass() {
        assert!(verify_gauss(16).iter().all(|c| c.pass));
        assert!(verify_revival(6, 6, 3).iter().all(|c| c.pass));
    }
}
