//! Fractional Brownian motion: exact and ARFIMA generators, a log-periodogram
//! Hurst estimator, the spectral fractional Laplacian, the fractional quantum
//! potential, and the quantum-potential deviation trigger.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;
use thiserror::Error;

use crate::grading::Grade;
use crate::linalg::{diag, CMat, C64};

pub const EXACT_MAX_N: usize = 4096;
pub const RHO_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("Hurst exponent must lie in (0, 1), got {0}")]
    BadHurst(f64),
    #[error("need at least 2 samples, got {0}")]
    TooShort(usize),
    #[error("time step must be positive, got {0}")]
    BadStep(f64),
    #[error("exact generator limited to n <= {EXACT_MAX_N}, got {0}")]
    TooLong(usize),
    #[error("covariance not positive definite: pivot {pivot} is {value:.3e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("ARFIMA truncation must be at least 64, got {0}")]
    ShortTruncation(usize),
    #[error("path too short for the estimator ({0} < 256)")]
    PathTooShort(usize),
    #[error("path is constant; no spectrum to regress")]
    ConstantPath,
    #[error("grid length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("density is negative at index {0}")]
    NegativeDensity(usize),
    #[error("grids differ in length ({0} vs {1})")]
    GridMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FbmConfig {
    pub hurst: f64,
    /// Number of increments; the path has `n + 1` points starting at 0.
    pub n: usize,
    pub dt: f64,
    pub seed: u64,
}

impl FbmConfig {
    pub fn new(hurst: f64, n: usize, dt: f64, seed: u64) -> Result<Self, NoiseError> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(NoiseError::BadHurst(hurst));
        }
        if n < 2 {
            return Err(NoiseError::TooShort(n));
        }
        if !(dt > 0.0) {
            return Err(NoiseError::BadStep(dt));
        }
        Ok(FbmConfig { hurst, n, dt, seed })
    }

    /// Unit horizon: `dt = 1/n`.
    pub fn unit_interval(hurst: f64, n: usize, seed: u64) -> Result<Self, NoiseError> {
        Self::new(hurst, n, 1.0 / n as f64, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FbmPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub method: String,
}

impl FbmPath {
    fn from_increments(inc: &[f64], dt: f64, method: String) -> Self {
        let mut values = Vec::with_capacity(inc.len() + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for x in inc {
            acc += x;
            values.push(acc);
        }
        let times = (0..=inc.len()).map(|k| k as f64 * dt).collect();
        FbmPath { times, values, method }
    }

    pub fn increments(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["t", "value"]).expect("in-memory csv");
        for (t, v) in self.times.iter().zip(&self.values) {
            w.write_record([format!("{t:.12}"), format!("{v:.17e}")]).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// `E[B(t) B(s)] = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2`.
pub fn fbm_covariance(t: f64, s: f64, h: f64) -> f64 {
    0.5 * (t.powf(2.0 * h) + s.powf(2.0 * h) - (t - s).abs().powf(2.0 * h))
}

/// Autocovariance of unit-step fractional Gaussian noise at integer lag `k`.
pub fn fgn_autocovariance(k: i64, h: f64) -> f64 {
    let k = k.abs() as f64;
    let p = 2.0 * h;
    0.5 * ((k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).abs().powf(p))
}

/// Per-path generator: master seed plus the path index as the stream.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Innovations form of the stationary increment covariance, computed by the
/// Durbin-Levinson recursion: `X_k = sum_j phi[k][j] X_{k-1-j} + sqrt(v_k) e_k`.
/// This is the LDL^T factorization of the Toeplitz covariance.
#[derive(Debug, Clone)]
pub struct ExactFactor {
    pub hurst: f64,
    pub n: usize,
    phi: Vec<Vec<f64>>,
    sd: Vec<f64>,
}

impl ExactFactor {
    pub fn new(hurst: f64, n: usize) -> Result<Self, NoiseError> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(NoiseError::BadHurst(hurst));
        }
        if n > EXACT_MAX_N {
            return Err(NoiseError::TooLong(n));
        }
        let g: Vec<f64> = (0..=n as i64).map(|k| fgn_autocovariance(k, hurst)).collect();
        let mut phi: Vec<Vec<f64>> = vec![Vec::new()];
        let mut v = g[0];
        let mut sd = vec![v.sqrt()];
        for k in 1..n {
            let prev = &phi[k - 1];
            let num = g[k] - (0..k - 1).map(|j| prev[j] * g[k - 1 - j]).sum::<f64>();
            let a = num / v;
            let mut cur = Vec::with_capacity(k);
            for j in 0..k - 1 {
                cur.push(prev[j] - a * prev[k - 2 - j]);
            }
            cur.push(a);
            v *= 1.0 - a * a;
            if !(v > 0.0) {
                return Err(NoiseError::NotPositiveDefinite { pivot: k, value: v });
            }
            sd.push(v.sqrt());
            phi.push(cur);
        }
        Ok(ExactFactor { hurst, n, phi, sd })
    }

    /// Unit-step increments driven by the supplied normals.
    pub fn increments_from(&self, normals: &[f64]) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let pred: f64 = self.phi[k].iter().enumerate().map(|(j, p)| p * x[k - 1 - j]).sum();
            x.push(pred + self.sd[k] * normals[k]);
        }
        x
    }

    pub fn pivots(&self) -> &[f64] {
        &self.sd
    }
}

fn normals<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn exact_path(f: &ExactFactor, cfg: &FbmConfig, index: u64) -> FbmPath {
    let mut rng = path_rng(cfg.seed, index);
    let z = normals(&mut rng, cfg.n);
    let scale = cfg.dt.powf(cfg.hurst);
    let inc: Vec<f64> = f.increments_from(&z).into_iter().map(|x| x * scale).collect();
    FbmPath::from_increments(&inc, cfg.dt, "exact".into())
}

pub fn fbm_generate_exact(cfg: &FbmConfig) -> Result<FbmPath, NoiseError> {
    let f = ExactFactor::new(cfg.hurst, cfg.n)?;
    Ok(exact_path(&f, cfg, 0))
}

/// `paths` independent exact paths, path `i` seeded from `(seed, i)`.
pub fn fbm_paths_exact(cfg: &FbmConfig, paths: usize) -> Result<Vec<FbmPath>, NoiseError> {
    let f = ExactFactor::new(cfg.hurst, cfg.n)?;
    Ok((0..paths as u64).into_par_iter().map(|i| exact_path(&f, cfg, i)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArfimaCoeffs {
    pub d: f64,
    pub psi: Vec<f64>,
}

impl ArfimaCoeffs {
    pub fn truncation(&self) -> usize {
        self.psi.len() - 1
    }

    /// Autocovariance of the truncated moving average at lag `k`.
    pub fn autocovariance(&self, k: usize) -> f64 {
        self.psi.iter().zip(self.psi.iter().skip(k)).map(|(a, b)| a * b).sum()
    }
}

/// `psi_0 = 1`, `psi_j = psi_{j-1} (j - 1 + d) / j`, `d = H - 1/2`.
pub fn arfima_coeffs(h: f64, j_max: usize) -> Result<ArfimaCoeffs, NoiseError> {
    if !(h > 0.0 && h < 1.0) {
        return Err(NoiseError::BadHurst(h));
    }
    if j_max < 64 {
        return Err(NoiseError::ShortTruncation(j_max));
    }
    let d = h - 0.5;
    let mut psi = Vec::with_capacity(j_max + 1);
    psi.push(1.0);
    for j in 1..=j_max {
        let prev = psi[j - 1];
        psi.push(prev * (j as f64 - 1.0 + d) / j as f64);
    }
    Ok(ArfimaCoeffs { d, psi })
}

fn arfima_path(c: &ArfimaCoeffs, cfg: &FbmConfig, index: u64) -> FbmPath {
    let j = c.truncation();
    let mut rng = path_rng(cfg.seed, index);
    let eps = normals(&mut rng, cfg.n + j);
    let scale = cfg.dt.powf(cfg.hurst);
    let inc: Vec<f64> = (0..cfg.n)
        .map(|k| {
            let t = k + j;
            c.psi.iter().enumerate().map(|(i, p)| p * eps[t - i]).sum::<f64>() * scale
        })
        .collect();
    FbmPath::from_increments(&inc, cfg.dt, format!("arfima({j})"))
}

pub fn fgn_generate_arfima(cfg: &FbmConfig, j_max: usize) -> Result<FbmPath, NoiseError> {
    let c = arfima_coeffs(cfg.hurst, j_max)?;
    Ok(arfima_path(&c, cfg, 0))
}

pub fn fbm_paths_arfima(cfg: &FbmConfig, j_max: usize, paths: usize) -> Result<Vec<FbmPath>, NoiseError> {
    let c = arfima_coeffs(cfg.hurst, j_max)?;
    Ok((0..paths as u64).into_par_iter().map(|i| arfima_path(&c, cfg, i)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HurstEstimate {
    pub hurst: f64,
    pub std_error: f64,
    pub frequencies: usize,
}

pub const BOOTSTRAP_SAMPLES: usize = 200;
const BOOTSTRAP_SEED: u64 = 0x0048_5552_5354;

fn slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let b = x.iter().zip(y).map(|(a, c)| (a - mx) * (c - my)).sum::<f64>() / sxx;
    (b, my - b * mx)
}

/// Log-periodogram regression on the increments over the lowest `floor(n^0.6)`
/// Fourier frequencies: `log I(l) = a + (1 - 2H) log l`. The standard error is a
/// residual bootstrap of the slope.
pub fn hurst_estimate(path: &[f64]) -> Result<HurstEstimate, NoiseError> {
    if path.len() < 256 {
        return Err(NoiseError::PathTooShort(path.len()));
    }
    let inc: Vec<f64> = path.windows(2).map(|w| w[1] - w[0]).collect();
    let n = inc.len();
    let mean = inc.iter().sum::<f64>() / n as f64;
    if inc.iter().all(|x| (x - mean).abs() == 0.0) {
        return Err(NoiseError::ConstantPath);
    }
    let mut buf: Vec<C64> = inc.iter().map(|&x| C64::new(x - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let m = ((n as f64).powf(0.6).floor() as usize).clamp(4, n / 2);
    let x: Vec<f64> = (1..=m).map(|j| (2.0 * PI * j as f64 / n as f64).ln()).collect();
    let y: Vec<f64> = (1..=m).map(|j| (buf[j].norm_sqr() / (2.0 * PI * n as f64)).max(1e-300).ln()).collect();
    let (b, a) = slope(&x, &y);
    let resid: Vec<f64> = x.iter().zip(&y).map(|(xi, yi)| yi - a - b * xi).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let boots: Vec<f64> = (0..BOOTSTRAP_SAMPLES)
        .map(|_| {
            let yb: Vec<f64> = x.iter().map(|xi| a + b * xi + resid[rng.random_range(0..m)]).collect();
            slope(&x, &yb).0
        })
        .collect();
    let bm = boots.iter().sum::<f64>() / boots.len() as f64;
    let bse = (boots.iter().map(|v| (v - bm).powi(2)).sum::<f64>() / (boots.len() - 1) as f64).sqrt();
    Ok(HurstEstimate { hurst: (1.0 - b) / 2.0, std_error: bse / 2.0, frequencies: m })
}

/// Physical wavenumbers of an `n`-point periodic grid with spacing `dx`.
pub fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let f = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            2.0 * PI * f / (n as f64 * dx)
        })
        .collect()
}

/// `(-Delta)^H f = F^-1 { |k|^{2H} F f }` on a periodic grid, complex samples.
pub fn fractional_laplacian_complex(f: &[C64], h: f64, dx: f64) -> Result<Vec<C64>, NoiseError> {
    let n = f.len();
    if !n.is_power_of_two() {
        return Err(NoiseError::NotPowerOfTwo(n));
    }
    let mut planner = FftPlanner::new();
    let mut buf = f.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (z, k) in buf.iter_mut().zip(wavenumbers(n, dx)) {
        *z *= if k == 0.0 { 0.0 } else { k.abs().powf(2.0 * h) };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    Ok(buf.into_iter().map(|z| z / n as f64).collect())
}

pub fn fractional_laplacian(f: &[f64], h: f64, dx: f64) -> Result<Vec<f64>, NoiseError> {
    let z: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
    Ok(fractional_laplacian_complex(&z, h, dx)?.into_iter().map(|z| z.re).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumUnits {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for QuantumUnits {
    fn default() -> Self {
        QuantumUnits { hbar: 1.0, mass: 1.0 }
    }
}

/// `Q = -(hbar^2 / 2m) (-Delta)^H sqrt(rho) / sqrt(rho)`, with rho floored at
/// `RHO_FLOOR` in the denominator.
pub fn quantum_potential(rho: &[f64], h: f64, dx: f64, units: QuantumUnits) -> Result<Vec<f64>, NoiseError> {
    if let Some(i) = rho.iter().position(|&r| r < 0.0) {
        return Err(NoiseError::NegativeDensity(i));
    }
    let amp: Vec<f64> = rho.iter().map(|r| r.sqrt()).collect();
    let lap = fractional_laplacian(&amp, h, dx)?;
    let pre = -units.hbar * units.hbar / (2.0 * units.mass);
    Ok(lap.iter().zip(rho).map(|(l, r)| pre * l / r.max(RHO_FLOOR).sqrt()).collect())
}

/// Closed form at `H = 1` for a centred Gaussian of width `sigma`:
/// `(hbar^2 / 2m) (x^2 / (4 sigma^4) - 1 / (2 sigma^2))`.
pub fn gaussian_quantum_potential(x: f64, sigma: f64, units: QuantumUnits) -> f64 {
    units.hbar * units.hbar / (2.0 * units.mass) * (x * x / (4.0 * sigma.powi(4)) - 1.0 / (2.0 * sigma * sigma))
}

pub const DEFAULT_GAIN: f64 = 1.0;

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticReport {
    pub delta: Vec<f64>,
    pub norm: f64,
    pub threshold: f64,
    pub triggered: bool,
    pub gain: f64,
    pub grade: Grade,
    pub theta: f64,
}

impl DiagnosticReport {
    /// `exp(-i theta n)` on the number states `0..cutoff` of the named sector.
    pub fn correction_unitary(&self, cutoff: usize) -> CMat {
        correction_unitary(self.theta, cutoff)
    }

    pub fn to_csv(&self, dx: f64) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["x", "delta_q"]).expect("in-memory csv");
        for (i, d) in self.delta.iter().enumerate() {
            w.write_record([format!("{:.12}", i as f64 * dx), format!("{d:.17e}")]).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

pub fn correction_unitary(theta: f64, cutoff: usize) -> CMat {
    let d: Vec<C64> = (0..cutoff).map(|n| C64::from_polar(1.0, -theta * n as f64)).collect();
    diag(&d)
}

/// `dQ = Q_meas - Q_expected`, its L2 norm with weight `dx`, the trigger
/// `norm > eps`, and `theta = clamp(gain * norm, 0, pi)` when triggered.
pub fn diagnostic_and_correct(
    q_meas: &[f64],
    q_expected: &[f64],
    eps: f64,
    grade: Grade,
    gain: f64,
    dx: f64,
) -> Result<DiagnosticReport, NoiseError> {
    if q_meas.len() != q_expected.len() {
        return Err(NoiseError::GridMismatch(q_meas.len(), q_expected.len()));
    }
    let delta: Vec<f64> = q_meas.iter().zip(q_expected).map(|(a, b)| a - b).collect();
    let norm = (delta.iter().map(|d| d * d).sum::<f64>() * dx).sqrt();
    let triggered = norm > eps;
    let theta = if triggered { (gain * norm).clamp(0.0, PI) } else { 0.0 };
    Ok(DiagnosticReport { delta, norm, threshold: eps, triggered, gain, grade, theta })
}

/// Sample autocovariance of increments at lags `0..=max_lag`, pooled over paths.
pub fn increment_autocovariance(paths: &[FbmPath], max_lag: usize) -> Vec<f64> {
    let mut acc = vec![0.0; max_lag + 1];
    let mut cnt = vec![0usize; max_lag + 1];
    for p in paths {
        let x = p.increments();
        for (lag, (a, c)) in acc.iter_mut().zip(cnt.iter_mut()).enumerate() {
            for k in 0..x.len().saturating_sub(lag) {
                *a += x[k] * x[k + lag];
                *c += 1;
            }
        }
    }
    acc.iter().zip(&cnt).map(|(a, c)| a / *c as f64).collect()
}
