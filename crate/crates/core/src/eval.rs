//! Synthetic chirps, seeded noise at exact SNR, the mean-absolute-error
//! metric, and paired Monte-Carlo sweeps comparing the two denoisers.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::filter::{self, FilterConfig};
use crate::frft::{self, FrftFilterConfig};
use crate::par;
use crate::signal::Signal;

/// Synthesizes `x(n) = exp(j * (pi / scale) * (alpha * n^2 + f0 * n))`.
///
/// Every sample has unit modulus. `alpha` sweeps the instantaneous
/// frequency; `f0` sets its starting value; `scale` fixes the phase unit.
pub fn synth_chirp(n_samples: usize, alpha: f64, f0: f64, scale: f64) -> Result<Signal> {
    if n_samples == 0 {
        return Err(Error::InvalidParams("chirp length must be at least 1".into()));
    }
    if !(scale.is_finite() && scale != 0.0) {
        return Err(Error::InvalidParams(format!(
            "phase scale must be finite and nonzero, got {scale}"
        )));
    }
    if !(alpha.is_finite() && f0.is_finite()) {
        return Err(Error::InvalidParams("chirp coefficients must be finite".into()));
    }
    let samples = (0..n_samples)
        .map(|i| {
            let i = i as f64;
            Complex64::from_polar(1.0, PI / scale * (alpha * i * i + f0 * i))
        })
        .collect();
    Signal::new(samples)
}

/// Noise distribution attached to an SNR target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// Independent Gaussian real and imaginary parts.
    ComplexCircularGaussian,
    /// Real-valued Gaussian noise; imaginary parts stay zero.
    RealGaussian,
}

/// Seeded additive-noise prescription.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Target signal-to-noise ratio in dB, hit exactly by construction.
    pub snr_db: f64,
    /// Seed fully determining the realization.
    pub seed: u64,
    pub kind: NoiseKind,
}

/// Adds seeded Gaussian noise scaled so the realized SNR equals the target.
///
/// The raw noise vector is drawn from the seed, then rescaled so that
/// `10 * log10(signal energy / noise energy)` comes out at `spec.snr_db`
/// for this very realization rather than in expectation.
pub fn add_awgn(x: &Signal, spec: &NoiseSpec) -> Result<Signal> {
    if x.energy() == 0.0 {
        return Err(Error::ZeroSignal);
    }
    if !spec.snr_db.is_finite() {
        return Err(Error::InvalidParams(format!("SNR must be finite, got {}", spec.snr_db)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let raw: Vec<Complex64> = match spec.kind {
        NoiseKind::ComplexCircularGaussian => {
            (0..x.len()).map(|_| Complex64::new(draw(), draw())).collect()
        }
        NoiseKind::RealGaussian => (0..x.len()).map(|_| Complex64::new(draw(), 0.0)).collect(),
    };
    let raw_energy: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
    let gain = (x.energy() / (raw_energy * 10f64.powf(spec.snr_db / 10.0))).sqrt();
    let samples = x.samples().iter().zip(&raw).map(|(s, w)| s + gain * w).collect();
    Ok(Signal::raw(samples, x.sample_rate()))
}

/// Mean absolute error: the complex-modulus sample errors averaged over the
/// signal.
pub fn mae(x: &Signal, x_hat: &Signal) -> Result<f64> {
    if x.len() != x_hat.len() {
        return Err(Error::LengthMismatch { expected: x.len(), got: x_hat.len() });
    }
    let sum: f64 =
        x.samples().iter().zip(x_hat.samples()).map(|(a, b)| (a - b).norm()).sum();
    Ok(sum / x.len() as f64)
}

/// Which denoiser a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Dlct,
    Frft,
}

impl Method {
    /// Stable lowercase identifier used in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            Method::Dlct => "dlct",
            Method::Frft => "frft",
        }
    }
}

/// Full prescription for an MAE-vs-SNR sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// SNR points in dB, strictly increasing.
    pub snr_points_db: Vec<f64>,
    /// Monte-Carlo trials per point.
    pub trials: usize,
    /// Methods compared on identical noisy realizations.
    pub methods: Vec<Method>,
    /// Root of the per-trial seed derivation.
    pub base_seed: u64,
    pub dlct_filter: FilterConfig,
    pub frft_filter: FrftFilterConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            snr_points_db: (-2..=8).map(|i| (i * 5) as f64).collect(),
            trials: 50,
            methods: vec![Method::Dlct, Method::Frft],
            base_seed: 7,
            dlct_filter: FilterConfig::default(),
            frft_filter: FrftFilterConfig::default(),
        }
    }
}

impl SweepConfig {
    /// Checks sweep-level invariants plus both filter configs.
    pub fn validate(&self) -> Result<()> {
        if self.snr_points_db.is_empty() {
            return Err(Error::InvalidParams("SNR list must not be empty".into()));
        }
        if self.snr_points_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParams("SNR points must be finite".into()));
        }
        for w in self.snr_points_db.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidParams(format!(
                    "SNR points must be strictly increasing; {} follows {}",
                    w[1], w[0]
                )));
            }
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("trial count must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::EmptyMethodSet);
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(Error::InvalidParams(format!(
                    "duplicate method {} in sweep",
                    m.name()
                )));
            }
        }
        self.dlct_filter.validate()?;
        if self.methods.contains(&Method::Frft) {
            self.frft_filter.validate()?;
        }
        Ok(())
    }
}

/// Aggregated error statistics for one method at one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodStats {
    pub method: Method,
    pub mean_mae: f64,
    /// Population standard deviation over trials.
    pub std_mae: f64,
    pub trials: usize,
}

/// One SNR point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub methods: Vec<MethodStats>,
}

/// Sweep output plus the exact configuration that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub config: SweepConfig,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Stable per-trial seed: independent streams for every (point, trial).
fn trial_seed(base: u64, snr_index: usize, trial: usize) -> u64 {
    let mut z = base.wrapping_add(0x9E3779B97F4A7C15);
    z = mix(z).wrapping_add((snr_index as u64).wrapping_mul(0xD1342543DE82EF95));
    z = mix(z).wrapping_add((trial as u64).wrapping_mul(0x9E3779B97F4A7C15));
    mix(z)
}

/// Runs the paired Monte-Carlo sweep.
///
/// Every method sees the identical noisy realization in each trial. Noise
/// is complex circular for complex inputs and real for real inputs. Trials
/// may run concurrently, but aggregation walks them in trial order, so the
/// result is reproducible bit for bit.
pub fn run_sweep(clean: &Signal, cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let kind = if clean.is_real() {
        NoiseKind::RealGaussian
    } else {
        NoiseKind::ComplexCircularGaussian
    };
    let mut rows = Vec::with_capacity(cfg.snr_points_db.len());
    for (si, &snr_db) in cfg.snr_points_db.iter().enumerate() {
        let per_trial: Vec<Vec<f64>> = par::try_map_indexed(cfg.trials, |t| {
            let spec = NoiseSpec { snr_db, seed: trial_seed(cfg.base_seed, si, t), kind };
            let noisy = add_awgn(clean, &spec)?;
            cfg.methods
                .iter()
                .map(|m| {
                    let denoised = match m {
                        Method::Dlct => filter::denoise(&noisy, &cfg.dlct_filter)?.0,
                        Method::Frft => frft::dfrft_denoise(&noisy, &cfg.frft_filter)?,
                    };
                    mae(clean, &denoised)
                })
                .collect()
        })?;
        let methods = cfg
            .methods
            .iter()
            .enumerate()
            .map(|(mi, &method)| {
                let errs: Vec<f64> = per_trial.iter().map(|t| t[mi]).collect();
                let mean = errs.iter().sum::<f64>() / errs.len() as f64;
                let var =
                    errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / errs.len() as f64;
                MethodStats { method, mean_mae: mean, std_mae: var.sqrt(), trials: cfg.trials }
            })
            .collect();
        rows.push(SweepRow { snr_db, methods });
    }
    Ok(SweepResult { rows, config: cfg.clone() })
}
