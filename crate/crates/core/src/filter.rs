//! Iterative time-varying filtering: per frame, repeatedly transform the
//! residual, extract the dominant chirp component, and subtract until the
//! residual energy falls under a threshold or the component budget runs out.
//! Long signals are segmented and recombined by windowed overlap-add.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::analysis::{extract_component, find_peak, ChirpComponent};
use crate::dlct::{dlct_forward, DlctParams};
use crate::error::{Error, Result};
use crate::signal::Signal;

/// Parameters for the iterative filter.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    /// Per-frame transform parameters; `dlct.n_freq()` must equal `frame_len`.
    pub dlct: DlctParams,
    /// Maximum components extracted per frame.
    pub q_max: usize,
    /// Stop once residual energy over initial energy drops below this.
    pub p_th: f64,
    /// Spectral mask half-width handed to the extractor.
    pub half_width: usize,
    /// Peak-to-mean ratio a cell must reach to count as a component.
    pub min_dominance: f64,
    /// Analysis frame length.
    pub frame_len: usize,
    /// Hop between frame starts; must not exceed `frame_len`.
    pub hop: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            dlct: DlctParams::with_default_res(256, 64).expect("valid defaults"),
            q_max: 10,
            p_th: 0.05,
            half_width: 2,
            min_dominance: 10.0,
            frame_len: 256,
            hop: 128,
        }
    }
}

impl FilterConfig {
    /// Checks the cross-field invariants.
    pub fn validate(&self) -> Result<()> {
        if self.dlct.n_freq() != self.frame_len {
            return Err(Error::ConfigMismatch(format!(
                "transform expects {}-sample frames but frame_len is {}",
                self.dlct.n_freq(),
                self.frame_len
            )));
        }
        if self.q_max == 0 {
            return Err(Error::InvalidParams("component budget must be at least 1".into()));
        }
        if !(self.p_th > 0.0 && self.p_th <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "residual threshold must lie in (0, 1], got {}",
                self.p_th
            )));
        }
        if !(self.min_dominance.is_finite() && self.min_dominance > 0.0) {
            return Err(Error::InvalidParams(format!(
                "dominance threshold must be positive and finite, got {}",
                self.min_dominance
            )));
        }
        if 2 * self.half_width >= self.frame_len {
            return Err(Error::InvalidParams(format!(
                "window half-width {} does not fit a {}-bin spectrum",
                self.half_width, self.frame_len
            )));
        }
        if self.hop == 0 || self.hop > self.frame_len {
            return Err(Error::InvalidParams(format!(
                "hop must lie in [1, frame_len]; got hop {} with frame_len {}",
                self.hop, self.frame_len
            )));
        }
        Ok(())
    }
}

/// Why per-frame extraction stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Residual energy ratio fell below the threshold.
    ThresholdReached,
    /// The component budget ran out with the ratio still above threshold.
    BudgetExhausted,
    /// No grid cell stood out (or the residual hit exact zero).
    NoSignificantPeak,
}

/// Per-frame extraction trace.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    /// Residual energy after each completed iteration, nonincreasing.
    pub residual_energies: Vec<f64>,
    /// Extracted components in extraction order.
    pub components: Vec<ChirpComponent>,
    /// Why the loop stopped.
    pub stop_reason: StopReason,
}

/// Full run trace, one record per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseReport {
    pub frames: Vec<FrameRecord>,
}

/// Runs the extraction loop on a single frame.
///
/// Returns the component-sum estimate together with the iteration trace.
/// A zero-energy frame yields a zero estimate, no iterations, and
/// [`StopReason::NoSignificantPeak`].
pub fn denoise_frame(frame: &Signal, cfg: &FilterConfig) -> Result<(Signal, FrameRecord)> {
    cfg.validate()?;
    if frame.len() != cfg.frame_len {
        return Err(Error::ConfigMismatch(format!(
            "frame has {} samples but the filter is configured for {}",
            frame.len(),
            cfg.frame_len
        )));
    }
    let n = frame.len();
    let sr = frame.sample_rate();
    let p0 = frame.energy();
    let mut record = FrameRecord {
        residual_energies: Vec::new(),
        components: Vec::new(),
        stop_reason: StopReason::NoSignificantPeak,
    };
    if p0 == 0.0 {
        return Ok((Signal::raw(vec![Complex64::ZERO; n], sr), record));
    }

    let mut residual: Vec<Complex64> = frame.samples().to_vec();
    let mut estimate = vec![Complex64::ZERO; n];
    for iteration in 1..=cfg.q_max {
        let r = Signal::raw(residual.clone(), sr);
        let spectrum = dlct_forward(&r, &cfg.dlct)?;
        let peak = match find_peak(&spectrum, cfg.min_dominance) {
            Ok(p) => p,
            Err(Error::NoSignificantPeak { .. }) | Err(Error::EmptySpectrum) => {
                record.stop_reason = StopReason::NoSignificantPeak;
                break;
            }
            Err(e) => return Err(e),
        };
        let comp = extract_component(&r, &peak, &cfg.dlct, cfg.half_width)?;
        for ((r, e), c) in residual.iter_mut().zip(&mut estimate).zip(comp.waveform.samples()) {
            *r -= c;
            *e += c;
        }
        let p_s: f64 = residual.iter().map(|z| z.norm_sqr()).sum();
        record.residual_energies.push(p_s);
        record.components.push(comp);
        if p_s / p0 < cfg.p_th {
            record.stop_reason = StopReason::ThresholdReached;
            break;
        }
        if iteration == cfg.q_max {
            record.stop_reason = StopReason::BudgetExhausted;
        }
    }
    Ok((Signal::raw(estimate, sr), record))
}

/// Periodic Hann window, exactly representable as three DFT coefficients.
fn hann_periodic(len: usize) -> Vec<f64> {
    (0..len).map(|i| 0.5 - 0.5 * (TAU * i as f64 / len as f64).cos()).collect()
}

/// Splits `x` into windowed frames, maps each through `f`, and recombines
/// the returned estimates by overlap-add with envelope division.
///
/// Inputs no longer than one frame are processed as a single rectangular
/// frame. Longer inputs are extended by half a frame of leading zeros plus
/// trailing zeros to fill the hop lattice, windowed with a periodic Hann
/// window (rectangular when `hop == frame_len`), and trimmed back to the
/// input length. When `f` returns its input unchanged the round trip is
/// exact, so any distortion in the output comes from `f` alone.
///
/// `f` receives the windowed frame and its index and returns the processed
/// frame plus a per-frame record.
pub fn process_frames<R, F>(
    x: &Signal,
    frame_len: usize,
    hop: usize,
    mut f: F,
) -> Result<(Signal, Vec<R>)>
where
    F: FnMut(&Signal, usize) -> Result<(Signal, R)>,
{
    if frame_len == 0 {
        return Err(Error::InvalidParams("frame_len must be at least 1".into()));
    }
    if hop == 0 || hop > frame_len {
        return Err(Error::InvalidParams(format!(
            "hop must lie in [1, frame_len]; got hop {hop} with frame_len {frame_len}"
        )));
    }
    let len = x.len();
    let sr = x.sample_rate();

    if len <= frame_len {
        let mut samples = x.samples().to_vec();
        samples.resize(frame_len, Complex64::ZERO);
        let (est, record) = f(&Signal::raw(samples, sr), 0)?;
        if est.len() != frame_len {
            return Err(Error::LengthMismatch { expected: frame_len, got: est.len() });
        }
        let out = est.samples()[..len].to_vec();
        return Ok((Signal::raw(out, sr), vec![record]));
    }

    let lead = frame_len / 2;
    let window = if hop == frame_len { vec![1.0; frame_len] } else { hann_periodic(frame_len) };
    let covered = lead + len;
    let n_frames = 1 + (covered - frame_len).div_ceil(hop);
    let padded = (n_frames - 1) * hop + frame_len;

    let mut num = vec![Complex64::ZERO; padded];
    let mut env = vec![0.0f64; padded];
    let mut records = Vec::with_capacity(n_frames);
    let mut frame = vec![Complex64::ZERO; frame_len];
    for fi in 0..n_frames {
        let start = fi * hop;
        for (i, slot) in frame.iter_mut().enumerate() {
            let t = start + i;
            let v = if t >= lead && t - lead < len {
                x.samples()[t - lead]
            } else {
                Complex64::ZERO
            };
            *slot = v * window[i];
        }
        let (est, record) = f(&Signal::raw(frame.clone(), sr), fi)?;
        if est.len() != frame_len {
            return Err(Error::LengthMismatch { expected: frame_len, got: est.len() });
        }
        for (i, v) in est.samples().iter().enumerate() {
            num[start + i] += v;
            env[start + i] += window[i];
        }
        records.push(record);
    }

    let out: Vec<Complex64> = (lead..lead + len)
        .map(|t| if env[t] > 1e-12 { num[t] / env[t] } else { Complex64::ZERO })
        .collect();
    Ok((Signal::raw(out, sr), records))
}

/// Denoises a signal of any length by framed iterative extraction.
///
/// Output has the input's length; the report holds one record per frame.
pub fn denoise(x: &Signal, cfg: &FilterConfig) -> Result<(Signal, DenoiseReport)> {
    cfg.validate()?;
    let (out, frames) =
        process_frames(x, cfg.frame_len, cfg.hop, |frame, _| denoise_frame(frame, cfg))?;
    Ok((out, DenoiseReport { frames }))
}
