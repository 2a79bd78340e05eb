//! Complex time series with optional sample-rate metadata.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finite, non-empty complex time series.
///
/// The sample rate is carried as metadata only; no operation in this crate
/// interprets it.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    sample_rate: Option<f64>,
}

impl Signal {
    /// Builds a signal, rejecting empty input and non-finite samples.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        validate(&samples)?;
        Ok(Self { samples, sample_rate: None })
    }

    /// Like [`Signal::new`] but with a sample rate in Hz attached.
    pub fn with_sample_rate(samples: Vec<Complex64>, sample_rate: f64) -> Result<Self> {
        validate(&samples)?;
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "sample rate must be positive and finite, got {sample_rate}"
            )));
        }
        Ok(Self { samples, sample_rate: Some(sample_rate) })
    }

    /// Builds a signal from real samples (imaginary parts zero).
    pub fn from_real(samples: &[f64]) -> Result<Self> {
        Self::new(samples.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// Internal constructor for values produced by the crate itself, which
    /// are finite by construction.
    pub(crate) fn raw(samples: Vec<Complex64>, sample_rate: Option<f64>) -> Self {
        debug_assert!(!samples.is_empty());
        Self { samples, sample_rate }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a signal holds at least one sample.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate(&self) -> Option<f64> {
        self.sample_rate
    }

    /// Total energy: the squared L2 norm of the sample vector.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|s| s.im == 0.0)
    }
}

fn validate(samples: &[Complex64]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidSignal("a signal needs at least one sample".into()));
    }
    if let Some(i) = samples.iter().position(|s| !(s.re.is_finite() && s.im.is_finite())) {
        return Err(Error::InvalidSignal(format!("non-finite sample at index {i}")));
    }
    Ok(())
}
