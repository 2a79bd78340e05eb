//! Linear chirp transform: a bank of chirp-demodulated DFTs.
//!
//! For an N-sample signal, a positive chirp-rate resolution c, and an even
//! number L of chirp bins, the forward transform evaluates
//!
//! ```text
//! X(k, m) = sum_{n=0}^{N-1} x(n) exp(-j 2 pi (c m n^2 + k n) / N)
//! ```
//!
//! for k in `[0, N)` and signed m in `[-L/2, L/2)`. Each fixed-m column is
//! the DFT of the input demodulated by the conjugate quadratic phase, so the
//! whole grid costs O(N L log N) rather than the literal O(N^2 L). Setting
//! m = 0 recovers the plain DFT. The inverse averages the per-column
//! reconstructions and applies the single 1/(L N) normalization.
//!
//! Columns are computed independently, one per chirp bin, and stored in
//! DFT-style wraparound order `m = 0, 1, ..., L/2-1, -L/2, ..., -1`; the
//! public accessors speak signed m throughout.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::par;
use crate::signal::Signal;

/// Transform geometry: grid size, chirp bin count, and chirp-rate resolution.
///
/// Instances are validated on construction, so holding a `DlctParams` is
/// proof the combination is usable.
#[derive(Debug, Clone, PartialEq)]
pub struct DlctParams {
    c: f64,
    n_freq: usize,
    n_chirp: usize,
}

impl DlctParams {
    /// Validates c > 0 and finite, N >= 1, L even and >= 2.
    pub fn new(c: f64, n_freq: usize, n_chirp: usize) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParams(format!(
                "chirp resolution must be positive and finite, got {c}"
            )));
        }
        if n_freq == 0 {
            return Err(Error::InvalidParams("frequency grid needs at least one bin".into()));
        }
        if n_chirp < 2 || !n_chirp.is_multiple_of(2) {
            return Err(Error::InvalidParams(format!(
                "chirp bin count must be even and at least 2, got {n_chirp}"
            )));
        }
        Ok(Self { c, n_freq, n_chirp })
    }

    /// Grid with the default resolution c = 1/L, which tiles the chirp-rate
    /// axis so adjacent bins differ by one DFT bin of sweep across the frame.
    pub fn with_default_res(n_freq: usize, n_chirp: usize) -> Result<Self> {
        if n_chirp == 0 {
            return Err(Error::InvalidParams("chirp bin count must be nonzero".into()));
        }
        Self::new(1.0 / n_chirp as f64, n_freq, n_chirp)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n_freq(&self) -> usize {
        self.n_freq
    }

    pub fn n_chirp(&self) -> usize {
        self.n_chirp
    }

    /// Inclusive signed chirp-bin range `[-L/2, L/2 - 1]`.
    pub fn m_range(&self) -> (i64, i64) {
        let half = (self.n_chirp / 2) as i64;
        (-half, half - 1)
    }

    /// Signed chirp bin stored at column `j`.
    pub fn column_to_m(&self, j: usize) -> i64 {
        debug_assert!(j < self.n_chirp);
        if j < self.n_chirp / 2 {
            j as i64
        } else {
            j as i64 - self.n_chirp as i64
        }
    }

    /// Storage column of a signed chirp bin, or None when out of range.
    pub fn m_to_column(&self, m: i64) -> Option<usize> {
        let (lo, hi) = self.m_range();
        if m < lo || m > hi {
            return None;
        }
        Some(m.rem_euclid(self.n_chirp as i64) as usize)
    }
}

/// Transform coefficients on the full N x L grid.
///
/// Storage is column-major by chirp bin in wraparound order; every column
/// holds the N frequency coefficients of one chirp slice.
#[derive(Debug, Clone, PartialEq)]
pub struct DlctSpectrum {
    params: DlctParams,
    data: Vec<Complex64>,
}

impl DlctSpectrum {
    /// All-zero grid for the given geometry.
    pub fn zeros(params: DlctParams) -> Self {
        let len = params.n_freq * params.n_chirp;
        Self { params, data: vec![Complex64::ZERO; len] }
    }

    pub fn params(&self) -> &DlctParams {
        &self.params
    }

    /// Column `X(., m)` for a signed chirp bin.
    pub fn slice(&self, m: i64) -> Result<&[Complex64]> {
        let j = self.params.m_to_column(m).ok_or_else(|| self.m_error(m))?;
        Ok(self.column(j))
    }

    pub fn get(&self, k: usize, m: i64) -> Result<Complex64> {
        let j = self.params.m_to_column(m).ok_or_else(|| self.m_error(m))?;
        if k >= self.params.n_freq {
            return Err(self.k_error(k));
        }
        Ok(self.data[j * self.params.n_freq + k])
    }

    pub fn set(&mut self, k: usize, m: i64, value: Complex64) -> Result<()> {
        let j = self.params.m_to_column(m).ok_or_else(|| self.m_error(m))?;
        if k >= self.params.n_freq {
            return Err(self.k_error(k));
        }
        self.data[j * self.params.n_freq + k] = value;
        Ok(())
    }

    /// Sum of squared magnitudes over the whole grid.
    pub fn total_energy(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub(crate) fn column(&self, j: usize) -> &[Complex64] {
        let n = self.params.n_freq;
        &self.data[j * n..(j + 1) * n]
    }

    fn m_error(&self, m: i64) -> Error {
        let (lo, hi) = self.params.m_range();
        Error::IndexOutOfRange(format!("chirp bin {m} outside [{lo}, {hi}]"))
    }

    fn k_error(&self, k: usize) -> Error {
        Error::IndexOutOfRange(format!(
            "frequency bin {k} outside [0, {})",
            self.params.n_freq
        ))
    }
}

/// Unit phasors `exp(sign * j * 2 pi * rate * n^2 / n_len)`.
///
/// The quadratic argument is folded modulo `n_len` before scaling to keep
/// the angle small; this matters for the large n^2 products.
pub(crate) fn quadratic_phasors(n_len: usize, rate: f64, sign: f64) -> Vec<Complex64> {
    let n_f = n_len as f64;
    (0..n_len)
        .map(|n| {
            let q = rate * (n * n) as f64;
            Complex64::from_polar(1.0, sign * TAU * (q % n_f) / n_f)
        })
        .collect()
}

/// Forward transform of a signal whose length equals the configured grid size.
pub fn dlct_forward(x: &Signal, params: &DlctParams) -> Result<DlctSpectrum> {
    let n = params.n_freq;
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    let fft = fft_plan(n, false);
    let columns = par::map_indexed(params.n_chirp, |j| {
        let m = params.column_to_m(j);
        let phasors = quadratic_phasors(n, params.c * m as f64, -1.0);
        let mut buf: Vec<Complex64> =
            x.samples().iter().zip(&phasors).map(|(s, p)| s * p).collect();
        fft.process(&mut buf);
        buf
    });
    let mut data = Vec::with_capacity(n * params.n_chirp);
    for col in columns {
        data.extend_from_slice(&col);
    }
    Ok(DlctSpectrum { params: params.clone(), data })
}

/// Inverse transform; reconstructs forward output up to rounding.
///
/// Each column is inverse-DFT'd and remodulated by its quadratic phase; the
/// column reconstructions are summed and the single 1/(L N) normalization is
/// applied at the end.
pub fn dlct_inverse(spectrum: &DlctSpectrum) -> Result<Signal> {
    let p = &spectrum.params;
    let n = p.n_freq;
    let l = p.n_chirp;
    let ifft = fft_plan(n, true);
    let parts = par::map_indexed(l, |j| {
        let m = p.column_to_m(j);
        let mut buf = spectrum.column(j).to_vec();
        ifft.process(&mut buf);
        let phasors = quadratic_phasors(n, p.c * m as f64, 1.0);
        for (b, ph) in buf.iter_mut().zip(&phasors) {
            *b *= ph;
        }
        buf
    });
    let mut out = vec![Complex64::ZERO; n];
    for part in &parts {
        for (o, v) in out.iter_mut().zip(part) {
            *o += v;
        }
    }
    let scale = 1.0 / (l as f64 * n as f64);
    for o in &mut out {
        *o *= scale;
    }
    Ok(Signal::raw(out, None))
}

type FftCache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

pub(crate) fn fft_plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<FftCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}
