//! Peak picking and single-component extraction on the chirp grid.

use num_complex::Complex64;

use crate::dlct::{quadratic_phasors, DlctParams, DlctSpectrum};
use crate::error::{Error, Result};
use crate::signal::Signal;

/// Location and strength of the dominant grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakLocation {
    /// Frequency bin in `[0, N)`.
    pub k: usize,
    /// Signed chirp bin in `[-L/2, L/2)`.
    pub m: i64,
    /// Squared magnitude of the cell.
    pub energy: f64,
    /// Peak energy over mean grid energy.
    pub dominance: f64,
}

/// One extracted chirp-band component.
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpComponent {
    /// Time-domain waveform, same length as the input frame.
    pub waveform: Signal,
    /// Frequency bin the extraction was centered on.
    pub k: usize,
    /// Signed chirp bin the extraction was demodulated with.
    pub m: i64,
    /// Chirp rate `c * m` of the demodulator.
    pub beta: f64,
    /// Energy of the extracted waveform.
    pub energy: f64,
}

/// Finds the grid cell with the highest energy.
///
/// Ties are broken toward the smallest `|m|`, then the smallest `k`, then
/// the smallest signed `m`, giving a total order so the result never depends
/// on scan order. Fails with [`Error::EmptySpectrum`] when every cell is
/// zero and with [`Error::NoSignificantPeak`] when the best cell's
/// peak-to-mean ratio is below `min_dominance`.
pub fn find_peak(spectrum: &DlctSpectrum, min_dominance: f64) -> Result<PeakLocation> {
    if !(min_dominance.is_finite() && min_dominance > 0.0) {
        return Err(Error::InvalidParams(format!(
            "dominance threshold must be positive and finite, got {min_dominance}"
        )));
    }
    let p = spectrum.params();
    let n = p.n_freq();
    let l = p.n_chirp();
    let mut total = 0.0f64;
    let mut best: Option<(f64, i64, usize)> = None; // (energy, m, k)
    for j in 0..l {
        let m = p.column_to_m(j);
        for (k, z) in spectrum.column(j).iter().enumerate() {
            let e = z.norm_sqr();
            total += e;
            let candidate = (e, m, k);
            let better = match best {
                None => true,
                Some(cur) => ranks_higher(candidate, cur),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    if total == 0.0 {
        return Err(Error::EmptySpectrum);
    }
    let (energy, m, k) = best.expect("grid is non-empty");
    let mean = total / (n * l) as f64;
    let dominance = energy / mean;
    if dominance < min_dominance {
        return Err(Error::NoSignificantPeak { dominance, min_dominance });
    }
    Ok(PeakLocation { k, m, energy, dominance })
}

fn ranks_higher(a: (f64, i64, usize), b: (f64, i64, usize)) -> bool {
    if a.0 != b.0 {
        return a.0 > b.0;
    }
    if a.1.abs() != b.1.abs() {
        return a.1.abs() < b.1.abs();
    }
    if a.2 != b.2 {
        return a.2 < b.2;
    }
    a.1 < b.1
}

/// Projects `x` onto the `2 * half_width + 1` demodulated DFT bins around a
/// peak: demodulate with the conjugate quadratic phase for `peak.m`, DFT,
/// zero everything outside the circular window around `peak.k`, inverse DFT,
/// remodulate.
///
/// The output is a linear orthogonal projection of `x`, so repeating the
/// extraction reproduces its input and never gains energy.
pub fn extract_component(
    x: &Signal,
    peak: &PeakLocation,
    params: &DlctParams,
    half_width: usize,
) -> Result<ChirpComponent> {
    let n = params.n_freq();
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    if 2 * half_width >= n {
        return Err(Error::InvalidParams(format!(
            "window half-width {half_width} does not fit a {n}-bin spectrum"
        )));
    }
    if peak.k >= n {
        return Err(Error::IndexOutOfRange(format!(
            "frequency bin {} outside [0, {n})",
            peak.k
        )));
    }
    let (lo, hi) = params.m_range();
    if peak.m < lo || peak.m > hi {
        return Err(Error::IndexOutOfRange(format!(
            "chirp bin {} outside [{lo}, {hi}]",
            peak.m
        )));
    }

    let beta = params.c() * peak.m as f64;
    let down = quadratic_phasors(n, beta, -1.0);
    let mut buf: Vec<Complex64> = x.samples().iter().zip(&down).map(|(s, p)| s * p).collect();
    dft_in_place(&mut buf, false);
    let mut keep = vec![false; n];
    for d in -(half_width as i64)..=half_width as i64 {
        let idx = (peak.k as i64 + d).rem_euclid(n as i64) as usize;
        keep[idx] = true;
    }
    for (z, &k) in buf.iter_mut().zip(&keep) {
        if !k {
            *z = Complex64::ZERO;
        }
    }
    dft_in_place(&mut buf, true);
    let inv_n = 1.0 / n as f64;
    let up = quadratic_phasors(n, beta, 1.0);
    for (z, p) in buf.iter_mut().zip(&up) {
        *z *= p * inv_n;
    }
    let energy: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
    Ok(ChirpComponent {
        waveform: Signal::raw(buf, x.sample_rate()),
        k: peak.k,
        m: peak.m,
        beta,
        energy,
    })
}

fn dft_in_place(buf: &mut [Complex64], inverse: bool) {
    let fft = crate::dlct::fft_plan(buf.len(), inverse);
    fft.process(buf);
}
