//! Helpers shared by the integration suites. The grid oracle recomputes the
//! transform as its literal double sum, independent of the FFT path.
#![allow(dead_code)]

use linchirp::dlct::{DlctParams, DlctSpectrum};
use linchirp::Signal;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub fn random_signal(n: usize, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Signal::new(
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

/// Unit-amplitude signal with quadratic phase rate `c * m0` and frequency
/// `k0`, exactly on the transform grid.
pub fn on_grid_chirp(n: usize, c: f64, m0: i64, k0: usize) -> Signal {
    Signal::new(
        (0..n)
            .map(|i| {
                let quad = c * m0 as f64 * (i * i) as f64;
                let lin = (k0 * i) as f64;
                Complex64::from_polar(1.0, TAU * ((quad + lin) % n as f64) / n as f64)
            })
            .collect(),
    )
    .unwrap()
}

/// Literal double-sum evaluation of the transform, O(N^2 L).
pub fn direct_grid(x: &Signal, params: &DlctParams) -> DlctSpectrum {
    let n = params.n_freq();
    let l = params.n_chirp();
    let mut out = DlctSpectrum::zeros(params.clone());
    for j in 0..l {
        let m = params.column_to_m(j);
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, s) in x.samples().iter().enumerate() {
                let phase = -TAU / n as f64
                    * (params.c() * m as f64 * (i * i) as f64 + (k * i) as f64);
                acc += s * Complex64::from_polar(1.0, phase);
            }
            out.set(k, m, acc).unwrap();
        }
    }
    out
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn rel_l2_err(est: &[Complex64], truth: &[Complex64]) -> f64 {
    let num: f64 = est.iter().zip(truth).map(|(a, b)| (a - b).norm_sqr()).sum();
    let den: f64 = truth.iter().map(|z| z.norm_sqr()).sum();
    (num / den).sqrt()
}
