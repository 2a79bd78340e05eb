//! Discrete fractional Fourier transform and a single-pass
//! concentration-search denoiser used as the comparison baseline.
//!
//! The transform is built from an orthonormal eigenbasis of the DFT: the
//! cyclic tridiagonal matrix S with diagonal 2cos(2*pi*n/N) commutes with
//! the DFT, its eigenvectors sorted by descending eigenvalue follow the
//! discrete Hermite-Gauss ladder, and raising the unit-modulus DFT
//! eigenvalues to a fractional power interpolates between the identity
//! (order 0), the centered DFT (order 1), and parity (order 2). Parity
//! symmetry splits S into even and odd blocks which are diagonalized
//! separately; this keeps the near-degenerate high-order pairs from mixing.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::par;
use crate::signal::Signal;

/// Transform order, reduced modulo 4.
///
/// Order 0 is the identity, 1 the centered DFT, 2 parity, 3 the inverse
/// centered DFT; the rotation angle is `a * pi / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrftOrder {
    a: f64,
}

impl FrftOrder {
    /// Wraps any finite order into `[0, 4)`.
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParams(format!("transform order must be finite, got {a}")));
        }
        Ok(FrftOrder { a: a.rem_euclid(4.0) })
    }

    /// The reduced order in `[0, 4)`.
    pub fn value(&self) -> f64 {
        self.a
    }

    /// The order undoing this one.
    pub fn inverse(&self) -> Self {
        FrftOrder { a: (-self.a).rem_euclid(4.0) }
    }
}

/// Where the spectral mask is centered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CenterPolicy {
    /// Center on the strongest bin of the chosen-order spectrum.
    #[default]
    PeakBin,
}

/// Parameters for the concentration-search denoiser.
#[derive(Debug, Clone, PartialEq)]
pub struct FrftFilterConfig {
    /// Order search grid as (min, max, step).
    pub order_grid: (f64, f64, f64),
    /// Circular mask half-width around the chosen center bin.
    pub half_width: usize,
    /// Mask centering rule.
    pub center_policy: CenterPolicy,
}

impl Default for FrftFilterConfig {
    fn default() -> Self {
        FrftFilterConfig {
            order_grid: (0.01, 1.99, 0.01),
            half_width: 4,
            center_policy: CenterPolicy::PeakBin,
        }
    }
}

impl FrftFilterConfig {
    /// Checks grid invariants.
    pub fn validate(&self) -> Result<()> {
        let (lo, hi, step) = self.order_grid;
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(Error::InvalidParams("order grid bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "order grid step must be positive, got {step}"
            )));
        }
        if lo >= hi {
            return Err(Error::InvalidParams(format!(
                "order grid needs min < max, got [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    fn grid_points(&self) -> Vec<f64> {
        let (lo, hi, step) = self.order_grid;
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| lo + i as f64 * step).collect()
    }
}

struct FrftBasis {
    /// Eigenvectors as columns, rows cyclically shifted to the centered
    /// index convention. Real-valued, stored complex for the products.
    u: DMatrix<Complex64>,
    /// Hermite index per column.
    hermite: Vec<usize>,
}

impl FrftBasis {
    fn build(n: usize) -> FrftBasis {
        let mut s = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            s[(i, i)] = 2.0 * (TAU * i as f64 / n as f64).cos();
            s[(i, (i + 1) % n)] += 1.0;
            s[(i, (i + n - 1) % n)] += 1.0;
        }

        // Parity-adapted orthonormal bases of R^N.
        let mut even_cols: Vec<DVector<f64>> = Vec::new();
        let mut odd_cols: Vec<DVector<f64>> = Vec::new();
        even_cols.push(basis_vec(n, &[(0, 1.0)]));
        let r = 0.5f64.sqrt();
        for j in 1..n.div_ceil(2) {
            even_cols.push(basis_vec(n, &[(j, r), (n - j, r)]));
            odd_cols.push(basis_vec(n, &[(j, r), (n - j, -r)]));
        }
        if n.is_multiple_of(2) {
            even_cols.push(basis_vec(n, &[(n / 2, 1.0)]));
        }

        let mut pairs: Vec<(usize, DVector<f64>)> = Vec::with_capacity(n);
        pairs.extend(block_eigvecs(&s, &even_cols).into_iter().enumerate().map(|(r, v)| (2 * r, v)));
        pairs.extend(
            block_eigvecs(&s, &odd_cols).into_iter().enumerate().map(|(r, v)| (2 * r + 1, v)),
        );
        pairs.sort_by_key(|(h, _)| *h);

        let shift = n.div_ceil(2);
        let mut u = DMatrix::<Complex64>::zeros(n, n);
        let mut hermite = Vec::with_capacity(n);
        for (col, (h, v)) in pairs.iter().enumerate() {
            hermite.push(*h);
            for p in 0..n {
                u[(p, col)] = Complex64::new(v[(p + shift) % n], 0.0);
            }
        }
        FrftBasis { u, hermite }
    }

    fn apply(&self, x: &[Complex64], a: f64) -> Vec<Complex64> {
        let xv = DVector::from_column_slice(x);
        let mut coeffs = self.u.tr_mul(&xv);
        for (c, &h) in coeffs.iter_mut().zip(&self.hermite) {
            *c *= Complex64::from_polar(1.0, -FRAC_PI_2 * (a * h as f64).rem_euclid(4.0));
        }
        (&self.u * coeffs).iter().copied().collect()
    }
}

fn basis_vec(n: usize, entries: &[(usize, f64)]) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    for &(i, w) in entries {
        v[i] = w;
    }
    v
}

/// Diagonalizes S restricted to the span of `cols` and returns the
/// full-space eigenvectors sorted by descending eigenvalue.
fn block_eigvecs(s: &DMatrix<f64>, cols: &[DVector<f64>]) -> Vec<DVector<f64>> {
    if cols.is_empty() {
        return Vec::new();
    }
    let n = s.nrows();
    let d = cols.len();
    let mut p = DMatrix::<f64>::zeros(n, d);
    for (c, v) in cols.iter().enumerate() {
        p.set_column(c, v);
    }
    let block = p.tr_mul(s) * &p;
    let eig = block.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    order.into_iter().map(|i| &p * eig.eigenvectors.column(i)).collect()
}

fn basis(n: usize) -> Arc<FrftBasis> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<FrftBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache.entry(n).or_insert_with(|| Arc::new(FrftBasis::build(n))).clone()
}

/// Applies the order-`a` fractional transform to `x`.
///
/// Unitary for every order; orders compose additively. The eigenbasis is
/// computed once per signal length and cached.
pub fn dfrft(x: &Signal, order: FrftOrder) -> Result<Signal> {
    if x.len() < 2 {
        return Err(Error::TooShort { len: x.len(), min: 2 });
    }
    let b = basis(x.len());
    Ok(Signal::raw(b.apply(x.samples(), order.value()), x.sample_rate()))
}

/// Denoises by searching the order grid for the domain where `x` is most
/// concentrated, masking around the peak bin there, and transforming back.
///
/// The concentration score is peak-to-total energy; score ties resolve to
/// the smallest order, peak-bin ties to the smallest bin. An all-zero input
/// comes back all-zero.
pub fn dfrft_denoise(x: &Signal, cfg: &FrftFilterConfig) -> Result<Signal> {
    cfg.validate()?;
    if x.len() < 2 {
        return Err(Error::TooShort { len: x.len(), min: 2 });
    }
    let grid = cfg.grid_points();
    let b = basis(x.len());
    let scores: Vec<f64> = par::map_indexed(grid.len(), |i| {
        let y = b.apply(x.samples(), grid[i]);
        let total: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            0.0
        } else {
            y.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max) / total
        }
    });
    let mut best = 0usize;
    for (i, &sc) in scores.iter().enumerate() {
        if sc > scores[best] {
            best = i;
        }
    }
    let a_star = grid[best];

    let mut y = b.apply(x.samples(), a_star);
    let center = match cfg.center_policy {
        CenterPolicy::PeakBin => {
            let mut peak = 0usize;
            for (k, z) in y.iter().enumerate() {
                if z.norm_sqr() > y[peak].norm_sqr() {
                    peak = k;
                }
            }
            peak
        }
    };
    let n = y.len() as i64;
    let hw = cfg.half_width as i64;
    let mut keep = vec![false; y.len()];
    for d in -hw..=hw {
        keep[(center as i64 + d).rem_euclid(n) as usize] = true;
    }
    for (z, &k) in y.iter_mut().zip(&keep) {
        if !k {
            *z = Complex64::ZERO;
        }
    }
    let back = b.apply(&y, (-a_star).rem_euclid(4.0));
    Ok(Signal::raw(back, x.sample_rate()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(n: usize, seed: u64) -> Signal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Signal::new(
            (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap()
    }

    fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn centered_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        let half = n as f64 / 2.0;
        let scale = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|p| {
                let mut acc = Complex64::ZERO;
                for (q, v) in x.iter().enumerate() {
                    let ph = -TAU * (p as f64 - half) * (q as f64 - half) / n as f64;
                    acc += v * Complex64::from_polar(scale, ph);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn order_reduces_modulo_four() {
        assert!((FrftOrder::new(4.5).unwrap().value() - 0.5).abs() < 1e-12);
        assert!((FrftOrder::new(-0.5).unwrap().value() - 3.5).abs() < 1e-12);
        assert_eq!(FrftOrder::new(4.0).unwrap().value(), 0.0);
        assert!(FrftOrder::new(f64::NAN).is_err());
        assert!((FrftOrder::new(1.25).unwrap().inverse().value() - 2.75).abs() < 1e-12);
    }

    #[test]
    fn order_zero_is_identity() {
        for n in [16usize, 64, 256] {
            let x = random_signal(n, 1);
            let y = dfrft(&x, FrftOrder::new(0.0).unwrap()).unwrap();
            assert!(max_abs_diff(x.samples(), y.samples()) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn order_one_is_the_centered_dft() {
        for n in [16usize, 64, 256] {
            let x = random_signal(n, 2);
            let y = dfrft(&x, FrftOrder::new(1.0).unwrap()).unwrap();
            let oracle = centered_dft(x.samples());
            assert!(max_abs_diff(y.samples(), &oracle) < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn order_two_is_parity() {
        for n in [16usize, 64, 256] {
            let x = random_signal(n, 3);
            let y = dfrft(&x, FrftOrder::new(2.0).unwrap()).unwrap();
            let flipped: Vec<Complex64> =
                (0..n).map(|p| x.samples()[(n - p) % n]).collect();
            assert!(max_abs_diff(y.samples(), &flipped) < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn half_orders_compose_to_the_dft() {
        let x = random_signal(64, 4);
        let half = FrftOrder::new(0.5).unwrap();
        let twice = dfrft(&dfrft(&x, half).unwrap(), half).unwrap();
        let once = dfrft(&x, FrftOrder::new(1.0).unwrap()).unwrap();
        assert!(max_abs_diff(twice.samples(), once.samples()) < 1e-6);
    }

    #[test]
    fn transform_is_unitary() {
        for n in [16usize, 64, 256] {
            let x = random_signal(n, 5);
            for a in [0.3, 0.77, 1.0, 1.5, 2.9, 3.99] {
                let y = dfrft(&x, FrftOrder::new(a).unwrap()).unwrap();
                let rel = (y.energy() - x.energy()).abs() / x.energy();
                assert!(rel < 1e-8, "n = {n}, a = {a}, rel = {rel}");
            }
        }
    }

    #[test]
    fn orders_add() {
        let x = random_signal(64, 6);
        for (a, c) in [(0.4, 0.35), (1.2, 0.9), (2.5, 3.0)] {
            let lhs = dfrft(&dfrft(&x, FrftOrder::new(a).unwrap()).unwrap(), FrftOrder::new(c).unwrap())
                .unwrap();
            let rhs = dfrft(&x, FrftOrder::new(a + c).unwrap()).unwrap();
            assert!(max_abs_diff(lhs.samples(), rhs.samples()) < 1e-6, "a = {a}, b = {c}");
        }
    }

    #[test]
    fn inverse_order_round_trips() {
        for n in [16usize, 64, 256] {
            let x = random_signal(n, 7);
            for a in [0.25, 1.0, 1.8, 3.1] {
                let o = FrftOrder::new(a).unwrap();
                let back = dfrft(&dfrft(&x, o).unwrap(), o.inverse()).unwrap();
                assert!(max_abs_diff(back.samples(), x.samples()) < 1e-8, "n = {n}, a = {a}");
            }
        }
    }

    #[test]
    fn rejects_too_short_signals() {
        let x = Signal::from_real(&[1.0]).unwrap();
        assert_eq!(
            dfrft(&x, FrftOrder::new(1.0).unwrap()),
            Err(Error::TooShort { len: 1, min: 2 })
        );
        assert!(matches!(
            dfrft_denoise(&x, &FrftFilterConfig::default()),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let ok = FrftFilterConfig::default();
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.order_grid = (0.5, 0.5, 0.01);
        assert!(matches!(bad.validate(), Err(Error::InvalidParams(_))));
        let mut bad = ok.clone();
        bad.order_grid = (0.1, 1.0, 0.0);
        assert!(matches!(bad.validate(), Err(Error::InvalidParams(_))));
        let mut bad = ok;
        bad.order_grid = (0.1, f64::INFINITY, 0.1);
        assert!(matches!(bad.validate(), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn grid_point_count_is_robust_to_rounding() {
        let cfg = FrftFilterConfig { order_grid: (0.01, 1.99, 0.01), ..Default::default() };
        let pts = cfg.grid_points();
        assert_eq!(pts.len(), 199);
        assert!((pts[0] - 0.01).abs() < 1e-12);
        assert!((pts[198] - 1.99).abs() < 1e-9);
    }

    #[test]
    fn sinusoid_concentrates_at_order_one() {
        let n = 64usize;
        let x = Signal::new(
            (0..n)
                .map(|i| Complex64::from_polar(1.0, TAU * 10.0 * i as f64 / n as f64))
                .collect(),
        )
        .unwrap();
        let cfg = FrftFilterConfig::default();
        let grid = cfg.grid_points();
        let b = basis(n);
        let mut best = (0.0f64, 0.0f64);
        for &a in &grid {
            let y = b.apply(x.samples(), a);
            let total: f64 = y.iter().map(|z| z.norm_sqr()).sum();
            let peak = y.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
            if peak / total > best.0 {
                best = (peak / total, a);
            }
        }
        assert!((best.1 - 1.0).abs() < 1e-6, "best order {}", best.1);

        let out = dfrft_denoise(&x, &cfg).unwrap();
        let mut dot = Complex64::ZERO;
        for (a, b) in out.samples().iter().zip(x.samples()) {
            dot += a * b.conj();
        }
        let corr = dot.norm() / (out.energy().sqrt() * x.energy().sqrt());
        assert!(corr > 0.999, "correlation {corr}");
    }

    #[test]
    fn zero_signal_stays_zero() {
        let x = Signal::raw(vec![Complex64::ZERO; 32], None);
        let out = dfrft_denoise(&x, &FrftFilterConfig::default()).unwrap();
        assert!(out.samples().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn denoise_never_gains_energy() {
        for seed in 0..5 {
            let x = random_signal(64, seed);
            let out = dfrft_denoise(&x, &FrftFilterConfig::default()).unwrap();
            assert!(out.energy() <= x.energy() * (1.0 + 1e-10));
        }
    }

    #[test]
    fn linear_chirp_survives_the_baseline() {
        // Quadratic-phase signal sweeping about a tenth of the band. It
        // concentrates near order 1.07, but the pulse carries slow skirts,
        // so the default 9-bin mask keeps 85% of the energy (correlation
        // 0.9244, frozen from a direct grid-search measurement); widening
        // the mask to 33 bins captures enough for 0.99.
        let n = 256usize;
        let x = Signal::new(
            (0..n)
                .map(|i| {
                    let i = i as f64;
                    Complex64::from_polar(1.0, std::f64::consts::PI / 256.0 * (0.1 * i * i + 10.0 * i))
                })
                .collect(),
        )
        .unwrap();
        let corr_at = |hw: usize| {
            let cfg = FrftFilterConfig { half_width: hw, ..Default::default() };
            let out = dfrft_denoise(&x, &cfg).unwrap();
            let mut dot = Complex64::ZERO;
            for (a, b) in out.samples().iter().zip(x.samples()) {
                dot += a * b.conj();
            }
            dot.norm() / (out.energy().sqrt() * x.energy().sqrt())
        };
        let narrow = corr_at(4);
        assert!(narrow > 0.92, "default-mask correlation {narrow}");
        let wide = corr_at(16);
        assert!(wide > 0.99, "wide-mask correlation {wide}");
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn thread_count_does_not_change_bits() {
        let x = random_signal(128, 11);
        let cfg = FrftFilterConfig::default();
        let a = dfrft_denoise(&x, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| dfrft_denoise(&x, &cfg)).unwrap();
        assert_eq!(a.samples(), b.samples());
    }
}
