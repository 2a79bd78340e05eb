//! Randomized structural properties, checked across small random shapes
//! rather than the fixed sizes the deterministic suites use.

mod common;

use common::rel_l2_err;
use linchirp::analysis::{extract_component, PeakLocation};
use linchirp::dlct::{dlct_forward, dlct_inverse, DlctParams};
use linchirp::error::Error;
use linchirp::eval::{add_awgn, mae, NoiseKind, NoiseSpec};
use linchirp::filter::process_frames;
use linchirp::frft::{dfrft, FrftOrder};
use linchirp::Signal;
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len..=len)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn signal(len: usize) -> impl Strategy<Value = Signal> {
    complex_vec(len).prop_map(|v| Signal::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip_over_random_shapes(
        x in (4usize..48).prop_flat_map(signal),
        l_half in 1usize..6,
        c in 0.01f64..1.0,
    ) {
        let params = DlctParams::new(c, x.len(), 2 * l_half).unwrap();
        let back = dlct_inverse(&dlct_forward(&x, &params).unwrap()).unwrap();
        prop_assert!(rel_l2_err(back.samples(), x.samples()) < 1e-9);
    }

    #[test]
    fn forward_is_linear(
        (x, y) in (4usize..32).prop_flat_map(|n| (signal(n), signal(n))),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let params = DlctParams::new(0.25, x.len(), 4).unwrap();
        let combo = Signal::new(
            x.samples().iter().zip(y.samples()).map(|(p, q)| a * p + b * q).collect(),
        );
        prop_assume!(combo.is_ok());
        let lhs = dlct_forward(&combo.unwrap(), &params).unwrap();
        let fx = dlct_forward(&x, &params).unwrap();
        let fy = dlct_forward(&y, &params).unwrap();
        for m in params.m_range().0..=params.m_range().1 {
            for (k, (p, q)) in fx.slice(m).unwrap().iter().zip(fy.slice(m).unwrap()).enumerate() {
                let want = a * p + b * q;
                let got = lhs.get(k, m).unwrap();
                prop_assert!((got - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn extraction_never_gains_energy(
        x in (8usize..40).prop_flat_map(signal),
        k_frac in 0.0f64..1.0,
        m_frac in 0.0f64..1.0,
        hw in 0usize..3,
    ) {
        let n = x.len();
        let params = DlctParams::new(0.5, n, 8).unwrap();
        let k = ((k_frac * n as f64) as usize).min(n - 1);
        let (lo, hi) = params.m_range();
        let m = lo + ((m_frac * (hi - lo + 1) as f64) as i64).min(hi - lo);
        let peak = PeakLocation { k, m, energy: 0.0, dominance: 0.0 };
        prop_assume!(2 * hw < n);
        let once = extract_component(&x, &peak, &params, hw).unwrap();
        prop_assert!(once.energy <= x.energy() * (1.0 + 1e-12));
        let twice = extract_component(&once.waveform, &peak, &params, hw).unwrap();
        let dmax = once
            .waveform
            .samples()
            .iter()
            .zip(twice.waveform.samples())
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max);
        prop_assert!(dmax < 1e-11);
    }

    #[test]
    fn mae_is_a_symmetric_scaled_metric(
        (x, y) in (2usize..32).prop_flat_map(|n| (signal(n), signal(n))),
        c in 0.1f64..4.0,
    ) {
        let d_xy = mae(&x, &y).unwrap();
        let d_yx = mae(&y, &x).unwrap();
        prop_assert!((d_xy - d_yx).abs() < 1e-14);
        prop_assert!(d_xy >= 0.0);
        prop_assert_eq!(mae(&x, &x).unwrap(), 0.0);
        let xs = Signal::new(x.samples().iter().map(|z| c * z).collect()).unwrap();
        let ys = Signal::new(y.samples().iter().map(|z| c * z).collect()).unwrap();
        prop_assert!((mae(&xs, &ys).unwrap() - c * d_xy).abs() < 1e-12);
    }

    #[test]
    fn awgn_hits_target_snr(
        x in (4usize..64).prop_flat_map(signal),
        snr_db in -20.0f64..60.0,
        seed in any::<u64>(),
        complex_kind in any::<bool>(),
    ) {
        let kind = if complex_kind {
            NoiseKind::ComplexCircularGaussian
        } else {
            NoiseKind::RealGaussian
        };
        let noisy = add_awgn(&x, &NoiseSpec { snr_db, seed, kind }).unwrap();
        let noise_energy: f64 = noisy
            .samples()
            .iter()
            .zip(x.samples())
            .map(|(p, q)| (p - q).norm_sqr())
            .sum();
        let realized = 10.0 * (x.energy() / noise_energy).log10();
        prop_assert!((realized - snr_db).abs() < 1e-10);
    }

    #[test]
    fn ola_reconstructs_arbitrary_lattices(
        len in 20usize..300,
        frame_exp in 3usize..7,
        hop_frac in 0.2f64..1.0,
    ) {
        let frame = 1usize << frame_exp;
        let hop = ((hop_frac * frame as f64) as usize).clamp(1, frame);
        let x = common::random_signal(len, (len * frame + hop) as u64);
        let (out, _) =
            process_frames(&x, frame, hop, |f, _| Ok::<_, Error>((f.clone(), ()))).unwrap();
        prop_assert_eq!(out.len(), len);
        let worst = out
            .samples()
            .iter()
            .zip(x.samples())
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max);
        prop_assert!(worst < 1e-10, "len {} frame {} hop {} err {}", len, frame, hop, worst);
    }

    #[test]
    fn fractional_transform_is_unitary_everywhere(
        x in (2usize..40).prop_flat_map(signal),
        a in 0.0f64..4.0,
    ) {
        let y = dfrft(&x, FrftOrder::new(a).unwrap()).unwrap();
        prop_assert!((y.energy() - x.energy()).abs() / x.energy() < 1e-8);
    }
}
