mod csvio;
mod error;
mod report;
mod wav;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use error::{CliError, Result};
use linchirp::dlct::{dlct_forward, DlctParams};
use linchirp::eval::{
    add_awgn, mae, run_sweep, synth_chirp, Method, NoiseKind, NoiseSpec, SweepConfig,
};
use linchirp::filter::{denoise, process_frames, DenoiseReport, FilterConfig};
use linchirp::frft::{dfrft_denoise, FrftFilterConfig};
use linchirp::Signal;

#[derive(Parser)]
#[command(
    name = "linchirp",
    version,
    about = "Chirp-domain signal analysis and iterative denoising",
    after_help = "Exit codes: 0 success, 1 validation error, 2 I/O error."
)]
#[derive(Debug)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args)]
#[derive(Debug)]
struct GlobalOpts {
    /// Chirp-rate resolution of the transform grid [default: 1/LBINS]
    #[arg(long, global = true, value_name = "C")]
    c_res: Option<f64>,

    /// Number of chirp-rate bins (even)
    #[arg(long, global = true, default_value_t = 64, value_name = "L")]
    lbins: usize,

    /// Frame length in samples [default: 256, or 512 for WAV input]
    #[arg(long, global = true, value_name = "N")]
    frame: Option<usize>,

    /// Hop between frames in samples [default: half the frame]
    #[arg(long, global = true, value_name = "H")]
    hop: Option<usize>,

    /// Stop extracting once residual energy falls below this fraction
    #[arg(long, global = true, default_value_t = 0.05, value_name = "FRAC")]
    pth: f64,

    /// Maximum components extracted per frame
    #[arg(long, global = true, default_value_t = 10, value_name = "Q")]
    qmax: usize,

    /// Half-width of the extraction window around a chirp-domain peak
    #[arg(long, global = true, default_value_t = 2, value_name = "W")]
    half_width: usize,

    /// Half-width of the fractional baseline's spectral mask
    #[arg(long, global = true, default_value_t = 4, value_name = "W")]
    frft_half_width: usize,

    /// Minimum peak-to-mean energy ratio for a peak to count as significant
    #[arg(long, global = true, default_value_t = 10.0, value_name = "RATIO")]
    min_dominance: f64,

    /// Seed for noise generation
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Noise realizations per SNR point in a sweep
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,

    /// Add white Gaussian noise at this SNR (dB) before filtering
    #[arg(long, global = true, value_name = "DB", allow_hyphen_values = true)]
    snr: Option<f64>,

    /// SNR points for a sweep, as min:max:step in dB
    #[arg(
        long,
        global = true,
        default_value = "-10:40:5",
        value_name = "MIN:MAX:STEP",
        allow_hyphen_values = true
    )]
    snr_range: String,

    /// Free-form label copied into reports
    #[arg(long, global = true, default_value = "")]
    tag: String,
}

#[derive(Subcommand)]
#[derive(Debug)]
enum Command {
    /// Synthesize a complex linear chirp and write it as CSV
    Synth {
        /// Number of samples
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Sweep-rate numerator of the quadratic phase
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        alpha: f64,
        /// Starting-frequency numerator of the linear phase
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        f0: f64,
        /// Common phase denominator
        #[arg(long, default_value_t = 256.0, allow_hyphen_values = true)]
        scale: f64,
        /// Output signal CSV
        #[arg(long)]
        output: PathBuf,
    },
    /// Write a signal's chirp-domain energy grid as CSV
    Transform {
        /// Input signal (.csv or .wav)
        #[arg(long)]
        input: PathBuf,
        /// Output grid CSV with columns k,m,energy
        #[arg(long)]
        output: PathBuf,
    },
    /// Denoise a signal and optionally write a JSON run report
    Denoise {
        /// Denoising method
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Input signal (.csv or .wav)
        #[arg(long)]
        input: PathBuf,
        /// Output signal (.csv or .wav)
        #[arg(long)]
        output: PathBuf,
        /// Clean reference signal; adds a mean-absolute-error figure to the report
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Write a JSON report here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Average denoising error over noise realizations across an SNR range
    Sweep {
        /// Clean input signal (.csv or .wav) [default: a synthesized chirp]
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated methods to run
        #[arg(long, default_value = "dlct,frft")]
        methods: String,
        /// Output CSV with columns snr_db,method,mean_mae,std_mae,trials
        #[arg(long)]
        output: PathBuf,
    },
    /// Denoise one noisy realization with each method and print its error
    Compare {
        /// Clean input signal (.csv or .wav) [default: a synthesized chirp]
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated methods to run
        #[arg(long, default_value = "dlct,frft")]
        methods: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[derive(Debug)]
enum MethodArg {
    Dlct,
    Frft,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Dlct => Method::Dlct,
            MethodArg::Frft => Method::Frft,
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth { n, alpha, f0, scale, output } => cmd_synth(n, alpha, f0, scale, &output),
        Command::Transform { input, output } => cmd_transform(&cli.opts, &input, &output),
        Command::Denoise { method, input, output, reference, report } => {
            cmd_denoise(&cli.opts, method.into(), &input, &output, reference.as_deref(), report.as_deref())
        }
        Command::Sweep { input, methods, output } => {
            cmd_sweep(&cli.opts, input.as_deref(), &methods, &output)
        }
        Command::Compare { input, methods } => cmd_compare(&cli.opts, input.as_deref(), &methods),
    }
}

// ---------------------------------------------------------------------------
// Flag validation
// ---------------------------------------------------------------------------

/// Global flags after per-flag validation, with input-dependent defaults
/// filled in.
#[derive(Debug)]
struct Resolved {
    c: f64,
    lbins: usize,
    frame: usize,
    hop: usize,
    pth: f64,
    qmax: usize,
    half_width: usize,
    frft_half_width: usize,
    min_dominance: f64,
    seed: u64,
    trials: usize,
    snr: Option<f64>,
    snr_points: Vec<f64>,
    tag: String,
}

fn invalid(flag: &str, msg: String) -> CliError {
    CliError::Validation(format!("invalid {flag}: {msg}"))
}

fn resolve(g: &GlobalOpts, default_frame: usize) -> Result<Resolved> {
    if g.lbins < 2 || !g.lbins.is_multiple_of(2) {
        return Err(invalid("--lbins", format!("must be even and at least 2, got {}", g.lbins)));
    }
    if let Some(c) = g.c_res {
        if !(c.is_finite() && c > 0.0) {
            return Err(invalid("--c-res", format!("must be positive and finite, got {c}")));
        }
    }
    let c = g.c_res.unwrap_or(1.0 / g.lbins as f64);
    let frame = g.frame.unwrap_or(default_frame);
    if frame == 0 {
        return Err(invalid("--frame", "must be at least 1".into()));
    }
    let hop = g.hop.unwrap_or_else(|| (frame / 2).max(1));
    if hop == 0 || hop > frame {
        return Err(invalid("--hop", format!("must be between 1 and the frame length ({frame}), got {hop}")));
    }
    if !(g.pth.is_finite() && g.pth > 0.0 && g.pth <= 1.0) {
        return Err(invalid("--pth", format!("must be in (0, 1], got {}", g.pth)));
    }
    if g.qmax == 0 {
        return Err(invalid("--qmax", "must be at least 1".into()));
    }
    if 2 * g.half_width >= frame {
        return Err(invalid(
            "--half-width",
            format!("window of half-width {} does not fit a {frame}-sample frame", g.half_width),
        ));
    }
    if 2 * g.frft_half_width >= frame {
        return Err(invalid(
            "--frft-half-width",
            format!("mask of half-width {} does not fit a {frame}-sample frame", g.frft_half_width),
        ));
    }
    if !(g.min_dominance.is_finite() && g.min_dominance > 0.0) {
        return Err(invalid("--min-dominance", format!("must be positive and finite, got {}", g.min_dominance)));
    }
    if g.trials == 0 {
        return Err(invalid("--trials", "must be at least 1".into()));
    }
    if let Some(snr) = g.snr {
        if !snr.is_finite() {
            return Err(invalid("--snr", format!("must be finite, got {snr}")));
        }
    }
    let snr_points = parse_snr_range(&g.snr_range)?;
    Ok(Resolved {
        c,
        lbins: g.lbins,
        frame,
        hop,
        pth: g.pth,
        qmax: g.qmax,
        half_width: g.half_width,
        frft_half_width: g.frft_half_width,
        min_dominance: g.min_dominance,
        seed: g.seed,
        trials: g.trials,
        snr: g.snr,
        snr_points,
        tag: g.tag.clone(),
    })
}

fn parse_snr_range(s: &str) -> Result<Vec<f64>> {
    let err = || invalid("--snr-range", format!("expected min:max:step in dB with step > 0 and min <= max, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(err());
    }
    let vals: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| err())?;
    let (min, max, step) = (vals[0], vals[1], vals[2]);
    if !(min.is_finite() && max.is_finite() && step.is_finite() && step > 0.0 && min <= max) {
        return Err(err());
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

fn parse_methods(s: &str) -> Result<Vec<Method>> {
    if s.trim().is_empty() {
        return Err(invalid("--methods", "must list at least one method".into()));
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let m = match part.trim() {
            "dlct" => Method::Dlct,
            "frft" => Method::Frft,
            other => {
                return Err(invalid("--methods", format!("unknown method `{other}` (expected dlct or frft)")));
            }
        };
        if out.contains(&m) {
            return Err(invalid("--methods", format!("duplicate method `{}`", m.name())));
        }
        out.push(m);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Signal I/O by extension
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum FileKind {
    Wav,
    Csv,
}

fn file_kind(flag: &str, path: &Path) -> Result<FileKind> {
    match path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()) {
        Some(ref e) if e == "wav" || e == "wave" => Ok(FileKind::Wav),
        Some(ref e) if e == "csv" => Ok(FileKind::Csv),
        _ => Err(invalid(flag, format!("`{}` must end in .wav or .csv", path.display()))),
    }
}

fn read_signal(flag: &str, path: &Path) -> Result<(Signal, FileKind)> {
    let kind = file_kind(flag, path)?;
    let signal = match kind {
        FileKind::Wav => wav::read_wav(path)?,
        FileKind::Csv => {
            let samples = csvio::read_signal_csv(path)?;
            Signal::new(samples).map_err(|e| {
                CliError::Validation(format!("invalid {flag}: {}: {e}", path.display()))
            })?
        }
    };
    Ok((signal, kind))
}

/// Writes a signal in the format implied by the output extension. Returns the
/// discarded imaginary magnitude for WAV output.
fn write_signal(path: &Path, signal: &Signal, sample_rate: Option<f64>) -> Result<Option<f64>> {
    match file_kind("--output", path)? {
        FileKind::Wav => {
            let max_imag = wav::write_wav(path, signal, sample_rate.unwrap_or(44_100.0))?;
            Ok(Some(max_imag))
        }
        FileKind::Csv => {
            csvio::write_signal_csv(path, signal)?;
            Ok(None)
        }
    }
}

fn noise_kind_for(x: &Signal) -> NoiseKind {
    if x.is_real() {
        NoiseKind::RealGaussian
    } else {
        NoiseKind::ComplexCircularGaussian
    }
}

// ---------------------------------------------------------------------------
// Method execution
// ---------------------------------------------------------------------------

fn dlct_filter_config(r: &Resolved) -> Result<FilterConfig> {
    let cfg = FilterConfig {
        dlct: DlctParams::new(r.c, r.frame, r.lbins)?,
        q_max: r.qmax,
        p_th: r.pth,
        half_width: r.half_width,
        min_dominance: r.min_dominance,
        frame_len: r.frame,
        hop: r.hop,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn frft_filter_config(r: &Resolved) -> Result<FrftFilterConfig> {
    let cfg = FrftFilterConfig { half_width: r.frft_half_width, ..FrftFilterConfig::default() };
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one denoiser over a signal of any length and reports the frame count.
/// The chirp filter frames internally; the fractional baseline is framed here
/// because its transform operates on whole blocks.
fn run_method(
    noisy: &Signal,
    method: Method,
    r: &Resolved,
) -> Result<(Signal, Option<DenoiseReport>, usize)> {
    match method {
        Method::Dlct => {
            let cfg = dlct_filter_config(r)?;
            let (est, rep) = denoise(noisy, &cfg)?;
            let frames = rep.frames.len();
            Ok((est, Some(rep), frames))
        }
        Method::Frft => {
            let cfg = frft_filter_config(r)?;
            let (est, traces): (Signal, Vec<()>) =
                process_frames(noisy, r.frame, r.hop, |frame, _| {
                    dfrft_denoise(frame, &cfg).map(|s| (s, ()))
                })?;
            let frames = traces.len();
            Ok((est, None, frames))
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_synth(n: usize, alpha: f64, f0: f64, scale: f64, output: &Path) -> Result<()> {
    if n == 0 {
        return Err(invalid("--n", "must be at least 1".into()));
    }
    if !alpha.is_finite() {
        return Err(invalid("--alpha", format!("must be finite, got {alpha}")));
    }
    if !f0.is_finite() {
        return Err(invalid("--f0", format!("must be finite, got {f0}")));
    }
    if !(scale.is_finite() && scale != 0.0) {
        return Err(invalid("--scale", format!("must be finite and nonzero, got {scale}")));
    }
    let chirp = synth_chirp(n, alpha, f0, scale)?;
    csvio::write_signal_csv(output, &chirp)?;
    println!("wrote {} ({n} samples)", output.display());
    Ok(())
}

fn cmd_transform(g: &GlobalOpts, input: &Path, output: &Path) -> Result<()> {
    let (x, _) = read_signal("--input", input)?;
    if g.lbins < 2 || !g.lbins.is_multiple_of(2) {
        return Err(invalid("--lbins", format!("must be even and at least 2, got {}", g.lbins)));
    }
    if let Some(c) = g.c_res {
        if !(c.is_finite() && c > 0.0) {
            return Err(invalid("--c-res", format!("must be positive and finite, got {c}")));
        }
    }
    let c = g.c_res.unwrap_or(1.0 / g.lbins as f64);
    let params = DlctParams::new(c, x.len(), g.lbins)?;
    let spectrum = dlct_forward(&x, &params)?;
    csvio::write_grid_csv(output, &spectrum)?;
    println!(
        "wrote {} ({} frequency bins x {} chirp bins)",
        output.display(),
        params.n_freq(),
        params.n_chirp()
    );
    Ok(())
}

fn cmd_denoise(
    g: &GlobalOpts,
    method: Method,
    input: &Path,
    output: &Path,
    reference: Option<&Path>,
    report_path: Option<&Path>,
) -> Result<()> {
    let (x, kind) = read_signal("--input", input)?;
    let r = resolve(g, if kind == FileKind::Wav { 512 } else { 256 })?;

    let noisy = match r.snr {
        Some(snr_db) => {
            let spec = NoiseSpec { snr_db, seed: r.seed, kind: noise_kind_for(&x) };
            add_awgn(&x, &spec)?
        }
        None => x.clone(),
    };

    let (est, trace, frames) = run_method(&noisy, method, &r)?;

    let run_mae = match reference {
        Some(ref_path) => {
            let (reference_signal, _) = read_signal("--reference", ref_path)?;
            let value = mae(&reference_signal, &est).map_err(|e| {
                CliError::Validation(format!("invalid --reference: {e}"))
            })?;
            Some(value)
        }
        None => None,
    };

    let max_abs_imag = write_signal(output, &est, x.sample_rate())?;

    if let Some(path) = report_path {
        let report = build_report(method, &r, &trace, run_mae, max_abs_imag);
        report::write_report(path, &report)?;
    }

    println!(
        "wrote {} ({} samples, {frames} frames, method {})",
        output.display(),
        est.len(),
        method.name()
    );
    if let Some(v) = run_mae {
        println!("mae: {v:.6e}");
    }
    Ok(())
}

fn build_report(
    method: Method,
    r: &Resolved,
    trace: &Option<DenoiseReport>,
    run_mae: Option<f64>,
    max_abs_imag: Option<f64>,
) -> report::Report {
    let mut params = Map::new();
    params.insert("frame".into(), Value::from(r.frame));
    params.insert("hop".into(), Value::from(r.hop));
    params.insert("seed".into(), Value::from(r.seed));
    params.insert("snr_db".into(), r.snr.map_or(Value::Null, Value::from));
    params.insert("tag".into(), Value::from(r.tag.clone()));
    params.insert("max_abs_imag".into(), max_abs_imag.map_or(Value::Null, Value::from));
    match method {
        Method::Dlct => {
            params.insert("c_res".into(), Value::from(r.c));
            params.insert("lbins".into(), Value::from(r.lbins));
            params.insert("pth".into(), Value::from(r.pth));
            params.insert("qmax".into(), Value::from(r.qmax));
            params.insert("half_width".into(), Value::from(r.half_width));
            params.insert("min_dominance".into(), Value::from(r.min_dominance));
        }
        Method::Frft => {
            let grid = FrftFilterConfig::default().order_grid;
            params.insert("order_min".into(), Value::from(grid.0));
            params.insert("order_max".into(), Value::from(grid.1));
            params.insert("order_step".into(), Value::from(grid.2));
            params.insert("frft_half_width".into(), Value::from(r.frft_half_width));
        }
    }
    report::Report {
        method: method.name().to_string(),
        params,
        frames: trace.as_ref().map(report::frames_json).unwrap_or_default(),
        mae: run_mae,
    }
}

fn default_clean() -> Result<Signal> {
    synth_chirp(256, 0.1, 10.0, 256.0).map_err(Into::into)
}

fn cmd_sweep(g: &GlobalOpts, input: Option<&Path>, methods: &str, output: &Path) -> Result<()> {
    let (clean, kind) = match input {
        Some(path) => read_signal("--input", path)?,
        None => (default_clean()?, FileKind::Csv),
    };
    let r = resolve(g, if kind == FileKind::Wav { 512 } else { 256 })?;
    let methods = parse_methods(methods)?;

    // The fractional baseline transforms the whole signal at once inside a
    // sweep; cap the quadratic cost.
    if methods.contains(&Method::Frft) && clean.len() > 8192 {
        return Err(invalid(
            "--input",
            format!(
                "signal of {} samples is too long for the frft method in a sweep (limit 8192); pass --methods dlct",
                clean.len()
            ),
        ));
    }

    let cfg = SweepConfig {
        snr_points_db: r.snr_points.clone(),
        trials: r.trials,
        methods,
        base_seed: r.seed,
        dlct_filter: dlct_filter_config(&r)?,
        frft_filter: frft_filter_config(&r)?,
    };
    let result = run_sweep(&clean, &cfg)?;
    csvio::write_sweep_csv(output, &result)?;
    let rows: usize = result.rows.iter().map(|row| row.methods.len()).sum();
    println!("wrote {} ({rows} rows)", output.display());
    Ok(())
}

fn cmd_compare(g: &GlobalOpts, input: Option<&Path>, methods: &str) -> Result<()> {
    let (clean, kind) = match input {
        Some(path) => read_signal("--input", path)?,
        None => (default_clean()?, FileKind::Csv),
    };
    let r = resolve(g, if kind == FileKind::Wav { 512 } else { 256 })?;
    let methods = parse_methods(methods)?;

    let snr_db = r.snr.unwrap_or(0.0);
    let spec = NoiseSpec { snr_db, seed: r.seed, kind: noise_kind_for(&clean) };
    let noisy = add_awgn(&clean, &spec)?;

    println!("snr: {snr_db} dB, seed: {}", r.seed);
    println!("{:<8} {:>24}", "method", "mae");
    println!("{:<8} {:>24.16e}", "noisy", mae(&clean, &noisy)?);
    for method in methods {
        let (est, _, _) = run_method(&noisy, method, &r)?;
        println!("{:<8} {:>24.16e}", method.name(), mae(&clean, &est)?);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
