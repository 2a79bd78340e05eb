use std::fs;
use std::path::Path;

use crate::error::{io_err, CliError, Result};
use linchirp::Signal;

const PCM16_SCALE: f64 = 32768.0;

/// Reads a 16-bit PCM WAV file as a real signal. Multichannel files are
/// averaged down to mono; the sample rate is preserved on the signal.
pub fn read_wav(path: &Path) -> Result<Signal> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let (samples, sample_rate) = decode_wav(&bytes).map_err(|msg| {
        CliError::Io(format!("{}: {msg}", path.display()))
    })?;
    let complex = samples.iter().map(|&re| num_complex::Complex64::new(re, 0.0)).collect();
    Signal::with_sample_rate(complex, sample_rate as f64)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Writes the real part of a signal as a mono 16-bit PCM WAV file and returns
/// the largest imaginary magnitude that was discarded.
pub fn write_wav(path: &Path, signal: &Signal, sample_rate: f64) -> Result<f64> {
    let sample_rate = sample_rate.round() as u32;
    let mut max_abs_imag: f64 = 0.0;
    let mut pcm = Vec::with_capacity(signal.len() * 2);
    for z in signal.samples() {
        max_abs_imag = max_abs_imag.max(z.im.abs());
        let v = (z.re * PCM16_SCALE).round().clamp(-32768.0, 32767.0) as i16;
        pcm.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, encode_wav(&pcm, sample_rate)).map_err(|e| io_err(path, e))?;
    Ok(max_abs_imag)
}

fn decode_wav(bytes: &[u8]) -> std::result::Result<(Vec<f64>, u32), String> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err("unsupported format: not a RIFF/WAVE file".into());
    }
    let mut fmt: Option<(u16, u16, u32, u16)> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_end = pos + 8 + size;
        if body_end > bytes.len() {
            return Err("unsupported format: truncated chunk".into());
        }
        let body = &bytes[pos + 8..body_end];
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err("unsupported format: short fmt chunk".into());
                }
                fmt = Some((
                    u16::from_le_bytes(body[0..2].try_into().unwrap()),
                    u16::from_le_bytes(body[2..4].try_into().unwrap()),
                    u32::from_le_bytes(body[4..8].try_into().unwrap()),
                    u16::from_le_bytes(body[14..16].try_into().unwrap()),
                ));
            }
            b"data" => data = Some(body),
            _ => {}
        }
        // Chunk bodies are word-aligned.
        pos = body_end + (size & 1);
    }
    let (audio_format, channels, sample_rate, bits) =
        fmt.ok_or("unsupported format: missing fmt chunk")?;
    if audio_format != 1 {
        return Err(format!(
            "unsupported format: audio format {audio_format} (only PCM is supported)"
        ));
    }
    if bits != 16 {
        return Err(format!(
            "unsupported format: {bits}-bit samples (only 16-bit PCM is supported)"
        ));
    }
    if channels == 0 {
        return Err("unsupported format: zero channels".into());
    }
    let data = data.ok_or("unsupported format: missing data chunk")?;
    let ch = channels as usize;
    let frame_bytes = 2 * ch;
    let n_frames = data.len() / frame_bytes;
    let mut samples = Vec::with_capacity(n_frames);
    for f in 0..n_frames {
        let mut acc = 0.0;
        for c in 0..ch {
            let off = f * frame_bytes + 2 * c;
            let v = i16::from_le_bytes(data[off..off + 2].try_into().unwrap());
            acc += v as f64 / PCM16_SCALE;
        }
        samples.push(acc / ch as f64);
    }
    Ok((samples, sample_rate))
}

fn encode_wav(pcm: &[u8], sample_rate: u32) -> Vec<u8> {
    let data_len = pcm.len() as u32;
    let mut out = Vec::with_capacity(44 + pcm.len());
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    out.extend_from_slice(pcm);
    out
}
