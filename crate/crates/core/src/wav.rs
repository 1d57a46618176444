//! Minimal RIFF/WAVE reader and writer for mono PCM16 and Float32 files.
//!
//! Decoding is lossless into 64-bit samples: PCM16 scales by 1/32768,
//! Float32 widens exactly. Writing quantizes to PCM16 with rounding, so a
//! round trip of samples in [-1, 1] stays within one quantization step
//! (2^-15) of the original.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result, WavError};
use crate::signal::Signal;

const PCM16_SCALE: f64 = 32768.0;
const FORMAT_PCM: u16 = 1;
const FORMAT_IEEE_FLOAT: u16 = 3;

/// A decoded mono file.
#[derive(Clone, Debug)]
pub struct WavAsset {
    pub signal: Signal,
    pub sample_rate: u32,
    pub source_path: PathBuf,
}

fn wav_err(path: &Path, source: WavError) -> Error {
    Error::Wav {
        path: path.to_path_buf(),
        source,
    }
}

struct FmtChunk {
    format: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

fn parse_fmt(data: &[u8]) -> std::result::Result<FmtChunk, WavError> {
    if data.len() < 16 {
        return Err(WavError::Truncated("fmt chunk"));
    }
    let u16_at = |o: usize| u16::from_le_bytes([data[o], data[o + 1]]);
    let u32_at = |o: usize| u32::from_le_bytes([data[o], data[o + 1], data[o + 2], data[o + 3]]);
    Ok(FmtChunk {
        format: u16_at(0),
        channels: u16_at(2),
        sample_rate: u32_at(4),
        bits_per_sample: u16_at(14),
    })
}

/// Loads a mono PCM16 or Float32 WAV file.
pub fn load_wav(path: &Path) -> Result<WavAsset> {
    let bytes = std::fs::read(path)?;
    let asset = decode_wav(&bytes).map_err(|e| wav_err(path, e))?;
    Ok(WavAsset {
        signal: asset.0,
        sample_rate: asset.1,
        source_path: path.to_path_buf(),
    })
}

fn decode_wav(bytes: &[u8]) -> std::result::Result<(Signal, u32), WavError> {
    if bytes.len() < 12 {
        return Err(WavError::Truncated("RIFF header"));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(WavError::NotRiff);
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(WavError::NotWave);
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<&[u8]> = None;
    let mut offset = 12usize;
    while offset + 8 <= bytes.len() {
        let id = &bytes[offset..offset + 4];
        let size = u32::from_le_bytes([
            bytes[offset + 4],
            bytes[offset + 5],
            bytes[offset + 6],
            bytes[offset + 7],
        ]) as usize;
        let body_start = offset + 8;
        let body_end = body_start + size;
        if body_end > bytes.len() {
            return Err(WavError::Truncated("chunk body"));
        }
        match id {
            b"fmt " => fmt = Some(parse_fmt(&bytes[body_start..body_end])?),
            b"data" => data = Some(&bytes[body_start..body_end]),
            _ => {}
        }
        // Chunks are word-aligned: odd sizes carry a pad byte.
        offset = body_end + (size & 1);
    }

    let fmt = fmt.ok_or(WavError::MissingChunk("fmt"))?;
    let data = data.ok_or(WavError::MissingChunk("data"))?;

    if fmt.channels != 1 {
        return Err(WavError::UnsupportedChannels(fmt.channels));
    }
    let samples: Vec<f64> = match (fmt.format, fmt.bits_per_sample) {
        (FORMAT_PCM, 16) => {
            if data.len() % 2 != 0 {
                return Err(WavError::Truncated("PCM16 data"));
            }
            data.chunks_exact(2)
                .map(|c| i16::from_le_bytes([c[0], c[1]]) as f64 / PCM16_SCALE)
                .collect()
        }
        (FORMAT_IEEE_FLOAT, 32) => {
            if data.len() % 4 != 0 {
                return Err(WavError::Truncated("Float32 data"));
            }
            data.chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
                .collect()
        }
        (FORMAT_PCM, bits) | (FORMAT_IEEE_FLOAT, bits) => {
            return Err(WavError::UnsupportedBitDepth {
                codec: fmt.format,
                bits,
            })
        }
        (codec, _) => return Err(WavError::UnsupportedCodec(codec)),
    };
    if samples.is_empty() {
        return Err(WavError::Truncated("empty data chunk"));
    }
    Ok((
        Signal::from_raw(samples),
        fmt.sample_rate,
    ))
}

/// Writes a mono PCM16 file. Samples are clamped to [-1, 1] and quantized
/// with round-to-nearest on the 1/32768 grid.
pub fn write_wav_pcm16(path: &Path, signal: &Signal, sample_rate: u32) -> Result<()> {
    let data_len = signal.len() * 2;
    let mut bytes = Vec::with_capacity(44 + data_len);
    bytes.extend_from_slice(b"RIFF");
    bytes.extend_from_slice(&(36 + data_len as u32).to_le_bytes());
    bytes.extend_from_slice(b"WAVE");
    bytes.extend_from_slice(b"fmt ");
    bytes.extend_from_slice(&16u32.to_le_bytes());
    bytes.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    bytes.extend_from_slice(&1u16.to_le_bytes()); // channels
    bytes.extend_from_slice(&sample_rate.to_le_bytes());
    bytes.extend_from_slice(&(sample_rate * 2).to_le_bytes()); // byte rate
    bytes.extend_from_slice(&2u16.to_le_bytes()); // block align
    bytes.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    bytes.extend_from_slice(b"data");
    bytes.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &sample in signal.samples() {
        let q = (sample * PCM16_SCALE).round().clamp(-32768.0, 32767.0) as i16;
        bytes.extend_from_slice(&q.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}
