//! Configuration of the 64-point photonic FFT engine model.

use serde::{Deserialize, Serialize};

/// Fraction split of the fixed-point datapath across the three computation
/// phases: key/input staging, forward FFT stages, pointwise + inverse stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracSplit {
    pub frac_bk: u32,
    pub frac_fft: u32,
    pub frac_ifft: u32,
}

impl FracSplit {
    /// Default split for the 64- and 128-bit datapaths.
    pub const DEFAULT: FracSplit = FracSplit {
        frac_bk: 29,
        frac_fft: 26,
        frac_ifft: 17,
    };

    /// The 30-bit split used by earlier 32-bit-only designs, kept as a
    /// legacy configuration.
    pub const LEGACY_30BIT: FracSplit = FracSplit {
        frac_bk: 19,
        frac_fft: 14,
        frac_ifft: 6,
    };

    /// Twiddle tables carry this many fraction bits (rounded once at build).
    pub fn twiddle_bits(&self) -> u32 {
        self.frac_fft + 8
    }
}

impl Default for FracSplit {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// What imperfections the engine model applies to analog outputs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NoiseModel {
    /// Exact analog signal path; only twiddle-table rounding remains.
    Ideal,
    /// ADC quantization to `n_out` significant bits, calibrated per pass.
    QuantizeOnly,
    /// ADC quantization plus additive Gaussian relative-intensity noise of
    /// the given standard deviation (relative to full scale).
    QuantizePlusRin { sigma_rel: f64 },
}

/// Relative-intensity noise level that leaves about 6 effective output bits
/// at the default config (sigma chosen so quantization and noise floors meet).
pub fn default_rin_sigma() -> f64 {
    // effective_bits = log2(fullscale / (sigma * sqrt(12))) => 6 bits
    1.0 / (64.0 * 12f64.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PffteConfig {
    /// Engine size; the hardware is a 64-point design.
    pub n_points: usize,
    /// DAC bit width: bits of input consumed per pipeline frame.
    pub n_in: u32,
    /// ADC bit width; `None` models an unbounded-precision ADC.
    pub n_out: Option<u32>,
    /// Engine clock in Hz.
    pub freq_hz: f64,
    pub noise_model: NoiseModel,
    /// Fixed-point datapath width in bits (64 or 128).
    pub datapath_bits: u32,
    pub frac: FracSplit,
    /// Seed for the RIN noise stream (only read under `QuantizePlusRin`).
    pub rin_seed: u64,
}

impl Default for PffteConfig {
    fn default() -> Self {
        Self {
            n_points: 64,
            n_in: 1,
            n_out: Some(6),
            freq_hz: 12e9,
            noise_model: NoiseModel::Ideal,
            datapath_bits: 64,
            frac: FracSplit::DEFAULT,
            rin_seed: 0,
        }
    }
}

impl PffteConfig {
    pub fn ideal(datapath_bits: u32) -> Self {
        Self {
            datapath_bits,
            ..Self::default()
        }
    }

    /// Frames needed to push one m-bit input set through the DACs.
    pub fn frames_for_width(&self, m: u32) -> u32 {
        m.div_ceil(self.n_in)
    }
}
