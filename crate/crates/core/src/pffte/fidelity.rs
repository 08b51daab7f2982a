//! Optical-fidelity proxy: insertion losses accumulate per butterfly stage
//! (spiral delay lines shrink as T/2^i but couplers, shifters and splitters
//! repeat), so the output extinction ratio falls as the input count grows.

use serde::{Deserialize, Serialize};

pub const SPEED_OF_LIGHT_M_S: f64 = 2.998e8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonicGeometry {
    /// Physical length of one clock period of optical delay, mm.
    pub time_delay_mm: f64,
    pub n_eff: f64,
    pub freq_hz: f64,
    /// Insertion losses in dB per component.
    pub coupler_db: f64,
    pub phase_shifter_db: f64,
    pub spiral_db_per_mm: f64,
    pub splitter_db: f64,
    pub grating_coupler_db: f64,
}

impl Default for PhotonicGeometry {
    fn default() -> Self {
        Self {
            time_delay_mm: 10.0,
            n_eff: 2.4983,
            freq_hz: 12e9,
            coupler_db: 0.1,
            phase_shifter_db: 0.2,
            spiral_db_per_mm: 0.3,
            splitter_db: 0.1,
            grating_coupler_db: 1.0,
        }
    }
}

impl PhotonicGeometry {
    /// T = c / (n_eff * freq), in mm.
    pub fn derived_time_delay_mm(&self) -> f64 {
        SPEED_OF_LIGHT_M_S / (self.n_eff * self.freq_hz) * 1e3
    }

    /// Spiral waveguide length at FFT stage i (1-based): T / 2^i.
    pub fn spiral_length_mm(&self, stage: u32) -> f64 {
        self.time_delay_mm / 2f64.powi(stage as i32)
    }

    pub fn lossless(&self) -> bool {
        self.coupler_db == 0.0
            && self.phase_shifter_db == 0.0
            && self.spiral_db_per_mm == 0.0
            && self.splitter_db == 0.0
            && self.grating_coupler_db == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub n_inputs: u32,
    pub extinction_ratio_db: f64,
    pub effective_bits: f64,
    pub total_loss_db: f64,
    pub lossless: bool,
    pub overflow_count: u64,
}

/// Quantization-limited extinction ratio of an ideal n-bit output chain.
fn quantization_er_db(n_out: u32) -> f64 {
    6.02 * n_out as f64 + 1.76
}

/// Extinction ratio after log2(n) stages of accumulated insertion loss.
pub fn extinction_ratio(geom: &PhotonicGeometry, n_inputs: u32, n_out: u32) -> FidelityReport {
    assert!(n_inputs.is_power_of_two() && n_inputs >= 2);
    let stages = n_inputs.trailing_zeros();
    let mut loss_db = 2.0 * geom.grating_coupler_db;
    for stage in 1..=stages {
        loss_db += geom.coupler_db
            + 2.0 * geom.phase_shifter_db
            + geom.splitter_db
            + geom.spiral_db_per_mm * geom.spiral_length_mm(stage);
    }
    let er = quantization_er_db(n_out) - loss_db;
    FidelityReport {
        n_inputs,
        extinction_ratio_db: er,
        effective_bits: ((er - 1.76) / 6.02).max(0.0),
        total_loss_db: loss_db,
        lossless: geom.lossless(),
        overflow_count: 0,
    }
}
