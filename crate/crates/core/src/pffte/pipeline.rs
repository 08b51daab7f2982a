//! The tri-stage bit-sliced pipeline: DACs peel `n_in` bits per frame off
//! the m-bit input registers, the engine transforms each slice in the
//! analog domain, ADCs digitize, and shift-and-add recombines the frames
//! into the m-bit result.
//!
//! With an unbounded ADC the recombination is exactly the transform of the
//! full-width input, because the analog path is exactly linear and the
//! slices sum to the input.

use super::config::{NoiseModel, PffteConfig};
use super::engine::{
    build_stage_twiddles, engine_pass, StageTwiddles, ENGINE_POINTS, PIPELINE_FILL_CYCLES,
};
use super::fx::FxStats;
use super::engine::ComplexFx;
use super::wide::WideC;

/// One pipeline frame: the analog view of a single slice pass.
#[derive(Clone, Debug)]
pub struct SliceFrame {
    pub slice_index: u32,
    pub cycle: u64,
    /// Analog output samples of this pass (f64 view for inspection).
    pub values: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct BitSlicedFft {
    pub cfg: PffteConfig,
    tw: StageTwiddles,
}

#[derive(Clone, Debug)]
pub struct BitSlicedResult {
    /// Recombined outputs on the datapath, `mant / 2^frac_fft` scaled to the
    /// input's integer grid.
    pub values: Vec<ComplexFx>,
    /// Exact recombination before datapath conversion.
    pub raw: Vec<WideC>,
    /// Grid of `raw` relative to the integer inputs.
    pub raw_grid: u32,
    pub frames: Vec<SliceFrame>,
    /// Engine cycles: one per frame plus pipeline fill.
    pub cycles: u64,
    pub stats: FxStats,
    /// Per-slice ADC full-scale calibrations (empty in ideal mode).
    pub calibrations: Vec<f64>,
}

impl BitSlicedFft {
    pub fn new(cfg: &PffteConfig) -> Self {
        Self {
            cfg: cfg.clone(),
            tw: build_stage_twiddles(ENGINE_POINTS, cfg.frac.twiddle_bits()),
        }
    }

    /// Transform 64 unsigned m-bit integers.
    pub fn run(&self, x: &[u128; ENGINE_POINTS], width_m: u32) -> BitSlicedResult {
        assert!(width_m == 32 || width_m == 64 || width_m == 128);
        assert_eq!(width_m % self.cfg.n_in, 0, "width must divide into DAC slices");
        let n_in = self.cfg.n_in;
        let n_frames = width_m / n_in;
        let slice_mask = if n_in == 128 { u128::MAX } else { (1u128 << n_in) - 1 };

        let mut raw = vec![WideC::ZERO; ENGINE_POINTS];
        let mut frames = Vec::with_capacity(n_frames as usize);
        let mut calibrations = Vec::new();
        let mut grid = 0u32;
        let mut cfg = self.cfg.clone();

        for j in 0..n_frames {
            let mut slice = [WideC::ZERO; ENGINE_POINTS];
            for (lane, v) in x.iter().enumerate() {
                let digit = (v >> (j * n_in)) & slice_mask;
                slice[lane] = WideC::from_re_u128(digit);
            }
            // Independent noise stream per frame.
            cfg.rin_seed = self.cfg.rin_seed.wrapping_add(j as u64);
            let pass = engine_pass(&slice, &self.tw, &cfg);
            grid = pass.grid_gain;
            if let Some(c) = pass.calibration {
                calibrations.push(c);
            }
            let scale = 2f64.powi(-(pass.grid_gain as i32));
            frames.push(SliceFrame {
                slice_index: j,
                cycle: j as u64,
                values: pass
                    .values
                    .iter()
                    .map(|w| (w.re.to_f64() * scale, w.im.to_f64() * scale))
                    .collect(),
            });
            // Digital shift-and-add recombination, exact.
            for (dst, v) in raw.iter_mut().zip(pass.values.iter()) {
                *dst = dst.add(v.shl_exact(j * n_in));
            }
        }

        let mut stats = FxStats::default();
        let values = raw
            .iter()
            .map(|wc| {
                // datapath view at frac_fft below the integer grid
                let shift = grid - self.cfg.frac.frac_fft;
                let (re, s1) = wc.re.round_shr_to_i128(shift);
                let (im, s2) = wc.im.round_shr_to_i128(shift);
                if s1 || s2 {
                    stats.overflow_count += 1;
                }
                ComplexFx::new(re, im)
            })
            .collect();

        BitSlicedResult {
            values,
            raw,
            raw_grid: grid,
            frames,
            cycles: n_frames as u64 + PIPELINE_FILL_CYCLES,
            stats,
            calibrations,
        }
    }

    /// The full-width reference: one exact pass over the m-bit integers.
    pub fn full_width_reference(&self, x: &[u128; ENGINE_POINTS]) -> (Vec<WideC>, u32) {
        let mut input = [WideC::ZERO; ENGINE_POINTS];
        for (dst, v) in input.iter_mut().zip(x.iter()) {
            *dst = WideC::from_re_u128(*v);
        }
        let ideal = PffteConfig {
            noise_model: NoiseModel::Ideal,
            ..self.cfg.clone()
        };
        let pass = engine_pass(&input, &self.tw, &ideal);
        (pass.values, pass.grid_gain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zeros_make_zeros_with_full_frame_count() {
        let cfg = PffteConfig::ideal(64);
        let bs = BitSlicedFft::new(&cfg);
        let x = [0u128; 64];
        let r = bs.run(&x, 64);
        assert_eq!(r.frames.len(), 64);
        assert_eq!(r.cycles, 64 + PIPELINE_FILL_CYCLES);
        assert!(r.values.iter().all(|v| v.re == 0 && v.im == 0));
    }

    #[test]
    fn single_slice_case_equals_engine_pass_of_bits() {
        let mut cfg = PffteConfig::ideal(64);
        cfg.n_out = None;
        let bs = BitSlicedFft::new(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut x = [0u128; 64];
        for v in x.iter_mut() {
            *v = rng.gen_range(0..2u128); // only bit 0 set
        }
        let r = bs.run(&x, 32);
        let (reference, grid) = bs.full_width_reference(&x);
        assert_eq!(r.raw_grid, grid);
        assert_eq!(r.raw, reference);
    }

    #[test]
    fn recombination_bit_exact_all_widths() {
        let mut cfg = PffteConfig::ideal(64);
        cfg.n_out = None; // unbounded ADC
        let bs = BitSlicedFft::new(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for m in [32u32, 64, 128] {
            let mut x = [0u128; 64];
            for v in x.iter_mut() {
                // keep headroom below 2^97 so the datapath view cannot
                // saturate; the exact comparison itself has none anyway
                let bits = m.min(96);
                *v = rng.gen::<u128>() >> (128 - bits);
            }
            let r = bs.run(&x, m);
            let (reference, grid) = bs.full_width_reference(&x);
            assert_eq!(r.raw_grid, grid);
            assert_eq!(r.raw, reference, "width {m} recombination must be exact");
        }
    }

    #[test]
    fn quantized_slices_match_analytic_bound() {
        let mut cfg = PffteConfig::ideal(64);
        cfg.noise_model = NoiseModel::QuantizeOnly;
        cfg.n_out = Some(6);
        let bs = BitSlicedFft::new(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut x = [0u128; 64];
        for v in x.iter_mut() {
            *v = rng.gen::<u32>() as u128;
        }
        let r = bs.run(&x, 32);
        let (reference, grid) = bs.full_width_reference(&x);
        // Analytic: sum_j 2^j * step_j / 2 with step_j = fs_j / 2^(n_out-1).
        let mut bound = 0f64;
        for (j, fs) in r.calibrations.iter().enumerate() {
            bound += 2f64.powi(j as i32) * fs / 2f64.powi(5) * 0.5 * 2f64.powi(-(grid as i32));
        }
        bound *= 1.0 + 1e-9;
        let scale = 2f64.powi(-(grid as i32));
        for (got, want) in r.raw.iter().zip(reference.iter()) {
            let dr = (got.re.to_f64() - want.re.to_f64()).abs() * scale;
            let di = (got.im.to_f64() - want.im.to_f64()).abs() * scale;
            assert!(dr <= bound && di <= bound, "err {dr}/{di} vs bound {bound}");
        }
    }
}
