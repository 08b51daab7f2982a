//! The 64-point engine: butterfly network over exact analog samples, with
//! ADC quantization and optional intensity noise applied at the outputs.
//!
//! Analog values are exact (`WideC`); the only approximation in the ideal
//! path is the one-time rounding of the twiddle tables. Unitary 1/sqrt(64)
//! normalization is a pure exponent shift (sqrt(64) = 8), so the engine's
//! value grid is exact bookkeeping: output grid = input grid + 6*t + 3.

use super::config::{NoiseModel, PffteConfig};
use super::fx::FxStats;
use super::wide::{I384, WideC};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

pub const ENGINE_POINTS: usize = 64;
pub const ENGINE_STAGES: u32 = 6;
/// Cycles to fill the tri-stage pipeline before steady state.
pub const PIPELINE_FILL_CYCLES: u64 = 3;

/// Per-stage twiddle factors `e^{-2*pi*i*j/2^s}`, mantissas at `bits`
/// fraction bits, rounded once at table build.
#[derive(Clone, Debug)]
pub struct StageTwiddles {
    pub bits: u32,
    pub n: usize,
    /// `stages[s][j]` for stage size `2^(s+1)`, `j < 2^s`.
    pub stages: Vec<Vec<(i64, i64)>>,
    pub bitrev: Vec<usize>,
}

pub fn build_stage_twiddles(n: usize, bits: u32) -> StageTwiddles {
    assert!(n.is_power_of_two() && n >= 2);
    let log_n = n.trailing_zeros();
    let scale = 2f64.powi(bits as i32);
    let stages = (1..=log_n)
        .map(|s| {
            let m = 1usize << s;
            (0..m / 2)
                .map(|j| {
                    let ang = -2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    ((ang.cos() * scale).round() as i64, (ang.sin() * scale).round() as i64)
                })
                .collect()
        })
        .collect();
    let mut bitrev = vec![0usize; n];
    for (i, slot) in bitrev.iter_mut().enumerate() {
        *slot = (i.reverse_bits() >> (usize::BITS - log_n)) & (n - 1);
    }
    StageTwiddles {
        bits,
        n,
        stages,
        bitrev,
    }
}

/// Exact decimation-in-time network. Values scale up by `2^bits` per stage
/// (the untwiddled leg is shifted to keep the grid uniform), so the result
/// is the unnormalized DFT times `2^(log2(n)*bits)`.
pub fn fft_wide(x: &mut [WideC], tw: &StageTwiddles) {
    let n = x.len();
    debug_assert_eq!(n, tw.n);
    for i in 0..n {
        let j = tw.bitrev[i];
        if j > i {
            x.swap(i, j);
        }
    }
    for (s, stage) in tw.stages.iter().enumerate() {
        let half = 1usize << s;
        let m = half << 1;
        for base in (0..n).step_by(m) {
            for j in 0..half {
                let (wr, wi) = stage[j];
                let t = x[base + j + half].mul_twiddle(wr, wi);
                let u = x[base + j].shl_exact(tw.bits);
                x[base + j] = u.add(t);
                x[base + j + half] = u.sub(t);
            }
        }
    }
}

/// Grid gain of one engine pass: `stages * twiddle_bits` from the exact
/// stage scaling plus 3 for the unitary 1/sqrt(64).
pub fn engine_grid_gain(bits: u32) -> u32 {
    ENGINE_STAGES * bits + 3
}

/// One analog pass through the 64-point engine, noise model applied at the
/// output interface.
pub struct EnginePass {
    pub values: Vec<WideC>,
    /// Output grid relative to the input grid.
    pub grid_gain: u32,
    /// ADC full-scale (absolute value at the output grid) when quantizing.
    pub calibration: Option<f64>,
}

pub fn engine_pass(input: &[WideC; ENGINE_POINTS], tw: &StageTwiddles, cfg: &PffteConfig) -> EnginePass {
    debug_assert_eq!(cfg.n_points, ENGINE_POINTS);
    let mut v = input.to_vec();
    fft_wide(&mut v, tw);
    let grid_gain = engine_grid_gain(tw.bits);
    let mut calibration = None;

    match cfg.noise_model {
        NoiseModel::Ideal => {}
        NoiseModel::QuantizeOnly => {
            calibration = Some(quantize(&mut v, cfg.n_out));
        }
        NoiseModel::QuantizePlusRin { sigma_rel } => {
            apply_rin(&mut v, sigma_rel, cfg.rin_seed);
            calibration = Some(quantize(&mut v, cfg.n_out));
        }
    }
    EnginePass {
        values: v,
        grid_gain,
        calibration,
    }
}

/// Mid-tread quantization on a symmetric range calibrated to the pass's own
/// maximum output magnitude. Returns the full scale used.
fn quantize(v: &mut [WideC], n_out: Option<u32>) -> f64 {
    let mut fs = I384::ZERO;
    for c in v.iter() {
        for part in [c.re, c.im] {
            if part.cmp_magnitude(&fs) == std::cmp::Ordering::Greater {
                fs = if part.is_negative() { part.wrapping_neg() } else { part };
            }
        }
    }
    let Some(bits) = n_out else {
        return fs.to_f64(); // unbounded ADC: identity
    };
    let fs_f = fs.to_f64();
    if fs_f == 0.0 {
        return 0.0;
    }
    // step = fullscale / 2^(bits-1); reconstruction k * step is exact given
    // integer k, keeping quantized outputs inside the exact domain.
    let step = fs.round_shr(bits - 1);
    let step_f = step.to_f64();
    let clamp = (1i64 << (bits - 1)) as f64;
    for c in v.iter_mut() {
        for part in [&mut c.re, &mut c.im] {
            let k = (part.to_f64() / step_f).round().clamp(-clamp, clamp) as i64;
            *part = step.mul_i64(k);
        }
    }
    fs_f
}

fn apply_rin(v: &mut [WideC], sigma_rel: f64, seed: u64) {
    let mut fs = 0f64;
    for c in v.iter() {
        fs = fs.max(c.max_abs_f64());
    }
    if fs == 0.0 || sigma_rel <= 0.0 {
        return;
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5eed_0f_1a5e5);
    let normal = Normal::new(0.0, sigma_rel * fs).unwrap();
    for c in v.iter_mut() {
        c.re = c.re.wrapping_add(i384_from_f64(normal.sample(&mut rng)));
        c.im = c.im.wrapping_add(i384_from_f64(normal.sample(&mut rng)));
    }
}

fn i384_from_f64(x: f64) -> I384 {
    if !x.is_finite() || x.abs() < 0.5 {
        return I384::ZERO;
    }
    let neg = x < 0.0;
    let mut mant = x.abs();
    let mut exp = 0u32;
    while mant >= 2f64.powi(63) {
        mant /= 2f64.powi(32);
        exp += 32;
    }
    let base = I384::from_i128(mant.round() as i128);
    let v = base.shl_exact(exp.min(383));
    if neg {
        v.wrapping_neg()
    } else {
        v
    }
}

// ---------------------------------------------------------------------------
// Public fixed-point sample and the spec'd 2-point butterfly.
// ---------------------------------------------------------------------------

/// A complex fixed-point value on the engine datapath: `value = mant /
/// 2^frac`, mantissa confined to `width` bits. Saturating arithmetic with
/// overflow counting; helpers validate against a `PffteConfig`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ComplexFx {
    pub re: i128,
    pub im: i128,
}

impl ComplexFx {
    pub fn new(re: i128, im: i128) -> Self {
        Self { re, im }
    }

    pub fn from_f64(re: f64, im: f64, frac: u32) -> Self {
        let s = 2f64.powi(frac as i32);
        Self {
            re: (re * s).round() as i128,
            im: (im * s).round() as i128,
        }
    }

    pub fn to_f64(self, frac: u32) -> (f64, f64) {
        let s = 2f64.powi(-(frac as i32));
        (self.re as f64 * s, self.im as f64 * s)
    }
}

fn sat_width(v: i128, width: u32, stats: &mut FxStats) -> i128 {
    if width >= 128 {
        return v;
    }
    let max = (1i128 << (width - 1)) - 1;
    if v > max {
        stats.overflow_count += 1;
        max
    } else if v < -max - 1 {
        stats.overflow_count += 1;
        -max - 1
    } else {
        v
    }
}

/// 2-point unitary butterfly through the three-matrix signal path: input
/// phase shifter, 2x2 coupler, output phase shifter.
pub fn butterfly2(in0: ComplexFx, in1: ComplexFx, cfg: &PffteConfig) -> (ComplexFx, ComplexFx, FxStats) {
    let mut stats = FxStats::default();
    let t = cfg.frac.twiddle_bits();
    let c = (2f64.powi(t as i32) / std::f64::consts::SQRT_2).round() as i128;
    let w = cfg.datapath_bits;
    let mul_c = |v: i128, stats: &mut FxStats| -> i128 {
        let p = v.saturating_mul(c);
        let half = 1i128 << (t - 1);
        let r = if p >= 0 { (p + half) >> t } else { -((-p + half) >> t) };
        sat_width(r, w, stats)
    };
    // Input phase shifter: (in0, -j*in1)
    let a = in0;
    let b = ComplexFx::new(in1.im, -in1.re);
    // Coupler (1/sqrt2) [[1, j], [j, 1]]: top = (a + j*b)/sqrt2,
    // bot = (j*a + b)/sqrt2.
    let top = ComplexFx::new(
        mul_c(a.re - b.im, &mut stats),
        mul_c(a.im + b.re, &mut stats),
    );
    let bot = ComplexFx::new(
        mul_c(b.re - a.im, &mut stats),
        mul_c(a.re + b.im, &mut stats),
    );
    // Output phase shifter: (top, -j*bot)
    let out0 = ComplexFx::new(
        sat_width(top.re, w, &mut stats),
        sat_width(top.im, w, &mut stats),
    );
    let out1 = ComplexFx::new(
        sat_width(bot.im, w, &mut stats),
        sat_width(-bot.re, w, &mut stats),
    );
    (out0, out1, stats)
}

/// Unitary 64-point DFT of fixed-point samples through the analog engine,
/// with the configured noise model at the output interface.
pub struct Fft64Output {
    pub values: Vec<ComplexFx>,
    pub stats: FxStats,
    pub calibration: Option<f64>,
}

pub fn unitary_fft64(x: &[ComplexFx], cfg: &PffteConfig, tw: &StageTwiddles) -> Fft64Output {
    assert_eq!(x.len(), ENGINE_POINTS);
    let mut input = [WideC::ZERO; ENGINE_POINTS];
    for (dst, src) in input.iter_mut().zip(x.iter()) {
        dst.re = I384::from_i128(src.re);
        dst.im = I384::from_i128(src.im);
    }
    let pass = engine_pass(&input, tw, cfg);
    let mut stats = FxStats::default();
    let values = pass
        .values
        .iter()
        .map(|wc| {
            let (re, sre) = wc.re.round_shr_to_i128(pass.grid_gain);
            let (im, sim) = wc.im.round_shr_to_i128(pass.grid_gain);
            if sre || sim {
                stats.overflow_count += 1;
            }
            ComplexFx::new(
                sat_width(re, cfg.datapath_bits, &mut stats),
                sat_width(im, cfg.datapath_bits, &mut stats),
            )
        })
        .collect();
    Fft64Output {
        values,
        stats,
        calibration: pass.calibration,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pffte::config::FracSplit;
    use rand::Rng;

    fn dft_oracle(x: &[(f64, f64)]) -> Vec<(f64, f64)> {
        // Independent direct unitary DFT in double precision.
        let n = x.len();
        let s = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|k| {
                let mut re = 0.0;
                let mut im = 0.0;
                for (j, &(xr, xi)) in x.iter().enumerate() {
                    let ang = -2.0 * std::f64::consts::PI * (j * k % n) as f64 / n as f64;
                    let (c, sn) = (ang.cos(), ang.sin());
                    re += xr * c - xi * sn;
                    im += xr * sn + xi * c;
                }
                (re * s, im * s)
            })
            .collect()
    }

    #[test]
    fn butterfly2_symmetry_cases() {
        let cfg = PffteConfig::ideal(64);
        let f = cfg.frac.frac_fft;
        let one = ComplexFx::from_f64(1.0, 0.0, f);
        let neg = ComplexFx::from_f64(-1.0, 0.0, f);
        let (o0, o1, st) = butterfly2(one, one, &cfg);
        let (r0, _) = o0.to_f64(f);
        let (r1, _) = o1.to_f64(f);
        assert!((r0 - std::f64::consts::SQRT_2).abs() < 1e-6);
        assert!(r1.abs() < 1e-6);
        assert_eq!(st.overflow_count, 0);
        let (o0, o1, _) = butterfly2(one, neg, &cfg);
        assert!((o0.to_f64(f).0).abs() < 1e-6);
        assert!((o1.to_f64(f).0 - std::f64::consts::SQRT_2).abs() < 1e-6);
    }

    #[test]
    fn butterfly2_matrix_path_matches_direct_formula() {
        let cfg = PffteConfig::ideal(64);
        let f = cfg.frac.frac_fft;
        let a = ComplexFx::from_f64(0.43, -0.11, f);
        let b = ComplexFx::from_f64(-0.77, 0.35, f);
        let (o0, o1, _) = butterfly2(a, b, &cfg);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (ar, ai) = a.to_f64(f);
        let (br, bi) = b.to_f64(f);
        let want0 = ((ar + br) * s, (ai + bi) * s);
        let want1 = ((ar - br) * s, (ai - bi) * s);
        let got0 = o0.to_f64(f);
        let got1 = o1.to_f64(f);
        let ulp = 2f64.powi(-(f as i32)) * 2.0;
        assert!((got0.0 - want0.0).abs() <= ulp && (got0.1 - want0.1).abs() <= ulp);
        assert!((got1.0 - want1.0).abs() <= ulp && (got1.1 - want1.1).abs() <= ulp);
    }

    #[test]
    fn fft64_zeros_and_delta() {
        let cfg = PffteConfig::ideal(64);
        let tw = build_stage_twiddles(64, cfg.frac.twiddle_bits());
        let zeros = vec![ComplexFx::default(); 64];
        let out = unitary_fft64(&zeros, &cfg, &tw);
        assert!(out.values.iter().all(|v| v.re == 0 && v.im == 0));

        let f = cfg.frac.frac_fft;
        let mut delta = vec![ComplexFx::default(); 64];
        delta[0] = ComplexFx::from_f64(1.0, 0.0, f);
        let out = unitary_fft64(&delta, &cfg, &tw);
        let eighth = 1i128 << (f - 3);
        for v in &out.values {
            assert_eq!(v.re, eighth, "outputs must be exactly 1/8");
            assert_eq!(v.im, 0);
        }
    }

    #[test]
    fn fft64_matches_direct_dft_oracle() {
        use rand::SeedableRng;
        let cfg = PffteConfig::ideal(64);
        let f = cfg.frac.frac_fft;
        let tw = build_stage_twiddles(64, cfg.frac.twiddle_bits());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let xs: Vec<(f64, f64)> = (0..64)
            .map(|_| (rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
            .collect();
        let input: Vec<ComplexFx> = xs.iter().map(|&(r, i)| ComplexFx::from_f64(r, i, f)).collect();
        let out = unitary_fft64(&input, &cfg, &tw);
        let want = dft_oracle(&xs);
        let bound = 2f64.powi(3 - f as i32);
        for (got, want) in out.values.iter().zip(want.iter()) {
            let (gr, gi) = got.to_f64(f);
            assert!((gr - want.0).abs() < bound, "{gr} vs {}", want.0);
            assert!((gi - want.1).abs() < bound);
        }
        assert_eq!(out.stats.overflow_count, 0);
    }

    #[test]
    fn quantized_outputs_have_n_out_levels() {
        let mut cfg = PffteConfig::ideal(64);
        cfg.noise_model = NoiseModel::QuantizeOnly;
        cfg.n_out = Some(4);
        cfg.frac = FracSplit::DEFAULT;
        let f = cfg.frac.frac_fft;
        let tw = build_stage_twiddles(64, cfg.frac.twiddle_bits());
        let mut x = vec![ComplexFx::default(); 64];
        for (i, v) in x.iter_mut().enumerate() {
            *v = ComplexFx::from_f64(((i * 7 % 13) as f64 / 13.0) - 0.5, 0.0, f);
        }
        let out = unitary_fft64(&x, &cfg, &tw);
        assert!(out.calibration.is_some());
        // Distinct quantized magnitudes fit in 2^4 + 1 levels per axis.
        let mut levels: Vec<i128> = out.values.iter().map(|v| v.re).collect();
        levels.sort_unstable();
        levels.dedup();
        assert!(levels.len() <= 17, "got {} levels", levels.len());
    }
}
