//! Large transforms on the fixed-point datapath, decomposed the way the
//! hardware runs them: rows of 64-point engine passes, a twiddle multiply,
//! a transpose, and columns of zero-padded engine passes. The column passes
//! are evaluated through the decimation identity (every (64/n0)-th output of
//! a zero-padded 64-point pass equals the n0-point transform), so the model
//! computes exactly the outputs the hardware keeps.
//!
//! Transforms here are raw (unnormalized): a forward pass of size M scales
//! by the DFT sum, and forward-pointwise-inverse composes to `M * conv`,
//! which callers fold into one exact final shift. The public unitary
//! wrappers live in `mod.rs`.

use super::config::PffteConfig;
use super::engine::{build_stage_twiddles, StageTwiddles, ENGINE_POINTS};
use super::fx::{Cfx, FxMantissa, FxStats};

#[derive(Clone, Debug)]
pub struct FxTransform {
    pub m_points: usize,
    pub n0: usize,
    pub tbits: u32,
    tw_row: StageTwiddles,
    tw_col: StageTwiddles,
    /// `W_M^(q*k1)` for q < n0, k1 < 64, indexed `q * 64 + k1`.
    step2: Vec<(i64, i64)>,
}

impl FxTransform {
    pub fn new(m_points: usize, tbits: u32) -> Self {
        assert!(m_points.is_power_of_two());
        assert!(
            (256..=4096).contains(&m_points),
            "transform size {m_points} outside the engine's 4-step range"
        );
        let n0 = m_points / ENGINE_POINTS;
        let scale = 2f64.powi(tbits as i32);
        let step2 = (0..n0 * ENGINE_POINTS)
            .map(|idx| {
                let (q, k1) = (idx / ENGINE_POINTS, idx % ENGINE_POINTS);
                let ang = -2.0 * std::f64::consts::PI * (q * k1) as f64 / m_points as f64;
                ((ang.cos() * scale).round() as i64, (ang.sin() * scale).round() as i64)
            })
            .collect();
        Self {
            m_points,
            n0,
            tbits,
            tw_row: build_stage_twiddles(ENGINE_POINTS, tbits),
            tw_col: build_stage_twiddles(n0, tbits),
            step2,
        }
    }

    /// Engine passes one forward transform costs (row passes plus padded
    /// column passes), for the latency model.
    pub fn engine_calls(&self) -> u64 {
        (self.n0 + ENGINE_POINTS) as u64
    }

    /// Raw forward DFT, decimated four-step. `data.len() == m_points`.
    pub fn forward<M: FxMantissa>(&self, data: &mut [Cfx<M>], stats: &mut FxStats) {
        let m = self.m_points;
        let n0 = self.n0;
        debug_assert_eq!(data.len(), m);
        // Step 1: 64-point DFT over p for each residue q: rows R[q][k1] of
        // x[p*n0 + q].
        let mut rows: Vec<Cfx<M>> = vec![Cfx::zero(); m];
        for q in 0..n0 {
            let row = &mut rows[q * ENGINE_POINTS..(q + 1) * ENGINE_POINTS];
            for p in 0..ENGINE_POINTS {
                row[p] = data[p * n0 + q];
            }
            fft_fx(row, &self.tw_row, stats);
        }
        // Step 2: twiddle by W_M^(q*k1); W^0 rows/columns stay exact.
        for q in 1..n0 {
            let row = &mut rows[q * ENGINE_POINTS..(q + 1) * ENGINE_POINTS];
            for (k1, v) in row.iter_mut().enumerate().skip(1) {
                let (wr, wi) = self.step2[q * ENGINE_POINTS + k1];
                *v = v.mul_twiddle(wr, wi, self.tbits, stats);
            }
        }
        // Steps 3+4: for each k1, an n0-point DFT down the column (the
        // hardware's zero-padded 64-point pass, decimated).
        let mut col: Vec<Cfx<M>> = vec![Cfx::zero(); n0];
        for k1 in 0..ENGINE_POINTS {
            for q in 0..n0 {
                col[q] = rows[q * ENGINE_POINTS + k1];
            }
            fft_fx(&mut col, &self.tw_col, stats);
            for k0 in 0..n0 {
                data[k1 + ENGINE_POINTS * k0] = col[k0];
            }
        }
    }

    /// Raw inverse: conjugate, forward, conjugate. Composes with `forward`
    /// to `m_points * identity`.
    pub fn inverse<M: FxMantissa>(&self, data: &mut [Cfx<M>], stats: &mut FxStats) {
        for v in data.iter_mut() {
            *v = v.conj();
        }
        self.forward(data, stats);
        for v in data.iter_mut() {
            *v = v.conj();
        }
    }
}

/// Iterative radix-2 DIT, unnormalized, twiddle products rounded on the
/// value grid. The `j == 0` leg is a pure add/sub so zero inputs and delta
/// responses stay exact.
pub fn fft_fx<M: FxMantissa>(x: &mut [Cfx<M>], tw: &StageTwiddles, stats: &mut FxStats) {
    let n = x.len();
    if n == 1 {
        return;
    }
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
                let idx = base + j;
                let t = if j == 0 {
                    x[idx + half]
                } else {
                    let (wr, wi) = stage[j];
                    x[idx + half].mul_twiddle(wr, wi, tw.bits, stats)
                };
                let u = x[idx];
                x[idx] = u.add(t, stats);
                x[idx + half] = u.sub(t, stats);
            }
        }
    }
}

/// Cache of transforms per size for one configuration.
#[derive(Clone, Debug)]
pub struct TransformSet {
    pub tbits: u32,
    sizes: Vec<Option<FxTransform>>,
}

impl TransformSet {
    pub fn new(cfg: &PffteConfig) -> Self {
        Self {
            tbits: cfg.frac.twiddle_bits(),
            sizes: vec![None; 16],
        }
    }

    pub fn get_or_build(&mut self, m_points: usize) -> &FxTransform {
        let slot = m_points.trailing_zeros() as usize;
        if self.sizes[slot].is_none() {
            self.sizes[slot] = Some(FxTransform::new(m_points, self.tbits));
        }
        self.sizes[slot].as_ref().unwrap()
    }
}
