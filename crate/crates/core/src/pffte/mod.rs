//! Functional model of the 64-point photonic FFT engine and the transforms
//! built on it: the bit-sliced pipeline, conjugation-based inverse, 4-step
//! scaling to large sizes, the negacyclic multiplication adapter, and the
//! optical-fidelity proxy.

pub mod config;
pub mod engine;
pub mod fidelity;
pub mod fourstep;
pub mod fx;
pub mod negacyclic;
pub mod pipeline;
pub mod sweep;
pub mod wide;

pub use config::{FracSplit, NoiseModel, PffteConfig};
pub use engine::{butterfly2, unitary_fft64, ComplexFx, PIPELINE_FILL_CYCLES};
pub use fidelity::{extinction_ratio, FidelityReport, PhotonicGeometry};
pub use fx::FxStats;
pub use negacyclic::{FourierAcc, FourierPoly, NegacyclicError, NegacyclicFft};
pub use pipeline::{BitSlicedFft, BitSlicedResult, SliceFrame};

use crate::torus::poly::ModPoly;
use crate::torus::word::TorusWord;
use fourstep::FxTransform;
use fx::{Cfx, FxMantissa};
use negacyclic::{LimbPlan, SmallTorusPlan};

/// Unitary transform of N points (N in 512..=4096) through 4-step
/// decomposition onto the 64-point engine.
pub fn four_step_fft(
    x: &[ComplexFx],
    cfg: &PffteConfig,
) -> Result<(Vec<ComplexFx>, FxStats), NegacyclicError> {
    let m = x.len();
    if !m.is_power_of_two() || !(512..=4096).contains(&m) {
        return Err(NegacyclicError::UnsupportedSize(m));
    }
    let mut stats = FxStats::default();
    let t = FxTransform::new(m, cfg.frac.twiddle_bits());
    let mut data: Vec<Cfx<i128>> = x.iter().map(|c| Cfx { re: c.re, im: c.im }).collect();
    t.forward(&mut data, &mut stats);
    Ok((unitary_rescale(data, m, cfg, &mut stats), stats))
}

/// Inverse transform via conjugation: conj -> forward engine -> conj. With
/// the unitary forward this is exactly the unitary inverse (the 1/N of the
/// non-unitary convention collapses).
pub fn ifft_via_conj(
    x: &[ComplexFx],
    cfg: &PffteConfig,
) -> Result<(Vec<ComplexFx>, FxStats), NegacyclicError> {
    let conj: Vec<ComplexFx> = x.iter().map(|c| ComplexFx::new(c.re, -c.im)).collect();
    let (mut out, stats) = four_step_fft(&conj, cfg)?;
    for v in out.iter_mut() {
        v.im = -v.im;
    }
    Ok((out, stats))
}

/// Scale the raw (sum-form) transform back to unitary: divide by sqrt(m).
fn unitary_rescale(
    data: Vec<Cfx<i128>>,
    m: usize,
    cfg: &PffteConfig,
    stats: &mut FxStats,
) -> Vec<ComplexFx> {
    let log2m = m.trailing_zeros();
    let tbits = cfg.frac.twiddle_bits();
    let inv_sqrt2 = (2f64.powi(tbits as i32) / std::f64::consts::SQRT_2).round() as i64;
    data.into_iter()
        .map(|v| {
            let (re, im) = if log2m % 2 == 0 {
                (v.re.round_shr(log2m / 2), v.im.round_shr(log2m / 2))
            } else {
                // 1/sqrt(m) = (1/sqrt 2) * 2^-(log2m-1)/2, one rounding.
                let sh = tbits + (log2m - 1) / 2;
                (v.re.mul_tw(inv_sqrt2, sh, stats), v.im.mul_tw(inv_sqrt2, sh, stats))
            };
            ComplexFx::new(re, im)
        })
        .collect()
}

/// Negacyclic product through the engine transforms with an automatic
/// scaling route: a small operand (gadget digits, binary polys) rides the
/// exact small-by-torus plan; two full-width operands go through exact
/// half-word limb splitting. `rescale_log2` divides the true product by a
/// power of two before wrapping mod 2^w (tensor products use w).
pub fn negacyclic_mul_fft<W: TorusWord>(
    a: &ModPoly<W>,
    b: &ModPoly<W>,
    cfg: &PffteConfig,
) -> Result<(ModPoly<W>, FxStats), NegacyclicError> {
    negacyclic_mul_fft_rescale(a, b, 0, cfg)
}

pub fn negacyclic_mul_fft_rescale<W: TorusWord>(
    a: &ModPoly<W>,
    b: &ModPoly<W>,
    rescale_log2: u32,
    cfg: &PffteConfig,
) -> Result<(ModPoly<W>, FxStats), NegacyclicError> {
    if a.len() != b.len() {
        return Err(NegacyclicError::Shape);
    }
    if W::WIDTH == 32 || W::WIDTH == 64 {
        mul_dispatch::<W, i64>(a, b, rescale_log2, cfg)
    } else {
        mul_dispatch::<W, i128>(a, b, rescale_log2, cfg)
    }
}

fn signed_bits<W: TorusWord>(p: &ModPoly<W>) -> u32 {
    let mut max = 0u128;
    for c in p.coeffs() {
        max = max.max(c.to_signed_i128().unsigned_abs());
    }
    128 - max.leading_zeros()
}

fn mul_dispatch<W: TorusWord, M: FxMantissa>(
    a: &ModPoly<W>,
    b: &ModPoly<W>,
    rescale: u32,
    cfg: &PffteConfig,
) -> Result<(ModPoly<W>, FxStats), NegacyclicError> {
    let fft = NegacyclicFft::new(a.len(), cfg)?;
    let cap = M::BITS - 2;
    let mut stats = FxStats::default();
    let w = W::WIDTH;
    let bits_a = signed_bits(a);
    let bits_b = signed_bits(b);
    // One operand small enough for the exact small-side plan?
    let small_limit = (cap.saturating_sub(fft.log2m + cfg.frac.frac_fft + 2)).min(w / 2);
    let (small, torus) = if bits_a <= bits_b && bits_a <= small_limit {
        (Some((a, bits_a)), b)
    } else if bits_b <= small_limit {
        (Some((b, bits_b)), a)
    } else {
        (None, a)
    };
    let mut out = ModPoly::<W>::zero(a.len());
    if let Some((small_p, small_bits)) = small {
        let torus_bits = signed_bits(torus).max(1).min(w);
        let plan = SmallTorusPlan::new(torus_bits, fft.log2m, cap, cfg.frac.frac_fft, small_bits.max(1));
        let fs: FourierPoly<M> = fft.forward(small_p, plan.small_pad as i32, &mut stats);
        let ft: FourierPoly<M> = fft.forward(torus, -(plan.torus_drop as i32), &mut stats);
        let mut acc = FourierAcc::zero(fft.m, 0);
        fft.mac(&mut acc, &fs, &ft, plan.pw_shift, &mut stats);
        fft.inverse_into(acc, plan.e_final - rescale as i32, &mut out, &mut stats);
    } else {
        let plan = LimbPlan::new(w, fft.log2m, cap, cfg.frac.frac_fft);
        let fa: [FourierPoly<M>; 2] = fft.forward_limbs(a, plan.pad, &mut stats);
        let fb: [FourierPoly<M>; 2] = fft.forward_limbs(b, plan.pad, &mut stats);
        // Group limb pairs by weight; each group gets its own inverse so
        // every pair keeps a uniform pointwise shift.
        for group in 0..=2u32 {
            let weight = plan.half_width as i64 * group as i64 - rescale as i64;
            if weight >= w as i64 {
                continue; // contributes 0 mod 2^w
            }
            let mut acc = FourierAcc::zero(fft.m, 0);
            for i in 0..2u32 {
                for j in 0..2u32 {
                    if i + j == group {
                        fft.mac(&mut acc, &fa[i as usize], &fb[j as usize], plan.base_shift, &mut stats);
                    }
                }
            }
            let e = plan.e_final_base as i64 + weight;
            let mut partial = ModPoly::<W>::zero(a.len());
            fft.inverse_into(acc, e as i32, &mut partial, &mut stats);
            out.add_assign(&partial);
        }
    }
    Ok((out, stats))
}

#[cfg(test)]
mod dbg { include!("/tmp/dbg_test.rs"); use crate as ofhe_core_unused; }

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::poly::poly_mul_schoolbook;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn four_step_delta_gives_flat_spectrum() {
        let cfg = PffteConfig::ideal(64);
        for m in [512usize, 1024, 2048, 4096] {
            let f = cfg.frac.frac_fft;
            let mut x = vec![ComplexFx::default(); m];
            x[0] = ComplexFx::from_f64(1.0, 0.0, f);
            let (out, stats) = four_step_fft(&x, &cfg).unwrap();
            assert_eq!(stats.overflow_count, 0);
            let want = 1.0 / (m as f64).sqrt();
            for v in &out {
                let (re, im) = v.to_f64(f);
                assert!((re - want).abs() < 1e-4, "m={m}: {re} vs {want}");
                assert!(im.abs() < 1e-4);
            }
        }
    }

    #[test]
    fn four_step_roundtrip_through_conj_inverse() {
        let cfg = PffteConfig::ideal(64);
        let f = cfg.frac.frac_fft;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let x: Vec<ComplexFx> = (0..1024)
            .map(|_| ComplexFx::from_f64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, f))
            .collect();
        let (fwd, _) = four_step_fft(&x, &cfg).unwrap();
        let (back, _) = ifft_via_conj(&fwd, &cfg).unwrap();
        for (got, want) in back.iter().zip(x.iter()) {
            let (gr, gi) = got.to_f64(f);
            let (wr, wi) = want.to_f64(f);
            assert!((gr - wr).abs() < 1e-5 && (gi - wi).abs() < 1e-5);
        }
    }

    #[test]
    fn real_input_roundtrip_has_small_imaginary_parts() {
        let cfg = PffteConfig::ideal(64);
        let f = cfg.frac.frac_fft;
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let x: Vec<ComplexFx> = (0..512)
            .map(|_| ComplexFx::from_f64(rng.gen::<f64>() - 0.5, 0.0, f))
            .collect();
        let (fwd, _) = four_step_fft(&x, &cfg).unwrap();
        let (back, _) = ifft_via_conj(&fwd, &cfg).unwrap();
        for v in &back {
            let (_, im) = v.to_f64(f);
            assert!(im.abs() < 1e-5);
        }
    }

    #[test]
    fn public_mul_identity_and_small_cases() {
        let cfg = PffteConfig::ideal(64);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let n = 1024;
        let one = ModPoly::<u32>::constant(1, n);
        let b = ModPoly::<u32>::from_coeffs((0..n).map(|_| rng.gen()).collect());
        let (got, stats) = negacyclic_mul_fft(&one, &b, &cfg).unwrap();
        assert_eq!(stats.overflow_count, 0);
        for (g, w) in got.coeffs().iter().zip(b.coeffs()) {
            assert!(g.wrapping_sub(*w).to_signed_i128().unsigned_abs() <= 2);
        }
    }

    #[test]
    fn public_mul_small_coeff_exact_match() {
        let cfg = PffteConfig::ideal(64);
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let n = 1024;
        let a = ModPoly::<u32>::from_coeffs((0..n).map(|_| rng.gen_range(0..1024u32)).collect());
        let b = ModPoly::<u32>::from_coeffs((0..n).map(|_| rng.gen_range(0..2u32)).collect());
        let (got, _) = negacyclic_mul_fft(&a, &b, &cfg).unwrap();
        assert_eq!(got, poly_mul_schoolbook(&a, &b).unwrap());
    }

    #[test]
    fn public_mul_full_scale_within_analytic_bound() {
        // Both operands full torus width, plain product mod 2^w: the
        // dominant error comes from the weight-2^32 limb group.
        let cfg = PffteConfig::ideal(64);
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let n = 1024;
        let a = ModPoly::<u64>::from_coeffs((0..n).map(|_| rng.gen()).collect());
        let b = ModPoly::<u64>::from_coeffs((0..n).map(|_| rng.gen()).collect());
        let (got, stats) = negacyclic_mul_fft(&a, &b, &cfg).unwrap();
        assert_eq!(stats.overflow_count, 0);
        let want = poly_mul_schoolbook(&a, &b).unwrap();
        let plan = LimbPlan::new(64, 9, 62, 26);
        // per-group ifft error ~ sqrt(m)*2^4 at grid e_final_base + weight
        let bound = 2f64.powf(plan.e_final_base as f64 + 32.0 + 14.0);
        for (g, w) in got.coeffs().iter().zip(want.coeffs()) {
            let d = g.wrapping_sub(*w).to_signed_i128().unsigned_abs() as f64;
            assert!(d <= bound, "err 2^{:.1} vs bound 2^{:.1}", d.log2(), bound.log2());
        }
    }
}
