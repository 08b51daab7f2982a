//! Negacyclic polynomial multiplication through the engine transforms.
//!
//! A length-N negacyclic product folds to a length-N/2 complex transform:
//! map `P_j = p_j - i*p_{j+N/2}` (so `X^(N/2) -> -i`), twist by
//! `e^{-i*pi*j/N}`, and the forward engine transform then evaluates the
//! folded polynomial at the roots of `X^(N/2) = -i`. Multiplication is
//! pointwise there; the inverse runs through the same forward engine with
//! conjugation.
//!
//! Operands are staged onto the datapath with per-kind scalings chosen from
//! the word width w, the transform size m and the mantissa capacity:
//!
//! * small operands (gadget digits, binary keys) are exact, padded up by
//!   the forward-phase fraction bits;
//! * full-torus operands keep `cap - log2(m) - 4` of their top bits (the
//!   dropped tail is orders of magnitude below the scheme's own noise);
//! * torus-by-torus products (tensor products) split each operand into two
//!   exact half-width limbs so no input precision is lost at all.
//!
//! Every scaling is a power of two, recorded in the plan and folded into a
//! single exact final shift, so the computed product is `round((a (*) b) /
//! 2^rescale) mod 2^w` up to the engine's fixed-point rounding.

use super::config::PffteConfig;
use super::fourstep::FxTransform;
use super::fx::{Cfx, FxMantissa, FxStats};
use crate::torus::poly::ModPoly;
use crate::torus::word::TorusWord;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NegacyclicError {
    #[error("polynomial size {0} not supported by the engine (need N/2 in 256..=4096)")]
    UnsupportedSize(usize),
    #[error("polynomial shape mismatch")]
    Shape,
}

/// Fourier-domain operand: the raw forward transform of the folded, twisted,
/// scaled coefficients. `scale` is the net log2 applied to the coefficients
/// on the way in (positive = padded up).
#[derive(Clone, Debug)]
pub struct FourierPoly<M: FxMantissa> {
    pub v: Vec<Cfx<M>>,
    pub scale: i32,
}

/// Accumulator for pointwise products, at `prod_scale` log2 relative to the
/// true convolution transform.
#[derive(Clone, Debug)]
pub struct FourierAcc<M: FxMantissa> {
    pub v: Vec<Cfx<M>>,
    pub prod_scale: i32,
}

impl<M: FxMantissa> FourierAcc<M> {
    pub fn zero(m: usize, prod_scale: i32) -> Self {
        Self {
            v: vec![Cfx::zero(); m],
            prod_scale,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NegacyclicFft {
    pub poly_n: usize,
    pub m: usize,
    pub log2m: u32,
    pub tbits: u32,
    pub frac_fft: u32,
    pub frac_ifft: u32,
    transform: FxTransform,
    twist: Vec<(i64, i64)>,
    untwist: Vec<(i64, i64)>,
}

impl NegacyclicFft {
    pub fn new(poly_n: usize, cfg: &PffteConfig) -> Result<Self, NegacyclicError> {
        if !poly_n.is_power_of_two() || !(512..=8192).contains(&poly_n) {
            return Err(NegacyclicError::UnsupportedSize(poly_n));
        }
        let m = poly_n / 2;
        let tbits = cfg.frac.twiddle_bits();
        let scale = 2f64.powi(tbits as i32);
        let twist: Vec<(i64, i64)> = (0..m)
            .map(|j| {
                let ang = -std::f64::consts::PI * j as f64 / poly_n as f64;
                ((ang.cos() * scale).round() as i64, (ang.sin() * scale).round() as i64)
            })
            .collect();
        let untwist = twist.iter().map(|&(c, s)| (c, -s)).collect();
        Ok(Self {
            poly_n,
            m,
            log2m: m.trailing_zeros(),
            tbits,
            frac_fft: cfg.frac.frac_fft,
            frac_ifft: cfg.frac.frac_ifft,
            transform: FxTransform::new(m, tbits),
            twist,
            untwist,
        })
    }

    pub fn engine_calls_per_transform(&self) -> u64 {
        self.transform.engine_calls()
    }

    /// Fold + twist + scale + forward transform. `scale` > 0 pads the
    /// (signed, centered) coefficients up; < 0 rounds the top bits in.
    pub fn forward<W: TorusWord, M: FxMantissa>(
        &self,
        p: &ModPoly<W>,
        scale: i32,
        stats: &mut FxStats,
    ) -> FourierPoly<M> {
        debug_assert_eq!(p.len(), self.poly_n);
        let mut data = vec![Cfx::zero(); self.m];
        let c = p.coeffs();
        for j in 0..self.m {
            let lo = scale_coeff::<W, M>(c[j], scale, stats);
            // fold: P_j = p_j - i * p_{j+m}
            let hi = scale_coeff::<W, M>(c[j + self.m], scale, stats).neg();
            let v = Cfx { re: lo, im: hi };
            data[j] = if j == 0 {
                v
            } else {
                let (wr, wi) = self.twist[j];
                v.mul_twiddle(wr, wi, self.tbits, stats)
            };
        }
        self.transform.forward(&mut data, stats);
        FourierPoly { v: data, scale }
    }

    /// Forward transforms of the two half-width limbs of a full-torus
    /// operand: `c = hi * 2^(w/2) + lo` with `lo` unsigned and `hi` the
    /// signed remainder, both exact on the datapath.
    pub fn forward_limbs<W: TorusWord, M: FxMantissa>(
        &self,
        p: &ModPoly<W>,
        pad: u32,
        stats: &mut FxStats,
    ) -> [FourierPoly<M>; 2] {
        debug_assert_eq!(p.len(), self.poly_n);
        let h = W::WIDTH / 2;
        let half_mask = (1u128 << h) - 1;
        let mut lo_data = vec![Cfx::zero(); self.m];
        let mut hi_data = vec![Cfx::zero(); self.m];
        let c = p.coeffs();
        fn split_one<W: TorusWord>(v: W, h: u32, half_mask: u128) -> (i128, i128) {
            let signed = v.to_signed_i128();
            let lo = (signed as u128 & half_mask) as i128;
            let hi = (signed - lo) >> h;
            (lo, hi)
        }
        for j in 0..self.m {
            let (la, ha) = split_one(c[j], h, half_mask);
            let (lb, hb) = split_one(c[j + self.m], h, half_mask);
            let lo_a = M::from_i128_sat(la << pad, stats);
            let hi_a = M::from_i128_sat(ha << pad, stats);
            let lo_b = M::from_i128_sat(lb << pad, stats);
            let hi_b = M::from_i128_sat(hb << pad, stats);
            let vl = Cfx { re: lo_a, im: lo_b.neg() };
            let vh = Cfx { re: hi_a, im: hi_b.neg() };
            if j == 0 {
                lo_data[j] = vl;
                hi_data[j] = vh;
            } else {
                let (wr, wi) = self.twist[j];
                lo_data[j] = vl.mul_twiddle(wr, wi, self.tbits, stats);
                hi_data[j] = vh.mul_twiddle(wr, wi, self.tbits, stats);
            }
        }
        self.transform.forward(&mut lo_data, stats);
        self.transform.forward(&mut hi_data, stats);
        [
            FourierPoly { v: lo_data, scale: pad as i32 },
            FourierPoly { v: hi_data, scale: pad as i32 },
        ]
    }

    /// acc += (a o b) >> shift, pointwise.
    pub fn mac<M: FxMantissa>(
        &self,
        acc: &mut FourierAcc<M>,
        a: &FourierPoly<M>,
        b: &FourierPoly<M>,
        shift: u32,
        stats: &mut FxStats,
    ) {
        debug_assert_eq!(acc.v.len(), self.m);
        for ((dst, x), y) in acc.v.iter_mut().zip(a.v.iter()).zip(b.v.iter()) {
            let p = x.mul_full(*y, shift, stats);
            *dst = dst.add(p, stats);
        }
    }

    /// Inverse transform, untwist, unfold, final exact scale by `2^e_final`
    /// and wrap mod `2^w`, written into `out`.
    pub fn inverse_into<W: TorusWord, M: FxMantissa>(
        &self,
        mut acc: FourierAcc<M>,
        e_final: i32,
        out: &mut ModPoly<W>,
        stats: &mut FxStats,
    ) {
        debug_assert_eq!(out.len(), self.poly_n);
        self.transform.inverse(&mut acc.v, stats);
        let oc = out.coeffs_mut();
        for j in 0..self.m {
            let v = if j == 0 {
                acc.v[j]
            } else {
                let (wr, wi) = self.untwist[j];
                acc.v[j].mul_twiddle(wr, wi, self.tbits, stats)
            };
            oc[j] = wrap_scaled::<W>(v.re.to_i128(), e_final);
            oc[j + self.m] = wrap_scaled::<W>(v.im.to_i128().wrapping_neg(), e_final);
        }
    }
}

fn scale_coeff<W: TorusWord, M: FxMantissa>(c: W, scale: i32, stats: &mut FxStats) -> M {
    let signed = c.to_signed_i128();
    let v = if scale >= 0 {
        signed << scale
    } else {
        let sh = (-scale) as u32;
        let half = 1i128 << (sh - 1);
        if signed >= 0 {
            (signed + half) >> sh
        } else {
            -((-signed + half) >> sh)
        }
    };
    M::from_i128_sat(v, stats)
}

fn wrap_scaled<W: TorusWord>(v: i128, e_final: i32) -> W {
    if e_final >= 0 {
        W::from_u128((v as u128).wrapping_shl(e_final as u32) & W::mask())
    } else {
        let sh = (-e_final) as u32;
        let half = 1i128 << (sh - 1);
        let r = if v >= 0 {
            (v + half) >> sh
        } else {
            -((-v + half) >> sh)
        };
        W::from_u128((r as u128) & W::mask())
    }
}

/// Scaling plan for one small-by-torus product family.
///
/// Both operands are padded up as far as the mantissa allows: an unpadded
/// operand loses half an ulp to the input twist rounding, which the other
/// side's magnitude then amplifies. The pointwise shift is sized for the
/// worst-case transform magnitudes (`|F| <= m * max|coeff|`) plus the
/// accumulated rows and the inverse transform's internal growth, so the
/// datapath cannot saturate even on adversarial inputs.
#[derive(Clone, Copy, Debug)]
pub struct SmallTorusPlan {
    pub small_pad: u32,
    /// Net scale of the torus-side operand (positive = padded).
    pub torus_scale: i32,
    pub pw_shift: u32,
    pub e_final: i32,
}

impl SmallTorusPlan {
    /// `small_bound` / `torus_bits`: log2 bounds on the two operands' max
    /// coefficient magnitudes (`torus_bits = w` for key material).
    /// `rows_log2`: log2 of how many products accumulate per output.
    pub fn new(
        torus_bits: u32,
        log2m: u32,
        cap: u32,
        frac_fft: u32,
        small_bound: u32,
        rows_log2: u32,
    ) -> Self {
        let small_pad = frac_fft.min(cap.saturating_sub(small_bound + log2m + 2));
        let torus_drop = (torus_bits + log2m + 3).saturating_sub(cap);
        let torus_pad = if torus_drop > 0 {
            0
        } else {
            frac_fft.min(cap.saturating_sub(torus_bits + log2m + 3))
        };
        let torus_scale = torus_pad as i32 - torus_drop as i32;
        let a = small_bound + small_pad + log2m;
        let b = (torus_bits as i32 + torus_scale) as u32 + log2m;
        let pw_shift = (a + b + rows_log2 + log2m + 1).saturating_sub(cap).max(1);
        let e_final = pw_shift as i32 - small_pad as i32 - torus_scale - log2m as i32;
        Self {
            small_pad,
            torus_scale,
            pw_shift,
            e_final,
        }
    }
}

/// Scaling plan for torus-by-torus limb products with a final `2^-rescale`.
/// The binding magnitude is the DC spike of the unsigned low limbs
/// (`|F(0)| <= m * 2^(h+pad)`); only one such spike exists per transform, so
/// products and the inverse sum stay within `2*A_dc + slack`.
#[derive(Clone, Copy, Debug)]
pub struct LimbPlan {
    pub pad: u32,
    pub base_shift: u32,
    pub e_final_base: i32,
    pub half_width: u32,
}

impl LimbPlan {
    pub fn new(w: u32, log2m: u32, cap: u32, frac_fft: u32) -> Self {
        let h = w / 2;
        let pad = frac_fft.min(cap.saturating_sub(log2m + h + 2));
        let a_dc = h + pad + log2m;
        let base_shift = (2 * a_dc + 4).saturating_sub(cap).max(1);
        let e_final_base = base_shift as i32 - 2 * pad as i32 - log2m as i32;
        Self {
            pad,
            base_shift,
            e_final_base,
            half_width: h,
        }
    }
}
