//! Fixed-point scalars for the engine model.
//!
//! Two arithmetic flavours share the butterfly-network code through the
//! `EngineScalar` trait:
//!
//! * `Cfx<i64>` / `Cfx<i128>` — the production datapath. Twiddle products
//!   round at the twiddle grid, additions saturate, overflow is counted.
//! * `WideC` (see `wide.rs`) — the exact analog path. No intermediate
//!   rounding at all; the value grid simply grows per stage. This is what
//!   makes bit-slice recombination exactly linear.

use std::fmt;

/// Per-call arithmetic bookkeeping (saturation never silently wraps).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FxStats {
    pub overflow_count: u64,
}

impl FxStats {
    pub fn merge(&mut self, other: FxStats) {
        self.overflow_count += other.overflow_count;
    }
}

pub trait FxMantissa: Copy + fmt::Debug + Default + PartialEq + Send + Sync + 'static {
    const BITS: u32;
    fn zero() -> Self;
    fn sat_add(self, rhs: Self, stats: &mut FxStats) -> Self;
    fn sat_sub(self, rhs: Self, stats: &mut FxStats) -> Self;
    fn neg(self) -> Self;
    /// `round(self * tw / 2^shift)` with round half away from zero.
    fn mul_tw(self, tw: i64, shift: u32, stats: &mut FxStats) -> Self;
    /// `round(self * rhs / 2^shift)` for pointwise products.
    fn mul_shift(self, rhs: Self, shift: u32, stats: &mut FxStats) -> Self;
    /// Arithmetic shift with round-half-away-from-zero; `shift` may be 0.
    fn round_shr(self, shift: u32) -> Self;
    fn shl_exact(self, shift: u32, stats: &mut FxStats) -> Self;
    fn to_i128(self) -> i128;
    fn from_i128_sat(v: i128, stats: &mut FxStats) -> Self;
    fn abs_f64(self) -> f64;
}

#[inline(always)]
fn shr_round_i128(v: i128, shift: u32) -> i128 {
    if shift == 0 {
        return v;
    }
    let half = 1i128 << (shift - 1);
    if v >= 0 {
        (v + half) >> shift
    } else {
        -((-v + half) >> shift)
    }
}

impl FxMantissa for i64 {
    const BITS: u32 = 64;
    #[inline(always)]
    fn zero() -> Self {
        0
    }
    #[inline(always)]
    fn sat_add(self, rhs: Self, stats: &mut FxStats) -> Self {
        match self.checked_add(rhs) {
            Some(v) => v,
            None => {
                stats.overflow_count += 1;
                if self > 0 {
                    i64::MAX
                } else {
                    i64::MIN
                }
            }
        }
    }
    #[inline(always)]
    fn sat_sub(self, rhs: Self, stats: &mut FxStats) -> Self {
        match self.checked_sub(rhs) {
            Some(v) => v,
            None => {
                stats.overflow_count += 1;
                if self > 0 {
                    i64::MAX
                } else {
                    i64::MIN
                }
            }
        }
    }
    #[inline(always)]
    fn neg(self) -> Self {
        self.wrapping_neg()
    }
    #[inline(always)]
    fn mul_tw(self, tw: i64, shift: u32, stats: &mut FxStats) -> Self {
        let prod = self as i128 * tw as i128;
        Self::from_i128_sat(shr_round_i128(prod, shift), stats)
    }
    #[inline(always)]
    fn mul_shift(self, rhs: Self, shift: u32, stats: &mut FxStats) -> Self {
        let prod = self as i128 * rhs as i128;
        Self::from_i128_sat(shr_round_i128(prod, shift), stats)
    }
    #[inline(always)]
    fn round_shr(self, shift: u32) -> Self {
        shr_round_i128(self as i128, shift) as i64
    }
    #[inline(always)]
    fn shl_exact(self, shift: u32, stats: &mut FxStats) -> Self {
        match self.checked_shl(shift) {
            Some(v) if (v >> shift) == self => v,
            _ => {
                stats.overflow_count += 1;
                if self >= 0 {
                    i64::MAX
                } else {
                    i64::MIN
                }
            }
        }
    }
    #[inline(always)]
    fn to_i128(self) -> i128 {
        self as i128
    }
    #[inline(always)]
    fn from_i128_sat(v: i128, stats: &mut FxStats) -> Self {
        if v > i64::MAX as i128 {
            stats.overflow_count += 1;
            i64::MAX
        } else if v < i64::MIN as i128 {
            stats.overflow_count += 1;
            i64::MIN
        } else {
            v as i64
        }
    }
    fn abs_f64(self) -> f64 {
        (self as f64).abs()
    }
}

impl FxMantissa for i128 {
    const BITS: u32 = 128;
    #[inline(always)]
    fn zero() -> Self {
        0
    }
    #[inline(always)]
    fn sat_add(self, rhs: Self, stats: &mut FxStats) -> Self {
        match self.checked_add(rhs) {
            Some(v) => v,
            None => {
                stats.overflow_count += 1;
                if self > 0 {
                    i128::MAX
                } else {
                    i128::MIN
                }
            }
        }
    }
    #[inline(always)]
    fn sat_sub(self, rhs: Self, stats: &mut FxStats) -> Self {
        match self.checked_sub(rhs) {
            Some(v) => v,
            None => {
                stats.overflow_count += 1;
                if self > 0 {
                    i128::MAX
                } else {
                    i128::MIN
                }
            }
        }
    }
    #[inline(always)]
    fn neg(self) -> Self {
        self.wrapping_neg()
    }
    #[inline(always)]
    fn mul_tw(self, tw: i64, shift: u32, stats: &mut FxStats) -> Self {
        // |tw| < 2^42 and shift < 64: split self into 64-bit limbs, the
        // 192-bit product is (hi << 64) + lo with both limbs in range.
        debug_assert!(shift > 0 && shift < 64);
        let neg = (self < 0) ^ (tw < 0);
        let a = self.unsigned_abs();
        let t = tw.unsigned_abs() as u128;
        let lo = (a & u64::MAX as u128) * t;
        let hi = (a >> 64) * t;
        // lo + half cannot carry (lo < 2^106, half < 2^63).
        let lo2 = lo + (1u128 << (shift - 1));
        if (hi >> (64 + shift)) != 0 {
            stats.overflow_count += 1;
            return if neg { i128::MIN } else { i128::MAX };
        }
        let (r, of) = (hi << (64 - shift)).overflowing_add(lo2 >> shift);
        if of || r > i128::MAX as u128 {
            stats.overflow_count += 1;
            return if neg { i128::MIN } else { i128::MAX };
        }
        let v = r as i128;
        if neg {
            -v
        } else {
            v
        }
    }
    #[inline(always)]
    fn mul_shift(self, rhs: Self, shift: u32, stats: &mut FxStats) -> Self {
        // Full 256-bit product via limb decomposition, then rounded shift.
        let neg = (self < 0) ^ (rhs < 0);
        let a = self.unsigned_abs();
        let b = rhs.unsigned_abs();
        let (a_hi, a_lo) = (a >> 64, a & u64::MAX as u128);
        let (b_hi, b_lo) = (b >> 64, b & u64::MAX as u128);
        let ll = a_lo * b_lo;
        let lh = a_lo * b_hi;
        let hl = a_hi * b_lo;
        let hh = a_hi * b_hi;
        // 256-bit value = hh<<128 + (lh+hl)<<64 + ll
        let mid = lh as u128;
        let (mid, c0) = mid.overflowing_add(hl);
        let mut p_lo = ll;
        let mut p_hi = hh + ((c0 as u128) << 64);
        let (new_lo, c1) = p_lo.overflowing_add(mid << 64);
        p_lo = new_lo;
        p_hi += (mid >> 64) + c1 as u128;
        // Round at `shift` (shift < 128 in practice).
        let half_pos = shift - 1;
        let half_lo = if half_pos < 128 { 1u128 << half_pos } else { 0 };
        let (new_lo, c2) = p_lo.overflowing_add(half_lo);
        p_lo = new_lo;
        p_hi += c2 as u128;
        let shifted = if shift < 128 {
            (p_lo >> shift) | (p_hi << (128 - shift))
        } else {
            p_hi >> (shift - 128)
        };
        let hi_rem = if shift < 128 { p_hi >> shift } else { 0 };
        if hi_rem != 0 || shifted > i128::MAX as u128 {
            stats.overflow_count += 1;
            return if neg { i128::MIN } else { i128::MAX };
        }
        let v = shifted as i128;
        if neg {
            -v
        } else {
            v
        }
    }
    #[inline(always)]
    fn round_shr(self, shift: u32) -> Self {
        shr_round_i128(self, shift)
    }
    #[inline(always)]
    fn shl_exact(self, shift: u32, stats: &mut FxStats) -> Self {
        match self.checked_shl(shift) {
            Some(v) if (v >> shift) == self => v,
            _ => {
                stats.overflow_count += 1;
                if self >= 0 {
                    i128::MAX
                } else {
                    i128::MIN
                }
            }
        }
    }
    #[inline(always)]
    fn to_i128(self) -> i128 {
        self
    }
    #[inline(always)]
    fn from_i128_sat(v: i128, _stats: &mut FxStats) -> Self {
        v
    }
    fn abs_f64(self) -> f64 {
        (self as f64).abs()
    }
}

/// A complex fixed-point sample on the engine datapath.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cfx<M: FxMantissa> {
    pub re: M,
    pub im: M,
}

impl<M: FxMantissa> Cfx<M> {
    pub fn zero() -> Self {
        Self {
            re: M::zero(),
            im: M::zero(),
        }
    }

    #[inline(always)]
    pub fn add(self, rhs: Self, stats: &mut FxStats) -> Self {
        Self {
            re: self.re.sat_add(rhs.re, stats),
            im: self.im.sat_add(rhs.im, stats),
        }
    }

    #[inline(always)]
    pub fn sub(self, rhs: Self, stats: &mut FxStats) -> Self {
        Self {
            re: self.re.sat_sub(rhs.re, stats),
            im: self.im.sat_sub(rhs.im, stats),
        }
    }

    pub fn conj(self) -> Self {
        Self {
            re: self.re,
            im: self.im.neg(),
        }
    }

    /// Multiply by a twiddle `(tw_re + i tw_im) / 2^shift`.
    #[inline(always)]
    pub fn mul_twiddle(self, tw_re: i64, tw_im: i64, shift: u32, stats: &mut FxStats) -> Self {
        let rr = self.re.mul_tw(tw_re, shift, stats);
        let ii = self.im.mul_tw(tw_im, shift, stats);
        let ri = self.re.mul_tw(tw_im, shift, stats);
        let ir = self.im.mul_tw(tw_re, shift, stats);
        Self {
            re: rr.sat_sub(ii, stats),
            im: ri.sat_add(ir, stats),
        }
    }

    /// Full complex product with both operands on the datapath, shifted.
    #[inline(always)]
    pub fn mul_full(self, rhs: Self, shift: u32, stats: &mut FxStats) -> Self {
        let rr = self.re.mul_shift(rhs.re, shift, stats);
        let ii = self.im.mul_shift(rhs.im, shift, stats);
        let ri = self.re.mul_shift(rhs.im, shift, stats);
        let ir = self.im.mul_shift(rhs.re, shift, stats);
        Self {
            re: rr.sat_sub(ii, stats),
            im: ri.sat_add(ir, stats),
        }
    }

    pub fn abs2_f64(self) -> f64 {
        let r = self.re.abs_f64();
        let i = self.im.abs_f64();
        r * r + i * i
    }
}
