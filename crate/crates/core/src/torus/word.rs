//! The torus word: an unsigned integer of width 32, 64 or 128 bits with
//! wrap-around arithmetic, standing for a real torus value `v / 2^w`.
//!
//! The 128-bit flavour is `u128`; on 64-bit hosts the compiler lowers its
//! multiplication to exact two-limb arithmetic, which is precisely the
//! truncating wide multiply we want for arithmetic mod `2^128`.

use std::fmt::Debug;
use std::hash::Hash;

pub trait TorusWord:
    Copy + Clone + Debug + Default + Eq + PartialEq + Ord + Hash + Send + Sync + 'static
{
    const WIDTH: u32;
    const ZERO: Self;
    const ONE: Self;

    fn wrapping_add(self, rhs: Self) -> Self;
    fn wrapping_sub(self, rhs: Self) -> Self;
    fn wrapping_mul(self, rhs: Self) -> Self;
    fn wrapping_neg(self) -> Self;
    fn wrapping_shl(self, n: u32) -> Self;
    fn wrapping_shr(self, n: u32) -> Self;

    fn from_u128(v: u128) -> Self;
    fn to_u128(self) -> u128;

    /// Centered signed representative in `[-2^(w-1), 2^(w-1))`.
    fn to_signed_i128(self) -> i128;
    fn from_i128(v: i128) -> Self {
        Self::from_u128(v as u128)
    }

    /// `round(self / 2^(w - bits))` — the value rounded to its top `bits`
    /// bits, returned as an integer in `[0, 2^bits)`. Round half up
    /// (half away from zero on the unsigned representative).
    fn round_to_top_bits(self, bits: u32) -> u64 {
        debug_assert!(bits <= 63);
        let w = Self::WIDTH;
        let v = self.to_u128();
        if w <= bits {
            return (v as u64) << (bits - w);
        }
        let shift = w - bits;
        let half = 1u128 << (shift - 1);
        let low = v & ((half << 1) - 1);
        let rounded = (v >> shift) + u128::from(low >= half);
        (rounded as u64) & ((1u64 << bits) - 1)
    }

    /// Interpret an f64 in torus units (fraction of 1) and scale to a word,
    /// rounding to the nearest integer and wrapping. Used by noise sampling.
    fn from_torus_f64(x: f64) -> Self {
        let frac = x - x.floor();
        let scaled = frac * 2f64.powi(Self::WIDTH as i32);
        Self::from_u128((scaled.round() as i128 as u128) & Self::mask())
    }

    fn mask() -> u128 {
        if Self::WIDTH == 128 {
            u128::MAX
        } else {
            (1u128 << Self::WIDTH) - 1
        }
    }
}

macro_rules! impl_torus_word {
    ($ty:ty, $width:expr) => {
        impl TorusWord for $ty {
            const WIDTH: u32 = $width;
            const ZERO: Self = 0;
            const ONE: Self = 1;

            #[inline(always)]
            fn wrapping_add(self, rhs: Self) -> Self {
                <$ty>::wrapping_add(self, rhs)
            }
            #[inline(always)]
            fn wrapping_sub(self, rhs: Self) -> Self {
                <$ty>::wrapping_sub(self, rhs)
            }
            #[inline(always)]
            fn wrapping_mul(self, rhs: Self) -> Self {
                <$ty>::wrapping_mul(self, rhs)
            }
            #[inline(always)]
            fn wrapping_neg(self) -> Self {
                <$ty>::wrapping_neg(self)
            }
            #[inline(always)]
            fn wrapping_shl(self, n: u32) -> Self {
                <$ty>::wrapping_shl(self, n)
            }
            #[inline(always)]
            fn wrapping_shr(self, n: u32) -> Self {
                <$ty>::wrapping_shr(self, n)
            }
            #[inline(always)]
            fn from_u128(v: u128) -> Self {
                v as $ty
            }
            #[inline(always)]
            fn to_u128(self) -> u128 {
                self as u128
            }
            #[inline(always)]
            fn to_signed_i128(self) -> i128 {
                // Sign-extend from the word width.
                (self as i128) << (128 - $width) >> (128 - $width)
            }
        }
    };
}

impl_torus_word!(u32, 32);
impl_torus_word!(u64, 64);
impl_torus_word!(u128, 128);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_representative_is_centered() {
        assert_eq!(0x8000_0000u32.to_signed_i128(), -(1i128 << 31));
        assert_eq!(0x7fff_ffffu32.to_signed_i128(), (1i128 << 31) - 1);
        assert_eq!(u64::MAX.to_signed_i128(), -1);
        assert_eq!(u128::MAX.to_signed_i128(), -1);
    }

    #[test]
    fn round_to_top_bits_rounds_half_up() {
        // 2N rescale with N = 8: top 4 bits of a 32-bit word.
        let v = 0x1800_0000u32; // exactly 1.5 sixteenths
        assert_eq!(v.round_to_top_bits(4), 2);
        let v = 0x17ff_ffffu32;
        assert_eq!(v.round_to_top_bits(4), 1);
        // Wrap: values just under 2^w round to 0 mod 2^bits.
        assert_eq!(u32::MAX.round_to_top_bits(4), 0);
        assert_eq!(u128::MAX.round_to_top_bits(12), 0);
    }

    #[test]
    fn torus_f64_roundtrip_wraps() {
        let v = u64::from_torus_f64(-0.25);
        assert_eq!(v, 0xC000_0000_0000_0000);
        assert_eq!(u32::from_torus_f64(0.5), 0x8000_0000);
    }
}
