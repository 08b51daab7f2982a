//! 384-bit two's-complement integers: the exact value domain of the analog
//! engine model. Six stages of twiddle products at 34 guard bits plus a
//! 128-bit input and the 64-point gain stay well inside 384 bits, so the
//! analog path never rounds — which is exactly what makes bit-slice
//! recombination linear, hence exact.

use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct I384 {
    limbs: [u64; 6],
}

impl I384 {
    pub const ZERO: I384 = I384 { limbs: [0; 6] };

    pub fn from_i128(v: i128) -> Self {
        let ext = if v < 0 { u64::MAX } else { 0 };
        let u = v as u128;
        I384 {
            limbs: [u as u64, (u >> 64) as u64, ext, ext, ext, ext],
        }
    }

    pub fn from_u128(v: u128) -> Self {
        I384 {
            limbs: [v as u64, (v >> 64) as u64, 0, 0, 0, 0],
        }
    }

    pub fn is_negative(&self) -> bool {
        (self.limbs[5] >> 63) == 1
    }

    pub fn wrapping_add(self, rhs: Self) -> Self {
        let mut out = [0u64; 6];
        let mut carry = 0u64;
        for i in 0..6 {
            let (s1, c1) = self.limbs[i].overflowing_add(rhs.limbs[i]);
            let (s2, c2) = s1.overflowing_add(carry);
            out[i] = s2;
            carry = (c1 as u64) + (c2 as u64);
        }
        I384 { limbs: out }
    }

    pub fn wrapping_neg(self) -> Self {
        let mut out = [0u64; 6];
        let mut carry = 1u64;
        for i in 0..6 {
            let (s, c) = (!self.limbs[i]).overflowing_add(carry);
            out[i] = s;
            carry = c as u64;
        }
        I384 { limbs: out }
    }

    pub fn wrapping_sub(self, rhs: Self) -> Self {
        self.wrapping_add(rhs.wrapping_neg())
    }

    fn magnitude(self) -> ([u64; 6], bool) {
        if self.is_negative() {
            (self.wrapping_neg().limbs, true)
        } else {
            (self.limbs, false)
        }
    }

    fn from_magnitude(m: [u64; 6], neg: bool) -> Self {
        let v = I384 { limbs: m };
        if neg {
            v.wrapping_neg()
        } else {
            v
        }
    }

    /// Exact multiply by a small signed constant; panics on overflow (the
    /// engine sizes its operands so this cannot happen).
    pub fn mul_i64(self, rhs: i64) -> Self {
        let (mag, neg_a) = self.magnitude();
        let neg = neg_a ^ (rhs < 0);
        let r = rhs.unsigned_abs() as u128;
        let mut out = [0u64; 6];
        let mut carry: u128 = 0;
        for i in 0..6 {
            let prod = mag[i] as u128 * r + carry;
            out[i] = prod as u64;
            carry = prod >> 64;
        }
        assert!(carry == 0 && (out[5] >> 63) == 0, "I384 multiply overflow");
        Self::from_magnitude(out, neg)
    }

    /// Exact left shift; panics if bits would be lost.
    pub fn shl_exact(self, n: u32) -> Self {
        let (mag, neg) = self.magnitude();
        let mut out = [0u64; 6];
        let limb_shift = (n / 64) as usize;
        let bit_shift = n % 64;
        for i in (0..6).rev() {
            if i < limb_shift {
                continue;
            }
            let src = i - limb_shift;
            let mut v = mag[src] << bit_shift;
            if bit_shift > 0 && src > 0 {
                v |= mag[src - 1] >> (64 - bit_shift);
            }
            out[i] = v;
        }
        // Anything shifted beyond the top is an overflow: the reverse shift
        // must recover the magnitude.
        assert!(
            (out[5] >> 63) == 0 && I384 { limbs: out }.shr_floor(n).limbs == mag,
            "I384 shift overflow"
        );
        Self::from_magnitude(out, neg)
    }

    fn shr_floor(self, n: u32) -> Self {
        let mut out = [0u64; 6];
        let limb_shift = (n / 64) as usize;
        let bit_shift = n % 64;
        for i in 0..6 {
            let src = i + limb_shift;
            if src >= 6 {
                break;
            }
            let mut v = self.limbs[src] >> bit_shift;
            if bit_shift > 0 && src + 1 < 6 {
                v |= self.limbs[src + 1] << (64 - bit_shift);
            }
            out[i] = v;
        }
        I384 { limbs: out }
    }

    /// Arithmetic shift right with round half away from zero.
    pub fn round_shr(self, n: u32) -> Self {
        if n == 0 {
            return self;
        }
        let (mag, neg) = self.magnitude();
        let mut m = I384 { limbs: mag };
        // add half
        let mut half = I384::ZERO;
        let pos = (n - 1) as usize;
        half.limbs[pos / 64] = 1u64 << (pos % 64);
        m = m.wrapping_add(half);
        let shifted = m.shr_floor(n);
        Self::from_magnitude(shifted.limbs, neg)
    }

    pub fn cmp_magnitude(&self, other: &Self) -> Ordering {
        let (a, _) = self.magnitude();
        let (b, _) = other.magnitude();
        for i in (0..6).rev() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn to_f64(self) -> f64 {
        let (mag, neg) = self.magnitude();
        let mut v = 0.0f64;
        for i in (0..6).rev() {
            v = v * 2f64.powi(64) + mag[i] as f64;
        }
        if neg {
            -v
        } else {
            v
        }
    }

    /// Saturating conversion to i128 after a rounded right shift.
    pub fn round_shr_to_i128(self, n: u32) -> (i128, bool) {
        let r = self.round_shr(n);
        let (mag, neg) = r.magnitude();
        if mag[2] != 0 || mag[3] != 0 || mag[4] != 0 || mag[5] != 0 || (mag[1] >> 63) != 0 {
            return (if neg { i128::MIN } else { i128::MAX }, true);
        }
        let v = ((mag[1] as u128) << 64 | mag[0] as u128) as i128;
        (if neg { -v } else { v }, false)
    }
}

/// Exact complex sample in the analog domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct WideC {
    pub re: I384,
    pub im: I384,
}

impl WideC {
    pub const ZERO: WideC = WideC {
        re: I384::ZERO,
        im: I384::ZERO,
    };

    pub fn from_re_u128(v: u128) -> Self {
        WideC {
            re: I384::from_u128(v),
            im: I384::ZERO,
        }
    }

    pub fn add(self, r: Self) -> Self {
        WideC {
            re: self.re.wrapping_add(r.re),
            im: self.im.wrapping_add(r.im),
        }
    }

    pub fn sub(self, r: Self) -> Self {
        WideC {
            re: self.re.wrapping_sub(r.re),
            im: self.im.wrapping_sub(r.im),
        }
    }

    pub fn neg(self) -> Self {
        WideC {
            re: self.re.wrapping_neg(),
            im: self.im.wrapping_neg(),
        }
    }

    pub fn conj(self) -> Self {
        WideC {
            re: self.re,
            im: self.im.wrapping_neg(),
        }
    }

    pub fn mul_twiddle(self, tw_re: i64, tw_im: i64) -> Self {
        WideC {
            re: self.re.mul_i64(tw_re).wrapping_sub(self.im.mul_i64(tw_im)),
            im: self.re.mul_i64(tw_im).wrapping_add(self.im.mul_i64(tw_re)),
        }
    }

    pub fn shl_exact(self, n: u32) -> Self {
        WideC {
            re: self.re.shl_exact(n),
            im: self.im.shl_exact(n),
        }
    }

    pub fn mul_i64(self, s: i64) -> Self {
        WideC {
            re: self.re.mul_i64(s),
            im: self.im.mul_i64(s),
        }
    }

    pub fn max_abs_f64(self) -> f64 {
        self.re.to_f64().abs().max(self.im.to_f64().abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_neg_roundtrip() {
        let a = I384::from_i128(-12345678901234567890i128);
        let b = I384::from_i128(98765432109876543210i128);
        let s = a.wrapping_add(b);
        assert_eq!(
            s,
            I384::from_i128(98765432109876543210i128 - 12345678901234567890i128)
        );
        assert_eq!(a.wrapping_neg(), I384::from_i128(12345678901234567890i128));
    }

    #[test]
    fn mul_and_shift_match_i128() {
        let a = I384::from_i128(-(1i128 << 100) - 987654321);
        let m = a.mul_i64(123456789);
        let expect_f = (-(2f64.powi(100)) - 987654321.0) * 123456789.0;
        assert!((m.to_f64() - expect_f).abs() / expect_f.abs() < 1e-12);

        let b = I384::from_i128(1001);
        assert_eq!(b.round_shr(1), I384::from_i128(501));
        let c = I384::from_i128(-1001);
        assert_eq!(c.round_shr(1), I384::from_i128(-501));
    }

    #[test]
    fn big_products_stay_exact() {
        // (2^120 * 3) * (2^33) via shifts equals mul by 2^33
        let a = I384::from_i128(3i128 << 120);
        let left = a.shl_exact(33);
        let right = a.mul_i64(1i64 << 33);
        assert_eq!(left, right);
        let (v, sat) = I384::from_i128(42i128 << 90).round_shr_to_i128(90);
        assert!(!sat);
        assert_eq!(v, 42);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn shift_overflow_panics() {
        let a = I384::from_i128(1i128 << 100);
        let _ = a.shl_exact(300);
    }
}
