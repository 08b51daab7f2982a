//! Discretized message encoding on the torus.
//!
//! Messages `m` in `Z_B` sit at equally spaced slots. With `half_torus` set
//! (the usual case) the slots are `m * q / (2B)` so only the first half of
//! the torus carries messages; full-torus encoding at `m * q / B` is what the
//! full-domain bootstrap consumes.

use super::word::TorusWord;
use super::TorusError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MessageEncoding {
    pub base: u64,
    pub half_torus: bool,
}

impl MessageEncoding {
    pub fn half(base: u64) -> Self {
        Self {
            base,
            half_torus: true,
        }
    }

    pub fn full(base: u64) -> Self {
        Self {
            base,
            half_torus: false,
        }
    }

    /// Number of slots around the whole torus: 2B for half encoding, B for
    /// full.
    fn slots(&self) -> u64 {
        if self.half_torus {
            2 * self.base
        } else {
            self.base
        }
    }

    pub fn encode<W: TorusWord>(&self, m: u64) -> Result<W, TorusError> {
        if m >= self.base {
            return Err(TorusError::MessageOutOfRange { m, base: self.base });
        }
        if self.slots() > (1u64 << (W::WIDTH.min(63) - 1)) {
            return Err(TorusError::BaseTooLarge {
                base: self.base,
                width: W::WIDTH,
            });
        }
        Ok(encode_fraction::<W>(m, self.slots()))
    }

    /// Nearest-slot decode; total on all inputs, ties break toward the
    /// smaller message.
    pub fn decode<W: TorusWord>(&self, t: W) -> u64 {
        let slots = self.slots();
        let mut best_m = 0u64;
        let mut best_d = u128::MAX;
        for m in 0..self.base {
            let slot = encode_fraction::<W>(m, slots).to_u128();
            let d = circular_distance::<W>(t.to_u128(), slot);
            if d < best_d {
                best_d = d;
                best_m = m;
            }
        }
        best_m
    }
}

/// `round(num * 2^w / den) mod 2^w` without overflowing 128-bit arithmetic.
pub fn encode_fraction<W: TorusWord>(num: u64, den: u64) -> W {
    // num/den in [0, 1); split 2^w = 2^(w-32) * 2^32 to stay inside u128
    // even at w = 128.
    let w = W::WIDTH;
    let num = num as u128;
    let den = den as u128;
    if w <= 64 {
        let scaled = (num << w) + den / 2;
        W::from_u128((scaled / den) & W::mask())
    } else {
        // q = 2^128: compute floor plus remainder propagation in two limbs.
        let hi = (num << 64) / den;
        let rem = (num << 64) % den;
        let lo = ((rem << 64) + den / 2) / den;
        W::from_u128(hi.wrapping_shl(64).wrapping_add(lo))
    }
}

fn circular_distance<W: TorusWord>(a: u128, b: u128) -> u128 {
    let d = a.wrapping_sub(b) & W::mask();
    let d2 = b.wrapping_sub(a) & W::mask();
    d.min(d2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_pinned_values() {
        let enc = MessageEncoding::half(16);
        assert_eq!(enc.encode::<u32>(0).unwrap(), 0);
        let enc4 = MessageEncoding::half(4);
        assert_eq!(enc4.encode::<u32>(1).unwrap(), 536_870_912); // 2^32 / 8
    }

    #[test]
    fn out_of_range_and_bad_base() {
        let enc = MessageEncoding::half(16);
        assert!(matches!(
            enc.encode::<u32>(16),
            Err(TorusError::MessageOutOfRange { .. })
        ));
        let enc_big = MessageEncoding::half(1u64 << 62);
        assert!(matches!(
            enc_big.encode::<u32>(0),
            Err(TorusError::BaseTooLarge { .. })
        ));
    }

    #[test]
    fn roundtrip_exhaustive_all_widths() {
        for base in [2u64, 4, 16, 256] {
            for half in [true, false] {
                let enc = MessageEncoding { base, half_torus: half };
                for m in 0..base {
                    assert_eq!(enc.decode::<u32>(enc.encode::<u32>(m).unwrap()), m);
                    assert_eq!(enc.decode::<u64>(enc.encode::<u64>(m).unwrap()), m);
                    assert_eq!(enc.decode::<u128>(enc.encode::<u128>(m).unwrap()), m);
                }
            }
        }
    }

    #[test]
    fn decode_tolerates_noise_below_quarter_slot() {
        let enc = MessageEncoding::half(16);
        let eps = (1u64 << 58) - 1; // just under 2^64/(2 * 2B)
        for m in 0..16 {
            let t = enc.encode::<u64>(m).unwrap();
            assert_eq!(enc.decode::<u64>(t.wrapping_add(eps)), m);
            assert_eq!(enc.decode::<u64>(t.wrapping_sub(eps)), m);
        }
    }

    #[test]
    fn encode_full_width_128() {
        let enc = MessageEncoding::half(16);
        let v = enc.encode::<u128>(9).unwrap();
        assert_eq!(enc.decode::<u128>(v), 9);
        // 9/32 of 2^128, exact since 32 divides 2^128.
        assert_eq!(v, (9u128 << 123));
    }
}
