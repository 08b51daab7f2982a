//! Binary polynomial serialization.
//!
//! Layout: a 16-byte header — magic `OFHEPOLY`, width as LE u16, N as LE
//! u32, two reserved zero bytes — followed by the coefficients as
//! little-endian fixed-width words.

use super::poly::ModPoly;
use super::word::TorusWord;
use super::TorusError;
use std::io::{Read, Write};

pub const POLY_MAGIC: &[u8; 8] = b"OFHEPOLY";

pub fn write_poly<W: TorusWord, S: Write>(w: &mut S, p: &ModPoly<W>) -> std::io::Result<()> {
    w.write_all(POLY_MAGIC)?;
    w.write_all(&(W::WIDTH as u16).to_le_bytes())?;
    w.write_all(&(p.len() as u32).to_le_bytes())?;
    w.write_all(&[0u8; 2])?;
    let bytes = (W::WIDTH / 8) as usize;
    for c in p.coeffs() {
        w.write_all(&c.to_u128().to_le_bytes()[..bytes])?;
    }
    Ok(())
}

pub fn read_poly<W: TorusWord, S: Read>(r: &mut S) -> Result<ModPoly<W>, TorusError> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)
        .map_err(|e| TorusError::BadFormat(e.to_string()))?;
    if &header[..8] != POLY_MAGIC {
        return Err(TorusError::BadFormat("bad poly magic".into()));
    }
    let width = u16::from_le_bytes([header[8], header[9]]) as u32;
    if width != W::WIDTH {
        return Err(TorusError::BadFormat(format!(
            "width mismatch: file has {width}, expected {}",
            W::WIDTH
        )));
    }
    let n = u32::from_le_bytes([header[10], header[11], header[12], header[13]]) as usize;
    if !n.is_power_of_two() || n > (1 << 24) {
        return Err(TorusError::BadFormat(format!("bad poly size {n}")));
    }
    let bytes = (width / 8) as usize;
    let mut buf = vec![0u8; n * bytes];
    r.read_exact(&mut buf)
        .map_err(|e| TorusError::BadFormat(e.to_string()))?;
    let coeffs = buf
        .chunks_exact(bytes)
        .map(|chunk| {
            let mut le = [0u8; 16];
            le[..bytes].copy_from_slice(chunk);
            W::from_u128(u128::from_le_bytes(le))
        })
        .collect();
    Ok(ModPoly::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn poly_roundtrip_all_widths() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        macro_rules! check {
            ($ty:ty) => {
                let p = ModPoly::<$ty>::from_coeffs(
                    (0..64).map(|_| rng.gen::<u128>() as $ty).collect(),
                );
                let mut buf = Vec::new();
                write_poly(&mut buf, &p).unwrap();
                assert_eq!(buf.len(), 16 + 64 * (<$ty>::BITS as usize / 8));
                let q: ModPoly<$ty> = read_poly(&mut buf.as_slice()).unwrap();
                assert_eq!(p, q);
            };
        }
        check!(u32);
        check!(u64);
        check!(u128);
    }

    #[test]
    fn width_mismatch_rejected() {
        let p = ModPoly::<u32>::zero(8);
        let mut buf = Vec::new();
        write_poly(&mut buf, &p).unwrap();
        assert!(read_poly::<u64, _>(&mut buf.as_slice()).is_err());
    }
}
