//! Fraction-bit sweep: measure the negacyclic product's approximation noise
//! against the exact integer product as the forward fraction width varies.

use super::config::{FracSplit, PffteConfig};
use super::negacyclic_mul_fft;
use crate::torus::poly::{poly_mul_exact, ModPoly};
use crate::torus::word::TorusWord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepRow {
    pub frac_bits: u32,
    pub n_out: i64,
    pub noise_l2: f64,
    pub noise_linf: f64,
    pub overflow_count: u64,
}

/// Split derived from a single frac knob, keeping the default split's
/// relative spacing (bk = f + 3, ifft = f - 9).
pub fn split_for(frac_bits: u32) -> FracSplit {
    FracSplit {
        frac_bk: frac_bits + 3,
        frac_fft: frac_bits,
        frac_ifft: frac_bits.saturating_sub(9).max(6),
    }
}

/// One sweep row: digit-scale by full-torus products at the given fraction
/// width, errors measured against the exact product.
pub fn sweep_row(frac_bits: u32, poly_n: usize, trials: u32, seed: u64) -> SweepRow {
    let mut cfg = PffteConfig::ideal(64);
    cfg.frac = split_for(frac_bits);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut l2 = 0f64;
    let mut linf = 0f64;
    let mut overflow = 0u64;
    for _ in 0..trials {
        let a = ModPoly::<u64>::from_coeffs(
            (0..poly_n)
                .map(|_| (rng.gen_range(-256i64..256) as u64))
                .collect(),
        );
        let b = ModPoly::<u64>::from_coeffs((0..poly_n).map(|_| rng.gen()).collect());
        let (got, stats) = negacyclic_mul_fft(&a, &b, &cfg).expect("supported size");
        overflow += stats.overflow_count;
        let want = poly_mul_exact(&a, &b).unwrap();
        for (g, w) in got.coeffs().iter().zip(want.coeffs()) {
            let d = g.wrapping_sub(*w).to_signed_i128() as f64;
            l2 += d * d;
            linf = linf.max(d.abs());
        }
    }
    SweepRow {
        frac_bits,
        n_out: -1,
        noise_l2: (l2 / (trials as f64 * poly_n as f64)).sqrt(),
        noise_linf: linf,
        overflow_count: overflow,
    }
}

pub fn run_sweep(frac_bits: &[u32], poly_n: usize, trials: u32, seed: u64) -> Vec<SweepRow> {
    frac_bits
        .iter()
        .map(|&f| sweep_row(f, poly_n, trials, seed))
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("frac_bits,n_out,noise_l2,noise_linf,overflow_count\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.frac_bits, r.n_out, r.noise_l2, r.noise_linf, r.overflow_count
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_non_increasing_in_frac_bits() {
        let rows = run_sweep(&[10, 14, 18, 22, 26], 1024, 2, 7);
        for pair in rows.windows(2) {
            assert!(
                pair[1].noise_l2 <= pair[0].noise_l2 * 1.05,
                "l2 noise must not grow with fraction bits: {} -> {}",
                pair[0].noise_l2,
                pair[1].noise_l2
            );
        }
    }
}
