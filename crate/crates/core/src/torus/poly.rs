//! Negacyclic polynomials mod `X^N + 1` over `Z_{2^w}`.
//!
//! `poly_mul_schoolbook` is the O(N^2) reference used as the testing oracle.
//! `poly_mul_exact` computes the identical bit-exact product through a
//! Karatsuba split (wrapping arithmetic mod 2^w is a ring, so any correct
//! convolution gives the same wrapped coefficients) and is what the exact
//! polynomial backend uses at production sizes.

use super::word::TorusWord;
use super::TorusError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPoly<W: TorusWord> {
    coeffs: Vec<W>,
}

impl<W: TorusWord> ModPoly<W> {
    pub fn zero(n: usize) -> Self {
        assert!(n.is_power_of_two(), "degree bound must be a power of two");
        Self {
            coeffs: vec![W::ZERO; n],
        }
    }

    pub fn from_coeffs(coeffs: Vec<W>) -> Self {
        assert!(coeffs.len().is_power_of_two());
        Self { coeffs }
    }

    /// Constant polynomial `c`.
    pub fn constant(c: W, n: usize) -> Self {
        let mut p = Self::zero(n);
        p.coeffs[0] = c;
        p
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[W] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [W] {
        &mut self.coeffs
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        debug_assert_eq!(self.len(), rhs.len());
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a = a.wrapping_add(*b);
        }
    }

    pub fn sub_assign(&mut self, rhs: &Self) {
        debug_assert_eq!(self.len(), rhs.len());
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a = a.wrapping_sub(*b);
        }
    }

    pub fn neg_assign(&mut self) {
        for a in self.coeffs.iter_mut() {
            *a = a.wrapping_neg();
        }
    }

    pub fn scalar_mul_assign(&mut self, s: W) {
        for a in self.coeffs.iter_mut() {
            *a = a.wrapping_mul(s);
        }
    }

    /// Multiply-accumulate by a scalar: `self += p * s`.
    pub fn scalar_mac_assign(&mut self, p: &Self, s: W) {
        debug_assert_eq!(self.len(), p.len());
        for (a, b) in self.coeffs.iter_mut().zip(p.coeffs.iter()) {
            *a = a.wrapping_add(b.wrapping_mul(s));
        }
    }
}

/// Exact negacyclic product, coefficient-by-coefficient double loop.
pub fn poly_mul_schoolbook<W: TorusWord>(
    a: &ModPoly<W>,
    b: &ModPoly<W>,
) -> Result<ModPoly<W>, TorusError> {
    if a.len() != b.len() {
        return Err(TorusError::ShapeMismatch(format!(
            "poly lengths {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    let mut out: ModPoly<W> = ModPoly::zero(n);
    for i in 0..n {
        let ai = a.coeffs[i];
        for j in 0..n {
            let prod = ai.wrapping_mul(b.coeffs[j]);
            let k = i + j;
            if k < n {
                out.coeffs[k] = out.coeffs[k].wrapping_add(prod);
            } else {
                out.coeffs[k - n] = out.coeffs[k - n].wrapping_sub(prod);
            }
        }
    }
    Ok(out)
}

/// Bit-exact negacyclic product via Karatsuba over the wrapping ring.
/// Same result as `poly_mul_schoolbook` (a unit test keeps the two in lock
/// step); much faster at production N.
pub fn poly_mul_exact<W: TorusWord>(a: &ModPoly<W>, b: &ModPoly<W>) -> Result<ModPoly<W>, TorusError> {
    if a.len() != b.len() {
        return Err(TorusError::ShapeMismatch(format!(
            "poly lengths {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    let mut full = vec![W::ZERO; 2 * n];
    let mut scratch = vec![W::ZERO; 4 * n];
    karatsuba(&a.coeffs, &b.coeffs, &mut full, &mut scratch);
    let mut out = ModPoly::zero(n);
    out.coeffs[..n].copy_from_slice(&full[..n]);
    for k in n..2 * n - 1 {
        out.coeffs[k - n] = out.coeffs[k - n].wrapping_sub(full[k]);
    }
    Ok(out)
}

const KARATSUBA_THRESHOLD: usize = 32;

/// Linear convolution of equal-length slices into `out[..2n]`.
/// `scratch` must hold at least 4n words; levels share it front-to-back.
fn karatsuba<W: TorusWord>(a: &[W], b: &[W], out: &mut [W], scratch: &mut [W]) {
    let n = a.len();
    out[..2 * n].fill(W::ZERO);
    if n <= KARATSUBA_THRESHOLD {
        for i in 0..n {
            let ai = a[i];
            for j in 0..n {
                out[i + j] = out[i + j].wrapping_add(ai.wrapping_mul(b[j]));
            }
        }
        return;
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);

    let (sums, rest) = scratch.split_at_mut(2 * h);
    let (z1, rest) = rest.split_at_mut(2 * h);
    for i in 0..h {
        sums[i] = a0[i].wrapping_add(a1[i]);
        sums[h + i] = b0[i].wrapping_add(b1[i]);
    }
    karatsuba(a0, b0, &mut out[..2 * h], rest);
    karatsuba(a1, b1, &mut out[2 * h..4 * h], rest);
    let (sum_a, sum_b) = sums.split_at(h);
    karatsuba(sum_a, sum_b, z1, rest);

    // out[h..3h) += (a0+a1)(b0+b1) - z0 - z2. Two passes: the adds into
    // out[h..] alias the z0/z2 reads, so fold the subtraction into z1 first.
    for i in 0..2 * h - 1 {
        z1[i] = z1[i].wrapping_sub(out[i]).wrapping_sub(out[2 * h + i]);
    }
    for i in 0..2 * h - 1 {
        out[h + i] = out[h + i].wrapping_add(z1[i]);
    }
}

/// `X^e * p mod X^N + 1` with `e` taken mod 2N; wrap flips sign.
pub fn monomial_rotate<W: TorusWord>(p: &ModPoly<W>, e: i64) -> ModPoly<W> {
    let n = p.len();
    let two_n = 2 * n as i64;
    let e = e.rem_euclid(two_n) as usize;
    let mut out = ModPoly::zero(n);
    for (i, &c) in p.coeffs().iter().enumerate() {
        let k = i + e;
        if k < n {
            out.coeffs[k] = c;
        } else if k < 2 * n {
            out.coeffs[k - n] = c.wrapping_neg();
        } else {
            out.coeffs[k - 2 * n] = c;
        }
    }
    out
}
