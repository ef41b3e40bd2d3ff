use super::ext::{ExtField, FieldElement, MAX_DEGREE};
use super::packed::{GridWalker, Packed, PackedField};
use super::prime::PrimeField;

/// Fields at or below this many elements get a square bitmap by default.
pub const DEFAULT_BITMAP_THRESHOLD: u64 = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// a^{(q-1)/2}, evaluated as N(a)^{(p-1)/2} with the norm taken as the
    /// resultant Res(m, a) of the modulus and a.
    Euler,
    /// One bit per element, set for the nonzero squares.
    Bitmap,
}

/// Bit `i` is set iff the element with index `i` is a nonzero square.
#[derive(Clone, Debug)]
pub struct SquareTable {
    bits: Vec<u64>,
}

impl SquareTable {
    pub fn build(packed: &PackedField, q: u64) -> Self {
        let mut bits = vec![0u64; q.div_ceil(64) as usize];
        // b and -b share a square; scanning all of F_q* is simpler than pairing
        let mut squares = GridWalker::new(packed, &[0, 0, 1]);
        squares.seek(packed, 1);
        for _ in 1..q {
            let i = packed.index(&squares.step(packed));
            bits[(i / 64) as usize] |= 1 << (i % 64);
        }
        SquareTable { bits }
    }

    #[inline(always)]
    pub fn is_square(&self, index: u64) -> bool {
        self.bits[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// The quadratic character χ of F_q with a selectable backend.
#[derive(Clone, Debug)]
pub struct QuadraticCharacter {
    packed: PackedField,
    q: u64,
    squares: Option<SquareTable>,
    base: PrimeField,
    /// Monic modulus, k + 1 coefficients.
    modulus: Packed9,
    /// Legendre symbols and inverses of F_p, for p up to [`SMALL_PRIME_TABLES`].
    legendre: Vec<i8>,
    inverse: Vec<u32>,
}

type Packed9 = [u64; MAX_DEGREE + 1];

const SMALL_PRIME_TABLES: u64 = 1 << 20;

impl QuadraticCharacter {
    /// Picks the bitmap when `q <= threshold`, the Euler criterion otherwise.
    /// Returns `None` when p is too large for the packed kernel.
    pub fn new(field: &ExtField, threshold: u64) -> Option<Self> {
        let backend = if field.q() <= threshold { Backend::Bitmap } else { Backend::Euler };
        Self::with_backend(field, backend)
    }

    pub fn with_backend(field: &ExtField, backend: Backend) -> Option<Self> {
        let packed = PackedField::new(field)?;
        let base = *field.base();
        let (legendre, inverse) = if field.p() <= SMALL_PRIME_TABLES {
            (
                (0..field.p()).map(|a| base.legendre(a)).collect(),
                (0..field.p()).map(|a| base.inv(a).unwrap_or(0) as u32).collect(),
            )
        } else {
            (Vec::new(), Vec::new())
        };
        let mut modulus = [0; MAX_DEGREE + 1];
        modulus[..=field.k()].copy_from_slice(field.modulus());
        let squares = match backend {
            Backend::Bitmap => Some(SquareTable::build(&packed, field.q())),
            Backend::Euler => None,
        };
        Some(QuadraticCharacter { packed, q: field.q(), squares, base, modulus, legendre, inverse })
    }

    pub fn backend(&self) -> Backend {
        if self.squares.is_some() {
            Backend::Bitmap
        } else {
            Backend::Euler
        }
    }

    pub fn packed(&self) -> &PackedField {
        &self.packed
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline(always)]
    pub fn of_packed(&self, a: &Packed) -> i8 {
        let k = self.packed.k();
        if a[..k].iter().all(|&c| c == 0) {
            return 0;
        }
        match &self.squares {
            Some(table) => {
                if table.is_square(self.packed.index(a)) {
                    1
                } else {
                    -1
                }
            }
            None => self.legendre_of(self.norm(a)),
        }
    }

    #[inline(always)]
    fn legendre_of(&self, n: u64) -> i8 {
        if self.legendre.is_empty() {
            self.base.legendre(n)
        } else {
            self.legendre[n as usize]
        }
    }

    #[inline(always)]
    fn inverse_of(&self, n: u64) -> u64 {
        if self.inverse.is_empty() {
            self.base.inv(n).expect("nonzero leading coefficient")
        } else {
            self.inverse[n as usize] as u64
        }
    }

    /// N(a) = Π a(θ_i) over the roots of the monic modulus m, which is the
    /// resultant Res(m, a), computed by the Euclidean algorithm with
    /// Res(f, g) = (−1)^{deg f · deg g} · lc(g)^{deg f − deg r} · Res(g, r)
    /// for r = f mod g.
    pub fn norm(&self, a: &Packed) -> u64 {
        let pf = &self.packed;
        let p = pf.p();
        let k = pf.k();
        let mut f = self.modulus;
        let mut df = k;
        let mut g = [0u64; MAX_DEGREE + 1];
        g[..k].copy_from_slice(&a[..k]);
        let Some(mut dg) = (0..k).rev().find(|&i| g[i] != 0) else {
            return 0;
        };
        let mut res = 1u64;
        loop {
            if dg == 0 {
                return pf.reduce(res * self.base.pow(g[0], df as u64));
            }
            let neg_inv = p - self.inverse_of(g[dg]);
            for i in (dg..=df).rev() {
                if f[i] == 0 {
                    continue;
                }
                let q = pf.reduce(f[i] * neg_inv);
                for j in 0..=dg {
                    f[i - dg + j] = pf.reduce(f[i - dg + j] + q * g[j]);
                }
            }
            let Some(dr) = (0..dg).rev().find(|&i| f[i] != 0) else {
                return 0;
            };
            if (df * dg) % 2 == 1 && res != 0 {
                res = p - res;
            }
            res = pf.reduce(res * self.base.pow(g[dg], (df - dr) as u64));
            std::mem::swap(&mut f, &mut g);
            df = dg;
            dg = dr;
        }
    }

    pub fn of(&self, a: &FieldElement) -> i8 {
        let mut packed = [0u64; super::MAX_DEGREE];
        packed[..a.coeffs().len()].copy_from_slice(a.coeffs());
        self.of_packed(&packed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<ExtField> {
        let mut out = Vec::new();
        for p in [3u64, 5, 7, 11, 13, 31, 97, 9973] {
            for k in 1..=4 {
                if p.pow(k as u32) <= 10_000 {
                    out.push(ExtField::new(p, k).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn backends_agree_with_each_other_and_plain_euler() {
        for f in small_fields() {
            let bitmap = QuadraticCharacter::with_backend(&f, Backend::Bitmap).unwrap();
            let euler = QuadraticCharacter::with_backend(&f, Backend::Euler).unwrap();
            for a in f.elements() {
                let reference = f.quadratic_character(&a);
                assert_eq!(bitmap.of(&a), reference, "bitmap, q = {}", f.q());
                assert_eq!(euler.of(&a), reference, "euler, q = {}", f.q());
            }
        }
    }

    #[test]
    fn half_of_units_are_squares() {
        for f in small_fields() {
            let chi = QuadraticCharacter::with_backend(&f, Backend::Bitmap).unwrap();
            let plus = f.elements().filter(|a| chi.of(a) == 1).count() as u64;
            assert_eq!(plus, (f.q() - 1) / 2, "q = {}", f.q());
            assert_eq!(chi.squares.as_ref().unwrap().count(), (f.q() - 1) / 2);
        }
    }

    #[test]
    fn multiplicative() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for k in 1..=2 {
                let f = ExtField::new(p, k).unwrap();
                let chi = QuadraticCharacter::new(&f, DEFAULT_BITMAP_THRESHOLD).unwrap();
                let units: Vec<FieldElement> = f.elements().skip(1).collect();
                for a in &units {
                    for b in &units {
                        assert_eq!(chi.of(a) * chi.of(b), chi.of(&f.mul(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn resultant_norm_matches_frobenius_norm() {
        use crate::field::Frobenius;
        for (p, k) in [(3u64, 4usize), (5, 3), (7, 5), (13, 2), (101, 2)] {
            let f = ExtField::new(p, k).unwrap();
            let chi = QuadraticCharacter::with_backend(&f, Backend::Euler).unwrap();
            let frob = Frobenius::new(&f);
            for i in (0..f.q()).step_by(((f.q() / 3000) as usize).max(1)) {
                let a = chi.packed().from_index(i);
                assert_eq!(chi.norm(&a), frob.norm(chi.packed(), &a), "p={p} k={k} i={i}");
            }
        }
    }

    #[test]
    fn large_prime_without_tables() {
        let p = (1u64 << 20) + 7;
        assert!(crate::field::is_prime(p));
        let f = ExtField::new(p, 1).unwrap();
        let chi = QuadraticCharacter::with_backend(&f, Backend::Euler).unwrap();
        assert!(chi.legendre.is_empty());
        for a in [1u64, 2, 3, 12345, p - 1] {
            assert_eq!(chi.of(&f.element(vec![a]).unwrap()), f.base().legendre(a));
        }
    }

    #[test]
    fn threshold_selects_backend() {
        let f = ExtField::new(7, 3).unwrap();
        assert_eq!(QuadraticCharacter::new(&f, 343).unwrap().backend(), Backend::Bitmap);
        assert_eq!(QuadraticCharacter::new(&f, 342).unwrap().backend(), Backend::Euler);
    }
}
