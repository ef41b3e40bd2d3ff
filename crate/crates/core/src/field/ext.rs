use serde::Serialize;

use super::poly;
use super::PrimeField;
use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 8;

/// The lexicographically smallest monic irreducible polynomial of degree `k`
/// over F_p, scanning `(c_0, .., c_{k-1})` in ascending order with `c_0` most
/// significant. Returned little-endian with the leading 1 included.
pub fn find_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
    let field = PrimeField::new(p)?;
    if k == 0 || k > MAX_DEGREE {
        return Err(Error::BadDegree(k));
    }
    let mut tail = vec![0u64; k];
    loop {
        // c_0 = 0 means x divides the candidate
        if k == 1 || tail[0] != 0 {
            let mut candidate = tail.clone();
            candidate.push(1);
            if poly::is_irreducible(&field, &candidate) {
                return Ok(candidate);
            }
        }
        // odometer with the last coefficient fastest
        let mut i = k;
        loop {
            if i == 0 {
                unreachable!("an irreducible polynomial of every degree exists");
            }
            i -= 1;
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
        }
    }
}

/// An element of F_{p^k}: `k` residues, little-endian in the generator `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// The extension F_{p^k} = F_p[t] / (modulus).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    k: usize,
    modulus: Vec<u64>,
    q: u64,
}

impl ExtField {
    /// F_{p^k} built on the deterministic modulus from [`find_irreducible`].
    pub fn new(p: u64, k: usize) -> Result<Self> {
        let base = PrimeField::new(p)?;
        check_size(p, k)?;
        let modulus = find_irreducible(p, k)?;
        Self::assemble(base, modulus)
    }

    /// F_{p^k} on a caller-chosen modulus, which must be monic irreducible.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let k = modulus.len().saturating_sub(1);
        if k == 0 || k > MAX_DEGREE {
            return Err(Error::BadDegree(k));
        }
        check_size(p, k)?;
        if modulus.iter().any(|&c| c >= p) || !poly::is_irreducible(&base, &modulus) {
            return Err(Error::NotIrreducible(k));
        }
        Self::assemble(base, modulus)
    }

    fn assemble(base: PrimeField, modulus: Vec<u64>) -> Result<Self> {
        let k = modulus.len() - 1;
        let q = base.p().checked_pow(k as u32).ok_or(Error::FieldTooLarge { p: base.p(), k })?;
        Ok(ExtField { base, k, modulus, q })
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_base(1)
    }

    /// Embeds a residue of F_p.
    pub fn from_base(&self, c: u64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = self.base.reduce(c);
        e
    }

    /// The generator `t` (for k = 1 this is the root of the linear modulus).
    pub fn generator(&self) -> FieldElement {
        if self.k == 1 {
            return self.from_base(self.base.neg(self.modulus[0]));
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.k || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::ForeignElement);
        }
        Ok(FieldElement { coeffs })
    }

    /// The element whose coefficients are the base-p digits of `index`.
    pub fn from_index(&self, mut index: u64) -> FieldElement {
        debug_assert!(index < self.q);
        let p = self.p();
        let coeffs = (0..self.k)
            .map(|_| {
                let c = index % p;
                index /= p;
                c
            })
            .collect();
        FieldElement { coeffs }
    }

    pub fn index(&self, a: &FieldElement) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p() + c)
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert_eq!(a.coeffs.len(), self.k);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.base.add(x, y)).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.base.sub(x, y)).collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coeffs = a.coeffs.iter().map(|&x| self.base.neg(x)).collect();
        FieldElement { coeffs }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert_eq!(a.coeffs.len(), self.k);
        debug_assert_eq!(b.coeffs.len(), self.k);
        let p = self.p() as u128;
        let k = self.k;
        let mut wide = vec![0u128; 2 * k - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                wide[i + j] = (wide[i + j] + x as u128 * y as u128) % p;
            }
        }
        // reduce by the monic modulus from the top down
        for top in (k..2 * k - 1).rev() {
            let h = wide[top];
            if h == 0 {
                continue;
            }
            for j in 0..k {
                let sub = h * self.modulus[j] as u128 % p;
                let idx = top - k + j;
                wide[idx] = (wide[idx] + p - sub) % p;
            }
        }
        FieldElement { coeffs: wide[..k].iter().map(|&c| c as u64).collect() }
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Square-and-multiply.
    pub fn pow(&self, a: &FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat, a^{q-2}.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Quadratic character by the Euler criterion a^{(q-1)/2}.
    pub fn quadratic_character(&self, a: &FieldElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let r = self.pow(a, (self.q - 1) / 2);
        if r == self.one() {
            1
        } else {
            debug_assert_eq!(r, self.from_base(self.p() - 1));
            -1
        }
    }

    /// Evaluates a polynomial with F_p coefficients (little-endian) by Horner.
    pub fn eval_base_poly(&self, coeffs: &[u64], x: &FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| self.add(&self.mul(&acc, x), &self.from_base(c)))
    }
}

fn check_size(p: u64, k: usize) -> Result<()> {
    if k == 0 || k > MAX_DEGREE {
        return Err(Error::BadDegree(k));
    }
    p.checked_pow(k as u32).map(|_| ()).ok_or(Error::FieldTooLarge { p, k })
}
