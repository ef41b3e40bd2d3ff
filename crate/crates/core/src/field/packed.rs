//! Allocation-free arithmetic in F_{p^k} for the point-counting hot loop.
//!
//! Elements are fixed `[u64; MAX_DEGREE]` arrays. Multiplication by a fixed
//! element `x` is a k×k matrix over F_p, built once per `x` and then applied
//! with lazy reduction: products accumulate in `u64`, which requires
//! `k · p² < 2^64`, guaranteed by the `p < 2^28` restriction.

use std::collections::HashMap;

use super::ext::{ExtField, MAX_DEGREE};
use super::poly;
use super::prime::Reducer;

pub type Packed = [u64; MAX_DEGREE];

/// Largest prime handled by the packed kernel.
pub const PACKED_PRIME_LIMIT: u64 = 1 << 28;

#[derive(Clone, Debug)]
pub struct PackedField {
    p: u64,
    k: usize,
    /// `p - m_j` for the low modulus coefficients, so reduction only adds.
    neg_modulus: Packed,
    reducer: Reducer,
    /// `p^i` digit weights for the element index.
    weights: Packed,
}

impl PackedField {
    pub fn new(field: &ExtField) -> Option<Self> {
        let p = field.p();
        if p >= PACKED_PRIME_LIMIT {
            return None;
        }
        let k = field.k();
        let mut neg_modulus = [0; MAX_DEGREE];
        for (slot, &m) in neg_modulus.iter_mut().zip(&field.modulus()[..k]) {
            *slot = (p - m) % p;
        }
        let mut weights = [0; MAX_DEGREE];
        let mut w = 1u64;
        for slot in weights.iter_mut().take(k) {
            *slot = w;
            w = w.wrapping_mul(p);
        }
        Some(PackedField { p, k, neg_modulus, reducer: Reducer::new(p), weights })
    }

    #[inline(always)]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline(always)]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u64 {
        self.reducer.reduce(x)
    }

    pub fn from_index(&self, mut index: u64) -> Packed {
        let mut out = [0; MAX_DEGREE];
        for slot in out.iter_mut().take(self.k) {
            *slot = index % self.p;
            index /= self.p;
        }
        out
    }

    #[inline(always)]
    pub fn index(&self, a: &Packed) -> u64 {
        a[..self.k].iter().zip(&self.weights).map(|(c, w)| c * w).sum()
    }

    /// Advances `a` to the element with the next index (wrapping at q).
    #[inline(always)]
    pub fn increment(&self, a: &mut Packed) {
        for slot in a.iter_mut().take(self.k) {
            *slot += 1;
            if *slot < self.p {
                return;
            }
            *slot = 0;
        }
    }

    /// Column-major matrix of multiplication by `x`: column i is `x · t^i`.
    #[inline(always)]
    pub fn mul_matrix(&self, x: &Packed) -> [Packed; MAX_DEGREE] {
        let k = self.k;
        let mut cols = [[0u64; MAX_DEGREE]; MAX_DEGREE];
        cols[0] = *x;
        for i in 1..k {
            let prev = cols[i - 1];
            let top = prev[k - 1];
            let col = &mut cols[i];
            col[0] = self.reduce(top * self.neg_modulus[0]);
            for j in 1..k {
                col[j] = self.reduce(prev[j - 1] + top * self.neg_modulus[j]);
            }
        }
        cols
    }

    /// `m · a` for a matrix from [`PackedField::mul_matrix`].
    #[inline(always)]
    pub fn apply(&self, m: &[Packed; MAX_DEGREE], a: &Packed) -> Packed {
        let k = self.k;
        let mut acc = [0u64; MAX_DEGREE];
        for i in 0..k {
            let ai = a[i];
            if ai == 0 {
                continue;
            }
            let col = &m[i];
            for j in 0..k {
                acc[j] += col[j] * ai;
            }
        }
        for slot in acc.iter_mut().take(k) {
            *slot = self.reduce(*slot);
        }
        acc
    }

    pub fn mul(&self, a: &Packed, b: &Packed) -> Packed {
        self.apply(&self.mul_matrix(a), b)
    }

    /// Horner evaluation of a polynomial with reduced F_p coefficients
    /// (little-endian) at `x`.
    #[inline(always)]
    pub fn eval_base_poly(&self, coeffs: &[u64], x: &Packed) -> Packed {
        let m = self.mul_matrix(x);
        let mut acc = [0u64; MAX_DEGREE];
        let mut iter = coeffs.iter().rev();
        if let Some(&lead) = iter.next() {
            acc[0] = lead;
        }
        for &c in iter {
            acc = self.apply(&m, &acc);
            acc[0] = self.reduce(acc[0] + c);
        }
        acc
    }
}

/// Walks a base polynomial P over F_{p^k} in index order using only additions.
///
/// With x = Σ c_i t^i, F(c) = P(x) is a polynomial of total degree d = deg P
/// in the digit vector c, so every forward difference Δ^a F with |a| > d
/// vanishes. Table m holds Δ^a F for a supported on digits 0..=m at the
/// point (0, …, 0, c_m, …, c_{k−1}); stepping digit m adds neighbouring
/// entries, and a carry refreshes the lower tables from a slice of the
/// higher one. The Newton series behind this is an identity over the
/// integers, so it holds for any d, including d ≥ p.
#[derive(Clone, Debug)]
pub struct GridWalker {
    coeffs: Vec<u64>,
    d: usize,
    /// Multi-indices of each table.
    entries: Vec<Vec<Packed>>,
    /// `(i, j)` with entry j = entry i + e_m, ordered by ascending a_m.
    steps: Vec<Vec<(usize, usize)>>,
    /// For table m ≥ 1: where each entry of table m − 1 sits in table m.
    slices: Vec<Vec<usize>>,
    /// `below[m][i][dim]`: entry i − e_dim of table m, or `usize::MAX`.
    below: Vec<Vec<[usize; MAX_DEGREE]>>,
    tables: Vec<Vec<Lanes>>,
    digits: Packed,
}

/// Table entries: p < 2^28, so sums of two residues fit in u32 lanes.
type Lanes = [u32; MAX_DEGREE];

#[inline(always)]
fn add_lanes(v: &mut Lanes, w: &Lanes, p: u32) {
    for c in 0..MAX_DEGREE {
        let s = v[c].wrapping_add(w[c]);
        v[c] = s.wrapping_sub(p & 0u32.wrapping_sub((s >= p) as u32));
    }
}

fn simplex(dims: usize, d: usize) -> Vec<Packed> {
    let mut out = Vec::new();
    let mut a = [0u64; MAX_DEGREE];
    loop {
        out.push(a);
        // odometer over the simplex, digit 0 fastest
        let mut m = 0;
        loop {
            if m == dims {
                return out;
            }
            a[m] += 1;
            if a[..dims].iter().sum::<u64>() <= d as u64 {
                break;
            }
            a[m] = 0;
            m += 1;
        }
    }
}

impl GridWalker {
    pub fn new(field: &PackedField, coeffs: &[u64]) -> Self {
        let k = field.k();
        let d = coeffs.len().saturating_sub(1);
        let entries: Vec<Vec<Packed>> = (0..k).map(|m| simplex(m + 1, d)).collect();
        let lookup: Vec<HashMap<Packed, usize>> =
            entries.iter().map(|e| e.iter().enumerate().map(|(i, a)| (*a, i)).collect()).collect();
        let mut steps = Vec::with_capacity(k);
        let mut slices = vec![Vec::new()];
        let mut below = Vec::with_capacity(k);
        for m in 0..k {
            let mut pairs: Vec<(u64, usize, usize)> = Vec::new();
            let mut down = Vec::with_capacity(entries[m].len());
            for (i, a) in entries[m].iter().enumerate() {
                let mut up = *a;
                up[m] += 1;
                if let Some(&j) = lookup[m].get(&up) {
                    pairs.push((a[m], i, j));
                }
                let mut row = [usize::MAX; MAX_DEGREE];
                for (dim, slot) in row.iter_mut().enumerate().take(m + 1) {
                    if a[dim] > 0 {
                        let mut lower = *a;
                        lower[dim] -= 1;
                        *slot = lookup[m][&lower];
                    }
                }
                down.push(row);
            }
            pairs.sort_by_key(|&(am, i, _)| (am, i));
            steps.push(pairs.into_iter().map(|(_, i, j)| (i, j)).collect());
            below.push(down);
            if m > 0 {
                slices.push(entries[m - 1].iter().map(|a| lookup[m][a]).collect());
            }
        }
        let tables = entries.iter().map(|e| vec![[0u32; MAX_DEGREE]; e.len()]).collect();
        GridWalker { coeffs: coeffs.to_vec(), d, entries, steps, slices, below, tables, digits: [0; MAX_DEGREE] }
    }

    /// Δ^a F at `base` for every a in table m, from values on base + simplex.
    fn init_table(&mut self, field: &PackedField, m: usize, base: &Packed) {
        let k = field.k();
        let p = field.p();
        let entries = &self.entries[m];
        let table = &mut self.tables[m];
        for (slot, a) in table.iter_mut().zip(entries) {
            let mut x = [0u64; MAX_DEGREE];
            for c in 0..k {
                x[c] = (base[c] + a[c]) % p;
            }
            let y = field.eval_base_poly(&self.coeffs, &x);
            for c in 0..MAX_DEGREE {
                slot[c] = y[c] as u32;
            }
        }
        let p32 = p as u32;
        // difference along each digit in turn, in place
        for dim in 0..=m {
            for r in 1..=self.d as u64 {
                for (i, a) in entries.iter().enumerate().rev() {
                    if a[dim] < r {
                        continue;
                    }
                    let j = self.below[m][i][dim];
                    let lower = table[j];
                    let v = &mut table[i];
                    for c in 0..k {
                        v[c] = (v[c] + p32 - lower[c]) % p32;
                    }
                }
            }
        }
    }

    /// Positions the walker at the element with the given index.
    pub fn seek(&mut self, field: &PackedField, index: u64) {
        let k = field.k();
        self.digits = field.from_index(index);
        for m in 0..k {
            let mut base = self.digits;
            for c in base.iter_mut().take(m) {
                *c = 0;
            }
            self.init_table(field, m, &base);
        }
    }

    /// P at the current element, then advances to the next index.
    #[inline(always)]
    pub fn step(&mut self, field: &PackedField) -> Packed {
        let p = field.p();
        let line = &mut self.tables[0];
        let mut value = [0u64; MAX_DEGREE];
        for (out, &c) in value.iter_mut().zip(&line[0]) {
            *out = c as u64;
        }
        let mut iter = line.iter_mut();
        if let Some(mut cur) = iter.next() {
            for next in iter {
                add_lanes(cur, next, p as u32);
                cur = next;
            }
        }
        self.digits[0] += 1;
        if self.digits[0] == p {
            self.carry(field);
        }
        value
    }

    #[cold]
    fn carry(&mut self, field: &PackedField) {
        let k = field.k();
        let p = field.p();
        self.digits[0] = 0;
        let mut m = 1;
        while m < k && self.digits[m] == p - 1 {
            self.digits[m] = 0;
            m += 1;
        }
        if m == k {
            // wrapped past the last element
            self.seek(field, 0);
            return;
        }
        self.digits[m] += 1;
        let table = &mut self.tables[m];
        for &(i, j) in &self.steps[m] {
            let up = table[j];
            add_lanes(&mut table[i], &up, p as u32);
        }
        for lower in (0..m).rev() {
            let (lo, hi) = self.tables.split_at_mut(lower + 1);
            for (slot, &src) in lo[lower].iter_mut().zip(&self.slices[lower + 1]) {
                *slot = hi[0][src];
            }
        }
    }
}

/// Frobenius `a ↦ a^p` as a linear map, used for norms.
#[derive(Clone, Debug)]
pub struct Frobenius {
    matrix: [Packed; MAX_DEGREE],
}

impl Frobenius {
    pub fn new(field: &ExtField) -> Self {
        let base = field.base();
        let k = field.k();
        let m = field.modulus();
        // t^p mod m, then its powers (t^p)^i for each column
        let t = if k == 1 { vec![base.neg(m[0])] } else { vec![0, 1] };
        let tp = poly::powmod(base, &t, field.p(), m);
        let mut matrix = [[0u64; MAX_DEGREE]; MAX_DEGREE];
        let mut col = vec![1u64];
        for slot in matrix.iter_mut().take(k) {
            for (j, &c) in col.iter().enumerate() {
                slot[j] = c;
            }
            col = poly::mulmod(base, &col, &tp, m);
        }
        Frobenius { matrix }
    }

    #[inline(always)]
    pub fn apply(&self, packed: &PackedField, a: &Packed) -> Packed {
        packed.apply(&self.matrix, a)
    }

    /// Norm to F_p: the product of all k conjugates.
    pub fn norm(&self, packed: &PackedField, a: &Packed) -> u64 {
        let mut conj = *a;
        let mut acc = *a;
        for _ in 1..packed.k() {
            conj = self.apply(packed, &conj);
            acc = packed.mul(&acc, &conj);
        }
        debug_assert!(acc[1..packed.k()].iter().all(|&c| c == 0));
        acc[0]
    }
}
