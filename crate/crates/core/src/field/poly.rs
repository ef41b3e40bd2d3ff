//! Dense univariate polynomials over F_p.
//!
//! Coefficients are little-endian (`v[i]` multiplies `x^i`) and kept trimmed:
//! no trailing zeros, so the zero polynomial is the empty vector.

use super::PrimeField;

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn degree(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

pub fn sub(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn rem(f: &PrimeField, a: &[u64], m: &[u64]) -> Vec<u64> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = f.inv(m[dm]).expect("leading coefficient is nonzero");
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = f.mul(r[top], lead_inv);
        let shift = top - dm;
        for (j, &c) in m[..=dm].iter().enumerate() {
            r[shift + j] = f.sub(r[shift + j], f.mul(factor, c));
        }
        trim(&mut r);
    }
    r
}

/// Monic greatest common divisor; the gcd of two zero polynomials is zero.
pub fn gcd(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    make_monic(f, &mut a);
    a
}

pub fn make_monic(f: &PrimeField, v: &mut [u64]) {
    if let Some(&lead) = v.last() {
        let inv = f.inv(lead).expect("trimmed polynomial has nonzero lead");
        for c in v.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
}

pub fn derivative(f: &PrimeField, a: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.reduce(i as u64), c)).collect();
    trim(&mut out);
    out
}

pub fn mulmod(f: &PrimeField, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &PrimeField, base: &[u64], mut exp: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(f, &acc, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        exp >>= 1;
    }
    acc
}

pub fn eval(f: &PrimeField, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Irreducibility test for a monic polynomial of degree k:
/// gcd(x^{p^j} - x, m) = 1 for every j <= k/2 and x^{p^k} = x mod m.
pub fn is_irreducible(f: &PrimeField, m: &[u64]) -> bool {
    let Some(k) = degree(m) else { return false };
    if k == 0 || m.len() != k + 1 || m[k] != 1 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = [0u64, 1];
    let mut frob = rem(f, &x, m);
    for j in 1..=k {
        frob = powmod(f, &frob, f.p(), m);
        if 2 * j <= k {
            let g = gcd(f, &sub(f, &frob, &x), m);
            if degree(&g) != Some(0) {
                return false;
            }
        }
    }
    frob == rem(f, &x, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn gcd_finds_repeated_factor() {
        // x^10 (x + 1) has a repeated root at 0
        let mut p = vec![0u64; 12];
        p[10] = 1;
        p[11] = 1;
        let monomial = |d: usize| {
            let mut v = vec![0u64; d + 1];
            v[d] = 1;
            v
        };
        let f7 = f(7);
        assert_eq!(gcd(&f7, &p, &derivative(&f7, &p)), monomial(9));
        // in characteristic 5 the derivative collapses to x^10
        let f5 = f(5);
        assert_eq!(gcd(&f5, &p, &derivative(&f5, &p)), monomial(10));
    }

    #[test]
    fn rem_and_mul_are_consistent() {
        let f7 = f(7);
        let a = vec![3, 1, 4, 1, 5];
        let m = vec![2, 0, 1];
        let r = rem(&f7, &a, &m);
        assert!(r.len() < 3);
        // a - r must be divisible by m
        let diff = sub(&f7, &a, &r);
        assert!(rem(&f7, &diff, &m).is_empty());
    }

    #[test]
    fn irreducible_quadratics_over_f3() {
        let f3 = f(3);
        let irreducible: Vec<(u64, u64)> = (0..3)
            .flat_map(|c0| (0..3).map(move |c1| (c0, c1)))
            .filter(|&(c0, c1)| is_irreducible(&f3, &[c0, c1, 1]))
            .collect();
        assert_eq!(irreducible, vec![(1, 0), (2, 1), (2, 2)]);
    }

    #[test]
    fn eval_horner() {
        let f7 = f(7);
        assert_eq!(eval(&f7, &[1, 2, 3], 2), (1 + 4 + 12) % 7);
    }
}
