//! L-polynomials from point counts.
//!
//! With N_k = #C(F_{p^k}) and inverse roots ω_j of the numerator
//! P(z) = ∏ (1 − ω_j z), the power sums s_k = Σ ω_j^k equal p^k + 1 − N_k.
//! Newton's identities turn s_1..s_g into c_1..c_g; the functional
//! equation c_{2g−i} = p^{g−i} c_i supplies the rest.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rhythm::{find_roots, Tolerances};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusTraces {
    pub p: u64,
    pub g: usize,
    /// s_1..s_g
    pub s: Vec<i64>,
}

/// Numerator of the zeta function, P(z) = Σ c_i z^i with c_0 = 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    pub p: u64,
    pub g: usize,
    pub coeffs: Vec<i64>,
}

/// |s| ≤ 2g p^{k/2}, compared exactly as s² ≤ 4g² p^k.
fn within_weil_bound(p: u64, g: usize, k: usize, s: i64) -> bool {
    let Some(pk) = (p as i128).checked_pow(k as u32) else {
        return true;
    };
    let lhs = (s as i128) * (s as i128);
    let bound = 4 * (g as i128) * (g as i128);
    match bound.checked_mul(pk) {
        Some(rhs) => lhs <= rhs,
        None => true,
    }
}

pub fn traces_from_counts(p: u64, g: usize, counts: &[u64]) -> Result<FrobeniusTraces> {
    if counts.len() < g {
        return Err(Error::MissingCounts { expected: g, got: counts.len() });
    }
    let mut s = Vec::with_capacity(g);
    let mut pk: i128 = 1;
    for (i, &n) in counts[..g].iter().enumerate() {
        let k = i + 1;
        pk = pk.checked_mul(p as i128).ok_or(Error::Overflow("computing p^k"))?;
        let trace = pk + 1 - n as i128;
        let trace = i64::try_from(trace).map_err(|_| Error::Overflow("computing traces"))?;
        if !within_weil_bound(p, g, k, trace) {
            return Err(Error::WeilBound { p, k, trace });
        }
        s.push(trace);
    }
    Ok(FrobeniusTraces { p, g, s })
}

pub fn lpoly_from_traces(t: &FrobeniusTraces) -> Result<LPolynomial> {
    let g = t.g;
    if t.s.len() != g {
        return Err(Error::MissingCounts { expected: g, got: t.s.len() });
    }
    for (i, &s) in t.s.iter().enumerate() {
        if !within_weil_bound(t.p, g, i + 1, s) {
            return Err(Error::WeilBound { p: t.p, k: i + 1, trace: s });
        }
    }
    let mut c: Vec<i128> = vec![0; 2 * g + 1];
    c[0] = 1;
    // k c_k = −Σ_{i=1}^{k} c_{k−i} s_i
    for k in 1..=g {
        let mut acc: i128 = 0;
        for i in 1..=k {
            let term =
                c[k - i].checked_mul(t.s[i - 1] as i128).ok_or(Error::Overflow("applying Newton's identities"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("applying Newton's identities"))?;
        }
        let numerator = -acc;
        if numerator % k as i128 != 0 {
            return Err(Error::NonIntegral { k, numerator });
        }
        c[k] = numerator / k as i128;
    }
    for i in 0..g {
        let scale =
            (t.p as i128).checked_pow((g - i) as u32).ok_or(Error::Overflow("applying the functional equation"))?;
        c[2 * g - i] = c[i].checked_mul(scale).ok_or(Error::Overflow("applying the functional equation"))?;
    }
    let coeffs = c
        .into_iter()
        .map(i64::try_from)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Overflow("narrowing coefficients"))?;
    Ok(LPolynomial { p: t.p, g, coeffs })
}

/// Inverse direction: power sums s_1..s_n from the coefficients, by
/// s_k = −k c_k − Σ_{i=1}^{k−1} c_{k−i} s_i.
pub fn traces_from_lpoly(l: &LPolynomial, n: usize) -> Result<Vec<i64>> {
    let mut s: Vec<i128> = Vec::with_capacity(n);
    let coeff = |k: usize| l.coeffs.get(k).copied().unwrap_or(0) as i128;
    for k in 1..=n {
        let mut acc = -(k as i128) * coeff(k);
        for i in 1..k {
            acc -= coeff(k - i) * s[i - 1];
        }
        s.push(acc);
    }
    s.into_iter().map(|v| i64::try_from(v).map_err(|_| Error::Overflow("computing power sums"))).collect()
}

impl LPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// c_{2g−i} = p^{g−i} c_i for all 0 ≤ i ≤ g, checked exactly.
    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.g;
        if self.coeffs.len() != 2 * g + 1 || self.coeffs[0] != 1 {
            return false;
        }
        (0..=g).all(|i| {
            (self.p as i128)
                .checked_pow((g - i) as u32)
                .and_then(|s| s.checked_mul(self.coeffs[i] as i128))
                .is_some_and(|v| v == self.coeffs[2 * g - i] as i128)
        })
    }

    pub fn eval(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.coeffs.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeilCheck {
    pub ok: bool,
    pub max_deviation: f64,
}

/// Largest | |z_j| − p^{−1/2} | over the roots of L.
pub fn verify_weil(l: &LPolynomial, tol: f64) -> Result<WeilCheck> {
    let roots = find_roots(l, &Tolerances::default())?;
    let radius = (l.p as f64).powf(-0.5);
    let max_deviation = roots.iter().map(|z| (z.norm() - radius).abs()).fold(0.0, f64::max);
    Ok(WeilCheck { ok: max_deviation <= tol, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_traces() {
        let t = traces_from_counts(7, 5, &[8, 50, 344, 2402, 16808]).unwrap();
        assert_eq!(t.s, vec![0; 5]);
        let l = lpoly_from_traces(&t).unwrap();
        let mut expect = vec![0i64; 11];
        expect[0] = 1;
        expect[10] = 16807;
        assert_eq!(l.coeffs, expect);
        assert!(l.satisfies_functional_equation());
    }

    #[test]
    fn genus_one() {
        for a in -3..=3 {
            let t = FrobeniusTraces { p: 3, g: 1, s: vec![a] };
            let l = lpoly_from_traces(&t).unwrap();
            assert_eq!(l.coeffs, vec![1, -a, 3]);
        }
    }

    #[test]
    fn elliptic_example_trace() {
        // y² = x³ + x over F_3 has 4 points
        let t = traces_from_counts(3, 1, &[4]).unwrap();
        assert_eq!(t.s, vec![0]);
    }

    #[test]
    fn weil_bound_rejection() {
        // 2√7 ≈ 5.29: s_1 = 5 passes, 6 fails
        assert!(traces_from_counts(7, 1, &[3]).is_ok());
        assert_eq!(traces_from_counts(7, 1, &[2]), Err(Error::WeilBound { p: 7, k: 1, trace: 6 }));
        assert!(lpoly_from_traces(&FrobeniusTraces { p: 7, g: 1, s: vec![-6] }).is_err());
    }

    #[test]
    fn non_integral_newton_step() {
        // s = (1, 0): 2 c_2 = −(c_1 s_1 + s_2) = 1
        let t = FrobeniusTraces { p: 101, g: 2, s: vec![1, 0] };
        assert_eq!(lpoly_from_traces(&t), Err(Error::NonIntegral { k: 2, numerator: 1 }));
    }

    #[test]
    fn round_trip_traces() {
        let t = FrobeniusTraces { p: 11, g: 3, s: vec![2, -4, 17] };
        let l = lpoly_from_traces(&t).unwrap();
        assert_eq!(traces_from_lpoly(&l, 3).unwrap(), t.s);
    }

    #[test]
    fn weil_for_explicit_polynomials() {
        let mut c = vec![0i64; 11];
        c[0] = 1;
        c[10] = 7i64.pow(5);
        let check = verify_weil(&LPolynomial { p: 7, g: 5, coeffs: c }, 1e-9).unwrap();
        assert!(check.ok, "{check:?}");
        let check = verify_weil(&LPolynomial { p: 3, g: 1, coeffs: vec![1, 0, 3] }, 1e-12).unwrap();
        assert!(check.ok, "{check:?}");
    }

    proptest::proptest! {
        #[test]
        fn traces_round_trip(p in proptest::sample::select(vec![3u64, 5, 7, 11, 13, 67, 101]), g in 1usize..=5, seed in proptest::collection::vec(-1.0f64..=1.0, 5)) {
            // Weil factors 1 − a z + p z², |a| ≤ 2√p
            let bound = (4.0 * p as f64).sqrt().floor() as i64;
            let factors: Vec<i64> = seed[..g].iter().map(|u| (u * bound as f64).trunc() as i64).collect();
            let mut c = vec![1i64];
            for &a in &factors {
                let mut next = vec![0i64; c.len() + 2];
                for (i, &x) in c.iter().enumerate() {
                    next[i] += x;
                    next[i + 1] -= a * x;
                    next[i + 2] += p as i64 * x;
                }
                c = next;
            }
            let l = LPolynomial { p, g, coeffs: c };
            let s = traces_from_lpoly(&l, g).unwrap();
            let back = lpoly_from_traces(&FrobeniusTraces { p, g, s }).unwrap();
            proptest::prop_assert_eq!(back, l);
        }
    }
}
