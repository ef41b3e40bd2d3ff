//! Hyperelliptic curves y² = P(x) over Q, their reductions, and point counts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::DEFAULT_BITMAP_THRESHOLD;
use crate::field::{poly, ExtField, GridWalker, PackedField, PrimeField, QuadraticCharacter};

/// An odd-degree monic integer polynomial P defining y² = P(x).
///
/// Coefficients are stored little-endian: `coeffs[i]` multiplies `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    name: String,
    coeffs: Vec<i64>,
}

impl CurveSpec {
    pub fn new(name: impl Into<String>, coeffs: Vec<i64>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let degree = coeffs.len().saturating_sub(1);
        if degree < 3 || degree.is_multiple_of(2) {
            return Err(Error::InvalidCurve(format!("degree {degree} must be odd and at least 3")));
        }
        if coeffs[degree] != 1 {
            return Err(Error::InvalidCurve("P must be monic".into()));
        }
        Ok(CurveSpec { name: name.into(), coeffs })
    }

    /// Builds a curve from coefficients listed from the leading term down.
    pub fn from_descending(name: impl Into<String>, coeffs: &[i64]) -> Result<Self> {
        Self::new(name, coeffs.iter().rev().copied().collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn genus(&self) -> usize {
        (self.degree() - 1) / 2
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 =")?;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            let coef = if mag == 1 && i > 0 { String::new() } else { mag.to_string() };
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if first {
                write!(f, " {sign}{coef}{var}")?;
            } else {
                write!(f, " {sign} {coef}{var}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// The six genus-5 curves C1..C6, each with good reduction at 7 ≤ p ≤ 67.
pub fn catalog() -> Vec<CurveSpec> {
    const TABLE: [(&str, [i64; 12]); 6] = [
        ("C1", [1, -4, 0, 15, 0, -40, 20, 0, 25, 0, 0, -25]),
        ("C2", [1, 0, 0, 0, -60, -64, 0, -320, -380, 0, -512, -640]),
        ("C3", [1, -1, 1, -5, 8, -8, 8, -14, 5, -7, 1, -1]),
        ("C4", [1, -1, 3, 1, -8, 0, -8, 24, 58, 86, 86, 50]),
        ("C5", [1, -1, 7, -15, 36, -48, 108, -144, 90, -162, 162, 198]),
        ("C6", [1, -3, -6, 12, 18, -54, -96, 72, 126, -206, -336, -96]),
    ];
    TABLE
        .iter()
        .map(|(name, desc)| CurveSpec::from_descending(*name, desc).expect("catalog curves are valid"))
        .collect()
}

/// Looks up `C1`..`C6` (case-insensitive).
pub fn catalog_curve(name: &str) -> Option<CurveSpec> {
    catalog().into_iter().find(|c| c.name().eq_ignore_ascii_case(name))
}

/// A curve reduced mod p with good reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedCurve {
    name: String,
    p: u64,
    coeffs: Vec<u64>,
    genus: usize,
}

impl ReducedCurve {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
}

fn reduction_witness(curve: &CurveSpec, p: u64) -> Option<String> {
    if p == 2 {
        return Some("characteristic 2 is excluded".into());
    }
    let field = match PrimeField::new(p) {
        Ok(f) => f,
        Err(_) => return Some(format!("{p} is not an odd prime")),
    };
    let reduced: Vec<u64> = curve.coeffs.iter().map(|&c| field.reduce_signed(c)).collect();
    if reduced.last() == Some(&0) {
        return Some(format!("{p} divides the leading coefficient"));
    }
    let g = poly::gcd(&field, &reduced, &poly::derivative(&field, &reduced));
    if poly::degree(&g) != Some(0) {
        return Some(format!("P mod {p} has the repeated factor {}", format_poly(&g)));
    }
    None
}

fn format_poly(v: &[u64]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, _) => c.to_string(),
            (1, 1) => "x".into(),
            (1, _) => format!("{c}x"),
            (_, 1) => format!("x^{i}"),
            _ => format!("{c}x^{i}"),
        })
        .collect();
    terms.join(" + ")
}

/// True iff p is an odd prime and P mod p keeps its degree and is squarefree.
pub fn has_good_reduction(curve: &CurveSpec, p: u64) -> bool {
    reduction_witness(curve, p).is_none()
}

pub fn reduce_mod(curve: &CurveSpec, p: u64) -> Result<ReducedCurve> {
    if let Some(witness) = reduction_witness(curve, p) {
        return Err(Error::BadReduction { p, witness });
    }
    let field = PrimeField::new(p)?;
    Ok(ReducedCurve {
        name: curve.name.clone(),
        p,
        coeffs: curve.coeffs.iter().map(|&c| field.reduce_signed(c)).collect(),
        genus: curve.genus(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub workers: usize,
    pub bitmap_threshold: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { workers: 1, bitmap_threshold: DEFAULT_BITMAP_THRESHOLD }
    }
}

/// Counts points over one fixed F_{p^k}, reusing the character tables
/// across curves.
pub struct PointCounter {
    field: ExtField,
    chi: Option<QuadraticCharacter>,
    workers: usize,
}

impl PointCounter {
    pub fn new(p: u64, k: usize, opts: CountOptions) -> Result<Self> {
        Ok(Self::with_field(ExtField::new(p, k)?, opts))
    }

    pub fn with_field(field: ExtField, opts: CountOptions) -> Self {
        let chi = QuadraticCharacter::new(&field, opts.bitmap_threshold);
        PointCounter { field, chi, workers: opts.workers.max(1) }
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    /// #C(F_q) = q + 1 + Σ_x χ(P(x)), with one point at infinity.
    pub fn count(&self, rc: &ReducedCurve) -> Result<u64> {
        if rc.p != self.field.p() {
            return Err(Error::ForeignElement);
        }
        let q = self.field.q();
        let sum = match &self.chi {
            Some(chi) => self.character_sum(chi, &rc.coeffs),
            None => character_sum_generic(&self.field, &rc.coeffs),
        };
        let n = q as i128 + 1 + sum as i128;
        u64::try_from(n).map_err(|_| Error::Overflow("counting points"))
    }

    fn character_sum(&self, chi: &QuadraticCharacter, coeffs: &[u64]) -> i64 {
        let q = self.field.q();
        let workers = (self.workers as u64).min(q).max(1);
        if workers == 1 {
            return chunk_sum(chi, coeffs, 0, q);
        }
        let bounds: Vec<u64> = (0..=workers).map(|i| (q as u128 * i as u128 / workers as u128) as u64).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .windows(2)
                .map(|w| {
                    let (start, end) = (w[0], w[1]);
                    scope.spawn(move || chunk_sum(chi, coeffs, start, end))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("counting worker panicked")).sum()
        })
    }
}

fn chunk_sum(chi: &QuadraticCharacter, coeffs: &[u64], start: u64, end: u64) -> i64 {
    let packed: &PackedField = chi.packed();
    let mut walker = GridWalker::new(packed, coeffs);
    walker.seek(packed, start);
    let mut sum = 0i64;
    for _ in start..end {
        sum += chi.of_packed(&walker.step(packed)) as i64;
    }
    sum
}

/// Slow path over [`crate::field::FieldElement`]s, used for very large p.
fn character_sum_generic(field: &ExtField, coeffs: &[u64]) -> i64 {
    field.elements().map(|x| field.quadratic_character(&field.eval_base_poly(coeffs, &x)) as i64).sum()
}

/// N_k for a single curve; builds a fresh [`PointCounter`].
pub fn count_points(rc: &ReducedCurve, k: usize, opts: CountOptions) -> Result<u64> {
    PointCounter::new(rc.p, k, opts)?.count(rc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1() -> CurveSpec {
        catalog_curve("C1").unwrap()
    }

    #[test]
    fn catalog_matches_equations() {
        let cat = catalog();
        assert_eq!(cat.len(), 6);
        assert_eq!(cat[0].to_string(), "y^2 = x^11 - 4x^10 + 15x^8 - 40x^6 + 20x^5 + 25x^3 - 25");
        assert_eq!(cat[1].to_string(), "y^2 = x^11 - 60x^7 - 64x^6 - 320x^4 - 380x^3 - 512x - 640");
        for c in &cat {
            assert_eq!(c.degree(), 11);
            assert_eq!(c.genus(), 5);
        }
    }

    #[test]
    fn rejects_even_degree_and_non_monic() {
        assert!(CurveSpec::new("e", vec![1, 0, 0, 0, 1]).is_err());
        assert!(CurveSpec::new("m", vec![1, 0, 0, 2]).is_err());
        assert!(CurveSpec::new("ok", vec![0, 1, 0, 1]).is_ok());
    }

    #[test]
    fn good_reduction_in_catalog_range() {
        let primes = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67];
        for c in catalog() {
            for p in primes {
                assert!(has_good_reduction(&c, p), "{} at {p}", c.name());
            }
        }
    }

    #[test]
    fn bad_reduction_witnesses() {
        assert!(!has_good_reduction(&c1(), 5));
        match reduce_mod(&c1(), 5) {
            Err(Error::BadReduction { p: 5, witness }) => {
                assert!(witness.contains("x^10"), "{witness}")
            }
            other => panic!("{other:?}"),
        }
        for c in catalog() {
            assert!(!has_good_reduction(&c, 2));
        }
        assert!(!has_good_reduction(&c1(), 9));
    }

    #[test]
    fn reduction_is_congruent() {
        let rc = reduce_mod(&c1(), 7).unwrap();
        for (&orig, &red) in c1().coeffs().iter().zip(rc.coeffs()) {
            assert!(red < 7);
            assert_eq!((orig - red as i64).rem_euclid(7), 0);
        }
    }

    /// Brute force over all (x, y) in F_p² plus the point at infinity.
    fn brute_force_count(curve: &CurveSpec, p: u64) -> u64 {
        let f = PrimeField::new(p).unwrap();
        let coeffs: Vec<u64> = curve.coeffs().iter().map(|&c| f.reduce_signed(c)).collect();
        let mut n = 1;
        for x in 0..p {
            let rhs = poly::eval(&f, &coeffs, x);
            n += (0..p).filter(|&y| f.mul(y, y) == rhs).count() as u64;
        }
        n
    }

    #[test]
    fn y2_x3_plus_x_over_f3() {
        let e = CurveSpec::new("E", vec![0, 1, 0, 1]).unwrap();
        let rc = reduce_mod(&e, 3).unwrap();
        assert_eq!(count_points(&rc, 1, CountOptions::default()).unwrap(), 4);
        assert_eq!(brute_force_count(&e, 3), 4);
    }

    #[test]
    fn prime_field_counts_match_brute_force() {
        for c in catalog() {
            for p in [7, 11, 13, 29] {
                let rc = reduce_mod(&c, p).unwrap();
                let n = count_points(&rc, 1, CountOptions::default()).unwrap();
                assert_eq!(n, brute_force_count(&c, p), "{} at {p}", c.name());
            }
        }
    }

    #[test]
    fn weil_bound_on_small_extensions() {
        for c in catalog() {
            let rc = reduce_mod(&c, 7).unwrap();
            for k in 1..=4 {
                let n = count_points(&rc, k, CountOptions::default()).unwrap() as f64;
                let q = 7f64.powi(k as i32);
                assert!((n - q - 1.0).abs() <= 10.0 * q.sqrt(), "{} k={k}", c.name());
            }
        }
    }

    #[test]
    fn fast_and_generic_paths_agree() {
        let rc = reduce_mod(&c1(), 7).unwrap();
        for k in 1..=3 {
            let counter = PointCounter::new(7, k, CountOptions::default()).unwrap();
            let generic = counter.field.q() as i64 + 1 + character_sum_generic(&counter.field, rc.coeffs());
            assert_eq!(counter.count(&rc).unwrap() as i64, generic);
        }
    }

    #[test]
    fn count_is_independent_of_modulus() {
        let rc = reduce_mod(&c1(), 7).unwrap();
        let p = rc.p();
        for k in 2..=3 {
            let first = ExtField::new(p, k).unwrap();
            // second-smallest irreducible in the same scan order
            let mut second = None;
            let total = p.pow(k as u32);
            for v in 0..total {
                let mut c: Vec<u64> = (0..k as u32).rev().map(|i| (v / p.pow(i)) % p).collect();
                c.push(1);
                if c != first.modulus() {
                    if let Ok(f) = ExtField::with_modulus(p, c) {
                        second = Some(f);
                        break;
                    }
                }
            }
            let second = second.unwrap();
            assert_ne!(first.modulus(), second.modulus());
            let a = PointCounter::with_field(first, CountOptions::default()).count(&rc).unwrap();
            let b = PointCounter::with_field(second, CountOptions::default()).count(&rc).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn workers_do_not_change_counts() {
        let rc = reduce_mod(&c1(), 11).unwrap();
        let counts: Vec<u64> = [1, 2, 3, 7]
            .iter()
            .map(|&w| count_points(&rc, 3, CountOptions { workers: w, ..Default::default() }).unwrap())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
    }

    #[test]
    fn euler_and_bitmap_counts_agree() {
        let rc = reduce_mod(&c1(), 7).unwrap();
        let bitmap = count_points(&rc, 4, CountOptions::default()).unwrap();
        let euler = count_points(&rc, 4, CountOptions { bitmap_threshold: 0, ..Default::default() }).unwrap();
        assert_eq!(bitmap, euler);
    }
}
