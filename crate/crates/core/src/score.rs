//! The prime-to-score map.
//!
//! For a prime p, 6·log₂ p is the position of √p on the equal-tempered
//! scale (semitone ratio 2^{1/12}). Its continued fraction
//! n₁ + 1/(n₂ + 1/(n₃ + …)) gives five integers, turned into the line
//! (n₁, n₁−n₂, n₁−n₂+n₃, n₁−n₂+n₃−n₄, n₁−n₂+n₃−n₄+n₅) and mirrored to ten
//! notes so that it can be played by a palindromic rhythm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::is_prime;

/// Equal-tempered semitone ratio.
pub const SEMITONE: f64 = 1.059_463_094_359_295_3;

/// Working precisions (decimal digits) for the dual evaluation.
pub const LOW_PRECISION: u32 = 30;
pub const HIGH_PRECISION: u32 = 60;

const GUARD_BITS: u64 = 32;

/// atanh(a/b) as a fixed-point integer with `bits` fractional bits.
fn atanh_fixed(a: i64, b: i64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let a = BigInt::from(a);
    let b = BigInt::from(b);
    let b2 = &b * &b;
    let a2 = &a * &a;
    let mut power = (&one * &a) / &b;
    let mut sum = BigInt::zero();
    let mut n = 1u64;
    while !power.is_zero() {
        sum += &power / n;
        power = (power * &a2) / &b2;
        n += 2;
    }
    sum
}

/// 6·ln p / ln 2 as the rational `num / 2^bits`, accurate to about
/// `digits` decimal digits.
pub fn six_log2(p: u64, digits: u32) -> (BigInt, BigInt) {
    assert!(p >= 2);
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 8;
    let work = bits + GUARD_BITS;
    // p = 2^e · m with m near 1, so ln p = e ln 2 + 2 atanh((p − 2^e)/(p + 2^e))
    let e = (p as f64).log2().round() as u32;
    let pow = 1i64 << e;
    let ln2 = atanh_fixed(1, 3, work) * 2;
    let atanh = atanh_fixed(p as i64 - pow, p as i64 + pow, work);
    // 6e + 12·atanh / ln2, carried in fixed point
    let frac = ((atanh * 12) << work) / &ln2;
    let value = (BigInt::from(6 * e as i64) << work) + frac;
    (value >> GUARD_BITS, BigInt::one() << bits)
}

/// Continued-fraction terms of `num/den`, stopping early when exact.
pub fn cf_terms_rational(num: &BigInt, den: &BigInt, n: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(n);
    let (mut a, mut b) = (num.clone(), den.clone());
    while out.len() < n && !b.is_zero() {
        let (q, r) = a.div_mod_floor(&b);
        out.push(q.to_i64().expect("continued fraction term fits i64"));
        a = b;
        b = r;
    }
    out
}

/// Terms of 6·log₂ p at one working precision.
pub fn cf_expansion_at(p: u64, terms: usize, digits: u32) -> Vec<i64> {
    let (num, den) = six_log2(p, digits);
    cf_terms_rational(&num, &den, terms)
}

/// Terms of 6·log₂ p, computed at 30 and 60 digits; they must agree.
pub fn cf_expansion(p: u64, terms: usize) -> Result<Vec<i64>> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let low = cf_expansion_at(p, terms, LOW_PRECISION);
    let high = cf_expansion_at(p, terms, HIGH_PRECISION);
    if low != high {
        return Err(Error::PrecisionInstability { low, high });
    }
    Ok(high)
}

/// Pitch rendering: MIDI-style pitch numbers anchored at `reference_pitch`
/// sounding `reference_hz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PitchMap {
    pub offset: i64,
    pub reference_pitch: i64,
    pub reference_hz: f64,
}

impl Default for PitchMap {
    fn default() -> Self {
        PitchMap { offset: 36, reference_pitch: 69, reference_hz: 440.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pitch {
    pub number: u8,
    pub frequency: f64,
    pub clamped: bool,
}

pub fn pitch_of(note: i64, map: &PitchMap) -> Pitch {
    let raw = note + map.offset;
    let clamped = !(0..=127).contains(&raw);
    if clamped {
        log::warn!("pitch {raw} for note {note} clamped into 0..=127");
    }
    let number = raw.clamp(0, 127);
    let frequency = map.reference_hz * 2f64.powf((number - map.reference_pitch) as f64 / 12.0);
    Pitch { number: number as u8, frequency, clamped }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeScore {
    pub p: u64,
    pub cf_terms: Vec<i64>,
    pub notes5: Vec<i64>,
    pub notes10: Vec<i64>,
    pub pitches: Vec<u8>,
}

/// Alternating partial sums n₁, n₁−n₂, n₁−n₂+n₃, …
pub fn alternating_notes(terms: &[i64]) -> Vec<i64> {
    let mut acc = 0;
    terms
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            acc += if i % 2 == 0 { t } else { -t };
            acc
        })
        .collect()
}

/// a₁..a₅ followed by a₅..a₁.
pub fn mirror(notes: &[i64]) -> Vec<i64> {
    notes.iter().chain(notes.iter().rev()).copied().collect()
}

pub fn prime_score(p: u64, map: &PitchMap) -> Result<PrimeScore> {
    let cf_terms = cf_expansion(p, 5)?;
    let notes5 = alternating_notes(&cf_terms);
    let notes10 = mirror(&notes5);
    let pitches = notes10.iter().map(|&n| pitch_of(n, map).number).collect();
    Ok(PrimeScore { p, cf_terms, notes5, notes10, pitches })
}

/// [`prime_score`] with the default register.
pub fn note_list(p: u64) -> Result<PrimeScore> {
    prime_score(p, &PitchMap::default())
}

/// ⌊6 log₂ p⌋ from the high-precision value.
pub fn first_note(p: u64) -> i64 {
    let (num, den) = six_log2(p, HIGH_PRECISION);
    num.div_floor(&den).to_i64().expect("fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_input_has_one_term() {
        assert_eq!(cf_terms_rational(&BigInt::from(16), &BigInt::one(), 1), vec![16]);
        assert_eq!(cf_terms_rational(&BigInt::from(16), &BigInt::one(), 5), vec![16]);
        assert_eq!(cf_terms_rational(&BigInt::from(7), &BigInt::from(3), 5), vec![2, 3]);
    }

    #[test]
    fn seven() {
        assert_eq!(first_note(7), 16);
        assert_eq!(cf_expansion(7, 5).unwrap(), vec![16, 1, 5, 2, 2]);
        let s = note_list(7).unwrap();
        assert_eq!(s.notes5, vec![16, 15, 20, 18, 20]);
        assert_eq!(s.notes10, vec![16, 15, 20, 18, 20, 20, 18, 20, 15, 16]);
        assert_eq!(s.pitches[0], 52);
    }

    #[test]
    fn ln2_digits() {
        // ln 2 = 0.693147180559945309417232121458176568075500134360255254120680...
        let bits = 200;
        let ln2 = atanh_fixed(1, 3, bits) * 2;
        let scaled: BigInt = (ln2 * BigInt::from(10).pow(50u32)) >> bits;
        assert_eq!(scaled.to_string(), "69314718055994530941723212145817656807550013436025");
    }

    #[test]
    fn rejects_non_primes() {
        assert_eq!(cf_expansion(2, 5), Err(Error::NotPrime(2)));
        assert_eq!(cf_expansion(9, 5), Err(Error::NotPrime(9)));
    }

    #[test]
    fn pitch_anchor_and_octave() {
        let map = PitchMap::default();
        assert_eq!(pitch_of(33, &map).frequency, 440.0);
        assert!((pitch_of(45, &map).frequency - 880.0).abs() < 1e-9);
        let ratio = pitch_of(34, &map).frequency / pitch_of(33, &map).frequency;
        assert!((ratio - SEMITONE).abs() < 1e-12);
        assert!((SEMITONE - 2f64.powf(1.0 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn clamping() {
        let map = PitchMap::default();
        let high = pitch_of(200, &map);
        assert!(high.clamped);
        assert_eq!(high.number, 127);
        let low = pitch_of(-100, &map);
        assert_eq!(low.number, 0);
        assert!(!pitch_of(20, &map).clamped);
    }

    #[test]
    fn semitone_near_nineteenth_root_of_three() {
        assert!((2f64.powf(1.0 / 12.0) - 3f64.powf(1.0 / 19.0)).abs() < 1e-4);
    }

    #[test]
    fn mirror_is_palindrome() {
        let m = mirror(&[1, 2, 3, 4, 5]);
        assert_eq!(m, vec![1, 2, 3, 4, 5, 5, 4, 3, 2, 1]);
        assert_eq!(alternating_notes(&[16, 1, 5, 2, 2]), vec![16, 15, 20, 18, 20]);
    }

    #[test]
    fn expansions_stable_for_primes_below_1000() {
        for p in (3..1000).filter(|&n| is_prime(n)) {
            let terms = cf_expansion(p, 5).unwrap();
            assert_eq!(terms[0], first_note(p), "p = {p}");
        }
    }
}
