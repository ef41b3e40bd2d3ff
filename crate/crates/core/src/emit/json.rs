//! JSON export shapes.

use serde::Serialize;

use crate::rhythm::RhythmPattern;
use crate::score::PrimeScore;
use crate::sieve::{SieveEvent, SieveState};
use crate::zeta::LPolynomial;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LPolyExport<'a> {
    pub curve: &'a str,
    pub p: u64,
    pub coefficients: &'a [i64],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhythmExport<'a> {
    pub curve: &'a str,
    pub p: u64,
    pub alphas: &'a [f64],
    pub period: f64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveSnapshot {
    /// Last prime processed when the snapshot was taken.
    pub after: u64,
    pub upper_count: usize,
    pub upper: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveLog<'a> {
    pub events: &'a [SieveEvent],
    pub snapshots: Vec<SieveSnapshot>,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("export types serialize");
    s.push('\n');
    s
}

pub fn lpoly_json(curve: &str, l: &LPolynomial) -> String {
    to_json(&LPolyExport { curve, p: l.p, coefficients: &l.coeffs })
}

pub fn rhythm_json(curve: &str, rp: &RhythmPattern) -> String {
    to_json(&RhythmExport { curve, p: rp.p, alphas: &rp.alphas, period: rp.period, radius: rp.radius })
}

pub fn scores_json(scores: &[PrimeScore]) -> String {
    to_json(&scores)
}

pub fn sieve_log_json(states: &[SieveState], events: &[SieveEvent]) -> String {
    let snapshots = states
        .iter()
        .map(|s| SieveSnapshot {
            after: *s.processed().last().expect("nonempty"),
            upper_count: s.upper().len(),
            upper: s.upper().to_hex(),
        })
        .collect();
    to_json(&SieveLog { events, snapshots })
}
