//! Deterministic artifact writers.
//!
//! Every writer is a pure function from its inputs to bytes: no clocks, no
//! hash-map iteration, and fixed-precision number formatting.

pub mod frames;
pub mod json;
pub mod midi;
pub mod svg;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rhythm::{onsets, RhythmPattern};

/// MIDI ticks per second at the fixed tempo (480 per quarter, 0.5 s per quarter).
pub const TICKS_PER_SECOND: f64 = 960.0;

pub fn seconds_to_ticks(t: f64) -> u32 {
    (t * TICKS_PER_SECOND).round() as u32
}

/// One prime's share of the performance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub p: u64,
    /// One pitch per onset within a period.
    pub pitches: Vec<u8>,
    pub rhythm: RhythmPattern,
    pub n_periods: usize,
    pub tempo_scale: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PerformancePlan {
    pub segments: Vec<Segment>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduledNote {
    pub segment: usize,
    pub on_tick: u32,
    pub off_tick: u32,
    pub pitch: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentTiming {
    pub p: u64,
    pub start_tick: u32,
    pub end_tick: u32,
    /// Note-on tick of every onset, in play order.
    pub onsets: Vec<u32>,
}

impl PerformancePlan {
    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.segments.iter().enumerate() {
            if s.pitches.len() != s.rhythm.alphas.len() {
                return Err(Error::Config(format!(
                    "segment {i} (p = {}) has {} pitches for {} onsets per period",
                    s.p,
                    s.pitches.len(),
                    s.rhythm.alphas.len()
                )));
            }
            if s.pitches.iter().any(|&x| x > 127) {
                return Err(Error::Config(format!("segment {i} has a pitch above 127")));
            }
            if !(s.tempo_scale > 0.0 && s.tempo_scale.is_finite()) || s.n_periods == 0 {
                return Err(Error::Config(format!("segment {i} has a non-positive tempo or length")));
            }
        }
        if self.segments.windows(2).any(|w| w[0].p >= w[1].p) {
            return Err(Error::Config("segments must be in ascending prime order".into()));
        }
        Ok(())
    }

    /// Absolute note timing. Segments play back to back; each note lasts
    /// min(period / 4, gap to the next onset), at least one tick.
    pub fn schedule(&self) -> (Vec<ScheduledNote>, Vec<SegmentTiming>) {
        struct Raw {
            segment: usize,
            time: f64,
            pitch: u8,
            quarter_period: f64,
        }
        let mut raw = Vec::new();
        let mut timings = Vec::new();
        let mut start = 0.0;
        for (i, s) in self.segments.iter().enumerate() {
            let sched = onsets(&s.rhythm, s.n_periods, s.tempo_scale);
            let first = raw.len();
            for o in &sched.onsets {
                raw.push(Raw {
                    segment: i,
                    time: start + o.time,
                    pitch: s.pitches[o.index],
                    quarter_period: sched.period / 4.0,
                });
            }
            let end = start + sched.period * s.n_periods as f64;
            timings.push(SegmentTiming {
                p: s.p,
                start_tick: seconds_to_ticks(start),
                end_tick: seconds_to_ticks(end),
                onsets: raw[first..].iter().map(|r| seconds_to_ticks(r.time)).collect(),
            });
            start = end;
        }
        let notes = raw
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let gap = raw.get(i + 1).map_or(f64::INFINITY, |next| next.time - r.time);
                let duration = r.quarter_period.min(gap);
                let on_tick = seconds_to_ticks(r.time);
                let off_tick = seconds_to_ticks(r.time + duration).max(on_tick + 1);
                ScheduledNote { segment: r.segment, on_tick, off_tick, pitch: r.pitch }
            })
            .collect();
        (notes, timings)
    }
}

/// Evenly spaced, trivially palindromic rhythm with n onsets per period:
/// α_j = −π + (j + ½)·2π/n.
pub fn uniform_rhythm(p: u64, n: usize, period: f64) -> RhythmPattern {
    RhythmPattern {
        p,
        g: n / 2,
        alphas: (0..n).map(|j| -PI + (j as f64 + 0.5) * 2.0 * PI / n as f64).collect(),
        period,
        radius: (p as f64).powf(-0.5),
    }
}

/// Fixed six-decimal formatting without negative zero.
pub(crate) fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment(p: u64, alphas: Vec<f64>) -> Segment {
        let n = alphas.len();
        Segment {
            p,
            pitches: (0..n as u8).map(|i| 60 + i).collect(),
            rhythm: RhythmPattern { p, g: n / 2, alphas, period: 2.0 * PI / (p as f64).ln(), radius: 0.0 },
            n_periods: 2,
            tempo_scale: 1.0,
        }
    }

    #[test]
    fn segments_play_back_to_back() {
        let plan = PerformancePlan { segments: vec![segment(7, vec![-1.0, 1.0]), segment(11, vec![-2.0, 2.0])] };
        plan.validate().unwrap();
        let (notes, timings) = plan.schedule();
        assert_eq!(notes.len(), 8);
        assert_eq!(timings[0].start_tick, 0);
        assert_eq!(timings[0].end_tick, timings[1].start_tick);
        let p7 = seconds_to_ticks(2.0 * 2.0 * PI / 7f64.ln());
        assert_eq!(timings[0].end_tick, p7);
        assert!(notes.windows(2).all(|w| w[0].on_tick <= w[1].on_tick));
        assert!(notes.iter().all(|n| n.off_tick > n.on_tick));
    }

    #[test]
    fn duration_is_capped_by_gap() {
        let plan = PerformancePlan { segments: vec![segment(7, vec![-0.01, 0.01])] };
        let (notes, _) = plan.schedule();
        let gap = notes[1].on_tick - notes[0].on_tick;
        assert!(notes[0].off_tick - notes[0].on_tick <= gap + 1);
    }

    #[test]
    fn coincident_onsets_get_one_tick() {
        let plan = PerformancePlan { segments: vec![segment(7, vec![0.0, 0.0])] };
        let (notes, _) = plan.schedule();
        assert_eq!(notes[0].on_tick, notes[1].on_tick);
        assert_eq!(notes[0].off_tick, notes[0].on_tick + 1);
    }

    #[test]
    fn validation() {
        let mut bad = segment(7, vec![-1.0, 1.0]);
        bad.pitches.pop();
        assert!(PerformancePlan { segments: vec![bad] }.validate().is_err());
        let out_of_order = PerformancePlan { segments: vec![segment(11, vec![]), segment(7, vec![])] };
        assert!(out_of_order.validate().is_err());
    }

    #[test]
    fn uniform_rhythm_is_palindromic() {
        let r = uniform_rhythm(7, 10, 5.0);
        assert!(r.palindrome_deviation().unwrap().1 < 1e-12);
    }

    #[test]
    fn number_formatting() {
        assert_eq!(num(-0.0000001), "0.000000");
        assert_eq!(num(0.5), "0.500000");
        assert_eq!(num(-0.25), "-0.250000");
    }
}
