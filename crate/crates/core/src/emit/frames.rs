//! Sieve choreography as SVG frames plus a JSON manifest.
//!
//! Each event yields three frames: before, with the descending cells
//! highlighted, and after. The upper 60×60 grid sits above the lower one.

use std::fmt::Write;

use serde::Serialize;

use super::SegmentTiming;
use crate::error::{Error, Result};
use crate::sieve::{grid_coords, Membership, SieveEvent, SieveState, CELLS, SIDE};

pub const CELL: u32 = 10;
pub const GAP: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Before,
    Highlight,
    After,
}

impl Stage {
    fn tag(self) -> &'static str {
        match self {
            Stage::Before => "a-before",
            Stage::Highlight => "b-descend",
            Stage::After => "c-after",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub file: String,
    pub p: u64,
    pub stage: Stage,
    pub upper: Membership,
    /// Upper cells drawn in the highlight colour.
    pub highlight: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifestSegment {
    pub p: u64,
    pub start_tick: u32,
    pub end_tick: u32,
    pub frames: Vec<String>,
    pub onsets: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub frames: Vec<String>,
    pub segments: Vec<ManifestSegment>,
}

/// Frame list for `states` (as from `run_all_with_states`) and its events.
pub fn sieve_frames(states: &[SieveState], events: &[SieveEvent]) -> Vec<Frame> {
    let mut frames = Vec::with_capacity(3 * events.len());
    for (i, e) in events.iter().enumerate() {
        let before = &states[i];
        let after = &states[i + 1];
        let mut push = |stage: Stage, upper: &Membership, highlight: Vec<u32>| {
            frames.push(Frame {
                file: format!("sieve-{:02}-p{}-{}.svg", i + 1, e.p, stage.tag()),
                p: e.p,
                stage,
                upper: upper.clone(),
                highlight,
            });
        };
        push(Stage::Before, before.upper(), Vec::new());
        push(Stage::Highlight, before.upper(), e.descending.clone());
        push(Stage::After, after.upper(), Vec::new());
    }
    frames
}

fn cell_origin(n: u32, lower: bool) -> (u32, u32) {
    let (row, col) = grid_coords(n).expect("cell on grid");
    let y_base = if lower { SIDE * CELL + GAP } else { 0 };
    ((col - 1) * CELL, y_base + (row - 1) * CELL)
}

fn cell_path(cells: impl Iterator<Item = (u32, u32)>) -> String {
    let mut d = String::new();
    for (x, y) in cells {
        let _ = write!(d, "M{x} {y}h{CELL}v{CELL}h-{CELL}z");
    }
    d
}

pub fn render_frame(frame: &Frame) -> String {
    let width = SIDE * CELL;
    let height = 2 * SIDE * CELL + GAP;
    let up = frame.upper.iter().filter(|n| !frame.highlight.contains(n)).map(|n| cell_origin(n, false));
    let hl = frame.highlight.iter().map(|&n| cell_origin(n, false));
    let down = (1..=CELLS).filter(|&n| !frame.upper.contains(n)).map(|n| cell_origin(n, true));

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {width} {height}\" width=\"{width}\" height=\"{height}\">"
    );
    let _ = writeln!(s, "<title>p = {} ({:?})</title>", frame.p, frame.stage);
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<rect class=\"grid\" x=\"0\" y=\"0\" width=\"{width}\" height=\"{}\" fill=\"none\" stroke=\"#ccc\"/>",
        SIDE * CELL
    );
    let _ = writeln!(
        s,
        "<rect class=\"grid\" x=\"0\" y=\"{}\" width=\"{width}\" height=\"{}\" fill=\"none\" stroke=\"#ccc\"/>",
        SIDE * CELL + GAP,
        SIDE * CELL
    );
    let _ = writeln!(s, "<path class=\"up\" fill=\"#246\" d=\"{}\"/>", cell_path(up));
    let _ = writeln!(s, "<path class=\"hl\" fill=\"#e80\" d=\"{}\"/>", cell_path(hl));
    let _ = writeln!(s, "<path class=\"down\" fill=\"#999\" d=\"{}\"/>", cell_path(down));
    s.push_str("</svg>\n");
    s
}

/// Frames as (file name, SVG) pairs plus the manifest. `timings` gives the
/// music segment for each event, matched by prime.
pub fn write_sieve_frames(
    states: &[SieveState],
    events: &[SieveEvent],
    timings: &[SegmentTiming],
) -> Result<(Vec<(String, String)>, Manifest)> {
    if states.len() != events.len() + 1 {
        return Err(Error::Config(format!("{} states for {} events", states.len(), events.len())));
    }
    let frames = sieve_frames(states, events);
    let mut segments = Vec::with_capacity(events.len());
    for e in events {
        let t = timings
            .iter()
            .find(|t| t.p == e.p)
            .ok_or_else(|| Error::Config(format!("no music segment for sieve prime {}", e.p)))?;
        segments.push(ManifestSegment {
            p: e.p,
            start_tick: t.start_tick,
            end_tick: t.end_tick,
            frames: frames.iter().filter(|f| f.p == e.p).map(|f| f.file.clone()).collect(),
            onsets: t.onsets.clone(),
        });
    }
    let manifest = Manifest { frames: frames.iter().map(|f| f.file.clone()).collect(), segments };
    let docs = frames.iter().map(|f| (f.file.clone(), render_frame(f))).collect();
    Ok((docs, manifest))
}
