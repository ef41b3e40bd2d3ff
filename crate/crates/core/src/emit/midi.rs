//! Standard MIDI File writer and reader.
//!
//! Files are format 1 with a single track, 480 ticks per quarter and one
//! tempo event of 500000 µs per quarter, so 960 ticks make a second.
//! Tempo changes are never emitted: acceleration lives in the tick
//! positions themselves.

use super::PerformancePlan;
use crate::error::{Error, Result};

pub const DIVISION: u16 = 480;
pub const TEMPO_US_PER_QUARTER: u32 = 500_000;
pub const VELOCITY: u8 = 80;

pub fn write_vlq(out: &mut Vec<u8>, mut value: u32) {
    let mut buf = [0u8; 5];
    let mut i = buf.len() - 1;
    buf[i] = (value & 0x7f) as u8;
    value >>= 7;
    while value > 0 {
        i -= 1;
        buf[i] = (value & 0x7f) as u8 | 0x80;
        value >>= 7;
    }
    out.extend_from_slice(&buf[i..]);
}

pub fn read_vlq(data: &[u8], pos: &mut usize) -> Result<u32> {
    let mut value: u32 = 0;
    for _ in 0..4 {
        let byte = *data.get(*pos).ok_or_else(|| Error::Midi("truncated variable-length quantity".into()))?;
        *pos += 1;
        value = (value << 7) | (byte & 0x7f) as u32;
        if byte & 0x80 == 0 {
            return Ok(value);
        }
    }
    Err(Error::Midi("variable-length quantity longer than 4 bytes".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventKind {
    NoteOn { channel: u8, key: u8, velocity: u8 },
    NoteOff { channel: u8, key: u8, velocity: u8 },
    Tempo(u32),
    Marker(String),
    TrackName(String),
    EndOfTrack,
    OtherMeta(u8, Vec<u8>),
    OtherChannel(u8, Vec<u8>),
    SysEx(Vec<u8>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackEvent {
    /// Absolute tick.
    pub tick: u32,
    pub kind: EventKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smf {
    pub format: u16,
    pub division: u16,
    pub tracks: Vec<Vec<TrackEvent>>,
}

/// (tick, pitch, is_note_on) triples across all tracks, in file order.
/// A note-on with velocity 0 counts as a note-off.
pub fn note_events(smf: &Smf) -> Vec<(u32, u8, bool)> {
    smf.tracks
        .iter()
        .flatten()
        .filter_map(|e| match e.kind {
            EventKind::NoteOn { key, velocity, .. } => Some((e.tick, key, velocity > 0)),
            EventKind::NoteOff { key, .. } => Some((e.tick, key, false)),
            _ => None,
        })
        .collect()
}

/// The note events a plan should produce, sorted the way the writer sorts them.
pub fn expected_note_events(plan: &PerformancePlan) -> Vec<(u32, u8, bool)> {
    let mut events = Vec::new();
    let (notes, _) = plan.schedule();
    for n in notes {
        events.push((n.on_tick, 2u8, n.pitch, true));
        events.push((n.off_tick, 0u8, n.pitch, false));
    }
    events.sort_by_key(|&(tick, order, pitch, _)| (tick, order, pitch));
    events.into_iter().map(|(t, _, p, on)| (t, p, on)).collect()
}

pub fn write_midi(plan: &PerformancePlan) -> Result<Vec<u8>> {
    plan.validate()?;
    let (notes, timings) = plan.schedule();

    // (tick, order, key, bytes); order puts note-offs before markers before note-ons
    let mut events: Vec<(u32, u8, u8, Vec<u8>)> = Vec::new();
    for t in &timings {
        let text = format!("p={}", t.p);
        let mut bytes = vec![0xff, 0x06];
        write_vlq(&mut bytes, text.len() as u32);
        bytes.extend_from_slice(text.as_bytes());
        events.push((t.start_tick, 1, 0, bytes));
    }
    for n in &notes {
        events.push((n.on_tick, 2, n.pitch, vec![0x90, n.pitch, VELOCITY]));
        events.push((n.off_tick, 0, n.pitch, vec![0x80, n.pitch, 0]));
    }
    events.sort_by_key(|e| (e.0, e.1, e.2));

    let mut track = Vec::new();
    // tempo at tick 0
    track.extend_from_slice(&[0x00, 0xff, 0x51, 0x03]);
    track.extend_from_slice(&TEMPO_US_PER_QUARTER.to_be_bytes()[1..]);
    let mut last = 0u32;
    for (tick, _, _, bytes) in &events {
        write_vlq(&mut track, tick - last);
        track.extend_from_slice(bytes);
        last = *tick;
    }
    track.extend_from_slice(&[0x00, 0xff, 0x2f, 0x00]);

    let mut out = Vec::with_capacity(22 + track.len());
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&1u16.to_be_bytes());
    out.extend_from_slice(&1u16.to_be_bytes());
    out.extend_from_slice(&DIVISION.to_be_bytes());
    out.extend_from_slice(b"MTrk");
    out.extend_from_slice(&(track.len() as u32).to_be_bytes());
    out.extend_from_slice(&track);
    Ok(out)
}

fn take<'a>(data: &'a [u8], pos: &mut usize, n: usize) -> Result<&'a [u8]> {
    let end = pos.checked_add(n).filter(|&e| e <= data.len()).ok_or_else(|| Error::Midi("truncated chunk".into()))?;
    let slice = &data[*pos..end];
    *pos = end;
    Ok(slice)
}

fn be_u32(b: &[u8]) -> u32 {
    u32::from_be_bytes([b[0], b[1], b[2], b[3]])
}

fn be_u16(b: &[u8]) -> u16 {
    u16::from_be_bytes([b[0], b[1]])
}

pub fn read_midi(data: &[u8]) -> Result<Smf> {
    let mut pos = 0;
    if take(data, &mut pos, 4)? != b"MThd" {
        return Err(Error::Midi("missing MThd".into()));
    }
    let header_len = be_u32(take(data, &mut pos, 4)?) as usize;
    if header_len < 6 {
        return Err(Error::Midi("short header".into()));
    }
    let header = take(data, &mut pos, header_len)?;
    let format = be_u16(&header[0..2]);
    let ntrks = be_u16(&header[2..4]);
    let division = be_u16(&header[4..6]);

    let mut tracks = Vec::with_capacity(ntrks as usize);
    while tracks.len() < ntrks as usize {
        let id = take(data, &mut pos, 4)?;
        let len = be_u32(take(data, &mut pos, 4)?) as usize;
        let body = take(data, &mut pos, len)?;
        if id == b"MTrk" {
            tracks.push(parse_track(body)?);
        }
    }
    Ok(Smf { format, division, tracks })
}

fn parse_track(body: &[u8]) -> Result<Vec<TrackEvent>> {
    let mut pos = 0;
    let mut tick = 0u32;
    let mut running: Option<u8> = None;
    let mut events = Vec::new();
    while pos < body.len() {
        tick = tick.checked_add(read_vlq(body, &mut pos)?).ok_or_else(|| Error::Midi("tick overflow".into()))?;
        let first = *body.get(pos).ok_or_else(|| Error::Midi("missing status".into()))?;
        let kind = match first {
            0xff => {
                pos += 1;
                let ty = take(body, &mut pos, 1)?[0];
                let len = read_vlq(body, &mut pos)? as usize;
                let payload = take(body, &mut pos, len)?;
                match ty {
                    0x51 if len == 3 => EventKind::Tempo(u32::from_be_bytes([0, payload[0], payload[1], payload[2]])),
                    0x06 => EventKind::Marker(String::from_utf8_lossy(payload).into_owned()),
                    0x03 => EventKind::TrackName(String::from_utf8_lossy(payload).into_owned()),
                    0x2f => EventKind::EndOfTrack,
                    _ => EventKind::OtherMeta(ty, payload.to_vec()),
                }
            }
            0xf0 | 0xf7 => {
                pos += 1;
                let len = read_vlq(body, &mut pos)? as usize;
                EventKind::SysEx(take(body, &mut pos, len)?.to_vec())
            }
            _ => {
                let status = if first & 0x80 != 0 {
                    pos += 1;
                    running = Some(first);
                    first
                } else {
                    running.ok_or_else(|| Error::Midi("data byte without running status".into()))?
                };
                let n_data = match status & 0xf0 {
                    0xc0 | 0xd0 => 1,
                    _ => 2,
                };
                let d = take(body, &mut pos, n_data)?;
                let channel = status & 0x0f;
                match status & 0xf0 {
                    0x90 => EventKind::NoteOn { channel, key: d[0], velocity: d[1] },
                    0x80 => EventKind::NoteOff { channel, key: d[0], velocity: d[1] },
                    _ => EventKind::OtherChannel(status, d.to_vec()),
                }
            }
        };
        let end = kind == EventKind::EndOfTrack;
        events.push(TrackEvent { tick, kind });
        if end {
            break;
        }
    }
    Ok(events)
}
