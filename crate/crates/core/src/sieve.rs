//! The "dance of primes": a staged sieve of Eratosthenes on a 60×60 grid.
//!
//! Numbers 1..=3600 start in the upper rectangle. Multiples of 2, 3 and 5
//! (other than the primes themselves) begin in the lower one; each later
//! prime p then sends its remaining multiples down. The number 1 never moves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::is_prime;

pub const SIDE: u32 = 60;
pub const CELLS: u32 = SIDE * SIDE;
/// Last prime that gets a musical segment.
pub const LAST_PRIME: u64 = 67;

const WORDS: usize = (CELLS as usize).div_ceil(64);

/// Membership bitset over 1..=3600; bit n−1 stands for n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Membership {
    bits: [u64; WORDS],
}

impl Membership {
    fn empty() -> Self {
        Membership { bits: [0; WORDS] }
    }

    pub fn contains(&self, n: u32) -> bool {
        (1..=CELLS).contains(&n) && self.bits[((n - 1) / 64) as usize] >> ((n - 1) % 64) & 1 == 1
    }

    fn insert(&mut self, n: u32) {
        self.bits[((n - 1) / 64) as usize] |= 1 << ((n - 1) % 64);
    }

    fn remove(&mut self, n: u32) {
        self.bits[((n - 1) / 64) as usize] &= !(1 << ((n - 1) % 64));
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=CELLS).filter(|&n| self.contains(n))
    }

    /// 450 bytes as lowercase hex; byte i holds numbers 8i+1..=8i+8 with the
    /// smallest number in the most significant bit.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(900);
        for byte in 0..(CELLS / 8) {
            let mut b = 0u8;
            for bit in 0..8 {
                if self.contains(byte * 8 + bit + 1) {
                    b |= 0x80 >> bit;
                }
            }
            out.push_str(&format!("{b:02x}"));
        }
        out
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if s.len() != (CELLS / 4) as usize || !s.is_ascii() {
            return None;
        }
        let mut m = Membership::empty();
        for byte in 0..(CELLS / 8) as usize {
            let b = u8::from_str_radix(&s[2 * byte..2 * byte + 2], 16).ok()?;
            for bit in 0..8 {
                if b & (0x80 >> bit) != 0 {
                    m.insert(byte as u32 * 8 + bit + 1);
                }
            }
        }
        Some(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveState {
    upper: Membership,
    processed: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SieveEvent {
    pub p: u64,
    pub descending: Vec<u32>,
}

impl SieveState {
    pub fn upper(&self) -> &Membership {
        &self.upper
    }

    /// Complement of the upper set within 1..=3600.
    pub fn lower(&self) -> Membership {
        let mut lower = Membership::empty();
        for n in 1..=CELLS {
            if !self.upper.contains(n) {
                lower.insert(n);
            }
        }
        lower
    }

    pub fn processed(&self) -> &[u64] {
        &self.processed
    }

    /// The prime that [`step`] expects next.
    pub fn next_prime(&self) -> u64 {
        let last = *self.processed.last().expect("2, 3, 5 are always processed");
        (last + 1..).find(|&n| is_prime(n)).expect("primes are unbounded")
    }

    /// Multiples of p still upstairs, p itself excluded.
    pub fn descending_for(&self, p: u64) -> Vec<u32> {
        if p < 2 || p > CELLS as u64 {
            return Vec::new();
        }
        let p = p as u32;
        (2 * p..=CELLS).step_by(p as usize).filter(|&m| self.upper.contains(m)).collect()
    }

    /// Every lower number's multiples are lower too.
    pub fn lower_is_multiplicatively_stable(&self) -> bool {
        let lower = self.lower();
        let stable = lower.iter().all(|n| (2..=CELLS / n).all(|k| lower.contains(k * n)));
        stable
    }
}

/// Multiples of 2, 3 or 5 other than 2, 3, 5 start downstairs.
pub fn initial_state() -> SieveState {
    let mut upper = Membership::empty();
    for n in 1..=CELLS {
        let composite_of_small = [2, 3, 5].iter().any(|&d| n % d == 0 && n != d);
        if !composite_of_small {
            upper.insert(n);
        }
    }
    SieveState { upper, processed: vec![2, 3, 5] }
}

pub fn step(state: &SieveState, p: u64) -> Result<(SieveState, SieveEvent)> {
    let expected = state.next_prime();
    if p != expected {
        return Err(Error::SieveOrder { expected, got: p });
    }
    let descending = state.descending_for(p);
    let mut next = state.clone();
    for &m in &descending {
        next.upper.remove(m);
    }
    next.processed.push(p);
    Ok((next, SieveEvent { p, descending }))
}

/// Steps through every prime 7..=67; 61 and 67 yield empty events.
pub fn run_all() -> (SieveState, Vec<SieveEvent>) {
    let mut state = initial_state();
    let mut events = Vec::new();
    loop {
        let p = state.next_prime();
        if p > LAST_PRIME {
            break;
        }
        let (next, event) = step(&state, p).expect("primes are taken in order");
        state = next;
        events.push(event);
    }
    (state, events)
}

/// All intermediate states: `states[0]` is the initial one, `states[i + 1]`
/// follows `events[i]`.
pub fn run_all_with_states() -> (Vec<SieveState>, Vec<SieveEvent>) {
    let mut states = vec![initial_state()];
    let mut events = Vec::new();
    loop {
        let current = states.last().expect("nonempty");
        let p = current.next_prime();
        if p > LAST_PRIME {
            break;
        }
        let (next, event) = step(current, p).expect("primes are taken in order");
        states.push(next);
        events.push(event);
    }
    (states, events)
}

/// 1-based (row, column) with 1 at the top left and 60 at the top right.
pub fn grid_coords(n: u32) -> Result<(u32, u32)> {
    if !(1..=CELLS).contains(&n) {
        return Err(Error::OffGrid(n));
    }
    let row = n.div_ceil(SIDE);
    Ok((row, n - SIDE * (row - 1)))
}
