//! Motivic rhythms from hyperelliptic curves over finite fields.
//!
//! A curve y² = P(x) reduced modulo a prime p has an L-polynomial whose
//! 2g zeros lie on the circle |z| = p^{−1/2}. Their arguments, read as
//! times within a period of length 2π / log p, form a palindromic rhythm.
//! The crate computes those rhythms from exact point counts, pairs them with
//! a pitch line derived from the continued fraction of 6·log₂ p, stages the
//! sieve of Eratosthenes on a 60×60 grid, and writes MIDI, SVG and JSON.
//!
//! ```
//! use motivic::curves::{catalog_curve, CountOptions};
//! use motivic::rhythm::{rhythm_of, Tolerances};
//! use motivic::suite::compute_lpoly;
//!
//! let c1 = catalog_curve("C1").unwrap();
//! let (l, _) = compute_lpoly(&c1, 7, CountOptions::default(), &Tolerances::default()).unwrap();
//! assert_eq!(l.coeffs[10], 7i64.pow(5));
//! let rhythm = rhythm_of(&l, &Tolerances::default()).unwrap();
//! assert_eq!(rhythm.alphas.len(), 10);
//! ```

pub mod cache;
pub mod config;
pub mod curves;
pub mod emit;
pub mod error;
pub mod field;
pub mod rhythm;
pub mod score;
pub mod sieve;
pub mod suite;
pub mod zeta;

pub use error::{Error, Result};
