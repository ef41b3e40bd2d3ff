//! Exact arithmetic in F_p and F_{p^k} for odd p, plus the quadratic
//! character used by point counting.

mod character;
mod ext;
mod packed;
pub mod poly;
mod prime;

pub use character::{Backend, QuadraticCharacter, SquareTable, DEFAULT_BITMAP_THRESHOLD};
pub use ext::{find_irreducible, ExtField, FieldElement, MAX_DEGREE};
pub use packed::{Frobenius, GridWalker, Packed, PackedField, PACKED_PRIME_LIMIT};
pub use prime::{is_prime, PrimeField};
