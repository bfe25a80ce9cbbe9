//! Exact (weighted) enumeration of Wang tilings and polyomino tilings.
//!
//! The engine tiles a helicoid (twisted cylinder) one square at a time,
//! keeping the weight of every possible boundary word in a dense state
//! tensor. One placement step is a batch of modular matrix products, so
//! the whole computation runs in machine words modulo a prime. Running
//! the same program for several primes and combining the residues with
//! the Chinese Remainder Theorem recovers the exact count; a halting rule
//! stops as soon as the reconstructed value is stable.
//!
//! Rectangles, punched-out boards, cylinders and tori are compiled down
//! to per-position tile-set programs in [`regions`]. Polyomino tilings
//! are handled by translating shape sets into Wang tile sets
//! ([`polyomino`]); every shipped translation is checked against the
//! brute-force counters in [`oracle`].

pub mod engine;
pub mod modmath;
pub mod oracle;
pub mod polyomino;
pub mod regions;
pub mod tiles;
