//! Modular arithmetic support for exact enumeration.
//!
//! The engine computes residues of the wanted count modulo a sequence of
//! large primes. This module owns everything around that: selecting the
//! largest primes that cannot overflow the engine's machine words
//! ([`prime_upper_bound`], [`primes_descending`]), folding per-prime
//! residues into a single congruence class ([`CongruenceAccumulator`]),
//! reading the exact integer back out of it, and deciding when to stop
//! (`τ` consecutive identical reconstructions).
//!
//! Arbitrary-precision integers live only here; the contraction engine
//! itself works in machine words.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::tiles::TileSetStats;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModMathError {
    #[error("prime {0} already divides the accumulated modulus")]
    DuplicatePrime(u64),
    #[error("residue {r} is not reduced modulo {p}")]
    ResidueOutOfRange { p: u64, r: u64 },
    #[error("tile set has no entries; nothing to enumerate")]
    EmptyTileSet,
    #[error("word width {0} is not supported (use 32 or 64)")]
    BadWordBits(u32),
    #[error("only {found} primes exist at or below {start}, need {want}")]
    NotEnoughPrimes { start: u64, want: usize, found: usize },
    #[error("invalid bounds: lower must be below upper")]
    BadBounds,
}

/// Extended Euclidean algorithm: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    (old_r, old_s, old_t)
}

/// Target range for the reconstructed count. The default `[0, ∞)` relies
/// on the halting rule alone.
#[derive(Debug, Clone)]
pub struct Bounds {
    lower: BigUint,
    upper: Option<BigUint>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { lower: BigUint::zero(), upper: None }
    }
}

impl Bounds {
    pub fn new(lower: BigUint, upper: Option<BigUint>) -> Result<Self, ModMathError> {
        if let Some(u) = &upper {
            if &lower >= u {
                return Err(ModMathError::BadBounds);
            }
        }
        Ok(Bounds { lower, upper })
    }

    pub fn lower(&self) -> &BigUint {
        &self.lower
    }

    pub fn upper(&self) -> Option<&BigUint> {
        self.upper.as_ref()
    }
}

/// Running congruence class `R (mod P)` plus the halting bookkeeping.
///
/// Invariants: `0 <= R < P`, and `P` is the product of every prime folded
/// in so far (`P = 1`, `R = 0` before the first combine).
#[derive(Debug, Clone)]
pub struct CongruenceAccumulator {
    residue: BigUint,
    modulus: BigUint,
    stable_rounds: u32,
    last_value: Option<BigUint>,
}

impl Default for CongruenceAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl CongruenceAccumulator {
    pub fn new() -> Self {
        CongruenceAccumulator {
            residue: BigUint::zero(),
            modulus: BigUint::one(),
            stable_rounds: 0,
            last_value: None,
        }
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn stable_rounds(&self) -> u32 {
        self.stable_rounds
    }

    pub fn last_value(&self) -> Option<&BigUint> {
        self.last_value.as_ref()
    }

    /// Folds `N ≡ r (mod p)` into the accumulator.
    ///
    /// Afterwards the residue satisfies both the old congruence and the
    /// new one, and the modulus is `p * P`. Rejects primes that already
    /// divide `P`.
    pub fn combine(&mut self, p: u64, r: u64) -> Result<(), ModMathError> {
        if r >= p {
            return Err(ModMathError::ResidueOutOfRange { p, r });
        }
        let big_p = BigUint::from(p);
        if (&self.modulus % &big_p).is_zero() {
            return Err(ModMathError::DuplicatePrime(p));
        }
        // Bezout pair for (p, P): p*a + P*b = 1, so b*P ≡ 1 (mod p) and
        // a*p ≡ 1 (mod P).
        let p_int = BigInt::from(p);
        let cap_p = BigInt::from_biguint(Sign::Plus, self.modulus.clone());
        let (g, a, b) = extended_gcd(&p_int, &cap_p);
        debug_assert!(g.is_one());
        let new_modulus = &p_int * &cap_p;
        let r_int = BigInt::from(r);
        let old_r = BigInt::from_biguint(Sign::Plus, self.residue.clone());
        // R' = (P^- P r + p^- p R) mod pP with P^- = b, p^- = a.
        let mut combined = (&b * &cap_p * &r_int + &a * &p_int * &old_r) % &new_modulus;
        if combined.is_negative() {
            combined += &new_modulus;
        }
        self.residue = combined.to_biguint().expect("normalized to [0, pP)");
        self.modulus = new_modulus.to_biguint().expect("product of positives");
        Ok(())
    }

    /// `N = lower + ((R - lower) mod P)`, the unique member of the class
    /// at or above the lower bound.
    pub fn reconstruct(&self, bounds: &Bounds) -> BigUint {
        let p = &self.modulus;
        let r = &self.residue % p;
        let low = bounds.lower() % p;
        let diff = if r >= low { r - low } else { p - low + r };
        bounds.lower() + diff
    }

    /// Records one reconstruction round and reports whether the halting
    /// rule fired: the same value observed `tau` rounds in a row.
    pub fn halting_update(&mut self, bounds: &Bounds, tau: u32) -> bool {
        let value = self.reconstruct(bounds);
        match &self.last_value {
            Some(prev) if *prev == value => self.stable_rounds += 1,
            _ => {
                self.stable_rounds = 1;
                self.last_value = Some(value);
            }
        }
        self.halted(tau)
    }

    pub fn halted(&self, tau: u32) -> bool {
        self.stable_rounds >= tau
    }
}

/// Deterministic Miller-Rabin for u64 (the listed bases cover the full
/// 64-bit range).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The `count` largest primes at or below `start`, in descending order.
pub fn primes_descending(start: u64, count: usize) -> Result<Vec<u64>, ModMathError> {
    let mut primes = Vec::with_capacity(count);
    let mut n = start;
    while primes.len() < count {
        if n < 2 {
            return Err(ModMathError::NotEnoughPrimes {
                start,
                want: count,
                found: primes.len(),
            });
        }
        if is_prime(n) {
            primes.push(n);
        }
        n -= 1;
    }
    Ok(primes)
}

/// Largest admissible prime bound for the given column statistics.
///
/// Non-negative tile sets: `(p-1) * S_col` must fit in an unsigned word,
/// so `p̄ = floor((2^w - 1) / S_col) + 1`. Signed sets bound both
/// directions of a signed word: `p̄ = floor(min((2^(w-1) - 1)/S⁺,
/// -2^(w-1)/S⁻)) + 1` (an empty sign class contributes no constraint).
pub fn prime_upper_bound(stats: &TileSetStats, word_bits: u32) -> Result<u128, ModMathError> {
    if word_bits != 32 && word_bits != 64 {
        return Err(ModMathError::BadWordBits(word_bits));
    }
    let w = word_bits;
    if !stats.has_negative() {
        let s = stats.s_col();
        if s == 0 {
            return Err(ModMathError::EmptyTileSet);
        }
        let max_word: u128 = (1u128 << w) - 1;
        Ok(max_word / s as u128 + 1)
    } else {
        let max_pos: u128 = (1u128 << (w - 1)) - 1;
        let min_mag: u128 = 1u128 << (w - 1);
        let pos_bound = if stats.s_pos_col() > 0 {
            Some(max_pos / stats.s_pos_col() as u128)
        } else {
            None
        };
        let neg_bound = if stats.s_neg_col() < 0 {
            Some(min_mag / stats.s_neg_col().unsigned_abs() as u128)
        } else {
            None
        };
        match (pos_bound, neg_bound) {
            (None, None) => Err(ModMathError::EmptyTileSet),
            (Some(b), None) | (None, Some(b)) => Ok(b + 1),
            (Some(b1), Some(b2)) => Ok(b1.min(b2) + 1),
        }
    }
}

/// Prime schedule for one enumeration: the admissible upper bound and the
/// descending primes selected under it.
#[derive(Debug, Clone)]
pub struct PrimePlan {
    upper_bound: u128,
    primes: Vec<u64>,
    signed: bool,
    word_bits: u32,
}

impl PrimePlan {
    pub fn new(stats: &TileSetStats, word_bits: u32, count: usize) -> Result<Self, ModMathError> {
        let upper_bound = prime_upper_bound(stats, word_bits)?;
        let start = u64::try_from(upper_bound).unwrap_or(u64::MAX);
        let primes = primes_descending(start, count)?;
        Ok(PrimePlan {
            upper_bound,
            primes,
            signed: stats.has_negative(),
            word_bits,
        })
    }

    /// Assembles a plan from explicit parts. Every prime must respect
    /// the upper bound; intended for capped or rigged schedules.
    pub fn from_parts(upper_bound: u128, primes: Vec<u64>, signed: bool, word_bits: u32) -> Self {
        debug_assert!(primes.iter().all(|&p| (p as u128) <= upper_bound));
        PrimePlan { upper_bound, primes, signed, word_bits }
    }

    pub fn upper_bound(&self) -> u128 {
        self.upper_bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn signed(&self) -> bool {
        self.signed
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::TileSetStats;

    fn acc_from(pairs: &[(u64, u64)]) -> CongruenceAccumulator {
        let mut acc = CongruenceAccumulator::new();
        for &(p, r) in pairs {
            acc.combine(p, r).unwrap();
        }
        acc
    }

    #[test]
    fn extended_gcd_small() {
        let (g, x, y) = extended_gcd(&BigInt::from(3), &BigInt::from(5));
        assert_eq!((g, x, y), (BigInt::from(1), BigInt::from(2), BigInt::from(-1)));
        let (g, x, y) = extended_gcd(&BigInt::from(1), &BigInt::from(7));
        assert_eq!((g, x, y), (BigInt::from(1), BigInt::from(1), BigInt::from(0)));
    }

    #[test]
    fn extended_gcd_large_bezout() {
        // Coprime pair from the engine's typical prime range; verify the
        // Bezout identity by substitution in arbitrary precision.
        let a = BigInt::from(1431655751u64);
        let b = BigInt::from(1431655747u64) * BigInt::from(1431655739u64);
        let (g, x, y) = extended_gcd(&a, &b);
        assert_eq!(g, BigInt::one());
        assert_eq!(&a * &x + &b * &y, BigInt::one());
    }

    #[test]
    fn combine_first_prime() {
        let acc = acc_from(&[(3, 1)]);
        assert_eq!(acc.residue(), &BigUint::from(1u32));
        assert_eq!(acc.modulus(), &BigUint::from(3u32));
    }

    #[test]
    fn combine_two_primes() {
        let acc = acc_from(&[(3, 1), (5, 2)]);
        // 7 is the unique value below 15 with 7 ≡ 1 (mod 3), 7 ≡ 2 (mod 5).
        assert_eq!(acc.residue(), &BigUint::from(7u32));
        assert_eq!(acc.modulus(), &BigUint::from(15u32));
    }

    #[test]
    fn combine_third_prime_matches_brute_force() {
        let acc = acc_from(&[(3, 1), (5, 2), (7, 0)]);
        // Brute-force scan of 0..104 for x ≡ 7 (mod 15), x ≡ 0 (mod 7).
        let expect = (0u32..105).find(|x| x % 15 == 7 && x % 7 == 0).unwrap();
        assert_eq!(expect, 7);
        assert_eq!(acc.residue(), &BigUint::from(expect));
        assert_eq!(acc.modulus(), &BigUint::from(105u32));
    }

    #[test]
    fn combine_rejects_duplicate_prime() {
        let mut acc = acc_from(&[(3, 1)]);
        assert_eq!(acc.combine(3, 2), Err(ModMathError::DuplicatePrime(3)));
    }

    #[test]
    fn combine_rejects_unreduced_residue() {
        let mut acc = CongruenceAccumulator::new();
        assert_eq!(
            acc.combine(5, 7),
            Err(ModMathError::ResidueOutOfRange { p: 5, r: 7 })
        );
    }

    #[test]
    fn reconstruct_examples() {
        let acc = acc_from(&[(3, 1), (5, 2)]);
        assert_eq!(acc.reconstruct(&Bounds::default()), BigUint::from(7u32));
        let bounds = Bounds::new(BigUint::from(10u32), Some(BigUint::from(20u32))).unwrap();
        // 10 + ((7 - 10) mod 15) = 10 + 12 = 22.
        assert_eq!(acc.reconstruct(&bounds), BigUint::from(22u32));
        let empty = CongruenceAccumulator::new();
        assert_eq!(empty.reconstruct(&Bounds::default()), BigUint::zero());
    }

    #[test]
    fn bounds_reject_inverted_range() {
        assert!(Bounds::new(BigUint::from(5u32), Some(BigUint::from(5u32))).is_err());
    }

    #[test]
    fn halting_two_identical_rounds() {
        let bounds = Bounds::default();
        let mut acc = CongruenceAccumulator::new();
        acc.combine(101, 42).unwrap();
        assert!(!acc.halting_update(&bounds, 2));
        acc.combine(103, 42).unwrap();
        assert!(acc.halting_update(&bounds, 2));
        assert_eq!(acc.stable_rounds(), 2);
        assert_eq!(acc.last_value(), Some(&BigUint::from(42u32)));
    }

    #[test]
    fn halting_requires_consecutive_stability() {
        // Reconstructions 42, 143, 143 with tau = 3 must not halt: the
        // value changed once, so only two stable rounds accumulated.
        let bounds = Bounds::default();
        let mut acc = CongruenceAccumulator::new();
        acc.combine(101, 42).unwrap();
        assert!(!acc.halting_update(&bounds, 3));
        assert_eq!(acc.reconstruct(&bounds), BigUint::from(42u32));
        acc.combine(103, 143 % 103).unwrap();
        assert!(!acc.halting_update(&bounds, 3));
        assert_eq!(acc.reconstruct(&bounds), BigUint::from(143u32));
        acc.combine(107, 143 % 107).unwrap();
        assert!(!acc.halting_update(&bounds, 3));
        assert_eq!(acc.reconstruct(&bounds), BigUint::from(143u32));
        assert_eq!(acc.stable_rounds(), 2);
    }

    #[test]
    fn halting_zero_count() {
        // A true count of zero leaves r = 0 for every prime and halts
        // after exactly tau rounds with N = 0.
        let bounds = Bounds::default();
        let tau = 2;
        let mut acc = CongruenceAccumulator::new();
        let mut rounds = 0;
        for &p in &[97u64, 89, 83, 79] {
            acc.combine(p, 0).unwrap();
            rounds += 1;
            if acc.halting_update(&bounds, tau) {
                break;
            }
        }
        assert_eq!(rounds, tau);
        assert_eq!(acc.reconstruct(&bounds), BigUint::zero());
    }

    #[test]
    fn crt_matches_brute_force_scan() {
        // Full-system check against a brute-force scan over [0, P).
        let primes = [7u64, 11, 13, 17];
        let n = 83_311u64;
        let mut acc = CongruenceAccumulator::new();
        for &p in &primes {
            acc.combine(p, n % p).unwrap();
        }
        let product: u64 = primes.iter().product();
        assert!(product <= 1_000_000);
        let expect = (0..product).find(|x| primes.iter().all(|&p| x % p == n % p));
        assert_eq!(expect, Some(n % product));
        assert_eq!(acc.reconstruct(&Bounds::default()), BigUint::from(n % product));
    }

    #[test]
    fn crt_order_independent() {
        let pairs = [(101u64, 17u64), (97, 5), (89, 88), (83, 0), (79, 41)];
        let reference = acc_from(&pairs);
        let mut rotated = pairs;
        rotated.rotate_left(2);
        let other = acc_from(&rotated);
        assert_eq!(reference.residue(), other.residue());
        assert_eq!(reference.modulus(), other.modulus());
    }

    #[test]
    fn halting_misjudgment_bound() {
        // Feed residues of a known N; once the halting rule fires, if N is
        // below the product of the last tau primes the result must be N.
        let tau = 2u32;
        let n = BigUint::from(987_654u32);
        let primes = primes_descending(2000, 8).unwrap();
        let bounds = Bounds::default();
        let mut acc = CongruenceAccumulator::new();
        let mut used = Vec::new();
        for &p in &primes {
            let r = (&n % p).try_into().unwrap();
            acc.combine(p, r).unwrap();
            used.push(p);
            if acc.halting_update(&bounds, tau) {
                break;
            }
        }
        assert!(acc.halted(tau), "halting never fired");
        let tail: BigUint = used.iter().rev().take(tau as usize).product::<u64>().into();
        if n < tail {
            assert_eq!(acc.reconstruct(&bounds), n);
        }
    }

    #[test]
    fn primes_descending_small() {
        assert_eq!(primes_descending(10, 4).unwrap(), vec![7, 5, 3, 2]);
        assert_eq!(primes_descending(100, 2).unwrap(), vec![97, 89]);
        assert!(matches!(
            primes_descending(10, 5),
            Err(ModMathError::NotEnoughPrimes { found: 4, .. })
        ));
    }

    #[test]
    fn primes_descending_engine_range() {
        assert_eq!(
            primes_descending(1_431_655_765, 3).unwrap(),
            vec![1_431_655_751, 1_431_655_747, 1_431_655_739]
        );
    }

    #[test]
    fn upper_bound_nonnegative() {
        let stats = TileSetStats::from_parts(3, 0, false);
        // floor((2^32 - 1) / 3) = 1431655765; searching from the bound
        // downward must land on the engine's standard prime run.
        let bound = prime_upper_bound(&stats, 32).unwrap();
        assert_eq!(bound, 1_431_655_766);
        assert_eq!((bound - 1) * 3, (1u128 << 32) - 1);
        let primes = primes_descending(bound as u64, 3).unwrap();
        assert_eq!(primes, vec![1_431_655_751, 1_431_655_747, 1_431_655_739]);
    }

    #[test]
    fn upper_bound_unit_column() {
        let stats = TileSetStats::from_parts(1, 0, false);
        assert_eq!(prime_upper_bound(&stats, 32).unwrap(), 1u128 << 32);
    }

    #[test]
    fn upper_bound_signed() {
        let stats = TileSetStats::from_parts(5, -2, true);
        let bound = prime_upper_bound(&stats, 32).unwrap();
        assert_eq!(bound, ((1u128 << 31) - 1) / 5 + 1);
        assert!((bound - 1) * 5 <= (1 << 31) - 1);
        assert!((bound - 1) * 2 <= 1 << 31);
        // A missing negative class leaves only the positive constraint.
        let stats = TileSetStats::from_parts(5, 0, true);
        assert_eq!(prime_upper_bound(&stats, 32).unwrap(), ((1u128 << 31) - 1) / 5 + 1);
    }

    #[test]
    fn upper_bound_rejects_empty_and_bad_width() {
        let stats = TileSetStats::from_parts(0, 0, false);
        assert_eq!(prime_upper_bound(&stats, 32), Err(ModMathError::EmptyTileSet));
        let stats = TileSetStats::from_parts(1, 0, false);
        assert_eq!(prime_upper_bound(&stats, 48), Err(ModMathError::BadWordBits(48)));
    }

    #[test]
    fn bound_never_overflows_word() {
        for s in 1u64..200 {
            let stats = TileSetStats::from_parts(s, 0, false);
            for &w in &[32u32, 64] {
                let bound = prime_upper_bound(&stats, w).unwrap();
                let max_word = if w == 32 { (1u128 << 32) - 1 } else { u128::from(u64::MAX) };
                assert!((bound - 1) * s as u128 <= max_word);
                assert!(bound * s as u128 > max_word);
            }
        }
    }
}
