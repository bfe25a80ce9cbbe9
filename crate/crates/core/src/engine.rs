//! Helicoid contraction engine.
//!
//! The state tensor holds, modulo a prime, the weight of every boundary
//! word `(alpha, a_1..a_l)` of a width-`l` helicoid edge. Placing one tile
//! contracts the two leading indices against the tile tensor and rotates
//! the fresh bottom character to the end of the word. Laid out flat, one
//! placement is `sigma` matrix products `(sigma^(l-1) x sigma*theta) *
//! (sigma*theta x theta)` whose output blocks concatenate with the new
//! character as highest-order digit, so no data ever moves besides the
//! multiplication itself.
//!
//! Dot products accumulate in machine words; the prime bound from
//! [`crate::modmath::prime_upper_bound`] guarantees no partial sum can
//! overflow.

use num_bigint::BigUint;

use crate::modmath::{Bounds, CongruenceAccumulator, PrimePlan};
use crate::tiles::{column_stats, TensorEntries, TileSetStats, TileTensor, WeightedTileSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("program width must be at least 1")]
    ZeroWidth,
    #[error("program has no steps")]
    EmptyProgram,
    #[error("step {0} references tile set {1} which does not exist")]
    BadStepRef(usize, usize),
    #[error("tile sets in one program must share alphabet sizes")]
    MixedAlphabets,
    #[error("readout at step {0} is out of range")]
    BadReadout(usize),
    #[error("readout entry {0} exceeds the state length {1}")]
    BadReadoutEntry(usize, usize),
    #[error("boundary word has {got} symbols, expected width + 1 = {want}")]
    BadWordLength { got: usize, want: usize },
    #[error("boundary word symbol {0} is outside its alphabet")]
    BadWordSymbol(u16),
    #[error("state tensor of {0} entries exceeds the in-memory limit")]
    StateTooLarge(u128),
    #[error("tile error: {0}")]
    Tile(#[from] crate::tiles::TileError),
    #[error("modular arithmetic error: {0}")]
    ModMath(#[from] crate::modmath::ModMathError),
    #[error("primes exhausted before readouts converged: {0:?} still open")]
    Unconverged(Vec<usize>),
}

const MAX_STATE_ENTRIES: u128 = 1 << 31;

/// Mod-p weight vector over boundary words `Theta x Sigma^l`.
///
/// The flat index encodes `(alpha, a_1, ..., a_l)` with the leftmost
/// symbol as the lowest-order digit:
/// `alpha + theta*a_1 + theta*sigma*a_2 + ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTensor {
    theta: usize,
    sigma: usize,
    width: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl StateTensor {
    pub fn zero(width: usize, theta: usize, sigma: usize, p: u64) -> Result<Self, EngineError> {
        if width == 0 {
            return Err(EngineError::ZeroWidth);
        }
        let len = (theta as u128) * (sigma as u128).pow(width as u32);
        if len > MAX_STATE_ENTRIES {
            return Err(EngineError::StateTooLarge(len));
        }
        Ok(StateTensor {
            theta,
            sigma,
            width,
            modulus: p,
            entries: vec![0; len as usize],
        })
    }

    /// State with a single boundary word of weight 1. The word lists the
    /// horizontal character first, then the `width` vertical characters.
    pub fn init(
        width: usize,
        theta: usize,
        sigma: usize,
        p: u64,
        word: &[u16],
    ) -> Result<Self, EngineError> {
        let mut state = StateTensor::zero(width, theta, sigma, p)?;
        let idx = state.flat_index(word)?;
        state.entries[idx] = 1 % p;
        Ok(state)
    }

    /// State with explicit entries (callers own the reduction contract).
    pub fn from_entries(
        width: usize,
        theta: usize,
        sigma: usize,
        p: u64,
        entries: Vec<u64>,
    ) -> Result<Self, EngineError> {
        let mut state = StateTensor::zero(width, theta, sigma, p)?;
        if entries.len() != state.entries.len() {
            return Err(EngineError::BadWordLength {
                got: entries.len(),
                want: state.entries.len(),
            });
        }
        state.entries = entries;
        Ok(state)
    }

    pub fn flat_index(&self, word: &[u16]) -> Result<usize, EngineError> {
        if word.len() != self.width + 1 {
            return Err(EngineError::BadWordLength {
                got: word.len(),
                want: self.width + 1,
            });
        }
        if word[0] as usize >= self.theta {
            return Err(EngineError::BadWordSymbol(word[0]));
        }
        let mut idx = word[0] as usize;
        let mut stride = self.theta;
        for &a in &word[1..] {
            if a as usize >= self.sigma {
                return Err(EngineError::BadWordSymbol(a));
            }
            idx += stride * a as usize;
            stride *= self.sigma;
        }
        Ok(idx)
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// One tile placement: `out` receives `W ⋉ T`.
    ///
    /// Viewing the state as a `(sigma^(l-1) x sigma*theta)` matrix with
    /// the two lowest digits as columns, each slice `b` of the tile
    /// tensor multiplies in from the right and lands in output block `b`.
    pub fn step_into(&self, tensor: &TileTensor, out: &mut StateTensor) {
        debug_assert_eq!(tensor.theta(), self.theta);
        debug_assert_eq!(tensor.sigma(), self.sigma);
        debug_assert_eq!(out.entries.len(), self.entries.len());
        let theta = self.theta;
        let sigma = self.sigma;
        let p = self.modulus;
        let cols = sigma * theta;
        let rows = self.entries.len() / cols;
        let slice = cols * theta;
        match tensor.entries() {
            TensorEntries::Unsigned(t) => {
                let mut acc = vec![0u64; theta];
                for b in 0..sigma {
                    let t_slice = &t[b * slice..(b + 1) * slice];
                    let out_block = &mut out.entries[b * rows * theta..(b + 1) * rows * theta];
                    for r in 0..rows {
                        acc.fill(0);
                        let w_row = &self.entries[r * cols..(r + 1) * cols];
                        for (c, &wv) in w_row.iter().enumerate() {
                            if wv == 0 {
                                continue;
                            }
                            let t_row = &t_slice[c * theta..(c + 1) * theta];
                            for (a, &tv) in acc.iter_mut().zip(t_row) {
                                // Bounded by (p-1) * S_col <= word max.
                                *a += wv * tv;
                            }
                        }
                        for (o, &a) in out_block[r * theta..(r + 1) * theta].iter_mut().zip(&acc) {
                            *o = a % p;
                        }
                    }
                }
            }
            TensorEntries::Signed(t) => {
                let p_signed = p as i64;
                let mut acc = vec![0i64; theta];
                for b in 0..sigma {
                    let t_slice = &t[b * slice..(b + 1) * slice];
                    let out_block = &mut out.entries[b * rows * theta..(b + 1) * rows * theta];
                    for r in 0..rows {
                        acc.fill(0);
                        let w_row = &self.entries[r * cols..(r + 1) * cols];
                        for (c, &wv) in w_row.iter().enumerate() {
                            if wv == 0 {
                                continue;
                            }
                            let wv = wv as i64;
                            let t_row = &t_slice[c * theta..(c + 1) * theta];
                            for (a, &tv) in acc.iter_mut().zip(t_row) {
                                // Partial sums stay inside the signed
                                // word range by the signed prime bound.
                                *a += wv * tv;
                            }
                        }
                        for (o, &a) in out_block[r * theta..(r + 1) * theta].iter_mut().zip(&acc) {
                            *o = a.rem_euclid(p_signed) as u64;
                        }
                    }
                }
            }
        }
    }

    pub fn step(&self, tensor: &TileTensor) -> StateTensor {
        let mut out = self.clone();
        self.step_into(tensor, &mut out);
        out
    }
}

/// What to extract from the state at a readout point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readout {
    /// Weight of the all-boundary word (flat index 0).
    FirstEntry,
    /// Weight at a fixed flat index.
    EntryAt(usize),
}

/// An ordered list of per-position tile-set assignments plus readout
/// instructions. `steps[i]` indexes into `sets`; a readout `(k, r)`
/// extracts `r` after the first `k` steps have been applied.
#[derive(Debug, Clone)]
pub struct TilingProgram {
    width: usize,
    theta: usize,
    sigma: usize,
    sets: Vec<WeightedTileSet>,
    steps: Vec<usize>,
    readouts: Vec<(usize, Readout)>,
}

impl TilingProgram {
    pub fn new(
        width: usize,
        sets: Vec<WeightedTileSet>,
        steps: Vec<usize>,
        readouts: Vec<(usize, Readout)>,
    ) -> Result<Self, EngineError> {
        if width == 0 {
            return Err(EngineError::ZeroWidth);
        }
        if steps.is_empty() || sets.is_empty() {
            return Err(EngineError::EmptyProgram);
        }
        let theta = sets[0].theta();
        let sigma = sets[0].sigma();
        if sets.iter().any(|s| s.theta() != theta || s.sigma() != sigma) {
            return Err(EngineError::MixedAlphabets);
        }
        for (i, &s) in steps.iter().enumerate() {
            if s >= sets.len() {
                return Err(EngineError::BadStepRef(i, s));
            }
        }
        let state_len = (theta as u128) * (sigma as u128).pow(width as u32);
        if state_len > MAX_STATE_ENTRIES {
            return Err(EngineError::StateTooLarge(state_len));
        }
        for &(k, r) in &readouts {
            if k == 0 || k > steps.len() {
                return Err(EngineError::BadReadout(k));
            }
            if let Readout::EntryAt(idx) = r {
                if idx as u128 >= state_len {
                    return Err(EngineError::BadReadoutEntry(idx, state_len as usize));
                }
            }
        }
        Ok(TilingProgram { width, theta, sigma, sets, steps, readouts })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn sets(&self) -> &[WeightedTileSet] {
        &self.sets
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn readouts(&self) -> &[(usize, Readout)] {
        &self.readouts
    }

    pub fn state_len(&self) -> usize {
        self.theta * self.sigma.pow(self.width as u32)
    }

    /// Column statistics over every tile set referenced by the program.
    pub fn stats(&self) -> TileSetStats {
        column_stats(self.sets.iter())
    }

    /// Executes the program modulo `p` starting from the all-boundary
    /// word and returns the residues in readout order.
    pub fn run(&self, p: u64) -> Result<Vec<u64>, EngineError> {
        let tensors = self
            .sets
            .iter()
            .map(|s| s.to_tensor(Some(p)))
            .collect::<Result<Vec<_>, _>>()?;
        let word = vec![0u16; self.width + 1];
        let mut cur = StateTensor::init(self.width, self.theta, self.sigma, p, &word)?;
        let mut next = StateTensor::zero(self.width, self.theta, self.sigma, p)?;
        let mut residues = Vec::with_capacity(self.readouts.len());
        let mut readout_iter = self.readouts.iter().peekable();
        for (done, &set_idx) in self.steps.iter().enumerate() {
            cur.step_into(&tensors[set_idx], &mut next);
            std::mem::swap(&mut cur, &mut next);
            while let Some(&&(k, r)) = readout_iter.peek() {
                if k != done + 1 {
                    break;
                }
                let value = match r {
                    Readout::FirstEntry => cur.entries[0],
                    Readout::EntryAt(idx) => cur.entries[idx],
                };
                residues.push(value);
                readout_iter.next();
            }
        }
        Ok(residues)
    }

    /// Exact counts for every readout via modular runs over the plan's
    /// primes, combined with CRT until the halting rule fires.
    pub fn enumerate(&self, plan: &PrimePlan, tau: u32) -> Result<Enumeration, EngineError> {
        enumerate_with(|p| self.run(p), self.readouts.len(), plan, tau, 1)
    }

    /// Like [`TilingProgram::enumerate`] but running up to `jobs` primes
    /// concurrently. Residues are still combined in canonical descending
    /// prime order, so the result is identical; trailing speculative runs
    /// are simply discarded.
    pub fn enumerate_parallel(
        &self,
        plan: &PrimePlan,
        tau: u32,
        jobs: usize,
    ) -> Result<Enumeration, EngineError> {
        enumerate_with(|p| self.run(p), self.readouts.len(), plan, tau, jobs.max(1))
    }
}

/// Result of an exact enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub counts: Vec<BigUint>,
    pub primes_used: usize,
}

/// Drives the CRT/halting loop over an arbitrary residue source. Tests
/// rig `runner` to inject residues of a known count.
pub fn enumerate_with(
    runner: impl Fn(u64) -> Result<Vec<u64>, EngineError> + Sync,
    n_readouts: usize,
    plan: &PrimePlan,
    tau: u32,
    jobs: usize,
) -> Result<Enumeration, EngineError> {
    let bounds = Bounds::default();
    let mut accs: Vec<CongruenceAccumulator> =
        (0..n_readouts).map(|_| CongruenceAccumulator::new()).collect();
    let mut halted = vec![n_readouts == 0; n_readouts];
    let mut primes_used = 0usize;
    let primes = plan.primes();
    let mut offset = 0usize;
    while offset < primes.len() {
        let batch = &primes[offset..(offset + jobs).min(primes.len())];
        let results: Vec<Result<Vec<u64>, EngineError>> = if batch.len() == 1 {
            vec![runner(batch[0])]
        } else {
            let runner = &runner;
            std::thread::scope(|scope| {
                let handles: Vec<_> =
                    batch.iter().map(|&p| scope.spawn(move || runner(p))).collect();
                handles.into_iter().map(|t| t.join().expect("runner panicked")).collect()
            })
        };
        for (&p, result) in batch.iter().zip(results) {
            let residues = result?;
            debug_assert_eq!(residues.len(), n_readouts);
            primes_used += 1;
            for (i, acc) in accs.iter_mut().enumerate() {
                if halted[i] {
                    continue;
                }
                acc.combine(p, residues[i])?;
                halted[i] = acc.halting_update(&bounds, tau);
            }
            if halted.iter().all(|&x| x) {
                let counts = accs.iter().map(|a| a.reconstruct(&bounds)).collect();
                return Ok(Enumeration { counts, primes_used });
            }
        }
        offset += batch.len();
    }
    let open: Vec<usize> =
        halted.iter().enumerate().filter(|(_, &x)| !x).map(|(i, _)| i).collect();
    Err(EngineError::Unconverged(open))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyomino;
    use crate::tiles::{Side, WeightedTileSet};

    fn domino() -> WeightedTileSet {
        polyomino::catalog("I2").unwrap().tiles
    }

    fn i_family() -> WeightedTileSet {
        polyomino::catalog("I-family").unwrap().tiles
    }

    fn plan_for(sets: &[&WeightedTileSet]) -> PrimePlan {
        let stats = crate::tiles::column_stats(sets.iter().copied());
        PrimePlan::new(&stats, 32, 100).unwrap()
    }

    #[test]
    fn init_state_places_unit_weight() {
        let s = StateTensor::init(1, 2, 2, 97, &[0, 0]).unwrap();
        assert_eq!(s.entries(), &[1, 0, 0, 0]);
        let s = StateTensor::init(2, 2, 2, 97, &[0, 0, 0]).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.entries()[0], 1);
        assert!(s.entries()[1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn init_state_rejects_bad_words() {
        assert!(matches!(
            StateTensor::init(2, 2, 2, 97, &[0, 0]),
            Err(EngineError::BadWordLength { got: 2, want: 3 })
        ));
        assert!(matches!(
            StateTensor::init(1, 2, 2, 97, &[0, 5]),
            Err(EngineError::BadWordSymbol(5))
        ));
    }

    #[test]
    fn flat_index_is_a_bijection() {
        for sigma in 1..=4usize {
            for theta in 1..=4usize {
                for width in 1..=6usize {
                    let s = StateTensor::zero(width, theta, sigma, 97).unwrap();
                    let mut seen = vec![false; s.len()];
                    let mut word = vec![0u16; width + 1];
                    loop {
                        let idx = s.flat_index(&word).unwrap();
                        assert!(!seen[idx]);
                        seen[idx] = true;
                        // Odometer over (theta, sigma, ..., sigma).
                        let mut pos = 0;
                        loop {
                            let limit = if pos == 0 { theta } else { sigma } as u16;
                            word[pos] += 1;
                            if word[pos] < limit {
                                break;
                            }
                            word[pos] = 0;
                            pos += 1;
                            if pos > width {
                                break;
                            }
                        }
                        if pos > width {
                            break;
                        }
                    }
                    assert!(seen.iter().all(|&x| x));
                }
            }
        }
    }

    #[test]
    fn empty_tile_preserves_the_boundary_word() {
        let ts = WeightedTileSet::from_labeled(&[("#", "#", "#", "#", 1)]).unwrap();
        let tensor = ts.to_tensor(Some(97)).unwrap();
        let s = StateTensor::init(3, 1, 1, 97, &[0, 0, 0, 0]).unwrap();
        let next = s.step(&tensor);
        assert_eq!(next.entries(), s.entries());
    }

    #[test]
    fn step_is_linear_mod_p() {
        let p = 101u64;
        let ts = domino();
        let tensor = ts.to_tensor(Some(p)).unwrap();
        let width = 3;
        let len = 2usize.pow(3) * 2;
        // Two pseudo-random states and their entrywise sum.
        let mut w1 = StateTensor::zero(width, 2, 2, p).unwrap();
        let mut w2 = StateTensor::zero(width, 2, 2, p).unwrap();
        let mut seed = 7u64;
        for i in 0..len {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            w1.entries[i] = seed % p;
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            w2.entries[i] = seed % p;
        }
        let mut sum = StateTensor::zero(width, 2, 2, p).unwrap();
        for i in 0..len {
            sum.entries[i] = (w1.entries[i] + w2.entries[i]) % p;
        }
        let lhs = sum.step(&tensor);
        let (r1, r2) = (w1.step(&tensor), w2.step(&tensor));
        for i in 0..len {
            assert_eq!(lhs.entries[i], (r1.entries[i] + r2.entries[i]) % p);
        }
    }

    #[test]
    fn domino_two_by_two_first_entry() {
        // Hand-built 2x2 rectangle program: left/right restricted columns,
        // readout after each row.
        let ts = domino();
        let left = ts.restrict_edge(Side::Left, 0);
        let right = ts.restrict_edge(Side::Right, 0);
        let program = TilingProgram::new(
            2,
            vec![left, right],
            vec![0, 1, 0, 1],
            vec![(2, Readout::FirstEntry), (4, Readout::FirstEntry)],
        )
        .unwrap();
        let residues = program.run(1009).unwrap();
        assert_eq!(residues, vec![1, 2]);
    }

    #[test]
    fn domino_column_is_fibonacci() {
        let program = crate::regions::compile_rectangle(&domino(), 2, 4).unwrap();
        let plan = plan_for(&[&domino()]);
        let result = program.enumerate(&plan, 2).unwrap();
        let got: Vec<u64> = result.counts.iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(got, vec![1, 2, 3, 5]);
    }

    #[test]
    fn edge_restricted_empty_set_zeroes_everything() {
        let ts = domino();
        let one = ts.horizontal().index_of("1").unwrap();
        let dead = ts.restrict_edge(Side::Left, one).restrict_edge(Side::Right, one);
        assert!(dead.is_tiles_empty());
        let program = TilingProgram::new(
            2,
            vec![ts, dead],
            vec![0, 1, 0, 0],
            vec![(2, Readout::FirstEntry), (4, Readout::FirstEntry)],
        )
        .unwrap();
        let residues = program.run(1009).unwrap();
        assert_eq!(residues, vec![0, 0]);
    }

    #[test]
    fn i_family_width_two_column() {
        let ts = i_family();
        let program = crate::regions::compile_rectangle(&ts, 2, 5).unwrap();
        let plan = plan_for(&[&ts]);
        let result = program.enumerate(&plan, 2).unwrap();
        let got: Vec<u64> = result.counts.iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(got, vec![2, 7, 29, 124, 533]);
    }

    #[test]
    fn i_family_width_three_column() {
        let ts = i_family();
        let program = crate::regions::compile_rectangle(&ts, 3, 4).unwrap();
        let plan = plan_for(&[&ts]);
        let result = program.enumerate(&plan, 2).unwrap();
        let got: Vec<u64> = result.counts.iter().map(|c| c.try_into().unwrap()).collect();
        assert_eq!(got, vec![4, 29, 257, 2408]);
    }

    #[test]
    fn run_is_consistent_with_exact_count_mod_p() {
        let ts = i_family();
        let program = crate::regions::compile_rectangle(&ts, 2, 3).unwrap();
        for p in [97u64, 1009, 1_431_655_751] {
            let residues = program.run(p).unwrap();
            assert_eq!(residues, vec![2 % p, 7 % p, 29 % p]);
        }
    }

    #[test]
    fn enumerate_reports_unconverged_readouts() {
        let ts = i_family();
        let program = crate::regions::compile_rectangle(&ts, 2, 3).unwrap();
        let stats = program.stats();
        let plan = PrimePlan::new(&stats, 32, 1).unwrap();
        match program.enumerate(&plan, 2) {
            Err(EngineError::Unconverged(open)) => assert_eq!(open, vec![0, 1, 2]),
            other => panic!("expected unconverged error, got {other:?}"),
        }
    }

    #[test]
    fn parallel_enumeration_matches_sequential() {
        let ts = i_family();
        let program = crate::regions::compile_rectangle(&ts, 3, 6).unwrap();
        let plan = plan_for(&[&ts]);
        let sequential = program.enumerate(&plan, 2).unwrap();
        let parallel = program.enumerate_parallel(&plan, 2, 4).unwrap();
        assert_eq!(sequential.counts, parallel.counts);
    }
}
