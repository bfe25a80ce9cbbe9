//! Weighted Wang tile sets and their tensor form.
//!
//! A tile carries one character on each edge (left/right from the
//! horizontal alphabet, top/bottom from the vertical one) and a nonzero
//! integer weight. Characters are interned to small indices; the boundary
//! character `#` always sits at index 0 so that the all-boundary word is
//! flat index 0 of the state tensor.

use std::collections::BTreeMap;
use std::fmt;

/// Label of the boundary character.
pub const BOUNDARY_LABEL: &str = "#";

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TileError {
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("boundary character must sit at index 0")]
    BoundaryNotFirst,
    #[error("tile references character index {index} outside its alphabet (size {size})")]
    CharOutOfRange { index: u16, size: usize },
    #[error("unknown character {0:?}")]
    UnknownChar(String),
    #[error("tile weight magnitude {weight} is not below the modulus {p}")]
    WeightTooLarge { weight: i64, p: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Ordered set of edge characters. Index 0 is the boundary character
/// whenever the boundary character is present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new(symbols: Vec<String>) -> Result<Self, TileError> {
        if symbols.is_empty() {
            return Err(TileError::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(TileError::DuplicateSymbol(s.clone()));
            }
            if s == BOUNDARY_LABEL && i != 0 {
                return Err(TileError::BoundaryNotFirst);
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet containing only the boundary character.
    pub fn boundary_only() -> Self {
        Alphabet { symbols: vec![BOUNDARY_LABEL.to_string()] }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn label(&self, index: u16) -> &str {
        &self.symbols[index as usize]
    }

    pub fn index_of(&self, label: &str) -> Option<u16> {
        self.symbols.iter().position(|s| s == label).map(|i| i as u16)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    fn intern(&mut self, label: &str) -> u16 {
        match self.index_of(label) {
            Some(i) => i,
            None => {
                self.symbols.push(label.to_string());
                (self.symbols.len() - 1) as u16
            }
        }
    }
}

/// One Wang tile, edge characters interned: `(left, top, bottom, right)`
/// with a nonzero weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WangTile {
    pub left: u16,
    pub top: u16,
    pub bottom: u16,
    pub right: u16,
    pub weight: i64,
}

impl WangTile {
    fn quad(&self) -> (u16, u16, u16, u16) {
        (self.left, self.top, self.bottom, self.right)
    }
}

/// Tile edge selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Top,
    Bottom,
    Right,
}

/// A finite weighted Wang tile set over a fixed pair of alphabets.
///
/// Construction merges tiles sharing the same character quadruple by
/// summing their weights and drops the result if it cancels to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedTileSet {
    horizontal: Alphabet,
    vertical: Alphabet,
    tiles: Vec<WangTile>,
}

impl WeightedTileSet {
    pub fn new(
        horizontal: Alphabet,
        vertical: Alphabet,
        tiles: Vec<WangTile>,
    ) -> Result<Self, TileError> {
        let check = |index: u16, size: usize| {
            if (index as usize) < size {
                Ok(())
            } else {
                Err(TileError::CharOutOfRange { index, size })
            }
        };
        let mut merged: BTreeMap<(u16, u16, u16, u16), i64> = BTreeMap::new();
        for t in &tiles {
            check(t.left, horizontal.len())?;
            check(t.right, horizontal.len())?;
            check(t.top, vertical.len())?;
            check(t.bottom, vertical.len())?;
            *merged.entry(t.quad()).or_insert(0) += t.weight;
        }
        let tiles = merged
            .into_iter()
            .filter(|&(_, w)| w != 0)
            .map(|((left, top, bottom, right), weight)| WangTile {
                left,
                top,
                bottom,
                right,
                weight,
            })
            .collect();
        Ok(WeightedTileSet { horizontal, vertical, tiles })
    }

    /// Builds a set from labelled tiles `(left, top, bottom, right, weight)`,
    /// inferring both alphabets. The boundary character is forced to index
    /// 0; remaining symbols are ordered by first appearance.
    pub fn from_labeled(tiles: &[(&str, &str, &str, &str, i64)]) -> Result<Self, TileError> {
        let mut horizontal = Alphabet::boundary_only();
        let mut vertical = Alphabet::boundary_only();
        let mut interned = Vec::with_capacity(tiles.len());
        for &(l, t, b, r, w) in tiles {
            interned.push(WangTile {
                left: horizontal.intern(l),
                top: vertical.intern(t),
                bottom: vertical.intern(b),
                right: horizontal.intern(r),
                weight: w,
            });
        }
        WeightedTileSet::new(horizontal, vertical, interned)
    }

    pub fn horizontal(&self) -> &Alphabet {
        &self.horizontal
    }

    pub fn vertical(&self) -> &Alphabet {
        &self.vertical
    }

    pub fn tiles(&self) -> &[WangTile] {
        &self.tiles
    }

    pub fn theta(&self) -> usize {
        self.horizontal.len()
    }

    pub fn sigma(&self) -> usize {
        self.vertical.len()
    }

    pub fn is_tiles_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn side(&self, tile: &WangTile, side: Side) -> u16 {
        match side {
            Side::Left => tile.left,
            Side::Top => tile.top,
            Side::Bottom => tile.bottom,
            Side::Right => tile.right,
        }
    }

    /// Keeps only tiles whose `side` character equals `required`. The
    /// alphabets are left untouched; the result may be tile-less.
    pub fn restrict_edge(&self, side: Side, required: u16) -> Self {
        self.retain(|t| self.side(t, side) == required)
    }

    pub(crate) fn retain(&self, keep: impl Fn(&WangTile) -> bool) -> Self {
        WeightedTileSet {
            horizontal: self.horizontal.clone(),
            vertical: self.vertical.clone(),
            tiles: self.tiles.iter().copied().filter(|t| keep(t)).collect(),
        }
    }

    /// Swaps the roles of the two axes: alphabets trade places and every
    /// tile maps `(l, t, b, r) -> (t, l, r, b)`.
    pub fn transpose(&self) -> Self {
        let tiles = self
            .tiles
            .iter()
            .map(|t| WangTile {
                left: t.top,
                top: t.left,
                bottom: t.right,
                right: t.bottom,
                weight: t.weight,
            })
            .collect();
        let mut out = WeightedTileSet {
            horizontal: self.vertical.clone(),
            vertical: self.horizontal.clone(),
            tiles,
        };
        out.tiles.sort();
        out
    }

    /// Re-expresses this set over larger alphabets. Every symbol must
    /// already exist in the target alphabets.
    pub fn reindexed(&self, horizontal: &Alphabet, vertical: &Alphabet) -> Result<Self, TileError> {
        let map = |alpha: &Alphabet, target: &Alphabet, idx: u16| {
            target
                .index_of(alpha.label(idx))
                .ok_or_else(|| TileError::UnknownChar(alpha.label(idx).to_string()))
        };
        let tiles = self
            .tiles
            .iter()
            .map(|t| {
                Ok(WangTile {
                    left: map(&self.horizontal, horizontal, t.left)?,
                    top: map(&self.vertical, vertical, t.top)?,
                    bottom: map(&self.vertical, vertical, t.bottom)?,
                    right: map(&self.horizontal, horizontal, t.right)?,
                    weight: t.weight,
                })
            })
            .collect::<Result<Vec<_>, TileError>>()?;
        WeightedTileSet::new(horizontal.clone(), vertical.clone(), tiles)
    }

    /// Threads a tile counter through the horizontal characters.
    ///
    /// The horizontal alphabet becomes the product `Θ x {0..nu-1}` with
    /// `(#, 0)` at index 0. A root tile advances the counter (wrapping
    /// only in `modular` mode); every other tile preserves it. The pair
    /// `(alpha, i)` is interned at index `alpha * nu + i`, so the count-i
    /// readout of an otherwise all-boundary word is flat index `i`.
    pub fn augment_counter(
        &self,
        is_root: impl Fn(&WangTile) -> bool,
        nu: u32,
        modular: bool,
    ) -> Self {
        let nu = nu.max(1);
        let theta = self.theta() as u32;
        let mut symbols = Vec::with_capacity((theta * nu) as usize);
        for alpha in 0..theta {
            for i in 0..nu {
                let base = self.horizontal.label(alpha as u16);
                if alpha == 0 && i == 0 {
                    symbols.push(BOUNDARY_LABEL.to_string());
                } else {
                    symbols.push(format!("{base}@{i}"));
                }
            }
        }
        let horizontal = Alphabet::new(symbols).expect("product labels are distinct");
        let pair = |alpha: u16, i: u32| (alpha as u32 * nu + i) as u16;
        let mut tiles = Vec::new();
        for t in &self.tiles {
            if is_root(t) {
                for i in 0..nu {
                    let next = i + 1;
                    if next == nu && !modular {
                        continue;
                    }
                    tiles.push(WangTile {
                        left: pair(t.left, i),
                        top: t.top,
                        bottom: t.bottom,
                        right: pair(t.right, next % nu),
                        weight: t.weight,
                    });
                }
            } else {
                for i in 0..nu {
                    tiles.push(WangTile {
                        left: pair(t.left, i),
                        top: t.top,
                        bottom: t.bottom,
                        right: pair(t.right, i),
                        weight: t.weight,
                    });
                }
            }
        }
        WeightedTileSet::new(horizontal, self.vertical.clone(), tiles)
            .expect("augmented indices are in range")
    }

    /// Dense tensor form. Slice `b` is a `(sigma*theta) x theta` matrix:
    /// row `(alpha, a)` with `alpha` varying fastest, column `beta`.
    ///
    /// With a modulus, non-negative sets are reduced into `[0, p)`;
    /// sets with negative weights are stored as raw signed values, which
    /// must already be smaller than `p` in magnitude.
    pub fn to_tensor(&self, p: Option<u64>) -> Result<TileTensor, TileError> {
        let sigma = self.sigma();
        let theta = self.theta();
        let len = sigma * sigma * theta * theta;
        let signed = self.tiles.iter().any(|t| t.weight < 0);
        let entry_index = |t: &WangTile| {
            (t.bottom as usize) * sigma * theta * theta
                + ((t.top as usize) * theta + t.left as usize) * theta
                + t.right as usize
        };
        let entries = if signed {
            let mut entries = vec![0i64; len];
            for t in &self.tiles {
                if let Some(p) = p {
                    if t.weight.unsigned_abs() >= p {
                        return Err(TileError::WeightTooLarge { weight: t.weight, p });
                    }
                }
                entries[entry_index(t)] = t.weight;
            }
            TensorEntries::Signed(entries)
        } else {
            let mut entries = vec![0u64; len];
            for t in &self.tiles {
                let w = t.weight as u64;
                entries[entry_index(t)] = match p {
                    Some(p) => w % p,
                    None => w,
                };
            }
            TensorEntries::Unsigned(entries)
        };
        Ok(TileTensor { sigma, theta, entries })
    }
}

/// Tensor entries; signed sets keep raw weights so that the signed
/// overflow bound applies, non-negative sets are reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorEntries {
    Unsigned(Vec<u64>),
    Signed(Vec<i64>),
}

/// Tile set in the engine's memory layout, shape `(sigma, sigma*theta, theta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileTensor {
    sigma: usize,
    theta: usize,
    entries: TensorEntries,
}

impl TileTensor {
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    pub fn entries(&self) -> &TensorEntries {
        &self.entries
    }

    pub fn is_signed(&self) -> bool {
        matches!(self.entries, TensorEntries::Signed(_))
    }

    /// Entry at `(left, top, bottom, right)` as a signed value (unsigned
    /// storage is widened; values of interest stay far below 2^63).
    pub fn get(&self, left: u16, top: u16, bottom: u16, right: u16) -> i64 {
        let idx = (bottom as usize) * self.sigma * self.theta * self.theta
            + ((top as usize) * self.theta + left as usize) * self.theta
            + right as usize;
        match &self.entries {
            TensorEntries::Unsigned(v) => v[idx] as i64,
            TensorEntries::Signed(v) => v[idx],
        }
    }

    /// Decodes the nonzero entries back into tiles (sorted by quadruple).
    pub fn decode(&self) -> Vec<WangTile> {
        let mut out = Vec::new();
        for b in 0..self.sigma as u16 {
            for a in 0..self.sigma as u16 {
                for alpha in 0..self.theta as u16 {
                    for beta in 0..self.theta as u16 {
                        let w = self.get(alpha, a, b, beta);
                        if w != 0 {
                            out.push(WangTile {
                                left: alpha,
                                top: a,
                                bottom: b,
                                right: beta,
                                weight: w,
                            });
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Column-sum statistics over one or more tile sets, taken per slice `b`
/// and per column `beta` over the row index `(alpha, a)`, maximized over
/// all sets. These drive the prime upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileSetStats {
    s_col: u64,
    s_pos_col: u64,
    s_neg_col: i64,
    has_negative: bool,
}

impl TileSetStats {
    pub fn from_parts(s_pos_col: u64, s_neg_col: i64, has_negative: bool) -> Self {
        debug_assert!(s_neg_col <= 0);
        TileSetStats {
            s_col: s_pos_col + s_neg_col.unsigned_abs(),
            s_pos_col,
            s_neg_col,
            has_negative,
        }
    }

    /// Max column sum of absolute entries; equals `s_pos_col` for
    /// non-negative sets.
    pub fn s_col(&self) -> u64 {
        self.s_col
    }

    pub fn s_pos_col(&self) -> u64 {
        self.s_pos_col
    }

    pub fn s_neg_col(&self) -> i64 {
        self.s_neg_col
    }

    pub fn has_negative(&self) -> bool {
        self.has_negative
    }

    /// True when no tile contributed at all.
    pub fn is_empty(&self) -> bool {
        self.s_pos_col == 0 && self.s_neg_col == 0
    }

    /// Component-wise max (most pessimistic in each direction).
    pub fn merge(self, other: TileSetStats) -> TileSetStats {
        TileSetStats {
            s_col: self.s_col.max(other.s_col),
            s_pos_col: self.s_pos_col.max(other.s_pos_col),
            s_neg_col: self.s_neg_col.min(other.s_neg_col),
            has_negative: self.has_negative || other.has_negative,
        }
    }
}

/// Statistics over every tile set appearing in a program.
pub fn column_stats<'a>(sets: impl IntoIterator<Item = &'a WeightedTileSet>) -> TileSetStats {
    let mut merged = TileSetStats::from_parts(0, 0, false);
    for ts in sets {
        let mut pos: BTreeMap<(u16, u16), u64> = BTreeMap::new();
        let mut neg: BTreeMap<(u16, u16), i64> = BTreeMap::new();
        let mut abs: BTreeMap<(u16, u16), u64> = BTreeMap::new();
        let mut has_negative = false;
        for t in ts.tiles() {
            let col = (t.bottom, t.right);
            *abs.entry(col).or_insert(0) += t.weight.unsigned_abs();
            if t.weight >= 0 {
                *pos.entry(col).or_insert(0) += t.weight as u64;
            } else {
                has_negative = true;
                *neg.entry(col).or_insert(0) += t.weight;
            }
        }
        let stats = TileSetStats {
            s_col: abs.values().copied().max().unwrap_or(0),
            s_pos_col: pos.values().copied().max().unwrap_or(0),
            s_neg_col: neg.values().copied().min().unwrap_or(0),
            has_negative,
        };
        merged = merged.merge(stats);
    }
    merged
}

impl fmt::Display for WeightedTileSet {
    /// Tile-set text format: one `left top bottom right weight` line per
    /// tile, `#` for the boundary character.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tiles {
            writeln!(
                f,
                "{} {} {} {} {}",
                self.horizontal.label(t.left),
                self.vertical.label(t.top),
                self.vertical.label(t.bottom),
                self.horizontal.label(t.right),
                t.weight
            )?;
        }
        Ok(())
    }
}

/// Parses the tile-set text format: whitespace-separated
/// `left top bottom right weight` tokens per line, `#` is the boundary
/// character, `%` starts a comment line. Alphabets are inferred with the
/// boundary character forced to index 0.
pub fn parse_tile_set(text: &str) -> Result<WeightedTileSet, TileError> {
    let mut rows: Vec<(String, String, String, String, i64)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(TileError::Parse {
                line: lineno + 1,
                msg: format!("expected 5 tokens, found {}", toks.len()),
            });
        }
        let weight: i64 = toks[4].parse().map_err(|_| TileError::Parse {
            line: lineno + 1,
            msg: format!("bad weight {:?}", toks[4]),
        })?;
        rows.push((
            toks[0].to_string(),
            toks[1].to_string(),
            toks[2].to_string(),
            toks[3].to_string(),
            weight,
        ));
    }
    let borrowed: Vec<(&str, &str, &str, &str, i64)> = rows
        .iter()
        .map(|(l, t, b, r, w)| (l.as_str(), t.as_str(), b.as_str(), r.as_str(), *w))
        .collect();
    WeightedTileSet::from_labeled(&borrowed)
}
