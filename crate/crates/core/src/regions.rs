//! Region compilers: rectangles, masked boards, cylinders and tori are
//! lowered to per-position tile-set programs over a helicoid.
//!
//! A rectangle rolls onto a helicoid directly; only its left and right
//! columns need edge filtering, and reading the first state entry after
//! each completed row yields the count for every height in one pass.
//! Holes keep their helicoid position but carry the single all-boundary
//! tile. Gluing constructions (seam column, character doubling) reduce
//! cylinders and the torus to the same machinery.

use num_bigint::BigUint;
use num_traits::One;

use crate::engine::{EngineError, Enumeration, Readout, TilingProgram};
use crate::modmath::PrimePlan;
use crate::tiles::{Alphabet, Side, TileError, WangTile, WeightedTileSet, BOUNDARY_LABEL};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RegionError {
    #[error("region dimensions must be at least 1")]
    ZeroDim,
    #[error("mask must contain at least one row")]
    EmptyMask,
    #[error("mask line {0}: rows must all have the same length")]
    RaggedMask(usize),
    #[error("mask line {line}: unexpected character {ch:?} (use '.' or 'X')")]
    BadMaskChar { line: usize, ch: char },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Tile(#[from] TileError),
}

/// Region taxonomy used by the front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Rectangle,
    Mask,
    CylinderVertical,
    CylinderHorizontal,
    Torus,
}

/// Occupancy grid for irregular boards: `true` marks a hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    holes: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, holes: Vec<bool>) -> Result<Self, RegionError> {
        if width == 0 || height == 0 || holes.len() != width * height {
            return Err(RegionError::ZeroDim);
        }
        Ok(Mask { width, height, holes })
    }

    pub fn full(width: usize, height: usize) -> Result<Self, RegionError> {
        Mask::new(width, height, vec![false; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_hole(&self, x: usize, y: usize) -> bool {
        self.holes[y * self.width + x]
    }

    pub fn hole_cells(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.is_hole(x, y) {
                    out.push((x as u32, y as u32));
                }
            }
        }
        out
    }
}

/// Parses the mask text format: one row per line, `.` is a cell to tile,
/// `X` is a hole. Rows must have equal length.
pub fn parse_mask(text: &str) -> Result<Mask, RegionError> {
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(line.len());
        for ch in line.chars() {
            match ch {
                '.' => row.push(false),
                'X' | 'x' => row.push(true),
                other => {
                    return Err(RegionError::BadMaskChar { line: lineno + 1, ch: other })
                }
            }
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(RegionError::RaggedMask(lineno + 1));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(RegionError::EmptyMask);
    }
    let width = rows[0].len();
    let height = rows.len();
    Mask::new(width, height, rows.into_iter().flatten().collect())
}

const BOUNDARY: u16 = 0;

/// Width-`l` rectangle, heights 1..=`max_height` read out layer by layer.
///
/// Column 1 keeps only boundary left edges, column `l` only boundary
/// right edges; the bottom condition is implied by reading the
/// all-boundary word after each completed row.
pub fn compile_rectangle(
    ts: &WeightedTileSet,
    l: usize,
    max_height: usize,
) -> Result<TilingProgram, RegionError> {
    if l == 0 || max_height == 0 {
        return Err(RegionError::ZeroDim);
    }
    let (sets, row): (Vec<WeightedTileSet>, Vec<usize>) = if l == 1 {
        let both = ts.restrict_edge(Side::Left, BOUNDARY).restrict_edge(Side::Right, BOUNDARY);
        (vec![both], vec![0])
    } else {
        let left = ts.restrict_edge(Side::Left, BOUNDARY);
        let right = ts.restrict_edge(Side::Right, BOUNDARY);
        let mut row = vec![0];
        row.extend(std::iter::repeat(1).take(l - 2));
        row.push(2);
        (vec![left, ts.clone(), right], row)
    };
    let mut steps = Vec::with_capacity(l * max_height);
    let mut readouts = Vec::with_capacity(max_height);
    for r in 1..=max_height {
        steps.extend_from_slice(&row);
        readouts.push((r * l, Readout::FirstEntry));
    }
    Ok(TilingProgram::new(l, sets, steps, readouts)?)
}

/// Rectangle with a tile counter threaded through the horizontal
/// characters. After each completed row the program reads one entry per
/// possible count `0..nu`, so readout `(h-1)*nu + k` is the weight of
/// tilings of height `h` using exactly (or, in modular mode, congruent
/// to) `k` root tiles.
pub fn compile_rectangle_counter(
    ts: &WeightedTileSet,
    l: usize,
    max_height: usize,
    nu: u32,
    modular: bool,
    is_root: impl Fn(&WangTile) -> bool,
) -> Result<TilingProgram, RegionError> {
    if l == 0 || max_height == 0 || nu == 0 {
        return Err(RegionError::ZeroDim);
    }
    let aug = ts.augment_counter(is_root, nu, modular);
    // The board's left/right boundary fixes only the base character; the
    // counter component rides across row seams unrestricted. Base chars
    // sit in blocks of nu, so the boundary block is exactly `idx < nu`.
    let keep_left = |t: &WangTile| (t.left as u32) < nu;
    let keep_right = |t: &WangTile| (t.right as u32) < nu;
    let (sets, row): (Vec<WeightedTileSet>, Vec<usize>) = if l == 1 {
        let both = aug.retain(|t| keep_left(t) && keep_right(t));
        (vec![both], vec![0])
    } else {
        let left = aug.retain(keep_left);
        let right = aug.retain(keep_right);
        let mut row = vec![0];
        row.extend(std::iter::repeat(1).take(l - 2));
        row.push(2);
        (vec![left, aug.clone(), right], row)
    };
    let mut steps = Vec::new();
    let mut readouts = Vec::new();
    for r in 1..=max_height {
        steps.extend_from_slice(&row);
        for k in 0..nu {
            readouts.push((r * l, Readout::EntryAt(k as usize)));
        }
    }
    Ok(TilingProgram::new(l, sets, steps, readouts)?)
}

/// Irregular board: the bounding box is tiled like a rectangle, hole
/// positions carry the single all-boundary tile, and the count is read
/// once at the end.
pub fn compile_mask(ts: &WeightedTileSet, mask: &Mask) -> Result<TilingProgram, RegionError> {
    let l = mask.width();
    let h = mask.height();
    let hole_set = WeightedTileSet::new(
        ts.horizontal().clone(),
        ts.vertical().clone(),
        vec![WangTile { left: 0, top: 0, bottom: 0, right: 0, weight: 1 }],
    )?;
    let left = ts.restrict_edge(Side::Left, BOUNDARY);
    let right = ts.restrict_edge(Side::Right, BOUNDARY);
    let both = left.restrict_edge(Side::Right, BOUNDARY);
    let sets = vec![ts.clone(), left, right, both, hole_set];
    let mut steps = Vec::with_capacity(l * h);
    for y in 0..h {
        for x in 0..l {
            let idx = if mask.is_hole(x, y) {
                4
            } else {
                match (x == 0, x == l - 1) {
                    (true, true) => 3,
                    (true, false) => 1,
                    (false, true) => 2,
                    (false, false) => 0,
                }
            };
            steps.push(idx);
        }
    }
    let readouts = vec![(l * h, Readout::FirstEntry)];
    Ok(TilingProgram::new(l, sets, steps, readouts)?)
}

/// Marks vertical-alphabet symbols that originate from the horizontal
/// alphabet when a seam column threads horizontal characters vertically.
fn seam_label(label: &str) -> String {
    format!("~{label}")
}

/// Merged vertical alphabet for seam constructions: the original
/// vertical symbols plus a seam copy of every non-boundary horizontal
/// symbol (the boundary character is shared).
fn seam_vertical_alphabet(horizontal: &Alphabet, vertical: &Alphabet) -> Alphabet {
    let mut symbols: Vec<String> = vertical.symbols().to_vec();
    for (i, sym) in horizontal.symbols().iter().enumerate() {
        if i == 0 && sym == BOUNDARY_LABEL {
            continue;
        }
        symbols.push(seam_label(sym));
    }
    Alphabet::new(symbols).expect("seam labels cannot collide")
}

/// Index of horizontal character `alpha` inside the merged vertical
/// alphabet built by [`seam_vertical_alphabet`].
fn seam_char(horizontal: &Alphabet, merged: &Alphabet, alpha: u16) -> u16 {
    if alpha == 0 {
        return 0;
    }
    merged
        .index_of(&seam_label(horizontal.label(alpha)))
        .expect("seam alphabet contains every horizontal symbol")
}

/// Pass-through tile set for the seam column: `theta^2` tiles
/// `(alpha, alpha, beta, beta)` that pin each ring closed and hand the
/// next ring its starting character.
fn seam_set(horizontal: &Alphabet, merged: &Alphabet) -> WeightedTileSet {
    let theta = horizontal.len() as u16;
    let mut tiles = Vec::with_capacity((theta as usize) * (theta as usize));
    for alpha in 0..theta {
        for beta in 0..theta {
            tiles.push(WangTile {
                left: alpha,
                top: seam_char(horizontal, merged, alpha),
                bottom: seam_char(horizontal, merged, beta),
                right: beta,
                weight: 1,
            });
        }
    }
    WeightedTileSet::new(horizontal.clone(), merged.clone(), tiles)
        .expect("seam tiles are in range")
}

/// Cylinder whose rows close on themselves (left and right edges glued).
/// An extra seam column of pass-through tiles removes the helicoid
/// offset; rings are read out at every height 1..=`max_height`.
pub fn compile_cylinder_vertical(
    ts: &WeightedTileSet,
    l: usize,
    max_height: usize,
) -> Result<TilingProgram, RegionError> {
    if l == 0 || max_height == 0 {
        return Err(RegionError::ZeroDim);
    }
    let merged = seam_vertical_alphabet(ts.horizontal(), ts.vertical());
    let base = ts.reindexed(ts.horizontal(), &merged)?;
    let seam = seam_set(ts.horizontal(), &merged);
    let sets = vec![seam, base];
    // Strip order: S_0, ring 1, S_1, ring 2, ..., S_h. Each seam cell
    // closes the ring above it and opens the one below.
    let mut steps = vec![0];
    let mut readouts = Vec::with_capacity(max_height);
    for r in 1..=max_height {
        steps.extend(std::iter::repeat(1).take(l));
        steps.push(0);
        readouts.push((1 + r * (l + 1), Readout::FirstEntry));
    }
    Ok(TilingProgram::new(l + 1, sets, steps, readouts)?)
}

/// Vertical alphabet for character doubling: boundary plus all ordered
/// pairs of original vertical symbols.
fn doubled_vertical_alphabet(vertical: &Alphabet) -> Alphabet {
    let mut symbols = vec![BOUNDARY_LABEL.to_string()];
    for a in vertical.symbols() {
        for c in vertical.symbols() {
            symbols.push(format!("{a}|{c}"));
        }
    }
    Alphabet::new(symbols).expect("pair labels are distinct")
}

fn pair_char(sigma: usize, a: u16, c: u16) -> u16 {
    (1 + a as usize * sigma + c as usize) as u16
}

/// Row tile sets for a top/bottom glued board. Every tile carries the
/// column's top character `c` along: interiors transmit it, the top row
/// pins `a = c`, the bottom row pins `b = c`.
fn doubled_row_sets(
    ts: &WeightedTileSet,
    doubled: &Alphabet,
) -> (WeightedTileSet, WeightedTileSet, WeightedTileSet, WeightedTileSet) {
    let sigma = ts.sigma();
    let mut top = Vec::new();
    let mut mid = Vec::new();
    let mut bottom = Vec::new();
    let mut single = Vec::new();
    for t in ts.tiles() {
        for c in 0..sigma as u16 {
            mid.push(WangTile {
                left: t.left,
                top: pair_char(sigma, t.top, c),
                bottom: pair_char(sigma, t.bottom, c),
                right: t.right,
                weight: t.weight,
            });
        }
        top.push(WangTile {
            left: t.left,
            top: BOUNDARY,
            bottom: pair_char(sigma, t.bottom, t.top),
            right: t.right,
            weight: t.weight,
        });
        bottom.push(WangTile {
            left: t.left,
            top: pair_char(sigma, t.top, t.bottom),
            bottom: BOUNDARY,
            right: t.right,
            weight: t.weight,
        });
        if t.top == t.bottom {
            single.push(WangTile {
                left: t.left,
                top: BOUNDARY,
                bottom: BOUNDARY,
                right: t.right,
                weight: t.weight,
            });
        }
    }
    let build = |tiles| {
        WeightedTileSet::new(ts.horizontal().clone(), doubled.clone(), tiles)
            .expect("doubled tiles are in range")
    };
    (build(top), build(mid), build(bottom), build(single))
}

/// Cylinder whose columns close on themselves (top and bottom edges
/// glued) at fixed height `h`; one readout.
pub fn compile_cylinder_horizontal(
    ts: &WeightedTileSet,
    l: usize,
    h: usize,
) -> Result<TilingProgram, RegionError> {
    if l == 0 || h == 0 {
        return Err(RegionError::ZeroDim);
    }
    let doubled = doubled_vertical_alphabet(ts.vertical());
    let (top, mid, bottom, single) = doubled_row_sets(ts, &doubled);
    let row_for = |y: usize| {
        if h == 1 {
            3
        } else if y == 0 {
            0
        } else if y == h - 1 {
            2
        } else {
            1
        }
    };
    // Left/right edges stay real boundaries.
    let mut sets = Vec::new();
    let mut steps = Vec::with_capacity(l * h);
    let base = [top, mid, bottom, single];
    let mut cache: Vec<Vec<Option<usize>>> = vec![vec![None; 4]; 4];
    for y in 0..h {
        let r = row_for(y);
        for x in 0..l {
            let col = match (x == 0, x + 1 == l) {
                (true, true) => 3,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 0,
            };
            let idx = *cache[r][col].get_or_insert_with(|| {
                let set = match col {
                    0 => base[r].clone(),
                    1 => base[r].restrict_edge(Side::Left, BOUNDARY),
                    2 => base[r].restrict_edge(Side::Right, BOUNDARY),
                    _ => base[r]
                        .restrict_edge(Side::Left, BOUNDARY)
                        .restrict_edge(Side::Right, BOUNDARY),
                };
                sets.push(set);
                sets.len() - 1
            });
            steps.push(idx);
        }
    }
    let readouts = vec![(l * h, Readout::FirstEntry)];
    Ok(TilingProgram::new(l, sets, steps, readouts)?)
}

/// Torus: both edge pairs glued. The top/bottom gluing doubles the
/// vertical characters, then the seam column closes the rows.
pub fn compile_torus(
    ts: &WeightedTileSet,
    l: usize,
    h: usize,
) -> Result<TilingProgram, RegionError> {
    if l == 0 || h == 0 {
        return Err(RegionError::ZeroDim);
    }
    let doubled = doubled_vertical_alphabet(ts.vertical());
    let (top, mid, bottom, single) = doubled_row_sets(ts, &doubled);
    let merged = seam_vertical_alphabet(ts.horizontal(), &doubled);
    let seam = seam_set(ts.horizontal(), &merged);
    let rows = [
        top.reindexed(ts.horizontal(), &merged)?,
        mid.reindexed(ts.horizontal(), &merged)?,
        bottom.reindexed(ts.horizontal(), &merged)?,
        single.reindexed(ts.horizontal(), &merged)?,
    ];
    let row_for = |y: usize| {
        if h == 1 {
            3
        } else if y == 0 {
            0
        } else if y == h - 1 {
            2
        } else {
            1
        }
    };
    let [row_top, row_mid, row_bottom, row_single] = rows;
    let sets = vec![seam, row_top, row_mid, row_bottom, row_single];
    let mut steps = vec![0];
    for y in 0..h {
        let set_idx = match row_for(y) {
            0 => 1,
            1 => 2,
            2 => 3,
            _ => 4,
        };
        steps.extend(std::iter::repeat(set_idx).take(l));
        steps.push(0);
    }
    let readouts = vec![(1 + h * (l + 1), Readout::FirstEntry)];
    Ok(TilingProgram::new(l + 1, sets, steps, readouts)?)
}

/// Orientation advice for a width-`l`, height-`h` rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    AsIs,
    Transposed,
}

/// Transpose whenever `sigma^l * theta > theta^h * sigma`, comparing in
/// arbitrary precision.
pub fn choose_orientation(ts: &WeightedTileSet, l: usize, h: usize) -> Orientation {
    let sigma = BigUint::from(ts.sigma());
    let theta = BigUint::from(ts.theta());
    let as_is = sigma.pow(l as u32) * &theta;
    let flipped = theta.pow(h as u32) * &sigma;
    if as_is > flipped {
        Orientation::Transposed
    } else {
        Orientation::AsIs
    }
}

/// Plans primes for a program and runs the exact enumeration. A program
/// whose tile sets are all empty admits no tiling anywhere, so it counts
/// zero without touching the prime machinery (which would reject the
/// all-zero column statistics).
pub fn enumerate_program(
    program: &TilingProgram,
    word_bits: u32,
    tau: u32,
    jobs: usize,
) -> Result<Enumeration, RegionError> {
    let stats = program.stats();
    if stats.is_empty() {
        return Ok(Enumeration {
            counts: vec![BigUint::default(); program.readouts().len()],
            primes_used: 0,
        });
    }
    let plan = PrimePlan::new(&stats, word_bits, 100).map_err(EngineError::from)?;
    Ok(program.enumerate_parallel(&plan, tau, jobs)?)
}

/// Exact counts for heights 1..=`max_height` at width `l` (no
/// transposition: the whole column comes from one pass).
pub fn count_rectangle_heights(
    ts: &WeightedTileSet,
    l: usize,
    max_height: usize,
    word_bits: u32,
    tau: u32,
) -> Result<Enumeration, RegionError> {
    let program = compile_rectangle(ts, l, max_height)?;
    enumerate_program(&program, word_bits, tau, 1)
}

/// Exact count for a single `l x h` rectangle, transposing first when
/// that shrinks the state tensor.
pub fn count_rectangle(
    ts: &WeightedTileSet,
    l: usize,
    h: usize,
) -> Result<BigUint, RegionError> {
    let (ts, l, h) = match choose_orientation(ts, l, h) {
        Orientation::AsIs => (ts.clone(), l, h),
        Orientation::Transposed => (ts.transpose(), h, l),
    };
    let result = count_rectangle_heights(&ts, l, h, 32, 2)?;
    Ok(result.counts.last().cloned().unwrap_or_else(BigUint::one))
}

// Log state-tensor sizes of the glued compilations, for orientation
// decisions. The seam column costs one extra slot; character doubling
// squares the per-slot alphabet.
fn log_state_cylv(ts: &WeightedTileSet, l: usize) -> f64 {
    let merged = (ts.sigma() + ts.theta() - 1) as f64;
    merged.ln() * (l as f64 + 1.0) + (ts.theta() as f64).ln()
}

fn log_state_cylh(ts: &WeightedTileSet, l: usize) -> f64 {
    let doubled = (ts.sigma() * ts.sigma() + 1) as f64;
    doubled.ln() * l as f64 + (ts.theta() as f64).ln()
}

fn log_state_torus(ts: &WeightedTileSet, l: usize) -> f64 {
    let merged = (ts.sigma() * ts.sigma() + ts.theta()) as f64;
    merged.ln() * (l as f64 + 1.0) + (ts.theta() as f64).ln()
}

/// Single-readout program for a glued region, choosing between the
/// equivalent compilations (a row-wrapped board of the transposed set is
/// a column-wrapped board of the original, and the torus transposes onto
/// itself) by estimated state size.
pub fn oriented_glued_program(
    ts: &WeightedTileSet,
    kind: RegionKind,
    l: usize,
    h: usize,
) -> Result<TilingProgram, RegionError> {
    let program = match kind {
        RegionKind::Rectangle | RegionKind::Mask => return Err(RegionError::ZeroDim),
        RegionKind::CylinderVertical => {
            if log_state_cylv(ts, l) <= log_state_cylh(&ts.transpose(), h) {
                keep_last_readout(compile_cylinder_vertical(ts, l, h)?)?
            } else {
                compile_cylinder_horizontal(&ts.transpose(), h, l)?
            }
        }
        RegionKind::CylinderHorizontal => {
            if log_state_cylh(ts, l) <= log_state_cylv(&ts.transpose(), h) {
                compile_cylinder_horizontal(ts, l, h)?
            } else {
                keep_last_readout(compile_cylinder_vertical(&ts.transpose(), h, l)?)?
            }
        }
        RegionKind::Torus => {
            if log_state_torus(ts, l) <= log_state_torus(&ts.transpose(), h) {
                compile_torus(ts, l, h)?
            } else {
                compile_torus(&ts.transpose(), h, l)?
            }
        }
    };
    Ok(program)
}

/// Exact count of one glued region (rectangles go through
/// [`count_rectangle`]).
pub fn count_region(
    ts: &WeightedTileSet,
    kind: RegionKind,
    l: usize,
    h: usize,
) -> Result<BigUint, RegionError> {
    if kind == RegionKind::Rectangle {
        return count_rectangle(ts, l, h);
    }
    let program = oriented_glued_program(ts, kind, l, h)?;
    let result = enumerate_program(&program, 32, 2, 1)?;
    Ok(result.counts.last().cloned().unwrap_or_else(BigUint::one))
}

fn keep_last_readout(program: TilingProgram) -> Result<TilingProgram, RegionError> {
    let last = *program.readouts().last().expect("compiled programs read out");
    Ok(TilingProgram::new(
        program.width(),
        program.sets().to_vec(),
        program.steps().to_vec(),
        vec![last],
    )?)
}
