//! Command-line front end: load tile sets, shapes or masks, compile a
//! region, run the exact enumeration and print the sequence.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use wangcount::engine::{EngineError, TilingProgram};
use wangcount::modmath::PrimePlan;
use wangcount::oracle::{self, Board};
use wangcount::polyomino::{self, Decomposition, PolyominoSet};
use wangcount::regions;
use wangcount::tiles::{parse_tile_set, WeightedTileSet};

const EXIT_USAGE: u8 = 1;
const EXIT_UNCONVERGED: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "wangcount",
    about = "Exact enumeration of Wang and polyomino tilings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count tilings of a region, one exact value per readout height.
    Enumerate(EnumerateArgs),
    /// Check a shape translation against the brute-force tiler.
    Validate(ValidateArgs),
    /// Brute-force count on a small board (ground truth).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct TileSource {
    /// Named tile translation from the built-in catalog.
    #[arg(long, value_name = "NAME")]
    catalog: Option<String>,
    /// Tile-set file: `left top bottom right weight` per line.
    #[arg(long, value_name = "FILE")]
    tiles: Option<PathBuf>,
    /// Polyomino file (# blocks); translated via unique edge characters.
    #[arg(long, value_name = "FILE")]
    polyominoes: Option<PathBuf>,
    /// Use the published tile lists verbatim, without corrections.
    #[arg(long, default_value_t = false)]
    literal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegionArg {
    Rect,
    Mask,
    Cylv,
    Cylh,
    Torus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Plain,
    Bfile,
    Json,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    source: TileSource,
    #[arg(long, value_enum, default_value_t = RegionArg::Rect)]
    region: RegionArg,
    #[arg(long)]
    width: Option<usize>,
    /// Single height; for rectangles the orientation heuristic applies.
    #[arg(long, conflicts_with = "max_height")]
    height: Option<usize>,
    /// Read out every height 1..=H in one pass.
    #[arg(long)]
    max_height: Option<usize>,
    /// Mask file for --region mask ('.' cell, 'X' hole).
    #[arg(long, value_name = "FILE")]
    mask: Option<PathBuf>,
    /// Halting threshold: stop after this many stable reconstructions.
    #[arg(long, default_value_t = 2)]
    tau: u32,
    #[arg(long, default_value_t = 32, value_parser = parse_word_bits)]
    word_bits: u32,
    /// How many primes to put in the plan.
    #[arg(long, default_value_t = 100)]
    primes: usize,
    /// Cap the prime search to start at this value.
    #[arg(long)]
    prime_start: Option<u64>,
    /// Keep only tilings with exactly N pieces (root tiles).
    #[arg(long, value_name = "N", conflicts_with = "count_mod")]
    count_exact: Option<u32>,
    /// Keep only tilings whose piece count is R mod M (format M:R).
    #[arg(long, value_name = "M:R", value_parser = parse_count_mod)]
    count_mod: Option<(u32, u32)>,
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
    /// Run up to N primes concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    source: TileSource,
    /// Check every rectangle with l*h up to this area.
    #[arg(long, default_value_t = 20)]
    max_area: u32,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    source: TileSource,
    #[arg(long, value_enum, default_value_t = RegionArg::Rect)]
    region: RegionArg,
    #[arg(long)]
    width: u32,
    #[arg(long)]
    height: u32,
    /// Refuse boards larger than this many cells.
    #[arg(long, default_value_t = 30)]
    area_cap: u32,
}

fn parse_word_bits(s: &str) -> Result<u32, String> {
    match s {
        "32" => Ok(32),
        "64" => Ok(64),
        _ => Err("word width must be 32 or 64".into()),
    }
}

fn parse_count_mod(s: &str) -> Result<(u32, u32), String> {
    let (m, r) = s.split_once(':').ok_or("expected M:R")?;
    let m: u32 = m.parse().map_err(|_| "bad modulus")?;
    let r: u32 = r.parse().map_err(|_| "bad residue")?;
    if m == 0 || r >= m {
        return Err("need 0 <= R < M".into());
    }
    Ok((m, r))
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Unconverged(String),
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Unconverged(_) => EXIT_UNCONVERGED,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Unconverged(m) | CliError::Validation(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

/// Resolved tile source: the tile set plus, when known, its shape set.
struct Source {
    tiles: WeightedTileSet,
    decomposition: Option<Decomposition>,
    label: String,
}

impl TileSource {
    fn resolve(&self) -> Result<Source, CliError> {
        let picked = [
            self.catalog.is_some(),
            self.tiles.is_some(),
            self.polyominoes.is_some(),
        ]
        .iter()
        .filter(|&&x| x)
        .count();
        if picked != 1 {
            return Err(CliError::Usage(
                "exactly one of --catalog, --tiles, --polyominoes is required".into(),
            ));
        }
        if let Some(name) = &self.catalog {
            let d = if self.literal {
                polyomino::catalog_literal(name)
            } else {
                polyomino::catalog(name)
            }
            .map_err(usage)?;
            return Ok(Source {
                tiles: d.tiles.clone(),
                label: name.clone(),
                decomposition: Some(d),
            });
        }
        if let Some(path) = &self.tiles {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let tiles = parse_tile_set(&text).map_err(usage)?;
            return Ok(Source {
                tiles,
                decomposition: None,
                label: path.display().to_string(),
            });
        }
        let path = self.polyominoes.as_ref().unwrap();
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let shapes = polyomino::parse_polyominoes(&text).map_err(usage)?;
        let set = PolyominoSet::new(shapes).map_err(usage)?;
        let d = polyomino::generic_decomposition(&set);
        Ok(Source {
            tiles: d.tiles.clone(),
            label: path.display().to_string(),
            decomposition: Some(d),
        })
    }
}

#[derive(Serialize)]
struct JsonOutput {
    source: String,
    region: String,
    width: usize,
    results: Vec<JsonResult>,
    word_bits: u32,
    tau: u32,
    p_bar: String,
    primes_used: usize,
    state_len: usize,
    wall_time_s: f64,
}

#[derive(Serialize)]
struct JsonResult {
    h: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    count_restricted_to: Option<u32>,
    count: String,
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<(), CliError> {
    let source = args.source.resolve()?;
    let ts = &source.tiles;
    let region_name = match args.region {
        RegionArg::Rect => "rect",
        RegionArg::Mask => "mask",
        RegionArg::Cylv => "cylv",
        RegionArg::Cylh => "cylh",
        RegionArg::Torus => "torus",
    };

    let counter = match (args.count_exact, args.count_mod) {
        (Some(n), None) => Some((n + 1, false, n)),
        (None, Some((m, r))) => Some((m, true, r)),
        (None, None) => None,
        _ => unreachable!("clap conflicts_with"),
    };
    if counter.is_some() && args.region != RegionArg::Rect {
        return Err(CliError::Usage(
            "piece-count restrictions are supported for --region rect only".into(),
        ));
    }

    // (program, heights labelling each readout row)
    let (program, heights): (TilingProgram, Vec<usize>) = match args.region {
        RegionArg::Rect => {
            let width = args.width.ok_or_else(|| usage("--width is required"))?;
            let max_h = match (args.height, args.max_height) {
                (Some(h), None) => h,
                (None, Some(h)) => h,
                (None, None) => {
                    return Err(usage("one of --height or --max-height is required"))
                }
                _ => unreachable!(),
            };
            let single = args.height.is_some();
            let (ts_oriented, width, max_h) = if single && counter.is_none() {
                match regions::choose_orientation(ts, width, max_h) {
                    regions::Orientation::Transposed => (ts.transpose(), max_h, width),
                    regions::Orientation::AsIs => (ts.clone(), width, max_h),
                }
            } else {
                (ts.clone(), width, max_h)
            };
            let program = match counter {
                Some((nu, modular, _)) => regions::compile_rectangle_counter(
                    &ts_oriented,
                    width,
                    max_h,
                    nu,
                    modular,
                    polyomino::is_growth_root,
                )
                .map_err(usage)?,
                None => regions::compile_rectangle(&ts_oriented, width, max_h).map_err(usage)?,
            };
            let per_row = counter.map(|(nu, _, _)| nu as usize).unwrap_or(1);
            if single {
                // Keep only the final row's readouts, labelled with the
                // height the caller asked for.
                let readouts: Vec<_> = program
                    .readouts()
                    .iter()
                    .copied()
                    .rev()
                    .take(per_row)
                    .rev()
                    .collect();
                let program = TilingProgram::new(
                    program.width(),
                    program.sets().to_vec(),
                    program.steps().to_vec(),
                    readouts,
                )
                .map_err(usage)?;
                let heights = vec![args.height.unwrap(); per_row];
                (program, heights)
            } else {
                let heights =
                    (1..=max_h).flat_map(|h| std::iter::repeat(h).take(per_row)).collect();
                (program, heights)
            }
        }
        RegionArg::Mask => {
            let path = args.mask.as_ref().ok_or_else(|| usage("--mask is required"))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let mask = regions::parse_mask(&text).map_err(usage)?;
            let h = mask.height();
            let program = regions::compile_mask(ts, &mask).map_err(usage)?;
            (program, vec![h])
        }
        RegionArg::Cylv if args.max_height.is_some() => {
            let width = args.width.ok_or_else(|| usage("--width is required"))?;
            let max_h = args.max_height.unwrap();
            let program =
                regions::compile_cylinder_vertical(ts, width, max_h).map_err(usage)?;
            (program, (1..=max_h).collect())
        }
        RegionArg::Cylv | RegionArg::Cylh | RegionArg::Torus => {
            let width = args.width.ok_or_else(|| usage("--width is required"))?;
            let h = args.height.ok_or_else(|| usage("--height is required"))?;
            let kind = match args.region {
                RegionArg::Cylv => regions::RegionKind::CylinderVertical,
                RegionArg::Cylh => regions::RegionKind::CylinderHorizontal,
                _ => regions::RegionKind::Torus,
            };
            let program = regions::oriented_glued_program(ts, kind, width, h).map_err(usage)?;
            (program, vec![h])
        }
    };

    let stats = program.stats();
    let started = Instant::now();
    let (result, p_bar) = if stats.is_empty() {
        // No tiles anywhere: every readout is zero.
        let result = wangcount::engine::Enumeration {
            counts: vec![BigUint::default(); program.readouts().len()],
            primes_used: 0,
        };
        (result, "0".to_string())
    } else {
        let mut plan = PrimePlan::new(&stats, args.word_bits, args.primes).map_err(usage)?;
        if let Some(start) = args.prime_start {
            let capped = start.min(u64::try_from(plan.upper_bound()).unwrap_or(u64::MAX));
            plan = PrimePlan::from_parts(
                plan.upper_bound(),
                wangcount::modmath::primes_descending(capped, args.primes).map_err(usage)?,
                plan.signed(),
                plan.word_bits(),
            );
        }
        let result = program
            .enumerate_parallel(&plan, args.tau, args.jobs)
            .map_err(|e| match e {
                EngineError::Unconverged(open) => CliError::Unconverged(format!(
                    "primes exhausted before convergence; readouts {open:?} still open \
                     (try --primes with a larger count)"
                )),
                other => usage(other),
            })?;
        (result, plan.upper_bound().to_string())
    };
    let elapsed = started.elapsed().as_secs_f64();

    // When a counter restriction is active, print only the requested
    // residue for each height.
    let mut rows: Vec<(usize, Option<u32>, BigUint)> = Vec::new();
    match counter {
        Some((nu, _, want)) => {
            for (i, count) in result.counts.iter().enumerate() {
                let k = (i % nu as usize) as u32;
                if k == want {
                    rows.push((heights[i], Some(k), count.clone()));
                }
            }
        }
        None => {
            for (i, count) in result.counts.iter().enumerate() {
                rows.push((heights[i], None, count.clone()));
            }
        }
    }

    match args.format {
        FormatArg::Plain => {
            for (h, _, count) in &rows {
                println!("h {h} N {count}");
            }
        }
        FormatArg::Bfile => {
            for (h, _, count) in &rows {
                println!("{h} {count}");
            }
        }
        FormatArg::Json => {
            let out = JsonOutput {
                source: source.label.clone(),
                region: region_name.to_string(),
                width: program.width(),
                results: rows
                    .iter()
                    .map(|(h, k, c)| JsonResult {
                        h: *h,
                        count_restricted_to: *k,
                        count: c.to_string(),
                    })
                    .collect(),
                word_bits: args.word_bits,
                tau: args.tau,
                p_bar: p_bar.clone(),
                primes_used: result.primes_used,
                state_len: program.state_len(),
                wall_time_s: elapsed,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    // Accepted sources: a catalog entry, a polyomino file (translated
    // via unique edge characters), or a tile file paired with the
    // polyomino file naming the shapes it claims to translate.
    let mut d = match (&args.source.catalog, &args.source.tiles, &args.source.polyominoes) {
        (Some(_), None, None) | (None, None, Some(_)) => {
            let source = args.source.resolve()?;
            source.decomposition.expect("catalog and shape sources carry shapes")
        }
        (None, Some(tile_path), Some(shape_path)) => {
            let text = std::fs::read_to_string(tile_path)
                .map_err(|e| usage(format!("{}: {e}", tile_path.display())))?;
            let tiles = parse_tile_set(&text).map_err(usage)?;
            let text = std::fs::read_to_string(shape_path)
                .map_err(|e| usage(format!("{}: {e}", shape_path.display())))?;
            let shapes = polyomino::parse_polyominoes(&text).map_err(usage)?;
            let set = PolyominoSet::new(shapes).map_err(usage)?;
            Decomposition::new(
                tiles,
                set,
                wangcount::polyomino::CorrespondenceKind::EnumerationCorrespondence,
            )
        }
        _ => {
            return Err(CliError::Usage(
                "validate needs --catalog NAME, --polyominoes FILE, or --tiles FILE with \
                 --polyominoes FILE"
                    .into(),
            ))
        }
    };
    let report = d.validate(args.max_area);
    println!("{:>4} {:>4}  {:>16}  {:>16}  status", "l", "h", "engine", "oracle");
    let engine_str = |e: &Option<num_bigint::BigUint>| match e {
        Some(v) => v.to_string(),
        None => "unconverged".to_string(),
    };
    for check in &report.checks {
        println!(
            "{:>4} {:>4}  {:>16}  {:>16}  {}",
            check.l,
            check.h,
            engine_str(&check.engine),
            check.oracle,
            if check.ok { "ok" } else { "MISMATCH" }
        );
    }
    if report.pass {
        println!("PASS ({} boards)", report.checks.len());
        Ok(())
    } else {
        let witness = report.witness().expect("failing report has a witness");
        println!("FAIL (witness {}x{})", witness.l, witness.h);
        Err(CliError::Validation(format!(
            "validation failed on the {}x{} board: engine {} vs oracle {}",
            witness.l,
            witness.h,
            engine_str(&witness.engine),
            witness.oracle
        )))
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let source = args.source.resolve()?;
    let board = match args.region {
        RegionArg::Rect | RegionArg::Mask => Board::rectangle(args.width, args.height),
        RegionArg::Cylv => Board::rectangle(args.width, args.height).wrap_horizontal(true),
        RegionArg::Cylh => Board::rectangle(args.width, args.height).wrap_vertical(true),
        RegionArg::Torus => Board::rectangle(args.width, args.height)
            .wrap_horizontal(true)
            .wrap_vertical(true),
    }
    .with_area_cap(args.area_cap);
    let value = match &source.decomposition {
        Some(d) => oracle::count_polyomino_tilings(&d.source, &board)
            .map_err(usage)?
            .into(),
        None => oracle::count_wang_tilings(&source.tiles, &board).map_err(usage)?,
    };
    println!("{value}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap print help/version normally; everything else is a
            // usage error with exit code 1.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = match &cli.command {
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
