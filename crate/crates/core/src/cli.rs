//! Command-line front end. Each subcommand parses its flags, calls one
//! library operation and formats the result.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use crate::cells::{CellId, CellTable};
use crate::error::Result;
use crate::imaging::{edge_detect, load_pgm, save_pgm};
use crate::metrics::{
    cell_stats, exhaustive_report_with, sampled_report, ErrorReport, InputDistribution,
};
use crate::multiplier::{static_error_bound, Multiplier, MultiplierConfig, Variant};
use crate::ppm::{compensation_constant, compensation_estimate, truncated_max};

const PRESET_HELP: &str = "Design presets: exact, proposed, ac1 (Esposito2018), ac2 (Guo2019), \
ac3 (Strollo2020), ac4 (Laimin), ac5 (Du2022)";

#[derive(Parser, Debug)]
#[command(
    name = "signfocus",
    version,
    about = "Bit-accurate sign-focused compressors and approximate signed multipliers",
    after_help = PRESET_HELP
)]
pub struct Cli {
    /// Worker threads for sweeps and convolution (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Multiplier configuration file (`key = value` lines); overrides
    /// --design and --width
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every row of a cell's truth table
    TruthTable {
        #[arg(long)]
        cell: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Error probability and mean error of a cell under AND/NAND input statistics
    CellStats {
        #[arg(long)]
        cell: String,
    },
    /// Error metrics of one design over its operand space
    Analyze {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
        /// Draw this many random operand pairs instead of sweeping all of them
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 1, requires = "sample")]
        seed: u64,
    },
    /// Error metrics of every preset as one CSV table
    Compare {
        #[arg(long, default_value_t = 8)]
        width: u32,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst-case error distance of a design and its components
    Bound {
        #[command(flatten)]
        design: DesignArgs,
    },
    /// Laplacian edge detection of a PGM image through a design's multiplier
    EdgeDetect {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also print PSNR against the exact design's edge map
        #[arg(long)]
        psnr: bool,
    },
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[arg(long, default_value = "proposed")]
    design: String,
    #[arg(long, default_value_t = 8)]
    width: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Text,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 usage error, 2 data or I/O error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_data_error() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::TruthTable { cell, format } => truth_table(cell.parse()?, *format, out),
        Command::CellStats { cell } => stats(cell.parse()?, out),
        Command::Analyze {
            design,
            json,
            csv,
            sample,
            seed,
        } => {
            let cfg = resolve(cli, design)?;
            let report = match sample {
                Some(k) => sampled_report(&cfg, *k, *seed, cli.threads)?,
                None => exhaustive_report_with(&cfg, cli.threads)?,
            };
            let name = cfg.variant.name();
            if *json {
                writeln!(out, "{}", report.to_json())?;
            } else if *csv {
                writeln!(out, "{}", ErrorReport::CSV_HEADER)?;
                writeln!(out, "{}", report.csv_row(name))?;
            } else {
                let stages = Multiplier::new(cfg)?.trace().stage_count();
                let mode = if sample.is_some() {
                    "sampled"
                } else {
                    "exhaustive"
                };
                write_report(out, name, &cfg, mode, &report, stages)?;
            }
            Ok(())
        }
        Command::Compare { width, out: path } => {
            let mut text = format!("{}\n", ErrorReport::CSV_HEADER);
            for v in Variant::PRESETS {
                let cfg = MultiplierConfig::preset(v, *width)?;
                let report = exhaustive_report_with(&cfg, cli.threads)?;
                text.push_str(&report.csv_row(v.name()));
                text.push('\n');
            }
            match path {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Bound { design } => {
            let cfg = resolve(cli, design)?;
            bound(&cfg, out)
        }
        Command::EdgeDetect {
            input,
            design,
            out: path,
            psnr,
        } => {
            let cfg = resolve(cli, design)?;
            let img = load_pgm(&fs::read(input)?)?;
            let (edges, score) = edge_detect(&img, &cfg, cli.threads)?;
            fs::write(path, save_pgm(&edges))?;
            if *psnr {
                writeln!(out, "psnr {score}")?;
            }
            Ok(())
        }
    }
}

fn resolve(cli: &Cli, design: &DesignArgs) -> Result<MultiplierConfig> {
    match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            MultiplierConfig::parse(&text)
        }
        None => MultiplierConfig::preset(design.design.parse()?, design.width),
    }
}

fn bits(bits: &[u8]) -> String {
    bits.iter().map(|b| char::from(b'0' + b)).collect()
}

fn truth_table(id: CellId, format: Format, out: &mut dyn Write) -> Result<()> {
    let t = id.table();
    let col = |row: &[u8], name: &str| {
        t.output(name)
            .map(|k| row[k].to_string())
            .unwrap_or_default()
    };
    match format {
        Format::Csv => writeln!(out, "inputs,cout,carry,sum,value,exact,ed")?,
        Format::Text => {
            writeln!(
                out,
                "{} ({} inputs{})",
                t.name,
                t.arity,
                if t.has_const_one { " + 1" } else { "" }
            )?;
            writeln!(
                out,
                "{:>6} {:>4} {:>5} {:>3} {:>5} {:>5} {:>3}",
                "inputs", "cout", "carry", "sum", "value", "exact", "ed"
            )?;
        }
    }
    for index in 0..t.row_count() {
        let row = &t.rows[index];
        let cells = [
            bits(&t.inputs_of(index)),
            col(row, "cout"),
            col(row, "carry"),
            col(row, "sum"),
            t.output_value(index).to_string(),
            t.exact_value(index).to_string(),
            t.error(index).unsigned_abs().to_string(),
        ];
        match format {
            Format::Csv => writeln!(out, "{}", cells.join(","))?,
            Format::Text => writeln!(
                out,
                "{:>6} {:>4} {:>5} {:>3} {:>5} {:>5} {:>3}",
                cells[0], cells[1], cells[2], cells[3], cells[4], cells[5], cells[6]
            )?,
        }
    }
    Ok(())
}

/// `p` over the cell's natural denominator `4^arity` when it divides,
/// e.g. 18/64 rather than 9/32.
fn fraction(p: Ratio<i64>, table: &CellTable) -> String {
    let denom = 1i64 << (2 * table.arity);
    if denom % p.denom() == 0 {
        format!("{}/{}", p.numer() * (denom / p.denom()), denom)
    } else {
        p.to_string()
    }
}

fn decimal(p: Ratio<i64>) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

fn stats(id: CellId, out: &mut dyn Write) -> Result<()> {
    let t = id.table();
    let s = cell_stats(t, &InputDistribution::for_cell(t))?;
    writeln!(out, "cell    {}", t.name)?;
    writeln!(
        out,
        "p_e     {} = {:.6}",
        fraction(s.p_e, t),
        decimal(s.p_e)
    )?;
    writeln!(
        out,
        "e_mean  {} = {:.6}",
        fraction(s.e_mean, t),
        decimal(s.e_mean)
    )?;
    if id == CellId::Abc1Approx {
        writeln!(
            out,
            "note    a figure of 0.0140 is sometimes quoted for this cell; enumerating its three error rows (3/64 each) gives 9/64 = 0.140625"
        )?;
    }
    Ok(())
}

fn write_report(
    out: &mut dyn Write,
    name: &str,
    cfg: &MultiplierConfig,
    mode: &str,
    r: &ErrorReport,
    stages: usize,
) -> Result<()> {
    writeln!(
        out,
        "design   {name} (width {}, {mode}, {} pairs)",
        cfg.width, r.pairs
    )?;
    writeln!(out, "er       {:.6} ({:.2} %)", r.er, 100.0 * r.er)?;
    writeln!(out, "nmed     {:.6} ({:.3} %)", r.nmed, 100.0 * r.nmed)?;
    writeln!(out, "mred     {:.6} ({:.2} %)", r.mred, 100.0 * r.mred)?;
    writeln!(out, "mean_ed  {:.4}", r.mean_ed)?;
    writeln!(out, "max_ed   {}", r.max_ed)?;
    writeln!(
        out,
        "mred skips {} pairs with a zero exact product",
        r.zero_exact_skipped
    )?;
    writeln!(out, "stages   {stages} (including final addition)")?;
    Ok(())
}

fn bound(cfg: &MultiplierConfig, out: &mut dyn Write) -> Result<()> {
    let n = cfg.width;
    writeln!(out, "design        {} (width {n})", cfg.variant)?;
    if cfg.truncation {
        writeln!(out, "truncated     {}", truncated_max(n))?;
    }
    if cfg.compensation {
        let t = compensation_estimate(n);
        let k = compensation_constant(n);
        writeln!(
            out,
            "compensation  {k} (expected truncated value {t} = {:.2}, residual {})",
            decimal(t),
            t - Ratio::from_integer(k)
        )?;
        writeln!(out, "substituted   {}", 1u64 << n)?;
    }
    let cells = static_error_bound(cfg)
        - if cfg.truncation {
            truncated_max(n) as u64
        } else {
            0
        }
        - if cfg.compensation {
            compensation_constant(n) as u64 + (1u64 << n)
        } else {
            0
        };
    writeln!(out, "cells         {cells}")?;
    writeln!(out, "bound         {}", static_error_bound(cfg))?;
    Ok(())
}
