//! Complete signed multipliers assembled from a partial-product matrix and
//! a cell assignment.
//!
//! A [`MultiplierConfig`] is compiled once into a [`Multiplier`], a flat
//! netlist of cells over numbered signals. Evaluating a product then walks the
//! netlist in order, so sweeps over millions of operand pairs stay cheap.
//!
//! Centre-region wiring (columns `N-1` and `N`):
//!
//! * column `N-1` holds two `A + B + C + 1` cells, one per negated operand
//!   row. Cell 0 takes `~a_{N-1}b_0`, cell 1 takes `~a_0b_{N-1}`, each with the
//!   two AND bits nearest to it on the diagonal. Their built-in `+1`s are the
//!   two row-complement ones, which is exactly the Baugh-Wooley constant at
//!   `2^N` before it is folded.
//! * column `N` holds one `A + B + C + D + 1` cell fed by `~a_1b_{N-1}` and
//!   three AND bits; its `+1` is the constant that replaced `~a_{N-1}b_1`.
//!   Without compensation there is no such constant and the column is reduced
//!   with standard cells.
//!
//! Everything else is reduced with exact 4:2 compressors and full adders,
//! stage by stage, until every column holds at most two bits; a final
//! carry-propagate addition closes the product.

use std::fmt;
use std::str::FromStr;

use crate::cells::{CellId, Competitor, Polarity};
use crate::error::{Error, Result};
use crate::ppm::{
    apply_compensation, apply_truncation, check_width, compensation_constant, generate_bw,
    partition, truncated_max, wrap_signed, ConstKind, PPBit, PpSource, SignedWord,
};

/// Which family of centre cells a configuration belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Exact,
    Proposed,
    Competitor(Competitor),
}

impl Variant {
    /// Every named preset, in report order.
    pub const PRESETS: [Variant; 7] = [
        Variant::Exact,
        Variant::Competitor(Competitor::Ac1),
        Variant::Competitor(Competitor::Ac2),
        Variant::Competitor(Competitor::Ac3),
        Variant::Competitor(Competitor::Ac4),
        Variant::Competitor(Competitor::Ac5),
        Variant::Proposed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Exact => "exact",
            Variant::Proposed => "proposed",
            Variant::Competitor(c) => c.name(),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Variant::Exact),
            "proposed" => Ok(Variant::Proposed),
            other => other
                .parse::<Competitor>()
                .map(Variant::Competitor)
                .map_err(|_| Error::UnknownDesign(s.to_string())),
        }
    }
}

/// Reduction used outside the centre region. Only exact reduction exists.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MspStrategy {
    #[default]
    Exact,
}

/// The three sign-focused cells of the centre region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CspCells {
    /// The two `A + B + C + 1` cells in column `N-1`.
    pub low: [CellId; 2],
    /// The `A + B + C + D + 1` cell in column `N`.
    pub high: CellId,
}

impl CspCells {
    pub fn all_exact(&self) -> bool {
        self.cells().all(|c| c.table().exact)
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        [self.low[0], self.low[1], self.high].into_iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiplierConfig {
    pub width: u32,
    pub variant: Variant,
    pub csp_cells: CspCells,
    pub msp_strategy: MspStrategy,
    pub truncation: bool,
    pub compensation: bool,
}

impl MultiplierConfig {
    /// Named preset at the given width.
    pub fn preset(variant: Variant, width: u32) -> Result<Self> {
        check_width(width)?;
        let (low, approx) = match variant {
            Variant::Exact => (CellId::Abc1Exact, false),
            Variant::Proposed => (CellId::Abc1Approx, true),
            Variant::Competitor(c) => (c.cell(), true),
        };
        Ok(Self {
            width,
            variant,
            csp_cells: CspCells {
                low: [low, low],
                high: CellId::Abcd1Exact,
            },
            msp_strategy: MspStrategy::Exact,
            truncation: approx,
            compensation: approx,
        })
    }

    pub fn exact(width: u32) -> Result<Self> {
        Self::preset(Variant::Exact, width)
    }

    pub fn proposed(width: u32) -> Result<Self> {
        Self::preset(Variant::Proposed, width)
    }

    pub fn validate(&self) -> Result<()> {
        check_width(self.width)?;
        let bad = |msg: String| Err(Error::Config(msg));
        for (k, cell) in self.csp_cells.low.iter().enumerate() {
            if !cell.is_abc1_shaped() {
                return bad(format!("csp cell {k} must be an A+B+C+1 cell, got {cell}"));
            }
        }
        if !self.csp_cells.high.is_abcd1_shaped() {
            return bad(format!(
                "csp cell 2 must be an A+B+C+D+1 cell, got {}",
                self.csp_cells.high
            ));
        }
        if self.compensation && !self.truncation {
            return bad("compensation requires truncation".into());
        }
        if self.variant == Variant::Exact
            && (self.truncation || self.compensation || !self.csp_cells.all_exact())
        {
            return bad(
                "the exact variant cannot truncate, compensate or use approximate cells".into(),
            );
        }
        Ok(())
    }

    /// Parses a `key = value` document. Unknown keys are rejected; missing
    /// keys fall back to the preset named by `variant`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut width = None;
        let mut variant = None;
        let mut truncation = None;
        let mut compensation = None;
        let mut cells: Option<Vec<CellId>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let value = value.trim();
            match key.trim() {
                "width" => {
                    width = Some(value.parse::<u32>().map_err(|_| {
                        Error::Config(format!("line {}: bad width `{value}`", lineno + 1))
                    })?)
                }
                "variant" => variant = Some(value.parse::<Variant>()?),
                "truncation" => truncation = Some(parse_switch(value, lineno)?),
                "compensation" => compensation = Some(parse_switch(value, lineno)?),
                "csp_cells" => {
                    cells = Some(
                        value
                            .split(',')
                            .map(str::parse::<CellId>)
                            .collect::<Result<_>>()?,
                    )
                }
                "msp_strategy" | "msp" => {
                    if value != "exact" {
                        return Err(Error::Config(format!("unknown msp strategy `{value}`")));
                    }
                }
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        let width = width.ok_or_else(|| Error::Config("missing `width`".into()))?;
        let variant = variant.unwrap_or(Variant::Proposed);
        let mut cfg = Self::preset(variant, width)?;
        if let Some(t) = truncation {
            cfg.truncation = t;
        }
        if let Some(c) = compensation {
            cfg.compensation = c;
        }
        if let Some(cells) = cells {
            let [lo0, lo1, hi] = cells[..] else {
                return Err(Error::Config(format!(
                    "csp_cells lists {} cells, expected 3",
                    cells.len()
                )));
            };
            cfg.csp_cells = CspCells {
                low: [lo0, lo1],
                high: hi,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let on = |b: bool| if b { "on" } else { "off" };
        format!(
            "width = {}\nvariant = {}\ntruncation = {}\ncompensation = {}\ncsp_cells = {}, {}, {}\nmsp_strategy = exact\n",
            self.width,
            self.variant,
            on(self.truncation),
            on(self.compensation),
            self.csp_cells.low[0],
            self.csp_cells.low[1],
            self.csp_cells.high,
        )
    }
}

fn parse_switch(value: &str, lineno: usize) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!(
            "line {}: expected on/off, got `{value}`",
            lineno + 1
        ))),
    }
}

/// Column heights before reduction and after every reduction stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// `occupancy[0]` is the transformed matrix; `occupancy[s]` the columns
    /// after stage `s`.
    pub occupancy: Vec<Vec<usize>>,
}

impl ReductionTrace {
    pub fn reduction_stages(&self) -> usize {
        self.occupancy.len() - 1
    }

    /// Reduction stages plus the final addition.
    pub fn stage_count(&self) -> usize {
        self.reduction_stages() + 1
    }

    pub fn max_height(&self, stage: usize) -> usize {
        self.occupancy[stage].iter().copied().max().unwrap_or(0)
    }
}

type Sig = u32;
const ZERO: Sig = 0;
const ONE: Sig = 1;

#[derive(Clone, Debug)]
struct PpSignal {
    sig: Sig,
    i: u32,
    j: u32,
    invert: u8,
}

#[derive(Clone, Debug)]
struct NetCell {
    kind: CellId,
    inputs: Vec<Sig>,
    outputs: Vec<Sig>,
}

/// A compiled multiplier.
#[derive(Clone, Debug)]
pub struct Multiplier {
    cfg: MultiplierConfig,
    pps: Vec<PpSignal>,
    cells: Vec<NetCell>,
    luts: Vec<Vec<u8>>,
    final_columns: Vec<Vec<Sig>>,
    signal_count: usize,
    trace: ReductionTrace,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    sig: Sig,
    bit: Option<PPBit>,
}

struct Builder {
    width: u32,
    cells: Vec<NetCell>,
    next_sig: Sig,
}

impl Builder {
    fn fresh(&mut self) -> Sig {
        let s = self.next_sig;
        self.next_sig += 1;
        s
    }

    fn columns(&self) -> usize {
        2 * self.width as usize
    }

    /// Instantiates `kind` on `inputs`; weight-1 outputs land in `column` of
    /// `next`, weight-2 outputs in `column + 1`. A `cout` goes to `horizontal`
    /// when given, where the next column can take it as a carry-in.
    fn place(
        &mut self,
        kind: CellId,
        inputs: Vec<Sig>,
        column: usize,
        next: &mut [Vec<Entry>],
        mut horizontal: Option<&mut Vec<Entry>>,
    ) {
        let table = kind.table();
        debug_assert_eq!(inputs.len(), table.arity);
        let mut outputs = Vec::with_capacity(table.output_names.len());
        for (name, &weight) in table.output_names.iter().zip(&table.output_weights) {
            let sig = self.fresh();
            outputs.push(sig);
            let entry = Entry { sig, bit: None };
            let target = column + (weight as usize).trailing_zeros() as usize;
            if target >= self.columns() {
                continue;
            }
            match (*name, horizontal.as_deref_mut()) {
                ("cout", Some(h)) => h.push(entry),
                _ => next[target].push(entry),
            }
        }
        self.cells.push(NetCell {
            kind,
            inputs,
            outputs,
        });
    }
}

fn take_product(column: &mut Vec<Entry>, pred: impl Fn(u32, u32, Polarity) -> bool) -> Option<Sig> {
    let pos = column.iter().position(|e| match e.bit {
        Some(PPBit {
            source: PpSource::Product { i, j },
            polarity,
            ..
        }) => pred(i, j, polarity),
        _ => false,
    })?;
    Some(column.remove(pos).sig)
}

fn take_constant(column: &mut Vec<Entry>, pred: impl Fn(ConstKind) -> bool) -> Option<Sig> {
    let pos = column.iter().position(|e| match e.bit {
        Some(PPBit {
            source: PpSource::Constant(kind),
            ..
        }) => pred(kind),
        _ => false,
    })?;
    Some(column.remove(pos).sig)
}

/// AND bits of `column`, ordered by row index `i` (descending when `desc`).
fn take_ands(column: &mut Vec<Entry>, count: usize, desc: bool) -> Vec<Sig> {
    let mut rows: Vec<(u32, usize)> = column
        .iter()
        .enumerate()
        .filter_map(|(pos, e)| match e.bit {
            Some(PPBit {
                source: PpSource::Product { i, .. },
                polarity: Polarity::PositiveAnd,
                ..
            }) => Some((i, pos)),
            _ => None,
        })
        .collect();
    rows.sort_unstable();
    if desc {
        rows.reverse();
    }
    let mut picked: Vec<usize> = rows.iter().take(count).map(|r| r.1).collect();
    let mut sigs: Vec<Sig> = picked.iter().map(|&p| column[p].sig).collect();
    picked.sort_unstable_by(|a, b| b.cmp(a));
    for p in picked {
        column.remove(p);
    }
    sigs.resize(count, ZERO);
    sigs
}

const MAX_STAGES: usize = 32;
/// Scheduled layer counts tried when compiling; enough for width 16.
const SCHEDULES: usize = 6;

struct Compiled {
    pps: Vec<PpSignal>,
    cells: Vec<NetCell>,
    final_columns: Vec<Vec<Sig>>,
    signal_count: usize,
    occupancy: Vec<Vec<usize>>,
}

/// Builds the netlist with exactly `stages` reduction layers. Layer `k` of
/// `s` aims for column heights of at most `2^(s-k+1)`, the height a 4:2
/// layer halves. Returns `None` when the schedule leaves a column taller
/// than two bits.
fn compile(
    cfg: &MultiplierConfig,
    matrix: &crate::ppm::PPMatrix,
    stages: usize,
) -> Result<Option<Compiled>> {
    let n = cfg.width;
    let mut b = Builder {
        width: n,
        cells: Vec::new(),
        next_sig: 2,
    };
    let mut pps = Vec::new();
    let mut cur: Vec<Vec<Entry>> = matrix
        .columns()
        .iter()
        .map(|col| {
            col.iter()
                .map(|bit| {
                    let sig = match bit.source {
                        PpSource::Constant(_) => ONE,
                        PpSource::Product { i, j } => {
                            let sig = b.fresh();
                            pps.push(PpSignal {
                                sig,
                                i,
                                j,
                                invert: u8::from(bit.polarity == Polarity::NegativeNand),
                            });
                            sig
                        }
                    };
                    Entry {
                        sig,
                        bit: Some(*bit),
                    }
                })
                .collect()
        })
        .collect();
    let mut occupancy = vec![cur.iter().map(Vec::len).collect::<Vec<_>>()];

    let cols = b.columns();
    let mut next: Vec<Vec<Entry>> = vec![Vec::new(); cols];
    let (lo, hi) = ((n - 1) as usize, n as usize);
    let mut horizontal: Vec<Vec<Entry>> = vec![Vec::new(); cols + 1];

    // The folded Baugh-Wooley constant at 2^N becomes the built-in +1 of
    // the two low cells.
    take_constant(&mut cur[hi], |k| k == ConstKind::BaughWooley)
        .ok_or_else(|| Error::Matrix(format!("missing Baugh-Wooley constant in column {hi}")))?;
    for k in 0..2 {
        let nand = take_product(&mut cur[lo], |i, j, p| {
            p == Polarity::NegativeNand
                && if k == 0 {
                    i == n - 1 && j == 0
                } else {
                    i == 0 && j == n - 1
                }
        })
        .ok_or_else(|| Error::Matrix(format!("missing sign partial product in column {lo}")))?;
        let mut inputs = vec![nand];
        inputs.extend(take_ands(&mut cur[lo], 2, k == 0));
        b.place(
            cfg.csp_cells.low[k],
            inputs,
            lo,
            &mut next,
            Some(&mut horizontal[lo + 1]),
        );
    }
    let substituted = take_constant(&mut cur[hi], |k| matches!(k, ConstKind::Substituted { .. }));
    if substituted.is_some() {
        let nand = take_product(&mut cur[hi], |i, j, p| {
            p == Polarity::NegativeNand && i == 1 && j == n - 1
        })
        .ok_or_else(|| Error::Matrix(format!("missing sign partial product in column {hi}")))?;
        let mut inputs = vec![nand];
        inputs.extend(take_ands(&mut cur[hi], 3, false));
        b.place(
            cfg.csp_cells.high,
            inputs,
            hi,
            &mut next,
            Some(&mut horizontal[hi + 1]),
        );
    }

    // Layers past the scheduled ones simply aim for two bits per column.
    let mut k = 0;
    while k < stages || cur.iter().any(|c| c.len() > 2) {
        if k >= MAX_STAGES {
            return Ok(None);
        }
        let target = if k < stages {
            2usize << (stages - 1 - k)
        } else {
            2
        };
        k += 1;
        let before = b.cells.len();
        let seeded = std::mem::replace(&mut horizontal, vec![Vec::new(); cols + 1]);
        reduce_stage(&mut b, &mut cur, &mut next, seeded, target);
        let placed = b.cells.len() > before;
        cur = std::mem::replace(&mut next, vec![Vec::new(); cols]);
        // The first layer always counts: it holds the centre cells.
        if placed || occupancy.len() == 1 {
            occupancy.push(cur.iter().map(Vec::len).collect());
        }
    }
    Ok(Some(Compiled {
        pps,
        cells: b.cells,
        final_columns: cur
            .into_iter()
            .map(|c| c.into_iter().map(|e| e.sig).collect())
            .collect(),
        signal_count: b.next_sig as usize,
        occupancy,
    }))
}

impl Multiplier {
    /// Compiles `cfg` into the shallowest netlist the reduction schedule
    /// allows.
    pub fn new(cfg: MultiplierConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.width;
        let mut matrix = generate_bw(n)?;
        if cfg.truncation {
            matrix = apply_truncation(&matrix, &partition(n));
        }
        if cfg.compensation {
            matrix = apply_compensation(&matrix)?;
        }
        let mut best: Option<Compiled> = None;
        for stages in 1..=SCHEDULES {
            if let Some(c) = compile(&cfg, &matrix, stages)? {
                if best
                    .as_ref()
                    .is_none_or(|b| c.occupancy.len() < b.occupancy.len())
                {
                    best = Some(c);
                }
            }
        }
        let c = best.ok_or_else(|| Error::Matrix("reduction did not converge".into()))?;
        let luts = CellId::ALL
            .iter()
            .map(|id| id.table().packed_rows())
            .collect();
        Ok(Self {
            cfg,
            pps: c.pps,
            cells: c.cells,
            luts,
            final_columns: c.final_columns,
            signal_count: c.signal_count,
            trace: ReductionTrace {
                occupancy: c.occupancy,
            },
        })
    }

    pub fn config(&self) -> &MultiplierConfig {
        &self.cfg
    }

    pub fn width(&self) -> u32 {
        self.cfg.width
    }

    pub fn trace(&self) -> &ReductionTrace {
        &self.trace
    }

    pub fn cell_count(&self, kind: CellId) -> usize {
        self.cells.iter().filter(|c| c.kind == kind).count()
    }

    /// Product of two raw operand values. The caller guarantees both fit the
    /// configured width.
    pub fn multiply(&self, a: i64, b: i64) -> i64 {
        let mut v = vec![0u8; self.signal_count];
        v[ONE as usize] = 1;
        for p in &self.pps {
            v[p.sig as usize] = ((((a >> p.i) & (b >> p.j)) & 1) as u8) ^ p.invert;
        }
        for cell in &self.cells {
            let index = cell
                .inputs
                .iter()
                .fold(0usize, |acc, &s| (acc << 1) | usize::from(v[s as usize]));
            let out = self.luts[cell.kind as usize][index];
            for (k, &s) in cell.outputs.iter().enumerate() {
                v[s as usize] = (out >> k) & 1;
            }
        }
        let raw: i64 = self
            .final_columns
            .iter()
            .enumerate()
            .map(|(c, sigs)| sigs.iter().map(|&s| i64::from(v[s as usize])).sum::<i64>() << c)
            .sum();
        wrap_signed(raw, 2 * self.cfg.width)
    }

    pub fn product(&self, a: SignedWord, b: SignedWord) -> Result<i64> {
        for w in [a.width(), b.width()] {
            if w != self.cfg.width {
                return Err(Error::WidthMismatch {
                    expected: self.cfg.width,
                    got: w,
                });
            }
        }
        Ok(self.multiply(a.value(), b.value()))
    }
}

/// One reduction layer aiming for at most `target` bits per column in the
/// next layer. Columns are visited low to high: bits already pushed into
/// `next[c]` by column `c-1` count against the target, and a 4:2 cell's
/// `cout` may serve as `cin` of a 4:2 cell one column up in the same layer.
fn reduce_stage(
    b: &mut Builder,
    cur: &mut [Vec<Entry>],
    next: &mut [Vec<Entry>],
    mut horizontal: Vec<Vec<Entry>>,
    target: usize,
) {
    let cols = cur.len();
    for c in 0..cols {
        // Oldest bits first.
        let mut bits: Vec<Entry> = std::mem::take(&mut cur[c]);
        bits.reverse();
        let mut h = std::mem::take(&mut horizontal[c]);
        loop {
            let total = next[c].len() + bits.len() + h.len();
            if total <= target {
                break;
            }
            let excess = total - target;
            if excess >= 3 && bits.len() >= 4 {
                let mut inputs: Vec<Sig> = (0..4).map(|_| bits.pop().unwrap().sig).collect();
                let cin = h
                    .pop()
                    .or_else(|| if excess >= 4 { bits.pop() } else { None })
                    .map_or(ZERO, |e| e.sig);
                inputs.push(cin);
                b.place(
                    CellId::Exact42,
                    inputs,
                    c,
                    next,
                    Some(&mut horizontal[c + 1]),
                );
            } else if excess >= 2 && bits.len() + h.len() >= 3 {
                let inputs = (0..3)
                    .map(|_| bits.pop().or_else(|| h.pop()).unwrap().sig)
                    .collect();
                b.place(CellId::FullAdder, inputs, c, next, None);
            } else if bits.len() + h.len() >= 2 {
                let inputs = (0..2)
                    .map(|_| bits.pop().or_else(|| h.pop()).unwrap().sig)
                    .collect();
                b.place(CellId::HalfAdder, inputs, c, next, None);
            } else {
                break;
            }
        }
        bits.reverse();
        next[c].extend(bits);
        next[c].extend(h);
    }
}

/// The exact reference product through the full Baugh-Wooley netlist.
pub fn multiply_exact(a: SignedWord, b: SignedWord) -> Result<i64> {
    Multiplier::new(MultiplierConfig::exact(a.width())?)?.product(a, b)
}

pub fn multiply_approx(cfg: &MultiplierConfig, a: SignedWord, b: SignedWord) -> Result<i64> {
    Multiplier::new(*cfg)?.product(a, b)
}

pub fn reduce_and_trace(
    cfg: &MultiplierConfig,
    a: SignedWord,
    b: SignedWord,
) -> Result<(i64, ReductionTrace)> {
    let m = Multiplier::new(*cfg)?;
    let p = m.product(a, b)?;
    Ok((p, m.trace))
}

/// Worst-case `|approx - exact|`: the full truncated value, plus the
/// compensation constant, plus the weight of the NAND replaced by a constant,
/// plus each approximate centre cell's largest row error at its column
/// weight.
pub fn static_error_bound(cfg: &MultiplierConfig) -> u64 {
    let n = cfg.width;
    let mut bound = 0u64;
    if cfg.truncation {
        bound += truncated_max(n) as u64;
    }
    if cfg.compensation {
        bound += compensation_constant(n) as u64 + (1u64 << n);
    }
    for cell in cfg.csp_cells.low {
        bound += u64::from(cell.table().max_error_distance()) << (n - 1);
    }
    // The high cell only exists when a substituted constant feeds it.
    if cfg.compensation {
        bound += u64::from(cfg.csp_cells.high.table().max_error_distance()) << n;
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: u32, v: i64) -> SignedWord {
        SignedWord::new(n, v).unwrap()
    }

    #[test]
    fn exact_examples() {
        assert_eq!(multiply_exact(w(8, -128), w(8, -128)).unwrap(), 16384);
        assert_eq!(multiply_exact(w(8, 53), w(8, -41)).unwrap(), -2173);
        let m = Multiplier::new(MultiplierConfig::exact(8).unwrap()).unwrap();
        assert!((-128..128).all(|x| m.multiply(0, x) == 0 && m.multiply(x, 0) == 0));
    }

    #[test]
    fn proposed_zero_operands_give_compensation() {
        let cfg = MultiplierConfig::proposed(8).unwrap();
        assert_eq!(multiply_approx(&cfg, w(8, 0), w(8, 0)).unwrap(), 192);
    }

    #[test]
    fn proposed_extremes_within_bound() {
        let cfg = MultiplierConfig::proposed(8).unwrap();
        let p = multiply_approx(&cfg, w(8, -128), w(8, -128)).unwrap();
        assert!((p - 16384).unsigned_abs() <= static_error_bound(&cfg));
    }

    #[test]
    fn proposed_uses_three_sign_focused_cells() {
        let m = Multiplier::new(MultiplierConfig::proposed(8).unwrap()).unwrap();
        assert_eq!(m.cell_count(CellId::Abc1Approx), 2);
        assert_eq!(m.cell_count(CellId::Abcd1Exact), 1);
    }

    #[test]
    fn bounds() {
        assert_eq!(static_error_bound(&MultiplierConfig::exact(8).unwrap()), 0);
        // 769 truncated + 192 compensation + 256 substituted + two cells of
        // error 1 at 2^7.
        assert_eq!(
            static_error_bound(&MultiplierConfig::proposed(8).unwrap()),
            769 + 192 + 256 + 256
        );
        let mut cfg = MultiplierConfig::exact(4).unwrap();
        cfg.variant = Variant::Proposed;
        cfg.truncation = true;
        assert_eq!(static_error_bound(&cfg), 17);
        cfg.compensation = true;
        assert_eq!(static_error_bound(&cfg), 17 + 12 + 16);
    }

    #[test]
    fn stage_counts() {
        let (_, t) =
            reduce_and_trace(&MultiplierConfig::proposed(8).unwrap(), w(8, 3), w(8, 5)).unwrap();
        assert_eq!(t.stage_count(), 3);
        assert!(t.max_height(t.reduction_stages()) <= 2);
        let (_, t) =
            reduce_and_trace(&MultiplierConfig::exact(8).unwrap(), w(8, 3), w(8, 5)).unwrap();
        assert!(t.stage_count() >= 3);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = MultiplierConfig::exact(8).unwrap();
        cfg.truncation = true;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = MultiplierConfig::proposed(8).unwrap();
        cfg.truncation = false;
        assert!(cfg.validate().is_err());
        let mut cfg = MultiplierConfig::proposed(8).unwrap();
        cfg.csp_cells.high = CellId::Ac1;
        assert!(cfg.validate().is_err());
        assert!(MultiplierConfig::proposed(3).is_err());
    }

    #[test]
    fn config_text_round_trip() {
        for v in Variant::PRESETS {
            let cfg = MultiplierConfig::preset(v, 8).unwrap();
            assert_eq!(MultiplierConfig::parse(&cfg.to_text()).unwrap(), cfg);
        }
        let cfg = MultiplierConfig::parse(
            "# custom\nwidth = 6\nvariant = proposed\ncsp_cells = abc1-approx, abc1-exact, abcd1-approx\n",
        )
        .unwrap();
        assert_eq!(cfg.csp_cells.high, CellId::Abcd1Approx);
        assert!(MultiplierConfig::parse("width = 8\ncolour = red\n").is_err());
        assert!(MultiplierConfig::parse("variant = exact\n").is_err());
    }

    #[test]
    fn product_rejects_width_mismatch() {
        let m = Multiplier::new(MultiplierConfig::exact(8).unwrap()).unwrap();
        assert!(matches!(
            m.product(w(4, 1), w(8, 1)),
            Err(Error::WidthMismatch { .. })
        ));
    }
}
