//! Behavioral models of every adder and compressor cell used by the
//! multiplier.
//!
//! Each cell is an explicit truth table. Rows are indexed by the input tuple
//! read as a binary number with the first input as the most significant bit,
//! so row `0b100` of a three-input cell is `a = 1, b = 0, c = 0`.
//!
//! Output weights are relative to the column the cell sits in: `cout` and
//! `carry` both carry weight 2 and `sum` weight 1, the usual 4:2 convention.
//! Sign-focused cells add a built-in constant `+1` to their inputs; input `a`
//! is always the position meant for a NAND-generated (negative) partial
//! product.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A single binary digit, always 0 or 1.
pub type Bit = u8;

/// How a partial-product bit is produced, which fixes its probability of
/// being 1 under uniformly random operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    PositiveAnd,
    NegativeNand,
    ConstantOne,
}

impl Polarity {
    pub fn one_probability(self) -> Ratio<i64> {
        match self {
            Polarity::PositiveAnd => Ratio::new(1, 4),
            Polarity::NegativeNand => Ratio::new(3, 4),
            Polarity::ConstantOne => Ratio::from_integer(1),
        }
    }
}

/// Identifier of every cell in the registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellId {
    Abc1Exact,
    Abc1Approx,
    Abcd1Exact,
    Abcd1Approx,
    Ac1,
    Ac2,
    Ac3,
    Ac4,
    Ac5,
    HalfAdder,
    FullAdder,
    Exact42,
}

impl CellId {
    pub const ALL: [CellId; 12] = [
        CellId::Abc1Exact,
        CellId::Abc1Approx,
        CellId::Abcd1Exact,
        CellId::Abcd1Approx,
        CellId::Ac1,
        CellId::Ac2,
        CellId::Ac3,
        CellId::Ac4,
        CellId::Ac5,
        CellId::HalfAdder,
        CellId::FullAdder,
        CellId::Exact42,
    ];

    pub const NAMES: [&'static str; 12] = [
        "abc1-exact",
        "abc1-approx",
        "abcd1-exact",
        "abcd1-approx",
        "ac1",
        "ac2",
        "ac3",
        "ac4",
        "ac5",
        "half-adder",
        "full-adder",
        "exact-42",
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    pub fn table(self) -> &'static CellTable {
        static TABLES: OnceLock<Vec<CellTable>> = OnceLock::new();
        &TABLES.get_or_init(|| CellId::ALL.iter().map(|&id| build_table(id)).collect())
            [self as usize]
    }

    /// A sign-focused `A + B + C + 1` cell (exact, proposed approximate, or
    /// one of the five competitor designs).
    pub fn is_abc1_shaped(self) -> bool {
        matches!(
            self,
            CellId::Abc1Exact
                | CellId::Abc1Approx
                | CellId::Ac1
                | CellId::Ac2
                | CellId::Ac3
                | CellId::Ac4
                | CellId::Ac5
        )
    }

    /// A sign-focused `A + B + C + D + 1` cell.
    pub fn is_abcd1_shaped(self) -> bool {
        matches!(self, CellId::Abcd1Exact | CellId::Abcd1Approx)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CellId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        CellId::NAMES
            .iter()
            .position(|n| *n == key)
            .map(|i| CellId::ALL[i])
            .ok_or_else(|| Error::UnknownCell(s.to_string()))
    }
}

/// The five previously published approximate `A + B + C + 1` designs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Competitor {
    /// Esposito et al. 2018
    Ac1,
    /// Guo et al. 2019
    Ac2,
    /// Strollo et al. 2020
    Ac3,
    /// Laimin et al.
    Ac4,
    /// Du et al. 2022
    Ac5,
}

impl Competitor {
    pub const ALL: [Competitor; 5] = [
        Competitor::Ac1,
        Competitor::Ac2,
        Competitor::Ac3,
        Competitor::Ac4,
        Competitor::Ac5,
    ];

    pub fn cell(self) -> CellId {
        match self {
            Competitor::Ac1 => CellId::Ac1,
            Competitor::Ac2 => CellId::Ac2,
            Competitor::Ac3 => CellId::Ac3,
            Competitor::Ac4 => CellId::Ac4,
            Competitor::Ac5 => CellId::Ac5,
        }
    }

    /// Stable preset name.
    pub fn name(self) -> &'static str {
        self.cell().name()
    }

    /// Short citation label of the original design.
    pub fn citation(self) -> &'static str {
        match self {
            Competitor::Ac1 => "Esposito2018",
            Competitor::Ac2 => "Guo2019",
            Competitor::Ac3 => "Strollo2020",
            Competitor::Ac4 => "Laimin",
            Competitor::Ac5 => "Du2022",
        }
    }

    /// Approximate value column, rows ordered `abc = 000 … 111`.
    fn values(self) -> [u8; 8] {
        match self {
            Competitor::Ac1 => [1, 2, 2, 2, 2, 2, 2, 2],
            Competitor::Ac2 => [1, 1, 1, 3, 2, 3, 3, 2],
            Competitor::Ac3 => [1, 2, 2, 3, 1, 2, 2, 3],
            Competitor::Ac4 => [3, 3, 3, 3, 2, 3, 3, 2],
            Competitor::Ac5 => [2, 2, 2, 2, 2, 3, 3, 3],
        }
    }
}

impl FromStr for Competitor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ac1" => Ok(Competitor::Ac1),
            "ac2" => Ok(Competitor::Ac2),
            "ac3" => Ok(Competitor::Ac3),
            "ac4" => Ok(Competitor::Ac4),
            "ac5" => Ok(Competitor::Ac5),
            _ => Err(Error::UnknownDesign(s.to_string())),
        }
    }
}

/// Standard exact cells used for the most-significant region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StandardCell {
    HalfAdder,
    FullAdder,
    Exact42,
}

impl StandardCell {
    pub fn cell(self) -> CellId {
        match self {
            StandardCell::HalfAdder => CellId::HalfAdder,
            StandardCell::FullAdder => CellId::FullAdder,
            StandardCell::Exact42 => CellId::Exact42,
        }
    }
}

/// A cell as a complete truth table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellTable {
    pub name: &'static str,
    pub arity: usize,
    pub input_polarities: Vec<Polarity>,
    pub has_const_one: bool,
    pub exact: bool,
    pub output_names: Vec<&'static str>,
    pub output_weights: Vec<u32>,
    /// `rows[index]` holds the output bits in `output_names` order.
    pub rows: Vec<Vec<Bit>>,
}

impl CellTable {
    pub fn row_count(&self) -> usize {
        1 << self.arity
    }

    /// Input bits of row `index`, first input first.
    pub fn inputs_of(&self, index: usize) -> Vec<Bit> {
        (0..self.arity)
            .map(|k| ((index >> (self.arity - 1 - k)) & 1) as Bit)
            .collect()
    }

    /// Arithmetic value the cell should produce for row `index`.
    pub fn exact_value(&self, index: usize) -> u32 {
        index.count_ones() + u32::from(self.has_const_one)
    }

    /// Weighted value of the stored outputs for row `index`.
    pub fn output_value(&self, index: usize) -> u32 {
        self.rows[index]
            .iter()
            .zip(&self.output_weights)
            .map(|(&b, &w)| u32::from(b) * w)
            .sum()
    }

    /// Signed error `exact - approximate` of row `index`.
    pub fn error(&self, index: usize) -> i32 {
        self.exact_value(index) as i32 - self.output_value(index) as i32
    }

    pub fn max_error_distance(&self) -> u32 {
        (0..self.row_count())
            .map(|i| self.error(i).unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn output(&self, name: &str) -> Option<usize> {
        self.output_names.iter().position(|n| *n == name)
    }

    pub fn eval(&self, inputs: &[Bit]) -> Result<&[Bit]> {
        if inputs.len() != self.arity {
            return Err(Error::Arity {
                cell: self.name,
                expected: self.arity,
                got: inputs.len(),
            });
        }
        let index = inputs
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1));
        Ok(&self.rows[index])
    }

    /// Outputs of every row packed into one byte, bit `k` = output `k`.
    pub(crate) fn packed_rows(&self) -> Vec<u8> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .fold(0u8, |acc, (k, &b)| acc | (b << k))
            })
            .collect()
    }
}

fn bits(index: usize, arity: usize) -> Vec<Bit> {
    (0..arity)
        .map(|k| ((index >> (arity - 1 - k)) & 1) as Bit)
        .collect()
}

fn table_from<F>(
    id: CellId,
    arity: usize,
    polarities: Vec<Polarity>,
    has_const_one: bool,
    exact: bool,
    outputs: &[(&'static str, u32)],
    f: F,
) -> CellTable
where
    F: Fn(&[Bit]) -> Vec<Bit>,
{
    CellTable {
        name: id.name(),
        arity,
        input_polarities: polarities,
        has_const_one,
        exact,
        output_names: outputs.iter().map(|o| o.0).collect(),
        output_weights: outputs.iter().map(|o| o.1).collect(),
        rows: (0..1usize << arity).map(|i| f(&bits(i, arity))).collect(),
    }
}

const COUT_CARRY_SUM: [(&str, u32); 3] = [("cout", 2), ("carry", 2), ("sum", 1)];
const CARRY_SUM: [(&str, u32); 2] = [("carry", 2), ("sum", 1)];

// Exact A+B+C+D+1 outputs (cout, carry, sum), rows abcd = 0000 … 1111.
const ABCD1_EXACT: [[Bit; 3]; 16] = [
    [0, 0, 1],
    [1, 0, 0],
    [0, 1, 0],
    [0, 1, 1],
    [0, 1, 0],
    [0, 1, 1],
    [0, 1, 1],
    [1, 1, 0],
    [1, 0, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 0],
    [0, 1, 1],
    [1, 1, 0],
    [1, 1, 0],
    [1, 1, 1],
];

// Approximate A+B+C+D+1 outputs (carry, sum); cout is dropped.
const ABCD1_APPROX: [[Bit; 2]; 16] = [
    [0, 1],
    [1, 0],
    [1, 0],
    [1, 0],
    [1, 0],
    [1, 1],
    [1, 1],
    [1, 1],
    [1, 0],
    [1, 1],
    [1, 1],
    [1, 1],
    [1, 1],
    [1, 1],
    [1, 1],
    [1, 1],
];

// Proposed approximate A+B+C+1 outputs (carry, sum).
const ABC1_APPROX: [[Bit; 2]; 8] = [
    [0, 1],
    [1, 1],
    [1, 1],
    [1, 1],
    [1, 0],
    [1, 1],
    [1, 1],
    [1, 1],
];

fn index_of(bits: &[Bit]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

fn build_table(id: CellId) -> CellTable {
    use Polarity::{NegativeNand as Nand, PositiveAnd as And};
    let abc = || vec![Nand, And, And];
    let abcd = || vec![Nand, And, And, And];
    match id {
        CellId::Abc1Exact => table_from(id, 3, abc(), true, true, &COUT_CARRY_SUM, |x| {
            let (cout, carry, sum) = eval_exact_abc1(x[0], x[1], x[2]);
            vec![cout, carry, sum]
        }),
        CellId::Abc1Approx => table_from(id, 3, abc(), true, false, &CARRY_SUM, |x| {
            ABC1_APPROX[index_of(x)].to_vec()
        }),
        CellId::Abcd1Exact => table_from(id, 4, abcd(), true, true, &COUT_CARRY_SUM, |x| {
            ABCD1_EXACT[index_of(x)].to_vec()
        }),
        CellId::Abcd1Approx => table_from(id, 4, abcd(), true, false, &CARRY_SUM, |x| {
            ABCD1_APPROX[index_of(x)].to_vec()
        }),
        CellId::Ac1 | CellId::Ac2 | CellId::Ac3 | CellId::Ac4 | CellId::Ac5 => {
            let design = match id {
                CellId::Ac1 => Competitor::Ac1,
                CellId::Ac2 => Competitor::Ac2,
                CellId::Ac3 => Competitor::Ac3,
                CellId::Ac4 => Competitor::Ac4,
                _ => Competitor::Ac5,
            };
            let values = design.values();
            table_from(id, 3, abc(), true, false, &CARRY_SUM, move |x| {
                let v = values[index_of(x)];
                vec![v / 2, v % 2]
            })
        }
        CellId::HalfAdder => table_from(id, 2, vec![And; 2], false, true, &CARRY_SUM, |x| {
            vec![x[0] & x[1], x[0] ^ x[1]]
        }),
        CellId::FullAdder => table_from(id, 3, vec![And; 3], false, true, &CARRY_SUM, |x| {
            vec![majority(x[0], x[1], x[2]), x[0] ^ x[1] ^ x[2]]
        }),
        CellId::Exact42 => table_from(id, 5, vec![And; 5], false, true, &COUT_CARRY_SUM, |x| {
            let (cout, carry, sum) = exact_42(x[0], x[1], x[2], x[3], x[4]);
            vec![cout, carry, sum]
        }),
    }
}

fn majority(a: Bit, b: Bit, c: Bit) -> Bit {
    (a & b) | (a & c) | (b & c)
}

// cout never depends on cin, which is what lets neighbouring 4:2 cells chain
// within one reduction stage.
fn exact_42(x1: Bit, x2: Bit, x3: Bit, x4: Bit, cin: Bit) -> (Bit, Bit, Bit) {
    let cout = majority(x1, x2, x3);
    let s = x1 ^ x2 ^ x3;
    (cout, majority(s, x4, cin), s ^ x4 ^ cin)
}

/// Exact `A + B + C + 1` with the canonical encoding.
pub fn eval_exact_abc1(a: Bit, b: Bit, c: Bit) -> (Bit, Bit, Bit) {
    let total = a + b + c + 1;
    (u8::from(total == 4), u8::from(total >= 2), total % 2)
}

/// Exact `A + B + C + D + 1` as a stored lookup.
pub fn eval_exact_abcd1(a: Bit, b: Bit, c: Bit, d: Bit) -> (Bit, Bit, Bit) {
    let [cout, carry, sum] = ABCD1_EXACT[index_of(&[a, b, c, d])];
    (cout, carry, sum)
}

/// Proposed approximate `A + B + C + 1`, returns `(carry, sum)`.
pub fn eval_approx_abc1(a: Bit, b: Bit, c: Bit) -> (Bit, Bit) {
    let [carry, sum] = ABC1_APPROX[index_of(&[a, b, c])];
    (carry, sum)
}

/// Proposed approximate `A + B + C + D + 1`, returns `(carry, sum)`.
pub fn eval_approx_abcd1(a: Bit, b: Bit, c: Bit, d: Bit) -> (Bit, Bit) {
    let [carry, sum] = ABCD1_APPROX[index_of(&[a, b, c, d])];
    (carry, sum)
}

/// Approximate value produced by a competitor design.
pub fn eval_competitor(design: Competitor, a: Bit, b: Bit, c: Bit) -> u8 {
    design.values()[index_of(&[a, b, c])]
}

/// Evaluates a standard exact cell. Outputs follow the table's output order:
/// `(carry, sum)` for the adders, `(cout, carry, sum)` for the 4:2 cell
/// whose fifth input is `cin`.
pub fn eval_standard(cell: StandardCell, inputs: &[Bit]) -> Result<Vec<Bit>> {
    cell.cell().table().eval(inputs).map(<[Bit]>::to_vec)
}
