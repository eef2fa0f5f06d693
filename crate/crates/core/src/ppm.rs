//! Baugh-Wooley partial-product matrix generation and the transforms that
//! turn it into the approximate multiplier's input: region partitioning,
//! truncation of the low columns, constant compensation and NAND-to-constant
//! substitution.
//!
//! Columns are 0-indexed weight exponents: column `c` carries weight `2^c`.

use std::fmt::Write as _;

use num_rational::Ratio;

use crate::cells::{Bit, Polarity};
use crate::error::{Error, Result};

pub const MIN_WIDTH: u32 = 4;
pub const MAX_WIDTH: u32 = 16;

pub(crate) fn check_width(n: u32) -> Result<()> {
    if (MIN_WIDTH..=MAX_WIDTH).contains(&n) {
        Ok(())
    } else {
        Err(Error::Width(n))
    }
}

/// A two's-complement operand of a fixed width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedWord {
    width: u32,
    value: i64,
}

impl SignedWord {
    pub fn new(width: u32, value: i64) -> Result<Self> {
        check_width(width)?;
        let half = 1i64 << (width - 1);
        if value < -half || value >= half {
            return Err(Error::OperandRange { value, width });
        }
        Ok(Self { width, value })
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub fn value(self) -> i64 {
        self.value
    }

    /// Bit `i` of the two's-complement encoding.
    pub fn bit(self, i: u32) -> Bit {
        ((self.value >> i) & 1) as Bit
    }

    pub fn min(width: u32) -> i64 {
        -(1i64 << (width - 1))
    }

    pub fn max(width: u32) -> i64 {
        (1i64 << (width - 1)) - 1
    }
}

/// Why a constant 1 sits in the matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstKind {
    /// The two constants produced by folding the negated rows.
    BaughWooley,
    /// Inserted to offset the expected value of the truncated columns.
    Compensation,
    /// Stands in for the NAND partial product `a_i·b_j` it replaced.
    Substituted { i: u32, j: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PpSource {
    Product { i: u32, j: u32 },
    Constant(ConstKind),
}

/// One entry of the partial-product matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PPBit {
    pub source: PpSource,
    pub polarity: Polarity,
    pub column: u32,
}

impl PPBit {
    fn product(i: u32, j: u32, width: u32) -> Self {
        let sign_i = i == width - 1;
        let sign_j = j == width - 1;
        let polarity = if sign_i != sign_j {
            Polarity::NegativeNand
        } else {
            Polarity::PositiveAnd
        };
        Self {
            source: PpSource::Product { i, j },
            polarity,
            column: i + j,
        }
    }

    fn constant(kind: ConstKind, column: u32) -> Self {
        Self {
            source: PpSource::Constant(kind),
            polarity: Polarity::ConstantOne,
            column,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.source, PpSource::Constant(_))
    }

    pub fn eval(&self, a: SignedWord, b: SignedWord) -> Bit {
        match self.source {
            PpSource::Constant(_) => 1,
            PpSource::Product { i, j } => {
                let and = a.bit(i) & b.bit(j);
                match self.polarity {
                    Polarity::NegativeNand => 1 - and,
                    _ => and,
                }
            }
        }
    }

    fn label(&self) -> String {
        match (self.source, self.polarity) {
            (PpSource::Product { i, j }, Polarity::NegativeNand) => format!("~a{i}b{j}"),
            (PpSource::Product { i, j }, _) => format!("a{i}b{j}"),
            (PpSource::Constant(_), _) => "1".to_string(),
        }
    }
}

/// Column-indexed partial products of an `N×N` signed multiply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPMatrix {
    width: u32,
    columns: Vec<Vec<PPBit>>,
}

impl PPMatrix {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn columns(&self) -> &[Vec<PPBit>] {
        &self.columns
    }

    pub fn column(&self, c: u32) -> &[PPBit] {
        &self.columns[c as usize]
    }

    pub fn bit_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Bits that come from an operand pair, i.e. everything but constants.
    pub fn product_bit_count(&self) -> usize {
        self.bits().filter(|b| !b.is_constant()).count()
    }

    /// Total weight of all constant bits.
    pub fn constant_value(&self) -> i64 {
        self.bits()
            .filter(|b| b.is_constant())
            .map(|b| 1i64 << b.column)
            .sum()
    }

    pub fn bits(&self) -> impl Iterator<Item = &PPBit> {
        self.columns.iter().flatten()
    }

    pub fn count_polarity(&self, column: u32, polarity: Polarity) -> usize {
        self.column(column)
            .iter()
            .filter(|b| b.polarity == polarity)
            .count()
    }

    /// Text grid in the layout of the classic worked example: one row per
    /// operand bit `a_i` (most significant first), columns from weight
    /// `2^(2N-1)` down to `2^0`. Baugh-Wooley constants sit on the first and
    /// last product rows; other constants get a trailing row.
    pub fn render(&self) -> String {
        let n = self.width;
        let cols = 2 * n as usize;
        let mut rows: Vec<Vec<Option<String>>> = vec![vec![None; cols]; n as usize + 1];
        let mut extra_used = false;
        let mut bw_seen = 0;
        for bit in self.bits() {
            let c = bit.column as usize;
            let row = match bit.source {
                PpSource::Product { i, .. }
                | PpSource::Constant(ConstKind::Substituted { i, .. }) => (n - 1 - i) as usize,
                PpSource::Constant(ConstKind::BaughWooley) => {
                    bw_seen += 1;
                    if bit.column == 2 * n - 1 {
                        0
                    } else {
                        n as usize - 1
                    }
                }
                PpSource::Constant(ConstKind::Compensation) => {
                    extra_used = true;
                    n as usize
                }
            };
            let slot = &mut rows[row][cols - 1 - c];
            *slot = Some(match slot.take() {
                Some(prev) => format!("{prev}+{}", bit.label()),
                None => bit.label(),
            });
        }
        debug_assert!(bw_seen <= 2);
        if !extra_used {
            rows.pop();
        }
        let cell_w = rows
            .iter()
            .flatten()
            .flatten()
            .map(String::len)
            .chain((0..cols).map(|c| format!("2^{c}").len()))
            .max()
            .unwrap_or(1);

        let mut out = String::new();
        let header: Vec<String> = (0..cols)
            .rev()
            .map(|c| format!("{:>cell_w$}", format!("2^{c}")))
            .collect();
        let _ = writeln!(out, "{}", header.join(" ").trim_end());
        for row in rows {
            let line: Vec<String> = row
                .into_iter()
                .map(|cell| format!("{:>cell_w$}", cell.unwrap_or_default()))
                .collect();
            let _ = writeln!(out, "{}", line.join(" ").trim_end());
        }
        out
    }
}

/// The symbolic Baugh-Wooley matrix: AND bits for the magnitude and sign ×
/// sign terms, NAND bits for the mixed sign terms, and constant 1s at
/// weights `2^N` and `2^(2N-1)`.
pub fn generate_bw(n: u32) -> Result<PPMatrix> {
    check_width(n)?;
    let mut columns = vec![Vec::new(); 2 * n as usize];
    for i in (0..n).rev() {
        if i == 0 {
            columns[n as usize].push(PPBit::constant(ConstKind::BaughWooley, n));
        }
        if i == n - 1 {
            columns[2 * n as usize - 1].push(PPBit::constant(ConstKind::BaughWooley, 2 * n - 1));
        }
        for j in (0..n).rev() {
            let bit = PPBit::product(i, j, n);
            columns[bit.column as usize].push(bit);
        }
    }
    Ok(PPMatrix { width: n, columns })
}

/// Sums every bit of `m` at its column weight, wrapped to a signed `2N`-bit
/// result.
pub fn evaluate(m: &PPMatrix, a: SignedWord, b: SignedWord) -> Result<i64> {
    for w in [a.width(), b.width()] {
        if w != m.width {
            return Err(Error::WidthMismatch {
                expected: m.width,
                got: w,
            });
        }
    }
    let raw: i64 = m
        .bits()
        .map(|bit| i64::from(bit.eval(a, b)) << bit.column)
        .sum();
    Ok(wrap_signed(raw, 2 * m.width))
}

/// Reduces `raw` modulo `2^bits` and reinterprets it as two's complement.
pub fn wrap_signed(raw: i64, bits: u32) -> i64 {
    let modulus = 1i64 << bits;
    let r = raw.rem_euclid(modulus);
    if r >= modulus / 2 {
        r - modulus
    } else {
        r
    }
}

/// Column regions of a `2N`-column matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionMap {
    pub width: u32,
    /// Columns `0 ..= N-2`, removed by truncation.
    pub lsp: Vec<u32>,
    /// Columns `N-1` and `N`, reduced by sign-focused compressors.
    pub csp: [u32; 2],
    /// Columns `N+1 ..= 2N-1`, reduced exactly.
    pub msp: Vec<u32>,
}

impl RegionMap {
    pub fn contains_lsp(&self, column: u32) -> bool {
        column + 1 < self.width
    }
}

pub fn partition(n: u32) -> RegionMap {
    RegionMap {
        width: n,
        lsp: (0..n - 1).collect(),
        csp: [n - 1, n],
        msp: (n + 1..2 * n).collect(),
    }
}

/// Removes every bit in the least-significant region.
pub fn apply_truncation(m: &PPMatrix, regions: &RegionMap) -> PPMatrix {
    let columns = m
        .columns
        .iter()
        .enumerate()
        .map(|(c, bits)| {
            if regions.contains_lsp(c as u32) {
                Vec::new()
            } else {
                bits.clone()
            }
        })
        .collect();
    PPMatrix {
        width: m.width,
        columns,
    }
}

/// Expected value of the truncated columns when every AND bit is 1 with
/// probability 1/4: `Σ_{q=0}^{N-2} (q+1)·2^q / 4`.
pub fn compensation_estimate(n: u32) -> Ratio<i64> {
    let total: i64 = (0..n.saturating_sub(1))
        .map(|q| (i64::from(q) + 1) << q)
        .sum();
    Ratio::new(total, 4)
}

/// Largest value the truncated columns can hold: `Σ_{q=0}^{N-2} (q+1)·2^q`.
pub fn truncated_max(n: u32) -> i64 {
    (0..n.saturating_sub(1))
        .map(|q| (i64::from(q) + 1) << q)
        .sum()
}

/// Realized compensation constant: ones at weights `2^(N-1)` and `2^(N-2)`.
pub fn compensation_constant(n: u32) -> i64 {
    (1i64 << (n - 1)) + (1i64 << (n - 2))
}

/// Adds the two compensation constants and swaps one NAND partial product in
/// the weight-`2^N` column for a constant 1. The replaced bit is
/// `~a_{N-1}b_1`.
pub fn apply_compensation(m: &PPMatrix) -> Result<PPMatrix> {
    let n = m.width;
    let mut columns = m.columns.clone();
    let target = &mut columns[n as usize];
    let pos = target
        .iter()
        .position(|b| matches!(b.source, PpSource::Product { i, j: 1 } if i == n - 1))
        .or_else(|| {
            target
                .iter()
                .position(|b| b.polarity == Polarity::NegativeNand)
        })
        .ok_or_else(|| Error::Matrix(format!("no NAND partial product in column {n}")))?;
    let PpSource::Product { i, j } = target[pos].source else {
        unreachable!("NAND bits always come from a product");
    };
    target[pos] = PPBit::constant(ConstKind::Substituted { i, j }, n);

    for c in [n - 1, n - 2] {
        columns[c as usize].push(PPBit::constant(ConstKind::Compensation, c));
    }
    Ok(PPMatrix { width: n, columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(m: &PPMatrix, c: u32) -> Vec<String> {
        let mut v: Vec<String> = m.column(c).iter().map(PPBit::label).collect();
        v.sort();
        v
    }

    #[test]
    fn table1_columns() {
        let m = generate_bw(4).unwrap();
        assert_eq!(labels(&m, 7), vec!["1"]);
        assert_eq!(labels(&m, 6), vec!["a3b3"]);
        assert_eq!(labels(&m, 5), vec!["~a2b3", "~a3b2"]);
        assert_eq!(labels(&m, 4), vec!["1", "a2b2", "~a1b3", "~a3b1"]);
        assert_eq!(labels(&m, 3), vec!["a1b2", "a2b1", "~a0b3", "~a3b0"]);
        assert_eq!(labels(&m, 2), vec!["a0b2", "a1b1", "a2b0"]);
        assert_eq!(labels(&m, 1), vec!["a0b1", "a1b0"]);
        assert_eq!(labels(&m, 0), vec!["a0b0"]);
    }

    #[test]
    fn table1_render() {
        let text = generate_bw(4).unwrap().render();
        let expected = [
            "  2^7   2^6   2^5   2^4   2^3   2^2   2^1   2^0",
            "    1  a3b3 ~a3b2 ~a3b1 ~a3b0",
            "            ~a2b3  a2b2  a2b1  a2b0",
            "                  ~a1b3  a1b2  a1b1  a1b0",
            "                      1 ~a0b3  a0b2  a0b1  a0b0",
            "",
        ]
        .join("\n");
        assert_eq!(text, expected);
    }

    #[test]
    fn product_bit_count_is_n_squared() {
        assert_eq!(generate_bw(8).unwrap().product_bit_count(), 64);
        assert!(generate_bw(3).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let m4 = generate_bw(4).unwrap();
        let w = |n, v| SignedWord::new(n, v).unwrap();
        assert_eq!(evaluate(&m4, w(4, -8), w(4, -8)).unwrap(), 64);
        let m8 = generate_bw(8).unwrap();
        assert_eq!(evaluate(&m8, w(8, -1), w(8, 1)).unwrap(), -1);
        assert_eq!(evaluate(&m8, w(8, 117), w(8, -93)).unwrap(), -10881);
        assert!(matches!(
            evaluate(&m8, w(4, 1), w(8, 1)),
            Err(Error::WidthMismatch {
                expected: 8,
                got: 4
            })
        ));
    }

    #[test]
    fn partition_examples() {
        let r = partition(8);
        assert_eq!(r.lsp, (0..=6).collect::<Vec<_>>());
        assert_eq!(r.csp, [7, 8]);
        let r4 = partition(4);
        assert_eq!(r4.msp, vec![5, 6, 7]);
    }

    #[test]
    fn truncation_examples() {
        let m = generate_bw(8).unwrap();
        let t = apply_truncation(&m, &partition(8));
        assert!((0..=6).all(|c| t.column(c).is_empty()));
        assert_eq!(m.bit_count() - t.bit_count(), 28);
        let m4 = generate_bw(4).unwrap();
        let t4 = apply_truncation(&m4, &partition(4));
        assert_eq!(t4.column(3).len(), 4);
    }

    #[test]
    fn compensation_estimate_examples() {
        assert_eq!(compensation_estimate(8), Ratio::new(769, 4));
        assert_eq!(compensation_estimate(2), Ratio::new(1, 4));
        assert_eq!(compensation_estimate(4), Ratio::new(17, 4));
    }

    #[test]
    fn compensation_examples() {
        let m = generate_bw(8).unwrap();
        let t = apply_truncation(&m, &partition(8));
        let c = apply_compensation(&t).unwrap();
        // 192 of compensation plus the 256 that stands in for ~a7b1.
        assert_eq!(c.constant_value() - t.constant_value(), 192 + 256);
        assert_eq!(
            c.count_polarity(8, Polarity::NegativeNand) + 1,
            t.count_polarity(8, Polarity::NegativeNand)
        );
        assert_eq!(
            c.count_polarity(8, Polarity::ConstantOne),
            t.count_polarity(8, Polarity::ConstantOne) + 1
        );

        let m4 = apply_truncation(&generate_bw(4).unwrap(), &partition(4));
        let c4 = apply_compensation(&m4).unwrap();
        assert_eq!(c4.constant_value() - m4.constant_value(), 12 + 16);
    }

    #[test]
    fn compensation_rejects_matrix_without_nand() {
        let mut m = generate_bw(8).unwrap();
        m.columns[8].retain(|b| b.polarity != Polarity::NegativeNand);
        assert!(matches!(apply_compensation(&m), Err(Error::Matrix(_))));
    }

    #[test]
    fn signed_word_range() {
        assert!(SignedWord::new(8, 127).is_ok());
        assert!(SignedWord::new(8, -128).is_ok());
        assert!(SignedWord::new(8, 128).is_err());
        assert_eq!(SignedWord::new(8, -1).unwrap().bit(7), 1);
    }
}
