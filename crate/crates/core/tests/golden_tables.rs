use num_rational::Ratio;
use signfocus::cells::{eval_competitor, CellId, Competitor, Polarity};
use signfocus::metrics::InputDistribution;
use signfocus::ppm::{generate_bw, PpSource};

// Rows abc = 000 … 111 with a the negated input:
// (P(Err) numerator over 64, S_exact, AC1..AC5 S_aprx, proposed carry, sum, S_aprx)
const ABC1_ROWS: [(i64, u32, [u8; 5], u8, u8, u32); 8] = [
    (9, 1, [1, 1, 1, 3, 2], 0, 1, 1),
    (3, 2, [2, 1, 2, 3, 2], 1, 1, 3),
    (3, 2, [2, 1, 2, 3, 2], 1, 1, 3),
    (1, 3, [2, 3, 3, 3, 2], 1, 1, 3),
    (27, 2, [2, 2, 1, 2, 2], 1, 0, 2),
    (9, 3, [2, 3, 2, 3, 3], 1, 1, 3),
    (9, 3, [2, 3, 2, 3, 3], 1, 1, 3),
    (3, 4, [2, 2, 3, 2, 3], 1, 1, 3),
];

// Rows abcd = 0000 … 1111:
// (P(E) numerator over 256, exact cout, carry, sum, approx carry, sum, ED)
const ABCD1_ROWS: [(i64, [u8; 3], [u8; 2], u32); 16] = [
    (27, [0, 0, 1], [0, 1], 0),
    (9, [1, 0, 0], [1, 0], 0),
    (9, [0, 1, 0], [1, 0], 0),
    (3, [0, 1, 1], [1, 0], 1),
    (9, [0, 1, 0], [1, 0], 0),
    (3, [0, 1, 1], [1, 1], 0),
    (3, [0, 1, 1], [1, 1], 0),
    (1, [1, 1, 0], [1, 1], 1),
    (81, [1, 0, 0], [1, 0], 0),
    (27, [1, 0, 1], [1, 1], 0),
    (27, [0, 1, 1], [1, 1], 0),
    (9, [1, 1, 0], [1, 1], 1),
    (27, [0, 1, 1], [1, 1], 0),
    (9, [1, 1, 0], [1, 1], 1),
    (9, [1, 1, 0], [1, 1], 1),
    (3, [1, 1, 1], [1, 1], 2),
];

/// (AND bits, NAND bits, constants) of one column.
type Column = (&'static [(u32, u32)], &'static [(u32, u32)], usize);

fn bits(index: usize, k: usize) -> Vec<u8> {
    (0..k).map(|p| ((index >> (k - 1 - p)) & 1) as u8).collect()
}

#[test]
fn abc1_rows() {
    let exact = CellId::Abc1Exact.table();
    let prop = CellId::Abc1Approx.table();
    for (index, &(p, s_exact, ac, carry, sum, s_prop)) in ABC1_ROWS.iter().enumerate() {
        let x = bits(index, 3);
        assert_eq!(exact.output_value(index), s_exact, "row {index}");
        for (c, want) in Competitor::ALL.iter().zip(ac) {
            assert_eq!(
                eval_competitor(*c, x[0], x[1], x[2]),
                want,
                "{} row {index}",
                c.name()
            );
            assert_eq!(c.cell().table().output_value(index), u32::from(want));
        }
        assert_eq!(prop.rows[index], vec![carry, sum], "row {index}");
        assert_eq!(prop.output_value(index), s_prop);
        let dist = InputDistribution::for_cell(prop);
        assert_eq!(
            dist.row_probability(index),
            Ratio::new(p, 64),
            "row {index}"
        );
    }
}

#[test]
fn abcd1_rows() {
    let exact = CellId::Abcd1Exact.table();
    let approx = CellId::Abcd1Approx.table();
    let dist = InputDistribution::for_cell(approx);
    for (index, &(p, e, a, ed)) in ABCD1_ROWS.iter().enumerate() {
        assert_eq!(exact.rows[index], e.to_vec(), "row {index}");
        assert_eq!(approx.rows[index], a.to_vec(), "row {index}");
        assert_eq!(approx.error(index).unsigned_abs(), ed, "row {index}");
        assert!(approx.output_value(index) <= approx.exact_value(index));
        assert_eq!(
            dist.row_probability(index),
            Ratio::new(p, 256),
            "row {index}"
        );
    }
}

#[test]
fn exact_cells_conserve_value() {
    for id in CellId::ALL {
        let t = id.table();
        assert_eq!(t.rows.len(), t.row_count());
        if t.exact {
            for i in 0..t.row_count() {
                assert_eq!(t.output_value(i), t.exact_value(i), "{id} row {i}");
            }
        }
    }
}

#[test]
fn table1_final_form() {
    let m = generate_bw(4).unwrap();
    // Per column, highest weight first: (AND bits, NAND bits, constants).
    let expected: [Column; 8] = [
        (&[], &[], 1),
        (&[(3, 3)], &[], 0),
        (&[], &[(3, 2), (2, 3)], 0),
        (&[(2, 2)], &[(3, 1), (1, 3)], 1),
        (&[(2, 1), (1, 2)], &[(3, 0), (0, 3)], 0),
        (&[(2, 0), (1, 1), (0, 2)], &[], 0),
        (&[(1, 0), (0, 1)], &[], 0),
        (&[(0, 0)], &[], 0),
    ];
    for (k, (ands, nands, ones)) in expected.iter().enumerate() {
        let col = 7 - k as u32;
        let mut got_and = Vec::new();
        let mut got_nand = Vec::new();
        let mut got_ones = 0;
        for bit in m.column(col) {
            match (bit.source, bit.polarity) {
                (PpSource::Constant(_), _) => got_ones += 1,
                (PpSource::Product { i, j }, Polarity::NegativeNand) => got_nand.push((i, j)),
                (PpSource::Product { i, j }, _) => got_and.push((i, j)),
            }
        }
        got_and.sort();
        got_nand.sort();
        let mut want_and = ands.to_vec();
        let mut want_nand = nands.to_vec();
        want_and.sort();
        want_nand.sort();
        assert_eq!(
            (got_and, got_nand, got_ones),
            (want_and, want_nand, *ones),
            "column 2^{col}"
        );
    }
}
