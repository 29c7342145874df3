//! Character table of the Weyl group of type `D_5`, in GAP's row and column
//! order. Rows are labelled by bipartitions `[a.b]`, columns (conjugacy
//! classes) by `(a.b)`.

pub const GROUP_ORDER: i64 = 1920;

pub const CLASS_LABELS: [&str; 18] = [
    "(1^5.)", "(1^3.1^2)", "(1.1^4)", "(21^3.)", "(1^2.21)", "(21.1^2)", "(.21^3)", "(221.)",
    "(1.22)", "(2.21)", "(311.)", "(1.31)", "(3.11)", "(32.)", "(.32)", "(41.)", "(.41)", "(5.)",
];

pub const CHARACTER_LABELS: [&str; 18] = [
    "[1^2.1^3]", "[1.1^4]", "[.1^5]", "[1^3.2]", "[1^2.21]", "[1.21^2]", "[.21^3]", "[1.2^2]",
    "[2.21]", "[.2^21]", "[1^2.3]", "[1.31]", "[.31^2]", "[2.3]", "[.32]", "[1.4]", "[.41]", "[.5]",
];

/// Index of the sign character `[.1^5]`.
pub const SIGN_ROW: usize = 2;
/// Index of the trivial character `[.5]`.
pub const TRIVIAL_ROW: usize = 17;

#[rustfmt::skip]
pub const TABLE: [[i64; 18]; 18] = [
    [10, -2,  2, -4,  2,  0, -2,  2, -2,  0,  1, -1,  1, -1,  1,  0,  0,  0],
    [ 5,  1, -3, -3, -1,  1,  3,  1,  1, -1,  2,  0, -2,  0,  0, -1,  1,  0],
    [ 1,  1,  1, -1, -1, -1, -1,  1,  1,  1,  1,  1,  1, -1, -1, -1, -1,  1],
    [10, -2,  2, -2,  0,  2, -4, -2,  2,  0,  1, -1,  1,  1, -1,  0,  0,  0],
    [20, -4,  4, -2,  2, -2,  2,  0,  0,  0, -1,  1, -1,  1, -1,  0,  0,  0],
    [15,  3, -9, -3, -1,  1,  3, -1, -1,  1,  0,  0,  0,  0,  0,  1, -1,  0],
    [ 4,  4,  4, -2, -2, -2, -2,  0,  0,  0,  1,  1,  1,  1,  1,  0,  0, -1],
    [10,  2, -6,  0,  0,  0,  0,  2,  2, -2, -2,  0,  2,  0,  0,  0,  0,  0],
    [20, -4,  4,  2, -2,  2, -2,  0,  0,  0, -1,  1, -1, -1,  1,  0,  0,  0],
    [ 5,  5,  5, -1, -1, -1, -1,  1,  1,  1, -1, -1, -1, -1, -1,  1,  1,  0],
    [10, -2,  2,  2,  0, -2,  4, -2,  2,  0,  1, -1,  1, -1,  1,  0,  0,  0],
    [15,  3, -9,  3,  1, -1, -3, -1, -1,  1,  0,  0,  0,  0,  0, -1,  1,  0],
    [ 6,  6,  6,  0,  0,  0,  0, -2, -2, -2,  0,  0,  0,  0,  0,  0,  0,  1],
    [10, -2,  2,  4, -2,  0,  2,  2, -2,  0,  1, -1,  1,  1, -1,  0,  0,  0],
    [ 5,  5,  5,  1,  1,  1,  1,  1,  1,  1, -1, -1, -1,  1,  1, -1, -1,  0],
    [ 5,  1, -3,  3,  1, -1, -3,  1,  1, -1,  2,  0, -2,  0,  0,  1, -1,  0],
    [ 4,  4,  4,  2,  2,  2,  2,  0,  0,  0,  1,  1,  1, -1, -1,  0,  0, -1],
    [ 1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1,  1],
];

/// Reference values of the line character on the 18 classes.
pub const CHI5_REFERENCE: [i64; 18] = [16, 0, 0, 8, 0, 0, 0, 4, 0, 0, 4, 0, 0, 2, 0, 2, 0, 1];
/// Reference values of its third exterior power.
pub const WEDGE3_REFERENCE: [i64; 18] = [560, 0, 0, 24, 0, 0, 0, -20, 0, 0, 8, 0, 0, 0, 0, -2, 0, 0];
/// Reference multiplicities of the irreducibles in the third exterior power,
/// in row order.
pub const WEDGE3_MULTIPLICITIES_REFERENCE: [i64; 18] = [1, 1, 0, 4, 5, 4, 1, 1, 6, 0, 5, 6, 3, 3, 1, 2, 2, 0];
/// Constituents of the line character, each with multiplicity one.
pub const CHI5_CONSTITUENTS: [&str; 3] = ["[.5]", "[1.4]", "[2.3]"];

/// Centralizer orders from column orthogonality: `|C(g)| = sum_chi chi(g)^2`.
pub fn centralizer_orders() -> [i64; 18] {
    let mut out = [0i64; 18];
    for (c, slot) in out.iter_mut().enumerate() {
        *slot = TABLE.iter().map(|row| row[c] * row[c]).sum();
    }
    out
}

/// Class sizes `|W| / |C(g)|`.
pub fn class_sizes() -> [i64; 18] {
    let mut out = [0i64; 18];
    for (slot, z) in out.iter_mut().zip(centralizer_orders()) {
        debug_assert_eq!(GROUP_ORDER % z, 0);
        *slot = GROUP_ORDER / z;
    }
    out
}

pub fn row_index(label: &str) -> Option<usize> {
    CHARACTER_LABELS.iter().position(|&l| l == label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_square_sum() {
        let s: i64 = TABLE.iter().map(|row| row[0] * row[0]).sum();
        assert_eq!(s, GROUP_ORDER);
    }

    #[test]
    fn class_sizes_partition_the_group() {
        let sizes = class_sizes();
        assert_eq!(sizes.iter().sum::<i64>(), GROUP_ORDER);
        assert_eq!(sizes[0], 1);
        for z in centralizer_orders() {
            assert_eq!(GROUP_ORDER % z, 0);
        }
    }

    #[test]
    fn row_orthogonality() {
        let sizes = class_sizes();
        for (a, ra) in TABLE.iter().enumerate() {
            for (b, rb) in TABLE.iter().enumerate() {
                let s: i64 = (0..18).map(|c| sizes[c] * ra[c] * rb[c]).sum();
                assert_eq!(s, if a == b { GROUP_ORDER } else { 0 }, "rows {a} {b}");
            }
        }
    }

    #[test]
    fn transcription_checksum() {
        let weighted: i64 = TABLE
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i as i64 + 1) * (j as i64 + 1) * v))
            .sum();
        let abs: i64 = TABLE.iter().flatten().map(|v| v.abs()).sum();
        assert_eq!((weighted, abs), (CHECKSUM_WEIGHTED, CHECKSUM_ABS));
    }

    const CHECKSUM_WEIGHTED: i64 = 5846;
    const CHECKSUM_ABS: i64 = 537;
}
