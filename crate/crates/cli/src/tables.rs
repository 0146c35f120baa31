//! Bundled chains and reference values.

use powsums::planner::Chain;
use powsums::solver::Direction;
use powsums::Result;

use crate::chainfile::ChainFile;

/// 62-factor chain for powers of 3 as sums of powers of 2.
pub const THREE_AS_SUM_OF_TWOS: &str = include_str!("../../../tables/t2.chain");
/// 8-factor chain for powers of 2 as sums of powers of 3.
pub const TWO_AS_SUM_OF_THREES: &str = include_str!("../../../tables/t3.chain");

/// `(bits, ones)` of `3^x` for `x = 0..=25`.
pub const BIT_COUNTS: [(u64, u64); 26] = [
    (1, 1),
    (2, 2),
    (4, 2),
    (5, 4),
    (7, 3),
    (8, 6),
    (10, 6),
    (12, 5),
    (13, 6),
    (15, 8),
    (16, 9),
    (18, 13),
    (20, 10),
    (21, 11),
    (23, 14),
    (24, 15),
    (26, 11),
    (27, 14),
    (29, 14),
    (31, 17),
    (32, 17),
    (34, 20),
    (35, 19),
    (37, 22),
    (39, 16),
    (40, 18),
];

pub fn bundled_text(direction: Direction) -> &'static str {
    match direction {
        Direction::ThreeAsSumOfTwos => THREE_AS_SUM_OF_TWOS,
        Direction::TwoAsSumOfThrees => TWO_AS_SUM_OF_THREES,
    }
}

pub fn bundled_file(direction: Direction) -> ChainFile {
    ChainFile::parse(bundled_text(direction)).expect("bundled chain parses")
}

/// The bundled chain for `direction`, with its order columns verified.
pub fn bundled_chain(direction: Direction) -> Result<Chain> {
    bundled_file(direction).to_chain(Some(direction))
}
