//! The ten-customer sample dataset used throughout the tests and docs.

use crate::model::{Dataset, Sequence};

pub const SAMPLE_ROWS: &[(&str, &str)] = &[
    ("C001", "(s5,8), (s4,15), (s6,20)"),
    ("C002", "(s1,2), (s3,7), (s2,11), (s6,18)"),
    ("C003", "(s2,3), (s1,4), (s3,7), (s6,17), (s7,19)"),
    ("C004", "(s1,2), (s2,8), (s6,10), (s7,15)"),
    ("C005", "(s5,4), (s6,16), (s1,20), (s3,24)"),
    ("C006", "(s7,7), (s1,13), (s5,18), (s2,25), (s6,28)"),
    ("C007", "(s5,4), (s1,8), (s3,12), (s6,16), (s7,20)"),
    ("C008", "(s1,3), (s5,6), (s2,9), (s4,18), (s6,21)"),
    ("C009", "(s2,5), (s1,10), (s3,15), (s6,20), (s7,25)"),
    ("C010", "(s6,3), (s7,8), (s5,12), (s2,17)"),
];

/// Reversed, filtered and truncated for target `s7`, listed in original
/// time order.
const WORKING_ROWS: &[(&str, &str)] = &[
    ("C003", "(s2,3), (s1,4), (s3,7), (s6,17), (s7,19)"),
    ("C004", "(s1,2), (s2,8), (s6,10), (s7,15)"),
    ("C006", "(s7,7)"),
    ("C007", "(s5,4), (s1,8), (s3,12), (s6,16), (s7,20)"),
    ("C009", "(s2,5), (s1,10), (s3,15), (s6,20), (s7,25)"),
    ("C010", "(s6,3), (s7,8)"),
];

fn build(rows: &[(&str, &str)]) -> Vec<Sequence> {
    rows.iter()
        .map(|(id, text)| Sequence::parse(*id, text).expect("fixture row"))
        .collect()
}

pub fn sample() -> Dataset {
    Dataset::new(build(SAMPLE_ROWS)).expect("fixture dataset")
}

/// Working dataset for target `s7` (reversed orientation).
pub fn sample_working() -> Dataset {
    Dataset::new(build(WORKING_ROWS).iter().map(Sequence::reversed).collect())
        .expect("fixture dataset")
}
