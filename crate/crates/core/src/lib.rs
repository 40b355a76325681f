//! Target-oriented sequential pattern mining with time-intervals.
//!
//! Given timestamped event sequences and a target itemset, finds the
//! frequent patterns that lead up to the target, with a learned gap range
//! between every pair of consecutive itemsets:
//!
//! ```
//! use tisminer_core::{fixtures, mine, Itemset, MiningConfig, TargetSpec};
//!
//! let cfg = MiningConfig::new("0.3".parse().unwrap(), TargetSpec::new(Itemset::single("s7")));
//! let patterns = mine(&fixtures::sample(), &cfg).unwrap();
//! assert_eq!(patterns.len(), 9);
//! assert_eq!(patterns[0].0.to_string(), "<(s1), [3,5], (s3), [8,12], (s7)>");
//! assert_eq!(patterns[0].1.render(), "0.5");
//! ```
//!
//! The pipeline reverses each sequence so the target sits in front, keeps
//! only sequences that contain it, mines frequent patterns level by level
//! (clustering the observed gaps of every frequent pair into time ranges),
//! then keeps the patterns mentioning the target and flips them back.

pub mod clustering;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod miner;
pub mod model;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod preprocess;
pub mod synth;

pub use error::{Error, Result};
pub use miner::{mine, mine_with_trace, MiningConfig, MiningTrace, Scored};
pub use model::{
    render_support, Dataset, Event, Gap, GapList, IntervalPattern, ItemId, Itemset, MinSupport,
    Orientation, Sequence, Support, Time, TimeRange,
};
pub use preprocess::TargetSpec;
