//! Exact algorithms for deciding whether a target party can be made to win
//! a plurality of districts when a path or tree is cut into `k` connected
//! districts.
//!
//! * [`instance`] and [`eval`] define instances, partitions and what counts
//!   as a solution.
//! * [`oracle`] decides tree instances by exhaustive edge-cut enumeration.
//! * [`dp`] is the polynomial dynamic program for two-color trees.
//! * [`star`] handles stars and trees of diameter three with any palette.
//! * [`reductions`] builds the path and tree hardness gadgets with their
//!   witnesses.
//! * [`io`] reads and writes the text formats used by the CLI.

pub mod dp;
pub mod error;
pub mod eval;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod reductions;
pub mod solve;
pub mod star;

pub use error::{Error, Result};
pub use eval::{block_tally, evaluate_partition, partition_from_edge_cut, BlockTally, EvalReport, Partition};
pub use instance::{ColorId, Instance, Mode, Shape, ShapeReport, VertexId};
pub use oracle::{solve_brute_force, OracleResult};
