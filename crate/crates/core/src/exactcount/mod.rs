//! Exact counting and enumeration of bisections.
//!
//! Vectors are written as bit strings, index 0 leftmost, with `1` meaning
//! `δ_i = +1`. Trivial solutions are the two alternating vectors and, for odd
//! `n`, every antisymmetric vector `δ_{n−i} = −δ_i`.

mod count;
mod enumerate;
mod mitm;
mod orbits;
mod row;
mod shard;
mod sign;

pub use count::{count_bisections, trivial_count, CountConfig, CountResult, ShardInfo, Strategy};
pub use enumerate::{enumerate_solutions, SolutionFilter, Solutions};
pub use orbits::{canonical_orbits, OrbitSummary};
pub use row::{pascal_row, PascalRow};
pub use shard::{count_shard, count_sharded, merge_shards, prefix_partition, ShardDescriptor, ShardResult, MAX_PREFIX_LEN};
pub use sign::{classify, is_solution, Classification, SignVector, SolutionRecord};

pub(crate) use row::for_each_binomial;
