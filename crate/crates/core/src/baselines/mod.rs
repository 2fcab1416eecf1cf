//! Comparison searches over the combined space.

mod mckp;
mod nsga2;

pub use mckp::{mckp_candidates, mckp_search};
pub use nsga2::{crowding_distance, fast_nondominated_sort, nsga2_search, GenomeLayout, Nsga2, Nsga2Params};
