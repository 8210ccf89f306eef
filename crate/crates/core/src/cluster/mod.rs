//! Resolution-controlled greedy modularity clustering, modularity
//! evaluation, and complete-linkage hierarchical clustering.

mod greedy;
mod hierarchical;
mod modularity;

pub use greedy::{greedy_labels, greedy_modularity};
pub use hierarchical::complete_linkage_cut;
pub use modularity::{modularity, modularity_of_labels};

/// Default resolution for the final clustering.
pub const DEFAULT_RESOLUTION: f64 = 1.7;
