//! Readers and writers for the on-disk formats.

mod csvutil;
pub mod graph_json;
pub mod membership;
pub mod prefixes;
pub mod relationships;
pub mod requests;
pub mod results;
pub mod stats;

pub use graph_json::{load_graph, save_graph};
pub use membership::parse_membership;
pub use prefixes::parse_as_prefixes;
pub use relationships::parse_relationships;
pub use requests::parse_oracle_requests;
pub use results::{write_requests_csv, write_summary_json, Summary};
pub use stats::{write_ccdf_csv, write_pairs_csv, SnapshotReport};
