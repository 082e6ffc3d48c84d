//! Graph, permutation and partial-matching types.

mod edgelist;
mod graph;
mod matching;
mod perm;

pub use edgelist::{
    load_edge_list, read_edge_list, read_id_list, save_edge_list, write_edge_list, write_id_list,
};
pub use graph::Graph;
pub use matching::{MatchProfile, PartialMatching};
pub use perm::Permutation;

/// Dense 0-based node label.
pub type NodeId = u32;
