//! Geometric certificates: bounding-disk covers, disconnection proofs,
//! letter-graph connectivity, escape tests for points and dendrite checks.

mod certificate;
mod cover;
mod dendrite;
mod escape;

pub use certificate::{Certificate, CertificateKind};
pub use cover::{
    certify_disconnected, certify_disconnected_with_budget, disk_cover, disk_cover_with_budget,
    overlap_localization, Disk, DiskCover, OverlapPair, DEFAULT_DISK_BUDGET, PAIR_CHECKS_PER_DISK,
};
pub use dendrite::dendrite_heuristic;
pub use escape::{member_escape_test, DEFAULT_ESCAPE_DEPTH, DEFAULT_FRONTIER_CAP};

use crate::tree::Relation;
use crate::union_find::UnionFind;

/// Whether the graph on the letters `0..n` with an edge between the first
/// letters of every relation is connected. For relations that hold, this is
/// exactly connectivity of the tipset.
pub fn letter_graph_connected(n: usize, relations: &[Relation]) -> bool {
    if n == 0 {
        return false;
    }
    let mut uf = UnionFind::new(n);
    for r in relations {
        let (a, b) = r.letter_pair();
        if (b as usize) < n {
            uf.union(a as usize, b as usize);
        }
    }
    uf.components() == 1
}
