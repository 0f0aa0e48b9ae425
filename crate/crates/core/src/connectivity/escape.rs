use std::collections::HashSet;

use num_complex::Complex64;

use super::certificate::{Certificate, CertificateKind};
use crate::tree::{Alphabet, EpWordJson};
use crate::{Error, Result};

pub const DEFAULT_ESCAPE_DEPTH: usize = 24;
pub const DEFAULT_FRONTIER_CAP: usize = 1_000_000;

/// Frontier points within this distance share a grid cell and are merged.
const DEDUPE_CELL: f64 = 1e-9;

/// Relative tolerance added to the bounding radius before pruning.
const SLACK_REL: f64 = 1e-9;

struct Node {
    point: Complex64,
    parent: u32,
    letter: u16,
}

/// Decides whether `target` can lie in the tipset by pulling it back
/// through the maps `f_j(z) = 1 + c_j z`.
///
/// Every point of the tipset has a preimage in the tipset, which lies in
/// the bounding disk `|z - 1| <= R`. Preimages `(p - 1)/c_j` outside the
/// disk are discarded; if nothing survives, `target` is certified outside
/// the tipset (for `target = 0`, the tree is not root-connected). Otherwise
/// the result is `NotExcluded`, with the letters of a surviving backward
/// path as witness. Exceeding `frontier_cap` stops the search early and
/// flags the answer as low confidence.
pub fn member_escape_test(
    alphabet: &Alphabet,
    target: Complex64,
    max_depth: usize,
    frontier_cap: usize,
) -> Result<Certificate> {
    if max_depth == 0 {
        return Err(Error::InvalidArgument("max_depth must be at least 1".into()));
    }
    if !(target.re.is_finite() && target.im.is_finite()) {
        return Err(Error::InvalidArgument("target must be finite".into()));
    }
    let radius = alphabet.bounding_radius();
    let bound = radius * (1.0 + SLACK_REL) + SLACK_REL;
    let letters = alphabet.letters();
    let one = Complex64::new(1.0, 0.0);

    let mut levels: Vec<Vec<Node>> = vec![vec![Node {
        point: target,
        parent: u32::MAX,
        letter: 0,
    }]];
    for depth in 1..=max_depth {
        let prev = levels.last().expect("nonempty");
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        let mut overflow = false;
        'outer: for (pi, node) in prev.iter().enumerate() {
            for (j, &c) in letters.iter().enumerate() {
                let p = (node.point - one) / c;
                if (p - one).norm() > bound {
                    continue;
                }
                let cell = ((p.re / DEDUPE_CELL).round() as i64, (p.im / DEDUPE_CELL).round() as i64);
                if !seen.insert(cell) {
                    continue;
                }
                if next.len() >= frontier_cap {
                    overflow = true;
                    break 'outer;
                }
                next.push(Node {
                    point: p,
                    parent: pi as u32,
                    letter: j as u16,
                });
            }
        }
        if next.is_empty() {
            return Ok(Certificate::new(CertificateKind::Excluded, depth)
                .with_detail("every backward path leaves the bounding disk"));
        }
        levels.push(next);
        if overflow {
            let mut cert = witness_certificate(&levels, depth);
            cert.low_confidence = true;
            cert.detail = Some(format!("frontier cap {frontier_cap} reached at depth {depth}"));
            return Ok(cert);
        }
    }
    Ok(witness_certificate(&levels, max_depth))
}

/// `NotExcluded` with the word of the first surviving path at the last
/// level: `target = f_w(p)` with `p` in the bounding disk.
fn witness_certificate(levels: &[Vec<Node>], depth: usize) -> Certificate {
    let mut word = Vec::with_capacity(depth);
    let mut idx = 0usize;
    for level in levels[1..].iter().rev() {
        let node = &level[idx];
        word.push(node.letter as usize + 1);
        idx = node.parent as usize;
    }
    word.reverse();
    let mut cert = Certificate::new(CertificateKind::NotExcluded, depth);
    cert.witness = Some(EpWordJson { pre: word, per: Vec::new() });
    cert
}
