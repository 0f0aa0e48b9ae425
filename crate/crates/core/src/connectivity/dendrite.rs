use num_complex::Complex64;

use super::certificate::{Certificate, CertificateKind};
use super::cover::{disk_cover, overlaps_in};
use super::letter_graph_connected;
use crate::tree::{Alphabet, Relation};
use crate::union_find::UnionFind;
use crate::Result;

/// Relations must hold to this accuracy to count as evidence.
const RELATION_TOL: f64 = 1e-9;

/// Semi-decision for fractal dendrites at cover level `m`.
///
/// Returns `Connected` ("consistent with a dendrite") when
/// 1. the relations hold and their letter graph is connected,
/// 2. every localized overlap of two first-level pieces lies within
///    `eps = 2 * (max disk diameter)` of a tip point claimed by a relation
///    between those pieces, and
/// 3. removing the disks near each claimed point splits the cover into at
///    least two components (the point is a cut point).
///
/// Anything else is `Inconclusive`; this never proves dendricity.
pub fn dendrite_heuristic(alphabet: &Alphabet, relations: &[Relation], m: usize) -> Result<Certificate> {
    let n = alphabet.len();
    let inconclusive = |why: String| Ok(Certificate::new(CertificateKind::Inconclusive, m).with_detail(why));
    for r in relations {
        if alphabet.check_relation(r)? > RELATION_TOL {
            return inconclusive(format!("relation {r} does not hold"));
        }
    }
    if !letter_graph_connected(n, relations) {
        return inconclusive("letter graph of the relations is disconnected".into());
    }
    let cover = disk_cover(alphabet, m)?;
    let eps = 4.0 * cover.max_radius();

    let mut claimed: Vec<Complex64> = Vec::new();
    for j in 0..n as u16 {
        for k in j + 1..n as u16 {
            let tips: Vec<Complex64> = relations
                .iter()
                .filter(|r| r.letter_pair() == (j, k))
                .map(|r| alphabet.phi_ep(r.left()))
                .collect::<Result<_>>()?;
            for pair in overlaps_in(&cover, alphabet, j, k)? {
                if !tips.iter().any(|t| (t - pair.midpoint).norm() <= eps) {
                    return inconclusive(format!(
                        "pieces {} and {} overlap near {} away from any claimed tip point",
                        j + 1,
                        k + 1,
                        pair.midpoint
                    ));
                }
            }
            for t in tips {
                if !claimed.iter().any(|x| (x - t).norm() <= eps) {
                    claimed.push(t);
                }
            }
        }
    }

    for &x in &claimed {
        let keep: Vec<usize> = (0..cover.len())
            .filter(|&i| (cover.disks[i].center - x).norm() > eps)
            .collect();
        let mut index = vec![usize::MAX; cover.len()];
        for (pos, &i) in keep.iter().enumerate() {
            index[i] = pos;
        }
        let mut uf = UnionFind::new(keep.len());
        cover.for_each_intersection(|a, b| {
            if index[a] != usize::MAX && index[b] != usize::MAX {
                uf.union(index[a], index[b]);
            }
        });
        if uf.components() < 2 {
            return inconclusive(format!("{x} does not separate the cover"));
        }
    }
    let points: Vec<String> = claimed.iter().map(|x| format!("{x}")).collect();
    Ok(Certificate::new(CertificateKind::Connected, m)
        .with_detail(format!("dendrite-consistent; overlap points {}", points.join(", "))))
}
