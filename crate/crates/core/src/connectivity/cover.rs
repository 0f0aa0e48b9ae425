use std::collections::HashMap;

use num_complex::Complex64;

use super::certificate::{Certificate, CertificateKind};
use crate::tree::{Alphabet, FiniteWord};
use crate::union_find::UnionFind;
use crate::{Error, Result};

/// Default cap on the number of disks in a cover.
pub const DEFAULT_DISK_BUDGET: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn intersects(&self, other: &Disk) -> bool {
        (self.center - other.center).norm() <= self.radius + other.radius
    }
}

/// The level-`k` bounding set `D^k`: one disk `f_v(D)` per word `v` of
/// length `k`, in lexicographic order of `v`. `D` is the disk of radius `R`
/// around the root `1`, which contains the whole tipset.
#[derive(Clone, Debug)]
pub struct DiskCover {
    pub level: usize,
    n: usize,
    pub disks: Vec<Disk>,
    scales: Vec<Complex64>,
    radius: f64,
}

impl DiskCover {
    /// The level-0 cover: the single disk `D`.
    pub fn root(alphabet: &Alphabet) -> Self {
        let radius = alphabet.bounding_radius();
        Self {
            level: 0,
            n: alphabet.len(),
            disks: vec![Disk { center: Complex64::new(1.0, 0.0), radius }],
            scales: vec![Complex64::new(1.0, 0.0)],
            radius,
        }
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    /// Word of the `i`-th disk.
    pub fn word(&self, i: usize) -> FiniteWord {
        let mut symbols = vec![0u16; self.level];
        let mut rest = i;
        for s in symbols.iter_mut().rev() {
            *s = (rest % self.n) as u16;
            rest /= self.n;
        }
        FiniteWord::new(symbols).expect("cover levels are small")
    }

    /// First letter of the `i`-th disk's word.
    pub fn first_letter(&self, i: usize) -> u16 {
        (i / self.n.pow(self.level as u32 - 1)) as u16
    }

    pub fn max_radius(&self) -> f64 {
        self.disks.iter().map(|d| d.radius).fold(0.0, f64::max)
    }

    /// The next level, `D^{k+1} = f_1(D^k) ∪ .. ∪ f_n(D^k)`, built by
    /// extending every word on the right.
    pub fn refine(&self, alphabet: &Alphabet, budget: usize) -> Result<Self> {
        let needed = self.disks.len() as u128 * self.n as u128;
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "disks",
                needed,
                limit: budget as u128,
            });
        }
        let letters = alphabet.letters();
        let mut disks = Vec::with_capacity(needed as usize);
        let mut scales = Vec::with_capacity(needed as usize);
        for (d, &s) in self.disks.iter().zip(&self.scales) {
            for &c in letters {
                let scale = s * c;
                disks.push(Disk {
                    center: d.center + scale,
                    radius: scale.norm() * self.radius,
                });
                scales.push(scale);
            }
        }
        Ok(Self {
            level: self.level + 1,
            n: self.n,
            disks,
            scales,
            radius: self.radius,
        })
    }

    /// Disks bucketed by centre into cells of width `2 * max_radius`, so
    /// intersecting disks always sit in neighbouring cells.
    fn grid(&self) -> (impl Fn(Complex64) -> (i64, i64), HashMap<(i64, i64), Vec<usize>>) {
        let cell = (2.0 * self.max_radius()).max(f64::MIN_POSITIVE);
        let key = move |z: Complex64| ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, d) in self.disks.iter().enumerate() {
            grid.entry(key(d.center)).or_default().push(i);
        }
        (key, grid)
    }

    /// Number of distance tests [`Self::for_each_intersection`] will make.
    pub fn candidate_pairs(&self) -> u128 {
        let (_, grid) = self.grid();
        let mut total: u128 = 0;
        for (&(kx, ky), members) in &grid {
            let mut around: u128 = 0;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    around += grid.get(&(kx + dx, ky + dy)).map_or(0, |v| v.len() as u128);
                }
            }
            total += members.len() as u128 * around;
        }
        total / 2
    }

    /// Calls `f(i, j)` for every pair `i < j` of intersecting disks.
    pub fn for_each_intersection(&self, mut f: impl FnMut(usize, usize)) {
        let (key, grid) = self.grid();
        for (i, d) in self.disks.iter().enumerate() {
            let (kx, ky) = key(d.center);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(cands) = grid.get(&(kx + dx, ky + dy)) {
                        for &j in cands {
                            if j > i && d.intersects(&self.disks[j]) {
                                f(i, j);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Connected components of the disk intersection graph.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.disks.len());
        self.for_each_intersection(|i, j| {
            uf.union(i, j);
        });
        uf.labels()
    }
}

/// The cover `D^k` of the tipset.
pub fn disk_cover(alphabet: &Alphabet, k: usize) -> Result<DiskCover> {
    disk_cover_with_budget(alphabet, k, DEFAULT_DISK_BUDGET)
}

pub fn disk_cover_with_budget(alphabet: &Alphabet, k: usize, budget: usize) -> Result<DiskCover> {
    if k == 0 {
        return Err(Error::InvalidArgument("cover level must be at least 1".into()));
    }
    let mut cover = DiskCover::root(alphabet);
    for _ in 0..k {
        cover = cover.refine(alphabet, budget)?;
    }
    Ok(cover)
}

/// Groups of first letters joined by the disk components of `cover`.
fn letter_partition(cover: &DiskCover, labels: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    let mut first_of_label: HashMap<usize, usize> = HashMap::new();
    for (i, &l) in labels.iter().enumerate() {
        let letter = cover.first_letter(i) as usize;
        match first_of_label.get(&l) {
            Some(&other) => {
                uf.union(letter, other);
            }
            None => {
                first_of_label.insert(l, letter);
            }
        }
    }
    let groups = uf.labels();
    let count = groups.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for (letter, &g) in groups.iter().enumerate() {
        out[g].push(letter + 1);
    }
    out
}

/// Distance tests allowed per unit of disk budget when searching for a
/// disconnecting cover; heavily overlapping covers are abandoned instead of
/// paying a quadratic cost.
pub const PAIR_CHECKS_PER_DISK: u128 = 64;

/// Searches `k = 1..=max_k` for a cover whose disk components separate the
/// first-level letters into at least two groups. Each disk contains a piece
/// of the tipset, so such a split proves the tipset disconnected.
///
/// The search gives up with `Inconclusive` once a cover would need more
/// than `PAIR_CHECKS_PER_DISK * budget` disk intersection tests.
pub fn certify_disconnected(alphabet: &Alphabet, max_k: usize) -> Result<Certificate> {
    certify_disconnected_with_budget(alphabet, max_k, DEFAULT_DISK_BUDGET)
}

pub fn certify_disconnected_with_budget(
    alphabet: &Alphabet,
    max_k: usize,
    budget: usize,
) -> Result<Certificate> {
    if max_k == 0 {
        return Err(Error::InvalidArgument("max_k must be at least 1".into()));
    }
    let mut cover = DiskCover::root(alphabet);
    for k in 1..=max_k {
        cover = cover.refine(alphabet, budget)?;
        let pairs = cover.candidate_pairs();
        if pairs > PAIR_CHECKS_PER_DISK * budget as u128 {
            return Ok(Certificate::new(CertificateKind::Inconclusive, k)
                .with_detail(format!("level {k} needs {pairs} intersection tests; disk budget exhausted")));
        }
        let labels = cover.components();
        let partition = letter_partition(&cover, &labels, alphabet.len());
        if partition.len() >= 2 {
            let mut cert = Certificate::new(CertificateKind::Disconnected, k);
            cert.partition = partition;
            return Ok(cert);
        }
    }
    Ok(Certificate::new(CertificateKind::Inconclusive, max_k)
        .with_detail("every cover joins all first-level pieces"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapPair {
    pub v: FiniteWord,
    pub w: FiniteWord,
    pub midpoint: Complex64,
}

/// Level-`m` disk pairs `(v, w)` with `v_1 = j`, `w_1 = k` (zero-based
/// letters) whose disks intersect. An empty result proves `F_j ∩ F_k = ∅`.
pub fn overlap_localization(alphabet: &Alphabet, j: u16, k: u16, m: usize) -> Result<Vec<OverlapPair>> {
    let cover = disk_cover(alphabet, m)?;
    Ok(overlaps_in(&cover, alphabet, j, k)?)
}

pub(crate) fn overlaps_in(cover: &DiskCover, alphabet: &Alphabet, j: u16, k: u16) -> Result<Vec<OverlapPair>> {
    let n = alphabet.len();
    if j == k || j as usize >= n || k as usize >= n {
        return Err(Error::InvalidArgument(format!(
            "letters {} and {} must be distinct and at most {n}",
            j + 1,
            k + 1
        )));
    }
    let mut pairs = Vec::new();
    cover.for_each_intersection(|a, b| {
        let (fa, fb) = (cover.first_letter(a), cover.first_letter(b));
        let (v, w) = if (fa, fb) == (j, k) {
            (a, b)
        } else if (fa, fb) == (k, j) {
            (b, a)
        } else {
            return;
        };
        pairs.push((v, w));
    });
    pairs.sort_unstable();
    Ok(pairs
        .into_iter()
        .map(|(v, w)| OverlapPair {
            v: cover.word(v),
            w: cover.word(w),
            midpoint: 0.5 * (cover.disks[v].center + cover.disks[w].center),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn word_indexing() {
        let a = Alphabet::new(vec![c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0)]).unwrap();
        let cover = disk_cover(&a, 3).unwrap();
        assert_eq!(cover.len(), 27);
        for i in 0..27 {
            let w = cover.word(i);
            assert!((a.phi(&w).unwrap() - cover.disks[i].center).norm() < 1e-15);
            assert_eq!(cover.first_letter(i), w.first().unwrap());
        }
    }

    #[test]
    fn budget() {
        let a = Alphabet::new(vec![c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        assert!(matches!(
            disk_cover_with_budget(&a, 5, 16),
            Err(Error::BudgetExceeded { needed: 32, .. })
        ));
        assert!(disk_cover(&a, 0).is_err());
    }
}
