use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{Geometry, ImageGrid, Rgb};
use crate::connectivity::{certify_disconnected_with_budget, member_escape_test, CertificateKind};
use crate::dimension::sum_of_squares;
use crate::family::ParametricFamily;
use crate::{Error, Result};

pub const LABEL_M2: u8 = 1;
pub const LABEL_M0: u8 = 2;
pub const LABEL_DISCONNECTED: u8 = 4;
/// Parameter outside the admissible region; excludes every other label.
pub const LABEL_DOMAIN: u8 = 8;

/// Scan colors: domain violations, root-connected (`m0`), certified
/// disconnected, `m2`, and unlabeled pixels.
pub const PALETTE_DOMAIN: Rgb = [250, 246, 236];
pub const PALETTE_M0: Rgb = [0, 0, 0];
pub const PALETTE_DISCONNECTED: Rgb = [255, 255, 255];
pub const PALETTE_M2: Rgb = [200, 200, 200];
pub const PALETTE_NONE: Rgb = [128, 128, 128];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanTests {
    pub m2: bool,
    pub m0: bool,
    pub disconnect: bool,
}

impl ScanTests {
    /// Parses a comma-separated list such as `m2,m0`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Self::default();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part {
                "m2" => t.m2 = true,
                "m0" => t.m0 = true,
                "disconnect" | "disconnected" => t.disconnect = true,
                other => return Err(Error::Parse(format!("unknown scan test {other:?}"))),
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub escape_depth: usize,
    /// Frontier cap per pixel; reaching it counts as not excluded.
    pub frontier_cap: usize,
    pub disconnect_k: usize,
    pub disk_budget: usize,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            escape_depth: 24,
            frontier_cap: 256,
            disconnect_k: 14,
            disk_budget: 1 << 16,
            workers: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelGrid {
    pub geometry: Geometry,
    /// Row-major label bit sets.
    pub labels: Vec<u8>,
}

impl LabelGrid {
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.labels[y * self.geometry.width + x]
    }

    pub fn count(&self, label: u8) -> usize {
        self.labels.iter().filter(|&&l| l & label != 0).count()
    }

    pub fn color(label: u8) -> Rgb {
        if label & LABEL_DOMAIN != 0 {
            PALETTE_DOMAIN
        } else if label & LABEL_M0 != 0 {
            PALETTE_M0
        } else if label & LABEL_DISCONNECTED != 0 {
            PALETTE_DISCONNECTED
        } else if label & LABEL_M2 != 0 {
            PALETTE_M2
        } else {
            PALETTE_NONE
        }
    }

    pub fn to_image(&self) -> ImageGrid {
        ImageGrid {
            geometry: self.geometry,
            pixels: self.labels.iter().flat_map(|&l| Self::color(l)).collect(),
        }
    }
}

/// Labels of the parameter `z`.
pub fn classify(fam: &ParametricFamily, z: Complex64, tests: ScanTests, cfg: &ScanConfig) -> u8 {
    let Ok(a) = fam.eval(z) else {
        return LABEL_DOMAIN;
    };
    let mut label = 0;
    if tests.m2 && sum_of_squares(&a) > 1.0 {
        label |= LABEL_M2;
    }
    if tests.m0 {
        let not_excluded = member_escape_test(&a, Complex64::new(0.0, 0.0), cfg.escape_depth, cfg.frontier_cap)
            .is_ok_and(|c| c.kind == CertificateKind::NotExcluded);
        if not_excluded {
            label |= LABEL_M0;
        }
    }
    if tests.disconnect {
        let disconnected = certify_disconnected_with_budget(&a, cfg.disconnect_k, cfg.disk_budget)
            .is_ok_and(|c| c.kind == CertificateKind::Disconnected);
        if disconnected {
            label |= LABEL_DISCONNECTED;
        }
    }
    label
}

/// Classifies every pixel center, one row per task. The result does not
/// depend on the number of workers.
pub fn scan_grid(fam: &ParametricFamily, tests: ScanTests, geometry: Geometry, cfg: &ScanConfig) -> Result<LabelGrid> {
    let row = |y: usize| -> Vec<u8> {
        (0..geometry.width)
            .map(|x| classify(fam, geometry.pixel_center(x, y), tests, cfg))
            .collect()
    };
    let rows: Vec<Vec<u8>> = if cfg.workers == 0 {
        (0..geometry.height).into_par_iter().map(row).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| (0..geometry.height).into_par_iter().map(row).collect())
    };
    Ok(LabelGrid {
        geometry,
        labels: rows.concat(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_tests() {
        let t = ScanTests::parse("m2, m0").unwrap();
        assert!(t.m2 && t.m0 && !t.disconnect);
        assert!(ScanTests::parse("m3").is_err());
    }

    #[test]
    fn palette_priority() {
        assert_eq!(LabelGrid::color(LABEL_DOMAIN | LABEL_M0), PALETTE_DOMAIN);
        assert_eq!(LabelGrid::color(LABEL_M0 | LABEL_M2), PALETTE_M0);
        assert_eq!(LabelGrid::color(LABEL_DISCONNECTED | LABEL_M2), PALETTE_DISCONNECTED);
        assert_eq!(LabelGrid::color(LABEL_M2), PALETTE_M2);
        assert_eq!(LabelGrid::color(0), PALETTE_NONE);
    }
}
