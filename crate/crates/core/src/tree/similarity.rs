use std::ops::Mul;

use num_complex::Complex64;

/// The complex affinity `z -> node + scale * (z - 1)`.
///
/// `f_v` for a finite word `v` has `node = phi(v)` and `scale = prod(v)`,
/// so it sends the root `1` to the node `phi(v)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Similarity {
    pub node: Complex64,
    pub scale: Complex64,
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity {
        node: Complex64::new(1.0, 0.0),
        scale: Complex64::new(1.0, 0.0),
    };

    pub fn new(node: Complex64, scale: Complex64) -> Self {
        debug_assert!(scale != Complex64::new(0.0, 0.0));
        Self { node, scale }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.node + self.scale * (z - 1.0)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        Similarity {
            node: self.apply(inner.node),
            scale: self.scale * inner.scale,
        }
    }

    pub fn inverse(&self) -> Similarity {
        Similarity {
            node: 1.0 + (1.0 - self.node) / self.scale,
            scale: 1.0 / self.scale,
        }
    }

    /// `max(|node - node'|, |scale - scale'|)`.
    pub fn distance(&self, other: &Similarity) -> f64 {
        (self.node - other.node)
            .norm()
            .max((self.scale - other.scale).norm())
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance(&Self::IDENTITY) <= tol
    }
}

impl Mul for Similarity {
    type Output = Similarity;

    fn mul(self, rhs: Similarity) -> Similarity {
        self.compose(&rhs)
    }
}
