//! Polynomial roots and the algebraic point clouds that approximate the
//! unstable set and the root connectivity set of a family.

mod aberth;
mod cloud;

pub use aberth::{polynomial_roots, Root, MAX_SWEEPS, RESIDUAL_REL, ROOT_CLUSTER_TOL, TRIM_REL};
pub use cloud::{
    m0_root_cloud, m_root_cloud, CloudOptions, CloudPoint, RootCloud, DEFAULT_PAIR_BUDGET,
};
pub(crate) use aberth::roots_of;
