//! Free resolutions, Ext and homological dimensions over finite-dimensional
//! algebras, and resolutions over Ore extensions built from them.
//!
//! * [`resolution`]: free covers, resolutions, `Ext`, `dh`, global dimension
//!   and bidimension, twist invariance and subadditivity checks.
//! * [`cone`]: induced resolutions `P ⊗_R A` and the mapping cone of a lift of
//!   `j′ : M_α ⊗_R A → M ⊗_R A`, giving a free resolution of a module over `A`.
//! * [`bimodule`]: the two-sided resolution of `A` obtained from a bimodule
//!   resolution of `R`, checked on `t`-degree truncations.

pub mod bimodule;
pub mod cone;
pub mod resolution;

use std::fmt;

use crate::algebra::RightModule;
use crate::linalg::Matrix;
use crate::report::CheckReport;
use crate::scalar::Field;

pub use bimodule::{bimodule_resolution, BimoduleResolution};
pub use cone::{cone_ext, induced_ext, lower_bound_witness, retraction_check, ConeResolution};
pub use resolution::{
    bidim, cover_splits, dh, ext_dims, ext_dims_with, free_cover, gldim, is_projective, regular_bimodule, resolve, resolve_free, subadditivity_check, twist_invariance_check,
    CoverStrategy, FreeCover, Resolution,
};

/// A projective dimension, or a lower bound when the search was capped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomDim {
    Finite(usize),
    AtLeast(usize),
}

impl HomDim {
    pub fn is_finite(self) -> bool {
        matches!(self, HomDim::Finite(_))
    }

    pub fn lower(self) -> usize {
        match self {
            HomDim::Finite(d) | HomDim::AtLeast(d) => d,
        }
    }

    /// `None` stands for an unbounded value.
    pub fn upper(self) -> Option<usize> {
        match self {
            HomDim::Finite(d) => Some(d),
            HomDim::AtLeast(_) => None,
        }
    }

    pub fn max(self, other: HomDim) -> HomDim {
        match (self, other) {
            (HomDim::Finite(a), HomDim::Finite(b)) => HomDim::Finite(a.max(b)),
            (a, b) => HomDim::AtLeast(a.lower().max(b.lower())),
        }
    }
}

impl fmt::Display for HomDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomDim::Finite(d) => write!(f, "{d}"),
            HomDim::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

/// Modules `C_0, C_1, …` with `d_i : C_{i+1} → C_i`.
#[derive(Clone, Debug)]
pub struct ChainComplex<F> {
    pub modules: Vec<RightModule<F>>,
    pub differentials: Vec<Matrix<F>>,
}

impl<F: Field> ChainComplex<F> {
    /// `d_i ∘ d_{i+1} = 0` and every `d_i` is a module map.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new("chain complex");
        for (i, d) in self.differentials.iter().enumerate() {
            let (src, dst) = (&self.modules[i + 1], &self.modules[i]);
            report.record(d.shape() == (dst.dim(), src.dim()), || format!("d_{i} has the wrong shape"));
            for (ra, rb) in src.action().iter().zip(dst.action()) {
                report.record(d.mul(ra) == rb.mul(d), || format!("d_{i} is not a module map"));
            }
            if let Some(next) = self.differentials.get(i + 1) {
                report.record(d.mul(next).is_zero(), || format!("d_{i} ∘ d_{} ≠ 0", i + 1));
            }
        }
        report
    }
}
