//! Dirac complex in k vector variables: Clifford and Weyl-module building
//! blocks, the operators 𝒟₀, 𝒟₁, 𝒟₂′, 𝒟₂″ on polynomial fields, their symbols
//! and Hodge Laplacians, a spectral solver for 𝒟₀u = f on the torus, and
//! tangential operators on affine hypersurfaces.

pub mod boundary;
pub mod calculus;
pub mod clifford;
pub mod dirac_ops;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod solver;
pub mod suites;
pub mod symbols;
pub mod weyl;

pub use clifford::{build_clifford, Chirality, CliffordRep};
pub use dirac_ops::{DiracComplex, PolyField, ValueSpace};
pub use error::{Error, Result};
pub use linalg::C64;
pub use poly::SpinorPoly;
pub use report::{CheckRecord, Report};
pub use solver::{GridField, SpectralSolver};
pub use symbols::{SymbolBundle, SymbolContext};
pub use weyl::{Partition, WeylSpace};
