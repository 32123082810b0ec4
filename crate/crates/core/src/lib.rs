//! Exact computations for the Schur-Weyl construction of affine Yangian actions on
//! higher-level Fock spaces.

pub mod affine;
pub mod coeff;
pub mod combinatorics;
pub mod daha;
pub mod error;
pub mod generator;
pub mod io;
pub mod schurweyl;
pub mod sparse;
pub mod verify;
pub mod wedge;

pub use coeff::{ParamPoly, Params, Rational, Scalar};
pub use combinatorics::{Cell, ChargedMultipartition, Partition};
pub use error::{Error, Result};
pub use generator::{CartanMatrix, GeneratorId, Kind};
pub use sparse::SparseVec;
pub use wedge::{Dims, FockState, FockVec, GlobalConfig, UTriple, WedgeVec, WedgeWord};
pub use daha::{DahaConfig, PolyTensor, PolyVec};
pub use schurweyl::WedgeModule;
pub use affine::{AffineModel, Node0Path};
pub use io::{MatrixJson, VectorJson};
pub use verify::{CheckReport, Eval, Mutation, NuSpec, Profile, RelationCheck, Report, Session, Status, Window};
