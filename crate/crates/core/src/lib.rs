//! Numerical toolkit for SIC-POVMs: fiducial search plus four equivalent
//! formulations of SIC existence (simplex/design, adjoint group, Lie
//! algebra, Jordan algebra) as checks on Hermitian operator bases.

pub mod construct;
pub mod equivalence;
pub mod error;
pub mod group;
pub mod hermitian;
pub mod io;
pub mod jordan;
pub mod lie;
pub mod random;
pub mod rep;
pub mod report;
pub mod sic;
pub mod simplex;
pub mod structure;
pub mod tol;

pub use error::{Error, Result};
pub use hermitian::{
    ComplexMatrix, ComplexVector, HermitianOperator, OperatorBasis, RealMatrix, SpectrumReport, Superoperator,
};
pub use report::CheckReport;
