//! Exact Fourier expansions of Borcherds products on lattices of the form
//! `U + U + (-1)L0`, computed through the logarithm of the product.

pub mod engine;
pub mod error;
pub mod filter;
pub mod hermitian;
pub mod lattice;
pub mod par;
pub mod rat;
pub mod series;
pub mod vvmf;

pub use engine::{compute_product, naive_product, ProductResult, WeylData};
pub use error::{Error, Result};
pub use filter::TruncationFilter;
pub use hermitian::{count_coefficients, delta_power, gl2_orbit_reduce, restrict_diagonal, HermitianIndex};
pub use lattice::{DiscElement, Index, LatticeL0, Region};
pub use par::Execution;
pub use series::FormalSeries;
pub use vvmf::{parse_vvform, VVForm};
