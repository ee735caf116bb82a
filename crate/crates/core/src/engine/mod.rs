//! Weyl data, the parts of the logarithm, and the two product algorithms.

mod fast;
mod naive;
mod parts;
mod result;
mod weyl;

pub use fast::{compute_product, compute_product_with, ProductOptions};
pub use naive::{naive_product, naive_product_with, NaiveOptions};
pub use parts::{build_part, build_parts, region_factors, Factor, PartBounds, PartsBundle};
pub use result::{Algorithm, ProductResult};
pub use weyl::{weyl_data, weyl_index, WeylData};
