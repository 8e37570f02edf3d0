//! Exact linear algebra over the integers and rationals.

pub mod matrix;
pub mod modular;
pub mod poly;

pub use matrix::{bareiss_rank, max_abs_row_sum, ExactMatrix};
pub use modular::charpoly_integer;
pub use poly::IntPoly;
