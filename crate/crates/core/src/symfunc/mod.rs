//! Elementary symmetric functions of symmetric matrices, Newton
//! transformations and Garding cone membership.
//!
//! All routines are pure and operate on small dense matrices (`dim <= 8`).

mod cone;
mod eigen;
mod matrix;
mod newton;

pub use cone::{cone_check, in_cone, sigma_k_root, ConeSpec, Sign};
pub use eigen::{eigen_decompose, eigen_sym, EigenList};
pub use matrix::{SymMat, MAX_DIM};
pub use newton::{newton_pass, newton_transform, sigma, sigma_mat, sigma_mat_charpoly, NewtonPass};
