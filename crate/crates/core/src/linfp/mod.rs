//! Exact linear algebra over `F_p` and `F_{p^m}`.

mod dense;
mod field;
pub(crate) mod poly;
mod sparse;

pub use dense::{dense_rank, Echelon};
pub use field::{is_prime, Field, Fp, Fq};
pub use sparse::{cohomology_dim, kernel_basis, rank, SparseMat};
