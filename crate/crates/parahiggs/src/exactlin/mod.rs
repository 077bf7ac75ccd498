//! Exact linear algebra over Q and finite fields.

mod enumerate;
mod field;
mod matrix;
mod subspace;

pub use enumerate::{
    enumerate_all, enumerate_subspaces, gaussian_binomial, total_subspaces, Budget, SubspaceIter,
};
pub use field::{
    format_rational, is_prime, parse_rational, Field, FiniteField, GaloisField, PrimeField,
    Rationals, GALOIS_MAX_ORDER,
};
pub use matrix::Matrix;
pub use subspace::{check_flag, flag_meet_dims, image_span, standard_flag, Subspace};

pub(crate) use subspace::unit;

/// Rank of a matrix.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    m.rank()
}
