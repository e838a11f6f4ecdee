//! Special-unitary geometry: matrices, the generator basis, the vector
//! embedding `-i log U = r . g`, the fold that identifies `U` with `-U`, and
//! the two distance measures.

mod basis;
mod distance;
mod haar;
pub mod qubit;
mod unitary;
mod vector;

pub use basis::{make_generator_basis, GeneratorBasis};
pub use distance::{distance_d, distance_df, distance_from_identity};
pub use haar::{sample_haar_unitary, sample_haar_with};
pub use unitary::{UnitaryMatrix, REUNITARIZE_EVERY, REUNITARIZE_MIN_LEN, UNITARITY_TOL};
pub use vector::{
    fold_threshold, fold_vector, log_vector_unfolded, outer_radius, unitary_to_vector,
    vector_to_unitary, SuVector,
};

pub use num_complex::Complex64;

/// `log2(n)` when `n` is a power of two.
pub(crate) fn qubit_count(n: usize) -> Option<u32> {
    (n.is_power_of_two() && n >= 2).then(|| n.trailing_zeros())
}
