//! Arithmetic substrate: exact rationals, dense matrices, tensor products,
//! partial traces and seeded sampling of generic points.

mod matrix;
mod sample;
mod scalar;

pub use matrix::{invert, partial_trace_aux, tensor_product, tensor_vec, BlockGrid, OpMatrix};
pub use sample::Sampler;
pub use scalar::{ParseScalarError, Scalar};

/// Vectors in a module are plain coordinate lists.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}
