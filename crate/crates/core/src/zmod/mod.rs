//! Exact integer linear algebra: Smith normal form, homology of integer chain
//! complexes, and the structure functors on finitely generated abelian groups.

mod abelian;
mod echelon;
mod matrix;
mod snf;
mod subquotient;

pub use abelian::{ext1, hom_group, tensor, tor1, FgAbelianGroup};
pub use echelon::{Echelon, EchelonColumn};
pub use matrix::{
    axpy, sparse_from_dense, sparse_get, sparse_reduce, sparse_to_dense, IntMatrix, ModFloor,
    SparseMatrix, SparseVec,
};
pub use snf::{invariant_factors, smith_normal_form, Smith};
pub use subquotient::{kernel_generators, moduli_vectors, reduce_coords, solve, Subquotient};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::Error;

/// `Ker(d_out) / Im(d_in)` for free abelian chain groups, `d_in: Z^a -> Z^m`,
/// `d_out: Z^m -> Z^b`. The returned [`Subquotient`] carries the witness maps.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Subquotient, Error> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::NotAComplex(format!(
            "incoming differential has {} rows but outgoing has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !(d_out * d_in).is_zero() {
        return Err(Error::NotAComplex("not a complex at this degree".into()));
    }
    let here = vec![BigInt::zero(); d_in.rows()];
    let there = vec![BigInt::zero(); d_out.rows()];
    Subquotient::homology(
        Some(&d_in.to_sparse_columns()),
        Some(&d_out.to_sparse_columns()),
        &here,
        &there,
    )
}
