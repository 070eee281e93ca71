//! Exact linear algebra over the residue field `F_q`.

mod field;
mod form;
mod matrix;
mod subspace;

pub use field::{Elem, FieldTable, MAX_ORDER};
pub use form::{enumerate_isotropic_flags, symplectic_basis, GramForm};
pub use matrix::{axpy, dot, null_space, rref_rows, solve_in_span, MatrixK};
pub use subspace::{
    complete_flag_count, enumerate_complete_flags, enumerate_subspaces, gaussian_binomial,
    q_integer, Flag, Subspace,
};

/// Field tables for `F_q` (`q` a prime power, at most [`MAX_ORDER`]).
pub fn gf_init(q: u32) -> crate::Result<FieldTable> {
    FieldTable::new(q)
}
