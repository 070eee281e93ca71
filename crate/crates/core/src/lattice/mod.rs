//! Lattices over `O = F_q[[t]]` at finite `t`-adic precision.

pub mod poly;
mod laurent;
mod ops;
mod rep;
mod submodule;
mod window;

pub use ops::{
    adjacent_representative, are_adjacent, enumerate_intermediate_lattices, index,
    is_sublattice, lattice_intersect, lattice_sum, lift_from_quotient, reduction_mod_pi,
    relative_position, Quotient, DEFAULT_ENUMERATION_CAP,
};
pub use rep::{
    elementary_divisors, lattice_from_columns, lattice_from_generators, HomothetyClass,
    LatticeRep, RelPosition, TruncRing,
};
pub use submodule::{all_invariant_subspaces, map_invariant_subspaces, NilpotentOp};
pub use window::Window;
pub use laurent::{
    apply_matrix, basis_matrix, gram_matrix, is_primitive, modularity, vertex_type, LaurentMatrix,
};
