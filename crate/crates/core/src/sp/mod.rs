//! The building of `Sp_n(F_q((t)))` as a subcomplex of the building of
//! `SL_{2n}`, for the standard form `J_n = [[0, I_n], [-I_n, 0]]`.

mod coords;
mod gsp;
mod lift;
mod local;

pub use coords::{
    coords_in_building, coords_is_primitive, coords_is_special, coords_type, ApartmentVertex,
    SymplecticBasis,
};
pub use gsp::{gsp_act, odd_similitude_chamber, GspElement};
pub use lift::{
    apartment_chambers_at_origin, apartment_neighbor, check_lift, lift_gallery, CoordChamber,
    LiftCheck, XiChamber,
};
pub use local::{
    coset_count_sp, is_isotropic_lattice, primitive_representative, residual_form,
    sp_chambers_containing, sp_close_complex, sp_close_vertices, sp_gallery_multiplicity,
    sp_galleries_by_endpoint, sp_omega_formula, sp_panel_thickness, sp_r_formula,
    verify_sp_relation, MiddleSpace, SpChamber, SpClosePair, SpCloseVertices,
};
