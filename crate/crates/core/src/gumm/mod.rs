//! The Shifting Lemma, modularity, the Cube Lemma and the pointed
//! conditions over punctual relations.

mod pointed;
mod shifting;

pub use pointed::{
    check_cokernel_property, check_hex, check_hyperextensible_instance, check_hypo_terms,
    check_hypoextensible_instance, check_punctually_cm_instance, enumerate_punctual_relations,
    scan_punctual, PunctualScan, PunctualSpan,
};
pub use shifting::{
    check_cube_all, check_cube_lemma, check_lattice_modular, check_shifting_all,
    check_shifting_triple, modularity_over, shifting_over, CubeReport, ModularityReport,
    ShiftingReport, ShiftingWitness,
};
