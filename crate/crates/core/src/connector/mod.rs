//! Preconnectors between congruence pairs, internal categories and
//! groupoids on reflexive graphs, and Axiom ∗ instances.

mod axiom_star;
mod category;
mod preconnector;

pub use axiom_star::{
    check_axiom_star_instance, check_fiber_axiom_star_instance, dp_via_axiom_star, scan_fiber_axiom_star,
    scan_pointed_axiom_star, AxiomStarScan, StarQuotient,
};
pub use category::{
    find_category_structures, find_groupoid_structure, lift_discrete_fibration, CategoryStructure, CategorySummary,
    GraphMorphism, Groupoid, GroupoidSummary,
};
pub use preconnector::{
    centralize, check_connector, find_maltsev_preconnectors, find_preconnectors, ChainAlgebra, Connector,
    ConnectorReport, Preconnector, Verdict,
};
