//! Propositional configuration logic for component-based systems.

pub mod architectures;
pub mod buchi;
pub mod component;
pub mod error;
pub mod expr;
pub mod pcl;
pub mod pil;
pub mod port;
pub mod reconfig;
pub mod satset;
pub mod textio;
pub mod universe;

pub use architectures::{generate, Architecture, ArchitectureSpec, Style};
pub use buchi::{build_partial_trust_automaton, build_trust_automaton, BuchiAutomaton, Guard, Lasso, SymbolSet};
pub use component::{instantiate, ComponentType, Lts, System};
pub use error::{Error, Result};
pub use expr::{PclExpr, PilExpr};
pub use pcl::{pcl_sat, pcl_sat_with, Pcl, SatOptions};
pub use pil::{characteristic_monomial, pil_sat, Pil};
pub use port::{Configuration, Interaction, Port, PortId, PortUniverse};
pub use reconfig::{
    config_of, correct, dra_equivalent, implementation_from_assignments, is_partially_trustworthy, is_trustworthy,
    Dra, DraEquivalence, Implementation, PartialVerdict, TrustVerdict,
};
pub use satset::{
    brute_force_sat_set, dominating_set, equivalent, full_normal_form, full_normal_form_over, sat_set,
    satisfiable, Decision, FullNormalForm, SatSet,
};
pub use universe::{InteractionUniverse, DEFAULT_CAP};
