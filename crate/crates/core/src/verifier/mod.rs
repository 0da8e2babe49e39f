//! Realizability checks for machines and gates: (anti)linear and hybrid
//! extension of basis rules, comparison with ideal outputs, inner-product
//! audits and witness search.

mod check;
mod machine;
mod search;
mod target;

pub use check::{
    check_basis, check_cnot_universal, check_machine, check_universal_gate, gate_violation,
    machine_deviation, machine_deviation_with, random_candidate_search, AncillaMode, CandidateSearch,
    Verdict,
};
pub use machine::{extend, extend_antilinear, extend_hybrid, extend_linear, Extension, MachineSpec};
pub use search::{
    audit_pair_slow, axis_states, bloch_states, equatorial_grid, polar_grid, witness_search,
    witness_search_in, StateSet, Witness,
};
pub use target::{
    audit_inner_product, audit_unequal, audit_unequal_raw, ideal_output, target_rules,
    ConsistencyCondition, TargetKind, TargetTransform,
};
