//! Hamiltonian cycle systems of odd order with a prescribed full
//! automorphism group.
//!
//! The crate builds cycle systems (1-rotational development, doubling, the
//! odd-order and binary-group pipelines) and computes their full
//! automorphism groups exactly, so every construction is checked rather than
//! trusted.

pub mod autgroup;
pub mod cli;
pub mod design;
pub mod doubling;
pub mod error;
pub mod groups;
pub mod par;
pub mod prescribe;
pub mod rotational;

pub use autgroup::{
    automorphism_group, brute_force_aut, classify, is_automorphism, Classification, Perm, PermGroup,
};
pub use design::{
    canonical_cycle, parse_system, serialize_system, validate, CycleSystem, HamCycle, Sign, Vertex,
};
pub use doubling::{check_compatible, double, DoublingInput};
pub use error::{Error, Result};
pub use groups::{
    direct_product, is_isomorphic, make_cyclic, make_quaternion8, parse_group_spec, Element,
    FiniteGroup,
};
pub use par::Strategy;
pub use prescribe::{
    construct_binary, construct_odd, hardcoded_rigid_hcs13, modified_starter, swap_edges,
};
pub use rotational::{develop, find_starter, verify_starter, SearchBudget, Starter};
