//! Group-theoretic engine for Picard groups of blocks with abelian defect.
//!
//! The crate works bottom-up: finite abelian p-groups ([`pgroup`]), their
//! automorphism groups ([`autgroup`]), inertial pairs and focal subgroups
//! ([`fusion`]), the `D ⋊ Out` pair calculus ([`dade`]), assembled Picard
//! groups with exactness checks ([`picard`]), and Brauer-tree combinatorics
//! ([`brauertree`]).

pub mod autgroup;
pub mod brauertree;
pub mod dade;
pub mod error;
pub mod fusion;
pub mod group;
pub mod identify;
pub mod pgroup;
pub mod picard;
pub mod schreier;
pub(crate) mod search;
pub mod snf;

pub use autgroup::{
    aut_order_formula, closure_group, enumerate_aut, make_automorphism, Automorphism,
};
pub use error::{Error, Result};
pub use group::{FiniteGroup, HomomorphismData, Subgroup};
pub use pgroup::{AbelianPGroup, GroupElement, SubgroupTable};
