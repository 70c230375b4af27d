//! Two-stack sortable permutations, fighting fish, and the size-preserving
//! bijection between them built from matching recursive decompositions.
//!
//! * [`perm`]: sequences, stack sorting, pattern tests and statistics.
//! * [`decomp`]: the decomposition of a permutation at its maximum and the
//!   two constructions that invert it.
//! * [`fish`]: fighting fish as glued cell complexes.
//! * [`construct`]: the fish-side constructions and their inverse.
//! * [`bijection`]: the map between the two families.
//! * [`enumeration`], [`series`]: counting, generating functions, and the
//!   exhaustive cross-checks.

pub mod bijection;
pub mod construct;
pub mod decomp;
pub mod enumeration;
pub mod error;
pub mod fish;
pub mod json;
pub mod perm;
pub mod series;

pub use bijection::{check_transfer, phi, phi_inverse, TransferReport};
pub use construct::{c1_bullet, c2_bullet, fish_of_tree, tree_of_fish, waspwaist_decompose};
pub use decomp::{DecompKind, DecompTree};
pub use error::{Error, Result};
pub use fish::{Defect, Fish, FishStats, Slot};
pub use perm::{IntSequence, Permutation, StatVector};
pub use series::TruncatedSeries;
