//! Finite groups as materialized element sets.

pub mod algo;
pub mod hom;
pub mod io;
pub mod perm;
pub mod table;

pub use hom::GroupHom;
pub use perm::{Perm, PermGroup};
pub use table::{Elem, FiniteGroupTable, Group, Subgroup};
