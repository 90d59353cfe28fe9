//! Fusion systems over finite `p`-groups.

pub mod analysis;
pub mod io;
pub mod lattice;
pub mod saturation;
pub mod system;

pub use analysis::{AutData, ClassInfo, NormalizerSystem};
pub use lattice::SubgroupLattice;
pub use saturation::SaturationReport;
pub use system::{FusionSystem, Map, Provenance};
