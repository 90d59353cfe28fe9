pub mod fusion;
pub mod group;
pub mod setup;

pub use fusion::{amalgam_center, amalgam_fusion, compare_center, verify_fusion, CenterComparison, FusionComparison};
pub use group::{Amalgam, AmalgamLeaf, AmalgamWord, Letter, Syllable, VertexLetter};
pub use setup::{Leaf, RobinsonSetup, Variant};
