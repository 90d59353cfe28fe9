pub mod amalgam_auto;
pub mod equivalence;
pub mod itworks;
pub mod split;

pub use equivalence::{conjugation, enumerate_aut_typ, extend, fusion_preserving_autos, upsilon, Equivalence, OutTyp};
pub use amalgam_auto::{differ_by_hub_conjugation, gamma, omega, AmalgamAutomorphism, GammaResult};
pub use itworks::{itworks_check, itworks_report, only2_applies};
pub use split::{exact_sequence_report, multiplicativity, out_order, verify_split};
