pub mod axioms;
pub mod category;
pub mod functor;
pub mod io;
pub mod limits;
pub mod modular;
pub mod orbit;
pub mod system;

pub use axioms::AxiomReport;
pub use category::{FiniteCategory, MorId};
pub use orbit::OrbitCategory;
pub use system::{LinkingSystem, Realization, RestrictedAut, TransporterCategory};
pub use functor::{AbFunctor, CenterFunctor, CyclicBasis, FusionCenter};
pub use limits::{higher_limits, inverse_limit, AbelianInvariants, InverseLimit};
pub use io::LinkingFile;
