//! Combinatorics of del Pezzo surfaces `X_r`: the Picard lattice, lines and
//! conic fibrations, the Weyl group `W(E_r)` acting on them, permutation
//! characters, and the sign vector of the wedge-kernel relation that underlies
//! the hyperlogarithm identity.

pub mod d5_table;
pub mod error;
pub mod incidence;
pub mod picard;
pub mod rep_theory;
pub mod wedge_kernel;
pub mod weyl;

pub use error::{Error, Result};
pub use incidence::{ConicFibration, Incidence, LineTable};
pub use picard::{DelPezzoLattice, DivisorClass};
pub use wedge_kernel::HlogCertificate;
pub use weyl::{WeylElement, WeylGroup};
