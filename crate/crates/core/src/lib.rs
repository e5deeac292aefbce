//! Symmetric Grothendieck-Witt and Witt rings of the finite local rings
//! `Z/2^n` and `F2[x]/(x^n)`, together with brute-force congruence oracles
//! used to cross-check every step of the computation.

pub mod error;
pub mod oracle;
pub mod par;
pub mod presentation;
pub mod ring;
pub mod smith;
pub mod square_classes;

pub use error::{GwError, Result};
pub use par::Execution;
pub use presentation::{gw_group, witt_group, AbelianGroupInfo, EnumerationOptions, GwElement, GwRing, Presentation};
pub use ring::{Family, RingElement, RingSpec};
pub use square_classes::{compute_square_classes, ClassProjection, SquareClassGroup};
