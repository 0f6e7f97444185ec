//! Exterior splashes of order-q-subplanes of PG(2,q³) in the Bruck-Bose
//! representation in PG(6,q): construction and exhaustive verification.

pub mod bruckbose;
pub mod covers;
pub mod error;
pub mod gf;
pub mod pg;
pub mod subplane;
pub mod verify;

pub use bruckbose::{BbContext, Label, TwistedCubic};
pub use covers::{Cover, Family, ReplacementSpread, Selector, SublineClass};
pub use error::{Error, Result};
pub use gf::{Field, FieldTower, Fq, Fq3};
pub use pg::{Homography, Param, PgPoint, Regulus, Subspace};
pub use subplane::{NineQuadrics, Splash, SubplaneConfig};
pub use verify::{Suite, SuiteConfig, VerificationReport};
