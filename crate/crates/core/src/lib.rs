pub mod balancing;
pub mod cli;
pub mod combination;
pub mod error;
pub mod fan;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod render;
pub mod set;
pub mod vector;
pub mod weighted;

pub use balancing::{balancing_lhs, verify_all, BalancingRelation, BalancingReport};
pub use combination::FlatCombination;
pub use error::{Error, Result};
pub use fan::{in_cone, in_span, BergmanFan, Cone, ConeType, FlagOfFlats};
pub use matroid::{ExchangeCheck, Flat, GroundSet, Matroid};
pub use set::ElementSet;
pub use vector::RationalVector;
