//! Exact-arithmetic workbench for the Δ-colored 2-operad `seq`.
//!
//! The crate builds the operad of configurations on 2-disks, its brace
//! complex `Breq`, the normalised quotient `Nor(Breq)`, the whiskering map
//! into the condensation `|seq|`, and the twisted tensor product word model
//! of interval categories. Every finite claim about these objects is checked
//! by exact homology computation over the rationals.

pub mod chain;
pub mod condensation;
pub mod error;
pub mod homology;
pub mod scalar;
pub mod seq;
pub mod shapes;
pub mod twisted;
pub mod verify;
pub mod whiskering;

pub use chain::Chain;
pub use error::{Error, Result};
pub use seq::{Config, Token};
pub use shapes::{Ball, Disk2, Tree2, TreeMap2};
