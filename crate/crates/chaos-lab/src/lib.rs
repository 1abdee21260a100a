//! Construction and budgeted verification of chaotic group actions.
//!
//! The library builds exact models of several classical systems — the full
//! N-shift on bi-infinite symbol sequences, Anosov torus automorphisms,
//! toral linked twist maps and their pillow/disk quotients, affine actions
//! on ℚⁿ — together with the machinery of direct products: product metrics
//! with weights `1/2^i`, coordinatewise group actions, and the constructive
//! content of the product theorems (witness assembly, periodic-point
//! products, sensitivity-constant lifting).
//!
//! Everything numeric is exact rational arithmetic or a certified interval;
//! every search is budgeted, seeded and re-checkable, and reports never
//! claim more than their certificates show.

pub mod config;
pub mod dist;
pub mod error;
pub mod group_action;
pub mod lab;
pub mod metric_product;
pub mod rat;
pub mod report;
pub mod runner;
pub mod symbolic_shift;
pub mod textform;
pub mod torus_dynamics;

pub use dist::ExactDist;
pub use error::{Error, Result};
pub use group_action::{GroupWord, Point, System};
pub use metric_product::ProductPoint;
pub use rat::Rat;
pub use report::{Status, WitnessReport};
pub use symbolic_shift::BiSeq;
pub use torus_dynamics::{AnosovMatrix, PillowPoint, TorusPoint};
