//! Exact differential cohomology on finite cell complexes.
//!
//! The crate is layered: [`linalg`] does exact integer and rational linear
//! algebra (Smith normal form, mixed integral/rational systems); [`chain`]
//! builds cochain complexes, cones and their cohomology; [`cells`] models
//! spaces as cell complexes with prism and circle products; [`tot`] assembles
//! total complexes of (co)simplicial objects for descent and homotopification;
//! [`diffcoh`] implements differential cochains `(c, h, ω)` with the structure
//! maps and the hexagon; [`geom`] covers smooth connections, holonomy, Chern
//! character forms and lattice line bundles.

pub mod cells;
pub mod chain;
pub mod data;
pub mod diffcoh;
pub mod error;
pub mod geom;
pub mod io;
pub mod linalg;
pub mod tot;

pub use cells::{CellComplex, Cochain};
pub use chain::{Complex, FgAbGroup, Ring};
pub use diffcoh::{DiffModel, DifferentialCochain};
pub use error::{Error, Result};
pub use geom::{LatticeLineBundle, SmoothConnection};
