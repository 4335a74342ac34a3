//! Bundle geometry. Connections are matrices of symbolic expressions over a
//! coordinate box; curvature and Chern character forms are derived exactly,
//! while holonomy and transgression are computed in double precision with
//! step-doubling checks. Lattice line bundles bridge into the exact
//! differential cochain model.

pub mod chart;
pub mod chern;
pub mod connection;
pub mod expr;
pub mod holonomy;
pub mod lattice;

pub use chart::{compare_endpoints, cycle_map_homotopy_check, CycleMapReport, EndpointComparison, SurfaceChart};
pub use chern::{chern_character_form, closedness_check, transgress_ch, BGradedForm, ClosednessReport, Transgression, TransgressionReport};
pub use connection::{validate_curvature, CExpr, CurvatureValidation, ExprMatrix, MatrixForm, SmoothConnection};
pub use expr::{parse_expr, Expr};
pub use holonomy::{bch_zero, holonomy, holonomy_report, transport, HolonomyReport, Loop, DEFAULT_STEPS};
pub use lattice::{cocycle_with_periods, fundamental_cycle, vertex_path_chain, CsCheck, LatticeLineBundle, LatticeSummary};
