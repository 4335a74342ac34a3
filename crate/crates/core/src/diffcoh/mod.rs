//! Differential cohomology of cell complexes through the cochain model
//! `Ĉ^n = C^n(Z) ⊕ C^{n-1}(Q) ⊕ σ^{≥m} C^n(Q)`.

mod cochain;
pub mod cohomology;
mod hexagon;
mod homotopy;
mod model;
mod report;

pub use cochain::DifferentialCochain;
pub use cohomology::{ClassCoords, FlatCohomology, IntegralCohomology, RationalCohomology};
pub use model::DiffModel;
pub use hexagon::{hexagon_exactness, HexagonDiagram, HexagonNodes, HexagonReport};
pub use report::{Check, CheckKind};
pub use homotopy::{
    homotopy_difference, homotopy_formula_check, homotopy_formula_report, pullback_classification_check, reduce, s1_integrate,
    s1_integrate_report, ClassificationReport, SampledReport,
};
