//! Bundled example complexes.

use crate::cells::CellComplex;
use crate::error::{Error, Result};
use crate::io::cell_complex_from_json;

/// Names of the bundled complexes.
pub const COMPLEXES: [&str; 4] = ["circle3", "octahedron", "csaszar_torus", "rp2_6"];

/// Raw JSON text of a bundled file.
pub fn raw(name: &str) -> Option<&'static str> {
    Some(match name {
        "circle3" => include_str!("../data/circle3.json"),
        "octahedron" => include_str!("../data/octahedron.json"),
        "csaszar_torus" => include_str!("../data/csaszar_torus.json"),
        "rp2_6" => include_str!("../data/rp2_6.json"),
        _ => return None,
    })
}

/// Names of the bundled connections and loops.
pub const GEOMETRY: [&str; 8] = [
    "constant_curvature",
    "constant_curvature_path",
    "circle_rotation",
    "circle_rotation_loop",
    "circle_r03",
    "circle_r05",
    "circle_r08",
    "torus_path",
];

/// Raw JSON text of a bundled connection or loop.
pub fn raw_geometry(name: &str) -> Option<&'static str> {
    Some(match name {
        "constant_curvature" => include_str!("../data/geometry/constant_curvature.json"),
        "constant_curvature_path" => include_str!("../data/geometry/constant_curvature_path.json"),
        "circle_rotation" => include_str!("../data/geometry/circle_rotation.json"),
        "circle_rotation_loop" => include_str!("../data/geometry/circle_rotation_loop.json"),
        "circle_r03" => include_str!("../data/geometry/circle_r03.json"),
        "circle_r05" => include_str!("../data/geometry/circle_r05.json"),
        "circle_r08" => include_str!("../data/geometry/circle_r08.json"),
        "torus_path" => include_str!("../data/geometry/torus_path.json"),
        _ => return None,
    })
}

/// Parsed bundled connection or loop file.
pub fn geometry(name: &str) -> Result<serde_json::Value> {
    let text = raw_geometry(name).ok_or_else(|| Error::Parse(format!("no bundled geometry file named `{name}`")))?;
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn complex(name: &str) -> Result<CellComplex> {
    let text = raw(name).ok_or_else(|| Error::Parse(format!("no bundled complex named `{name}`")))?;
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    cell_complex_from_json(&v)
}
