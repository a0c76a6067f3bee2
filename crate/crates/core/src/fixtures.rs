//! Graphs shipped with the crate and used by `verify`.

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

/// `(name, JSON)` for every bundled graph.
pub const FIXTURES: &[(&str, &str)] = &[
    ("cycle7", include_str!("../fixtures/cycle7.json")),
    ("er10_p04", include_str!("../fixtures/er10_p04.json")),
    ("fused_hexagons", include_str!("../fixtures/fused_hexagons.json")),
    ("hexagon_pentagon", include_str!("../fixtures/hexagon_pentagon.json")),
    ("hexagon_tail", include_str!("../fixtures/hexagon_tail.json")),
    ("hexagon_triangle", include_str!("../fixtures/hexagon_triangle.json")),
    ("molecule29", include_str!("../fixtures/molecule29.json")),
    ("path2", include_str!("../fixtures/path2.json")),
    ("triangle", include_str!("../fixtures/triangle.json")),
];

/// Graphs containing a 6-cycle.
pub const CYCLE6_FIXTURES: &[&str] = &["hexagon_tail", "fused_hexagons", "hexagon_triangle", "hexagon_pentagon"];

pub fn fixture(name: &str) -> Result<LabeledGraph> {
    let (_, text) = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::InvalidParameter(format!("no fixture named `{name}`")))?;
    LabeledGraph::from_json(text).map_err(|e| e.context(format!("fixture {name}")))
}
