//! Bundled example diagrams with rotations realizing the standard drawings:
//! the theta graph, the 3-prism with its two matching types, K4, and a bare
//! circle.

use crate::graph::MatchedDiagram;

pub const THETA_JSON: &str = include_str!("../fixtures/theta.json");
pub const P3_LADDER_JSON: &str = include_str!("../fixtures/p3-ladder.json");
pub const P3_C_JSON: &str = include_str!("../fixtures/p3-c.json");
pub const K4_JSON: &str = include_str!("../fixtures/k4.json");
pub const EMPTY_CIRCLE_JSON: &str = include_str!("../fixtures/empty-circle.json");

fn parse(json: &str) -> MatchedDiagram {
    MatchedDiagram::from_json_str(json).expect("bundled fixture parses")
}

/// Two vertices joined by three parallel edges; the middle one is the
/// matching.
pub fn theta() -> MatchedDiagram {
    parse(THETA_JSON)
}

/// The 3-prism with the ladder matching (the three rungs).
pub fn p3_ladder() -> MatchedDiagram {
    parse(P3_LADDER_JSON)
}

/// The 3-prism with the mixed matching: one rung plus the opposite outer and
/// inner edges.
pub fn p3_c() -> MatchedDiagram {
    parse(P3_C_JSON)
}

/// K4 drawn with one vertex inside the triangle of the other three.
pub fn k4() -> MatchedDiagram {
    parse(K4_JSON)
}

/// No vertices, one free circle.
pub fn empty_circle() -> MatchedDiagram {
    parse(EMPTY_CIRCLE_JSON)
}

/// All bundled graph fixtures (the vertex-free circle is excluded; most graph
/// operations expect vertices).
pub fn all() -> Vec<MatchedDiagram> {
    vec![theta(), p3_ladder(), p3_c(), k4()]
}
