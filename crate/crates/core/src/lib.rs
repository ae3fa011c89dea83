//! 2-factor bracket polynomials of planar trivalent graphs with perfect
//! matchings.
//!
//! A matched diagram is a cubic multigraph embedded in the sphere (as a
//! rotation system) with a flagged perfect matching. Resolving every matching
//! edge in one of two ways yields a cube of 2^k states; each state is a
//! disjoint union of circles and contributes `(-z)^crosses (z + z^-1)^circles`
//! to the bracket polynomial. The crate computes that state sum exactly,
//! counts 2-factors and Tait colorings by independent brute-force oracles,
//! rewrites diagrams by IH-moves and smoothings, and bundles a seeded
//! generator plus a verification harness that cross-checks all of these
//! against each other on fixed and random instances.

pub mod bracket;
pub mod factors;
pub mod fixtures;
pub mod graph;
pub mod harness;
pub mod ihmoves;
pub mod laurent;

pub use graph::{
    ComplementCycles, EdgeId, EdgeRecord, HalfEdgeId, MatchedDiagram, ValidationReport,
    VertexId, VertexRecord, Violation,
};
pub use laurent::LaurentPoly;

/// Errors shared across the crate. Validation problems are reported, not
/// thrown; this type covers misuse and resource limits.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("bad JSON: {0}")]
    Json(String),
    #[error("incoherent diagram: {0}")]
    Incoherent(String),
    #[error("diagram {name} is invalid: {report}")]
    InvalidDiagram { name: String, report: String },
    #[error("no edge with id {edge}")]
    UnknownEdge { edge: EdgeId },
    #[error("edge {edge} is not a matching edge")]
    NotAMatchingEdge { edge: EdgeId },
    #[error("matching edge {edge} is a loop")]
    MatchingLoop { edge: EdgeId },
    #[error("{matching_edges} matching edges exceed the state-space limit of {limit}")]
    StateSpaceTooLarge { matching_edges: usize, limit: usize },
    #[error("{non_matching} non-matching edges exceed the enumeration limit of {limit}")]
    EnumerationTooLarge { non_matching: usize, limit: usize },
    #[error("more than {cap} perfect matchings; raise the cap to enumerate")]
    MatchingCapExceeded { cap: usize },
    #[error("diagram {name} is disconnected")]
    Disconnected { name: String },
    #[error("diagram {name} has a bridge; this operation needs a bridgeless diagram")]
    Bridged { name: String },
    #[error("edge {edge} must be a non-matching edge for this construction")]
    NeedNonMatchingEdge { edge: EdgeId },
    #[error("diagram {name} has free circles; this operation needs a plain graph")]
    FreeCirclesPresent { name: String },
    #[error("bubble outer matching edges coincide at edge {edge}; collapsing would create a matching loop")]
    BubbleOuterEdgesCoincide { edge: EdgeId },
    #[error("short-cycle search exhausted on {name}; this would falsify the face-configuration argument")]
    SearchExhausted { name: String },
    #[error("no perfect matching found for generated graph {name}; the generator should never produce this")]
    NoPerfectMatching { name: String },
    #[error("bad generator spec: {0}")]
    BadGenSpec(String),
}

impl Error {
    pub(crate) fn incoherent(msg: String) -> Self {
        Error::Incoherent(msg)
    }
}
