//! Half-edge combinatorial maps of trivalent multigraphs with a flagged
//! perfect matching.
//!
//! A diagram stores, per vertex, the counterclockwise rotation of its three
//! incident half-edges, and, per edge, its two half-edge ends plus a matching
//! flag. The rotation system *is* the embedding; `validate` checks that it is
//! spherical via Euler's formula on traced faces. Vertex-free circles are
//! carried as a bare count (`free_circles`) since only their number ever
//! enters a computation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfEdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl fmt::Display for HalfEdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: VertexId,
    /// The three incident half-edges in counterclockwise order.
    pub rotation: [HalfEdgeId; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub ends: [HalfEdgeId; 2],
    pub matching: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedDiagram {
    pub name: String,
    #[serde(default)]
    pub free_circles: u32,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

/// One invariant violation found by [`MatchedDiagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertexId(VertexId),
    DuplicateEdgeId(EdgeId),
    HalfEdgeInMultipleRotations(HalfEdgeId),
    HalfEdgeInMultipleEdges(HalfEdgeId),
    HalfEdgeWithoutEdge(HalfEdgeId),
    HalfEdgeWithoutVertex(HalfEdgeId),
    NoMatchingHalfEdge(VertexId),
    MultipleMatchingHalfEdges(VertexId),
    MatchingLoop(EdgeId),
    EulerViolation {
        component_anchor: VertexId,
        vertices: usize,
        edges: usize,
        faces: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertexId(v) => write!(f, "duplicate vertex id {v}"),
            Violation::DuplicateEdgeId(e) => write!(f, "duplicate edge id {e}"),
            Violation::HalfEdgeInMultipleRotations(h) => {
                write!(f, "half-edge {h} appears in more than one rotation")
            }
            Violation::HalfEdgeInMultipleEdges(h) => {
                write!(f, "half-edge {h} appears in more than one edge")
            }
            Violation::HalfEdgeWithoutEdge(h) => {
                write!(f, "half-edge {h} appears in a rotation but in no edge")
            }
            Violation::HalfEdgeWithoutVertex(h) => {
                write!(f, "half-edge {h} appears in an edge but in no rotation")
            }
            Violation::NoMatchingHalfEdge(v) => {
                write!(f, "vertex {v} has no matching half-edge")
            }
            Violation::MultipleMatchingHalfEdges(v) => {
                write!(f, "vertex {v} has more than one matching half-edge")
            }
            Violation::MatchingLoop(e) => write!(f, "matching edge {e} is a loop"),
            Violation::EulerViolation { component_anchor, vertices, edges, faces } => write!(
                f,
                "component at vertex {component_anchor} is not spherical: V={vertices} E={edges} F={faces}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", lines.join("; "))
        }
    }
}

/// Cycles of the complement `G \ M`, each as a cyclic `(vertex, edge)` walk
/// through non-matching edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementCycles {
    pub cycles: Vec<Vec<(VertexId, EdgeId)>>,
    pub free_circles: u32,
}

impl ComplementCycles {
    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(|c| c.len()).collect()
    }

    pub fn has_odd_cycle(&self) -> bool {
        self.cycles.iter().any(|c| c.len() % 2 == 1)
    }

    pub fn shortest(&self) -> Option<usize> {
        self.cycles.iter().map(|c| c.len()).min()
    }
}

/// The four strands around a matching edge, in the orientation the resolution
/// and IH-move conventions are stated in: `a` is the rotation successor of the
/// edge's half-edge at `u`, `b` the successor of `a`; `c` and `d` likewise at
/// `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchingStrands {
    pub u: VertexId,
    pub v: VertexId,
    pub edge_half_u: HalfEdgeId,
    pub edge_half_v: HalfEdgeId,
    pub a: HalfEdgeId,
    pub b: HalfEdgeId,
    pub c: HalfEdgeId,
    pub d: HalfEdgeId,
}

/// Lookup tables derived from a structurally coherent diagram.
pub(crate) struct Index {
    pub h2v: BTreeMap<HalfEdgeId, VertexId>,
    pub h2e: BTreeMap<HalfEdgeId, EdgeId>,
    pub vertex_by_id: BTreeMap<VertexId, usize>,
    pub edge_by_id: BTreeMap<EdgeId, usize>,
}

impl MatchedDiagram {
    /// Builds a diagram, sorting vertices and edges by id for a canonical
    /// representation.
    pub fn new(
        name: impl Into<String>,
        free_circles: u32,
        mut vertices: Vec<VertexRecord>,
        mut edges: Vec<EdgeRecord>,
    ) -> Self {
        vertices.sort_by_key(|v| v.id);
        edges.sort_by_key(|e| e.id);
        MatchedDiagram { name: name.into(), free_circles, vertices, edges }
    }

    pub fn from_json_str(s: &str) -> Result<Self, Error> {
        let mut d: MatchedDiagram =
            serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        d.vertices.sort_by_key(|v| v.id);
        d.edges.sort_by_key(|e| e.id);
        Ok(d)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("diagram serializes");
        s.push('\n');
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&EdgeRecord> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// Matching edge ids in ascending order; this is the bit order used by
    /// resolution states.
    pub fn matching_edges(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> =
            self.edges.iter().filter(|e| e.matching).map(|e| e.id).collect();
        ids.sort();
        ids
    }

    pub fn non_matching_edges(&self) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> =
            self.edges.iter().filter(|e| !e.matching).map(|e| e.id).collect();
        ids.sort();
        ids
    }

    pub(crate) fn index(&self) -> Result<Index, Error> {
        let mut h2v = BTreeMap::new();
        let mut h2e = BTreeMap::new();
        let mut vertex_by_id = BTreeMap::new();
        let mut edge_by_id = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vertex_by_id.insert(v.id, i).is_some() {
                return Err(Error::incoherent(format!("duplicate vertex id {}", v.id)));
            }
            for h in v.rotation {
                if h2v.insert(h, v.id).is_some() {
                    return Err(Error::incoherent(format!(
                        "half-edge {h} in more than one rotation"
                    )));
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if edge_by_id.insert(e.id, i).is_some() {
                return Err(Error::incoherent(format!("duplicate edge id {}", e.id)));
            }
            for h in e.ends {
                if h2e.insert(h, e.id).is_some() {
                    return Err(Error::incoherent(format!("half-edge {h} in more than one edge")));
                }
            }
        }
        if h2v.len() != h2e.len() || h2v.keys().ne(h2e.keys()) {
            return Err(Error::incoherent("rotations and edge ends disagree".to_string()));
        }
        Ok(Index { h2v, h2e, vertex_by_id, edge_by_id })
    }

    /// Checks every structural invariant and returns the list of violations.
    /// Valid diagrams yield an empty report.
    pub fn validate(&self) -> ValidationReport {
        self.validate_inner(true)
    }

    /// Validation with the perfect-matching invariants skipped, for
    /// operations that ignore the matching flags (matching enumeration, Tait
    /// sums, graph generation).
    pub(crate) fn validate_graph_only(&self) -> ValidationReport {
        self.validate_inner(false)
    }

    fn validate_inner(&self, check_matching: bool) -> ValidationReport {
        let mut violations = Vec::new();

        let mut vertex_ids = BTreeSet::new();
        for v in &self.vertices {
            if !vertex_ids.insert(v.id) {
                violations.push(Violation::DuplicateVertexId(v.id));
            }
        }
        let mut edge_ids = BTreeSet::new();
        for e in &self.edges {
            if !edge_ids.insert(e.id) {
                violations.push(Violation::DuplicateEdgeId(e.id));
            }
        }

        let mut rotation_count: BTreeMap<HalfEdgeId, usize> = BTreeMap::new();
        for v in &self.vertices {
            for h in v.rotation {
                *rotation_count.entry(h).or_default() += 1;
            }
        }
        let mut end_count: BTreeMap<HalfEdgeId, usize> = BTreeMap::new();
        for e in &self.edges {
            for h in e.ends {
                *end_count.entry(h).or_default() += 1;
            }
        }
        for (h, n) in &rotation_count {
            if *n > 1 {
                violations.push(Violation::HalfEdgeInMultipleRotations(*h));
            }
            if !end_count.contains_key(h) {
                violations.push(Violation::HalfEdgeWithoutEdge(*h));
            }
        }
        for (h, n) in &end_count {
            if *n > 1 {
                violations.push(Violation::HalfEdgeInMultipleEdges(*h));
            }
            if !rotation_count.contains_key(h) {
                violations.push(Violation::HalfEdgeWithoutVertex(*h));
            }
        }

        // Matching and Euler invariants need coherent half-edge maps to mean
        // anything.
        if violations.is_empty() {
            let idx = match self.index() {
                Ok(idx) => idx,
                Err(_) => unreachable!("coherence was just checked"),
            };
            if check_matching {
                for e in &self.edges {
                    if e.matching && idx.h2v[&e.ends[0]] == idx.h2v[&e.ends[1]] {
                        violations.push(Violation::MatchingLoop(e.id));
                    }
                }
                for v in &self.vertices {
                    let m =
                        v.rotation.iter().filter(|h| self.is_matching_half(&idx, **h)).count();
                    match m {
                        0 => violations.push(Violation::NoMatchingHalfEdge(v.id)),
                        1 => {}
                        _ => violations.push(Violation::MultipleMatchingHalfEdges(v.id)),
                    }
                }
            }

            let faces = self.trace_faces(&idx);
            let components = self.vertex_components(&idx);
            for comp in &components {
                let anchor = *comp.iter().min().unwrap();
                let vcount = comp.len();
                let ecount = self
                    .edges
                    .iter()
                    .filter(|e| comp.contains(&idx.h2v[&e.ends[0]]))
                    .count();
                let fcount = faces
                    .iter()
                    .filter(|walk| comp.contains(&idx.h2v[&walk[0]]))
                    .count();
                if vcount + fcount != ecount + 2 {
                    violations.push(Violation::EulerViolation {
                        component_anchor: anchor,
                        vertices: vcount,
                        edges: ecount,
                        faces: fcount,
                    });
                }
            }
        }

        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub(crate) fn ensure_valid(&self) -> Result<(), Error> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidDiagram { name: self.name.clone(), report: report.to_string() })
        }
    }

    pub(crate) fn ensure_graph_valid(&self) -> Result<(), Error> {
        let report = self.validate_graph_only();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidDiagram { name: self.name.clone(), report: report.to_string() })
        }
    }

    /// Face walks without the full validity gate; the structural coherence
    /// needed for tracing is still checked.
    pub(crate) fn faces_unchecked(&self) -> Result<Vec<Vec<HalfEdgeId>>, Error> {
        let idx = self.index()?;
        Ok(self.trace_faces(&idx))
    }

    fn is_matching_half(&self, idx: &Index, h: HalfEdgeId) -> bool {
        let e = idx.h2e[&h];
        self.edges[idx.edge_by_id[&e]].matching
    }

    /// Rotation successor: the next half-edge counterclockwise at the same
    /// vertex.
    pub(crate) fn successor(&self, idx: &Index, h: HalfEdgeId) -> HalfEdgeId {
        let v = &self.vertices[idx.vertex_by_id[&idx.h2v[&h]]];
        let pos = v.rotation.iter().position(|x| *x == h).unwrap();
        v.rotation[(pos + 1) % 3]
    }

    /// Edge involution: the other end of `h`'s edge.
    pub(crate) fn partner(&self, idx: &Index, h: HalfEdgeId) -> HalfEdgeId {
        let e = &self.edges[idx.edge_by_id[&idx.h2e[&h]]];
        if e.ends[0] == h {
            e.ends[1]
        } else {
            e.ends[0]
        }
    }

    /// Face walks of the rotation system. Each walk steps from a half-edge to
    /// the rotation successor of its partner, which keeps a fixed side of the
    /// traversal; every half-edge lies on exactly one walk. Walks start at
    /// their smallest half-edge and are sorted by that id.
    pub fn faces(&self) -> Result<Vec<Vec<HalfEdgeId>>, Error> {
        self.ensure_valid()?;
        let idx = self.index()?;
        Ok(self.trace_faces(&idx))
    }

    fn trace_faces(&self, idx: &Index) -> Vec<Vec<HalfEdgeId>> {
        let mut seen: BTreeSet<HalfEdgeId> = BTreeSet::new();
        let mut faces = Vec::new();
        for h in idx.h2v.keys() {
            if seen.contains(h) {
                continue;
            }
            let mut walk = Vec::new();
            let mut cur = *h;
            loop {
                walk.push(cur);
                seen.insert(cur);
                cur = self.successor(idx, self.partner(idx, cur));
                if cur == *h {
                    break;
                }
            }
            faces.push(walk);
        }
        // Start position is already minimal: walks are discovered from the
        // smallest unseen half-edge, which therefore leads each walk.
        faces
    }

    fn vertex_components(&self, idx: &Index) -> Vec<BTreeSet<VertexId>> {
        let mut parent: BTreeMap<VertexId, VertexId> =
            self.vertices.iter().map(|v| (v.id, v.id)).collect();
        fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
            let p = parent[&v];
            if p == v {
                v
            } else {
                let root = find(parent, p);
                parent.insert(v, root);
                root
            }
        }
        for e in &self.edges {
            let a = find(&mut parent, idx.h2v[&e.ends[0]]);
            let b = find(&mut parent, idx.h2v[&e.ends[1]]);
            if a != b {
                parent.insert(a, b);
            }
        }
        let mut groups: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for v in self.vertices.iter().map(|v| v.id).collect::<Vec<_>>() {
            let root = find(&mut parent, v);
            groups.entry(root).or_default().insert(v);
        }
        groups.into_values().collect()
    }

    /// Splits the diagram into connected components, ordered by smallest
    /// vertex id. Free circles stay with the whole diagram, not with any
    /// component.
    pub fn connected_components(&self) -> Result<Vec<MatchedDiagram>, Error> {
        self.ensure_valid()?;
        let idx = self.index()?;
        let comps = self.vertex_components(&idx);
        let mut out = Vec::new();
        for (i, comp) in comps.iter().enumerate() {
            let vertices: Vec<VertexRecord> =
                self.vertices.iter().filter(|v| comp.contains(&v.id)).cloned().collect();
            let edges: Vec<EdgeRecord> = self
                .edges
                .iter()
                .filter(|e| comp.contains(&idx.h2v[&e.ends[0]]))
                .cloned()
                .collect();
            out.push(MatchedDiagram::new(
                format!("{}#c{}", self.name, i),
                0,
                vertices,
                edges,
            ));
        }
        Ok(out)
    }

    pub fn is_connected(&self) -> bool {
        match self.index() {
            Ok(idx) => self.vertex_components(&idx).len() <= 1,
            Err(_) => false,
        }
    }

    /// Reverses every rotation triple, i.e. reflects the embedding.
    pub fn mirror(&self) -> MatchedDiagram {
        let vertices = self
            .vertices
            .iter()
            .map(|v| VertexRecord {
                id: v.id,
                rotation: [v.rotation[2], v.rotation[1], v.rotation[0]],
            })
            .collect();
        MatchedDiagram {
            name: self.name.clone(),
            free_circles: self.free_circles,
            vertices,
            edges: self.edges.clone(),
        }
    }

    /// The cycles of `G \ M`. Each vertex lies on exactly one cycle because
    /// the matching is perfect. Cycles are ordered by smallest contained
    /// vertex and walked starting from that vertex along its smallest
    /// non-matching edge.
    pub fn complement_cycles(&self) -> Result<ComplementCycles, Error> {
        self.ensure_valid()?;
        let idx = self.index()?;
        let mut non_matching_at: BTreeMap<VertexId, Vec<HalfEdgeId>> = BTreeMap::new();
        for v in &self.vertices {
            let hs: Vec<HalfEdgeId> = v
                .rotation
                .iter()
                .copied()
                .filter(|h| !self.is_matching_half(&idx, *h))
                .collect();
            non_matching_at.insert(v.id, hs);
        }
        let mut visited: BTreeSet<VertexId> = BTreeSet::new();
        let mut cycles = Vec::new();
        for v0 in self.vertices.iter().map(|v| v.id) {
            if visited.contains(&v0) {
                continue;
            }
            let hs = &non_matching_at[&v0];
            let start = *hs
                .iter()
                .min_by_key(|h| (idx.h2e[h], **h))
                .expect("valid diagrams have two non-matching half-edges per vertex");
            let mut cycle = Vec::new();
            let mut out = start;
            loop {
                let v = idx.h2v[&out];
                visited.insert(v);
                cycle.push((v, idx.h2e[&out]));
                let arrive = self.partner(&idx, out);
                let next_v = idx.h2v[&arrive];
                let next_out = *non_matching_at[&next_v]
                    .iter()
                    .find(|h| **h != arrive)
                    .expect("two non-matching half-edges per vertex");
                if next_out == start {
                    break;
                }
                out = next_out;
            }
            cycles.push(cycle);
        }
        Ok(ComplementCycles { cycles, free_circles: self.free_circles })
    }

    /// Bridges of the underlying multigraph. In a valid diagram every bridge
    /// is a matching edge, because non-matching edges lie on complement
    /// cycles.
    pub fn find_bridges(&self) -> Result<BTreeSet<EdgeId>, Error> {
        self.ensure_valid()?;
        let idx = self.index()?;
        let order: Vec<VertexId> = self.vertices.iter().map(|v| v.id).collect();
        let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut bridges = BTreeSet::new();
        let mut timer = 0usize;

        // Iterative DFS; each stack frame remembers which incident half-edge
        // to try next and the edge used to enter the vertex.
        struct Frame {
            vertex: VertexId,
            via_edge: Option<EdgeId>,
            slot: usize,
        }
        for root in order {
            if disc.contains_key(&root) {
                continue;
            }
            let mut stack = vec![Frame { vertex: root, via_edge: None, slot: 0 }];
            disc.insert(root, timer);
            low.insert(root, timer);
            timer += 1;
            while let Some(frame) = stack.last_mut() {
                let v = frame.vertex;
                let rotation = self.vertices[idx.vertex_by_id[&v]].rotation;
                if frame.slot >= 3 {
                    let finished = stack.pop().unwrap();
                    if let (Some(parent), Some(edge)) =
                        (stack.last().map(|f| f.vertex), finished.via_edge)
                    {
                        let l = low[&v];
                        if l < low[&parent] {
                            low.insert(parent, l);
                        }
                        if l > disc[&parent] {
                            bridges.insert(edge);
                        }
                    }
                    continue;
                }
                let h = rotation[frame.slot];
                frame.slot += 1;
                let e = idx.h2e[&h];
                if Some(e) == frame.via_edge {
                    // Use the entering edge id, not the parent vertex, so
                    // parallel edges are still traversed.
                    continue;
                }
                let w = idx.h2v[&self.partner(&idx, h)];
                if w == v {
                    continue; // a loop is never a bridge
                }
                if let Some(&dw) = disc.get(&w) {
                    if dw < low[&v] {
                        low.insert(v, dw);
                    }
                } else {
                    disc.insert(w, timer);
                    low.insert(w, timer);
                    timer += 1;
                    stack.push(Frame { vertex: w, via_edge: Some(e), slot: 0 });
                }
            }
        }
        Ok(bridges)
    }

    /// The `(a, b, c, d)` strand context around a matching edge; the
    /// normative orientation for resolutions, smoothings and IH-moves.
    pub fn matching_strands(&self, e: EdgeId) -> Result<MatchingStrands, Error> {
        let idx = self.index()?;
        let pos = *idx.edge_by_id.get(&e).ok_or(Error::UnknownEdge { edge: e })?;
        let rec = &self.edges[pos];
        if !rec.matching {
            return Err(Error::NotAMatchingEdge { edge: e });
        }
        let (eu, ev) = (rec.ends[0], rec.ends[1]);
        let (u, v) = (idx.h2v[&eu], idx.h2v[&ev]);
        if u == v {
            return Err(Error::MatchingLoop { edge: e });
        }
        let a = self.successor(&idx, eu);
        let b = self.successor(&idx, a);
        let c = self.successor(&idx, ev);
        let d = self.successor(&idx, c);
        Ok(MatchingStrands { u, v, edge_half_u: eu, edge_half_v: ev, a, b, c, d })
    }

    pub(crate) fn max_ids(&self) -> (u32, u32, u32) {
        let v = self.vertices.iter().map(|v| v.id.0).max().map_or(0, |m| m + 1);
        let e = self.edges.iter().map(|e| e.id.0).max().map_or(0, |m| m + 1);
        let h = self
            .vertices
            .iter()
            .flat_map(|v| v.rotation.iter().map(|h| h.0))
            .max()
            .map_or(0, |m| m + 1);
        (v, e, h)
    }

    /// Shifts every id by the given offsets; used to make two diagrams
    /// disjoint before combining them.
    pub fn shift_ids(&self, dv: u32, de: u32, dh: u32) -> MatchedDiagram {
        let vertices = self
            .vertices
            .iter()
            .map(|v| VertexRecord {
                id: VertexId(v.id.0 + dv),
                rotation: v.rotation.map(|h| HalfEdgeId(h.0 + dh)),
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| EdgeRecord {
                id: EdgeId(e.id.0 + de),
                ends: e.ends.map(|h| HalfEdgeId(h.0 + dh)),
                matching: e.matching,
            })
            .collect();
        MatchedDiagram {
            name: self.name.clone(),
            free_circles: self.free_circles,
            vertices,
            edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_validate_clean() {
        for d in fixtures::all() {
            let report = d.validate();
            assert!(report.is_valid(), "{}: {report}", d.name);
        }
    }

    #[test]
    fn theta_without_matching_flag_reports_vertices() {
        let mut d = fixtures::theta();
        d.edges[0].matching = false;
        let report = d.validate();
        let messages: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        assert!(messages.contains(&"vertex 0 has no matching half-edge".to_string()));
    }

    #[test]
    fn toroidal_k4_rotation_fails_euler() {
        // Identical cyclic neighbor order at every vertex embeds K4 on the
        // torus: 2 faces instead of 4.
        let d = MatchedDiagram::new(
            "k4-toroidal",
            0,
            vec![
                VertexRecord { id: VertexId(0), rotation: [0, 2, 4].map(HalfEdgeId) },
                VertexRecord { id: VertexId(1), rotation: [1, 6, 11].map(HalfEdgeId) },
                VertexRecord { id: VertexId(2), rotation: [3, 7, 8].map(HalfEdgeId) },
                VertexRecord { id: VertexId(3), rotation: [5, 10, 9].map(HalfEdgeId) },
            ],
            vec![
                EdgeRecord { id: EdgeId(0), ends: [0, 1].map(HalfEdgeId), matching: true },
                EdgeRecord { id: EdgeId(1), ends: [2, 3].map(HalfEdgeId), matching: false },
                EdgeRecord { id: EdgeId(2), ends: [4, 5].map(HalfEdgeId), matching: false },
                EdgeRecord { id: EdgeId(3), ends: [6, 7].map(HalfEdgeId), matching: false },
                EdgeRecord { id: EdgeId(4), ends: [8, 9].map(HalfEdgeId), matching: true },
                EdgeRecord { id: EdgeId(5), ends: [10, 11].map(HalfEdgeId), matching: false },
            ],
        );
        let report = d.validate();
        assert!(
            report
                .violations
                .iter()
                .any(|v| matches!(v, Violation::EulerViolation { faces: 2, .. })),
            "expected a torus to be rejected, got: {report}"
        );
    }

    #[test]
    fn face_counts_match_euler_on_fixtures() {
        for (d, expected) in [
            (fixtures::theta(), 3),
            (fixtures::p3_ladder(), 5),
            (fixtures::p3_c(), 5),
            (fixtures::k4(), 4),
        ] {
            let faces = d.faces().unwrap();
            assert_eq!(faces.len(), expected, "{}", d.name);
            let half_edges: usize = faces.iter().map(|w| w.len()).sum();
            assert_eq!(half_edges, 2 * d.edge_count(), "{}", d.name);
        }
    }

    #[test]
    fn complement_cycles_of_fixtures() {
        let two_triangles = fixtures::p3_ladder().complement_cycles().unwrap();
        assert_eq!(two_triangles.lengths(), vec![3, 3]);

        // The remaining perfect matching of the prism leaves one 6-cycle; the
        // lengths must sum to the six non-matching edges.
        let hexagon = fixtures::p3_c().complement_cycles().unwrap();
        assert_eq!(hexagon.lengths().iter().sum::<usize>(), 6);
        assert_eq!(hexagon.lengths(), vec![6]);

        let theta = fixtures::theta().complement_cycles().unwrap();
        assert_eq!(theta.lengths(), vec![2]);

        let k4 = fixtures::k4().complement_cycles().unwrap();
        assert_eq!(k4.lengths(), vec![4]);
    }

    #[test]
    fn complement_cycles_cover_each_vertex_once() {
        for d in fixtures::all() {
            let cc = d.complement_cycles().unwrap();
            let mut seen = BTreeSet::new();
            for cycle in &cc.cycles {
                for (v, _) in cycle {
                    assert!(seen.insert(*v), "{}: vertex {v} on two cycles", d.name);
                }
            }
            assert_eq!(seen.len(), d.vertex_count(), "{}", d.name);
            let total: usize = cc.lengths().iter().sum();
            assert_eq!(total, d.edge_count() - d.matching_edges().len(), "{}", d.name);
        }
    }

    #[test]
    fn fixtures_are_bridgeless() {
        for d in fixtures::all() {
            assert!(d.find_bridges().unwrap().is_empty(), "{}", d.name);
        }
    }

    #[test]
    fn mirror_is_an_involution() {
        for d in fixtures::all() {
            assert!(d.mirror().is_valid(), "{}", d.name);
            assert_eq!(d.mirror().mirror(), d, "{}", d.name);
            assert_eq!(d.mirror().faces().unwrap().len(), d.faces().unwrap().len());
        }
    }

    #[test]
    fn components_partition_the_diagram() {
        let theta = fixtures::theta();
        let other = theta.shift_ids(10, 10, 10);
        let mut vertices = theta.vertices.clone();
        vertices.extend(other.vertices.clone());
        let mut edges = theta.edges.clone();
        edges.extend(other.edges.clone());
        let both = MatchedDiagram::new("theta-pair", 0, vertices, edges);
        assert!(both.is_valid());
        let comps = both.connected_components().unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vertex_count() + comps[1].vertex_count(), 4);
        assert!(!both.is_connected());
        assert!(theta.is_connected());
    }

    #[test]
    fn json_round_trip() {
        for d in fixtures::all() {
            let text = d.to_json_string();
            let back = MatchedDiagram::from_json_str(&text).unwrap();
            assert_eq!(back, d);
        }
    }
}
