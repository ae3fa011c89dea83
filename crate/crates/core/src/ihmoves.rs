//! IH-move rewriting, smoothing surgeries, and the mechanical lemma checks
//! built on them.
//!
//! An IH-move re-plugs a matching edge into its four surrounding strands the
//! other way: with strands `a, b` at one endpoint and `c, d` at the other
//! (see [`MatchedDiagram::matching_strands`]), the rewritten edge joins a
//! vertex holding `{d, a}` to a vertex holding `{b, c}`. Smoothings delete
//! the edge and its endpoints entirely and splice the strands into each
//! other; strands that close up become free circles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bracket::bracket_state_sum;
use crate::factors::two_factor_count_formula;
use crate::graph::{EdgeId, EdgeRecord, HalfEdgeId, MatchedDiagram, VertexId, VertexRecord};
use crate::laurent::LaurentPoly;
use crate::Error;

/// Face shapes that guarantee a short complement cycle is within reach of a
/// bounded IH-move search, as (matching edges, free vertices) labels.
pub const REDUCIBLE_FACE_LABELS: [(u32, u32); 6] =
    [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 0)];

/// Replaces the I-plugging of matching edge `e` by the H-plugging. Vertex and
/// edge counts, matching size, validity and sphericity are preserved;
/// the complement cycle count changes by exactly one.
pub fn ih_move(d: &MatchedDiagram, e: EdgeId) -> Result<MatchedDiagram, Error> {
    d.ensure_valid()?;
    let s = d.matching_strands(e)?;
    let mut out = d.clone();
    for v in &mut out.vertices {
        if v.id == s.u {
            v.rotation = [s.edge_half_u, s.d, s.a];
        } else if v.id == s.v {
            v.rotation = [s.edge_half_v, s.b, s.c];
        }
    }
    Ok(out)
}

/// Deletes the matching edge and its endpoints, splicing `a` to `d` and `b`
/// to `c`: the open resolution of the I-configuration.
pub fn smooth_vertical(d: &MatchedDiagram, e: EdgeId) -> Result<MatchedDiagram, Error> {
    d.ensure_valid()?;
    let s = d.matching_strands(e)?;
    smooth(d, e, [[s.a, s.d], [s.b, s.c]])
}

/// Deletes the matching edge and its endpoints, splicing `a` to `b` and `c`
/// to `d`: the open resolution of the H-configuration.
pub fn smooth_horizontal(d: &MatchedDiagram, e: EdgeId) -> Result<MatchedDiagram, Error> {
    d.ensure_valid()?;
    let s = d.matching_strands(e)?;
    smooth(d, e, [[s.a, s.b], [s.c, s.d]])
}

fn smooth(
    d: &MatchedDiagram,
    e: EdgeId,
    joints: [[HalfEdgeId; 2]; 2],
) -> Result<MatchedDiagram, Error> {
    let idx = d.index()?;
    let s = d.matching_strands(e)?;
    let strand_set: BTreeSet<HalfEdgeId> = [s.a, s.b, s.c, s.d].into_iter().collect();
    let mut joint: BTreeMap<HalfEdgeId, HalfEdgeId> = BTreeMap::new();
    for [x, y] in joints {
        joint.insert(x, y);
        joint.insert(y, x);
    }

    let mut consumed: BTreeSet<HalfEdgeId> = BTreeSet::new();
    let mut removed: BTreeSet<EdgeId> = BTreeSet::new();
    removed.insert(e);
    let mut new_edges: Vec<EdgeRecord> = Vec::new();
    let mut extra_circles = 0u32;

    // Walks outward from a joint until it leaves the surgery site; returns
    // the free end, or None when the strand closes on itself.
    let extend = |start: HalfEdgeId,
                  consumed: &mut BTreeSet<HalfEdgeId>,
                  path_edges: &mut BTreeSet<EdgeId>|
     -> Option<HalfEdgeId> {
        let mut cur = start;
        loop {
            path_edges.insert(idx.h2e[&cur]);
            let far = d.partner(&idx, cur);
            if !strand_set.contains(&far) {
                return Some(far);
            }
            if consumed.contains(&far) {
                return None;
            }
            let hop = joint[&far];
            consumed.insert(far);
            consumed.insert(hop);
            cur = hop;
        }
    };

    for x0 in [s.a, s.b, s.c, s.d] {
        if consumed.contains(&x0) {
            continue;
        }
        let y0 = joint[&x0];
        consumed.insert(x0);
        consumed.insert(y0);
        let mut path_edges = BTreeSet::new();
        match extend(x0, &mut consumed, &mut path_edges) {
            None => {
                removed.extend(path_edges);
                extra_circles += 1;
            }
            Some(left) => {
                let right = extend(y0, &mut consumed, &mut path_edges)
                    .expect("an open strand has two free ends");
                let id = *path_edges.iter().min().unwrap();
                removed.extend(path_edges);
                new_edges.push(EdgeRecord { id, ends: [left, right], matching: false });
            }
        }
    }

    let vertices: Vec<VertexRecord> = d
        .vertices
        .iter()
        .filter(|v| v.id != s.u && v.id != s.v)
        .cloned()
        .collect();
    let mut edges: Vec<EdgeRecord> =
        d.edges.iter().filter(|rec| !removed.contains(&rec.id)).cloned().collect();
    edges.extend(new_edges);
    Ok(MatchedDiagram::new(
        d.name.clone(),
        d.free_circles + extra_circles,
        vertices,
        edges,
    ))
}

/// Outcome of checking the two IH-relations on one matching edge: the
/// polynomial identity `<d> - <ih d> = <vertical> - <horizontal>` and the
/// same identity for the 2-factor count.
#[derive(Clone, Debug)]
pub struct IhRelationReport {
    pub edge: EdgeId,
    pub poly_lhs: LaurentPoly,
    pub poly_rhs: LaurentPoly,
    pub count_lhs: BigInt,
    pub count_rhs: BigInt,
}

impl IhRelationReport {
    pub fn poly_holds(&self) -> bool {
        self.poly_lhs == self.poly_rhs
    }

    pub fn count_holds(&self) -> bool {
        self.count_lhs == self.count_rhs
    }

    pub fn passed(&self) -> bool {
        self.poly_holds() && self.count_holds()
    }
}

pub fn check_ih_relation(d: &MatchedDiagram, e: EdgeId) -> Result<IhRelationReport, Error> {
    let moved = ih_move(d, e)?;
    let vertical = smooth_vertical(d, e)?;
    let horizontal = smooth_horizontal(d, e)?;
    let poly_lhs = &bracket_state_sum(d)? - &bracket_state_sum(&moved)?;
    let poly_rhs = &bracket_state_sum(&vertical)? - &bracket_state_sum(&horizontal)?;
    let count_lhs = two_factor_count_formula(d)? - two_factor_count_formula(&moved)?;
    let count_rhs =
        two_factor_count_formula(&vertical)? - two_factor_count_formula(&horizontal)?;
    Ok(IhRelationReport { edge: e, poly_lhs, poly_rhs, count_lhs, count_rhs })
}

/// A bigon of two parallel non-matching edges whose endpoints hang on two
/// distinct matching edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bubble {
    pub vertices: [VertexId; 2],
    pub parallel: [EdgeId; 2],
    /// Matching edges at `vertices[0]` and `vertices[1]`.
    pub outer: [EdgeId; 2],
}

/// Finds every bubble: a bigon face bounded by two distinct non-matching
/// edges. Pairs whose outer matching edges coincide (the theta graph) are
/// excluded, since collapsing them would create a matching loop.
pub fn detect_bubbles(d: &MatchedDiagram) -> Result<Vec<Bubble>, Error> {
    d.ensure_valid()?;
    let idx = d.index()?;
    let matching_at = |v: VertexId| -> EdgeId {
        let rec = d.vertices.iter().find(|rec| rec.id == v).unwrap();
        rec.rotation
            .iter()
            .map(|h| idx.h2e[h])
            .find(|e| d.edge(*e).unwrap().matching)
            .expect("valid diagrams have one matching edge per vertex")
    };
    let mut bubbles = Vec::new();
    for walk in d.faces()? {
        if walk.len() != 2 {
            continue;
        }
        let (h1, h2) = (walk[0], walk[1]);
        let (e1, e2) = (idx.h2e[&h1], idx.h2e[&h2]);
        if e1 == e2 || d.edge(e1).unwrap().matching || d.edge(e2).unwrap().matching {
            continue;
        }
        let (v1, v2) = (idx.h2v[&h1], idx.h2v[&h2]);
        if v1 == v2 {
            continue;
        }
        let (x, y) = if v1 < v2 { (v1, v2) } else { (v2, v1) };
        let (mx, my) = (matching_at(x), matching_at(y));
        if mx == my {
            continue;
        }
        let mut parallel = [e1, e2];
        parallel.sort();
        bubbles.push(Bubble { vertices: [x, y], parallel, outer: [mx, my] });
    }
    Ok(bubbles)
}

/// Removes the bigon and fuses the two outer matching edges into one.
pub fn collapse_bubble(d: &MatchedDiagram, bubble: &Bubble) -> Result<MatchedDiagram, Error> {
    d.ensure_valid()?;
    let idx = d.index()?;
    let [x, y] = bubble.vertices;
    let [mx, my] = bubble.outer;
    if mx == my {
        return Err(Error::BubbleOuterEdgesCoincide { edge: mx });
    }
    let far_half = |m: EdgeId, at: VertexId| -> HalfEdgeId {
        let rec = d.edge(m).unwrap();
        if idx.h2v[&rec.ends[0]] == at {
            rec.ends[1]
        } else {
            rec.ends[0]
        }
    };
    let fused = EdgeRecord {
        id: mx.min(my),
        ends: [far_half(mx, x), far_half(my, y)],
        matching: true,
    };
    let vertices: Vec<VertexRecord> =
        d.vertices.iter().filter(|v| v.id != x && v.id != y).cloned().collect();
    let mut edges: Vec<EdgeRecord> = d
        .edges
        .iter()
        .filter(|e| {
            e.id != mx && e.id != my && e.id != bubble.parallel[0] && e.id != bubble.parallel[1]
        })
        .cloned()
        .collect();
    edges.push(fused);
    Ok(MatchedDiagram::new(d.name.clone(), d.free_circles, vertices, edges))
}

/// The bubble relation: collapsing halves both the bracket at 1 and the
/// 2-factor count.
#[derive(Clone, Debug)]
pub struct BubbleReport {
    pub bubble: Bubble,
    pub bracket_at_one: BigInt,
    pub collapsed_bracket_at_one: BigInt,
    pub count: BigInt,
    pub collapsed_count: BigInt,
}

impl BubbleReport {
    pub fn passed(&self) -> bool {
        self.bracket_at_one == BigInt::from(2) * &self.collapsed_bracket_at_one
            && self.count == BigInt::from(2) * &self.collapsed_count
    }
}

pub fn check_bubble(d: &MatchedDiagram, bubble: &Bubble) -> Result<BubbleReport, Error> {
    let collapsed = collapse_bubble(d, bubble)?;
    Ok(BubbleReport {
        bubble: bubble.clone(),
        bracket_at_one: bracket_state_sum(d)?.eval_at_one(),
        collapsed_bracket_at_one: bracket_state_sum(&collapsed)?.eval_at_one(),
        count: two_factor_count_formula(d)?,
        collapsed_count: two_factor_count_formula(&collapsed)?,
    })
}

/// Bridge vanishing: a bridged diagram has bracket 0 at `z = 1` and no
/// 2-factors. Every bridge must be a matching edge.
#[derive(Clone, Debug)]
pub struct BridgeReport {
    pub bridges: Vec<EdgeId>,
    pub all_bridges_matching: bool,
    pub bracket_at_one: Option<BigInt>,
    pub count: Option<BigInt>,
}

impl BridgeReport {
    pub fn triggered(&self) -> bool {
        !self.bridges.is_empty()
    }

    pub fn passed(&self) -> bool {
        if !self.triggered() {
            return true;
        }
        self.all_bridges_matching
            && self.bracket_at_one.as_ref().is_some_and(|v| v.is_zero())
            && self.count.as_ref().is_some_and(|v| v.is_zero())
    }
}

pub fn check_bridge(d: &MatchedDiagram) -> Result<BridgeReport, Error> {
    let bridges: Vec<EdgeId> = d.find_bridges()?.into_iter().collect();
    if bridges.is_empty() {
        return Ok(BridgeReport {
            bridges,
            all_bridges_matching: true,
            bracket_at_one: None,
            count: None,
        });
    }
    let all_matching = bridges.iter().all(|e| d.edge(*e).unwrap().matching);
    Ok(BridgeReport {
        bridges,
        all_bridges_matching: all_matching,
        bracket_at_one: Some(bracket_state_sum(d)?.eval_at_one()),
        count: Some(two_factor_count_formula(d)?),
    })
}

/// Triangle vanishing: a complement 3-cycle forces bracket 0 at `z = 1`.
#[derive(Clone, Debug)]
pub struct TriangleReport {
    pub triangle_cycles: usize,
    pub bracket_at_one: Option<BigInt>,
}

impl TriangleReport {
    pub fn triggered(&self) -> bool {
        self.triangle_cycles > 0
    }

    pub fn passed(&self) -> bool {
        !self.triggered() || self.bracket_at_one.as_ref().is_some_and(|v| v.is_zero())
    }
}

pub fn check_triangle(d: &MatchedDiagram) -> Result<TriangleReport, Error> {
    let cc = d.complement_cycles()?;
    let triangles = cc.cycles.iter().filter(|c| c.len() == 3).count();
    if triangles == 0 {
        return Ok(TriangleReport { triangle_cycles: 0, bracket_at_one: None });
    }
    Ok(TriangleReport {
        triangle_cycles: triangles,
        bracket_at_one: Some(bracket_state_sum(d)?.eval_at_one()),
    })
}

/// A face labeled with `m` = matching edges on its walk and `l` = vertices
/// on its walk whose matching edge lies elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceClass {
    pub walk: Vec<HalfEdgeId>,
    pub matching_edges: u32,
    pub free_vertices: u32,
}

pub fn classify_faces(d: &MatchedDiagram) -> Result<Vec<FaceClass>, Error> {
    d.ensure_valid()?;
    let idx = d.index()?;
    let matching: BTreeSet<EdgeId> = d.matching_edges().into_iter().collect();
    let mut out = Vec::new();
    for walk in d.faces()? {
        let walk_edges: BTreeSet<EdgeId> = walk.iter().map(|h| idx.h2e[h]).collect();
        let m = walk_edges.iter().filter(|e| matching.contains(e)).count() as u32;
        let walk_vertices: BTreeSet<VertexId> = walk.iter().map(|h| idx.h2v[h]).collect();
        let l = walk_vertices
            .iter()
            .filter(|v| {
                let rec = d.vertices.iter().find(|rec| rec.id == **v).unwrap();
                let own_matching = rec
                    .rotation
                    .iter()
                    .map(|h| idx.h2e[h])
                    .find(|e| matching.contains(e))
                    .expect("one matching edge per vertex");
                !walk_edges.contains(&own_matching)
            })
            .count() as u32;
        out.push(FaceClass { walk, matching_edges: m, free_vertices: l });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Ih,
    SmoothVertical,
    SmoothHorizontal,
    BubbleCollapse,
}

/// One replayable rewrite. For a bubble collapse, `edges` holds the two
/// parallel bigon edges that identify the bubble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub edges: Vec<EdgeId>,
}

pub fn apply_move(d: &MatchedDiagram, record: &MoveRecord) -> Result<MatchedDiagram, Error> {
    match record.kind {
        MoveKind::Ih => ih_move(d, record.edges[0]),
        MoveKind::SmoothVertical => smooth_vertical(d, record.edges[0]),
        MoveKind::SmoothHorizontal => smooth_horizontal(d, record.edges[0]),
        MoveKind::BubbleCollapse => {
            let mut key = record.edges.clone();
            key.sort();
            let bubble = detect_bubbles(d)?
                .into_iter()
                .find(|b| b.parallel.to_vec() == key)
                .ok_or_else(|| {
                    Error::Incoherent(format!("no bubble with parallel edges {key:?}"))
                })?;
            collapse_bubble(d, &bubble)
        }
    }
}

pub fn replay(d: &MatchedDiagram, moves: &[MoveRecord]) -> Result<MatchedDiagram, Error> {
    let mut current = d.clone();
    for record in moves {
        current = apply_move(&current, record)?;
    }
    Ok(current)
}

/// Rewrites a connected bridgeless diagram by IH-moves until some complement
/// cycle has length at most 3.
///
/// First merges complement cycles (an IH-move across two cycles always
/// merges them) down to a single cycle, then searches move sequences of
/// depth at most 3, preferring matching edges on faces whose `(m, l)` label
/// guarantees a reduction. Exhaustion is reported as an error: it would
/// falsify the face-configuration argument and must never happen.
pub fn reduce_to_short_cycle(
    d: &MatchedDiagram,
) -> Result<(MatchedDiagram, Vec<MoveRecord>), Error> {
    d.ensure_valid()?;
    if !d.is_connected() {
        return Err(Error::Disconnected { name: d.name.clone() });
    }
    if !d.find_bridges()?.is_empty() {
        return Err(Error::Bridged { name: d.name.clone() });
    }

    let mut current = d.clone();
    let mut moves: Vec<MoveRecord> = Vec::new();

    // Phase 1: merge down to a single complement cycle.
    loop {
        let cc = current.complement_cycles()?;
        if cc.cycles.len() <= 1 {
            break;
        }
        let mut cycle_of: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (i, cycle) in cc.cycles.iter().enumerate() {
            for (v, _) in cycle {
                cycle_of.insert(*v, i);
            }
        }
        let merge_edge = current
            .matching_edges()
            .into_iter()
            .find(|e| {
                let s = current.matching_strands(*e).expect("matching edge");
                cycle_of[&s.u] != cycle_of[&s.v]
            })
            .expect("a connected diagram with several complement cycles has a crossing matching edge");
        current = ih_move(&current, merge_edge)?;
        moves.push(MoveRecord { kind: MoveKind::Ih, edges: vec![merge_edge] });
    }

    // Phase 2: split the single long cycle until a short one appears.
    const MAX_DEPTH: usize = 3;
    fn candidates(d: &MatchedDiagram) -> Result<Vec<EdgeId>, Error> {
        let idx = d.index()?;
        let mut preferred: Vec<EdgeId> = Vec::new();
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        for face in classify_faces(d)? {
            let label = (face.matching_edges, face.free_vertices);
            if REDUCIBLE_FACE_LABELS.contains(&label) {
                for h in &face.walk {
                    let e = idx.h2e[h];
                    if d.edge(e).unwrap().matching && seen.insert(e) {
                        preferred.push(e);
                    }
                }
            }
        }
        for e in d.matching_edges() {
            if seen.insert(e) {
                preferred.push(e);
            }
        }
        Ok(preferred)
    }

    fn search(
        d: &MatchedDiagram,
        depth: usize,
        moves: &mut Vec<MoveRecord>,
    ) -> Result<Option<MatchedDiagram>, Error> {
        if d.complement_cycles()?.shortest().is_some_and(|len| len <= 3) {
            return Ok(Some(d.clone()));
        }
        if depth == 0 {
            return Ok(None);
        }
        for e in candidates(d)? {
            let next = ih_move(d, e)?;
            moves.push(MoveRecord { kind: MoveKind::Ih, edges: vec![e] });
            if let Some(result) = search(&next, depth - 1, moves)? {
                return Ok(Some(result));
            }
            moves.pop();
        }
        Ok(None)
    }

    match search(&current, MAX_DEPTH, &mut moves)? {
        Some(result) => Ok((result, moves)),
        None => Err(Error::SearchExhausted { name: d.name.clone() }),
    }
}

/// One closure of the triangle gadget: an exterior perfect pairing of the six
/// boundary strand endpoints, with the cube of the three interior resolution
/// sites evaluated at `z = 1`.
#[derive(Clone, Debug)]
pub struct ClosureCase {
    /// Pairs of boundary endpoints `0..6`, in the fixed order
    /// `[top-left, top-right, right-upper, right-lower, left-upper, left-lower]`.
    pub pairing: [[usize; 2]; 3],
    /// Circle counts per cross-count column, each sorted ascending.
    pub columns: Vec<Vec<u32>>,
    /// The alternating sum over all 8 states of `(-1)^crosses 2^circles`.
    pub sum: i64,
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub cases: Vec<ClosureCase>,
}

impl ClosureReport {
    pub fn all_zero(&self) -> bool {
        self.cases.iter().all(|c| c.sum == 0)
    }

    pub fn case_for(&self, pairing: [[usize; 2]; 3]) -> Option<&ClosureCase> {
        let key = normalize_pairing(pairing);
        self.cases.iter().find(|c| c.pairing == key)
    }
}

fn normalize_pairing(mut pairing: [[usize; 2]; 3]) -> [[usize; 2]; 3] {
    for pair in &mut pairing {
        pair.sort();
    }
    pairing.sort();
    pairing
}

/// Checks the triangle closure identity over every perfect pairing of the six
/// boundary endpoints (all 15, a superset of the planar ones): each
/// alternating sum must vanish.
///
/// The gadget models a complement 3-cycle whose three matching edges leave
/// the disk: resolving the matching edges all-open turns the triangle into
/// three arcs from the top vertex's endpoints to the side vertices'. Nodes
/// 0..6 are the boundary endpoints, 6..12 the triangle strand ends.
pub fn triangle_closure_identity() -> ClosureReport {
    // Triangle edges as fixed interior pairs, and per-site resolution links.
    // Site layout: top vertex owns boundary (0, 1) and strands (8, 6); the
    // right vertex (2, 3) and (7, 11); the left vertex (4, 5) and (9, 10).
    // Fixed strand pairs: 6-7 (top-right side), 8-9 (top-left side),
    // 10-11 (bottom side).
    const N: usize = 12;
    let fixed_interior: [[usize; 2]; 3] = [[6, 7], [8, 9], [10, 11]];
    let sites: [[[usize; 2]; 2]; 3] = [
        [[8, 0], [6, 1]], // open links for the top site: strand-boundary pairs
        [[7, 2], [11, 3]],
        [[9, 4], [10, 5]],
    ];

    let mut cases = Vec::new();
    for pairing in all_pairings(&[0, 1, 2, 3, 4, 5]) {
        let pairing: [[usize; 2]; 3] =
            [pairing[0], pairing[1], pairing[2]].map(|p| [p.0, p.1]);
        let mut fixed_link = [usize::MAX; N];
        for [x, y] in fixed_interior.iter().chain(pairing.iter()) {
            fixed_link[*x] = *y;
            fixed_link[*y] = *x;
        }
        let mut columns: Vec<Vec<u32>> = vec![Vec::new(); 4];
        let mut sum = 0i64;
        for state in 0u8..8 {
            let mut res_link = [usize::MAX; N];
            for (site, links) in sites.iter().enumerate() {
                let cross = state >> site & 1 == 1;
                let [[s1, b1], [s2, b2]] = *links;
                // The cross resolution swaps which boundary endpoint each
                // strand reaches.
                let (t1, t2) = if cross { (b2, b1) } else { (b1, b2) };
                res_link[s1] = t1;
                res_link[t1] = s1;
                res_link[s2] = t2;
                res_link[t2] = s2;
            }
            let mut visited = [false; N];
            let mut circles = 0u32;
            for start in 0..N {
                if visited[start] {
                    continue;
                }
                circles += 1;
                let mut node = start;
                loop {
                    visited[node] = true;
                    let hop = res_link[node];
                    visited[hop] = true;
                    node = fixed_link[hop];
                    if node == start {
                        break;
                    }
                }
            }
            let crosses = state.count_ones();
            columns[crosses as usize].push(circles);
            let term = 2i64.pow(circles);
            sum += if crosses % 2 == 0 { term } else { -term };
        }
        for column in &mut columns {
            column.sort_unstable();
        }
        cases.push(ClosureCase { pairing: normalize_pairing(pairing), columns, sum });
    }
    ClosureReport { cases }
}

fn all_pairings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let first = points[0];
    let mut out = Vec::new();
    for i in 1..points.len() {
        let partner = points[i];
        let rest: Vec<usize> =
            points[1..].iter().copied().filter(|p| *p != partner).collect();
        for mut sub in all_pairings(&rest) {
            sub.insert(0, (first, partner));
            out.push(sub);
        }
    }
    out
}
