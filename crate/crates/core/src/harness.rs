//! Seeded generation of matched planar cubic graphs and the verification
//! suite that cross-checks every identity on an instance.
//!
//! Generation grows the theta graph by face expansions: subdivide two edge
//! sides of one face and join the new vertices through that face. Each
//! expansion adds two vertices and three edges and preserves both cubicity
//! and sphericity; starting 2-edge-connected it also never creates a bridge.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bracket::{bracket_factored, bracket_state_sum};
use crate::factors::{
    enumerate_perfect_matchings, tait_colorings_count, tait_polynomial,
    two_factor_count_formula, two_factor_enumerate_with_limit, with_matching, PerfectMatching,
    DEFAULT_ENUMERATION_LIMIT,
};
use crate::graph::{EdgeId, EdgeRecord, HalfEdgeId, MatchedDiagram, VertexId, VertexRecord};
use crate::ihmoves::{
    check_bridge, check_bubble, check_ih_relation, check_triangle, detect_bubbles,
    reduce_to_short_cycle, replay,
};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchingPolicy {
    /// Install one uniformly chosen perfect matching.
    Random,
    /// Verification iterates every perfect matching of the graph.
    All,
}

#[derive(Clone, Debug)]
pub struct GenSpec {
    /// Target vertex count; even and at least 2.
    pub vertices: u32,
    pub seed: u64,
    pub policy: MatchingPolicy,
}

impl GenSpec {
    pub fn new(vertices: u32, seed: u64) -> Self {
        GenSpec { vertices, seed, policy: MatchingPolicy::Random }
    }
}

/// Splits the edge carrying `side` at a new vertex. The new vertex's stub
/// half-edge points into the face on that side of the edge, so a later edge
/// through that face keeps the embedding spherical. Returns the diagram and
/// the stub.
fn subdivide_side(d: &MatchedDiagram, side: HalfEdgeId) -> (MatchedDiagram, HalfEdgeId) {
    let (nv, ne, nh) = d.max_ids();
    let mut vertices = d.vertices.clone();
    let mut edges = d.edges.clone();
    let pos = edges.iter().position(|e| e.ends.contains(&side)).expect("side exists");
    let matching = edges[pos].matching;
    let far =
        if edges[pos].ends[0] == side { edges[pos].ends[1] } else { edges[pos].ends[0] };
    let toward_far = HalfEdgeId(nh);
    let toward_near = HalfEdgeId(nh + 1);
    let stub = HalfEdgeId(nh + 2);
    edges[pos].ends = [side, toward_near];
    edges.push(EdgeRecord { id: EdgeId(ne), ends: [toward_far, far], matching });
    vertices.push(VertexRecord {
        id: VertexId(nv),
        rotation: [toward_far, toward_near, stub],
    });
    (
        MatchedDiagram::new(d.name.clone(), d.free_circles, vertices, edges),
        stub,
    )
}

/// One face expansion: subdivide the edges on two sides of a common face and
/// join the new vertices by an edge through that face.
fn expand_face(
    d: &MatchedDiagram,
    side1: HalfEdgeId,
    side2: HalfEdgeId,
) -> Result<MatchedDiagram, Error> {
    let (d, stub1) = subdivide_side(d, side1);
    let (d, stub2) = subdivide_side(&d, side2);
    let (_, ne, _) = d.max_ids();
    let mut edges = d.edges.clone();
    edges.push(EdgeRecord { id: EdgeId(ne), ends: [stub1, stub2], matching: false });
    Ok(MatchedDiagram::new(d.name, d.free_circles, d.vertices, edges))
}

/// Deterministic seeded generation. Starts from the theta rotation system,
/// expands to the target size, and installs a perfect matching chosen
/// uniformly among all of them.
pub fn generate(spec: &GenSpec) -> Result<MatchedDiagram, Error> {
    if spec.vertices < 2 || spec.vertices % 2 != 0 {
        return Err(Error::BadGenSpec(format!(
            "vertex count must be even and at least 2, got {}",
            spec.vertices
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut d = crate::fixtures::theta();
    for e in &mut d.edges {
        e.matching = false;
    }
    d.name = format!("gen-n{}-s{}", spec.vertices, spec.seed);

    while (d.vertex_count() as u32) < spec.vertices {
        let faces = d.faces_unchecked()?;
        let idx = d.index()?;
        loop {
            let walk = &faces[rng.gen_range(0..faces.len())];
            let mut pairs = Vec::new();
            for i in 0..walk.len() {
                for j in i + 1..walk.len() {
                    if idx.h2e[&walk[i]] != idx.h2e[&walk[j]] {
                        pairs.push((walk[i], walk[j]));
                    }
                }
            }
            if pairs.is_empty() {
                continue;
            }
            let (s1, s2) = pairs[rng.gen_range(0..pairs.len())];
            d = expand_face(&d, s1, s2)?;
            break;
        }
    }

    let matchings = enumerate_perfect_matchings(&d)?;
    if matchings.is_empty() {
        return Err(Error::NoPerfectMatching { name: d.name.clone() });
    }
    let pick = rng.gen_range(0..matchings.len());
    Ok(with_matching(&d, &matchings[pick]))
}

/// The default corpus shape: `count` instances cycling through the even
/// sizes in `[min_size, max_size]`, seeded `seed0, seed0+1, ...`.
pub fn corpus(
    count: usize,
    min_size: u32,
    max_size: u32,
    seed0: u64,
) -> Result<Vec<MatchedDiagram>, Error> {
    if min_size % 2 != 0 || max_size < min_size {
        return Err(Error::BadGenSpec(format!(
            "need an even min size and min <= max, got {min_size}..{max_size}"
        )));
    }
    let steps = (max_size - min_size) / 2 + 1;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let vertices = min_size + 2 * (i as u32 % steps);
        out.push(generate(&GenSpec::new(vertices, seed0 + i as u64))?);
    }
    Ok(out)
}

/// Subdivides a matching edge and doubles the middle segment into a bigon:
/// the canonical bubbled construction.
pub fn insert_bubble(d: &MatchedDiagram, m: EdgeId) -> Result<MatchedDiagram, Error> {
    d.ensure_valid()?;
    let rec = d.edge(m).ok_or(Error::UnknownEdge { edge: m })?.clone();
    if !rec.matching {
        return Err(Error::NotAMatchingEdge { edge: m });
    }
    let (nv, ne, nh) = d.max_ids();
    let [h_u, h_w] = rec.ends;
    let x = VertexId(nv);
    let y = VertexId(nv + 1);
    let [g1, g2, g3, g4, g5, g6] =
        [nh, nh + 1, nh + 2, nh + 3, nh + 4, nh + 5].map(HalfEdgeId);
    let mut vertices = d.vertices.clone();
    vertices.push(VertexRecord { id: x, rotation: [g1, g5, g3] });
    vertices.push(VertexRecord { id: y, rotation: [g2, g4, g6] });
    let mut edges: Vec<EdgeRecord> = d.edges.iter().filter(|e| e.id != m).cloned().collect();
    edges.push(EdgeRecord { id: m, ends: [h_u, g1], matching: true });
    edges.push(EdgeRecord { id: EdgeId(ne), ends: [g2, h_w], matching: true });
    edges.push(EdgeRecord { id: EdgeId(ne + 1), ends: [g3, g4], matching: false });
    edges.push(EdgeRecord { id: EdgeId(ne + 2), ends: [g5, g6], matching: false });
    Ok(MatchedDiagram::new(
        format!("{}-bubble{}", d.name, m),
        d.free_circles,
        vertices,
        edges,
    ))
}

/// Joins two diagrams by subdividing one non-matching edge of each and
/// connecting the new vertices with a matching edge; that edge is a bridge
/// of the result.
pub fn bridge_join(
    d1: &MatchedDiagram,
    e1: EdgeId,
    d2: &MatchedDiagram,
    e2: EdgeId,
) -> Result<MatchedDiagram, Error> {
    d1.ensure_valid()?;
    d2.ensure_valid()?;
    for (d, e) in [(d1, e1), (d2, e2)] {
        let rec = d.edge(e).ok_or(Error::UnknownEdge { edge: e })?;
        if rec.matching {
            return Err(Error::NeedNonMatchingEdge { edge: e });
        }
    }
    let (a, stub1) = subdivide_side(d1, d1.edge(e1).unwrap().ends[0]);
    let (dv, de, dh) = a.max_ids();
    let d2s = d2.shift_ids(dv, de, dh);
    let e2s = EdgeId(e2.0 + de);
    let (b, stub2) = subdivide_side(&d2s, d2s.edge(e2s).unwrap().ends[0]);
    let (_, ne, _) = b.max_ids();
    let mut vertices = a.vertices.clone();
    vertices.extend(b.vertices.clone());
    let mut edges = a.edges.clone();
    edges.extend(b.edges.clone());
    edges.push(EdgeRecord { id: EdgeId(ne), ends: [stub1, stub2], matching: true });
    Ok(MatchedDiagram::new(
        format!("{}-bridge-{}", d1.name, d2.name),
        d1.free_circles + d2.free_circles,
        vertices,
        edges,
    ))
}

pub fn disjoint_union(d1: &MatchedDiagram, d2: &MatchedDiagram) -> MatchedDiagram {
    let (dv, de, dh) = d1.max_ids();
    let d2s = d2.shift_ids(dv, de, dh);
    let mut vertices = d1.vertices.clone();
    vertices.extend(d2s.vertices);
    let mut edges = d1.edges.clone();
    edges.extend(d2s.edges);
    MatchedDiagram::new(
        format!("{}+{}", d1.name, d2.name),
        d1.free_circles + d2.free_circles,
        vertices,
        edges,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub instance: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    /// Pass/fail counts aggregated per check name.
    pub fn summary_table(&self) -> String {
        let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for r in &self.records {
            let entry = counts.entry(&r.check).or_default();
            if r.pass {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
        let mut out = String::new();
        let width = counts.keys().map(|k| k.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(out, "{:width$}  {:>6}  {:>6}", "check", "pass", "fail");
        let mut total = (0usize, 0usize);
        for (check, (pass, fail)) in &counts {
            let _ = writeln!(out, "{check:width$}  {pass:>6}  {fail:>6}");
            total.0 += pass;
            total.1 += fail;
        }
        let _ = writeln!(out, "{:width$}  {:>6}  {:>6}", "total", total.0, total.1);
        out
    }
}

fn record(
    records: &mut Vec<CheckRecord>,
    check: &str,
    instance: &str,
    pass: bool,
    witness: impl FnOnce() -> serde_json::Value,
) {
    records.push(CheckRecord {
        check: check.to_string(),
        instance: instance.to_string(),
        pass,
        witness: if pass { None } else { Some(witness()) },
    });
}

fn diagram_witness(d: &MatchedDiagram, detail: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "diagram": serde_json::to_value(d).expect("diagram serializes"),
        "detail": detail,
    })
}

/// All per-matching checks for one `(G, M)`: the count theorem, the odd-cycle
/// corollary, the IH-relations on every matching edge, the bubble, bridge and
/// triangle lemmas, mirror invariance, and state-sum/factored agreement.
fn check_matched_pair(
    d: &MatchedDiagram,
    instance: &str,
    records: &mut Vec<CheckRecord>,
) -> Result<(), Error> {
    let bracket = bracket_state_sum(d)?;
    let at_one = bracket.eval_at_one();
    let formula = two_factor_count_formula(d)?;

    let enumerated: Option<usize> =
        if d.non_matching_edges().len() <= DEFAULT_ENUMERATION_LIMIT && d.free_circles == 0 {
            Some(two_factor_enumerate_with_limit(d, DEFAULT_ENUMERATION_LIMIT)?.len())
        } else {
            None
        };
    let thm13 = at_one == formula
        && enumerated.is_none_or(|n| BigInt::from(n) == formula);
    record(records, "thm1.3", instance, thm13, || {
        diagram_witness(
            d,
            serde_json::json!({
                "bracket_at_one": at_one.to_string(),
                "formula": formula.to_string(),
                "enumerated": enumerated,
            }),
        )
    });

    let cc = d.complement_cycles()?;
    let cor15 = !cc.has_odd_cycle() || at_one.is_zero();
    record(records, "cor1.5", instance, cor15, || {
        diagram_witness(
            d,
            serde_json::json!({
                "cycle_lengths": cc.lengths(),
                "bracket_at_one": at_one.to_string(),
            }),
        )
    });

    for e in d.matching_edges() {
        let report = check_ih_relation(d, e)?;
        record(records, "lemma2.4", instance, report.passed(), || {
            diagram_witness(
                d,
                serde_json::json!({
                    "edge": e.0,
                    "poly_lhs": report.poly_lhs.to_text(),
                    "poly_rhs": report.poly_rhs.to_text(),
                    "count_lhs": report.count_lhs.to_string(),
                    "count_rhs": report.count_rhs.to_string(),
                }),
            )
        });
    }

    for bubble in detect_bubbles(d)? {
        let report = check_bubble(d, &bubble)?;
        record(records, "lemma2.5", instance, report.passed(), || {
            diagram_witness(
                d,
                serde_json::json!({
                    "parallel": [bubble.parallel[0].0, bubble.parallel[1].0],
                    "bracket_at_one": report.bracket_at_one.to_string(),
                    "collapsed": report.collapsed_bracket_at_one.to_string(),
                }),
            )
        });
    }

    let bridge = check_bridge(d)?;
    record(records, "lemma2.6", instance, bridge.passed(), || {
        diagram_witness(
            d,
            serde_json::json!({
                "bridges": bridge.bridges.iter().map(|e| e.0).collect::<Vec<_>>(),
            }),
        )
    });

    let triangle = check_triangle(d)?;
    record(records, "lemma2.9", instance, triangle.passed(), || {
        diagram_witness(
            d,
            serde_json::json!({
                "triangle_cycles": triangle.triangle_cycles,
                "bracket_at_one": at_one.to_string(),
            }),
        )
    });

    let mirrored = bracket_state_sum(&d.mirror())?;
    record(records, "mirror", instance, mirrored == bracket, || {
        diagram_witness(
            d,
            serde_json::json!({
                "bracket": bracket.to_text(),
                "mirrored": mirrored.to_text(),
            }),
        )
    });

    let factored = bracket_factored(d)?;
    record(records, "factored", instance, factored == bracket, || {
        diagram_witness(
            d,
            serde_json::json!({
                "state_sum": bracket.to_text(),
                "factored": factored.to_text(),
            }),
        )
    });

    Ok(())
}

/// Runs the whole suite on one instance. With `all_matchings`, the
/// per-matching checks repeat for every perfect matching of the graph; the
/// reduction and the Tait checks run once.
pub fn verify_instance(
    d: &MatchedDiagram,
    all_matchings: bool,
) -> Result<VerificationReport, Error> {
    d.ensure_valid()?;
    let mut records = Vec::new();

    if all_matchings {
        for (i, m) in enumerate_perfect_matchings(d)?.iter().enumerate() {
            let instance = format!("{}#M{}", d.name, i);
            check_matched_pair(&with_matching(d, m), &instance, &mut records)?;
        }
    } else {
        check_matched_pair(d, &d.name, &mut records)?;
    }

    let connected = d.is_connected();
    let bridgeless = d.find_bridges()?.is_empty();
    if connected && bridgeless {
        match reduce_to_short_cycle(d) {
            Ok((reduced, moves)) => {
                let shortest = reduced.complement_cycles()?.shortest();
                let replayed = replay(d, &moves)?;
                let pass = shortest.is_some_and(|len| len <= 3) && replayed == reduced;
                record(&mut records, "lemma2.8", &d.name, pass, || {
                    diagram_witness(
                        d,
                        serde_json::json!({
                            "moves": serde_json::to_value(&moves).unwrap(),
                            "shortest_cycle": shortest,
                        }),
                    )
                });
            }
            Err(Error::SearchExhausted { .. }) => {
                record(&mut records, "lemma2.8", &d.name, false, || {
                    diagram_witness(d, serde_json::json!({"error": "search exhausted"}))
                });
            }
            Err(other) => return Err(other),
        }

        let tait = tait_polynomial(d)?;
        let tait_at_one = tait.eval_at_one();
        let colorings = tait_colorings_count(d)?;
        record(
            &mut records,
            "thm1.6",
            &d.name,
            tait_at_one == BigInt::from(colorings),
            || {
                diagram_witness(
                    d,
                    serde_json::json!({
                        "tait_at_one": tait_at_one.to_string(),
                        "colorings": colorings,
                    }),
                )
            },
        );
        record(&mut records, "thm1.7", &d.name, tait_at_one > BigInt::zero(), || {
            diagram_witness(
                d,
                serde_json::json!({ "tait_at_one": tait_at_one.to_string() }),
            )
        });
    }

    Ok(VerificationReport { records })
}

/// The current matching flags as a [`PerfectMatching`] value.
pub fn installed_matching(d: &MatchedDiagram) -> PerfectMatching {
    PerfectMatching { edges: d.matching_edges().into_iter().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn generation_is_deterministic_and_clean() {
        for seed in 0..8u64 {
            let spec = GenSpec::new(10, seed);
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a, b);
            assert!(a.is_valid(), "seed {seed}: {}", a.validate());
            assert_eq!(a.vertex_count(), 10);
            assert_eq!(a.edge_count(), 15);
            assert!(a.find_bridges().unwrap().is_empty(), "seed {seed}");
            assert!(a.is_connected());
        }
    }

    #[test]
    fn generation_at_minimum_size_is_theta() {
        let d = generate(&GenSpec::new(2, 7)).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), 3);
        assert_eq!(d.matching_edges().len(), 1);
    }

    #[test]
    fn generation_rejects_bad_specs() {
        assert!(generate(&GenSpec::new(3, 0)).is_err());
        assert!(generate(&GenSpec::new(0, 0)).is_err());
    }

    #[test]
    fn bubble_insertion_and_collapse_round_trip() {
        let theta = fixtures::theta();
        let bubbled = insert_bubble(&theta, EdgeId(0)).unwrap();
        assert!(bubbled.is_valid(), "{}", bubbled.validate());
        // Splitting the matching edge also turns theta's own parallel pair
        // into a bubble: its outer matching edges are now distinct.
        let bubbles = detect_bubbles(&bubbled).unwrap();
        assert_eq!(bubbles.len(), 2);
        for bubble in &bubbles {
            let report = check_bubble(&bubbled, bubble).unwrap();
            assert!(report.passed(), "{:?}", bubble);
        }
        let inserted = bubbles
            .iter()
            .find(|b| b.parallel == [EdgeId(4), EdgeId(5)])
            .expect("the inserted bigon is found");
        let collapsed = crate::ihmoves::collapse_bubble(&bubbled, inserted).unwrap();
        assert_eq!(collapsed.vertices, theta.vertices);
        assert_eq!(collapsed.edges, theta.edges);
    }

    #[test]
    fn nested_bubbles_collapse_confluently() {
        let theta = fixtures::theta();
        let once = insert_bubble(&theta, EdgeId(0)).unwrap();
        let twice = insert_bubble(&once, EdgeId(0)).unwrap();
        assert!(twice.is_valid(), "{}", twice.validate());
        let bubbles = detect_bubbles(&twice).unwrap();
        assert_eq!(bubbles.len(), 3);
        let full = bracket_state_sum(&twice).unwrap().eval_at_one();
        assert_eq!(full, BigInt::from(8));
        for bubble in &bubbles {
            let collapsed = crate::ihmoves::collapse_bubble(&twice, bubble).unwrap();
            let value = bracket_state_sum(&collapsed).unwrap().eval_at_one();
            assert_eq!(full, BigInt::from(2) * &value, "{:?}", bubble);
        }
    }

    #[test]
    fn bridge_join_produces_a_matching_bridge() {
        let theta = fixtures::theta();
        let joined = bridge_join(&theta, EdgeId(1), &theta, EdgeId(1)).unwrap();
        assert!(joined.is_valid(), "{}", joined.validate());
        let bridges = joined.find_bridges().unwrap();
        assert_eq!(bridges.len(), 1);
        let bridge = *bridges.iter().next().unwrap();
        assert!(joined.edge(bridge).unwrap().matching);
        let report = check_bridge(&joined).unwrap();
        assert!(report.triggered());
        assert!(report.passed());
    }

    #[test]
    fn bridge_join_refuses_matching_edges() {
        let theta = fixtures::theta();
        assert!(matches!(
            bridge_join(&theta, EdgeId(0), &theta, EdgeId(1)),
            Err(Error::NeedNonMatchingEdge { .. })
        ));
    }

    #[test]
    fn verify_fixtures_pass() {
        for d in fixtures::all() {
            let report = verify_instance(&d, true).unwrap();
            assert!(
                report.passed(),
                "{}: {:?}",
                d.name,
                report.failures().iter().map(|r| &r.check).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn verify_small_corpus_passes() {
        for d in corpus(10, 6, 10, 1000).unwrap() {
            let report = verify_instance(&d, false).unwrap();
            assert!(
                report.passed(),
                "{}: {}",
                d.name,
                report
                    .failures()
                    .iter()
                    .map(|r| r.check.clone())
                    .collect::<Vec<_>>()
                    .join(",")
            );
        }
    }

    #[test]
    fn summary_table_shape() {
        let report = verify_instance(&fixtures::theta(), false).unwrap();
        let table = report.summary_table();
        assert!(table.contains("thm1.3"));
        assert!(table.contains("total"));
        let jsonl = report.to_jsonl();
        assert_eq!(jsonl.lines().count(), report.records.len());
    }
}
