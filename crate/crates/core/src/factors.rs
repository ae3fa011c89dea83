//! 2-factor counting and enumeration, perfect matchings, Tait colorings and
//! the planar Tait polynomial.
//!
//! The closed-form count and the exhaustive enumeration are deliberately
//! independent routes to the same number; the bracket evaluated at 1 must
//! agree with both. Likewise the Tait polynomial at 1 is cross-checked
//! against a brute-force edge-coloring count.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use crate::bracket::bracket_state_sum;
use crate::graph::{EdgeId, MatchedDiagram, VertexId};
use crate::laurent::LaurentPoly;
use crate::Error;

/// Refuse exhaustive 2-factor enumeration beyond this many non-matching
/// edges unless overridden.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;

/// Guard against pathological perfect-matching enumerations.
pub const DEFAULT_MATCHING_CAP: usize = 1 << 20;

/// A spanning 2-regular subgraph containing every matching edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TwoFactor {
    pub edges: BTreeSet<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PerfectMatching {
    pub edges: BTreeSet<EdgeId>,
}

/// Closed-form count of 2-factors through the matching: 0 when some
/// complement cycle is odd, otherwise 2 to the number of complement cycles.
/// Free circles contribute a factor of 2 each, which is what makes the count
/// consistent under smoothings that close strands into circles.
pub fn two_factor_count_formula(d: &MatchedDiagram) -> Result<BigInt, Error> {
    let cc = d.complement_cycles()?;
    if cc.has_odd_cycle() {
        return Ok(BigInt::from(0));
    }
    Ok(BigInt::from(1) << (cc.cycles.len() + cc.free_circles as usize))
}

/// Exhaustive oracle: every subset of non-matching edges that together with
/// the matching gives each vertex degree exactly 2. Output is sorted, so the
/// order is independent of the iteration scheme.
pub fn two_factor_enumerate(d: &MatchedDiagram) -> Result<Vec<TwoFactor>, Error> {
    two_factor_enumerate_with_limit(d, DEFAULT_ENUMERATION_LIMIT)
}

pub fn two_factor_enumerate_with_limit(
    d: &MatchedDiagram,
    limit: usize,
) -> Result<Vec<TwoFactor>, Error> {
    d.ensure_valid()?;
    if d.free_circles > 0 {
        return Err(Error::FreeCirclesPresent { name: d.name.clone() });
    }
    let free = d.non_matching_edges();
    if free.len() > limit {
        return Err(Error::EnumerationTooLarge { non_matching: free.len(), limit });
    }
    let idx = d.index()?;
    let vertex_slot: BTreeMap<VertexId, u32> = d
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id, i as u32))
        .collect();
    // Degrees live in 4-bit lanes of a u128, one lane per vertex; a subset is
    // a 2-factor complement exactly when every lane holds 2.
    assert!(d.vertices.len() <= 30, "enumeration limit keeps diagrams small");
    let lane = |v: VertexId| 4 * vertex_slot[&v] as u32;
    let mut base: u128 = 0;
    let mut target: u128 = 0;
    for v in d.vertices.iter().map(|v| v.id) {
        base += 1u128 << lane(v); // one matching edge per vertex
        target += 2u128 << lane(v);
    }
    let edge_mask: Vec<u128> = free
        .iter()
        .map(|e| {
            let rec = d.edge(*e).unwrap();
            let u = idx.h2v[&rec.ends[0]];
            let w = idx.h2v[&rec.ends[1]];
            (1u128 << lane(u)) + (1u128 << lane(w))
        })
        .collect();

    let matching: BTreeSet<EdgeId> = d.matching_edges().into_iter().collect();
    let mut found = Vec::new();
    let mut acc = base;
    let mut in_set = vec![false; free.len()];
    if acc == target {
        found.push(TwoFactor { edges: matching.clone() });
    }
    // Gray-code walk: each step toggles one edge.
    for i in 1u64..1u64 << free.len() {
        let j = i.trailing_zeros() as usize;
        if in_set[j] {
            acc -= edge_mask[j];
        } else {
            acc += edge_mask[j];
        }
        in_set[j] = !in_set[j];
        if acc == target {
            let mut edges = matching.clone();
            for (slot, included) in in_set.iter().enumerate() {
                if *included {
                    edges.insert(free[slot]);
                }
            }
            found.push(TwoFactor { edges });
        }
    }
    found.sort();
    Ok(found)
}

/// All perfect matchings of the underlying cubic graph, ignoring the current
/// matching flags. Backtracks over vertices in id order; output order is the
/// backtracking order.
pub fn enumerate_perfect_matchings(d: &MatchedDiagram) -> Result<Vec<PerfectMatching>, Error> {
    enumerate_perfect_matchings_with_cap(d, DEFAULT_MATCHING_CAP)
}

pub fn enumerate_perfect_matchings_with_cap(
    d: &MatchedDiagram,
    cap: usize,
) -> Result<Vec<PerfectMatching>, Error> {
    d.ensure_graph_valid()?;
    let idx = d.index()?;
    let vertex_ids: Vec<VertexId> = d.vertices.iter().map(|v| v.id).collect();
    // Incident non-loop edges per vertex, ascending edge id.
    let mut incident: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = BTreeMap::new();
    for e in &d.edges {
        let u = idx.h2v[&e.ends[0]];
        let w = idx.h2v[&e.ends[1]];
        if u == w {
            continue;
        }
        incident.entry(u).or_default().push((e.id, w));
        incident.entry(w).or_default().push((e.id, u));
    }
    for list in incident.values_mut() {
        list.sort();
    }

    let mut out = Vec::new();
    let mut covered: BTreeSet<VertexId> = BTreeSet::new();
    let mut chosen: Vec<EdgeId> = Vec::new();

    fn recurse(
        vertex_ids: &[VertexId],
        incident: &BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
        covered: &mut BTreeSet<VertexId>,
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<PerfectMatching>,
        cap: usize,
    ) -> Result<(), Error> {
        let next = vertex_ids.iter().find(|v| !covered.contains(v));
        let Some(&v) = next else {
            if out.len() >= cap {
                return Err(Error::MatchingCapExceeded { cap });
            }
            out.push(PerfectMatching { edges: chosen.iter().copied().collect() });
            return Ok(());
        };
        let Some(options) = incident.get(&v) else {
            return Ok(());
        };
        for (e, w) in options {
            if covered.contains(w) {
                continue;
            }
            covered.insert(v);
            covered.insert(*w);
            chosen.push(*e);
            recurse(vertex_ids, incident, covered, chosen, out, cap)?;
            chosen.pop();
            covered.remove(&v);
            covered.remove(w);
        }
        Ok(())
    }

    recurse(&vertex_ids, &incident, &mut covered, &mut chosen, &mut out, cap)?;
    Ok(out)
}

/// The same graph with a different matching installed.
pub fn with_matching(d: &MatchedDiagram, m: &PerfectMatching) -> MatchedDiagram {
    let mut out = d.clone();
    for e in &mut out.edges {
        e.matching = m.edges.contains(&e.id);
    }
    out
}

/// The planar Tait polynomial: the sum of the brackets over every perfect
/// matching of the graph. Defined for connected graphs only.
pub fn tait_polynomial(d: &MatchedDiagram) -> Result<LaurentPoly, Error> {
    d.ensure_graph_valid()?;
    if !d.is_connected() {
        return Err(Error::Disconnected { name: d.name.clone() });
    }
    let mut sum = LaurentPoly::zero();
    for m in enumerate_perfect_matchings(d)? {
        sum = &sum + &bracket_state_sum(&with_matching(d, &m))?;
    }
    Ok(sum)
}

/// Brute-force count of proper 3-edge-colorings with labeled colors; the six
/// permutations of any coloring are all counted.
pub fn tait_colorings_count(d: &MatchedDiagram) -> Result<u64, Error> {
    d.ensure_graph_valid()?;
    let mut count = 0u64;
    color_edges(d, &mut |_| count += 1)?;
    Ok(count)
}

/// Every proper 3-edge-coloring, as a color in `0..3` per edge in edge-id
/// order.
pub fn enumerate_tait_colorings(d: &MatchedDiagram) -> Result<Vec<Vec<u8>>, Error> {
    d.ensure_graph_valid()?;
    let mut out = Vec::new();
    color_edges(d, &mut |coloring| out.push(coloring.to_vec()))?;
    Ok(out)
}

fn color_edges(
    d: &MatchedDiagram,
    emit: &mut impl FnMut(&[u8]),
) -> Result<(), Error> {
    let idx = d.index()?;
    let vertex_slot: BTreeMap<VertexId, usize> = d
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id, i))
        .collect();
    let ends: Vec<[usize; 2]> = d
        .edges
        .iter()
        .map(|e| {
            [
                vertex_slot[&idx.h2v[&e.ends[0]]],
                vertex_slot[&idx.h2v[&e.ends[1]]],
            ]
        })
        .collect();
    let mut used = vec![0u8; d.vertices.len()];
    let mut colors = vec![0u8; d.edges.len()];

    fn recurse(
        ends: &[[usize; 2]],
        used: &mut [u8],
        colors: &mut [u8],
        at: usize,
        emit: &mut impl FnMut(&[u8]),
    ) {
        if at == ends.len() {
            emit(colors);
            return;
        }
        let [u, w] = ends[at];
        for color in 0u8..3 {
            let bit = 1 << color;
            if used[u] & bit != 0 {
                continue;
            }
            used[u] |= bit;
            if used[w] & bit != 0 {
                used[u] &= !bit;
                continue; // also rejects loops, which can never be colored
            }
            used[w] |= bit;
            colors[at] = color;
            recurse(ends, used, colors, at + 1, emit);
            used[u] &= !bit;
            used[w] &= !bit;
        }
    }

    recurse(&ends, &mut used, &mut colors, 0, emit);
    Ok(())
}

/// Colorings whose color-0 class is exactly the given edge set. This is the
/// per-matching slice of the Tait count that the bracket at 1 must equal.
pub fn colorings_with_first_class(
    d: &MatchedDiagram,
    class: &BTreeSet<EdgeId>,
) -> Result<u64, Error> {
    let colorings = enumerate_tait_colorings(d)?;
    let ids: Vec<EdgeId> = d.edges.iter().map(|e| e.id).collect();
    Ok(colorings
        .iter()
        .filter(|coloring| {
            let zero_class: BTreeSet<EdgeId> = coloring
                .iter()
                .zip(&ids)
                .filter(|(c, _)| **c == 0)
                .map(|(_, id)| *id)
                .collect();
            zero_class == *class
        })
        .count() as u64)
}
