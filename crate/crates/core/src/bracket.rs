//! The 2-factor bracket: a state sum over resolutions of the matching edges.
//!
//! Every matching edge is resolved either "open" or "cross". A state with
//! `c` cross-resolutions whose strands close into `l` circles contributes
//! `(-z)^c (z + z^-1)^l`. Summing over all 2^k states gives the bracket; the
//! recursive picture rules expand to exactly this closed sum, so the literal
//! rewriting procedure is not implemented separately.

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::{EdgeId, HalfEdgeId, MatchedDiagram};
use crate::laurent::LaurentPoly;
use crate::Error;

/// Refuse state sums beyond this many matching edges unless overridden.
pub const DEFAULT_STATE_LIMIT: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Open,
    Cross,
}

/// One choice of resolution per matching edge, as a bit vector indexed by
/// matching edges in ascending id order. Bit value 1 means cross.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResolutionState {
    bits: u64,
    len: usize,
}

impl ResolutionState {
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 63, "state vectors limited to 63 bits");
        assert!(index < (1u64 << len) || len == 0 && index == 0);
        ResolutionState { bits: index, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index(&self) -> u64 {
        self.bits
    }

    pub fn resolution(&self, bit: usize) -> Resolution {
        if self.bits >> bit & 1 == 1 {
            Resolution::Cross
        } else {
            Resolution::Open
        }
    }

    pub fn cross_count(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn flipped(&self, bit: usize) -> Self {
        ResolutionState { bits: self.bits ^ (1 << bit), len: self.len }
    }
}

impl fmt::Display for ResolutionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in 0..self.len {
            f.write_str(if self.bits >> bit & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The two strand pairs produced by resolving matching edge `e`.
///
/// With `a, b` the rotation successors of the edge at one endpoint and
/// `c, d` at the other, the open resolution joins `a-d` and `b-c` and the
/// cross resolution joins `a-c` and `b-d`. These are the two pairings of the
/// four strands that separate `a` from `b`; the convention is pinned by the
/// theta fixture, whose open state must yield two circles.
pub fn resolution_pairing(
    d: &MatchedDiagram,
    e: EdgeId,
    choice: Resolution,
) -> Result<[[HalfEdgeId; 2]; 2], Error> {
    let s = d.matching_strands(e)?;
    Ok(match choice {
        Resolution::Open => [[s.a, s.d], [s.b, s.c]],
        Resolution::Cross => [[s.a, s.c], [s.b, s.d]],
    })
}

/// Precomputed strand tables for walking state circles quickly.
pub(crate) struct StateEngine {
    pub matching: Vec<EdgeId>,
    site_of: Vec<usize>,
    partner: Vec<usize>,
    open_link: Vec<usize>,
    cross_link: Vec<usize>,
    free_circles: u32,
}

impl StateEngine {
    /// Assumes `d` already validated.
    pub fn build(d: &MatchedDiagram) -> Result<Self, Error> {
        let matching = d.matching_edges();
        // Compact-index the non-matching half-edges.
        let mut node_of: BTreeMap<HalfEdgeId, usize> = BTreeMap::new();
        for e in &d.edges {
            if !e.matching {
                for h in e.ends {
                    let next = node_of.len();
                    node_of.insert(h, next);
                }
            }
        }
        let n = node_of.len();
        let mut partner = vec![usize::MAX; n];
        for e in &d.edges {
            if !e.matching {
                let x = node_of[&e.ends[0]];
                let y = node_of[&e.ends[1]];
                partner[x] = y;
                partner[y] = x;
            }
        }
        let mut site_of = vec![usize::MAX; n];
        let mut open_link = vec![usize::MAX; n];
        let mut cross_link = vec![usize::MAX; n];
        for (site, e) in matching.iter().enumerate() {
            let s = d.matching_strands(*e)?;
            let [a, b, c, dd] = [node_of[&s.a], node_of[&s.b], node_of[&s.c], node_of[&s.d]];
            for x in [a, b, c, dd] {
                site_of[x] = site;
            }
            open_link[a] = dd;
            open_link[dd] = a;
            open_link[b] = c;
            open_link[c] = b;
            cross_link[a] = c;
            cross_link[c] = a;
            cross_link[b] = dd;
            cross_link[dd] = b;
        }
        Ok(StateEngine {
            matching,
            site_of,
            partner,
            open_link,
            cross_link,
            free_circles: d.free_circles,
        })
    }

    fn resolution_link(&self, state: u64, x: usize) -> usize {
        if state >> self.site_of[x] & 1 == 1 {
            self.cross_link[x]
        } else {
            self.open_link[x]
        }
    }

    /// Number of circles in a state: orbits of the edge pairing composed with
    /// the resolution pairing, plus the free circles.
    pub fn circles(&self, state: u64, visited: &mut [u64], stamp: u64) -> u32 {
        let n = self.partner.len();
        let mut circles = self.free_circles;
        for start in 0..n {
            if visited[start] == stamp {
                continue;
            }
            circles += 1;
            let mut x = start;
            loop {
                visited[x] = stamp;
                let y = self.resolution_link(state, x);
                visited[y] = stamp;
                x = self.partner[y];
                if x == start {
                    break;
                }
            }
        }
        circles
    }

    pub fn node_count(&self) -> usize {
        self.partner.len()
    }
}

/// Number of circles of one resolution state.
pub fn circle_count(d: &MatchedDiagram, state: &ResolutionState) -> Result<u32, Error> {
    d.ensure_valid()?;
    let engine = StateEngine::build(d)?;
    assert_eq!(state.len(), engine.matching.len(), "state length mismatch");
    let mut visited = vec![0u64; engine.node_count()];
    Ok(engine.circles(state.index(), &mut visited, 1))
}

fn assemble(mult: &BTreeMap<(u32, u32), u64>) -> LaurentPoly {
    let max_circles = mult.keys().map(|(_, l)| *l).max().unwrap_or(0);
    let mut loop_pows = Vec::with_capacity(max_circles as usize + 1);
    loop_pows.push(LaurentPoly::one());
    for _ in 0..max_circles {
        loop_pows.push(&LaurentPoly::loop_factor() * loop_pows.last().unwrap());
    }
    let mut sum = LaurentPoly::zero();
    for ((crosses, circles), count) in mult {
        let sign: i64 = if crosses % 2 == 0 { 1 } else { -1 };
        let coeff = LaurentPoly::monomial(*crosses as i64, sign * *count as i64);
        sum = &sum + &(&coeff * &loop_pows[*circles as usize]);
    }
    sum
}

fn multiplicities(
    engine: &StateEngine,
    from: u64,
    to: u64,
) -> BTreeMap<(u32, u32), u64> {
    let mut mult: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let mut visited = vec![0u64; engine.node_count()];
    let mut stamp = 0u64;
    for state in from..to {
        stamp += 1;
        let circles = engine.circles(state, &mut visited, stamp);
        *mult.entry((state.count_ones(), circles)).or_default() += 1;
    }
    mult
}

/// The bracket as a direct sum over all 2^k states.
pub fn bracket_state_sum(d: &MatchedDiagram) -> Result<LaurentPoly, Error> {
    bracket_state_sum_with_limit(d, DEFAULT_STATE_LIMIT)
}

pub fn bracket_state_sum_with_limit(
    d: &MatchedDiagram,
    limit: usize,
) -> Result<LaurentPoly, Error> {
    d.ensure_valid()?;
    let engine = StateEngine::build(d)?;
    let k = engine.matching.len();
    if k > limit {
        return Err(Error::StateSpaceTooLarge { matching_edges: k, limit });
    }
    Ok(assemble(&multiplicities(&engine, 0, 1u64 << k)))
}

/// Same sum, partitioned across `threads` workers. The partial sums combine
/// associatively, so the result is independent of the partitioning; tests
/// hold this against the sequential path.
pub fn bracket_state_sum_threads(
    d: &MatchedDiagram,
    threads: usize,
    limit: usize,
) -> Result<LaurentPoly, Error> {
    d.ensure_valid()?;
    let engine = StateEngine::build(d)?;
    let k = engine.matching.len();
    if k > limit {
        return Err(Error::StateSpaceTooLarge { matching_edges: k, limit });
    }
    let total = 1u64 << k;
    let threads = threads.clamp(1, 64) as u64;
    let chunk = total.div_ceil(threads);
    let partials = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let engine = &engine;
            let from = (t * chunk).min(total);
            let to = ((t + 1) * chunk).min(total);
            handles.push(scope.spawn(move || multiplicities(engine, from, to)));
        }
        handles.into_iter().map(|h| h.join().expect("state worker")).collect::<Vec<_>>()
    });
    let mut mult: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for partial in partials {
        for (key, count) in partial {
            *mult.entry(key).or_default() += count;
        }
    }
    Ok(assemble(&mult))
}

/// Bracket computed as the product over connected components, times one loop
/// factor per free circle. Must agree with the direct state sum.
pub fn bracket_factored(d: &MatchedDiagram) -> Result<LaurentPoly, Error> {
    d.ensure_valid()?;
    let mut product = LaurentPoly::loop_factor().pow(d.free_circles);
    for component in d.connected_components()? {
        product = &product * &bracket_state_sum(&component)?;
    }
    Ok(product)
}

#[derive(Clone, Debug)]
pub struct CubeState {
    pub state: ResolutionState,
    pub crosses: u32,
    pub circles: u32,
    pub term: LaurentPoly,
}

/// All 2^k states in ascending bit-vector order, with arrows between states
/// differing by one 0 -> 1 flip.
#[derive(Clone, Debug)]
pub struct CubeOfResolutions {
    pub matching_edges: Vec<EdgeId>,
    pub states: Vec<CubeState>,
    /// Pairs of indices into `states`, ordered by source then flipped bit.
    pub arrows: Vec<(usize, usize)>,
}

impl CubeOfResolutions {
    pub fn term_sum(&self) -> LaurentPoly {
        let mut sum = LaurentPoly::zero();
        for s in &self.states {
            sum = &sum + &s.term;
        }
        sum
    }

    /// Circle counts per column (by cross count), each sorted.
    pub fn column_profile(&self) -> Vec<Vec<u32>> {
        let k = self.matching_edges.len();
        let mut columns = vec![Vec::new(); k + 1];
        for s in &self.states {
            columns[s.crosses as usize].push(s.circles);
        }
        for column in &mut columns {
            column.sort_unstable();
        }
        columns
    }
}

pub fn cube(d: &MatchedDiagram) -> Result<CubeOfResolutions, Error> {
    cube_with_limit(d, DEFAULT_STATE_LIMIT)
}

pub fn cube_with_limit(d: &MatchedDiagram, limit: usize) -> Result<CubeOfResolutions, Error> {
    d.ensure_valid()?;
    let engine = StateEngine::build(d)?;
    let k = engine.matching.len();
    if k > limit {
        return Err(Error::StateSpaceTooLarge { matching_edges: k, limit });
    }
    let mut visited = vec![0u64; engine.node_count()];
    let mut states = Vec::with_capacity(1usize << k);
    for index in 0..1u64 << k {
        let circles = engine.circles(index, &mut visited, index + 1);
        let crosses = index.count_ones();
        let sign: i64 = if crosses % 2 == 0 { 1 } else { -1 };
        let term = &LaurentPoly::monomial(crosses as i64, sign)
            * &LaurentPoly::loop_factor().pow(circles);
        states.push(CubeState {
            state: ResolutionState::from_index(index, k),
            crosses,
            circles,
            term,
        });
    }
    let mut arrows = Vec::new();
    for index in 0..1u64 << k {
        for bit in 0..k {
            if index >> bit & 1 == 0 {
                arrows.push((index as usize, (index | 1 << bit) as usize));
            }
        }
    }
    Ok(CubeOfResolutions { matching_edges: engine.matching, states, arrows })
}

pub fn export_cube_json(cube: &CubeOfResolutions) -> String {
    let states: Vec<serde_json::Value> = cube
        .states
        .iter()
        .map(|s| {
            serde_json::json!({
                "bits": s.state.to_string(),
                "crosses": s.crosses,
                "circles": s.circles,
                "term": s.term.to_text(),
            })
        })
        .collect();
    let arrows: Vec<serde_json::Value> = cube
        .arrows
        .iter()
        .map(|(from, to)| {
            serde_json::json!([
                cube.states[*from].state.to_string(),
                cube.states[*to].state.to_string()
            ])
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&serde_json::json!({
        "states": states,
        "arrows": arrows,
    }))
    .expect("cube serializes");
    out.push('\n');
    out
}

/// DOT digraph with states ranked into columns by cross count.
pub fn export_cube_dot(cube: &CubeOfResolutions) -> String {
    let k = cube.matching_edges.len();
    let mut out = String::from("digraph cube {\n  rankdir=LR;\n  node [shape=box];\n");
    for column in 0..=k as u32 {
        let members: Vec<String> = cube
            .states
            .iter()
            .filter(|s| s.crosses == column)
            .map(|s| format!("\"{}\";", s.state))
            .collect();
        out.push_str(&format!("  {{ rank=same; {} }}\n", members.join(" ")));
    }
    for s in &cube.states {
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\\ncrosses={} circles={}\\n{}\"];\n",
            s.state, s.state, s.crosses, s.circles, s.term
        ));
    }
    for (from, to) in &cube.arrows {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\";\n",
            cube.states[*from].state, cube.states[*to].state
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{EdgeRecord, VertexRecord};

    fn poly(text: &str) -> LaurentPoly {
        LaurentPoly::from_text(text).unwrap()
    }

    #[test]
    fn theta_resolutions() {
        let theta = fixtures::theta();
        let open = resolution_pairing(&theta, EdgeId(0), Resolution::Open).unwrap();
        // The open resolution closes each parallel edge into its own circle.
        assert_eq!(open, [[HalfEdgeId(2), HalfEdgeId(3)], [HalfEdgeId(4), HalfEdgeId(5)]]);
        let cross = resolution_pairing(&theta, EdgeId(0), Resolution::Cross).unwrap();
        assert_eq!(cross, [[HalfEdgeId(2), HalfEdgeId(5)], [HalfEdgeId(4), HalfEdgeId(3)]]);

        assert_eq!(circle_count(&theta, &ResolutionState::from_index(0, 1)).unwrap(), 2);
        assert_eq!(circle_count(&theta, &ResolutionState::from_index(1, 1)).unwrap(), 1);
    }

    #[test]
    fn resolutions_separate_a_from_b() {
        for d in fixtures::all() {
            for e in d.matching_edges() {
                let s = d.matching_strands(e).unwrap();
                for choice in [Resolution::Open, Resolution::Cross] {
                    let pairs = resolution_pairing(&d, e, choice).unwrap();
                    for pair in pairs {
                        let has_a = pair.contains(&s.a);
                        let has_b = pair.contains(&s.b);
                        assert!(!(has_a && has_b), "{}: {e} pairs a with b", d.name);
                    }
                }
                let open = resolution_pairing(&d, e, Resolution::Open).unwrap();
                let cross = resolution_pairing(&d, e, Resolution::Cross).unwrap();
                assert_ne!(open, cross);
            }
        }
    }

    #[test]
    fn resolution_pairing_rejects_non_matching() {
        let theta = fixtures::theta();
        assert!(matches!(
            resolution_pairing(&theta, EdgeId(1), Resolution::Open),
            Err(Error::NotAMatchingEdge { .. })
        ));
        assert!(matches!(
            resolution_pairing(&theta, EdgeId(9), Resolution::Open),
            Err(Error::UnknownEdge { .. })
        ));
    }

    #[test]
    fn prism_state_circles() {
        let p3l = fixtures::p3_ladder();
        assert_eq!(circle_count(&p3l, &ResolutionState::from_index(0, 3)).unwrap(), 3);
        assert_eq!(circle_count(&p3l, &ResolutionState::from_index(7, 3)).unwrap(), 1);
        let p3c = fixtures::p3_c();
        assert_eq!(circle_count(&p3c, &ResolutionState::from_index(0, 3)).unwrap(), 2);
    }

    #[test]
    fn fixture_brackets() {
        assert_eq!(bracket_state_sum(&fixtures::theta()).unwrap(), poly("z^-2 + 1"));
        assert_eq!(
            bracket_state_sum(&fixtures::p3_ladder()).unwrap(),
            poly("z^-3 - z^2 + z^3 - z^4")
        );
        assert_eq!(
            bracket_state_sum(&fixtures::p3_c()).unwrap(),
            poly("z^-2 - z^-1 + 1 + z^3")
        );
        assert_eq!(
            bracket_state_sum(&fixtures::empty_circle()).unwrap(),
            LaurentPoly::loop_factor()
        );
    }

    #[test]
    fn empty_diagram_bracket_is_one() {
        let empty = crate::graph::MatchedDiagram::new("empty", 0, vec![], vec![]);
        assert_eq!(bracket_state_sum(&empty).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn factored_agrees_with_state_sum() {
        for d in fixtures::all() {
            assert_eq!(
                bracket_factored(&d).unwrap(),
                bracket_state_sum(&d).unwrap(),
                "{}",
                d.name
            );
        }
    }

    #[test]
    fn disjoint_union_multiplies() {
        let theta = fixtures::theta();
        let shifted = theta.shift_ids(10, 10, 10);
        let mut vertices = theta.vertices.clone();
        vertices.extend(shifted.vertices);
        let mut edges = theta.edges.clone();
        edges.extend(shifted.edges);
        let pair = crate::graph::MatchedDiagram::new("theta-pair", 0, vertices, edges);
        let theta_poly = poly("z^-2 + 1");
        assert_eq!(bracket_state_sum(&pair).unwrap(), &theta_poly * &theta_poly);
        assert_eq!(bracket_factored(&pair).unwrap(), &theta_poly * &theta_poly);

        // A disjoint free circle multiplies by z^-1 + z.
        let mut with_circle = fixtures::theta();
        with_circle.free_circles = 1;
        assert_eq!(
            bracket_state_sum(&with_circle).unwrap(),
            &theta_poly * &LaurentPoly::loop_factor()
        );
    }

    #[test]
    fn mirror_preserves_bracket() {
        for d in fixtures::all() {
            assert_eq!(
                bracket_state_sum(&d.mirror()).unwrap(),
                bracket_state_sum(&d).unwrap(),
                "{}",
                d.name
            );
        }
    }

    #[test]
    fn adjacent_states_differ_by_at_most_one_circle() {
        // A flip rewires four strand ends; it merges two circles, splits one,
        // or reroutes a single circle through itself, so the count moves by
        // at most one. K4 realizes the zero-delta case: with the other edge
        // open, the strands around edge 0 connect a to b outside the site,
        // and both of its resolutions give a single immersed circle.
        for d in fixtures::all() {
            let cube = cube(&d).unwrap();
            let k = cube.matching_edges.len();
            for s in &cube.states {
                assert!(s.circles >= 1, "{}", d.name);
                for bit in 0..k {
                    let other = &cube.states[s.state.flipped(bit).index() as usize];
                    let delta = s.circles.abs_diff(other.circles);
                    assert!(delta <= 1, "{}: states {} vs {}", d.name, s.state, other.state);
                }
            }
        }
        let k4 = cube(&fixtures::k4()).unwrap();
        assert_eq!(k4.states[0].circles, k4.states[1].circles);
    }

    #[test]
    fn threads_match_sequential() {
        for d in fixtures::all() {
            let sequential = bracket_state_sum(&d).unwrap();
            for threads in [1, 2, 3, 5] {
                assert_eq!(
                    bracket_state_sum_threads(&d, threads, DEFAULT_STATE_LIMIT).unwrap(),
                    sequential,
                    "{} with {} threads",
                    d.name,
                    threads
                );
            }
        }
    }

    #[test]
    fn state_limit_is_enforced() {
        let theta = fixtures::theta();
        assert!(matches!(
            bracket_state_sum_with_limit(&theta, 0),
            Err(Error::StateSpaceTooLarge { matching_edges: 1, limit: 0 })
        ));
    }

    #[test]
    fn prism_ladder_cube() {
        let cube = cube(&fixtures::p3_ladder()).unwrap();
        assert_eq!(cube.states.len(), 8);
        assert_eq!(cube.arrows.len(), 12);
        assert_eq!(
            cube.column_profile(),
            vec![vec![3], vec![2, 2, 2], vec![1, 1, 1], vec![1]]
        );
        assert_eq!(cube.term_sum(), poly("z^-3 - z^2 + z^3 - z^4"));
        for (from, to) in &cube.arrows {
            assert_eq!(cube.states[*to].crosses, cube.states[*from].crosses + 1);
        }
    }

    #[test]
    fn theta_cube_and_prism_c_cube() {
        let theta_cube = cube(&fixtures::theta()).unwrap();
        assert_eq!(theta_cube.states.len(), 2);
        assert_eq!(theta_cube.arrows.len(), 1);

        let c_cube = cube(&fixtures::p3_c()).unwrap();
        assert_eq!(c_cube.states.len(), 8);
        assert_eq!(c_cube.term_sum(), poly("z^-2 - z^-1 + 1 + z^3"));
        assert_eq!(c_cube.term_sum(), bracket_state_sum(&fixtures::p3_c()).unwrap());
    }

    #[test]
    fn cube_exports() {
        let cube = cube(&fixtures::theta()).unwrap();
        let json = export_cube_json(&cube);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["states"].as_array().unwrap().len(), 2);
        assert_eq!(value["arrows"][0], serde_json::json!(["0", "1"]));
        assert_eq!(value["states"][0]["term"], "z^-2 + 2 + z^2");

        let dot = export_cube_dot(&cube);
        assert!(dot.contains("rank=same"));
        assert!(dot.contains("\"0\" -> \"1\";"));
    }

    #[test]
    fn loops_resolve_consistently() {
        // A matching edge whose strands belong to loops: two loops joined by
        // a matching edge. Both resolutions give a single circle.
        let d = crate::graph::MatchedDiagram::new(
            "dumbbell",
            0,
            vec![
                VertexRecord { id: crate::graph::VertexId(0), rotation: [0, 3, 2].map(HalfEdgeId) },
                VertexRecord { id: crate::graph::VertexId(1), rotation: [1, 4, 5].map(HalfEdgeId) },
            ],
            vec![
                EdgeRecord { id: EdgeId(0), ends: [0, 1].map(HalfEdgeId), matching: true },
                EdgeRecord { id: EdgeId(1), ends: [2, 3].map(HalfEdgeId), matching: false },
                EdgeRecord { id: EdgeId(2), ends: [4, 5].map(HalfEdgeId), matching: false },
            ],
        );
        assert!(d.is_valid(), "{}", d.validate());
        assert_eq!(circle_count(&d, &ResolutionState::from_index(0, 1)).unwrap(), 1);
        assert_eq!(circle_count(&d, &ResolutionState::from_index(1, 1)).unwrap(), 1);
        let b = bracket_state_sum(&d).unwrap();
        assert_eq!(b, poly("z^-1 - 1 + z - z^2"));
        assert_eq!(b.eval_at_one(), num_bigint::BigInt::from(0));
    }
}
