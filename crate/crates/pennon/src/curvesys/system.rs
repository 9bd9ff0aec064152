//! Curve systems: marked curves realized as closed edge paths on a signed
//! ribbon graph, with geometric intersection data read off the 4-valent
//! crossing vertices.

use std::collections::BTreeMap;

use crate::curvesys::ribbon::{FaceId, HalfEdge, SignedRibbonGraph, VertexId};
use crate::error::StructureError;

/// Marking orientation token: one of the two orientations of the curve's
/// annular neighborhood. The geometric content is the token together with
/// the anchor flip; markings are compared at crossings after transporting
/// the chosen side along each curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkingToken {
    Preserving,
    Reversing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedCurve {
    pub name: String,
    pub two_sided: bool,
    pub token: MarkingToken,
    /// Which end of the annulus the token orientation references; part of
    /// the marking data since the surface carries no global orientation.
    pub anchor_flip: bool,
    /// Allowed twist direction for this marking, +1 or -1.
    pub twist_sign: i8,
}

impl MarkedCurve {
    /// Effective side bit at the curve's anchor station.
    pub fn side_bit(&self) -> bool {
        matches!(self.token, MarkingToken::Reversing) ^ self.anchor_flip
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub marked: MarkedCurve,
    /// Cyclic arrival half-edges: step t traverses `edge(path[t])` toward
    /// `vertex(path[t])`, departing from the previous station.
    pub path: Vec<HalfEdge>,
}

/// A crossing between two distinct curves at a 4-valent vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub vertex: VertexId,
    /// Curve indices in ascending order.
    pub curves: (usize, usize),
    /// Station positions of the two passages (same order as `curves`).
    pub stations: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct CurveSystem {
    graph: SignedRibbonGraph,
    curves: Vec<CurveRecord>,
    /// Registered basis permutations by name (index -> image index).
    rotations: BTreeMap<String, Vec<usize>>,
    crossings: Vec<Crossing>,
    crossing_at: BTreeMap<VertexId, usize>,
    curve_of_half_edge: Vec<usize>,
}

impl CurveSystem {
    pub fn new(
        graph: SignedRibbonGraph,
        curves: Vec<CurveRecord>,
    ) -> Result<Self, StructureError> {
        let mut curve_of_half_edge = vec![usize::MAX; graph.half_edge_count()];
        // Passages per vertex: (curve, station, arrival, departure).
        #[allow(clippy::type_complexity)]
        let mut passages: BTreeMap<VertexId, Vec<(usize, usize, HalfEdge, HalfEdge)>> =
            BTreeMap::new();
        for (ci, rec) in curves.iter().enumerate() {
            let path = &rec.path;
            if path.is_empty() {
                return Err(StructureError::BrokenCurvePath {
                    curve: rec.marked.name.clone(),
                    step: 0,
                });
            }
            let mut sign_product = false;
            for t in 0..path.len() {
                let h = path[t];
                let next = path[(t + 1) % path.len()];
                // The step after arriving at vertex(h) departs along the
                // other end of the next edge, which must sit at vertex(h).
                let departure = graph.opposite(next);
                if graph.vertex_of(departure) != graph.vertex_of(h) {
                    return Err(StructureError::BrokenCurvePath {
                        curve: rec.marked.name.clone(),
                        step: t,
                    });
                }
                for &hh in &[h, graph.opposite(h)] {
                    if curve_of_half_edge[hh as usize] != usize::MAX
                        && curve_of_half_edge[hh as usize] != ci
                    {
                        return Err(StructureError::BrokenCurvePath {
                            curve: rec.marked.name.clone(),
                            step: t,
                        });
                    }
                }
                curve_of_half_edge[h as usize] = ci;
                curve_of_half_edge[graph.opposite(h) as usize] = ci;
                sign_product ^= graph.negated(h);
                passages
                    .entry(graph.vertex_of(h))
                    .or_default()
                    .push((ci, t, h, departure));
            }
            if sign_product == rec.marked.two_sided {
                // sign product false (trivial holonomy) means two-sided
                return Err(StructureError::BrokenCurvePath {
                    curve: rec.marked.name.clone(),
                    step: usize::MAX,
                });
            }
        }
        for (h, &c) in curve_of_half_edge.iter().enumerate() {
            if c == usize::MAX {
                return Err(StructureError::UnpairedHalfEdge(h as u32));
            }
        }
        let mut crossings = Vec::new();
        let mut crossing_at = BTreeMap::new();
        for v in 0..graph.vertex_count() as u32 {
            let rot_len = graph.rotation(v).len();
            let pass = passages.get(&v).map(|p| p.as_slice()).unwrap_or(&[]);
            match (rot_len, pass.len()) {
                (2, 1) => {} // marker vertex on an intersection-free curve
                (4, 2) => {
                    let (c1, t1, h1, d1) = pass[0];
                    let (c2, t2, h2, d2) = pass[1];
                    if c1 == c2 {
                        return Err(StructureError::NotACrossing(v));
                    }
                    // Transversality: each passage runs straight through
                    // (departure opposite its arrival in the rotation) and
                    // the two strands interleave.
                    let rot = graph.rotation(v);
                    let pos = |h: HalfEdge| rot.iter().position(|&x| x == h).unwrap();
                    let (p1, q1, p2) = (pos(h1), pos(d1), pos(h2));
                    let q2 = pos(d2);
                    if (p1 + 2) % 4 != q1 || (p2 + 2) % 4 != q2 || p1 % 2 == p2 % 2 {
                        return Err(StructureError::NonTransversalCrossing { vertex: v });
                    }
                    let (a, b) = if c1 < c2 {
                        ((c1, c2), (t1, t2))
                    } else {
                        ((c2, c1), (t2, t1))
                    };
                    crossing_at.insert(v, crossings.len());
                    crossings.push(Crossing {
                        vertex: v,
                        curves: a,
                        stations: b,
                    });
                }
                (valence, _) => {
                    return Err(StructureError::BadValence(v, valence));
                }
            }
        }
        Ok(CurveSystem {
            graph,
            curves,
            rotations: BTreeMap::new(),
            crossings,
            crossing_at,
            curve_of_half_edge,
        })
    }

    pub fn graph(&self) -> &SignedRibbonGraph {
        &self.graph
    }

    pub fn graph_mut(&mut self) -> &mut SignedRibbonGraph {
        &mut self.graph
    }

    pub fn curves(&self) -> &[CurveRecord] {
        &self.curves
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.marked.name == name)
    }

    pub fn curve_of_half_edge(&self, h: HalfEdge) -> usize {
        self.curve_of_half_edge[h as usize]
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_at(&self, v: VertexId) -> Option<&Crossing> {
        self.crossing_at.get(&v).map(|&i| &self.crossings[i])
    }

    pub fn register_rotation(&mut self, name: &str, perm: Vec<usize>) {
        self.rotations.insert(name.to_string(), perm);
    }

    pub fn rotation_perm(&self, name: &str) -> Option<&[usize]> {
        self.rotations.get(name).map(|p| p.as_slice())
    }

    pub fn rotation_names(&self) -> impl Iterator<Item = &str> {
        self.rotations.keys().map(|s| s.as_str())
    }

    /// Geometric intersection number i(c, d): the count of 4-valent
    /// crossing vertices labeled with the two curves. i(c, c) = 0.
    pub fn intersection(&self, c: usize, d: usize) -> u64 {
        if c == d {
            return 0;
        }
        let key = (c.min(d), c.max(d));
        self.crossings.iter().filter(|x| x.curves == key).count() as u64
    }

    /// Full symmetric intersection matrix.
    pub fn intersection_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.curves.len();
        let mut m = vec![vec![0u64; n]; n];
        for x in &self.crossings {
            let (a, b) = x.curves;
            m[a][b] += 1;
            m[b][a] += 1;
        }
        m
    }

    /// Transported marking side bit of curve `c` at station `t`: the anchor
    /// bit flipped once per orientation-reversing band traversed from the
    /// anchor station.
    pub fn side_bit_at(&self, c: usize, t: usize) -> bool {
        let rec = &self.curves[c];
        let mut bit = rec.marked.side_bit();
        for s in 1..=t {
            bit ^= self.graph.negated(rec.path[s]);
        }
        bit
    }

    /// True iff the marked curves are pairwise marked inconsistently: every
    /// crossing joins curves of opposite marking tokens (each token family
    /// is a multicurve), and each crossing pair meets with a constant
    /// crossing sense.
    ///
    /// The crossing sense of a pair at a vertex is the comparison of the
    /// transported side bits, which flips once per orientation-reversing
    /// band along either curve; demanding it be constant over the pair's
    /// crossings rules out the canceling (bigon-like) configurations that
    /// would break the non-negative measure bookkeeping of the twists.
    /// A curve-transported orientation comparison that disagreed at every
    /// single crossing would force the sign structure to be a gauge
    /// coboundary and the filled surface orientable, so on non-orientable
    /// surfaces this pairwise form is the meaningful reading.
    pub fn markings_inconsistent(&self) -> Result<bool, StructureError> {
        Ok(self.inconsistency_violations().is_empty())
    }

    /// Crossings violating inconsistency (for diagnostics): equal tokens,
    /// or a crossing sense differing from the pair's first crossing.
    pub fn inconsistency_violations(&self) -> Vec<VertexId> {
        let mut pair_sense: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        let mut bad = Vec::new();
        for x in &self.crossings {
            let (c, d) = x.curves;
            let (tc, td) = x.stations;
            if self.curves[c].marked.token == self.curves[d].marked.token {
                bad.push(x.vertex);
                continue;
            }
            let sense = self.side_bit_at(c, tc) ^ self.side_bit_at(d, td);
            match pair_sense.get(&(c, d)) {
                None => {
                    pair_sense.insert((c, d), sense);
                }
                Some(&s) if s != sense => bad.push(x.vertex),
                Some(_) => {}
            }
        }
        bad
    }

    /// Filling test: the complement must be a union of disks carrying at
    /// most one marked point each. Traced faces are disks by construction,
    /// so this reduces to connectivity of the curve union, absence of
    /// declared boundary faces, and the marked-point count per face.
    pub fn is_filling(&self) -> bool {
        if !self.graph.is_connected() {
            return false;
        }
        if !self.graph.boundary_faces.is_empty() {
            return false;
        }
        self.graph.marks.values().all(|&m| m <= 1)
    }
}

/// One step of an overlay walk: cross an edge transversally, then travel
/// through a face to the next crossed edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayStep {
    pub crossed: HalfEdge,
    pub corridor: FaceId,
}

/// A closed walk on the surface given by crossed edges and face corridors;
/// used for auxiliary curves that are not part of the realized system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayWalk {
    pub name: String,
    pub steps: Vec<OverlayStep>,
}

impl OverlayWalk {
    /// Validate the walk against a system: each corridor face must be
    /// adjacent to the edge crossed before it and the edge crossed after
    /// it. Returns the per-curve crossing counts.
    pub fn validate(&self, sys: &CurveSystem) -> Result<BTreeMap<usize, u64>, StructureError> {
        if self.steps.is_empty() {
            return Err(StructureError::MalformedOverlay(
                self.name.clone(),
                "empty walk".into(),
            ));
        }
        let (_, lookup) = sys.graph().face_of_side();
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        for (i, step) in self.steps.iter().enumerate() {
            let next = &self.steps[(i + 1) % self.steps.len()];
            let faces_here = sys.graph().faces_at_edge(&lookup, step.crossed);
            let faces_next = sys.graph().faces_at_edge(&lookup, next.crossed);
            if !faces_here.contains(&step.corridor) {
                return Err(StructureError::MalformedOverlay(
                    self.name.clone(),
                    format!(
                        "corridor face {} is not adjacent to crossed edge {}",
                        step.corridor,
                        sys.graph().edge_id(step.crossed)
                    ),
                ));
            }
            if !faces_next.contains(&step.corridor) {
                return Err(StructureError::MalformedOverlay(
                    self.name.clone(),
                    format!(
                        "corridor face {} does not reach the next crossed edge {}",
                        step.corridor,
                        sys.graph().edge_id(next.crossed)
                    ),
                ));
            }
            *counts
                .entry(sys.curve_of_half_edge(step.crossed))
                .or_default() += 1;
        }
        Ok(counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvesys::ribbon::SignedRibbonGraph;

    /// Two curves crossing once on the torus: the standard bouquet.
    pub(crate) fn torus_pair(token_a: MarkingToken, token_b: MarkingToken) -> CurveSystem {
        let graph =
            SignedRibbonGraph::new(vec![vec![0, 2, 1, 3]], &[(0, 1, false), (2, 3, false)])
                .unwrap();
        let curves = vec![
            CurveRecord {
                marked: MarkedCurve {
                    name: "a".into(),
                    two_sided: true,
                    token: token_a,
                    anchor_flip: false,
                    twist_sign: 1,
                },
                path: vec![0],
            },
            CurveRecord {
                marked: MarkedCurve {
                    name: "b".into(),
                    two_sided: true,
                    token: token_b,
                    anchor_flip: false,
                    twist_sign: 1,
                },
                path: vec![2],
            },
        ];
        CurveSystem::new(graph, curves).unwrap()
    }

    #[test]
    fn torus_pair_intersects_once() {
        let sys = torus_pair(MarkingToken::Preserving, MarkingToken::Reversing);
        assert_eq!(sys.intersection(0, 1), 1);
        assert_eq!(sys.intersection(0, 0), 0);
        assert_eq!(sys.crossings().len(), 1);
    }

    #[test]
    fn opposite_tokens_are_inconsistent() {
        let sys = torus_pair(MarkingToken::Preserving, MarkingToken::Reversing);
        assert!(sys.markings_inconsistent().unwrap());
    }

    #[test]
    fn equal_tokens_are_consistent() {
        let sys = torus_pair(MarkingToken::Preserving, MarkingToken::Preserving);
        assert!(!sys.markings_inconsistent().unwrap());
        assert_eq!(sys.inconsistency_violations().len(), 1);
    }

    #[test]
    fn torus_pair_fills() {
        let sys = torus_pair(MarkingToken::Preserving, MarkingToken::Reversing);
        assert!(sys.is_filling());
    }

    /// A lone curve whose declared face is a boundary annulus side does not
    /// fill.
    #[test]
    fn null_configuration_does_not_fill() {
        let graph = SignedRibbonGraph::new(vec![vec![0, 1]], &[(0, 1, false)]).unwrap();
        let curves = vec![CurveRecord {
            marked: MarkedCurve {
                name: "c".into(),
                two_sided: true,
                token: MarkingToken::Preserving,
                anchor_flip: false,
                twist_sign: 1,
            },
            path: vec![0],
        }];
        let mut sys = CurveSystem::new(graph, curves).unwrap();
        sys.graph_mut().boundary_faces.insert(1);
        assert!(!sys.is_filling());
    }

    #[test]
    fn one_sided_claim_checked() {
        // A curve through one negative band is one-sided; claiming two-sided
        // must be rejected.
        let graph = SignedRibbonGraph::new(vec![vec![0, 1]], &[(0, 1, true)]).unwrap();
        let curves = vec![CurveRecord {
            marked: MarkedCurve {
                name: "core".into(),
                two_sided: true,
                token: MarkingToken::Preserving,
                anchor_flip: false,
                twist_sign: 1,
            },
            path: vec![0],
        }];
        assert!(CurveSystem::new(graph, curves).is_err());
    }

    #[test]
    fn marker_vertex_allowed() {
        // A crossing-free circle realized with a 2-valent marker vertex.
        let graph = SignedRibbonGraph::new(vec![vec![0, 1]], &[(0, 1, false)]).unwrap();
        let curves = vec![CurveRecord {
            marked: MarkedCurve {
                name: "c".into(),
                two_sided: true,
                token: MarkingToken::Preserving,
                anchor_flip: false,
                twist_sign: 1,
            },
            path: vec![0],
        }];
        let sys = CurveSystem::new(graph, curves).unwrap();
        assert_eq!(sys.crossings().len(), 0);
    }
}
