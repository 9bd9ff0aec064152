//! Orientation double covers of signed ribbon graphs and curve systems:
//! construction, deck involution, curve and word lifting, and the
//! signature-level cover arithmetic.

use std::collections::BTreeMap;

use crate::curvesys::{
    CurveRecord, CurveSystem, HalfEdge, MarkedCurve, SignedRibbonGraph, SurfaceSignature,
};
use crate::error::{CoverError, StructureError};
use crate::penner::{PennerMove, PennerWord};

/// The orientation double cover of a signed ribbon graph. Sheets are
/// indexed by local orientation; a negative band swaps sheets and every
/// cover edge is positive, so the total space is orientable by
/// construction. Cover half-edge ids are `2 * base + sheet`, which places
/// the lowest base half-edge on sheet 0.
#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub total: SignedRibbonGraph,
    /// projection[cover half-edge] = base half-edge.
    pub projection: Vec<HalfEdge>,
    /// Fixed-point-free deck involution on cover half-edges.
    pub involution: Vec<HalfEdge>,
}

impl DoubleCover {
    pub fn sheet_of(&self, cover_half_edge: HalfEdge) -> u8 {
        (cover_half_edge & 1) as u8
    }
}

/// Build the orientation double cover: two copies of every vertex, the
/// second with reversed rotation, and edges joining sheets according to
/// band signs.
pub fn double_cover(g: &SignedRibbonGraph) -> DoubleCover {
    let lift = |h: HalfEdge, sheet: u8| -> HalfEdge { 2 * h + sheet as u32 };
    let mut rotations = Vec::with_capacity(2 * g.vertex_count());
    for v in 0..g.vertex_count() as u32 {
        rotations.push(g.rotation(v).iter().map(|&h| lift(h, 0)).collect());
    }
    for v in 0..g.vertex_count() as u32 {
        rotations.push(g.rotation(v).iter().rev().map(|&h| lift(h, 1)).collect());
    }
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    for h in g.edge_ids() {
        let o = g.opposite(h);
        if g.negated(h) {
            edges.push((lift(h, 0), lift(o, 1), false));
            edges.push((lift(h, 1), lift(o, 0), false));
        } else {
            edges.push((lift(h, 0), lift(o, 0), false));
            edges.push((lift(h, 1), lift(o, 1), false));
        }
    }
    let total = SignedRibbonGraph::new(rotations, &edges).expect("cover construction is valid");
    let n = 2 * g.half_edge_count();
    let projection = (0..n as u32).map(|ch| ch / 2).collect();
    let involution = (0..n as u32).map(|ch| ch ^ 1).collect();
    DoubleCover {
        total,
        projection,
        involution,
    }
}

/// Lift of one realized curve: either two disjoint closed lifts (trivial
/// sign holonomy) or a single connected lift of doubled length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveLift {
    TwoSidedPair([Vec<HalfEdge>; 2]),
    OneSidedDouble(Vec<HalfEdge>),
}

impl CurveLift {
    pub fn component_count(&self) -> usize {
        match self {
            CurveLift::TwoSidedPair(_) => 2,
            CurveLift::OneSidedDouble(_) => 1,
        }
    }
}

/// Walk a base curve path through the cover starting on `sheet`.
fn lift_path(g: &SignedRibbonGraph, path: &[HalfEdge], sheet: u8) -> (Vec<HalfEdge>, u8) {
    let mut out = Vec::with_capacity(path.len());
    let mut s = sheet;
    for &h in path {
        s ^= g.negated(h) as u8;
        out.push(2 * h + s as u32);
    }
    (out, s)
}

/// Lift a curve of the base system; the sidedness verdict must agree with
/// the curve's stored `two_sided` flag.
pub fn lift_curve(sys: &CurveSystem, curve: usize) -> CurveLift {
    let g = sys.graph();
    let rec = &sys.curves()[curve];
    let (lift0, end0) = lift_path(g, &rec.path, 0);
    if end0 == 0 {
        let (lift1, _) = lift_path(g, &rec.path, 1);
        CurveLift::TwoSidedPair([lift0, lift1])
    } else {
        let (lift1, _) = lift_path(g, &rec.path, 1);
        let mut doubled = lift0;
        doubled.extend(lift1);
        CurveLift::OneSidedDouble(doubled)
    }
}

/// The base system lifted to the double cover: every curve contributes its
/// lifts, and registered rotations lift sheet-preserving (the equivariant
/// construction makes rotated curves literal translates, so the
/// orientation-preserving lift fixes sheets).
pub struct LiftedSystem {
    pub cover: DoubleCover,
    pub system: CurveSystem,
    /// lifted index of (base curve, sheet); one-sided curves appear once
    /// under (curve, 0).
    pub lift_index: BTreeMap<(usize, u8), usize>,
}

pub fn lift_system(sys: &CurveSystem) -> Result<LiftedSystem, StructureError> {
    let cover = double_cover(sys.graph());
    let mut records = Vec::new();
    let mut lift_index = BTreeMap::new();
    for (ci, rec) in sys.curves().iter().enumerate() {
        match lift_curve(sys, ci) {
            CurveLift::TwoSidedPair([p0, p1]) => {
                for (sheet, path) in [(0u8, p0), (1u8, p1)] {
                    lift_index.insert((ci, sheet), records.len());
                    records.push(CurveRecord {
                        marked: MarkedCurve {
                            name: format!("{}^{}", rec.marked.name, sheet),
                            two_sided: true,
                            token: rec.marked.token,
                            anchor_flip: rec.marked.anchor_flip,
                            twist_sign: rec.marked.twist_sign,
                        },
                        path,
                    });
                }
            }
            CurveLift::OneSidedDouble(path) => {
                lift_index.insert((ci, 0), records.len());
                records.push(CurveRecord {
                    marked: MarkedCurve {
                        name: format!("{}~", rec.marked.name),
                        two_sided: true,
                        token: rec.marked.token,
                        anchor_flip: rec.marked.anchor_flip,
                        twist_sign: rec.marked.twist_sign,
                    },
                    path,
                });
            }
        }
    }
    let mut system = CurveSystem::new(cover.total.clone(), records)?;
    // Lift registered rotations sheet-preserving.
    let names: Vec<String> = sys.rotation_names().map(|s| s.to_string()).collect();
    for name in names {
        let perm = sys.rotation_perm(&name).unwrap().to_vec();
        let mut lifted = vec![0usize; system.curve_count()];
        for (&(ci, sheet), &li) in &lift_index {
            let image = perm[ci];
            let target = *lift_index
                .get(&(image, sheet))
                .or_else(|| lift_index.get(&(image, 0)))
                .expect("rotation image lift");
            lifted[li] = target;
        }
        system.register_rotation(&name, lifted);
    }
    Ok(LiftedSystem {
        cover,
        system,
        lift_index,
    })
}

/// Lift a twist word: each twist becomes the commuting pair of twists about
/// the two lifts, rotations lift by name, and a twist about a curve with a
/// single one-sided lift is an error.
pub fn lift_word(
    base: &CurveSystem,
    lifted: &LiftedSystem,
    word: &PennerWord,
) -> Result<PennerWord, CoverError> {
    let mut basis = Vec::new();
    for &c in &word.basis {
        for sheet in [0u8, 1u8] {
            if let Some(&li) = lifted.lift_index.get(&(c, sheet)) {
                basis.push(li);
            }
        }
    }
    let mut moves = Vec::new();
    for mv in &word.moves {
        match mv {
            PennerMove::Twist { curve, power } => {
                let c0 = lifted.lift_index.get(&(*curve, 0));
                let c1 = lifted.lift_index.get(&(*curve, 1));
                match (c0, c1) {
                    (Some(&a), Some(&b)) => {
                        moves.push(PennerMove::Twist {
                            curve: a,
                            power: *power,
                        });
                        moves.push(PennerMove::Twist {
                            curve: b,
                            power: *power,
                        });
                    }
                    _ => {
                        return Err(CoverError::OneSidedLift(
                            base.curves()[*curve].marked.name.clone(),
                        ))
                    }
                }
            }
            PennerMove::Rotate { name } => {
                moves.push(PennerMove::Rotate { name: name.clone() });
            }
        }
    }
    Ok(PennerWord { moves, basis })
}

/// Cover arithmetic on signatures: a closed non-orientable surface of genus
/// g with n marked points is double covered by the orientable surface of
/// genus g - 1 with 2n marked points.
pub fn cover_signature(sig: &SurfaceSignature) -> Result<SurfaceSignature, CoverError> {
    if sig.orientable || sig.boundary_components != 0 {
        return Err(CoverError::NotNonOrientable);
    }
    let genus = sig.genus - 1;
    Ok(SurfaceSignature {
        orientable: true,
        genus,
        marked_points: 2 * sig.marked_points,
        boundary_components: 0,
        euler_characteristic: 2 * sig.euler_characteristic,
    })
}

/// Transported lower bound: an orientable-case constant B1 for genus G
/// surfaces gives B1 / (g - 1) on the non-orientable side by passing to the
/// cover. Conditional on the supplied constant.
pub fn lower_bound_report(
    genus: u64,
    b1: num_rational::BigRational,
) -> Result<num_rational::BigRational, CoverError> {
    if genus < 3 {
        return Err(CoverError::GenusRange(genus));
    }
    let cover_genus = num_rational::BigRational::from_integer((genus as i64 - 1).into());
    Ok(b1 / cover_genus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvesys::MarkingToken;

    fn projective_loop() -> SignedRibbonGraph {
        SignedRibbonGraph::new(vec![vec![0, 1]], &[(0, 1, true)]).unwrap()
    }

    #[test]
    fn cover_of_projective_plane_is_sphere() {
        let g = projective_loop();
        let dc = double_cover(&g);
        assert!(dc.total.is_connected());
        assert!(dc.total.orientability());
        assert_eq!(dc.total.euler_characteristic(), 2);
        assert_eq!(2 * g.euler_characteristic(), dc.total.euler_characteristic());
        // Involution is fixed-point-free and compatible with projection.
        for h in 0..dc.involution.len() as u32 {
            let i = dc.involution[h as usize];
            assert_ne!(i, h);
            assert_eq!(dc.involution[i as usize], h);
            assert_eq!(dc.projection[i as usize], dc.projection[h as usize]);
        }
    }

    #[test]
    fn cover_of_orientable_base_is_two_copies() {
        let g = SignedRibbonGraph::new(vec![vec![0, 2, 1, 3]], &[(0, 1, false), (2, 3, false)])
            .unwrap();
        let dc = double_cover(&g);
        assert_eq!(dc.total.components().len(), 2);
        assert!(dc.total.orientability());
        assert_eq!(dc.total.euler_characteristic(), 2 * g.euler_characteristic());
    }

    #[test]
    fn one_sided_core_has_single_doubled_lift() {
        let g = projective_loop();
        let sys = CurveSystem::new(
            g,
            vec![CurveRecord {
                marked: MarkedCurve {
                    name: "core".into(),
                    two_sided: false,
                    token: MarkingToken::Preserving,
                    anchor_flip: false,
                    twist_sign: 1,
                },
                path: vec![0],
            }],
        )
        .unwrap();
        let lift = lift_curve(&sys, 0);
        assert_eq!(lift.component_count(), 1);
        match lift {
            CurveLift::OneSidedDouble(path) => assert_eq!(path.len(), 2),
            _ => unreachable!(),
        }
    }

    #[test]
    fn two_sided_curves_have_two_lifts() {
        let g = SignedRibbonGraph::new(vec![vec![0, 2, 1, 3]], &[(0, 1, false), (2, 3, false)])
            .unwrap();
        let mk = |name: &str| MarkedCurve {
            name: name.into(),
            two_sided: true,
            token: MarkingToken::Preserving,
            anchor_flip: false,
            twist_sign: 1,
        };
        let sys = CurveSystem::new(
            g,
            vec![
                CurveRecord {
                    marked: mk("a"),
                    path: vec![0],
                },
                CurveRecord {
                    marked: mk("b"),
                    path: vec![2],
                },
            ],
        )
        .unwrap();
        assert_eq!(lift_curve(&sys, 0).component_count(), 2);
        let lifted = lift_system(&sys).unwrap();
        assert_eq!(lifted.system.curve_count(), 4);
        // Lifted intersections: each crossing lifts to one crossing per
        // sheet, pairing matching-sheet lifts.
        let total: u64 = (0..4)
            .flat_map(|a| (0..4).map(move |b| (a, b)))
            .filter(|&(a, b)| a < b)
            .map(|(a, b)| lifted.system.intersection(a, b))
            .sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn cover_signature_arithmetic() {
        // N_3 closed -> S_2.
        let n3 = SurfaceSignature {
            orientable: false,
            genus: 3,
            marked_points: 0,
            boundary_components: 0,
            euler_characteristic: -1,
        };
        let c = cover_signature(&n3).unwrap();
        assert!(c.orientable);
        assert_eq!(c.genus, 2);
        assert_eq!(c.euler_characteristic, -2);
        assert_eq!(c.chi_from_parts(), c.euler_characteristic);
        // N_{g,n} -> S_{g-1,2n} chi identity.
        let g = 42u64;
        let n = 2u64;
        let sig = SurfaceSignature {
            orientable: false,
            genus: g,
            marked_points: n,
            boundary_components: 0,
            euler_characteristic: 2 - g as i64,
        };
        let c = cover_signature(&sig).unwrap();
        assert_eq!(c.genus, g - 1);
        assert_eq!(c.marked_points, 2 * n);
        assert_eq!(c.euler_characteristic, 2 * (2 - g as i64));
        assert_eq!(c.euler_characteristic, 2 - 2 * (g as i64 - 1));
    }

    #[test]
    fn lower_bound_transport() {
        let one = num_rational::BigRational::from_integer(1.into());
        let half = num_rational::BigRational::new(1.into(), 2.into());
        assert_eq!(lower_bound_report(3, one.clone()).unwrap(), half);
        assert_eq!(
            lower_bound_report(5, num_rational::BigRational::from_integer(0.into())).unwrap(),
            num_rational::BigRational::from_integer(0.into())
        );
        assert!(matches!(
            lower_bound_report(2, one),
            Err(CoverError::GenusRange(2))
        ));
    }
}
