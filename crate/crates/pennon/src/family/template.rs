//! The building-block template: per-block curve classes, crossing classes,
//! and the combinatorial choices (station orders, crossing handedness, band
//! signs, marking anchors) that pin one concrete filling pattern.
//!
//! The template ships as data and is validated, not trusted: assembly
//! rejects any template whose assembled systems fail the structural
//! constraints (disjointness pattern, the two declared cross-block
//! crossings, filling, inconsistent markings, the genus target).

use crate::curvesys::{
    CurveRecord, CurveSystem, FaceId, HalfEdge, MarkedCurve, MarkingToken, SignedRibbonGraph,
    Wall,
};
use crate::error::FamilyError;

pub const ALPHA_COUNT: usize = 8;
pub const BETA_COUNT: usize = 7;
/// Curve classes per block: a1..a8 then b1..b7.
pub const CURVE_CLASSES: usize = ALPHA_COUNT + BETA_COUNT;
/// Crossing classes of the bare chain pattern, before clasps.
pub const BASE_CROSSING_CLASSES: usize = 16;

pub fn alpha(i: usize) -> usize {
    debug_assert!((1..=ALPHA_COUNT).contains(&i));
    i - 1
}

pub fn beta(j: usize) -> usize {
    debug_assert!((1..=BETA_COUNT).contains(&j));
    ALPHA_COUNT + j - 1
}

pub fn class_name(c: usize) -> String {
    if c < ALPHA_COUNT {
        format!("a{}", c + 1)
    } else {
        format!("b{}", c - ALPHA_COUNT + 1)
    }
}

/// A station of a curve class: which crossing class it passes, and the
/// block offset of that crossing relative to the curve's home block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StationRef {
    pub class: usize,
    pub di: i64,
    pub dj: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveClass {
    /// Cyclic station list; arc t runs from station t to station t + 1.
    pub stations: Vec<StationRef>,
    /// Orientation-reversing bands among the arcs.
    pub negated_arcs: Vec<bool>,
    pub token: MarkingToken,
    pub anchor_flip: bool,
}

/// A crossing class: one alpha passage and one beta passage, with the
/// station positions inside each curve's list and the local handedness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossingClass {
    pub alpha_curve: usize,
    pub alpha_pos: usize,
    pub beta_curve: usize,
    pub beta_pos: usize,
    pub handedness: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTemplate {
    pub curves: Vec<CurveClass>,
    pub crossings: Vec<CrossingClass>,
}

impl BlockTemplate {
    pub fn crossing_classes(&self) -> usize {
        self.crossings.len()
    }

    /// Curve arcs per block: one per station passage.
    pub fn arcs_per_block(&self) -> usize {
        2 * self.crossings.len()
    }
}

/// An adjacent double crossing: the two curves cross and immediately cross
/// again, the second crossing inserted right after the first on curve `a`
/// and right after (or, reversed, right before) it on curve `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Clasp {
    pub a: usize,
    pub b: usize,
    pub reversed: bool,
}

/// A single extra in-block crossing between an alpha and a beta curve that
/// do not otherwise cross; the station is spliced into each curve's cyclic
/// list at the given position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chord {
    pub a: usize,
    pub b: usize,
    pub pos_a: usize,
    pub pos_b: usize,
}

/// Free combinatorial choices of the chain pattern; everything else is
/// pinned by the incidence structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateParams {
    /// Handedness bit per crossing class (base classes then clasp classes).
    pub handedness: Vec<bool>,
    /// Reverse the cyclic station order of a3 / b3 / b7.
    pub reflections: [bool; 3],
    /// Extra adjacent double crossings.
    pub clasps: Vec<Clasp>,
    /// Extra single crossings between otherwise disjoint pairs.
    pub chords: Vec<Chord>,
    /// Orientation-reversing bands: (curve class, arc index) pairs. Each
    /// curve must carry an even number so every twisted curve stays
    /// two-sided.
    pub crosscaps: Vec<(usize, usize)>,
    /// Marking anchor flips per curve class.
    pub anchor_flips: [bool; CURVE_CLASSES],
}

/// Crossing class indices of the chain pattern.
pub mod xing {
    /// a1 x b1.
    pub const X11: usize = 0;
    /// a2 x b1.
    pub const X21: usize = 1;
    /// Ladder crossings: for q in 2..=7, ladder_a(q) = a_q x b_q and
    /// ladder_b(q) = a_{q+1} x b_q.
    pub const fn ladder_a(q: usize) -> usize {
        2 * q - 2
    }
    pub const fn ladder_b(q: usize) -> usize {
        2 * q - 1
    }
    /// a3 x (b3 of the block below): the row excursion crossing.
    pub const XUP: usize = 14;
    /// a8 x (b7 of the block to the left): the column excursion crossing.
    pub const XRT: usize = 15;
}

/// Build the chain-pattern template from its free parameters.
///
/// Incidence: b_q crosses a_q and a_{q+1} once each (q = 2..7), b1 crosses
/// a1 and a2, b3 additionally crosses the a3 of the block above its home,
/// and b7 additionally crosses the a8 of the block right of its home.
pub fn chain_template(params: &TemplateParams) -> Result<BlockTemplate, FamilyError> {
    let here = |class: usize| StationRef { class, di: 0, dj: 0 };
    let mut stations: Vec<Vec<StationRef>> = vec![Vec::new(); CURVE_CLASSES];
    stations[alpha(1)] = vec![here(xing::X11)];
    stations[alpha(2)] = vec![here(xing::X21), here(xing::ladder_a(2))];
    for q in 3..=ALPHA_COUNT {
        let mut s = vec![here(xing::ladder_b(q - 1))];
        if q < ALPHA_COUNT {
            s.push(here(xing::ladder_a(q)));
        }
        stations[alpha(q)] = s;
    }
    stations[alpha(3)].push(here(xing::XUP));
    stations[alpha(8)].push(here(xing::XRT));
    stations[beta(1)] = vec![here(xing::X11), here(xing::X21)];
    for q in 2..=BETA_COUNT {
        stations[beta(q)] = vec![here(xing::ladder_a(q)), here(xing::ladder_b(q))];
    }
    stations[beta(3)].push(StationRef {
        class: xing::XUP,
        di: 0,
        dj: 1,
    });
    stations[beta(7)].push(StationRef {
        class: xing::XRT,
        di: 1,
        dj: 0,
    });

    // Reflections reverse the cyclic order of the three-station curves.
    let reflect = [
        (alpha(3), params.reflections[0]),
        (beta(3), params.reflections[1]),
        (beta(7), params.reflections[2]),
    ];
    for (c, flip) in reflect {
        if flip {
            stations[c].reverse();
        }
    }

    // Clasps: insert a fresh crossing class right after the shared
    // crossing on each participating curve.
    let mut next_class = BASE_CROSSING_CLASSES;
    for clasp in &params.clasps {
        let (ca, cb) = (clasp.a, clasp.b);
        if ca >= CURVE_CLASSES || cb >= CURVE_CLASSES || ca == cb {
            return Err(FamilyError::TemplateInvalid(format!(
                "clasp ({ca}, {cb}) out of range"
            )));
        }
        let shared: Vec<usize> = stations[ca]
            .iter()
            .filter(|st| {
                st.di == 0
                    && st.dj == 0
                    && stations[cb]
                        .iter()
                        .any(|su| su.class == st.class && su.di == 0 && su.dj == 0)
            })
            .map(|st| st.class)
            .collect();
        let &shared = shared.first().ok_or_else(|| {
            FamilyError::TemplateInvalid(format!(
                "clasp curves {} and {} share no in-block crossing",
                class_name(ca),
                class_name(cb)
            ))
        })?;
        let fresh = StationRef {
            class: next_class,
            di: 0,
            dj: 0,
        };
        next_class += 1;
        let pa = stations[ca]
            .iter()
            .position(|st| st.class == shared)
            .unwrap();
        stations[ca].insert(pa + 1, fresh);
        let pb = stations[cb]
            .iter()
            .position(|st| st.class == shared)
            .unwrap();
        if clasp.reversed {
            stations[cb].insert(pb, fresh);
        } else {
            stations[cb].insert(pb + 1, fresh);
        }
    }
    for chord in &params.chords {
        let (ca, cb) = (chord.a, chord.b);
        if !(ca < ALPHA_COUNT && (ALPHA_COUNT..CURVE_CLASSES).contains(&cb)) {
            return Err(FamilyError::TemplateInvalid(format!(
                "chord ({ca}, {cb}) must join an alpha curve to a beta curve"
            )));
        }
        let already = stations[ca].iter().any(|st| {
            stations[cb]
                .iter()
                .any(|su| su.class == st.class && st.di == 0 && st.dj == 0 && su.di == 0 && su.dj == 0)
        });
        if already {
            return Err(FamilyError::TemplateInvalid(format!(
                "chord pair ({}, {}) already crosses in-block",
                class_name(ca),
                class_name(cb)
            )));
        }
        let fresh = StationRef {
            class: next_class,
            di: 0,
            dj: 0,
        };
        next_class += 1;
        let pa = chord.pos_a % (stations[ca].len() + 1);
        let pb = chord.pos_b % (stations[cb].len() + 1);
        stations[ca].insert(pa, fresh);
        stations[cb].insert(pb, fresh);
    }
    let crossing_classes = next_class;
    if params.handedness.len() != crossing_classes {
        return Err(FamilyError::TemplateInvalid(format!(
            "expected {crossing_classes} handedness bits, got {}",
            params.handedness.len()
        )));
    }

    let mut negated: Vec<Vec<bool>> = stations.iter().map(|s| vec![false; s.len()]).collect();
    for &(c, arc) in &params.crosscaps {
        if c >= CURVE_CLASSES || arc >= stations[c].len() {
            return Err(FamilyError::TemplateInvalid(format!(
                "crosscap ({c}, {arc}) out of range"
            )));
        }
        if negated[c][arc] {
            return Err(FamilyError::TemplateInvalid(format!(
                "duplicate crosscap on arc {arc} of {}",
                class_name(c)
            )));
        }
        negated[c][arc] = true;
    }
    for (c, negs) in negated.iter().enumerate() {
        if negs.iter().filter(|&&x| x).count() % 2 != 0 {
            return Err(FamilyError::TemplateInvalid(format!(
                "{} carries an odd number of crosscap bands and would be one-sided",
                class_name(c)
            )));
        }
    }

    let curves: Vec<CurveClass> = (0..CURVE_CLASSES)
        .map(|c| CurveClass {
            stations: stations[c].clone(),
            negated_arcs: negated[c].clone(),
            token: if c < ALPHA_COUNT {
                MarkingToken::Preserving
            } else {
                MarkingToken::Reversing
            },
            anchor_flip: params.anchor_flips[c],
        })
        .collect();

    let mut crossings = Vec::with_capacity(crossing_classes);
    for x in 0..crossing_classes {
        let mut a = None;
        let mut b = None;
        for (c, cc) in curves.iter().enumerate() {
            for (pos, st) in cc.stations.iter().enumerate() {
                if st.class == x {
                    if c < ALPHA_COUNT {
                        a = Some((c, pos));
                    } else {
                        b = Some((c, pos));
                    }
                }
            }
        }
        let (alpha_curve, alpha_pos) = a.ok_or_else(|| {
            FamilyError::TemplateInvalid(format!("crossing {x} has no alpha passage"))
        })?;
        let (beta_curve, beta_pos) = b.ok_or_else(|| {
            FamilyError::TemplateInvalid(format!("crossing {x} has no beta passage"))
        })?;
        crossings.push(CrossingClass {
            alpha_curve,
            alpha_pos,
            beta_curve,
            beta_pos,
            handedness: params.handedness[x],
        });
    }
    Ok(BlockTemplate { curves, crossings })
}

/// An assembled family system: the curve system on the closed surface made
/// of n x k blocks, plus the bookkeeping the family operations need.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub n: u64,
    pub k: u64,
    pub system: CurveSystem,
    /// Per column: the two marked wrap faces (fixed by the row rotation).
    pub marked_faces: Vec<[FaceId; 2]>,
    /// Column walls c[i][j] separating column i from column i + 1.
    pub walls: Vec<Wall>,
    pub rho1: Vec<usize>,
    pub rho2: Vec<usize>,
}

impl Assembled {
    pub fn curve_id(&self, i: u64, j: u64, class: usize) -> usize {
        let (n, k) = (self.n, self.k);
        ((((i % n) * k + (j % k)) as usize) * CURVE_CLASSES) + class
    }

    pub fn block_of_curve(&self, idx: usize) -> (u64, u64, usize) {
        let c = idx % CURVE_CLASSES;
        let block = idx / CURVE_CLASSES;
        let j = block as u64 % self.k;
        let i = block as u64 / self.k;
        (i, j, c)
    }

    pub fn basis(&self) -> Vec<usize> {
        (0..self.system.curve_count()).collect()
    }

    /// Total intersection of each curve with the twist family (row 0), and
    /// its maximum: the degree constant the upper-bound chain consumes.
    pub fn degree_constant(&self) -> u64 {
        let n_curves = self.system.curve_count();
        let row0: Vec<usize> = (0..n_curves)
            .filter(|&idx| self.block_of_curve(idx).1 == 0)
            .collect();
        (0..n_curves)
            .map(|d| row0.iter().map(|&c| self.system.intersection(c, d)).sum())
            .max()
            .unwrap_or(0)
    }
}

fn wrap(v: i64, m: i64) -> i64 {
    ((v % m) + m) % m
}

/// Face classes of the doubly periodic assembly, each with its drift: the
/// block translation picked up by one period of the face walk. A face
/// class of drift (p, q) contributes nk / t faces to the (n, k) quotient,
/// where t is the least multiple with t(p, q) = 0 mod (n, k), so the
/// quotient face count for every (n, k) is readable from this list.
pub fn periodic_face_classes(template: &BlockTemplate) -> Result<Vec<(i64, i64)>, FamilyError> {
    let arc_offset = arc_offsets(template)?;
    let arcs = template.arcs_per_block();
    // Arc data: curve, station span and sign.
    let mut arc_curve = vec![0usize; arcs];
    let mut arc_neg = vec![false; arcs];
    // Offsets of the two ends of each arc, relative to the curve's home.
    let mut arc_end_off = vec![((0i64, 0i64), (0i64, 0i64)); arcs];
    for (c, cc) in template.curves.iter().enumerate() {
        let len = cc.stations.len();
        for t in 0..len {
            let g = arc_offset[c] + t;
            arc_curve[g] = c;
            arc_neg[g] = cc.negated_arcs[t];
            let from = cc.stations[t];
            let to = cc.stations[(t + 1) % len];
            arc_end_off[g] = ((from.di, from.dj), (to.di, to.dj));
        }
    }
    // Rotation slots per crossing class: (local half-edge, vertex offset of
    // that half-edge's instance relative to its own curve's home).
    // Half-edge 2g = departure end of arc g, 2g + 1 = arrival end.
    let mut rot: Vec<Vec<(u32, (i64, i64))>> = Vec::with_capacity(template.crossings.len());
    for x in &template.crossings {
        let passage = |curve: usize, pos: usize| -> ((u32, (i64, i64)), (u32, (i64, i64))) {
            let len = template.curves[curve].stations.len();
            let st = template.curves[curve].stations[pos];
            let arc_in = arc_offset[curve] + (pos + len - 1) % len;
            let arc_out = arc_offset[curve] + pos;
            (
                ((2 * arc_in + 1) as u32, (st.di, st.dj)),
                ((2 * arc_out) as u32, (st.di, st.dj)),
            )
        };
        let (a_in, a_out) = passage(x.alpha_curve, x.alpha_pos);
        let (b_in, b_out) = passage(x.beta_curve, x.beta_pos);
        rot.push(if x.handedness {
            vec![a_in, b_out, a_out, b_in]
        } else {
            vec![a_in, b_in, a_out, b_out]
        });
    }
    // For each local half-edge: its crossing class, rotation position, and
    // vertex offset relative to its curve home.
    let mut at = vec![(usize::MAX, 0usize, (0i64, 0i64)); 2 * arcs];
    for (x, slots) in rot.iter().enumerate() {
        for (pos, &(h, off)) in slots.iter().enumerate() {
            at[h as usize] = (x, pos, off);
        }
    }
    for (h, entry) in at.iter().enumerate() {
        if entry.0 == usize::MAX {
            return Err(FamilyError::TemplateInvalid(format!(
                "half-edge {h} missing from every rotation"
            )));
        }
    }

    // Trace states: (half-edge, flip) with the home offset of the current
    // arc's curve carried alongside. One step mirrors the quotient tracer.
    let step = |h: u32, f: bool, home: (i64, i64)| -> (u32, bool, (i64, i64)) {
        let g = (h / 2) as usize;
        let f2 = f ^ arc_neg[g];
        let h2 = h ^ 1;
        let (x, pos, off) = at[h2 as usize];
        // Vertex instance of h2: home + off.
        let vertex = (home.0 + off.0, home.1 + off.1);
        let slots = &rot[x];
        let next_pos = if f2 { (pos + 3) % 4 } else { (pos + 1) % 4 };
        let (h3, off3) = slots[next_pos];
        (h3, f2, (vertex.0 - off3.0, vertex.1 - off3.1))
    };

    let n_states = 4 * arcs;
    let mut seen = vec![false; n_states];
    let sid = |h: u32, f: bool| -> usize { (h as usize) << 1 | f as usize };
    let mut classes: Vec<(usize, (i64, i64))> = Vec::new(); // (min state, drift)
    let mut class_of = vec![usize::MAX; n_states];
    for start in 0..n_states {
        if seen[start] {
            continue;
        }
        let (mut h, mut f) = ((start >> 1) as u32, start & 1 == 1);
        let mut home = (0i64, 0i64);
        let idx = classes.len();
        loop {
            let s = sid(h, f);
            if seen[s] {
                break;
            }
            seen[s] = true;
            class_of[s] = idx;
            let (h2, f2, home2) = step(h, f, home);
            h = h2;
            f = f2;
            home = home2;
        }
        debug_assert_eq!(sid(h, f), start, "periodic walk must close on its start");
        classes.push((start, home));
    }
    // Mirror-pair the orbit classes; keep one drift per geometric face.
    let mut out = Vec::new();
    let mut used = vec![false; classes.len()];
    for (idx, &(start, drift)) in classes.iter().enumerate() {
        if used[idx] {
            continue;
        }
        used[idx] = true;
        let (h, f) = ((start >> 1) as u32, start & 1 == 1);
        let g = (h / 2) as usize;
        let mirror = sid(h ^ 1, f ^ arc_neg[g] ^ true);
        let midx = class_of[mirror];
        if midx != idx {
            used[midx] = true;
        }
        out.push(drift);
    }
    Ok(out)
}

/// Quotient face count implied by the periodic classes.
pub fn face_count_from_classes(classes: &[(i64, i64)], n: u64, k: u64) -> u64 {
    let (n, k) = (n as i64, k as i64);
    classes
        .iter()
        .map(|&(p, q)| {
            let tp = if p == 0 { 1 } else { n / num_integer::gcd(p.abs(), n) };
            let tq = if q == 0 { 1 } else { k / num_integer::gcd(q.abs(), k) };
            let t = num_integer::lcm(tp, tq);
            (n * k / t) as u64
        })
        .sum()
}

fn arc_offsets(template: &BlockTemplate) -> Result<Vec<usize>, FamilyError> {
    let mut arc_offset = vec![0usize; CURVE_CLASSES + 1];
    for c in 0..CURVE_CLASSES {
        arc_offset[c + 1] = arc_offset[c] + template.curves[c].stations.len();
    }
    if arc_offset[CURVE_CLASSES] != template.arcs_per_block() {
        return Err(FamilyError::TemplateInvalid(format!(
            "expected {} arcs per block, found {}",
            template.arcs_per_block(),
            arc_offset[CURVE_CLASSES]
        )));
    }
    Ok(arc_offset)
}

/// Arc g has departure half-edge 2g and arrival half-edge 2g + 1.
fn departure(g: usize) -> HalfEdge {
    (2 * g) as HalfEdge
}

fn arrival(g: usize) -> HalfEdge {
    (2 * g + 1) as HalfEdge
}

/// Just the signed ribbon graph of the n x k assembly (fast path for
/// template searches and validation).
pub fn assemble_graph(
    template: &BlockTemplate,
    n: u64,
    k: u64,
) -> Result<SignedRibbonGraph, FamilyError> {
    if n < 1 || k < 3 {
        return Err(FamilyError::ParameterRange(format!(
            "need n >= 1 and k >= 3, got n = {n}, k = {k}"
        )));
    }
    let (ni, ki) = (n as i64, k as i64);
    let blocks = (n * k) as usize;
    let block_index = |i: i64, j: i64| -> usize { (wrap(i, ni) * ki + wrap(j, ki)) as usize };
    let arc_offset = arc_offsets(template)?;
    let arcs_per_block = template.arcs_per_block();
    let arc_global =
        |b: usize, c: usize, t: usize| -> usize { b * arcs_per_block + arc_offset[c] + t };

    let mut edges: Vec<(HalfEdge, HalfEdge, bool)> = Vec::with_capacity(blocks * arcs_per_block);
    for b in 0..blocks {
        for (c, cc) in template.curves.iter().enumerate() {
            for t in 0..cc.stations.len() {
                let g = arc_global(b, c, t);
                edges.push((departure(g), arrival(g), cc.negated_arcs[t]));
            }
        }
    }

    let mut rotations: Vec<Vec<HalfEdge>> = Vec::with_capacity(blocks * template.crossing_classes());
    for bi in 0..ni {
        for bj in 0..ki {
            for x in &template.crossings {
                // The curve whose station sits at this vertex lives in the
                // block shifted back by the station's offset.
                let passage = |curve: usize, pos: usize| -> (HalfEdge, HalfEdge) {
                    let st = template.curves[curve].stations[pos];
                    let home = block_index(bi - st.di, bj - st.dj);
                    let len = template.curves[curve].stations.len();
                    let arc_in = arc_global(home, curve, (pos + len - 1) % len);
                    let arc_out = arc_global(home, curve, pos);
                    (arrival(arc_in), departure(arc_out))
                };
                let (a_in, a_out) = passage(x.alpha_curve, x.alpha_pos);
                let (b_in, b_out) = passage(x.beta_curve, x.beta_pos);
                rotations.push(if x.handedness {
                    vec![a_in, b_out, a_out, b_in]
                } else {
                    vec![a_in, b_in, a_out, b_out]
                });
            }
        }
    }

    SignedRibbonGraph::new(rotations, &edges)
        .map_err(|e| FamilyError::AssemblyContract(format!("graph construction: {e}")))
}

/// The curve system of the n x k assembly without marked faces or walls
/// (cheap path for validators that only need crossings and markings).
pub fn assemble_system_raw(
    template: &BlockTemplate,
    n: u64,
    k: u64,
) -> Result<CurveSystem, FamilyError> {
    let graph = assemble_graph(template, n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    let blocks = (n * k) as usize;
    let block_index = |i: i64, j: i64| -> usize { (wrap(i, ni) * ki + wrap(j, ki)) as usize };
    let arc_offset = arc_offsets(template)?;
    let arcs_per_block = template.arcs_per_block();
    let arc_global =
        |b: usize, c: usize, t: usize| -> usize { b * arcs_per_block + arc_offset[c] + t };
    let mut records: Vec<CurveRecord> = Vec::with_capacity(blocks * CURVE_CLASSES);
    for bi in 0..ni {
        for bj in 0..ki {
            let b = block_index(bi, bj);
            for (c, cc) in template.curves.iter().enumerate() {
                let len = cc.stations.len();
                let path: Vec<HalfEdge> = (0..len)
                    .map(|t| arrival(arc_global(b, c, (t + len - 1) % len)))
                    .collect();
                let two_sided = cc.negated_arcs.iter().filter(|&&x| x).count() % 2 == 0;
                records.push(CurveRecord {
                    marked: MarkedCurve {
                        name: format!("{}[{bi},{bj}]", class_name(c)),
                        two_sided,
                        token: cc.token,
                        anchor_flip: cc.anchor_flip,
                        twist_sign: 1,
                    },
                    path,
                });
            }
        }
    }
    CurveSystem::new(graph, records)
        .map_err(|e| FamilyError::AssemblyContract(format!("curve system: {e}")))
}

/// Assemble the closed system of n x k translated blocks.
pub fn assemble(template: &BlockTemplate, n: u64, k: u64) -> Result<Assembled, FamilyError> {
    let graph = assemble_graph(template, n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    let blocks = (n * k) as usize;
    let block_index = |i: i64, j: i64| -> usize { (wrap(i, ni) * ki + wrap(j, ki)) as usize };
    let arc_offset = arc_offsets(template)?;
    let arcs_per_block = template.arcs_per_block();
    let arc_global =
        |b: usize, c: usize, t: usize| -> usize { b * arcs_per_block + arc_offset[c] + t };

    let mut records: Vec<CurveRecord> = Vec::with_capacity(blocks * CURVE_CLASSES);
    for bi in 0..ni {
        for bj in 0..ki {
            let b = block_index(bi, bj);
            for (c, cc) in template.curves.iter().enumerate() {
                let len = cc.stations.len();
                let path: Vec<HalfEdge> = (0..len)
                    .map(|t| arrival(arc_global(b, c, (t + len - 1) % len)))
                    .collect();
                let two_sided = cc.negated_arcs.iter().filter(|&&x| x).count() % 2 == 0;
                records.push(CurveRecord {
                    marked: MarkedCurve {
                        name: format!("{}[{bi},{bj}]", class_name(c)),
                        two_sided,
                        token: cc.token,
                        anchor_flip: cc.anchor_flip,
                        twist_sign: 1,
                    },
                    path,
                });
            }
        }
    }

    let mut system = CurveSystem::new(graph, records)
        .map_err(|e| FamilyError::AssemblyContract(format!("curve system: {e}")))?;

    let id_of = |i: i64, j: i64, c: usize| -> usize { block_index(i, j) * CURVE_CLASSES + c };
    let mut rho1 = vec![0usize; blocks * CURVE_CLASSES];
    let mut rho2 = vec![0usize; blocks * CURVE_CLASSES];
    for bi in 0..ni {
        for bj in 0..ki {
            for c in 0..CURVE_CLASSES {
                rho1[id_of(bi, bj, c)] = id_of(bi + 1, bj, c);
                rho2[id_of(bi, bj, c)] = id_of(bi, bj + 1, c);
            }
        }
    }
    system.register_rotation("rho1", rho1.clone());
    system.register_rotation("rho2", rho2.clone());
    let invert = |perm: &[usize]| -> Vec<usize> {
        let mut inv = vec![0usize; perm.len()];
        for (i, &img) in perm.iter().enumerate() {
            inv[img] = i;
        }
        inv
    };
    system.register_rotation("rho1_inv", invert(&rho1));
    system.register_rotation("rho2_inv", invert(&rho2));

    // Marked wrap faces: faces fixed by the row rotation, two per column.
    let (faces, lookup) = system.graph().face_of_side();
    let shift_half_edge = |h: HalfEdge, dj: i64| -> HalfEdge {
        let g = (h / 2) as usize;
        let within = g % arcs_per_block;
        let b = g / arcs_per_block;
        let (bi, bj) = ((b as i64) / ki, (b as i64) % ki);
        let nb = block_index(bi, bj + dj);
        (2 * (nb * arcs_per_block + within)) as HalfEdge + (h & 1)
    };
    let mut per_column: Vec<Vec<FaceId>> = vec![Vec::new(); n as usize];
    for (fid, face) in faces.iter().enumerate() {
        let (h, f) = face.sides[0];
        let image = shift_half_edge(h, 1);
        let image_fid = lookup[(image as usize) << 1 | (f as usize)];
        if image_fid == fid {
            let col = ((h / 2) as usize / arcs_per_block) / k as usize;
            per_column[col].push(fid);
        }
    }
    let mut marked_faces = Vec::with_capacity(n as usize);
    for (col, fids) in per_column.iter().enumerate() {
        if fids.len() != 2 {
            return Err(FamilyError::AssemblyContract(format!(
                "column {col}: expected 2 row-rotation-invariant faces, found {}",
                fids.len()
            )));
        }
        marked_faces.push([fids[0], fids[1]]);
        system.graph_mut().marks.insert(fids[0], 1);
        system.graph_mut().marks.insert(fids[1], 1);
    }

    // Column walls: one per (i, j), crossing the two arcs of b7[i, j] that
    // run between column i and column i + 1.
    let b7 = beta(7);
    let b7_stations = &template.curves[b7].stations;
    let crossing_arcs: Vec<usize> = (0..b7_stations.len())
        .filter(|&t| {
            let from = b7_stations[t];
            let to = b7_stations[(t + 1) % b7_stations.len()];
            from.di != to.di
        })
        .collect();
    if crossing_arcs.len() != 2 {
        return Err(FamilyError::TemplateInvalid(format!(
            "b7 must cross the column wall exactly twice, found {} crossing arcs",
            crossing_arcs.len()
        )));
    }
    let mut walls = Vec::with_capacity(blocks);
    for bi in 0..ni {
        for bj in 0..ki {
            let b = block_index(bi, bj);
            walls.push(Wall {
                name: format!("c[{bi},{bj}]"),
                crossed: [
                    departure(arc_global(b, b7, crossing_arcs[0])),
                    departure(arc_global(b, b7, crossing_arcs[1])),
                ],
            });
        }
    }

    Ok(Assembled {
        n,
        k,
        system,
        marked_faces,
        walls,
        rho1,
        rho2,
    })
}
