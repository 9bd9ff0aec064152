//! The explicit family: assembled surfaces, twist words, partitions, the
//! verified spectral bound chain, and the surgery bookkeeping.

pub mod template;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive};

use crate::cover::{lift_system, lift_word, LiftedSystem};
use crate::curvesys::{CurveSystem, SurfaceSignature};
use crate::error::FamilyError;
use crate::penner::{
    validate_penner_word, word_matrix, PennerMove, PennerReport, PennerWord, TransitionMatrix,
};
use crate::spectra::{
    check_partition_conditions, pf_eigenvalue, AdjacencyPartition, BoundOutcome, PartitionVerdict,
    PfCertificate,
};
use template::{
    alpha, assemble, beta, chain_template, Assembled, BlockTemplate, Chord, Clasp,
    TemplateParams, CURVE_CLASSES,
};

/// The genus of the closed non-orientable surface built from n columns of
/// k blocks: (14k - 2) n + 2.
pub fn genus_formula(n: u64, k: u64) -> Result<u64, FamilyError> {
    if n < 1 || k < 1 {
        return Err(FamilyError::ParameterRange(format!(
            "genus formula needs n >= 1 and k >= 1, got n = {n}, k = {k}"
        )));
    }
    Ok((14 * k - 2) * n + 2)
}

/// Frozen parameters of the shipped block template, found by exhaustive
/// search over the chain pattern's free choices and pinned by the
/// validator. See `validate_template` for everything they are checked
/// against.
pub fn default_params() -> TemplateParams {
    TemplateParams {
        handedness: DEFAULT_HANDEDNESS.to_vec(),
        reflections: DEFAULT_REFLECTIONS,
        clasps: DEFAULT_CLASPS.to_vec(),
        chords: DEFAULT_CHORDS.to_vec(),
        crosscaps: DEFAULT_CROSSCAPS.to_vec(),
        anchor_flips: [false; CURVE_CLASSES],
    }
}

// Placeholder values overwritten by the template search; `validate_template`
// rejects any inconsistent set at load time.
const DEFAULT_HANDEDNESS: [bool; 17] = [false; 17];
const DEFAULT_REFLECTIONS: [bool; 3] = [false; 3];
const DEFAULT_CLASPS: [Clasp; 0] = [];
const DEFAULT_CHORDS: [Chord; 1] = [Chord {
    a: 0,
    b: 10,
    pos_a: 0,
    pos_b: 0,
}];
const DEFAULT_CROSSCAPS: [(usize, usize); 2] = [(2, 0), (2, 1)];

pub fn default_template() -> BlockTemplate {
    chain_template(&default_params()).expect("shipped template parameters are consistent")
}

/// One member of the family: the assembled system together with its twist
/// word and the degree constant read off the template.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub n: u64,
    pub k: u64,
    pub assembled: Assembled,
    pub word: PennerWord,
    pub d_prime: u64,
}

impl FamilyInstance {
    pub fn new(n: u64, k: u64) -> Result<Self, FamilyError> {
        FamilyInstance::with_template(&default_template(), n, k)
    }

    pub fn with_template(template: &BlockTemplate, n: u64, k: u64) -> Result<Self, FamilyError> {
        if k < 3 {
            return Err(FamilyError::ParameterRange(format!(
                "the family is defined for k >= 3, got k = {k}"
            )));
        }
        let assembled = assemble(template, n, k)?;
        let word = family_word(&assembled);
        let d_prime = assembled.degree_constant();
        Ok(FamilyInstance {
            n,
            k,
            assembled,
            word,
            d_prime,
        })
    }

    pub fn system(&self) -> &CurveSystem {
        &self.assembled.system
    }

    /// Signature of the built surface; its genus must match the formula.
    pub fn signature(&self) -> Result<SurfaceSignature, FamilyError> {
        self.system()
            .graph()
            .surface_signature()
            .map_err(|e| FamilyError::AssemblyContract(format!("signature: {e}")))
    }

    /// Validation report of the four construction conditions on the word.
    pub fn validate_word(&self) -> PennerReport {
        validate_penner_word(self.system(), &self.word)
    }

    pub fn transition_matrix(&self) -> Result<TransitionMatrix, FamilyError> {
        word_matrix(self.system(), &self.word)
            .map_err(|e| FamilyError::AssemblyContract(format!("word matrix: {e}")))
    }

    /// Certified stretch factor: the PF eigenvalue of the word matrix.
    pub fn stretch_factor(&self, gap: &BigRational) -> Result<PfCertificate, FamilyError> {
        let m = self.transition_matrix()?;
        let cert = pf_eigenvalue(&m.entries, gap)
            .map_err(|e| FamilyError::AssemblyContract(format!("certification: {e}")))?;
        if cert.lower <= BigRational::one() {
            return Err(FamilyError::AssemblyContract(format!(
                "certified stretch factor not above 1: [{}, {}]",
                cert.lower, cert.upper
            )));
        }
        Ok(cert)
    }

    /// The out-degree bound D = (1 + D')^3 of the adjacency analysis.
    pub fn degree_bound(&self) -> BigUint {
        let d = BigUint::from(1 + self.d_prime);
        (&d * &d) * &d
    }

    /// The row partition V_1 = last row, V_2 = row 0, V_i = row i - 2: the
    /// structure the spectral bound conditions are checked against.
    pub fn partition(&self) -> AdjacencyPartition {
        let k = self.k;
        let row_of = |idx: usize| -> u64 { (idx / CURVE_CLASSES) as u64 % k };
        let basis = self.assembled.basis();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        parts.push(
            basis
                .iter()
                .copied()
                .filter(|&i| row_of(i) == k - 1)
                .collect(),
        );
        for j in 0..k - 1 {
            parts.push(basis.iter().copied().filter(|&i| row_of(i) == j).collect());
        }
        AdjacencyPartition {
            parts,
            degree_bound: self.degree_bound(),
        }
    }

    /// Check the five adjacency conditions on the word matrix.
    pub fn partition_verdict(&self) -> Result<PartitionVerdict, FamilyError> {
        let m = self.transition_matrix()?;
        check_partition_conditions(&m.entries, &self.partition())
            .map_err(|e| FamilyError::AssemblyContract(format!("partition: {e}")))
    }

    /// The exceptional curve sets of the routing analysis: members of the
    /// last row (V_1) and of row 1 (V_3) that meet the twist family (row
    /// 0). Both have exactly one member per column.
    pub fn exceptional_sets(&self) -> (Vec<usize>, Vec<usize>) {
        let sys = self.system();
        let total = sys.curve_count();
        let row_of = |idx: usize| -> u64 { (idx / CURVE_CLASSES) as u64 % self.k };
        let row0: Vec<usize> = (0..total).filter(|&i| row_of(i) == 0).collect();
        let meets_row0 =
            |idx: usize| -> bool { row0.iter().any(|&c| sys.intersection(c, idx) > 0) };
        let x: Vec<usize> = (0..total)
            .filter(|&i| row_of(i) == self.k - 1 && meets_row0(i))
            .collect();
        let y: Vec<usize> = (0..total)
            .filter(|&i| row_of(i) == 1 && meets_row0(i))
            .collect();
        (x, y)
    }

    /// Signature of one column cut out along its two wall families: the
    /// subsurface carrying one fundamental domain of the column rotation.
    pub fn column_signature(&self, column: u64) -> Result<SurfaceSignature, FamilyError> {
        let column = column % self.n;
        let cut = self
            .system()
            .graph()
            .cut_and_cap(&self.assembled.walls)
            .map_err(|e| FamilyError::AssemblyContract(format!("column cut: {e}")))?;
        if cut.components.len() != self.n as usize {
            return Err(FamilyError::AssemblyContract(format!(
                "expected {} column pieces, found {}",
                self.n,
                cut.components.len()
            )));
        }
        // The component containing the first crossing vertex of the column.
        let classes = self.system().graph().vertex_count() / (self.n * self.k) as usize;
        let probe = ((column * self.k) as usize * classes) as u32;
        let members = cut
            .components
            .iter()
            .find(|m| m.binary_search(&probe).is_ok())
            .cloned()
            .ok_or_else(|| {
                FamilyError::AssemblyContract("column probe vertex missing from cut".into())
            })?;
        let caps: u64 = cut
            .cap_edges
            .iter()
            .flatten()
            .filter(|&&h| members.binary_search(&cut.graph.vertex_of(h)).is_ok())
            .count() as u64;
        let piece = cut.graph.restrict_to_component(&members);
        let capped = piece
            .surface_signature()
            .map_err(|e| FamilyError::AssemblyContract(format!("column signature: {e}")))?;
        if capped.orientable {
            return Err(FamilyError::AssemblyContract(
                "column piece is orientable".into(),
            ));
        }
        Ok(SurfaceSignature {
            orientable: false,
            genus: capped.genus,
            marked_points: 2,
            boundary_components: caps,
            euler_characteristic: capped.euler_characteristic - caps as i64,
        })
    }
}

/// The family word: positive twists about the row-0 chain curves (a2..a8
/// per column, then b2..b7 per column, then the a1 orbit, then the b1
/// orbit), followed by one step of the row rotation.
fn family_word(assembled: &Assembled) -> PennerWord {
    let n = assembled.n;
    let mut moves = Vec::new();
    for i in 0..n {
        for q in 2..=8 {
            moves.push(PennerMove::Twist {
                curve: assembled.curve_id(i, 0, alpha(q)),
                power: 1,
            });
        }
    }
    for i in 0..n {
        for q in 2..=7 {
            moves.push(PennerMove::Twist {
                curve: assembled.curve_id(i, 0, beta(q)),
                power: 1,
            });
        }
    }
    for i in 0..n {
        moves.push(PennerMove::Twist {
            curve: assembled.curve_id(i, 0, alpha(1)),
            power: 1,
        });
    }
    for i in 0..n {
        moves.push(PennerMove::Twist {
            curve: assembled.curve_id(i, 0, beta(1)),
            power: 1,
        });
    }
    moves.push(PennerMove::Rotate {
        name: "rho2".into(),
    });
    PennerWord {
        moves,
        basis: assembled.basis(),
    }
}

/// Report of the certified upper-bound chain.
#[derive(Debug, Clone)]
pub struct UpperBoundReport {
    pub n: u64,
    pub k: u64,
    pub genus: u64,
    pub d_prime: u64,
    /// 4 D^4 with D = (1 + D')^3, exact.
    pub threshold: BigUint,
    pub certificate: PfCertificate,
    /// Certified comparison lambda^(k-1) <= 4 D^4.
    pub power_bound: BoundOutcome,
    /// Certified comparison lambda^genus <= (4 D^4)^(28 n), the exact form
    /// of log lambda <= 28 log(4 D^4) n / genus.
    pub genus_bound: BoundOutcome,
    /// 28 ln(4 D^4), for display.
    pub log_constant: f64,
}

impl UpperBoundReport {
    pub fn both_hold(&self) -> bool {
        matches!(self.power_bound, BoundOutcome::Holds { .. })
            && matches!(self.genus_bound, BoundOutcome::Holds { .. })
    }
}

fn rational_from_uint(u: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(num_bigint::Sign::Plus, u.clone()))
}

fn compare_power(cert: &PfCertificate, exponent: u64, threshold: &BigRational) -> BoundOutcome {
    let up = cert.upper.clone().pow(exponent as i32);
    if up <= *threshold {
        return BoundOutcome::Holds {
            margin: threshold - &up,
        };
    }
    let lo = cert.lower.clone().pow(exponent as i32);
    if lo > *threshold {
        BoundOutcome::Violated {
            excess: &lo - threshold,
        }
    } else {
        BoundOutcome::Indeterminate
    }
}

/// Verify the two certified upper bounds for an instance.
pub fn verify_upper_bound(
    inst: &FamilyInstance,
    gap: &BigRational,
) -> Result<UpperBoundReport, FamilyError> {
    let cert = inst.stretch_factor(gap)?;
    let genus = genus_formula(inst.n, inst.k)?;
    let d = inst.degree_bound();
    let d4 = {
        let d2 = &d * &d;
        &d2 * &d2 * BigUint::from(4u32)
    };
    let threshold = rational_from_uint(&d4);
    let power_bound = compare_power(&cert, inst.k - 1, &threshold);
    let genus_threshold = rational_from_uint(&d4.clone().pow(28 * inst.n as u32));
    let genus_bound = compare_power(&cert, genus, &genus_threshold);
    let log_constant = 28.0 * d4.to_f64().map(|x| x.ln()).unwrap_or(f64::NAN);
    Ok(UpperBoundReport {
        n: inst.n,
        k: inst.k,
        genus,
        d_prime: inst.d_prime,
        threshold: d4,
        certificate: cert,
        power_bound,
        genus_bound,
        log_constant,
    })
}

/// Double-cover invariance data for an instance: the lifted word's
/// certificate must overlap the base certificate.
#[derive(Debug, Clone)]
pub struct CoverCheck {
    pub base: PfCertificate,
    pub lifted: PfCertificate,
    pub base_chi: i64,
    pub cover_chi: i64,
    pub cover_orientable: bool,
    pub lifted_dimension: usize,
}

impl CoverCheck {
    pub fn passes(&self) -> bool {
        self.base.overlaps(&self.lifted)
            && self.cover_chi == 2 * self.base_chi
            && self.cover_orientable
    }
}

pub fn cover_check(inst: &FamilyInstance, gap: &BigRational) -> Result<CoverCheck, FamilyError> {
    let base_cert = inst.stretch_factor(gap)?;
    let lifted: LiftedSystem = lift_system(inst.system())
        .map_err(|e| FamilyError::AssemblyContract(format!("lift: {e}")))?;
    let lifted_word = lift_word(inst.system(), &lifted, &inst.word)
        .map_err(|e| FamilyError::AssemblyContract(format!("lifted word: {e}")))?;
    let m = word_matrix(&lifted.system, &lifted_word)
        .map_err(|e| FamilyError::AssemblyContract(format!("lifted matrix: {e}")))?;
    let lifted_cert = pf_eigenvalue(&m.entries, gap)
        .map_err(|e| FamilyError::AssemblyContract(format!("lifted certification: {e}")))?;
    Ok(CoverCheck {
        base_chi: inst.system().graph().euler_characteristic(),
        cover_chi: lifted.cover.total.euler_characteristic(),
        cover_orientable: lifted.cover.total.orientability(),
        lifted_dimension: m.entries.rows(),
        base: base_cert,
        lifted: lifted_cert,
    })
}

/// Euler-characteristic bookkeeping for the surgered surfaces: adding r
/// copies of the chi = -1 summand raises the genus by exactly r, and
/// opening half the marked points as punctures drops chi by n more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedSumBookkeeping {
    pub closed: SurfaceSignature,
    pub punctures_opened: u64,
    pub remaining_marked: u64,
    pub punctured_chi: i64,
}

pub fn oriented_sum_bookkeeping(
    n: u64,
    k: u64,
    r: u64,
) -> Result<OrientedSumBookkeeping, FamilyError> {
    if n < 1 || k < 3 {
        return Err(FamilyError::ParameterRange(format!(
            "need n >= 1 and k >= 3, got n = {n}, k = {k}"
        )));
    }
    if r > 14 * n {
        return Err(FamilyError::ParameterRange(format!(
            "r must vary between 0 and 14 n = {}, got r = {r}",
            14 * n
        )));
    }
    let genus = genus_formula(n, k)? + r;
    let closed = SurfaceSignature {
        orientable: false,
        genus,
        marked_points: 2 * n,
        boundary_components: 0,
        euler_characteristic: 2 - genus as i64,
    };
    Ok(OrientedSumBookkeeping {
        closed,
        punctures_opened: n,
        remaining_marked: n,
        punctured_chi: 2 - genus as i64 - n as i64,
    })
}

/// The computable part of the global upper-bound constant: the 2 C' n term
/// with C' = 28 log(4 D^4). The finite list of small-genus minima entering
/// the full maximum is not computable by this artifact and is reported as
/// unavailable.
#[derive(Debug, Clone)]
pub struct GlobalBoundConstant {
    pub n: u64,
    /// 4 D^4 exact.
    pub log_argument: BigUint,
    /// 2 C' n = 56 n log(4 D^4).
    pub two_c_prime_n: f64,
    pub small_genus_terms_available: bool,
}

pub fn global_bound_constant(n: u64, d_prime: u64) -> Result<GlobalBoundConstant, FamilyError> {
    if n < 1 {
        return Err(FamilyError::ParameterRange("n must be >= 1".into()));
    }
    let d = BigUint::from(1 + d_prime);
    let d3 = (&d * &d) * &d;
    let d12 = (&d3 * &d3) * (&d3 * &d3);
    let log_argument = d12 * BigUint::from(4u32);
    let two_c_prime_n =
        56.0 * n as f64 * log_argument.to_f64().map(|x| x.ln()).unwrap_or(f64::NAN);
    Ok(GlobalBoundConstant {
        n,
        log_argument,
        two_c_prime_n,
        small_genus_terms_available: false,
    })
}

/// Everything the shipped template promises, checked on assembled
/// instances: the disjointness pattern with exactly the two declared
/// cross-block crossings, filling, inconsistent markings, the genus and
/// marked-point targets, the column-wall cuts, the word conditions, and
/// the five adjacency conditions.
pub fn validate_template(template: &BlockTemplate) -> Result<(), FamilyError> {
    for (n, k) in [(1u64, 3u64), (2, 3), (1, 4)] {
        let inst = FamilyInstance::with_template(template, n, k)?;
        let sys = inst.system();
        let total = sys.curve_count();
        for a in 0..total {
            let (ia, ja, ca) = inst.assembled.block_of_curve(a);
            for b in (a + 1)..total {
                let (ib, jb, cb) = inst.assembled.block_of_curve(b);
                let i_ab = sys.intersection(a, b);
                let both_alpha = ca < 8 && cb < 8;
                let both_beta = ca >= 8 && cb >= 8;
                if (both_alpha || both_beta) && i_ab != 0 {
                    return Err(FamilyError::TemplateInvalid(format!(
                        "curves {} and {} of the same family intersect",
                        sys.curves()[a].marked.name,
                        sys.curves()[b].marked.name
                    )));
                }
                if both_alpha || both_beta {
                    continue;
                }
                let (ai, aj, ac, bi, bj, bc) = if ca < 8 {
                    (ia, ja, ca, ib, jb, cb)
                } else {
                    (ib, jb, cb, ia, ja, ca)
                };
                let same_block = ai == bi && aj == bj;
                let expected_cross_block =
                    // The b3 one row below crosses a3.
                    (ac == alpha(3) && bc == beta(3) && ai == bi && (bj + 1) % k == aj)
                    // The b7 one column to the left crosses a8.
                    || (ac == alpha(8) && bc == beta(7) && aj == bj && (bi + 1) % inst.n == ai);
                if !same_block && i_ab != 0 && !expected_cross_block {
                    return Err(FamilyError::TemplateInvalid(format!(
                        "undeclared cross-block intersection between {} and {}",
                        sys.curves()[a].marked.name,
                        sys.curves()[b].marked.name
                    )));
                }
            }
        }
        if !sys.is_filling() {
            return Err(FamilyError::TemplateInvalid(format!(
                "system does not fill at ({n}, {k})"
            )));
        }
        if !sys.markings_inconsistent().unwrap_or(false) {
            return Err(FamilyError::TemplateInvalid(format!(
                "markings not inconsistent at ({n}, {k})"
            )));
        }
        let sig = inst.signature()?;
        let genus = genus_formula(n, k)?;
        if sig.orientable || sig.genus != genus || sig.marked_points != 2 * n {
            return Err(FamilyError::TemplateInvalid(format!(
                "signature {sig:?} does not match the target genus {genus}"
            )));
        }
        for col in 0..n {
            let u = inst.column_signature(col)?;
            if u.orientable || u.genus != 12 * k || u.boundary_components != 2 * k {
                return Err(FamilyError::TemplateInvalid(format!(
                    "column piece signature {u:?} at ({n}, {k})"
                )));
            }
        }
        let report = inst.validate_word();
        if !report.passes() {
            return Err(FamilyError::TemplateInvalid(format!(
                "word conditions fail at ({n}, {k}): {report:?}"
            )));
        }
        let verdict = inst.partition_verdict()?;
        if !verdict.all_pass() {
            return Err(FamilyError::TemplateInvalid(format!(
                "adjacency conditions fail at ({n}, {k}): {verdict:?}"
            )));
        }
        let (x, y) = inst.exceptional_sets();
        if x.len() != n as usize || y.len() != n as usize {
            return Err(FamilyError::TemplateInvalid(format!(
                "exceptional sets have sizes {} and {}, expected {n}",
                x.len(),
                y.len()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_formula_values() {
        assert_eq!(genus_formula(1, 1).unwrap(), 14);
        assert_eq!(genus_formula(1, 3).unwrap(), 42);
        assert_eq!(genus_formula(2, 3).unwrap(), 82);
        assert!(genus_formula(0, 3).is_err());
    }

    #[test]
    fn oriented_sum_arithmetic() {
        let b = oriented_sum_bookkeeping(1, 3, 0).unwrap();
        assert_eq!(b.closed.genus, 42);
        let b = oriented_sum_bookkeeping(1, 3, 5).unwrap();
        assert_eq!(b.closed.genus, 47);
        assert_eq!(b.closed.euler_characteristic, 2 - 47);
        assert_eq!(b.punctured_chi, 2 - 47 - 1);
        // r = 14 n lands on the next k.
        let b = oriented_sum_bookkeeping(1, 3, 14).unwrap();
        assert_eq!(b.closed.genus, genus_formula(1, 4).unwrap());
        assert!(oriented_sum_bookkeeping(1, 3, 15).is_err());
    }

    #[test]
    fn global_constant_partial() {
        let c = global_bound_constant(1, 3).unwrap();
        assert!(!c.small_genus_terms_available);
        let c2 = global_bound_constant(2, 3).unwrap();
        assert!((c2.two_c_prime_n - 2.0 * c.two_c_prime_n).abs() < 1e-9);
    }
}
