//! Twist calculus: the linear action of twist words on the span of curve
//! measures, plus validation of the four construction conditions.
//!
//! Matrix convention, fixed once: columns are images of basis measures, and
//! the first move of a word is applied first, so a word's matrix is the
//! product of its move matrices with the first move rightmost.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::curvesys::CurveSystem;
use crate::error::TwistError;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PennerMove {
    /// Dehn twist about a basis curve with a nonzero power.
    Twist { curve: usize, power: i64 },
    /// A registered basis permutation (a finite-order symmetry).
    Rotate { name: String },
}

/// An ordered sequence of moves acting on a fixed measure basis.
/// Moves are listed in application order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PennerWord {
    pub moves: Vec<PennerMove>,
    /// Basis curve indices spanning the measure space.
    pub basis: Vec<usize>,
}

impl PennerWord {
    pub fn concat(&self, then: &PennerWord) -> Result<PennerWord, TwistError> {
        if self.basis != then.basis {
            return Err(TwistError::BasisMismatch);
        }
        let mut moves = self.moves.clone();
        moves.extend(then.moves.iter().cloned());
        Ok(PennerWord {
            moves,
            basis: self.basis.clone(),
        })
    }
}

/// Non-negative integer matrix of a twist word on the measure basis,
/// together with the word it represents.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    pub entries: IntMatrix,
    pub provenance: String,
}

fn basis_position(word_basis: &[usize], curve: usize) -> Result<usize, TwistError> {
    word_basis
        .iter()
        .position(|&c| c == curve)
        .ok_or(TwistError::NotInBasis(format!("curve #{curve}")))
}

/// Matrix of a single twist about `curve`: the identity plus the row of
/// intersection numbers `i(curve, .)` scaled by |power|. The measure update
/// sends each basis measure m_d to m_d + |p| i(c, d) m_c.
pub fn twist_matrix(
    sys: &CurveSystem,
    basis: &[usize],
    curve: usize,
    power: i64,
) -> Result<TransitionMatrix, TwistError> {
    if power == 0 {
        return Err(TwistError::ZeroPower);
    }
    let rec = &sys.curves()[curve];
    if !rec.marked.two_sided {
        return Err(TwistError::OneSidedTwist(rec.marked.name.clone()));
    }
    let row = basis_position(basis, curve)?;
    let mut m = IntMatrix::identity(basis.len());
    let p = BigUint::from(power.unsigned_abs());
    for (col, &d) in basis.iter().enumerate() {
        if col == row {
            continue;
        }
        let i = sys.intersection(curve, d);
        if i > 0 {
            m.set(row, col, BigUint::from(i) * &p);
        }
    }
    Ok(TransitionMatrix {
        entries: m,
        provenance: format!("twist({}, {})", rec.marked.name, power),
    })
}

/// Permutation matrix of a registered rotation restricted to the basis.
pub fn rotation_matrix(
    sys: &CurveSystem,
    basis: &[usize],
    name: &str,
) -> Result<TransitionMatrix, TwistError> {
    let perm = sys
        .rotation_perm(name)
        .ok_or_else(|| TwistError::UnknownRotation(name.to_string()))?;
    let n = basis.len();
    let mut m = IntMatrix::zeros(n, n);
    let mut hit = vec![false; n];
    for (col, &d) in basis.iter().enumerate() {
        let image = *perm.get(d).ok_or(TwistError::NotABijection)?;
        let row = basis_position(basis, image)?;
        if hit[row] {
            return Err(TwistError::NotABijection);
        }
        hit[row] = true;
        m.set(row, col, BigUint::one());
    }
    Ok(TransitionMatrix {
        entries: m,
        provenance: format!("rotate({name})"),
    })
}

/// Matrix of a whole word: the ordered product of move matrices with the
/// first (rightmost) move applied first.
pub fn word_matrix(sys: &CurveSystem, word: &PennerWord) -> Result<TransitionMatrix, TwistError> {
    let mut acc = IntMatrix::identity(word.basis.len());
    for mv in &word.moves {
        let m = match mv {
            PennerMove::Twist { curve, power } => twist_matrix(sys, &word.basis, *curve, *power)?,
            PennerMove::Rotate { name } => rotation_matrix(sys, &word.basis, name)?,
        };
        acc = m.entries.mul(&acc);
    }
    Ok(TransitionMatrix {
        entries: acc,
        provenance: format!("word({} moves)", word.moves.len()),
    })
}

/// Per-condition validation report for a Penner word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PennerReport {
    /// Condition 1: the basis system fills the surface.
    pub filling: bool,
    /// Condition 2: markings disagree at every crossing of distinct curves.
    pub inconsistent_markings: bool,
    /// Condition 3: every basis curve is twisted in some power of the word,
    /// with rotation orbits unrolled over `unrolled_power` iterations.
    pub every_curve_twisted: bool,
    pub unrolled_power: u64,
    /// Condition 4: every twist power sign matches its curve's twist sign.
    pub twist_signs_consistent: bool,
    pub untwisted_curves: Vec<String>,
    pub sign_violations: Vec<String>,
}

impl PennerReport {
    pub fn passes(&self) -> bool {
        self.filling
            && self.inconsistent_markings
            && self.every_curve_twisted
            && self.twist_signs_consistent
    }
}

fn perm_compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&i| outer[i]).collect()
}

fn perm_order(perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut order = 1u64;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order
}

/// Validate the four construction conditions for `word` on `sys`.
///
/// Condition 3 is checked on the smallest power of the word whose rotation
/// part is trivial: a twist at word position p acts, inside the composed
/// map, about the curve pulled back through the rotations preceding it, and
/// iterating the word sweeps those curves through the total rotation's
/// orbits.
pub fn validate_penner_word(sys: &CurveSystem, word: &PennerWord) -> PennerReport {
    let filling = sys.is_filling();
    let inconsistent_markings = sys.markings_inconsistent().unwrap_or(false);

    let n_curves = sys.curve_count();
    let identity: Vec<usize> = (0..n_curves).collect();
    // Total rotation of the word and the pullback of each twisted curve
    // through the rotations applied before it.
    let mut prefix = identity.clone();
    let mut base_twisted: BTreeSet<usize> = BTreeSet::new();
    let mut sign_violations = Vec::new();
    for mv in &word.moves {
        match mv {
            PennerMove::Twist { curve, power } => {
                let inv_pos = prefix.iter().position(|&img| img == *curve);
                if let Some(pulled) = inv_pos {
                    base_twisted.insert(pulled);
                }
                let sign = if *power >= 0 { 1 } else { -1 };
                if sign != sys.curves()[*curve].marked.twist_sign as i64 {
                    sign_violations.push(sys.curves()[*curve].marked.name.clone());
                }
            }
            PennerMove::Rotate { name } => {
                if let Some(perm) = sys.rotation_perm(name) {
                    prefix = perm_compose(perm, &prefix);
                }
            }
        }
    }
    let total = prefix;
    let order = perm_order(&total);
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut current: Vec<usize> = base_twisted.iter().copied().collect();
    for _ in 0..order {
        covered.extend(current.iter().copied());
        current = current.iter().map(|&c| total[c]).collect();
    }
    let untwisted: Vec<String> = word
        .basis
        .iter()
        .filter(|&&c| !covered.contains(&c))
        .map(|&c| sys.curves()[c].marked.name.clone())
        .collect();

    PennerReport {
        filling,
        inconsistent_markings,
        every_curve_twisted: untwisted.is_empty(),
        unrolled_power: order,
        twist_signs_consistent: sign_violations.is_empty(),
        untwisted_curves: untwisted,
        sign_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvesys::{CurveRecord, CurveSystem, MarkedCurve, MarkingToken, SignedRibbonGraph};

    fn torus_pair() -> CurveSystem {
        let graph =
            SignedRibbonGraph::new(vec![vec![0, 2, 1, 3]], &[(0, 1, false), (2, 3, false)])
                .unwrap();
        let mk = |name: &str, token| MarkedCurve {
            name: name.into(),
            two_sided: true,
            token,
            anchor_flip: false,
            twist_sign: 1,
        };
        CurveSystem::new(
            graph,
            vec![
                CurveRecord {
                    marked: mk("a", MarkingToken::Preserving),
                    path: vec![0],
                },
                CurveRecord {
                    marked: mk("b", MarkingToken::Reversing),
                    path: vec![2],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn twist_matrix_basics() {
        let sys = torus_pair();
        let basis = vec![0, 1];
        let t = twist_matrix(&sys, &basis, 0, 1).unwrap();
        assert_eq!(
            t.entries,
            IntMatrix::from_u64_rows(&[vec![1, 1], vec![0, 1]])
        );
        assert_eq!(t.entries.det_i64(), Some(1));
        // p-th power: off-diagonal scales by p.
        let t3 = twist_matrix(&sys, &basis, 0, 3).unwrap();
        assert_eq!(t3.entries, t.entries.pow(3).unwrap());
    }

    #[test]
    fn word_product_order() {
        let sys = torus_pair();
        let word = PennerWord {
            moves: vec![
                PennerMove::Twist { curve: 0, power: 1 },
                PennerMove::Twist { curve: 1, power: 1 },
            ],
            basis: vec![0, 1],
        };
        let m = word_matrix(&sys, &word).unwrap();
        // T_b . T_a with columns as images.
        assert_eq!(
            m.entries,
            IntMatrix::from_u64_rows(&[vec![1, 1], vec![1, 2]])
        );
        let empty = PennerWord {
            moves: vec![],
            basis: vec![0, 1],
        };
        assert_eq!(
            word_matrix(&sys, &empty).unwrap().entries,
            IntMatrix::identity(2)
        );
    }

    #[test]
    fn concat_is_left_multiplication() {
        let sys = torus_pair();
        let u = PennerWord {
            moves: vec![PennerMove::Twist { curve: 0, power: 1 }],
            basis: vec![0, 1],
        };
        let v = PennerWord {
            moves: vec![PennerMove::Twist { curve: 1, power: 2 }],
            basis: vec![0, 1],
        };
        let uv = u.concat(&v).unwrap();
        let m = word_matrix(&sys, &uv).unwrap().entries;
        let mu = word_matrix(&sys, &u).unwrap().entries;
        let mv = word_matrix(&sys, &v).unwrap().entries;
        assert_eq!(m, mv.mul(&mu));
    }

    #[test]
    fn validation_conditions() {
        let mut sys = torus_pair();
        sys.register_rotation("swap", vec![1, 0]);
        // Word twisting only `a`, no rotation: condition 3 fails.
        let word = PennerWord {
            moves: vec![PennerMove::Twist { curve: 0, power: 1 }],
            basis: vec![0, 1],
        };
        let report = validate_penner_word(&sys, &word);
        assert!(report.filling);
        assert!(report.inconsistent_markings);
        assert!(!report.every_curve_twisted);
        assert_eq!(report.untwisted_curves, vec!["b".to_string()]);
        // With the swap rotation appended, the orbit covers both curves.
        let word = PennerWord {
            moves: vec![
                PennerMove::Twist { curve: 0, power: 1 },
                PennerMove::Rotate {
                    name: "swap".into(),
                },
            ],
            basis: vec![0, 1],
        };
        let report = validate_penner_word(&sys, &word);
        assert!(report.every_curve_twisted);
        assert_eq!(report.unrolled_power, 2);
        assert!(report.passes());
        // Negative power on a +1-signed curve: condition 4 fails.
        let word = PennerWord {
            moves: vec![PennerMove::Twist {
                curve: 0,
                power: -1,
            }],
            basis: vec![0, 1],
        };
        let report = validate_penner_word(&sys, &word);
        assert!(!report.twist_signs_consistent);
    }

    #[test]
    fn rotation_conjugation_moves_the_twist() {
        let mut sys = torus_pair();
        sys.register_rotation("swap", vec![1, 0]);
        let basis = vec![0, 1];
        // Application order: swap^{-1} (= swap), twist a, swap.
        let word = PennerWord {
            moves: vec![
                PennerMove::Rotate {
                    name: "swap".into(),
                },
                PennerMove::Twist { curve: 0, power: 1 },
                PennerMove::Rotate {
                    name: "swap".into(),
                },
            ],
            basis: basis.clone(),
        };
        let lhs = word_matrix(&sys, &word).unwrap().entries;
        let rhs = twist_matrix(&sys, &basis, 1, 1).unwrap().entries;
        assert_eq!(lhs, rhs);
    }
}
