//! Independent oracles for the family pipeline: a dense floating-point
//! eigensolver cross-check, structural counts, conjugation invariance, and
//! the column subsurface extraction. The float oracle lives only here and
//! shares no code with the certified path.

use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};

use pennon::family::{genus_formula, FamilyInstance};
use pennon::matrix::IntMatrix;
use pennon::penner::{word_matrix, PennerMove, PennerWord};
use pennon::spectra::pf_eigenvalue;
use pennon::textio;

/// Dense power iteration in plain f64 with infinity-norm scaling: an
/// implementation-independent estimate of the dominant eigenvalue.
fn dominant_eigenvalue_f64(m: &IntMatrix) -> f64 {
    let n = m.rows();
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| m.get(i, j).to_f64().unwrap_or(0.0))
                .collect()
        })
        .collect();
    let mut v = vec![1.0f64; n];
    let mut lambda = 0.0;
    for _ in 0..200_000 {
        let mut w = vec![0.0f64; n];
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += a[i][j] * v[j];
            }
            w[i] = acc;
        }
        let norm = w.iter().cloned().fold(0.0f64, f64::max);
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let delta: f64 = next
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        v = next;
        lambda = norm;
        if delta < 1e-15 {
            break;
        }
    }
    lambda
}

fn gap(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[test]
fn certified_interval_matches_float_oracle() {
    let inst = FamilyInstance::new(1, 4).expect("build (1,4)");
    let m = inst.transition_matrix().expect("matrix");
    let cert = pf_eigenvalue(&m.entries, &gap(1, 1_000_000_000_000i64)).expect("certificate");
    let float = dominant_eigenvalue_f64(&m.entries);
    let mid = cert.to_f64();
    assert!(
        ((mid - float) / float).abs() < 1e-9,
        "certified {mid} vs float {float}"
    );
}

#[test]
fn word_shape_counts() {
    let inst = FamilyInstance::new(1, 3).expect("build (1,3)");
    // 7 chain twists + 6 rung twists + 2 hook twists + 1 rotation.
    assert_eq!(inst.word.moves.len(), 16);
    let m = inst.transition_matrix().expect("matrix");
    assert_eq!(m.entries.rows(), 45);
    assert_eq!(m.entries.cols(), 45);
    let inst2 = FamilyInstance::new(2, 4).expect("build (2,4)");
    assert_eq!(inst2.word.moves.len(), 15 * 2 + 1);
    assert_eq!(inst2.transition_matrix().unwrap().entries.rows(), 120);
}

#[test]
fn rotations_commute() {
    let inst = FamilyInstance::new(2, 3).expect("build");
    let sys = inst.system();
    let r1 = sys.rotation_perm("rho1").unwrap();
    let r2 = sys.rotation_perm("rho2").unwrap();
    for i in 0..r1.len() {
        assert_eq!(r1[r2[i]], r2[r1[i]], "commutation at {i}");
    }
}

#[test]
fn conjugate_word_has_overlapping_certificate() {
    let inst = FamilyInstance::new(1, 3).expect("build");
    let g = gap(1, 1_000_000_000);
    let base = inst.stretch_factor(&g).expect("base certificate");
    let mut conj_moves = vec![PennerMove::Rotate {
        name: "rho2_inv".into(),
    }];
    conj_moves.extend(inst.word.moves.iter().cloned());
    conj_moves.push(PennerMove::Rotate {
        name: "rho2".into(),
    });
    let conj = PennerWord {
        moves: conj_moves,
        basis: inst.word.basis.clone(),
    };
    let m = word_matrix(inst.system(), &conj).expect("conjugate matrix");
    let cert = pf_eigenvalue(&m.entries, &g).expect("conjugate certificate");
    assert!(base.overlaps(&cert), "conjugation must preserve the spectrum");
}

#[test]
fn word_power_certificate_consistency() {
    let inst = FamilyInstance::new(1, 3).expect("build");
    let g = gap(1, 1_000_000);
    let cert = inst.stretch_factor(&g).expect("certificate");
    let m = inst.transition_matrix().unwrap();
    let k = inst.k;
    let mk = m.entries.pow(k).expect("power");
    let cert_k = pf_eigenvalue(&mk, &gap(1, 1_000)).expect("power certificate");
    let lo_k = cert.lower.clone().pow(k as i32);
    let hi_k = cert.upper.clone().pow(k as i32);
    assert!(
        cert_k.lower <= hi_k && lo_k <= cert_k.upper,
        "rho(M^k) inconsistent with rho(M)^k"
    );
}

#[test]
fn column_subsurface_signature() {
    for (n, k) in [(1u64, 3u64), (2, 4)] {
        let inst = FamilyInstance::new(n, k).expect("build");
        for col in 0..n {
            let u = inst.column_signature(col).expect("column");
            assert!(!u.orientable);
            assert_eq!(u.genus, 12 * k, "column genus at ({n},{k})");
            assert_eq!(u.boundary_components, 2 * k);
            assert_eq!(u.euler_characteristic, 2 - 14 * k as i64);
            assert_eq!(u.chi_from_parts(), u.euler_characteristic);
        }
    }
}

#[test]
fn degree_constant_stable_across_instances() {
    let d13 = FamilyInstance::new(1, 3).unwrap().d_prime;
    let d24 = FamilyInstance::new(2, 4).unwrap().d_prime;
    let d15 = FamilyInstance::new(1, 5).unwrap().d_prime;
    assert_eq!(d13, d24);
    assert_eq!(d13, d15);
}

#[test]
fn genus_matches_formula_for_template() {
    for (n, k) in [(1u64, 3u64), (1, 4), (2, 3)] {
        let inst = FamilyInstance::new(n, k).unwrap();
        assert_eq!(
            inst.signature().unwrap().genus,
            genus_formula(n, k).unwrap()
        );
    }
}

#[test]
fn assembled_system_round_trips_through_text() {
    let inst = FamilyInstance::new(1, 3).unwrap();
    let text = textio::write_system(inst.system());
    let parsed = textio::parse_system(&text).expect("parse");
    assert_eq!(textio::write_system(&parsed), text);
    assert_eq!(parsed.curve_count(), inst.system().curve_count());
    assert!(parsed.is_filling());
    assert!(parsed.markings_inconsistent().unwrap());
}

#[test]
fn default_template_validates() {
    pennon::family::validate_template(&pennon::family::default_template())
        .expect("shipped template must pass its validator");
}
