//! Cross-check the periodic face-class tracer against brute-force assembly
//! on random parameter sets, and print observed drift profiles.

use pennon::family::template::{
    alpha, assemble_graph, beta, chain_template, face_count_from_classes,
    periodic_face_classes, Clasp, TemplateParams, BASE_CROSSING_CLASSES, CURVE_CLASSES,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut profiles: BTreeMap<Vec<(i64, i64)>, usize> = BTreeMap::new();
    let mut mismatches = 0;
    for case in 0..400 {
        let with_clasp = rng.random_bool(0.7);
        let clasps = if with_clasp {
            vec![Clasp {
                a: alpha(rng.random_range(1..=8)),
                b: beta(rng.random_range(1..=7)),
                reversed: rng.random_bool(0.5),
            }]
        } else {
            vec![]
        };
        let n_classes = BASE_CROSSING_CLASSES + clasps.len();
        let mut handedness = vec![false; n_classes];
        for h in handedness.iter_mut() {
            *h = rng.random_bool(0.5);
        }
        let crosscap_curve = if rng.random_bool(0.5) {
            alpha(3)
        } else {
            beta(3)
        };
        let params = TemplateParams {
            handedness,
            reflections: [
                rng.random_bool(0.5),
                rng.random_bool(0.5),
                rng.random_bool(0.5),
            ],
            clasps,
            chords: vec![],
            crosscaps: vec![(crosscap_curve, 0), (crosscap_curve, 1)],
            anchor_flips: [false; CURVE_CLASSES],
        };
        let template = match chain_template(&params) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let classes = match periodic_face_classes(&template) {
            Ok(c) => c,
            Err(e) => {
                println!("case {case}: periodic tracer error {e}");
                continue;
            }
        };
        for (n, k) in [(1u64, 3u64), (1, 4), (2, 3), (2, 5), (3, 4)] {
            let predicted = face_count_from_classes(&classes, n, k);
            let actual = assemble_graph(&template, n, k)
                .unwrap()
                .trace_faces()
                .len() as u64;
            if predicted != actual {
                mismatches += 1;
                println!(
                    "case {case} ({n},{k}): predicted {predicted}, actual {actual}, classes {classes:?}"
                );
            }
        }
        let mut profile: Vec<(i64, i64)> = classes
            .iter()
            .map(|&(p, q)| (p.abs(), q.abs()))
            .collect();
        profile.sort();
        *profiles.entry(profile).or_default() += 1;
    }
    println!("mismatches: {mismatches}");
    println!("drift profiles (|p|, |q|) sorted:");
    for (profile, count) in &profiles {
        println!("  {profile:?}: {count}");
    }
}
