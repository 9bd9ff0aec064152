//! The search that produced the shipped template parameters.
//!
//! Strategy: chord crossings (single extra in-block crossings between
//! otherwise disjoint alpha-beta pairs) enlarge the cycle space of the
//! curve union beyond the span of the curve cycles and the sense-locked
//! bigons, so the orientation-reversing band pair can live on a loop that
//! the marked wrap faces do not constrain. For each random structural
//! choice (chords, reflections, band placement) that is non-orientable and
//! marking-valid, the crossing handedness bits are hill-climbed until the
//! doubly periodic face classes are exactly: one drift-free class per
//! extra crossing plus two base ones, and two classes of vertical drift
//! one (the marked wrap faces). That profile is equivalent to the genus
//! target for every (n, k) at once. Survivors run the full validator.

use num_rational::BigRational;
use pennon::family::template::{
    alpha, assemble_graph, assemble_system_raw, beta, chain_template, class_name,
    periodic_face_classes, Chord, TemplateParams, BASE_CROSSING_CLASSES, CURVE_CLASSES,
};
use pennon::family::validate_template;
use pennon::textio::write_template_params;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn profile_distance(classes: &[(i64, i64)], target_compact: usize) -> u64 {
    let mut compact = 0usize;
    let mut vertical_unit = 0usize;
    let mut bad = 0u64;
    for &(p, q) in classes {
        if (p, q) == (0, 0) {
            compact += 1;
        } else if p == 0 && q.abs() == 1 {
            vertical_unit += 1;
        } else {
            bad += 2;
        }
    }
    bad + (compact as i64 - target_compact as i64).unsigned_abs()
        + (vertical_unit as i64 - 2).unsigned_abs()
}

fn main() {
    // Alpha-beta pairs that do not cross in the chain pattern.
    let mut chord_menu: Vec<(usize, usize)> = Vec::new();
    for p in 1..=8usize {
        for q in 1..=7usize {
            let crosses = (q >= 2 && (p == q || p == q + 1)) || (q == 1 && (p == 1 || p == 2));
            if !crosses {
                chord_menu.push((alpha(p), beta(q)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let deadline = std::time::Instant::now() + std::time::Duration::from_secs(2400);
    let mut slices: u64 = 0;
    let mut restarts: u64 = 0;
    let mut best_hist: std::collections::BTreeMap<u64, u64> = Default::default();

    while std::time::Instant::now() < deadline {
        let n_chords = rng.random_range(1..=2usize);
        let mut chords: Vec<Chord> = Vec::new();
        for _ in 0..n_chords {
            let (a, b) = chord_menu[rng.random_range(0..chord_menu.len())];
            if chords.iter().any(|c| c.a == a && c.b == b) {
                continue;
            }
            chords.push(Chord {
                a,
                b,
                pos_a: rng.random_range(0..4),
                pos_b: rng.random_range(0..4),
            });
        }
        let n_classes = BASE_CROSSING_CLASSES + chords.len();
        let target_compact = 2 + chords.len();
        let reflections = [
            rng.random_bool(0.5),
            rng.random_bool(0.5),
            rng.random_bool(0.5),
        ];
        // Random band pair on one multi-arc curve.
        let probe = TemplateParams {
            handedness: vec![false; n_classes],
            reflections,
            clasps: vec![],
            chords: chords.clone(),
            crosscaps: vec![],
            anchor_flips: [false; CURVE_CLASSES],
        };
        let Ok(probe_template) = chain_template(&probe) else {
            continue;
        };
        let multi: Vec<usize> = (0..CURVE_CLASSES)
            .filter(|&c| probe_template.curves[c].stations.len() >= 2)
            .collect();
        let cc = multi[rng.random_range(0..multi.len())];
        let arcs = probe_template.curves[cc].stations.len();
        let x = rng.random_range(0..arcs);
        let y = loop {
            let y = rng.random_range(0..arcs);
            if y != x {
                break y;
            }
        };
        let crosscaps = vec![(cc, x.min(y)), (cc, x.max(y))];
        let base = TemplateParams {
            handedness: vec![false; n_classes],
            reflections,
            clasps: vec![],
            chords: chords.clone(),
            crosscaps,
            anchor_flips: [false; CURVE_CLASSES],
        };
        let Ok(template) = chain_template(&base) else {
            continue;
        };
        // Handedness-independent gates.
        let Ok(g13) = assemble_graph(&template, 1, 3) else {
            continue;
        };
        if g13.orientability() {
            continue;
        }
        let Ok(raw13) = assemble_system_raw(&template, 1, 3) else {
            continue;
        };
        if !raw13.markings_inconsistent().unwrap_or(false) {
            continue;
        }
        slices += 1;
        if slices % 500 == 0 {
            eprintln!("slices {slices}, restarts {restarts}, best-distance {best_hist:?}");
        }
        let mut slice_best = u64::MAX;
        for _restart in 0..30 {
            restarts += 1;
            let mut params = base.clone();
            for h in params.handedness.iter_mut() {
                *h = rng.random_bool(0.5);
            }
            let eval = |p: &TemplateParams| -> Option<u64> {
                let t = chain_template(p).ok()?;
                let classes = periodic_face_classes(&t).ok()?;
                Some(profile_distance(&classes, target_compact))
            };
            let Some(mut dist) = eval(&params) else {
                continue;
            };
            let mut improved = true;
            while improved && dist > 0 {
                improved = false;
                for bit in 0..n_classes {
                    let mut trial = params.clone();
                    trial.handedness[bit] = !trial.handedness[bit];
                    if let Some(d) = eval(&trial) {
                        if d < dist {
                            dist = d;
                            params = trial;
                            improved = true;
                        }
                    }
                }
            }
            slice_best = slice_best.min(dist);
            if dist == 2 && restarts % 997 == 0 {
                if let Ok(t) = chain_template(&params) {
                    if let Ok(classes) = periodic_face_classes(&t) {
                        eprintln!(
                            "plateau-2 profile {classes:?} chords {:?} crosscaps {:?}",
                            params.chords, params.crosscaps
                        );
                    }
                }
            }
            if dist != 0 {
                continue;
            }
            let template = chain_template(&params).unwrap();
            match validate_template(&template) {
                Err(e) => {
                    eprintln!("profile hit, battery failed: {e}");
                    continue;
                }
                Ok(()) => {}
            }
            let inst = pennon::family::FamilyInstance::with_template(&template, 1, 3).unwrap();
            let gap = BigRational::new(1.into(), 1_000_000.into());
            if inst.stretch_factor(&gap).is_err() {
                continue;
            }
            println!("FOUND after {restarts} restarts over {slices} slices");
            for chord in &params.chords {
                println!(
                    "chord ({}, {}) at positions ({}, {})",
                    class_name(chord.a),
                    class_name(chord.b),
                    chord.pos_a,
                    chord.pos_b
                );
            }
            println!(
                "crosscaps {:?}",
                params
                    .crosscaps
                    .iter()
                    .map(|&(c, a)| (class_name(c), a))
                    .collect::<Vec<_>>()
            );
            println!("reflections {:?}", params.reflections);
            println!("handedness {:?}", params.handedness);
            println!("--- template file ---");
            print!("{}", write_template_params(&params));
            return;
        }
        if slice_best != u64::MAX {
            *best_hist.entry(slice_best).or_default() += 1;
        }
    }
    println!("budget exhausted: {slices} admissible slices, {restarts} restarts");
    println!("best-distance {best_hist:?}");
}
