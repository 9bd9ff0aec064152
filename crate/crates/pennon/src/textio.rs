//! Structured-text formats: the versioned curve-system format (byte-stable
//! canonical form), template parameter files, and certificate rendering.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, Signed};

use crate::curvesys::{CurveRecord, CurveSystem, MarkedCurve, MarkingToken, SignedRibbonGraph};
use crate::error::FormatError;
use crate::family::template::{class_name, Chord, Clasp, TemplateParams, CURVE_CLASSES};
use crate::spectra::PfCertificate;

/// Serialize a curve system to the canonical text form. Parsing the output
/// and re-serializing reproduces it byte for byte.
pub fn write_system(sys: &CurveSystem) -> String {
    let g = sys.graph();
    let mut out = String::new();
    out.push_str("pennon-system 1\n");
    let _ = writeln!(out, "vertices {}", g.vertex_count());
    for v in 0..g.vertex_count() as u32 {
        let rot: Vec<String> = g.rotation(v).iter().map(|h| h.to_string()).collect();
        let _ = writeln!(out, "v {v}: {}", rot.join(" "));
    }
    let _ = writeln!(out, "edges {}", g.edge_count());
    for h in g.edge_ids() {
        let sign = if g.negated(h) { "-" } else { "+" };
        let _ = writeln!(out, "e {h} {} {sign}", g.opposite(h));
    }
    let _ = writeln!(out, "curves {}", sys.curve_count());
    for rec in sys.curves() {
        let token = match rec.marked.token {
            MarkingToken::Preserving => "P",
            MarkingToken::Reversing => "R",
        };
        let path: Vec<String> = rec.path.iter().map(|h| h.to_string()).collect();
        let _ = writeln!(
            out,
            "c {}: twosided {} token {token} anchor {} twist {} path {}",
            rec.marked.name,
            rec.marked.two_sided as u8,
            rec.marked.anchor_flip as u8,
            if rec.marked.twist_sign >= 0 { "+" } else { "-" },
            path.join(",")
        );
    }
    let rot_names: Vec<&str> = sys.rotation_names().collect();
    let _ = writeln!(out, "rotations {}", rot_names.len());
    for name in rot_names {
        let perm = sys.rotation_perm(name).unwrap();
        let images: Vec<String> = perm.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "rot {name}: {}", images.join(" "));
    }
    let _ = writeln!(out, "marks {}", g.marks.len());
    for (face, count) in &g.marks {
        let _ = writeln!(out, "mark {face} {count}");
    }
    let _ = writeln!(out, "boundary {}", g.boundary_faces.len());
    for face in &g.boundary_faces {
        let _ = writeln!(out, "bnd {face}");
    }
    out
}

fn expect_prefix<'a>(line: &'a str, prefix: &str, ln: usize) -> Result<&'a str, FormatError> {
    line.strip_prefix(prefix)
        .ok_or_else(|| FormatError::Syntax(ln, format!("expected `{prefix}...`")))
}

fn parse_count(line: &str, word: &str, ln: usize) -> Result<usize, FormatError> {
    let rest = expect_prefix(line, word, ln)?;
    rest.trim()
        .parse()
        .map_err(|_| FormatError::Syntax(ln, format!("bad {word} count")))
}

/// Parse the curve-system text format.
pub fn parse_system(text: &str) -> Result<CurveSystem, FormatError> {
    let mut lines = text.lines().enumerate();
    let (ln, header) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("empty input".into()))?;
    if header.trim() != "pennon-system 1" {
        return Err(FormatError::Version(format!("line {}: {header}", ln + 1)));
    }
    let (ln, vline) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("missing vertices".into()))?;
    let n_vertices = parse_count(vline, "vertices", ln + 1)?;
    let mut rotations = vec![Vec::new(); n_vertices];
    for _ in 0..n_vertices {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| FormatError::Structure("missing vertex row".into()))?;
        let rest = expect_prefix(line, "v ", ln + 1)?;
        let (id, rot) = rest
            .split_once(':')
            .ok_or_else(|| FormatError::Syntax(ln + 1, "expected `v <id>: ...`".into()))?;
        let id: usize = id
            .trim()
            .parse()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad vertex id".into()))?;
        if id >= n_vertices {
            return Err(FormatError::Syntax(ln + 1, "vertex id out of range".into()));
        }
        rotations[id] = rot
            .split_whitespace()
            .map(|h| h.parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad half-edge id".into()))?;
    }
    let (ln, eline) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("missing edges".into()))?;
    let n_edges = parse_count(eline, "edges", ln + 1)?;
    let mut edges = Vec::with_capacity(n_edges);
    for _ in 0..n_edges {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| FormatError::Structure("missing edge row".into()))?;
        let rest = expect_prefix(line, "e ", ln + 1)?;
        let parts: Vec<&str> = rest.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(FormatError::Syntax(
                ln + 1,
                "expected `e <h1> <h2> <+|->`".into(),
            ));
        }
        let h1: u32 = parts[0]
            .parse()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad half-edge".into()))?;
        let h2: u32 = parts[1]
            .parse()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad half-edge".into()))?;
        let neg = match parts[2] {
            "+" => false,
            "-" => true,
            _ => return Err(FormatError::Syntax(ln + 1, "bad sign".into())),
        };
        edges.push((h1, h2, neg));
    }
    let (ln, cline) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("missing curves".into()))?;
    let n_curves = parse_count(cline, "curves", ln + 1)?;
    let mut records = Vec::with_capacity(n_curves);
    for _ in 0..n_curves {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| FormatError::Structure("missing curve row".into()))?;
        let rest = expect_prefix(line, "c ", ln + 1)?;
        let (name, fields) = rest
            .split_once(':')
            .ok_or_else(|| FormatError::Syntax(ln + 1, "expected `c <name>: ...`".into()))?;
        let toks: Vec<&str> = fields.split_whitespace().collect();
        if toks.len() != 10
            || toks[0] != "twosided"
            || toks[2] != "token"
            || toks[4] != "anchor"
            || toks[6] != "twist"
            || toks[8] != "path"
        {
            return Err(FormatError::Syntax(ln + 1, "malformed curve fields".into()));
        }
        let two_sided = toks[1] == "1";
        let token = match toks[3] {
            "P" => MarkingToken::Preserving,
            "R" => MarkingToken::Reversing,
            _ => return Err(FormatError::Syntax(ln + 1, "bad token".into())),
        };
        let anchor_flip = toks[5] == "1";
        let twist_sign = if toks[7] == "+" { 1i8 } else { -1i8 };
        let path = toks[9]
            .split(',')
            .map(|h| h.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad path".into()))?;
        records.push(CurveRecord {
            marked: MarkedCurve {
                name: name.trim().to_string(),
                two_sided,
                token,
                anchor_flip,
                twist_sign,
            },
            path,
        });
    }
    let graph = SignedRibbonGraph::new(rotations, &edges)
        .map_err(|e| FormatError::Structure(format!("graph: {e}")))?;
    let mut sys = CurveSystem::new(graph, records)
        .map_err(|e| FormatError::Structure(format!("curve system: {e}")))?;

    let (ln, rline) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("missing rotations".into()))?;
    let n_rot = parse_count(rline, "rotations", ln + 1)?;
    for _ in 0..n_rot {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| FormatError::Structure("missing rotation row".into()))?;
        let rest = expect_prefix(line, "rot ", ln + 1)?;
        let (name, perm) = rest
            .split_once(':')
            .ok_or_else(|| FormatError::Syntax(ln + 1, "expected `rot <name>: ...`".into()))?;
        let perm: Vec<usize> = perm
            .split_whitespace()
            .map(|i| i.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad permutation".into()))?;
        sys.register_rotation(name.trim(), perm);
    }
    let (ln, mline) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("missing marks".into()))?;
    let n_marks = parse_count(mline, "marks", ln + 1)?;
    for _ in 0..n_marks {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| FormatError::Structure("missing mark row".into()))?;
        let rest = expect_prefix(line, "mark ", ln + 1)?;
        let parts: Vec<&str> = rest.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(FormatError::Syntax(
                ln + 1,
                "expected `mark <face> <count>`".into(),
            ));
        }
        let face: usize = parts[0]
            .parse()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad face id".into()))?;
        let count: u32 = parts[1]
            .parse()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad count".into()))?;
        sys.graph_mut().marks.insert(face, count);
    }
    let (ln, bline) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("missing boundary".into()))?;
    let n_bnd = parse_count(bline, "boundary", ln + 1)?;
    for _ in 0..n_bnd {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| FormatError::Structure("missing boundary row".into()))?;
        let rest = expect_prefix(line, "bnd ", ln + 1)?;
        let face: usize = rest
            .trim()
            .parse()
            .map_err(|_| FormatError::Syntax(ln + 1, "bad face id".into()))?;
        sys.graph_mut().boundary_faces.insert(face);
    }
    Ok(sys)
}

/// Serialize template parameters (the authoritative data of the shipped
/// block pattern and of user-supplied alternatives).
pub fn write_template_params(p: &TemplateParams) -> String {
    let mut out = String::new();
    out.push_str("pennon-template 1\n");
    let bits: Vec<String> = p
        .handedness
        .iter()
        .map(|&b| (b as u8).to_string())
        .collect();
    let _ = writeln!(out, "handedness {}", bits.join(" "));
    let _ = writeln!(
        out,
        "reflections {} {} {}",
        p.reflections[0] as u8, p.reflections[1] as u8, p.reflections[2] as u8
    );
    for clasp in &p.clasps {
        let _ = writeln!(
            out,
            "clasp {} {} {}",
            class_name(clasp.a),
            class_name(clasp.b),
            clasp.reversed as u8
        );
    }
    for chord in &p.chords {
        let _ = writeln!(
            out,
            "chord {} {} {} {}",
            class_name(chord.a),
            class_name(chord.b),
            chord.pos_a,
            chord.pos_b
        );
    }
    for &(curve, arc) in &p.crosscaps {
        let _ = writeln!(out, "crosscap {} {arc}", class_name(curve));
    }
    let anchors: Vec<String> = p
        .anchor_flips
        .iter()
        .map(|&b| (b as u8).to_string())
        .collect();
    let _ = writeln!(out, "anchors {}", anchors.join(" "));
    out
}

fn class_by_name(name: &str, ln: usize) -> Result<usize, FormatError> {
    (0..CURVE_CLASSES)
        .find(|&c| class_name(c) == name)
        .ok_or_else(|| FormatError::Syntax(ln, format!("unknown curve class `{name}`")))
}

pub fn parse_template_params(text: &str) -> Result<TemplateParams, FormatError> {
    let mut lines = text.lines().enumerate();
    let (ln, header) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("empty input".into()))?;
    if header.trim() != "pennon-template 1" {
        return Err(FormatError::Version(format!("line {}: {header}", ln + 1)));
    }
    let mut handedness = Vec::new();
    let mut reflections = [false; 3];
    let mut clasps = Vec::new();
    let mut chords = Vec::new();
    let mut crosscaps = Vec::new();
    let mut anchor_flips = [false; CURVE_CLASSES];
    for (ln, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, rest) = line
            .split_once(' ')
            .ok_or_else(|| FormatError::Syntax(ln + 1, "malformed line".into()))?;
        match word {
            "handedness" => {
                handedness = rest
                    .split_whitespace()
                    .map(|b| match b {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        _ => Err(FormatError::Syntax(ln + 1, "bad bit".into())),
                    })
                    .collect::<Result<_, _>>()?;
            }
            "reflections" => {
                let bits: Vec<&str> = rest.split_whitespace().collect();
                if bits.len() != 3 {
                    return Err(FormatError::Syntax(ln + 1, "need 3 reflection bits".into()));
                }
                for (i, b) in bits.iter().enumerate() {
                    reflections[i] = *b == "1";
                }
            }
            "clasp" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(FormatError::Syntax(ln + 1, "clasp needs 3 fields".into()));
                }
                clasps.push(Clasp {
                    a: class_by_name(parts[0], ln + 1)?,
                    b: class_by_name(parts[1], ln + 1)?,
                    reversed: parts[2] == "1",
                });
            }
            "chord" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 4 {
                    return Err(FormatError::Syntax(ln + 1, "chord needs 4 fields".into()));
                }
                chords.push(Chord {
                    a: class_by_name(parts[0], ln + 1)?,
                    b: class_by_name(parts[1], ln + 1)?,
                    pos_a: parts[2]
                        .parse()
                        .map_err(|_| FormatError::Syntax(ln + 1, "bad position".into()))?,
                    pos_b: parts[3]
                        .parse()
                        .map_err(|_| FormatError::Syntax(ln + 1, "bad position".into()))?,
                });
            }
            "crosscap" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(FormatError::Syntax(ln + 1, "crosscap needs 2 fields".into()));
                }
                let arc: usize = parts[1]
                    .parse()
                    .map_err(|_| FormatError::Syntax(ln + 1, "bad arc index".into()))?;
                crosscaps.push((class_by_name(parts[0], ln + 1)?, arc));
            }
            "anchors" => {
                let bits: Vec<&str> = rest.split_whitespace().collect();
                if bits.len() != CURVE_CLASSES {
                    return Err(FormatError::Syntax(
                        ln + 1,
                        format!("need {CURVE_CLASSES} anchor bits"),
                    ));
                }
                for (i, b) in bits.iter().enumerate() {
                    anchor_flips[i] = *b == "1";
                }
            }
            _ => {
                return Err(FormatError::Syntax(
                    ln + 1,
                    format!("unknown field `{word}`"),
                ));
            }
        }
    }
    Ok(TemplateParams {
        handedness,
        reflections,
        clasps,
        chords,
        crosscaps,
        anchor_flips,
    })
}

/// Exact rational as `p/q`.
pub fn rational_exact(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Fixed-point decimal approximation with the given number of fractional
/// digits, truncated toward zero.
pub fn rational_decimal(r: &BigRational, digits: u32) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let scale = BigUint::from(10u32).pow(digits);
    let scaled = (abs.numer().to_biguint().unwrap() * &scale) / abs.denom().to_biguint().unwrap();
    let int = &scaled / &scale;
    let frac = &scaled % &scale;
    let frac_str = format!("{:0width$}", frac, width = digits as usize);
    format!("{sign}{int}.{frac_str}")
}

/// Render a certificate with exact endpoints and decimal approximations.
pub fn write_certificate(c: &PfCertificate) -> String {
    let mut out = String::new();
    out.push_str("pennon-certificate 1\n");
    let _ = writeln!(out, "lower {}", rational_exact(&c.lower));
    let _ = writeln!(out, "upper {}", rational_exact(&c.upper));
    let _ = writeln!(out, "lower~ {}", rational_decimal(&c.lower, 12));
    let _ = writeln!(out, "upper~ {}", rational_decimal(&c.upper, 12));
    let _ = writeln!(out, "iterations {}", c.iterations);
    let _ = writeln!(out, "primitive {}", c.primitive as u8);
    let _ = writeln!(out, "degenerate {}", c.degenerate as u8);
    let _ = writeln!(out, "restricted {}", c.restricted_to_component as u8);
    out
}

/// Header of the sweep table.
pub fn sweep_header() -> &'static str {
    "n,k,genus,d_prime,lambda_lower,lambda_upper,k_bound_pass,g_bound_pass,cover_match"
}

pub fn certificate_brief(c: &PfCertificate) -> String {
    format!(
        "[{}, {}] ~ {}",
        rational_exact(&c.lower),
        rational_exact(&c.upper),
        rational_decimal(&c.upper, 12)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvesys::{CurveRecord, MarkedCurve, MarkingToken, SignedRibbonGraph};
    use crate::curvesys::CurveSystem;

    fn sample_system() -> CurveSystem {
        let graph =
            SignedRibbonGraph::new(vec![vec![0, 2, 1, 3]], &[(0, 1, false), (2, 3, true)])
                .unwrap();
        let mk = |name: &str, token, two_sided| MarkedCurve {
            name: name.into(),
            two_sided,
            token,
            anchor_flip: false,
            twist_sign: 1,
        };
        let mut sys = CurveSystem::new(
            graph,
            vec![
                CurveRecord {
                    marked: mk("a", MarkingToken::Preserving, true),
                    path: vec![0],
                },
                CurveRecord {
                    marked: mk("b", MarkingToken::Reversing, false),
                    path: vec![2],
                },
            ],
        )
        .unwrap();
        sys.register_rotation("swap", vec![1, 0]);
        sys.graph_mut().marks.insert(0, 1);
        sys
    }

    #[test]
    fn system_round_trip_is_byte_identical() {
        let sys = sample_system();
        let text = write_system(&sys);
        let parsed = parse_system(&text).unwrap();
        assert_eq!(write_system(&parsed), text);
        assert_eq!(parsed.curve_count(), 2);
        assert_eq!(parsed.rotation_perm("swap").unwrap(), &[1, 0]);
        assert_eq!(parsed.graph().marks.get(&0), Some(&1));
    }

    #[test]
    fn template_params_round_trip() {
        let params = TemplateParams {
            handedness: vec![true, false, true],
            reflections: [true, false, true],
            clasps: vec![Clasp {
                a: 2,
                b: 10,
                reversed: true,
            }],
            chords: vec![Chord {
                a: 0,
                b: 12,
                pos_a: 1,
                pos_b: 0,
            }],
            crosscaps: vec![(2, 0), (2, 3)],
            anchor_flips: [false; CURVE_CLASSES],
        };
        let text = write_template_params(&params);
        let parsed = parse_template_params(&text).unwrap();
        assert_eq!(parsed, params);
        assert_eq!(write_template_params(&parsed), text);
    }

    #[test]
    fn decimal_rendering() {
        let r = BigRational::new(7.into(), 4.into());
        assert_eq!(rational_decimal(&r, 3), "1.750");
        assert_eq!(rational_exact(&r), "7/4");
        let neg = BigRational::new((-1).into(), 3.into());
        assert_eq!(rational_decimal(&neg, 4), "-0.3333");
    }

    #[test]
    fn bad_version_rejected() {
        assert!(matches!(
            parse_system("pennon-system 2\n"),
            Err(FormatError::Version(_))
        ));
    }
}
