//! Command-line front end: generate family instances, certify stretch
//! factors, verify the spectral bound chain, lift to double covers, fuzz
//! the adjacency conditions, and emit sweep tables.
//!
//! Exit codes: 0 on success / all-verified, 1 on a verification failure,
//! 2 on an input or validation error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use pennon::family::template::BlockTemplate;
use pennon::family::{
    cover_check, default_template, genus_formula, oriented_sum_bookkeeping, validate_template,
    verify_upper_bound, FamilyInstance,
};
use pennon::spectra::{fuzz_partition_instances, spectral_bound_check, BoundOutcome, FuzzParams};
use pennon::textio;

#[derive(Parser)]
#[command(
    name = "pennon",
    version,
    about = "Certified stretch factors for twist maps on non-orientable surfaces"
)]
struct Cli {
    /// Template parameter file overriding the built-in block pattern.
    #[arg(long, global = true, env = "PENNON_TEMPLATE")]
    template: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Column count (number of fundamental domains of the column rotation).
    #[arg(long)]
    n: u64,
    /// Row count; the family needs k >= 3.
    #[arg(long)]
    k: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family instance and write its curve system.
    GenFamily {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Output path for the curve-system text (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also report the surgery bookkeeping for this r.
        #[arg(long)]
        r: Option<u64>,
    },
    /// Certify the stretch factor of the family word.
    Stretch {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Certificate width, e.g. 1e-9 or 1/1000000000.
        #[arg(long, default_value = "1e-9")]
        gap: String,
    },
    /// Verify the certified bound chain for one instance.
    VerifyBounds {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "1e-9")]
        gap: String,
    },
    /// Validate the four construction conditions for the family word.
    CheckPenner {
        #[command(flatten)]
        inst: InstanceArgs,
    },
    /// Build the orientation double cover, lift the word, and compare
    /// certified stretch factors.
    Cover {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value = "1e-9")]
        gap: String,
    },
    /// Generate condition-satisfying random instances and verify the
    /// spectral radius bound on every one.
    Lemma23Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        parts: usize,
        #[arg(long, default_value_t = 3)]
        max_part_size: usize,
        #[arg(long, default_value_t = 3)]
        degree: u64,
        #[arg(long, default_value = "1/1024")]
        gap: String,
    },
    /// Run the verification grid and emit one row per cell.
    Sweep {
        /// Inclusive range, e.g. 1..2 or a single value.
        #[arg(long, default_value = "1..2")]
        n: String,
        #[arg(long, default_value = "3..5")]
        k: String,
        #[arg(long, default_value = "1e-9")]
        gap: String,
        /// Output path for the table (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_gap(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let q: BigInt = q.parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let exp: i32 = e.parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        let mantissa = parse_gap(m)?;
        let ten = BigRational::from_integer(10.into());
        let mut scale = BigRational::one();
        for _ in 0..exp.unsigned_abs() {
            scale *= &ten;
        }
        return Ok(if exp >= 0 {
            mantissa * scale
        } else {
            mantissa / scale
        });
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| format!("bad number `{s}`"))?
        };
        let digits = frac.len() as u32;
        let frac_num: BigInt = frac.parse().map_err(|_| format!("bad number `{s}`"))?;
        let den = BigInt::from(10u32).pow(digits);
        return Ok(BigRational::new(int * &den + frac_num, den));
    }
    let v: BigInt = s.parse().map_err(|_| format!("bad number `{s}`"))?;
    Ok(BigRational::from_integer(v))
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
        if a > b {
            return Err(format!("empty range `{s}`"));
        }
        Ok((a, b))
    } else {
        let v: u64 = s.trim().parse().map_err(|_| format!("bad value `{s}`"))?;
        Ok((v, v))
    }
}

enum Verdict {
    Verified,
    Failed,
}

fn load_template(path: &Option<PathBuf>) -> Result<BlockTemplate, String> {
    let template = match path {
        None => default_template(),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let params =
                textio::parse_template_params(&text).map_err(|e| format!("template: {e}"))?;
            pennon::family::template::chain_template(&params)
                .map_err(|e| format!("template: {e}"))?
        }
    };
    validate_template(&template).map_err(|e| format!("template validation: {e}"))?;
    Ok(template)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
    }
}

fn run(cli: Cli) -> Result<Verdict, String> {
    match cli.command {
        Command::GenFamily { inst, out, r } => {
            let template = load_template(&cli.template)?;
            let fam = FamilyInstance::with_template(&template, inst.n, inst.k)
                .map_err(|e| e.to_string())?;
            let sig = fam.signature().map_err(|e| e.to_string())?;
            let text = textio::write_system(fam.system());
            emit(&out, &text)?;
            eprintln!(
                "built ({}, {}): genus {} with {} marked points, {} curves, degree constant {}",
                inst.n,
                inst.k,
                sig.genus,
                sig.marked_points,
                fam.system().curve_count(),
                fam.d_prime
            );
            if let Some(r) = r {
                let book =
                    oriented_sum_bookkeeping(inst.n, inst.k, r).map_err(|e| e.to_string())?;
                eprintln!(
                    "surgered genus at r = {r}: {} (chi {}), punctured chi {}",
                    book.closed.genus, book.closed.euler_characteristic, book.punctured_chi
                );
            }
            Ok(Verdict::Verified)
        }
        Command::Stretch { inst, gap } => {
            let gap = parse_gap(&gap)?;
            let template = load_template(&cli.template)?;
            let fam = FamilyInstance::with_template(&template, inst.n, inst.k)
                .map_err(|e| e.to_string())?;
            let cert = fam.stretch_factor(&gap).map_err(|e| e.to_string())?;
            print!("{}", textio::write_certificate(&cert));
            Ok(Verdict::Verified)
        }
        Command::VerifyBounds { inst, gap } => {
            let gap = parse_gap(&gap)?;
            let template = load_template(&cli.template)?;
            let fam = FamilyInstance::with_template(&template, inst.n, inst.k)
                .map_err(|e| e.to_string())?;
            let report = verify_upper_bound(&fam, &gap).map_err(|e| e.to_string())?;
            println!(
                "stretch factor in {}",
                textio::certificate_brief(&report.certificate)
            );
            println!("degree constant D' = {}", report.d_prime);
            println!("threshold 4 D^4 = {}", report.threshold);
            let describe = |o: &BoundOutcome| match o {
                BoundOutcome::Holds { .. } => "holds",
                BoundOutcome::Violated { .. } => "VIOLATED",
                BoundOutcome::Indeterminate => "indeterminate (smaller gap needed)",
            };
            println!(
                "power bound lambda^(k-1) <= 4 D^4: {}",
                describe(&report.power_bound)
            );
            println!(
                "genus bound lambda^g <= (4 D^4)^(28 n): {}",
                describe(&report.genus_bound)
            );
            if report.both_hold() {
                Ok(Verdict::Verified)
            } else {
                Ok(Verdict::Failed)
            }
        }
        Command::CheckPenner { inst } => {
            let template = load_template(&cli.template)?;
            let fam = FamilyInstance::with_template(&template, inst.n, inst.k)
                .map_err(|e| e.to_string())?;
            let report = fam.validate_word();
            println!("condition 1 (filling system): {}", report.filling);
            println!(
                "condition 2 (inconsistent markings): {}",
                report.inconsistent_markings
            );
            println!(
                "condition 3 (every curve twisted, unrolled over {} iterations): {}",
                report.unrolled_power, report.every_curve_twisted
            );
            println!(
                "condition 4 (twist sign consistency): {}",
                report.twist_signs_consistent
            );
            if !report.untwisted_curves.is_empty() {
                println!("  untwisted: {}", report.untwisted_curves.join(", "));
            }
            if !report.sign_violations.is_empty() {
                println!("  sign violations: {}", report.sign_violations.join(", "));
            }
            Ok(if report.passes() {
                Verdict::Verified
            } else {
                Verdict::Failed
            })
        }
        Command::Cover { inst, gap } => {
            let gap = parse_gap(&gap)?;
            let template = load_template(&cli.template)?;
            let fam = FamilyInstance::with_template(&template, inst.n, inst.k)
                .map_err(|e| e.to_string())?;
            let check = cover_check(&fam, &gap).map_err(|e| e.to_string())?;
            println!(
                "base chi = {}, cover chi = {}",
                check.base_chi, check.cover_chi
            );
            println!("cover orientable: {}", check.cover_orientable);
            println!("lifted basis dimension: {}", check.lifted_dimension);
            println!("base   {}", textio::certificate_brief(&check.base));
            println!("lifted {}", textio::certificate_brief(&check.lifted));
            println!("intervals overlap: {}", check.base.overlaps(&check.lifted));
            Ok(if check.passes() {
                Verdict::Verified
            } else {
                Verdict::Failed
            })
        }
        Command::Lemma23Fuzz {
            seed,
            count,
            parts,
            max_part_size,
            degree,
            gap,
        } => {
            let gap = parse_gap(&gap)?;
            let params = FuzzParams {
                parts,
                max_part_size,
                degree_bound: degree,
            };
            let instances =
                fuzz_partition_instances(seed, params, count).map_err(|e| e.to_string())?;
            let mut violations = 0usize;
            for (i, (m, p)) in instances.iter().enumerate() {
                let check = spectral_bound_check(m, p, &gap).map_err(|e| e.to_string())?;
                match check.outcome {
                    BoundOutcome::Holds { .. } => {}
                    _ => {
                        violations += 1;
                        println!("instance {i}: BOUND NOT CERTIFIED");
                    }
                }
            }
            println!(
                "{} instances checked, {} violations (seed {seed}, parts {parts}, degree {degree})",
                instances.len(),
                violations
            );
            Ok(if violations == 0 {
                Verdict::Verified
            } else {
                Verdict::Failed
            })
        }
        Command::Sweep { n, k, gap, out } => {
            let gap = parse_gap(&gap)?;
            let (n0, n1) = parse_range(&n)?;
            let (k0, k1) = parse_range(&k)?;
            let template = load_template(&cli.template)?;
            let mut table = String::new();
            table.push_str(textio::sweep_header());
            table.push('\n');
            let mut all_ok = true;
            for n in n0..=n1 {
                for k in k0..=k1 {
                    let fam = FamilyInstance::with_template(&template, n, k)
                        .map_err(|e| e.to_string())?;
                    let report = verify_upper_bound(&fam, &gap).map_err(|e| e.to_string())?;
                    let genus = genus_formula(n, k).map_err(|e| e.to_string())?;
                    let pass = |o: &BoundOutcome| matches!(o, BoundOutcome::Holds { .. });
                    let cover = if n == 1 {
                        let check = cover_check(&fam, &gap).map_err(|e| e.to_string())?;
                        if check.passes() {
                            "1"
                        } else {
                            all_ok = false;
                            "0"
                        }
                        .to_string()
                    } else {
                        "-".to_string()
                    };
                    if !report.both_hold() {
                        all_ok = false;
                    }
                    table.push_str(&format!(
                        "{n},{k},{genus},{},{},{},{},{},{cover}\n",
                        report.d_prime,
                        textio::rational_exact(&report.certificate.lower),
                        textio::rational_exact(&report.certificate.upper),
                        pass(&report.power_bound) as u8,
                        pass(&report.genus_bound) as u8,
                    ));
                }
            }
            emit(&out, &table)?;
            Ok(if all_ok {
                Verdict::Verified
            } else {
                Verdict::Failed
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Verified) => ExitCode::SUCCESS,
        Ok(Verdict::Failed) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_parsing() {
        assert_eq!(
            parse_gap("1e-9").unwrap(),
            BigRational::new(1.into(), 1_000_000_000.into())
        );
        assert_eq!(
            parse_gap("1/1024").unwrap(),
            BigRational::new(1.into(), 1024.into())
        );
        assert_eq!(
            parse_gap("0.25").unwrap(),
            BigRational::new(1.into(), 4.into())
        );
        assert!(parse_gap("x").is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1..2").unwrap(), (1, 2));
        assert_eq!(parse_range("3").unwrap(), (3, 3));
        assert!(parse_range("5..2").is_err());
    }
}
