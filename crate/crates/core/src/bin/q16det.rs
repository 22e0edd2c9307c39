use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use q16det::analysis::{self, ScanConfig};
use q16det::classifier::{classify, classify_and_witness, Classification, Recipe};
use q16det::document::{verify_element, CertificateDocument, VerifyReport};
use q16det::group_algebra::{format_poly, GroupRingElement};
use q16det::Error;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "q16det", version, about = "Integer group determinants of the quaternion group Q16")]
struct Cli {
    /// Write certificates and reports into this directory as well as stdout.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Machine-readable output, one JSON object per line.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether integers are Q16 group determinants.
    Classify {
        #[arg(required = true, allow_negative_numbers = true)]
        n: Vec<BigInt>,
    },
    /// Build verified witness certificates.
    Witness {
        #[arg(required = true, allow_negative_numbers = true)]
        n: Vec<BigInt>,
    },
    /// Evaluate an element both ways, or re-verify certificate files.
    Verify {
        /// a0..a7,b0..b7
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
        coeffs: Option<Vec<BigInt>>,
        /// Certificate file (one JSON document per line).
        #[arg(long, conflicts_with = "coeffs")]
        cert: Option<PathBuf>,
    },
    /// Enumerate every element over a finite coefficient support.
    Scan {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1")]
        support: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = analysis::DEFAULT_LIMIT)]
        limit: u64,
        /// Also compute each determinant by elimination and compare.
        #[arg(long)]
        direct: bool,
        /// Record achieved values with |n| up to this bound.
        #[arg(long, default_value_t = 20_000)]
        window: i64,
    },
    /// Compare direct and factored determinants on random elements.
    Crosscheck {
        #[arg(long, default_value_t = 100_000)]
        count: u64,
        #[arg(long, default_value_t = 9)]
        height: i64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run the parity audit on random normalized elements.
    Audit {
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 9)]
        height: i64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } | Error::TooLarge(_) => EXIT_BUDGET,
                Error::BadInput(_) | Error::Document(_) => EXIT_USAGE,
                _ => EXIT_NEGATIVE,
            }
        }
    };
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Result<u8, Error> {
    if let Some(dir) = &cli.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::BadInput(format!("{}: {e}", dir.display())))?;
    }
    match &cli.command {
        Command::Classify { n } => cmd_classify(cli, n),
        Command::Witness { n } => cmd_witness(cli, n),
        Command::Verify { coeffs, cert } => match (coeffs, cert) {
            (Some(c), None) => cmd_verify_coeffs(cli, c),
            (None, Some(path)) => cmd_verify_cert(cli, path),
            _ => Err(Error::BadInput("verify needs --coeffs or --cert".into())),
        },
        Command::Scan { support, workers, limit, direct, window } => {
            let cfg = ScanConfig {
                support: support.clone(),
                workers: *workers,
                limit: *limit,
                direct: *direct,
                window: *window,
            };
            cmd_scan(cli, &cfg)
        }
        Command::Crosscheck { count, height, seed } => cmd_crosscheck(cli, *count, *height, *seed),
        Command::Audit { count, seed, height } => cmd_audit(cli, *count, *seed, *height),
    }
}

fn write_out(cli: &Cli, name: &str, body: &str) -> Result<(), Error> {
    if let Some(dir) = &cli.out_dir {
        let path = dir.join(name);
        fs::write(&path, format!("{body}\n")).map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn recipe_json(recipe: &Recipe) -> serde_json::Value {
    match recipe {
        Recipe::EvenFamily { t } => json!({"recipe": "even_family", "t": t}),
        Recipe::Odd1Mod8 => json!({"recipe": "odd_1_mod_8"}),
        Recipe::Odd5Mod8 { p, m } => json!({"recipe": "odd_5_mod_8", "p": p.to_string(), "m": m.to_string()}),
    }
}

fn cmd_classify(cli: &Cli, ns: &[BigInt]) -> Result<u8, Error> {
    let mut all = true;
    for n in ns {
        let class = classify(n);
        all &= class.is_achievable();
        if cli.json {
            let doc = match &class {
                Classification::Achievable { recipe } => {
                    json!({"n": n.to_string(), "achievable": true, "recipe": recipe_json(recipe)})
                }
                Classification::NotAchievable { reason } => {
                    json!({"n": n.to_string(), "achievable": false, "reason": format!("{reason:?}")})
                }
            };
            println!("{doc}");
        } else {
            match &class {
                Classification::Achievable { recipe } => {
                    let how = match recipe {
                        Recipe::EvenFamily { t } => format!("multiple of 2^10, n/2^10 = {t} mod 4"),
                        Recipe::Odd1Mod8 => "1 mod 8".to_string(),
                        Recipe::Odd5Mod8 { p, m } => format!("5 mod 8, n = m p^2 with p = {p}, m = {m}"),
                    };
                    println!("{n}: achievable ({how})");
                }
                Classification::NotAchievable { reason } => println!("{n}: not achievable, {reason} [{reason:?}]"),
            }
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_witness(cli: &Cli, ns: &[BigInt]) -> Result<u8, Error> {
    let mut all = true;
    for n in ns {
        match classify_and_witness(n)? {
            Ok(cert) => {
                let doc = CertificateDocument::from(&cert);
                let line = doc.to_json();
                write_out(cli, &format!("certificate_{n}.json"), &line)?;
                if cli.json {
                    println!("{line}");
                } else {
                    println!("n = {n}  [{}, m = {}]", doc.family, doc.m);
                    println!("  f(x) = {}", format_poly(&cert.element.a));
                    println!("  g(x) = {}", format_poly(&cert.element.b));
                    let ff = &cert.factored;
                    println!("  A = {}, B = {}, C = {}, D = {}  (X + Y sqrt2 = {} + {} sqrt2)", ff.a, ff.b, ff.c, ff.d, ff.z.x, ff.z.y);
                    if let Some(p) = &doc.p {
                        println!("  p = {p}, case = {:?}, swapped = {}", doc.case.unwrap(), doc.swapped);
                    }
                    println!("  verified: {}", cert.verified);
                }
            }
            Err(reason) => {
                all = false;
                if cli.json {
                    println!("{}", json!({"n": n.to_string(), "achievable": false, "reason": format!("{reason:?}")}));
                } else {
                    println!("{n}: not achievable, {reason}");
                }
            }
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_NEGATIVE })
}

fn report_json(r: &VerifyReport) -> serde_json::Value {
    let ff = &r.factored;
    json!({
        "direct": r.direct.to_string(),
        "factored": r.factored_determinant.to_string(),
        "A": ff.a.to_string(), "B": ff.b.to_string(), "C": ff.c.to_string(), "D": ff.d.to_string(),
        "X": ff.z.x.to_string(), "Y": ff.z.y.to_string(),
        "agree": r.agree(),
    })
}

fn print_report(cli: &Cli, r: &VerifyReport) {
    if cli.json {
        println!("{}", report_json(r));
    } else {
        let ff = &r.factored;
        println!("direct determinant:   {}", r.direct);
        println!("A B C^2 D^2:          {}", r.factored_determinant);
        println!("A = {}, B = {}, C = {}, D = {}, X = {}, Y = {}", ff.a, ff.b, ff.c, ff.d, ff.z.x, ff.z.y);
        println!("agree: {}", r.agree());
    }
}

fn cmd_verify_coeffs(cli: &Cli, coeffs: &[BigInt]) -> Result<u8, Error> {
    let e = GroupRingElement::from_coeffs(coeffs)
        .ok_or_else(|| Error::BadInput(format!("expected 16 coefficients, got {}", coeffs.len())))?;
    let r = verify_element(&e);
    print_report(cli, &r);
    Ok(if r.agree() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_verify_cert(cli: &Cli, path: &Path) -> Result<u8, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))?;
    let mut ok = true;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let doc = CertificateDocument::from_json(line)?;
        match doc.reverify() {
            Ok(r) => {
                if !cli.json {
                    println!("certificate for n = {}: re-verified", doc.n);
                }
                print_report(cli, &r);
            }
            Err(e) => {
                ok = false;
                println!("certificate for n = {}: FAILED: {e}", doc.n);
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_scan(cli: &Cli, cfg: &ScanConfig) -> Result<u8, Error> {
    let rep = analysis::exhaustive_scan(cfg)?;
    let doc = json!({
        "support": rep.support,
        "scanned": rep.scanned,
        "zero": rep.zero,
        "even_nonzero": rep.even_nonzero,
        "odd_mod8": {"1": rep.odd_mod8[0], "3": rep.odd_mod8[1], "5": rep.odd_mod8[2], "7": rep.odd_mod8[3]},
        "window": rep.window,
        "achieved_in_window": rep.achieved.len(),
        "violation_count": rep.violation_count,
        "violations": rep.violations.iter().map(|v| json!({
            "index": v.index, "coeffs": v.coeffs, "value": v.value.to_string(), "kind": format!("{:?}", v.kind)
        })).collect::<Vec<_>>(),
    });
    write_out(cli, "scan_report.json", &doc.to_string())?;
    if cli.json {
        println!("{doc}");
    } else {
        println!("support {:?}: {} scanned, {} violations", rep.support, rep.scanned, rep.violation_count);
        println!(
            "  zero {}, even nonzero {}, odd by residue mod 8: 1 -> {}, 3 -> {}, 5 -> {}, 7 -> {}",
            rep.zero, rep.even_nonzero, rep.odd_mod8[0], rep.odd_mod8[1], rep.odd_mod8[2], rep.odd_mod8[3]
        );
        println!("  {} distinct values with |n| <= {}", rep.achieved.len(), rep.window);
        for v in &rep.violations {
            println!("  violation {:?} at index {}: {} from {:?}", v.kind, v.index, v.value, v.coeffs);
        }
    }
    Ok(if rep.violation_count == 0 { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_crosscheck(cli: &Cli, count: u64, height: i64, seed: u64) -> Result<u8, Error> {
    let rep = analysis::random_crosscheck(count, height, seed)?;
    let doc = json!({"count": rep.count, "height": rep.height, "seed": rep.seed, "mismatches": rep.mismatches.len()});
    write_out(cli, "crosscheck_report.json", &doc.to_string())?;
    if cli.json {
        println!("{doc}");
    } else {
        println!("{} elements, height {}, seed {}: 0 mismatches", rep.count, rep.height, rep.seed);
    }
    Ok(EXIT_OK)
}

fn cmd_audit(cli: &Cli, count: u64, seed: u64, height: i64) -> Result<u8, Error> {
    let s = analysis::random_audit(count, height, seed);
    let doc = json!({
        "audited": s.audited,
        "rejected": s.rejected,
        "seed": s.seed,
        "height": s.height,
        "failures": s.failures.iter().map(|r| json!({
            "f": r.element.a.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "g": r.element.b.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "failed": r.failures,
        })).collect::<Vec<_>>(),
    });
    write_out(cli, "audit_report.json", &doc.to_string())?;
    if cli.json {
        println!("{doc}");
    } else {
        println!(
            "{} normalized elements audited ({} draws skipped), {} failures",
            s.audited,
            s.rejected,
            s.failures.len()
        );
    }
    Ok(if s.failures.is_empty() { EXIT_OK } else { EXIT_NEGATIVE })
}
