//! Command-line interface: classify or factor a polynomial, list its p-adic
//! roots, verify a stored certificate, or sweep a corpus file.
//!
//! Exit codes: 0 = computed, 2 = parse or usage error, 3 = verification or
//! corpus mismatch, 4 = internal contract violation.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use zxx::batch::map_batch;
use zxx::classify::Rule;
use zxx::factorize::FactorizationCertificate;
use zxx::parse::parse_poly;
use zxx::{classify, factor, roots_in_zp, verify_certificate, Error, FactorOutcome, Prime,
    TruncatedSeries, Valuation, DEFAULT_ORDER};

#[derive(Parser)]
#[command(name = "zxx", about = "Reducibility of integer polynomials in Z[[x]]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a polynomial as Unit / Irreducible / Reducible / Inconclusive
    Classify {
        /// Polynomial, e.g. "4 + 8x + 3x^2" or "[4, 8, 3]"
        poly: String,
        /// Emit JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Classify and, when reducible, produce a truncated factorization
    Factor {
        poly: String,
        /// Number of series coefficients to produce
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// List the p-adic roots of a polynomial
    Roots {
        poly: String,
        /// The prime p
        #[arg(long)]
        prime: u64,
        /// Residue precision (digits of p)
        #[arg(long, default_value_t = 12)]
        precision: u64,
        #[arg(long)]
        json: bool,
    },
    /// Re-verify a factorization: check A * B = input mod x^terms
    Verify {
        /// The factored polynomial
        #[arg(long)]
        input: String,
        /// JSON array of decimal-string coefficients for factor A
        #[arg(long)]
        a: PathBuf,
        /// JSON array of decimal-string coefficients for factor B
        #[arg(long)]
        b: PathBuf,
        /// Number of series coefficients to compare
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        terms: usize,
    },
    /// Classify every entry of a corpus file and check expected verdicts
    Corpus {
        /// Lines of "poly" or "poly ; Verdict" or "poly ; Verdict ; Rule"
        file: PathBuf,
        /// Worker threads (default: let the pool decide)
        #[arg(long)]
        jobs: Option<usize>,
        /// Series order used when re-verifying reducible entries
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::Parse { .. } => ExitCode::from(2),
        Error::ContractViolation(_) => ExitCode::from(4),
        _ => ExitCode::from(2),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn run(cli: Cli) -> zxx::Result<ExitCode> {
    match cli.command {
        Command::Classify { poly, json } => {
            let f = parse_poly(&poly)?;
            let c = classify(&f)?;
            if json {
                println!("{}", c.to_json());
            } else {
                println!("{:?} ({:?})", c.verdict, c.rule);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Factor { poly, terms, json } => {
            let f = parse_poly(&poly)?;
            match factor(&f, terms)? {
                FactorOutcome::Certificate(cert) => {
                    if json {
                        println!("{}", cert.to_json());
                    } else {
                        println!("Reducible ({:?})", cert.rule);
                        println!("A = {}", cert.a);
                        println!("B = {}", cert.b);
                    }
                }
                FactorOutcome::Classified(c) => {
                    if json {
                        println!("{}", c.to_json());
                    } else {
                        println!("{:?} ({:?})", c.verdict, c.rule);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Roots {
            poly,
            prime,
            precision,
            json,
        } => {
            let f = parse_poly(&poly)?;
            let p = Prime::from_u64(prime)?;
            let roots = roots_in_zp(&f, &p, precision.max(1))?;
            if json {
                let items: Vec<serde_json::Value> = roots
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "residue": r.residue.to_string(),
                            "precision": r.precision.to_string(),
                            "valuation": match r.valuation {
                                Valuation::Exact(v) => serde_json::json!(v.to_string()),
                                Valuation::AtLeast(v) => serde_json::json!(format!(">={v}")),
                            },
                            "simple": r.simple,
                        })
                    })
                    .collect();
                println!("{}", serde_json::Value::Array(items));
            } else if roots.is_empty() {
                println!("no roots in Z_{prime}");
            } else {
                for r in roots {
                    let val = match r.valuation {
                        Valuation::Exact(v) => v.to_string(),
                        Valuation::AtLeast(v) => format!(">={v}"),
                    };
                    println!(
                        "{} mod {}^{} (valuation {}, {})",
                        r.residue,
                        prime,
                        r.precision,
                        val,
                        if r.simple { "simple" } else { "multiple" }
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, a, b, terms } => {
            let f = parse_poly(&input)?;
            let cert = FactorizationCertificate {
                input: f,
                a: series_from_file(&a, terms)?,
                b: series_from_file(&b, terms)?,
                order: terms,
                rule: Rule::SufficientConditionsExhausted,
                witnesses: serde_json::json!({}),
            };
            if verify_certificate(&cert) {
                println!("true");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("false");
                Ok(ExitCode::from(3))
            }
        }
        Command::Corpus {
            file,
            jobs,
            terms,
            json,
        } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Error::Parse {
                position: 0,
                message: format!("cannot read {}: {e}", file.display()),
            })?;
            let entries: Vec<&str> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect();
            let results = map_batch(&entries, jobs, |line| corpus_check(line, terms));
            let mut failures = 0usize;
            for (line, result) in entries.iter().zip(&results) {
                match result {
                    Ok(summary) => {
                        if json {
                            println!(
                                "{}",
                                serde_json::json!({ "input": line, "status": "ok", "got": summary })
                            );
                        } else {
                            println!("ok   {line}");
                        }
                    }
                    Err(msg) => {
                        failures += 1;
                        if json {
                            println!(
                                "{}",
                                serde_json::json!({ "input": line, "status": "fail", "reason": msg })
                            );
                        } else {
                            println!("FAIL {line}: {msg}");
                        }
                    }
                }
            }
            if failures == 0 {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("{failures} corpus entr{} failed", if failures == 1 { "y" } else { "ies" });
                Ok(ExitCode::from(3))
            }
        }
    }
}

/// Checks one corpus line against its expected verdict/rule, re-verifying
/// the factorization certificate for reducible entries.
fn corpus_check(line: &str, terms: usize) -> std::result::Result<String, String> {
    let mut parts = line.split(';').map(str::trim);
    let poly_text = parts.next().unwrap_or_default();
    let expected_verdict = parts.next();
    let expected_rule = parts.next();

    let f = parse_poly(poly_text).map_err(|e| e.to_string())?;
    let c = classify(&f).map_err(|e| e.to_string())?;
    let got = format!("{:?} ({:?})", c.verdict, c.rule);
    if let Some(v) = expected_verdict {
        if format!("{:?}", c.verdict) != v {
            return Err(format!("expected verdict {v}, got {got}"));
        }
    }
    if let Some(r) = expected_rule {
        if format!("{:?}", c.rule) != r {
            return Err(format!("expected rule {r}, got {got}"));
        }
    }
    if c.verdict == zxx::Verdict::Reducible {
        match factor(&f, terms).map_err(|e| e.to_string())? {
            FactorOutcome::Certificate(cert) => {
                if !verify_certificate(&cert) {
                    return Err("certificate failed re-verification".into());
                }
            }
            FactorOutcome::Classified(_) => {
                return Err("reducible entry produced no certificate".into())
            }
        }
    }
    Ok(got)
}

/// Reads a JSON array of decimal-string (or integer) coefficients and pads
/// or truncates it to `terms` entries.
fn series_from_file(path: &PathBuf, terms: usize) -> zxx::Result<TruncatedSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        position: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        position: 0,
        message: format!("invalid JSON in {}: {e}", path.display()),
    })?;
    Ok(TruncatedSeries::from_json(&v)?.truncated(terms))
}
