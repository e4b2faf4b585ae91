//! Command-line front end: parse algebra or family documents, dispatch the
//! curvature computations and theorem checks, and emit reports.
//!
//! Exit codes: 0 success / property verified, 1 a checked property failed,
//! 2 input error.

pub mod doc;
pub mod report;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use doc::ParsedInput;
use hermlie::{Error, MixedParams, Result};
use report::Report;
use sha2::{Digest, Sha256};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hermlie",
    version,
    about = "Chern/Bismut curvature and constant-mixed-curvature checks for Hermitian Lie algebras"
)]
struct Cli {
    /// Absolute tolerance for residual checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Emit the machine-readable JSON report
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized subroutines
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Append wall-clock timing to the report (off by default so reports are
    /// byte-reproducible)
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Lie-algebra and frame-pattern axioms of a document
    Validate { file: String },
    /// Torsion, curvature, Ricci, symmetrization and Streets-Tian tensors
    Curvature {
        file: String,
        /// Also compute the (1,1) Bismut curvature and the BTP flag
        #[arg(long)]
        bismut: bool,
    },
    /// Constant-mixed-curvature test
    Mixed {
        file: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        /// Assert this value of the constant
        #[arg(long, allow_negative_numbers = true)]
        c: Option<f64>,
    },
    /// Nilpotency, solvability and related flags
    Classify { file: String },
    /// Run one of the theorem checks
    Verify {
        /// Input document (omit for the pointwise checks wallach,
        /// middle-type and thm3)
        file: Option<String>,
        /// One of: 1, lemma-cd0, wallach, middle-type, thm3
        #[arg(long)]
        theorem: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        /// middle-type: Bismut curvature entry x
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        /// middle-type: Bismut curvature entry y
        #[arg(long, allow_negative_numbers = true)]
        y: Option<f64>,
        /// middle-type: torsion constant a1 > 0
        #[arg(long, allow_negative_numbers = true)]
        a1: Option<f64>,
        /// middle-type: candidate constant c
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        c: f64,
        /// thm3: dimension of the random admissible torsion draw
        #[arg(long)]
        n: Option<usize>,
    },
    /// Residual-minimization search for constant-mixed-curvature instances
    Search {
        /// almost-abelian or codim2
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 400)]
        max_iters: usize,
        /// Hold the candidate constant fixed instead of fitting it
        #[arg(long, allow_negative_numbers = true)]
        target_c: Option<f64>,
    },
    /// List or emit the bundled fixtures
    Fixtures {
        #[arg(long)]
        list: bool,
        /// Emit one fixture as an algebra document
        #[arg(long)]
        emit: Option<String>,
    },
}

/// Run with explicit I/O capture; `stdin` supplies the content of `-` files.
pub fn run(args: &[String], stdin: &str, stdout: &mut String, stderr: &mut String) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    stdout.push_str(&rendered);
                    EXIT_OK
                }
                _ => {
                    stderr.push_str(&rendered);
                    EXIT_INPUT_ERROR
                }
            };
        }
    };
    let started = Instant::now();
    match dispatch(&cli, stdin) {
        Ok(Output::Report(mut report, code)) => {
            if cli.timings {
                report.timing_ms = Some(started.elapsed().as_millis());
            }
            if cli.json {
                stdout.push_str(&report.to_json());
            } else {
                stdout.push_str(&report.to_text());
            }
            code
        }
        Ok(Output::Raw(text, code)) => {
            stdout.push_str(&text);
            code
        }
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            EXIT_INPUT_ERROR
        }
    }
}

/// Either a structured report or a raw document (`fixtures --emit`).
enum Output {
    Report(Report, i32),
    Raw(String, i32),
}

fn digest_of(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let hex: String = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    format!("sha256:{hex}")
}

fn load(file: &str, stdin: &str, tol: f64) -> Result<(ParsedInput, String)> {
    let text = if file == "-" {
        stdin.to_owned()
    } else {
        std::fs::read_to_string(file)
            .map_err(|e| Error::input(format!("cannot read {file}: {e}")))?
    };
    let parsed = doc::parse_document(&text, tol)?;
    Ok((parsed, digest_of(&text)))
}

fn dispatch(cli: &Cli, stdin: &str) -> Result<Output> {
    match &cli.command {
        Command::Validate { file } => {
            let (input, digest) = load(file, stdin, cli.tol)?;
            let alg = input.algebra()?;
            let v = hermlie::validate(alg, cli.tol);
            let mut report = Report::new("validate", digest, cli.tol);
            report.n = Some(alg.n());
            report.frame_kind = Some(alg.frame_kind().as_str().to_owned());
            let passed = v.passed;
            report.validation = Some(report::ValidationJson {
                antisymmetry_residual: v.antisymmetry_residual,
                jacobi_residual: v.jacobi_residual,
                pattern_residual: v.pattern_residual,
                passed,
            });
            // a document that fails the axioms is bad input
            Ok(Output::Report(report, if passed { EXIT_OK } else { EXIT_INPUT_ERROR }))
        }
        Command::Curvature { file, bismut } => {
            let (input, digest) = load(file, stdin, cli.tol)?;
            let mut report = Report::new("curvature", digest, cli.tol);
            report.n = Some(input.n());
            match &input {
                ParsedInput::Algebra(alg) => {
                    report.frame_kind = Some(alg.frame_kind().as_str().to_owned());
                    let t = hermlie::chern_torsion(alg);
                    let r = hermlie::chern_curvature(alg);
                    let ric = hermlie::first_ricci(&r);
                    let rhat = hermlie::symmetrize(&r);
                    let b = hermlie::streets_tian(&t);
                    let (rb, btp) = if *bismut {
                        let rb = hermlie::bismut_curvature(alg);
                        let btp = hermlie::is_btp(alg, cli.tol);
                        (Some(report::sparse4(rb.tensor())), Some(btp))
                    } else {
                        (None, None)
                    };
                    report.tensors = Some(report::TensorsJson {
                        torsion: Some(report::sparse3(t.tensor())),
                        curvature: report::sparse4(r.tensor()),
                        ricci: report::sparse_mat(ric.matrix()),
                        symmetrized: report::sparse4(rhat.tensor()),
                        streets_tian: Some(report::sparse_mat(&b)),
                        streets_tian_rank: Some(hermlie::streets_tian_rank(&b, cli.tol)),
                        bismut: rb,
                        is_btp: btp,
                    });
                }
                ParsedInput::Pointwise(pw) => {
                    if *bismut {
                        return Err(Error::input(
                            "--bismut needs structure constants; the input is pointwise",
                        ));
                    }
                    let rhat = hermlie::symmetrize(&pw.r);
                    report.tensors = Some(report::TensorsJson {
                        torsion: None,
                        curvature: report::sparse4(pw.r.tensor()),
                        ricci: report::sparse_mat(pw.ric.matrix()),
                        symmetrized: report::sparse4(rhat.tensor()),
                        streets_tian: None,
                        streets_tian_rank: None,
                        bismut: None,
                        is_btp: None,
                    });
                }
            }
            Ok(Output::Report(report, EXIT_OK))
        }
        Command::Mixed { file, alpha, beta, c } => {
            let (input, digest) = load(file, stdin, cli.tol)?;
            let mp = MixedParams::new(*alpha, *beta)?;
            let verdict = match &input {
                ParsedInput::Algebra(alg) => hermlie::constant_mixed_test(alg, &mp, cli.tol),
                ParsedInput::Pointwise(pw) => {
                    hermlie::constant_mixed_test_tensors(&pw.r, &pw.ric, &mp, cli.tol)
                }
            };
            let mut report = Report::new("mixed", digest, cli.tol);
            report.n = Some(input.n());
            let c_matches = c.map(|asserted| (verdict.c - asserted).abs() <= cli.tol);
            report.mixed = Some(report::MixedJson {
                alpha: *alpha,
                beta: *beta,
                is_constant: verdict.is_constant,
                c: verdict.c + 0.0,
                residual: verdict.residual,
                asserted_c: *c,
                c_matches,
            });
            let ok = verdict.is_constant && c_matches.unwrap_or(true);
            Ok(Output::Report(report, if ok { EXIT_OK } else { EXIT_CHECK_FAILED }))
        }
        Command::Classify { file } => {
            let (input, digest) = load(file, stdin, cli.tol)?;
            let alg = input.algebra()?;
            let flags = hermlie::classify(alg, cli.tol);
            let mut report = Report::new("classify", digest, cli.tol);
            report.n = Some(alg.n());
            report.frame_kind = Some(alg.frame_kind().as_str().to_owned());
            report.classification = Some(report::ClassificationJson {
                is_nilpotent: flags.is_nilpotent,
                is_solvable: flags.is_solvable,
                commutator_j_invariant: flags.commutator_j_invariant,
                commutator_plus_j_nilpotent: flags.commutator_plus_j_nilpotent,
                is_unimodular: flags.is_unimodular,
                unimodularity_defect: hermlie::unimodularity_defect(alg),
            });
            Ok(Output::Report(report, EXIT_OK))
        }
        Command::Verify {
            file,
            theorem,
            alpha,
            beta,
            x,
            y,
            a1,
            c,
            n,
        } => {
            let need_mp = |name: &str| -> Result<MixedParams> {
                match (alpha, beta) {
                    (Some(a), Some(b)) => MixedParams::new(*a, *b),
                    _ => Err(Error::input(format!(
                        "--theorem {name} requires --alpha and --beta"
                    ))),
                }
            };
            let (verification, digest) = match theorem.as_str() {
                "1" => {
                    let mp = need_mp("1")?;
                    let file = file.as_deref().ok_or_else(|| {
                        Error::input("--theorem 1 requires an input document")
                    })?;
                    let (input, digest) = load(file, stdin, cli.tol)?;
                    let alg = input.algebra()?;
                    (
                        report::verification_json("1", &hermlie::verify_theorem1(alg, &mp, cli.tol)),
                        digest,
                    )
                }
                "lemma-cd0" => {
                    let mp = need_mp("lemma-cd0")?;
                    let file = file.as_deref().ok_or_else(|| {
                        Error::input("--theorem lemma-cd0 requires an input document")
                    })?;
                    let (input, digest) = load(file, stdin, cli.tol)?;
                    let alg = input.algebra()?;
                    (
                        report::verification_json(
                            "lemma-cd0",
                            &hermlie::verify_lemma_cd0(alg, &mp, cli.tol),
                        ),
                        digest,
                    )
                }
                "wallach" => {
                    let mp = need_mp("wallach")?;
                    (
                        report::verification_json("wallach", &hermlie::wallach_nonconstancy(&mp)),
                        "none".to_owned(),
                    )
                }
                "middle-type" => {
                    let mp = need_mp("middle-type")?;
                    let state = hermlie::MiddleTypeState {
                        x: x.ok_or_else(|| Error::input("--theorem middle-type requires --x"))?,
                        y: y.ok_or_else(|| Error::input("--theorem middle-type requires --y"))?,
                        a1: a1.ok_or_else(|| Error::input("--theorem middle-type requires --a1"))?,
                        mp,
                        c: *c,
                    };
                    (
                        report::verification_json(
                            "middle-type",
                            &hermlie::middle_type_feasibility(&state, cli.tol)?,
                        ),
                        "none".to_owned(),
                    )
                }
                "thm3" => {
                    let n = n.ok_or_else(|| {
                        Error::input("--theorem thm3 requires --n (random admissible draw)")
                    })?;
                    if n < 2 {
                        return Err(Error::input("--n must be at least 2"));
                    }
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
                    let fd = hermlie::random::nonbalanced_btp(n, &mut rng);
                    (
                        report::verification_json(
                            "thm3",
                            &hermlie::nonbalanced_btp_check(&fd, cli.tol)?,
                        ),
                        "none".to_owned(),
                    )
                }
                other => {
                    return Err(Error::input(format!(
                        "--theorem: unknown value `{other}` (expected 1, lemma-cd0, wallach, middle-type, thm3)"
                    )))
                }
            };
            let pass = verification.pass;
            let mut report = Report::new("verify", digest, cli.tol);
            report.seed = Some(cli.seed);
            report.verification = Some(verification);
            Ok(Output::Report(report, if pass { EXIT_OK } else { EXIT_CHECK_FAILED }))
        }
        Command::Search {
            family,
            n,
            alpha,
            beta,
            restarts,
            max_iters,
            target_c,
        } => {
            let spec = match family.as_str() {
                "almost-abelian" | "almost_abelian" => hermlie::FamilySpec::AlmostAbelian { n: *n },
                "codim2" => hermlie::FamilySpec::Codim2 { n: *n },
                other => {
                    return Err(Error::input(format!(
                        "--family: unknown value `{other}` (expected almost-abelian or codim2)"
                    )))
                }
            };
            let problem = hermlie::SearchProblem {
                family: spec,
                mp: MixedParams::new(*alpha, *beta)?,
                target: match target_c {
                    Some(c) => hermlie::SearchTarget::Fixed(*c),
                    None => hermlie::SearchTarget::BestFit,
                },
                seed: cli.seed,
                restarts: *restarts,
                max_iters: *max_iters,
            };
            let result = hermlie::minimize(&problem)?;
            let mut report = Report::new("search", "none".to_owned(), cli.tol);
            report.seed = Some(cli.seed);
            report.n = Some(*n);
            report.search = Some(report::SearchJson {
                family: family.clone(),
                n: *n,
                alpha: *alpha,
                beta: *beta,
                target_c: *target_c,
                seed: cli.seed,
                restarts: *restarts,
                max_iters: *max_iters,
                best_residual: result.best_residual,
                fitted_c: result.fitted_c + 0.0,
                flat: result.flat.into(),
                best_params: report::params_json(&result.best_params),
                trace_final: result.trace.last().copied().unwrap_or(f64::INFINITY),
                trace_len: result.trace.len(),
                evaluations: result.evaluations,
            });
            Ok(Output::Report(report, EXIT_OK))
        }
        Command::Fixtures { list, emit } => {
            let mut report = Report::new("fixtures", "none".to_owned(), cli.tol);
            match (list, emit) {
                (_, Some(name)) => {
                    // raw document output so it pipes straight into the other
                    // subcommands
                    let text = doc::emit_fixture(name)?;
                    Ok(Output::Raw(text, EXIT_OK))
                }
                _ => {
                    report.verification = Some(report::VerificationJson {
                        theorem: "fixtures".to_owned(),
                        informational: true,
                        pass: true,
                        residuals: Vec::new(),
                        lines: hermlie::FIXTURE_NAMES.iter().map(|s| s.to_string()).collect(),
                    });
                    Ok(Output::Report(report, EXIT_OK))
                }
            }
        }
    }
}
