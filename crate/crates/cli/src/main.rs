//! `orbitkit`: batch front end for the orbitkit library.
//!
//! Exit codes: 0 determined, 2 validation failure, 3 undetermined verdict,
//! 4 I/O, parse or usage error.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::RangedU64ValueParser;
use clap::{Parser, Subcommand};
use orbitkit::coadjoint;
use orbitkit::golden::{run_golden, Bundle};
use orbitkit::io::{parse_complex_list, parse_scalar_list, Document};
use orbitkit::nilext::{codim1_classify, oracle_check, NilExtSpec};
use orbitkit::semidirect::{
    check_conditions_abc, classify_detailed, two_n_greater_k_check, DiagonalSemidirectSpec,
    ExactComplex, Point,
};
use orbitkit::spectrum::Method as GateMethod;
use orbitkit::{Error, Execution, LieAlgebra, Scalar};
use serde_json::json;

use report::{Method, Report, Request, Status};

#[derive(Parser, Debug)]
#[command(name = "orbitkit", version, about = "Coadjoint orbit and square-integrability analysis")]
struct Cli {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Real value substituted for θ in numerical steps.
    #[arg(long, global = true, default_value_t = orbitkit::DEFAULT_THETA)]
    theta: f64,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a file and check its structural identities.
    Validate { file: PathBuf },
    /// Run every analysis that applies to the file.
    Analyze {
        file: PathBuf,
        /// Covectors drawn by the generic rank scan.
        #[arg(long, default_value_t = coadjoint::DEFAULT_SAMPLES,
              value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
        samples: usize,
    },
    /// Classify a diagonal semidirect point or a nilpotent extension.
    Classify {
        file: PathBuf,
        /// Comma-separated complex coordinates of p, e.g. `1,2-i` (default all 1).
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Comma-separated scalars for the ℝᵏ part of the covector (default 0).
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
    },
    /// Compare the explicit coadjoint matrix with the BCH oracle.
    OracleCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 50,
              value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
        trials: usize,
    },
    /// Run the bundled regression suite.
    Golden {
        /// Read the example files from this directory instead of the built-in copies.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// Why a command stopped early.
enum Failure {
    Validation(Vec<String>),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Pole { .. } => Failure::Input(format!("{e}; choose another --theta")),
            Error::Parse(_) | Error::Dimension(_) => Failure::Input(e.to_string()),
            _ => Failure::Validation(vec![e.to_string()]),
        }
    }
}

type Outcome = Result<Status, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Status::InputError.code() as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let execution = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let mut report = Report::new(request_of(&cli));
    let outcome = run(&cli, execution, &mut report);
    let status = match outcome {
        Ok(status) => status,
        Err(Failure::Validation(list)) => {
            report.errors.extend(list);
            Status::ValidationFailure
        }
        Err(Failure::Input(msg)) => {
            report.errors.push(msg);
            Status::InputError
        }
    };
    report.finish(status);
    print!("{}", report.render());

    if let Some(path) = &cli.json {
        let text = serde_json::to_string_pretty(&report).expect("reports serialize");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(Status::InputError.code() as u8);
        }
    }
    ExitCode::from(report.exit_code as u8)
}

fn request_of(cli: &Cli) -> Request {
    let mut req = Request {
        command: String::new(),
        input: None,
        theta_value: cli.theta,
        seed: cli.seed,
        sample_count: None,
        trials: None,
        p: None,
        xi: None,
    };
    let input = |f: &Path| Some(f.display().to_string());
    match &cli.command {
        Command::Validate { file } => {
            req.command = "validate".into();
            req.input = input(file);
        }
        Command::Analyze { file, samples } => {
            req.command = "analyze".into();
            req.input = input(file);
            req.sample_count = Some(*samples);
        }
        Command::Classify { file, p, xi } => {
            req.command = "classify".into();
            req.input = input(file);
            req.p = p.clone();
            req.xi = xi.clone();
        }
        Command::OracleCheck { file, trials } => {
            req.command = "oracle-check".into();
            req.input = input(file);
            req.trials = Some(*trials);
        }
        Command::Golden { dir } => {
            req.command = "golden".into();
            req.input = dir.as_deref().and_then(input);
        }
    }
    req
}

fn run(cli: &Cli, execution: Execution, report: &mut Report) -> Outcome {
    if !cli.theta.is_finite() || cli.theta == 0.0 {
        return Err(Failure::Input(format!("--theta must be finite and nonzero, got {}", cli.theta)));
    }
    if let Command::Golden { dir } = &cli.command {
        return golden(dir.as_deref(), execution, report);
    }
    let file = match &cli.command {
        Command::Validate { file }
        | Command::Analyze { file, .. }
        | Command::Classify { file, .. }
        | Command::OracleCheck { file, .. } => file,
        Command::Golden { .. } => unreachable!(),
    };
    let doc = load(file)?;
    report.kind = Some(doc.kind());
    match &cli.command {
        Command::Validate { .. } => validate(&doc, report),
        Command::Analyze { samples, .. } => analyze(&doc, *samples, cli, execution, report),
        Command::Classify { p, xi, .. } => classify(&doc, p.as_deref(), xi.as_deref(), cli, report),
        Command::OracleCheck { trials, .. } => {
            let spec = extension_only(&doc, "oracle-check")?;
            let r = oracle_check(&spec, *trials, cli.seed, cli.theta, execution)?;
            let passed = r.passed;
            report.push("oracle", Method::Numeric, &r);
            if passed {
                Ok(Status::Determined)
            } else {
                Err(Failure::Validation(vec![format!(
                    "coadjoint formula deviates from the oracle by {:.3e} (tolerance {:.0e})",
                    r.max_formula_error, r.tolerance
                )]))
            }
        }
        Command::Golden { .. } => unreachable!(),
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Document::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn algebra_violations(alg: &LieAlgebra) -> Result<(), Failure> {
    let violations = alg.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(violations.iter().map(ToString::to_string).collect()))
    }
}

fn extension(doc: &Document) -> Option<Result<NilExtSpec, Failure>> {
    let Document::Extension { nil, .. } = doc else { return None };
    if let Err(f) = algebra_violations(nil) {
        return Some(Err(f));
    }
    doc.extension_spec().map(|r| r.map_err(Failure::from))
}

fn extension_only(doc: &Document, command: &str) -> Result<NilExtSpec, Failure> {
    extension(doc).unwrap_or_else(|| {
        Err(Failure::Input(format!("{command} needs a nilpotent_extension file, got {}", doc.kind())))
    })
}

fn algebra_summary(alg: &LieAlgebra) -> serde_json::Value {
    json!({
        "dim": alg.dim(),
        "center_dim": alg.center().dim(),
        "derived_dim": alg.derived_ideal().dim(),
        "solvable": alg.is_solvable(),
        "nilpotency_class": alg.nilpotency_class(),
    })
}

fn validate(doc: &Document, report: &mut Report) -> Outcome {
    match doc {
        Document::Algebra(alg) => {
            algebra_violations(alg)?;
            report.push("algebra", Method::Exact, algebra_summary(alg));
        }
        Document::Semidirect(spec) => {
            algebra_violations(&spec.lie_algebra())?;
            report.push("spec", Method::Exact, json!({"n": spec.n(), "k": spec.k(), "dim": spec.dim()}));
        }
        Document::Extension { .. } => {
            let spec = extension(doc).expect("extension document")?;
            report.push(
                "extension",
                Method::Exact,
                json!({"nil": algebra_summary(spec.nil()), "class": spec.class(), "dim": spec.dim()}),
            );
        }
    }
    Ok(Status::Determined)
}

fn analyze(doc: &Document, samples: usize, cli: &Cli, execution: Execution, report: &mut Report) -> Outcome {
    match doc {
        Document::Algebra(alg) => {
            algebra_violations(alg)?;
            report.push("algebra", Method::Exact, algebra_summary(alg));
            let r = coadjoint::analyze(alg, samples, cli.seed)?;
            let flat_defined = r.flat_generic.is_some();
            report.push("coadjoint", Method::Exact, r);
            if flat_defined {
                report.push("flatness_criterion", Method::Exact, coadjoint::FLATNESS_CRITERION);
            }
            Ok(Status::Determined)
        }
        Document::Semidirect(spec) => {
            let alg = spec.lie_algebra();
            report.push("coadjoint", Method::Exact, coadjoint::analyze(&alg, samples, cli.seed)?);
            let conditions = check_conditions_abc(spec);
            report.push("conditions", Method::Exact, conditions);
            if conditions.all() {
                report.push("two_n_greater_k", Method::Exact, two_n_greater_k_check(spec)?);
            }
            classify_semidirect(spec, default_point(spec), report)
        }
        Document::Extension { .. } => {
            let spec = extension(doc).expect("extension document")?;
            let status = classify_extension(&spec, cli.theta, report)?;
            let oracle = oracle_check(&spec, samples.min(50), cli.seed, cli.theta, execution)?;
            if !oracle.passed {
                report.warnings.push("coadjoint formula disagrees with the BCH oracle".into());
            }
            report.push("oracle", Method::Numeric, oracle);
            Ok(status)
        }
    }
}

fn default_point(spec: &DiagonalSemidirectSpec) -> Point {
    Point::new(vec![ExactComplex::real(Scalar::one()); spec.n()], vec![Scalar::zero(); spec.k()])
}

fn classify(doc: &Document, p: Option<&str>, xi: Option<&str>, cli: &Cli, report: &mut Report) -> Outcome {
    match doc {
        Document::Semidirect(spec) => {
            let mut point = default_point(spec);
            if let Some(p) = p {
                point.p = parse_complex_list(p).map_err(|e| Failure::Input(format!("--p: {e}")))?;
            }
            if let Some(xi) = xi {
                point.xi_a = parse_scalar_list(xi).map_err(|e| Failure::Input(format!("--xi: {e}")))?;
            }
            classify_semidirect(spec, point, report)
        }
        Document::Extension { .. } => {
            let spec = extension(doc).expect("extension document")?;
            if p.is_some() || xi.is_some() {
                report.warnings.push("--p and --xi are ignored for nilpotent extensions".into());
            }
            classify_extension(&spec, cli.theta, report)
        }
        Document::Algebra(_) => Err(Failure::Input(
            "classify needs a diagonal_semidirect or nilpotent_extension file, got lie_algebra".into(),
        )),
    }
}

fn verdict_status(report: &Report) -> Status {
    match &report.verdict {
        Some(v) if v.is_determined() => Status::Determined,
        Some(_) => Status::Undetermined,
        None => Status::Determined,
    }
}

fn classify_semidirect(spec: &DiagonalSemidirectSpec, point: Point, report: &mut Report) -> Outcome {
    let c = classify_detailed(spec, &point)?;
    report.push(
        "point",
        Method::Exact,
        json!({
            "p": point.p.iter().map(|z| [z.re.to_string(), z.im.to_string()]).collect::<Vec<_>>(),
            "xi_a": point.xi_a.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
    );
    report.push(
        "classification",
        Method::Exact,
        json!({
            "conditions": c.conditions,
            "stabilizer": c.stabilizer,
            "theta_rank": c.theta_rank,
        }),
    );
    report.warnings.extend(c.warnings);
    report.verdict = Some(c.verdict);
    Ok(verdict_status(report))
}

fn classify_extension(spec: &NilExtSpec, theta: f64, report: &mut Report) -> Outcome {
    let r = codim1_classify(spec, theta)?;
    report.push(
        "codim1",
        Method::Exact,
        json!({
            "open_orbits_possible": r.open_orbits_possible,
            "conditions": r.conditions,
            "generic_stabilizer_dim": r.generic_stabilizer_dim,
            "implication": r.implication,
            "flatness_criterion": coadjoint::FLATNESS_CRITERION,
        }),
    );
    let gate_method = match r.spectral_gate.method {
        GateMethod::Exact => Method::Exact,
        GateMethod::Numeric => Method::Numeric,
    };
    report.push("spectral_gate", gate_method, r.spectral_gate);
    report.warnings.extend(r.warnings);
    report.verdict = Some(r.verdict);
    Ok(verdict_status(report))
}

fn golden(dir: Option<&Path>, execution: Execution, report: &mut Report) -> Outcome {
    let bundle = match dir {
        Some(d) => Bundle::from_dir(d)?,
        None => Bundle::embedded(),
    };
    let g = run_golden(&bundle, execution);
    println!("{}", g.table());
    let failed: Vec<String> =
        g.failed().iter().map(|c| format!("criterion {} ({}) failed: {}", c.id, c.name, c.detail)).collect();
    report.push(
        "golden",
        Method::Mixed,
        json!({"criteria": g.results.len(), "passed": g.results.len() - failed.len()}),
    );
    report.golden = Some(serde_json::to_value(&g).expect("golden reports serialize"));
    if failed.is_empty() {
        Ok(Status::Determined)
    } else {
        Err(Failure::Validation(failed))
    }
}
