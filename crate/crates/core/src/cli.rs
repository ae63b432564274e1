//! The `tropfix` command line.
//!
//! Every subcommand prints one JSON object on stdout. Exit code 0 means
//! success, 1 a domain error (the problem is well formed but, say, a point
//! is outside the polytope), 2 a malformed input or flag.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::{eigen_defect, eigenvector, karp_eigenvalue};
use crate::error::Error;
use crate::fixpoint::{embed, find_fixpoint, project_sublevel, solve_on_functionals, SolverOptions};
use crate::json::Json;
use crate::oracle::{max_cycle_mean, HullGrid, GRID_LIMIT};
use crate::problem::{matrix_from_json, pair_from_json, vector_from_json, Problem};
use crate::space::{arctan_distance, uniform_distance, Vector};

#[derive(Debug, Parser)]
#[command(
    name = "tropfix",
    version,
    about = "Tropical polytopes, retractions and fixed points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Sup-norm tolerance for membership and convergence.
    #[arg(long, global = true, default_value_t = 1e-9, allow_hyphen_values = true)]
    pub tol: f64,

    /// Iteration cap per start point.
    #[arg(long = "max-iter", global = true, default_value_t = 10_000)]
    pub max_iter: usize,

    /// Seed for sampled oracle queries.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Coefficient pitch of the oracle grid.
    #[arg(long, global = true, default_value_t = 0.01, allow_hyphen_values = true)]
    pub grid: f64,

    /// Inline JSON vector, e.g. "[3,0]".
    #[arg(long, global = true)]
    pub point: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Uniform and arctan distance between "x" and "y" of the input file.
    Distance { input: PathBuf },
    /// Polytope membership of --point.
    Member { input: PathBuf },
    /// Retraction of --point onto the polytope.
    Retract { input: PathBuf },
    /// Greatest polytope point whose functional values lie below --point.
    Project { input: PathBuf },
    /// Fixed point of the problem's map on its polytope.
    Fixpoint { input: PathBuf },
    /// Point whose functional values are fixed by the map.
    Prop9 { input: PathBuf },
    /// Max-plus eigenvalue and eigenvector of a matrix.
    Eigen { input: PathBuf },
    /// Brute-force check of a closed-form operation.
    Oracle {
        #[arg(value_enum)]
        variant: OracleKind,
        input: PathBuf,
        /// Random query points when --point is absent (retract only).
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Member,
    Retract,
    Project,
    Eigen,
    Fixpoint,
}

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(Error),
    Schema(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_schema_error() {
            Failure::Schema(e.code().to_string(), e.to_string())
        } else {
            Failure::Domain(e)
        }
    }
}

type CmdResult = std::result::Result<Json, Failure>;

pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                let detail = e.kind().to_string();
                Outcome {
                    code,
                    stdout: format!("{}\n", error_json("Usage", &detail)),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(json) => Outcome {
            code: 0,
            stdout: format!("{json}\n"),
            stderr: String::new(),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: 1,
            stdout: format!("{}\n", error_json(e.code(), &e.to_string())),
            stderr: format!("error: {e}\n"),
        },
        Err(Failure::Schema(code, detail)) => Outcome {
            code: 2,
            stdout: format!("{}\n", error_json(&code, &detail)),
            stderr: format!("error: {detail}\n"),
        },
    }
}

fn error_json(code: &str, detail: &str) -> Json {
    Json::obj(vec![
        ("error", Json::Str(code.to_string())),
        ("detail", Json::Str(detail.to_string())),
    ])
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Schema("Io".into(), format!("{}: {e}", path.display())))
}

fn validate(cli: &Cli) -> std::result::Result<(), Failure> {
    let bad = |flag: &str, why: &str| Err(Failure::Schema("InvalidFlag".into(), format!("--{flag}: {why}")));
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return bad("tol", "must be a finite non-negative number");
    }
    if !(cli.grid.is_finite() && cli.grid > 0.0) {
        return bad("grid", "must be a finite positive number");
    }
    if cli.max_iter == 0 {
        return bad("max-iter", "must be at least 1");
    }
    Ok(())
}

fn point(cli: &Cli) -> std::result::Result<Vector<f64>, Failure> {
    let text = cli
        .point
        .as_deref()
        .ok_or_else(|| Failure::Schema("InvalidFlag".into(), "--point is required".into()))?;
    Ok(vector_from_json(text)?)
}

fn options(cli: &Cli) -> SolverOptions<f64> {
    SolverOptions {
        tol: cli.tol,
        max_iter: cli.max_iter,
    }
}

fn execute(cli: &Cli) -> CmdResult {
    validate(cli)?;
    match &cli.command {
        Command::Distance { input } => {
            let (x, y) = pair_from_json(&read(input)?)?;
            Ok(Json::obj(vec![
                ("uniform", Json::Num(uniform_distance(&x, &y)?)),
                ("arctan", Json::Num(arctan_distance(&x, &y)?)),
            ]))
        }
        Command::Member { input } => {
            let problem = Problem::from_json(&read(input)?)?;
            let y = point(cli)?;
            let member = problem.polytope.contains(&y, cli.tol)?;
            Ok(Json::obj(vec![("member", Json::Bool(member))]))
        }
        Command::Retract { input } => {
            let problem = Problem::from_json(&read(input)?)?;
            let y = point(cli)?;
            let r = problem.polytope.retraction(&y)?;
            Ok(Json::obj(vec![
                ("result", Json::vector(&r.point)),
                ("scale", Json::Num(r.scale)),
            ]))
        }
        Command::Project { input } => {
            let problem = Problem::from_json(&read(input)?)?;
            let fvals = point(cli)?;
            let ts = problem.functionals_or_coordinates();
            let x = project_sublevel(&problem.polytope, &ts, &fvals, cli.tol)?;
            Ok(Json::obj(vec![
                ("result", Json::vector(&x)),
                ("image", Json::vector(&embed(&ts, &x)?)),
            ]))
        }
        Command::Fixpoint { input } => {
            let problem = Problem::from_json(&read(input)?)?;
            let f = problem.require_map()?;
            let r = find_fixpoint(f, &problem.polytope, problem.x0.as_ref(), &options(cli))?;
            Ok(Json::obj(vec![
                ("result", Json::vector(&r.point)),
                ("residual", Json::Num(r.residual)),
                ("iterations", Json::Int(r.iterations as i64)),
                ("status", Json::Str(r.status.as_str().into())),
                ("start", Json::Int(r.start as i64)),
                ("restarts", Json::Int(r.restarts as i64)),
                ("max_displacement", Json::Num(r.max_displacement)),
            ]))
        }
        Command::Prop9 { input } => {
            let problem = Problem::from_json(&read(input)?)?;
            let f = problem.require_map()?;
            let ts = problem.functionals_or_coordinates();
            let r = solve_on_functionals(f, &problem.polytope, &ts, problem.x0.as_ref(), &options(cli))?;
            Ok(Json::obj(vec![
                ("result", Json::vector(&r.point)),
                ("image_point", Json::vector(&r.image_point)),
                ("functional_residuals", Json::nums(&r.functional_residuals)),
                ("residual", Json::Num(r.full_residual)),
                ("iterations", Json::Int(r.image.iterations as i64)),
                ("status", Json::Str(r.status().as_str().into())),
            ]))
        }
        Command::Eigen { input } => {
            let a = matrix_from_json(&read(input)?)?;
            let e = eigenvector(&a)?;
            Ok(Json::obj(vec![
                ("lambda", Json::Num(e.lambda)),
                ("v", Json::scalars(&e.vector)),
            ]))
        }
        Command::Oracle { variant, input, samples } => oracle(cli, *variant, input, *samples),
    }
}

fn grid_header(variant: &str, grid: &HullGrid<f64>) -> Vec<(&'static str, Json)> {
    vec![
        ("variant", Json::Str(variant.into())),
        ("pitch", Json::Num(grid.pitch())),
        ("grid_points", Json::Int(grid.len() as i64)),
    ]
}

fn oracle(cli: &Cli, variant: OracleKind, input: &Path, samples: usize) -> CmdResult {
    let text = read(input)?;
    if variant == OracleKind::Eigen {
        let a = matrix_from_json(&text)?;
        let enumerated = max_cycle_mean(&a)?;
        let karp = karp_eigenvalue(&a)?;
        let e = eigenvector(&a)?;
        return Ok(Json::obj(vec![
            ("variant", Json::Str("eigen".into())),
            ("oracle", Json::obj(vec![("lambda", Json::Num(enumerated))])),
            ("closed_form", Json::obj(vec![("lambda", Json::Num(karp)), ("v", Json::scalars(&e.vector))])),
            ("discrepancy", Json::Num((enumerated - karp).abs())),
            ("eigen_defect", Json::Num(eigen_defect(&a, e.lambda, &e.vector)?)),
        ]));
    }
    let problem = Problem::from_json(&text)?;
    let p = &problem.polytope;
    let grid = HullGrid::new(p, cli.grid, GRID_LIMIT)?;
    let mut out = grid_header(
        match variant {
            OracleKind::Member => "member",
            OracleKind::Retract => "retract",
            OracleKind::Project => "project",
            OracleKind::Fixpoint => "fixpoint",
            OracleKind::Eigen => unreachable!(),
        },
        &grid,
    );
    match variant {
        OracleKind::Member => {
            let y = point(cli)?;
            let nearest = grid.nearest_distance(&y);
            let oracle_member = nearest <= grid.pitch() + cli.tol;
            let closed = p.contains(&y, cli.tol)?;
            out.push(("oracle", Json::obj(vec![("member", Json::Bool(oracle_member)), ("nearest_distance", Json::Num(nearest))])));
            out.push(("closed_form", Json::obj(vec![("member", Json::Bool(closed))])));
            out.push(("discrepancy", Json::Num(if oracle_member == closed { 0.0 } else { 1.0 })));
        }
        OracleKind::Retract => {
            let queries = match &cli.point {
                Some(_) => vec![point(cli)?],
                None => sample_queries(p, samples, cli.seed),
            };
            let brute = grid.retract_many(&queries);
            let mut worst = 0.0f64;
            let mut rows = Vec::with_capacity(queries.len());
            for (y, b) in queries.iter().zip(&brute) {
                let c = p.retract(y)?;
                let d = uniform_distance(&c, b)?;
                worst = worst.max(d);
                rows.push(Json::obj(vec![
                    ("query", Json::vector(y)),
                    ("oracle", Json::vector(b)),
                    ("closed_form", Json::vector(&c)),
                ]));
            }
            out.push(("queries", Json::Arr(rows)));
            out.push(("discrepancy", Json::Num(worst)));
        }
        OracleKind::Project => {
            let fvals = point(cli)?;
            let ts = problem.functionals_or_coordinates();
            let brute = grid.sublevel_sup(&ts, &fvals, 0.0);
            let closed = match project_sublevel(p, &ts, &fvals, cli.tol) {
                Ok(x) => Some(x),
                Err(Error::EmptySublevel(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let discrepancy = match (&brute, &closed) {
                (Some(b), Some(c)) => uniform_distance(b, c)?,
                (None, None) => 0.0,
                _ => f64::INFINITY,
            };
            let show = |x: &Option<Vector<f64>>| x.as_ref().map_or(Json::Null, Json::vector);
            out.push(("oracle", Json::obj(vec![("result", show(&brute))])));
            out.push(("closed_form", Json::obj(vec![("result", show(&closed))])));
            out.push(("discrepancy", if discrepancy.is_finite() { Json::Num(discrepancy) } else { Json::Str("emptiness differs".into()) }));
        }
        OracleKind::Fixpoint => {
            let f = problem.require_map()?;
            let (best, best_residual) = grid.min_residual(f)?;
            let r = find_fixpoint(f, p, problem.x0.as_ref(), &options(cli))?;
            out.push(("oracle", Json::obj(vec![("result", Json::vector(&best)), ("residual", Json::Num(best_residual))])));
            out.push((
                "closed_form",
                Json::obj(vec![
                    ("result", Json::vector(&r.point)),
                    ("residual", Json::Num(r.residual)),
                    ("status", Json::Str(r.status.as_str().into())),
                ]),
            ));
            out.push(("discrepancy", Json::Num((r.residual - best_residual).abs())));
        }
        OracleKind::Eigen => unreachable!(),
    }
    Ok(Json::obj(out))
}

/// Uniform samples in the generators' bounding box widened by 1.
fn sample_queries(p: &crate::polytope::Polytope<f64>, samples: usize, seed: u64) -> Vec<Vector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = p.generators().iter().map(|g| g.min_entry()).fold(f64::INFINITY, f64::min) - 1.0;
    let hi = p.generators().iter().map(|g| g.max_entry()).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    (0..samples)
        .map(|_| {
            Vector::new((0..p.dim()).map(|_| rng.gen_range(lo..=hi)).collect()).expect("finite samples")
        })
        .collect()
}
