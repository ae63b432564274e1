//! Seeded generators shared by the integration tests.
//!
//! Random reals are dyadic (multiples of 1/64 in a small range) so that
//! max and + on them are exact in f64.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropical_fixpoint::{
    eigen::karp_eigenvalue, Expr, Functional, MapExpr, Matrix, MaxPlus, Polytope, Vector,
};

pub const DENOM: f64 = 64.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform multiple of 1/64 in `[lo, hi]`.
pub fn dyadic(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let a = (lo * DENOM).ceil() as i64;
    let b = (hi * DENOM).floor() as i64;
    rng.gen_range(a..=b) as f64 / DENOM
}

pub fn scalar(rng: &mut impl Rng) -> MaxPlus<f64> {
    if rng.gen_bool(0.125) {
        MaxPlus::Bottom
    } else {
        MaxPlus::Finite(dyadic(rng, -8.0, 8.0))
    }
}

pub fn vector(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vector<f64> {
    Vector::new((0..n).map(|_| dyadic(rng, lo, hi)).collect()).unwrap()
}

pub fn polytope(rng: &mut impl Rng, n: usize, k: usize) -> Polytope<f64> {
    Polytope::new((0..k).map(|_| vector(rng, n, -5.0, 5.0)).collect()).unwrap()
}

/// Normalized coefficients: one entry 0, the rest in `[-6, 0]` or ⊥.
pub fn coefficients(rng: &mut impl Rng, k: usize) -> Vec<MaxPlus<f64>> {
    let top = rng.gen_range(0..k);
    (0..k)
        .map(|j| {
            if j == top {
                MaxPlus::Finite(0.0)
            } else if rng.gen_bool(0.25) {
                MaxPlus::Bottom
            } else {
                MaxPlus::Finite(dyadic(rng, -6.0, 0.0))
            }
        })
        .collect()
}

pub fn member(rng: &mut impl Rng, p: &Polytope<f64>) -> Vector<f64> {
    p.combination(&coefficients(rng, p.len())).unwrap()
}

/// Functional with at least one finite coefficient.
pub fn functional(rng: &mut impl Rng, n: usize) -> Functional<f64> {
    loop {
        let coeffs: Vec<_> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    MaxPlus::Bottom
                } else {
                    MaxPlus::Finite(dyadic(rng, -3.0, 3.0))
                }
            })
            .collect();
        if let Ok(w) = Functional::new(coeffs) {
            return w;
        }
    }
}

/// Random expression tree over `n` variables, depth at most `depth`.
pub fn expr(rng: &mut impl Rng, n: usize, depth: usize) -> Expr<f64> {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen_bool(0.85) {
            Expr::var(rng.gen_range(0..n)).shift(dyadic(rng, -3.0, 3.0))
        } else {
            Expr::Const(dyadic(rng, -3.0, 3.0))
        };
    }
    let a = expr(rng, n, depth - 1);
    let b = expr(rng, n, depth - 1);
    match rng.gen_range(0..3) {
        0 => a.max(b),
        1 => a.min(b),
        _ => a.max(b).shift(dyadic(rng, -2.0, 2.0)),
    }
}

pub fn expr_map(rng: &mut impl Rng, n: usize) -> MapExpr<f64> {
    MapExpr::coords((0..n).map(|_| expr(rng, n, 4)).collect()).unwrap()
}

fn strongly_connected(rows: &[Vec<Option<i64>>]) -> bool {
    let n = rows.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let edge = if forward { rows[i][j] } else { rows[j][i] };
                if edge.is_some() && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Strongly connected integer matrix with entries in `[-5, 5]` or ⊥.
pub fn integer_rows(rng: &mut impl Rng, n: usize) -> Vec<Vec<Option<i64>>> {
    loop {
        let rows: Vec<Vec<Option<i64>>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| rng.gen_bool(0.65).then(|| rng.gen_range(-5..=5)))
                    .collect()
            })
            .collect();
        if rows.iter().all(|r| r.iter().any(Option::is_some)) && strongly_connected(&rows) {
            return rows;
        }
    }
}

pub fn matrix(rows: &[Vec<Option<i64>>]) -> Matrix<f64> {
    Matrix::new(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|v| v.map_or(MaxPlus::Bottom, |v| MaxPlus::Finite(v as f64)))
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

/// A strongly connected integer matrix with eigenvalue exactly 0.
///
/// The eigenvalue of an integer matrix is `p/q` with `q ≤ n`; scaling the
/// entries by `q` and subtracting `p` keeps everything integral.
pub fn normalized_integer_matrix(rng: &mut impl Rng, n: usize) -> Matrix<f64> {
    let rows = integer_rows(rng, n);
    let lambda = karp_eigenvalue(&matrix(&rows)).unwrap();
    let q = (1..=n as i64)
        .find(|q| ((lambda * *q as f64).round() - lambda * *q as f64).abs() < 1e-9)
        .expect("denominator at most n");
    let p = (lambda * q as f64).round() as i64;
    let scaled: Vec<Vec<Option<i64>>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v.map(|v| q * v - p)).collect())
        .collect();
    let a = matrix(&scaled);
    assert_eq!(karp_eigenvalue(&a).unwrap(), 0.0);
    a
}

/// Generators of a polytope mapped into itself by `a`: the orbits of a few
/// integer points, which are eventually periodic because `a` has
/// eigenvalue 0.
pub fn invariant_hull(rng: &mut impl Rng, a: &Matrix<f64>) -> Polytope<f64> {
    let n = a.dim();
    let mut gens: Vec<Vector<f64>> = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let mut x = Vector::new((0..n).map(|_| rng.gen_range(-5..=5) as f64).collect()).unwrap();
        loop {
            if gens.contains(&x) {
                break;
            }
            gens.push(x.clone());
            assert!(gens.len() < 500, "orbit did not close");
            x = a.apply(&x).unwrap();
        }
    }
    Polytope::new(gens).unwrap()
}

pub fn shuffled<T: Clone>(rng: &mut impl Rng, xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.shuffle(rng);
    v
}

/// A fixed CLI invocation whose stdout is stored in `tests/golden`.
pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

pub const GOLDEN: &[GoldenCase] = &[
    GoldenCase { name: "distance", args: &["distance", "pair.json"], code: 0 },
    GoldenCase { name: "member_outside", args: &["member", "hull2.json", "--point", "[3,0]"], code: 0 },
    GoldenCase { name: "member_inside", args: &["member", "hull2.json", "--point", "[1,0]"], code: 0 },
    GoldenCase { name: "retract", args: &["retract", "hull2.json", "--point", "[3,-1]"], code: 0 },
    GoldenCase { name: "project", args: &["project", "project.json", "--point", "[0.5,1]"], code: 0 },
    GoldenCase { name: "project_empty", args: &["project", "project.json", "--point", "[-9,1]"], code: 1 },
    GoldenCase { name: "fixpoint_identity", args: &["fixpoint", "identity.json", "--tol", "1e-9"], code: 0 },
    GoldenCase { name: "fixpoint_eigenray", args: &["fixpoint", "eigenray.json"], code: 0 },
    GoldenCase { name: "reduce_functionals", args: &["prop9", "reduce.json"], code: 0 },
    GoldenCase { name: "eigen", args: &["eigen", "eigen.json"], code: 0 },
    GoldenCase { name: "oracle_eigen", args: &["oracle", "eigen", "eigen4.json"], code: 0 },
    GoldenCase { name: "oracle_member", args: &["oracle", "member", "hull2.json", "--point", "[2,0]"], code: 0 },
    GoldenCase { name: "oracle_retract", args: &["oracle", "retract", "hull3.json", "--samples", "5", "--seed", "7", "--grid", "0.25"], code: 0 },
    GoldenCase { name: "oracle_project", args: &["oracle", "project", "project.json", "--point", "[0.5,1]", "--grid", "0.05"], code: 0 },
    GoldenCase { name: "oracle_fixpoint", args: &["oracle", "fixpoint", "eigenray.json"], code: 0 },
    GoldenCase { name: "bad_dimension", args: &["member", "hull2.json", "--point", "[3]"], code: 2 },
    GoldenCase { name: "not_a_member", args: &["fixpoint", "bad_start.json"], code: 1 },
    GoldenCase { name: "empty_row", args: &["eigen", "empty_row.json"], code: 2 },
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Runs the binary on a golden case from inside the golden directory.
pub fn run_case(case: &GoldenCase, threads: usize) -> (i32, Vec<u8>) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_tropfix"))
        .args(case.args)
        .current_dir(golden_dir())
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}
