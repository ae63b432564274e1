//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Run with `cargo test --release --test acceptance`.

mod common;

use std::time::Instant;

use rand::Rng;
use tropical_fixpoint::eigen::{eigen_defect, eigenvector, karp_eigenvalue};
use tropical_fixpoint::oracle::{max_cycle_mean, HullGrid};
use tropical_fixpoint::{
    convex_combination, embed, find_fixpoint, in_ball, project_sublevel, solve_on_functionals,
    uniform_distance, Error, Functional, MapExpr, MaxPlus, SelfMap, SolverOptions, Status, Vector,
};

use common::*;

/// Grid budget per polytope in the oracle criteria.
const ORACLE_BUDGET: u128 = 2_000_000;
const PITCH: f64 = 0.01;
const TOL: f64 = 1e-9;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: usize, detail: String) -> Outcome {
    Outcome {
        pass: failures == 0,
        detail: format!("{detail}; {failures} failures"),
    }
}

fn semiring_laws() -> Outcome {
    let mut rng = rng(1);
    let mut failures = 0;
    let bot = MaxPlus::<f64>::Bottom;
    let one = MaxPlus::<f64>::unit();
    for _ in 0..10_000 {
        let (a, b, c) = (scalar(&mut rng), scalar(&mut rng), scalar(&mut rng));
        let laws = [
            a.oplus(a) == a,
            a.oplus(b).oplus(c) == a.oplus(b.oplus(c)),
            a.otimes(b).otimes(c) == a.otimes(b.otimes(c)),
            a.oplus(b) == b.oplus(a),
            a.otimes(b) == b.otimes(a),
            a.otimes(b.oplus(c)) == a.otimes(b).oplus(a.otimes(c)),
            a.oplus(b).otimes(c) == a.otimes(c).oplus(b.otimes(c)),
            a.oplus(bot) == a,
            a.otimes(bot) == bot,
            a.otimes(one) == a,
            a.leq(a.oplus(b)),
            !a.leq(b) || a.otimes(c).leq(b.otimes(c)),
        ];
        if laws.iter().any(|ok| !ok) {
            failures += 1;
        }
    }
    outcome(failures, "10000 triples, exact".into())
}

fn metric_suite() -> Outcome {
    let mut rng = rng(2);
    let mut failures = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8);
        let x = vector(&mut rng, n, -8.0, 8.0);
        let y = if rng.gen_bool(0.05) { x.clone() } else { vector(&mut rng, n, -8.0, 8.0) };
        let z = vector(&mut rng, n, -8.0, 8.0);
        let d = |a: &Vector<f64>, b: &Vector<f64>| uniform_distance(a, b).unwrap();
        let dxy = d(&x, &y);
        let r = dyadic(&mut rng, -4.0, 4.0);
        let radius = if rng.gen_bool(0.2) && dxy > 0.0 { dxy } else { dyadic(&mut rng, 1.0 / 64.0, 12.0) };
        let diff: Vec<f64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
        let sup = diff.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let sq: f64 = diff.iter().map(|v| v * v).sum();
        let checks = [
            d(&x, &x) == 0.0,
            dxy == d(&y, &x),
            (dxy == 0.0) == (x == y),
            d(&x, &z) <= dxy + d(&y, &z),
            d(&x.oplus(&z).unwrap(), &y.oplus(&z).unwrap()) <= dxy,
            d(&x.shift(r), &y.shift(r)) == dxy,
            in_ball(&x, radius, &y).unwrap() == (dxy < radius),
            sup == dxy,
            sup * sup <= sq && sq <= n as f64 * sup * sup,
        ];
        if checks.iter().any(|ok| !ok) {
            failures += 1;
        }
    }
    outcome(failures, "10000 triples, n <= 8, exact".into())
}

fn retraction_oracle() -> Outcome {
    let mut rng = rng(3);
    let mut failures = 0;
    let mut worst = 0.0f64;
    let mut coarsest = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=4);
        let p = polytope(&mut rng, n, k);
        let grid = HullGrid::with_budget(&p, PITCH, ORACLE_BUDGET).unwrap();
        coarsest = coarsest.max(grid.pitch());
        let queries: Vec<_> = (0..20).map(|_| vector(&mut rng, n, -6.0, 6.0)).collect();
        let brute = grid.retract_many(&queries);
        for (y, b) in queries.iter().zip(&brute) {
            let c = p.retract(y).unwrap();
            let d = uniform_distance(&c, b).unwrap();
            worst = worst.max(d);
            if d > PITCH + TOL {
                failures += 1;
            }
            if p.retract(&c).unwrap() != c {
                failures += 1;
            }
        }
        for _ in 0..2 {
            let x = member(&mut rng, &p);
            if uniform_distance(&p.retract(&x).unwrap(), &x).unwrap() > TOL {
                failures += 1;
            }
        }
    }
    outcome(
        failures,
        format!(
            "50 polytopes x 20 queries, max discrepancy {worst:e} (bound {}), grid pitch up to {coarsest}; idempotent exactly; 100 members fixed",
            PITCH + TOL
        ),
    )
}

fn ray_property() -> Outcome {
    let mut rng = rng(4);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=4);
        let p = polytope(&mut rng, n, k);
        let x = member(&mut rng, &p);
        let r = dyadic(&mut rng, -5.0, 0.0);
        let y = p.retract(&x.shift(r)).unwrap();
        let diff: Vec<f64> = y.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        let spread = diff.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - diff.iter().cloned().fold(f64::INFINITY, f64::min);
        worst = worst.max(spread);
        if spread > TOL {
            failures += 1;
        }
    }
    outcome(failures, format!("100 samples, max spread {worst:e}"))
}

fn a_convexity() -> Outcome {
    let mut rng = rng(5);
    let mut failures = 0;
    let mut subsets = 0;
    while subsets < 1000 {
        let n = rng.gen_range(1..=5);
        let k = rng.gen_range(1..=5);
        let p = polytope(&mut rng, n, k);
        let ws: Vec<Functional<f64>> = (0..10).map(|_| functional(&mut rng, n)).collect();
        for _ in 0..20 {
            subsets += 1;
            let m = rng.gen_range(1..=6);
            let members: Vec<_> = (0..m).map(|_| member(&mut rng, &p)).collect();
            let sup = p.sup_subset(&members, TOL).unwrap();
            if !p.contains(&sup, TOL).unwrap() {
                failures += 1;
            }
            let coeffs = coefficients(&mut rng, m);
            let comb = convex_combination(&coeffs, &members).unwrap();
            if !p.contains(&comb, TOL).unwrap() {
                failures += 1;
            }
            for w in &ws {
                let best = members
                    .iter()
                    .map(|x| w.apply(x).unwrap())
                    .fold(f64::NEG_INFINITY, f64::max);
                if w.apply(&sup).unwrap() != best {
                    failures += 1;
                }
            }
        }
    }
    outcome(failures, format!("{subsets} sups and combinations, 10 functionals each"))
}

fn sublevel_roundtrip() -> Outcome {
    let mut rng = rng(6);
    let mut failures = 0;
    let mut worst = 0.0f64;
    let (mut empty, mut nonempty) = (0, 0);
    let mut coarsest = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=4);
        let p = polytope(&mut rng, n, k);
        let ts: Vec<_> = (0..rng.gen_range(1..=4)).map(|_| functional(&mut rng, n)).collect();
        for _ in 0..100 {
            let x = member(&mut rng, &p);
            let fx = embed(&ts, &x).unwrap();
            let back = project_sublevel(&p, &ts, &fx, TOL).unwrap();
            let d = uniform_distance(&embed(&ts, &back).unwrap(), &fx).unwrap();
            worst = worst.max(d);
            if d > TOL {
                failures += 1;
            }
        }
        let grid = HullGrid::with_budget(&p, PITCH, ORACLE_BUDGET).unwrap();
        coarsest = coarsest.max(grid.pitch());
        for _ in 0..10 {
            let x = member(&mut rng, &p);
            let fx = embed(&ts, &x).unwrap();
            let target = Vector::new(fx.iter().map(|v| v + dyadic(&mut rng, -1.5, 0.5)).collect()).unwrap();
            let closed = project_sublevel(&p, &ts, &target, TOL);
            let brute = grid.sublevel_sup(&ts, &target, 0.0);
            match (&closed, &brute) {
                (Err(Error::EmptySublevel(_)), None) => empty += 1,
                (Ok(_), Some(_)) => nonempty += 1,
                _ => failures += 1,
            }
        }
    }
    outcome(
        failures,
        format!(
            "50 (P, T) x 100 samples, max defect {worst:e}; emptiness agrees with grid ({empty} empty, {nonempty} non-empty, pitch up to {coarsest})"
        ),
    )
}

fn nonexpansive_maps() -> Outcome {
    let mut rng = rng(7);
    let mut failures = 0;
    for i in 0..10_000 {
        let n = rng.gen_range(1..=4);
        let f = if i % 5 == 0 {
            MapExpr::linear(matrix(&integer_rows(&mut rng, n)))
        } else {
            expr_map(&mut rng, n)
        };
        let x = vector(&mut rng, n, -6.0, 6.0);
        let y = vector(&mut rng, n, -6.0, 6.0);
        let up = Vector::new(x.iter().map(|v| v + dyadic(&mut rng, 0.0, 3.0)).collect()).unwrap();
        let (fx, fy, fup) = (f.apply(&x).unwrap(), f.apply(&y).unwrap(), f.apply(&up).unwrap());
        let nonexpansive = uniform_distance(&fx, &fy).unwrap() <= uniform_distance(&x, &y).unwrap();
        let monotone = fx.leq(&fup).unwrap();
        if !(nonexpansive && monotone) {
            failures += 1;
        }
    }
    outcome(failures, "10000 (map, x, y), exact".into())
}

fn fixed_points() -> Outcome {
    let mut rng = rng(8);
    let mut failures = 0;
    let mut worst = 0.0f64;
    let mut worst_single = 0.0f64;
    let mut restarts = 0;
    let opts = SolverOptions::default();
    for _ in 0..30 {
        let n = rng.gen_range(1..=4);
        let a = normalized_integer_matrix(&mut rng, n);
        let p = invariant_hull(&mut rng, &a);
        let f = MapExpr::linear(a);
        let r = find_fixpoint(&f, &p, None, &opts).unwrap();
        worst = worst.max(r.residual);
        restarts += r.restarts;
        if r.status != Status::Converged || r.residual > TOL {
            failures += 1;
        }
        let coords = Functional::coordinates(n);
        let c = solve_on_functionals(&f, &p, &coords, None, &opts).unwrap();
        if c.point != r.point || c.full_residual != r.residual || c.status() != r.status {
            failures += 1;
        }
        let single = [functional(&mut rng, n)];
        let s = solve_on_functionals(&f, &p, &single, None, &opts).unwrap();
        worst_single = worst_single.max(s.functional_residuals[0]);
        if s.status() != Status::Converged || s.functional_residuals[0] > TOL {
            failures += 1;
        }
    }
    outcome(
        failures,
        format!(
            "30 maps, max residual {worst:e}, coordinate reduction identical, single functional residual up to {worst_single:e}, {restarts} cycle restarts"
        ),
    )
}

fn eigen_application() -> Outcome {
    let mut rng = rng(9);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let a = matrix(&integer_rows(&mut rng, n));
        let karp = karp_eigenvalue(&a).unwrap();
        if karp != max_cycle_mean(&a).unwrap() {
            failures += 1;
        }
        let e = eigenvector(&a).unwrap();
        let defect = eigen_defect(&a, e.lambda, &e.vector).unwrap();
        worst = worst.max(defect);
        if defect > 1e-12 || e.vector.iter().all(|v| v.is_bottom()) {
            failures += 1;
        }
    }
    let worked = matrix(&[vec![Some(2), Some(5)], vec![Some(1), Some(3)]]);
    let e = eigenvector(&worked).unwrap();
    let expected = [MaxPlus::Finite(2.0), MaxPlus::Finite(0.0)];
    if e.lambda != 3.0 || e.vector != expected {
        failures += 1;
    }
    outcome(
        failures,
        format!(
            "100 matrices, Karp equals enumeration, max defect {worst:e}; worked pair lambda {} v {:?}",
            e.lambda,
            e.finite_vector().map(|v| v.into_entries())
        ),
    )
}

fn cli_determinism() -> Outcome {
    let mut failures = 0;
    let mut notes = Vec::new();
    for case in GOLDEN {
        let expected = std::fs::read(golden_dir().join(format!("{}.out", case.name))).unwrap_or_default();
        for threads in [1, 4, 1, 4] {
            let (code, stdout) = run_case(case, threads);
            if code != case.code || stdout != expected {
                failures += 1;
                notes.push(format!("{} (threads {threads}, exit {code})", case.name));
            }
        }
    }
    let mut detail = format!("{} golden cases, 2 runs each at 1 and 4 threads", GOLDEN.len());
    if !notes.is_empty() {
        detail.push_str(&format!("; mismatches: {}", notes.join(", ")));
    }
    outcome(failures, detail)
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("semiring laws", semiring_laws),
        ("metric suite", metric_suite),
        ("retraction vs grid oracle", retraction_oracle),
        ("ray property", ray_property),
        ("a-convexity", a_convexity),
        ("sublevel projection roundtrip", sublevel_roundtrip),
        ("nonexpansive monotone maps", nonexpansive_maps),
        ("fixed points on invariant hulls", fixed_points),
        ("eigenproblem", eigen_application),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let status = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!(
            "{status} {:>2} {name}: {} ({:.1}s)",
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
