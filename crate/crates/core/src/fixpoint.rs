//! Fixed points of monotone self-maps of tropical polytopes, and the
//! reduction to a finite set of linear functionals.
//!
//! Existence is guaranteed for continuous self-maps of compact ⊕-convex
//! sets, but not constructively. The solver here iterates
//! `x ← π(f(x))` with the retraction `π` onto the polytope, from several
//! starting points, and reports a residual certificate
//! `uniform_distance(f(x), x)` with every answer. It never claims that no
//! fixed point exists.

use std::collections::{HashMap, HashSet};

use log::debug;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::map::SelfMap;
use crate::polytope::Polytope;
use crate::real::Real;
use crate::space::{distance_unchecked, Functional, Vector};

/// The evaluation map `x ↦ (w(x))_{w ∈ T}` into `B(T)`.
pub fn embed<T: Real>(functionals: &[Functional<T>], x: &Vector<T>) -> Result<Vector<T>> {
    if functionals.is_empty() {
        return Err(Error::EmptyVector);
    }
    functionals
        .iter()
        .map(|w| w.apply(x))
        .collect::<Result<Vec<T>>>()
        .map(Vector::from_vec_unchecked)
}

/// The image of the polytope under [`embed`]; linearity of the embedding
/// makes it the hull of the embedded generators.
pub fn image_polytope<T: Real>(p: &Polytope<T>, functionals: &[Functional<T>]) -> Result<Polytope<T>> {
    Polytope::new(
        p.generators()
            .iter()
            .map(|g| embed(functionals, g))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Greatest polytope point whose embedding lies below `fvals`.
///
/// With `μ_j = min(0, min_w (fvals_w - w(g_j)))` the answer is
/// `⊕_j μ_j ⊙ g_j`, which is a normalized combination when `max_j μ_j = 0`.
/// If the top coefficient is below `-tol` no polytope point lies under
/// `fvals` and [`Error::EmptySublevel`] is returned.
pub fn project_sublevel<T: Real>(
    p: &Polytope<T>,
    functionals: &[Functional<T>],
    fvals: &Vector<T>,
    tol: T,
) -> Result<Vector<T>> {
    check_dim(functionals.len(), fvals.dim())?;
    for w in functionals {
        check_dim(p.dim(), w.dim())?;
    }
    let coeffs: Vec<T> = p
        .generators()
        .iter()
        .map(|g| {
            functionals
                .iter()
                .zip(fvals.iter())
                .fold(T::zero(), |acc, (w, f)| acc.min(f - w.apply_unchecked(g)))
        })
        .collect();
    let top = coeffs.iter().copied().fold(T::neg_infinity(), T::max);
    if top < -tol {
        return Err(Error::EmptySublevel(top.to_f64_lossy()));
    }
    let mut acc = vec![T::neg_infinity(); p.dim()];
    for (c, g) in coeffs.iter().zip(p.generators()) {
        for (a, v) in acc.iter_mut().zip(g.iter()) {
            *a = a.max(*c + v);
        }
    }
    Ok(Vector::from_vec_unchecked(acc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    CycleDetected,
    MaxIterations,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::CycleDetected => "CycleDetected",
            Status::MaxIterations => "MaxIterations",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions<T> {
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        SolverOptions {
            tol: T::default_tol(),
            max_iter: 10_000,
        }
    }
}

/// Certificate returned by [`find_fixpoint`].
///
/// `residual` is always `uniform_distance(f(point), point)`, and
/// `status == Converged` implies `residual <= tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixpointReport<T> {
    pub point: Vector<T>,
    pub residual: T,
    pub iterations: usize,
    pub status: Status,
    /// Index into the start list: the caller's `x0` first (when given),
    /// then the generators in order.
    pub start: usize,
    /// Largest `uniform_distance(π(f(x)), f(x))` seen on the winning run;
    /// zero when `f` maps the polytope into itself along that orbit.
    pub max_displacement: T,
    /// Number of restarts from the supremum of a detected cycle.
    pub restarts: usize,
}

/// Restarts allowed per start point after a cycle is found.
const MAX_RESTARTS: usize = 16;

fn grid_key<T: Real>(x: &Vector<T>) -> Vec<i64> {
    let pitch = T::cycle_grid();
    x.iter()
        .map(|v| (v / pitch).round().to_i64().unwrap_or(if v > T::zero() { i64::MAX } else { i64::MIN }))
        .collect()
}

/// Searches for `x ∈ P` with `f(x) = x` up to `opts.tol`.
///
/// Each start is iterated with `x ← π(f(x))`. Iterates are snapped to a
/// fine lattice; a revisit means the orbit is periodic. For a monotone map
/// the supremum `y` of a periodic orbit lies in `P` and satisfies
/// `f(y) ≽ y`, so the run restarts from `y`, after which the orbit is
/// nondecreasing. The best certificate over all starts wins, ties going to
/// the earlier start.
pub fn find_fixpoint<T, F>(
    f: &F,
    p: &Polytope<T>,
    x0: Option<&Vector<T>>,
    opts: &SolverOptions<T>,
) -> Result<FixpointReport<T>>
where
    T: Real,
    F: SelfMap<T> + Sync + ?Sized,
{
    check_dim(p.dim(), f.dim())?;
    let mut starts = Vec::with_capacity(p.len() + 1);
    if let Some(x0) = x0 {
        check_dim(p.dim(), x0.dim())?;
        let cert = p.membership(x0)?;
        if !cert.is_member(opts.tol) {
            return Err(Error::NotAMember {
                gap: cert.gap.to_f64_lossy(),
                top: cert.top.to_f64_lossy(),
            });
        }
        starts.push(x0.clone());
    }
    starts.extend(p.generators().iter().cloned());

    let runs = starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| run_from(f, p, s.clone(), i, opts))
        .collect::<Result<Vec<_>>>()?;
    let best = runs
        .into_iter()
        .min_by(|a, b| {
            a.residual
                .partial_cmp(&b.residual)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.start.cmp(&b.start))
        })
        .expect("at least one generator");
    debug!(
        "fixpoint: start {} status {:?} residual {} after {} iterations",
        best.start, best.status, best.residual, best.iterations
    );
    Ok(best)
}

fn run_from<T, F>(
    f: &F,
    p: &Polytope<T>,
    start: Vector<T>,
    start_index: usize,
    opts: &SolverOptions<T>,
) -> Result<FixpointReport<T>>
where
    T: Real,
    F: SelfMap<T> + ?Sized,
{
    let mut x = start;
    let mut best: Option<(Vector<T>, T)> = None;
    let mut max_displacement = T::zero();
    let mut restarts = 0;
    let mut restart_keys: HashSet<Vec<i64>> = HashSet::new();
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut trail: Vec<Vector<T>> = Vec::new();
    seen.insert(grid_key(&x), 0);
    trail.push(x.clone());

    let finish = |best: Option<(Vector<T>, T)>, x: Vector<T>, iterations, status, max_displacement, restarts| -> Result<FixpointReport<T>> {
        let (point, residual) = match best {
            Some(b) => b,
            None => {
                let fx = f.apply(&x)?;
                let r = distance_unchecked(&fx, &x);
                (x, r)
            }
        };
        Ok(FixpointReport {
            point,
            residual,
            iterations,
            status,
            start: start_index,
            max_displacement,
            restarts,
        })
    };

    for iteration in 1..=opts.max_iter {
        let fx = f.apply(&x)?;
        check_dim(x.dim(), fx.dim())?;
        let residual = distance_unchecked(&fx, &x);
        if best.as_ref().is_none_or(|(_, r)| residual < *r) {
            best = Some((x.clone(), residual));
        }
        if residual <= opts.tol {
            return Ok(FixpointReport {
                point: x,
                residual,
                iterations: iteration,
                status: Status::Converged,
                start: start_index,
                max_displacement,
                restarts,
            });
        }
        let next = p.retract(&fx)?;
        max_displacement = max_displacement.max(distance_unchecked(&next, &fx));
        let key = grid_key(&next);
        if let Some(&first) = seen.get(&key) {
            let sup = trail[first..]
                .iter()
                .skip(1)
                .fold(trail[first].clone(), |acc, v| acc.oplus_unchecked(v));
            let sup_key = grid_key(&sup);
            if restarts < MAX_RESTARTS && restart_keys.insert(sup_key.clone()) {
                restarts += 1;
                seen.clear();
                trail.clear();
                seen.insert(sup_key, 0);
                trail.push(sup.clone());
                x = sup;
                continue;
            }
            return finish(best, x, iteration, Status::CycleDetected, max_displacement, restarts);
        }
        seen.insert(key, trail.len());
        trail.push(next.clone());
        x = next;
    }
    finish(best, x, opts.max_iter, Status::MaxIterations, max_displacement, restarts)
}

/// Result of [`solve_on_functionals`].
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalReport<T> {
    /// `x = project_sublevel(u*)`, a point of the original polytope.
    pub point: Vector<T>,
    /// The fixed point `u*` found in the image polytope.
    pub image_point: Vector<T>,
    /// The certificate of the search in the image polytope.
    pub image: FixpointReport<T>,
    /// `|w(x) - w(f(x))|` for each functional, in order.
    pub functional_residuals: Vec<T>,
    /// `uniform_distance(f(x), x)` in the original space.
    pub full_residual: T,
}

impl<T: Real> FunctionalReport<T> {
    pub fn status(&self) -> Status {
        self.image.status
    }
}

/// `u ↦ embed(f(project_sublevel(u)))` on the image polytope.
struct ReducedMap<'a, T, F: ?Sized> {
    f: &'a F,
    p: &'a Polytope<T>,
    functionals: &'a [Functional<T>],
    tol: T,
}

impl<T: Real, F: SelfMap<T> + ?Sized> SelfMap<T> for ReducedMap<'_, T, F> {
    fn dim(&self) -> usize {
        self.functionals.len()
    }

    fn apply(&self, u: &Vector<T>) -> Result<Vector<T>> {
        let x = project_sublevel(self.p, self.functionals, u, self.tol)?;
        embed(self.functionals, &self.f.apply(&x)?)
    }
}

/// Finds `x ∈ P` with `w(x) = w(f(x))` for every `w` in `functionals`.
///
/// The search runs on the image polytope `U = embed(P)` with the map
/// `g(u) = embed(f(project_sublevel(u)))`; a fixed point `u*` of `g` pulls
/// back to `x = project_sublevel(u*)`. With the coordinate functionals this
/// is the same search as [`find_fixpoint`].
pub fn solve_on_functionals<T, F>(
    f: &F,
    p: &Polytope<T>,
    functionals: &[Functional<T>],
    x0: Option<&Vector<T>>,
    opts: &SolverOptions<T>,
) -> Result<FunctionalReport<T>>
where
    T: Real,
    F: SelfMap<T> + Sync + ?Sized,
{
    check_dim(p.dim(), f.dim())?;
    for w in functionals {
        check_dim(p.dim(), w.dim())?;
    }
    let image = image_polytope(p, functionals)?;
    let u0 = match x0 {
        Some(x0) => {
            let cert = p.membership(x0)?;
            if !cert.is_member(opts.tol) {
                return Err(Error::NotAMember {
                    gap: cert.gap.to_f64_lossy(),
                    top: cert.top.to_f64_lossy(),
                });
            }
            Some(embed(functionals, x0)?)
        }
        None => None,
    };
    let g = ReducedMap {
        f,
        p,
        functionals,
        tol: opts.tol,
    };
    let report = find_fixpoint(&g, &image, u0.as_ref(), opts)?;
    let x = project_sublevel(p, functionals, &report.point, opts.tol)?;
    let fx = f.apply(&x)?;
    let functional_residuals = functionals
        .iter()
        .map(|w| (w.apply_unchecked(&x) - w.apply_unchecked(&fx)).abs())
        .collect();
    let full_residual = distance_unchecked(&fx, &x);
    Ok(FunctionalReport {
        point: x,
        image_point: report.point.clone(),
        image: report,
        functional_residuals,
        full_residual,
    })
}
