//! Brute-force reference computations.
//!
//! These work straight from the definitions: a tropical polytope is sampled
//! by a lattice of normalized coefficient vectors, and cycle means come from
//! enumerating every simple cycle. None of them go through the closed forms
//! in [`crate::polytope`], [`crate::fixpoint`] or [`crate::eigen`], which is
//! what makes them usable as cross-checks.
//!
//! Grid reductions only use `max` and `min` (with index tie-breaks where a
//! witness is returned), so parallel evaluation is deterministic.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::SelfMap;
use crate::matrix::Matrix;
use crate::polytope::Polytope;
use crate::real::Real;
use crate::semiring::MaxPlus;
use crate::space::{Functional, Vector};

/// Default cap on the number of grid points.
pub const GRID_LIMIT: u128 = 10_000_000;

/// Largest ambient dimension accepted by the grid oracles.
pub const MAX_GRID_DIM: usize = 4;

/// Largest matrix accepted by cycle enumeration.
pub const MAX_ENUMERATION_DIM: usize = 8;

/// Sampled polytope `{ ⊕_j λ_j ⊙ g_j }` with each `λ_j` drawn from
/// `{⊥, 0, -h, -2h, …}` and at least one `λ_j = 0`.
///
/// Levels stop once `λ_j ⊙ g_j` is dominated by every other generator, so
/// the lattice is finite. Every hull point lies within `h` (sup norm) of a
/// grid point, and the generators themselves are grid points.
#[derive(Clone, Debug)]
pub struct HullGrid<T> {
    generators: Vec<Vector<T>>,
    dim: usize,
    pitch: T,
    /// `levels[j][0]` is `0`; the rest are negative levels and `⊥`.
    levels: Vec<Vec<MaxPlus<T>>>,
    /// Number of tuples whose first zero coefficient is at index `z`.
    blocks: Vec<u64>,
    count: u64,
}

fn level_sets<T: Real>(p: &Polytope<T>, pitch: T) -> Vec<Vec<MaxPlus<T>>> {
    let gens = p.generators();
    gens.iter()
        .enumerate()
        .map(|(j, g)| {
            // λ_j ≤ threshold makes λ_j ⊙ g_j ≼ g_l for every other l
            let threshold = gens
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != j)
                .map(|(_, h)| {
                    g.iter()
                        .zip(h.iter())
                        .fold(T::infinity(), |acc, (a, b)| acc.min(b - a))
                })
                .fold(T::infinity(), T::min);
            let mut levels = vec![MaxPlus::Finite(T::zero())];
            if threshold.is_finite() && threshold < T::zero() {
                let mut i = 1usize;
                loop {
                    let level = -T::from_usize(i).expect("level index") * pitch;
                    if level <= threshold {
                        break;
                    }
                    levels.push(MaxPlus::Finite(level));
                    i += 1;
                }
            }
            if gens.len() > 1 {
                levels.push(MaxPlus::Bottom);
            }
            levels
        })
        .collect()
}

fn block_sizes(lens: &[u128]) -> Vec<u128> {
    (0..lens.len())
        .map(|z| {
            lens[..z].iter().map(|l| l - 1).product::<u128>() * lens[z + 1..].iter().product::<u128>()
        })
        .collect()
}

impl<T: Real> HullGrid<T> {
    /// Number of grid points at `pitch`, without building anything.
    pub fn size(p: &Polytope<T>, pitch: T) -> u128 {
        let lens: Vec<u128> = level_sets(p, pitch).iter().map(|l| l.len() as u128).collect();
        block_sizes(&lens).iter().sum()
    }

    pub fn new(p: &Polytope<T>, pitch: T, limit: u128) -> Result<Self> {
        if p.dim() > MAX_GRID_DIM {
            return Err(Error::ProblemTooLarge(format!(
                "dimension {} exceeds {}",
                p.dim(),
                MAX_GRID_DIM
            )));
        }
        if pitch.is_nan() || pitch <= T::zero() {
            return Err(Error::ProblemTooLarge(format!("pitch {pitch} must be positive")));
        }
        let levels = level_sets(p, pitch);
        let lens: Vec<u128> = levels.iter().map(|l| l.len() as u128).collect();
        let blocks = block_sizes(&lens);
        let count: u128 = blocks.iter().sum();
        if count > limit {
            return Err(Error::ProblemTooLarge(format!(
                "{count} grid points at pitch {pitch}, limit {limit}"
            )));
        }
        Ok(HullGrid {
            generators: p.generators().to_vec(),
            dim: p.dim(),
            pitch,
            levels,
            blocks: blocks.into_iter().map(|b| b as u64).collect(),
            count: count as u64,
        })
    }

    /// Finest pitch of the form `requested · 2^k` whose grid fits `limit`.
    pub fn with_budget(p: &Polytope<T>, requested: T, limit: u128) -> Result<Self> {
        let two = T::one() + T::one();
        let mut pitch = requested;
        for _ in 0..64 {
            if p.dim() <= MAX_GRID_DIM && Self::size(p, pitch) <= limit {
                return Self::new(p, pitch, limit);
            }
            pitch = pitch * two;
        }
        Self::new(p, pitch, limit)
    }

    pub fn pitch(&self) -> T {
        self.pitch
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Writes grid point number `idx` into `out`.
    fn point(&self, mut idx: u64, out: &mut [T]) {
        let k = self.generators.len();
        let mut zero_at = 0;
        while idx >= self.blocks[zero_at] {
            idx -= self.blocks[zero_at];
            zero_at += 1;
        }
        out.iter_mut().for_each(|o| *o = T::neg_infinity());
        for j in 0..k {
            let coeff = if j == zero_at {
                MaxPlus::Finite(T::zero())
            } else {
                let levels = &self.levels[j];
                let (offset, base) = if j < zero_at { (1, levels.len() - 1) } else { (0, levels.len()) };
                let d = (idx % base as u64) as usize;
                idx /= base as u64;
                levels[offset + d]
            };
            if let MaxPlus::Finite(c) = coeff {
                for (o, g) in out.iter_mut().zip(self.generators[j].iter()) {
                    *o = o.max(c + g);
                }
            }
        }
    }

    /// Parallel fold over all grid points.
    pub fn fold<A, Id, F, R>(&self, identity: Id, fold: F, reduce: R) -> A
    where
        A: Send,
        Id: Fn() -> A + Sync + Send,
        F: Fn(A, u64, &[T]) -> A + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        (0..self.count as usize)
            .into_par_iter()
            .with_min_len(1024)
            .fold(
                || (identity(), vec![T::zero(); self.dim]),
                |(acc, mut buf): (A, Vec<T>), idx| {
                    let idx = idx as u64;
                    self.point(idx, &mut buf);
                    (fold(acc, idx, &buf), buf)
                },
            )
            .map(|(a, _)| a)
            .reduce(&identity, &reduce)
    }

    /// All grid points, in index order. Only sensible for small grids.
    pub fn points(&self) -> Vec<Vector<T>> {
        let mut buf = vec![T::zero(); self.dim];
        (0..self.count)
            .map(|i| {
                self.point(i, &mut buf);
                Vector::from_vec_unchecked(buf.clone())
            })
            .collect()
    }

    pub fn min_over<F: Fn(&[T]) -> T + Sync + Send>(&self, f: F) -> T {
        self.fold(T::infinity, |acc, _, z| acc.min(f(z)), T::min)
    }

    pub fn max_over<F: Fn(&[T]) -> T + Sync + Send>(&self, f: F) -> T {
        self.fold(T::neg_infinity, |acc, _, z| acc.max(f(z)), T::max)
    }

    /// Grid point minimizing `f`, ties going to the lowest index.
    pub fn argmin<F: Fn(&[T]) -> T + Sync + Send>(&self, f: F) -> (Vector<T>, T) {
        let (idx, value) = self.fold(
            || (u64::MAX, T::infinity()),
            |acc, idx, z| {
                let v = f(z);
                if v < acc.1 || (v == acc.1 && idx < acc.0) {
                    (idx, v)
                } else {
                    acc
                }
            },
            |a, b| {
                if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
        let mut buf = vec![T::zero(); self.dim];
        self.point(idx.min(self.count.saturating_sub(1)), &mut buf);
        (Vector::from_vec_unchecked(buf), value)
    }

    /// Sup-norm distance from `y` to the nearest grid point.
    pub fn nearest_distance(&self, y: &Vector<T>) -> T {
        self.min_over(|z| {
            z.iter()
                .zip(y.iter())
                .fold(T::zero(), |acc, (a, b)| acc.max((*a - b).abs()))
        })
    }

    /// The retraction computed from its definition over every sampled
    /// point `z`: `r_z = min(0, min_i (y_i - z_i))`, `m = max_z r_z`,
    /// `p = ⊕_z r_z ⊙ z`, result `(-m) ⊙ p`.
    pub fn retract(&self, y: &Vector<T>) -> Vector<T> {
        self.retract_many(std::slice::from_ref(y)).pop().expect("one query")
    }

    /// [`HullGrid::retract`] for several queries in one sweep.
    pub fn retract_many(&self, ys: &[Vector<T>]) -> Vec<Vector<T>> {
        let n = self.dim;
        let identity = || vec![(T::neg_infinity(), vec![T::neg_infinity(); n]); ys.len()];
        let acc = self.fold(
            identity,
            |mut acc, _, z| {
                for ((m, p), y) in acc.iter_mut().zip(ys) {
                    let r = z
                        .iter()
                        .zip(y.iter())
                        .fold(T::zero(), |r, (a, b)| r.min(b - *a));
                    *m = m.max(r);
                    for (pi, zi) in p.iter_mut().zip(z) {
                        *pi = pi.max(r + *zi);
                    }
                }
                acc
            },
            |mut a, b| {
                for ((ma, pa), (mb, pb)) in a.iter_mut().zip(b) {
                    *ma = ma.max(mb);
                    for (x, y) in pa.iter_mut().zip(pb) {
                        *x = x.max(y);
                    }
                }
                a
            },
        );
        acc.into_iter()
            .map(|(m, p)| Vector::from_vec_unchecked(p.into_iter().map(|v| v - m).collect()))
            .collect()
    }

    /// Pointwise sup of the grid points `z` with `w(z) ≤ fvals_w + tol` for
    /// every functional, or `None` if there is no such point.
    pub fn sublevel_sup(&self, functionals: &[Functional<T>], fvals: &Vector<T>, tol: T) -> Option<Vector<T>> {
        let n = self.dim;
        let (found, sup) = self.fold(
            || (false, vec![T::neg_infinity(); n]),
            |(found, mut sup), _, z| {
                let below = functionals.iter().zip(fvals.iter()).all(|(w, f)| {
                    let wz = w
                        .coeffs()
                        .iter()
                        .zip(z)
                        .filter_map(|(c, v)| c.value().map(|c| c + *v))
                        .fold(T::neg_infinity(), T::max);
                    wz <= f + tol
                });
                if below {
                    for (s, v) in sup.iter_mut().zip(z) {
                        *s = s.max(*v);
                    }
                }
                (found || below, sup)
            },
            |(fa, mut a), (fb, b)| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.max(y);
                }
                (fa || fb, a)
            },
        );
        found.then(|| Vector::from_vec_unchecked(sup))
    }

    /// Grid point with the smallest residual `uniform_distance(f(z), z)`.
    pub fn min_residual<F: SelfMap<T> + Sync + ?Sized>(&self, f: &F) -> Result<(Vector<T>, T)> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.dim(),
            });
        }
        Ok(self.argmin(|z| {
            let zv = Vector::from_vec_unchecked(z.to_vec());
            match f.apply(&zv) {
                Ok(fz) => fz
                    .iter()
                    .zip(z)
                    .fold(T::zero(), |acc, (a, b)| acc.max((a - *b).abs())),
                Err(_) => T::infinity(),
            }
        }))
    }
}

/// Every simple cycle of the digraph `i → j` where `A_ij` is finite, as
/// (node sequence starting at its smallest node, total weight).
pub fn simple_cycles<T: Real>(a: &Matrix<T>) -> Result<Vec<(Vec<usize>, T)>> {
    let n = a.dim();
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::ProblemTooLarge(format!(
            "cycle enumeration limited to n <= {MAX_ENUMERATION_DIM}, got {n}"
        )));
    }
    let mut out = Vec::new();
    for start in 0..n {
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        extend_cycles(a, start, &mut path, &mut on_path, &mut out);
    }
    Ok(out)
}

fn extend_cycles<T: Real>(
    a: &Matrix<T>,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<(Vec<usize>, T)>,
) {
    let last = *path.last().expect("non-empty path");
    for next in start..a.dim() {
        if a.get(last, next).is_bottom() {
            continue;
        }
        if next == start {
            let weight = path
                .iter()
                .zip(path.iter().skip(1).chain(std::iter::once(&start)))
                .map(|(&i, &j)| a.get(i, j).value().expect("finite edge"))
                .fold(T::zero(), |s, w| s + w);
            out.push((path.clone(), weight));
        } else if !on_path[next] {
            on_path[next] = true;
            path.push(next);
            extend_cycles(a, start, path, on_path, out);
            path.pop();
            on_path[next] = false;
        }
    }
}

/// Maximum of `weight / length` over all simple cycles.
pub fn max_cycle_mean<T: Real>(a: &Matrix<T>) -> Result<T> {
    simple_cycles(a)?
        .into_iter()
        .map(|(c, w)| w / T::from_usize(c.len()).expect("small integer"))
        .fold(None, |best: Option<T>, m| Some(best.map_or(m, |b| b.max(m))))
        .ok_or(Error::NoCycle)
}

/// Nodes on some simple cycle whose mean equals the maximum exactly.
pub fn critical_nodes_by_enumeration<T: Real>(a: &Matrix<T>) -> Result<Vec<usize>> {
    let lambda = max_cycle_mean(a)?;
    let mut nodes: Vec<usize> = simple_cycles(a)?
        .into_iter()
        .filter(|(c, w)| *w / T::from_usize(c.len()).expect("small integer") == lambda)
        .flat_map(|(c, _)| c)
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    Ok(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts_and_contains_generators() {
        let p = Polytope::<f64>::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let grid = HullGrid::new(&p, 0.5, 1000).unwrap();
        let pts = grid.points();
        assert_eq!(pts.len() as u64, grid.len());
        assert_eq!(grid.len() as u128, HullGrid::size(&p, 0.5));
        for g in p.generators() {
            assert!(pts.contains(g));
        }
        // (0,0) ⊕ λ ⊙ (2,0) for λ ∈ {-0.5,-1,-1.5} and (2,0) ⊕ … collapses
        assert!(pts.contains(&Vector::from_f64s(&[1.0, 0.0]).unwrap()));
    }

    #[test]
    fn grid_limit_enforced() {
        let p = Polytope::<f64>::from_rows(&[vec![0.0, 5.0, -5.0], vec![5.0, -5.0, 0.0], vec![-5.0, 0.0, 5.0]]).unwrap();
        assert!(matches!(HullGrid::new(&p, 1e-4, 1000), Err(Error::ProblemTooLarge(_))));
        let g = HullGrid::with_budget(&p, 1e-4, 1000).unwrap();
        assert!(g.len() <= 1000);
        assert!(g.pitch() > 1e-4);
        let big = Polytope::<f64>::from_rows(&[vec![0.0; 5]]).unwrap();
        assert!(HullGrid::new(&big, 1.0, 1000).is_err());
    }

    #[test]
    fn cycles_of_two_by_two() {
        let a = Matrix::<f64>::from_rows(&[vec![2.0, 5.0], vec![1.0, 3.0]]).unwrap();
        let mut cycles = simple_cycles(&a).unwrap();
        cycles.sort_by(|x, y| x.0.cmp(&y.0));
        assert_eq!(cycles, vec![(vec![0], 2.0), (vec![0, 1], 6.0), (vec![1], 3.0)]);
        assert_eq!(max_cycle_mean(&a).unwrap(), 3.0);
        assert_eq!(critical_nodes_by_enumeration(&a).unwrap(), vec![0, 1]);
    }

    #[test]
    fn deterministic_across_pools() {
        let p = Polytope::<f64>::from_rows(&[vec![0.0, 1.0, -2.0], vec![3.0, -1.0, 0.0], vec![-1.0, 2.0, 2.0]]).unwrap();
        let grid = HullGrid::new(&p, 0.05, 10_000_000).unwrap();
        let y = Vector::from_f64s(&[0.3, -0.7, 1.1]).unwrap();
        let a = grid.retract(&y);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| grid.retract(&y));
        assert_eq!(a, b);
    }
}
