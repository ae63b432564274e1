//! Tropical polytopes: ⊕-convex hulls of finitely many generators, with
//! residuation-based membership and the retraction of the whole space onto
//! the hull.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::real::Real;
use crate::semiring::MaxPlus;
use crate::space::{distance_unchecked, Vector};

/// Greatest `λ` with `λ ⊙ g ≼ y`, namely `min_i (y_i - g_i)`.
pub fn residual<T: Real>(g: &Vector<T>, y: &Vector<T>) -> Result<T> {
    check_dim(g.dim(), y.dim())?;
    Ok(residual_unchecked(g, y))
}

fn residual_unchecked<T: Real>(g: &Vector<T>, y: &Vector<T>) -> T {
    g.iter()
        .zip(y.iter())
        .fold(T::infinity(), |acc, (a, b)| acc.min(b - a))
}

/// `sup { r ≼ 0 : r ⊙ g ≼ y }`, the residual clamped at the unit.
pub fn clamped_residual<T: Real>(g: &Vector<T>, y: &Vector<T>) -> Result<T> {
    residual(g, y).map(|r| r.min(T::zero()))
}

/// The set `{ ⊕_j λ_j ⊙ g_j : max_j λ_j = 0 }` for generators `g_j`.
///
/// The coefficients are normalized, so this is the bounded hull and not
/// the cone spanned by the generators. Generators are kept as given; call
/// [`Polytope::reduce`] to drop redundant ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope<T> {
    dim: usize,
    generators: Vec<Vector<T>>,
}

/// Output of the residuation step behind [`Polytope::membership`].
#[derive(Clone, Debug, PartialEq)]
pub struct Membership<T> {
    /// `μ_j = min(0, residual(g_j, y))`.
    pub coefficients: Vec<T>,
    /// `z = ⊕_j μ_j ⊙ g_j`, the greatest hull-shaped point below `y`.
    pub reconstruction: Vector<T>,
    /// `uniform_distance(z, y)`.
    pub gap: T,
    /// `max_j μ_j`; zero when `z` is a normalized combination.
    pub top: T,
}

impl<T: Real> Membership<T> {
    pub fn is_member(&self, tol: T) -> bool {
        self.gap <= tol && self.top >= -tol
    }
}

/// Intermediate quantities of the retraction `π(y) = (-m) ⊙ p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Retraction<T> {
    /// `r_j = min(0, residual(g_j, y))`.
    pub coefficients: Vec<T>,
    /// `m(y) = max_j r_j`, always `≤ 0`.
    pub scale: T,
    /// `p(y) = ⊕_j r_j ⊙ g_j`.
    pub upper: Vector<T>,
    /// `π(y)`.
    pub point: Vector<T>,
}

impl<T: Real> Polytope<T> {
    pub fn new(generators: Vec<Vector<T>>) -> Result<Self> {
        let dim = generators.first().ok_or(Error::NoGenerators)?.dim();
        for g in &generators {
            check_dim(dim, g.dim())?;
        }
        Ok(Polytope { dim, generators })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| Vector::from_f64s(r))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector<T>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `⊕_j coeffs_j ⊙ g_j` with `max_j coeffs_j = 0`.
    pub fn combination(&self, coeffs: &[MaxPlus<T>]) -> Result<Vector<T>> {
        crate::space::convex_combination(coeffs, &self.generators)
    }

    /// `⊕_j λ_j ⊙ g_j` over finite, possibly unnormalized coefficients.
    fn combine(&self, coeffs: &[T]) -> Vector<T> {
        let mut acc = vec![T::neg_infinity(); self.dim];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            for (a, v) in acc.iter_mut().zip(g.iter()) {
                *a = a.max(*c + v);
            }
        }
        Vector::from_vec_unchecked(acc)
    }

    fn clamped_coefficients(&self, y: &Vector<T>) -> Vec<T> {
        self.generators
            .iter()
            .map(|g| residual_unchecked(g, y).min(T::zero()))
            .collect()
    }

    /// The residuation certificate for `y`: `y ∈ X` iff the reconstruction
    /// equals `y` and the top coefficient is `0`.
    pub fn membership(&self, y: &Vector<T>) -> Result<Membership<T>> {
        check_dim(self.dim, y.dim())?;
        let coefficients = self.clamped_coefficients(y);
        let reconstruction = self.combine(&coefficients);
        let gap = distance_unchecked(&reconstruction, y);
        let top = coefficients.iter().copied().fold(T::neg_infinity(), T::max);
        Ok(Membership {
            coefficients,
            reconstruction,
            gap,
            top,
        })
    }

    pub fn contains(&self, y: &Vector<T>, tol: T) -> Result<bool> {
        Ok(self.membership(y)?.is_member(tol))
    }

    /// Pointwise maximum of hull members; the result is again a member.
    pub fn sup_subset(&self, members: &[Vector<T>], tol: T) -> Result<Vector<T>> {
        let first = members.first().ok_or(Error::EmptyCombination)?;
        let mut acc = first.clone();
        for m in members {
            let cert = self.membership(m)?;
            if !cert.is_member(tol) {
                return Err(Error::NotAMember {
                    gap: cert.gap.to_f64_lossy(),
                    top: cert.top.to_f64_lossy(),
                });
            }
            acc = acc.oplus_unchecked(m);
        }
        Ok(acc)
    }

    /// The retraction of the whole space onto the hull together with its
    /// building blocks.
    ///
    /// With finite entries every `y` dominates some downscaled generator,
    /// so the domain is the whole space.
    pub fn retraction(&self, y: &Vector<T>) -> Result<Retraction<T>> {
        check_dim(self.dim, y.dim())?;
        let coefficients = self.clamped_coefficients(y);
        let scale = coefficients.iter().copied().fold(T::neg_infinity(), T::max);
        let upper = self.combine(&coefficients);
        let point = upper.shift(-scale);
        Ok(Retraction {
            coefficients,
            scale,
            upper,
            point,
        })
    }

    /// `π(y)`: fixes hull points and maps everything else into the hull.
    pub fn retract(&self, y: &Vector<T>) -> Result<Vector<T>> {
        Ok(self.retraction(y)?.point)
    }

    /// Drops every generator that is a member of the hull of the others.
    /// Never applied implicitly.
    pub fn reduce(&self, tol: T) -> Self {
        let mut kept = self.generators.clone();
        let mut i = 0;
        while i < kept.len() && kept.len() > 1 {
            let others: Vec<Vector<T>> = kept
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let rest = Polytope {
                dim: self.dim,
                generators: others,
            };
            if rest.contains(&kept[i], tol).unwrap_or(false) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Polytope {
            dim: self.dim,
            generators: kept,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeRepr<T> {
    dim: usize,
    generators: Vec<Vec<T>>,
}

impl<T: Real + Serialize> Serialize for Polytope<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeRepr {
            dim: self.dim,
            generators: self.generators.iter().map(|g| g.entries().to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Polytope<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PolytopeRepr::<T>::deserialize(deserializer)?;
        let generators = repr
            .generators
            .into_iter()
            .map(Vector::new)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let p = Polytope::new(generators).map_err(D::Error::custom)?;
        check_dim(repr.dim, p.dim).map_err(D::Error::custom)?;
        Ok(p)
    }
}
