//! The finite-dimensional space `B(T)`: real vectors with pointwise `max`
//! as addition, uniform shifts as scalar multiplication and the sup-norm
//! metric.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::real::Real;
use crate::semiring::MaxPlus;

/// A point of `B(T)` for a finite index set: a non-empty tuple of finite
/// reals. Bottom entries are not allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T> {
    entries: Vec<T>,
}

impl<T: Real> Vector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some((index, v)) = entries.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                index,
                value: v.to_f64_lossy(),
            });
        }
        Ok(Vector { entries })
    }

    pub fn from_f64s(values: &[f64]) -> Result<Self> {
        let entries = values
            .iter()
            .enumerate()
            .map(|(index, &v)| {
                T::from_f64(v).ok_or(Error::NonFinite { index, value: v })
            })
            .collect::<Result<Vec<T>>>()?;
        Self::new(entries)
    }

    /// Constant vector `(c, ..., c)`.
    pub fn constant(dim: usize, c: T) -> Result<Self> {
        Self::new(vec![c; dim])
    }

    /// Caller guarantees non-empty, finite entries.
    pub(crate) fn from_vec_unchecked(entries: Vec<T>) -> Self {
        debug_assert!(!entries.is_empty());
        Vector { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.entries.iter().copied()
    }

    pub fn max_entry(&self) -> T {
        self.iter().fold(T::neg_infinity(), T::max)
    }

    pub fn min_entry(&self) -> T {
        self.iter().fold(T::infinity(), T::min)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        check_dim(self.dim(), other.dim())
    }

    /// Pointwise maximum `x ⊕ y`.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.oplus_unchecked(other))
    }

    pub(crate) fn oplus_unchecked(&self, other: &Self) -> Self {
        Vector::from_vec_unchecked(
            self.iter().zip(other.iter()).map(|(a, b)| a.max(b)).collect(),
        )
    }

    /// `r ⊙ x`: adds `r` to every entry.
    pub fn scale(&self, r: MaxPlus<T>) -> Result<Self> {
        match r {
            MaxPlus::Bottom => Err(Error::BottomScaling),
            MaxPlus::Finite(r) => Ok(self.shift(r)),
        }
    }

    /// Finite scaling; same as [`Vector::scale`] with a known finite factor.
    pub fn shift(&self, r: T) -> Self {
        Vector::from_vec_unchecked(self.iter().map(|a| a + r).collect())
    }

    /// Pointwise order `x ≼ y`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_same_dim(other)?;
        Ok(self.iter().zip(other.iter()).all(|(a, b)| a <= b))
    }

    /// `x ≫ y`: some `r > 0` has `r ⊙ y ≼ x`, i.e. `min_i (x_i - y_i) > 0`.
    pub fn strictly_dominates(&self, other: &Self) -> Result<bool> {
        self.check_same_dim(other)?;
        Ok(self.iter().zip(other.iter()).all(|(a, b)| a - b > T::zero()))
    }
}

impl<T: Real> std::ops::Index<usize> for Vector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.entries[i]
    }
}

impl<T: Real + Serialize> Serialize for Vector<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Vector<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<T>::deserialize(deserializer)?;
        Vector::new(entries).map_err(serde::de::Error::custom)
    }
}

/// Uniform (sup-norm) distance `max_i |x_i - y_i|`.
///
/// This is the closed form of `inf { r ≥ 0 : (-r) ⊙ x ≼ y ≼ r ⊙ x }`.
pub fn uniform_distance<T: Real>(x: &Vector<T>, y: &Vector<T>) -> Result<T> {
    check_dim(x.dim(), y.dim())?;
    Ok(distance_unchecked(x, y))
}

pub(crate) fn distance_unchecked<T: Real>(x: &Vector<T>, y: &Vector<T>) -> T {
    x.iter()
        .zip(y.iter())
        .fold(T::zero(), |acc, (a, b)| acc.max((a - b).abs()))
}

/// Bounded version `arctan(uniform_distance(x, y))`, valued in `[0, π/2)`.
pub fn arctan_distance<T: Real>(x: &Vector<T>, y: &Vector<T>) -> Result<T> {
    uniform_distance(x, y).map(T::atan)
}

/// Membership in the neighbourhood `D_x(r) = { y : r⊙x ≫ y ≫ (-r)⊙x }`,
/// evaluated through the two domination relations.
pub fn in_ball<T: Real>(center: &Vector<T>, radius: T, y: &Vector<T>) -> Result<bool> {
    if radius.is_nan() || radius <= T::zero() {
        return Err(Error::RadiusNotAboveUnit(radius.to_f64_lossy()));
    }
    check_dim(center.dim(), y.dim())?;
    Ok(center.shift(radius).strictly_dominates(y)? && y.shift(radius).strictly_dominates(center)?)
}

/// `⊕_j (coeffs_j ⊙ points_j)` where the finite coefficients have maximum
/// exactly `0`. Bottom coefficients drop their point.
pub fn convex_combination<T: Real>(
    coeffs: &[MaxPlus<T>],
    points: &[Vector<T>],
) -> Result<Vector<T>> {
    check_dim(coeffs.len(), points.len())?;
    let first = points.first().ok_or(Error::EmptyCombination)?;
    for p in points {
        check_dim(first.dim(), p.dim())?;
    }
    let top = coeffs.iter().copied().fold(MaxPlus::Bottom, MaxPlus::oplus);
    match top {
        MaxPlus::Bottom => return Err(Error::EmptyCombination),
        MaxPlus::Finite(t) if t != T::zero() => {
            return Err(Error::CoefficientsNotNormalized(t.to_f64_lossy()))
        }
        MaxPlus::Finite(_) => {}
    }
    let mut acc = vec![T::neg_infinity(); first.dim()];
    for (c, p) in coeffs.iter().zip(points) {
        if let MaxPlus::Finite(c) = *c {
            for (a, v) in acc.iter_mut().zip(p.iter()) {
                *a = a.max(c + v);
            }
        }
    }
    Ok(Vector::from_vec_unchecked(acc))
}

/// A continuous linear functional `w(x) = max_i (a_i + x_i)` on `B(T)`.
///
/// Bottom coefficients ignore their coordinate, which is how coordinate
/// projections are written. At least one coefficient must be finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional<T> {
    coeffs: Vec<MaxPlus<T>>,
}

impl<T: Real> Functional<T> {
    pub fn new(coeffs: Vec<MaxPlus<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coeffs.iter().all(|c| c.is_bottom()) {
            return Err(Error::DegenerateFunctional);
        }
        if let Some((index, v)) = coeffs
            .iter()
            .enumerate()
            .find_map(|(i, c)| c.value().filter(|v| !v.is_finite()).map(|v| (i, v)))
        {
            return Err(Error::NonFinite {
                index,
                value: v.to_f64_lossy(),
            });
        }
        Ok(Functional { coeffs })
    }

    /// The evaluation `x ↦ x_index`.
    pub fn coordinate(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::VariableOutOfRange { index, dim });
        }
        let mut coeffs = vec![MaxPlus::Bottom; dim];
        coeffs[index] = MaxPlus::unit();
        Self::new(coeffs)
    }

    /// All coordinate functionals of `B(T)`; they separate points.
    pub fn coordinates(dim: usize) -> Vec<Self> {
        (0..dim)
            .map(|i| Self::coordinate(dim, i).expect("index below dim"))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[MaxPlus<T>] {
        &self.coeffs
    }

    pub fn apply(&self, x: &Vector<T>) -> Result<T> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Vector<T>) -> T {
        self.coeffs
            .iter()
            .zip(x.iter())
            .filter_map(|(c, v)| c.value().map(|c| c + v))
            .fold(T::neg_infinity(), T::max)
    }
}

impl<T: Real + Serialize> Serialize for Functional<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Functional<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<MaxPlus<T>>::deserialize(deserializer)?;
        Functional::new(coeffs).map_err(serde::de::Error::custom)
    }
}
