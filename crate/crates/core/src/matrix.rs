//! Square max-plus matrices.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::real::Real;
use crate::semiring::MaxPlus;
use crate::space::Vector;

/// An `n × n` matrix over the max-plus numbers acting by
/// `(A ⊙ x)_i = max_j (A_ij + x_j)`.
///
/// Every row must contain a finite entry so that finite vectors map to
/// finite vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    entries: Vec<MaxPlus<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn new(rows: Vec<Vec<MaxPlus<T>>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            check_dim(n, row.len())?;
            if row.iter().all(|a| a.is_bottom()) {
                return Err(Error::EmptyRow(i));
            }
            for (j, a) in row.iter().enumerate() {
                if let Some(v) = a.value() {
                    if !v.is_finite() {
                        return Err(Error::NonFinite {
                            index: i * n + j,
                            value: v.to_f64_lossy(),
                        });
                    }
                }
            }
            entries.extend(row);
        }
        Ok(Matrix { n, entries })
    }

    /// Builds from `f64` rows where `-inf` stands for bottom.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| {
                        let t = T::from_f64(v).ok_or(Error::NonFinite { index: 0, value: v })?;
                        MaxPlus::from_extended(t)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![MaxPlus::Bottom; n * n];
        for i in 0..n {
            entries[i * n + i] = MaxPlus::unit();
        }
        Matrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> MaxPlus<T> {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[MaxPlus<T>] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[MaxPlus<T>]> {
        self.entries.chunks(self.n)
    }

    /// `A ⊙ x` for a finite vector.
    pub fn apply(&self, x: &Vector<T>) -> Result<Vector<T>> {
        check_dim(self.n, x.dim())?;
        Ok(Vector::from_vec_unchecked(
            self.rows()
                .map(|row| {
                    row.iter()
                        .zip(x.iter())
                        .filter_map(|(a, v)| a.value().map(|a| a + v))
                        .fold(T::neg_infinity(), T::max)
                })
                .collect(),
        ))
    }

    /// `A ⊙ x` for a vector that may contain bottom entries.
    pub fn apply_extended(&self, x: &[MaxPlus<T>]) -> Result<Vec<MaxPlus<T>>> {
        check_dim(self.n, x.len())?;
        Ok(self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(MaxPlus::Bottom, |acc, (a, v)| acc.oplus(a.otimes(*v)))
            })
            .collect())
    }

    /// Max-plus product `A ⊙ B`.
    pub fn otimes(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let n = self.n;
        let mut entries = vec![MaxPlus::Bottom; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_bottom() {
                    continue;
                }
                for j in 0..n {
                    let cell = &mut entries[i * n + j];
                    *cell = cell.oplus(a.otimes(other.get(k, j)));
                }
            }
        }
        Ok(Matrix { n, entries })
    }

    /// Entrywise maximum `A ⊕ B`.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        Ok(Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.oplus(*b))
                .collect(),
        })
    }

    /// `c ⊙ A`: shifts every finite entry by `c`.
    pub fn shift(&self, c: T) -> Self {
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|a| a.otimes(MaxPlus::Finite(c)))
                .collect(),
        }
    }

    /// `I ⊕ A ⊕ A² ⊕ … ⊕ A^{n-1}`.
    ///
    /// This equals the Kleene star when no cycle has positive weight.
    pub fn kleene_star(&self) -> Self {
        let mut star = Matrix::identity(self.n);
        let mut power = Matrix::identity(self.n);
        for _ in 1..self.n {
            power = power.otimes(self).expect("same dimension");
            star = star.oplus(&power).expect("same dimension");
        }
        star
    }

    pub fn column(&self, j: usize) -> Vec<MaxPlus<T>> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }
}

impl<T: Real + Serialize> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[MaxPlus<T>]> = self.rows().collect();
        rows.serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<MaxPlus<T>>>::deserialize(deserializer)?;
        Matrix::new(rows).map_err(serde::de::Error::custom)
    }
}
