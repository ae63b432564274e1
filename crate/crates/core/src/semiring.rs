//! The max-plus semiring: reals under `max` and `+`, completed by a bottom
//! element playing the role of `-inf`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::real::Real;

/// A max-plus number.
///
/// `Bottom` is the additive zero (`-inf`). It is kept as its own variant
/// rather than an IEEE infinity so that `Bottom ⊙ Bottom` and the JSON
/// encoding (`null`) are unambiguous. `Finite` must hold a finite value;
/// use [`MaxPlus::finite`] or [`MaxPlus::from_extended`] to get that checked.
///
/// The derived order puts `Bottom` below every finite value and compares
/// finite values as reals, which is exactly the standard order `a ≼ b`
/// iff `a ⊕ b = b`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum MaxPlus<T> {
    Bottom,
    Finite(T),
}

impl<T: Real> MaxPlus<T> {
    /// The multiplicative unit, the real number `0`.
    pub fn unit() -> Self {
        MaxPlus::Finite(T::zero())
    }

    pub fn bottom() -> Self {
        MaxPlus::Bottom
    }

    /// Wraps a finite value; rejects NaN and infinities.
    pub fn finite(value: T) -> Result<Self> {
        if value.is_finite() {
            Ok(MaxPlus::Finite(value))
        } else {
            Err(Error::NonFinite {
                index: 0,
                value: value.to_f64_lossy(),
            })
        }
    }

    /// Maps `-inf` to `Bottom` and finite values to `Finite`.
    pub fn from_extended(value: T) -> Result<Self> {
        if value == T::neg_infinity() {
            Ok(MaxPlus::Bottom)
        } else {
            Self::finite(value)
        }
    }

    /// Inverse of [`MaxPlus::from_extended`].
    pub fn to_extended(self) -> T {
        match self {
            MaxPlus::Bottom => T::neg_infinity(),
            MaxPlus::Finite(v) => v,
        }
    }

    pub fn value(self) -> Option<T> {
        match self {
            MaxPlus::Bottom => None,
            MaxPlus::Finite(v) => Some(v),
        }
    }

    pub fn is_bottom(self) -> bool {
        matches!(self, MaxPlus::Bottom)
    }

    /// `a ⊕ b = max(a, b)`.
    pub fn oplus(self, other: Self) -> Self {
        match (self, other) {
            (MaxPlus::Bottom, b) => b,
            (a, MaxPlus::Bottom) => a,
            (MaxPlus::Finite(a), MaxPlus::Finite(b)) => MaxPlus::Finite(a.max(b)),
        }
    }

    /// `a ⊙ b = a + b`, with `Bottom` absorbing.
    pub fn otimes(self, other: Self) -> Self {
        match (self, other) {
            (MaxPlus::Finite(a), MaxPlus::Finite(b)) => MaxPlus::Finite(a + b),
            _ => MaxPlus::Bottom,
        }
    }

    /// Multiplicative inverse `-a`.
    pub fn inv(self) -> Result<Self> {
        match self {
            MaxPlus::Bottom => Err(Error::BottomNotInvertible),
            MaxPlus::Finite(a) => Ok(MaxPlus::Finite(-a)),
        }
    }

    /// Standard order: `a ≼ b` iff `a ⊕ b = b`.
    pub fn leq(self, other: Self) -> bool {
        self.oplus(other) == other
    }

    /// Total order on well-formed values (finite payloads).
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

impl<T: Real> From<T> for MaxPlus<T> {
    /// Non-finite inputs other than `-inf` are not checked here; prefer
    /// [`MaxPlus::from_extended`] for untrusted data.
    fn from(value: T) -> Self {
        if value == T::neg_infinity() {
            MaxPlus::Bottom
        } else {
            MaxPlus::Finite(value)
        }
    }
}

impl<T: Real> fmt::Display for MaxPlus<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxPlus::Bottom => f.write_str("⊥"),
            MaxPlus::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl<T: Real + Serialize> Serialize for MaxPlus<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.value().serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for MaxPlus<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match Option::<T>::deserialize(deserializer)? {
            None => Ok(MaxPlus::Bottom),
            Some(v) => MaxPlus::finite(v).map_err(serde::de::Error::custom),
        }
    }
}
