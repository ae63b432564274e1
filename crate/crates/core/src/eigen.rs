//! The max-plus eigenproblem `A ⊙ v = λ ⊙ v`: Karp's maximum cycle mean
//! and eigenvectors read off the Kleene star at a critical node.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::real::Real;
use crate::semiring::MaxPlus;
use crate::space::Vector;

/// Maximum cycle mean of the digraph with an edge `i → j` wherever `A_ij`
/// is finite.
///
/// Karp's recurrence with every node as a source: `D_0 = 0` and
/// `D_k(i) = max_j (A_ij + D_{k-1}(j))`, then
/// `λ = max_i min_{k<n} (D_n(i) - D_k(i)) / (n - k)`.
pub fn karp_eigenvalue<T: Real>(a: &Matrix<T>) -> Result<T> {
    let n = a.dim();
    let mut d: Vec<Vec<MaxPlus<T>>> = Vec::with_capacity(n + 1);
    d.push(vec![MaxPlus::unit(); n]);
    for k in 1..=n {
        let next = a.apply_extended(&d[k - 1])?;
        d.push(next);
    }
    let mut best: Option<T> = None;
    for i in 0..n {
        let MaxPlus::Finite(dn) = d[n][i] else { continue };
        let mut worst: Option<T> = None;
        for (k, dk) in d.iter().enumerate().take(n) {
            if let MaxPlus::Finite(dk) = dk[i] {
                let mean = (dn - dk) / T::from_usize(n - k).expect("small integer");
                worst = Some(worst.map_or(mean, |w| w.min(mean)));
            }
        }
        if let Some(w) = worst {
            best = Some(best.map_or(w, |b| b.max(w)));
        }
    }
    best.ok_or(Error::NoCycle)
}

/// Nodes lying on a cycle of mean `λ`, in increasing order.
///
/// Node `i` is critical iff some closed walk of length `k ≤ n` through `i`
/// has mean `λ`, i.e. `(A^k)_ii / k = λ`. Comparison uses a relative slack
/// of `rel_tol`.
pub fn critical_nodes<T: Real>(a: &Matrix<T>, lambda: T, rel_tol: T) -> Vec<usize> {
    let n = a.dim();
    let slack = rel_tol * T::one().max(lambda.abs());
    let mut best = vec![MaxPlus::<T>::Bottom; n];
    let mut power = a.clone();
    for k in 1..=n {
        let kt = T::from_usize(k).expect("small integer");
        for (i, b) in best.iter_mut().enumerate() {
            if let MaxPlus::Finite(w) = power.get(i, i) {
                *b = b.oplus(MaxPlus::Finite(w / kt));
            }
        }
        if k < n {
            power = power.otimes(a).expect("same dimension");
        }
    }
    best.iter()
        .enumerate()
        .filter_map(|(i, m)| match m {
            MaxPlus::Finite(m) if *m >= lambda - slack => Some(i),
            _ => None,
        })
        .collect()
}

/// An eigenvalue with an eigenvector; `vector` may contain bottom entries
/// when the critical node is not reachable from every node.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair<T> {
    pub lambda: T,
    pub critical_node: usize,
    pub vector: Vec<MaxPlus<T>>,
}

impl<T: Real> Eigenpair<T> {
    /// The eigenvector as a point of `B(T)`, if every entry is finite.
    pub fn finite_vector(&self) -> Option<Vector<T>> {
        let entries: Option<Vec<T>> = self.vector.iter().map(|v| v.value()).collect();
        entries.and_then(|e| Vector::new(e).ok())
    }
}

/// `λ` from Karp and `v` = the Kleene-star column of `(-λ) ⊙ A` at the
/// smallest critical node, shifted so its smallest finite entry is `0`.
pub fn eigenvector<T: Real>(a: &Matrix<T>) -> Result<Eigenpair<T>> {
    let lambda = karp_eigenvalue(a)?;
    let rel_tol = T::epsilon() * T::from_f64(64.0).expect("small constant");
    let critical_node = *critical_nodes(a, lambda, rel_tol)
        .first()
        .ok_or(Error::NoCycle)?;
    let star = a.shift(-lambda).kleene_star();
    let column = star.column(critical_node);
    let low = column
        .iter()
        .filter_map(|c| c.value())
        .fold(T::infinity(), T::min);
    let vector = column
        .into_iter()
        .map(|c| c.otimes(MaxPlus::Finite(-low)))
        .collect();
    Ok(Eigenpair {
        lambda,
        critical_node,
        vector,
    })
}

/// `max_i |(A ⊙ v)_i - (λ + v_i)|`, infinite if the bottom patterns differ.
pub fn eigen_defect<T: Real>(a: &Matrix<T>, lambda: T, v: &[MaxPlus<T>]) -> Result<T> {
    let av = a.apply_extended(v)?;
    Ok(av
        .iter()
        .zip(v)
        .map(|(l, r)| match (*l, r.otimes(MaxPlus::Finite(lambda))) {
            (MaxPlus::Bottom, MaxPlus::Bottom) => T::zero(),
            (MaxPlus::Finite(x), MaxPlus::Finite(y)) => (x - y).abs(),
            _ => T::infinity(),
        })
        .fold(T::zero(), T::max))
}
