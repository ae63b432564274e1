//! Input file schemas.
//!
//! Problem file:
//!
//! ```json
//! {"dim": 2,
//!  "generators": [[0, 0], [2, 0]],
//!  "map": {"type": "tropical_linear", "matrix": [[-1, 2], [null, 0]]},
//!  "functionals": [[0, null]],
//!  "x0": [1, 0]}
//! ```
//!
//! `map` may also be `{"type": "expr", "coords": ["max(x0-1,x1)", "x1"]}`.
//! A polytope file is a problem file without the optional keys.

use serde::Deserialize;

use crate::error::{check_dim, Error, Result};
use crate::map::MapExpr;
use crate::matrix::Matrix;
use crate::polytope::Polytope;
use crate::semiring::MaxPlus;
use crate::space::{Functional, Vector};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemRepr {
    dim: usize,
    generators: Vec<Vec<f64>>,
    #[serde(default)]
    map: Option<MapRepr>,
    #[serde(default)]
    functionals: Option<Vec<Vec<Option<f64>>>>,
    #[serde(default)]
    x0: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum MapRepr {
    TropicalLinear { matrix: Vec<Vec<Option<f64>>> },
    Expr { coords: Vec<String> },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Wrapped { matrix: Vec<Vec<Option<f64>>> },
    Bare(Vec<Vec<Option<f64>>>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRepr {
    x: Vec<f64>,
    y: Vec<f64>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn matrix_from(rows: Vec<Vec<Option<f64>>>) -> Result<Matrix<f64>> {
    Matrix::new(
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| v.map_or(Ok(MaxPlus::Bottom), MaxPlus::finite))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

fn functional_from(coeffs: Vec<Option<f64>>) -> Result<Functional<f64>> {
    Functional::new(
        coeffs
            .into_iter()
            .map(|v| v.map_or(Ok(MaxPlus::Bottom), MaxPlus::finite))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// A validated problem file.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub polytope: Polytope<f64>,
    pub map: Option<MapExpr<f64>>,
    pub functionals: Option<Vec<Functional<f64>>>,
    pub x0: Option<Vector<f64>>,
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ProblemRepr = serde_json::from_str(text).map_err(parse_err)?;
        let generators = repr
            .generators
            .iter()
            .map(|g| Vector::from_f64s(g))
            .collect::<Result<Vec<_>>>()?;
        let polytope = Polytope::new(generators)?;
        check_dim(repr.dim, polytope.dim())?;
        let map = match repr.map {
            None => None,
            Some(MapRepr::TropicalLinear { matrix }) => Some(MapExpr::linear(matrix_from(matrix)?)),
            Some(MapRepr::Expr { coords }) => Some(MapExpr::parse_coords(&coords)?),
        };
        if let Some(m) = &map {
            check_dim(repr.dim, m.dim())?;
        }
        let functionals = match repr.functionals {
            None => None,
            Some(fs) if fs.is_empty() => return Err(Error::Parse("functionals must be non-empty".into())),
            Some(fs) => Some(
                fs.into_iter()
                    .map(|c| {
                        let w = functional_from(c)?;
                        check_dim(repr.dim, w.dim())?;
                        Ok(w)
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let x0 = repr.x0.map(|x| Vector::from_f64s(&x)).transpose()?;
        if let Some(x) = &x0 {
            check_dim(repr.dim, x.dim())?;
        }
        Ok(Problem {
            polytope,
            map,
            functionals,
            x0,
        })
    }

    pub fn require_map(&self) -> Result<&MapExpr<f64>> {
        self.map
            .as_ref()
            .ok_or_else(|| Error::Parse("problem file has no \"map\"".into()))
    }

    /// The listed functionals, or the coordinate functionals by default.
    pub fn functionals_or_coordinates(&self) -> Vec<Functional<f64>> {
        self.functionals
            .clone()
            .unwrap_or_else(|| Functional::coordinates(self.polytope.dim()))
    }
}

/// Reads a matrix from `{"matrix": [...]}`, a bare array of rows, or a
/// problem file with a tropical-linear map.
pub fn matrix_from_json(text: &str) -> Result<Matrix<f64>> {
    if let Ok(file) = serde_json::from_str::<MatrixFile>(text) {
        let rows = match file {
            MatrixFile::Wrapped { matrix } | MatrixFile::Bare(matrix) => matrix,
        };
        return matrix_from(rows);
    }
    let problem = Problem::from_json(text)?;
    match problem.map {
        Some(MapExpr::TropicalLinear(a)) => Ok(a),
        _ => Err(Error::Parse("expected a matrix or a tropical_linear map".into())),
    }
}

/// Reads `{"x": [...], "y": [...]}`.
pub fn pair_from_json(text: &str) -> Result<(Vector<f64>, Vector<f64>)> {
    let repr: PairRepr = serde_json::from_str(text).map_err(parse_err)?;
    let x = Vector::from_f64s(&repr.x)?;
    let y = Vector::from_f64s(&repr.y)?;
    check_dim(x.dim(), y.dim())?;
    Ok((x, y))
}

/// Parses an inline JSON vector such as `[3, 0]`.
pub fn vector_from_json(text: &str) -> Result<Vector<f64>> {
    let xs: Vec<f64> = serde_json::from_str(text).map_err(parse_err)?;
    Vector::from_f64s(&xs)
}
