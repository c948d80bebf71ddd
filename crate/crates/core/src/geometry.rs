//! Points of the ambient Euclidean space and covectors of its dual.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the ambient Euclidean space, stored as its coordinate vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("point needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn sub(&self, other: &Point) -> Vec<f64> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// An element of the dual space; evaluation on points is the dot product.
///
/// Covectors used as elements of the unit sphere of the dual must have unit
/// norm (see [`Covector::is_unit`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Covector(pub Vec<f64>);

pub const UNIT_NORM_TOL: f64 = 1e-12;

impl Covector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("covector needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(Covector(coords))
    }

    /// Unit covector in the direction of `coords`.
    pub fn unit(coords: &[f64]) -> Result<Self> {
        let n = norm(coords);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("cannot normalize zero covector".into()));
        }
        Covector::new(coords.iter().map(|c| c / n).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// The pairing `⟨ξ, x⟩ = ξ(x)`.
    pub fn eval(&self, x: &Point) -> f64 {
        dot(&self.0, &x.0)
    }

    pub fn dot_vec(&self, v: &[f64]) -> f64 {
        dot(&self.0, v)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_NORM_TOL
    }

    pub fn negated(&self) -> Covector {
        Covector(self.0.iter().map(|c| -c).collect())
    }

    pub fn scaled(&self, lambda: f64) -> Covector {
        Covector(self.0.iter().map(|c| c * lambda).collect())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// 90 degree counterclockwise rotation in the plane.
pub fn rot90(a: &[f64]) -> [f64; 2] {
    [-a[1], a[0]]
}
