//! The two Euler characteristics, constructible functions and integration
//! with respect to the Euler characteristic.
//!
//! `chi_o` is the fully additive signed open-cell count; it agrees with the
//! topological Euler characteristic on compact (face-closed) selections but
//! assigns `(-1)^k` to an open k-cell.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::complex::{CellSelection, SimplicialComplex};
use crate::error::{Error, Result};

/// Sign of an open cell's contribution: `(-1)^dim`.
#[inline]
pub fn cell_sign(dim: usize) -> i64 {
    if dim % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The o-minimal Euler characteristic of a union of open cells:
/// the sum of `(-1)^dim` over the selected open simplices.
pub fn chi_o(cx: &SimplicialComplex, sel: &CellSelection) -> i64 {
    sel.iter_indices().map(|i| cell_sign(cx.cell(i).dim())).sum()
}

/// `chi_o` of the whole complex.
pub fn chi_o_all(cx: &SimplicialComplex) -> i64 {
    cx.cells().iter().map(|s| cell_sign(s.dim())).sum()
}

/// The topological Euler characteristic of a compact subcomplex. On a
/// face-closed selection it coincides with [`chi_o`]; the separate name keeps
/// call sites honest about which invariant they rely on.
pub fn chi_top_compact(cx: &SimplicialComplex, sel: &CellSelection) -> Result<i64> {
    if !sel.is_face_closed(cx) {
        return Err(Error::NotFaceClosed("chi_top_compact requires a subcomplex".into()));
    }
    Ok(chi_o(cx, sel))
}

/// An integer-valued constructible function: one weight per open simplex of a
/// fixed complex.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructibleFunction {
    complex: Arc<SimplicialComplex>,
    weights: Vec<i64>,
}

impl ConstructibleFunction {
    pub fn zero(complex: Arc<SimplicialComplex>) -> Self {
        let weights = vec![0; complex.cell_count()];
        ConstructibleFunction { complex, weights }
    }

    pub fn from_weights(complex: Arc<SimplicialComplex>, weights: Vec<i64>) -> Result<Self> {
        if weights.len() != complex.cell_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} weights, got {}",
                complex.cell_count(),
                weights.len()
            )));
        }
        Ok(ConstructibleFunction { complex, weights })
    }

    /// Indicator function of a union of open cells (weight 1 on selected
    /// cells). For the indicator of a closed set, pass a face-closed
    /// selection.
    pub fn indicator(complex: Arc<SimplicialComplex>, sel: &CellSelection) -> Self {
        let weights = (0..complex.cell_count()).map(|i| i64::from(sel.contains(i))).collect();
        ConstructibleFunction { complex, weights }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, cell: usize) -> i64 {
        self.weights[cell]
    }

    fn check_same_complex(&self, other: &ConstructibleFunction) -> Result<()> {
        if Arc::ptr_eq(&self.complex, &other.complex) || self.complex == other.complex {
            Ok(())
        } else {
            Err(Error::ComplexMismatch)
        }
    }

    /// Pointwise sum; both operands must live on the same complex.
    pub fn add(&self, other: &ConstructibleFunction) -> Result<ConstructibleFunction> {
        self.check_same_complex(other)?;
        let weights = self.weights.iter().zip(&other.weights).map(|(a, b)| a + b).collect();
        Ok(ConstructibleFunction { complex: self.complex.clone(), weights })
    }

    pub fn scale(&self, k: i64) -> ConstructibleFunction {
        let weights = self.weights.iter().map(|w| w * k).collect();
        ConstructibleFunction { complex: self.complex.clone(), weights }
    }

    /// The finite range of the function together with the level-set
    /// selections `f^{-1}(n)` for each nonzero value `n`.
    pub fn level_sets(&self) -> BTreeMap<i64, CellSelection> {
        let mut out: BTreeMap<i64, CellSelection> = BTreeMap::new();
        for (i, &w) in self.weights.iter().enumerate() {
            if w != 0 {
                out.entry(w)
                    .or_insert_with(|| CellSelection::none(&self.complex))
                    .insert(i);
            }
        }
        out
    }
}

/// The Euler integral `∫ f dχ`: the sum over all open cells of
/// `weight(cell) * (-1)^dim(cell)`.
pub fn euler_integral(f: &ConstructibleFunction) -> i64 {
    f.weights()
        .iter()
        .enumerate()
        .map(|(i, &w)| w * cell_sign(f.complex().cell(i).dim()))
        .sum()
}
