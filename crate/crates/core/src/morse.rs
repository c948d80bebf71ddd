//! Morse indices of linear functionals on PL sets, Morse-data slices and the
//! level-crossing identities.
//!
//! The index convention follows the superlevel form
//! `i(ξ, x) = 1 - χ(upper link)`: critical points are the vertices where a
//! generic `ξ` is locally maximized in some direction, i.e. the critical
//! points of `-ξ`. For generic covectors only vertices can carry a nonzero
//! index; the level identities below are the independent subdivision oracles
//! guarding that reduction.

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::euler::{cell_sign, chi_o};
use crate::geometry::Covector;
use crate::sampling::require_generic;
use crate::subdivide::subdivide_by_level;

/// One critical vertex of a Morse-data slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceAtom {
    pub vertex: u32,
    pub index: i64,
    pub level: f64,
}

/// The Morse-data slice of a complex along a generic covector: all vertices
/// with nonzero index, with their levels, sorted by level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorseDataSlice {
    pub xi: Covector,
    pub atoms: Vec<SliceAtom>,
}

impl MorseDataSlice {
    pub fn empty(xi: Covector) -> Self {
        MorseDataSlice { xi, atoms: Vec::new() }
    }

    /// Sum of all indices; equals `χ_top` of the complex for generic `ξ`.
    pub fn total_index(&self) -> i64 {
        self.atoms.iter().map(|a| a.index).sum()
    }

    /// Sum of `|index|` over the atoms (the mass of the slice as a measure).
    pub fn mass(&self) -> i64 {
        self.atoms.iter().map(|a| a.index.abs()).sum()
    }

    /// Per-level index sums, ascending by level.
    pub fn index_profile(&self) -> IndexProfile {
        let mut levels: Vec<(f64, i64)> = Vec::new();
        for a in &self.atoms {
            match levels.last_mut() {
                Some((t, m)) if *t == a.level => *m += a.index,
                _ => levels.push((a.level, a.index)),
            }
        }
        IndexProfile { levels }
    }
}

/// Per-level sums of Morse indices; the total over all levels is the
/// topological Euler characteristic of the complex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexProfile {
    pub levels: Vec<(f64, i64)>,
}

impl IndexProfile {
    pub fn total(&self) -> i64 {
        self.levels.iter().map(|(_, m)| m).sum()
    }

    /// Index sum at an exact level (0 if the level carries no atom).
    pub fn at(&self, t: f64) -> i64 {
        self.levels.iter().find(|(l, _)| *l == t).map_or(0, |(_, m)| *m)
    }
}

/// The Morse index of `ξ` at vertex `v`: `1 - χ` of the full upper-link
/// subcomplex. Points outside the complex have index 0 by convention.
pub fn morse_index(cx: &SimplicialComplex, xi: &Covector, v: u32) -> Result<i64> {
    morse_index_eps(cx, xi, v, cx.tie_eps())
}

pub fn morse_index_eps(cx: &SimplicialComplex, xi: &Covector, v: u32, tie_eps: f64) -> Result<i64> {
    let upper = cx.upper_link_cell_indices(v, xi, tie_eps)?;
    let chi: i64 = upper.iter().map(|&ci| cell_sign(cx.cell(ci).dim())).sum();
    Ok(1 - chi)
}

/// The Morse-data slice: all vertices with nonzero index. Requires `ξ`
/// generic on the whole complex (pairwise distinct vertex values).
pub fn morse_slice(cx: &SimplicialComplex, xi: &Covector) -> Result<MorseDataSlice> {
    morse_slice_eps(cx, xi, cx.tie_eps())
}

pub fn morse_slice_eps(cx: &SimplicialComplex, xi: &Covector, tie_eps: f64) -> Result<MorseDataSlice> {
    if cx.is_empty() {
        return Ok(MorseDataSlice::empty(xi.clone()));
    }
    require_generic(cx, xi, tie_eps)?;
    let mut atoms = Vec::new();
    for v in 0..cx.vertex_count() as u32 {
        let index = morse_index_eps(cx, xi, v, tie_eps)?;
        if index != 0 {
            atoms.push(SliceAtom { vertex: v, index, level: xi.eval(cx.position(v)) });
        }
    }
    atoms.sort_by(|a, b| a.level.total_cmp(&b.level));
    Ok(MorseDataSlice { xi: xi.clone(), atoms })
}

/// `χ` of a superlevel set, computed exactly through [`subdivide_by_level`].
///
/// * `closed = true`: `χ_top(X ∩ {ξ ≥ c})` (the subdivided superlevel part is
///   compact, so `χ_top = χ_o`).
/// * `closed = false`: `χ_o(X ∩ {ξ > c})`.
pub fn superlevel_chi(cx: &SimplicialComplex, xi: &Covector, c: f64, closed: bool) -> Result<i64> {
    let refinement = subdivide_by_level(cx, xi, c)?;
    let sel = if closed { refinement.superlevel_closed() } else { refinement.superlevel_open() };
    Ok(chi_o(&refinement.complex, &sel))
}

/// `χ_o` of the exact level fiber `X ∩ {ξ = t}`.
pub fn fiber_chi(cx: &SimplicialComplex, xi: &Covector, t: f64) -> Result<i64> {
    let refinement = subdivide_by_level(cx, xi, t)?;
    Ok(chi_o(&refinement.complex, &refinement.fiber()))
}

/// Half the gap from `t` to the next strictly larger vertex level (1.0 when
/// none exists); small enough that `(t, t + eps]` contains no vertex level.
fn half_gap_above(cx: &SimplicialComplex, xi: &Covector, t: f64) -> f64 {
    let next = cx
        .vertex_values(xi)
        .into_iter()
        .filter(|&v| v > t)
        .fold(f64::INFINITY, f64::min);
    if next.is_finite() {
        (next - t) / 2.0
    } else {
        1.0
    }
}

/// The level identity at `t`: the per-level index sum against the drop of
/// the closed superlevel `χ` across the level. Both sides are returned for
/// assertion; they agree for generic `ξ`.
///
/// `lhs = Σ_{ξ(v)=t} i(ξ,v)`,
/// `rhs = χ_top(X_{ξ≥t}) - χ_top(X_{ξ≥t+ε})` with `ε` below the gap to the
/// next vertex level.
pub fn index_sum_check(cx: &SimplicialComplex, xi: &Covector, t: f64) -> Result<(i64, i64)> {
    let slice = morse_slice(cx, xi)?;
    let lhs = slice.index_profile().at(t);
    let eps = half_gap_above(cx, xi, t);
    let rhs = superlevel_chi(cx, xi, t, true)? - superlevel_chi(cx, xi, t + eps, true)?;
    Ok((lhs, rhs))
}

/// The jump identity at `t`: the per-level index sum against the drop of the
/// fiber `χ_o` across the level, via the one-sided fiber on the superlevel
/// side of the critical value:
///
/// `lhs = Σ_{ξ(v)=t} i(ξ,v)`, `rhs = χ_o(X_{ξ=t}) - χ_o(X_{ξ=t+0})`.
///
/// With the superlevel index convention the one-sided fiber is approached
/// from above; `X_{ξ=t+0}` is computed exactly at `t + ε` by local
/// triviality between vertex levels.
pub fn jump_identity_check(cx: &SimplicialComplex, xi: &Covector, t: f64) -> Result<(i64, i64)> {
    let slice = morse_slice(cx, xi)?;
    let lhs = slice.index_profile().at(t);
    let eps = half_gap_above(cx, xi, t);
    let rhs = fiber_chi(cx, xi, t)? - fiber_chi(cx, xi, t + eps)?;
    Ok((lhs, rhs))
}

/// Convenience wrapper validating a caller-supplied covector before use.
pub fn checked_unit_covector(cx: &SimplicialComplex, coords: &[f64]) -> Result<Covector> {
    if coords.len() != cx.ambient_dim() {
        return Err(Error::InvalidInput(format!(
            "covector has {} coordinates, ambient dimension is {}",
            coords.len(),
            cx.ambient_dim()
        )));
    }
    Covector::unit(coords)
}
