//! Subdivision of a complex by the level set of a linear functional.
//!
//! Every crossing edge is split at its geometric cut point by a stellar
//! subdivision; splits are applied complex-wide in canonical edge order, so
//! shared faces always receive compatible cuts. After subdivision every open
//! simplex lies entirely below, on, or above the level.

use std::collections::HashMap;

use crate::complex::{CellSelection, Simplex, SimplicialComplex, MAX_DIM};
use crate::error::{Error, Result};
use crate::geometry::{Covector, Point};

/// The result of [`subdivide_by_level`]: a refinement of the source complex
/// with the same geometric realization, plus the bookkeeping that downstream
/// Euler-integral computations need.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub complex: SimplicialComplex,
    /// For each cell of the refinement, the index of the open cell of the
    /// source complex containing its relative interior. Tracked
    /// combinatorially through the splits; no point location involved.
    pub ancestor: Vec<usize>,
    /// Per refinement vertex: -1 below the level, 0 on it, +1 above.
    pub vertex_side: Vec<i8>,
}

impl Refinement {
    /// Cells lying in the hyperplane `{ξ = t}`.
    pub fn fiber(&self) -> CellSelection {
        self.select(|lo, hi| lo == 0 && hi == 0)
    }

    /// Cells of the closed superlevel set `{ξ ≥ t}` (a subcomplex).
    pub fn superlevel_closed(&self) -> CellSelection {
        self.select(|lo, _| lo >= 0)
    }

    /// Cells whose open simplex lies in `{ξ > t}`.
    pub fn superlevel_open(&self) -> CellSelection {
        self.select(|lo, hi| lo >= 0 && hi > 0)
    }

    /// Cells of the closed sublevel set `{ξ ≤ t}`.
    pub fn sublevel_closed(&self) -> CellSelection {
        self.select(|_, hi| hi <= 0)
    }

    /// Cells whose open simplex lies in `{ξ < t}`.
    pub fn sublevel_open(&self) -> CellSelection {
        self.select(|lo, hi| lo < 0 && hi <= 0)
    }

    fn select(&self, keep: impl Fn(i8, i8) -> bool) -> CellSelection {
        CellSelection::from_predicate(&self.complex, |_, s| {
            let lo = s.vertices().iter().map(|&v| self.vertex_side[v as usize]).min().unwrap();
            let hi = s.vertices().iter().map(|&v| self.vertex_side[v as usize]).max().unwrap();
            keep(lo, hi)
        })
    }
}

/// Refines `cx` so that every open simplex lies entirely in `{ξ < t}`,
/// `{ξ = t}` or `{ξ > t}`. The realization is unchanged.
pub fn subdivide_by_level(cx: &SimplicialComplex, xi: &Covector, t: f64) -> Result<Refinement> {
    if cx.intrinsic_dim() > MAX_DIM {
        return Err(Error::UnsupportedDimension(format!(
            "subdivision supports dimension <= {MAX_DIM}"
        )));
    }
    if cx.is_empty() {
        return Ok(Refinement {
            complex: cx.clone(),
            ancestor: Vec::new(),
            vertex_side: Vec::new(),
        });
    }

    let mut positions: Vec<Point> = cx.vertices().to_vec();
    let values = cx.vertex_values(xi);
    let side_of = |val: f64| -> i8 {
        if val < t {
            -1
        } else if val > t {
            1
        } else {
            0
        }
    };
    let mut side: Vec<i8> = values.iter().map(|&v| side_of(v)).collect();

    // Working lattice: (sorted vertex ids, ancestor cell in cx, maximal flag).
    let mut lattice: Vec<(Vec<u32>, usize, bool)> = cx
        .cells()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices().to_vec(), i, false))
        .collect();
    for &m in cx.maximal_cells() {
        lattice[m].2 = true;
    }

    // Crossing edges of the source complex, in canonical order.
    let crossing: Vec<(u32, u32)> = cx
        .cells()
        .iter()
        .filter(|s| s.dim() == 1)
        .map(|s| (s.vertices()[0], s.vertices()[1]))
        .filter(|&(u, w)| side[u as usize] as i32 * side[w as usize] as i32 == -1)
        .collect();

    for (u, w) in crossing {
        let (vu, vw) = (values[u as usize], values[w as usize]);
        let lambda = (t - vu) / (vw - vu);
        let pu = cx.position(u);
        let pw = cx.position(w);
        let coords: Vec<f64> = pu
            .coords()
            .iter()
            .zip(pw.coords())
            .map(|(a, b)| a + lambda * (b - a))
            .collect();
        let p = positions.len() as u32;
        positions.push(Point::new(coords)?);
        side.push(0);

        let mut next: Vec<(Vec<u32>, usize, bool)> = Vec::with_capacity(lattice.len() + 16);
        for (ids, anc, maximal) in lattice {
            let has_u = ids.binary_search(&u).is_ok();
            let has_w = ids.binary_search(&w).is_ok();
            if !(has_u && has_w) {
                next.push((ids, anc, maximal));
                continue;
            }
            let with_p = |drop: &[u32]| -> Vec<u32> {
                let mut out: Vec<u32> =
                    ids.iter().copied().filter(|v| !drop.contains(v)).collect();
                out.push(p);
                out.sort_unstable();
                out
            };
            let half_u = with_p(&[w]);
            let half_w = with_p(&[u]);
            let equator = with_p(&[u, w]);
            next.push((half_u, anc, maximal));
            next.push((half_w, anc, maximal));
            next.push((equator, anc, false));
        }
        lattice = next;
    }

    let maximal: Vec<Simplex> = lattice
        .iter()
        .filter(|(_, _, m)| *m)
        .map(|(ids, _, _)| Simplex::new(ids.clone()).expect("split cells have distinct vertices"))
        .collect();
    let complex = SimplicialComplex::from_maximal_unchecked(positions, maximal)?;

    let by_ids: HashMap<&[u32], usize> =
        lattice.iter().map(|(ids, anc, _)| (ids.as_slice(), *anc)).collect();
    let ancestor: Vec<usize> = complex
        .cells()
        .iter()
        .map(|s| {
            *by_ids
                .get(s.vertices())
                .expect("regenerated lattice matches the tracked one")
        })
        .collect();

    Ok(Refinement { complex, ancestor, vertex_side: side })
}
